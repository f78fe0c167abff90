fn main() {
    std::process::exit(rosbid::run_cli(std::env::args().skip(1)));
}
