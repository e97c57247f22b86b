fn main() {
    // die quietly when the consumer closes the pipe (e.g. `boxdot ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(boxdot::cli::run());
}
