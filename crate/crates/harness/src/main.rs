fn main() -> anyhow::Result<()> {
    aspect_harness::cli::main()
}
