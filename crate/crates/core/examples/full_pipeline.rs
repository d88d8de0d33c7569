//! Builds, writes and re-verifies a bundle. Pass the output directory as
//! the first argument (defaults to a temporary location).
use holefree::pipeline::{run, verify_bundle, PipelineConfig};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("holefree-bundle"));
    let cfg = PipelineConfig::new(2, 4);
    let bundle = match run(&cfg) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    };
    bundle.write(&dir).expect("write bundle");
    println!("bundle in {}", dir.display());
    println!("{}", bundle.report.guarantee.as_deref().unwrap_or("-"));
    let v = verify_bundle(&dir, &cfg.caps, &cfg.good_caps);
    for c in &v.checks {
        println!("  {:<20} {:?}", c.name, c.status);
    }
    std::process::exit(v.exit_code());
}
