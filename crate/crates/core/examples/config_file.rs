//! Experiment settings from a `key = value` file, overridden in code the
//! way command-line flags override the file.
use fraq::bench::{parse_config_text, ExperimentConfig};

const TEXT: &str = "
# Table-3 style study
scheme  = sbd, fastsbd
pairs   = 0.2:0.4, 0.3:0.4
a       = -1
grid_m  = 1023
taus    = 1/20, 1/40, 1/80, 1/160, 1/320
ref_tau = 1/640
init    = b
";

fn main() -> fraq::Result<()> {
    let file = parse_config_text(TEXT)?;
    let flags = vec![("grid-m".to_string(), "511".to_string())];
    let cfg = ExperimentConfig::resolve(&file, &flags)?;
    cfg.validate_study()?;
    print!("{}", cfg.to_text());
    Ok(())
}
