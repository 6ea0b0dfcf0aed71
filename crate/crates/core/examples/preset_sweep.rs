// Loads a bundled preset, shrinks it, runs it and writes the result files.
//
//     cargo run --release --example preset_sweep

use spectrum_game::commands::cmd_sweep;
use spectrum_game::config::{Overrides, RunConfig};

pub fn run_example() -> spectrum_game::Result<Vec<std::path::PathBuf>> {
    let mut config = RunConfig::preset("sweep-cells")?;
    config.apply(&Overrides {
        topologies: Some(2),
        trials: Some(10),
        out_dir: Some(std::env::temp_dir().join("spectrum-game-preset")),
        ..Overrides::default()
    });
    if let Some(e) = config.experiment.as_mut() {
        e.ne_runs = 20;
    }
    let out = cmd_sweep(&config)?;
    print!("{}", out.summary);
    Ok(out.files)
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
