// Drives the `simulate` and `sweep` subcommands from code and recomputes the
// manifest summary from the CSV that was written.

use std::fs;

use tetraform::cli::{cmd_simulate, cmd_sweep, summarize};
use tetraform::simulator::csv::read_trajectory;

pub fn run_example() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join(format!("tetraform_example_{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let config = dir.join("config.json");
    fs::write(
        &config,
        r#"{"initial": {"random": {"seed": 5}}, "topology": {"kind": "rotating_tetrahedron", "k": 1, "p": 1},
            "gain": "affine_cosine a=1", "T": 60, "stride": 50}"#,
    )?;

    let manifest = cmd_simulate(&config, &dir.join("run"))?;
    println!("{}", serde_json::to_string_pretty(&manifest.summary)?);
    let csv = fs::File::open(dir.join("run").join(&manifest.trajectory))?;
    let again = summarize(&read_trajectory(std::io::BufReader::new(csv))?, &manifest.config.topology);
    println!("summary recomputed from CSV matches: {}", again == manifest.summary);

    let sweep = cmd_sweep(&config, 4, &dir.join("sweep"))?;
    println!("sweep: {}/{} converged, max final error {:?}", sweep.converged, sweep.seeds, sweep.max_final_error);
    fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
