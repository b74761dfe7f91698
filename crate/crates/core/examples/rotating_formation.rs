// Graph 2 with k = 1: agent 1 stays put while the other three spin about it.

use std::f64::consts::PI;

use tetraform::simulator::{agent_drift, formation_error, rotation_rate_estimate};
use tetraform::{simulate, GainSpec, SimConfig, TopologySpec};

pub fn run_example() -> tetraform::Result<()> {
    for p in [0u8, 1] {
        let mut config =
            SimConfig::seeded(TopologySpec::RotatingTetrahedron { k: 1, p }, GainSpec::AffineCosine { a: 1.0 }, 3);
        config.horizon = 60.0;
        config.stride = 50;
        let traj = simulate(&config)?;
        let last = traj.final_state().expect("non-empty trajectory");
        println!("p = {p}: final formation error {:.2e}", formation_error(last));
        println!("  drift of agent 1 over the last 20 time units: {:.2e}", agent_drift(&traj, 1, 20.0)?);
        for agent in 2..=4 {
            let est = rotation_rate_estimate(&traj, agent, 1, 20.0)?;
            println!(
                "  agent {agent}: rate {:+.10} period {:.6} (fit rms {:.1e})",
                est.rate, est.period, est.residual_rms
            );
        }
        println!("  chirality of the final state: {:+}", last.chirality());
    }
    println!("expected |rate| = {:.10}, period = {:.6}", 3f64.sqrt() / 3.0, 2.0 * 3f64.sqrt() * PI);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tetraform::Result<()> {
    run_example()
}
