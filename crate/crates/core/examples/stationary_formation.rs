// Four agents on a complete graph settle into the regular tetrahedron.
// Prints the pair cosines and the Lyapunov value along the way.

use tetraform::simulator::{converged_at, formation_error, CONVERGENCE_HOLD, CONVERGENCE_TOL};
use tetraform::{simulate, GainSpec, SimConfig, TopologySpec};

pub fn run_example() -> tetraform::Result<()> {
    for gain in [GainSpec::AffineCosine { a: 1.0 }, GainSpec::Exponential] {
        let mut config = SimConfig::seeded(TopologySpec::Complete { n: 4 }, gain, 1);
        config.horizon = 60.0;
        config.stride = 5000;
        let traj = simulate(&config)?;
        println!("gain {gain:?}");
        println!("{:>6}  {:>10}  {:>10}  cosines", "t", "V", "error");
        for (k, s) in traj.states.iter().enumerate() {
            let cos: Vec<String> = traj.samples[k].cosines.iter().map(|c| format!("{c:+.4}")).collect();
            println!(
                "{:>6.1}  {:>10.6}  {:>10.3e}  {}",
                traj.times[k],
                traj.samples[k].lyapunov,
                formation_error(s),
                cos.join(" ")
            );
        }
        match converged_at(&traj, CONVERGENCE_TOL, CONVERGENCE_HOLD) {
            Some(t) => println!("within {CONVERGENCE_TOL:e} of the tetrahedron from t = {t:.1}\n"),
            None => println!("not converged within T = {}\n", config.horizon),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tetraform::Result<()> {
    run_example()
}
