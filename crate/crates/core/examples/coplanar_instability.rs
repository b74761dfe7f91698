// The equatorial cross is an equilibrium, but a 1e-4 nudge sends it to the tetrahedron.

use tetraform::analysis::classify_equilibrium;
use tetraform::simulator::{converged_at, simulate_from, CONVERGENCE_HOLD, CONVERGENCE_TOL};
use tetraform::{affine_cosine_gain, complete_graph, AttitudeEnsemble, GainSpec, SimConfig, TopologySpec};

pub fn run_example() -> tetraform::Result<()> {
    let topo = complete_graph(4)?;
    let gain = affine_cosine_gain(1.0)?;
    let cross = AttitudeEnsemble::cross_formation();
    println!("cross: {:?}", classify_equilibrium(&cross, &topo, &gain)?);

    let mut config = SimConfig::seeded(TopologySpec::Complete { n: 4 }, GainSpec::AffineCosine { a: 1.0 }, 0);
    config.horizon = 40.0;
    config.stride = 100;
    for seed in 0..5 {
        let traj = simulate_from(&config, cross.perturbed(1e-4, seed))?;
        let class = classify_equilibrium(traj.final_state().unwrap(), &topo, &gain)?;
        let t = converged_at(&traj, CONVERGENCE_TOL, CONVERGENCE_HOLD);
        println!("seed {seed}: {:?}, converged at {t:?}", class.tag);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tetraform::Result<()> {
    run_example()
}
