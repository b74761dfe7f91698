// Rotating the initial state rotates the whole trajectory.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tetraform::simulator::simulate_from;
use tetraform::sphere::sample_rotation_with;
use tetraform::{AttitudeEnsemble, GainSpec, SimConfig, TopologySpec};

pub fn run_example() -> tetraform::Result<()> {
    let mut config = SimConfig::seeded(TopologySpec::Complete { n: 4 }, GainSpec::Exponential, 0);
    config.horizon = 20.0;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..3 {
        let start = AttitudeEnsemble::random(4, seed)?;
        let q = sample_rotation_with(&mut rng);
        let a = simulate_from(&config, start.rotated(&q))?;
        let b = simulate_from(&config, start)?;
        let worst = a.states.iter().zip(&b.states).map(|(x, y)| x.max_distance(&y.rotated(&q))).fold(0.0, f64::max);
        println!("seed {seed}: max deviation over {} samples {worst:.2e}", a.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tetraform::Result<()> {
    run_example()
}
