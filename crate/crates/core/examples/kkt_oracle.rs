// Brute-force minimization of sum(cos^2 x + cos x) over the angle simplex.

use tetraform::analysis::{kkt_minimize_oracle, kkt_objective, KKT_STATIONARY_POINTS};

pub fn run_example() -> tetraform::Result<()> {
    for grid in [30, 60, 120] {
        let r = kkt_minimize_oracle(grid);
        println!(
            "grid {grid:>3}: min {:.3e} at {:?} ({} evaluations; grid best {:.3e})",
            r.min_value, r.argmin, r.evaluations, r.grid_value
        );
    }
    for (x, v) in KKT_STATIONARY_POINTS {
        println!("G({x:.4?}) = {:.6} (expected {v})", kkt_objective(&x));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tetraform::Result<()> {
    run_example()
}
