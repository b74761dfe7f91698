//! Minimization of `G(X) = Σ cos²xᵢ + cos xᵢ` over `xᵢ ∈ [0, π]`, `Σ xᵢ = 2π`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

/// One representative of each stationary family, with its objective value.
pub const KKT_STATIONARY_POINTS: [([f64; 4], f64); 3] = [
    ([PI / 2.0, PI / 2.0, PI / 2.0, PI / 2.0], 0.0),
    ([0.0, 2.0 * PI / 3.0, 2.0 * PI / 3.0, 2.0 * PI / 3.0], 1.25),
    ([0.0, 0.0, PI, PI], 4.0),
];

pub fn kkt_objective(x: &[f64; 4]) -> f64 {
    x.iter().map(|t| t.cos() * t.cos() + t.cos()).sum()
}

/// `∂G/∂xᵢ = -sin xᵢ (2 cos xᵢ + 1)`.
pub fn kkt_objective_gradient(x: &[f64; 4]) -> [f64; 4] {
    x.map(|t| -t.sin() * (2.0 * t.cos() + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KktOracleResult {
    pub min_value: f64,
    pub argmin: [f64; 4],
    pub grid_value: f64,
    pub grid_argmin: [f64; 4],
    pub evaluations: usize,
}

/// Completes `(x₁, x₂, x₃)` with `x₄ = 2π - x₁ - x₂ - x₃`, or `None` if infeasible.
fn complete(y: &[f64; 3]) -> Option<[f64; 4]> {
    let x4 = 2.0 * PI - y[0] - y[1] - y[2];
    let x = [y[0], y[1], y[2], x4];
    x.iter().all(|t| (0.0..=PI).contains(t)).then_some(x)
}

fn reduced(y: &[f64; 3]) -> f64 {
    complete(y).map_or(f64::INFINITY, |x| kkt_objective(&x))
}

/// Exhaustive search over the grid `xᵢ = kπ/grid_n` of the feasible simplex,
/// then Nelder-Mead refinement from the best cell.
pub fn kkt_minimize_oracle(grid_n: usize) -> KktOracleResult {
    let grid_n = grid_n.max(1);
    let step = PI / grid_n as f64;
    let (grid_value, grid_y, count) = (0..=grid_n)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::INFINITY, [0.0; 3], 0usize);
            for j in 0..=grid_n {
                for k in 0..=grid_n {
                    let y = [i as f64 * step, j as f64 * step, k as f64 * step];
                    let v = reduced(&y);
                    if v.is_finite() {
                        best.2 += 1;
                        if v < best.0 {
                            best.0 = v;
                            best.1 = y;
                        }
                    }
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, [0.0; 3], 0),
            |a, b| {
                let count = a.2 + b.2;
                if b.0 < a.0 {
                    (b.0, b.1, count)
                } else {
                    (a.0, a.1, count)
                }
            },
        );
    let (y, value, evals) = nelder_mead(reduced, grid_y, step);
    let grid_argmin = complete(&grid_y).unwrap_or([f64::NAN; 4]);
    let (min_value, argmin) =
        if value <= grid_value { (value, complete(&y).unwrap_or(grid_argmin)) } else { (grid_value, grid_argmin) };
    KktOracleResult { min_value, argmin, grid_value, grid_argmin, evaluations: count + evals }
}

/// Standard Nelder-Mead in three variables; returns `(argmin, min, evaluations)`.
fn nelder_mead(f: impl Fn(&[f64; 3]) -> f64, start: [f64; 3], scale: f64) -> ([f64; 3], f64, usize) {
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    let mut evals = 0;
    let eval = |p: [f64; 3], evals: &mut usize| {
        *evals += 1;
        (p, f(&p))
    };
    simplex.push(eval(start, &mut evals));
    for d in 0..3 {
        // step inward (towards the simplex interior) when the outward vertex is infeasible
        let mut p = start;
        p[d] += scale;
        let mut v = eval(p, &mut evals);
        if !v.1.is_finite() {
            p[d] = start[d] - scale;
            v = eval(p, &mut evals);
        }
        simplex.push(v);
    }

    let lerp = |a: &[f64; 3], b: &[f64; 3], t: f64| -> [f64; 3] { std::array::from_fn(|k| a[k] + t * (b[k] - a[k])) };
    for _ in 0..20_000 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0;
        let size =
            simplex[1..].iter().flat_map(|(p, _)| (0..3).map(move |k| (p[k] - best[k]).abs())).fold(0.0, f64::max);
        if size < 1e-13 {
            break;
        }
        let centroid: [f64; 3] = std::array::from_fn(|k| simplex[..3].iter().map(|(p, _)| p[k]).sum::<f64>() / 3.0);
        let worst = simplex[3];
        let refl = eval(lerp(&centroid, &worst.0, -1.0), &mut evals);
        if refl.1 < simplex[0].1 {
            let exp = eval(lerp(&centroid, &worst.0, -2.0), &mut evals);
            simplex[3] = if exp.1 < refl.1 { exp } else { refl };
        } else if refl.1 < simplex[2].1 {
            simplex[3] = refl;
        } else {
            let contr = if refl.1 < worst.1 {
                eval(lerp(&centroid, &refl.0, 0.5), &mut evals)
            } else {
                eval(lerp(&centroid, &worst.0, 0.5), &mut evals)
            };
            if contr.1 < worst.1.min(refl.1) {
                simplex[3] = contr;
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    *v = eval(lerp(&best, &v.0, 0.5), &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0, simplex[0].1, evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn objective_values() {
        for (x, v) in KKT_STATIONARY_POINTS {
            assert_abs_diff_eq!(kkt_objective(&x), v, epsilon = 1e-15);
            assert_abs_diff_eq!(x.iter().sum::<f64>(), 2.0 * PI, epsilon = 1e-15);
        }
    }

    #[test]
    fn stationary_points_satisfy_kkt() {
        // interior coordinates share one multiplier; coordinates on a bound may differ
        for (x, _) in KKT_STATIONARY_POINTS {
            let g = kkt_objective_gradient(&x);
            let interior: Vec<f64> = (0..4).filter(|&i| x[i] > 0.0 && x[i] < PI).map(|i| g[i]).collect();
            for w in interior.windows(2) {
                assert_abs_diff_eq!(w[0], w[1], epsilon = 1e-14);
            }
        }
        // at bounds the gradient vanishes because sin xᵢ = 0
        assert_eq!(kkt_objective_gradient(&[0.0, 0.0, PI, PI]).map(|v| v.abs() < 1e-15), [true; 4]);
    }

    #[test]
    fn oracle_finds_the_quarter_point() {
        for n in [60, 61, 97] {
            let r = kkt_minimize_oracle(n);
            assert!(r.min_value.abs() < 1e-8, "n = {n}: {r:?}");
            for t in r.argmin {
                assert!((t - PI / 2.0).abs() < 1e-3, "n = {n}: {r:?}");
            }
            assert!(r.min_value <= r.grid_value);
        }
    }

    #[test]
    fn infeasible_points_are_skipped() {
        assert!(complete(&[PI, PI, PI]).is_none());
        assert!(complete(&[0.0, 0.0, 0.0]).is_none());
        assert!(complete(&[PI / 2.0; 3]).is_some());
    }
}
