use std::f64::consts::PI;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::{exit, CliError, CliResult};
use crate::analysis::{
    commutes_with_exchange, compare_spectra, cross_in_plane_jacobian, cross_out_of_plane_jacobian, eigenvalues,
    exchange_matrix, kkt_minimize_oracle, kkt_objective, lambda_matrix, lambda_spectrum_analytic, ones_matrix,
    rpy_reference_jacobian, xi_s_jacobian, xi_s_spectrum_analytic, zeta_spectrum_analytic, KKT_STATIONARY_POINTS,
};
use crate::control::{
    affine_cosine_gain, closed_loop_field, exponential_gain, rpy_chart_velocity, rpy_closed_loop_field, GainFunction,
};
use crate::ensemble::AttitudeEnsemble;
use crate::simulator::{formation_error, simulate_from, SimConfig};
use crate::sphere::{rpy_extract, sample_rotation_with};
use crate::topology::{complete_graph, TopologySpec};
use crate::xi::{gram_identity_residual, xi_s_field};
use crate::GainSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    All,
    Lambda,
    Spectra,
    Identity,
    Kkt,
    Invariance,
}

impl FromStr for Selector {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "all" => Self::All,
            "lambda" => Self::Lambda,
            "spectra" => Self::Spectra,
            "identity" => Self::Identity,
            "kkt" => Self::Kkt,
            "invariance" => Self::Invariance,
            _ => {
                return Err(CliError::new(
                    exit::BAD_CONFIG,
                    format!("unknown selector {s:?}; expected all, lambda, spectra, identity, kkt or invariance"),
                ))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyEntry {
    pub name: String,
    pub analytic: Value,
    pub numeric: Value,
    pub error: f64,
    pub pass: bool,
}

impl VerifyEntry {
    fn scalar(name: impl Into<String>, analytic: f64, numeric: f64, tol: f64) -> Self {
        let error = (analytic - numeric).abs();
        Self { name: name.into(), analytic: json!(analytic), numeric: json!(numeric), error, pass: error < tol }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub selector: Selector,
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<VerifyEntry>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

fn spectrum_entry(name: String, analytic: &[f64], numeric: &[nalgebra::Complex<f64>], tol: f64) -> VerifyEntry {
    let r = compare_spectra(analytic, numeric, tol);
    VerifyEntry {
        name,
        analytic: json!(r.analytic),
        numeric: json!(r.numeric.iter().map(|(re, _)| re).collect::<Vec<_>>()),
        error: r.max_error.max(r.max_imag),
        pass: r.matched,
    }
}

fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> VerifyEntry {
    VerifyEntry {
        name: name.into(),
        analytic: Value::Null,
        numeric: json!(err.to_string()),
        error: f64::INFINITY,
        pass: false,
    }
}

fn lambda_checks() -> Vec<VerifyEntry> {
    let mut out = Vec::new();
    for n in 2..=12 {
        let l = lambda_matrix(n).expect("n >= 2");
        match eigenvalues(&l) {
            Ok(ev) => out.push(spectrum_entry(
                format!("lambda_spectrum_n{n}"),
                &lambda_spectrum_analytic(n).unwrap(),
                &ev,
                1e-9,
            )),
            Err(e) => out.push(failed(format!("lambda_spectrum_n{n}"), e)),
        }
        let e = ones_matrix(n);
        let j = exchange_matrix(n);
        let comm = (&e * &j - &j * &e).abs().max();
        out.push(VerifyEntry {
            pass: commutes_with_exchange(&e),
            ..VerifyEntry::scalar(format!("ones_exchange_commute_n{n}"), 0.0, comm, 1e-12)
        });
        let persym = (&l - &j * l.transpose() * &j).abs().max();
        out.push(VerifyEntry::scalar(format!("lambda_persymmetric_n{n}"), 0.0, persym, 1e-12));
    }
    out
}

fn gains() -> [GainFunction; 3] {
    [affine_cosine_gain(1.0).unwrap(), affine_cosine_gain(2.0).unwrap(), exponential_gain()]
}

fn spectra_checks() -> Vec<VerifyEntry> {
    let mut out = Vec::new();
    for g in gains() {
        let name = g.name().replace(' ', "_");
        match rpy_reference_jacobian(&g).and_then(|j| eigenvalues(&j)) {
            Ok(ev) => {
                out.push(spectrum_entry(
                    format!("rpy_tetrahedron_spectrum_{name}"),
                    &zeta_spectrum_analytic(&g),
                    &ev,
                    1e-5,
                ));
                let zeros = ev.iter().filter(|z| z.norm() < 1e-5).count();
                out.push(VerifyEntry::scalar(format!("rpy_center_dimension_{name}"), 3.0, zeros as f64, 0.5));
            }
            Err(e) => out.push(failed(format!("rpy_tetrahedron_spectrum_{name}"), e)),
        }
        let analytic = xi_s_spectrum_analytic(&g);
        match xi_s_jacobian(&g).and_then(|j| eigenvalues(&j)) {
            Ok(ev) => out.push(spectrum_entry(format!("xi_s_spectrum_{name}"), &analytic, &ev, 1e-6)),
            Err(e) => out.push(failed(format!("xi_s_spectrum_{name}"), e)),
        }
        let top = analytic.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        out.push(VerifyEntry {
            name: format!("xi_s_strictly_stable_{name}"),
            analytic: json!("< 0"),
            numeric: json!(top),
            error: top.max(0.0),
            pass: top < 0.0,
        });
    }
    let g = affine_cosine_gain(1.0).unwrap();
    match cross_out_of_plane_jacobian(&g).and_then(|j| eigenvalues(&j)) {
        Ok(ev) => out.push(spectrum_entry("cross_out_of_plane_spectrum".into(), &[-2.0, 0.0, 0.0, 2.0], &ev, 1e-6)),
        Err(e) => out.push(failed("cross_out_of_plane_spectrum", e)),
    }
    match cross_in_plane_jacobian(&g).and_then(|j| eigenvalues(&j)) {
        Ok(ev) => out.push(spectrum_entry("cross_in_plane_spectrum".into(), &[-4.0, -2.0, -2.0, 0.0], &ev, 1e-6)),
        Err(e) => out.push(failed("cross_in_plane_spectrum", e)),
    }
    out
}

fn identity_checks() -> Vec<VerifyEntry> {
    let worst = (0..10_000u64)
        .map(|seed| {
            let s = AttitudeEnsemble::random(4, seed).unwrap();
            let c = s.pair_cosines();
            gram_identity_residual(&[c[0], c[1], c[2], c[3], c[4], c[5]]).abs()
        })
        .fold(0.0, f64::max);
    vec![
        VerifyEntry::scalar("gram_identity_random_10000", 0.0, worst, 1e-12),
        VerifyEntry::scalar("gram_identity_tetrahedron", 0.0, gram_identity_residual(&[-1.0 / 3.0; 6]), 1e-12),
        VerifyEntry::scalar("gram_identity_all_antipodal", 16.0, gram_identity_residual(&[-1.0; 6]), 1e-12),
    ]
}

fn kkt_checks() -> Vec<VerifyEntry> {
    let r = kkt_minimize_oracle(60);
    let dist = r.argmin.iter().map(|t| (t - PI / 2.0).abs()).fold(0.0, f64::max);
    let mut out = vec![
        VerifyEntry::scalar("kkt_minimum_value", 0.0, r.min_value, 1e-8),
        VerifyEntry {
            name: "kkt_argmin".into(),
            analytic: json!([PI / 2.0, PI / 2.0, PI / 2.0, PI / 2.0]),
            numeric: json!(r.argmin),
            error: dist,
            pass: dist < 1e-3,
        },
    ];
    for (k, (x, v)) in KKT_STATIONARY_POINTS.iter().enumerate() {
        out.push(VerifyEntry::scalar(format!("kkt_stationary_value_{k}"), *v, kkt_objective(x), 1e-12));
    }
    out
}

fn invariance_checks() -> Vec<VerifyEntry> {
    let topo = complete_graph(4).unwrap();
    let gain = affine_cosine_gain(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7a);

    let mut equivariance = 0.0f64;
    for seed in 0..100 {
        let s = AttitudeEnsemble::random(4, seed).unwrap();
        let q = sample_rotation_with(&mut rng);
        let a = closed_loop_field(&s.rotated(&q), &topo, &gain).unwrap();
        let b = closed_loop_field(&s, &topo, &gain).unwrap();
        for (x, y) in a.iter().zip(&b) {
            equivariance = equivariance.max((x - q * y).norm());
        }
    }

    let mut chart = 0.0f64;
    let mut chain = 0.0f64;
    let mut used = 0usize;
    let mut seed = 10_000u64;
    while used < 1000 {
        let s = AttitudeEnsemble::random(4, seed).unwrap();
        seed += 1;
        let angles: Vec<_> = s.gammas().iter().map(rpy_extract).collect();
        if angles.iter().any(|a| a.phi.cos() < 1e-2) {
            continue;
        }
        used += 1;
        let cart = closed_loop_field(&s, &topo, &gain).unwrap();
        let rpy = rpy_closed_loop_field(&angles, &gain).unwrap();
        for ((a, v), (dpsi, dphi)) in angles.iter().zip(&cart).zip(&rpy) {
            let (u, w) = rpy_chart_velocity(a, v);
            chart = chart.max((u - dpsi).abs()).max((w - dphi).abs());
        }
        let c = s.pair_cosines();
        let field = xi_s_field(&[c[0], c[1], c[2], c[3], c[4], c[5]], &gain);
        let g = s.gammas();
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                let rate = cart[i].dot(&g[j]) + g[i].dot(&cart[j]);
                chain = chain.max((rate - field[k]).abs());
                k += 1;
            }
        }
    }

    let mut config = SimConfig::seeded(TopologySpec::Complete { n: 4 }, GainSpec::AffineCosine { a: 1.0 }, 0);
    config.horizon = 20.0;
    let invariance = match simulate_from(&config, AttitudeEnsemble::reference_tetrahedron()) {
        Ok(traj) => VerifyEntry::scalar(
            "tetrahedron_forward_invariance",
            0.0,
            traj.states.iter().map(formation_error).fold(0.0, f64::max),
            1e-9,
        ),
        Err(e) => failed("tetrahedron_forward_invariance", e),
    };

    vec![
        VerifyEntry::scalar("field_rotation_equivariance", 0.0, equivariance, 1e-12),
        VerifyEntry::scalar("rpy_chart_consistency", 0.0, chart, 1e-10),
        VerifyEntry::scalar("xi_s_chain_rule", 0.0, chain, 1e-10),
        invariance,
    ]
}

/// Runs the selected suites without touching the filesystem.
pub fn run_checks(selector: Selector) -> VerifyReport {
    use Selector::*;
    type Suite = (Selector, fn() -> Vec<VerifyEntry>);
    let suites: &[Suite] = &[
        (Lambda, lambda_checks),
        (Spectra, spectra_checks),
        (Identity, identity_checks),
        (Kkt, kkt_checks),
        (Invariance, invariance_checks),
    ];
    let entries: Vec<VerifyEntry> =
        suites.iter().filter(|(s, _)| selector == All || selector == *s).flat_map(|(_, f)| f()).collect();
    let failed = entries.iter().filter(|e| !e.pass).count();
    VerifyReport { selector, passed: entries.len() - failed, failed, entries }
}

/// Writes the report to `out` (a file, or `verify.json` inside a directory).
/// Returns an error with exit code 3 listing the failing checks, if any.
pub fn cmd_verify(selector: Selector, out: &Path) -> CliResult<VerifyReport> {
    let report = run_checks(selector);
    let path = if out.is_dir() { out.join("verify.json") } else { out.to_path_buf() };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::io(&path, e))?;
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    if report.all_pass() {
        Ok(report)
    } else {
        let names: Vec<&str> = report.failures().map(|e| e.name.as_str()).collect();
        Err(CliError::new(exit::VERIFY_FAILED, format!("{} check(s) failed: {}", names.len(), names.join(", "))))
    }
}
