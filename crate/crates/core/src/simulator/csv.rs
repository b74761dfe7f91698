//! Plain CSV export of trajectories. Floats are written with 17 significant
//! digits in scientific notation so that values survive a round trip exactly.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::xi::phi_transform;

use super::Trajectory;

fn pair_labels(n: usize) -> Vec<String> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(format!("c{i}{j}"));
        }
    }
    out
}

pub fn trajectory_header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for i in 1..=n {
        for axis in ["x", "y", "z"] {
            h.push(format!("g{i}{axis}"));
        }
    }
    h.extend(pair_labels(n));
    h.push("V".into());
    h.push("maxfield".into());
    h
}

pub fn xi_trace_header() -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend(pair_labels(4));
    h.extend(["phi1", "psi1", "gamma"].map(String::from));
    h
}

#[inline]
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_row<W: Write>(out: &mut W, values: impl IntoIterator<Item = f64>) -> std::io::Result<()> {
    let row: Vec<String> = values.into_iter().map(fmt).collect();
    writeln!(out, "{}", row.join(","))
}

/// One row per sample: time, every agent's coordinates, pair cosines, `V`, max field norm.
pub fn write_trajectory<W: Write>(traj: &Trajectory, mut out: W) -> Result<()> {
    let n = traj.states.first().map(|s| s.n()).unwrap_or(4);
    let io = |e: std::io::Error| Error::Numerical(format!("write failed: {e}"));
    writeln!(out, "{}", trajectory_header(n).join(",")).map_err(io)?;
    for ((t, s), obs) in traj.times.iter().zip(&traj.states).zip(&traj.samples) {
        let coords = s.gammas().iter().flat_map(|g| [g.x, g.y, g.z]);
        let values =
            std::iter::once(*t).chain(coords).chain(obs.cosines.iter().copied()).chain([obs.lyapunov, obs.max_field]);
        write_row(&mut out, values).map_err(io)?;
    }
    Ok(())
}

/// `t, c12..c34, phi1, psi1, gamma` per sample (four-agent runs only).
pub fn write_xi_trace<W: Write>(traj: &Trajectory, mut out: W) -> Result<()> {
    let io = |e: std::io::Error| Error::Numerical(format!("write failed: {e}"));
    writeln!(out, "{}", xi_trace_header().join(",")).map_err(io)?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let xi = phi_transform(s)?;
        let values = std::iter::once(*t).chain(xi.xi_s).chain([xi.phi1, xi.psi1, xi.gamma]);
        write_row(&mut out, values).map_err(io)?;
    }
    Ok(())
}

/// A parsed CSV table of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn read_table<R: BufRead>(input: R) -> Result<Table> {
    let mut lines = input.lines();
    let header: Vec<String> = match lines.next() {
        Some(l) => l.map_err(|e| Error::Parse(e.to_string()))?.split(',').map(|s| s.trim().to_string()).collect(),
        None => return Err(Error::Parse("empty CSV".into())),
    };
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", k + 2))))
            .collect::<Result<_>>()?;
        if row.len() != header.len() {
            return Err(Error::Parse(format!("line {}: {} fields, header has {}", k + 2, row.len(), header.len())));
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}

/// Rebuilds a trajectory from a table written by [`write_trajectory`].
/// Step indices are recovered as row numbers scaled by `stride`, except the last.
pub fn trajectory_from_table(table: &Table) -> Result<Trajectory> {
    let cols = table.header.len();
    // 1 + 3n + n(n-1)/2 + 2 columns
    let n = (1..=64)
        .find(|&n| 3 + 3 * n + n * (n - 1) / 2 == cols)
        .ok_or_else(|| Error::Parse(format!("{cols} columns do not match any agent count")))?;
    if table.header != trajectory_header(n) {
        return Err(Error::Parse("unexpected trajectory header".into()));
    }
    let pairs = n * (n - 1) / 2;
    let mut traj = Trajectory::default();
    for row in &table.rows {
        let gammas = (0..n).map(|i| crate::sphere::Vec3::new(row[1 + 3 * i], row[2 + 3 * i], row[3 + 3 * i]));
        traj.states.push(crate::ensemble::AttitudeEnsemble::from_vectors(gammas)?);
        traj.times.push(row[0]);
        let base = 1 + 3 * n;
        traj.samples.push(super::Sample {
            cosines: row[base..base + pairs].to_vec(),
            lyapunov: row[base + pairs],
            max_field: row[base + pairs + 1],
        });
    }
    traj.step_index = (0..traj.len()).collect();
    Ok(traj)
}

pub fn read_trajectory<R: BufRead>(input: R) -> Result<Trajectory> {
    trajectory_from_table(&read_table(input)?)
}
