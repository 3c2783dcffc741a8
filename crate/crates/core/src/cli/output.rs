//! Time series, field snapshots, convergence tables and run manifests.
//!
//! Every float is written with Rust's shortest round-trip `{:e}` formatting, so
//! identical states give byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::diagnostics::EnergyReport;
use crate::dgspace::{eval_field, FieldCoeffs};
use crate::error::{Error, Result};
use crate::mesh::Point;
use crate::scheme::{NewtonReport, State};

pub const TIMESERIES_HEADER: &str = "step,t,energy,mass,deviation,max_velocity,dissipation_reaction,dissipation_diffusion,dissipation_viscous,min_density,max_phi,newton_iterations,newton_residual";

pub const CONVERGENCE_HEADER: &str = "N,e_phi,eoc_phi,e_v,eoc_v,e_lambda,eoc_lambda";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnapshotFormat {
    /// whitespace-separated columns, one row per plot point
    Columns,
    /// legacy VTK unstructured grid, ASCII
    VtkLegacy,
}

impl SnapshotFormat {
    pub fn for_dim(dim: usize) -> SnapshotFormat {
        if dim == 1 {
            SnapshotFormat::Columns
        } else {
            SnapshotFormat::VtkLegacy
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            SnapshotFormat::Columns => "dat",
            SnapshotFormat::VtkLegacy => "vtk",
        }
    }
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

pub(crate) fn io<T>(path: &Path, r: std::io::Result<T>) -> Result<T> {
    r.map_err(|e| Error::io(path, e))
}

/// Line-buffered `timeseries.csv` writer.
pub struct TimeseriesWriter {
    path: PathBuf,
    out: BufWriter<File>,
    rows: usize,
}

impl TimeseriesWriter {
    pub fn create(path: &Path) -> Result<TimeseriesWriter> {
        let mut out = create(path)?;
        io(path, writeln!(out, "{TIMESERIES_HEADER}"))?;
        Ok(TimeseriesWriter {
            path: path.to_path_buf(),
            out,
            rows: 0,
        })
    }

    /// Appends one row; `newton` is `None` for the initial state.
    pub fn push(&mut self, r: &EnergyReport, newton: Option<&NewtonReport>) -> Result<()> {
        let (its, res) = newton.map_or((0, 0.0), |n| (n.iterations(), n.final_residual()));
        let line = format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{:e}",
            r.step, r.t, r.energy, r.mass, r.deviation, r.max_velocity, r.dissipation[0], r.dissipation[1], r.dissipation[2], r.min_density, r.max_phi, its, res
        );
        io(&self.path, writeln!(self.out, "{line}"))?;
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn finish(mut self) -> Result<()> {
        io(&self.path, self.out.flush())
    }
}

/// Reference points sampled per element: `p + 2` equispaced points in 1D and
/// the three vertices in 2D.
fn plot_points(dim: usize, p: usize) -> Vec<Point> {
    if dim == 1 {
        (0..p + 2).map(|j| [j as f64 / (p + 1) as f64, 0.0]).collect()
    } else {
        vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
    }
}

fn fields(state: &State) -> [(&'static str, &FieldCoeffs); 6] {
    [("phi", &state.phi), ("v", &state.v), ("lambda", &state.lambda), ("a", &state.a), ("b", &state.b), ("q", &state.q)]
}

/// Writes `state` to `path`.
///
/// Columns: a `#` header naming `x phi v1 lambda a b q1`, then one row per plot
/// point, elements left to right. VTK: every element carries its own three
/// points, so the discontinuous fields are shown without averaging.
pub fn write_field_snapshot(state: &State, path: &Path, format: SnapshotFormat) -> Result<()> {
    let space = state.space();
    let d = space.dim();
    let pts = plot_points(d, space.degree());
    let ne = space.num_elements();
    let mut samples: Vec<(Point, Vec<Vec<f64>>)> = Vec::with_capacity(ne * pts.len());
    for k in 0..ne {
        for xi in &pts {
            let vals = fields(state).iter().map(|(_, f)| eval_field(f, k, xi).map(|v| v.0)).collect::<Result<Vec<_>>>()?;
            samples.push((space.to_physical(k, xi), vals));
        }
    }
    let mut w = create(path)?;
    match format {
        SnapshotFormat::Columns => {
            let mut head = vec!["x".to_string()];
            for (name, f) in fields(state) {
                if f.ncomp() == 1 {
                    head.push(name.into());
                } else {
                    head.extend((1..=f.ncomp()).map(|c| format!("{name}{c}")));
                }
            }
            io(path, writeln!(w, "# t = {:e} step = {}", state.t, state.step))?;
            io(path, writeln!(w, "# {}", head.join(" ")))?;
            for (x, vals) in &samples {
                let mut row = vec![format!("{:e}", x[0])];
                row.extend(vals.iter().flatten().map(|v| format!("{v:e}")));
                io(path, writeln!(w, "{}", row.join(" ")))?;
            }
        }
        SnapshotFormat::VtkLegacy => {
            let n = samples.len();
            let mut s = String::new();
            s.push_str("# vtk DataFile Version 3.0\n");
            s.push_str(&format!("phase field state t = {:e} step = {}\n", state.t, state.step));
            s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
            s.push_str(&format!("POINTS {n} double\n"));
            for (x, _) in &samples {
                s.push_str(&format!("{:e} {:e} 0e0\n", x[0], x[1]));
            }
            s.push_str(&format!("CELLS {ne} {}\n", 4 * ne));
            for k in 0..ne {
                s.push_str(&format!("3 {} {} {}\n", 3 * k, 3 * k + 1, 3 * k + 2));
            }
            s.push_str(&format!("CELL_TYPES {ne}\n"));
            for _ in 0..ne {
                s.push_str("5\n");
            }
            s.push_str(&format!("POINT_DATA {n}\n"));
            for (i, (name, f)) in fields(state).iter().enumerate() {
                if f.ncomp() == 1 {
                    s.push_str(&format!("SCALARS {name} double 1\nLOOKUP_TABLE default\n"));
                    for (_, vals) in &samples {
                        s.push_str(&format!("{:e}\n", vals[i][0]));
                    }
                } else {
                    s.push_str(&format!("VECTORS {name} double\n"));
                    for (_, vals) in &samples {
                        s.push_str(&format!("{:e} {:e} 0e0\n", vals[i][0], vals[i][1]));
                    }
                }
            }
            io(path, w.write_all(s.as_bytes()))?;
        }
    }
    io(path, w.flush())
}

/// One level of a convergence study.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub e_phi: f64,
    pub e_v: f64,
    pub e_lambda: f64,
}

/// EOC of column `f` between consecutive rows; `None` where undefined.
pub fn eoc_column(rows: &[ConvergenceRow], f: impl Fn(&ConvergenceRow) -> f64) -> Vec<Option<f64>> {
    let mut out = vec![None];
    for w in rows.windows(2) {
        let (a, b) = (f(&w[0]), f(&w[1]));
        out.push(crate::diagnostics::estimate_eoc(&[(w[0].n, a), (w[1].n, b)]).ok().map(|e| e[0]));
    }
    out.truncate(rows.len());
    out
}

/// The convergence table as CSV text; EOC cells are empty where undefined.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let cols = [
        eoc_column(rows, |r| r.e_phi),
        eoc_column(rows, |r| r.e_v),
        eoc_column(rows, |r| r.e_lambda),
    ];
    let cell = |e: Option<f64>| e.map_or(String::new(), |e| format!("{e:.3}"));
    let mut s = format!("{CONVERGENCE_HEADER}\n");
    for (i, r) in rows.iter().enumerate() {
        s.push_str(&format!(
            "{},{:e},{},{:e},{},{:e},{}\n",
            r.n,
            r.e_phi,
            cell(cols[0][i]),
            r.e_v,
            cell(cols[1][i]),
            r.e_lambda,
            cell(cols[2][i])
        ));
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    io(path, std::fs::write(path, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level_has_empty_eoc_cells() {
        let rows = [ConvergenceRow {
            n: 32,
            e_phi: 0.5,
            e_v: 0.25,
            e_lambda: 1.0,
        }];
        assert_eq!(convergence_csv(&rows), format!("{CONVERGENCE_HEADER}\n32,5e-1,,2.5e-1,,1e0,\n"));
    }

    #[test]
    fn halving_errors_give_order_one() {
        let rows: Vec<ConvergenceRow> = (0..3)
            .map(|i| ConvergenceRow {
                n: 8 << i,
                e_phi: 1.0 / f64::from(1 << i),
                e_v: 0.0,
                e_lambda: 1.0,
            })
            .collect();
        let text = convergence_csv(&rows);
        let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
        assert_eq!(last[2], "1.000");
        assert_eq!(last[4], "");
        assert_eq!(last[6], "0.000");
    }
}
