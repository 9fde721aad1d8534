use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use glauber_fock::limits::compare_finite_infinite;
use glauber_fock::propagator::propagator_series_with;
use glauber_fock::spectral::{
    eigen_decompose_with, min_positive_eigenvalue_with, spectral_weights,
};
use glauber_fock::states::{correlation, fidelity_two_mode_with, mean_photon};
use glauber_fock::verify::run_verification;
use glauber_fock::{
    Execution, InputState, LatticeSpec, Propagator, SpectralDecomposition, TimeGrid, Tolerances,
};
use serde_json::{Map, Value};

use crate::args::{Command, CommonArgs, GridArgs};
use crate::descriptor::InputDescriptor;
use crate::output::{json_number, Cell, Format, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] glauber_fock::Error),
    #[error("conservation check failed: {0}")]
    Conservation(String),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(glauber_fock::Error::NotConverged { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Conservation(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Serialized payload plus diagnostics for standard error.
#[derive(Debug)]
pub struct Outcome {
    pub payload: String,
    pub out: Option<PathBuf>,
    pub diagnostics: String,
    pub exit_code: u8,
}

struct Context {
    tol: Tolerances,
    exec: Execution,
    meta: Map<String, Value>,
}

fn tolerances(common: &CommonArgs) -> CliResult<Tolerances> {
    let mut tol = Tolerances::default();
    for (name, value, slot) in [
        ("--tol-unitarity", common.tol_unitarity, &mut tol.unitarity),
        ("--tol-eigen", common.tol_eigen, &mut tol.eigen_agreement),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

fn tolerance_meta(tol: &Tolerances) -> Value {
    let mut m = Map::new();
    for (k, v) in [
        ("newton_step", tol.newton_step),
        ("bisection", tol.bisection),
        ("eigen_agreement", tol.eigen_agreement),
        ("unitarity", tol.unitarity),
        ("expm_agreement", tol.expm_agreement),
        ("sum_rule", tol.sum_rule),
        ("normalization", tol.normalization),
        ("zero_eigenvalue", tol.zero_eigenvalue),
        ("clamp", tol.clamp),
    ] {
        m.insert(k.into(), json_number(v));
    }
    Value::Object(m)
}

impl Context {
    fn new(
        command: &str,
        size: Option<usize>,
        input: Option<&InputDescriptor>,
        common: &CommonArgs,
    ) -> CliResult<Self> {
        let tol = tolerances(common)?;
        let mut meta = Map::new();
        meta.insert("artifact_version".into(), env!("CARGO_PKG_VERSION").into());
        meta.insert("command".into(), command.into());
        meta.insert("lattice_size".into(), size.map_or(Value::Null, Value::from));
        meta.insert(
            "input".into(),
            input.map_or(Value::Null, |d| d.to_string().into()),
        );
        meta.insert("tolerances".into(), tolerance_meta(&tol));
        Ok(Self {
            tol,
            exec: Execution::default(),
            meta,
        })
    }

    fn decompose(&self, size: usize) -> CliResult<SpectralDecomposition> {
        let spec = LatticeSpec::new(size)?;
        Ok(eigen_decompose_with(&spec, &self.tol, self.exec)?)
    }

    fn note(&mut self, key: &str, value: Value) {
        self.meta.insert(key.into(), value);
    }

    fn finish(self, table: Table, common: &CommonArgs) -> Outcome {
        let payload = match common.format {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json(self.meta),
        };
        Outcome {
            payload,
            out: common.out.clone(),
            diagnostics: String::new(),
            exit_code: 0,
        }
    }

    fn time_grid(
        &mut self,
        grid: &GridArgs,
        decomp: &SpectralDecomposition,
    ) -> CliResult<TimeGrid> {
        let unit = if grid.times_in_revival_units {
            PI / (10.0 * min_positive_eigenvalue_with(decomp, self.tol.zero_eigenvalue)?)
        } else {
            1.0
        };
        self.note("time_unit", json_number(unit));
        let g = match &grid.times {
            Some(ts) => TimeGrid::explicit(ts.iter().map(|t| t * unit).collect())?,
            None => TimeGrid::uniform(grid.t_start * unit, grid.t_max * unit, grid.steps)?,
        };
        Ok(g)
    }

    fn check_unitary(&self, u: &Propagator) -> CliResult<()> {
        let err = u.column_norm_error();
        if err > self.tol.unitarity || !err.is_finite() {
            return Err(CliError::Conservation(format!(
                "column norm deviation {err:.3e} at t={} exceeds {:.3e}",
                u.time(),
                self.tol.unitarity
            )));
        }
        Ok(())
    }

    fn check_total(&self, what: &str, t: f64, total: f64, expected: f64) -> CliResult<()> {
        let dev = (total - expected).abs();
        if dev > self.tol.sum_rule || !dev.is_finite() {
            return Err(CliError::Conservation(format!(
                "{what} is {total} at t={t}, expected {expected} (tolerance {:.3e})",
                self.tol.sum_rule
            )));
        }
        Ok(())
    }
}

pub fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Spectrum {
            lattice,
            abs,
            common,
        } => {
            let ctx = Context::new("spectrum", Some(lattice.size), None, &common)?;
            let decomp = ctx.decompose(lattice.size)?;
            let mut table = if abs {
                Table::new(&["index", "lambda", "abs_lambda"])
            } else {
                Table::new(&["index", "lambda"])
            };
            for (i, &l) in decomp.eigenvalues().iter().enumerate() {
                let mut row = vec![Cell::Int(i), Cell::Real(l)];
                if abs {
                    row.push(Cell::Real(l.abs()));
                }
                table.push(row);
            }
            Ok(ctx.finish(table, &common))
        }
        Command::Evolve {
            lattice,
            input,
            grid,
            common,
        } => {
            let mut ctx = Context::new("evolve", Some(lattice.size), Some(&input.input), &common)?;
            let decomp = ctx.decompose(lattice.size)?;
            let state = input.input.to_state(lattice.size, &ctx.tol)?;
            let times = ctx.time_grid(&grid, &decomp)?;
            let expected = f64::from(state.total_photons());
            let mut table = Table::new(&["t", "waveguide", "mean_photon"]);
            for u in propagator_series_with(&decomp, &times, ctx.exec) {
                ctx.check_unitary(&u)?;
                let n = mean_photon(&u, &state)?;
                ctx.check_total("photon total", u.time(), n.iter().sum(), expected)?;
                for (q, v) in n.into_iter().enumerate() {
                    table.push(vec![Cell::Real(u.time()), Cell::Int(q), Cell::Real(v)]);
                }
            }
            Ok(ctx.finish(table, &common))
        }
        Command::Fidelity {
            lattice,
            input,
            grid,
            common,
        } => {
            let Some((j, k, alpha, beta)) = input.input.beam_splitter_amplitudes() else {
                return Err(CliError::Usage(format!(
                    "fidelity needs a superpos:j:k:alpha input, got {}",
                    input.input
                )));
            };
            let mut ctx =
                Context::new("fidelity", Some(lattice.size), Some(&input.input), &common)?;
            let decomp = ctx.decompose(lattice.size)?;
            input.input.to_state(lattice.size, &ctx.tol)?;
            let times = ctx.time_grid(&grid, &decomp)?;
            let f = fidelity_two_mode_with(&decomp, &times, j, k, alpha, beta, &ctx.tol, ctx.exec)?;
            let mut table = Table::new(&["t", "fidelity"]);
            for (&t, v) in times.times().iter().zip(f) {
                table.push(vec![Cell::Real(t), Cell::Real(v)]);
            }
            Ok(ctx.finish(table, &common))
        }
        Command::Correlation {
            lattice,
            input,
            grid,
            common,
        } => {
            let mut ctx = Context::new(
                "correlation",
                Some(lattice.size),
                Some(&input.input),
                &common,
            )?;
            let decomp = ctx.decompose(lattice.size)?;
            let state = input.input.to_state(lattice.size, &ctx.tol)?;
            if !matches!(
                state,
                InputState::TwoPhotonProduct { .. } | InputState::Noon { .. }
            ) {
                return Err(CliError::Usage(format!(
                    "correlation needs a product:j:k or noon:j:k:phi input, got {}",
                    input.input
                )));
            }
            let times = ctx.time_grid(&grid, &decomp)?;
            let n = lattice.size;
            let mut table = Table::new(&["t", "p", "q", "gamma"]);
            for u in propagator_series_with(&decomp, &times, ctx.exec) {
                ctx.check_unitary(&u)?;
                let map = correlation(&u, &state)?;
                ctx.check_total("correlation sum", u.time(), map.total(), 2.0)?;
                for p in 0..n {
                    for q in 0..n {
                        table.push(vec![
                            Cell::Real(u.time()),
                            Cell::Int(p),
                            Cell::Int(q),
                            Cell::Real(map.get(p, q)),
                        ]);
                    }
                }
            }
            Ok(ctx.finish(table, &common))
        }
        Command::Weights {
            lattice,
            waveguide,
            common,
        } => {
            let mut ctx = Context::new("weights", Some(lattice.size), None, &common)?;
            ctx.note("waveguide", waveguide.into());
            let decomp = ctx.decompose(lattice.size)?;
            let w = spectral_weights(&decomp, waveguide)?;
            ctx.check_total("weight sum", 0.0, w.iter().sum(), 1.0)?;
            let mut sorted = w.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let mut table = Table::new(&["eigen_index", "weight"]);
            for (l, v) in w.into_iter().enumerate() {
                table.push(vec![Cell::Int(l), Cell::Real(v)]);
            }
            table.add_summary("top3_share", sorted.iter().take(3).sum());
            Ok(ctx.finish(table, &common))
        }
        Command::CompareLimit {
            lattice,
            waveguide,
            time,
            common,
        } => {
            let mut ctx = Context::new("compare-limit", Some(lattice.size), None, &common)?;
            ctx.note("waveguide", waveguide.into());
            ctx.note("time", json_number(time));
            if !(time.is_finite() && time >= 0.0) {
                return Err(CliError::Usage(format!(
                    "--time must be finite and non-negative, got {time}"
                )));
            }
            let decomp = ctx.decompose(lattice.size)?;
            let c = compare_finite_infinite(&decomp, waveguide, time)?;
            let mut table = Table::new(&["waveguide", "finite", "infinite", "abs_diff"]);
            for r in &c.records {
                table.push(vec![
                    Cell::Int(r.waveguide),
                    Cell::Real(r.finite),
                    Cell::Real(r.infinite),
                    Cell::Real(r.abs_diff),
                ]);
            }
            table.add_summary("max_abs_diff", c.max_abs_diff);
            table.add_summary("edge_leakage", c.edge_leakage);
            Ok(ctx.finish(table, &common))
        }
        Command::Verify { n_max, common } => {
            let mut ctx = Context::new("verify", None, None, &common)?;
            ctx.note("n_max", n_max.into());
            if n_max == 0 {
                return Err(CliError::Usage("--n-max must be at least 1".into()));
            }
            let report = run_verification(n_max, &ctx.tol, ctx.exec)?;
            let mut table = Table::new(&["size", "check", "value", "threshold", "passed"]);
            let mut diagnostics = String::new();
            for c in &report.checks {
                table.push(vec![
                    Cell::Int(c.size),
                    Cell::Text(c.name),
                    Cell::Real(c.value),
                    Cell::Real(c.threshold),
                    Cell::Bool(c.passed),
                ]);
                let _ = writeln!(diagnostics, "{c}");
            }
            let failed = report.failures().count();
            let _ = writeln!(
                diagnostics,
                "{} of {} checks passed",
                report.checks.len() - failed,
                report.checks.len()
            );
            let mut outcome = ctx.finish(table, &common);
            outcome.diagnostics = diagnostics;
            outcome.exit_code = if report.all_passed() { 0 } else { 1 };
            Ok(outcome)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::Core(glauber_fock::Error::InvalidSize(0)).exit_code(),
            2
        );
        assert_eq!(
            CliError::Core(glauber_fock::Error::NotConverged {
                index: 1,
                iterations: 50
            })
            .exit_code(),
            3
        );
        assert_eq!(CliError::Conservation("x".into()).exit_code(), 3);
    }

    #[test]
    fn conservation_check_trips() {
        let common = CommonArgs {
            out: None,
            format: Format::Csv,
            tol_unitarity: None,
            tol_eigen: None,
        };
        let ctx = Context::new("evolve", Some(2), None, &common).unwrap();
        assert!(ctx
            .check_total("photon total", 0.0, 1.0 + 1e-11, 1.0)
            .is_ok());
        let err = ctx
            .check_total("photon total", 0.0, 1.0 + 1e-9, 1.0)
            .unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(ctx.check_total("photon total", 0.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn rejects_bad_tolerances() {
        for bad in [0.0, -1e-3, f64::INFINITY, f64::NAN] {
            let common = CommonArgs {
                out: None,
                format: Format::Csv,
                tol_unitarity: Some(bad),
                tol_eigen: None,
            };
            assert!(matches!(tolerances(&common), Err(CliError::Usage(_))));
        }
    }
}
