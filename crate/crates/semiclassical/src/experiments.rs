//! Experiment drivers. Each one computes its tables in memory first and only
//! then hands them to [`crate::output`], so results are independent of I/O.

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Serialize;

use semiclassical_core::corrections::{linear_entropy_2nd, linear_entropy_from_cum, CorrectionKernel};
use semiclassical_core::dynamics::{integrate, lyapunov_estimate, mf_distances, mf_overlap, ProductState, Trajectory};
use semiclassical_core::model::{classical_energy, maser_hamiltonian, BilinearHamiltonian, MaserParams};
use semiclassical_core::oracle::{
    build_hamiltonian_matrix, exact_overlap_pair, field_amplitude, product_coherent_vector, reduced_linear_entropy,
    Evolver, HilbertConfig, OracleState, SparseHermitian, Subsystem,
};
use semiclassical_core::projection::project_to_energy;

use crate::config::{ExperimentConfig, ExperimentKind, PairSpec};

/// A named CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(name: String, header: &[&'static str]) -> Self {
        Self {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Where a pair member started and where projection moved it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberSummary {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub energy_given: f64,
    pub energy_used: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PairSummary {
    pub label: String,
    pub members: Vec<MemberSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mf_overlap_sq_initial: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mf_overlap_sq_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mf_overlap_sq_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lyapunov_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_overlap_abs_drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_error_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_drift_rel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub n_max: usize,
    pub dim: usize,
    /// True when `n_max` had to be raised above the configured value.
    pub raised: bool,
    /// Largest field truncation deficit over all initial vectors.
    pub truncation_deficit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub tables: Vec<Table>,
    pub pairs: Vec<PairSummary>,
    /// One entry per oracle basis built, in run order.
    pub oracle: Vec<OracleSummary>,
    pub warnings: Vec<String>,
}

struct Run<'a> {
    cfg: &'a ExperimentConfig,
    params: MaserParams,
    h: BilinearHamiltonian,
    warnings: Vec<String>,
    oracle: Vec<OracleSummary>,
}

fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl<'a> Run<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Result<Self> {
        let params = cfg.model.params()?;
        let h = maser_hamiltonian(&params).context("building the maser Hamiltonian")?;
        Ok(Self {
            cfg,
            params,
            h,
            warnings: Vec::new(),
            oracle: Vec::new(),
        })
    }

    fn energy(&self, s: &ProductState) -> Result<f64> {
        Ok(classical_energy(&self.h, s.x, s.y)?)
    }

    /// Both members of a pair, projected onto the target energy when one is set.
    fn members(&self, k: usize, pair: &PairSpec) -> Result<([ProductState; 2], Vec<MemberSummary>)> {
        let mut out = [ProductState::from_parts(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))?; 2];
        let mut summary = Vec::new();
        for (m, (name, spec)) in [("a", &pair.a), ("b", &pair.b)].into_iter().enumerate() {
            let field = format!("initial_pairs[{k}].{name}");
            let given = spec.state(&field)?;
            let e_given = self.energy(&given)?;
            let used = match self.cfg.energy_target {
                Some(e) => project_to_energy(&given, &self.h, e, self.cfg.projection.into())
                    .with_context(|| format!("projecting {field} ({}) onto E = {e}", pair.label))?,
                None => given,
            };
            summary.push(MemberSummary {
                x: complex_pair(used.x.z()),
                y: complex_pair(used.y.z()),
                energy_given: e_given,
                energy_used: self.energy(&used)?,
            });
            out[m] = used;
        }
        Ok((out, summary))
    }

    fn trajectory(&self, s: &ProductState, what: &str) -> Result<Trajectory> {
        integrate(&self.h, s, self.cfg.t_final, &self.cfg.integrator_config())
            .with_context(|| format!("integrating the mean-field trajectory of {what}"))
    }

    /// Oracle space large enough for every field label any trajectory visits.
    fn hilbert(&mut self, trajectories: &[&Trajectory]) -> Result<HilbertConfig> {
        let spec = self
            .cfg
            .oracle
            .as_ref()
            .context("this experiment needs an `oracle` section")?;
        let labels: Vec<Complex64> = trajectories
            .iter()
            .flat_map(|t| t.states().iter().map(|s| s.x.z()))
            .collect();
        let need = labels.iter().map(|x| HilbertConfig::required_n_max(*x)).max().unwrap_or(0);
        let n_max = need.max(spec.n_max);
        let raised = n_max > spec.n_max;
        if raised {
            self.warnings.push(format!(
                "oracle n_max raised from {} to {} to cover the field labels",
                spec.n_max, n_max
            ));
        }
        let hc = HilbertConfig::with_cap(n_max, self.params.j.j(), spec.cap).context("configuring the oracle basis")?;
        self.oracle.push(OracleSummary {
            n_max,
            dim: hc.dim(),
            raised,
            truncation_deficit: 0.0,
        });
        Ok(hc)
    }

    fn coherent_vector(&mut self, s: &ProductState, hc: &HilbertConfig) -> Result<OracleState> {
        let psi = product_coherent_vector(s.x, s.y, hc).context("building an oracle coherent vector")?;
        if let Some(o) = self.oracle.last_mut() {
            o.truncation_deficit = o.truncation_deficit.max(psi.truncation_deficit());
        }
        Ok(psi)
    }

    fn matrix(&self, hc: &HilbertConfig) -> Result<SparseHermitian> {
        build_hamiltonian_matrix(&self.params, hc).context("assembling the oracle Hamiltonian")
    }
}

fn energy_drift(ctx: &Run, traj: &Trajectory) -> Result<f64> {
    let e0 = ctx.energy(&traj.states()[0])?;
    let mut worst: f64 = 0.0;
    for s in traj.states() {
        worst = worst.max((ctx.energy(s)? - e0).abs());
    }
    Ok(worst / e0.abs().max(1.0))
}

fn trajectory_table(ctx: &Run, name: String, traj: &Trajectory) -> Result<Table> {
    let mut t = Table::new(
        name,
        &["t", "re_x", "im_x", "re_y", "im_y", "eta_x", "eta_y", "s0", "s1", "energy"],
    );
    for (k, s) in traj.states().iter().enumerate() {
        let (x, y) = (s.x.z(), s.y.z());
        t.rows.push(vec![
            traj.times()[k],
            x.re,
            x.im,
            y.re,
            y.im,
            s.eta_x,
            s.eta_y,
            traj.s0()[k],
            traj.s1()[k],
            ctx.energy(s)?,
        ]);
    }
    Ok(t)
}

fn overlap_table(ctx: &Run, label: &str, a: &Trajectory, b: &Trajectory, summary: &mut PairSummary) -> Table {
    let (ga, gb) = (ctx.h.group_a(), ctx.h.group_b());
    let mut t = Table::new(format!("overlap_pair_{label}"), &["t", "mf_overlap_sq", "d_field", "d_spin"]);
    let mut min = f64::INFINITY;
    for (k, (sa, sb)) in a.states().iter().zip(b.states()).enumerate() {
        let o = mf_overlap(sa, sb, ga, gb).norm_sqr();
        let (df, ds) = mf_distances(sa, sb, ga, gb);
        min = min.min(o);
        t.rows.push(vec![a.times()[k], o, df, ds]);
    }
    summary.mf_overlap_sq_initial = t.rows.first().map(|r| r[1]);
    summary.mf_overlap_sq_final = t.rows.last().map(|r| r[1]);
    summary.mf_overlap_sq_min = Some(min);
    t
}

fn lyapunov_table(ctx: &Run, label: &str, s: &ProductState, summary: &mut PairSummary) -> Result<Table> {
    let l = &ctx.cfg.lyapunov;
    let est = lyapunov_estimate(
        &ctx.h,
        s,
        l.delta0,
        l.t_total.unwrap_or(ctx.cfg.t_final),
        l.renorm_interval,
        &ctx.cfg.integrator_config(),
    )
    .with_context(|| format!("Lyapunov estimate for {label}"))?;
    let mut t = Table::new(format!("lyapunov_{label}"), &["window", "running_exponent"]);
    for (k, (_, r)) in est.running.iter().enumerate() {
        t.rows.push(vec![(k + 1) as f64, *r]);
    }
    summary.lyapunov_exponent = Some(est.exponent);
    Ok(t)
}

/// Steps an oracle state through the trajectory sample times.
fn oracle_series<F>(evolver: &mut Evolver, psi: &mut OracleState, times: &[f64], mut visit: F) -> Result<()>
where
    F: FnMut(usize, &OracleState) -> Result<()>,
{
    let mut now = times[0];
    for (k, &t) in times.iter().enumerate() {
        evolver.advance(psi, t - now).context("exact evolution")?;
        now = t;
        visit(k, psi)?;
    }
    Ok(())
}

fn entropy_tables(ctx: &mut Run, label: &str, s: &ProductState, summary: &mut PairSummary) -> Result<Vec<Table>> {
    let traj = ctx.trajectory(s, label)?;
    let kernel = CorrectionKernel::maser(&traj, &ctx.params).context("building the correction kernel")?;
    summary.quadrature_error = Some(kernel.quadrature_error());
    let with_oracle = ctx.cfg.oracle.is_some();
    let mut exact = vec![f64::NAN; traj.len()];
    if with_oracle {
        let hc = ctx.hilbert(&[&traj])?;
        let m = ctx.matrix(&hc)?;
        let mut psi = ctx.coherent_vector(s, &hc)?;
        let mut ev = Evolver::new(&m);
        oracle_series(&mut ev, &mut psi, traj.times(), |k, p| {
            exact[k] = reduced_linear_entropy(p, Subsystem::Field);
            Ok(())
        })?;
    }
    let header: &[&'static str] = if with_oracle {
        &["t", "delta2", "delta_exact"]
    } else {
        &["t", "delta2"]
    };
    let mut ent = Table::new(format!("entropy_{label}"), header);
    let mut ker = Table::new(format!("kernel_{label}"), &["t", "re_c", "im_c", "abs_cum", "delta2"]);
    for (k, &t) in traj.times().iter().enumerate() {
        let d2 = linear_entropy_2nd(&kernel, t)?;
        let mut row = vec![t, d2];
        if with_oracle {
            row.push(exact[k]);
        }
        ent.rows.push(row);
        let c = kernel.c()[k];
        ker.rows.push(vec![t, c.re, c.im, kernel.cum()[k].norm(), linear_entropy_from_cum(&kernel, t)?]);
    }
    Ok(vec![ent, ker])
}

fn oracle_compare_table(
    ctx: &mut Run,
    label: &str,
    [a, b]: [ProductState; 2],
    summary: &mut PairSummary,
) -> Result<Table> {
    let (ta, tb) = (ctx.trajectory(&a, label)?, ctx.trajectory(&b, label)?);
    let hc = ctx.hilbert(&[&ta, &tb])?;
    let m = ctx.matrix(&hc)?;
    let mut pa = ctx.coherent_vector(&a, &hc)?;
    let mut pb = ctx.coherent_vector(&b, &hc)?;
    let (ga, gb) = (ctx.h.group_a(), ctx.h.group_b());
    let mut t = Table::new(
        format!("oracle_compare_{label}"),
        &["t", "field_error", "abs_overlap_exact", "abs_overlap_mf"],
    );
    let mut now = ta.times()[0];
    let mut ev = Evolver::new(&m);
    for k in 0..ta.len() {
        let tk = ta.times()[k];
        ev.advance(&mut pa, tk - now).context("exact evolution")?;
        ev.advance(&mut pb, tk - now).context("exact evolution")?;
        now = tk;
        let (sa, sb) = (&ta.states()[k], &tb.states()[k]);
        t.rows.push(vec![
            tk,
            (field_amplitude(&pa) - sa.x.z()).norm(),
            exact_overlap_pair(&pa, &pb)?.norm(),
            mf_overlap(sa, sb, ga, gb).norm(),
        ]);
    }
    let exact = t.column("abs_overlap_exact").unwrap_or_default();
    let drift = exact.iter().map(|v| (v - exact[0]).abs()).fold(0.0, f64::max);
    summary.exact_overlap_abs_drift = Some(drift);
    summary.field_error_max = t.column("field_error").map(|c| c.into_iter().fold(0.0, f64::max));
    Ok(t)
}

/// Runs the configured experiment and returns every table it produced.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut ctx = Run::new(cfg)?;
    let mut tables = Vec::new();
    let mut pairs = Vec::new();
    for (k, pair) in cfg.initial_pairs.iter().enumerate() {
        let label = pair.label.as_str();
        let (members, ms) = ctx.members(k, pair)?;
        let mut summary = PairSummary {
            label: label.to_string(),
            members: ms,
            ..Default::default()
        };
        match cfg.experiment {
            ExperimentKind::Trajectory => {
                for (m, s) in ["a", "b"].iter().zip(&members) {
                    let traj = ctx.trajectory(s, label)?;
                    let drift = energy_drift(&ctx, &traj)?;
                    summary.energy_drift_rel = Some(summary.energy_drift_rel.unwrap_or(0.0).max(drift));
                    tables.push(trajectory_table(&ctx, format!("trajectory_{label}_{m}"), &traj)?);
                }
            }
            ExperimentKind::OverlapPair => {
                let (a, b) = (ctx.trajectory(&members[0], label)?, ctx.trajectory(&members[1], label)?);
                tables.push(overlap_table(&ctx, label, &a, &b, &mut summary));
            }
            ExperimentKind::Entropy => {
                tables.extend(entropy_tables(&mut ctx, label, &members[0], &mut summary)?);
            }
            ExperimentKind::Lyapunov => {
                tables.push(lyapunov_table(&ctx, label, &members[0], &mut summary)?);
            }
            ExperimentKind::OracleCompare => {
                tables.push(oracle_compare_table(&mut ctx, label, members, &mut summary)?);
            }
            ExperimentKind::Fig1 => {
                let (a, b) = (ctx.trajectory(&members[0], label)?, ctx.trajectory(&members[1], label)?);
                tables.push(overlap_table(&ctx, label, &a, &b, &mut summary));
                tables.push(lyapunov_table(&ctx, label, &members[0], &mut summary)?);
                if cfg.oracle.is_some() {
                    tables.push(oracle_compare_table(&mut ctx, label, members, &mut summary)?);
                }
            }
        }
        pairs.push(summary);
    }
    Ok(RunReport {
        tables,
        pairs,
        oracle: ctx.oracle,
        warnings: ctx.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn decoupled(kind: &str) -> ExperimentConfig {
        parse_config(
            &format!(
                r#"{{
                "experiment": "{kind}",
                "model": {{ "epsilon": 1, "omega": 1, "g": 0, "g_prime": 0, "j": 1.5 }},
                "initial_pairs": [ {{ "label": "p", "a": {{ "x": [1, 0.5], "y": [0.3, 0] }}, "b": {{ "x": [1.4, 0], "y": [0.2, 0.1] }} }} ],
                "t_final": 5.0,
                "sampling_dt": 0.25,
                "oracle": {{ "n_max": 30 }}
            }}"#
            ),
            &[],
        )
        .unwrap()
    }

    #[test]
    fn decoupled_overlap_is_flat() {
        let r = run(&decoupled("overlap-pair")).unwrap();
        let o = r.tables[0].column("mf_overlap_sq").unwrap();
        assert_eq!(o.len(), 21);
        assert!(o.iter().all(|v| (v - o[0]).abs() < 1e-10));
    }

    #[test]
    fn decoupled_oracle_agrees() {
        let r = run(&decoupled("oracle-compare")).unwrap();
        let t = &r.tables[0];
        let (e, m) = (t.column("abs_overlap_exact").unwrap(), t.column("abs_overlap_mf").unwrap());
        for (a, b) in e.iter().zip(&m) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!(r.pairs[0].field_error_max.unwrap() < 1e-8);
        assert!(r.oracle[0].truncation_deficit < 1e-8);
    }

    #[test]
    fn decoupled_entropy_vanishes() {
        let r = run(&decoupled("entropy")).unwrap();
        let t = &r.tables[0];
        assert!(t.column("delta2").unwrap().iter().all(|v| v.abs() < 1e-14));
        assert!(t.column("delta_exact").unwrap().iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn trajectory_tables_for_both_members() {
        let r = run(&decoupled("trajectory")).unwrap();
        assert_eq!(r.tables.len(), 2);
        assert!(r.pairs[0].energy_drift_rel.unwrap() < 1e-8);
    }

    #[test]
    fn projection_is_reported() {
        let mut cfg = decoupled("overlap-pair");
        cfg.energy_target = Some(3.0);
        let r = run(&cfg).unwrap();
        for m in &r.pairs[0].members {
            assert!((m.energy_used - 3.0).abs() < 1e-10);
        }
    }
}
