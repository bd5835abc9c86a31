//! Self-consistent mean-field flow of the two labels and their generalized
//! actions.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::{overlap, overlap_modulus_sq, CoherentLabel, GeneratorIndex, GroupKind};
use crate::model::{mean_field_coeffs, BilinearHamiltonian};
use crate::ode::{integrate_sampled, StepControl};
use crate::{Error, Result};

/// `e^{i(η_x+η_y)} |x⟩ ⊗ |y⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductState {
    pub x: CoherentLabel,
    pub y: CoherentLabel,
    pub eta_x: f64,
    pub eta_y: f64,
}

impl ProductState {
    pub fn new(x: CoherentLabel, y: CoherentLabel) -> Self {
        Self {
            x,
            y,
            eta_x: 0.0,
            eta_y: 0.0,
        }
    }

    pub fn from_parts(x: Complex64, y: Complex64) -> Result<Self> {
        Ok(Self::new(CoherentLabel::new(x)?, CoherentLabel::new(y)?))
    }

    pub fn phase(&self) -> f64 {
        self.eta_x + self.eta_y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub dense_output_dt: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.1,
            dense_output_dt: 0.01,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |v: f64| v > 0.0 && v <= 1e-2;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::InvalidIntegratorConfig("tolerances must lie in (0, 1e-2]"));
        }
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return Err(Error::InvalidIntegratorConfig("max_step must be positive"));
        }
        if !(self.dense_output_dt > 0.0 && self.dense_output_dt.is_finite()) {
            return Err(Error::InvalidIntegratorConfig("dense_output_dt must be positive"));
        }
        Ok(())
    }

    fn step_control(&self) -> StepControl {
        StepControl {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
        }
    }
}

/// `(dx/dt, dy/dt)` from the mean-field coefficients at the current labels.
pub fn label_rhs(h: &BilinearHamiltonian, s: &ProductState) -> (Complex64, Complex64) {
    let m = mean_field_coeffs(h, s.x, s.y);
    (
        label_velocity(h.group_a(), s.x.z(), &m.a),
        label_velocity(h.group_b(), s.y.z(), &m.b),
    )
}

fn label_velocity(g: GroupKind, z: Complex64, c: &[Complex64; 3]) -> Complex64 {
    let i = Complex64::i();
    let (c0, cp) = (c[GeneratorIndex::Zero.pos()], c[GeneratorIndex::Plus.pos()]);
    match g {
        GroupKind::Heisenberg => -i * c0 * z - i * cp,
        GroupKind::Spin(_) => -i * cp - i * c0 * z + i * cp.conj() * z * z,
    }
}

/// Integrands of the fiducial-0 and fiducial-1 generalized actions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionRates {
    pub fiducial0: f64,
    pub fiducial1: f64,
}

/// `⟨n|D†(z)(i∂_t − h)D(z)|n⟩` for `n = 0, 1`, with `h = Σ coeffs[k] A_k`.
pub fn action_rate(g: GroupKind, z: CoherentLabel, zdot: Complex64, coeffs: &[Complex64; 3]) -> ActionRates {
    ActionRates {
        fiducial0: action_rate_for(g, z.z(), zdot, coeffs, 0),
        fiducial1: action_rate_for(g, z.z(), zdot, coeffs, 1),
    }
}

/// Same as [`action_rate`] for an arbitrary fiducial index `n`.
pub fn action_rate_for(g: GroupKind, z: Complex64, zdot: Complex64, c: &[Complex64; 3], n: usize) -> f64 {
    let (c0, cp, cm) = (c[0], c[1], c[2]);
    let geo = (z.conj() * zdot).im;
    match g {
        GroupKind::Heisenberg => {
            let energy = c0 * (z.norm_sqr() + n as f64) + cp * z.conj() + cm * z;
            -geo - energy.re
        }
        GroupKind::Spin(_) => {
            let m = g.fiducial_weight(n);
            let r2 = z.norm_sqr();
            let inv = 1.0 / (1.0 + r2);
            let g0 = c0 * (1.0 - r2) - 2.0 * cp * z.conj() - 2.0 * cm * z;
            2.0 * m * geo * inv - m * g0.re * inv
        }
    }
}

// state layout: [Re x, Im x, Re y, Im y, η_x, η_y, S1_x, S1_y]
const DIM: usize = 8;

fn flow(h: &BilinearHamiltonian, u: &[f64; DIM]) -> [f64; DIM] {
    let x = Complex64::new(u[0], u[1]);
    let y = Complex64::new(u[2], u[3]);
    // labels are finite while the integrator is healthy; an overflow shows
    // up as a non-finite error estimate and a step rejection
    let (lx, ly) = match (CoherentLabel::new(x), CoherentLabel::new(y)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return [f64::NAN; DIM],
    };
    let m = mean_field_coeffs(h, lx, ly);
    let dx = label_velocity(h.group_a(), x, &m.a);
    let dy = label_velocity(h.group_b(), y, &m.b);
    let ax = action_rate(h.group_a(), lx, dx, &m.a);
    let ay = action_rate(h.group_b(), ly, dy, &m.b);
    [
        dx.re,
        dx.im,
        dy.re,
        dy.im,
        ax.fiducial0,
        ay.fiducial0,
        ax.fiducial1,
        ay.fiducial1,
    ]
}

fn pack(s: &ProductState) -> [f64; DIM] {
    [
        s.x.z().re,
        s.x.z().im,
        s.y.z().re,
        s.y.z().im,
        s.eta_x,
        s.eta_y,
        0.0,
        0.0,
    ]
}

fn unpack(u: &[f64; DIM]) -> Result<ProductState> {
    Ok(ProductState {
        x: CoherentLabel::from_parts(u[0], u[1])?,
        y: CoherentLabel::from_parts(u[2], u[3])?,
        eta_x: u[4],
        eta_y: u[5],
    })
}

/// Sampled mean-field trajectory with running actions.
///
/// `s0` is `(η_x+η_y)(t) − (η_x+η_y)(0)`; `s1` is the same for the
/// fiducial-1 actions. Both start at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<ProductState>,
    s0: Vec<f64>,
    s1: Vec<f64>,
    raw: Vec<[f64; DIM]>,
    rates: Vec<[f64; DIM]>,
    eta0: f64,
}

/// Trajectory data at an arbitrary time inside the sampled range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub state: ProductState,
    pub s0: f64,
    pub s1: f64,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn s0(&self) -> &[f64] {
        &self.s0
    }

    pub fn s1(&self) -> &[f64] {
        &self.s1
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn last(&self) -> &ProductState {
        &self.states[self.states.len() - 1]
    }

    pub fn point(&self, k: usize) -> TrajectoryPoint {
        TrajectoryPoint {
            state: self.states[k],
            s0: self.s0[k],
            s1: self.s1[k],
        }
    }

    /// Cubic Hermite interpolation between samples using the exact flow
    /// derivatives stored at each sample.
    pub fn at(&self, t: f64) -> Result<TrajectoryPoint> {
        let (start, end) = (self.t_start(), self.t_end());
        let slack = 1e-12 * (end - start).abs().max(1.0);
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::TimeOutOfRange { t, start, end });
        }
        let t = t.clamp(start, end);
        let k = match self.times.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(k) => return Ok(self.point(k)),
            Err(k) => k.clamp(1, self.times.len() - 1) - 1,
        };
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let hstep = t1 - t0;
        let s = (t - t0) / hstep;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let (a, b) = (&self.raw[k], &self.raw[k + 1]);
        let (da, db) = (&self.rates[k], &self.rates[k + 1]);
        let mut u = [0.0; DIM];
        for i in 0..DIM {
            u[i] = h00 * a[i] + h10 * hstep * da[i] + h01 * b[i] + h11 * hstep * db[i];
        }
        Ok(TrajectoryPoint {
            state: unpack(&u)?,
            s0: u[4] + u[5] - self.eta0,
            s1: u[6] + u[7],
        })
    }
}

/// Integrates the labels, the fiducial-0 phases and the fiducial-1 actions.
pub fn integrate(
    h: &BilinearHamiltonian,
    s0: &ProductState,
    t_final: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument("t_final must be positive"));
    }
    cfg.validate()?;
    let mut raw = Vec::new();
    let mut times = Vec::new();
    integrate_sampled(
        |_, u| flow(h, u),
        0.0,
        pack(s0),
        t_final,
        cfg.dense_output_dt,
        cfg.step_control(),
        |t, u| {
            times.push(t);
            raw.push(*u);
        },
    )?;
    let eta0 = s0.phase();
    let mut states = Vec::with_capacity(raw.len());
    let mut s0v = Vec::with_capacity(raw.len());
    let mut s1v = Vec::with_capacity(raw.len());
    let mut rates = Vec::with_capacity(raw.len());
    for u in &raw {
        states.push(unpack(u)?);
        s0v.push(u[4] + u[5] - eta0);
        s1v.push(u[6] + u[7]);
        rates.push(flow(h, u));
    }
    Ok(Trajectory {
        times,
        states,
        s0: s0v,
        s1: s1v,
        raw,
        rates,
        eta0,
    })
}

/// Advances a state by `dt` without keeping intermediate samples.
pub fn propagate(h: &BilinearHamiltonian, s: &ProductState, dt: f64, cfg: &IntegratorConfig) -> Result<ProductState> {
    cfg.validate()?;
    let mut end = pack(s);
    integrate_sampled(|_, u| flow(h, u), 0.0, end, dt, dt, cfg.step_control(), |_, u| {
        end = *u;
    })?;
    unpack(&end)
}

/// Labels in classical-limit units: `Z_field = x/√(4J)`, `Z_spin = y`, `t = t_c/(4J)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledLabels {
    pub z_field: Complex64,
    pub z_spin: Complex64,
    pub time_scale: f64,
}

pub fn scale_to_classical(s: &ProductState, j: f64) -> Result<ScaledLabels> {
    if !(j > 0.0) {
        return Err(Error::InvalidSpin(j));
    }
    let four_j = 4.0 * j;
    Ok(ScaledLabels {
        z_field: s.x.z() / four_j.sqrt(),
        z_spin: s.y.z(),
        time_scale: four_j,
    })
}

/// Inverse of [`scale_to_classical`] (phases reset to zero).
pub fn unscale_from_classical(scaled: &ScaledLabels) -> Result<ProductState> {
    ProductState::from_parts(scaled.z_field * scaled.time_scale.sqrt(), scaled.z_spin)
}

/// `⟨ψ(s1)|ψ(s2)⟩` for two mean-field states, phases included.
pub fn mf_overlap(s1: &ProductState, s2: &ProductState, g_a: GroupKind, g_b: GroupKind) -> Complex64 {
    let phase = Complex64::from_polar(1.0, s2.phase() - s1.phase());
    phase * overlap(g_a, s1.x, s2.x) * overlap(g_b, s1.y, s2.y)
}

/// Mean-field distances `d = −ln |⟨z1|z2⟩|²` for the field and the spin.
pub fn mf_distances(s1: &ProductState, s2: &ProductState, g_a: GroupKind, g_b: GroupKind) -> (f64, f64) {
    (
        -overlap_modulus_sq(g_a, s1.x, s2.x).ln(),
        -overlap_modulus_sq(g_b, s1.y, s2.y).ln(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate {
    pub exponent: f64,
    /// `(t, running exponent)` after each renormalization window.
    pub running: Vec<(f64, f64)>,
}

/// Largest Lyapunov exponent from a renormalized neighbouring trajectory.
///
/// Distances are Euclidean in `(Re X, Im X, Re y, Im y)` with
/// `X = x/√(4J)` (`J` from the spin degree; 1/4 when there is none).
pub fn lyapunov_estimate(
    h: &BilinearHamiltonian,
    s0: &ProductState,
    delta0: f64,
    t_total: f64,
    renorm_interval: f64,
    cfg: &IntegratorConfig,
) -> Result<LyapunovEstimate> {
    if !(delta0 > 0.0 && delta0.is_finite()) {
        return Err(Error::InvalidArgument("delta0 must be positive"));
    }
    if !(renorm_interval > 0.0 && t_total >= renorm_interval) {
        return Err(Error::InvalidArgument("need 0 < renorm_interval <= t_total"));
    }
    let field_scale = match (h.group_a(), h.group_b()) {
        (GroupKind::Spin(s), _) | (_, GroupKind::Spin(s)) => 1.0 / (4.0 * s.j()).sqrt(),
        _ => 1.0,
    };
    let scaled = |s: &ProductState| {
        let (x, y) = (s.x.z() * field_scale, s.y.z());
        [x.re, x.im, y.re, y.im]
    };
    let from_scaled = |v: [f64; 4], like: &ProductState| -> Result<ProductState> {
        let mut s = ProductState::from_parts(
            Complex64::new(v[0], v[1]) / field_scale,
            Complex64::new(v[2], v[3]),
        )?;
        s.eta_x = like.eta_x;
        s.eta_y = like.eta_y;
        Ok(s)
    };

    let mut reference = *s0;
    let mut shifted = *s0;
    shifted.x = CoherentLabel::new(s0.x.z() + delta0 / field_scale)?;

    let windows = (t_total / renorm_interval).round().max(1.0) as usize;
    let mut log_sum = 0.0;
    let mut running = Vec::with_capacity(windows);
    for w in 1..=windows {
        reference = propagate(h, &reference, renorm_interval, cfg)?;
        shifted = propagate(h, &shifted, renorm_interval, cfg)?;
        let (a, b) = (scaled(&reference), scaled(&shifted));
        let mut diff = [0.0; 4];
        for i in 0..4 {
            diff[i] = b[i] - a[i];
        }
        let d = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(d > 0.0) {
            return Err(Error::InvalidArgument("neighbouring trajectories coincided"));
        }
        log_sum += (d / delta0).ln();
        let mut renorm = [0.0; 4];
        for i in 0..4 {
            renorm[i] = a[i] + diff[i] * (delta0 / d);
        }
        shifted = from_scaled(renorm, &shifted)?;
        let t = w as f64 * renorm_interval;
        running.push((t, log_sum / t));
    }
    Ok(LyapunovEstimate {
        exponent: log_sum / (windows as f64 * renorm_interval),
        running,
    })
}
