//! First-order correction kernel `c(t)`, its running integral `C(t)` and
//! the second-order linear entropy built from them.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::{group_relation_coeffs, GeneratorIndex, GroupKind};
use crate::dynamics::{ProductState, Trajectory, TrajectoryPoint};
use crate::model::{BilinearHamiltonian, MaserParams};
use crate::{Error, Result};

/// `σ`: product of `‖A_+|fiducial⟩‖` over both degrees of freedom.
pub fn sigma(h: &BilinearHamiltonian) -> f64 {
    h.group_a().raising_norm() * h.group_b().raising_norm()
}

fn action_phase(p: &TrajectoryPoint) -> Complex64 {
    Complex64::from_polar(1.0, p.s0 - p.s1)
}

fn general_at(p: &TrajectoryPoint, h: &BilinearHamiltonian) -> Complex64 {
    let plus = GeneratorIndex::Plus.pos();
    let ga: [Complex64; 3] = GeneratorIndex::ALL.map(|i| group_relation_coeffs(h.group_a(), i, p.state.x).g[plus]);
    let gb: [Complex64; 3] = GeneratorIndex::ALL.map(|j| group_relation_coeffs(h.group_b(), j, p.state.y).g[plus]);
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, row) in h.gamma().iter().enumerate() {
        for (j, gamma) in row.iter().enumerate() {
            sum += gamma * ga[i] * gb[j];
        }
    }
    action_phase(p) * sigma(h) * sum
}

fn maser_at(p: &TrajectoryPoint, m: &MaserParams) -> Complex64 {
    let y = p.state.y.z();
    let kappa = m.normalization.factor(m.j);
    let pref = (2.0 * m.j.j()).sqrt() * kappa;
    action_phase(p) * pref * (m.g_prime - m.g * y * y) / (1.0 + y.norm_sqr())
}

/// `c(t) = σ e^{i(S₀−S₁)} Σ_ij γ_ij g^A_{i+}(x) g^B_{j+}(y)`.
pub fn c_general(traj: &Trajectory, h: &BilinearHamiltonian, t: f64) -> Result<Complex64> {
    Ok(general_at(&traj.at(t)?, h))
}

/// Closed form of the kernel for the maser,
/// `√(2J)·κ·e^{i(S₀−S₁)} (G′ − G y²)/(1 + |y|²)` with `κ` the coupling
/// normalization (`1/√J` or `1/√(2J)`).
pub fn c_maser(traj: &Trajectory, p: &MaserParams, t: f64) -> Result<Complex64> {
    Ok(maser_at(&traj.at(t)?, p))
}

/// Kernel samples on the trajectory grid with `C(t) = ∫₀ᵗ c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionKernel {
    times: Vec<f64>,
    c: Vec<Complex64>,
    cum: Vec<Complex64>,
    quadrature_error: f64,
}

impl CorrectionKernel {
    /// Builds the kernel from any evaluator of `c` at trajectory points. Each
    /// sample interval is integrated by trapezoid at one and two panels and
    /// Richardson-combined; the largest combined correction is kept as the
    /// quadrature error estimate.
    pub fn from_trajectory<F>(traj: &Trajectory, mut kernel: F) -> Result<Self>
    where
        F: FnMut(&TrajectoryPoint) -> Complex64,
    {
        let times = traj.times().to_vec();
        let c: Vec<Complex64> = (0..traj.len()).map(|k| kernel(&traj.point(k))).collect();
        let mut cum = Vec::with_capacity(times.len());
        cum.push(Complex64::new(0.0, 0.0));
        let mut err: f64 = 0.0;
        for k in 1..times.len() {
            let (t0, t1) = (times[k - 1], times[k]);
            let hstep = t1 - t0;
            let mid = kernel(&traj.at(0.5 * (t0 + t1))?);
            let coarse = (c[k - 1] + c[k]) * (0.5 * hstep);
            let fine = (c[k - 1] + mid * 2.0 + c[k]) * (0.25 * hstep);
            let corr = (fine - coarse) / 3.0;
            err = err.max(corr.norm());
            cum.push(cum[k - 1] + fine + corr);
        }
        Ok(Self {
            times,
            c,
            cum,
            quadrature_error: err,
        })
    }

    pub fn general(traj: &Trajectory, h: &BilinearHamiltonian) -> Result<Self> {
        Self::from_trajectory(traj, |p| general_at(p, h))
    }

    pub fn maser(traj: &Trajectory, p: &MaserParams) -> Result<Self> {
        Self::from_trajectory(traj, |q| maser_at(q, p))
    }

    /// Kernel from explicit samples (trapezoidal running integral).
    pub fn from_samples(times: Vec<f64>, c: Vec<Complex64>) -> Result<Self> {
        if times.len() != c.len() || times.is_empty() {
            return Err(Error::InvalidArgument("kernel samples need matching, non-empty sequences"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("kernel times must increase strictly"));
        }
        let mut cum = Vec::with_capacity(times.len());
        cum.push(Complex64::new(0.0, 0.0));
        for k in 1..times.len() {
            cum.push(cum[k - 1] + (c[k - 1] + c[k]) * (0.5 * (times[k] - times[k - 1])));
        }
        Ok(Self {
            times,
            c,
            cum,
            quadrature_error: 0.0,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn c(&self) -> &[Complex64] {
        &self.c
    }

    pub fn cum(&self) -> &[Complex64] {
        &self.cum
    }

    pub fn quadrature_error(&self) -> f64 {
        self.quadrature_error
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let (start, end) = (self.times[0], self.times[self.times.len() - 1]);
        let slack = 1e-12 * (end - start).abs().max(1.0);
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::TimeOutOfRange { t, start, end });
        }
        let t = t.clamp(start, end);
        let k = match self.times.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        Ok((k, t - self.times[k]))
    }

    fn c_linear(&self, k: usize, dt: f64) -> Complex64 {
        if dt == 0.0 || k + 1 == self.times.len() {
            return self.c[k];
        }
        let w = dt / (self.times[k + 1] - self.times[k]);
        self.c[k] * (1.0 - w) + self.c[k + 1] * w
    }

    /// `c(t)`, linear between samples.
    pub fn c_at(&self, t: f64) -> Result<Complex64> {
        let (k, dt) = self.locate(t)?;
        Ok(self.c_linear(k, dt))
    }

    /// `C(t)`, exact at samples, trapezoidal inside an interval.
    pub fn cum_at(&self, t: f64) -> Result<Complex64> {
        let (k, dt) = self.locate(t)?;
        if dt == 0.0 {
            return Ok(self.cum[k]);
        }
        Ok(self.cum[k] + (self.c[k] + self.c_linear(k, dt)) * (0.5 * dt))
    }
}

/// Initial label pair and the fiducial indices excited by the coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoorwayState {
    pub base: ProductState,
    pub field_index: usize,
    pub spin_index: usize,
}

impl DoorwayState {
    pub fn new(base: ProductState) -> Self {
        Self {
            base,
            field_index: 1,
            spin_index: 1,
        }
    }

    pub fn validate(&self, g_a: GroupKind, g_b: GroupKind) -> Result<()> {
        for (g, n) in [(g_a, self.field_index), (g_b, self.spin_index)] {
            if let GroupKind::Spin(s) = g {
                if n >= s.dim() {
                    return Err(Error::FiducialOutOfRange {
                        index: n,
                        limit: s.dim(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// `|ψ(t)⟩ ≈ |I⟩ − iC(t)|D⟩` in the mean-field interaction picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderState {
    pub initial: Complex64,
    pub doorway: Complex64,
    /// `1 + |C|²`; far from 1 means first order no longer holds.
    pub norm_estimate: f64,
}

pub fn first_order_state(kernel: &CorrectionKernel, t: f64) -> Result<FirstOrderState> {
    let cum = kernel.cum_at(t)?;
    Ok(FirstOrderState {
        initial: Complex64::new(1.0, 0.0),
        doorway: -Complex64::i() * cum,
        norm_estimate: 1.0 + cum.norm_sqr(),
    })
}

/// `δ(t) = 4 Re ∫₀ᵗ dt₁ ∫₀^{t₁} dt₂ c*(t₁) c(t₂)`, the outer integral by
/// composite Simpson over the samples with the inner one taken from `C`.
pub fn linear_entropy_2nd(kernel: &CorrectionKernel, t: f64) -> Result<f64> {
    let (k, dt) = kernel.locate(t)?;
    let f = |i: usize| (kernel.c[i].conj() * kernel.cum[i]).re;
    let ts = &kernel.times;
    let mut total = 0.0;
    let mut i = 0;
    // Simpson pairs while at least two intervals remain, then one trapezoid
    while i + 2 <= k {
        let (h0, h1) = (ts[i + 1] - ts[i], ts[i + 2] - ts[i + 1]);
        total += simpson_uneven(h0, h1, f(i), f(i + 1), f(i + 2));
        i += 2;
    }
    if i < k {
        total += 0.5 * (ts[k] - ts[i]) * (f(i) + f(k));
    }
    if dt > 0.0 {
        let cend = kernel.c_linear(k, dt);
        let cum_end = kernel.cum_at(t)?;
        total += 0.5 * dt * (f(k) + (cend.conj() * cum_end).re);
    }
    Ok(4.0 * total)
}

fn simpson_uneven(h0: f64, h1: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    let s = h0 + h1;
    s / 6.0 * ((2.0 - h1 / h0) * f0 + s * s / (h0 * h1) * f1 + (2.0 - h0 / h1) * f2)
}

/// `2|C(t)|²`, equal to [`linear_entropy_2nd`] up to quadrature error.
pub fn linear_entropy_from_cum(kernel: &CorrectionKernel, t: f64) -> Result<f64> {
    Ok(2.0 * kernel.cum_at(t)?.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate, IntegratorConfig};
    use crate::model::{maser_hamiltonian, CouplingNormalization};
    use alloc::vec;

    fn grid(n: usize, dt: f64) -> Vec<f64> {
        (0..n).map(|k| k as f64 * dt).collect()
    }

    #[test]
    fn zero_and_constant_kernels() {
        let t = grid(101, 0.01);
        let zero = CorrectionKernel::from_samples(t.clone(), vec![Complex64::new(0.0, 0.0); 101]).unwrap();
        assert_eq!(linear_entropy_2nd(&zero, 1.0).unwrap(), 0.0);
        assert_eq!(first_order_state(&zero, 0.7).unwrap().doorway, Complex64::new(0.0, 0.0));

        let c0 = Complex64::new(0.3, -0.4);
        let k = CorrectionKernel::from_samples(t, vec![c0; 101]).unwrap();
        for tt in [0.0, 0.37, 0.5, 1.0] {
            let d = linear_entropy_2nd(&k, tt).unwrap();
            assert!((d - 2.0 * c0.norm_sqr() * tt * tt).abs() < 1e-13, "t = {tt}");
        }
        let f = first_order_state(&k, 0.0).unwrap();
        assert_eq!((f.initial, f.doorway), (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn oscillating_kernel_identity() {
        let t = grid(2001, 0.005);
        let c: Vec<Complex64> = t
            .iter()
            .map(|s| Complex64::from_polar(0.7 + 0.2 * s, 2.3 * s))
            .collect();
        let k = CorrectionKernel::from_samples(t, c).unwrap();
        let d = linear_entropy_2nd(&k, 8.0).unwrap();
        let e = linear_entropy_from_cum(&k, 8.0).unwrap();
        assert!((d - e).abs() < 1e-4 * e.max(1.0), "{d} vs {e}");
        assert!(k.c_at(11.0).is_err());
    }

    #[test]
    fn general_and_maser_kernels_agree() {
        for norm in [CouplingNormalization::SqrtJ, CouplingNormalization::SqrtTwoJ] {
            let p = MaserParams::new(1.0, 1.0, 0.5, 0.2, 4.5).unwrap().with_normalization(norm);
            let h = maser_hamiltonian(&p).unwrap();
            let s = ProductState::from_parts(Complex64::new(2.0, 0.5), Complex64::new(-0.3, 0.2)).unwrap();
            let traj = integrate(&h, &s, 2.0, &IntegratorConfig::default()).unwrap();
            for t in [0.0, 0.3, 1.234, 2.0] {
                let a = c_general(&traj, &h, t).unwrap();
                let b = c_maser(&traj, &p, t).unwrap();
                assert!((a - b).norm() < 1e-12, "{a} vs {b}");
            }
            assert!(c_maser(&traj, &p, 3.0).is_err());
        }
    }

    #[test]
    fn maser_kernel_at_the_pole() {
        let p = MaserParams::new(1.0, 1.0, 0.5, 0.2, 4.5).unwrap();
        let h = maser_hamiltonian(&p).unwrap();
        let s = ProductState::from_parts(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let traj = integrate(&h, &s, 0.1, &IntegratorConfig::default()).unwrap();
        let c = c_maser(&traj, &p, 0.0).unwrap();
        assert!((c.norm() - 2f64.sqrt() * 0.2).abs() < 1e-14);

        let p0 = MaserParams::new(1.0, 1.0, 0.5, 0.0, 4.5).unwrap();
        let traj0 = integrate(&maser_hamiltonian(&p0).unwrap(), &s, 0.1, &IntegratorConfig::default()).unwrap();
        assert_eq!(c_maser(&traj0, &p0, 0.0).unwrap().norm(), 0.0);
    }

    #[test]
    fn doorway_indices() {
        let s = ProductState::new(crate::algebra::CoherentLabel::zero(), crate::algebra::CoherentLabel::zero());
        let d = DoorwayState::new(s);
        assert!(d.validate(GroupKind::Heisenberg, GroupKind::spin(0.5).unwrap()).is_ok());
        let mut bad = d;
        bad.spin_index = 2;
        assert!(bad.validate(GroupKind::Heisenberg, GroupKind::spin(0.5).unwrap()).is_err());
    }
}
