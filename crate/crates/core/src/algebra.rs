//! Coherent-state kinematics for the two groups.
//!
//! Labels follow the displacement conventions in [`crate::conventions`]:
//! `|z⟩ = exp(z a† − z* a)|0⟩` for the oscillator and
//! `|z⟩ = exp[(atan|z|/|z|)(z J₊ − z* J₋)]|J,−J⟩` for the spin, which is the
//! stereographic state `(1+|z|²)^{−J} Σ_k z^k √C(2J,k) |J,−J+k⟩`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

/// Default bound on `1 − ‖v‖²` for truncated oscillator vectors.
pub const DEFAULT_NORM_DEFICIT_TOL: f64 = 1e-10;

/// Spin magnitude `J`, stored as the integer `2J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinMagnitude {
    twice: u32,
}

impl SpinMagnitude {
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !j.is_finite() || j <= 0.0 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self {
            twice: twice.round() as u32,
        })
    }

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { twice })
    }

    pub fn j(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    /// Dimension `2J + 1` of the irreducible representation.
    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }
}

/// Which group a degree of freedom belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// h(3): generators `a†a`, `a†`, `a`.
    Heisenberg,
    /// su(2) in the spin-`J` irrep: generators `J_z`, `J₊`, `J₋`.
    Spin(SpinMagnitude),
}

impl GroupKind {
    pub fn spin(j: f64) -> Result<Self> {
        SpinMagnitude::new(j).map(GroupKind::Spin)
    }

    pub fn j(self) -> Option<f64> {
        match self {
            GroupKind::Heisenberg => None,
            GroupKind::Spin(s) => Some(s.j()),
        }
    }

    /// `‖A₊|fiducial⟩‖`: 1 for `a†|0⟩`, `√(2J)` for `J₊|J,−J⟩`.
    pub fn raising_norm(self) -> f64 {
        match self {
            GroupKind::Heisenberg => 1.0,
            GroupKind::Spin(s) => (s.twice as f64).sqrt(),
        }
    }

    /// Eigenvalue of `A₀` on the fiducial-`n` state (`n` for the oscillator,
    /// `−J + n` for the spin).
    pub fn fiducial_weight(self, n: usize) -> f64 {
        match self {
            GroupKind::Heisenberg => n as f64,
            GroupKind::Spin(s) => n as f64 - s.j(),
        }
    }
}

/// Complex label of a coherent state. Always finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel(Complex64);

impl CoherentLabel {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(Self(z))
        } else {
            Err(Error::NonFiniteLabel)
        }
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn zero() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    #[inline]
    pub fn z(self) -> Complex64 {
        self.0
    }
}

/// Generator index `{0, +, −}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorIndex {
    /// `a†a` or `J_z`.
    Zero,
    /// `a†` or `J₊`.
    Plus,
    /// `a` or `J₋`.
    Minus,
}

impl GeneratorIndex {
    pub const ALL: [GeneratorIndex; 3] = [
        GeneratorIndex::Zero,
        GeneratorIndex::Plus,
        GeneratorIndex::Minus,
    ];

    #[inline]
    pub fn pos(self) -> usize {
        match self {
            GeneratorIndex::Zero => 0,
            GeneratorIndex::Plus => 1,
            GeneratorIndex::Minus => 2,
        }
    }
}

/// Coefficients of `D†(z) A_i D(z) = Σ_k g[k] A_k + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupRelationRow {
    pub g: [Complex64; 3],
    pub k: Complex64,
}

/// `|⟨z1|z2⟩|²`.
pub fn overlap_modulus_sq(g: GroupKind, z1: CoherentLabel, z2: CoherentLabel) -> f64 {
    let d2 = (z1.0 - z2.0).norm_sqr();
    match g {
        GroupKind::Heisenberg => (-d2).exp(),
        GroupKind::Spin(s) => {
            let base = 1.0 - d2 / ((1.0 + z1.0.norm_sqr()) * (1.0 + z2.0.norm_sqr()));
            // exact base is non-negative; antipodal labels can round below 0
            base.max(0.0).powi(s.twice as i32)
        }
    }
}

/// Full complex overlap `⟨z1|z2⟩`.
pub fn overlap(g: GroupKind, z1: CoherentLabel, z2: CoherentLabel) -> Complex64 {
    if z1 == z2 {
        return Complex64::new(1.0, 0.0);
    }
    let (a, b) = (z1.0, z2.0);
    match g {
        GroupKind::Heisenberg => (-0.5 * a.norm_sqr() - 0.5 * b.norm_sqr() + a.conj() * b).exp(),
        GroupKind::Spin(s) => {
            let ratio = (1.0 + a.conj() * b)
                / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt();
            ratio.powi(s.twice as i32)
        }
    }
}

/// `⟨z|A_i|z⟩`.
pub fn expectation(g: GroupKind, i: GeneratorIndex, z: CoherentLabel) -> Complex64 {
    let z = z.0;
    match g {
        GroupKind::Heisenberg => match i {
            GeneratorIndex::Zero => Complex64::new(z.norm_sqr(), 0.0),
            GeneratorIndex::Plus => z.conj(),
            GeneratorIndex::Minus => z,
        },
        GroupKind::Spin(s) => {
            let j = s.j();
            let r2 = z.norm_sqr();
            let n = 1.0 + r2;
            match i {
                GeneratorIndex::Zero => Complex64::new(-j * (1.0 - r2) / n, 0.0),
                GeneratorIndex::Plus => z.conj() * (2.0 * j / n),
                GeneratorIndex::Minus => z * (2.0 * j / n),
            }
        }
    }
}

/// Row `i` of the displacement relation `A_i D(z) = D(z)(Σ_k g_ik A_k + k_i)`.
pub fn group_relation_coeffs(g: GroupKind, i: GeneratorIndex, z: CoherentLabel) -> GroupRelationRow {
    let z = z.0;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match g {
        GroupKind::Heisenberg => match i {
            GeneratorIndex::Zero => GroupRelationRow {
                g: [one, z, z.conj()],
                k: Complex64::new(z.norm_sqr(), 0.0),
            },
            GeneratorIndex::Plus => GroupRelationRow {
                g: [zero, one, zero],
                k: z.conj(),
            },
            GeneratorIndex::Minus => GroupRelationRow {
                g: [zero, zero, one],
                k: z,
            },
        },
        GroupKind::Spin(_) => {
            let r2 = z.norm_sqr();
            let inv = 1.0 / (1.0 + r2);
            let g = match i {
                GeneratorIndex::Zero => [
                    Complex64::new((1.0 - r2) * inv, 0.0),
                    z * inv,
                    z.conj() * inv,
                ],
                GeneratorIndex::Plus => [
                    z.conj() * (-2.0 * inv),
                    Complex64::new(inv, 0.0),
                    -(z.conj() * z.conj()) * inv,
                ],
                GeneratorIndex::Minus => [
                    z * (-2.0 * inv),
                    -(z * z) * inv,
                    Complex64::new(inv, 0.0),
                ],
            };
            GroupRelationRow { g, k: zero }
        }
    }
}

/// Applies generator `i` to `v` in the truncated basis of `g`
/// (`|n⟩`, or `|J,−J+k⟩` indexed by `k`), writing into `out`.
/// The oscillator raising operator drops the component leaving the basis.
pub fn apply_generator(g: GroupKind, i: GeneratorIndex, v: &[Complex64], out: &mut [Complex64]) {
    let len = v.len();
    debug_assert_eq!(len, out.len());
    out.fill(Complex64::new(0.0, 0.0));
    match i {
        GeneratorIndex::Zero => {
            for k in 0..len {
                out[k] = v[k] * g.fiducial_weight(k);
            }
        }
        GeneratorIndex::Plus => {
            for k in 1..len {
                out[k] = v[k - 1] * raise_element(g, k - 1);
            }
        }
        GeneratorIndex::Minus => {
            for k in 0..len.saturating_sub(1) {
                out[k] = v[k + 1] * raise_element(g, k);
            }
        }
    }
}

/// `⟨k+1|A₊|k⟩` in the basis of `g`.
#[inline]
pub fn raise_element(g: GroupKind, k: usize) -> f64 {
    match g {
        GroupKind::Heisenberg => ((k + 1) as f64).sqrt(),
        GroupKind::Spin(s) => {
            let twice = s.twice as f64;
            let k = k as f64;
            ((k + 1.0) * (twice - k)).max(0.0).sqrt()
        }
    }
}

/// `D(z)|fiducial_index⟩` with its truncation loss.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacedVector {
    pub amplitudes: Vec<Complex64>,
    /// `1 − ‖v‖²`; zero up to rounding for the spin.
    pub norm_deficit: f64,
}

pub fn displaced_basis_vector(
    g: GroupKind,
    z: CoherentLabel,
    fiducial_index: usize,
    truncation: usize,
) -> Result<DisplacedVector> {
    displaced_basis_vector_with_tolerance(g, z, fiducial_index, truncation, DEFAULT_NORM_DEFICIT_TOL)
}

/// As [`displaced_basis_vector`], failing when the norm deficit exceeds `tolerance`.
/// `truncation` is ignored for the spin, whose basis has `2J + 1` states.
pub fn displaced_basis_vector_with_tolerance(
    g: GroupKind,
    z: CoherentLabel,
    fiducial_index: usize,
    truncation: usize,
    tolerance: f64,
) -> Result<DisplacedVector> {
    let dim = match g {
        GroupKind::Heisenberg => {
            if fiducial_index >= truncation {
                return Err(Error::FiducialOutOfRange {
                    index: fiducial_index,
                    limit: truncation,
                });
            }
            truncation
        }
        GroupKind::Spin(s) => {
            if fiducial_index > s.twice as usize {
                return Err(Error::FiducialOutOfRange {
                    index: fiducial_index,
                    limit: s.twice as usize + 1,
                });
            }
            s.dim()
        }
    };

    let mut v = coherent_amplitudes(g, z.0, dim);

    // D(z)|n⟩ ∝ (D A₊ D†)^n D(z)|0⟩ and D A₊ D† = Σ_k g₊ₖ(−z) A_k + k₊(−z).
    // Each raising step only feeds components upwards, so the truncated
    // result is exact on the kept range.
    if fiducial_index > 0 {
        let row = group_relation_coeffs(g, GeneratorIndex::Plus, CoherentLabel(-z.0));
        let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        for step in 0..fiducial_index {
            acc.fill(Complex64::new(0.0, 0.0));
            for (idx, gen) in GeneratorIndex::ALL.iter().enumerate() {
                let c = row.g[idx];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                apply_generator(g, *gen, &v, &mut scratch);
                for (a, s) in acc.iter_mut().zip(&scratch) {
                    *a += c * s;
                }
            }
            for (a, x) in acc.iter_mut().zip(&v) {
                *a += row.k * x;
            }
            // ‖A₊|n⟩‖ on the fiducial ladder
            let norm = raise_element(g, step);
            for (x, a) in v.iter_mut().zip(&acc) {
                *x = a / norm;
            }
        }
    }

    let norm_sq: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    let norm_deficit = (1.0 - norm_sq).max(0.0);
    if matches!(g, GroupKind::Heisenberg) && norm_deficit > tolerance {
        return Err(Error::TruncationTooSmall {
            truncation,
            deficit: norm_deficit,
            tolerance,
        });
    }
    Ok(DisplacedVector {
        amplitudes: v,
        norm_deficit,
    })
}

/// Amplitudes of `D(z)|0⟩` on the first `dim` basis states.
fn coherent_amplitudes(g: GroupKind, z: Complex64, dim: usize) -> Vec<Complex64> {
    let r = z.norm();
    let phase = if r > 0.0 { z / r } else { Complex64::new(1.0, 0.0) };
    let mut out = Vec::with_capacity(dim);
    match g {
        GroupKind::Heisenberg => {
            // |c_n| = exp(−r²/2 + n ln r − ½ ln n!)
            let ln_r = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
            let mut ln_fact = 0.0;
            let mut ph = Complex64::new(1.0, 0.0);
            for n in 0..dim {
                if n > 0 {
                    ln_fact += (n as f64).ln();
                    ph *= phase;
                }
                let mag = if n == 0 {
                    (-0.5 * r * r).exp()
                } else if r > 0.0 {
                    (-0.5 * r * r + n as f64 * ln_r - 0.5 * ln_fact).exp()
                } else {
                    0.0
                };
                out.push(ph * mag);
            }
        }
        GroupKind::Spin(s) => {
            // √C(2J,k) cos^{2J−k}(θ/2) sin^k(θ/2) e^{ikφ}, tan(θ/2) = |z|
            let twice = s.twice as usize;
            let inv = 1.0 / (1.0 + r * r).sqrt();
            let (c, sn) = (inv, r * inv);
            let mut ln_binom = 0.0;
            let mut ph = Complex64::new(1.0, 0.0);
            for k in 0..dim.min(twice + 1) {
                if k > 0 {
                    ln_binom += ((twice - k + 1) as f64).ln() - (k as f64).ln();
                    ph *= phase;
                }
                let mag = (0.5 * ln_binom).exp() * c.powi((twice - k) as i32) * sn.powi(k as i32);
                out.push(ph * mag);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn label(re: f64, im: f64) -> CoherentLabel {
        CoherentLabel::from_parts(re, im).unwrap()
    }

    #[test]
    fn overlap_identities() {
        let h = GroupKind::Heisenberg;
        let half = GroupKind::spin(0.5).unwrap();
        assert_eq!(overlap_modulus_sq(h, label(0.3, 0.4), label(0.3, 0.4)), 1.0);
        assert!((overlap_modulus_sq(h, label(0.0, 0.0), label(1.0, 0.0)) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((overlap_modulus_sq(half, label(0.0, 0.0), label(1.0, 0.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complex_overlap_is_normalized_and_matches_modulus() {
        let h = GroupKind::Heisenberg;
        let s = GroupKind::spin(4.5).unwrap();
        let z = label(-1.2, 0.7);
        assert_eq!(overlap(h, z, z), c(1.0, 0.0));
        assert_eq!(overlap(s, z, z), c(1.0, 0.0));
        let w = label(0.4, -0.3);
        for g in [h, s] {
            let o = overlap(g, z, w);
            assert!((o.norm_sqr() - overlap_modulus_sq(g, z, w)).abs() < 1e-12);
        }
        let vac = overlap(h, CoherentLabel::zero(), w);
        assert!((vac.re - (-0.5 * w.z().norm_sqr()).exp()).abs() < 1e-15);
        assert_eq!(vac.im, 0.0);
    }

    #[test]
    fn antipodal_spin_overlap_clamps_to_zero() {
        let s = GroupKind::spin(1.0).unwrap();
        let v = overlap_modulus_sq(s, label(1e-9, 0.0), label(-1e9, 0.0));
        assert!(v >= 0.0 && v < 1e-12);
    }

    #[test]
    fn spin_expectations_at_fiducial_and_equator() {
        let s = GroupKind::spin(4.5).unwrap();
        assert_eq!(expectation(s, GeneratorIndex::Zero, CoherentLabel::zero()).re, -4.5);
        let eq = label(0.6, 0.8);
        assert!(expectation(s, GeneratorIndex::Zero, eq).re.abs() < 1e-15);
        assert_eq!(expectation(s, GeneratorIndex::Plus, CoherentLabel::zero()), c(0.0, 0.0));
    }

    #[test]
    fn heisenberg_expectations() {
        let h = GroupKind::Heisenberg;
        let z = label(0.3, -2.0);
        assert!((expectation(h, GeneratorIndex::Zero, z).re - z.z().norm_sqr()).abs() < 1e-15);
        assert_eq!(expectation(h, GeneratorIndex::Minus, z), z.z());
        assert_eq!(expectation(h, GeneratorIndex::Plus, z), z.z().conj());
    }

    #[test]
    fn heisenberg_relation_rows() {
        let z = label(0.2, 0.5);
        let m = group_relation_coeffs(GroupKind::Heisenberg, GeneratorIndex::Minus, z);
        assert_eq!(m.g, [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(m.k, z.z());
        let p = group_relation_coeffs(GroupKind::Heisenberg, GeneratorIndex::Plus, z);
        assert_eq!(p.g, [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.k, z.z().conj());
    }

    #[test]
    fn displaced_vectors_at_origin_are_basis_vectors() {
        let v = displaced_basis_vector(GroupKind::Heisenberg, CoherentLabel::zero(), 0, 30).unwrap();
        assert_eq!(v.amplitudes[0], c(1.0, 0.0));
        assert!(v.amplitudes[1..].iter().all(|a| a.norm() == 0.0));

        let s = GroupKind::spin(0.5).unwrap();
        let v = displaced_basis_vector(s, CoherentLabel::zero(), 1, 0).unwrap();
        assert_eq!(v.amplitudes.len(), 2);
        assert!(v.amplitudes[0].norm() < 1e-15);
        assert!((v.amplitudes[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coherent_expansion_matches_textbook_amplitudes() {
        let v = displaced_basis_vector(GroupKind::Heisenberg, label(1.0, 0.0), 0, 30).unwrap();
        let mut fact = 1.0;
        for (n, a) in v.amplitudes.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            let expected = (-0.5f64).exp() / fact.sqrt();
            assert!((a.re - expected).abs() < 1e-15 && a.im.abs() < 1e-15, "n = {n}");
        }
        assert!(v.norm_deficit < 1e-12);
    }

    #[test]
    fn fiducial_range_and_truncation_errors() {
        let s = GroupKind::spin(1.0).unwrap();
        assert!(matches!(
            displaced_basis_vector(s, CoherentLabel::zero(), 3, 0),
            Err(Error::FiducialOutOfRange { .. })
        ));
        assert!(matches!(
            displaced_basis_vector(GroupKind::Heisenberg, CoherentLabel::zero(), 5, 5),
            Err(Error::FiducialOutOfRange { .. })
        ));
        assert!(matches!(
            displaced_basis_vector(GroupKind::Heisenberg, label(4.0, 0.0), 0, 10),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn invalid_spin_and_labels_rejected() {
        assert!(SpinMagnitude::new(0.3).is_err());
        assert!(SpinMagnitude::new(0.0).is_err());
        assert!(SpinMagnitude::new(-1.0).is_err());
        assert_eq!(SpinMagnitude::new(4.5).unwrap().twice(), 9);
        assert!(CoherentLabel::from_parts(f64::NAN, 0.0).is_err());
        assert!(CoherentLabel::from_parts(0.0, f64::INFINITY).is_err());
    }
}
