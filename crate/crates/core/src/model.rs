//! Bilinear Hamiltonians `H = Σ α_i A_i + Σ β_j B_j + Σ γ_ij A_i B_j`.

use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::{expectation, CoherentLabel, GeneratorIndex, GroupKind, SpinMagnitude};
use crate::{Error, Result};

const HERMITICITY_TOL: f64 = 1e-12;

/// Coefficients over generator indices `{0, +, −}` (see [`GeneratorIndex::pos`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearHamiltonian {
    alpha: [Complex64; 3],
    beta: [Complex64; 3],
    gamma: [[Complex64; 3]; 3],
    group_a: GroupKind,
    group_b: GroupKind,
}

impl BilinearHamiltonian {
    /// Validates finiteness and the conjugation constraints that make `H` hermitian.
    pub fn new(
        alpha: [Complex64; 3],
        beta: [Complex64; 3],
        gamma: [[Complex64; 3]; 3],
        group_a: GroupKind,
        group_b: GroupKind,
    ) -> Result<Self> {
        let all = alpha.iter().chain(beta.iter()).chain(gamma.iter().flatten());
        if all.clone().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFiniteParameter("hamiltonian coefficient"));
        }
        validate_linear(&alpha, "alpha")?;
        validate_linear(&beta, "beta")?;
        let (z, p, m) = (0, 1, 2);
        if !is_real(gamma[z][z]) {
            return Err(Error::NotHermitian("gamma_00 must be real"));
        }
        let pairs = [
            ((p, m), (m, p), "gamma_+- must equal conj(gamma_-+)"),
            ((z, p), (z, m), "gamma_0+ must equal conj(gamma_0-)"),
            ((p, z), (m, z), "gamma_+0 must equal conj(gamma_-0)"),
            ((p, p), (m, m), "gamma_++ must equal conj(gamma_--)"),
        ];
        for ((i1, j1), (i2, j2), what) in pairs {
            if !is_conj(gamma[i1][j1], gamma[i2][j2]) {
                return Err(Error::NotHermitian(what));
            }
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            group_a,
            group_b,
        })
    }

    pub fn alpha(&self) -> &[Complex64; 3] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Complex64; 3] {
        &self.beta
    }

    pub fn gamma(&self) -> &[[Complex64; 3]; 3] {
        &self.gamma
    }

    pub fn group_a(&self) -> GroupKind {
        self.group_a
    }

    pub fn group_b(&self) -> GroupKind {
        self.group_b
    }

    /// `γ ≡ 0`.
    pub fn is_decoupled(&self) -> bool {
        self.gamma.iter().flatten().all(|c| *c == Complex64::new(0.0, 0.0))
    }
}

fn is_real(c: Complex64) -> bool {
    c.im.abs() <= HERMITICITY_TOL * (1.0 + c.re.abs())
}

fn is_conj(a: Complex64, b: Complex64) -> bool {
    (a - b.conj()).norm() <= HERMITICITY_TOL * (1.0 + a.norm() + b.norm())
}

fn validate_linear(c: &[Complex64; 3], name: &'static str) -> Result<()> {
    if !is_real(c[0]) {
        return Err(Error::NotHermitian(if name == "alpha" {
            "alpha_0 must be real"
        } else {
            "beta_0 must be real"
        }));
    }
    if !is_conj(c[1], c[2]) {
        return Err(Error::NotHermitian(if name == "alpha" {
            "alpha_+ must equal conj(alpha_-)"
        } else {
            "beta_+ must equal conj(beta_-)"
        }));
    }
    Ok(())
}

/// How the maser couplings scale with the spin size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingNormalization {
    /// `G/√J`.
    #[default]
    SqrtJ,
    /// `G/√(2J)`, i.e. `G/√N` for `N = 2J` two-level atoms.
    SqrtTwoJ,
}

impl CouplingNormalization {
    /// Factor multiplying `G` and `G′`.
    pub fn factor(self, j: SpinMagnitude) -> f64 {
        match self {
            CouplingNormalization::SqrtJ => 1.0 / j.j().sqrt(),
            CouplingNormalization::SqrtTwoJ => 1.0 / (2.0 * j.j()).sqrt(),
        }
    }
}

/// `H = ε J_z + ω a†a + κ G (a†J₋ + aJ₊) + κ G′ (a†J₊ + aJ₋)`, `κ` from
/// [`CouplingNormalization`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaserParams {
    pub epsilon: f64,
    pub omega: f64,
    pub g: f64,
    pub g_prime: f64,
    pub j: SpinMagnitude,
    pub normalization: CouplingNormalization,
}

impl MaserParams {
    pub fn new(epsilon: f64, omega: f64, g: f64, g_prime: f64, j: f64) -> Result<Self> {
        let p = Self {
            epsilon,
            omega,
            g,
            g_prime,
            j: SpinMagnitude::new(j)?,
            normalization: CouplingNormalization::SqrtJ,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_normalization(mut self, normalization: CouplingNormalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.epsilon, "epsilon"),
            (self.omega, "omega"),
            (self.g, "g"),
            (self.g_prime, "g_prime"),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFiniteParameter(name));
            }
        }
        Ok(())
    }

    /// Coefficient of `a†J₋` and `aJ₊`.
    pub fn co_rotating(&self) -> f64 {
        self.g * self.normalization.factor(self.j)
    }

    /// Coefficient of `a†J₊` and `aJ₋`.
    pub fn counter_rotating(&self) -> f64 {
        self.g_prime * self.normalization.factor(self.j)
    }
}

pub fn maser_hamiltonian(p: &MaserParams) -> Result<BilinearHamiltonian> {
    p.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    let re = |v: f64| Complex64::new(v, 0.0);
    let (z, pl, mi) = (0, 1, 2);
    let mut alpha = [zero; 3];
    let mut beta = [zero; 3];
    let mut gamma = [[zero; 3]; 3];
    alpha[z] = re(p.omega);
    beta[z] = re(p.epsilon);
    gamma[pl][mi] = re(p.co_rotating());
    gamma[mi][pl] = re(p.co_rotating());
    gamma[pl][pl] = re(p.counter_rotating());
    gamma[mi][mi] = re(p.counter_rotating());
    BilinearHamiltonian::new(alpha, beta, gamma, GroupKind::Heisenberg, GroupKind::Spin(p.j))
}

/// Mean-field generator coefficients: `H_A = Σ a_i A_i`, `H_B = Σ b_j B_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldCoeffs {
    pub a: [Complex64; 3],
    pub b: [Complex64; 3],
}

/// `a_i = α_i + Σ_j γ_ij ⟨B_j⟩_y`, `b_j = β_j + Σ_i γ_ij ⟨A_i⟩_x`.
pub fn mean_field_coeffs(h: &BilinearHamiltonian, x: CoherentLabel, y: CoherentLabel) -> MeanFieldCoeffs {
    let ea = expectations(h.group_a, x);
    let eb = expectations(h.group_b, y);
    let mut a = h.alpha;
    let mut b = h.beta;
    for i in 0..3 {
        for j in 0..3 {
            a[i] += h.gamma[i][j] * eb[j];
            b[j] += h.gamma[i][j] * ea[i];
        }
    }
    MeanFieldCoeffs { a, b }
}

/// `⟨x,y|H|x,y⟩`.
pub fn classical_energy(h: &BilinearHamiltonian, x: CoherentLabel, y: CoherentLabel) -> Result<f64> {
    let ea = expectations(h.group_a, x);
    let eb = expectations(h.group_b, y);
    let mut e = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        e += h.alpha[i] * ea[i] + h.beta[i] * eb[i];
        for j in 0..3 {
            e += h.gamma[i][j] * ea[i] * eb[j];
        }
    }
    if e.im.abs() > 1e-12 * (1.0 + e.re.abs()) {
        return Err(Error::ImaginaryEnergy(e.im));
    }
    Ok(e.re)
}

pub(crate) fn expectations(g: GroupKind, z: CoherentLabel) -> [Complex64; 3] {
    GeneratorIndex::ALL.map(|i| expectation(g, i, z))
}
