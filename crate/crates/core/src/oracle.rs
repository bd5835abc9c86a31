//! Exact evolution in the truncated product basis `|n⟩ ⊗ |J, −J+k⟩`,
//! `n = 0..=n_max`, `k = 0..=2J`, with flat index `n·(2J+1) + k`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::{
    displaced_basis_vector_with_tolerance, CoherentLabel, GeneratorIndex, GroupKind, SpinMagnitude,
};
use crate::dynamics::ProductState;
use crate::model::{maser_hamiltonian, BilinearHamiltonian, MaserParams};
use crate::{Error, Result};

pub const DEFAULT_DIM_CAP: usize = 20_000;
/// Field truncation loss accepted when building coherent vectors.
pub const FIELD_DEFICIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertConfig {
    n_max: usize,
    spin: SpinMagnitude,
    cap: usize,
}

impl HilbertConfig {
    pub fn new(n_max: usize, j: f64) -> Result<Self> {
        Self::with_cap(n_max, j, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(n_max: usize, j: f64, cap: usize) -> Result<Self> {
        let spin = SpinMagnitude::new(j)?;
        let cfg = Self { n_max, spin, cap };
        if cfg.dim() > cap {
            return Err(Error::DimensionCapExceeded { dim: cfg.dim(), cap });
        }
        Ok(cfg)
    }

    /// Cutoff `n_max ≥ |x|² + 8|x| + 20`.
    pub fn required_n_max(x: Complex64) -> usize {
        let r = x.norm();
        (r * r + 8.0 * r + 20.0).ceil() as usize
    }

    /// Smallest configuration at spin `j` covering every field label given,
    /// never below `n_min`.
    pub fn for_labels(j: f64, labels: &[Complex64], n_min: usize) -> Result<Self> {
        let n = labels.iter().map(|x| Self::required_n_max(*x)).fold(n_min, usize::max);
        Self::new(n, j)
    }

    /// Raises `n_max` if the policy requires it; the flag reports a change.
    pub fn covering(&self, x: Complex64) -> Result<(Self, bool)> {
        let need = Self::required_n_max(x);
        if need <= self.n_max {
            return Ok((*self, false));
        }
        Ok((Self::with_cap(need, self.spin.j(), self.cap)?, true))
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn j(&self) -> f64 {
        self.spin.j()
    }

    pub fn spin(&self) -> SpinMagnitude {
        self.spin
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn field_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn spin_dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn dim(&self) -> usize {
        self.field_dim() * self.spin_dim()
    }

    pub fn index(&self, n: usize, k: usize) -> usize {
        n * self.spin_dim() + k
    }
}

/// Hermitian matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseHermitian {
    /// Sums duplicate `(row, col)` entries; does not check hermiticity.
    pub fn from_triplets(dim: usize, mut t: Vec<(usize, usize, Complex64)>) -> Self {
        t.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r + 1] += 1;
            cols.push(c);
            vals.push(v);
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let (s, e) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.cols[s..e].binary_search(&c) {
            Ok(p) => self.vals[s + p],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Nonzero entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let (s, e) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[s..e].iter().copied().zip(self.vals[s..e].iter().copied())
    }

    /// `out = H v`
    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        for r in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[p] * v[self.cols[p]];
            }
            out[r] = acc;
        }
    }

    /// `max |H_rc − conj(H_cr)|`
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                worst = worst.max((v - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in 0..self.dim {
            let mut centre = 0.0;
            let mut radius = 0.0;
            for (c, v) in self.row(r) {
                if c == r {
                    centre = v.re;
                } else {
                    radius += v.norm();
                }
            }
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        if self.dim == 0 {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }

    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let mut hv = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply(v, &mut hv);
        inner(v, &hv)
    }
}

fn field_action(i: GeneratorIndex, n: usize, n_max: usize) -> Option<(usize, f64)> {
    match i {
        GeneratorIndex::Zero => Some((n, n as f64)),
        GeneratorIndex::Plus => (n < n_max).then(|| (n + 1, ((n + 1) as f64).sqrt())),
        GeneratorIndex::Minus => (n > 0).then(|| (n - 1, (n as f64).sqrt())),
    }
}

fn spin_action(i: GeneratorIndex, k: usize, twice: usize) -> Option<(usize, f64)> {
    let j = twice as f64 / 2.0;
    match i {
        GeneratorIndex::Zero => Some((k, k as f64 - j)),
        GeneratorIndex::Plus => (k < twice).then(|| (k + 1, (((k + 1) * (twice - k)) as f64).sqrt())),
        GeneratorIndex::Minus => (k > 0).then(|| (k - 1, ((k * (twice - k + 1)) as f64).sqrt())),
    }
}

/// `Σ α_i A_i + Σ β_j B_j + Σ γ_ij A_i B_j` with `A` the field and `B` the spin.
pub fn build_bilinear_matrix(h: &BilinearHamiltonian, cfg: &HilbertConfig) -> Result<SparseHermitian> {
    match (h.group_a(), h.group_b()) {
        (GroupKind::Heisenberg, GroupKind::Spin(s)) if s == cfg.spin => {}
        (GroupKind::Heisenberg, GroupKind::Spin(_)) => return Err(Error::ConfigMismatch),
        _ => return Err(Error::UnsupportedGroups),
    }
    let twice = cfg.spin.twice() as usize;
    let dim = cfg.dim();
    let mut t = Vec::with_capacity(dim * 8);
    let (alpha, beta, gamma) = (h.alpha(), h.beta(), h.gamma());
    for n in 0..=cfg.n_max {
        for k in 0..=twice {
            let col = cfg.index(n, k);
            for ai in GeneratorIndex::ALL {
                let a = alpha[ai.pos()];
                if a != Complex64::new(0.0, 0.0) {
                    if let Some((n2, w)) = field_action(ai, n, cfg.n_max) {
                        t.push((cfg.index(n2, k), col, a * w));
                    }
                }
                for bj in GeneratorIndex::ALL {
                    let g = gamma[ai.pos()][bj.pos()];
                    if g == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    if let (Some((n2, wa)), Some((k2, wb))) =
                        (field_action(ai, n, cfg.n_max), spin_action(bj, k, twice))
                    {
                        t.push((cfg.index(n2, k2), col, g * wa * wb));
                    }
                }
            }
            for bj in GeneratorIndex::ALL {
                let b = beta[bj.pos()];
                if b != Complex64::new(0.0, 0.0) {
                    if let Some((k2, w)) = spin_action(bj, k, twice) {
                        t.push((cfg.index(n, k2), col, b * w));
                    }
                }
            }
        }
    }
    Ok(SparseHermitian::from_triplets(dim, t))
}

pub fn build_hamiltonian_matrix(p: &MaserParams, cfg: &HilbertConfig) -> Result<SparseHermitian> {
    build_bilinear_matrix(&maser_hamiltonian(p)?, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    amplitudes: Vec<Complex64>,
    config: HilbertConfig,
    truncation_deficit: f64,
}

impl OracleState {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, config: HilbertConfig) -> Result<Self> {
        if amplitudes.len() != config.dim() {
            return Err(Error::ConfigMismatch);
        }
        Ok(Self {
            amplitudes,
            config,
            truncation_deficit: 0.0,
        })
    }

    pub fn basis(n: usize, k: usize, config: HilbertConfig) -> Result<Self> {
        if n > config.n_max || k >= config.spin_dim() {
            return Err(Error::InvalidArgument("basis index outside the truncated space"));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); config.dim()];
        amplitudes[config.index(n, k)] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(amplitudes, config)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn config(&self) -> &HilbertConfig {
        &self.config
    }

    /// Field-side norm loss before renormalization.
    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, n: usize, k: usize) -> Complex64 {
        self.amplitudes[self.config.index(n, k)]
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(u, v)| u.conj() * v).sum()
}

/// `D(x)|nx⟩ ⊗ D(y)|J,−J+ny⟩`, renormalized after field truncation.
pub fn product_vector(x: CoherentLabel, nx: usize, y: CoherentLabel, ny: usize, cfg: &HilbertConfig) -> Result<OracleState> {
    let field = displaced_basis_vector_with_tolerance(
        GroupKind::Heisenberg,
        x,
        nx,
        cfg.field_dim(),
        FIELD_DEFICIT_TOL,
    )?;
    let spin = displaced_basis_vector_with_tolerance(GroupKind::Spin(cfg.spin), y, ny, cfg.spin_dim(), FIELD_DEFICIT_TOL)?;
    let mut amplitudes = Vec::with_capacity(cfg.dim());
    for f in &field.amplitudes {
        for s in &spin.amplitudes {
            amplitudes.push(f * s);
        }
    }
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amplitudes {
        *a /= norm;
    }
    Ok(OracleState {
        amplitudes,
        config: *cfg,
        truncation_deficit: field.norm_deficit,
    })
}

pub fn product_coherent_vector(x: CoherentLabel, y: CoherentLabel, cfg: &HilbertConfig) -> Result<OracleState> {
    product_vector(x, 0, y, 0, cfg)
}

/// `D(x)|1⟩ ⊗ D(y)|J,−J+1⟩` at the labels of `s`.
pub fn doorway_vector(s: &ProductState, cfg: &HilbertConfig) -> Result<OracleState> {
    product_vector(s.x, 1, s.y, 1, cfg)
}

pub fn exact_overlap_pair(a: &OracleState, b: &OracleState) -> Result<Complex64> {
    if a.config != b.config {
        return Err(Error::ConfigMismatch);
    }
    Ok(inner(&a.amplitudes, &b.amplitudes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Field,
    Spin,
}

/// `1 − Tr ρ²` of the reduced density matrix of `which`.
pub fn reduced_linear_entropy(psi: &OracleState, which: Subsystem) -> f64 {
    let cfg = psi.config;
    let (nf, ns) = (cfg.field_dim(), cfg.spin_dim());
    let a = &psi.amplitudes;
    let norm2: f64 = a.iter().map(|v| v.norm_sqr()).sum();
    let mut purity = 0.0;
    match which {
        Subsystem::Spin => {
            for k in 0..ns {
                for l in 0..ns {
                    let mut r = Complex64::new(0.0, 0.0);
                    for n in 0..nf {
                        r += a[n * ns + k] * a[n * ns + l].conj();
                    }
                    purity += r.norm_sqr();
                }
            }
        }
        Subsystem::Field => {
            for n in 0..nf {
                for m in 0..nf {
                    let mut r = Complex64::new(0.0, 0.0);
                    for k in 0..ns {
                        r += a[n * ns + k] * a[m * ns + k].conj();
                    }
                    purity += r.norm_sqr();
                }
            }
        }
    }
    1.0 - purity / (norm2 * norm2)
}

/// `⟨a⟩`
pub fn field_amplitude(psi: &OracleState) -> Complex64 {
    let cfg = psi.config;
    let ns = cfg.spin_dim();
    let a = &psi.amplitudes;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..cfg.field_dim() {
        let w = (n as f64).sqrt();
        for k in 0..ns {
            acc += a[(n - 1) * ns + k].conj() * a[n * ns + k] * w;
        }
    }
    acc
}

/// `⟨a†a⟩`
pub fn photon_number(psi: &OracleState) -> f64 {
    let ns = psi.config.spin_dim();
    psi.amplitudes
        .iter()
        .enumerate()
        .map(|(i, v)| (i / ns) as f64 * v.norm_sqr())
        .sum()
}

/// `(⟨J_z⟩, ⟨J_+⟩)`
pub fn spin_expectations(psi: &OracleState) -> (f64, Complex64) {
    let cfg = psi.config;
    let ns = cfg.spin_dim();
    let twice = cfg.spin.twice() as usize;
    let j = cfg.j();
    let a = &psi.amplitudes;
    let mut jz = 0.0;
    let mut jp = Complex64::new(0.0, 0.0);
    for n in 0..cfg.field_dim() {
        for k in 0..ns {
            let v = a[n * ns + k];
            jz += (k as f64 - j) * v.norm_sqr();
            if k < twice {
                let w = (((k + 1) * (twice - k)) as f64).sqrt();
                jp += a[n * ns + k + 1].conj() * v * w;
            }
        }
    }
    (jz, jp)
}

/// Stereographic label of the Bloch-vector direction. For a spin coherent
/// state this inverts `expectation`; for a mixed reduced state it gives the
/// label of the closest coherent direction.
pub fn spin_label_from_expectations(jz: f64, jp: Complex64) -> Complex64 {
    let jm = jp.conj();
    let r = (jz * jz + jm.norm_sqr()).sqrt();
    jm / (r - jz)
}

pub fn energy(psi: &OracleState, h: &SparseHermitian) -> f64 {
    h.expectation(&psi.amplitudes).re
}

/// Chebyshev propagator for `e^{−iHt}`.
pub struct Evolver<'a> {
    h: &'a SparseHermitian,
    centre: f64,
    half_width: f64,
    w_prev: Vec<Complex64>,
    w_cur: Vec<Complex64>,
    w_next: Vec<Complex64>,
    acc: Vec<Complex64>,
}

// largest a·dt handled in one Chebyshev expansion
const CHUNK_ARG: f64 = 25.0;
const NORM_DRIFT_LIMIT: f64 = 1e-8;

impl<'a> Evolver<'a> {
    pub fn new(h: &'a SparseHermitian) -> Self {
        let (lo, hi) = h.spectral_bounds();
        let pad = 1e-6 * (hi - lo).abs().max(1.0);
        let dim = h.dim();
        let z = Complex64::new(0.0, 0.0);
        Self {
            h,
            centre: 0.5 * (hi + lo),
            half_width: 0.5 * (hi - lo) + pad,
            w_prev: vec![z; dim],
            w_cur: vec![z; dim],
            w_next: vec![z; dim],
            acc: vec![z; dim],
        }
    }

    /// Replaces `psi` by `e^{−iH dt} psi`.
    pub fn advance(&mut self, psi: &mut OracleState, dt: f64) -> Result<()> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument("evolution time must be non-negative"));
        }
        if psi.amplitudes.len() != self.h.dim() {
            return Err(Error::ConfigMismatch);
        }
        if dt == 0.0 {
            return Ok(());
        }
        let before = psi.norm();
        let chunks = (self.half_width * dt / CHUNK_ARG).ceil().max(1.0) as usize;
        let tau = dt / chunks as f64;
        let bessel = bessel_j_series(self.half_width * tau);
        for _ in 0..chunks {
            self.chebyshev_step(&mut psi.amplitudes, tau, &bessel);
        }
        let after = psi.norm();
        if !after.is_finite() || (after - before).abs() > NORM_DRIFT_LIMIT * before.max(1.0) {
            return Err(Error::EvolutionDiverged);
        }
        Ok(())
    }

    fn apply_scaled(&self, v: &[Complex64], out: &mut [Complex64]) {
        self.h.apply(v, out);
        let inv = 1.0 / self.half_width;
        for (o, x) in out.iter_mut().zip(v) {
            *o = (*o - x * self.centre) * inv;
        }
    }

    fn chebyshev_step(&mut self, psi: &mut [Complex64], tau: f64, bessel: &[f64]) {
        // e^{−iHτ} = e^{−icτ} Σ_k (2 − δ_k0) (−i)^k J_k(aτ) T_k((H − c)/a)
        let mut phase = Complex64::new(1.0, 0.0);
        let mi = Complex64::new(0.0, -1.0);
        self.w_prev.copy_from_slice(psi);
        for (a, w) in self.acc.iter_mut().zip(&self.w_prev) {
            *a = w * bessel[0];
        }
        if bessel.len() > 1 {
            let mut cur = core::mem::take(&mut self.w_cur);
            self.apply_scaled(&self.w_prev, &mut cur);
            self.w_cur = cur;
            phase *= mi;
            let c = phase * 2.0 * bessel[1];
            for (a, w) in self.acc.iter_mut().zip(&self.w_cur) {
                *a += w * c;
            }
        }
        for &jk in bessel.iter().skip(2) {
            let mut next = core::mem::take(&mut self.w_next);
            self.apply_scaled(&self.w_cur, &mut next);
            for (n, p) in next.iter_mut().zip(&self.w_prev) {
                *n = *n * 2.0 - p;
            }
            self.w_next = next;
            core::mem::swap(&mut self.w_prev, &mut self.w_cur);
            core::mem::swap(&mut self.w_cur, &mut self.w_next);
            phase *= mi;
            let c = phase * 2.0 * jk;
            for (a, w) in self.acc.iter_mut().zip(&self.w_cur) {
                *a += w * c;
            }
        }
        let global = Complex64::from_polar(1.0, -self.centre * tau);
        for (p, a) in psi.iter_mut().zip(&self.acc) {
            *p = a * global;
        }
    }
}

/// `e^{−iHt} psi0`.
pub fn evolve(psi0: &OracleState, h: &SparseHermitian, t: f64) -> Result<OracleState> {
    let mut psi = psi0.clone();
    Evolver::new(h).advance(&mut psi, t)?;
    Ok(psi)
}

/// `J_0(x), J_1(x), …` up to the order where the tail drops below 1e-18,
/// by Miller's downward recurrence normalized with `J_0 + 2Σ J_2k = 1`.
pub fn bessel_j_series(x: f64) -> Vec<f64> {
    if x == 0.0 {
        return vec![1.0];
    }
    let x = x.abs();
    let top = (x + 12.0 * x.cbrt() + 40.0) as usize;
    let top = top + (top & 1);
    let mut vals = vec![0.0; top + 1];
    let (mut jp1, mut j) = (0.0, 1e-30);
    vals[top] = j;
    let mut sum = 0.0;
    if top % 2 == 0 {
        sum += 2.0 * j;
    }
    for k in (1..=top).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        vals[k - 1] = j;
        if k - 1 == 0 {
            sum += j;
        } else if (k - 1) % 2 == 0 {
            sum += 2.0 * j;
        }
        if j.abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
            jp1 *= 1e-250;
            j *= 1e-250;
            sum *= 1e-250;
        }
    }
    for v in &mut vals {
        *v /= sum;
    }
    let mut last = vals.len();
    while last > 1 && vals[last - 1].abs() < 1e-18 {
        last -= 1;
    }
    vals.truncate(last.max((x.ceil() as usize).min(vals.len())));
    vals
}
