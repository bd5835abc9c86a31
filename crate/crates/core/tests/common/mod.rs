#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

/// Row-major dense complex square matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<C>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![C::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> C {
        self.a[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.a[r * self.n + c] = v;
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let n = self.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let v = self.a[i * n + k];
                if v == C::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += v * o.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: C) -> Dense {
        Dense { n: self.n, a: self.a.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, o: &Dense) -> Dense {
        Dense { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn adjoint(&self) -> Dense {
        let n = self.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.a[j * n + i] = self.a[i * n + j].conj();
            }
        }
        out
    }

    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.at(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn column(&self, c: usize) -> Vec<C> {
        (0..self.n).map(|r| self.at(r, c)).collect()
    }

    /// Scaling and squaring with a Taylor series.
    pub fn expm(&self) -> Dense {
        let norm = self.norm1();
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
        let a = self.scale(C::new(0.5f64.powi(s), 0.0));
        let mut term = Dense::identity(self.n);
        let mut sum = Dense::identity(self.n);
        for k in 1..30 {
            term = term.mul(&a).scale(C::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }
}

/// a†a, a†, a on `0..dim`.
pub fn field_ops(dim: usize) -> [Dense; 3] {
    let mut num = Dense::zeros(dim);
    let mut up = Dense::zeros(dim);
    let mut down = Dense::zeros(dim);
    for n in 0..dim {
        num.set(n, n, C::new(n as f64, 0.0));
        if n + 1 < dim {
            let w = ((n + 1) as f64).sqrt();
            up.set(n + 1, n, C::new(w, 0.0));
            down.set(n, n + 1, C::new(w, 0.0));
        }
    }
    [num, up, down]
}

/// J_z, J_+, J_- on `|J, −J+k⟩`.
pub fn spin_ops(j: f64) -> [Dense; 3] {
    let dim = (2.0 * j).round() as usize + 1;
    let mut jz = Dense::zeros(dim);
    let mut jp = Dense::zeros(dim);
    for k in 0..dim {
        let m = k as f64 - j;
        jz.set(k, k, C::new(m, 0.0));
        if k + 1 < dim {
            let w = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
            jp.set(k + 1, k, C::new(w, 0.0));
        }
    }
    let jm = jp.adjoint();
    [jz, jp, jm]
}

/// `exp(z a† − z* a)`
pub fn field_displacement(z: C, dim: usize) -> Dense {
    let [_, up, down] = field_ops(dim);
    up.scale(z).add(&down.scale(-z.conj())).expm()
}

/// `exp(τ J_+ − τ* J_-)` with `τ = z·atan|z|/|z|`.
pub fn spin_displacement(z: C, j: f64) -> Dense {
    let [_, jp, jm] = spin_ops(j);
    let r = z.norm();
    let tau = if r == 0.0 { C::new(0.0, 0.0) } else { z * (r.atan() / r) };
    jp.scale(tau).add(&jm.scale(-tau.conj())).expm()
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(u, v)| u.conj() * v).sum()
}

pub fn dense_apply(m: &Dense, v: &[C]) -> Vec<C> {
    (0..m.n).map(|r| (0..m.n).map(|c| m.at(r, c) * v[c]).sum()).collect()
}

/// Seeded labels spread uniformly over a disc of radius `r`.
pub fn labels(count: usize, r: f64, seed: u64) -> Vec<C> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rho = r * rng.random::<f64>().sqrt();
            C::from_polar(rho, 2.0 * std::f64::consts::PI * rng.random::<f64>())
        })
        .collect()
}
