//! Moving a product state onto a classical energy surface by a
//! one-dimensional shift of the field label.

use num_complex::Complex64;

use crate::algebra::CoherentLabel;
use crate::dynamics::ProductState;
use crate::model::{classical_energy, BilinearHamiltonian};
use crate::{Error, Result};

/// Direction along which the field label is shifted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ProjectionDirection {
    /// `x → x + i u`
    #[default]
    ImagX,
    /// `x → x + u`
    RealX,
}

impl ProjectionDirection {
    fn unit(self) -> Complex64 {
        match self {
            ProjectionDirection::ImagX => Complex64::i(),
            ProjectionDirection::RealX => Complex64::new(1.0, 0.0),
        }
    }
}

pub const ENERGY_TOL: f64 = 1e-10;
const MAX_SHIFT: f64 = 1e4;

/// Returns the state with the smallest shift `|u|` along `direction` whose
/// classical energy equals `e_target`. Phases are carried over unchanged.
pub fn project_to_energy(
    s: &ProductState,
    h: &BilinearHamiltonian,
    e_target: f64,
    direction: ProjectionDirection,
) -> Result<ProductState> {
    if !e_target.is_finite() {
        return Err(Error::NonFiniteParameter("e_target"));
    }
    let unit = direction.unit();
    let x0 = s.x.z();
    let residual = |u: f64| -> Result<f64> {
        let x = CoherentLabel::new(x0 + unit * u)?;
        Ok(classical_energy(h, x, s.y)? - e_target)
    };
    let with_shift = |u: f64| -> Result<ProductState> {
        let mut out = *s;
        out.x = CoherentLabel::new(x0 + unit * u)?;
        Ok(out)
    };

    let f0 = residual(0.0)?;
    if f0.abs() <= ENERGY_TOL {
        return Ok(*s);
    }

    // scan both sides outward with geometrically growing steps; the first
    // sign change found (in |u| order) is the minimal shift
    let mut step = 1e-3 * x0.norm().max(1.0);
    let (mut lo_pos, mut f_pos) = (0.0, f0);
    let (mut lo_neg, mut f_neg) = (0.0, f0);
    let mut reach = 0.0;
    while reach < MAX_SHIFT {
        reach += step;
        let fp = residual(reach)?;
        if fp.signum() != f_pos.signum() {
            return bisect(&residual, lo_pos, f_pos, reach).and_then(with_shift);
        }
        let fn_ = residual(-reach)?;
        if fn_.signum() != f_neg.signum() {
            return bisect(&residual, lo_neg, f_neg, -reach).and_then(with_shift);
        }
        lo_pos = reach;
        f_pos = fp;
        lo_neg = -reach;
        f_neg = fn_;
        step *= 1.25;
    }
    Err(Error::RootNotBracketed {
        lo: -reach,
        hi: reach,
    })
}

fn bisect<F>(f: &F, mut a: f64, mut fa: f64, mut b: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm.abs() <= 0.1 * ENERGY_TOL || (b - a).abs() <= f64::EPSILON * m.abs().max(1.0) {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
