//! Dormand–Prince 5(4) with step-size control and Hairer's fourth-order
//! continuous extension, over fixed-size real state vectors.

use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrates `dy/dt = f(t, y)` from `t0` to `t_end` and calls `sample` at
/// `t0, t0 + dt, …` and at `t_end` itself, using the continuous extension
/// between accepted steps.
pub fn integrate_sampled<const N: usize, F, S>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    sample_dt: f64,
    ctl: StepControl,
    mut sample: S,
) -> Result<Stats>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    S: FnMut(f64, &[f64; N]),
{
    if !(t_end > t0) {
        return Err(Error::InvalidArgument("t_end must exceed t0"));
    }
    if !(sample_dt > 0.0) || !(ctl.max_step > 0.0) {
        return Err(Error::InvalidIntegratorConfig("steps must be positive"));
    }
    if !(ctl.rel_tol > 0.0 && ctl.abs_tol > 0.0) {
        return Err(Error::InvalidIntegratorConfig("tolerances must be positive"));
    }

    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;

    let span = t_end - t0;
    let mut h = initial_step(&y, &k1, ctl).min(span);
    let mut next_sample_idx: usize = 0;
    let sample_time = |idx: usize| t0 + idx as f64 * sample_dt;
    // the last regular sample must sit strictly before t_end
    let end_guard = 1e-9 * sample_dt;

    sample(t, &y);
    next_sample_idx += 1;

    loop {
        if t_end - t <= 1e-15 * t_end.abs().max(1.0) {
            break;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let mut tmp = [0.0; N];
        for i in 0..N {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = f(t + C2 * h, &tmp);
        for i in 0..N {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = f(t + C3 * h, &tmp);
        for i in 0..N {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = f(t + C4 * h, &tmp);
        for i in 0..N {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = f(t + C5 * h, &tmp);
        for i in 0..N {
            tmp[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = f(t + h, &tmp);
        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        let k7 = f(t + h, &y_new);
        stats.evaluations += 6;

        let mut err = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = ctl.abs_tol + ctl.rel_tol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() {
            stats.rejected += 1;
            h *= 0.2;
            continue;
        }

        if err <= 1.0 {
            stats.accepted += 1;
            let t_new = if last { t_end } else { t + h };

            // continuous extension coefficients
            let mut r2 = [0.0; N];
            let mut r3 = [0.0; N];
            let mut r4 = [0.0; N];
            let mut r5 = [0.0; N];
            for i in 0..N {
                let dy = y_new[i] - y[i];
                let bspl = h * k1[i] - dy;
                r2[i] = dy;
                r3[i] = bspl;
                r4[i] = dy - h * k7[i] - bspl;
                r5[i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]);
            }
            loop {
                let ts = sample_time(next_sample_idx);
                if ts > t_new || ts >= t_end - end_guard {
                    break;
                }
                let theta = (ts - t) / h;
                let theta1 = 1.0 - theta;
                let mut ys = [0.0; N];
                for i in 0..N {
                    ys[i] = y[i]
                        + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
                }
                sample(ts, &ys);
                next_sample_idx += 1;
            }

            t = t_new;
            y = y_new;
            k1 = k7;
            if last {
                break;
            }
            let fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
            h = (h * fac).min(ctl.max_step);
        } else {
            stats.rejected += 1;
            let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            h *= fac;
        }
    }
    sample(t_end, &y);
    Ok(stats)
}

fn initial_step<const N: usize>(y: &[f64; N], f0: &[f64; N], ctl: StepControl) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = ctl.abs_tol + ctl.rel_tol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (f0[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(ctl.max_step).max(1e-10)
}
