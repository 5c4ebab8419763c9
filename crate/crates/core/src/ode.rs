//! Explicit Dormand–Prince 5(4) integrator with quartic dense output.
//!
//! This backend exists to cross-validate the closed-form layer, so it is
//! deliberately plain: fixed Butcher tableau, PI-free step control with the
//! classic 0.9 · err^{−1/5} factor, and the standard five-coefficient
//! interpolant stored per accepted step. The interpolant (not re-integration)
//! also supplies first derivatives between nodes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// cap on |h|; 0 disables the cap
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-11,
            abs_tol: 1e-12,
            max_step: 0.0,
            max_steps: 2_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const A7: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// embedded 4th-order weights
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
// dense-output weights for the fifth interpolation coefficient
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// One accepted step's interpolation data.
#[derive(Debug, Clone)]
struct DenseSegment {
    t0: f64,
    h: f64,
    r: [Vec<f64>; 5],
}

impl DenseSegment {
    /// y(t0 + θh) = r1 + θ(r2 + (1−θ)(r3 + θ(r4 + (1−θ) r5)))
    fn eval(&self, t: f64, out: &mut [f64]) {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        for i in 0..out.len() {
            out[i] = self.r[0][i]
                + th * (self.r[1][i] + th1 * (self.r[2][i] + th * (self.r[3][i] + th1 * self.r[4][i])));
        }
    }

    /// d/dt of the interpolant.
    fn eval_derivative(&self, t: f64, out: &mut [f64]) {
        let th = (t - self.t0) / self.h;
        for i in 0..out.len() {
            let d = self.r[1][i]
                + (1.0 - 2.0 * th) * self.r[2][i]
                + (2.0 * th - 3.0 * th * th) * self.r[3][i]
                + (2.0 * th - 6.0 * th * th + 4.0 * th * th * th) * self.r[4][i];
            out[i] = d / self.h;
        }
    }
}

/// Continuous solution on [t0, t_end].
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub t0: f64,
    pub t_end: f64,
    dim: usize,
    segments: Vec<DenseSegment>,
    pub end_state: Vec<f64>,
    pub steps: usize,
}

impl OdeSolution {
    fn locate(&self, t: f64) -> &DenseSegment {
        // binary search over monotone segment starts (forward or backward)
        let fw = self.t_end >= self.t0;
        let mut lo = 0usize;
        let mut hi = self.segments.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            let seg = &self.segments[mid];
            let after = if fw { t > seg.t0 + seg.h } else { t < seg.t0 + seg.h };
            if after {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        &self.segments[lo]
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.locate(t).eval(t, &mut out);
        out
    }

    pub fn eval_derivative(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.locate(t).eval_derivative(t, &mut out);
        out
    }
}

/// Integrate y' = f(t, y) from t0 to t_end (either direction).
pub fn integrate<F>(mut f: F, t0: f64, y0: &[f64], t_end: f64, opts: &OdeOptions) -> Result<OdeSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let dim = y0.len();
    if dim == 0 {
        return Err(Error::domain("empty state".to_string()));
    }
    if !(t_end - t0).is_finite() {
        return Err(Error::domain("non-finite integration span".to_string()));
    }
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    if span == 0.0 {
        return Ok(OdeSolution {
            t0,
            t_end,
            dim,
            segments: vec![DenseSegment {
                t0,
                h: 1.0,
                r: [
                    y0.to_vec(),
                    vec![0.0; dim],
                    vec![0.0; dim],
                    vec![0.0; dim],
                    vec![0.0; dim],
                ],
            }],
            end_state: y0.to_vec(),
            steps: 0,
        });
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: [Vec<f64>; 7] = Default::default();
    for ki in k.iter_mut() {
        *ki = vec![0.0; dim];
    }
    let mut ytmp = vec![0.0; dim];

    f(t, &y, &mut k[0]);

    // initial step from the crude |y|/|f| ratio
    let ynorm = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let fnorm = k[0].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut h = (0.01 * (ynorm + 1.0) / (fnorm + 1.0)).min(span);
    if opts.max_step > 0.0 {
        h = h.min(opts.max_step);
    }
    h *= dir;

    let mut segments: Vec<DenseSegment> = Vec::new();
    let mut steps = 0usize;

    // k[0] always holds f(t, y) for the current (t, y): seeded above,
    // maintained by the FSAL property on acceptance, untouched on rejection.
    while (t_end - t) * dir > 0.0 {
        if steps >= opts.max_steps {
            return Err(Error::numerical(format!(
                "step limit {} reached at t = {t}",
                opts.max_steps
            )));
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        if h.abs() < 1e-14 * (1.0 + t.abs()) {
            return Err(Error::numerical(format!("step size underflow at t = {t}")));
        }
        let a_rows: [&[f64]; 6] = [&A2, &A3, &A4, &A5, &A6, &A7];
        for (stage, row) in a_rows.iter().enumerate() {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, aij) in row.iter().enumerate() {
                    acc += aij * k[j][i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            let (head, tail) = k.split_at_mut(stage + 1);
            let _ = head;
            f(t + C[stage + 1] * h, &ytmp, &mut tail[0]);
        }
        // 5th-order solution is the A7 row (FSAL); ytmp currently holds it.
        let y5 = ytmp.clone();
        // error = y5 − y4
        let mut errnorm = 0.0_f64;
        for i in 0..dim {
            let mut y4 = 0.0;
            for j in 0..7 {
                y4 += B4[j] * k[j][i];
            }
            let e = y[i] + h * y4 - y5[i];
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
            errnorm += (e / sc) * (e / sc);
        }
        errnorm = (errnorm / dim as f64).sqrt();

        if errnorm <= 1.0 {
            // accept: build dense coefficients
            let mut r = [
                y.clone(),
                vec![0.0; dim],
                vec![0.0; dim],
                vec![0.0; dim],
                vec![0.0; dim],
            ];
            for i in 0..dim {
                let ydiff = y5[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                r[1][i] = ydiff;
                r[2][i] = bspl;
                r[3][i] = ydiff - h * k[6][i] - bspl;
                let mut acc = 0.0;
                for j in 0..7 {
                    acc += D[j] * k[j][i];
                }
                r[4][i] = h * acc;
            }
            segments.push(DenseSegment { t0: t, h, r });
            t += h;
            y = y5;
            k.swap(0, 6); // FSAL
            steps += 1;
        }

        let mut fac = 0.9 * errnorm.powf(-0.2);
        fac = fac.clamp(0.2, 5.0);
        h *= fac;
        if opts.max_step > 0.0 && h.abs() > opts.max_step {
            h = opts.max_step * dir;
        }
    }

    Ok(OdeSolution {
        t0,
        t_end,
        dim,
        segments,
        end_state: y,
        steps,
    })
}
