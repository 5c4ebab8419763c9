//! Shared test oracles. Everything here recomputes its target from scratch
//! (double-double AGM, tanh-sinh quadrature, fixed-step RK4, spatial-hash
//! intersection scan) so the library is never checked against itself.

#![allow(dead_code)]

/// Unevaluated double-double number hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        quick_two_sum(s.hi, lo)
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        let lo = p.lo + self.hi * o.lo + self.lo * o.hi;
        quick_two_sum(p.hi, lo)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.mul(Dd::from(q2)));
        let q3 = r2.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }

    pub fn scale(self, t: f64) -> Dd {
        self.mul(Dd::from(t))
    }

    /// One Newton step on a f64 seed doubles the precision, which is all a
    /// double-double can hold.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::from(0.0);
        }
        let s0 = self.hi.sqrt();
        let s = Dd::from(s0);
        s.add(self.div(s)).scale(0.5)
    }
}

/// pi to double-double precision.
pub const DD_PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.2246467991473532e-16,
};

/// Complete elliptic integrals (K, E) by the arithmetic-geometric mean in
/// double-double arithmetic (~31 significant digits):
///   K = pi / (2 agm(1, k')),   E = K (1 - sum 2^{j-1} c_j^2),  c_0 = k.
pub fn agm_complete_k_e(k: f64) -> (Dd, Dd) {
    assert!((0.0..1.0).contains(&k));
    let mut a = Dd::from(1.0);
    // k' in double-double: sqrt((1-k)(1+k))
    let mut b = Dd::from(1.0).sub(Dd::from(k)).mul(Dd::from(1.0).add(Dd::from(k))).sqrt();
    let mut c = Dd::from(k);
    let mut sum = c.mul(c).scale(0.5);
    let mut pow = 0.5;
    for _ in 0..60 {
        let an = a.add(b).scale(0.5);
        let bn = a.mul(b).sqrt();
        c = a.sub(b).scale(0.5);
        pow *= 2.0;
        // pow = 2^{j-1} for the j-th computed c
        sum = sum.add(c.mul(c).scale(pow));
        a = an;
        b = bn;
        if c.hi.abs() < 1e-35 {
            break;
        }
    }
    let big_k = DD_PI.div(a.scale(2.0));
    let big_e = big_k.mul(Dd::from(1.0).sub(sum));
    (big_k, big_e)
}

/// Tanh-sinh quadrature of `f` over [a, b], doubling the level until the
/// change falls below `tol`. Suited to smooth integrands, including ones
/// with endpoint derivatives blowing up.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let g = |t: f64| f(mid + half * t) * half;
    // level 0: node at t = 0
    let pi_half = std::f64::consts::FRAC_PI_2;
    let mut h = 1.0f64;
    let weight = |u: f64| {
        let s = pi_half * u.sinh();
        let x = s.tanh();
        let w = pi_half * u.cosh() / s.cosh().powi(2);
        (x, w)
    };
    let mut sum = {
        let (x0, w0) = weight(0.0);
        let mut acc = g(x0) * w0;
        let mut j = 1;
        loop {
            let (x, w) = weight(h * j as f64);
            if 1.0 - x.abs() < 1e-17 || w < 1e-18 {
                break;
            }
            acc += (g(x) + g(-x)) * w;
            j += 1;
            if j > 200 {
                break;
            }
        }
        acc * h
    };
    for _ in 0..10 {
        h *= 0.5;
        // add the odd-index nodes of the refined grid
        let mut acc = 0.0;
        let mut j = 1;
        loop {
            let (x, w) = weight(h * j as f64);
            if 1.0 - x.abs() < 1e-17 || w < 1e-18 {
                break;
            }
            acc += (g(x) + g(-x)) * w;
            j += 2;
            if j > 100_000 {
                break;
            }
        }
        let refined = 0.5 * sum + h * acc;
        let change = (refined - sum).abs();
        sum = refined;
        if change < tol * (1.0 + sum.abs()) {
            break;
        }
    }
    sum
}

/// Incomplete F(l, k) by quadrature of the amplitude form
/// int_0^{arcsin l} dtheta / sqrt(1 - k^2 sin^2 theta).
pub fn quad_incomplete_f(l: f64, k: f64) -> f64 {
    let phi = l.asin();
    tanh_sinh(
        |t: f64| {
            let s = t.sin();
            1.0 / (1.0 - k * k * s * s).sqrt()
        },
        0.0,
        phi,
        1e-15,
    )
}

/// Incomplete E(l, k) by quadrature of int_0^{arcsin l} sqrt(1 - k^2 sin^2).
pub fn quad_incomplete_e(l: f64, k: f64) -> f64 {
    let phi = l.asin();
    tanh_sinh(
        |t: f64| {
            let s = t.sin();
            (1.0 - k * k * s * s).sqrt()
        },
        0.0,
        phi,
        1e-15,
    )
}

/// Classical fixed-step RK4 for a D-dimensional first-order system.
pub fn rk4<const D: usize, F: Fn(f64, &[f64; D]) -> [f64; D]>(
    f: F,
    t0: f64,
    y0: [f64; D],
    t1: f64,
    steps: usize,
) -> [f64; D] {
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let mut t = t0;
    for _ in 0..steps {
        let k1 = f(t, &y);
        let mut y2 = y;
        for i in 0..D {
            y2[i] = y[i] + 0.5 * h * k1[i];
        }
        let k2 = f(t + 0.5 * h, &y2);
        for i in 0..D {
            y2[i] = y[i] + 0.5 * h * k2[i];
        }
        let k3 = f(t + 0.5 * h, &y2);
        for i in 0..D {
            y2[i] = y[i] + h * k3[i];
        }
        let k4 = f(t + h, &y2);
        for i in 0..D {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
    }
    y
}

/// RK4 with one step-halving refinement; asserts the halved result agrees
/// within `tol` so silent under-resolution cannot pass.
pub fn rk4_checked<const D: usize, F: Fn(f64, &[f64; D]) -> [f64; D]>(
    f: F,
    t0: f64,
    y0: [f64; D],
    t1: f64,
    steps: usize,
    tol: f64,
) -> [f64; D] {
    let coarse = rk4(&f, t0, y0, t1, steps);
    let fine = rk4(&f, t0, y0, t1, steps * 2);
    for i in 0..D {
        assert!(
            (coarse[i] - fine[i]).abs() <= tol,
            "RK4 not converged in component {i}: {} vs {}",
            coarse[i],
            fine[i]
        );
    }
    fine
}

/// Hyperbolic upper-half-plane distance, written independently of the
/// library (arcosh(1+z) = 2 asinh(sqrt(z/2)) keeps small distances exact).
pub fn hyp_dist(p: (f64, f64), q: (f64, f64)) -> f64 {
    let dx = p.0 - q.0;
    let dy = p.1 - q.1;
    let z = (dx * dx + dy * dy) / (2.0 * p.1 * q.1);
    2.0 * (z / 2.0).sqrt().asinh()
}

/// One refined crossing of the closed curve: parameters s < t in [0, L) and
/// the meeting point.
#[derive(Debug, Clone, Copy)]
pub struct Crossing {
    pub s: f64,
    pub t: f64,
    pub point: (f64, f64),
}

/// Brute-force self-intersection scan: uniform samples, spatial hash on
/// Euclidean coordinates, Gauss-Newton refinement of |gamma(s) - gamma(t)|^2
/// with finite-difference derivatives, then clustering. Independent of any
/// angle-function machinery.
pub fn brute_force_intersections<F: Fn(f64) -> (f64, f64)>(
    curve: F,
    length: f64,
    n_samples: usize,
) -> Vec<Crossing> {
    let pts: Vec<(f64, f64)> = (0..n_samples)
        .map(|i| curve(i as f64 * length / n_samples as f64))
        .collect();
    let mut max_gap = 0.0f64;
    for i in 0..n_samples {
        let a = pts[i];
        let b = pts[(i + 1) % n_samples];
        max_gap = max_gap.max((a.0 - b.0).hypot(a.1 - b.1));
    }
    let cell = 2.0 * max_gap;
    let key = |p: (f64, f64)| ((p.0 / cell).floor() as i64, (p.1 / cell).floor() as i64);

    let mut grid: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    for (i, &p) in pts.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }

    // arc-separation guard: candidate pairs must be non-neighbours along the
    // curve, measured cyclically
    let step = length / n_samples as f64;
    let guard = 10.0 * step;
    let arc_sep = |si: f64, sj: f64| {
        let d = (si - sj).abs();
        d.min(length - d)
    };

    let mut raw: Vec<(f64, f64)> = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        let (kx, ky) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = grid.get(&(kx + dx, ky + dy)) else {
                    continue;
                };
                for &j in bucket {
                    if j <= i {
                        continue;
                    }
                    let q = pts[j];
                    if (p.0 - q.0).hypot(p.1 - q.1) > cell {
                        continue;
                    }
                    let si = i as f64 * step;
                    let sj = j as f64 * step;
                    if arc_sep(si, sj) < guard {
                        continue;
                    }
                    if let Some(pair) = refine_crossing(&curve, length, si, sj, guard) {
                        raw.push(pair);
                    }
                }
            }
        }
    }

    // Cluster the refined parameter pairs. Distinct crossings are >= 1e-6
    // apart in s, duplicate refinements agree far below 1e-7, so 5e-7 can
    // neither merge two true crossings nor split one.
    raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<Crossing> = Vec::new();
    'next: for &(s, t) in &raw {
        for c in &out {
            if (c.s - s).abs() < 5e-7 && (c.t - t).abs() < 5e-7 {
                continue 'next;
            }
        }
        out.push(Crossing { s, t, point: curve(s) });
    }
    out.sort_by(|a, b| (a.s, a.t).partial_cmp(&(b.s, b.t)).unwrap());
    out
}

/// Gauss-Newton on r(s,t) = gamma(s) - gamma(t). Returns the ordered pair
/// reduced mod length, or None if the iteration leaves the neighbourhood or
/// stalls above the acceptance threshold.
fn refine_crossing<F: Fn(f64) -> (f64, f64)>(
    curve: &F,
    length: f64,
    s0: f64,
    t0: f64,
    guard: f64,
) -> Option<(f64, f64)> {
    let h = 1e-6;
    let mut s = s0;
    let mut t = t0;
    for _ in 0..40 {
        let ps = curve(s);
        let pt = curve(t);
        let r = (ps.0 - pt.0, ps.1 - pt.1);
        if r.0.hypot(r.1) < 1e-13 {
            break;
        }
        let dps = {
            let a = curve(s + h);
            let b = curve(s - h);
            ((a.0 - b.0) / (2.0 * h), (a.1 - b.1) / (2.0 * h))
        };
        let dpt = {
            let a = curve(t + h);
            let b = curve(t - h);
            ((a.0 - b.0) / (2.0 * h), (a.1 - b.1) / (2.0 * h))
        };
        // solve [dps, -dpt] (ds, dt)^T = -r
        let det = dps.0 * (-dpt.1) - (-dpt.0) * dps.1;
        if det.abs() < 1e-14 {
            return None;
        }
        let ds = (-r.0 * (-dpt.1) - (-dpt.0) * (-r.1)) / det;
        let dt = (dps.0 * (-r.1) - (-r.0) * dps.1) / det;
        s += ds;
        t += dt;
        if (s - s0).abs() > 20.0 * guard || (t - t0).abs() > 20.0 * guard {
            return None;
        }
    }
    let ps = curve(s);
    let pt = curve(t);
    if hyp_dist(ps, pt) > 1e-9 {
        return None;
    }
    let mut s = s.rem_euclid(length);
    let mut t = t.rem_euclid(length);
    if s > t {
        std::mem::swap(&mut s, &mut t);
    }
    if arc_separation(s, t, length) < guard {
        return None;
    }
    Some((s, t))
}

fn arc_separation(a: f64, b: f64, length: f64) -> f64 {
    let d = (a - b).abs();
    d.min(length - d)
}

/// Small deterministic xorshift generator so property tests are repeatable
/// without pulling rand into every test binary.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// uniform in [0, 1)
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
