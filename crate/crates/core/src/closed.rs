//! Closed orbitlike curves: the rational-rotation families, their invariants,
//! self-intersection enumeration, winding numbers, and the monochromatic
//! instability test.

use crate::elastica::{HyperbolicPoint, OrbitlikeCurve};
use crate::error::{Error, Result};
use crate::fundamental::{solve_k_for_rotation, OrbitlikeSystem};
use crate::special::elliptic::complete_k_e;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A pair (m, n) admits a closed curve iff gcd(m, n) = 1 and 1 < 2m/n < √2.
/// Both inequalities are strict and decided in integer arithmetic
/// (2m > n and 2m² < n²; equality is impossible since √2 is irrational).
pub fn pair_is_admissible(m: u32, n: u32) -> bool {
    let (m, n) = (m as u64, n as u64);
    m >= 1 && n >= 1 && gcd(m, n) == 1 && 2 * m > n && 2 * m * m < n * n
}

/// All admissible (m, n) with n ≤ max_n, sorted lexicographically by (n, m).
pub fn admissible_pairs(max_n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for m in 1..n {
            if pair_is_admissible(m, n) {
                out.push((m, n));
            }
        }
    }
    out
}

/// Modulus k_{m,n} with rotation number Δθ(k) = 2πm/n.
pub fn solve_k_mn(m: u32, n: u32) -> Result<f64> {
    if !pair_is_admissible(m, n) {
        return Err(Error::domain(format!(
            "pair (m, n) = ({m}, {n}) is not admissible: need gcd(m, n) = 1 and 1 < 2m/n < √2"
        )));
    }
    solve_k_for_rotation(TAU * m as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClosedCurveRecord {
    pub m: u32,
    pub n: u32,
    pub k_mn: f64,
    /// total arclength ℒ = 2n√(2−k²)K(k)
    pub length_l: f64,
    /// bending energy 𝒲 = 4nπE(k)/√(2−k²)
    pub willmore_w: f64,
    /// self-intersection count 𝒮 = n(m−1)
    pub selfint_s: u64,
}

pub fn closed_curve_record(m: u32, n: u32) -> Result<ClosedCurveRecord> {
    let k = solve_k_mn(m, n)?;
    let (big_k, big_e) = complete_k_e(k)?;
    let c = (2.0 - k * k).sqrt();
    Ok(ClosedCurveRecord {
        m,
        n,
        k_mn: k,
        length_l: 2.0 * n as f64 * c * big_k,
        willmore_w: 4.0 * n as f64 * PI * big_e / c,
        selfint_s: n as u64 * (m as u64 - 1),
    })
}

/// Records for every admissible pair with n ≤ max_n, in (n, m) order.
pub fn table(max_n: u32) -> Result<Vec<ClosedCurveRecord>> {
    admissible_pairs(max_n)
        .into_par_iter()
        .map(|(m, n)| closed_curve_record(m, n))
        .collect()
}

/// The canonical representative: γ(0) = (0, 1), φ(0) = 0, phase s* = 0.
pub fn canonical_curve(m: u32, n: u32) -> Result<OrbitlikeCurve> {
    let k = solve_k_mn(m, n)?;
    let system = OrbitlikeSystem::new(k, 0.0)?;
    OrbitlikeCurve::fit(system, HyperbolicPoint::new(0.0, 1.0), 0.0, 0.0)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SelfIntersection {
    /// index of the half-period multiple: 1 ≤ l ≤ 2n − 1
    pub l: u32,
    /// angle-offset index: 1 ≤ p ≤ ⌈min(l, 2n−l)·m/n⌉ − 1
    pub p: u32,
    pub s: f64,
    pub partner_s: f64,
    pub point: HyperbolicPoint,
}

/// All self-intersections of the canonical curve, one entry per unordered
/// parameter pair, with 0 ≤ s < partner_s < ℒ, sorted by (s, partner_s).
/// The count equals n(m−1).
pub fn self_intersections(m: u32, n: u32) -> Result<Vec<SelfIntersection>> {
    let curve = canonical_curve(m, n)?;
    let record = closed_curve_record(m, n)?;
    let length = record.length_l;
    let half_period = curve.system.period() / 2.0;
    let (mf, nf) = (m as f64, n as f64);

    let mut out = Vec::with_capacity(record.selfint_s as usize);
    for l in 1..(2 * n) {
        let reach = l.min(2 * n - l) as u64;
        // p ranges over 1 ..= ⌈reach·m/n⌉ − 1; empty when reach·m ≤ n.
        let p_max = (reach * m as u64).div_ceil(n as u64) - 1;
        for p in 1..=p_max {
            let target = PI * ((l as f64 - 1.0) * mf / nf - p as f64);
            let s = bisect_theta(&curve, target, l as f64 * half_period)?;
            let t = (2.0 * l as f64 * half_period - s).rem_euclid(length);
            let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
            let state = curve.evaluate(lo);
            out.push(SelfIntersection {
                l,
                p: p as u32,
                s: lo,
                partner_s: hi,
                point: HyperbolicPoint::new(state.gamma1, state.gamma2),
            });
        }
    }
    out.sort_by(|a, b| (a.s, a.partner_s).partial_cmp(&(b.s, b.partner_s)).unwrap());
    debug_assert_eq!(out.len() as u64, record.selfint_s);
    Ok(out)
}

/// Solve ϑ(s) = target on [0, hi]; ϑ is strictly increasing with
/// ϑ(0) = −πm/n below every target and ϑ(hi) above it.
fn bisect_theta(curve: &OrbitlikeCurve, target: f64, hi: f64) -> Result<f64> {
    let theta = |s: f64| curve.system.frame(s).theta;
    let (mut lo, mut hi) = (0.0f64, hi);
    if theta(lo) >= target || theta(hi) <= target {
        return Err(Error::numerical(
            "self-intersection bracket does not straddle the target angle".to_string(),
        ));
    }
    while hi - lo > 1e-15 * (1.0 + hi) {
        let mid = 0.5 * (lo + hi);
        if theta(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Winding number of a closed loop s ↦ point(s), s ∈ [0, length], about the
/// origin of its coordinates. Sums wrapped angle increments over at least
/// min_samples points and doubles the sampling until the total snaps to an
/// integer within 1e−3.
pub fn winding_of_loop<F>(point: F, length: f64, min_samples: usize) -> Result<i64>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut samples = min_samples.max(64);
    for _ in 0..5 {
        let (x0, y0) = point(0.0);
        let mut prev = y0.atan2(x0);
        let mut sum = 0.0;
        for i in 1..=samples {
            let s = length * i as f64 / samples as f64;
            let (x, y) = point(s);
            let ang = y.atan2(x);
            let mut d = ang - prev;
            d -= TAU * (d / TAU).round();
            sum += d;
            prev = ang;
        }
        let w = sum / TAU;
        if (w - w.round()).abs() <= 1e-3 {
            return Ok(w.round() as i64);
        }
        samples *= 2;
    }
    Err(Error::numerical(
        "winding number did not converge to an integer".to_string(),
    ))
}

/// Winding number of the canonical curve about its distinguished center;
/// equals m for every admissible pair.
pub fn winding_number(m: u32, n: u32) -> Result<i64> {
    let curve = canonical_curve(m, n)?;
    let record = closed_curve_record(m, n)?;
    let center = curve.hyperbolic_center();
    winding_of_loop(
        |s| {
            let st = curve.evaluate(s);
            (st.gamma1 - center.x1, st.gamma2 - center.x2)
        },
        record.length_l,
        10_000 * n as usize,
    )
}

/// Mean-value coefficient α₀(k) = 20E/((2−k²)K) − 4 of the second variation.
pub fn alpha0(k: f64) -> Result<f64> {
    let (big_k, big_e) = complete_k_e(k)?;
    Ok(20.0 * big_e / ((2.0 - k * k) * big_k) - 4.0)
}

/// Mean-value coefficient β₀(k) = (28(2−k²)E + 2(3k²−2)(k²+2)K) / (3(2−k²)²K).
pub fn beta0(k: f64) -> Result<f64> {
    let (big_k, big_e) = complete_k_e(k)?;
    let c2 = 2.0 - k * k;
    Ok((28.0 * c2 * big_e + 2.0 * (3.0 * k * k - 2.0) * (k * k + 2.0) * big_k)
        / (3.0 * c2 * c2 * big_k))
}

/// The instability coefficients
///   A(k) = π√(5E − (2−k²)K) / ((2−k²)K^{3/2}),
///   B(k) = π² / ((2−k²)K²),
///   C(k) = √((16(1−k²)K² − 44(2−k²)EK + 75E²)₊) / (√3(2−k²)K).
/// The A radicand turns negative only for k ⪆ 0.9996 where C = 0 makes A
/// unused, so it is clamped at zero there.
pub fn stability_coefficients(k: f64) -> Result<(f64, f64, f64)> {
    let (big_k, big_e) = complete_k_e(k)?;
    let c2 = 2.0 - k * k;
    let a_rad = (5.0 * big_e - c2 * big_k).max(0.0);
    let a = PI * a_rad.sqrt() / (c2 * big_k.powf(1.5));
    let b = PI * PI / (c2 * big_k * big_k);
    let c_rad = (16.0 * (1.0 - k * k) * big_k * big_k - 44.0 * c2 * big_e * big_k
        + 75.0 * big_e * big_e)
        .max(0.0);
    let c = c_rad.sqrt() / (3.0f64.sqrt() * c2 * big_k);
    Ok((a, b, c))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct InstabilityReport {
    pub m: u32,
    pub n: u32,
    pub k_mn: f64,
    pub a_k: f64,
    pub b_k: f64,
    pub c_k: f64,
    /// smallest n beyond which the criterion applies; None when C(k) = 0
    pub n_threshold: Option<f64>,
    pub provably_unstable: bool,
    /// destabilizing mode index when provably unstable
    pub test_mode_j: Option<u64>,
    /// closed-form second variation of that mode
    pub i_value: Option<f64>,
}

/// Second variation of cos(2πjs/ℒ) in closed form:
///   I = ℒ[(ω² − α₀/4)² + (8β₀ − α₀²)/16],  ω = 2πj/ℒ.
/// Valid only for modes with 2j ∉ nℕ₀.
pub fn monochromatic_i(m: u32, n: u32, j: u64) -> Result<f64> {
    if (2 * j) % n as u64 == 0 {
        return Err(Error::domain(format!(
            "mode j = {j} is resonant for n = {n}: need 2j ∉ nℕ₀"
        )));
    }
    let record = closed_curve_record(m, n)?;
    let k = record.k_mn;
    let a0 = alpha0(k)?;
    let b0 = beta0(k)?;
    let length = record.length_l;
    let omega = TAU * j as f64 / length;
    let shifted = omega * omega - a0 / 4.0;
    Ok(length * (shifted * shifted + (8.0 * b0 - a0 * a0) / 16.0))
}

/// Apply the instability criterion: the curve is provably unstable when
/// n > (A + √(A² + 4BC)) / (2C) with C(k) > 0. When it fires, report the
/// destabilizing mode j near √α₀·ℒ/(4π) and its closed-form value.
pub fn instability_report(m: u32, n: u32) -> Result<InstabilityReport> {
    let record = closed_curve_record(m, n)?;
    let k = record.k_mn;
    let (a, b, c) = stability_coefficients(k)?;
    let n_threshold = if c > 0.0 {
        Some((a + (a * a + 4.0 * b * c).sqrt()) / (2.0 * c))
    } else {
        None
    };
    let provably_unstable = n_threshold.is_some_and(|t| n as f64 > t);

    let (test_mode_j, i_value) = if provably_unstable {
        let a0 = alpha0(k)?;
        let j_star = a0.sqrt() * record.length_l / (4.0 * PI);
        let mut best: Option<(u64, f64)> = None;
        for j in [j_star.floor() as u64, j_star.ceil() as u64] {
            if (2 * j) % n as u64 == 0 {
                continue;
            }
            let i = monochromatic_i(m, n, j)?;
            if best.is_none_or(|(_, bi)| i < bi) {
                best = Some((j, i));
            }
        }
        let (j, i) = best.ok_or_else(|| {
            Error::numerical("no admissible mode near the optimal frequency".to_string())
        })?;
        (Some(j), Some(i))
    } else {
        (None, None)
    };

    Ok(InstabilityReport {
        m,
        n,
        k_mn: k,
        a_k: a,
        b_k: b,
        c_k: c,
        n_threshold,
        provably_unstable,
        test_mode_j,
        i_value,
    })
}

/// Second variation I(φ) = ∫₀^ℒ 2φ″² − (5κ² − 4)φ′² + (6κ′² − κ⁴ + 3κ² + 2)φ² ds
/// for an ℒ-periodic test function given by uniform samples φ(iℒ/N).
///
/// The samples are converted to a trigonometric interpolant whose derivatives
/// are exact; the integral is taken by the periodic rectangle rule on the
/// sample grid and again on the doubled grid. Requires at least 2048 samples,
/// and fails if doubling shifts the result by more than 1e−6·(1 + |I|).
pub fn second_variation(m: u32, n: u32, phi_samples: &[f64]) -> Result<f64> {
    let samples = phi_samples.len();
    if samples < 2048 {
        return Err(Error::domain(format!(
            "second variation needs at least 2048 samples, got {samples}"
        )));
    }
    let record = closed_curve_record(m, n)?;
    let system = OrbitlikeSystem::new(record.k_mn, 0.0)?;
    let length = record.length_l;

    // Real Fourier coefficients of the sample sequence.
    let nf = samples as f64;
    let kmax = samples / 2;
    let mut cos_c = vec![0.0f64; kmax + 1];
    let mut sin_c = vec![0.0f64; kmax + 1];
    cos_c[0] = phi_samples.iter().sum::<f64>() / nf;
    let coeffs: Vec<(f64, f64)> = (1..=kmax)
        .into_par_iter()
        .map(|h| {
            let norm = if 2 * h == samples { 1.0 / nf } else { 2.0 / nf };
            let step = TAU * h as f64 / nf;
            let (mut ac, mut as_) = (0.0, 0.0);
            for (j, &phi) in phi_samples.iter().enumerate() {
                let (sv, cv) = (step * j as f64).sin_cos();
                ac += phi * cv;
                as_ += phi * sv;
            }
            (norm * ac, norm * as_)
        })
        .collect();
    for (h, (ac, as_)) in coeffs.into_iter().enumerate() {
        cos_c[h + 1] = ac;
        sin_c[h + 1] = as_;
    }

    let integral = |grid: usize| -> f64 {
        let h_step = length / grid as f64;
        (0..grid)
            .into_par_iter()
            .map(|i| {
                let s = i as f64 * h_step;
                let (mut p0, mut p1, mut p2) = (cos_c[0], 0.0, 0.0);
                for h in 1..=kmax {
                    let w = TAU * h as f64 / length;
                    let (sv, cv) = (w * s).sin_cos();
                    let (a, b) = (cos_c[h], sin_c[h]);
                    p0 += a * cv + b * sv;
                    p1 += w * (b * cv - a * sv);
                    p2 -= w * w * (a * cv + b * sv);
                }
                let kap = system.kappa(s);
                let kap_p = system.kappa_prime(s);
                let k2 = kap * kap;
                2.0 * p2 * p2 - (5.0 * k2 - 4.0) * p1 * p1
                    + (6.0 * kap_p * kap_p - k2 * k2 + 3.0 * k2 + 2.0) * p0 * p0
            })
            .sum::<f64>()
            * h_step
    };

    let coarse = integral(samples);
    let fine = integral(2 * samples);
    if (fine - coarse).abs() > 1e-6 * (1.0 + fine.abs()) {
        return Err(Error::numerical(format!(
            "second variation is under-resolved: {coarse:.12e} vs {fine:.12e} after doubling"
        )));
    }
    Ok(fine)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TorusGap {
    /// difference of the enclosing and enclosed radii at unit coefficient scale
    pub annulus_width: f64,
    /// Euclidean distance between the two circle centers at the same scale
    pub center_separation: f64,
    pub mu: f64,
}

/// Width of the annulus trapping the curve, normalized to a₃ = 1, b₃ = 0.
/// Both the width and the center separation shrink to 0 as k → 0 (μ → 1),
/// which is the collapse onto the minimal Clifford torus circle.
pub fn torus_convergence_gap(m: u32, n: u32) -> Result<TorusGap> {
    let k = solve_k_mn(m, n)?;
    let r = k * k / (2.0 - k * k);
    let mu = (1.0 - r) * (1.0 + r);
    let annulus_width = 2.0 * (1.0 + r - mu) / (mu * (1.0 + r));
    let center_separation = 4.0 * r / (mu * ((2.0 + 2.0 * r).sqrt() + (2.0 - 2.0 * r).sqrt()));
    Ok(TorusGap {
        annulus_width,
        center_separation,
        mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_pairs_up_to_twenty() {
        let pairs = admissible_pairs(20);
        assert_eq!(pairs.len(), 27);
        assert!(pairs.contains(&(2, 3)));
        assert!(pairs.contains(&(13, 20)));
        assert!(!pairs.contains(&(1, 2)));
        assert!(!pairs.contains(&(5, 10)));
        assert!(pairs.windows(2).all(|w| (w[0].1, w[0].0) < (w[1].1, w[1].0)));
    }

    #[test]
    fn integer_admissibility_matches_ratio() {
        for n in 1..=40u32 {
            for m in 1..=n {
                let ratio = 2.0 * m as f64 / n as f64;
                let by_ratio = gcd(m as u64, n as u64) == 1
                    && ratio > 1.0
                    && ratio < std::f64::consts::SQRT_2;
                assert_eq!(pair_is_admissible(m, n), by_ratio, "({m}, {n})");
            }
        }
    }

    #[test]
    fn record_trefoil() {
        let r = closed_curve_record(2, 3).unwrap();
        assert!((r.k_mn - 0.9362).abs() < 5e-5);
        assert_eq!(r.selfint_s, 3);
        assert!((r.willmore_w - 39.96).abs() < 0.01);
        assert!((r.length_l - 15.77).abs() < 0.01);
    }

    #[test]
    fn gap_shrinks_toward_clifford() {
        let wide = torus_convergence_gap(2, 3).unwrap();
        let narrow = torus_convergence_gap(12, 17).unwrap();
        assert!(narrow.mu > wide.mu);
        assert!(narrow.annulus_width < wide.annulus_width);
        assert!(narrow.center_separation < wide.center_separation);
    }
}
