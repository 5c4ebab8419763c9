//! Legendre elliptic integrals.
//!
//! Complete integrals use the arithmetic-geometric mean, incomplete ones the
//! Carlson symmetric forms RF and RD with the duplication algorithm. The
//! difference E − F is exposed separately because it is a pure RD value;
//! computing it as a literal difference loses digits for small amplitudes.

use crate::error::{Error, Result};

/// √(1−k²) without cancellation near k = 1.
#[inline]
pub(crate) fn complementary(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain(format!("modulus k = {k} outside [0, 1)")));
    }
    Ok(())
}

/// Complete elliptic integrals (K(k), E(k)) in one AGM pass.
///
/// K = π / (2 AGM(1, k′)), E = K (1 − Σ 2^{n−1} c_n²) with c₀ = k.
pub fn complete_k_e(k: f64) -> Result<(f64, f64)> {
    check_modulus(k)?;
    let mut a = 1.0_f64;
    let mut b = complementary(k);
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow2 = 0.5;
    for _ in 0..64 {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    let big_k = std::f64::consts::PI / (2.0 * a);
    Ok((big_k, big_k * (1.0 - sum)))
}

pub fn complete_k(k: f64) -> Result<f64> {
    Ok(complete_k_e(k)?.0)
}

pub fn complete_e(k: f64) -> Result<f64> {
    Ok(complete_k_e(k)?.1)
}

/// dK/dk = (E − (1−k²)K) / (k(1−k²)).
pub fn complete_k_derivative(k: f64) -> Result<f64> {
    if k <= 0.0 || k >= 1.0 {
        return Err(Error::domain(format!("dK/dk needs k in (0, 1), got {k}")));
    }
    let (big_k, big_e) = complete_k_e(k)?;
    let kp2 = (1.0 - k) * (1.0 + k);
    Ok((big_e - kp2 * big_k) / (k * kp2))
}

/// dE/dk = (E − K) / k.
pub fn complete_e_derivative(k: f64) -> Result<f64> {
    if k <= 0.0 || k >= 1.0 {
        return Err(Error::domain(format!("dE/dk needs k in (0, 1), got {k}")));
    }
    let (big_k, big_e) = complete_k_e(k)?;
    Ok((big_e - big_k) / k)
}

/// Carlson RF(x, y, z); arguments nonnegative, at most one zero.
pub(crate) fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    debug_assert!(x + y > 0.0 && y + z > 0.0 && z + x > 0.0);
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut a = a0;
    let mut scale = 1.0_f64;
    let dev0 = (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    // Deviations shrink by 4 per round; the five-term series then leaves a
    // remainder ~|X|^6, so |X| < 2e-3 puts it below f64 roundoff.
    for _ in 0..64 {
        if dev0 * scale < 2.0e-3 * a.abs() {
            break;
        }
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lam = sx * sy + sy * sz + sz * sx;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        a = 0.25 * (a + lam);
        scale *= 0.25;
    }
    let xx = (a0 - x) * scale / a;
    let yy = (a0 - y) * scale / a;
    let zz = -(xx + yy);
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// Carlson RD(x, y, z); x, y nonnegative (not both zero), z positive.
pub(crate) fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z > 0.0 && x + y > 0.0);
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let mut a = a0;
    let mut scale = 1.0_f64;
    let mut sum = 0.0_f64;
    let dev0 = (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    for _ in 0..64 {
        if dev0 * scale < 1.2e-3 * a.abs() {
            break;
        }
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lam = sx * sy + sy * sz + sz * sx;
        sum += scale / (sz * (zt + lam));
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        a = 0.25 * (a + lam);
        scale *= 0.25;
    }
    let xx = (a0 - x) * scale / a;
    let yy = (a0 - y) * scale / a;
    let zz = -(xx + yy) / 3.0;
    let e2 = xx * yy - 6.0 * zz * zz;
    let e3 = (3.0 * xx * yy - 8.0 * zz * zz) * zz;
    let e4 = 3.0 * (xx * yy - zz * zz) * zz * zz;
    let e5 = xx * yy * zz * zz * zz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    3.0 * sum + scale * series / (a * a.sqrt())
}

fn check_incomplete(l: f64, k: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&l) {
        return Err(Error::domain(format!("sine argument l = {l} outside [-1, 1]")));
    }
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain(format!("modulus k = {k} outside [0, 1]")));
    }
    if k >= 1.0 && l.abs() >= 1.0 {
        return Err(Error::domain("F/E diverge at l = k = 1".to_string()));
    }
    Ok(())
}

/// Incomplete F(l, k) = ∫₀^l dt / (√(1−t²) √(1−k²t²)), l the sine of the
/// amplitude. Odd in l.
pub fn incomplete_f(l: f64, k: f64) -> Result<f64> {
    check_incomplete(l, k)?;
    let al = l.abs();
    let c2 = (1.0 - al) * (1.0 + al);
    let d2 = (1.0 - k * al) * (1.0 + k * al);
    Ok(l.signum() * al * carlson_rf(c2, d2, 1.0))
}

/// Incomplete E(l, k) = ∫₀^l √(1−k²t²)/√(1−t²) dt. Odd in l.
pub fn incomplete_e(l: f64, k: f64) -> Result<f64> {
    Ok(incomplete_f(l, k)? + incomplete_e_minus_f(l, k)?)
}

/// E(l, k) − F(l, k) = −(k² l³ / 3) RD(1−l², 1−k²l², 1), evaluated without
/// subtracting the two integrals.
pub fn incomplete_e_minus_f(l: f64, k: f64) -> Result<f64> {
    check_incomplete(l, k)?;
    let al = l.abs();
    if al == 0.0 || k == 0.0 {
        return Ok(0.0);
    }
    let c2 = (1.0 - al) * (1.0 + al);
    let d2 = (1.0 - k * al) * (1.0 + k * al);
    Ok(-l.signum() * (k * k * al * al * al / 3.0) * carlson_rd(c2, d2, 1.0))
}

/// Heuman lambda function Λ₀(arcsin l, k)
///   = (2/π) [ E(k) F(l, k′) + K(k) (E − F)(l, k′) ].
/// Λ₀(1, k) = 1 for every k (Legendre relation).
pub fn heuman_lambda0(l: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    let kp = complementary(k);
    let (big_k, big_e) = complete_k_e(k)?;
    let f = incomplete_f(l, kp)?;
    let emf = incomplete_e_minus_f(l, kp)?;
    Ok(std::f64::consts::FRAC_2_PI * (big_e * f + big_k * emf))
}

/// ∂Λ₀/∂l = 2 (E(k) − (1−k²) l² K(k)) / (π √(1−l²) √(1−(1−k²)l²)).
pub fn heuman_lambda0_dl(l: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    if l.abs() >= 1.0 {
        return Err(Error::domain("dΛ₀/dl needs |l| < 1".to_string()));
    }
    let kp2 = (1.0 - k) * (1.0 + k);
    let (big_k, big_e) = complete_k_e(k)?;
    let den = ((1.0 - l * l) * (1.0 - kp2 * l * l)).sqrt();
    Ok(std::f64::consts::FRAC_2_PI * (big_e - kp2 * l * l * big_k) / den)
}

/// ∂Λ₀/∂k = 2 (E(k) − K(k)) l √(1−l²) / (π k √(1−(1−k²)l²)).
pub fn heuman_lambda0_dk(l: f64, k: f64) -> Result<f64> {
    if k <= 0.0 || k >= 1.0 {
        return Err(Error::domain("dΛ₀/dk needs k in (0, 1)".to_string()));
    }
    if l.abs() > 1.0 {
        return Err(Error::domain("dΛ₀/dk needs |l| <= 1".to_string()));
    }
    let kp2 = (1.0 - k) * (1.0 + k);
    let (big_k, big_e) = complete_k_e(k)?;
    let den = k * (1.0 - kp2 * l * l).sqrt();
    Ok(std::f64::consts::FRAC_2_PI * (big_e - big_k) * l * (1.0 - l * l).sqrt() / den)
}

/// Cached data for a fixed modulus: both quarter periods, both complete E,
/// and the nome q = exp(−π K(k′)/K(k)).
///
/// Theta series built on `nome` lose figures once q grows past ~0.4;
/// `precision_warning` flags moduli beyond 0.999 where downstream results
/// should not be trusted to full double precision.
#[derive(Debug, Clone)]
pub struct EllipticModulus {
    pub k: f64,
    pub k_prime: f64,
    pub big_k: f64,
    pub big_e: f64,
    pub big_k_prime: f64,
    pub big_e_prime: f64,
    pub nome: f64,
    pub precision_warning: bool,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::domain(format!("modulus k = {k} outside (0, 1)")));
        }
        let k_prime = complementary(k);
        let (big_k, big_e) = complete_k_e(k)?;
        let (big_k_prime, big_e_prime) = complete_k_e(k_prime)?;
        let nome = (-std::f64::consts::PI * big_k_prime / big_k).exp();
        Ok(EllipticModulus {
            k,
            k_prime,
            big_k,
            big_e,
            big_k_prime,
            big_e_prime,
            nome,
            precision_warning: k > 0.999,
        })
    }
}
