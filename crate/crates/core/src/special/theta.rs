//! Jacobi theta functions in the elliptic normalization: the series run in
//! v = πz/(2K) with nome q = exp(−π K′/K).
//!
//! Naming follows the classical big-letter convention tied to the modulus:
//! `big_theta` is the ϑ₄-type function vanishing nowhere on the real line,
//! `big_h` the odd ϑ₁-type function with zeros at the lattice, `big_theta1`
//! the ϑ₃ companion with `big_theta(z + K) = big_theta1(z)`.
//!
//! Series are truncated when the coefficient bound of the next term drops
//! below 1e-17 · (1 + |partial sum|). For the moduli used here q stays below
//! ~0.4, so a dozen terms suffice; precision degrades only past k ≈ 0.999
//! (see `EllipticModulus::precision_warning`).

use crate::special::elliptic::EllipticModulus;
use std::ops::{Add, Mul, Neg, Sub};

/// Minimal complex value for the off-axis theta evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn scale(self, t: f64) -> Self {
        Complex::new(self.re * t, self.im * t)
    }

    /// e^{iθ} rotation factor.
    pub fn cis(theta: f64) -> Self {
        Complex::new(theta.cos(), theta.sin())
    }

    /// Multiplication by i.
    pub fn mul_i(self) -> Self {
        Complex::new(-self.im, self.re)
    }

    pub fn div(self, o: Complex) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Complex::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

const TRUNC: f64 = 1e-17;
const NMAX: usize = 64;

/// ϑ₄(v, q) = 1 + 2 Σ (−1)ⁿ qⁿ² cos 2nv.
fn theta4_series(v: f64, q: f64) -> f64 {
    let mut sum = 1.0_f64;
    let mut sign = -1.0;
    for n in 1..=NMAX {
        let coeff = 2.0 * q.powi((n * n) as i32);
        if coeff < TRUNC * (1.0 + sum.abs()) {
            break;
        }
        sum += sign * coeff * (2.0 * n as f64 * v).cos();
        sign = -sign;
    }
    sum
}

/// d/dv ϑ₄(v, q) = −4 Σ (−1)ⁿ n qⁿ² sin 2nv.
fn theta4_dv_series(v: f64, q: f64) -> f64 {
    let mut sum = 0.0_f64;
    let mut sign = -1.0;
    for n in 1..=NMAX {
        let coeff = 4.0 * n as f64 * q.powi((n * n) as i32);
        if coeff < TRUNC * (1.0 + sum.abs()) {
            break;
        }
        sum -= sign * coeff * (2.0 * n as f64 * v).sin();
        sign = -sign;
    }
    sum
}

/// ϑ₃(v, q) = 1 + 2 Σ qⁿ² cos 2nv.
fn theta3_series(v: f64, q: f64) -> f64 {
    let mut sum = 1.0_f64;
    for n in 1..=NMAX {
        let coeff = 2.0 * q.powi((n * n) as i32);
        if coeff < TRUNC * (1.0 + sum.abs()) {
            break;
        }
        sum += coeff * (2.0 * n as f64 * v).cos();
    }
    sum
}

fn theta3_dv_series(v: f64, q: f64) -> f64 {
    let mut sum = 0.0_f64;
    for n in 1..=NMAX {
        let coeff = 4.0 * n as f64 * q.powi((n * n) as i32);
        if coeff < TRUNC * (1.0 + sum.abs()) {
            break;
        }
        sum -= coeff * (2.0 * n as f64 * v).sin();
    }
    sum
}

/// ϑ₁(v, q) = 2 Σ (−1)ⁿ q^{(n+1/2)²} sin((2n+1)v).
fn theta1_series(v: f64, q: f64) -> f64 {
    let mut sum = 0.0_f64;
    let mut sign = 1.0;
    for n in 0..=NMAX {
        let e = (n as f64 + 0.5) * (n as f64 + 0.5);
        let coeff = 2.0 * q.powf(e);
        if n > 0 && coeff < TRUNC * (1.0 + sum.abs()) {
            break;
        }
        sum += sign * coeff * ((2 * n + 1) as f64 * v).sin();
        sign = -sign;
    }
    sum
}

fn theta1_dv_series(v: f64, q: f64) -> f64 {
    let mut sum = 0.0_f64;
    let mut sign = 1.0;
    for n in 0..=NMAX {
        let e = (n as f64 + 0.5) * (n as f64 + 0.5);
        let coeff = 2.0 * (2 * n + 1) as f64 * q.powf(e);
        if n > 0 && coeff < TRUNC * (1.0 + sum.abs()) {
            break;
        }
        sum += sign * coeff * ((2 * n + 1) as f64 * v).cos();
        sign = -sign;
    }
    sum
}

/// ϑ₁ at complex v. sin((2n+1)(x+iy)) splits into
/// sin·cosh + i cos·sinh; the coefficient bound gains e^{(2n+1)|y|}.
fn theta1_series_complex(v: Complex, q: f64) -> Complex {
    let mut sum = Complex::ZERO;
    let mut sign = 1.0;
    for n in 0..=NMAX {
        let m = (2 * n + 1) as f64;
        let e = (n as f64 + 0.5) * (n as f64 + 0.5);
        let coeff = 2.0 * q.powf(e) * (m * v.im.abs()).exp();
        if n > 0 && coeff < TRUNC * (1.0 + sum.abs()) {
            break;
        }
        let term = Complex::new(
            (m * v.re).sin() * (m * v.im).cosh(),
            (m * v.re).cos() * (m * v.im).sinh(),
        );
        sum = sum + term.scale(sign * 2.0 * q.powf(e));
        sign = -sign;
    }
    sum
}

fn theta1_dv_series_complex(v: Complex, q: f64) -> Complex {
    let mut sum = Complex::ZERO;
    let mut sign = 1.0;
    for n in 0..=NMAX {
        let m = (2 * n + 1) as f64;
        let e = (n as f64 + 0.5) * (n as f64 + 0.5);
        let coeff = 2.0 * m * q.powf(e) * (m * v.im.abs()).exp();
        if n > 0 && coeff < TRUNC * (1.0 + sum.abs()) {
            break;
        }
        let term = Complex::new(
            (m * v.re).cos() * (m * v.im).cosh(),
            -(m * v.re).sin() * (m * v.im).sinh(),
        );
        sum = sum + term.scale(sign * 2.0 * m * q.powf(e));
        sign = -sign;
    }
    sum
}

#[inline]
fn vscale(m: &EllipticModulus) -> f64 {
    std::f64::consts::FRAC_PI_2 / m.big_k
}

/// Θ(z) = ϑ₄(πz/2K, q); no real zeros.
pub fn big_theta(z: f64, m: &EllipticModulus) -> f64 {
    theta4_series(vscale(m) * z, m.nome)
}

/// dΘ/dz.
pub fn big_theta_dz(z: f64, m: &EllipticModulus) -> f64 {
    vscale(m) * theta4_dv_series(vscale(m) * z, m.nome)
}

/// H(z) = ϑ₁(πz/2K, q); odd, vanishes at 2K ℤ + 2iK′ ℤ.
pub fn big_h(z: f64, m: &EllipticModulus) -> f64 {
    theta1_series(vscale(m) * z, m.nome)
}

pub fn big_h_dz(z: f64, m: &EllipticModulus) -> f64 {
    vscale(m) * theta1_dv_series(vscale(m) * z, m.nome)
}

/// Θ₁(z) = ϑ₃(πz/2K, q) = Θ(z + K).
pub fn big_theta1(z: f64, m: &EllipticModulus) -> f64 {
    theta3_series(vscale(m) * z, m.nome)
}

pub fn big_theta1_dz(z: f64, m: &EllipticModulus) -> f64 {
    vscale(m) * theta3_dv_series(vscale(m) * z, m.nome)
}

/// Jacobi zeta ζ(z) = Θ′(z)/Θ(z); odd, 2K-periodic.
pub fn jacobi_zeta(z: f64, m: &EllipticModulus) -> f64 {
    big_theta_dz(z, m) / big_theta(z, m)
}

/// H at complex argument z (elliptic normalization on both components).
pub fn big_h_complex(z: Complex, m: &EllipticModulus) -> Complex {
    theta1_series_complex(z.scale(vscale(m)), m.nome)
}

pub fn big_h_dz_complex(z: Complex, m: &EllipticModulus) -> Complex {
    theta1_dv_series_complex(z.scale(vscale(m)), m.nome).scale(vscale(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::elliptic::incomplete_e;
    use crate::special::jacobi::JacobiAgm;

    #[test]
    fn quarter_shift_swaps_types() {
        for &k in &[0.2, 0.75, 0.97, 0.9995] {
            let m = EllipticModulus::new(k).unwrap();
            for i in 0..40 {
                let z = -3.0 + 0.17 * i as f64 * m.big_k;
                let lhs = big_theta(z + m.big_k, &m);
                let rhs = big_theta1(z, &m);
                assert!((lhs - rhs).abs() < 1e-13 * rhs.abs().max(1.0), "k={k} z={z}");
            }
        }
    }

    #[test]
    fn sn_dn_as_theta_quotients() {
        // sn = H/(√k Θ), dn = √k′ Θ₁/Θ tie the theta layer to the AGM layer.
        for &k in &[0.3, 0.8, 0.99] {
            let m = EllipticModulus::new(k).unwrap();
            let agm = JacobiAgm::new(k).unwrap();
            for i in 0..60 {
                let u = -9.0 + 0.31 * i as f64;
                let (sn, _, dn) = agm.eval(u);
                let sn_theta = big_h(u, &m) / (k.sqrt() * big_theta(u, &m));
                let dn_theta = m.k_prime.sqrt() * big_theta1(u, &m) / big_theta(u, &m);
                assert!((sn - sn_theta).abs() < 1e-12, "k={k} u={u}");
                assert!((dn - dn_theta).abs() < 1e-12, "k={k} u={u}");
            }
        }
    }

    #[test]
    fn zeta_matches_incomplete_e_form() {
        // ζ(u) = E(sn u, k) − (E/K) u on [0, K], then 2K-periodic.
        for &k in &[0.4, 0.9, 0.998] {
            let m = EllipticModulus::new(k).unwrap();
            let agm = JacobiAgm::new(k).unwrap();
            for i in 0..=24 {
                let u = m.big_k * i as f64 / 24.0;
                let sn = agm.eval(u).0;
                let want = incomplete_e(sn, k).unwrap() - m.big_e / m.big_k * u;
                let got = jacobi_zeta(u, &m);
                assert!((got - want).abs() < 1e-12, "k={k} u={u}: {got} vs {want}");
                let shifted = jacobi_zeta(u + 2.0 * m.big_k, &m);
                assert!((shifted - got).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn complex_series_restricts_to_real() {
        let m = EllipticModulus::new(0.85).unwrap();
        for i in 0..30 {
            let z = -4.0 + 0.31 * i as f64;
            let c = big_h_complex(Complex::new(z, 0.0), &m);
            assert!((c.re - big_h(z, &m)).abs() < 1e-14 * (1.0 + c.re.abs()));
            assert_eq!(c.im, 0.0);
            let d = big_h_dz_complex(Complex::new(z, 0.0), &m);
            assert!((d.re - big_h_dz(z, &m)).abs() < 1e-13 * (1.0 + d.re.abs()));
        }
    }

    #[test]
    fn h_is_odd_theta_is_even() {
        let m = EllipticModulus::new(0.6).unwrap();
        for i in 1..20 {
            let z = 0.23 * i as f64;
            assert!((big_h(-z, &m) + big_h(z, &m)).abs() < 1e-15);
            assert!((big_theta(-z, &m) - big_theta(z, &m)).abs() < 1e-15);
        }
    }
}
