//! Fundamental systems of the Hill-type equation w'' + 2 dn²(·, k) w = 0 and
//! the frame data built from them.
//!
//! Both curve families share one pattern: the curvature is a rescaled Jacobi
//! function, and the second-order equation satisfied by (distance functions
//! along the curve)/κ has an explicit fundamental system expressible through
//! theta quotients. The orbitlike family needs the theta functions at a
//! complex shift iα_k; the wavelike family stays on the real line.
//!
//! The rotation number Δθ(k) ∈ (π, √2 π) of the orbitlike angle function is
//! computed from complete integrals and the Heuman lambda function; closure
//! of a curve is equivalent to Δθ(k) being a rational multiple of 2π.

use crate::error::{Error, Result};
use crate::special::elliptic::{
    complete_k_e, complementary, heuman_lambda0, incomplete_e, incomplete_f, EllipticModulus,
};
use crate::special::jacobi::JacobiAgm;
use crate::special::theta::{
    big_h_complex, big_h_dz_complex, big_theta, big_theta1, big_theta1_dz, big_theta_dz, Complex,
};

/// Values of the scaled fundamental system and curvature at one parameter.
///
/// For the orbitlike family `w1, w2` solve the scaled equation with
/// Wronskian w1 w2' − w2 w1' = √μ / 2 and w1² + w2² = (κ² − μ)/κ².
/// `theta` is the continuous angle with (w2 − i w1) ∝ e^{iθ}.
#[derive(Debug, Clone, Copy)]
pub struct FrameValues {
    pub w1: f64,
    pub w2: f64,
    pub w1_prime: f64,
    pub w2_prime: f64,
    pub kappa: f64,
    pub kappa_prime: f64,
    pub theta: f64,
}

/// Orbitlike curvature data for modulus k ∈ (0, 1) and phase s*.
///
/// κ(s) = (2/√(2−k²)) dn((s+s*)/√(2−k²), k), μ = 4(1−k²)/(2−k²)².
#[derive(Debug, Clone)]
pub struct OrbitlikeSystem {
    pub k: f64,
    pub s_star: f64,
    pub mu: f64,
    /// argument scale √(2−k²)
    pub scale: f64,
    pub delta_theta: f64,
    pub modulus: EllipticModulus,
    agm: JacobiAgm,
    /// imaginary shift α_k with dn(iα_k, k)² = 2 − k²
    alpha: f64,
    /// ζ(iα_k, k) = iβ
    beta: f64,
    /// real normalization factor mapping w_+ to w1 + i w2
    norm: f64,
}

impl OrbitlikeSystem {
    pub fn new(k: f64, s_star: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::domain(format!(
                "orbitlike modulus k = {k} outside (0, 1)"
            )));
        }
        if !s_star.is_finite() {
            return Err(Error::domain("phase s* must be finite".to_string()));
        }
        let modulus = EllipticModulus::new(k)?;
        let agm = JacobiAgm::new(k)?;
        let kp = modulus.k_prime;
        let scale = (2.0 - k * k).sqrt();
        let mu = 4.0 * (kp * kp) / ((2.0 - k * k) * (2.0 - k * k));

        // α_k = F(k′, k′): sn(α_k, k′) = k′, hence dn(iα_k, k) = √(2−k²).
        let alpha = incomplete_f(kp, kp)?;
        // ζ(iα, k) = i[ −ζ(α, k′) − πα/(2KK′) + sn dn / cn (α, k′) ] and the
        // last factor collapses to k′√(2−k²) at α = α_k.
        let zeta_alpha_kp = incomplete_e(kp, kp)? - modulus.big_e_prime / modulus.big_k_prime * alpha;
        let beta = -zeta_alpha_kp
            - std::f64::consts::PI * alpha / (2.0 * modulus.big_k * modulus.big_k_prime)
            + kp * scale;

        let delta_theta = rotation_delta_theta(k)?;

        let mut sys = OrbitlikeSystem {
            k,
            s_star,
            mu,
            scale,
            delta_theta,
            modulus,
            agm,
            alpha,
            beta,
            norm: 1.0,
        };
        // Normalize so that w2(0) = k′ on the reduced line (and w1(0) = 0,
        // which holds because H(−iα)/Θ(0) is purely imaginary).
        let w0 = sys.w_plus(0.0);
        if w0.im == 0.0 {
            return Err(Error::numerical("degenerate theta normalization".to_string()));
        }
        sys.norm = kp / w0.im;
        Ok(sys)
    }

    /// Curvature period 2√(2−k²)K.
    pub fn period(&self) -> f64 {
        2.0 * self.scale * self.modulus.big_k
    }

    pub fn kappa(&self, s: f64) -> f64 {
        let u = (s + self.s_star) / self.scale;
        2.0 / self.scale * self.agm.eval(u).2
    }

    pub fn kappa_prime(&self, s: f64) -> f64 {
        let u = (s + self.s_star) / self.scale;
        let (sn, cn, _) = self.agm.eval(u);
        -2.0 * self.k * self.k / (self.scale * self.scale) * sn * cn
    }

    /// κ extrema: 2/√(2−k²) at the period lattice, 2√(1−k²)/√(2−k²) offset by
    /// half a period.
    pub fn kappa_max(&self) -> f64 {
        2.0 / self.scale
    }

    pub fn kappa_min(&self) -> f64 {
        2.0 * self.modulus.k_prime / self.scale
    }

    /// w_+(z) = H(z − iα)/Θ(z) · e^{izβ} on the reduced line.
    fn w_plus(&self, z: f64) -> Complex {
        let h = big_h_complex(Complex::new(z, -self.alpha), &self.modulus);
        let rot = Complex::cis(z * self.beta);
        let th = big_theta(z, &self.modulus);
        (h * rot).scale(1.0 / th)
    }

    /// (w1, w2, w1', w2') of the reduced system at reduced argument z:
    /// w1 + i w2 = norm · w_+(z).
    fn w_reduced(&self, z: f64) -> (f64, f64, f64, f64) {
        let m = &self.modulus;
        let arg = Complex::new(z, -self.alpha);
        let h = big_h_complex(arg, m);
        let hp = big_h_dz_complex(arg, m);
        let th = big_theta(z, m);
        let zeta = big_theta_dz(z, m) / th;
        let rot = Complex::cis(z * self.beta);
        let w = (h * rot).scale(self.norm / th);
        // w' = e^{izβ} [H' + (iβ − ζ) H] / Θ
        let bracket = hp + h.mul_i().scale(self.beta) - h.scale(zeta);
        let wp = (bracket * rot).scale(self.norm / th);
        (w.re, w.im, wp.re, wp.im)
    }

    /// Full frame at arclength s: scaled fundamental system, curvature, and
    /// the unwrapped angle θ(s).
    pub fn frame(&self, s: f64) -> FrameValues {
        let u = (s + self.s_star) / self.scale;
        let z = u - self.modulus.big_k;
        let (w1, w2, w1p, w2p) = self.w_reduced(z);
        let inv = 1.0 / self.scale;
        let big_w1 = w1 * inv;
        let big_w2 = w2 * inv;
        let big_w1p = w1p * inv * inv;
        let big_w2p = w2p * inv * inv;
        let (sn, cn, dn) = self.agm.eval(u);
        let kappa = 2.0 * inv * dn;
        let kappa_prime = -2.0 * self.k * self.k * inv * inv * sn * cn;
        let theta = self.unwrap_theta(s, big_w1, big_w2);
        FrameValues {
            w1: big_w1,
            w2: big_w2,
            w1_prime: big_w1p,
            w2_prime: big_w2p,
            kappa,
            kappa_prime,
            theta,
        }
    }

    /// Continuous angle θ with w2 − i w1 = (√(κ²−μ)/κ) e^{iθ}, pinned by
    /// θ(−s*) = −Δθ/2. The principal value is corrected by the linear drift
    /// θ((ℓK√(2−k²)) − s*) = (ℓ−1)Δθ/2, which stays within π/2 of the truth.
    fn unwrap_theta(&self, s: f64, big_w1: f64, big_w2: f64) -> f64 {
        let theta0 = (-big_w1).atan2(big_w2);
        let ell = (s + self.s_star) / (self.scale * self.modulus.big_k);
        let lin = (ell - 1.0) * self.delta_theta / 2.0;
        let wraps = ((lin - theta0) / (2.0 * std::f64::consts::PI)).round();
        theta0 + 2.0 * std::f64::consts::PI * wraps
    }

    pub fn theta_angle(&self, s: f64) -> f64 {
        let f = self.frame(s);
        f.theta
    }
}

/// Wavelike curvature data for modulus k ∈ (1/√2, 1) and phase s*.
///
/// κ(s) = (2k/√(2k²−1)) cn((s+s*)/√(2k²−1), k), μ = −4k²(1−k²)/(2k²−1)².
/// The natural fundamental data here is the "hatted" pair ŵ = cn · w, which
/// is smooth across the zeros of cn; the unhatted system degenerates there.
#[derive(Debug, Clone)]
pub struct WavelikeSystem {
    pub k: f64,
    pub s_star: f64,
    pub mu: f64,
    /// argument scale √(2k²−1)
    pub scale: f64,
    pub modulus: EllipticModulus,
    agm: JacobiAgm,
    /// real shift α_k with dn(α_k, k) = k
    alpha: f64,
    /// ζ(α_k, k)
    zeta_alpha: f64,
    /// Θ₁(α_k)/Θ(0), the common value w_±(0)
    w_origin: f64,
}

/// Hatted frame values for the wavelike family. `w_hat_j = κ W_j` stays
/// bounded; `theta` is the hyperbolic angle with
/// ŵ2 − i ŵ1 = √(κ²−μ)(cosh θ + i sinh θ).
#[derive(Debug, Clone, Copy)]
pub struct WavelikeFrameValues {
    pub w_hat1: f64,
    pub w_hat2: f64,
    pub w_hat1_prime: f64,
    pub w_hat2_prime: f64,
    pub kappa: f64,
    pub kappa_prime: f64,
    pub theta: f64,
}

impl WavelikeFrameValues {
    /// The unhatted system (W1, W2, W1', W2'); undefined where κ = 0.
    pub fn unhatted(&self) -> Result<(f64, f64, f64, f64)> {
        if self.kappa.abs() < 1e-12 {
            return Err(Error::numerical(
                "unhatted wavelike frame degenerates at a curvature zero".to_string(),
            ));
        }
        let w1 = self.w_hat1 / self.kappa;
        let w2 = self.w_hat2 / self.kappa;
        let w1p = (self.w_hat1_prime - self.kappa_prime * w1) / self.kappa;
        let w2p = (self.w_hat2_prime - self.kappa_prime * w2) / self.kappa;
        Ok((w1, w2, w1p, w2p))
    }
}

impl WavelikeSystem {
    pub fn new(k: f64, s_star: f64) -> Result<Self> {
        let lo = std::f64::consts::FRAC_1_SQRT_2;
        if !(k > lo && k < 1.0) {
            return Err(Error::domain(format!(
                "wavelike modulus k = {k} outside (1/√2, 1)"
            )));
        }
        if !s_star.is_finite() {
            return Err(Error::domain("phase s* must be finite".to_string()));
        }
        let modulus = EllipticModulus::new(k)?;
        let agm = JacobiAgm::new(k)?;
        let kp = modulus.k_prime;
        let c2 = 2.0 * k * k - 1.0;
        let scale = c2.sqrt();
        let mu = -4.0 * k * k * kp * kp / (c2 * c2);
        // α_k = F(k′/k, k): sn = k′/k gives dn(α_k, k)² = k².
        let alpha = incomplete_f(kp / k, k)?;
        let zeta_alpha = incomplete_e(kp / k, k)? - modulus.big_e / modulus.big_k * alpha;
        let w_origin = big_theta1(alpha, &modulus) / big_theta(0.0, &modulus);
        Ok(WavelikeSystem {
            k,
            s_star,
            mu,
            scale,
            modulus,
            agm,
            alpha,
            zeta_alpha,
            w_origin,
        })
    }

    /// Curvature period 4√(2k²−1)K (cn has the doubled period).
    pub fn period(&self) -> f64 {
        4.0 * self.scale * self.modulus.big_k
    }

    pub fn kappa(&self, s: f64) -> f64 {
        let u = (s + self.s_star) / self.scale;
        2.0 * self.k / self.scale * self.agm.eval(u).1
    }

    pub fn kappa_prime(&self, s: f64) -> f64 {
        let u = (s + self.s_star) / self.scale;
        let (sn, _, dn) = self.agm.eval(u);
        -2.0 * self.k / (self.scale * self.scale) * sn * dn
    }

    pub fn kappa_max(&self) -> f64 {
        2.0 * self.k / self.scale
    }

    /// w_±(z) = Θ₁(z ± α)/Θ(z) · e^{∓ z ζ(α)} and the log-derivative factor
    /// needed for ŵ'.
    fn w_pm(&self, z: f64) -> (f64, f64, f64, f64) {
        let m = &self.modulus;
        let th = big_theta(z, m);
        let zeta_z = big_theta_dz(z, m) / th;
        let tp = big_theta1(z + self.alpha, m);
        let tm = big_theta1(z - self.alpha, m);
        let ep = (-z * self.zeta_alpha).exp();
        let wp = tp / th * ep;
        let wm = tm / th / ep;
        let dwp = wp * (big_theta1_dz(z + self.alpha, m) / tp - zeta_z - self.zeta_alpha);
        let dwm = wm * (big_theta1_dz(z - self.alpha, m) / tm - zeta_z + self.zeta_alpha);
        (wp, wm, dwp, dwm)
    }

    /// (ŵ1, ŵ2, ŵ1', ŵ2') on the reduced line:
    /// ŵ1 = k(w_+ − w_−)/(2 w_origin), ŵ2 = k(w_+ + w_−)/(2 w_origin).
    fn w_hat_reduced(&self, z: f64) -> (f64, f64, f64, f64) {
        let (wp, wm, dwp, dwm) = self.w_pm(z);
        let f = self.k / (2.0 * self.w_origin);
        (
            f * (wp - wm),
            f * (wp + wm),
            f * (dwp - dwm),
            f * (dwp + dwm),
        )
    }

    pub fn frame(&self, s: f64) -> WavelikeFrameValues {
        let u = (s + self.s_star) / self.scale;
        let (h1, h2, h1p, h2p) = self.w_hat_reduced(u);
        // Ŵ_j(s) = (2k/(2k²−1)) ŵ_j(u), d/ds adds 1/√(2k²−1) per derivative.
        let c2 = self.scale * self.scale;
        let f0 = 2.0 * self.k / c2;
        let f1 = f0 / self.scale;
        let (sn, cn, dn) = self.agm.eval(u);
        let kappa = 2.0 * self.k / self.scale * cn;
        let kappa_prime = -2.0 * self.k / c2 * sn * dn;
        let w_hat1 = f0 * h1;
        let w_hat2 = f0 * h2;
        let kappa_sq_minus_mu = kappa * kappa - self.mu;
        let theta = (-w_hat1 / kappa_sq_minus_mu.sqrt()).asinh();
        WavelikeFrameValues {
            w_hat1,
            w_hat2,
            w_hat1_prime: f1 * h1p,
            w_hat2_prime: f1 * h2p,
            kappa,
            kappa_prime,
            theta,
        }
    }

    pub fn theta_angle(&self, s: f64) -> f64 {
        self.frame(s).theta
    }
}

/// Rotation number Δθ(k) = π − π Λ₀(arcsin k′, k) + 2 k′ √(2−k²) K(k),
/// strictly decreasing from √2 π (k → 0) to π (k → 1).
pub fn rotation_delta_theta(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::domain(format!("rotation number needs k in (0, 1), got {k}")));
    }
    let kp = complementary(k);
    let (big_k, _) = complete_k_e(k)?;
    let lam = heuman_lambda0(kp, k)?;
    Ok(std::f64::consts::PI * (1.0 - lam) + 2.0 * kp * (2.0 - k * k).sqrt() * big_k)
}

/// Inverse of the rotation number: the unique k with Δθ(k) = target,
/// target ∈ (π, √2 π). Bisection on the strictly monotone Δθ.
pub fn solve_k_for_rotation(target: f64) -> Result<f64> {
    let hi = std::f64::consts::SQRT_2 * std::f64::consts::PI;
    if !(target > std::f64::consts::PI && target < hi) {
        return Err(Error::domain(format!(
            "rotation target {target} outside (π, √2 π)"
        )));
    }
    let mut lo_k = 1e-9;
    let mut hi_k = 1.0 - 1e-12;
    // Δθ decreasing: Δθ(lo_k) ≈ √2π > target > π ≈ Δθ(hi_k).
    let mut mid = 0.5;
    for _ in 0..200 {
        mid = 0.5 * (lo_k + hi_k);
        let v = rotation_delta_theta(mid)?;
        let err = v - target;
        if err.abs() < 1e-12 {
            return Ok(mid);
        }
        if err > 0.0 {
            lo_k = mid;
        } else {
            hi_k = mid;
        }
        if hi_k - lo_k < f64::EPSILON * mid {
            break;
        }
    }
    let v = rotation_delta_theta(mid)?;
    if (v - target).abs() < 1e-11 {
        Ok(mid)
    } else {
        Err(Error::numerical(format!(
            "rotation inversion stalled at k = {mid}, residual {}",
            v - target
        )))
    }
}
