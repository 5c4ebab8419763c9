//! Curves in the hyperbolic upper half-plane: explicit evaluation of both
//! elastica families from six Möbius coefficients, coefficient fitting from a
//! single boundary state, the conformal distance function Z, enclosure
//! geometry, and the isometry group.
//!
//! Conventions. The plane is {x₂ > 0} with metric (dx₁² + dx₂²)/x₂². A curve
//! state carries the Euclidean tangent angle φ (γ' = γ₂ e^{iφ}) and the
//! hyperbolic signed curvature κ = φ' + cos φ. Positively oriented orbitlike
//! curves have κ > 0 throughout; wavelike curvature changes sign.

use crate::error::{Error, Result};
use crate::fundamental::{FrameValues, OrbitlikeSystem, WavelikeFrameValues, WavelikeSystem};
use crate::ode::{integrate, OdeOptions};
use serde::Serialize;

/// ln(1 + z + √(z(z+2))) = Arcosh(1+z) without cancellation for small z ≥ 0.
pub(crate) fn arcosh1p(z: f64) -> f64 {
    (z + (z * (z + 2.0)).sqrt()).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicPoint {
    pub x1: f64,
    pub x2: f64,
}

impl HyperbolicPoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        HyperbolicPoint { x1, x2 }
    }
}

/// Geodesic distance Arcosh(1 + ((p₁−q₁)² + (p₂−q₂)²)/(2 p₂ q₂)).
pub fn hyperbolic_distance(p: HyperbolicPoint, q: HyperbolicPoint) -> Result<f64> {
    if p.x2 <= 0.0 || q.x2 <= 0.0 {
        return Err(Error::domain("points must have x2 > 0".to_string()));
    }
    let dx = p.x1 - q.x1;
    let dy = p.x2 - q.x2;
    Ok(arcosh1p((dx * dx + dy * dy) / (2.0 * p.x2 * q.x2)))
}

/// Position, tangent angle, and curvature data at one arclength.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveState {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Euclidean tangent angle, principal value in (−π, π].
    pub phi: f64,
    pub kappa: f64,
    pub kappa_prime: f64,
}

/// Isometries of the upper half-plane (plus the two standard
/// orientation-reversing maps, which flip the sign of κ).
#[derive(Debug, Clone, Copy)]
pub enum MobiusMap {
    /// γ ↦ γ + a (horizontal translation)
    Translate(f64),
    /// γ ↦ b γ, b > 0
    Scale(f64),
    /// γ ↦ (cos(θ/2) γ + sin(θ/2)) / (−sin(θ/2) γ + cos(θ/2))
    Rotate(f64),
    /// γ ↦ (−γ₁, γ₂); orientation-reversing
    ReflectVertical,
    /// γ ↦ γ/|γ|²; orientation-reversing
    Invert,
}

impl MobiusMap {
    pub fn apply(&self, p: HyperbolicPoint) -> Result<HyperbolicPoint> {
        if p.x2 <= 0.0 {
            return Err(Error::domain("points must have x2 > 0".to_string()));
        }
        Ok(match *self {
            MobiusMap::Translate(a) => HyperbolicPoint::new(p.x1 + a, p.x2),
            MobiusMap::Scale(b) => {
                if b <= 0.0 {
                    return Err(Error::domain("scale factor must be positive".to_string()));
                }
                HyperbolicPoint::new(b * p.x1, b * p.x2)
            }
            MobiusMap::Rotate(theta) => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                // (c γ + s)/(−s γ + c) on γ = x1 + i x2
                let dr = -s * p.x1 + c;
                let di = -s * p.x2;
                let nr = c * p.x1 + s;
                let ni = c * p.x2;
                let den = dr * dr + di * di;
                HyperbolicPoint::new((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
            }
            MobiusMap::ReflectVertical => HyperbolicPoint::new(-p.x1, p.x2),
            MobiusMap::Invert => {
                let n = p.x1 * p.x1 + p.x2 * p.x2;
                HyperbolicPoint::new(p.x1 / n, p.x2 / n)
            }
        })
    }

    /// Transform a full curve state. Tangent angles pick up the argument of
    /// the map's complex derivative; the reflections flip κ and κ'.
    pub fn apply_state(&self, st: &CurveState) -> Result<CurveState> {
        let p = self.apply(HyperbolicPoint::new(st.gamma1, st.gamma2))?;
        let wrap = |a: f64| a.sin().atan2(a.cos());
        Ok(match *self {
            MobiusMap::Translate(_) | MobiusMap::Scale(_) => CurveState {
                gamma1: p.x1,
                gamma2: p.x2,
                ..*st
            },
            MobiusMap::Rotate(theta) => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let dr = -s * st.gamma1 + c;
                let di = -s * st.gamma2;
                // d/dγ of the map is 1/(−sγ+c)²
                let phi = wrap(st.phi - 2.0 * di.atan2(dr));
                CurveState {
                    gamma1: p.x1,
                    gamma2: p.x2,
                    phi,
                    ..*st
                }
            }
            MobiusMap::ReflectVertical => CurveState {
                gamma1: p.x1,
                gamma2: p.x2,
                phi: wrap(std::f64::consts::PI - st.phi),
                kappa: -st.kappa,
                kappa_prime: -st.kappa_prime,
            },
            MobiusMap::Invert => {
                // w = 1/γ̄ is anti-holomorphic: arg w' = π − φ + 2 arg γ
                let phi = wrap(std::f64::consts::PI - st.phi + 2.0 * st.gamma2.atan2(st.gamma1));
                CurveState {
                    gamma1: p.x1,
                    gamma2: p.x2,
                    phi,
                    kappa: -st.kappa,
                    kappa_prime: -st.kappa_prime,
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    Orbitlike,
    WavelikeA3Nonzero,
    WavelikeA3Zero,
}

/// The six Möbius coefficients of an explicit elastica parametrization.
///
/// Orbitlike: γ₁ = (b·W + b₃)/(a·W + a₃), γ₂ = 1/(κ (a·W + a₃)) with the
/// constraints a₃ = √(a₁²+a₂²) > 0 and
/// (b₁,b₂) = (b₃/a₃)(a₁,a₂) + (1/(√μ a₃))(−a₂,a₁).
///
/// Wavelike: γ₁ = (b·Ŵ + b₃κ)/(a·Ŵ + a₃κ), γ₂ = 1/(a·Ŵ + a₃κ) with either
/// a₃ ≠ 0, a₂ = √(a₁²+a₃²), (b₁,b₂) = (b₃/a₃)(a₁,a₂) − (1/(√|μ| a₃))(a₂,a₁),
/// or the cone case a₃ = 0, a₂ = |a₁|, b₁ = sign(a₁) b₂, |b₃| = 1/√|μ|.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub kind: CoefficientKind,
}

const CONSTRAINT_TOL: f64 = 1e-9;

impl CurveCoefficients {
    /// Build a valid orbitlike coefficient set from the free parameters
    /// (a₁, a₂, b₃); a₃ and (b₁, b₂) are determined.
    pub fn orbitlike(a1: f64, a2: f64, b3: f64, mu: f64) -> Result<Self> {
        if mu <= 0.0 || mu >= 1.0 {
            return Err(Error::domain(format!("orbitlike needs μ in (0,1), got {mu}")));
        }
        let a3 = a1.hypot(a2);
        if a3 <= 0.0 {
            return Err(Error::domain("(a1, a2) must not vanish".to_string()));
        }
        let sq = mu.sqrt();
        Ok(CurveCoefficients {
            a1,
            a2,
            a3,
            b1: b3 / a3 * a1 - a2 / (sq * a3),
            b2: b3 / a3 * a2 + a1 / (sq * a3),
            b3,
            kind: CoefficientKind::Orbitlike,
        })
    }

    /// Wavelike with a₃ ≠ 0 from free parameters (a₁, a₃, b₃).
    pub fn wavelike(a1: f64, a3: f64, b3: f64, mu: f64) -> Result<Self> {
        if mu >= 0.0 {
            return Err(Error::domain(format!("wavelike needs μ < 0, got {mu}")));
        }
        if a3 == 0.0 {
            return Err(Error::domain("use wavelike_cone for a3 = 0".to_string()));
        }
        let a2 = a1.hypot(a3);
        let sq = (-mu).sqrt();
        Ok(CurveCoefficients {
            a1,
            a2,
            a3,
            b1: b3 / a3 * a1 - a2 / (sq * a3),
            b2: b3 / a3 * a2 - a1 / (sq * a3),
            b3,
            kind: CoefficientKind::WavelikeA3Nonzero,
        })
    }

    /// Degenerate wavelike (a₃ = 0): free parameters a₁ ≠ 0, b₂, and the sign
    /// of b₃ = ±1/√|μ|.
    pub fn wavelike_cone(a1: f64, b2: f64, b3_negative: bool, mu: f64) -> Result<Self> {
        if mu >= 0.0 {
            return Err(Error::domain(format!("wavelike needs μ < 0, got {mu}")));
        }
        if a1 == 0.0 {
            return Err(Error::domain("cone case needs a1 != 0".to_string()));
        }
        let b3 = if b3_negative { -1.0 } else { 1.0 } / (-mu).sqrt();
        Ok(CurveCoefficients {
            a1,
            a2: a1.abs(),
            a3: 0.0,
            b1: a1.signum() * b2,
            b2,
            b3,
            kind: CoefficientKind::WavelikeA3Zero,
        })
    }

    pub fn validate_orbitlike(&self, mu: f64) -> Result<()> {
        if self.kind != CoefficientKind::Orbitlike {
            return Err(Error::domain("coefficients are not orbitlike".to_string()));
        }
        let scale = 1.0 + self.a3.abs() + self.b3.abs();
        if self.a3 <= 0.0 {
            return Err(Error::domain("orbitlike needs a3 > 0".to_string()));
        }
        if (self.a3 - self.a1.hypot(self.a2)).abs() > CONSTRAINT_TOL * scale {
            return Err(Error::domain("a3 != sqrt(a1^2 + a2^2)".to_string()));
        }
        let sq = mu.sqrt();
        let b1 = self.b3 / self.a3 * self.a1 - self.a2 / (sq * self.a3);
        let b2 = self.b3 / self.a3 * self.a2 + self.a1 / (sq * self.a3);
        let bscale = 1.0 + b1.abs() + b2.abs();
        if (self.b1 - b1).abs() > CONSTRAINT_TOL * bscale
            || (self.b2 - b2).abs() > CONSTRAINT_TOL * bscale
        {
            return Err(Error::domain("(b1, b2) violate the orbitlike constraint".to_string()));
        }
        Ok(())
    }

    pub fn validate_wavelike(&self, mu: f64) -> Result<()> {
        let sq = (-mu).sqrt();
        let scale = 1.0 + self.a3.abs() + self.b3.abs() + self.a1.abs();
        if self.a3 == 0.0 {
            if self.kind != CoefficientKind::WavelikeA3Zero {
                return Err(Error::domain(
                    "a3 = 0 requires the degenerate wavelike kind".to_string(),
                ));
            }
            if (self.a2 - self.a1.abs()).abs() > CONSTRAINT_TOL * scale
                || (self.b1 - self.a1.signum() * self.b2).abs()
                    > CONSTRAINT_TOL * (1.0 + self.b2.abs())
                || (self.b3.abs() - 1.0 / sq).abs() > CONSTRAINT_TOL * (1.0 + 1.0 / sq)
            {
                return Err(Error::domain("degenerate wavelike constraints violated".to_string()));
            }
            return Ok(());
        }
        if self.kind != CoefficientKind::WavelikeA3Nonzero {
            return Err(Error::domain("coefficients are not wavelike".to_string()));
        }
        if (self.a2 - self.a1.hypot(self.a3)).abs() > CONSTRAINT_TOL * scale {
            return Err(Error::domain("a2 != sqrt(a1^2 + a3^2)".to_string()));
        }
        let b1 = self.b3 / self.a3 * self.a1 - self.a2 / (sq * self.a3);
        let b2 = self.b3 / self.a3 * self.a2 - self.a1 / (sq * self.a3);
        let bscale = 1.0 + b1.abs() + b2.abs();
        if (self.b1 - b1).abs() > CONSTRAINT_TOL * bscale
            || (self.b2 - b2).abs() > CONSTRAINT_TOL * bscale
        {
            return Err(Error::domain("(b1, b2) violate the wavelike constraint".to_string()));
        }
        Ok(())
    }
}

/// Tangent angle from position and curvature data; shared by both families.
/// Solves the linear system expressing (γ₁, γ₂) through (sin φ, cos φ).
fn phi_from_position(
    mu: f64,
    kappa: f64,
    kappa_prime: f64,
    a3: f64,
    b3: f64,
    gamma1: f64,
    gamma2: f64,
) -> f64 {
    let f = mu / (2.0 * (kappa * kappa - mu));
    let x = a3 * gamma1 - b3;
    let y = a3 * gamma2 - kappa / mu;
    let sin_phi = f * (kappa * kappa * x + 2.0 * kappa_prime * y);
    let cos_phi = f * (2.0 * kappa_prime * x - kappa * kappa * y);
    sin_phi.atan2(cos_phi)
}

/// Z(γ(s); P) = ((γ₁−P₁)² + (γ₂−P₂)²)/(2 P₂ γ₂), so that the hyperbolic
/// distance to P is Arcosh(1 + Z).
fn z_value(g1: f64, g2: f64, p: HyperbolicPoint) -> f64 {
    let dx = g1 - p.x1;
    let dy = g2 - p.x2;
    (dx * dx + dy * dy) / (2.0 * p.x2 * g2)
}

/// Z' from the state: ((γ₁−P₁)/P₂)cos φ + ((γ₂²−P₂²−(γ₁−P₁)²)/(2P₂γ₂)) sin φ.
fn z_prime_value(st: &CurveState, p: HyperbolicPoint) -> f64 {
    let d1 = st.gamma1 - p.x1;
    (d1 / p.x2) * st.phi.cos()
        + ((st.gamma2 * st.gamma2 - p.x2 * p.x2 - d1 * d1) / (2.0 * p.x2 * st.gamma2))
            * st.phi.sin()
}

/// The constant coefficient C of the distance expansion, evaluated from the
/// state at one parameter (the result is parameter-independent).
fn z_constant(st: &CurveState, p: HyperbolicPoint, mu: f64) -> f64 {
    let d1 = st.gamma1 - p.x1;
    let alpha = (d1 * d1 + p.x2 * p.x2) / (2.0 * p.x2 * st.gamma2);
    let beta = st.gamma2 / (2.0 * p.x2);
    let delta = d1 / p.x2;
    let (sin_phi, cos_phi) = (st.phi.sin(), st.phi.cos());
    let k = st.kappa;
    let kp = st.kappa_prime;
    alpha * (k / mu + kp / mu * sin_phi - k * k / (2.0 * mu) * cos_phi)
        + beta * (k / mu - kp / mu * sin_phi + k * k / (2.0 * mu) * cos_phi)
        + delta * (-k * k / (2.0 * mu) * sin_phi - kp / mu * cos_phi)
}

/// Orbitlike curve: a curvature system plus admissible coefficients.
#[derive(Debug, Clone)]
pub struct OrbitlikeCurve {
    pub system: OrbitlikeSystem,
    pub coeffs: CurveCoefficients,
}

impl OrbitlikeCurve {
    pub fn new(system: OrbitlikeSystem, coeffs: CurveCoefficients) -> Result<Self> {
        coeffs.validate_orbitlike(system.mu)?;
        Ok(OrbitlikeCurve { system, coeffs })
    }

    pub fn evaluate(&self, s: f64) -> CurveState {
        let f = self.system.frame(s);
        self.state_from_frame(&f)
    }

    fn state_from_frame(&self, f: &FrameValues) -> CurveState {
        let c = &self.coeffs;
        let den = c.a1 * f.w1 + c.a2 * f.w2 + c.a3;
        let gamma2 = 1.0 / (f.kappa * den);
        let gamma1 = (c.b1 * f.w1 + c.b2 * f.w2 + c.b3) / den;
        let phi = phi_from_position(
            self.system.mu,
            f.kappa,
            f.kappa_prime,
            c.a3,
            c.b3,
            gamma1,
            gamma2,
        );
        CurveState {
            gamma1,
            gamma2,
            phi,
            kappa: f.kappa,
            kappa_prime: f.kappa_prime,
        }
    }

    /// Fit the coefficients from one boundary state: position, tangent angle,
    /// and the parameter s₀ at which the curve passes through it.
    pub fn fit(
        system: OrbitlikeSystem,
        point: HyperbolicPoint,
        phi: f64,
        s0: f64,
    ) -> Result<Self> {
        if point.x2 <= 0.0 {
            return Err(Error::domain("boundary point must have x2 > 0".to_string()));
        }
        let mu = system.mu;
        let f = system.frame(s0);
        let (k, kp) = (f.kappa, f.kappa_prime);
        let (sin_phi, cos_phi) = (phi.sin(), phi.cos());
        let a3 = (2.0 * k + 2.0 * kp * sin_phi - k * k * cos_phi) / (2.0 * mu * point.x2);
        if a3 <= 0.0 {
            return Err(Error::domain(
                "state does not lie on a positively oriented orbitlike curve of this system"
                    .to_string(),
            ));
        }
        let b3 = a3 * point.x1 - (k * k * sin_phi + 2.0 * kp * cos_phi) / (2.0 * mu);
        let d = a3 * point.x1 - b3;
        let sigma1 = (1.0 - mu * (a3 * a3 * point.x2 * point.x2 + d * d)) / 2.0;
        let sigma2 = mu.sqrt() * d;
        let norm = sigma1.hypot(sigma2);
        if norm == 0.0 {
            return Err(Error::numerical("degenerate rotation data in fit".to_string()));
        }
        let (ct, st) = (f.theta.cos(), f.theta.sin());
        // (a2 + i a1) = a3 (σ1 + i σ2) e^{−iθ(s0)} / |σ|
        let a2 = a3 * (sigma1 * ct + sigma2 * st) / norm;
        let a1 = a3 * (sigma2 * ct - sigma1 * st) / norm;
        let sq = mu.sqrt();
        let coeffs = CurveCoefficients {
            a1,
            a2,
            a3,
            b1: b3 / a3 * a1 - a2 / (sq * a3),
            b2: b3 / a3 * a2 + a1 / (sq * a3),
            b3,
            kind: CoefficientKind::Orbitlike,
        };
        OrbitlikeCurve::new(system, coeffs)
    }

    pub fn kappa(&self, s: f64) -> f64 {
        self.system.kappa(s)
    }

    /// Distance function Z(s) = Z(γ(s); p). Defined for any p with p.x2 ≠ 0;
    /// 1 + Z is the Arcosh argument of d_ℍ only when p lies in the plane.
    pub fn distance_z(&self, s: f64, p: HyperbolicPoint) -> Result<f64> {
        if p.x2 == 0.0 {
            return Err(Error::domain("reference point must have x2 != 0".to_string()));
        }
        let st = self.evaluate(s);
        Ok(z_value(st.gamma1, st.gamma2, p))
    }

    /// Coefficients (A, B, C) with Z(s) = −1 + κ(s)(A W₁ + B W₂ + C),
    /// computed from the state at s₀; the result does not depend on s₀.
    pub fn z_expansion(&self, p: HyperbolicPoint, s0: f64) -> Result<(f64, f64, f64)> {
        if p.x2 == 0.0 {
            return Err(Error::domain("reference point must have x2 != 0".to_string()));
        }
        let st = self.evaluate(s0);
        let f = self.system.frame(s0);
        let mu = self.system.mu;
        let c = z_constant(&st, p, mu);
        let z0 = z_value(st.gamma1, st.gamma2, p);
        let z0p = z_prime_value(&st, p);
        let k = f.kappa;
        let rhs1 = (z0 + 1.0) / k - c;
        let rhs2 = z0p / k - f.kappa_prime * (z0 + 1.0) / (k * k);
        let det = f.w1 * f.w2_prime - f.w2 * f.w1_prime;
        let a = (f.w2_prime * rhs1 - f.w2 * rhs2) / det;
        let b = (-f.w1_prime * rhs1 + f.w1 * rhs2) / det;
        Ok((a, b, c))
    }

    /// Hyperbolic circumcenter P and the distance profile bound: Z(s; P) =
    /// −1 + κ(s)/√μ exactly, so the curve oscillates between two circles
    /// around P.
    pub fn hyperbolic_center(&self) -> HyperbolicPoint {
        let mu = self.system.mu;
        HyperbolicPoint::new(
            self.coeffs.b3 / self.coeffs.a3,
            1.0 / (mu.sqrt() * self.coeffs.a3),
        )
    }

    /// Euclidean annulus enclosing the trace: contained in the closed outer
    /// ball, avoiding the open inner ball; touches the outer boundary at
    /// curvature maxima and the inner at minima.
    pub fn enclosure(&self) -> OrbitlikeEnclosure {
        let mu = self.system.mu;
        let a3 = self.coeffs.a3;
        let x = self.coeffs.b3 / a3;
        let root = (1.0 - mu).sqrt();
        let outer_center = HyperbolicPoint::new(x, (2.0 + 2.0 * root).sqrt() / (mu * a3));
        let outer_radius = (1.0 + root) / (mu * a3);
        // 2 − 2√(1−μ) = 2μ/(1+√(1−μ)) and 2−μ−2√(1−μ) = (1−√(1−μ))² keep the
        // small-μ case away from cancellation.
        let inner_center =
            HyperbolicPoint::new(x, (2.0 * mu / (1.0 + root)).sqrt() / (mu * a3));
        let inner_radius = 1.0 / (a3 * (1.0 + root));
        OrbitlikeEnclosure {
            outer_center,
            outer_radius,
            inner_center,
            inner_radius,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrbitlikeEnclosure {
    pub outer_center: HyperbolicPoint,
    pub outer_radius: f64,
    pub inner_center: HyperbolicPoint,
    pub inner_radius: f64,
}

/// Wavelike curve: a curvature system plus admissible coefficients.
#[derive(Debug, Clone)]
pub struct WavelikeCurve {
    pub system: WavelikeSystem,
    pub coeffs: CurveCoefficients,
}

impl WavelikeCurve {
    pub fn new(system: WavelikeSystem, coeffs: CurveCoefficients) -> Result<Self> {
        coeffs.validate_wavelike(system.mu)?;
        Ok(WavelikeCurve { system, coeffs })
    }

    pub fn evaluate(&self, s: f64) -> CurveState {
        let f = self.system.frame(s);
        self.state_from_frame(&f)
    }

    fn state_from_frame(&self, f: &WavelikeFrameValues) -> CurveState {
        let c = &self.coeffs;
        let den = c.a1 * f.w_hat1 + c.a2 * f.w_hat2 + c.a3 * f.kappa;
        let gamma2 = 1.0 / den;
        let gamma1 = (c.b1 * f.w_hat1 + c.b2 * f.w_hat2 + c.b3 * f.kappa) * gamma2;
        let phi = phi_from_position(
            self.system.mu,
            f.kappa,
            f.kappa_prime,
            c.a3,
            c.b3,
            gamma1,
            gamma2,
        );
        CurveState {
            gamma1,
            gamma2,
            phi,
            kappa: f.kappa,
            kappa_prime: f.kappa_prime,
        }
    }

    /// Fit from one boundary state. Near the curvature zeros (|cn| < 1e-3)
    /// the hatted fundamental system degenerates, so the state is first
    /// transported to the nearest curvature extremum by integrating the frame
    /// equations with the known closed-form curvature.
    pub fn fit(
        system: WavelikeSystem,
        point: HyperbolicPoint,
        phi: f64,
        s0: f64,
    ) -> Result<Self> {
        if point.x2 <= 0.0 {
            return Err(Error::domain("boundary point must have x2 > 0".to_string()));
        }
        let scale = system.scale;
        let u0 = (s0 + system.s_star) / scale;
        let big_k = system.modulus.big_k;
        let cn0 = system.kappa(s0) / system.kappa_max();
        if cn0.abs() >= 1e-3 {
            return Self::fit_regular(system, point, phi, s0);
        }
        // transport to u = 2K·round(u0/2K), a curvature extremum
        let u1 = 2.0 * big_k * (u0 / (2.0 * big_k)).round();
        let s1 = u1 * scale - system.s_star;
        let opts = OdeOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-13,
            ..OdeOptions::default()
        };
        let sys = system.clone();
        let sol = integrate(
            move |s, y, dy| {
                dy[0] = y[1] * y[2].cos();
                dy[1] = y[1] * y[2].sin();
                dy[2] = sys.kappa(s) - y[2].cos();
            },
            s0,
            &[point.x1, point.x2, phi],
            s1,
            &opts,
        )?;
        let end = &sol.end_state;
        Self::fit_regular(
            system,
            HyperbolicPoint::new(end[0], end[1]),
            end[2],
            s1,
        )
    }

    fn fit_regular(
        system: WavelikeSystem,
        point: HyperbolicPoint,
        phi: f64,
        s0: f64,
    ) -> Result<Self> {
        let mu = system.mu;
        let f = system.frame(s0);
        let (k, kp) = (f.kappa, f.kappa_prime);
        let (sin_phi, cos_phi) = (phi.sin(), phi.cos());
        let abs_mu = -mu;
        let ksq_mu = k * k - mu;
        // a3 and b3 from the state displays
        let a3 = (k / mu + (2.0 * kp * sin_phi - k * k * cos_phi) / (2.0 * mu)) / point.x2;
        let b3 = a3 * point.x1 - (k * k * sin_phi + 2.0 * kp * cos_phi) / (2.0 * mu);
        // ξ¹ and ξ³ give γ₂(a₁,a₂) and the b-combination
        let v1 = (
            (2.0 * kp * cos_phi + k * k * sin_phi) / (2.0 * (abs_mu * ksq_mu).sqrt()),
            (2.0 * mu - 2.0 * k * k - 2.0 * k * kp * sin_phi + k * k * k * cos_phi)
                / (2.0 * mu * ksq_mu.sqrt()),
        );
        let v3 = (
            (2.0 * kp * sin_phi - k * k * cos_phi) / (2.0 * (abs_mu * ksq_mu).sqrt()),
            k * (k * k * sin_phi + 2.0 * kp * cos_phi) / (2.0 * mu * ksq_mu.sqrt()),
        );
        let (ch, sh) = (f.theta.cosh(), f.theta.sinh());
        let rot = |v: (f64, f64)| (v.0 * ch + v.1 * sh, v.0 * sh + v.1 * ch);
        let xi1 = rot(v1);
        let xi3 = rot(v3);
        let a1 = xi1.0 / point.x2;
        let a2 = xi1.1 / point.x2;
        if a3 == 0.0 {
            return Err(Error::numerical(
                "fit landed exactly on the degenerate a3 = 0 branch".to_string(),
            ));
        }
        // primary (b1, b2) from the coefficient constraint; the independent
        // route through ξ³ must agree, else the branch data is inconsistent
        let sq = (-mu).sqrt();
        let b1 = b3 / a3 * a1 - a2 / (sq * a3);
        let b2 = b3 / a3 * a2 - a1 / (sq * a3);
        let b1_alt = point.x1 * a1 + xi3.0;
        let b2_alt = point.x1 * a2 + xi3.1;
        let bscale = 1.0 + b1.abs() + b2.abs();
        if (b1 - b1_alt).abs() > 1e-6 * bscale || (b2 - b2_alt).abs() > 1e-6 * bscale {
            return Err(Error::numerical(
                "inconsistent wavelike fit (constraint vs. direct b-coefficients)".to_string(),
            ));
        }
        let coeffs = CurveCoefficients {
            a1,
            a2,
            a3,
            b1,
            b2,
            b3,
            kind: CoefficientKind::WavelikeA3Nonzero,
        };
        coeffs.validate_wavelike(mu)?;
        Ok(WavelikeCurve { system, coeffs })
    }

    pub fn kappa(&self, s: f64) -> f64 {
        self.system.kappa(s)
    }

    pub fn distance_z(&self, s: f64, p: HyperbolicPoint) -> Result<f64> {
        if p.x2 == 0.0 {
            return Err(Error::domain("reference point must have x2 != 0".to_string()));
        }
        let st = self.evaluate(s);
        Ok(z_value(st.gamma1, st.gamma2, p))
    }

    /// Coefficients (A, B, C) with Z(s) = −1 + A Ŵ₁ + B Ŵ₂ + C κ, computed at
    /// s₀ (needs κ(s₀) away from zero; the result does not depend on s₀).
    pub fn z_expansion(&self, p: HyperbolicPoint, s0: f64) -> Result<(f64, f64, f64)> {
        if p.x2 == 0.0 {
            return Err(Error::domain("reference point must have x2 != 0".to_string()));
        }
        let f = self.system.frame(s0);
        if (f.kappa / self.system.kappa_max()).abs() < 1e-3 {
            return Err(Error::numerical(
                "distance expansion is ill-conditioned near a curvature zero; move s0".to_string(),
            ));
        }
        let st = self.state_from_frame(&f);
        let mu = self.system.mu;
        let c = z_constant(&st, p, mu);
        let z0 = z_value(st.gamma1, st.gamma2, p);
        let z0p = z_prime_value(&st, p);
        let rhs1 = z0 + 1.0 - c * f.kappa;
        let rhs2 = z0p - c * f.kappa_prime;
        let det = f.w_hat1 * f.w_hat2_prime - f.w_hat2 * f.w_hat1_prime;
        let a = (f.w_hat2_prime * rhs1 - f.w_hat2 * rhs2) / det;
        let b = (-f.w_hat1_prime * rhs1 + f.w_hat1 * rhs2) / det;
        Ok((a, b, c))
    }

    /// Geometric bounds on the trace.
    pub fn enclosure(&self) -> WavelikeEnclosure {
        let mu = self.system.mu;
        let root = (1.0 - mu).sqrt();
        let abs_mu = -mu;
        if self.coeffs.a3 != 0.0 {
            let a3 = self.coeffs.a3;
            let x = self.coeffs.b3 / a3;
            let y = (2.0 + 2.0 * root).sqrt() / (abs_mu * a3.abs());
            let r = (2.0 - mu + 2.0 * root).sqrt() / (abs_mu * a3.abs());
            let off = 1.0 / (abs_mu.sqrt() * a3);
            WavelikeEnclosure::Band {
                upper_center: HyperbolicPoint::new(x, y),
                lower_center_x2: -y,
                radius: r,
                boundary_limits: [x - off, x + off],
            }
        } else {
            WavelikeEnclosure::Cone {
                apex_x1: self.coeffs.b1 / self.coeffs.a1,
                slope: (2.0 + 2.0 * root).sqrt() / abs_mu.sqrt(),
            }
        }
    }
}

/// Trace bounds for wavelike curves. `Band`: the trace stays inside the ball
/// around `upper_center` and outside the reflected ball below the axis, and
/// accumulates at the two boundary points. `Cone`: |x₁ − apex| ≤ slope · x₂.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum WavelikeEnclosure {
    Band {
        upper_center: HyperbolicPoint,
        lower_center_x2: f64,
        radius: f64,
        boundary_limits: [f64; 2],
    },
    Cone {
        apex_x1: f64,
        slope: f64,
    },
}

/// The non-generic solution curves: constant curvature √2, the two geodesic
/// shapes, and the zero-energy catenoid generator.
#[derive(Debug, Clone, Copy)]
pub enum SpecialCurve {
    /// κ ≡ √2; generator of the minimal torus profile
    Circular,
    /// vertical line (0, e^{±s})
    GeodesicVertical { upward: bool },
    /// unit half-circle (tanh s, sech s)
    GeodesicHalfcircle,
    /// κ(s) = 2 sech(s + a); generator of the catenoid-type surface
    Catenoid { a: f64 },
}

impl SpecialCurve {
    pub fn evaluate(&self, s: f64) -> CurveState {
        match *self {
            SpecialCurve::Circular => {
                let r = std::f64::consts::SQRT_2;
                let den = r + s.cos();
                CurveState {
                    gamma1: (1.0 + r) * s.sin() / den,
                    gamma2: (1.0 + r) / den,
                    phi: s.sin().atan2(1.0 + r * s.cos()),
                    kappa: r,
                    kappa_prime: 0.0,
                }
            }
            SpecialCurve::GeodesicVertical { upward } => {
                let sign = if upward { 1.0 } else { -1.0 };
                CurveState {
                    gamma1: 0.0,
                    gamma2: (sign * s).exp(),
                    phi: sign * std::f64::consts::FRAC_PI_2,
                    kappa: 0.0,
                    kappa_prime: 0.0,
                }
            }
            SpecialCurve::GeodesicHalfcircle => CurveState {
                gamma1: s.tanh(),
                gamma2: 1.0 / s.cosh(),
                phi: (-s.tanh()).atan2(1.0 / s.cosh()),
                kappa: 0.0,
                kappa_prime: 0.0,
            },
            SpecialCurve::Catenoid { a } => {
                let t = s + a;
                let sech = 1.0 / t.cosh();
                CurveState {
                    gamma1: s,
                    gamma2: t.cosh(),
                    phi: t.tanh().atan2(sech),
                    kappa: 2.0 * sech,
                    kappa_prime: -2.0 * sech * t.tanh(),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_symmetry_and_zero() {
        let p = HyperbolicPoint::new(0.3, 1.2);
        let q = HyperbolicPoint::new(-1.0, 0.4);
        let d1 = hyperbolic_distance(p, q).unwrap();
        let d2 = hyperbolic_distance(q, p).unwrap();
        assert!((d1 - d2).abs() < 1e-15);
        assert_eq!(hyperbolic_distance(p, p).unwrap(), 0.0);
        assert!(hyperbolic_distance(p, HyperbolicPoint::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn vertical_distance_is_log_ratio() {
        let p = HyperbolicPoint::new(0.0, 1.0);
        let q = HyperbolicPoint::new(0.0, std::f64::consts::E);
        let d = hyperbolic_distance(p, q).unwrap();
        assert!((d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mobius_maps_are_isometries() {
        let p = HyperbolicPoint::new(0.4, 0.9);
        let q = HyperbolicPoint::new(-0.7, 2.1);
        let d = hyperbolic_distance(p, q).unwrap();
        let maps = [
            MobiusMap::Translate(1.3),
            MobiusMap::Scale(0.7),
            MobiusMap::Rotate(0.9),
            MobiusMap::ReflectVertical,
            MobiusMap::Invert,
        ];
        for m in maps {
            let dp = hyperbolic_distance(m.apply(p).unwrap(), m.apply(q).unwrap()).unwrap();
            assert!((dp - d).abs() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn special_curves_satisfy_frame_equations() {
        // finite-difference check of γ' = γ₂ e^{iφ} and φ' + cos φ = κ
        let h = 1e-5;
        let curves = [
            SpecialCurve::Circular,
            SpecialCurve::GeodesicVertical { upward: true },
            SpecialCurve::GeodesicVertical { upward: false },
            SpecialCurve::GeodesicHalfcircle,
            SpecialCurve::Catenoid { a: 0.4 },
        ];
        for c in curves {
            for i in 0..20 {
                let s = -1.5 + 0.15 * i as f64;
                let st = c.evaluate(s);
                let plus = c.evaluate(s + h);
                let minus = c.evaluate(s - h);
                let d1 = (plus.gamma1 - minus.gamma1) / (2.0 * h);
                let d2 = (plus.gamma2 - minus.gamma2) / (2.0 * h);
                assert!((d1 - st.gamma2 * st.phi.cos()).abs() < 1e-7, "{c:?} s={s}");
                assert!((d2 - st.gamma2 * st.phi.sin()).abs() < 1e-7, "{c:?} s={s}");
                let wrap = |a: f64| a.sin().atan2(a.cos());
                let dphi = wrap(plus.phi - minus.phi) / (2.0 * h);
                assert!(
                    (dphi + st.phi.cos() - st.kappa).abs() < 1e-6,
                    "{c:?} s={s}: {dphi}"
                );
            }
        }
    }

    #[test]
    fn coefficient_constructors_validate() {
        let mu = 0.4;
        let c = CurveCoefficients::orbitlike(0.3, -0.2, 1.1, mu).unwrap();
        c.validate_orbitlike(mu).unwrap();
        assert!(c.validate_orbitlike(0.5).is_err());

        let muw = -0.8;
        let w = CurveCoefficients::wavelike(0.5, -0.9, 0.2, muw).unwrap();
        w.validate_wavelike(muw).unwrap();
        let cone = CurveCoefficients::wavelike_cone(-1.2, 0.7, true, muw).unwrap();
        cone.validate_wavelike(muw).unwrap();
        assert!(CurveCoefficients::orbitlike(0.0, 0.0, 1.0, mu).is_err());
    }
}
