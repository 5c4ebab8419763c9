//! Dirichlet boundary-value problem for positively oriented orbitlike
//! elasticae: assembly of the two-equation reduction in (s*, k) per branch
//! integer l, a multi-start damped-Newton search, and symmetry
//! classification. Negatively oriented solutions are reached through the
//! reflection (γ1, γ2) → (−γ1, γ2), φ → π − φ.

use crate::closed::solve_k_mn;
use crate::elastica::{CurveCoefficients, OrbitlikeCurve};
use crate::error::{Error, Result};
use crate::fundamental::OrbitlikeSystem;
use crate::special::elliptic::complete_k;
use crate::special::jacobi::inverse_dn;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

fn wrap_angle(a: f64) -> f64 {
    a.sin().atan2(a.cos())
}

/// Boundary data: start point (a1, a2) with tangent angle phi_a at s = 0,
/// end point (b1, b2) with tangent angle phi_b at s = L. Angles compare
/// mod 2π.
#[derive(Debug, Clone, Copy)]
pub struct DirichletProblem {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub phi_a: f64,
    pub phi_b: f64,
}

impl DirichletProblem {
    pub fn new(a1: f64, a2: f64, b1: f64, b2: f64, phi_a: f64, phi_b: f64) -> Result<Self> {
        if !(a2 > 0.0 && b2 > 0.0) {
            return Err(Error::domain(format!(
                "boundary points must lie in the upper half-plane: a2 = {a2}, b2 = {b2}"
            )));
        }
        Ok(DirichletProblem {
            a1,
            a2,
            b1,
            b2,
            phi_a,
            phi_b,
        })
    }

    /// Reflected problem across the vertical axis. Positively oriented
    /// solutions of the reflection are exactly the reflections of the
    /// negatively oriented solutions of the original.
    pub fn reflect(&self) -> Self {
        DirichletProblem {
            a1: -self.a1,
            a2: self.a2,
            b1: -self.b1,
            b2: self.b2,
            phi_a: PI - self.phi_a,
            phi_b: PI - self.phi_b,
        }
    }
}

/// The four σ shorthands of the endpoint reduction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SigmaQuad {
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
    pub sigma4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfeasibleReason {
    /// leading coefficient a3 ≤ 0: no positively oriented curve fits
    A3NonPositive,
    /// candidate end curvature outside [κ_min, κ_max]
    KappaOutOfRange,
    /// the branch integer produces L ≤ 0
    NonPositiveLength,
}

#[derive(Debug, Clone)]
pub struct Assembled {
    pub coeffs: CurveCoefficients,
    pub length: f64,
    /// difference of the two sides of the curvature endpoint equation
    pub residual_r1: f64,
    /// |q − 1| where q is the angle equation's unit ratio
    pub residual_r2: f64,
    /// principal argument of q, the second Newton component
    pub angle_residual: f64,
    pub sigma: SigmaQuad,
    pub sigma_sign: i8,
    /// sign argument below 1e−12 in magnitude (κ′(L) = 0): both branches valid
    pub sigma_degenerate: bool,
    pub a3: f64,
    pub b3: f64,
    /// candidate curvature at s = L
    pub kappa_end: f64,
}

#[derive(Debug, Clone)]
pub enum AssembleOutcome {
    Feasible(Assembled),
    Infeasible(InfeasibleReason),
}

/// l-independent part of the assembly.
struct Core {
    a3: f64,
    b3: f64,
    sigma: SigmaQuad,
    kappa_end: f64,
    /// inverse_dn argument of the end curvature, in [0, K]
    u: f64,
    sigma_sign: i8,
    sigma_degenerate: bool,
    theta0: f64,
    /// unit complex right side of the angle equation
    rhs: (f64, f64),
    r1: f64,
}

enum CoreOutcome {
    Feasible(Core),
    Infeasible(InfeasibleReason),
}

fn assemble_core(
    system: &OrbitlikeSystem,
    problem: &DirichletProblem,
    forced_sign: Option<i8>,
) -> Result<CoreOutcome> {
    let mu = system.mu;
    let c = system.scale;
    let kap0 = system.kappa(0.0);
    let kap0_p = system.kappa_prime(0.0);
    let (sa, ca) = problem.phi_a.sin_cos();

    let a3 = (2.0 * kap0 + 2.0 * kap0_p * sa - kap0 * kap0 * ca) / (2.0 * mu * problem.a2);
    if !(a3 > 0.0) {
        return Ok(CoreOutcome::Infeasible(InfeasibleReason::A3NonPositive));
    }
    let b3 = a3 * problem.a1 - (kap0 * kap0 * sa + 2.0 * kap0_p * ca) / (2.0 * mu);

    let ta = a3 * problem.a1 - b3;
    let wa = a3 * problem.a2;
    let tb = a3 * problem.b1 - b3;
    let wb = a3 * problem.b2;
    let sigma = SigmaQuad {
        sigma1: (1.0 - mu * (wa * wa + ta * ta)) / 2.0,
        sigma2: mu.sqrt() * ta,
        sigma3: (1.0 - mu * (wb * wb + tb * tb)) / 2.0,
        sigma4: mu.sqrt() * tb,
    };

    // candidate curvature at the far endpoint
    let x = (1.0 + mu * (wb * wb + tb * tb)) / (2.0 * wb);
    let y = 0.5 * c * x;
    let kp = system.modulus.k_prime;
    if y < kp - 1e-12 || y > 1.0 + 1e-12 {
        return Ok(CoreOutcome::Infeasible(InfeasibleReason::KappaOutOfRange));
    }
    let u = match inverse_dn(y.clamp(kp, 1.0), system.k) {
        Ok(u) => u,
        Err(_) => return Ok(CoreOutcome::Infeasible(InfeasibleReason::KappaOutOfRange)),
    };

    let (sb, cb) = problem.phi_b.sin_cos();
    let sign_arg = mu * tb * cb - (1.0 + mu * (-wb * wb + tb * tb)) / (2.0 * wb) * sb;
    let sigma_degenerate = sign_arg.abs() < 1e-12;
    let sigma_sign =
        forced_sign.unwrap_or_else(|| if sign_arg >= 0.0 { 1 } else { -1 });

    let r1 = x * x - (2.0 * mu * tb * sb + (1.0 + mu * (-wb * wb + tb * tb)) / wb * cb);

    let theta0 = system.theta_angle(0.0);
    let n1 = sigma.sigma1.hypot(sigma.sigma2);
    let n3 = sigma.sigma3.hypot(sigma.sigma4);
    if n1 <= 0.0 || n3 <= 0.0 {
        return Ok(CoreOutcome::Infeasible(InfeasibleReason::KappaOutOfRange));
    }
    let rhs = (
        (sigma.sigma1 * sigma.sigma3 + sigma.sigma2 * sigma.sigma4) / (n1 * n3),
        (sigma.sigma1 * sigma.sigma4 - sigma.sigma2 * sigma.sigma3) / (n1 * n3),
    );

    Ok(CoreOutcome::Feasible(Core {
        a3,
        b3,
        sigma,
        kappa_end: x,
        u,
        sigma_sign,
        sigma_degenerate,
        theta0,
        rhs,
        r1,
    }))
}

impl Core {
    fn length(&self, system: &OrbitlikeSystem, l: i64) -> f64 {
        let big_k = system.modulus.big_k;
        -system.s_star
            + system.scale * (2.0 * l as f64 * big_k - self.sigma_sign as f64 * self.u)
    }

    fn finish(&self, system: &OrbitlikeSystem, l: i64) -> Result<AssembleOutcome> {
        let length = self.length(system, l);
        if !(length > 0.0) {
            return Ok(AssembleOutcome::Infeasible(InfeasibleReason::NonPositiveLength));
        }
        let mu = system.mu;

        let delta_theta = system.theta_angle(length) - self.theta0;
        let (sd, cd) = delta_theta.sin_cos();
        // q = e^{iΔϑ} · conj(rhs)
        let q = (
            cd * self.rhs.0 + sd * self.rhs.1,
            sd * self.rhs.0 - cd * self.rhs.1,
        );
        let angle_residual = q.1.atan2(q.0);
        let residual_r2 = (q.0 - 1.0).hypot(q.1);

        let n1 = self.sigma.sigma1.hypot(self.sigma.sigma2);
        let (s0, c0) = self.theta0.sin_cos();
        let a2 = self.a3 * (self.sigma.sigma1 * c0 + self.sigma.sigma2 * s0) / n1;
        let a1 = self.a3 * (self.sigma.sigma2 * c0 - self.sigma.sigma1 * s0) / n1;
        let coeffs = CurveCoefficients::orbitlike(a1, a2, self.b3, mu)?;

        Ok(AssembleOutcome::Feasible(Assembled {
            coeffs,
            length,
            residual_r1: self.r1,
            residual_r2,
            angle_residual,
            sigma: self.sigma,
            sigma_sign: self.sigma_sign,
            sigma_degenerate: self.sigma_degenerate,
            a3: self.a3,
            b3: self.b3,
            kappa_end: self.kappa_end,
        }))
    }
}

/// Assemble the curve determined by (s*, k, l) from the start-point data and
/// evaluate both endpoint residuals. The branch sign is taken from the sign
/// expression; use [`assemble_with_sign`] to force it at degenerate points.
pub fn assemble(
    problem: &DirichletProblem,
    s_star: f64,
    k: f64,
    l: i64,
) -> Result<AssembleOutcome> {
    assemble_inner(problem, s_star, k, l, None)
}

/// As [`assemble`] with the Gl-III sign forced to ±1.
pub fn assemble_with_sign(
    problem: &DirichletProblem,
    s_star: f64,
    k: f64,
    l: i64,
    sign: i8,
) -> Result<AssembleOutcome> {
    assemble_inner(problem, s_star, k, l, Some(sign))
}

fn assemble_inner(
    problem: &DirichletProblem,
    s_star: f64,
    k: f64,
    l: i64,
    forced_sign: Option<i8>,
) -> Result<AssembleOutcome> {
    let system = OrbitlikeSystem::new(k, s_star)?;
    match assemble_core(&system, problem, forced_sign)? {
        CoreOutcome::Infeasible(r) => Ok(AssembleOutcome::Infeasible(r)),
        CoreOutcome::Feasible(core) => core.finish(&system, l),
    }
}

/// A converged root of the two-equation reduction.
#[derive(Debug, Clone, Serialize)]
pub struct DirichletSolution {
    pub k: f64,
    /// phase, normalized into [0, 2√(2−k²)K)
    pub s_star: f64,
    pub branch_l: i64,
    pub length: f64,
    pub coeffs: CurveCoefficients,
    pub residual_r1: f64,
    pub residual_r2: f64,
    pub symmetric: bool,
}

impl DirichletSolution {
    pub fn curve(&self) -> Result<OrbitlikeCurve> {
        let system = OrbitlikeSystem::new(self.k, self.s_star)?;
        OrbitlikeCurve::new(system, self.coeffs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveFamily {
    Orbitlike,
    /// no closed-form reduction exists; requesting it is an explicit error
    Wavelike,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub k_count: usize,
    pub s_star_count: usize,
    pub l_max: i64,
    pub tol: f64,
    pub family: SolveFamily,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            k_min: 0.02,
            k_max: 0.998,
            k_count: 40,
            s_star_count: 16,
            l_max: 40,
            tol: 1e-10,
            family: SolveFamily::Orbitlike,
        }
    }
}

/// Multi-start search for all roots of the reduction over the grid
/// s* ∈ [0, 2√(2−k²)K) × k ∈ [k_min, k_max] × l ∈ [−l_max, l_max].
/// Converged roots are deduplicated by (k, s* mod period, l) within 1e−6 and
/// every returned solution reproduces the boundary data within 1e−8.
/// An empty list is a valid outcome; per-root failures are dropped.
pub fn solve(problem: &DirichletProblem, config: &SolveConfig) -> Result<Vec<DirichletSolution>> {
    if config.family == SolveFamily::Wavelike {
        return Err(Error::UnsupportedFamily(
            "the Dirichlet reduction is only available for orbitlike curves".to_string(),
        ));
    }
    if !(problem.a2 > 0.0 && problem.b2 > 0.0) {
        return Err(Error::domain(
            "boundary points must lie in the upper half-plane".to_string(),
        ));
    }
    if config.k_count == 0 || config.s_star_count == 0 {
        return Err(Error::domain("grid counts must be positive".to_string()));
    }

    let mut k_values = Vec::with_capacity(config.k_count);
    for i in 0..config.k_count {
        let t = if config.k_count == 1 {
            0.0
        } else {
            i as f64 / (config.k_count - 1) as f64
        };
        k_values.push(config.k_min + (config.k_max - config.k_min) * t);
    }

    // Seed list: one entry per (k, s*, l, forced sign); the l range is cut to
    // lengths in (0, ∞) using the l-independent core.
    let seeds: Vec<(f64, f64, i64, Option<i8>)> = k_values
        .par_iter()
        .map(|&k| {
            let mut local = Vec::new();
            let Ok(big_k) = complete_k(k) else {
                return local;
            };
            let c = (2.0 - k * k).sqrt();
            let period = 2.0 * c * big_k;
            for j in 0..config.s_star_count {
                let s_star = period * j as f64 / config.s_star_count as f64;
                let Ok(system) = OrbitlikeSystem::new(k, s_star) else {
                    continue;
                };
                let Ok(CoreOutcome::Feasible(core)) = assemble_core(&system, problem, None)
                else {
                    continue;
                };
                // L(l) > 0 ⟺ l > (s* + c·σ·u)/(2cK)
                let l_low = ((s_star + c * core.sigma_sign as f64 * core.u) / period).floor()
                    as i64
                    + 1;
                for l in l_low.max(-config.l_max)..=config.l_max {
                    local.push((k, s_star, l, None));
                    if core.sigma_degenerate {
                        local.push((k, s_star, l, Some(-core.sigma_sign)));
                    }
                }
            }
            local
        })
        .flatten()
        .collect();

    let mut found: Vec<DirichletSolution> = seeds
        .into_par_iter()
        .filter_map(|(k, s_star, l, forced)| newton_run(problem, k, s_star, l, forced, config))
        .collect();

    found.sort_by(|a, b| {
        (a.k, a.s_star, a.branch_l, a.length)
            .partial_cmp(&(b.k, b.s_star, b.branch_l, b.length))
            .unwrap()
    });
    let mut kept: Vec<DirichletSolution> = Vec::new();
    for sol in found {
        let period = 2.0 * (2.0 - sol.k * sol.k).sqrt() * complete_k(sol.k)?;
        let dup = kept.iter().any(|other| {
            let ds = (sol.s_star - other.s_star).abs();
            (sol.k - other.k).abs() <= 1e-6
                && ds.min((period - ds).abs()) <= 1e-6
                && sol.branch_l == other.branch_l
        });
        if !dup {
            kept.push(sol);
        }
    }
    Ok(kept)
}

struct EvalPoint {
    assembled: Assembled,
    system: OrbitlikeSystem,
}

fn eval_residuals(
    problem: &DirichletProblem,
    s_star: f64,
    k: f64,
    l: i64,
    sign: i8,
    k_hint: Option<&OrbitlikeSystem>,
) -> Option<EvalPoint> {
    if !(0.005..=0.9995).contains(&k) {
        return None;
    }
    let system = match k_hint {
        Some(sys) if sys.k == k => {
            let mut s = sys.clone();
            s.s_star = s_star;
            s
        }
        _ => OrbitlikeSystem::new(k, s_star).ok()?,
    };
    let core = match assemble_core(&system, problem, Some(sign)).ok()? {
        CoreOutcome::Feasible(c) => c,
        CoreOutcome::Infeasible(_) => return None,
    };
    match core.finish(&system, l).ok()? {
        AssembleOutcome::Feasible(assembled) => Some(EvalPoint { assembled, system }),
        AssembleOutcome::Infeasible(_) => None,
    }
}

fn newton_run(
    problem: &DirichletProblem,
    k0: f64,
    s0: f64,
    l: i64,
    forced: Option<i8>,
    config: &SolveConfig,
) -> Option<DirichletSolution> {
    // Fix the branch sign at the seed so the residuals stay smooth across the
    // sign expression's zero set; the other branch has its own seed there.
    let sign = match forced {
        Some(s) => s,
        None => {
            let system = OrbitlikeSystem::new(k0, s0).ok()?;
            match assemble_core(&system, problem, None).ok()? {
                CoreOutcome::Feasible(core) => core.sigma_sign,
                CoreOutcome::Infeasible(_) => return None,
            }
        }
    };

    let mut x = (s0, k0);
    let mut point = eval_residuals(problem, x.0, x.1, l, sign, None)?;
    let mut f = (point.assembled.residual_r1, point.assembled.angle_residual);
    let mut fnorm = f.0.hypot(f.1);
    let mut lambda = 1e-3;

    for iter in 0..30 {
        if point.assembled.residual_r1.abs() <= config.tol
            && point.assembled.residual_r2 <= config.tol
        {
            return accept_root(problem, x.0, x.1, l, sign, config);
        }
        if iter >= 12 && fnorm > 1e-3 {
            return None;
        }

        let hs = 1e-7 * (1.0 + x.0.abs());
        let hk = 1e-7 * (1.0 + x.1.abs());
        let ps = eval_residuals(problem, x.0 + hs, x.1, l, sign, Some(&point.system))?;
        let pk = eval_residuals(problem, x.0, x.1 + hk, l, sign, None)?;
        let j = [
            [
                (ps.assembled.residual_r1 - f.0) / hs,
                (pk.assembled.residual_r1 - f.0) / hk,
            ],
            [
                wrap_angle(ps.assembled.angle_residual - f.1) / hs,
                wrap_angle(pk.assembled.angle_residual - f.1) / hk,
            ],
        ];

        let jtj = [
            [
                j[0][0] * j[0][0] + j[1][0] * j[1][0],
                j[0][0] * j[0][1] + j[1][0] * j[1][1],
            ],
            [
                j[0][0] * j[0][1] + j[1][0] * j[1][1],
                j[0][1] * j[0][1] + j[1][1] * j[1][1],
            ],
        ];
        let g = (
            j[0][0] * f.0 + j[1][0] * f.1,
            j[0][1] * f.0 + j[1][1] * f.1,
        );

        let mut improved = false;
        for _ in 0..10 {
            let a11 = jtj[0][0] + lambda * (jtj[0][0].abs() + 1e-12);
            let a22 = jtj[1][1] + lambda * (jtj[1][1].abs() + 1e-12);
            let a12 = jtj[0][1];
            let det = a11 * a22 - a12 * a12;
            if det == 0.0 {
                lambda *= 10.0;
                continue;
            }
            let dx = (-(a22 * g.0 - a12 * g.1) / det, -(a11 * g.1 - a12 * g.0) / det);
            let trial = (x.0 + dx.0, x.1 + dx.1);
            if let Some(tp) = eval_residuals(problem, trial.0, trial.1, l, sign, None) {
                let tf = (tp.assembled.residual_r1, tp.assembled.angle_residual);
                let tnorm = tf.0.hypot(tf.1);
                if tnorm < fnorm {
                    x = trial;
                    point = tp;
                    f = tf;
                    fnorm = tnorm;
                    lambda = (lambda / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > 1e8 {
                return None;
            }
        }
        if !improved {
            return None;
        }
    }
    if point.assembled.residual_r1.abs() <= config.tol && point.assembled.residual_r2 <= config.tol
    {
        return accept_root(problem, x.0, x.1, l, sign, config);
    }
    None
}

/// Normalize the phase into [0, period), shift l accordingly, re-assemble and
/// run the endpoint-reproduction checks.
fn accept_root(
    problem: &DirichletProblem,
    s_star: f64,
    k: f64,
    l: i64,
    sign: i8,
    config: &SolveConfig,
) -> Option<DirichletSolution> {
    let big_k = complete_k(k).ok()?;
    let period = 2.0 * (2.0 - k * k).sqrt() * big_k;
    let t = (s_star / period).floor();
    let s_norm = s_star - t * period;
    let l_norm = l - t as i64;

    let assembled = match assemble_inner(problem, s_norm, k, l_norm, Some(sign)).ok()? {
        AssembleOutcome::Feasible(a) => a,
        AssembleOutcome::Infeasible(_) => return None,
    };
    if assembled.residual_r1.abs() > config.tol || assembled.residual_r2 > config.tol {
        return None;
    }
    if !(assembled.length > 0.0) {
        return None;
    }

    let system = OrbitlikeSystem::new(k, s_norm).ok()?;
    let curve = OrbitlikeCurve::new(system, assembled.coeffs).ok()?;
    let scale = 1.0
        + problem.a1.abs().max(problem.a2).max(problem.b1.abs()).max(problem.b2);
    let st0 = curve.evaluate(0.0);
    let st1 = curve.evaluate(assembled.length);
    let endpoint_err = (st0.gamma1 - problem.a1)
        .abs()
        .max((st0.gamma2 - problem.a2).abs())
        .max((st1.gamma1 - problem.b1).abs())
        .max((st1.gamma2 - problem.b2).abs());
    let angle_err = angle_factor_gap(st0.phi, problem.phi_a)
        .max(angle_factor_gap(st1.phi, problem.phi_b));
    if endpoint_err > 1e-8 * scale || angle_err > 1e-8 {
        return None;
    }

    let symmetric = curve_is_symmetric(&curve, assembled.length);
    Some(DirichletSolution {
        k,
        s_star: s_norm,
        branch_l: l_norm,
        length: assembled.length,
        coeffs: assembled.coeffs,
        residual_r1: assembled.residual_r1,
        residual_r2: assembled.residual_r2,
        symmetric,
    })
}

/// |e^{iφ} − e^{iψ}|
fn angle_factor_gap(phi: f64, psi: f64) -> f64 {
    (phi.cos() - psi.cos()).hypot(phi.sin() - psi.sin())
}

fn curve_is_symmetric(curve: &OrbitlikeCurve, length: f64) -> bool {
    let mid = 0.5 * length;
    let mut worst: f64 = 0.0;
    for i in 1..=64 {
        let s = mid * i as f64 / 64.0;
        let fwd = curve.evaluate(mid + s);
        let bwd = curve.evaluate(mid - s);
        worst = worst
            .max((fwd.gamma1 + bwd.gamma1).abs())
            .max((fwd.gamma2 - bwd.gamma2).abs());
    }
    worst <= 1e-7
}

/// Reflection symmetry of a solved curve about the vertical line x = 0,
/// sampled at 64 points: γ1(L/2+s) = −γ1(L/2−s) and γ2(L/2+s) = γ2(L/2−s)
/// within 1e−7.
pub fn classify_symmetry(solution: &DirichletSolution) -> Result<bool> {
    let curve = solution.curve()?;
    Ok(curve_is_symmetric(&curve, solution.length))
}

/// Which orientations the symmetry theorem covers for this data.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymmetryHypothesis {
    /// A1 = −B1 ≠ 0 and A2 = B2 > 0
    pub endpoint_condition: bool,
    /// φA + φB ∈ 2πℤ
    pub angle_condition: bool,
    pub positive_covered: bool,
    pub negative_covered: bool,
}

pub fn symmetry_hypothesis_check(problem: &DirichletProblem) -> SymmetryHypothesis {
    let scale = 1.0 + problem.a1.abs() + problem.a2.abs();
    let endpoint_condition = (problem.a1 + problem.b1).abs() <= 1e-12 * scale
        && problem.a1 != 0.0
        && (problem.a2 - problem.b2).abs() <= 1e-12 * scale
        && problem.a2 > 0.0;
    let angle_condition = wrap_angle(problem.phi_a + problem.phi_b).abs() <= 1e-9;
    let base = endpoint_condition && angle_condition;
    let expr = if problem.a1 != 0.0 {
        problem.a2 / problem.a1 * problem.phi_a.sin() + problem.phi_a.cos()
    } else {
        f64::NAN
    };
    SymmetryHypothesis {
        endpoint_condition,
        angle_condition,
        positive_covered: base && !(expr > 0.0 && expr < 2.0),
        negative_covered: base && !(-expr > 0.0 && -expr < 2.0),
    }
}

/// The closed-curve solution for data A = B = (0, a2), φA = φB = 0 at the
/// family modulus k_{m,n}, with free phase s*. Nonsymmetric whenever s* is
/// off the lattice √(2−k²)K·ℤ.
pub fn symmetry_breaking_family(
    m: u32,
    n: u32,
    s_star: f64,
    a2: f64,
) -> Result<DirichletSolution> {
    if !(a2 > 0.0) {
        return Err(Error::domain("a2 must be positive".to_string()));
    }
    let k = solve_k_mn(m, n)?;
    let problem = DirichletProblem::new(0.0, a2, 0.0, a2, 0.0, 0.0)?;
    let big_k = complete_k(k)?;
    let period = 2.0 * (2.0 - k * k).sqrt() * big_k;
    let t = (s_star / period).floor();
    let s_norm = s_star - t * period;
    let l = n as i64 - t as i64;

    let tol = 1e-10;
    let mut accepted: Option<Assembled> = None;
    for sign in [None, Some(1i8), Some(-1i8)] {
        let outcome = assemble_inner(&problem, s_norm, k, l, sign)?;
        if let AssembleOutcome::Feasible(a) = outcome {
            if a.residual_r1.abs() <= tol && a.residual_r2 <= tol && a.length > 0.0 {
                accepted = Some(a);
                break;
            }
            if sign.is_none() && !a.sigma_degenerate {
                break;
            }
        }
    }
    let assembled = accepted.ok_or_else(|| {
        Error::numerical(format!(
            "closed-family assembly at (m, n) = ({m}, {n}), s* = {s_star} missed the residual tolerance"
        ))
    })?;

    let system = OrbitlikeSystem::new(k, s_norm)?;
    let curve = OrbitlikeCurve::new(system, assembled.coeffs)?;
    let symmetric = curve_is_symmetric(&curve, assembled.length);
    Ok(DirichletSolution {
        k,
        s_star: s_norm,
        branch_l: l,
        length: assembled.length,
        coeffs: assembled.coeffs,
        residual_r1: assembled.residual_r1,
        residual_r2: assembled.residual_r2,
        symmetric,
    })
}
