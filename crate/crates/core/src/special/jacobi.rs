//! Jacobi elliptic functions sn, cn, dn and their principal-branch inverses.
//!
//! Evaluation runs the descending AGM / ascending amplitude scheme after
//! folding the argument into [0, K] by quarter-period symmetries. The AGM
//! ladder depends only on the modulus, so [`JacobiAgm`] caches it for the
//! many-evaluations-per-modulus pattern used upstream.

use crate::error::{Error, Result};
use crate::special::elliptic::{carlson_rf, complementary};

/// AGM ladder for a fixed modulus.
#[derive(Debug, Clone)]
pub struct JacobiAgm {
    pub k: f64,
    pub k_prime: f64,
    pub big_k: f64,
    // levels 1..=n of (a_i, c_i); level 0 is (1, k)
    levels: Vec<(f64, f64)>,
    a_final: f64,
}

impl JacobiAgm {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::domain(format!("modulus k = {k} outside [0, 1)")));
        }
        let k_prime = complementary(k);
        let mut a = 1.0_f64;
        let mut b = k_prime;
        let mut c = k;
        let mut levels = Vec::with_capacity(12);
        for _ in 0..64 {
            if c.abs() <= f64::EPSILON * a {
                break;
            }
            let an = 0.5 * (a + b);
            let bn = (a * b).sqrt();
            c = 0.5 * (a - b);
            a = an;
            b = bn;
            levels.push((a, c));
        }
        let big_k = std::f64::consts::PI / (2.0 * a);
        Ok(JacobiAgm {
            k,
            k_prime,
            big_k,
            levels,
            a_final: a,
        })
    }

    /// (sn u, cn u, dn u). dn is assembled as √(cn² + k′² sn²), which keeps
    /// dn² + k² sn² = 1 to roundoff and stays accurate near u = K.
    pub fn eval(&self, u: f64) -> (f64, f64, f64) {
        let four_k = 4.0 * self.big_k;
        let mut ur = u.rem_euclid(four_k);
        let mut sign_s = 1.0;
        let mut sign_c = 1.0;
        if ur > 2.0 * self.big_k {
            ur -= 2.0 * self.big_k;
            sign_s = -1.0;
            sign_c = -1.0;
        }
        if ur > self.big_k {
            ur = 2.0 * self.big_k - ur;
            sign_c = -sign_c;
        }
        let n = self.levels.len();
        let mut phi = self.a_final * ur * (n as f64).exp2();
        for i in (0..n).rev() {
            let (a_i, c_i) = self.levels[i];
            let t = (c_i / a_i * phi.sin()).clamp(-1.0, 1.0);
            phi = 0.5 * (phi + t.asin());
        }
        let sn = phi.sin();
        let cn = phi.cos();
        let dn = (cn * cn + self.k_prime * self.k_prime * sn * sn).sqrt();
        (sign_s * sn, sign_c * cn, dn)
    }
}

/// One-shot (sn, cn, dn); builds the AGM ladder each call.
pub fn jacobi_sn_cn_dn(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    Ok(JacobiAgm::new(k)?.eval(u))
}

/// u with sn(u, k) = z, principal branch u ∈ [−K, K], z ∈ [−1, 1].
pub fn inverse_sn(z: f64, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain(format!("modulus k = {k} outside [0, 1)")));
    }
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::domain(format!("sn value {z} outside [-1, 1]")));
    }
    let az = z.abs();
    let c2 = (1.0 - az) * (1.0 + az);
    let d2 = (1.0 - k * az) * (1.0 + k * az);
    Ok(z.signum() * az * carlson_rf(c2, d2, 1.0))
}

/// u with cn(u, k) = z, principal branch u ∈ [0, K], z ∈ [0, 1].
pub fn inverse_cn(z: f64, k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain(format!("cn value {z} outside [0, 1]")));
    }
    let l = ((1.0 - z) * (1.0 + z)).sqrt();
    inverse_sn(l, k)
}

/// u with dn(u, k) = z, principal branch u ∈ [0, K], z ∈ [k′, 1].
///
/// Values within ~1e-9 outside [k′, 1] are clamped; anything further out is a
/// domain error.
pub fn inverse_dn(z: f64, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain(format!("modulus k = {k} outside [0, 1)")));
    }
    let kp = complementary(k);
    if z > 1.0 + 1e-9 || z < kp - 1e-9 {
        return Err(Error::domain(format!(
            "dn value {z} outside [{kp}, 1] for k = {k}"
        )));
    }
    let zc = z.clamp(kp, 1.0);
    if k == 0.0 {
        return Ok(0.0);
    }
    let l = (((1.0 - zc) * (1.0 + zc)).sqrt() / k).min(1.0);
    inverse_sn(l, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_limit() {
        let agm = JacobiAgm::new(0.0).unwrap();
        for i in 0..40 {
            let u = -6.0 + 0.31 * i as f64;
            let (sn, cn, dn) = agm.eval(u);
            assert!((sn - u.sin()).abs() < 1e-14);
            assert!((cn - u.cos()).abs() < 1e-14);
            assert!((dn - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn quarter_period_values() {
        for &k in &[0.2, 0.7, 0.95, 0.9998] {
            let agm = JacobiAgm::new(k).unwrap();
            let kp = agm.k_prime;
            let big_k = agm.big_k;
            let (sn, cn, dn) = agm.eval(big_k);
            assert!((sn - 1.0).abs() < 1e-13, "k={k} sn(K)={sn}");
            assert!(cn.abs() < 1e-13, "k={k} cn(K)={cn}");
            assert!((dn - kp).abs() < 1e-13 * (1.0 + kp), "k={k} dn(K)={dn}");
            // Half-argument anchors: sn(K/2) = 1/√(1+k′), cn(K/2) = √(k′/(1+k′)),
            // dn(K/2) = √k′.
            let (sh, ch, dh) = agm.eval(0.5 * big_k);
            assert!((sh - (1.0 + kp).sqrt().recip()).abs() < 1e-13);
            assert!((ch - (kp / (1.0 + kp)).sqrt()).abs() < 1e-13);
            assert!((dh - kp.sqrt()).abs() < 1e-13);
        }
    }

    #[test]
    fn squared_sum_rules() {
        for &k in &[0.1, 0.5, 0.9, 0.999] {
            let agm = JacobiAgm::new(k).unwrap();
            for i in 0..60 {
                let u = -14.0 + 0.47 * i as f64;
                let (sn, cn, dn) = agm.eval(u);
                assert!((sn * sn + cn * cn - 1.0).abs() < 1e-13);
                assert!((dn * dn + k * k * sn * sn - 1.0).abs() < 1e-13);
                assert!(dn >= agm.k_prime - 1e-13 && dn <= 1.0 + 1e-13);
            }
        }
    }

    #[test]
    fn shifted_argument_identities() {
        // cn(u−K) = k′ sn/dn, sn(u−K) = −cn/dn, dn(u−K) = k′/dn.
        for &k in &[0.3, 0.8, 0.99] {
            let agm = JacobiAgm::new(k).unwrap();
            let kp = agm.k_prime;
            for i in 0..50 {
                let u = -7.0 + 0.29 * i as f64;
                let (sn, cn, dn) = agm.eval(u);
                let (ss, cs, ds) = agm.eval(u - agm.big_k);
                assert!((cs - kp * sn / dn).abs() < 1e-12);
                assert!((ss + cn / dn).abs() < 1e-12);
                assert!((ds - kp / dn).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_round_trips() {
        for &k in &[0.1, 0.6, 0.97] {
            let agm = JacobiAgm::new(k).unwrap();
            for i in 0..=20 {
                let z = -1.0 + 0.1 * i as f64;
                let u = inverse_sn(z, k).unwrap();
                assert!((agm.eval(u).0 - z).abs() < 1e-11);
                if z >= 0.0 {
                    let u = inverse_cn(z, k).unwrap();
                    assert!((agm.eval(u).1 - z).abs() < 1e-11);
                    let zd = agm.k_prime + z * (1.0 - agm.k_prime);
                    let u = inverse_dn(zd, k).unwrap();
                    assert!((agm.eval(u).2 - zd).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn inverse_domain_checks() {
        assert!(inverse_sn(1.5, 0.5).is_err());
        assert!(inverse_dn(0.3, 0.5).is_err());
        assert!(inverse_dn(1.0 + 2e-9, 0.5).is_err());
        // within clamp slack
        assert!(inverse_dn(1.0 + 5e-10, 0.5).is_ok());
    }
}
