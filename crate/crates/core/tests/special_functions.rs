//! Elliptic-integral, Jacobi-function, and theta-series checks against
//! independent oracles: double-double AGM, tanh-sinh quadrature of the
//! defining integrals, RK integration of the first-order system, and
//! directly summed series at doubled depth.

mod common;

use common::{agm_complete_k_e, quad_incomplete_e, quad_incomplete_f, rk4_checked, TestRng};
use helastica::special::{
    complete_e, complete_e_derivative, complete_k, complete_k_derivative, heuman_lambda0,
    incomplete_e, incomplete_f, inverse_cn, inverse_dn, inverse_sn, jacobi_sn_cn_dn,
    EllipticModulus,
};
use helastica::special::theta::{big_h, big_theta, big_theta1, jacobi_zeta};
use std::f64::consts::{FRAC_PI_2, PI};

#[test]
fn complete_integrals_match_agm_oracle() {
    // 31-digit values, frozen from the double-double AGM itself and
    // cross-checked offline against an independent 40-digit evaluation
    let (k08, e08) = agm_complete_k_e(0.8);
    assert!((k08.to_f64() - 1.995302777664729387686211339372_f64).abs() < 1e-15);
    assert!((e08.to_f64() - 1.276349943169906423308933100250_f64).abs() < 1e-15);

    for i in 1..100 {
        let k = i as f64 / 100.0;
        let (ok, oe) = agm_complete_k_e(k);
        let (ok, oe) = (ok.to_f64(), oe.to_f64());
        let fk = complete_k(k).unwrap();
        let fe = complete_e(k).unwrap();
        assert!(
            ((fk - ok) / ok).abs() <= 1e-13,
            "K({k}): {fk} vs oracle {ok}"
        );
        assert!(
            ((fe - oe) / oe).abs() <= 1e-13,
            "E({k}): {fe} vs oracle {oe}"
        );
    }
    assert!((complete_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    assert!((complete_e(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn incomplete_integrals_match_quadrature() {
    // spot values at 1e-12 absolute
    assert!((incomplete_f(0.5, 0.9).unwrap() - quad_incomplete_f(0.5, 0.9)).abs() <= 1e-12);
    assert!((incomplete_e(0.5, 0.9).unwrap() - quad_incomplete_e(0.5, 0.9)).abs() <= 1e-12);
    // frozen 40-digit references for the same pair
    assert!((incomplete_f(0.5, 0.9).unwrap() - 0.5438822141615713085810991537703832788575).abs() <= 1e-14);
    assert!((incomplete_e(0.5, 0.9).unwrap() - 0.5046426865985633879686908636693263178524).abs() <= 1e-14);

    // 20 x 20 grid at 1e-11
    for i in 1..=20 {
        let l = i as f64 / 20.0;
        for j in 0..20 {
            let k = j as f64 / 20.0 * 0.96 + 0.02;
            let f_fast = incomplete_f(l, k).unwrap();
            let e_fast = incomplete_e(l, k).unwrap();
            assert!(
                (f_fast - quad_incomplete_f(l, k)).abs() <= 1e-11,
                "F({l}, {k})"
            );
            assert!(
                (e_fast - quad_incomplete_e(l, k)).abs() <= 1e-11,
                "E({l}, {k})"
            );
        }
    }

    // endpoint reductions
    assert!((incomplete_f(1.0, 0.3).unwrap() - complete_k(0.3).unwrap()).abs() < 1e-14);
    assert_eq!(incomplete_f(0.0, 0.7).unwrap(), 0.0);
    assert!((incomplete_e(1.0, 0.6).unwrap() - complete_e(0.6).unwrap()).abs() < 1e-14);
}

#[test]
fn jacobi_functions_match_rk_oracle() {
    // sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn from (0, 1, 1)
    for &(u, k) in &[(0.37f64, 0.85f64), (1.9, 0.6), (3.4, 0.95), (-2.2, 0.4)] {
        let y = rk4_checked(
            |_, y: &[f64; 3]| [y[1] * y[2], -y[0] * y[2], -k * k * y[0] * y[1]],
            0.0,
            [0.0, 1.0, 1.0],
            u,
            20_000,
            1e-12,
        );
        let (sn, cn, dn) = jacobi_sn_cn_dn(u, k).unwrap();
        assert!((sn - y[0]).abs() <= 1e-12, "sn({u}, {k})");
        assert!((cn - y[1]).abs() <= 1e-12, "cn({u}, {k})");
        assert!((dn - y[2]).abs() <= 1e-12, "dn({u}, {k})");
    }
    // frozen 40-digit triple at (0.37, 0.85)
    let (sn, cn, dn) = jacobi_sn_cn_dn(0.37, 0.85).unwrap();
    assert!((sn - 0.3561003664260923291058794136645307621732).abs() < 1e-15);
    assert!((cn - 0.9344477133746985498744829716777726935371).abs() < 1e-15);
    assert!((dn - 0.9530905530037762393135167855613208063130).abs() < 1e-15);
}

#[test]
fn jacobi_pythagorean_identities() {
    let mut rng = TestRng::new(0x51ec1a);
    for _ in 0..200 {
        let u = rng.range(-25.0, 25.0);
        let k = rng.range(0.02, 0.98);
        let (sn, cn, dn) = jacobi_sn_cn_dn(u, k).unwrap();
        assert!((sn * sn + cn * cn - 1.0).abs() <= 1e-13, "u={u} k={k}");
        assert!(
            (dn * dn + k * k * sn * sn - 1.0).abs() <= 1e-13,
            "u={u} k={k}"
        );
    }
}

#[test]
fn jacobi_periodicity_and_special_arguments() {
    for &k in &[0.3, 0.6, 0.9] {
        let big_k = complete_k(k).unwrap();
        for &u in &[0.0, 0.4, 1.3, -2.6] {
            let (sn0, cn0, dn0) = jacobi_sn_cn_dn(u, k).unwrap();
            let (sn2, cn2, dn2) = jacobi_sn_cn_dn(u + 2.0 * big_k, k).unwrap();
            assert!((sn2 + sn0).abs() <= 1e-13);
            assert!((cn2 + cn0).abs() <= 1e-13);
            assert!((dn2 - dn0).abs() <= 1e-13);
        }
    }
    let (sn, cn, dn) = jacobi_sn_cn_dn(0.0, 0.8).unwrap();
    assert_eq!((sn, cn, dn), (0.0, 1.0, 1.0));
    let kk = complete_k(0.6).unwrap();
    let (sn, cn, dn) = jacobi_sn_cn_dn(kk, 0.6).unwrap();
    assert!((sn - 1.0).abs() < 1e-14);
    assert!(cn.abs() < 1e-14);
    assert!((dn - (1.0f64 - 0.36).sqrt()).abs() < 1e-14);
}

#[test]
fn jacobi_second_order_odes() {
    // sn'' = -(1+k^2) sn + 2 k^2 sn^3
    // cn'' = -(1-2k^2) cn - 2 k^2 cn^3
    // dn'' =  (2-k^2) dn - 2 dn^3
    let h = 1e-4;
    let mut rng = TestRng::new(0xbead);
    for _ in 0..100 {
        let u = rng.range(-8.0, 8.0);
        let k = rng.range(0.05, 0.95);
        let k2 = k * k;
        let (s0, c0, d0) = jacobi_sn_cn_dn(u, k).unwrap();
        let (sp, cp, dp) = jacobi_sn_cn_dn(u + h, k).unwrap();
        let (sm, cm, dm) = jacobi_sn_cn_dn(u - h, k).unwrap();
        let dd = |plus: f64, mid: f64, minus: f64| (plus - 2.0 * mid + minus) / (h * h);
        assert!(
            (dd(sp, s0, sm) + (1.0 + k2) * s0 - 2.0 * k2 * s0.powi(3)).abs() <= 1e-5,
            "sn'' at u={u} k={k}"
        );
        assert!(
            (dd(cp, c0, cm) + (1.0 - 2.0 * k2) * c0 + 2.0 * k2 * c0.powi(3)).abs() <= 1e-5,
            "cn'' at u={u} k={k}"
        );
        assert!(
            (dd(dp, d0, dm) - (2.0 - k2) * d0 + 2.0 * d0.powi(3)).abs() <= 1e-5,
            "dn'' at u={u} k={k}"
        );
    }
}

#[test]
fn jacobi_shift_identities() {
    // quarter- and half-period shifts by K(k)
    let mut rng = TestRng::new(0xfeed5);
    for _ in 0..100 {
        let s = rng.range(-6.0, 6.0);
        let k = rng.range(0.05, 0.95);
        let kp = ((1.0 - k) * (1.0 + k)).sqrt();
        let big_k = complete_k(k).unwrap();
        let (sn, cn, dn) = jacobi_sn_cn_dn(s, k).unwrap();
        let (sn_k, cn_k, dn_k) = jacobi_sn_cn_dn(s + big_k, k).unwrap();
        assert!((sn_k - cn / dn).abs() <= 1e-12, "sn(s+K) s={s} k={k}");
        assert!((cn_k + kp * sn / dn).abs() <= 1e-12, "cn(s+K) s={s} k={k}");
        assert!((dn_k - kp / dn).abs() <= 1e-12, "dn(s+K) s={s} k={k}");
    }
}

#[test]
fn complete_integral_derivatives_match_finite_differences() {
    let h = 1e-6;
    for i in 1..=18 {
        let k = i as f64 / 20.0;
        let dk = (complete_k(k + h).unwrap() - complete_k(k - h).unwrap()) / (2.0 * h);
        let de = (complete_e(k + h).unwrap() - complete_e(k - h).unwrap()) / (2.0 * h);
        assert!((complete_k_derivative(k).unwrap() - dk).abs() <= 1e-6, "dK at {k}");
        assert!((complete_e_derivative(k).unwrap() - de).abs() <= 1e-6, "dE at {k}");
    }
}

#[test]
fn inverse_functions_round_trip() {
    let mut rng = TestRng::new(0xab1e);
    for _ in 0..200 {
        let k = rng.range(0.1, 0.95);
        let kp = ((1.0 - k) * (1.0 + k)).sqrt();
        let z_sn = rng.range(-0.999, 0.999);
        let u = inverse_sn(z_sn, k).unwrap();
        assert!((jacobi_sn_cn_dn(u, k).unwrap().0 - z_sn).abs() <= 1e-11);

        let z_cn = rng.range(0.001, 0.999);
        let u = inverse_cn(z_cn, k).unwrap();
        assert!((jacobi_sn_cn_dn(u, k).unwrap().1 - z_cn).abs() <= 1e-11);

        let z_dn = rng.range(kp + 1e-3 * (1.0 - kp), 0.9999);
        let u = inverse_dn(z_dn, k).unwrap();
        assert!((jacobi_sn_cn_dn(u, k).unwrap().2 - z_dn).abs() <= 1e-11);
    }
}

#[test]
fn theta_series_against_fixed_depth_sums() {
    // Direct series summed to a fixed 60 terms, far past the point where the
    // implementation truncates; any truncation or scaling bug shows up here.
    let raw_theta4 = |z: f64, m: &EllipticModulus| {
        let q = m.nome;
        let v = PI * z / (2.0 * m.big_k);
        let mut acc = 1.0_f64;
        for n in 1..=60i32 {
            let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
            acc += 2.0 * sign * q.powi(n * n) * (2.0 * n as f64 * v).cos();
        }
        acc
    };
    let raw_theta1 = |z: f64, m: &EllipticModulus| {
        let q = m.nome;
        let v = PI * z / (2.0 * m.big_k);
        let mut acc = 0.0_f64;
        for n in 0..=60i32 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let e = (n as f64 + 0.5) * (n as f64 + 0.5);
            acc += 2.0 * sign * q.powf(e) * ((2 * n + 1) as f64 * v).sin();
        }
        acc
    };
    for &k in &[0.3, 0.75, 0.97] {
        let m = EllipticModulus::new(k).unwrap();
        for i in 0..=40 {
            let z = -5.0 + 0.25 * i as f64;
            let t = big_theta(z, &m);
            let h = big_h(z, &m);
            assert!((t - raw_theta4(z, &m)).abs() <= 1e-13 * (1.0 + t.abs()), "Θ k={k} z={z}");
            assert!((h - raw_theta1(z, &m)).abs() <= 1e-13 * (1.0 + h.abs()), "H k={k} z={z}");
        }
    }
    // frozen 40-digit references at (z, k) = (0.8, 0.75)
    let m = EllipticModulus::new(0.75).unwrap();
    assert!((big_theta(0.8, &m) - 0.9739515053232418473413313806666214601617).abs() < 1e-14);
    assert!((big_h(0.8, &m) - 0.5799646604589203254381496174949018708112).abs() < 1e-14);
}

#[test]
fn theta_quarter_shift_and_zeros() {
    for &k in &[0.4, 0.85, 0.99] {
        let m = EllipticModulus::new(k).unwrap();
        for i in 0..=30 {
            let z = -4.0 + 0.27 * i as f64;
            let lhs = big_theta(z + m.big_k, &m);
            let rhs = big_theta1(z, &m);
            assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs.abs()), "k={k} z={z}");
        }
    }
    let m9 = EllipticModulus::new(0.9).unwrap();
    assert_eq!(big_h(0.0, &m9), 0.0);
    let m4 = EllipticModulus::new(0.4).unwrap();
    assert_eq!(jacobi_zeta(0.0, &m4), 0.0);
    // ζ is odd and 2K-periodic
    for i in 1..10 {
        let z = 0.3 * i as f64;
        assert!((jacobi_zeta(-z, &m4) + jacobi_zeta(z, &m4)).abs() < 1e-13);
        assert!((jacobi_zeta(z + 2.0 * m4.big_k, &m4) - jacobi_zeta(z, &m4)).abs() < 1e-12);
    }
}

#[test]
fn heuman_lambda_against_composed_oracle() {
    // Λ₀(arcsin l, k) = (2/π)[E(k) F(l, k') + K(k)(E(l, k') − F(l, k'))],
    // assembled here entirely from the AGM and quadrature oracles.
    let frozen = heuman_lambda0(0.6, 0.8).unwrap();
    assert!((frozen - 0.4966206437997894022338534684019255838962).abs() < 1e-14);

    for &(l, k) in &[(0.2f64, 0.3f64), (0.6, 0.8), (0.9, 0.5), (0.45, 0.95)] {
        let kp = ((1.0 - k) * (1.0 + k)).sqrt();
        let (big_k, big_e) = agm_complete_k_e(k);
        let f = quad_incomplete_f(l, kp);
        let e = quad_incomplete_e(l, kp);
        let want = 2.0 / PI * (big_e.to_f64() * f + big_k.to_f64() * (e - f));
        let got = heuman_lambda0(l, k).unwrap();
        assert!((got - want).abs() <= 1e-12, "Λ₀({l}, {k}): {got} vs {want}");
    }
    for &k in &[0.1, 0.6, 0.95] {
        assert!((heuman_lambda0(1.0, k).unwrap() - 1.0).abs() < 1e-13);
        assert_eq!(heuman_lambda0(0.0, k).unwrap(), 0.0);
    }
}
