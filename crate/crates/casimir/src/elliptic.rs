//! Complete elliptic integrals K(κ), E(κ) via the arithmetic-geometric mean,
//! plus Taylor-jet versions used to propagate τ-derivatives.
//!
//! Modulus convention: κ² multiplies sin²α inside the defining integrals,
//! so K(0) = E(0) = π/2 and K diverges as κ → 1.

use std::f64::consts::PI;

use crate::error::{CasimirError, Result};
use crate::jet::Jet;

const AGM_EPS: f64 = 1e-16;
const MAX_ITER: usize = 40;

/// K(κ) and E(κ) at a common modulus.
#[derive(Debug, Clone, Copy)]
pub struct EllipticPair {
    pub k: f64,
    pub e: f64,
    pub modulus: f64,
}

/// Complete elliptic integrals of the first and second kind by AGM iteration.
pub fn elliptic_ke(kappa: f64) -> Result<EllipticPair> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(CasimirError::InvalidArgument(format!(
            "elliptic modulus must satisfy 0 <= κ < 1, got {kappa}"
        )));
    }
    Ok(agm_ke((1.0 - kappa * kappa).sqrt(), kappa, kappa))
}

/// Same integrals parameterized by the complementary modulus κ̃ = √(1-κ²).
/// Avoids the rounding of κ to 1 when κ̃ is tiny.
pub fn elliptic_ke_complement(ktil: f64) -> Result<EllipticPair> {
    if !(0.0..=1.0).contains(&ktil) || ktil == 0.0 {
        return Err(CasimirError::InvalidArgument(format!(
            "complementary modulus must satisfy 0 < κ̃ <= 1, got {ktil}"
        )));
    }
    let kappa = ((1.0 - ktil) * (1.0 + ktil)).sqrt();
    Ok(agm_ke(ktil, kappa, kappa.min(1.0)))
}

fn agm_ke(b0: f64, c0: f64, modulus: f64) -> EllipticPair {
    let mut a = 1.0f64;
    let mut b = b0;
    let mut c = c0;
    let mut c_sum = 0.5 * c * c;
    let mut pow2 = 1.0;
    for _ in 0..MAX_ITER {
        if c.abs() < AGM_EPS * a {
            break;
        }
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = a_next;
        b = b_next;
        c_sum += pow2 * c * c;
        pow2 *= 2.0;
    }
    let k = PI / (2.0 * a);
    let e = k * (1.0 - c_sum);
    EllipticPair { k, e, modulus }
}

/// Maclaurin coefficients of K and E in the parameter m = κ², scaled by 2/π:
/// K = (π/2) Σ c_n m^n with c_{n+1} = c_n ((2n+1)/(2n+2))²,
/// E = (π/2) [1 - Σ_{n≥1} c_n m^n / (2n-1)].
fn series_coeffs(m0: f64) -> (Vec<f64>, Vec<f64>) {
    let mut ck = vec![1.0];
    let mut ce = vec![1.0];
    let mut c = 1.0f64;
    let mut n = 0usize;
    let mut scale = 1.0f64;
    loop {
        let ratio = (2 * n + 1) as f64 / (2 * n + 2) as f64;
        c *= ratio * ratio;
        n += 1;
        ck.push(c);
        ce.push(-c / (2 * n - 1) as f64);
        scale *= m0;
        if c * scale < 1e-18 || n > 500 {
            break;
        }
    }
    (ck, ce)
}

/// Jets of K and E along an arbitrary modulus jet κ(τ).
///
/// For small base modulus the power series in m = κ² is composed directly
/// (this covers the κ → 0 limit, where the derivative identities are
/// singular); otherwise K and E are propagated order by order through
/// dK/dκ = (E - κ̃²K)/(κ κ̃²) and dE/dκ = (E - K)/κ.
pub fn elliptic_ke_jet(kappa_jet: &Jet) -> Result<(Jet, Jet)> {
    let k0 = kappa_jet.value();
    if !(0.0..1.0).contains(&k0) {
        return Err(CasimirError::InvalidArgument(format!(
            "elliptic jet base modulus must satisfy 0 <= κ < 1, got {k0}"
        )));
    }
    let d = kappa_jet.order();
    if k0 < 0.75 {
        let m = kappa_jet * kappa_jet;
        let (ck, ce) = series_coeffs(k0 * k0);
        let kj = m.eval_series(&ck).scale(PI / 2.0);
        let ej = m.eval_series(&ce).scale(PI / 2.0);
        return Ok((kj, ej));
    }
    let base = elliptic_ke(k0)?;
    let mut kc = vec![0.0; d + 1];
    let mut ec = vec![0.0; d + 1];
    kc[0] = base.k;
    ec[0] = base.e;
    let one = Jet::constant(1.0, d);
    let ktil2 = &one - &(kappa_jet * kappa_jet);
    let kdot = if d >= 1 {
        kappa_jet.differentiate()
    } else {
        return Ok((Jet::from_coeffs(kc), Jet::from_coeffs(ec)));
    };
    for ord in 0..d {
        let kj = Jet::from_coeffs(kc[..=ord].to_vec());
        let ej = Jet::from_coeffs(ec[..=ord].to_vec());
        let kappa_t = kappa_jet.truncate(ord);
        let ktil2_t = ktil2.truncate(ord);
        let kdot_t = Jet::from_coeffs(kdot.coeffs[..=ord.min(kdot.order())].to_vec());
        // dK/dτ = (E - κ̃²K)/(κ κ̃²) · κ̇ ; dE/dτ = (E - K)/κ · κ̇
        let dk = (&ej - &(&ktil2_t * &kj)).div(&(&kappa_t * &ktil2_t));
        let dk = &dk * &kdot_t;
        let de = (&ej - &kj).div(&kappa_t);
        let de = &de * &kdot_t;
        kc[ord + 1] = dk.coeffs[ord] / (ord + 1) as f64;
        ec[ord + 1] = de.coeffs[ord] / (ord + 1) as f64;
    }
    Ok((Jet::from_coeffs(kc), Jet::from_coeffs(ec)))
}

/// κ = √(1 - e^{-8τ}) and κ̃ = e^{-4τ} as jets in τ about τ0.
///
/// At τ0 = 0 the modulus κ(τ) has a square-root branch point, so only its
/// value (zero) is meaningful there; higher coefficients are returned as 0.
pub fn kappa_jet_of_tau(tau0: f64, order: usize) -> Result<(Jet, Jet)> {
    if tau0 < 0.0 {
        return Err(CasimirError::InvalidArgument(format!(
            "τ must be non-negative, got {tau0}"
        )));
    }
    let tau = Jet::variable(tau0, order);
    let ktil = tau.scale(-4.0).exp();
    if tau0 == 0.0 {
        return Ok((Jet::constant(0.0, order), ktil));
    }
    let mut m = &Jet::constant(1.0, order) - &tau.scale(-8.0).exp();
    m.coeffs[0] = -(-8.0 * tau0).exp_m1(); // exact small-τ value
    Ok((m.sqrt(), ktil))
}

/// Jets in τ of (m = κ², κ̃² = e^{-8τ}, K, E) about τ0 > 0, propagated via
/// dK/dτ = 4(E - κ̃²K)/κ² and dE/dτ = 4κ̃²(E - K)/κ².
///
/// These forms contain no division by κ̃², so they stay accurate deep in the
/// large-τ regime where κ̃ underflows toward zero.
pub struct EllipticTauJets {
    pub m: Jet,
    pub ktil2: Jet,
    pub k: Jet,
    pub e: Jet,
}

pub fn elliptic_jets_of_tau(tau0: f64, order: usize) -> Result<EllipticTauJets> {
    if tau0 <= 0.0 {
        return Err(CasimirError::InvalidArgument(format!(
            "τ-jets of the elliptic integrals need τ > 0, got {tau0}"
        )));
    }
    let tau = Jet::variable(tau0, order);
    let ktil2 = tau.scale(-8.0).exp();
    let mut m = &Jet::constant(1.0, order) - &ktil2;
    m.coeffs[0] = -(-8.0 * tau0).exp_m1();
    let kappa0 = m.value().sqrt();
    let base = elliptic_ke(kappa0.min(1.0 - 1e-16))?;
    let mut kc = vec![0.0; order + 1];
    let mut ec = vec![0.0; order + 1];
    kc[0] = base.k;
    ec[0] = base.e;
    for ord in 0..order {
        let kj = Jet::from_coeffs(kc[..=ord].to_vec());
        let ej = Jet::from_coeffs(ec[..=ord].to_vec());
        let m_t = m.truncate(ord);
        let kt2_t = ktil2.truncate(ord);
        let dk = (&ej - &(&kt2_t * &kj)).div(&m_t).scale(4.0);
        let de = (&(&kt2_t * &(&ej - &kj))).div(&m_t).scale(4.0);
        kc[ord + 1] = dk.coeffs[ord] / (ord + 1) as f64;
        ec[ord + 1] = de.coeffs[ord] / (ord + 1) as f64;
    }
    Ok(EllipticTauJets {
        m,
        ktil2,
        k: Jet::from_coeffs(kc),
        e: Jet::from_coeffs(ec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Adaptive Simpson quadrature of the defining integrals; test oracle only.
    fn quadrature_ke(kappa: f64) -> (f64, f64) {
        fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, eps: f64) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (left + right - whole).abs() < 15.0 * eps {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson(f, a, m, fa, flm, fm, eps / 2.0) + simpson(f, m, b, fm, frm, fb, eps / 2.0)
            }
        }
        let k2 = kappa * kappa;
        let fk = move |t: f64| 1.0 / (1.0 - k2 * t.sin().powi(2)).sqrt();
        let fe = move |t: f64| (1.0 - k2 * t.sin().powi(2)).sqrt();
        let (a, b) = (0.0, PI / 2.0);
        let k = simpson(&fk, a, b, fk(a), fk(0.5 * (a + b)), fk(b), 1e-13);
        let e = simpson(&fe, a, b, fe(a), fe(0.5 * (a + b)), fe(b), 1e-13);
        (k, e)
    }

    #[test]
    fn zero_modulus() {
        let p = elliptic_ke(0.0).unwrap();
        assert_eq!(p.k, PI / 2.0);
        assert_eq!(p.e, PI / 2.0);
    }

    #[test]
    fn agm_matches_quadrature_oracle() {
        for &kappa in &[0.1, 0.5, 3f64.sqrt() / 2.0, 0.99] {
            let p = elliptic_ke(kappa).unwrap();
            let (kq, eq) = quadrature_ke(kappa);
            assert_relative_eq!(p.k, kq, max_relative = 1e-11);
            assert_relative_eq!(p.e, eq, max_relative = 1e-11);
        }
        // frozen oracle values
        let p = elliptic_ke(3f64.sqrt() / 2.0).unwrap();
        assert_relative_eq!(p.k, 2.1565156, epsilon = 1e-6);
        assert_relative_eq!(p.e, 1.2110560, epsilon = 1e-6);
        let p = elliptic_ke(0.5).unwrap();
        assert_relative_eq!(p.k, 1.6857504, epsilon = 1e-6);
        assert_relative_eq!(p.e, 1.4674622, epsilon = 1e-6);
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(elliptic_ke(1.0).is_err());
        assert!(elliptic_ke(-0.1).is_err());
    }

    #[test]
    fn legendre_relation() {
        for &kappa in &[0.05, 0.3, 0.6, 0.9, 0.999] {
            let ktil = (1.0f64 - kappa * kappa).sqrt();
            let p = elliptic_ke(kappa).unwrap();
            let q = elliptic_ke(ktil).unwrap();
            let legendre = p.e * q.k + q.e * p.k - p.k * q.k;
            assert_relative_eq!(legendre, PI / 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn jet_order_zero_matches_scalar() {
        let j = Jet::constant(0.5, 0);
        let (kj, ej) = elliptic_ke_jet(&j).unwrap();
        assert_relative_eq!(kj.value(), 1.6857504, epsilon = 1e-6);
        assert_relative_eq!(ej.value(), 1.4674622, epsilon = 1e-6);
    }

    #[test]
    fn jet_first_derivative_matches_finite_difference() {
        for &k0 in &[0.3, 0.5, 0.8, 0.9] {
            let j = Jet::variable(k0, 2);
            let (kj, ej) = elliptic_ke_jet(&j).unwrap();
            let h = 1e-6;
            let kp = elliptic_ke(k0 + h).unwrap();
            let km = elliptic_ke(k0 - h).unwrap();
            assert_relative_eq!(kj.derivative(1), (kp.k - km.k) / (2.0 * h), max_relative = 1e-6);
            assert_relative_eq!(ej.derivative(1), (kp.e - km.e) / (2.0 * h), max_relative = 1e-6);
        }
        // dE/dκ at κ = 0.5 equals (E - K)/κ
        let j = Jet::variable(0.5, 1);
        let (_, ej) = elliptic_ke_jet(&j).unwrap();
        assert_relative_eq!(ej.derivative(1), -0.4365764, epsilon = 1e-6);
    }

    #[test]
    fn small_modulus_series() {
        // K ≈ (π/2)(1 + κ²/4 + 9κ⁴/64) near zero
        let kappa = 0.05f64;
        let p = elliptic_ke(kappa).unwrap();
        let approx_k = PI / 2.0 * (1.0 + kappa.powi(2) / 4.0 + 9.0 * kappa.powi(4) / 64.0);
        assert_relative_eq!(p.k, approx_k, max_relative = 1e-8);
    }

    #[test]
    fn kappa_jets_of_tau_values() {
        let (kap, ktil) = kappa_jet_of_tau(0.0, 3).unwrap();
        assert_eq!(kap.value(), 0.0);
        assert_eq!(ktil.value(), 1.0);

        let tau0 = 2f64.ln() / 4.0;
        let (kap, ktil) = kappa_jet_of_tau(tau0, 3).unwrap();
        assert_relative_eq!(ktil.value(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(kap.value(), 3f64.sqrt() / 2.0, epsilon = 1e-14);

        let (_, ktil) = kappa_jet_of_tau(2.0, 1).unwrap();
        assert_relative_eq!(ktil.value(), 3.3546e-4, max_relative = 1e-4);
    }

    #[test]
    fn kappa_identity_per_coefficient() {
        for &tau0 in &[0.05, 0.3, 1.0, 2.5] {
            let (kap, ktil) = kappa_jet_of_tau(tau0, 8).unwrap();
            let sum = &(&kap * &kap) + &(&ktil * &ktil);
            assert_relative_eq!(sum.coeffs[0], 1.0, epsilon = 1e-12);
            // coefficients of the individual jets grow fast at small τ0,
            // so the cancellation degrades with order there
            for k in 1..=8 {
                let scale = 1.0 + kap.coeffs[k].abs() + ktil.coeffs[k].abs();
                assert!(
                    sum.coeffs[k].abs() < 1e-10 * scale,
                    "τ0={tau0} k={k}: {}",
                    sum.coeffs[k]
                );
            }
        }
    }

    #[test]
    fn dtau_dkappa_relation_at_first_order() {
        // dκ/dτ = 4κ̃²/κ
        for &tau0 in &[0.1, 0.5, 1.5] {
            let (kap, ktil) = kappa_jet_of_tau(tau0, 1).unwrap();
            let expect = 4.0 * ktil.value() * ktil.value() / kap.value();
            assert_relative_eq!(kap.derivative(1), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn tau_jets_consistent_with_kappa_jets() {
        for &tau0 in &[0.1, 0.5, 2.0] {
            let jets = elliptic_jets_of_tau(tau0, 6).unwrap();
            let (kap, _) = kappa_jet_of_tau(tau0, 6).unwrap();
            let (kj, ej) = elliptic_ke_jet(&kap).unwrap();
            for ord in 0..=6 {
                assert_relative_eq!(jets.k.coeffs[ord], kj.coeffs[ord], max_relative = 1e-2, epsilon = 1e-7);
                assert_relative_eq!(jets.e.coeffs[ord], ej.coeffs[ord], max_relative = 1e-2, epsilon = 1e-7);
            }
        }
    }
}
