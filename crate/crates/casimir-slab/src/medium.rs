//! Plasma-model dielectric response and interface reflection amplitudes at
//! imaginary frequency, in reduced units.
//!
//! Frequencies are measured in units of the plasma frequency (x = xi/w_P),
//! transverse wavevectors in units of k_P = w_P/c (u = k/k_P) and lengths in
//! 1/k_P. In these units the permittivity is eps(i xi) = 1 + 1/x^2 and the
//! in-slab perpendicular wavevector satisfies kappa_s^2 - kappa^2 = 1
//! identically.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MediumError {
    #[error("reduced frequency must be finite and >= 0, got {0}")]
    InvalidFrequency(f64),
    #[error("reduced wavevector must be finite and >= 0, got {0}")]
    InvalidWavevector(f64),
    #[error("static pole: the permittivity diverges at x = 0; integrands must take this limit analytically")]
    StaticPole,
    #[error("degenerate point: frequency and wavevector cannot both vanish")]
    DegeneratePoint,
    #[error("slope variable p must be >= 1, got {0}")]
    SlopeBelowOne(f64),
    #[error("slab thickness must be positive, got {0}")]
    InvalidThickness(f64),
}

/// Dimensionless imaginary frequency x = xi/w_P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedFrequency(f64);

impl ReducedFrequency {
    pub fn new(x: f64) -> Result<Self, MediumError> {
        if !x.is_finite() || x < 0.0 {
            return Err(MediumError::InvalidFrequency(x));
        }
        Ok(ReducedFrequency(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Dimensionless transverse wavevector u = k/k_P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedWavevector(f64);

impl ReducedWavevector {
    pub fn new(u: f64) -> Result<Self, MediumError> {
        if !u.is_finite() || u < 0.0 {
            return Err(MediumError::InvalidWavevector(u));
        }
        Ok(ReducedWavevector(u))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Reduced perpendicular wavevectors in vacuum (kappa) and in the slab
/// (kappa_s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerpWavevectors {
    pub kappa: f64,
    pub kappa_s: f64,
}

/// Field polarization, p (TM) or s (TE).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    P,
    S,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::P, Polarization::S];

    pub fn label(self) -> &'static str {
        match self {
            Polarization::P => "p",
            Polarization::S => "s",
        }
    }
}

/// Mode symmetry nu = +/- with respect to the central plane; only
/// meaningful in mode contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Plus,
    Minus,
}

impl Symmetry {
    pub const BOTH: [Symmetry; 2] = [Symmetry::Plus, Symmetry::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Symmetry::Plus => 1.0,
            Symmetry::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Symmetry::Plus => "+",
            Symmetry::Minus => "-",
        }
    }
}

/// Cavity mirror idealization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorModel {
    None,
    Perfect,
}

/// Mirror reflection amplitude R^q = delta_{qp} - delta_{qs} for a perfect
/// mirror, zero for an absent one.
pub fn mirror_reflection(mirror: MirrorModel, q: Polarization) -> f64 {
    match (mirror, q) {
        (MirrorModel::None, _) => 0.0,
        (MirrorModel::Perfect, Polarization::P) => 1.0,
        (MirrorModel::Perfect, Polarization::S) => -1.0,
    }
}

/// Plasma permittivity at imaginary frequency: eps(i xi) = 1 + 1/x^2.
pub fn epsilon_imag(x: ReducedFrequency) -> Result<f64, MediumError> {
    let x = x.value();
    if x == 0.0 {
        return Err(MediumError::StaticPole);
    }
    Ok(1.0 + 1.0 / (x * x))
}

/// kappa = sqrt(x^2 + u^2), kappa_s = sqrt(x^2 + u^2 + 1).
pub fn perp_wavevectors(
    x: ReducedFrequency,
    u: ReducedWavevector,
) -> Result<PerpWavevectors, MediumError> {
    let (x, u) = (x.value(), u.value());
    if x == 0.0 && u == 0.0 {
        return Err(MediumError::DegeneratePoint);
    }
    Ok(raw::perp(x, u))
}

/// Vacuum-slab reflection amplitude rho^q(i xi, k).
///
/// The p amplitude is evaluated as
/// ((1+x^2) kappa - x^2 kappa_s) / ((1+x^2) kappa + x^2 kappa_s),
/// which equals (eps kappa - kappa_s)/(eps kappa + kappa_s) for x > 0 and
/// extends smoothly to the static limit rho^p -> 1.
pub fn rho(
    q: Polarization,
    x: ReducedFrequency,
    u: ReducedWavevector,
) -> Result<f64, MediumError> {
    let w = perp_wavevectors(x, u)?;
    let x = x.value();
    Ok(match q {
        Polarization::P => raw::rho_p(x, w.kappa, w.kappa_s),
        Polarization::S => raw::rho_s(w.kappa, w.kappa_s),
    })
}

/// Reflection amplitude in the (x, p) parameterization, p >= 1:
/// rho^p = ((1+x^2) s - x^2 p) / ((1+x^2) s + x^2 p),
/// rho^s = (s - p)/(s + p),  s = sqrt(p^2 - 1 + x^2/(1+x^2)).
pub fn rho_pform(q: Polarization, x: ReducedFrequency, p: f64) -> Result<f64, MediumError> {
    let x = x.value();
    if x == 0.0 {
        return Err(MediumError::StaticPole);
    }
    if p < 1.0 || !p.is_finite() {
        return Err(MediumError::SlopeBelowOne(p));
    }
    let x2 = x * x;
    let s = (p * p - 1.0 + x2 / (1.0 + x2)).sqrt();
    Ok(match q {
        Polarization::P => ((1.0 + x2) * s - x2 * p) / ((1.0 + x2) * s + x2 * p),
        Polarization::S => (s - p) / (s + p),
    })
}

/// Fresnel amplitudes (r, t) of the whole slab of reduced thickness `ds`,
/// with the interior interface carrying amplitude -rho^q.
pub fn slab_fresnel(
    q: Polarization,
    x: ReducedFrequency,
    u: ReducedWavevector,
    ds: f64,
) -> Result<(f64, f64), MediumError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(MediumError::InvalidThickness(ds));
    }
    let w = perp_wavevectors(x, u)?;
    let rho = match q {
        Polarization::P => raw::rho_p(x.value(), w.kappa, w.kappa_s),
        Polarization::S => raw::rho_s(w.kappa, w.kappa_s),
    };
    let em = (-w.kappa_s * ds).exp();
    let e2 = em * em;
    let denom = 1.0 - rho * rho * e2;
    let r = rho * (1.0 - e2) / denom;
    let t = (1.0 - rho * rho) * em / denom;
    Ok((r, t))
}

/// Unchecked kernels shared with the pressure integrands, which generate
/// their own in-domain sample points.
pub(crate) mod raw {
    use super::PerpWavevectors;

    #[inline]
    pub fn perp(x: f64, u: f64) -> PerpWavevectors {
        let r2 = x * x + u * u;
        PerpWavevectors {
            kappa: r2.sqrt(),
            kappa_s: (r2 + 1.0).sqrt(),
        }
    }

    #[inline]
    pub fn rho_p(x: f64, kappa: f64, kappa_s: f64) -> f64 {
        let x2 = x * x;
        ((1.0 + x2) * kappa - x2 * kappa_s) / ((1.0 + x2) * kappa + x2 * kappa_s)
    }

    #[inline]
    pub fn rho_s(kappa: f64, kappa_s: f64) -> f64 {
        (kappa - kappa_s) / (kappa + kappa_s)
    }

    /// 1 - rho^p, exact to rounding; vanishes quadratically in x.
    #[inline]
    pub fn one_minus_rho_p(x: f64, kappa: f64, kappa_s: f64) -> f64 {
        let x2 = x * x;
        2.0 * x2 * kappa_s / ((1.0 + x2) * kappa + x2 * kappa_s)
    }

    /// 1 + rho^s, exact to rounding; vanishes linearly in kappa.
    #[inline]
    pub fn one_plus_rho_s(kappa: f64, kappa_s: f64) -> f64 {
        2.0 * kappa / (kappa + kappa_s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn freq(x: f64) -> ReducedFrequency {
        ReducedFrequency::new(x).unwrap()
    }

    fn wave(u: f64) -> ReducedWavevector {
        ReducedWavevector::new(u).unwrap()
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_imag(freq(1.0)).unwrap(), 2.0);
        assert_eq!(epsilon_imag(freq(0.5)).unwrap(), 5.0);
        assert!((epsilon_imag(freq(1e8)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(epsilon_imag(freq(0.0)), Err(MediumError::StaticPole));
    }

    #[test]
    fn epsilon_identity_and_monotonicity() {
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let x = 10f64.powf(-2.0 + i as f64 * 0.1);
            let eps = epsilon_imag(freq(x)).unwrap();
            assert!(eps > 1.0);
            assert!(eps < prev);
            assert!((eps * x * x - x * x - 1.0).abs() < 1e-12);
            prev = eps;
        }
    }

    #[test]
    fn perp_wavevector_values() {
        let w = perp_wavevectors(freq(0.0), wave(1.0)).unwrap();
        assert_eq!(w.kappa, 1.0);
        assert!((w.kappa_s - 2f64.sqrt()).abs() < 1e-15);

        let w = perp_wavevectors(freq(1.0), wave(0.0)).unwrap();
        assert_eq!(w.kappa, 1.0);
        assert!((w.kappa_s - 2f64.sqrt()).abs() < 1e-15);

        let w = perp_wavevectors(freq(3.0), wave(4.0)).unwrap();
        assert_eq!(w.kappa, 5.0);
        assert!((w.kappa_s - 26f64.sqrt()).abs() < 1e-15);

        assert_eq!(
            perp_wavevectors(freq(0.0), wave(0.0)),
            Err(MediumError::DegeneratePoint)
        );
    }

    #[test]
    fn rho_reference_points() {
        let r = rho(Polarization::S, freq(0.0), wave(1.0)).unwrap();
        let expected = (1.0 - 2f64.sqrt()) / (1.0 + 2f64.sqrt());
        assert!((r - expected).abs() < 1e-15);
        assert!((r + 0.17157).abs() < 1e-5);

        // Large-u limit of rho^p is (eps-1)/(eps+1) = 1/3 at x = 1.
        let r = rho(Polarization::P, freq(1.0), wave(1e8)).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn rho_pform_reference_points() {
        // p = 1: s-amplitude reduces to (s-1)/(s+1) with s = x/sqrt(1+x^2).
        for x in [0.3f64, 1.0, 4.0] {
            let s = x / (1.0 + x * x).sqrt();
            let expected = (s - 1.0) / (s + 1.0);
            let r = rho_pform(Polarization::S, freq(x), 1.0).unwrap();
            assert!((r - expected).abs() < 1e-14);
            assert!(r < 0.0);
        }
        // x -> 0: rho^p -> 1.
        let r = rho_pform(Polarization::P, freq(1e-8), 2.0).unwrap();
        assert!((r - 1.0).abs() < 1e-14);

        assert_eq!(
            rho_pform(Polarization::P, freq(1.0), 0.5),
            Err(MediumError::SlopeBelowOne(0.5))
        );
        assert_eq!(
            rho_pform(Polarization::P, freq(0.0), 2.0),
            Err(MediumError::StaticPole)
        );
    }

    #[test]
    fn rho_agrees_with_pform_on_grid() {
        // Under kappa_s = sqrt(1+x^2) p the two parameterizations describe
        // the same amplitude; u = sqrt((1+x^2)(p^2-1)).
        for i in 0..20 {
            let x = 10f64.powf(-2.0 + 3.0 * i as f64 / 19.0);
            for j in 0..20 {
                let p = 1.0 + 9.0 * j as f64 / 19.0;
                let u = ((1.0 + x * x) * (p * p - 1.0)).sqrt();
                for q in Polarization::BOTH {
                    let direct = rho(q, freq(x), wave(u)).unwrap();
                    let pform = rho_pform(q, freq(x), p).unwrap();
                    let scale = direct.abs().max(1e-3);
                    assert!(
                        (direct - pform).abs() <= 1e-12 * scale,
                        "q={q:?} x={x} p={p}: {direct} vs {pform}"
                    );
                }
            }
        }
    }

    #[test]
    fn slab_fresnel_limits() {
        let (x, u) = (freq(0.7), wave(1.3));
        let (r, t) = slab_fresnel(Polarization::P, x, u, 1e-12).unwrap();
        assert!(r.abs() < 1e-11);
        assert!((t - 1.0).abs() < 1e-11);

        let rho_ref = rho(Polarization::P, x, u).unwrap();
        let (r, t) = slab_fresnel(Polarization::P, x, u, 50.0).unwrap();
        assert!((r - rho_ref).abs() < 1e-14);
        assert!(t.abs() < 1e-30);

        assert!(slab_fresnel(Polarization::P, x, u, 0.0).is_err());
    }

    /// Transfer-matrix composition of a vacuum | slab | vacuum stack. The
    /// interface amplitudes are (rho, -rho) and propagation across the slab
    /// multiplies by exp(-kappa_s ds) at imaginary frequency.
    fn three_layer_oracle(rho: f64, kappa_s: f64, ds: f64) -> (f64, f64) {
        // M = M_in * P * M_out, with M_ij = [[1, r],[r, 1]]/t and
        // P = diag(e^{+kappa_s ds}, e^{-kappa_s ds}).
        let (r12, t12) = (rho, 1.0 + rho);
        let (r21, t21) = (-rho, 1.0 - rho);
        let ep = (kappa_s * ds).exp();
        let em = (-kappa_s * ds).exp();
        let m11 = (ep * 1.0 * 1.0 + em * r12 * r21) / (t12 * t21);
        let m21 = (ep * r12 * 1.0 + em * 1.0 * r21) / (t12 * t21);
        (m21 / m11, 1.0 / m11)
    }

    #[test]
    fn slab_fresnel_matches_transfer_matrix() {
        for (xv, uv, ds) in [(0.3, 0.8, 0.7), (1.5, 0.2, 1.3), (0.05, 2.0, 0.25)] {
            let (x, u) = (freq(xv), wave(uv));
            let w = perp_wavevectors(x, u).unwrap();
            for q in Polarization::BOTH {
                let rho_q = rho(q, x, u).unwrap();
                let (r_ref, t_ref) = three_layer_oracle(rho_q, w.kappa_s, ds);
                let (r, t) = slab_fresnel(q, x, u, ds).unwrap();
                assert!((r - r_ref).abs() < 1e-13, "r: {r} vs {r_ref}");
                assert!((t - t_ref).abs() < 1e-13, "t: {t} vs {t_ref}");
            }
        }
    }

    #[test]
    fn slab_reflection_grows_monotonically_with_thickness() {
        let (x, u) = (freq(0.4), wave(0.9));
        for q in Polarization::BOTH {
            let rho_q = rho(q, x, u).unwrap();
            let mut prev = 0.0;
            for k in 1..=20 {
                let ds = 0.25 * k as f64;
                let (r, t) = slab_fresnel(q, x, u, ds).unwrap();
                assert!(r.abs() >= prev);
                assert!(r.abs() <= rho_q.abs() + 1e-15);
                assert!(t.abs() <= 1.0);
                prev = r.abs();
            }
        }
    }

    #[test]
    fn mirror_reflection_table() {
        assert_eq!(mirror_reflection(MirrorModel::Perfect, Polarization::P), 1.0);
        assert_eq!(mirror_reflection(MirrorModel::Perfect, Polarization::S), -1.0);
        assert_eq!(mirror_reflection(MirrorModel::None, Polarization::P), 0.0);
        assert_eq!(mirror_reflection(MirrorModel::None, Polarization::S), 0.0);
    }

    proptest! {
        #[test]
        fn perp_identity_holds(x in 0f64..3.0, u in 0f64..3.0) {
            prop_assume!(x > 0.0 || u > 0.0);
            let w = perp_wavevectors(freq(x), wave(u)).unwrap();
            prop_assert!(w.kappa_s >= w.kappa);
            prop_assert!((w.kappa_s * w.kappa_s - w.kappa * w.kappa - 1.0).abs() < 1e-14);
        }

        #[test]
        fn perp_identity_holds_relative_at_large_arguments(
            x in 0f64..100.0,
            u in 0f64..100.0,
        ) {
            prop_assume!(x > 0.0 || u > 0.0);
            let w = perp_wavevectors(freq(x), wave(u)).unwrap();
            let scale = 1.0 + w.kappa * w.kappa;
            prop_assert!(
                (w.kappa_s * w.kappa_s - w.kappa * w.kappa - 1.0).abs()
                    < 8.0 * f64::EPSILON * scale
            );
        }

        #[test]
        fn rho_bounds(x in 1e-6f64..50.0, u in 0f64..50.0) {
            let rp = rho(Polarization::P, freq(x), wave(u)).unwrap();
            let rs = rho(Polarization::S, freq(x), wave(u)).unwrap();
            prop_assert!(rp.abs() < 1.0);
            prop_assert!(rs.abs() < 1.0);
            prop_assert!(rs <= 0.0);
        }
    }
}
