//! Lifshitz-like pressure evaluations on the slab surfaces, in reduced
//! units F^ = F/(hbar c k_P^4).
//!
//! The sign convention is that of the imaginary-frequency Lifshitz
//! integrals: the pressure on a free or sandwiched slab is negative, i.e.
//! the vacuum field squeezes the slab. All double integrals are evaluated
//! with the overall factor exp(-2 ds) pulled out of the integrand so the
//! adaptive tolerances stay relative even for thick slabs, where the
//! pressure itself is exponentially small.

use crate::medium::{self, raw, MediumError, MirrorModel, Polarization};
use crate::quadrature::{
    self, IntegralResult, QuadratureError, QuadratureSpec, Substitution,
};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PressureError {
    #[error("slab thickness must be positive and finite, got {0}")]
    InvalidThickness(f64),
    #[error("mirror gap must be >= 0, got {0}")]
    InvalidGap(f64),
    #[error("the thick-slab asymptote requires k_P d_s > 1, got {0}")]
    ThicknessOutOfRange(f64),
    #[error("interaction force requires perfect mirrors at positive gaps on both sides")]
    MirrorsRequired,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Medium(#[from] MediumError),
}

/// Which formula produced a pressure value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    LifshitzFree,
    LifshitzCavity,
    MirrorsIntegral,
    MirrorsBessel,
    Nonretarded,
    ThickAsymptotic,
    ThinExpansion,
    ModeSum,
}

impl Formula {
    pub fn label(self) -> &'static str {
        match self {
            Formula::LifshitzFree => "lifshitz_free",
            Formula::LifshitzCavity => "lifshitz_cavity",
            Formula::MirrorsIntegral => "mirrors_integral",
            Formula::MirrorsBessel => "mirrors_bessel",
            Formula::Nonretarded => "nonretarded",
            Formula::ThickAsymptotic => "thick_asymptotic",
            Formula::ThinExpansion => "thin_expansion",
            Formula::ModeSum => "mode_sum",
        }
    }
}

/// A reduced-unit pressure with its numerical error bound and provenance.
#[derive(Debug, Clone, Copy)]
pub struct PressureValue {
    pub value: f64,
    pub error_estimate: f64,
    pub formula: Formula,
}

/// One side of the cavity: either no mirror (infinite gap) or a perfect
/// mirror at a finite reduced gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mirror {
    None,
    Perfect { gap: f64 },
}

impl Mirror {
    pub fn model(self) -> MirrorModel {
        match self {
            Mirror::None => MirrorModel::None,
            Mirror::Perfect { .. } => MirrorModel::Perfect,
        }
    }
}

/// Slab thickness plus the two mirror sides; the configuration object all
/// pressure operations consume. All lengths are in units of 1/k_P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabSystem {
    ds: f64,
    mirror1: Mirror,
    mirror2: Mirror,
}

impl SlabSystem {
    pub fn new(ds: f64, mirror1: Mirror, mirror2: Mirror) -> Result<Self, PressureError> {
        if ds <= 0.0 || !ds.is_finite() {
            return Err(PressureError::InvalidThickness(ds));
        }
        for m in [mirror1, mirror2] {
            if let Mirror::Perfect { gap } = m {
                if gap < 0.0 || !gap.is_finite() {
                    return Err(PressureError::InvalidGap(gap));
                }
            }
        }
        Ok(SlabSystem {
            ds,
            mirror1,
            mirror2,
        })
    }

    /// Free-standing slab (no mirrors).
    pub fn free(ds: f64) -> Result<Self, PressureError> {
        Self::new(ds, Mirror::None, Mirror::None)
    }

    /// Slab sandwiched between perfect mirrors at zero gaps.
    pub fn sandwiched(ds: f64) -> Result<Self, PressureError> {
        Self::new(
            ds,
            Mirror::Perfect { gap: 0.0 },
            Mirror::Perfect { gap: 0.0 },
        )
    }

    /// Slab centered in an ideal cavity: perfect mirrors at equal gaps.
    pub fn cavity(ds: f64, gap: f64) -> Result<Self, PressureError> {
        Self::new(
            ds,
            Mirror::Perfect { gap },
            Mirror::Perfect { gap },
        )
    }

    /// Build from explicit gaps, treating an infinite gap as an absent
    /// mirror (nothing to reflect from at infinite distance).
    pub fn from_gaps(ds: f64, gap1: f64, gap2: f64) -> Result<Self, PressureError> {
        let side = |gap: f64| -> Mirror {
            if gap.is_infinite() {
                Mirror::None
            } else {
                Mirror::Perfect { gap }
            }
        };
        Self::new(ds, side(gap1), side(gap2))
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn mirror1(&self) -> Mirror {
        self.mirror1
    }

    pub fn mirror2(&self) -> Mirror {
        self.mirror2
    }

    /// True iff both sides carry the same mirror at the same gap.
    pub fn symmetric(&self) -> bool {
        self.mirror1 == self.mirror2
    }

    /// The same system with the two sides exchanged.
    pub fn swapped(&self) -> SlabSystem {
        SlabSystem {
            ds: self.ds,
            mirror1: self.mirror2,
            mirror2: self.mirror1,
        }
    }
}

/// Reflection amplitudes r_{s-}, r_{s+} seen from inside the slab, each
/// combining the vacuum-slab interface with the mirror behind it.
#[derive(Debug, Clone, Copy)]
pub struct InnerReflection {
    pub r_minus: f64,
    pub r_plus: f64,
}

pub fn inner_reflections(
    q: Polarization,
    x: medium::ReducedFrequency,
    u: medium::ReducedWavevector,
    sys: &SlabSystem,
) -> Result<InnerReflection, PressureError> {
    let w = medium::perp_wavevectors(x, u)?;
    let rho = medium::rho(q, x, u)?;
    let side = |mirror: Mirror| -> f64 {
        let a = match mirror {
            Mirror::None => 0.0,
            Mirror::Perfect { gap } => {
                medium::mirror_reflection(MirrorModel::Perfect, q) * (-2.0 * w.kappa * gap).exp()
            }
        };
        (-rho + a) / (1.0 - rho * a)
    };
    Ok(InnerReflection {
        r_minus: side(sys.mirror1),
        r_plus: side(sys.mirror2),
    })
}

const TWO_PI_SQ: f64 = 19.739208802178716; // 2 pi^2
const PI_SQ: f64 = 9.869604401089358;

/// Lateral decay scale of the exp(-2 kappa_s ds) factor: solves
/// 2 ds (sqrt(1 + u^2) - 1) = 1.
fn wavevector_scale(ds: f64) -> f64 {
    ((1.0 / ds) * (1.0 + 0.25 / ds)).sqrt()
}

/// Outer (frequency) and inner (wavevector) scalings for the Lifshitz
/// double integrals.
fn axis_scales(ds: f64) -> (f64, f64) {
    let su = wavevector_scale(ds);
    // For thin slabs the frequency decay comes from the power-law rho
    // factors on an O(1) scale, not from the exponential.
    let sx = su.min(2.0);
    (sx, su)
}

/// exp(-2 ds (kappa_s - 1)), the slab exponential with the overall
/// exp(-2 ds) removed; kappa_s - 1 is formed without cancellation.
#[inline]
fn shifted_slab_exponential(ds: f64, kappa: f64, kappa_s: f64) -> f64 {
    let km1 = kappa * kappa / (kappa_s + 1.0);
    (-2.0 * ds * km1).exp()
}

fn lifshitz_prefactor(ds: f64, sx: f64, su: f64, integral: &IntegralResult) -> PressureValue {
    let scale = (-2.0 * ds).exp() * sx * su / TWO_PI_SQ;
    PressureValue {
        value: -scale * integral.value,
        error_estimate: scale * integral.error_estimate,
        formula: Formula::LifshitzFree,
    }
}

/// Pressure on a free-standing slab, Lifshitz double integral over
/// imaginary frequency and transverse wavevector.
///
/// Below ds = 1e-3 the integral is stiff and the quasistatic value
/// -C/ds^3 is reported instead, with an O(ds) error bound attached.
pub fn pressure_free(ds: f64) -> Result<PressureValue, PressureError> {
    pressure_free_with(ds, &QuadratureSpec::default())
}

pub fn pressure_free_with(
    ds: f64,
    spec: &QuadratureSpec,
) -> Result<PressureValue, PressureError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(PressureError::InvalidThickness(ds));
    }
    if ds < 1e-3 {
        let nr = pressure_nonretarded(ds)?;
        return Ok(PressureValue {
            value: nr.value,
            error_estimate: nr.value.abs() * ds + nr.error_estimate,
            formula: Formula::Nonretarded,
        });
    }
    let (sx, su) = axis_scales(ds);
    let spec2 = QuadratureSpec {
        substitution: Substitution::Exponential,
        ..*spec
    };
    let integral = quadrature::integrate_2d_semi_infinite(
        |a, b| {
            let (x, u) = (a * sx, b * su);
            let w = raw::perp(x, u);
            let shifted = shifted_slab_exponential(ds, w.kappa, w.kappa_s);
            let e_s = (-2.0 * ds * w.kappa_s).exp();
            let mut sum = 0.0;
            for rho in [
                raw::rho_p(x, w.kappa, w.kappa_s),
                raw::rho_s(w.kappa, w.kappa_s),
            ] {
                let r2 = rho * rho;
                sum += r2 * shifted / (1.0 - r2 * e_s);
            }
            u * w.kappa_s * sum
        },
        &spec2,
    )?;
    let mut out = lifshitz_prefactor(ds, sx, su, &integral);
    out.formula = Formula::LifshitzFree;
    Ok(out)
}

/// Same pressure through the (x, p) parameterization with p in (1, inf);
/// the independent oracle for `pressure_free`.
pub fn pressure_free_pform(ds: f64) -> Result<PressureValue, PressureError> {
    pressure_free_pform_with(ds, &QuadratureSpec::default())
}

pub fn pressure_free_pform_with(
    ds: f64,
    spec: &QuadratureSpec,
) -> Result<PressureValue, PressureError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(PressureError::InvalidThickness(ds));
    }
    let sx = axis_scales(ds).0;
    let spec2 = QuadratureSpec {
        substitution: Substitution::Exponential,
        ..*spec
    };
    let integral = quadrature::integrate_2d_semi_infinite(
        |a, b| {
            let x = a * sx;
            let x2 = x * x;
            let wt = (1.0 + x2).sqrt();
            // Inner variable scaled so the exponential rate is exactly one:
            // p = 1 + b / (2 ds wt).
            let sp = 1.0 / (2.0 * ds * wt);
            let p = 1.0 + b * sp;
            let s = (p * p - 1.0 + x2 / (1.0 + x2)).sqrt();
            let rho_p = ((1.0 + x2) * s - x2 * p) / ((1.0 + x2) * s + x2 * p);
            let rho_s = (s - p) / (s + p);
            // exp(-2 p wt ds) with exp(-2 ds) removed.
            let shifted = (-2.0 * ds * (wt - 1.0) - b).exp();
            let e_full = shifted * (-2.0 * ds).exp();
            let mut sum = 0.0;
            for rho in [rho_p, rho_s] {
                let r2 = rho * rho;
                sum += r2 * shifted / (1.0 - r2 * e_full);
            }
            wt * wt * wt * p * p * sum * sp
        },
        &spec2,
    )?;
    let scale = (-2.0 * ds).exp() * sx / TWO_PI_SQ;
    Ok(PressureValue {
        value: -scale * integral.value,
        error_estimate: scale * integral.error_estimate,
        formula: Formula::LifshitzFree,
    })
}

/// The quasistatic constant C in F_nr = -C hbar w_P / d^3, evaluated once
/// and cached:
/// C = (1/16 pi^2) int_0^inf dx int_0^inf dt t^2 e^{-t} / ((2x^2+1)^2 - e^{-t}).
pub fn pressure_nonretarded_coefficient() -> f64 {
    nonretarded_coefficient().0
}

fn nonretarded_coefficient() -> (f64, f64) {
    static CACHE: OnceLock<(f64, f64)> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let spec = QuadratureSpec {
            rel_tol: 1e-10,
            substitution: Substitution::Exponential,
            ..Default::default()
        };
        let integral = quadrature::integrate_2d_semi_infinite(
            |x, t| {
                let d = 2.0 * x * x + 1.0;
                t * t * (-t).exp() / (d * d - (-t).exp())
            },
            &spec,
        )
        .expect("the quasistatic integrand is smooth and integrable");
        (
            integral.value / (16.0 * PI_SQ),
            integral.error_estimate / (16.0 * PI_SQ),
        )
    })
}

/// Quasistatic pressure F_nr = -C/ds^3 in reduced units.
pub fn pressure_nonretarded(ds: f64) -> Result<PressureValue, PressureError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(PressureError::InvalidThickness(ds));
    }
    let (c, c_err) = nonretarded_coefficient();
    let ds3 = ds * ds * ds;
    Ok(PressureValue {
        value: -c / ds3,
        error_estimate: c_err / ds3,
        formula: Formula::Nonretarded,
    })
}

/// Ideal Casimir pressure F_C = -pi^2/(240 ds^4) in reduced units.
pub fn casimir_pressure(ds: f64) -> f64 {
    -PI_SQ / (240.0 * ds.powi(4))
}

/// Leading thick-slab behaviour F^ = -(1/4) e^{-2 ds} / sqrt((pi ds)^3),
/// valid for ds well above one.
pub fn pressure_thick_asymptotic(ds: f64) -> Result<PressureValue, PressureError> {
    if !ds.is_finite() {
        return Err(PressureError::InvalidThickness(ds));
    }
    if ds <= 1.0 {
        return Err(PressureError::ThicknessOutOfRange(ds));
    }
    let value = -0.25 * (-2.0 * ds).exp() / (std::f64::consts::PI * ds).powf(1.5);
    Ok(PressureValue {
        value,
        // Leading-order formula; the first neglected correction is O(1/ds).
        error_estimate: value.abs() / ds,
        formula: Formula::ThickAsymptotic,
    })
}

/// Slab between perfect mirrors at zero gap, reduced to a single integral
/// over y = sqrt(eps_s) xi / w_P in (1, inf):
/// F^ = -(1/pi^2) int_1^inf dy y^2 sqrt(y^2-1) e^{-2 y ds} / (1 - e^{-2 y ds}).
pub fn pressure_mirrors_integral(ds: f64) -> Result<PressureValue, PressureError> {
    pressure_mirrors_integral_with(ds, &QuadratureSpec::default())
}

pub fn pressure_mirrors_integral_with(
    ds: f64,
    spec: &QuadratureSpec,
) -> Result<PressureValue, PressureError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(PressureError::InvalidThickness(ds));
    }
    let st = 1.0 / (2.0 * ds);
    let spec2 = QuadratureSpec {
        substitution: Substitution::Exponential,
        ..*spec
    };
    let integral = quadrature::integrate_semi_infinite(
        |b| {
            let t = b * st;
            let y = 1.0 + t;
            // 1 - e^{-2 y ds} without cancellation for thin slabs.
            let denom = -(-2.0 * y * ds).exp_m1();
            y * y * (t * (t + 2.0)).sqrt() * (-b).exp() / denom
        },
        &spec2,
    )?;
    let scale = (-2.0 * ds).exp() * st / PI_SQ;
    Ok(PressureValue {
        value: -scale * integral.value,
        error_estimate: scale * integral.error_estimate,
        formula: Formula::MirrorsIntegral,
    })
}

/// Same quantity through the Bessel-function series
/// F^ = -(1/pi^2) sum_n [K1(a_n)/a_n + 3 K2(a_n)/a_n^2], a_n = 2 n ds,
/// where the bracket is the closed form of d^2/da^2 [K1(a)/a].
pub fn pressure_mirrors_bessel(ds: f64) -> Result<PressureValue, PressureError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(PressureError::InvalidThickness(ds));
    }
    let series = quadrature::sum_series(
        |n| {
            let a = 2.0 * n as f64 * ds;
            match (quadrature::bessel_k1(a), quadrature::bessel_k2(a)) {
                (Ok(k1), Ok(k2)) => k1 / a + 3.0 * k2 / (a * a),
                _ => f64::NAN,
            }
        },
        1e-12,
    )?;
    Ok(PressureValue {
        value: -series.value / PI_SQ,
        error_estimate: (series.error_estimate + 1e-13 * series.value.abs()) / PI_SQ,
        formula: Formula::MirrorsBessel,
    })
}

/// Thin-slab expansion of the mirror sandwich,
/// F^ = F_C [1 - (5/pi^2) ds^2], with the O(ds^4) remainder as the bound.
pub fn pressure_mirrors_thin(ds: f64) -> Result<PressureValue, PressureError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(PressureError::InvalidThickness(ds));
    }
    let fc = casimir_pressure(ds);
    Ok(PressureValue {
        value: fc * (1.0 - 5.0 / PI_SQ * ds * ds),
        error_estimate: fc.abs() * ds.powi(4),
        formula: Formula::ThinExpansion,
    })
}

/// Per-polarization inner-reflection factors of the cavity integrand in
/// the cancellation-free variables g = 1 -/+ rho and b_j = 1 - e^{-2 kappa d_j}.
///
/// Returns (product of (rho - R_j E_j), product of (1 - rho R_j E_j)).
#[inline]
fn side_products(
    q: Polarization,
    rho: f64,
    g: f64,
    kappa: f64,
    mirrors: [Mirror; 2],
) -> (f64, f64) {
    let mut num = 1.0;
    let mut den = 1.0;
    for m in mirrors {
        match m {
            Mirror::None => {
                num *= rho;
            }
            Mirror::Perfect { gap } => {
                let b = -(-2.0 * kappa * gap).exp_m1();
                num *= match q {
                    Polarization::P => b - g,
                    Polarization::S => g - b,
                };
                den *= g + b - g * b;
            }
        }
    }
    (num, den)
}

/// Pressure on the slab inside the cavity, evaluated through the single
/// rational integrand of the combined-denominator form.
pub fn pressure_cavity(sys: &SlabSystem) -> Result<PressureValue, PressureError> {
    pressure_cavity_with(sys, &QuadratureSpec::default())
}

pub fn pressure_cavity_with(
    sys: &SlabSystem,
    spec: &QuadratureSpec,
) -> Result<PressureValue, PressureError> {
    let ds = sys.ds;
    let (sx, su) = axis_scales(ds);
    let mirrors = [sys.mirror1, sys.mirror2];
    let spec2 = QuadratureSpec {
        substitution: Substitution::Exponential,
        ..*spec
    };
    let integral = quadrature::integrate_2d_semi_infinite(
        |a, b| {
            let (x, u) = (a * sx, b * su);
            let w = raw::perp(x, u);
            let shifted = shifted_slab_exponential(ds, w.kappa, w.kappa_s);
            let e_s = (-2.0 * ds * w.kappa_s).exp();
            let mut sum = 0.0;
            for q in Polarization::BOTH {
                let (rho, g) = match q {
                    Polarization::P => {
                        let g = raw::one_minus_rho_p(x, w.kappa, w.kappa_s);
                        (1.0 - g, g)
                    }
                    Polarization::S => {
                        let g = raw::one_plus_rho_s(w.kappa, w.kappa_s);
                        (g - 1.0, g)
                    }
                };
                let (num, den) = side_products(q, rho, g, w.kappa, mirrors);
                sum += num * shifted / (den - e_s * num);
            }
            u * w.kappa_s * sum
        },
        &spec2,
    )?;
    let mut out = lifshitz_prefactor(ds, sx, su, &integral);
    out.formula = Formula::LifshitzCavity;
    Ok(out)
}

/// Cross-check route for `pressure_cavity`: composes the two inner
/// reflection amplitudes explicitly instead of using the combined
/// denominator. Kept as an independent formulation for validation.
pub fn pressure_cavity_reflected(
    sys: &SlabSystem,
    spec: &QuadratureSpec,
) -> Result<PressureValue, PressureError> {
    let ds = sys.ds;
    let (sx, su) = axis_scales(ds);
    let mirrors = [sys.mirror1, sys.mirror2];
    let spec2 = QuadratureSpec {
        substitution: Substitution::Exponential,
        ..*spec
    };
    let integral = quadrature::integrate_2d_semi_infinite(
        |a, b| {
            let (x, u) = (a * sx, b * su);
            let w = raw::perp(x, u);
            let shifted = shifted_slab_exponential(ds, w.kappa, w.kappa_s);
            let e_s = (-2.0 * ds * w.kappa_s).exp();
            let mut sum = 0.0;
            for q in Polarization::BOTH {
                let rho = match q {
                    Polarization::P => raw::rho_p(x, w.kappa, w.kappa_s),
                    Polarization::S => raw::rho_s(w.kappa, w.kappa_s),
                };
                let mut rr = 1.0;
                for m in mirrors {
                    let refl = match m {
                        Mirror::None => 0.0,
                        Mirror::Perfect { gap } => {
                            medium::mirror_reflection(MirrorModel::Perfect, q)
                                * (-2.0 * w.kappa * gap).exp()
                        }
                    };
                    rr *= (-rho + refl) / (1.0 - rho * refl);
                }
                sum += rr * shifted / (1.0 - rr * e_s);
            }
            u * w.kappa_s * sum
        },
        &spec2,
    )?;
    let mut out = lifshitz_prefactor(ds, sx, su, &integral);
    out.formula = Formula::LifshitzCavity;
    Ok(out)
}

/// Slab-mirror interaction force F' = f_2 - f_1; vanishes by symmetry when
/// the slab sits in the center of a symmetric cavity.
pub fn interaction_force(sys: &SlabSystem) -> Result<PressureValue, PressureError> {
    interaction_force_with(sys, &QuadratureSpec::default())
}

pub fn interaction_force_with(
    sys: &SlabSystem,
    spec: &QuadratureSpec,
) -> Result<PressureValue, PressureError> {
    let ds = sys.ds;
    let (d1, d2) = match (sys.mirror1, sys.mirror2) {
        (Mirror::Perfect { gap: d1 }, Mirror::Perfect { gap: d2 }) if d1 > 0.0 && d2 > 0.0 => {
            (d1, d2)
        }
        _ => return Err(PressureError::MirrorsRequired),
    };
    let dmin = d1.min(d2);
    let su = wavevector_scale(dmin);
    let sx = su.min(2.0);
    let mirrors = [sys.mirror1, sys.mirror2];
    let spec2 = QuadratureSpec {
        substitution: Substitution::Exponential,
        ..*spec
    };
    let integral = quadrature::integrate_2d_semi_infinite(
        |a, b| {
            let (x, u) = (a * sx, b * su);
            let w = raw::perp(x, u);
            let e_s = (-2.0 * ds * w.kappa_s).exp();
            let one_minus_es = -(-2.0 * ds * w.kappa_s).exp_m1();
            let mut sum = 0.0;
            for q in Polarization::BOTH {
                let (rho, g) = match q {
                    Polarization::P => {
                        let g = raw::one_minus_rho_p(x, w.kappa, w.kappa_s);
                        (1.0 - g, g)
                    }
                    Polarization::S => {
                        let g = raw::one_plus_rho_s(w.kappa, w.kappa_s);
                        (g - 1.0, g)
                    }
                };
                let refl = medium::mirror_reflection(MirrorModel::Perfect, q);
                let a2 = refl * (-2.0 * w.kappa * d2).exp();
                let a1 = refl * (-2.0 * w.kappa * d1).exp();
                let (num_prod, den_prod) = side_products(q, rho, g, w.kappa, mirrors);
                let dtilde = den_prod - e_s * num_prod;
                sum += rho * one_minus_es * (a2 - a1) / dtilde;
            }
            u * w.kappa * sum
        },
        &spec2,
    )?;
    let scale = sx * su / TWO_PI_SQ;
    Ok(PressureValue {
        value: -scale * integral.value,
        error_estimate: scale * integral.error_estimate,
        formula: Formula::LifshitzCavity,
    })
}

/// Interaction-force oracle assembled from whole-slab Fresnel coefficients:
/// the pressures f_1, f_2 on the two vacuum gap layers, each computed from
/// the reflection amplitudes bounding that gap.
pub fn interaction_force_composed(
    sys: &SlabSystem,
    spec: &QuadratureSpec,
) -> Result<PressureValue, PressureError> {
    let ds = sys.ds;
    let (d1, d2) = match (sys.mirror1, sys.mirror2) {
        (Mirror::Perfect { gap: d1 }, Mirror::Perfect { gap: d2 }) if d1 > 0.0 && d2 > 0.0 => {
            (d1, d2)
        }
        _ => return Err(PressureError::MirrorsRequired),
    };
    let dmin = d1.min(d2);
    let su = wavevector_scale(dmin);
    let sx = su.min(2.0);
    let spec2 = QuadratureSpec {
        substitution: Substitution::Exponential,
        ..*spec
    };
    // f_j for the gap layer of width d_gap: the far side combines the slab
    // Fresnel pair (r, t) with the opposite mirror at distance d_far.
    let gap_pressure = |d_gap: f64, d_far: f64| -> Result<IntegralResult, PressureError> {
        quadrature::integrate_2d_semi_infinite(
            |a, b| {
                let (x, u) = (a * sx, b * su);
                let w = raw::perp(x, u);
                let e_gap = (-2.0 * w.kappa * d_gap).exp();
                let e_far = (-2.0 * w.kappa * d_far).exp();
                let em = (-w.kappa_s * ds).exp();
                let e2 = em * em;
                let mut sum = 0.0;
                for q in Polarization::BOTH {
                    let rho = match q {
                        Polarization::P => raw::rho_p(x, w.kappa, w.kappa_s),
                        Polarization::S => raw::rho_s(w.kappa, w.kappa_s),
                    };
                    let refl = medium::mirror_reflection(MirrorModel::Perfect, q);
                    let denom = 1.0 - rho * rho * e2;
                    let r_slab = rho * (1.0 - e2) / denom;
                    let t_slab = (1.0 - rho * rho) * em / denom;
                    let r_far = r_slab
                        + t_slab * t_slab * refl * e_far / (1.0 - r_slab * refl * e_far);
                    let rr = refl * r_far * e_gap;
                    sum += rr / (1.0 - rr);
                }
                u * w.kappa * sum
            },
            &spec2,
        )
        .map_err(PressureError::from)
    };
    let f1 = gap_pressure(d1, d2)?;
    let f2 = gap_pressure(d2, d1)?;
    let scale = sx * su / TWO_PI_SQ;
    Ok(PressureValue {
        value: -scale * (f2.value - f1.value),
        error_estimate: scale * (f2.error_estimate + f1.error_estimate),
        formula: Formula::LifshitzCavity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonretarded_coefficient_matches_quasistatic_constant() {
        let c = pressure_nonretarded_coefficient();
        assert!((c - 0.00781).abs() < 1e-5, "C = {c}");
    }

    #[test]
    fn nonretarded_to_casimir_ratio() {
        // F_nr / F_C = (240/pi^2) C ds, i.e. 0.19 k_P ds, i.e. 1.19 ds/lambda_P.
        let c = pressure_nonretarded_coefficient();
        let slope = 240.0 / PI_SQ * c;
        assert!((slope - 0.19).abs() < 0.19 * 0.01, "slope {slope}");
        let per_lambda = slope * 2.0 * std::f64::consts::PI;
        assert!((per_lambda - 1.19).abs() < 1.19 * 0.01, "{per_lambda}");

        let ds = 0.37;
        let fnr = pressure_nonretarded(ds).unwrap().value;
        assert!((fnr / casimir_pressure(ds) - slope * ds).abs() < 1e-12);
    }

    #[test]
    fn thick_asymptote_closed_form_and_range() {
        let ds = 10.0;
        let expected = -0.25 * (-20.0f64).exp() / (10.0 * std::f64::consts::PI).powf(1.5);
        let p = pressure_thick_asymptotic(ds).unwrap();
        assert_eq!(p.value, expected);
        assert_eq!(p.formula, Formula::ThickAsymptotic);

        assert!(matches!(
            pressure_thick_asymptotic(1.0),
            Err(PressureError::ThicknessOutOfRange(_))
        ));
        assert!(matches!(
            pressure_thick_asymptotic(0.5),
            Err(PressureError::ThicknessOutOfRange(_))
        ));
    }

    #[test]
    fn mirrors_series_approaches_casimir_for_thin_slabs() {
        let ds = 0.01;
        let p = pressure_mirrors_bessel(ds).unwrap();
        let ratio = p.value / casimir_pressure(ds);
        let expected = 1.0 - 5.0 / PI_SQ * ds * ds;
        assert!((ratio - expected).abs() < 1e-6, "ratio {ratio}");
    }

    #[test]
    fn mirrors_integral_equals_series_at_unit_thickness() {
        let a = pressure_mirrors_integral(1.0).unwrap();
        let b = pressure_mirrors_bessel(1.0).unwrap();
        assert!(
            (a.value - b.value).abs() < 1e-8 * b.value.abs(),
            "{} vs {}",
            a.value,
            b.value
        );
    }

    #[test]
    fn mirrors_thick_limit_follows_large_argument_expansion() {
        // For 2 n ds >> 1 only the n = 1 term survives and
        // F^ ~ -(1/pi^2) e^{-a} sqrt(pi/2a^3) (1 + 27/8a + 705/128a^2),
        // a = 2 ds, from the K1/K2 asymptotic series. The positive 27/8a
        // correction puts the value below (more negative than) the bare
        // free-slab asymptote.
        let ds = 5.0;
        let p = pressure_mirrors_bessel(ds).unwrap();
        assert!(p.value < 0.0);
        let a = 2.0 * ds;
        let expansion = -(1.0 / PI_SQ)
            * (-a).exp()
            * (std::f64::consts::PI / (2.0 * a * a * a)).sqrt()
            * (1.0 + 27.0 / (8.0 * a) + 705.0 / (128.0 * a * a));
        assert!(
            (p.value - expansion).abs() < 0.005 * expansion.abs(),
            "{} vs expansion {}",
            p.value,
            expansion
        );
        let naive = pressure_thick_asymptotic(ds).unwrap();
        assert!(p.value < naive.value);
    }

    #[test]
    fn free_pressure_is_negative_and_matches_pform() {
        let ds = 1.0;
        let direct = pressure_free(ds).unwrap();
        let pform = pressure_free_pform(ds).unwrap();
        assert!(direct.value < 0.0);
        assert!(
            (direct.value - pform.value).abs() < 1e-6 * direct.value.abs(),
            "{} vs {}",
            direct.value,
            pform.value
        );
    }

    #[test]
    fn free_pressure_thin_limit_reports_quasistatic_value() {
        let ds = 5e-4;
        let p = pressure_free(ds).unwrap();
        assert_eq!(p.formula, Formula::Nonretarded);
        let c = pressure_nonretarded_coefficient();
        assert!((p.value + c / ds.powi(3)).abs() < 1e-9 * (c / ds.powi(3)));
        assert!(p.error_estimate >= p.value.abs() * ds);
    }

    #[test]
    fn cavity_without_mirrors_reduces_to_free_slab() {
        let ds = 0.5;
        let sys = SlabSystem::free(ds).unwrap();
        let cavity = pressure_cavity(&sys).unwrap();
        let free = pressure_free(ds).unwrap();
        assert!(
            (cavity.value - free.value).abs() < 1e-9 * free.value.abs(),
            "{} vs {}",
            cavity.value,
            free.value
        );
    }

    #[test]
    fn cavity_combined_denominator_matches_composed_reflections() {
        let spec = QuadratureSpec::default();
        for sys in [
            SlabSystem::cavity(0.3, 0.4).unwrap(),
            SlabSystem::from_gaps(0.8, 0.2, f64::INFINITY).unwrap(),
            SlabSystem::sandwiched(0.5).unwrap(),
        ] {
            let a = pressure_cavity_with(&sys, &spec).unwrap();
            let b = pressure_cavity_reflected(&sys, &spec).unwrap();
            assert!(
                (a.value - b.value).abs() < 1e-8 * a.value.abs(),
                "{sys:?}: {} vs {}",
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn interaction_force_vanishes_by_symmetry_and_flips_sign() {
        let sys = SlabSystem::cavity(0.5, 0.7).unwrap();
        let f = interaction_force(&sys).unwrap();
        assert!(f.value.abs() < 1e-10, "symmetric F' = {}", f.value);

        let sys = SlabSystem::from_gaps(0.5, 0.5, 1.0).unwrap();
        let fwd = interaction_force(&sys).unwrap();
        let rev = interaction_force(&sys.swapped()).unwrap();
        assert!(fwd.value != 0.0);
        assert_eq!(fwd.value, -rev.value);

        let free_side = SlabSystem::from_gaps(0.5, 0.5, f64::INFINITY).unwrap();
        assert!(matches!(
            interaction_force(&free_side),
            Err(PressureError::MirrorsRequired)
        ));
    }

    #[test]
    fn system_validation() {
        assert!(SlabSystem::free(0.0).is_err());
        assert!(SlabSystem::free(f64::NAN).is_err());
        assert!(SlabSystem::cavity(1.0, -0.1).is_err());
        let sys = SlabSystem::from_gaps(1.0, f64::INFINITY, 2.0).unwrap();
        assert_eq!(sys.mirror1(), Mirror::None);
        assert_eq!(sys.mirror2(), Mirror::Perfect { gap: 2.0 });
        assert!(!sys.symmetric());
        assert!(SlabSystem::cavity(1.0, 0.3).unwrap().symmetric());
    }

    #[test]
    fn reduced_units_are_scale_free() {
        // Two physical systems with different plasma frequencies but the
        // same reduced thickness k_P d_s map to bit-identical pressures.
        let c_light = 299_792_458.0;
        let cases = [(1.0e16, 3.0e-8), (2.5e15, 1.2e-7)];
        let reduced: Vec<f64> = cases.iter().map(|(wp, d)| wp / c_light * d).collect();
        assert!((reduced[0] - reduced[1]).abs() < 1e-12 * reduced[0]);
        let p0 = pressure_free(reduced[0]).unwrap();
        let p1 = pressure_free(reduced[1]).unwrap();
        assert_eq!(p0.value, p1.value);
    }
}
