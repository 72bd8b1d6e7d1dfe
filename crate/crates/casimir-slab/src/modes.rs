//! Real-frequency modal analysis: surface-plasmon dispersion relations,
//! branch tracking, and the mode-sum pressure obtained by differentiating
//! mode frequencies with respect to the slab thickness.
//!
//! On the real axis the lossless plasma permittivity is
//! eps(w) = 1 - 1/w^2 and bound modes live in the evanescent region w < u,
//! where alpha = sqrt(u^2 - w^2) and alpha_s = sqrt(u^2 - w^2 + 1) are both
//! real. The mode condition r_s^q e^{-alpha_s ds} = +/-1 is solved through
//! the pole-free polynomial form
//!
//!   G = (-N + R E_d M) e^{-alpha_s ds} - nu (M - R E_d N),
//!
//! with N = eps alpha - alpha_s, M = eps alpha + alpha_s and
//! E_d = e^{-2 alpha d}. Multiplying through by M (1 - rho R E_d) removes
//! the poles of rho and r_s without changing the root set, so a plain sign
//! scan cannot lose a root against an adjacent pole. Candidates are still
//! verified against the raw residual to reject the measure-zero spurious
//! zeros the multiplication can introduce in the cavity case.

use crate::medium::{mirror_reflection, MirrorModel, Polarization, Symmetry};
use crate::pressure::Formula;
use crate::quadrature::{self, QuadratureError, QuadratureSpec, Substitution};
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModesError {
    #[error("mode frequencies require 0 < w < u (evanescent region), got w = {w}, u = {u}")]
    NotEvanescent { w: f64, u: f64 },
    #[error("wavevector must be positive and finite, got {0}")]
    InvalidWavevector(f64),
    #[error("slab thickness must be positive and finite, got {0}")]
    InvalidThickness(f64),
    #[error("mirror gap must be >= 0, got {0}")]
    InvalidGap(f64),
    #[error("u grid must be sorted ascending, positive and non-empty")]
    InvalidGrid,
    #[error("branch tracking lost continuity at u = {u}: w jumped from {w_prev} to {w}")]
    BranchJump { u: f64, w_prev: f64, w: f64 },
    #[error("photonic mode index must be >= 1")]
    InvalidModeIndex,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Dimensionless real frequency w = omega/omega_P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealFrequency(f64);

impl RealFrequency {
    pub fn new(w: f64) -> Result<Self, ModesError> {
        if !w.is_finite() || w < 0.0 {
            return Err(ModesError::InvalidWavevector(w));
        }
        Ok(RealFrequency(w))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// One solved dispersion point.
#[derive(Debug, Clone, Copy)]
pub struct BranchSample {
    pub u: f64,
    pub w: f64,
}

/// A sampled dispersion curve w(u) for one (q, nu) branch.
#[derive(Debug, Clone)]
pub struct ModeBranch {
    pub q: Polarization,
    pub nu: Symmetry,
    pub ds: f64,
    /// Mirror gap; `None` is the free-standing slab.
    pub gap: Option<f64>,
    pub samples: Vec<BranchSample>,
    /// Grid points where no root exists (branch cut off), in grid order.
    pub absent: Vec<f64>,
    /// Sign changes beyond the retained root, summed over the grid;
    /// nonzero values flag extra cavity branches worth inspecting.
    pub extra_sign_changes: usize,
}

/// Contribution of a single (q, nu) branch to the mode-sum pressure.
#[derive(Debug, Clone, Copy)]
pub struct BranchPressure {
    pub q: Polarization,
    pub nu: Symmetry,
    pub value: f64,
    pub error_estimate: f64,
}

/// Mode-sum pressure split per branch.
#[derive(Debug, Clone)]
pub struct ModeSumPressure {
    pub branches: Vec<BranchPressure>,
    pub total: f64,
    /// Truncation plus quadrature error bound on the total.
    pub error_estimate: f64,
    pub formula: Formula,
}

// ---------------------------------------------------------------------------
// Forward-mode scalar carrying d/dw and d/dds alongside the value, used for
// implicit differentiation of the dispersion condition at a solved root.
// ---------------------------------------------------------------------------

trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(x: f64) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
}

impl Scalar for f64 {
    fn lift(x: f64) -> Self {
        x
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

#[derive(Debug, Clone, Copy)]
struct Dual2 {
    v: f64,
    dw: f64,
    dd: f64,
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual2 {
            v: self.v + o.v,
            dw: self.dw + o.dw,
            dd: self.dd + o.dd,
        }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual2 {
            v: self.v - o.v,
            dw: self.dw - o.dw,
            dd: self.dd - o.dd,
        }
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual2 {
            v: self.v * o.v,
            dw: self.v * o.dw + self.dw * o.v,
            dd: self.v * o.dd + self.dd * o.v,
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = 1.0 / o.v;
        let v = self.v * inv;
        Dual2 {
            v,
            dw: (self.dw - v * o.dw) * inv,
            dd: (self.dd - v * o.dd) * inv,
        }
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Dual2 {
            v: -self.v,
            dw: -self.dw,
            dd: -self.dd,
        }
    }
}

impl Scalar for Dual2 {
    fn lift(x: f64) -> Self {
        Dual2 {
            v: x,
            dw: 0.0,
            dd: 0.0,
        }
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        Dual2 {
            v: e,
            dw: e * self.dw,
            dd: e * self.dd,
        }
    }
    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        let half = 0.5 / r;
        Dual2 {
            v: r,
            dw: half * self.dw,
            dd: half * self.dd,
        }
    }
}

/// The pole-free dispersion function G; zero exactly at the modes.
fn dispersion_poly<T: Scalar>(
    q: Polarization,
    nu: Symmetry,
    w: T,
    u: f64,
    ds: T,
    gap: Option<f64>,
) -> T {
    let one = T::lift(1.0);
    let u2 = T::lift(u * u);
    let eps = one - one / (w * w);
    let alpha2 = u2 - w * w;
    let alpha = alpha2.sqrt();
    let alpha_s = (alpha2 + one).sqrt();
    let (n, m) = match q {
        Polarization::P => (eps * alpha - alpha_s, eps * alpha + alpha_s),
        Polarization::S => (alpha - alpha_s, alpha + alpha_s),
    };
    let e_s = (-alpha_s * ds).exp();
    let nu_s = T::lift(nu.sign());
    match gap {
        None => -n * e_s - nu_s * m,
        Some(d) => {
            let r = T::lift(mirror_reflection(MirrorModel::Perfect, q));
            let e_d = (-(alpha + alpha) * T::lift(d)).exp();
            (-n + r * e_d * m) * e_s - nu_s * (m - r * e_d * n)
        }
    }
}

fn validate_point(w: f64, u: f64, ds: f64, gap: Option<f64>) -> Result<(), ModesError> {
    if u <= 0.0 || !u.is_finite() {
        return Err(ModesError::InvalidWavevector(u));
    }
    if ds <= 0.0 || !ds.is_finite() {
        return Err(ModesError::InvalidThickness(ds));
    }
    if let Some(d) = gap {
        if d < 0.0 || !d.is_finite() {
            return Err(ModesError::InvalidGap(d));
        }
    }
    if w <= 0.0 || w >= u || w.is_nan() {
        return Err(ModesError::NotEvanescent { w, u });
    }
    Ok(())
}

/// The raw mode residual r_s^q e^{-alpha_s ds} - nu, real in the evanescent
/// region; vanishes exactly at a mode. `gap = None` is the free slab.
pub fn dispersion_residual(
    q: Polarization,
    nu: Symmetry,
    w: f64,
    u: f64,
    ds: f64,
    gap: Option<f64>,
) -> Result<f64, ModesError> {
    validate_point(w, u, ds, gap)?;
    let eps = 1.0 - 1.0 / (w * w);
    let alpha = (u * u - w * w).sqrt();
    let alpha_s = (u * u - w * w + 1.0).sqrt();
    let rho = match q {
        Polarization::P => (eps * alpha - alpha_s) / (eps * alpha + alpha_s),
        Polarization::S => (alpha - alpha_s) / (alpha + alpha_s),
    };
    let r_s = match gap {
        None => -rho,
        Some(d) => {
            let r = mirror_reflection(MirrorModel::Perfect, q);
            let e_d = (-2.0 * alpha * d).exp();
            (-rho + r * e_d) / (1.0 - rho * r * e_d)
        }
    };
    Ok(r_s * (-alpha_s * ds).exp() - nu.sign())
}

/// Nonretarded surface-plasmon frequencies of the free slab,
/// w = (1/sqrt 2) sqrt(1 +/- e^{-u ds}).
pub fn sp_freq_nonretarded(u: f64, ds: f64, nu: Symmetry) -> Result<RealFrequency, ModesError> {
    if u <= 0.0 || !u.is_finite() {
        return Err(ModesError::InvalidWavevector(u));
    }
    if ds <= 0.0 || !ds.is_finite() {
        return Err(ModesError::InvalidThickness(ds));
    }
    let w = (0.5 * (1.0 + nu.sign() * (-u * ds).exp())).sqrt();
    RealFrequency::new(w)
}

/// Photonic mode frequencies of the perfect-mirror sandwich,
/// w_n = sqrt(1 + u^2 + n^2 pi^2 / ds^2); independent of polarization.
pub fn photonic_mode_freq(n: u32, u: f64, ds: f64) -> Result<RealFrequency, ModesError> {
    if n == 0 {
        return Err(ModesError::InvalidModeIndex);
    }
    if ds <= 0.0 || !ds.is_finite() {
        return Err(ModesError::InvalidThickness(ds));
    }
    if u < 0.0 || !u.is_finite() {
        return Err(ModesError::InvalidWavevector(u));
    }
    let npi = n as f64 * std::f64::consts::PI / ds;
    RealFrequency::new((1.0 + u * u + npi * npi).sqrt())
}

const SCAN_PANELS: usize = 200;

/// All roots of the (q, nu) dispersion relation in (0, u), ascending.
///
/// The panel scan runs on the pole-free form G, whose sign changes are
/// exactly the mode frequencies: the raw residual's poles (where rho or
/// r_s blow up) are not zeros of G, so a sign change cannot be an
/// artifact, and conversely a root adjacent to a pole still flips G's
/// sign even when the two are separated by less than a panel (or, in the
/// decoupled regime u ds >> 1, by less than an ulp). Each sign change is
/// bisected to machine resolution.
fn roots_at(q: Polarization, nu: Symmetry, u: f64, ds: f64, gap: Option<f64>) -> Vec<f64> {
    let w_lo = u * 1e-9;
    let w_hi = u * (1.0 - 1e-9);
    let g = |w: f64| dispersion_poly(q, nu, w, u, ds, gap);
    let mut roots = Vec::new();
    let step = (w_hi - w_lo) / SCAN_PANELS as f64;
    let mut left = w_lo;
    let mut g_left = g(left);
    for i in 1..=SCAN_PANELS {
        let right = w_lo + step * i as f64;
        let g_right = g(right);
        if g_left.is_finite() && g_right.is_finite() && g_left * g_right < 0.0 {
            let (mut a, mut b) = (left, right);
            let mut g_a = g_left;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let g_mid = g(mid);
                if g_a * g_mid <= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    g_a = g_mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        left = right;
        g_left = g_right;
    }
    roots
}

/// dw/dds at a solved root, by implicit differentiation of the pole-free
/// dispersion function.
fn thickness_derivative(
    q: Polarization,
    nu: Symmetry,
    w: f64,
    u: f64,
    ds: f64,
    gap: Option<f64>,
) -> Option<f64> {
    let wd = Dual2 {
        v: w,
        dw: 1.0,
        dd: 0.0,
    };
    let dsd = Dual2 {
        v: ds,
        dw: 0.0,
        dd: 1.0,
    };
    let g = dispersion_poly(q, nu, wd, u, dsd, gap);
    if !g.dw.is_finite() || !g.dd.is_finite() || g.dw == 0.0 {
        return None;
    }
    Some(-g.dd / g.dw)
}

/// Track one (q, nu) branch across an ascending wavevector grid.
///
/// Grid points without a verified root are recorded as absent (the branch
/// is cut off there, which is legitimate); a retained root that jumps by
/// more than 10% between consecutive samples is a tracking error.
pub fn solve_sp_branch(
    q: Polarization,
    nu: Symmetry,
    u_grid: &[f64],
    ds: f64,
    gap: Option<f64>,
) -> Result<ModeBranch, ModesError> {
    if u_grid.is_empty()
        || u_grid.iter().any(|&u| u <= 0.0 || !u.is_finite())
        || u_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(ModesError::InvalidGrid);
    }
    if ds <= 0.0 || !ds.is_finite() {
        return Err(ModesError::InvalidThickness(ds));
    }
    if let Some(d) = gap {
        if d < 0.0 || !d.is_finite() {
            return Err(ModesError::InvalidGap(d));
        }
    }

    let mut samples = Vec::new();
    let mut absent = Vec::new();
    let mut extra = 0usize;
    let mut prev: Option<f64> = None;
    for &u in u_grid {
        let roots = roots_at(q, nu, u, ds, gap);
        if roots.is_empty() {
            absent.push(u);
            continue;
        }
        extra += roots.len() - 1;
        let w = match prev {
            Some(wp) => roots
                .iter()
                .copied()
                .min_by(|a, b| (a - wp).abs().total_cmp(&(b - wp).abs()))
                .expect("roots is non-empty"),
            None => roots[0],
        };
        if let Some(wp) = prev {
            if (w - wp).abs() > 0.1 * wp {
                return Err(ModesError::BranchJump { u, w_prev: wp, w });
            }
        }
        samples.push(BranchSample { u, w });
        prev = Some(w);
    }
    Ok(ModeBranch {
        q,
        nu,
        ds,
        gap,
        samples,
        absent,
        extra_sign_changes: extra,
    })
}

/// Nonretarded mode-sum pressure of the free slab: the two plasmon
/// branches integrated in closed form,
/// F_nu = nu (1/8 sqrt2 pi ds^3) int dt t^2 e^{-t} / sqrt(1 + nu e^{-t}).
pub fn sp_pressure_nonretarded(ds: f64) -> Result<ModeSumPressure, ModesError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(ModesError::InvalidThickness(ds));
    }
    let spec = QuadratureSpec {
        substitution: Substitution::Exponential,
        ..Default::default()
    };
    let prefactor = 1.0 / (8.0 * std::f64::consts::SQRT_2 * std::f64::consts::PI * ds.powi(3));
    let mut branches = Vec::new();
    let mut total = 0.0;
    let mut error = 0.0;
    for nu in [Symmetry::Minus, Symmetry::Plus] {
        let s = nu.sign();
        let integral = quadrature::integrate_semi_infinite(
            |t| {
                let e = (-t).exp();
                t * t * e / (1.0 + s * e).sqrt()
            },
            &spec,
        )?;
        let value = s * prefactor * integral.value;
        let err = prefactor * integral.error_estimate;
        branches.push(BranchPressure {
            q: Polarization::P,
            nu,
            value,
            error_estimate: err,
        });
        total += value;
        error += err;
    }
    Ok(ModeSumPressure {
        branches,
        total,
        error_estimate: error,
        formula: Formula::ModeSum,
    })
}

/// Retarded mode-sum pressure F_S = -(1/4 pi) int du u sum_nu dw_nu/dds
/// for the p-polarized surface-plasmon branches; `gap = None` is the free
/// slab, `Some(d)` a symmetric perfect-mirror cavity.
///
/// The wavevector integral proceeds over geometrically growing segments
/// and stops once a segment contributes below 1e-10 of the accumulated
/// value; the last segment's share enters the truncation bound.
pub fn sp_pressure_retarded(ds: f64, gap: Option<f64>) -> Result<ModeSumPressure, ModesError> {
    if ds <= 0.0 || !ds.is_finite() {
        return Err(ModesError::InvalidThickness(ds));
    }
    if let Some(d) = gap {
        if d < 0.0 || !d.is_finite() {
            return Err(ModesError::InvalidGap(d));
        }
    }
    let seg_spec = QuadratureSpec {
        rel_tol: 1e-7,
        abs_tol: 1e-16,
        max_subdivisions: 400,
        substitution: Substitution::Rational,
    };
    let prefactor = -1.0 / (4.0 * std::f64::consts::PI);
    let mut branches = Vec::new();
    let mut total = 0.0;
    let mut error = 0.0;
    for nu in [Symmetry::Minus, Symmetry::Plus] {
        let integrand = |u: f64| -> f64 {
            if u <= 0.0 {
                return 0.0;
            }
            let roots = roots_at(Polarization::P, nu, u, ds, gap);
            match roots.first() {
                Some(&w) => match thickness_derivative(Polarization::P, nu, w, u, ds, gap) {
                    Some(d) => u * d,
                    None => 0.0,
                },
                None => 0.0,
            }
        };
        let seg0 = 1.0f64.max(1.0 / ds);
        let mut lo = 0.0;
        let mut hi = seg0;
        let mut acc = 0.0;
        let mut acc_err = 0.0;
        let mut last_mag;
        loop {
            let (value, err) = match quadrature::integrate(integrand, lo, hi, &seg_spec) {
                Ok(res) => (res.value, res.error_estimate),
                Err(QuadratureError::DidNotConverge {
                    value,
                    error_estimate,
                    ..
                }) => (value, error_estimate),
                Err(other) => return Err(other.into()),
            };
            acc += value;
            acc_err += err;
            last_mag = value.abs();
            if last_mag < 1e-10 * acc.abs().max(1e-300) || hi > 1e7 {
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
        let value = prefactor * acc;
        let err = prefactor.abs() * (acc_err + last_mag);
        branches.push(BranchPressure {
            q: Polarization::P,
            nu,
            value,
            error_estimate: err,
        });
        total += value;
        error += err;
    }
    Ok(ModeSumPressure {
        branches,
        total,
        error_estimate: error,
        formula: Formula::ModeSum,
    })
}
