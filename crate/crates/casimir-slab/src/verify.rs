//! Built-in verification suite: every check the `verify` subcommand and
//! the acceptance test target run, with its tolerances pinned here.

use crate::cli::{fig_dataset, FigureId};
use crate::modes;
use crate::pressure::{self, SlabSystem};
use std::fmt::Write as _;

/// Result of one verification criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} {:32} {}  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

pub const CRITERIA: [&str; 10] = [
    "nonretarded_constant",
    "plasmon_decomposition",
    "casimir_limit_and_correction",
    "dual_formulation_oracles",
    "nonretarded_to_casimir_ratio",
    "cavity_limits",
    "symmetric_interaction_force",
    "thick_slab_decay",
    "mode_lifshitz_consistency",
    "figure_determinism",
];

pub fn run_criterion(id: usize) -> CriterionOutcome {
    match id {
        1 => nonretarded_constant(),
        2 => plasmon_decomposition(),
        3 => casimir_limit_and_correction(),
        4 => dual_formulation_oracles(),
        5 => nonretarded_to_casimir_ratio(),
        6 => cavity_limits(),
        7 => symmetric_interaction_force(),
        8 => thick_slab_decay(),
        9 => mode_lifshitz_consistency(),
        10 => figure_determinism(),
        other => CriterionOutcome {
            id: other,
            name: "unknown",
            passed: false,
            detail: format!("no criterion {other}; valid ids are 1..=10"),
        },
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    (1..=10).map(run_criterion).collect()
}

const PI_SQ: f64 = 9.869604401089358;

/// 1. The quasistatic constant: C = 0.00781 within 1e-5.
fn nonretarded_constant() -> CriterionOutcome {
    let c = pressure::pressure_nonretarded_coefficient();
    let passed = (c - 0.00781).abs() <= 1e-5;
    CriterionOutcome {
        id: 1,
        name: CRITERIA[0],
        passed,
        detail: format!("C = {c:.7} (target 0.00781 +/- 1e-5)"),
    }
}

/// 2. Plasmon decomposition: F_SP-/F_nr = 7.83 +/- 0.01,
///    F_SP+/F_nr = -6.83 +/- 0.01, sum/F_nr = 1 +/- 1e-6.
fn plasmon_decomposition() -> CriterionOutcome {
    let ds = 1.0;
    let (sp, fnr) = match (
        modes::sp_pressure_nonretarded(ds),
        pressure::pressure_nonretarded(ds),
    ) {
        (Ok(sp), Ok(fnr)) => (sp, fnr.value),
        _ => {
            return CriterionOutcome {
                id: 2,
                name: CRITERIA[1],
                passed: false,
                detail: "evaluation failed".to_string(),
            }
        }
    };
    let minus = sp.branches[0].value / fnr;
    let plus = sp.branches[1].value / fnr;
    let sum = sp.total / fnr;
    let passed = (minus - 7.83).abs() <= 0.01
        && (plus + 6.83).abs() <= 0.01
        && (sum - 1.0).abs() <= 1e-6;
    CriterionOutcome {
        id: 2,
        name: CRITERIA[1],
        passed,
        detail: format!(
            "F-/Fnr = {minus:.4} (7.83 +/- 0.01), F+/Fnr = {plus:.4} (-6.83 +/- 0.01), sum/Fnr = {sum:.8} (1 +/- 1e-6)"
        ),
    }
}

/// 3. Mirror sandwich: F/F_C -> 1 as ds -> 0 and the slope of (F/F_C - 1)
///    against ds^2 equals -5/pi^2 within 3%.
fn casimir_limit_and_correction() -> CriterionOutcome {
    let points = [0.02, 0.05, 0.1];
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut lim_dev = 0.0;
    for (i, &ds) in points.iter().enumerate() {
        let f = match pressure::pressure_mirrors_bessel(ds) {
            Ok(p) => p.value,
            Err(_) => {
                return CriterionOutcome {
                    id: 3,
                    name: CRITERIA[2],
                    passed: false,
                    detail: "evaluation failed".to_string(),
                }
            }
        };
        let y = f / pressure::casimir_pressure(ds) - 1.0;
        if i == 0 {
            lim_dev = y.abs();
        }
        let x = ds * ds;
        sxy += x * y;
        sxx += x * x;
    }
    let slope = sxy / sxx;
    let target = -5.0 / PI_SQ;
    let passed = lim_dev <= 1e-3 && (slope - target).abs() <= 0.03 * target.abs();
    CriterionOutcome {
        id: 3,
        name: CRITERIA[2],
        passed,
        detail: format!(
            "|F/F_C - 1| = {lim_dev:.2e} at ds = 0.02 (<= 1e-3); slope = {slope:.4} (target {target:.4} +/- 3%)"
        ),
    }
}

/// 4. Dual formulations agree: mirror integral vs Bessel series to 1e-8
///    at ds in {0.1, 1, 5}; direct vs p-form free-slab integral to 1e-6 at
///    ds in {0.5, 1, 5}.
fn dual_formulation_oracles() -> CriterionOutcome {
    let mut detail = String::new();
    let mut passed = true;
    for ds in [0.1, 1.0, 5.0] {
        let (a, b) = match (
            pressure::pressure_mirrors_integral(ds),
            pressure::pressure_mirrors_bessel(ds),
        ) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            _ => {
                passed = false;
                continue;
            }
        };
        let rel = ((a - b) / b).abs();
        passed &= rel <= 1e-8;
        let _ = write!(detail, "mirrors ds={ds}: {rel:.1e} ");
    }
    for ds in [0.5, 1.0, 5.0] {
        let (a, b) = match (pressure::pressure_free(ds), pressure::pressure_free_pform(ds)) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            _ => {
                passed = false;
                continue;
            }
        };
        let rel = ((a - b) / b).abs();
        passed &= rel <= 1e-6;
        let _ = write!(detail, "pform ds={ds}: {rel:.1e} ");
    }
    CriterionOutcome {
        id: 4,
        name: CRITERIA[3],
        passed,
        detail: format!("{detail}(limits 1e-8 / 1e-6)"),
    }
}

/// 5. Ratio chain: F_nr/F_C = 0.19 k_P ds within 1%, equivalently
///    1.19 d_s/lambda_P, both through the computed constant.
fn nonretarded_to_casimir_ratio() -> CriterionOutcome {
    let c = pressure::pressure_nonretarded_coefficient();
    let slope = 240.0 / PI_SQ * c;
    let per_lambda = slope * 2.0 * std::f64::consts::PI;
    let passed =
        (slope - 0.19).abs() <= 0.19 * 0.01 && (per_lambda - 1.19).abs() <= 1.19 * 0.01;
    CriterionOutcome {
        id: 5,
        name: CRITERIA[4],
        passed,
        detail: format!(
            "F_nr/F_C = {slope:.5} k_P ds (0.19 +/- 1%) = {per_lambda:.5} ds/lambda_P (1.19 +/- 1%)"
        ),
    }
}

/// 6. Cavity limits at ds = 0.0628: gap 1e-4 matches the mirror sandwich
///    and gap 10 matches the free slab, both to 1e-3 relative.
///
/// Known red on the first clause: the sandwich limit is approached like
/// ~1.2 sqrt(gap) (the low-frequency p-channel is suppressed over a
/// frequency sliver of relative width sqrt(gap)), so the deviation at
/// gap 1e-4 is ~1e-2 at every thickness. Meeting 1e-3 needs gap <~ 1e-6.
fn cavity_limits() -> CriterionOutcome {
    let ds = 0.0628;
    let run = || -> Result<(f64, f64), pressure::PressureError> {
        let near = pressure::pressure_cavity(&SlabSystem::cavity(ds, 1e-4)?)?.value;
        let sandwich = pressure::pressure_mirrors_bessel(ds)?.value;
        let far = pressure::pressure_cavity(&SlabSystem::cavity(ds, 10.0)?)?.value;
        let free = pressure::pressure_free(ds)?.value;
        Ok(((near - sandwich) / sandwich, (far - free) / free))
    };
    match run() {
        Ok((near_rel, far_rel)) => {
            let passed = near_rel.abs() <= 1e-3 && far_rel.abs() <= 1e-3;
            CriterionOutcome {
                id: 6,
                name: CRITERIA[5],
                passed,
                detail: format!(
                    "gap 1e-4 vs sandwich: {:.2e}; gap 10 vs free: {:.2e} (limits 1e-3)",
                    near_rel.abs(),
                    far_rel.abs()
                ),
            }
        }
        Err(e) => CriterionOutcome {
            id: 6,
            name: CRITERIA[5],
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// 7. F' = 0 within 1e-10 absolute for three symmetric configurations.
fn symmetric_interaction_force() -> CriterionOutcome {
    let configs = [(0.5, 0.5), (0.5, 1.0), (1.0, 0.25)];
    let mut worst: f64 = 0.0;
    let mut passed = true;
    for (ds, gap) in configs {
        match SlabSystem::cavity(ds, gap).and_then(|sys| pressure::interaction_force(&sys)) {
            Ok(f) => {
                worst = worst.max(f.value.abs());
                passed &= f.value.abs() <= 1e-10;
            }
            Err(_) => passed = false,
        }
    }
    CriterionOutcome {
        id: 7,
        name: CRITERIA[6],
        passed,
        detail: format!("max |F'| = {worst:.2e} over three symmetric cavities (limit 1e-10)"),
    }
}

/// 8. Thick-slab decay: |F_free/asymptote| - 1 decreases monotonically
///    over ds in {5, 8, 12} and is below 0.10 at ds = 12.
///
/// Known red on the second clause: the leading asymptote carries an
/// O(1/sqrt(ds)) relative error (the reflection factors deviate from
/// their boundary values by that order over the sampled region), so the
/// measured deviation is ~0.43 at ds = 12 and still ~0.23 at ds = 100.
/// The monotone approach holds.
fn thick_slab_decay() -> CriterionOutcome {
    let mut deviations = Vec::new();
    for ds in [5.0, 8.0, 12.0] {
        let pair = pressure::pressure_free(ds).and_then(|f| {
            pressure::pressure_thick_asymptotic(ds).map(|a| (f.value / a.value).abs() - 1.0)
        });
        match pair {
            Ok(dev) => deviations.push(dev),
            Err(e) => {
                return CriterionOutcome {
                    id: 8,
                    name: CRITERIA[7],
                    passed: false,
                    detail: e.to_string(),
                }
            }
        }
    }
    let monotone = deviations.windows(2).all(|w| w[1].abs() < w[0].abs());
    let passed = monotone && deviations[2].abs() < 0.10;
    CriterionOutcome {
        id: 8,
        name: CRITERIA[7],
        passed,
        detail: format!(
            "|F/asymptote - 1| = {:.4}, {:.4}, {:.4} at ds = 5, 8, 12 (monotone, last < 0.10)",
            deviations[0], deviations[1], deviations[2]
        ),
    }
}

/// 9. Mode-sum vs Lifshitz: retarded F_S/F > 0.9 with the stated 10%
///    tolerance (so at least 0.81) at d_s/lambda_P in {0.02, 0.1, 0.3},
///    and |F_S/F| < 0.2 at d_s/lambda_P = 1, for the free slab.
///
/// Known red at the two largest thicknesses: the two-branch mode sum
/// (validated against finite differences of the independently assembled
/// surface-mode energy to five digits) gives 0.27 at 0.3 and -0.83 at 1;
/// the branch-pair derivatives cancel to the same exponential order as
/// the full pressure, with a relaxing-dominated coefficient at large ds,
/// so the ratio neither stays near one at 0.3 nor becomes small at 1.
fn mode_lifshitz_consistency() -> CriterionOutcome {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut detail = String::new();
    let mut passed = true;
    for a in [0.02, 0.1, 0.3] {
        let ds = two_pi * a;
        let ratio = match (
            modes::sp_pressure_retarded(ds, None),
            pressure::pressure_free(ds),
        ) {
            (Ok(sp), Ok(f)) => sp.total / f.value,
            _ => {
                passed = false;
                continue;
            }
        };
        passed &= ratio >= 0.9 * 0.9;
        let _ = write!(detail, "F_S/F({a}) = {ratio:.3} ");
    }
    let ds = two_pi;
    match (
        modes::sp_pressure_retarded(ds, None),
        pressure::pressure_free(ds),
    ) {
        (Ok(sp), Ok(f)) => {
            let ratio = sp.total / f.value;
            passed &= ratio.abs() < 0.2;
            let _ = write!(detail, "F_S/F(1) = {ratio:.3}");
        }
        _ => passed = false,
    }
    CriterionOutcome {
        id: 9,
        name: CRITERIA[8],
        passed,
        detail: format!("{detail} (need >= 0.81 at first three, |.| < 0.2 at 1)"),
    }
}

/// 10. Determinism: the fig4 dataset serializes to identical bytes twice.
fn figure_determinism() -> CriterionOutcome {
    let first = fig_dataset(FigureId::Fig4, 4).map(|d| d.to_csv());
    let second = fig_dataset(FigureId::Fig4, 4).map(|d| d.to_csv());
    match (first, second) {
        (Ok(a), Ok(b)) => {
            let passed = a == b;
            CriterionOutcome {
                id: 10,
                name: CRITERIA[9],
                passed,
                detail: format!(
                    "fig4 CSV: {} bytes, rerun {}",
                    a.len(),
                    if passed { "byte-identical" } else { "DIFFERS" }
                ),
            }
        }
        _ => CriterionOutcome {
            id: 10,
            name: CRITERIA[9],
            passed: false,
            detail: "dataset generation failed".to_string(),
        },
    }
}
