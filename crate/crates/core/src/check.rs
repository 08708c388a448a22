//! Property suite run by `legkh check`: internal consistency of one front
//! plus invariance under random move walks.

use std::fmt::Write as _;

use crate::complex::{build_complex_with_rules, check_d_squared, Coefficients, LabelRules};
use crate::diagram::{match_orientation, serialize_front, OrientedFront};
use crate::error::Result;
use crate::homology::{
    forget_k, graded_euler_char, homology, homology_euler_char, support_violations,
    universal_coefficient_mismatches, GradedHomology,
};
use crate::moves::{random_move_walk_with, WalkConfig};
use crate::poly::LaurentPoly2;
use crate::polynomial::{
    bracket_skein_with_cap, bracket_statesum_with_cap, legendrian_jones_with_cap, specialize_r1,
    to_qr,
};
use crate::smooth::{jones, khovanov, pd_code};
use crate::states::DEFAULT_CROSSING_CAP;

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub walks: usize,
    pub steps: usize,
    pub seed: u64,
    pub cap: usize,
    /// Walks never grow a front beyond this many crossings.
    pub walk_crossings: Option<usize>,
    pub rules: LabelRules,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            walks: 10,
            steps: 4,
            seed: 0,
            cap: DEFAULT_CROSSING_CAP,
            walk_crossings: None,
            rules: LabelRules::standard(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
    /// Shortest failing walk endpoint found, as front text.
    pub counterexample: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.items.push(CheckItem {
            name,
            passed,
            detail: detail.into(),
        });
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            let mark = if i.passed { "PASS" } else { "FAIL" };
            if i.detail.is_empty() {
                let _ = writeln!(out, "{mark} {}", i.name);
            } else {
                let _ = writeln!(out, "{mark} {}: {}", i.name, i.detail);
            }
        }
        if let Some(c) = &self.counterexample {
            let _ = writeln!(out, "counterexample:\n{c}");
        }
        out
    }
}

/// The invariants compared along walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub polynomial: LaurentPoly2,
    pub z2: Option<GradedHomology>,
    pub z: Option<GradedHomology>,
}

pub fn invariants(of: &OrientedFront, cap: usize, rules: &LabelRules) -> Result<Invariants> {
    let polynomial = legendrian_jones_with_cap(of, cap)?;
    let z2 = homology(&build_complex_with_rules(of, Coefficients::Z2, cap, rules)?).ok();
    let z = homology(&build_complex_with_rules(of, Coefficients::Z, cap, rules)?).ok();
    Ok(Invariants { polynomial, z2, z })
}

pub fn run_checks(of: &OrientedFront, opts: &CheckOptions) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let cap = opts.cap;
    let p = legendrian_jones_with_cap(of, cap)?;
    let qr = to_qr(&p)?;

    let skein = bracket_skein_with_cap(of, cap)?;
    let statesum = bracket_statesum_with_cap(of, cap)?;
    report.push("skein equals state sum", skein == statesum, "");

    let c2 = build_complex_with_rules(of, Coefficients::Z2, cap, &opts.rules)?;
    let cz = build_complex_with_rules(of, Coefficients::Z, cap, &opts.rules)?;
    report.push("d^2 = 0 over Z2", check_d_squared(&c2), "");
    report.push("d^2 = 0 over Z", check_d_squared(&cz), "");

    let chain_euler = graded_euler_char(&c2);
    let h2 = homology(&c2).ok();
    let hz = homology(&cz).ok();
    let euler_ok = chain_euler == qr
        && h2.as_ref().is_some_and(|h| homology_euler_char(h) == qr)
        && hz.as_ref().is_some_and(|h| homology_euler_char(h) == qr);
    let detail = match (&h2, &hz) {
        (Some(_), Some(_)) if !euler_ok => format!("expected {}", qr.render("q", "r")),
        (Some(_), Some(_)) => String::new(),
        _ => "homology unavailable, boundary map does not square to zero".into(),
    };
    report.push("Euler characteristic equals P in (q, r)", euler_ok, detail);

    let tb = of.thurston_bennequin();
    let gens_ok = c2
        .generators
        .iter()
        .all(|g| g.grading.k == g.grading.j - tb);
    let hom_ok = h2
        .iter()
        .chain(&hz)
        .all(|h| support_violations(h).is_empty());
    report.push(
        "k = j - tb on generators and homology",
        gens_ok && hom_ok,
        "",
    );

    let uc_ok = match (&h2, &hz) {
        (Some(a), Some(b)) => universal_coefficient_mismatches(a, b).is_empty(),
        _ => false,
    };
    report.push("universal coefficients", uc_ok, "");

    let pd = pd_code(of.diagram(), of.reversed())?;
    report.push(
        "r = 1 equals smooth Jones",
        specialize_r1(&p) == jones(&pd),
        "",
    );
    let oracle_ok = h2
        .as_ref()
        .is_some_and(|h| forget_k(h) == khovanov(&pd, false))
        && hz
            .as_ref()
            .is_some_and(|h| forget_k(h) == khovanov(&pd, true));
    report.push("forget k equals smooth Khovanov", oracle_ok, "");

    if opts.walks > 0 && opts.steps > 0 {
        let base = Invariants {
            polynomial: p,
            z2: h2,
            z: hz,
        };
        walk_checks(of, opts, &base, &mut report)?;
    } else {
        report.push("move invariance", true, "no walks requested");
    }
    Ok(report)
}

fn walk_checks(
    of: &OrientedFront,
    opts: &CheckOptions,
    base: &Invariants,
    report: &mut CheckReport,
) -> Result<()> {
    let n = of.crossing_count();
    let config = WalkConfig {
        max_crossings: opts.walk_crossings.unwrap_or((n + 4).max(10)).min(opts.cap),
        ..WalkConfig::default()
    };
    let endpoint_differs = |seed: u64, steps: usize| -> Result<Option<String>> {
        let d = random_move_walk_with(of.diagram(), steps, seed, &config);
        let Some(moved) = match_orientation(of, &d) else {
            return Ok(Some(serialize_front(&d)));
        };
        let inv = invariants(&moved, opts.cap, &opts.rules)?;
        Ok((inv != *base).then(|| serialize_front(&d)))
    };
    for w in 0..opts.walks {
        let seed = opts.seed.wrapping_add(w as u64);
        if endpoint_differs(seed, opts.steps)?.is_some() {
            // shortest prefix of the same walk that already fails
            for steps in 1..=opts.steps {
                if let Some(front) = endpoint_differs(seed, steps)? {
                    report.counterexample = Some(format!("# seed {seed}, {steps} steps\n{front}"));
                    break;
                }
            }
            report.push(
                "move invariance",
                false,
                format!("walk with seed {seed} changed an invariant"),
            );
            return Ok(());
        }
    }
    report.push(
        "move invariance",
        true,
        format!("{} walks of {} steps", opts.walks, opts.steps),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::LabelRules;
    use crate::diagram::parse_front;
    use crate::states::Label;

    fn oriented(s: &str) -> OrientedFront {
        OrientedFront::default_for(&parse_front(s).unwrap())
    }

    #[test]
    fn trefoil_passes() {
        let opts = CheckOptions {
            walks: 3,
            steps: 3,
            ..CheckOptions::default()
        };
        let r = run_checks(&oriented("L 1 L 3 X 2 X 2 X 2 R 1 R 1"), &opts).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn zero_steps_is_a_degenerate_pass() {
        let opts = CheckOptions {
            steps: 0,
            ..CheckOptions::default()
        };
        let r = run_checks(&oriented("L 1 R 1"), &opts).unwrap();
        assert!(r.passed());
        assert_eq!(
            r.item("move invariance").unwrap().detail,
            "no walks requested"
        );
    }

    #[test]
    fn wrong_split_rule_fails_euler_check() {
        let rules = LabelRules {
            split: |l| match l {
                Label::Plus => &[(Label::Plus, Label::Minus)],
                Label::Minus => &[(Label::Minus, Label::Minus)],
            },
            ..LabelRules::standard()
        };
        let opts = CheckOptions {
            walks: 0,
            rules,
            ..CheckOptions::default()
        };
        let r = run_checks(&oriented("L 1 L 3 X 2 X 2 X 2 R 1 R 1"), &opts).unwrap();
        assert!(!r.passed());
        assert!(
            !r.item("Euler characteristic equals P in (q, r)")
                .unwrap()
                .passed
        );
    }
}
