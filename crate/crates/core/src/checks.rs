//! The property suite: every theorem-shaped claim as a pass/fail check over
//! one instance. The fuzz driver and the acceptance suite both run these.

use crate::congruence::{anti_isomorphism_check, classify, CongruenceError};
use crate::frame::{canonical_frame, counit_iso, representation_iso, urquhart_check, FiFrame};
use crate::module::{
    extend_to_primes, filter_extension, membership_check, ExtendError, ExtensionMode, FidlModule,
};
use crate::Budget;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "detail")]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub outcome: Outcome,
}

impl PropertyResult {
    pub fn failed(&self) -> bool {
        matches!(self.outcome, Outcome::Fail(_))
    }
}

/// Operator monotonicity in both arguments, exhaustively.
pub fn check_monotonicity(m: &FidlModule) -> Outcome {
    let a = m.lattice_a();
    let b = m.lattice_b();
    for x in 0..a.len() {
        for y in 0..a.len() {
            if !a.leq(x, y) {
                continue;
            }
            for bi in 0..b.len() {
                for ci in 0..b.len() {
                    if !b.leq(bi, ci) {
                        continue;
                    }
                    if !a.leq(m.fusion(x, bi), m.fusion(y, ci)) {
                        return Outcome::Fail(format!(
                            "fusion not monotone at x={x} y={y} b={bi} c={ci}"
                        ));
                    }
                    if !a.leq(m.implication(ci, x), m.implication(bi, y)) {
                        return Outcome::Fail(format!(
                            "implication not antitone/monotone at x={x} y={y} b={bi} c={ci}"
                        ));
                    }
                }
            }
        }
    }
    Outcome::Pass
}

/// Filter extensions of filters are filters, monotone in both arguments, and
/// principal filters extend to principal filters of the operator value.
pub fn check_filter_extension_closure(m: &FidlModule) -> Outcome {
    let filters_a = m.lattice_a().enumerate_filters();
    let filters_b = m.lattice_b().enumerate_filters();
    for g in &filters_a {
        for h in &filters_b {
            for mode in [ExtensionMode::Fusion, ExtensionMode::Implication] {
                let ext = filter_extension(m, mode, g, h);
                if !m.lattice_a().is_filter(ext.carrier()) {
                    return Outcome::Fail(format!(
                        "extension of {:?} and {:?} is not a filter",
                        g.carrier(),
                        h.carrier()
                    ));
                }
                // Monotone in each argument against all superfilters.
                for g2 in &filters_a {
                    if g.carrier().is_subset_of(g2.carrier()) {
                        let bigger = filter_extension(m, mode, g2, h);
                        if !ext.carrier().is_subset_of(bigger.carrier()) {
                            return Outcome::Fail("extension not monotone in G".into());
                        }
                    }
                }
                for h2 in &filters_b {
                    if h.carrier().is_subset_of(h2.carrier()) {
                        let bigger = filter_extension(m, mode, g, h2);
                        if !ext.carrier().is_subset_of(bigger.carrier()) {
                            return Outcome::Fail("extension not monotone in H".into());
                        }
                    }
                }
            }
        }
    }
    for x in 0..m.size_a() {
        for b in 0..m.size_b() {
            let ext = filter_extension(
                m,
                ExtensionMode::Fusion,
                &m.lattice_a().principal_filter(x),
                &m.lattice_b().principal_filter(b),
            );
            if ext.carrier() != m.lattice_a().principal_filter(m.fusion(x, b)).carrier() {
                return Outcome::Fail(format!("principal extension mismatch at x={x} b={b}"));
            }
        }
    }
    Outcome::Pass
}

/// Whenever an extension lands inside a prime, a pair of primes above the
/// inputs witnesses it.
pub fn check_prime_extension(m: &FidlModule) -> Outcome {
    let sa = m.lattice_a().spectrum();
    let sb = m.lattice_b().spectrum();
    let filters_a = m.lattice_a().enumerate_filters();
    let filters_b = m.lattice_b().enumerate_filters();
    for mode in [ExtensionMode::Fusion, ExtensionMode::Implication] {
        for g in &filters_a {
            for h in &filters_b {
                let ext = filter_extension(m, mode, g, h);
                for p_idx in 0..sa.len() {
                    if !ext.carrier().is_subset_of(sa.prime(p_idx)) {
                        continue;
                    }
                    match extend_to_primes(m, mode, g, h, &sa, &sb, p_idx) {
                        Ok(_) => {}
                        Err(ExtendError::NoWitness) => {
                            return Outcome::Fail(format!(
                                "no prime pair above G={:?}, H={:?} inside P={:?} ({mode:?})",
                                g.carrier(),
                                h.carrier(),
                                sa.prime(p_idx)
                            ));
                        }
                        Err(ExtendError::PreconditionFailed) => {
                            return Outcome::Fail("containment test disagrees".into());
                        }
                    }
                }
            }
        }
    }
    Outcome::Pass
}

/// Both equivalences of the membership lemma at every point.
pub fn check_membership_lemma(m: &FidlModule) -> Outcome {
    let dual = canonical_frame(m);
    for x in 0..m.size_a() {
        for b in 0..m.size_b() {
            for p in 0..dual.spectrum_a().len() {
                let rep = membership_check(m, &dual, x, b, p);
                if !rep.agrees() {
                    return Outcome::Fail(format!(
                        "membership sides disagree at x={x} b={b} P={p}: {rep:?}"
                    ));
                }
            }
        }
    }
    Outcome::Pass
}

/// The module embeds isomorphically into the increasing-set module of its
/// canonical frame.
pub fn check_representation(m: &FidlModule, budget: &Budget) -> Outcome {
    match representation_iso(m, budget.lattice_max) {
        Ok(rep) if rep.is_iso => Outcome::Pass,
        Ok(_) => Outcome::Fail("representation is a homomorphism but not bijective".into()),
        Err(e) => Outcome::Fail(format!("representation failed: {e}")),
    }
}

/// The frame embeds isomorphically into the canonical frame of its
/// increasing-set module.
pub fn check_frame_roundtrip(f: &FiFrame, budget: &Budget) -> Outcome {
    match counit_iso(f, budget.lattice_max) {
        Ok(c) if c.is_iso => Outcome::Pass,
        Ok(_) => Outcome::Fail("counit is an FI-morphism but not a poset isomorphism".into()),
        Err(e) => Outcome::Fail(format!("counit failed: {e}")),
    }
}

/// The finite space conditions on a frame.
pub fn check_urquhart(f: &FiFrame, budget: &Budget) -> Outcome {
    match urquhart_check(f, budget.lattice_max) {
        Ok(report) if report.all_pass() => Outcome::Pass,
        Ok(report) => Outcome::Fail(format!("space conditions fail: {report:?}")),
        Err(e) => Outcome::Fail(format!("space check failed: {e}")),
    }
}

/// The order-reversing bijections between closed pairs and congruences, and
/// the agreement of the two congruence oracles.
pub fn check_congruence_duality(m: &FidlModule, budget: &Budget) -> Outcome {
    match anti_isomorphism_check(m, budget) {
        Ok(report) if report.holds() => Outcome::Pass,
        Ok(report) => Outcome::Fail(format!("correspondence fails: {report:?}")),
        Err(CongruenceError::BudgetExceeded { what, size, budget }) => {
            Outcome::Skipped(format!("{what}: {size} over budget {budget}"))
        }
        Err(e) => Outcome::Fail(format!("{e}")),
    }
}

/// The classifier's authoritative verdict is re-derived from the raw
/// congruence list.
pub fn check_classification(m: &FidlModule, budget: &Budget) -> Outcome {
    use crate::congruence::{enumerate_congruences_oracle, CongruenceSort, Verdict};
    let report = match classify(m, budget) {
        Ok(r) => r,
        Err(CongruenceError::BudgetExceeded { what, size, budget }) => {
            return Outcome::Skipped(format!("{what}: {size} over budget {budget}"));
        }
        Err(e) => return Outcome::Fail(format!("{e}")),
    };
    let cons = match enumerate_congruences_oracle(m, CongruenceSort::Both, budget) {
        Ok(c) => c,
        Err(e) => return Outcome::Fail(format!("{e}")),
    };
    let expected = if m.is_trivial() {
        Verdict::Trivial
    } else if cons.len() == 2 {
        Verdict::Simple
    } else {
        let nontrivial: Vec<_> = cons.iter().filter(|c| !c.is_identity()).collect();
        if nontrivial
            .iter()
            .any(|cand| nontrivial.iter().all(|o| cand.leq(o)))
        {
            Verdict::SubdirectlyIrreducibleNotSimple
        } else {
            Verdict::NotSubdirectlyIrreducible
        }
    };
    if report.verdict == expected {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "verdict {:?} disagrees with direct inspection {:?}",
            report.verdict, expected
        ))
    }
}

/// Run every module-level property within the budgets. Size limits skip, not
/// fail, the exponential checks.
pub fn run_module_suite(m: &FidlModule, budget: &Budget) -> Vec<PropertyResult> {
    let mut results = Vec::new();
    let enumerable = m.size_a() <= crate::lattice::FILTER_ENUM_MAX
        && m.size_b() <= crate::lattice::FILTER_ENUM_MAX;
    results.push(PropertyResult {
        name: "operator-monotonicity",
        outcome: check_monotonicity(m),
    });
    results.push(PropertyResult {
        name: "filter-extension-closure",
        outcome: if enumerable {
            check_filter_extension_closure(m)
        } else {
            Outcome::Skipped("carrier too large for filter enumeration".into())
        },
    });
    results.push(PropertyResult {
        name: "prime-extension-witnesses",
        outcome: if m.size_a() <= 8 && m.size_b() <= 8 {
            check_prime_extension(m)
        } else {
            Outcome::Skipped("carrier too large for the full extension scan".into())
        },
    });
    results.push(PropertyResult {
        name: "membership-lemma",
        outcome: check_membership_lemma(m),
    });
    results.push(PropertyResult {
        name: "representation-isomorphism",
        outcome: check_representation(m, budget),
    });
    results.push(PropertyResult {
        name: "congruence-duality",
        outcome: check_congruence_duality(m, budget),
    });
    results.push(PropertyResult {
        name: "classification",
        outcome: check_classification(m, budget),
    });
    results
}

/// Frame-level properties.
pub fn run_frame_suite(f: &FiFrame, budget: &Budget) -> Vec<PropertyResult> {
    vec![
        PropertyResult {
            name: "frame-roundtrip-isomorphism",
            outcome: check_frame_roundtrip(f, budget),
        },
        PropertyResult {
            name: "space-conditions",
            outcome: check_urquhart(f, budget),
        },
    ]
}
