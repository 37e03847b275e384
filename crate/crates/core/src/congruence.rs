//! Congruences of FIDL-modules and their dual description as pairs of closed
//! subsets of the two spectra, plus the simplicity and subdirect
//! irreducibility classifiers.

use crate::doc;
use crate::frame::{canonical_frame, CanonicalFrame, FiFrame};
use crate::module::FidlModule;
use crate::partition::Partition;
use crate::subset::Subset;
use crate::Budget;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("{what} needs {size}, over the budget of {budget}")]
    BudgetExceeded {
        what: String,
        size: usize,
        budget: usize,
    },
    #[error("the pair is not strongly closed")]
    NotStronglyClosed,
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

/// A pair of lattice congruences jointly compatible with fusion and
/// implication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FidlCongruence {
    pub theta_a: Partition,
    pub theta_b: Partition,
}

impl FidlCongruence {
    /// Inclusion of relation pairs: componentwise refinement.
    pub fn leq(&self, other: &FidlCongruence) -> bool {
        self.theta_a.refines(&other.theta_a) && self.theta_b.refines(&other.theta_b)
    }

    pub fn is_identity(&self) -> bool {
        self.theta_a.is_identity() && self.theta_b.is_identity()
    }
}

/// Compatibility with the fusion: related inputs give related fusions.
pub fn fusion_compatible(m: &FidlModule, c: &FidlCongruence) -> bool {
    let na = m.size_a();
    let nb = m.size_b();
    for a in 0..na {
        for a2 in 0..na {
            if !c.theta_a.same(a, a2) {
                continue;
            }
            for b in 0..nb {
                for b2 in 0..nb {
                    if c.theta_b.same(b, b2) && !c.theta_a.same(m.fusion(a, b), m.fusion(a2, b2)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Compatibility with the implication: related inputs give related values.
pub fn implication_compatible(m: &FidlModule, c: &FidlCongruence) -> bool {
    let na = m.size_a();
    let nb = m.size_b();
    for a in 0..na {
        for a2 in 0..na {
            if !c.theta_a.same(a, a2) {
                continue;
            }
            for b in 0..nb {
                for b2 in 0..nb {
                    if c.theta_b.same(b, b2)
                        && !c.theta_a.same(m.implication(b, a), m.implication(b2, a2))
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Which compatibility conditions a congruence pair (or the matching closed
/// pair) must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CongruenceSort {
    FusionOnly,
    ImplicationOnly,
    Both,
}

fn sort_admits(m: &FidlModule, which: CongruenceSort, c: &FidlCongruence) -> bool {
    match which {
        CongruenceSort::FusionOnly => fusion_compatible(m, c),
        CongruenceSort::ImplicationOnly => implication_compatible(m, c),
        CongruenceSort::Both => fusion_compatible(m, c) && implication_compatible(m, c),
    }
}

// ---------------------------------------------------------------------------
// Neighbourhood sets of a frame.
//
// Maximality and minimality are taken inside the relation slices (the maximal
// elements of R^{-1}(z) componentwise), which is the reading the congruence
// correspondence needs; maximality in the whole poset breaks it already on a
// three-chain modal module.
// ---------------------------------------------------------------------------

/// Maximal first coordinates over `(. , y, z) ∈ R`.
pub fn r1(f: &FiFrame, y: usize, z: usize) -> Subset {
    let mut slice = Subset::empty(f.x().len());
    for x in 0..f.x().len() {
        if f.r().contains(x, y, z) {
            slice.insert(x);
        }
    }
    f.x().maximal_in(&slice)
}

/// Maximal second coordinates over `(x, . , z) ∈ R`.
pub fn r2(f: &FiFrame, x: usize, z: usize) -> Subset {
    let mut slice = Subset::empty(f.y().len());
    for y in 0..f.y().len() {
        if f.r().contains(x, y, z) {
            slice.insert(y);
        }
    }
    f.y().maximal_in(&slice)
}

/// Maximal first coordinates over `(. , x, z) ∈ T`.
pub fn t1(f: &FiFrame, x: usize, z: usize) -> Subset {
    let mut slice = Subset::empty(f.y().len());
    for u in 0..f.y().len() {
        if f.t().contains(u, x, z) {
            slice.insert(u);
        }
    }
    f.y().maximal_in(&slice)
}

/// Minimal third coordinates over `(y, x, .) ∈ T`.
pub fn t3(f: &FiFrame, y: usize, x: usize) -> Subset {
    let mut slice = Subset::empty(f.x().len());
    for z in 0..f.x().len() {
        if f.t().contains(y, x, z) {
            slice.insert(z);
        }
    }
    f.x().minimal_in(&slice)
}

/// Pairs `(x, y)` maximal in both coordinates among those related to `z`.
pub fn max_r_inv(f: &FiFrame, z: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..f.x().len() {
        let r2x = r2(f, x, z);
        for y in r2x.iter() {
            if r1(f, y, z).contains(x) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Pairs `(y, z)` with `y` maximal and `z` minimal among those related to `x`
/// through T.
pub fn d_set(f: &FiFrame, x: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for z in 0..f.x().len() {
        let t1x = t1(f, x, z);
        for y in t1x.iter() {
            if t3(f, y, x).contains(z) {
                out.push((y, z));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Closed pairs.
// ---------------------------------------------------------------------------

/// A pair of point sets on the two sorts of a frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedPair {
    pub z1: Subset,
    pub z2: Subset,
}

impl ClosedPair {
    pub fn leq(&self, other: &ClosedPair) -> bool {
        self.z1.is_subset_of(&other.z1) && self.z2.is_subset_of(&other.z2)
    }
}

pub fn is_r_closed(f: &FiFrame, pair: &ClosedPair) -> bool {
    pair.z1.iter().all(|z| {
        max_r_inv(f, z)
            .into_iter()
            .all(|(x, y)| pair.z1.contains(x) && pair.z2.contains(y))
    })
}

pub fn is_t_closed(f: &FiFrame, pair: &ClosedPair) -> bool {
    pair.z1.iter().all(|x| {
        d_set(f, x)
            .into_iter()
            .all(|(y, z)| pair.z2.contains(y) && pair.z1.contains(z))
    })
}

pub fn is_strongly_closed(f: &FiFrame, pair: &ClosedPair) -> bool {
    is_r_closed(f, pair) && is_t_closed(f, pair)
}

fn closure_kind_accepts(
    which: CongruenceSort,
    max_r: &[Vec<(usize, usize)>],
    d: &[Vec<(usize, usize)>],
    pair: &ClosedPair,
) -> bool {
    let r_ok = || {
        pair.z1.iter().all(|z| {
            max_r[z]
                .iter()
                .all(|&(x, y)| pair.z1.contains(x) && pair.z2.contains(y))
        })
    };
    let t_ok = || {
        pair.z1.iter().all(|x| {
            d[x].iter()
                .all(|&(y, z)| pair.z2.contains(y) && pair.z1.contains(z))
        })
    };
    match which {
        CongruenceSort::FusionOnly => r_ok(),
        CongruenceSort::ImplicationOnly => t_ok(),
        CongruenceSort::Both => r_ok() && t_ok(),
    }
}

/// All pairs closed for the given conditions, in canonical order (ascending
/// bit pattern of `z1`, then of `z2`).
pub fn enumerate_closed_pairs(
    f: &FiFrame,
    which: CongruenceSort,
    budget: &Budget,
) -> Result<Vec<ClosedPair>, CongruenceError> {
    let nx = f.x().len();
    let ny = f.y().len();
    if nx + ny > budget.closed_enum_points {
        return Err(CongruenceError::BudgetExceeded {
            what: "closed-pair enumeration".into(),
            size: nx + ny,
            budget: budget.closed_enum_points,
        });
    }
    let max_r: Vec<_> = (0..nx).map(|z| max_r_inv(f, z)).collect();
    let d: Vec<_> = (0..nx).map(|x| d_set(f, x)).collect();
    let mut out = Vec::new();
    for bits1 in 0..(1u64 << nx) {
        let z1 = Subset::from_bits(nx, bits1);
        for bits2 in 0..(1u64 << ny) {
            let pair = ClosedPair {
                z1: z1.clone(),
                z2: Subset::from_bits(ny, bits2),
            };
            if closure_kind_accepts(which, &max_r, &d, &pair) {
                out.push(pair);
            }
        }
    }
    Ok(out)
}

pub fn enumerate_strongly_closed(
    f: &FiFrame,
    budget: &Budget,
) -> Result<Vec<ClosedPair>, CongruenceError> {
    enumerate_closed_pairs(f, CongruenceSort::Both, budget)
}

/// The congruence pair induced by a closed pair, without any closure check.
pub fn theta_of_pair(m: &FidlModule, dual: &CanonicalFrame, pair: &ClosedPair) -> FidlCongruence {
    FidlCongruence {
        theta_a: m.lattice_a().theta_from_closed(dual.spectrum_a(), &pair.z1),
        theta_b: m.lattice_b().theta_from_closed(dual.spectrum_b(), &pair.z2),
    }
}

/// The congruence of a strongly closed pair; the result is checked to be
/// compatible with fusion and implication.
pub fn theta_pair(
    m: &FidlModule,
    dual: &CanonicalFrame,
    pair: &ClosedPair,
) -> Result<FidlCongruence, CongruenceError> {
    if !is_strongly_closed(dual.frame(), pair) {
        return Err(CongruenceError::NotStronglyClosed);
    }
    let c = theta_of_pair(m, dual, pair);
    if !fusion_compatible(m, &c) {
        return Err(CongruenceError::TheoremViolation(format!(
            "theta of the strongly closed pair {:?}/{:?} is not fusion-compatible",
            pair.z1, pair.z2
        )));
    }
    if !implication_compatible(m, &c) {
        return Err(CongruenceError::TheoremViolation(format!(
            "theta of the strongly closed pair {:?}/{:?} is not implication-compatible",
            pair.z1, pair.z2
        )));
    }
    Ok(c)
}

// ---------------------------------------------------------------------------
// Congruence oracles.
// ---------------------------------------------------------------------------

/// Partition-based oracle: every pair of lattice congruences, filtered by the
/// requested compatibility. Ground truth, exponential in the carrier sizes.
pub fn enumerate_congruences_oracle(
    m: &FidlModule,
    which: CongruenceSort,
    budget: &Budget,
) -> Result<Vec<FidlCongruence>, CongruenceError> {
    if m.size_a() > budget.oracle_a_max {
        return Err(CongruenceError::BudgetExceeded {
            what: "partition oracle on sort A".into(),
            size: m.size_a(),
            budget: budget.oracle_a_max,
        });
    }
    if m.size_b() > budget.oracle_b_max {
        return Err(CongruenceError::BudgetExceeded {
            what: "partition oracle on sort B".into(),
            size: m.size_b(),
            budget: budget.oracle_b_max,
        });
    }
    let cons_a = m.lattice_a().congruences_brute_force();
    let cons_b = m.lattice_b().congruences_brute_force();
    let mut out = Vec::new();
    for ta in &cons_a {
        for tb in &cons_b {
            let c = FidlCongruence {
                theta_a: ta.clone(),
                theta_b: tb.clone(),
            };
            if sort_admits(m, which, &c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Spectral oracle: lattice congruences of each sort arise from subsets of
/// its spectrum; enumerate those and filter by compatibility. Independent of
/// the closed-pair machinery (no closure conditions involved) and reaches
/// larger carriers than the partition oracle.
pub fn enumerate_congruences_spectral(
    m: &FidlModule,
    dual: &CanonicalFrame,
    which: CongruenceSort,
    budget: &Budget,
) -> Result<Vec<FidlCongruence>, CongruenceError> {
    let nx = dual.spectrum_a().len();
    let ny = dual.spectrum_b().len();
    if nx + ny > budget.closed_enum_points {
        return Err(CongruenceError::BudgetExceeded {
            what: "spectral congruence enumeration".into(),
            size: nx + ny,
            budget: budget.closed_enum_points,
        });
    }
    let mut out = Vec::new();
    for bits1 in 0..(1u64 << nx) {
        let ya = Subset::from_bits(nx, bits1);
        let theta_a = m.lattice_a().theta_from_closed(dual.spectrum_a(), &ya);
        for bits2 in 0..(1u64 << ny) {
            let yb = Subset::from_bits(ny, bits2);
            let c = FidlCongruence {
                theta_a: theta_a.clone(),
                theta_b: m.lattice_b().theta_from_closed(dual.spectrum_b(), &yb),
            };
            if sort_admits(m, which, &c) {
                out.push(c);
            }
        }
    }
    // Distinct subsets of one spectrum give distinct lattice congruences, so
    // the pair list is duplicate-free; keep it sorted for comparisons.
    out.sort();
    out.dedup();
    Ok(out)
}

/// Do the two oracles produce exactly the same congruence sets?
pub fn oracles_agree(
    m: &FidlModule,
    dual: &CanonicalFrame,
    budget: &Budget,
) -> Result<bool, CongruenceError> {
    for which in [
        CongruenceSort::FusionOnly,
        CongruenceSort::ImplicationOnly,
        CongruenceSort::Both,
    ] {
        let mut partition_based = enumerate_congruences_oracle(m, which, budget)?;
        partition_based.sort();
        let spectral = enumerate_congruences_spectral(m, dual, which, budget)?;
        if partition_based != spectral {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// The anti-isomorphism check.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairingReport {
    pub kind: CongruenceSort,
    pub closed_count: usize,
    pub congruence_count: usize,
    /// Every closed pair maps to a congruence of the matching kind.
    pub images_compatible: bool,
    pub bijective: bool,
    pub order_reversing: bool,
    pub discrepancies: Vec<String>,
}

impl PairingReport {
    pub fn holds(&self) -> bool {
        self.closed_count == self.congruence_count
            && self.images_compatible
            && self.bijective
            && self.order_reversing
            && self.discrepancies.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AntiIsoReport {
    pub pairings: Vec<PairingReport>,
    pub oracles_agree: bool,
}

impl AntiIsoReport {
    pub fn holds(&self) -> bool {
        self.oracles_agree && self.pairings.iter().all(|p| p.holds())
    }
}

/// Verify, for each of the three closure kinds, that the theta map is an
/// order-reversing bijection from the closed pairs onto the congruences of
/// the matching compatibility, and that the two congruence oracles agree.
/// Failures are reported, not raised.
pub fn anti_isomorphism_check(
    m: &FidlModule,
    budget: &Budget,
) -> Result<AntiIsoReport, CongruenceError> {
    let dual = canonical_frame(m);
    let mut pairings = Vec::new();
    for which in [
        CongruenceSort::FusionOnly,
        CongruenceSort::ImplicationOnly,
        CongruenceSort::Both,
    ] {
        let closed = enumerate_closed_pairs(dual.frame(), which, budget)?;
        let congruences = enumerate_congruences_oracle(m, which, budget)?;
        let images: Vec<FidlCongruence> = closed
            .iter()
            .map(|pair| theta_of_pair(m, &dual, pair))
            .collect();
        let mut discrepancies = Vec::new();

        let mut images_compatible = true;
        for (pair, image) in closed.iter().zip(&images) {
            if !sort_admits(m, which, image) {
                images_compatible = false;
                discrepancies.push(format!(
                    "closed pair {:?}/{:?} maps to an incompatible congruence",
                    pair.z1, pair.z2
                ));
            }
        }

        let mut sorted_images = images.clone();
        sorted_images.sort();
        let injective = sorted_images.windows(2).all(|w| w[0] != w[1]);
        if !injective {
            discrepancies.push("theta map is not injective on closed pairs".into());
        }
        let mut sorted_congruences = congruences.clone();
        sorted_congruences.sort();
        let surjective = sorted_congruences
            .iter()
            .all(|c| sorted_images.binary_search(c).is_ok());
        if !surjective {
            discrepancies.push("theta map misses a congruence of the matching kind".into());
        }

        let mut order_reversing = true;
        'order: for (i, pi) in closed.iter().enumerate() {
            for (j, pj) in closed.iter().enumerate() {
                if pi.leq(pj) != images[j].leq(&images[i]) {
                    order_reversing = false;
                    discrepancies.push(format!("order reversal fails between pairs {i} and {j}"));
                    break 'order;
                }
            }
        }

        pairings.push(PairingReport {
            kind: which,
            closed_count: closed.len(),
            congruence_count: congruences.len(),
            images_compatible,
            bijective: injective && surjective && closed.len() == congruences.len(),
            order_reversing,
            discrepancies,
        });
    }
    let agree = oracles_agree(m, &dual, budget)?;
    Ok(AntiIsoReport {
        pairings,
        oracles_agree: agree,
    })
}

// ---------------------------------------------------------------------------
// Closure operator and classification.
// ---------------------------------------------------------------------------

/// Least strongly closed pair containing the seed: a worklist fixpoint over
/// the two absorption conditions. Polynomial, no budget needed.
pub fn closure_strongly_closed(f: &FiFrame, seed_z1: &Subset, seed_z2: &Subset) -> ClosedPair {
    let nx = f.x().len();
    let max_r: Vec<_> = (0..nx).map(|z| max_r_inv(f, z)).collect();
    let d: Vec<_> = (0..nx).map(|x| d_set(f, x)).collect();
    let mut z1 = seed_z1.clone();
    let mut z2 = seed_z2.clone();
    loop {
        let mut grew = false;
        for z in z1.indices() {
            for &(x, y) in &max_r[z] {
                if !z1.contains(x) {
                    z1.insert(x);
                    grew = true;
                }
                if !z2.contains(y) {
                    z2.insert(y);
                    grew = true;
                }
            }
            for &(y, w) in &d[z] {
                if !z2.contains(y) {
                    z2.insert(y);
                    grew = true;
                }
                if !z1.contains(w) {
                    z1.insert(w);
                    grew = true;
                }
            }
        }
        if !grew {
            return ClosedPair { z1, z2 };
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "simple")]
    Simple,
    #[serde(rename = "subdirectly_irreducible_not_simple")]
    SubdirectlyIrreducibleNotSimple,
    #[serde(rename = "not_SI")]
    NotSubdirectlyIrreducible,
}

/// The two spectral classification criteria, evaluated as one decision tree:
/// all point closures full means simple; otherwise a non-empty full-closure
/// region means subdirectly irreducible but not simple.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralDiagnostics {
    pub all_point_closures_full: bool,
    pub full_closure_region_size: usize,
    pub verdict: Verdict,
}

/// A disagreement between the authoritative congruence-lattice verdict and a
/// spectral criterion, with everything needed to replay it.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscrepancyRecord {
    pub criterion: String,
    pub authoritative: Verdict,
    pub spectral: Verdict,
    pub module: serde_json::Value,
    pub frame: serde_json::Value,
    pub congruences: Vec<serde_json::Value>,
    pub strongly_closed: Vec<serde_json::Value>,
    pub witness: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyReport {
    pub verdict: Verdict,
    pub con_lattice_size: usize,
    pub strongly_closed_count: usize,
    pub spectral: Option<SpectralDiagnostics>,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

pub const CRITERION_SIMPLE_VIA_CLOSURE: &str = "simple-iff-all-point-closures-full";
pub const CRITERION_SI_VIA_REGION: &str = "si-iff-full-closure-region-proper";

/// Authoritative verdict from the congruence lattice itself.
fn authoritative_verdict(m: &FidlModule, congruences: &[FidlCongruence]) -> Verdict {
    if m.is_trivial() {
        return Verdict::Trivial;
    }
    if congruences.len() == 2 {
        return Verdict::Simple;
    }
    let nontrivial: Vec<&FidlCongruence> =
        congruences.iter().filter(|c| !c.is_identity()).collect();
    let has_minimum = nontrivial
        .iter()
        .any(|cand| nontrivial.iter().all(|other| cand.leq(other)));
    if has_minimum {
        Verdict::SubdirectlyIrreducibleNotSimple
    } else {
        Verdict::NotSubdirectlyIrreducible
    }
}

/// Classify a module as trivial, simple, subdirectly irreducible but not
/// simple, or neither. The congruence lattice is authoritative; the spectral
/// criteria are evaluated as diagnostics and disagreements are recorded.
pub fn classify(m: &FidlModule, budget: &Budget) -> Result<ClassifyReport, CongruenceError> {
    let dual = canonical_frame(m);
    let congruences = enumerate_congruences_oracle(m, CongruenceSort::Both, budget)?;
    let strongly_closed = enumerate_strongly_closed(dual.frame(), budget)?;
    let verdict = authoritative_verdict(m, &congruences);

    let nx = dual.spectrum_a().len();
    let ny = dual.spectrum_b().len();
    let mut spectral = None;
    let mut discrepancies = Vec::new();
    // Point-pair quantification is vacuous when either spectrum is empty;
    // skip the spectral criteria there to avoid misclassifying by vacuity.
    if nx > 0 && ny > 0 {
        let full = ClosedPair {
            z1: Subset::full(nx),
            z2: Subset::full(ny),
        };
        let mut region = 0usize;
        let mut witness_pair: Option<(usize, usize)> = None;
        for p in 0..nx {
            for q in 0..ny {
                let cl = closure_strongly_closed(
                    dual.frame(),
                    &Subset::singleton(nx, p),
                    &Subset::singleton(ny, q),
                );
                if cl == full {
                    region += 1;
                } else if witness_pair.is_none() {
                    witness_pair = Some((p, q));
                }
            }
        }
        let all_full = region == nx * ny;
        let spectral_verdict = if all_full {
            Verdict::Simple
        } else if region > 0 {
            Verdict::SubdirectlyIrreducibleNotSimple
        } else {
            Verdict::NotSubdirectlyIrreducible
        };
        let criterion = if all_full {
            CRITERION_SIMPLE_VIA_CLOSURE
        } else {
            CRITERION_SI_VIA_REGION
        };
        if spectral_verdict != verdict {
            discrepancies.push(DiscrepancyRecord {
                criterion: criterion.to_string(),
                authoritative: verdict,
                spectral: spectral_verdict,
                module: doc::module_payload(m),
                frame: doc::frame_payload(dual.frame()),
                congruences: congruences.iter().map(doc::congruence_payload).collect(),
                strongly_closed: strongly_closed
                    .iter()
                    .map(doc::closed_pair_payload)
                    .collect(),
                witness: witness_pair.map(|(p, q)| serde_json::json!({ "pointPair": [p, q] })),
            });
        }
        spectral = Some(SpectralDiagnostics {
            all_point_closures_full: all_full,
            full_closure_region_size: region,
            verdict: spectral_verdict,
        });
    }

    Ok(ClassifyReport {
        verdict,
        con_lattice_size: congruences.len(),
        strongly_closed_count: strongly_closed.len(),
        spectral,
        discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn neighborhoods_on_ptframe() {
        let f = fixtures::ptframe();
        assert_eq!(max_r_inv(&f, 0), vec![(0, 0)]);
        assert_eq!(d_set(&f, 0), vec![(0, 0)]);
        assert_eq!(r1(&f, 0, 0).indices(), vec![0]);
        assert_eq!(t3(&f, 0, 0).indices(), vec![0]);
    }

    #[test]
    fn neighborhoods_on_empty_relation() {
        let x = crate::poset::Poset::point("x");
        let y = crate::poset::Poset::point("y");
        let f = crate::frame::validate_frame(x, y, &[], &[]).unwrap();
        assert!(max_r_inv(&f, 0).is_empty());
        assert!(d_set(&f, 0).is_empty());
    }

    #[test]
    fn strongly_closed_pairs_of_ptframe() {
        let f = fixtures::ptframe();
        let pairs = enumerate_strongly_closed(&f, &budget()).unwrap();
        let as_indices: Vec<(Vec<usize>, Vec<usize>)> = pairs
            .iter()
            .map(|p| (p.z1.indices(), p.z2.indices()))
            .collect();
        assert_eq!(
            as_indices,
            vec![(vec![], vec![]), (vec![], vec![0]), (vec![0], vec![0]),],
            "({{pt}}, {{}}) must fail the fusion absorption"
        );
    }

    #[test]
    fn all_pairs_qualify_when_relations_are_empty() {
        let x =
            crate::poset::Poset::from_leq_fn(vec!["a".into(), "b".into()], |a, b| a == b).unwrap();
        let y = crate::poset::Poset::point("p");
        let f = crate::frame::validate_frame(x, y, &[], &[]).unwrap();
        assert_eq!(enumerate_strongly_closed(&f, &budget()).unwrap().len(), 8);
    }

    #[test]
    fn empty_frame_has_one_pair() {
        let f = crate::frame::validate_frame(
            crate::poset::Poset::empty(),
            crate::poset::Poset::empty(),
            &[],
            &[],
        )
        .unwrap();
        assert_eq!(enumerate_strongly_closed(&f, &budget()).unwrap().len(), 1);
    }

    #[test]
    fn theta_pairs_on_mod2() {
        let m = fixtures::mod2();
        let dual = canonical_frame(&m);
        let full = ClosedPair {
            z1: Subset::full(1),
            z2: Subset::full(1),
        };
        let c = theta_pair(&m, &dual, &full).unwrap();
        assert!(c.theta_a.is_identity() && c.theta_b.is_identity());

        let empty = ClosedPair {
            z1: Subset::empty(1),
            z2: Subset::empty(1),
        };
        let c = theta_pair(&m, &dual, &empty).unwrap();
        assert!(c.theta_a.is_total() && c.theta_b.is_total());

        let mixed = ClosedPair {
            z1: Subset::empty(1),
            z2: Subset::full(1),
        };
        let c = theta_pair(&m, &dual, &mixed).unwrap();
        assert!(c.theta_a.is_total() && c.theta_b.is_identity());

        let not_closed = ClosedPair {
            z1: Subset::full(1),
            z2: Subset::empty(1),
        };
        assert_eq!(
            theta_pair(&m, &dual, &not_closed).unwrap_err(),
            CongruenceError::NotStronglyClosed
        );
    }

    #[test]
    fn mod2_congruence_oracle() {
        let m = fixtures::mod2();
        let cons = enumerate_congruences_oracle(&m, CongruenceSort::Both, &budget()).unwrap();
        assert_eq!(cons.len(), 3);
        // (identity on A, total on B) breaks fusion compatibility.
        let bad = FidlCongruence {
            theta_a: Partition::identity(2),
            theta_b: Partition::total(2),
        };
        assert!(!fusion_compatible(&m, &bad));
        assert!(cons.iter().all(|c| c != &bad));
        // Bounds of the congruence lattice are always present.
        assert!(cons.iter().any(|c| c.is_identity()));
        assert!(cons
            .iter()
            .any(|c| c.theta_a.is_total() && c.theta_b.is_total()));
    }

    #[test]
    fn trivial_module_has_one_congruence() {
        let m = fixtures::trivial_module();
        let cons = enumerate_congruences_oracle(&m, CongruenceSort::Both, &budget()).unwrap();
        assert_eq!(cons.len(), 1);
    }

    #[test]
    fn oracle_budget_guard() {
        let m = fixtures::mod2();
        let tight = Budget {
            oracle_a_max: 1,
            ..Budget::default()
        };
        assert!(matches!(
            enumerate_congruences_oracle(&m, CongruenceSort::Both, &tight),
            Err(CongruenceError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn anti_isomorphism_on_fixtures() {
        for m in [
            fixtures::mod2(),
            fixtures::trivial_module(),
            fixtures::modal_bool4(),
            fixtures::heyting_chain3(),
        ] {
            let report = anti_isomorphism_check(&m, &budget()).unwrap();
            assert!(report.holds(), "{report:?}");
        }
    }

    #[test]
    fn mod2_anti_isomorphism_counts() {
        let report = anti_isomorphism_check(&fixtures::mod2(), &budget()).unwrap();
        let strong = &report.pairings[2];
        assert_eq!(strong.closed_count, 3);
        assert_eq!(strong.congruence_count, 3);
        assert!(report.oracles_agree);
    }

    #[test]
    fn closure_examples() {
        let f = fixtures::ptframe();
        let cl = closure_strongly_closed(&f, &Subset::full(1), &Subset::full(1));
        assert!(cl.z1.is_full() && cl.z2.is_full());

        let cl = closure_strongly_closed(&f, &Subset::full(1), &Subset::empty(1));
        assert!(
            cl.z1.is_full() && cl.z2.is_full(),
            "the T-absorption pulls the point into z2"
        );

        let cl = closure_strongly_closed(&f, &Subset::empty(1), &Subset::empty(1));
        assert!(cl.z1.is_empty() && cl.z2.is_empty());
    }

    #[test]
    fn closure_is_least_strongly_closed_superset() {
        let m = fixtures::modal_bool4();
        let dual = canonical_frame(&m);
        let f = dual.frame();
        let nx = f.x().len();
        let ny = f.y().len();
        let all = enumerate_strongly_closed(f, &budget()).unwrap();
        for bits1 in 0..(1u64 << nx) {
            for bits2 in 0..(1u64 << ny) {
                let seed1 = Subset::from_bits(nx, bits1);
                let seed2 = Subset::from_bits(ny, bits2);
                let cl = closure_strongly_closed(f, &seed1, &seed2);
                assert!(is_strongly_closed(f, &cl));
                assert!(seed1.is_subset_of(&cl.z1) && seed2.is_subset_of(&cl.z2));
                for p in all
                    .iter()
                    .filter(|p| seed1.is_subset_of(&p.z1) && seed2.is_subset_of(&p.z2))
                {
                    assert!(cl.leq(p), "closure must sit below every closed superset");
                }
            }
        }
    }

    #[test]
    fn classify_mod2_is_the_known_edge_case() {
        let report = classify(&fixtures::mod2(), &budget()).unwrap();
        assert_eq!(report.verdict, Verdict::SubdirectlyIrreducibleNotSimple);
        assert_eq!(report.con_lattice_size, 3);
        assert_eq!(report.strongly_closed_count, 3);
        assert_eq!(report.discrepancies.len(), 1);
        assert_eq!(
            report.discrepancies[0].criterion,
            CRITERION_SIMPLE_VIA_CLOSURE
        );
        assert_eq!(report.discrepancies[0].spectral, Verdict::Simple);
        let spectral = report.spectral.as_ref().unwrap();
        assert!(spectral.all_point_closures_full);
    }

    #[test]
    fn classify_trivial_module() {
        let report = classify(&fixtures::trivial_module(), &budget()).unwrap();
        assert_eq!(report.verdict, Verdict::Trivial);
        assert_eq!(report.con_lattice_size, 1);
        assert_eq!(report.strongly_closed_count, 1);
        assert!(report.spectral.is_none());
        assert!(report.discrepancies.is_empty());
    }

    #[test]
    fn classify_one_element_a_sort_is_simple() {
        // With a one-element A sort every congruence is (total, theta_B), so
        // the congruence lattice is that of B; for a two-chain B that means
        // exactly two elements. The A spectrum is empty, so the spectral
        // diagnostics are skipped rather than evaluated vacuously.
        let one = fixtures::chain(1);
        let two = fixtures::chain(2);
        let m =
            crate::module::validate_module(one, two, &[vec![0, 0]], &[vec![0], vec![0]]).unwrap();
        let report = classify(&m, &budget()).unwrap();
        assert_eq!(report.verdict, Verdict::Simple);
        assert_eq!(report.con_lattice_size, 2);
        assert!(report.spectral.is_none());
        assert!(report.discrepancies.is_empty());
    }

    #[test]
    fn every_two_sorted_module_has_the_mixed_bound_congruence() {
        // (total on A, identity on B) is always compatible, so no module
        // with at least two elements on each sort is simple.
        for m in [
            fixtures::mod2(),
            fixtures::modal_bool4(),
            fixtures::heyting_chain3(),
        ] {
            let mixed = FidlCongruence {
                theta_a: Partition::total(m.size_a()),
                theta_b: Partition::identity(m.size_b()),
            };
            assert!(fusion_compatible(&m, &mixed));
            assert!(implication_compatible(&m, &mixed));
            let report = classify(&m, &budget()).unwrap();
            assert_ne!(report.verdict, Verdict::Simple);
        }
    }

    #[test]
    fn classify_square_of_mod2_is_not_subdirectly_irreducible() {
        // The kernels of the two projections are nontrivial congruences that
        // meet in the identity, so no minimum nontrivial congruence exists.
        let m = fixtures::mod2();
        let (p, _) =
            crate::module::product_module(&[m.clone(), m], crate::module::LATTICE_BUDGET_DEFAULT)
                .unwrap();
        let report = classify(&p, &budget()).unwrap();
        assert_eq!(report.verdict, Verdict::NotSubdirectlyIrreducible);
        assert!(report.discrepancies.is_empty(), "{report:?}");
    }

    #[test]
    fn classify_heyting_chain3() {
        // Seven congruences with minimum (0|m1, identity): subdirectly
        // irreducible but not simple, and the spectral criteria agree.
        let report = classify(&fixtures::heyting_chain3(), &budget()).unwrap();
        assert_eq!(report.verdict, Verdict::SubdirectlyIrreducibleNotSimple);
        assert_eq!(report.con_lattice_size, 7);
        assert!(report.discrepancies.is_empty(), "{report:?}");
        let spectral = report.spectral.as_ref().unwrap();
        assert_eq!(spectral.full_closure_region_size, 2);
    }
}
