//! Deterministic random generators for lattices, modules, frames,
//! homomorphisms and subalgebra carriers. Identical seeds give identical
//! instances, byte for byte, across runs and platforms.

use crate::frame::{insert_closed, validate_frame, FiFrame, TernaryRel};
use crate::lattice::{increasing_sets, FiniteLattice};
use crate::module::{
    heyting_power_module, product_module, restriction_module, validate_module, FidlModule,
};
use crate::morphism::{identity_hom, validate_hom, FidlHomomorphism, SubalgebraCandidate};
use crate::poset::Poset;
use crate::subset::Subset;
use crate::Budget;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    HeytingPower,
    Modal,
    Product,
    RandomTables,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::HeytingPower,
        Strategy::Modal,
        Strategy::Product,
        Strategy::RandomTables,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::HeytingPower => "heyting-power",
            Strategy::Modal => "modal",
            Strategy::Product => "product",
            Strategy::RandomTables => "random-tables",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "heyting-power" => Ok(Strategy::HeytingPower),
            "modal" => Ok(Strategy::Modal),
            "product" => Ok(Strategy::Product),
            "random-tables" => Ok(Strategy::RandomTables),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub max_a: usize,
    pub max_b: usize,
    pub count: usize,
    pub strategy: Strategy,
}

/// Independent per-instance stream: instances do not shift when earlier ones
/// change shape.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A random poset on `n` points: a random strict order on a shuffled base,
/// transitively closed.
pub fn random_poset(rng: &mut ChaCha8Rng, n: usize) -> Poset {
    let mut lt = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.45) {
                lt[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    Poset::from_leq_fn(labels, |a, b| a == b || lt[a][b]).expect("closed strict order")
}

/// A random bounded distributive lattice of at most `max_size` elements,
/// with at least two elements: the increasing sets of a small random poset,
/// relabelled `e0`, `e1`, ..
pub fn random_distributive_lattice(rng: &mut ChaCha8Rng, max_size: usize) -> FiniteLattice {
    assert!(max_size >= 2, "need room for a two-element lattice");
    loop {
        let base = rng.gen_range(1..=4);
        let poset = random_poset(rng, base);
        let upsets = increasing_sets(&poset);
        if upsets.len() > max_size {
            continue;
        }
        let labels = (0..upsets.len()).map(|i| format!("e{i}")).collect();
        return upsets
            .lattice()
            .relabeled(labels)
            .expect("generated labels are unique");
    }
}

/// A random join-preserving map sending bottom to bottom: free on the
/// join-irreducibles, extended by joins.
pub fn random_join_hom(rng: &mut ChaCha8Rng, l: &FiniteLattice) -> Vec<usize> {
    let jis = l.join_irreducibles();
    let targets: Vec<usize> = jis.iter().map(|_| rng.gen_range(0..l.len())).collect();
    (0..l.len())
        .map(|x| {
            l.join_all(
                jis.iter()
                    .zip(&targets)
                    .filter(|(&j, _)| l.leq(j, x))
                    .map(|(_, &t)| t),
            )
        })
        .collect()
}

/// A random meet-preserving map sending top to top: free on the
/// meet-irreducibles, extended by meets.
pub fn random_meet_hom(rng: &mut ChaCha8Rng, l: &FiniteLattice) -> Vec<usize> {
    let mis = l.meet_irreducibles();
    let targets: Vec<usize> = mis.iter().map(|_| rng.gen_range(0..l.len())).collect();
    (0..l.len())
        .map(|x| {
            l.meet_all(
                mis.iter()
                    .zip(&targets)
                    .filter(|(&m, _)| l.leq(x, m))
                    .map(|(_, &t)| t),
            )
        })
        .collect()
}

fn gen_heyting_power(
    rng: &mut ChaCha8Rng,
    max_a: usize,
    max_b: usize,
    budget: &Budget,
) -> FidlModule {
    loop {
        let h = random_distributive_lattice(rng, max_b.min(max_a));
        let mut max_exp = 0;
        while h.len().pow(max_exp + 1) <= max_a {
            max_exp += 1;
        }
        if max_exp == 0 {
            continue;
        }
        let exp = rng.gen_range(1..=max_exp as usize);
        return heyting_power_module(&h, exp, budget.lattice_max)
            .expect("power construction within budget");
    }
}

fn gen_modal(rng: &mut ChaCha8Rng, max_a: usize, budget: &Budget) -> FidlModule {
    let _ = budget;
    let a = random_distributive_lattice(rng, max_a);
    let b = crate::fixtures::chain(2);
    let diamond = random_join_hom(rng, &a);
    let box_op = random_meet_hom(rng, &a);
    let f: Vec<Vec<usize>> = (0..a.len()).map(|x| vec![a.bottom(), diamond[x]]).collect();
    let i: Vec<Vec<usize>> = vec![
        vec![a.top(); a.len()],
        (0..a.len()).map(|x| box_op[x]).collect(),
    ];
    validate_module(a, b, &f, &i).expect("modal construction satisfies the axioms")
}

fn gen_random_tables(rng: &mut ChaCha8Rng, max_a: usize, max_b: usize) -> FidlModule {
    let a = random_distributive_lattice(rng, max_a);
    let b = random_distributive_lattice(rng, max_b);
    // Sections on the join-irreducibles of B, completed through the join and
    // meet decompositions of arbitrary B-elements.
    let jis = b.join_irreducibles();
    let f_sections: Vec<Vec<usize>> = jis.iter().map(|_| random_join_hom(rng, &a)).collect();
    let i_sections: Vec<Vec<usize>> = jis.iter().map(|_| random_meet_hom(rng, &a)).collect();
    let f: Vec<Vec<usize>> = (0..a.len())
        .map(|x| {
            (0..b.len())
                .map(|bi| {
                    a.join_all(
                        jis.iter()
                            .enumerate()
                            .filter(|(_, &j)| b.leq(j, bi))
                            .map(|(k, _)| f_sections[k][x]),
                    )
                })
                .collect()
        })
        .collect();
    let i: Vec<Vec<usize>> = (0..b.len())
        .map(|bi| {
            (0..a.len())
                .map(|x| {
                    a.meet_all(
                        jis.iter()
                            .enumerate()
                            .filter(|(_, &j)| b.leq(j, bi))
                            .map(|(k, _)| i_sections[k][x]),
                    )
                })
                .collect()
        })
        .collect();
    validate_module(a, b, &f, &i).expect("section completion satisfies the axioms")
}

fn gen_product(rng: &mut ChaCha8Rng, max_a: usize, max_b: usize, budget: &Budget) -> FidlModule {
    let half_a = (max_a as f64).sqrt().floor() as usize;
    let half_b = (max_b as f64).sqrt().floor() as usize;
    let left = gen_module_with(rng, Strategy::Modal, half_a.max(2), half_b.max(2), budget);
    let right = gen_module_with(
        rng,
        Strategy::RandomTables,
        (max_a / left.size_a()).max(2),
        (max_b / left.size_b()).max(2),
        budget,
    );
    let (p, _) = product_module(&[left, right], budget.lattice_max).expect("product within budget");
    p
}

/// Generate one module with the given strategy and size bounds. All
/// strategies produce modules with at least two elements on the A sort.
pub fn gen_module_with(
    rng: &mut ChaCha8Rng,
    strategy: Strategy,
    max_a: usize,
    max_b: usize,
    budget: &Budget,
) -> FidlModule {
    match strategy {
        Strategy::HeytingPower => gen_heyting_power(rng, max_a.max(2), max_b.max(2), budget),
        Strategy::Modal => gen_modal(rng, max_a.max(2), budget),
        Strategy::Product => gen_product(rng, max_a.max(4), max_b.max(4), budget),
        Strategy::RandomTables => gen_random_tables(rng, max_a.max(2), max_b.max(2)),
    }
}

/// The mixed stream used by the suites: strategies cycle by index.
pub fn gen_module_mixed(
    seed: u64,
    index: u64,
    max_a: usize,
    max_b: usize,
    budget: &Budget,
) -> FidlModule {
    let strategy = Strategy::ALL[(index % 4) as usize];
    let mut rng = instance_rng(seed, index);
    gen_module_with(&mut rng, strategy, max_a, max_b, budget)
}

/// A random frame: random posets and relations generated as unions of
/// down-down-up cones, hence closed by construction.
pub fn random_frame(rng: &mut ChaCha8Rng, max_x: usize, max_y: usize) -> FiFrame {
    let nx = rng.gen_range(1..=max_x.max(1));
    let ny = rng.gen_range(1..=max_y.max(1));
    let x = random_poset(rng, nx);
    let y = {
        let labels = (0..ny).map(|i| format!("q{i}")).collect::<Vec<_>>();
        let inner = random_poset(rng, ny);
        Poset::from_leq_fn(labels, |a, b| inner.leq(a, b)).unwrap()
    };
    let mut r = TernaryRel::empty([nx, ny, nx]);
    let mut t = TernaryRel::empty([ny, nx, nx]);
    let r_seeds = rng.gen_range(0..=nx * ny);
    for _ in 0..r_seeds {
        let seed = [
            rng.gen_range(0..nx),
            rng.gen_range(0..ny),
            rng.gen_range(0..nx),
        ];
        insert_closed(&mut r, &x, &y, &x, seed);
    }
    let t_seeds = rng.gen_range(0..=nx * ny);
    for _ in 0..t_seeds {
        let seed = [
            rng.gen_range(0..ny),
            rng.gen_range(0..nx),
            rng.gen_range(0..nx),
        ];
        insert_closed(&mut t, &y, &x, &x, seed);
    }
    validate_frame(x, y, &r.triples(), &t.triples()).expect("cone unions are closed")
}

/// A random valid homomorphism, produced constructively: identities,
/// diagonals into squares, projections out of squares, sublattice
/// restrictions on the B sort, and representation embeddings.
pub fn random_hom(
    rng: &mut ChaCha8Rng,
    max_a: usize,
    max_b: usize,
    budget: &Budget,
) -> FidlHomomorphism {
    let kind = rng.gen_range(0..5u8);
    let strategy = Strategy::ALL[rng.gen_range(0..4usize)];
    let m = gen_module_with(rng, strategy, max_a, max_b, budget);
    match kind {
        0 => identity_hom(&m),
        1 => {
            // Diagonal into the square.
            let (p, _) = product_module(&[m.clone(), m.clone()], budget.lattice_max)
                .expect("square within budget");
            let sa = [m.size_a(), m.size_a()];
            let sb = [m.size_b(), m.size_b()];
            let alpha = (0..m.size_a())
                .map(|x| crate::lattice::product_encode(&sa, &[x, x]))
                .collect();
            let gamma = (0..m.size_b())
                .map(|x| crate::lattice::product_encode(&sb, &[x, x]))
                .collect();
            validate_hom(&m, &p, alpha, gamma).expect("diagonal is a homomorphism")
        }
        2 => {
            // A projection out of the square.
            let (_, projs) = product_module(&[m.clone(), m.clone()], budget.lattice_max)
                .expect("square within budget");
            let k = rng.gen_range(0..2usize);
            projs[k].clone()
        }
        3 => {
            // Restrict the B sort to a random bounded sublattice.
            let b = m.lattice_b();
            let mut seed = Subset::empty(b.len());
            for e in 0..b.len() {
                if rng.gen_bool(0.5) {
                    seed.insert(e);
                }
            }
            let carrier = b.sublattice_closure(&seed);
            let (c, embed) = b.sublattice(&carrier);
            let (_, hom) =
                restriction_module(&m, &c, &embed).expect("sublattice inclusion is a homomorphism");
            hom
        }
        _ => {
            // The representation embedding into the increasing-set module of
            // the canonical frame.
            crate::frame::representation_iso(&m, budget.lattice_max)
                .expect("representation within budget")
                .hom
        }
    }
}

/// A random subalgebra candidate over `m`: random subsets closed into
/// bounded sublattices. Fusion and implication closure are not enforced, so
/// genuine non-subalgebras occur.
pub fn random_carrier_pair(rng: &mut ChaCha8Rng, m: &FidlModule) -> SubalgebraCandidate {
    let mut pick = |l: &FiniteLattice| {
        let mut seed = Subset::empty(l.len());
        for e in 0..l.len() {
            if rng.gen_bool(0.4) {
                seed.insert(e);
            }
        }
        l.sublattice_closure(&seed)
    };
    SubalgebraCandidate {
        carrier_a: pick(m.lattice_a()),
        carrier_b: pick(m.lattice_b()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism_of_streams() {
        let budget = Budget::default();
        for index in 0..8 {
            let a = gen_module_mixed(42, index, 8, 6, &budget);
            let b = gen_module_mixed(42, index, 8, 6, &budget);
            assert_eq!(a.fusion_rows(), b.fusion_rows());
            assert_eq!(a.implication_rows(), b.implication_rows());
        }
        let mut r1 = instance_rng(7, 3);
        let mut r2 = instance_rng(7, 3);
        let f1 = random_frame(&mut r1, 5, 4);
        let f2 = random_frame(&mut r2, 5, 4);
        assert_eq!(f1.r().triples(), f2.r().triples());
    }

    #[test]
    fn generated_modules_are_valid_and_sized() {
        let budget = Budget::default();
        for index in 0..20 {
            let m = gen_module_mixed(1, index, 8, 6, &budget);
            assert!(m.size_a() <= 8, "|A| = {}", m.size_a());
            assert!(m.size_b() <= 6, "|B| = {}", m.size_b());
            assert!(m.size_a() >= 2);
            // Revalidation from raw tables must succeed.
            assert!(validate_module(
                m.lattice_a().clone(),
                m.lattice_b().clone(),
                &m.fusion_rows(),
                &m.implication_rows(),
            )
            .is_ok());
        }
    }

    #[test]
    fn random_homs_and_frames_validate() {
        let budget = Budget::default();
        for index in 0..10 {
            let mut rng = instance_rng(5, index);
            let hom = random_hom(&mut rng, 6, 4, &budget);
            assert!(validate_hom(
                hom.source(),
                hom.target(),
                hom.alpha().to_vec(),
                hom.gamma().to_vec(),
            )
            .is_ok());
            let frame = random_frame(&mut rng, 5, 4);
            assert!(validate_frame(
                frame.x().clone(),
                frame.y().clone(),
                &frame.r().triples(),
                &frame.t().triples(),
            )
            .is_ok());
        }
    }

    #[test]
    fn join_hom_laws() {
        let mut rng = instance_rng(9, 0);
        let l = random_distributive_lattice(&mut rng, 8);
        for _ in 0..5 {
            let d = random_join_hom(&mut rng, &l);
            assert_eq!(d[l.bottom()], l.bottom());
            for x in 0..l.len() {
                for y in 0..l.len() {
                    assert_eq!(d[l.join(x, y)], l.join(d[x], d[y]));
                }
            }
            let b = random_meet_hom(&mut rng, &l);
            assert_eq!(b[l.top()], l.top());
            for x in 0..l.len() {
                for y in 0..l.len() {
                    assert_eq!(b[l.meet(x, y)], l.meet(b[x], b[y]));
                }
            }
        }
    }
}
