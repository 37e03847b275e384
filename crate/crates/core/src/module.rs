//! Two-sorted modules over bounded distributive lattices: a fusion
//! `f : A x B -> A` preserving joins and bottoms in each slot and an
//! implication `i : B x A -> A` turning joins in B into meets and preserving
//! meets and top in A.

use crate::frame::CanonicalFrame;
use crate::lattice::{
    lattice_product, product_decode, product_encode, Filter, FiniteLattice, LatticeError,
};
use crate::morphism::{validate_hom, FidlHomomorphism, HomError};
use crate::subset::Subset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default ceiling for carriers built by product and power constructions.
pub const LATTICE_BUDGET_DEFAULT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModuleError {
    #[error("lattice error: {0}")]
    Lattice(#[from] LatticeError),
    #[error("table has wrong shape: {0}")]
    ShapeMismatch(String),
    #[error("module axioms violated: {0:?}")]
    AxiomViolations(Vec<AxiomViolation>),
    #[error("operation requires B = A (the same validated lattice)")]
    SortMismatch,
    #[error("the base set of a power module must be non-empty")]
    EmptyBase,
    #[error(
        "construction would produce a carrier of {size} elements, over the budget of {budget}"
    )]
    BudgetExceeded { size: usize, budget: usize },
    #[error("map is not a lattice homomorphism: witness {witness:?}")]
    NotAHomomorphism { witness: (usize, usize) },
    #[error("homomorphism error: {0}")]
    Hom(#[from] HomError),
}

/// One violated axiom of the fusion/implication laws, with the indices that
/// witness it. Serializes as `{"axiom":"F1","x":..,"y":..,"b":..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom")]
pub enum AxiomViolation {
    F1 { x: usize, y: usize, b: usize },
    F2 { x: usize, b: usize, c: usize },
    F3 { b: usize },
    F4 { x: usize },
    I1 { b: usize, x: usize, y: usize },
    I2 { b: usize, c: usize, x: usize },
    I3 { b: usize },
}

/// A validated FIDL-module. `f` is stored row-major indexed by A then B;
/// `i` row-major indexed by B then A. Both tables hold A-indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FidlModule {
    a: FiniteLattice,
    b: FiniteLattice,
    f: Vec<u32>,
    i: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionMode {
    Fusion,
    Implication,
}

impl FidlModule {
    pub fn lattice_a(&self) -> &FiniteLattice {
        &self.a
    }

    pub fn lattice_b(&self) -> &FiniteLattice {
        &self.b
    }

    pub fn size_a(&self) -> usize {
        self.a.len()
    }

    pub fn size_b(&self) -> usize {
        self.b.len()
    }

    pub fn fusion(&self, x: usize, b: usize) -> usize {
        self.f[x * self.b.len() + b] as usize
    }

    pub fn implication(&self, b: usize, x: usize) -> usize {
        self.i[b * self.a.len() + x] as usize
    }

    pub fn fusion_rows(&self) -> Vec<Vec<usize>> {
        (0..self.a.len())
            .map(|x| (0..self.b.len()).map(|b| self.fusion(x, b)).collect())
            .collect()
    }

    pub fn implication_rows(&self) -> Vec<Vec<usize>> {
        (0..self.b.len())
            .map(|b| (0..self.a.len()).map(|x| self.implication(b, x)).collect())
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.a.len() == 1 && self.b.len() == 1
    }

    /// The section `x -> f(x, b)` of the fusion at `b`.
    pub fn section_f(&self, b: usize) -> Vec<usize> {
        (0..self.a.len()).map(|x| self.fusion(x, b)).collect()
    }

    /// The section `x -> i(b, x)` of the implication at `b`.
    pub fn section_i(&self, b: usize) -> Vec<usize> {
        (0..self.a.len()).map(|x| self.implication(b, x)).collect()
    }
}

/// Validate tables against the seven module axioms. On failure every violated
/// axiom is reported once, with a concrete witness.
pub fn validate_module(
    a: FiniteLattice,
    b: FiniteLattice,
    f_rows: &[Vec<usize>],
    i_rows: &[Vec<usize>],
) -> Result<FidlModule, ModuleError> {
    let na = a.len();
    let nb = b.len();
    let check_shape = |rows: &[Vec<usize>], nrows: usize, ncols: usize, name: &str| {
        if rows.len() != nrows {
            return Err(ModuleError::ShapeMismatch(format!(
                "{name} must have {nrows} rows, got {}",
                rows.len()
            )));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(ModuleError::ShapeMismatch(format!(
                    "{name} row {r} must have {ncols} entries, got {}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= na {
                    return Err(ModuleError::ShapeMismatch(format!(
                        "{name}[{r}][{c}] = {v} is not an A-index (|A| = {na})"
                    )));
                }
            }
        }
        Ok(())
    };
    check_shape(f_rows, na, nb, "f")?;
    check_shape(i_rows, nb, na, "i")?;

    let mut f = vec![0u32; na * nb];
    for (x, row) in f_rows.iter().enumerate() {
        for (bi, &v) in row.iter().enumerate() {
            f[x * nb + bi] = v as u32;
        }
    }
    let mut i = vec![0u32; nb * na];
    for (bi, row) in i_rows.iter().enumerate() {
        for (x, &v) in row.iter().enumerate() {
            i[bi * na + x] = v as u32;
        }
    }
    let m = FidlModule { a, b, f, i };

    let mut violations = Vec::new();
    'f1: for x in 0..na {
        for y in 0..na {
            for b in 0..nb {
                if m.fusion(m.a.join(x, y), b) != m.a.join(m.fusion(x, b), m.fusion(y, b)) {
                    violations.push(AxiomViolation::F1 { x, y, b });
                    break 'f1;
                }
            }
        }
    }
    'f2: for x in 0..na {
        for b in 0..nb {
            for c in 0..nb {
                if m.fusion(x, m.b.join(b, c)) != m.a.join(m.fusion(x, b), m.fusion(x, c)) {
                    violations.push(AxiomViolation::F2 { x, b, c });
                    break 'f2;
                }
            }
        }
    }
    for b in 0..nb {
        if m.fusion(m.a.bottom(), b) != m.a.bottom() {
            violations.push(AxiomViolation::F3 { b });
            break;
        }
    }
    for x in 0..na {
        if m.fusion(x, m.b.bottom()) != m.a.bottom() {
            violations.push(AxiomViolation::F4 { x });
            break;
        }
    }
    'i1: for b in 0..nb {
        for x in 0..na {
            for y in 0..na {
                if m.implication(b, m.a.meet(x, y))
                    != m.a.meet(m.implication(b, x), m.implication(b, y))
                {
                    violations.push(AxiomViolation::I1 { b, x, y });
                    break 'i1;
                }
            }
        }
    }
    'i2: for b in 0..nb {
        for c in 0..nb {
            for x in 0..na {
                if m.implication(m.b.join(b, c), x)
                    != m.a.meet(m.implication(b, x), m.implication(c, x))
                {
                    violations.push(AxiomViolation::I2 { b, c, x });
                    break 'i2;
                }
            }
        }
    }
    for b in 0..nb {
        if m.implication(b, m.a.top()) != m.a.top() {
            violations.push(AxiomViolation::I3 { b });
            break;
        }
    }

    if violations.is_empty() {
        Ok(m)
    } else {
        Err(ModuleError::AxiomViolations(violations))
    }
}

/// Re-evaluate one reported violation directly against raw tables (which
/// need not form a valid module); used to confirm that witnesses are
/// genuine.
pub fn violation_holds(
    a: &FiniteLattice,
    b: &FiniteLattice,
    f_rows: &[Vec<usize>],
    i_rows: &[Vec<usize>],
    v: &AxiomViolation,
) -> bool {
    let f = |x: usize, bi: usize| f_rows[x][bi];
    let i = |bi: usize, x: usize| i_rows[bi][x];
    match *v {
        AxiomViolation::F1 { x, y, b: bi } => f(a.join(x, y), bi) != a.join(f(x, bi), f(y, bi)),
        AxiomViolation::F2 { x, b: bi, c } => f(x, b.join(bi, c)) != a.join(f(x, bi), f(x, c)),
        AxiomViolation::F3 { b: bi } => f(a.bottom(), bi) != a.bottom(),
        AxiomViolation::F4 { x } => f(x, b.bottom()) != a.bottom(),
        AxiomViolation::I1 { b: bi, x, y } => i(bi, a.meet(x, y)) != a.meet(i(bi, x), i(bi, y)),
        AxiomViolation::I2 { b: bi, c, x } => i(b.join(bi, c), x) != a.meet(i(bi, x), i(c, x)),
        AxiomViolation::I3 { b: bi } => i(bi, a.top()) != a.top(),
    }
}

/// Lift fusion or implication to filters.
///
/// Fusion: `f(G,H) = {x : exists (g,h) in G x H with f(g,h) <= x}`.
/// Implication: `i(H,G) = {x : exists (h,g) in H x G with g <= i(h,x)}`.
/// Both results are filters of A whenever G, H are filters.
pub fn filter_extension(m: &FidlModule, mode: ExtensionMode, g: &Filter, h: &Filter) -> Filter {
    let na = m.a.len();
    let mut carrier = Subset::empty(na);
    match mode {
        ExtensionMode::Fusion => {
            for gi in g.carrier().iter() {
                for hi in h.carrier().iter() {
                    carrier.union_with(m.a.poset().up_set(m.fusion(gi, hi)));
                }
            }
        }
        ExtensionMode::Implication => {
            // g <= i(h,x) for some g in G iff i(h,x) lands in the filter G.
            for x in 0..na {
                if h.carrier()
                    .iter()
                    .any(|hi| g.contains(m.implication(hi, x)))
                {
                    carrier.insert(x);
                }
            }
        }
    }
    m.a.filter_from(carrier)
        .expect("filter extension of filters is a filter")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtendError {
    #[error("the extension of (G,H) is not contained in P")]
    PreconditionFailed,
    #[error("no prime witness pair exists; the extension theorem fails here")]
    NoWitness,
}

/// Prime extension: given `extension(G,H) ⊆ P`, find primes `Q ⊇ G`,
/// `R ⊇ H` with `f(Q,R) ⊆ P` (fusion) or `i(R,Q) ⊆ P` (implication).
/// Returns the first witness in canonical spectrum order.
pub fn extend_to_primes(
    m: &FidlModule,
    mode: ExtensionMode,
    g: &Filter,
    h: &Filter,
    spectrum_a: &crate::lattice::Spectrum,
    spectrum_b: &crate::lattice::Spectrum,
    p_idx: usize,
) -> Result<(usize, usize), ExtendError> {
    let p = spectrum_a.prime(p_idx);
    let ext = filter_extension(m, mode, g, h);
    if !ext.carrier().is_subset_of(p) {
        return Err(ExtendError::PreconditionFailed);
    }
    for (qi, q) in spectrum_a.primes().iter().enumerate() {
        if !g.carrier().is_subset_of(q) {
            continue;
        }
        let qf = m.a.filter_from(q.clone()).expect("primes are filters");
        for (ri, r) in spectrum_b.primes().iter().enumerate() {
            if !h.carrier().is_subset_of(r) {
                continue;
            }
            let rf = m.b.filter_from(r.clone()).expect("primes are filters");
            let prime_ext = filter_extension(m, mode, &qf, &rf);
            if prime_ext.carrier().is_subset_of(p) {
                return Ok((qi, ri));
            }
        }
    }
    Err(ExtendError::NoWitness)
}

/// Both sides of one membership equivalence, computed independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipSide {
    /// Table side: `f(x,b) ∈ P` resp. `i(b,x) ∈ P`.
    pub table: bool,
    /// Relational side quantified over the canonical frame.
    pub relational: bool,
    /// Existential witness `(Q,R)` for fusion; first failing `(R,Q)` for
    /// implication.
    pub witness: Option<(usize, usize)>,
}

impl MembershipSide {
    pub fn agrees(&self) -> bool {
        self.table == self.relational
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub fusion: MembershipSide,
    pub implication: MembershipSide,
}

impl MembershipReport {
    pub fn agrees(&self) -> bool {
        self.fusion.agrees() && self.implication.agrees()
    }
}

/// The membership lemma, checked at one point `(x, b, P)`:
/// `f(x,b) ∈ P` iff some `(Q,R,P)` in the canonical relation has `x ∈ Q`,
/// `b ∈ R`; and `i(b,x) ∈ P` iff every `(R,P,Q)` in the canonical relation
/// with `b ∈ R` has `x ∈ Q`.
pub fn membership_check(
    m: &FidlModule,
    dual: &CanonicalFrame,
    x: usize,
    b: usize,
    p_idx: usize,
) -> MembershipReport {
    let p = dual.spectrum_a().prime(p_idx);
    let fusion_table = p.contains(m.fusion(x, b));
    let mut fusion_witness = None;
    'outer: for qi in 0..dual.spectrum_a().len() {
        if !dual.spectrum_a().prime(qi).contains(x) {
            continue;
        }
        for ri in 0..dual.spectrum_b().len() {
            if dual.spectrum_b().prime(ri).contains(b) && dual.frame().r().contains(qi, ri, p_idx) {
                fusion_witness = Some((qi, ri));
                break 'outer;
            }
        }
    }

    let impl_table = p.contains(m.implication(b, x));
    let mut impl_counterexample = None;
    'outer2: for ri in 0..dual.spectrum_b().len() {
        if !dual.spectrum_b().prime(ri).contains(b) {
            continue;
        }
        for qi in 0..dual.spectrum_a().len() {
            if dual.frame().t().contains(ri, p_idx, qi) && !dual.spectrum_a().prime(qi).contains(x)
            {
                impl_counterexample = Some((ri, qi));
                break 'outer2;
            }
        }
    }

    MembershipReport {
        fusion: MembershipSide {
            table: fusion_table,
            relational: fusion_witness.is_some(),
            witness: fusion_witness,
        },
        implication: MembershipSide {
            table: impl_table,
            relational: impl_counterexample.is_none(),
            witness: impl_counterexample,
        },
    }
}

/// The one-sorted view when both sorts coincide: binary fusion and
/// implication on A, plus whether the pair is residuated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionImplicationAlgebra {
    pub circ: Vec<Vec<usize>>,
    pub arrow: Vec<Vec<usize>>,
    pub identities_hold: bool,
    pub residuated: bool,
    pub residuation_counterexample: Option<(usize, usize, usize)>,
}

pub fn as_fusion_implication_algebra(
    m: &FidlModule,
) -> Result<FusionImplicationAlgebra, ModuleError> {
    if !m.a.equal_structure(&m.b) {
        return Err(ModuleError::SortMismatch);
    }
    let n = m.a.len();
    let circ: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| m.fusion(x, y)).collect())
        .collect();
    let arrow: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| m.implication(x, y)).collect())
        .collect();
    let l = &m.a;
    let mut identities_hold = true;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                identities_hold &= circ[x][l.join(y, z)] == l.join(circ[x][y], circ[x][z]);
                identities_hold &= circ[l.join(x, y)][z] == l.join(circ[x][z], circ[y][z]);
                identities_hold &= l.meet(arrow[x][y], arrow[x][z]) == arrow[x][l.meet(y, z)];
                identities_hold &= l.meet(arrow[x][z], arrow[y][z]) == arrow[l.join(x, y)][z];
            }
            identities_hold &= arrow[x][l.top()] == l.top();
        }
        identities_hold &= circ[x][l.bottom()] == l.bottom();
        identities_hold &= circ[l.bottom()][x] == l.bottom();
    }
    let mut residuation_counterexample = None;
    'res: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = l.leq(circ[x][y], z);
                let rhs = l.leq(x, arrow[y][z]);
                if lhs != rhs {
                    residuation_counterexample = Some((x, y, z));
                    break 'res;
                }
            }
        }
    }
    Ok(FusionImplicationAlgebra {
        circ,
        arrow,
        identities_hold,
        residuated: residuation_counterexample.is_none(),
        residuation_counterexample,
    })
}

/// The modal view when B is the two-element lattice: `◇x = f(x, 1)` and
/// `□x = i(1, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalOperators {
    pub diamond: Vec<usize>,
    pub box_op: Vec<usize>,
    pub laws_hold: bool,
}

pub fn as_modal_lattice(m: &FidlModule) -> Result<ModalOperators, ModuleError> {
    if m.b.len() != 2 {
        return Err(ModuleError::SortMismatch);
    }
    let top_b = m.b.top();
    let diamond = m.section_f(top_b);
    let box_op = m.section_i(top_b);
    let l = &m.a;
    let mut laws_hold = diamond[l.bottom()] == l.bottom() && box_op[l.top()] == l.top();
    for x in 0..l.len() {
        for y in 0..l.len() {
            laws_hold &= diamond[l.join(x, y)] == l.join(diamond[x], diamond[y]);
            laws_hold &= box_op[l.meet(x, y)] == l.meet(box_op[x], box_op[y]);
        }
    }
    Ok(ModalOperators {
        diamond,
        box_op,
        laws_hold,
    })
}

/// The module of H-valued functions on a finite base set: A is the pointwise
/// power of H, B is H, fusion meets pointwise and implication applies the
/// relative pseudocomplement pointwise.
pub fn heyting_power_module(
    h: &FiniteLattice,
    base_size: usize,
    lattice_budget: usize,
) -> Result<FidlModule, ModuleError> {
    if base_size == 0 {
        return Err(ModuleError::EmptyBase);
    }
    let size = h
        .len()
        .checked_pow(base_size as u32)
        .filter(|&s| s <= lattice_budget)
        .ok_or(ModuleError::BudgetExceeded {
            size: usize::MAX,
            budget: lattice_budget,
        })?;
    let copies: Vec<&FiniteLattice> = vec![h; base_size];
    let a = lattice_product(&copies);
    debug_assert_eq!(a.len(), size);
    let sizes = vec![h.len(); base_size];
    let mut arrow = vec![0usize; h.len() * h.len()];
    for x in 0..h.len() {
        for y in 0..h.len() {
            arrow[x * h.len() + y] = h.relative_pseudocomplement(x, y);
        }
    }
    let f_rows: Vec<Vec<usize>> = (0..a.len())
        .map(|g| {
            let comps = product_decode(&sizes, g);
            (0..h.len())
                .map(|hv| {
                    let out: Vec<usize> = comps.iter().map(|&c| h.meet(hv, c)).collect();
                    product_encode(&sizes, &out)
                })
                .collect()
        })
        .collect();
    let i_rows: Vec<Vec<usize>> = (0..h.len())
        .map(|hv| {
            (0..a.len())
                .map(|g| {
                    let comps = product_decode(&sizes, g);
                    let out: Vec<usize> = comps.iter().map(|&c| arrow[hv * h.len() + c]).collect();
                    product_encode(&sizes, &out)
                })
                .collect()
        })
        .collect();
    validate_module(a, h.clone(), &f_rows, &i_rows)
}

/// Pull the B sort back along a lattice homomorphism `h : C -> B`, yielding a
/// module over (A, C) and the homomorphism `(id_A, h)` into the original.
pub fn restriction_module(
    m: &FidlModule,
    c: &FiniteLattice,
    h_map: &[usize],
) -> Result<(FidlModule, FidlHomomorphism), ModuleError> {
    if h_map.len() != c.len() || h_map.iter().any(|&v| v >= m.b.len()) {
        return Err(ModuleError::ShapeMismatch(format!(
            "h must map all {} elements of C into B",
            c.len()
        )));
    }
    if h_map[c.bottom()] != m.b.bottom() || h_map[c.top()] != m.b.top() {
        return Err(ModuleError::NotAHomomorphism {
            witness: (c.bottom(), c.top()),
        });
    }
    for x in 0..c.len() {
        for y in 0..c.len() {
            if h_map[c.meet(x, y)] != m.b.meet(h_map[x], h_map[y])
                || h_map[c.join(x, y)] != m.b.join(h_map[x], h_map[y])
            {
                return Err(ModuleError::NotAHomomorphism { witness: (x, y) });
            }
        }
    }
    let f_rows: Vec<Vec<usize>> = (0..m.a.len())
        .map(|x| (0..c.len()).map(|ci| m.fusion(x, h_map[ci])).collect())
        .collect();
    let i_rows: Vec<Vec<usize>> = (0..c.len())
        .map(|ci| {
            (0..m.a.len())
                .map(|x| m.implication(h_map[ci], x))
                .collect()
        })
        .collect();
    let n = validate_module(m.a.clone(), c.clone(), &f_rows, &i_rows)?;
    let identity: Vec<usize> = (0..m.a.len()).collect();
    let hom = validate_hom(&n, m, identity, h_map.to_vec())?;
    Ok((n, hom))
}

/// Componentwise product of modules, with the projection homomorphisms.
pub fn product_module(
    members: &[FidlModule],
    lattice_budget: usize,
) -> Result<(FidlModule, Vec<FidlHomomorphism>), ModuleError> {
    assert!(!members.is_empty(), "product of an empty family");
    if members.len() == 1 {
        let m = members[0].clone();
        let id_a: Vec<usize> = (0..m.a.len()).collect();
        let id_b: Vec<usize> = (0..m.b.len()).collect();
        let hom = validate_hom(&m, &members[0], id_a, id_b)?;
        return Ok((m, vec![hom]));
    }
    let sizes_a: Vec<usize> = members.iter().map(|m| m.a.len()).collect();
    let sizes_b: Vec<usize> = members.iter().map(|m| m.b.len()).collect();
    let na: usize = sizes_a.iter().product();
    let nb: usize = sizes_b.iter().product();
    if na > lattice_budget || nb > lattice_budget {
        return Err(ModuleError::BudgetExceeded {
            size: na.max(nb),
            budget: lattice_budget,
        });
    }
    let lattices_a: Vec<&FiniteLattice> = members.iter().map(|m| &m.a).collect();
    let lattices_b: Vec<&FiniteLattice> = members.iter().map(|m| &m.b).collect();
    let a = lattice_product(&lattices_a);
    let b = lattice_product(&lattices_b);
    let f_rows: Vec<Vec<usize>> = (0..na)
        .map(|x| {
            let dx = product_decode(&sizes_a, x);
            (0..nb)
                .map(|bi| {
                    let db = product_decode(&sizes_b, bi);
                    let out: Vec<usize> = members
                        .iter()
                        .enumerate()
                        .map(|(k, m)| m.fusion(dx[k], db[k]))
                        .collect();
                    product_encode(&sizes_a, &out)
                })
                .collect()
        })
        .collect();
    let i_rows: Vec<Vec<usize>> = (0..nb)
        .map(|bi| {
            let db = product_decode(&sizes_b, bi);
            (0..na)
                .map(|x| {
                    let dx = product_decode(&sizes_a, x);
                    let out: Vec<usize> = members
                        .iter()
                        .enumerate()
                        .map(|(k, m)| m.implication(db[k], dx[k]))
                        .collect();
                    product_encode(&sizes_a, &out)
                })
                .collect()
        })
        .collect();
    let product = validate_module(a, b, &f_rows, &i_rows)?;
    let mut projections = Vec::with_capacity(members.len());
    for (k, member) in members.iter().enumerate() {
        let alpha: Vec<usize> = (0..na).map(|x| product_decode(&sizes_a, x)[k]).collect();
        let gamma: Vec<usize> = (0..nb).map(|x| product_decode(&sizes_b, x)[k]).collect();
        projections.push(validate_hom(&product, member, alpha, gamma)?);
    }
    Ok((product, projections))
}
