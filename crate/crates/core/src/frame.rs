//! Relational duals of FIDL-modules: two posets with ternary relations R and
//! T, the complex module of increasing sets, the canonical frame of prime
//! filters, morphism dualization and the round-trip isomorphisms.

use crate::lattice::{increasing_sets_capped, IncreasingSetLattice, Spectrum};
use crate::module::{filter_extension, validate_module, ExtensionMode, FidlModule, ModuleError};
use crate::morphism::{validate_hom, FidlHomomorphism, HomError};
use crate::poset::Poset;
use crate::subset::Subset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameError {
    #[error("triple {triple:?} uses an index outside the carrier sorts")]
    IndexOutOfRange { rel: RelName, triple: [usize; 3] },
    #[error(
        "{rel:?} is not closed: {base:?} is present but the dominated triple {forced:?} is missing"
    )]
    ClosureViolation {
        rel: RelName,
        base: [usize; 3],
        forced: [usize; 3],
    },
    #[error("{condition:?} fails at {witness:?}")]
    ConditionViolation {
        condition: MorphismCondition,
        witness: Vec<usize>,
    },
    #[error("complex module would have {size} elements on one sort, over the budget of {budget}")]
    BudgetExceeded { size: usize, budget: usize },
    #[error("module error in a dual construction: {0}")]
    Module(#[from] ModuleError),
    #[error("homomorphism error in a dual construction: {0}")]
    Hom(#[from] HomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelName {
    R,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MorphismCondition {
    MonotoneG,
    MonotoneH,
    M1,
    M2,
    N1,
    N2,
}

/// A ternary relation stored as a flat bitset indexed by
/// `(i0 * d1 + i1) * d2 + i2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryRel {
    dims: [usize; 3],
    bits: Vec<u64>,
}

impl TernaryRel {
    pub fn empty(dims: [usize; 3]) -> Self {
        let n = dims[0] * dims[1] * dims[2];
        TernaryRel {
            dims,
            bits: vec![0; n.div_ceil(64)],
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn index(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dims[1] + b) * self.dims[2] + c
    }

    pub fn contains(&self, a: usize, b: usize, c: usize) -> bool {
        debug_assert!(a < self.dims[0] && b < self.dims[1] && c < self.dims[2]);
        let i = self.index(a, b, c);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, a: usize, b: usize, c: usize) {
        let i = self.index(a, b, c);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    /// Triples in ascending index order.
    pub fn triples(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..self.dims[0] {
            for b in 0..self.dims[1] {
                for c in 0..self.dims[2] {
                    if self.contains(a, b, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

/// An FI-frame: posets X and Y with R ⊆ X×Y×X and T ⊆ Y×X×X, both closed
/// downward in the first two coordinates and upward in the third.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiFrame {
    x: Poset,
    y: Poset,
    r: TernaryRel,
    t: TernaryRel,
}

impl FiFrame {
    pub fn x(&self) -> &Poset {
        &self.x
    }

    pub fn y(&self) -> &Poset {
        &self.y
    }

    pub fn r(&self) -> &TernaryRel {
        &self.r
    }

    pub fn t(&self) -> &TernaryRel {
        &self.t
    }
}

fn check_closure(
    rel: &TernaryRel,
    name: RelName,
    first: &Poset,
    second: &Poset,
    third: &Poset,
) -> Result<(), FrameError> {
    for [a, b, c] in rel.triples() {
        for abar in first.down_set(a).iter() {
            for bbar in second.down_set(b).iter() {
                for cbar in third.up_set(c).iter() {
                    if !rel.contains(abar, bbar, cbar) {
                        return Err(FrameError::ClosureViolation {
                            rel: name,
                            base: [a, b, c],
                            forced: [abar, bbar, cbar],
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Validate posets and triple lists as an FI-frame.
pub fn validate_frame(
    x: Poset,
    y: Poset,
    r_triples: &[[usize; 3]],
    t_triples: &[[usize; 3]],
) -> Result<FiFrame, FrameError> {
    let mut r = TernaryRel::empty([x.len(), y.len(), x.len()]);
    for &[a, b, c] in r_triples {
        if a >= x.len() || b >= y.len() || c >= x.len() {
            return Err(FrameError::IndexOutOfRange {
                rel: RelName::R,
                triple: [a, b, c],
            });
        }
        r.insert(a, b, c);
    }
    let mut t = TernaryRel::empty([y.len(), x.len(), x.len()]);
    for &[a, b, c] in t_triples {
        if a >= y.len() || b >= x.len() || c >= x.len() {
            return Err(FrameError::IndexOutOfRange {
                rel: RelName::T,
                triple: [a, b, c],
            });
        }
        t.insert(a, b, c);
    }
    check_closure(&r, RelName::R, &x, &y, &x)?;
    check_closure(&t, RelName::T, &y, &x, &x)?;
    Ok(FiFrame { x, y, r, t })
}

/// Insert the down-down-up closure of a seed triple; used by generators.
pub fn insert_closed(
    rel: &mut TernaryRel,
    first: &Poset,
    second: &Poset,
    third: &Poset,
    seed: [usize; 3],
) {
    for a in first.down_set(seed[0]).iter() {
        for b in second.down_set(seed[1]).iter() {
            for c in third.up_set(seed[2]).iter() {
                rel.insert(a, b, c);
            }
        }
    }
}

/// The complex module of a frame together with the upset lattices that give
/// meaning to its element indices.
#[derive(Clone, Debug)]
pub struct ComplexModule {
    pub module: FidlModule,
    pub upsets_x: IncreasingSetLattice,
    pub upsets_y: IncreasingSetLattice,
}

/// Fusion of upsets: `{z : exists (x,y) in U x V with (x,y,z) in R}`.
pub fn frame_fusion_set(f: &FiFrame, u: &Subset, v: &Subset) -> Subset {
    let mut out = Subset::empty(f.x.len());
    for z in 0..f.x.len() {
        'search: for x in u.iter() {
            for y in v.iter() {
                if f.r.contains(x, y, z) {
                    out.insert(z);
                    break 'search;
                }
            }
        }
    }
    out
}

/// Implication of upsets: `{w : forall (v,w,z) in T with v in V, z in U}`.
pub fn frame_implication_set(f: &FiFrame, v: &Subset, u: &Subset) -> Subset {
    let mut out = Subset::empty(f.x.len());
    for w in 0..f.x.len() {
        let ok = (0..f.y.len()).all(|vv| {
            !v.contains(vv) || (0..f.x.len()).all(|z| !f.t.contains(vv, w, z) || u.contains(z))
        });
        if ok {
            out.insert(w);
        }
    }
    out
}

/// The module of increasing sets of a frame: A is the upset lattice of X,
/// B that of Y, with the existential fusion over R and universal implication
/// over T.
pub fn complex_module(f: &FiFrame, lattice_budget: usize) -> Result<ComplexModule, FrameError> {
    let upsets_x = increasing_sets_capped(f.x(), lattice_budget).map_err(|size| {
        FrameError::BudgetExceeded {
            size,
            budget: lattice_budget,
        }
    })?;
    let upsets_y = increasing_sets_capped(f.y(), lattice_budget).map_err(|size| {
        FrameError::BudgetExceeded {
            size,
            budget: lattice_budget,
        }
    })?;
    let na = upsets_x.len();
    let nb = upsets_y.len();
    let mut f_rows = vec![vec![0usize; nb]; na];
    for ui in 0..na {
        for vi in 0..nb {
            let set = frame_fusion_set(f, upsets_x.set(ui), upsets_y.set(vi));
            f_rows[ui][vi] = upsets_x
                .index_of(&set)
                .expect("fusion of upsets is an upset");
        }
    }
    let mut i_rows = vec![vec![0usize; na]; nb];
    for vi in 0..nb {
        for ui in 0..na {
            let set = frame_implication_set(f, upsets_y.set(vi), upsets_x.set(ui));
            i_rows[vi][ui] = upsets_x
                .index_of(&set)
                .expect("implication of upsets is an upset");
        }
    }
    let module = validate_module(
        upsets_x.lattice().clone(),
        upsets_y.lattice().clone(),
        &f_rows,
        &i_rows,
    )?;
    Ok(ComplexModule {
        module,
        upsets_x,
        upsets_y,
    })
}

/// The canonical frame of a module: prime spectra of both sorts with
/// `(Q,R,P) ∈ R_M  iff  f(Q,R) ⊆ P` and `(R,P,Q) ∈ T_M  iff  i(R,P) ⊆ Q`.
#[derive(Clone, Debug)]
pub struct CanonicalFrame {
    spectrum_a: Spectrum,
    spectrum_b: Spectrum,
    frame: FiFrame,
}

impl CanonicalFrame {
    pub fn spectrum_a(&self) -> &Spectrum {
        &self.spectrum_a
    }

    pub fn spectrum_b(&self) -> &Spectrum {
        &self.spectrum_b
    }

    pub fn frame(&self) -> &FiFrame {
        &self.frame
    }
}

pub fn canonical_frame(m: &FidlModule) -> CanonicalFrame {
    let spectrum_a = m.lattice_a().spectrum();
    let spectrum_b = m.lattice_b().spectrum();
    let na = spectrum_a.len();
    let nb = spectrum_b.len();
    let filters_a: Vec<_> = spectrum_a
        .primes()
        .iter()
        .map(|p| m.lattice_a().filter_from(p.clone()).unwrap())
        .collect();
    let filters_b: Vec<_> = spectrum_b
        .primes()
        .iter()
        .map(|p| m.lattice_b().filter_from(p.clone()).unwrap())
        .collect();
    let mut r = TernaryRel::empty([na, nb, na]);
    for qi in 0..na {
        for ri in 0..nb {
            let ext = filter_extension(m, ExtensionMode::Fusion, &filters_a[qi], &filters_b[ri]);
            for pi in 0..na {
                if ext.carrier().is_subset_of(spectrum_a.prime(pi)) {
                    r.insert(qi, ri, pi);
                }
            }
        }
    }
    let mut t = TernaryRel::empty([nb, na, na]);
    for ri in 0..nb {
        for pi in 0..na {
            let ext = filter_extension(
                m,
                ExtensionMode::Implication,
                &filters_a[pi],
                &filters_b[ri],
            );
            for qi in 0..na {
                if ext.carrier().is_subset_of(spectrum_a.prime(qi)) {
                    t.insert(ri, pi, qi);
                }
            }
        }
    }
    let x = spectrum_a.order().clone();
    let y = spectrum_b.order().clone();
    check_closure(&r, RelName::R, &x, &y, &x)
        .expect("canonical fusion relation is down-down-up closed");
    check_closure(&t, RelName::T, &y, &x, &x)
        .expect("canonical implication relation is down-down-up closed");
    CanonicalFrame {
        spectrum_a,
        spectrum_b,
        frame: FiFrame { x, y, r, t },
    }
}

/// A validated FI-morphism between frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiMorphism {
    source: FiFrame,
    target: FiFrame,
    g: Vec<usize>,
    h: Vec<usize>,
}

impl FiMorphism {
    pub fn source(&self) -> &FiFrame {
        &self.source
    }

    pub fn target(&self) -> &FiFrame {
        &self.target
    }

    pub fn g(&self) -> &[usize] {
        &self.g
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }
}

/// Validate a pair of maps as an FI-morphism: monotone on both sorts plus
/// the forth conditions (M1)/(N1) and back conditions (M2)/(N2).
pub fn validate_fi_morphism(
    src: &FiFrame,
    tgt: &FiFrame,
    g: Vec<usize>,
    h: Vec<usize>,
) -> Result<FiMorphism, FrameError> {
    if g.len() != src.x.len() || g.iter().any(|&v| v >= tgt.x.len()) {
        return Err(FrameError::ConditionViolation {
            condition: MorphismCondition::MonotoneG,
            witness: vec![g.len()],
        });
    }
    if h.len() != src.y.len() || h.iter().any(|&v| v >= tgt.y.len()) {
        return Err(FrameError::ConditionViolation {
            condition: MorphismCondition::MonotoneH,
            witness: vec![h.len()],
        });
    }
    if let Some((a, b)) = src.x.map_is_monotone(&tgt.x, &g) {
        return Err(FrameError::ConditionViolation {
            condition: MorphismCondition::MonotoneG,
            witness: vec![a, b],
        });
    }
    if let Some((a, b)) = src.y.map_is_monotone(&tgt.y, &h) {
        return Err(FrameError::ConditionViolation {
            condition: MorphismCondition::MonotoneH,
            witness: vec![a, b],
        });
    }
    for [x, y, z] in src.r.triples() {
        if !tgt.r.contains(g[x], h[y], g[z]) {
            return Err(FrameError::ConditionViolation {
                condition: MorphismCondition::M1,
                witness: vec![x, y, z],
            });
        }
    }
    for xbar in 0..tgt.x.len() {
        for ybar in 0..tgt.y.len() {
            for z in 0..src.x.len() {
                if !tgt.r.contains(xbar, ybar, g[z]) {
                    continue;
                }
                let found = (0..src.x.len()).any(|x| {
                    (0..src.y.len()).any(|y| {
                        src.r.contains(x, y, z) && tgt.x.leq(xbar, g[x]) && tgt.y.leq(ybar, h[y])
                    })
                });
                if !found {
                    return Err(FrameError::ConditionViolation {
                        condition: MorphismCondition::M2,
                        witness: vec![xbar, ybar, z],
                    });
                }
            }
        }
    }
    for [u, v, w] in src.t.triples() {
        if !tgt.t.contains(h[u], g[v], g[w]) {
            return Err(FrameError::ConditionViolation {
                condition: MorphismCondition::N1,
                witness: vec![u, v, w],
            });
        }
    }
    // (N2): the first coordinate of T is a Y-point, the second an X-point
    // mapped through g, the third is only bounded above.
    for ubar in 0..tgt.y.len() {
        for v in 0..src.x.len() {
            for wbar in 0..tgt.x.len() {
                if !tgt.t.contains(ubar, g[v], wbar) {
                    continue;
                }
                let found = (0..src.y.len()).any(|u| {
                    (0..src.x.len()).any(|w| {
                        src.t.contains(u, v, w) && tgt.y.leq(ubar, h[u]) && tgt.x.leq(g[w], wbar)
                    })
                });
                if !found {
                    return Err(FrameError::ConditionViolation {
                        condition: MorphismCondition::N2,
                        witness: vec![ubar, v, wbar],
                    });
                }
            }
        }
    }
    Ok(FiMorphism {
        source: src.clone(),
        target: tgt.clone(),
        g,
        h,
    })
}

pub fn identity_fi_morphism(f: &FiFrame) -> FiMorphism {
    let g = (0..f.x.len()).collect();
    let h = (0..f.y.len()).collect();
    validate_fi_morphism(f, f, g, h).expect("identity is an FI-morphism")
}

pub fn compose_fi_morphisms(
    first: &FiMorphism,
    second: &FiMorphism,
) -> Result<FiMorphism, FrameError> {
    let g = first.g.iter().map(|&x| second.g[x]).collect();
    let h = first.h.iter().map(|&x| second.h[x]).collect();
    validate_fi_morphism(&first.source, &second.target, g, h)
}

/// The dual of a module homomorphism: preimage maps between the canonical
/// frames, contravariantly.
pub fn dual_of_hom(hom: &FidlHomomorphism) -> FiMorphism {
    let src_dual = canonical_frame(hom.source());
    let tgt_dual = canonical_frame(hom.target());
    let g: Vec<usize> = tgt_dual
        .spectrum_a
        .primes()
        .iter()
        .map(|p| {
            let mut preimage = Subset::empty(hom.source().size_a());
            for a in 0..hom.source().size_a() {
                if p.contains(hom.alpha()[a]) {
                    preimage.insert(a);
                }
            }
            src_dual
                .spectrum_a
                .index_of(&preimage)
                .expect("preimage of a prime under a lattice hom is prime")
        })
        .collect();
    let h: Vec<usize> = tgt_dual
        .spectrum_b
        .primes()
        .iter()
        .map(|p| {
            let mut preimage = Subset::empty(hom.source().size_b());
            for b in 0..hom.source().size_b() {
                if p.contains(hom.gamma()[b]) {
                    preimage.insert(b);
                }
            }
            src_dual
                .spectrum_b
                .index_of(&preimage)
                .expect("preimage of a prime under a lattice hom is prime")
        })
        .collect();
    validate_fi_morphism(&tgt_dual.frame, &src_dual.frame, g, h)
        .expect("dual of a FIDL-homomorphism is an FI-morphism")
}

/// The dual of an FI-morphism: preimage maps between the complex modules,
/// contravariantly.
pub fn dual_of_fi_morphism(
    m: &FiMorphism,
    lattice_budget: usize,
) -> Result<FidlHomomorphism, FrameError> {
    let src_complex = complex_module(&m.target, lattice_budget)?;
    let tgt_complex = complex_module(&m.source, lattice_budget)?;
    let alpha: Vec<usize> = src_complex
        .upsets_x
        .sets()
        .iter()
        .map(|u| {
            let mut preimage = Subset::empty(m.source.x.len());
            for x in 0..m.source.x.len() {
                if u.contains(m.g[x]) {
                    preimage.insert(x);
                }
            }
            tgt_complex
                .upsets_x
                .index_of(&preimage)
                .expect("preimage of an upset under a monotone map is an upset")
        })
        .collect();
    let gamma: Vec<usize> = src_complex
        .upsets_y
        .sets()
        .iter()
        .map(|v| {
            let mut preimage = Subset::empty(m.source.y.len());
            for y in 0..m.source.y.len() {
                if v.contains(m.h[y]) {
                    preimage.insert(y);
                }
            }
            tgt_complex
                .upsets_y
                .index_of(&preimage)
                .expect("preimage of an upset under a monotone map is an upset")
        })
        .collect();
    Ok(validate_hom(
        &src_complex.module,
        &tgt_complex.module,
        alpha,
        gamma,
    )?)
}

/// The hom-set bijection of the duality: an FI-morphism from a frame into
/// the canonical frame of a module transposes to a module homomorphism into
/// the increasing-set module of that frame, by `a -> {y : a ∈ g(y)}` on the
/// first sort and `b -> {x : b ∈ h(x)}` on the second.
pub fn transpose_fi_morphism(
    m: &FidlModule,
    morphism: &FiMorphism,
    lattice_budget: usize,
) -> Result<FidlHomomorphism, FrameError> {
    let dual = canonical_frame(m);
    if *morphism.target() != dual.frame {
        return Err(FrameError::ConditionViolation {
            condition: MorphismCondition::MonotoneG,
            witness: vec![],
        });
    }
    let complex = complex_module(morphism.source(), lattice_budget)?;
    let alpha: Vec<usize> = (0..m.size_a())
        .map(|a| {
            let mut set = Subset::empty(morphism.source().x.len());
            for (y, &prime_idx) in morphism.g().iter().enumerate() {
                if dual.spectrum_a.prime(prime_idx).contains(a) {
                    set.insert(y);
                }
            }
            complex
                .upsets_x
                .index_of(&set)
                .expect("transpose image is an upset")
        })
        .collect();
    let gamma: Vec<usize> = (0..m.size_b())
        .map(|b| {
            let mut set = Subset::empty(morphism.source().y.len());
            for (x, &prime_idx) in morphism.h().iter().enumerate() {
                if dual.spectrum_b.prime(prime_idx).contains(b) {
                    set.insert(x);
                }
            }
            complex
                .upsets_y
                .index_of(&set)
                .expect("transpose image is an upset")
        })
        .collect();
    Ok(validate_hom(m, &complex.module, alpha, gamma)?)
}

/// The representation of a module inside the complex module of its canonical
/// frame, with the isomorphism verdict.
#[derive(Clone, Debug)]
pub struct RepresentationIso {
    pub hom: FidlHomomorphism,
    pub canonical: CanonicalFrame,
    pub complex: ComplexModule,
    pub is_iso: bool,
}

pub fn representation_iso(
    m: &FidlModule,
    lattice_budget: usize,
) -> Result<RepresentationIso, FrameError> {
    let canonical = canonical_frame(m);
    let complex = complex_module(&canonical.frame, lattice_budget)?;
    let alpha: Vec<usize> = (0..m.size_a())
        .map(|a| {
            let image = m.lattice_a().beta(&canonical.spectrum_a, a);
            complex
                .upsets_x
                .index_of(&image)
                .expect("beta image is an upset of the spectrum")
        })
        .collect();
    let gamma: Vec<usize> = (0..m.size_b())
        .map(|b| {
            let image = m.lattice_b().beta(&canonical.spectrum_b, b);
            complex
                .upsets_y
                .index_of(&image)
                .expect("beta image is an upset of the spectrum")
        })
        .collect();
    let hom = validate_hom(m, &complex.module, alpha, gamma)?;
    let is_iso = crate::morphism::is_iso(&hom).is_iso;
    Ok(RepresentationIso {
        hom,
        canonical,
        complex,
        is_iso,
    })
}

/// The counit of the duality: points of a frame mapped to the prime filters
/// of their upset lattices, with the isomorphism verdict.
#[derive(Clone, Debug)]
pub struct CounitIso {
    pub morphism: FiMorphism,
    pub is_iso: bool,
}

fn poset_iso_by_inverse(src: &Poset, tgt: &Poset, map: &[usize]) -> bool {
    let mut inverse = vec![usize::MAX; tgt.len()];
    for (x, &y) in map.iter().enumerate() {
        if inverse[y] != usize::MAX {
            return false;
        }
        inverse[y] = x;
    }
    if inverse.contains(&usize::MAX) {
        return false;
    }
    // Both directions monotone.
    src.map_is_monotone(tgt, map).is_none() && tgt.map_is_monotone(src, &inverse).is_none()
}

pub fn counit_iso(f: &FiFrame, lattice_budget: usize) -> Result<CounitIso, FrameError> {
    let complex = complex_module(f, lattice_budget)?;
    let dual = canonical_frame(&complex.module);
    let eps_x: Vec<usize> = (0..f.x.len())
        .map(|x| {
            let mut carrier = Subset::empty(complex.upsets_x.len());
            for (ui, u) in complex.upsets_x.sets().iter().enumerate() {
                if u.contains(x) {
                    carrier.insert(ui);
                }
            }
            dual.spectrum_a
                .index_of(&carrier)
                .expect("the upsets through a point form a prime filter")
        })
        .collect();
    let eps_y: Vec<usize> = (0..f.y.len())
        .map(|y| {
            let mut carrier = Subset::empty(complex.upsets_y.len());
            for (vi, v) in complex.upsets_y.sets().iter().enumerate() {
                if v.contains(y) {
                    carrier.insert(vi);
                }
            }
            dual.spectrum_b
                .index_of(&carrier)
                .expect("the upsets through a point form a prime filter")
        })
        .collect();
    let x_iso = poset_iso_by_inverse(&f.x, &dual.frame.x, &eps_x);
    let y_iso = poset_iso_by_inverse(&f.y, &dual.frame.y, &eps_y);
    let morphism = validate_fi_morphism(f, &dual.frame, eps_x, eps_y)?;
    Ok(CounitIso {
        morphism,
        is_iso: x_iso && y_iso,
    })
}

/// Report of the finite Urquhart-space conditions.
#[derive(Debug, Clone, Serialize)]
pub struct UrquhartReport {
    pub conditions: Vec<UrquhartCondition>,
    /// The operations in conditions four and five are read as the filter
    /// extensions of the module of increasing sets.
    pub reading_note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct UrquhartCondition {
    pub name: String,
    pub pass: bool,
    pub evaluated: bool,
    pub witness: Option<Vec<usize>>,
}

impl UrquhartCondition {
    fn pass(name: &str) -> Self {
        UrquhartCondition {
            name: name.into(),
            pass: true,
            evaluated: true,
            witness: None,
        }
    }
}

impl UrquhartReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.evaluated && c.pass)
    }
}

/// Check the five space conditions in their finite, discrete form, on raw
/// relation data that need not satisfy the frame closure laws (on a valid
/// frame all five hold). Conditions one and two are structural; three asserts
/// that fusion and implication of increasing sets stay increasing; four and
/// five force triples back into R and T from containments between point
/// filters. When condition three fails, the operations of four and five are
/// undefined and those conditions are reported unevaluated.
pub fn urquhart_check_raw(
    x: &Poset,
    y: &Poset,
    r: &TernaryRel,
    t: &TernaryRel,
    lattice_budget: usize,
) -> Result<UrquhartReport, FrameError> {
    let loose = FiFrame {
        x: x.clone(),
        y: y.clone(),
        r: r.clone(),
        t: t.clone(),
    };
    let upsets_x =
        increasing_sets_capped(x, lattice_budget).map_err(|size| FrameError::BudgetExceeded {
            size,
            budget: lattice_budget,
        })?;
    let upsets_y =
        increasing_sets_capped(y, lattice_budget).map_err(|size| FrameError::BudgetExceeded {
            size,
            budget: lattice_budget,
        })?;
    let mut conditions = vec![
        UrquhartCondition::pass("posets-are-priestley"),
        UrquhartCondition::pass("relations-well-sorted"),
    ];

    let mut cond3 = UrquhartCondition::pass("operations-preserve-increasing-sets");
    let na = upsets_x.len();
    let nb = upsets_y.len();
    let mut f_rows = vec![vec![0usize; nb]; na];
    let mut i_rows = vec![vec![0usize; na]; nb];
    'c3: for (ui, u) in upsets_x.sets().iter().enumerate() {
        for (vi, v) in upsets_y.sets().iter().enumerate() {
            let fu = frame_fusion_set(&loose, u, v);
            let iu = frame_implication_set(&loose, v, u);
            match (upsets_x.index_of(&fu), upsets_x.index_of(&iu)) {
                (Some(fi), Some(ii)) => {
                    f_rows[ui][vi] = fi;
                    i_rows[vi][ui] = ii;
                }
                _ => {
                    cond3.pass = false;
                    cond3.witness = Some(u.indices().into_iter().chain(v.indices()).collect());
                    break 'c3;
                }
            }
        }
    }
    let cond3_pass = cond3.pass;
    conditions.push(cond3);

    if !cond3_pass {
        for name in [
            "fusion-containment-forces-R",
            "implication-containment-forces-T",
        ] {
            conditions.push(UrquhartCondition {
                name: name.into(),
                pass: false,
                evaluated: false,
                witness: None,
            });
        }
        return Ok(UrquhartReport {
            conditions,
            reading_note: READING_NOTE.to_string(),
        });
    }

    // The increasing-set operations satisfy the module axioms even without
    // the frame closure laws, so the filter extensions are available.
    let m = validate_module(
        upsets_x.lattice().clone(),
        upsets_y.lattice().clone(),
        &f_rows,
        &i_rows,
    )?;

    // Point filters: eps_X(p) = {U : p in U} in the A sort, eps_Y(p) in B.
    let eps_x: Vec<crate::lattice::Filter> = (0..x.len())
        .map(|p| {
            let mut carrier = Subset::empty(upsets_x.len());
            for (ui, u) in upsets_x.sets().iter().enumerate() {
                if u.contains(p) {
                    carrier.insert(ui);
                }
            }
            m.lattice_a().filter_from(carrier).expect("point filter")
        })
        .collect();
    let eps_y: Vec<crate::lattice::Filter> = (0..y.len())
        .map(|p| {
            let mut carrier = Subset::empty(upsets_y.len());
            for (vi, v) in upsets_y.sets().iter().enumerate() {
                if v.contains(p) {
                    carrier.insert(vi);
                }
            }
            m.lattice_b().filter_from(carrier).expect("point filter")
        })
        .collect();

    let mut cond4 = UrquhartCondition::pass("fusion-containment-forces-R");
    'c4: for xp in 0..y.len() {
        for yp in 0..x.len() {
            let ext = filter_extension(&m, ExtensionMode::Fusion, &eps_x[yp], &eps_y[xp]);
            for zp in 0..x.len() {
                if ext.carrier().is_subset_of(eps_x[zp].carrier()) && !r.contains(yp, xp, zp) {
                    cond4.pass = false;
                    cond4.witness = Some(vec![yp, xp, zp]);
                    break 'c4;
                }
            }
        }
    }
    conditions.push(cond4);

    let mut cond5 = UrquhartCondition::pass("implication-containment-forces-T");
    'c5: for xp in 0..y.len() {
        for yp in 0..x.len() {
            let ext = filter_extension(&m, ExtensionMode::Implication, &eps_x[yp], &eps_y[xp]);
            for zp in 0..x.len() {
                if ext.carrier().is_subset_of(eps_x[zp].carrier()) && !t.contains(xp, yp, zp) {
                    cond5.pass = false;
                    cond5.witness = Some(vec![xp, yp, zp]);
                    break 'c5;
                }
            }
        }
    }
    conditions.push(cond5);

    Ok(UrquhartReport {
        conditions,
        reading_note: READING_NOTE.to_string(),
    })
}

const READING_NOTE: &str =
    "conditions 4 and 5 read f and i as the filter extensions of the increasing-set module";

/// [`urquhart_check_raw`] applied to a validated frame.
pub fn urquhart_check(f: &FiFrame, lattice_budget: usize) -> Result<UrquhartReport, FrameError> {
    urquhart_check_raw(&f.x, &f.y, &f.r, &f.t, lattice_budget)
}
