//! Bounded distributive lattices over dense element indices, with filters,
//! ideals, prime-filter spectra and the representation map into increasing
//! sets of the spectrum.

use crate::partition::Partition;
use crate::poset::{Poset, PosetError};
use crate::subset::Subset;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Carrier bound for filter enumeration by subset scan; `2^n` candidates.
pub const FILTER_ENUM_MAX: usize = 24;
/// Above this size `spectrum` switches from the subset scan to the
/// join-irreducible construction.
pub const SPECTRUM_BRUTE_MAX: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeError {
    #[error("not a poset: {0}")]
    NotAPoset(#[from] PosetError),
    #[error("lattice must have at least one element")]
    Empty,
    #[error("elements {x} and {y} have no {kind}")]
    NoMeetOrJoin { kind: BoundKind, x: usize, y: usize },
    #[error("not distributive: x={x}, y={y}, z={z} violate x∧(y∨z) = (x∧y)∨(x∧z)")]
    NotDistributive { x: usize, y: usize, z: usize },
    #[error("supplied {kind} {index} is not a global {kind}")]
    NotBounded { kind: BoundKind, index: usize },
    #[error("supplied {kind} table disagrees with the order at ({x},{y}): stored {stored}, derived {derived}")]
    TableMismatch {
        kind: BoundKind,
        x: usize,
        y: usize,
        stored: usize,
        derived: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Meet,
    Join,
    Bottom,
    Top,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundKind::Meet => write!(f, "meet"),
            BoundKind::Join => write!(f, "join"),
            BoundKind::Bottom => write!(f, "bottom"),
            BoundKind::Top => write!(f, "top"),
        }
    }
}

/// A validated bounded distributive lattice: poset plus meet/join tables and
/// the two bounds. Tables always agree with the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: Poset,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

/// An upward-closed, meet-closed subset containing the top element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filter {
    carrier: Subset,
}

/// A downward-closed, join-closed subset containing the bottom element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    carrier: Subset,
}

impl Filter {
    pub fn carrier(&self) -> &Subset {
        &self.carrier
    }

    pub fn contains(&self, a: usize) -> bool {
        self.carrier.contains(a)
    }
}

impl Ideal {
    pub fn carrier(&self) -> &Subset {
        &self.carrier
    }

    pub fn contains(&self, a: usize) -> bool {
        self.carrier.contains(a)
    }
}

/// All prime filters of a lattice in canonical (ascending carrier bit
/// pattern) order, together with their inclusion poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    primes: Vec<Subset>,
    order: Poset,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn prime(&self, i: usize) -> &Subset {
        &self.primes[i]
    }

    pub fn primes(&self) -> &[Subset] {
        &self.primes
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    /// Index of a prime filter given by carrier, if present.
    pub fn index_of(&self, carrier: &Subset) -> Option<usize> {
        self.primes.iter().position(|p| p == carrier)
    }
}

/// All increasing subsets of a poset together with the bounded distributive
/// lattice they form under union and intersection.
#[derive(Clone, Debug)]
pub struct IncreasingSetLattice {
    base: Poset,
    sets: Vec<Subset>,
    lattice: FiniteLattice,
    index: HashMap<Subset, usize>,
}

impl IncreasingSetLattice {
    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &Subset {
        &self.sets[i]
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, s: &Subset) -> Option<usize> {
        self.index.get(s).copied()
    }
}

fn set_label(base: &Poset, s: &Subset) -> String {
    let mut out = String::from("{");
    for (k, i) in s.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(base.label(i));
    }
    out.push('}');
    out
}

/// Validate a raw element set plus order table as a bounded distributive
/// lattice, deriving meet/join tables and the bounds.
pub fn validate_lattice(
    labels: Vec<String>,
    leq: &[Vec<bool>],
) -> Result<FiniteLattice, LatticeError> {
    let poset = Poset::new(labels, leq)?;
    FiniteLattice::from_poset(poset)
}

impl FiniteLattice {
    /// Derive tables and bounds from a poset; reject non-lattices and
    /// non-distributive lattices with a witness.
    pub fn from_poset(poset: Poset) -> Result<Self, LatticeError> {
        let n = poset.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let order = poset.linear_extension();
        let mut topo_pos = vec![0usize; n];
        for (pos, &e) in order.iter().enumerate() {
            topo_pos[e] = pos;
        }
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower = poset.down_set(a).intersection(poset.down_set(b));
                let m = lower
                    .iter()
                    .max_by_key(|&c| topo_pos[c])
                    .filter(|&c| lower.is_subset_of(poset.down_set(c)))
                    .ok_or(LatticeError::NoMeetOrJoin {
                        kind: BoundKind::Meet,
                        x: a,
                        y: b,
                    })?;
                meet[a * n + b] = m as u32;
                let upper = poset.up_set(a).intersection(poset.up_set(b));
                let j = upper
                    .iter()
                    .min_by_key(|&c| topo_pos[c])
                    .filter(|&c| upper.is_subset_of(poset.up_set(c)))
                    .ok_or(LatticeError::NoMeetOrJoin {
                        kind: BoundKind::Join,
                        x: a,
                        y: b,
                    })?;
                join[a * n + b] = j as u32;
            }
        }
        let bottom = order[0];
        let top = order[n - 1];
        if !(0..n).all(|x| poset.leq(bottom, x)) {
            return Err(LatticeError::NoMeetOrJoin {
                kind: BoundKind::Bottom,
                x: bottom,
                y: bottom,
            });
        }
        if !(0..n).all(|x| poset.leq(x, top)) {
            return Err(LatticeError::NoMeetOrJoin {
                kind: BoundKind::Top,
                x: top,
                y: top,
            });
        }
        let lattice = FiniteLattice {
            poset,
            meet,
            join,
            bottom,
            top,
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if lattice.meet(x, lattice.join(y, z))
                        != lattice.join(lattice.meet(x, y), lattice.meet(x, z))
                    {
                        return Err(LatticeError::NotDistributive { x, y, z });
                    }
                }
            }
        }
        Ok(lattice)
    }

    /// Table-supplied variant: validates that the given tables and bounds
    /// agree with what the order dictates.
    pub fn from_parts(
        poset: Poset,
        meet: &[Vec<usize>],
        join: &[Vec<usize>],
        bottom: usize,
        top: usize,
    ) -> Result<Self, LatticeError> {
        let derived = FiniteLattice::from_poset(poset)?;
        let n = derived.len();
        for (kind, stored, table) in [
            (BoundKind::Meet, meet, &derived.meet),
            (BoundKind::Join, join, &derived.join),
        ] {
            for x in 0..n {
                for y in 0..n {
                    let s = stored
                        .get(x)
                        .and_then(|row| row.get(y))
                        .copied()
                        .unwrap_or(usize::MAX);
                    let d = table[x * n + y] as usize;
                    if s != d {
                        return Err(LatticeError::TableMismatch {
                            kind,
                            x,
                            y,
                            stored: s,
                            derived: d,
                        });
                    }
                }
            }
        }
        if bottom != derived.bottom {
            return Err(LatticeError::NotBounded {
                kind: BoundKind::Bottom,
                index: bottom,
            });
        }
        if top != derived.top {
            return Err(LatticeError::NotBounded {
                kind: BoundKind::Top,
                index: top,
            });
        }
        Ok(derived)
    }

    /// Construct from componentwise-built tables that are lattice-correct by
    /// construction (products, powers, upset lattices). Re-derives and checks
    /// everything at small sizes under debug assertions.
    pub(crate) fn from_raw_unchecked(
        poset: Poset,
        meet: Vec<u32>,
        join: Vec<u32>,
        bottom: usize,
        top: usize,
    ) -> Self {
        let lattice = FiniteLattice {
            poset,
            meet,
            join,
            bottom,
            top,
        };
        #[cfg(debug_assertions)]
        if lattice.len() <= 64 {
            let derived = FiniteLattice::from_poset(lattice.poset.clone())
                .expect("raw lattice construction produced a non-lattice");
            assert_eq!(derived.meet, lattice.meet, "raw meet table disagrees");
            assert_eq!(derived.join, lattice.join, "raw join table disagrees");
            assert_eq!(derived.bottom, lattice.bottom);
            assert_eq!(derived.top, lattice.top);
        }
        lattice
    }

    pub fn relabeled(&self, labels: Vec<String>) -> Result<Self, PosetError> {
        let poset = Poset::from_leq_fn(labels, |a, b| self.leq(a, b))?;
        Ok(FiniteLattice {
            poset,
            meet: self.meet.clone(),
            join: self.join.clone(),
            bottom: self.bottom,
            top: self.top,
        })
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Same labels, same order, same tables.
    pub fn equal_structure(&self, other: &FiniteLattice) -> bool {
        self.poset == other.poset && self.meet == other.meet && self.join == other.join
    }

    pub fn is_filter(&self, s: &Subset) -> bool {
        s.contains(self.top)
            && self.poset.is_increasing(s)
            && s.iter()
                .all(|a| s.iter().all(|b| s.contains(self.meet(a, b))))
    }

    pub fn is_ideal(&self, s: &Subset) -> bool {
        s.contains(self.bottom)
            && self.poset.is_decreasing(s)
            && s.iter()
                .all(|a| s.iter().all(|b| s.contains(self.join(a, b))))
    }

    pub fn is_proper_filter(&self, s: &Subset) -> bool {
        self.is_filter(s) && !s.is_full()
    }

    pub fn is_prime_filter(&self, s: &Subset) -> bool {
        if !self.is_proper_filter(s) {
            return false;
        }
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if s.contains(self.join(a, b)) && !s.contains(a) && !s.contains(b) {
                    return false;
                }
            }
        }
        true
    }

    /// Least filter containing `seed`; the empty seed yields `{top}`.
    pub fn fig(&self, seed: &Subset) -> Filter {
        let mut carrier = self.poset.up_closure(seed);
        carrier.insert(self.top);
        loop {
            let mut grew = false;
            let members = carrier.indices();
            for &a in &members {
                for &b in &members {
                    let m = self.meet(a, b);
                    if !carrier.contains(m) {
                        carrier.union_with(self.poset.up_set(m));
                        grew = true;
                    }
                }
            }
            if !grew {
                return Filter { carrier };
            }
        }
    }

    /// Least ideal containing `seed`; the empty seed yields `{bottom}`.
    pub fn idg(&self, seed: &Subset) -> Ideal {
        let mut carrier = self.poset.down_closure(seed);
        carrier.insert(self.bottom);
        loop {
            let mut grew = false;
            let members = carrier.indices();
            for &a in &members {
                for &b in &members {
                    let j = self.join(a, b);
                    if !carrier.contains(j) {
                        carrier.union_with(self.poset.down_set(j));
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ideal { carrier };
            }
        }
    }

    /// The principal filter `[a)`.
    pub fn principal_filter(&self, a: usize) -> Filter {
        Filter {
            carrier: self.poset.up_set(a).clone(),
        }
    }

    /// The principal ideal `(a]`.
    pub fn principal_ideal(&self, a: usize) -> Ideal {
        Ideal {
            carrier: self.poset.down_set(a).clone(),
        }
    }

    pub fn filter_from(&self, carrier: Subset) -> Option<Filter> {
        self.is_filter(&carrier).then_some(Filter { carrier })
    }

    /// Every filter, by scanning all subsets; canonical ascending order.
    pub fn enumerate_filters(&self) -> Vec<Filter> {
        let n = self.len();
        assert!(
            n <= FILTER_ENUM_MAX,
            "filter enumeration over {n} elements exceeds the 2^{FILTER_ENUM_MAX} scan bound"
        );
        let mut out = Vec::new();
        for bits in 0..(1u64 << n) {
            let s = Subset::from_bits(n, bits);
            if self.is_filter(&s) {
                out.push(Filter { carrier: s });
            }
        }
        out
    }

    pub fn enumerate_ideals(&self) -> Vec<Ideal> {
        let n = self.len();
        assert!(n <= FILTER_ENUM_MAX);
        let mut out = Vec::new();
        for bits in 0..(1u64 << n) {
            let s = Subset::from_bits(n, bits);
            if self.is_ideal(&s) {
                out.push(Ideal { carrier: s });
            }
        }
        out
    }

    /// Elements that are not the join of the elements strictly below them.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| {
                let below = self
                    .poset
                    .down_set(j)
                    .iter()
                    .filter(|&x| x != j)
                    .collect::<Vec<_>>();
                self.join_all(below) != j
            })
            .collect()
    }

    /// Elements that are not the meet of the elements strictly above them.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&m| {
                let above = self
                    .poset
                    .up_set(m)
                    .iter()
                    .filter(|&x| x != m)
                    .collect::<Vec<_>>();
                self.meet_all(above) != m
            })
            .collect()
    }

    /// All prime filters with their inclusion order. Uses the subset scan at
    /// small sizes and the join-irreducible construction above
    /// [`SPECTRUM_BRUTE_MAX`]; the two agree on every distributive lattice
    /// and are cross-checked in tests.
    pub fn spectrum(&self) -> Spectrum {
        if self.len() <= SPECTRUM_BRUTE_MAX {
            self.spectrum_brute_force()
        } else {
            self.spectrum_join_irreducible()
        }
    }

    pub fn spectrum_brute_force(&self) -> Spectrum {
        let primes: Vec<Subset> = self
            .enumerate_filters()
            .into_iter()
            .map(|f| f.carrier)
            .filter(|s| self.is_prime_filter(s))
            .collect();
        self.spectrum_from_primes(primes)
    }

    pub fn spectrum_join_irreducible(&self) -> Spectrum {
        let mut primes: Vec<Subset> = self
            .join_irreducibles()
            .into_iter()
            .map(|j| self.poset.up_set(j).clone())
            .collect();
        primes.sort();
        self.spectrum_from_primes(primes)
    }

    fn spectrum_from_primes(&self, primes: Vec<Subset>) -> Spectrum {
        let labels: Vec<String> = primes.iter().map(|p| set_label(&self.poset, p)).collect();
        let order = Poset::from_leq_fn(labels, |i, j| primes[i].is_subset_of(&primes[j]))
            .expect("prime filter inclusion is a partial order");
        Spectrum { primes, order }
    }

    /// The representation map: `beta(a)` is the set of primes containing `a`,
    /// an increasing subset of the spectrum.
    pub fn beta(&self, spectrum: &Spectrum, a: usize) -> Subset {
        let mut s = Subset::empty(spectrum.len());
        for (i, p) in spectrum.primes.iter().enumerate() {
            if p.contains(a) {
                s.insert(i);
            }
        }
        s
    }

    /// The congruence induced by a subset `y` of the spectrum:
    /// `a ~ b` iff `beta(a) ∩ y = beta(b) ∩ y`.
    pub fn theta_from_closed(&self, spectrum: &Spectrum, y: &Subset) -> Partition {
        let mut key_class: HashMap<Subset, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(self.len());
        for a in 0..self.len() {
            let key = self.beta(spectrum, a).intersection(y);
            let next = key_class.len();
            class_of.push(*key_class.entry(key).or_insert(next));
        }
        Partition::from_class_of(&class_of)
    }

    pub fn is_lattice_congruence(&self, p: &Partition) -> bool {
        debug_assert_eq!(p.len(), self.len());
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if !p.same(a, b) {
                    continue;
                }
                for c in 0..n {
                    if !p.same(self.meet(a, c), self.meet(b, c))
                        || !p.same(self.join(a, c), self.join(b, c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All lattice congruences by filtering every partition; the independent
    /// oracle for the spectral correspondence.
    pub fn congruences_brute_force(&self) -> Vec<Partition> {
        Partition::enumerate(self.len())
            .into_iter()
            .filter(|p| self.is_lattice_congruence(p))
            .collect()
    }

    /// Relative pseudocomplement `a -> b = max{c : a ∧ c <= b}`; exists in
    /// every finite distributive lattice.
    pub fn relative_pseudocomplement(&self, a: usize, b: usize) -> usize {
        self.join_all((0..self.len()).filter(|&c| self.leq(self.meet(a, c), b)))
    }

    /// Close `seed` under meet, join and the two bounds.
    pub fn sublattice_closure(&self, seed: &Subset) -> Subset {
        let mut carrier = seed.clone();
        carrier.insert(self.bottom);
        carrier.insert(self.top);
        loop {
            let mut grew = false;
            let members = carrier.indices();
            for &a in &members {
                for &b in &members {
                    for c in [self.meet(a, b), self.join(a, b)] {
                        if !carrier.contains(c) {
                            carrier.insert(c);
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                return carrier;
            }
        }
    }

    /// Is `carrier` a bounded sublattice (contains both bounds, closed under
    /// meet and join)? Returns the first violation otherwise.
    pub fn sublattice_violation(&self, carrier: &Subset) -> Option<SublatticeViolation> {
        if !carrier.contains(self.bottom) {
            return Some(SublatticeViolation::MissingBottom);
        }
        if !carrier.contains(self.top) {
            return Some(SublatticeViolation::MissingTop);
        }
        for a in carrier.iter() {
            for b in carrier.iter() {
                if !carrier.contains(self.meet(a, b)) {
                    return Some(SublatticeViolation::NotMeetClosed(a, b));
                }
                if !carrier.contains(self.join(a, b)) {
                    return Some(SublatticeViolation::NotJoinClosed(a, b));
                }
            }
        }
        None
    }

    /// Extract a bounded sublattice as its own lattice; returns the new
    /// lattice and the embedding of its indices into `self`.
    pub fn sublattice(&self, carrier: &Subset) -> (FiniteLattice, Vec<usize>) {
        assert!(self.sublattice_violation(carrier).is_none());
        let embed = carrier.indices();
        let n = embed.len();
        let mut pos = HashMap::new();
        for (i, &e) in embed.iter().enumerate() {
            pos.insert(e, i);
        }
        let labels = embed.iter().map(|&e| self.label(e).to_string()).collect();
        let poset = Poset::from_leq_fn(labels, |a, b| self.leq(embed[a], embed[b])).unwrap();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = pos[&self.meet(embed[a], embed[b])] as u32;
                join[a * n + b] = pos[&self.join(embed[a], embed[b])] as u32;
            }
        }
        let bottom = pos[&self.bottom];
        let top = pos[&self.top];
        (
            FiniteLattice::from_raw_unchecked(poset, meet, join, bottom, top),
            embed,
        )
    }
}

/// All increasing subsets of a poset as a bounded distributive lattice under
/// union and intersection.
pub fn increasing_sets(base: &Poset) -> IncreasingSetLattice {
    increasing_sets_capped(base, 1 << 16).expect("upset lattice exceeds the hard 2^16 cap")
}

pub fn increasing_sets_capped(base: &Poset, cap: usize) -> Result<IncreasingSetLattice, usize> {
    let sets = base.increasing_subsets_capped(cap)?;
    let m = sets.len();
    let mut index = HashMap::with_capacity(m);
    for (i, s) in sets.iter().enumerate() {
        index.insert(s.clone(), i);
    }
    let labels: Vec<String> = sets.iter().map(|s| set_label(base, s)).collect();
    let poset = Poset::from_leq_fn(labels, |a, b| sets[a].is_subset_of(&sets[b]))
        .expect("subset inclusion is a partial order");
    let mut meet = vec![0u32; m * m];
    let mut join = vec![0u32; m * m];
    for a in 0..m {
        for b in 0..m {
            meet[a * m + b] = index[&sets[a].intersection(&sets[b])] as u32;
            join[a * m + b] = index[&sets[a].union(&sets[b])] as u32;
        }
    }
    let bottom = index[&Subset::empty(base.len())];
    let top = index[&Subset::full(base.len())];
    let lattice = FiniteLattice::from_raw_unchecked(poset, meet, join, bottom, top);
    Ok(IncreasingSetLattice {
        base: base.clone(),
        sets,
        lattice,
        index,
    })
}

/// Componentwise product of bounded distributive lattices. Indices are mixed
/// radix with factor 0 least significant; labels are tuples.
pub fn lattice_product(factors: &[&FiniteLattice]) -> FiniteLattice {
    assert!(!factors.is_empty());
    if factors.len() == 1 {
        return factors[0].clone();
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let n: usize = sizes.iter().product();
    let decode = |mut idx: usize| -> Vec<usize> {
        sizes
            .iter()
            .map(|&s| {
                let c = idx % s;
                idx /= s;
                c
            })
            .collect()
    };
    let encode = |components: &[usize]| -> usize {
        components
            .iter()
            .zip(&sizes)
            .rev()
            .fold(0, |acc, (&c, &s)| acc * s + c)
    };
    let labels: Vec<String> = (0..n)
        .map(|idx| {
            let comps = decode(idx);
            let parts: Vec<&str> = comps
                .iter()
                .zip(factors)
                .map(|(&c, f)| f.label(c))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let poset = Poset::from_leq_fn(labels, |a, b| {
        decode(a)
            .iter()
            .zip(decode(b).iter())
            .zip(factors)
            .all(|((&x, &y), f)| f.leq(x, y))
    })
    .expect("componentwise order of posets is a partial order");
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for a in 0..n {
        let da = decode(a);
        for b in 0..n {
            let db = decode(b);
            let m: Vec<usize> = da
                .iter()
                .zip(&db)
                .zip(factors)
                .map(|((&x, &y), f)| f.meet(x, y))
                .collect();
            let j: Vec<usize> = da
                .iter()
                .zip(&db)
                .zip(factors)
                .map(|((&x, &y), f)| f.join(x, y))
                .collect();
            meet[a * n + b] = encode(&m) as u32;
            join[a * n + b] = encode(&j) as u32;
        }
    }
    let bottom = encode(&factors.iter().map(|f| f.bottom()).collect::<Vec<_>>());
    let top = encode(&factors.iter().map(|f| f.top()).collect::<Vec<_>>());
    FiniteLattice::from_raw_unchecked(poset, meet, join, bottom, top)
}

/// Mixed-radix index helpers shared by product constructions.
pub fn product_decode(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    sizes
        .iter()
        .map(|&s| {
            let c = idx % s;
            idx /= s;
            c
        })
        .collect()
}

pub fn product_encode(sizes: &[usize], components: &[usize]) -> usize {
    components
        .iter()
        .zip(sizes)
        .rev()
        .fold(0, |acc, (&c, &s)| acc * s + c)
}


#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SublatticeViolation {
    MissingBottom,
    MissingTop,
    NotMeetClosed(usize, usize),
    NotJoinClosed(usize, usize),
}
