//! Set partitions in restricted-growth normal form.
//!
//! Class ids appear in first-occurrence order, so two partitions are equal as
//! equivalence relations iff their `class_of` vectors are equal.

/// A partition of `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    class_of: Vec<usize>,
    num_classes: usize,
}

impl Partition {
    /// Normalize an arbitrary class assignment into restricted-growth form.
    pub fn from_class_of(raw: &[usize]) -> Self {
        let mut remap: Vec<Option<usize>> =
            vec![None; raw.len().max(raw.iter().map(|&c| c + 1).max().unwrap_or(0))];
        let mut class_of = Vec::with_capacity(raw.len());
        let mut next = 0;
        for &c in raw {
            let id = *remap[c].get_or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            class_of.push(id);
        }
        Partition {
            class_of,
            num_classes: next,
        }
    }

    pub fn identity(n: usize) -> Self {
        Partition {
            class_of: (0..n).collect(),
            num_classes: n,
        }
    }

    pub fn total(n: usize) -> Self {
        Partition {
            class_of: vec![0; n],
            num_classes: if n == 0 { 0 } else { 1 },
        }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn is_identity(&self) -> bool {
        self.num_classes == self.len()
    }

    pub fn is_total(&self) -> bool {
        self.num_classes <= 1
    }

    /// Blocks in first-occurrence order (equivalently: sorted by least member).
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_classes];
        for (i, &c) in self.class_of.iter().enumerate() {
            blocks[c].push(i);
        }
        blocks
    }

    /// Refinement order as inclusion of equivalence relations:
    /// `self <= other` iff every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.len(), other.len());
        let mut image: Vec<Option<usize>> = vec![None; self.num_classes];
        for (i, &c) in self.class_of.iter().enumerate() {
            match image[c] {
                None => image[c] = Some(other.class_of[i]),
                Some(d) => {
                    if d != other.class_of[i] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All partitions of `{0,..,n-1}` in restricted-growth-string order.
    pub fn enumerate(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut rgs = vec![0usize; n];
        fn rec(rgs: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Partition>) {
            let n = rgs.len();
            if pos == n {
                out.push(Partition {
                    class_of: rgs.clone(),
                    num_classes: max_used + 1,
                });
                return;
            }
            for c in 0..=max_used + 1 {
                rgs[pos] = c;
                rec(rgs, pos + 1, max_used.max(c), out);
            }
        }
        if n == 0 {
            out.push(Partition {
                class_of: vec![],
                num_classes: 0,
            });
        } else {
            rec(&mut rgs, 1, 0, &mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        assert_eq!(Partition::enumerate(0).len(), 1);
        assert_eq!(Partition::enumerate(1).len(), 1);
        assert_eq!(Partition::enumerate(3).len(), 5);
        assert_eq!(Partition::enumerate(5).len(), 52);
        assert_eq!(Partition::enumerate(6).len(), 203);
    }

    #[test]
    fn normalization() {
        let p = Partition::from_class_of(&[7, 3, 7, 0]);
        assert_eq!(p, Partition::from_class_of(&[0, 1, 0, 2]));
        assert_eq!(p.num_classes(), 3);
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn refinement() {
        let fine = Partition::from_class_of(&[0, 1, 2, 3]);
        let mid = Partition::from_class_of(&[0, 0, 1, 1]);
        let total = Partition::total(4);
        assert!(fine.refines(&mid) && mid.refines(&total));
        assert!(!mid.refines(&fine));
        let other = Partition::from_class_of(&[0, 1, 0, 1]);
        assert!(!mid.refines(&other) && !other.refines(&mid));
    }
}
