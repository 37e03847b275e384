//! Canonical small instances reused across the crate and its test suites.

use crate::frame::{validate_frame, FiFrame};
use crate::lattice::{validate_lattice, FiniteLattice};
use crate::module::{validate_module, FidlModule};
use crate::poset::Poset;

/// The n-element chain. Elements of the 2-chain are labelled `0`, `1`; the
/// 3-chain `0`, `m`, `1`; longer chains `0`, `m1`, `m2`, ..
pub fn chain(n: usize) -> FiniteLattice {
    assert!(n >= 1);
    let labels: Vec<String> = (0..n)
        .map(|i| {
            if i == 0 {
                "0".to_string()
            } else if i == n - 1 && n > 1 {
                "1".to_string()
            } else if n == 3 {
                "m".to_string()
            } else {
                format!("m{i}")
            }
        })
        .collect();
    let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
    validate_lattice(labels, &leq).unwrap()
}

/// The four-element Boolean lattice with atoms `a`, `b`.
pub fn bool4() -> FiniteLattice {
    let labels = vec!["0".into(), "a".into(), "b".into(), "1".into()];
    let leq = |x: usize, y: usize| x == y || x == 0 || y == 3;
    let table: Vec<Vec<bool>> = (0..4)
        .map(|x| (0..4).map(|y| leq(x, y)).collect())
        .collect();
    validate_lattice(labels, &table).unwrap()
}

/// The diamond with three incomparable atoms: a lattice but not distributive.
pub fn m3_candidate() -> (Vec<String>, Vec<Vec<bool>>) {
    let labels = vec!["0".into(), "a".into(), "b".into(), "c".into(), "1".into()];
    let leq = |x: usize, y: usize| x == y || x == 0 || y == 4;
    let table = (0..5)
        .map(|x| (0..5).map(|y| leq(x, y)).collect())
        .collect();
    (labels, table)
}

/// The pentagon: the other minimal non-distributive lattice.
pub fn n5_candidate() -> (Vec<String>, Vec<Vec<bool>>) {
    // 0 < a < c < 1 and 0 < b < 1 with b incomparable to a, c.
    let labels = vec!["0".into(), "a".into(), "b".into(), "c".into(), "1".into()];
    let pairs = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 3),
        (1, 4),
        (2, 4),
        (3, 4),
    ];
    let table = (0..5)
        .map(|x| (0..5).map(|y| x == y || pairs.contains(&(x, y))).collect())
        .collect();
    (labels, table)
}

/// A = B = 2-chain, fusion is meet, implication is Boolean implication.
pub fn mod2() -> FidlModule {
    let c = chain(2);
    let f = vec![vec![0, 0], vec![0, 1]];
    let i = vec![vec![1, 1], vec![0, 1]];
    validate_module(c.clone(), c, &f, &i).unwrap()
}

/// A = BOOL4, B = 2-chain, with identity modal operators:
/// `f(x,1) = x`, `f(x,0) = 0`, `i(1,x) = x`, `i(0,x) = 1`.
pub fn modal_bool4() -> FidlModule {
    let a = bool4();
    let b = chain(2);
    let f = (0..4).map(|x| vec![0, x]).collect::<Vec<_>>();
    let i = vec![vec![3, 3, 3, 3], vec![0, 1, 2, 3]];
    validate_module(a, b, &f, &i).unwrap()
}

/// A = B = 3-chain, fusion is meet, implication is the Heyting arrow.
pub fn heyting_chain3() -> FidlModule {
    let c = chain(3);
    let f: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|b| x.min(b)).collect()).collect();
    let i: Vec<Vec<usize>> = (0..3)
        .map(|b| (0..3).map(|x| c.relative_pseudocomplement(b, x)).collect())
        .collect();
    validate_module(c.clone(), c, &f, &i).unwrap()
}

/// The one-element module on both sorts.
pub fn trivial_module() -> FidlModule {
    let one = chain(1);
    validate_module(one.clone(), one, &[vec![0]], &[vec![0]]).unwrap()
}

/// One point on each side, with R and T holding the full singleton triple.
pub fn ptframe() -> FiFrame {
    validate_frame(
        Poset::point("x"),
        Poset::point("y"),
        &[[0, 0, 0]],
        &[[0, 0, 0]],
    )
    .unwrap()
}
