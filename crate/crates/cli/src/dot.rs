//! DOT emission: Hasse diagrams for posets and lattices, and hypergraph
//! expansions for the ternary relations of frames (each triple becomes an
//! intermediate node with three numbered arcs). Node order follows element
//! indices, so output is deterministic.

use fidl_lab::frame::FiFrame;
use fidl_lab::lattice::FiniteLattice;
use fidl_lab::module::FidlModule;
use fidl_lab::poset::Poset;
use std::fmt::Write;

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

fn hasse_nodes(out: &mut String, poset: &Poset, prefix: &str, indent: &str) {
    for i in 0..poset.len() {
        writeln!(
            out,
            "{indent}{prefix}{i} [label=\"{}\"];",
            escape(poset.label(i))
        )
        .unwrap();
    }
    for (low, high) in poset.covers() {
        writeln!(out, "{indent}{prefix}{low} -> {prefix}{high};").unwrap();
    }
}

pub fn lattice_dot(l: &FiniteLattice, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    hasse_nodes(&mut out, l.poset(), "n", "  ");
    writeln!(out, "}}").unwrap();
    out
}

pub fn module_dot(m: &FidlModule, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for (cluster, label, poset, prefix) in [
        (0, "A", m.lattice_a().poset(), "a"),
        (1, "B", m.lattice_b().poset(), "b"),
    ] {
        writeln!(out, "  subgraph cluster_{cluster} {{").unwrap();
        writeln!(out, "    label=\"{label}\";").unwrap();
        hasse_nodes(&mut out, poset, prefix, "    ");
        writeln!(out, "  }}").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

pub fn frame_dot(f: &FiFrame, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for (cluster, label, poset, prefix) in [(0, "X", f.x(), "x"), (1, "Y", f.y(), "y")] {
        writeln!(out, "  subgraph cluster_{cluster} {{").unwrap();
        writeln!(out, "    label=\"{label}\";").unwrap();
        hasse_nodes(&mut out, poset, prefix, "    ");
        writeln!(out, "  }}").unwrap();
    }
    // Ternary relations as labelled hyperedges: one point node per triple.
    for (k, [a, b, c]) in f.r().triples().into_iter().enumerate() {
        writeln!(out, "  r{k} [shape=point, xlabel=\"R\"];").unwrap();
        writeln!(out, "  r{k} -> x{a} [label=\"1\"];").unwrap();
        writeln!(out, "  r{k} -> y{b} [label=\"2\"];").unwrap();
        writeln!(out, "  r{k} -> x{c} [label=\"3\"];").unwrap();
    }
    for (k, [a, b, c]) in f.t().triples().into_iter().enumerate() {
        writeln!(out, "  t{k} [shape=point, xlabel=\"T\"];").unwrap();
        writeln!(out, "  t{k} -> y{a} [label=\"1\"];").unwrap();
        writeln!(out, "  t{k} -> x{b} [label=\"2\"];").unwrap();
        writeln!(out, "  t{k} -> x{c} [label=\"3\"];").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
