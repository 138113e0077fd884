//! The posets and join-specifications of the worked examples.

use std::sync::Arc;

use crate::joinspec::JoinSpec;
use crate::poset::Poset;

fn build(labels: &[&str], covers: &[(&str, &str)]) -> Poset {
    Poset::from_covers(labels, covers).expect("fixture poset is valid")
}

fn spec(p: &Arc<Poset>, sets: &[&[&str]]) -> JoinSpec {
    let sets: Vec<Vec<&str>> = sets.iter().map(|s| s.to_vec()).collect();
    JoinSpec::from_labels(p.clone(), &sets).expect("fixture spec is valid")
}

/// Six elements: `a,b < d`, `b,c < e`, `d,e < f`.
pub fn no_union() -> Poset {
    build(
        &["a", "b", "c", "d", "e", "f"],
        &[("a", "d"), ("b", "d"), ("b", "e"), ("c", "e"), ("d", "f"), ("e", "f")],
    )
}

pub fn no_union_u1(p: &Arc<Poset>) -> JoinSpec {
    spec(p, &[&["a", "b"]])
}

pub fn no_union_u2(p: &Arc<Poset>) -> JoinSpec {
    spec(p, &[&["b", "c"], &["d", "e"]])
}

/// Ten elements in four ranks: `a..d`, `e,f,g`, `h,i`, `j`.
pub fn strict() -> Poset {
    build(
        &["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"],
        &[
            ("a", "e"),
            ("b", "e"),
            ("b", "f"),
            ("c", "f"),
            ("c", "g"),
            ("d", "g"),
            ("e", "h"),
            ("f", "h"),
            ("f", "i"),
            ("g", "i"),
            ("h", "j"),
            ("i", "j"),
        ],
    )
}

pub fn strict_u1(p: &Arc<Poset>) -> JoinSpec {
    spec(
        p,
        &[
            &["a", "b"],
            &["b", "c"],
            &["c", "d"],
            &["b", "g"],
            &["c", "e"],
            &["a", "b", "c", "d", "e", "g"],
        ],
    )
}

pub fn strict_u2(p: &Arc<Poset>) -> JoinSpec {
    spec(
        p,
        &[
            &["a", "b"],
            &["b", "c"],
            &["c", "d"],
            &["a", "b", "c"],
            &["b", "c", "d"],
            &["a", "b", "c", "d", "e", "g"],
        ],
    )
}

/// Six elements whose `U_∞`-ideals contain a pentagon.
pub fn not_mod() -> Poset {
    build(
        &["a", "b", "c", "d", "e", "x"],
        &[("c", "d"), ("a", "e"), ("b", "e"), ("d", "e"), ("a", "x"), ("b", "x"), ("c", "x")],
    )
}

/// The join-closure of [`not_mod`] inside the lattice of its figure: a
/// bottom `z`, the points of `P`, `m = a ∨ b ∨ c` and a top `t`.
pub fn not_mod_lattice() -> Poset {
    build(
        &["z", "a", "b", "c", "m", "d", "e", "x", "t"],
        &[
            ("z", "a"),
            ("z", "b"),
            ("z", "c"),
            ("a", "m"),
            ("b", "m"),
            ("c", "m"),
            ("c", "d"),
            ("m", "e"),
            ("d", "e"),
            ("m", "x"),
            ("e", "t"),
            ("x", "t"),
        ],
    )
}

/// Two incomparable points.
pub fn em_nec_p() -> Poset {
    build(&["a", "b"], &[])
}

/// The chain `c < d`.
pub fn em_nec_q() -> Poset {
    build(&["c", "d"], &[("c", "d")])
}

/// Three incomparable points.
pub fn not_inj_p() -> Poset {
    build(&["a", "b", "c"], &[])
}

/// Three incomparable points below a common top.
pub fn not_inj_q() -> Poset {
    build(&["a'", "b'", "c'", "t"], &[("a'", "t"), ("b'", "t"), ("c'", "t")])
}
