//! Named graphs used by the tests, the acceptance suite and the benches.

use crate::graph::{parse_graph, Graph};

fn parse(text: &str) -> Graph {
    parse_graph(text).expect("fixture graphs are well formed")
}

/// Path `v1 - v2 - ... - vn`.
pub fn path(n: usize) -> Graph {
    assert!(n >= 2);
    parse(
        &(1..n)
            .map(|i| format!("v{i} v{}\n", i + 1))
            .collect::<String>(),
    )
}

/// Cycle `v1 - ... - vn - v1`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    parse(
        &(1..=n)
            .map(|i| format!("v{i} v{}\n", i % n + 1))
            .collect::<String>(),
    )
}

pub fn complete(n: usize) -> Graph {
    assert!(n >= 2);
    let mut text = String::new();
    for u in 1..=n {
        for v in u + 1..=n {
            text.push_str(&format!("v{u} v{v}\n"));
        }
    }
    parse(&text)
}

/// The twelve-edge illustrative graph whose edge `k` (1-based in the
/// original numbering) has id `k - 1`.
///
/// Pendant edges 1, 6, 7, 11, 12; a single type I edge 3 = `a b` with
/// δ(a) = {2, 3} and δ(b) = {3, 4, 5}; vertex `w` with δ(w) = {8, 9, 10};
/// the remaining edges are type II.
pub fn twelve_edge_example() -> Graph {
    parse(
        "c p1\n\
         a c\n\
         a b\n\
         b d\n\
         b e\n\
         d p6\n\
         e p7\n\
         w x\n\
         w y\n\
         w e\n\
         x p11\n\
         y p12\n",
    )
}

/// Satisfies the distance condition but has two incident type I edges
/// (`v x` and `v y`), all hanging off the support vertex `w` of the single
/// pendant edge `w p`.
pub fn incident_type_one_witness() -> Graph {
    parse("w p\nv w\nx w\ny w\nv x\nv y\n")
}
