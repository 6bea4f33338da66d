//! Exact maximum independent sets on induced subgraphs.
//!
//! Branch and bound over `u128` vertex masks. Degree-0 and degree-1
//! vertices are taken greedily (some maximum independent set contains
//! them); otherwise the solver branches on a maximum-degree vertex, pruning
//! with the trivial `|remaining|` bound.

use crate::error::Result;
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisResult {
    pub size: usize,
    /// Lexicographically smallest maximum independent set (dense ids).
    pub witness: VertexSet,
}

/// α(G[within]).
pub fn independence_number(g: &Graph, within: VertexSet) -> usize {
    let within = within.intersection(g.all_vertices());
    let mut best = 0;
    search(g, within.bits(), 0, &mut best);
    best
}

fn search(g: &Graph, mut set: u128, mut taken: usize, best: &mut usize) {
    // Reductions: take vertices of induced degree <= 1.
    loop {
        if set == 0 {
            *best = (*best).max(taken);
            return;
        }
        if taken + (set.count_ones() as usize) <= *best {
            return;
        }
        let mut reduced = false;
        let mut max_deg = 0;
        let mut pivot = usize::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let nb = g.neighbors(v).bits() & set;
            let deg = nb.count_ones();
            if deg <= 1 {
                set &= !(nb | 1u128 << v);
                taken += 1;
                reduced = true;
                break;
            }
            if deg > max_deg {
                max_deg = deg;
                pivot = v;
            }
        }
        if reduced {
            continue;
        }
        let nb = g.neighbors(pivot).bits() & set;
        search(g, set & !(nb | 1u128 << pivot), taken + 1, best);
        search(g, set & !(1u128 << pivot), taken, best);
        return;
    }
}

/// Maximum independent set of the subgraph induced on `within`, with the
/// lexicographically smallest witness.
pub fn max_independent_set(g: &Graph, within: VertexSet) -> MisResult {
    let within = within.intersection(g.all_vertices());
    let size = independence_number(g, within);
    let mut remaining = within;
    let mut need = size;
    let mut witness = VertexSet::EMPTY;
    while need > 0 {
        let v = remaining.first().expect("a completion exists");
        let after = remaining.above(v).difference(g.neighbors(v));
        if independence_number(g, after) + 1 >= need {
            witness = witness.with(v);
            remaining = after;
            need -= 1;
        } else {
            remaining = remaining.without(v);
        }
    }
    MisResult { size, witness }
}

/// Whether some maximum independent set of `g` avoids both endpoints of
/// `edge`, decided as α(G − u − v) = α(G).
pub fn uncovered_by_some_mis(g: &Graph, edge: usize) -> Result<bool> {
    g.check_edge(edge)?;
    let (u, v) = g.endpoints(edge);
    let all = g.all_vertices();
    Ok(independence_number(g, all.without(u).without(v)) == independence_number(g, all))
}

pub fn covered_by_every_mis(g: &Graph, edge: usize) -> Result<bool> {
    uncovered_by_some_mis(g, edge).map(|b| !b)
}

pub fn is_independent(g: &Graph, set: VertexSet) -> bool {
    set.iter()
        .all(|v| g.neighbors(v).intersection(set).is_empty())
}
