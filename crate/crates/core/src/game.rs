//! The independent set game: players are edges and a coalition `S` is worth
//! α(G[V⟨S⟩]).

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Coalition, Graph};
use crate::mis::independence_number;
use crate::par::{self, Strategy};
use crate::Rational;

/// Largest player count for which [`GameTable`] stores every value.
pub const DENSE_LIMIT: usize = 20;
/// Largest player count accepted by [`is_convex_brute`].
pub const CONVEXITY_BRUTE_LIMIT: usize = 13;
/// Largest player count accepted by [`core_check`].
pub const CORE_CHECK_LIMIT: usize = 20;

/// Worth of coalition `s`.
pub fn gamma(g: &Graph, s: Coalition) -> usize {
    independence_number(g, g.exclusive_vertices(s))
}

/// Characteristic function of the game on a graph. Values are tabulated
/// for up to [`DENSE_LIMIT`] players and computed on demand above.
#[derive(Debug, Clone)]
pub struct GameTable {
    graph: Graph,
    values: Option<Vec<u32>>,
}

impl GameTable {
    pub fn new(g: &Graph) -> Self {
        Self::with_strategy(g, Strategy::default())
    }

    pub fn with_strategy(g: &Graph, strategy: Strategy) -> Self {
        let n = g.edge_count();
        let values = (n <= DENSE_LIMIT).then(|| {
            par::map_range(strategy, 0..1u64 << n, |bits| {
                gamma(g, Coalition::from_bits(bits)) as u32
            })
        });
        GameTable {
            graph: g.clone(),
            values,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn players(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_tabulated(&self) -> bool {
        self.values.is_some()
    }

    pub fn value(&self, s: Coalition) -> usize {
        match &self.values {
            Some(v) => v[s.bits() as usize] as usize,
            None => gamma(&self.graph, s),
        }
    }

    pub(crate) fn dense(&self, what: &'static str) -> Result<&[u32]> {
        self.values
            .as_deref()
            .ok_or_else(|| Error::size(what, DENSE_LIMIT, self.players()))
    }
}

/// A pair of coalitions violating supermodularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityWitness {
    pub s: Coalition,
    pub t: Coalition,
    /// γ(S) + γ(T)
    pub lhs: usize,
    /// γ(S∩T) + γ(S∪T)
    pub rhs: usize,
}

/// Scans all coalition pairs. Returns `None` when the game is convex and
/// otherwise the first violating pair in `(S, T)` bit order.
pub fn is_convex_brute(g: &Graph) -> Result<Option<ConvexityWitness>> {
    is_convex_brute_with(g, Strategy::default())
}

pub fn is_convex_brute_with(g: &Graph, strategy: Strategy) -> Result<Option<ConvexityWitness>> {
    let n = g.edge_count();
    if n > CONVEXITY_BRUTE_LIMIT {
        return Err(Error::size("convexity scan", CONVEXITY_BRUTE_LIMIT, n));
    }
    let table = GameTable::with_strategy(g, strategy);
    let values = table.dense("convexity scan")?;
    let count = 1u64 << n;
    Ok(par::find_first(strategy, 0..count, |s| {
        // (S, T) violates iff (T, S) does, so the first witness has S < T.
        (s + 1..count).find_map(|t| {
            let lhs = values[s as usize] + values[t as usize];
            let rhs = values[(s & t) as usize] + values[(s | t) as usize];
            (lhs > rhs).then(|| ConvexityWitness {
                s: Coalition::from_bits(s),
                t: Coalition::from_bits(t),
                lhs: lhs as usize,
                rhs: rhs as usize,
            })
        })
    }))
}

/// Every non-pendant edge is incident to a pendant edge, i.e. no edge is of
/// type I. A component without pendant vertices consists of type I edges
/// only, so it is rejected as well.
pub fn is_convex_structural(g: &Graph) -> bool {
    g.classify_edges().type_one().is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreOutcome {
    InCore,
    /// Σ x ≠ γ(N).
    Inefficient {
        sum: Rational,
        value: usize,
    },
    /// The first coalition (in bit order) receiving less than its worth.
    Blocked {
        coalition: Coalition,
        sum: Rational,
        value: usize,
    },
}

impl CoreOutcome {
    pub fn in_core(&self) -> bool {
        matches!(self, CoreOutcome::InCore)
    }
}

pub fn core_check(g: &Graph, x: &[Rational]) -> Result<CoreOutcome> {
    let n = g.edge_count();
    if n > CORE_CHECK_LIMIT {
        return Err(Error::size("core check", CORE_CHECK_LIMIT, n));
    }
    core_check_table(&GameTable::new(g), x)
}

pub fn core_check_table(game: &GameTable, x: &[Rational]) -> Result<CoreOutcome> {
    let n = game.players();
    if n > CORE_CHECK_LIMIT {
        return Err(Error::size("core check", CORE_CHECK_LIMIT, n));
    }
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    if let Some(index) = x.iter().position(|v| v.is_negative()) {
        return Err(Error::NegativeEntry { index });
    }
    let total: Rational = x.iter().sum();
    let grand = game.value(Coalition::full(n));
    if total != Rational::from_integer(grand.into()) {
        return Ok(CoreOutcome::Inefficient {
            sum: total,
            value: grand,
        });
    }
    // Subset sums built from the sum without the lowest member.
    let mut sums: Vec<Rational> = Vec::with_capacity(1 << n);
    sums.push(Rational::zero());
    for bits in 1u64..1 << n {
        let low = bits.trailing_zeros() as usize;
        let sum = &sums[(bits & (bits - 1)) as usize] + &x[low];
        let value = game.value(Coalition::from_bits(bits));
        if sum < Rational::from_integer(value.into()) {
            return Ok(CoreOutcome::Blocked {
                coalition: Coalition::from_bits(bits),
                sum,
                value,
            });
        }
        sums.push(sum);
    }
    Ok(CoreOutcome::InCore)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn gamma_examples() {
        let g = parse_graph("a b\nb c\nc d\nd a\na e").unwrap();
        assert_eq!(gamma(&g, Coalition::EMPTY), 0);
        assert_eq!(
            gamma(&g, g.grand_coalition()),
            independence_number(&g, g.all_vertices())
        );
        // c has no pendant neighbour; its star is worth one.
        let c = g.vertex_by_label("c").unwrap();
        assert_eq!(gamma(&g, g.star_of(c)), 1);
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let g = parse_graph("a b\nb c\nc a\nc d").unwrap();
        let t = GameTable::new(&g);
        assert!(t.is_tabulated());
        for bits in 0..16 {
            let s = Coalition::from_bits(bits);
            assert_eq!(t.value(s), gamma(&g, s));
        }
    }

    #[test]
    fn convexity_examples() {
        let k2 = parse_graph("a b").unwrap();
        assert_eq!(is_convex_brute(&k2).unwrap(), None);
        let p3 = parse_graph("a b\nb c").unwrap();
        assert_eq!(is_convex_brute(&p3).unwrap(), None);
        let tri = parse_graph("a b\nb c\nc a").unwrap();
        let w = is_convex_brute(&tri)
            .unwrap()
            .expect("triangle is not convex");
        assert!(w.lhs > w.rhs);
        assert!(w.s < w.t);
        assert!(!is_convex_structural(&tri));
        let p5 = parse_graph("a b\nb c\nc d\nd e").unwrap();
        assert!(is_convex_structural(&p5));
        // pendant-free component next to a star
        let mixed = parse_graph("a b\nb c\nc a\nx y\ny z").unwrap();
        assert!(!is_convex_structural(&mixed));
    }

    #[test]
    fn convexity_scan_size_guard() {
        let text: String = (0..14).map(|i| format!("u{i} w{i}\n")).collect();
        let g = parse_graph(&text).unwrap();
        assert!(matches!(is_convex_brute(&g), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn core_examples() {
        let k2 = parse_graph("a b").unwrap();
        assert!(core_check(&k2, &[r(1, 1)]).unwrap().in_core());
        assert_eq!(
            core_check(&k2, &[r(0, 1)]).unwrap(),
            CoreOutcome::Inefficient {
                sum: r(0, 1),
                value: 1
            }
        );
        let p5 = parse_graph("a b\nb c\nc d\nd e").unwrap();
        let x = [r(1, 1), r(1, 2), r(1, 2), r(1, 1)];
        assert!(core_check(&p5, &x).unwrap().in_core());
        // Efficient but blocked: edge 0 alone is worth 1.
        let y = [r(0, 1), r(1, 1), r(1, 1), r(1, 1)];
        assert_eq!(
            core_check(&p5, &y).unwrap(),
            CoreOutcome::Blocked {
                coalition: Coalition::singleton(0),
                sum: r(0, 1),
                value: 1
            }
        );
        assert_eq!(
            core_check(&k2, &[r(-1, 1)]),
            Err(Error::NegativeEntry { index: 0 })
        );
    }
}
