//! Isomorphism-free enumeration of small graphs without isolated vertices,
//! and the experiment comparing the structural verdict with the LP oracle
//! on every enumerated graph.
//!
//! Connected graphs are grown one edge at a time (close a cycle between two
//! existing vertices, or hang a new pendant vertex) and deduplicated by
//! canonical form. Every connected graph with `k + 1` edges arises this way
//! from one with `k` edges: delete a non-bridge edge if there is one,
//! otherwise a leaf. Disconnected graphs are multisets of connected ones.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::game::GameTable;
use crate::graph::Graph;
use crate::lp::{pmas_feasible, LP_LIMIT};
use crate::par::{self, Strategy};
use crate::pmas::check_population_monotonic;

/// Largest connected component the canonical form handles.
pub const MAX_COMPONENT_VERTICES: usize = 8;
/// Largest edge count accepted by [`agreement_experiment`].
pub const AGREEMENT_LIMIT: usize = 7;

/// Canonical code of a connected graph on at most 8 vertices: the vertex
/// count and the minimum upper-triangle adjacency bitmask over all
/// relabelings that list vertices by nondecreasing degree profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentCode {
    pub edges: u8,
    pub vertices: u8,
    pub adjacency: u32,
}

/// Canonical form of a graph: its component codes, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<ComponentCode>);

impl CanonicalForm {
    pub fn components(&self) -> &[ComponentCode] {
        &self.0
    }

    pub fn edge_count(&self) -> usize {
        self.0.iter().map(|c| c.edges as usize).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.0.iter().map(|c| c.vertices as usize).sum()
    }

    /// Builds the representative graph, components laid out in order.
    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::with_capacity(self.edge_count());
        let mut base = 0;
        for code in &self.0 {
            let n = code.vertices as usize;
            for (k, (u, v)) in pairs(n).enumerate() {
                if code.adjacency >> k & 1 == 1 {
                    edges.push((base + u, base + v));
                }
            }
            base += n;
        }
        Graph::from_edges(base, &edges).expect("canonical codes describe simple graphs")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{}:{:x}", c.vertices, c.adjacency)?;
        }
        Ok(())
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Small dense adjacency for a connected component.
#[derive(Clone, Copy)]
struct Small {
    n: usize,
    adj: [u8; MAX_COMPONENT_VERTICES],
}

impl Small {
    fn edge_count(&self) -> usize {
        self.adj[..self.n]
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    fn from_code(code: ComponentCode) -> Self {
        let mut adj = [0u8; MAX_COMPONENT_VERTICES];
        let n = code.vertices as usize;
        for (k, (u, v)) in pairs(n).enumerate() {
            if code.adjacency >> k & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        Small { n, adj }
    }

    fn canonical(&self) -> ComponentCode {
        let n = self.n;
        let degree = |v: usize| self.adj[v].count_ones();
        // Degree profile: own degree, then sorted neighbour degrees.
        let profile: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nd: Vec<u32> = (0..n)
                    .filter(|&w| self.adj[v] >> w & 1 == 1)
                    .map(degree)
                    .collect();
                nd.sort_unstable();
                (degree(v), nd)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| profile[a].cmp(&profile[b]));
        // Position p may only receive vertices whose profile equals that of
        // order[p].
        let slot_class: Vec<&(u32, Vec<u32>)> = order.iter().map(|&v| &profile[v]).collect();

        let mut best = u32::MAX;
        let mut placed = [0usize; MAX_COMPONENT_VERTICES];
        self.search(0, 0, &profile, &slot_class, &mut placed, 0, &mut best);
        ComponentCode {
            edges: self.edge_count() as u8,
            vertices: n as u8,
            adjacency: best,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        pos: usize,
        used: u8,
        profile: &[(u32, Vec<u32>)],
        slot_class: &[&(u32, Vec<u32>)],
        placed: &mut [usize; MAX_COMPONENT_VERTICES],
        code: u32,
        best: &mut u32,
    ) {
        if pos == self.n {
            *best = (*best).min(code);
            return;
        }
        for v in 0..self.n {
            if used >> v & 1 == 1 || &profile[v] != slot_class[pos] {
                continue;
            }
            let mut next = code;
            for (q, &w) in placed[..pos].iter().enumerate() {
                if self.adj[v] >> w & 1 == 1 {
                    next |= 1 << pair_index_n(q, pos, self.n);
                }
            }
            placed[pos] = v;
            self.search(
                pos + 1,
                used | 1 << v,
                profile,
                slot_class,
                placed,
                next,
                best,
            );
        }
    }
}

// Bit index of pair (q, p), q < p, in the `pairs(n)` order.
fn pair_index_n(q: usize, p: usize, n: usize) -> usize {
    q * (2 * n - q - 1) / 2 + (p - q - 1)
}

/// Canonical form of `g`. Every connected component must have at most
/// [`MAX_COMPONENT_VERTICES`] vertices.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut codes = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut component = vec![root];
        seen[root] = true;
        let mut k = 0;
        while k < component.len() {
            let v = component[k];
            k += 1;
            for w in g.neighbors(v).iter() {
                if !seen[w] {
                    seen[w] = true;
                    component.push(w);
                }
            }
        }
        if component.len() > MAX_COMPONENT_VERTICES {
            return Err(Error::size(
                "component size for canonical form",
                MAX_COMPONENT_VERTICES,
                component.len(),
            ));
        }
        let mut small = Small {
            n: component.len(),
            adj: [0; MAX_COMPONENT_VERTICES],
        };
        for (a, &v) in component.iter().enumerate() {
            for (b, &w) in component.iter().enumerate() {
                if g.neighbors(v).contains(w) {
                    small.adj[a] |= 1 << b;
                }
            }
        }
        codes.push(small.canonical());
    }
    codes.sort();
    Ok(CanonicalForm(codes))
}

/// All connected graphs with `1..=max_edges` edges and at most
/// `max_vertices` vertices, by canonical code.
fn connected_codes(
    max_edges: usize,
    max_vertices: usize,
    strategy: Strategy,
) -> Vec<ComponentCode> {
    let mut all = Vec::new();
    if max_edges == 0 || max_vertices < 2 {
        return all;
    }
    let k2 = Small {
        n: 2,
        adj: {
            let mut a = [0; MAX_COMPONENT_VERTICES];
            a[0] = 0b10;
            a[1] = 0b01;
            a
        },
    };
    let mut level: Vec<ComponentCode> = vec![k2.canonical()];
    for _ in 1..max_edges {
        all.extend(level.iter().copied());
        let children = par::map_slice(strategy, &level, |&code| {
            let g = Small::from_code(code);
            let mut out = Vec::new();
            for (u, v) in pairs(g.n) {
                if g.adj[u] >> v & 1 == 0 {
                    let mut h = g;
                    h.adj[u] |= 1 << v;
                    h.adj[v] |= 1 << u;
                    out.push(h.canonical());
                }
            }
            if g.n < max_vertices {
                for u in 0..g.n {
                    let mut h = g;
                    h.n += 1;
                    h.adj[u] |= 1 << g.n;
                    h.adj[g.n] = 1 << u;
                    out.push(h.canonical());
                }
            }
            out
        });
        let next: BTreeSet<ComponentCode> = children.into_iter().flatten().collect();
        level = next.into_iter().collect();
    }
    all.extend(level);
    all
}

fn check_bounds(max_edges: usize, max_vertices: usize) -> Result<usize> {
    let cap = max_vertices.min(max_edges + 1);
    if cap > MAX_COMPONENT_VERTICES {
        return Err(Error::size(
            "largest possible component (min(max_vertices, max_edges + 1))",
            MAX_COMPONENT_VERTICES,
            cap,
        ));
    }
    Ok(cap)
}

/// Every simple graph without isolated vertices having between 1 and
/// `max_edges` edges and at most `max_vertices` vertices, one per
/// isomorphism class, ordered by canonical form.
///
/// Components are limited to [`MAX_COMPONENT_VERTICES`] vertices, so either
/// `max_vertices <= 8` or `max_edges <= 7` must hold.
pub fn enumerate_graphs(max_edges: usize, max_vertices: usize) -> Result<Vec<Graph>> {
    Ok(
        enumerate_forms(max_edges, max_vertices, Strategy::default())?
            .iter()
            .map(CanonicalForm::to_graph)
            .collect(),
    )
}

pub fn enumerate_forms(
    max_edges: usize,
    max_vertices: usize,
    strategy: Strategy,
) -> Result<Vec<CanonicalForm>> {
    let cap = check_bounds(max_edges, max_vertices)?;
    let components = connected_codes(max_edges, cap, strategy);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    multisets(
        &components,
        0,
        max_edges,
        max_vertices,
        &mut stack,
        &mut out,
    );
    out.sort_by(|a: &CanonicalForm, b| {
        (a.edge_count(), a.vertex_count(), a).cmp(&(b.edge_count(), b.vertex_count(), b))
    });
    Ok(out)
}

fn multisets(
    parts: &[ComponentCode],
    from: usize,
    edges_left: usize,
    vertices_left: usize,
    stack: &mut Vec<ComponentCode>,
    out: &mut Vec<CanonicalForm>,
) {
    for (k, &c) in parts.iter().enumerate().skip(from) {
        if (c.edges as usize) > edges_left || (c.vertices as usize) > vertices_left {
            continue;
        }
        stack.push(c);
        let mut form = stack.clone();
        form.sort();
        out.push(CanonicalForm(form));
        multisets(
            parts,
            k,
            edges_left - c.edges as usize,
            vertices_left - c.vertices as usize,
            stack,
            out,
        );
        stack.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementEntry {
    pub canonical: CanonicalForm,
    pub edge_list: String,
    pub structural: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgreementReport {
    pub graphs_tested: usize,
    pub verdicts: Vec<AgreementEntry>,
    /// Edge lists of graphs on which the two verdicts differ.
    pub disagreements: Vec<String>,
}

impl AgreementReport {
    pub fn population_monotonic_count(&self) -> usize {
        self.verdicts.iter().filter(|e| e.structural).count()
    }
}

/// Runs the structural check and the LP oracle on every graph with at most
/// `max_edges` edges.
pub fn agreement_experiment(max_edges: usize) -> Result<AgreementReport> {
    agreement_experiment_with(max_edges, Strategy::default())
}

pub fn agreement_experiment_with(max_edges: usize, strategy: Strategy) -> Result<AgreementReport> {
    if max_edges > AGREEMENT_LIMIT {
        return Err(Error::size(
            "agreement experiment edges",
            AGREEMENT_LIMIT,
            max_edges,
        ));
    }
    const { assert!(AGREEMENT_LIMIT <= LP_LIMIT) };
    let forms = enumerate_forms(max_edges, 2 * max_edges, strategy)?;
    let entries = par::map_slice(strategy, &forms, |form| -> Result<AgreementEntry> {
        let g = form.to_graph();
        let structural = check_population_monotonic(&g).is_population_monotonic();
        // The graph-level loop already saturates the pool.
        let table = GameTable::with_strategy(&g, Strategy::Sequential);
        let oracle = pmas_feasible(&table)?.is_feasible();
        Ok(AgreementEntry {
            canonical: form.clone(),
            edge_list: g.to_edge_list(),
            structural,
            oracle,
        })
    });
    let verdicts = entries.into_iter().collect::<Result<Vec<_>>>()?;
    let disagreements = verdicts
        .iter()
        .filter(|e| e.structural != e.oracle)
        .map(|e| e.edge_list.clone())
        .collect();
    Ok(AgreementReport {
        graphs_tested: verdicts.len(),
        verdicts,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn pair_indexing_matches_iteration_order() {
        for n in 2..=MAX_COMPONENT_VERTICES {
            for (k, (u, v)) in pairs(n).enumerate() {
                assert_eq!(pair_index_n(u, v, n), k);
            }
        }
    }

    #[test]
    fn small_counts() {
        let one = enumerate_graphs(1, 8).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].edge_count(), 1);

        let two = enumerate_graphs(2, 8).unwrap();
        assert_eq!(two.len(), 3);
        let exactly_two: Vec<_> = two.iter().filter(|g| g.edge_count() == 2).collect();
        assert_eq!(exactly_two.len(), 2);
        assert!(exactly_two.iter().any(|g| g.vertex_count() == 3));
        assert!(exactly_two.iter().any(|g| g.vertex_count() == 4));
    }

    #[test]
    fn three_edges_contains_named_graphs() {
        let forms: BTreeSet<CanonicalForm> = enumerate_forms(3, 6, Strategy::default())
            .unwrap()
            .into_iter()
            .filter(|f| f.edge_count() == 3)
            .collect();
        let named = [
            "a b\nb c\nc a",
            "a b\nb c\nc d",
            "a b\na c\na d",
            "a b\nb c\nx y",
            "a b\nc d\ne f",
        ];
        for text in named {
            let f = canonical_form(&parse_graph(text).unwrap()).unwrap();
            assert!(forms.contains(&f), "{text}");
        }
        assert_eq!(forms.len(), named.len());
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = parse_graph("a b\nb c\nc d\nd a\na e").unwrap();
        let b = parse_graph("q r\nr s\ns t\nt q\nr u").unwrap();
        let c = parse_graph("a b\nb c\nc d\nd e\ne a").unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
        assert_ne!(canonical_form(&a).unwrap(), canonical_form(&c).unwrap());
        let form = canonical_form(&a).unwrap();
        assert_eq!(canonical_form(&form.to_graph()).unwrap(), form);
    }

    #[test]
    fn bounds() {
        assert!(enumerate_forms(7, 14, Strategy::default()).is_ok());
        assert!(matches!(
            enumerate_forms(8, 9, Strategy::default()),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            agreement_experiment(8),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn agreement_on_two_edges() {
        let report = agreement_experiment(2).unwrap();
        assert_eq!(report.graphs_tested, 3);
        assert!(report.disagreements.is_empty());
        assert!(report.verdicts.iter().all(|e| e.structural && e.oracle));
    }
}
