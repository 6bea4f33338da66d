//! Graph representation and the structural primitives of independent set
//! games: stars, exclusive vertex sets, pendant distances and the
//! pendant / type I / type II edge partition.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};

/// Maximum number of edges; a coalition is a single `u64` word.
pub const MAX_EDGES: usize = 64;
/// Maximum number of vertices. Without isolated vertices this follows from
/// [`MAX_EDGES`].
pub const MAX_VERTICES: usize = 2 * MAX_EDGES;

/// A set of edge ids, i.e. a coalition of players.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    /// The grand coalition over `n` edges.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_EDGES);
        if n == MAX_EDGES {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub fn singleton(edge: usize) -> Self {
        Coalition(1u64 << edge)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, edge: usize) -> bool {
        edge < MAX_EDGES && self.0 >> edge & 1 == 1
    }

    pub fn with(self, edge: usize) -> Self {
        Coalition(self.0 | 1u64 << edge)
    }

    pub fn without(self, edge: usize) -> Self {
        Coalition(self.0 & !(1u64 << edge))
    }

    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Coalition(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing id order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        BitIter(self.0 as u128)
    }

    /// Number of members with an id smaller than `edge`.
    pub fn rank(self, edge: usize) -> usize {
        (self.0 & ((1u64 << edge) - 1)).count_ones() as usize
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter()
            .fold(Coalition::EMPTY, |acc, e| acc.with(e))
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A set of dense vertex ids.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u128) -> Self {
        VertexSet(bits)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u128::MAX)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u128 << v)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u128 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u128 << v))
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Vertices strictly greater than `v`.
    pub fn above(self, v: usize) -> Self {
        if v + 1 >= MAX_VERTICES {
            VertexSet::EMPTY
        } else {
            VertexSet(self.0 & !((1u128 << (v + 1)) - 1))
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        BitIter(self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter()
            .fold(VertexSet::EMPTY, |acc, v| acc.with(v))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

struct BitIter(u128);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// A finite simple undirected graph without isolated vertices.
///
/// Vertices and edges carry dense 0-based ids; the original labels are
/// kept for reporting.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    stars: Vec<Coalition>,
    neighbors: Vec<VertexSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.labels)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph on vertices `0..vertex_count` labelled by their ids.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..vertex_count).map(|v| v.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    pub fn with_labels(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if edges.len() > MAX_EDGES {
            return Err(Error::size("edge count", MAX_EDGES, edges.len()));
        }
        if n > MAX_VERTICES {
            return Err(Error::size("vertex count", MAX_VERTICES, n));
        }
        let mut incident = vec![Vec::new(); n];
        let mut stars = vec![Coalition::EMPTY; n];
        let mut neighbors = vec![VertexSet::EMPTY; n];
        let mut canonical = Vec::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            if a >= n {
                return Err(Error::UnknownVertex(a));
            }
            if b >= n {
                return Err(Error::UnknownVertex(b));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            if neighbors[a].contains(b) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            canonical.push((u, v));
            for (x, y) in [(u, v), (v, u)] {
                incident[x].push(id);
                stars[x] = stars[x].with(id);
                neighbors[x] = neighbors[x].with(y);
            }
        }
        if let Some(v) = incident.iter().position(Vec::is_empty) {
            return Err(Error::InvalidGraph(format!("vertex {v} is isolated")));
        }
        Ok(Graph {
            labels,
            edges: canonical,
            incident,
            stars,
            neighbors,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of an edge, smaller id first.
    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Incident edge ids of `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.neighbors[v]
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.edge_count())
    }

    pub fn is_pendant_vertex(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    pub fn is_pendant_edge(&self, edge: usize) -> bool {
        let (u, v) = self.edges[edge];
        self.degree(u) == 1 || self.degree(v) == 1
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub(crate) fn check_edge(&self, e: usize) -> Result<()> {
        if e < self.edge_count() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e))
        }
    }

    pub(crate) fn check_coalition(&self, s: Coalition) -> Result<()> {
        if s.is_subset(self.grand_coalition()) {
            Ok(())
        } else {
            let edge = s.iter().find(|&e| e >= self.edge_count()).unwrap_or(0);
            Err(Error::CoalitionOutOfRange {
                edge,
                edges: self.edge_count(),
            })
        }
    }

    /// δ(v) as a coalition; the unchecked form of [`Graph::star`].
    pub fn star_of(&self, v: usize) -> Coalition {
        self.stars[v]
    }

    /// The edges incident to `v`.
    pub fn star(&self, v: usize) -> Result<Coalition> {
        self.check_vertex(v)?;
        Ok(self.stars[v])
    }

    /// Vertices whose neighbourhood is exactly `{u, v}`.
    pub fn exclusive_neighbors(&self, u: usize, v: usize) -> Result<VertexSet> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex(u));
        }
        let pair = VertexSet::singleton(u).with(v);
        Ok((0..self.vertex_count())
            .filter(|&w| self.neighbors[w] == pair)
            .collect())
    }

    /// Vertices all of whose incident edges lie in `s`.
    pub fn exclusive_vertices(&self, s: Coalition) -> VertexSet {
        self.stars
            .iter()
            .enumerate()
            .filter(|(_, star)| star.is_subset(s))
            .map(|(v, _)| v)
            .collect()
    }

    /// Distance from every vertex to its nearest pendant vertex.
    pub fn pendant_distances(&self) -> Vec<Distance> {
        let n = self.vertex_count();
        let mut dist = vec![Distance::Infinite; n];
        let mut queue = VecDeque::new();
        for (v, slot) in dist.iter_mut().enumerate() {
            if self.is_pendant_vertex(v) {
                *slot = Distance::Finite(0);
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            let Distance::Finite(d) = dist[v] else {
                unreachable!()
            };
            for w in self.neighbors[v].iter() {
                if dist[w] == Distance::Infinite {
                    dist[w] = Distance::Finite(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance_to_pendant(&self, v: usize) -> Result<Distance> {
        self.check_vertex(v)?;
        Ok(self.pendant_distances()[v])
    }

    pub fn classify_edges(&self) -> EdgeClassification {
        let pendant: Vec<bool> = (0..self.edge_count())
            .map(|e| self.is_pendant_edge(e))
            .collect();
        let touches_pendant: Vec<bool> = self
            .incident
            .iter()
            .map(|edges| edges.iter().any(|&e| pendant[e]))
            .collect();
        let class_of = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| {
                if pendant[e] {
                    EdgeClass::Pendant
                } else if touches_pendant[u] || touches_pendant[v] {
                    EdgeClass::TypeII
                } else {
                    EdgeClass::TypeI
                }
            })
            .collect();
        EdgeClassification { class_of }
    }

    /// Renders the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&self.labels[u]);
            out.push(' ');
            out.push_str(&self.labels[v]);
            out.push('\n');
        }
        out
    }

    /// Looks up a vertex by its original label.
    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Parses the edge-list text format: one edge per line as two
/// whitespace-separated labels, `#` comments and blank lines ignored.
/// A line with a single label declares a vertex, which must then appear in
/// some edge.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut declared: Vec<(usize, usize)> = Vec::new();

    fn intern<'a>(
        label: &'a str,
        ids: &mut HashMap<&'a str, usize>,
        labels: &mut Vec<String>,
    ) -> usize {
        let next = labels.len();
        *ids.entry(label).or_insert_with(|| {
            labels.push(label.to_string());
            next
        })
    }

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            [label] => {
                let v = intern(label, &mut ids, &mut labels);
                declared.push((line, v));
            }
            [a, b] => {
                if a == b {
                    return Err(ParseError::SelfLoop {
                        line,
                        label: a.to_string(),
                    });
                }
                let u = intern(a, &mut ids, &mut labels);
                let v = intern(b, &mut ids, &mut labels);
                let key = (u.min(v), u.max(v));
                if let Some(&first) = seen.get(&key) {
                    return Err(ParseError::DuplicateEdge {
                        line,
                        a: a.to_string(),
                        b: b.to_string(),
                        first,
                    });
                }
                if edges.len() == MAX_EDGES {
                    return Err(ParseError::TooManyEdges {
                        line,
                        limit: MAX_EDGES,
                    });
                }
                seen.insert(key, line);
                edges.push((u, v));
            }
            _ => {
                return Err(ParseError::Malformed {
                    line,
                    found: tokens.len(),
                })
            }
        }
    }

    let mut used = vec![false; labels.len()];
    for &(u, v) in &edges {
        used[u] = true;
        used[v] = true;
    }
    if let Some(&(line, v)) = declared.iter().find(|&&(_, v)| !used[v]) {
        return Err(ParseError::IsolatedVertex {
            line,
            label: labels[v].clone(),
        });
    }

    let graph =
        Graph::with_labels(labels, &edges).expect("parser enforces simplicity and the size limits");
    Ok(graph)
}

/// Distance to the nearest pendant vertex; `Infinite` when none is reachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn exceeds(self, bound: usize) -> bool {
        match self {
            Distance::Finite(d) => d > bound,
            Distance::Infinite => true,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeClass {
    /// Has an endpoint of degree one.
    Pendant,
    /// Non-pendant and not incident to any pendant edge.
    TypeI,
    /// Non-pendant and incident to some pendant edge.
    TypeII,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeClass::Pendant => "pendant",
            EdgeClass::TypeI => "type-I",
            EdgeClass::TypeII => "type-II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassification {
    class_of: Vec<EdgeClass>,
}

impl EdgeClassification {
    pub fn class(&self, edge: usize) -> EdgeClass {
        self.class_of[edge]
    }

    pub fn classes(&self) -> &[EdgeClass] {
        &self.class_of
    }

    pub fn members(&self, class: EdgeClass) -> Coalition {
        self.class_of
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn pendant(&self) -> Coalition {
        self.members(EdgeClass::Pendant)
    }

    pub fn type_one(&self) -> Coalition {
        self.members(EdgeClass::TypeI)
    }

    pub fn type_two(&self) -> Coalition {
        self.members(EdgeClass::TypeII)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        parse_graph("a b\nb c").unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn parses_path_in_first_appearance_order() {
        let g = p3();
        assert_eq!(g.labels(), ["a", "b", "c"]);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn parse_skips_comments_and_blank_lines() {
        let g = parse_graph("# header\n\n  x y\n# another\ny z\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.label(0), "x");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_graph("a a"),
            Err(ParseError::SelfLoop {
                line: 1,
                label: "a".into()
            })
        );
        assert!(matches!(
            parse_graph("a b\nb a"),
            Err(ParseError::DuplicateEdge {
                line: 2,
                first: 1,
                ..
            })
        ));
        assert_eq!(
            parse_graph("a b\nc\n"),
            Err(ParseError::IsolatedVertex {
                line: 2,
                label: "c".into()
            })
        );
        assert!(parse_graph("c\na b\nc a").is_ok());
        assert_eq!(
            parse_graph("a b c"),
            Err(ParseError::Malformed { line: 1, found: 3 })
        );
        let big: String = (0..65).map(|i| format!("u{i} w{i}\n")).collect();
        assert_eq!(
            parse_graph(&big),
            Err(ParseError::TooManyEdges {
                line: 65,
                limit: 64
            })
        );
        let ok: String = (0..64).map(|i| format!("u{i} w{i}\n")).collect();
        assert_eq!(parse_graph(&ok).unwrap().edge_count(), 64);
    }

    #[test]
    fn constructor_rejects_isolated_vertices() {
        assert!(Graph::from_edges(3, &[(0, 1)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn stars() {
        let g = p3();
        assert_eq!(g.star(1).unwrap(), Coalition::from_bits(0b11));
        assert_eq!(g.star(0).unwrap(), Coalition::singleton(0));
        let t = cycle(3);
        for v in 0..3 {
            assert_eq!(t.star(v).unwrap().len(), 2);
        }
        assert_eq!(g.star(3), Err(Error::UnknownVertex(3)));
    }

    #[test]
    fn exclusive_neighbor_sets() {
        let g = p3();
        assert_eq!(
            g.exclusive_neighbors(0, 2).unwrap(),
            VertexSet::singleton(1)
        );
        assert!(g.exclusive_neighbors(0, 1).unwrap().is_empty());
        assert_eq!(g.exclusive_neighbors(1, 1), Err(Error::SameVertex(1)));
        let k4 = complete(4);
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    // brute force: no vertex has exactly two neighbours
                    let brute = (0..4).any(|w| k4.neighbors(w).len() == 2);
                    assert!(!brute);
                    assert!(k4.exclusive_neighbors(u, v).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn exclusive_vertex_sets() {
        let g = p3();
        assert_eq!(g.exclusive_vertices(g.grand_coalition()), g.all_vertices());
        assert!(g.exclusive_vertices(Coalition::EMPTY).is_empty());
        assert_eq!(
            g.exclusive_vertices(Coalition::singleton(0)),
            VertexSet::singleton(0)
        );
    }

    #[test]
    fn pendant_distances() {
        assert_eq!(p3().distance_to_pendant(0).unwrap(), Distance::Finite(0));
        assert_eq!(path(5).distance_to_pendant(2).unwrap(), Distance::Finite(2));
        let c6 = cycle(6);
        for v in 0..6 {
            assert_eq!(c6.distance_to_pendant(v).unwrap(), Distance::Infinite);
        }
        assert!(Distance::Infinite.exceeds(2));
        assert!(!Distance::Finite(2).exceeds(2));
        assert_eq!(Distance::Infinite.to_string(), "inf");
    }

    #[test]
    fn classification_examples() {
        let g = p3();
        assert_eq!(g.classify_edges().classes(), [EdgeClass::Pendant; 2]);
        assert_eq!(cycle(3).classify_edges().classes(), [EdgeClass::TypeI; 3]);
        let c = path(5).classify_edges();
        assert_eq!(
            c.classes(),
            [
                EdgeClass::Pendant,
                EdgeClass::TypeII,
                EdgeClass::TypeII,
                EdgeClass::Pendant
            ]
        );
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse_graph("x y\ny z\nz x\nz w").unwrap();
        assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn coalition_helpers() {
        let s: Coalition = [0, 3, 5].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert_eq!(s.rank(5), 2);
        assert_eq!(s.to_string(), "{0,3,5}");
        assert_eq!(Coalition::full(64).len(), 64);
        assert!(s.is_subset(Coalition::full(6)));
        assert!(!s.is_subset(Coalition::full(5)));
    }
}
