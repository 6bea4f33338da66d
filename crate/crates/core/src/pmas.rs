//! Population monotonicity: the structural decision procedure, the explicit
//! allocation scheme for games that pass it, and an exact verifier for
//! arbitrary schemes.
//!
//! A graph's game admits a population monotonic allocation scheme exactly
//! when
//!
//! 1. every vertex is within distance two of a pendant vertex, and
//! 2. no two type I edges share an endpoint.
//!
//! For such graphs [`build_pmas`] returns the scheme that pays pendant
//! edges 1, a type I edge 1 once a full endpoint star is present, a type II
//! edge `1/deg(w)` once the whole star of an endpoint `w` lies inside the
//! coalition's type II edges, and 0 otherwise.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{gamma, GameTable, DENSE_LIMIT};
use crate::graph::{Coalition, Distance, EdgeClass, EdgeClassification, Graph};
use crate::mis::{max_independent_set, uncovered_by_some_mis};
use crate::par::{self, Strategy};
use crate::Rational;

/// Why a graph fails the structural test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// A vertex farther than two steps from every pendant vertex.
    FarVertex { vertex: usize, distance: Distance },
    /// Two type I edges meeting at `shared`.
    IncidentTypeIPair {
        first: usize,
        second: usize,
        shared: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmVerdict {
    PopulationMonotonic,
    NotPopulationMonotonic(Certificate),
}

impl PmVerdict {
    pub fn is_population_monotonic(&self) -> bool {
        matches!(self, PmVerdict::PopulationMonotonic)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            PmVerdict::PopulationMonotonic => None,
            PmVerdict::NotPopulationMonotonic(c) => Some(c),
        }
    }
}

pub fn check_population_monotonic(g: &Graph) -> PmVerdict {
    check_with_classification(g, &g.classify_edges())
}

fn check_with_classification(g: &Graph, classes: &EdgeClassification) -> PmVerdict {
    let distances = g.pendant_distances();
    if let Some((vertex, &distance)) = distances.iter().enumerate().find(|(_, d)| d.exceeds(2)) {
        return PmVerdict::NotPopulationMonotonic(Certificate::FarVertex { vertex, distance });
    }
    for v in 0..g.vertex_count() {
        let mut type_one = g
            .incident_edges(v)
            .iter()
            .copied()
            .filter(|&e| classes.class(e) == EdgeClass::TypeI);
        if let (Some(first), Some(second)) = (type_one.next(), type_one.next()) {
            return PmVerdict::NotPopulationMonotonic(Certificate::IncidentTypeIPair {
                first,
                second,
                shared: v,
            });
        }
    }
    PmVerdict::PopulationMonotonic
}

/// Payoffs `x_{S,i}` for every non-empty coalition `S` and member `i`.
pub trait AllocationScheme: Sync {
    fn players(&self) -> usize;

    /// Payoff of member `i` in coalition `s`. Only called with `i ∈ s`.
    fn payoff(&self, s: Coalition, i: usize) -> Rational;

    fn payoff_vector(&self, s: Coalition) -> Vec<Rational> {
        s.iter().map(|i| self.payoff(s, i)).collect()
    }
}

/// Adapts a closure to [`AllocationScheme`].
pub struct FnScheme<F> {
    players: usize,
    f: F,
}

impl<F> FnScheme<F>
where
    F: Fn(Coalition, usize) -> Rational + Sync,
{
    pub fn new(players: usize, f: F) -> Self {
        FnScheme { players, f }
    }
}

impl<F> AllocationScheme for FnScheme<F>
where
    F: Fn(Coalition, usize) -> Rational + Sync,
{
    fn players(&self) -> usize {
        self.players
    }

    fn payoff(&self, s: Coalition, i: usize) -> Rational {
        (self.f)(s, i)
    }
}

/// A fully materialised scheme, one entry per `(S, i)` with `i ∈ S`.
///
/// Entries are stored flat in coalition bit order; within a coalition by
/// member id.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedScheme {
    players: usize,
    offsets: Vec<usize>,
    values: Vec<Rational>,
}

impl TabulatedScheme {
    pub fn zeros(players: usize) -> Self {
        let offsets = coalition_offsets(players);
        let len = players << players.saturating_sub(1);
        TabulatedScheme {
            players,
            offsets,
            values: vec![Rational::zero(); len],
        }
    }

    pub fn index(&self, s: Coalition, i: usize) -> usize {
        self.offsets[s.bits() as usize] + s.rank(i)
    }

    pub fn set(&mut self, s: Coalition, i: usize, value: Rational) {
        let k = self.index(s, i);
        self.values[k] = value;
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Rational] {
        &mut self.values
    }
}

/// Start of every coalition's block in a flat `(S, i)` array; the table has
/// one extra trailing entry holding the total length.
pub fn coalition_offsets(players: usize) -> Vec<usize> {
    let count = 1usize << players;
    let mut offsets = Vec::with_capacity(count + 1);
    let mut acc = 0;
    for bits in 0..count {
        offsets.push(acc);
        acc += (bits as u64).count_ones() as usize;
    }
    offsets.push(acc);
    offsets
}

impl AllocationScheme for TabulatedScheme {
    fn players(&self) -> usize {
        self.players
    }

    fn payoff(&self, s: Coalition, i: usize) -> Rational {
        self.values[self.index(s, i)].clone()
    }
}

#[derive(Debug, Clone)]
enum Rule {
    Pendant,
    /// Stars of both endpoints.
    TypeOne(Coalition, Coalition),
    /// The endpoint star contained in the type II edges, if any, and the
    /// share paid once it is present.
    TypeTwo(Option<(Coalition, Rational)>),
}

/// The explicit scheme for population monotonic graphs.
#[derive(Debug, Clone)]
pub struct MechanismScheme {
    classes: EdgeClassification,
    type_two: Coalition,
    rules: Vec<Rule>,
}

impl MechanismScheme {
    pub fn classification(&self) -> &EdgeClassification {
        &self.classes
    }
}

pub fn build_pmas(g: &Graph) -> Result<MechanismScheme> {
    let classes = g.classify_edges();
    if !check_with_classification(g, &classes).is_population_monotonic() {
        return Err(Error::NotPopulationMonotonic);
    }
    let type_two = classes.type_two();
    let mut rules = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        let rule = match classes.class(e) {
            EdgeClass::Pendant => Rule::Pendant,
            EdgeClass::TypeI => Rule::TypeOne(g.star_of(u), g.star_of(v)),
            EdgeClass::TypeII => {
                let mut inside = [u, v]
                    .into_iter()
                    .filter(|&w| g.star_of(w).is_subset(type_two));
                let share = inside.next().map(|w| {
                    (
                        g.star_of(w),
                        Rational::new(1.into(), (g.degree(w) as i64).into()),
                    )
                });
                if inside.next().is_some() {
                    return Err(Error::Internal(format!(
                        "both endpoint stars of type II edge {e} consist of type II edges"
                    )));
                }
                Rule::TypeTwo(share)
            }
        };
        rules.push(rule);
    }
    Ok(MechanismScheme {
        classes,
        type_two,
        rules,
    })
}

impl AllocationScheme for MechanismScheme {
    fn players(&self) -> usize {
        self.rules.len()
    }

    fn payoff(&self, s: Coalition, i: usize) -> Rational {
        debug_assert!(s.contains(i));
        match &self.rules[i] {
            Rule::Pendant => Rational::one(),
            Rule::TypeOne(su, sv) if su.is_subset(s) || sv.is_subset(s) => Rational::one(),
            Rule::TypeTwo(Some((star, share))) if star.is_subset(s.intersection(self.type_two)) => {
                share.clone()
            }
            _ => Rational::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerificationMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl fmt::Display for VerificationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationMode::Exhaustive => write!(f, "exhaustive"),
            VerificationMode::Sampled { count, seed } => {
                write!(f, "sampled ({count} coalitions, seed {seed})")
            }
        }
    }
}

/// Non-empty coalitions covered by `mode`, in bit order.
pub fn coalitions(players: usize, mode: VerificationMode) -> Result<Vec<Coalition>> {
    match mode {
        VerificationMode::Exhaustive => {
            if players > DENSE_LIMIT {
                return Err(Error::size("exhaustive verification", DENSE_LIMIT, players));
            }
            Ok((1u64..1 << players).map(Coalition::from_bits).collect())
        }
        VerificationMode::Sampled { count, seed } => {
            if players == 0 {
                return Ok(Vec::new());
            }
            let full = Coalition::full(players).bits();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out: Vec<Coalition> = Vec::with_capacity(count);
            while out.len() < count {
                let bits = rng.random::<u64>() & full;
                if bits != 0 {
                    out.push(Coalition::from_bits(bits));
                }
            }
            out.sort();
            out.dedup();
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficiencyViolation {
    pub coalition: Coalition,
    pub sum: Rational,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub smaller: Coalition,
    pub larger: Coalition,
    pub edge: usize,
    pub before: Rational,
    pub after: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub efficiency_violations: Vec<EfficiencyViolation>,
    pub monotonicity_violations: Vec<MonotonicityViolation>,
    pub coalitions_checked: usize,
}

impl VerificationReport {
    pub fn is_pmas(&self) -> bool {
        self.efficiency_violations.is_empty() && self.monotonicity_violations.is_empty()
    }
}

/// Checks efficiency on every covered coalition and monotonicity on every
/// cover pair `(S, S ∪ {j})` leaving a covered `S`. Cover pairs imply the
/// full inclusion condition by chaining.
pub fn verify_scheme(
    g: &Graph,
    scheme: &dyn AllocationScheme,
    mode: VerificationMode,
) -> Result<VerificationReport> {
    verify_scheme_with(g, scheme, mode, Strategy::default())
}

pub fn verify_scheme_with(
    g: &Graph,
    scheme: &dyn AllocationScheme,
    mode: VerificationMode,
    strategy: Strategy,
) -> Result<VerificationReport> {
    let n = g.edge_count();
    if scheme.players() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: scheme.players(),
        });
    }
    let domain = coalitions(n, mode)?;
    let table = match mode {
        VerificationMode::Exhaustive => Some(GameTable::with_strategy(g, strategy)),
        VerificationMode::Sampled { .. } => None,
    };
    let value = |s: Coalition| match &table {
        Some(t) => t.value(s),
        None => gamma(g, s),
    };
    let grand = g.grand_coalition();

    let per_coalition = par::map_slice(strategy, &domain, |&s| {
        let payoffs = scheme.payoff_vector(s);
        let sum: Rational = payoffs.iter().sum();
        let worth = value(s);
        let efficiency =
            (sum != Rational::from_integer(worth.into())).then_some(EfficiencyViolation {
                coalition: s,
                sum,
                value: worth,
            });
        let mut monotonicity = Vec::new();
        for j in Coalition::from_bits(grand.bits() & !s.bits()).iter() {
            let t = s.with(j);
            for (k, i) in s.iter().enumerate() {
                let after = scheme.payoff(t, i);
                if payoffs[k] > after {
                    monotonicity.push(MonotonicityViolation {
                        smaller: s,
                        larger: t,
                        edge: i,
                        before: payoffs[k].clone(),
                        after,
                    });
                }
            }
        }
        (efficiency, monotonicity)
    });

    let mut report = VerificationReport {
        coalitions_checked: domain.len(),
        ..Default::default()
    };
    for (eff, mono) in per_coalition {
        report.efficiency_violations.extend(eff);
        report.monotonicity_violations.extend(mono);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    /// Stars of a maximum independent set's vertices sum to one in `N`.
    Decomposition,
    /// Edges avoided by some maximum independent set are paid nothing.
    EdgeExposed,
    /// Pendant edges are paid one.
    EdgePendant,
    /// Type I edges are paid one once an endpoint star is present.
    TypeOneFullStar,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::Decomposition => "decomposition",
            Lemma::EdgeExposed => "edge-exposed",
            Lemma::EdgePendant => "edge-pendant",
            Lemma::TypeOneFullStar => "type-I full star",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaFailure {
    pub lemma: Lemma,
    pub coalition: Coalition,
    /// Offending edge, or the vertex for [`Lemma::Decomposition`].
    pub subject: usize,
    pub observed: Rational,
    pub expected: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub failures: Vec<LemmaFailure>,
    pub coalitions_checked: usize,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures_of(&self, lemma: Lemma) -> usize {
        self.failures.iter().filter(|f| f.lemma == lemma).count()
    }
}

/// Checks the payoff identities every PMAS of the game must satisfy.
pub fn lemma_suite(
    g: &Graph,
    scheme: &dyn AllocationScheme,
    mode: VerificationMode,
) -> Result<LemmaReport> {
    lemma_suite_with(g, scheme, mode, Strategy::default())
}

pub fn lemma_suite_with(
    g: &Graph,
    scheme: &dyn AllocationScheme,
    mode: VerificationMode,
    strategy: Strategy,
) -> Result<LemmaReport> {
    let n = g.edge_count();
    if scheme.players() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: scheme.players(),
        });
    }
    let classes = g.classify_edges();
    let grand = g.grand_coalition();
    let one = Rational::one();
    let zero = Rational::zero();
    let mut failures = Vec::new();

    let mis = max_independent_set(g, g.all_vertices());
    for v in mis.witness.iter() {
        let sum: Rational = g
            .incident_edges(v)
            .iter()
            .map(|&i| scheme.payoff(grand, i))
            .sum();
        if sum != one {
            failures.push(LemmaFailure {
                lemma: Lemma::Decomposition,
                coalition: grand,
                subject: v,
                observed: sum,
                expected: one.clone(),
            });
        }
    }

    let exposed = (0..n)
        .map(|e| uncovered_by_some_mis(g, e))
        .collect::<Result<Vec<bool>>>()?;
    let domain = coalitions(n, mode)?;
    let per_coalition = par::map_slice(strategy, &domain, |&s| {
        let mut out = Vec::new();
        for i in s.iter() {
            let x = scheme.payoff(s, i);
            let mut expect = |lemma, target: &Rational| {
                if &x != target {
                    out.push(LemmaFailure {
                        lemma,
                        coalition: s,
                        subject: i,
                        observed: x.clone(),
                        expected: target.clone(),
                    });
                }
            };
            if exposed[i] {
                expect(Lemma::EdgeExposed, &zero);
            }
            match classes.class(i) {
                EdgeClass::Pendant => expect(Lemma::EdgePendant, &one),
                EdgeClass::TypeI => {
                    let (u, v) = g.endpoints(i);
                    if g.star_of(u).is_subset(s) || g.star_of(v).is_subset(s) {
                        expect(Lemma::TypeOneFullStar, &one);
                    }
                }
                EdgeClass::TypeII => {}
            }
        }
        out
    });
    failures.extend(per_coalition.into_iter().flatten());
    Ok(LemmaReport {
        failures,
        coalitions_checked: domain.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn path(n: usize) -> Graph {
        let text: String = (1..n).map(|i| format!("v{i} v{}\n", i + 1)).collect();
        parse_graph(&text).unwrap()
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn verdict_examples() {
        let k2 = parse_graph("a b").unwrap();
        assert!(check_population_monotonic(&k2).is_population_monotonic());

        let c6 = parse_graph("v1 v2\nv2 v3\nv3 v4\nv4 v5\nv5 v6\nv6 v1").unwrap();
        assert_eq!(
            check_population_monotonic(&c6),
            PmVerdict::NotPopulationMonotonic(Certificate::FarVertex {
                vertex: 0,
                distance: Distance::Infinite
            })
        );

        let p7 = path(7);
        let verdict = check_population_monotonic(&p7);
        assert_eq!(
            verdict,
            PmVerdict::NotPopulationMonotonic(Certificate::FarVertex {
                vertex: p7.vertex_by_label("v4").unwrap(),
                distance: Distance::Finite(3)
            })
        );
    }

    #[test]
    fn incident_type_one_pair() {
        // Triangle a,b,c with a pendant path of length two hanging off each
        // corner: all corners sit at distance two, the triangle edges are
        // type I and pairwise incident.
        let g = parse_graph("a b\nb c\nc a\na a1\na1 a2\nb b1\nb1 b2\nc c1\nc1 c2").unwrap();
        assert_eq!(
            check_population_monotonic(&g),
            PmVerdict::NotPopulationMonotonic(Certificate::IncidentTypeIPair {
                first: 0,
                second: 2,
                shared: 0
            })
        );
        assert_eq!(build_pmas(&g).unwrap_err(), Error::NotPopulationMonotonic);
    }

    #[test]
    fn p5_scheme() {
        let g = path(5);
        let scheme = build_pmas(&g).unwrap();
        assert_eq!(
            scheme.payoff_vector(g.grand_coalition()),
            vec![r(1, 1), r(1, 2), r(1, 2), r(1, 1)]
        );
        let report = verify_scheme(&g, &scheme, VerificationMode::Exhaustive).unwrap();
        assert!(report.is_pmas(), "{report:?}");
        assert_eq!(report.coalitions_checked, 15);
        let lemmas = lemma_suite(&g, &scheme, VerificationMode::Exhaustive).unwrap();
        assert!(lemmas.is_clean(), "{lemmas:?}");
    }

    #[test]
    fn pendant_edges_are_paid_one() {
        let g = parse_graph("a b\nb c\nc d\nb e\nc f").unwrap();
        let scheme = build_pmas(&g).unwrap();
        let classes = g.classify_edges();
        for bits in 1u64..1 << g.edge_count() {
            let s = Coalition::from_bits(bits);
            for i in s.iter().filter(|&i| classes.class(i) == EdgeClass::Pendant) {
                assert_eq!(scheme.payoff(s, i), Rational::one());
            }
        }
    }

    #[test]
    fn k2_zero_scheme_is_inefficient() {
        let g = parse_graph("a b").unwrap();
        let scheme = FnScheme::new(1, |_, _| Rational::zero());
        let report = verify_scheme(&g, &scheme, VerificationMode::Exhaustive).unwrap();
        assert_eq!(
            report.efficiency_violations,
            vec![EfficiencyViolation {
                coalition: Coalition::singleton(0),
                sum: Rational::zero(),
                value: 1
            }]
        );
        assert!(report.monotonicity_violations.is_empty());
    }

    #[test]
    fn monotonicity_violation_is_reported() {
        // P3 paying edge 0 one in {0} but nothing in {0,1}: efficiency holds
        // only if edge 1 takes the whole grand value.
        let g = parse_graph("a b\nb c").unwrap();
        let scheme = FnScheme::new(2, |s: Coalition, i| {
            if s.len() == 2 {
                if i == 1 {
                    r(2, 1)
                } else {
                    r(0, 1)
                }
            } else {
                r(1, 1)
            }
        });
        let report = verify_scheme(&g, &scheme, VerificationMode::Exhaustive).unwrap();
        assert!(report.efficiency_violations.is_empty());
        assert_eq!(report.monotonicity_violations.len(), 1);
        let v = &report.monotonicity_violations[0];
        assert_eq!(
            (v.smaller, v.larger, v.edge),
            (Coalition::singleton(0), Coalition::from_bits(3), 0)
        );
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let g = path(6);
        let scheme = build_pmas(&g).unwrap();
        let mode = VerificationMode::Sampled { count: 10, seed: 7 };
        let a = verify_scheme(&g, &scheme, mode).unwrap();
        let b = verify_scheme(&g, &scheme, mode).unwrap();
        assert_eq!(a, b);
        assert!(a.is_pmas());
        assert!(a.coalitions_checked <= 10 && a.coalitions_checked > 0);
        assert_eq!(coalitions(5, mode).unwrap(), coalitions(5, mode).unwrap());
    }

    #[test]
    fn exhaustive_mode_size_limit() {
        let text: String = (0..21).map(|i| format!("u{i} w{i}\n")).collect();
        let g = parse_graph(&text).unwrap();
        let scheme = build_pmas(&g).unwrap();
        assert!(matches!(
            verify_scheme(&g, &scheme, VerificationMode::Exhaustive),
            Err(Error::SizeLimit { .. })
        ));
        let sampled = VerificationMode::Sampled { count: 50, seed: 1 };
        assert!(verify_scheme(&g, &scheme, sampled).unwrap().is_pmas());
    }

    #[test]
    fn tabulated_layout() {
        let offsets = coalition_offsets(3);
        assert_eq!(offsets, vec![0, 0, 1, 2, 4, 5, 7, 9, 12]);
        let mut t = TabulatedScheme::zeros(3);
        assert_eq!(t.values().len(), 12);
        t.set(Coalition::from_bits(0b110), 2, r(1, 3));
        assert_eq!(t.index(Coalition::from_bits(0b110), 2), 8);
        assert_eq!(t.payoff(Coalition::from_bits(0b110), 2), r(1, 3));
    }
}
