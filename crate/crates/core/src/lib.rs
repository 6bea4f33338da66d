//! Population monotonicity of independent set games.
//!
//! The players of an independent set game are the edges of a graph `G`; a
//! coalition `S` is worth the independence number of the subgraph induced
//! by the vertices all of whose edges lie in `S`. This crate decides from
//! the structure of `G` whether the game admits a population monotonic
//! allocation scheme (PMAS), builds one explicitly when it does, and
//! cross-checks both answers against brute-force and exact linear
//! programming oracles.
//!
//! - [`graph`]: parsing and structural primitives.
//! - [`mis`]: exact maximum independent sets.
//! - [`game`]: characteristic function, convexity, core membership.
//! - [`pmas`]: structural verdict, explicit scheme, scheme verifier.
//! - [`lp`]: exact PMAS feasibility for small games.
//! - [`enumerate`]: isomorphism-free graph enumeration and the agreement
//!   experiment.
//! - [`cli`]: the `isgame` command-line front end.

pub mod cli;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod lp;
pub mod mis;
pub mod par;
pub mod pmas;

/// Exact rational numbers used for every payoff.
pub type Rational = num_rational::BigRational;

pub use error::{Error, ParseError, Result};
pub use game::{core_check, gamma, is_convex_brute, is_convex_structural, CoreOutcome, GameTable};
pub use graph::{
    parse_graph, Coalition, Distance, EdgeClass, EdgeClassification, Graph, VertexSet,
};
pub use lp::{pmas_feasible, Feasibility, PmasLp};
pub use mis::{covered_by_every_mis, max_independent_set, uncovered_by_some_mis, MisResult};
pub use par::Strategy;
pub use pmas::{
    build_pmas, check_population_monotonic, lemma_suite, verify_scheme, AllocationScheme,
    Certificate, LemmaReport, MechanismScheme, PmVerdict, VerificationMode, VerificationReport,
};
