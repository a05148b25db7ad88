//! Enumeration of small loops up to isomorphism and targeted searches for
//! loops with a given property.
//!
//! Tables are filled by backtracking, one cell at a time in row-major order
//! over rows `1..n` and columns `1..n` (row and column 0 are the identity).
//! After every assignment the class law is checked on exactly those
//! instances that became fully determined. Isomorphic copies are cut by
//! requiring row 1 to be the least row for its cycle type and no later row
//! to admit a smaller one; every complete table is then reduced to its
//! canonical form, so correctness never depends on the in-tree cuts.
//!
//! The tree is split into one subtree per admissible row 1. Subtrees are
//! searched independently and merged in subtree order, so results do not
//! depend on the number of workers.

mod bruck;
mod canon;
mod engine;
mod laws;
mod partial;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::props::{self, SquareRoot, Witness};
use crate::table::LoopTable;

pub use bruck::{construct_bruck_from_group, BruckError};
pub use canon::{
    approximate_canonical_form, canonical_form, canonical_form_bounded, CanonError, CanonicalForm,
    DEFAULT_LABELING_CAP, MAX_EXACT_ORDER,
};

/// Largest order the search accepts; leaves are deduplicated by exact
/// canonical form.
pub const MAX_SEARCH_ORDER: usize = MAX_EXACT_ORDER;

pub const DEFAULT_MAX_NODES: u64 = 100_000_000;
pub const DEFAULT_MAX_WALL: Duration = Duration::from_secs(600);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassConstraint {
    None,
    LeftBol,
    RightBol,
    Moufang,
    Associative,
}

impl ClassConstraint {
    pub fn name(self) -> &'static str {
        match self {
            ClassConstraint::None => "none",
            ClassConstraint::LeftBol => "left-bol",
            ClassConstraint::RightBol => "right-bol",
            ClassConstraint::Moufang => "moufang",
            ClassConstraint::Associative => "associative",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "none" => ClassConstraint::None,
            "left-bol" => ClassConstraint::LeftBol,
            "right-bol" => ClassConstraint::RightBol,
            "moufang" => ClassConstraint::Moufang,
            "associative" | "group" => ClassConstraint::Associative,
            _ => return None,
        })
    }

    /// Exhaustive check with the property checkers.
    pub fn holds(self, l: &LoopTable) -> bool {
        match self {
            ClassConstraint::None => true,
            ClassConstraint::LeftBol => props::is_left_bol(l).holds(),
            ClassConstraint::RightBol => props::is_right_bol(l).holds(),
            ClassConstraint::Moufang => props::is_moufang(l).holds(),
            ClassConstraint::Associative => props::is_associative(l).holds(),
        }
    }

    fn laws(self) -> Vec<laws::Law> {
        use laws::Law;
        match self {
            ClassConstraint::None => vec![],
            ClassConstraint::LeftBol => vec![Law::left_bol()],
            ClassConstraint::RightBol => vec![Law::right_bol()],
            ClassConstraint::Moufang => vec![Law::left_bol(), Law::right_bol()],
            ClassConstraint::Associative => vec![Law::associativity()],
        }
    }
}

/// Predicates a find-first search looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// The commutant is not closed under product or divisions.
    CommutantNotSubloop,
    /// Uniquely 2-divisible, with a commutant element whose unique square
    /// root lies outside the commutant.
    ConjectureWitness,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::CommutantNotSubloop => "commutant-not-subloop",
            Target::ConjectureWitness => "conjecture-witness",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "commutant-not-subloop" => Some(Target::CommutantNotSubloop),
            "conjecture-witness" => Some(Target::ConjectureWitness),
            _ => None,
        }
    }

    /// Violating tuples if `l` satisfies the target, `None` otherwise.
    pub fn evaluate(self, l: &LoopTable) -> Option<Vec<Witness>> {
        let comm = props::commutant(l);
        match self {
            Target::CommutantNotSubloop => match props::is_subloop(l, &comm) {
                props::Verdict::Holds => None,
                props::Verdict::Fails(w) => Some(w),
            },
            Target::ConjectureWitness => {
                if !props::is_uniquely_2_divisible(l).holds() {
                    return None;
                }
                let found: Vec<Witness> = comm
                    .iter()
                    .filter_map(|a| match props::square_root(l, a) {
                        SquareRoot::Unique(c) if !comm.contains(c) => {
                            Some(Witness::new([a.index(), c.index()]).with_relation("square-root-outside-commutant"))
                        }
                        _ => None,
                    })
                    .take(props::MAX_WITNESSES)
                    .collect();
                (!found.is_empty()).then_some(found)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    EnumerateAll,
    FindFirst(Target),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_nodes: u64,
    pub max_wall: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: DEFAULT_MAX_NODES,
            max_wall: DEFAULT_MAX_WALL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchSpec {
    pub order: usize,
    pub class: ClassConstraint,
    /// Drop associative loops (groups) from the results.
    pub exclude_associative: bool,
    pub mode: SearchMode,
    pub limits: Limits,
    pub workers: usize,
    /// Cut non-minimal partial tables inside the tree.
    pub isomorphism_pruning: bool,
}

impl SearchSpec {
    pub fn enumerate(order: usize, class: ClassConstraint) -> Self {
        SearchSpec {
            order,
            class,
            exclude_associative: false,
            mode: SearchMode::EnumerateAll,
            limits: Limits::default(),
            workers: 1,
            isomorphism_pruning: true,
        }
    }

    pub fn find(order: usize, class: ClassConstraint, target: Target) -> Self {
        SearchSpec {
            mode: SearchMode::FindFirst(target),
            ..Self::enumerate(order, class)
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn nonassociative(mut self) -> Self {
        self.exclude_associative = true;
        self
    }

    pub fn without_isomorphism_pruning(mut self) -> Self {
        self.isomorphism_pruning = false;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.order == 0 || self.order > MAX_SEARCH_ORDER {
            return Err(SearchError::InvalidSpec(format!(
                "order must be in 1..={MAX_SEARCH_ORDER}, got {}",
                self.order
            )));
        }
        if self.limits.max_nodes == 0 || self.limits.max_wall.is_zero() {
            return Err(SearchError::InvalidSpec("budgets must be positive".into()));
        }
        if self.workers == 0 {
            return Err(SearchError::InvalidSpec("worker count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub subtrees: u64,
    pub nodes: u64,
    pub leaves: u64,
    pub latin_prunes: u64,
    pub identity_prunes: u64,
    pub isomorphism_prunes: u64,
}

impl SearchStats {
    fn merge(&mut self, other: &SearchStats) {
        self.subtrees += other.subtrees;
        self.nodes += other.nodes;
        self.leaves += other.leaves;
        self.latin_prunes += other.latin_prunes;
        self.identity_prunes += other.identity_prunes;
        self.isomorphism_prunes += other.isomorphism_prunes;
    }
}

/// A loop satisfying a search target, in canonical form, with the tuples
/// that exhibit the target property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchWitness {
    pub table: LoopTable,
    pub tuples: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Canonical forms, pairwise non-isomorphic, in ascending order.
    pub representatives: Vec<LoopTable>,
    pub witnesses: Vec<SearchWitness>,
    pub stats: SearchStats,
    /// The whole tree was traversed within budget.
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error("search budget exhausted after {} nodes", partial.stats.nodes)]
    BudgetExhausted { partial: Box<SearchResult> },
    #[error("no loop satisfies the target (search exhausted after {} nodes)", stats.nodes)]
    NotFound { stats: SearchStats },
    #[error("representative failed re-verification: {0}")]
    VerificationFailed(String),
}

/// All isomorphism classes of loops of the given order satisfying the class
/// constraint.
pub fn enumerate(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    spec.validate()?;
    if spec.mode != SearchMode::EnumerateAll {
        return Err(SearchError::InvalidSpec("enumerate requires enumerate-all mode".into()));
    }
    let run = engine::run(spec)?;
    let mut representatives: Vec<LoopTable> = run.representatives.into_iter().collect();
    representatives.sort();
    for rep in &representatives {
        verify_representative(spec, rep)?;
    }
    let result = SearchResult {
        representatives,
        witnesses: Vec::new(),
        stats: run.stats,
        exhausted: run.completed,
    };
    if run.completed {
        Ok(result)
    } else {
        Err(SearchError::BudgetExhausted {
            partial: Box::new(result),
        })
    }
}

/// The first loop, in search order, satisfying the class constraint and
/// the target predicate.
pub fn find_first(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    spec.validate()?;
    let SearchMode::FindFirst(target) = spec.mode else {
        return Err(SearchError::InvalidSpec("find_first requires find-first mode".into()));
    };
    let run = engine::run(spec)?;
    match run.found {
        Some(leaf) => {
            let table = canonical_form(&leaf).expect("search orders are exact");
            verify_representative(spec, &table)?;
            let tuples = target.evaluate(&table).ok_or_else(|| {
                SearchError::VerificationFailed(format!(
                    "canonical form of the found loop does not satisfy {}",
                    target.name()
                ))
            })?;
            Ok(SearchResult {
                representatives: vec![table.clone()],
                witnesses: vec![SearchWitness { table, tuples }],
                stats: run.stats,
                exhausted: false,
            })
        }
        None if run.completed => Err(SearchError::NotFound { stats: run.stats }),
        None => Err(SearchError::BudgetExhausted {
            partial: Box::new(SearchResult {
                representatives: Vec::new(),
                witnesses: Vec::new(),
                stats: run.stats,
                exhausted: false,
            }),
        }),
    }
}

fn verify_representative(spec: &SearchSpec, l: &LoopTable) -> Result<(), SearchError> {
    if !spec.class.holds(l) {
        return Err(SearchError::VerificationFailed(format!(
            "loop violates {}:\n{}",
            spec.class.name(),
            l.to_text()
        )));
    }
    if spec.exclude_associative && props::is_associative(l).holds() {
        return Err(SearchError::VerificationFailed(format!(
            "associative loop passed the nonassociative filter:\n{}",
            l.to_text()
        )));
    }
    Ok(())
}
