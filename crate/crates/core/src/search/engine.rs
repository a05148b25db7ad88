use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::canon::{canonical_form, least_row_for_cycle_type};
use super::laws::Law;
use super::partial::PartialTable;
use super::{SearchError, SearchMode, SearchSpec, SearchStats, Target};
use crate::props;
use crate::table::LoopTable;

const FLUSH_EVERY: u64 = 1024;

pub(super) struct RunOutcome {
    pub representatives: BTreeSet<LoopTable>,
    pub found: Option<LoopTable>,
    pub stats: SearchStats,
    /// Every subtree that could affect the answer ran to completion.
    pub completed: bool,
}

struct Shared {
    nodes: AtomicU64,
    out_of_budget: AtomicBool,
    // lowest subtree index holding a find-first hit
    best_hit: AtomicUsize,
    started: Instant,
}

struct SubtreeOutcome {
    representatives: BTreeSet<LoopTable>,
    found: Option<LoopTable>,
    stats: SearchStats,
    aborted: bool,
}

pub(super) fn run(spec: &SearchSpec) -> Result<RunOutcome, SearchError> {
    let laws = spec.class.laws();
    let mut stats = SearchStats::default();
    let roots = roots(spec, &laws, &mut stats);
    let shared = Shared {
        nodes: AtomicU64::new(0),
        out_of_budget: AtomicBool::new(false),
        best_hit: AtomicUsize::new(usize::MAX),
        started: Instant::now(),
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| SearchError::InvalidSpec(format!("cannot start workers: {e}")))?;
    let outcomes: Vec<SubtreeOutcome> = pool.install(|| {
        roots
            .into_par_iter()
            .enumerate()
            .map(|(index, root)| Subtree::new(spec, &laws, &shared, index, root).search())
            .collect()
    });

    let mut representatives = BTreeSet::new();
    let mut found = None;
    let mut blocked = false;
    let completed = outcomes.iter().all(|o| !o.aborted);
    stats.subtrees = outcomes.len() as u64;
    for outcome in outcomes {
        stats.merge(&outcome.stats);
        representatives.extend(outcome.representatives);
        if found.is_none() && !blocked {
            if outcome.found.is_some() {
                found = outcome.found;
            } else if outcome.aborted {
                // a later hit is not necessarily the first one
                blocked = true;
            }
        }
    }
    Ok(RunOutcome {
        representatives,
        found,
        stats,
        completed,
    })
}

/// One partial table per admissible row 1, in ascending order of row 1.
fn roots(spec: &SearchSpec, laws: &[Law], stats: &mut SearchStats) -> Vec<PartialTable> {
    let n = spec.order;
    if n <= 2 {
        let mut t = PartialTable::new(n);
        if n == 2 {
            t.assign(1, 1, 0);
        }
        return vec![t];
    }
    if spec.isomorphism_pruning {
        let mut rows = least_rows_by_cycle_type(n);
        rows.sort();
        rows.into_iter()
            .filter_map(|row| {
                let mut t = PartialTable::new(n);
                for (c, &v) in row.iter().enumerate().skip(1) {
                    t.assign(1, c, v);
                    if laws.iter().any(|law| law.violated_through(&t, 1, c)) {
                        stats.identity_prunes += 1;
                        return None;
                    }
                }
                Some(t)
            })
            .collect()
    } else {
        let mut out = Vec::new();
        let mut t = PartialTable::new(n);
        fill_row_one(&mut t, laws, 1, &mut out, stats);
        out
    }
}

fn fill_row_one(t: &mut PartialTable, laws: &[Law], c: usize, out: &mut Vec<PartialTable>, stats: &mut SearchStats) {
    let n = t.order();
    if c == n {
        out.push(t.clone());
        return;
    }
    let mut cands = t.candidates(1, c);
    stats.latin_prunes += (n as u32 - cands.count_ones()) as u64;
    while cands != 0 {
        let v = cands.trailing_zeros() as u8;
        cands &= cands - 1;
        t.assign(1, c, v);
        if laws.iter().any(|law| law.violated_through(t, 1, c)) {
            stats.identity_prunes += 1;
        } else {
            fill_row_one(t, laws, c + 1, out, stats);
        }
        t.unassign(1, c);
    }
}

/// Least rows for every cycle type of a fixed-point-free permutation of
/// `0..n` (the identity's cycle listed first).
fn least_rows_by_cycle_type(n: usize) -> Vec<Vec<u8>> {
    fn partitions(rest: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        for part in min..=rest {
            acc.push(part);
            partitions(rest - part, part, acc, out);
            acc.pop();
        }
    }
    let mut rows = Vec::new();
    for zero_cycle in 2..=n {
        let mut rests = Vec::new();
        partitions(n - zero_cycle, 2, &mut Vec::new(), &mut rests);
        for rest in rests {
            // realize the type as a permutation, then take its least row
            let mut perm = vec![0u8; n];
            let mut start = 0;
            for len in std::iter::once(zero_cycle).chain(rest) {
                for i in 0..len {
                    perm[start + i] = (start + (i + 1) % len) as u8;
                }
                start += len;
            }
            let mut row = Vec::new();
            least_row_for_cycle_type(&perm, &mut row);
            rows.push(row);
        }
    }
    rows
}

struct Subtree<'a> {
    spec: &'a SearchSpec,
    laws: &'a [Law],
    shared: &'a Shared,
    index: usize,
    table: PartialTable,
    cells: Vec<(usize, usize)>,
    row_one: Vec<u8>,
    scratch: Vec<u8>,
    target: Option<Target>,
    representatives: BTreeSet<LoopTable>,
    found: Option<LoopTable>,
    stats: SearchStats,
    unflushed: u64,
    aborted: bool,
}

impl<'a> Subtree<'a> {
    fn new(spec: &'a SearchSpec, laws: &'a [Law], shared: &'a Shared, index: usize, table: PartialTable) -> Self {
        let n = spec.order;
        let first_open_row = if n <= 2 { n } else { 2 };
        let cells = (first_open_row..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect();
        let row_one = if n >= 2 { table.row(1).to_vec() } else { Vec::new() };
        Subtree {
            spec,
            laws,
            shared,
            index,
            table,
            cells,
            row_one,
            scratch: Vec::with_capacity(n),
            target: match spec.mode {
                SearchMode::FindFirst(t) => Some(t),
                SearchMode::EnumerateAll => None,
            },
            representatives: BTreeSet::new(),
            found: None,
            stats: SearchStats::default(),
            unflushed: 0,
            aborted: false,
        }
    }

    fn search(mut self) -> SubtreeOutcome {
        if !self.superseded() {
            self.descend(0);
        }
        // account for the tail without re-deciding whether we finished
        self.shared.nodes.fetch_add(self.unflushed, Ordering::Relaxed);
        SubtreeOutcome {
            representatives: self.representatives,
            found: self.found,
            stats: self.stats,
            aborted: self.aborted,
        }
    }

    /// A lower-indexed subtree already holds a find-first hit.
    fn superseded(&self) -> bool {
        self.shared.best_hit.load(Ordering::Relaxed) < self.index
    }

    fn stop(&self) -> bool {
        self.aborted || self.found.is_some()
    }

    fn flush(&mut self) {
        if self.unflushed == 0 {
            return;
        }
        let total = self.shared.nodes.fetch_add(self.unflushed, Ordering::Relaxed) + self.unflushed;
        self.unflushed = 0;
        if total > self.spec.limits.max_nodes || self.shared.started.elapsed() > self.spec.limits.max_wall {
            self.shared.out_of_budget.store(true, Ordering::Relaxed);
        }
        if self.shared.out_of_budget.load(Ordering::Relaxed) {
            self.aborted = true;
        }
        if self.superseded() {
            // the answer lies in an earlier subtree; this one is irrelevant
            self.aborted = true;
        }
    }

    fn descend(&mut self, k: usize) {
        if k == self.cells.len() {
            self.leaf();
            return;
        }
        let n = self.spec.order;
        let (r, c) = self.cells[k];
        let mut cands = self.table.candidates(r, c);
        self.stats.latin_prunes += (n as u32 - cands.count_ones()) as u64;
        while cands != 0 {
            let v = cands.trailing_zeros() as u8;
            cands &= cands - 1;

            self.stats.nodes += 1;
            self.unflushed += 1;
            if self.unflushed >= FLUSH_EVERY {
                self.flush();
                if self.aborted {
                    return;
                }
            }

            self.table.assign(r, c, v);
            if self.laws.iter().any(|law| law.violated_through(&self.table, r, c)) {
                self.stats.identity_prunes += 1;
            } else if c == n - 1 && self.spec.isomorphism_pruning && self.row_beats_row_one(r) {
                self.stats.isomorphism_prunes += 1;
            } else {
                self.descend(k + 1);
            }
            self.table.unassign(r, c);
            if self.stop() {
                return;
            }
        }
    }

    /// Would relabeling row `r` to label 1 give a smaller row 1?
    fn row_beats_row_one(&mut self, r: usize) -> bool {
        least_row_for_cycle_type(self.table.row(r), &mut self.scratch);
        self.scratch < self.row_one
    }

    fn leaf(&mut self) {
        self.stats.leaves += 1;
        let n = self.spec.order;
        if cfg!(debug_assertions) {
            for law in self.laws {
                debug_assert!(law.holds_everywhere(&self.table), "incremental check missed a violation");
            }
        }
        let l = LoopTable::with_identity(n, self.table.cells().to_vec(), 0).expect("search leaves are loops");
        if self.spec.exclude_associative && props::is_associative(&l).holds() {
            return;
        }
        match self.target {
            None => {
                let canon = canonical_form(&l).expect("search orders are exact");
                self.representatives.insert(canon);
            }
            Some(target) => {
                if target.evaluate(&l).is_some() {
                    self.found = Some(l);
                    self.shared.best_hit.fetch_min(self.index, Ordering::Relaxed);
                }
            }
        }
    }
}
