//! Canonical forms of loop tables under relabelings that send the identity
//! to 0.
//!
//! The canonical table is the row-major lexicographically least relabeled
//! table. Row 0 is always the identity row, so the comparison is decided
//! first by row 1, the left translation `L_a` of whichever element `a`
//! receives label 1. Conjugating `L_a` by a relabeling preserves its cycle
//! type, and the least row achievable for a given cycle type is fixed: the
//! orbit of the identity gets labels `0, 1, 2, ...` in order, followed by the
//! remaining cycles in ascending length, each labeled consecutively. Only
//! relabelings realizing that least row for the globally least cycle type
//! can produce the canonical table, which leaves a choice of order among
//! equal-length cycles and a starting point within each cycle.

use thiserror::Error;

use crate::table::LoopTable;

/// Largest order for which [`canonical_form`] is guaranteed exact.
pub const MAX_EXACT_ORDER: usize = 10;

/// Labeling budget used by [`approximate_canonical_form`].
pub const DEFAULT_LABELING_CAP: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("order {0} is above {MAX_EXACT_ORDER}; use approximate_canonical_form")]
    OrderTooLargeForExact(usize),
}

/// Cycles of the permutation `j ↦ perm[j]`, the one through 0 first, the
/// rest sorted by length (ties by smallest member).
pub(crate) fn cycles(perm: &[u8]) -> Vec<Vec<u8>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out: Vec<Vec<u8>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            cycle.push(j as u8);
            j = perm[j] as usize;
        }
        out.push(cycle);
    }
    if out.len() > 1 {
        out[1..].sort_by_key(|c| c.len());
    }
    out
}

/// The least row obtainable from a translation with the cycle type of
/// `perm`, written into `out`.
pub(crate) fn least_row_for_cycle_type(perm: &[u8], out: &mut Vec<u8>) {
    let mut lengths: Vec<usize> = Vec::new();
    let n = perm.len();
    let mut seen = [false; 256];
    let mut zero_cycle = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            len += 1;
            j = perm[j] as usize;
        }
        if start == 0 {
            zero_cycle = len;
        } else {
            lengths.push(len);
        }
    }
    lengths.sort_unstable();
    out.clear();
    let mut label = 0usize;
    for len in std::iter::once(zero_cycle).chain(lengths) {
        for i in 0..len {
            out.push(if i + 1 < len { label + i + 1 } else { label } as u8);
        }
        label += len;
    }
}

/// A canonical form together with whether it is guaranteed exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub table: LoopTable,
    pub exact: bool,
}

/// Exact canonical form; isomorphic loops (and only those) share it.
pub fn canonical_form(l: &LoopTable) -> Result<LoopTable, CanonError> {
    if l.order() > MAX_EXACT_ORDER {
        return Err(CanonError::OrderTooLargeForExact(l.order()));
    }
    Ok(canonical_form_bounded(l, u64::MAX).table)
}

/// Canonical form for any order. When more than
/// [`DEFAULT_LABELING_CAP`] candidate labelings exist the result is only
/// one-sided: equal forms still imply isomorphism, but isomorphic loops may
/// receive different forms (`exact == false`).
pub fn approximate_canonical_form(l: &LoopTable) -> CanonicalForm {
    canonical_form_bounded(l, DEFAULT_LABELING_CAP)
}

/// Searches at most `cap` labelings.
pub fn canonical_form_bounded(l: &LoopTable, cap: u64) -> CanonicalForm {
    let l = l.normalized();
    let n = l.order();
    if n <= 2 {
        return CanonicalForm { table: l, exact: true };
    }

    let mut best_row: Option<Vec<u8>> = None;
    let mut starts: Vec<usize> = Vec::new();
    let mut scratch = Vec::with_capacity(n);
    for a in 1..n {
        least_row_for_cycle_type(l.row(a), &mut scratch);
        match &best_row {
            Some(b) if scratch > *b => {}
            Some(b) if scratch == *b => starts.push(a),
            _ => {
                best_row = Some(scratch.clone());
                starts.clear();
                starts.push(a);
            }
        }
    }

    let mut search = LabelSearch {
        table: &l,
        best: None,
        visited: 0,
        cap,
        truncated: false,
        relabeled: vec![0u8; n * n],
    };
    for a in starts {
        let cyc = cycles(l.row(a));
        let mut perm = vec![u8::MAX; n];
        // the identity's orbit: 0 -> a -> a*a -> ...
        for (label, &x) in cyc[0].iter().enumerate() {
            perm[x as usize] = label as u8;
        }
        let mut used = vec![false; cyc.len()];
        search.assign(&cyc, &mut used, &mut perm, cyc[0].len());
        if search.truncated {
            break;
        }
    }
    let cells = search.best.expect("at least one labeling");
    let exact = !search.truncated;
    CanonicalForm {
        table: LoopTable::with_identity(n, cells, 0).expect("relabeled loop"),
        exact,
    }
}

struct LabelSearch<'a> {
    table: &'a LoopTable,
    best: Option<Vec<u8>>,
    visited: u64,
    cap: u64,
    truncated: bool,
    relabeled: Vec<u8>,
}

impl LabelSearch<'_> {
    fn assign(&mut self, cyc: &[Vec<u8>], used: &mut [bool], perm: &mut [u8], next_label: usize) {
        if self.truncated {
            return;
        }
        let n = self.table.order();
        if next_label == n {
            self.visited += 1;
            if self.visited > self.cap {
                self.truncated = true;
                return;
            }
            self.consider(perm);
            return;
        }
        // The slot starting at next_label takes the shortest unused cycle
        // length; any unused cycle of that length may fill it.
        let want = (1..cyc.len())
            .filter(|&i| !used[i])
            .map(|i| cyc[i].len())
            .min()
            .expect("labels remain, so cycles remain");
        for i in 1..cyc.len() {
            if used[i] || cyc[i].len() != want {
                continue;
            }
            used[i] = true;
            let c = &cyc[i];
            for rot in 0..c.len() {
                for k in 0..c.len() {
                    perm[c[(rot + k) % c.len()] as usize] = (next_label + k) as u8;
                }
                self.assign(cyc, used, perm, next_label + c.len());
            }
            used[i] = false;
        }
    }

    fn consider(&mut self, perm: &[u8]) {
        let n = self.table.order();
        let cells = self.table.cells();
        for i in 0..n {
            for j in 0..n {
                self.relabeled[perm[i] as usize * n + perm[j] as usize] = perm[cells[i * n + j] as usize];
            }
        }
        if self.best.as_ref().is_none_or(|b| self.relabeled < *b) {
            self.best = Some(self.relabeled.clone());
        }
    }
}
