//! Partially filled Cayley tables with identity 0.

pub(crate) const UNSET: u8 = u8::MAX;

/// Row and column 0 are the identity; other cells start unset. Partial
/// inverses are kept so that `u·w = v` can be solved for either operand.
#[derive(Debug, Clone)]
pub(crate) struct PartialTable {
    n: usize,
    cells: Vec<u8>,
    // row_inv[u*n + v] = w with u·w = v
    row_inv: Vec<u8>,
    // col_inv[w*n + v] = u with u·w = v
    col_inv: Vec<u8>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
}

impl PartialTable {
    pub(crate) fn new(n: usize) -> Self {
        assert!((1..=64).contains(&n));
        let mut t = PartialTable {
            n,
            cells: vec![UNSET; n * n],
            row_inv: vec![UNSET; n * n],
            col_inv: vec![UNSET; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
        };
        for x in 0..n {
            t.assign(0, x, x as u8);
            if x != 0 {
                t.assign(x, 0, x as u8);
            }
        }
        t
    }

    #[inline]
    pub(crate) fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn get(&self, r: usize, c: usize) -> Option<u8> {
        let v = self.cells[r * self.n + c];
        (v != UNSET).then_some(v)
    }

    #[inline]
    pub(crate) fn solve_right(&self, u: usize, v: usize) -> Option<u8> {
        let w = self.row_inv[u * self.n + v];
        (w != UNSET).then_some(w)
    }

    #[inline]
    pub(crate) fn solve_left(&self, w: usize, v: usize) -> Option<u8> {
        let u = self.col_inv[w * self.n + v];
        (u != UNSET).then_some(u)
    }

    /// Values still allowed at `(r, c)` by the Latin property, as a bitmask.
    #[inline]
    pub(crate) fn candidates(&self, r: usize, c: usize) -> u64 {
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        all & !(self.row_used[r] | self.col_used[c])
    }

    pub(crate) fn assign(&mut self, r: usize, c: usize, v: u8) {
        let n = self.n;
        debug_assert_eq!(self.cells[r * n + c], UNSET);
        debug_assert!(self.candidates(r, c) & (1 << v) != 0);
        self.cells[r * n + c] = v;
        self.row_inv[r * n + v as usize] = c as u8;
        self.col_inv[c * n + v as usize] = r as u8;
        self.row_used[r] |= 1 << v;
        self.col_used[c] |= 1 << v;
    }

    pub(crate) fn unassign(&mut self, r: usize, c: usize) {
        let n = self.n;
        let v = self.cells[r * n + c];
        debug_assert_ne!(v, UNSET);
        self.cells[r * n + c] = UNSET;
        self.row_inv[r * n + v as usize] = UNSET;
        self.col_inv[c * n + v as usize] = UNSET;
        self.row_used[r] &= !(1 << v);
        self.col_used[c] &= !(1 << v);
    }

    pub(crate) fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub(crate) fn cells(&self) -> &[u8] {
        &self.cells
    }
}
