//! Finite loops stored as Cayley tables.
//!
//! A [`LoopTable`] is validated once at construction: every row and column is
//! a permutation of `0..n` and there is a two-sided neutral element. After
//! that, products and both divisions are plain table lookups.
//!
//! Text format:
//!
//! ```text
//! # optional comments
//! identity=1        (optional override, validated)
//! 4
//! 1 0 3 2
//! 0 1 2 3
//! 3 2 1 0
//! 2 3 0 1
//! ```
//!
//! A CSV variant with `n` comma-separated rows and no size line is also read.

use std::fmt;
use std::str::FromStr;

use crate::error::{Line, LoopError};

/// Largest supported order; cells are stored as single bytes.
pub const MAX_ORDER: usize = 255;

/// An element index of some loop.
///
/// Elements do not carry a reference to their loop. Operations on a
/// [`LoopTable`] panic on out-of-range elements; the `try_` variants report
/// [`LoopError::IndexOutOfRange`] instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u8);

impl Element {
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_ORDER, "element index {index} exceeds MAX_ORDER");
        Element(index as u8)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Element> for usize {
    fn from(e: Element) -> usize {
        e.index()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LoopTable {
    order: usize,
    identity: u8,
    cells: Vec<u8>,
    // left_div[a*n + b] = x with a*x = b
    left_div: Vec<u8>,
    // right_div[a*n + b] = y with y*a = b
    right_div: Vec<u8>,
}

impl LoopTable {
    /// Builds a loop from a row-major table, detecting the identity.
    pub fn from_cells(order: usize, cells: Vec<u8>) -> Result<Self, LoopError> {
        Self::build(order, cells, None)
    }

    /// Builds a loop from rows, detecting the identity.
    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self, LoopError> {
        let order = rows.len();
        if order > MAX_ORDER {
            return Err(LoopError::OrderTooLarge(order));
        }
        let mut cells = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != order {
                return Err(LoopError::MalformedInput {
                    line: i + 1,
                    reason: format!("row {i} has {} cells, expected {order}", row.len()),
                });
            }
            for &v in row {
                if v >= order {
                    return Err(LoopError::MalformedInput {
                        line: i + 1,
                        reason: format!("symbol {v} out of range 0..{order}"),
                    });
                }
                cells.push(v as u8);
            }
        }
        Self::build(order, cells, None)
    }

    /// Builds a loop from a row-major table and an explicitly declared
    /// identity, which is validated.
    pub fn with_identity(order: usize, cells: Vec<u8>, identity: usize) -> Result<Self, LoopError> {
        Self::build(order, cells, Some(identity))
    }

    fn build(order: usize, cells: Vec<u8>, identity: Option<usize>) -> Result<Self, LoopError> {
        if order == 0 {
            return Err(LoopError::MalformedInput {
                line: 1,
                reason: "order must be positive".into(),
            });
        }
        if order > MAX_ORDER {
            return Err(LoopError::OrderTooLarge(order));
        }
        if cells.len() != order * order {
            return Err(LoopError::MalformedInput {
                line: 1,
                reason: format!("expected {} cells, found {}", order * order, cells.len()),
            });
        }
        if let Some(&v) = cells.iter().find(|&&v| v as usize >= order) {
            return Err(LoopError::MalformedInput {
                line: 1,
                reason: format!("symbol {v} out of range 0..{order}"),
            });
        }

        let n = order;
        let mut left_div = vec![u8::MAX; n * n];
        let mut right_div = vec![u8::MAX; n * n];
        for i in 0..n {
            for j in 0..n {
                let v = cells[i * n + j] as usize;
                if left_div[i * n + v] != u8::MAX {
                    return Err(LoopError::NotLatinSquare {
                        line: Line::Row,
                        index: i,
                        symbol: v,
                    });
                }
                left_div[i * n + v] = j as u8;
            }
        }
        for j in 0..n {
            for i in 0..n {
                let v = cells[i * n + j] as usize;
                if right_div[j * n + v] != u8::MAX {
                    return Err(LoopError::NotLatinSquare {
                        line: Line::Column,
                        index: j,
                        symbol: v,
                    });
                }
                right_div[j * n + v] = i as u8;
            }
        }

        let is_neutral = |e: usize| {
            (0..n).all(|x| cells[e * n + x] as usize == x && cells[x * n + e] as usize == x)
        };
        // A Latin square has at most one two-sided neutral element.
        let identity = match identity {
            Some(e) if e < n && is_neutral(e) => e,
            Some(e) => return Err(LoopError::BadIdentityOverride(e)),
            None => (0..n).find(|&e| is_neutral(e)).ok_or(LoopError::NoIdentity)?,
        };

        Ok(LoopTable {
            order,
            identity: identity as u8,
            cells,
            left_div,
            right_div,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Element {
        Element(self.identity)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.order).map(|i| Element(i as u8))
    }

    pub fn element(&self, index: usize) -> Result<Element, LoopError> {
        if index < self.order {
            Ok(Element(index as u8))
        } else {
            Err(LoopError::IndexOutOfRange {
                index,
                order: self.order,
            })
        }
    }

    /// Row-major cells.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.cells[i * self.order..(i + 1) * self.order]
    }

    /// Raw product on indices.
    #[inline]
    pub fn cell(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.order + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(self.cells[self.check(a) * self.order + self.check(b)])
    }

    /// The unique `x` with `a * x = b`.
    #[inline]
    pub fn ldiv(&self, a: Element, b: Element) -> Element {
        Element(self.left_div[self.check(a) * self.order + self.check(b)])
    }

    /// The unique `y` with `y * a = b`.
    #[inline]
    pub fn rdiv(&self, b: Element, a: Element) -> Element {
        Element(self.right_div[self.check(a) * self.order + self.check(b)])
    }

    pub fn try_mul(&self, a: Element, b: Element) -> Result<Element, LoopError> {
        self.in_range(a)?;
        self.in_range(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_ldiv(&self, a: Element, b: Element) -> Result<Element, LoopError> {
        self.in_range(a)?;
        self.in_range(b)?;
        Ok(self.ldiv(a, b))
    }

    pub fn try_rdiv(&self, b: Element, a: Element) -> Result<Element, LoopError> {
        self.in_range(a)?;
        self.in_range(b)?;
        Ok(self.rdiv(b, a))
    }

    /// Two-sided inverse, if the solutions of `x*y = 1` and `y*x = 1` agree.
    pub fn inverse(&self, x: Element) -> Result<Element, LoopError> {
        self.in_range(x)?;
        let e = self.identity();
        let right = self.ldiv(x, e);
        let left = self.rdiv(e, x);
        if left == right {
            Ok(left)
        } else {
            Err(LoopError::NoTwoSidedInverse {
                element: x.index(),
                left_inverse: left.index(),
                right_inverse: right.index(),
            })
        }
    }

    /// Left-bracketed power: `x^0 = 1`, `x^(k+1) = x * x^k`,
    /// `x^(-k-1) = x^-1 * x^(-k)`.
    ///
    /// `x^k` is the image of the identity under the k-th iterate of the left
    /// translation by `x` (or by `x^-1`), so `k` is reduced modulo the length
    /// of that orbit.
    pub fn power(&self, x: Element, exponent: i64) -> Result<Element, LoopError> {
        self.in_range(x)?;
        let base = if exponent < 0 { self.inverse(x)? } else { x };
        let period = self.element_order(base) as u64;
        let steps = exponent.unsigned_abs() % period;
        let mut acc = self.identity();
        for _ in 0..steps {
            acc = self.mul(base, acc);
        }
        Ok(acc)
    }

    /// Least `k >= 1` with `x^k = 1` under left-bracketed powers.
    pub fn element_order(&self, x: Element) -> usize {
        let e = self.identity();
        let mut acc = self.mul(x, e);
        let mut k = 1;
        while acc != e {
            acc = self.mul(x, acc);
            k += 1;
        }
        k
    }

    /// The opposite loop `a ∘ b = b * a`.
    pub fn transpose(&self) -> LoopTable {
        let n = self.order;
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[j * n + i] = self.cells[i * n + j];
            }
        }
        LoopTable::with_identity(n, cells, self.identity as usize)
            .expect("transpose of a loop is a loop")
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<LoopTable, LoopError> {
        let n = self.order;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(LoopError::BadPermutation(n));
        }
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(LoopError::BadPermutation(n));
            }
        }
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[perm[i] * n + perm[j]] = perm[self.cells[i * n + j] as usize] as u8;
            }
        }
        Ok(LoopTable::with_identity(n, cells, perm[self.identity as usize])
            .expect("relabeling preserves the loop axioms"))
    }

    /// Swaps the identity with element 0 so the identity is element 0.
    pub fn normalized(&self) -> LoopTable {
        let e = self.identity as usize;
        if e == 0 {
            return self.clone();
        }
        let mut perm: Vec<usize> = (0..self.order).collect();
        perm.swap(0, e);
        self.relabel(&perm).expect("transposition is a permutation")
    }

    /// Canonical text form; the inverse of [`parse_loop`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.identity != 0 {
            out.push_str(&format!("identity={}\n", self.identity));
        }
        out.push_str(&format!("{}\n", self.order));
        for i in 0..self.order {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    #[inline]
    fn check(&self, x: Element) -> usize {
        assert!(x.index() < self.order, "element {x} out of range");
        x.index()
    }

    fn in_range(&self, x: Element) -> Result<(), LoopError> {
        self.element(x.index()).map(|_| ())
    }
}

impl fmt::Display for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for LoopTable {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_loop(s)
    }
}

/// Parses the canonical table text (or its CSV variant).
pub fn parse_loop(text: &str) -> Result<LoopTable, LoopError> {
    let mut identity: Option<usize> = None;
    let mut data: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("identity=") {
            let k = rest.trim().parse().map_err(|_| LoopError::MalformedInput {
                line: i + 1,
                reason: format!("bad identity header {line:?}"),
            })?;
            identity = Some(k);
            continue;
        }
        data.push((i + 1, line));
    }
    let Some(&(first_line, first)) = data.first() else {
        return Err(LoopError::MalformedInput {
            line: 1,
            reason: "no table data".into(),
        });
    };

    let csv = first.contains(',');
    let (order, rows) = if csv {
        (data.len(), &data[..])
    } else {
        let order: usize = first.parse().map_err(|_| LoopError::MalformedInput {
            line: first_line,
            reason: format!("expected the order, found {first:?}"),
        })?;
        (order, &data[1..])
    };
    if order == 0 {
        return Err(LoopError::MalformedInput {
            line: first_line,
            reason: "order must be positive".into(),
        });
    }
    if order > MAX_ORDER {
        return Err(LoopError::OrderTooLarge(order));
    }
    if rows.len() != order {
        let line = rows.get(order).map_or(first_line, |r| r.0);
        return Err(LoopError::MalformedInput {
            line,
            reason: format!("expected {order} rows, found {}", rows.len()),
        });
    }

    let mut cells = Vec::with_capacity(order * order);
    for &(line_no, line) in rows {
        let fields: Vec<&str> = if csv {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != order {
            return Err(LoopError::MalformedInput {
                line: line_no,
                reason: format!("expected {order} cells, found {}", fields.len()),
            });
        }
        for field in fields {
            let v: usize = field.parse().map_err(|_| LoopError::MalformedInput {
                line: line_no,
                reason: format!("non-integer cell {field:?}"),
            })?;
            if v >= order {
                return Err(LoopError::MalformedInput {
                    line: line_no,
                    reason: format!("symbol {v} out of range 0..{order}"),
                });
            }
            cells.push(v as u8);
        }
    }
    LoopTable::build(order, cells, identity)
}

/// Serializes a loop to the canonical text format.
pub fn serialize_loop(table: &LoopTable) -> String {
    table.to_text()
}
