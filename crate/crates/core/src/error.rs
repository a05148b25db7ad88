use thiserror::Error;

/// Which side of the table a Latin-square violation was found on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row,
    Column,
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Line::Row => f.write_str("row"),
            Line::Column => f.write_str("column"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("malformed input at line {line}: {reason}")]
    MalformedInput { line: usize, reason: String },

    #[error("not a Latin square: {line} {index} repeats symbol {symbol}")]
    NotLatinSquare { line: Line, index: usize, symbol: usize },

    #[error("no two-sided neutral element")]
    NoIdentity,

    #[error("declared identity {0} is not a two-sided neutral element")]
    BadIdentityOverride(usize),

    #[error("order {0} exceeds the supported maximum of {max}", max = crate::MAX_ORDER)]
    OrderTooLarge(usize),

    #[error("element index {index} out of range for a loop of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("element {element} has no two-sided inverse (x*y=1 gives {right_inverse}, y*x=1 gives {left_inverse})")]
    NoTwoSidedInverse {
        element: usize,
        left_inverse: usize,
        right_inverse: usize,
    },

    #[error("subset is not a subloop")]
    NotASubloop,

    #[error("permutation is not a bijection on 0..{0}")]
    BadPermutation(usize),
}
