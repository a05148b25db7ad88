use thiserror::Error;

use crate::props;
use crate::table::{Element, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruckError {
    #[error("input is not a group (associativity fails at {0:?})")]
    NotAGroup([usize; 3]),
    #[error("group order {0} is even")]
    EvenOrder(usize),
    #[error("constructed loop failed its post-construction check: {0}")]
    PostConstructionCheckFailed(String),
}

/// Builds the loop `x ∘ y = (x·y²·x)^(1/2)` on the carrier of an odd-order
/// group `G`.
///
/// Square roots are unique in a group of odd order `m`: `√g = g^((m+1)/2)`.
/// The result is checked to be a left Bol loop with two-sided inverses before
/// it is returned.
pub fn construct_bruck_from_group(group: &LoopTable) -> Result<LoopTable, BruckError> {
    if let Some(w) = props::is_associative(group).first_witness() {
        let i = w.indices();
        return Err(BruckError::NotAGroup([i[0], i[1], i[2]]));
    }
    let m = group.order();
    if m.is_multiple_of(2) {
        return Err(BruckError::EvenOrder(m));
    }
    let half = m.div_ceil(2) as i64;
    let sqrt = |g: Element| group.power(g, half).expect("nonnegative power");

    let mut cells = Vec::with_capacity(m * m);
    for x in group.elements() {
        for y in group.elements() {
            let yy = group.mul(y, y);
            let v = sqrt(group.mul(group.mul(x, yy), x));
            cells.push(v.index() as u8);
        }
    }
    let out = LoopTable::with_identity(m, cells, group.identity().index())
        .map_err(|e| BruckError::PostConstructionCheckFailed(e.to_string()))?;
    if let Some(w) = props::is_left_bol(&out).first_witness() {
        return Err(BruckError::PostConstructionCheckFailed(format!(
            "left Bol identity fails at {:?}",
            w.indices()
        )));
    }
    if let Some(w) = props::has_two_sided_inverses(&out).first_witness() {
        return Err(BruckError::PostConstructionCheckFailed(format!(
            "element {:?} has no two-sided inverse",
            w.indices()
        )));
    }
    Ok(out)
}
