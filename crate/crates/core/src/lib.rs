//! Finite loop theory on Cayley tables.
//!
//! - [`table`]: loops as validated tables, with products, divisions,
//!   inverses, powers and the text format.
//! - [`props`]: exhaustive checks of identities (Bol, Moufang, LIP, LAP, ...)
//!   and distinguished subsets (commutant, center, Bol elements).
//! - [`harness`]: claims about commutants of Bol loops as executable checks
//!   over single loops and corpora.
//! - [`search`]: enumeration up to isomorphism and targeted counterexample
//!   searches.

pub mod error;
pub mod groups;
pub mod harness;
pub mod props;
pub mod search;
pub mod subset;
pub mod table;

pub use error::LoopError;
pub use subset::ElementSubset;
pub use table::{parse_loop, serialize_loop, Element, LoopTable, MAX_ORDER};
