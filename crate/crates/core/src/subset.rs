use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::LoopError;
use crate::table::{Element, LoopTable, MAX_ORDER};

const WORDS: usize = MAX_ORDER.div_ceil(64);

/// A set of elements of a loop of fixed order, iterated in ascending order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSubset {
    order: usize,
    bits: [u64; WORDS],
}

impl ElementSubset {
    pub fn empty(order: usize) -> Self {
        ElementSubset {
            order,
            bits: [0; WORDS],
        }
    }

    pub fn full(order: usize) -> Self {
        let mut s = Self::empty(order);
        for i in 0..order {
            s.insert_index(i);
        }
        s
    }

    pub fn from_elements<I: IntoIterator<Item = Element>>(order: usize, items: I) -> Result<Self, LoopError> {
        let mut s = Self::empty(order);
        for x in items {
            if x.index() >= order {
                return Err(LoopError::IndexOutOfRange {
                    index: x.index(),
                    order,
                });
            }
            s.insert_index(x.index());
        }
        Ok(s)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(order: usize, items: I) -> Result<Self, LoopError> {
        let mut s = Self::empty(order);
        for i in items {
            if i >= order {
                return Err(LoopError::IndexOutOfRange { index: i, order });
            }
            s.insert_index(i);
        }
        Ok(s)
    }

    /// Members of `table` satisfying `pred`.
    pub fn filter(table: &LoopTable, mut pred: impl FnMut(Element) -> bool) -> Self {
        let mut s = Self::empty(table.order());
        for x in table.elements() {
            if pred(x) {
                s.insert(x);
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn insert(&mut self, x: Element) -> bool {
        assert!(x.index() < self.order);
        self.insert_index(x.index())
    }

    fn insert_index(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        self.bits[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn contains(&self, x: Element) -> bool {
        let i = x.index();
        i < self.order && self.bits[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(Element::new).filter(|&x| self.contains(x))
    }

    pub fn members(&self) -> Vec<Element> {
        self.iter().collect()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().map(Element::index).collect()
    }

    pub fn is_subset_of(&self, other: &ElementSubset) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElementSubset) -> ElementSubset {
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        out
    }

    pub fn union(&self, other: &ElementSubset) -> ElementSubset {
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        out
    }
}

impl fmt::Debug for ElementSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl fmt::Display for ElementSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for ElementSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.indices())
    }
}
