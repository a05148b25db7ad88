//! Exhaustive decision procedures for identities, distinguished subsets and
//! closure properties of a finite loop.
//!
//! Every check walks all tuples in lexicographic order, so a failing
//! [`Verdict`] carries the lexicographically first violating tuples (at most
//! [`MAX_WITNESSES`] of them).

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::LoopError;
use crate::subset::ElementSubset;
use crate::table::{Element, LoopTable};

pub const MAX_WITNESSES: usize = 3;

/// A tuple of elements exhibiting a violation. `relation` names which of
/// several conditions failed when a property has more than one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub elements: Vec<Element>,
    pub relation: Option<&'static str>,
}

impl Witness {
    pub fn new(elements: impl IntoIterator<Item = usize>) -> Self {
        Witness {
            elements: elements.into_iter().map(Element::new).collect(),
            relation: None,
        }
    }

    pub fn with_relation(mut self, relation: &'static str) -> Self {
        self.relation = Some(relation);
        self
    }

    pub fn indices(&self) -> Vec<usize> {
        self.elements.iter().map(|e| e.index()).collect()
    }
}

/// `(1, 2)`, or `mul(1, 2)` when a relation is named.
impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{}({})", self.relation.unwrap_or(""), parts.join(", "))
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.relation {
            None => s.collect_seq(self.indices()),
            Some(rel) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("relation", rel)?;
                m.serialize_entry("elements", &self.indices())?;
                m.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Vec<Witness>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witnesses(&self) -> &[Witness] {
        match self {
            Verdict::Holds => &[],
            Verdict::Fails(w) => w,
        }
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses().first()
    }

    fn from_violations(violations: impl Iterator<Item = Witness>) -> Verdict {
        let found: Vec<Witness> = violations.take(MAX_WITNESSES).collect();
        if found.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Fails(found)
        }
    }

    fn relabeled(self, relation: &'static str) -> Verdict {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(w.into_iter().map(|w| w.with_relation(relation)).collect()),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::Holds => s.serialize_str("holds"),
            Verdict::Fails(w) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("fails", w)?;
                m.end()
            }
        }
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

fn left_bol_at(l: &LoopTable, x: usize, y: usize, z: usize) -> bool {
    // x(y·xz) = (x·yx)z
    l.cell(x, l.cell(y, l.cell(x, z))) == l.cell(l.cell(x, l.cell(y, x)), z)
}

fn right_bol_at(l: &LoopTable, x: usize, y: usize, z: usize) -> bool {
    // (zx·y)x = z(xy·x)
    l.cell(l.cell(l.cell(z, x), y), x) == l.cell(z, l.cell(l.cell(x, y), x))
}

fn associative_at(l: &LoopTable, x: usize, y: usize, z: usize) -> bool {
    l.cell(l.cell(x, y), z) == l.cell(x, l.cell(y, z))
}

fn identity_verdict(l: &LoopTable, holds_at: fn(&LoopTable, usize, usize, usize) -> bool) -> Verdict {
    Verdict::from_violations(
        triples(l.order())
            .filter(|&(x, y, z)| !holds_at(l, x, y, z))
            .map(|(x, y, z)| Witness::new([x, y, z])),
    )
}

pub fn is_associative(l: &LoopTable) -> Verdict {
    identity_verdict(l, associative_at)
}

pub fn is_commutative(l: &LoopTable) -> Verdict {
    Verdict::from_violations(
        pairs(l.order())
            .filter(|&(x, y)| l.cell(x, y) != l.cell(y, x))
            .map(|(x, y)| Witness::new([x, y])),
    )
}

/// `x(y·xz) = (x·yx)z` for all `x, y, z`; witnesses are `(x, y, z)`.
pub fn is_left_bol(l: &LoopTable) -> Verdict {
    identity_verdict(l, left_bol_at)
}

/// `(zx·y)x = z(xy·x)` for all `x, y, z`; witnesses are `(x, y, z)`.
pub fn is_right_bol(l: &LoopTable) -> Verdict {
    identity_verdict(l, right_bol_at)
}

/// Both Bol identities. Witnesses are tagged with the identity that failed.
pub fn is_moufang(l: &LoopTable) -> Verdict {
    match is_left_bol(l) {
        Verdict::Holds => is_right_bol(l).relabeled("right-bol"),
        fails => fails.relabeled("left-bol"),
    }
}

/// Every element has a two-sided inverse; witnesses are single elements.
pub fn has_two_sided_inverses(l: &LoopTable) -> Verdict {
    Verdict::from_violations(
        l.elements()
            .filter(|&x| l.inverse(x).is_err())
            .map(|x| Witness::new([x.index()])),
    )
}

/// Left inverse property `x⁻¹·xy = x·x⁻¹y = y`. An element without a
/// two-sided inverse fails with a one-element `no-two-sided-inverse` witness.
pub fn has_lip(l: &LoopTable) -> Verdict {
    Verdict::from_violations(l.elements().flat_map(|x| {
        let inv = l.inverse(x);
        let witnesses: Vec<Witness> = match inv {
            Err(_) => vec![Witness::new([x.index()]).with_relation("no-two-sided-inverse")],
            Ok(xi) => l
                .elements()
                .filter(|&y| l.mul(xi, l.mul(x, y)) != y || l.mul(x, l.mul(xi, y)) != y)
                .map(|y| Witness::new([x.index(), y.index()]))
                .collect(),
        };
        witnesses
    }))
}

/// Left alternative property `x·xy = x²y`; witnesses are `(x, y)`.
pub fn has_lap(l: &LoopTable) -> Verdict {
    Verdict::from_violations(
        pairs(l.order())
            .filter(|&(x, y)| l.cell(x, l.cell(x, y)) != l.cell(l.cell(x, x), y))
            .map(|(x, y)| Witness::new([x, y])),
    )
}

/// Associativity violations inside `s`, as `(a, b, c)`.
fn associativity_violations<'a>(l: &'a LoopTable, s: &'a ElementSubset) -> impl Iterator<Item = [usize; 3]> + 'a {
    let members = s.indices();
    let m = members.clone();
    members.into_iter().flat_map(move |a| {
        let m2 = m.clone();
        m.clone().into_iter().flat_map(move |b| {
            m2.clone()
                .into_iter()
                .filter(move |&c| !associative_at(l, a, b, c))
                .map(move |c| [a, b, c])
        })
    })
}

/// Every single-generated subloop is associative. Witnesses are
/// `(x, a, b, c)` with `a, b, c ∈ ⟨x⟩` and `(ab)c ≠ a(bc)`.
pub fn is_power_associative(l: &LoopTable) -> Verdict {
    Verdict::from_violations(l.elements().flat_map(|x| {
        let generated = generated_subloop(l, &ElementSubset::from_elements(l.order(), [x]).unwrap());
        let first = associativity_violations(l, &generated).next();
        first.map(|[a, b, c]| Witness::new([x.index(), a, b, c]))
    }))
}

/// The squaring map is injective; witnesses are colliding pairs `a < b`.
pub fn is_uniquely_2_divisible(l: &LoopTable) -> Verdict {
    let n = l.order();
    Verdict::from_violations(
        pairs(n)
            .filter(|&(a, b)| a < b && l.cell(a, a) == l.cell(b, b))
            .map(|(a, b)| Witness::new([a, b])),
    )
}

/// `C(L) = { a : ax = xa for all x }`.
pub fn commutant(l: &LoopTable) -> ElementSubset {
    let n = l.order();
    ElementSubset::filter(l, |a| (0..n).all(|x| l.cell(a.index(), x) == l.cell(x, a.index())))
}

/// Commutant elements that associate with every pair in all three positions.
pub fn center(l: &LoopTable) -> ElementSubset {
    let n = l.order();
    let comm = commutant(l);
    ElementSubset::filter(l, |a| {
        let a = a.index();
        comm.contains(Element::new(a))
            && pairs(n).all(|(x, y)| {
                associative_at(l, a, x, y) && associative_at(l, x, a, y) && associative_at(l, x, y, a)
            })
    })
}

/// `B(L) = { a : a(x·ay) = (a·xa)y for all x, y }`.
pub fn bol_elements(l: &LoopTable) -> ElementSubset {
    let n = l.order();
    ElementSubset::filter(l, |a| pairs(n).all(|(x, y)| left_bol_at(l, a.index(), x, y)))
}

/// Least superset of `seed ∪ {1}` closed under product and both divisions.
pub fn generated_subloop(l: &LoopTable, seed: &ElementSubset) -> ElementSubset {
    let mut set = seed.clone();
    set.insert(l.identity());
    let mut members = set.members();
    let mut next = 0;
    while next < members.len() {
        let u = members[next];
        next += 1;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for w in [
                l.mul(u, v),
                l.mul(v, u),
                l.ldiv(u, v),
                l.ldiv(v, u),
                l.rdiv(u, v),
                l.rdiv(v, u),
            ] {
                if set.insert(w) {
                    members.push(w);
                }
            }
        }
    }
    set
}

/// `S` contains the identity and is closed under product and both divisions.
///
/// Witness relations: `identity` (`[1]`), `mul` (`a·b ∉ S`), `ldiv`
/// (`a\b ∉ S`), `rdiv` (`a/b ∉ S`).
pub fn is_subloop(l: &LoopTable, s: &ElementSubset) -> Verdict {
    if !s.contains(l.identity()) {
        return Verdict::Fails(vec![Witness::new([l.identity().index()]).with_relation("identity")]);
    }
    let members = s.members();
    Verdict::from_violations(members.iter().flat_map(|&a| {
        members.iter().flat_map(move |&b| {
            let mut out = Vec::new();
            if !s.contains(l.mul(a, b)) {
                out.push(Witness::new([a.index(), b.index()]).with_relation("mul"));
            }
            if !s.contains(l.ldiv(a, b)) {
                out.push(Witness::new([a.index(), b.index()]).with_relation("ldiv"));
            }
            if !s.contains(l.rdiv(a, b)) {
                out.push(Witness::new([a.index(), b.index()]).with_relation("rdiv"));
            }
            out
        })
    }))
}

fn left_coset(l: &LoopTable, x: Element, s: &ElementSubset) -> ElementSubset {
    ElementSubset::from_elements(l.order(), s.iter().map(|a| l.mul(x, a))).unwrap()
}

fn right_coset(l: &LoopTable, s: &ElementSubset, x: Element) -> ElementSubset {
    ElementSubset::from_elements(l.order(), s.iter().map(|a| l.mul(a, x))).unwrap()
}

/// Normality of a subloop: `xS = Sx`, `x(yS) = (xy)S` and `(Sx)y = S(xy)`.
///
/// Witness relations: `xS=Sx` (`[x]`), `x(yS)=(xy)S` and `(Sx)y=S(xy)`
/// (`[x, y]`).
pub fn is_normal(l: &LoopTable, s: &ElementSubset) -> Result<Verdict, LoopError> {
    if !is_subloop(l, s).holds() {
        return Err(LoopError::NotASubloop);
    }
    let cosets_left: Vec<ElementSubset> = l.elements().map(|x| left_coset(l, x, s)).collect();
    let cosets_right: Vec<ElementSubset> = l.elements().map(|x| right_coset(l, s, x)).collect();

    let commuting = l
        .elements()
        .filter(|x| cosets_left[x.index()] != cosets_right[x.index()])
        .map(|x| Witness::new([x.index()]).with_relation("xS=Sx"));
    let pair_failures = pairs(l.order()).flat_map(|(x, y)| {
        let (ex, ey) = (Element::new(x), Element::new(y));
        let xy = l.mul(ex, ey);
        let mut out = Vec::new();
        let x_ys = ElementSubset::from_elements(l.order(), cosets_left[y].iter().map(|b| l.mul(ex, b))).unwrap();
        if x_ys != cosets_left[xy.index()] {
            out.push(Witness::new([x, y]).with_relation("x(yS)=(xy)S"));
        }
        let sx_y = ElementSubset::from_elements(l.order(), cosets_right[x].iter().map(|b| l.mul(b, ey))).unwrap();
        if sx_y != cosets_right[xy.index()] {
            out.push(Witness::new([x, y]).with_relation("(Sx)y=S(xy)"));
        }
        out
    });
    Ok(Verdict::from_violations(commuting.chain(pair_failures)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareRoot {
    Unique(Element),
    None,
    NotUnique(Vec<Element>),
}

/// Solutions `c` of `c·c = a`.
pub fn square_root(l: &LoopTable, a: Element) -> SquareRoot {
    let roots: Vec<Element> = l.elements().filter(|&c| l.mul(c, c) == a).collect();
    match roots.len() {
        0 => SquareRoot::None,
        1 => SquareRoot::Unique(roots[0]),
        _ => SquareRoot::NotUnique(roots),
    }
}

/// Closure of a subset under inverses and the twisted product.
///
/// `x·yx` is read both as `x·(y·x)` (`right_nested`, the primary reading)
/// and as `(x·y)·x` (`left_nested`); the two readings agree only in flexible
/// loops, so both are reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedClosure {
    pub contains_identity: bool,
    /// For loops without two-sided inverses both one-sided inverses must lie
    /// in the subset.
    pub inverse_closed: Verdict,
    pub right_nested: Verdict,
    pub left_nested: Verdict,
}

impl TwistedClosure {
    pub fn holds(&self) -> bool {
        self.contains_identity && self.inverse_closed.holds() && self.right_nested.holds()
    }

    pub fn holds_left_nested(&self) -> bool {
        self.contains_identity && self.inverse_closed.holds() && self.left_nested.holds()
    }

    /// The primary reading as a single verdict.
    pub fn verdict(&self) -> Verdict {
        self.combined(&self.right_nested)
    }

    pub fn left_nested_verdict(&self) -> Verdict {
        self.combined(&self.left_nested)
    }

    fn combined(&self, twisted: &Verdict) -> Verdict {
        if !self.contains_identity {
            return Verdict::Fails(vec![Witness::new([0]).with_relation("identity")]);
        }
        if !self.inverse_closed.holds() {
            return self.inverse_closed.clone().relabeled("inverse");
        }
        twisted.clone().relabeled("twisted")
    }
}

pub fn is_twisted_closed(l: &LoopTable, s: &ElementSubset) -> TwistedClosure {
    let e = l.identity();
    let members = s.members();
    let inverse_closed = Verdict::from_violations(
        members
            .iter()
            .filter(|&&x| !s.contains(l.ldiv(x, e)) || !s.contains(l.rdiv(e, x)))
            .map(|x| Witness::new([x.index()])),
    );
    let twisted = |f: &dyn Fn(Element, Element) -> Element| {
        Verdict::from_violations(members.iter().flat_map(|&x| {
            members
                .iter()
                .filter(move |&&y| !s.contains(f(x, y)))
                .map(move |y| Witness::new([x.index(), y.index()]))
                .collect::<Vec<_>>()
        }))
    };
    TwistedClosure {
        contains_identity: s.contains(e),
        inverse_closed,
        right_nested: twisted(&|x, y| l.mul(x, l.mul(y, x))),
        left_nested: twisted(&|x, y| l.mul(l.mul(x, y), x)),
    }
}

/// Property names used in reports and accepted by [`recheck`].
pub mod names {
    pub const ASSOCIATIVE: &str = "associative";
    pub const COMMUTATIVE: &str = "commutative";
    pub const LEFT_BOL: &str = "left-bol";
    pub const RIGHT_BOL: &str = "right-bol";
    pub const MOUFANG: &str = "moufang";
    pub const LIP: &str = "lip";
    pub const LAP: &str = "lap";
    pub const TWO_SIDED_INVERSES: &str = "two-sided-inverses";
    pub const POWER_ASSOCIATIVE: &str = "power-associative";
    pub const UNIQUELY_2_DIVISIBLE: &str = "uniquely-2-divisible";
    pub const COMMUTANT_SUBLOOP: &str = "commutant-subloop";
    pub const COMMUTANT_TWISTED: &str = "commutant-twisted-closed";
    pub const COMMUTANT_TWISTED_LEFT: &str = "commutant-twisted-closed-left-nested";
    pub const CENTER_SUBLOOP: &str = "center-subloop";
    pub const CENTER_NORMAL: &str = "center-normal";
    pub const BOL_COMMUTANT_SUBLOOP: &str = "bol-commutant-subloop";
}

/// Structured outcome of every property check on one loop.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    #[serde(rename = "loop")]
    pub loop_id: String,
    pub order: usize,
    pub identity: usize,
    pub properties: BTreeMap<String, Verdict>,
    pub sets: BTreeMap<String, ElementSubset>,
    pub element_orders: Vec<usize>,
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn compute(loop_id: impl Into<String>, l: &LoopTable) -> Self {
        use names::*;
        let comm = commutant(l);
        let cent = center(l);
        let bol = bol_elements(l);
        let bol_comm = bol.intersection(&comm);
        let twisted = is_twisted_closed(l, &comm);
        let center_normal = is_normal(l, &cent).unwrap_or_else(|_| {
            Verdict::Fails(vec![Witness::new(cent.indices()).with_relation("not-a-subloop")])
        });

        let mut properties = BTreeMap::new();
        let mut put = |name: &str, v: Verdict| {
            properties.insert(name.to_string(), v);
        };
        put(ASSOCIATIVE, is_associative(l));
        put(COMMUTATIVE, is_commutative(l));
        put(LEFT_BOL, is_left_bol(l));
        put(RIGHT_BOL, is_right_bol(l));
        put(MOUFANG, is_moufang(l));
        put(LIP, has_lip(l));
        put(LAP, has_lap(l));
        put(TWO_SIDED_INVERSES, has_two_sided_inverses(l));
        let power_assoc = is_power_associative(l);
        let power_assoc_holds = power_assoc.holds();
        put(POWER_ASSOCIATIVE, power_assoc);
        put(UNIQUELY_2_DIVISIBLE, is_uniquely_2_divisible(l));
        put(COMMUTANT_SUBLOOP, is_subloop(l, &comm));
        put(COMMUTANT_TWISTED, twisted.verdict());
        put(COMMUTANT_TWISTED_LEFT, twisted.left_nested_verdict());
        put(CENTER_SUBLOOP, is_subloop(l, &cent));
        put(CENTER_NORMAL, center_normal);
        put(BOL_COMMUTANT_SUBLOOP, is_subloop(l, &bol_comm));

        let mut sets = BTreeMap::new();
        sets.insert("commutant".to_string(), comm);
        sets.insert("center".to_string(), cent);
        sets.insert("bol-elements".to_string(), bol);

        let mut notes = Vec::new();
        if !power_assoc_holds {
            notes.push("not power-associative: element orders are left-bracketed powers only".to_string());
        }

        PropertyReport {
            loop_id: loop_id.into(),
            order: l.order(),
            identity: l.identity().index(),
            properties,
            sets,
            element_orders: l.elements().map(|x| l.element_order(x)).collect(),
            notes,
        }
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.properties.get(name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Re-evaluates a witness against the table; `true` iff it really exhibits
/// a violation of the named property.
pub fn recheck(property: &str, l: &LoopTable, w: &Witness) -> bool {
    use names::*;
    let n = l.order();
    let idx = w.indices();
    if idx.iter().any(|&i| i >= n) {
        return false;
    }
    let el = |i: usize| Element::new(idx[i]);
    let comm = || commutant(l);
    match (property, idx.len(), w.relation) {
        (ASSOCIATIVE, 3, None) => !associative_at(l, idx[0], idx[1], idx[2]),
        (COMMUTATIVE, 2, None) => l.cell(idx[0], idx[1]) != l.cell(idx[1], idx[0]),
        (LEFT_BOL, 3, None) => !left_bol_at(l, idx[0], idx[1], idx[2]),
        (RIGHT_BOL, 3, None) => !right_bol_at(l, idx[0], idx[1], idx[2]),
        (MOUFANG, 3, Some("left-bol")) => !left_bol_at(l, idx[0], idx[1], idx[2]),
        (MOUFANG, 3, Some("right-bol")) => !right_bol_at(l, idx[0], idx[1], idx[2]),
        (TWO_SIDED_INVERSES, 1, None) | (LIP, 1, Some("no-two-sided-inverse")) => l.inverse(el(0)).is_err(),
        (LIP, 2, None) => match l.inverse(el(0)) {
            Err(_) => true,
            Ok(xi) => {
                let (x, y) = (el(0), el(1));
                l.mul(xi, l.mul(x, y)) != y || l.mul(x, l.mul(xi, y)) != y
            }
        },
        (LAP, 2, None) => l.cell(idx[0], l.cell(idx[0], idx[1])) != l.cell(l.cell(idx[0], idx[0]), idx[1]),
        (POWER_ASSOCIATIVE, 4, None) => {
            let generated = generated_subloop(l, &ElementSubset::from_elements(n, [el(0)]).unwrap());
            [1, 2, 3].iter().all(|&i| generated.contains(el(i))) && !associative_at(l, idx[1], idx[2], idx[3])
        }
        (UNIQUELY_2_DIVISIBLE, 2, None) => idx[0] != idx[1] && l.cell(idx[0], idx[0]) == l.cell(idx[1], idx[1]),
        (COMMUTANT_SUBLOOP, _, Some(rel)) => subloop_violation(l, &comm(), rel, &idx),
        (CENTER_SUBLOOP, _, Some(rel)) => subloop_violation(l, &center(l), rel, &idx),
        (BOL_COMMUTANT_SUBLOOP, _, Some(rel)) => {
            subloop_violation(l, &bol_elements(l).intersection(&comm()), rel, &idx)
        }
        (CENTER_NORMAL, _, Some("not-a-subloop")) => !is_subloop(l, &center(l)).holds(),
        (CENTER_NORMAL, _, Some(rel)) => normality_violation(l, &center(l), rel, &idx),
        (COMMUTANT_TWISTED, _, Some(rel)) => twisted_violation(l, &comm(), rel, &idx, true),
        (COMMUTANT_TWISTED_LEFT, _, Some(rel)) => twisted_violation(l, &comm(), rel, &idx, false),
        _ => false,
    }
}

pub(crate) fn subloop_violation(l: &LoopTable, s: &ElementSubset, relation: &str, idx: &[usize]) -> bool {
    let el = |i: usize| Element::new(idx[i]);
    match (relation, idx.len()) {
        ("identity", 1) => !s.contains(l.identity()),
        ("mul", 2) => s.contains(el(0)) && s.contains(el(1)) && !s.contains(l.mul(el(0), el(1))),
        ("ldiv", 2) => s.contains(el(0)) && s.contains(el(1)) && !s.contains(l.ldiv(el(0), el(1))),
        ("rdiv", 2) => s.contains(el(0)) && s.contains(el(1)) && !s.contains(l.rdiv(el(0), el(1))),
        _ => false,
    }
}

pub(crate) fn normality_violation(l: &LoopTable, s: &ElementSubset, relation: &str, idx: &[usize]) -> bool {
    let n = l.order();
    let image = |f: &dyn Fn(Element) -> Element| ElementSubset::from_elements(n, s.iter().map(f)).unwrap();
    match (relation, idx.len()) {
        ("xS=Sx", 1) => {
            let x = Element::new(idx[0]);
            image(&|a| l.mul(x, a)) != image(&|a| l.mul(a, x))
        }
        ("x(yS)=(xy)S", 2) => {
            let (x, y) = (Element::new(idx[0]), Element::new(idx[1]));
            image(&|a| l.mul(x, l.mul(y, a))) != image(&|a| l.mul(l.mul(x, y), a))
        }
        ("(Sx)y=S(xy)", 2) => {
            let (x, y) = (Element::new(idx[0]), Element::new(idx[1]));
            image(&|a| l.mul(l.mul(a, x), y)) != image(&|a| l.mul(a, l.mul(x, y)))
        }
        _ => false,
    }
}

fn twisted_violation(l: &LoopTable, s: &ElementSubset, relation: &str, idx: &[usize], right_nested: bool) -> bool {
    let e = l.identity();
    let el = |i: usize| Element::new(idx[i]);
    match (relation, idx.len()) {
        ("identity", 1) => !s.contains(e),
        ("inverse", 1) => s.contains(el(0)) && (!s.contains(l.ldiv(el(0), e)) || !s.contains(l.rdiv(e, el(0)))),
        ("twisted", 2) => {
            let (x, y) = (el(0), el(1));
            let t = if right_nested {
                l.mul(x, l.mul(y, x))
            } else {
                l.mul(l.mul(x, y), x)
            };
            s.contains(x) && s.contains(y) && !s.contains(t)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, klein_four, symmetric3};

    fn set(n: usize, items: &[usize]) -> ElementSubset {
        ElementSubset::from_indices(n, items.iter().copied()).unwrap()
    }

    #[test]
    fn groups_satisfy_every_identity() {
        for g in [cyclic(3), klein_four(), symmetric3()] {
            assert!(is_left_bol(&g).holds());
            assert!(is_right_bol(&g).holds());
            assert!(is_moufang(&g).holds());
            assert!(has_lip(&g).holds());
            assert!(has_lap(&g).holds());
            assert!(is_power_associative(&g).holds());
        }
    }

    #[test]
    fn commutant_and_center_examples() {
        assert_eq!(commutant(&cyclic(3)), ElementSubset::full(3));
        assert_eq!(center(&cyclic(3)), ElementSubset::full(3));
        assert_eq!(commutant(&symmetric3()).indices(), vec![0]);
        assert_eq!(center(&symmetric3()).indices(), vec![0]);
        assert_eq!(bol_elements(&cyclic(3)), ElementSubset::full(3));
    }

    #[test]
    fn generated_subloops() {
        let z6 = cyclic(6);
        assert_eq!(generated_subloop(&z6, &set(6, &[2])).indices(), vec![0, 2, 4]);
        assert_eq!(generated_subloop(&z6, &set(6, &[])).indices(), vec![0]);
        assert_eq!(generated_subloop(&cyclic(3), &set(3, &[1])).indices(), vec![0, 1, 2]);
    }

    #[test]
    fn subloop_and_normality() {
        let z6 = cyclic(6);
        assert!(is_subloop(&z6, &set(6, &[0, 2, 4])).holds());
        assert!(is_normal(&z6, &set(6, &[0, 2, 4])).unwrap().holds());
        assert!(is_normal(&z6, &set(6, &[0])).unwrap().holds());
        assert_eq!(is_normal(&z6, &set(6, &[0, 1])), Err(LoopError::NotASubloop));

        let v = is_subloop(&cyclic(3), &set(3, &[0, 1]));
        assert_eq!(v.first_witness(), Some(&Witness::new([0, 1]).with_relation("rdiv")));
        let no_identity = is_subloop(&cyclic(3), &set(3, &[1, 2]));
        assert_eq!(no_identity.first_witness().unwrap().relation, Some("identity"));
    }

    #[test]
    fn non_normal_subgroup_of_s3() {
        // {e, (0 1)} is a subgroup of S3 but not normal.
        let s3 = symmetric3();
        let h = set(6, &[0, 1]);
        assert!(is_subloop(&s3, &h).holds());
        let v = is_normal(&s3, &h).unwrap();
        assert!(!v.holds());
        assert_eq!(v.first_witness().unwrap().relation, Some("xS=Sx"));
    }

    #[test]
    fn two_divisibility_and_square_roots() {
        assert!(is_uniquely_2_divisible(&cyclic(3)).holds());
        let z4 = cyclic(4);
        assert_eq!(is_uniquely_2_divisible(&z4).first_witness(), Some(&Witness::new([0, 2])));
        let el = Element::new;
        assert_eq!(square_root(&cyclic(3), el(1)), SquareRoot::Unique(el(2)));
        assert_eq!(square_root(&z4, el(1)), SquareRoot::None);
        assert_eq!(square_root(&z4, el(0)), SquareRoot::NotUnique(vec![el(0), el(2)]));
    }

    #[test]
    fn twisted_closure() {
        let z3 = cyclic(3);
        let t = is_twisted_closed(&z3, &set(3, &[0, 1]));
        assert!(!t.holds());
        assert_eq!(t.inverse_closed.first_witness(), Some(&Witness::new([1])));
        assert!(is_twisted_closed(&cyclic(6), &set(6, &[0, 2, 4])).holds());
    }

    #[test]
    fn report_serializes_stably() {
        let r = PropertyReport::compute("z3", &cyclic(3));
        let json = r.to_json();
        assert!(json.contains("\"left-bol\": \"holds\""));
        assert!(json.contains("\"loop\": \"z3\""));
        assert_eq!(json, PropertyReport::compute("z3", &cyclic(3)).to_json());
        let r4 = PropertyReport::compute("z4", &cyclic(4));
        let s = serde_json::to_string(r4.verdict(names::UNIQUELY_2_DIVISIBLE).unwrap()).unwrap();
        assert_eq!(s, r#"{"fails":[[0,2],[1,3]]}"#);
    }

    #[test]
    fn recheck_rejects_non_violations() {
        let z3 = cyclic(3);
        assert!(!recheck(names::LEFT_BOL, &z3, &Witness::new([0, 1, 2])));
        assert!(!recheck(names::LEFT_BOL, &z3, &Witness::new([0, 1, 9])));
        assert!(recheck(names::UNIQUELY_2_DIVISIBLE, &cyclic(4), &Witness::new([0, 2])));
    }
}
