//! Claims about commutants of Bol loops, each checked on finite tables as
//! "hypothesis ⇒ conclusion".
//!
//! A claim whose hypothesis fails is reported as such rather than counted as
//! verified, so vacuous passes stay visible. Every claim here is a theorem;
//! a `Refuted` status therefore means a checker is wrong, and the corpus
//! runner turns it into a failing exit status.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::props::{self, SquareRoot, Verdict, Witness};
use crate::subset::ElementSubset;
use crate::table::{parse_loop, Element, LoopTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimId {
    Lemma1,
    Lemma2,
    Theorem1,
    Corollary,
    Remark1Ext,
    Remark2Ext,
    GlaubermanParity,
    MoufangCommutant,
    GroupCoincidence,
    CenterNormal,
}

impl ClaimId {
    pub const ALL: [ClaimId; 10] = [
        ClaimId::Lemma1,
        ClaimId::Lemma2,
        ClaimId::Theorem1,
        ClaimId::Corollary,
        ClaimId::Remark1Ext,
        ClaimId::Remark2Ext,
        ClaimId::GlaubermanParity,
        ClaimId::MoufangCommutant,
        ClaimId::GroupCoincidence,
        ClaimId::CenterNormal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::Lemma1 => "LEMMA1",
            ClaimId::Lemma2 => "LEMMA2",
            ClaimId::Theorem1 => "THEOREM1",
            ClaimId::Corollary => "COROLLARY",
            ClaimId::Remark1Ext => "REMARK1_EXT",
            ClaimId::Remark2Ext => "REMARK2_EXT",
            ClaimId::GlaubermanParity => "GLAUBERMAN_PARITY",
            ClaimId::MoufangCommutant => "MOUFANG_COMMUTANT",
            ClaimId::GroupCoincidence => "GROUP_COINCIDENCE",
            ClaimId::CenterNormal => "CENTER_NORMAL",
        }
    }

    pub fn parse(s: &str) -> Option<ClaimId> {
        let upper = s.trim().to_ascii_uppercase().replace('-', "_");
        ClaimId::ALL.into_iter().find(|c| c.name() == upper)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ClaimStatus {
    Verified,
    HypothesisNotMet { hypothesis: String },
    Refuted { witness: Witness, detail: String },
}

impl ClaimStatus {
    fn unmet(hypothesis: &str) -> Self {
        ClaimStatus::HypothesisNotMet {
            hypothesis: hypothesis.to_string(),
        }
    }

    fn refuted(witness: Witness, detail: impl Into<String>) -> Self {
        ClaimStatus::Refuted {
            witness,
            detail: detail.into(),
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, ClaimStatus::Verified)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, ClaimStatus::Refuted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimVerdict {
    pub claim: ClaimId,
    pub status: ClaimStatus,
    pub scope: String,
}

fn subloop_conclusion(l: &LoopTable, s: &ElementSubset, what: &str) -> ClaimStatus {
    match props::is_subloop(l, s) {
        Verdict::Holds => ClaimStatus::Verified,
        Verdict::Fails(w) => ClaimStatus::refuted(w[0].clone(), format!("{what} {s} is not a subloop")),
    }
}

fn left_bol(l: &LoopTable) -> bool {
    props::is_left_bol(l).holds()
}

/// In a left Bol loop, `a², b⁻¹, a²b ∈ C(L)` for all `a, b ∈ C(L)`.
pub fn check_lemma1(l: &LoopTable) -> ClaimStatus {
    if !left_bol(l) {
        return ClaimStatus::unmet("not left Bol");
    }
    let comm = props::commutant(l);
    for a in comm.iter() {
        for b in comm.iter() {
            let w = Witness::new([a.index(), b.index()]);
            let sq = l.mul(a, a);
            if !comm.contains(sq) {
                return ClaimStatus::refuted(w.with_relation("square"), format!("{a}² = {sq} is not in C(L)"));
            }
            match l.inverse(b) {
                Ok(bi) if comm.contains(bi) => {}
                Ok(bi) => {
                    return ClaimStatus::refuted(w.with_relation("inverse"), format!("{b}⁻¹ = {bi} is not in C(L)"))
                }
                Err(e) => return ClaimStatus::refuted(w.with_relation("inverse"), e.to_string()),
            }
            let sqb = l.mul(sq, b);
            if !comm.contains(sqb) {
                return ClaimStatus::refuted(
                    w.with_relation("square-times"),
                    format!("{a}²·{b} = {sqb} is not in C(L)"),
                );
            }
        }
    }
    ClaimStatus::Verified
}

/// In a left Bol loop, `⟨a⟩ ⊆ C(L)` for every `a ∈ C(L)`.
pub fn check_lemma2(l: &LoopTable) -> ClaimStatus {
    if !left_bol(l) {
        return ClaimStatus::unmet("not left Bol");
    }
    let comm = props::commutant(l);
    for a in comm.iter() {
        let generated = props::generated_subloop(l, &single(l, a));
        let outside = generated.iter().find(|&x| !comm.contains(x));
        if let Some(x) = outside {
            return ClaimStatus::refuted(
                Witness::new([a.index(), x.index()]),
                format!("{x} ∈ ⟨{a}⟩ is not in C(L)"),
            );
        }
    }
    ClaimStatus::Verified
}

fn single(l: &LoopTable, a: Element) -> ElementSubset {
    ElementSubset::from_elements(l.order(), [a]).expect("element of l")
}

/// In a left Bol loop whose commutant elements all have odd order, the
/// commutant is a subloop. The proof is re-enacted elementwise: each
/// `a ∈ C(L)` of order `k` has the unique square root `a^((k+1)/2)`, which
/// lies in `C(L)`.
pub fn check_theorem1(l: &LoopTable) -> ClaimStatus {
    if !left_bol(l) {
        return ClaimStatus::unmet("not left Bol");
    }
    let comm = props::commutant(l);
    if comm.iter().any(|a| l.element_order(a).is_multiple_of(2)) {
        return ClaimStatus::unmet("even-order commutant element");
    }
    for a in comm.iter() {
        if let Some(detail) = square_root_step_fails(l, &comm, a) {
            return ClaimStatus::refuted(Witness::new([a.index()]).with_relation("square-root"), detail);
        }
    }
    subloop_conclusion(l, &comm, "C(L) =")
}

/// `c = a^((k+1)/2)` must square to `a`, be the only square root of `a`
/// inside `⟨a⟩`, lie in `C(L)`, and be among the square roots of `a` in `L`
/// (the only one when `L` has unique square roots).
fn square_root_step_fails(l: &LoopTable, comm: &ElementSubset, a: Element) -> Option<String> {
    let half = (l.element_order(a) as i64 + 1) / 2;
    let c = l.power(a, half).expect("nonnegative power");
    if l.mul(c, c) != a {
        return Some(format!("{a}^{half} = {c} does not square to {a}"));
    }
    let generated = props::generated_subloop(l, &single(l, a));
    let local_roots = generated.iter().filter(|&x| l.mul(x, x) == a).count();
    if local_roots != 1 {
        return Some(format!("{a} has {local_roots} square roots in ⟨{a}⟩"));
    }
    if !comm.contains(c) {
        return Some(format!("square root {c} of {a} is not in C(L)"));
    }
    match props::square_root(l, a) {
        SquareRoot::Unique(r) if r == c => None,
        SquareRoot::Unique(r) => Some(format!("square root of {a} is {r}, not {a}^{half} = {c}")),
        SquareRoot::NotUnique(rs) if rs.contains(&c) => None,
        SquareRoot::NotUnique(_) | SquareRoot::None => Some(format!("{c} is missing from the square roots of {a}")),
    }
}

/// A finite left Bol loop of odd order has only odd-order elements and a
/// commutant that is a subloop; one of even order has an even-order element.
pub fn check_corollary(l: &LoopTable) -> ClaimStatus {
    if !left_bol(l) {
        return ClaimStatus::unmet("not left Bol");
    }
    if let Some(failure) = parity_failure(l) {
        return failure;
    }
    if l.order() % 2 == 1 {
        subloop_conclusion(l, &props::commutant(l), "C(L) =")
    } else {
        ClaimStatus::Verified
    }
}

/// For a finite left Bol loop: odd order ⇔ every element has odd order.
pub fn check_glauberman_parity(l: &LoopTable) -> ClaimStatus {
    if !left_bol(l) {
        return ClaimStatus::unmet("not left Bol");
    }
    parity_failure(l).unwrap_or(ClaimStatus::Verified)
}

fn parity_failure(l: &LoopTable) -> Option<ClaimStatus> {
    let even = l.elements().find(|&x| l.element_order(x).is_multiple_of(2));
    match (l.order() % 2 == 1, even) {
        (true, Some(x)) => Some(ClaimStatus::refuted(
            Witness::new([x.index()]).with_relation("even-order-element"),
            format!("odd-order loop has element {x} of order {}", l.element_order(x)),
        )),
        (false, None) => Some(ClaimStatus::refuted(
            Witness::new([l.identity().index()]).with_relation("no-even-order-element"),
            "even-order loop has no element of even order",
        )),
        _ => None,
    }
}

/// Left Bol loop whose commutant is twisted-closed (`x·(y·x)`) and of odd
/// cardinality ⇒ the commutant is a subloop.
///
/// "Odd order" of the commutant is read as odd cardinality of the set.
pub fn check_remark1_extension(l: &LoopTable) -> ClaimStatus {
    if !left_bol(l) {
        return ClaimStatus::unmet("not left Bol");
    }
    let comm = props::commutant(l);
    if !props::is_twisted_closed(l, &comm).holds() {
        return ClaimStatus::unmet("commutant not closed under inverses and x·(y·x)");
    }
    if comm.len().is_multiple_of(2) {
        return ClaimStatus::unmet("even commutant cardinality");
    }
    subloop_conclusion(l, &comm, "C(L) =")
}

/// Any loop: if every element of `B(L) ∩ C(L)` has odd order, that
/// intersection is a subloop.
pub fn check_remark2_extension(l: &LoopTable) -> ClaimStatus {
    let s = bol_commutant(l);
    if s.iter().any(|a| l.element_order(a).is_multiple_of(2)) {
        return ClaimStatus::unmet("even-order element in B(L)∩C(L)");
    }
    subloop_conclusion(l, &s, "B(L)∩C(L) =")
}

fn bol_commutant(l: &LoopTable) -> ElementSubset {
    props::bol_elements(l).intersection(&props::commutant(l))
}

/// The center is a normal subloop (every loop).
pub fn check_center_normal(l: &LoopTable) -> ClaimStatus {
    let z = props::center(l);
    if let Verdict::Fails(w) = props::is_subloop(l, &z) {
        return ClaimStatus::refuted(w[0].clone(), format!("center {z} is not a subloop"));
    }
    match props::is_normal(l, &z) {
        Ok(Verdict::Holds) => ClaimStatus::Verified,
        Ok(Verdict::Fails(w)) => ClaimStatus::refuted(w[0].clone(), format!("center {z} is not normal")),
        Err(e) => ClaimStatus::refuted(Witness::new(z.indices()), e.to_string()),
    }
}

/// In a group, commutant and center coincide.
pub fn check_group_coincidence(l: &LoopTable) -> ClaimStatus {
    if !props::is_associative(l).holds() {
        return ClaimStatus::unmet("not associative");
    }
    let (comm, z) = (props::commutant(l), props::center(l));
    match l.elements().find(|&x| comm.contains(x) != z.contains(x)) {
        None => ClaimStatus::Verified,
        Some(x) => ClaimStatus::refuted(
            Witness::new([x.index()]),
            format!("{x} lies in exactly one of C(L) = {comm} and Z(L) = {z}"),
        ),
    }
}

/// In a Moufang loop the commutant is a subloop.
pub fn check_moufang_commutant(l: &LoopTable) -> ClaimStatus {
    if !props::is_moufang(l).holds() {
        return ClaimStatus::unmet("not Moufang");
    }
    subloop_conclusion(l, &props::commutant(l), "C(L) =")
}

pub fn check_claim(claim: ClaimId, l: &LoopTable) -> ClaimStatus {
    match claim {
        ClaimId::Lemma1 => check_lemma1(l),
        ClaimId::Lemma2 => check_lemma2(l),
        ClaimId::Theorem1 => check_theorem1(l),
        ClaimId::Corollary => check_corollary(l),
        ClaimId::Remark1Ext => check_remark1_extension(l),
        ClaimId::Remark2Ext => check_remark2_extension(l),
        ClaimId::GlaubermanParity => check_glauberman_parity(l),
        ClaimId::MoufangCommutant => check_moufang_commutant(l),
        ClaimId::GroupCoincidence => check_group_coincidence(l),
        ClaimId::CenterNormal => check_center_normal(l),
    }
}

/// CENTER_NORMAL, GROUP_COINCIDENCE and MOUFANG_COMMUTANT.
pub fn check_static_claims(scope: &str, l: &LoopTable) -> Vec<ClaimVerdict> {
    [ClaimId::CenterNormal, ClaimId::GroupCoincidence, ClaimId::MoufangCommutant]
        .into_iter()
        .map(|claim| ClaimVerdict {
            claim,
            status: check_claim(claim, l),
            scope: scope.to_string(),
        })
        .collect()
}

/// Re-evaluates a refutation witness: `true` iff it exhibits a failure of
/// the claim's conclusion on `l`.
pub fn reconfirm(claim: ClaimId, l: &LoopTable, w: &Witness) -> bool {
    let idx = w.indices();
    if idx.iter().any(|&i| i >= l.order()) {
        return false;
    }
    let el = |i: usize| Element::new(idx[i]);
    let comm = || props::commutant(l);
    let rel = w.relation.unwrap_or("");
    let subloop = |s: &ElementSubset| props::subloop_violation(l, s, rel, &idx);
    match claim {
        ClaimId::Lemma1 if idx.len() == 2 => {
            let c = comm();
            let (a, b) = (el(0), el(1));
            if !c.contains(a) || !c.contains(b) {
                return false;
            }
            match rel {
                "square" => !c.contains(l.mul(a, a)),
                "inverse" => l.inverse(b).map_or(true, |bi| !c.contains(bi)),
                "square-times" => !c.contains(l.mul(l.mul(a, a), b)),
                _ => false,
            }
        }
        ClaimId::Lemma2 if idx.len() == 2 => {
            let c = comm();
            c.contains(el(0)) && props::generated_subloop(l, &single(l, el(0))).contains(el(1)) && !c.contains(el(1))
        }
        ClaimId::Theorem1 if rel == "square-root" && idx.len() == 1 => {
            let c = comm();
            c.contains(el(0)) && square_root_step_fails(l, &c, el(0)).is_some()
        }
        ClaimId::Corollary | ClaimId::GlaubermanParity if rel == "even-order-element" => {
            l.order() % 2 == 1 && l.element_order(el(0)).is_multiple_of(2)
        }
        ClaimId::Corollary | ClaimId::GlaubermanParity if rel == "no-even-order-element" => {
            l.order().is_multiple_of(2) && l.elements().all(|x| l.element_order(x) % 2 == 1)
        }
        ClaimId::Theorem1 | ClaimId::Corollary | ClaimId::Remark1Ext | ClaimId::MoufangCommutant => subloop(&comm()),
        ClaimId::Remark2Ext => subloop(&bol_commutant(l)),
        ClaimId::CenterNormal => {
            let z = props::center(l);
            subloop(&z) || props::normality_violation(l, &z, rel, &idx)
        }
        ClaimId::GroupCoincidence if idx.len() == 1 => comm().contains(el(0)) != props::center(l).contains(el(0)),
        _ => false,
    }
}

/// Decides claims for single loops. The corpus runner is generic over this
/// so that checkers can be substituted.
pub trait ClaimChecker: Sync {
    fn check(&self, claim: ClaimId, l: &LoopTable) -> ClaimStatus;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StandardChecker;

impl ClaimChecker for StandardChecker {
    fn check(&self, claim: ClaimId, l: &LoopTable) -> ClaimStatus {
        check_claim(claim, l)
    }
}

/// Every claim on one loop.
pub fn check_all(scope: &str, l: &LoopTable) -> Vec<ClaimVerdict> {
    ClaimId::ALL
        .into_iter()
        .map(|claim| ClaimVerdict {
            claim,
            status: check_claim(claim, l),
            scope: scope.to_string(),
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("manifest not found: {}", .0.display())]
    ManifestNotFound(PathBuf),
    #[error("cannot read manifest {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("manifest line {line}: bad annotation `{annotation}` (expected CLAIM=verified|hypothesis-not-met|refuted)")]
    BadAnnotation { line: usize, annotation: String },
}

/// Status a manifest entry is expected to receive for one claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    Verified,
    HypothesisNotMet,
    Refuted,
}

impl Expected {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "verified" => Some(Expected::Verified),
            "hypothesis-not-met" => Some(Expected::HypothesisNotMet),
            "refuted" => Some(Expected::Refuted),
            _ => None,
        }
    }

    fn matches(self, status: &ClaimStatus) -> bool {
        matches!(
            (self, status),
            (Expected::Verified, ClaimStatus::Verified)
                | (Expected::HypothesisNotMet, ClaimStatus::HypothesisNotMet { .. })
                | (Expected::Refuted, ClaimStatus::Refuted { .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub expected: BTreeMap<ClaimId, Expected>,
}

/// A list of loop files, one per line, each optionally followed by
/// `CLAIM=status` annotations; `#` starts a comment. Relative paths are
/// resolved against the manifest's directory.
///
/// ```text
/// # order-3 group
/// z3.loop  THEOREM1=verified MOUFANG_COMMUTANT=verified
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusManifest {
    pub base: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => HarnessError::ManifestNotFound(path.to_path_buf()),
            _ => HarnessError::Io {
                path: path.to_path_buf(),
                source: e,
            },
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, HarnessError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let mut words = line.split('#').next().unwrap_or("").split_whitespace();
            let Some(path) = words.next() else { continue };
            let mut expected = BTreeMap::new();
            for word in words {
                let bad = || HarnessError::BadAnnotation {
                    line: i + 1,
                    annotation: word.to_string(),
                };
                let (claim, status) = word.split_once('=').ok_or_else(bad)?;
                let claim = ClaimId::parse(claim).ok_or_else(bad)?;
                expected.insert(claim, Expected::parse(status).ok_or_else(bad)?);
            }
            entries.push(ManifestEntry {
                path: path.to_string(),
                expected,
            });
        }
        Ok(CorpusManifest {
            base: base.to_path_buf(),
            entries,
        })
    }

    pub fn resolve(&self, entry: &str) -> PathBuf {
        let p = Path::new(entry);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClaimCounts {
    pub verified: usize,
    pub hypothesis_not_met: usize,
    pub refuted: usize,
    pub parse_errors: usize,
}

impl ClaimCounts {
    fn add(&mut self, status: &ClaimStatus) {
        match status {
            ClaimStatus::Verified => self.verified += 1,
            ClaimStatus::HypothesisNotMet { .. } => self.hypothesis_not_met += 1,
            ClaimStatus::Refuted { .. } => self.refuted += 1,
        }
    }
}

/// Results keyed by loop id, then claim.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub loops: BTreeMap<String, BTreeMap<ClaimId, ClaimStatus>>,
    pub errors: BTreeMap<String, String>,
    pub counts: ClaimCounts,
    /// Annotated expectations that did not hold, as "loop: CLAIM expected x".
    pub mismatches: Vec<String>,
    pub notes: Vec<String>,
}

impl CorpusReport {
    pub fn has_refutations(&self) -> bool {
        self.counts.refuted > 0
    }

    /// 1 if any claim was refuted, else 0.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.has_refutations())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn insert(&mut self, id: String, statuses: BTreeMap<ClaimId, ClaimStatus>) {
        for s in statuses.values() {
            self.counts.add(s);
        }
        self.loops.insert(id, statuses);
    }
}

const REMARK1_NOTE: &str = "REMARK1_EXT reads the odd order of the commutant as odd cardinality and requires closure under inverses and x·(y·x)";

/// Checks `claims` on already-parsed loops.
pub fn run_loops(loops: &[(String, LoopTable)], claims: &[ClaimId], checker: &dyn ClaimChecker) -> CorpusReport {
    let results: Vec<(String, BTreeMap<ClaimId, ClaimStatus>)> = loops
        .par_iter()
        .map(|(id, l)| {
            let statuses = claims.iter().map(|&c| (c, checker.check(c, l))).collect();
            (id.clone(), statuses)
        })
        .collect();
    let mut report = CorpusReport::default();
    for (id, statuses) in results {
        report.insert(id, statuses);
    }
    if claims.contains(&ClaimId::Remark1Ext) && !loops.is_empty() {
        report.notes.push(REMARK1_NOTE.to_string());
    }
    report
}

/// Loads every manifest entry and checks `claims` on it. Unreadable or
/// invalid files are listed under `errors` and do not stop the run.
pub fn run_corpus(manifest: &CorpusManifest, claims: &[ClaimId], checker: &dyn ClaimChecker) -> CorpusReport {
    let mut loops = Vec::new();
    let mut errors = BTreeMap::new();
    for entry in &manifest.entries {
        let path = manifest.resolve(&entry.path);
        match std::fs::read_to_string(&path) {
            Err(e) => {
                errors.insert(entry.path.clone(), format!("cannot read {}: {e}", path.display()));
            }
            Ok(text) => match parse_loop(&text) {
                Ok(l) => loops.push((entry.path.clone(), l)),
                Err(e) => {
                    errors.insert(entry.path.clone(), format!("parse error: {e}"));
                }
            },
        }
    }
    let mut report = run_loops(&loops, claims, checker);
    report.counts.parse_errors = errors.len();
    report.errors = errors;
    for entry in &manifest.entries {
        let Some(statuses) = report.loops.get(&entry.path) else { continue };
        for (claim, expected) in &entry.expected {
            if let Some(status) = statuses.get(claim) {
                if !expected.matches(status) {
                    let expected = serde_json::to_value(expected).expect("serializes");
                    report
                        .mismatches
                        .push(format!("{}: {claim} expected {}", entry.path, expected.as_str().unwrap_or("?")));
                }
            }
        }
    }
    report
}
