//! Mechanical checks of the segment identities on a single orbit.
//!
//! Each check yields a [`ClaimResult`]. Conditional statements report
//! [`ClaimStatus::HypothesisNotMet`] when their hypothesis is absent, and a
//! failing check always names the offending segments with exact lengths.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::billiard::{simulate, LaunchSpec, Orbit, SimError};
use crate::profile::{Analysis, WeightProfile};
use crate::segments::{
    is_associated, is_elementary, short_segment, AnalysisError, AnchorSet, AssociatedFamily, CircularOrder, Parity,
    Segment,
};
use crate::wire::{AnalysisDoc, LaunchDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClaimId {
    FiveValues,
    SumCounts,
    EqualLengths,
    CountIdentity,
    #[serde(rename = "Thm22_A1")]
    Thm22A1,
    #[serde(rename = "Thm22_A4")]
    Thm22A4,
    Lemma21,
    Remark21,
    Thm21Parity,
    CorParity,
    CorCardinality,
}

impl ClaimId {
    /// Every claim, in report order.
    pub const ALL: [ClaimId; 11] = [
        ClaimId::FiveValues,
        ClaimId::SumCounts,
        ClaimId::EqualLengths,
        ClaimId::CountIdentity,
        ClaimId::Thm22A1,
        ClaimId::Thm22A4,
        ClaimId::Lemma21,
        ClaimId::Remark21,
        ClaimId::Thm21Parity,
        ClaimId::CorParity,
        ClaimId::CorCardinality,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::FiveValues => "FiveValues",
            ClaimId::SumCounts => "SumCounts",
            ClaimId::EqualLengths => "EqualLengths",
            ClaimId::CountIdentity => "CountIdentity",
            ClaimId::Thm22A1 => "Thm22_A1",
            ClaimId::Thm22A4 => "Thm22_A4",
            ClaimId::Lemma21 => "Lemma21",
            ClaimId::Remark21 => "Remark21",
            ClaimId::Thm21Parity => "Thm21Parity",
            ClaimId::CorParity => "CorParity",
            ClaimId::CorCardinality => "CorCardinality",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    HypothesisNotMet,
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: ClaimId,
    pub status: ClaimStatus,
    pub detail: String,
}

impl ClaimResult {
    fn new(id: ClaimId, status: ClaimStatus, detail: impl Into<String>) -> Self {
        ClaimResult { id, status, detail: detail.into() }
    }

    fn pass_if(id: ClaimId, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(id, if ok { ClaimStatus::Pass } else { ClaimStatus::Fail }, detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub spec: LaunchDoc,
    pub profile: Option<AnalysisDoc>,
    pub claims: Vec<ClaimResult>,
    pub overall: bool,
    /// Circular neighbours of `F(1)`: predecessor, successor.
    pub f1_neighbors: [usize; 2],
    /// Circular neighbours of `F(n)`: predecessor, successor.
    pub fn_neighbors: [usize; 2],
}

impl VerificationReport {
    pub fn claim(&self, id: ClaimId) -> &ClaimResult {
        self.claims.iter().find(|c| c.id == id).expect("report holds every claim")
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.claims.iter().filter(|c| c.status == ClaimStatus::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// `v / 2`, printed as an integer when exact.
fn half(v: i64) -> String {
    if v % 2 == 0 {
        (v / 2).to_string()
    } else {
        format!("{v}/2")
    }
}

fn analysis(orbit: &Orbit) -> Analysis {
    Analysis::new(orbit).expect("verification requires at least five points")
}

pub(crate) fn check_five_values(elementary: &[Segment], profile: &WeightProfile) -> ClaimResult {
    let id = ClaimId::FiveValues;
    if let Some(bad) = elementary.iter().find(|s| profile.class_of(s.weight().value).is_none()) {
        return ClaimResult::new(
            id,
            ClaimStatus::Fail,
            format!("elementary segment {bad} has a weight outside {{{}}}", join(profile.omega, ", ")),
        );
    }
    let mut seen: Vec<usize> = elementary.iter().map(|s| s.weight().value).collect();
    seen.sort_unstable();
    seen.dedup();
    ClaimResult::new(
        id,
        ClaimStatus::Pass,
        format!("elementary weights {{{}}} within {{{}}}", join(seen, ", "), join(profile.omega, ", ")),
    )
}

pub(crate) fn check_sum_counts(n: usize, profile: &WeightProfile) -> ClaimResult {
    let total: usize = profile.counts.iter().sum();
    ClaimResult::pass_if(ClaimId::SumCounts, total == n, format!("{} = {total}, n = {n}", join(profile.counts, "+")))
}

pub(crate) fn check_equal_lengths(elementary: &[Segment]) -> ClaimResult {
    let id = ClaimId::EqualLengths;
    let mut by_weight: BTreeMap<usize, &Segment> = BTreeMap::new();
    for seg in elementary {
        let w = seg.weight().value;
        match by_weight.get(&w) {
            Some(first) if first.length != seg.length => {
                return ClaimResult::new(
                    id,
                    ClaimStatus::Fail,
                    format!("weight {w}: {first} and {seg} differ in length"),
                );
            }
            Some(_) => {}
            None => {
                by_weight.insert(w, seg);
            }
        }
    }
    ClaimResult::new(
        id,
        ClaimStatus::Pass,
        format!(
            "{} weight classes: {}",
            by_weight.len(),
            join(by_weight.iter().map(|(w, s)| format!("w{w}={}", s.length)), ", ")
        ),
    )
}

pub(crate) fn check_count_identity(profile: &WeightProfile) -> ClaimResult {
    let id = ClaimId::CountIdentity;
    let (Some(eps), Some(delta)) = (profile.epsilon, profile.delta) else {
        let missing = match (profile.epsilon, profile.delta) {
            (None, None) => "neither epsilon nor delta",
            (None, _) => "no epsilon",
            _ => "no delta",
        };
        return ClaimResult::new(
            id,
            ClaimStatus::HypothesisNotMet,
            format!("{missing} satisfies a2 -/+ a1 = a0, a3 -/+ a4 = a0 (a = {})", join(&profile.a, ", ")),
        );
    };
    let c = profile.counts.map(|x| x as i64);
    let left = c[2] + eps as i64 * c[1];
    let right = c[3] + delta as i64 * c[4];
    let target = profile.omega[0] as i64 / 2;
    let even = profile.omega[0].is_multiple_of(2);
    ClaimResult::pass_if(
        id,
        even && left == target && right == target,
        format!(
            "eps={eps}, delta={delta}: |A2|+eps|A1|={left}, |A3|+delta|A4|={right}, w0/2={}",
            half(profile.omega[0] as i64)
        ),
    )
}

pub(crate) fn check_thm22(n: usize, profile: &WeightProfile) -> [ClaimResult; 2] {
    let [_, w1, _, _, w4] = profile.omega.map(|w| w as i64);
    let [_, a1, _, _, a4] = profile.counts.map(|c| c as i64);
    let first = ClaimResult::pass_if(
        ClaimId::Thm22A1,
        w1 % 2 == 1 && a1 == (w1 - 1) / 2,
        format!("|A1|={a1}, (w1-1)/2={}", half(w1 - 1)),
    );
    let n = n as i64;
    let second = ClaimResult::pass_if(
        ClaimId::Thm22A4,
        w4 % 2 == 1 && a4 == n - (w4 - 1) / 2,
        format!("|A4|={a4}, n-(w4-1)/2={}", half(2 * n - w4 + 1)),
    );
    [first, second]
}

pub(crate) fn check_lemma21(order: &CircularOrder) -> ClaimResult {
    let id = ClaimId::Lemma21;
    let n = order.len();
    let (mut checked, mut skipped) = (0usize, 0usize);
    let mut first_skip = None;
    for k in 1..=n {
        for l in (k + 3..=n).step_by(2) {
            let (outer, inner) = match (short_segment(k, l, order), short_segment(k + 1, l - 1, order)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    skipped += 1;
                    first_skip.get_or_insert(e);
                    continue;
                }
            };
            checked += 1;
            let outer_ok = is_elementary(&outer, order) || is_associated(&outer, AnchorSet::BOTH, order);
            let inner_ok = is_elementary(&inner, order);
            if outer_ok != inner_ok {
                return ClaimResult::new(
                    id,
                    ClaimStatus::Fail,
                    format!(
                        "(k,l)=({k},{l}): short {outer} elementary-or-associated={outer_ok}, \
                         short {inner} elementary={inner_ok}"
                    ),
                );
            }
        }
    }
    let detail = format!("{checked} pairs checked, {skipped} skipped as antipodal");
    match first_skip {
        Some(e) => ClaimResult::new(id, ClaimStatus::Ambiguous, format!("{detail} (first: {e})")),
        None => ClaimResult::new(id, ClaimStatus::Pass, detail),
    }
}

pub(crate) fn check_remark21(n: usize, elementary: &[Segment]) -> ClaimResult {
    let id = ClaimId::Remark21;
    let long: Vec<&Segment> = elementary.iter().filter(|s| s.parity() == Parity::Odd && !s.is_short()).collect();
    if let Some(bad) = long.iter().find(|s| s.endpoints() != (1, 2) && s.endpoints() != (n - 1, n)) {
        return ClaimResult::new(
            id,
            ClaimStatus::Fail,
            format!("long odd elementary segment {bad} is not incident with F(1),F(2) or F(n-1),F(n)"),
        );
    }
    let detail = if long.is_empty() {
        "no odd elementary segment of length >= 1/2".to_string()
    } else {
        format!("long odd elementary segments: {}", join(&long, ", "))
    };
    ClaimResult::new(id, ClaimStatus::Pass, detail)
}

pub(crate) fn check_parity(order: &CircularOrder) -> [ClaimResult; 2] {
    let n = order.len();
    let first_nb = [order.predecessor(1), order.successor(1)];
    let thm = if first_nb.contains(&n) {
        let k = if first_nb[0] == n { first_nb[1] } else { first_nb[0] };
        ClaimResult::pass_if(ClaimId::Thm21Parity, k % 2 == 0, format!("F(1) neighbours F({k}) and F(n): k={k}"))
    } else {
        let even = first_nb.iter().any(|k| k % 2 == 0);
        ClaimResult::new(
            ClaimId::Thm21Parity,
            ClaimStatus::HypothesisNotMet,
            format!(
                "F(1) neighbours F({}) and F({}), not F(n); even neighbour present: {even}",
                first_nb[0], first_nb[1]
            ),
        )
    };
    let last_nb = [order.predecessor(n), order.successor(n)];
    let cor = if last_nb.contains(&1) {
        let l = if last_nb[0] == 1 { last_nb[1] } else { last_nb[0] };
        ClaimResult::pass_if(
            ClaimId::CorParity,
            (l + n) % 2 == 1,
            format!("F(n) neighbours F(1) and F({l}): l={l}, n={n}"),
        )
    } else {
        ClaimResult::new(
            ClaimId::CorParity,
            ClaimStatus::HypothesisNotMet,
            format!("F(n) neighbours F({}) and F({}), not F(1)", last_nb[0], last_nb[1]),
        )
    };
    [thm, cor]
}

/// Member counts of the `{F(1)}` and `{F(1), F(n)}` families.
pub fn verify_cardinality(first: &AssociatedFamily, both: &AssociatedFamily) -> ClaimResult {
    let first_odd: Vec<usize> = first.odd().map(|s| s.weight().value).collect();
    let first_even = first.even().count();
    let mut both_odd: Vec<usize> = both.odd().map(|s| s.weight().value).collect();
    both_odd.sort_unstable();
    let distinct = both_odd.windows(2).all(|w| w[0] != w[1]);
    let ok = first_odd.len() == 2 && first_even == 1 && both_odd.len() == 4 && distinct;
    let detail = format!(
        "{{F(1)}}: {} odd (weights {}), {} even; {{F(1),F(n)}}: {} odd (weights {})",
        first_odd.len(),
        join(&first_odd, ", "),
        first_even,
        both_odd.len(),
        join(&both_odd, ", ")
    );
    if ok {
        ClaimResult::new(ClaimId::CorCardinality, ClaimStatus::Pass, detail)
    } else {
        let members = join(first.segments.iter().chain(&both.segments), "; ");
        ClaimResult::new(ClaimId::CorCardinality, ClaimStatus::Fail, format!("{detail}; members: {members}"))
    }
}

pub fn verify_five_values(orbit: &Orbit, profile: &WeightProfile) -> ClaimResult {
    check_five_values(&analysis(orbit).elementary, profile)
}

pub fn verify_sum_counts(orbit: &Orbit, profile: &WeightProfile) -> ClaimResult {
    check_sum_counts(orbit.n(), profile)
}

pub fn verify_equal_lengths(orbit: &Orbit) -> ClaimResult {
    check_equal_lengths(&analysis(orbit).elementary)
}

pub fn verify_count_identity(profile: &WeightProfile) -> ClaimResult {
    check_count_identity(profile)
}

/// `|A₁| = (ω₁ − 1)/2` and `|A₄| = n − (ω₄ − 1)/2`.
pub fn verify_thm22(orbit: &Orbit, profile: &WeightProfile) -> [ClaimResult; 2] {
    check_thm22(orbit.n(), profile)
}

pub fn verify_lemma21(orbit: &Orbit) -> ClaimResult {
    check_lemma21(&analysis(orbit).order)
}

pub fn verify_remark21(orbit: &Orbit) -> ClaimResult {
    check_remark21(orbit.n(), &analysis(orbit).elementary)
}

pub fn verify_parity_claims(orbit: &Orbit) -> [ClaimResult; 2] {
    check_parity(&analysis(orbit).order)
}

/// Runs every check on an orbit of at least five points.
pub fn verify_all(orbit: &Orbit) -> Result<VerificationReport, AnalysisError> {
    Ok(verify_analysis(orbit, &Analysis::new(orbit)?))
}

/// Simulates and verifies in one go.
pub fn verify_spec(spec: &LaunchSpec, n: usize) -> Result<VerificationReport, VerifyError> {
    let orbit = simulate(spec, n)?;
    Ok(verify_all(&orbit)?)
}

pub(crate) fn verify_analysis(orbit: &Orbit, an: &Analysis) -> VerificationReport {
    let n = an.n;
    let mut claims = match &an.profile {
        Ok(profile) => {
            let [a1, a4] = check_thm22(n, profile);
            vec![
                check_five_values(&an.elementary, profile),
                check_sum_counts(n, profile),
                check_count_identity(profile),
                a1,
                a4,
            ]
        }
        Err(e) => [ClaimId::FiveValues, ClaimId::SumCounts, ClaimId::CountIdentity, ClaimId::Thm22A1, ClaimId::Thm22A4]
            .into_iter()
            .map(|id| ClaimResult::new(id, ClaimStatus::HypothesisNotMet, format!("weights undefined: {e}")))
            .collect(),
    };
    claims.push(check_equal_lengths(&an.elementary));
    claims.push(check_lemma21(&an.order));
    claims.push(check_remark21(n, &an.elementary));
    claims.extend(check_parity(&an.order));
    claims.push(verify_cardinality(&an.first_family, &an.both_family));
    claims.sort_by_key(|c| c.id);

    let overall = claims.iter().all(|c| c.status != ClaimStatus::Fail);
    VerificationReport {
        spec: LaunchDoc::new(orbit.spec(), n),
        profile: an.profile.as_ref().ok().map(|p| AnalysisDoc::new(p, &an.elementary)),
        claims,
        overall,
        f1_neighbors: [an.order.predecessor(1), an.order.successor(1)],
        fn_neighbors: [an.order.predecessor(n), an.order.successor(n)],
    }
}
