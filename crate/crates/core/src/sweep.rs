//! Seeded sweeps over many launch configurations.
//!
//! A sweep turns a [`SweepConfig`] into a deterministic list of launches,
//! verifies each one independently (in parallel when asked) and emits the
//! records in generation order. The output depends only on the configuration,
//! never on the thread count.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::billiard::{trace, LaunchSense, LaunchSpec, Orbit, SimError};
use crate::perimeter::{make_table, PerimeterCoord};
use crate::profile::Analysis;
use crate::rational::Rational;
use crate::segments::MIN_ANALYSIS_POINTS;
use crate::verify::{verify_analysis, ClaimId, ClaimStatus, VerificationReport};
use crate::wire::{LaunchDoc, OrbitDoc};

/// Identity of the pseudorandom generator, recorded in every summary.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64) + rand 0.8 uniform gen_range";

/// Units handed to the thread pool at a time.
const CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("empty range: {0}")]
    EmptyRange(String),
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Random,
    ExhaustiveSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    /// Number of launches drawn in random mode. Ignored by exhaustive mode.
    pub count: usize,
    /// Inclusive bounds on the orbit length.
    pub n_range: (usize, usize),
    /// Inclusive bounds on the denominators of `p` and `s1`.
    pub denominator_range: (u64, u64),
    pub directions: Vec<LaunchSense>,
    pub mode: SweepMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            count: 1000,
            n_range: (5, 200),
            denominator_range: (101, 9973),
            directions: vec![LaunchSense::Ccw, LaunchSense::Cw],
            mode: SweepMode::Random,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        let (nmin, nmax) = self.n_range;
        let (dmin, dmax) = self.denominator_range;
        if nmin < MIN_ANALYSIS_POINTS {
            return Err(SweepError::InvalidConfig(format!("n_range minimum {nmin} is below 5")));
        }
        if dmin < 3 {
            return Err(SweepError::InvalidConfig(format!("denominator_range minimum {dmin} is below 3")));
        }
        if dmax > i64::MAX as u64 {
            return Err(SweepError::InvalidConfig(format!("denominator {dmax} does not fit in i64")));
        }
        if nmin > nmax {
            return Err(SweepError::EmptyRange(format!("n_range ({nmin}, {nmax})")));
        }
        if dmin > dmax {
            return Err(SweepError::EmptyRange(format!("denominator_range ({dmin}, {dmax})")));
        }
        if self.directions.is_empty() {
            return Err(SweepError::EmptyRange("no launch directions".into()));
        }
        Ok(())
    }

    fn senses(&self) -> Vec<LaunchSense> {
        let mut senses = self.directions.clone();
        senses.sort();
        senses.dedup();
        senses
    }
}

/// One launch to verify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepItem {
    pub spec: LaunchSpec,
    pub n: usize,
}

/// A launch verified at every length in `n_lo..=n_hi`, sharing one simulation.
struct WorkUnit {
    first_index: u64,
    spec: LaunchSpec,
    n_lo: usize,
    n_hi: usize,
}

fn random_launch(rng: &mut ChaCha8Rng, cfg: &SweepConfig, senses: &[LaunchSense]) -> (LaunchSpec, usize) {
    let (dmin, dmax) = cfg.denominator_range;
    loop {
        let d = rng.gen_range(dmin..=dmax) as i64;
        let u = rng.gen_range(1..=(d - 1) / 2);
        let d2 = rng.gen_range(dmin..=dmax) as i64;
        let v = rng.gen_range(1..d2);
        let sense = senses[rng.gen_range(0..senses.len())];
        let n = rng.gen_range(cfg.n_range.0..=cfg.n_range.1);
        // Non-reduced draws are redrawn so both denominators stay in range.
        if num_integer::gcd(u, d) != 1 || num_integer::gcd(v, d2) != 1 {
            continue;
        }
        let table = make_table(Rational::new(u, d)).expect("0 < u/d < 1/2");
        let s1 = PerimeterCoord::new(Rational::new(v, d2)).expect("0 < v/d' < 1");
        // Corners are rejected and redrawn.
        if let Ok(spec) = LaunchSpec::with_sense(table, s1, sense) {
            return (spec, n);
        }
    }
}

/// Reduced fractions with denominator in range lying strictly inside `(0, bound)`.
fn lattice(dmin: u64, dmax: u64, bound: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    for d in dmin as i64..=dmax as i64 {
        for u in 1..d {
            if num_integer::gcd(u, d) != 1 {
                continue;
            }
            let x = Rational::new(u, d);
            if &x >= bound {
                break;
            }
            out.push(x);
        }
    }
    out.sort();
    out
}

fn exhaustive_launches(cfg: &SweepConfig) -> impl Iterator<Item = LaunchSpec> {
    let (dmin, dmax) = cfg.denominator_range;
    let ps = lattice(dmin, dmax, &Rational::new(1, 2));
    let s1s = lattice(dmin, dmax, &Rational::ONE);
    let senses = cfg.senses();
    ps.into_iter().flat_map(move |p| {
        let table = make_table(p).expect("lattice p lies in (0, 1/2)");
        let senses = senses.clone();
        s1s.clone().into_iter().flat_map(move |s1| {
            let table = table.clone();
            let s1 = PerimeterCoord::new(s1).expect("lattice s1 lies in (0, 1)");
            senses
                .clone()
                .into_iter()
                .filter_map(move |sense| LaunchSpec::with_sense(table.clone(), s1.clone(), sense).ok())
        })
    })
}

fn work_units(cfg: &SweepConfig) -> Result<Box<dyn Iterator<Item = WorkUnit>>, SweepError> {
    cfg.validate()?;
    let mut next_index = 0u64;
    match cfg.mode {
        SweepMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let senses = cfg.senses();
            let cfg = cfg.clone();
            Ok(Box::new((0..cfg.count).map(move |_| {
                let (spec, n) = random_launch(&mut rng, &cfg, &senses);
                let unit = WorkUnit { first_index: next_index, spec, n_lo: n, n_hi: n };
                next_index += 1;
                unit
            })))
        }
        SweepMode::ExhaustiveSmall => {
            let (n_lo, n_hi) = cfg.n_range;
            Ok(Box::new(exhaustive_launches(cfg).map(move |spec| {
                let unit = WorkUnit { first_index: next_index, spec, n_lo, n_hi };
                next_index += (n_hi - n_lo + 1) as u64;
                unit
            })))
        }
    }
}

/// The launches a sweep will verify, in output order.
///
/// Exhaustive mode lists every reduced `p` in `(0, 1/2)` and `s1` in `(0, 1)`
/// with denominator in range, sorted by `(p, s1, direction, n)`, skipping
/// launches from a corner.
pub fn generate_configs(cfg: &SweepConfig) -> Result<Vec<SweepItem>, SweepError> {
    Ok(work_units(cfg)?.flat_map(|u| (u.n_lo..=u.n_hi).map(move |n| SweepItem { spec: u.spec.clone(), n })).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Verified,
    Degenerate,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    CornerHit,
    DuplicatePoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: u64,
    pub spec: LaunchDoc,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<Degeneracy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    /// Present only on failed records, so they reproduce standalone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitDoc>,
}

fn degenerate(index: u64, spec: &LaunchSpec, n: usize, err: &SimError) -> SweepRecord {
    let kind = match err {
        SimError::CornerHit { .. } => Degeneracy::CornerHit,
        SimError::DuplicatePoint { .. } => Degeneracy::DuplicatePoint,
        other => unreachable!("trace only stops at corners and repeats, got {other}"),
    };
    SweepRecord {
        index,
        spec: LaunchDoc::new(spec, n),
        outcome: Outcome::Degenerate,
        degeneracy: Some(kind),
        error: Some(err.to_string()),
        report: None,
        orbit: None,
    }
}

fn verified(index: u64, orbit: &Orbit) -> SweepRecord {
    let analysis = Analysis::new(orbit).expect("sweeps use n >= 5");
    let report = verify_analysis(orbit, &analysis);
    let failed = !report.overall;
    SweepRecord {
        index,
        spec: report.spec.clone(),
        outcome: if failed { Outcome::Failed } else { Outcome::Verified },
        degeneracy: None,
        error: None,
        report: Some(report),
        orbit: failed.then(|| OrbitDoc::from(orbit)),
    }
}

fn process(unit: &WorkUnit) -> Vec<SweepRecord> {
    let (points, stop) = trace(&unit.spec, unit.n_hi);
    let reached = points.len();
    let full = (reached >= 2).then(|| Orbit::from_trace(unit.spec.clone(), points));
    (unit.n_lo..=unit.n_hi)
        .zip(unit.first_index..)
        .map(|(n, index)| match (&stop, &full) {
            (Some(err), _) if n > reached => degenerate(index, &unit.spec, n, err),
            (_, Some(orbit)) if n == orbit.n() => verified(index, orbit),
            (_, Some(orbit)) => verified(index, &orbit.prefix(n)),
            (_, None) => unreachable!("n >= 5 points were traced"),
        })
        .collect()
}

/// Runs a sweep and collects every record.
pub fn run_sweep(cfg: &SweepConfig) -> Result<(Vec<SweepRecord>, SweepSummary), SweepError> {
    let mut records = Vec::new();
    let summary = run_sweep_with(cfg, None, |r| records.push(r.clone()))?;
    Ok((records, summary))
}

/// Runs a sweep on `threads` workers (all cores when `None`), passing each
/// record to `sink` in generation order.
pub fn run_sweep_with(
    cfg: &SweepConfig,
    threads: Option<usize>,
    mut sink: impl FnMut(&SweepRecord),
) -> Result<SweepSummary, SweepError> {
    let started = Instant::now();
    let mut units = work_units(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| SweepError::InvalidConfig(format!("thread pool: {e}")))?;
    let mut summary = SummaryBuilder::default();
    loop {
        let chunk: Vec<WorkUnit> = units.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let results: Vec<Vec<SweepRecord>> = pool.install(|| chunk.par_iter().map(process).collect());
        for record in results.iter().flatten() {
            summary.add(record);
            sink(record);
        }
    }
    let mut summary = summary.finish();
    summary.config = Some(cfg.clone());
    summary.wall_clock = started.elapsed();
    Ok(summary)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimTally {
    pub pass: u64,
    pub fail: u64,
    pub hypothesis_not_met: u64,
    pub ambiguous: u64,
}

impl ClaimTally {
    fn add(&mut self, status: ClaimStatus) {
        match status {
            ClaimStatus::Pass => self.pass += 1,
            ClaimStatus::Fail => self.fail += 1,
            ClaimStatus::HypothesisNotMet => self.hypothesis_not_met += 1,
            ClaimStatus::Ambiguous => self.ambiguous += 1,
        }
    }
}

/// How often `F(1)` has a circular neighbour `F(k)` with `k` even, split by
/// whether `F(n)` is one of its neighbours.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborStats {
    pub fn_adjacent: u64,
    pub fn_adjacent_with_even_index_neighbor: u64,
    pub fn_not_adjacent: u64,
    pub fn_not_adjacent_with_even_index_neighbor: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<SweepConfig>,
    pub total: u64,
    pub verified: u64,
    pub failed: u64,
    pub degenerate_corner_hit: u64,
    pub degenerate_duplicate_point: u64,
    pub claims: BTreeMap<ClaimId, ClaimTally>,
    /// Number of records by how many distinct weights their elementary segments carry.
    pub distinct_weights: BTreeMap<usize, u64>,
    pub max_denominator_p: u64,
    pub max_denominator_s1: u64,
    pub neighbors: NeighborStats,
    /// Indices of failed records.
    pub failed_indices: Vec<u64>,
    /// Not serialized, so that summaries of equal sweeps are byte-identical.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl SweepSummary {
    pub fn degenerate(&self) -> u64 {
        self.degenerate_corner_hit + self.degenerate_duplicate_point
    }
}

/// Folds records into a [`SweepSummary`] one at a time.
#[derive(Debug, Clone)]
pub struct SummaryBuilder {
    summary: SweepSummary,
}

impl Default for SummaryBuilder {
    fn default() -> Self {
        let claims = ClaimId::ALL.iter().map(|&id| (id, ClaimTally::default())).collect();
        SummaryBuilder { summary: SweepSummary { generator: GENERATOR.into(), claims, ..Default::default() } }
    }
}

fn small_denominator(r: &Rational) -> u64 {
    r.denom().try_into().unwrap_or(u64::MAX)
}

impl SummaryBuilder {
    pub fn add(&mut self, record: &SweepRecord) {
        let s = &mut self.summary;
        s.total += 1;
        s.max_denominator_p = s.max_denominator_p.max(small_denominator(&record.spec.p));
        s.max_denominator_s1 = s.max_denominator_s1.max(small_denominator(&record.spec.s1));
        match (record.outcome, record.degeneracy) {
            (Outcome::Verified, _) => s.verified += 1,
            (Outcome::Failed, _) => {
                s.failed += 1;
                s.failed_indices.push(record.index);
            }
            (Outcome::Degenerate, Some(Degeneracy::CornerHit)) => s.degenerate_corner_hit += 1,
            (Outcome::Degenerate, _) => s.degenerate_duplicate_point += 1,
        }
        let Some(report) = &record.report else { return };
        for claim in &report.claims {
            s.claims.entry(claim.id).or_default().add(claim.status);
        }
        if let Some(profile) = &report.profile {
            let mut weights: Vec<usize> = profile.elementary.iter().map(|e| e.weight).collect();
            weights.sort_unstable();
            weights.dedup();
            *s.distinct_weights.entry(weights.len()).or_default() += 1;
        }
        let n = report.spec.n;
        let even_neighbor = report.f1_neighbors.iter().any(|k| k % 2 == 0);
        let stats = &mut s.neighbors;
        if report.f1_neighbors.contains(&n) {
            stats.fn_adjacent += 1;
            stats.fn_adjacent_with_even_index_neighbor += u64::from(even_neighbor);
        } else {
            stats.fn_not_adjacent += 1;
            stats.fn_not_adjacent_with_even_index_neighbor += u64::from(even_neighbor);
        }
    }

    pub fn finish(self) -> SweepSummary {
        self.summary
    }
}

/// Exact tallies over a list of records.
pub fn summarize<'a>(records: impl IntoIterator<Item = &'a SweepRecord>) -> SweepSummary {
    let mut builder = SummaryBuilder::default();
    for r in records {
        builder.add(r);
    }
    builder.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::Direction;
    use crate::verify::verify_spec;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn small(seed: u64) -> SweepConfig {
        SweepConfig { seed, count: 3, n_range: (5, 40), denominator_range: (11, 97), ..Default::default() }
    }

    #[test]
    fn random_generation_is_deterministic() {
        let a = generate_configs(&small(42)).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a, generate_configs(&small(42)).unwrap());
        assert_ne!(a, generate_configs(&small(43)).unwrap());
        for item in &a {
            assert!((5..=40).contains(&item.n));
            for x in [item.spec.table().p(), item.spec.s1().value()] {
                assert!((11..=97).contains(&small_denominator(x)), "{x}");
            }
        }
    }

    #[test]
    fn empty_ranges_are_rejected() {
        let mut cfg = small(1);
        cfg.denominator_range = (5, 4);
        assert!(matches!(generate_configs(&cfg), Err(SweepError::EmptyRange(_))));
        cfg.denominator_range = (5, 9);
        cfg.n_range = (9, 8);
        assert!(matches!(generate_configs(&cfg), Err(SweepError::EmptyRange(_))));
        cfg.n_range = (4, 8);
        assert!(matches!(generate_configs(&cfg), Err(SweepError::InvalidConfig(_))));
        cfg.n_range = (5, 8);
        cfg.directions.clear();
        assert!(matches!(generate_configs(&cfg), Err(SweepError::EmptyRange(_))));
    }

    #[test]
    fn exhaustive_enumeration_is_sorted_and_complete() {
        let cfg = SweepConfig {
            mode: SweepMode::ExhaustiveSmall,
            n_range: (5, 6),
            denominator_range: (3, 6),
            ..Default::default()
        };
        let items = generate_configs(&cfg).unwrap();
        // p ∈ {1/6, 1/5, 1/4, 1/3, 2/5}; s1 runs over the 10 reduced fractions in (0, 1)
        // with denominator 3..=6. Corners are at 0, p, 1/2 and 1/2 + p.
        let ps = ["1/6", "1/5", "1/4", "1/3", "2/5"].map(r);
        let s1s = lattice(3, 6, &Rational::ONE);
        assert_eq!(s1s.len(), 10);
        let mut expected = Vec::new();
        for p in &ps {
            let table = make_table(p.clone()).unwrap();
            for s in &s1s {
                let s = PerimeterCoord::new(s.clone()).unwrap();
                for sense in [LaunchSense::Ccw, LaunchSense::Cw] {
                    if let Ok(spec) = LaunchSpec::with_sense(table.clone(), s.clone(), sense) {
                        for n in 5..=6 {
                            expected.push(SweepItem { spec: spec.clone(), n });
                        }
                    }
                }
            }
        }
        assert_eq!(items, expected);
        let keys: Vec<_> = items.iter().map(|i| (i.spec.table().p().clone(), i.spec.s1().value().clone())).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn records_follow_generation_order_and_match_standalone_runs() {
        let cfg = small(7);
        let items = generate_configs(&cfg).unwrap();
        let (records, summary) = run_sweep(&cfg).unwrap();
        assert_eq!(records.len(), items.len());
        for (i, (rec, item)) in records.iter().zip(&items).enumerate() {
            assert_eq!(rec.index, i as u64);
            assert_eq!(rec.spec, LaunchDoc::new(&item.spec, item.n));
            match verify_spec(&item.spec, item.n) {
                Ok(report) => assert_eq!(rec.report.as_ref(), Some(&report)),
                Err(e) => assert_eq!(rec.error.as_deref(), Some(e.to_string().as_str())),
            }
        }
        assert_eq!(summary.total, 3);
        assert_eq!(summary.verified + summary.failed + summary.degenerate(), summary.total);
    }

    #[test]
    fn exhaustive_prefixes_agree_with_standalone_verification() {
        let cfg = SweepConfig {
            mode: SweepMode::ExhaustiveSmall,
            n_range: (5, 12),
            denominator_range: (3, 7),
            ..Default::default()
        };
        let items = generate_configs(&cfg).unwrap();
        let (records, _) = run_sweep(&cfg).unwrap();
        assert_eq!(records.len(), items.len());
        for (rec, item) in records.iter().zip(&items) {
            match verify_spec(&item.spec, item.n) {
                Ok(report) => assert_eq!(rec.report.as_ref(), Some(&report)),
                Err(e) => {
                    assert_eq!(rec.outcome, Outcome::Degenerate);
                    assert_eq!(rec.error.as_deref(), Some(e.to_string().as_str()));
                }
            }
        }
    }

    #[test]
    fn summary_of_w_alone() {
        let spec = LaunchSpec::from_parts(r("3/10"), r("1/20"), Direction::NorthEast).unwrap();
        let report = verify_spec(&spec, 5).unwrap();
        let record = SweepRecord {
            index: 0,
            spec: report.spec.clone(),
            outcome: Outcome::Verified,
            degeneracy: None,
            error: None,
            report: Some(report),
            orbit: None,
        };
        let s = summarize([&record]);
        assert_eq!(s.total, 1);
        assert_eq!(s.distinct_weights, BTreeMap::from([(3, 1)]));
        assert_eq!(s.claims[&ClaimId::FiveValues].pass, 1);
        assert_eq!((s.max_denominator_p, s.max_denominator_s1), (10, 20));
        assert_eq!(s.neighbors.fn_adjacent, 1);
    }

    #[test]
    fn empty_summary_is_zero() {
        let s = summarize([]);
        assert_eq!(s.total, 0);
        assert!(s.claims.values().all(|t| *t == ClaimTally::default()));
        assert!(s.distinct_weights.is_empty());
        assert_eq!(s.generator, GENERATOR);
    }
}
