//! Segments of the perimeter cut out by the rebound points.
//!
//! A [`Segment`] is the open arc running counterclockwise from `F(from)` to
//! `F(to)`. Its parity and weight depend only on the two indices; its length
//! and interior depend on the orbit.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::billiard::Orbit;
use crate::perimeter::ccw_distance;
use crate::rational::Rational;

/// Orbits shorter than this have no well-defined associated families.
pub const MIN_ANALYSIS_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("bad segment endpoints F({k}), F({l})")]
    BadIndex { k: usize, l: usize },
    #[error("F({k}) and F({l}) are antipodal: both arcs have length 1/2")]
    AntipodalAmbiguity { k: usize, l: usize },
    #[error("analysis needs at least {MIN_ANALYSIS_POINTS} points, got {0}")]
    TooFewPoints(usize),
    #[error("anchor set must be a nonempty subset of {{F(1), F(n)}}")]
    BadAnchorSet,
    #[error("associated-family structure violated: {0}")]
    StructureViolation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    pub parity: Parity,
    pub value: usize,
}

/// Same parity: even, weight `|k − l|`. Different parity: odd, weight `k + l`.
pub fn weight(k: usize, l: usize) -> Result<Weight, AnalysisError> {
    if k == 0 || l == 0 || k == l {
        return Err(AnalysisError::BadIndex { k, l });
    }
    Ok(weight_unchecked(k, l))
}

fn weight_unchecked(k: usize, l: usize) -> Weight {
    if (k + l).is_multiple_of(2) {
        Weight { parity: Parity::Even, value: k.abs_diff(l) }
    } else {
        Weight { parity: Parity::Odd, value: k + l }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub length: Rational,
}

impl Segment {
    pub fn weight(&self) -> Weight {
        weight_unchecked(self.from, self.to)
    }

    pub fn parity(&self) -> Parity {
        self.weight().parity
    }

    pub fn is_incident(&self, j: usize) -> bool {
        self.from == j || self.to == j
    }

    /// Endpoints as an unordered pair, smaller index first.
    pub fn endpoints(&self) -> (usize, usize) {
        (self.from.min(self.to), self.from.max(self.to))
    }

    pub fn is_short(&self) -> bool {
        self.length < Rational::new(1, 2)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.weight();
        write!(f, "F({})→F({}) [{} w{} len {}]", self.from, self.to, w.parity, w.value, self.length)
    }
}

/// The rebound points sorted by perimeter coordinate, read circularly.
#[derive(Debug, Clone)]
pub struct CircularOrder {
    /// Orbit indices in increasing coordinate order.
    sorted: Vec<usize>,
    /// `position[j - 1]` is the slot of `F(j)` in `sorted`.
    position: Vec<usize>,
    /// `coords[j - 1]` is the coordinate of `F(j)`.
    coords: Vec<Rational>,
}

pub fn circular_order(orbit: &Orbit) -> CircularOrder {
    let coords: Vec<Rational> = orbit.coords().cloned().collect();
    let mut sorted: Vec<usize> = (1..=coords.len()).collect();
    sorted.sort_by(|&a, &b| coords[a - 1].cmp(&coords[b - 1]));
    let mut position = vec![0; coords.len()];
    for (slot, &j) in sorted.iter().enumerate() {
        position[j - 1] = slot;
    }
    CircularOrder { sorted, position, coords }
}

impl CircularOrder {
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Orbit indices starting from the smallest coordinate.
    pub fn sequence(&self) -> &[usize] {
        &self.sorted
    }

    pub fn position(&self, j: usize) -> usize {
        self.position[j - 1]
    }

    pub fn coord(&self, j: usize) -> &Rational {
        &self.coords[j - 1]
    }

    pub fn successor(&self, j: usize) -> usize {
        self.sorted[(self.position(j) + 1) % self.len()]
    }

    pub fn predecessor(&self, j: usize) -> usize {
        self.sorted[(self.position(j) + self.len() - 1) % self.len()]
    }

    /// The counterclockwise arc from `F(from)` to `F(to)`.
    pub fn arc(&self, from: usize, to: usize) -> Segment {
        debug_assert_ne!(from, to);
        Segment { from, to, length: ccw_distance(self.coord(from), self.coord(to)) }
    }

    /// Number of rebound points strictly inside `seg`.
    pub fn interior_len(&self, seg: &Segment) -> usize {
        let n = self.len();
        (self.position(seg.to) + n - self.position(seg.from) - 1) % n
    }

    /// Rebound points strictly inside `seg`, in counterclockwise order.
    pub fn interior(&self, seg: &Segment) -> impl Iterator<Item = usize> + '_ {
        let start = self.position(seg.from) + 1;
        (0..self.interior_len(seg)).map(move |i| self.sorted[(start + i) % self.len()])
    }

    pub fn elementary_segments(&self) -> Vec<Segment> {
        self.sorted.iter().map(|&j| self.arc(j, self.successor(j))).collect()
    }
}

/// The `n` arcs between circularly consecutive rebound points, starting at the
/// point with the smallest coordinate.
pub fn elementary_segments(orbit: &Orbit) -> Vec<Segment> {
    circular_order(orbit).elementary_segments()
}

/// The arc between `F(k)` and `F(l)` shorter than 1/2. Symmetric in `k, l`.
pub fn short_segment(k: usize, l: usize, order: &CircularOrder) -> Result<Segment, AnalysisError> {
    let n = order.len();
    if k == 0 || l == 0 || k > n || l > n || k == l {
        return Err(AnalysisError::BadIndex { k, l });
    }
    let forward = order.arc(k, l);
    let half = Rational::new(1, 2);
    match forward.length.cmp(&half) {
        std::cmp::Ordering::Less => Ok(forward),
        std::cmp::Ordering::Greater => Ok(order.arc(l, k)),
        std::cmp::Ordering::Equal => Err(AnalysisError::AntipodalAmbiguity { k: k.min(l), l: k.max(l) }),
    }
}

pub fn is_elementary(seg: &Segment, order: &CircularOrder) -> bool {
    order.interior_len(seg) == 0
}

pub fn interior_points(seg: &Segment, order: &CircularOrder) -> BTreeSet<usize> {
    order.interior(seg).collect()
}

/// A nonempty subset `V` of `{F(1), F(n)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnchorSet {
    first: bool,
    last: bool,
}

impl AnchorSet {
    /// `{F(1)}`.
    pub const FIRST: AnchorSet = AnchorSet { first: true, last: false };
    /// `{F(n)}`.
    pub const LAST: AnchorSet = AnchorSet { first: false, last: true };
    /// `{F(1), F(n)}`.
    pub const BOTH: AnchorSet = AnchorSet { first: true, last: true };

    /// Builds `V` from orbit indices, each of which must be `1` or `n`.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self, AnalysisError> {
        let mut set = AnchorSet { first: false, last: false };
        for &j in indices {
            match j {
                1 => set.first = true,
                j if j == n => set.last = true,
                _ => return Err(AnalysisError::BadAnchorSet),
            }
        }
        if set.first || set.last {
            Ok(set)
        } else {
            Err(AnalysisError::BadAnchorSet)
        }
    }

    pub fn contains(&self, j: usize, n: usize) -> bool {
        (self.first && j == 1) || (self.last && j == n)
    }

    pub fn indices(&self, n: usize) -> Vec<usize> {
        let mut v = Vec::with_capacity(2);
        if self.first {
            v.push(1);
        }
        if self.last {
            v.push(n);
        }
        v
    }
}

/// Whether `seg` is associated with `anchors`: elementary and incident with an
/// anchor, or with a nonempty interior made only of anchors.
pub fn is_associated(seg: &Segment, anchors: AnchorSet, order: &CircularOrder) -> bool {
    let n = order.len();
    match order.interior_len(seg) {
        0 => anchors.contains(seg.from, n) || anchors.contains(seg.to, n),
        1 | 2 => order.interior(seg).all(|j| anchors.contains(j, n)),
        _ => false,
    }
}

/// All segments associated with an anchor set, sorted by `(from, to)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatedFamily {
    pub anchors: AnchorSet,
    pub segments: Vec<Segment>,
}

impl AssociatedFamily {
    pub fn odd(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.parity() == Parity::Odd)
    }

    pub fn even(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.parity() == Parity::Even)
    }

    /// The member with weight `value`, if exactly one has it.
    pub fn with_weight(&self, value: usize) -> Option<&Segment> {
        let mut it = self.segments.iter().filter(|s| s.weight().value == value);
        match (it.next(), it.next()) {
            (Some(seg), None) => Some(seg),
            _ => None,
        }
    }
}

fn check_family_input(orbit: &Orbit) -> Result<(), AnalysisError> {
    if orbit.n() < MIN_ANALYSIS_POINTS {
        return Err(AnalysisError::TooFewPoints(orbit.n()));
    }
    Ok(())
}

/// Exhaustive oracle: tests every ordered pair of rebound points against the
/// definition, locating interior points directly from coordinates.
pub fn associated_family_bruteforce(orbit: &Orbit, anchors: AnchorSet) -> Result<AssociatedFamily, AnalysisError> {
    check_family_input(orbit)?;
    let n = orbit.n();
    let coords: Vec<&Rational> = orbit.coords().collect();
    let mut segments = Vec::new();
    for k in 1..=n {
        for l in 1..=n {
            if k == l {
                continue;
            }
            let length = ccw_distance(coords[k - 1], coords[l - 1]);
            let inside: Vec<usize> =
                (1..=n).filter(|&m| m != k && m != l && ccw_distance(coords[k - 1], coords[m - 1]) < length).collect();
            let keep = if inside.is_empty() {
                anchors.contains(k, n) || anchors.contains(l, n)
            } else {
                inside.iter().all(|&m| anchors.contains(m, n))
            };
            if keep {
                segments.push(Segment { from: k, to: l, length });
            }
        }
    }
    segments.sort_by_key(|s| (s.from, s.to));
    segments.dedup();
    Ok(AssociatedFamily { anchors, segments })
}

/// Direct construction from the circular neighbours of the anchors.
pub fn associated_family(orbit: &Orbit, anchors: AnchorSet) -> Result<AssociatedFamily, AnalysisError> {
    check_family_input(orbit)?;
    Ok(associated_family_in(&circular_order(orbit), anchors))
}

pub(crate) fn associated_family_in(order: &CircularOrder, anchors: AnchorSet) -> AssociatedFamily {
    let n = order.len();
    let mut segments = Vec::with_capacity(6);
    for v in anchors.indices(n) {
        let (pred, succ) = (order.predecessor(v), order.successor(v));
        segments.push(order.arc(pred, v));
        segments.push(order.arc(v, succ));
        // The arc spanning v alone.
        segments.push(order.arc(pred, succ));
    }
    if anchors == AnchorSet::BOTH {
        // The arc spanning F(1) and F(n) together, when they are neighbours.
        if order.successor(1) == n {
            segments.push(order.arc(order.predecessor(1), order.successor(n)));
        } else if order.successor(n) == 1 {
            segments.push(order.arc(order.predecessor(n), order.successor(1)));
        }
    }
    segments.sort_by_key(|s| (s.from, s.to));
    segments.dedup();
    AssociatedFamily { anchors, segments }
}
