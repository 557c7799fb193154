//! JSON documents exchanged with other tools.
//!
//! Every rational is written as a `"num/den"` string in lowest terms.

use serde::{Deserialize, Serialize};

use crate::billiard::{Direction, LaunchSpec, Orbit, SimError};
use crate::perimeter::{make_table, GeometryError, PerimeterCoord, Side};
use crate::profile::WeightProfile;
use crate::rational::Rational;
use crate::segments::{Parity, Segment};

/// A launch specification together with the orbit length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaunchDoc {
    pub p: Rational,
    pub q: Rational,
    pub s1: Rational,
    pub dir: Direction,
    pub n: usize,
}

impl LaunchDoc {
    pub fn new(spec: &LaunchSpec, n: usize) -> Self {
        LaunchDoc {
            p: spec.table().p().clone(),
            q: spec.table().q().clone(),
            s1: spec.s1().value().clone(),
            dir: spec.dir(),
            n,
        }
    }

    /// Rebuilds the launch specification, checking `q` against `p`.
    pub fn to_spec(&self) -> Result<(LaunchSpec, usize), SimError> {
        let table = make_table(self.p.clone())?;
        if table.q() != &self.q {
            return Err(
                GeometryError::InvalidTable(format!("q = {} does not equal 1/2 - p = {}", self.q, table.q())).into()
            );
        }
        let spec = LaunchSpec::new(table, PerimeterCoord::new(self.s1.clone())?, self.dir)?;
        Ok((spec, self.n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub j: usize,
    pub s: Rational,
    pub side: Side,
    pub x: Rational,
    pub y: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDoc {
    #[serde(flatten)]
    pub launch: LaunchDoc,
    pub points: Vec<PointDoc>,
}

impl From<&Orbit> for OrbitDoc {
    fn from(orbit: &Orbit) -> Self {
        OrbitDoc {
            launch: LaunchDoc::new(orbit.spec(), orbit.n()),
            points: orbit
                .points()
                .iter()
                .map(|pt| PointDoc {
                    j: pt.index,
                    s: pt.s.value().clone(),
                    side: pt.side_point.side,
                    x: pt.side_point.x.clone(),
                    y: pt.side_point.y.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentDoc {
    pub k: usize,
    pub l: usize,
    pub parity: Parity,
    pub weight: usize,
    pub length: Rational,
}

impl From<&Segment> for SegmentDoc {
    fn from(seg: &Segment) -> Self {
        let w = seg.weight();
        SegmentDoc { k: seg.from, l: seg.to, parity: w.parity, weight: w.value, length: seg.length.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDoc {
    pub omegas: [usize; 5],
    pub a: [Rational; 5],
    pub counts: [usize; 5],
    pub epsilon: Option<i8>,
    pub delta: Option<i8>,
    pub elementary: Vec<SegmentDoc>,
}

impl AnalysisDoc {
    pub fn new(profile: &WeightProfile, elementary: &[Segment]) -> Self {
        AnalysisDoc {
            omegas: profile.omega,
            a: profile.a.clone(),
            counts: profile.counts,
            epsilon: profile.epsilon,
            delta: profile.delta,
            elementary: elementary.iter().map(SegmentDoc::from).collect(),
        }
    }
}
