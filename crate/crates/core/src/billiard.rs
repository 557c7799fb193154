//! Step-by-step ray tracing of the diagonal billiard.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perimeter::{
    make_table, perimeter_to_side, side_to_perimeter, GeometryError, PerimeterCoord, Side, SidePoint, Table,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("direction {dir} does not point into the table from the {side} side")]
    NotInward { side: Side, dir: Direction },
    #[error("trajectory reaches the corner ({x}, {y}) as point F({index})")]
    CornerHit { index: usize, x: Rational, y: Rational },
    #[error("F({first}) and F({second}) coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("an orbit needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("time {0} is not a wall hit")]
    NotAWallHit(Rational),
}

/// One of the four diagonal directions; both components are exactly ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "NE")]
    NorthEast,
    #[serde(rename = "NW")]
    NorthWest,
    #[serde(rename = "SE")]
    SouthEast,
    #[serde(rename = "SW")]
    SouthWest,
}

impl Direction {
    pub fn from_signs(dx: i8, dy: i8) -> Self {
        match (dx > 0, dy > 0) {
            (true, true) => Direction::NorthEast,
            (false, true) => Direction::NorthWest,
            (true, false) => Direction::SouthEast,
            (false, false) => Direction::SouthWest,
        }
    }

    pub fn dx(self) -> i8 {
        match self {
            Direction::NorthEast | Direction::SouthEast => 1,
            Direction::NorthWest | Direction::SouthWest => -1,
        }
    }

    pub fn dy(self) -> i8 {
        match self {
            Direction::NorthEast | Direction::NorthWest => 1,
            Direction::SouthEast | Direction::SouthWest => -1,
        }
    }

    /// Reflection off a wall on `side`: the normal component flips.
    pub fn reflect(self, side: Side) -> Self {
        match side {
            Side::Bottom | Side::Top => Direction::from_signs(self.dx(), -self.dy()),
            Side::Left | Side::Right => Direction::from_signs(-self.dx(), self.dy()),
        }
    }

    pub fn points_inward_from(self, side: Side) -> bool {
        match side {
            Side::Bottom => self.dy() > 0,
            Side::Top => self.dy() < 0,
            Side::Left => self.dx() > 0,
            Side::Right => self.dx() < 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::NorthEast => "NE",
            Direction::NorthWest => "NW",
            Direction::SouthEast => "SE",
            Direction::SouthWest => "SW",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NE" => Ok(Direction::NorthEast),
            "NW" => Ok(Direction::NorthWest),
            "SE" => Ok(Direction::SouthEast),
            "SW" => Ok(Direction::SouthWest),
            _ => Err(format!("unknown direction `{s}` (expected ne, nw, se or sw)")),
        }
    }
}

/// The two inward diagonals at a launch point, named by whether the ball's
/// motion along the boundary follows increasing (`Ccw`) or decreasing (`Cw`)
/// perimeter coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaunchSense {
    Ccw,
    Cw,
}

impl LaunchSense {
    pub fn direction_on(self, side: Side) -> Direction {
        use Direction::*;
        match (side, self) {
            (Side::Bottom, LaunchSense::Ccw) => NorthEast,
            (Side::Bottom, LaunchSense::Cw) => NorthWest,
            (Side::Right, LaunchSense::Ccw) => NorthWest,
            (Side::Right, LaunchSense::Cw) => SouthWest,
            (Side::Top, LaunchSense::Ccw) => SouthWest,
            (Side::Top, LaunchSense::Cw) => SouthEast,
            (Side::Left, LaunchSense::Ccw) => SouthEast,
            (Side::Left, LaunchSense::Cw) => NorthEast,
        }
    }
}

/// Where and how the ball starts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaunchSpec {
    table: Table,
    s1: PerimeterCoord,
    dir: Direction,
    start: SidePoint,
}

impl LaunchSpec {
    pub fn new(table: Table, s1: PerimeterCoord, dir: Direction) -> Result<Self, SimError> {
        let start = perimeter_to_side(&table, &s1)?;
        if !dir.points_inward_from(start.side) {
            return Err(SimError::NotInward { side: start.side, dir });
        }
        Ok(LaunchSpec { table, s1, dir, start })
    }

    pub fn with_sense(table: Table, s1: PerimeterCoord, sense: LaunchSense) -> Result<Self, SimError> {
        let side = table.side_of(&s1)?;
        Self::new(table, s1, sense.direction_on(side))
    }

    /// Convenience constructor from the horizontal side and launch coordinate.
    pub fn from_parts(p: Rational, s1: Rational, dir: Direction) -> Result<Self, SimError> {
        Self::new(make_table(p)?, PerimeterCoord::new(s1)?, dir)
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn s1(&self) -> &PerimeterCoord {
        &self.s1
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    pub fn start(&self) -> &SidePoint {
        &self.start
    }

    /// `F(1)`, with the incoming direction set equal to the outgoing one.
    pub fn launch_point(&self) -> ReboundPoint {
        ReboundPoint {
            index: 1,
            s: self.s1.clone(),
            side_point: self.start.clone(),
            incoming: self.dir,
            outgoing: self.dir,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReboundPoint {
    pub index: usize,
    pub s: PerimeterCoord,
    pub side_point: SidePoint,
    pub incoming: Direction,
    pub outgoing: Direction,
}

/// The first `n` rebound points `F(1), …, F(n)`, all distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    spec: LaunchSpec,
    points: Vec<ReboundPoint>,
}

impl Orbit {
    /// Assembles an orbit from points that are already indexed `1..=n`,
    /// checking indices and distinctness.
    pub fn from_points(spec: LaunchSpec, points: Vec<ReboundPoint>) -> Result<Self, SimError> {
        if points.len() < 2 {
            return Err(SimError::TooFewPoints(points.len()));
        }
        let mut seen: HashMap<&Rational, usize> = HashMap::with_capacity(points.len());
        for (i, pt) in points.iter().enumerate() {
            assert_eq!(pt.index, i + 1, "orbit points must be indexed 1..=n");
            if let Some(first) = seen.insert(pt.s.value(), pt.index) {
                return Err(SimError::DuplicatePoint { first, second: pt.index });
            }
        }
        Ok(Orbit { spec, points })
    }

    pub fn spec(&self) -> &LaunchSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ReboundPoint] {
        &self.points
    }

    /// `F(j)` for `1 ≤ j ≤ n`.
    pub fn point(&self, j: usize) -> &ReboundPoint {
        &self.points[j - 1]
    }

    pub fn coords(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.points.iter().map(|pt| pt.s.value())
    }

    /// Wraps points produced by [`trace`], which are distinct and indexed by construction.
    pub(crate) fn from_trace(spec: LaunchSpec, points: Vec<ReboundPoint>) -> Orbit {
        debug_assert!(points.len() >= 2);
        Orbit { spec, points }
    }

    /// The orbit `F(1), …, F(m)`. Panics unless `2 ≤ m ≤ n`.
    pub fn prefix(&self, m: usize) -> Orbit {
        assert!((2..=self.n()).contains(&m), "prefix length {m} out of range");
        Orbit { spec: self.spec.clone(), points: self.points[..m].to_vec() }
    }
}

/// Follows the ray leaving `from` to the next wall.
pub fn step(table: &Table, from: &ReboundPoint) -> Result<ReboundPoint, SimError> {
    let at = &from.side_point;
    let dir = from.outgoing;
    if !dir.points_inward_from(at.side) {
        return Err(SimError::NotInward { side: at.side, dir });
    }
    let (p, q) = (table.p(), table.q());
    let to_vertical = if dir.dx() > 0 { p - &at.x } else { at.x.clone() };
    let to_horizontal = if dir.dy() > 0 { q - &at.y } else { at.y.clone() };
    let t = std::cmp::min(&to_vertical, &to_horizontal).clone();
    let advance = |v: &Rational, d: i8| if d > 0 { v + &t } else { v - &t };
    let x = advance(&at.x, dir.dx());
    let y = advance(&at.y, dir.dy());
    if to_vertical == to_horizontal {
        return Err(SimError::CornerHit { index: from.index + 1, x, y });
    }
    let side = if t == to_vertical {
        if dir.dx() > 0 {
            Side::Right
        } else {
            Side::Left
        }
    } else if dir.dy() > 0 {
        Side::Top
    } else {
        Side::Bottom
    };
    let side_point = SidePoint { side, x, y };
    let s = side_to_perimeter(table, &side_point)?;
    Ok(ReboundPoint { index: from.index + 1, s, side_point, incoming: dir, outgoing: dir.reflect(side) })
}

/// Ray-traces `F(1), …, F(n)`.
pub fn simulate(spec: &LaunchSpec, n: usize) -> Result<Orbit, SimError> {
    if n < 2 {
        return Err(SimError::TooFewPoints(n));
    }
    match trace(spec, n) {
        (points, None) => Ok(Orbit { spec: spec.clone(), points }),
        (_, Some(err)) => Err(err),
    }
}

/// Ray-traces up to `n` points, stopping at the first corner or repeat.
/// Returns the distinct points reached and the error that stopped the trace.
pub fn trace(spec: &LaunchSpec, n: usize) -> (Vec<ReboundPoint>, Option<SimError>) {
    let mut points = Vec::with_capacity(n);
    let mut seen: HashMap<Rational, usize> = HashMap::with_capacity(n);
    let mut current = spec.launch_point();
    while points.len() < n {
        if let Some(&first) = seen.get(current.s.value()) {
            return (points, Some(SimError::DuplicatePoint { first, second: current.index }));
        }
        seen.insert(current.s.value().clone(), current.index);
        let next = if points.len() + 1 < n { Some(step(&spec.table, &current)) } else { None };
        points.push(current);
        match next {
            Some(Ok(pt)) => current = pt,
            Some(Err(err)) => return (points, Some(err)),
            None => break,
        }
    }
    (points, None)
}

/// Result of mapping a rectangle of any shape and any rational launch slope
/// onto the perimeter-one table with a 45-degree launch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleReduction {
    pub table: Table,
    /// Factor applied to horizontal lengths.
    pub horizontal_scale: Rational,
    /// Factor applied to vertical lengths.
    pub vertical_scale: Rational,
    /// Whether perimeter lengths scale uniformly. Only then do length
    /// comparisons, such as equal weights giving equal lengths, carry back to
    /// the original table.
    pub lengths_preserved: bool,
}

/// Maps a `width × height` table with launch slope `slope` (the tangent of
/// the launch angle) to the equivalent diagonal problem.
pub fn reduce_general_angle(
    width: &Rational,
    height: &Rational,
    slope: &Rational,
) -> Result<AngleReduction, GeometryError> {
    if !width.is_positive() || !height.is_positive() || !slope.is_positive() {
        return Err(GeometryError::InvalidTable(format!(
            "width {width}, height {height} and slope {slope} must all be positive"
        )));
    }
    // Stretch y by 1/slope so the ray has slope 1, then rescale to perimeter 1.
    let stretched_height = height / slope;
    let half_perimeter = width + &stretched_height;
    let horizontal_scale = &Rational::ONE / &(&Rational::from_integer(2) * &half_perimeter);
    let vertical_scale = &horizontal_scale / slope;
    let table = make_table(width * &horizontal_scale)?;
    Ok(AngleReduction { table, horizontal_scale, vertical_scale, lengths_preserved: *slope == Rational::ONE })
}
