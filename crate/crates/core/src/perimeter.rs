//! The rectangle and its perimeter parametrization.
//!
//! Perimeter coordinates run counterclockwise from the corner `(0, 0)`:
//! bottom side on `(0, p)`, right side on `(p, p+q)`, top side on
//! `(p+q, 2p+q)` and left side on `(2p+q, 1)`. The four corners sit at
//! `0, p, p+q, 2p+q`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("perimeter coordinate {0} is a corner")]
    CornerCoordinate(Rational),
    #[error("perimeter coordinate {0} is outside [0, 1)")]
    OutOfRange(Rational),
    #[error("point ({x}, {y}) is not on the {side} side")]
    OffBoundary { side: Side, x: Rational, y: Rational },
    #[error("arc endpoints coincide at {0}")]
    DegenerateArc(Rational),
}

/// A rectangle with sides `p` (horizontal) and `q` (vertical), `2(p+q) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Table {
    p: Rational,
    q: Rational,
}

/// Builds the table with horizontal side `p` and vertical side `1/2 - p`.
pub fn make_table(p: Rational) -> Result<Table, GeometryError> {
    let half = Rational::new(1, 2);
    if !p.is_positive() || p >= half {
        return Err(GeometryError::InvalidTable(format!("horizontal side {p} must lie strictly between 0 and 1/2")));
    }
    let q = &half - &p;
    Ok(Table { p, q })
}

impl Table {
    pub fn new(p: Rational) -> Result<Self, GeometryError> {
        make_table(p)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// Perimeter coordinates of the corners, in counterclockwise order from `(0, 0)`.
    pub fn corners(&self) -> [Rational; 4] {
        let pq = &self.p + &self.q;
        [Rational::ZERO, self.p.clone(), pq.clone(), &pq + &self.p]
    }

    pub fn is_corner(&self, s: &Rational) -> bool {
        self.corners().iter().any(|c| c == s)
    }

    /// Which side a non-corner coordinate lies on.
    pub fn side_of(&self, s: &PerimeterCoord) -> Result<Side, GeometryError> {
        let s = s.value();
        let [_, c1, c2, c3] = self.corners();
        match () {
            _ if s.is_zero() || *s == c1 || *s == c2 || *s == c3 => Err(GeometryError::CornerCoordinate(s.clone())),
            _ if *s < c1 => Ok(Side::Bottom),
            _ if *s < c2 => Ok(Side::Right),
            _ if *s < c3 => Ok(Side::Top),
            _ => Ok(Side::Left),
        }
    }
}

/// A position on the perimeter, measured counterclockwise from `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PerimeterCoord(Rational);

impl PerimeterCoord {
    pub fn new(s: Rational) -> Result<Self, GeometryError> {
        if s.is_negative() || s >= Rational::ONE {
            return Err(GeometryError::OutOfRange(s));
        }
        Ok(PerimeterCoord(s))
    }

    /// Reduces any rational modulo 1 onto the perimeter.
    pub fn wrapping(s: &Rational) -> Self {
        PerimeterCoord(s.fract())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl fmt::Display for PerimeterCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Bottom => "bottom",
            Side::Right => "right",
            Side::Top => "top",
            Side::Left => "left",
        })
    }
}

/// A non-corner boundary point in cartesian form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SidePoint {
    pub side: Side,
    pub x: Rational,
    pub y: Rational,
}

impl SidePoint {
    /// Checks that `(x, y)` lies in the open interior of `side` on `table`.
    pub fn new(table: &Table, side: Side, x: Rational, y: Rational) -> Result<Self, GeometryError> {
        let open = |v: &Rational, hi: &Rational| v.is_positive() && v < hi;
        let ok = match side {
            Side::Bottom => y.is_zero() && open(&x, &table.p),
            Side::Top => y == table.q && open(&x, &table.p),
            Side::Left => x.is_zero() && open(&y, &table.q),
            Side::Right => x == table.p && open(&y, &table.q),
        };
        if ok {
            Ok(SidePoint { side, x, y })
        } else {
            Err(GeometryError::OffBoundary { side, x, y })
        }
    }
}

pub fn perimeter_to_side(table: &Table, s: &PerimeterCoord) -> Result<SidePoint, GeometryError> {
    let side = table.side_of(s)?;
    let (p, q) = (&table.p, &table.q);
    let s = s.value();
    let (x, y) = match side {
        Side::Bottom => (s.clone(), Rational::ZERO),
        Side::Right => (p.clone(), s - p),
        Side::Top => (&(&(p + q) + p) - s, q.clone()),
        // q - (s - (2p + q)) = 1 - s, using 2(p + q) = 1
        Side::Left => (Rational::ZERO, &Rational::ONE - s),
    };
    Ok(SidePoint { side, x, y })
}

pub fn side_to_perimeter(table: &Table, point: &SidePoint) -> Result<PerimeterCoord, GeometryError> {
    let point = SidePoint::new(table, point.side, point.x.clone(), point.y.clone())?;
    let (p, q) = (&table.p, &table.q);
    let s = match point.side {
        Side::Bottom => point.x,
        Side::Right => p + &point.y,
        Side::Top => &(&(p + q) + p) - &point.x,
        Side::Left => &Rational::ONE - &point.y,
    };
    Ok(PerimeterCoord(s))
}

/// Counterclockwise distance from `a` to `b`, in `(0, 1)`.
pub fn ccw_arc_length(a: &PerimeterCoord, b: &PerimeterCoord) -> Result<Rational, GeometryError> {
    if a == b {
        return Err(GeometryError::DegenerateArc(a.0.clone()));
    }
    Ok(ccw_distance(&a.0, &b.0))
}

/// `(b - a) mod 1` for coordinates already known to lie in `[0, 1)`.
pub(crate) fn ccw_distance(a: &Rational, b: &Rational) -> Rational {
    let d = b - a;
    if d.is_negative() {
        d + Rational::ONE
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn c(s: &str) -> PerimeterCoord {
        PerimeterCoord::new(r(s)).unwrap()
    }

    fn w() -> Table {
        make_table(r("3/10")).unwrap()
    }

    #[test]
    fn make_table_examples() {
        let sq = make_table(r("1/4")).unwrap();
        assert_eq!(sq.q(), &r("1/4"));
        assert_eq!(w().q(), &r("1/5"));
        assert!(matches!(make_table(r("1/2")), Err(GeometryError::InvalidTable(_))));
        assert!(matches!(make_table(r("0")), Err(GeometryError::InvalidTable(_))));
        assert!(matches!(make_table(r("-1/5")), Err(GeometryError::InvalidTable(_))));
    }

    #[test]
    fn perimeter_to_side_examples() {
        let t = w();
        let b = perimeter_to_side(&t, &c("1/20")).unwrap();
        assert_eq!((b.side, b.x, b.y), (Side::Bottom, r("1/20"), r("0")));
        let rt = perimeter_to_side(&t, &c("9/20")).unwrap();
        assert_eq!((rt.side, rt.x, rt.y), (Side::Right, r("3/10"), r("3/20")));
        assert_eq!(perimeter_to_side(&t, &c("3/10")), Err(GeometryError::CornerCoordinate(r("3/10"))));
        for corner in t.corners() {
            assert!(perimeter_to_side(&t, &PerimeterCoord::new(corner).unwrap()).is_err());
        }
    }

    #[test]
    fn right_side_point_matches_side_scan() {
        // Scan the four open side intervals independently of `side_of`.
        let t = w();
        let s = r("9/20");
        let bounds = [r("0"), r("3/10"), r("1/2"), r("4/5"), r("1")];
        let hits: Vec<usize> = (0..4).filter(|&i| bounds[i] < s && s < bounds[i + 1]).collect();
        assert_eq!(hits, vec![1]);
        assert_eq!(side_to_perimeter(&t, &perimeter_to_side(&t, &c("9/20")).unwrap()).unwrap(), c("9/20"));
    }

    #[test]
    fn side_to_perimeter_examples() {
        let t = w();
        let top = SidePoint { side: Side::Top, x: r("1/4"), y: r("1/5") };
        assert_eq!(side_to_perimeter(&t, &top).unwrap(), c("11/20"));
        assert_eq!(perimeter_to_side(&t, &c("11/20")).unwrap(), top);
        let left = SidePoint { side: Side::Left, x: r("0"), y: r("3/20") };
        assert_eq!(side_to_perimeter(&t, &left).unwrap(), c("17/20"));
        assert_eq!(perimeter_to_side(&t, &c("17/20")).unwrap(), left);
        let corner = SidePoint { side: Side::Bottom, x: r("3/10"), y: r("0") };
        assert!(matches!(side_to_perimeter(&t, &corner), Err(GeometryError::OffBoundary { .. })));
    }

    #[test]
    fn arc_length_examples() {
        assert_eq!(ccw_arc_length(&c("1/20"), &c("3/20")).unwrap(), r("1/10"));
        assert_eq!(ccw_arc_length(&c("17/20"), &c("1/20")).unwrap(), r("1/5"));
        assert_eq!(ccw_arc_length(&c("1/4"), &c("1/4")), Err(GeometryError::DegenerateArc(r("1/4"))));
    }

    #[test]
    fn coordinate_range_is_enforced() {
        assert!(PerimeterCoord::new(r("1")).is_err());
        assert!(PerimeterCoord::new(r("-1/3")).is_err());
        assert_eq!(PerimeterCoord::wrapping(&r("-1/4")), c("3/4"));
    }
}
