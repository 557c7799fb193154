//! The unfolding oracle.
//!
//! Reflecting the table instead of the ray turns the trajectory into a
//! straight line `(x₀ + dx·t, y₀ + dy·t)`. With slope ±1 both coordinates
//! advance by exactly `t`, so the ball meets a vertical wall at the times
//! `t ≡ −dx·x₀ (mod p)` and a horizontal wall at `t ≡ −dy·y₀ (mod q)`. The
//! rebound sequence is the ascending merge of these two arithmetic
//! progressions, folded back into the rectangle by tent maps. Nothing here
//! shares code with [`crate::billiard::step`].

use std::collections::{BTreeSet, HashMap};

use crate::billiard::{Direction, LaunchSpec, Orbit, ReboundPoint, SimError};
use crate::perimeter::{side_to_perimeter, Side, SidePoint};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallKind {
    Vertical,
    Horizontal,
    /// Both progressions share this time.
    Corner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallHit {
    pub t: Rational,
    pub kind: WallKind,
}

/// Ascending merge of the vertical-wall and horizontal-wall hit times.
#[derive(Debug, Clone)]
pub struct HitTimes {
    next_vertical: Rational,
    next_horizontal: Rational,
    p: Rational,
    q: Rational,
}

impl Iterator for HitTimes {
    type Item = WallHit;

    fn next(&mut self) -> Option<WallHit> {
        let hit = match self.next_vertical.cmp(&self.next_horizontal) {
            std::cmp::Ordering::Less => {
                let t = self.next_vertical.clone();
                self.next_vertical = &self.next_vertical + &self.p;
                WallHit { t, kind: WallKind::Vertical }
            }
            std::cmp::Ordering::Greater => {
                let t = self.next_horizontal.clone();
                self.next_horizontal = &self.next_horizontal + &self.q;
                WallHit { t, kind: WallKind::Horizontal }
            }
            std::cmp::Ordering::Equal => {
                let t = self.next_vertical.clone();
                self.next_vertical = &self.next_vertical + &self.p;
                self.next_horizontal = &self.next_horizontal + &self.q;
                WallHit { t, kind: WallKind::Corner }
            }
        };
        Some(hit)
    }
}

/// Smallest positive `t` with `t ≡ residue (mod period)`.
fn first_positive(residue: &Rational, period: &Rational) -> Rational {
    let r = residue.rem_euclid(period);
    if r.is_zero() {
        period.clone()
    } else {
        r
    }
}

fn signed(v: &Rational, sign: i8) -> Rational {
    if sign > 0 {
        v.clone()
    } else {
        -v
    }
}

/// Infinite stream of wall-hit times after the launch.
pub fn hit_times(spec: &LaunchSpec) -> HitTimes {
    let (p, q) = (spec.table().p().clone(), spec.table().q().clone());
    let start = spec.start();
    let dir = spec.dir();
    HitTimes {
        next_vertical: first_positive(&-signed(&start.x, dir.dx()), &p),
        next_horizontal: first_positive(&-signed(&start.y, dir.dy()), &q),
        p,
        q,
    }
}

/// The first `n - 1` hit times, i.e. the times of `F(2), …, F(n)`.
pub fn rebound_times(spec: &LaunchSpec, n: usize) -> Result<Vec<Rational>, SimError> {
    if n < 2 {
        return Err(SimError::TooFewPoints(n));
    }
    let mut out = Vec::with_capacity(n - 1);
    for (i, hit) in hit_times(spec).take(n - 1).enumerate() {
        if hit.kind == WallKind::Corner {
            let (x, y) = unfolded_position(spec, &hit.t);
            return Err(SimError::CornerHit { index: i + 2, x, y });
        }
        out.push(hit.t);
    }
    Ok(out)
}

/// Tent map of period `2·side` onto `[0, side]`; also reports whether the
/// folded coordinate is currently moving in the unfolded direction.
fn tent(v: &Rational, side: &Rational) -> (Rational, bool) {
    let period = side + side;
    let u = v.rem_euclid(&period);
    if u <= *side {
        (u, true)
    } else {
        (&period - &u, false)
    }
}

fn unfolded_position(spec: &LaunchSpec, t: &Rational) -> (Rational, Rational) {
    let start = spec.start();
    let dir = spec.dir();
    let x = tent(&(&start.x + &signed(t, dir.dx())), spec.table().p()).0;
    let y = tent(&(&start.y + &signed(t, dir.dy())), spec.table().q()).0;
    (x, y)
}

/// Number of progression terms `first, first + step, …` not exceeding `t`.
fn terms_up_to(first: &Rational, step: &Rational, t: &Rational) -> usize {
    if t < first {
        return 0;
    }
    let k = ((t - first) / step).floor();
    k.to_i64().expect("hit count fits in i64") as usize + 1
}

/// Folds the unfolded line back into the table at hit time `t`.
pub fn fold_time_to_point(spec: &LaunchSpec, t: &Rational) -> Result<ReboundPoint, SimError> {
    let table = spec.table();
    let (p, q) = (table.p(), table.q());
    let start = spec.start();
    let dir = spec.dir();
    let (x, x_forward) = tent(&(&start.x + &signed(t, dir.dx())), p);
    let (y, y_forward) = tent(&(&start.y + &signed(t, dir.dy())), q);
    let on_vertical = x.is_zero() || x == *p;
    let on_horizontal = y.is_zero() || y == *q;

    let times = hit_times(spec);
    let index = 1 + terms_up_to(&times.next_vertical, p, t) + terms_up_to(&times.next_horizontal, q, t);

    let (side, outgoing) = match (on_vertical, on_horizontal) {
        // A corner time belongs to both progressions.
        (true, true) => return Err(SimError::CornerHit { index: index - 1, x, y }),
        (false, false) => return Err(SimError::NotAWallHit(t.clone())),
        (true, false) => {
            let vy = if y_forward { dir.dy() } else { -dir.dy() };
            if x.is_zero() {
                (Side::Left, Direction::from_signs(1, vy))
            } else {
                (Side::Right, Direction::from_signs(-1, vy))
            }
        }
        (false, true) => {
            let vx = if x_forward { dir.dx() } else { -dir.dx() };
            if y.is_zero() {
                (Side::Bottom, Direction::from_signs(vx, 1))
            } else {
                (Side::Top, Direction::from_signs(vx, -1))
            }
        }
    };
    let side_point = SidePoint { side, x, y };
    let s = side_to_perimeter(table, &side_point)?;
    Ok(ReboundPoint { index, s, side_point, incoming: outgoing.reflect(side), outgoing })
}

/// Builds `F(1), …, F(n)` from the merged hit times. Errors match
/// [`crate::billiard::simulate`]: the first corner or repeated point wins.
pub fn simulate_unfolded(spec: &LaunchSpec, n: usize) -> Result<Orbit, SimError> {
    if n < 2 {
        return Err(SimError::TooFewPoints(n));
    }
    let mut points = vec![spec.launch_point()];
    let mut seen: HashMap<Rational, usize> = HashMap::from([(spec.s1().value().clone(), 1)]);
    for (i, hit) in hit_times(spec).take(n - 1).enumerate() {
        if hit.kind == WallKind::Corner {
            let (x, y) = unfolded_position(spec, &hit.t);
            return Err(SimError::CornerHit { index: i + 2, x, y });
        }
        let pt = fold_time_to_point(spec, &hit.t)?;
        if let Some(&first) = seen.get(pt.s.value()) {
            return Err(SimError::DuplicatePoint { first, second: pt.index });
        }
        seen.insert(pt.s.value().clone(), pt.index);
        points.push(pt);
    }
    Orbit::from_points(spec.clone(), points)
}

/// Distinct consecutive gaps among `times`, starting from launch time 0.
pub fn time_gaps(times: &[Rational]) -> BTreeSet<Rational> {
    let mut prev = Rational::ZERO;
    let mut gaps = BTreeSet::new();
    for t in times {
        gaps.insert(t - &prev);
        prev = t.clone();
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{simulate, step};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn w() -> LaunchSpec {
        LaunchSpec::from_parts(r("3/10"), r("1/20"), Direction::NorthEast).unwrap()
    }

    #[test]
    fn w_times() {
        assert_eq!(rebound_times(&w(), 5).unwrap(), ["1/5", "1/4", "2/5", "11/20"].map(r));
    }

    #[test]
    fn square_times_have_equal_gaps() {
        let sq = LaunchSpec::from_parts(r("1/4"), r("1/8"), Direction::NorthEast).unwrap();
        // Alternating vertical (1/8, 3/8, ...) and horizontal (1/4, 1/2, ...) walls.
        let times = rebound_times(&sq, 6).unwrap();
        assert_eq!(times, ["1/8", "1/4", "3/8", "1/2", "5/8"].map(r));
        assert_eq!(time_gaps(&times).into_iter().collect::<Vec<_>>(), vec![r("1/8")]);
    }

    #[test]
    fn corner_times_are_reported() {
        let cornered = LaunchSpec::from_parts(r("3/8"), r("1/4"), Direction::NorthEast).unwrap();
        assert_eq!(rebound_times(&cornered, 3), Err(SimError::CornerHit { index: 2, x: r("3/8"), y: r("1/8") }));
        assert!(matches!(fold_time_to_point(&cornered, &r("1/8")), Err(SimError::CornerHit { index: 2, .. })));
    }

    #[test]
    fn folds_match_ray_tracing_on_w() {
        let spec = w();
        let mut cur = spec.launch_point();
        for (t, s) in [("1/5", "11/20"), ("1/4", "9/20"), ("2/5", "3/20")] {
            let next = step(spec.table(), &cur).unwrap();
            let folded = fold_time_to_point(&spec, &r(t)).unwrap();
            assert_eq!(folded, next);
            assert_eq!(folded.s.value(), &r(s));
            cur = next;
        }
        let third = fold_time_to_point(&spec, &r("2/5")).unwrap();
        assert_eq!(third.side_point, SidePoint { side: Side::Bottom, x: r("3/20"), y: r("0") });
    }

    #[test]
    fn non_hit_times_are_rejected() {
        assert_eq!(fold_time_to_point(&w(), &r("1/10")), Err(SimError::NotAWallHit(r("1/10"))));
    }

    #[test]
    fn unfolded_orbit_matches_on_small_cases() {
        for (p, s1, dir, n) in [
            ("3/10", "1/20", Direction::NorthEast, 5),
            ("1/4", "1/8", Direction::NorthEast, 5),
            ("3/8", "1/4", Direction::NorthEast, 4),
            ("2/7", "5/9", Direction::SouthWest, 40),
        ] {
            let spec = LaunchSpec::from_parts(r(p), r(s1), dir).unwrap();
            assert_eq!(simulate(&spec, n), simulate_unfolded(&spec, n), "{p} {s1} {dir} {n}");
        }
    }
}
