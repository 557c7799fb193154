//! The five weights `ω₀ … ω₄`, their lengths and elementary-segment counts.

use crate::billiard::Orbit;
use crate::rational::Rational;
use crate::segments::{
    associated_family_in, circular_order, AnalysisError, AnchorSet, AssociatedFamily, CircularOrder, Segment,
    MIN_ANALYSIS_POINTS,
};

/// Weights, lengths and counts indexed `0..5`.
///
/// `omega[0]` is the even weight and `omega[1] < omega[2]` the odd weights of
/// the segments associated with `{F(1)}`; `omega[3] < omega[4]` are the other
/// two odd weights associated with `{F(1), F(n)}`. `a[i]` is the length of the
/// associated segment of weight `omega[i]` and `counts[i]` the number of
/// elementary segments with that weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub omega: [usize; 5],
    pub a: [Rational; 5],
    pub counts: [usize; 5],
    /// The sign `ε` with `a₂ − ε·a₁ = a₀`, if one exists.
    pub epsilon: Option<i8>,
    /// The sign `δ` with `a₃ − δ·a₄ = a₀`, if one exists.
    pub delta: Option<i8>,
}

impl WeightProfile {
    /// Which class an elementary weight falls in, if any.
    pub fn class_of(&self, weight: usize) -> Option<usize> {
        self.omega.iter().position(|&w| w == weight)
    }
}

/// Everything the verifier needs about one orbit, computed once.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub n: usize,
    pub order: CircularOrder,
    pub elementary: Vec<Segment>,
    pub first_family: AssociatedFamily,
    pub both_family: AssociatedFamily,
    /// `Err(StructureViolation)` when the families do not have the expected shape.
    pub profile: Result<WeightProfile, AnalysisError>,
}

impl Analysis {
    pub fn new(orbit: &Orbit) -> Result<Self, AnalysisError> {
        let n = orbit.n();
        if n < MIN_ANALYSIS_POINTS {
            return Err(AnalysisError::TooFewPoints(n));
        }
        let order = circular_order(orbit);
        let elementary = order.elementary_segments();
        let first_family = associated_family_in(&order, AnchorSet::FIRST);
        let both_family = associated_family_in(&order, AnchorSet::BOTH);
        let profile = profile_from_parts(&elementary, &first_family, &both_family);
        Ok(Analysis { n, order, elementary, first_family, both_family, profile })
    }
}

fn describe(family: &AssociatedFamily) -> String {
    family.segments.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Extracts the profile from precomputed elementary segments and families.
pub fn profile_from_parts(
    elementary: &[Segment],
    first: &AssociatedFamily,
    both: &AssociatedFamily,
) -> Result<WeightProfile, AnalysisError> {
    let first_odd: Vec<&Segment> = first.odd().collect();
    let first_even: Vec<&Segment> = first.even().collect();
    if first_odd.len() != 2 || first_even.len() != 1 {
        return Err(AnalysisError::StructureViolation(format!(
            "{{F(1)}} family has {} odd and {} even members: {}",
            first_odd.len(),
            first_even.len(),
            describe(first)
        )));
    }
    let mut both_odd: Vec<&Segment> = both.odd().collect();
    both_odd.sort_by_key(|s| s.weight().value);
    let distinct = both_odd.windows(2).all(|w| w[0].weight().value != w[1].weight().value);
    if both_odd.len() != 4 || !distinct {
        return Err(AnalysisError::StructureViolation(format!(
            "{{F(1), F(n)}} family needs 4 odd members with distinct weights: {}",
            describe(both)
        )));
    }

    let mut low = first_odd.clone();
    low.sort_by_key(|s| s.weight().value);
    let (w1, w2) = (low[0].weight().value, low[1].weight().value);
    let rest: Vec<&Segment> =
        both_odd.iter().copied().filter(|s| s.weight().value != w1 && s.weight().value != w2).collect();
    if rest.len() != 2 {
        return Err(AnalysisError::StructureViolation(format!(
            "odd weights {w1}, {w2} of the {{F(1)}} family are not both in the {{F(1), F(n)}} family: {}",
            describe(both)
        )));
    }
    let chosen = [first_even[0], low[0], low[1], rest[0], rest[1]];
    let omega = chosen.map(|s| s.weight().value);
    let a = chosen.map(|s| s.length.clone());

    let mut counts = [0usize; 5];
    for seg in elementary {
        if let Some(i) = omega.iter().position(|&w| w == seg.weight().value) {
            counts[i] += 1;
        }
    }

    let sign_for = |x: &Rational, y: &Rational| {
        if x - y == a[0] {
            Some(1)
        } else if x + y == a[0] {
            Some(-1)
        } else {
            None
        }
    };
    let epsilon = sign_for(&a[2], &a[1]);
    let delta = sign_for(&a[3], &a[4]);

    Ok(WeightProfile { omega, a, counts, epsilon, delta })
}

/// The weight profile of an orbit with at least five points.
pub fn weight_profile(orbit: &Orbit) -> Result<WeightProfile, AnalysisError> {
    Analysis::new(orbit)?.profile
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{simulate, Direction, LaunchSpec};
    use crate::segments::Parity;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn w() -> Orbit {
        simulate(&LaunchSpec::from_parts(r("3/10"), r("1/20"), Direction::NorthEast).unwrap(), 5).unwrap()
    }

    #[test]
    fn profile_of_w() {
        let prof = weight_profile(&w()).unwrap();
        assert_eq!(prof.omega, [4, 5, 9, 3, 7]);
        assert_eq!(prof.a, ["1/5", "1/10", "3/10", "1/2", "3/10"].map(r));
        assert_eq!(prof.counts, [1, 2, 0, 0, 2]);
        assert_eq!(prof.counts.iter().sum::<usize>(), 5);
        assert_eq!((prof.epsilon, prof.delta), (Some(1), Some(1)));
        assert_eq!(prof.class_of(7), Some(4));
        assert_eq!(prof.class_of(11), None);
    }

    #[test]
    fn short_orbits_are_rejected() {
        let o = w().prefix(4);
        assert_eq!(weight_profile(&o), Err(AnalysisError::TooFewPoints(4)));
    }

    #[test]
    fn malformed_families_are_structure_violations() {
        let analysis = Analysis::new(&w()).unwrap();
        let mut first = analysis.first_family.clone();
        first.segments.retain(|s| s.parity() == Parity::Odd);
        assert!(matches!(
            profile_from_parts(&analysis.elementary, &first, &analysis.both_family),
            Err(AnalysisError::StructureViolation(_))
        ));

        let mut both = analysis.both_family.clone();
        // Duplicate an odd weight: F(4)→F(1) has weight 5, like F(1)→F(4).
        both.segments.retain(|s| (s.from, s.to) != (2, 1));
        both.segments.push(Segment { from: 4, to: 1, length: r("9/10") });
        assert!(matches!(
            profile_from_parts(&analysis.elementary, &analysis.first_family, &both),
            Err(AnalysisError::StructureViolation(_))
        ));
    }
}
