use crate::error::{Error, Result};
use crate::feasibility::pvalues::{gap_at, p_main, p_opposite};
use crate::feasibility::sandwich::{
    check_sandwich_inputs, interval_is_empty, sandwich_greedy, sandwich_polytope,
};
use crate::feasibility::{Anchor, Extended, ExtremalityReport, FailingPoint, SandwichOutcome};
use crate::gridfn::GridFunction;
use crate::par::ordered_map;
use ratlp::{solve, LpOutcome, Rational};

/// B is the upper envelope of the copulas between A and B iff every point
/// value of B is attained by one of them, i.e. the gap never exceeds the
/// opposite-corner P value; dually for A with the main-corner P value.
pub fn check_extremality(a: &GridFunction, b: &GridFunction) -> Result<ExtremalityReport> {
    check_extremality_impl(a, b, true)
}

pub fn check_extremality_seq(a: &GridFunction, b: &GridFunction) -> Result<ExtremalityReport> {
    check_extremality_impl(a, b, false)
}

fn check_extremality_impl(
    a: &GridFunction,
    b: &GridFunction,
    parallel: bool,
) -> Result<ExtremalityReport> {
    check_sandwich_inputs(a, b)?;
    if interval_is_empty(a, b)? {
        return Err(Error::EmptyInterval);
    }
    let gap_points: Vec<(usize, usize)> = a
        .mesh()
        .points()
        .into_iter()
        .filter(|&x| gap_at(a, b, x).is_positive())
        .collect();
    let per_point = ordered_map(parallel, gap_points, |x| -> Result<Vec<FailingPoint>> {
        let gap = gap_at(a, b, x);
        let mut fails = Vec::new();
        let po = p_opposite(a, b, x)?.value;
        if po < Extended::Finite(gap.clone()) {
            fails.push(FailingPoint {
                point: x,
                gap: gap.clone(),
                p_value: po,
                anchor: Anchor::Opposite,
            });
        }
        let pm = p_main(a, b, x)?.value;
        if pm < Extended::Finite(gap.clone()) {
            fails.push(FailingPoint { point: x, gap, p_value: pm, anchor: Anchor::Main });
        }
        Ok(fails)
    });
    let mut failing_points = Vec::new();
    for item in per_point {
        failing_points.extend(item?);
    }
    let upper_extremal = !failing_points.iter().any(|f| f.anchor == Anchor::Opposite);
    let lower_extremal = !failing_points.iter().any(|f| f.anchor == Anchor::Main);
    Ok(ExtremalityReport { upper_extremal, lower_extremal, failing_points })
}

/// Range of values the copulas between A and B take at x, as (min, max).
/// Independent of the P-value machinery: two passes over the feasible-lift
/// region with objective +/- s_x.
pub fn copula_range_at(
    a: &GridFunction,
    b: &GridFunction,
    x: (usize, usize),
) -> Result<(Rational, Rational)> {
    check_sandwich_inputs(a, b)?;
    a.mesh().check_point(x)?;
    let mut sp = sandwich_polytope(a, b);
    let k = sp.slot[x.0][x.1];
    let base = a.value(x.0, x.1).clone();
    let mut extremum = |sign: i64| -> Result<Rational> {
        if k != usize::MAX {
            sp.problem.objective[k] = Rational::from_int(sign);
        }
        match solve(&sp.problem)? {
            LpOutcome::Optimal(sol) => Ok(&base + sol.value * Rational::from_int(sign)),
            LpOutcome::Infeasible(_) => Err(Error::EmptyInterval),
            LpOutcome::Unbounded => {
                Err(Error::Internal("bounded lift region cannot be unbounded".into()))
            }
        }
    };
    let min = extremum(1)?;
    let max = extremum(-1)?;
    debug_assert!(min <= max);
    Ok((min, max))
}

/// A copula between A and B passing through B at x. Exists iff the interval
/// is nonempty and the gap at x stays within the opposite-corner P value;
/// built by pinning the lower bound at x and sweeping.
pub fn construct_through_point(
    a: &GridFunction,
    b: &GridFunction,
    x: (usize, usize),
) -> Result<GridFunction> {
    check_sandwich_inputs(a, b)?;
    a.mesh().check_point(x)?;
    if interval_is_empty(a, b)? {
        return Err(Error::EmptyInterval);
    }
    let gap = gap_at(a, b, x);
    if gap.is_positive() && p_opposite(a, b, x)?.value < Extended::Finite(gap) {
        return Err(Error::ConditionFails);
    }
    let mut pinned = a.clone();
    let top = b.value(x.0, x.1).clone();
    pinned.set(x.0, x.1, top);
    match sandwich_greedy(&pinned, b)?.outcome {
        SandwichOutcome::Copula(c) => Ok(c),
        SandwichOutcome::Infeasible(_) => {
            Err(Error::Internal("pinning within the safe bound emptied the interval".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::validate_function;
    use crate::fixtures;
    use crate::mesh::Mesh;
    use ratlp::r;

    #[test]
    fn degenerate_interval_is_extremal_both_ways() {
        let pi = fixtures::product(Mesh::uniform(3, 3));
        let rep = check_extremality(&pi, &pi).unwrap();
        assert!(rep.upper_extremal && rep.lower_extremal);
        assert!(rep.failing_points.is_empty());
    }

    #[test]
    fn frechet_bounds_are_extremal() {
        let mesh = Mesh::uniform(4, 4);
        let w = fixtures::frechet_lower(mesh.clone());
        let m = fixtures::frechet_upper(mesh);
        let rep = check_extremality(&w, &m).unwrap();
        assert!(rep.upper_extremal && rep.lower_extremal);
        let rep = check_extremality_seq(&w, &m).unwrap();
        assert!(rep.failing_points.is_empty());
    }

    #[test]
    fn pinned_center_breaks_the_lower_envelope() {
        // Forcing C(1/2,1/2) = 1/2 pushes all mass of X <= 1/2 below
        // Y = 1/2, so C(1/4,1/2) = 1/4 is forced and the lower bound 0
        // there is unreachable.
        let mesh = Mesh::uniform(4, 4);
        let mut a = fixtures::frechet_lower(mesh.clone());
        let m = fixtures::frechet_upper(mesh);
        a.set(2, 2, r!(1 / 2));
        let rep = check_extremality(&a, &m).unwrap();
        assert!(rep.upper_extremal);
        assert!(!rep.lower_extremal);
        let hit = rep
            .failing_points
            .iter()
            .find(|f| f.point == (1, 2))
            .expect("(1,2) must fail the lower check");
        assert_eq!(hit.anchor, Anchor::Main);
        assert_eq!(hit.gap, r!(1 / 4));
        assert_eq!(hit.p_value, Extended::Finite(r!(0)));
        assert!(rep.failing_points.iter().all(|f| f.anchor == Anchor::Main));

        // The envelope confirms the forced value.
        assert_eq!(copula_range_at(&a, &m, (1, 2)).unwrap(), (r!(1 / 4), r!(1 / 4)));
    }

    #[test]
    fn envelope_on_frechet_interval() {
        let mesh = Mesh::uniform(4, 4);
        let w = fixtures::frechet_lower(mesh.clone());
        let m = fixtures::frechet_upper(mesh);
        assert_eq!(copula_range_at(&w, &m, (2, 2)).unwrap(), (r!(0), r!(1 / 2)));
        assert_eq!(copula_range_at(&w, &m, (1, 2)).unwrap(), (r!(0), r!(1 / 4)));
        assert_eq!(copula_range_at(&w, &m, (0, 3)).unwrap(), (r!(0), r!(0)));
    }

    #[test]
    fn construct_hits_the_upper_bound() {
        let mesh = Mesh::uniform(4, 4);
        let w = fixtures::frechet_lower(mesh.clone());
        let m = fixtures::frechet_upper(mesh);
        let c = construct_through_point(&w, &m, (2, 2)).unwrap();
        assert!(validate_function(&c).is_discrete_copula());
        assert_eq!(c.value(2, 2), &r!(1 / 2));
        assert!(w.le(&c).unwrap() && c.le(&m).unwrap());
    }

    #[test]
    fn construct_refuses_unreachable_targets() {
        // Forcing C(1/2,1/2) = 0 empties the square [0,1/2]^2, so
        // C(1/4,1/2) = 0 is forced and B there is unreachable.
        let mesh = Mesh::uniform(4, 4);
        let w = fixtures::frechet_lower(mesh.clone());
        let mut b = fixtures::frechet_upper(mesh);
        b.set(2, 2, r!(0));
        assert_eq!(copula_range_at(&w, &b, (1, 2)).unwrap(), (r!(0), r!(0)));
        assert_eq!(construct_through_point(&w, &b, (1, 2)).unwrap_err(), Error::ConditionFails);
        // Same pair through an unconstrained point still works.
        let c = construct_through_point(&w, &b, (3, 1)).unwrap();
        assert_eq!(c.value(3, 1), b.value(3, 1));
    }

    #[test]
    fn empty_interval_is_reported() {
        let a = fixtures::ex10_lower();
        let b = fixtures::ex10_upper();
        assert_eq!(check_extremality(&a, &b).unwrap_err(), Error::EmptyInterval);
        assert_eq!(copula_range_at(&a, &b, (5, 5)).unwrap_err(), Error::EmptyInterval);
        assert_eq!(construct_through_point(&a, &b, (5, 5)).unwrap_err(), Error::EmptyInterval);
    }
}
