use crate::axioms::{is_grounded_neutral, validate_function};
use crate::error::{Error, Result};
use crate::feasibility::pvalues::{check_ordered_pair, gap_at, p_opposite};
use crate::feasibility::{
    negative_witness, single_rect_l, Extended, SandwichMethod, SandwichOutcome, SandwichResult,
};
use crate::gridfn::GridFunction;
use crate::mesh::Rect;
use ratlp::{solve, LpOutcome, LpProblem, Rational, Relation};

pub(crate) fn check_sandwich_inputs(a: &GridFunction, b: &GridFunction) -> Result<()> {
    check_ordered_pair(a, b)?;
    if !is_grounded_neutral(a) || !is_grounded_neutral(b) {
        return Err(Error::NotGroundedNeutral);
    }
    Ok(())
}

/// Feasible region of lifts s with 0 <= s <= gap and every elementary cell
/// of A + s nonnegative. Cell nonnegativity extends to all rectangles by
/// additivity, so the solutions are exactly the copulas between A and B.
pub(crate) struct SandwichPolytope {
    pub problem: LpProblem,
    pub gap_points: Vec<(usize, usize)>,
    pub slot: Vec<Vec<usize>>,
}

pub(crate) fn sandwich_polytope(a: &GridFunction, b: &GridFunction) -> SandwichPolytope {
    let mesh = a.mesh();
    let mut gap_points = Vec::new();
    let mut slot = vec![vec![usize::MAX; mesh.q() + 1]; mesh.p() + 1];
    for (i, j) in mesh.points() {
        if gap_at(a, b, (i, j)).is_positive() {
            slot[i][j] = gap_points.len();
            gap_points.push((i, j));
        }
    }
    let mut problem = LpProblem::new(gap_points.len());
    for (k, &(i, j)) in gap_points.iter().enumerate() {
        problem.upper_bounds[k] = Some(gap_at(a, b, (i, j)));
    }
    for cell in mesh.cells() {
        let mut coeffs = vec![Rational::zero(); gap_points.len()];
        for (point, sign) in corner_signs(&cell) {
            let k = slot[point.0][point.1];
            if k != usize::MAX {
                coeffs[k] += Rational::from_int(sign);
            }
        }
        problem.push_row(coeffs, Relation::Ge, -a.volume(&cell).unwrap());
    }
    SandwichPolytope { problem, gap_points, slot }
}

fn corner_signs(cell: &Rect) -> [((usize, usize), i64); 4] {
    let [sw, ne] = cell.main_corners();
    let [se, nw] = cell.opposite_corners();
    [(sw, 1), (ne, 1), (se, -1), (nw, -1)]
}

pub fn interval_is_empty(a: &GridFunction, b: &GridFunction) -> Result<bool> {
    match solve(&sandwich_polytope(a, b).problem)? {
        LpOutcome::Optimal(_) => Ok(false),
        LpOutcome::Infeasible(_) => Ok(true),
        LpOutcome::Unbounded => {
            Err(Error::Internal("feasibility problem cannot be unbounded".into()))
        }
    }
}

/// Direct answer to the sandwich question: a copula between A and B, or a
/// certificate (from the functional minimization) that none exists.
pub fn sandwich_lp_oracle(a: &GridFunction, b: &GridFunction) -> Result<SandwichResult> {
    check_sandwich_inputs(a, b)?;
    let sp = sandwich_polytope(a, b);
    let outcome = match solve(&sp.problem)? {
        LpOutcome::Optimal(sol) => {
            let mut c = a.clone();
            for (k, &(i, j)) in sp.gap_points.iter().enumerate() {
                if !sol.point[k].is_zero() {
                    let v = c.value(i, j) + &sol.point[k];
                    c.set(i, j, v);
                }
            }
            debug_assert!(validate_function(&c).is_discrete_copula());
            SandwichOutcome::Copula(c)
        }
        LpOutcome::Infeasible(_) => {
            let w = negative_witness(a, b)?.ok_or_else(|| {
                Error::Internal("empty interval but no negative certificate".into())
            })?;
            SandwichOutcome::Infeasible(w)
        }
        LpOutcome::Unbounded => {
            return Err(Error::Internal("feasibility problem cannot be unbounded".into()))
        }
    };
    Ok(SandwichResult { outcome, method: SandwichMethod::LpOracle })
}

/// Cheapest upper bound on the safe lift at x: the smallest single-rectangle
/// functional value over rectangles with x as an opposite corner.
fn min_single_opposite(a: &GridFunction, b: &GridFunction, x: (usize, usize)) -> Option<Rational> {
    let mesh = a.mesh();
    let (i, j) = x;
    let mut best: Option<Rational> = None;
    let mut consider = |r: Rect| {
        let l = single_rect_l(a, b, &r);
        if best.as_ref().is_none_or(|cur| l < *cur) {
            best = Some(l);
        }
    };
    // x as southeast corner.
    for i1 in 0..i {
        for j2 in j + 1..=mesh.q() {
            consider(Rect { i1, i2: i, j1: j, j2 });
        }
    }
    // x as northwest corner.
    for i2 in i + 1..=mesh.p() {
        for j1 in 0..j {
            consider(Rect { i1: i, i2, j1, j2: j });
        }
    }
    best
}

/// Single row-major sweep lifting the lower bound at each point by the
/// largest safe amount. Each lift keeps the interval's copulas intact, so
/// the sweep ends in a copula exactly when the original interval contains
/// one; otherwise the final pair certifies emptiness and the certificate is
/// re-derived on the original pair.
pub fn sandwich_greedy(a: &GridFunction, b: &GridFunction) -> Result<SandwichResult> {
    check_sandwich_inputs(a, b)?;
    let mut cur = a.clone();
    for x in a.mesh().points() {
        let gap = gap_at(&cur, b, x);
        if !gap.is_positive() {
            continue;
        }
        // A nonpositive single-rectangle value already pins the lift to 0.
        if min_single_opposite(&cur, b, x).is_some_and(|l| !l.is_positive()) {
            continue;
        }
        let t0 = p_opposite(&cur, b, x)?.value.min(Extended::Finite(gap));
        if let Extended::Finite(t) = t0 {
            if t.is_positive() {
                let lifted = cur.value(x.0, x.1) + t;
                cur.set(x.0, x.1, lifted);
            }
        }
    }

    // After the sweep no point admits a further lift, which is equivalent
    // to the certificate question on the final pair.
    let outcome = match negative_witness(&cur, b)? {
        None => {
            if validate_function(&cur).is_discrete_copula() {
                SandwichOutcome::Copula(cur)
            } else {
                return Err(Error::Internal(
                    "sweep ended without certificate on a non-copula".into(),
                ));
            }
        }
        Some(_) => {
            let w = negative_witness(a, b)?.ok_or_else(|| {
                Error::Internal("final pair infeasible but original pair certifies none".into())
            })?;
            SandwichOutcome::Infeasible(w)
        }
    };
    Ok(SandwichResult { outcome, method: SandwichMethod::Greedy })
}
