use crate::error::{Error, Result};
use crate::feasibility::pvalues::check_ordered_pair;
use crate::feasibility::{Anchor, Extended};
use crate::gridfn::GridFunction;
use crate::mesh::Rect;
use ratlp::{solve, LpOutcome, LpProblem, Rational, Relation};

/// Hard cap on DFS nodes; instances above it are refused rather than left
/// to run for hours.
const BUDGET: u128 = 5_000_000;

/// Number of nonempty multisets of size <= d over r elements, C(r+d, d) - 1.
fn multiset_nodes(r: usize, d: usize) -> Option<u128> {
    let mut binom: u128 = 1;
    for k in 1..=d as u128 {
        binom = binom.checked_mul(r as u128 + k)?;
        binom /= k;
    }
    Some(binom - 1)
}

struct Search<'f> {
    a: &'f GridFunction,
    b: &'f GridFunction,
    rects: Vec<Rect>,
    x: (usize, usize),
    anchor: Anchor,
    m: Vec<Vec<i64>>,
    l: Rational,
    best: Option<Rational>,
}

impl Search<'_> {
    fn term(&self, (i, j): (usize, usize), m: i64) -> Rational {
        use std::cmp::Ordering::*;
        match m.cmp(&0) {
            Greater => self.b.value(i, j) * Rational::from_int(m),
            Less => self.a.value(i, j) * Rational::from_int(m),
            Equal => Rational::zero(),
        }
    }

    fn touch(&mut self, point: (usize, usize), d: i64) {
        let old = self.m[point.0][point.1];
        let new = old + d;
        self.l += self.term(point, new) - self.term(point, old);
        self.m[point.0][point.1] = new;
    }

    fn apply(&mut self, r: &Rect, delta: i64) {
        for c in r.main_corners() {
            self.touch(c, delta);
        }
        for c in r.opposite_corners() {
            self.touch(c, -delta);
        }
    }

    fn visit(&mut self) {
        let mx = self.m[self.x.0][self.x.1];
        let usable = match self.anchor {
            Anchor::Opposite => mx < 0,
            Anchor::Main => mx > 0,
        };
        if usable {
            let cand = &self.l / Rational::from_int(mx.abs());
            if self.best.as_ref().is_none_or(|cur| cand < *cur) {
                self.best = Some(cand);
            }
        }
    }

    fn dfs(&mut self, start: usize, depth_left: usize) {
        for idx in start..self.rects.len() {
            let r = self.rects[idx];
            self.apply(&r, 1);
            self.visit();
            if depth_left > 1 {
                self.dfs(idx, depth_left - 1);
            }
            self.apply(&r, -1);
        }
    }
}

/// Exhaustive minimum of L(R)/|m_R(x)| over rectangle multisets of total
/// count <= max_total whose multiplicity at x has the anchor's sign.
/// Infimum of the empty set is +inf. The search walks multisets in
/// nondecreasing rectangle order, maintaining the multiplicity matrix and
/// functional value incrementally.
pub fn brute_force_p(
    a: &GridFunction,
    b: &GridFunction,
    x: (usize, usize),
    anchor: Anchor,
    max_total: usize,
) -> Result<Extended> {
    check_ordered_pair(a, b)?;
    let mesh = a.mesh();
    mesh.check_point(x)?;
    let rects = mesh.rects();
    match multiset_nodes(rects.len(), max_total) {
        Some(n) if n <= BUDGET => {}
        _ => return Err(Error::TooLarge),
    }
    let mut search = Search {
        a,
        b,
        rects,
        x,
        anchor,
        m: vec![vec![0; mesh.q() + 1]; mesh.p() + 1],
        l: Rational::zero(),
        best: None,
    };
    if max_total >= 1 {
        search.dfs(0, max_total);
    }
    debug_assert!(search.l.is_zero());
    Ok(search.best.map(Extended::Finite).unwrap_or(Extended::PlusInfinity))
}

/// The same minimization without the depth cap, written as the direct
/// linear program over fractional multisets of every grid rectangle:
/// variables c_r >= 0 normalized to multiplicity -1 (opposite) or +1 (main)
/// at x, with the positive/negative parts of the induced multiplicity at
/// every other point split into pi/nu pairs priced at B and A. Small meshes
/// only; the production path reduces to cells instead.
pub fn p_value_all_rects(
    a: &GridFunction,
    b: &GridFunction,
    x: (usize, usize),
    anchor: Anchor,
) -> Result<Extended> {
    check_ordered_pair(a, b)?;
    let mesh = a.mesh();
    mesh.check_point(x)?;
    let rects = mesh.rects();
    let points: Vec<(usize, usize)> =
        mesh.points().into_iter().filter(|&y| y != x).collect();
    let nr = rects.len();
    let np = points.len();

    let mut problem = LpProblem::new(nr + 2 * np);
    for (k, &(i, j)) in points.iter().enumerate() {
        problem.objective[nr + k] = b.value(i, j).clone();
        problem.objective[nr + np + k] = -a.value(i, j);
    }
    for (k, &y) in points.iter().enumerate() {
        let mut coeffs = vec![Rational::zero(); nr + 2 * np];
        coeffs[nr + k] = Rational::one();
        coeffs[nr + np + k] = -Rational::one();
        for (ri, r) in rects.iter().enumerate() {
            let mr = r.multiplicity_at(y);
            if mr != 0 {
                coeffs[ri] = Rational::from_int(-mr);
            }
        }
        problem.push_row(coeffs, Relation::Eq, Rational::zero());
    }
    let sign = match anchor {
        Anchor::Opposite => -1,
        Anchor::Main => 1,
    };
    let mut coeffs = vec![Rational::zero(); nr + 2 * np];
    for (ri, r) in rects.iter().enumerate() {
        let mr = r.multiplicity_at(x);
        if mr != 0 {
            coeffs[ri] = Rational::from_int(sign * mr);
        }
    }
    problem.push_row(coeffs, Relation::Eq, Rational::one());

    let constant = match anchor {
        Anchor::Opposite => -a.value(x.0, x.1),
        Anchor::Main => b.value(x.0, x.1).clone(),
    };
    Ok(match solve(&problem)? {
        LpOutcome::Optimal(sol) => Extended::Finite(sol.value + constant),
        LpOutcome::Infeasible(_) => Extended::PlusInfinity,
        LpOutcome::Unbounded => Extended::MinusInfinity,
    })
}
