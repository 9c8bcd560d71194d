use crate::error::{Error, Result};
use crate::feasibility::{Anchor, Extended, PValue};
use crate::gridfn::GridFunction;
use crate::mesh::{Mesh, Rect, RectUnion};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use ratlp::{solve, LpOutcome, LpProblem, Rational, Relation};

pub(crate) fn gap_at(a: &GridFunction, b: &GridFunction, x: (usize, usize)) -> Rational {
    b.value(x.0, x.1) - a.value(x.0, x.1)
}

pub(crate) fn check_ordered_pair(a: &GridFunction, b: &GridFunction) -> Result<()> {
    a.same_mesh(b)?;
    if !a.le(b)? {
        return Err(Error::OrderViolated);
    }
    Ok(())
}

/// Whether any rectangle multiset can put the required multiplicity sign at
/// x. Only the main diagonal corners can never be opposite corners, and only
/// the anti-diagonal corners can never be main corners.
fn capable(mesh: &Mesh, x: (usize, usize), anchor: Anchor) -> bool {
    let (p, q) = (mesh.p(), mesh.q());
    match anchor {
        Anchor::Opposite => x != (0, 0) && x != (p, q),
        Anchor::Main => x != (p, 0) && x != (0, q),
    }
}

/// One-point completion problem: values u = A + s at points with positive
/// gap (0 <= s <= gap), u free at x itself via a sign split, and every
/// elementary cell nonnegative. Extremizing u(x) over this polytope yields
/// the P values: the problem is the LP dual of minimizing the L-functional
/// over the rectangle cone with the multiplicity at x pinned to -1 (resp.
/// +1), so its optimum equals the defining infimum.
fn completion_lp(
    a: &GridFunction,
    b: &GridFunction,
    x: (usize, usize),
    anchor: Anchor,
) -> LpProblem {
    let mesh = a.mesh();
    let mut gap_points = Vec::new();
    let mut slot = vec![vec![usize::MAX; mesh.q() + 1]; mesh.p() + 1];
    for (i, j) in mesh.points() {
        if (i, j) != x && gap_at(a, b, (i, j)).is_positive() {
            slot[i][j] = gap_points.len();
            gap_points.push((i, j));
        }
    }
    let n = gap_points.len();
    let (t_plus, t_minus) = (n, n + 1);

    let mut problem = LpProblem::new(n + 2);
    for (k, &(i, j)) in gap_points.iter().enumerate() {
        problem.upper_bounds[k] = Some(gap_at(a, b, (i, j)));
    }
    match anchor {
        // Push u(x) as high as possible: min t_minus - t_plus.
        Anchor::Opposite => {
            problem.objective[t_plus] = Rational::from_int(-1);
            problem.objective[t_minus] = Rational::one();
        }
        // Pull u(x) as low as possible: min t_plus - t_minus.
        Anchor::Main => {
            problem.objective[t_plus] = Rational::one();
            problem.objective[t_minus] = Rational::from_int(-1);
        }
    }

    for cell in mesh.cells() {
        let mut coeffs = vec![Rational::zero(); n + 2];
        let mut touch = |point: (usize, usize), sign: i64| {
            let delta = Rational::from_int(sign);
            if point == x {
                coeffs[t_plus] += &delta;
                coeffs[t_minus] -= &delta;
            } else if slot[point.0][point.1] != usize::MAX {
                coeffs[slot[point.0][point.1]] += &delta;
            }
        };
        for c in cell.main_corners() {
            touch(c, 1);
        }
        for c in cell.opposite_corners() {
            touch(c, -1);
        }
        let rhs = -a.volume(&cell).unwrap();
        problem.push_row(coeffs, Relation::Ge, rhs);
    }

    problem
}

/// Scale nonnegative rational weights per cell to coprime integer counts.
fn integer_counts(weights: &[(Rect, Rational)]) -> Option<Vec<(Rect, u64)>> {
    let mut lcm = BigInt::one();
    for (_, w) in weights {
        lcm = lcm.lcm(w.denom());
    }
    let mut out = Vec::with_capacity(weights.len());
    for (r, w) in weights {
        let count = (w.numer() * &lcm) / w.denom();
        debug_assert!(!count.is_negative());
        out.push((*r, count.to_u64()?));
    }
    Some(out)
}

/// Recover an integer multiset attaining the optimum from the duals of the
/// cell rows (they are the cone weights of the underlying minimization).
/// Validated by re-evaluating the functional; any failure degrades to None.
fn attaining_union(
    a: &GridFunction,
    b: &GridFunction,
    x: (usize, usize),
    anchor: Anchor,
    cell_duals: &[Rational],
    value: &Rational,
) -> Option<RectUnion> {
    let mesh = a.mesh();
    let cells = mesh.cells();
    debug_assert_eq!(cells.len(), cell_duals.len());
    let weights: Vec<(Rect, Rational)> = cells
        .iter()
        .zip(cell_duals)
        .filter(|(_, w)| !w.is_zero())
        .map(|(r, w)| (*r, w.clone()))
        .collect();
    if weights.is_empty() {
        return None;
    }
    let sigma: Rational = weights
        .iter()
        .map(|(r, w)| w * Rational::from_int(r.multiplicity_at(x)))
        .sum();
    let ok_sign = match anchor {
        Anchor::Opposite => sigma.is_negative(),
        Anchor::Main => sigma.is_positive(),
    };
    if !ok_sign {
        return None;
    }
    let normalized: Vec<(Rect, Rational)> =
        weights.into_iter().map(|(r, w)| (r, w / sigma.abs())).collect();
    let counts = integer_counts(&normalized)?;
    let union = RectUnion::of(counts.into_iter().filter(|(_, c)| *c > 0));
    let field = crate::mesh::multiplicity_field(&union, mesh).ok()?;
    let mx = field.value(x.0, x.1);
    let denom = match anchor {
        Anchor::Opposite if mx < 0 => -mx,
        Anchor::Main if mx > 0 => mx,
        _ => return None,
    };
    let l = super::l_functional(a, b, &field).ok()?;
    if l / Rational::from_int(denom) == *value {
        Some(union)
    } else {
        None
    }
}

fn p_value(
    a: &GridFunction,
    b: &GridFunction,
    x: (usize, usize),
    anchor: Anchor,
) -> Result<PValue> {
    check_ordered_pair(a, b)?;
    a.mesh().check_point(x)?;
    if !capable(a.mesh(), x, anchor) {
        return Ok(PValue { value: Extended::PlusInfinity, attaining: None });
    }
    let lp = completion_lp(a, b, x, anchor);
    match solve(&lp)? {
        LpOutcome::Optimal(sol) => {
            let value = match anchor {
                Anchor::Opposite => -&sol.value,
                Anchor::Main => gap_at(a, b, x) - &sol.value,
            };
            let cell_count = a.mesh().p() * a.mesh().q();
            let attaining = attaining_union(a, b, x, anchor, &sol.row_duals[..cell_count], &value);
            Ok(PValue { value: Extended::Finite(value), attaining })
        }
        // No completion exists at all: the functional is unbounded below in
        // ratios through x.
        LpOutcome::Infeasible(_) => {
            Ok(PValue { value: Extended::MinusInfinity, attaining: None })
        }
        LpOutcome::Unbounded => Err(Error::Internal(
            "completion problem unbounded at a capable point".into(),
        )),
    }
}

/// inf L(R) / (-m_R(x)) over multisets with m_R(x) < 0.
pub fn p_opposite(a: &GridFunction, b: &GridFunction, x: (usize, usize)) -> Result<PValue> {
    p_value(a, b, x, Anchor::Opposite)
}

/// inf L(R) / m_R(x) over multisets with m_R(x) > 0.
pub fn p_main(a: &GridFunction, b: &GridFunction, x: (usize, usize)) -> Result<PValue> {
    p_value(a, b, x, Anchor::Main)
}

/// Largest safe lift at x: min(P_O(x), B(x) - A(x)).
pub fn gamma(a: &GridFunction, b: &GridFunction, x: (usize, usize)) -> Result<Extended> {
    let po = p_opposite(a, b, x)?.value;
    Ok(po.min(Extended::Finite(gap_at(a, b, x))))
}
