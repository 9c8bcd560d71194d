use crate::error::{Error, Result};
use crate::feasibility::pvalues::{check_ordered_pair, gap_at};
use crate::feasibility::Witness;
use crate::gridfn::GridFunction;
use crate::mesh::{Rect, RectUnion};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use ratlp::{solve, LpOutcome, LpProblem, Rational, Relation};

/// Minimum of the L-functional over cone weights normalized to total cell
/// weight 1. Strictly negative optimum certifies that no copula fits the
/// interval; the optimal vertex scales to an integer multiset.
///
/// Formulation: weights mu_c >= 0 per elementary cell (every rectangle is a
/// cell sum, so cells span the cone), surplus n_y >= 0 per positive-gap
/// point with n_y >= -m(y), objective sum gap(y) n_y + sum V_B(c) mu_c.
/// At the optimum n_y is the negative part of m(y), making the objective
/// B at positive multiplicities and A at negative ones.
pub fn negative_witness(a: &GridFunction, b: &GridFunction) -> Result<Option<Witness>> {
    check_ordered_pair(a, b)?;
    let mesh = a.mesh();
    let cells = mesh.cells();

    let mut gap_points = Vec::new();
    let mut slot = vec![vec![usize::MAX; mesh.q() + 1]; mesh.p() + 1];
    for (i, j) in mesh.points() {
        if gap_at(a, b, (i, j)).is_positive() {
            slot[i][j] = gap_points.len();
            gap_points.push((i, j));
        }
    }
    let n = gap_points.len();
    let mu0 = n;
    let num_vars = n + cells.len();

    let mut problem = LpProblem::new(num_vars);
    for (k, &(i, j)) in gap_points.iter().enumerate() {
        problem.objective[k] = gap_at(a, b, (i, j));
    }
    for (c, cell) in cells.iter().enumerate() {
        problem.objective[mu0 + c] = b.volume(cell).unwrap();
    }

    // -n_y - sum_c m_c(y) mu_c <= 0 for every positive-gap point.
    let mut rows = vec![vec![Rational::zero(); num_vars]; n];
    for (c, cell) in cells.iter().enumerate() {
        for (point, sign) in cell
            .main_corners()
            .into_iter()
            .zip([1i64, 1])
            .chain(cell.opposite_corners().into_iter().zip([-1, -1]))
        {
            let k = slot[point.0][point.1];
            if k != usize::MAX {
                rows[k][mu0 + c] -= Rational::from_int(sign);
            }
        }
    }
    for (k, mut coeffs) in rows.into_iter().enumerate() {
        coeffs[k] = Rational::from_int(-1);
        problem.push_row(coeffs, Relation::Le, Rational::zero());
    }
    let mut norm = vec![Rational::zero(); num_vars];
    for c in 0..cells.len() {
        norm[mu0 + c] = Rational::one();
    }
    problem.push_row(norm, Relation::Eq, Rational::one());

    let sol = match solve(&problem)? {
        LpOutcome::Optimal(sol) => sol,
        _ => {
            return Err(Error::Internal(
                "normalized functional minimization must have an optimum".into(),
            ))
        }
    };
    if !sol.value.is_negative() {
        return Ok(None);
    }

    let weights: Vec<(Rect, &Rational)> = cells
        .iter()
        .enumerate()
        .filter(|(c, _)| !sol.point[mu0 + c].is_zero())
        .map(|(c, cell)| (*cell, &sol.point[mu0 + c]))
        .collect();
    let mut lcm = BigInt::one();
    for (_, w) in &weights {
        lcm = lcm.lcm(w.denom());
    }
    let mut union = RectUnion::new();
    for (cell, w) in &weights {
        let count = (w.numer() * &lcm) / w.denom();
        let count = count
            .to_u64()
            .ok_or_else(|| Error::Internal("witness count exceeds u64".into()))?;
        if count > 0 {
            union.push(*cell, count);
        }
    }
    let witness = Witness::build(a, b, union)?;
    let expected = &sol.value * Rational::from_big(num_rational::BigRational::from(lcm));
    if witness.l_value != expected {
        return Err(Error::Internal(format!(
            "witness value {} disagrees with scaled optimum {}",
            witness.l_value, expected
        )));
    }
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::l_functional_union;
    use crate::fixtures;
    use crate::mesh::Mesh;

    #[test]
    fn product_interval_has_no_witness() {
        let c = fixtures::product(Mesh::uniform(3, 3));
        assert!(negative_witness(&c, &c).unwrap().is_none());
        let w = fixtures::frechet_lower(Mesh::uniform(4, 4));
        let m = fixtures::frechet_upper(Mesh::uniform(4, 4));
        assert!(negative_witness(&w, &m).unwrap().is_none());
    }

    #[test]
    fn seven_cell_pair_verdict_is_consistent() {
        let a = fixtures::ex7_lower();
        let b = fixtures::ex7_upper();
        if let Some(w) = negative_witness(&a, &b).unwrap() {
            assert!(w.l_value.is_negative());
            assert_eq!(l_functional_union(&a, &b, &w.union).unwrap(), w.l_value);
        }
    }

    #[test]
    fn ten_cell_pair_has_a_witness() {
        let a = fixtures::ex10_lower();
        let b = fixtures::ex10_upper();
        let w = negative_witness(&a, &b).unwrap().expect("interval is empty");
        assert!(w.l_value.is_negative());
        // Independent recomputation on the returned multiset.
        assert_eq!(l_functional_union(&a, &b, &w.union).unwrap(), w.l_value);
        // The hand-built region is a second, known-good certificate.
        let region = fixtures::ex10_witness_region();
        let w2 = Witness::build(&a, &b, region).unwrap();
        assert!(w2.l_value.is_negative());
    }
}
