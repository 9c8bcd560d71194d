use crate::rational::Rational;

/// Row sense of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

/// Minimization problem over nonnegative variables:
/// min c'x  s.t.  each row `a'x <= / = / >= b`,  0 <= x_j <= u_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<LpRow>,
    /// Optional upper bounds, one slot per variable. Bounds are handled as
    /// ordinary rows appended after the pushed rows, in variable order; dual
    /// and certificate vectors follow that combined ordering.
    pub upper_bounds: Vec<Option<Rational>>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
            upper_bounds: vec![None; num_vars],
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "row length mismatch");
        self.rows.push(LpRow { coeffs, rel, rhs });
    }

    /// Pushed rows followed by the upper-bound rows in variable order.
    pub fn expanded_rows(&self) -> Vec<LpRow> {
        let mut rows = self.rows.clone();
        for (j, ub) in self.upper_bounds.iter().enumerate() {
            if let Some(u) = ub {
                let mut coeffs = vec![Rational::zero(); self.num_vars];
                coeffs[j] = Rational::one();
                rows.push(LpRow { coeffs, rel: Relation::Le, rhs: u.clone() });
            }
        }
        rows
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars {
            return Err(LpError::Malformed("objective length mismatch".into()));
        }
        if !self.upper_bounds.is_empty() && self.upper_bounds.len() != self.num_vars {
            return Err(LpError::Malformed("upper_bounds length mismatch".into()));
        }
        for row in &self.rows {
            if row.coeffs.len() != self.num_vars {
                return Err(LpError::Malformed("row length mismatch".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("malformed problem: {0}")]
    Malformed(String),
    #[error("solver invariant violated: {0}")]
    Internal(String),
}

/// Optimal basic solution with exact duals.
///
/// Dual conventions for this minimization form: `Le` rows have `y <= 0`,
/// `Ge` rows `y >= 0`, `Eq` rows are free; reduced costs `c - y'A` are
/// nonnegative and vanish on variables with positive value; `y'b` equals the
/// optimal value. `row_duals` follows the `expanded_rows` ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub point: Vec<Rational>,
    pub value: Rational,
    pub row_duals: Vec<Rational>,
}

/// Infeasibility certificate: multipliers `mu` over `expanded_rows` with
/// `mu >= 0` on `Le` rows, `mu <= 0` on `Ge` rows, such that `sum mu_i a_i`
/// is componentwise nonnegative while `sum mu_i b_i < 0`. No nonnegative
/// point can satisfy all rows at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub row_multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible(FarkasCertificate),
    Unbounded,
}

/// Consecutive degenerate pivots tolerated under Dantzig pricing before the
/// pivot rule falls back to Bland's rule, which cannot cycle.
const BLAND_AFTER_DEGENERATE: usize = 12;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cost1: Vec<Rational>,
    cost2: Vec<Rational>,
    rhs: usize,
    art_start: usize,
    bland: bool,
    degen_streak: usize,
}

enum PhaseEnd {
    Done,
    Unbounded,
}

impl Tableau {
    #[cfg(feature = "dump-tableau")]
    fn dump(&self, label: &str) {
        let fmt =
            |row: &[Rational]| row.iter().map(Rational::to_string).collect::<Vec<_>>().join(" ");
        eprintln!("tableau [{label}] basis={:?} bland={}", self.basis, self.bland);
        for (i, row) in self.rows.iter().enumerate() {
            eprintln!("  r{i:<3} | {}", fmt(row));
        }
        eprintln!("  c1   | {}", fmt(&self.cost1));
        eprintln!("  c2   | {}", fmt(&self.cost2));
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        debug_assert!(!piv.is_zero());
        if piv != Rational::one() {
            let inv = piv.recip();
            for e in self.rows[r].iter_mut() {
                if !e.is_zero() {
                    *e *= &inv;
                }
            }
        }
        let prow = std::mem::take(&mut self.rows[r]);
        for i in 0..self.rows.len() {
            if i != r {
                eliminate(&mut self.rows[i], c, &prow);
            }
        }
        eliminate(&mut self.cost1, c, &prow);
        eliminate(&mut self.cost2, c, &prow);
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    fn choose_entering(&self, phase1: bool) -> Option<usize> {
        let cost = if phase1 { &self.cost1 } else { &self.cost2 };
        // Artificial columns never re-enter.
        let limit = self.art_start;
        if self.bland {
            return (0..limit).find(|&j| cost[j].is_negative());
        }
        let mut best: Option<usize> = None;
        for j in 0..limit {
            if cost[j].is_negative() && best.is_none_or(|b| cost[j] < cost[b]) {
                best = Some(j);
            }
        }
        best
    }

    fn choose_leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][c];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rows[i][self.rhs] / a;
            match &best {
                None => best = Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < *br {
                        best = Some((i, ratio));
                    } else if ratio == *br && self.bland && self.basis[i] < self.basis[*bi] {
                        best = Some((i, ratio));
                    }
                }
            }
        }
        best.map(|(i, _)| i)
    }

    fn run_phase(&mut self, phase1: bool) -> PhaseEnd {
        #[cfg(feature = "dump-tableau")]
        self.dump(if phase1 { "phase 1" } else { "phase 2" });
        loop {
            let Some(c) = self.choose_entering(phase1) else {
                return PhaseEnd::Done;
            };
            let Some(r) = self.choose_leaving(c) else {
                return PhaseEnd::Unbounded;
            };
            let degenerate = self.rows[r][self.rhs].is_zero();
            self.pivot(r, c);
            #[cfg(feature = "dump-tableau")]
            self.dump(&format!("pivot r{r} c{c}"));
            if degenerate {
                self.degen_streak += 1;
                if self.degen_streak >= BLAND_AFTER_DEGENERATE {
                    self.bland = true;
                }
            } else {
                self.degen_streak = 0;
                self.bland = false;
            }
        }
    }
}

fn eliminate(dst: &mut [Rational], c: usize, prow: &[Rational]) {
    let f = dst[c].clone();
    if f.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(prow) {
        if !s.is_zero() {
            *d -= &(&f * s);
        }
    }
}

pub fn solve(problem: &LpProblem) -> Result<LpOutcome, LpError> {
    problem.validate()?;
    let rows = problem.expanded_rows();
    let n = problem.num_vars;
    let m = rows.len();

    // Normalize to nonnegative right-hand sides; negation flips the sense.
    let mut negated = vec![false; m];
    let norm: Vec<LpRow> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.rhs.is_negative() {
                negated[i] = true;
                LpRow {
                    coeffs: row.coeffs.iter().map(|a| -a).collect(),
                    rel: match row.rel {
                        Relation::Le => Relation::Ge,
                        Relation::Eq => Relation::Eq,
                        Relation::Ge => Relation::Le,
                    },
                    rhs: -&row.rhs,
                }
            } else {
                row.clone()
            }
        })
        .collect();

    // Column layout: structural, then slack/surplus, then artificials, rhs last.
    let mut next = n;
    let mut logical_col = vec![usize::MAX; m];
    for (i, row) in norm.iter().enumerate() {
        if row.rel != Relation::Eq {
            logical_col[i] = next;
            next += 1;
        }
    }
    let art_start = next;
    let mut art_col = vec![usize::MAX; m];
    for (i, row) in norm.iter().enumerate() {
        if row.rel != Relation::Le {
            art_col[i] = next;
            next += 1;
        }
    }
    let rhs_col = next;
    let ncols = next + 1;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cost1: vec![Rational::zero(); ncols],
        cost2: vec![Rational::zero(); ncols],
        rhs: rhs_col,
        art_start,
        bland: false,
        degen_streak: 0,
    };
    for (i, row) in norm.iter().enumerate() {
        let mut t = vec![Rational::zero(); ncols];
        t[..n].clone_from_slice(&row.coeffs);
        match row.rel {
            Relation::Le => t[logical_col[i]] = Rational::one(),
            Relation::Ge => t[logical_col[i]] = -Rational::one(),
            Relation::Eq => {}
        }
        if art_col[i] != usize::MAX {
            t[art_col[i]] = Rational::one();
        }
        t[rhs_col] = row.rhs.clone();
        tab.rows.push(t);
        tab.basis.push(if art_col[i] != usize::MAX { art_col[i] } else { logical_col[i] });
    }
    tab.cost2[..n].clone_from_slice(&problem.objective);
    // Phase-1 cost is 1 on artificials, reduced against the starting basis.
    for (i, &ac) in art_col.iter().enumerate() {
        if ac != usize::MAX {
            tab.cost1[ac] = Rational::one();
            let row = tab.rows[i].clone();
            for (d, s) in tab.cost1.iter_mut().zip(&row) {
                if !s.is_zero() {
                    *d -= s;
                }
            }
        }
    }

    if matches!(tab.run_phase(true), PhaseEnd::Unbounded) {
        return Err(LpError::Internal("phase one reported unbounded".into()));
    }

    let infeasibility = -&tab.cost1[rhs_col];
    if infeasibility.is_positive() {
        let mut mu = Vec::with_capacity(m);
        for i in 0..m {
            let y = if art_col[i] != usize::MAX {
                Rational::one() - &tab.cost1[art_col[i]]
            } else {
                -&tab.cost1[logical_col[i]]
            };
            mu.push(if negated[i] { y } else { -y });
        }
        let cert = FarkasCertificate { row_multipliers: mu };
        #[cfg(debug_assertions)]
        verify_farkas(problem, &cert).map_err(LpError::Internal)?;
        return Ok(LpOutcome::Infeasible(cert));
    }
    debug_assert!(infeasibility.is_zero());

    // Drive leftover artificials out of the basis; rows that cannot pivot are
    // redundant and get dropped (their duals stay zero).
    let mut alive = vec![true; m];
    for i in 0..tab.rows.len() {
        if tab.basis[i] >= art_start {
            debug_assert!(tab.rows[i][rhs_col].is_zero());
            match (0..art_start).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => alive[i] = false,
            }
        }
    }
    if alive.contains(&false) {
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::new();
        for (i, keep) in alive.iter().enumerate() {
            if *keep {
                rows.push(std::mem::take(&mut tab.rows[i]));
                basis.push(tab.basis[i]);
            }
        }
        tab.rows = rows;
        tab.basis = basis;
    }

    if matches!(tab.run_phase(false), PhaseEnd::Unbounded) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut point = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            point[b] = tab.rows[i][rhs_col].clone();
        }
    }
    let value: Rational = problem.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    debug_assert_eq!(value, -&tab.cost2[rhs_col]);

    let mut duals = vec![Rational::zero(); m];
    for i in 0..m {
        if !alive[i] {
            continue;
        }
        let y = if art_col[i] != usize::MAX {
            -&tab.cost2[art_col[i]]
        } else {
            -&tab.cost2[logical_col[i]]
        };
        if norm[i].rel == Relation::Ge {
            debug_assert_eq!(tab.cost2[logical_col[i]], y);
        }
        duals[i] = if negated[i] { -y } else { y };
    }

    let sol = LpSolution { point, value, row_duals: duals };
    #[cfg(debug_assertions)]
    verify_optimal(problem, &sol).map_err(LpError::Internal)?;
    Ok(LpOutcome::Optimal(sol))
}

/// Checks primal feasibility, the objective value, dual signs, dual
/// feasibility and complementary slackness. Exact; any failure names the
/// violated condition.
pub fn verify_optimal(problem: &LpProblem, sol: &LpSolution) -> Result<(), String> {
    let rows = problem.expanded_rows();
    let n = problem.num_vars;
    if sol.point.len() != n {
        return Err("point length mismatch".into());
    }
    if sol.row_duals.len() != rows.len() {
        return Err("dual length mismatch".into());
    }
    for x in &sol.point {
        if x.is_negative() {
            return Err("negative variable value".into());
        }
    }
    for (i, row) in rows.iter().enumerate() {
        let lhs: Rational = row.coeffs.iter().zip(&sol.point).map(|(a, x)| a * x).sum();
        let y = &sol.row_duals[i];
        let (sat, tight) = match row.rel {
            Relation::Le => (lhs <= row.rhs, lhs == row.rhs),
            Relation::Eq => (lhs == row.rhs, true),
            Relation::Ge => (lhs >= row.rhs, lhs == row.rhs),
        };
        if !sat {
            return Err(format!("row {i} violated"));
        }
        match row.rel {
            Relation::Le if y.is_positive() => return Err(format!("row {i}: Le dual must be <= 0")),
            Relation::Ge if y.is_negative() => return Err(format!("row {i}: Ge dual must be >= 0")),
            _ => {}
        }
        if !tight && !y.is_zero() {
            return Err(format!("row {i}: slack row with nonzero dual"));
        }
    }
    let value: Rational = problem.objective.iter().zip(&sol.point).map(|(c, x)| c * x).sum();
    if value != sol.value {
        return Err("objective value mismatch".into());
    }
    for j in 0..n {
        let ya: Rational = rows.iter().zip(&sol.row_duals).map(|(r, y)| &r.coeffs[j] * y).sum();
        let rc = &problem.objective[j] - &ya;
        if rc.is_negative() {
            return Err(format!("variable {j}: dual infeasible"));
        }
        if sol.point[j].is_positive() && !rc.is_zero() {
            return Err(format!("variable {j}: complementary slackness violated"));
        }
    }
    let dual_value: Rational = rows.iter().zip(&sol.row_duals).map(|(r, y)| &r.rhs * y).sum();
    if dual_value != sol.value {
        return Err("strong duality violated".into());
    }
    Ok(())
}

/// Checks that the multipliers really prove infeasibility.
pub fn verify_farkas(problem: &LpProblem, cert: &FarkasCertificate) -> Result<(), String> {
    let rows = problem.expanded_rows();
    let mu = &cert.row_multipliers;
    if mu.len() != rows.len() {
        return Err("multiplier length mismatch".into());
    }
    for (i, row) in rows.iter().enumerate() {
        match row.rel {
            Relation::Le if mu[i].is_negative() => {
                return Err(format!("row {i}: Le multiplier must be >= 0"));
            }
            Relation::Ge if mu[i].is_positive() => {
                return Err(format!("row {i}: Ge multiplier must be <= 0"));
            }
            _ => {}
        }
    }
    for j in 0..problem.num_vars {
        let combo: Rational = rows.iter().zip(mu).map(|(r, m)| &r.coeffs[j] * m).sum();
        if combo.is_negative() {
            return Err(format!("column {j}: combination not nonnegative"));
        }
    }
    let rhs_combo: Rational = rows.iter().zip(mu).map(|(r, m)| &r.rhs * m).sum();
    if !rhs_combo.is_negative() {
        return Err("combined right-hand side not negative".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::r;

    fn optimal(outcome: LpOutcome) -> LpSolution {
        match outcome {
            LpOutcome::Optimal(s) => s,
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn single_lower_bound() {
        let mut p = LpProblem::new(1);
        p.objective = vec![r!(1)];
        p.push_row(vec![r!(1)], Relation::Ge, r!(3));
        let sol = optimal(solve(&p).unwrap());
        assert_eq!(sol.value, r!(3));
        assert_eq!(sol.point, vec![r!(3)]);
        assert_eq!(sol.row_duals, vec![r!(1)]);
    }

    #[test]
    fn empty_interval_is_infeasible() {
        let mut p = LpProblem::new(1);
        p.push_row(vec![r!(1)], Relation::Le, r!(0));
        p.push_row(vec![r!(1)], Relation::Ge, r!(1));
        match solve(&p).unwrap() {
            LpOutcome::Infeasible(cert) => verify_farkas(&p, &cert).unwrap(),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn no_rows_unbounded() {
        let mut p = LpProblem::new(1);
        p.objective = vec![r!(-1)];
        assert_eq!(solve(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn no_rows_zero_optimum() {
        let mut p = LpProblem::new(2);
        p.objective = vec![r!(1), r!(0)];
        let sol = optimal(solve(&p).unwrap());
        assert_eq!(sol.value, r!(0));
        assert_eq!(sol.point, vec![r!(0), r!(0)]);
    }

    #[test]
    fn no_vars_feasible_and_not() {
        let p = LpProblem::new(0);
        assert!(matches!(solve(&p).unwrap(), LpOutcome::Optimal(_)));
        let mut q = LpProblem::new(0);
        q.push_row(vec![], Relation::Ge, r!(1));
        match solve(&q).unwrap() {
            LpOutcome::Infeasible(cert) => verify_farkas(&q, &cert).unwrap(),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    /// Beale's example cycles under naive most-negative pricing; the Bland
    /// fallback has to terminate at the true optimum.
    #[test]
    fn beale_cycling_instance() {
        let mut p = LpProblem::new(4);
        p.objective = vec![r!(-3 / 4), r!(150), r!(-1 / 50), r!(6)];
        p.push_row(vec![r!(1 / 4), r!(-60), r!(-1 / 25), r!(9)], Relation::Le, r!(0));
        p.push_row(vec![r!(1 / 2), r!(-90), r!(-1 / 50), r!(3)], Relation::Le, r!(0));
        p.push_row(vec![r!(0), r!(0), r!(1), r!(0)], Relation::Le, r!(1));
        let sol = optimal(solve(&p).unwrap());
        assert_eq!(sol.value, r!(-1 / 20));
        verify_optimal(&p, &sol).unwrap();
    }

    #[test]
    fn equality_row_duals() {
        let mut p = LpProblem::new(2);
        p.objective = vec![r!(1), r!(1)];
        p.push_row(vec![r!(1), r!(1)], Relation::Eq, r!(2));
        p.push_row(vec![r!(1), r!(-1)], Relation::Ge, r!(0));
        let sol = optimal(solve(&p).unwrap());
        assert_eq!(sol.value, r!(2));
        verify_optimal(&p, &sol).unwrap();
    }

    #[test]
    fn redundant_equality_row_is_dropped() {
        let mut p = LpProblem::new(2);
        p.objective = vec![r!(1), r!(0)];
        p.push_row(vec![r!(1), r!(1)], Relation::Eq, r!(2));
        p.push_row(vec![r!(2), r!(2)], Relation::Eq, r!(4));
        let sol = optimal(solve(&p).unwrap());
        assert_eq!(sol.value, r!(0));
        assert_eq!(sol.point, vec![r!(0), r!(2)]);
        verify_optimal(&p, &sol).unwrap();
    }

    #[test]
    fn upper_bound_rows() {
        let mut p = LpProblem::new(1);
        p.objective = vec![r!(-1)];
        p.upper_bounds[0] = Some(r!(5));
        let sol = optimal(solve(&p).unwrap());
        assert_eq!(sol.value, r!(-5));
        assert_eq!(sol.point, vec![r!(5)]);
        assert_eq!(sol.row_duals, vec![r!(-1)]);
    }

    #[test]
    fn negative_rhs_normalization() {
        // x - y <= -1 with min x forces y >= 1 through the flipped row.
        let mut p = LpProblem::new(2);
        p.objective = vec![r!(1), r!(1)];
        p.push_row(vec![r!(1), r!(-1)], Relation::Le, r!(-1));
        let sol = optimal(solve(&p).unwrap());
        assert_eq!(sol.value, r!(1));
        assert_eq!(sol.point, vec![r!(0), r!(1)]);
        verify_optimal(&p, &sol).unwrap();
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // min -x - y s.t. 3x + y <= 1, x + 3y <= 1: optimum at (1/4, 1/4).
        let mut p = LpProblem::new(2);
        p.objective = vec![r!(-1), r!(-1)];
        p.push_row(vec![r!(3), r!(1)], Relation::Le, r!(1));
        p.push_row(vec![r!(1), r!(3)], Relation::Le, r!(1));
        let sol = optimal(solve(&p).unwrap());
        assert_eq!(sol.point, vec![r!(1 / 4), r!(1 / 4)]);
        assert_eq!(sol.value, r!(-1 / 2));
        assert_eq!(sol.row_duals, vec![r!(-1 / 4), r!(-1 / 4)]);
    }

    #[test]
    fn determinism() {
        let mut p = LpProblem::new(3);
        p.objective = vec![r!(2), r!(-3), r!(1)];
        p.push_row(vec![r!(1), r!(1), r!(1)], Relation::Le, r!(10));
        p.push_row(vec![r!(1), r!(-1), r!(2)], Relation::Ge, r!(-4));
        p.push_row(vec![r!(0), r!(1), r!(-1)], Relation::Eq, r!(2));
        let a = solve(&p).unwrap();
        let b = solve(&p).unwrap();
        assert_eq!(a, b);
    }
}
