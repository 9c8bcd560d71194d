use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratlp::{r, solve, verify_farkas, verify_optimal, LpOutcome, LpProblem, Rational, Relation};

fn random_problem(rng: &mut ChaCha8Rng) -> LpProblem {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(0..=6);
    let mut p = LpProblem::new(n);
    let coeff = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    p.objective = (0..n).map(|_| coeff(rng)).collect();
    for _ in 0..m {
        let coeffs = (0..n).map(|_| coeff(rng)).collect();
        let rel = match rng.gen_range(0..3) {
            0 => Relation::Le,
            1 => Relation::Eq,
            _ => Relation::Ge,
        };
        p.push_row(coeffs, rel, coeff(rng));
    }
    for ub in p.upper_bounds.iter_mut() {
        if rng.gen_bool(0.3) {
            *ub = Some(Rational::new(rng.gen_range(0..=5), 1));
        }
    }
    p
}

/// Every outcome carries an exact certificate; substitute it back in.
#[test]
fn certificates_hold_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1b5);
    let mut optimal = 0usize;
    let mut infeasible = 0usize;
    let mut unbounded = 0usize;
    for _ in 0..250 {
        let p = random_problem(&mut rng);
        match solve(&p).unwrap() {
            LpOutcome::Optimal(sol) => {
                verify_optimal(&p, &sol).unwrap();
                optimal += 1;
            }
            LpOutcome::Infeasible(cert) => {
                verify_farkas(&p, &cert).unwrap();
                infeasible += 1;
            }
            LpOutcome::Unbounded => unbounded += 1,
        }
    }
    // The generator must exercise all three outcomes for this test to mean much.
    assert!(optimal > 20, "only {optimal} optimal instances");
    assert!(infeasible > 20, "only {infeasible} infeasible instances");
    assert!(unbounded > 5, "only {unbounded} unbounded instances");
}

/// Bounded feasible instances stay bounded when the objective flips sign on a
/// box; checks the phase transition with many artificials.
#[test]
fn boxed_instances_always_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2c6);
    for _ in 0..80 {
        let mut p = random_problem(&mut rng);
        for ub in p.upper_bounds.iter_mut() {
            if ub.is_none() {
                *ub = Some(r!(3));
            }
        }
        // Drop equality rows: a random box plus random equalities is usually
        // empty, which the other test already covers.
        p.rows.retain(|row| row.rel != Relation::Eq);
        match solve(&p).unwrap() {
            LpOutcome::Optimal(sol) => verify_optimal(&p, &sol).unwrap(),
            LpOutcome::Infeasible(cert) => verify_farkas(&p, &cert).unwrap(),
            LpOutcome::Unbounded => panic!("boxed problem cannot be unbounded"),
        }
    }
}
