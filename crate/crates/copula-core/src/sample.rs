//! Seeded random instances: copulas from the transportation polytope,
//! quasi-copulas by denting, and imprecise pairs built from both.

use crate::axioms::validate_imprecise_pair;
use crate::defects::{drop_o, lift_m};
use crate::feasibility::single_rect_l;
use crate::gridfn::GridFunction;
use crate::mesh::{Mesh, Rect};
use rand::seq::SliceRandom;
use rand::Rng;
use ratlp::Rational;

/// Extreme point of the transportation polytope with the mesh's margin
/// increments: northwest-corner rule run in a shuffled row/column order.
fn extreme_mass_matrix(mesh: &Mesh, rng: &mut impl Rng) -> Vec<Vec<Rational>> {
    let (p, q) = (mesh.p(), mesh.q());
    let mut rows: Vec<usize> = (0..p).collect();
    let mut cols: Vec<usize> = (0..q).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let mut supply: Vec<Rational> = (0..p).map(|i| mesh.x(i + 1) - mesh.x(i)).collect();
    let mut demand: Vec<Rational> = (0..q).map(|j| mesh.y(j + 1) - mesh.y(j)).collect();
    let mut mass = vec![vec![Rational::zero(); q]; p];
    let (mut a, mut b) = (0, 0);
    while a < p && b < q {
        let (i, j) = (rows[a], cols[b]);
        let moved = supply[i].clone().min(demand[j].clone());
        supply[i] -= &moved;
        demand[j] -= &moved;
        mass[i][j] = moved;
        if supply[i].is_zero() {
            a += 1;
        }
        if demand[j].is_zero() {
            b += 1;
        }
    }
    mass
}

fn mass_to_function(mesh: &Mesh, mass: &[Vec<Rational>]) -> GridFunction {
    let (p, q) = (mesh.p(), mesh.q());
    let mut values = vec![vec![Rational::zero(); q + 1]; p + 1];
    for i in 1..=p {
        for j in 1..=q {
            values[i][j] =
                &values[i - 1][j] + &values[i][j - 1] - &values[i - 1][j - 1] + &mass[i - 1][j - 1];
        }
    }
    GridFunction::new(mesh.clone(), values).unwrap()
}

/// Random convex combination of transportation extreme points and the
/// independent plan. Uniform margins are linear constraints, so the mix
/// stays in the polytope and the cumulative sums form a copula.
pub fn random_copula(mesh: &Mesh, rng: &mut impl Rng) -> GridFunction {
    let (p, q) = (mesh.p(), mesh.q());
    let parts = rng.gen_range(2..=3);
    let mut plans = Vec::with_capacity(parts + 1);
    for _ in 0..parts {
        plans.push(extreme_mass_matrix(mesh, rng));
    }
    let mut independent = vec![vec![Rational::zero(); q]; p];
    for (i, row) in independent.iter_mut().enumerate() {
        for (j, m) in row.iter_mut().enumerate() {
            *m = (mesh.x(i + 1) - mesh.x(i)) * (mesh.y(j + 1) - mesh.y(j));
        }
    }
    plans.push(independent);

    let raw: Vec<i64> = (0..plans.len()).map(|_| rng.gen_range(1..=16)).collect();
    let total = Rational::from_int(raw.iter().sum());
    let mut mass = vec![vec![Rational::zero(); q]; p];
    for (plan, w) in plans.iter().zip(&raw) {
        let weight = Rational::from_int(*w) / &total;
        for i in 0..p {
            for j in 0..q {
                mass[i][j] += &plan[i][j] * &weight;
            }
        }
    }
    mass_to_function(mesh, &mass)
}

/// Largest amount the value at interior point (i, j) can drop while the
/// function stays a quasi-copula: monotonicity slack against the two lower
/// neighbors, and the smallest volume of a boundary-touching rectangle with
/// (i, j) as a main corner (interior rectangles are unconstrained).
fn dent_allowance(f: &GridFunction, (i, j): (usize, usize)) -> Rational {
    let mesh = f.mesh();
    let (p, q) = (mesh.p(), mesh.q());
    let mut best = f.value(i, j) - f.value(i - 1, j).clone().max(f.value(i, j - 1).clone());
    // (i, j) as southwest corner reaching the east or north edge, or as
    // northeast corner reaching the west or south edge.
    let sw = (i + 1..=p).flat_map(|i2| {
        (j + 1..=q)
            .filter(move |&j2| i2 == p || j2 == q)
            .map(move |j2| Rect { i1: i, i2, j1: j, j2 })
    });
    let ne = (0..i).flat_map(|i1| {
        (0..j)
            .filter(move |&j1| i1 == 0 || j1 == 0)
            .map(move |j1| Rect { i1, i2: i, j1, j2: j })
    });
    for r in sw.chain(ne) {
        let v = f.volume(&r).unwrap();
        if v < best {
            best = v;
        }
    }
    best
}

/// Random quasi-copula: a random copula dented downward at up to `dents`
/// interior points, each drop kept within the current allowance.
pub fn random_quasi_copula(mesh: &Mesh, dents: usize, rng: &mut impl Rng) -> GridFunction {
    let mut f = random_copula(mesh, rng);
    let (p, q) = (mesh.p(), mesh.q());
    if p < 2 || q < 2 {
        return f;
    }
    for _ in 0..dents {
        let x = (rng.gen_range(1..p), rng.gen_range(1..q));
        let allowance = dent_allowance(&f, x);
        if !allowance.is_positive() {
            continue;
        }
        let delta = allowance * Rational::new(rng.gen_range(1..=4), 4);
        let dropped = f.value(x.0, x.1) - delta;
        f.set(x.0, x.1, dropped);
    }
    f
}

/// Random imprecise copula. Draws from four recipes: envelopes of a few
/// copulas, a quasi-copula against its copula lift, a drop against the
/// quasi-copula, and drop against lift; redraws on the rare invalid
/// combination.
pub fn random_pair(mesh: &Mesh, rng: &mut impl Rng) -> (GridFunction, GridFunction) {
    loop {
        let (a, b) = match rng.gen_range(0..4) {
            0 => {
                let mut lower = random_copula(mesh, rng);
                let mut upper = lower.clone();
                for _ in 0..rng.gen_range(1..=2) {
                    let c = random_copula(mesh, rng);
                    lower = lower.pointwise_min(&c).unwrap();
                    upper = upper.pointwise_max(&c).unwrap();
                }
                (lower, upper)
            }
            1 => {
                let f = random_quasi_copula(mesh, 2, rng);
                let lifted = lift_m(&f);
                (f, lifted)
            }
            2 => {
                let f = random_quasi_copula(mesh, 2, rng);
                let dropped = drop_o(&f);
                (dropped, f)
            }
            _ => {
                let f = random_quasi_copula(mesh, 3, rng);
                (drop_o(&f), lift_m(&f))
            }
        };
        if validate_imprecise_pair(&a, &b).unwrap().is_imprecise_copula() {
            return (a, b);
        }
    }
}

/// Random solver input: grounded, neutral and ordered, but not necessarily a
/// valid imprecise copula. Roughly a third of the draws are pinched around an
/// interior rectangle so that no copula fits between the bounds; the rest
/// come from `random_pair`. This is the generator to use when a test needs
/// both feasible and infeasible instances: valid pairs on meshes this small
/// always admit a copula, so `random_pair` alone cannot produce the
/// infeasible kind.
pub fn random_sandwich_instance(mesh: &Mesh, rng: &mut impl Rng) -> (GridFunction, GridFunction) {
    let (p, q) = (mesh.p(), mesh.q());
    if p < 3 || q < 3 || rng.gen_range(0..3) > 0 {
        return random_pair(mesh, rng);
    }
    let c = random_copula(mesh, rng);
    let d = random_copula(mesh, rng);
    let mut a = c.pointwise_min(&d).unwrap();
    let mut b = c.pointwise_max(&d).unwrap();
    // A rectangle with all four corners strictly inside the grid; shifting
    // both bounds down at its main corners and up at its opposite corners
    // drives the rectangle's mass budget below zero while keeping the order
    // and the boundary intact.
    let i1 = rng.gen_range(1..p - 1);
    let i2 = rng.gen_range(i1 + 1..p);
    let j1 = rng.gen_range(1..q - 1);
    let j2 = rng.gen_range(j1 + 1..q);
    let r = Rect { i1, i2, j1, j2 };
    let t = (single_rect_l(&a, &b, &r) + Rational::new(1, 32)) / Rational::from_int(4);
    for (sign, (i, j)) in [
        (-1, (r.i1, r.j1)),
        (-1, (r.i2, r.j2)),
        (1, (r.i2, r.j1)),
        (1, (r.i1, r.j2)),
    ] {
        let shift = Rational::from_int(sign) * &t;
        a.set(i, j, a.value(i, j) + &shift);
        b.set(i, j, b.value(i, j) + shift);
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::validate_function;
    use ratlp::r;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn meshes() -> Vec<Mesh> {
        vec![
            Mesh::uniform(3, 3),
            Mesh::uniform(4, 4),
            Mesh::new(
                vec![r!(0), r!(1 / 5), r!(1 / 2), r!(1)],
                vec![r!(0), r!(1 / 3), r!(2 / 3), r!(1)],
            )
            .unwrap(),
        ]
    }

    #[test]
    fn sampled_copulas_validate() {
        for mesh in meshes() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..20 {
                let c = random_copula(&mesh, &mut rng);
                assert!(validate_function(&c).is_discrete_copula());
            }
        }
    }

    #[test]
    fn sampled_quasi_copulas_validate() {
        let mut proper = 0;
        for mesh in meshes() {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..20 {
                let f = random_quasi_copula(&mesh, 3, &mut rng);
                let report = validate_function(&f);
                assert!(report.is_discrete_quasi_copula());
                if !report.is_discrete_copula() {
                    proper += 1;
                }
            }
        }
        assert!(proper > 0, "denting never produced a proper quasi-copula");
    }

    #[test]
    fn sampled_pairs_are_imprecise_copulas() {
        let mesh = Mesh::uniform(3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let (a, b) = random_pair(&mesh, &mut rng);
            assert!(a.le(&b).unwrap());
            assert!(validate_imprecise_pair(&a, &b).unwrap().is_imprecise_copula());
        }
    }

    #[test]
    fn sandwich_instances_are_solver_ready_and_mixed() {
        let mesh = Mesh::uniform(4, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut pinched = 0;
        for _ in 0..20 {
            let (a, b) = random_sandwich_instance(&mesh, &mut rng);
            assert!(a.le(&b).unwrap());
            assert!(crate::axioms::is_grounded_neutral(&a));
            assert!(crate::axioms::is_grounded_neutral(&b));
            let negative = mesh
                .rects()
                .iter()
                .any(|r| single_rect_l(&a, &b, r).is_negative());
            if negative {
                pinched += 1;
            }
        }
        assert!(pinched >= 3, "pinched draws are too rare: {pinched}");
        assert!(pinched <= 17, "unpinched draws are too rare: {pinched}");
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let mesh = Mesh::uniform(4, 4);
        let one = random_copula(&mesh, &mut ChaCha8Rng::seed_from_u64(42));
        let two = random_copula(&mesh, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(one, two);
    }
}
