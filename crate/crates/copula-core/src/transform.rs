use crate::error::{Error, Result};
use crate::gridfn::GridFunction;
use crate::mesh::Mesh;
use ratlp::Rational;

/// Piecewise-bilinear extension of a grid function to the whole unit square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearRep {
    base: GridFunction,
}

impl BilinearRep {
    pub fn new(base: GridFunction) -> BilinearRep {
        BilinearRep { base }
    }

    pub fn base(&self) -> &GridFunction {
        &self.base
    }

    pub fn into_base(self) -> GridFunction {
        self.base
    }
}

/// Index of the cell along one axis whose closed interval contains v; the
/// last cell takes v = 1.
fn locate(axis: &[Rational], v: &Rational) -> usize {
    let i = axis.partition_point(|b| b <= v);
    i.clamp(1, axis.len() - 1) - 1
}

pub fn bilinear_eval(rep: &BilinearRep, x: &Rational, y: &Rational) -> Result<Rational> {
    if x.is_negative() || y.is_negative() || *x > Rational::one() || *y > Rational::one() {
        return Err(Error::OutOfDomain);
    }
    let f = &rep.base;
    let mesh = f.mesh();
    let i = locate(mesh.xs(), x);
    let j = locate(mesh.ys(), y);
    let s = (x - mesh.x(i)) / (mesh.x(i + 1) - mesh.x(i));
    let t = (y - mesh.y(j)) / (mesh.y(j + 1) - mesh.y(j));
    let one = Rational::one();
    Ok(f.value(i, j) * (&one - &s) * (&one - &t)
        + f.value(i + 1, j) * &s * (&one - &t)
        + f.value(i, j + 1) * (&one - &s) * &t
        + f.value(i + 1, j + 1) * &s * &t)
}

/// Sample the extension at the nodes of another mesh (not necessarily a
/// refinement).
pub fn restrict(rep: &BilinearRep, sub: &Mesh) -> GridFunction {
    GridFunction::from_fn(sub.clone(), |x, y| bilinear_eval(rep, x, y).unwrap())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Reflection C^sigma: (x,y) -> y - C(1-x, y) for axis X, x - C(x, 1-y) for
/// axis Y. Needs the mesh to be its own mirror image along that axis.
pub fn reflect_sigma(f: &GridFunction, axis: Axis) -> Result<GridFunction> {
    let mesh = f.mesh();
    let (p, q) = (mesh.p(), mesh.q());
    let values = match axis {
        Axis::X => {
            if !mesh.is_symmetric_x() {
                return Err(Error::AsymmetricMesh);
            }
            (0..=p)
                .map(|i| (0..=q).map(|j| mesh.y(j) - f.value(p - i, j)).collect())
                .collect()
        }
        Axis::Y => {
            if !mesh.is_symmetric_y() {
                return Err(Error::AsymmetricMesh);
            }
            (0..=p)
                .map(|i| (0..=q).map(|j| mesh.x(i) - f.value(i, q - j)).collect())
                .collect()
        }
    };
    GridFunction::new(mesh.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ratlp::r;

    fn product(mesh: Mesh) -> GridFunction {
        GridFunction::from_fn(mesh, |x, y| x * y)
    }

    #[test]
    fn four_corner_formula() {
        let mesh = Mesh::uniform(1, 1);
        let f = GridFunction::new(
            mesh,
            vec![vec![r!(0), r!(1 / 4)], vec![r!(1 / 4), r!(1)]],
        )
        .unwrap();
        let rep = BilinearRep::new(f);
        assert_eq!(bilinear_eval(&rep, &r!(1 / 2), &r!(1 / 2)).unwrap(), r!(3 / 8));
    }

    #[test]
    fn single_mass_corner_reduces_to_product() {
        let mesh = Mesh::uniform(1, 1);
        let f = GridFunction::new(mesh, vec![vec![r!(0), r!(0)], vec![r!(0), r!(1)]]).unwrap();
        let rep = BilinearRep::new(f);
        assert_eq!(bilinear_eval(&rep, &r!(1 / 2), &r!(1 / 2)).unwrap(), r!(1 / 4));
        assert_eq!(bilinear_eval(&rep, &r!(1 / 3), &r!(3 / 4)).unwrap(), r!(1 / 4));
    }

    #[test]
    fn interpolates_grid_values() {
        let f = product(Mesh::uniform(3, 4));
        let rep = BilinearRep::new(f.clone());
        for (i, j) in f.mesh().points() {
            assert_eq!(
                bilinear_eval(&rep, f.mesh().x(i), f.mesh().y(j)).unwrap(),
                *f.value(i, j)
            );
        }
    }

    #[test]
    fn out_of_domain_rejected() {
        let rep = BilinearRep::new(product(Mesh::uniform(2, 2)));
        assert_eq!(bilinear_eval(&rep, &r!(3 / 2), &r!(0)).unwrap_err(), Error::OutOfDomain);
        assert_eq!(bilinear_eval(&rep, &r!(1 / 2), &r!(-1 / 2)).unwrap_err(), Error::OutOfDomain);
    }

    #[test]
    fn restrict_round_trip_and_product_stability() {
        let f = product(Mesh::uniform(4, 2));
        let rep = BilinearRep::new(f.clone());
        assert_eq!(restrict(&rep, f.mesh()), f);
        // The product function is bilinear on every cell, so resampling it
        // anywhere reproduces the product values.
        let other = Mesh::new(
            vec![r!(0), r!(1 / 7), r!(2 / 3), r!(1)],
            vec![r!(0), r!(1 / 5), r!(1)],
        )
        .unwrap();
        assert_eq!(restrict(&rep, &other), product(other));
    }

    #[test]
    fn reflection_fixes_product_and_swaps_bounds() {
        let mesh = Mesh::uniform(4, 4);
        let pi = product(mesh.clone());
        assert_eq!(reflect_sigma(&pi, Axis::X).unwrap(), pi);
        assert_eq!(reflect_sigma(&pi, Axis::Y).unwrap(), pi);

        let m = GridFunction::from_fn(mesh.clone(), |x, y| {
            if x <= y { x.clone() } else { y.clone() }
        });
        let w = GridFunction::from_fn(mesh, |x, y| {
            let s = x + y - Rational::one();
            if s.is_positive() { s } else { Rational::zero() }
        });
        assert_eq!(reflect_sigma(&m, Axis::X).unwrap(), w);
        assert_eq!(reflect_sigma(&w, Axis::Y).unwrap(), m);
    }

    #[test]
    fn reflection_is_an_involution() {
        let mesh = Mesh::uniform(3, 3);
        let f = GridFunction::from_fn(mesh, |x, y| x * x * y);
        for axis in [Axis::X, Axis::Y] {
            let twice = reflect_sigma(&reflect_sigma(&f, axis).unwrap(), axis).unwrap();
            assert_eq!(twice, f);
        }
    }

    #[test]
    fn asymmetric_mesh_rejected() {
        let mesh = Mesh::new(
            vec![r!(0), r!(1 / 3), r!(1)],
            vec![r!(0), r!(1 / 2), r!(1)],
        )
        .unwrap();
        let f = product(mesh);
        assert_eq!(reflect_sigma(&f, Axis::X).unwrap_err(), Error::AsymmetricMesh);
        assert!(reflect_sigma(&f, Axis::Y).is_ok());
    }
}
