use crate::error::{Error, Result};
use crate::mesh::{Mesh, Rect, RectUnion};
use ratlp::Rational;

/// Values of a function on the grid points of a mesh. Row index is the
/// x-coordinate: values[i][j] = F(x_i, y_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridFunction {
    mesh: Mesh,
    values: Vec<Vec<Rational>>,
}

impl GridFunction {
    pub fn new(mesh: Mesh, values: Vec<Vec<Rational>>) -> Result<GridFunction> {
        if values.len() != mesh.p() + 1 || values.iter().any(|row| row.len() != mesh.q() + 1) {
            return Err(Error::MeshMismatch);
        }
        Ok(GridFunction { mesh, values })
    }

    pub fn from_fn(mesh: Mesh, f: impl Fn(&Rational, &Rational) -> Rational) -> GridFunction {
        let values = mesh
            .xs()
            .iter()
            .map(|x| mesh.ys().iter().map(|y| f(x, y)).collect())
            .collect();
        GridFunction { mesh, values }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn value(&self, i: usize, j: usize) -> &Rational {
        &self.values[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.values[i][j] = v;
    }

    pub fn values(&self) -> &Vec<Vec<Rational>> {
        &self.values
    }

    pub fn same_mesh(&self, other: &GridFunction) -> Result<()> {
        if self.mesh == other.mesh {
            Ok(())
        } else {
            Err(Error::MeshMismatch)
        }
    }

    /// Signed volume F(a) + F(c) - F(b) - F(d).
    pub fn volume(&self, r: &Rect) -> Result<Rational> {
        self.mesh.check_rect(r)?;
        Ok(self.volume_unchecked(r))
    }

    pub(crate) fn volume_unchecked(&self, r: &Rect) -> Rational {
        &self.values[r.i1][r.j1] + &self.values[r.i2][r.j2]
            - &self.values[r.i2][r.j1]
            - &self.values[r.i1][r.j2]
    }

    /// Total signed volume of a rectangle multiset, counted with multiplicity.
    pub fn union_volume(&self, u: &RectUnion) -> Result<Rational> {
        let mut total = Rational::zero();
        for (r, count) in u.items() {
            total += self.volume(r)? * Rational::from_int(*count as i64);
        }
        debug_assert_eq!(total, {
            // Same sum grouped by corner multiplicities.
            let field = crate::mesh::multiplicity_field(u, &self.mesh).unwrap();
            field
                .support()
                .into_iter()
                .map(|((i, j), m)| self.value(i, j) * Rational::from_int(m))
                .sum()
        });
        Ok(total)
    }

    /// Volumes of all elementary cells; entry [i][j] is the cell with
    /// southwest corner (i, j).
    pub fn cell_volume_matrix(&self) -> Vec<Vec<Rational>> {
        (0..self.mesh.p())
            .map(|i| {
                (0..self.mesh.q())
                    .map(|j| self.volume_unchecked(&Rect::cell(i, j)))
                    .collect()
            })
            .collect()
    }

    pub fn pointwise_min(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_mesh(other)?;
        Ok(self.zip_with(other, |a, b| if a <= b { a.clone() } else { b.clone() }))
    }

    pub fn pointwise_max(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_mesh(other)?;
        Ok(self.zip_with(other, |a, b| if a >= b { a.clone() } else { b.clone() }))
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_mesh(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_mesh(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(
        &self,
        other: &GridFunction,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> GridFunction {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| f(a, b)).collect())
            .collect();
        GridFunction { mesh: self.mesh.clone(), values }
    }

    /// Pointwise order self <= other everywhere.
    pub fn le(&self, other: &GridFunction) -> Result<bool> {
        self.same_mesh(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(ra, rb)| ra.iter().zip(rb).all(|(a, b)| a <= b)))
    }
}
