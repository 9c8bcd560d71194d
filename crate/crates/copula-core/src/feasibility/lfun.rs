use crate::error::{Error, Result};
use crate::gridfn::GridFunction;
use crate::mesh::{MultiplicityField, Rect, RectUnion};
use ratlp::Rational;

fn check_pair(a: &GridFunction, b: &GridFunction) -> Result<()> {
    a.same_mesh(b)?;
    if !a.le(b)? {
        return Err(Error::OrderViolated);
    }
    Ok(())
}

/// L(R) = sum of B(y) m(y) over m > 0 plus A(y) m(y) over m < 0: the upper
/// bound pays at main-corner surplus, the lower bound at opposite-corner
/// surplus.
pub fn l_functional(a: &GridFunction, b: &GridFunction, m: &MultiplicityField) -> Result<Rational> {
    check_pair(a, b)?;
    if m.mesh() != a.mesh() {
        return Err(Error::MeshMismatch);
    }
    let mut total = Rational::zero();
    for ((i, j), mult) in m.support() {
        let weight = if mult > 0 { b.value(i, j) } else { a.value(i, j) };
        total += weight * Rational::from_int(mult);
    }
    Ok(total)
}

pub fn l_functional_union(a: &GridFunction, b: &GridFunction, u: &RectUnion) -> Result<Rational> {
    let field = crate::mesh::multiplicity_field(u, a.mesh())?;
    l_functional(a, b, &field)
}

/// L of a single rectangle: B at the main corners, A at the opposite ones.
pub fn single_rect_l(a: &GridFunction, b: &GridFunction, r: &Rect) -> Rational {
    b.value(r.i1, r.j1) + b.value(r.i2, r.j2) - a.value(r.i2, r.j1) - a.value(r.i1, r.j2)
}
