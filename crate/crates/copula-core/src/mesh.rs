use crate::error::{Error, Result};
use ratlp::Rational;

/// Rectangular grid of breakpoints in the unit square. Both axes run strictly
/// from 0 to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl Mesh {
    pub fn new(xs: Vec<Rational>, ys: Vec<Rational>) -> Result<Mesh> {
        for axis in [&xs, &ys] {
            if axis.len() < 2 || axis[0] != Rational::zero() || axis[axis.len() - 1] != Rational::one()
            {
                return Err(Error::BadEndpoints);
            }
            if !axis.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::NonMonotone);
            }
        }
        Ok(Mesh { xs, ys })
    }

    /// Breakpoints k/nx and k/ny; `nx`, `ny` count cells per axis.
    pub fn uniform(nx: usize, ny: usize) -> Mesh {
        assert!(nx >= 1 && ny >= 1, "need at least one cell per axis");
        let axis = |n: usize| (0..=n).map(|k| Rational::new(k as i64, n as i64)).collect();
        Mesh { xs: axis(nx), ys: axis(ny) }
    }

    /// Number of cells along x.
    pub fn p(&self) -> usize {
        self.xs.len() - 1
    }

    /// Number of cells along y.
    pub fn q(&self) -> usize {
        self.ys.len() - 1
    }

    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rational] {
        &self.ys
    }

    pub fn x(&self, i: usize) -> &Rational {
        &self.xs[i]
    }

    pub fn y(&self, j: usize) -> &Rational {
        &self.ys[j]
    }

    pub fn check_point(&self, point: (usize, usize)) -> Result<()> {
        if point.0 <= self.p() && point.1 <= self.q() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange)
        }
    }

    pub fn check_rect(&self, r: &Rect) -> Result<()> {
        if r.i2 <= self.p() && r.j2 <= self.q() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange)
        }
    }

    /// Grid points in row-major order (x-index outer).
    pub fn points(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity((self.p() + 1) * (self.q() + 1));
        for i in 0..=self.p() {
            for j in 0..=self.q() {
                out.push((i, j));
            }
        }
        out
    }

    /// Elementary cells in row-major order.
    pub fn cells(&self) -> Vec<Rect> {
        let mut out = Vec::with_capacity(self.p() * self.q());
        for i in 0..self.p() {
            for j in 0..self.q() {
                out.push(Rect::cell(i, j));
            }
        }
        out
    }

    /// Every nondegenerate grid rectangle, ordered by (i1, i2, j1, j2).
    pub fn rects(&self) -> Vec<Rect> {
        let (p, q) = (self.p(), self.q());
        let mut out = Vec::with_capacity(p * (p + 1) / 2 * q * (q + 1) / 2);
        for i1 in 0..p {
            for i2 in i1 + 1..=p {
                for j1 in 0..q {
                    for j2 in j1 + 1..=q {
                        out.push(Rect { i1, i2, j1, j2 });
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric_x(&self) -> bool {
        let p = self.p();
        (0..=p).all(|i| &self.xs[i] + &self.xs[p - i] == Rational::one())
    }

    pub fn is_symmetric_y(&self) -> bool {
        let q = self.q();
        (0..=q).all(|j| &self.ys[j] + &self.ys[q - j] == Rational::one())
    }

    /// Refinement with an extra breakpoint at every cell midpoint.
    pub fn refine_halved(&self) -> Mesh {
        let half = |axis: &[Rational]| {
            let mut out = Vec::with_capacity(axis.len() * 2 - 1);
            for w in axis.windows(2) {
                out.push(w[0].clone());
                out.push((&w[0] + &w[1]) / Rational::from_int(2));
            }
            out.push(axis[axis.len() - 1].clone());
            out
        };
        Mesh { xs: half(&self.xs), ys: half(&self.ys) }
    }
}

/// Nondegenerate grid rectangle [x_{i1}, x_{i2}] x [y_{j1}, y_{j2}].
/// Corner letters: a = (i1,j1) southwest, b = (i2,j1) southeast,
/// c = (i2,j2) northeast, d = (i1,j2) northwest. Main corners are a and c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Rect {
    pub i1: usize,
    pub i2: usize,
    pub j1: usize,
    pub j2: usize,
}

impl Rect {
    pub fn new(i1: usize, i2: usize, j1: usize, j2: usize) -> Result<Rect> {
        if i1 < i2 && j1 < j2 {
            Ok(Rect { i1, i2, j1, j2 })
        } else {
            Err(Error::DegenerateRect)
        }
    }

    /// Elementary cell with southwest corner at grid point (i, j).
    pub fn cell(i: usize, j: usize) -> Rect {
        Rect { i1: i, i2: i + 1, j1: j, j2: j + 1 }
    }

    pub fn main_corners(&self) -> [(usize, usize); 2] {
        [(self.i1, self.j1), (self.i2, self.j2)]
    }

    pub fn opposite_corners(&self) -> [(usize, usize); 2] {
        [(self.i2, self.j1), (self.i1, self.j2)]
    }

    pub fn multiplicity_at(&self, point: (usize, usize)) -> i64 {
        let mut m = 0;
        for c in self.main_corners() {
            if c == point {
                m += 1;
            }
        }
        for c in self.opposite_corners() {
            if c == point {
                m -= 1;
            }
        }
        m
    }

    pub fn is_cell(&self) -> bool {
        self.i2 == self.i1 + 1 && self.j2 == self.j1 + 1
    }

    pub fn touches_boundary(&self, mesh: &Mesh) -> bool {
        self.i1 == 0 || self.i2 == mesh.p() || self.j1 == 0 || self.j2 == mesh.q()
    }
}

/// Multiset of rectangles (formal disjoint union with positive counts).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RectUnion {
    items: Vec<(Rect, u64)>,
}

impl RectUnion {
    pub fn new() -> RectUnion {
        RectUnion::default()
    }

    pub fn of(items: impl IntoIterator<Item = (Rect, u64)>) -> RectUnion {
        let mut u = RectUnion::new();
        for (r, c) in items {
            u.push(r, c);
        }
        u
    }

    pub fn single(r: Rect) -> RectUnion {
        RectUnion::of([(r, 1)])
    }

    pub fn push(&mut self, r: Rect, count: u64) {
        assert!(count >= 1, "counts must be positive");
        self.items.push((r, count));
    }

    pub fn items(&self) -> &[(Rect, u64)] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_count(&self) -> u64 {
        self.items.iter().map(|(_, c)| c).sum()
    }
}

/// Signed corner counts of a rectangle multiset on a mesh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityField {
    mesh: Mesh,
    m: Vec<Vec<i64>>,
}

impl MultiplicityField {
    pub fn zero(mesh: Mesh) -> MultiplicityField {
        let m = vec![vec![0; mesh.q() + 1]; mesh.p() + 1];
        MultiplicityField { mesh, m }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn value(&self, i: usize, j: usize) -> i64 {
        self.m[i][j]
    }

    pub fn add_rect(&mut self, r: &Rect, count: i64) {
        for (i, j) in r.main_corners() {
            self.m[i][j] += count;
        }
        for (i, j) in r.opposite_corners() {
            self.m[i][j] -= count;
        }
    }

    pub fn total(&self) -> i64 {
        self.m.iter().flatten().sum()
    }

    /// Points with nonzero multiplicity, row-major.
    pub fn support(&self) -> Vec<((usize, usize), i64)> {
        let mut out = Vec::new();
        for (i, row) in self.m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    out.push(((i, j), v));
                }
            }
        }
        out
    }
}

/// Accumulates the corner patterns of every rectangle in the union.
pub fn multiplicity_field(u: &RectUnion, mesh: &Mesh) -> Result<MultiplicityField> {
    for (r, _) in u.items() {
        mesh.check_rect(r).map_err(|_| Error::MeshMismatch)?;
    }
    let mut field = MultiplicityField::zero(mesh.clone());
    for (r, count) in u.items() {
        field.add_rect(r, *count as i64);
    }
    Ok(field)
}
