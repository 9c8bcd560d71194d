//! Built-in example data used by the test suites and the CLI fixture scheme.

use crate::gridfn::GridFunction;
use crate::mesh::{Mesh, Rect, RectUnion};
use ratlp::Rational;

fn scaled<const N: usize>(denom: i64, rows: &[[i64; N]]) -> GridFunction {
    let mesh = Mesh::uniform(rows.len() - 1, N - 1);
    let values = rows
        .iter()
        .map(|row| row.iter().map(|&v| Rational::new(v, denom)).collect())
        .collect();
    GridFunction::new(mesh, values).unwrap()
}

/// Lower member of the 7x7 example pair: a proper quasi-copula that is a
/// mutual fixed point with `ex7_upper` under the two corner transforms.
pub fn ex7_lower() -> GridFunction {
    scaled(
        7,
        &[
            [0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 1, 1],
            [0, 0, 0, 0, 0, 1, 2, 2],
            [0, 0, 0, 0, 1, 2, 2, 3],
            [0, 0, 0, 1, 2, 2, 3, 4],
            [0, 0, 1, 2, 2, 3, 4, 5],
            [0, 1, 2, 2, 3, 4, 5, 6],
            [0, 1, 2, 3, 4, 5, 6, 7],
        ],
    )
}

pub fn ex7_upper() -> GridFunction {
    scaled(
        7,
        &[
            [0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 1, 1],
            [0, 0, 0, 0, 1, 2, 2, 2],
            [0, 0, 0, 1, 2, 2, 3, 3],
            [0, 0, 1, 2, 2, 3, 4, 4],
            [0, 1, 2, 2, 3, 4, 4, 5],
            [0, 1, 2, 3, 4, 4, 5, 6],
            [0, 1, 2, 3, 4, 5, 6, 7],
        ],
    )
}

/// Lower member of the 10x10 example pair; the interval [lower, upper]
/// contains no discrete copula.
pub fn ex10_lower() -> GridFunction {
    scaled(
        50,
        &[
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 1, 2, 3, 4, 5, 5, 5, 5, 5],
            [0, 1, 2, 3, 3, 4, 5, 10, 10, 10, 10],
            [0, 2, 2, 5, 7, 7, 8, 13, 15, 15, 15],
            [0, 3, 3, 6, 7, 7, 8, 13, 18, 20, 20],
            [0, 4, 4, 6, 9, 11, 11, 16, 21, 25, 25],
            [0, 5, 5, 7, 9, 11, 11, 16, 21, 26, 30],
            [0, 5, 10, 12, 14, 16, 16, 21, 26, 31, 35],
            [0, 5, 10, 15, 19, 21, 21, 26, 31, 36, 40],
            [0, 5, 10, 15, 20, 25, 26, 31, 36, 41, 45],
            [0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50],
        ],
    )
}

/// Main-corner defect field of `ex10_lower` (all entries nonpositive).
pub fn ex10_main_defect() -> GridFunction {
    scaled(
        50,
        &[
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, -1, -1, -1, -1, -1, 0, 0, 0, 0, 0],
            [0, -1, 0, 0, -1, -1, -1, 0, 0, 0, 0],
            [0, -1, -1, -1, 0, -1, -1, -1, 0, 0, 0],
            [0, -1, -1, 0, -1, -1, -1, -1, 0, 0, 0],
            [0, -1, -1, -1, 0, 0, -1, -1, -1, 0, 0],
            [0, 0, -1, -1, -1, -1, -1, -1, -1, 0, 0],
            [0, 0, 0, -1, -1, -1, -1, -1, -1, 0, 0],
            [0, 0, 0, 0, 0, 0, -1, -1, -1, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        ],
    )
}

/// Upper member of the 10x10 example pair, equal to lower minus its
/// main-corner defect field.
pub fn ex10_upper() -> GridFunction {
    scaled(
        50,
        &[
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 1, 2, 3, 4, 5, 5, 5, 5, 5, 5],
            [0, 2, 2, 3, 4, 5, 6, 10, 10, 10, 10],
            [0, 3, 3, 6, 7, 8, 9, 14, 15, 15, 15],
            [0, 4, 4, 6, 8, 8, 9, 14, 18, 20, 20],
            [0, 5, 5, 7, 9, 11, 12, 17, 22, 25, 25],
            [0, 5, 6, 8, 10, 12, 12, 17, 22, 26, 30],
            [0, 5, 10, 13, 15, 17, 17, 22, 27, 31, 35],
            [0, 5, 10, 15, 19, 21, 22, 27, 32, 36, 40],
            [0, 5, 10, 15, 20, 25, 26, 31, 36, 41, 45],
            [0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50],
        ],
    )
}

/// Elementary-cell volumes of `ex10_lower`; entry [i][j] is the cell with
/// southwest corner (i, j). Two 2-cell hills of height 2/50 sit at rows 2
/// and 4, each ringed by -1/50 depressions.
pub fn ex10_cell_volumes() -> Vec<Vec<Rational>> {
    let rows: [[i64; 10]; 10] = [
        [0, 1, 1, 1, 1, 1, 0, 0, 0, 0],
        [1, 0, 0, -1, 0, 0, 5, 0, 0, 0],
        [1, -1, 2, 2, -1, 0, 0, 2, 0, 0],
        [1, 0, 0, -1, 0, 0, 0, 3, 2, 0],
        [1, 0, -1, 2, 2, -1, 0, 0, 2, 0],
        [1, 0, 0, -1, 0, 0, 0, 0, 1, 4],
        [0, 5, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 3, 2, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 3, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 4, 0, 0, 0, 1],
    ];
    rows.iter()
        .map(|row| row.iter().map(|&v| Rational::new(v, 50)).collect())
        .collect()
}

/// Cells excluded from the 21-cell witness region: the two 2-cell hills.
const EX10_HILLS: [(usize, usize); 4] = [(2, 2), (2, 3), (4, 3), (4, 4)];

/// The 21-cell region witnessing that [ex10_lower, ex10_upper] contains no
/// copula: the 5x5 block of cells with southwest corners in 1..=5 square,
/// minus the two hills.
pub fn ex10_witness_region() -> RectUnion {
    let mut u = RectUnion::new();
    for i in 1..=5 {
        for j in 1..=5 {
            if !EX10_HILLS.contains(&(i, j)) {
                u.push(Rect::cell(i, j), 1);
            }
        }
    }
    u
}

pub fn product(mesh: Mesh) -> GridFunction {
    GridFunction::from_fn(mesh, |x, y| x * y)
}

pub fn frechet_upper(mesh: Mesh) -> GridFunction {
    GridFunction::from_fn(mesh, |x, y| if x <= y { x.clone() } else { y.clone() })
}

pub fn frechet_lower(mesh: Mesh) -> GridFunction {
    GridFunction::from_fn(mesh, |x, y| {
        let s = x + y - Rational::one();
        if s.is_positive() { s } else { Rational::zero() }
    })
}
