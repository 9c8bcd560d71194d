//! Argument loading: the `fixtures:` scheme, grid files, mesh shorthands and
//! small value parsers. Every error here means bad input (exit 2).

use std::fs;
use std::str::FromStr;

use copula_core::{fixtures, io, GridFunction, Mesh, Rational};

pub enum Fixture {
    Grid(GridFunction),
    Cells(Vec<Vec<Rational>>),
}

pub fn fixture(name: &str) -> Result<Fixture, String> {
    if let Some((gen, size)) = name.split_once('@') {
        let n: usize = size
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("bad mesh size {size:?} in fixture {name:?}"))?;
        let mesh = Mesh::uniform(n, n);
        let grid = match gen {
            "pi" => fixtures::product(mesh),
            "min" => fixtures::frechet_upper(mesh),
            "wbound" => fixtures::frechet_lower(mesh),
            _ => return Err(format!("unknown generator {gen:?} (expected pi, min or wbound)")),
        };
        return Ok(Fixture::Grid(grid));
    }
    Ok(match name {
        "ex7-A" => Fixture::Grid(fixtures::ex7_lower()),
        "ex7-B" => Fixture::Grid(fixtures::ex7_upper()),
        "ex10-A" => Fixture::Grid(fixtures::ex10_lower()),
        "ex10-DM" => Fixture::Grid(fixtures::ex10_main_defect()),
        "ex10-B" => Fixture::Grid(fixtures::ex10_upper()),
        "ex10-V" => Fixture::Cells(fixtures::ex10_cell_volumes()),
        _ => return Err(format!("unknown fixture {name:?}")),
    })
}

pub fn load_grid(arg: &str) -> Result<GridFunction, String> {
    if let Some(name) = arg.strip_prefix("fixtures:") {
        return match fixture(name)? {
            Fixture::Grid(g) => Ok(g),
            Fixture::Cells(_) => {
                Err(format!("{name} is a cell-volume matrix, not a grid function"))
            }
        };
    }
    let text = fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?;
    io::read_str(&text).map_err(|e| format!("{arg}: {e}"))
}

/// `--mesh` accepts a cell count (uniform shorthand), a grid/mesh file, or a
/// fixture reference whose mesh is borrowed.
pub fn load_mesh(arg: &str) -> Result<Mesh, String> {
    if let Ok(n) = arg.parse::<usize>() {
        if n == 0 {
            return Err("a mesh needs at least one cell per axis".into());
        }
        return Ok(Mesh::uniform(n, n));
    }
    if arg.starts_with("fixtures:") {
        return Ok(load_grid(arg)?.mesh().clone());
    }
    let text = fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?;
    io::read_mesh_str(&text).map_err(|e| format!("{arg}: {e}"))
}

pub fn parse_point(s: &str) -> Result<(usize, usize), String> {
    let err = || format!("bad grid point {s:?} (expected i,j)");
    let (i, j) = s.split_once(',').ok_or_else(err)?;
    Ok((i.trim().parse().map_err(|_| err())?, j.trim().parse().map_err(|_| err())?))
}

pub fn parse_coords(s: &str) -> Result<(Rational, Rational), String> {
    let err = || format!("bad coordinates {s:?} (expected x,y as rationals)");
    let (x, y) = s.split_once(',').ok_or_else(err)?;
    Ok((
        Rational::from_str(x.trim()).map_err(|_| err())?,
        Rational::from_str(y.trim()).map_err(|_| err())?,
    ))
}
