use crate::axioms::validate_imprecise_pair;
use crate::error::{Error, Result};
use crate::gridfn::GridFunction;
use crate::mesh::Mesh;
use crate::par::ordered_map;
use ratlp::Rational;

/// Corner-defect fields of one grid function. Every field is the clamped
/// minimum min(0, V(R)) over the rectangles anchored at the point:
/// d_ne at the southwest main corner, d_sw at the northeast main corner,
/// d_nw at the northwest opposite corner, d_se at the southeast opposite
/// corner. d_m and d_o are the pointwise minima of the two pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectBundle {
    pub d_ne: GridFunction,
    pub d_sw: GridFunction,
    pub d_nw: GridFunction,
    pub d_se: GridFunction,
    pub d_m: GridFunction,
    pub d_o: GridFunction,
}

impl DefectBundle {
    pub fn is_zero(&self) -> bool {
        // d_m and d_o are minima of the four, so checking the anchors is enough.
        [&self.d_ne, &self.d_sw, &self.d_nw, &self.d_se]
            .iter()
            .all(|f| f.values().iter().flatten().all(Rational::is_zero))
    }
}

fn min_assign(slot: &mut Rational, candidate: Rational) {
    if candidate < *slot {
        *slot = candidate;
    }
}

fn zero_rows(p: usize, q: usize) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); q + 1]; p + 1]
}

/// Candidates contributed by one ordered pair of rows lo < hi, via the
/// column-difference profile D(t) = F(hi, t) - F(lo, t): a rectangle
/// [x_lo, x_hi] x [y_j1, y_j2] has volume D(j2) - D(j1). Suffix minima give
/// the anchors on the lower edge (ne at lo, se at hi), prefix maxima the
/// anchors on the upper edge (nw at lo, sw at hi).
fn column_profile(f: &GridFunction, lo: usize, hi: usize) -> Vec<Rational> {
    (0..f.mesh().q() + 1).map(|t| f.value(hi, t) - f.value(lo, t)).collect()
}

fn suffix_candidates(d: &[Rational], out: &mut [Rational]) {
    let q = d.len() - 1;
    let mut smin = d[q].clone();
    for j in (0..q).rev() {
        min_assign(&mut out[j], &smin - &d[j]);
        if d[j] < smin {
            smin = d[j].clone();
        }
    }
}

fn prefix_candidates(d: &[Rational], out: &mut [Rational]) {
    let q = d.len() - 1;
    let mut pmax = d[0].clone();
    for j in 1..=q {
        min_assign(&mut out[j], &d[j] - &pmax);
        if d[j] > pmax {
            pmax = d[j].clone();
        }
    }
}

pub fn corner_defects(f: &GridFunction) -> DefectBundle {
    corner_defects_impl(f, true)
}

/// Single-threaded reference path; identical output.
pub fn corner_defects_seq(f: &GridFunction) -> DefectBundle {
    corner_defects_impl(f, false)
}

fn corner_defects_impl(f: &GridFunction, parallel: bool) -> DefectBundle {
    let mesh = f.mesh().clone();
    let p = mesh.p();

    // Each task owns the output rows of one anchor index, so the two passes
    // write disjoint rows and merge by position.
    let lo_rows = ordered_map(parallel, (0..=p).collect::<Vec<_>>(), |lo| {
        let q = f.mesh().q();
        let mut ne = vec![Rational::zero(); q + 1];
        let mut nw = vec![Rational::zero(); q + 1];
        for hi in lo + 1..=p {
            let d = column_profile(f, lo, hi);
            suffix_candidates(&d, &mut ne);
            prefix_candidates(&d, &mut nw);
        }
        (ne, nw)
    });
    let hi_rows = ordered_map(parallel, (0..=p).collect::<Vec<_>>(), |hi| {
        let q = f.mesh().q();
        let mut se = vec![Rational::zero(); q + 1];
        let mut sw = vec![Rational::zero(); q + 1];
        for lo in 0..hi {
            let d = column_profile(f, lo, hi);
            suffix_candidates(&d, &mut se);
            prefix_candidates(&d, &mut sw);
        }
        (se, sw)
    });

    let (ne_rows, nw_rows): (Vec<_>, Vec<_>) = lo_rows.into_iter().unzip();
    let (se_rows, sw_rows): (Vec<_>, Vec<_>) = hi_rows.into_iter().unzip();
    bundle_from_rows(&mesh, ne_rows, sw_rows, nw_rows, se_rows)
}

/// Direct enumeration of every rectangle; the quadratic-in-cells oracle the
/// sweep is checked against.
pub fn corner_defects_naive(f: &GridFunction) -> DefectBundle {
    let mesh = f.mesh().clone();
    let (mut ne, mut sw) = (zero_rows(mesh.p(), mesh.q()), zero_rows(mesh.p(), mesh.q()));
    let (mut nw, mut se) = (zero_rows(mesh.p(), mesh.q()), zero_rows(mesh.p(), mesh.q()));
    for r in mesh.rects() {
        let v = f.volume(&r).unwrap();
        min_assign(&mut ne[r.i1][r.j1], v.clone());
        min_assign(&mut sw[r.i2][r.j2], v.clone());
        min_assign(&mut nw[r.i1][r.j2], v.clone());
        min_assign(&mut se[r.i2][r.j1], v);
    }
    bundle_from_rows(&mesh, ne, sw, nw, se)
}

fn bundle_from_rows(
    mesh: &Mesh,
    ne: Vec<Vec<Rational>>,
    sw: Vec<Vec<Rational>>,
    nw: Vec<Vec<Rational>>,
    se: Vec<Vec<Rational>>,
) -> DefectBundle {
    let d_ne = GridFunction::new(mesh.clone(), ne).unwrap();
    let d_sw = GridFunction::new(mesh.clone(), sw).unwrap();
    let d_nw = GridFunction::new(mesh.clone(), nw).unwrap();
    let d_se = GridFunction::new(mesh.clone(), se).unwrap();
    let d_m = d_ne.pointwise_min(&d_sw).unwrap();
    let d_o = d_nw.pointwise_min(&d_se).unwrap();
    DefectBundle { d_ne, d_sw, d_nw, d_se, d_m, d_o }
}

/// F - d_m: raises F at every main-corner defect. Fixed point exactly on
/// 2-increasing inputs.
pub fn lift_m(f: &GridFunction) -> GridFunction {
    f.sub(&corner_defects(f).d_m).unwrap()
}

/// F + d_o: lowers F at every opposite-corner defect.
pub fn drop_o(f: &GridFunction) -> GridFunction {
    f.add(&corner_defects(f).d_o).unwrap()
}

#[derive(Debug, Clone)]
pub struct IterationTrace {
    /// Successive pairs (A^n, B^n); the input pair is entry 0, duplicates of
    /// a stationary pair are not appended.
    pub pairs: Vec<(GridFunction, GridFunction)>,
    pub converged: bool,
    pub steps: usize,
}

impl IterationTrace {
    pub fn last(&self) -> &(GridFunction, GridFunction) {
        self.pairs.last().expect("trace holds at least the input pair")
    }

    /// Some(true) if the iteration settled on a single copula, Some(false)
    /// if it settled on a genuinely imprecise stationary pair, None if it
    /// ran out of steps.
    pub fn limit_is_copula(&self) -> Option<bool> {
        if self.converged {
            let (a, b) = self.last();
            Some(a == b)
        } else {
            None
        }
    }
}

/// Alternates B' = lift_m(A), A' = drop_o(B') from a validated imprecise
/// pair until stationary or max_steps applications.
pub fn iterate_pair(a: &GridFunction, b: &GridFunction, max_steps: usize) -> Result<IterationTrace> {
    let report = validate_imprecise_pair(a, b)?;
    if !report.is_imprecise_copula() {
        return Err(Error::NotImprecisePair);
    }
    let mut pairs = vec![(a.clone(), b.clone())];
    let mut converged = false;
    for _ in 0..max_steps {
        let (cur_a, _) = pairs.last().unwrap();
        let next_b = lift_m(cur_a);
        let next_a = drop_o(&next_b);
        let next = (next_a, next_b);
        if next == *pairs.last().unwrap() {
            converged = true;
            break;
        }
        pairs.push(next);
    }
    let steps = pairs.len() - 1;
    Ok(IterationTrace { pairs, converged, steps })
}
