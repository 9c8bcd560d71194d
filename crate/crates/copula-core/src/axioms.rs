use crate::error::Result;
use crate::gridfn::GridFunction;
use crate::mesh::Rect;
use crate::par::ordered_map;
use ratlp::Rational;
use serde::{Deserialize, Serialize};

pub const DEFAULT_WITNESS_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomTag {
    Grounded,
    Neutral,
    Increasing1,
    Increasing2,
    QuasiIncreasing2,
}

impl AxiomTag {
    pub const ALL: [AxiomTag; 5] = [
        AxiomTag::Grounded,
        AxiomTag::Neutral,
        AxiomTag::Increasing1,
        AxiomTag::Increasing2,
        AxiomTag::QuasiIncreasing2,
    ];

    fn index(self) -> usize {
        match self {
            AxiomTag::Grounded => 0,
            AxiomTag::Neutral => 1,
            AxiomTag::Increasing1 => 2,
            AxiomTag::Increasing2 => 3,
            AxiomTag::QuasiIncreasing2 => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSite {
    Point(usize, usize),
    Rect(Rect),
}

/// One falsified axiom instance: where, and the offending value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomWitness {
    pub tag: AxiomTag,
    pub site: WitnessSite,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub grounded: bool,
    pub neutral: bool,
    pub increasing1: bool,
    pub increasing2: bool,
    pub quasi_increasing2: bool,
    /// At most `cap` witnesses per axiom; `failure_counts` keeps full totals.
    pub witnesses: Vec<AxiomWitness>,
    pub failure_counts: [u64; 5],
}

impl ValidationReport {
    pub fn is_discrete_copula(&self) -> bool {
        self.grounded && self.neutral && self.increasing2
    }

    pub fn is_discrete_quasi_copula(&self) -> bool {
        self.grounded && self.neutral && self.quasi_increasing2
    }

    pub fn failures(&self, tag: AxiomTag) -> u64 {
        self.failure_counts[tag.index()]
    }
}

struct WitnessSink {
    cap: usize,
    witnesses: Vec<AxiomWitness>,
    counts: [u64; 5],
}

impl WitnessSink {
    fn new(cap: usize) -> WitnessSink {
        WitnessSink { cap, witnesses: Vec::new(), counts: [0; 5] }
    }

    fn record(&mut self, tag: AxiomTag, site: WitnessSite, value: Rational) {
        let idx = tag.index();
        self.counts[idx] += 1;
        if self.counts[idx] as usize <= self.cap {
            self.witnesses.push(AxiomWitness { tag, site, value });
        }
    }

    fn clean(&self, tag: AxiomTag) -> bool {
        self.counts[tag.index()] == 0
    }
}

/// Boundary-only scan: zero on the two lower edges, marginal values on the
/// two upper ones. Much cheaper than a full validation.
pub fn is_grounded_neutral(f: &GridFunction) -> bool {
    let mesh = f.mesh();
    let (p, q) = (mesh.p(), mesh.q());
    (0..=p).all(|i| f.value(i, 0).is_zero() && f.value(i, q) == mesh.x(i))
        && (0..=q).all(|j| f.value(0, j).is_zero() && f.value(p, j) == mesh.y(j))
}

pub fn validate_function(f: &GridFunction) -> ValidationReport {
    validate_function_with_cap(f, DEFAULT_WITNESS_CAP)
}

pub fn validate_function_with_cap(f: &GridFunction, cap: usize) -> ValidationReport {
    validate_impl(f, cap, true)
}

/// Single-threaded reference path; same output as `validate_function`.
pub fn validate_function_seq(f: &GridFunction) -> ValidationReport {
    validate_impl(f, DEFAULT_WITNESS_CAP, false)
}

fn validate_impl(f: &GridFunction, cap: usize, parallel: bool) -> ValidationReport {
    let mesh = f.mesh();
    let (p, q) = (mesh.p(), mesh.q());
    let mut sink = WitnessSink::new(cap);

    for i in 0..=p {
        if !f.value(i, 0).is_zero() {
            sink.record(AxiomTag::Grounded, WitnessSite::Point(i, 0), f.value(i, 0).clone());
        }
        if f.value(i, q) != mesh.x(i) {
            sink.record(AxiomTag::Neutral, WitnessSite::Point(i, q), f.value(i, q).clone());
        }
    }
    for j in 0..=q {
        if !f.value(0, j).is_zero() {
            sink.record(AxiomTag::Grounded, WitnessSite::Point(0, j), f.value(0, j).clone());
        }
        if f.value(p, j) != mesh.y(j) {
            sink.record(AxiomTag::Neutral, WitnessSite::Point(p, j), f.value(p, j).clone());
        }
    }

    // Componentwise monotonicity; the witness is the larger-index point.
    for i in 0..=p {
        for j in 0..=q {
            let v = f.value(i, j);
            if (i > 0 && f.value(i - 1, j) > v) || (j > 0 && f.value(i, j - 1) > v) {
                sink.record(AxiomTag::Increasing1, WitnessSite::Point(i, j), v.clone());
            }
        }
    }

    // Every rectangle, grouped by x-extent so the scan parallelizes; each
    // group reports its violations in (j1, j2) order and groups concatenate
    // in (i1, i2) order, so witness order is independent of thread count.
    let mut xpairs = Vec::with_capacity(p * (p + 1) / 2);
    for i1 in 0..p {
        for i2 in i1 + 1..=p {
            xpairs.push((i1, i2));
        }
    }
    let groups = ordered_map(parallel, xpairs, |(i1, i2)| {
        let mut bad = Vec::new();
        for j1 in 0..q {
            for j2 in j1 + 1..=q {
                let r = Rect { i1, i2, j1, j2 };
                let v = f.volume(&r).unwrap();
                if v.is_negative() {
                    bad.push((r, v));
                }
            }
        }
        bad
    });
    for (r, v) in groups.into_iter().flatten() {
        sink.record(AxiomTag::Increasing2, WitnessSite::Rect(r), v.clone());
        if r.touches_boundary(mesh) {
            sink.record(AxiomTag::QuasiIncreasing2, WitnessSite::Rect(r), v);
        }
    }

    ValidationReport {
        grounded: sink.clean(AxiomTag::Grounded),
        neutral: sink.clean(AxiomTag::Neutral),
        increasing1: sink.clean(AxiomTag::Increasing1),
        increasing2: sink.clean(AxiomTag::Increasing2),
        quasi_increasing2: sink.clean(AxiomTag::QuasiIncreasing2),
        witnesses: sink.witnesses,
        failure_counts: sink.counts,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IcCondition {
    Ic1,
    Ic2,
    Ic3,
    Ic4,
}

impl IcCondition {
    pub const ALL: [IcCondition; 4] =
        [IcCondition::Ic1, IcCondition::Ic2, IcCondition::Ic3, IcCondition::Ic4];

    fn index(self) -> usize {
        match self {
            IcCondition::Ic1 => 0,
            IcCondition::Ic2 => 1,
            IcCondition::Ic3 => 2,
            IcCondition::Ic4 => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairViolation {
    pub condition: IcCondition,
    pub rect: Rect,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub ic1: bool,
    pub ic2: bool,
    pub ic3: bool,
    pub ic4: bool,
    pub order_ok: bool,
    pub lower: ValidationReport,
    pub upper: ValidationReport,
    pub witnesses: Vec<PairViolation>,
    pub failure_counts: [u64; 4],
}

impl PairReport {
    pub fn ic(&self, c: IcCondition) -> bool {
        match c {
            IcCondition::Ic1 => self.ic1,
            IcCondition::Ic2 => self.ic2,
            IcCondition::Ic3 => self.ic3,
            IcCondition::Ic4 => self.ic4,
        }
    }

    pub fn is_imprecise_copula(&self) -> bool {
        self.ic1
            && self.ic2
            && self.ic3
            && self.ic4
            && self.order_ok
            && self.lower.is_discrete_quasi_copula()
            && self.upper.is_discrete_quasi_copula()
    }
}

pub fn validate_imprecise_pair(a: &GridFunction, b: &GridFunction) -> Result<PairReport> {
    validate_pair_impl(a, b, DEFAULT_WITNESS_CAP, true)
}

pub fn validate_imprecise_pair_seq(a: &GridFunction, b: &GridFunction) -> Result<PairReport> {
    validate_pair_impl(a, b, DEFAULT_WITNESS_CAP, false)
}

fn validate_pair_impl(
    a: &GridFunction,
    b: &GridFunction,
    cap: usize,
    parallel: bool,
) -> Result<PairReport> {
    a.same_mesh(b)?;
    let mesh = a.mesh();
    let (p, q) = (mesh.p(), mesh.q());

    let order_ok = a.le(b)?;

    let mut xpairs = Vec::with_capacity(p * (p + 1) / 2);
    for i1 in 0..p {
        for i2 in i1 + 1..=p {
            xpairs.push((i1, i2));
        }
    }
    let groups = ordered_map(parallel, xpairs, |(i1, i2)| {
        let mut bad = Vec::new();
        for j1 in 0..q {
            for j2 in j1 + 1..=q {
                let r = Rect { i1, i2, j1, j2 };
                // Corners: sw = (i1,j1), se = (i2,j1), ne = (i2,j2),
                // nw = (i1,j2). One bound at a time is swapped in.
                let (asw, ase, ane, anw) = (
                    a.value(i1, j1),
                    a.value(i2, j1),
                    a.value(i2, j2),
                    a.value(i1, j2),
                );
                let (bsw, bse, bne, bnw) = (
                    b.value(i1, j1),
                    b.value(i2, j1),
                    b.value(i2, j2),
                    b.value(i1, j2),
                );
                let vals = [
                    asw + bne - ase - anw,
                    bsw + ane - ase - anw,
                    bsw + bne - bse - anw,
                    bsw + bne - ase - bnw,
                ];
                for (k, v) in vals.into_iter().enumerate() {
                    if v.is_negative() {
                        bad.push((IcCondition::ALL[k], r, v));
                    }
                }
            }
        }
        bad
    });

    let mut witnesses = Vec::new();
    let mut counts = [0u64; 4];
    for (condition, rect, value) in groups.into_iter().flatten() {
        let idx = condition.index();
        counts[idx] += 1;
        if counts[idx] as usize <= cap {
            witnesses.push(PairViolation { condition, rect, value });
        }
    }

    Ok(PairReport {
        ic1: counts[0] == 0,
        ic2: counts[1] == 0,
        ic3: counts[2] == 0,
        ic4: counts[3] == 0,
        order_ok,
        lower: validate_impl(a, cap, parallel),
        upper: validate_impl(b, cap, parallel),
        witnesses,
        failure_counts: counts,
    })
}
