pub mod brute;
pub mod extremal;
mod lfun;
mod pvalues;
mod sandwich;
mod witness;

pub use extremal::{check_extremality, check_extremality_seq, construct_through_point, copula_range_at};
pub use lfun::{l_functional, l_functional_union, single_rect_l};
pub use pvalues::{gamma, p_main, p_opposite};
pub use sandwich::{interval_is_empty, sandwich_greedy, sandwich_lp_oracle};
pub use witness::negative_witness;

use crate::gridfn::GridFunction;
use crate::mesh::{MultiplicityField, RectUnion};
use ratlp::Rational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Rational extended with the two infinities (the empty-infimum convention).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    MinusInfinity,
    Finite(Rational),
    PlusInfinity,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Extended) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Extended) -> Ordering {
        use Extended::*;
        match (self, other) {
            (MinusInfinity, MinusInfinity) | (PlusInfinity, PlusInfinity) => Ordering::Equal,
            (MinusInfinity, _) | (_, PlusInfinity) => Ordering::Less,
            (_, MinusInfinity) | (PlusInfinity, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialEq<Rational> for Extended {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, Extended::Finite(v) if v == other)
    }
}

impl From<Rational> for Extended {
    fn from(v: Rational) -> Extended {
        Extended::Finite(v)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::MinusInfinity => write!(f, "-inf"),
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::PlusInfinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Main,
    Opposite,
}

/// Optimal ratio L(R)/|m_R(x)| for one grid point, with an attaining
/// integer multiset when the solver recovered one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PValue {
    pub value: Extended,
    pub attaining: Option<RectUnion>,
}

/// Integer multiset of rectangles on which the L-functional is negative,
/// certifying that the interval contains no copula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub union: RectUnion,
    pub field: MultiplicityField,
    pub l_value: Rational,
}

impl Witness {
    /// Checks the definitional invariants: the field matches the union and
    /// the functional value is strictly negative.
    pub fn build(a: &GridFunction, b: &GridFunction, union: RectUnion) -> crate::Result<Witness> {
        let field = crate::mesh::multiplicity_field(&union, a.mesh())?;
        let l_value = l_functional(a, b, &field)?;
        if !l_value.is_negative() {
            return Err(crate::Error::Internal(format!(
                "candidate witness has nonnegative value {l_value}"
            )));
        }
        Ok(Witness { union, field, l_value })
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Item {
            i1: usize,
            i2: usize,
            j1: usize,
            j2: usize,
            count: u64,
        }
        let rects: Vec<Item> = self
            .union
            .items()
            .iter()
            .map(|(r, c)| Item { i1: r.i1, i2: r.i2, j1: r.j1, j2: r.j2, count: *c })
            .collect();
        let mut st = s.serialize_struct("Witness", 2)?;
        st.serialize_field("rects", &rects)?;
        st.serialize_field("l_value", &self.l_value.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SandwichMethod {
    Greedy,
    LpOracle,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SandwichOutcome {
    Copula(GridFunction),
    Infeasible(Witness),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichResult {
    pub outcome: SandwichOutcome,
    pub method: SandwichMethod,
}

impl SandwichResult {
    pub fn copula(&self) -> Option<&GridFunction> {
        match &self.outcome {
            SandwichOutcome::Copula(c) => Some(c),
            SandwichOutcome::Infeasible(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            SandwichOutcome::Copula(_) => None,
            SandwichOutcome::Infeasible(w) => Some(w),
        }
    }
}

/// One grid point violating an envelope condition: the gap exceeds the
/// relevant P value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailingPoint {
    pub point: (usize, usize),
    pub gap: Rational,
    pub p_value: Extended,
    pub anchor: Anchor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalityReport {
    /// B is the pointwise supremum of the copulas in the interval.
    pub upper_extremal: bool,
    /// A is the pointwise infimum.
    pub lower_extremal: bool,
    pub failing_points: Vec<FailingPoint>,
}
