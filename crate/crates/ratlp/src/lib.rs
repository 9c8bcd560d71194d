//! Exact linear programming over arbitrary-precision rationals.
//!
//! The solver is a dense two-phase simplex. Pricing is Dantzig's rule until a
//! run of degenerate pivots, then Bland's rule, so termination is guaranteed
//! while typical instances stay fast. Optima come with exact dual values and
//! infeasible systems come with a Farkas certificate; both are re-checked by
//! substitution in debug builds.

mod rational;
mod simplex;

pub use rational::{ParseRationalError, Rational};
pub use simplex::{
    solve, verify_farkas, verify_optimal, FarkasCertificate, LpError, LpOutcome, LpProblem,
    LpRow, LpSolution, Relation,
};
