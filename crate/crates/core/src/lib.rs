//! Numerical solving of square polynomial systems by total-degree homotopy
//! continuation.
//!
//! The pipeline: parse or generate a [`PolynomialSystem`], compile it to a
//! straight-line program with an attached Jacobian ([`slp`]), build the
//! linear homotopy `(1-t)·g + γ·t·f` from the total-degree start system
//! ([`homotopy`]), and follow every start solution to `t = 1` with a
//! predictor-corrector tracker ([`tracker`]).

pub mod bench;
pub mod homotopy;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod slp;
pub mod tracker;

pub use num_complex::Complex64;

pub use homotopy::{make_homotopy, random_gamma, total_degree_start, Homotopy, HomotopyError};
pub use linalg::{inf_norm, lu_solve, ComplexMatrix, LinalgError};
pub use parse::{parse_complex, parse_point, parse_points, parse_system, ParseError};
pub use poly::{evaluate_dense, total_degree, Monomial, PolyError, Polynomial, PolynomialSystem};
pub use slp::{attach_jacobian, compile_horner, SlProgram, SlpWorkspace};
pub use tracker::{
    refine, solve_system, track, track_path, PathStatus, Predictor, Solution, SolveReport, TrackedPath,
    TrackerSettings,
};
