//! Discrete periodic bicycle paths and the Darboux transformation.
//!
//! A bicycle `(n, k)`-path is a periodic polygonal path `V_{i+n} = V_i + e1`
//! with equal edge lengths and equal `k`-diagonal lengths; the segment
//! `V_i V_{i+k}` models the rigid frame between the wheels of a bicycle
//! riding a spatially periodic track. This crate provides:
//!
//! - exact-rational and float scalar modes behind one [`scalar::Scalar`]
//!   trait, so classification claims can be checked as identities;
//! - constructors and validators for the classified path families
//!   ([`path`]);
//! - the Darboux step and transformation, per-edge Möbius maps on the
//!   projective circle parameter, monodromy and closure vectors, and
//!   linkage decompositions ([`darboux`]);
//! - the area-under-path functional and area-preservation checks, plus
//!   conjugacy-invariant sweeps over the leg length ([`area`]);
//! - a damped least-squares rigidity search with seeded random starts
//!   ([`rigidity`]);
//! - JSON persistence ([`json`]) and deterministic SVG figures ([`svg`]).

pub mod area;
pub mod darboux;
pub mod error;
pub mod geom;
pub mod json;
pub mod mobius;
pub mod path;
pub mod rigidity;
pub mod scalar;
pub mod svg;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar, ScalarMode, DEFAULT_TOL};


pub mod prelude {
    //! Common imports for downstream code.
    pub use crate::area::{
        area_under_path, check_area_preservation, check_quad_triangle_equality, sweep_invariant,
        AreaBaseline,
    };
    pub use crate::darboux::{
        closure_vectors, darboux_step, darboux_transform, decompose_linkages, edge_mobius,
        monodromy, verify_correspondence, Correspondence, DarbouxParams, DarbouxVector,
    };
    pub use crate::geom::{cross, dot, is_parallel, shoelace_area, triangle_area, Point, Vector};
    pub use crate::mobius::{MobiusMap, ProjectiveParam};
    pub use crate::path::{
        check_trapezoidal, classify_as_family, enumerate_sign_sequences, make_regular,
        make_sign_sequence_path, validate_equilateral, validate_k_diagonals, validate_path,
        FamilyClass, PathParams, PeriodicPath, SignSequence, Verdict,
    };
    pub use crate::rigidity::{
        random_search, solve_from_start, ConstraintSystem, SolveConfig, SolveReport,
    };
    pub use crate::scalar::{Rational, Scalar, ScalarMode, DEFAULT_TOL};
}
