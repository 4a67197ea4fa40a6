//! Exact arithmetic and linear algebra over ℤ, ℚ, ℤ[t^±1], ℚ[t^±1] and ℚ(t).

pub mod laurent;
pub mod linalg;
pub mod matrix;
pub mod ratfunc;
pub mod ring;
pub mod snf;

pub use laurent::{parse_laurent, LaurentPoly, QLaurent, ZLaurent};
pub use linalg::{
    determinant, determinant_fraction_free, hnf_columns, kernel_pid, lattice_intersection,
    module_intersection_laurent, rank_kernel_image, solve_field, solve_pid, span_intersection,
    RankKernelImage,
};
pub use matrix::Matrix;
pub use ratfunc::RationalFunction;
pub use ring::{Coefficient, EuclideanDomain, Field, IntegralDomain, Ring};
pub use snf::{certificates_checked, snf, SnfResult};
