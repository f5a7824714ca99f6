//! Spectral calculus for Drazin invertibility.
//!
//! Exact arithmetic runs over the Gaussian rationals [`GaussRat`];
//! floating point input goes through [`Complex64`] together with a
//! [`ToleranceFrame`]. Matrix algorithms are generic over [`Scalar`].

pub mod error;
pub mod gauss;
pub mod linalg;
pub mod matrix;
pub mod mult;
pub mod operator;
pub mod poly;
pub mod scalar;
pub mod sequence;
pub mod spectra;
pub mod value;

pub use error::{Error, ParseValueError, Result};
pub use gauss::GaussRat;
pub use linalg::{AnyPolynomial, DrazinResult, JordanPresentation, MatrixBlock};
pub use matrix::Matrix;
pub use mult::{duality_report, realize, DualityReport, MultRealization};
pub use operator::{combine, is_algebraic, perturb_finite_rank, spectral_profile, CombineKind, OperatorDesc, SpectralProfile};
pub use num_complex::Complex64;
pub use poly::Polynomial;
pub use scalar::{RangeKernel, Scalar};
pub use spectra::{SetRelation, SpectralSet, Truth};
pub use value::{ComplexValue, ToleranceFrame};

pub type ExactMatrix = Matrix<GaussRat>;
pub type ApproxMatrix = Matrix<Complex64>;
pub type ExactPolynomial = Polynomial<GaussRat>;
pub type ApproxPolynomial = Polynomial<Complex64>;
