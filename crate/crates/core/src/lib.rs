//! Explicit Ramanujan complexes from cyclic algebras over F_q(y): exact
//! arithmetic, generators, finite quotients, Cayley complexes, and spectra.

pub mod complex;
pub mod construction;
pub mod cyclic_algebra;
pub mod example;
pub mod galois;
pub mod linalg;
pub mod polyring;
pub mod projgroup;
pub mod quotient;
pub mod spectra;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Galois(#[from] galois::GaloisError),
    #[error(transparent)]
    Poly(#[from] polyring::PolyError),
    #[error(transparent)]
    Algebra(#[from] cyclic_algebra::AlgebraError),
    #[error(transparent)]
    Quotient(#[from] quotient::QuotientError),
    #[error(transparent)]
    Proj(#[from] projgroup::ProjError),
    #[error(transparent)]
    Complex(#[from] complex::ComplexError),
    #[error(transparent)]
    Spectra(#[from] spectra::SpectraError),
}
