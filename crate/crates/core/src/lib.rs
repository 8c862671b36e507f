//! Exact homological invariants of tight graph maps on a wedge of circles
//! and of toral endomorphisms: Bowen-Franks groups, periodic-point
//! displacements, the Franks semiconjugacy, shadowing classes, injectivity
//! certificates and rotation sets.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals)
//! except eigenvalue approximations, which carry a certified radius.

pub mod bfgroup;
pub mod freegroup;
pub mod graphmap;
pub mod intlinalg;
pub mod rotation;
pub mod semiconj;

use bfgroup::BfError;
use freegroup::FreeGroupError;
use graphmap::GraphMapError;
use intlinalg::LinalgError;
use rotation::RotationError;
use semiconj::SemiconjError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Bf(#[from] BfError),
    #[error(transparent)]
    FreeGroup(#[from] FreeGroupError),
    #[error(transparent)]
    GraphMap(#[from] GraphMapError),
    #[error(transparent)]
    Semiconj(#[from] SemiconjError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

impl Error {
    /// Module-qualified error code such as `bfgroup::RootOfUnitySpectrum`.
    pub fn code(&self) -> String {
        let (module, variant) = match self {
            Error::Linalg(e) => ("intlinalg", match e {
                LinalgError::NotSquare { .. } => "NotSquare",
                LinalgError::SingularMatrix => "SingularMatrix",
                LinalgError::NotDivisible { .. } => "NotDivisible",
                LinalgError::NotExpanding => "NotExpanding",
                LinalgError::DimensionMismatch { .. } => "DimensionMismatch",
                LinalgError::UnknownNorm(_) => "UnknownNorm",
            }),
            Error::Bf(e) => ("bfgroup", bf_variant(e)),
            Error::FreeGroup(e) => ("freegroup", match e {
                FreeGroupError::RankMismatch { .. } => "RankMismatch",
                FreeGroupError::GeneratorOutOfRange { .. } => "GeneratorOutOfRange",
                FreeGroupError::TooLong { .. } => "BudgetExceeded",
            }),
            Error::GraphMap(GraphMapError::Bf(e)) => ("bfgroup", bf_variant(e)),
            Error::GraphMap(e) => ("graphmap", match e {
                GraphMapError::DegenerateEdge(_) => "DegenerateEdge",
                GraphMapError::NotExpanding => "NotExpanding",
                GraphMapError::NormNotAdapted(_) => "NormNotAdapted",
                GraphMapError::NonIsolated(_) => "NonIsolated",
                GraphMapError::BudgetExceeded { .. } => "BudgetExceeded",
                GraphMapError::Bf(_) => unreachable!(),
            }),
            Error::Semiconj(SemiconjError::GraphMap(e)) => {
                return Error::GraphMap(e.clone()).code();
            }
            Error::Semiconj(e) => ("semiconj", match e {
                SemiconjError::NotExpanding => "NotExpanding",
                SemiconjError::NonUniformExpansion => "NonUniformExpansion",
                SemiconjError::ComplexOrSmallEigenvalue(_) => "ComplexOrSmallEigenvalue",
                SemiconjError::NormNotAdapted(_) => "NormNotAdapted",
                SemiconjError::BudgetExceeded { .. } => "BudgetExceeded",
                SemiconjError::GraphMap(_) => unreachable!(),
            }),
            Error::Rotation(e) => ("rotation", match e {
                RotationError::NontrivialHomologyAction => "NontrivialHomologyAction",
                RotationError::NotEigenvectorOne => "NotEigenvectorOne",
                RotationError::BudgetExceeded { .. } => "BudgetExceeded",
            }),
        };
        format!("{module}::{variant}")
    }

    /// Whether a configured size limit was hit.
    pub fn is_budget(&self) -> bool {
        self.code().ends_with("::BudgetExceeded")
    }
}

fn bf_variant(e: &BfError) -> &'static str {
    match e {
        BfError::RootOfUnitySpectrum => "RootOfUnitySpectrum",
        BfError::DimensionMismatch { .. } => "DimensionMismatch",
        BfError::NotDivisible { .. } => "NotDivisible",
        BfError::ZeroLevel => "ZeroLevel",
    }
}
