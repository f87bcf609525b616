//! Exact q-series, Hecke and Shimura identities, and wedge-escape scans for
//! Fourier coefficients of integral and half-integral weight cusp forms.

pub mod arith;
pub mod catalog;
pub mod characters;
pub mod cyclotomic;
pub mod dirichlet;
pub mod error;
pub mod export;
pub mod hecke;
pub mod series;
pub mod shimura;
pub mod suite;
pub mod wedge;

pub use catalog::{load_form, CatalogEntry, FormSpec, LoadedForm};
pub use characters::{chi_tn, kronecker, CharacterSpec, DirichletCharacter, SymbolNumerator};
pub use cyclotomic::CycNumber;
pub use error::{Error, Result};
pub use series::{eta_quotient, unary_theta, EtaSpec, Offset, QSeries};
pub use dirichlet::{DirichletSeriesView, Eq9Report};
pub use hecke::{EulerFactor, FormContext};
pub use shimura::{HalfIntegralContext, LiftResult, SyntheticEigen};
pub use suite::{run_suite, SuiteOptions, SuiteReport};
pub use wedge::{ScanReport, Wedge};
