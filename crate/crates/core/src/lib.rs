//! Extremal functions of linear forms over finite sets of integers.
//!
//! For a linear form `f(x_1, ..., x_m) = u_1 x_1 + ... + u_m x_m` with
//! positive integer coefficients and a finite set `A`, the image `f(A)` is
//! the set of values of `f` with every argument ranging over `A`. This crate
//! computes `N_f(k)` and `M_f(k)`, the least and greatest `|f(A)|` over
//! `k`-element sets, with certificates for the lower bounds, and explores
//! which image sizes occur in between.
//!
//! ```
//! use linform::{compute_nf, LinearForm, NfConfig};
//!
//! let f: LinearForm = "1,2,3".parse().unwrap();
//! let r = compute_nf(&f, 4, &NfConfig::default()).unwrap();
//! assert_eq!(r.best, 19);
//! assert!(r.exact);
//! ```

pub mod engine;
pub mod error;
pub mod explorer;
pub mod forms;
pub mod sets;
pub mod theory;

pub use engine::{
    compute_mf, compute_nf, enumerate_minimizers, exact_nf2, lower_certificate, search_min,
    Certificate, CertificateKind, ExtremalResult, MfResult, NfConfig, SearchConfig, SearchOutcome,
};
pub use error::{Error, Result};
pub use explorer::{spectrum, ScanFinding, ScanStatus, SpectrumReport};
pub use forms::{LinearForm, SubsetSumSet};
pub use sets::{canonicalize, image, KSet, ValueSet};
pub use theory::{verify_suite, Bounds, Suite, VerificationReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/sets.md")]
    mod sets {}
    #[doc = include_str!("../../../book/src/minimum.md")]
    mod minimum {}
    #[doc = include_str!("../../../book/src/maximum.md")]
    mod maximum {}
    #[doc = include_str!("../../../book/src/explorer.md")]
    mod explorer {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
