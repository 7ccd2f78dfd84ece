//! Computational engine for the bounded homotopy category `K^b(proj Λ)` of a
//! finite dimensional quiver algebra `Λ = kQ/I` with monomial relations.
//!
//! The crate builds complexes of labeled projectives with exact scalar
//! arithmetic, computes Hom-spaces up to homotopy, extracts filtrations with
//! respect to a (pre)silting collection, and compares Grothendieck-group
//! presentations through Smith normal forms.  The `k0silting` binary exposes
//! the verification suites over JSON input files; see the crate README for
//! the file formats.

pub mod cli;
pub mod error;
pub mod exactmath;
pub mod grothendieck;
pub mod homotopycat;
pub mod pathalgebra;
pub mod report;
pub mod session;
pub mod silting;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod concurrency_contract {
    /// Core values are immutable after construction and freely shareable
    /// across tasks.
    #[test]
    fn core_types_are_send_and_sync() {
        fn witness<T: Send + Sync>() {}
        witness::<crate::pathalgebra::Algebra>();
        witness::<crate::pathalgebra::Element>();
        witness::<crate::homotopycat::Complex>();
        witness::<crate::homotopycat::ChainMap>();
        witness::<crate::homotopycat::Triangle>();
        witness::<crate::silting::SiltingCollection>();
        witness::<crate::silting::Filtration>();
        witness::<crate::grothendieck::K0SpElement>();
    }
}
