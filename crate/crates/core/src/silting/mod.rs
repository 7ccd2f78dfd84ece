//! Presilting / d-rigid collections and everything built on them: Hom
//! vanishing, filtration extraction with respect to the collection, the
//! gamma invariant, silting certificates, class computation in the split
//! Grothendieck group, membership in the length-bounded subcategories `F_m`,
//! extension-closure checks, and the subgroup `N` with its quotient.

mod collection;
mod filtration;
mod fm;
mod theorem;
mod verify;

pub use collection::{verify_hom_vanishing, HomVanishingReport, Rigidity, SiltingCollection};
pub use filtration::{extract_filtration, ExtractOptions, Filtration, FiltrationStage};
pub use fm::{
    compute_n_subgroup, membership_in_fm, verify_fd_extension_closure, ClosureReport, Membership,
    NSubgroupReport, Obstruction,
};
pub use theorem::{verify_theorem_a, TheoremAConfig, TheoremAReport};
pub use verify::{
    class_in_k0sp, silting_certificate, verify_filtration_equivalence, verify_horseshoe,
    CertificateReport, EquivalenceReport, HorseshoeReport,
};
