//! Free abelian groups on summand labels, finitely presented abelian groups
//! from relation lattices, quotients, and isomorphy of group presentations,
//! plus a sampled presentation of `K_0(K^b(proj Λ))` by triangle relations.

mod group;
mod sampler;

pub use group::{
    group_invariants, quotient_group, AbelianGroupPresentation, GroupInvariants, K0SpElement,
};
pub use sampler::{sampled_k0_presentation, K0SampleOutcome, SamplerConfig};
