//! A finite dimensional algebra `Λ = kQ/I` presented by a quiver `Q` and
//! monomial relations `I`, with computable path bases for the Hom-spaces
//! between the indecomposable projectives.
//!
//! # Conventions (fixed once, used everywhere)
//!
//! * Paths are stored in **traversal order**: `arrows[0]` leaves the path's
//!   source vertex.  The displayed word and the JSON encoding use
//!   **composition order** (rightmost arrow acts first), so the relation
//!   `beta . alpha` is written `["beta", "alpha"]` and traverses `alpha`
//!   first.
//! * The algebra product is composition: `compose(a, b) = a . b` is defined
//!   when `target(b) = source(a)` and traverses `b` first.
//! * Modules are **left** modules, `P_v = Λ e_v` is the projective at vertex
//!   `v`, and module maps act by **right multiplication**.  Consequently
//!   `Hom_Λ(P_s, P_t)` is identified with the span of quiver paths `t -> s`,
//!   and composing module maps `first: P_a -> P_b` then `next: P_b -> P_c`
//!   corresponds to `compose(first, next)` on the underlying elements.
//!
//! Under these conventions the two-term complex `P_2 -> P_1` over the quiver
//! `1 -> 2 -> 3` with relation `beta.alpha = 0` is the right multiplication
//! by `alpha`, matching the usual presentation of such algebras.

mod algebra;
mod element;

pub use algebra::{Algebra, Arrow, PathId, Presentation, VertexId, DEFAULT_PATH_BOUND};
pub use element::Element;
