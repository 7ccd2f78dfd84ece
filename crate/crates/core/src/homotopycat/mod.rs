//! The triangulated category `K^b(proj Λ)`: bounded complexes of labeled
//! projectives, chain maps up to homotopy, shifts, mapping cones, minimal
//! reduction, and homotopy-class Hom-space computation.
//!
//! Grading is cohomological with differentials of degree `+1`; the shift is
//! `(ΣX)^n = X^{n+1}` with the differential negated, and the mapping cone of
//! `f: X -> Y` carries the differential `[[-d_X, 0], [f, d_Y]]`.

mod chainmap;
mod complex;
mod homspace;
mod iso;
mod mormatrix;
mod random;
mod reduce;
mod triangle;

pub use chainmap::{ChainMap, Homotopy};
pub use complex::Complex;
pub use homspace::{hom_space, null_homotopy_witness, HomSpace};
pub use iso::{find_invertible_map, is_zero, iso_test, label_key, IsoVerdict};
pub use mormatrix::MorMatrix;
pub use random::{random_chain_map, random_complex, Prng, RandomComplexConfig};
pub use reduce::{minimal_reduce, Reduction};
pub use triangle::{cone_triangle, rotate, rotate_back, Triangle};
