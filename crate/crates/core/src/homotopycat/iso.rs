use std::collections::BTreeMap;

use crate::exactmath::{Matrix, Scalar};
use crate::homotopycat::{hom_space, minimal_reduce, ChainMap, Complex, Prng};

/// Verdict of the randomized isomorphy test.  `NotIso` is exact (graded
/// label multisets differ); `Iso` is exact (an invertible chain map was
/// found); `Unknown` means the randomized search was exhausted.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IsoVerdict {
    Iso,
    NotIso,
    Unknown,
}

/// Zero test: the minimal form has no terms.
pub fn is_zero(x: &Complex) -> bool {
    minimal_reduce(x).minimal.is_empty()
}

/// Graded label multiset of the minimal form, used as an iso pre-key.
pub fn label_key(x: &Complex) -> BTreeMap<i64, Vec<String>> {
    minimal_reduce(x).minimal.graded_labels()
}

/// Randomized isomorphy test: minimal-reduce both sides; refute by label
/// multisets; otherwise search for an invertible chain map among random
/// linear combinations of a Hom-space basis, checking degreewise
/// invertibility of the identity-coefficient blocks per vertex.
pub fn iso_test(x: &Complex, y: &Complex, prng: &mut Prng, trials: usize) -> IsoVerdict {
    let mx = minimal_reduce(x).minimal;
    let my = minimal_reduce(y).minimal;
    if mx.graded_labels() != my.graded_labels() {
        return IsoVerdict::NotIso;
    }
    match find_invertible_map(&mx, &my, prng, trials) {
        Some(_) => IsoVerdict::Iso,
        None => IsoVerdict::Unknown,
    }
}

/// Searches for an isomorphism between two *minimal* complexes with equal
/// graded labels; returns the invertible chain map when one is found.
pub fn find_invertible_map(
    mx: &Complex,
    my: &Complex,
    prng: &mut Prng,
    trials: usize,
) -> Option<ChainMap> {
    if mx.graded_labels() != my.graded_labels() {
        return None;
    }
    if mx.is_empty() {
        return Some(ChainMap::zero(mx.clone(), my.clone()));
    }
    let hom = hom_space(mx, my);
    if hom.dimension == 0 {
        return None;
    }
    let field = mx.algebra().field();
    // Deterministic first trials: each basis class alone, then random
    // combinations with small coefficients.
    for t in 0..trials {
        let candidate = if t < hom.basis.len() {
            hom.basis[t].clone()
        } else {
            let mut acc = ChainMap::zero(mx.clone(), my.clone());
            for b in &hom.basis {
                acc = acc.add(&b.scale(&prng.small_coeff(field)));
            }
            acc
        };
        if is_degreewise_invertible(&candidate) {
            return Some(candidate);
        }
    }
    None
}

/// A chain map between minimal complexes with equal graded labels is an
/// isomorphism of complexes iff each degreewise component is invertible
/// modulo the radical: for every degree and vertex, the square block of
/// identity-path coefficients has full rank.
fn is_degreewise_invertible(f: &ChainMap) -> bool {
    let x = f.source();
    let y = f.target();
    let alg = x.algebra();
    let field = alg.field();
    for n in x.degrees() {
        let src = x.summands(n);
        let dst = y.summands(n);
        if src.len() != dst.len() {
            return false;
        }
        let m = f.at(n);
        for v in 0..alg.vertex_count() {
            let rows: Vec<usize> = (0..dst.len()).filter(|&i| dst[i] == v).collect();
            let cols: Vec<usize> = (0..src.len()).filter(|&j| src[j] == v).collect();
            if rows.len() != cols.len() {
                return false;
            }
            if rows.is_empty() {
                continue;
            }
            let mut block = Matrix::zero(field, rows.len(), cols.len());
            for (bi, &i) in rows.iter().enumerate() {
                for (bj, &j) in cols.iter().enumerate() {
                    let c: Scalar = m
                        .at(i, j)
                        .identity_coeff(alg)
                        .cloned()
                        .unwrap_or_else(|| field.zero());
                    block.set(bi, bj, c);
                }
            }
            if block.rank() != rows.len() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{a3, s1_complex, x_complex};
    use crate::homotopycat::{cone_triangle, ChainMap};

    #[test]
    fn iso_test_reflexive() {
        let alg = a3();
        let mut prng = Prng::new(11);
        for c in [
            x_complex(&alg),
            s1_complex(&alg),
            Complex::stalk(alg.clone(), 2, 0),
        ] {
            assert_eq!(iso_test(&c, &c, &mut prng, 32), IsoVerdict::Iso);
        }
    }

    #[test]
    fn shift_is_not_iso() {
        let alg = a3();
        let mut prng = Prng::new(11);
        let x = x_complex(&alg);
        assert_eq!(iso_test(&x, &x.shift(1), &mut prng, 32), IsoVerdict::NotIso);
    }

    #[test]
    fn zero_objects_are_iso() {
        let alg = a3();
        let mut prng = Prng::new(11);
        let z = Complex::zero(alg.clone());
        let p = Complex::stalk(alg.clone(), 0, 0);
        let contractible = cone_triangle(&ChainMap::identity(&p)).unwrap().z().clone();
        assert!(is_zero(&contractible));
        assert_eq!(iso_test(&z, &contractible, &mut prng, 4), IsoVerdict::Iso);
    }

    #[test]
    fn split_cone_is_iso_to_sum() {
        let alg = a3();
        let mut prng = Prng::new(5);
        let x = x_complex(&alg);
        let s1 = s1_complex(&alg);
        let t = cone_triangle(&ChainMap::zero(x.clone(), s1.clone())).unwrap();
        let sum = Complex::direct_sum(&[&x.shift(1), &s1]).unwrap();
        assert_eq!(iso_test(t.z(), &sum, &mut prng, 32), IsoVerdict::Iso);
    }
}
