use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactmath::{Field, Scalar};
use crate::homotopycat::{hom_space, ChainMap, Complex, MorMatrix};
use crate::pathalgebra::{Algebra, Element, VertexId};

/// SplitMix64: small, fast, and explicit.  All randomized suites thread a
/// `Prng` so runs are reproducible from the seed alone.
#[derive(Clone, Debug)]
pub struct Prng {
    state: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Prng {
        Prng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform draw from {-2, -1, 0, 1, 2}.
    pub fn small_coeff(&mut self, field: Field) -> Scalar {
        field.from_i64(self.below(5) as i64 - 2)
    }

    /// Uniform draw from {-2, -1, 1, 2}.
    pub fn small_nonzero_coeff(&mut self, field: Field) -> Scalar {
        let v = [-2i64, -1, 1, 2][self.below(4) as usize];
        field.from_i64(v)
    }

    pub fn fork(&mut self) -> Prng {
        Prng::new(self.next_u64())
    }
}

/// Shape bounds for random complexes.
#[derive(Clone, Copy, Debug)]
pub struct RandomComplexConfig {
    pub min_degree: i64,
    pub max_degree: i64,
    pub max_summands_per_degree: usize,
}

impl Default for RandomComplexConfig {
    fn default() -> Self {
        RandomComplexConfig {
            min_degree: 0,
            max_degree: 2,
            max_summands_per_degree: 2,
        }
    }
}

/// A random bounded complex with radical differentials.  Entries are random
/// combinations of length >= 1 paths with small coefficients; candidates
/// violating `d.d = 0` are re-drawn, with a zero-differential fallback, so
/// the construction always succeeds and is deterministic under the seed.
pub fn random_complex(
    algebra: &Arc<Algebra>,
    prng: &mut Prng,
    cfg: &RandomComplexConfig,
) -> Complex {
    for _attempt in 0..32 {
        let mut terms: BTreeMap<i64, Vec<VertexId>> = BTreeMap::new();
        for n in cfg.min_degree..=cfg.max_degree {
            let count = prng.below(cfg.max_summands_per_degree as u64 + 1) as usize;
            let vs: Vec<VertexId> = (0..count)
                .map(|_| prng.below(algebra.vertex_count() as u64) as usize)
                .collect();
            if !vs.is_empty() {
                terms.insert(n, vs);
            }
        }
        if terms.is_empty() {
            let v = prng.below(algebra.vertex_count() as u64) as usize;
            terms.insert(cfg.min_degree, vec![v]);
        }
        let mut diffs = BTreeMap::new();
        let degrees: Vec<i64> = terms.keys().copied().collect();
        for &n in &degrees {
            let (Some(src), Some(dst)) = (terms.get(&n), terms.get(&(n + 1))) else {
                continue;
            };
            let m = MorMatrix::build(dst, src, |r, c| {
                radical_element(algebra, prng, dst[r], src[c])
            });
            if !m.is_zero() {
                diffs.insert(n, m);
            }
        }
        if let Ok(c) = Complex::new(algebra.clone(), terms.clone(), diffs) {
            return c;
        }
        // Retry; as a last resort the loop below drops all differentials.
        if _attempt == 30 {
            return Complex::new(algebra.clone(), terms, BTreeMap::new())
                .expect("term-only complex is valid");
        }
    }
    unreachable!("random_complex retries are bounded")
}

/// Random radical element (length >= 1 paths only) for a map
/// `P_{col} -> P_{row}`; zero-biased so that sparse differentials occur.
fn radical_element(
    algebra: &Arc<Algebra>,
    prng: &mut Prng,
    row_v: VertexId,
    col_v: VertexId,
) -> Element {
    let mut e = Element::zero(row_v, col_v);
    for &p in algebra.paths_between(row_v, col_v) {
        if algebra.path_len(p) == 0 {
            continue;
        }
        if prng.below(2) == 0 {
            continue;
        }
        e.add_term(p, &prng.small_coeff(algebra.field()));
    }
    e
}

/// A random element of `Hom_{K^b}(X, Y)`: a small-coefficient combination of
/// a Hom-space basis (the zero map when the space vanishes).
pub fn random_chain_map(x: &Complex, y: &Complex, prng: &mut Prng) -> ChainMap {
    let hom = hom_space(x, y);
    let field = x.algebra().field();
    let mut acc = ChainMap::zero(x.clone(), y.clone());
    for b in &hom.basis {
        acc = acc.add(&b.scale(&prng.small_coeff(field)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::a3;

    #[test]
    fn deterministic_under_seed() {
        let alg = a3();
        let cfg = RandomComplexConfig::default();
        let a: Vec<Complex> = {
            let mut p = Prng::new(99);
            (0..10).map(|_| random_complex(&alg, &mut p, &cfg)).collect()
        };
        let b: Vec<Complex> = {
            let mut p = Prng::new(99);
            (0..10).map(|_| random_complex(&alg, &mut p, &cfg)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn random_complexes_are_valid_and_minimal() {
        let alg = a3();
        let mut p = Prng::new(3);
        let cfg = RandomComplexConfig::default();
        for _ in 0..50 {
            let c = random_complex(&alg, &mut p, &cfg);
            assert!(!c.is_empty());
            // Radical differentials: reduction cannot shrink the complex.
            let red = crate::homotopycat::minimal_reduce(&c);
            assert_eq!(red.minimal, c);
        }
    }
}
