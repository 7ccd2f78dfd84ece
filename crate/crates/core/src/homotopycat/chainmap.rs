use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Error;
use crate::exactmath::Scalar;
use crate::homotopycat::{Complex, MorMatrix};
use crate::pathalgebra::Algebra;

/// A chain map `f: X -> Y`, commuting with the differentials degreewise.
#[derive(Clone, PartialEq, Debug)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    maps: BTreeMap<i64, MorMatrix>,
}

impl ChainMap {
    pub fn new(
        source: Complex,
        target: Complex,
        maps: BTreeMap<i64, MorMatrix>,
    ) -> Result<ChainMap, Error> {
        if !Arc::ptr_eq(source.algebra(), target.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let mut kept = BTreeMap::new();
        for (n, m) in maps {
            if source.summands(n).is_empty() || target.summands(n).is_empty() {
                if !m.is_zero() {
                    return Err(Error::ChainMap(format!(
                        "component at degree {n} maps between empty terms but is nonzero"
                    )));
                }
                continue;
            }
            if m.col_vertices() != source.summands(n) || m.row_vertices() != target.summands(n) {
                return Err(Error::ChainMap(format!(
                    "component at degree {n} has mismatched summand labels"
                )));
            }
            kept.insert(n, m);
        }
        let f = ChainMap {
            source,
            target,
            maps: kept,
        };
        for n in f.relevant_degrees() {
            let lhs = MorMatrix::compose(f.algebra(), &f.at(n), &f.target.diff(n));
            let rhs = MorMatrix::compose(f.algebra(), &f.source.diff(n), &f.at(n + 1));
            if lhs != rhs {
                return Err(Error::ChainMap(format!(
                    "does not commute with differentials at degree {n}"
                )));
            }
        }
        Ok(f)
    }

    fn relevant_degrees(&self) -> Vec<i64> {
        let mut degs: Vec<i64> = self
            .source
            .degrees()
            .chain(self.target.degrees())
            .collect();
        degs.sort_unstable();
        degs.dedup();
        degs
    }

    pub fn zero(source: Complex, target: Complex) -> ChainMap {
        ChainMap {
            source,
            target,
            maps: BTreeMap::new(),
        }
    }

    pub fn identity(x: &Complex) -> ChainMap {
        let maps = x
            .degrees()
            .map(|n| (n, MorMatrix::identity(x.algebra(), x.summands(n))))
            .collect();
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            maps,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.source.algebra()
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    /// Component at degree `n`, zero-filled when absent.
    pub fn at(&self, n: i64) -> MorMatrix {
        match self.maps.get(&n) {
            Some(m) => m.clone(),
            None => MorMatrix::zero(self.target.summands(n), self.source.summands(n)),
        }
    }

    pub fn components(&self) -> &BTreeMap<i64, MorMatrix> {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(MorMatrix::is_zero)
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert_eq!(self.source, other.source, "sources differ");
        assert_eq!(self.target, other.target, "targets differ");
        let mut maps = BTreeMap::new();
        for n in self.relevant_degrees() {
            if self.source.summands(n).is_empty() || self.target.summands(n).is_empty() {
                continue;
            }
            let m = self.at(n).add(&other.at(n));
            if !m.is_zero() {
                maps.insert(n, m);
            }
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps,
        }
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|(&n, m)| (n, m.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|(&n, m)| (n, m.scale(c))).collect(),
        }
    }

    /// Composite `then . first`, for `first: X -> Y` and `then: Y -> Z`.
    pub fn compose(first: &ChainMap, then: &ChainMap) -> ChainMap {
        assert_eq!(first.target, then.source, "middle objects differ");
        let mut maps = BTreeMap::new();
        for n in first.source.degrees() {
            if then.target.summands(n).is_empty() {
                continue;
            }
            let m = MorMatrix::compose(first.algebra(), &first.at(n), &then.at(n));
            if !m.is_zero() {
                maps.insert(n, m);
            }
        }
        ChainMap {
            source: first.source.clone(),
            target: then.target.clone(),
            maps,
        }
    }

    /// `Σ^k f`: components reindexed, no sign.
    pub fn shift(&self, k: i64) -> ChainMap {
        ChainMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            maps: self.maps.iter().map(|(&n, m)| (n - k, m.clone())).collect(),
        }
    }

    pub fn display(&self) -> BTreeMap<String, Vec<Vec<String>>> {
        self.maps
            .iter()
            .map(|(n, m)| (n.to_string(), m.display(self.algebra())))
            .collect()
    }
}

/// A degree `-1` graded map `h^n: X^n -> Y^{n-1}`, used as an explicit
/// witness that some chain map is null-homotopic: `dh + hd = f`.
#[derive(Clone, PartialEq, Debug)]
pub struct Homotopy {
    source: Complex,
    target: Complex,
    maps: BTreeMap<i64, MorMatrix>,
}

impl Homotopy {
    pub fn new(source: Complex, target: Complex, maps: BTreeMap<i64, MorMatrix>) -> Homotopy {
        let maps = maps
            .into_iter()
            .filter(|(n, m)| {
                !source.summands(*n).is_empty()
                    && !target.summands(n - 1).is_empty()
                    && !m.is_zero()
            })
            .collect();
        Homotopy {
            source,
            target,
            maps,
        }
    }

    pub fn zero(source: Complex, target: Complex) -> Homotopy {
        Homotopy {
            source,
            target,
            maps: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn at(&self, n: i64) -> MorMatrix {
        match self.maps.get(&n) {
            Some(m) => m.clone(),
            None => MorMatrix::zero(self.target.summands(n - 1), self.source.summands(n)),
        }
    }

    pub fn components(&self) -> &BTreeMap<i64, MorMatrix> {
        &self.maps
    }

    pub fn add(&self, other: &Homotopy) -> Homotopy {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut degs: Vec<i64> = self.maps.keys().chain(other.maps.keys()).copied().collect();
        degs.sort_unstable();
        degs.dedup();
        let maps = degs
            .into_iter()
            .map(|n| (n, self.at(n).add(&other.at(n))))
            .collect();
        Homotopy::new(self.source.clone(), self.target.clone(), maps)
    }

    /// `dh + hd` as a chain map `X -> Y`; always a chain map.
    pub fn boundary(&self) -> ChainMap {
        let alg = self.source.algebra().clone();
        let mut maps = BTreeMap::new();
        for n in self.source.degrees() {
            if self.target.summands(n).is_empty() {
                continue;
            }
            let dh = MorMatrix::compose(&alg, &self.at(n), &self.target.diff(n - 1));
            let hd = MorMatrix::compose(&alg, &self.source.diff(n), &self.at(n + 1));
            let m = dh.add(&hd);
            if !m.is_zero() {
                maps.insert(n, m);
            }
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps,
        }
    }

    /// Checks `dh + hd = f` exactly.
    pub fn witnesses(&self, f: &ChainMap) -> bool {
        assert_eq!(&self.source, f.source());
        assert_eq!(&self.target, f.target());
        self.boundary() == *f
    }

    /// Conjugate a homotopy on `M` by chain maps `g: X -> M`, `f: M -> X`,
    /// yielding `f . h . g` as a homotopy on `X`.
    pub fn conjugate(&self, g: &ChainMap, f: &ChainMap) -> Homotopy {
        assert_eq!(g.target(), &self.source);
        assert_eq!(f.source(), &self.target);
        let alg = self.source.algebra().clone();
        let x = g.source().clone();
        let y = f.target().clone();
        let mut maps = BTreeMap::new();
        for n in x.degrees() {
            if y.summands(n - 1).is_empty() {
                continue;
            }
            // X^n -> M^n -> M^{n-1} -> Y^{n-1}
            let hg = MorMatrix::compose(&alg, &g.at(n), &self.at(n));
            let fhg = MorMatrix::compose(&alg, &hg, &f.at(n - 1));
            if !fhg.is_zero() {
                maps.insert(n, fhg);
            }
        }
        Homotopy::new(x, y, maps)
    }
}
