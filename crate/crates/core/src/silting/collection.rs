use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;
use crate::homotopycat::{hom_space, minimal_reduce, Complex};
use crate::pathalgebra::Algebra;

/// Declared rigidity of a collection: presilting means `Hom(M, Σ^i M) = 0`
/// for all `i >= 1`; `d`-rigid only asks for `1 <= i < d`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rigidity {
    Presilting,
    Rigid(u32),
}

/// A named list of indecomposable complexes generating `add(T)`, with the
/// verification flags the downstream operations require.
#[derive(Clone, Debug)]
pub struct SiltingCollection {
    algebra: Arc<Algebra>,
    names: Vec<String>,
    complexes: Vec<Complex>,
    rigidity: Rigidity,
    verified_presilting: bool,
    verified_rigidity: Option<u32>,
    certified_silting: bool,
}

impl SiltingCollection {
    /// Builds a collection, checking that every summand is nonzero and
    /// minimal (radical differentials).
    pub fn new(
        algebra: Arc<Algebra>,
        summands: Vec<(String, Complex)>,
        rigidity: Rigidity,
    ) -> Result<SiltingCollection, Error> {
        if summands.is_empty() {
            return Err(Error::Precondition("collection has no summands".into()));
        }
        if let Rigidity::Rigid(d) = rigidity {
            if d < 2 {
                return Err(Error::Precondition(format!("rigidity d = {d} must be >= 2")));
            }
        }
        let mut names = Vec::new();
        let mut complexes = Vec::new();
        for (name, c) in summands {
            if !Arc::ptr_eq(c.algebra(), &algebra) {
                return Err(Error::AlgebraMismatch);
            }
            if c.is_empty() {
                return Err(Error::Precondition(format!("summand {name:?} is zero")));
            }
            let reduced = minimal_reduce(&c).minimal;
            if reduced != c {
                return Err(Error::Precondition(format!(
                    "summand {name:?} is not minimal (differential has an invertible component)"
                )));
            }
            if names.contains(&name) {
                return Err(Error::Precondition(format!("duplicate summand {name:?}")));
            }
            names.push(name);
            complexes.push(c);
        }
        Ok(SiltingCollection {
            algebra,
            names,
            complexes,
            rigidity,
            verified_presilting: false,
            verified_rigidity: None,
            certified_silting: false,
        })
    }

    /// Loads `{"d": 2 | "presilting", "summands": {name: complex}}`.
    pub fn from_json(algebra: Arc<Algebra>, value: &Value) -> Result<SiltingCollection, Error> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("silting file: expected object".into()))?;
        let rigidity = match obj.get("d") {
            Some(Value::String(s)) if s == "presilting" => Rigidity::Presilting,
            Some(Value::Number(n)) => {
                let d = n
                    .as_u64()
                    .ok_or_else(|| Error::Parse("silting file: bad d".into()))?;
                Rigidity::Rigid(d as u32)
            }
            _ => {
                return Err(Error::Parse(
                    "silting file: field \"d\" must be a number or \"presilting\"".into(),
                ))
            }
        };
        let summands = obj
            .get("summands")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("silting file: missing \"summands\" object".into()))?;
        let mut list = Vec::new();
        // serde_json map preserves insertion order only with a feature; sort
        // by name for a stable summand order.
        let mut names: Vec<&String> = summands.keys().collect();
        names.sort();
        for name in names {
            let c = Complex::from_json(algebra.clone(), &summands[name])?;
            list.push((name.clone(), c));
        }
        SiltingCollection::new(algebra, list, rigidity)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn summand(&self, i: usize) -> &Complex {
        &self.complexes[i]
    }

    pub fn summands(&self) -> impl Iterator<Item = (&str, &Complex)> {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.complexes.iter())
    }

    pub fn rigidity(&self) -> Rigidity {
        self.rigidity
    }

    pub fn verified_presilting(&self) -> bool {
        self.verified_presilting
    }

    pub fn verified_rigidity(&self) -> Option<u32> {
        self.verified_rigidity
    }

    pub fn certified_silting(&self) -> bool {
        self.certified_silting
    }

    pub(crate) fn set_certified_silting(&mut self) {
        self.certified_silting = true;
    }

    /// The exact shift bound beyond which every `Hom(T_i, Σ^k T_j)` vanishes
    /// for support reasons: `max over pairs (max_deg T_j - min_deg T_i)`.
    pub fn hom_vanishing_bound(&self) -> i64 {
        let min_lo = self
            .complexes
            .iter()
            .filter_map(Complex::min_degree)
            .min()
            .unwrap_or(0);
        let max_hi = self
            .complexes
            .iter()
            .filter_map(Complex::max_degree)
            .max()
            .unwrap_or(0);
        max_hi - min_lo
    }

    /// Index of a summand whose complex is the degree-0 stalk of vertex `v`.
    pub fn stalk_summand(&self, v: usize) -> Option<usize> {
        self.complexes.iter().position(|c| {
            c.width() == 1 && c.min_degree() == Some(0) && c.summands(0) == [v]
        })
    }

    /// True when the collection consists of degree-0 stalk projectives
    /// covering every vertex; extraction then has a brutal-truncation fast
    /// path.
    pub fn is_stalk_projective_collection(&self) -> bool {
        (0..self.algebra.vertex_count()).all(|v| self.stalk_summand(v).is_some())
            && self
                .complexes
                .iter()
                .all(|c| c.width() == 1 && c.min_degree() == Some(0) && c.summands(0).len() == 1)
    }
}

/// Outcome of a Hom-vanishing sweep; any nonzero dimension is listed with
/// its witness triple.
#[derive(Clone, Debug, Serialize)]
pub struct HomVanishingReport {
    pub checked_from: i64,
    pub checked_to: i64,
    /// `(source name, target name, shift, dimension)` for nonzero spaces.
    pub violations: Vec<(String, String, i64, usize)>,
    pub all_zero: bool,
    /// Shift bound that makes the presilting condition finite.
    pub support_bound: i64,
}

/// Computes `dim Hom(T_i, Σ^k T_j)` for all pairs and `k` in the range,
/// recording verification flags on the collection:
///
/// * presilting needs vanishing for `1 <= k <= support bound` (beyond the
///   bound the spaces vanish for degree reasons, so the infinite condition
///   is equivalent to this finite one);
/// * declared `d`-rigidity needs vanishing for `1 <= k < d`.
pub fn verify_hom_vanishing(
    collection: &mut SiltingCollection,
    from: i64,
    to: i64,
) -> HomVanishingReport {
    let mut violations = Vec::new();
    for (i, (name_i, t_i)) in collection.summands().enumerate() {
        for (j, (name_j, t_j)) in collection.summands().enumerate() {
            let _ = (i, j);
            for k in from..=to {
                let dim = hom_space(t_i, &t_j.shift(k)).dimension;
                if dim != 0 {
                    violations.push((name_i.to_string(), name_j.to_string(), k, dim));
                }
            }
        }
    }
    let all_zero = violations.is_empty();
    let support_bound = collection.hom_vanishing_bound();
    if from <= 1 {
        if all_zero && to >= support_bound {
            collection.verified_presilting = true;
        }
        if let Rigidity::Rigid(d) = collection.rigidity {
            let needed_to = i64::from(d) - 1;
            let zero_up_to_d = violations.iter().all(|&(_, _, k, _)| k >= i64::from(d));
            if to >= needed_to && zero_up_to_d {
                collection.verified_rigidity = Some(d);
            }
        }
        if collection.verified_presilting {
            // Presilting implies d-rigid for every d.
            if let Rigidity::Rigid(d) = collection.rigidity {
                collection.verified_rigidity = Some(d);
            }
        }
    }
    HomVanishingReport {
        checked_from: from,
        checked_to: to,
        violations,
        all_zero,
        support_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{a3, rigid2_collection, stalk_collection, x_complex};

    #[test]
    fn stalks_are_presilting() {
        let alg = a3();
        let mut col = stalk_collection(&alg);
        assert!(col.is_stalk_projective_collection());
        let bound = col.hom_vanishing_bound().max(1);
        let report = verify_hom_vanishing(&mut col, 1, bound);
        assert!(report.all_zero);
        assert!(col.verified_presilting());
    }

    #[test]
    fn s1_s3_is_two_rigid_but_not_presilting() {
        let alg = a3();
        let mut col = rigid2_collection(&alg);
        assert_eq!(col.hom_vanishing_bound(), 2);
        let report = verify_hom_vanishing(&mut col, 1, 2);
        assert!(!report.all_zero);
        // 2-rigid: no violation at k = 1; presilting fails exactly at k = 2.
        assert!(report.violations.iter().all(|&(_, _, k, _)| k == 2));
        assert!(report
            .violations
            .iter()
            .any(|v| v.0 == "S1" && v.1 == "S3" && v.2 == 2 && v.3 == 1));
        assert!(!col.verified_presilting());
        assert_eq!(col.verified_rigidity(), Some(2));
    }

    #[test]
    fn non_minimal_summand_rejected() {
        let alg = a3();
        let x = x_complex(&alg);
        let contractible = crate::homotopycat::cone_triangle(
            &crate::homotopycat::ChainMap::identity(&x),
        )
        .unwrap()
        .z()
        .clone();
        let padded = Complex::direct_sum(&[&x, &contractible]).unwrap();
        let err = SiltingCollection::new(
            alg.clone(),
            vec![("bad".into(), padded)],
            Rigidity::Presilting,
        );
        assert!(err.is_err());
    }
}
