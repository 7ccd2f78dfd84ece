use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::Error;
use crate::exactmath::{smith_normal_form, IntMatrix};

/// An element of a split Grothendieck group: a finitely supported integer
/// vector over summand labels, with `<A ⊕ B> = <A> + <B>` componentwise.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct K0SpElement(pub BTreeMap<String, i64>);

impl K0SpElement {
    pub fn zero() -> K0SpElement {
        K0SpElement(BTreeMap::new())
    }

    pub fn generator(label: &str) -> K0SpElement {
        let mut m = BTreeMap::new();
        m.insert(label.to_string(), 1);
        K0SpElement(m)
    }

    pub fn add_label(&mut self, label: &str, count: i64) {
        let entry = self.0.entry(label.to_string()).or_insert(0);
        *entry += count;
        if *entry == 0 {
            self.0.remove(label);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, label: &str) -> i64 {
        self.0.get(label).copied().unwrap_or(0)
    }

    pub fn scale(&self, c: i64) -> K0SpElement {
        if c == 0 {
            return K0SpElement::zero();
        }
        K0SpElement(self.0.iter().map(|(k, v)| (k.clone(), v * c)).collect())
    }
}

impl Add for &K0SpElement {
    type Output = K0SpElement;
    fn add(self, other: &K0SpElement) -> K0SpElement {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.add_label(k, *v);
        }
        out
    }
}

impl Sub for &K0SpElement {
    type Output = K0SpElement;
    fn sub(self, other: &K0SpElement) -> K0SpElement {
        self + &(-other)
    }
}

impl Neg for &K0SpElement {
    type Output = K0SpElement;
    fn neg(self) -> K0SpElement {
        self.scale(-1)
    }
}

impl fmt::Display for K0SpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| {
                if *v == 1 {
                    format!("+<{k}>")
                } else if *v == -1 {
                    format!("-<{k}>")
                } else if *v > 0 {
                    format!("+{v}<{k}>")
                } else {
                    format!("{v}<{k}>")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A finitely presented abelian group: generators and one relation per row.
#[derive(Clone, Debug)]
pub struct AbelianGroupPresentation {
    pub generators: Vec<String>,
    pub relations: IntMatrix,
}

impl AbelianGroupPresentation {
    pub fn free(generators: Vec<String>) -> AbelianGroupPresentation {
        let relations = IntMatrix::zero(0, generators.len());
        AbelianGroupPresentation {
            generators,
            relations,
        }
    }
}

/// Canonical form of a finitely generated abelian group: free rank plus the
/// torsion invariant factors (a divisibility chain of integers > 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Serialize for GroupInvariants {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("GroupInvariants", 2)?;
        s.serialize_field("rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(BigInt::to_string).collect();
        s.serialize_field("torsion", &torsion)?;
        s.end()
    }
}

impl GroupInvariants {
    pub fn free(rank: usize) -> GroupInvariants {
        GroupInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariants of the presented group via the Smith normal form of the
/// relation matrix.
pub fn group_invariants(p: &AbelianGroupPresentation) -> GroupInvariants {
    assert_eq!(
        p.relations.cols(),
        p.generators.len(),
        "relation width must match generator count"
    );
    let snf = smith_normal_form(&p.relations);
    let nonzero = snf.diagonal.len();
    let torsion = snf
        .diagonal
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    GroupInvariants {
        free_rank: p.generators.len() - nonzero,
        torsion,
    }
}

/// Invariants of `Z^labels / <subgroup generators>`.
pub fn quotient_group(
    labels: &[String],
    subgroup: &[K0SpElement],
) -> Result<GroupInvariants, Error> {
    let mut relations = IntMatrix::zero(subgroup.len(), labels.len());
    for (r, g) in subgroup.iter().enumerate() {
        for (label, coeff) in &g.0 {
            let c = labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            relations.set(r, c, BigInt::from(*coeff));
        }
    }
    Ok(group_invariants(&AbelianGroupPresentation {
        generators: labels.to_vec(),
        relations,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_presentation() {
        let p = AbelianGroupPresentation::free(labels(&["a", "b", "c"]));
        assert_eq!(group_invariants(&p), GroupInvariants::free(3));
    }

    #[test]
    fn cyclic_of_order_six() {
        let p = AbelianGroupPresentation {
            generators: labels(&["a", "b"]),
            relations: IntMatrix::from_rows_i64(vec![vec![2, 0], vec![0, 3]]),
        };
        let inv = group_invariants(&p);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![BigInt::from(6)]);
    }

    #[test]
    fn trivial_group() {
        let p = AbelianGroupPresentation {
            generators: labels(&["a"]),
            relations: IntMatrix::from_rows_i64(vec![vec![1]]),
        };
        let inv = group_invariants(&p);
        assert_eq!(inv, GroupInvariants::free(0));
        assert_eq!(inv.to_string(), "0");
    }

    #[test]
    fn quotients() {
        let ab = labels(&["a", "b"]);
        assert_eq!(
            quotient_group(&ab, &[]).unwrap(),
            GroupInvariants::free(2)
        );
        let a_minus_b = &K0SpElement::generator("a") - &K0SpElement::generator("b");
        assert_eq!(
            quotient_group(&ab, &[a_minus_b]).unwrap(),
            GroupInvariants::free(1)
        );
        let two_a = K0SpElement::generator("a").scale(2);
        let inv = quotient_group(&labels(&["a"]), &[two_a]).unwrap();
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn unknown_label_rejected() {
        let err = quotient_group(&labels(&["a"]), &[K0SpElement::generator("z")]);
        assert!(err.is_err());
    }

    #[test]
    fn invariants_stable_under_permutation() {
        let p = AbelianGroupPresentation {
            generators: labels(&["a", "b", "c"]),
            relations: IntMatrix::from_rows_i64(vec![vec![2, 4, 0], vec![0, 6, 2]]),
        };
        let reference = group_invariants(&p);
        let permuted = AbelianGroupPresentation {
            generators: labels(&["c", "a", "b"]),
            relations: IntMatrix::from_rows_i64(vec![vec![2, 0, 6], vec![0, 2, 4]]),
        };
        assert_eq!(group_invariants(&permuted), reference);
    }
}
