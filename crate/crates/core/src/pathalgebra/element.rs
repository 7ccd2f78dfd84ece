use std::collections::BTreeMap;
use std::fmt;

use crate::exactmath::Scalar;
use crate::pathalgebra::{Algebra, PathId, VertexId};

/// A `k`-linear combination of basis paths with common endpoints: an element
/// of `e_target . Λ . e_source` in traversal terms (all paths run from
/// `source` to `target`).
///
/// As a module map this represents right multiplication, i.e. an `Element`
/// with path endpoints `source = t`, `target = s` is a map `P_s -> P_t`; see
/// the module docs of [`crate::pathalgebra`].
#[derive(Clone, PartialEq, Debug)]
pub struct Element {
    source: VertexId,
    target: VertexId,
    /// Nonzero coefficients only, keyed by path id.
    terms: BTreeMap<PathId, Scalar>,
}

impl Element {
    pub fn zero(source: VertexId, target: VertexId) -> Element {
        Element {
            source,
            target,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(algebra: &Algebra, v: VertexId) -> Element {
        Element::from_path(algebra, algebra.identity_path(v), algebra.field().one())
    }

    pub fn from_path(algebra: &Algebra, path: PathId, coeff: Scalar) -> Element {
        let mut e = Element::zero(algebra.path_source(path), algebra.path_target(path));
        if !coeff.is_zero() {
            e.terms.insert(path, coeff);
        }
        e
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (PathId, &Scalar)> {
        self.terms.iter().map(|(p, s)| (*p, s))
    }

    pub fn coeff(&self, path: PathId) -> Option<&Scalar> {
        self.terms.get(&path)
    }

    pub fn add_term(&mut self, path: PathId, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&path) {
            Some(c) => {
                let v = c.add(coeff);
                if v.is_zero() {
                    self.terms.remove(&path);
                } else {
                    *c = v;
                }
            }
            None => {
                self.terms.insert(path, coeff.clone());
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        assert_eq!(self.source, other.source, "endpoint mismatch");
        assert_eq!(self.target, other.target, "endpoint mismatch");
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, c);
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            source: self.source,
            target: self.target,
            terms: self.terms.iter().map(|(p, c)| (*p, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(self.source, self.target);
        }
        Element {
            source: self.source,
            target: self.target,
            terms: self.terms.iter().map(|(p, s)| (*p, s.mul(c))).collect(),
        }
    }

    /// Algebra product `a . b` (right-to-left: `b` traverses first).
    /// Requires `target(b) = source(a)`; concatenations that contain a
    /// relation subword are dropped.
    pub fn compose(algebra: &Algebra, a: &Element, b: &Element) -> Element {
        assert_eq!(
            b.target, a.source,
            "compose: target of b must equal source of a"
        );
        let mut out = Element::zero(b.source, a.target);
        for (pb, cb) in &b.terms {
            for (pa, ca) in &a.terms {
                if let Some(p) = algebra.concat(*pb, *pa) {
                    out.add_term(p, &cb.mul(ca));
                }
            }
        }
        out
    }

    /// Coefficient of the identity path when the endpoints agree; the entry
    /// is invertible in `e_v Λ e_v` exactly when this is nonzero.
    pub fn identity_coeff(&self, algebra: &Algebra) -> Option<&Scalar> {
        if self.source != self.target {
            return None;
        }
        self.terms.get(&algebra.identity_path(self.source))
    }

    /// Inverse in the local ring `e_v Λ e_v`, via the nilpotent geometric
    /// series.  Panics if the element is not invertible.
    pub fn invert(&self, algebra: &Algebra) -> Element {
        let c0 = self
            .identity_coeff(algebra)
            .expect("invert: no identity component")
            .clone();
        let c0_inv = c0.inv().expect("invert: zero identity coefficient");
        let e = Element::identity(algebra, self.source);
        // n = (self - c0 e) / c0 is nilpotent; inverse = c0^{-1} sum (-n)^k.
        let n = self.sub(&e.scale(&c0)).scale(&c0_inv);
        let mut acc = e.clone();
        let mut power = e.clone();
        let mut negative = false;
        for _ in 0..=algebra.max_path_len() {
            power = Element::compose(algebra, &n, &power);
            if power.is_zero() {
                break;
            }
            negative = !negative;
            acc = if negative {
                acc.sub(&power)
            } else {
                acc.add(&power)
            };
        }
        debug_assert!(Element::compose(algebra, &n, &power).is_zero() || power.is_zero());
        acc.scale(&c0_inv)
    }

    pub fn display(&self, algebra: &Algebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(p, c)| {
                if c.is_one() {
                    algebra.path_display(*p)
                } else {
                    format!("{}*{}", c, algebra.path_display(*p))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(
                f,
                "{}",
                self.terms
                    .iter()
                    .map(|(p, c)| format!("{c}*#{p}"))
                    .collect::<Vec<_>>()
                    .join(" + ")
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Field;
    use crate::pathalgebra::{Arrow, Presentation, DEFAULT_PATH_BOUND};

    fn a3() -> Algebra {
        let pres = Presentation {
            vertices: vec!["1".into(), "2".into(), "3".into()],
            arrows: vec![
                Arrow {
                    name: "alpha".into(),
                    from: "1".into(),
                    to: "2".into(),
                },
                Arrow {
                    name: "beta".into(),
                    from: "2".into(),
                    to: "3".into(),
                },
            ],
            relations: vec![vec!["beta".into(), "alpha".into()]],
        };
        Algebra::load(&pres, Field::Q, DEFAULT_PATH_BOUND).unwrap()
    }

    fn arrow_element(alg: &Algebra, name: &str) -> Element {
        let word = vec![name.to_string()];
        let p = alg.resolve_word(&word, None).unwrap().unwrap();
        Element::from_path(alg, p, alg.field().one())
    }

    #[test]
    fn beta_after_alpha_is_zero() {
        let alg = a3();
        let alpha = arrow_element(&alg, "alpha");
        let beta = arrow_element(&alg, "beta");
        // compose(beta, alpha) = beta . alpha, killed by the relation.
        assert!(Element::compose(&alg, &beta, &alpha).is_zero());
    }

    #[test]
    fn identities_act_trivially() {
        let alg = a3();
        let alpha = arrow_element(&alg, "alpha");
        let e1 = Element::identity(&alg, 0);
        let e2 = Element::identity(&alg, 1);
        assert_eq!(Element::compose(&alg, &alpha, &e1), alpha);
        assert_eq!(Element::compose(&alg, &e2, &alpha), alpha);
    }

    #[test]
    fn composition_is_associative_on_basis_paths() {
        let alg = a3();
        let elems: Vec<Element> = (0..alg.path_count())
            .map(|p| Element::from_path(&alg, p, alg.field().one()))
            .collect();
        for a in &elems {
            for b in &elems {
                if b.target() != a.source() {
                    continue;
                }
                let ab = Element::compose(&alg, a, b);
                for c in &elems {
                    if c.target() != b.source() {
                        continue;
                    }
                    let bc = Element::compose(&alg, b, c);
                    let left = Element::compose(&alg, &ab, c);
                    let right = Element::compose(&alg, a, &bc);
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn local_inverse() {
        let alg = a3();
        // 2*e_2 is invertible; check x * x^{-1} = e.
        let x = Element::identity(&alg, 1).scale(&Field::Q.from_i64(2));
        let inv = x.invert(&alg);
        assert_eq!(Element::compose(&alg, &x, &inv), Element::identity(&alg, 1));
    }
}
