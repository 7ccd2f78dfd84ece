use std::collections::BTreeMap;

use crate::homotopycat::{ChainMap, Complex, Homotopy, MorMatrix};
use crate::pathalgebra::Element;

/// Result of minimal reduction: a homotopy-equivalent complex with all
/// differential entries in the radical, plus the equivalence data.
/// `to_minimal . from_minimal = id` exactly, and `homotopy` witnesses
/// `id - from_minimal . to_minimal = dh + hd` on the original complex.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub minimal: Complex,
    pub to_minimal: ChainMap,
    pub from_minimal: ChainMap,
    pub homotopy: Homotopy,
}

struct Step {
    smaller: Complex,
    g: ChainMap,
    f: ChainMap,
    h: Homotopy,
}

/// Strips contractible two-term summands until every differential entry lies
/// in the radical (no nonzero identity-path coefficient).  Idempotent, and
/// the returned witnesses are verified exactly before returning.
pub fn minimal_reduce(x: &Complex) -> Reduction {
    let mut cur = x.clone();
    let mut g_total = ChainMap::identity(x);
    let mut f_total = ChainMap::identity(x);
    let mut h_total = Homotopy::zero(x.clone(), x.clone());
    while let Some((n, r, c)) = find_pivot(&cur) {
        let step = reduce_step(&cur, n, r, c);
        let h_on_x = step.h.conjugate(&g_total, &f_total);
        h_total = h_total.add(&h_on_x);
        g_total = ChainMap::compose(&g_total, &step.g);
        f_total = ChainMap::compose(&step.f, &f_total);
        cur = step.smaller;
    }
    let gf = ChainMap::compose(&f_total, &g_total);
    assert_eq!(gf, ChainMap::identity(&cur), "g.f must be the identity");
    let fg = ChainMap::compose(&g_total, &f_total);
    let defect = ChainMap::identity(x).sub(&fg);
    assert!(
        h_total.witnesses(&defect),
        "homotopy witness for id - f.g fails"
    );
    Reduction {
        minimal: cur,
        to_minimal: g_total,
        from_minimal: f_total,
        homotopy: h_total,
    }
}

/// First differential entry with an invertible component, in (degree, row,
/// column) scan order; deterministic.
fn find_pivot(x: &Complex) -> Option<(i64, usize, usize)> {
    let alg = x.algebra();
    for n in x.degrees() {
        let d = x.diff(n);
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                if d.at(r, c).identity_coeff(alg).is_some() {
                    return Some((n, r, c));
                }
            }
        }
    }
    None
}

fn reduce_step(cur: &Complex, n: i64, r: usize, c: usize) -> Step {
    let alg = cur.algebra().clone();
    let d_n = cur.diff(n);
    let a = d_n.at(r, c);
    let a_inv = a.invert(&alg);

    // Smaller complex: drop column summand c at degree n, row summand r at
    // degree n+1; Schur-correct d^n, trim d^{n-1} and d^{n+1}.
    let mut terms = cur.terms_map().clone();
    let src: Vec<_> = cur
        .summands(n)
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != c)
        .map(|(_, v)| *v)
        .collect();
    let dst: Vec<_> = cur
        .summands(n + 1)
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, v)| *v)
        .collect();
    terms.insert(n, src);
    terms.insert(n + 1, dst);

    let mut diffs = BTreeMap::new();
    for m in cur.degrees() {
        if m == n || m == n - 1 || m == n + 1 {
            continue;
        }
        let d = cur.diff(m);
        if !d.is_zero() {
            diffs.insert(m, d);
        }
    }
    let corrected = {
        let mut full = d_n.clone();
        for rr in 0..d_n.rows() {
            if rr == r {
                continue;
            }
            for cc in 0..d_n.cols() {
                if cc == c {
                    continue;
                }
                let b = d_n.at(r, cc);
                let cc_elt = d_n.at(rr, c);
                if b.is_zero() || cc_elt.is_zero() {
                    continue;
                }
                // Module composite c . a^{-1} . b, elements multiplied in
                // application order.
                let corr = Element::compose(
                    &alg,
                    &Element::compose(&alg, b, &a_inv),
                    cc_elt,
                );
                full.set(rr, cc, full.at(rr, cc).sub(&corr));
            }
        }
        full.minor(Some(r), Some(c))
    };
    if !corrected.is_zero() {
        diffs.insert(n, corrected);
    }
    let below = cur.diff(n - 1).minor(Some(c), None);
    if !below.is_zero() {
        diffs.insert(n - 1, below);
    }
    let above = cur.diff(n + 1).minor(None, Some(r));
    if !above.is_zero() {
        diffs.insert(n + 1, above);
    }
    let smaller = Complex::new(alg.clone(), terms, diffs).expect("reduction preserves d.d = 0");

    // g: cur -> smaller.  Identity on kept summands; at degree n+1 the
    // dropped row feeds back through -(d[y][c] . a^{-1}).
    let mut g_maps = BTreeMap::new();
    for m in cur.degrees() {
        let rows = smaller.summands(m);
        let cols = cur.summands(m);
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut mm = MorMatrix::zero(rows, cols);
        if m == n {
            let mut ri = 0;
            for (j, &v) in cur.summands(n).iter().enumerate() {
                if j == c {
                    continue;
                }
                mm.set(ri, j, Element::identity(&alg, v));
                ri += 1;
            }
        } else if m == n + 1 {
            let mut ri = 0;
            for (i, &v) in cur.summands(n + 1).iter().enumerate() {
                if i == r {
                    continue;
                }
                mm.set(ri, i, Element::identity(&alg, v));
                let feed = Element::compose(&alg, &a_inv, d_n.at(i, c)).neg();
                mm.set(ri, r, feed);
                ri += 1;
            }
        } else {
            for (i, &v) in cur.summands(m).iter().enumerate() {
                mm.set(i, i, Element::identity(&alg, v));
            }
        }
        g_maps.insert(m, mm);
    }
    let g = ChainMap::new(cur.clone(), smaller.clone(), g_maps).expect("g is a chain map");

    // f: smaller -> cur.  Identity on kept summands; at degree n the dropped
    // column is filled by -(a^{-1} . d[r][j]).
    let mut f_maps = BTreeMap::new();
    for m in cur.degrees() {
        let rows = cur.summands(m);
        let cols = smaller.summands(m);
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut mm = MorMatrix::zero(rows, cols);
        if m == n {
            let mut ci = 0;
            for (j, &v) in cur.summands(n).iter().enumerate() {
                if j == c {
                    continue;
                }
                mm.set(j, ci, Element::identity(&alg, v));
                let fill = Element::compose(&alg, d_n.at(r, j), &a_inv).neg();
                mm.set(c, ci, fill);
                ci += 1;
            }
        } else if m == n + 1 {
            let mut ci = 0;
            for (i, &v) in cur.summands(n + 1).iter().enumerate() {
                if i == r {
                    continue;
                }
                mm.set(i, ci, Element::identity(&alg, v));
                ci += 1;
            }
        } else {
            for (i, &v) in cur.summands(m).iter().enumerate() {
                mm.set(i, i, Element::identity(&alg, v));
            }
        }
        f_maps.insert(m, mm);
    }
    let f = ChainMap::new(smaller.clone(), cur.clone(), f_maps).expect("f is a chain map");

    // Step homotopy on cur: a^{-1} from the dropped row back to the dropped
    // column, concentrated in degree n+1.
    let mut h_maps = BTreeMap::new();
    let rows = cur.summands(n);
    let cols = cur.summands(n + 1);
    if !rows.is_empty() && !cols.is_empty() {
        let mut hm = MorMatrix::zero(rows, cols);
        hm.set(c, r, a_inv.clone());
        h_maps.insert(n + 1, hm);
    }
    let h = Homotopy::new(cur.clone(), cur.clone(), h_maps);

    Step {
        smaller,
        g,
        f,
        h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{a3, s1_complex, x_complex};
    use crate::homotopycat::{cone_triangle, hom_space};

    #[test]
    fn already_minimal_unchanged() {
        let alg = a3();
        let x = x_complex(&alg);
        let red = minimal_reduce(&x);
        assert_eq!(red.minimal, x);
        // Idempotent.
        let again = minimal_reduce(&red.minimal);
        assert_eq!(again.minimal, red.minimal);
    }

    #[test]
    fn cone_of_identity_reduces_to_zero() {
        let alg = a3();
        for v in 0..3 {
            let p = Complex::stalk(alg.clone(), v, 0);
            let t = cone_triangle(&ChainMap::identity(&p)).unwrap();
            assert!(minimal_reduce(t.z()).minimal.is_empty());
        }
    }

    #[test]
    fn strips_contractible_summand() {
        let alg = a3();
        let pv = Complex::stalk(alg.clone(), 0, 0);
        let pw = Complex::stalk(alg.clone(), 1, 0);
        let t = cone_triangle(&ChainMap::identity(&pw)).unwrap();
        let sum = Complex::direct_sum(&[&pv, t.z()]).unwrap();
        let red = minimal_reduce(&sum);
        assert_eq!(red.minimal, pv);
    }

    #[test]
    fn reduction_preserves_hom_dimensions() {
        let alg = a3();
        let s1 = s1_complex(&alg);
        let x = x_complex(&alg);
        let t = cone_triangle(&ChainMap::zero(x.clone(), s1.clone())).unwrap();
        let padded = Complex::direct_sum(&[
            t.z(),
            &cone_triangle(&ChainMap::identity(&x)).unwrap().z().clone(),
        ])
        .unwrap();
        let red = minimal_reduce(&padded);
        let probes = [
            Complex::stalk(alg.clone(), 0, 0),
            Complex::stalk(alg.clone(), 1, 0),
            Complex::stalk(alg.clone(), 2, 0),
            s1.clone(),
            x.clone(),
        ];
        for p in &probes {
            assert_eq!(
                hom_space(&padded, p).dimension,
                hom_space(&red.minimal, p).dimension
            );
            assert_eq!(
                hom_space(p, &padded).dimension,
                hom_space(p, &red.minimal).dimension
            );
        }
    }
}
