use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::exactmath::Matrix;
use crate::homotopycat::MorMatrix;
use crate::pathalgebra::{Algebra, Element, VertexId};

/// A bounded complex of labeled projectives, the objects of `K^b(proj Λ)`.
///
/// `terms[n]` lists the summand vertices of `X^n` (each occurrence is one
/// copy of `P_v`); `diffs[n]` is the matrix of `d^n: X^n -> X^{n+1}`, stored
/// only when both degrees are nonempty.  `d . d = 0` is checked whenever a
/// complex is constructed.
#[derive(Clone, Debug)]
pub struct Complex {
    algebra: Arc<Algebra>,
    terms: BTreeMap<i64, Vec<VertexId>>,
    diffs: BTreeMap<i64, MorMatrix>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            && self.terms == other.terms
            && self.diffs == other.diffs
    }
}

impl Complex {
    pub fn new(
        algebra: Arc<Algebra>,
        terms: BTreeMap<i64, Vec<VertexId>>,
        diffs: BTreeMap<i64, MorMatrix>,
    ) -> Result<Complex, Error> {
        let terms: BTreeMap<i64, Vec<VertexId>> =
            terms.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        for vs in terms.values() {
            for &v in vs {
                if v >= algebra.vertex_count() {
                    return Err(Error::Complex(format!("unknown vertex id {v}")));
                }
            }
        }
        let mut kept = BTreeMap::new();
        for (n, m) in diffs {
            let (Some(src), Some(dst)) = (terms.get(&n), terms.get(&(n + 1))) else {
                if !m.is_zero() {
                    return Err(Error::Complex(format!(
                        "differential at degree {n} between empty terms is nonzero"
                    )));
                }
                continue;
            };
            if m.col_vertices() != src.as_slice() || m.row_vertices() != dst.as_slice() {
                return Err(Error::Complex(format!(
                    "differential at degree {n} has mismatched summand labels"
                )));
            }
            kept.insert(n, m);
        }
        let c = Complex {
            algebra,
            terms,
            diffs: kept,
        };
        // d^2 = 0, exactly.
        for &n in c.terms.keys() {
            let dd = MorMatrix::compose(&c.algebra, &c.diff(n), &c.diff(n + 1));
            if !dd.is_zero() {
                return Err(Error::Complex(format!("d.d != 0 at degree {n}")));
            }
        }
        Ok(c)
    }

    pub fn zero(algebra: Arc<Algebra>) -> Complex {
        Complex {
            algebra,
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    /// The stalk complex `P_v` concentrated in one degree.
    pub fn stalk(algebra: Arc<Algebra>, v: VertexId, degree: i64) -> Complex {
        let mut terms = BTreeMap::new();
        terms.insert(degree, vec![v]);
        Complex {
            algebra,
            terms,
            diffs: BTreeMap::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Number of degrees spanned by the support (0 for the zero complex).
    pub fn width(&self) -> i64 {
        match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => hi - lo + 1,
            _ => 0,
        }
    }

    pub fn summands(&self, n: i64) -> &[VertexId] {
        self.terms.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn total_summands(&self) -> usize {
        self.terms.values().map(Vec::len).sum()
    }

    /// `d^n`, materialized with zeros when absent.
    pub fn diff(&self, n: i64) -> MorMatrix {
        match self.diffs.get(&n) {
            Some(m) => m.clone(),
            None => MorMatrix::zero(self.summands(n + 1), self.summands(n)),
        }
    }

    pub fn terms_map(&self) -> &BTreeMap<i64, Vec<VertexId>> {
        &self.terms
    }

    /// `(Σ^k X)^n = X^{n+k}`, differential multiplied by `(-1)^k`.
    pub fn shift(&self, k: i64) -> Complex {
        let terms: BTreeMap<i64, Vec<VertexId>> = self
            .terms
            .iter()
            .map(|(&n, v)| (n - k, v.clone()))
            .collect();
        let negate = k.rem_euclid(2) == 1;
        let diffs: BTreeMap<i64, MorMatrix> = self
            .diffs
            .iter()
            .map(|(&n, m)| (n - k, if negate { m.neg() } else { m.clone() }))
            .collect();
        Complex {
            algebra: self.algebra.clone(),
            terms,
            diffs,
        }
    }

    /// Direct sum: concatenated summand lists, block-diagonal differentials.
    pub fn direct_sum(parts: &[&Complex]) -> Result<Complex, Error> {
        let Some(first) = parts.first() else {
            panic!("direct_sum of no parts needs an algebra; use Complex::zero");
        };
        let algebra = first.algebra.clone();
        if !parts
            .iter()
            .all(|p| Arc::ptr_eq(&p.algebra, &algebra))
        {
            return Err(Error::AlgebraMismatch);
        }
        let mut terms: BTreeMap<i64, Vec<VertexId>> = BTreeMap::new();
        for p in parts {
            for (&n, vs) in &p.terms {
                terms.entry(n).or_default().extend_from_slice(vs);
            }
        }
        let mut diffs = BTreeMap::new();
        for &n in terms.keys() {
            if !terms.contains_key(&(n + 1)) {
                continue;
            }
            let rows: Vec<VertexId> = terms[&(n + 1)].clone();
            let cols: Vec<VertexId> = terms[&n].clone();
            let mut m = MorMatrix::zero(&rows, &cols);
            let mut row_off = 0;
            let mut col_off = 0;
            for p in parts {
                let d = p.diff(n);
                for r in 0..d.rows() {
                    for c in 0..d.cols() {
                        m.set(row_off + r, col_off + c, d.at(r, c).clone());
                    }
                }
                row_off += p.summands(n + 1).len();
                col_off += p.summands(n).len();
            }
            if !m.is_zero() {
                diffs.insert(n, m);
            }
        }
        Complex::new(algebra, terms, diffs)
    }

    /// Dimensions of the total homology over the ground field, indexed by
    /// degree.  Used to check that supplied "resolution" complexes are exact
    /// where they should be.
    pub fn homology_dimensions(&self) -> BTreeMap<i64, usize> {
        let mut dims = BTreeMap::new();
        let Some(lo) = self.min_degree() else {
            return dims;
        };
        let hi = self.max_degree().unwrap();
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        for n in lo..=hi {
            ranks.insert(n, self.scalar_matrix(n).rank());
        }
        for n in lo..=hi {
            let total = self
                .summands(n)
                .iter()
                .map(|&v| self.projective_dim(v))
                .sum::<usize>();
            let r_out = *ranks.get(&n).unwrap_or(&0);
            let r_in = *ranks.get(&(n - 1)).unwrap_or(&0);
            let h = total - r_out - r_in;
            if h > 0 {
                dims.insert(n, h);
            }
        }
        dims
    }

    fn projective_dim(&self, v: VertexId) -> usize {
        (0..self.algebra.vertex_count())
            .map(|w| self.algebra.paths_between(v, w).len())
            .sum()
    }

    /// The differential `d^n` as a plain matrix over the ground field, on
    /// the path bases of the projective summands (right multiplication).
    fn scalar_matrix(&self, n: i64) -> Matrix {
        let alg = &self.algebra;
        let field = alg.field();
        let src = self.summands(n);
        let dst = self.summands(n + 1);
        // Bases: a summand P_v contributes all paths with source v.
        let basis = |vs: &[VertexId]| -> Vec<(usize, usize)> {
            // (summand index, path id)
            let mut out = Vec::new();
            for (i, &v) in vs.iter().enumerate() {
                for w in 0..alg.vertex_count() {
                    for &p in alg.paths_between(v, w) {
                        out.push((i, p));
                    }
                }
            }
            out
        };
        let src_basis = basis(src);
        let dst_basis = basis(dst);
        let d = self.diff(n);
        let mut m = Matrix::zero(field, dst_basis.len(), src_basis.len());
        for (col, &(j, q)) in src_basis.iter().enumerate() {
            for (i, _) in dst.iter().enumerate() {
                let entry = d.at(i, j);
                for (p, coeff) in entry.terms() {
                    // Right multiplication: q in P_{src_j} maps to concat(p, q).
                    if let Some(r) = alg.concat(p, q) {
                        let row = dst_basis
                            .iter()
                            .position(|&(i2, p2)| i2 == i && p2 == r)
                            .expect("image path in basis");
                        let v = m.at(row, col).add(coeff);
                        m.set(row, col, v);
                    }
                }
            }
        }
        m
    }

    /// Multiset of graded labels, for display and iso pre-keys:
    /// degree -> sorted vertex names.
    pub fn graded_labels(&self) -> BTreeMap<i64, Vec<String>> {
        self.terms
            .iter()
            .map(|(&n, vs)| {
                let mut names: Vec<String> = vs
                    .iter()
                    .map(|&v| self.algebra.vertex_name(v).to_string())
                    .collect();
                names.sort();
                (n, names)
            })
            .collect()
    }

    // ---- JSON encoding (see README for the schema) ----

    pub fn from_json(algebra: Arc<Algebra>, value: &Value) -> Result<Complex, Error> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("complex: expected object".into()))?;
        let mut terms: BTreeMap<i64, Vec<VertexId>> = BTreeMap::new();
        if let Some(t) = obj.get("terms") {
            let t = t
                .as_object()
                .ok_or_else(|| Error::Parse("complex.terms: expected object".into()))?;
            for (deg, list) in t {
                let n: i64 = deg
                    .parse()
                    .map_err(|_| Error::Parse(format!("complex.terms: bad degree {deg:?}")))?;
                let list = list
                    .as_array()
                    .ok_or_else(|| Error::Parse("complex.terms: expected array".into()))?;
                let mut vs = Vec::new();
                for name in list {
                    let name = name
                        .as_str()
                        .ok_or_else(|| Error::Parse("complex.terms: vertex labels are strings".into()))?;
                    vs.push(algebra.vertex_id(name)?);
                }
                if !vs.is_empty() {
                    terms.insert(n, vs);
                }
            }
        }
        let mut diffs = BTreeMap::new();
        if let Some(d) = obj.get("differentials") {
            let d = d
                .as_object()
                .ok_or_else(|| Error::Parse("complex.differentials: expected object".into()))?;
            for (deg, mat) in d {
                let n: i64 = deg
                    .parse()
                    .map_err(|_| Error::Parse(format!("complex.differentials: bad degree {deg:?}")))?;
                let rows_v = terms.get(&(n + 1)).cloned().unwrap_or_default();
                let cols_v = terms.get(&n).cloned().unwrap_or_default();
                let mat = mat
                    .as_array()
                    .ok_or_else(|| Error::Parse("complex.differentials: expected row array".into()))?;
                if mat.len() != rows_v.len() {
                    return Err(Error::Parse(format!(
                        "differential at degree {n}: {} rows, expected {}",
                        mat.len(),
                        rows_v.len()
                    )));
                }
                let mut m = MorMatrix::zero(&rows_v, &cols_v);
                for (r, row) in mat.iter().enumerate() {
                    let row = row
                        .as_array()
                        .ok_or_else(|| Error::Parse("complex.differentials: expected entry array".into()))?;
                    if row.len() != cols_v.len() {
                        return Err(Error::Parse(format!(
                            "differential at degree {n}, row {r}: {} cols, expected {}",
                            row.len(),
                            cols_v.len()
                        )));
                    }
                    for (c, cell) in row.iter().enumerate() {
                        let e = parse_entry(&algebra, cell, rows_v[r], cols_v[c])?;
                        m.set(r, c, e);
                    }
                }
                if !m.is_zero() {
                    diffs.insert(n, m);
                }
            }
        }
        Complex::new(algebra, terms, diffs)
    }

    pub fn to_json(&self) -> Value {
        let mut terms = Map::new();
        for (n, vs) in &self.terms {
            terms.insert(
                n.to_string(),
                Value::Array(
                    vs.iter()
                        .map(|&v| Value::String(self.algebra.vertex_name(v).to_string()))
                        .collect(),
                ),
            );
        }
        let mut diffs = Map::new();
        for (n, m) in &self.diffs {
            let rows: Vec<Value> = (0..m.rows())
                .map(|r| {
                    Value::Array(
                        (0..m.cols())
                            .map(|c| entry_to_json(&self.algebra, m.at(r, c)))
                            .collect(),
                    )
                })
                .collect();
            diffs.insert(n.to_string(), Value::Array(rows));
        }
        json!({ "terms": Value::Object(terms), "differentials": Value::Object(diffs) })
    }
}

/// An entry is a list of `{"path": [...], "coeff": "..."}` terms (a single
/// such object, `null`, or `[]` are accepted; `path` is in composition
/// order).  The path of an entry in row `r`, column `c` must run from the
/// row summand's vertex to the column summand's vertex.
fn parse_entry(
    algebra: &Algebra,
    cell: &Value,
    row_v: VertexId,
    col_v: VertexId,
) -> Result<Element, Error> {
    let mut out = Element::zero(row_v, col_v);
    let items: Vec<&Value> = match cell {
        Value::Null => Vec::new(),
        Value::Array(a) => a.iter().collect(),
        Value::Object(_) => vec![cell],
        _ => {
            return Err(Error::Parse(
                "differential entry: expected object, array or null".into(),
            ))
        }
    };
    for item in items {
        let obj = item
            .as_object()
            .ok_or_else(|| Error::Parse("differential term: expected object".into()))?;
        let word: Vec<String> = match obj.get("path") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse("path: expected arrow names".into()))
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(Error::Parse("path: expected array".into())),
            None => Vec::new(),
        };
        let coeff_s = obj
            .get("coeff")
            .and_then(Value::as_str)
            .unwrap_or("1");
        let coeff = algebra.field().parse(coeff_s)?;
        let path = if word.is_empty() {
            if row_v != col_v {
                return Err(Error::Parse(
                    "identity entry between different vertices".into(),
                ));
            }
            Some(algebra.identity_path(row_v))
        } else {
            algebra.resolve_word(&word, None)?
        };
        if let Some(p) = path {
            if algebra.path_source(p) != row_v || algebra.path_target(p) != col_v {
                return Err(Error::Parse(format!(
                    "entry path {word:?} does not run from vertex {} to vertex {}",
                    algebra.vertex_name(row_v),
                    algebra.vertex_name(col_v),
                )));
            }
            out.add_term(p, &coeff);
        }
    }
    Ok(out)
}

fn entry_to_json(algebra: &Algebra, e: &Element) -> Value {
    Value::Array(
        e.terms()
            .map(|(p, c)| {
                json!({
                    "path": algebra.path_word(p),
                    "coeff": c.to_string(),
                })
            })
            .collect(),
    )
}
