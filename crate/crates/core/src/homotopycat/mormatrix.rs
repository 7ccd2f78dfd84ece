use crate::exactmath::Scalar;
use crate::pathalgebra::{Algebra, Element, VertexId};

/// A matrix of algebra elements representing a map between finite direct sums
/// of labeled projectives.  Entry `(r, c)` is the component `P_{col_c} ->
/// P_{row_r}`; under the right-multiplication convention its element has path
/// source `row_r`'s vertex and path target `col_c`'s vertex.
///
/// Row/column vertex labels are stored so that empty sums (zero objects) keep
/// their typing through compositions.
#[derive(Clone, PartialEq, Debug)]
pub struct MorMatrix {
    row_vertices: Vec<VertexId>,
    col_vertices: Vec<VertexId>,
    entries: Vec<Element>,
}

impl MorMatrix {
    pub fn zero(row_vertices: &[VertexId], col_vertices: &[VertexId]) -> MorMatrix {
        let mut entries = Vec::with_capacity(row_vertices.len() * col_vertices.len());
        for &rv in row_vertices {
            for &cv in col_vertices {
                entries.push(Element::zero(rv, cv));
            }
        }
        MorMatrix {
            row_vertices: row_vertices.to_vec(),
            col_vertices: col_vertices.to_vec(),
            entries,
        }
    }

    pub fn identity(algebra: &Algebra, vertices: &[VertexId]) -> MorMatrix {
        let mut m = MorMatrix::zero(vertices, vertices);
        for (i, &v) in vertices.iter().enumerate() {
            m.set(i, i, Element::identity(algebra, v));
        }
        m
    }

    /// Builds from a closure; `f(r, c)` must produce an element with the
    /// right endpoints (asserted by `set`).
    pub fn build<F>(row_vertices: &[VertexId], col_vertices: &[VertexId], mut f: F) -> MorMatrix
    where
        F: FnMut(usize, usize) -> Element,
    {
        let mut m = MorMatrix::zero(row_vertices, col_vertices);
        for r in 0..row_vertices.len() {
            for c in 0..col_vertices.len() {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.row_vertices.len()
    }

    pub fn cols(&self) -> usize {
        self.col_vertices.len()
    }

    pub fn row_vertices(&self) -> &[VertexId] {
        &self.row_vertices
    }

    pub fn col_vertices(&self) -> &[VertexId] {
        &self.col_vertices
    }

    pub fn at(&self, r: usize, c: usize) -> &Element {
        &self.entries[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, e: Element) {
        assert_eq!(e.source(), self.row_vertices[r], "entry source vertex");
        assert_eq!(e.target(), self.col_vertices[c], "entry target vertex");
        let c_total = self.cols();
        self.entries[r * c_total + c] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    pub fn add(&self, other: &MorMatrix) -> MorMatrix {
        assert_eq!(self.row_vertices, other.row_vertices);
        assert_eq!(self.col_vertices, other.col_vertices);
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = e.add(o);
        }
        out
    }

    pub fn sub(&self, other: &MorMatrix) -> MorMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MorMatrix {
        MorMatrix {
            row_vertices: self.row_vertices.clone(),
            col_vertices: self.col_vertices.clone(),
            entries: self.entries.iter().map(Element::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MorMatrix {
        MorMatrix {
            row_vertices: self.row_vertices.clone(),
            col_vertices: self.col_vertices.clone(),
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Composite `then . first` of maps of projective sums; `first: A -> B`,
    /// `then: B -> C` gives `A -> C`.
    pub fn compose(algebra: &Algebra, first: &MorMatrix, then: &MorMatrix) -> MorMatrix {
        assert_eq!(
            then.col_vertices, first.row_vertices,
            "middle summands differ"
        );
        let mut out = MorMatrix::zero(&then.row_vertices, &first.col_vertices);
        for i in 0..out.rows() {
            for k in 0..out.cols() {
                let mut acc = Element::zero(then.row_vertices[i], first.col_vertices[k]);
                for j in 0..first.rows() {
                    let m1 = first.at(j, k);
                    let m2 = then.at(i, j);
                    if m1.is_zero() || m2.is_zero() {
                        continue;
                    }
                    // Module maps compose through the element product with
                    // the first-applied map on the left; see pathalgebra.
                    acc = acc.add(&Element::compose(algebra, m1, m2));
                }
                out.set(i, k, acc);
            }
        }
        out
    }

    /// Horizontal stack `[self | right]` (same row labels).
    pub fn hstack(&self, right: &MorMatrix) -> MorMatrix {
        assert_eq!(self.row_vertices, right.row_vertices);
        let mut col_vertices = self.col_vertices.clone();
        col_vertices.extend_from_slice(&right.col_vertices);
        let mut out = MorMatrix::zero(&self.row_vertices, &col_vertices);
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.set(r, c, self.at(r, c).clone());
            }
            for c in 0..right.cols() {
                out.set(r, self.cols() + c, right.at(r, c).clone());
            }
        }
        out
    }

    /// Vertical stack `[self; below]` (same column labels).
    pub fn vstack(&self, below: &MorMatrix) -> MorMatrix {
        assert_eq!(self.col_vertices, below.col_vertices);
        let mut row_vertices = self.row_vertices.clone();
        row_vertices.extend_from_slice(&below.row_vertices);
        let mut out = MorMatrix::zero(&row_vertices, &self.col_vertices);
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.set(r, c, self.at(r, c).clone());
            }
        }
        for r in 0..below.rows() {
            for c in 0..self.cols() {
                out.set(self.rows() + r, c, below.at(r, c).clone());
            }
        }
        out
    }

    /// Deletes one row and/or one column.
    pub fn minor(&self, drop_row: Option<usize>, drop_col: Option<usize>) -> MorMatrix {
        let row_vertices: Vec<VertexId> = self
            .row_vertices
            .iter()
            .enumerate()
            .filter(|(r, _)| Some(*r) != drop_row)
            .map(|(_, v)| *v)
            .collect();
        let col_vertices: Vec<VertexId> = self
            .col_vertices
            .iter()
            .enumerate()
            .filter(|(c, _)| Some(*c) != drop_col)
            .map(|(_, v)| *v)
            .collect();
        let mut out = MorMatrix::zero(&row_vertices, &col_vertices);
        let mut ri = 0;
        for r in 0..self.rows() {
            if Some(r) == drop_row {
                continue;
            }
            let mut ci = 0;
            for c in 0..self.cols() {
                if Some(c) == drop_col {
                    continue;
                }
                out.set(ri, ci, self.at(r, c).clone());
                ci += 1;
            }
            ri += 1;
        }
        out
    }

    pub fn display(&self, algebra: &Algebra) -> Vec<Vec<String>> {
        (0..self.rows())
            .map(|r| {
                (0..self.cols())
                    .map(|c| self.at(r, c).display(algebra))
                    .collect()
            })
            .collect()
    }
}
