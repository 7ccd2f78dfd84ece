use std::collections::BTreeMap;

use crate::error::Error;
use crate::homotopycat::{null_homotopy_witness, ChainMap, Complex, Homotopy, MorMatrix};
use crate::pathalgebra::VertexId;

/// An exact triangle `X -a-> Y -b-> Z -c-> ΣX`, realized as the mapping cone
/// of some map or a rotation of such.  The null-homotopies of `b.a` and
/// `c.b` are stored as explicit witnesses and verified on construction.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub a: ChainMap,
    pub b: ChainMap,
    pub c: ChainMap,
    h_ba: Homotopy,
    h_cb: Homotopy,
}

impl Triangle {
    pub fn new(
        a: ChainMap,
        b: ChainMap,
        c: ChainMap,
        h_ba: Homotopy,
        h_cb: Homotopy,
    ) -> Result<Triangle, Error> {
        if b.source() != a.target() || c.source() != b.target() {
            return Err(Error::ChainMap("triangle maps do not chain".into()));
        }
        if *c.target() != a.source().shift(1) {
            return Err(Error::ChainMap("triangle third map must land in ΣX".into()));
        }
        let ba = ChainMap::compose(&a, &b);
        let cb = ChainMap::compose(&b, &c);
        if !h_ba.witnesses(&ba) {
            return Err(Error::ChainMap("witness for b.a ~ 0 fails".into()));
        }
        if !h_cb.witnesses(&cb) {
            return Err(Error::ChainMap("witness for c.b ~ 0 fails".into()));
        }
        Ok(Triangle {
            a,
            b,
            c,
            h_ba,
            h_cb,
        })
    }

    /// Assembles a triangle from its maps, solving for the witnesses.
    pub fn assemble(a: ChainMap, b: ChainMap, c: ChainMap) -> Result<Triangle, Error> {
        let ba = ChainMap::compose(&a, &b);
        let cb = ChainMap::compose(&b, &c);
        let h_ba = null_homotopy_witness(&ba)
            .ok_or_else(|| Error::ChainMap("b.a is not null-homotopic".into()))?;
        let h_cb = null_homotopy_witness(&cb)
            .ok_or_else(|| Error::ChainMap("c.b is not null-homotopic".into()))?;
        Triangle::new(a, b, c, h_ba, h_cb)
    }

    pub fn x(&self) -> &Complex {
        self.a.source()
    }

    pub fn y(&self) -> &Complex {
        self.a.target()
    }

    pub fn z(&self) -> &Complex {
        self.b.target()
    }

    pub fn witness_ba(&self) -> &Homotopy {
        &self.h_ba
    }

    pub fn witness_cb(&self) -> &Homotopy {
        &self.h_cb
    }
}

/// The mapping cone of `f: X -> Y`: `C^n = X^{n+1} ⊕ Y^n` with differential
/// `[[-d_X, 0], [f, d_Y]]`, returned inside the triangle
/// `X -f-> Y -> cone(f) -> ΣX` with canonical inclusion and projection.
pub fn cone_triangle(f: &ChainMap) -> Result<Triangle, Error> {
    let x = f.source().clone();
    let y = f.target().clone();
    let alg = x.algebra().clone();

    let mut degrees: Vec<i64> = x
        .degrees()
        .map(|n| n - 1)
        .chain(y.degrees())
        .collect();
    degrees.sort_unstable();
    degrees.dedup();

    let mut terms: BTreeMap<i64, Vec<VertexId>> = BTreeMap::new();
    for &n in &degrees {
        let mut vs: Vec<VertexId> = x.summands(n + 1).to_vec();
        vs.extend_from_slice(y.summands(n));
        if !vs.is_empty() {
            terms.insert(n, vs);
        }
    }
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let (Some(src), Some(dst)) = (terms.get(&n), terms.get(&(n + 1))) else {
            continue;
        };
        let mut m = MorMatrix::zero(dst, src);
        let x_src = x.summands(n + 1).len();
        let x_dst = x.summands(n + 2).len();
        let dx = x.diff(n + 1);
        for r in 0..dx.rows() {
            for c in 0..dx.cols() {
                m.set(r, c, dx.at(r, c).neg());
            }
        }
        let fm = f.at(n + 1);
        for r in 0..fm.rows() {
            for c in 0..fm.cols() {
                m.set(x_dst + r, c, fm.at(r, c).clone());
            }
        }
        let dy = y.diff(n);
        for r in 0..dy.rows() {
            for c in 0..dy.cols() {
                m.set(x_dst + r, x_src + c, dy.at(r, c).clone());
            }
        }
        if !m.is_zero() {
            diffs.insert(n, m);
        }
    }
    let cone = Complex::new(alg.clone(), terms, diffs)?;

    // Inclusion Y -> C and projection C -> ΣX.
    let mut incl_maps = BTreeMap::new();
    for n in y.degrees() {
        let rows = cone.summands(n);
        let cols = y.summands(n);
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut m = MorMatrix::zero(rows, cols);
        let off = x.summands(n + 1).len();
        for (c, &v) in cols.iter().enumerate() {
            m.set(off + c, c, crate::pathalgebra::Element::identity(&alg, v));
        }
        incl_maps.insert(n, m);
    }
    let incl = ChainMap::new(y.clone(), cone.clone(), incl_maps)?;

    let sx = x.shift(1);
    let mut proj_maps = BTreeMap::new();
    for n in sx.degrees() {
        let rows = sx.summands(n);
        let cols = cone.summands(n);
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut m = MorMatrix::zero(rows, cols);
        for (r, &v) in rows.iter().enumerate() {
            m.set(r, r, crate::pathalgebra::Element::identity(&alg, v));
        }
        proj_maps.insert(n, m);
    }
    let proj = ChainMap::new(cone.clone(), sx, proj_maps)?;

    // Explicit witness for incl.f ~ 0: h = [id_X; 0] into C^{n-1} = X^n ⊕ ...
    let mut h_maps = BTreeMap::new();
    for n in x.degrees() {
        let rows = cone.summands(n - 1);
        let cols = x.summands(n);
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut m = MorMatrix::zero(rows, cols);
        for (c, &v) in cols.iter().enumerate() {
            m.set(c, c, crate::pathalgebra::Element::identity(&alg, v));
        }
        h_maps.insert(n, m);
    }
    let h_ba = Homotopy::new(x.clone(), cone.clone(), h_maps);
    // proj.incl = 0 on the nose.
    let h_cb = Homotopy::zero(y.clone(), x.shift(1));

    Triangle::new(f.clone(), incl, proj, h_ba, h_cb)
}

/// Rotation: `X -> Y -> Z -> ΣX` becomes `Y -> Z -> ΣX -> ΣY` with third map
/// `-Σa`.
pub fn rotate(t: &Triangle) -> Result<Triangle, Error> {
    let new_c = t.a.shift(1).neg();
    let h_ba = t.witness_cb().clone();
    let composite = ChainMap::compose(&t.c, &new_c);
    let h_cb = null_homotopy_witness(&composite)
        .ok_or_else(|| Error::ChainMap("rotation composite not null-homotopic".into()))?;
    Triangle::new(t.b.clone(), t.c.clone(), new_c, h_ba, h_cb)
}

/// Backward rotation: `X -> Y -> Z -> ΣX` becomes
/// `Σ^{-1}Z -> X -> Y -> Z` with first map `-Σ^{-1}c`.
pub fn rotate_back(t: &Triangle) -> Result<Triangle, Error> {
    let new_a = t.c.shift(-1).neg();
    let composite = ChainMap::compose(&new_a, &t.a);
    let h_ba = null_homotopy_witness(&composite)
        .ok_or_else(|| Error::ChainMap("back-rotation composite not null-homotopic".into()))?;
    let h_cb = t.witness_ba().clone();
    Triangle::new(new_a, t.a.clone(), t.b.clone(), h_ba, h_cb)
}
