use std::collections::BTreeMap;

use crate::error::Error;
use crate::grothendieck::K0SpElement;
use crate::homotopycat::{
    cone_triangle, find_invertible_map, hom_space, minimal_reduce, rotate_back, ChainMap, Complex,
    Prng, Triangle,
};
use crate::pathalgebra::VertexId;
use crate::silting::{Rigidity, SiltingCollection};

/// One stage of a filtration: the exact triangle
/// `X_{i+1} -> X_i -> Σ^{-i}(M_i) -> Σ(X_{i+1})` (realized as a rotated
/// mapping cone, with its null-homotopy witnesses), the factor `M_i` as a
/// formal multiset of collection labels, and the minimal form of `X_{i+1}`
/// from which the next stage proceeds.
#[derive(Clone, Debug)]
pub struct FiltrationStage {
    pub factor: BTreeMap<String, usize>,
    pub triangle: Triangle,
    pub next: Complex,
}

/// A filtration of an object with respect to a collection: stage `i` peels a
/// factor in `Σ^{-i} add(T)`, and the final object is zero.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub object: Complex,
    pub stages: Vec<FiltrationStage>,
}

impl Filtration {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// The alternating sum of the factors in the split Grothendieck group:
    /// `Σ_i (-1)^i <M_i>`.
    pub fn gamma(&self) -> K0SpElement {
        let mut out = K0SpElement::zero();
        for (i, stage) in self.stages.iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for (label, count) in &stage.factor {
                out.add_label(label, sign * (*count as i64));
            }
        }
        out
    }

    /// Factors as label multisets, stage by stage.
    pub fn factors(&self) -> Vec<BTreeMap<String, usize>> {
        self.stages.iter().map(|s| s.factor.clone()).collect()
    }

    /// Appends trailing zero stages (zero factors), the usual device for
    /// equalizing filtration lengths.
    pub fn extend_with_zero_stages(&mut self, count: usize) {
        let algebra = self.object.algebra().clone();
        for _ in 0..count {
            let zero = Complex::zero(algebra.clone());
            let f = ChainMap::zero(zero.clone(), zero.clone());
            let t = cone_triangle(&f).expect("cone over the zero complex");
            let t = rotate_back(&t).expect("rotation of the zero triangle");
            self.stages.push(FiltrationStage {
                factor: BTreeMap::new(),
                triangle: t,
                next: zero,
            });
        }
    }
}

/// Knobs for filtration extraction.
#[derive(Clone, Debug)]
pub struct ExtractOptions {
    /// Stage cap; `None` computes a support-based default.
    pub max_len: Option<usize>,
    /// Permit the brutal-truncation path for stalk-projective collections.
    pub allow_fast_path: bool,
    /// Labels padded onto stage 0 with zero components (used to build
    /// deliberately redundant filtrations).
    pub pad_stage0: Vec<String>,
    pub seed: u64,
    pub iso_trials: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            max_len: None,
            allow_fast_path: true,
            pad_stage0: Vec::new(),
            seed: 0,
            iso_trials: 32,
        }
    }
}

/// Default stage cap: twice the support width plus slack, shifted up when
/// the object lives in high degrees (stage `i` can only peel degree `i`).
fn default_max_len(x: &Complex) -> usize {
    let width = x.width().max(1);
    let high = x.max_degree().unwrap_or(0).max(0);
    (2 * width + 2 + high) as usize
}

struct StageMap {
    factor: BTreeMap<String, usize>,
    map: ChainMap,
}

/// Iterative universal left approximation: at stage `i`, the object maps
/// into `Σ^{-i} add(T)` through a basis of each `Hom(X_i, Σ^{-i} T_j)`; the
/// next object is `Σ^{-1}` of the cone.  Two refinements:
///
/// * when `X_i` is already isomorphic to an object of `Σ^{-i} add(T)` the
///   stage uses that isomorphism, so members of `add(T)` get length-1
///   filtrations;
/// * for the stalk-projective collection the approximation is brutal
///   truncation: the factor is the degree-`i` term of the minimal form.
///
/// Fails with `NotInFiltration` when the stage cap is exhausted.
pub fn extract_filtration(
    x: &Complex,
    collection: &SiltingCollection,
    opts: &ExtractOptions,
) -> Result<Filtration, Error> {
    let x_min = minimal_reduce(x).minimal;
    let max_len = opts.max_len.unwrap_or_else(|| default_max_len(&x_min));
    check_precondition(collection, max_len)?;
    let fast = opts.allow_fast_path
        && collection.is_stalk_projective_collection()
        && opts.pad_stage0.is_empty();
    let mut prng = Prng::new(opts.seed);

    let mut stages: Vec<FiltrationStage> = Vec::new();
    let mut cur = x_min.clone();
    for i in 0..max_len {
        if cur.is_empty() {
            break;
        }
        let mut stage = if fast {
            brutal_stage(&cur, collection, i as i64)
        } else {
            general_stage(&cur, collection, i as i64, opts, &mut prng)
        };
        if i == 0 && !opts.pad_stage0.is_empty() {
            stage = pad_stage(stage, &cur, collection, &opts.pad_stage0)?;
        }
        let triangle = rotate_back(&cone_triangle(&stage.map)?)?;
        let next = minimal_reduce(triangle.x()).minimal;
        stages.push(FiltrationStage {
            factor: stage.factor,
            triangle,
            next: next.clone(),
        });
        cur = next;
    }
    if !cur.is_empty() {
        return Err(Error::NotInFiltration { stage: max_len });
    }
    Ok(Filtration {
        object: x_min,
        stages,
    })
}

fn check_precondition(collection: &SiltingCollection, max_len: usize) -> Result<(), Error> {
    if collection.verified_presilting() {
        return Ok(());
    }
    if let Some(d) = collection.verified_rigidity() {
        if max_len <= d as usize {
            return Ok(());
        }
        return Err(Error::Precondition(format!(
            "collection is only verified {d}-rigid; stage cap {max_len} exceeds d"
        )));
    }
    match collection.rigidity() {
        Rigidity::Presilting => Err(Error::Precondition(
            "collection unverified: run the presilting check first".into(),
        )),
        Rigidity::Rigid(_) => Err(Error::Precondition(
            "collection unverified: run the rigidity check first".into(),
        )),
    }
}

/// Builds the stage target `Σ^{-i}(⊕ parts)` and the stacked map into it.
fn assemble(
    cur: &Complex,
    parts: Vec<(String, Complex, ChainMap)>,
) -> StageMap {
    let algebra = cur.algebra().clone();
    let mut factor: BTreeMap<String, usize> = BTreeMap::new();
    for (label, _, _) in &parts {
        *factor.entry(label.clone()).or_insert(0) += 1;
    }
    if parts.is_empty() {
        let zero = Complex::zero(algebra);
        return StageMap {
            factor,
            map: ChainMap::zero(cur.clone(), zero),
        };
    }
    let targets: Vec<&Complex> = parts.iter().map(|(_, c, _)| c).collect();
    let target = Complex::direct_sum(&targets).expect("same algebra");
    let mut maps = BTreeMap::new();
    for n in cur.degrees() {
        if target.summands(n).is_empty() {
            continue;
        }
        let mut m = crate::homotopycat::MorMatrix::zero(target.summands(n), cur.summands(n));
        let mut row_off = 0;
        for (_, part, f) in &parts {
            let fm = f.at(n);
            for r in 0..fm.rows() {
                for c in 0..fm.cols() {
                    m.set(row_off + r, c, fm.at(r, c).clone());
                }
            }
            row_off += part.summands(n).len();
        }
        maps.insert(n, m);
    }
    let map = ChainMap::new(cur.clone(), target, maps).expect("stacked approximation commutes");
    StageMap { factor, map }
}

fn pad_stage(
    stage: StageMap,
    cur: &Complex,
    collection: &SiltingCollection,
    pad: &[String],
) -> Result<StageMap, Error> {
    let mut parts: Vec<(String, Complex, ChainMap)> = Vec::new();
    // Re-expand the existing stage map as a single part.
    let target = stage.map.target().clone();
    if !target.is_empty() || !stage.factor.is_empty() {
        parts.push(("<stage>".into(), target.clone(), stage.map.clone()));
    }
    for label in pad {
        let idx = collection
            .names()
            .iter()
            .position(|n| n == label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        let t = collection.summand(idx).clone();
        parts.push((label.clone(), t.clone(), ChainMap::zero(cur.clone(), t)));
    }
    let assembled = assemble(cur, parts);
    // The synthetic "<stage>" label stands for the original factor multiset.
    let mut factor = stage.factor;
    for label in pad {
        *factor.entry(label.clone()).or_insert(0) += 1;
    }
    Ok(StageMap {
        factor,
        map: assembled.map,
    })
}

/// Brutal truncation stage: project onto the degree-`i` term.  Only valid
/// while the current object is supported in degrees >= i; otherwise the
/// stage is empty and extraction stalls into the cap.
fn brutal_stage(cur: &Complex, collection: &SiltingCollection, i: i64) -> StageMap {
    let algebra = cur.algebra().clone();
    if cur.min_degree().is_some_and(|lo| lo < i) {
        return assemble(cur, Vec::new());
    }
    let mut parts = Vec::new();
    let summands: Vec<VertexId> = cur.summands(i).to_vec();
    for (slot, &v) in summands.iter().enumerate() {
        let j = collection
            .stalk_summand(v)
            .expect("stalk collection covers all vertices");
        let label = collection.names()[j].clone();
        let part = Complex::stalk(algebra.clone(), v, i);
        let mut maps = BTreeMap::new();
        let mut m = crate::homotopycat::MorMatrix::zero(part.summands(i), cur.summands(i));
        m.set(0, slot, crate::pathalgebra::Element::identity(&algebra, v));
        maps.insert(i, m);
        let f = ChainMap::new(cur.clone(), part.clone(), maps)
            .expect("projection onto the bottom degree commutes");
        parts.push((label, part, f));
    }
    assemble(cur, parts)
}

fn general_stage(
    cur: &Complex,
    collection: &SiltingCollection,
    i: i64,
    opts: &ExtractOptions,
    prng: &mut Prng,
) -> StageMap {
    if let Some(stage) = terminal_stage(cur, collection, i, opts, prng) {
        return stage;
    }
    let mut parts = Vec::new();
    for (name, t) in collection.summands() {
        let shifted = t.shift(-i);
        let hom = hom_space(cur, &shifted);
        for b in hom.basis {
            parts.push((name.to_string(), shifted.clone(), b));
        }
    }
    assemble(cur, parts)
}

/// Terminal stage: if the current object is isomorphic to an object of
/// `Σ^{-i} add(T)` (decided by label tiling plus an explicit isomorphism),
/// use the isomorphism as the approximation; its cone is contractible, so
/// the filtration ends here.
fn terminal_stage(
    cur: &Complex,
    collection: &SiltingCollection,
    i: i64,
    opts: &ExtractOptions,
    prng: &mut Prng,
) -> Option<StageMap> {
    let counts = tile_labels(cur, collection, i)?;
    let mut parts_order: Vec<(String, Complex)> = Vec::new();
    for (j, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            parts_order.push((
                collection.names()[j].clone(),
                collection.summand(j).shift(-i),
            ));
        }
    }
    let refs: Vec<&Complex> = parts_order.iter().map(|(_, c)| c).collect();
    let candidate = Complex::direct_sum(&refs).expect("same algebra");
    let f = find_invertible_map(cur, &candidate, prng, opts.iso_trials)?;
    let mut factor = BTreeMap::new();
    for (label, _) in &parts_order {
        *factor.entry(label.clone()).or_insert(0) += 1;
    }
    Some(StageMap { factor, map: f })
}

/// Finds multiplicities `c_j >= 0` with
/// `Σ_j c_j . labels(Σ^{-i} T_j) = labels(cur)`, if any.
fn tile_labels(cur: &Complex, collection: &SiltingCollection, i: i64) -> Option<Vec<usize>> {
    type Counts = BTreeMap<(i64, VertexId), usize>;
    fn labels_of(c: &Complex, shift: i64) -> Counts {
        let mut out = Counts::new();
        for n in c.degrees() {
            for &v in c.summands(n) {
                *out.entry((n + shift, v)).or_insert(0) += 1;
            }
        }
        out
    }
    fn try_take(remaining: &Counts, part: &Counts, times: usize) -> Option<Counts> {
        let mut out = remaining.clone();
        for (&k, &c) in part {
            let have = out.get(&k).copied().unwrap_or(0);
            let need = c * times;
            if have < need {
                return None;
            }
            if have == need {
                out.remove(&k);
            } else {
                out.insert(k, have - need);
            }
        }
        Some(out)
    }
    fn solve(remaining: Counts, parts: &[Counts], j: usize, acc: &mut Vec<usize>) -> bool {
        if remaining.is_empty() {
            acc.extend(std::iter::repeat_n(0, parts.len() - j));
            return true;
        }
        if j == parts.len() {
            return false;
        }
        let max = parts[j]
            .iter()
            .map(|(k, &c)| remaining.get(k).copied().unwrap_or(0) / c)
            .min()
            .unwrap_or(0);
        for count in (0..=max).rev() {
            if let Some(rest) = try_take(&remaining, &parts[j], count) {
                acc.push(count);
                if solve(rest, parts, j + 1, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }

    let target = labels_of(cur, 0);
    let parts: Vec<Counts> = collection
        .summands()
        .map(|(_, t)| labels_of(t, i))
        .collect();
    let mut acc = Vec::new();
    if solve(target, &parts, 0, &mut acc) {
        Some(acc)
    } else {
        None
    }
}
