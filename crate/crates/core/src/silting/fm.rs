use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Error;
use crate::grothendieck::{quotient_group, GroupInvariants, K0SpElement};
use crate::homotopycat::{cone_triangle, hom_space, minimal_reduce, rotate_back, ChainMap, Complex, Prng};
use crate::pathalgebra::VertexId;
use crate::silting::{extract_filtration, ExtractOptions, Filtration, Rigidity, SiltingCollection};

/// Verdict of a membership query for `F_m`.
#[derive(Clone, Debug)]
pub enum Membership {
    Member(Filtration),
    NonMember(Obstruction),
    Unknown,
}

impl Membership {
    pub fn kind(&self) -> &'static str {
        match self {
            Membership::Member(_) => "member",
            Membership::NonMember(_) => "non-member",
            Membership::Unknown => "unknown",
        }
    }
}

/// Witness of a refutation by graded-label arithmetic: no bounded formal sum
/// of shifted summands can reproduce the object's minimal labels.
#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    pub multiplicity_bound: usize,
    pub candidates_checked: usize,
    pub order_aware: bool,
}

/// Decides membership in `F_m` (objects with a filtration of length <= m).
///
/// * member: extraction succeeds within `m` stages (witness filtration);
/// * non-member: the graded-label obstruction holds — no formal direct sum
///   of at most `bound` copies of `{Σ^{-i} T_j : 0 <= i < m}` is compatible
///   with the minimal labels of the object.  An object of `F_m` is an
///   iterated cone on such a sum, and minimal reduction can only cancel
///   label pairs `(P_v @ n, P_v @ n+1)`; for `m = 2` the Schur corrections
///   keep every cancellation pair ordered (stage-0 label at degree `n`
///   against stage-1 label at `n+1`), which is the sharp form of the
///   refutation.  For `m >= 3` only the unordered cancellation rule is
///   sound, so refutations are weaker;
/// * unknown otherwise.
pub fn membership_in_fm(
    x: &Complex,
    collection: &SiltingCollection,
    m: usize,
    bound: usize,
    opts: &ExtractOptions,
) -> Result<Membership, Error> {
    if m == 0 {
        return Err(Error::Precondition("membership length must be >= 1".into()));
    }
    if let Rigidity::Rigid(d) = collection.rigidity() {
        if m > d as usize {
            return Err(Error::Precondition(format!(
                "membership length {m} exceeds the declared rigidity d = {d}"
            )));
        }
    }
    let mut capped = opts.clone();
    capped.max_len = Some(m);
    match extract_filtration(x, collection, &capped) {
        Ok(filt) => return Ok(Membership::Member(filt)),
        Err(Error::NotInFiltration { .. }) => {}
        Err(e) => return Err(e),
    }
    let x_min = minimal_reduce(x).minimal;
    let (refuted, checked) = label_obstruction(&x_min, collection, m, bound);
    if refuted {
        Ok(Membership::NonMember(Obstruction {
            multiplicity_bound: bound,
            candidates_checked: checked,
            order_aware: m == 2,
        }))
    } else {
        Ok(Membership::Unknown)
    }
}

type Key = (i64, VertexId);

fn labels_of(c: &Complex, shift: i64) -> BTreeMap<Key, usize> {
    let mut out = BTreeMap::new();
    for n in c.degrees() {
        for &v in c.summands(n) {
            *out.entry((n + shift, v)).or_insert(0) += 1;
        }
    }
    out
}

/// Exhaustive search over candidate multisets `c_{i,j} <= bound`; returns
/// `(refuted, candidates checked)` where refuted means *no* candidate is
/// label-compatible with `x`.
fn label_obstruction(
    x_min: &Complex,
    collection: &SiltingCollection,
    m: usize,
    bound: usize,
) -> (bool, usize) {
    // Stage-tagged label multisets of the candidate summands.
    let mut parts: Vec<(usize, BTreeMap<Key, usize>)> = Vec::new();
    for i in 0..m {
        for (_, t) in collection.summands() {
            parts.push((i, labels_of(t, -(i as i64))));
        }
    }
    let target = labels_of(x_min, 0);
    let mut counts = vec![0usize; parts.len()];
    let mut checked = 0usize;
    let compatible = search(
        &mut counts,
        0,
        &parts,
        &target,
        m,
        bound,
        &mut checked,
    );
    (!compatible, checked)
}

fn search(
    counts: &mut Vec<usize>,
    at: usize,
    parts: &[(usize, BTreeMap<Key, usize>)],
    target: &BTreeMap<Key, usize>,
    m: usize,
    bound: usize,
    checked: &mut usize,
) -> bool {
    if at == parts.len() {
        *checked += 1;
        return candidate_compatible(counts, parts, target, m);
    }
    for c in 0..=bound {
        counts[at] = c;
        if search(counts, at + 1, parts, target, m, bound, checked) {
            return true;
        }
    }
    counts[at] = 0;
    false
}

/// Tests one candidate multiset: per-stage label sums must cover the target
/// exactly up to cancellation dominoes `(P_v@n, P_v@n+1)` — ordered
/// stage-0-below-stage-1 when `m = 2`, unordered otherwise.
fn candidate_compatible(
    counts: &[usize],
    parts: &[(usize, BTreeMap<Key, usize>)],
    target: &BTreeMap<Key, usize>,
    m: usize,
) -> bool {
    // Per-stage totals.
    let mut stage_totals: Vec<BTreeMap<Key, usize>> = vec![BTreeMap::new(); m];
    for (idx, &(stage, ref labels)) in parts.iter().enumerate() {
        if counts[idx] == 0 {
            continue;
        }
        for (&k, &c) in labels {
            *stage_totals[stage].entry(k).or_insert(0) += c * counts[idx];
        }
    }
    // Quick sanity: totals must dominate the target.
    let mut total: BTreeMap<Key, usize> = BTreeMap::new();
    for st in &stage_totals {
        for (&k, &c) in st {
            *total.entry(k).or_insert(0) += c;
        }
    }
    for (&k, &need) in target {
        if total.get(&k).copied().unwrap_or(0) < need {
            return false;
        }
    }
    // Residual must decompose into cancellation dominoes.
    if m == 2 {
        ordered_domino_match(&stage_totals[0], &stage_totals[1], target)
    } else {
        unordered_domino_match(&total, target)
    }
}

/// m = 2: each cancelled pair takes a stage-0 label at degree `n` and a
/// stage-1 label at degree `n+1`.  Per vertex the consumption is forced by a
/// single ascending scan.
fn ordered_domino_match(
    stage0: &BTreeMap<Key, usize>,
    stage1: &BTreeMap<Key, usize>,
    target: &BTreeMap<Key, usize>,
) -> bool {
    let mut degrees: Vec<i64> = stage0
        .keys()
        .chain(stage1.keys())
        .chain(target.keys())
        .map(|&(n, _)| n)
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut vertices: Vec<VertexId> = stage0
        .keys()
        .chain(stage1.keys())
        .chain(target.keys())
        .map(|&(_, v)| v)
        .collect();
    vertices.sort_unstable();
    vertices.dedup();
    let (Some(&lo), Some(&hi)) = (degrees.first(), degrees.last()) else {
        return target.is_empty();
    };
    for &v in &vertices {
        // r0 = stage-0 leftover at degree n, which must cancel against the
        // stage-1 leftover at degree n+1; the scan is fully determined.
        let mut carry = 0usize; // stage-0 leftover from degree n-1
        for n in lo..=hi {
            let a = stage0.get(&(n, v)).copied().unwrap_or(0);
            let b = stage1.get(&(n, v)).copied().unwrap_or(0);
            let x = target.get(&(n, v)).copied().unwrap_or(0);
            // Stage-1 leftover at this degree is forced to equal the carry.
            if b + a < x {
                return false;
            }
            let r1 = carry;
            if b < r1 {
                return false;
            }
            let k1 = b - r1; // stage-1 labels consumed by the target
            if k1 > x {
                // Extra stage-1 labels at this degree cannot cancel.
                return false;
            }
            let k0 = x - k1;
            if k0 > a {
                return false;
            }
            carry = a - k0;
        }
        if carry != 0 {
            return false;
        }
    }
    true
}

/// m >= 3 (conservative): cancelled pairs are `(P_v@n, P_v@n+1)` from any
/// stages; the residual must admit a perfect domino cover.
fn unordered_domino_match(
    total: &BTreeMap<Key, usize>,
    target: &BTreeMap<Key, usize>,
) -> bool {
    let mut residual: BTreeMap<Key, usize> = BTreeMap::new();
    for (&k, &c) in total {
        let need = target.get(&k).copied().unwrap_or(0);
        if c < need {
            return false;
        }
        if c > need {
            residual.insert(k, c - need);
        }
    }
    for (&k, &need) in target {
        if total.get(&k).copied().unwrap_or(0) < need {
            return false;
        }
    }
    let mut vertices: Vec<VertexId> = residual.keys().map(|&(_, v)| v).collect();
    vertices.sort_unstable();
    vertices.dedup();
    for &v in &vertices {
        let mut degrees: Vec<i64> = residual
            .keys()
            .filter(|&&(_, w)| w == v)
            .map(|&(n, _)| n)
            .collect();
        degrees.sort_unstable();
        let (Some(&lo), Some(&hi)) = (degrees.first(), degrees.last()) else {
            continue;
        };
        let mut carry = 0usize;
        for n in lo..=hi {
            let r = residual.get(&(n, v)).copied().unwrap_or(0);
            if r < carry {
                return false;
            }
            carry = r - carry;
        }
        if carry != 0 {
            return false;
        }
    }
    true
}

/// Report of the extension-closure check for `F_d`.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub members: usize,
    pub non_members: usize,
    pub unknown: usize,
    pub closed: bool,
    /// Pairs `(source summand, target summand)` whose extension failed.
    pub failing_pairs: Vec<(String, String)>,
}

/// `F_d` is closed under extensions iff `M * Σ^{-(d-1)} M ⊆ F_d`: for
/// sampled maps `w` in a basis of `Hom(T_{j2}, Σ^d T_{j1})` (plus zero and
/// random combinations), build `E = Σ^{-1} cone(Σ^{-(d-1)} w)` and test its
/// membership in `F_d`.  Closure is declared only when every extension is a
/// member.
pub fn verify_fd_extension_closure(
    collection: &SiltingCollection,
    d: u32,
    samples: usize,
    bound: usize,
    seed: u64,
) -> Result<ClosureReport, Error> {
    require_rigidity(collection, d)?;
    let mut prng = Prng::new(seed);
    let mut members = 0;
    let mut non_members = 0;
    let mut unknown = 0;
    let mut failing_pairs = Vec::new();
    let opts = ExtractOptions {
        seed,
        ..Default::default()
    };
    for (name1, t1) in collection.summands() {
        for (name2, t2) in collection.summands() {
            let hom = hom_space(t2, &t1.shift(i64::from(d)));
            let field = collection.algebra().field();
            let mut ws: Vec<ChainMap> = vec![ChainMap::zero(t2.clone(), t1.shift(i64::from(d)))];
            ws.extend(hom.basis.iter().cloned());
            if hom.dimension > 0 {
                for _ in 0..samples {
                    let mut acc = ChainMap::zero(t2.clone(), t1.shift(i64::from(d)));
                    for b in &hom.basis {
                        acc = acc.add(&b.scale(&prng.small_coeff(field)));
                    }
                    ws.push(acc);
                }
            }
            for w in &ws {
                let e = extension_middle(w, d)?;
                match membership_in_fm(&e, collection, d as usize, bound, &opts)? {
                    Membership::Member(_) => members += 1,
                    Membership::NonMember(_) => {
                        non_members += 1;
                        failing_pairs.push((name1.to_string(), name2.to_string()));
                    }
                    Membership::Unknown => {
                        unknown += 1;
                        failing_pairs.push((name1.to_string(), name2.to_string()));
                    }
                }
            }
        }
    }
    Ok(ClosureReport {
        members,
        non_members,
        unknown,
        closed: non_members == 0 && unknown == 0,
        failing_pairs,
    })
}

/// `E = Σ^{-1} cone(w')` for `w' = Σ^{-(d-1)} w`, the middle of the
/// extension triangle `M1 -> E -> Σ^{-(d-1)} M2 -> Σ M1`.
fn extension_middle(w: &ChainMap, d: u32) -> Result<Complex, Error> {
    let w_shifted = w.shift(-(i64::from(d) - 1));
    let t = rotate_back(&rotate_back(&cone_triangle(&w_shifted)?)?)?;
    Ok(t.y().clone())
}

fn require_rigidity(collection: &SiltingCollection, d: u32) -> Result<(), Error> {
    if collection.verified_presilting() {
        return Ok(());
    }
    match collection.verified_rigidity() {
        Some(vd) if vd >= d => Ok(()),
        _ => Err(Error::Precondition(format!(
            "operation requires verified {d}-rigidity"
        ))),
    }
}

/// The subgroup `N` and the quotient `K_0^sp(M)/N`.
#[derive(Clone, Debug, Serialize)]
pub struct NSubgroupReport {
    pub generators: Vec<K0SpElement>,
    pub nonzero_generators: usize,
    pub quotient: GroupInvariants,
}

/// Generators `gamma(E) - <M1> - (-1)^{d-1} <M2>` over sampled extension
/// triangles `M1 -> E -> Σ^{-(d-1)} M2 -> Σ M1`, and the associated quotient
/// of the free group on the collection labels.  Requires `F_d` to be
/// certified extension-closed first; extraction failures abort with a
/// diagnostic (the closure hypothesis would be violated).
pub fn compute_n_subgroup(
    collection: &SiltingCollection,
    d: u32,
    samples: usize,
    bound: usize,
    seed: u64,
) -> Result<NSubgroupReport, Error> {
    require_rigidity(collection, d)?;
    let closure = verify_fd_extension_closure(collection, d, samples, bound, seed)?;
    if !closure.closed {
        return Err(Error::Precondition(format!(
            "F_{d} is not certified extension-closed ({} non-members, {} unknown)",
            closure.non_members, closure.unknown
        )));
    }
    let mut prng = Prng::new(seed);
    let field = collection.algebra().field();
    let opts = ExtractOptions {
        max_len: Some(d as usize),
        seed,
        ..Default::default()
    };
    let mut generators = Vec::new();
    for (name1, t1) in collection.summands() {
        for (name2, t2) in collection.summands() {
            let hom = hom_space(t2, &t1.shift(i64::from(d)));
            let mut ws: Vec<ChainMap> = vec![ChainMap::zero(t2.clone(), t1.shift(i64::from(d)))];
            ws.extend(hom.basis.iter().cloned());
            if hom.dimension > 0 {
                for _ in 0..samples {
                    let mut acc = ChainMap::zero(t2.clone(), t1.shift(i64::from(d)));
                    for b in &hom.basis {
                        acc = acc.add(&b.scale(&prng.small_coeff(field)));
                    }
                    ws.push(acc);
                }
            }
            for w in &ws {
                let e = extension_middle(w, d)?;
                let filt = extract_filtration(&e, collection, &opts).map_err(|err| {
                    Error::Precondition(format!(
                        "extension of {name2} by {name1} admits no length-{d} filtration \
                         ({err}); closure hypothesis violated"
                    ))
                })?;
                let gamma = filt.gamma();
                let sign = if (d - 1).is_multiple_of(2) { 1 } else { -1 };
                let mut gen = &gamma - &K0SpElement::generator(name1);
                gen = &gen - &K0SpElement::generator(name2).scale(sign);
                generators.push(gen);
            }
        }
    }
    let nonzero = generators.iter().filter(|g| !g.is_zero()).count();
    let quotient = quotient_group(collection.names(), &generators)?;
    Ok(NSubgroupReport {
        generators,
        nonzero_generators: nonzero,
        quotient,
    })
}
