//! Command implementations shared by the `k0silting` binary and the C ABI:
//! each operation takes already-loaded values and returns a machine-readable
//! detail object plus a pass/fail verdict.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::Error;
use crate::homotopycat::{
    cone_triangle, hom_space, iso_test, minimal_reduce, random_complex, rotate, Complex,
    IsoVerdict, Prng, RandomComplexConfig,
};
use crate::pathalgebra::Algebra;
use crate::session::SessionConfig;
use crate::silting::{
    class_in_k0sp, compute_n_subgroup, extract_filtration, membership_in_fm, silting_certificate,
    verify_fd_extension_closure, verify_filtration_equivalence, verify_hom_vanishing,
    verify_horseshoe, verify_theorem_a, ExtractOptions, Filtration, HomVanishingReport,
    Membership, Rigidity, SiltingCollection, TheoremAConfig,
};

/// Outcome of an operation: whether every assertion passed, plus the
/// serializable details for the report.
pub struct Outcome {
    pub passed: bool,
    pub details: Value,
}

impl Outcome {
    fn pass(details: Value) -> Outcome {
        Outcome {
            passed: true,
            details,
        }
    }

    fn fail(details: Value) -> Outcome {
        Outcome {
            passed: false,
            details,
        }
    }
}

fn extract_opts(session: &SessionConfig) -> ExtractOptions {
    ExtractOptions {
        max_len: session.max_len,
        seed: session.seed,
        ..Default::default()
    }
}

/// Presilting sweep up to the support bound (or the session override);
/// verification flags end up on the collection.
pub fn hom_sweep(collection: &mut SiltingCollection, session: &SessionConfig) -> HomVanishingReport {
    let bound = session
        .k_max
        .unwrap_or_else(|| collection.hom_vanishing_bound())
        .max(1);
    verify_hom_vanishing(collection, 1, bound)
}

/// `dim Hom(X, Σ^k Y)` with the basis summary.
pub fn hom_op(x: &Complex, y: &Complex, shift: i64) -> Outcome {
    let hs = hom_space(x, &y.shift(shift));
    let basis: Vec<BTreeMap<String, Vec<Vec<String>>>> =
        hs.basis.iter().map(|f| f.display()).collect();
    Outcome::pass(json!({
        "shift": shift,
        "dimension": hs.dimension,
        "basis": basis,
    }))
}

fn filtration_details(filt: &Filtration) -> Value {
    let stages: Vec<Value> = filt
        .stages
        .iter()
        .map(|s| {
            json!({
                "factor": s.factor,
                "next": s.next.graded_labels(),
            })
        })
        .collect();
    json!({
        "length": filt.len(),
        "stages": stages,
        "gamma": filt.gamma(),
    })
}

/// Filtration stages and gamma vector; with `class`, the normalized class
/// (requires a silting certificate).
pub fn gamma_op(
    collection: &mut SiltingCollection,
    x: &Complex,
    class: bool,
    session: &SessionConfig,
) -> Result<Outcome, Error> {
    let sweep = hom_sweep(collection, session);
    if !collection.verified_presilting() && collection.verified_rigidity().is_none() {
        return Err(Error::Precondition(format!(
            "collection fails its own rigidity declaration: {:?}",
            sweep.violations
        )));
    }
    let opts = extract_opts(session);
    if class {
        silting_certificate(collection, 10, &opts)?;
        let (class_value, n) = class_in_k0sp(x, collection, &opts)?;
        let filt = extract_filtration(&x.shift(-(n as i64)), collection, &opts)?;
        return Ok(Outcome::pass(json!({
            "normalizing_shift": n,
            "class": class_value,
            "filtration_of_shift": filtration_details(&filt),
        })));
    }
    match extract_filtration(x, collection, &opts) {
        Ok(filt) => Ok(Outcome::pass(filtration_details(&filt))),
        Err(Error::NotInFiltration { stage }) => Ok(Outcome::fail(json!({
            "error": format!("not in F within bound (stalled at stage {stage})"),
        }))),
        Err(e) => Err(e),
    }
}

/// Dispatches a named verification suite.
pub fn verify_op(
    which: &str,
    algebra: &Arc<Algebra>,
    collection: &mut SiltingCollection,
    complex: Option<&Complex>,
    session: &SessionConfig,
    samples: Option<usize>,
    d_override: Option<u32>,
) -> Result<Outcome, Error> {
    match which {
        "presilting" => Ok(presilting_op(collection, session)),
        "silting-cert" => silting_cert_op(collection, session),
        "theorem-a" => theorem_a_op(collection, session, samples),
        "jordan-holder" => jordan_holder_op(algebra, collection, session, samples),
        "horseshoe" => horseshoe_op(algebra, collection, session, samples),
        "fd-closure" => fd_closure_op(collection, session, samples, d_override),
        "cluster-n" => cluster_n_op(collection, session, samples, d_override),
        "example-4-3" => {
            let x = complex.ok_or_else(|| {
                Error::Precondition("example-4-3 needs the two-term complex (--complex)".into())
            })?;
            example_4_3_op(collection, x, session, samples)
        }
        other => Err(Error::Parse(format!("unknown verification {other:?}"))),
    }
}

pub fn presilting_op(collection: &mut SiltingCollection, session: &SessionConfig) -> Outcome {
    let sweep = hom_sweep(collection, session);
    let details = json!({
        "checked_shifts": [sweep.checked_from, sweep.checked_to],
        "support_bound": sweep.support_bound,
        "violations": sweep.violations,
        "presilting": sweep.all_zero,
    });
    if sweep.all_zero {
        Outcome::pass(details)
    } else {
        Outcome::fail(details)
    }
}

pub fn silting_cert_op(
    collection: &mut SiltingCollection,
    session: &SessionConfig,
) -> Result<Outcome, Error> {
    let sweep = hom_sweep(collection, session);
    if !collection.verified_presilting() {
        return Ok(Outcome::fail(json!({
            "certified": false,
            "reason": "collection is not presilting, hence not silting",
            "violations": sweep.violations,
        })));
    }
    let cert = silting_certificate(collection, 10, &extract_opts(session))?;
    let details = serde_json::to_value(&cert).expect("report serializes");
    if cert.certified {
        Ok(Outcome::pass(details))
    } else {
        Ok(Outcome::fail(details))
    }
}

fn certify(collection: &mut SiltingCollection, session: &SessionConfig) -> Result<(), Error> {
    hom_sweep(collection, session);
    if !collection.verified_presilting() {
        return Err(Error::Precondition(
            "the collection is not presilting".into(),
        ));
    }
    let cert = silting_certificate(collection, 10, &extract_opts(session))?;
    if !cert.certified {
        return Err(Error::Precondition("the collection is not silting".into()));
    }
    Ok(())
}

pub fn theorem_a_op(
    collection: &mut SiltingCollection,
    session: &SessionConfig,
    samples: Option<usize>,
) -> Result<Outcome, Error> {
    certify(collection, session)?;
    let samples = samples.unwrap_or(session.samples);
    let cfg = TheoremAConfig::new(session.seed, samples);
    let outcome = verify_theorem_a(collection, &cfg)?;
    let details = serde_json::to_value(&outcome).expect("report serializes");
    if outcome.pass {
        Ok(Outcome::pass(details))
    } else {
        Ok(Outcome::fail(details))
    }
}

pub fn jordan_holder_op(
    algebra: &Arc<Algebra>,
    collection: &mut SiltingCollection,
    session: &SessionConfig,
    samples: Option<usize>,
) -> Result<Outcome, Error> {
    certify(collection, session)?;
    let samples = samples.unwrap_or(100);
    let mut prng = Prng::new(session.seed);
    let cfg = RandomComplexConfig::default();
    let mut tested = 0;
    let mut failures = 0;
    let mut attempts = 0;
    while tested < samples && attempts < samples * 10 {
        attempts += 1;
        let x = random_complex(algebra, &mut prng, &cfg);
        let seed = prng.next_u64();
        match verify_filtration_equivalence(&x, collection, 3, seed) {
            Ok(eq) => {
                tested += 1;
                if !eq.all_equal {
                    failures += 1;
                }
            }
            Err(Error::NotInFiltration { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let details = json!({
        "objects_tested": tested,
        "filtrations_per_object": 6,
        "gamma_mismatches": failures,
    });
    if failures == 0 && tested >= samples {
        Ok(Outcome::pass(details))
    } else {
        Ok(Outcome::fail(details))
    }
}

pub fn horseshoe_op(
    algebra: &Arc<Algebra>,
    collection: &mut SiltingCollection,
    session: &SessionConfig,
    samples: Option<usize>,
) -> Result<Outcome, Error> {
    certify(collection, session)?;
    let samples = samples.unwrap_or(50);
    let mut prng = Prng::new(session.seed);
    let cfg = RandomComplexConfig::default();
    let mut extensions = 0;
    let mut failures = 0;
    let mut attempts = 0;
    while extensions < samples && attempts < samples * 10 {
        attempts += 1;
        let x = random_complex(algebra, &mut prng, &cfg);
        let z = random_complex(algebra, &mut prng, &cfg);
        let seed = prng.next_u64();
        match verify_horseshoe(&x, &z, collection, 2, seed) {
            Ok(r) => {
                extensions += r.samples_run;
                failures += r.additivity_failures;
            }
            Err(Error::NotInFiltration { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let details = json!({
        "extensions_tested": extensions,
        "additivity_failures": failures,
    });
    if failures == 0 && extensions >= samples {
        Ok(Outcome::pass(details))
    } else {
        Ok(Outcome::fail(details))
    }
}

fn effective_d(collection: &SiltingCollection, d_override: Option<u32>) -> Result<u32, Error> {
    if let Some(d) = d_override {
        if d < 2 {
            return Err(Error::Parse("d must be >= 2".into()));
        }
        return Ok(d);
    }
    match collection.rigidity() {
        Rigidity::Rigid(d) => Ok(d),
        Rigidity::Presilting => Ok(2),
    }
}

pub fn fd_closure_op(
    collection: &mut SiltingCollection,
    session: &SessionConfig,
    samples: Option<usize>,
    d_override: Option<u32>,
) -> Result<Outcome, Error> {
    hom_sweep(collection, session);
    let d = effective_d(collection, d_override)?;
    let samples = samples.unwrap_or(5);
    let outcome =
        verify_fd_extension_closure(collection, d, samples, session.bound, session.seed)?;
    let details = serde_json::to_value(&outcome).expect("report serializes");
    if outcome.closed {
        Ok(Outcome::pass(details))
    } else {
        Ok(Outcome::fail(details))
    }
}

pub fn cluster_n_op(
    collection: &mut SiltingCollection,
    session: &SessionConfig,
    samples: Option<usize>,
    d_override: Option<u32>,
) -> Result<Outcome, Error> {
    hom_sweep(collection, session);
    let d = effective_d(collection, d_override)?;
    let samples = samples.unwrap_or(5);
    let outcome = compute_n_subgroup(collection, d, samples, session.bound, session.seed)?;
    let details = serde_json::to_value(&outcome).expect("report serializes");
    // For a verified presilting collection the subgroup must vanish.
    if collection.verified_presilting() && outcome.nonzero_generators > 0 {
        Ok(Outcome::fail(details))
    } else {
        Ok(Outcome::pass(details))
    }
}

/// The bundled worked example, end to end: 2-rigidity with the presilting
/// failure at shift 2, X excluded from F_2 by the label obstruction, the
/// triangle S3 -> X -> Σ^{-1}(S1) with verified cone identities, and the
/// failure of extension closure for F_2.
pub fn example_4_3_op(
    collection: &mut SiltingCollection,
    x: &Complex,
    session: &SessionConfig,
    samples: Option<usize>,
) -> Result<Outcome, Error> {
    let mut checks: BTreeMap<&str, bool> = BTreeMap::new();
    let sweep = hom_sweep(collection, session);
    checks.insert(
        "two_rigid",
        sweep.violations.iter().all(|&(_, _, k, _)| k >= 2),
    );
    checks.insert(
        "presilting_fails_at_2",
        sweep.violations.iter().any(|&(_, _, k, _)| k == 2),
    );

    let opts = extract_opts(session);
    let membership = membership_in_fm(x, collection, 2, session.bound, &opts)?;
    checks.insert(
        "x_not_in_f2",
        matches!(membership, Membership::NonMember(_)),
    );

    let s1 = collection
        .summands()
        .find(|(n, _)| *n == "S1")
        .map(|(_, c)| c.clone())
        .ok_or_else(|| Error::Precondition("collection must contain summand S1".into()))?;
    let s3 = collection
        .summands()
        .find(|(n, _)| *n == "S3")
        .map(|(_, c)| c.clone())
        .ok_or_else(|| Error::Precondition("collection must contain summand S3".into()))?;
    let maps = hom_space(&s3, x);
    let mut triangle_ok = false;
    let mut rotated_ok = false;
    let mut triangle_maps = Value::Null;
    if let Some(f) = maps.basis.first() {
        let t = cone_triangle(f)?;
        let mut prng = Prng::new(session.seed);
        triangle_ok = iso_test(t.z(), &s1.shift(-1), &mut prng, 32) == IsoVerdict::Iso;
        let r = rotate(&t)?;
        rotated_ok = r.x() == x && *r.z() == s3.shift(1);
        triangle_maps = json!({
            "a": t.a.display(),
            "b": t.b.display(),
            "c": t.c.display(),
        });
    }
    checks.insert("triangle_s3_x_s1", triangle_ok);
    checks.insert("triangle_rotates", rotated_ok);

    let closure = verify_fd_extension_closure(
        collection,
        2,
        samples.unwrap_or(5),
        session.bound,
        session.seed,
    )?;
    checks.insert("f2_not_extension_closed", !closure.closed);

    let pass = checks.values().all(|&b| b);
    let details = json!({
        "checks": checks,
        "hom_violations": sweep.violations,
        "x_minimal_labels": minimal_reduce(x).minimal.graded_labels(),
        "triangle": triangle_maps,
        "closure": serde_json::to_value(&closure).expect("report serializes"),
    });
    if pass {
        Ok(Outcome::pass(details))
    } else {
        Ok(Outcome::fail(details))
    }
}
