//! Shared fixtures for unit tests: the A3 quiver algebra with the single
//! monomial relation, and the complexes from its standard example.

use std::sync::Arc;

use crate::exactmath::Field;
use crate::homotopycat::Complex;
use crate::pathalgebra::{Algebra, Arrow, Presentation, DEFAULT_PATH_BOUND};
use crate::silting::{Rigidity, SiltingCollection};

pub(crate) fn a3_presentation() -> Presentation {
    Presentation {
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
    }
}

pub(crate) fn a3() -> Arc<Algebra> {
    Arc::new(Algebra::load(&a3_presentation(), Field::Q, DEFAULT_PATH_BOUND).unwrap())
}

/// The two-term complex `P2 -> P1` (degrees 0, 1) induced by `alpha`.
pub(crate) fn x_complex(alg: &Arc<Algebra>) -> Complex {
    let v = serde_json::json!({
        "terms": {"0": ["2"], "1": ["1"]},
        "differentials": {"0": [[{"path": ["alpha"], "coeff": "1"}]]},
    });
    Complex::from_json(alg.clone(), &v).unwrap()
}

/// Minimal projective resolution of the simple at vertex 1:
/// `P3 -> P2 -> P1` in degrees -2, -1, 0.
pub(crate) fn s1_complex(alg: &Arc<Algebra>) -> Complex {
    let v = serde_json::json!({
        "terms": {"-2": ["3"], "-1": ["2"], "0": ["1"]},
        "differentials": {
            "-2": [[{"path": ["beta"], "coeff": "1"}]],
            "-1": [[{"path": ["alpha"], "coeff": "1"}]],
        },
    });
    Complex::from_json(alg.clone(), &v).unwrap()
}

/// The simple at vertex 3 is projective: the stalk `P3` in degree 0.
pub(crate) fn s3_complex(alg: &Arc<Algebra>) -> Complex {
    Complex::stalk(alg.clone(), 2, 0)
}

/// The stalk-projective collection {P1, P2, P3}, declared presilting
/// (unverified).
pub(crate) fn stalk_collection(alg: &Arc<Algebra>) -> SiltingCollection {
    let summands = (0..3)
        .map(|v| (format!("P{}", v + 1), Complex::stalk(alg.clone(), v, 0)))
        .collect();
    SiltingCollection::new(alg.clone(), summands, Rigidity::Presilting).unwrap()
}

/// add(S1 + S3), declared 2-rigid (unverified).
pub(crate) fn rigid2_collection(alg: &Arc<Algebra>) -> SiltingCollection {
    SiltingCollection::new(
        alg.clone(),
        vec![
            ("S1".into(), s1_complex(alg)),
            ("S3".into(), s3_complex(alg)),
        ],
        Rigidity::Rigid(2),
    )
    .unwrap()
}

