//! The fixture zoo: the named small algebras every suite runs over, plus
//! a seeded generator of random valid dg algebras.

use crate::algebra::{AlgebraHom, BasisElement, DgAlgebra, LinComb};
use crate::scalar::Field;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A0: the ground field as a dg algebra — one idempotent `e`, zero
/// differential.
pub fn a0(field: Field) -> Arc<DgAlgebra> {
    Arc::new(
        DgAlgebra::new(
            field,
            vec![BasisElement {
                label: "e".into(),
                degree: 0,
                left: 0,
                right: 0,
            }],
            vec![0],
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .expect("A0"),
    )
}

/// A2: the path algebra of the quiver 1 → 2, concentrated in degree 0.
/// Basis e1, e2 and the arrow `al` with e1·al·e2 = al, so e1·A2 has basis
/// {e1, al} — the paths out of vertex 1.
pub fn a2(field: Field) -> Arc<DgAlgebra> {
    Arc::new(
        DgAlgebra::new(
            field,
            vec![
                BasisElement {
                    label: "e1".into(),
                    degree: 0,
                    left: 0,
                    right: 0,
                },
                BasisElement {
                    label: "e2".into(),
                    degree: 0,
                    left: 1,
                    right: 1,
                },
                BasisElement {
                    label: "al".into(),
                    degree: 0,
                    left: 0,
                    right: 1,
                },
            ],
            vec![0, 1],
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .expect("A2"),
    )
}

/// Λ = K[x]/(x²) with |x| = 1 and zero differential (the exterior algebra
/// on one generator).
pub fn exterior(field: Field) -> Arc<DgAlgebra> {
    Arc::new(
        DgAlgebra::new(
            field,
            vec![
                BasisElement {
                    label: "e".into(),
                    degree: 0,
                    left: 0,
                    right: 0,
                },
                BasisElement {
                    label: "x".into(),
                    degree: 1,
                    left: 0,
                    right: 0,
                },
            ],
            vec![0],
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .expect("exterior"),
    )
}

/// D: basis {e, a: deg 0, b: deg 1} with all non-idempotent products zero
/// and d(a) = b — the smallest fixture with a genuinely nonzero
/// differential.
pub fn fixture_d(field: Field) -> Arc<DgAlgebra> {
    Arc::new(
        DgAlgebra::new(
            field,
            vec![
                BasisElement {
                    label: "e".into(),
                    degree: 0,
                    left: 0,
                    right: 0,
                },
                BasisElement {
                    label: "a".into(),
                    degree: 0,
                    left: 0,
                    right: 0,
                },
                BasisElement {
                    label: "b".into(),
                    degree: 1,
                    left: 0,
                    right: 0,
                },
            ],
            vec![0],
            BTreeMap::new(),
            BTreeMap::from([(1, LinComb::basis(2, field))]),
        )
        .expect("fixture D"),
    )
}

/// K[t]/(t³) in degree 0: the fixture with a nonzero non-idempotent
/// product (t·t = t²).
pub fn truncated_poly(field: Field) -> Arc<DgAlgebra> {
    Arc::new(
        DgAlgebra::new(
            field,
            vec![
                BasisElement {
                    label: "e".into(),
                    degree: 0,
                    left: 0,
                    right: 0,
                },
                BasisElement {
                    label: "t".into(),
                    degree: 0,
                    left: 0,
                    right: 0,
                },
                BasisElement {
                    label: "t2".into(),
                    degree: 0,
                    left: 0,
                    right: 0,
                },
            ],
            vec![0],
            BTreeMap::from([((1, 1), LinComb::basis(2, field))]),
            BTreeMap::new(),
        )
        .expect("truncated polynomial algebra"),
    )
}

/// The four named fixtures, in spec order.
pub fn named_fixtures(field: Field) -> Vec<(&'static str, Arc<DgAlgebra>)> {
    vec![
        ("A0", a0(field)),
        ("A2", a2(field)),
        ("Lambda", exterior(field)),
        ("D", fixture_d(field)),
    ]
}

/// A seeded random valid dg algebra: radical-square-zero over 1–2
/// idempotents, with the radical generators paired so that `d` sends one
/// partner to the other. Associativity and Leibniz hold by construction
/// (all products of radicals vanish and `d` never reaches idempotents);
/// the generator still asserts `validate()` in debug builds.
///
/// Total dimension ≤ 8, degrees within [−3, 3].
pub fn random_algebra(seed: u64) -> Arc<DgAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = match rng.gen_range(0..3) {
        0 => Field::Rationals,
        1 => Field::prime(5).expect("5 is prime"),
        _ => Field::prime(7).expect("7 is prime"),
    };
    let n_idem = rng.gen_range(1..=2usize);
    let mut basis = Vec::new();
    let mut diff: BTreeMap<usize, LinComb> = BTreeMap::new();
    for k in 0..n_idem {
        basis.push(BasisElement {
            label: format!("e{}", k + 1),
            degree: 0,
            left: k,
            right: k,
        });
    }
    let idempotents: Vec<usize> = (0..n_idem).collect();
    let budget = 8 - n_idem;
    let n_pairs = rng.gen_range(0..=budget / 2);
    let mut next = basis.len();
    for p in 0..n_pairs {
        let degree = rng.gen_range(-3..=2);
        let left = rng.gen_range(0..n_idem);
        let right = rng.gen_range(0..n_idem);
        basis.push(BasisElement {
            label: format!("x{}", p + 1),
            degree,
            left,
            right,
        });
        basis.push(BasisElement {
            label: format!("dx{}", p + 1),
            degree: degree + 1,
            left,
            right,
        });
        let coeff = loop {
            let c = field.from_integer(rng.gen_range(-3..=3));
            if !c.is_zero() {
                break c;
            }
        };
        diff.insert(next, LinComb::singleton(next + 1, coeff));
        next += 2;
    }
    let n_single = rng.gen_range(0..=(budget - 2 * n_pairs).min(3));
    for s in 0..n_single {
        basis.push(BasisElement {
            label: format!("g{}", s + 1),
            degree: rng.gen_range(-3..=3),
            left: rng.gen_range(0..n_idem),
            right: rng.gen_range(0..n_idem),
        });
    }
    let algebra =
        DgAlgebra::new(field, basis, idempotents, BTreeMap::new(), diff).expect("random algebra");
    debug_assert!(algebra.validate().is_valid());
    Arc::new(algebra)
}

/// The standard zoo for the acceptance suite: the named fixtures over ℚ
/// plus `count` seeded random algebras.
pub fn acceptance_zoo(count: u64) -> Vec<(String, Arc<DgAlgebra>)> {
    let mut out: Vec<(String, Arc<DgAlgebra>)> = named_fixtures(Field::Rationals)
        .into_iter()
        .map(|(n, a)| (n.to_string(), a))
        .collect();
    out.push(("Kt3".to_string(), truncated_poly(Field::Rationals)));
    for seed in 0..count {
        out.push((format!("R{seed}"), random_algebra(seed)));
    }
    out
}

/// The unitary algebra homomorphisms of the fixture set: identities plus
/// the unit inclusions A0 → Λ and A0 → A2 (e ↦ e1 + e2; the single-vertex
/// maps fail the unitarity condition B = ι(A)Bι(A), so the unit inclusion
/// is the vertex embedding that qualifies).
pub fn fixture_unitary_homs(field: Field) -> Vec<(String, AlgebraHom)> {
    let mut out = Vec::new();
    for (name, alg) in named_fixtures(field) {
        out.push((format!("id_{name}"), AlgebraHom::identity(&alg)));
    }
    let a0 = a0(field);
    let lam = exterior(field);
    let unit_lambda = AlgebraHom::new(a0.clone(), lam.clone(), vec![LinComb::basis(0, field)])
        .expect("A0 → Λ");
    out.push(("unit_Lambda".into(), unit_lambda));
    let a2 = a2(field);
    let unit_a2 = AlgebraHom::new(
        a0,
        a2,
        vec![LinComb::from_terms(
            [(0, field.one()), (1, field.one())],
            field,
        )],
    )
    .expect("A0 → A2");
    out.push(("unit_A2".into(), unit_a2));
    out
}
