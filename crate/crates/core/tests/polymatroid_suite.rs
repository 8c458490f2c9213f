use std::sync::Arc;

use num_rational::Rational64;
use qleak_core::subspace::all_subspaces;
use qleak_core::{BilinearForm, Field, MatrixCode, QPolymatroid, Subspace};

/// `(q, n, m, k, seed)` for 56 seeded codes.
fn instances() -> Vec<(u32, usize, usize, usize, u64)> {
    let mut out = Vec::new();
    for seed in 0..8u64 {
        for &(n, m) in &[(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)] {
            let k = 1 + (seed as usize) % (n * m - 1);
            out.push((2, n, m, k, seed));
        }
        for &(n, m) in &[(2, 2), (3, 2)] {
            let k = 1 + (seed as usize) % (n * m - 1);
            out.push((3, n, m, k, 100 + seed));
        }
    }
    out
}

fn code(q: u32, n: usize, m: usize, k: usize, seed: u64) -> MatrixCode {
    MatrixCode::random(Field::shared(q, 1).unwrap(), n, m, k, seed).unwrap()
}

/// `m·ρ_C(V)` straight from the shortened subcode.
fn oracle_rank_num(c: &MatrixCode, v: &Subspace) -> i64 {
    c.dim() as i64 - c.shortened_dim(&v.perp(c.field())).unwrap() as i64
}

#[test]
fn axioms_hold_exhaustively() {
    for (q, n, m, k, seed) in instances() {
        let c = code(q, n, m, k, seed);
        let mc = QPolymatroid::from_code(&c).unwrap();
        let report = mc.verify_axioms();
        assert!(report.passed(), "q={q} n={n} m={m} k={k} seed={seed}: {:?}", report.violations.first());
        for v in mc.spaces() {
            assert_eq!(mc.rank_num(v).unwrap(), oracle_rank_num(&c, v));
        }
    }
}

#[test]
fn code_duality_matches_polymatroid_duality() {
    let cases = instances();
    assert!(cases.len() >= 50);
    for (q, n, m, k, seed) in cases {
        let c = code(q, n, m, k, seed);
        let lhs = QPolymatroid::from_code(&c).unwrap().dual(&BilinearForm::standard(n)).unwrap();
        let rhs = QPolymatroid::from_code(&c.dual()).unwrap();
        assert!(lhs.same_table(&rhs), "q={q} n={n} m={m} k={k} seed={seed}");
        assert!(lhs.dual(&BilinearForm::standard(n)).unwrap().same_table(&QPolymatroid::from_code(&c).unwrap()));
    }
}

#[test]
fn shortened_dual_dimension_identity() {
    for (q, n, m, k, seed) in instances() {
        let c = code(q, n, m, k, seed);
        let f = c.field().clone();
        let d = c.dual();
        for v in all_subspaces(&f, n).unwrap() {
            let vp = v.perp(&f);
            let lhs = d.shortened_dim(&v).unwrap() as i64;
            let rhs = d.dim() as i64 - (m * vp.dim()) as i64 + c.shortened_dim(&vp).unwrap() as i64;
            assert_eq!(lhs, rhs, "q={q} n={n} m={m} k={k} seed={seed} V={v:?}");
        }
    }
}

#[test]
fn rank_increments_are_bounded_by_dimension() {
    for (q, n, m, k, seed) in instances().into_iter().take(20) {
        let mc = QPolymatroid::from_code(&code(q, n, m, k, seed)).unwrap();
        let f = mc.field().clone();
        for v in mc.spaces() {
            for w in mc.spaces().iter().filter(|w| v.contains(&f, w)) {
                let gap = mc.rank(v).unwrap() - mc.rank(w).unwrap();
                assert!(gap <= Rational64::from_integer((v.dim() - w.dim()) as i64));
            }
        }
    }
}

#[test]
fn pinned_fractional_rank_witness() {
    let c = code(2, 3, 2, 3, 0);
    let mc = QPolymatroid::from_code(&c).unwrap();
    assert!(!mc.is_q_matroid());
    assert_eq!(mc.rank(&Subspace::coordinate(3, &[1])).unwrap(), Rational64::new(1, 2));
    assert!(mc.verify_axioms().passed());
}

#[test]
fn uniform_duality_and_minors() {
    let f = Field::shared(2, 1).unwrap();
    for n in 1..=4 {
        for k in 0..=n {
            let u = QPolymatroid::uniform(f.clone(), n, k).unwrap();
            let expected = QPolymatroid::uniform(f.clone(), n, n - k).unwrap();
            assert!(u.dual(&BilinearForm::standard(n)).unwrap().same_table(&expected));
        }
    }
    let u42 = QPolymatroid::uniform(f.clone(), 4, 2).unwrap();
    let z = Subspace::coordinate(4, &[2]);
    assert!(u42.contract(&z).unwrap().same_table(&QPolymatroid::uniform(f.clone(), 3, 1).unwrap()));
    assert!(u42.restrict(&Subspace::full(4)).unwrap().same_table(&u42));
    assert!(u42.contract(&Subspace::zero(4)).unwrap().same_table(&u42));
}

#[test]
fn vector_code_expansions_are_q_matroids() {
    use qleak_core::{ExtField, VectorCode};
    for (p, m, n, k) in [(2, 2, 2, 1), (2, 3, 3, 2), (2, 3, 4, 2), (3, 2, 2, 1)] {
        let ext = Arc::new(ExtField::standard(p, 1, m).unwrap());
        for seed in 0..5 {
            let c = VectorCode::random(ext.clone(), n, k, seed).unwrap();
            assert!(QPolymatroid::from_code(&c.expand()).unwrap().is_q_matroid());
        }
    }
}
