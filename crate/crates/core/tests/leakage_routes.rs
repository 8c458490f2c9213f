use std::sync::Arc;

use num_rational::Rational64;
use qleak_core::code::DEFAULT_CODEWORD_BUDGET;
use qleak_core::leakage::{
    cond_entropy_direct, cond_entropy_padded, cond_entropy_padded_with, cond_entropy_port, leakage_martinez, LogQ,
    NestedPair, Observation, PaddedScheme,
};
use qleak_core::subspace::all_subspaces;
use qleak_core::{Field, MatrixCode, MatrixFq, Subspace};

fn f2() -> Arc<Field> {
    Field::shared(2, 1).unwrap()
}

fn binary_4x2() -> MatrixCode {
    MatrixCode::new(
        f2(),
        4,
        2,
        &[
            vec![vec![1, 0], vec![0, 0], vec![1, 1], vec![0, 1]],
            vec![vec![0, 1], vec![0, 0], vec![1, 0], vec![1, 1]],
            vec![vec![0, 0], vec![1, 0], vec![1, 0], vec![1, 0]],
            vec![vec![0, 0], vec![0, 1], vec![0, 1], vec![0, 1]],
        ],
    )
    .unwrap()
}

/// Seeded pairs with q = 2, n ≤ 4, m ≤ 2, dim C1 ≤ 6.
fn random_pairs() -> Vec<(String, NestedPair)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < 30 {
        seed += 1;
        let n = 2 + (seed as usize % 3);
        let m = 1 + (seed as usize / 3) % 2;
        let cap = (n * m).min(6);
        let k1 = 2 + seed as usize % (cap - 1);
        let k2 = (seed as usize / 5) % k1;
        let pair = NestedPair::random(f2(), n, m, k1, k2, seed).unwrap();
        out.push((format!("n={n} m={m} k1={k1} k2={k2} seed={seed}"), pair));
    }
    out
}

fn assert_routes_agree(label: &str, pair: &NestedPair, p0: Option<&Subspace>) {
    let ell = pair.ell() as i64;
    for v in all_subspaces(&f2(), pair.c1().n()).unwrap() {
        let obs = Observation::from_rowspace(&v);
        let direct = cond_entropy_direct(pair, &obs, DEFAULT_CODEWORD_BUDGET).unwrap();
        let padded = cond_entropy_padded(pair, &obs).unwrap();
        let martinez = LogQ::from_int(ell - leakage_martinez(pair, &obs).unwrap());
        assert_eq!(direct, padded, "{label} V={v:?}");
        assert_eq!(direct, martinez, "{label} V={v:?}");
        if let Some(p0) = p0 {
            assert_eq!(direct, cond_entropy_port(pair, p0, &obs).unwrap(), "{label} V={v:?}");
        }
    }
}

#[test]
fn routes_agree_on_the_port_pair() {
    let p0 = Subspace::coordinate(4, &[0]);
    let pair = NestedPair::from_port(binary_4x2(), &p0).unwrap();
    assert_eq!(pair.ell(), 2);
    assert_routes_agree("port pair", &pair, Some(&p0));
}

#[test]
fn routes_agree_on_random_pairs() {
    let pairs = random_pairs();
    assert!(pairs.len() >= 25);
    for (label, pair) in &pairs {
        assert_routes_agree(label, pair, None);
    }
}

#[test]
fn routes_agree_on_random_port_pairs() {
    let mut tested = 0;
    for seed in 0..20u64 {
        let c1 = MatrixCode::random(f2(), 3, 2, 3, seed).unwrap();
        let p0 = Subspace::coordinate(3, &[(seed % 3) as usize]);
        let Ok(pair) = NestedPair::from_port(c1, &p0) else { continue };
        assert_routes_agree(&format!("port seed={seed}"), &pair, Some(&p0));
        tested += 1;
    }
    assert!(tested >= 10);
}

#[test]
fn entropy_decreases_with_observation() {
    for (label, pair) in random_pairs().iter().take(10) {
        let f = f2();
        let spaces = all_subspaces(&f, pair.c1().n()).unwrap();
        let h = |v: &Subspace| cond_entropy_padded(pair, &Observation::from_rowspace(v)).unwrap().value();
        for v in &spaces {
            assert!(h(v) >= Rational64::from_integer(0) && h(v) <= Rational64::from_integer(pair.ell() as i64));
            for w in spaces.iter().filter(|w| v.contains(&f, w)) {
                assert!(h(v) <= h(w), "{label} {v:?} ⊇ {w:?}");
            }
        }
    }
}

#[test]
fn only_the_row_space_matters() {
    let f = f2();
    let pair = NestedPair::from_port(binary_4x2(), &Subspace::coordinate(4, &[0])).unwrap();
    let b1 = MatrixFq::new(vec![vec![0, 1, 1, 0], vec![0, 0, 1, 1]], 4).unwrap();
    let b2 = MatrixFq::new(vec![vec![0, 1, 0, 1], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 0]], 4).unwrap();
    let o1 = Observation::new(&f, b1).unwrap();
    let o2 = Observation::new(&f, b2).unwrap();
    assert_eq!(o1.rowspace(), o2.rowspace());
    assert_eq!(
        cond_entropy_direct(&pair, &o1, DEFAULT_CODEWORD_BUDGET).unwrap(),
        cond_entropy_direct(&pair, &o2, DEFAULT_CODEWORD_BUDGET).unwrap()
    );
}

#[test]
fn padding_basis_does_not_matter() {
    let f = f2();
    for (label, pair) in random_pairs().iter().take(10) {
        let base = PaddedScheme::new(pair).unwrap();
        let h = pair.c2().dual().basis().to_vec();
        if h.len() < 2 {
            continue;
        }
        // h0 ← h0 + h1, then reverse the order
        let mut alt = h.clone();
        alt[0] = alt[0].iter().zip(&h[1]).map(|(&a, &b)| f.add(a, b)).collect();
        alt.reverse();
        let other = PaddedScheme::with_dual_basis(pair, alt).unwrap();
        for v in all_subspaces(&f, pair.c1().n()).unwrap() {
            let obs = Observation::from_rowspace(&v);
            assert_eq!(
                cond_entropy_padded_with(&base, &obs).unwrap(),
                cond_entropy_padded_with(&other, &obs).unwrap(),
                "{label} V={v:?}"
            );
        }
    }
}

#[test]
fn complement_choice_does_not_matter() {
    let p0 = Subspace::coordinate(4, &[0]);
    let a = NestedPair::from_port(binary_4x2(), &p0).unwrap();
    let f = f2();
    // shift each complement vector by a word of C2
    let shift = a.c2().basis()[0].clone();
    let comp: Vec<Vec<u32>> = a.complement().iter().map(|w| w.iter().zip(&shift).map(|(&x, &y)| f.add(x, y)).collect()).collect();
    let b = NestedPair::with_complement(a.c1().clone(), a.c2().clone(), comp).unwrap();
    for v in all_subspaces(&f, 4).unwrap() {
        let obs = Observation::from_rowspace(&v);
        assert_eq!(
            cond_entropy_direct(&a, &obs, DEFAULT_CODEWORD_BUDGET).unwrap(),
            cond_entropy_direct(&b, &obs, DEFAULT_CODEWORD_BUDGET).unwrap()
        );
    }
}
