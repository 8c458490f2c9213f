//! The two worked examples, with values transcribed by hand.

use std::collections::BTreeSet;
use std::sync::Arc;

use qleak_core::access::{check_gap_bound, check_qmatroid_port_characterization, port, PortSpec};
use qleak_core::code::DEFAULT_CODEWORD_BUDGET;
use qleak_core::minimal::{check_massey, massey_image};
use qleak_core::{ExtField, Field, MatrixCode, QPolymatroid, Subspace, VectorCode};

fn f2() -> Arc<Field> {
    Field::shared(2, 1).unwrap()
}

fn sp(rows: &[&[u32]]) -> Subspace {
    let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
    Subspace::span(&f2(), &rows, rows[0].len()).unwrap()
}

fn set(items: Vec<Subspace>) -> BTreeSet<Subspace> {
    items.into_iter().collect()
}

fn binary_4x2() -> Arc<QPolymatroid> {
    let c = MatrixCode::new(
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
    .unwrap();
    Arc::new(QPolymatroid::from_code(&c).unwrap())
}

fn f8_4_2() -> VectorCode {
    // α = 2, α² = 4, α³ = α + 1 = 3 in F_8 = F_2[α]/(α³ + α + 1)
    let ext = Arc::new(ExtField::standard(2, 1, 3).unwrap());
    VectorCode::new(ext, 4, vec![vec![1, 0, 4, 3], vec![0, 1, 1, 4]]).unwrap()
}

fn e1_split() -> (Subspace, Subspace) {
    (Subspace::coordinate(4, &[0]), Subspace::coordinate(4, &[1, 2, 3]))
}

#[test]
fn binary_4x2_gamma_min_and_circuits() {
    let m = binary_4x2();
    assert!(m.is_q_matroid());
    let circuits = set(m.circuits().unwrap());
    let expected = set(vec![
        sp(&[&[1, 0, 0, 0], &[0, 1, 1, 0]]),
        sp(&[&[0, 1, 0, 1], &[0, 0, 1, 1]]),
        sp(&[&[1, 0, 0, 0], &[0, 1, 0, 1]]),
        sp(&[&[1, 1, 0, 1], &[0, 0, 1, 1]]),
        sp(&[&[1, 0, 1, 1]]),
    ]);
    assert_eq!(circuits, expected);

    let (p0, p) = e1_split();
    let spec = PortSpec::new(m, p0, p).unwrap();
    let s = port(&spec).unwrap();
    let gm = s.in_ground(&s.gamma_min()).unwrap();
    assert_eq!(gm, set(vec![sp(&[&[0, 1, 0, 1]]), sp(&[&[0, 1, 1, 0]]), sp(&[&[0, 0, 1, 1]])]));

    let ch = check_qmatroid_port_characterization(&spec).unwrap();
    assert!(ch.passed());
    assert_eq!(ch.non_circuit_minimal, vec![sp(&[&[0, 0, 1, 1]])]);
}

#[test]
fn f8_4_2_gamma_min_and_massey_image() {
    let c = f8_4_2();
    let (p0, p) = e1_split();
    let m = Arc::new(QPolymatroid::from_code(&c.expand()).unwrap());
    assert!(m.is_q_matroid());
    let spec = PortSpec::new(m, p0.clone(), p.clone()).unwrap();
    let s = port(&spec).unwrap();
    let gm = s.in_ground(&s.gamma_min()).unwrap();
    let expected_gm = set(vec![
        sp(&[&[0, 1, 1, 0]]),
        sp(&[&[0, 1, 0, 0], &[0, 0, 0, 1]]),
        sp(&[&[0, 1, 0, 0], &[0, 0, 1, 1]]),
        sp(&[&[0, 1, 0, 1], &[0, 0, 1, 0]]),
        sp(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
    ]);
    assert_eq!(gm, expected_gm);

    let image = massey_image(&c, &p0, &p, DEFAULT_CODEWORD_BUDGET).unwrap();
    let expected_image = set(vec![
        sp(&[&[0, 1, 1, 0]]),
        sp(&[&[0, 1, 0, 0], &[0, 0, 0, 1]]),
        sp(&[&[0, 1, 0, 0], &[0, 0, 1, 1]]),
    ]);
    assert_eq!(image, expected_image);
    assert!(image.is_subset(&gm) && image.len() < gm.len());

    let r = check_massey(&c, &p0, &p, DEFAULT_CODEWORD_BUDGET).unwrap();
    assert!(r.sufficiency && r.projection_characterization);
    assert!(check_gap_bound(&spec).unwrap().passed());
}
