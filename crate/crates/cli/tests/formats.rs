use bjnear::{ComplexMatrix, C64};
use bjnear_cli::io::{parse_algebra, parse_matrix, parse_subspace, serialize_matrix};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(f64::MAX),
        Just(5e-324),
    ]
}

fn matrix() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..5).prop_flat_map(|n| {
        prop::collection::vec((finite(), finite()), n * n).prop_map(move |v| {
            ComplexMatrix::from_row_iterator(n, n, v.into_iter().map(|(re, im)| C64::new(re, im)))
        })
    })
}

proptest! {
    #[test]
    fn matrices_round_trip_bit_exactly(m in matrix()) {
        let back = parse_matrix(&serialize_matrix(&m)).unwrap();
        prop_assert_eq!(back.shape(), m.shape());
        for (x, y) in back.iter().zip(m.iter()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }
}

#[test]
fn entries_are_row_major() {
    let m = parse_matrix(r#"{"n":2,"entries":[[1,0],[2,0],[3,0],[4,1]]}"#).unwrap();
    assert_eq!(m[(0, 1)], C64::new(2.0, 0.0));
    assert_eq!(m[(1, 0)], C64::new(3.0, 0.0));
    assert_eq!(m[(1, 1)], C64::new(4.0, 1.0));
}

#[test]
fn malformed_inputs_are_rejected() {
    for bad in [
        r#"{"n":2,"real_entries":[1,2,3]}"#,
        r#"{"n":2}"#,
        r#"{"n":0,"real_entries":[]}"#,
        r#"{"n":1,"real_entries":[1],"entries":[[1,0]]}"#,
        r#"{"n":1,"real_entries":[1e999]}"#,
        r#"{"n":1,"real_entries":[1],"extra":true}"#,
        "not json",
    ] {
        assert!(parse_matrix(bad).is_err(), "accepted {bad}");
    }
}

#[test]
fn diagonal_span_has_dimension_n() {
    let text = r#"{"n":3,"field":"real","span":[
        {"n":3,"real_entries":[1,0,0,0,0,0,0,0,0]},
        {"n":3,"real_entries":[0,0,0,0,1,0,0,0,0]},
        {"n":3,"real_entries":[0,0,0,0,0,0,0,0,1]}]}"#;
    let w = parse_subspace(text).unwrap();
    assert_eq!(w.dim(), 3);
    assert!(w.gram_error() < 1e-10);
}

#[test]
fn dependent_span_is_reduced() {
    let text = r#"{"n":2,"field":"complex","span":[
        {"n":2,"real_entries":[1,0,0,1]},
        {"n":2,"entries":[[0,2],[0,0],[0,0],[0,2]]}]}"#;
    assert_eq!(parse_subspace(text).unwrap().dim(), 1);
}

#[test]
fn subspace_errors() {
    assert!(parse_subspace(r#"{"n":2,"field":"quaternion","span":"diagonal"}"#).is_err());
    assert!(parse_subspace(r#"{"n":2,"field":"real","span":"upper"}"#).is_err());
    assert!(parse_subspace(
        r#"{"n":2,"field":"real","span":[{"n":3,"real_entries":[1,0,0,0,1,0,0,0,1]}]}"#
    )
    .is_err());
}

#[test]
fn algebras() {
    assert_eq!(parse_algebra(r#"{"n":4,"blocks":[2,2]}"#).unwrap().dim(), 8);
    let s = 0.5f64.sqrt();
    let rotated = format!(
        r#"{{"n":2,"blocks":[1,1],"unitary":{{"n":2,"real_entries":[{s},{s},{s},-{s}]}}}}"#
    );
    assert_eq!(parse_algebra(&rotated).unwrap().dim(), 2);
    assert!(
        parse_algebra(r#"{"n":2,"blocks":[1,1],"unitary":{"n":2,"real_entries":[1,1,0,1]}}"#)
            .is_err()
    );
    assert!(parse_algebra(r#"{"n":3,"scalars":true,"blocks":[3]}"#).is_err());
    assert!(parse_algebra(r#"{"n":3}"#).is_err());
}
