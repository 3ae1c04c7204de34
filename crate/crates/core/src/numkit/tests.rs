use super::*;
use crate::sample;
use approx::assert_abs_diff_eq;
use proptest::prelude::*;

fn a1() -> ComplexMatrix {
    real_matrix(3, &[0., 1., 0., 1., 0., 1., 0., 1., 0.])
}

fn a2() -> ComplexMatrix {
    real_matrix(3, &[0., 0., 1., 0., 0., 0., 1., 0., 0.])
}

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// Power iteration on `A*A`, independent of the SVD path.
fn power_norm(a: &ComplexMatrix) -> f64 {
    let ata = a.adjoint() * a;
    let mut x = ComplexVector::from_element(a.ncols(), C64::new(1.0, 0.3));
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let y = &ata * &x;
        lambda = y.norm() / x.norm();
        x = &y / C64::new(y.norm(), 0.0);
    }
    lambda.sqrt()
}

#[test]
fn operator_norm_examples() {
    assert_abs_diff_eq!(operator_norm(&(a1() + a2())).unwrap(), 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(operator_norm(&identity(4)).unwrap(), 1.0, epsilon = 1e-14);
    assert_eq!(operator_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
    let mut r = sample::rng(11);
    let a = sample::gaussian(4, 4, &mut r);
    let n = operator_norm(&a).unwrap();
    assert!((n - power_norm(&a)).abs() <= 1e-8 * n);
}

#[test]
fn non_finite_input_rejected() {
    let mut a = identity(2);
    a[(1, 0)] = C64::new(f64::NAN, 0.0);
    assert!(matches!(operator_norm(&a), Err(Error::Input(_))));
    assert!(matches!(svd(&a), Err(Error::Input(_))));
}

#[test]
fn trace_norm_examples() {
    assert_abs_diff_eq!(
        trace_norm(&a1()).unwrap(),
        2.0 * 2f64.sqrt(),
        epsilon = 1e-12
    );
    assert_eq!(trace_norm(&ComplexMatrix::zeros(2, 2)).unwrap(), 0.0);
    let mut r = sample::rng(2);
    let u = sample::unit_vector(3, &mut r);
    let v = sample::unit_vector(3, &mut r);
    assert_abs_diff_eq!(
        trace_norm(&(&u * v.adjoint())).unwrap(),
        1.0,
        epsilon = 1e-12
    );
}

#[test]
fn svd_examples() {
    let d = svd(&real_diag(&[2.0, 1.0])).unwrap();
    assert_abs_diff_eq!(d.singular_values[0], 2.0, epsilon = 1e-14);
    assert_abs_diff_eq!(d.singular_values[1], 1.0, epsilon = 1e-14);
    assert!((&d.right_vectors - identity(2)).norm() <= 1e-14);

    let s = svd(&a2()).unwrap().singular_values;
    assert_abs_diff_eq!(s[0], 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(s[1], 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(s[2], 0.0, epsilon = 1e-14);

    let mut r = sample::rng(5);
    let a = sample::gaussian(5, 5, &mut r);
    let d = svd(&a).unwrap();
    let err = operator_norm(&(d.reconstruct() - &a)).unwrap();
    assert!(err <= 1e-10 * d.norm());
}

fn check_spectral_invariants(a: &ComplexMatrix, d: &SpectralData) {
    let k = d.singular_values.len();
    assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
    assert!(d.singular_values.iter().all(|&s| s >= 0.0));
    let i = identity(k);
    assert!((d.left_vectors.adjoint() * &d.left_vectors - &i).norm() <= 1e-12);
    assert!((d.right_vectors.adjoint() * &d.right_vectors - &i).norm() <= 1e-12);
    for j in 0..k {
        let lhs = a * d.right_vectors.column(j);
        let rhs = d.left_vectors.column(j) * C64::new(d.singular_values[j], 0.0);
        assert!((lhs - rhs).norm() <= 1e-10 * d.norm().max(1e-300));
    }
}

#[test]
fn svd_invariants_on_degenerate_and_rectangular_input() {
    let mut r = sample::rng(8);
    let u = sample::unitary(4, &mut r);
    let w = sample::unitary(4, &mut r);
    // singular values 3, 3, 1, 0
    let a = &u * real_diag(&[3.0, 3.0, 1.0, 0.0]) * w.adjoint();
    check_spectral_invariants(&a, &svd(&a).unwrap());
    let rect = sample::gaussian(3, 5, &mut r);
    check_spectral_invariants(&rect, &svd(&rect).unwrap());
    check_spectral_invariants(&a1(), &svd(&a1()).unwrap());
}

#[test]
fn svd_is_canonical_within_degenerate_spaces() {
    // Same singular spaces presented through different bases give the same
    // canonical right vectors.
    let mut r = sample::rng(21);
    let u = sample::unitary(3, &mut r);
    let mix = sample::unitary(2, &mut r);
    let mut big_mix = identity(3);
    big_mix.view_mut((0, 0), (2, 2)).copy_from(&mix);
    let s = real_diag(&[2.0, 2.0, 0.5]);
    let a = &u * &s;
    let b = &u * &big_mix * &s * big_mix.adjoint();
    let da = svd(&a).unwrap();
    let db = svd(&b).unwrap();
    assert!((da.right_vectors.columns(0, 2) - db.right_vectors.columns(0, 2)).norm() < 1e-10);
    assert_eq!(svd(&a).unwrap().right_vectors, da.right_vectors);
    assert_eq!(svd(&identity(3)).unwrap().right_vectors, identity(3));
}

#[test]
fn hermitian_eig_examples() {
    let e = hermitian_eig(&a1()).unwrap();
    let r2 = 2f64.sqrt();
    for (got, want) in e.values.iter().zip([r2, 0.0, -r2]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
    assert!(hermitian_eig(&identity(3))
        .unwrap()
        .values
        .iter()
        .all(|&l| (l - 1.0).abs() < 1e-15));

    let mut r = sample::rng(3);
    let h = sample::hermitian(5, &mut r);
    let e = hermitian_eig(&h).unwrap();
    assert_abs_diff_eq!(e.values.iter().sum::<f64>(), trace(&h).re, epsilon = 1e-10);
    let scale = 1.0 + operator_norm(&h).unwrap();
    for j in 0..5 {
        let x = e.vectors.column(j);
        let res = &h * x - x * C64::new(e.values[j], 0.0);
        assert!(res.norm() <= 1e-10 * scale);
    }
}

#[test]
fn hermitian_eig_rejects_non_hermitian() {
    let m = real_matrix(2, &[0., 1., 0., 0.]);
    assert!(matches!(hermitian_eig(&m), Err(Error::Input(_))));
}

#[test]
fn mp_inverse_examples() {
    let p = mp_inverse(&real_diag(&[2.0, 0.0]), &cfg()).unwrap();
    assert!((p - real_diag(&[0.5, 0.0])).norm() < 1e-15);
    assert_eq!(
        mp_inverse(&ComplexMatrix::zeros(3, 3), &cfg()).unwrap(),
        ComplexMatrix::zeros(3, 3)
    );
    assert!(matches!(
        mp_inverse(&real_diag(&[1.0, -0.5]), &cfg()),
        Err(Error::Input(_))
    ));
}

fn penrose_check(p: &ComplexMatrix, pinv: &ComplexMatrix, tol: f64) {
    assert!((p * pinv * p - p).norm() <= tol);
    assert!((pinv * p * pinv - pinv).norm() <= tol);
    let pp = p * pinv;
    let qp = pinv * p;
    assert!((&pp - pp.adjoint()).norm() <= tol);
    assert!((&qp - qp.adjoint()).norm() <= tol);
}

#[test]
fn mp_inverse_penrose_identities_on_singular_psd() {
    let mut r = sample::rng(4);
    for rank in 1..=4 {
        let p = sample::density(4, rank, &mut r);
        let pinv = mp_inverse(&p, &cfg()).unwrap();
        penrose_check(&p, &pinv, 1e-9 * (1.0 + pinv.norm()));
    }
}

#[test]
fn top_subspace_examples() {
    let t = top_singular_subspace(&real_diag(&[2.0, 1.0]), &cfg()).unwrap();
    assert_eq!(t.multiplicity, 1);
    let e1 = ComplexMatrix::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    assert!((&t.vectors - e1).norm() <= 1e-14);
    assert_eq!(
        top_singular_subspace(&a1(), &cfg()).unwrap().multiplicity,
        2
    );
    assert_eq!(
        top_singular_subspace(&identity(4), &cfg())
            .unwrap()
            .multiplicity,
        4
    );
    assert!(matches!(
        top_singular_subspace(&ComplexMatrix::zeros(2, 2), &cfg()),
        Err(Error::Input(_))
    ));
}

#[test]
fn numrange_examples() {
    let c = cfg();
    let v = numrange_contains_zero(&identity(3), &c).unwrap();
    assert!(!v.contains && v.witness.is_none());
    assert_abs_diff_eq!(v.support_margin, 1.0, epsilon = 1e-12);

    let m = real_diag(&[1.0, -1.0]);
    let v = numrange_contains_zero(&m, &c).unwrap();
    assert!(v.contains);
    let x = v.witness.unwrap();
    assert_abs_diff_eq!(x.norm(), 1.0, epsilon = 1e-12);
    assert!(quadratic_form(&m, &x).norm() <= 1e-9);
    assert_abs_diff_eq!(x[0].norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-9);

    // W([[0,1],[0,0]]) is the closed disk of radius 1/2; sampled values of
    // x*Mx over a grid of unit vectors surround the origin.
    let m = real_matrix(2, &[0., 1., 0., 0.]);
    let mut seen = [false; 4];
    for i in 0..64 {
        for j in 0..64 {
            let t = std::f64::consts::PI * i as f64 / 64.0;
            let ph = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            let x =
                ComplexVector::from_vec(vec![C64::new(t.cos(), 0.0), C64::from_polar(t.sin(), ph)]);
            let z = quadratic_form(&m, &x);
            let quadrant = (z.re >= 0.0) as usize + 2 * (z.im >= 0.0) as usize;
            seen[quadrant] |= z.norm() > 0.2;
        }
    }
    assert!(seen.iter().all(|&s| s));
    let v = numrange_contains_zero(&m, &c).unwrap();
    assert!(v.contains);
    assert!(quadratic_form(&m, v.witness.as_ref().unwrap()).norm() <= 1e-9);
}

/// Distance from the origin to the convex hull of sampled points, negative
/// when the origin is inside (minus the distance to the hull boundary).
fn hull_signed_distance(points: &[C64]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|z| (z.re, z.im)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let n = hull.len();
    let mut inside = true;
    let mut dist = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (hull[i], hull[(i + 1) % n]);
        if cross(a, b, (0.0, 0.0)) < 0.0 {
            inside = false;
        }
        let d = (b.0 - a.0, b.1 - a.1);
        let len2 = d.0 * d.0 + d.1 * d.1;
        let t = if len2 > 0.0 {
            ((-a.0) * d.0 + (-a.1) * d.1) / len2
        } else {
            0.0
        };
        let t = t.clamp(0.0, 1.0);
        let q = (a.0 + t * d.0, a.1 + t * d.1);
        dist = dist.min((q.0 * q.0 + q.1 * q.1).sqrt());
    }
    if inside {
        -dist
    } else {
        dist
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn operator_norm_dominates_samples(seed in any::<u64>(), n in 1usize..6) {
        let mut r = sample::rng(seed);
        let a = sample::gaussian(n, n, &mut r);
        let norm = operator_norm(&a).unwrap();
        let mut best: f64 = 0.0;
        for _ in 0..1000 {
            let x = sample::unit_vector(n, &mut r);
            best = best.max((&a * x).norm());
        }
        prop_assert!(best <= norm * (1.0 + 1e-12));
        let v = svd(&a).unwrap().right_vectors.column(0).into_owned();
        prop_assert!(((&a * v).norm() - norm).abs() <= 1e-6 * norm);
        let tn = trace_norm(&a).unwrap();
        prop_assert!(norm <= tn * (1.0 + 1e-12) && tn <= n as f64 * norm * (1.0 + 1e-12));
    }

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let mut r = sample::rng(seed);
        let a = sample::gaussian(rows, cols, &mut r);
        let d = svd(&a).unwrap();
        prop_assert!(operator_norm(&(d.reconstruct() - &a)).unwrap() <= 1e-10 * d.norm());
        check_spectral_invariants(&a, &d);
    }

    #[test]
    fn mp_inverse_is_psd_and_commutes(seed in any::<u64>(), n in 1usize..6, rank in 1usize..6) {
        let mut r = sample::rng(seed);
        let p = sample::density(n, rank.min(n), &mut r);
        let pinv = mp_inverse(&p, &cfg()).unwrap();
        let scale = 1.0 + pinv.norm();
        prop_assert!((&pinv - pinv.adjoint()).norm() <= 1e-9 * scale);
        prop_assert!(hermitian_eig(&herm_part(&pinv)).unwrap().min() >= -1e-9 * scale);
        prop_assert!((&p * &pinv - &pinv * &p).norm() <= 1e-9 * scale);
        penrose_check(&p, &pinv, 1e-9 * scale);
    }

    #[test]
    fn top_subspace_columns_are_top_eigenvectors(seed in any::<u64>(), n in 1usize..6, deg in 1usize..4) {
        let mut r = sample::rng(seed);
        let u = sample::unitary(n, &mut r);
        let w = sample::unitary(n, &mut r);
        let deg = deg.min(n);
        let s: Vec<f64> = (0..n).map(|i| if i < deg { 2.0 } else { 1.0 / (1.0 + i as f64) }).collect();
        let a = &u * real_diag(&s) * w.adjoint();
        let c = cfg();
        let t = top_singular_subspace(&a, &c).unwrap();
        prop_assert_eq!(t.multiplicity, deg);
        let ata = a.adjoint() * &a;
        let s1sq = t.norm * t.norm;
        for j in 0..t.multiplicity {
            let v = t.vectors.column(j);
            prop_assert!((&ata * v - v * C64::new(s1sq, 0.0)).norm() <= 10.0 * c.multiplicity_rel_tol * s1sq);
        }
    }

    #[test]
    fn numrange_agrees_with_sampled_hull(seed in any::<u64>(), n in 2usize..4, shift_re in -1.5f64..1.5, shift_im in -1.5f64..1.5) {
        let mut r = sample::rng(seed);
        let m = sample::gaussian(n, n, &mut r).scale(0.5)
            + identity(n) * C64::new(shift_re, shift_im);
        let samples: Vec<C64> = (0..10_000)
            .map(|_| quadratic_form(&m, &sample::unit_vector(n, &mut r)))
            .collect();
        let d = hull_signed_distance(&samples);
        // Sampling under-covers W(M), so only clear cases are compared.
        prop_assume!(d.abs() >= 1e-3);
        let v = numrange_contains_zero(&m, &cfg()).unwrap();
        if d < 0.0 {
            prop_assert!(v.contains);
            let x = v.witness.expect("witness for interior zero");
            prop_assert!((x.norm() - 1.0).abs() < 1e-12);
            prop_assert!(quadratic_form(&m, &x).norm() <= 1e-9 * m.norm().max(1.0));
        } else {
            prop_assert!(!v.contains);
        }
    }
}
