use num_bigint::BigInt;
use num_traits::{One, Zero};
use perfectchain::eigen;
use perfectchain::exact::{binomial, int, rational, BigRational};
use perfectchain::inverse::*;
use perfectchain::jacobi::{build_theorem1, is_persymmetric};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn random_spectrum(rng: &mut StdRng, n: usize) -> Vec<f64> {
    let mut x = rng.gen_range(-5.0..5.0);
    (0..n)
        .map(|_| {
            let v = x;
            x += rng.gen_range(0.1..2.0);
            v
        })
        .collect()
}

fn max_rel_entry_error(
    a: &perfectchain::jacobi::JacobiMatrix,
    b: &perfectchain::jacobi::JacobiMatrix,
) -> f64 {
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
    let d = a.diag().iter().zip(b.diag()).map(|(x, y)| rel(*x, *y));
    d.chain(
        a.offdiag()
            .iter()
            .zip(b.offdiag())
            .map(|(x, y)| rel(*x, *y)),
    )
    .fold(0.0, f64::max)
}

#[test]
fn exact_round_trip_to_20() {
    for n in 1..=20 {
        let rec = deboor_golub_exact(
            &square_integer_spectrum_exact(n),
            &square_integer_weights(n).unwrap(),
        )
        .unwrap();
        assert_eq!(
            &rec.matrix,
            build_theorem1(n).unwrap().exact().unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn float_round_trip_to_60() {
    for n in 1..=60 {
        let spec = square_integer_spectrum(n);
        let m = deboor_golub(&spec, &persymmetric_weights(&spec).unwrap()).unwrap();
        let err = max_rel_entry_error(&m, &build_theorem1(n).unwrap());
        assert!(err <= 1e-9, "n={n}: {err:e}");
    }
}

#[test]
fn generic_spectra_round_trip() {
    let mut rng = StdRng::seed_from_u64(24);
    for case in 0..50 {
        let n = rng.gen_range(1..=24);
        let spec = random_spectrum(&mut rng, n);
        let m = deboor_golub(&spec, &persymmetric_weights(&spec).unwrap()).unwrap();
        let ev = eigen::eigenvalues(&m, 1e-14).unwrap();
        let scale = spec.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        for (a, b) in ev.iter().zip(&spec) {
            assert!(
                (a - b).abs() <= 1e-8 * scale,
                "case {case} n={n}: {a} vs {b}"
            );
        }
        assert!(is_persymmetric(&m, 1e-8 * m.norm_inf()), "case {case}");
    }
}

#[test]
fn binomial_weights_match_product_weights() {
    for n in 1..=21 {
        let spec = square_integer_spectrum_exact(n);
        let product = persymmetric_weights_exact(&spec).unwrap();
        let binom = square_integer_weights(n).unwrap();
        let ratio = &product.as_slice()[0] / &binom.as_slice()[0];
        for (p, b) in product.as_slice().iter().zip(binom.as_slice()) {
            assert_eq!(p, &(b * &ratio), "n={n}");
        }
        assert_eq!(binom.sum(), rational(1, 2), "n={n}");
    }
}

#[test]
fn moments_match_weighted_sums() {
    for m in 0..=20u64 {
        let moments = characteristic_moments(m as usize, 12);
        assert_eq!(moments.len(), 7);
        let four_m = BigRational::from_integer(BigInt::one() << (2 * m));
        for (l, got) in moments.iter().enumerate() {
            let brute = (-(m as i64)..=m as i64).fold(BigRational::zero(), |acc, k| {
                let w = BigRational::from_integer(binomial(2 * m, m as i64 + k)) / &four_m;
                acc + w * int(k).pow(2 * l as i32)
            });
            assert_eq!(got, &brute, "m={m} l={l}");
        }
    }
}

#[test]
fn moments_give_first_entries() {
    for n in 1..=40usize {
        let mom = characteristic_moments(n - 1, 4);
        let a1 = int(2) * &mom[1];
        let b1 = int(4) * (&mom[2] - &mom[1] * &mom[1]);
        let nn = n as i64;
        assert_eq!(a1, int(nn - 1), "n={n}");
        assert_eq!(b1, int((nn - 1) * (2 * nn - 3)), "n={n}");
    }
}

#[test]
fn analytic_entries_match_algorithm() {
    for n in 2..=40 {
        let rec = deboor_golub_exact(
            &square_integer_spectrum_exact(n),
            &square_integer_weights(n).unwrap(),
        )
        .unwrap();
        let e = analytic_first_entries(n).unwrap();
        let big = |v: &BigInt| BigRational::from_integer(v.clone());
        assert_eq!(rec.matrix.diag[0], big(&e.a1), "n={n}");
        assert_eq!(rec.matrix.offdiag_sq[0], big(&e.b1_sq), "n={n}");
        assert_eq!(rec.matrix.diag[1], big(&e.a2), "n={n}");
        assert_eq!(rec.s[1], big(&e.b1_sq), "n={n}");
        assert_eq!(rec.t[1], big(&e.t1), "n={n}");
    }
}

#[test]
fn stepwise_state_matches_batch() {
    let n = 9;
    let spec = square_integer_spectrum_exact(n);
    let w = square_integer_weights(n).unwrap();
    let mut state = DbgState::new(&spec, &w).unwrap();
    let mut steps = 0;
    while state.advance().unwrap() {
        steps += 1;
        assert_eq!(state.diag().len(), state.offdiag_sq().len() + 1);
    }
    assert!(state.is_complete());
    assert_eq!(steps, n - 1);
    assert_eq!(
        state.diag(),
        &build_theorem1(n).unwrap().exact().unwrap().diag[..]
    );
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(persymmetric_weights(&[0.0, 2.0, 2.0]).is_err());
    assert!(deboor_golub(&[0.0, 1.0], &WeightVector::new(vec![1.0]).unwrap()).is_err());
    assert!(WeightVector::new(vec![1.0, -1.0]).is_err());
    assert!(square_integer_weights(0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weight_scale_does_not_matter_exact(n in 1usize..10, num in 1i64..50, den in 1i64..50) {
        let spec = square_integer_spectrum_exact(n);
        let w = square_integer_weights(n).unwrap();
        let base = deboor_golub_exact(&spec, &w).unwrap().matrix;
        let scaled = deboor_golub_exact(&spec, &w.scaled(rational(num, den)).unwrap()).unwrap().matrix;
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn weight_scale_does_not_matter_float(seed in any::<u64>(), n in 1usize..16, c in 1e-3f64..1e3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let spec = random_spectrum(&mut rng, n);
        let w = persymmetric_weights(&spec).unwrap();
        let a = deboor_golub(&spec, &w).unwrap();
        let b = deboor_golub(&spec, &w.scaled(c).unwrap()).unwrap();
        prop_assert!(max_rel_entry_error(&a, &b) <= 1e-12);
    }

    #[test]
    fn exact_generic_round_trip_is_persymmetric(raw in proptest::collection::btree_set(-40i64..40, 1..8)) {
        let spec: Vec<BigRational> = raw.iter().map(|&x| rational(x, 3)).collect();
        let rec = deboor_golub_exact(&spec, &persymmetric_weights_exact(&spec).unwrap()).unwrap();
        let m = &rec.matrix;
        let n = m.diag.len();
        for i in 0..n {
            prop_assert_eq!(&m.diag[i], &m.diag[n - 1 - i]);
        }
        for i in 0..n.saturating_sub(1) {
            prop_assert_eq!(&m.offdiag_sq[i], &m.offdiag_sq[n - 2 - i]);
        }
        let trace = spec.iter().fold(BigRational::zero(), |a, x| a + x);
        prop_assert_eq!(m.trace(), trace);
    }
}
