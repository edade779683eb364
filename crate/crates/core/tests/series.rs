use hedgehog_core::{series_coefficients, ModelParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact coefficients from `m (m + 5) a_{m+2} = [-h + (1 + k) h^3 - k h^2]_m`.
fn exact_coefficients(a2: &BigRational, k: &BigRational, n: usize) -> Vec<BigRational> {
    let mut a = vec![BigRational::zero(); n + 1];
    a[2] = a2.clone();
    let one = q(1, 1);
    for next in 3..=n {
        let mm = next - 2;
        let conv = |x: &[BigRational], y: &[BigRational], j: usize| -> BigRational {
            (0..=j).fold(BigRational::zero(), |acc, i| acc + &x[i] * &y[j - i])
        };
        let sq: Vec<BigRational> = (0..=mm).map(|j| conv(&a, &a, j)).collect();
        let cube = conv(&a, &sq, mm);
        let g = -a[mm].clone() + (&one + k) * cube - k * &sq[mm];
        a[next] = g / q((mm * (mm + 5)) as i64, 1);
    }
    a
}

/// Temperatures with rational `h_+`: `9 + 8t` is a perfect square.
fn rational_cases() -> Vec<(f64, BigRational)> {
    // t = 2: h_+ = 2; t = 5: h_+ = 5/2; t = 27: h_+ = 9/2.  k = 3 h_+ / t.
    vec![(2.0, q(3, 1)), (5.0, q(3, 2)), (27.0, q(1, 2))]
}

#[test]
fn coefficients_match_exact_recurrence() {
    for (t, k) in rational_cases() {
        let m = ModelParams::new(t).unwrap();
        assert_eq!(3.0 * m.h_plus / t, k.to_f64().unwrap());
        for a2 in [q(1, 8), q(1, 3), q(7, 5)] {
            let exact = exact_coefficients(&a2, &k, 14);
            let s = series_coefficients(a2.to_f64().unwrap(), &m, 12);
            for (n, e) in exact.iter().enumerate() {
                let e = e.to_f64().unwrap();
                let got = s.coeffs[n];
                assert!(
                    (got - e).abs() <= 1e-14 * e.abs(),
                    "t = {t}, a2 = {a2}, n = {n}: {got} vs {e}"
                );
            }
        }
    }
}

#[test]
fn ratio_a4_over_a2_is_exactly_minus_one_fourteenth() {
    for (_, k) in rational_cases() {
        let a2 = q(3, 10);
        let exact = exact_coefficients(&a2, &k, 4);
        assert_eq!(&exact[4] / &exact[2], q(-1, 14));
    }
    for t in [1.5, 50.0, 200.0, 1000.0] {
        let m = ModelParams::new(t).unwrap();
        for a2 in [1e-4, 0.1323758875, 11.0] {
            let s = series_coefficients(a2, &m, 6);
            assert!((s.coeffs[4] / s.coeffs[2] + 1.0 / 14.0).abs() <= 1e-15);
        }
    }
}

#[test]
fn odd_coefficients_vanish_through_order_eleven() {
    for t in [2.0, 200.0] {
        let m = ModelParams::new(t).unwrap();
        let s = series_coefficients(0.13, &m, 12);
        for n in (1..=11).step_by(2) {
            assert_eq!(s.coeffs[n], 0.0, "a_{n} at t = {t}");
        }
        assert_eq!(s.coeffs[0], 0.0);
    }
    let exact = exact_coefficients(&q(13, 100), &q(3, 1), 12);
    for n in (1..=11).step_by(2) {
        assert!(exact[n].is_zero());
    }
}

#[test]
fn launch_state_example() {
    let m = ModelParams::new(200.0).unwrap();
    let s = series_coefficients(0.1, &m, 6);
    let l = s.launch_state(1e-3);
    let expect = 1e-7 * (1.0 - 1e-6 / 14.0);
    assert!((l.h - expect).abs() <= 1e-12 * expect);
    assert!(l.truncation < 1e-18 * l.h);
    assert!(!l.warn);
}
