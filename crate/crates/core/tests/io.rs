use hedgehog_core::io::{fmt_f64, profile_csv, to_json};
use hedgehog_core::{solve_semi_infinite, ModelParams, SolverOptions};
use proptest::prelude::*;

proptest! {
    #[test]
    fn floats_round_trip_through_text(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let s = fmt_f64(v);
        prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        let mantissa = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
        prop_assert_eq!(mantissa.len(), 17);
        let j = to_json(&v).unwrap();
        prop_assert_eq!(j.trim_end().parse::<f64>().unwrap().to_bits(), v.to_bits());
    }
}

#[test]
fn non_finite_values() {
    assert_eq!(fmt_f64(f64::NAN), "NaN");
    assert_eq!(fmt_f64(f64::INFINITY), "inf");
    assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
    assert_eq!(to_json(&[1.0, f64::NAN]).unwrap(), "[\n  1.0000000000000000e0,\n  null\n]\n");
}

#[test]
fn repeated_solves_serialize_identically() {
    let m = ModelParams::new(200.0).unwrap();
    let opts = SolverOptions::default();
    let a = solve_semi_infinite(&m, 20.0, &opts).unwrap();
    let b = solve_semi_infinite(&m, 20.0, &opts).unwrap();
    let comments = vec!["run".to_string()];
    let (ca, cb) = (profile_csv(&a, &comments), profile_csv(&b, &comments));
    assert_eq!(ca, cb);
    assert_eq!(to_json(&a).unwrap(), to_json(&b).unwrap());
    let mut lines = ca.lines();
    assert_eq!(lines.next(), Some("# run"));
    assert_eq!(lines.next(), Some("r,h,dh"));
    assert_eq!(lines.next(), Some("0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0"));
    assert_eq!(ca.lines().count(), a.len() + 2);
    assert!(!ca.contains(';'));
}
