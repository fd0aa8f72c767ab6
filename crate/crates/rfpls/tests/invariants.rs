//! Property tests for the numeric invariants that must hold for any
//! admissible input, not just the worked examples.

use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rfpls::basis::BSplineBasis;
use rfpls::metrics::auc;
use rfpls::robust::Standardizer;
use rfpls::wle::{weights_from_residuals, RafKind};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_of_unity_everywhere(
        n_basis in 4usize..20,
        frac in 0.0f64..1.0,
    ) {
        let basis = BSplineBasis::new((0.0, 10.0), n_basis, 4).unwrap();
        let t = 10.0 * frac;
        let row = basis.evaluate_point(t).unwrap();
        let sum: f64 = row.sum();
        prop_assert!((sum - 1.0).abs() < 1e-10);
        for &v in row.iter() {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn gram_quadratic_form_is_positive(
        coefs in proptest::collection::vec(-5.0f64..5.0, 13),
    ) {
        let c = Array1::from_vec(coefs);
        prop_assume!(c.iter().any(|&v| v.abs() > 1e-6));
        let basis = BSplineBasis::new((0.0, 10.0), 13, 4).unwrap();
        let psi = basis.gram_matrix_default().unwrap();
        let q = c.dot(&psi.psi().dot(&c));
        prop_assert!(q > 0.0);
    }

    #[test]
    fn weights_stay_in_unit_interval(
        deltas in proptest::collection::vec(-1.0f64..50.0, 1..40),
        kind_pick in 0u8..3,
    ) {
        let kind = match kind_pick {
            0 => RafKind::Hellinger,
            1 => RafKind::NegExponential,
            _ => RafKind::Identity,
        };
        let d = Array1::from_vec(deltas);
        let w = weights_from_residuals(d.view(), kind).unwrap();
        for (&di, &wi) in d.iter().zip(w.iter()) {
            prop_assert!((0.0..=1.0).contains(&wi));
            if di == 0.0 {
                prop_assert_eq!(wi, 1.0);
            }
        }
    }

    #[test]
    fn standardizers_round_trip(
        rows in proptest::collection::vec(
            proptest::collection::vec(-100.0f64..100.0, 4), 6..30),
    ) {
        let n = rows.len();
        let x = Array2::from_shape_vec((n, 4), rows.concat()).unwrap();
        // Skip degenerate columns.
        for j in 0..4 {
            let col = x.column(j);
            prop_assume!(col.iter().any(|&v| (v - col[0]).abs() > 1e-6));
        }
        for std in [
            Standardizer::classical(x.view()),
            Standardizer::robust(x.view(), 1e-10, 2000),
        ] {
            let Ok(std) = std else { return Ok(()) };
            let z = std.apply(x.view()).unwrap();
            let back = std.invert(z.view()).unwrap();
            for (a, b) in back.iter().zip(x.iter()) {
                prop_assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn auc_ignores_monotone_transforms(
        probs in proptest::collection::vec(0.01f64..0.99, 10..60),
        label_bits in proptest::collection::vec(any::<bool>(), 10..60),
    ) {
        let n = probs.len().min(label_bits.len());
        let y: Vec<u8> = label_bits[..n].iter().map(|&b| u8::from(b)).collect();
        prop_assume!(y.iter().any(|&v| v == 0) && y.iter().any(|&v| v == 1));
        let p = Array1::from_vec(probs[..n].to_vec());
        let base = auc(&y, p.view()).unwrap();
        let logit = p.mapv(|v: f64| (v / (1.0 - v)).ln());
        let scaled = p.mapv(|v: f64| 42.0 * v.exp());
        prop_assert_eq!(base, auc(&y, logit.view()).unwrap());
        prop_assert_eq!(base, auc(&y, scaled.view()).unwrap());
    }
}
