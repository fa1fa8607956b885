use proptest::prelude::*;

use schurwalk::chains::{in_support, simulate};
use schurwalk::kernels::{RowOptions, SpectralFunction, TransitionKernel};
use schurwalk::quantum::{kappa_of, pn_entry, qn_row, TorusStep, Truncation};
use schurwalk::report::Report;
use schurwalk::scalar::{format_rational, int, parse_rational, rat};
use schurwalk::signature::dimension;
use schurwalk::symfunc::{lr_coeff, lr_product, schur_bialternant, schur_eval, weight_expansion, EvaluationPoint};
use schurwalk::{Permutation, Rational, Scalar, Signature, Weight};

fn signature(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Signature> {
    prop::collection::vec(lo..=hi, n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Signature::new(v).unwrap()
    })
}

fn sig_pair(lo: i64, hi: i64) -> impl Strategy<Value = (Signature, Signature)> {
    (1usize..=3).prop_flat_map(move |n| (signature(n, lo, hi), signature(n, lo, hi)))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=9).prop_map(|(a, b)| rat(a, b))
}

fn probability() -> impl Strategy<Value = Rational> {
    (1i64..=5).prop_map(|a| rat(a, 9))
}

fn named_family() -> impl Strategy<Value = SpectralFunction> {
    (0usize..4, probability()).prop_map(|(k, x)| match k {
        0 => SpectralFunction::beta_plus(x).unwrap(),
        1 => SpectralFunction::beta_minus(x).unwrap(),
        2 => SpectralFunction::alpha_plus(x).unwrap(),
        _ => SpectralFunction::alpha_minus(x).unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_text_round_trip(s in (1usize..=4).prop_flat_map(|n| signature(n, -9, 9))) {
        let back: Signature = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn rational_text_round_trip(a in -1000i64..1000, b in 1i64..1000) {
        let r = rat(a, b);
        let text = format_rational(&r);
        prop_assert_eq!(parse_rational(&text).unwrap(), r);
        prop_assert_eq!(format_rational(&parse_rational(&text).unwrap()), text);
    }

    #[test]
    fn spectral_text_round_trip(f in named_family(), g in named_family()) {
        let mut all = vec![f.clone()];
        // two-sided products are rejected at construction
        all.extend(SpectralFunction::product(vec![f, g]).ok());
        for h in all {
            let back: SpectralFunction = h.to_string().parse().unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(SpectralFunction::from_json(&h.to_json()).unwrap(), h);
        }
    }

    #[test]
    fn jacobi_trudi_matches_bialternant(
        s in (1usize..=3).prop_flat_map(|n| (signature(n, -3, 3), prop::collection::vec(small_rational(), n)))
    ) {
        let (l, coords) = s;
        if let Ok(theta) = EvaluationPoint::new(coords) {
            prop_assume!(!theta.has_repeats());
            prop_assert_eq!(schur_eval(&l, &theta).unwrap(), schur_bialternant(&l, &theta).unwrap());
        }
    }

    #[test]
    fn lr_symmetric_and_shift_covariant((l, m) in sig_pair(-2, 2), a in -3i64..3, b in -3i64..3) {
        let prod = lr_product(&l, &m).unwrap();
        prop_assert_eq!(&prod, &lr_product(&m, &l).unwrap());
        let total: Rational = prod.iter().map(|(t, c)| int(*c as i64) * dimension(t)).sum();
        prop_assert_eq!(total, dimension(&l) * dimension(&m));
        for (t, c) in &prod {
            prop_assert_eq!(lr_coeff(&l.shift(a), &m.shift(b), &t.shift(a + b)).unwrap(), *c);
        }
    }

    #[test]
    fn weights_are_symmetric(l in (1usize..=3).prop_flat_map(|n| signature(n, -2, 2)), seed in 0usize..6) {
        let e = weight_expansion(&l).unwrap();
        prop_assert_eq!(int(e.total() as i64), dimension(&l));
        let perms = Permutation::all(l.rank());
        let sigma = &perms[seed % perms.len()];
        for (w, m) in &e.terms {
            let moved = schurwalk::signature::weyl_act(sigma, w).unwrap();
            prop_assert_eq!(e.get(&moved), *m);
        }
    }

    #[test]
    fn rows_are_stochastic(f in named_family(), l in (1usize..=3).prop_flat_map(|n| signature(n, -3, 3))) {
        let k = TransitionKernel::at_ones(l.rank(), &f).unwrap();
        let row = k.row(&l, RowOptions::default()).unwrap();
        for (mu, v) in &row.entries {
            prop_assert!(v.signum() == std::cmp::Ordering::Greater);
            prop_assert!(in_support(&f, &l, mu).unwrap());
        }
        let gap = (row.total().to_f64() - 1.0).abs();
        if row.is_exact() {
            prop_assert_eq!(row.total(), Scalar::one());
        } else {
            prop_assert!(gap <= 1e-9);
        }
    }

    #[test]
    fn kernel_is_shift_invariant_at_ones(f in named_family(), (l, m) in sig_pair(-3, 3), c in -4i64..4) {
        let k = TransitionKernel::at_ones(l.rank(), &f).unwrap();
        prop_assert_eq!(k.entry(&l, &m).unwrap(), k.entry(&l.shift(c), &m.shift(c)).unwrap());
    }

    #[test]
    fn center_rows_are_stochastic(p in probability(), plus in any::<bool>(), l in (1usize..=3).prop_flat_map(|n| signature(n, -3, 3))) {
        let f = if plus { SpectralFunction::beta_plus(p) } else { SpectralFunction::beta_minus(p) }.unwrap();
        let kappa = kappa_of(&f, l.rank(), Truncation::default()).unwrap();
        let row = qn_row(&kappa, &l).unwrap();
        prop_assert_eq!(row.values().cloned().sum::<Scalar>(), Scalar::one());
        let step = TorusStep::of(&kappa);
        prop_assert_eq!(step.mass(), Scalar::one());
        prop_assert!(step.is_symmetric());
    }

    #[test]
    fn torus_kernel_translation_invariant(
        p in probability(),
        x in prop::collection::vec(-4i64..4, 2),
        d in prop::collection::vec(-1i64..=1, 2),
        z in prop::collection::vec(-6i64..6, 2),
    ) {
        let kappa = kappa_of(&SpectralFunction::beta_minus(p).unwrap(), 2, Truncation::default()).unwrap();
        let (x, y) = (Weight(x.clone()), Weight(x.iter().zip(&d).map(|(a, b)| a + b).collect()));
        let z = Weight(z);
        prop_assert_eq!(pn_entry(&kappa, &x, &y).unwrap(), pn_entry(&kappa, &x.add(&z), &y.add(&z)).unwrap());
    }

    #[test]
    fn simulation_is_reproducible(f in named_family(), seed in any::<u64>(), l in (1usize..=2).prop_flat_map(|n| signature(n, -2, 2))) {
        let a = simulate(&l, &f, 8, seed).unwrap();
        prop_assert_eq!(&a, &simulate(&l, &f, 8, seed).unwrap());
        prop_assert!(a.validate().unwrap());
    }

    #[test]
    fn report_json_round_trip(pass in any::<bool>(), err in small_rational(), n in 1usize..5) {
        let r = Report::new("qrw", pass)
            .with("max_abs_error", format_rational(&err))
            .with("n", n)
            .with("pairing", "inverted");
        let text = serde_json::to_string(&r.to_json()).unwrap();
        let back = Report::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.get("max_abs_error").unwrap().as_str().unwrap(), format_rational(&err));
    }
}
