use addcomb_core::equation::{
    brute_force_count, count_solutions, count_trivial, has_nontrivial, Equation, FreenessChecker,
};
use addcomb_core::increment::{increment_step_ff, recount, FfParams};
use addcomb_core::spectral::{
    convolve_with, dft, idft, ComplexFunction, ConvolutionMethod, IntFunction,
};
use addcomb_core::structure::longest_ap;
use addcomb_core::{GroupSet, GroupSpec, Ratio};
use num_complex::Complex64;
use proptest::prelude::*;

fn group() -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(2usize..9, 1..=3).prop_map(|f| GroupSpec::new(f).unwrap())
}

fn int_pair() -> impl Strategy<Value = (GroupSpec, Vec<i64>, Vec<i64>)> {
    group().prop_flat_map(|g| {
        let n = g.order();
        (
            Just(g),
            prop::collection::vec(-1000i64..=1000, n),
            prop::collection::vec(-1000i64..=1000, n),
        )
    })
}

fn subset(g: GroupSpec) -> impl Strategy<Value = GroupSet> {
    let n = g.order();
    prop::collection::vec(any::<bool>(), n)
        .prop_map(move |bits| GroupSet::from_predicate(&g, |x| bits[x]))
}

fn free_set(g: GroupSpec) -> impl Strategy<Value = GroupSet> {
    prop::collection::vec(0..g.order(), 0..40).prop_map(move |order| {
        let eq = Equation::x_plus_y_plus_z_3w();
        let mut s = GroupSet::empty(&g);
        for x in order {
            if s.contains(x) {
                continue;
            }
            s.insert(x);
            if has_nontrivial(&eq, &s).unwrap() {
                s.remove(x);
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_matches_direct((g, f, h) in int_pair()) {
        let f = IntFunction::new(&g, f).unwrap();
        let h = IntFunction::new(&g, h).unwrap();
        let direct = convolve_with(&f, &h, ConvolutionMethod::Direct).unwrap();
        prop_assert_eq!(&convolve_with(&f, &h, ConvolutionMethod::Transform).unwrap(), &direct);
        prop_assert_eq!(&convolve_with(&h, &f, ConvolutionMethod::Auto).unwrap(), &direct);
    }

    #[test]
    fn inverse_transform_round_trips((g, re, im) in int_pair()) {
        let values: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a as f64, b as f64)).collect();
        let f = ComplexFunction::new(&g, values.clone()).unwrap();
        let back = idft(&dft(&f));
        for (x, y) in back.values().iter().zip(&values) {
            prop_assert!((x - y).norm() <= 1e-9 * 1000.0 * g.order() as f64);
        }
    }

    #[test]
    fn fast_count_matches_brute_force(
        s in (5usize..14).prop_flat_map(|n| subset(GroupSpec::cyclic(n).unwrap())),
        c in prop::collection::vec(-3i64..=3, 2),
    ) {
        let mut coeffs = c.clone();
        coeffs.push(1);
        coeffs.push(-(c.iter().sum::<i64>() + 1));
        prop_assume!(coeffs.iter().all(|&x| x != 0));
        let eq = Equation::new(coeffs).unwrap();
        let brute = brute_force_count(&eq, &s).unwrap();
        prop_assert_eq!(count_solutions(&eq, &s).unwrap(), brute.total);
        prop_assert_eq!(count_trivial(&eq, &s).unwrap(), brute.trivial);
    }

    #[test]
    fn checker_agrees_with_full_test(
        (s, e) in (5usize..30).prop_flat_map(|n| {
            let g = GroupSpec::cyclic(n).unwrap();
            (free_set(g), 0..n)
        }),
    ) {
        let eq = Equation::x_plus_y_plus_z_3w();
        prop_assume!(!s.contains(e));
        let chk = FreenessChecker::new(&eq, &s);
        let mut bigger = s.clone();
        bigger.insert(e);
        prop_assert_eq!(chk.creates_nontrivial(s.group(), e), has_nontrivial(&eq, &bigger).unwrap());
    }

    #[test]
    fn longest_ap_is_monotone(
        (s, x) in prop::sample::select(vec![5usize, 7, 11, 13, 17, 19, 23, 29, 31, 37])
            .prop_flat_map(|n| (subset(GroupSpec::cyclic(n).unwrap()), 0..n)),
    ) {
        let mut bigger = s.clone();
        bigger.insert(x);
        let small = longest_ap(&s).unwrap();
        let large = longest_ap(&bigger).unwrap();
        prop_assert!(small.length <= large.length);
        prop_assert!(small.is_contained_in(&s));
    }

    #[test]
    fn finite_field_steps_recount(s in free_set(GroupSpec::vector_space(3, 3).unwrap())) {
        prop_assume!(!s.is_empty());
        let target = Ratio::new(5, 4);
        if let Ok(step) = increment_step_ff(&s, target, &FfParams::default()) {
            prop_assert_eq!(recount(&s, &step.members, step.translate).unwrap(), step.new_density);
            prop_assert!(step.new_density >= target * s.density());
        }
    }
}
