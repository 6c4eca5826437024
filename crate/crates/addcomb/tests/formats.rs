use addcomb::format::{parse_function, parse_set, write_function, write_set, FunctionData};
use addcomb_core::spectral::{ComplexFunction, IntFunction};
use addcomb_core::{GroupSet, GroupSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn group() -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(2usize..12, 1..=3).prop_map(|f| GroupSpec::new(f).unwrap())
}

proptest! {
    #[test]
    fn sets_round_trip((g, bits) in group().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), prop::collection::vec(any::<bool>(), n))
    })) {
        let set = GroupSet::from_predicate(&g, |x| bits[x]);
        let text = write_set(&set);
        prop_assert_eq!(parse_set(&text).unwrap(), set);
    }

    #[test]
    fn integer_functions_round_trip((g, values) in group().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), prop::collection::vec(prop_oneof![Just(0i64), any::<i64>()], n))
    })) {
        let f = FunctionData::Int(IntFunction::new(&g, values).unwrap());
        prop_assert_eq!(parse_function(&write_function(&f)).unwrap(), f);
    }

    #[test]
    fn complex_functions_round_trip((g, values) in group().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), prop::collection::vec((any::<f64>(), any::<f64>()), n))
    })) {
        let values: Vec<Complex64> = values
            .into_iter()
            .map(|(re, im)| Complex64::new(if re.is_finite() { re } else { 0.5 }, if im.is_finite() { im } else { -0.25 }))
            .collect();
        prop_assume!(values.iter().any(|v| v.im != 0.0));
        let f = FunctionData::Complex(ComplexFunction::new(&g, values).unwrap());
        prop_assert_eq!(parse_function(&write_function(&f)).unwrap(), f);
    }
}
