use endcalc::suites::check_witness;
use endcalc_core::{classify, EndType, Multiplicity, Root, Surface, SurfaceSpec, Verdict};
use proptest::prelude::*;

fn end_type() -> impl Strategy<Value = EndType> {
    let leaf = (any::<bool>(), any::<bool>()).prop_map(|(g, c)| EndType::new(g, c, vec![]));
    leaf.prop_recursive(3, 24, 3, |inner| {
        (
            any::<bool>(),
            any::<bool>(),
            prop::collection::vec(inner, 0..=3),
        )
            .prop_map(|(g, c, kids)| EndType::new(g, c, kids))
    })
}

fn spec() -> impl Strategy<Value = SurfaceSpec> {
    let mult = prop_oneof![
        (1u64..=3).prop_map(Multiplicity::Finite),
        Just(Multiplicity::Cantor)
    ];
    (
        prop::collection::vec((end_type(), mult), 1..=3),
        0u64..=2,
        0u64..=1,
    )
        .prop_map(|(roots, punctures, genus)| SurfaceSpec {
            roots: roots
                .into_iter()
                .map(|(end_type, multiplicity)| Root {
                    end_type,
                    multiplicity,
                })
                .collect(),
            subordinates: vec![],
            extra_punctures: punctures,
            extra_genus: genus,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn no_verdicts_carry_sound_witnesses(s in spec()) {
        let Ok(report) = classify(&s) else { return Ok(()) };
        prop_assert!(report.bounds.lower <= report.bounds.upper);
        if report.tng.verdict == Verdict::No {
            let w = report.tng.witness.as_ref().expect("NO carries a witness");
            let surface = Surface::new(&s).unwrap();
            let checked = check_witness(&surface, w, 50, 0);
            prop_assert!(checked.is_ok(), "{:?}", checked);
        } else {
            prop_assert!(report.tng.witness.is_none());
        }
    }

    #[test]
    fn classification_ignores_root_order(s in spec()) {
        let mut reversed = s.clone();
        reversed.roots.reverse();
        match (classify(&s), classify(&reversed)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.tng.verdict, b.tng.verdict);
                prop_assert_eq!(a.invariants, b.invariants);
                prop_assert_eq!(a.bounds, b.bounds);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "validity depends on root order"),
        }
    }
}
