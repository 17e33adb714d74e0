use std::path::PathBuf;

use endcalc::dsl::{echo, parse, FINITE_RANK_MESSAGE};
use endcalc::report::{emit_json, ReportOptions};
use endcalc_core::{classify, EndType, Multiplicity, Root, Subordinate, SurfaceSpec};
use proptest::prelude::*;

fn end_type(depth: u32) -> impl Strategy<Value = EndType> {
    let leaf = (any::<bool>(), any::<bool>()).prop_map(|(g, c)| EndType::new(g, c, vec![]));
    leaf.prop_recursive(depth, 24, 3, |inner| {
        (
            any::<bool>(),
            any::<bool>(),
            prop::collection::vec(inner, 0..=3),
        )
            .prop_map(|(g, c, kids)| EndType::new(g, c, kids))
    })
}

fn multiplicity() -> impl Strategy<Value = Multiplicity> {
    prop_oneof![
        (1u64..=3).prop_map(Multiplicity::Finite),
        Just(Multiplicity::Cantor),
    ]
}

fn spec() -> impl Strategy<Value = SurfaceSpec> {
    (
        prop::collection::vec((end_type(3), multiplicity()), 1..=3),
        prop::collection::vec((end_type(2), 1u64..=3), 0..=2),
        0u64..=3,
        0u64..=2,
    )
        .prop_map(|(roots, subs, punctures, genus)| SurfaceSpec {
            roots: roots
                .into_iter()
                .map(|(t, multiplicity)| Root {
                    end_type: t.canonicalize(),
                    multiplicity,
                })
                .collect(),
            subordinates: subs
                .into_iter()
                .map(|(t, count)| Subordinate {
                    end_type: t.canonicalize(),
                    count,
                })
                .collect(),
            extra_punctures: punctures,
            extra_genus: genus,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn echo_round_trips(s in spec()) {
        let text = echo(&s);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(echo(&back), text);
    }

    #[test]
    fn displayed_types_parse_back(t in end_type(3)) {
        let text = format!("root {t}\n");
        let s = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&s.roots[0].end_type, &t);
    }

    #[test]
    fn error_spans_lie_inside_the_input(text in "[a-z0-9()\\[\\],*+^ \n#=]{0,40}") {
        if let Err(e) = parse(&text) {
            prop_assert!(e.span.start <= e.span.end);
            prop_assert!(e.span.end <= text.len());
            prop_assert!(e.span.line >= 1 && e.span.column >= 1);
            prop_assert!(e.span.line <= text.lines().count().max(1) + 1);
        }
    }
}

#[test]
fn ordinals_agree_with_towers() {
    for k in 1..=4u32 {
        for n in 1..=3u64 {
            let text = if n == 1 {
                format!("root omega^{k} + 1")
            } else {
                format!("root omega^{k} * {n} + 1")
            };
            let s = parse(&text).unwrap();
            assert_eq!(s.roots.len(), 1, "{text}");
            assert_eq!(s.roots[0].end_type, EndType::planar_tower(k), "{text}");
            assert_eq!(s.roots[0].multiplicity, Multiplicity::Finite(n), "{text}");
            assert_eq!(s.extra_punctures, 0);

            let tower = parse(&format!("root {} * {n}", EndType::planar_tower(k))).unwrap();
            assert_eq!(tower, s, "{text}");
        }
    }
}

#[test]
fn non_literal_exponents_are_rejected() {
    for text in [
        "root omega^omega + 1",
        "root omega^0 + 1",
        "root omega^x * 2 + 1",
    ] {
        let e = parse(text).unwrap_err();
        assert_eq!(e.message, FINITE_RANK_MESSAGE, "{text}");
        assert_eq!(e.span.column, text.find('^').unwrap() + 2, "{text}");
    }
}

#[test]
fn json_is_stable_under_echo() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let opts = ReportOptions {
        witness: true,
        bounds: true,
    };
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|x| x != "surf") {
            continue;
        }
        let Ok(spec) = parse(&std::fs::read_to_string(&path).unwrap()) else {
            continue;
        };
        let first = emit_json(&classify(&spec).unwrap(), opts);
        let again = emit_json(&classify(&spec).unwrap(), opts);
        let echoed = emit_json(&classify(&parse(&echo(&spec)).unwrap()).unwrap(), opts);
        assert_eq!(first, again, "{}", path.display());
        assert_eq!(first, echoed, "{}", path.display());
    }
}
