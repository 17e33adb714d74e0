use std::collections::BTreeMap;

use endcalc_core::flux::{
    classify_shift, normalizer, phi, swindle_check, theta_tilde, verify_normalization, CutPosition,
    EndPerm, MultiEndPerm, ShiftKind, ShiftSpec, Tail,
};
use endcalc_core::{equivalent, preceq, EndType, Predecessor};
use proptest::prelude::*;

fn tree() -> impl Strategy<Value = EndType> {
    let leaf = (any::<bool>(), any::<bool>()).prop_map(|(g, c)| EndType::new(g, c, vec![]));
    leaf.prop_recursive(3, 24, 4, |inner| {
        (
            any::<bool>(),
            any::<bool>(),
            prop::collection::vec(inner, 0..=4),
        )
            .prop_map(|(g, c, kids)| EndType::new(g, c, kids))
    })
}

fn end_perm() -> impl Strategy<Value = EndPerm> {
    (-3i64..=3, 0i64..=4)
        .prop_flat_map(|(d, r)| {
            let len = (2 * r + 1) as usize;
            (
                Just(d),
                Just(r),
                Just((0..len).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(d, r, perm)| {
            let table: BTreeMap<i64, i64> = perm
                .into_iter()
                .enumerate()
                .map(|(i, j)| (i as i64 - r, j as i64 - r + d))
                .collect();
            EndPerm::new(d, r, table).unwrap()
        })
}

fn multi_word(n: usize) -> impl Strategy<Value = MultiEndPerm> {
    prop::collection::vec((0..n, 0..n, any::<bool>()), 0..8).prop_map(move |steps| {
        let mut f = MultiEndPerm::identity(n);
        for (a, b, twist) in steps {
            if a == b {
                continue;
            }
            let g = if twist {
                MultiEndPerm::swap(n, a, b)
            } else {
                MultiEndPerm::shift(n, a, b)
            };
            f = f.compose(&g);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonicalize_is_idempotent(t in tree()) {
        let c = t.canonicalize();
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert!(equivalent(&t, &c));
        prop_assert!(preceq(&t, &c) && preceq(&c, &t));
    }

    #[test]
    fn preorder_laws(a in tree(), b in tree(), c in tree()) {
        prop_assert!(preceq(&a, &a));
        if preceq(&a, &b) && preceq(&b, &c) {
            prop_assert!(preceq(&a, &c));
        }
        prop_assert_eq!(equivalent(&a, &b), preceq(&a, &b) && preceq(&b, &a));
    }

    #[test]
    fn genus_is_monotone(y in tree(), x in tree()) {
        if preceq(&y, &x) && y.canonicalize().in_eg() {
            prop_assert!(x.canonicalize().in_eg());
        }
    }

    #[test]
    fn immediate_predecessors_form_an_antichain(x in tree()) {
        let x = x.canonicalize();
        let below = x.below();
        let ends: Vec<EndType> = x
            .immediate_predecessors()
            .into_iter()
            .filter_map(|p| match p {
                Predecessor::End(t) => Some(t),
                Predecessor::Handle => None,
            })
            .collect();
        for a in &ends {
            prop_assert!(below.contains(a));
            prop_assert!(!equivalent(a, &x));
            for b in &ends {
                if a != b {
                    prop_assert!(!preceq(a, b));
                }
            }
        }
    }

    #[test]
    fn phi_is_a_homomorphism(f in end_perm(), g in end_perm(), c in -8i64..=8) {
        let cut = CutPosition(c);
        prop_assert_eq!(phi(&f.compose(&g), cut), phi(&f, cut) + phi(&g, cut));
        prop_assert_eq!(phi(&f.invert(), cut), -phi(&f, cut));
        prop_assert_eq!(phi(&f, cut), f.d());
        let conj = g.compose(&f).compose(&g.invert());
        prop_assert_eq!(phi(&conj, cut), phi(&f, cut));
    }

    #[test]
    fn compose_is_pointwise(f in end_perm(), g in end_perm(), i in -20i64..=20) {
        prop_assert_eq!(f.compose(&g).apply(i), f.apply(g.apply(i)));
        prop_assert_eq!(f.invert().apply(f.apply(i)), i);
    }

    #[test]
    fn finite_shifts_normalize(set in prop::collection::btree_set(-30i64..=30, 1..8)) {
        let s = ShiftSpec::finite(set);
        prop_assert_eq!(classify_shift(&s), ShiftKind::Permissible);
        let t = normalizer(&s).unwrap();
        prop_assert!(verify_normalization(&s, &t, 200));
    }

    #[test]
    fn periodic_shifts_normalize(
        n in -5i64..=20,
        p in 2i64..=6,
        mask in 1u32..63,
        tail in prop_oneof![Just(Tail::Upper), Just(Tail::Lower), Just(Tail::Both)],
    ) {
        let residues: Vec<i64> = (0..p).filter(|r| mask & (1 << r) != 0).collect();
        prop_assume!(!residues.is_empty() && (residues.len() as i64) < p);
        let s = ShiftSpec::periodic(n, p, residues, tail).unwrap();
        prop_assert_eq!(classify_shift(&s), ShiftKind::Spontaneous);
        let t = normalizer(&s).unwrap();
        prop_assert!(verify_normalization(&s, &t, 200));
    }

    #[test]
    fn multi_compose_and_invert(f in multi_word(4), g in multi_word(4), r in 0usize..4, k in 0u64..12) {
        let (t, m) = g.apply(r, k);
        prop_assert_eq!(f.compose(&g).apply(r, k), f.apply(t, m));
        prop_assert_eq!(f.compose(&f.invert()), MultiEndPerm::identity(4));
        prop_assert!(MultiEndPerm::new(f.rho().to_vec(), f.rays().to_vec()).is_ok());
    }

    #[test]
    fn theta_tilde_two_rays_is_a_homomorphism(f in multi_word(2), g in multi_word(2)) {
        let twists = [(0, 1)];
        let a = theta_tilde(&f, &twists).unwrap();
        let b = theta_tilde(&g, &twists).unwrap();
        let ab = theta_tilde(&f.compose(&g), &twists).unwrap();
        prop_assert_eq!(ab, ((a.0 + b.0) % 2, (a.1 + b.1) % 2));
    }
}

#[test]
fn swindle_small_supports() {
    for k in 1..=2 {
        let pts: Vec<i64> = (-k..=k).collect();
        for a in &pts {
            for b in &pts {
                let f = EndPerm::transposition(*a, *b);
                assert_eq!(swindle_check(&f, k, 60), Ok(true), "{f} k={k}");
            }
        }
    }
}
