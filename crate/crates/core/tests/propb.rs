use cellgreen::automata::{builtin, AutomatonDef, LinearCA};
use cellgreen::green::{green_row, DEFAULT_ORACLE_BUDGET};
use cellgreen::propb::{check_b, check_b_linear, compose_b, max_margins, word_coverage, BSpec, Margins};
use cellgreen::{Error, Gf2};
use proptest::prelude::*;

fn def(name: &str) -> AutomatonDef<Gf2> {
    builtin::<Gf2>(name).unwrap()
}

fn lin(name: &str) -> LinearCA<Gf2> {
    def(name).linear().unwrap()
}

fn holds(name: &str, s: BSpec) -> bool {
    check_b(&def(name), &s, DEFAULT_ORACLE_BUDGET).unwrap()
}

#[test]
fn xor_specs() {
    for l in [0, 1, 10, 1000, 1 << 30] {
        assert!(holds("xor", BSpec::new(0, 1, l, 0)));
    }
    assert!(!holds("xor", BSpec::new(0, 1, 0, 1)));
    assert!(holds("xor", BSpec::new(0, 2, 1, 1)));
    assert!(!holds("xor", BSpec::new(0, 2, 1, 2)));
    assert!(!holds("xor", BSpec::new(1, 2, 0, 0)));
    assert_eq!(max_margins(&green_row(&lin("xor"), 2), 0), Some(Margins { l: None, r: Some(1) }));
    assert_eq!(max_margins(&green_row(&lin("xor"), 2), 1), None);
}

#[test]
fn identity_holds_everywhere() {
    for y in 0..6 {
        for (l, r) in [(0, 0), (3, 0), (0, 7), (50, 50)] {
            assert!(holds("identity(2)", BSpec::new(0, y, l, r)));
        }
        assert!(!holds("identity(2)", BSpec::new(1, y, 0, 0)));
    }
}

#[test]
fn general_path_on_xor_table() {
    let t = AutomatonDef::<Gf2>::General(lin("xor").to_table(DEFAULT_ORACLE_BUDGET).unwrap());
    for y in 0..5 {
        for x in 0..=y as i64 {
            for (l, r) in [(0, 0), (1, 1), (2, 0), (0, 2)] {
                let s = BSpec::new(x, y, l, r);
                assert_eq!(check_b(&t, &s, DEFAULT_ORACLE_BUDGET).unwrap(), holds("xor", s), "{s:?}");
            }
        }
    }
}

#[test]
fn composition_examples() {
    let id = lin("identity(1)");
    assert_eq!(compose_b(&id, &BSpec::new(0, 1, 5, 5), &BSpec::new(0, 1, 5, 5)), Some(BSpec::new(0, 2, 5, 5)));
    let xor = lin("xor");
    let s1 = BSpec::new(0, 2, 4, 1);
    let s2 = BSpec::new(0, 1, 1, 0);
    assert!(check_b_linear(&xor, &s1) && check_b_linear(&xor, &s2));
    let c = compose_b(&xor, &s1, &s2).unwrap();
    assert_eq!(c, BSpec::new(0, 3, 1, 0));
    assert!(check_b_linear(&xor, &c));
    // [-1, 0] + {-1, 0} = [-2, 0] is not inside [-1, 1].
    assert_eq!(compose_b(&xor, &BSpec::new(0, 2, 1, 1), &s2), None);
}

#[test]
fn composition_on_gamma() {
    let g = lin("gamma");
    let specs = |y: u64| -> Vec<BSpec> {
        let row = green_row(&g, y);
        row.cells()
            .filter_map(|(x, _)| max_margins(&row, x).map(|m| (x, m)))
            .flat_map(|(x, m)| {
                let l = m.l.unwrap_or(8).min(8);
                let r = m.r.unwrap_or(8).min(8);
                [BSpec::new(x, y, l, r), BSpec::new(x, y, l / 2, r / 2)]
            })
            .collect()
    };
    let mut composed = 0;
    for s1 in specs(4) {
        for s2 in specs(2) {
            if let Some(c) = compose_b(&g, &s1, &s2) {
                assert!(check_b_linear(&g, &c), "{s1:?} ∘ {s2:?} = {c:?}");
                composed += 1;
            }
        }
    }
    assert!(composed > 0);
}

#[test]
fn word_coverage_examples() {
    assert!(word_coverage(&lin("xor"), &BSpec::new(0, 2, 1, 1), 50, 1 << 16, 1).unwrap());
    assert!(word_coverage(&lin("identity(1)"), &BSpec::new(0, 1, 0, 0), 50, 1 << 16, 1).unwrap());
    // Θ first isolates a bijective cell at y = 4; at y = 2 every margin is zero.
    let t = lin("theta");
    let y2 = green_row(&t, 2);
    assert!(y2.cells().all(|(x, _)| max_margins(&y2, x).is_none_or(|m| m == Margins { l: Some(0), r: Some(0) })));
    let s = BSpec::new(0, 4, 1, 1);
    assert!(check_b_linear(&t, &s));
    assert!(word_coverage(&t, &s, 50, 1 << 16, 1).unwrap());
    assert!(matches!(word_coverage(&lin("xor"), &BSpec::new(1, 2, 0, 0), 5, 16, 1), Err(Error::Precondition(_))));
}

#[test]
fn and_accepts_no_isolated_spec() {
    let and = def("and");
    for y in 1..=4u64 {
        for x in -(y as i64) - 2..=y as i64 + 2 {
            for (l, r) in [(1, 0), (0, 1), (1, 1), (3, 3)] {
                assert!(!check_b(&and, &BSpec::new(x, y, l, r), DEFAULT_ORACLE_BUDGET).unwrap());
            }
        }
    }
    assert!(matches!(check_b(&and, &BSpec::new(0, 40, 1, 0), 1 << 12), Err(Error::Budget { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn margins_are_monotone(
        name in prop::sample::select(vec!["xor", "theta", "gamma", "gamma_inv"]),
        y in 0u64..40, x in -40i64..40, l in 0u64..20, r in 0u64..20, dl in 0u64..20, dr in 0u64..20,
    ) {
        let f = lin(name);
        if check_b_linear(&f, &BSpec::new(x, y, l, r)) {
            prop_assert!(check_b_linear(&f, &BSpec::new(x, y, l.saturating_sub(dl), r.saturating_sub(dr))));
        }
        if !check_b_linear(&f, &BSpec::new(x, y, l, r)) {
            prop_assert!(!check_b_linear(&f, &BSpec::new(x, y, l + dl, r + dr)));
        }
    }

    #[test]
    fn accepted_specs_cover_words(
        name in prop::sample::select(vec!["xor", "theta", "gamma"]),
        y in 1u64..6, x in -6i64..6, l in 0u64..3, r in 0u64..3,
    ) {
        let f = lin(name);
        let s = BSpec::new(x, y, l, r);
        if check_b_linear(&f, &s) {
            prop_assert!(word_coverage(&f, &s, 64, 1 << 12, 9).unwrap());
        }
    }
}
