use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::automata::builtin;

fn load(name: &str) -> SubstSystem {
    builtin_system(name).unwrap().system
}

fn lin(name: &str) -> LinearCA<Gf2> {
    builtin::<Gf2>(name).unwrap().linear().unwrap()
}

fn st(s: &SubstSystem, name: &str) -> State {
    s.parse_state(name).unwrap()
}

#[test]
fn builtins_load_with_expected_shifts() {
    assert_eq!(builtin_system("gamma").unwrap().init_shift, 0);
    assert_eq!(builtin_system("gamma_raw").unwrap().init_shift, 0);
    assert_eq!(builtin_system("omega").unwrap().init_shift, 1);
    assert_eq!(builtin_system("omega_raw").unwrap().init_shift, 1);
    assert!(builtin_system("nope").is_err());
}

#[test]
fn state_names_round_trip() {
    let g = load("gamma");
    for s in 0..32u64 {
        assert_eq!(g.parse_state(&g.state_name(s)).unwrap(), s);
    }
    assert_eq!(g.state_name(st(&g, "GDB")), "BDG");
    assert!(g.parse_state("X").is_err());
}

#[test]
fn depth_zero_is_the_init_row() {
    let g = load("gamma");
    let grid = g.expand(0);
    assert_eq!(grid.row(0).clone(), BTreeMap::from([(0, st(&g, "D"))]));
    assert_eq!(g.cell(0, 0, 0).unwrap(), st(&g, "D"));
    let o = load("omega");
    assert_eq!(o.cell(0, 0, 0).unwrap(), st(&o, "L"));
    assert_eq!(o.cell(1, 0, 0).unwrap(), st(&o, "K"));
    assert!(g.cell(0, 1, 0).is_err());
}

#[test]
fn displayed_gamma_images() {
    let g = load("gamma");
    // (top-left, top-right, bottom-left, bottom-right)
    for (s, imgs) in [
        ("G", ["G", "CF", "D", "C"]),
        ("BD", ["0", "0", "BD", "0"]),
        ("CF", ["BD", "0", "BDG", "CF"]),
        ("BDG", ["G", "CF", "B", "C"]),
    ] {
        let s = st(&g, s);
        let got = [g.apply(s, 0, 1), g.apply(s, 1, 1), g.apply(s, 0, 0), g.apply(s, 1, 0)];
        let want = imgs.map(|n| st(&g, n));
        assert_eq!(got, want, "{}", g.state_name(s));
    }
}

#[test]
fn gamma_depth_five_corner() {
    let g = load("gamma");
    let grid = g.expand(5);
    let at = |x, y| g.state_name(grid.get(x, y));
    assert_eq!(at(0, 0), "D");
    assert_eq!((at(0, 1), at(1, 1)), ("G".into(), "F".into()));
    assert_eq!((at(0, 2), at(1, 2), at(2, 2)), ("D".into(), "C".into(), "B".into()));
    for n in 1..32 {
        assert_eq!(at(n as i64, n), if n % 2 == 0 { "B" } else { "F" });
    }
    assert_eq!(g.expand(2).render(&g, 0, 3), " G CF BG  F\n D  C  B  .\n G  F  .  .\n D  .  .  .\n");
}

#[test]
fn cell_matches_expand() {
    for name in ["gamma", "omega"] {
        let s = load(name);
        for depth in 0..=8 {
            let grid = s.expand(depth);
            let side = 1i64 << depth;
            for y in 0..side as u64 {
                for x in -2 * side..2 * side {
                    assert_eq!(s.cell(x, y, depth).unwrap(), grid.get(x, y), "{name} d={depth} ({x},{y})");
                }
            }
        }
    }
}

#[test]
fn verify_depth_six() {
    for (name, ca) in [("gamma", "gamma"), ("omega", "gamma_inv"), ("gamma_raw", "gamma"), ("omega_raw", "gamma_inv")] {
        let r = load(name).verify_against_green(&lin(ca), 6).unwrap();
        assert!(r.ok(), "{name}: {r:?}");
        assert!(r.cells_compared >= 4096);
    }
}

#[test]
fn unshifted_omega_fails() {
    let o = load("omega").shifted(-1);
    assert!(!o.verify_against_green(&lin("gamma_inv"), 4).unwrap().ok());
}

#[test]
fn printed_omega_table_is_inconsistent() {
    let text = include_str!("../../tests/fixtures/omega_printed.json");
    let o = SubstSystem::from_json(text).unwrap().shifted(1);
    let r = o.verify_against_green(&lin("gamma_inv"), 6).unwrap();
    assert!(r.mismatches > 0);
    assert!(o.align_init(&lin("gamma_inv"), 4, 2).is_err());
}

#[test]
fn wrong_automaton_fails() {
    let r = load("gamma").verify_against_green(&lin("gamma_inv"), 3).unwrap();
    assert!(!r.ok());
    assert!(r.first_mismatch.is_some());
    assert!(load("gamma").verify_against_green(&lin("theta"), 3).is_err());
}

#[test]
fn gamma_graph() {
    let g = load("gamma");
    let tg = g.transition_graph();
    assert_eq!(tg.len_with_zero(), 11);
    let cyc = tg.cyclic_components();
    assert_eq!(cyc.len(), 2);
    let bd = st(&g, "BD");
    assert!(cyc.contains(&vec![bd]));
    let d = st(&g, "D");
    for s in tg.states() {
        assert_eq!(tg.reaches(s, d), s != bd, "{}", g.state_name(s));
    }
}

#[test]
fn one_letter_graph() {
    let doc = r#"{"letters":["X"],"quadrants":{"01":{"X":["X"]}},"init":[{"x":0,"state":["X"]}],"projection":[[["X"]]]}"#;
    let s = SubstSystem::from_json(doc).unwrap();
    let tg = s.transition_graph();
    assert_eq!(tg.components(), vec![vec![1]]);
    assert_eq!(tg.cyclic_components(), vec![vec![1]]);
    assert!(!check_assertion_i(&s, 8).holds);
}

#[test]
fn letter_equivalences() {
    assert_eq!(load("gamma_raw").equivalent_letters(), vec![vec!["A", "E", "H"], vec!["D", "I"]]);
    assert_eq!(load("omega_raw").equivalent_letters(), vec![vec!["A", "G"], vec!["B", "H"], vec!["F", "L"]]);
    assert!(load("gamma").equivalent_letters().is_empty());
}

fn mapping(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn reductions_are_homomorphisms() {
    let gmap = mapping(&[
        ("A", "0"), ("B", "B"), ("C", "C"), ("D", "D"), ("E", "0"),
        ("F", "F"), ("G", "G"), ("H", "0"), ("I", "D"),
    ]);
    assert!(load("gamma_raw").check_reduction(&load("gamma"), &gmap).unwrap());
    let omap = mapping(&[
        ("A", "K"), ("B", "H"), ("C", "IK"), ("D", "D"), ("E", "E"), ("F", "L"),
        ("G", "K"), ("H", "H"), ("I", "I"), ("J", "DH"), ("K", "K"), ("L", "L"),
    ]);
    assert!(load("omega_raw").check_reduction(&load("omega"), &omap).unwrap());
    let mut broken = omap.clone();
    broken.insert("J".into(), "D".into());
    assert!(!load("omega_raw").check_reduction(&load("omega"), &broken).unwrap());
}

#[test]
fn doc_round_trip() {
    for name in builtin_system_names() {
        let s = load(name);
        assert_eq!(SubstSystem::from_doc(&s.to_doc()).unwrap(), s);
    }
}

#[test]
fn malformed_docs() {
    let bad = [
        r#"{"letters":["X","X"],"quadrants":{},"init":[],"projection":[]}"#,
        r#"{"letters":["X"],"quadrants":{"02":{}},"init":[],"projection":[]}"#,
        r#"{"letters":["X"],"quadrants":{"00":{"Y":["X"]}},"init":[],"projection":[]}"#,
        r#"{"letters":["X"],"quadrants":{},"init":[],"projection":[[["X"],["X"]]]}"#,
    ];
    for b in bad {
        assert!(SubstSystem::from_json(b).is_err(), "{b}");
    }
}

#[test]
fn assertion_checks_small() {
    assert!(check_assertion_i(&load("gamma"), 64).holds);
    let r = check_assertion_ii(&load("gamma"), 10);
    assert!(r.holds, "{r:?}");
    let r = check_assertion_iii(&load("omega"), 8);
    assert!(r.holds, "{r:?}");
}

#[test]
fn assertions_reject_the_other_system() {
    assert!(!check_assertion_i(&load("omega"), 8).holds);
    assert!(!check_assertion_iii(&load("gamma"), 6).holds);
    let empty = SubstSystem::from_json(r#"{"letters":[],"quadrants":{},"init":[],"projection":[]}"#).unwrap();
    assert!(check_assertion_iii(&empty, 6).holds);
}

#[test]
fn covers() {
    let g = load("gamma");
    let good = cover::good_states(&g);
    assert_eq!(good.len(), 9);
    assert!(!good.contains(&st(&g, "BD")));
    let o = load("omega");
    assert_eq!(o.transition_graph().len(), 14);
    assert_eq!(cover::good_states(&o).len(), 12);
}

proptest! {
    #[test]
    fn quadrant_maps_are_linear(a in 0u64..64, b in 0u64..64, q in 0usize..4) {
        let o = load("omega");
        let (i, j) = (q >> 1, q & 1);
        prop_assert_eq!(o.apply(a ^ b, i, j), o.apply(a, i, j) ^ o.apply(b, i, j));
        prop_assert_eq!(o.project(a ^ b), &o.project(a) + &o.project(b));
    }
}

