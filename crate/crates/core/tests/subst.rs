use cellgreen::automata::{builtin, LinearCA};
use cellgreen::obstruct::GeomFeature;
use cellgreen::propb::{check_b_linear, BSpec};
use cellgreen::subst::{
    builtin_system, builtin_system_names, check_assertion_i, check_assertion_ii, check_assertion_iii,
    direct_triangle_check, SubstSystem,
};
use cellgreen::Gf2;
use num_rational::Ratio;

fn load(name: &str) -> SubstSystem {
    builtin_system(name).unwrap().system
}

fn lin(name: &str) -> LinearCA<Gf2> {
    builtin::<Gf2>(name).unwrap().linear().unwrap()
}

fn name_at(s: &SubstSystem, x: i64, y: u64, depth: u32) -> String {
    s.state_name(s.cell(x, y, depth).unwrap())
}

/// Images as (top-left, top-right, bottom-left, bottom-right).
fn images(s: &SubstSystem, state: &str) -> [String; 4] {
    let st = s.parse_state(state).unwrap();
    [(0, 1), (1, 1), (0, 0), (1, 0)].map(|(i, j)| s.state_name(s.apply(st, i, j)))
}

const ONE_LETTER: &str = r#"{"letters":["X"],"quadrants":{"00":{"X":["X"]},"01":{"X":[]},"10":{"X":[]},"11":{"X":[]}},
    "init":[{"x":0,"state":["X"]}],"projection":[[["X"]]]}"#;

#[test]
fn builtin_tables_load() {
    assert_eq!(builtin_system_names(), vec!["gamma", "gamma_raw", "omega", "omega_raw"]);
    let g = builtin_system("gamma").unwrap();
    assert_eq!((g.automaton, g.init_shift), ("gamma", 0));
    let o = builtin_system("omega").unwrap();
    assert_eq!((o.automaton, o.init_shift), ("gamma_inv", 1));
    assert!(builtin_system("theta").is_err());
}

#[test]
fn gamma_expansion() {
    let g = load("gamma");
    let grid = g.expand(0);
    assert_eq!(grid.height(), 1);
    assert_eq!(grid.row(0).iter().map(|(&x, &s)| (x, g.state_name(s))).collect::<Vec<_>>(), vec![(0, "D".to_string())]);
    assert_eq!(images(&g, "G"), ["G", "CF", "D", "C"]);
    assert_eq!(images(&g, "BD"), ["0", "0", "BD", "0"]);
    assert_eq!(images(&g, "CF"), ["BD", "0", "BDG", "CF"]);
    assert_eq!(images(&g, "BDG"), ["G", "CF", "B", "C"]);
    // Corner of the fifth step.
    assert_eq!(name_at(&g, 0, 0, 5), "D");
    assert_eq!([name_at(&g, 0, 1, 5), name_at(&g, 1, 1, 5)], ["G", "F"]);
    assert_eq!([0, 1, 2].map(|x| name_at(&g, x, 2, 5)), ["D", "C", "B"]);
    assert_eq!(g.expand(5).height(), 32);
}

#[test]
fn gamma_axis_and_diagonal() {
    let g = load("gamma");
    for n in 0..64u64 {
        assert_eq!(name_at(&g, 0, n, 6), if n % 2 == 0 { "D" } else { "G" }, "(0,{n})");
        if n >= 1 {
            assert_eq!(name_at(&g, n as i64, n, 6), if n % 2 == 0 { "B" } else { "F" }, "({n},{n})");
        }
    }
}

#[test]
fn cell_agrees_with_expand() {
    for name in ["gamma", "omega"] {
        let s = load(name);
        for depth in 0..=8 {
            let grid = s.expand(depth);
            for y in 0..grid.height() as u64 {
                let lo = grid.row(y).keys().next().copied().unwrap_or(0) - 2;
                let hi = grid.row(y).keys().last().copied().unwrap_or(0) + 2;
                for x in lo..=hi {
                    assert_eq!(s.cell(x, y, depth).unwrap(), grid.get(x, y), "{name} ({x},{y}) depth {depth}");
                }
            }
        }
        assert!(s.cell(0, 1 << 4, 4).is_err());
    }
}

#[test]
fn tables_generate_green_functions() {
    for (sys, ca) in [("gamma", "gamma"), ("omega", "gamma_inv")] {
        for depth in [0, 5] {
            let r = load(sys).verify_against_green(&lin(ca), depth).unwrap();
            assert!(r.ok(), "{sys} depth {depth}: {r:?}");
        }
    }
    assert!(!load("gamma").verify_against_green(&lin("gamma_inv"), 4).unwrap().ok());
}

#[test]
fn gamma_transition_graph() {
    let g = load("gamma");
    let graph = g.transition_graph();
    assert_eq!(graph.len(), 10);
    assert_eq!(graph.len_with_zero(), 11);
    let cyclic = graph.cyclic_components();
    assert_eq!(cyclic.len(), 2);
    let bd = g.parse_state("BD").unwrap();
    assert!(cyclic.contains(&vec![bd]));
    let d = g.parse_state("D").unwrap();
    for s in graph.states() {
        assert_eq!(graph.reaches(s, d), s != bd, "{}", g.state_name(s));
    }
}

#[test]
fn one_letter_system() {
    let s = SubstSystem::from_json(ONE_LETTER).unwrap();
    let graph = s.transition_graph();
    let x = s.parse_state("X").unwrap();
    assert_eq!(graph.components(), vec![vec![x]]);
    assert!(!check_assertion_i(&s, 8).holds);
}

#[test]
fn equivalent_letters_as_transcribed() {
    let classes = |name: &str| load(name).equivalent_letters();
    let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert!(classes("gamma_raw").contains(&strs(&["A", "E", "H"])));
    let o = classes("omega_raw");
    for pair in [["A", "G"], ["B", "H"], ["F", "L"]] {
        assert!(o.contains(&strs(&pair)), "{pair:?} in {o:?}");
    }
    // The reduced tables keep one letter per class.
    assert!(classes("gamma").is_empty() && classes("omega").is_empty());
}

#[test]
fn structural_assertions() {
    let r = check_assertion_i(&load("gamma"), 64);
    assert!(r.holds, "{r:?}");
    let r = check_assertion_ii(&load("gamma"), 20);
    assert!(r.holds, "{r:?}");
    let r = check_assertion_iii(&load("omega"), 12);
    assert!(r.holds, "{r:?}");
    let empty = SubstSystem::from_json(r#"{"letters":[],"quadrants":{},"init":[],"projection":[]}"#).unwrap();
    assert!(check_assertion_iii(&empty, 5).holds);
}

#[test]
fn axis_cross_check_with_property_b() {
    assert!(check_b_linear(&lin("gamma"), &BSpec::new(0, 64, 16, 16)));
}

fn pt(a: i64, b: i64, c: i64, d: i64) -> (Ratio<i64>, Ratio<i64>) {
    (Ratio::new(a, b), Ratio::new(c, d))
}

#[test]
fn triangle_is_empty_at_both_scales() {
    let small = GeomFeature::triangle(pt(0, 1, 1, 2), pt(1, 3, 1, 6), pt(1, 3, 2, 3)).unwrap();
    let big = GeomFeature::triangle(pt(0, 1, 1, 1), pt(2, 3, 1, 3), pt(2, 3, 4, 3)).unwrap();
    assert_eq!(small.scaled(Ratio::from_integer(2)), big);
    let f = lin("gamma_inv");
    for tri in [&small, &big] {
        let r = direct_triangle_check(&f, tri, 8, 2, true).unwrap();
        assert!(r.points_scanned > 0);
        assert!(r.inside.is_empty(), "{:?}", r.inside);
    }
}

/// Lattice cells `(-2t, 256 - t)` on the slope −1/2 segment, implementation frame.
#[test]
#[ignore = "segment lies in the closure of the characteristic set; its lattice cells are not bijective at n=8"]
fn segment_points_pass_check_b() {
    let g = lin("gamma");
    for t in [16, 32, 48, 64] {
        assert!(check_b_linear(&g, &BSpec::new(-2 * t, (256 - t) as u64, 64, 64)), "t={t}");
    }
}
