use cellgreen::automata::{builtin, builtin_minpoly, GeneralCA, LinearCA};
use cellgreen::green::{
    audit_recurrence_sign, classify, general_green_oracle, green_row, green_rows, green_via_minpoly,
    recurrence_mismatches, CellClass, OracleClass, DEFAULT_ORACLE_BUDGET, RECURRENCE_SHIFT_SIGN,
};
use cellgreen::{Gf2, Gf3, Mat};
use proptest::prelude::*;

fn lin(name: &str) -> LinearCA<Gf2> {
    builtin::<Gf2>(name).unwrap().linear().unwrap()
}

fn support(f: &LinearCA<Gf2>, y: u64) -> Vec<i64> {
    green_row(f, y).cells().map(|(x, _)| x).collect()
}

#[test]
fn printed_rows() {
    assert_eq!(support(&lin("identity(3)"), 3), vec![0]);
    assert!(green_row(&lin("identity(3)"), 3).get(0) == Some(&Mat::identity(3)));
    assert_eq!(support(&lin("xor"), 4), vec![0, 4]);
    assert_eq!(support(&lin("shift(1)"), 5), vec![5]);
    for name in ["gamma", "theta", "nil"] {
        let f = lin(name);
        let r = green_row(&f, 0);
        assert_eq!(r.len(), 1);
        assert!(r.get(0) == Some(&Mat::identity(f.dim())));
    }
}

#[test]
fn green_row_is_spike_dependence() {
    // Column i of the cell at x is F^y(spike_i)_x.
    let f = lin("gamma");
    for y in 0..12 {
        let row = green_row(&f, y);
        for i in 0..3 {
            let c = f.iterate(&cellgreen::automata::spike(3, i), y);
            for x in -30..30 {
                let from_row: Vec<u32> = match row.get(x) {
                    Some(m) => (0..3).map(|r| m.get(r, i).value()).collect(),
                    None => vec![0; 3],
                };
                let from_sim: Vec<u32> = c.get(x).iter().map(|s| s.value()).collect();
                assert_eq!(from_row, from_sim, "y={y} x={x} i={i}");
            }
        }
    }
}

#[test]
fn cell_classes() {
    assert_eq!(classify(&Mat::<Gf2>::zeros(2, 2)), CellClass::Constant);
    assert_eq!(classify(&Mat::<Gf2>::identity(2)), CellClass::Bijective);
    assert_eq!(classify(&Mat::<Gf2>::from_rows(&[vec![0, 0], vec![1, 0]])), CellClass::Other);
    assert_eq!(green_row(&lin("xor"), 4).classify_at(2), CellClass::Constant);
}

#[test]
fn minpoly_path() {
    let g = lin("gamma");
    let mg = builtin_minpoly::<Gf2>("gamma").unwrap();
    assert_eq!(green_via_minpoly(&g, &mg, 8).unwrap(), green_row(&g, 8));
    assert_eq!(green_via_minpoly(&g, &mg, 0).unwrap(), green_row(&g, 0));
    let gi = lin("gamma_inv");
    let mo = builtin_minpoly::<Gf2>("gamma_inv").unwrap();
    assert_eq!(green_via_minpoly(&gi, &mo, 12).unwrap(), green_row(&gi, 12));
    assert!(green_via_minpoly(&gi, &mg, 3).is_err());
    let t = lin("theta");
    let mt = builtin_minpoly::<Gf2>("theta").unwrap();
    for y in [0, 1, 7, 33, 100] {
        assert_eq!(green_via_minpoly(&t, &mt, y).unwrap(), green_row(&t, y));
    }
}

#[test]
fn dyadic_recurrences() {
    for name in ["gamma", "gamma_inv"] {
        let f = lin(name);
        let m = builtin_minpoly::<Gf2>(name).unwrap();
        assert_eq!(audit_recurrence_sign(&f, &m), Some(RECURRENCE_SHIFT_SIGN));
        for n in 0..=2 {
            assert_eq!(recurrence_mismatches(&f, &m, n, RECURRENCE_SHIFT_SIGN), 0, "{name} n={n}");
        }
    }
}

#[test]
fn row_recurrence_up_to_64() {
    for name in ["gamma", "gamma_inv", "theta", "xor"] {
        let f = lin(name);
        for (y, row) in green_rows(&f).take(65).enumerate() {
            assert_eq!(row, green_row(&f, y as u64), "{name} y={y}");
        }
    }
}

#[test]
fn table_oracle() {
    let id = lin("identity(1)").to_table(DEFAULT_ORACLE_BUDGET).unwrap();
    for y in 0..5 {
        assert_eq!(general_green_oracle(&id, 0, y, DEFAULT_ORACLE_BUDGET).unwrap(), OracleClass::Bijective);
        assert_eq!(general_green_oracle(&id, 1, y, DEFAULT_ORACLE_BUDGET).unwrap(), OracleClass::Constant);
    }
    let and = GeneralCA::and();
    assert!(matches!(
        general_green_oracle(&and, 0, 1, DEFAULT_ORACLE_BUDGET).unwrap(),
        OracleClass::Mixed { constant: 1, bijective: 1, other: 0 }
    ));
    assert!(general_green_oracle(&and, 0, 30, 1 << 10).is_err());
}

fn linear_class(f: &LinearCA<Gf2>, x: i64, y: u64) -> OracleClass {
    match green_row(f, y).classify_at(x) {
        CellClass::Constant => OracleClass::Constant,
        CellClass::Bijective => OracleClass::Bijective,
        CellClass::Other => OracleClass::Other,
    }
}

#[test]
fn table_oracle_agrees_with_linear_path() {
    for name in ["xor", "shift(-1)", "theta"] {
        let f = lin(name);
        let t = f.to_table(DEFAULT_ORACLE_BUDGET).unwrap();
        let ymax = if f.dim() == 1 { 6 } else { 2 };
        for y in 0..=ymax {
            for x in -(y as i64) - 1..=y as i64 + 1 {
                let got = general_green_oracle(&t, x, y, DEFAULT_ORACLE_BUDGET).unwrap();
                assert_eq!(got, linear_class(&f, x, y), "{name} ({x},{y})");
            }
        }
    }
}

#[test]
fn odd_characteristic_rows() {
    let f = builtin::<Gf3>("xor").unwrap().linear().unwrap();
    // (1 + u⁻¹)^y over Z₃: the coefficient at x is binom(y, x) mod 3.
    let row = green_row(&f, 5);
    let vals: Vec<(i64, u32)> = row.cells().map(|(x, m)| (x, m.get(0, 0).value())).collect();
    assert_eq!(vals, vec![(0, 1), (1, 2), (2, 1), (3, 1), (4, 2), (5, 1)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn minpoly_path_matches_powers(y in 0u64..200) {
        let g = lin("gamma");
        let mg = builtin_minpoly::<Gf2>("gamma").unwrap();
        prop_assert_eq!(green_via_minpoly(&g, &mg, y).unwrap(), green_row(&g, y));
    }
}
