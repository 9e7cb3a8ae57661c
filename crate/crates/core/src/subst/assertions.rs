//! Finite replays of the three geometric assertions about the Γ and Γ⁻¹
//! substitution systems.

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::{State, SubstSystem};
use crate::automata::LinearCA;
use crate::obstruct::GeomFeature;
use crate::xp::sample_xp;
use crate::{Error, Gf2};

const MAX_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssertionReport {
    pub assertion: String,
    pub holds: bool,
    pub max_depth: u32,
    pub cells_checked: u64,
    pub failures: Vec<String>,
}

struct Tally {
    cells: u64,
    failures: Vec<String>,
    failed: bool,
}

impl Tally {
    fn new() -> Self {
        Tally { cells: 0, failures: Vec::new(), failed: false }
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cells += 1;
        if !ok {
            self.failed = true;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(msg());
            }
        }
    }

    fn absorb(&mut self, cells: u64, bad: Vec<String>) {
        self.cells += cells;
        if !bad.is_empty() {
            self.failed = true;
            let room = MAX_FAILURES.saturating_sub(self.failures.len());
            self.failures.extend(bad.into_iter().take(room));
        }
    }

    fn finish(self, name: &str, max_depth: u32) -> AssertionReport {
        AssertionReport {
            assertion: name.into(),
            holds: !self.failed,
            max_depth,
            cells_checked: self.cells,
            failures: self.failures,
        }
    }
}

fn states<const K: usize>(sys: &SubstSystem, names: [&str; K]) -> Result<[State; K], Error> {
    let mut out = [0; K];
    for (o, n) in out.iter_mut().zip(names) {
        *o = sys.parse_state(n)?;
    }
    Ok(out)
}

fn missing(name: &str, e: Error) -> AssertionReport {
    AssertionReport {
        assertion: name.into(),
        holds: false,
        max_depth: 0,
        cells_checked: 0,
        failures: vec![format!("system lacks the required letters: {e}")],
    }
}

fn depth_for(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// Vertical axis and diagonal: `(0, n)` alternates D/G and `(n, n)` alternates
/// B/F for every `n ≤ n_max`; every reachable state but BD leads to D.
pub fn check_assertion_i(sys: &SubstSystem, n_max: u64) -> AssertionReport {
    const NAME: &str = "i";
    let [d, g, b, f, bd] = match states(sys, ["D", "G", "B", "F", "BD"]) {
        Ok(s) => s,
        Err(e) => return missing(NAME, e),
    };
    let name = |s| sys.state_name(s);
    let mut t = Tally::new();
    t.expect(sys.init().len() == 1 && sys.init().get(&0) == Some(&d), || "init row is not a lone D at 0".into());
    let steps = [(d, 0, 0, d), (g, 0, 0, d), (d, 0, 1, g), (g, 0, 1, g), (d, 1, 1, f), (b, 0, 0, b), (f, 0, 0, b), (b, 1, 1, f), (f, 1, 1, f)];
    for (s, i, j, want) in steps {
        let got = sys.apply(s, i, j);
        t.expect(got == want, || format!("quadrant {i}{j} of {} is {}, expected {}", name(s), name(got), name(want)));
    }
    let depth = depth_for(n_max);
    for n in 0..=n_max {
        let axis = sys.cell_unchecked(0, n, depth);
        let want = if n % 2 == 0 { d } else { g };
        t.expect(axis == want, || format!("(0,{n}) is {}", name(axis)));
        let diag = sys.cell_unchecked(n as i64, n, depth);
        let want = match n {
            0 => d,
            n if n % 2 == 0 => b,
            _ => f,
        };
        t.expect(diag == want, || format!("({n},{n}) is {}", name(diag)));
    }
    let graph = sys.transition_graph();
    for s in graph.states() {
        let reaches = graph.reaches(s, d);
        t.expect(reaches == (s != bd), || format!("reachability of D from {} is {reaches}", name(s)));
    }
    t.finish(NAME, depth)
}

/// Slope −1/2 segment from the top-left corner to the diagonal, made of the
/// pattern `CF BD / X CF BD` with `X ∈ {G, BDG}`.
pub fn check_assertion_ii(sys: &SubstSystem, n_max: u32) -> AssertionReport {
    const NAME: &str = "ii";
    let [b, c, d, f, g, bd, cf, bdg, bg] =
        match states(sys, ["B", "C", "D", "F", "G", "BD", "CF", "BDG", "BG"]) {
            Ok(s) => s,
            Err(e) => return missing(NAME, e),
        };
    let name = |s| sys.state_name(s);
    let mut t = Tally::new();
    // Images as (top-left, top-right, bottom-left, bottom-right).
    let shown = [(bd, [0, 0, bd, 0]), (cf, [bd, 0, bdg, cf]), (bdg, [g, cf, b, c]), (g, [g, cf, d, c])];
    for (s, [tl, tr, bl, br]) in shown {
        for (i, j, want) in [(0, 1, tl), (1, 1, tr), (0, 0, bl), (1, 0, br)] {
            let got = sys.apply(s, i, j);
            t.expect(got == want, || format!("quadrant {i}{j} of {} is {}", name(s), name(got)));
        }
    }
    for x in [g, bdg] {
        let pattern = [(0, 1, cf), (1, 1, bd), (1, 0, x), (2, 0, cf), (3, 0, bd)];
        let mut image = HashMap::new();
        for &(px, py, s) in &pattern {
            for i in 0..2 {
                for j in 0..2 {
                    image.insert((2 * px + i as i64, 2 * py + j as i64), sys.apply(s, i, j));
                }
            }
        }
        let want = [
            (0, 3, bd), (0, 2, bdg), (1, 2, cf), (2, 2, bd), (2, 1, g),
            (3, 1, cf), (4, 1, bd), (4, 0, bdg), (5, 0, cf), (6, 0, bd),
        ];
        for (wx, wy, ws) in want {
            let got = image[&(wx, wy)];
            t.expect(got == ws, || format!("pattern with X={}: ({wx},{wy}) is {}", name(x), name(got)));
        }
    }
    let grid5 = sys.expand(5);
    for n in 3..=n_max {
        let r = (1i64 << n) - 1;
        let cell = |x: i64, y: i64| {
            if n == 5 {
                grid5.get(x, y as u64)
            } else {
                sys.cell_unchecked(x, y as u64, n)
            }
        };
        t.expect(cell(0, r) == g, || format!("depth {n}: top-left corner is {}", name(cell(0, r))));
        let odd = n % 2 == 1;
        let k_end = if odd { (r - 4) / 3 } else { (r - 6) / 3 };
        let check_k = |k: i64| -> Vec<String> {
            let mut want = vec![(2 * k + 1, r - k, vec![cf]), (2 * k + 2, r - k, vec![bd]), (2 * k + 2, r - k - 1, vec![g, bdg])];
            if k < k_end {
                want.push((2 * k + 3, r - k - 1, vec![cf]));
                want.push((2 * k + 4, r - k - 1, vec![bd]));
            } else if odd {
                want.push((2 * k + 3, r - k - 1, vec![f]));
            } else {
                want.push((2 * k + 3, r - k - 1, vec![cf]));
                want.push((2 * k + 4, r - k - 1, vec![bg]));
                want.push((2 * k + 4, r - k - 2, vec![b]));
            }
            want.into_iter()
                .filter_map(|(x, y, ok)| {
                    let s = cell(x, y);
                    (!ok.contains(&s)).then(|| format!("depth {n}: ({x},{y}) is {}", name(s)))
                })
                .collect()
        };
        let bad: Vec<String> = (0..=k_end).into_par_iter().flat_map(check_k).collect();
        t.absorb(5 * (k_end as u64 + 1), bad);
        // The segment ends on the diagonal.
        let end = if odd { (2 * k_end + 3, r - k_end - 1) } else { (2 * k_end + 4, r - k_end - 2) };
        t.expect(end.0 == end.1, || format!("depth {n}: segment ends at {end:?}, off the diagonal"));
    }
    t.finish(NAME, n_max)
}

/// Cells of the triangle template at depth `n ≥ 3`: boundary states and the
/// zero interior, in the system frame.
type Template = (Vec<((i64, i64), State)>, Vec<(i64, i64)>);

fn triangle_template(sys: &SubstSystem, n: u32) -> Result<Template, Error> {
    let st = |s: &str| sys.parse_state(s);
    let big = 1i64 << n;
    let (a, c) = (big / 2, big / 3);
    let mut cells = vec![((0, a), st("L")?), ((1, a), st("K")?)];
    let bottom = [("IK", "HL"), ("DH", "EIK"), ("E", "HL"), ("DL", "EIK")];
    for t in 1..c {
        let (l, r) = bottom[(t % 4) as usize];
        cells.push(((t - 1, a - t), st(l)?));
        cells.push(((t, a - t), st(r)?));
    }
    let h = (c - 1) / 2;
    let top = if n % 2 == 1 {
        cells.push(((c - 1, a - c), st("E")?));
        cells.push(((c, a - c), st("D")?));
        cells.push(((c, a - c - 1), st("H")?));
        for y in a - (c - 1)..=a + h {
            cells.push(((c, y), st("DHL")?));
        }
        for s in 1..=h {
            cells.push(((2 * s, a + s), st("H")?));
            cells.push(((2 * s + 1, a + s), st("K")?));
        }
        cells.push(((c, a + h + 1), st("DL")?));
        h
    } else {
        cells.push(((c - 1, a - c), st("DH")?));
        cells.push(((c, a - c), st("I")?));
        cells.push(((c, a - c - 1), st("K")?));
        for y in a - (c - 1)..a + h {
            cells.push(((c, y), st("EK")?));
        }
        for s in 1..h {
            cells.push(((2 * s, a + s), st("H")?));
            cells.push(((2 * s + 1, a + s), st("K")?));
        }
        cells.push(((c - 1, a + h), st("H")?));
        cells.push(((c, a + h), st("E")?));
        h - 1
    };
    let mut zeros = Vec::new();
    for t in 1..c {
        zeros.extend((t + 1..c).map(|x| (x, a - t)));
    }
    zeros.extend((2..c).map(|x| (x, a)));
    for s in 1..=top {
        zeros.extend((2 * s + 2..c).map(|x| (x, a + s)));
    }
    Ok((cells, zeros))
}

/// Strict interior test for the unit triangle `(0,1/2), (1/3,1/6), (1/3,2/3)`
/// at scale `big`, on integer points scaled by 6.
fn strictly_inside_scaled(big: i64, px: i64, py: i64) -> bool {
    let v = [(0, 3 * big), (2 * big, big), (2 * big, 4 * big)];
    let cross = |(ax, ay): (i64, i64), (bx, by): (i64, i64)| (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    let s = [cross(v[0], v[1]), cross(v[1], v[2]), cross(v[2], v[0])];
    s.iter().all(|&z| z > 0) || s.iter().all(|&z| z < 0)
}

/// Triangle templates hold at every depth `3 ..= n_max`, each substitutes into
/// the next, and no nonzero cell lies wholly inside the open triangle at
/// depths `1 ..= n_max`.
pub fn check_assertion_iii(sys: &SubstSystem, n_max: u32) -> AssertionReport {
    const NAME: &str = "iii";
    if sys.letters().is_empty() {
        return Tally::new().finish(NAME, n_max);
    }
    if let Err(e) = states(sys, ["D", "E", "H", "I", "K", "L"]) {
        return missing(NAME, e);
    }
    let name = |s| sys.state_name(s);
    let mut t = Tally::new();
    let mut prev: Option<HashMap<(i64, i64), State>> = None;
    for n in 3..=n_max {
        let (cells, zeros) = match triangle_template(sys, n) {
            Ok(v) => v,
            Err(e) => return missing(NAME, e),
        };
        let bad: Vec<String> = cells
            .par_iter()
            .map(|&(p, s)| (p, s, 0u64))
            .chain(zeros.par_iter().map(|&p| (p, 0, 0)))
            .filter_map(|((x, y), want, _)| {
                let got = sys.cell_unchecked(x, y as u64, n);
                (got != want).then(|| format!("depth {n}: ({x},{y}) is {}, template says {}", name(got), name(want)))
            })
            .collect();
        t.absorb((cells.len() + zeros.len()) as u64, bad);
        let known: HashMap<(i64, i64), State> =
            cells.iter().copied().chain(zeros.iter().map(|&p| (p, 0))).collect();
        if let Some(parent) = prev.take() {
            let bad: Vec<String> = known
                .par_iter()
                .filter_map(|(&(x, y), &want)| match parent.get(&(x >> 1, y >> 1)) {
                    None => Some(format!("depth {n}: parent of ({x},{y}) lies outside the template")),
                    Some(&ps) => {
                        let got = sys.apply(ps, (x & 1) as usize, (y & 1) as usize);
                        (got != want).then(|| format!("depth {n}: ({x},{y}) substitutes to {}", name(got)))
                    }
                })
                .collect();
            t.absorb(known.len() as u64, bad);
        }
        prev = Some(known);
    }
    for n in 1..=n_max {
        let big = 1i64 << n;
        let bad: Vec<String> = (big / 6..=2 * big / 3 + 1)
            .into_par_iter()
            .flat_map_iter(|y| {
                (0..=big / 3 + 1).filter_map(move |x| {
                    let corners = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)];
                    let inside = corners.iter().all(|&(cx, cy)| strictly_inside_scaled(big, 6 * cx, 6 * cy));
                    (inside && sys.cell_unchecked(x, y as u64, n) != 0)
                        .then(|| format!("depth {n}: nonzero cell ({x},{y}) inside the triangle"))
                })
            })
            .collect();
        t.absorb(1, bad);
    }
    t.finish(NAME, n_max)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleCheck {
    pub n: u32,
    pub k: u32,
    pub points_scanned: usize,
    /// Sample points strictly inside the triangle.
    pub inside: Vec<(i64, i64)>,
}

/// Scans the `(2, n, k)` sample of `f` for points strictly inside `tri`,
/// given in normalized system-frame coordinates (x is negated when `mirror`).
pub fn direct_triangle_check(f: &LinearCA<Gf2>, tri: &GeomFeature, n: u32, k: u32, mirror: bool) -> Result<TriangleCheck, Error> {
    let GeomFeature::Triangle(v) = tri else {
        return Err(Error::Invalid("expected a triangle".into()));
    };
    let scale = 1i64 << n;
    let top = v.iter().map(|p| p.1).max().expect("three vertices");
    let y_max = (top * Ratio::from_integer(scale)).ceil().to_integer().max(0) as u64 + 1;
    let sample = sample_xp(f, 2, n, k, y_max)?;
    let inside = sample
        .points
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let x = Ratio::new(if mirror { -a } else { a }, scale);
            tri.strictly_contains(&(x, Ratio::new(b, scale)))
        })
        .collect();
    Ok(TriangleCheck { n, k, points_scanned: sample.points.len(), inside })
}
