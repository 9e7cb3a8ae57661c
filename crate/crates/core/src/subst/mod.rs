//! Two-by-two linear substitution systems over GF(2).
//!
//! A state is a bit-vector over the system's letters. The state at
//! `(2x+i, 2y+j)` is a linear image of the state at `(x, y)`, chosen by the
//! quadrant bits `(i, j)`; `i` selects the column and `j` the row (`y` grows
//! upward). Cell states project linearly to Green matrices.

mod assertions;
mod graph;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::Mat;
use crate::automata::{builtin, LinearCA};
use crate::green::green_rows;
use crate::{Error, Gf2};

pub use assertions::{
    check_assertion_i, check_assertion_ii, check_assertion_iii, direct_triangle_check,
    AssertionReport, TriangleCheck,
};
pub use graph::TransitionGraph;

/// Bit `k` set means letter `k` is present.
pub type State = u64;

pub const MAX_LETTERS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitCell {
    pub x: i64,
    pub state: Vec<String>,
}

/// On-disk form of a substitution system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstDoc {
    pub letters: Vec<String>,
    /// Key `"ij"`; per output letter, the input letters XORed together.
    pub quadrants: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    pub init: Vec<InitCell>,
    pub projection: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub mirror: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstSystem {
    letters: Vec<String>,
    /// `quadrants[i][j][o]` is the mask of inputs feeding output letter `o`.
    quadrants: [[Vec<u64>; 2]; 2],
    init: BTreeMap<i64, State>,
    projection: Vec<Vec<u64>>,
    mirror: bool,
}

fn parity(v: u64) -> u64 {
    (v.count_ones() & 1) as u64
}

impl SubstSystem {
    pub fn from_doc(doc: &SubstDoc) -> Result<Self, Error> {
        let n = doc.letters.len();
        if n > MAX_LETTERS {
            return Err(Error::Invalid(format!("at most {MAX_LETTERS} letters, got {n}")));
        }
        let mut index = BTreeMap::new();
        for (k, l) in doc.letters.iter().enumerate() {
            if l.is_empty() || l == "0" || l.contains('+') {
                return Err(Error::Invalid(format!("bad letter name `{l}`")));
            }
            if index.insert(l.as_str(), k).is_some() {
                return Err(Error::Invalid(format!("duplicate letter `{l}`")));
            }
        }
        let mask = |names: &[String]| -> Result<u64, Error> {
            names.iter().try_fold(0u64, |m, l| {
                let k = index
                    .get(l.as_str())
                    .ok_or_else(|| Error::Invalid(format!("unknown letter `{l}`")))?;
                Ok(m ^ (1u64 << k))
            })
        };
        let mut quadrants: [[Vec<u64>; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                quadrants[i][j] = vec![0; n];
            }
        }
        for (key, outs) in &doc.quadrants {
            let (i, j) = match key.as_str() {
                "00" => (0, 0),
                "01" => (0, 1),
                "10" => (1, 0),
                "11" => (1, 1),
                _ => return Err(Error::Invalid(format!("bad quadrant key `{key}`"))),
            };
            for (out, ins) in outs {
                let o = *index
                    .get(out.as_str())
                    .ok_or_else(|| Error::Invalid(format!("unknown letter `{out}`")))?;
                quadrants[i][j][o] = mask(ins)?;
            }
        }
        let mut init = BTreeMap::new();
        for c in &doc.init {
            let s = mask(&c.state)?;
            if init.insert(c.x, s).is_some() {
                return Err(Error::Invalid(format!("init position {} repeated", c.x)));
            }
        }
        init.retain(|_, s| *s != 0);
        let d = doc.projection.len();
        let mut projection = Vec::with_capacity(d);
        for row in &doc.projection {
            if row.len() != d {
                return Err(Error::Invalid("projection must be square".into()));
            }
            projection.push(row.iter().map(|e| mask(e)).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(SubstSystem { letters: doc.letters.clone(), quadrants, init, projection, mirror: doc.mirror })
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        Self::from_doc(&serde_json::from_str(text)?)
    }

    pub fn to_doc(&self) -> SubstDoc {
        let names = |m: u64| -> Vec<String> {
            (0..self.letters.len()).filter(|k| m >> k & 1 == 1).map(|k| self.letters[k].clone()).collect()
        };
        let mut quadrants = BTreeMap::new();
        for i in 0..2 {
            for j in 0..2 {
                let outs: BTreeMap<String, Vec<String>> = self.quadrants[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m != 0)
                    .map(|(o, &m)| (self.letters[o].clone(), names(m)))
                    .collect();
                quadrants.insert(format!("{i}{j}"), outs);
            }
        }
        SubstDoc {
            letters: self.letters.clone(),
            quadrants,
            init: self.init.iter().map(|(&x, &s)| InitCell { x, state: names(s) }).collect(),
            projection: self.projection.iter().map(|r| r.iter().map(|&m| names(m)).collect()).collect(),
            mirror: self.mirror,
        }
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// Size of the projected Green matrices.
    pub fn dim(&self) -> usize {
        self.projection.len()
    }

    pub fn mirror(&self) -> bool {
        self.mirror
    }

    pub fn init(&self) -> &BTreeMap<i64, State> {
        &self.init
    }

    /// Copy with the init row moved by `dx`.
    pub fn shifted(&self, dx: i64) -> Self {
        let mut s = self.clone();
        s.init = self.init.iter().map(|(&x, &v)| (x + dx, v)).collect();
        s
    }

    #[inline]
    pub fn apply(&self, s: State, i: usize, j: usize) -> State {
        if s == 0 {
            return 0;
        }
        self.quadrants[i][j]
            .iter()
            .enumerate()
            .fold(0, |acc, (o, &m)| acc | parity(s & m) << o)
    }

    pub fn project(&self, s: State) -> Mat<Gf2> {
        let d = self.dim();
        let mut m = Mat::zeros(d, d);
        for (r, row) in self.projection.iter().enumerate() {
            for (c, &mask) in row.iter().enumerate() {
                m.set(r, c, Gf2::new(parity(s & mask) as u32));
            }
        }
        m
    }

    pub fn letter(&self, name: &str) -> Option<State> {
        self.letters.iter().position(|l| l == name).map(|k| 1 << k)
    }

    /// `"BDG"` style names when every letter is one character, `"b+dg"` otherwise.
    pub fn state_name(&self, s: State) -> String {
        if s == 0 {
            return "0".into();
        }
        let parts: Vec<&str> = (0..self.letters.len())
            .filter(|k| s >> k & 1 == 1)
            .map(|k| self.letters[k].as_str())
            .collect();
        if self.letters.iter().all(|l| l.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join("+")
        }
    }

    pub fn parse_state(&self, text: &str) -> Result<State, Error> {
        let text = text.trim();
        if text == "0" {
            return Ok(0);
        }
        let bad = || Error::Invalid(format!("cannot parse state `{text}`"));
        if text.contains('+') {
            return text
                .split('+')
                .try_fold(0, |acc, p| self.letter(p.trim()).map(|b| acc ^ b).ok_or_else(bad));
        }
        text.chars().try_fold(0, |acc, c| {
            self.letter(c.encode_utf8(&mut [0; 4])).map(|b| acc ^ b).ok_or_else(bad)
        })
    }

    /// Full grid of side `2^depth`, computed level by level.
    pub fn expand(&self, depth: u32) -> SubstGrid {
        let mut rows = vec![self.init.clone()];
        for _ in 0..depth {
            rows = (0..rows.len() * 2)
                .into_par_iter()
                .map(|ny| {
                    let (y, j) = (ny / 2, ny % 2);
                    let mut out = BTreeMap::new();
                    for (&x, &s) in &rows[y] {
                        for i in 0..2 {
                            let t = self.apply(s, i, j);
                            if t != 0 {
                                out.insert(2 * x + i as i64, t);
                            }
                        }
                    }
                    out
                })
                .collect();
        }
        SubstGrid { depth, rows }
    }

    /// State at `(x, y)` after `depth` substitutions, along the digit path.
    pub fn cell(&self, x: i64, y: u64, depth: u32) -> Result<State, Error> {
        if depth >= 63 || y >> depth != 0 {
            return Err(Error::OutOfRange(format!("y = {y} outside [0, 2^{depth})")));
        }
        Ok(self.cell_unchecked(x, y, depth))
    }

    pub(crate) fn cell_unchecked(&self, x: i64, y: u64, depth: u32) -> State {
        let mut s = self.init.get(&(x >> depth)).copied().unwrap_or(0);
        for k in (0..depth).rev() {
            if s == 0 {
                break;
            }
            s = self.apply(s, (x >> k & 1) as usize, (y >> k & 1) as usize);
        }
        s
    }

    /// Implementation-frame abscissa of a system-frame cell.
    pub fn to_impl_x(&self, x: i64) -> i64 {
        if self.mirror {
            -x
        } else {
            x
        }
    }

    /// Compares projections with Green rows `0 .. 2^depth` over the square
    /// `[0, 2^depth)` and both supports.
    pub fn verify_against_green(&self, f: &LinearCA<Gf2>, depth: u32) -> Result<VerifyReport, Error> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: f.dim() });
        }
        let grid = self.expand(depth);
        let side = 1i64 << depth;
        let rows: Vec<_> = green_rows(f).take(side as usize).collect();
        let per_row: Vec<(usize, usize, Option<i64>)> = rows
            .par_iter()
            .enumerate()
            .map(|(y, g)| {
                let mut xs: BTreeSet<i64> = (0..side).collect();
                xs.extend(grid.rows[y].keys().copied());
                xs.extend(g.cells().map(|(x, _)| self.to_impl_x(x)));
                let zero = Mat::zeros(self.dim(), self.dim());
                let mut bad = 0;
                let mut first = None;
                for &x in &xs {
                    let got = self.project(grid.get(x, y as u64));
                    let want = g.get(self.to_impl_x(x)).unwrap_or(&zero);
                    if &got != want {
                        bad += 1;
                        first.get_or_insert(x);
                    }
                }
                (xs.len(), bad, first)
            })
            .collect();
        let mut report = VerifyReport { depth, cells_compared: 0, mismatches: 0, first_mismatch: None };
        for (y, (n, bad, first)) in per_row.into_iter().enumerate() {
            report.cells_compared += n;
            report.mismatches += bad;
            if report.first_mismatch.is_none() {
                report.first_mismatch = first.map(|x| (x, y as u64));
            }
        }
        Ok(report)
    }

    /// First init shift in `0, -1, 1, -2, 2, ..` (up to `max_shift`) that
    /// verifies at `depth`.
    pub fn align_init(&self, f: &LinearCA<Gf2>, depth: u32, max_shift: i64) -> Result<i64, Error> {
        for k in 0..=2 * max_shift {
            let dx = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
            if self.shifted(dx).verify_against_green(f, depth)?.ok() {
                return Ok(dx);
            }
        }
        Err(Error::Invalid(format!("no init shift within ±{max_shift} matches the Green rows")))
    }

    /// Letters whose singleton states have identical quadrant images and projections.
    pub fn equivalent_letters(&self) -> Vec<Vec<String>> {
        let n = self.letters.len();
        let sig = |k: usize| {
            let s = 1u64 << k;
            let imgs: Vec<State> = (0..4).map(|q| self.apply(s, q >> 1, q & 1)).collect();
            (imgs, self.project(s))
        };
        let mut groups: Vec<(_, Vec<String>)> = Vec::new();
        for k in 0..n {
            let key = sig(k);
            match groups.iter_mut().find(|(g, _)| *g == key) {
                Some((_, v)) => v.push(self.letters[k].clone()),
                None => groups.push((key, vec![self.letters[k].clone()])),
            }
        }
        groups.into_iter().map(|(_, v)| v).filter(|v| v.len() > 1).collect()
    }

    /// Checks that `map` (letter ↦ target state) commutes with every quadrant
    /// map, preserves projections and sends the init row onto the target's.
    pub fn check_reduction(&self, target: &SubstSystem, map: &BTreeMap<String, String>) -> Result<bool, Error> {
        let mut img = vec![0u64; self.letters.len()];
        for (k, l) in self.letters.iter().enumerate() {
            let t = map.get(l).ok_or_else(|| Error::Invalid(format!("letter `{l}` not mapped")))?;
            img[k] = target.parse_state(t)?;
        }
        let h = |s: State| -> State {
            (0..self.letters.len()).filter(|k| s >> k & 1 == 1).fold(0, |acc, k| acc ^ img[k])
        };
        for k in 0..self.letters.len() {
            let s = 1u64 << k;
            for i in 0..2 {
                for j in 0..2 {
                    if h(self.apply(s, i, j)) != target.apply(img[k], i, j) {
                        return Ok(false);
                    }
                }
            }
            if self.project(s) != target.project(img[k]) {
                return Ok(false);
            }
        }
        let mapped: BTreeMap<i64, State> =
            self.init.iter().map(|(&x, &s)| (x, h(s))).filter(|(_, s)| *s != 0).collect();
        Ok(mapped == target.init && self.mirror == target.mirror)
    }

    pub fn transition_graph(&self) -> TransitionGraph {
        TransitionGraph::build(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub depth: u32,
    pub cells_compared: usize,
    pub mismatches: usize,
    /// System-frame `(x, y)`.
    pub first_mismatch: Option<(i64, u64)>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstGrid {
    depth: u32,
    rows: Vec<BTreeMap<i64, State>>,
}

impl SubstGrid {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, y: u64) -> &BTreeMap<i64, State> {
        &self.rows[y as usize]
    }

    pub fn get(&self, x: i64, y: u64) -> State {
        self.rows.get(y as usize).and_then(|r| r.get(&x)).copied().unwrap_or(0)
    }

    pub fn nonzero_cells(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// Text picture, top row first, columns `x_lo ..= x_hi`.
    pub fn render(&self, sys: &SubstSystem, x_lo: i64, x_hi: i64) -> String {
        let names: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| (x_lo..=x_hi).map(|x| sys.state_name(r.get(&x).copied().unwrap_or(0))).collect())
            .collect();
        let w = names.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for row in names.iter().rev() {
            let cells: Vec<String> =
                row.iter().map(|n| format!("{:>w$}", if n == "0" { "." } else { n.as_str() })).collect();
            out.push_str(cells.join(" ").trim_end());
            out.push('\n');
        }
        out
    }
}

struct Embedded {
    name: &'static str,
    automaton: &'static str,
    text: &'static str,
    sha256: &'static str,
}

const EMBEDDED: &[Embedded] = &[
    Embedded {
        name: "gamma",
        automaton: "gamma",
        text: include_str!("../data/gamma.json"),
        sha256: "367d53f688f7d696109b161ad2925d0da023c7b4b4fcff62a0081f9996aedd54",
    },
    Embedded {
        name: "gamma_raw",
        automaton: "gamma",
        text: include_str!("../data/gamma_raw.json"),
        sha256: "c5dc11b39e43f12c69acae3c7d18218983ee1b42d7b82789c40a47dffc333682",
    },
    Embedded {
        name: "omega",
        automaton: "gamma_inv",
        text: include_str!("../data/omega.json"),
        sha256: "13fff704d522050437ec8ed6c849c46a7f9afc2408d19f6473de61a76e422650",
    },
    Embedded {
        name: "omega_raw",
        automaton: "gamma_inv",
        text: include_str!("../data/omega_raw.json"),
        sha256: "b19015cffe07dd689d51c8c5d05472e9f7607d404ee14833244cf8d66b6a7680",
    },
];

/// Depth of the mandatory check run when a builtin table is loaded.
pub const LOAD_VERIFY_DEPTH: u32 = 4;

/// A builtin table after checksum and Green verification.
#[derive(Clone, Debug)]
pub struct LoadedSystem {
    pub name: &'static str,
    /// Automaton whose Green functions the table generates.
    pub automaton: &'static str,
    pub system: SubstSystem,
    /// Shift applied to the stored init row to match the Green rows.
    pub init_shift: i64,
}

pub fn builtin_system_names() -> Vec<&'static str> {
    EMBEDDED.iter().map(|e| e.name).collect()
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn builtin_system(name: &str) -> Result<LoadedSystem, Error> {
    let e = EMBEDDED
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Invalid(format!("unknown substitution system `{name}`")))?;
    let digest = sha256_hex(e.text.as_bytes());
    if digest != e.sha256 {
        return Err(Error::Invalid(format!("checksum mismatch for `{name}`: {digest}")));
    }
    let raw = SubstSystem::from_json(e.text)?;
    let f = builtin::<Gf2>(e.automaton)?.linear()?;
    let init_shift = raw.align_init(&f, LOAD_VERIFY_DEPTH, 2)?;
    Ok(LoadedSystem { name: e.name, automaton: e.automaton, system: raw.shifted(init_shift), init_shift })
}

/// Cover of the cells known to carry a point with property B.
pub mod cover {
    use super::*;

    /// Greatest set of states with zero projection whose lower children stay inside.
    pub fn zero_core(sys: &SubstSystem, universe: &BTreeSet<State>) -> BTreeSet<State> {
        let mut z: BTreeSet<State> =
            universe.iter().copied().filter(|&s| sys.project(s).is_zero()).collect();
        z.insert(0);
        loop {
            let drop: Vec<State> = z
                .iter()
                .copied()
                .filter(|&s| !z.contains(&sys.apply(s, 0, 0)) || !z.contains(&sys.apply(s, 1, 0)))
                .collect();
            if drop.is_empty() {
                return z;
            }
            for s in drop {
                z.remove(&s);
            }
        }
    }

    /// Reachable states with a bijective projection that reproduce themselves in
    /// the lower-left child and only spawn zero-core states in the lower-right.
    pub fn seeds(sys: &SubstSystem) -> BTreeSet<State> {
        let g = sys.transition_graph();
        let mut universe: BTreeSet<State> = g.states().into_iter().collect();
        universe.insert(0);
        let z = zero_core(sys, &universe);
        g.states()
            .into_iter()
            .filter(|&s| {
                sys.project(s).is_invertible() && sys.apply(s, 0, 0) == s && z.contains(&sys.apply(s, 1, 0))
            })
            .collect()
    }

    /// Reachable states from which a seed is reachable.
    pub fn good_states(sys: &SubstSystem) -> BTreeSet<State> {
        let g = sys.transition_graph();
        let seeds = seeds(sys);
        g.states().into_iter().filter(|&s| seeds.iter().any(|&t| g.reaches(s, t))).collect()
    }

    /// Implementation-frame cells of `expand(depth)` holding a good state.
    pub fn cover_points(sys: &SubstSystem, depth: u32) -> BTreeSet<(i64, i64)> {
        let good = good_states(sys);
        let grid = sys.expand(depth);
        let mut pts = BTreeSet::new();
        for y in 0..grid.height() as u64 {
            for (&x, s) in grid.row(y) {
                if good.contains(s) {
                    pts.insert((sys.to_impl_x(x), y as i64));
                }
            }
        }
        pts
    }
}

#[cfg(test)]
mod tests;
