//! Finite-scale samples of `X_p`: lattice points `(a, b)` where the Green
//! function is bijective and isolated by `p^{n-k}` cells on both sides.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Scalar;
use crate::automata::{product, rescale, verify_linear_embedding, LinearCA, Rescaling};
use crate::green::{green_rows, CellClass, GreenRow};
use crate::Error;
use crate::Mat;

pub const DEFAULT_K: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XpSample {
    pub p: u32,
    pub n: u32,
    pub k: u32,
    pub y_max: u64,
    pub points: BTreeSet<(i64, i64)>,
}

impl XpSample {
    /// Isolation margin `p^{n-k}`.
    pub fn margin(&self) -> u64 {
        (self.p as u64).pow(self.n - self.k)
    }

    /// `pⁿ`, the normalizing denominator.
    pub fn scale(&self) -> i64 {
        (self.p as i64).pow(self.n)
    }

    pub fn default_y_max(p: u32, n: u32) -> u64 {
        2 * (p as u64).pow(n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sample serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }

    /// `x,y` rows with unreduced fractions over `pⁿ`.
    pub fn to_csv(&self) -> String {
        let s = self.scale();
        let mut out = String::from("x,y\n");
        for &(a, b) in &self.points {
            let _ = writeln!(out, "{a}/{s},{b}/{s}");
        }
        out
    }

    fn with_points(&self, points: BTreeSet<(i64, i64)>) -> Self {
        XpSample { points, ..self.clone() }
    }
}

/// Positions in `row` passing `B(a, y, m, m)`.
pub fn isolated_bijective<S: Scalar>(row: &GreenRow<S>, m: u64) -> Vec<i64> {
    let xs: Vec<(i64, &Mat<S>)> = row.cells().collect();
    let m = m as i64;
    (0..xs.len())
        .filter(|&i| {
            let (x, g) = xs[i];
            let left_ok = i == 0 || x - xs[i - 1].0 > m;
            let right_ok = i + 1 == xs.len() || xs[i + 1].0 - x > m;
            left_ok && right_ok && crate::green::classify(g) == CellClass::Bijective
        })
        .map(|i| xs[i].0)
        .collect()
}

const CHUNK: usize = 64;

fn check_params<S: Scalar>(p: u32, n: u32, k: u32) -> Result<u64, Error> {
    if p != S::MODULUS {
        return Err(Error::ModulusMismatch { expected: S::MODULUS, found: p });
    }
    if k < 1 || k > n {
        return Err(Error::Invalid(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    (p as u64)
        .checked_pow(n)
        .and_then(|_| (p as u64).checked_pow(n - k))
        .ok_or_else(|| Error::OutOfRange(format!("{p}^{n} overflows")))
}

/// Scans rows `0 ..= y_max` for points with property `B(a, b, p^{n-k}, p^{n-k})`.
pub fn sample_xp<S: Scalar>(f: &LinearCA<S>, p: u32, n: u32, k: u32, y_max: u64) -> Result<XpSample, Error> {
    let margin = check_params::<S>(p, n, k)?;
    let mut points = BTreeSet::new();
    let mut rows = green_rows(f).take(y_max as usize + 1);
    loop {
        let chunk: Vec<GreenRow<S>> = rows.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let found: Vec<(i64, i64)> = chunk
            .par_iter()
            .flat_map_iter(|r| isolated_bijective(r, margin).into_iter().map(move |a| (a, r.y as i64)))
            .collect();
        points.extend(found);
    }
    Ok(XpSample { p, n, k, y_max, points })
}

/// `(a, b) ↦ (a + z·b, b)`: the sample of `σ_z ∘ F` from that of `F`.
pub fn apply_lattice_shift_law(s: &XpSample, z: i64) -> XpSample {
    s.with_points(s.points.iter().map(|&(a, b)| (a + z * b, b)).collect())
}

/// Outcome of a differential check between two computations of one law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub checked: usize,
    pub mismatches: Vec<(i64, i64)>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Property B at `(x, y)` with margins `(l, r)` on a precomputed row.
fn b_on_row<S: Scalar>(row: &GreenRow<S>, x: i64, l: u64, r: u64) -> bool {
    crate::propb::check_b_row(row, &crate::propb::BSpec::new(x, row.y, l, r))
}

/// `F` has `B(mx, y, ml, mr)` iff `G = ⟨F⟩^{m,1,0}` has `B(x, y, l, r)`, with
/// `l = r = p^{n-k}`, over rows `0 ..= 2pⁿ` and every `x` near either support.
pub fn lattice_pack_law_check<S: Scalar>(f: &LinearCA<S>, m: usize, p: u32, n: u32, k: u32) -> Result<LawReport, Error> {
    let margin = check_params::<S>(p, n, k)?;
    let g = rescale(f, Rescaling { m, t: 1, z: 0 })?;
    let y_max = XpSample::default_y_max(p, n);
    let mi = m as i64;
    let pairs: Vec<(GreenRow<S>, GreenRow<S>)> = green_rows(f).zip(green_rows(&g)).take(y_max as usize + 1).collect();
    let per_row: Vec<(usize, Vec<(i64, i64)>)> = pairs
        .par_iter()
        .map(|(rf, rg)| {
            let (lo, hi) = match (rf.span(), rg.span()) {
                (Some((a, b)), Some((c, d))) => (a.div_euclid(mi).min(c), b.div_euclid(mi).max(d)),
                (Some((a, b)), None) => (a.div_euclid(mi), b.div_euclid(mi)),
                (None, Some(s)) => s,
                (None, None) => (0, 0),
            };
            let mut bad = Vec::new();
            for x in lo - 1..=hi + 1 {
                let lhs = b_on_row(rf, mi * x, mi as u64 * margin, mi as u64 * margin);
                let rhs = b_on_row(rg, x, margin, margin);
                if lhs != rhs {
                    bad.push((x, rf.y as i64));
                }
            }
            ((hi - lo + 3) as usize, bad)
        })
        .collect();
    Ok(LawReport {
        law: format!("pack m={m}"),
        checked: per_row.iter().map(|r| r.0).sum(),
        mismatches: per_row.into_iter().flat_map(|r| r.1).collect(),
    })
}

fn set_report(law: String, lhs: &BTreeSet<(i64, i64)>, rhs: &BTreeSet<(i64, i64)>) -> LawReport {
    LawReport {
        law,
        checked: lhs.union(rhs).count(),
        mismatches: lhs.symmetric_difference(rhs).copied().collect(),
    }
}

/// `sample(F × G) = sample(F) ∩ sample(G)` at identical parameters.
pub fn product_intersection_check<S: Scalar>(f: &LinearCA<S>, g: &LinearCA<S>, p: u32, n: u32, k: u32) -> Result<LawReport, Error> {
    let y = XpSample::default_y_max(p, n);
    let sp = sample_xp(&product(f, g), p, n, k, y)?;
    let sf = sample_xp(f, p, n, k, y)?;
    let sg = sample_xp(g, p, n, k, y)?;
    let inter: BTreeSet<(i64, i64)> = sf.points.intersection(&sg.points).copied().collect();
    Ok(set_report("product".into(), &sp.points, &inter))
}

/// For `G ⊑_φ A`: `sample(A) ⊆ sample(G)`. Mismatches are points of `A`'s
/// sample missing from `G`'s.
pub fn subautomaton_inclusion_check<S: Scalar>(
    a: &LinearCA<S>,
    g: &LinearCA<S>,
    phi: &Mat<S>,
    p: u32,
    n: u32,
    k: u32,
) -> Result<LawReport, Error> {
    if !verify_linear_embedding(g, a, phi)? {
        return Err(Error::Precondition("phi does not embed G into A".into()));
    }
    let y = XpSample::default_y_max(p, n);
    let sa = sample_xp(a, p, n, k, y)?;
    let sg = sample_xp(g, p, n, k, y)?;
    Ok(LawReport {
        law: "sub-automaton".into(),
        checked: sa.points.len(),
        mismatches: sa.points.difference(&sg.points).copied().collect(),
    })
}

/// `(a, b)` is in the sample of `F^t` iff `(a, tb)` is in that of `F`.
pub fn iteration_law_check<S: Scalar>(f: &LinearCA<S>, t: u64, p: u32, n: u32, k: u32, y_max: u64) -> Result<LawReport, Error> {
    if t == 0 {
        return Err(Error::Invalid("iteration count must be positive".into()));
    }
    let ft = LinearCA::new(f.symbol().pow(t));
    let st = sample_xp(&ft, p, n, k, y_max)?;
    let sf = sample_xp(f, p, n, k, t * y_max)?;
    let folded: BTreeSet<(i64, i64)> = sf
        .points
        .iter()
        .filter(|&&(_, b)| b % t as i64 == 0)
        .map(|&(a, b)| (a, b / t as i64))
        .collect();
    Ok(set_report(format!("iteration t={t}"), &st.points, &folded))
}

/// Over GF(2) with a scalar symbol: `(a, b)` at `(n, k)` gives `(2a, 2b)` at `(n+1, k)`.
pub fn doubling_check<S: Scalar>(f: &LinearCA<S>, n: u32, k: u32) -> Result<LawReport, Error> {
    let y = XpSample::default_y_max(2, n);
    let s = sample_xp(f, 2, n, k, y)?;
    let s2 = sample_xp(f, 2, n + 1, k, 2 * y)?;
    Ok(LawReport {
        law: "doubling".into(),
        checked: s.points.len(),
        mismatches: s.points.iter().copied().filter(|&(a, b)| !s2.points.contains(&(2 * a, 2 * b))).collect(),
    })
}

/// Grayscale image with black set cells on white.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Pgm {
    fn blank(width: usize, height: usize) -> Self {
        Pgm { width, height, pixels: vec![255; width * height] }
    }

    fn mark(&mut self, col: usize, row: usize) {
        self.pixels[row * self.width + col] = 0;
    }

    pub fn is_set(&self, col: usize, row: usize) -> bool {
        self.pixels[row * self.width + col] == 0
    }

    /// Binary `P5` encoding.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }
}

/// Lattice point set drawn with time going up; `mirror` flips x.
fn render_points(pts: impl Iterator<Item = (i64, i64)> + Clone, mirror: bool) -> Pgm {
    let flip = |x: i64| if mirror { -x } else { x };
    let pts = pts.map(move |(a, b)| (flip(a), b));
    let (mut lo, mut hi, mut top) = (0i64, 0i64, 0i64);
    for (a, b) in pts.clone() {
        lo = lo.min(a);
        hi = hi.max(a);
        top = top.max(b);
    }
    let mut img = Pgm::blank((hi - lo + 1) as usize, (top + 1) as usize);
    for (a, b) in pts {
        img.mark((a - lo) as usize, (top - b) as usize);
    }
    img
}

/// Nonzero Green cells of rows `0 .. rows`.
pub fn render_spacetime<S: Scalar>(f: &LinearCA<S>, rows: u64, mirror: bool) -> Result<Pgm, Error> {
    if rows == 0 {
        return Err(Error::Invalid("need at least one row".into()));
    }
    let cells: Vec<(i64, i64)> = green_rows(f)
        .take(rows as usize)
        .flat_map(|r| {
            let y = r.y as i64;
            r.cells().map(|(x, _)| (x, y)).collect::<Vec<_>>()
        })
        .collect();
    let mut img = render_points(cells.iter().copied(), mirror);
    if img.height < rows as usize {
        let pad = rows as usize - img.height;
        let mut pixels = vec![255; pad * img.width];
        pixels.extend_from_slice(&img.pixels);
        img = Pgm { width: img.width, height: rows as usize, pixels };
    }
    Ok(img)
}

pub fn render_sample(s: &XpSample, mirror: bool) -> Pgm {
    render_points(s.points.iter().copied(), mirror)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::builtin;
    use crate::Gf2;

    fn lin(n: &str) -> LinearCA<Gf2> {
        builtin::<Gf2>(n).unwrap().linear().unwrap()
    }

    #[test]
    fn shift_sample_is_the_diagonal() {
        let s = sample_xp(&lin("shift(1)"), 2, 4, 2, 32).unwrap();
        assert_eq!(s.points.len(), 33);
        assert!(s.points.iter().all(|&(a, b)| a == b));
    }

    #[test]
    fn nilpotent_only_bottom_row() {
        let s = sample_xp(&lin("nil"), 2, 4, 2, 32).unwrap();
        assert_eq!(s.points.iter().copied().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn opposite_shifts_meet_at_origin() {
        let r = product_intersection_check(&lin("shift(1)"), &lin("shift(-1)"), 2, 4, 2).unwrap();
        assert!(r.ok());
        let s = sample_xp(&product(&lin("shift(1)"), &lin("shift(-1)")), 2, 4, 2, 32).unwrap();
        assert!(s.points.iter().all(|&(_, b)| b == 0));
    }

    #[test]
    fn parameter_errors() {
        assert!(sample_xp(&lin("xor"), 2, 4, 0, 8).is_err());
        assert!(sample_xp(&lin("xor"), 2, 4, 5, 8).is_err());
        assert!(matches!(sample_xp(&lin("xor"), 3, 4, 1, 8), Err(Error::ModulusMismatch { .. })));
    }

    #[test]
    fn zero_shift_is_identity() {
        let s = sample_xp(&lin("xor"), 2, 4, 1, 32).unwrap();
        assert_eq!(apply_lattice_shift_law(&s, 0), s);
    }

    #[test]
    fn csv_and_json_round_trip() {
        let s = sample_xp(&lin("xor"), 2, 3, 1, 4).unwrap();
        assert!(s.to_csv().starts_with("x,y\n0/8,0/8\n"));
        assert_eq!(XpSample::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn identity_renders_one_column() {
        let img = render_spacetime(&lin("identity(1)"), 16, false).unwrap();
        assert_eq!((img.width, img.height), (1, 16));
        assert!(img.pixels.iter().all(|&p| p == 0));
        assert!(img.to_bytes().starts_with(b"P5\n1 16\n255\n"));
    }

    #[test]
    fn xor_render_is_pascal() {
        let img = render_spacetime(&lin("xor"), 8, false).unwrap();
        assert_eq!(img.width, 8);
        for y in 0..8usize {
            for x in 0..8usize {
                assert_eq!(img.is_set(x, 7 - y), x <= y && x & y == x, "({x},{y})");
            }
        }
        let m = render_spacetime(&lin("xor"), 8, true).unwrap();
        assert!(m.is_set(7, 0) && m.is_set(7, 7) && !m.is_set(0, 7));
    }
}
