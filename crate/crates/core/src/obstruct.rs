//! Necessary condition for simulation: some `π_{α,β,γ}(x, y) = (αx + βy, γy)`
//! must map the characteristic set of the simulator into that of the
//! simulated automaton. Everything here is exact rational arithmetic.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::subst::{cover, SubstSystem};
use crate::xp::XpSample;
use crate::Error;

pub type Q = Ratio<i64>;
pub type Point = (Q, Q);

fn q(n: i64) -> Q {
    Ratio::from_integer(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiMap {
    pub alpha: Q,
    pub beta: Q,
    pub gamma: Q,
}

impl PiMap {
    pub fn new(alpha: Q, beta: Q, gamma: Q) -> Result<Self, Error> {
        if alpha <= Q::zero() || gamma <= Q::zero() {
            return Err(Error::Invalid("alpha and gamma must be positive".into()));
        }
        Ok(PiMap { alpha, beta, gamma })
    }

    pub fn identity() -> Self {
        PiMap { alpha: q(1), beta: q(0), gamma: q(1) }
    }

    /// The shear `s_z(x, y) = (x + zy, y)`.
    pub fn shear(z: i64) -> Self {
        PiMap { alpha: q(1), beta: q(z), gamma: q(1) }
    }

    pub fn apply(&self, (x, y): Point) -> Point {
        (self.alpha * x + self.beta * y, self.gamma * y)
    }
}

impl Serialize for PiMap {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PiMap", 3)?;
        st.serialize_field("alpha", &self.alpha.to_string())?;
        st.serialize_field("beta", &self.beta.to_string())?;
        st.serialize_field("gamma", &self.gamma.to_string())?;
        st.end()
    }
}

/// Lattice points at a common scale: `(a, b)` stands for `(a/scale, b/scale)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCloud {
    /// Base of the dyadic-style self-similarity used to fold tall points back.
    pub p: i64,
    pub scale: i64,
    /// Highest row that was scanned.
    pub y_max: i64,
    pub points: BTreeSet<(i64, i64)>,
}

impl PointCloud {
    pub fn from_sample(s: &XpSample) -> Self {
        PointCloud { p: s.p as i64, scale: s.scale(), y_max: s.y_max as i64, points: s.points.clone() }
    }

    /// Cells of `expand(depth)` carrying a good state, in the implementation frame.
    pub fn from_cover(sys: &SubstSystem, depth: u32) -> Self {
        PointCloud {
            p: 2,
            scale: 1 << depth,
            y_max: (1 << depth) - 1,
            points: cover::cover_points(sys, depth),
        }
    }

    pub fn normalized(&self) -> Vec<Point> {
        self.points.iter().map(|&(a, b)| (Ratio::new(a, self.scale), Ratio::new(b, self.scale))).collect()
    }

    /// Applies an integer shear at lattice level.
    pub fn sheared(&self, z: i64) -> Self {
        PointCloud { points: self.points.iter().map(|&(a, b)| (a + z * b, b)).collect(), ..self.clone() }
    }

    pub fn mirrored(&self) -> Self {
        PointCloud { points: self.points.iter().map(|&(a, b)| (-a, b)).collect(), ..self.clone() }
    }

    pub(crate) fn occupancy(&self) -> Occupancy {
        Occupancy::new(self)
    }
}

/// Row-wise prefix counts over the cloud's bounding box.
pub(crate) struct Occupancy {
    x0: i64,
    width: usize,
    rows: usize,
    prefix: Vec<u32>,
}

impl Occupancy {
    fn new(c: &PointCloud) -> Self {
        let x0 = c.points.iter().map(|p| p.0).min().unwrap_or(0);
        let x1 = c.points.iter().map(|p| p.0).max().unwrap_or(0);
        let width = (x1 - x0 + 1) as usize;
        let rows = c.y_max.max(0) as usize + 1;
        let mut prefix = vec![0u32; rows * (width + 1)];
        for &(a, b) in &c.points {
            if (0..rows as i64).contains(&b) {
                prefix[b as usize * (width + 1) + (a - x0) as usize + 1] += 1;
            }
        }
        for r in 0..rows {
            let row = &mut prefix[r * (width + 1)..(r + 1) * (width + 1)];
            for i in 1..=width {
                row[i] += row[i - 1];
            }
        }
        Occupancy { x0, width, rows, prefix }
    }

    /// Some point in row `b` with `lo ≤ a ≤ hi`.
    fn row_hit(&self, b: i64, lo: i64, hi: i64) -> bool {
        if b < 0 || b >= self.rows as i64 {
            return false;
        }
        let lo = (lo - self.x0).max(0);
        let hi = (hi - self.x0).min(self.width as i64 - 1);
        if lo > hi {
            return false;
        }
        let row = &self.prefix[b as usize * (self.width + 1)..];
        row[hi as usize + 1] > row[lo as usize]
    }

    fn box_hit(&self, b_lo: i64, b_hi: i64, lo: i64, hi: i64) -> bool {
        (b_lo.max(0)..=b_hi).any(|b| self.row_hit(b, lo, hi))
    }
}

impl From<&XpSample> for PointCloud {
    fn from(s: &XpSample) -> Self {
        Self::from_sample(s)
    }
}

pub fn pi_apply(m: &PiMap, s: &PointCloud) -> Vec<Point> {
    s.normalized().into_iter().map(|p| m.apply(p)).collect()
}

/// Each point of `pts` lies within Chebyshev distance `tol` (normalized units)
/// of a target point. Points above the scanned rows are first scaled down by
/// powers of `p`, under which characteristic sets are invariant.
pub fn contained_within(pts: &[Point], target: &PointCloud, tol: Q) -> bool {
    contained_occ(pts.iter().copied(), &target.occupancy(), target, tol)
}

fn contained_occ(mut pts: impl Iterator<Item = Point>, occ: &Occupancy, target: &PointCloud, tol: Q) -> bool {
    let s = q(target.scale);
    let t = tol * s;
    let top = q(target.y_max);
    let p = q(target.p.max(2));
    pts.all(|(x, y)| {
        let (mut lx, mut ly) = (x * s, y * s);
        if ly < Q::zero() {
            return true;
        }
        while ly > top {
            lx /= p;
            ly /= p;
        }
        occ.box_hit(
            (ly - t).ceil().to_integer(),
            (ly + t).floor().to_integer(),
            (lx - t).ceil().to_integer(),
            (lx + t).floor().to_integer(),
        )
    })
}

/// Rationals `c/d` with `|c| ≤ bound`, `1 ≤ d ≤ bound`, in lowest terms.
fn rationals(bound: i64, positive: bool) -> Vec<Q> {
    let mut v: BTreeSet<Q> = BTreeSet::new();
    for d in 1..=bound {
        for c in -bound..=bound {
            if !positive || c > 0 {
                v.insert(Ratio::new(c, d));
            }
        }
    }
    v.into_iter().collect()
}

/// Every map with numerators and denominators bounded by `denom_bound` that
/// sends `f` within `tol` of `g`.
pub fn search_pi(f: &PointCloud, g: &PointCloud, denom_bound: i64, tol: Q) -> Vec<PiMap> {
    let pos = rationals(denom_bound, true);
    let all = rationals(denom_bound, false);
    // Spread-out order so failing maps are rejected early.
    let mut pts = f.normalized();
    pts.sort_by_key(|p| {
        let h = (p.0.numer().wrapping_mul(0x9E37_79B9) ^ p.1.numer().wrapping_mul(0x85EB_CA6B)) as u64;
        h.wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
    });
    let occ = g.occupancy();
    let mut grid = Vec::with_capacity(pos.len() * pos.len() * all.len());
    for &alpha in &pos {
        for &beta in &all {
            for &gamma in &pos {
                grid.push(PiMap { alpha, beta, gamma });
            }
        }
    }
    let mut found: Vec<PiMap> = grid
        .into_par_iter()
        .filter(|m| contained_occ(pts.iter().map(|&p| m.apply(p)), &occ, g, tol))
        .collect();
    found.sort();
    found
}

/// Geometric shapes appearing in statements about characteristic sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomFeature {
    /// `ℝ₊ · d` from the origin.
    HalfLine(Point),
    Segment(Point, Point),
    Triangle([Point; 3]),
}

fn cross(o: Point, a: Point, b: Point) -> Q {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

impl GeomFeature {
    pub fn half_line(d: Point) -> Result<Self, Error> {
        if d.0.is_zero() && d.1.is_zero() {
            return Err(Error::Invalid("zero direction".into()));
        }
        Ok(GeomFeature::HalfLine(d))
    }

    pub fn segment(a: Point, b: Point) -> Result<Self, Error> {
        if a == b {
            return Err(Error::Invalid("degenerate segment".into()));
        }
        Ok(GeomFeature::Segment(a, b))
    }

    pub fn triangle(a: Point, b: Point, c: Point) -> Result<Self, Error> {
        if cross(a, b, c).is_zero() {
            return Err(Error::Invalid("degenerate triangle".into()));
        }
        Ok(GeomFeature::Triangle([a, b, c]))
    }

    fn map_points(&self, f: impl Fn(Point) -> Point) -> Self {
        match *self {
            GeomFeature::HalfLine(d) => GeomFeature::HalfLine(f(d)),
            GeomFeature::Segment(a, b) => GeomFeature::Segment(f(a), f(b)),
            GeomFeature::Triangle([a, b, c]) => GeomFeature::Triangle([f(a), f(b), f(c)]),
        }
    }

    pub fn scaled(&self, k: Q) -> Self {
        self.map_points(|(x, y)| (x * k, y * k))
    }

    pub fn mirrored(&self) -> Self {
        self.map_points(|(x, y)| (-x, y))
    }

    /// Strict interior; only triangles have one.
    pub fn strictly_contains(&self, p: &Point) -> bool {
        let GeomFeature::Triangle([a, b, c]) = *self else {
            return false;
        };
        let s = [cross(a, b, *p), cross(b, c, *p), cross(c, a, *p)];
        s.iter().all(|v| v.is_positive()) || s.iter().all(|v| v.is_negative())
    }

    /// Abscissa of the feature at height `y`, for non-horizontal lines and segments.
    fn x_at(&self, y: Q) -> Option<Q> {
        let (a, b) = match *self {
            GeomFeature::HalfLine(d) => ((q(0), q(0)), d),
            GeomFeature::Segment(a, b) => (a, b),
            GeomFeature::Triangle(_) => return None,
        };
        if a.1 == b.1 {
            return None;
        }
        Some(a.0 + (b.0 - a.0) * (y - a.1) / (b.1 - a.1))
    }

    /// Heights covered by the feature: `[lo, hi]`, `hi = None` for unbounded.
    fn y_range(&self) -> Option<(Q, Option<Q>)> {
        match *self {
            GeomFeature::HalfLine(d) if d.1.is_positive() => Some((q(0), None)),
            GeomFeature::Segment(a, b) if a.1 != b.1 => Some((a.1.min(b.1), Some(a.1.max(b.1)))),
            _ => None,
        }
    }

    /// Every scanned row meeting the feature has a cloud point within `tol`
    /// lattice cells of it. Rows within `tol` of an end are skipped.
    pub fn supported_by(&self, cloud: &PointCloud, tol: i64) -> Result<bool, Error> {
        let (lo, hi) = self
            .y_range()
            .ok_or_else(|| Error::Invalid("only rising half-lines and non-horizontal segments".into()))?;
        let s = q(cloud.scale);
        let first = (lo * s).ceil().to_integer() + tol;
        let last = hi.map_or(cloud.y_max, |h| (h * s).floor().to_integer().min(cloud.y_max)) - tol;
        let occ = cloud.occupancy();
        Ok((first..=last).all(|b| {
            let x = self.x_at(Ratio::new(b, cloud.scale)).expect("non-horizontal") * s;
            occ.row_hit(b, (x - q(tol)).ceil().to_integer(), (x + q(tol)).floor().to_integer())
        }))
    }
}

/// Slopes `s` (as `x = s·y`) of origin half-lines met in every row `1 ..= y_max`
/// within two cells; candidates `c/d` with `d ≤ 8`, `|c| ≤ 3d`. Runs of
/// adjacent candidates merge into the one with the smallest denominator.
pub fn extract_directions(cloud: &PointCloud) -> Vec<Q> {
    const TOL: i64 = 2;
    let cands = {
        let mut v: BTreeSet<Q> = BTreeSet::new();
        for d in 1..=8 {
            for c in -3 * d..=3 * d {
                v.insert(Ratio::new(c, d));
            }
        }
        v.into_iter().collect::<Vec<_>>()
    };
    let occ = cloud.occupancy();
    let pass: Vec<bool> = cands
        .par_iter()
        .map(|&s| {
            cloud.y_max >= 1
                && (1..=cloud.y_max).all(|b| {
                    let x = s * q(b);
                    occ.row_hit(b, (x - q(TOL)).ceil().to_integer(), (x + q(TOL)).floor().to_integer())
                })
        })
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cands.len() {
        if !pass[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < cands.len() && pass[i] {
            i += 1;
        }
        let best = cands[start..i].iter().min_by_key(|r| (*r.denom(), r.numer().abs())).copied().unwrap();
        out.push(best);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Forced {
    pub beta: String,
    pub alpha_over_gamma: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pair: [String; 2],
    /// Slopes `x/y` of the origin half-lines found in each cloud.
    pub directions: [Vec<String>; 2],
    /// Integer shears applied to make each cloud's rightmost line vertical.
    pub shears: [i64; 2],
    pub forced: Forced,
    pub forced_map: PiMap,
    pub containment: bool,
    pub obstruction: bool,
    pub induction_backed: bool,
    /// `"induction-backed"` or `"heuristic"`; `"none"` without obstruction.
    pub status: String,
}

impl Verdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

/// Replays the final argument: extract two origin lines on each side, make
/// the rightmost vertical by an integer shear, solve the slope matching for
/// `β/γ` and `α/γ`, and test the forced map for containment.
pub fn replay_final_argument(
    pair: [&str; 2],
    f: &PointCloud,
    g: &PointCloud,
    tol_cells: i64,
    induction: bool,
) -> Result<Verdict, Error> {
    let df = extract_directions(f);
    let dg = extract_directions(g);
    for (name, d) in [(pair[0], &df), (pair[1], &dg)] {
        if d.len() != 2 {
            return Err(Error::Precondition(format!(
                "`{name}` shows {} origin lines, two are needed to force the map",
                d.len()
            )));
        }
    }
    let canon = |d: &[Q]| -> Result<i64, Error> {
        let r = d[1];
        if !r.is_integer() {
            return Err(Error::Precondition(format!("rightmost slope {r} is not an integer")));
        }
        Ok(-r.to_integer())
    };
    let shears = [canon(&df)?, canon(&dg)?];
    let (s1, s2) = (df[0] + q(shears[0]), df[1] + q(shears[0]));
    let (t1, t2) = (dg[0] + q(shears[1]), dg[1] + q(shears[1]));
    // π sends slope s to (αs + β)/γ; α > 0 keeps the order of the lines.
    let a_over_g = (t2 - t1) / (s2 - s1);
    let b_over_g = t2 - a_over_g * s2;
    let forced_map = PiMap::new(a_over_g, b_over_g, q(1))?;
    let fc = f.sheared(shears[0]);
    let gc = g.sheared(shears[1]);
    let tol = Ratio::new(tol_cells, gc.scale);
    let containment = contained_within(&pi_apply(&forced_map, &fc), &gc, tol);
    let obstruction = !containment;
    let induction_backed = obstruction && induction;
    Ok(Verdict {
        pair: [pair[0].into(), pair[1].into()],
        directions: [df.iter().map(Q::to_string).collect(), dg.iter().map(Q::to_string).collect()],
        shears,
        forced: Forced { beta: b_over_g.to_string(), alpha_over_gamma: a_over_g.to_string() },
        forced_map,
        containment,
        obstruction,
        induction_backed,
        status: match (obstruction, induction_backed) {
            (false, _) => "none",
            (true, true) => "induction-backed",
            (true, false) => "heuristic",
        }
        .into(),
    })
}
