//! Green functions `F^y_x`: how cell 0 at time 0 influences cell `x` at time `y`.
//!
//! For a linear CA the Green function is the matrix coefficient of `u^{-x}`
//! in `S^y`. For table CA a brute-force oracle enumerates the dependency
//! window instead.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{LaurentMat, Mat, MinPoly, Scalar};
use crate::automata::{GeneralCA, LinearCA};
use crate::Error;

/// Default cap on the number of contexts the table oracle may enumerate.
pub const DEFAULT_ORACLE_BUDGET: u128 = 1 << 24;

/// Sign `s` in the dyadic recurrence index `x + s·e·pⁿ`, fixed by
/// [`audit_recurrence_sign`] against direct powers.
pub const RECURRENCE_SHIFT_SIGN: i64 = 1;

/// Row `y` of a Green function; absent cells are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenRow<S> {
    pub y: u64,
    cells: BTreeMap<i64, Mat<S>>,
}

impl<S: Scalar> GreenRow<S> {
    pub fn from_power(y: u64, power: &LaurentMat<S>) -> Self {
        GreenRow {
            y,
            cells: power.terms().map(|(e, m)| (-e, m.clone())).collect(),
        }
    }

    pub fn get(&self, x: i64) -> Option<&Mat<S>> {
        self.cells.get(&x)
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, &Mat<S>)> + '_ {
        self.cells.iter().map(|(&x, m)| (x, m))
    }

    pub fn span(&self) -> Option<(i64, i64)> {
        Some((*self.cells.keys().next()?, *self.cells.keys().next_back()?))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn classify_at(&self, x: i64) -> CellClass {
        self.get(x).map_or(CellClass::Constant, classify)
    }

    /// Applies one more step: `G_{y+1}(x) = Σ_e G_y(x + e) · M_e`.
    pub fn advance(&self, f: &LaurentMat<S>) -> Self {
        let mut cells: BTreeMap<i64, Mat<S>> = BTreeMap::new();
        for (x, g) in self.cells() {
            for (e, m) in f.terms() {
                let prod = g.mul_mat(m);
                match cells.get_mut(&(x - e)) {
                    Some(cur) => cur.add_scaled(&prod, S::one()),
                    None => {
                        cells.insert(x - e, prod);
                    }
                }
            }
        }
        cells.retain(|_, m| !m.is_zero());
        GreenRow { y: self.y + 1, cells }
    }

    pub fn to_doc(&self) -> GreenRowDoc {
        GreenRowDoc {
            y: self.y,
            cells: self
                .cells()
                .map(|(x, m)| GreenCellDoc {
                    x,
                    matrix: m.to_rows(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GreenCellDoc {
    pub x: i64,
    pub matrix: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GreenRowDoc {
    pub y: u64,
    pub cells: Vec<GreenCellDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CellClass {
    Constant,
    Bijective,
    Other,
}

pub fn classify<S: Scalar>(m: &Mat<S>) -> CellClass {
    if m.is_zero() {
        CellClass::Constant
    } else if m.is_invertible() {
        CellClass::Bijective
    } else {
        CellClass::Other
    }
}

pub fn green_row<S: Scalar>(f: &LinearCA<S>, y: u64) -> GreenRow<S> {
    GreenRow::from_power(y, &f.symbol().pow(y))
}

/// Rows `0, 1, 2, …` by the row recurrence.
pub fn green_rows<S: Scalar>(f: &LinearCA<S>) -> impl Iterator<Item = GreenRow<S>> + '_ {
    let first = GreenRow::from_power(0, &LaurentMat::identity(f.dim()));
    std::iter::successors(Some(first), move |r| Some(r.advance(f.symbol())))
}

/// `F^y` assembled from `X^y mod m` in the basis `1, F, …, F^{D-1}`.
pub fn green_via_minpoly<S: Scalar>(
    f: &LinearCA<S>,
    m: &MinPoly<S>,
    y: u64,
) -> Result<GreenRow<S>, Error> {
    if !m.annihilates(f.symbol()) {
        return Err(Error::Precondition(format!("{m} does not annihilate the symbol")));
    }
    let coeffs = m.x_pow_mod(y);
    let d = f.dim();
    let mut power = LaurentMat::identity(d);
    let mut acc = LaurentMat::zero(d);
    for c in &coeffs {
        acc = &acc + &power.scale(c);
        power = &power * f.symbol();
    }
    Ok(GreenRow::from_power(y, &acc))
}

/// Terms `(j, e, c)` of the dyadic recurrence
/// `F^{D·pⁿ + y}_x = Σ c · F^{j·pⁿ + y}_{x + s·e·pⁿ}` implied by a minimal polynomial.
pub fn recurrence_terms<S: Scalar>(m: &MinPoly<S>) -> Vec<(usize, i64, S)> {
    let mut out = Vec::new();
    for (j, c) in m.lower().iter().enumerate() {
        for (e, k) in c.terms() {
            out.push((j, e, -k));
        }
    }
    out
}

/// Counts cells where the recurrence with shift sign `sign` disagrees with
/// the direct Green rows, for all `y < D·pⁿ`.
pub fn recurrence_mismatches<S: Scalar>(
    f: &LinearCA<S>,
    m: &MinPoly<S>,
    n: u32,
    sign: i64,
) -> usize {
    let p = S::MODULUS as u64;
    let pn = p.pow(n);
    let dd = m.degree() as u64;
    let horizon = 2 * dd * pn;
    let rows: Vec<GreenRow<S>> = green_rows(f).take(horizon as usize).collect();
    let terms = recurrence_terms(m);
    let zero = Mat::zeros(f.dim(), f.dim());
    let mut bad = 0;
    for y in 0..dd * pn {
        let lhs = &rows[(dd * pn + y) as usize];
        let mut rhs: BTreeMap<i64, Mat<S>> = BTreeMap::new();
        for &(j, e, c) in &terms {
            let src = &rows[(j as u64 * pn + y) as usize];
            for (x, g) in src.cells() {
                let tx = x - sign * e * pn as i64;
                rhs.entry(tx)
                    .or_insert_with(|| zero.clone())
                    .add_scaled(g, c);
            }
        }
        let mut xs: Vec<i64> = rhs.keys().copied().collect();
        xs.extend(lhs.cells().map(|(x, _)| x));
        xs.sort_unstable();
        xs.dedup();
        for x in xs {
            let l = lhs.get(x).unwrap_or(&zero);
            let r = rhs.get(&x).unwrap_or(&zero);
            if l != r {
                bad += 1;
            }
        }
    }
    bad
}

/// Which shift sign makes the recurrence hold at `n = 0` (if exactly one does).
pub fn audit_recurrence_sign<S: Scalar>(f: &LinearCA<S>, m: &MinPoly<S>) -> Option<i64> {
    let plus = recurrence_mismatches(f, m, 0, 1) == 0;
    let minus = recurrence_mismatches(f, m, 0, -1) == 0;
    match (plus, minus) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

/// Outcome of the table oracle at one `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OracleClass {
    Constant,
    Bijective,
    Other,
    /// Classes differ between contexts; counts per class.
    Mixed {
        constant: u64,
        bijective: u64,
        other: u64,
    },
}

/// Classifies `q ↦ F^y(φ_c(q))_x` over every context `c` on the dependency window.
pub fn general_green_oracle(
    a: &GeneralCA,
    x: i64,
    y: u64,
    budget: u128,
) -> Result<OracleClass, Error> {
    let nb = a.neighborhood();
    let lo = x + y as i64 * nb[0];
    let hi = x + y as i64 * nb[nb.len() - 1];
    if y > 0 && !(lo..=hi).contains(&0) || y == 0 && x != 0 {
        return Ok(OracleClass::Constant);
    }
    if y == 0 {
        return Ok(classify_values(&(0..a.q()).collect::<Vec<_>>(), a.q()));
    }
    let width = (hi - lo + 1) as usize;
    let q = a.q() as u128;
    let contexts = q.checked_pow(width as u32 - 1).unwrap_or(u128::MAX);
    let needed = contexts.saturating_mul(q);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let zero_at = (-lo) as usize;
    let (mut nc, mut nbij, mut no) = (0u64, 0u64, 0u64);
    let mut window = vec![0u32; width];
    let mut values = vec![0u32; a.q() as usize];
    for ctx in 0..contexts as u64 {
        let mut rest = ctx;
        for (i, slot) in window.iter_mut().enumerate() {
            if i == zero_at {
                continue;
            }
            *slot = (rest % a.q() as u64) as u32;
            rest /= a.q() as u64;
        }
        for s in 0..a.q() {
            window[zero_at] = s;
            values[s as usize] = evolve_window(a, &window, y);
        }
        match classify_values(&values, a.q()) {
            OracleClass::Constant => nc += 1,
            OracleClass::Bijective => nbij += 1,
            _ => no += 1,
        }
    }
    Ok(match (nc, nbij, no) {
        (_, 0, 0) => OracleClass::Constant,
        (0, _, 0) => OracleClass::Bijective,
        (0, 0, _) => OracleClass::Other,
        (constant, bijective, other) => OracleClass::Mixed {
            constant,
            bijective,
            other,
        },
    })
}

fn evolve_window(a: &GeneralCA, window: &[u32], y: u64) -> u32 {
    let nb = a.neighborhood();
    let span = (nb[nb.len() - 1] - nb[0]) as usize;
    let mut cur = window.to_vec();
    let mut word = vec![0u32; nb.len()];
    for _ in 0..y {
        let len = cur.len() - span;
        let mut next = Vec::with_capacity(len);
        for i in 0..len {
            for (w, &e) in word.iter_mut().zip(nb) {
                *w = cur[i + (e - nb[0]) as usize];
            }
            next.push(a.local(&word));
        }
        cur = next;
    }
    debug_assert_eq!(cur.len(), 1);
    cur[0]
}

fn classify_values(values: &[u32], q: u32) -> OracleClass {
    if values.iter().all(|&v| v == values[0]) {
        return OracleClass::Constant;
    }
    let mut seen = vec![false; q as usize];
    for &v in values {
        if std::mem::replace(&mut seen[v as usize], true) {
            return OracleClass::Other;
        }
    }
    OracleClass::Bijective
}

impl From<CellClass> for OracleClass {
    fn from(c: CellClass) -> Self {
        match c {
            CellClass::Constant => OracleClass::Constant,
            CellClass::Bijective => OracleClass::Bijective,
            CellClass::Other => OracleClass::Other,
        }
    }
}
