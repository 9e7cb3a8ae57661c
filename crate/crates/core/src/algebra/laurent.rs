//! Laurent polynomials with scalar and square-matrix coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::matrix::Mat;
use super::scalar::Scalar;
use crate::Error;

/// Element of `Z_p[u, u⁻¹]`, stored without zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ScalarLaurent<S> {
    coeffs: BTreeMap<i64, S>,
}

impl<S: Scalar> ScalarLaurent<S> {
    pub fn zero() -> Self {
        ScalarLaurent {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(S::one(), 0)
    }

    pub fn monomial(c: S, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        ScalarLaurent { coeffs }
    }

    /// Builds from `(exponent, residue)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, S::from_i64(c));
        }
        out
    }

    pub fn add_term(&mut self, e: i64, c: S) {
        if c.is_zero() {
            return;
        }
        let v = self.coeffs.get(&e).copied().unwrap_or_else(S::zero) + c;
        if v.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, v);
        }
    }

    pub fn coeff(&self, e: i64) -> S {
        self.coeffs.get(&e).copied().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, S)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Some((c, e))` when the value is the unit `c·u^e`.
    pub fn as_unit_monomial(&self) -> Option<(S, i64)> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (&e, &c) = self.coeffs.iter().next()?;
        Some((c, e))
    }

    pub fn pow(&self, mut y: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while y > 0 {
            if y & 1 == 1 {
                acc = &acc * &base;
            }
            y >>= 1;
            if y > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `u ↦ u⁻¹`.
    pub fn mirror(&self) -> Self {
        ScalarLaurent {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }
}

impl<S: Scalar> Add for &ScalarLaurent<S> {
    type Output = ScalarLaurent<S>;
    fn add(self, rhs: Self) -> ScalarLaurent<S> {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl<S: Scalar> Neg for &ScalarLaurent<S> {
    type Output = ScalarLaurent<S>;
    fn neg(self) -> ScalarLaurent<S> {
        ScalarLaurent {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl<S: Scalar> Sub for &ScalarLaurent<S> {
    type Output = ScalarLaurent<S>;
    fn sub(self, rhs: Self) -> ScalarLaurent<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Mul for &ScalarLaurent<S> {
    type Output = ScalarLaurent<S>;
    fn mul(self, rhs: Self) -> ScalarLaurent<S> {
        let mut out = ScalarLaurent::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl<S: fmt::Debug> fmt::Debug for ScalarLaurent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

impl<S: Scalar> fmt::Display for ScalarLaurent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            let one = c == S::one();
            match (e, one) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "u")?,
                (_, true) => write!(f, "u^{e}")?,
                (1, false) => write!(f, "{c}u")?,
                (_, false) => write!(f, "{c}u^{e}")?,
            }
        }
        Ok(())
    }
}

/// `d × d`-matrix-valued Laurent polynomial: the symbol of a linear CA.
///
/// The coefficient at exponent `e` acts on the neighbour at offset `+e`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMat<S> {
    d: usize,
    coeffs: BTreeMap<i64, Mat<S>>,
}

impl<S: Scalar> LaurentMat<S> {
    pub fn zero(d: usize) -> Self {
        LaurentMat {
            d,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::monomial(0, Mat::identity(d))
    }

    pub fn monomial(e: i64, m: Mat<S>) -> Self {
        assert!(m.is_square(), "symbol coefficients must be square");
        let d = m.rows();
        let mut coeffs = BTreeMap::new();
        if !m.is_zero() {
            coeffs.insert(e, m);
        }
        LaurentMat { d, coeffs }
    }

    /// Builds from `(exponent, matrix)` pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Mat<S>)>>(d: usize, terms: I) -> Self {
        let mut out = Self::zero(d);
        for (e, m) in terms {
            assert_eq!((m.rows(), m.cols()), (d, d), "coefficient has wrong size");
            out.add_term(e, &m, S::one());
        }
        out
    }

    /// Scalar Laurent polynomial times the identity.
    pub fn from_scalar(d: usize, s: &ScalarLaurent<S>) -> Self {
        let id = Mat::identity(d);
        Self::from_terms(d, s.terms().map(|(e, c)| (e, id.scale(c))))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Mat<S>)> + '_ {
        self.coeffs.iter().map(|(&e, m)| (e, m))
    }

    pub fn coeff(&self, e: i64) -> Mat<S> {
        self.coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.d, self.d))
    }

    pub fn coeff_ref(&self, e: i64) -> Option<&Mat<S>> {
        self.coeffs.get(&e)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest and largest exponent, `None` for the zero symbol.
    pub fn exponent_hull(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    fn add_term(&mut self, e: i64, m: &Mat<S>, c: S) {
        if c.is_zero() || m.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(cur) => {
                cur.add_scaled(m, c);
                if cur.is_zero() {
                    self.coeffs.remove(&e);
                }
            }
            None => {
                self.coeffs.insert(e, m.scale(c));
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, m) in other.terms() {
            out.add_term(e, m, S::one());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.d);
        for (ea, ma) in self.terms() {
            for (eb, mb) in other.terms() {
                out.add_term(ea + eb, &ma.mul_mat(mb), S::one());
            }
        }
        Ok(out)
    }

    fn check_dim(&self, other: &Self) -> Result<(), Error> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(())
    }

    pub fn scale(&self, s: &ScalarLaurent<S>) -> Self {
        let mut out = Self::zero(self.d);
        for (e, m) in self.terms() {
            for (es, c) in s.terms() {
                out.add_term(e + es, m, c);
            }
        }
        out
    }

    pub fn pow(&self, mut y: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.d);
        while y > 0 {
            if y & 1 == 1 {
                acc = &acc * &base;
            }
            y >>= 1;
            if y > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `u ↦ u⁻¹`; the symbol of the mirrored automaton.
    pub fn mirror(&self) -> Self {
        LaurentMat {
            d: self.d,
            coeffs: self.coeffs.iter().map(|(&e, m)| (-e, m.clone())).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        LaurentMat {
            d: self.d,
            coeffs: self.coeffs.iter().map(|(&e, m)| (e, m.transpose())).collect(),
        }
    }

    /// Multiplies by `u^k`.
    pub fn shift_exponents(&self, k: i64) -> Self {
        LaurentMat {
            d: self.d,
            coeffs: self.coeffs.iter().map(|(&e, m)| (e + k, m.clone())).collect(),
        }
    }

    /// Entry `(i, j)` as a scalar Laurent polynomial.
    pub fn entry(&self, i: usize, j: usize) -> ScalarLaurent<S> {
        let mut s = ScalarLaurent::zero();
        for (e, m) in self.terms() {
            s.add_term(e, m.get(i, j));
        }
        s
    }

    pub fn from_entries(d: usize, entries: &[Vec<ScalarLaurent<S>>]) -> Self {
        let mut coeffs: BTreeMap<i64, Mat<S>> = BTreeMap::new();
        for (i, row) in entries.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                for (e, c) in s.terms() {
                    coeffs
                        .entry(e)
                        .or_insert_with(|| Mat::zeros(d, d))
                        .set(i, j, c);
                }
            }
        }
        coeffs.retain(|_, m| !m.is_zero());
        LaurentMat { d, coeffs }
    }

    fn entry_grid(&self) -> Vec<Vec<ScalarLaurent<S>>> {
        (0..self.d)
            .map(|i| (0..self.d).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Determinant over the commutative ring `Z_p[u, u⁻¹]`.
    pub fn det(&self) -> ScalarLaurent<S> {
        let grid = self.entry_grid();
        let rows: Vec<usize> = (0..self.d).collect();
        let cols: Vec<usize> = (0..self.d).collect();
        minor_det(&grid, &rows, &cols)
    }

    /// Inverse symbol, available exactly when the determinant is a unit monomial.
    pub fn invert(&self) -> Result<Self, Error> {
        let det = self.det();
        let (c, e) = det.as_unit_monomial().ok_or(Error::NotInvertible)?;
        let cinv = c.inv().ok_or(Error::NotInvertible)?;
        let det_inv = ScalarLaurent::monomial(cinv, -e);
        let grid = self.entry_grid();
        let d = self.d;
        let mut adj = vec![vec![ScalarLaurent::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let rows: Vec<usize> = (0..d).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..d).filter(|&c| c != j).collect();
                let mut cof = minor_det(&grid, &rows, &cols);
                if (i + j) % 2 == 1 {
                    cof = -&cof;
                }
                adj[j][i] = &cof * &det_inv;
            }
        }
        Ok(Self::from_entries(d, &adj))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.d)
    }
}

/// Laplace expansion along the first row with memoisation over column subsets.
fn minor_det<S: Scalar>(
    grid: &[Vec<ScalarLaurent<S>>],
    rows: &[usize],
    cols: &[usize],
) -> ScalarLaurent<S> {
    let k = rows.len();
    if k == 0 {
        return ScalarLaurent::one();
    }
    assert!(cols.len() <= 63);
    let full: u64 = (1u64 << cols.len()) - 1;
    let mut memo = HashMap::new();
    det_rec(grid, rows, cols, 0, full, &mut memo)
}

fn det_rec<S: Scalar>(
    grid: &[Vec<ScalarLaurent<S>>],
    rows: &[usize],
    cols: &[usize],
    depth: usize,
    mask: u64,
    memo: &mut HashMap<u64, ScalarLaurent<S>>,
) -> ScalarLaurent<S> {
    if depth == rows.len() {
        return ScalarLaurent::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let mut acc = ScalarLaurent::zero();
    let mut sign_pos = true;
    for (ci, &c) in cols.iter().enumerate() {
        if mask & (1 << ci) == 0 {
            continue;
        }
        let a = &grid[rows[depth]][c];
        if !a.is_zero() {
            let sub = det_rec(grid, rows, cols, depth + 1, mask & !(1 << ci), memo);
            let term = a * &sub;
            acc = if sign_pos { &acc + &term } else { &acc - &term };
        }
        sign_pos = !sign_pos;
    }
    memo.insert(mask, acc.clone());
    acc
}

impl<S: Scalar> Add for &LaurentMat<S> {
    type Output = LaurentMat<S>;
    fn add(self, rhs: Self) -> LaurentMat<S> {
        self.try_add(rhs).expect("symbol dimension mismatch")
    }
}

impl<S: Scalar> Mul for &LaurentMat<S> {
    type Output = LaurentMat<S>;
    fn mul(self, rhs: Self) -> LaurentMat<S> {
        self.try_mul(rhs).expect("symbol dimension mismatch")
    }
}

impl<S: Scalar> Neg for &LaurentMat<S> {
    type Output = LaurentMat<S>;
    fn neg(self) -> LaurentMat<S> {
        LaurentMat {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, m)| (e, m.scale(-S::one())))
                .collect(),
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for LaurentMat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

impl<S: Scalar> fmt::Display for LaurentMat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.d {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.d {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, ")")
    }
}
