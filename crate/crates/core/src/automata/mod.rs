//! Linear and table-driven automata, finite-support configurations, and the
//! standard transforms (packing, iteration, shift, product, mirror, dual).

mod builtin;
mod transform;

use std::collections::BTreeMap;

pub use builtin::{builtin, builtin_minpoly, builtin_names, parse_automaton};
pub use transform::{
    compose, dual, mirror, pack_config, product, rescale, shift_config, unpack_config,
    verify_linear_embedding, Rescaling,
};

use crate::algebra::{LaurentMat, Mat, Scalar};
use crate::Error;

/// Configuration equal to `background` outside a finite set of cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config<T> {
    background: T,
    cells: BTreeMap<i64, T>,
}

impl<T: Clone + Eq> Config<T> {
    pub fn new(background: T) -> Self {
        Config {
            background,
            cells: BTreeMap::new(),
        }
    }

    pub fn background(&self) -> &T {
        &self.background
    }

    pub fn get(&self, x: i64) -> &T {
        self.cells.get(&x).unwrap_or(&self.background)
    }

    pub fn set(&mut self, x: i64, v: T) {
        if v == self.background {
            self.cells.remove(&x);
        } else {
            self.cells.insert(x, v);
        }
    }

    pub fn with(mut self, x: i64, v: T) -> Self {
        self.set(x, v);
        self
    }

    /// Cells differing from the background, in increasing position.
    pub fn cells(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        self.cells.iter().map(|(&x, v)| (x, v))
    }

    pub fn span(&self) -> Option<(i64, i64)> {
        let lo = *self.cells.keys().next()?;
        let hi = *self.cells.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn is_background(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Configuration of a linear CA: a finitely supported map `ℤ → Z_p^d`.
pub type LinConfig<S> = Config<Vec<S>>;

pub fn zero_config<S: Scalar>(d: usize) -> LinConfig<S> {
    Config::new(vec![S::zero(); d])
}

/// Unit vector `e_i` at the origin.
pub fn spike<S: Scalar>(d: usize, i: usize) -> LinConfig<S> {
    let mut v = vec![S::zero(); d];
    v[i] = S::one();
    zero_config(d).with(0, v)
}

pub fn add_configs<S: Scalar>(a: &LinConfig<S>, b: &LinConfig<S>) -> LinConfig<S> {
    let mut out = a.clone();
    for (x, v) in b.cells() {
        let s: Vec<S> = out.get(x).iter().zip(v).map(|(&p, &q)| p + q).collect();
        out.set(x, s);
    }
    out
}

/// CA over `Z_p^d` given by its symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCA<S> {
    symbol: LaurentMat<S>,
}

impl<S: Scalar> LinearCA<S> {
    pub fn new(symbol: LaurentMat<S>) -> Self {
        LinearCA { symbol }
    }

    pub fn symbol(&self) -> &LaurentMat<S> {
        &self.symbol
    }

    pub fn dim(&self) -> usize {
        self.symbol.dim()
    }

    /// `F(c)_x = Σ_e M_e · c(x + e)`.
    pub fn step(&self, c: &LinConfig<S>) -> LinConfig<S> {
        Self::apply_symbol(&self.symbol, c)
    }

    pub fn iterate(&self, c: &LinConfig<S>, t: u64) -> LinConfig<S> {
        let mut cur = c.clone();
        for _ in 0..t {
            cur = self.step(&cur);
        }
        cur
    }

    fn apply_symbol(sym: &LaurentMat<S>, c: &LinConfig<S>) -> LinConfig<S> {
        let d = sym.dim();
        let mut acc: BTreeMap<i64, Vec<S>> = BTreeMap::new();
        for (pos, v) in c.cells() {
            for (e, m) in sym.terms() {
                let slot = acc.entry(pos - e).or_insert_with(|| vec![S::zero(); d]);
                for (i, out) in slot.iter_mut().enumerate() {
                    for (j, &vj) in v.iter().enumerate() {
                        *out += m.get(i, j) * vj;
                    }
                }
            }
        }
        let mut out = zero_config(d);
        for (x, v) in acc {
            out.set(x, v);
        }
        out
    }

    /// The same automaton as an explicit rule table over `p^d` states.
    pub fn to_table(&self, budget: u128) -> Result<GeneralCA, Error> {
        let p = S::MODULUS as u128;
        let d = self.dim();
        let q = p.pow(d as u32);
        let mut nb = self.symbol.support();
        if nb.is_empty() {
            nb.push(0);
        }
        let size = q.checked_pow(nb.len() as u32).unwrap_or(u128::MAX);
        if size > budget || q > u32::MAX as u128 {
            return Err(Error::Budget {
                needed: size,
                budget,
            });
        }
        let q = q as u32;
        let mats: Vec<Mat<S>> = nb.iter().map(|&e| self.symbol.coeff(e)).collect();
        let mut table = Vec::with_capacity(size as usize);
        for idx in 0..size as u64 {
            let word = GeneralCA::decode_word(idx, q, nb.len());
            let mut out = vec![S::zero(); d];
            for (m, &w) in mats.iter().zip(&word) {
                let v = decode_vec::<S>(w, d);
                for (i, o) in out.iter_mut().enumerate() {
                    for (j, &vj) in v.iter().enumerate() {
                        *o += m.get(i, j) * vj;
                    }
                }
            }
            table.push(encode_vec(&out));
        }
        GeneralCA::new(q, nb, table)
    }
}

/// `Σ v_i p^i`.
pub fn encode_vec<S: Scalar>(v: &[S]) -> u32 {
    v.iter()
        .rev()
        .fold(0u32, |acc, s| acc * S::MODULUS + s.residue())
}

pub fn decode_vec<S: Scalar>(mut code: u32, d: usize) -> Vec<S> {
    let mut v = Vec::with_capacity(d);
    for _ in 0..d {
        v.push(S::from_u64((code % S::MODULUS) as u64));
        code /= S::MODULUS;
    }
    v
}

/// CA over `{0, …, q-1}` given by a complete rule table.
///
/// The table index of a neighbourhood word `w_0 … w_{k-1}` is
/// `Σ w_i q^{k-1-i}`, with `w_i` read at offset `neighborhood[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralCA {
    q: u32,
    neighborhood: Vec<i64>,
    table: Vec<u32>,
}

impl GeneralCA {
    pub fn new(q: u32, neighborhood: Vec<i64>, table: Vec<u32>) -> Result<Self, Error> {
        if q < 1 {
            return Err(Error::Invalid("alphabet must be nonempty".into()));
        }
        if neighborhood.is_empty() {
            return Err(Error::Invalid("neighbourhood must be nonempty".into()));
        }
        if neighborhood.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("neighbourhood offsets must be strictly increasing".into()));
        }
        let expected = (q as u128).checked_pow(neighborhood.len() as u32);
        if expected != Some(table.len() as u128) {
            return Err(Error::Invalid(format!(
                "rule table has {} entries, expected q^|N|",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&s| s >= q) {
            return Err(Error::Invalid(format!("rule table state {bad} out of range")));
        }
        Ok(GeneralCA {
            q,
            neighborhood,
            table,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn neighborhood(&self) -> &[i64] {
        &self.neighborhood
    }

    pub fn decode_word(mut idx: u64, q: u32, len: usize) -> Vec<u32> {
        let mut w = vec![0u32; len];
        for slot in w.iter_mut().rev() {
            *slot = (idx % q as u64) as u32;
            idx /= q as u64;
        }
        w
    }

    pub fn local(&self, word: &[u32]) -> u32 {
        let idx = word
            .iter()
            .fold(0usize, |acc, &s| acc * self.q as usize + s as usize);
        self.table[idx]
    }

    pub fn is_quiescent(&self, s: u32) -> bool {
        self.local(&vec![s; self.neighborhood.len()]) == s
    }

    pub fn step(&self, c: &Config<u32>) -> Result<Config<u32>, Error> {
        let bg = *c.background();
        if bg >= self.q || !self.is_quiescent(bg) {
            return Err(Error::Precondition(format!("background {bg} is not quiescent")));
        }
        let mut out = Config::new(bg);
        let Some((lo, hi)) = c.span() else {
            return Ok(out);
        };
        if let Some((_, &s)) = c.cells().find(|(_, &s)| s >= self.q) {
            return Err(Error::OutOfRange(format!("state {s} with alphabet size {}", self.q)));
        }
        let nmin = self.neighborhood[0];
        let nmax = *self.neighborhood.last().unwrap();
        let mut word = vec![0u32; self.neighborhood.len()];
        for x in (lo - nmax)..=(hi - nmin) {
            for (slot, &e) in word.iter_mut().zip(&self.neighborhood) {
                *slot = *c.get(x + e);
            }
            out.set(x, self.local(&word));
        }
        Ok(out)
    }

    /// Binary AND on the neighbourhood `{0, 1}`: a standard non-surjective rule.
    pub fn and() -> Self {
        GeneralCA::new(2, vec![0, 1], vec![0, 0, 0, 1]).expect("valid table")
    }
}

/// Either kind of automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomatonDef<S> {
    Linear(LinearCA<S>),
    General(GeneralCA),
}

impl<S: Scalar> AutomatonDef<S> {
    pub fn as_linear(&self) -> Option<&LinearCA<S>> {
        match self {
            AutomatonDef::Linear(l) => Some(l),
            AutomatonDef::General(_) => None,
        }
    }

    pub fn linear(self) -> Result<LinearCA<S>, Error> {
        match self {
            AutomatonDef::Linear(l) => Ok(l),
            AutomatonDef::General(_) => Err(Error::Invalid("expected a linear automaton".into())),
        }
    }

    /// Table form, converting linear automata when needed.
    pub fn to_general(&self, budget: u128) -> Result<GeneralCA, Error> {
        match self {
            AutomatonDef::Linear(l) => l.to_table(budget),
            AutomatonDef::General(g) => Ok(g.clone()),
        }
    }
}

impl<S: Scalar> From<LinearCA<S>> for AutomatonDef<S> {
    fn from(l: LinearCA<S>) -> Self {
        AutomatonDef::Linear(l)
    }
}
