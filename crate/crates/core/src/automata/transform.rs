use std::collections::BTreeMap;

use super::{zero_config, LinConfig, LinearCA};
use crate::algebra::{LaurentMat, Mat, Scalar, ScalarLaurent};
use crate::Error;

/// Parameters of `b_m ∘ σ_z ∘ F^t ∘ b_m⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rescaling {
    pub m: usize,
    pub t: u64,
    pub z: i64,
}

impl Default for Rescaling {
    fn default() -> Self {
        Rescaling { m: 1, t: 1, z: 0 }
    }
}

/// Symbol of the rescaled automaton on blocks of `m` cells.
///
/// With `S' = u^{-z} S^t`, block `(i, j)` of the coefficient at `E` is
/// `S'_{mE + j - i}`.
pub fn rescale<S: Scalar>(f: &LinearCA<S>, r: Rescaling) -> Result<LinearCA<S>, Error> {
    if r.m == 0 || r.t == 0 {
        return Err(Error::Invalid("rescaling needs m >= 1 and t >= 1".into()));
    }
    let d = f.dim();
    let m = r.m as i64;
    let base = f.symbol().pow(r.t).shift_exponents(-r.z);
    let mut coeffs: BTreeMap<i64, Mat<S>> = BTreeMap::new();
    for (e, mat) in base.terms() {
        for i in 0..m {
            let s = i + e;
            let big_e = s.div_euclid(m);
            let j = s.rem_euclid(m);
            coeffs
                .entry(big_e)
                .or_insert_with(|| Mat::zeros(d * r.m, d * r.m))
                .put_block(i as usize * d, j as usize * d, mat);
        }
    }
    Ok(LinearCA::new(LaurentMat::from_terms(d * r.m, coeffs)))
}

/// `b_m`: groups cells `mX .. mX+m-1` into one block.
pub fn pack_config<S: Scalar>(c: &LinConfig<S>, m: usize) -> LinConfig<S> {
    let d = c.background().len();
    let mi = m as i64;
    let mut blocks: BTreeMap<i64, Vec<S>> = BTreeMap::new();
    for (x, v) in c.cells() {
        let big = x.div_euclid(mi);
        let j = x.rem_euclid(mi) as usize;
        let slot = blocks.entry(big).or_insert_with(|| vec![S::zero(); d * m]);
        slot[j * d..(j + 1) * d].copy_from_slice(v);
    }
    let mut out = zero_config(d * m);
    for (x, v) in blocks {
        out.set(x, v);
    }
    out
}

pub fn unpack_config<S: Scalar>(c: &LinConfig<S>, m: usize) -> LinConfig<S> {
    let d = c.background().len() / m;
    let mut out = zero_config(d);
    for (big, v) in c.cells() {
        for j in 0..m {
            out.set(big * m as i64 + j as i64, v[j * d..(j + 1) * d].to_vec());
        }
    }
    out
}

/// `σ_z(c)_x = c_{x-z}`.
pub fn shift_config<S: Scalar>(c: &LinConfig<S>, z: i64) -> LinConfig<S> {
    let mut out = zero_config(c.background().len());
    for (x, v) in c.cells() {
        out.set(x + z, v.clone());
    }
    out
}

/// Direct product: block-diagonal symbol on `Z_p^{d_a + d_b}`.
pub fn product<S: Scalar>(a: &LinearCA<S>, b: &LinearCA<S>) -> LinearCA<S> {
    let (da, db) = (a.dim(), b.dim());
    let mut coeffs: BTreeMap<i64, Mat<S>> = BTreeMap::new();
    for (e, m) in a.symbol().terms() {
        coeffs
            .entry(e)
            .or_insert_with(|| Mat::zeros(da + db, da + db))
            .put_block(0, 0, m);
    }
    for (e, m) in b.symbol().terms() {
        coeffs
            .entry(e)
            .or_insert_with(|| Mat::zeros(da + db, da + db))
            .put_block(da, da, m);
    }
    LinearCA::new(LaurentMat::from_terms(da + db, coeffs))
}

/// `a ∘ b`.
pub fn compose<S: Scalar>(a: &LinearCA<S>, b: &LinearCA<S>) -> Result<LinearCA<S>, Error> {
    Ok(LinearCA::new(a.symbol().try_mul(b.symbol())?))
}

pub fn mirror<S: Scalar>(f: &LinearCA<S>) -> LinearCA<S> {
    LinearCA::new(f.symbol().mirror())
}

/// `mir ∘ F⁻¹ ∘ mir`.
pub fn dual<S: Scalar>(f: &LinearCA<S>) -> Result<LinearCA<S>, Error> {
    Ok(LinearCA::new(f.symbol().invert()?.mirror()))
}

/// Checks `φ · S_a = S_g · φ` for an injective `φ : Z_p^{d_a} → Z_p^{d_g}`.
pub fn verify_linear_embedding<S: Scalar>(
    a: &LinearCA<S>,
    g: &LinearCA<S>,
    phi: &Mat<S>,
) -> Result<bool, Error> {
    if phi.rows() != g.dim() || phi.cols() != a.dim() {
        return Err(Error::Invalid(format!(
            "embedding must be {}x{}, got {}x{}",
            g.dim(),
            a.dim(),
            phi.rows(),
            phi.cols()
        )));
    }
    if phi.rank() != a.dim() {
        return Err(Error::Invalid("embedding is not injective".into()));
    }
    let mut exps: Vec<i64> = a.symbol().support();
    exps.extend(g.symbol().support());
    exps.sort_unstable();
    exps.dedup();
    Ok(exps.into_iter().all(|e| {
        phi.mul_mat(&a.symbol().coeff(e)) == g.symbol().coeff(e).mul_mat(phi)
    }))
}

/// `u^{-z} I_d`, the symbol of `σ_z`.
pub(crate) fn shift_symbol<S: Scalar>(d: usize, z: i64) -> LaurentMat<S> {
    LaurentMat::from_scalar(d, &ScalarLaurent::monomial(S::one(), -z))
}
