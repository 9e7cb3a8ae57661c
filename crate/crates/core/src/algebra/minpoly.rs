//! Monic polynomials over `Z_p[u, u⁻¹]` and arithmetic in their quotient rings.

use std::fmt;

use super::laurent::{LaurentMat, ScalarLaurent};
use super::scalar::Scalar;
use crate::Error;

/// `X^D + c_{D-1} X^{D-1} + … + c_0`.
#[derive(Clone, PartialEq, Eq)]
pub struct MinPoly<S> {
    lower: Vec<ScalarLaurent<S>>,
}

impl<S: Scalar> MinPoly<S> {
    /// `lower[j]` is the coefficient of `X^j`; the leading coefficient is implicit.
    pub fn new(lower: Vec<ScalarLaurent<S>>) -> Result<Self, Error> {
        if lower.is_empty() {
            return Err(Error::Invalid("minimal polynomial must have degree at least 1".into()));
        }
        Ok(MinPoly { lower })
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn coeff(&self, j: usize) -> &ScalarLaurent<S> {
        &self.lower[j]
    }

    pub fn lower(&self) -> &[ScalarLaurent<S>] {
        &self.lower
    }

    /// Evaluates the polynomial at a symbol and tests for zero.
    pub fn annihilates(&self, f: &LaurentMat<S>) -> bool {
        let d = f.dim();
        let mut power = LaurentMat::identity(d);
        let mut acc = LaurentMat::zero(d);
        for c in &self.lower {
            acc = &acc + &power.scale(c);
            power = &power * f;
        }
        (&acc + &power).is_zero()
    }

    /// `X^y mod self`, as the coefficient vector of `1, X, …, X^{D-1}`.
    pub fn x_pow_mod(&self, mut y: u64) -> Vec<ScalarLaurent<S>> {
        let dd = self.degree();
        let mut acc = vec![ScalarLaurent::zero(); dd];
        acc[0] = ScalarLaurent::one();
        let mut base = vec![ScalarLaurent::zero(); dd];
        if dd == 1 {
            base[0] = -&self.lower[0];
        } else {
            base[1] = ScalarLaurent::one();
        }
        while y > 0 {
            if y & 1 == 1 {
                acc = self.mul_mod(&acc, &base);
            }
            y >>= 1;
            if y > 0 {
                base = self.mul_mod(&base, &base);
            }
        }
        acc
    }

    pub fn mul_mod(&self, a: &[ScalarLaurent<S>], b: &[ScalarLaurent<S>]) -> Vec<ScalarLaurent<S>> {
        let dd = self.degree();
        let mut prod = vec![ScalarLaurent::zero(); 2 * dd - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                prod[i + j] = &prod[i + j] + &(ai * bj);
            }
        }
        for k in (dd..prod.len()).rev() {
            let lead = std::mem::replace(&mut prod[k], ScalarLaurent::zero());
            if lead.is_zero() {
                continue;
            }
            // X^k = -Σ c_j X^{k-D+j}
            for j in 0..dd {
                let t = &lead * &self.lower[j];
                prod[k - dd + j] = &prod[k - dd + j] - &t;
            }
        }
        prod.truncate(dd);
        prod
    }
}

impl<S: Scalar> fmt::Display for MinPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^{}", self.degree())?;
        for j in (0..self.degree()).rev() {
            let c = &self.lower[j];
            if c.is_zero() {
                continue;
            }
            let paren = c.terms().count() > 1;
            let cs = if paren { format!("({c})") } else { c.to_string() };
            match j {
                0 => write!(f, "+{cs}")?,
                1 if cs == "1" => write!(f, "+X")?,
                1 => write!(f, "+{cs}X")?,
                _ if cs == "1" => write!(f, "+X^{j}")?,
                _ => write!(f, "+{cs}X^{j}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for MinPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::Mat;
    use crate::algebra::scalar::Zp;

    type S2 = Zp<2>;

    fn sl(t: &[i64]) -> ScalarLaurent<S2> {
        ScalarLaurent::from_terms(t.iter().map(|&e| (e, 1)))
    }

    #[test]
    fn identity_satisfies_x_plus_one() {
        let m = MinPoly::new(vec![sl(&[0])]).unwrap();
        assert!(m.annihilates(&LaurentMat::<S2>::identity(3)));
    }

    #[test]
    fn x_pow_mod_matches_direct_powers() {
        // X^2 + (u^-1 + 1 + u) X + 1
        let m = MinPoly::new(vec![sl(&[0]), sl(&[-1, 0, 1])]).unwrap();
        let theta = LaurentMat::<S2>::from_terms(
            2,
            [
                (0, Mat::from_rows(&[[0, 1], [1, 1]])),
                (1, Mat::from_rows(&[[0, 0], [0, 1]])),
                (-1, Mat::from_rows(&[[0, 0], [0, 1]])),
            ],
        );
        assert!(m.annihilates(&theta));
        for y in 0..20 {
            let r = m.x_pow_mod(y);
            let rebuilt = &LaurentMat::identity(2).scale(&r[0]) + &theta.scale(&r[1]);
            assert_eq!(rebuilt, theta.pow(y), "y = {y}");
        }
    }

    #[test]
    fn display() {
        let m = MinPoly::new(vec![sl(&[0]), sl(&[0, 2]), sl(&[0])]).unwrap();
        assert_eq!(m.to_string(), "X^3+X^2+(1+u^2)X+1");
    }

    #[test]
    fn rejects_degree_zero() {
        assert!(MinPoly::<S2>::new(vec![]).is_err());
    }
}
