//! Named automata and a small expression language over them.
//!
//! ```text
//! expr := term ('*' term)*            direct product
//! term := name | name '(' arg (',' arg)* ')'
//! arg  := expr | integer
//! ```
//!
//! Names: `theta`, `theta_inv`, `gamma`, `gamma_inv`, `xor`, `nil`, `and`,
//! `identity` or `identity(d)`, `shift(z)`, `mirror(e)`, `dual(e)`, `compose(e, …)`,
//! `pow(e, t)`, `rescale(e, m, t, z)`.

use super::transform::{compose, dual, mirror, product, rescale, shift_symbol, Rescaling};
use super::{AutomatonDef, GeneralCA, LinearCA};
use crate::algebra::{LaurentMat, Mat, MinPoly, Scalar, ScalarLaurent};
use crate::Error;

pub fn builtin_names() -> &'static [&'static str] {
    &[
        "theta",
        "theta_inv",
        "gamma",
        "gamma_inv",
        "xor",
        "nil",
        "and",
        "identity(d)",
        "shift(z)",
    ]
}

fn sym<S: Scalar, const D: usize>(terms: &[(i64, [[i64; D]; D])]) -> LaurentMat<S> {
    LaurentMat::from_terms(D, terms.iter().map(|(e, m)| (*e, Mat::from_rows(m))))
}

fn theta<S: Scalar>() -> LaurentMat<S> {
    sym(&[
        (-1, [[0, 0], [0, 1]]),
        (0, [[0, 1], [1, 1]]),
        (1, [[0, 0], [0, 1]]),
    ])
}

fn gamma<S: Scalar>() -> LaurentMat<S> {
    sym(&[
        (0, [[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
        (1, [[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
    ])
}

fn named<S: Scalar>(name: &str) -> Result<AutomatonDef<S>, Error> {
    let two = S::MODULUS == 2;
    let l = match name {
        "theta" => theta(),
        "theta_inv" if two => sym(&[
            (-1, [[1, 0], [0, 0]]),
            (0, [[1, 1], [1, 0]]),
            (1, [[1, 0], [0, 0]]),
        ]),
        "theta_inv" => theta::<S>().invert()?,
        "gamma" => gamma(),
        "gamma_inv" if two => sym(&[
            (0, [[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
            (1, [[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
            (2, [[1, 0, 0], [0, 0, 0], [0, 0, 0]]),
        ]),
        "gamma_inv" => gamma::<S>().invert()?,
        "xor" => sym(&[(-1, [[1]]), (0, [[1]])]),
        "nil" => sym(&[(1, [[0, 1], [0, 0]])]),
        "and" => return Ok(AutomatonDef::General(GeneralCA::and())),
        _ => return Err(Error::UnknownAutomaton(name.to_string())),
    };
    Ok(AutomatonDef::Linear(LinearCA::new(l)))
}

/// Minimal polynomials of the builtins that have one on record.
pub fn builtin_minpoly<S: Scalar>(name: &str) -> Option<MinPoly<S>> {
    let sl = |t: &[i64]| ScalarLaurent::<S>::from_terms(t.iter().map(|&e| (e, 1)));
    let lower = match name {
        // X³ + X² + (1+u²)X + 1
        "gamma" => vec![sl(&[0]), sl(&[0, 2]), sl(&[0])],
        // X³ + (1+u²)X² + X + 1
        "gamma_inv" => vec![sl(&[0]), sl(&[0]), sl(&[0, 2])],
        // X² + (u⁻¹+1+u)X + 1
        "theta" | "theta_inv" => vec![sl(&[0]), sl(&[-1, 0, 1])],
        "xor" => vec![-&sl(&[-1, 0])],
        _ => return None,
    };
    if S::MODULUS != 2 && name != "xor" {
        return None;
    }
    MinPoly::new(lower).ok()
}

pub fn builtin<S: Scalar>(name: &str) -> Result<AutomatonDef<S>, Error> {
    parse_automaton(name)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Star,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, Error> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '-' | '0'..='9' => {
                let start = i;
                i += 1;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = cs[start..i].iter().collect();
                let v = text
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad integer `{text}`")))?;
                out.push(Tok::Int(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(cs[start..i].iter().collect()));
            }
            other => return Err(Error::Invalid(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

enum Arg<S> {
    Ca(AutomatonDef<S>),
    Int(i64),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr<S: Scalar>(&mut self) -> Result<AutomatonDef<S>, Error> {
        let mut acc = self.term()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.term::<S>()?;
            acc = AutomatonDef::Linear(product(&acc.linear()?, &rhs.linear()?));
        }
        Ok(acc)
    }

    fn arg<S: Scalar>(&mut self) -> Result<Arg<S>, Error> {
        if let Some(Tok::Int(v)) = self.peek() {
            let v = *v;
            self.pos += 1;
            return Ok(Arg::Int(v));
        }
        Ok(Arg::Ca(self.expr()?))
    }

    fn term<S: Scalar>(&mut self) -> Result<AutomatonDef<S>, Error> {
        let name = match self.next() {
            Some(Tok::Ident(n)) => n,
            t => return Err(Error::Invalid(format!("expected a name, found {t:?}"))),
        };
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            loop {
                args.push(self.arg::<S>()?);
                match self.next() {
                    Some(Tok::Comma) => continue,
                    Some(Tok::RParen) => break,
                    t => return Err(Error::Invalid(format!("expected `,` or `)`, found {t:?}"))),
                }
            }
        }
        apply(&name, args)
    }
}

fn int_arg<S>(a: &Arg<S>, what: &str) -> Result<i64, Error> {
    match a {
        Arg::Int(v) => Ok(*v),
        Arg::Ca(_) => Err(Error::Invalid(format!("{what}: expected an integer"))),
    }
}

fn ca_arg<S: Scalar>(a: Arg<S>, what: &str) -> Result<LinearCA<S>, Error> {
    match a {
        Arg::Ca(c) => c.linear(),
        Arg::Int(_) => Err(Error::Invalid(format!("{what}: expected an automaton"))),
    }
}

fn apply<S: Scalar>(name: &str, args: Vec<Arg<S>>) -> Result<AutomatonDef<S>, Error> {
    let arity = |n: usize| -> Result<(), Error> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{name} takes {n} argument(s), got {}", args.len())))
        }
    };
    let lin = |l: LinearCA<S>| Ok(AutomatonDef::Linear(l));
    match name {
        "identity" => {
            // Bare `identity` is the one-component identity.
            let d = if args.is_empty() { 1 } else { arity(1)?; int_arg(&args[0], name)? };
            if d < 1 {
                return Err(Error::Invalid("identity dimension must be positive".into()));
            }
            lin(LinearCA::new(LaurentMat::identity(d as usize)))
        }
        "shift" => {
            arity(1)?;
            lin(LinearCA::new(shift_symbol(1, int_arg(&args[0], name)?)))
        }
        "mirror" | "dual" => {
            arity(1)?;
            let f = ca_arg(args.into_iter().next().unwrap(), name)?;
            lin(if name == "mirror" { mirror(&f) } else { dual(&f)? })
        }
        "compose" => {
            if args.is_empty() {
                return Err(Error::Invalid("compose needs at least one automaton".into()));
            }
            let mut it = args.into_iter();
            let mut acc = ca_arg(it.next().unwrap(), name)?;
            for a in it {
                acc = compose(&acc, &ca_arg(a, name)?)?;
            }
            lin(acc)
        }
        "pow" => {
            arity(2)?;
            let t = int_arg(&args[1], name)?;
            if t < 0 {
                return Err(Error::Invalid("pow exponent must be nonnegative".into()));
            }
            let f = ca_arg(args.into_iter().next().unwrap(), name)?;
            lin(LinearCA::new(f.symbol().pow(t as u64)))
        }
        "rescale" => {
            arity(4)?;
            let m = int_arg(&args[1], name)?;
            let t = int_arg(&args[2], name)?;
            let z = int_arg(&args[3], name)?;
            if m < 1 || t < 1 {
                return Err(Error::Invalid("rescale needs m >= 1 and t >= 1".into()));
            }
            let f = ca_arg(args.into_iter().next().unwrap(), name)?;
            lin(rescale(&f, Rescaling { m: m as usize, t: t as u64, z })?)
        }
        _ => {
            arity(0)?;
            named(name)
        }
    }
}

/// Parses an automaton expression such as `gamma*theta` or `dual(gamma)`.
pub fn parse_automaton<S: Scalar>(text: &str) -> Result<AutomatonDef<S>, Error> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Invalid(format!("trailing input in `{text}`")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Gf2, Gf3};

    #[test]
    fn printed_inverses_are_inverses() {
        for (a, b) in [("theta", "theta_inv"), ("gamma", "gamma_inv")] {
            let f = builtin::<Gf2>(a).unwrap().linear().unwrap();
            let g = builtin::<Gf2>(b).unwrap().linear().unwrap();
            assert!((f.symbol() * g.symbol()).is_identity());
            assert_eq!(&f.symbol().invert().unwrap(), g.symbol());
        }
    }

    #[test]
    fn minpolys_annihilate() {
        for n in ["gamma", "gamma_inv", "theta", "theta_inv", "xor"] {
            let f = builtin::<Gf2>(n).unwrap().linear().unwrap();
            assert!(builtin_minpoly::<Gf2>(n).unwrap().annihilates(f.symbol()), "{n}");
        }
    }

    #[test]
    fn expressions() {
        let p = builtin::<Gf2>("gamma * theta").unwrap().linear().unwrap();
        assert_eq!(p.dim(), 5);
        let c = builtin::<Gf2>("compose(shift(1), xor)").unwrap().linear().unwrap();
        assert_eq!(c.symbol().support(), vec![-2, -1]);
        let r = builtin::<Gf2>("rescale(xor, 2, 1, 0)").unwrap().linear().unwrap();
        assert_eq!(r.dim(), 2);
        assert!(builtin::<Gf2>("and").unwrap().as_linear().is_none());
    }

    #[test]
    fn odd_characteristic_inverses() {
        let g = builtin::<Gf3>("gamma").unwrap().linear().unwrap();
        let gi = builtin::<Gf3>("gamma_inv").unwrap().linear().unwrap();
        assert!((g.symbol() * gi.symbol()).is_identity());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(builtin::<Gf2>("nope"), Err(Error::UnknownAutomaton(_))));
        assert!(builtin::<Gf2>("shift(").is_err());
        assert!(builtin::<Gf2>("gamma)").is_err());
        assert!(builtin::<Gf2>("identity(0)").is_err());
        assert!(builtin::<Gf2>("dual(xor)").is_err());
        assert!(builtin::<Gf2>("gamma*and").is_err());
    }
}
