//! Words in the generators g_k and inline finitary permutations.
//!
//! Grammar: letters `g2`, `g3^-2`, `p((1,1),(1,2))` or `p((1,1),(1,2))^3`,
//! separated by `*` or whitespace. The empty word is the identity.

use std::fmt;

use crate::element::HoughtonElement;
use crate::error::{Error, Result};
use crate::perm::{parse_ray_perm, RayPerm};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Symbol {
    Gen(usize),
    Perm(RayPerm),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Letter {
    pub symbol: Symbol,
    pub exp: i64,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.iter().any(|l| l.exp == 0) {
            return Err(Error::Parse("zero exponent in word".into()));
        }
        Ok(GroupWord { letters })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        let mut i = 0;
        let mut letters = Vec::new();
        let perr = |msg: &str, at: usize| Error::Parse(format!("{msg} at offset {at} in {s:?}"));
        while i < b.len() {
            let c = b[i];
            if c.is_ascii_whitespace() || c == b'*' {
                i += 1;
                continue;
            }
            let symbol = match c {
                b'g' => {
                    let start = i + 1;
                    i = start;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    let k = s[start..i].parse::<usize>().map_err(|_| perr("expected generator index", start))?;
                    Symbol::Gen(k)
                }
                b'p' => {
                    let start = i + 1;
                    if b.get(start) != Some(&b'(') {
                        return Err(perr("expected '(' after p", start));
                    }
                    // the permutation text runs while parentheses stay balanced
                    // or another cycle follows immediately
                    let mut depth = 0i32;
                    i = start;
                    loop {
                        match b.get(i) {
                            Some(b'(') => depth += 1,
                            Some(b')') => {
                                depth -= 1;
                                if depth == 0 && b.get(i + 1) != Some(&b'(') {
                                    i += 1;
                                    break;
                                }
                            }
                            Some(_) => {}
                            None => return Err(perr("unterminated permutation", start)),
                        }
                        i += 1;
                    }
                    Symbol::Perm(parse_ray_perm(&s[start..i])?)
                }
                _ => return Err(perr("unexpected character", i)),
            };
            let mut exp = 1i64;
            if b.get(i) == Some(&b'^') {
                let start = i + 1;
                i = start;
                if matches!(b.get(i), Some(b'-') | Some(b'+')) {
                    i += 1;
                }
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                exp = s[start..i].parse::<i64>().map_err(|_| perr("expected exponent", start))?;
            }
            if exp != 0 {
                letters.push(Letter { symbol, exp });
            }
        }
        Ok(GroupWord { letters })
    }

    pub fn eval(&self, n: usize) -> Result<HoughtonElement> {
        let mut acc = HoughtonElement::identity(n);
        for l in &self.letters {
            let x = match &l.symbol {
                Symbol::Gen(k) => HoughtonElement::generator_pow(n, *k, l.exp)?,
                Symbol::Perm(p) => HoughtonElement::from_finitary(n, &p.pow(l.exp))?,
            };
            acc = acc.mul(&x)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match &l.symbol {
                Symbol::Gen(k) => write!(f, "g{k}")?,
                Symbol::Perm(p) => write!(f, "p{p}")?,
            }
            if l.exp != 1 {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Point;

    #[test]
    fn empty_word_is_identity() {
        assert_eq!(GroupWord::parse("").unwrap().eval(3).unwrap(), HoughtonElement::identity(3));
        assert_eq!(GroupWord::parse("  ").unwrap().letters.len(), 0);
    }

    #[test]
    fn commutator_word() {
        let w = GroupWord::parse("g2^-1 g3^-1 g2 g3").unwrap();
        let c = w.eval(3).unwrap();
        assert_eq!(c.to_string(), "H[n=3; s=(0,0,0); {(1,1)->(1,2), (1,2)->(1,1)}]");
        let w2 = GroupWord::parse("g2^-1*g3^-1*g2*g3").unwrap();
        assert_eq!(w2, w);
    }

    #[test]
    fn inline_permutations() {
        let w = GroupWord::parse("p((1,1),(1,2)) g2").unwrap();
        let e = w.eval(2).unwrap();
        assert_eq!(e.eval(Point::new(1, 1)), Point::new(1, 3));
        let w = GroupWord::parse("p((1,1),(1,2))((2,3),(2,4))^-1*g3^2").unwrap();
        assert_eq!(w.letters.len(), 2);
        assert_eq!(w.letters[0].exp, -1);
        assert_eq!(w.to_string(), "p((1,1),(1,2))((2,3),(2,4))^-1 g3^2");
        assert_eq!(GroupWord::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn bad_words() {
        assert!(GroupWord::parse("h2").is_err());
        assert!(GroupWord::parse("g").is_err());
        assert!(GroupWord::parse("g2^").is_err());
        assert!(GroupWord::parse("p((1,1),(1,2)").is_err());
        assert!(matches!(GroupWord::parse("g5").unwrap().eval(3), Err(Error::GeneratorOutOfRange { .. })));
    }
}
