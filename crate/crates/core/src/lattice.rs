//! Sublattices of Z^m given by generating rows: Hermite normal form, index,
//! membership, diagonal detection and the mod-2 commutator parity form.

use std::fmt;

use crate::element::TranslationVector;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticeBasis {
    dim: usize,
    rows: Vec<TranslationVector>,
}

struct Reduced {
    /// Nonzero HNF rows, upper triangular in echelon form.
    h: Vec<Vec<i128>>,
    /// Column of each pivot.
    pivots: Vec<usize>,
    /// Transform rows: h[i] = Σ_j u[i][j] * rows[j].
    u: Vec<Vec<i128>>,
}

impl LatticeBasis {
    pub fn new(dim: usize, rows: Vec<TranslationVector>) -> Result<Self> {
        for r in &rows {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch { left: r.dim(), right: dim });
            }
        }
        Ok(LatticeBasis { dim, rows })
    }

    pub fn diagonal(c: &[i64]) -> Self {
        let m = c.len();
        let rows = (0..m)
            .map(|i| {
                let mut v = vec![0; m];
                v[i] = c[i];
                TranslationVector(v)
            })
            .collect();
        LatticeBasis { dim: m, rows }
    }

    pub fn standard(dim: usize) -> Self {
        Self::diagonal(&vec![1; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[TranslationVector] {
        &self.rows
    }

    /// Parses `2,0;0,3`.
    pub fn parse(s: &str) -> Result<Self> {
        let rows = s.split(';').map(|r| TranslationVector::parse(r.trim())).collect::<Result<Vec<_>>>()?;
        let dim = rows.first().map(|r| r.dim()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::Parse(format!("empty lattice basis {s:?}")));
        }
        Self::new(dim, rows)
    }

    fn reduce(&self) -> Reduced {
        let r = self.rows.len();
        let mut a: Vec<Vec<i128>> = self.rows.iter().map(|v| v.0.iter().map(|&x| x as i128).collect()).collect();
        let mut u: Vec<Vec<i128>> = (0..r).map(|i| (0..r).map(|j| i128::from(i == j)).collect()).collect();
        let mut pivots = Vec::new();
        let mut p = 0;
        for col in 0..self.dim {
            if p == r {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for i in p..r {
                    if a[i][col] != 0 && best.map_or(true, |b| a[i][col].abs() < a[b][col].abs()) {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                a.swap(p, b);
                u.swap(p, b);
                let mut done = true;
                for i in p + 1..r {
                    if a[i][col] != 0 {
                        let q = a[i][col].div_euclid(a[p][col]);
                        for j in 0..self.dim {
                            a[i][j] -= q * a[p][j];
                        }
                        for j in 0..r {
                            u[i][j] -= q * u[p][j];
                        }
                        if a[i][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if a[p][col] == 0 {
                continue;
            }
            if a[p][col] < 0 {
                a[p].iter_mut().for_each(|x| *x = -*x);
                u[p].iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..p {
                let q = a[i][col].div_euclid(a[p][col]);
                if q != 0 {
                    for j in 0..self.dim {
                        a[i][j] -= q * a[p][j];
                    }
                    for j in 0..r {
                        u[i][j] -= q * u[p][j];
                    }
                }
            }
            pivots.push(col);
            p += 1;
        }
        a.truncate(p);
        u.truncate(p);
        Reduced { h: a, pivots, u }
    }

    pub fn rank(&self) -> usize {
        self.reduce().pivots.len()
    }

    /// Row-style Hermite normal form: upper triangular, positive pivots,
    /// entries above a pivot in [0, pivot).
    pub fn hnf(&self) -> LatticeBasis {
        let rows =
            self.reduce().h.into_iter().map(|r| TranslationVector(r.into_iter().map(|x| x as i64).collect())).collect();
        LatticeBasis { dim: self.dim, rows }
    }

    /// `None` for infinite index.
    pub fn index(&self) -> Option<u64> {
        let red = self.reduce();
        if red.pivots.len() < self.dim {
            return None;
        }
        Some(red.h.iter().enumerate().map(|(i, r)| r[i] as u64).product())
    }

    pub fn has_finite_index(&self) -> bool {
        self.index().is_some()
    }

    fn require_finite(&self) -> Result<Reduced> {
        let red = self.reduce();
        if red.pivots.len() < self.dim {
            return Err(Error::Unsupported("lattice has infinite index".into()));
        }
        Ok(red)
    }

    fn solve(red: &Reduced, v: &TranslationVector) -> Option<Vec<i128>> {
        let mut rest: Vec<i128> = v.0.iter().map(|&x| x as i128).collect();
        let mut y = vec![0i128; red.h.len()];
        for (i, &col) in red.pivots.iter().enumerate() {
            let piv = red.h[i][col];
            if rest[col] % piv != 0 {
                return None;
            }
            y[i] = rest[col] / piv;
            for j in 0..rest.len() {
                rest[j] -= y[i] * red.h[i][j];
            }
        }
        rest.iter().all(|&x| x == 0).then_some(y)
    }

    pub fn contains(&self, v: &TranslationVector) -> Result<bool> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: v.dim(), right: self.dim });
        }
        let red = self.require_finite()?;
        Ok(Self::solve(&red, v).is_some())
    }

    /// Integer coefficients x with v = Σ x_i rows[i], if v lies in the lattice.
    pub fn coordinates(&self, v: &TranslationVector) -> Result<Option<Vec<i64>>> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: v.dim(), right: self.dim });
        }
        let red = self.require_finite()?;
        let Some(y) = Self::solve(&red, v) else { return Ok(None) };
        let mut x = vec![0i128; self.rows.len()];
        for (i, yi) in y.iter().enumerate() {
            for j in 0..self.rows.len() {
                x[j] += yi * red.u[i][j];
            }
        }
        Ok(Some(x.into_iter().map(|t| t as i64).collect()))
    }

    /// (c_2, ..., c_n) when the lattice equals the diagonal lattice they span.
    pub fn diagonal_form(&self) -> Result<Option<Vec<i64>>> {
        let red = self.require_finite()?;
        let index: i128 = red.h.iter().enumerate().map(|(i, r)| r[i]).product();
        let mut c = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            // the pivot of column i multiplied by the index always lies in L
            let mut k = 1i64;
            loop {
                let mut v = vec![0; self.dim];
                v[i] = k;
                if Self::solve(&red, &TranslationVector(v)).is_some() {
                    break;
                }
                k += 1;
            }
            c.push(k);
        }
        let prod: i128 = c.iter().map(|&x| x as i128).product();
        Ok((prod == index).then_some(c))
    }

    pub fn has_odd_pair(&self) -> bool {
        let r = &self.rows;
        (0..r.len()).any(|i| (i + 1..r.len()).any(|j| parity_form(&r[i], &r[j]).unwrap_or(0) == 1))
    }

    /// Least d with d·Z^m inside the lattice (the exponent of the quotient).
    pub fn exponent(&self) -> Result<i64> {
        let red = self.require_finite()?;
        let mut d = 1i64;
        loop {
            let all = (0..self.dim).all(|i| {
                let mut v = vec![0; self.dim];
                v[i] = d;
                Self::solve(&red, &TranslationVector(v)).is_some()
            });
            if all {
                return Ok(d);
            }
            d += 1;
        }
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, x) in r.0.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// B(v, w) = ((Σv)(Σw) + Σ v_i w_i) mod 2, the parity of [v̂, ŵ].
pub fn parity_form(v: &TranslationVector, w: &TranslationVector) -> Result<u8> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch { left: v.dim(), right: w.dim() });
    }
    let sv: i64 = v.0.iter().sum();
    let sw: i64 = w.0.iter().sum();
    let dot: i64 = v.0.iter().zip(&w.0).map(|(a, b)| a * b).sum();
    Ok((sv * sw + dot).rem_euclid(2) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(v: &[i64]) -> TranslationVector {
        TranslationVector(v.to_vec())
    }

    #[test]
    fn hnf_examples() {
        let l = LatticeBasis::parse("2,0;0,3").unwrap();
        assert_eq!(l.hnf().to_string(), "2,0;0,3");
        assert_eq!(l.index(), Some(6));
        let l = LatticeBasis::parse("1,1;1,-1").unwrap();
        assert_eq!(l.hnf().to_string(), "1,1;0,2");
        assert_eq!(l.index(), Some(2));
        let l = LatticeBasis::new(2, vec![tv(&[1, 0])]).unwrap();
        assert_eq!(l.index(), None);
        assert!(matches!(l.contains(&tv(&[1, 0])), Err(Error::Unsupported(_))));
    }

    #[test]
    fn membership_examples() {
        let l = LatticeBasis::parse("1,1;1,-1").unwrap();
        assert!(l.contains(&tv(&[2, 0])).unwrap());
        assert!(!l.contains(&tv(&[1, 0])).unwrap());
        assert!(l.contains(&tv(&[0, 0])).unwrap());
        assert_eq!(l.coordinates(&tv(&[2, 0])).unwrap(), Some(vec![1, 1]));
        assert_eq!(l.coordinates(&tv(&[3, 1])).unwrap(), Some(vec![2, 1]));
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(LatticeBasis::parse("2,0;0,3").unwrap().diagonal_form().unwrap(), Some(vec![2, 3]));
        assert_eq!(LatticeBasis::parse("1,1;0,2").unwrap().diagonal_form().unwrap(), None);
        assert_eq!(LatticeBasis::standard(3).diagonal_form().unwrap(), Some(vec![1, 1, 1]));
    }

    #[test]
    fn parity_form_examples() {
        assert_eq!(parity_form(&tv(&[1, 0]), &tv(&[0, 1])).unwrap(), 1);
        assert_eq!(parity_form(&tv(&[2, 0]), &tv(&[0, 1])).unwrap(), 0);
        assert_eq!(parity_form(&tv(&[1, 1]), &tv(&[1, -1])).unwrap(), 0);
        assert!(parity_form(&tv(&[1]), &tv(&[1, 0])).is_err());
    }

    #[test]
    fn odd_pairs() {
        assert!(LatticeBasis::diagonal(&[1, 1, 2]).has_odd_pair());
        assert!(!LatticeBasis::diagonal(&[2, 4]).has_odd_pair());
        assert!(!LatticeBasis::parse("1,1;1,-1").unwrap().has_odd_pair());
    }

    #[test]
    fn exponents() {
        assert_eq!(LatticeBasis::parse("1,1;1,-1").unwrap().exponent().unwrap(), 2);
        assert_eq!(LatticeBasis::diagonal(&[2, 3]).exponent().unwrap(), 6);
        assert_eq!(LatticeBasis::standard(2).exponent().unwrap(), 1);
    }
}
