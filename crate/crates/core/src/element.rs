//! Elements of Houghton's group H_n: bijections of X_n = {1..n} x N that are
//! translations along every ray outside a finite set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::perm::{Parity, Point, RayPerm};

/// A vector of Z^{n-1}, indexed so that `0[j]` is the coefficient of e_{j+1}
/// (the image of g_{j+2} under pi).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct TranslationVector(pub Vec<i64>);

impl TranslationVector {
    pub fn zero(dim: usize) -> Self {
        TranslationVector(vec![0; dim])
    }

    /// The unit vector e_i, 1-based as in pi(g_{i+1}) = e_i.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i - 1] = 1;
        TranslationVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        TranslationVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Ok(TranslationVector(Vec::new()));
        }
        body.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(TranslationVector)
    }
}

impl fmt::Display for TranslationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl Add for &TranslationVector {
    type Output = TranslationVector;
    fn add(self, rhs: &TranslationVector) -> TranslationVector {
        TranslationVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TranslationVector {
    type Output = TranslationVector;
    fn sub(self, rhs: &TranslationVector) -> TranslationVector {
        TranslationVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &TranslationVector {
    type Output = TranslationVector;
    fn neg(self) -> TranslationVector {
        TranslationVector(self.0.iter().map(|a| -a).collect())
    }
}

/// Orbit structure of an element of H_n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitReport {
    pub infinite_orbit_count: usize,
    /// Cycles of length at least 2; every other point not on an infinite
    /// orbit is fixed.
    pub finite_cycles: Vec<Vec<Point>>,
}

/// An eventually-translation bijection of X_n.
///
/// Off the exception table the element acts as (i, m) -> (i, m + shifts[i-1]).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HoughtonElement {
    n: usize,
    shifts: Vec<i64>,
    table: BTreeMap<Point, Point>,
}

impl HoughtonElement {
    pub fn identity(n: usize) -> Self {
        HoughtonElement { n, shifts: vec![0; n], table: BTreeMap::new() }
    }

    pub fn generator(n: usize, k: usize) -> Result<Self> {
        Self::generator_pow(n, k, 1)
    }

    /// g_k^e, built in closed form.
    pub fn generator_pow(n: usize, k: usize, e: i64) -> Result<Self> {
        if n < 2 || k < 2 || k > n {
            return Err(Error::GeneratorOutOfRange { n, k });
        }
        let mut shifts = vec![0; n];
        shifts[0] = e;
        shifts[k - 1] = -e;
        let mut table = BTreeMap::new();
        let a = e.abs();
        for m in 1..=a {
            if e > 0 {
                // (k, m) runs down ray k and out along ray 1
                table.insert(Point::new(k, m), Point::new(1, a - m + 1));
            } else {
                table.insert(Point::new(1, m), Point::new(k, a - m + 1));
            }
        }
        Ok(HoughtonElement { n, shifts, table })
    }

    pub fn from_finitary(n: usize, perm: &RayPerm) -> Result<Self> {
        for x in perm.support() {
            x.check(n)?;
        }
        Ok(HoughtonElement { n, shifts: vec![0; n], table: perm.entries().clone() })
    }

    /// Validates and canonicalises shifts plus an exception table.
    pub fn from_parts(n: usize, shifts: Vec<i64>, table: BTreeMap<Point, Point>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidElement(format!("n = {n} < 2")));
        }
        if shifts.len() != n {
            return Err(Error::InvalidElement(format!("{} shifts given for {n} rays", shifts.len())));
        }
        if shifts.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidElement("shifts do not sum to zero".into()));
        }
        for (x, y) in &table {
            x.check(n)?;
            y.check(n)?;
        }
        let mut g = HoughtonElement { n, shifts, table };
        g.table = g.table.iter().filter(|(x, y)| g.background(**x) != **y).map(|(x, y)| (*x, *y)).collect();
        for ray in 1..=n {
            let s = g.shifts[ray - 1];
            for m in 1..=(-s) {
                if !g.table.contains_key(&Point::new(ray, m)) {
                    return Err(Error::InvalidElement(format!("({ray},{m}) would leave X_{n}")));
                }
            }
        }
        g.check_bijective()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn shift(&self, ray: usize) -> i64 {
        self.shifts[ray - 1]
    }

    pub fn table(&self) -> &BTreeMap<Point, Point> {
        &self.table
    }

    /// t_1: the eventual translation length along ray 1.
    pub fn t1(&self) -> i64 {
        self.shifts[0]
    }

    fn background(&self, x: Point) -> Point {
        Point::new(x.ray, x.index + self.shifts[x.ray - 1])
    }

    pub fn eval(&self, x: Point) -> Point {
        match self.table.get(&x) {
            Some(&y) => y,
            None => self.background(x),
        }
    }

    pub fn try_eval(&self, x: Point) -> Result<Point> {
        x.check(self.n)?;
        Ok(self.eval(x))
    }

    /// Points (ray, m) with m > bound(ray) are moved by pure translation and
    /// stay inside X_n.
    pub fn bound(&self, ray: usize) -> i64 {
        let top = self
            .table
            .range(Point::new(ray, i64::MIN)..=Point::new(ray, i64::MAX))
            .next_back()
            .map(|(x, _)| x.index)
            .unwrap_or(0);
        top.max(-self.shifts[ray - 1]).max(0)
    }

    pub fn bounds(&self) -> Vec<i64> {
        (1..=self.n).map(|r| self.bound(r)).collect()
    }

    /// All points inside the exceptional window.
    pub fn window(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for ray in 1..=self.n {
            for m in 1..=self.bound(ray) {
                out.push(Point::new(ray, m));
            }
        }
        out
    }

    fn check_bijective(&self) -> Result<()> {
        let bounds = self.bounds();
        let mut seen = BTreeSet::new();
        for x in self.window() {
            let y = self.eval(x);
            let limit = bounds[y.ray - 1] + self.shifts[y.ray - 1];
            if y.index < 1 || y.index > limit {
                return Err(Error::InvalidElement(format!("{x} -> {y} collides with the translated region")));
            }
            if !seen.insert(y) {
                return Err(Error::InvalidElement(format!("two points map to {y}")));
            }
        }
        Ok(())
    }

    /// Exhaustive bijectivity check on the exceptional window (used by tests).
    pub fn window_check(&self) -> Result<()> {
        if self.shifts.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidElement("shifts do not sum to zero".into()));
        }
        self.check_bijective()
    }

    fn same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Apply `self`, then `other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        let shifts: Vec<i64> = self.shifts.iter().zip(&other.shifts).map(|(a, b)| a + b).collect();
        let mut table = BTreeMap::new();
        for ray in 1..=self.n {
            let s = self.shifts[ray - 1];
            let top = self.bound(ray).max(other.bound(ray) - s);
            for m in 1..=top {
                let x = Point::new(ray, m);
                let y = other.eval(self.eval(x));
                if y != Point::new(ray, m + shifts[ray - 1]) {
                    table.insert(x, y);
                }
            }
        }
        Ok(HoughtonElement { n: self.n, shifts, table })
    }

    pub fn inv(&self) -> Self {
        let shifts: Vec<i64> = self.shifts.iter().map(|s| -s).collect();
        let table = self
            .table
            .iter()
            .filter(|(x, y)| **x != Point::new(y.ray, y.index - self.shifts[y.ray - 1]))
            .map(|(x, y)| (*y, *x))
            .collect();
        HoughtonElement { n: self.n, shifts, table }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::identity(self.n);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq).expect("same ambient");
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq).expect("same ambient");
            }
        }
        acc
    }

    /// `by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &Self) -> Result<Self> {
        self.same_n(by)?;
        if self.is_finitary() {
            let table = self.table.iter().map(|(x, y)| (by.eval(*x), by.eval(*y))).collect();
            return Ok(HoughtonElement { n: self.n, shifts: vec![0; self.n], table });
        }
        by.inv().mul(self)?.mul(by)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        a.inv().mul(&b.inv())?.mul(a)?.mul(b)
    }

    pub fn is_finitary(&self) -> bool {
        self.shifts.iter().all(|&s| s == 0)
    }

    pub fn as_finitary(&self) -> Option<RayPerm> {
        if self.is_finitary() {
            Some(RayPerm::from_map_unchecked(self.table.clone()))
        } else {
            None
        }
    }

    /// pi(g) = (-s_2, ..., -s_n).
    pub fn pi(&self) -> TranslationVector {
        TranslationVector(self.shifts[1..].iter().map(|s| -s).collect())
    }

    /// v̂ = g_2^{d_2} g_3^{d_3} ... g_n^{d_n}.
    pub fn canonical_preimage(n: usize, v: &TranslationVector) -> Result<Self> {
        if v.dim() + 1 != n {
            return Err(Error::DimensionMismatch { left: v.dim(), right: n - 1 });
        }
        let mut acc = Self::identity(n);
        for (j, &d) in v.0.iter().enumerate() {
            if d != 0 {
                acc = acc.mul(&Self::generator_pow(n, j + 2, d)?)?;
            }
        }
        Ok(acc)
    }

    /// g = σ · v̂ with v = pi(g) and σ finitary.
    pub fn decompose(&self) -> Result<(RayPerm, TranslationVector)> {
        let v = self.pi();
        let vhat = Self::canonical_preimage(self.n, &v)?;
        let sigma = self.mul(&vhat.inv())?;
        match sigma.as_finitary() {
            Some(p) => Ok((p, v)),
            None => Err(Error::Internal(format!("residue {sigma} is not finitary"))),
        }
    }

    pub fn parity_if_fsym(&self) -> Result<Parity> {
        match self.as_finitary() {
            Some(p) => Ok(p.parity()),
            None => Err(Error::NotFinitary(self.pi().to_string())),
        }
    }

    pub fn orbits(&self) -> OrbitReport {
        let bounds = self.bounds();
        let in_window = |x: Point| x.index <= bounds[x.ray - 1];
        let mut done: BTreeSet<Point> = BTreeSet::new();
        let mut finite_cycles = Vec::new();
        for x in self.window() {
            if done.contains(&x) {
                continue;
            }
            let mut path = vec![x];
            let mut y = self.eval(x);
            let closed = loop {
                if y == x {
                    break true;
                }
                if !in_window(y) && self.shifts[y.ray - 1] >= 0 {
                    // escapes to infinity along a positive ray (zero-shift rays
                    // outside the window are fixed and unreachable from it)
                    break false;
                }
                if in_window(y) {
                    path.push(y);
                }
                y = self.eval(y);
            };
            if closed && path.len() >= 2 {
                finite_cycles.push(path.clone());
            }
            done.extend(path);
        }
        finite_cycles.sort();
        OrbitReport {
            infinite_orbit_count: self.shifts.iter().filter(|&&s| s > 0).sum::<i64>() as usize,
            finite_cycles,
        }
    }

    /// Conjugate by the ray relabelling (i, m) -> (rho[i-1], m).
    pub fn relabel_rays(&self, rho: &[usize]) -> Result<Self> {
        let mut check: Vec<usize> = rho.to_vec();
        check.sort_unstable();
        if check != (1..=self.n).collect::<Vec<_>>() {
            return Err(Error::InvalidParams(format!("{rho:?} is not a permutation of rays")));
        }
        let lam = |x: Point| Point::new(rho[x.ray - 1], x.index);
        let mut shifts = vec![0; self.n];
        for ray in 1..=self.n {
            shifts[rho[ray - 1] - 1] = self.shifts[ray - 1];
        }
        let table = self.table.iter().map(|(x, y)| (lam(*x), lam(*y))).collect();
        Ok(HoughtonElement { n: self.n, shifts, table })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed element {s:?}"));
        let body = s.trim().strip_prefix("H[").and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
        let parts: Vec<&str> = body.split(';').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let n: usize = parts[0].strip_prefix("n=").and_then(|t| t.trim().parse().ok()).ok_or_else(bad)?;
        let shifts = TranslationVector::parse(parts[1].strip_prefix("s=").ok_or_else(bad)?)?.0;
        let tab = parts[2].strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(bad)?;
        let nums: Vec<i64> = tab
            .split(|c: char| !(c.is_ascii_digit() || c == '-'))
            .filter(|t| !t.is_empty() && *t != "-")
            .map(|t| t.parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if nums.len() % 4 != 0 || tab.matches("->").count() * 4 != nums.len() {
            return Err(bad());
        }
        let mut table = BTreeMap::new();
        for q in nums.chunks(4) {
            if q[0] < 1 || q[2] < 1 {
                return Err(bad());
            }
            let x = Point::new(q[0] as usize, q[1]);
            if table.insert(x, Point::new(q[2] as usize, q[3])).is_some() {
                return Err(Error::InvalidElement(format!("{x} listed twice")));
            }
        }
        Self::from_parts(n, shifts, table)
    }
}

impl fmt::Display for HoughtonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H[n={}; s=(", self.n)?;
        for (i, s) in self.shifts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("); {")?;
        for (i, (x, y)) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        f.write_str("}]")
    }
}
