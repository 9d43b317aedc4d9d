//! Points of X_n and of the integer line, finitely supported permutations,
//! cycle notation and parity.
//!
//! Permutations act on the right: `a.compose(&b)` applies `a` first, then `b`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;
use std::ops::BitXor;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

/// A point `(ray, index)` of X_n. Ordered ray-major, then by index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point {
    pub ray: usize,
    pub index: i64,
}

impl Point {
    pub const fn new(ray: usize, index: i64) -> Self {
        Point { ray, index }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.ray == 0 || self.ray > n || self.index < 1 {
            return Err(Error::InvalidPoint(format!("{self} is not a point of X_{n}")));
        }
        Ok(())
    }

    /// Parses the CLI form `ray:index`.
    pub fn parse_colon(s: &str) -> Result<Point> {
        let (r, i) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("expected ray:index, got {s:?}")))?;
        let ray = r.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let index = i.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(Point { ray, index })
    }

    pub fn colon(&self) -> String {
        format!("{}:{}", self.ray, self.index)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.ray, self.index)
    }
}

/// Anything a finitary permutation can move.
pub trait PointLike: Copy + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}
impl PointLike for Point {}
impl PointLike for i64 {}

/// The fixed bijection Z -> X_2 under which t corresponds to g_2.
pub fn line_embed(z: i64) -> Point {
    if z >= 1 {
        Point::new(1, z)
    } else {
        Point::new(2, 1 - z)
    }
}

pub fn point_project(p: Point) -> Result<i64> {
    match p.ray {
        1 if p.index >= 1 => Ok(p.index),
        2 if p.index >= 1 => Ok(1 - p.index),
        _ => Err(Error::InvalidPoint(format!("{p} is not a point of X_2"))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl BitXor for Parity {
    type Output = Parity;
    fn bitxor(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.is_odd() != rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A finitely supported bijection, stored without fixed points.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm<P: Ord> {
    map: BTreeMap<P, P>,
}

pub type LinePerm = Perm<i64>;
pub type RayPerm = Perm<Point>;

impl<P: PointLike> Default for Perm<P> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<P: PointLike> Perm<P> {
    pub fn identity() -> Self {
        Perm { map: BTreeMap::new() }
    }

    pub fn from_cycles(cycles: &[Vec<P>]) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            if cycle.len() < 2 {
                return Err(Error::MalformedCycles(format!("cycle of length {} (need at least 2)", cycle.len())));
            }
            for &x in cycle {
                if !seen.insert(x) {
                    return Err(Error::MalformedCycles(format!("point {x} appears twice")));
                }
            }
            for (i, &x) in cycle.iter().enumerate() {
                map.insert(x, cycle[(i + 1) % cycle.len()]);
            }
        }
        Ok(Perm { map })
    }

    pub fn cycle(points: &[P]) -> Result<Self> {
        Self::from_cycles(&[points.to_vec()])
    }

    pub fn transposition(a: P, b: P) -> Self {
        if a == b {
            return Self::identity();
        }
        let mut map = BTreeMap::new();
        map.insert(a, b);
        map.insert(b, a);
        Perm { map }
    }

    /// Builds a permutation from an explicit point map, dropping fixed points.
    pub fn from_map(map: BTreeMap<P, P>) -> Result<Self> {
        let map: BTreeMap<P, P> = map.into_iter().filter(|(x, y)| x != y).collect();
        let domain: BTreeSet<P> = map.keys().copied().collect();
        let range: BTreeSet<P> = map.values().copied().collect();
        if domain != range || range.len() != map.len() {
            return Err(Error::MalformedCycles("map is not a bijection of its support".into()));
        }
        Ok(Perm { map })
    }

    pub(crate) fn from_map_unchecked(map: BTreeMap<P, P>) -> Self {
        Perm { map: map.into_iter().filter(|(x, y)| x != y).collect() }
    }

    pub fn entries(&self) -> &BTreeMap<P, P> {
        &self.map
    }

    pub fn image(&self, x: P) -> P {
        self.map.get(&x).copied().unwrap_or(x)
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = P> + '_ {
        self.map.keys().copied()
    }

    pub fn support_set(&self) -> BTreeSet<P> {
        self.map.keys().copied().collect()
    }

    pub fn support_len(&self) -> usize {
        self.map.len()
    }

    pub fn min_support(&self) -> Option<P> {
        self.map.keys().next().copied()
    }

    pub fn max_support(&self) -> Option<P> {
        self.map.keys().next_back().copied()
    }

    /// Apply `self`, then `other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut map = BTreeMap::new();
        for (&x, &y) in &self.map {
            map.insert(x, other.image(y));
        }
        for (&x, &y) in &other.map {
            if !self.map.contains_key(&x) {
                map.insert(x, y);
            }
        }
        Self::from_map_unchecked(map)
    }

    pub fn inverse(&self) -> Self {
        Perm { map: self.map.iter().map(|(&x, &y)| (y, x)).collect() }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq);
            }
        }
        acc
    }

    /// `by⁻¹ · self · by`: moves each cycle entry x to (x)by.
    pub fn conjugate(&self, by: &Self) -> Self {
        Perm { map: self.map.iter().map(|(&x, &y)| (by.image(x), by.image(y))).collect() }
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().compose(&b.inverse()).compose(a).compose(b)
    }

    /// Transport along an injective relabelling of points.
    pub fn map_points<Q: PointLike>(&self, f: impl Fn(P) -> Q) -> Perm<Q> {
        Perm { map: self.map.iter().map(|(&x, &y)| (f(x), f(y))).collect() }
    }

    /// Cycles, each rotated to start at its least point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<P>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.map.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cyc = vec![start];
            seen.insert(start);
            let mut x = self.map[&start];
            while x != start {
                seen.insert(x);
                cyc.push(x);
                x = self.map[&x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles().iter().map(Vec::len).collect()
    }

    pub fn parity(&self) -> Parity {
        let s: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        Parity::from_bit(s % 2 == 1)
    }

    pub fn order(&self) -> BigUint {
        self.cycle_lengths().into_iter().fold(BigUint::from(1u32), |acc, l| acc.lcm(&BigUint::from(l)))
    }
}

impl Perm<i64> {
    /// `t^{-a} σ t^{a}`: the same permutation with every point moved by `+a`.
    pub fn shift(&self, a: i64) -> Self {
        self.map_points(|x| x + a)
    }
}

impl<P: PointLike> fmt::Display for Perm<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("()");
        }
        for cyc in self.cycles() {
            f.write_str("(")?;
            for (i, x) in cyc.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A permutation whose domain mode is only known at runtime (after parsing).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyPerm {
    Ray(RayPerm),
    Line(LinePerm),
}

impl AnyPerm {
    pub fn compose(&self, other: &AnyPerm) -> Result<AnyPerm> {
        match (self, other) {
            (AnyPerm::Ray(a), AnyPerm::Ray(b)) => Ok(AnyPerm::Ray(a.compose(b))),
            (AnyPerm::Line(a), AnyPerm::Line(b)) => Ok(AnyPerm::Line(a.compose(b))),
            // the identity carries no mode of its own
            (AnyPerm::Ray(a), AnyPerm::Line(b)) if b.is_identity() => Ok(AnyPerm::Ray(a.clone())),
            (AnyPerm::Line(a), AnyPerm::Ray(b)) if a.is_identity() => Ok(AnyPerm::Ray(b.clone())),
            (AnyPerm::Ray(a), AnyPerm::Line(b)) if a.is_identity() => Ok(AnyPerm::Line(b.clone())),
            (AnyPerm::Line(a), AnyPerm::Ray(b)) if b.is_identity() => Ok(AnyPerm::Line(a.clone())),
            _ => Err(Error::DomainMismatch),
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            AnyPerm::Ray(p) => p.parity(),
            AnyPerm::Line(p) => p.parity(),
        }
    }

    pub fn into_ray(self) -> Result<RayPerm> {
        match self {
            AnyPerm::Ray(p) => Ok(p),
            AnyPerm::Line(p) if p.is_identity() => Ok(RayPerm::identity()),
            AnyPerm::Line(_) => Err(Error::DomainMismatch),
        }
    }

    pub fn into_line(self) -> Result<LinePerm> {
        match self {
            AnyPerm::Line(p) => Ok(p),
            AnyPerm::Ray(p) if p.is_identity() => Ok(LinePerm::identity()),
            AnyPerm::Ray(_) => Err(Error::DomainMismatch),
        }
    }
}

impl fmt::Display for AnyPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyPerm::Ray(p) => p.fmt(f),
            AnyPerm::Line(p) => p.fmt(f),
        }
    }
}

enum Entry {
    Ray(Point),
    Line(i64),
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse::<i64>().ok())
            .ok_or_else(|| self.err("expected an integer"))
    }

    fn entry(&mut self) -> Result<Entry> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let ray = self.int()?;
            self.expect(b',')?;
            let index = self.int()?;
            self.expect(b')')?;
            if ray < 1 {
                return Err(self.err("ray must be positive"));
            }
            Ok(Entry::Ray(Point::new(ray as usize, index)))
        } else {
            Ok(Entry::Line(self.int()?))
        }
    }
}

/// Parses `((1,1),(1,2))((2,3),(2,4))`, `(0,1,2)` or `(0 1 2)`, and `()`.
pub fn parse_perm(s: &str) -> Result<AnyPerm> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
    let mut rays: Vec<Vec<Point>> = Vec::new();
    let mut lines: Vec<Vec<i64>> = Vec::new();
    let mut saw_empty = false;
    while cur.peek().is_some() {
        cur.expect(b'(')?;
        if cur.peek() == Some(b')') {
            cur.pos += 1;
            saw_empty = true;
            continue;
        }
        let mut ray_cyc = Vec::new();
        let mut line_cyc = Vec::new();
        loop {
            match cur.entry()? {
                Entry::Ray(p) => ray_cyc.push(p),
                Entry::Line(z) => line_cyc.push(z),
            }
            match cur.peek() {
                Some(b',') => cur.pos += 1,
                Some(b')') => {
                    cur.pos += 1;
                    break;
                }
                Some(_) => {}
                None => return Err(cur.err("unterminated cycle")),
            }
        }
        if !ray_cyc.is_empty() && !line_cyc.is_empty() {
            return Err(Error::DomainMismatch);
        }
        if !ray_cyc.is_empty() {
            rays.push(ray_cyc);
        } else {
            lines.push(line_cyc);
        }
    }
    if !rays.is_empty() && !lines.is_empty() {
        return Err(Error::DomainMismatch);
    }
    if rays.is_empty() && lines.is_empty() && !saw_empty {
        return Err(Error::Parse("empty permutation text (use \"()\" for the identity)".into()));
    }
    if !rays.is_empty() {
        Ok(AnyPerm::Ray(Perm::from_cycles(&rays)?))
    } else {
        Ok(AnyPerm::Line(Perm::from_cycles(&lines)?))
    }
}

pub fn parse_ray_perm(s: &str) -> Result<RayPerm> {
    parse_perm(s)?.into_ray()
}

pub fn parse_line_perm(s: &str) -> Result<LinePerm> {
    parse_perm(s)?.into_line()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ray: usize, index: i64) -> Point {
        Point::new(ray, index)
    }

    #[test]
    fn transposition_from_cycles() {
        let t = RayPerm::from_cycles(&[vec![p(1, 1), p(1, 2)]]).unwrap();
        assert_eq!(t.image(p(1, 1)), p(1, 2));
        assert_eq!(t.image(p(1, 2)), p(1, 1));
        assert_eq!(t.support_len(), 2);
        assert_eq!(t.parity(), Parity::Odd);
    }

    #[test]
    fn empty_cycle_list_is_identity() {
        let e = RayPerm::from_cycles(&[]).unwrap();
        assert!(e.is_identity());
        assert_eq!(e.parity(), Parity::Even);
        assert!(e.cycles().is_empty());
    }

    #[test]
    fn line_three_cycle() {
        let c = LinePerm::cycle(&[0, 1, 2]).unwrap();
        assert_eq!((c.image(0), c.image(1), c.image(2)), (1, 2, 0));
    }

    #[test]
    fn malformed_cycles_rejected() {
        assert!(matches!(LinePerm::from_cycles(&[vec![1, 2], vec![2, 3]]), Err(Error::MalformedCycles(_))));
        assert!(matches!(LinePerm::from_cycles(&[vec![1, 1]]), Err(Error::MalformedCycles(_))));
        assert!(matches!(LinePerm::from_cycles(&[vec![4]]), Err(Error::MalformedCycles(_))));
    }

    #[test]
    fn compose_examples() {
        let t = parse_ray_perm("((1,1),(1,2))").unwrap();
        assert!(t.compose(&t).is_identity());
        let c = LinePerm::cycle(&[0, 1, 2]).unwrap();
        assert_eq!(c.compose(&c), LinePerm::cycle(&[0, 2, 1]).unwrap());
        let a = LinePerm::transposition(1, 3);
        let b = LinePerm::transposition(2, 3);
        let lhs = b.inverse().compose(&a.inverse()).compose(&b).compose(&a);
        assert_eq!(lhs, LinePerm::cycle(&[1, 2, 3]).unwrap());
        assert_eq!(a.compose(&b).cycle_lengths(), vec![3]);
    }

    #[test]
    fn parity_examples() {
        let d = LinePerm::from_cycles(&[vec![1, 3], vec![4, 5]]).unwrap();
        assert_eq!(d.parity(), Parity::Even);
    }

    #[test]
    fn cycles_are_canonical() {
        let a = LinePerm::from_cycles(&[vec![7, 5, 6], vec![1, 0]]).unwrap();
        assert_eq!(a.cycles(), vec![vec![0, 1], vec![5, 6, 7]]);
        assert_eq!(a.to_string(), "(0,1)(5,6,7)");
        assert_eq!(LinePerm::from_cycles(&a.cycles()).unwrap(), a);
    }

    #[test]
    fn text_round_trip() {
        for s in ["((1,1),(1,2))((2,3),(2,4))", "(0,1,2)", "()", "(-3,4)(5,6,7)"] {
            let q = parse_perm(s).unwrap();
            assert_eq!(q.to_string(), s);
        }
        let spaced = parse_perm("((1,1), (1,2))  ((2,3),(2,4))").unwrap();
        assert_eq!(spaced.to_string(), "((1,1),(1,2))((2,3),(2,4))");
        assert_eq!(parse_perm("(0 1 2)").unwrap().to_string(), "(0,1,2)");
    }

    #[test]
    fn mixed_modes_rejected() {
        assert_eq!(parse_perm("((1,1),2)"), Err(Error::DomainMismatch));
        assert_eq!(parse_perm("((1,1),(1,2))(3,4)"), Err(Error::DomainMismatch));
        let r = parse_perm("((1,1),(1,2))").unwrap();
        let l = parse_perm("(3,4)").unwrap();
        assert_eq!(r.compose(&l), Err(Error::DomainMismatch));
    }

    #[test]
    fn line_embedding() {
        assert_eq!(line_embed(1), p(1, 1));
        assert_eq!(line_embed(0), p(2, 1));
        assert_eq!(line_embed(-3), p(2, 4));
        for z in -60..60 {
            assert_eq!(point_project(line_embed(z)).unwrap(), z);
        }
        for ray in 1..=2 {
            for index in 1..40 {
                assert_eq!(line_embed(point_project(p(ray, index)).unwrap()), p(ray, index));
            }
        }
        assert!(point_project(p(3, 1)).is_err());
    }

    #[test]
    fn shift_moves_support() {
        let c = LinePerm::cycle(&[1, 2, 3]).unwrap();
        assert_eq!(c.shift(5), LinePerm::cycle(&[6, 7, 8]).unwrap());
    }

    #[test]
    fn order_is_lcm() {
        let a = LinePerm::from_cycles(&[vec![0, 1], vec![5, 6, 7]]).unwrap();
        assert_eq!(a.order(), BigUint::from(6u32));
        assert_eq!(a.pow(6), LinePerm::identity());
        assert_eq!(a.pow(-1), a.inverse());
    }
}
