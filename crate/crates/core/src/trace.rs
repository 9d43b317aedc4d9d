//! Replayable construction traces: named parameters, named elements and
//! assertions that are re-evaluated exactly on replay.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;

use crate::element::HoughtonElement;
use crate::engine::{gen_class, GenClass, StabilizerChain};
use crate::error::{Error, Result};
use crate::perm::{line_embed, LinePerm, Parity, Point, RayPerm};

/// A point of either domain.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Pt {
    Z(i64),
    X(Point),
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pt::Z(z) => write!(f, "{z}"),
            Pt::X(p) => write!(f, "{p}"),
        }
    }
}

pub fn zs(v: impl IntoIterator<Item = i64>) -> Vec<Pt> {
    v.into_iter().map(Pt::Z).collect()
}

pub fn xs(v: impl IntoIterator<Item = Point>) -> Vec<Pt> {
    v.into_iter().map(Pt::X).collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Line(LinePerm),
    Elem(HoughtonElement),
}

impl Value {
    pub fn mul(&self, other: &Value) -> Result<Value> {
        match (self, other) {
            (Value::Line(a), Value::Line(b)) => Ok(Value::Line(a.compose(b))),
            (Value::Elem(a), Value::Elem(b)) => Ok(Value::Elem(a.mul(b)?)),
            _ => Err(Error::DomainMismatch),
        }
    }

    pub fn inv(&self) -> Value {
        match self {
            Value::Line(a) => Value::Line(a.inverse()),
            Value::Elem(a) => Value::Elem(a.inv()),
        }
    }

    pub fn pow(&self, e: i64) -> Value {
        match self {
            Value::Line(a) => Value::Line(a.pow(e)),
            Value::Elem(a) => Value::Elem(a.pow(e)),
        }
    }

    /// `by⁻¹ · self · by`.
    pub fn conj(&self, by: &Value) -> Result<Value> {
        match (self, by) {
            (Value::Line(a), Value::Line(b)) => Ok(Value::Line(a.conjugate(b))),
            (Value::Elem(a), Value::Elem(b)) => Ok(Value::Elem(a.conjugate(b)?)),
            _ => Err(Error::DomainMismatch),
        }
    }

    pub fn comm(a: &Value, b: &Value) -> Result<Value> {
        a.inv().mul(&b.inv())?.mul(a)?.mul(b)
    }

    pub fn image(&self, x: Pt) -> Result<Pt> {
        match (self, x) {
            (Value::Line(a), Pt::Z(z)) => Ok(Pt::Z(a.image(z))),
            (Value::Elem(a), Pt::X(p)) => Ok(Pt::X(a.try_eval(p)?)),
            _ => Err(Error::DomainMismatch),
        }
    }

    /// Support of a finitary value.
    pub fn support(&self) -> Result<BTreeSet<Pt>> {
        match self {
            Value::Line(a) => Ok(a.support().map(Pt::Z).collect()),
            Value::Elem(a) => match a.as_finitary() {
                Some(p) => Ok(p.support().map(Pt::X).collect()),
                None => Err(Error::NotFinitary(a.pi().to_string())),
            },
        }
    }

    pub fn cycles(&self) -> Result<Vec<Vec<Pt>>> {
        match self {
            Value::Line(a) => Ok(a.cycles().into_iter().map(zs).collect()),
            Value::Elem(a) => match a.as_finitary() {
                Some(p) => Ok(p.cycles().into_iter().map(xs).collect()),
                None => Err(Error::NotFinitary(a.pi().to_string())),
            },
        }
    }

    pub fn parity(&self) -> Result<Parity> {
        match self {
            Value::Line(a) => Ok(a.parity()),
            Value::Elem(a) => a.parity_if_fsym(),
        }
    }

    pub fn order(&self) -> Result<BigUint> {
        match self {
            Value::Line(a) => Ok(a.order()),
            Value::Elem(a) => match a.as_finitary() {
                Some(p) => Ok(p.order()),
                None => Err(Error::NotFinitary(a.pi().to_string())),
            },
        }
    }

    pub fn as_elem(&self) -> Result<&HoughtonElement> {
        match self {
            Value::Elem(a) => Ok(a),
            Value::Line(_) => Err(Error::DomainMismatch),
        }
    }

    pub fn as_line(&self) -> Result<&LinePerm> {
        match self {
            Value::Line(a) => Ok(a),
            Value::Elem(_) => Err(Error::DomainMismatch),
        }
    }

    /// A point where two values disagree, for failure witnesses.
    fn first_difference(&self, other: &Value) -> Option<String> {
        match (self, other) {
            (Value::Line(a), Value::Line(b)) => {
                let pts: BTreeSet<i64> = a.support().chain(b.support()).collect();
                pts.into_iter()
                    .find(|&z| a.image(z) != b.image(z))
                    .map(|z| format!("at {z}: {} vs {}", a.image(z), b.image(z)))
            }
            (Value::Elem(a), Value::Elem(b)) => {
                if a.n() != b.n() {
                    return Some(format!("H_{} vs H_{}", a.n(), b.n()));
                }
                if a.shifts() != b.shifts() {
                    return Some(format!("shifts {:?} vs {:?}", a.shifts(), b.shifts()));
                }
                (1..=a.n())
                    .flat_map(|r| (1..=a.bound(r).max(b.bound(r))).map(move |m| Point::new(r, m)))
                    .find(|&x| a.eval(x) != b.eval(x))
                    .map(|x| format!("at {x}: {} vs {}", a.eval(x), b.eval(x)))
            }
            _ => Some("line value vs ray value".into()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Line(a) => a.fmt(f),
            Value::Elem(a) => match a.as_finitary() {
                Some(p) => p.fmt(f),
                None => a.fmt(f),
            },
        }
    }
}

/// An expression over the named values of a trace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Named(String),
    Lit(Value),
    /// g_k^e in H_n.
    GenPow {
        n: usize,
        k: usize,
        e: i64,
    },
    /// t^{-a} x t^{a} for a line value.
    Shift(Box<Expr>, i64),
    /// Transport a line value to H_2 through the fixed identification.
    Embed(Box<Expr>),
    Inv(Box<Expr>),
    Pow(Box<Expr>, i64),
    Prod(Vec<Expr>),
    /// `a^b = b⁻¹ a b`.
    Conj(Box<Expr>, Box<Expr>),
    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    Comm(Box<Expr>, Box<Expr>),
}

pub fn named(s: &str) -> Expr {
    Expr::Named(s.to_string())
}

pub fn lit_line(p: LinePerm) -> Expr {
    Expr::Lit(Value::Line(p))
}

pub fn lit_elem(g: HoughtonElement) -> Expr {
    Expr::Lit(Value::Elem(g))
}

impl Expr {
    pub fn inv(self) -> Expr {
        Expr::Inv(Box::new(self))
    }
    pub fn pow(self, e: i64) -> Expr {
        Expr::Pow(Box::new(self), e)
    }
    pub fn shift(self, a: i64) -> Expr {
        Expr::Shift(Box::new(self), a)
    }
    pub fn embed(self) -> Expr {
        Expr::Embed(Box::new(self))
    }
    pub fn conj(self, by: Expr) -> Expr {
        Expr::Conj(Box::new(self), Box::new(by))
    }
    pub fn comm(self, other: Expr) -> Expr {
        Expr::Comm(Box::new(self), Box::new(other))
    }
    pub fn times(self, other: Expr) -> Expr {
        match self {
            Expr::Prod(mut v) => {
                v.push(other);
                Expr::Prod(v)
            }
            e => Expr::Prod(vec![e, other]),
        }
    }
}

/// (points on the listed rays ∪ include) ∖ exclude.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PointSet {
    pub rays: Vec<usize>,
    pub include: BTreeSet<Pt>,
    pub exclude: BTreeSet<Pt>,
}

impl PointSet {
    pub fn finite(pts: impl IntoIterator<Item = Pt>) -> Self {
        PointSet { include: pts.into_iter().collect(), ..Default::default() }
    }

    pub fn contains(&self, x: &Pt) -> bool {
        if self.exclude.contains(x) {
            return false;
        }
        self.include.contains(x) || matches!(x, Pt::X(p) if self.rays.contains(&p.ray))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Assertion {
    Equal(Expr, Expr),
    /// Each pair (x, y) satisfies (x)value = y.
    MapsTo(Expr, Vec<(Pt, Pt)>),
    MaxSupport(Expr, Pt),
    MinSupport(Expr, Pt),
    /// supp(a) ∩ supp(b) equals the given set exactly.
    SupportMeet(Expr, Expr, Vec<Pt>),
    SupportsDisjoint(Expr, Expr),
    SupportWithin(Expr, PointSet),
    SupportContains(Expr, Vec<Pt>),
    /// The images of the listed points lie in the set.
    ImagesWithin(Expr, Vec<Pt>, PointSet),
    /// Every cycle has exactly this length.
    CycleLengths(Expr, usize),
    CycleCount(Expr, usize),
    Order(Expr, u64),
    ParityIs(Expr, Parity),
    Prime(u64),
    NoFiniteCycles(Expr),
    InfiniteOrbits(Expr, usize),
    /// Finite-engine classification of ⟨gens⟩ on a window, with an optional
    /// expected group order.
    WindowClass {
        gens: Vec<Expr>,
        window: Vec<Pt>,
        expect: GenClass,
        order: Option<BigUint>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: String,
    pub assertion: Assertion,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Default)]
pub struct ConstructionTrace {
    pub name: String,
    pub params: Vec<(String, i64)>,
    elements: Vec<(String, Value)>,
    lookup: BTreeMap<String, usize>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

const WITNESS_LIMIT: usize = 240;

fn clip(s: String) -> String {
    if s.len() <= WITNESS_LIMIT {
        return s;
    }
    let mut cut = WITNESS_LIMIT;
    while !s.is_char_boundary(cut) {
        cut -= 1;
    }
    format!("{}...", &s[..cut])
}

fn show_set(s: &BTreeSet<Pt>) -> String {
    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl ConstructionTrace {
    pub fn new(name: &str) -> Self {
        ConstructionTrace { name: name.to_string(), ..Default::default() }
    }

    pub fn param(&mut self, key: &str, v: i64) {
        self.params.push((key.to_string(), v));
    }

    pub fn get_param(&self, key: &str) -> Option<i64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn set(&mut self, name: &str, v: Value) {
        match self.lookup.get(name) {
            Some(&i) => self.elements[i].1 = v,
            None => {
                self.lookup.insert(name.to_string(), self.elements.len());
                self.elements.push((name.to_string(), v));
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.lookup.get(name).map(|&i| &self.elements[i].1)
    }

    pub fn elements(&self) -> &[(String, Value)] {
        &self.elements
    }

    pub fn check(&mut self, name: impl Into<String>, assertion: Assertion) {
        self.checks.push(Check { name: name.into(), assertion });
    }

    pub fn eval(&self, e: &Expr) -> Result<Value> {
        Ok(match e {
            Expr::Named(s) => self.get(s).cloned().ok_or_else(|| Error::Internal(format!("unknown element {s}")))?,
            Expr::Lit(v) => v.clone(),
            Expr::GenPow { n, k, e } => Value::Elem(HoughtonElement::generator_pow(*n, *k, *e)?),
            Expr::Shift(x, a) => Value::Line(self.eval(x)?.as_line()?.shift(*a)),
            Expr::Embed(x) => {
                let p = self.eval(x)?.as_line()?.map_points(line_embed);
                Value::Elem(HoughtonElement::from_finitary(2, &p)?)
            }
            Expr::Inv(x) => self.eval(x)?.inv(),
            Expr::Pow(x, k) => self.eval(x)?.pow(*k),
            Expr::Prod(v) => {
                let mut it = v.iter();
                let first = it.next().ok_or_else(|| Error::Internal("empty product".into()))?;
                let mut acc = self.eval(first)?;
                for x in it {
                    acc = acc.mul(&self.eval(x)?)?;
                }
                acc
            }
            Expr::Conj(a, b) => self.eval(a)?.conj(&self.eval(b)?)?,
            Expr::Comm(a, b) => Value::comm(&self.eval(a)?, &self.eval(b)?)?,
        })
    }

    fn run(&self, a: &Assertion) -> Result<(bool, String)> {
        Ok(match a {
            Assertion::Equal(l, r) => {
                let (x, y) = (self.eval(l)?, self.eval(r)?);
                match x.first_difference(&y) {
                    None if x == y => (true, x.to_string()),
                    None => (false, format!("{x} vs {y}")),
                    Some(w) => (false, w),
                }
            }
            Assertion::MapsTo(e, pairs) => {
                let v = self.eval(e)?;
                for &(x, y) in pairs {
                    let got = v.image(x)?;
                    if got != y {
                        return Ok((false, format!("{x} -> {got}, expected {y}")));
                    }
                }
                let s: Vec<String> = pairs.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                (true, s.join(" "))
            }
            Assertion::MaxSupport(e, p) => {
                let m = self.eval(e)?.support()?.into_iter().next_back();
                match m {
                    Some(x) if x == *p => (true, x.to_string()),
                    Some(x) => (false, format!("max support is {x}, expected {p}")),
                    None => (false, "empty support".into()),
                }
            }
            Assertion::MinSupport(e, p) => {
                let m = self.eval(e)?.support()?.into_iter().next();
                match m {
                    Some(x) if x == *p => (true, x.to_string()),
                    Some(x) => (false, format!("min support is {x}, expected {p}")),
                    None => (false, "empty support".into()),
                }
            }
            Assertion::SupportMeet(l, r, want) => {
                let a = self.eval(l)?.support()?;
                let b = self.eval(r)?.support()?;
                let got: BTreeSet<Pt> = a.intersection(&b).copied().collect();
                let want: BTreeSet<Pt> = want.iter().copied().collect();
                (got == want, show_set(&got))
            }
            Assertion::SupportsDisjoint(l, r) => {
                let a = self.eval(l)?.support()?;
                let b = self.eval(r)?.support()?;
                match a.intersection(&b).next() {
                    None => (true, format!("|supp|={},{}", a.len(), b.len())),
                    Some(x) => (false, format!("{x} in both supports")),
                }
            }
            Assertion::SupportWithin(e, set) => {
                let s = self.eval(e)?.support()?;
                match s.iter().find(|x| !set.contains(x)) {
                    None => (true, format!("|supp|={}", s.len())),
                    Some(x) => (false, format!("{x} outside the allowed set")),
                }
            }
            Assertion::SupportContains(e, pts) => {
                let s = self.eval(e)?.support()?;
                match pts.iter().find(|x| !s.contains(x)) {
                    None => (true, format!("{} points", pts.len())),
                    Some(x) => (false, format!("{x} not moved")),
                }
            }
            Assertion::ImagesWithin(e, pts, set) => {
                let v = self.eval(e)?;
                for &x in pts {
                    let y = v.image(x)?;
                    if !set.contains(&y) {
                        return Ok((false, format!("{x} -> {y} outside the target set")));
                    }
                }
                (true, format!("{} points", pts.len()))
            }
            Assertion::CycleLengths(e, len) => {
                let cyc = self.eval(e)?.cycles()?;
                match cyc.iter().find(|c| c.len() != *len) {
                    None => (true, format!("{} cycles of length {len}", cyc.len())),
                    Some(c) => (false, format!("cycle of length {} through {}", c.len(), c[0])),
                }
            }
            Assertion::CycleCount(e, count) => {
                let c = self.eval(e)?.cycles()?.len();
                (c == *count, format!("{c} cycles"))
            }
            Assertion::Order(e, o) => {
                let got = self.eval(e)?.order()?;
                (got == BigUint::from(*o), format!("order {got}"))
            }
            Assertion::ParityIs(e, p) => {
                let got = self.eval(e)?.parity()?;
                (got == *p, got.to_string())
            }
            Assertion::Prime(q) => (is_prime(*q), format!("{q}")),
            Assertion::NoFiniteCycles(e) => {
                let v = self.eval(e)?;
                let rep = v.as_elem()?.orbits();
                match rep.finite_cycles.first() {
                    None => (true, format!("{} infinite orbits", rep.infinite_orbit_count)),
                    Some(c) => (false, format!("finite cycle of length {} through {}", c.len(), c[0])),
                }
            }
            Assertion::InfiniteOrbits(e, k) => {
                let got = self.eval(e)?.as_elem()?.orbits().infinite_orbit_count;
                (got == *k, format!("{got} infinite orbits"))
            }
            Assertion::WindowClass { gens, window, expect, order } => {
                let vals = gens.iter().map(|g| self.eval(g)).collect::<Result<Vec<_>>>()?;
                let (class, got) = classify_window(&vals, window)?;
                let ok = class == *expect && order.as_ref().map_or(true, |o| *o == got);
                (ok, format!("{class} order {got}"))
            }
        })
    }

    pub fn replay(&self) -> Vec<CheckOutcome> {
        self.checks
            .iter()
            .map(|c| {
                let (passed, witness) = match self.run(&c.assertion) {
                    Ok(r) => r,
                    Err(e) => (false, format!("error: {e}")),
                };
                CheckOutcome { name: c.name.clone(), passed, witness: clip(witness) }
            })
            .collect()
    }

    pub fn passes(&self) -> bool {
        self.replay().iter().all(|c| c.passed)
    }

    /// Line-oriented text form.
    pub fn to_text(&self) -> String {
        let mut out = format!("TRACE {}\n", self.name);
        for (k, v) in &self.params {
            out.push_str(&format!("PARAM {k}={v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("NOTE {n}\n"));
        }
        for (k, v) in &self.elements {
            out.push_str(&format!("ELEM {k}={v}\n"));
        }
        for c in self.replay() {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("CHECK \"{}\" {status}\n", c.name));
        }
        out
    }
}

fn classify_window(vals: &[Value], window: &[Pt]) -> Result<(GenClass, BigUint)> {
    if window.iter().all(|p| matches!(p, Pt::Z(_))) {
        let w: Vec<i64> = window.iter().map(|p| if let Pt::Z(z) = p { *z } else { 0 }).collect();
        let gens = vals.iter().map(|v| v.as_line().cloned()).collect::<Result<Vec<_>>>()?;
        let order = StabilizerChain::build(&gens, &w)?.order();
        Ok((gen_class(&gens, &w)?, order))
    } else {
        let mut w = Vec::new();
        for p in window {
            match p {
                Pt::X(x) => w.push(*x),
                Pt::Z(_) => return Err(Error::DomainMismatch),
            }
        }
        let gens = vals
            .iter()
            .map(|v| v.as_elem()?.as_finitary().ok_or_else(|| Error::NotFinitary("window generator".into())))
            .collect::<Result<Vec<RayPerm>>>()?;
        let order = StabilizerChain::build(&gens, &w)?.order();
        Ok((gen_class(&gens, &w)?, order))
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
