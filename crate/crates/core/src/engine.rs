//! Finite permutation groups on a window: deterministic Schreier–Sims
//! stabilizer chains and a brute-force enumeration oracle.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::{Perm, PointLike};

type Img = Vec<u32>;

fn mul(a: &Img, b: &Img) -> Img {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn inv(a: &Img) -> Img {
    let mut out = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn is_id(a: &Img) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

fn first_moved(a: &Img) -> Option<usize> {
    a.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i)
}

struct Window<P> {
    points: Vec<P>,
    index: BTreeMap<P, usize>,
}

impl<P: PointLike> Window<P> {
    fn new(window: &[P]) -> Self {
        let mut points = window.to_vec();
        points.sort();
        points.dedup();
        let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Window { points, index }
    }

    fn encode(&self, p: &Perm<P>) -> Result<Img> {
        let mut img: Img = (0..self.points.len() as u32).collect();
        for (x, y) in p.entries() {
            let (Some(&i), Some(&j)) = (self.index.get(x), self.index.get(y)) else {
                return Err(Error::WindowViolation(x.to_string()));
            };
            img[i] = j as u32;
        }
        Ok(img)
    }

    fn decode(&self, a: &Img) -> Perm<P> {
        Perm::from_map_unchecked(
            a.iter().enumerate().map(|(i, &j)| (self.points[i], self.points[j as usize])).collect(),
        )
    }
}

struct Level {
    base: usize,
    gens: Vec<Img>,
    orbit: Vec<usize>,
    reps: Vec<Option<Img>>,
    rep_invs: Vec<Option<Img>>,
    tested: HashSet<(usize, usize)>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut reps = vec![None; degree];
        let mut rep_invs = vec![None; degree];
        let id: Img = (0..degree as u32).collect();
        reps[base] = Some(id.clone());
        rep_invs[base] = Some(id);
        Level { base, gens: Vec::new(), orbit: vec![base], reps, rep_invs, tested: HashSet::new() }
    }

    /// Extends the orbit and transversal; existing representatives are kept so
    /// previously tested Schreier generators stay valid.
    fn extend(&mut self) {
        let mut queue: VecDeque<usize> = self.orbit.iter().copied().collect();
        while let Some(b) = queue.pop_front() {
            for s in 0..self.gens.len() {
                let c = self.gens[s][b] as usize;
                if self.reps[c].is_none() {
                    let r = mul(self.reps[b].as_ref().unwrap(), &self.gens[s]);
                    self.rep_invs[c] = Some(inv(&r));
                    self.reps[c] = Some(r);
                    self.orbit.push(c);
                    queue.push_back(c);
                }
            }
        }
    }
}

/// A base and strong generating set for a group acting on a finite window.
pub struct StabilizerChain<P> {
    window: Window<P>,
    levels: Vec<Level>,
}

impl<P: PointLike> StabilizerChain<P> {
    pub fn build(gens: &[Perm<P>], window: &[P]) -> Result<Self> {
        let window = Window::new(window);
        let degree = window.points.len();
        let gens: Vec<Img> = gens
            .iter()
            .map(|g| window.encode(g))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|g| !is_id(g))
            .collect();
        let mut chain = StabilizerChain { window, levels: Vec::new() };
        for g in &gens {
            if chain.levels.iter().all(|l| g[l.base] as usize == l.base) {
                chain.levels.push(Level::new(first_moved(g).unwrap(), degree));
            }
        }
        for l in 0..chain.levels.len() {
            let prefix: Vec<usize> = chain.levels[..l].iter().map(|x| x.base).collect();
            chain.levels[l].gens =
                gens.iter().filter(|g| prefix.iter().all(|&b| g[b] as usize == b)).cloned().collect();
            chain.levels[l].extend();
        }
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            match chain.schreier_step(i as usize) {
                None => i -= 1,
                Some((h, j)) => {
                    if j == chain.levels.len() {
                        chain.levels.push(Level::new(first_moved(&h).unwrap(), degree));
                    }
                    for l in (i as usize + 1)..=j {
                        chain.levels[l].gens.push(h.clone());
                        chain.levels[l].extend();
                    }
                    i = j as isize;
                }
            }
        }
        Ok(chain)
    }

    fn sift(&self, mut g: Img, from: usize) -> (Img, usize) {
        for l in from..self.levels.len() {
            let b = g[self.levels[l].base] as usize;
            match &self.levels[l].rep_invs[b] {
                None => return (g, l),
                Some(ri) => g = mul(&g, ri),
            }
        }
        (g, self.levels.len())
    }

    /// Finds an untested Schreier generator at level i that does not sift
    /// through the levels below it.
    fn schreier_step(&mut self, i: usize) -> Option<(Img, usize)> {
        let mut k = 0;
        while k < self.levels[i].orbit.len() {
            let b = self.levels[i].orbit[k];
            for s in 0..self.levels[i].gens.len() {
                if !self.levels[i].tested.insert((b, s)) {
                    continue;
                }
                let lvl = &self.levels[i];
                let c = lvl.gens[s][b] as usize;
                let sg = mul(&mul(lvl.reps[b].as_ref().unwrap(), &lvl.gens[s]), lvl.rep_invs[c].as_ref().unwrap());
                let (res, j) = self.sift(sg, i + 1);
                if j < self.levels.len() || !is_id(&res) {
                    return Some((res, j));
                }
            }
            k += 1;
        }
        None
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, p: &Perm<P>) -> Result<bool> {
        let g = self.window.encode(p)?;
        let (res, j) = self.sift(g, 0);
        Ok(j == self.levels.len() && is_id(&res))
    }

    pub fn base(&self) -> Vec<P> {
        self.levels.iter().map(|l| self.window.points[l.base]).collect()
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Perm<P>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if seen.insert(g.clone()) {
                    out.push(self.window.decode(g));
                }
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.window.points.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GenClass {
    ContainsAltFullSym,
    ContainsAltOnly,
    Proper,
}

impl std::fmt::Display for GenClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GenClass::ContainsAltFullSym => "contains_alt_full_sym",
            GenClass::ContainsAltOnly => "contains_alt_only",
            GenClass::Proper => "proper",
        })
    }
}

pub fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Classifies ⟨gens⟩ against Alt(window) and Sym(window).
pub fn gen_class<P: PointLike>(gens: &[Perm<P>], window: &[P]) -> Result<GenClass> {
    let chain = StabilizerChain::build(gens, window)?;
    let order = chain.order();
    let full = factorial(chain.degree());
    Ok(if order == full {
        GenClass::ContainsAltFullSym
    } else if order * 2u32 == full {
        GenClass::ContainsAltOnly
    } else {
        GenClass::Proper
    })
}

pub const DEFAULT_BFS_BUDGET: usize = 10_000_000;

/// Every element of a small group, found by breadth-first closure.
pub struct BfsGroup<P> {
    window: Window<P>,
    elements: HashSet<Img>,
}

impl<P: PointLike> BfsGroup<P> {
    pub fn enumerate(gens: &[Perm<P>], window: &[P], budget: usize) -> Result<Self> {
        let window = Window::new(window);
        let gens: Vec<Img> = gens.iter().map(|g| window.encode(g)).collect::<Result<_>>()?;
        let id: Img = (0..window.points.len() as u32).collect();
        let mut elements = HashSet::new();
        elements.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = mul(&x, g);
                if !elements.contains(&y) {
                    if elements.len() >= budget {
                        return Err(Error::OracleOverflow(budget));
                    }
                    elements.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(BfsGroup { window, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm<P>) -> Result<bool> {
        Ok(self.elements.contains(&self.window.encode(p)?))
    }
}
