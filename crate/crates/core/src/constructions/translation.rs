//! Translation-like elements f_i = (σ_i g_i^d)^{m_i} of a finite-index
//! subgroup, and the sweep moving a finite set of points into ray 1 away from
//! the exceptional set F.

use std::collections::BTreeSet;

use crate::classify::SubgroupDescriptor;
use crate::element::{HoughtonElement, TranslationVector};
use crate::error::{Error, Result};
use crate::perm::{Point, RayPerm};

#[derive(Clone, Debug)]
pub struct TranslationData {
    /// Exponent of Z^{n-1}/L.
    pub d: i64,
    /// σ_i g_i^d for i = 2..n, as words in the descriptor's generators.
    pub words: Vec<HoughtonElement>,
    /// The finitary parts σ_i.
    pub sigmas: Vec<RayPerm>,
    /// Least m_i with (σ_i g_i^d)^{m_i} free of finite cycles.
    pub m: Vec<i64>,
    /// f_i = (σ_i g_i^d)^{m_i}.
    pub f: Vec<HoughtonElement>,
    /// F_i = (R_1 ∪ R_i) \ supp(f_i).
    pub f_sets: Vec<BTreeSet<Point>>,
    /// F = ∪ F_i.
    pub f_union: BTreeSet<Point>,
}

impl TranslationData {
    pub fn f_elem(&self, i: usize) -> &HoughtonElement {
        &self.f[i - 2]
    }
}

pub fn choose_translation_elements(desc: &SubgroupDescriptor) -> Result<TranslationData> {
    desc.validate()?;
    let n = desc.n();
    let d = desc.lattice().exponent()?;
    let mut data = TranslationData {
        d,
        words: Vec::new(),
        sigmas: Vec::new(),
        m: Vec::new(),
        f: Vec::new(),
        f_sets: Vec::new(),
        f_union: BTreeSet::new(),
    };
    for i in 2..=n {
        let target = TranslationVector::unit(n - 1, i - 1).scale(d);
        let x = desc
            .lattice()
            .coordinates(&target)?
            .ok_or_else(|| Error::Internal(format!("{d}e_{} not in the lattice", i - 1)))?;
        let word = desc.word(&x)?;
        let sigma = word
            .mul(&HoughtonElement::generator_pow(n, i, -d)?)?
            .as_finitary()
            .ok_or_else(|| Error::Internal("σ_i is not finitary".into()))?;
        let lengths: Vec<u64> = word.orbits().finite_cycles.iter().map(|c| c.len() as u64).collect();
        let lcm = lengths.iter().fold(1u64, |a, &b| num_integer::lcm(a, b));
        let mi = (1..=lcm as i64)
            .find(|&m| word.pow(m).orbits().finite_cycles.is_empty())
            .ok_or_else(|| Error::Internal("no power of σ_i g_i^d is free of finite cycles".into()))?;
        let f = word.pow(mi);
        let mut fixed = BTreeSet::new();
        for ray in [1, i] {
            for idx in 1..=f.bound(ray).max(0) {
                let x = Point::new(ray, idx);
                if f.eval(x) == x {
                    fixed.insert(x);
                }
            }
        }
        data.f_union.extend(fixed.iter().copied());
        data.words.push(word);
        data.sigmas.push(sigma);
        data.m.push(mi);
        data.f.push(f);
        data.f_sets.push(fixed);
    }
    Ok(data)
}

/// Inputs to [`sweep_into_ray1`].
#[derive(Clone, Debug, Default)]
pub struct SweepElements {
    /// Elements used to push points out of F, e.g. ωh_2, h_3, ..., h_n.
    pub movers: Vec<(String, HoughtonElement)>,
    /// f_2, ..., f_n.
    pub funnels: Vec<(String, HoughtonElement)>,
    /// The exceptional set F.
    pub f_set: BTreeSet<Point>,
    /// An element sending F into R_1 \ F, applied after the funnel.
    pub finisher: Option<(String, HoughtonElement)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    /// Letters (name, exponent), applied left to right.
    pub letters: Vec<(String, i64)>,
    pub element: HoughtonElement,
    pub images: Vec<Point>,
}

const ROUNDS: usize = 12;

struct State<'a> {
    els: &'a SweepElements,
    pts: Vec<Point>,
    letters: Vec<(String, i64)>,
    element: HoughtonElement,
}

impl State<'_> {
    fn apply(&mut self, name: &str, g: &HoughtonElement, e: i64) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        let p = g.pow(e);
        self.pts = self.pts.iter().map(|&x| p.eval(x)).collect();
        self.element = self.element.mul(&p)?;
        self.letters.push((name.to_string(), e));
        Ok(())
    }

    fn in_f(&self) -> usize {
        self.pts.iter().filter(|x| self.els.f_set.contains(x)).count()
    }
}

/// Largest index on ray 1 touched by any sweep element or by F.
fn far_threshold(els: &SweepElements) -> i64 {
    let mut w = els.f_set.iter().filter(|p| p.ray == 1).map(|p| p.index).max().unwrap_or(0);
    for (_, f) in &els.funnels {
        w = w.max(f.bound(1));
    }
    if let Some((_, g)) = &els.finisher {
        w = w.max(g.bound(1));
    }
    w
}

/// A word in the given elements sending `targets` into R_1 \ F.
///
/// Without a finisher, the movers first take every point out of F (greedy
/// choice of exponents, least |k| first) and the funnels then carry the
/// points far out along ray 1. With a finisher, the funnels move everything
/// outside F far out first and the finisher takes F itself into R_1 \ F.
pub fn sweep_into_ray1(els: &SweepElements, targets: &[Point]) -> Result<Sweep> {
    let n = els
        .funnels
        .first()
        .map(|f| f.1.n())
        .or_else(|| els.movers.first().map(|m| m.1.n()))
        .ok_or_else(|| Error::InvalidParams("no elements to sweep with".into()))?;
    for &x in targets {
        x.check(n)?;
    }
    let far = far_threshold(els);
    let mut st = State { els, pts: targets.to_vec(), letters: Vec::new(), element: HoughtonElement::identity(n) };
    let done = |st: &State| st.pts.iter().all(|p| p.ray == 1 && !els.f_set.contains(p));

    for _ in 0..ROUNDS {
        if done(&st) {
            break;
        }
        if els.finisher.is_none() {
            leave_f(&mut st)?;
        }
        funnel(&mut st, far)?;
        if let Some((name, g)) = &els.finisher {
            if st.pts.iter().all(|p| (p.ray == 1 && p.index > far) || els.f_set.contains(p)) {
                if st.in_f() > 0 {
                    st.apply(name, g, 1)?;
                }
            }
        }
    }
    if !done(&st) {
        return Err(Error::Internal(format!(
            "sweep did not converge; images {}",
            st.pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
        )));
    }
    Ok(Sweep { letters: st.letters, element: st.element, images: st.pts })
}

/// One pass over the movers, each raised to the power that leaves the fewest
/// points in F.
fn leave_f(st: &mut State) -> Result<()> {
    let bound: i64 = 4 * (st.els.f_set.len() as i64 + st.pts.len() as i64) + 8;
    for (name, g) in st.els.movers.clone() {
        let mut best = (st.in_f(), 0i64);
        if best.0 == 0 {
            return Ok(());
        }
        for a in 1..=bound {
            for e in [a, -a] {
                let p = g.pow(e);
                let c = st.pts.iter().filter(|&&x| st.els.f_set.contains(&p.eval(x))).count();
                if c < best.0 {
                    best = (c, e);
                }
            }
            if best.0 == 0 {
                break;
            }
        }
        st.apply(&name, &g, best.1)?;
    }
    Ok(())
}

/// Carries every point not in F to ray 1 beyond `far`, one funnel at a time.
fn funnel(st: &mut State, far: i64) -> Result<()> {
    let is_far = |p: &Point| p.ray == 1 && p.index > far;
    for (name, f) in st.els.funnels.clone() {
        let movable: Vec<Point> =
            st.pts.iter().copied().filter(|p| !is_far(p) && !st.els.f_set.contains(p) && f.eval(*p) != *p).collect();
        if movable.is_empty() {
            continue;
        }
        // positive powers of f push its orbits out along ray 1
        let mut e = 0;
        let mut cur = movable.clone();
        while !cur.iter().all(is_far) {
            cur = cur.iter().map(|&x| f.eval(x)).collect();
            e += 1;
            if e > 1_000_000 {
                return Err(Error::Internal(format!("{name} does not carry its orbits to ray 1")));
            }
        }
        st.apply(&name, &f, e)?;
    }
    Ok(())
}

/// Movers, funnels and F for a descriptor's own generators h_2..h_n.
pub fn sweep_elements(desc: &SubgroupDescriptor, data: &TranslationData) -> Result<SweepElements> {
    let movers = desc.generators()?.into_iter().enumerate().map(|(i, h)| (format!("h_{}", i + 2), h)).collect();
    let funnels = data.f.iter().enumerate().map(|(i, f)| (format!("f_{}", i + 2), f.clone())).collect();
    Ok(SweepElements { movers, funnels, f_set: data.f_union.clone(), finisher: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(s: &str) -> SubgroupDescriptor {
        SubgroupDescriptor::parse(s).unwrap()
    }

    #[test]
    fn full_lattice_is_trivial() {
        let data = choose_translation_elements(&desc("n=3; L=1,0;0,1; type=fsym")).unwrap();
        assert_eq!(data.d, 1);
        assert_eq!(data.m, vec![1, 1]);
        assert!(data.sigmas.iter().all(|s| s.is_identity()));
        assert_eq!(data.f[0], HoughtonElement::generator(3, 2).unwrap());
        assert!(data.f_union.is_empty());
    }

    #[test]
    fn sweep_single_point() {
        let d = desc("n=3; L=1,0;0,1; type=fsym");
        let data = choose_translation_elements(&d).unwrap();
        let els = sweep_elements(&d, &data).unwrap();
        let s = sweep_into_ray1(&els, &[Point::new(2, 1)]).unwrap();
        assert_eq!(s.images[0].ray, 1);
        assert!(sweep_into_ray1(&els, &[]).unwrap().letters.is_empty());
    }

    #[test]
    fn non_diagonal() {
        let d = desc("n=3; L=1,1;1,-1; type=alt");
        let data = choose_translation_elements(&d).unwrap();
        assert_eq!(data.d, 2);
        for (i, f) in data.f.iter().enumerate() {
            assert!(f.orbits().finite_cycles.is_empty());
            assert!(d.contains(f).unwrap());
            assert_eq!(f.pi(), TranslationVector::unit(2, i + 1).scale(2 * data.m[i]));
        }
        let els = sweep_elements(&d, &data).unwrap();
        let targets: Vec<Point> = data.f_union.iter().copied().chain([Point::new(3, 2), Point::new(2, 5)]).collect();
        let s = sweep_into_ray1(&els, &targets).unwrap();
        for (x, y) in targets.iter().zip(&s.images) {
            assert_eq!(s.element.eval(*x), *y);
            assert!(y.ray == 1 && !data.f_union.contains(y));
        }
    }
}
