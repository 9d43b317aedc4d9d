//! An element ω = ω_1ω_2 such that U = ⟨ω, h_2, ..., h_n⟩ for a finite-index
//! U with the FSym type and no odd commutator pair.
//!
//! ω_2 is the two-generation element of the lemma for ⟨Alt(Z), t^M⟩ (or the
//! FSym variant), transported to supp(f_2) along the orbits of f_2. ω_1 is a
//! prime-length cycle carrying the exceptional set F into ray 1, so powers of
//! ω recover both factors.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::SubgroupDescriptor;
use crate::element::HoughtonElement;
use crate::error::{Error, Result};
use crate::perm::{LinePerm, Parity, Point, RayPerm};
use crate::trace::{is_prime, lit_elem, named, xs, Assertion, ConstructionTrace, Expr, PointSet, Value};

use super::lemma::lemma_element;
use super::translation::{choose_translation_elements, sweep_into_ray1, SweepElements, TranslationData};

/// Number of random target sets checked by the sweep.
pub const SWEEP_SAMPLES: usize = 100;

/// Points of supp(f_2) identified with Z so that f_2 acts as t^M.
struct Phi {
    finv: HoughtonElement,
    m: i64,
    base: i64,
}

impl Phi {
    fn new(f: &HoughtonElement) -> Self {
        Phi { finv: f.inv(), m: f.shift(1), base: f.bound(1).max(0) + 1 }
    }

    fn from_line(&self, z: i64) -> Point {
        let (j, s) = (z.rem_euclid(self.m), z.div_euclid(self.m));
        let mut y = Point::new(1, self.base + j);
        if s >= 0 {
            return Point::new(1, self.base + j + s * self.m);
        }
        for _ in 0..-s {
            y = self.finv.eval(y);
        }
        y
    }

    fn pull_back(&self, p: &LinePerm) -> Result<RayPerm> {
        let map: BTreeMap<Point, Point> =
            p.entries().iter().map(|(&a, &b)| (self.from_line(a), self.from_line(b))).collect();
        RayPerm::from_map(map)
    }
}

fn next_prime_above(x: u64) -> u64 {
    (x + 1..).find(|&q| is_prime(q)).expect("primes are unbounded")
}

#[derive(Clone, Debug)]
pub struct Prop6 {
    pub data: TranslationData,
    pub h: Vec<HoughtonElement>,
    /// M = m_2 d, the translation length of f_2 on ray 1.
    pub big_m: i64,
    /// Block parameter of the lemma element, the least multiple of M that is at least 3.
    pub k_lemma: i64,
    pub tau: RayPerm,
    pub r: u64,
    pub q: u64,
    /// ω_2 = f_2^{-e} τ f_2^{e}.
    pub e: i64,
    pub omega1: RayPerm,
    pub omega2: RayPerm,
    pub omega: RayPerm,
}

pub fn prop6_omega(desc: &SubgroupDescriptor) -> Result<Prop6> {
    desc.validate()?;
    if desc.lattice().has_odd_pair() {
        return Err(Error::NotApplicable(
            "the lattice has an odd commutator pair, so n-1 generators already suffice".into(),
        ));
    }
    let data = choose_translation_elements(desc)?;
    let f2 = data.f_elem(2).clone();
    let phi = Phi::new(&f2);
    let big_m = phi.m;
    let k_lemma = (3 + big_m - 1) / big_m * big_m;
    let tau = phi.pull_back(&lemma_element(k_lemma, desc.sym_type())?)?;
    let r = tau.order().to_u64().ok_or_else(|| Error::Internal("order of tau overflows u64".into()))?;
    let fs: Vec<Point> = data.f_union.iter().copied().collect();
    let q = next_prime_above(r.max(2 * fs.len() as u64).max(2));

    // one q-cycle alternating F with the smallest points of R_1 \ F
    let fresh: Vec<Point> =
        (1..).map(|m| Point::new(1, m)).filter(|p| !data.f_union.contains(p)).take(q as usize - fs.len()).collect();
    let mut cyc = Vec::with_capacity(q as usize);
    for (i, p) in fresh.iter().enumerate() {
        if let Some(x) = fs.get(i) {
            cyc.push(*x);
        }
        cyc.push(*p);
    }
    let omega1 = RayPerm::cycle(&cyc)?;

    let s1 = omega1.support_set();
    let mut e = 0i64;
    let omega2 = loop {
        let g = f2.pow(e);
        let cand = tau.map_points(|x| g.eval(x));
        if cand.support().all(|x| x.ray == 1 && !s1.contains(&x)) {
            break cand;
        }
        e += 1;
        if e > 100_000 {
            return Err(Error::Internal("no conjugate of tau clears supp(omega_1)".into()));
        }
    };
    let omega = omega1.compose(&omega2);
    let h = desc.generators()?;
    Ok(Prop6 { data, h, big_m, k_lemma, tau, r, q, e, omega1, omega2, omega })
}

/// Random finite subsets of X_n near the windows of the f_i.
pub fn random_targets(n: usize, reach: i64, samples: usize, seed: u64) -> Vec<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let size = rng.gen_range(1..=6);
            let mut v: Vec<Point> =
                (0..size).map(|_| Point::new(rng.gen_range(1..=n), rng.gen_range(1..=reach))).collect();
            v.sort();
            v.dedup();
            v
        })
        .collect()
}

pub fn build_prop6(desc: &SubgroupDescriptor, seed: u64) -> Result<ConstructionTrace> {
    let p = prop6_omega(desc)?;
    let n = desc.n();
    let mut t = ConstructionTrace::new("prop6");
    t.param("n", n as i64);
    t.param("d", p.data.d);
    t.param("M", p.big_m);
    t.param("k", p.k_lemma);
    t.param("r", p.r as i64);
    t.param("q", p.q as i64);
    t.param("e", p.e);
    t.param("F", p.data.f_union.len() as i64);
    t.param("seed", seed as i64);
    t.note(format!("descriptor {desc}"));

    let elem = |x: &RayPerm| HoughtonElement::from_finitary(n, x).map(Value::Elem);
    for (i, h) in p.h.iter().enumerate() {
        t.set(&format!("h_{}", i + 2), Value::Elem(h.clone()));
    }
    for (i, f) in p.data.f.iter().enumerate() {
        t.set(&format!("f_{}", i + 2), Value::Elem(f.clone()));
    }
    t.set("tau", elem(&p.tau)?);
    t.set("omega_1", elem(&p.omega1)?);
    t.set("omega_2", elem(&p.omega2)?);
    t.set("omega", elem(&p.omega)?);

    for i in 2..=n {
        let f = format!("f_{i}");
        let mi = p.data.m[i - 2];
        t.check(format!("{f} has no finite cycles"), Assertion::NoFiniteCycles(named(&f)));
        t.check(
            format!("{f} has {} infinite orbits", mi * p.data.d),
            Assertion::InfiniteOrbits(named(&f), (mi * p.data.d) as usize),
        );
    }
    // transported lemma identity: [beta_{r+1}, tau] is the image of (1 2 3)
    let phi = Phi::new(p.data.f_elem(2));
    let rl = p.k_lemma * 2 * (2 * p.k_lemma - 1) * (2 * p.k_lemma - 2) / 6;
    let c123 = phi.pull_back(&LinePerm::cycle(&[1, 2, 3])?)?;
    let f2pow = |e: i64| named("f_2").pow(e);
    t.check(
        "[beta_r+1,tau]=phi^-1(1,2,3)",
        Assertion::Equal(
            named("tau").conj(f2pow(-2 * (rl + 1) * p.k_lemma / p.big_m)).comm(named("tau")),
            lit_elem(HoughtonElement::from_finitary(n, &c123)?),
        ),
    );
    t.check("omega_2=f_2^-e tau f_2^e", Assertion::Equal(named("omega_2"), named("tau").conj(f2pow(p.e))));
    t.check("omega=omega_1 omega_2", Assertion::Equal(named("omega"), named("omega_1").times(named("omega_2"))));
    t.check("supp(omega_1),supp(omega_2) disjoint", Assertion::SupportsDisjoint(named("omega_1"), named("omega_2")));
    t.check(format!("omega_1 is a {}-cycle", p.q), Assertion::CycleLengths(named("omega_1"), p.q as usize));
    t.check("omega_1 is one cycle", Assertion::CycleCount(named("omega_1"), 1));
    t.check(format!("order(omega_1)={}", p.q), Assertion::Order(named("omega_1"), p.q));
    t.check(format!("{} is prime", p.q), Assertion::Prime(p.q));
    t.check("omega_1 even", Assertion::ParityIs(named("omega_1"), Parity::Even));
    let fpts = xs(p.data.f_union.iter().copied());
    t.check("F in supp(omega_1)", Assertion::SupportContains(named("omega_1"), fpts.clone()));
    let ray1_or_f = PointSet { rays: vec![1], include: fpts.iter().cloned().collect(), ..Default::default() };
    t.check("supp(omega_1) in R_1 u F", Assertion::SupportWithin(named("omega_1"), ray1_or_f));
    let ray1_minus_f = PointSet { rays: vec![1], exclude: fpts.iter().cloned().collect(), ..Default::default() };
    t.check("(F)omega_1 in R_1 \\ F", Assertion::ImagesWithin(named("omega_1"), fpts, ray1_minus_f.clone()));
    t.check(
        "supp(omega_2) in R_1",
        Assertion::SupportWithin(named("omega_2"), PointSet { rays: vec![1], ..Default::default() }),
    );
    let r = p.r as i64;
    let q = p.q as i64;
    t.check(format!("omega^{r}=omega_1^{r}"), Assertion::Equal(named("omega").pow(r), named("omega_1").pow(r)));
    // ω_1 = ω^{ru} with ru ≡ 1 mod q, and ω_2 = ω^{qv} with qv ≡ 1 mod r
    let u = inverse_mod(r, q)?;
    let v = inverse_mod(q, r)?;
    t.check("omega_1 in <omega>", Assertion::Equal(named("omega").pow(r * u), named("omega_1")));
    t.check("omega_2 in <omega>", Assertion::Equal(named("omega").pow(q * v), named("omega_2")));

    let els = SweepElements {
        movers: Vec::new(),
        funnels: p.data.f.iter().enumerate().map(|(i, f)| (format!("f_{}", i + 2), f.clone())).collect(),
        f_set: p.data.f_union.clone(),
        finisher: Some(("omega_1".into(), HoughtonElement::from_finitary(n, &p.omega1)?)),
    };
    let reach = p.data.f.iter().flat_map(|f| f.bounds()).max().unwrap_or(0).max(1) + 4;
    for (j, targets) in random_targets(n, reach, SWEEP_SAMPLES, seed).into_iter().enumerate() {
        let sweep = sweep_into_ray1(&els, &targets)?;
        let word = if sweep.letters.is_empty() {
            lit_elem(HoughtonElement::identity(n))
        } else {
            Expr::Prod(sweep.letters.iter().map(|(name, e)| named(name).pow(*e)).collect())
        };
        t.check(
            format!("sweep {j}: {} points into R_1 \\ F", targets.len()),
            Assertion::ImagesWithin(word, xs(targets), ray1_minus_f.clone()),
        );
    }
    Ok(t)
}

fn inverse_mod(a: i64, m: i64) -> Result<i64> {
    if m == 1 {
        return Ok(0);
    }
    let g = num_integer::Integer::extended_gcd(&a.rem_euclid(m), &m);
    if g.gcd != 1 {
        return Err(Error::Internal(format!("{a} is not invertible mod {m}")));
    }
    Ok(g.x.rem_euclid(m))
}
