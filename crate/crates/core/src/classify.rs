//! Finite-index subgroups of H_n: descriptors, index, d(U), abelianisation,
//! membership, enumeration and normal forms.
//!
//! Every U ≤_f H_n contains Alt(X_n), so it is determined by the lattice
//! π(U) with a basis v_2..v_n, whether U contains all of FSym(X_n), and for
//! the Alt type which coset of Alt(X_n) inside each fibre π⁻¹(v_i) lies in U.
//! That coset is recorded as one twist bit per basis row: the row's
//! generator is h_i = ε·v̂_i with ε = ((1,1),(1,2)) when the bit is set.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::constructions::{genofgc_generators, lemma_element, omega_prime, prop6_omega, OmegaParams};
use crate::element::HoughtonElement;
use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::perm::{line_embed, point_project, LinePerm, Parity, Point, RayPerm};

/// Whether the subgroup contains all finitary permutations or only the even ones.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SymType {
    Fsym,
    Alt,
}

impl SymType {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "fsym" => Ok(SymType::Fsym),
            "alt" => Ok(SymType::Alt),
            other => Err(Error::Parse(format!("unknown type {other:?}, expected fsym or alt"))),
        }
    }
}

impl fmt::Display for SymType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymType::Fsym => "fsym",
            SymType::Alt => "alt",
        })
    }
}

/// The transposition ((1,1),(1,2)).
pub fn epsilon() -> RayPerm {
    RayPerm::transposition(Point::new(1, 1), Point::new(1, 2))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubgroupDescriptor {
    n: usize,
    lattice: LatticeBasis,
    sym_type: SymType,
    twists: Vec<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Abelianization {
    /// Z^rank
    Free(usize),
    /// Z^rank x C2
    FreeTimesC2(usize),
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Abelianization::Free(r) => write!(f, "Z^{r}"),
            Abelianization::FreeTimesC2(r) => write!(f, "Z^{r} x C2"),
        }
    }
}

/// Canonical form of a descriptor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalForm {
    pub descriptor: SubgroupDescriptor,
    /// ⟨Alt(X_2), ((1,1),(1,2))g_2⟩, whose isomorphism type relative to
    /// ⟨Alt(X_2), g_2⟩ is not decided here.
    pub exceptional: bool,
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor)?;
        if self.exceptional {
            f.write_str(" [exceptional]")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassReport {
    pub index: u64,
    pub d: usize,
    pub abelianization: Abelianization,
    pub normal_form: NormalForm,
    pub notes: Vec<String>,
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "index={}", self.index)?;
        writeln!(f, "d={}", self.d)?;
        writeln!(f, "ab={}", self.abelianization)?;
        writeln!(f, "normal_form={}", self.normal_form)?;
        for n in &self.notes {
            writeln!(f, "note={n}")?;
        }
        Ok(())
    }
}

impl SubgroupDescriptor {
    /// Builds a descriptor without validating it; see [`Self::validate`].
    /// `twists` may be empty, meaning no twisted rows.
    pub fn new(n: usize, lattice: LatticeBasis, sym_type: SymType, twists: Vec<bool>) -> Self {
        let twists = if twists.is_empty() { vec![false; lattice.rows().len()] } else { twists };
        SubgroupDescriptor { n, lattice, sym_type, twists }
    }

    pub fn diagonal(c: &[i64], sym_type: SymType, twists: Vec<bool>) -> Self {
        Self::new(c.len() + 1, LatticeBasis::diagonal(c), sym_type, twists)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn sym_type(&self) -> SymType {
        self.sym_type
    }

    pub fn twists(&self) -> &[bool] {
        &self.twists
    }

    /// The reason this descriptor does not describe a finite-index subgroup.
    pub fn violation(&self) -> Option<String> {
        let m = self.n.checked_sub(1).filter(|&m| m >= 1);
        let Some(m) = m else { return Some(format!("n must be at least 2, got {}", self.n)) };
        if self.lattice.dim() != m {
            return Some(format!("lattice lives in Z^{} but n={} needs Z^{m}", self.lattice.dim(), self.n));
        }
        if self.lattice.rows().len() != m {
            return Some(format!("expected {m} basis rows, got {}", self.lattice.rows().len()));
        }
        if !self.lattice.has_finite_index() {
            return Some("lattice does not have finite index".into());
        }
        if self.twists.len() != m {
            return Some(format!("expected {m} twist entries, got {}", self.twists.len()));
        }
        if self.sym_type == SymType::Fsym && self.twists.iter().any(|&t| t) {
            return Some("twists only make sense for the alt type".into());
        }
        if self.sym_type == SymType::Alt && self.lattice.has_odd_pair() {
            return Some(
                "alt type impossible: two basis rows have an odd commutator, which forces FSym(X_n) into U".into(),
            );
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        match self.violation() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidDescriptor(v)),
        }
    }

    /// h_2, ..., h_n: the twisted canonical preimages of the basis rows.
    pub fn generators(&self) -> Result<Vec<HoughtonElement>> {
        self.validate()?;
        let eps = HoughtonElement::from_finitary(self.n, &epsilon())?;
        self.lattice
            .rows()
            .iter()
            .zip(&self.twists)
            .map(|(v, &tw)| {
                let h = HoughtonElement::canonical_preimage(self.n, v)?;
                if tw {
                    eps.mul(&h)
                } else {
                    Ok(h)
                }
            })
            .collect()
    }

    pub fn index(&self) -> Result<u64> {
        self.validate()?;
        let l = self.lattice.index().ok_or(Error::InfiniteIndex)?;
        Ok(l * if self.sym_type == SymType::Alt { 2 } else { 1 })
    }

    pub fn d(&self) -> Result<usize> {
        self.validate()?;
        Ok(if self.n == 2 {
            2
        } else if self.sym_type == SymType::Alt || self.lattice.has_odd_pair() {
            self.n - 1
        } else {
            self.n
        })
    }

    pub fn abelianization(&self) -> Result<Abelianization> {
        self.validate()?;
        let r = self.n - 1;
        Ok(if self.sym_type == SymType::Fsym && !self.lattice.has_odd_pair() {
            Abelianization::FreeTimesC2(r)
        } else {
            Abelianization::Free(r)
        })
    }

    /// Whether g lies in the subgroup.
    pub fn contains(&self, g: &HoughtonElement) -> Result<bool> {
        self.validate()?;
        if g.n() != self.n {
            return Err(Error::AmbientMismatch { left: g.n(), right: self.n });
        }
        let Some(x) = self.lattice.coordinates(&g.pi())? else { return Ok(false) };
        if self.sym_type == SymType::Fsym {
            return Ok(true);
        }
        let residual = g.mul(&self.word(&x)?.inv())?;
        Ok(residual.parity_if_fsym()? == Parity::Even)
    }

    /// h_2^{x_2} ... h_n^{x_n}.
    pub fn word(&self, x: &[i64]) -> Result<HoughtonElement> {
        let gens = self.generators()?;
        let mut acc = HoughtonElement::identity(self.n);
        for (h, &e) in gens.iter().zip(x) {
            if e != 0 {
                acc = acc.mul(&h.pow(e))?;
            }
        }
        Ok(acc)
    }

    pub fn normalize(&self) -> Result<NormalForm> {
        self.validate()?;
        if let Some(mut c) = self.lattice.diagonal_form()? {
            c.sort_unstable();
            let exceptional = self.n == 2 && c[0] == 1 && self.sym_type == SymType::Alt && self.twists[0];
            let twists = vec![exceptional; c.len()];
            let descriptor = SubgroupDescriptor::diagonal(&c, self.sym_type, twists);
            return Ok(NormalForm { descriptor, exceptional });
        }
        // general lattice: Hermite normal form, with the twist of each new row
        // read off by membership
        let lattice = self.lattice.hnf();
        let mut twists = Vec::new();
        for v in lattice.rows() {
            let twisted =
                self.sym_type == SymType::Alt && !self.contains(&HoughtonElement::canonical_preimage(self.n, v)?)?;
            twists.push(twisted);
        }
        let descriptor = SubgroupDescriptor::new(self.n, lattice, self.sym_type, twists);
        Ok(NormalForm { descriptor, exceptional: false })
    }

    pub fn report(&self) -> Result<ClassReport> {
        let normal_form = self.normalize()?;
        let mut notes = Vec::new();
        if normal_form.exceptional {
            notes.push("isomorphism to <Alt(X_2), g_2> unknown; no permutation of X_2 induces one".to_string());
        }
        if self.lattice.diagonal_form()?.is_none() {
            notes.push("non-diagonal lattice: normal form identifies equal subgroups only".to_string());
        }
        Ok(ClassReport {
            index: self.index()?,
            d: self.d()?,
            abelianization: self.abelianization()?,
            normal_form,
            notes,
        })
    }

    /// Parses `n=3; L=2,0;0,3; type=alt; eps=(swap,trivial)`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("{m} in descriptor {s:?}"));
        // the lattice itself contains ';', so glue segments without a key back on
        let mut fields: Vec<String> = Vec::new();
        for seg in s.split(';') {
            match (seg.contains('='), fields.last_mut()) {
                (false, Some(last)) => {
                    last.push(';');
                    last.push_str(seg.trim());
                }
                _ => fields.push(seg.trim().to_string()),
            }
        }
        let (mut n, mut lattice, mut sym, mut twists) = (None, None, None, Vec::new());
        for f in &fields {
            let (key, val) = f.split_once('=').ok_or_else(|| bad("missing '='"))?;
            match key.trim() {
                "n" => n = Some(val.trim().parse::<usize>().map_err(|_| bad("bad n"))?),
                "L" => lattice = Some(LatticeBasis::parse(val)?),
                "type" => sym = Some(SymType::parse(val)?),
                "eps" => twists = parse_twists(val)?,
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        let lattice = lattice.ok_or_else(|| bad("missing L"))?;
        let n = n.unwrap_or(lattice.dim() + 1);
        Ok(Self::new(n, lattice, sym.ok_or_else(|| bad("missing type"))?, twists))
    }
}

pub fn parse_twists(s: &str) -> Result<Vec<bool>> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|t| match t.trim() {
            "swap" => Ok(true),
            "trivial" => Ok(false),
            other => Err(Error::Parse(format!("twist {other:?} is neither swap nor trivial"))),
        })
        .collect()
}

impl fmt::Display for SubgroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; L={}; type={}", self.n, self.lattice, self.sym_type)?;
        if self.twists.iter().any(|&t| t) {
            let v: Vec<&str> = self.twists.iter().map(|&t| if t { "swap" } else { "trivial" }).collect();
            write!(f, "; eps=({})", v.join(","))?;
        }
        Ok(())
    }
}

/// All finite-index subgroups with diagonal lattice ⟨c_2e_1, ..., c_ne_{n-1}⟩.
pub fn enumerate(n: usize, c: &[i64]) -> Result<Vec<SubgroupDescriptor>> {
    if c.len() + 1 != n {
        return Err(Error::InvalidParams(format!("n={n} needs {} exponents, got {}", n - 1, c.len())));
    }
    if c.iter().any(|&x| x < 1) {
        return Err(Error::InvalidParams(format!("exponents must be positive: {c:?}")));
    }
    let mut out = vec![SubgroupDescriptor::diagonal(c, SymType::Fsym, Vec::new())];
    if c.iter().filter(|&&x| x % 2 == 1).count() >= 2 {
        return Ok(out);
    }
    let m = c.len();
    for mask in 0..1u32 << m {
        let twists = (0..m).map(|i| mask >> i & 1 == 1).collect();
        out.push(SubgroupDescriptor::diagonal(c, SymType::Alt, twists));
    }
    Ok(out)
}

/// Enumeration for an arbitrary lattice; only diagonal lattices are supported.
pub fn enumerate_lattice(n: usize, lattice: &LatticeBasis) -> Result<Vec<SubgroupDescriptor>> {
    match lattice.diagonal_form()? {
        Some(c) => enumerate(n, &c),
        None => Err(Error::Unsupported("enumeration is only available for diagonal lattices".into())),
    }
}

/// For every pair of descriptors, an element lying in exactly one of them.
pub fn distinctness_witnesses(descs: &[SubgroupDescriptor]) -> Result<Vec<(usize, usize, HoughtonElement)>> {
    let mut candidates = Vec::new();
    for d in descs {
        candidates.push(HoughtonElement::from_finitary(d.n(), &epsilon())?);
        candidates.extend(d.generators()?);
    }
    let mut out = Vec::new();
    for i in 0..descs.len() {
        for j in i + 1..descs.len() {
            let mut found = None;
            for g in &candidates {
                if descs[i].contains(g)? != descs[j].contains(g)? {
                    found = Some(g.clone());
                    break;
                }
            }
            let g =
                found.ok_or_else(|| Error::Internal(format!("no witness separates {} and {}", descs[i], descs[j])))?;
            out.push((i, j, g));
        }
    }
    Ok(out)
}

/// A generating set of size d(U) together with how far it is certified.
#[derive(Clone, Debug)]
pub struct GeneratingSet {
    pub elements: Vec<HoughtonElement>,
    /// Whether generation follows from constructions whose checks all replay.
    pub certified: bool,
    pub notes: Vec<String>,
}

fn embed_line(p: &LinePerm) -> Result<HoughtonElement> {
    HoughtonElement::from_finitary(2, &p.map_points(line_embed))
}

/// λ⁻¹yλ for an involution λ of X_n that commutes with the translations of y
/// far out; `margin` bounds how far past y's window λ differs from them.
fn transport(y: &HoughtonElement, lambda: impl Fn(Point) -> Point, margin: i64) -> Result<HoughtonElement> {
    let n = y.n();
    let mut table = BTreeMap::new();
    for ray in 1..=n {
        for m in 1..=y.bound(ray) + margin {
            let x = Point::new(ray, m);
            table.insert(x, lambda(y.eval(lambda(x))));
        }
    }
    HoughtonElement::from_parts(n, y.shifts().to_vec(), table)
}

/// Swaps (ray, 1+jc) and (ray, 2+jc) for every j >= 0 (or j >= 1 on the line).
fn pair_swap(ray: usize, c: i64, from: i64) -> impl Fn(Point) -> Point {
    move |x: Point| {
        if x.ray != ray || (x.index - 1).div_euclid(c) < from {
            return x;
        }
        match (x.index - 1).rem_euclid(c) {
            0 => Point::new(ray, x.index + 1),
            1 => Point::new(ray, x.index - 1),
            _ => x,
        }
    }
}

impl SubgroupDescriptor {
    /// d(U) elements generating U.
    pub fn generating_set(&self) -> Result<GeneratingSet> {
        self.validate()?;
        let n = self.n;
        let Some(c) = self.lattice.diagonal_form()? else {
            return self.non_diagonal_generating_set();
        };
        let twisted: Vec<bool> = (0..n - 1)
            .map(|i| Ok(!self.contains(&HoughtonElement::generator_pow(n, i + 2, c[i])?)?))
            .collect::<Result<_>>()?;
        if n == 2 {
            return self.rank_one_generating_set(c[0], twisted[0]);
        }
        if c.iter().all(|&x| x == 1) {
            let elements = (2..=n).map(|i| HoughtonElement::generator(n, i)).collect::<Result<_>>()?;
            return Ok(GeneratingSet { elements, certified: true, notes: Vec::new() });
        }
        let mut elements = genofgc_generators(&c)?;
        let mut notes = Vec::new();
        if self.sym_type == SymType::Fsym {
            if !self.lattice.has_odd_pair() {
                elements.push(HoughtonElement::from_finitary(n, &epsilon())?);
            }
            return Ok(GeneratingSet { elements, certified: true, notes });
        }
        // twisted alt type: transport ⟨Alt, g_i^{c_i}⟩ onto U
        if let Some(i) = (0..n - 1).find(|&i| twisted[i] && c[i] % 2 == 1) {
            let (ri, rj) = (i + 2, if i == 0 { 3 } else { 2 });
            let h = HoughtonElement::generator(n, rj)?.mul(&HoughtonElement::generator(n, ri)?.inv())?;
            elements = elements.iter().map(|y| y.conjugate(&h)).collect::<Result<_>>()?;
            notes.push(format!("conjugated by g{rj} g{ri}^-1 to twist row {}", i + 1));
        }
        for i in (0..n - 1).filter(|&i| twisted[i] && c[i] % 2 == 0) {
            let lambda = pair_swap(i + 2, c[i], 0);
            elements = elements.iter().map(|y| transport(y, &lambda, c[i] + 2)).collect::<Result<_>>()?;
            notes.push(format!("transported along the pair swaps of ray {} to twist row {}", i + 2, i + 1));
        }
        Ok(GeneratingSet { elements, certified: true, notes })
    }

    fn rank_one_generating_set(&self, k: i64, twisted: bool) -> Result<GeneratingSet> {
        let gk = HoughtonElement::generator_pow(2, 2, k)?;
        let kl = (3 + k - 1) / k * k;
        let lemma = lemma_element(kl, self.sym_type)?;
        if !twisted {
            return Ok(GeneratingSet { elements: vec![embed_line(&lemma)?, gk], certified: true, notes: Vec::new() });
        }
        if k == 1 {
            let s = embed_line(&LinePerm::cycle(&[0, 1, 2])?)?;
            let u = embed_line(&LinePerm::transposition(0, 1))?.mul(&HoughtonElement::generator(2, 2)?)?;
            let notes = vec!["exceptional subgroup; generated by (0 1 2) and (0 1)t".to_string()];
            return Ok(GeneratingSet { elements: vec![s, u], certified: true, notes });
        }
        // μ swapping 1+jk and 2+jk (j >= 1) conjugates t^k to (1 2)t^k
        let mu = pair_swap(1, k, 1);
        let line_mu = |z: i64| point_project(mu(line_embed(z))).expect("ray 1 point");
        let x = LinePerm::from_map(lemma.entries().iter().map(|(&a, &b)| (line_mu(a), line_mu(b))).collect())?;
        let eps = HoughtonElement::from_finitary(2, &epsilon())?;
        Ok(GeneratingSet {
            elements: vec![embed_line(&x)?, eps.mul(&gk)?],
            certified: true,
            notes: vec!["lemma element transported along the pair swaps of ray 1".to_string()],
        })
    }

    fn non_diagonal_generating_set(&self) -> Result<GeneratingSet> {
        if self.sym_type == SymType::Fsym && !self.lattice.has_odd_pair() {
            let p = prop6_omega(self)?;
            let mut elements = vec![HoughtonElement::from_finitary(self.n, &p.omega)?];
            elements.extend(p.h);
            return Ok(GeneratingSet { elements, certified: true, notes: Vec::new() });
        }
        let (omega, mut h) = placed_erratum_omega(self)?;
        h[0] = HoughtonElement::from_finitary(self.n, &omega)?.mul(&h[0])?;
        Ok(GeneratingSet {
            elements: h,
            certified: false,
            notes: vec![
                "omega comes from the two-block construction whose stated identities fail on replay; generation is not certified"
                    .to_string(),
            ],
        })
    }
}

/// ω placed on ray 1 for generators h_2, h_3, ... with t_1(h_2), t_1(h_3) > 0.
/// Returns ω and the normalised generators.
fn placed_erratum_omega(desc: &SubgroupDescriptor) -> Result<(RayPerm, Vec<HoughtonElement>)> {
    let mut h = desc.generators()?;
    if h.len() < 2 {
        return Err(Error::NotApplicable("needs n >= 3".into()));
    }
    // basis changes keep ⟨h⟩ = ⟨Alt(X_n), h⟩ the same subgroup of U
    let nz = h.iter().position(|g| g.t1() != 0).ok_or_else(|| Error::Internal("no generator moves ray 1".into()))?;
    h.swap(0, nz);
    if h[1].t1() == 0 {
        h[1] = h[1].mul(&h[0])?;
    }
    for g in h.iter_mut().take(2) {
        if g.t1() < 0 {
            *g = g.inv();
        }
    }
    let s = h[1].t1();
    let dd = 8 / num_integer::gcd(s, 8);
    let k = s * dd;
    let h3 = h[1].pow(dd);
    let tau = HoughtonElement::commutator(&h[0], &h3)?
        .as_finitary()
        .ok_or_else(|| Error::Internal("[h_2, h_3^d] is not finitary".into()))?;
    let p = tau.order().to_i64().ok_or_else(|| Error::Internal("order of tau too large".into()))?;
    let (_, _, wp) = omega_prime(&OmegaParams::new(k, p)?);
    let tau_supp = tau.support_set();
    let mut c = (h3.bound(1) + k - 1) / k * k;
    loop {
        let w = wp.map_points(|m| Point::new(1, m + c));
        let cm = HoughtonElement::commutator(&HoughtonElement::from_finitary(desc.n(), &w)?, &h3)?;
        let cm = cm.as_finitary().ok_or_else(|| Error::Internal("[omega, h_3^d] is not finitary".into()))?;
        if w.support().chain(cm.support()).all(|x| !tau_supp.contains(&x)) {
            return Ok((w, h));
        }
        c += k;
    }
}
