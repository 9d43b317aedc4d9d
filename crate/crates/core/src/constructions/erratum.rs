//! The two-block element ω′ = σ_1σ_2′ whose commutator with t^k is meant to
//! produce consecutive 3-cycles (q q+1 q+2), (q+1 q+2 q+3), ...

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use crate::engine::GenClass;
use crate::error::{Error, Result};
use crate::perm::LinePerm;
use crate::trace::{lit_line, named, zs, Assertion, ConstructionTrace, Expr, PointSet, Pt, Value};

/// Integer parameters of the construction for block length k and τ of order p.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OmegaParams {
    pub k: i64,
    pub p: i64,
    pub p_prime: i64,
    pub a: i64,
    pub b: i64,
    pub q: i64,
}

impl OmegaParams {
    pub fn new(k: i64, p: i64) -> Result<Self> {
        if k < 8 || k % 8 != 0 {
            return Err(Error::InvalidParams(format!("k must be a positive multiple of 8, got {k}")));
        }
        if p < 1 {
            return Err(Error::InvalidParams(format!("order p must be positive, got {p}")));
        }
        // least multiple of p with p' - 1 >= k + 2
        let p_prime = (k + 3 + p - 1) / p * p;
        let a = (p_prime - 3) / k;
        let b = (p_prime - 3) % k;
        Ok(OmegaParams { k, p, p_prime, a, b, q: 2 * (a + 1) * k + 1 })
    }

    fn blocks(&self) -> BTreeSet<i64> {
        let k = self.k;
        (0..=self.a + 1).flat_map(|j| 2 * k * j + 1..=2 * k * j + k).collect()
    }

    pub fn support(&self, i: usize) -> BTreeSet<i64> {
        let (k, a, b) = (self.k, self.a, self.b);
        let excluded: BTreeSet<i64> = if i == 1 {
            (3..=k).chain(2 * k + 1 + b..=3 * k).collect()
        } else {
            let top = 2 * (a + 1) * k;
            (1 + b..=2 * k).chain([top + 1]).chain(top + 4..=top + k).collect()
        };
        self.blocks().difference(&excluded).copied().collect()
    }
}

/// The single cycle through `pts` in increasing order, closing max ↦ min.
pub fn ascending_cycle(pts: &BTreeSet<i64>) -> LinePerm {
    let v: Vec<i64> = pts.iter().copied().collect();
    if v.len() < 2 {
        return LinePerm::identity();
    }
    LinePerm::cycle(&v).expect("distinct points")
}

/// σ_1, σ_2′ and ω′ = σ_1σ_2′.
pub fn omega_prime(par: &OmegaParams) -> (LinePerm, LinePerm, LinePerm) {
    let s1 = ascending_cycle(&par.support(1));
    let s2 = ascending_cycle(&par.support(2)).shift(2 * (par.a + 2) * par.k);
    let w = s1.compose(&s2);
    (s1, s2, w)
}

pub fn build_erratum_omega(k: i64, tau: &LinePerm) -> Result<ConstructionTrace> {
    let p = tau.order().to_i64().ok_or_else(|| Error::InvalidParams("order of tau too large".into()))?;
    let par = OmegaParams::new(k, p)?;
    let OmegaParams { p_prime, a, b, q, .. } = par;
    let mut t = ConstructionTrace::new("erratum_omega");
    for (key, v) in [("k", k), ("p", p), ("p'", p_prime), ("a", a), ("b", b), ("q", q)] {
        t.param(key, v);
    }
    let (s1, s2p, wp) = omega_prime(&par);
    t.set("tau", Value::Line(tau.clone()));
    t.set("sigma_1", Value::Line(s1));
    t.set("sigma_2'", Value::Line(s2p));
    t.set("omega'", Value::Line(wp.clone()));

    // [x, t^k] = x⁻¹ · t^{-k} x t^k
    let comm_tk = |x: Expr| x.clone().inv().times(x.shift(k));
    t.set("alpha", t.eval(&comm_tk(named("omega'")))?);
    let beta_shift = (4 * (a + 1) + 2) * k;
    t.set("beta", t.eval(&named("alpha").shift(beta_shift))?);

    // least c in kN moving ω clear of τ and of the commutator's support
    let tau_supp = tau.support_set();
    let mut c = k;
    loop {
        let w = wp.shift(c);
        let cm = w.inverse().compose(&w.shift(k));
        let clear = w.support().all(|x| !tau_supp.contains(&x)) && cm.support().all(|x| !tau_supp.contains(&x));
        if clear && w.min_support().map_or(true, |m| m >= 1) {
            break;
        }
        c += k;
    }
    t.param("c", c);
    t.set("omega", Value::Line(wp.shift(c)));

    let z = |x: i64| Pt::Z(x);
    let c3 = |x: i64| lit_line(LinePerm::cycle(&[x, x + 1, x + 2]).expect("distinct points"));
    t.check("p | p'", Assertion::Equal(lit_line(tau.pow(p_prime)), lit_line(LinePerm::identity())));
    t.check(
        format!("sigma_1 is a {}-cycle", p_prime - 1),
        Assertion::CycleLengths(named("sigma_1"), (p_prime - 1) as usize),
    );
    t.check(
        format!("sigma_2' is a {}-cycle", p_prime - 1),
        Assertion::CycleLengths(named("sigma_2'"), (p_prime - 1) as usize),
    );
    t.check(
        "alpha=[omega',t^k] splits",
        Assertion::Equal(named("alpha"), comm_tk(named("sigma_1")).times(comm_tk(named("sigma_2'")))),
    );
    t.check(format!("max supp(alpha)={}", q + 2), Assertion::MaxSupport(named("alpha"), z(q + 2)));
    t.check("min supp(alpha)=1", Assertion::MinSupport(named("alpha"), z(1)));
    t.check(
        format!("alpha: {}->{}->{}", q - k + 1, q + 1, q + 2),
        Assertion::MapsTo(named("alpha"), vec![(z(q - k + 1), z(q + 1)), (z(q + 1), z(q + 2))]),
    );
    t.check(format!("min supp(beta)={q}"), Assertion::MinSupport(named("beta"), z(q)));
    t.check(
        format!("supp(alpha)^supp(beta)={{{}}}", q + 1),
        Assertion::SupportMeet(named("alpha"), named("beta"), vec![z(q + 1)]),
    );
    t.check(
        format!("beta^-1: {}->{}, {}->{}", q, q + 1, q + 1, q + 2 * k),
        Assertion::MapsTo(named("beta").inv(), vec![(z(q), z(q + 1)), (z(q + 1), z(q + 2 * k))]),
    );
    t.check(
        format!("[beta,alpha]=({},{},{})", q, q + 1, q + 2),
        Assertion::Equal(named("beta").comm(named("alpha")), c3(q)),
    );
    let a2k = named("alpha").shift(2 * k);
    for i in 1..=k - 2 {
        t.check(
            format!("conjugate {i}=({},{},{})", q + i, q + 1 + i, q + 2 + i),
            Assertion::Equal(c3(q).conj(a2k.clone().pow(i)), c3(q + i)),
        );
    }
    t.check(
        format!("3-cycles generate Alt({q}..{})", q + k),
        Assertion::WindowClass {
            gens: (0..=k - 2).map(|i| c3(q + i)).collect(),
            window: zs(q..=q + k),
            expect: GenClass::ContainsAltOnly,
            order: None,
        },
    );
    // constraints on ω
    let positive =
        PointSet { include: (1..=wp.max_support().unwrap_or(0) + c).map(Pt::Z).collect(), ..Default::default() };
    t.check("supp(omega) in R_1", Assertion::SupportWithin(named("omega"), positive));
    t.check(
        "supp(omega^(t^k)) disjoint from supp(omega)",
        Assertion::SupportsDisjoint(named("omega").shift(k), named("omega")),
    );
    t.check(
        "supp([omega,t^k]) disjoint from supp(tau)",
        Assertion::SupportsDisjoint(comm_tk(named("omega")), named("tau")),
    );
    t.check(
        format!("omega has only {}-cycles", p_prime - 1),
        Assertion::CycleLengths(named("omega"), (p_prime - 1) as usize),
    );
    t.check(
        "([omega,t^k]tau)^p'=[omega,t^k]",
        Assertion::Equal(comm_tk(named("omega")).times(named("tau")).pow(p_prime), comm_tk(named("omega"))),
    );
    Ok(t)
}
