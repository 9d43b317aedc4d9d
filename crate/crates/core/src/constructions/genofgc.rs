//! The generator σ_α g_2^{c_2} which, together with g_3^{c_3}, ..., g_n^{c_n},
//! generates ⟨Alt(X_n), g_2^{c_2}, ..., g_n^{c_n}⟩.

use crate::element::HoughtonElement;
use crate::engine::GenClass;
use crate::error::{Error, Result};
use crate::perm::{LinePerm, Point, RayPerm};
use crate::trace::{lit_elem, named, xs, Assertion, ConstructionTrace, Expr, PointSet, Pt, Value};

use super::lemma::{three_cycle_conjugator, three_subsets};

fn on_ray1(p: &LinePerm) -> RayPerm {
    p.map_points(|z| Point::new(1, z))
}

/// Ray relabelling putting a largest exponent on ray 3, and the relabelled tuple.
pub fn relabel_for_max(c: &[i64]) -> (Vec<usize>, Vec<i64>) {
    let n = c.len() + 1;
    let max = c.iter().copied().max().unwrap_or(1);
    let j = c.iter().position(|&x| x == max).unwrap_or(0) + 2;
    let mut rho: Vec<usize> = (1..=n).collect();
    rho.swap(2, j - 1);
    let mut c2 = c.to_vec();
    c2.swap(1, j - 2);
    (rho, c2)
}

struct Setup {
    n: usize,
    k: i64,
    r: i64,
    c: Vec<i64>,
    rho: Vec<usize>,
}

fn setup(c: &[i64]) -> Result<Setup> {
    if c.len() < 2 {
        return Err(Error::InvalidParams("need n >= 3, i.e. at least two exponents".into()));
    }
    if c.iter().any(|&x| x < 1) {
        return Err(Error::InvalidParams(format!("exponents must be positive: {c:?}")));
    }
    if c.iter().all(|&x| x == 1) {
        return Err(Error::NotApplicable("all exponents are 1, so the subgroup already contains FSym(X_n)".into()));
    }
    let (rho, c) = relabel_for_max(c);
    let k = 2 * c[1];
    let r = 2 * k * (2 * k - 1) * (2 * k - 2) / 6;
    Ok(Setup { n: c.len() + 1, k, r, c, rho })
}

fn sigmas(k: i64) -> Vec<RayPerm> {
    let mut v = vec![on_ray1(&LinePerm::transposition(1, 3))];
    v.extend(three_subsets(2 * k).into_iter().map(|abc| on_ray1(&three_cycle_conjugator(abc, 2 * k))));
    v.push(on_ray1(&LinePerm::transposition(2, 3)));
    v
}

fn delta0(k: i64, c2: i64) -> RayPerm {
    RayPerm::transposition(Point::new(1, 2 * k - c2 + 1), Point::new(1, 2 * k - c2 + 3))
}

/// α = δ_0 δ_1 ... δ_{r+1} in relabelled coordinates.
fn alpha(s: &Setup) -> Result<HoughtonElement> {
    let mut acc = HoughtonElement::from_finitary(s.n, &delta0(s.k, s.c[0]))?;
    for (i, sig) in sigmas(s.k).iter().enumerate().skip(1) {
        let by = HoughtonElement::generator_pow(s.n, 3, -4 * s.k * i as i64)?;
        acc = acc.mul(&HoughtonElement::from_finitary(s.n, sig)?.conjugate(&by)?)?;
    }
    Ok(acc)
}

fn sigma_of(n: usize, omega: &HoughtonElement, c2: i64, k: i64) -> Result<HoughtonElement> {
    let a = omega.mul(&HoughtonElement::generator_pow(n, 2, c2)?)?;
    HoughtonElement::commutator(&a, &HoughtonElement::generator_pow(n, 3, 2 * k)?)
}

/// {σ_α g_2^{c_2}, g_3^{c_3}, ..., g_n^{c_n}} in the original ray labels.
pub fn genofgc_generators(c: &[i64]) -> Result<Vec<HoughtonElement>> {
    let s = setup(c)?;
    let sa = sigma_of(s.n, &alpha(&s)?, s.c[0], s.k)?;
    let mut gens = vec![sa.mul(&HoughtonElement::generator_pow(s.n, 2, s.c[0])?)?];
    for i in 3..=s.n {
        gens.push(HoughtonElement::generator_pow(s.n, i, s.c[i - 2])?);
    }
    gens.iter().map(|g| g.relabel_rays(&s.rho)).collect()
}

pub fn build_genofgc(c: &[i64]) -> Result<ConstructionTrace> {
    let s = setup(c)?;
    let (n, k, r) = (s.n, s.k, s.r);
    let c2 = s.c[0];
    let mut t = ConstructionTrace::new("genofGc");
    for (i, ci) in c.iter().enumerate() {
        t.param(&format!("c{}", i + 2), *ci);
    }
    t.param("k", k);
    t.param("r", r);
    let relabel = s.rho.iter().position(|&x| x == 3).unwrap_or(2) + 1;
    t.param("relabel", relabel as i64);
    t.note(format!("rays relabelled by {:?} so that c_3 is maximal; elements use the new labels", s.rho));
    t.note("the printed subscript d+1 in the beta identity is read as r+1");

    let sig = sigmas(k);
    let elem = |p: &RayPerm| HoughtonElement::from_finitary(n, p).map(Value::Elem);
    for (i, p) in sig.iter().enumerate() {
        t.set(&format!("sigma_{i}"), elem(p)?);
    }
    let omega_names: Vec<String> = (1..=r).map(|m| format!("omega_{m}")).collect();
    for (m, abc) in three_subsets(2 * k).into_iter().enumerate() {
        let w = on_ray1(&LinePerm::cycle(&abc).expect("distinct points"));
        t.set(&omega_names[m], elem(&w)?);
    }
    t.set("delta_0", elem(&delta0(k, c2))?);
    let g3 = |e: i64| Expr::GenPow { n, k: 3, e };
    let g2c = || Expr::GenPow { n, k: 2, e: c2 };
    for i in 1..=r + 1 {
        let d = t.eval(&named(&format!("sigma_{i}")).conj(g3(-4 * k * i)))?;
        t.set(&format!("delta_{i}"), d);
    }
    t.set("alpha", Value::Elem(alpha(&s)?));
    let sigma_expr = |w: Expr| w.times(g2c()).comm(g3(2 * k));
    t.set("sigma_alpha", t.eval(&sigma_expr(named("alpha")))?);

    t.check(
        "alpha=delta_0...delta_r+1",
        Assertion::Equal(named("alpha"), Expr::Prod((0..=r + 1).map(|i| named(&format!("delta_{i}"))).collect())),
    );
    for i in 1..=r + 1 {
        t.check(
            format!("delta_{i}=g3^4ki sigma_{i} g3^-4ki"),
            Assertion::Equal(named(&format!("delta_{i}")), named(&format!("sigma_{i}")).conj(g3(-4 * k * i))),
        );
    }
    // supp(αδ_0) lies in the translates (Ω*)g_3^{-4jk}, j >= 1
    let mut allowed = Vec::new();
    for j in 1..=r + 1 {
        let g = HoughtonElement::generator_pow(n, 3, -4 * j * k)?;
        allowed.extend((1..=2 * k).map(|m| Pt::X(g.eval(Point::new(1, m)))));
    }
    t.check(
        "supp(alpha delta_0) in translates of Omega*",
        Assertion::SupportWithin(named("alpha").times(named("delta_0")), PointSet::finite(allowed)),
    );
    let p1 = |m: i64| Pt::X(Point::new(1, m));
    t.check(
        format!("sigma_delta0 swaps (1,{}),(1,{})", 4 * k + 1, 4 * k + 3),
        Assertion::MapsTo(
            sigma_expr(named("delta_0")),
            vec![(p1(4 * k + 1), p1(4 * k + 3)), (p1(4 * k + 3), p1(4 * k + 1))],
        ),
    );
    let mut avoid = PointSet { rays: (2..=n).collect(), ..Default::default() };
    avoid.include.extend((1..=4 * k + 3).filter(|&m| m != 4 * k + 2).map(p1));
    t.check(
        format!("supp(sigma_delta0) avoids (1,{}) and (1,m>={})", 4 * k + 2, 4 * k + 4),
        Assertion::SupportWithin(sigma_expr(named("delta_0")), avoid),
    );
    let r13 = PointSet { rays: vec![1, 3], ..Default::default() };
    t.check("supp(sigma_alpha) in R_1 u R_3", Assertion::SupportWithin(named("sigma_alpha"), r13));

    let beta = |m: i64| named("sigma_alpha").conj(g3(4 * m * k));
    let x = || named(&format!("sigma_{}", r + 1)).comm(named("sigma_0"));
    let c123 = RayPerm::cycle(&[Point::new(1, 1), Point::new(1, 2), Point::new(1, 3)]).expect("distinct points");
    t.check(
        "[sigma_r+1,sigma_0]=((1,1),(1,2),(1,3))",
        Assertion::Equal(x(), lit_elem(HoughtonElement::from_finitary(n, &c123)?)),
    );
    t.check("[beta_r+1,beta_-1]=[sigma_r+1,sigma_0]", Assertion::Equal(beta(r + 1).comm(beta(-1)), x()));
    for m in 1..=r {
        t.check(
            format!("beta_{m} X beta_{m}^-1=omega_{m}"),
            Assertion::Equal(x().conj(beta(m).inv()), named(&omega_names[m as usize - 1])),
        );
    }
    t.check(
        "<omega_1..omega_r>=Alt(Omega*)",
        Assertion::WindowClass {
            gens: omega_names.iter().map(|s| named(s)).collect(),
            window: xs((1..=2 * k).map(|m| Point::new(1, m))),
            expect: GenClass::ContainsAltOnly,
            order: None,
        },
    );
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelling() {
        assert_eq!(relabel_for_max(&[1, 2]), (vec![1, 2, 3], vec![1, 2]));
        assert_eq!(relabel_for_max(&[1, 1, 4]), (vec![1, 2, 4, 3], vec![1, 4, 1]));
        assert!(matches!(setup(&[1, 1]), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn delta0_for_c12() {
        let s = setup(&[1, 2]).unwrap();
        assert_eq!(s.k, 4);
        assert_eq!(delta0(s.k, s.c[0]).to_string(), "((1,8),(1,10))");
    }
}
