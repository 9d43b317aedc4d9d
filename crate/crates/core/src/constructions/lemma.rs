//! Two-generation of ⟨Alt(Z), t^k⟩ and ⟨FSym(Z), t^k⟩, and the exceptional
//! pair {(0 1 2), (0 1)t} in H_2.

use std::collections::BTreeMap;

use crate::classify::SymType;
use crate::engine::{factorial, GenClass};
use crate::error::{Error, Result};
use crate::perm::{LinePerm, Parity};
use crate::trace::{lit_line, named, zs, Assertion, ConstructionTrace, Expr, Value};

/// All 3-subsets {a<b<c} of {1..m} in lexicographic order.
pub fn three_subsets(m: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in 1..=m {
        for b in a + 1..=m {
            for c in b + 1..=m {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// An even permutation σ of {1..m} with σ⁻¹(1 2 3)σ = (a b c).
///
/// Sends 1, 2, 3 to a, b, c and the remaining points in increasing order; if
/// that is odd, the two smallest points outside {a, b, c} are swapped after.
pub fn three_cycle_conjugator(abc: [i64; 3], m: i64) -> LinePerm {
    let rest_src = 4..=m;
    let rest_dst = (1..=m).filter(|x| !abc.contains(x));
    let mut map: BTreeMap<i64, i64> = [(1, abc[0]), (2, abc[1]), (3, abc[2])].into_iter().collect();
    map.extend(rest_src.zip(rest_dst.clone()));
    map.retain(|x, y| x != y);
    let mut sigma = LinePerm::from_map(map).expect("bijection of {1..m}");
    if sigma.parity() == Parity::Odd {
        let mut free = rest_dst;
        let (x, y) = (free.next().expect("m >= 5"), free.next().expect("m >= 5"));
        sigma = sigma.compose(&LinePerm::transposition(x, y));
    }
    sigma
}

fn binom3(m: i64) -> i64 {
    m * (m - 1) * (m - 2) / 6
}

fn cycle(pts: &[i64]) -> LinePerm {
    LinePerm::cycle(pts).expect("distinct points")
}

/// σ_0, σ_1..σ_r, σ_{r+1} for block size 2k.
fn lemma_sigmas(k: i64, variant: SymType) -> Vec<LinePerm> {
    let mut sig = Vec::new();
    sig.push(match variant {
        SymType::Alt => LinePerm::transposition(1, 3),
        SymType::Fsym => LinePerm::transposition(1, 3).compose(&LinePerm::transposition(4, 5)),
    });
    for abc in three_subsets(2 * k) {
        sig.push(three_cycle_conjugator(abc, 2 * k));
    }
    sig.push(LinePerm::transposition(2, 3));
    sig
}

/// α_k (alt) or γ_k (fsym): ∏_{i=0}^{r+1} t^{-2ik} σ_i t^{2ik}.
pub fn lemma_element(k: i64, variant: SymType) -> Result<LinePerm> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("k must be at least 3, got {k}")));
    }
    Ok(lemma_sigmas(k, variant)
        .iter()
        .enumerate()
        .fold(LinePerm::identity(), |acc, (i, s)| acc.compose(&s.shift(2 * i as i64 * k))))
}

/// Trace showing ⟨α_k, t^k⟩ ⊇ Alt(Z): the commutator with a translate gives
/// (1 2 3), and translates conjugate it onto every 3-cycle of {1..2k}.
pub fn build_lemma37(k: i64, variant: SymType) -> Result<ConstructionTrace> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("k must be at least 3, got {k}")));
    }
    let r = binom3(2 * k);
    let name = if variant == SymType::Alt { "alpha" } else { "gamma" };
    let mut t = ConstructionTrace::new("lemma37");
    t.param("k", k);
    t.param("r", r);
    t.note(format!("variant={variant}"));

    let sig = lemma_sigmas(k, variant);
    let omegas: Vec<LinePerm> = three_subsets(2 * k).iter().map(|abc| cycle(abc)).collect();
    for (i, s) in sig.iter().enumerate() {
        t.set(&format!("sigma_{i}"), Value::Line(s.clone()));
    }
    for (m, w) in omegas.iter().enumerate() {
        t.set(&format!("omega_{}", m + 1), Value::Line(w.clone()));
    }
    t.set(name, Value::Line(lemma_element(k, variant)?));

    let c123 = || lit_line(cycle(&[1, 2, 3]));
    let product = Expr::Prod((0..sig.len()).map(|i| named(&format!("sigma_{i}")).shift(2 * i as i64 * k)).collect());
    t.check(format!("{name}=prod(sigma_i^(t^2ik))"), Assertion::Equal(named(name), product));
    t.check(
        "[sigma_r+1,sigma_0]=(1,2,3)",
        Assertion::Equal(named(&format!("sigma_{}", r + 1)).comm(named("sigma_0")), c123()),
    );
    let beta = |m: i64| named(name).shift(-2 * m * k);
    t.check(format!("[beta_r+1,{name}]=(1,2,3)"), Assertion::Equal(beta(r + 1).comm(named(name)), c123()));
    for m in 1..=r {
        t.check(format!("sigma_{m} even"), Assertion::ParityIs(named(&format!("sigma_{m}")), Parity::Even));
        t.check(
            format!("beta_{m}^-1(1,2,3)beta_{m}=omega_{m}"),
            Assertion::Equal(c123().conj(beta(m)), named(&format!("omega_{m}"))),
        );
    }
    let parity = if variant == SymType::Alt { Parity::Even } else { Parity::Odd };
    t.check(format!("{name} {parity}"), Assertion::ParityIs(named(name), parity));
    t.check(
        "<omega_1..omega_r>=Alt(1..2k)",
        Assertion::WindowClass {
            gens: (1..=r).map(|m| named(&format!("omega_{m}"))).collect(),
            window: zs(1..=2 * k),
            expect: GenClass::ContainsAltOnly,
            order: Some(factorial(2 * k as usize) / 2u32),
        },
    );
    Ok(t)
}

/// Trace producing (0 1 k+1) from S = {(0 1 2), (0 1)t} inside H_2 for every
/// k ≤ `kmax`, by descending conjugation from (0 k k+1).
pub fn build_exceptional_h2(kmax: i64) -> Result<ConstructionTrace> {
    if kmax < 1 {
        return Err(Error::InvalidParams(format!("K must be at least 1, got {kmax}")));
    }
    let mut t = ConstructionTrace::new("exceptional_h2");
    t.param("K", kmax);
    let s = || named("s");
    let u = || named("u");
    let g2 = Expr::GenPow { n: 2, k: 2, e: 1 };
    t.set("s", t.eval(&lit_line(cycle(&[0, 1, 2])).embed())?);
    t.set("u", t.eval(&lit_line(LinePerm::transposition(0, 1)).embed().times(g2))?);
    let embedded = |pts: &[i64]| lit_line(cycle(pts)).embed();

    // c_j = (0 j j+1) as a word in s and u
    t.set("c_1", t.eval(&embedded(&[0, 1, 2]))?);
    t.check("c_1=(0,1,2)", Assertion::Equal(named("c_1"), s()));
    for j in 2..=kmax {
        let c = format!("c_{j}");
        t.set(&c, t.eval(&embedded(&[0, j, j + 1]))?);
        let word = s().conj(u().pow(j - 1)).inv().conj(s().conj(u().pow(-1)));
        t.check(format!("{c}=(0,{j},{})", j + 1), Assertion::Equal(named(&c), word));
    }
    for k in 1..=kmax {
        let mut prev = format!("c_{k}");
        for j in 1..k {
            // σ_{j+1} = conjugate of σ_j⁻¹ by (0 k-j k-j+1) = (0 k-j k+1)
            let next = format!("sigma_{k}_{}", j + 1);
            t.set(&next, t.eval(&embedded(&[0, k - j, k + 1]))?);
            t.check(
                format!("k={k} step {}: (0,{},{})", j + 1, k - j, k + 1),
                Assertion::Equal(named(&next), named(&prev).inv().conj(named(&format!("c_{}", k - j)))),
            );
            prev = next;
        }
        t.check(format!("k={k}: (0,1,{})", k + 1), Assertion::Equal(named(&prev), embedded(&[0, 1, k + 1])));
    }
    Ok(t)
}
