//! An element of Alt(Z) made of p-cycles which, with t^k, generates
//! ⟨Alt(Z), t^k⟩; with an extra p-cycle for even p it reaches FSym(Z).

use crate::error::{Error, Result};
use crate::perm::{LinePerm, Parity};
use crate::trace::{lit_line, named, Assertion, ConstructionTrace, Pt, Value};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct PcycleOptions {
    /// Add one more p-cycle so the element becomes odd (even p only).
    pub fsym: bool,
    /// Replace σ_i by a displaced copy, to exercise failure reporting.
    pub corrupt: Option<i64>,
}

fn sigma(p: i64, i: i64, n: i64) -> LinePerm {
    let i = if i == n { p - 1 } else { i };
    let pts: Vec<i64> = (1 + i..=p + i).collect();
    LinePerm::cycle(&pts).expect("distinct points")
}

pub fn build_pcycle(p: i64, k: i64, opts: PcycleOptions) -> Result<ConstructionTrace> {
    if p < 2 || k < 8 {
        return Err(Error::InvalidParams(format!("need p >= 2 and k >= 8, got p={p}, k={k}")));
    }
    if opts.fsym && p % 2 == 1 {
        return Err(Error::NotApplicable(format!(
            "p={p} is odd: a product of p-cycles is then even, so no odd element of order p exists"
        )));
    }
    let kp = k * p;
    let n = kp - p + 1;
    let mut t = ConstructionTrace::new("pcycle");
    t.param("p", p);
    t.param("k", k);
    t.param("n", n);
    if opts.fsym {
        t.param("fsym", 1);
    }

    let mut factors: Vec<LinePerm> = (0..=n).map(|i| sigma(p, i, n)).collect();
    if let Some(c) = opts.corrupt {
        if !(0..=n).contains(&c) {
            return Err(Error::InvalidParams(format!("corrupt index {c} outside 0..={n}")));
        }
        t.param("corrupt", c);
        factors[c as usize] = factors[c as usize].shift(1);
    }
    for (i, s) in factors.iter().enumerate() {
        t.set(&format!("sigma_{i}"), Value::Line(s.clone()));
    }
    let mut omega =
        factors.iter().enumerate().fold(LinePerm::identity(), |acc, (i, s)| acc.compose(&s.shift(kp * i as i64)));
    // the extra cycle sits one full period below block 0, clear of the
    // translate used in the commutator
    let extra = sigma(p, 0, n).shift(-kp * (n + 1));
    if opts.fsym {
        omega = omega.compose(&extra);
        t.set("extra", Value::Line(extra.clone()));
    }
    t.set("omega", Value::Line(omega));

    // independent pointwise description of ω
    let mut pairs = Vec::new();
    for i in 0..=n {
        let j = if i == n { p - 1 } else { i };
        let base = kp * i + j;
        for m in 1..=p {
            let to = if m == p { 1 } else { m + 1 };
            pairs.push((base + m, base + to));
        }
    }
    if opts.fsym {
        let base = -kp * (n + 1);
        for m in 1..=p {
            pairs.push((base + m, base + if m == p { 1 } else { m + 1 }));
        }
    }
    let pairs = pairs.into_iter().map(|(x, y)| (Pt::Z(x), Pt::Z(y))).collect();
    t.check("omega pointwise", Assertion::MapsTo(named("omega"), pairs));

    let omega_prime = || named("omega").shift(-kp * n);
    let target = LinePerm::cycle(&[p + 1, p, p - 1]).expect("distinct points");
    t.check(
        format!("[omega',omega^-1]=({},{},{})", p + 1, p, p - 1),
        Assertion::Equal(omega_prime().comm(named("omega").inv()), lit_line(target.clone())),
    );
    t.check(format!("cycles of length {p}"), Assertion::CycleLengths(named("omega"), p as usize));
    t.check(format!("order {p}"), Assertion::Order(named("omega"), p as u64));
    let parity = if opts.fsym { Parity::Odd } else { Parity::Even };
    t.check(format!("omega {parity}"), Assertion::ParityIs(named("omega"), parity));
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_k8() {
        let t = build_pcycle(2, 8, PcycleOptions::default()).unwrap();
        let r = t.replay();
        let bad: Vec<_> = r.iter().filter(|c| !c.passed).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert_eq!(r[1].witness, "(1,3,2)");
        let omega = t.get("omega").unwrap().cycles().unwrap();
        assert_eq!(omega.len(), 16);
    }

    #[test]
    fn fsym_requires_even_p() {
        assert!(matches!(
            build_pcycle(3, 8, PcycleOptions { fsym: true, corrupt: None }),
            Err(Error::NotApplicable(_))
        ));
        let t = build_pcycle(2, 8, PcycleOptions { fsym: true, corrupt: None }).unwrap();
        assert!(t.passes());
    }

    #[test]
    fn corruption_is_detected() {
        let t = build_pcycle(2, 8, PcycleOptions { fsym: false, corrupt: Some(5) }).unwrap();
        let r = t.replay();
        assert!(!r[0].passed);
        assert!(r[0].witness.contains("->"), "{}", r[0].witness);
    }
}
