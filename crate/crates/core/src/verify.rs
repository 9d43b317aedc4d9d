//! Pass/fail reports for the constructions and for the desk-scale laws they
//! rest on.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{epsilon, SubgroupDescriptor, SymType};
use crate::constructions::{
    build_erratum_omega, build_exceptional_h2, build_genofgc, build_lemma37, build_pcycle, build_prop6, PcycleOptions,
};
use crate::element::{HoughtonElement, TranslationVector};
use crate::engine::{gen_class, GenClass};
use crate::error::{Error, Result};
use crate::lattice::{parity_form, LatticeBasis};
use crate::perm::{parse_line_perm, LinePerm, Parity, Point, RayPerm};
use crate::trace::{CheckOutcome, ConstructionTrace};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Report {
    pub claim: String,
    pub params: Vec<(String, String)>,
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    fn new(claim: &str, params: Vec<(String, String)>) -> Self {
        Report { claim: claim.to_string(), params, checks: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, witness: impl Into<String>) {
        self.checks.push(CheckOutcome { name: name.into(), passed, witness: witness.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CLAIM {}", self.claim)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        for c in &self.checks {
            let name: String = c.name.split_whitespace().collect::<Vec<_>>().join("_");
            write!(f, "CHECK {name} {}", if c.passed { "PASS" } else { "FAIL" })?;
            if !c.witness.is_empty() {
                write!(f, " {}", c.witness)?;
            }
            writeln!(f)?;
        }
        writeln!(f, "RESULT {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Splits `p=2,k=8` into pairs; a piece without '=' continues the previous
/// value, so `c=1,2` and `L=1,1;1,-1` survive intact.
pub fn parse_params(s: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for piece in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match (piece.split_once('='), out.last_mut()) {
            (Some((k, v)), _) => out.push((k.trim().to_string(), v.trim().to_string())),
            (None, Some(last)) => {
                last.1.push(',');
                last.1.push_str(piece);
            }
            (None, None) => return Err(Error::Parse(format!("parameter {piece:?} has no '='"))),
        }
    }
    Ok(out)
}

struct Params<'a>(&'a [(String, String)]);

impl Params<'_> {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn int(&self, key: &str, default: i64) -> Result<i64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::InvalidParams(format!("{key}={v} is not an integer"))),
        }
    }

    fn ints(&self, key: &str) -> Result<Vec<i64>> {
        let v = self.get(key).ok_or_else(|| Error::InvalidParams(format!("missing {key}")))?;
        v.split(',')
            .map(|x| x.trim().parse().map_err(|_| Error::InvalidParams(format!("{key}={v} is not a list of integers"))))
            .collect()
    }
}

pub const CLAIMS: [&str; 9] = [
    "lemma37",
    "exceptional_h2",
    "genofGc",
    "erratum_omega",
    "pcycle",
    "prop6",
    "parity_law",
    "window_lemma",
    "decomposition",
];

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn from_trace(claim: &str, params: Vec<(String, String)>, trace: Result<ConstructionTrace>) -> Report {
    let mut r = Report::new(claim, params);
    match trace {
        Ok(t) => r.checks = t.replay(),
        Err(e) => r.push("params", false, e.to_string()),
    }
    r
}

/// Runs a named claim with `key=value` parameters. Bad parameters give a
/// failing report rather than an error.
pub fn verify_claim(claim: &str, params: &[(String, String)]) -> Report {
    match run_claim(claim, params) {
        Ok(r) => r,
        Err(e) => {
            let mut r = Report::new(claim, params.to_vec());
            r.push("params", false, e.to_string());
            r
        }
    }
}

fn run_claim(claim: &str, params: &[(String, String)]) -> Result<Report> {
    let p = Params(params);
    Ok(match claim {
        "lemma37" | "exceptional_h2" | "genofGc" | "erratum_omega" | "pcycle" | "prop6" => {
            verify_construction(claim, params)?
        }
        "parity_law" => verify_parity_law(p.int("n", 3)? as usize, p.int("c_max", 6)?),
        "window_lemma" => verify_window_lemma(p.int("k", 3)?, p.int("sabotage", 0)? != 0),
        "decomposition" => {
            verify_decomposition(p.int("n", 3)? as usize, p.int("samples", 200)? as usize, p.int("seed", 1)? as u64)
        }
        other => return Err(Error::InvalidParams(format!("unknown claim {other:?}; known: {}", CLAIMS.join(", ")))),
    })
}

pub fn verify_construction(name: &str, params: &[(String, String)]) -> Result<Report> {
    let p = Params(params);
    Ok(match name {
        "lemma37" => {
            let k = p.int("k", 3)?;
            let variant = SymType::parse(p.get("variant").unwrap_or("alt"))?;
            from_trace(name, vec![kv("k", k), kv("variant", variant)], build_lemma37(k, variant))
        }
        "exceptional_h2" => {
            let kmax = p.int("K", 50)?;
            from_trace(name, vec![kv("K", kmax)], build_exceptional_h2(kmax))
        }
        "genofGc" => {
            let c = p.ints("c")?;
            let shown = c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            from_trace(name, vec![kv("c", shown)], build_genofgc(&c))
        }
        "erratum_omega" => {
            let k = p.int("k", 8)?;
            let tau = match p.get("tau") {
                None | Some("()") | Some("id") => LinePerm::identity(),
                Some(s) => parse_line_perm(s)?,
            };
            let shown = if tau.is_identity() { "()".to_string() } else { tau.to_string() };
            from_trace(name, vec![kv("k", k), kv("tau", shown)], build_erratum_omega(k, &tau))
        }
        "pcycle" => {
            let (pp, k) = (p.int("p", 2)?, p.int("k", 8)?);
            let fsym = p.int("fsym", 0)? != 0;
            let corrupt = p.get("corrupt").map(|_| p.int("corrupt", 0)).transpose()?;
            let mut shown = vec![kv("p", pp), kv("k", k)];
            if fsym {
                shown.push(kv("fsym", 1));
            }
            if let Some(c) = corrupt {
                shown.push(kv("corrupt", c));
            }
            from_trace(name, shown, build_pcycle(pp, k, PcycleOptions { fsym, corrupt }))
        }
        "prop6" => {
            let lattice = LatticeBasis::parse(p.get("L").unwrap_or("1,1;1,-1"))?;
            let sym = SymType::parse(p.get("type").unwrap_or("fsym"))?;
            let n = p.int("n", lattice.dim() as i64 + 1)? as usize;
            let seed = p.int("seed", 1)?;
            let desc = SubgroupDescriptor::new(n, lattice.clone(), sym, Vec::new());
            let shown = vec![kv("n", n), kv("L", &lattice), kv("type", sym), kv("seed", seed)];
            from_trace(name, shown, build_prop6(&desc, seed as u64))
        }
        other => return Err(Error::InvalidParams(format!("unknown construction {other:?}"))),
    })
}

/// Parity of [g_i^{c_i}, g_j^{c_j}] against the both-odd rule and the parity form.
pub fn verify_parity_law(n: usize, c_max: i64) -> Report {
    let mut r = Report::new("parity_law", vec![kv("n", n), kv("c_max", c_max)]);
    if n < 3 || c_max < 1 {
        r.push("params", false, format!("need n >= 3 and c_max >= 1, got n={n}, c_max={c_max}"));
        return r;
    }
    for i in 2..=n {
        for j in i + 1..=n {
            let mut bad = Vec::new();
            let mut count = 0;
            for ci in 1..=c_max {
                for cj in 1..=c_max {
                    count += 1;
                    let direct = (|| -> Result<Parity> {
                        let a = HoughtonElement::generator_pow(n, i, ci)?;
                        let b = HoughtonElement::generator_pow(n, j, cj)?;
                        HoughtonElement::commutator(&a, &b)?.parity_if_fsym()
                    })();
                    let rule = Parity::from_bit(ci % 2 == 1 && cj % 2 == 1);
                    let form = parity_form(
                        &TranslationVector::unit(n - 1, i - 1).scale(ci),
                        &TranslationVector::unit(n - 1, j - 1).scale(cj),
                    )
                    .map(|b| Parity::from_bit(b == 1));
                    match (direct, form) {
                        (Ok(d), Ok(f)) if d == rule && f == rule => {}
                        (d, f) => bad.push(format!("c=({ci},{cj}): direct {d:?}, rule {rule}, form {f:?}")),
                    }
                }
            }
            let witness = bad.first().cloned().unwrap_or_else(|| format!("{count} cases"));
            r.push(format!("pair g{i},g{j}"), bad.is_empty(), witness);
        }
    }
    r
}

/// ⟨3-cycles of Ω_{2k} and their translates by k and 2k⟩ on the window
/// {1..4k} is Alt of the window. The sabotaged version drops the translates
/// by 2k, leaving the top k points fixed.
pub fn verify_window_lemma(k: i64, sabotage: bool) -> Report {
    let mut params = vec![kv("k", k)];
    if sabotage {
        params.push(kv("sabotage", 1));
    }
    let mut r = Report::new("window_lemma", params);
    if !(3..=6).contains(&k) {
        r.push("params", false, format!("k must lie in 3..=6, got {k}"));
        return r;
    }
    let base: Vec<LinePerm> =
        (1..=2 * k - 2).map(|i| LinePerm::cycle(&[i, i + 1, i + 2]).expect("distinct points")).collect();
    let shifts: &[i64] = if sabotage { &[0, k] } else { &[0, k, 2 * k] };
    let gens: Vec<LinePerm> = shifts.iter().flat_map(|&s| base.iter().map(move |g| g.shift(s))).collect();
    let window: Vec<i64> = (1..=4 * k).collect();
    match gen_class(&gens, &window) {
        Ok(GenClass::ContainsAltOnly) => r.push(format!("Alt(1..{})", 4 * k), true, format!("order {}!/2", 4 * k)),
        Ok(other) => {
            let fixed: Vec<i64> = window.iter().copied().filter(|x| gens.iter().all(|g| g.image(*x) == *x)).collect();
            r.push(format!("Alt(1..{})", 4 * k), false, format!("{other}; fixed points {fixed:?}"))
        }
        Err(e) => r.push(format!("Alt(1..{})", 4 * k), false, e.to_string()),
    }
    r
}

fn random_descriptor(rng: &mut ChaCha8Rng, n: usize) -> SubgroupDescriptor {
    loop {
        let m = n - 1;
        let diagonal = rng.gen_bool(0.5);
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| match (diagonal, i == j) {
                        (true, true) => rng.gen_range(1..=4),
                        (true, false) => 0,
                        (false, _) => rng.gen_range(-2..=2),
                    })
                    .collect()
            })
            .collect();
        let Ok(lattice) = LatticeBasis::new(m, rows.into_iter().map(TranslationVector).collect()) else {
            continue;
        };
        if !lattice.has_finite_index() || lattice.index().map_or(true, |i| i > 64) {
            continue;
        }
        let sym = if lattice.has_odd_pair() || rng.gen_bool(0.5) { SymType::Fsym } else { SymType::Alt };
        let twists = if sym == SymType::Alt { (0..m).map(|_| rng.gen_bool(0.5)).collect() } else { Vec::new() };
        return SubgroupDescriptor::new(n, lattice, sym, twists);
    }
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> Result<HoughtonElement> {
    let mut g = HoughtonElement::identity(n);
    for _ in 0..rng.gen_range(0..=5) {
        let k = rng.gen_range(2..=n);
        g = g.mul(&HoughtonElement::generator_pow(n, k, rng.gen_range(-3..=3))?)?;
    }
    if rng.gen_bool(0.5) {
        let a = Point::new(rng.gen_range(1..=n), rng.gen_range(1..=4));
        let b = Point::new(rng.gen_range(1..=n), rng.gen_range(5..=8));
        g = g.mul(&HoughtonElement::from_finitary(n, &RayPerm::transposition(a, b))?)?;
    }
    Ok(g)
}

/// Membership decomposes g = σ·w with w a word in h_2..h_n; σ recomposes g
/// exactly and has the parity the type demands.
pub fn verify_decomposition(n: usize, samples: usize, seed: u64) -> Report {
    let mut r = Report::new("decomposition", vec![kv("n", n), kv("samples", samples), kv("seed", seed)]);
    if n < 2 {
        r.push("params", false, format!("n must be at least 2, got {n}"));
        return r;
    }
    let eps = HoughtonElement::from_finitary(n, &epsilon()).expect("epsilon lives in every X_n");
    let fsym = SubgroupDescriptor::new(n, LatticeBasis::standard(n - 1), SymType::Fsym, Vec::new());
    let alt = SubgroupDescriptor::new(n, LatticeBasis::diagonal(&vec![2; n - 1]), SymType::Alt, Vec::new());
    match fsym.contains(&eps) {
        Ok(true) => r.push("odd finitary element in fsym", true, "member, sigma odd"),
        other => r.push("odd finitary element in fsym", false, format!("{other:?}")),
    }
    match alt.contains(&eps) {
        Ok(false) => r.push("((1,1),(1,2)) in alt", true, "non-member"),
        other => r.push("((1,1),(1,2)) in alt", false, format!("{other:?}")),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut members, mut bad) = (0usize, Vec::new());
    for s in 0..samples {
        let desc = random_descriptor(&mut rng, n);
        let outcome = (|| -> Result<Option<String>> {
            let g = random_element(&mut rng, n)?;
            let Some(x) = desc.lattice().coordinates(&g.pi())? else { return Ok(None) };
            let w = desc.word(&x)?;
            let sigma = g.mul(&w.inv())?;
            let sp = sigma.as_finitary().ok_or_else(|| Error::Internal("residual not finitary".into()))?;
            if HoughtonElement::from_finitary(n, &sp)?.mul(&w)? != g {
                return Ok(Some(format!("sample {s}: recomposition differs for {g}")));
            }
            let member = desc.contains(&g)?;
            let expected = desc.sym_type() == SymType::Fsym || sp.parity() == Parity::Even;
            if member != expected {
                return Ok(Some(format!("sample {s}: {g} in {desc}: membership {member}, sigma {}", sp.parity())));
            }
            members += usize::from(member);
            Ok(None)
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(w)) => bad.push(w),
            Err(e) => bad.push(format!("sample {s}: {e}")),
        }
    }
    let witness = bad.first().cloned().unwrap_or_else(|| format!("{samples} samples, {members} members"));
    r.push("random round trips", bad.is_empty(), witness);
    r
}

/// The standard corpus, in fixed order.
pub fn standard_claims() -> Vec<(String, Vec<(String, String)>)> {
    let mk = |c: &str, p: &str| (c.to_string(), parse_params(p).expect("static parameters"));
    vec![
        mk("lemma37", "k=3,variant=alt"),
        mk("lemma37", "k=3,variant=fsym"),
        mk("exceptional_h2", "K=50"),
        mk("genofGc", "c=1,2"),
        mk("genofGc", "c=3,3"),
        mk("erratum_omega", "k=8"),
        mk("pcycle", "p=2,k=8"),
        mk("pcycle", "p=3,k=8"),
        mk("pcycle", "p=2,k=8,fsym=1"),
        mk("prop6", "L=1,1;1,-1,type=fsym"),
        mk("prop6", "L=1,1;1,-1,type=alt"),
        mk("parity_law", "n=3,c_max=6"),
        mk("window_lemma", "k=3"),
        mk("decomposition", "n=3,samples=200"),
    ]
}

/// Runs the standard corpus in parallel; reports come back in corpus order.
pub fn verify_all() -> Vec<Report> {
    let claims = standard_claims();
    std::thread::scope(|s| {
        let handles: Vec<_> = claims.iter().map(|(c, p)| s.spawn(move || verify_claim(c, p))).collect();
        handles.into_iter().map(|h| h.join().expect("claim thread panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_keep_lists() {
        let p = parse_params("c=1,2,seed=3").unwrap();
        assert_eq!(p, vec![kv("c", "1,2"), kv("seed", "3")]);
        let p = parse_params("L=1,1;1,-1,type=alt").unwrap();
        assert_eq!(p[0].1, "1,1;1,-1");
    }

    #[test]
    fn report_format() {
        let r = verify_claim("pcycle", &parse_params("p=2,k=8").unwrap());
        let text = r.to_string();
        assert!(text.starts_with("CLAIM pcycle p=2 k=8\n"));
        assert!(text.ends_with("RESULT PASS\n"));
        let empty = Report::new("x", Vec::new());
        assert_eq!(empty.to_string(), "CLAIM x\nRESULT PASS\n");
    }

    #[test]
    fn laws() {
        assert!(verify_parity_law(3, 6).passed());
        assert!(verify_window_lemma(3, false).passed());
        assert!(!verify_window_lemma(3, true).passed());
        assert!(verify_decomposition(3, 50, 1).passed());
    }

    #[test]
    fn bad_params_fail_softly() {
        let r = verify_claim("pcycle", &parse_params("p=x").unwrap());
        assert!(!r.passed());
        assert!(!verify_claim("nonsense", &[]).passed());
    }
}
