//! Command-line front end: argument parsing and command execution, kept out
//! of `main` so the whole surface can be driven from tests.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use houghton::classify::{enumerate, parse_twists};
use houghton::perm::{line_embed, point_project};
use houghton::verify::{parse_params, standard_claims, verify_all, verify_claim, Report};
use houghton::{Error, GroupWord, HoughtonElement, LatticeBasis, Point, SubgroupDescriptor, SymType};

#[derive(Parser, Debug)]
#[command(name = "houghton", about = "Exact computation in Houghton's groups H_n", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Image of a point under a word
    Eval {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        word: String,
        /// `ray:index`, or a bare integer with --line
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Work in H_2 with integer points, via 1,2,... on ray 1 and 0,-1,... on ray 2
        #[arg(long)]
        line: bool,
    },
    /// Product of words, left to right
    Mul {
        #[arg(long)]
        n: usize,
        #[arg(long, required = true)]
        word: Vec<String>,
    },
    /// Split an element as sigma * v^ with sigma finitary
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
    },
    /// Infinite orbit count and finite cycles
    Orbits {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
    },
    /// Index, d(U), abelianisation and normal form of a subgroup
    Classify(DescArgs),
    /// All subgroups with a diagonal lattice
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Diagonal entries c_2,...,c_n
        #[arg(long)]
        c: String,
    },
    /// Whether a word lies in a subgroup
    Member {
        #[command(flatten)]
        desc: DescArgs,
        #[arg(long)]
        word: String,
    },
    /// Run a verification claim, or the standard corpus with --all
    Verify {
        #[arg(long, required_unless_present = "all")]
        claim: Option<String>,
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        params: String,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// A generating set of size d(U)
    Gen(DescArgs),
}

#[derive(Args, Debug)]
pub struct DescArgs {
    #[arg(long)]
    n: usize,
    /// Basis rows separated by ';', entries by ','
    #[arg(long, allow_hyphen_values = true)]
    lattice: String,
    /// fsym or alt
    #[arg(long = "type")]
    sym_type: String,
    /// Twist per row, e.g. swap,trivial
    #[arg(long)]
    eps: Option<String>,
}

impl DescArgs {
    fn descriptor(&self) -> Result<SubgroupDescriptor, Error> {
        let twists = match &self.eps {
            Some(e) => parse_twists(e)?,
            None => Vec::new(),
        };
        let d = SubgroupDescriptor::new(
            self.n,
            LatticeBasis::parse(&self.lattice)?,
            SymType::parse(&self.sym_type)?,
            twists,
        );
        d.validate()?;
        Ok(d)
    }
}

/// Exit status and captured output of one invocation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses and runs `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn execute(cmd: Command) -> Outcome {
    match dispatch(cmd) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn element(n: usize, word: &str) -> Result<HoughtonElement, Error> {
    GroupWord::parse(word)?.eval(n)
}

fn dispatch(cmd: Command) -> Result<(i32, String), Error> {
    let mut out = String::new();
    match cmd {
        Command::Eval { n, word, point, line } => {
            if line {
                if n.is_some_and(|n| n != 2) {
                    return Err(Error::InvalidParams("--line works in H_2".into()));
                }
                let z: i64 = point.trim().parse().map_err(|_| Error::Parse(format!("bad line point {point:?}")))?;
                let y = element(2, &word)?.try_eval(line_embed(z))?;
                writeln!(out, "{}", point_project(y)?).unwrap();
            } else {
                let n = n.ok_or_else(|| Error::InvalidParams("--n is required without --line".into()))?;
                let x = Point::parse_colon(&point)?;
                writeln!(out, "{}", element(n, &word)?.try_eval(x)?.colon()).unwrap();
            }
        }
        Command::Mul { n, word } => {
            let mut g = HoughtonElement::identity(n);
            for w in &word {
                g = g.mul(&element(n, w)?)?;
            }
            writeln!(out, "{g}").unwrap();
        }
        Command::Decompose { n, word } => {
            let (sigma, v) = element(n, &word)?.decompose()?;
            writeln!(out, "sigma={sigma}").unwrap();
            writeln!(out, "pi={v}").unwrap();
            writeln!(out, "parity={}", sigma.parity()).unwrap();
        }
        Command::Orbits { n, word } => {
            let r = element(n, &word)?.orbits();
            writeln!(out, "infinite_orbits={}", r.infinite_orbit_count).unwrap();
            for c in &r.finite_cycles {
                let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                writeln!(out, "cycle=({})", pts.join(",")).unwrap();
            }
            writeln!(out, "finite_cycles={}", r.finite_cycles.len()).unwrap();
        }
        Command::Classify(args) => {
            write!(out, "{}", args.descriptor()?.report()?).unwrap();
        }
        Command::Enumerate { n, c } => {
            let c: Vec<i64> = c
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad exponent list {c:?}"))))
                .collect::<Result<_, _>>()?;
            let all = enumerate(n, &c)?;
            houghton::classify::distinctness_witnesses(&all)?;
            for d in &all {
                writeln!(out, "{d}").unwrap();
            }
            writeln!(out, "count={}", all.len()).unwrap();
        }
        Command::Member { desc, word } => {
            let d = desc.descriptor()?;
            writeln!(out, "member={}", d.contains(&element(d.n(), &word)?)?).unwrap();
        }
        Command::Gen(args) => {
            let g = args.descriptor()?.generating_set()?;
            for x in &g.elements {
                writeln!(out, "{x}").unwrap();
            }
            writeln!(out, "size={}", g.elements.len()).unwrap();
            writeln!(out, "certified={}", g.certified).unwrap();
            for n in &g.notes {
                writeln!(out, "note={n}").unwrap();
            }
        }
        Command::Verify { claim, params, all, seed } => {
            let reports: Vec<Report> = if all {
                if seed.is_some() {
                    let claims = standard_claims();
                    claims.iter().map(|(c, p)| verify_claim(c, &with_seed(p.clone(), seed))).collect()
                } else {
                    verify_all()
                }
            } else {
                let claim = claim.expect("clap enforces --claim without --all");
                vec![verify_claim(&claim, &with_seed(parse_params(&params)?, seed))]
            };
            for r in &reports {
                write!(out, "{r}").unwrap();
            }
            let code = if reports.iter().all(Report::passed) { EXIT_OK } else { EXIT_FAIL };
            return Ok((code, out));
        }
    }
    Ok((EXIT_OK, out))
}

fn with_seed(mut p: Vec<(String, String)>, seed: Option<u64>) -> Vec<(String, String)> {
    if let Some(s) = seed {
        if !p.iter().any(|(k, _)| k == "seed") {
            p.push(("seed".into(), s.to_string()));
        }
    }
    p
}
