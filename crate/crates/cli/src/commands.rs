//! Command definitions and their execution. Every command renders to a
//! string; nothing here touches stdout or the exit status.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use qleak_core::access::{information_ratio, is_ideal, port, PortSpec};
use qleak_core::leakage::{
    cond_entropy_padded, entropy_z, leakage_martinez, monte_carlo_entropy, LogQ, NestedPair, Observation,
};
use qleak_core::minimal::{check_massey, minimal_codewords};
use qleak_core::subspace::enumerate_subspaces;
use qleak_core::{ExtField, QPolymatroid, Subspace, VectorCode};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::input::{load_code, CodeFile, CodeSpec, FieldSpec, LoadedCode};
use crate::selector::{parse_subspace_selector, render_subspace};
use crate::suites::{require_pass, Suite, VerifyPlan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One invocation: a command plus the options shared by all commands.
#[derive(Debug, Parser)]
#[command(name = "qleak", version, about = "Exact leakage analysis of nested rank-metric coset codes")]
pub struct JobSpec {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Cap on enumerated subspaces.
    #[arg(long, global = true, env = "QLEAK_BUDGET_SUBSPACES", default_value_t = 1_000_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_subspaces: u64,
    /// Cap on enumerated codewords.
    #[arg(long, global = true, env = "QLEAK_BUDGET_CODEWORDS", default_value_t = 1 << 20,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_codewords: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank function of the q-polymatroid of a code over the whole lattice.
    RankTable {
        #[arg(long)]
        code: PathBuf,
    },
    /// Reconstructing and privacy spaces of the port at (P0, P).
    Port {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        p0: String,
        /// Defaults to the unit vectors outside P0's pivot.
        #[arg(long)]
        p: Option<String>,
        /// Also list every member of Γ and 𝒜.
        #[arg(long)]
        extensional: bool,
    },
    /// H(x | BC) for one observation or every observation row space.
    Leakage {
        #[arg(long)]
        code: PathBuf,
        /// Use C2 = C1(P0^⊥); otherwise the file's `subcode` is used.
        #[arg(long)]
        p0: Option<String>,
        #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
        obs: Option<String>,
        #[arg(long)]
        sweep: bool,
        /// Add a seeded Monte-Carlo estimate (single observation only).
        #[arg(long, requires = "obs")]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact entropies of the quotient variables Z_V.
    Entropy {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "obs", required = true)]
        obs: Vec<String>,
    },
    /// Minimal codewords of a vector code and of its dual, and the
    /// minimal-codeword description of the port at (P0, P).
    Minimal {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        p0: Option<String>,
        #[arg(long, requires = "p0")]
        p: Option<String>,
    },
    /// A Gabidulin code as a loadable code file, with its distance.
    Gabidulin {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated evaluation points (big-field encodings).
        #[arg(long)]
        points: Option<String>,
    },
    /// Run seeded verification suites.
    Verify {
        /// Suites to run; all of them when omitted.
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

/// Rendered output, plus the failure to report after it has been written.
#[derive(Debug)]
pub struct Rendered {
    pub text: String,
    pub failure: Option<CliError>,
}

impl From<String> for Rendered {
    fn from(text: String) -> Self {
        Rendered { text, failure: None }
    }
}

#[derive(Serialize)]
struct Exact {
    num: i64,
    den: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    unit: Option<&'static str>,
}

fn exact(r: Rational64, unit: Option<&'static str>) -> Exact {
    Exact { num: *r.numer(), den: *r.denom(), unit }
}

fn decimal(r: Rational64) -> String {
    format!("{:.6}", *r.numer() as f64 / *r.denom() as f64)
}

fn bits(h: LogQ, q: u32) -> String {
    format!("{:.6}", h.bits(q))
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn json_only(format: Format, command: &str) -> CliResult<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Input(format!("`{command}` has no CSV output"))),
    }
}

fn selector(code: &LoadedCode, text: &str) -> CliResult<Subspace> {
    parse_subspace_selector(code.field(), text, code.n())
}

/// `P` from the selector, or the coordinate complement of `P0`'s pivot.
fn complement_or(code: &LoadedCode, p0: &Subspace, p: Option<&str>) -> CliResult<Subspace> {
    match p {
        Some(text) => selector(code, text),
        None => {
            let pivots = p0.pivots();
            let rest: Vec<usize> = (0..code.n()).filter(|i| !pivots.contains(i)).collect();
            Ok(Subspace::coordinate(code.n(), &rest))
        }
    }
}

pub fn run(job: &JobSpec) -> CliResult<Rendered> {
    let c = &job.common;
    let subspaces = c.budget_subspaces as u128;
    let codewords = c.budget_codewords as u128;
    match &job.command {
        Command::RankTable { code } => rank_table(&load_code(code)?, subspaces, c.format).map(Into::into),
        Command::Port { code, p0, p, extensional } => {
            json_only(c.format, "port")?;
            let code = load_code(code)?;
            let p0 = selector(&code, p0)?;
            let p = complement_or(&code, &p0, p.as_deref())?;
            port_cmd(&code, p0, p, *extensional, subspaces).map(Into::into)
        }
        Command::Leakage { code, p0, obs, sweep, samples, seed } => {
            let code = load_code(code)?;
            let pair = match p0 {
                Some(text) => NestedPair::from_port(code.matrix.clone(), &selector(&code, text)?)?,
                None => {
                    let c2 = code.subcode.clone().ok_or_else(|| {
                        CliError::Input("give --p0 or a code file with a `subcode`".into())
                    })?;
                    NestedPair::new(code.matrix.clone(), c2)?
                }
            };
            let spaces = if *sweep {
                enumerate_subspaces(code.field(), &Subspace::full(code.n()), None, subspaces)?
            } else {
                vec![selector(&code, obs.as_deref().expect("clap enforces --obs or --sweep"))?]
            };
            let mc = samples.map(|s| (s, *seed));
            leakage_cmd(&pair, &spaces, mc, c.format).map(Into::into)
        }
        Command::Entropy { code, obs } => {
            json_only(c.format, "entropy")?;
            let code = load_code(code)?;
            let vs = obs.iter().map(|o| selector(&code, o)).collect::<CliResult<Vec<_>>>()?;
            let report = entropy_z(&code.matrix, &vs, codewords)?;
            let names: Vec<String> = vs.iter().map(render_subspace).collect();
            to_json(&json!({"spaces": names, "passed": report.passed(), "report": report})).map(Into::into)
        }
        Command::Minimal { code, p0, p } => {
            json_only(c.format, "minimal")?;
            let code = load_code(code)?;
            let v = code.require_vector()?;
            let massey = match p0 {
                Some(text) => {
                    let p0 = selector(&code, text)?;
                    let p = complement_or(&code, &p0, p.as_deref())?;
                    Some(check_massey(v, &p0, &p, codewords)?)
                }
                None => None,
            };
            let out = json!({
                "code": minimal_codewords(v, codewords)?,
                "dual": minimal_codewords(&v.dual(), codewords)?,
                "massey": massey,
            });
            to_json(&out).map(Into::into)
        }
        Command::Gabidulin { q, m, n, k, points } => {
            json_only(c.format, "gabidulin")?;
            gabidulin_cmd(*q, *m, *n, *k, points.as_deref(), codewords).map(Into::into)
        }
        Command::Verify { suites, seed, count } => {
            json_only(c.format, "verify")?;
            let suites = if suites.is_empty() { Suite::ALL.to_vec() } else { suites.clone() };
            let plan = VerifyPlan { suites, seed: *seed, count: *count };
            let reports = plan.run()?;
            let passed = reports.iter().all(|r| r.passed());
            let text = to_json(&json!({"plan": plan, "passed": passed, "reports": reports}))?;
            let failure = reports.iter().find_map(|r| require_pass(r).err());
            Ok(Rendered { text, failure })
        }
    }
}

fn rank_table(code: &LoadedCode, budget: u128, format: Format) -> CliResult<String> {
    let m = QPolymatroid::from_code_with(&code.matrix, budget)?;
    match format {
        Format::Json => {
            let rows: Vec<Value> = m
                .table()
                .map(|(v, r)| {
                    json!({"space": render_subspace(v), "dim": v.dim(),
                        "rank": exact(Rational64::new(r, m.denominator()), None)})
                })
                .collect();
            to_json(&json!({"ground_dim": m.ground_dim(), "denominator": m.denominator(),
                "q_matroid": m.is_q_matroid(), "ranks": rows}))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["space", "dim", "rank_num", "rank_den", "rank"])?;
            for (v, r) in m.table() {
                let x = Rational64::new(r, m.denominator());
                w.write_record([
                    render_subspace(v),
                    v.dim().to_string(),
                    x.numer().to_string(),
                    x.denom().to_string(),
                    decimal(x),
                ])?;
            }
            csv_string(w)
        }
    }
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
}

fn port_cmd(code: &LoadedCode, p0: Subspace, p: Subspace, extensional: bool, budget: u128) -> CliResult<String> {
    let m = Arc::new(QPolymatroid::from_code_with(&code.matrix, budget)?);
    let spec = PortSpec::new(m.clone(), p0, p)?;
    let s = port(&spec)?;
    let ground = |h: &BTreeSet<Subspace>| -> CliResult<Vec<String>> { Ok(s.in_ground(h)?.iter().map(render_subspace).collect()) };
    let gamma_min = ground(&s.gamma_min())?;
    let privacy_max = ground(&s.privacy_max())?;
    let mut out = json!({
        "p0": render_subspace(spec.p0()),
        "p": render_subspace(spec.p()),
        "rank_p0": exact(m.rank(spec.p0())?, None),
        "gamma_min": gamma_min,
        "privacy_max": privacy_max,
        "perfect": s.is_perfect()?,
        "degenerate": s.is_degenerate(),
        "connected": s.is_connected()?,
        "min_gap": s.min_gap(),
        "threshold": s.threshold()?,
        "information_ratio": exact(information_ratio(&spec)?, None),
        "ideal": is_ideal(&spec)?,
        "q_matroid": m.is_q_matroid(),
    });
    if extensional {
        out["gamma"] = json!(ground(s.gamma())?);
        out["privacy"] = json!(ground(s.privacy())?);
    }
    to_json(&out)
}

#[derive(Serialize)]
struct LeakageRow {
    rowspace: String,
    dim: usize,
    entropy: Exact,
    entropy_bits: String,
    leakage: Exact,
    leakage_bits: String,
}

fn leakage_cmd(pair: &NestedPair, spaces: &[Subspace], mc: Option<(u64, u64)>, format: Format) -> CliResult<String> {
    let q = pair.c1().field().order();
    let ell = pair.ell() as i64;
    let mut rows = Vec::with_capacity(spaces.len());
    for v in spaces {
        let obs = Observation::from_rowspace(v);
        let h = cond_entropy_padded(pair, &obs)?;
        let leak = LogQ::from_int(leakage_martinez(pair, &obs)?);
        debug_assert_eq!(h.value(), Rational64::from(ell) - leak.value());
        rows.push(LeakageRow {
            rowspace: render_subspace(v),
            dim: v.dim(),
            entropy: exact(h.value(), Some("logq")),
            entropy_bits: bits(h, q),
            leakage: exact(leak.value(), Some("logq")),
            leakage_bits: bits(leak, q),
        });
    }
    match format {
        Format::Json => {
            let estimate = match mc {
                Some((samples, seed)) => {
                    Some(monte_carlo_entropy(pair, &Observation::from_rowspace(&spaces[0]), samples, seed)?)
                }
                None => None,
            };
            to_json(&json!({"q": q, "ell": ell, "rows": rows, "monte_carlo": estimate}))
        }
        Format::Csv => {
            if mc.is_some() {
                return Err(CliError::Input("Monte-Carlo estimates are JSON-only".into()));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["rowspace", "dim", "h_num", "h_den", "h_bits", "leak_num", "leak_den", "leak_bits"])?;
            for r in rows {
                w.write_record([
                    r.rowspace,
                    r.dim.to_string(),
                    r.entropy.num.to_string(),
                    r.entropy.den.to_string(),
                    r.entropy_bits,
                    r.leakage.num.to_string(),
                    r.leakage.den.to_string(),
                    r.leakage_bits,
                ])?;
            }
            csv_string(w)
        }
    }
}

fn gabidulin_cmd(q: u32, m: u32, n: usize, k: usize, points: Option<&str>, budget: u128) -> CliResult<String> {
    let ext = Arc::new(ExtField::standard(q, 1, m)?);
    let points = points
        .map(|text| {
            text.split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| CliError::Input(format!("bad evaluation point `{x}`"))))
                .collect::<CliResult<Vec<u32>>>()
        })
        .transpose()?;
    let code = VectorCode::gabidulin(ext, n, k, points)?;
    let expanded = code.expand();
    let d = expanded.min_rank_distance(budget)?;
    let file = CodeFile {
        description: Some(format!("Gabidulin code [{n}, {k}] over GF({q}^{m})")),
        code: CodeSpec::Vector {
            field: FieldSpec { p: q, e: 1 },
            m,
            n,
            generator: code.generator().to_vec(),
            basis: None,
        },
        alternates: Vec::new(),
    };
    let mut out = serde_json::to_value(&file)?;
    out["properties"] = json!({
        "min_rank_distance": d,
        "singleton_bound_dim": expanded.singleton_bound(d),
        "dim_over_base": expanded.dim(),
        "mrd": expanded.dim() == expanded.singleton_bound(d),
    });
    to_json(&out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_str().unwrap().to_string()
    }

    fn exec(args: &[&str]) -> CliResult<Rendered> {
        let job = JobSpec::try_parse_from(std::iter::once("qleak").chain(args.iter().copied())).unwrap();
        run(&job)
    }

    #[test]
    fn port_lists_three_lines() {
        let out = exec(&["port", "--code", &fixture("binary_4x2.json"), "--p0", "e1", "--p", "e2,e3,e4"]).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        let mut gm: Vec<&str> = v["gamma_min"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        gm.sort();
        assert_eq!(gm, ["e2+e3", "e2+e4", "e3+e4"]);
    }

    #[test]
    fn sweep_reads_zero_bits_on_reconstructing_line() {
        let out = exec(&["leakage", "--code", &fixture("binary_4x2.json"), "--p0", "e1", "--sweep", "--format", "csv"])
            .unwrap();
        let mut reader = csv::Reader::from_reader(out.text.as_bytes());
        let headers = reader.headers().unwrap().clone();
        let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
        let (obs, bits) = (col("rowspace"), col("h_bits"));
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        // every subspace of F_2^4
        assert_eq!(rows.len(), 67);
        let line = rows.iter().find(|r| &r[obs] == "e2+e3").unwrap();
        assert_eq!(line[bits].parse::<f64>().unwrap(), 0.0);
        let zero = rows.iter().find(|r| &r[obs] == "0").unwrap();
        assert_eq!(zero[bits].parse::<f64>().unwrap(), 2.0);
    }

    #[test]
    fn verify_axioms_passes() {
        let out = exec(&["verify", "--suite", "axioms", "--seed", "7", "--count", "20"]).unwrap();
        assert!(out.failure.is_none());
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["passed"], Value::Bool(true));
    }

    #[test]
    fn input_errors_exit_two() {
        let dir = std::env::temp_dir().join(format!("qleak-commands-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.json");
        std::fs::write(&bad, "{\n  \"kind\": \"matrix\",\n  \"field\": {\"p\": 2}\n  \"n\": 4\n}").unwrap();
        let e = exec(&["rank-table", "--code", bad.to_str().unwrap()]).err().unwrap();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line 4"), "{e}");
        let missing = exec(&["rank-table", "--code", dir.join("absent.json").to_str().unwrap()]).err().unwrap();
        assert_eq!(missing.exit_code(), 2);
        let selector = exec(&["port", "--code", &fixture("binary_4x2.json"), "--p0", "e9"]).err().unwrap();
        assert_eq!(selector.exit_code(), 2);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn exhausted_budgets_exit_three() {
        let e = exec(&["port", "--code", &fixture("binary_4x2.json"), "--p0", "e1", "--budget-subspaces", "1"])
            .err()
            .unwrap();
        assert_eq!(e.exit_code(), 3);
        let e = exec(&["minimal", "--code", &fixture("f8_4_2.json"), "--budget-codewords", "2"]).err().unwrap();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn verification_failures_exit_four() {
        let e = CliError::Verification {
            suite: "axioms".into(),
            counterexample: Value::Null,
        };
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn gabidulin_output_loads_back() {
        let out = exec(&["gabidulin", "--m", "3", "--n", "3", "--k", "2"]).unwrap();
        let file = crate::input::parse_code_file(&out.text).unwrap();
        assert_eq!(file.code.build().unwrap().n(), 3);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["properties"]["mrd"], Value::Bool(true));
    }

    #[test]
    fn zero_budget_is_rejected() {
        let r = JobSpec::try_parse_from(["qleak", "verify", "--budget-subspaces", "0"]);
        assert!(r.is_err());
    }
}
