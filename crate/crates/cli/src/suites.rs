//! Seeded verification suites. Each suite draws `count` instances from a
//! ChaCha stream keyed by `(seed, instance index)`, runs one identity check
//! per instance and folds the outcomes into a single [`CheckReport`].
//! Instances run on the rayon pool; assembly is in instance order, so the
//! report depends only on `(suite, seed, count)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use clap::ValueEnum;
use num_rational::Rational64;
use qleak_core::access::{
    check_brickell_davenport, check_dual_port, check_gap_bound, check_minor_duality, check_port_minor_identities,
    check_qmatroid_port_characterization, check_uniform_threshold, port, CheckReport, PortSpec,
};
use qleak_core::code::DEFAULT_CODEWORD_BUDGET;
use qleak_core::leakage::{
    cond_entropy_direct, cond_entropy_padded, cond_entropy_port, entropy_z, leakage_martinez, LogQ, NestedPair,
    Observation,
};
use qleak_core::minimal::check_massey;
use qleak_core::subspace::{all_subspaces, enumerate_subspaces, DEFAULT_SUBSPACE_BUDGET};
use qleak_core::{BilinearForm, Error, ExtField, Field, MatrixCode, QPolymatroid, Subspace, VectorCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Axioms,
    Duality,
    CcdualLemma,
    EntropyThm,
    LeakageThm,
    PortMonotone,
    MinorDuality,
    PortMinors,
    DualPort,
    QmatroidPort,
    Massey,
    GapBound,
    UniformThreshold,
    BrickellDavenport,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Axioms,
        Suite::Duality,
        Suite::CcdualLemma,
        Suite::EntropyThm,
        Suite::LeakageThm,
        Suite::PortMonotone,
        Suite::MinorDuality,
        Suite::PortMinors,
        Suite::DualPort,
        Suite::QmatroidPort,
        Suite::Massey,
        Suite::GapBound,
        Suite::UniformThreshold,
        Suite::BrickellDavenport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Duality => "duality",
            Suite::CcdualLemma => "ccdual-lemma",
            Suite::EntropyThm => "entropy-thm",
            Suite::LeakageThm => "leakage-thm",
            Suite::PortMonotone => "port-monotone",
            Suite::MinorDuality => "minor-duality",
            Suite::PortMinors => "port-minors",
            Suite::DualPort => "dual-port",
            Suite::QmatroidPort => "qmatroid-port",
            Suite::Massey => "massey",
            Suite::GapBound => "gap-bound",
            Suite::UniformThreshold => "uniform-threshold",
            Suite::BrickellDavenport => "brickell-davenport",
        }
    }
}

/// Which suites to run, on how many instances, from which seed.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyPlan {
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub count: usize,
}

impl VerifyPlan {
    pub fn run(&self) -> CliResult<Vec<CheckReport>> {
        self.suites.iter().map(|&s| run_suite(s, self.seed, self.count)).collect()
    }
}

pub fn run_suite(suite: Suite, seed: u64, count: usize) -> CliResult<CheckReport> {
    let mut report = match suite {
        Suite::Axioms => per_instance(suite, seed, count, axioms_case)?,
        Suite::Duality => per_instance(suite, seed, count, duality_case)?,
        Suite::CcdualLemma => per_instance(suite, seed, count, ccdual_case)?,
        Suite::EntropyThm => per_instance(suite, seed, count, entropy_case)?,
        Suite::LeakageThm => per_instance(suite, seed, count, leakage_case)?,
        Suite::PortMonotone => per_instance(suite, seed, count, port_monotone_case)?,
        Suite::MinorDuality => per_instance(suite, seed, count, minor_duality_case)?,
        Suite::PortMinors => port_minors_suite(seed, count)?,
        Suite::DualPort => dual_port_suite(seed, count)?,
        Suite::QmatroidPort => qmatroid_port_suite(seed, count)?,
        Suite::Massey => massey_suite(seed, count)?,
        Suite::GapBound => gap_bound_suite(seed, count)?,
        Suite::UniformThreshold => uniform_threshold_suite(seed)?,
        Suite::BrickellDavenport => brickell_davenport_suite(seed, count)?,
    };
    report.check = suite.name().to_string();
    Ok(report)
}

/// Errors a verification failure when the report has counterexamples.
pub fn require_pass(report: &CheckReport) -> CliResult<()> {
    match report.failures.first() {
        None => Ok(()),
        Some(first) => Err(CliError::Verification {
            suite: report.check.clone(),
            counterexample: first.clone(),
        }),
    }
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

fn per_instance<F>(suite: Suite, seed: u64, count: usize, case: F) -> CliResult<CheckReport>
where
    F: Fn(&mut ChaCha8Rng) -> Result<CheckReport, Error> + Sync,
{
    let parts = (0..count)
        .into_par_iter()
        .map(|i| case(&mut rng_for(seed, i)).map(|r| (i, r)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = CheckReport::new(suite.name());
    for (i, part) in parts {
        report.cases += part.cases;
        report
            .failures
            .extend(part.failures.into_iter().map(|f| json!({"seed": seed, "instance": i, "failure": f})));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// instance generators

/// `(q, n, m)` shapes small enough for exhaustive lattice scans.
const MATRIX_SHAPES: [(u32, usize, usize); 7] = [(2, 2, 2), (2, 3, 2), (2, 3, 3), (2, 4, 2), (2, 4, 3), (3, 2, 2), (3, 3, 2)];

#[derive(Clone, Debug, Serialize)]
struct CodeParams {
    q: u32,
    n: usize,
    m: usize,
    k: usize,
    seed: u64,
}

fn random_matrix_code(rng: &mut ChaCha8Rng) -> Result<(CodeParams, MatrixCode), Error> {
    let (q, n, m) = MATRIX_SHAPES[rng.gen_range(0..MATRIX_SHAPES.len())];
    let k = rng.gen_range(1..n * m);
    let seed = rng.gen();
    let code = MatrixCode::random(Field::shared(q, 1)?, n, m, k, seed)?;
    Ok((CodeParams { q, n, m, k, seed }, code))
}

/// `(p, m, n)` for vector codes over `F_{p^m}`.
const VECTOR_SHAPES: [(u32, u32, usize); 5] = [(2, 2, 2), (2, 2, 3), (2, 3, 3), (2, 3, 4), (3, 2, 3)];

fn random_vector_code(rng: &mut ChaCha8Rng) -> Result<(Value, VectorCode), Error> {
    let (p, m, n) = VECTOR_SHAPES[rng.gen_range(0..VECTOR_SHAPES.len())];
    let k = rng.gen_range(1..n);
    let seed = rng.gen();
    let ext = Arc::new(ExtField::standard(p, 1, m)?);
    let code = VectorCode::random(ext, n, k, seed)?;
    Ok((json!({"p": p, "m": m, "n": n, "k": k, "seed": seed}), code))
}

fn random_line(rng: &mut ChaCha8Rng, f: &Field, n: usize) -> Subspace {
    loop {
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.order())).collect();
        if v.iter().any(|&x| x != 0) {
            return Subspace::span(f, &[v], n).expect("vector of length n");
        }
    }
}

/// A random complement of the line `p0`: the unit vectors off `p0`'s pivot,
/// each shifted by a random multiple of `p0`'s generator.
fn random_complement(rng: &mut ChaCha8Rng, f: &Field, p0: &Subspace) -> Subspace {
    let n = p0.ambient();
    let u = &p0.basis()[0];
    let pivot = p0.pivots()[0];
    let rows: Vec<Vec<u32>> = (0..n)
        .filter(|&j| j != pivot)
        .map(|j| {
            let c = rng.gen_range(0..f.order());
            let mut row: Vec<u32> = u.iter().map(|&x| f.mul(c, x)).collect();
            row[j] = f.add(row[j], 1);
            row
        })
        .collect();
    Subspace::span(f, &rows, n).expect("rows of length n")
}

/// Random port over `m`, retrying until `ρ(P0) > 0`.
fn random_port_of(rng: &mut ChaCha8Rng, m: Arc<QPolymatroid>) -> Result<Option<PortSpec>, Error> {
    let f = m.field().clone();
    let n = m.ground_dim();
    for _ in 0..8 {
        let p0 = random_line(rng, &f, n);
        if m.rank_num(&p0)? == 0 {
            continue;
        }
        let p = random_complement(rng, &f, &p0);
        return PortSpec::new(m, p0, p).map(Some);
    }
    Ok(None)
}

/// Ports from matrix codes (often fractional) or vector codes (q-matroids).
fn random_port(rng: &mut ChaCha8Rng, max_n: usize) -> Result<(Value, Option<PortSpec>), Error> {
    let (label, m) = if rng.gen_bool(0.5) {
        let (params, c) = loop {
            let (params, c) = random_matrix_code(rng)?;
            if params.n <= max_n {
                break (params, c);
            }
        };
        (json!({"matrix": params}), QPolymatroid::from_code(&c)?)
    } else {
        let (params, c) = loop {
            let (params, c) = random_vector_code(rng)?;
            if c.len() <= max_n {
                break (params, c);
            }
        };
        (json!({"vector": params}), QPolymatroid::from_code(&c.expand())?)
    };
    let spec = random_port_of(rng, Arc::new(m))?;
    let label = match &spec {
        Some(s) => json!({"code": label, "p0": s.p0(), "p": s.p()}),
        None => json!({"code": label}),
    };
    Ok((label, spec))
}

fn fail_with(report: &mut CheckReport, label: &Value, inner: CheckReport) {
    report.cases += inner.cases;
    for f in inner.failures {
        report.fail(json!({"instance": label, "failure": f}));
    }
}

// ---------------------------------------------------------------------------
// code-level suites

fn axioms_case(rng: &mut ChaCha8Rng) -> Result<CheckReport, Error> {
    let (params, c) = random_matrix_code(rng)?;
    let axioms = QPolymatroid::from_code(&c)?.verify_axioms();
    let mut r = CheckReport::new("axioms");
    r.cases = axioms.checked_spaces;
    if let Some(v) = axioms.violations.first() {
        r.fail(json!({"code": params, "violation": v}));
    }
    Ok(r)
}

fn duality_case(rng: &mut ChaCha8Rng) -> Result<CheckReport, Error> {
    let (params, c) = random_matrix_code(rng)?;
    let lhs = QPolymatroid::from_code(&c)?.dual(&BilinearForm::standard(c.n()))?;
    let rhs = QPolymatroid::from_code(&c.dual())?;
    let mut r = CheckReport::new("duality");
    r.cases = lhs.spaces().len();
    if !lhs.same_table(&rhs) {
        let diff: Vec<Value> = lhs
            .table()
            .filter(|(v, x)| rhs.rank_num(v).ok() != Some(*x))
            .take(3)
            .map(|(v, x)| json!({"v": v, "dual_of_code": x, "code_of_dual": rhs.rank_num(v).ok()}))
            .collect();
        r.fail(json!({"code": params, "differences": diff}));
    }
    Ok(r)
}

/// `dim C^⊥(V) = dim C^⊥ − m·dim V^⊥ + dim C(V^⊥)` for every `V`.
fn ccdual_case(rng: &mut ChaCha8Rng) -> Result<CheckReport, Error> {
    let (params, c) = random_matrix_code(rng)?;
    let f = c.field().clone();
    let d = c.dual();
    let mut r = CheckReport::new("ccdual-lemma");
    for v in all_subspaces(&f, c.n())? {
        let vp = v.perp(&f);
        let lhs = d.shortened_dim(&v)? as i64;
        let rhs = d.dim() as i64 - (c.m() * vp.dim()) as i64 + c.shortened_dim(&vp)? as i64;
        r.cases += 1;
        if lhs != rhs {
            r.fail(json!({"code": params, "v": v, "lhs": lhs, "rhs": rhs}));
        }
    }
    Ok(r)
}

fn entropy_case(rng: &mut ChaCha8Rng) -> Result<CheckReport, Error> {
    let (params, c) = random_matrix_code(rng)?;
    let lattice = all_subspaces(c.field(), c.n())?;
    let vs: Vec<Subspace> = (0..3).map(|_| lattice[rng.gen_range(0..lattice.len())].clone()).collect();
    let e = entropy_z(&c, &vs, DEFAULT_CODEWORD_BUDGET)?;
    let mut r = CheckReport::new("entropy-thm");
    r.cases = vs.len() + 1 + e.conditionals.len();
    if !e.passed() {
        r.fail(json!({"code": params, "spaces": vs, "report": e}));
    }
    Ok(r)
}

/// Direct enumeration, the padded-code route, the Martínez-Peñas count and
/// (for port pairs) the port route, over every observation row space.
fn leakage_case(rng: &mut ChaCha8Rng) -> Result<CheckReport, Error> {
    let f = Field::shared(2, 1)?;
    let n = rng.gen_range(2..=4usize);
    let m = rng.gen_range(1..=2usize);
    let k1 = rng.gen_range(2..=(n * m).min(6));
    let seed: u64 = rng.gen();
    let (label, pair, p0) = if rng.gen_bool(0.5) {
        let k2 = rng.gen_range(0..k1);
        let pair = NestedPair::random(f.clone(), n, m, k1, k2, seed)?;
        (json!({"n": n, "m": m, "k1": k1, "k2": k2, "seed": seed}), pair, None)
    } else {
        let c1 = MatrixCode::random(f.clone(), n, m, k1, seed)?;
        let p0 = random_line(rng, &f, n);
        match NestedPair::from_port(c1, &p0) {
            Ok(pair) => (json!({"n": n, "m": m, "k1": k1, "seed": seed, "p0": p0}), pair, Some(p0)),
            // ρ(P0) = 0: C1(P0^⊥) = C1 is not a proper subcode
            Err(Error::InvalidParameters(_)) => return Ok(CheckReport::new("leakage-thm")),
            Err(e) => return Err(e),
        }
    };
    let ell = pair.ell() as i64;
    let mut r = CheckReport::new("leakage-thm");
    for v in all_subspaces(&f, n)? {
        let obs = Observation::from_rowspace(&v);
        let direct = cond_entropy_direct(&pair, &obs, DEFAULT_CODEWORD_BUDGET)?;
        let padded = cond_entropy_padded(&pair, &obs)?;
        let martinez = LogQ::from_int(ell - leakage_martinez(&pair, &obs)?);
        let via_port = p0.as_ref().map(|p0| cond_entropy_port(&pair, p0, &obs)).transpose()?;
        r.cases += 1;
        if direct != padded || direct != martinez || via_port.is_some_and(|x| x != direct) {
            r.fail(json!({"pair": label, "v": v, "direct": direct, "padded": padded,
                "martinez": martinez, "port": via_port}));
        }
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// port suites

/// Recomputes `Γ` and `𝒜` from conditional ranks and checks the closure
/// properties directly, and perfection for q-matroid ports with `ρ(P0) = 1`.
fn port_monotone_case(rng: &mut ChaCha8Rng) -> Result<CheckReport, Error> {
    let mut r = CheckReport::new("port-monotone");
    let (label, Some(spec)) = random_port(rng, 4)? else {
        return Ok(r);
    };
    let f = spec.polymatroid().field().clone();
    let m = spec.polymatroid();
    let s = port(&spec)?;
    let r0 = m.rank(spec.p0())?;
    let zero = Rational64::from(0);
    let lattice = all_subspaces(&f, spec.p().dim())?;
    let mut gamma = BTreeSet::new();
    let mut privacy = BTreeSet::new();
    for u in &lattice {
        let c = m.cond_rank(spec.p0(), &u.embed_in(&f, spec.p())?)?;
        if c == zero {
            gamma.insert(u.clone());
        }
        if c == r0 {
            privacy.insert(u.clone());
        }
    }
    r.cases = lattice.len();
    if &gamma != s.gamma() || &privacy != s.privacy() {
        r.fail(json!({"instance": label, "reason": "port sets differ from rank recomputation"}));
    }
    for v in &lattice {
        for w in lattice.iter().filter(|w| w.contains(&f, v)) {
            if gamma.contains(v) && !gamma.contains(w) {
                r.fail(json!({"instance": label, "reason": "Γ not upward closed", "v": v, "w": w}));
            }
            if privacy.contains(w) && !privacy.contains(v) {
                r.fail(json!({"instance": label, "reason": "𝒜 not downward closed", "v": v, "w": w}));
            }
        }
    }
    if gamma.intersection(&privacy).next().is_some() {
        r.fail(json!({"instance": label, "reason": "Γ and 𝒜 intersect"}));
    }
    if m.is_q_matroid() && m.rank_num(spec.p0())? == m.denominator() && !s.is_perfect()? {
        r.fail(json!({"instance": label, "reason": "q-matroid port is not perfect"}));
    }
    Ok(r)
}

fn minor_duality_case(rng: &mut ChaCha8Rng) -> Result<CheckReport, Error> {
    let mut r = CheckReport::new("minor-duality");
    let (label, Some(spec)) = random_port(rng, 4)? else {
        return Ok(r);
    };
    let s = port(&spec)?;
    let f = s.field().clone();
    let form = BilinearForm::standard(s.ambient_dim());
    let back = s.dual(&form)?.dual(&form)?;
    if back.gamma() != s.gamma() || back.privacy() != s.privacy() {
        r.fail(json!({"instance": label, "reason": "S** differs from S"}));
    }
    for z in all_subspaces(&f, s.ambient_dim())? {
        fail_with(&mut r, &json!({"port": label, "z": z}), check_minor_duality(&s, &z)?);
    }
    Ok(r)
}

/// Gates on the restriction identity and on the contraction identity with
/// the privacy part of `S/Z` replaced by `{W : ρ(P0 | π⁻¹(W)) = ρ(P0 | Z)}`;
/// the literal privacy identity is tallied in `details`.
fn port_minors_suite(seed: u64, count: usize) -> CliResult<CheckReport> {
    let parts = (0..count)
        .into_par_iter()
        .map(|i| port_minors_case(&mut rng_for(seed, i)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = CheckReport::new("port-minors");
    let (mut contractions, mut literal_failed) = (0usize, 0usize);
    let mut counterexample = Value::Null;
    for (i, (part, label, tallies)) in parts.into_iter().enumerate() {
        report.cases += part.cases;
        report
            .failures
            .extend(part.failures.into_iter().map(|f| json!({"seed": seed, "instance": i, "failure": f})));
        for (z, c) in tallies {
            contractions += 1;
            if c["literal_privacy"] == json!(false) {
                literal_failed += 1;
                if counterexample.is_null() {
                    counterexample = json!({"seed": seed, "instance": i, "port": label, "z": z, "contraction": c});
                }
            }
        }
    }
    report.details = json!({
        "contractions": contractions,
        "literal_privacy": {"held": contractions - literal_failed, "failed": literal_failed,
            "first_counterexample": counterexample},
    });
    Ok(report)
}

type MinorsCase = (CheckReport, Value, Vec<(Subspace, Value)>);

fn port_minors_case(rng: &mut ChaCha8Rng) -> Result<MinorsCase, Error> {
    let mut r = CheckReport::new("port-minors");
    let mut tallies = Vec::new();
    let (label, Some(spec)) = random_port(rng, 4)? else {
        return Ok((r, Value::Null, tallies));
    };
    let f = spec.polymatroid().field().clone();
    for z in enumerate_subspaces(&f, spec.p(), None, DEFAULT_SUBSPACE_BUDGET)? {
        let inner = check_port_minor_identities(&spec, &z)?;
        if inner.details["contraction_checked"] == json!(true) {
            tallies.push((z, inner.details["contraction"].clone()));
        }
        fail_with(&mut r, &label, inner);
    }
    Ok((r, label, tallies))
}

/// Fixed ports used by several suites, besides the random ones.
fn reference_ports() -> Result<Vec<(Value, PortSpec)>, Error> {
    let f2 = Field::shared(2, 1)?;
    let e1 = Subspace::coordinate(4, &[0]);
    let rest = Subspace::coordinate(4, &[1, 2, 3]);
    let c_binary = crate::fixtures::binary_4x2_matrix()?;
    let m_binary = Arc::new(QPolymatroid::from_code(&c_binary)?);
    let c_f8 = crate::fixtures::f8_4_2()?;
    let m_f8 = Arc::new(QPolymatroid::from_code(&c_f8.expand())?);
    let u42 = Arc::new(QPolymatroid::uniform(f2, 4, 2)?);
    Ok(vec![
        (json!("example-4x2"), PortSpec::new(m_binary, e1.clone(), rest.clone())?),
        (json!("example-f8"), PortSpec::new(m_f8, e1.clone(), rest.clone())?),
        (json!("uniform-4-2"), PortSpec::new(u42, e1, rest)?),
    ])
}

/// Runs `case` on the reference ports and on `count` random ports; instances
/// that fail the check's preconditions are counted in `details.skipped`.
fn port_suite<F>(name: &str, seed: u64, count: usize, max_n: usize, case: F) -> CliResult<CheckReport>
where
    F: Fn(&PortSpec) -> Result<CheckReport, Error> + Sync,
{
    let mut instances = reference_ports()?;
    let random = (0..count)
        .into_par_iter()
        .map(|i| random_port(&mut rng_for(seed, i), max_n))
        .collect::<Result<Vec<_>, Error>>()?;
    instances.extend(random.into_iter().filter_map(|(l, s)| s.map(|s| (l, s))));
    let outcomes = instances
        .par_iter()
        .map(|(label, spec)| match case(spec) {
            Ok(r) => Ok(Some((label.clone(), r))),
            Err(Error::Precondition(_)) | Err(Error::NotQMatroid) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = CheckReport::new(name);
    let mut skipped = 0;
    let mut checked = 0;
    for outcome in outcomes {
        match outcome {
            Some((label, r)) => {
                checked += 1;
                fail_with(&mut report, &label, r);
            }
            None => skipped += 1,
        }
    }
    report.details = json!({"instances": checked, "skipped": skipped});
    Ok(report)
}

fn dual_port_suite(seed: u64, count: usize) -> CliResult<CheckReport> {
    port_suite("dual-port", seed, count, 4, |spec| {
        check_dual_port(spec, &BilinearForm::standard(spec.p0().ambient()))
    })
}

fn gap_bound_suite(seed: u64, count: usize) -> CliResult<CheckReport> {
    port_suite("gap-bound", seed, count, 4, check_gap_bound)
}

fn qmatroid_port_suite(seed: u64, count: usize) -> CliResult<CheckReport> {
    let mut report = port_suite("qmatroid-port", seed, count, 4, |spec| {
        Ok(check_qmatroid_port_characterization(spec)?.to_check())
    })?;
    let reference = reference_ports()?;
    let ch = check_qmatroid_port_characterization(&reference[0].1)?;
    report.details["example_non_circuit_minimal"] = json!(ch.non_circuit_minimal);
    Ok(report)
}

/// Asserts `image ⊆ Γ_min` and the projection description of `Γ_min`; the
/// literal necessity clause is tallied in `details`, not asserted.
fn massey_suite(seed: u64, count: usize) -> CliResult<CheckReport> {
    let mut instances = vec![(
        json!("example-f8"),
        crate::fixtures::f8_4_2()?,
        Subspace::coordinate(4, &[0]),
        Subspace::coordinate(4, &[1, 2, 3]),
    )];
    for i in 0..count {
        let mut rng = rng_for(seed, i);
        let (label, c) = random_vector_code(&mut rng)?;
        let f = c.ext().small().clone();
        let p0 = random_line(&mut rng, &f, c.len());
        let p = random_complement(&mut rng, &f, &p0);
        instances.push((label, c, p0, p));
    }
    let outcomes = instances
        .par_iter()
        .map(|(label, c, p0, p)| match check_massey(c, p0, p, DEFAULT_CODEWORD_BUDGET) {
            Ok(r) => Ok(Some((label.clone(), p0.clone(), r))),
            Err(Error::InvalidParameters(_)) | Err(Error::Precondition(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = CheckReport::new("massey");
    let (mut skipped, mut applicable, mut held) = (0, 0, 0);
    let mut counterexample = Value::Null;
    for outcome in outcomes {
        let Some((label, p0, r)) = outcome else {
            skipped += 1;
            continue;
        };
        report.cases += 1;
        if !r.sufficiency || !r.projection_characterization {
            report.fail(json!({"instance": label, "p0": p0, "report": r}));
        }
        if let Some(ok) = r.necessity {
            applicable += 1;
            if ok {
                held += 1;
            } else if counterexample.is_null() {
                counterexample = json!({"instance": label, "p0": p0, "unwitnessed": r.unwitnessed});
            }
        }
    }
    report.details = json!({
        "skipped": skipped,
        "necessity": {"applicable": applicable, "held": held, "failed": applicable - held,
            "first_counterexample": counterexample},
    });
    Ok(report)
}

/// `U_{n,k}` ports for `k ∈ {1, 2, 3}`, `n ∈ {2, …, 5}`, random `(P0, P)`;
/// includes the degenerate `dim P < k` cases.
fn uniform_threshold_suite(seed: u64) -> CliResult<CheckReport> {
    let f = Field::shared(2, 1)?;
    let mut jobs = Vec::new();
    for k in 1..=3usize {
        for n in 2..=5usize {
            if k <= n {
                jobs.push((k, n));
            }
        }
    }
    let parts = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(k, n))| {
            let mut rng = rng_for(seed, i);
            let p0 = random_line(&mut rng, &f, n);
            let p = random_complement(&mut rng, &f, &p0);
            check_uniform_threshold(f.clone(), k, &p0, &p).map(|r| (json!({"n": n, "k": k}), r))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = CheckReport::new("uniform-threshold");
    let degenerate = jobs.iter().filter(|&&(k, n)| n - 1 < k).count();
    for (label, r) in parts {
        fail_with(&mut report, &label, r);
    }
    report.details = json!({"instances": jobs.len(), "degenerate_instances": degenerate});
    Ok(report)
}

/// The fractional-rank port pinned as a non-vacuousness witness: a random
/// `3`-dimensional code in `F_2^{3×2}` with `ρ(⟨e2⟩) = 1/2`.
pub fn fractional_witness() -> Result<PortSpec, Error> {
    let c = MatrixCode::random(Field::shared(2, 1)?, 3, 2, 3, 0)?;
    PortSpec::new(
        Arc::new(QPolymatroid::from_code(&c)?),
        Subspace::coordinate(3, &[0]),
        Subspace::coordinate(3, &[1, 2]),
    )
}

fn brickell_davenport_suite(seed: u64, count: usize) -> CliResult<CheckReport> {
    let mut instances = reference_ports()?;
    instances.push((json!("fractional-witness"), fractional_witness()?));
    let random = (0..count)
        .into_par_iter()
        .map(|i| random_port(&mut rng_for(seed, i), 4))
        .collect::<Result<Vec<_>, Error>>()?;
    instances.extend(random.into_iter().filter_map(|(l, s)| s.map(|s| (l, s))));
    let outcomes = instances
        .par_iter()
        .map(|(label, spec)| check_brickell_davenport(spec).map(|r| (label.clone(), r)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = CheckReport::new("brickell-davenport");
    let mut met = 0;
    let mut fractional_unmet = 0;
    for (label, r) in &outcomes {
        report.cases += 1;
        if r.hypotheses_met() {
            met += 1;
        } else if !r.restriction_integral {
            fractional_unmet += 1;
        }
        if !r.passed() {
            report.fail(json!({"instance": label, "report": r}));
        }
    }
    let witness = &outcomes[3].1;
    if witness.hypotheses_met() || witness.restriction_integral {
        report.fail(json!({"instance": "fractional-witness", "reason": "witness no longer fractional with failed hypotheses"}));
    }
    report.details = json!({"instances": outcomes.len(), "hypotheses_met": met,
        "fractional_with_failed_hypotheses": fractional_unmet, "witness": witness});
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip_through_clap() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_str(s.name(), false).unwrap(), s);
        }
    }

    #[test]
    fn complements_are_complements() {
        let f = Field::new(3, 1, None).unwrap();
        let mut rng = rng_for(5, 0);
        for _ in 0..20 {
            let p0 = random_line(&mut rng, &f, 4);
            let p = random_complement(&mut rng, &f, &p0);
            assert!(p0.is_complement_of(&f, &p));
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = serde_json::to_string(&run_suite(Suite::PortMonotone, 3, 4).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(Suite::PortMonotone, 3, 4).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
