//! Nested coset coding and the information an observation `BC` leaks about
//! the message.
//!
//! Entropies are exact rationals in units of `log₂ q` bits ([`LogQ`]).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::MatrixCode;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::subspace::{dot, enumerate_subspaces, rank, rref_in_place, MatrixFq, Subspace};

/// An exact quantity measured in units of `log₂ q` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogQ(pub Rational64);

impl Serialize for LogQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LogQ", 3)?;
        st.serialize_field("num", self.0.numer())?;
        st.serialize_field("den", self.0.denom())?;
        st.serialize_field("unit", "logq")?;
        st.end()
    }
}

impl LogQ {
    pub fn from_int(v: i64) -> Self {
        LogQ(Rational64::from(v))
    }

    pub fn value(&self) -> Rational64 {
        self.0
    }

    /// Numeric value in bits.
    pub fn bits(&self, q: u32) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64 * (q as f64).log2()
    }
}

impl std::ops::Sub for LogQ {
    type Output = LogQ;
    fn sub(self, rhs: LogQ) -> LogQ {
        LogQ(self.0 - rhs.0)
    }
}

impl std::ops::Add for LogQ {
    type Output = LogQ;
    fn add(self, rhs: LogQ) -> LogQ {
        LogQ(self.0 + rhs.0)
    }
}

/// `C2 ⪇ C1` together with a complement `𝒲` of `C2` in `C1` and
/// `ψ: F_q^ℓ → 𝒲`, `x ↦ Σ x_i W_i`.
#[derive(Clone, Debug)]
pub struct NestedPair {
    c1: MatrixCode,
    c2: MatrixCode,
    c1_dual: MatrixCode,
    c2_dual: MatrixCode,
    complement: Vec<Vec<u32>>,
}

impl NestedPair {
    /// Uses the completion of `C2`'s basis by `C1`'s canonical basis as `𝒲`.
    pub fn new(c1: MatrixCode, c2: MatrixCode) -> Result<Self> {
        Self::check_nesting(&c1, &c2)?;
        let f = c1.field().clone();
        let mut acc: Vec<Vec<u32>> = c2.basis().to_vec();
        let mut complement = Vec::new();
        for b in c1.basis() {
            acc.push(b.clone());
            if rank(&f, &acc) == acc.len() {
                complement.push(b.clone());
            } else {
                acc.pop();
            }
        }
        Ok(Self::assemble(c1, c2, complement))
    }

    /// Uses an explicit basis of `𝒲`.
    pub fn with_complement(c1: MatrixCode, c2: MatrixCode, complement: Vec<Vec<u32>>) -> Result<Self> {
        Self::check_nesting(&c1, &c2)?;
        let f = c1.field().clone();
        let ell = c1.dim() - c2.dim();
        let mut all: Vec<Vec<u32>> = c2.basis().to_vec();
        all.extend(complement.iter().cloned());
        if complement.len() != ell
            || complement.iter().any(|w| !c1.contains(w))
            || rank(&f, &all) != c1.dim()
        {
            return Err(Error::InvalidParameters("not a complement of C2 in C1".into()));
        }
        Ok(Self::assemble(c1, c2, complement))
    }

    fn check_nesting(c1: &MatrixCode, c2: &MatrixCode) -> Result<()> {
        if c1.field() != c2.field() || c1.n() != c2.n() || c1.m() != c2.m() {
            return Err(Error::Shape("codes of a nested pair must share field and shape".into()));
        }
        if !c2.is_subcode_of(c1) || c2.dim() == c1.dim() {
            return Err(Error::InvalidParameters("C2 must be a proper subcode of C1".into()));
        }
        Ok(())
    }

    fn assemble(c1: MatrixCode, c2: MatrixCode, complement: Vec<Vec<u32>>) -> Self {
        Self {
            c1_dual: c1.dual(),
            c2_dual: c2.dual(),
            c1,
            c2,
            complement,
        }
    }

    /// The pair `C1(P0^⊥) ⪇ C1` used for ports.
    pub fn from_port(c1: MatrixCode, p0: &Subspace) -> Result<Self> {
        let c2 = c1.shorten(&p0.perp(c1.field()))?;
        Self::new(c1, c2)
    }

    /// Seeded random pair with `dim C1 = k1`, `dim C2 = k2 < k1`.
    pub fn random(field: Arc<Field>, n: usize, m: usize, k1: usize, k2: usize, seed: u64) -> Result<Self> {
        if k2 >= k1 {
            return Err(Error::InvalidParameters("need dim C2 < dim C1".into()));
        }
        let c1 = MatrixCode::random(field.clone(), n, m, k1, seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
        let q = field.order();
        let c2 = loop {
            let coeffs: Vec<Vec<u32>> = (0..k2)
                .map(|_| (0..k1).map(|_| rng.gen_range(0..q)).collect())
                .collect();
            if rank(&field, &coeffs) == k2 {
                let rows = coeffs.iter().map(|c| c1.combine(c)).collect();
                break MatrixCode::from_flat(field.clone(), n, m, rows)?;
            }
        };
        Self::new(c1, c2)
    }

    pub fn c1(&self) -> &MatrixCode {
        &self.c1
    }

    pub fn c2(&self) -> &MatrixCode {
        &self.c2
    }

    /// Message dimension `ℓ = dim C1 − dim C2`.
    pub fn ell(&self) -> usize {
        self.complement.len()
    }

    pub fn complement(&self) -> &[Vec<u32>] {
        &self.complement
    }

    fn field(&self) -> &Arc<Field> {
        self.c1.field()
    }

    /// `ψ(x)`.
    pub fn embed_message(&self, x: &[u32]) -> Vec<u32> {
        let nm = self.c1.n() * self.c1.m();
        crate::subspace::vec_mat(self.field(), x, &self.complement, nm)
    }
}

/// The wiretap matrix `B ∈ F_q^{μ×n}` and its row space.
#[derive(Clone, Debug)]
pub struct Observation {
    b: MatrixFq,
    rowsp: Subspace,
}

impl Observation {
    pub fn new(f: &Field, b: MatrixFq) -> Result<Self> {
        let rowsp = Subspace::span(f, b.rows(), b.ncols())?;
        Ok(Self { b, rowsp })
    }

    /// `B` whose rows are the RREF basis of `V` (a single zero row for `V = 0`).
    pub fn from_rowspace(v: &Subspace) -> Self {
        let rows = if v.is_zero() {
            vec![vec![0; v.ambient()]]
        } else {
            v.basis().to_vec()
        };
        Self {
            b: MatrixFq::new(rows, v.ambient()).expect("rows have ambient length"),
            rowsp: v.clone(),
        }
    }

    pub fn matrix(&self) -> &MatrixFq {
        &self.b
    }

    pub fn rowspace(&self) -> &Subspace {
        &self.rowsp
    }

    /// `BX` for a flattened `n × m` matrix `X`, flattened.
    fn apply(&self, f: &Field, x: &[u32], m: usize) -> Vec<u32> {
        let n = self.b.ncols();
        let mut out = Vec::with_capacity(self.b.nrows() * m);
        for row in self.b.rows() {
            for j in 0..m {
                out.push((0..n).fold(0, |acc, i| f.add(acc, f.mul(row[i], x[i * m + j]))));
            }
        }
        out
    }
}

fn check_obs(pair: &NestedPair, obs: &Observation) -> Result<()> {
    if obs.rowsp.ambient() != pair.c1.n() {
        return Err(Error::AmbientMismatch {
            expected: pair.c1.n(),
            found: obs.rowsp.ambient(),
        });
    }
    Ok(())
}

/// `I(x; BC) = dim C2^⊥(rowsp B) − dim C1^⊥(rowsp B)`, in `log q` units.
pub fn leakage_martinez(pair: &NestedPair, obs: &Observation) -> Result<i64> {
    check_obs(pair, obs)?;
    let r = &obs.rowsp;
    Ok(pair.c2_dual.shortened_dim(r)? as i64 - pair.c1_dual.shortened_dim(r)? as i64)
}

/// `m·ρ_C(V) = dim C − dim C(V^⊥)`.
fn scaled_rank(c: &MatrixCode, v: &Subspace) -> Result<i64> {
    Ok(c.dim() as i64 - c.shortened_dim(&v.perp(c.field()))? as i64)
}

/// The padded code `Ψ(C1) ≤ F_q^{(k2⊥+n)×m}` for a chosen basis `{H_i}` of `C2^⊥`.
#[derive(Clone, Debug)]
pub struct PaddedScheme {
    k: usize,
    n: usize,
    m: usize,
    h: Vec<Vec<u32>>,
    code: MatrixCode,
}

impl PaddedScheme {
    /// Uses the canonical RREF basis of `C2^⊥`.
    pub fn new(pair: &NestedPair) -> Result<Self> {
        Self::with_dual_basis(pair, pair.c2_dual.basis().to_vec())
    }

    pub fn with_dual_basis(pair: &NestedPair, h: Vec<Vec<u32>>) -> Result<Self> {
        let f = pair.field().clone();
        let (n, m) = (pair.c1.n(), pair.c1.m());
        if h.len() != pair.c2_dual.dim()
            || h.iter().any(|x| !pair.c2_dual.contains(x))
            || rank(&f, &h) != h.len()
        {
            return Err(Error::InvalidParameters("not a basis of the dual of C2".into()));
        }
        let k = h.len();
        let mut scheme = Self {
            k,
            n,
            m,
            h,
            code: MatrixCode::zero(f.clone(), k + n, m),
        };
        let rows = pair.c1.basis().iter().map(|x| scheme.pad(&f, x)).collect();
        scheme.code = MatrixCode::from_flat(f, k + n, m, rows)?;
        Ok(scheme)
    }

    fn pad(&self, f: &Field, x: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity((self.k + self.n) * self.m);
        for h in &self.h {
            let t = dot(f, h, x);
            out.extend(std::iter::repeat_n(t, self.m));
        }
        out.extend_from_slice(x);
        out
    }

    pub fn k2_perp(&self) -> usize {
        self.k
    }

    pub fn code(&self) -> &MatrixCode {
        &self.code
    }

    /// `Q0 = ⟨e_1, …, e_{k2⊥}⟩`.
    pub fn q0(&self) -> Subspace {
        Subspace::coordinate(self.k + self.n, &(0..self.k).collect::<Vec<_>>())
    }

    /// `Q = ⟨e_{k2⊥+1}, …, e_{k2⊥+n}⟩`.
    pub fn q(&self) -> Subspace {
        Subspace::coordinate(self.k + self.n, &(self.k..self.k + self.n).collect::<Vec<_>>())
    }

    /// `τ: e_i ↦ e_{k2⊥+i}`.
    pub fn tau(&self, v: &Subspace) -> Subspace {
        v.shift(self.k, self.k + self.n)
    }
}

/// `Ψ(X)`: rows `i ≤ k2⊥` are constant `tr(H_i Xᵀ)`, followed by `X`.
pub fn psi_pad(pair: &NestedPair, scheme: &PaddedScheme, x: &[u32]) -> Result<Vec<u32>> {
    if !pair.c1.contains(x) {
        return Err(Error::NotInCode);
    }
    Ok(scheme.pad(pair.field(), x))
}

/// `H(x | BC) = m·ρ_{Ψ(C1)}(Q0 | τ(rowsp B))`.
pub fn cond_entropy_padded(pair: &NestedPair, obs: &Observation) -> Result<LogQ> {
    cond_entropy_padded_with(&PaddedScheme::new(pair)?, obs)
}

pub fn cond_entropy_padded_with(scheme: &PaddedScheme, obs: &Observation) -> Result<LogQ> {
    let f = scheme.code.field().clone();
    let v = scheme.tau(&obs.rowsp);
    let joint = scheme.q0().sum(&f, &v)?;
    Ok(LogQ::from_int(
        scaled_rank(&scheme.code, &joint)? - scaled_rank(&scheme.code, &v)?,
    ))
}

/// `H(x | BC) = m·ρ_{C1}(P0 | rowsp B)` for a pair with `C2 = C1(P0^⊥)`.
pub fn cond_entropy_port(pair: &NestedPair, p0: &Subspace, obs: &Observation) -> Result<LogQ> {
    check_obs(pair, obs)?;
    let c1 = &pair.c1;
    if c1.shorten(&p0.perp(c1.field()))? != pair.c2 {
        return Err(Error::Precondition("C2 is not the shortening of C1 at P0^perp".into()));
    }
    let joint = p0.sum(c1.field(), &obs.rowsp)?;
    Ok(LogQ::from_int(scaled_rank(c1, &joint)? - scaled_rank(c1, &obs.rowsp)?))
}

/// Exact entropy (log q units) of a distribution given by positive counts;
/// requires a uniform distribution on `q^d` outcomes.
fn uniform_entropy(counts: impl Iterator<Item = u64>, q: u64) -> Result<i64> {
    let mut support = 0u64;
    let mut value = None;
    for c in counts {
        support += 1;
        match value {
            None => value = Some(c),
            Some(v) if v != c => {
                return Err(Error::Precondition("distribution is not uniform on its support".into()))
            }
            _ => {}
        }
    }
    let mut d = 0;
    let mut s = support;
    while s > 1 && s.is_multiple_of(q) {
        s /= q;
        d += 1;
    }
    if s != 1 {
        return Err(Error::Precondition("support size is not a power of q".into()));
    }
    Ok(d)
}

/// `H(x | BC)` from the exact joint distribution of `(x, BC)` with `x`
/// uniform on `F_q^ℓ` and `C` uniform on `ψ(x) + C2`.
pub fn cond_entropy_direct(pair: &NestedPair, obs: &Observation, budget: u128) -> Result<LogQ> {
    check_obs(pair, obs)?;
    let f = pair.field().clone();
    let q = f.order() as u64;
    let total = pair.c1.check_codeword_budget(budget)? as u64;
    let ell = pair.ell();
    let k2 = pair.c2.dim();
    let m = pair.c1.m();
    let mut joint: HashMap<Vec<u32>, HashMap<Vec<u32>, u64>> = HashMap::new();
    for idx in 0..total {
        let mut t = idx;
        let mut digits = || {
            let c = (t % q) as u32;
            t /= q;
            c
        };
        let x: Vec<u32> = (0..ell).map(|_| digits()).collect();
        let c: Vec<u32> = (0..k2).map(|_| digits()).collect();
        let mut word = pair.embed_message(&x);
        for (w, v) in word.iter_mut().zip(pair.c2.combine(&c)) {
            *w = f.add(*w, v);
        }
        let y = obs.apply(&f, &word, m);
        *joint.entry(y).or_default().entry(x).or_default() += 1;
    }
    let mut h = Rational64::from(0);
    for per_x in joint.values() {
        let n_y: u64 = per_x.values().sum();
        let d = uniform_entropy(per_x.values().copied(), q)?;
        h += Rational64::new(n_y as i64 * d, total as i64);
    }
    Ok(LogQ(h))
}

/// Exact entropies of the quotient variables `Z_V = X + C(V^⊥)` for `X`
/// uniform on `C`, with the three identities they satisfy.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub marginals: Vec<LogQ>,
    pub expected_marginals: Vec<LogQ>,
    pub joint: LogQ,
    pub joint_of_sum: LogQ,
    /// `((i, j), H(Z_{V_i} | Z_{V_j}))` for `i ≠ j`.
    pub conditionals: Vec<((usize, usize), LogQ)>,
    pub expected_conditionals: Vec<((usize, usize), LogQ)>,
}

impl EntropyReport {
    pub fn passed(&self) -> bool {
        self.marginals == self.expected_marginals
            && self.joint == self.joint_of_sum
            && self.conditionals == self.expected_conditionals
    }
}

/// Canonical representative of `x` modulo the RREF basis `rows`.
fn reduce_mod(f: &Field, rows: &[Vec<u32>], pivots: &[usize], x: &[u32]) -> Vec<u32> {
    let mut r = x.to_vec();
    for (row, &p) in rows.iter().zip(pivots) {
        let c = r[p];
        if c != 0 {
            for (a, &b) in r.iter_mut().zip(row) {
                *a = f.sub(*a, f.mul(c, b));
            }
        }
    }
    r
}

struct CosetMap {
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl CosetMap {
    fn new(c: &MatrixCode, v: &Subspace) -> Result<Self> {
        let mut rows = c.shorten(&v.perp(c.field()))?.basis().to_vec();
        let pivots = rref_in_place(c.field(), &mut rows);
        Ok(Self { rows, pivots })
    }

    fn key(&self, f: &Field, x: &[u32]) -> Vec<u32> {
        reduce_mod(f, &self.rows, &self.pivots, x)
    }
}

fn entropy_of<K: Ord>(keys: impl Iterator<Item = K>, q: u64) -> Result<LogQ> {
    let mut counts: BTreeMap<K, u64> = BTreeMap::new();
    for k in keys {
        *counts.entry(k).or_default() += 1;
    }
    Ok(LogQ::from_int(uniform_entropy(counts.into_values(), q)?))
}

/// Computes `H(Z_V)`, the joint entropy of all `Z_{V_i}`, `H(Z_{ΣV_i})` and
/// pairwise conditionals by enumerating `C`.
pub fn entropy_z(c: &MatrixCode, vs: &[Subspace], budget: u128) -> Result<EntropyReport> {
    let f = c.field().clone();
    let q = f.order() as u64;
    let words = c.codewords(budget)?;
    let maps = vs.iter().map(|v| CosetMap::new(c, v)).collect::<Result<Vec<_>>>()?;
    let keys: Vec<Vec<Vec<u32>>> = words
        .par_iter()
        .map(|x| maps.iter().map(|cm| cm.key(&f, x)).collect())
        .collect();
    let marginals = (0..vs.len())
        .map(|i| entropy_of(keys.iter().map(|k| &k[i]), q))
        .collect::<Result<Vec<_>>>()?;
    let expected_marginals = vs
        .iter()
        .map(|v| Ok(LogQ::from_int(scaled_rank(c, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let joint = entropy_of(keys.iter(), q)?;
    let sum = vs
        .iter()
        .try_fold(Subspace::zero(c.n()), |acc, v| acc.sum(&f, v))?;
    let sum_map = CosetMap::new(c, &sum)?;
    let joint_of_sum = entropy_of(words.iter().map(|x| sum_map.key(&f, x)), q)?;
    let mut conditionals = Vec::new();
    let mut expected_conditionals = Vec::new();
    for i in 0..vs.len() {
        for j in 0..vs.len() {
            if i == j {
                continue;
            }
            let pair_h = entropy_of(keys.iter().map(|k| (&k[i], &k[j])), q)?;
            conditionals.push(((i, j), pair_h - marginals[j]));
            let vw = vs[i].sum(&f, &vs[j])?;
            expected_conditionals.push((
                (i, j),
                LogQ::from_int(scaled_rank(c, &vw)? - scaled_rank(c, &vs[j])?),
            ));
        }
    }
    Ok(EntropyReport {
        marginals,
        expected_marginals,
        joint,
        joint_of_sum,
        conditionals,
        expected_conditionals,
    })
}

/// Plug-in estimate of `H(x | BC)` in bits from seeded samples.
#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub seed: u64,
    pub estimate_bits: f64,
    /// First-order (Miller–Madow) magnitude of the plug-in bias, in bits.
    pub bias_bound_bits: f64,
}

const MC_STREAMS: u64 = 16;

/// Joint counts of `(observation, message)` pairs.
type JointCounts = BTreeMap<(Vec<u32>, Vec<u32>), u64>;

/// Samples are split over a fixed number of ChaCha streams, so the estimate
/// depends only on `(samples, seed)`, not on the thread count.
pub fn monte_carlo_entropy(pair: &NestedPair, obs: &Observation, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    check_obs(pair, obs)?;
    if samples == 0 {
        return Err(Error::InvalidParameters("at least one sample is required".into()));
    }
    let f = pair.field().clone();
    let q = f.order();
    let ell = pair.ell();
    let k2 = pair.c2.dim();
    let m = pair.c1.m();
    let partial: Vec<JointCounts> = (0..MC_STREAMS)
        .into_par_iter()
        .map(|s| {
            let share = samples / MC_STREAMS + u64::from(s < samples % MC_STREAMS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let mut counts = BTreeMap::new();
            for _ in 0..share {
                let x: Vec<u32> = (0..ell).map(|_| rng.gen_range(0..q)).collect();
                let c: Vec<u32> = (0..k2).map(|_| rng.gen_range(0..q)).collect();
                let mut word = pair.embed_message(&x);
                for (w, v) in word.iter_mut().zip(pair.c2.combine(&c)) {
                    *w = f.add(*w, v);
                }
                *counts.entry((obs.apply(&f, &word, m), x)).or_insert(0u64) += 1;
            }
            counts
        })
        .collect();
    let mut joint: BTreeMap<(Vec<u32>, Vec<u32>), u64> = BTreeMap::new();
    for part in partial {
        for (k, v) in part {
            *joint.entry(k).or_default() += v;
        }
    }
    let mut per_y: BTreeMap<&Vec<u32>, u64> = BTreeMap::new();
    for ((y, _), c) in &joint {
        *per_y.entry(y).or_default() += c;
    }
    let n = samples as f64;
    let h_joint: f64 = joint.values().map(|&c| -(c as f64 / n) * (c as f64 / n).log2()).sum();
    let h_y: f64 = per_y.values().map(|&c| -(c as f64 / n) * (c as f64 / n).log2()).sum();
    let cells = (joint.len() + per_y.len()) as f64;
    Ok(MonteCarloEstimate {
        samples,
        seed,
        estimate_bits: h_joint - h_y,
        bias_bound_bits: (cells - 1.0).max(0.0) / (2.0 * n * std::f64::consts::LN_2),
    })
}

/// Largest `μ` such that no observation of rank `≤ μ` leaks anything.
pub fn universal_security_threshold(pair: &NestedPair, budget: u128) -> Result<usize> {
    let f = pair.field().clone();
    let n = pair.c1.n();
    for d in 1..=n {
        let layer = enumerate_subspaces(&f, &Subspace::full(n), Some(d), budget)?;
        let leaks = layer
            .par_iter()
            .map(|v| leakage_martinez(pair, &Observation::from_rowspace(v)))
            .collect::<Result<Vec<_>>>()?;
        if leaks.iter().any(|&l| l > 0) {
            return Ok(d - 1);
        }
    }
    Ok(n)
}
