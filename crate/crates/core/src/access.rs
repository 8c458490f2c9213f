//! Generalized q-polymatroid ports and q-access structures.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::polymatroid::QPolymatroid;
use crate::subspace::{
    adapted_form, enumerate_subspaces, BilinearForm, QuotientCtx, Subspace, DEFAULT_SUBSPACE_BUDGET,
};

/// A secret space `P0`, a complement `P`, and the q-polymatroid they live in.
#[derive(Clone, Debug)]
pub struct PortSpec {
    m: Arc<QPolymatroid>,
    p0: Subspace,
    p: Subspace,
}

impl PortSpec {
    pub fn new(m: Arc<QPolymatroid>, p0: Subspace, p: Subspace) -> Result<Self> {
        let n = m.ground_dim();
        for s in [&p0, &p] {
            if s.ambient() != n {
                return Err(Error::AmbientMismatch {
                    expected: n,
                    found: s.ambient(),
                });
            }
        }
        if !p0.is_complement_of(m.field(), &p) {
            return Err(Error::Precondition("P0 and P must be complementary".into()));
        }
        if m.rank_num(&p0)? == 0 {
            return Err(Error::Precondition("rank of P0 is zero".into()));
        }
        Ok(Self { m, p0, p })
    }

    pub fn polymatroid(&self) -> &Arc<QPolymatroid> {
        &self.m
    }

    pub fn p0(&self) -> &Subspace {
        &self.p0
    }

    pub fn p(&self) -> &Subspace {
        &self.p
    }

    fn field(&self) -> &Arc<Field> {
        self.m.field()
    }
}

/// A pair `(Γ, 𝒜)` of a monotone and an anti-monotone family of subspaces
/// of `F_q^dim`, stored extensionally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessStructure {
    field: Arc<Field>,
    dim: usize,
    gamma: BTreeSet<Subspace>,
    privacy: BTreeSet<Subspace>,
    frame: Option<Subspace>,
}

/// Export view of an access structure.
#[derive(Clone, Debug, Serialize)]
pub struct StructureSummary {
    pub ambient_dim: usize,
    pub gamma_min: Vec<Subspace>,
    pub privacy_max: Vec<Subspace>,
    pub perfect: bool,
    pub degenerate: bool,
    pub connected: bool,
    pub min_gap: Option<usize>,
    pub threshold: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Subspace>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub privacy: Option<Vec<Subspace>>,
}

fn lattice(f: &Field, d: usize) -> Result<Vec<Subspace>> {
    enumerate_subspaces(f, &Subspace::full(d), None, DEFAULT_SUBSPACE_BUDGET)
}

impl AccessStructure {
    /// Validates monotonicity of `gamma`, anti-monotonicity of `privacy` and
    /// disjointness.
    pub fn new(
        field: Arc<Field>,
        dim: usize,
        gamma: BTreeSet<Subspace>,
        privacy: BTreeSet<Subspace>,
    ) -> Result<Self> {
        let s = Self {
            field,
            dim,
            gamma,
            privacy,
            frame: None,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let f = &self.field;
        if let Some(v) = self.gamma.iter().chain(&self.privacy).find(|v| v.ambient() != self.dim) {
            return Err(Error::AmbientMismatch {
                expected: self.dim,
                found: v.ambient(),
            });
        }
        if let Some(v) = self.gamma.intersection(&self.privacy).next() {
            return Err(Error::Precondition(format!("{v:?} is both reconstructing and private")));
        }
        let all = lattice(f, self.dim)?;
        for w in &all {
            let up = self.gamma.iter().any(|v| w.contains(f, v));
            if up && !self.gamma.contains(w) {
                return Err(Error::Precondition(format!("reconstructing family is not monotone at {w:?}")));
            }
            let down = self.privacy.iter().any(|v| v.contains(f, w));
            if down && !self.privacy.contains(w) {
                return Err(Error::Precondition(format!("privacy family is not anti-monotone at {w:?}")));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn gamma(&self) -> &BTreeSet<Subspace> {
        &self.gamma
    }

    pub fn privacy(&self) -> &BTreeSet<Subspace> {
        &self.privacy
    }

    /// For ports: `P` in the coordinates of the underlying ground space.
    pub fn frame(&self) -> Option<&Subspace> {
        self.frame.as_ref()
    }

    /// Maps a family back into the port's ground coordinates (identity
    /// without provenance).
    pub fn in_ground(&self, family: &BTreeSet<Subspace>) -> Result<BTreeSet<Subspace>> {
        match &self.frame {
            None => Ok(family.clone()),
            Some(p) => family.iter().map(|v| v.embed_in(&self.field, p)).collect(),
        }
    }

    fn minimal(&self, family: &BTreeSet<Subspace>) -> BTreeSet<Subspace> {
        let f = &self.field;
        family
            .iter()
            .filter(|v| {
                !family
                    .iter()
                    .any(|w| w.dim() < v.dim() && v.contains(f, w))
            })
            .cloned()
            .collect()
    }

    pub fn gamma_min(&self) -> BTreeSet<Subspace> {
        self.minimal(&self.gamma)
    }

    /// Inclusion-maximal privacy spaces.
    pub fn privacy_max(&self) -> BTreeSet<Subspace> {
        let f = &self.field;
        self.privacy
            .iter()
            .filter(|v| {
                !self
                    .privacy
                    .iter()
                    .any(|w| w.dim() > v.dim() && w.contains(f, v))
            })
            .cloned()
            .collect()
    }

    fn lattice_size(&self) -> Result<usize> {
        Ok(lattice(&self.field, self.dim)?.len())
    }

    /// Every subspace is reconstructing or private.
    pub fn is_perfect(&self) -> Result<bool> {
        Ok(self.gamma.len() + self.privacy.len() == self.lattice_size()?)
    }

    pub fn is_degenerate(&self) -> bool {
        self.gamma.is_empty() || self.privacy.is_empty()
    }

    /// Every line of the ambient space lies in some minimal reconstructing space.
    pub fn is_connected(&self) -> Result<bool> {
        let f = &self.field;
        let gm = self.gamma_min();
        let lines = enumerate_subspaces(f, &Subspace::full(self.dim), Some(1), DEFAULT_SUBSPACE_BUDGET)?;
        Ok(lines.iter().all(|p| gm.iter().any(|v| v.contains(f, p))))
    }

    /// `min dim(V/W)` over `V ∈ Γ`, `W ∈ 𝒜`, `W < V`.
    pub fn min_gap(&self) -> Option<usize> {
        let f = &self.field;
        self.gamma
            .iter()
            .flat_map(|v| {
                self.privacy
                    .iter()
                    .filter(move |w| w.dim() < v.dim() && v.contains(f, w))
                    .map(move |w| v.dim() - w.dim())
            })
            .min()
    }

    /// Whether `Γ = {V : dim V ≥ k}`.
    pub fn is_k_threshold(&self, k: usize) -> Result<bool> {
        let all = lattice(&self.field, self.dim)?;
        Ok(all
            .iter()
            .all(|v| self.gamma.contains(v) == (v.dim() >= k)))
    }

    /// The `k` with `Γ = {V : dim V ≥ k}`; absent when `Γ` is empty (any
    /// `k > dim` would do) or no such `k` exists.
    pub fn threshold(&self) -> Result<Option<usize>> {
        let Some(k) = self.gamma.iter().map(Subspace::dim).min() else {
            return Ok(None);
        };
        Ok(self.is_k_threshold(k)?.then_some(k))
    }

    /// `S* = (𝒜*, Γ*)` where `H* = {V : V^⊥ ∈ H}`.
    pub fn dual(&self, form: &BilinearForm) -> Result<Self> {
        if form.dim() != self.dim {
            return Err(Error::AmbientMismatch {
                expected: self.dim,
                found: form.dim(),
            });
        }
        let f = &self.field;
        let perp = |h: &BTreeSet<Subspace>| -> Result<BTreeSet<Subspace>> {
            h.iter().map(|v| v.orthocomplement(f, form)).collect()
        };
        Ok(Self {
            field: self.field.clone(),
            dim: self.dim,
            gamma: perp(&self.privacy)?,
            privacy: perp(&self.gamma)?,
            frame: None,
        })
    }

    fn rebuild<F>(&self, dim: usize, pull: F) -> Result<Self>
    where
        F: Fn(&Subspace) -> Result<Subspace> + Sync,
    {
        let all = lattice(&self.field, dim)?;
        let tagged = all
            .into_par_iter()
            .map(|u| {
                let v = pull(&u)?;
                Ok((self.gamma.contains(&v), self.privacy.contains(&v), u))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut gamma = BTreeSet::new();
        let mut privacy = BTreeSet::new();
        for (g, a, u) in tagged {
            if g {
                gamma.insert(u.clone());
            }
            if a {
                privacy.insert(u);
            }
        }
        Ok(Self {
            field: self.field.clone(),
            dim,
            gamma,
            privacy,
            frame: None,
        })
    }

    /// `S|_Z` in the coordinates of `Z`'s RREF basis.
    pub fn restrict(&self, z: &Subspace) -> Result<Self> {
        let f = self.field.clone();
        self.rebuild(z.dim(), |u| u.embed_in(&f, z))
    }

    /// `S/Z` in quotient coordinates.
    pub fn contract(&self, z: &Subspace) -> Result<Self> {
        if z.ambient() != self.dim {
            return Err(Error::AmbientMismatch {
                expected: self.dim,
                found: z.ambient(),
            });
        }
        let ctx = QuotientCtx::new(z);
        let f = self.field.clone();
        self.rebuild(ctx.dim(), |u| ctx.lift(&f, u))
    }

    pub fn summary(&self, extensional: bool) -> Result<StructureSummary> {
        Ok(StructureSummary {
            ambient_dim: self.dim,
            gamma_min: self.gamma_min().into_iter().collect(),
            privacy_max: self.privacy_max().into_iter().collect(),
            perfect: self.is_perfect()?,
            degenerate: self.is_degenerate(),
            connected: self.is_connected()?,
            min_gap: self.min_gap(),
            threshold: self.threshold()?,
            gamma: extensional.then(|| self.gamma.iter().cloned().collect()),
            privacy: extensional.then(|| self.privacy.iter().cloned().collect()),
        })
    }
}

/// `Γ = {V ≤ P : ρ(P0|V) = 0}`, `𝒜 = {V ≤ P : ρ(P0|V) = ρ(P0)}`, in the
/// coordinates of `P`'s RREF basis.
pub fn port(spec: &PortSpec) -> Result<AccessStructure> {
    let f = spec.field().clone();
    let m = &spec.m;
    let r0 = m.rank_num(&spec.p0)?;
    let all = lattice(&f, spec.p.dim())?;
    let tagged = all
        .into_par_iter()
        .map(|u| {
            let v = u.embed_in(&f, &spec.p)?;
            Ok((m.cond_rank_num(&spec.p0, &v)?, u))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut gamma = BTreeSet::new();
    let mut privacy = BTreeSet::new();
    for (c, u) in tagged {
        if c == 0 {
            gamma.insert(u);
        } else if c == r0 {
            privacy.insert(u);
        }
    }
    let s = AccessStructure {
        field: f,
        dim: spec.p.dim(),
        gamma,
        privacy,
        frame: Some(spec.p.clone()),
    };
    s.validate()?;
    Ok(s)
}

/// `σ = max_{p ∈ P(P)} ρ(p) / ρ(P0)`.
pub fn information_ratio(spec: &PortSpec) -> Result<Rational64> {
    let f = spec.field();
    let r0 = spec.m.rank_num(&spec.p0)?;
    let lines = enumerate_subspaces(f, &spec.p, Some(1), DEFAULT_SUBSPACE_BUDGET)?;
    let mut best = Rational64::from(0);
    for p in &lines {
        best = best.max(Rational64::new(spec.m.rank_num(p)?, r0));
    }
    Ok(best)
}

/// `ρ(p) = ρ(P0)` for every line `p ≤ P`.
pub fn is_ideal(spec: &PortSpec) -> Result<bool> {
    let f = spec.field();
    let r0 = spec.m.rank_num(&spec.p0)?;
    let lines = enumerate_subspaces(f, &spec.p, Some(1), DEFAULT_SUBSPACE_BUDGET)?;
    for p in &lines {
        if spec.m.rank_num(p)? != r0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of an identity check: number of cases examined and
/// machine-readable counterexamples.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub cases: usize,
    pub failures: Vec<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            ..Self::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, v: Value) {
        self.failures.push(v);
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

/// Verifies that `map` is an inclusion-preserving and -reflecting bijection
/// from `L(left)` onto `L(right)` carrying both parts onto each other.
fn check_identification<F>(
    report: &mut CheckReport,
    label: &str,
    left: &AccessStructure,
    right: &AccessStructure,
    map: F,
) -> Result<()>
where
    F: Fn(&Subspace) -> Result<Subspace> + Sync,
{
    let f = &left.field;
    let dom = lattice(f, left.dim)?;
    let images = dom.par_iter().map(&map).collect::<Result<Vec<_>>>()?;
    report.cases += dom.len();
    if images.iter().any(|s| s.ambient() != right.dim) {
        report.fail(json!({"identity": label, "reason": "image in wrong ambient"}));
        return Ok(());
    }
    let distinct: BTreeSet<&Subspace> = images.iter().collect();
    if left.dim != right.dim || distinct.len() != dom.len() {
        report.fail(json!({"identity": label, "reason": "map is not a bijection"}));
        return Ok(());
    }
    for (i, v) in dom.iter().enumerate() {
        for (j, w) in dom.iter().enumerate() {
            if w.contains(f, v) != images[j].contains(f, &images[i]) {
                report.fail(json!({"identity": label, "reason": "not monotone", "v": v, "w": w}));
            }
        }
    }
    let carried = |h: &BTreeSet<Subspace>| -> BTreeSet<Subspace> {
        dom.iter()
            .zip(&images)
            .filter(|(v, _)| h.contains(v))
            .map(|(_, s)| s.clone())
            .collect()
    };
    if carried(&left.gamma) != right.gamma {
        report.fail(json!({"identity": label, "reason": "reconstructing parts differ",
            "left": left.gamma, "right": right.gamma}));
    }
    if carried(&left.privacy) != right.privacy {
        report.fail(json!({"identity": label, "reason": "privacy parts differ",
            "left": left.privacy, "right": right.privacy}));
    }
    Ok(())
}

/// `(S/Z)* ≃ S*|_{Z⊥}` via `σ(V) = π^{-1}(V^{⊥ E/Z})^⊥`, and
/// `(S|_{Z⊥})* ≃ S*/Z` via `W ↦ π(W)`, using a form for which `Z ⊕ Z^⊥ = E`.
pub fn check_minor_duality(s: &AccessStructure, z: &Subspace) -> Result<CheckReport> {
    let f = s.field.clone();
    let n = s.dim;
    let standard = BilinearForm::standard(n);
    let form = if standard.splits(&f, z)? {
        standard
    } else {
        adapted_form(&f, z)
    };
    let zp = z.orthocomplement(&f, &form)?;
    let ctx = QuotientCtx::new(z);
    let qform = BilinearForm::standard(ctx.dim());
    let s_star = s.dual(&form)?;
    let mut report = CheckReport::new("minor-duality");

    let left = s.contract(z)?.dual(&qform)?;
    let right = s_star.restrict(&zp)?;
    check_identification(&mut report, "(S/Z)* ~ S*|Z^perp", &left, &right, |v| {
        let lifted = ctx.lift(&f, &v.orthocomplement(&f, &qform)?)?;
        lifted.orthocomplement(&f, &form)?.coords_in(&f, &zp)
    })?;

    let zp_form = form.restrict_to(&f, &zp)?;
    let left = s.restrict(&zp)?.dual(&zp_form)?;
    let right = s_star.contract(z)?;
    check_identification(&mut report, "(S|Z^perp)* ~ S*/Z", &left, &right, |w| {
        ctx.project(&f, &w.embed_in(&f, &zp)?)
    })?;
    report.details = json!({"form_is_standard": form.is_standard(), "z": z});
    Ok(report)
}

fn ground_sets(s: &AccessStructure, outer: &[&Subspace]) -> Result<(BTreeSet<Subspace>, BTreeSet<Subspace>)> {
    let f = &s.field;
    let lift = |h: &BTreeSet<Subspace>| -> Result<BTreeSet<Subspace>> {
        h.iter()
            .map(|v| outer.iter().try_fold(v.clone(), |acc, fr| acc.embed_in(f, fr)))
            .collect()
    };
    Ok((lift(&s.gamma)?, lift(&s.privacy)?))
}

/// `S_{P0,P}(M)|_Z = S_{P0,Z}(M|_{P0+Z})`, compared in ground coordinates.
pub fn check_port_restriction(spec: &PortSpec, z: &Subspace) -> Result<CheckReport> {
    let f = spec.field().clone();
    let mut report = CheckReport::new("port-restriction");
    let s = port(spec)?;
    let zc = z.coords_in(&f, &spec.p)?;
    let left = ground_sets(&s.restrict(&zc)?, &[&zc, &spec.p])?;

    let y = spec.p0.sum(&f, z)?;
    let my = Arc::new(spec.m.restrict(&y)?);
    let inner = PortSpec::new(my, spec.p0.coords_in(&f, &y)?, z.coords_in(&f, &y)?)?;
    let right_s = port(&inner)?;
    let right = ground_sets(&right_s, &[&inner.p, &y])?;
    report.cases = left.0.len() + left.1.len();
    if left != right {
        report.fail(json!({"identity": "restriction", "z": z,
            "left": {"gamma": left.0, "privacy": left.1},
            "right": {"gamma": right.0, "privacy": right.1}}));
    }
    Ok(report)
}

/// `S_{P0,P}(M)/Z` against `S_{π(P0),π(P)}(M/Z)` for `Z ∉ Γ`, compared in
/// `E/Z` quotient coordinates.
///
/// The reconstructing parts always coincide. The privacy part of the
/// contracted port is `{W : ρ(P0 | π⁻¹(W)) = ρ(P0 | Z)}`, which equals `𝒜/Z`
/// only when `Z ∈ 𝒜`; otherwise `𝒜/Z` is empty while the contracted port
/// always contains the zero space. The check therefore gates on the
/// reconstructing parts and on that privacy family, and reports whether the
/// literal privacy identity held under `details.literal_privacy`.
pub fn check_port_contraction(spec: &PortSpec, z: &Subspace) -> Result<CheckReport> {
    let f = spec.field().clone();
    let s = port(spec)?;
    let zc = z.coords_in(&f, &spec.p)?;
    if s.gamma.contains(&zc) {
        return Err(Error::Precondition("contraction requires Z outside the reconstructing family".into()));
    }
    let mut report = CheckReport::new("port-contraction");
    let ctx_e = QuotientCtx::new(z);
    let ctx_p = QuotientCtx::new(&zc);
    let sc = s.contract(&zc)?;
    let to_e_quotient = |v: &Subspace| -> Result<Subspace> {
        ctx_e.project(&f, &ctx_p.lift(&f, v)?.embed_in(&f, &spec.p)?)
    };
    let map_all = |h: &BTreeSet<Subspace>| h.iter().map(to_e_quotient).collect::<Result<BTreeSet<_>>>();
    let left = (map_all(&sc.gamma)?, map_all(&sc.privacy)?);

    let mz = Arc::new(spec.m.contract(z)?);
    let inner = PortSpec::new(mz, ctx_e.project(&f, &spec.p0)?, ctx_e.project(&f, &spec.p)?)?;
    let right = ground_sets(&port(&inner)?, &[&inner.p])?;

    let residual = spec.m.cond_rank_num(&spec.p0, z)?;
    let mut expected_privacy = BTreeSet::new();
    for w in lattice(&f, ctx_p.dim())? {
        let v = ctx_p.lift(&f, &w)?.embed_in(&f, &spec.p)?;
        if spec.m.cond_rank_num(&spec.p0, &v)? == residual {
            expected_privacy.insert(to_e_quotient(&w)?);
        }
    }

    report.cases = left.0.len() + right.1.len();
    if left.0 != right.0 || expected_privacy != right.1 {
        report.fail(json!({"identity": "contraction", "z": z,
            "left": {"gamma": left.0, "privacy": expected_privacy},
            "right": {"gamma": right.0, "privacy": right.1}}));
    }
    let literal = left.1 == right.1;
    report.details = if literal {
        json!({"literal_privacy": true})
    } else {
        json!({"literal_privacy": false, "z_private": s.privacy.contains(&zc),
            "left_privacy": left.1, "right_privacy": right.1})
    };
    Ok(report)
}

/// Restriction identity always; contraction identity when `Z ∉ Γ`.
pub fn check_port_minor_identities(spec: &PortSpec, z: &Subspace) -> Result<CheckReport> {
    let f = spec.field();
    let mut report = check_port_restriction(spec, z)?;
    report.check = "port-minors".into();
    let in_gamma = port(spec)?.gamma.contains(&z.coords_in(f, &spec.p)?);
    let mut contraction = Value::Null;
    if !in_gamma {
        let c = check_port_contraction(spec, z)?;
        contraction = c.details.clone();
        report.absorb(c);
    }
    report.details = json!({"z": z, "contraction_checked": !in_gamma, "contraction": contraction});
    Ok(report)
}

/// `S_{P0,P}(M)* ≃ S_{P⊥,P0⊥}(M*)` via `V ↦ τ(V^{⊥P})`, `τ(V) = V^⊥ ∩ P0^⊥`,
/// plus `ρ*(P^⊥ | τ(V)) = dim P0 − ρ(P0 | V)` for every `V ≤ P`.
pub fn check_dual_port(spec: &PortSpec, form: &BilinearForm) -> Result<CheckReport> {
    let f = spec.field().clone();
    let m = &spec.m;
    let s = port(spec)?;
    if s.is_degenerate() {
        return Err(Error::Precondition("port is degenerate".into()));
    }
    let d0 = spec.p0.dim() as i64;
    if m.rank_num(&spec.p0)? != d0 * m.denominator() {
        return Err(Error::Precondition("rank of P0 differs from its dimension".into()));
    }
    let m_star = Arc::new(m.dual(form)?);
    let p_perp = spec.p.orthocomplement(&f, form)?;
    let p0_perp = spec.p0.orthocomplement(&f, form)?;
    let other = port(&PortSpec::new(m_star.clone(), p_perp.clone(), p0_perp.clone())?)?;
    let pform = BilinearForm::standard(spec.p.dim());
    let s_dual = s.dual(&pform)?;
    let tau = |v: &Subspace| -> Result<Subspace> { v.orthocomplement(&f, form)?.intersect(&f, &p0_perp) };

    let mut report = CheckReport::new("dual-port");
    check_identification(&mut report, "S* ~ S(M*)", &s_dual, &other, |v| {
        let vp = v.orthocomplement(&f, &pform)?.embed_in(&f, &spec.p)?;
        tau(&vp)?.coords_in(&f, &p0_perp)
    })?;
    for u in lattice(&f, spec.p.dim())? {
        let v = u.embed_in(&f, &spec.p)?;
        let lhs = m_star.cond_rank(&p_perp, &tau(&v)?)?;
        let rhs = Rational64::from(d0) - m.cond_rank(&spec.p0, &v)?;
        report.cases += 1;
        if lhs != rhs {
            report.fail(json!({"identity": "dual conditional rank", "v": v,
                "lhs": lhs.to_string(), "rhs": rhs.to_string()}));
        }
    }
    Ok(report)
}

/// Comparison of `Γ_min` of a q-matroid port against the basis/independence
/// description and against circuits through `P0`. All spaces in ground
/// coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterizationReport {
    pub perfect: bool,
    pub gamma_min: Vec<Subspace>,
    pub characterization: Vec<Subspace>,
    /// `V ≤ P` with `V + P0` a circuit.
    pub circuit_spaces: Vec<Subspace>,
    /// Minimal reconstructing spaces `V` for which `V + P0` is not a circuit.
    pub non_circuit_minimal: Vec<Subspace>,
}

impl CharacterizationReport {
    pub fn passed(&self) -> bool {
        let gm: BTreeSet<&Subspace> = self.gamma_min.iter().collect();
        self.perfect
            && self.gamma_min == self.characterization
            && self.circuit_spaces.iter().all(|v| gm.contains(v))
    }

    pub fn to_check(&self) -> CheckReport {
        let mut r = CheckReport::new("qmatroid-port");
        r.cases = self.gamma_min.len();
        if !self.passed() {
            r.fail(serde_json::to_value(self).expect("serializable"));
        }
        r.details = json!({"non_circuit_minimal": self.non_circuit_minimal});
        r
    }
}

/// For a q-matroid port with `dim P0 = 1`: `Γ_min` equals the set of `V ≤ P`
/// that are bases of `M|_{V+P0}` with `W + P0` independent for all `W < V`.
pub fn check_qmatroid_port_characterization(spec: &PortSpec) -> Result<CharacterizationReport> {
    let f = spec.field().clone();
    let m = &spec.m;
    if !m.is_q_matroid() {
        return Err(Error::NotQMatroid);
    }
    if spec.p0.dim() != 1 {
        return Err(Error::Precondition("secret space must be one-dimensional".into()));
    }
    let s = port(spec)?;
    let gamma_min: Vec<Subspace> = s.in_ground(&s.gamma_min())?.into_iter().collect();
    let circuits: BTreeSet<Subspace> = m.circuits()?.into_iter().collect();
    let mut characterization = Vec::new();
    let mut circuit_spaces = Vec::new();
    for v in enumerate_subspaces(&f, &spec.p, None, DEFAULT_SUBSPACE_BUDGET)? {
        let y = v.sum(&f, &spec.p0)?;
        if circuits.contains(&y) {
            circuit_spaces.push(v.clone());
        }
        let is_basis = m.restrict(&y)?.is_basis(&v.coords_in(&f, &y)?)?;
        if !is_basis {
            continue;
        }
        let mut all_indep = true;
        for w in enumerate_subspaces(&f, &v, None, DEFAULT_SUBSPACE_BUDGET)? {
            if w.dim() < v.dim() && !m.is_independent(&w.sum(&f, &spec.p0)?)? {
                all_indep = false;
                break;
            }
        }
        if all_indep {
            characterization.push(v);
        }
    }
    characterization.sort();
    circuit_spaces.sort();
    let non_circuit_minimal = gamma_min
        .iter()
        .filter(|v| !circuit_spaces.contains(v))
        .cloned()
        .collect();
    Ok(CharacterizationReport {
        perfect: s.is_perfect()?,
        gamma_min,
        characterization,
        circuit_spaces,
        non_circuit_minimal,
    })
}

/// `σ(S) · g(S) ≥ 1`.
pub fn check_gap_bound(spec: &PortSpec) -> Result<CheckReport> {
    let s = port(spec)?;
    let g = s
        .min_gap()
        .ok_or_else(|| Error::Precondition("no comparable reconstructing/privacy pair".into()))?;
    let sigma = information_ratio(spec)?;
    let mut report = CheckReport::new("gap-bound");
    report.cases = 1;
    let product = sigma * Rational64::from(g as i64);
    if product < Rational64::from(1) {
        report.fail(json!({"sigma": sigma.to_string(), "gap": g}));
    }
    report.details = json!({"sigma": sigma.to_string(), "gap": g});
    Ok(report)
}

/// Hypotheses and conclusion of the q-analogue of Brickell–Davenport.
#[derive(Clone, Debug, Serialize)]
pub struct BrickellDavenportReport {
    pub ideal: bool,
    pub perfect: bool,
    pub connected: bool,
    pub rank_p0_is_one: bool,
    pub dim_p0_is_one: bool,
    pub restriction_integral: bool,
}

impl BrickellDavenportReport {
    pub fn hypotheses_met(&self) -> bool {
        self.ideal && self.perfect && self.connected && self.rank_p0_is_one && self.dim_p0_is_one
    }

    pub fn passed(&self) -> bool {
        !self.hypotheses_met() || self.restriction_integral
    }
}

/// Checks the hypotheses; the integrality of `M|_P` is only asserted when
/// they hold.
pub fn check_brickell_davenport(spec: &PortSpec) -> Result<BrickellDavenportReport> {
    let s = port(spec)?;
    let m = &spec.m;
    Ok(BrickellDavenportReport {
        ideal: is_ideal(spec)?,
        perfect: s.is_perfect()?,
        connected: s.is_connected()?,
        rank_p0_is_one: m.rank_num(&spec.p0)? == m.denominator(),
        dim_p0_is_one: spec.p0.dim() == 1,
        restriction_integral: m.restrict(&spec.p)?.is_q_matroid(),
    })
}

/// Port of `U_{n,k}` at `(P0, P)`: `k`-threshold, and degenerate when `dim P < k`.
pub fn check_uniform_threshold(field: Arc<Field>, k: usize, p0: &Subspace, p: &Subspace) -> Result<CheckReport> {
    let n = p0.ambient();
    let u = Arc::new(QPolymatroid::uniform(field, n, k)?);
    let s = port(&PortSpec::new(u, p0.clone(), p.clone())?)?;
    let mut report = CheckReport::new("uniform-threshold");
    report.cases = 1;
    if !s.is_k_threshold(k)? {
        report.fail(json!({"k": k, "p0": p0, "p": p, "reason": "not k-threshold"}));
    }
    if p.dim() < k && !s.is_degenerate() {
        report.fail(json!({"k": k, "p0": p0, "p": p, "reason": "expected degenerate"}));
    }
    if p.dim() >= k && s.threshold()? != Some(k) {
        report.fail(json!({"k": k, "p0": p0, "p": p, "reason": "threshold detection"}));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::MatrixCode;

    fn f2() -> Arc<Field> {
        Field::shared(2, 1).unwrap()
    }

    fn sp(f: &Field, rows: &[&[u32]]) -> Subspace {
        let n = rows[0].len();
        Subspace::span(f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), n).unwrap()
    }

    fn binary_4x2() -> Arc<QPolymatroid> {
        let c = MatrixCode::new(
            f2(),
            4,
            2,
            &[
                vec![vec![1, 0], vec![0, 0], vec![1, 1], vec![0, 1]],
                vec![vec![0, 1], vec![0, 0], vec![1, 0], vec![1, 1]],
                vec![vec![0, 0], vec![1, 0], vec![1, 0], vec![1, 0]],
                vec![vec![0, 0], vec![0, 1], vec![0, 1], vec![0, 1]],
            ],
        )
        .unwrap();
        Arc::new(QPolymatroid::from_code(&c).unwrap())
    }

    fn spec_binary() -> PortSpec {
        PortSpec::new(
            binary_4x2(),
            Subspace::coordinate(4, &[0]),
            Subspace::coordinate(4, &[1, 2, 3]),
        )
        .unwrap()
    }

    #[test]
    fn binary_4x2_port() {
        let f = f2();
        let spec = spec_binary();
        let s = port(&spec).unwrap();
        let gm = s.in_ground(&s.gamma_min()).unwrap();
        let expected: BTreeSet<Subspace> = [
            sp(&f, &[&[0, 1, 0, 1]]),
            sp(&f, &[&[0, 1, 1, 0]]),
            sp(&f, &[&[0, 0, 1, 1]]),
        ]
        .into_iter()
        .collect();
        assert_eq!(gm, expected);
        assert!(s.is_perfect().unwrap());
        // four lines of P (e2, e3, e4, e2+e3+e4) lie in no minimal reconstructing line
        assert!(!s.is_connected().unwrap());
        assert_eq!(s.min_gap(), Some(1));
        assert_eq!(information_ratio(&spec).unwrap(), Rational64::from(1));
        assert!(is_ideal(&spec).unwrap());
        let form = BilinearForm::standard(3);
        assert_eq!(s.dual(&form).unwrap().dual(&form).unwrap().gamma, s.gamma);
        assert_eq!(s.restrict(&Subspace::full(3)).unwrap().gamma, s.gamma);
    }

    #[test]
    fn free_and_zero_rank_ports() {
        let f = f2();
        let free = Arc::new(QPolymatroid::from_code(&MatrixCode::full(f.clone(), 3, 2)).unwrap());
        let spec = PortSpec::new(free, Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[1, 2])).unwrap();
        let s = port(&spec).unwrap();
        assert!(s.gamma.is_empty());
        assert_eq!(s.privacy.len(), 5);
        assert!(s.is_degenerate());
        assert_eq!(s.min_gap(), None);
        assert!(check_gap_bound(&spec).is_err());
        let zero = Arc::new(QPolymatroid::from_code(&MatrixCode::zero(f, 3, 2)).unwrap());
        assert!(PortSpec::new(zero, Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[1, 2])).is_err());
    }

    #[test]
    fn invalid_structures_rejected() {
        let f = f2();
        let g: BTreeSet<Subspace> = [Subspace::coordinate(2, &[0])].into_iter().collect();
        assert!(AccessStructure::new(f.clone(), 2, g.clone(), BTreeSet::new()).is_err());
        let mut g2 = g.clone();
        g2.insert(Subspace::full(2));
        assert!(AccessStructure::new(f.clone(), 2, g2.clone(), BTreeSet::new()).is_ok());
        assert!(AccessStructure::new(f, 2, g2.clone(), g2).is_err());
    }

    #[test]
    fn uniform_thresholds() {
        let f = f2();
        let p0 = Subspace::coordinate(5, &[0]);
        let p = Subspace::coordinate(5, &[1, 2, 3, 4]);
        let u = Arc::new(QPolymatroid::uniform(f.clone(), 5, 2).unwrap());
        let s = port(&PortSpec::new(u, p0.clone(), p.clone()).unwrap()).unwrap();
        assert_eq!(s.threshold().unwrap(), Some(2));
        for k in 1..=3 {
            assert!(check_uniform_threshold(f.clone(), k, &Subspace::coordinate(3, &[0]), &Subspace::coordinate(3, &[1, 2]))
                .unwrap()
                .passed());
        }
        let lines = port(
            &PortSpec::new(
                Arc::new(QPolymatroid::uniform(f.clone(), 3, 1).unwrap()),
                Subspace::coordinate(3, &[0]),
                Subspace::coordinate(3, &[1, 2]),
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(lines.gamma_min().len(), 3);
        assert!(lines.gamma_min().iter().all(|v| v.dim() == 1));
    }

    #[test]
    fn structural_checks_on_binary_4x2() {
        let f = f2();
        let spec = spec_binary();
        let s = port(&spec).unwrap();
        for z in enumerate_subspaces(&f, &Subspace::full(3), None, u128::MAX).unwrap() {
            assert!(check_minor_duality(&s, &z).unwrap().passed(), "{z:?}");
        }
        let e2 = Subspace::coordinate(4, &[1]);
        let r = check_port_minor_identities(&spec, &e2).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["contraction_checked"], json!(true));
        assert!(check_port_contraction(&spec, &sp(&f, &[&[0, 1, 1, 0]])).is_err());
        assert!(check_dual_port(&spec, &BilinearForm::standard(4)).unwrap().passed());
        assert!(check_gap_bound(&spec).unwrap().passed());
        let bd = check_brickell_davenport(&spec).unwrap();
        assert!(bd.ideal && bd.perfect && !bd.connected && !bd.hypotheses_met());
        assert!(bd.restriction_integral && bd.passed());
        let u = Arc::new(QPolymatroid::uniform(f.clone(), 3, 2).unwrap());
        let uspec = PortSpec::new(u, Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[1, 2])).unwrap();
        let bd = check_brickell_davenport(&uspec).unwrap();
        assert!(bd.hypotheses_met() && bd.restriction_integral);
    }

    #[test]
    fn characterization_with_non_circuit_witness() {
        let f = f2();
        let r = check_qmatroid_port_characterization(&spec_binary()).unwrap();
        assert!(r.passed());
        assert_eq!(r.non_circuit_minimal, vec![sp(&f, &[&[0, 0, 1, 1]])]);
    }

    #[test]
    fn contraction_by_reconstructing_line() {
        let f = f2();
        let s = port(&spec_binary()).unwrap();
        let z = sp(&f, &[&[1, 1, 0]]);
        let c = s.contract(&z).unwrap();
        assert_eq!(c.gamma.len(), 5);
        assert!(c.privacy.is_empty());
    }

    #[test]
    fn contraction_privacy_needs_private_z() {
        let f = f2();
        let c = MatrixCode::random(f.clone(), 3, 2, 3, 0).unwrap();
        let m = Arc::new(QPolymatroid::from_code(&c).unwrap());
        let p0 = sp(&f, &[&[1, 0, 0]]);
        let p = sp(&f, &[&[0, 1, 0], &[0, 0, 1]]);
        let spec = PortSpec::new(m, p0, p.clone()).unwrap();
        let s = port(&spec).unwrap();
        let mut literal_failures = 0;
        for z in lattice(&f, 3).unwrap().into_iter().filter(|z| p.contains(&f, z)) {
            let zc = z.coords_in(&f, &p).unwrap();
            if s.gamma().contains(&zc) {
                continue;
            }
            let r = check_port_contraction(&spec, &z).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            let literal = r.details["literal_privacy"].as_bool().unwrap();
            assert_eq!(literal, s.privacy().contains(&zc));
            literal_failures += usize::from(!literal);
        }
        assert!(literal_failures > 0);
    }
}
