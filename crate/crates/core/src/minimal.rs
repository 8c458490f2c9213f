//! Minimal codewords of vector rank-metric codes and the correspondence
//! between minimal dual codewords and minimal reconstructing spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::access::{port, PortSpec};
use crate::code::VectorCode;
use crate::error::{Error, Result};
use crate::polymatroid::QPolymatroid;
use crate::subspace::Subspace;

fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Whether `w = αv` for some `α ∈ F_{q^m}`.
fn proportional(code: &VectorCode, v: &[u32], w: &[u32]) -> bool {
    let big = code.ext().big();
    let Some(i) = v.iter().position(|&x| x != 0) else {
        return is_zero(w);
    };
    let alpha = big.mul(w[i], big.inv(v[i]));
    v.iter().zip(w).all(|(&a, &b)| big.mul(alpha, a) == b)
}

/// Smallest word (integer-encoding lexicographic order) among the non-zero
/// multiples of `v`.
fn class_representative(code: &VectorCode, v: &[u32]) -> Vec<u32> {
    let big = code.ext().big();
    (1..big.order())
        .map(|a| v.iter().map(|&x| big.mul(a, x)).collect::<Vec<u32>>())
        .min()
        .expect("field has a non-zero element")
}

/// `v` is minimal when every codeword whose support lies in `supp(v)` is a
/// multiple of `v`.
pub fn is_minimal_codeword(code: &VectorCode, v: &[u32], budget: u128) -> Result<bool> {
    if !code.contains(v) {
        return Err(Error::NotInCode);
    }
    if is_zero(v) {
        return Err(Error::Precondition("the zero word has no minimality".into()));
    }
    let f = code.ext().small();
    let support = code.support(v);
    let words = code.codewords(budget)?;
    Ok(words.par_iter().all(|w| {
        is_zero(w) || !support.contains(f, &code.support(w)) || proportional(code, v, w)
    }))
}

/// One representative per projective class of minimal codewords.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub representatives: Vec<Vec<u32>>,
    pub supports: Vec<Subspace>,
    pub is_minimal_code: bool,
}

/// Enumerates `C`, groups words by support and keeps the classes whose
/// support contains no other support and is shared only by multiples.
pub fn minimal_codewords(code: &VectorCode, budget: u128) -> Result<MinimalityReport> {
    let f = code.ext().small().clone();
    let class_size = code.ext().big().order() as usize - 1;
    let words: Vec<Vec<u32>> = code.codewords(budget)?.into_iter().filter(|w| !is_zero(w)).collect();
    let supports: Vec<Subspace> = words.par_iter().map(|w| code.support(w)).collect();
    let mut by_support: BTreeMap<&Subspace, Vec<usize>> = BTreeMap::new();
    for (i, s) in supports.iter().enumerate() {
        by_support.entry(s).or_default().push(i);
    }
    let mut reps = BTreeMap::new();
    for (s, idx) in &by_support {
        if idx.len() != class_size {
            continue;
        }
        let smaller = by_support
            .keys()
            .any(|t| t.dim() < s.dim() && s.contains(&f, t));
        if !smaller {
            let rep = class_representative(code, &words[idx[0]]);
            reps.insert(rep, (*s).clone());
        }
    }
    let minimal_words = reps.len() * class_size;
    Ok(MinimalityReport {
        is_minimal_code: minimal_words == words.len(),
        supports: reps.values().cloned().collect(),
        representatives: reps.into_keys().collect(),
    })
}

fn check_port_shape(code: &VectorCode, p0: &Subspace, p: &Subspace) -> Result<()> {
    let f = code.ext().small();
    if p0.ambient() != code.len() || p.ambient() != code.len() {
        return Err(Error::AmbientMismatch {
            expected: code.len(),
            found: p0.ambient().max(p.ambient()),
        });
    }
    if p0.dim() != 1 || !p0.is_complement_of(f, p) {
        return Err(Error::Precondition("need a one-dimensional P0 with P0 ⊕ P = F_q^n".into()));
    }
    Ok(())
}

/// `{colsp(Π(X)) ∩ P : X ∈ (C^⊥)_min, P0 ≤ colsp(Π(X))}` in ground coordinates.
pub fn massey_image(code: &VectorCode, p0: &Subspace, p: &Subspace, budget: u128) -> Result<BTreeSet<Subspace>> {
    check_port_shape(code, p0, p)?;
    let f = code.ext().small();
    let report = minimal_codewords(&code.dual(), budget)?;
    report
        .supports
        .iter()
        .filter(|s| s.contains(f, p0))
        .map(|s| s.intersect(f, p))
        .collect()
}

/// `(T + P0) ∩ P`: the projection of `T` onto `P` along `P0`.
fn project_along(f: &crate::gf::Field, t: &Subspace, p0: &Subspace, p: &Subspace) -> Result<Subspace> {
    t.sum(f, p0)?.intersect(f, p)
}

#[derive(Clone, Debug, Serialize)]
pub struct MasseyReport {
    pub image: Vec<Subspace>,
    pub gamma_min: Vec<Subspace>,
    pub dual_is_minimal: bool,
    /// `image ⊆ Γ_min`.
    pub sufficiency: bool,
    /// Only evaluated when the dual is minimal: `image = Γ_min` and every
    /// `V ∈ Γ_min` is witnessed by a minimal dual word with support `V ⊕ P0`.
    pub necessity: Option<bool>,
    /// Members of `Γ_min` with no minimal dual word of support `V ⊕ P0`.
    pub unwitnessed: Vec<Subspace>,
    /// `Γ_min` equals the inclusion-minimal members of
    /// `{(T + P0) ∩ P : T = supp(X), X ∈ C^⊥ \ 0, T ≰ P}`.
    pub projection_characterization: bool,
}

impl MasseyReport {
    /// The literal claim: sufficiency, plus necessity when it applies.
    pub fn passed(&self) -> bool {
        self.sufficiency && self.necessity.unwrap_or(true)
    }
}

pub fn check_massey(code: &VectorCode, p0: &Subspace, p: &Subspace, budget: u128) -> Result<MasseyReport> {
    check_port_shape(code, p0, p)?;
    let f = code.ext().small().clone();
    let m = Arc::new(QPolymatroid::from_code(&code.expand())?);
    if !m.is_q_matroid() {
        return Err(Error::NotQMatroid);
    }
    let s = port(&PortSpec::new(m, p0.clone(), p.clone())?)?;
    let gamma_min = s.in_ground(&s.gamma_min())?;
    let dual = code.dual();
    let dual_report = minimal_codewords(&dual, budget)?;
    let image: BTreeSet<Subspace> = dual_report
        .supports
        .iter()
        .filter(|x| x.contains(&f, p0))
        .map(|x| x.intersect(&f, p))
        .collect::<Result<_>>()?;
    let sufficiency = image.is_subset(&gamma_min);
    let unwitnessed: Vec<Subspace> = gamma_min
        .iter()
        .filter(|v| {
            let target = v.sum(&f, p0).expect("same ambient");
            !dual_report.supports.contains(&target)
        })
        .cloned()
        .collect();
    let necessity = dual_report
        .is_minimal_code
        .then(|| unwitnessed.is_empty() && image == gamma_min);

    let supports: BTreeSet<Subspace> = dual
        .codewords(budget)?
        .iter()
        .filter(|w| !is_zero(w))
        .map(|w| dual.support(w))
        .collect();
    let projections: BTreeSet<Subspace> = supports
        .iter()
        .filter(|t| !p.contains(&f, t))
        .map(|t| project_along(&f, t, p0, p))
        .collect::<Result<_>>()?;
    let projected_min: BTreeSet<Subspace> = projections
        .iter()
        .filter(|v| !projections.iter().any(|w| w.dim() < v.dim() && v.contains(&f, w)))
        .cloned()
        .collect();

    Ok(MasseyReport {
        image: image.into_iter().collect(),
        projection_characterization: projected_min == gamma_min,
        gamma_min: gamma_min.into_iter().collect(),
        dual_is_minimal: dual_report.is_minimal_code,
        sufficiency,
        necessity,
        unwitnessed,
    })
}
