//! q-polymatroids with materialized rank tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::MatrixCode;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::subspace::{
    enumerate_subspaces, BilinearForm, MatrixFq, QuotientCtx, Subspace, DEFAULT_SUBSPACE_BUDGET,
};

/// A q-polymatroid `(F_q^n, ρ)` whose rank function is stored as integer
/// numerators over a common denominator.
#[derive(Clone, Debug)]
pub struct QPolymatroid {
    field: Arc<Field>,
    n: usize,
    denom: i64,
    spaces: Vec<Subspace>,
    ranks: Vec<i64>,
    index: HashMap<Subspace, usize>,
    source: Option<MatrixCode>,
}

/// One violated rank axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomViolation {
    /// `0 ≤ ρ(V) ≤ dim V` fails.
    Boundedness { v: Subspace },
    /// `V ≤ W` but `ρ(V) > ρ(W)`.
    Monotonicity { v: Subspace, w: Subspace },
    /// `ρ(V + W) + ρ(V ∩ W) > ρ(V) + ρ(W)`.
    Submodularity { v: Subspace, w: Subspace },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub checked_spaces: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl QPolymatroid {
    /// Builds a table by evaluating `rank_num` (numerator over `denom`) on every
    /// subspace of `F_q^n`.
    pub fn from_fn<F>(field: Arc<Field>, n: usize, denom: i64, budget: u128, rank_num: F) -> Result<Self>
    where
        F: Fn(&Subspace) -> i64 + Sync,
    {
        if denom < 1 {
            return Err(Error::InvalidParameters("denominator must be positive".into()));
        }
        let spaces = enumerate_subspaces(&field, &Subspace::full(n), None, budget)?;
        let ranks: Vec<i64> = spaces.par_iter().map(&rank_num).collect();
        Ok(Self::assemble(field, n, denom, spaces, ranks, None))
    }

    fn assemble(
        field: Arc<Field>,
        n: usize,
        denom: i64,
        spaces: Vec<Subspace>,
        ranks: Vec<i64>,
        source: Option<MatrixCode>,
    ) -> Self {
        let index = spaces.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self {
            field,
            n,
            denom,
            spaces,
            ranks,
            index,
            source,
        }
    }

    /// `ρ_C(V) = (dim C − dim C(V^⊥)) / m`.
    pub fn from_code(code: &MatrixCode) -> Result<Self> {
        Self::from_code_with(code, DEFAULT_SUBSPACE_BUDGET)
    }

    pub fn from_code_with(code: &MatrixCode, budget: u128) -> Result<Self> {
        let f = code.field().clone();
        let k = code.dim() as i64;
        let mut m = Self::from_fn(f.clone(), code.n(), code.m() as i64, budget, |v| {
            let vp = v.perp(&f);
            k - code.shortened_dim(&vp).expect("ambient matches") as i64
        })?;
        m.source = Some(code.clone());
        Ok(m)
    }

    /// The uniform q-matroid `U_{n,k}`: `ρ(V) = min{dim V, k}`.
    pub fn uniform(field: Arc<Field>, n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidParameters(format!("k = {k} exceeds n = {n}")));
        }
        Self::from_fn(field, n, 1, DEFAULT_SUBSPACE_BUDGET, |v| v.dim().min(k) as i64)
    }

    /// Copy with one table entry replaced.
    pub fn with_rank(&self, v: &Subspace, numerator: i64) -> Result<Self> {
        let i = self.position(v)?;
        let mut out = self.clone();
        out.ranks[i] = numerator;
        out.source = None;
        Ok(out)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Dimension of the ground space.
    pub fn ground_dim(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> i64 {
        self.denom
    }

    pub fn source(&self) -> Option<&MatrixCode> {
        self.source.as_ref()
    }

    /// Every subspace of the ground space, in canonical order.
    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    /// `(subspace, numerator)` pairs in canonical order.
    pub fn table(&self) -> impl Iterator<Item = (&Subspace, i64)> {
        self.spaces.iter().zip(self.ranks.iter().copied())
    }

    fn position(&self, v: &Subspace) -> Result<usize> {
        if v.ambient() != self.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: v.ambient(),
            });
        }
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::Precondition("subspace is not in canonical form".into()))
    }

    /// Numerator of `ρ(V)` over [`QPolymatroid::denominator`].
    pub fn rank_num(&self, v: &Subspace) -> Result<i64> {
        Ok(self.ranks[self.position(v)?])
    }

    pub fn rank(&self, v: &Subspace) -> Result<Rational64> {
        Ok(Rational64::new(self.rank_num(v)?, self.denom))
    }

    /// `ρ(E)`.
    pub fn total_rank(&self) -> Rational64 {
        self.rank(&Subspace::full(self.n)).expect("full space is tabulated")
    }

    /// `ρ(V | W) = ρ(V + W) − ρ(W)`.
    pub fn cond_rank(&self, v: &Subspace, w: &Subspace) -> Result<Rational64> {
        let s = v.sum(&self.field, w)?;
        Ok(self.rank(&s)? - self.rank(w)?)
    }

    /// Numerator of `ρ(V | W)`.
    pub fn cond_rank_num(&self, v: &Subspace, w: &Subspace) -> Result<i64> {
        let s = v.sum(&self.field, w)?;
        Ok(self.rank_num(&s)? - self.rank_num(w)?)
    }

    /// Exhaustive check of boundedness, monotonicity and submodularity.
    pub fn verify_axioms(&self) -> AxiomReport {
        let f = &self.field;
        let d = self.denom;
        let mut violations: Vec<AxiomViolation> = self
            .table()
            .filter(|(v, r)| *r < 0 || *r > v.dim() as i64 * d)
            .map(|(v, _)| AxiomViolation::Boundedness { v: v.clone() })
            .collect();
        let pairs: Vec<AxiomViolation> = (0..self.spaces.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let v = &self.spaces[i];
                let rv = self.ranks[i];
                let mut out = Vec::new();
                for (j, w) in self.spaces.iter().enumerate() {
                    let rw = self.ranks[j];
                    if w.dim() >= v.dim() && rv > rw && w.contains(f, v) {
                        out.push(AxiomViolation::Monotonicity {
                            v: v.clone(),
                            w: w.clone(),
                        });
                    }
                    if j < i {
                        continue;
                    }
                    let s = v.sum(f, w).expect("same ambient");
                    let t = v.intersect(f, w).expect("same ambient");
                    let lhs = self.ranks[self.index[&s]] + self.ranks[self.index[&t]];
                    if lhs > rv + rw {
                        out.push(AxiomViolation::Submodularity {
                            v: v.clone(),
                            w: w.clone(),
                        });
                    }
                }
                out
            })
            .collect();
        violations.extend(pairs);
        AxiomReport {
            checked_spaces: self.spaces.len(),
            violations,
        }
    }

    /// `ρ*(V) = dim V − ρ(E) + ρ(V^⊥)`, complements taken under `form`.
    pub fn dual(&self, form: &BilinearForm) -> Result<Self> {
        if form.dim() != self.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: form.dim(),
            });
        }
        let f = &self.field;
        let total = self.rank_num(&Subspace::full(self.n))?;
        let ranks = self
            .spaces
            .iter()
            .map(|v| {
                let vp = v.orthocomplement(f, form).expect("same ambient");
                Ok(v.dim() as i64 * self.denom - total + self.rank_num(&vp)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(
            self.field.clone(),
            self.n,
            self.denom,
            self.spaces.clone(),
            ranks,
            None,
        ))
    }

    /// `M|_Z`, with `Z`'s RREF basis as the standard basis of `F_q^{dim Z}`.
    pub fn restrict(&self, z: &Subspace) -> Result<Self> {
        self.position(z)?;
        let f = self.field.clone();
        Self::from_fn(f.clone(), z.dim(), self.denom, u128::MAX, |u| {
            let image = u.embed_in(&f, z).expect("frame dimension matches");
            self.ranks[self.index[&image]]
        })
    }

    /// `M/Z` on `F_q^n / Z` in quotient coordinates: `ρ(π^{-1}(V)) − ρ(Z)`.
    pub fn contract(&self, z: &Subspace) -> Result<Self> {
        let rz = self.rank_num(z)?;
        let ctx = QuotientCtx::new(z);
        let f = self.field.clone();
        Self::from_fn(f.clone(), ctx.dim(), self.denom, u128::MAX, |vbar| {
            let lifted = ctx.lift(&f, vbar).expect("quotient dimension matches");
            self.ranks[self.index[&lifted]] - rz
        })
    }

    /// Whether every rank is an integer.
    pub fn is_q_matroid(&self) -> bool {
        self.ranks.iter().all(|r| r % self.denom == 0)
    }

    fn require_q_matroid(&self) -> Result<()> {
        if self.is_q_matroid() {
            Ok(())
        } else {
            Err(Error::NotQMatroid)
        }
    }

    /// `ρ(V) = dim V`.
    pub fn is_independent(&self, v: &Subspace) -> Result<bool> {
        Ok(self.rank_num(v)? == v.dim() as i64 * self.denom)
    }

    /// Dependent spaces all of whose proper subspaces are independent.
    pub fn circuits(&self) -> Result<Vec<Subspace>> {
        self.require_q_matroid()?;
        let f = &self.field;
        let mut out = Vec::new();
        for v in &self.spaces {
            if self.is_independent(v)? {
                continue;
            }
            let subs = enumerate_subspaces(f, v, None, u128::MAX)?;
            let minimal = subs
                .iter()
                .filter(|w| w.dim() < v.dim())
                .all(|w| self.is_independent(w).expect("tabulated"));
            if minimal {
                out.push(v.clone());
            }
        }
        Ok(out)
    }

    /// Independent and not properly contained in any independent space.
    pub fn is_basis(&self, v: &Subspace) -> Result<bool> {
        self.require_q_matroid()?;
        if !self.is_independent(v)? {
            return Ok(false);
        }
        let f = &self.field;
        Ok(!self.spaces.iter().any(|w| {
            w.dim() > v.dim() && w.contains(f, v) && self.is_independent(w).expect("tabulated")
        }))
    }

    /// Table equality as rationals, regardless of denominators.
    pub fn same_table(&self, other: &QPolymatroid) -> bool {
        self.n == other.n
            && self.spaces == other.spaces
            && self
                .ranks
                .iter()
                .zip(&other.ranks)
                .all(|(a, b)| a * other.denom == b * self.denom)
    }

    /// Per dimension, the sorted multiset of rank numerators scaled to a common base.
    fn rank_profile(&self, scale: i64) -> BTreeMap<usize, Vec<i64>> {
        let mut out: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for (v, r) in self.table() {
            out.entry(v.dim()).or_default().push(r * scale);
        }
        for vals in out.values_mut() {
            vals.sort_unstable();
        }
        out
    }

    /// Searches `GL(n, q)` for `φ` (acting on row vectors, `v ↦ v·A`) with
    /// `ρ₂(φ(V)) = ρ₁(V)` for every `V`. `budget` caps the number of
    /// candidate matrices (`q^{n²}`).
    pub fn find_equivalence(&self, other: &QPolymatroid, budget: u128) -> Result<Option<MatrixFq>> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let q = self.field.order() as u128;
        let candidates = q.checked_pow((n * n) as u32).unwrap_or(u128::MAX);
        if candidates > budget {
            return Err(Error::BudgetExceeded {
                what: "GL(n, q) search",
                needed: candidates,
                limit: budget,
            });
        }
        if self.rank_profile(other.denom) != other.rank_profile(self.denom) {
            return Ok(None);
        }
        // layer r: subspaces whose support lies in the first r coordinates but not r-1
        let mut layers: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (i, v) in self.spaces.iter().enumerate() {
            let last = v
                .basis()
                .iter()
                .filter_map(|row| row.iter().rposition(|&x| x != 0))
                .max()
                .map_or(0, |c| c + 1);
            layers[last].push(i);
        }
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n);
        let found = self.extend_equivalence(other, &layers, &mut rows);
        Ok(found.then(|| MatrixFq::new(rows, n).expect("square")))
    }

    fn extend_equivalence(&self, other: &QPolymatroid, layers: &[Vec<usize>], rows: &mut Vec<Vec<u32>>) -> bool {
        let n = self.n;
        let f = &self.field;
        let r = rows.len();
        if r == n {
            return true;
        }
        let q = f.order() as u64;
        let total = q.pow(n as u32);
        for idx in 1..total {
            let mut t = idx;
            let row: Vec<u32> = (0..n)
                .map(|_| {
                    let c = (t % q) as u32;
                    t /= q;
                    c
                })
                .collect();
            rows.push(row);
            if crate::subspace::rank(f, rows) == r + 1 {
                let mut a = rows.clone();
                a.extend((r + 1..n).map(|_| vec![0; n]));
                let a = MatrixFq::new(a, n).expect("square");
                let ok = layers[r + 1].iter().all(|&i| {
                    let image = self.spaces[i].map(f, &a).expect("square map");
                    self.ranks[i] * other.denom == other.ranks[other.index[&image]] * self.denom
                });
                if ok && self.extend_equivalence(other, layers, rows) {
                    return true;
                }
            }
            rows.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::DEFAULT_CODEWORD_BUDGET;

    fn f2() -> Arc<Field> {
        Field::shared(2, 1).unwrap()
    }

    fn sp(f: &Field, rows: &[&[u32]]) -> Subspace {
        let n = rows[0].len();
        Subspace::span(f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), n).unwrap()
    }

    fn binary_4x2() -> MatrixCode {
        MatrixCode::new(
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
        .unwrap()
    }

    #[test]
    fn trivial_codes() {
        let f = f2();
        let zero = QPolymatroid::from_code(&MatrixCode::zero(f.clone(), 3, 2)).unwrap();
        assert!(zero.table().all(|(_, r)| r == 0));
        let full = QPolymatroid::from_code(&MatrixCode::full(f, 3, 2)).unwrap();
        assert!(full.table().all(|(v, r)| r == 2 * v.dim() as i64));
    }

    #[test]
    fn binary_4x2_circuits() {
        let f = f2();
        let m = QPolymatroid::from_code(&binary_4x2()).unwrap();
        assert!(m.is_q_matroid());
        let mut circuits = m.circuits().unwrap();
        circuits.sort();
        let mut expected = vec![
            sp(&f, &[&[1, 0, 0, 0], &[0, 1, 1, 0]]),
            sp(&f, &[&[0, 1, 0, 1], &[0, 0, 1, 1]]),
            sp(&f, &[&[1, 0, 0, 0], &[0, 1, 0, 1]]),
            sp(&f, &[&[1, 1, 0, 1], &[0, 0, 1, 1]]),
            sp(&f, &[&[1, 0, 1, 1]]),
        ];
        expected.sort();
        assert_eq!(circuits, expected);
        let e1 = sp(&f, &[&[1, 0, 0, 0]]);
        let l = sp(&f, &[&[0, 1, 1, 0]]);
        assert_eq!(m.cond_rank(&e1, &l).unwrap(), Rational64::from(0));
        assert_eq!(m.cond_rank(&e1, &e1).unwrap(), Rational64::from(0));
        assert_eq!(m.rank(&Subspace::zero(4)).unwrap(), Rational64::from(0));
    }

    #[test]
    fn axioms_and_corruption() {
        let f = f2();
        let u = QPolymatroid::uniform(f.clone(), 4, 2).unwrap();
        assert!(u.verify_axioms().passed());
        let m = QPolymatroid::from_code(&binary_4x2()).unwrap();
        assert!(m.verify_axioms().passed());
        let v = sp(&f, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let bumped = m.with_rank(&v, m.rank_num(&v).unwrap() + 1).unwrap();
        let report = bumped.verify_axioms();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|x| match x {
            AxiomViolation::Boundedness { v: a } => *a == v,
            AxiomViolation::Monotonicity { v: a, w: b } | AxiomViolation::Submodularity { v: a, w: b } => {
                *a == v || *b == v
            }
        }));
    }

    #[test]
    fn uniform_duality_and_contraction() {
        let f = f2();
        let form = BilinearForm::standard(4);
        let u = QPolymatroid::uniform(f.clone(), 4, 1).unwrap();
        let u3 = QPolymatroid::uniform(f.clone(), 4, 3).unwrap();
        assert!(u.dual(&form).unwrap().same_table(&u3));
        let u42 = QPolymatroid::uniform(f.clone(), 4, 2).unwrap();
        let c = u42.contract(&Subspace::coordinate(4, &[2])).unwrap();
        assert!(c.same_table(&QPolymatroid::uniform(f.clone(), 3, 1).unwrap()));
        for (v, r) in u42.table().filter(|(v, _)| v.dim() == 3) {
            assert_eq!(r, 2, "{v:?}");
        }
        assert!(QPolymatroid::uniform(f, 2, 3).is_err());
    }

    #[test]
    fn trivial_minors() {
        let m = QPolymatroid::from_code(&binary_4x2()).unwrap();
        assert!(m.restrict(&Subspace::full(4)).unwrap().same_table(&m));
        assert!(m.contract(&Subspace::zero(4)).unwrap().same_table(&m));
        let form = BilinearForm::standard(4);
        assert!(m.dual(&form).unwrap().dual(&form).unwrap().same_table(&m));
    }

    #[test]
    fn q_matroid_predicates() {
        let f = f2();
        let u = QPolymatroid::uniform(f.clone(), 3, 1).unwrap();
        let circuits = u.circuits().unwrap();
        assert!(circuits.iter().all(|c| c.dim() == 2));
        assert_eq!(circuits.len(), 7);
        assert!(u.is_independent(&Subspace::zero(3)).unwrap());
        assert!(u.is_basis(&Subspace::coordinate(3, &[1])).unwrap());
        assert!(!u.is_basis(&Subspace::zero(3)).unwrap());
        let frac = QPolymatroid::from_code(
            &MatrixCode::new(f, 2, 2, &[vec![vec![1, 0], vec![0, 0]]]).unwrap(),
        )
        .unwrap();
        assert!(!frac.is_q_matroid());
        assert_eq!(frac.circuits(), Err(Error::NotQMatroid));
    }

    #[test]
    fn equivalence_search() {
        let f = f2();
        let m = QPolymatroid::from_code(&binary_4x2()).unwrap();
        let id = m.find_equivalence(&m, DEFAULT_CODEWORD_BUDGET).unwrap();
        assert!(id.is_some());
        let u = QPolymatroid::uniform(f.clone(), 4, 2).unwrap();
        assert!(m.find_equivalence(&u, DEFAULT_CODEWORD_BUDGET).unwrap().is_none());
        // re-coordinatize by an invertible P: ρ'(V) = ρ(V·P^{-1})
        let p = MatrixFq::new(
            vec![vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]],
            4,
        )
        .unwrap();
        let pinv = p.inverse(&f).unwrap();
        let moved = QPolymatroid::from_fn(f.clone(), 4, 2, u128::MAX, |v| {
            m.rank_num(&v.map(&f, &pinv).unwrap()).unwrap()
        })
        .unwrap();
        let phi = m.find_equivalence(&moved, DEFAULT_CODEWORD_BUDGET).unwrap().unwrap();
        for (v, r) in m.table() {
            assert_eq!(moved.rank_num(&v.map(&f, &phi).unwrap()).unwrap(), r);
        }
    }
}
