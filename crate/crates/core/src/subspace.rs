//! Subspaces of `F_q^n` in canonical (reduced row echelon) form, together
//! with the lattice operations the rest of the crate is built on.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;

/// Default cap on the number of subspaces a single enumeration may produce.
pub const DEFAULT_SUBSPACE_BUDGET: u128 = 1_000_000;

/// A dense matrix over `F_q`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixFq {
    cols: usize,
    rows: Vec<Vec<u32>>,
}

impl MatrixFq {
    pub fn new(rows: Vec<Vec<u32>>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(Self { cols, rows })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![vec![0; cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = 1;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<u32>> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j]).collect())
            .collect();
        Self {
            cols: self.rows.len(),
            rows,
        }
    }

    pub fn mul(&self, f: &Field, other: &MatrixFq) -> Result<Self> {
        if self.cols != other.nrows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| vec_mat(f, r, &other.rows, other.cols))
            .collect();
        Ok(Self {
            cols: other.cols,
            rows,
        })
    }

    /// Reduced row echelon form (zero rows dropped) and rank.
    pub fn rref(&self, f: &Field) -> (MatrixFq, usize) {
        let mut rows = self.rows.clone();
        let pivots = rref_in_place(f, &mut rows);
        (
            MatrixFq {
                cols: self.cols,
                rows,
            },
            pivots.len(),
        )
    }

    pub fn rank(&self, f: &Field) -> usize {
        rank(f, &self.rows)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self, f: &Field) -> Option<MatrixFq> {
        let n = self.cols;
        if self.nrows() != n {
            return None;
        }
        let mut aug: Vec<Vec<u32>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        let pivots = rref_in_place(f, &mut aug);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(MatrixFq {
            cols: n,
            rows: aug.into_iter().map(|r| r[n..].to_vec()).collect(),
        })
    }
}

/// `v · M` for a row vector `v`.
pub fn vec_mat(f: &Field, v: &[u32], m: &[Vec<u32>], cols: usize) -> Vec<u32> {
    let mut out = vec![0u32; cols];
    for (&a, row) in v.iter().zip(m) {
        if a == 0 {
            continue;
        }
        for (o, &b) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(a, b));
        }
    }
    out
}

pub fn dot(f: &Field, a: &[u32], b: &[u32]) -> u32 {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Brings `rows` to reduced row echelon form in place, drops zero rows and
/// returns the pivot columns.
pub fn rref_in_place(f: &Field, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv(rows[r][c]);
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = f.neg(row[c]);
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if y != 0 {
                    *x = f.add(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &Field, rows: &[Vec<u32>]) -> usize {
    let mut rows = rows.to_vec();
    rref_in_place(f, &mut rows).len()
}

/// Basis of the right kernel `{x : M x = 0}` of a matrix with `ncols` columns.
pub fn kernel(f: &Field, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut rows = rows.to_vec();
    let pivots = rref_in_place(f, &mut rows);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&j| !is_pivot[j])
        .map(|j| {
            let mut x = vec![0u32; ncols];
            x[j] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = f.neg(rows[i][j]);
            }
            x
        })
        .collect()
}

/// A subspace of `F_q^n`, stored as its RREF basis.
///
/// Equality is entrywise equality of the RREF matrices; ordering is by
/// ambient dimension, then dimension, then lexicographic RREF.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    n: usize,
    basis: Vec<Vec<u32>>,
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.basis.len(), &self.basis).cmp(&(other.n, other.basis.len(), &other.basis))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self { n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis: MatrixFq::identity(n).into_rows(),
        }
    }

    /// `⟨e_i : i ∈ indices⟩`, indices 0-based.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let basis = idx
            .into_iter()
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Self { n, basis }
    }

    /// Row space of the given vectors.
    pub fn span(f: &Field, rows: &[Vec<u32>], n: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::AmbientMismatch {
                expected: n,
                found: r.len(),
            });
        }
        if rows.iter().flatten().any(|&x| !f.contains(x)) {
            return Err(Error::InvalidParameters("vector entry outside the field".into()));
        }
        Ok(Self::span_unchecked(f, rows.to_vec(), n))
    }

    pub(crate) fn span_unchecked(f: &Field, mut rows: Vec<Vec<u32>>, n: usize) -> Self {
        rref_in_place(f, &mut rows);
        Self { n, basis: rows }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("RREF rows are non-zero"))
            .collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Reduces `v` modulo this subspace (clears the pivot coordinates).
    pub fn reduce(&self, f: &Field, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for (row, p) in self.basis.iter().zip(self.pivots()) {
            let c = v[p];
            if c == 0 {
                continue;
            }
            let factor = f.neg(c);
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = f.add(*x, f.mul(factor, y));
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, f: &Field, v: &[u32]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    /// `other ≤ self`.
    pub fn contains(&self, f: &Field, other: &Subspace) -> bool {
        self.n == other.n
            && other.dim() <= self.dim()
            && other.basis.iter().all(|v| self.contains_vector(f, v))
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::span_unchecked(f, rows, self.n))
    }

    /// Intersection via the Zassenhaus construction.
    pub fn intersect(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.n;
        let mut rows: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|r| r.iter().chain(r.iter()).copied().collect())
            .chain(
                other
                    .basis
                    .iter()
                    .map(|r| r.iter().copied().chain(std::iter::repeat_n(0, n)).collect()),
            )
            .collect();
        rref_in_place(f, &mut rows);
        let inter = rows
            .into_iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        Ok(Self::span_unchecked(f, inter, n))
    }

    /// `V^⊥ = {w : ⟨v, w⟩ = 0 for all v ∈ V}` under `form`.
    pub fn orthocomplement(&self, f: &Field, form: &BilinearForm) -> Result<Subspace> {
        if form.dim() != self.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: form.dim(),
            });
        }
        let constraints: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|v| vec_mat(f, v, form.gram(), self.n))
            .collect();
        Ok(Self::span_unchecked(f, kernel(f, &constraints, self.n), self.n))
    }

    /// Orthogonal complement under the standard dot product.
    pub fn perp(&self, f: &Field) -> Subspace {
        Self::span_unchecked(f, kernel(f, &self.basis, self.n), self.n)
    }

    /// Coordinates of `self ≤ frame` with respect to `frame`'s RREF basis,
    /// as a subspace of `F_q^{dim frame}`.
    pub fn coords_in(&self, f: &Field, frame: &Subspace) -> Result<Subspace> {
        if !frame.contains(f, self) {
            return Err(Error::Precondition("subspace is not contained in the frame".into()));
        }
        let piv = frame.pivots();
        let rows = self
            .basis
            .iter()
            .map(|v| piv.iter().map(|&p| v[p]).collect())
            .collect();
        Ok(Self::span_unchecked(f, rows, frame.dim()))
    }

    /// Image of a subspace of `F_q^{dim frame}` under the frame's basis.
    pub fn embed_in(&self, f: &Field, frame: &Subspace) -> Result<Subspace> {
        if self.n != frame.dim() {
            return Err(Error::AmbientMismatch {
                expected: frame.dim(),
                found: self.n,
            });
        }
        let rows = self
            .basis
            .iter()
            .map(|c| vec_mat(f, c, &frame.basis, frame.n))
            .collect();
        Ok(Self::span_unchecked(f, rows, frame.n))
    }

    /// Image under `v ↦ v·A` for an `n × n'` matrix `A`.
    pub fn map(&self, f: &Field, a: &MatrixFq) -> Result<Subspace> {
        if a.nrows() != self.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: a.nrows(),
            });
        }
        let rows = self
            .basis
            .iter()
            .map(|v| vec_mat(f, v, a.rows(), a.ncols()))
            .collect();
        Ok(Self::span_unchecked(f, rows, a.ncols()))
    }

    /// Pads into `F_q^{offset + n + tail}` at coordinates `offset..offset+n`.
    pub fn shift(&self, offset: usize, total: usize) -> Subspace {
        let basis = self
            .basis
            .iter()
            .map(|r| {
                let mut v = vec![0; total];
                v[offset..offset + self.n].copy_from_slice(r);
                v
            })
            .collect();
        Subspace { n: total, basis }
    }

    /// Whether `P0 ⊕ P` is the whole ambient space.
    pub fn is_complement_of(&self, f: &Field, other: &Subspace) -> bool {
        self.n == other.n
            && self.dim() + other.dim() == self.n
            && rank(f, &[self.basis.clone(), other.basis.clone()].concat()) == self.n
    }
}

/// A non-degenerate symmetric bilinear form on `F_q^n`, given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    gram: Vec<Vec<u32>>,
}

impl BilinearForm {
    pub fn new(f: &Field, gram: Vec<Vec<u32>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("Gram matrix must be square".into()));
        }
        if (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(Error::DegenerateForm);
        }
        if rank(f, &gram) != n {
            return Err(Error::DegenerateForm);
        }
        Ok(Self { gram })
    }

    pub fn standard(n: usize) -> Self {
        Self {
            gram: MatrixFq::identity(n).into_rows(),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<u32>] {
        &self.gram
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard(self.dim())
    }

    pub fn eval(&self, f: &Field, a: &[u32], b: &[u32]) -> u32 {
        dot(f, &vec_mat(f, a, &self.gram, self.dim()), b)
    }

    /// Whether `Z ⊕ Z^⊥ = F_q^n` under this form.
    pub fn splits(&self, f: &Field, z: &Subspace) -> Result<bool> {
        let zp = z.orthocomplement(f, self)?;
        Ok(z.intersect(f, &zp)?.is_zero())
    }

    /// The restriction of this form to `frame`, in `frame`'s coordinates.
    pub fn restrict_to(&self, f: &Field, frame: &Subspace) -> Result<BilinearForm> {
        let b = frame.basis();
        let gram = b
            .iter()
            .map(|u| b.iter().map(|v| self.eval(f, u, v)).collect())
            .collect();
        BilinearForm::new(f, gram)
    }
}

/// A form under which `Z ⊕ Z^⊥ = F_q^n`: the standard form when it already
/// splits, otherwise the form making `RREF(Z)` plus the standard vectors at
/// its non-pivot positions an orthonormal basis.
pub fn adapted_form(f: &Field, z: &Subspace) -> BilinearForm {
    let n = z.ambient();
    let standard = BilinearForm::standard(n);
    if standard.splits(f, z).expect("same ambient") {
        return standard;
    }
    let piv = z.pivots();
    let mut rows = z.basis().to_vec();
    for j in (0..n).filter(|j| !piv.contains(j)) {
        let mut v = vec![0; n];
        v[j] = 1;
        rows.push(v);
    }
    // T G Tᵀ = I  ⇒  G = (Tᵀ T)^{-1}
    let t = MatrixFq::new(rows, n).expect("square");
    let tt_t = t.transpose().mul(f, &t).expect("square");
    let gram = tt_t.inverse(f).expect("T is invertible").into_rows();
    BilinearForm::new(f, gram).expect("Gram of an orthonormal basis is non-degenerate")
}

/// `F_q^n / Z` coordinatized by the non-pivot positions of `RREF(Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCtx {
    n: usize,
    z: Subspace,
    free: Vec<usize>,
}

impl QuotientCtx {
    pub fn new(z: &Subspace) -> Self {
        let piv = z.pivots();
        let free = (0..z.ambient()).filter(|j| !piv.contains(j)).collect();
        Self {
            n: z.ambient(),
            z: z.clone(),
            free,
        }
    }

    pub fn kernel(&self) -> &Subspace {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn project_vector(&self, f: &Field, v: &[u32]) -> Vec<u32> {
        let r = self.z.reduce(f, v);
        self.free.iter().map(|&j| r[j]).collect()
    }

    /// `π(V)`.
    pub fn project(&self, f: &Field, v: &Subspace) -> Result<Subspace> {
        if v.ambient() != self.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: v.ambient(),
            });
        }
        let rows = v.basis().iter().map(|r| self.project_vector(f, r)).collect();
        Ok(Subspace::span_unchecked(f, rows, self.dim()))
    }

    /// `π^{-1}(V̄)`.
    pub fn lift(&self, f: &Field, vbar: &Subspace) -> Result<Subspace> {
        if vbar.ambient() != self.dim() {
            return Err(Error::AmbientMismatch {
                expected: self.dim(),
                found: vbar.ambient(),
            });
        }
        let mut rows: Vec<Vec<u32>> = vbar
            .basis()
            .iter()
            .map(|r| {
                let mut v = vec![0; self.n];
                for (&j, &x) in self.free.iter().zip(r) {
                    v[j] = x;
                }
                v
            })
            .collect();
        rows.extend(self.z.basis().iter().cloned());
        Ok(Subspace::span_unchecked(f, rows, self.n))
    }
}

/// Gaussian binomial coefficient `[n choose k]_q`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Total number of subspaces of `F_q^n`.
pub fn galois_number(n: usize, q: u64) -> u128 {
    (0..=n).map(|k| gaussian_binomial(n, k, q)).sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `k`-dimensional RREF matrices in `F_q^d`, sorted.
fn rref_matrices(q: u32, d: usize, k: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    for piv in combinations(d, k) {
        let free: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| {
                let piv = &piv;
                ((c + 1)..d)
                    .filter(move |j| !piv.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for idx in 0..total {
            let mut rows = vec![vec![0u32; d]; k];
            for (i, &c) in piv.iter().enumerate() {
                rows[i][c] = 1;
            }
            let mut t = idx;
            for &(i, j) in &free {
                rows[i][j] = (t % q as u64) as u32;
                t /= q as u64;
            }
            out.push(rows);
        }
    }
    out.sort();
    out
}

/// Every subspace of `within` (optionally only those of one dimension),
/// ordered by dimension and then lexicographically by RREF.
pub fn enumerate_subspaces(
    f: &Field,
    within: &Subspace,
    dim_filter: Option<usize>,
    budget: u128,
) -> Result<Vec<Subspace>> {
    let d = within.dim();
    let q = f.order() as u64;
    let dims: Vec<usize> = match dim_filter {
        Some(k) if k > d => Vec::new(),
        Some(k) => vec![k],
        None => (0..=d).collect(),
    };
    let needed: u128 = dims.iter().map(|&k| gaussian_binomial(d, k, q)).sum();
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "subspace enumeration",
            needed,
            limit: budget,
        });
    }
    let mut out = Vec::with_capacity(needed as usize);
    for k in dims {
        let mut layer: Vec<Subspace> = rref_matrices(f.order(), d, k)
            .into_iter()
            .map(|rows| {
                if within.is_full() {
                    Subspace {
                        n: within.ambient(),
                        basis: rows,
                    }
                } else {
                    let basis: Vec<Vec<u32>> = rows
                        .iter()
                        .map(|c| vec_mat(f, c, within.basis(), within.ambient()))
                        .collect();
                    Subspace::span_unchecked(f, basis, within.ambient())
                }
            })
            .collect();
        layer.sort();
        out.extend(layer);
    }
    Ok(out)
}

/// All subspaces of `F_q^n` with the default budget.
pub fn all_subspaces(f: &Field, n: usize) -> Result<Vec<Subspace>> {
    enumerate_subspaces(f, &Subspace::full(n), None, DEFAULT_SUBSPACE_BUDGET)
}

/// `P(V)`: the one-dimensional subspaces of `V`.
pub fn one_dim_subspaces(f: &Field, v: &Subspace) -> Result<Vec<Subspace>> {
    enumerate_subspaces(f, v, Some(1), DEFAULT_SUBSPACE_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2, 1, None).unwrap()
    }

    fn e(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        v
    }

    fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }

    #[test]
    fn rref_examples() {
        let f = f2();
        let id = MatrixFq::identity(4);
        assert_eq!(id.rref(&f), (id.clone(), 4));
        let m = MatrixFq::new(
            vec![add(&e(4, 2), &e(4, 4)), add(&e(4, 3), &e(4, 4)), add(&e(4, 2), &e(4, 3))],
            4,
        )
        .unwrap();
        let (r, rank) = m.rref(&f);
        assert_eq!(rank, 2);
        assert_eq!(r.rows(), &[vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
        let z = MatrixFq::zero(3, 4);
        assert_eq!(z.rref(&f).1, 0);
        assert_eq!(z.rref(&f).0.nrows(), 0);
    }

    #[test]
    fn span_examples() {
        let f = f2();
        assert!(Subspace::span(&f, &[vec![0, 0, 0, 0]], 4).unwrap().is_zero());
        let s = Subspace::span(&f, &[vec![0, 1, 1, 0], vec![0, 1, 0, 1]], 4).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), vec![1, 2]);
        let full = Subspace::span(&f, &(1..=4).map(|i| e(4, i)).collect::<Vec<_>>(), 4).unwrap();
        assert!(full.is_full());
        assert!(Subspace::span(&f, &[vec![1, 0]], 4).is_err());
    }

    #[test]
    fn sum_and_intersection() {
        let f = f2();
        let v = Subspace::coordinate(4, &[0, 1]);
        let w = Subspace::coordinate(4, &[1, 2]);
        assert_eq!(v.sum(&f, &Subspace::zero(4)).unwrap(), v);
        assert_eq!(v.intersect(&f, &v).unwrap(), v);
        assert_eq!(v.intersect(&f, &w).unwrap(), Subspace::coordinate(4, &[1]));
        assert!(v.sum(&f, &Subspace::zero(3)).is_err());
    }

    #[test]
    fn orthocomplement_examples() {
        let f = f2();
        let std = BilinearForm::standard(4);
        assert_eq!(
            Subspace::coordinate(4, &[0]).orthocomplement(&f, &std).unwrap(),
            Subspace::coordinate(4, &[1, 2, 3])
        );
        assert!(Subspace::full(4).orthocomplement(&f, &std).unwrap().is_zero());
        let v = Subspace::span(&f, &[vec![1, 1, 0, 0]], 4).unwrap();
        let vp = v.orthocomplement(&f, &std).unwrap();
        let expected =
            Subspace::span(&f, &[vec![1, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]], 4).unwrap();
        assert_eq!(vp, expected);
        assert!(vp.contains(&f, &v));
    }

    #[test]
    fn degenerate_forms_rejected() {
        let f = f2();
        assert_eq!(
            BilinearForm::new(&f, vec![vec![1, 1], vec![1, 1]]),
            Err(Error::DegenerateForm)
        );
        assert_eq!(
            BilinearForm::new(&f, vec![vec![1, 1], vec![0, 1]]),
            Err(Error::DegenerateForm)
        );
    }

    #[test]
    fn adapted_form_examples() {
        let f = f2();
        let z = Subspace::coordinate(4, &[0]);
        assert!(adapted_form(&f, &z).is_standard());
        assert!(adapted_form(&f, &Subspace::zero(4)).is_standard());
        let z = Subspace::span(&f, &[vec![1, 1, 0, 0]], 4).unwrap();
        let form = adapted_form(&f, &z);
        assert!(!form.is_standard());
        assert!(form.splits(&f, &z).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let f = f2();
        assert_eq!(all_subspaces(&f, 4).unwrap().len(), 67);
        let zero = enumerate_subspaces(&f, &Subspace::full(4), Some(0), 10).unwrap();
        assert_eq!(zero, vec![Subspace::zero(4)]);
        assert_eq!(
            enumerate_subspaces(&f, &Subspace::full(3), Some(1), 100).unwrap().len(),
            7
        );
        assert!(matches!(
            enumerate_subspaces(&f, &Subspace::full(4), None, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn lines() {
        let f = f2();
        let p = Subspace::coordinate(4, &[1, 2, 3]);
        assert_eq!(one_dim_subspaces(&f, &p).unwrap().len(), 7);
        assert!(one_dim_subspaces(&f, &Subspace::zero(4)).unwrap().is_empty());
        let f3 = Field::new(3, 1, None).unwrap();
        assert_eq!(one_dim_subspaces(&f3, &Subspace::full(2)).unwrap().len(), 4);
    }

    #[test]
    fn quotient_examples() {
        let f = f2();
        let z = Subspace::coordinate(4, &[0]);
        let ctx = QuotientCtx::new(&z);
        assert!(ctx.project(&f, &z).unwrap().is_zero());
        assert_eq!(ctx.lift(&f, &Subspace::zero(3)).unwrap(), z);
        assert_eq!(
            ctx.project(&f, &Subspace::coordinate(4, &[0, 1])).unwrap(),
            Subspace::coordinate(3, &[0])
        );
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::new(3, 1, None).unwrap();
        let a = MatrixFq::new(vec![vec![1, 2], vec![0, 1]], 2).unwrap();
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &inv).unwrap(), MatrixFq::identity(2));
        let s = MatrixFq::new(vec![vec![1, 2], vec![2, 1]], 2).unwrap();
        assert!(s.inverse(&f).is_none());
    }
}
