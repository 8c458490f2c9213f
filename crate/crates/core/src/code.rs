//! Rank-metric codes: `F_q`-linear spaces of `n × m` matrices and
//! `F_{q^m}`-linear vector codes expanded through a basis `Π`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{ExtField, Field};
use crate::subspace::{kernel, rank, rref_in_place, vec_mat, Subspace};

/// Default cap on the number of codewords a brute-force scan may visit.
pub const DEFAULT_CODEWORD_BUDGET: u128 = 1 << 20;

/// An `F_q`-linear rank-metric code `C ≤ F_q^{n×m}`.
///
/// Codewords are handled as row-major flattenings of length `n·m`; the
/// stored basis is the RREF of the flattened generators, so two codes are
/// equal exactly when their bases are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCode {
    field: Arc<Field>,
    n: usize,
    m: usize,
    basis: Vec<Vec<u32>>,
}

impl MatrixCode {
    /// Code spanned by `n × m` generator matrices.
    pub fn new(field: Arc<Field>, n: usize, m: usize, generators: &[Vec<Vec<u32>>]) -> Result<Self> {
        let mut flat = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != n || g.iter().any(|r| r.len() != m) {
                return Err(Error::Shape(format!("generator is not {n}x{m}")));
            }
            flat.push(g.concat());
        }
        Self::from_flat(field, n, m, flat)
    }

    /// Code spanned by row-major flattened generators.
    pub fn from_flat(field: Arc<Field>, n: usize, m: usize, mut rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != n * m) {
            return Err(Error::Shape(format!("flattened generator is not of length {}", n * m)));
        }
        if rows.iter().flatten().any(|&x| !field.contains(x)) {
            return Err(Error::InvalidParameters("generator entry outside the field".into()));
        }
        rref_in_place(&field, &mut rows);
        Ok(Self {
            field,
            n,
            m,
            basis: rows,
        })
    }

    pub fn zero(field: Arc<Field>, n: usize, m: usize) -> Self {
        Self {
            field,
            n,
            m,
            basis: Vec::new(),
        }
    }

    pub fn full(field: Arc<Field>, n: usize, m: usize) -> Self {
        let basis = Subspace::full(n * m).basis().to_vec();
        Self { field, n, m, basis }
    }

    /// A `k`-dimensional code drawn from a seeded full-rank random flattening.
    pub fn random(field: Arc<Field>, n: usize, m: usize, k: usize, seed: u64) -> Result<Self> {
        if k > n * m {
            return Err(Error::InvalidParameters(format!("k = {k} exceeds n·m = {}", n * m)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = field.order();
        loop {
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|_| (0..n * m).map(|_| rng.gen_range(0..q)).collect())
                .collect();
            if rank(&field, &rows) == k {
                return Self::from_flat(field, n, m, rows);
            }
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Number of rows `n` of each codeword.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of columns `m` of each codeword.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `dim_{F_q} C`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn basis_matrices(&self) -> Vec<Vec<Vec<u32>>> {
        self.basis.iter().map(|b| self.unflatten(b)).collect()
    }

    pub fn unflatten(&self, x: &[u32]) -> Vec<Vec<u32>> {
        x.chunks(self.m.max(1)).map(|c| c.to_vec()).take(self.n).collect()
    }

    /// The codeword `Σ c_i B_i`.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        vec_mat(&self.field, coeffs, &self.basis, self.n * self.m)
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        x.len() == self.n * self.m
            && Subspace::span_unchecked(&self.field, self.basis.clone(), self.n * self.m)
                .contains_vector(&self.field, x)
    }

    /// `C' ≤ C`.
    pub fn is_subcode_of(&self, other: &MatrixCode) -> bool {
        self.n == other.n && self.m == other.m && self.basis.iter().all(|b| other.contains(b))
    }

    /// Number of codewords `q^k`, or a budget error.
    pub fn check_codeword_budget(&self, budget: u128) -> Result<u128> {
        let count = (self.field.order() as u128)
            .checked_pow(self.dim() as u32)
            .unwrap_or(u128::MAX);
        if count > budget {
            return Err(Error::BudgetExceeded {
                what: "codeword enumeration",
                needed: count,
                limit: budget,
            });
        }
        Ok(count)
    }

    /// All codewords in coefficient order (coefficient vector as base-`q` counter).
    pub fn codewords(&self, budget: u128) -> Result<Vec<Vec<u32>>> {
        let count = self.check_codeword_budget(budget)?;
        let q = self.field.order() as u128;
        let k = self.dim();
        Ok((0..count)
            .map(|idx| {
                let mut t = idx;
                let coeffs: Vec<u32> = (0..k)
                    .map(|_| {
                        let c = (t % q) as u32;
                        t /= q;
                        c
                    })
                    .collect();
                self.combine(&coeffs)
            })
            .collect())
    }

    /// Rank of a flattened codeword viewed as an `n × m` matrix.
    pub fn matrix_rank(&self, x: &[u32]) -> usize {
        rank(&self.field, &self.unflatten(x))
    }

    /// Column space of a flattened codeword, as a subspace of `F_q^n`.
    pub fn column_space(&self, x: &[u32]) -> Subspace {
        let cols: Vec<Vec<u32>> = (0..self.m)
            .map(|j| (0..self.n).map(|i| x[i * self.m + j]).collect())
            .collect();
        Subspace::span_unchecked(&self.field, cols, self.n)
    }

    /// `C^⊥` under the trace form `tr(X Yᵀ) = Σ X_ij Y_ij`.
    pub fn dual(&self) -> MatrixCode {
        let nm = self.n * self.m;
        let mut rows = kernel(&self.field, &self.basis, nm);
        rref_in_place(&self.field, &mut rows);
        MatrixCode {
            field: self.field.clone(),
            n: self.n,
            m: self.m,
            basis: rows,
        }
    }

    fn shortening_constraints(&self, v: &Subspace) -> Result<Vec<Vec<u32>>> {
        if v.ambient() != self.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: v.ambient(),
            });
        }
        let f = &self.field;
        let annihilator = v.perp(f);
        let mut rows = Vec::with_capacity(annihilator.dim() * self.m);
        for a in annihilator.basis() {
            for j in 0..self.m {
                rows.push(
                    self.basis
                        .iter()
                        .map(|b| {
                            (0..self.n).fold(0u32, |acc, i| f.add(acc, f.mul(a[i], b[i * self.m + j])))
                        })
                        .collect(),
                );
            }
        }
        Ok(rows)
    }

    /// Shortened subcode `C(V) = {X ∈ C : colsp(X) ≤ V}`.
    pub fn shorten(&self, v: &Subspace) -> Result<MatrixCode> {
        let constraints = self.shortening_constraints(v)?;
        let coeffs = kernel(&self.field, &constraints, self.dim());
        let rows = coeffs.iter().map(|c| self.combine(c)).collect();
        Self::from_flat(self.field.clone(), self.n, self.m, rows)
    }

    /// `dim C(V)` without materializing a basis.
    pub fn shortened_dim(&self, v: &Subspace) -> Result<usize> {
        let constraints = self.shortening_constraints(v)?;
        Ok(self.dim() - rank(&self.field, &constraints))
    }

    /// Minimum rank of a non-zero codeword (brute force).
    pub fn min_rank_distance(&self, budget: u128) -> Result<usize> {
        if self.dim() == 0 {
            return Err(Error::ZeroCode);
        }
        let words = self.codewords(budget)?;
        Ok(words
            .iter()
            .filter(|x| x.iter().any(|&c| c != 0))
            .map(|x| self.matrix_rank(x))
            .min()
            .expect("non-zero code has non-zero words"))
    }

    /// `max{m,n} (min{m,n} − d + 1)`.
    pub fn singleton_bound(&self, d: usize) -> usize {
        self.n.max(self.m) * (self.n.min(self.m) + 1 - d)
    }

    /// Whether the code meets the rank-metric Singleton bound.
    pub fn is_mrd(&self, budget: u128) -> Result<bool> {
        let d = self.min_rank_distance(budget)?;
        Ok(self.dim() == self.singleton_bound(d))
    }
}

/// An `F_{q^m}`-linear code `C ≤ F_{q^m}^n` with a fixed expansion basis.
#[derive(Clone, Debug)]
pub struct VectorCode {
    ext: Arc<ExtField>,
    n: usize,
    generator: Vec<Vec<u32>>,
}

impl VectorCode {
    /// Code with the given generator rows (big-field encodings). Rows must be
    /// `F_{q^m}`-linearly independent.
    pub fn new(ext: Arc<ExtField>, n: usize, generator: Vec<Vec<u32>>) -> Result<Self> {
        let big = ext.big();
        if generator.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("generator rows must have length {n}")));
        }
        if generator.iter().flatten().any(|&x| !big.contains(x)) {
            return Err(Error::InvalidParameters("generator entry outside F_{q^m}".into()));
        }
        if rank(big, &generator) != generator.len() {
            return Err(Error::InvalidParameters("generator rows are linearly dependent".into()));
        }
        Ok(Self { ext, n, generator })
    }

    /// Gabidulin code `G_ij = g_j^{q^i}`, `i < k`. `points` defaults to `{1, α, …, α^{n−1}}`.
    pub fn gabidulin(ext: Arc<ExtField>, n: usize, k: usize, points: Option<Vec<u32>>) -> Result<Self> {
        let m = ext.degree();
        if k > n {
            return Err(Error::InvalidParameters(format!("k = {k} exceeds n = {n}")));
        }
        if n > m {
            return Err(Error::InvalidParameters(format!("n = {n} exceeds m = {m}")));
        }
        let points = match points {
            Some(p) => p,
            None => {
                let alpha = ext.big().generator();
                (0..n).map(|i| ext.big().pow(alpha, i as u64)).collect()
            }
        };
        if points.len() != n {
            return Err(Error::InvalidParameters(format!("expected {n} evaluation points")));
        }
        let coords: Vec<Vec<u32>> = points.iter().map(|&g| ext.coordinates(g).to_vec()).collect();
        if rank(ext.small(), &coords) != n {
            return Err(Error::InvalidParameters(
                "evaluation points are F_q-linearly dependent".into(),
            ));
        }
        let generator = (0..k as u64)
            .map(|i| points.iter().map(|&g| ext.frobenius(g, i)).collect())
            .collect();
        Self::new(ext, n, generator)
    }

    /// A `k`-dimensional code with a seeded random generator.
    pub fn random(ext: Arc<ExtField>, n: usize, k: usize, seed: u64) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidParameters(format!("k = {k} exceeds n = {n}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qm = ext.big().order();
        loop {
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(0..qm)).collect())
                .collect();
            if rank(ext.big(), &rows) == k {
                return Self::new(ext, n, rows);
            }
        }
    }

    pub fn ext(&self) -> &Arc<ExtField> {
        &self.ext
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.generator.is_empty()
    }

    /// `dim_{F_{q^m}} C`.
    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<u32>] {
        &self.generator
    }

    /// Dual under the standard inner product over `F_{q^m}`.
    pub fn dual(&self) -> VectorCode {
        let big = self.ext.big();
        let mut rows = kernel(big, &self.generator, self.n);
        rref_in_place(big, &mut rows);
        VectorCode {
            ext: self.ext.clone(),
            n: self.n,
            generator: rows,
        }
    }

    /// Same code over a different expansion basis.
    pub fn with_ext(&self, ext: Arc<ExtField>) -> Result<VectorCode> {
        if ext.big() != self.ext.big() {
            return Err(Error::FieldMismatch);
        }
        Ok(VectorCode {
            ext,
            n: self.n,
            generator: self.generator.clone(),
        })
    }

    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        vec_mat(self.ext.big(), coeffs, &self.generator, self.n)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.n
            && rank(self.ext.big(), &[self.generator.clone(), vec![v.to_vec()]].concat())
                == self.dim()
    }

    /// All codewords, `(q^m)^k` of them.
    pub fn codewords(&self, budget: u128) -> Result<Vec<Vec<u32>>> {
        let qm = self.ext.big().order() as u128;
        let count = qm.checked_pow(self.dim() as u32).unwrap_or(u128::MAX);
        if count > budget {
            return Err(Error::BudgetExceeded {
                what: "codeword enumeration",
                needed: count,
                limit: budget,
            });
        }
        let k = self.dim();
        Ok((0..count)
            .map(|idx| {
                let mut t = idx;
                let coeffs: Vec<u32> = (0..k)
                    .map(|_| {
                        let c = (t % qm) as u32;
                        t /= qm;
                        c
                    })
                    .collect();
                self.combine(&coeffs)
            })
            .collect())
    }

    /// `Π(v)` flattened row-major.
    pub fn expand_word(&self, v: &[u32]) -> Vec<u32> {
        self.ext.expand_vector(v).concat()
    }

    /// `colsp(Π(v)) ≤ F_q^n`.
    pub fn support(&self, v: &[u32]) -> Subspace {
        let m = self.ext.degree();
        let rows = self.ext.expand_vector(v);
        let cols: Vec<Vec<u32>> = (0..m).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Subspace::span_unchecked(self.ext.small(), cols, self.n)
    }

    /// `Π(C)`, spanned by the expansions of `γ_i · g_j`.
    pub fn expand(&self) -> MatrixCode {
        let big = self.ext.big();
        let rows = self
            .generator
            .iter()
            .flat_map(|g| {
                self.ext.basis().iter().map(move |&gamma| {
                    let scaled: Vec<u32> = g.iter().map(|&x| big.mul(gamma, x)).collect();
                    self.expand_word(&scaled)
                })
            })
            .collect();
        MatrixCode::from_flat(self.ext.small().clone(), self.n, self.ext.degree(), rows)
            .expect("expansion has matching shape")
    }
}
