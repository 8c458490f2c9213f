//! Prime-power fields `F_{p^e}` and extensions `F_{q^m} / F_q`.
//!
//! Elements are encoded as integers in `[0, q)` whose base-`p` digits,
//! little-endian, are the coefficients of the polynomial representative
//! modulo the field's defining polynomial. Multiplication is table driven
//! (discrete log / antilog over a primitive element), so field sizes are
//! capped at `2^16`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Conway polynomials, coefficients little-endian (constant term first).
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (11, 1, &[9, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 1, &[11, 1]),
    (13, 2, &[2, 12, 1]),
];

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Default defining polynomial for `F_{p^e}`: the Conway polynomial when
/// tabulated, `x` for prime fields outside the table.
pub fn default_modulus(p: u32, e: u32) -> Result<Vec<u32>> {
    if let Some((_, _, coeffs)) = CONWAY.iter().find(|(pp, ee, _)| *pp == p && *ee == e) {
        return Ok(coeffs.to_vec());
    }
    if e == 1 && is_prime(p) {
        return Ok(vec![0, 1]);
    }
    Err(Error::UnsupportedField(format!(
        "no default modulus for p={p}, e={e}; supply one explicitly"
    )))
}

/// Remainder of `a` modulo the monic polynomial `b` over `F_p`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                f.push((t % p as u64) as u32);
                t /= p as u64;
            }
            f.push(1);
            if poly_rem(modulus, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The finite field `F_{p^e}` with a fixed defining polynomial.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `F_{p^e}`. When `modulus` is `None` the default (Conway)
    /// polynomial is used. The modulus must be monic and irreducible.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::UnsupportedField("extension degree must be >= 1".into()));
        }
        let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(Error::UnsupportedField(format!(
                "field of order {p}^{e} exceeds the 2^16 cap"
            )));
        }
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(p, e)?,
        };
        if modulus.len() != e as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                e + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus("coefficient out of range".into()));
        }
        if modulus[e as usize] != 1 {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        let q = order as u32;
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// Shorthand for an `Arc`-wrapped field with the default modulus.
    pub fn shared(p: u32, e: u32) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(p, e, None)?))
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        if q == 2 {
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            return;
        }
        for g in 2..q {
            let mut exp = Vec::with_capacity(2 * order as usize);
            let mut x = 1u32;
            let mut ok = true;
            for k in 0..order {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.mul_slow(x, g);
            }
            if !ok || x != 1 {
                continue;
            }
            let mut log = vec![0u32; q as usize];
            for (k, &v) in exp.iter().enumerate() {
                log[v as usize] = k as u32;
            }
            let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
            self.exp = doubled;
            self.log = log;
            return;
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let e = self.e as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, p);
        self.from_digits(&r)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Number of elements `q = p^e`.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    /// The class of `x` modulo the defining polynomial.
    pub fn generator(&self) -> u32 {
        if self.e == 1 {
            // x ≡ -modulus[0] for a linear modulus
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    /// Base-`p` little-endian digits, always `e` of them.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        let mut t = a;
        for _ in 0..self.e {
            out.push(t % self.p);
            t /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.p + d % self.p)
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; panics on zero (use [`Field::div`] for a checked variant).
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let order = self.q - 1;
        self.exp[((order - self.log[a as usize]) % order) as usize]
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        if b == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(a, self.inv(b)))
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (k % order)) % order;
        self.exp[l as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn element(self: &Arc<Self>, value: u32) -> Result<FieldElement> {
        FieldElement::new(self.clone(), value)
    }
}

/// A field element together with its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    value: u32,
    field: Arc<Field>,
}

/// Binary field operations accepted by [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: Arc<Field>, value: u32) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::InvalidElement {
                value,
                order: field.order(),
            });
        }
        Ok(Self { value, field })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn apply(&self, other: &Self, op: ArithOp) -> Result<Self> {
        self.same_field(other)?;
        let f = &self.field;
        let value = match op {
            ArithOp::Add => f.add(self.value, other.value),
            ArithOp::Sub => f.sub(self.value, other.value),
            ArithOp::Mul => f.mul(self.value, other.value),
            ArithOp::Div => f.div(self.value, other.value)?,
        };
        Ok(Self {
            value,
            field: self.field.clone(),
        })
    }
}

/// Checked binary arithmetic on two elements of the same field.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    a.apply(b, op)
}

/// The tower `F_q ≤ F_{q^m}` together with an `F_q`-basis `Π` of the big field.
#[derive(Clone, Debug)]
pub struct ExtField {
    small: Arc<Field>,
    big: Arc<Field>,
    m: usize,
    embed: Vec<u32>,
    restrict: HashMap<u32, u32>,
    basis: Vec<u32>,
    coords: Vec<u32>,
}

impl ExtField {
    /// Builds the tower with expansion basis `basis` (big-field encodings);
    /// `None` selects the polynomial basis `{1, α, …, α^{m-1}}`.
    pub fn new(small: Arc<Field>, big: Arc<Field>, basis: Option<Vec<u32>>) -> Result<Self> {
        if small.characteristic() != big.characteristic() || !big.degree().is_multiple_of(small.degree()) {
            return Err(Error::UnsupportedField(
                "big field is not an extension of the small field".into(),
            ));
        }
        let m = (big.degree() / small.degree()) as usize;
        let embed = embedding(&small, &big)?;
        let restrict: HashMap<u32, u32> = embed
            .iter()
            .enumerate()
            .map(|(s, &b)| (b, s as u32))
            .collect();
        let basis = match basis {
            Some(b) => b,
            None => {
                let alpha = big.generator();
                (0..m).map(|i| big.pow(alpha, i as u64)).collect()
            }
        };
        if basis.len() != m || basis.iter().any(|&g| !big.contains(g)) {
            return Err(Error::InvalidParameters(format!(
                "expansion basis must consist of {m} elements of the big field"
            )));
        }
        let q = small.order() as usize;
        let total = big.order() as usize;
        let mut coords = vec![u32::MAX; total * m];
        let mut c = vec![0u32; m];
        for idx in 0..total {
            let mut t = idx;
            for cj in c.iter_mut() {
                *cj = (t % q) as u32;
                t /= q;
            }
            let x = c.iter().zip(&basis).fold(0u32, |acc, (&cj, &g)| {
                big.add(acc, big.mul(embed[cj as usize], g))
            });
            let slot = &mut coords[x as usize * m..(x as usize + 1) * m];
            if slot[0] != u32::MAX {
                return Err(Error::InvalidParameters(
                    "expansion basis is not F_q-linearly independent".into(),
                ));
            }
            slot.copy_from_slice(&c);
        }
        Ok(Self {
            small,
            big,
            m,
            embed,
            restrict,
            basis,
            coords,
        })
    }

    /// Tower over a prime-power base with default moduli and polynomial basis.
    pub fn standard(p: u32, e_base: u32, m: u32) -> Result<Self> {
        let small = Field::shared(p, e_base)?;
        let big = Field::shared(p, e_base * m)?;
        Self::new(small, big, None)
    }

    pub fn small(&self) -> &Arc<Field> {
        &self.small
    }

    pub fn big(&self) -> &Arc<Field> {
        &self.big
    }

    /// Extension degree `m`.
    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Image of a small-field element in the big field.
    pub fn embed(&self, a: u32) -> u32 {
        self.embed[a as usize]
    }

    /// Inverse of [`ExtField::embed`] on the subfield.
    pub fn to_small(&self, x: u32) -> Option<u32> {
        self.restrict.get(&x).copied()
    }

    /// Coordinates of `x` with respect to `Π`.
    pub fn coordinates(&self, x: u32) -> &[u32] {
        &self.coords[x as usize * self.m..(x as usize + 1) * self.m]
    }

    /// `Σ_j c_j γ_j`.
    pub fn from_coordinates(&self, c: &[u32]) -> u32 {
        c.iter().zip(&self.basis).fold(0u32, |acc, (&cj, &g)| {
            self.big.add(acc, self.big.mul(self.embed(cj), g))
        })
    }

    /// `x^{q^i}` where `q` is the order of the small field.
    pub fn frobenius(&self, x: u32, i: u64) -> u32 {
        let q = self.small.order() as u64;
        let order = self.big.order() as u64 - 1;
        // q^i mod (q^m - 1)
        let mut k = 1u64;
        for _ in 0..i {
            k = (k * q) % order.max(1);
        }
        if x == 0 {
            return 0;
        }
        if k == 0 {
            k = order;
        }
        self.big.pow(x, k)
    }

    /// Field trace `Tr(x) = Σ_{i<m} x^{q^i}`, returned as a small-field encoding.
    pub fn trace(&self, x: u32) -> u32 {
        let t = (0..self.m as u64).fold(0u32, |acc, i| self.big.add(acc, self.frobenius(x, i)));
        self.to_small(t).expect("trace lies in the subfield")
    }

    /// `Π(v)`: the `n × m` matrix whose row `i` holds the coordinates of `v_i`.
    pub fn expand_vector(&self, v: &[u32]) -> Vec<Vec<u32>> {
        v.iter().map(|&x| self.coordinates(x).to_vec()).collect()
    }

    /// Inverse of [`ExtField::expand_vector`].
    pub fn contract_matrix(&self, rows: &[Vec<u32>]) -> Vec<u32> {
        rows.iter().map(|r| self.from_coordinates(r)).collect()
    }
}

fn embedding(small: &Field, big: &Field) -> Result<Vec<u32>> {
    if small.degree() == 1 {
        return Ok((0..small.order()).collect());
    }
    // find a root of the small modulus in the big field
    let modulus = small.modulus();
    let root = big
        .elements()
        .find(|&r| {
            let mut acc = 0u32;
            for &c in modulus.iter().rev() {
                acc = big.add(big.mul(acc, r), c);
            }
            acc == 0
        })
        .ok_or_else(|| Error::UnsupportedField("subfield modulus has no root".into()))?;
    Ok((0..small.order())
        .map(|a| {
            small
                .digits(a)
                .iter()
                .rev()
                .fold(0u32, |acc, &d| big.add(big.mul(acc, root), d))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, e: u32) -> Field {
        Field::new(p, e, None).unwrap()
    }

    #[test]
    fn f4_and_f8_products() {
        let f4 = f(2, 2);
        assert_eq!(f4.mul(2, 2), 3);
        let f8 = f(2, 3);
        assert_eq!(f8.mul(2, 4), 3);
        for a in f8.elements() {
            assert_eq!(f8.add(a, 0), a);
        }
    }

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 3).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 4).unwrap(), vec![1, 1, 0, 0, 1]);
        assert!(default_modulus(2, 15).is_err());
    }

    #[test]
    fn tabulated_conway_polynomials_are_irreducible_and_primitive() {
        for &(p, e, coeffs) in CONWAY {
            assert!(is_irreducible(coeffs, p), "{p}^{e}");
            let field = Field::new(p, e, Some(coeffs.to_vec())).unwrap();
            // the class of x generates the multiplicative group
            let x = field.generator();
            let order = field.order() - 1;
            let mut y = x;
            for k in 1..order {
                assert!(y != 1 || order == 1, "x has order {k} < {order} in {p}^{e}");
                y = field.mul(y, x);
            }
            assert_eq!(y, 1);
        }
    }

    #[test]
    fn rejects_bad_moduli_and_sizes() {
        assert!(matches!(
            Field::new(2, 2, Some(vec![1, 0, 1])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            Field::new(2, 2, Some(vec![1, 1, 0])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(Field::new(4, 1, None).is_err());
        assert!(Field::new(2, 17, None).is_err());
        assert!(Field::new(2, 16, Some({
            // x^16 + x^12 + x^3 + x + 1
            let mut m = vec![0u32; 17];
            for i in [0, 1, 3, 12, 16] {
                m[i] = 1;
            }
            m
        }))
        .is_ok());
    }

    #[test]
    fn checked_arith_errors() {
        let f4 = Arc::new(f(2, 2));
        let f8 = Arc::new(f(2, 3));
        let a = f4.element(2).unwrap();
        let zero = f4.element(0).unwrap();
        let b = f8.element(2).unwrap();
        assert_eq!(field_arith(&a, &zero, ArithOp::Div), Err(Error::DivisionByZero));
        assert_eq!(field_arith(&a, &b, ArithOp::Add), Err(Error::FieldMismatch));
        assert_eq!(field_arith(&a, &a, ArithOp::Mul).unwrap().value(), 3);
        assert!(f4.element(4).is_err());
    }

    #[test]
    fn trace_values() {
        let f4 = ExtField::standard(2, 1, 2).unwrap();
        assert_eq!(f4.trace(2), 1);
        assert_eq!(f4.trace(0), 0);
        let f8 = ExtField::standard(2, 1, 3).unwrap();
        assert_eq!(f8.trace(1), 1);
    }

    #[test]
    fn frobenius_values() {
        let f4 = ExtField::standard(2, 1, 2).unwrap();
        assert_eq!(f4.frobenius(2, 0), 2);
        assert_eq!(f4.frobenius(2, 1), 3);
        let f8 = ExtField::standard(2, 1, 3).unwrap();
        assert_eq!(f8.frobenius(2, 3), 2);
    }

    #[test]
    fn expansions() {
        let f4 = ExtField::standard(2, 1, 2).unwrap();
        assert_eq!(
            f4.expand_vector(&[1, 0, 3, 2]),
            vec![vec![1, 0], vec![0, 0], vec![1, 1], vec![0, 1]]
        );
        assert_eq!(f4.expand_vector(&[0, 0]), vec![vec![0, 0], vec![0, 0]]);
        let f8 = ExtField::standard(2, 1, 3).unwrap();
        assert_eq!(
            f8.expand_vector(&[0, 1, 1, 4]),
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 0, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn dependent_basis_rejected() {
        let small = Field::shared(2, 1).unwrap();
        let big = Field::shared(2, 2).unwrap();
        assert!(ExtField::new(small, big, Some(vec![1, 1])).is_err());
    }

    #[test]
    fn non_prime_subfield_tower() {
        // F_16 over F_4
        let ext = ExtField::standard(2, 2, 2).unwrap();
        let big = ext.big().clone();
        for a in ext.small().elements() {
            let x = ext.embed(a);
            assert_eq!(big.pow(x, 4), x);
        }
        for x in big.elements() {
            let c = ext.coordinates(x).to_vec();
            assert_eq!(ext.from_coordinates(&c), x);
            let t = ext.trace(x);
            assert!(ext.small().contains(t));
        }
    }
}
