//! Exact linear algebra over `Q` and `Z/p`.
//!
//! Everything downstream (homology, bounding choices, inductive transfer) is
//! reduced to row reduction here, so the pivot rule is fixed: leftmost nonzero
//! column, topmost available row. No magnitude heuristics are needed since the
//! arithmetic is exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn zero(self) -> Scalar {
        Scalar::from_i64(self, 0)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_i64(self, 1)
    }

    /// Parses `Q` or `Zp:<p>`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("Zp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Validation(format!("bad modulus in field spec `{s}`")))?;
            if !is_prime(p) {
                return Err(Error::Validation(format!("{p} is not prime")));
            }
            if p > u32::MAX as u64 {
                return Err(Error::Validation(format!("modulus {p} too large")));
            }
            return Ok(Field::Prime(p));
        }
        Err(Error::Validation(format!("unknown field `{s}`, expected Q or Zp:<p>")))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Zp:{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with positive
/// denominator (guaranteed by `BigRational`); residues are reduced mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Zp { residue: u64, modulus: u64 },
}

impl Scalar {
    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Zp {
                residue: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Zp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Zp { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Zp { residue, .. } => *residue == 1,
        }
    }

    /// `(-1)^k · self`.
    pub fn signed(self, negate: bool) -> Scalar {
        if negate {
            -self
        } else {
            self
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Zp { residue, modulus } => Scalar::Zp {
                residue: pow_mod(*residue, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Parses `a`, `-a` or `a/b` in the given field.
    pub fn parse(field: Field, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Validation(format!("bad scalar `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match field {
            Field::Rational => Ok(Scalar::Q(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    u64::try_from(r).expect("residue fits")
                };
                let n = Scalar::Zp { residue: reduce(&num), modulus: p };
                let d = Scalar::Zp { residue: reduce(&den), modulus: p };
                let dinv = d.inv().ok_or_else(bad)?;
                Ok(n * dinv)
            }
        }
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "scalar field mismatch");
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Zp { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Zp { residue: a, modulus }, Scalar::Zp { residue: b, .. }) => Scalar::Zp {
                residue: (a + b) % modulus,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Zp { residue: a, modulus }, Scalar::Zp { residue: b, .. }) => Scalar::Zp {
                residue: a * b % modulus,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Zp { residue, modulus } => Scalar::Zp {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, field, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch);
                }
                entries.push(x);
            }
        }
        Ok(Matrix { rows: r, cols: c, field, entries })
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: col.len() });
            }
            for (i, x) in col.iter().enumerate() {
                if x.field() != field {
                    return Err(Error::FieldMismatch);
                }
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                let a = self.get(i, j);
                if a.is_zero() || x.is_zero() {
                    continue;
                }
                *o = &*o + &(a * x);
            }
        }
        Ok(out)
    }

    fn check_field(&self) -> Result<()> {
        if self.entries.iter().all(|x| x.field() == self.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for j in 0..self.cols {
            let x = &self.entries[r * self.cols + j];
            if !x.is_zero() {
                self.entries[r * self.cols + j] = x * s;
            }
        }
    }

    /// row[target] -= factor * row[source]
    fn axpy_row(&mut self, target: usize, source: usize, factor: &Scalar) {
        for j in 0..self.cols {
            let s = &self.entries[source * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let t = &self.entries[target * self.cols + j] - &(factor * s);
            self.entries[target * self.cols + j] = t;
        }
    }
}

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub echelon: Matrix,
    pub pivots: Vec<usize>,
    pub transform: Matrix,
}

/// Gauss-Jordan elimination in place; mirrors every row operation on `shadow`.
fn eliminate(m: &mut Matrix, mut shadow: Option<&mut Matrix>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        if let Some(s) = shadow.as_deref_mut() {
            s.swap_rows(row, p);
        }
        let inv = m.get(row, col).inv().expect("pivot is nonzero");
        m.scale_row(row, &inv);
        if let Some(s) = shadow.as_deref_mut() {
            s.scale_row(row, &inv);
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            m.axpy_row(r, row, &factor);
            if let Some(s) = shadow.as_deref_mut() {
                s.axpy_row(r, row, &factor);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Reduced row-echelon form with the invertible transform recording the row
/// operations, so that `transform · m == echelon`.
pub fn rref(m: &Matrix) -> Result<Rref> {
    m.check_field()?;
    let mut echelon = m.clone();
    let mut transform = Matrix::identity(m.field, m.rows);
    let pivots = eliminate(&mut echelon, Some(&mut transform));
    Ok(Rref { echelon, pivots, transform })
}

pub fn rank(m: &Matrix) -> Result<usize> {
    m.check_field()?;
    let mut e = m.clone();
    Ok(eliminate(&mut e, None).len())
}

/// Canonical kernel basis: one vector per free column (in increasing order),
/// with that free variable set to 1, the other free variables 0, and the pivot
/// variables back-substituted.
pub fn kernel_basis(m: &Matrix) -> Result<Vec<Vec<Scalar>>> {
    m.check_field()?;
    let mut e = m.clone();
    let pivots = eliminate(&mut e, None);
    let field = m.field;
    let mut is_pivot = vec![None; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![field.zero(); m.cols];
        v[free] = field.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -e.get(r, free);
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Canonical particular solution of `m · x = b` (free variables zero), or
/// `None` when `b` is not in the column space.
pub fn solve_particular(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch { expected: m.rows, found: b.len() });
    }
    m.check_field()?;
    if b.iter().any(|x| x.field() != m.field) {
        return Err(Error::FieldMismatch);
    }
    let mut aug = Matrix::zeros(m.field, m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, b[i].clone());
    }
    let pivots = eliminate(&mut aug, None);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![m.field.zero(); m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, m.cols).clone();
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, n)
    }

    fn qm(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(Field::Rational, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_is_its_own_rref() {
        let id = Matrix::identity(Field::Rational, 3);
        let r = rref(&id).unwrap();
        assert_eq!(r.echelon, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn zero_one_by_one() {
        let z = Matrix::zeros(Field::Rational, 1, 1);
        let r = rref(&z).unwrap();
        assert_eq!(r.echelon, z);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn mixed_fields_rejected() {
        let rows = vec![vec![q(1), Scalar::from_i64(Field::Prime(5), 1)]];
        assert_eq!(Matrix::from_rows(Field::Rational, rows), Err(Error::FieldMismatch));
        let mut m = Matrix::zeros(Field::Rational, 1, 2);
        m.set(0, 1, Scalar::from_i64(Field::Prime(3), 2));
        assert_eq!(rref(&m), Err(Error::FieldMismatch));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(Field::Rational, 4)).unwrap().is_empty());
        let k = kernel_basis(&Matrix::zeros(Field::Rational, 2, 2)).unwrap();
        assert_eq!(k, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        let k = kernel_basis(&qm(&[&[1, 1]])).unwrap();
        assert_eq!(k, vec![vec![q(-1), q(1)]]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![q(3), q(-2), q(7)];
        assert_eq!(solve_particular(&Matrix::identity(Field::Rational, 3), &b).unwrap(), Some(b));
        let z = Matrix::zeros(Field::Rational, 2, 2);
        assert_eq!(solve_particular(&z, &[q(1), q(0)]).unwrap(), None);
        let m = qm(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve_particular(&m, &[q(1), q(2)]).unwrap(), Some(vec![q(1), q(0)]));
        assert!(matches!(
            solve_particular(&m, &[q(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Prime(7);
        let a = Scalar::from_i64(f, 3);
        assert_eq!(&a * &a.inv().unwrap(), f.one());
        assert_eq!(Scalar::from_i64(f, -1), Scalar::from_i64(f, 6));
        assert_eq!(Scalar::parse(f, "1/2").unwrap(), Scalar::from_i64(f, 4));
        assert_eq!(Scalar::parse(Field::Rational, "-4/6").unwrap().to_string(), "-2/3");
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(Field::parse("Q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("Zp:5").unwrap(), Field::Prime(5));
        assert!(Field::parse("Zp:6").is_err());
        assert_eq!(Field::Prime(5).to_string(), "Zp:5");
    }
}
