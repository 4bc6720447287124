//! Integral quadratic forms, lattice vectors, and reflections.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::arith;
use crate::error::Error;
use crate::ratmat::{Rat, RatMat};
use crate::Result;

/// Integer vector in the ambient lattice `Z^{n+1}`.
///
/// The derived ordering is lexicographic; every canonical listing in this
/// crate sorts by it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LorentzVector(pub Vec<BigInt>);

impl LorentzVector {
    pub fn from_i64(v: &[i64]) -> Self {
        LorentzVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        LorentzVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for LorentzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LorentzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Nondegenerate integral quadratic form given by its symmetric Gram matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    dim: usize,
    gram: Vec<Vec<BigInt>>,
}

impl QuadraticForm {
    /// Build from a symmetric square integer matrix.
    pub fn new(gram: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = gram.len();
        if dim == 0 {
            return Err(Error::Shape("empty Gram matrix".into()));
        }
        if gram.iter().any(|row| row.len() != dim) {
            return Err(Error::Shape(format!(
                "Gram matrix must be square with side {dim}"
            )));
        }
        for i in 0..dim {
            for j in i + 1..dim {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Shape(format!(
                        "Gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(QuadraticForm { dim, gram })
    }

    pub fn from_diagonal(diag: &[i64]) -> Result<Self> {
        Self::from_diagonal_big(diag.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn from_diagonal_big(diag: Vec<BigInt>) -> Result<Self> {
        let dim = diag.len();
        let mut gram = vec![vec![BigInt::zero(); dim]; dim];
        for (i, d) in diag.into_iter().enumerate() {
            gram[i][i] = d;
        }
        Self::new(gram)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn gram_ratmat(&self) -> RatMat {
        RatMat::from_int_rows(&self.gram)
    }

    fn check_dim(&self, v: &LorentzVector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::Shape(format!(
                "vector of length {} against form of dimension {}",
                v.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// `G x` as a plain integer vector.
    pub fn apply(&self, x: &LorentzVector) -> Vec<BigInt> {
        assert_eq!(x.dim(), self.dim, "vector/form dimension mismatch");
        self.gram
            .iter()
            .map(|row| row.iter().zip(&x.0).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Bilinear form `x^T G y`.
    pub fn inner(&self, x: &LorentzVector, y: &LorentzVector) -> BigInt {
        assert_eq!(x.dim(), self.dim, "vector/form dimension mismatch");
        assert_eq!(y.dim(), self.dim, "vector/form dimension mismatch");
        let mut acc = BigInt::zero();
        for (i, row) in self.gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                if !g.is_zero() {
                    acc += g * &x.0[i] * &y.0[j];
                }
            }
        }
        acc
    }

    pub fn norm(&self, x: &LorentzVector) -> BigInt {
        self.inner(x, x)
    }

    pub fn det(&self) -> BigInt {
        let d = self.gram_ratmat().det();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    /// Signature `(positive, negative)`; errors if the form is degenerate.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let (pos, neg, zero) = self.gram_ratmat().inertia();
        if zero > 0 {
            return Err(Error::Degenerate(format!(
                "Gram matrix has rank {} < {}",
                pos + neg,
                self.dim
            )));
        }
        Ok((pos, neg))
    }

    /// Checks the signature is `(n, 1)`.
    pub fn is_admissible(&self) -> Result<()> {
        let (pos, neg) = self.signature()?;
        if neg != 1 || pos != self.dim - 1 {
            return Err(Error::NotLorentzian { pos, neg });
        }
        Ok(())
    }

    /// Reflection of `x` in the mirror of `e`:
    /// `x - (2 (x,e) / (e,e)) e`. Errors if `(e,e) <= 0` or the result is
    /// not integral.
    pub fn reflect(&self, e: &LorentzVector, x: &LorentzVector) -> Result<LorentzVector> {
        self.check_dim(e)?;
        self.check_dim(x)?;
        let s = self.norm(e);
        if !s.is_positive() {
            return Err(Error::NotRoot(format!("(e,e) = {s} must be positive")));
        }
        let t = BigInt::from(2) * self.inner(x, e);
        if (&t % &s) != BigInt::zero() {
            return Err(Error::NotRoot(format!(
                "reflection of {x} in {e} is not integral: 2(x,e) = {t} is not divisible by (e,e) = {s}"
            )));
        }
        let c = t / s;
        Ok(LorentzVector(
            x.0.iter().zip(&e.0).map(|(xi, ei)| xi - &c * ei).collect(),
        ))
    }

    /// Matrix of the reflection in the mirror of `e`, acting on column
    /// vectors. Integral exactly when `e` is crystallographic.
    pub fn reflection_matrix(&self, e: &LorentzVector) -> Result<Vec<Vec<BigInt>>> {
        self.check_dim(e)?;
        let s = self.norm(e);
        if !s.is_positive() {
            return Err(Error::NotRoot(format!("(e,e) = {s} must be positive")));
        }
        let ge = self.apply(e);
        let mut r = vec![vec![BigInt::zero(); self.dim]; self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let t = BigInt::from(2) * &e.0[i] * &ge[j];
                if (&t % &s) != BigInt::zero() {
                    return Err(Error::NotRoot(format!(
                        "reflection in {e} is not an integral matrix: entry ({i},{j})"
                    )));
                }
                let mut v = -(t / &s);
                if i == j {
                    v += 1;
                }
                r[i][j] = v;
            }
        }
        Ok(r)
    }

    /// Parse `{"dim": k, "gram": [[..]]}` or `{"dim": k, "diag": [..]}`.
    ///
    /// Entries may be JSON integers or decimal strings (for values beyond
    /// 2^53). `dim` is optional and only cross-checked when present.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("form JSON: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("form JSON must be an object".into()))?;
        let form = if let Some(gram) = obj.get("gram") {
            let rows = gram
                .as_array()
                .ok_or_else(|| Error::Parse("\"gram\" must be an array of rows".into()))?;
            let mut out = Vec::with_capacity(rows.len());
            for row in rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| Error::Parse("\"gram\" rows must be arrays".into()))?;
                out.push(row.iter().map(parse_int_entry).collect::<Result<Vec<_>>>()?);
            }
            Self::new(out)?
        } else if let Some(diag) = obj.get("diag") {
            let entries = diag
                .as_array()
                .ok_or_else(|| Error::Parse("\"diag\" must be an array".into()))?;
            Self::from_diagonal_big(
                entries.iter().map(parse_int_entry).collect::<Result<Vec<_>>>()?,
            )?
        } else {
            return Err(Error::Parse("form JSON needs a \"gram\" or \"diag\" key".into()));
        };
        if let Some(d) = obj.get("dim") {
            let d = d
                .as_u64()
                .ok_or_else(|| Error::Parse("\"dim\" must be a positive integer".into()))?;
            if d as usize != form.dim {
                return Err(Error::Parse(format!(
                    "\"dim\" is {d} but the matrix has side {}",
                    form.dim
                )));
            }
        }
        Ok(form)
    }

    /// Canonical text used for digests and cache identity.
    pub fn canonical_string(&self) -> String {
        let rows: Vec<String> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("dim={};gram={}", self.dim, rows.join("|"))
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticForm[{}]", self.canonical_string())
    }
}

fn parse_int_entry(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("entry {n} is not an integer; quote big values"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("entry {s:?}: {e}"))),
        other => Err(Error::Parse(format!("entry {other} must be an integer or string"))),
    }
}

/// Primitive timelike vector serving as the base point of the algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlVector {
    v: LorentzVector,
    q: BigInt,
}

impl ControlVector {
    /// Normalizes `v` to a primitive vector and checks `(v,v) < 0`.
    pub fn new(form: &QuadraticForm, v: LorentzVector) -> Result<Self> {
        if v.dim() != form.dim() {
            return Err(Error::Shape(format!(
                "control vector of length {} against form of dimension {}",
                v.dim(),
                form.dim()
            )));
        }
        if v.is_zero() {
            return Err(Error::Invalid("control vector must be nonzero".into()));
        }
        let mut w = v.0;
        arith::make_primitive(&mut w);
        let v = LorentzVector(w);
        let q = form.norm(&v);
        if !q.is_negative() {
            return Err(Error::Invalid(format!(
                "control vector must be timelike: (u0,u0) = {q} >= 0"
            )));
        }
        Ok(ControlVector { v, q })
    }

    pub fn vector(&self) -> &LorentzVector {
        &self.v
    }

    /// `(u0, u0)`, always negative.
    pub fn q(&self) -> &BigInt {
        &self.q
    }
}

/// Rational inner product helper for vectors that live in the same lattice
/// but arrive as rationals (cone rays against integer data).
pub fn inner_rat(form: &QuadraticForm, x: &[Rat], y: &[Rat]) -> Rat {
    assert_eq!(x.len(), form.dim(), "vector/form dimension mismatch");
    assert_eq!(y.len(), form.dim(), "vector/form dimension mismatch");
    let mut acc = Rat::zero();
    for (i, row) in form.gram().iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            if !g.is_zero() {
                acc += Rat::from_integer(g.clone()) * &x[i] * &y[j];
            }
        }
    }
    acc
}
