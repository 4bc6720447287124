//! Roots: primitive crystallographic vectors and their exact enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::error::Error;
use crate::forms::{ControlVector, LorentzVector, QuadraticForm};
use crate::ratmat::{Rat, RatMat};
use crate::Result;

/// A root: primitive integer vector `e` with `(e,e) > 0` whose reflection
/// preserves the lattice.
///
/// The derived ordering is lexicographic in `e`; for a fixed form and
/// control vector that determines `norm` and `level` too.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    pub e: LorentzVector,
    /// `(e, e)`.
    pub norm: BigInt,
    /// `-(e, u0)`, nonnegative after normalization.
    pub level: BigInt,
}

/// Scale `v` to a primitive vector, orient it so `(e, u0) <= 0`, and check
/// it has positive norm.
pub fn normalize(form: &QuadraticForm, u0: &ControlVector, v: &LorentzVector) -> Result<Root> {
    if v.dim() != form.dim() {
        return Err(Error::Shape(format!(
            "vector of length {} against form of dimension {}",
            v.dim(),
            form.dim()
        )));
    }
    if v.is_zero() {
        return Err(Error::NotRoot("zero vector".into()));
    }
    let mut w = v.0.clone();
    arith::make_primitive(&mut w);
    let mut e = LorentzVector(w);
    let s = form.norm(&e);
    if !s.is_positive() {
        return Err(Error::NotRoot(format!("(e,e) = {s} must be positive")));
    }
    let mut t = form.inner(&e, u0.vector());
    if t.is_positive() {
        e = e.neg();
        t = -t;
    }
    Ok(Root { e, norm: s, level: -t })
}

/// Crystallographic condition: `(e,e)` divides `2 (G e)_i` for every `i`.
///
/// Equivalent to the reflection in `e` being an integral matrix. Vectors of
/// nonpositive norm are not roots and return `false`.
pub fn is_crystallographic(form: &QuadraticForm, e: &LorentzVector) -> bool {
    if e.dim() != form.dim() {
        return false;
    }
    let s = form.norm(e);
    if !s.is_positive() {
        return false;
    }
    form.apply(e)
        .iter()
        .all(|gi| (BigInt::from(2) * gi % &s).is_zero())
}

/// Exponent of the discriminant group `L*/L`: `|det G|` divided by the gcd
/// of the adjugate entries.
pub fn discriminant_exponent(form: &QuadraticForm) -> Result<BigInt> {
    let gm = form.gram_ratmat();
    let det = gm.det();
    if det.is_zero() {
        return Err(Error::Degenerate("singular Gram matrix".into()));
    }
    let inv = gm.inverse().expect("nonsingular matrix inverts");
    let mut g = BigInt::zero();
    for i in 0..form.dim() {
        for j in 0..form.dim() {
            let adj = &det * inv.at(i, j);
            debug_assert!(adj.is_integer());
            g = g.gcd(&adj.to_integer());
        }
    }
    Ok(det.to_integer().abs() / g)
}

/// Norms a crystallographic root can have: the positive divisors of `2 l`
/// where `l` is the discriminant exponent.
///
/// For a root `e` of norm `s`, `(2/s) e` lies in the dual lattice, so
/// `(2l/s) e` is integral; primitivity of `e` forces `s | 2l`. The list is
/// a superset of the realized norms, sorted ascending.
pub fn admissible_norms(form: &QuadraticForm) -> Result<Vec<BigInt>> {
    let l = discriminant_exponent(form)?;
    Ok(divisors(&(BigInt::from(2) * l)))
}

fn divisors(m: &BigInt) -> Vec<BigInt> {
    debug_assert!(m.is_positive());
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= *m {
        if (m % &d).is_zero() {
            out.push(d.clone());
            out.push(m / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// All roots with `(e,e) = s` and `(e, u0) = -a`, sorted lexicographically.
///
/// The affine slice `(x, u0) = -a` carries a positive definite quadratic,
/// so the solutions form a finite ellipsoid shell; they are enumerated with
/// an exact rational Fincke-Pohst recursion. Candidates failing
/// integrality, primitivity, or the crystallographic condition are dropped.
pub fn enumerate_roots_at(
    form: &QuadraticForm,
    u0: &ControlVector,
    s: &BigInt,
    a: &BigInt,
) -> Result<Vec<Root>> {
    if !s.is_positive() {
        return Err(Error::Invalid(format!("root norm must be positive, got {s}")));
    }
    if a.is_negative() {
        return Err(Error::Invalid(format!("level must be nonnegative, got {a}")));
    }
    let dim = form.dim();
    let w = form.apply(u0.vector());
    // Pivot coordinate to eliminate: largest |w_i|, ties to the lowest index.
    let mut p = 0;
    for i in 1..dim {
        if w[i].abs() > w[p].abs() {
            p = i;
        }
    }
    if w[p].is_zero() {
        return Err(Error::Degenerate("G u0 = 0".into()));
    }
    let free: Vec<usize> = (0..dim).filter(|&i| i != p).collect();
    let m = dim - 1;
    let wp = Rat::from_integer(w[p].clone());
    let alpha = Rat::from_integer(-a.clone()) / &wp;
    let beta: Vec<Rat> = free
        .iter()
        .map(|&k| -Rat::from_integer(w[k].clone()) / &wp)
        .collect();
    let g = |i: usize, j: usize| Rat::from_integer(form.gram()[i][j].clone());

    // (x,x) as a quadratic in the free coordinates y: y^T A y + 2 b.y + c0.
    let mut amat = RatMat::zero(m, m);
    for k in 0..m {
        for l in 0..m {
            let mut v = g(free[k], free[l]);
            v += g(free[k], p) * &beta[l];
            v += g(p, free[l]) * &beta[k];
            v += g(p, p) * &beta[k] * &beta[l];
            *amat.at_mut(k, l) = v;
        }
    }
    let b: Vec<Rat> = (0..m)
        .map(|k| &alpha * (g(free[k], p) + g(p, p) * &beta[k]))
        .collect();
    let c0 = g(p, p) * &alpha * &alpha;

    let (lmat, dvec) = amat
        .ldl()
        .ok_or_else(|| Error::Degenerate("slice quadratic is not positive definite".into()))?;
    let neg_b: Vec<Rat> = b.iter().map(|x| -x).collect();
    let mu = amat.solve(&neg_b).expect("positive definite system is solvable");
    // Shell radius: (x,x) = (y-mu)^T A (y-mu) + c0 + b.mu.
    let mut radius = Rat::from_integer(s.clone()) - &c0;
    for k in 0..m {
        radius -= &b[k] * &mu[k];
    }
    if radius.is_negative() {
        return Ok(Vec::new());
    }

    let mut ys = Vec::new();
    let mut ybuf = vec![BigInt::zero(); m];
    fp_shell(&lmat, &dvec, &mu, m as isize - 1, &mut ybuf, radius, &mut ys);

    let mut out = Vec::new();
    for y in ys {
        let mut xp = alpha.clone();
        for k in 0..m {
            xp += &beta[k] * Rat::from_integer(y[k].clone());
        }
        if !xp.is_integer() {
            continue;
        }
        let mut x = vec![BigInt::zero(); dim];
        x[p] = xp.to_integer();
        for k in 0..m {
            x[free[k]] = y[k].clone();
        }
        if !arith::is_primitive(&x) {
            continue;
        }
        let e = LorentzVector(x);
        debug_assert_eq!(form.norm(&e), *s);
        debug_assert_eq!(form.inner(&e, u0.vector()), -a.clone());
        if !is_crystallographic(form, &e) {
            continue;
        }
        out.push(Root { e, norm: s.clone(), level: a.clone() });
    }
    out.sort();
    Ok(out)
}

/// Fincke-Pohst over `A = L D L^T`: integer points with
/// `(y - mu)^T A (y - mu) = rem` exactly (shell, not ball).
fn fp_shell(
    l: &RatMat,
    d: &[Rat],
    mu: &[Rat],
    i: isize,
    y: &mut Vec<BigInt>,
    rem: Rat,
    out: &mut Vec<Vec<BigInt>>,
) {
    if i < 0 {
        if rem.is_zero() {
            out.push(y.clone());
        }
        return;
    }
    let i = i as usize;
    let mut sigma = Rat::zero();
    for j in i + 1..mu.len() {
        if !l.at(j, i).is_zero() {
            sigma += l.at(j, i) * (Rat::from_integer(y[j].clone()) - &mu[j]);
        }
    }
    let c = &mu[i] - &sigma;
    let qq = &rem / &d[i];
    let lo = ceil_c_minus_sqrt(&c, &qq);
    let hi = floor_c_plus_sqrt(&c, &qq);
    let mut yi = lo;
    while yi <= hi {
        let t = Rat::from_integer(yi.clone()) - &c;
        let used = &t * &t * &d[i];
        let next = &rem - used;
        if !next.is_negative() {
            y[i] = yi.clone();
            fp_shell(l, d, mu, i as isize - 1, y, next, out);
        }
        yi += 1;
    }
}

/// `floor(c + sqrt(q))` for rationals with `q >= 0`, computed exactly.
fn floor_c_plus_sqrt(c: &Rat, q: &Rat) -> BigInt {
    debug_assert!(!q.is_negative());
    let le = |v: &BigInt| {
        let diff = Rat::from_integer(v.clone()) - c;
        !diff.is_positive() || &diff * &diff <= *q
    };
    // Start just above the answer, walk down with the exact predicate.
    let mut v = c.floor().to_integer() + q.ceil().to_integer().sqrt() + 2;
    while !le(&v) {
        v -= 1;
    }
    v
}

fn ceil_c_minus_sqrt(c: &Rat, q: &Rat) -> BigInt {
    -floor_c_plus_sqrt(&-c.clone(), q)
}
