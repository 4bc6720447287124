//! Brute-force reference implementations for cross-checking: root
//! enumeration by exhaustive box search and extreme rays by subset
//! enumeration. Everything here favors obvious correctness over speed and
//! is only meant for test-sized inputs.

// Index loops walk several parallel matrices at once; iterator chains would
// obscure the subscripts the math is written in.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Rat = BigRational;

fn rat_i(v: i128) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Gauss-Jordan elimination; returns the pivot columns.
fn rref(mat: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].clone();
        for x in &mut mat[r] {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &mat[r][j];
                    mat[i][j] = &mat[i][j] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

fn rank(mut mat: Vec<Vec<Rat>>) -> usize {
    rref(&mut mat).len()
}

/// Basis of the right nullspace of `mat` (with `cols` columns), one basis
/// vector per free column.
fn nullspace(mut mat: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    let pivots = rref(&mut mat);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -mat[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

fn inverse(mat: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<Rat>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn primitive(v: &[Rat]) -> Vec<BigInt> {
    let mut mult = BigInt::one();
    for x in v {
        mult = mult.lcm(x.denom());
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * &mult / x.denom()).collect();
    let mut g = BigInt::zero();
    for x in &out {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut out {
            *x = &*x / &g;
        }
    }
    out
}

fn gram_apply(gram: &[Vec<i64>], x: &[i64]) -> Vec<i128> {
    gram.iter()
        .map(|row| row.iter().zip(x).map(|(g, xi)| *g as i128 * *xi as i128).sum())
        .collect()
}

fn inner(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> i128 {
    gram_apply(gram, x).iter().zip(y).map(|(gx, yi)| gx * *yi as i128).sum()
}

fn gcd_i64(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, x| acc.gcd(x))
}

/// All primitive crystallographic roots of norm `s` at level `a`, found by
/// exhaustive search of the coordinate box that the positive definite
/// majorant `|q| G + 2 (G u0)(G u0)^T` cuts out.
///
/// On the set `(x,x) = s, (x,u0) = -a` that majorant evaluates to the
/// constant `|q| s + 2 a^2`, so every solution lies inside the box.
pub fn enumerate_roots_box(gram: &[Vec<i64>], u0: &[i64], s: i64, a: i64) -> Vec<Vec<i64>> {
    let dim = gram.len();
    assert!(dim > 0 && gram.iter().all(|r| r.len() == dim));
    assert_eq!(u0.len(), dim);
    assert!(s > 0 && a >= 0);
    let q = inner(gram, u0, u0);
    assert!(q < 0, "control vector must be timelike");
    let abs_q = -q;
    let w = gram_apply(gram, u0);
    let mut majorant = vec![vec![Rat::zero(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            majorant[i][j] = rat_i(abs_q * gram[i][j] as i128 + 2 * w[i] * w[j]);
        }
    }
    let inv = inverse(&majorant).expect("majorant is positive definite");
    let radius = rat_i(abs_q * s as i128 + 2 * (a as i128) * (a as i128));
    let mut bounds = Vec::with_capacity(dim);
    for i in 0..dim {
        let limit = &radius * &inv[i][i];
        let mut b: i64 = 0;
        while rat_i((b as i128 + 1) * (b as i128 + 1)) <= limit {
            b += 1;
        }
        bounds.push(b);
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; dim];
    box_scan(gram, u0, s, a, &bounds, &mut x, 0, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn box_scan(
    gram: &[Vec<i64>],
    u0: &[i64],
    s: i64,
    a: i64,
    bounds: &[i64],
    x: &mut Vec<i64>,
    i: usize,
    out: &mut Vec<Vec<i64>>,
) {
    if i == x.len() {
        if inner(gram, x, x) != s as i128 {
            return;
        }
        if inner(gram, x, u0) != -(a as i128) {
            return;
        }
        if gcd_i64(x) != 1 {
            return;
        }
        let gx = gram_apply(gram, x);
        if gx.iter().any(|v| (2 * v) % s as i128 != 0) {
            return;
        }
        out.push(x.clone());
        return;
    }
    for v in -bounds[i]..=bounds[i] {
        x[i] = v;
        box_scan(gram, u0, s, a, bounds, x, i + 1, out);
    }
    x[i] = 0;
}

fn for_each_subset<F: FnMut(&[usize])>(m: usize, k: usize, f: &mut F) {
    let mut idx = Vec::with_capacity(k);
    subset_rec(m, k, 0, &mut idx, f);
}

fn subset_rec<F: FnMut(&[usize])>(
    m: usize,
    k: usize,
    start: usize,
    idx: &mut Vec<usize>,
    f: &mut F,
) {
    if idx.len() == k {
        f(idx);
        return;
    }
    let remaining = k - idx.len();
    for i in start..=m.saturating_sub(remaining) {
        idx.push(i);
        subset_rec(m, k, i + 1, idx, f);
        idx.pop();
    }
}

fn reduce_mod(v: &[Rat], lineality: &[Vec<Rat>], pivots: &[usize]) -> Vec<Rat> {
    let mut out = v.to_vec();
    for (row, &p) in pivots.iter().enumerate() {
        if out[p].is_zero() {
            continue;
        }
        let f = out[p].clone();
        for (o, l) in out.iter_mut().zip(&lineality[row]) {
            let sub = &f * l;
            *o = &*o - sub;
        }
    }
    out
}

/// Extreme rays and lineality of `{x : h . x <= 0}` by trying every
/// subset of constraints of the right rank, in the same canonical
/// representation the main library uses: lineality as the reduced row
/// echelon basis scaled to primitive integers, rays reduced modulo the
/// lineality, primitive, satisfying all constraints, sorted.
pub fn extreme_rays_subsets(
    ambient: usize,
    halfspaces: &[Vec<i64>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    assert!(ambient > 0);
    assert!(halfspaces.iter().all(|h| h.len() == ambient));
    let a_mat: Vec<Vec<Rat>> = halfspaces
        .iter()
        .map(|h| h.iter().map(|&v| rat_i(v as i128)).collect())
        .collect();
    let k = rank(a_mat.clone());
    let mut lin = nullspace(a_mat.clone(), ambient);
    let lin_pivots = rref(&mut lin);
    let lineality: Vec<Vec<BigInt>> = lin.iter().map(|row| primitive(row)).collect();

    let mut rays = std::collections::BTreeSet::new();
    if k >= 1 {
        for_each_subset(halfspaces.len(), k - 1, &mut |subset| {
            let sub_mat: Vec<Vec<Rat>> = subset.iter().map(|&i| a_mat[i].clone()).collect();
            let null = nullspace(sub_mat, ambient);
            if null.len() != lin.len() + 1 {
                return;
            }
            let dir = null
                .iter()
                .map(|b| reduce_mod(b, &lin, &lin_pivots))
                .find(|r| r.iter().any(|x| !x.is_zero()));
            let Some(dir) = dir else { return };
            let v = primitive(&dir);
            let dots: Vec<i32> = halfspaces
                .iter()
                .map(|h| {
                    let d: BigInt = h.iter().zip(&v).map(|(hi, vi)| BigInt::from(*hi) * vi).sum();
                    match d.sign() {
                        num_bigint::Sign::Minus => -1,
                        num_bigint::Sign::NoSign => 0,
                        num_bigint::Sign::Plus => 1,
                    }
                })
                .collect();
            if dots.iter().all(|&d| d <= 0) {
                rays.insert(v);
            } else if dots.iter().all(|&d| d >= 0) {
                rays.insert(v.iter().map(|x| -x).collect());
            }
        });
    }
    (rays.into_iter().collect(), lineality)
}
