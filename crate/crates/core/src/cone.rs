//! Exact polyhedral cones: double description, finite-volume test, facet
//! recovery.
//!
//! A chamber after accepting roots `e_1..e_k` is the cone
//! `{x : (x, e_i) <= 0}` with constraint rows `c_i = G e_i`. Everything here
//! is rational-exact; the output description is canonical (independent of
//! constraint order) up to the stored constraint indexing.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::Error;
use crate::forms::{ControlVector, LorentzVector, QuadraticForm};
use crate::ratmat::{Rat, RatMat};
use crate::roots::Root;
use crate::Result;

/// Minimal generator description of `{x : c_j . x <= 0 for all j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDescription {
    pub ambient: usize,
    /// The constraint rows, in input order.
    pub halfspaces: Vec<Vec<BigInt>>,
    /// Extreme rays: primitive integer vectors reduced modulo the lineality
    /// space, oriented to satisfy the constraints, sorted lexicographically.
    pub rays: Vec<Vec<BigInt>>,
    /// Canonical basis of the lineality space: primitive integer rows of
    /// the reduced row echelon form.
    pub lineality: Vec<Vec<BigInt>>,
    /// For each ray, the sorted indices of halfspaces tight at it.
    pub facet_incidence: Vec<Vec<usize>>,
}

/// Compute the extreme rays and lineality space of a halfspace cone by the
/// incremental double description method.
pub fn extreme_rays(ambient: usize, halfspaces: &[Vec<BigInt>]) -> Result<ConeDescription> {
    if ambient == 0 {
        return Err(Error::Invalid("ambient dimension must be at least 1".into()));
    }
    for (i, h) in halfspaces.iter().enumerate() {
        if h.len() != ambient {
            return Err(Error::Shape(format!(
                "halfspace {i} has length {} in ambient dimension {ambient}",
                h.len()
            )));
        }
    }
    let cons: Vec<Vec<Rat>> = halfspaces.iter().map(|h| rat_vec(h)).collect();

    // Start from the whole space: full lineality, no rays.
    let mut lineality: Vec<Vec<Rat>> = (0..ambient)
        .map(|i| {
            let mut v = vec![Rat::zero(); ambient];
            v[i] = Rat::one();
            v
        })
        .collect();
    let mut rays: Vec<Vec<Rat>> = Vec::new();

    for (k, c) in cons.iter().enumerate() {
        // Lineality absorption: if some lineality direction sees the
        // constraint, split it off as the one new ray.
        if let Some(pos) = lineality.iter().position(|l| !dot(c, l).is_zero()) {
            let mut l0 = lineality.remove(pos);
            let mut d0 = dot(c, &l0);
            if d0.is_positive() {
                for x in l0.iter_mut() {
                    *x = -x.clone();
                }
                d0 = -d0;
            }
            for l in lineality.iter_mut() {
                let dl = dot(c, l);
                if !dl.is_zero() {
                    axpy(l, &(-(&dl / &d0)), &l0);
                }
            }
            for r in rays.iter_mut() {
                let dr = dot(c, r);
                if !dr.is_zero() {
                    axpy(r, &(-(&dr / &d0)), &l0);
                }
            }
            rays.push(l0);
            continue;
        }

        let dots: Vec<Rat> = rays.iter().map(|r| dot(c, r)).collect();
        if dots.iter().all(|d| !d.is_positive()) {
            continue;
        }
        // Tight sets of the current rays against the constraints processed
        // so far; recomputed from scratch to keep the invariants obvious.
        let tight: Vec<Vec<usize>> = rays
            .iter()
            .map(|r| (0..k).filter(|&j| dot(&cons[j], r).is_zero()).collect())
            .collect();
        let lin_dim = lineality.len();
        let mut next: Vec<Vec<Rat>> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !dots[i].is_positive() {
                next.push(r.clone());
            }
        }
        for (pi, p) in rays.iter().enumerate() {
            if !dots[pi].is_positive() {
                continue;
            }
            for (ni, n) in rays.iter().enumerate() {
                if !dots[ni].is_negative() {
                    continue;
                }
                if !adjacent(&cons, &tight[pi], &tight[ni], ambient, lin_dim) {
                    continue;
                }
                // w = (c.p) n - (c.n) p: tight on c, inside the cone.
                let w: Vec<Rat> = n
                    .iter()
                    .zip(p)
                    .map(|(nj, pj)| &dots[pi] * nj - &dots[ni] * pj)
                    .collect();
                next.push(rat_vec(&primitive_int(&w)));
            }
        }
        rays = next;
    }

    // Canonical lineality basis: reduced row echelon form.
    let (lin_rref, lin_pivots) = if lineality.is_empty() {
        (RatMat::zero(0, ambient), Vec::new())
    } else {
        let mut m = RatMat::from_rows(lineality);
        let piv = m.rref_in_place();
        (m, piv)
    };
    let lin_rows: Vec<Vec<BigInt>> = (0..lin_rref.rows)
        .map(|i| primitive_int(lin_rref.row(i)))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();

    // Canonical rays: reduce modulo lineality, make primitive, orient into
    // the cone, sort, dedupe.
    let mut final_rays: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for r in &rays {
        let mut v = r.clone();
        for (row, &pc) in lin_pivots.iter().enumerate() {
            let f = v[pc].clone();
            if !f.is_zero() {
                for j in 0..ambient {
                    let sub = &f * lin_rref.at(row, j);
                    v[j] -= sub;
                }
            }
        }
        let mut iv = primitive_int(&v);
        debug_assert!(iv.iter().any(|x| !x.is_zero()), "extreme ray inside lineality");
        match halfspaces
            .iter()
            .map(|h| dot_int(h, &iv))
            .find(|d| !d.is_zero())
        {
            Some(d) => {
                if d.is_positive() {
                    for x in iv.iter_mut() {
                        *x = -x.clone();
                    }
                }
            }
            None => arith::lex_normalize(&mut iv),
        }
        final_rays.insert(iv);
    }
    let final_rays: Vec<Vec<BigInt>> = final_rays.into_iter().collect();

    let facet_incidence: Vec<Vec<usize>> = final_rays
        .iter()
        .map(|r| {
            (0..halfspaces.len())
                .filter(|&j| dot_int(&halfspaces[j], r).is_zero())
                .collect()
        })
        .collect();
    debug_assert!(final_rays.iter().all(|r| {
        halfspaces.iter().all(|h| !dot_int(h, r).is_positive())
    }));

    Ok(ConeDescription {
        ambient,
        halfspaces: halfspaces.to_vec(),
        rays: final_rays,
        lineality: lin_rows,
        facet_incidence,
    })
}

/// Algebraic adjacency: the common tight constraints must cut a face of
/// exactly dimension `lineality + 2`.
fn adjacent(cons: &[Vec<Rat>], tp: &[usize], tn: &[usize], ambient: usize, lin: usize) -> bool {
    if ambient < lin + 2 {
        return false;
    }
    let need = ambient - lin - 2;
    let common: Vec<usize> = intersect_sorted(tp, tn);
    if common.len() < need {
        return false;
    }
    if need == 0 {
        return true;
    }
    let rows: Vec<Vec<Rat>> = common.iter().map(|&j| cons[j].clone()).collect();
    RatMat::from_rows(rows).rank() == need
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn rat_vec(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `v += f * w`.
fn axpy(v: &mut [Rat], f: &Rat, w: &[Rat]) {
    for (vi, wi) in v.iter_mut().zip(w) {
        let add = f * wi;
        *vi += add;
    }
}

/// Clear denominators and divide by the gcd, preserving direction.
fn primitive_int(v: &[Rat]) -> Vec<BigInt> {
    let mut mult = BigInt::one();
    for x in v {
        mult = mult.lcm(x.denom());
    }
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&mult / x.denom()))
        .collect();
    arith::make_primitive(&mut out);
    out
}

/// How an extreme ray of the chamber cone sits relative to the light cone
/// and the control sheet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayClass {
    /// `(v,v) < 0`, same sheet as the control vector: an ordinary vertex.
    Proper,
    /// `(v,v) = 0`, same sheet: an ideal vertex (cusp).
    Ideal,
    /// Everything else; witnesses infinite volume.
    Spacelike,
}

impl RayClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RayClass::Proper => "proper",
            RayClass::Ideal => "ideal",
            RayClass::Spacelike => "spacelike",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RayInfo {
    pub v: Vec<BigInt>,
    /// `(v, v)`.
    pub vv: BigInt,
    /// `(v, u0)`.
    pub vu0: BigInt,
    pub class: RayClass,
    /// Sorted indices of the roots whose walls are tight at this ray.
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct VertexReport {
    pub rays: Vec<RayInfo>,
    pub lineality_dim: usize,
    pub proper: usize,
    pub ideal: usize,
    pub spacelike: usize,
}

#[derive(Clone, Debug)]
pub struct FiniteVolumeOutcome {
    pub finite: bool,
    pub report: VertexReport,
    pub cone: ConeDescription,
}

/// Decide whether the chamber cut out by `roots` has finite hyperbolic
/// volume: the cone must be pointed and every extreme ray must lie in the
/// closed light cone on the control sheet.
pub fn finite_volume_test(
    form: &QuadraticForm,
    u0: &ControlVector,
    roots: &[Root],
) -> Result<FiniteVolumeOutcome> {
    let halfspaces: Vec<Vec<BigInt>> = roots.iter().map(|r| form.apply(&r.e)).collect();
    let cone = extreme_rays(form.dim(), &halfspaces)?;
    let mut rays = Vec::with_capacity(cone.rays.len());
    let (mut proper, mut ideal, mut spacelike) = (0usize, 0usize, 0usize);
    for (i, v) in cone.rays.iter().enumerate() {
        let lv = LorentzVector(v.clone());
        let vv = form.norm(&lv);
        let vu0 = form.inner(&lv, u0.vector());
        let class = if vv.is_negative() && vu0.is_negative() {
            RayClass::Proper
        } else if vv.is_zero() && vu0.is_negative() {
            RayClass::Ideal
        } else {
            RayClass::Spacelike
        };
        match class {
            RayClass::Proper => proper += 1,
            RayClass::Ideal => ideal += 1,
            RayClass::Spacelike => spacelike += 1,
        }
        rays.push(RayInfo {
            v: v.clone(),
            vv,
            vu0,
            class,
            tight: cone.facet_incidence[i].clone(),
        });
    }
    let finite = cone.lineality.is_empty() && spacelike == 0 && !cone.rays.is_empty();
    Ok(FiniteVolumeOutcome {
        finite,
        report: VertexReport {
            rays,
            lineality_dim: cone.lineality.len(),
            proper,
            ideal,
            spacelike,
        },
        cone,
    })
}

/// Indices of halfspaces that support actual facets: the span of their
/// tight rays plus the lineality space has dimension `ambient - 1`.
pub fn facet_recovery(cone: &ConeDescription) -> Vec<usize> {
    (0..cone.halfspaces.len())
        .filter(|&j| {
            let mut rows: Vec<Vec<Rat>> = cone
                .rays
                .iter()
                .zip(&cone.facet_incidence)
                .filter(|(_, t)| t.binary_search(&j).is_ok())
                .map(|(v, _)| rat_vec(v))
                .collect();
            rows.extend(cone.lineality.iter().map(|v| rat_vec(v)));
            !rows.is_empty() && RatMat::from_rows(rows).rank() == cone.ambient - 1
        })
        .collect()
}
