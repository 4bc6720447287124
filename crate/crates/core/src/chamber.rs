//! Stabilizer roots at the control point and their simple system.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::error::Error;
use crate::forms::{ControlVector, LorentzVector, QuadraticForm};
use crate::roots::{admissible_norms, enumerate_roots_at, Root};
use crate::Result;

/// All roots orthogonal to the control vector, over every admissible norm,
/// sorted lexicographically. This set is a finite crystallographic root
/// system (the control point stabilizer acts on the positive definite
/// complement of `u0`).
pub fn stabilizer_roots(form: &QuadraticForm, u0: &ControlVector) -> Result<Vec<Root>> {
    let mut out = Vec::new();
    for s in admissible_norms(form)? {
        out.extend(enumerate_roots_at(form, u0, &s, &BigInt::zero())?);
    }
    out.sort();
    Ok(out)
}

/// Simple system of a level-0 root set: the lex-positive roots that are not
/// the sum of two lex-positive roots in the set.
///
/// Lex positivity picks a positive system (it is induced by a linear
/// functional separating `v` from `-v`), and in a finite crystallographic
/// root system the indecomposable positive roots are exactly the simple
/// ones. The result is sorted lexicographically and pairwise non-obtuse.
pub fn simple_system(form: &QuadraticForm, roots: &[Root]) -> Result<Vec<Root>> {
    for r in roots {
        if !r.level.is_zero() {
            return Err(Error::Invalid(format!(
                "simple system needs roots orthogonal to the control vector; {} has level {}",
                r.e, r.level
            )));
        }
        if form.norm(&r.e) != r.norm {
            return Err(Error::NotRoot(format!(
                "{} does not have norm {} under this form",
                r.e, r.norm
            )));
        }
    }
    let positive: Vec<&Root> = roots
        .iter()
        .filter(|r| arith::lex_sign(&r.e.0) > 0)
        .collect();
    let members: HashSet<&LorentzVector> = positive.iter().map(|r| &r.e).collect();
    let mut simple: Vec<Root> = Vec::new();
    for r in &positive {
        let decomposable = positive.iter().any(|p| {
            let diff = LorentzVector(
                r.e.0.iter().zip(&p.e.0).map(|(a, b)| a - b).collect(),
            );
            members.contains(&diff)
        });
        if !decomposable {
            simple.push((*r).clone());
        }
    }
    simple.sort();
    for i in 0..simple.len() {
        for j in i + 1..simple.len() {
            debug_assert!(
                !form.inner(&simple[i].e, &simple[j].e).is_positive(),
                "simple system must be pairwise non-obtuse"
            );
        }
    }
    Ok(simple)
}
