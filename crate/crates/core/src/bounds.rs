//! Effective facet and rank bounds driven by a registry of analytic
//! constants.
//!
//! Real arithmetic here runs at 256-bit precision with an explicit rounding
//! margin: bound-facing floors round a hair upward and ceilings a hair
//! downward, so representation error can only loosen a bound, never
//! tighten it. Every constant is a decimal string with a stated provenance
//! and a safe rounding direction.

use std::collections::BTreeMap;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::Result;

pub const PRECISION: u32 = 256;

/// Decimal digits used when a float value is reported.
pub const REPORT_DIGITS: usize = 30;

pub const REGISTRY_SCHEMA: &str = "vinberg-constants/1";

/// Absorbs 256-bit representation error before a floor or ceiling. Any
/// honest computation is far more accurate than this.
fn margin() -> Float {
    Float::with_val(PRECISION, 1e-20f64)
}

pub fn float_str(x: &Float) -> String {
    x.to_string_radix(10, Some(REPORT_DIGITS))
}

/// `floor(x + margin)`, clamped at zero. A value a hair below an integer
/// counts as that integer.
pub fn conservative_floor(x: &Float) -> Result<u64> {
    round_clamped(x, true)
}

/// `ceil(x - margin)`, clamped at zero.
pub fn conservative_ceil(x: &Float) -> Result<u64> {
    round_clamped(x, false)
}

fn round_clamped(x: &Float, floor: bool) -> Result<u64> {
    if !x.is_finite() {
        return Err(Error::Invalid("bound is not finite".into()));
    }
    let shifted = if floor {
        Float::with_val(PRECISION, x + margin()).floor()
    } else {
        Float::with_val(PRECISION, x - margin()).ceil()
    };
    let int = shifted
        .to_integer()
        .ok_or_else(|| Error::Invalid("bound is not representable".into()))?;
    if int < 0 {
        return Ok(0);
    }
    int.to_u64()
        .ok_or_else(|| Error::Invalid("bound exceeds u64".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstEntry {
    pub value: String,
    pub provenance: String,
}

/// Named constants for one hyperbolic dimension `n`.
///
/// The facet bound consumes `margulis`, `dobrowolski`,
/// `finite_subgroup_order`, `bieberbach_index`, and `lattice_density`; the
/// rank bound consumes `max_simplex_volume` and `barycentric_count`; the
/// optional `covolume_cap` feeds the automatic facet cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsRegistry {
    pub n: usize,
    constants: BTreeMap<String, ConstEntry>,
}

impl ConstantsRegistry {
    pub fn new(n: usize) -> Self {
        ConstantsRegistry { n, constants: BTreeMap::new() }
    }

    pub fn set(&mut self, name: &str, value: &str, provenance: &str) {
        self.constants.insert(
            name.to_string(),
            ConstEntry { value: value.to_string(), provenance: provenance.to_string() },
        );
    }

    pub fn entry(&self, name: &str) -> Option<&ConstEntry> {
        self.constants.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.constants.keys().map(|s| s.as_str())
    }

    pub fn get(&self, name: &str) -> Result<Float> {
        let entry = self.constants.get(name).ok_or_else(|| Error::MissingConstants {
            n: self.n,
            missing: vec![name.to_string()],
        })?;
        parse_float(&entry.value).ok_or_else(|| {
            Error::Invalid(format!("constant {name} is not a number: {}", entry.value))
        })
    }

    fn require_positive(&self, name: &str) -> Result<Float> {
        let f = self.get(name)?;
        if f.is_sign_positive() && !f.is_zero() {
            Ok(f)
        } else {
            Err(Error::Invalid(format!("constant {name} must be positive")))
        }
    }

    /// Like `get` for several names; all absentees are reported at once.
    fn require(&self, names: &[&str]) -> Result<Vec<Float>> {
        let missing: Vec<String> = names
            .iter()
            .filter(|n| !self.constants.contains_key(**n))
            .map(|n| n.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingConstants { n: self.n, missing });
        }
        names.iter().map(|n| self.require_positive(n)).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("constants registry: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("constants registry must be a JSON object".into()))?;
        if let Some(schema) = obj.get("schema") {
            if schema.as_str() != Some(REGISTRY_SCHEMA) {
                return Err(Error::Parse(format!(
                    "unsupported registry schema {schema}, expected \"{REGISTRY_SCHEMA}\""
                )));
            }
        }
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("constants registry needs an integer field n".into()))?
            as usize;
        let cons = obj
            .get("constants")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("constants registry needs a constants object".into()))?;
        let mut reg = ConstantsRegistry::new(n);
        for (name, entry) in cons {
            let value = entry
                .get("value")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("constant {name} needs a string value")))?;
            if parse_float(value).is_none() {
                return Err(Error::Parse(format!("constant {name} is not a number: {value}")));
            }
            let provenance = entry
                .get("provenance")
                .and_then(Value::as_str)
                .unwrap_or("");
            reg.set(name, value, provenance);
        }
        Ok(reg)
    }

    pub fn to_json(&self) -> Value {
        let mut cons = Map::new();
        for (name, entry) in &self.constants {
            cons.insert(
                name.clone(),
                json!({ "value": entry.value, "provenance": entry.provenance }),
            );
        }
        json!({ "schema": REGISTRY_SCHEMA, "n": self.n, "constants": cons })
    }

    pub fn canonical_string(&self) -> String {
        self.to_json().to_string()
    }

    /// Built-in registry for dimension `n`, if one ships with the crate.
    pub fn builtin_default(n: usize) -> Option<Self> {
        let text = match n {
            2 => include_str!("../data/registry_n2.json"),
            3 => include_str!("../data/registry_n3.json"),
            _ => return None,
        };
        Some(Self::from_json(text).expect("built-in registry is valid"))
    }

    /// Registry with transparent toy values whose whole chain is checkable
    /// by hand: separation 2 asinh(1) makes the half-radius ball volume
    /// exactly 2 pi (sqrt(2) - 1).
    pub fn toy_n2() -> Self {
        let mut reg = ConstantsRegistry::new(2);
        let two_asinh_one = Float::with_val(PRECISION, 1).asinh() * 2u32;
        reg.set("margulis", &float_str(&two_asinh_one), "toy: 2 asinh(1)");
        reg.set("dobrowolski", "10", "toy: large, so the margulis term wins the minimum");
        reg.set("finite_subgroup_order", "1", "toy");
        reg.set("bieberbach_index", "1", "toy");
        reg.set("lattice_density", "1", "toy");
        reg.set(
            "max_simplex_volume",
            "3.14159265358979323846264338328",
            "toy: pi rounded up",
        );
        reg.set("barycentric_count", "1", "toy");
        reg.set("covolume_cap", "10", "toy");
        reg
    }
}

fn parse_float(s: &str) -> Option<Float> {
    let inc = Float::parse(s).ok()?;
    let f = Float::with_val(PRECISION, inc);
    if f.is_finite() {
        Some(f)
    } else {
        None
    }
}

fn factorial(k: u32) -> Integer {
    let mut out = Integer::from(1);
    for i in 2..=k {
        out *= i;
    }
    out
}

fn binomial(n: u32, k: u32) -> Integer {
    let mut out = Integer::from(1);
    for i in 0..k {
        out *= n - i;
        out /= i + 1;
    }
    out
}

/// Surface area of the unit sphere in euclidean n-space,
/// `2 pi^{n/2} / Gamma(n/2)`.
pub fn sphere_surface(n: usize) -> Result<Float> {
    if n == 0 {
        return Err(Error::Invalid("sphere surface needs n >= 1".into()));
    }
    let pi = Float::with_val(PRECISION, Constant::Pi);
    let m = (n / 2) as u32;
    if n.is_multiple_of(2) {
        // 2 pi^m / (m-1)!
        let num = pi.pow(m) * 2u32;
        Ok(num / Float::with_val(PRECISION, factorial(m - 1)))
    } else {
        // 2 pi^m 4^m m! / (2m)!
        let num = pi.pow(m) * 2u32
            * Float::with_val(PRECISION, Integer::from(4).pow(m) * factorial(m));
        Ok(num / Float::with_val(PRECISION, factorial(2 * m)))
    }
}

/// Volume of the hyperbolic ball of radius `r` in dimension `n >= 2`:
/// `Vol(S^{n-1}) * integral of sinh^{n-1} over [0, r]`, with the integrand
/// expanded into exponentials and integrated term by term.
pub fn ball_volume(n: usize, r: &Float) -> Result<Float> {
    if n < 2 {
        return Err(Error::Invalid("ball volume needs n >= 2".into()));
    }
    if !r.is_finite() || !r.is_sign_positive() || r.is_zero() {
        return Err(Error::Invalid("ball volume needs a radius r > 0".into()));
    }
    let big_n = (n - 1) as u32;
    let mut integral = Float::with_val(PRECISION, 0);
    for k in 0..=big_n {
        let m = big_n as i64 - 2 * (k as i64);
        let coeff = Float::with_val(PRECISION, binomial(big_n, k));
        let term = if m == 0 {
            r.clone()
        } else {
            let mf = Float::with_val(PRECISION, m);
            let e = Float::with_val(PRECISION, r * &mf).exp();
            (e - 1u32) / mf
        };
        if k % 2 == 0 {
            integral += coeff * term;
        } else {
            integral -= coeff * term;
        }
    }
    integral /= Float::with_val(PRECISION, Integer::from(1) << big_n);
    Ok(sphere_surface(n)? * integral)
}

/// The packing separation `d`: the smaller of the geometric and the
/// arithmetic displacement bounds.
pub fn min_separation(reg: &ConstantsRegistry) -> Result<Float> {
    let vals = reg.require(&["margulis", "dobrowolski"])?;
    let mut it = vals.into_iter();
    let m = it.next().unwrap();
    let d = it.next().unwrap();
    Ok(if m < d { m } else { d })
}

/// Displacement bound of Dobrowolski type for a field of degree `deg >= 3`:
/// `coeff * (log log deg / log deg)^3`.
pub fn dobrowolski_default(coeff: &Float, deg: u32) -> Result<Float> {
    if deg < 3 {
        return Err(Error::Invalid("the displacement estimate needs degree >= 3".into()));
    }
    let ld = Float::with_val(PRECISION, deg).ln();
    let lld = ld.clone().ln();
    let ratio = lld / ld;
    Ok(Float::with_val(PRECISION, coeff * &ratio.pow(3u32)))
}

/// Every intermediate of the facet bound, for reporting.
#[derive(Clone, Debug)]
pub struct BoundBreakdown {
    pub n: usize,
    pub deg: u32,
    pub vol: Float,
    /// d: the packing separation.
    pub separation: Float,
    /// Volume of the ball of radius d/2.
    pub ball: Float,
    /// Index term m_n * deg^{n(n+1)}.
    pub f_nk: Float,
    /// Packing count: vol * f_nk / ball.
    pub v1: Float,
    /// Crystallographic count: vol * (n-1) * bieberbach / density.
    pub v2: Float,
    /// (2(n-1)/n) (v1 + v2).
    pub total: Float,
    /// Conservative floor of `total`.
    pub f_bound: u64,
}

/// Upper bound on the number of facets of a fundamental Coxeter polyhedron
/// of covolume at most `vol`, for a ground field of degree `deg`.
pub fn facet_upper_bound(
    reg: &ConstantsRegistry,
    deg: u32,
    vol: &Float,
) -> Result<BoundBreakdown> {
    if deg == 0 {
        return Err(Error::Invalid("field degree must be at least 1".into()));
    }
    if !vol.is_finite() || !vol.is_sign_positive() || vol.is_zero() {
        return Err(Error::Invalid("covolume must be positive".into()));
    }
    let n = reg.n;
    if n < 2 {
        return Err(Error::Invalid("facet bounds need n >= 2".into()));
    }
    let separation = min_separation(reg)?;
    let half = Float::with_val(PRECISION, &separation / 2u32);
    let ball = ball_volume(n, &half)?;
    let vals = reg.require(&["finite_subgroup_order", "bieberbach_index", "lattice_density"])?;
    let mut it = vals.into_iter();
    let m_n = it.next().unwrap();
    let bieberbach = it.next().unwrap();
    let density = it.next().unwrap();
    let exp = (n * (n + 1)) as u32;
    let f_nk = m_n * Float::with_val(PRECISION, Integer::from(deg).pow(exp));
    let v1 = Float::with_val(PRECISION, vol * &f_nk) / &ball;
    let v2 = Float::with_val(PRECISION, vol * &bieberbach) * (n as u32 - 1) / density;
    let total =
        Float::with_val(PRECISION, &v1 + &v2) * 2u32 * (n as u32 - 1) / (n as u32);
    let f_bound = conservative_floor(&total)?;
    Ok(BoundBreakdown {
        n,
        deg,
        vol: vol.clone(),
        separation,
        ball,
        f_nk,
        v1,
        v2,
        total,
        f_bound,
    })
}

/// Lower bound on the number of walls of a polyhedron of volume `vol`:
/// a chamber with F walls splits into at most `barycentric_count * F`
/// simplices of volume at most `max_simplex_volume` each.
pub fn rank_lower_bound(reg: &ConstantsRegistry, vol: &Float) -> Result<u64> {
    if !vol.is_finite() || vol.is_sign_negative() {
        return Err(Error::Invalid("volume must be nonnegative".into()));
    }
    let vals = reg.require(&["max_simplex_volume", "barycentric_count"])?;
    let mut it = vals.into_iter();
    let omega = it.next().unwrap();
    let count = it.next().unwrap();
    let x = Float::with_val(PRECISION, vol / &omega) / count;
    conservative_ceil(&x)
}

/// Covolume of a 2-dimensional chamber from its exact Gauss-Bonnet
/// coefficient: `area * pi`.
pub fn covolume_from_area(area: &num_rational::BigRational) -> Float {
    let num = Float::with_val(
        PRECISION,
        Float::parse(area.numer().to_string()).expect("numerator is an integer"),
    );
    let den = Float::with_val(
        PRECISION,
        Float::parse(area.denom().to_string()).expect("denominator is an integer"),
    );
    let pi = Float::with_val(PRECISION, Constant::Pi);
    num / den * pi
}

/// Facet cap derived from the registry's `covolume_cap`.
pub fn auto_facet_cap(reg: &ConstantsRegistry, deg: u32) -> Result<u64> {
    if reg.entry("covolume_cap").is_none() {
        return Err(Error::MissingConstants {
            n: reg.n,
            missing: vec!["covolume_cap".to_string()],
        });
    }
    let vol = reg.require_positive("covolume_cap")?;
    Ok(facet_upper_bound(reg, deg, &vol)?.f_bound)
}
