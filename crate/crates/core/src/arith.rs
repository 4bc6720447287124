//! Small integer helpers shared across the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// gcd of a slice, always nonnegative; zero for an all-zero slice.
pub fn gcd_slice(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
        if g == BigInt::from(1) {
            break;
        }
    }
    g
}

/// Divide every entry by the gcd, making the vector primitive.
///
/// The sign of the vector is preserved; the zero vector is returned as-is.
pub fn make_primitive(v: &mut [BigInt]) {
    let g = gcd_slice(v);
    if g > BigInt::from(1) {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// True if the entries have gcd 1.
pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_slice(v) == BigInt::from(1)
}

/// Sign of the first nonzero entry: `1`, `-1`, or `0` for the zero vector.
pub fn lex_sign(v: &[BigInt]) -> i32 {
    for x in v {
        if x.is_positive() {
            return 1;
        }
        if x.is_negative() {
            return -1;
        }
    }
    0
}

/// Flip the vector so its first nonzero entry is positive.
pub fn lex_normalize(v: &mut [BigInt]) {
    if lex_sign(v) < 0 {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_and_primitive() {
        assert_eq!(gcd_slice(&bi(&[6, -9, 15])), BigInt::from(3));
        assert_eq!(gcd_slice(&bi(&[0, 0])), BigInt::zero());
        let mut v = bi(&[6, -9, 15]);
        make_primitive(&mut v);
        assert_eq!(v, bi(&[2, -3, 5]));
        assert!(is_primitive(&v));
        assert!(!is_primitive(&bi(&[2, 4])));
    }

    #[test]
    fn lex_helpers() {
        assert_eq!(lex_sign(&bi(&[0, -2, 1])), -1);
        assert_eq!(lex_sign(&bi(&[0, 0])), 0);
        let mut v = bi(&[0, -2, 1]);
        lex_normalize(&mut v);
        assert_eq!(v, bi(&[0, 2, -1]));
    }
}
