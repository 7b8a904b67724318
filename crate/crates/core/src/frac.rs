//! Exact rational scalars.
//!
//! `Frac` is a reduced fraction of arbitrary-precision integers with a
//! positive denominator. All exact computation in the crate runs over this
//! type; floating point only enters through the dedicated numeric helpers.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Frac = num_rational::BigRational;

/// `n/d` as an exact fraction.
pub fn frac(n: i64, d: i64) -> Frac {
    Frac::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as an exact fraction.
pub fn fint(n: i64) -> Frac {
    Frac::from_integer(BigInt::from(n))
}

/// Parse "p/q" or "p".
pub fn parse_frac(s: &str) -> Result<Frac> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Frac::new(n, d))
}

/// Canonical "p/q" rendering, denominator always written.
pub fn format_frac(x: &Frac) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn frac_to_f64(x: &Frac) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // fall back to a quotient of lossy conversions for extreme heights
        let n = x.numer().to_f64().unwrap_or(f64::MAX);
        let d = x.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

pub fn frac_to_c64(x: &Frac) -> Complex64 {
    Complex64::new(frac_to_f64(x), 0.0)
}

/// Exact integer square root test.
pub fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational square root, if one exists.
pub fn frac_sqrt_exact(x: &Frac) -> Option<Frac> {
    let n = bigint_sqrt_exact(x.numer())?;
    let d = bigint_sqrt_exact(x.denom())?;
    Some(Frac::new(n, d))
}

/// Write `x = s * t^2` with `s` a squarefree integer ratio of minimal height.
/// Returns `(s, t)`; `s = 1` exactly when `x` is a rational square.
pub fn square_decompose(x: &Frac) -> (Frac, Frac) {
    if x.is_zero() {
        return (Frac::one(), Frac::zero());
    }
    // factor numerator and denominator by trial division; heights here are
    // small (fixture scalars), so this is cheap
    fn split(n: &BigInt) -> (BigInt, BigInt) {
        // n = s * t^2 with s squarefree
        let mut n = n.abs();
        let mut s = BigInt::one();
        let mut t = BigInt::one();
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            let mut k = 0u32;
            while (&n % &p).is_zero() {
                n /= &p;
                k += 1;
            }
            if k % 2 == 1 {
                s *= &p;
            }
            t *= p.pow(k / 2);
            p += 1;
        }
        // leftover n is prime (or 1)
        s *= &n;
        (s, t)
    }
    let (sn, tn) = split(x.numer());
    let (sd, td) = split(x.denom());
    let sign = if x.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    (Frac::new(sign * sn, sd), Frac::new(tn, td))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let x = parse_frac("-6/4").unwrap();
        assert_eq!(x, frac(-3, 2));
        assert_eq!(format_frac(&x), "-3/2");
        assert_eq!(parse_frac("7").unwrap(), fint(7));
        assert!(parse_frac("1/0").is_err());
    }

    #[test]
    fn sqrt_exact() {
        assert_eq!(frac_sqrt_exact(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(frac_sqrt_exact(&frac(2, 1)), None);
        assert_eq!(frac_sqrt_exact(&frac(-4, 1)), None);
    }

    #[test]
    fn square_split() {
        let (s, t) = square_decompose(&frac(18, 1));
        assert_eq!(s, fint(2));
        assert_eq!(t, fint(3));
        let (s, t) = square_decompose(&frac(-27, 50));
        assert_eq!(&s * &t * &t, frac(-27, 50));
        let (s, _) = square_decompose(&frac(49, 16));
        assert_eq!(s, fint(1));
    }
}
