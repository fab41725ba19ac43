use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Elements of the ground field. `BigRational` keeps numerator and
/// denominator coprime with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `num/den`, also for integers.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Scales a rational vector to the primitive integer vector on the same
/// ray: integer entries with gcd 1. The zero vector is returned unchanged.
pub fn primitive_integer(v: &[Rat]) -> alloc::vec::Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: alloc::vec::Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    ints
}

/// Primitive integer vector with its first nonzero entry positive.
pub fn normalize_ray(v: &[Rat]) -> alloc::vec::Vec<Rat> {
    let mut ints = primitive_integer(v);
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints.into_iter().map(Rat::from_integer).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3/6").unwrap(), rat_frac(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), rat(-4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(5)), "5/1");
        assert_eq!(format_rat(&rat_frac(-2, 4)), "-1/2");
    }

    #[test]
    fn rays() {
        let v = vec![rat_frac(-1, 2), rat(0), rat_frac(3, 4)];
        assert_eq!(normalize_ray(&v), vec![rat(2), rat(0), rat(-3)]);
        let z = vec![rat(0), rat(0)];
        assert_eq!(normalize_ray(&z), z);
    }
}
