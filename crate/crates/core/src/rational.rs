//! Exact rational coordinates on the unit torus.
//!
//! Every coordinate in the crate is a [`Q`]. Positions on a torus are kept as
//! canonical representatives in `[0, 1)`; displacements between two canonical
//! points are taken as the representative in `(-1/2, 1/2]`.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for all geometry.
pub type Q = Ratio<i128>;

pub fn q(p: i128, d: i128) -> Q {
    Q::new(p, d)
}

pub fn qi(p: i128) -> Q {
    Q::from_integer(p)
}

/// Canonical representative of `x` modulo 1 in `[0, 1)`.
pub fn unit(x: Q) -> Q {
    x - x.floor()
}

pub fn is_unit(x: Q) -> bool {
    !x.is_negative() && x < Q::one()
}

/// Representative of `b - a` modulo 1 in `(-1/2, 1/2]`.
pub fn signed_delta(a: Q, b: Q) -> Q {
    let mut d = unit(b - a);
    if d > q(1, 2) {
        d -= Q::one();
    }
    d
}

pub fn half() -> Q {
    q(1, 2)
}

pub fn to_f64(x: Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Smallest-denominator rational strictly inside the open interval `(lo, hi)`.
///
/// Walks the Stern-Brocot tree; `lo < hi` is required.
pub fn simplest_between(lo: Q, hi: Q) -> Q {
    assert!(lo < hi, "empty interval");
    let fl = lo.floor();
    if fl + Q::one() < hi {
        // an integer lies strictly inside
        let cand = fl + Q::one();
        if cand > lo {
            return cand;
        }
    }
    let base = fl;
    let (l, h) = (lo - base, hi - base);
    // mediant search between 0/1 and 1/1
    let (mut a, mut b) = ((0i128, 1i128), (1i128, 1i128));
    loop {
        let m = q(a.0 + b.0, a.1 + b.1);
        if m <= l {
            a = (*m.numer(), *m.denom());
        } else if m >= h {
            b = (*m.numer(), *m.denom());
        } else {
            return base + m;
        }
    }
}

/// Parse `p/q` or a bare integer.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let parse_int = |t: &str| t.parse::<i128>().map_err(|_| format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (parse_int(n)?, parse_int(d)?);
            if d <= 0 {
                return Err(format!("bad denominator in `{s}`"));
            }
            Ok(q(n, d))
        }
        None => Ok(qi(parse_int(s)?)),
    }
}

/// Canonical `p/q` spelling; integers are written with denominator 1.
pub fn fmt_q(x: Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub struct Displayed(pub Q);

impl fmt::Display for Displayed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(self.0))
    }
}

pub fn lcm_denominator<I: IntoIterator<Item = Q>>(it: I) -> i128 {
    it.into_iter().fold(1i128, |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: Q) -> Q {
    x.abs()
}

pub fn is_zero(x: Q) -> bool {
    x.is_zero()
}

/// serde adapter writing a rational as its `p/q` string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_q_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&fmt_q(*v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_q(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_delta() {
        assert_eq!(unit(q(-1, 4)), q(3, 4));
        assert_eq!(unit(q(5, 4)), q(1, 4));
        assert_eq!(signed_delta(q(9, 10), q(1, 10)), q(1, 5));
        assert_eq!(signed_delta(q(1, 10), q(9, 10)), q(-1, 5));
        assert_eq!(signed_delta(qi(0), q(1, 2)), q(1, 2));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-2").unwrap(), qi(-2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(fmt_q(qi(0)), "0/1");
        assert_eq!(fmt_q(q(-3, 9)), "-1/3");
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(q(1, 3), q(2, 3)), q(1, 2));
        assert_eq!(simplest_between(q(1, 4), q(1, 3)), q(2, 7));
        assert_eq!(simplest_between(q(1, 2), q(5, 2)), qi(1));
        assert_eq!(simplest_between(q(-1, 3), q(-1, 4)), q(-2, 7));
    }
}
