//! Coefficient domains: the integers, the rationals and prime fields.
//!
//! Every coefficient is stored as a `BigRational`. Over `Z` and `F_p` the
//! denominator is always one, and over `F_p` the numerator lies in `[0, p)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Coeff = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Integers,
    Rationals,
    Prime(u64),
}

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Coeff {
    BigRational::from_integer(n)
}

impl Domain {
    pub fn is_field(&self) -> bool {
        !matches!(self, Domain::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Domain::Prime(p) => *p,
            _ => 0,
        }
    }

    /// Brings a value into canonical form for this domain.
    pub fn normalize(&self, c: Coeff) -> Coeff {
        match self {
            Domain::Prime(p) => {
                let p = BigInt::from(*p);
                let num = c.numer().mod_floor(&p);
                let den = c.denom().mod_floor(&p);
                if den.is_one() {
                    big(num)
                } else {
                    let inv = mod_inverse(&den, &p).expect("denominator divisible by p");
                    big((num * inv).mod_floor(&p))
                }
            }
            _ => c,
        }
    }

    /// Whether `c` is a legal element of the domain.
    pub fn admits(&self, c: &Coeff) -> bool {
        match self {
            Domain::Rationals => true,
            Domain::Integers => c.is_integer(),
            Domain::Prime(_) => c.is_integer(),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.normalize(-a.clone())
    }

    pub fn is_unit(&self, c: &Coeff) -> bool {
        match self {
            Domain::Integers => c.abs().is_one(),
            _ => !c.is_zero(),
        }
    }

    pub fn inverse(&self, c: &Coeff) -> Option<Coeff> {
        if !self.is_unit(c) {
            return None;
        }
        Some(self.normalize(c.recip()))
    }

    /// Does `a` divide `b`?
    pub fn divides(&self, a: &Coeff, b: &Coeff) -> bool {
        if a.is_zero() {
            return b.is_zero();
        }
        match self {
            Domain::Integers => (b.numer() % a.numer()).is_zero(),
            _ => true,
        }
    }

    /// Exact quotient `b / a`, assuming `a | b`.
    pub fn exact_div(&self, b: &Coeff, a: &Coeff) -> Coeff {
        match self {
            Domain::Integers => big(b.numer() / a.numer()),
            _ => self.normalize(b / a),
        }
    }

    /// Euclidean step used by term reduction: `c = q * lc + r` with `r` canonical.
    /// Over a field the remainder is always zero. Over `Z` the remainder lies in
    /// `[0, |lc|)`.
    pub fn quo_rem(&self, c: &Coeff, lc: &Coeff) -> (Coeff, Coeff) {
        match self {
            Domain::Integers => {
                let l = lc.numer();
                let (q, r) = c.numer().div_mod_floor(l);
                // div_mod_floor gives r with the sign of l; force r into [0, |l|).
                if r.is_negative() {
                    (big(q + 1), big(r - l))
                } else {
                    (big(q), big(r))
                }
            }
            _ => (self.normalize(c / lc), Coeff::zero()),
        }
    }

    /// Returns `(g, s, t)` with `g = s*a + t*b` a canonical gcd.
    pub fn gcdext(&self, a: &Coeff, b: &Coeff) -> (Coeff, Coeff, Coeff) {
        match self {
            Domain::Integers => {
                let e = a.numer().extended_gcd(b.numer());
                let (g, s, t) = if e.gcd.is_negative() {
                    (-e.gcd, -e.x, -e.y)
                } else {
                    (e.gcd, e.x, e.y)
                };
                (big(g), big(s), big(t))
            }
            _ => {
                if !a.is_zero() {
                    (Coeff::one(), self.normalize(a.recip()), Coeff::zero())
                } else if !b.is_zero() {
                    (Coeff::one(), Coeff::zero(), self.normalize(b.recip()))
                } else {
                    (Coeff::zero(), Coeff::zero(), Coeff::zero())
                }
            }
        }
    }

    pub fn lcm(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            Domain::Integers => big(a.numer().lcm(b.numer())),
            _ => Coeff::one(),
        }
    }

    /// Unit that makes `c` canonical when multiplied in (positive over `Z`,
    /// one over a field).
    pub fn normalizing_unit(&self, c: &Coeff) -> Coeff {
        match self {
            Domain::Integers => {
                if c.is_negative() {
                    -Coeff::one()
                } else {
                    Coeff::one()
                }
            }
            _ => self.normalize(c.recip()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Domain::Integers => "ZZ".into(),
            Domain::Rationals => "QQ".into(),
            Domain::Prime(p) => format!("GF({p})"),
        }
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.abs().is_one() {
        let inv = if e.gcd.is_negative() { -e.x } else { e.x };
        Some(inv.mod_floor(m))
    } else {
        None
    }
}

pub fn is_probable_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_remainders_are_nonnegative() {
        let z = Domain::Integers;
        let (q, r) = z.quo_rem(&int(-1), &int(5));
        assert_eq!((q, r), (int(-1), int(4)));
        let (q, r) = z.quo_rem(&int(13), &int(-5));
        assert_eq!(int(13), &q * int(-5) + &r);
        assert!(r >= int(0) && r < int(5));
    }

    #[test]
    fn prime_field_normalizes() {
        let f = Domain::Prime(7);
        assert_eq!(f.normalize(int(-1)), int(6));
        assert_eq!(f.inverse(&int(3)), Some(int(5)));
        assert_eq!(f.normalize(BigRational::new(1.into(), 2.into())), int(4));
    }

    #[test]
    fn gcdext_identity() {
        let z = Domain::Integers;
        let (g, s, t) = z.gcdext(&int(6), &int(-4));
        assert_eq!(g, int(2));
        assert_eq!(&s * int(6) + &t * int(-4), g);
    }
}
