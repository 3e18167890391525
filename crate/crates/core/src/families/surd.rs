use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::numerics::{int, is_rational_square, Rational};

/// `a + b·√d` with rational `a`, `b` and a rational radicand `d > 0`.
///
/// All values combined by arithmetic must share the radicand.
#[derive(Debug, Clone, PartialEq)]
pub struct Surd {
    pub rational: Rational,
    pub coeff: Rational,
    pub radicand: Rational,
}

impl Surd {
    pub fn rational(a: Rational, radicand: &Rational) -> Self {
        Surd {
            rational: a,
            coeff: int(0),
            radicand: radicand.clone(),
        }
    }

    /// `b·√d`.
    pub fn root(b: Rational, radicand: &Rational) -> Self {
        Surd {
            rational: int(0),
            coeff: b,
            radicand: radicand.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Surd {
            rational: &self.rational * c,
            coeff: &self.coeff * c,
            radicand: self.radicand.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.coeff.is_zero()
    }

    /// The value as a rational, when the radical vanishes or is exact.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeff.is_zero() {
            return Some(self.rational.clone());
        }
        is_rational_square(&self.radicand).map(|r| &self.rational + &self.coeff * r)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.rational) + f(&self.coeff) * f(&self.radicand).sqrt()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let zero = int(0);
        let a = self.rational.cmp(&zero);
        let b = self.coeff.cmp(&zero);
        if b == Ordering::Equal || a == b {
            return if a == Ordering::Equal { b } else { a };
        }
        if a == Ordering::Equal {
            return b;
        }
        // opposite signs: compare a² with b²·d
        let lhs = &self.rational * &self.rational;
        let rhs = &self.coeff * &self.coeff * &self.radicand;
        match lhs.cmp(&rhs) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn render(&self) -> String {
        if let Some(q) = self.to_rational() {
            return render_rational(&q);
        }
        let b = render_rational(&self.coeff.abs());
        let sign = if self.coeff.is_negative() { "-" } else { "+" };
        let d = render_rational(&self.radicand);
        if self.rational.is_zero() {
            let sign = if sign == "-" { "-" } else { "" };
            format!("{sign}{b}*sqrt({d})")
        } else {
            format!("{} {sign} {b}*sqrt({d})", render_rational(&self.rational))
        }
    }
}

fn render_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        debug_assert_eq!(self.radicand, o.radicand);
        Surd {
            rational: self.rational + o.rational,
            coeff: self.coeff + o.coeff,
            radicand: self.radicand,
        }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        self + (-o)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rational: -self.rational,
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        debug_assert_eq!(self.radicand, o.radicand);
        let d = &self.radicand;
        Surd {
            rational: &self.rational * &o.rational + &self.coeff * &o.coeff * d,
            coeff: &self.rational * &o.coeff + &self.coeff * &o.rational,
            radicand: self.radicand.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    #[test]
    fn arithmetic_and_sign() {
        let d = int(2);
        let x = Surd { rational: int(1), coeff: int(1), radicand: d.clone() };
        let y = Surd { rational: int(1), coeff: int(-1), radicand: d.clone() };
        // (1 + √2)(1 - √2) = -1
        assert_eq!((x.clone() * y.clone()).to_rational(), Some(int(-1)));
        assert_eq!(y.signum(), Ordering::Less);
        assert_eq!(x.signum(), Ordering::Greater);
        let z = Surd { rational: int(3), coeff: int(-2), radicand: d.clone() };
        assert_eq!(z.signum(), Ordering::Greater);
        assert_eq!(Surd::root(int(0), &d).signum(), Ordering::Equal);
        assert_eq!(x.render(), "1 + 1*sqrt(2)");
    }

    #[test]
    fn rational_radicand_collapses() {
        let s = Surd { rational: ratio(1, 2), coeff: int(3), radicand: ratio(9, 4) };
        assert_eq!(s.to_rational(), Some(int(5)));
        assert!((s.to_f64() - 5.0).abs() < 1e-12);
    }
}
