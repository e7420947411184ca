//! Dense integer polynomials, just enough to compare products of
//! cyclotomic-style factors `x^s - 1`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficients lowest degree first; no trailing zeros (the zero
/// polynomial is the empty vector).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> IntPolynomial {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPolynomial {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> IntPolynomial {
        IntPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// `x^s - 1`.
    pub fn x_pow_minus_one(s: usize) -> IntPolynomial {
        if s == 0 {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); s + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[s] = BigInt::one();
        IntPolynomial { coeffs }
    }

    /// `∏_{s in range} (x^s - 1)`; the empty product is 1.
    pub fn product_of_factors(range: impl IntoIterator<Item = usize>) -> IntPolynomial {
        range.into_iter().fold(IntPolynomial::one(), |acc, s| &acc * &IntPolynomial::x_pow_minus_one(s))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Largest `k` with `(x - 1)^k` dividing `self`, by repeated synthetic
    /// division at 1.
    pub fn root1_multiplicity(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut cur = self.coeffs.clone();
        let mut k = 0;
        loop {
            // Horner at 1 gives the quotient coefficients and the remainder.
            let deg = cur.len() - 1;
            let mut quotient = vec![BigInt::zero(); deg];
            let mut carry = BigInt::zero();
            for d in (0..=deg).rev() {
                carry += &cur[d];
                if d > 0 {
                    quotient[d - 1] = carry.clone();
                }
            }
            if !carry.is_zero() || deg == 0 {
                return Ok(k);
            }
            cur = quotient;
            k += 1;
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.sign() == num_bigint::Sign::Minus { '-' } else { '+' })?;
            } else if c.sign() == num_bigint::Sign::Minus {
                write!(f, "-")?;
            }
            first = false;
            let mag = c.magnitude();
            match d {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}*")?,
            }
            match d {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root1_multiplicity_examples() {
        // (x-1)^3 = x^3 - 3x^2 + 3x - 1
        let cube = IntPolynomial::from_i64(&[-1, 3, -3, 1]);
        assert_eq!(cube.root1_multiplicity().unwrap(), 3);
        assert_eq!(IntPolynomial::from_i64(&[-1, 0, 1]).root1_multiplicity().unwrap(), 1);
        assert_eq!(IntPolynomial::one().root1_multiplicity().unwrap(), 0);
        assert_eq!(IntPolynomial::zero().root1_multiplicity(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn multiplicity_is_additive() {
        let a = IntPolynomial::product_of_factors([1, 2, 2, 5]);
        let b = &IntPolynomial::product_of_factors([3]) * &IntPolynomial::from_i64(&[2, 0, 1]);
        let ma = a.root1_multiplicity().unwrap();
        let mb = b.root1_multiplicity().unwrap();
        assert_eq!((ma, mb), (4, 1));
        assert_eq!((&a * &b).root1_multiplicity().unwrap(), ma + mb);
    }

    #[test]
    fn eval_and_display() {
        let p = IntPolynomial::product_of_factors([1, 2]); // (x-1)(x^2-1)
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(16));
        assert_eq!(p.to_string(), "x^3 - x^2 - x + 1");
        assert_eq!(p.degree(), Some(3));
    }
}
