//! Dense univariate polynomials over an integer ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, Zero};

/// Scalar ring for polynomial coefficients.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + FromPrimitive
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + FromPrimitive
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Coefficients stored constant term first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Polynomial<T> {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^n`.
    pub fn monomial(c: T, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiply by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("degree fits the ring"))
                .collect(),
        )
    }
}

impl<T: Ring> Polynomial<T>
where
    T: PartialOrd,
{
    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= T::zero())
    }

    /// Render as `a_n v^n + ... + a_0` with the given variable name.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let zero = T::zero();
        let one = T::one();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < zero;
            let mag = if negative { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = mag == one;
            match i {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !unit {
                        out.push_str(&mag.to_string());
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl<T: Ring + PartialOrd> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("q"))
    }
}

impl<T: Ring> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl<T: Ring> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<T: Ring> $tr for Polynomial<T> {
            type Output = Polynomial<T>;

            fn $method(self, rhs: Polynomial<T>) -> Polynomial<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Ring> Zero for Polynomial<T> {
    fn zero() -> Self {
        Polynomial::zero()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> std::iter::Sum for Polynomial<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |a, b| &a + &b)
    }
}

impl Polynomial<BigInt> {
    /// Build from small signed coefficients.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

/// A JSON array of exact integers, constant term first.
impl<T: Ring> serde::Serialize for Polynomial<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::{Error as _, SerializeSeq};
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            let n: serde_json::Number = c.to_string().parse().map_err(S::Error::custom)?;
            seq.serialize_element(&n)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Polynomial<BigInt>;

    #[test]
    fn arithmetic() {
        let a = P::from_i64(&[1, 1]);
        let b = P::from_i64(&[2, 1]);
        assert_eq!(&a * &b, P::from_i64(&[2, 3, 1]));
        assert_eq!(&P::zero() + &P::from_i64(&[5]), P::from_i64(&[5]));
        assert_eq!(a.scale(&BigInt::from(3)), P::from_i64(&[3, 3]));
        assert_eq!(&a - &a, P::zero());
    }

    #[test]
    fn evaluation_and_derivative() {
        let f = P::from_i64(&[2, 3, 1]);
        assert_eq!(f.eval(&BigInt::from(1)), BigInt::from(6));
        assert_eq!(f.eval(&BigInt::from(0)), BigInt::from(2));
        assert_eq!(P::zero().eval(&BigInt::from(7)), BigInt::from(0));
        assert_eq!(f.derivative(), P::from_i64(&[3, 2]));
        assert_eq!(P::from_i64(&[9]).derivative(), P::zero());
        assert_eq!(
            P::monomial(BigInt::from(1), 6).derivative().eval(&BigInt::from(1)),
            BigInt::from(6)
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(P::from_i64(&[2, 3, 1]).to_string(), "q^2 + 3q + 2");
        assert_eq!(P::from_i64(&[0, -1, 0, 4]).to_string(), "4q^3 - q");
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!(P::from_i64(&[-3]).render("x"), "-3");
        let big = P::from_coeffs(vec![BigInt::from(1) << 80, BigInt::from(-2)]);
        assert_eq!(serde_json::to_string(&big).unwrap(), "[1208925819614629174706176,-2]");
    }

    #[test]
    fn canonical_form() {
        assert_eq!(P::from_i64(&[1, 0, 0]).coeffs().len(), 1);
        assert_eq!(P::from_i64(&[0, 0]).degree(), None);
        let generic: Polynomial<i64> = Polynomial::from_coeffs(vec![1, 2]);
        assert_eq!(generic.eval(&10), 21);
    }
}
