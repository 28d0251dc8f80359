//! Exact rational functions of the dimension indeterminate `N`.
//!
//! `RatN` is the universal scalar of the engine: every moment, cumulant and
//! Weingarten value is a ratio of integer-coefficient polynomials in `N`,
//! kept in canonical form (coprime, positive leading denominator
//! coefficient). Negative powers of `N` live in the denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer-coefficient polynomial in `N`, ascending coefficients,
/// no trailing zeros (zero polynomial is the empty vector).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// `coeff * N^k`.
    pub fn monomial(k: usize, coeff: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(coeff);
        IntPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    /// Gcd of coefficients, non-negative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        }
    }

    /// Pseudo-remainder of `self` by `div` (`div` non-zero).
    fn pseudo_rem(&self, div: &IntPoly) -> IntPoly {
        let d = div.degree().expect("pseudo_rem by zero");
        let lc = div.leading_coeff();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let shift = rd - d;
            let rl = rem.leading_coeff();
            // rem <- lc * rem - rl * N^shift * div
            let scaled = IntPoly {
                coeffs: rem.coeffs.iter().map(|c| c * &lc).collect(),
            };
            let sub = div.mul(&IntPoly::monomial(shift, rl));
            rem = scaled.sub(&sub);
        }
        rem
    }

    /// Polynomial gcd via content extraction and primitive pseudo-remainder
    /// sequences; result is primitive with positive leading coefficient,
    /// scaled by the gcd of contents.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.positive_leading();
        }
        if other.is_zero() {
            return self.positive_leading();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        let g = a.positive_leading();
        IntPoly {
            coeffs: g.coeffs.iter().map(|c| c * &content).collect(),
        }
    }

    fn positive_leading(&self) -> IntPoly {
        if self.leading_coeff().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact division; `None` if `div` does not divide `self`.
    pub fn div_exact(&self, div: &IntPoly) -> Option<IntPoly> {
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let d = div.degree()?;
        let lc = div.leading_coeff();
        let mut rem = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len()];
        while let Some(rd) = rem.degree() {
            if rd < d {
                return None;
            }
            let (quot, r) = rem.leading_coeff().div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let shift = rd - d;
            q[shift] = quot.clone();
            rem = rem.sub(&div.mul(&IntPoly::monomial(shift, quot)));
        }
        Some(IntPoly::from_coeffs(q))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    /// Substitute `N -> N^d`.
    pub fn substitute_n_power(&self, d: u32) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * d as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * d as usize] = c.clone();
        }
        IntPoly::from_coeffs(out)
    }
}

/// Exact rational function of `N` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatN {
    num: IntPoly,
    den: IntPoly,
}

impl RatN {
    /// Build and canonicalize; fails on a zero denominator.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<RatN> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: IntPoly, den: IntPoly) -> RatN {
        if num.is_zero() {
            return RatN {
                num: IntPoly::zero(),
                den: IntPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        if den.leading_coeff().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatN { num, den }
    }

    pub fn zero() -> RatN {
        RatN {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> RatN {
        RatN {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(k: i64) -> RatN {
        RatN {
            num: IntPoly::constant(BigInt::from(k)),
            den: IntPoly::one(),
        }
    }

    pub fn from_bigint(k: BigInt) -> RatN {
        RatN {
            num: IntPoly::constant(k),
            den: IntPoly::one(),
        }
    }

    pub fn from_rational(q: &BigRational) -> RatN {
        Self::canonical(
            IntPoly::constant(q.numer().clone()),
            IntPoly::constant(q.denom().clone()),
        )
    }

    /// `N^k`, with negative `k` stored in the denominator.
    pub fn n_pow(k: i64) -> RatN {
        if k >= 0 {
            RatN {
                num: IntPoly::monomial(k as usize, BigInt::one()),
                den: IntPoly::one(),
            }
        } else {
            RatN {
                num: IntPoly::one(),
                den: IntPoly::monomial((-k) as usize, BigInt::one()),
            }
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == IntPoly::one() && self.den == IntPoly::one()
    }

    pub fn add(&self, other: &RatN) -> RatN {
        Self::canonical(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatN) -> RatN {
        Self::canonical(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &RatN) -> RatN {
        Self::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatN {
        RatN {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, other: &RatN) -> Result<RatN> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn scale(&self, q: &BigRational) -> RatN {
        self.mul(&RatN::from_rational(q))
    }

    pub fn pow(&self, k: u32) -> RatN {
        let mut out = RatN::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Leading behavior as `N -> infinity`: `(degree, coefficient)` with
    /// `f(N) ~ coefficient * N^degree`.
    pub fn leading_term(&self) -> Result<(i64, BigRational)> {
        if self.is_zero() {
            return Err(Error::ZeroLeadingTerm);
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        let coeff = BigRational::new(self.num.leading_coeff(), self.den.leading_coeff());
        Ok((dn - dd, coeff))
    }

    /// Exact evaluation at integer `N = n0`.
    pub fn eval_at(&self, n0: i64) -> Result<BigRational> {
        let den = self.den.eval_int(n0);
        if den.is_zero() {
            return Err(Error::PoleEvaluation(n0));
        }
        Ok(BigRational::new(self.num.eval_int(n0), den))
    }

    /// Substitute `N -> N^d` (exact).
    pub fn substitute_n_power(&self, d: u32) -> RatN {
        Self::canonical(
            self.num.substitute_n_power(d),
            self.den.substitute_n_power(d),
        )
    }

    /// Expansion as a Laurent series in `1/N`: returns `(k0, a)` with
    /// `f = sum_j a[j] N^{-(k0+j)}`, `a.len() == terms`. Zero gives `(0, zeros)`.
    pub fn series_inv_n(&self, terms: usize) -> (i64, Vec<BigRational>) {
        if self.is_zero() {
            return (0, vec![BigRational::zero(); terms]);
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let rev = |p: &IntPoly| -> Vec<BigRational> {
            p.coeffs()
                .iter()
                .rev()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        };
        let nr = rev(&self.num);
        let dr = rev(&self.den);
        // power-series division nr / dr mod x^terms; dr[0] != 0
        let mut q = vec![BigRational::zero(); terms];
        for j in 0..terms {
            let mut acc = nr.get(j).cloned().unwrap_or_else(BigRational::zero);
            for (k, qk) in q.iter().enumerate().take(j) {
                if let Some(d) = dr.get(j - k) {
                    acc -= qk * d;
                }
            }
            q[j] = acc / &dr[0];
        }
        (dd as i64 - dn as i64, q)
    }
}

macro_rules! impl_ops {
    ($lhs:ty, $rhs:ty) => {
        impl Add<$rhs> for $lhs {
            type Output = RatN;
            fn add(self, rhs: $rhs) -> RatN {
                RatN::add(&self, &rhs)
            }
        }
        impl Sub<$rhs> for $lhs {
            type Output = RatN;
            fn sub(self, rhs: $rhs) -> RatN {
                RatN::sub(&self, &rhs)
            }
        }
        impl Mul<$rhs> for $lhs {
            type Output = RatN;
            fn mul(self, rhs: $rhs) -> RatN {
                RatN::mul(&self, &rhs)
            }
        }
        impl Div<$rhs> for $lhs {
            type Output = RatN;
            fn div(self, rhs: $rhs) -> RatN {
                RatN::checked_div(&self, &rhs).expect("division by zero RatN")
            }
        }
    };
}

impl_ops!(RatN, RatN);
impl_ops!(RatN, &RatN);
impl_ops!(&RatN, RatN);
impl_ops!(&RatN, &RatN);

impl Neg for RatN {
    type Output = RatN;
    fn neg(self) -> RatN {
        RatN::neg(&self)
    }
}

impl Neg for &RatN {
    type Output = RatN;
    fn neg(self) -> RatN {
        RatN::neg(self)
    }
}

fn poly_display(p: &IntPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = vec![];
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = match (k, mag.is_one()) {
            (0, _) => format!("{mag}"),
            (1, true) => "N".to_string(),
            (1, false) => format!("{mag}*N"),
            (_, true) => format!("N^{k}"),
            (_, false) => format!("{mag}*N^{k}"),
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() {
                format!("-{body}")
            } else {
                body
            });
        } else {
            parts.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, body));
        }
    }
    parts.join(" ")
}

impl fmt::Display for RatN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == IntPoly::one() {
            write!(f, "{}", poly_display(&self.num))
        } else {
            write!(f, "({}) / ({})", poly_display(&self.num), poly_display(&self.den))
        }
    }
}

/// Serialization form: ascending coefficient lists, decimal strings so that
/// arbitrarily large coefficients survive JSON round trips.
#[derive(Serialize, Deserialize)]
struct RatNRepr {
    num: Vec<String>,
    den: Vec<String>,
}

impl Serialize for RatN {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = RatNRepr {
            num: self.num.coeffs().iter().map(|c| c.to_string()).collect(),
            den: self.den.coeffs().iter().map(|c| c.to_string()).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatN {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = RatNRepr::deserialize(d)?;
        let parse = |v: Vec<String>| -> std::result::Result<IntPoly, D::Error> {
            let cs = v
                .into_iter()
                .map(|s| s.parse::<BigInt>().map_err(DeError::custom))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(IntPoly::from_coeffs(cs))
        };
        RatN::new(parse(repr.num)?, parse(repr.den)?).map_err(DeError::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n() -> RatN {
        RatN::n_pow(1)
    }

    #[test]
    fn arithmetic_examples() {
        // N + N = 2N
        let two_n = n() + n();
        assert_eq!(two_n, RatN::from_int(2) * n());
        // (1/(N^2-1)) * (N^2-1) = 1
        let nsq_m1 = n() * n() - RatN::one();
        let inv = RatN::one() / &nsq_m1;
        assert!((inv * &nsq_m1).is_one());
        // (N^2-1)/(N-1) = N+1
        let q = &nsq_m1 / (n() - RatN::one());
        assert_eq!(q, n() + RatN::one());
    }

    #[test]
    fn division_by_zero_errors() {
        assert!(matches!(
            RatN::one().checked_div(&RatN::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn leading_term_examples() {
        // 2N^3 + N -> (3, 2)
        let f = RatN::from_int(2) * RatN::n_pow(3) + n();
        assert_eq!(
            f.leading_term().unwrap(),
            (3, BigRational::from_integer(2.into()))
        );
        // 1/(N(N^2-1)) -> (-3, 1)
        let g = RatN::one() / (n() * (n() * n() - RatN::one()));
        assert_eq!(
            g.leading_term().unwrap(),
            (-3, BigRational::from_integer(1.into()))
        );
        // (N+1)/(N-1) -> (0, 1)
        let h = (n() + RatN::one()) / (n() - RatN::one());
        assert_eq!(
            h.leading_term().unwrap(),
            (0, BigRational::from_integer(1.into()))
        );
        assert!(matches!(
            RatN::zero().leading_term(),
            Err(Error::ZeroLeadingTerm)
        ));
    }

    #[test]
    fn eval_examples() {
        let g = RatN::one() / (n() * n() - RatN::one());
        assert_eq!(g.eval_at(2).unwrap(), BigRational::new(1.into(), 3.into()));
        // N^{1-D} with D = 3 at N = 2 -> 1/4
        assert_eq!(
            RatN::n_pow(-2).eval_at(2).unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert!(matches!(g.eval_at(1), Err(Error::PoleEvaluation(1))));
    }

    #[test]
    fn substitute_power() {
        let f = (n() + RatN::one()) / n();
        let g = f.substitute_n_power(2);
        assert_eq!(g, (n() * n() + RatN::one()) / (n() * n()));
    }

    #[test]
    fn series_in_inv_n() {
        // 1/(N^2-1) = N^{-2} + N^{-4} + ...
        let g = RatN::one() / (n() * n() - RatN::one());
        let (k0, a) = g.series_inv_n(5);
        assert_eq!(k0, 2);
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::zero();
        assert_eq!(a, vec![one.clone(), zero.clone(), one.clone(), zero, one]);
    }

    #[test]
    fn json_round_trip() {
        let f = (RatN::from_int(3) * n() - RatN::one()) / (n() * n() * n() + RatN::from_int(7));
        let s = serde_json::to_string(&f).unwrap();
        let back: RatN = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
    }

    fn small_ratn() -> impl Strategy<Value = RatN> {
        let coeff = -4i64..5;
        (
            proptest::collection::vec(coeff.clone(), 1..4),
            proptest::collection::vec(coeff, 1..4),
        )
            .prop_filter_map("nonzero denominator", |(a, b)| {
                let num = IntPoly::from_coeffs(a.into_iter().map(BigInt::from).collect());
                let den = IntPoly::from_coeffs(b.into_iter().map(BigInt::from).collect());
                if den.is_zero() {
                    None
                } else {
                    Some(RatN::new(num, den).unwrap())
                }
            })
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_ratn(), b in small_ratn(), c in small_ratn()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + RatN::zero(), a.clone());
            prop_assert_eq!(&a * RatN::one(), a.clone());
            if !a.is_zero() {
                prop_assert_eq!(&a * (RatN::one() / &a), RatN::one());
            }
        }

        #[test]
        fn canonical_idempotent(a in small_ratn()) {
            let again = RatN::new(a.num().clone(), a.den().clone()).unwrap();
            prop_assert_eq!(a.clone(), again);
        }

        #[test]
        fn leading_term_multiplicative(a in small_ratn(), b in small_ratn()) {
            if !a.is_zero() && !b.is_zero() {
                let (da, ca) = a.leading_term().unwrap();
                let (db, cb) = b.leading_term().unwrap();
                let (dp, cp) = (a * b).leading_term().unwrap();
                prop_assert_eq!(dp, da + db);
                prop_assert_eq!(cp, ca * cb);
            }
        }

        #[test]
        fn eval_respects_ops(a in small_ratn(), b in small_ratn()) {
            // evaluation point far from the small roots involved
            let x = 17;
            if a.eval_at(x).is_ok() && b.eval_at(x).is_ok() {
                let sum = &a + &b;
                prop_assert_eq!(sum.eval_at(x).unwrap(), a.eval_at(x).unwrap() + b.eval_at(x).unwrap());
                let prod = &a * &b;
                prop_assert_eq!(prod.eval_at(x).unwrap(), a.eval_at(x).unwrap() * b.eval_at(x).unwrap());
            }
        }
    }
}
