//! Exact arithmetic in the quadratic field Q(√5).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GeometryError;

/// The number `a + b√5` with rational `a`, `b`.
///
/// Both components are kept as reduced fractions, so structural equality is
/// numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadExt { a, b }
    }

    pub fn from_int(a: i64) -> Self {
        QuadExt {
            a: BigRational::from_integer(a.into()),
            b: BigRational::zero(),
        }
    }

    /// `(a_num/a_den) + (b_num/b_den)√5`. Denominators must be nonzero.
    pub fn from_parts(
        a_num: i64,
        a_den: i64,
        b_num: i64,
        b_den: i64,
    ) -> Result<Self, GeometryError> {
        if a_den == 0 || b_den == 0 {
            return Err(GeometryError::DivisionByZero);
        }
        Ok(QuadExt {
            a: BigRational::new(a_num.into(), a_den.into()),
            b: BigRational::new(b_num.into(), b_den.into()),
        })
    }

    pub fn sqrt5() -> Self {
        QuadExt {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    /// The golden ratio `(1+√5)/2`.
    pub fn golden() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        QuadExt {
            a: half.clone(),
            b: half,
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt5_part(&self) -> &BigRational {
        &self.b
    }

    /// Components as `[a_num, a_den, b_num, b_den]`, if they fit in `i64`.
    pub fn to_parts(&self) -> Option<[i64; 4]> {
        Some([
            self.a.numer().to_i64()?,
            self.a.denom().to_i64()?,
            self.b.numer().to_i64()?,
            self.b.denom().to_i64()?,
        ])
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate `a - b√5`.
    pub fn conjugate(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² - 5b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(5.into()) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Result<Self, GeometryError> {
        if self.is_zero() {
            return Err(GeometryError::DivisionByZero);
        }
        // a² - 5b² ≠ 0 for nonzero elements since √5 is irrational
        let norm = self.norm();
        Ok(QuadExt {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
        })
    }

    pub fn checked_div(&self, rhs: &QuadExt) -> Result<Self, GeometryError> {
        Ok(self * &rhs.inverse()?)
    }

    /// Exact sign, decided with rational comparisons and one squaring.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a² with 5b²
        let a2 = &self.a * &self.a;
        let b2 = BigRational::from_integer(5.into()) * &self.b * &self.b;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("sqrt 5 is irrational"),
        }
    }

    /// Floating-point approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }
}

/// `r + s√5` with machine-integer parts, for exact comparisons in bulk once a
/// batch of values has been brought to a common denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct IntSurd {
    pub r: i128,
    pub s: i128,
}

impl IntSurd {
    fn signum(self) -> Ordering {
        let (sr, ss) = (self.r.cmp(&0), self.s.cmp(&0));
        if sr == ss || ss == Ordering::Equal {
            return sr;
        }
        if sr == Ordering::Equal {
            return ss;
        }
        match (self.r * self.r).cmp(&(5 * self.s * self.s)) {
            Ordering::Greater => sr,
            _ => ss,
        }
    }

    /// Dot product of two rows of `(r, s)` parts.
    pub fn dot(x: &[(i64, i64)], y: &[(i64, i64)]) -> Self {
        x.iter()
            .zip(y)
            .fold(IntSurd::default(), |acc, (&(a, b), &(c, d))| {
                let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
                IntSurd {
                    r: acc.r + a * c + 5 * b * d,
                    s: acc.s + a * d + b * c,
                }
            })
    }
}

impl Ord for IntSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        IntSurd {
            r: self.r - other.r,
            s: self.s - other.s,
        }
        .signum()
    }
}

impl PartialOrd for IntSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bound on cleared parts that keeps `IntSurd` dot products of short rows and
/// their squared comparisons inside `i128`.
const INTEGRAL_LIMIT: i64 = 1 << 24;

/// Rewrites every row over one positive common denominator `L`, returning the
/// integer parts of `L·x`. `None` if some part would exceed the fast-path bound.
pub(crate) fn integral_rows(rows: &[&[QuadExt]]) -> Option<Vec<Vec<(i64, i64)>>> {
    let mut lcm = BigInt::one();
    for x in rows.iter().flat_map(|r| r.iter()) {
        for part in [&x.a, &x.b] {
            lcm = num_integer::Integer::lcm(&lcm, part.denom());
        }
    }
    let scale = |q: &BigRational| -> Option<i64> {
        let v = (q * BigRational::from_integer(lcm.clone()))
            .to_integer()
            .to_i64()?;
        (v.abs() < INTEGRAL_LIMIT).then_some(v)
    };
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| Some((scale(&x.a)?, scale(&x.b)?)))
                .collect()
        })
        .collect()
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::from_int(1)
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        QuadExt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        QuadExt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let five = BigRational::from_integer(5.into());
        QuadExt {
            a: &self.a * &rhs.a + five * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let b_abs = self.b.abs();
        let radical = if b_abs.is_one() {
            "√5".to_string()
        } else {
            format!("{}√5", fmt_rational(&b_abs))
        };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{radical}");
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}", fmt_rational(&self.a), sign, radical)
    }
}

/// Parses sums of terms such as `2`, `-1/2`, `√5`, `3√5`, `-3-√5`,
/// `2\sqrt{5}+2` or `sqrt5+1`.
impl FromStr for QuadExt {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s
            .replace("\\sqrt{5}", "r")
            .replace("sqrt5", "r")
            .replace("√5", "r")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if cleaned.is_empty() {
            return Err("empty number".into());
        }
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(format!("dangling sign in {s:?}"));
            }
            let (coef_str, radical) = match term.strip_suffix('r') {
                Some(c) => (c, true),
                None => (term, false),
            };
            let coef = if coef_str.is_empty() {
                BigRational::one()
            } else if let Some((num, den)) = coef_str.split_once('/') {
                let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
                let den: BigInt = den
                    .parse()
                    .map_err(|_| format!("bad denominator in {s:?}"))?;
                if den.is_zero() {
                    return Err(format!("zero denominator in {s:?}"));
                }
                BigRational::new(num, den)
            } else {
                BigRational::from_integer(
                    coef_str
                        .parse()
                        .map_err(|_| format!("bad coefficient in {s:?}"))?,
                )
            };
            let coef = if negative { -coef } else { coef };
            if radical {
                b += coef;
            } else {
                a += coef;
            }
        }
        Ok(QuadExt { a, b })
    }
}
