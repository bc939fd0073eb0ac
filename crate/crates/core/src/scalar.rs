//! Numeric backend.
//!
//! Every real quantity in the library (Gram entries, root coefficients, inner
//! products) is a [`Scalar`]: either an exact rational or a double carrying
//! the datum-wide tolerance. Case splits against the thresholds −1, 0 and 1
//! go through [`classify`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default tolerance for the floating-point backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Which backend a datum computes in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Approx,
}

/// A real number, exact or approximate.
///
/// Arithmetic between two exact values is exact; anything touching an
/// approximate value is carried out in `f64`.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

/// An exact rational number. Values whose reduced numerator and denominator
/// fit in `i64` are stored inline; everything else falls back to a bignum.
/// The representation is canonical, so derived equality and hashing agree
/// with numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small { num: i64, den: i64 },
    Big(BigRational),
}

impl Rational {
    pub fn from_integer(n: i64) -> Self {
        Rational::Small { num: n, den: 1 }
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let g = num.gcd(&den);
        let (mut num, mut den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if den < 0 {
            num = -num;
            den = -den;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Rational::Small { num, den },
            _ => Rational::Big(BigRational::new(num.into(), den.into())),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small { num, den } => BigRational::new_raw((*num).into(), (*den).into()),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small { num: 0, .. })
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Rational::Small { den: 1, .. }) || matches!(self, Rational::Big(r) if r.is_integer())
    }

    /// The value as an `i64`, if it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Rational::Small { num, den: 1 } => Some(*num),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small { num, den } => *num as f64 / *den as f64,
            Rational::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Rational::Small { num, .. } => num.cmp(&0),
            Rational::Big(r) => r.cmp(&BigRational::zero()),
        }
    }

    pub fn abs(&self) -> Rational {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// `self / rhs`, or `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Rational) -> Option<Rational> {
        if rhs.is_zero() {
            return None;
        }
        Some(match (self, rhs) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: e }) => {
                Rational::from_i128(*a as i128 * *e as i128, *b as i128 * *c as i128)
            }
            _ => Rational::from(self.to_big() / rhs.to_big()),
        })
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Rational::Small { num, den },
            _ => Rational::Big(r),
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: e }) => {
                (*a as i128 * *e as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small { num, den: 1 } => write!(f, "{num}"),
            Rational::Small { num, den } => write!(f, "{num}/{den}"),
            Rational::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small { num: a, den: 1 }, Rational::Small { num: c, den: 1 }) => {
                match a.checked_add(*c) {
                    Some(n) => Rational::from_integer(n),
                    None => Rational::from_i128(*a as i128 + *c as i128, 1),
                }
            }
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: e }) => {
                let (a, b, c, e) = (*a as i128, *b as i128, *c as i128, *e as i128);
                Rational::from_i128(a * e + c * b, b * e)
            }
            _ => Rational::from(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small { num: a, den: 1 }, Rational::Small { num: c, den: 1 }) => {
                match a.checked_mul(*c) {
                    Some(n) => Rational::from_integer(n),
                    None => Rational::from_i128(*a as i128 * *c as i128, 1),
                }
            }
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: e }) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *e as i128)
            }
            _ => Rational::from(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small { num, den } => match num.checked_neg() {
                Some(n) => Rational::Small { num: n, den: *den },
                None => Rational::from(-self.to_big()),
            },
            Rational::Big(r) => Rational::from(-r.clone()),
        }
    }
}

/// Position of a scalar relative to the thresholds −1, 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum ScalarClass {
    BelowMinusOne,
    MinusOne,
    OpenNegative,
    Zero,
    OpenPositive,
    One,
    AboveOne,
}

impl ScalarClass {
    /// `t > 0`
    pub fn is_positive(self) -> bool {
        self > ScalarClass::Zero
    }

    /// `t < 0`
    pub fn is_negative(self) -> bool {
        self < ScalarClass::Zero
    }

    /// `t ≥ 1`
    pub fn at_least_one(self) -> bool {
        self >= ScalarClass::One
    }

    /// `t ≤ −1`
    pub fn at_most_minus_one(self) -> bool {
        self <= ScalarClass::MinusOne
    }

    /// `−1 < t < 1`
    pub fn inside_unit_interval(self) -> bool {
        ScalarClass::MinusOne < self && self < ScalarClass::One
    }
}

impl Scalar {
    pub fn zero(backend: Backend) -> Self {
        Self::from_int(0, backend)
    }

    pub fn one(backend: Backend) -> Self {
        Self::from_int(1, backend)
    }

    pub fn from_int(n: i64, backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(Rational::from_integer(n)),
            Backend::Approx => Scalar::Approx(n as f64),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Rational::from_i128(num.into(), den.into()))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Approx(_) => Backend::Approx,
        }
    }

    /// Converts to the given backend. Approximate values cannot become exact.
    pub fn to_backend(&self, backend: Backend) -> Result<Scalar> {
        match (self, backend) {
            (Scalar::Exact(_), Backend::Exact) | (Scalar::Approx(_), Backend::Approx) => {
                Ok(self.clone())
            }
            (Scalar::Exact(_), Backend::Approx) => Ok(Scalar::Approx(self.to_f64())),
            (Scalar::Approx(v), Backend::Exact) => Err(Error::Domain(format!(
                "cannot convert approximate value {v} to an exact rational"
            ))),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Approx(v) => *v,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(v) => Scalar::Approx(v.abs()),
        }
    }

    /// Whether the value is zero within `eps` (exactly zero in exact mode).
    pub fn is_zero_within(&self, eps: f64) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(v) => v.abs() <= eps,
        }
    }

    /// Sign of the value, treating anything within `eps` of zero as zero.
    pub fn sign_within(&self, eps: f64) -> Ordering {
        match self {
            Scalar::Exact(r) => r.signum(),
            Scalar::Approx(v) if v.abs() <= eps => Ordering::Equal,
            Scalar::Approx(v) => v.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    /// `self / rhs`; fails on an exact zero divisor.
    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                a.checked_div(b).map(Scalar::Exact).ok_or_else(|| Error::Domain("division by zero".into()))
            }
            _ => Ok(Scalar::Approx(self.to_f64() / rhs.to_f64())),
        }
    }

    /// Equality within `eps` (exact equality in exact mode).
    pub fn approx_eq(&self, other: &Scalar, eps: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= eps,
        }
    }

    /// Parses an integer, a decimal string ("-1.5") or a fraction ("3/2")
    /// into an exact rational.
    pub fn parse_rational(text: &str) -> Result<BigRational> {
        let s = text.trim();
        let bad = || Error::Parse(format!("not a rational number: {text:?}"));
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            return Ok(BigRational::new(num, den));
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let all_digits = format!("{int_part}{frac_part}");
        let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
        let scale = exponent - frac_part.len() as i32;
        let ten = BigRational::from_integer(BigInt::from(10));
        for _ in 0..scale.unsigned_abs() {
            if scale > 0 {
                value *= &ten;
            } else {
                value /= &ten;
            }
        }
        Ok(if negative { -value } else { value })
    }

    /// Parses a number into the requested backend.
    pub fn parse(text: &str, backend: Backend) -> Result<Scalar> {
        let r = Self::parse_rational(text)?;
        Ok(match backend {
            Backend::Exact => Scalar::Exact(r.into()),
            Backend::Approx => Scalar::Approx(r.to_f64().unwrap_or(f64::NAN)),
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Approx(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(&a $op &b),
                    (a, b) => Scalar::Approx(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(&a $op &b),
                    (a, b) => Scalar::Approx(a.to_f64() $op b.to_f64()),
                }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-&r),
            Scalar::Approx(v) => Scalar::Approx(-v),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

/// Classifies `t` against −1, 0 and 1.
///
/// Exact values are compared exactly and `eps` is ignored. Approximate values
/// within `eps` of a boundary take the boundary label.
pub fn classify(t: &Scalar, eps: f64) -> ScalarClass {
    match t {
        Scalar::Exact(r) => {
            let one = Rational::from_integer(1);
            match r.signum() {
                Ordering::Equal => ScalarClass::Zero,
                Ordering::Greater => match r.cmp(&one) {
                    Ordering::Less => ScalarClass::OpenPositive,
                    Ordering::Equal => ScalarClass::One,
                    Ordering::Greater => ScalarClass::AboveOne,
                },
                Ordering::Less => match r.cmp(&-&one) {
                    Ordering::Less => ScalarClass::BelowMinusOne,
                    Ordering::Equal => ScalarClass::MinusOne,
                    Ordering::Greater => ScalarClass::OpenNegative,
                },
            }
        }
        Scalar::Approx(v) => {
            let v = *v;
            if (v + 1.0).abs() <= eps {
                ScalarClass::MinusOne
            } else if v.abs() <= eps {
                ScalarClass::Zero
            } else if (v - 1.0).abs() <= eps {
                ScalarClass::One
            } else if v < -1.0 {
                ScalarClass::BelowMinusOne
            } else if v < 0.0 {
                ScalarClass::OpenNegative
            } else if v < 1.0 {
                ScalarClass::OpenPositive
            } else {
                ScalarClass::AboveOne
            }
        }
    }
}

/// The sequence `c_0 = 0`, `c_1 = 1`, `c_{i+1} = 2q c_i − c_{i−1}`, extended
/// to negative indices by `c_{−i} = −c_i`.
///
/// For `q = cosh θ > 1` this is `sinh(iθ)/sinh θ`; for `q = 1` it is `i`.
pub fn c_sequence(q: &Scalar, i: i64, eps: f64) -> Result<Scalar> {
    let table = CSequence::new(q, eps)?;
    Ok(table.get(i))
}

/// Memoised c-sequence for a fixed `q ≥ 1`.
#[derive(Clone, Debug)]
pub struct CSequence {
    q: Scalar,
    values: std::cell::RefCell<Vec<Scalar>>,
}

impl CSequence {
    pub fn new(q: &Scalar, eps: f64) -> Result<Self> {
        if !classify(q, eps).at_least_one() {
            return Err(Error::Domain(format!("c-sequence needs q >= 1, got {q}")));
        }
        let backend = q.backend();
        Ok(CSequence {
            q: q.clone(),
            values: std::cell::RefCell::new(vec![Scalar::zero(backend), Scalar::one(backend)]),
        })
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    /// `c_i` for any integer `i`.
    pub fn get(&self, i: i64) -> Scalar {
        let n = i.unsigned_abs() as usize;
        let mut values = self.values.borrow_mut();
        let two_q = &Scalar::from_int(2, self.q.backend()) * &self.q;
        while values.len() <= n {
            let len = values.len();
            let next = &two_q * &values[len - 1] - &values[len - 2];
            values.push(next);
        }
        if i < 0 {
            -&values[n]
        } else {
            values[n].clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn classify_boundaries() {
        assert_eq!(classify(&exact(1, 1), 0.0), ScalarClass::One);
        assert_eq!(classify(&exact(-3, 2), 0.0), ScalarClass::BelowMinusOne);
        assert_eq!(classify(&exact(-1, 1), 0.0), ScalarClass::MinusOne);
        assert_eq!(classify(&exact(0, 1), 0.0), ScalarClass::Zero);
        assert_eq!(classify(&exact(1, 2), 0.0), ScalarClass::OpenPositive);
        assert_eq!(classify(&exact(-1, 2), 0.0), ScalarClass::OpenNegative);
        assert_eq!(classify(&exact(7, 3), 0.0), ScalarClass::AboveOne);
    }

    #[test]
    fn classify_approx_uses_tolerance() {
        assert_eq!(
            classify(&Scalar::Approx(-0.5000000001), 1e-9),
            ScalarClass::OpenNegative
        );
        assert_eq!(classify(&Scalar::Approx(1.0 + 5e-10), 1e-9), ScalarClass::One);
        assert_eq!(classify(&Scalar::Approx(-1.0 - 5e-10), 1e-9), ScalarClass::MinusOne);
        assert_eq!(classify(&Scalar::Approx(3e-10), 1e-9), ScalarClass::Zero);
        assert_eq!(classify(&Scalar::Approx(-1.0 - 2e-9), 1e-9), ScalarClass::BelowMinusOne);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Scalar::parse_rational("3/2").unwrap(), exact(3, 2).as_exact());
        assert_eq!(Scalar::parse_rational("-1.5").unwrap(), exact(-3, 2).as_exact());
        assert_eq!(Scalar::parse_rational("2").unwrap(), exact(2, 1).as_exact());
        assert_eq!(Scalar::parse_rational("1e-2").unwrap(), exact(1, 100).as_exact());
        assert_eq!(Scalar::parse_rational(".25").unwrap(), exact(1, 4).as_exact());
        assert!(Scalar::parse_rational("1/0").is_err());
        assert!(Scalar::parse_rational("abc").is_err());
        assert!(Scalar::parse_rational("").is_err());
        assert!(Scalar::parse_rational("-").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["3/2", "-7", "0", "-1/3"] {
            let v = Scalar::parse(s, Backend::Exact).unwrap();
            assert_eq!(v.to_string(), s);
        }
    }

    #[test]
    fn c_sequence_q_one_is_identity() {
        let q = exact(1, 1);
        for i in -10..=10 {
            assert_eq!(c_sequence(&q, i, 0.0).unwrap(), Scalar::from_int(i, Backend::Exact));
        }
    }

    #[test]
    fn c_sequence_three_halves() {
        let q = exact(3, 2);
        let got: Vec<Scalar> = (0..6).map(|i| c_sequence(&q, i, 0.0).unwrap()).collect();
        let want: Vec<Scalar> = [0, 1, 3, 8, 21, 55]
            .iter()
            .map(|&v| Scalar::from_int(v, Backend::Exact))
            .collect();
        assert_eq!(got, want);
        assert_eq!(c_sequence(&q, -4, 0.0).unwrap(), Scalar::from_int(-21, Backend::Exact));
    }

    #[test]
    fn c_sequence_rejects_small_q() {
        assert!(matches!(c_sequence(&exact(1, 2), 3, 0.0), Err(Error::Domain(_))));
        assert!(c_sequence(&Scalar::Approx(0.999), 1, 1e-9).is_err());
    }

    #[test]
    fn c_sequence_matches_hyperbolic_form() {
        for q in [1.5, 2.0, 10.0] {
            let theta = f64::acosh(q);
            let seq = CSequence::new(&Scalar::Approx(q), 1e-9).unwrap();
            for i in 0..=20 {
                let want = (i as f64 * theta).sinh() / theta.sinh();
                let got = seq.get(i).to_f64();
                let rel = if want == 0.0 { got.abs() } else { ((got - want) / want).abs() };
                assert!(rel <= 1e-6, "q={q} i={i}: {got} vs {want}");
            }
        }
    }

    impl Scalar {
        fn as_exact(&self) -> BigRational {
            match self {
                Scalar::Exact(r) => r.to_big(),
                Scalar::Approx(_) => panic!("not exact"),
            }
        }
    }

    #[test]
    fn rational_overflow_falls_back() {
        let big = Rational::from_integer(i64::MAX);
        let sum = &big + &big;
        assert!(matches!(sum, Rational::Big(_)));
        assert_eq!(sum.to_big(), big.to_big() * BigRational::from_integer(2.into()));
        assert_eq!(&sum - &big, big);
        assert!(matches!(&sum - &big, Rational::Small { .. }));
        let min = Rational::from_integer(i64::MIN);
        assert_eq!((-&min).to_big(), -min.to_big());
        assert_eq!(Rational::from(BigRational::new(6.into(), (-4).into())), Rational::Small { num: -3, den: 2 });
        assert_eq!(Rational::from_integer(3).checked_div(&Rational::from_integer(0)), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = Rational> {
            prop_oneof![
                (-50i64..50, 1i64..12).prop_map(|(n, d)| Rational::from(BigRational::new(n.into(), d.into()))),
                (any::<i64>(), 1i64..4).prop_map(|(n, d)| Rational::from(BigRational::new(n.into(), d.into()))),
            ]
        }

        proptest! {
            #[test]
            fn rational_matches_bignum(a in rational(), b in rational()) {
                let (x, y) = (a.to_big(), b.to_big());
                prop_assert_eq!((&a + &b).to_big(), &x + &y);
                prop_assert_eq!((&a - &b).to_big(), &x - &y);
                prop_assert_eq!((&a * &b).to_big(), &x * &y);
                prop_assert_eq!((-&a).to_big(), -x.clone());
                prop_assert_eq!(a.cmp(&b), x.cmp(&y));
                if !b.is_zero() {
                    prop_assert_eq!(a.checked_div(&b).unwrap().to_big(), &x / &y);
                }
                // canonical: equal values have equal representations
                prop_assert_eq!(Rational::from(x.clone()), a.clone());
                prop_assert_eq!(a.to_string(), Scalar::Exact(Rational::from(x)).to_string());
            }

            #[test]
            fn recurrence_identity_exact(num in 2i64..40, den in 1i64..20, i in -64i64..64) {
                prop_assume!(num >= 2 * den);
                // q = num / (2 den) >= 1
                let q = Scalar::from_ratio(num, 2 * den);
                let seq = CSequence::new(&q, 0.0).unwrap();
                let lhs = seq.get(i + 1) + seq.get(i - 1);
                let rhs = &(&Scalar::from_int(2, Backend::Exact) * &q) * &seq.get(i);
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn recurrence_identity_approx(q in 1.0f64..4.0, i in -40i64..40) {
                let seq = CSequence::new(&Scalar::Approx(q), 1e-9).unwrap();
                let lhs = (seq.get(i + 1) + seq.get(i - 1)).to_f64();
                let rhs = 2.0 * q * seq.get(i).to_f64();
                prop_assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0));
            }

            #[test]
            fn strictly_increasing_and_injective(num in 2i64..30, den in 1i64..10) {
                prop_assume!(num >= 2 * den);
                let q = Scalar::from_ratio(num, 2 * den);
                let seq = CSequence::new(&q, 0.0).unwrap();
                for i in 0..30 {
                    let (a, b) = (seq.get(i), seq.get(i + 1));
                    prop_assert_eq!(classify(&(b - a), 0.0).is_positive(), true);
                }
            }

            #[test]
            fn exactly_one_label(num in -400i64..400, den in 1i64..100) {
                let t = Scalar::from_ratio(num, den);
                let c = classify(&t, 0.0);
                let v = num as f64 / den as f64;
                let expected = if v < -1.0 { ScalarClass::BelowMinusOne }
                    else if num == -den { ScalarClass::MinusOne }
                    else if v < 0.0 { ScalarClass::OpenNegative }
                    else if num == 0 { ScalarClass::Zero }
                    else if v < 1.0 { ScalarClass::OpenPositive }
                    else if num == den { ScalarClass::One }
                    else { ScalarClass::AboveOne };
                prop_assert_eq!(c, expected);
            }
        }
    }
}
