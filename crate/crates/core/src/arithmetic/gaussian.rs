use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use super::{ComplexApprox, Negligibility, Scalar, ToleranceProfile};
use crate::error::{Error, Result};

/// An exact complex number `re + im·i` with rational parts.
///
/// Both parts are kept in lowest terms by `RBig`, so structural equality is
/// exact equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: RBig,
    im: RBig,
}

impl GaussianRational {
    pub fn new(re: RBig, im: RBig) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: RBig) -> Self {
        GaussianRational { re, im: RBig::ZERO }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(RBig::from(v))
    }

    /// `num/den` as a real value. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::real(RBig::from_parts_signed(IBig::from(num), IBig::from(den)))
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        GaussianRational {
            re: RBig::from_parts_signed(IBig::from(re_num), IBig::from(re_den)),
            im: RBig::from_parts_signed(IBig::from(im_num), IBig::from(im_den)),
        }
    }

    pub fn i() -> Self {
        GaussianRational { re: RBig::ZERO, im: RBig::ONE }
    }

    pub fn re(&self) -> &RBig {
        &self.re
    }

    pub fn im(&self) -> &RBig {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> RBig {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|re| + |im|`, an upper bound for the modulus that stays rational.
    pub fn abs_bound(&self) -> RBig {
        abs_rat(&self.re) + abs_rat(&self.im)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussianRational::from_int(1);
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    pub fn to_approx(&self, precision: usize) -> ComplexApprox {
        ComplexApprox::from_rationals(&self.re, &self.im, precision)
    }
}

fn abs_rat(x: &RBig) -> RBig {
    if x < &RBig::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

fn fmt_rat(x: &RBig, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let num = x.numerator();
    let den = x.denominator();
    if *den == UBig::ONE {
        write!(f, "{num}")
    } else {
        write!(f, "{num}/{den}")
    }
}

/// Canonical text form: `a/b+c/di`, dropping a zero part, `0` for zero.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show_re = !self.re.is_zero() || self.im.is_zero();
        if show_re {
            fmt_rat(&self.re, f)?;
        }
        if !self.im.is_zero() {
            if show_re && self.im > RBig::ZERO {
                f.write_str("+")?;
            }
            fmt_rat(&self.im, f)?;
            f.write_str("i")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussianRational({self})")
    }
}

fn parse_error(message: impl Into<String>, offset: usize) -> Error {
    Error::Parse { message: message.into(), offset }
}

fn parse_digits(s: &str, offset: usize) -> Result<UBig> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(format!("expected digits, found {s:?}"), offset));
    }
    UBig::from_str(s).map_err(|e| parse_error(e.to_string(), offset))
}

/// Parses `[sign]digits[/digits]`. An empty body (after the sign) is only
/// accepted when `empty_is_one` is set, which covers the bare `i` / `-i`
/// imaginary unit.
fn parse_rational(s: &str, offset: usize, empty_is_one: bool) -> Result<RBig> {
    let (negative, body, body_offset) = match s.as_bytes().first() {
        Some(b'+') => (false, &s[1..], offset + 1),
        Some(b'-') => (true, &s[1..], offset + 1),
        _ => (false, s, offset),
    };
    if body.is_empty() {
        if empty_is_one {
            return Ok(if negative { -RBig::ONE } else { RBig::ONE });
        }
        return Err(parse_error("missing number", body_offset));
    }
    let value = match body.split_once('/') {
        Some((num, den)) => {
            let n = parse_digits(num, body_offset)?;
            let d = parse_digits(den, body_offset + num.len() + 1)?;
            if d == UBig::ZERO {
                return Err(parse_error("zero denominator", body_offset + num.len() + 1));
            }
            RBig::from_parts(IBig::from(n), d)
        }
        None => RBig::from(IBig::from(parse_digits(body, body_offset)?)),
    };
    Ok(if negative { -value } else { value })
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(parse_error("empty scalar", 0));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(GaussianRational::real(parse_rational(s, 0, false)?));
        };
        // the imaginary part starts at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(pos, c)| pos > 0 && (c == '+' || c == '-'))
            .map(|(pos, _)| pos)
            .next_back();
        match split {
            Some(pos) => Ok(GaussianRational {
                re: parse_rational(&body[..pos], 0, false)?,
                im: parse_rational(&body[pos..], pos, true)?,
            }),
            None => Ok(GaussianRational { re: RBig::ZERO, im: parse_rational(body, 0, true)? }),
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn add(self, rhs: &'a GaussianRational) -> Self {
        GaussianRational { re: self.re + &rhs.re, im: self.im + &rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: &'a GaussianRational) -> Self {
        GaussianRational { re: self.re - &rhs.re, im: self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: &'a GaussianRational) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        GaussianRational::from_int(v)
    }
}

impl From<RBig> for GaussianRational {
    fn from(v: RBig) -> Self {
        GaussianRational::real(v)
    }
}

impl Scalar for GaussianRational {
    type Ctx = ();
    type Mag = RBig;
    const EXACT: bool = true;

    fn context(&self) -> Self::Ctx {}

    fn zero(_: ()) -> Self {
        GaussianRational::default()
    }

    fn one(_: ()) -> Self {
        GaussianRational::from_int(1)
    }

    fn from_i64(v: i64, _: ()) -> Self {
        GaussianRational::from_int(v)
    }

    fn from_gaussian(v: &GaussianRational, _: ()) -> Self {
        v.clone()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn recip(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussianRational::real(RBig::ONE / &self.re));
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    fn magnitude(&self) -> RBig {
        self.norm_sqr()
    }

    fn zero_mag(_: ()) -> RBig {
        RBig::ZERO
    }

    fn classify(mag: &RBig, _scale: &RBig, _tol: &ToleranceProfile) -> Negligibility {
        if mag.is_zero() {
            Negligibility::Zero
        } else {
            Negligibility::Significant
        }
    }

    fn power_scale(m: &RBig, _e: usize) -> RBig {
        m.clone()
    }

    fn to_approx(&self, precision: usize) -> ComplexApprox {
        GaussianRational::to_approx(self, precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gr(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(gr("3"), GaussianRational::from_int(3));
        assert_eq!(gr("-1/2i"), GaussianRational::from_parts(0, 1, -1, 2));
        assert_eq!(gr("2+1i"), GaussianRational::from_parts(2, 1, 1, 1));
        assert_eq!(gr("1/2+3i"), GaussianRational::from_parts(1, 2, 3, 1));
        assert_eq!(gr("-4/6-2/8i"), GaussianRational::from_parts(-2, 3, -1, 4));
        assert_eq!(gr("i"), GaussianRational::i());
        assert_eq!(gr("-i"), -GaussianRational::i());
        assert_eq!(gr("+5"), GaussianRational::from_int(5));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/0", "1/", "/2", "1.5", "1+", "++1", "1+2", "abc", "1 + 2i", "2ii", "1/-2"] {
            assert!(bad.parse::<GaussianRational>().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn canonical_print() {
        assert_eq!(gr("0").to_string(), "0");
        assert_eq!(gr("-0i").to_string(), "0");
        assert_eq!(gr("2/4").to_string(), "1/2");
        assert_eq!(gr("-1/2i").to_string(), "-1/2i");
        assert_eq!(gr("2+1i").to_string(), "2+1i");
        assert_eq!(gr("2-1i").to_string(), "2-1i");
    }

    #[test]
    fn reciprocal_is_exact() {
        let z = gr("3/2-7i");
        let r = z.recip().unwrap();
        assert_eq!(z * &r, GaussianRational::from_int(1));
        assert!(GaussianRational::default().recip().is_none());
    }

    fn arb_gaussian() -> impl Strategy<Value = GaussianRational> {
        (-1000i64..1000, 1i64..200, -1000i64..1000, 1i64..200)
            .prop_map(|(a, b, c, d)| GaussianRational::from_parts(a, b, c, d))
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(z in arb_gaussian()) {
            let text = z.to_string();
            let back: GaussianRational = text.parse().unwrap();
            prop_assert_eq!(&back, &z);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn field_axioms_hold_exactly(a in arb_gaussian(), b in arb_gaussian(), c in arb_gaussian()) {
            prop_assert_eq!((a.clone() + &b) * &c, a.clone() * &c + b.clone() * &c);
            prop_assert_eq!(a.clone() - &a, GaussianRational::default());
            if let Some(r) = b.recip() {
                prop_assert_eq!(b * &r, GaussianRational::from_int(1));
            }
        }
    }
}
