use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::{Context, FBig};
use dashu_int::ops::{BitTest, UnsignedAbs};
use dashu_int::IBig;
use dashu_ratio::RBig;

use super::{GaussianRational, Negligibility, Scalar, ToleranceProfile};

/// Binary arbitrary-precision real.
pub type Real = FBig<HalfEven, 2>;

/// Extra bits carried through iterative refinements before the final rounding.
const GUARD_BITS: usize = 32;

pub(crate) fn real_from_int(v: impl Into<IBig>, precision: usize) -> Real {
    Real::from(v.into()).with_precision(precision).value()
}

pub(crate) fn real_zero(precision: usize) -> Real {
    real_from_int(0, precision)
}

pub(crate) fn real_from_f64(v: f64, precision: usize) -> Real {
    Real::try_from(v).expect("finite f64").with_precision(precision).value()
}

pub(crate) fn real_from_rational(q: &RBig, precision: usize) -> Real {
    if q.is_zero() {
        return real_zero(precision);
    }
    let work = precision + 8;
    let num = Real::from(q.numerator().clone()).with_precision(work).value();
    let den = Real::from(IBig::from(q.denominator().clone())).with_precision(work).value();
    (num / den).with_precision(precision).value()
}

/// `2^e` at the given precision.
pub(crate) fn pow2(e: isize, precision: usize) -> Real {
    Real::from_parts(IBig::ONE, e).with_precision(precision).value()
}

pub(crate) fn real_abs(x: &Real) -> Real {
    if x.repr().significand() < &IBig::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

pub(crate) fn real_sqrt(x: &Real) -> Real {
    Context::<HalfEven>::new(x.precision()).sqrt(x.repr()).value()
}

/// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
pub(crate) fn binary_exponent(x: &Real) -> Option<isize> {
    let repr = x.repr();
    if repr.is_zero() {
        return None;
    }
    let bits = repr.significand().unsigned_abs().bit_len() as isize;
    Some(repr.exponent() + bits)
}

/// Best rational approximation of `x` by continued fractions, returned once a
/// convergent agrees with `x` to about half the working precision. Callers
/// must verify the candidate; this only proposes it.
pub(crate) fn recognize_rational(x: &Real) -> Option<RBig> {
    let p = x.precision();
    let target = (p / 2) as isize;
    let mut rest = x.clone();
    let (mut h_prev, mut h) = (IBig::ZERO, IBig::ONE);
    let (mut k_prev, mut k) = (IBig::ONE, IBig::ZERO);
    for _ in 0..128 {
        let a = rest.floor().to_int().value();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let cand = RBig::from_parts_signed(h.clone(), k.clone());
        let err = real_abs(&(x.clone() - real_from_rational(&cand, p)));
        let scale = binary_exponent(x).unwrap_or(0).max(0);
        match binary_exponent(&err) {
            None => return Some(cand),
            Some(e) if e < scale - target => return Some(cand),
            _ => {}
        }
        let frac = rest.clone() - Real::from(a).with_precision(p).value();
        if frac.repr().is_zero() {
            return Some(cand);
        }
        rest = real_from_int(1, p) / frac;
    }
    None
}

/// Arbitrary-precision complex number.
///
/// Both parts always carry the same non-zero working precision.
#[derive(Clone, PartialEq)]
pub struct ComplexApprox {
    pub re: Real,
    pub im: Real,
}

impl ComplexApprox {
    pub fn new(re: Real, im: Real) -> Self {
        let p = re.precision().max(im.precision()).max(1);
        ComplexApprox { re: re.with_precision(p).value(), im: im.with_precision(p).value() }
    }

    pub fn from_f64(re: f64, im: f64, precision: usize) -> Self {
        ComplexApprox { re: real_from_f64(re, precision), im: real_from_f64(im, precision) }
    }

    pub fn from_rationals(re: &RBig, im: &RBig, precision: usize) -> Self {
        ComplexApprox { re: real_from_rational(re, precision), im: real_from_rational(im, precision) }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.precision();
        ComplexApprox { re, im: real_zero(p) }
    }

    pub fn precision(&self) -> usize {
        self.re.precision()
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        ComplexApprox {
            re: self.re.clone().with_precision(precision).value(),
            im: self.im.clone().with_precision(precision).value(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexApprox { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        real_sqrt(&self.norm_sqr())
    }

    /// `max(|re|, |im|)`: within a factor `sqrt 2` of the modulus.
    pub fn max_abs(&self) -> Real {
        let a = real_abs(&self.re);
        let b = real_abs(&self.im);
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn scale(&self, s: &Real) -> Self {
        ComplexApprox { re: &self.re * s, im: &self.im * s }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }

    pub fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexApprox::one(self.precision());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    pub fn one(precision: usize) -> Self {
        ComplexApprox { re: real_from_int(1, precision), im: real_zero(precision) }
    }

    pub fn zero(precision: usize) -> Self {
        ComplexApprox { re: real_zero(precision), im: real_zero(precision) }
    }

    /// Decimal rendering with `digits` significant digits per part.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let re = format_real(&self.re, digits);
        if self.im.repr().is_zero() {
            return re;
        }
        let im = format_real(&self.im, digits);
        if self.re.repr().is_zero() {
            return format!("{im}i");
        }
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

/// Number of decimal digits that a binary precision resolves.
pub fn decimal_digits(precision_bits: usize) -> usize {
    ((precision_bits as f64) * std::f64::consts::LOG10_2).ceil() as usize
}

/// Scientific notation (`-1.25e-40`) built from the rounded decimal significand,
/// plain notation for moderate exponents, trailing zeros removed.
pub fn format_real(x: &Real, digits: usize) -> String {
    if x.repr().is_zero() {
        return "0".to_string();
    }
    let dec = x.clone().with_precision(x.precision().max(1)).value().to_decimal().value();
    let dec = dec.with_precision(digits.max(1)).value();
    let repr = dec.repr();
    let negative = repr.significand() < &IBig::ZERO;
    let mut mantissa = repr.significand().unsigned_abs().to_string();
    let mut exp = repr.exponent();
    while mantissa.len() > 1 && mantissa.ends_with('0') {
        mantissa.pop();
        exp += 1;
    }
    let sci = exp + mantissa.len() as isize - 1;
    let sign = if negative { "-" } else { "" };
    let body = if (-6..=20).contains(&sci) {
        if exp >= 0 {
            format!("{mantissa}{}", "0".repeat(exp as usize))
        } else {
            let point = mantissa.len() as isize + exp;
            if point > 0 {
                let (int, frac) = mantissa.split_at(point as usize);
                format!("{int}.{frac}")
            } else {
                format!("0.{}{mantissa}", "0".repeat((-point) as usize))
            }
        }
    } else {
        let (lead, rest) = mantissa.split_at(1);
        if rest.is_empty() {
            format!("{lead}e{sci}")
        } else {
            format!("{lead}.{rest}e{sci}")
        }
    };
    format!("{sign}{body}")
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(decimal_digits(self.precision())))
    }
}

impl fmt::Debug for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexApprox({}; {} bits)", self.to_decimal_string(20), self.precision())
    }
}

impl Add for ComplexApprox {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ComplexApprox { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a ComplexApprox> for ComplexApprox {
    type Output = Self;
    fn add(self, rhs: &'a ComplexApprox) -> Self {
        ComplexApprox { re: self.re + &rhs.re, im: self.im + &rhs.im }
    }
}

impl Sub for ComplexApprox {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ComplexApprox { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Sub<&'a ComplexApprox> for ComplexApprox {
    type Output = Self;
    fn sub(self, rhs: &'a ComplexApprox) -> Self {
        ComplexApprox { re: self.re - &rhs.re, im: self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a ComplexApprox> for ComplexApprox {
    type Output = Self;
    fn mul(self, rhs: &'a ComplexApprox) -> Self {
        ComplexApprox {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for ComplexApprox {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl Neg for ComplexApprox {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexApprox { re: -self.re, im: -self.im }
    }
}

impl Scalar for ComplexApprox {
    type Ctx = usize;
    type Mag = Real;
    const EXACT: bool = false;

    fn context(&self) -> usize {
        self.precision()
    }

    fn zero(p: usize) -> Self {
        ComplexApprox::zero(p)
    }

    fn one(p: usize) -> Self {
        ComplexApprox::one(p)
    }

    fn from_i64(v: i64, p: usize) -> Self {
        ComplexApprox { re: real_from_int(v, p), im: real_zero(p) }
    }

    fn from_gaussian(v: &GaussianRational, p: usize) -> Self {
        v.to_approx(p)
    }

    fn is_zero(&self) -> bool {
        self.re.repr().is_zero() && self.im.repr().is_zero()
    }

    fn recip(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let n = self.norm_sqr();
        Some(ComplexApprox { re: &self.re / &n, im: -(&self.im / &n) })
    }

    fn magnitude(&self) -> Real {
        self.max_abs()
    }

    fn zero_mag(p: usize) -> Real {
        real_zero(p)
    }

    fn classify(mag: &Real, scale: &Real, tol: &ToleranceProfile) -> Negligibility {
        let threshold = scale * real_from_f64(tol.eps_rank, mag.precision().max(scale.precision()).max(1));
        if mag <= &threshold {
            Negligibility::Zero
        } else if *mag <= threshold * real_from_int(8, mag.precision().max(1)) {
            Negligibility::Fragile
        } else {
            Negligibility::Significant
        }
    }

    fn power_scale(m: &Real, e: usize) -> Real {
        let p = m.precision().max(1);
        let one = real_from_int(1, p);
        let base = if *m > one { m.clone() } else { one.clone() };
        (0..e).fold(one, |acc, _| acc * &base)
    }

    fn to_approx(&self, precision: usize) -> ComplexApprox {
        self.with_precision(precision)
    }
}

/// Principal `k`-th root (argument in `(-pi/k, pi/k]`), so `-1` maps to
/// `e^{i pi/k}` and in particular `i` for `k = 2`.
///
/// Seeded in `f64` from a log-scaled polar form (safe for any exponent), then
/// refined by Newton's iteration at the working precision plus guard bits.
pub fn kth_root_scalar(z: &ComplexApprox, k: u32) -> ComplexApprox {
    assert!(k >= 1, "root order must be positive");
    let p = z.precision();
    if k == 1 || Scalar::is_zero(z) {
        return z.clone();
    }
    let work = p + GUARD_BITS;
    let zw = z.with_precision(work);

    let e = binary_exponent(&zw.max_abs()).expect("non-zero");
    let unit = zw.scale(&pow2(-e, work));
    let (a, b) = unit.to_c64();
    let theta = b.atan2(a);
    let log2_mod = a.hypot(b).log2() + e as f64;
    let target = log2_mod / k as f64;
    let int_part = target.floor();
    let frac = target - int_part;
    let r = frac.exp2();
    let ang = theta / k as f64;
    let seed = ComplexApprox::from_f64(r * ang.cos(), r * ang.sin(), work);
    let mut w = seed.scale(&pow2(int_part as isize, work));

    let kk = ComplexApprox::from_i64(k as i64, work);
    let km1 = ComplexApprox::from_i64(k as i64 - 1, work);
    let k_inv = kk.recip().expect("k > 0");
    for _ in 0..200 {
        let wk1 = w.powu(k - 1);
        let next = (km1.clone() * &w + zw.clone() * &wk1.recip().expect("non-zero iterate")) * &k_inv;
        let delta = (next.clone() - &w).max_abs();
        let size = next.max_abs();
        w = next;
        let converged = match (binary_exponent(&delta), binary_exponent(&size)) {
            (None, _) => true,
            (Some(d), Some(s)) => d < s - (p as isize) - 8,
            (Some(_), None) => false,
        };
        if converged {
            break;
        }
    }
    w.with_precision(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_err(a: &ComplexApprox, b: &ComplexApprox) -> f64 {
        let d = (a.clone() - b).abs();
        let s = b.abs();
        (d / s).to_f64().value()
    }

    #[test]
    fn principal_branch_of_minus_one() {
        let z = ComplexApprox::from_f64(-1.0, 0.0, 128);
        let w = kth_root_scalar(&z, 2);
        let (a, b) = w.to_c64();
        assert!(a.abs() < 1e-30 && (b - 1.0).abs() < 1e-30, "{w:?}");
        let w3 = kth_root_scalar(&z, 3);
        let (a, b) = w3.to_c64();
        assert!((a - 0.5).abs() < 1e-15 && (b - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn root_of_large_and_tiny_values() {
        for &(e, k) in &[(5000isize, 3u32), (-7000, 5), (40, 2), (0, 7)] {
            let z = ComplexApprox::from_f64(3.0, -2.0, 256).scale(&pow2(e, 256));
            let w = kth_root_scalar(&z, k);
            let back = w.powu(k);
            assert!(rel_err(&back, &z) < (k as f64) * 2f64.powi(2 - 256), "e={e} k={k}");
        }
    }

    #[test]
    fn formats_decimals() {
        assert_eq!(format_real(&real_from_int(0, 64), 10), "0");
        assert_eq!(format_real(&real_from_f64(0.5, 64), 10), "0.5");
        assert_eq!(format_real(&real_from_f64(-1250.0, 64), 10), "-1250");
        assert_eq!(format_real(&pow2(-100, 64), 5), "7.8886e-31");
        let z = ComplexApprox::from_f64(1.0, -2.0, 64);
        assert_eq!(z.to_decimal_string(10), "1-2i");
    }

    #[test]
    fn rational_conversion_is_accurate() {
        let q = RBig::from_parts(IBig::from(1), dashu_int::UBig::from(3u8));
        let x = real_from_rational(&q, 200);
        let back = x * real_from_int(3, 200) - real_from_int(1, 200);
        assert!(real_abs(&back) <= pow2(-198, 200));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn kth_root_accuracy(re in -1e6f64..1e6, im in -1e6f64..1e6, k in 1u32..9) {
            prop_assume!(re != 0.0 || im != 0.0);
            let z = ComplexApprox::from_f64(re, im, 192);
            let w = kth_root_scalar(&z, k);
            prop_assert!(rel_err(&w.powu(k), &z) <= (k as f64) * 2f64.powi(2 - 192) * 4.0);
            let arg = { let (a, b) = w.to_c64(); b.atan2(a) };
            let bound = std::f64::consts::PI / k as f64;
            prop_assert!(arg > -bound - 1e-12 && arg <= bound + 1e-12);
        }
    }
}
