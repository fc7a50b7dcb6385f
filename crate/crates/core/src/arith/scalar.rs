//! Elements of `Q` or of a real quadratic field `Q(sqrt m)`.
//!
//! A [`Scalar`] is `a + b*sqrt(m)` with `a, b` reduced fractions. When
//! `b == 0` the radicand is dropped, so every pure rational has exactly one
//! representation. Arithmetic between two quadratic elements with different
//! radicands is a programming error and panics; inputs coming from files are
//! checked for a single radicand before any arithmetic happens.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::ArithError;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    rat: BigRational,
    rad: BigRational,
    /// 0 for pure rationals.
    root: u64,
}

/// True when `m >= 2` and no square larger than one divides it.
pub fn is_squarefree_radicand(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(n))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            rat: r,
            rad: BigRational::zero(),
            root: 0,
        }
    }

    /// `rat + rad * sqrt(m)`; `m` must be a squarefree integer `>= 2`.
    pub fn quadratic(rat: BigRational, rad: BigRational, m: u64) -> Result<Self, ArithError> {
        if !is_squarefree_radicand(m) {
            return Err(ArithError::BadRadicand(m));
        }
        Ok(Scalar { rat, rad, root: m }.normalized())
    }

    /// `sqrt(m)` itself.
    pub fn sqrt(m: u64) -> Result<Self, ArithError> {
        Scalar::quadratic(BigRational::zero(), BigRational::one(), m)
    }

    fn normalized(mut self) -> Self {
        if self.rad.is_zero() {
            self.root = 0;
        }
        self
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.rad
    }

    /// The radicand, or `None` for a rational value.
    pub fn radicand(&self) -> Option<u64> {
        (self.root != 0).then_some(self.root)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.rat.is_integer()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.rat.to_integer())
    }

    fn join_root(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, r) | (r, 0) => r,
            (r, s) if r == s => r,
            (r, s) => panic!("mixed radicands sqrt({r}) and sqrt({s}) in one computation"),
        }
    }

    /// Exact sign of `a + b*sqrt(m)`.
    pub fn signum(&self) -> i8 {
        let sa = rat_sign(&self.rat);
        let sb = rat_sign(&self.rad);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with m*b^2.
        let a2 = &self.rat * &self.rat;
        let mb2 = &self.rad * &self.rad * BigRational::from_integer(BigInt::from(self.root));
        match a2.cmp(&mb2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b*sqrt(m)`.
    pub fn conjugate(&self) -> Scalar {
        Scalar {
            rat: self.rat.clone(),
            rad: -self.rad.clone(),
            root: self.root,
        }
    }

    /// Field norm `a^2 - m b^2`.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat
            - &self.rad * &self.rad * BigRational::from_integer(BigInt::from(self.root))
    }

    pub fn recip(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        if self.is_rational() {
            return Scalar::from_rational(self.rat.recip());
        }
        let n = self.norm();
        Scalar {
            rat: &self.rat / &n,
            rad: -(&self.rad / &n),
            root: self.root,
        }
        .normalized()
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.rad.is_zero() {
            return a;
        }
        a + self.rad.to_f64().unwrap_or(f64::NAN) * (self.root as f64).sqrt()
    }

    /// Largest integer `k` with `k <= self`.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.rat.floor().to_integer();
        }
        let approx = self.to_f64().floor();
        let mut k = BigInt::from(approx as i64);
        while Scalar::from_bigint(k.clone()) > *self {
            k -= 1;
        }
        while Scalar::from_bigint(&k + 1) <= *self {
            k += 1;
        }
        k
    }

    /// Smallest integer `k` with `k >= self`.
    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }
}

fn rat_sign(r: &BigRational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl From<&BigInt> for Scalar {
    fn from(n: &BigInt) -> Self {
        Scalar::from_bigint(n.clone())
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            rat: &self.rat + &o.rat,
            rad: &self.rad + &o.rad,
            root: Scalar::join_root(self.root, o.root),
        }
        .normalized()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            rat: &self.rat - &o.rat,
            rad: &self.rad - &o.rad,
            root: Scalar::join_root(self.root, o.root),
        }
        .normalized()
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.rad.is_zero() && o.rad.is_zero() {
            return Scalar::from_rational(&self.rat * &o.rat);
        }
        let root = Scalar::join_root(self.root, o.root);
        let m = BigRational::from_integer(BigInt::from(root));
        Scalar {
            rat: &self.rat * &o.rat + &self.rad * &o.rad * m,
            rad: &self.rat * &o.rad + &self.rad * &o.rat,
            root,
        }
        .normalized()
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        if o.is_rational() {
            assert!(!o.rat.is_zero(), "division by zero");
            return Scalar {
                rat: &self.rat / &o.rat,
                rad: &self.rad / &o.rat,
                root: self.root,
            }
            .normalized();
        }
        self * &o.recip()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            rat: -self.rat,
            rad: -self.rad,
            root: self.root,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_frac(f: &mut fmt::Formatter<'_>, r: &BigRational, force_den: bool) -> fmt::Result {
    if !force_den && r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Rationals print as `p` or `p/q`; quadratic elements always as
/// `p/q+r/s*sqrt(m)` with both denominators written out.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write_frac(f, &self.rat, false);
        }
        write_frac(f, &self.rat, true)?;
        if !self.rad.is_negative() {
            write!(f, "+")?;
        }
        write_frac(f, &self.rad, true)?;
        write!(f, "*sqrt({})", self.root)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_frac(s: &str) -> Result<BigRational, ArithError> {
    let bad = || ArithError::Syntax(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    if n.is_empty() || n.starts_with('+') {
        return Err(bad());
    }
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = match d {
        Some(d) => {
            if d.is_empty() || d.starts_with(['+', '-']) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(ArithError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

/// Accepts `p`, `p/q`, `p/q+r/s*sqrt(m)`, `p/q-r/s*sqrt(m)`, `r/s*sqrt(m)`
/// and `sqrt(m)` (optionally signed).
impl FromStr for Scalar {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ArithError::Syntax(s.to_string());
        let Some(body) = s.strip_suffix(')') else {
            return Ok(Scalar::from_rational(parse_frac(s)?));
        };
        let open = body.rfind("sqrt(").ok_or_else(bad)?;
        let m: u64 = body[open + 5..].parse().map_err(|_| bad())?;
        let head = &body[..open];
        let (rat_text, coeff_text) = if head.is_empty() {
            ("", "1")
        } else if let Some(h) = head.strip_suffix('*').filter(|h| !h.is_empty()) {
            // split between rational part and radical coefficient at the last sign
            // that is not at position 0
            match h[1..].rfind(['+', '-']).map(|i| i + 1) {
                Some(i) => (&h[..i], &h[i..]),
                None => ("", h),
            }
        } else if head == "-" || head == "+" {
            ("", if head == "-" { "-1" } else { "1" })
        } else if let Some(r) = head.strip_suffix('+') {
            (r, "1")
        } else if let Some(r) = head.strip_suffix('-') {
            (r, "-1")
        } else {
            return Err(bad());
        };
        let rat = if rat_text.is_empty() {
            BigRational::zero()
        } else {
            parse_frac(rat_text)?
        };
        let coeff = parse_frac(coeff_text.strip_prefix('+').unwrap_or(coeff_text))?;
        Scalar::quadratic(rat, coeff, m)
    }
}

/// Single radicand shared by all given scalars, or an error when two differ.
pub fn common_radicand<'a>(
    values: impl IntoIterator<Item = &'a Scalar>,
) -> Result<Option<u64>, ArithError> {
    let mut seen: Option<u64> = None;
    for v in values {
        if let Some(m) = v.radicand() {
            match seen {
                None => seen = Some(m),
                Some(s) if s == m => {}
                Some(s) => return Err(ArithError::MixedRadicands(s, m)),
            }
        }
    }
    Ok(seen)
}

/// `gcd` of a list of integers, zero for an empty or all-zero list.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |g, v| g.gcd(v))
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |l, v| {
        if v.is_zero() {
            l
        } else {
            l.lcm(v)
        }
    })
}
