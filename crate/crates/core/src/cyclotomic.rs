//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! A [`CycNumber`] of order `m` stores a dense vector `c_0, …, c_{m-1}` of
//! rationals (as integer numerators over one common denominator) and denotes
//! `Σ c_i ζ_m^i` with `ζ_m = e^{2πi/m}`. Arithmetic works modulo `x^m − 1`;
//! reduction modulo the cyclotomic polynomial `Φ_m` happens only when a
//! canonical form is needed (equality, zero tests, rational extraction).

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "CycRepr", try_from = "CycRepr")]
pub struct CycNumber {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

#[derive(Serialize, Deserialize)]
struct CycRepr {
    order: u32,
    coeffs: Vec<String>,
}

impl From<CycNumber> for CycRepr {
    fn from(c: CycNumber) -> Self {
        CycRepr {
            order: c.order,
            coeffs: c.coeffs().iter().map(|r| r.to_string()).collect(),
        }
    }
}

impl TryFrom<CycRepr> for CycNumber {
    type Error = Error;

    fn try_from(r: CycRepr) -> Result<Self> {
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        CycNumber::new(r.order, coeffs)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<BigInt>> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(p) = phi_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let divisor = cyclotomic_polynomial(d);
            poly = exact_div_monic(&poly, &divisor);
        }
    }
    let poly = Arc::new(poly);
    phi_cache().lock().unwrap().insert(m, poly.clone());
    poly
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (db..a.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for (t, bt) in b.iter().enumerate() {
            rem[i - db + t] -= &c * bt;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Split a big integer as `mantissa · 2^exponent` with a finite f64 mantissa.
fn split_f64(x: &BigInt) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 1000 {
        return (x.to_f64().unwrap_or(0.0), 0);
    }
    let shift = bits - 64;
    let top = x >> shift;
    (top.to_f64().unwrap_or(0.0), shift as i64)
}

impl CycNumber {
    /// Builds `Σ coeffs[i] ζ_order^i`.
    pub fn new(order: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("cyclotomic order must be positive".into()));
        }
        if coeffs.len() != order as usize {
            return Err(Error::InvalidArgument(format!(
                "order {order} needs {order} coefficients, got {}",
                coeffs.len()
            )));
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut out = CycNumber { order, num, den };
        out.normalize();
        Ok(out)
    }

    pub fn zero() -> Self {
        Self::from_integer(BigInt::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(BigInt::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        CycNumber {
            order: 1,
            num: vec![n.into()],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        CycNumber {
            order: 1,
            num: vec![r.numer().clone()],
            den: r.denom().clone(),
        }
    }

    /// `ζ_m^e`.
    pub fn root_of_unity(m: u32, e: i64) -> Self {
        assert!(m >= 1);
        let idx = e.rem_euclid(m as i64) as usize;
        let mut num = vec![BigInt::zero(); m as usize];
        num[idx] = BigInt::one();
        CycNumber {
            order: m,
            num,
            den: BigInt::one(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients `c_i` in the (unreduced) basis `ζ^i`, `i < order`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    fn normalize(&mut self) {
        if self.den.is_one() {
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for n in &mut self.num {
                *n = -&*n;
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |acc, n| acc.gcd(n));
        if !g.is_one() {
            for n in &mut self.num {
                *n /= &g;
            }
            self.den /= &g;
        }
    }

    /// The same number written in order `target` (a multiple of `self.order`).
    pub fn lift(&self, target: u32) -> Self {
        assert!(target.is_multiple_of(self.order), "lift target must be a multiple of the order");
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut num = vec![BigInt::zero(); target as usize];
        for (i, c) in self.num.iter().enumerate() {
            num[i * step] = c.clone();
        }
        CycNumber {
            order: target,
            num,
            den: self.den.clone(),
        }
    }

    fn common_order(a: &Self, b: &Self) -> u32 {
        arith::lcm(a.order as u64, b.order as u64) as u32
    }

    fn quick_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Canonical representative: numerator reduced modulo `Φ_order`, so
    /// only the first `φ(order)` coefficients can be nonzero. Idempotent.
    pub fn reduced(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let phi = cyclotomic_polynomial(self.order);
        let d = phi.len() - 1;
        let mut r = self.num.clone();
        for i in (d..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut r[i]);
            for (t, pt) in phi.iter().enumerate().take(d) {
                if !pt.is_zero() {
                    r[i - d + t] -= &c * pt;
                }
            }
        }
        let mut out = CycNumber {
            order: self.order,
            num: r,
            den: self.den.clone(),
        };
        if !out.den.is_one() {
            out.normalize();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        if self.quick_zero() {
            return true;
        }
        if self.order == 1 {
            return false;
        }
        self.reduced().quick_zero()
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        let r = if self.order == 1 { self.clone() } else { self.reduced() };
        if r.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(r.num[0].clone(), r.den.clone()))
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let mut out = CycNumber {
            order: self.order,
            num: self.num.iter().map(|n| n * k).collect(),
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = CycNumber {
            order: self.order,
            num: self.num.iter().map(|n| n * r.numer()).collect(),
            den: &self.den * r.denom(),
        };
        out.normalize();
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CycNumber::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugate (`ζ^i ↦ ζ^{-i}`).
    pub fn conj(&self) -> Self {
        let m = self.order as usize;
        let mut num = vec![BigInt::zero(); m];
        for (i, c) in self.num.iter().enumerate() {
            num[(m - i) % m] = c.clone();
        }
        CycNumber {
            order: self.order,
            num,
            den: self.den.clone(),
        }
    }

    /// Complex embedding with `ζ_m ↦ e^{2πi/m}`.
    pub fn embed(&self) -> Complex64 {
        self.embed_scaled(0.0)
    }

    /// Complex embedding divided by `2^log2_scale`; stays finite for
    /// values far beyond the f64 range as long as the quotient is moderate.
    pub fn embed_scaled(&self, log2_scale: f64) -> Complex64 {
        let (dm, de) = split_f64(&self.den);
        let m = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (cm, ce) = split_f64(c);
            let mag = cm / dm * ((ce - de) as f64 - log2_scale).exp2();
            let angle = 2.0 * std::f64::consts::PI * (i as f64) / m;
            acc += Complex64::from_polar(1.0, angle) * mag;
        }
        acc
    }

    /// Exact textual form `c0;c1;…;c{m-1}` used by the exact CSV export.
    pub fn to_exact_string(&self) -> String {
        self.coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn from_exact_parts(order: u32, vector: &str) -> Result<Self> {
        let coeffs = vector
            .split(';')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        CycNumber::new(order, coeffs)
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == 1 && other.order == 1 {
            return self.num[0] == other.num[0] && self.den == other.den;
        }
        (self - other).is_zero()
    }
}

impl Eq for CycNumber {}

impl Default for CycNumber {
    fn default() -> Self {
        CycNumber::zero()
    }
}

impl From<i64> for CycNumber {
    fn from(n: i64) -> Self {
        CycNumber::from_integer(n)
    }
}

impl From<BigInt> for CycNumber {
    fn from(n: BigInt) -> Self {
        CycNumber::from_integer(n)
    }
}

fn lifted(x: &CycNumber, order: u32) -> Cow<'_, CycNumber> {
    if x.order == order {
        Cow::Borrowed(x)
    } else {
        Cow::Owned(x.lift(order))
    }
}

fn add_sub(a: &CycNumber, b: &CycNumber, negate_b: bool) -> CycNumber {
    let order = CycNumber::common_order(a, b);
    let (x, y) = (lifted(a, order), lifted(b, order));
    let same_den = x.den == y.den;
    let num = x
        .num
        .iter()
        .zip(&y.num)
        .map(|(u, v)| {
            let (u, v) = if same_den {
                (u.clone(), v.clone())
            } else {
                (u * &y.den, v * &x.den)
            };
            if negate_b {
                u - v
            } else {
                u + v
            }
        })
        .collect();
    let den = if same_den { x.den.clone() } else { &x.den * &y.den };
    let mut out = CycNumber { order, num, den };
    out.normalize();
    out
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        add_sub(self, rhs, false)
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        add_sub(self, rhs, true)
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        if self.order == 1 && rhs.order == 1 {
            let mut out = CycNumber {
                order: 1,
                num: vec![&self.num[0] * &rhs.num[0]],
                den: &self.den * &rhs.den,
            };
            out.normalize();
            return out;
        }
        if self.order == 1 {
            return rhs.scale(&BigRational::new(self.num[0].clone(), self.den.clone()));
        }
        if rhs.order == 1 {
            return self.scale(&BigRational::new(rhs.num[0].clone(), rhs.den.clone()));
        }
        let order = CycNumber::common_order(self, rhs);
        let a = self.lift(order);
        let b = rhs.lift(order);
        let m = order as usize;
        let mut num = vec![BigInt::zero(); m];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    num[(i + j) % m] += x * y;
                }
            }
        }
        let mut out = CycNumber {
            order,
            num,
            den: &a.den * &b.den,
        };
        out.normalize();
        out
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            order: self.order,
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let r = self.reduced();
        let mut first = true;
        for (i, c) in r.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*z{}^{i}", r.order)?;
            }
        }
        Ok(())
    }
}
