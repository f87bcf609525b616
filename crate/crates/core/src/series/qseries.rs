use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::Zero;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};

/// Rational exponent offset; eta products have denominators dividing 24.
pub type Offset = Ratio<i64>;

fn zero_coeff() -> &'static CycNumber {
    static ZERO: OnceLock<CycNumber> = OnceLock::new();
    ZERO.get_or_init(CycNumber::zero)
}

/// Truncated q-series `Σ_{n < precision} c_n q^{offset + n} + O(q^{offset + precision})`.
///
/// Coefficients are stored sparsely; absent indices below the precision
/// are zero, indices at or beyond it are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    offset: Offset,
    coeffs: BTreeMap<u64, CycNumber>,
    precision: u64,
}

impl QSeries {
    pub fn zero(offset: Offset, precision: u64) -> Self {
        QSeries {
            offset,
            coeffs: BTreeMap::new(),
            precision,
        }
    }

    pub fn one(precision: u64) -> Self {
        Self::monomial(Offset::zero(), 0, CycNumber::one(), precision)
    }

    pub fn monomial(offset: Offset, index: u64, c: CycNumber, precision: u64) -> Self {
        let mut s = Self::zero(offset, precision);
        s.set(index, c);
        s
    }

    /// Builds a series from `(index, coefficient)` pairs; pairs at or past
    /// `precision` are dropped and exact zeros are not stored.
    pub fn from_coeffs(
        offset: Offset,
        precision: u64,
        coeffs: impl IntoIterator<Item = (u64, CycNumber)>,
    ) -> Self {
        let mut s = Self::zero(offset, precision);
        for (n, c) in coeffs {
            s.set(n, c);
        }
        s
    }

    /// Dense integer coefficients `c_0, c_1, …`; precision is the length.
    pub fn from_integers<I, T>(offset: Offset, coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<num_bigint::BigInt>,
    {
        let mut s = Self::zero(offset, 0);
        let mut len = 0;
        for (n, c) in coeffs.into_iter().enumerate() {
            let c: num_bigint::BigInt = c.into();
            if !c.is_zero() {
                s.coeffs.insert(n as u64, CycNumber::from_integer(c));
            }
            len = n as u64 + 1;
        }
        s.precision = len;
        s
    }

    fn set(&mut self, n: u64, c: CycNumber) {
        if n >= self.precision {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    pub fn offset(&self) -> Offset {
        self.offset
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn has_integral_offset(&self) -> bool {
        self.offset.is_integer()
    }

    /// Coefficient at index `n` (exponent `offset + n`); `None` past precision.
    pub fn coeff(&self, n: u64) -> Option<&CycNumber> {
        if n >= self.precision {
            None
        } else {
            Some(self.coeffs.get(&n).unwrap_or(zero_coeff()))
        }
    }

    /// Stored nonzero coefficients in increasing index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, &CycNumber)> {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    /// Drops everything at or beyond index `precision`.
    pub fn truncate(&self, precision: u64) -> Self {
        let precision = precision.min(self.precision);
        QSeries {
            offset: self.offset,
            coeffs: self
                .coeffs
                .range(..precision)
                .map(|(&n, c)| (n, c.clone()))
                .collect(),
            precision,
        }
    }

    /// Re-indexes a series with integral offset so that index equals exponent
    /// (offset 0). Fails on fractional or negative offsets.
    pub fn normalize_integral(&self) -> Result<Self> {
        if !self.offset.is_integer() || *self.offset.numer() < 0 {
            return Err(Error::NonIntegralOffset(self.offset.to_string()));
        }
        let shift = self.offset.to_integer() as u64;
        Ok(QSeries {
            offset: Offset::zero(),
            coeffs: self.coeffs.iter().map(|(&n, c)| (n + shift, c.clone())).collect(),
            precision: self.precision + shift,
        })
    }

    /// `f(q) ↦ f(q^d)`.
    pub fn stretch(&self, d: u64) -> Self {
        assert!(d >= 1);
        QSeries {
            offset: self.offset * d as i64,
            coeffs: self.coeffs.iter().map(|(&n, c)| (n * d, c.clone())).collect(),
            precision: self.precision * d,
        }
    }

    /// Absolute exponent bound (offset + precision) used by the min rule.
    fn horizon(&self) -> Offset {
        self.offset + Offset::from_integer(self.precision as i64)
    }

    fn aligned(&self, other: &Self) -> Result<(Offset, u64, i64, i64)> {
        let diff = self.offset - other.offset;
        if !diff.is_integer() {
            return Err(Error::OffsetMismatch(self.offset.to_string(), other.offset.to_string()));
        }
        let base = self.offset.min(other.offset);
        let horizon = self.horizon().min(other.horizon());
        let precision = (horizon - base).to_integer().max(0) as u64;
        let sa = (self.offset - base).to_integer();
        let sb = (other.offset - base).to_integer();
        Ok((base, precision, sa, sb))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self> {
        let (base, precision, sa, sb) = self.aligned(other)?;
        let mut out: BTreeMap<u64, CycNumber> = BTreeMap::new();
        for (&n, c) in &self.coeffs {
            let idx = n + sa as u64;
            if idx < precision {
                out.insert(idx, c.clone());
            }
        }
        for (&n, c) in &other.coeffs {
            let idx = n + sb as u64;
            if idx >= precision {
                continue;
            }
            let c = if negate { -c } else { c.clone() };
            let v = match out.remove(&idx) {
                Some(prev) => &prev + &c,
                None => c,
            };
            if !v.is_zero() {
                out.insert(idx, v);
            }
        }
        Ok(QSeries {
            offset: base,
            coeffs: out,
            precision,
        })
    }

    pub fn neg(&self) -> Self {
        QSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|(&n, c)| (n, -c)).collect(),
            precision: self.precision,
        }
    }

    pub fn scale(&self, k: &CycNumber) -> Self {
        Self::from_coeffs(
            self.offset,
            self.precision,
            self.coeffs.iter().map(|(&n, c)| (n, c * k)),
        )
    }

    /// Cauchy product; offsets add and the precision is the smaller one.
    pub fn mul(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        let mut out: BTreeMap<u64, CycNumber> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            if i >= precision {
                break;
            }
            for (&j, b) in other.coeffs.range(..precision - i) {
                let prod = a * b;
                out.entry(i + j)
                    .and_modify(|acc| *acc = &*acc + &prod)
                    .or_insert(prod);
            }
        }
        out.retain(|_, c| !c.is_zero());
        QSeries {
            offset: self.offset + other.offset,
            coeffs: out,
            precision,
        }
    }

    /// Multiplicative inverse when the index-0 coefficient is a nonzero
    /// rational.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self
            .coeff(0)
            .and_then(|c| c.to_rational())
            .filter(|r| !r.is_zero())
            .ok_or(Error::NotInvertible)?;
        let inv0 = CycNumber::from_rational(&c0.recip());
        let m = self.precision;
        let mut inv: Vec<CycNumber> = Vec::with_capacity(m as usize);
        inv.push(inv0.clone());
        for n in 1..m {
            let mut acc = CycNumber::zero();
            for (&k, a) in self.coeffs.range(1..=n) {
                acc = &acc + &(a * &inv[(n - k) as usize]);
            }
            inv.push(-&(&acc * &inv0));
        }
        Ok(QSeries::from_coeffs(
            -self.offset,
            m,
            inv.into_iter().enumerate().map(|(n, c)| (n as u64, c)),
        ))
    }

    /// Integer power by repeated squaring; negative powers go through
    /// [`QSeries::inverse`].
    pub fn pow(&self, r: i32) -> Result<Self> {
        let base = if r < 0 { self.inverse()? } else { self.clone() };
        let mut e = r.unsigned_abs();
        let mut acc = QSeries::monomial(Offset::zero(), 0, CycNumber::one(), base.precision);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Exact coefficient equality on the indices both series know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.offset != other.offset {
            return false;
        }
        let p = self.precision.min(other.precision);
        let mine = self.coeffs.range(..p);
        let theirs = other.coeffs.range(..p);
        mine.clone().all(|(n, c)| other.coeff(*n) == Some(c))
            && theirs.clone().all(|(n, c)| self.coeff(*n) == Some(c))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exp = |n: u64| self.offset + Offset::from_integer(n as i64);
        for (&n, c) in &self.coeffs {
            write!(f, "({c})q^{} + ", exp(n))?;
        }
        write!(f, "O(q^{})", exp(self.precision))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_series(coeffs: &[i64]) -> QSeries {
        QSeries::from_integers(Offset::zero(), coeffs.iter().copied())
    }

    #[test]
    fn geometric_series_identity() {
        let m = 40;
        let one_minus_q = QSeries::from_integers(Offset::zero(), (0..m).map(|n| match n {
            0 => 1i64,
            1 => -1,
            _ => 0,
        }));
        let geom = QSeries::from_integers(Offset::zero(), (0..m).map(|_| 1i64));
        let prod = one_minus_q.mul(&geom);
        assert_eq!(prod.precision(), m);
        assert!(prod.agrees_with(&QSeries::one(m)));
        assert_eq!(prod.nnz(), 1);
    }

    #[test]
    fn multiplying_by_one_is_identity() {
        let a = int_series(&[0, 3, -1, 7, 0, 2]);
        let b = a.mul(&QSeries::one(100));
        assert_eq!(b, a);
    }

    #[test]
    fn precision_min_rule_and_offsets() {
        let a = QSeries::from_integers(Offset::new(1, 24), [1i64, 2, 3, 4]);
        let b = QSeries::from_integers(Offset::new(23, 24), [1i64, 1]);
        let c = a.mul(&b);
        assert_eq!(c.offset(), Offset::from_integer(1));
        assert_eq!(c.precision(), 2);
        assert!(c.coeff(2).is_none());
        let s = a.add(&QSeries::from_integers(Offset::new(25, 24), [5i64; 10])).unwrap();
        assert_eq!(s.offset(), Offset::new(1, 24));
        assert_eq!(s.precision(), 4);
        assert_eq!(s.coeff(1).unwrap(), &CycNumber::from(7));
        assert!(a.add(&QSeries::one(5)).is_err());
    }

    #[test]
    fn inverse_of_one_minus_q() {
        let a = int_series(&[1, -1, 0, 0, 0, 0, 0, 0]);
        let inv = a.inverse().unwrap();
        for n in 0..8 {
            assert_eq!(inv.coeff(n).unwrap(), &CycNumber::one());
        }
        assert!(int_series(&[0, 1]).inverse().is_err());
    }

    #[test]
    fn normalize_and_stretch() {
        let a = QSeries::from_integers(Offset::from_integer(2), [1i64, -3]);
        let n = a.normalize_integral().unwrap();
        assert_eq!(n.precision(), 4);
        assert_eq!(n.coeff(3).unwrap(), &CycNumber::from(-3));
        let frac = QSeries::from_integers(Offset::new(1, 24), [1i64]);
        assert!(frac.normalize_integral().is_err());
        let s = int_series(&[1, 2, 3]).stretch(3);
        assert_eq!(s.precision(), 9);
        assert_eq!(s.coeff(6).unwrap(), &CycNumber::from(3));
        assert!(s.coeff(5).unwrap().is_zero());
    }

    fn arb_series(len: usize) -> impl Strategy<Value = QSeries> {
        prop::collection::vec(-20i64..20, len).prop_map(|v| int_series(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ring_laws(a in arb_series(16), b in arb_series(12), c in arb_series(14)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            let lhs = a.mul(&b.add(&c).unwrap());
            let rhs = a.mul(&b).add(&a.mul(&c)).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }
    }
}
