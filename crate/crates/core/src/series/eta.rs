//! Eta quotients `∏_d η(dz)^{r_d}` and their standard invariants.
//!
//! Expansion runs in integers: each factor `∏(1 − q^{dn})^{r_d}` is the
//! sparse Euler product (pentagonal numbers) raised to `r_d` with the
//! J.C.P. Miller power recurrence, then the factors are convolved. A
//! checked `i128` pass is tried first and falls back to big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::qseries::{Offset, QSeries};
use crate::arith::{self, lcm};
use crate::characters::{kronecker, DirichletCharacter};
use crate::error::{Error, Result};

/// `∏ η(d·z)^{r}` over the listed `(d, r)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaSpec {
    pub factors: Vec<(u64, i64)>,
}

impl EtaSpec {
    pub fn new(factors: Vec<(u64, i64)>) -> Result<Self> {
        let spec = EtaSpec { factors };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.iter().all(|&(_, r)| r == 0) {
            return Err(Error::EmptyEtaSpec);
        }
        let mut seen = std::collections::HashSet::new();
        for &(d, _) in &self.factors {
            if d == 0 || !seen.insert(d) {
                return Err(Error::InvalidEtaScale(d));
            }
        }
        Ok(())
    }

    fn active(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.factors.iter().copied().filter(|&(_, r)| r != 0)
    }

    /// `½ Σ r_d`.
    pub fn weight(&self) -> Offset {
        Offset::new(self.active().map(|(_, r)| r).sum(), 2)
    }

    /// `Σ d·r_d / 24`.
    pub fn offset(&self) -> Offset {
        Offset::new(self.active().map(|(d, r)| d as i64 * r).sum(), 24)
    }

    /// Smallest multiple `N` of `lcm(d)` with `Σ (N/d)·r_d ≡ 0 (mod 24)`.
    pub fn level(&self) -> u64 {
        let base = self.active().fold(1, |acc, (d, _)| lcm(acc, d));
        (1..=24)
            .map(|c| base * c)
            .find(|&n| {
                self.active()
                    .map(|(d, r)| (n / d) as i128 * r as i128)
                    .sum::<i128>()
                    .rem_euclid(24)
                    == 0
            })
            .expect("c = 24 always satisfies the congruence")
    }

    /// Nebentypus `d ↦ ((-1)^k ∏ δ^{r_δ} / d)` for integral weight `k`,
    /// realised modulo `level`. `None` for half-integral weight.
    pub fn character(&self) -> Result<Option<DirichletCharacter>> {
        let w = self.weight();
        if !w.is_integer() {
            return Ok(None);
        }
        let k = w.to_integer();
        let modulus = self.level();
        // Only the square class of ∏ δ^{r_δ} matters on units mod N.
        let mut sqfree = 1u64;
        for (d, r) in self.active() {
            if r.rem_euclid(2) == 1 {
                sqfree *= d;
            }
        }
        let numer = arith::squarefree_part(sqfree) as i64;
        let numer = if k.rem_euclid(2) == 1 { -numer } else { numer };
        let odd_rep = |g: u64| -> i64 {
            if g.is_multiple_of(2) {
                (g + modulus) as i64
            } else {
                g as i64
            }
        };
        let symbol = |g: u64| kronecker(numer, odd_rep(g));
        let chi = DirichletCharacter::from_fn(modulus, 2, |g| if symbol(g) == -1 { 1 } else { 0 })?;
        for n in 1..modulus.max(2) {
            if arith::gcd(n, modulus) == 1 {
                let expect = if symbol(n) == -1 { 1 } else { 0 };
                let got = chi.exponent(n as i64).unwrap_or(0) * 2 / chi.value_order().max(1);
                if got != expect {
                    return Err(Error::InvalidCharacter(format!(
                        "eta character ({numer}/·) is not periodic modulo {modulus}"
                    )));
                }
            }
        }
        Ok(Some(chi))
    }
}

/// Exponents and signs of `∏_{n≥1}(1 − q^n)` below `bound` (Euler's
/// pentagonal number theorem).
pub fn euler_product_terms(bound: u64) -> Vec<(u64, i64)> {
    let mut out = vec![(0u64, 1i64)];
    let mut k: u64 = 1;
    loop {
        let a = k * (3 * k - 1) / 2;
        if a >= bound {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        out.push((a, sign));
        let b = k * (3 * k + 1) / 2;
        if b < bound {
            out.push((b, sign));
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

trait Coef: Clone + Sized {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_mul_small(&mut self, k: i64, x: &Self) -> Option<()>;
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()>;
    fn div_exact(&mut self, d: i64) -> Option<()>;
}

impl Coef for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_mul_small(&mut self, k: i64, x: &Self) -> Option<()> {
        *self = self.checked_add(x.checked_mul(k as i128)?)?;
        Some(())
    }
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()> {
        *self = self.checked_add(a.checked_mul(*b)?)?;
        Some(())
    }
    fn div_exact(&mut self, d: i64) -> Option<()> {
        debug_assert_eq!(*self % d as i128, 0);
        *self /= d as i128;
        Some(())
    }
}

impl Coef for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_mul_small(&mut self, k: i64, x: &Self) -> Option<()> {
        *self += x * k;
        Some(())
    }
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()> {
        *self += a * b;
        Some(())
    }
    fn div_exact(&mut self, d: i64) -> Option<()> {
        let (q, r) = self.div_rem(&BigInt::from(d));
        debug_assert!(Zero::is_zero(&r));
        *self = q;
        Some(())
    }
}

/// `(∏(1 − q^n))^r` to `len` coefficients via
/// `n g_n = Σ_{k=1}^{n} ((r+1)k − n) f_k g_{n−k}`.
fn euler_power<T: Coef>(r: i64, len: usize) -> Option<Vec<T>> {
    let f = euler_product_terms(len as u64);
    let mut g: Vec<T> = Vec::with_capacity(len);
    g.push(T::from_i64(1));
    for n in 1..len {
        let mut acc = T::zero();
        for &(k, s) in f.iter().skip(1) {
            let k = k as usize;
            if k > n {
                break;
            }
            let mult = ((r + 1) * k as i64 - n as i64).checked_mul(s)?;
            if mult != 0 {
                acc.add_mul_small(mult, &g[n - k])?;
            }
        }
        acc.div_exact(n as i64)?;
        g.push(acc);
    }
    Some(g)
}

fn expand<T: Coef>(spec: &EtaSpec, len: usize) -> Option<Vec<T>> {
    let mut factors: Vec<Vec<(usize, T)>> = Vec::new();
    for (d, r) in spec.active() {
        let d = d as usize;
        let inner = len.div_ceil(d);
        let g = euler_power::<T>(r, inner)?;
        factors.push(
            g.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i * d, c))
                .filter(|(i, _)| *i < len)
                .collect(),
        );
    }
    factors.sort_by_key(|f| std::cmp::Reverse(f.len()));
    let mut acc = vec![T::zero(); len];
    for (i, c) in factors[0].iter() {
        acc[*i] = c.clone();
    }
    for factor in &factors[1..] {
        let mut next = vec![T::zero(); len];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in factor {
                if i + j >= len {
                    break;
                }
                next[i + j].add_mul(a, b)?;
            }
        }
        acc = next;
    }
    Some(acc)
}

/// `∏_d q^{d r_d/24} ∏_{n≥1}(1 − q^{dn})^{r_d}` with `precision` known
/// coefficients after the offset.
pub fn eta_quotient(spec: &EtaSpec, precision: u64) -> Result<QSeries> {
    spec.validate()?;
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let len = precision as usize;
    let coeffs: Vec<BigInt> = match expand::<i128>(spec, len) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => expand::<BigInt>(spec, len).expect("big-integer expansion cannot overflow"),
    };
    Ok(QSeries::from_integers(spec.offset(), coeffs))
}

/// Integer coefficients of an eta quotient as `i128`, when they fit.
pub fn eta_quotient_i128(spec: &EtaSpec, precision: u64) -> Option<Vec<i128>> {
    spec.validate().ok()?;
    expand::<i128>(spec, precision as usize)
}

/// Convenience for tests and benches: numeric value of a small coefficient.
pub fn coeff_i64(s: &QSeries, n: u64) -> Option<i64> {
    s.coeff(n)?.to_integer()?.to_i64()
}
