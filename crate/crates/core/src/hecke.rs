//! Prime-power Hecke operators `T_j(p)` on q-expansions, eigenvalue
//! extraction, Euler roots and the twisted root-of-unity averages.
//!
//! `T_j(p)` acts by `a(n) ↦ a(p^j n) + p^{j(k-1)} χ(p)^j a(n/p^j)`, with
//! `a(n/p^j) = 0` unless `p^j | n`. The companion [`tj_as_polynomial`]
//! instead builds `T_j` from `T_1` via
//! `T_{j+1} = T_j T_1 − p^{k-1} χ(p) T_{j-1}`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{self, lcm};
use crate::characters::DirichletCharacter;
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::series::QSeries;

/// An integral-weight form: coefficients `a(n)` at index `n` (offset 0).
#[derive(Clone, Debug)]
pub struct FormContext {
    pub name: String,
    pub weight: u32,
    pub level: u64,
    pub character: DirichletCharacter,
    coeffs: QSeries,
    /// Set for catalog newforms; implies `a(1) = 1`.
    pub normalized: bool,
}

impl FormContext {
    pub fn new(
        name: impl Into<String>,
        weight: u32,
        level: u64,
        character: DirichletCharacter,
        coeffs: QSeries,
    ) -> Result<Self> {
        if weight == 0 || level == 0 {
            return Err(Error::InvalidArgument("weight and level must be positive".into()));
        }
        if !level.is_multiple_of(character.modulus()) {
            return Err(Error::InvalidCharacter(format!(
                "character modulus {} does not divide level {level}",
                character.modulus()
            )));
        }
        let coeffs = coeffs.normalize_integral()?;
        let normalized = coeffs.coeff(1).is_some_and(|c| *c == CycNumber::one());
        Ok(FormContext {
            name: name.into(),
            weight,
            level,
            character,
            coeffs,
            normalized,
        })
    }

    pub fn coeffs(&self) -> &QSeries {
        &self.coeffs
    }

    pub fn precision(&self) -> u64 {
        self.coeffs.precision()
    }

    pub fn a(&self, n: u64) -> Result<&CycNumber> {
        self.coeffs.coeff(n).ok_or(Error::PrecisionShortfall {
            needed: n,
            available: self.coeffs.precision(),
        })
    }

    /// `χ(p) p^{k-1}`.
    pub fn norm(&self, p: u64) -> CycNumber {
        self.character
            .evaluate(p as i64)
            .scale_int(&BigInt::from(p).pow(self.weight - 1))
    }

    /// A copy carrying fewer coefficients.
    pub fn truncated(&self, precision: u64) -> Self {
        FormContext {
            coeffs: self.coeffs.truncate(precision),
            ..self.clone()
        }
    }
}

fn require_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn checked_ppow(p: u64, j: u32) -> Option<u64> {
    p.checked_pow(j)
}

/// `T_j(p)` on a bare series for weight `k` and character value `chi_p`.
/// Output precision is `⌊M / p^j⌋`.
pub fn apply_tj_series(s: &QSeries, k: u32, chi_p: &CycNumber, p: u64, j: u32) -> Result<QSeries> {
    require_prime(p)?;
    let m = s.precision();
    let pj = checked_ppow(p, j).filter(|&pj| pj <= m).ok_or(Error::PrecisionShortfall {
        needed: checked_ppow(p, j).unwrap_or(u64::MAX),
        available: m,
    })?;
    let out_prec = m / pj;
    let factor = chi_p
        .pow(j)
        .scale_int(&BigInt::from(p).pow(j * (k - 1)));
    let mut terms: std::collections::BTreeMap<u64, CycNumber> = std::collections::BTreeMap::new();
    for (n, c) in s.nonzero() {
        if n % pj == 0 && n / pj < out_prec {
            let slot = terms.entry(n / pj).or_insert_with(CycNumber::zero);
            *slot = &*slot + c;
        }
        if !factor.is_zero() {
            if let Some(up) = n.checked_mul(pj).filter(|&up| up < out_prec) {
                let slot = terms.entry(up).or_insert_with(CycNumber::zero);
                *slot = &*slot + &(c * &factor);
            }
        }
    }
    Ok(QSeries::from_coeffs(s.offset(), out_prec, terms))
}

/// `T_j(p) f` straight from the defining coefficient formula.
pub fn apply_tj(f: &FormContext, p: u64, j: u32) -> Result<QSeries> {
    apply_tj_series(f.coeffs(), f.weight, &f.character.evaluate(p as i64), p, j)
}

/// `T_j(p) f` through the three-term operator recurrence, using only `T_1`.
pub fn tj_as_polynomial(p: u64, j: u32, f: &FormContext) -> Result<QSeries> {
    require_prime(p)?;
    let chi_p = f.character.evaluate(p as i64);
    let norm = f.norm(p);
    let t1 = |s: &QSeries| apply_tj_series(s, f.weight, &chi_p, p, 1);
    let two = CycNumber::from(2);
    let t0 = f.coeffs().scale(&two);
    if j == 0 {
        return Ok(t0);
    }
    // T_i f for increasing i; each step applies T_1 to the previous result.
    let mut prev = t0;
    let mut cur = t1(f.coeffs())?;
    for _ in 1..j {
        let next = t1(&cur)?.sub(&prev.scale(&norm))?;
        prev = cur;
        cur = next;
    }
    let expected = f.precision() / checked_ppow(p, j).unwrap_or(u64::MAX).max(1);
    Ok(cur.truncate(expected))
}

/// Coefficients (constant term first) of the monic degree-`j` polynomial
/// `P_j` with `P_0 = 2`, `P_1 = x`, `P_{i+1} = x P_i − c P_{i-1}`.
pub fn tj_polynomial_coefficients(j: u32, norm: &CycNumber) -> Vec<CycNumber> {
    let mut prev = vec![CycNumber::from(2)];
    if j == 0 {
        return prev;
    }
    let mut cur = vec![CycNumber::zero(), CycNumber::one()];
    for _ in 1..j {
        let mut next = vec![CycNumber::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] = &next[i] - &(c * norm);
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_j(a(p)) = α^j + β^j`.
pub fn power_sum_lambda(a_p: &CycNumber, norm: &CycNumber, j: u32) -> CycNumber {
    let mut acc = CycNumber::zero();
    let mut xp = CycNumber::one();
    for c in tj_polynomial_coefficients(j, norm) {
        acc = &acc + &(&c * &xp);
        xp = &xp * a_p;
    }
    acc
}

/// The subsequence `a(p^{jn})`, `n = 0..terms`, read from the expansion.
pub fn pj_power_series(f: &FormContext, p: u64, j: u32, terms: u32) -> Result<Vec<CycNumber>> {
    require_prime(p)?;
    let mut out = Vec::with_capacity(terms as usize);
    for n in 0..terms {
        let idx = j
            .checked_mul(n)
            .and_then(|e| checked_ppow(p, e))
            .ok_or(Error::PrecisionShortfall {
                needed: u64::MAX,
                available: f.precision(),
            })?;
        out.push(f.a(idx)?.clone());
    }
    Ok(out)
}

/// `c_{m+1} = λ c_m − norm · c_{m-1}` from `c_0, c_1`, `count` terms.
pub fn two_term_recurrence(
    c0: &CycNumber,
    c1: &CycNumber,
    lambda: &CycNumber,
    norm: &CycNumber,
    count: usize,
) -> Vec<CycNumber> {
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(c0.clone());
    }
    if count > 1 {
        out.push(c1.clone());
    }
    while out.len() < count {
        let l = out.len();
        let next = &(lambda * &out[l - 1]) - &(norm * &out[l - 2]);
        out.push(next);
    }
    out
}

/// `a(p^m)`, `m = 0..count`, of a normalised eigenform via
/// `a(p^{m+1}) = a(p)a(p^m) − χ(p)p^{k-1}a(p^{m-1})`.
pub fn prime_power_coefficients(f: &FormContext, p: u64, count: usize) -> Result<Vec<CycNumber>> {
    require_prime(p)?;
    let a1 = f.a(1)?;
    let a1r = a1
        .to_rational()
        .filter(|r| !r.is_zero())
        .ok_or_else(|| Error::InvalidArgument("recurrence path needs a nonzero rational a(1)".into()))?;
    let lambda = f.a(p)?.scale(&a1r.recip());
    Ok(two_term_recurrence(a1, f.a(p)?, &lambda, &f.norm(p), count))
}

/// `a(p^{jn})`, `n = 0..terms`, via the prime-power recurrence; reaches
/// indices far beyond any expansion. Overlap with the expansion is checked.
pub fn pj_power_series_recurrence(
    f: &FormContext,
    p: u64,
    j: u32,
    terms: u32,
) -> Result<Vec<CycNumber>> {
    let full = prime_power_coefficients(f, p, (j as usize) * (terms.max(1) as usize - 1) + 1)?;
    for (m, c) in full.iter().enumerate() {
        match checked_ppow(p, m as u32) {
            Some(idx) if idx < f.precision() => {
                if f.a(idx)? != c {
                    return Err(Error::NotEigenform {
                        p,
                        detail: format!("recurrence disagrees with expansion at p^{m}"),
                    });
                }
            }
            _ => break,
        }
    }
    Ok((0..terms as usize).map(|n| full[n * j as usize].clone()).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub enum EigenStatus {
    Eigen { lambda: CycNumber },
    /// `T_j(p) f ≠ λ f` at `index`, with `λ` read from the first coefficient.
    NotEigen { lambda: CycNumber, index: u64 },
}

impl EigenStatus {
    pub fn lambda(&self) -> &CycNumber {
        match self {
            EigenStatus::Eigen { lambda } | EigenStatus::NotEigen { lambda, .. } => lambda,
        }
    }

    pub fn is_eigen(&self) -> bool {
        matches!(self, EigenStatus::Eigen { .. })
    }
}

/// Eigenvalue of `T_j(p)` read as the first coefficient of `T_j(p) f`
/// (divided by `a(1)`), then verified on every shared coefficient.
pub fn tj_eigenvalue(f: &FormContext, p: u64, j: u32) -> Result<EigenStatus> {
    let g = apply_tj(f, p, j)?;
    let a1 = f
        .a(1)?
        .to_rational()
        .filter(|r| !r.is_zero())
        .ok_or_else(|| Error::InvalidArgument("eigenvalue extraction needs a nonzero rational a(1)".into()))?;
    let lambda = g
        .coeff(1)
        .ok_or(Error::PrecisionShortfall {
            needed: checked_ppow(p, j).unwrap_or(u64::MAX),
            available: f.precision(),
        })?
        .scale(&a1.recip());
    let scaled = f.coeffs().scale(&lambda).truncate(g.precision());
    let diff = g.sub(&scaled)?;
    let first = diff.nonzero().next().map(|(n, _)| n);
    Ok(match first {
        None => EigenStatus::Eigen { lambda },
        Some(index) => EigenStatus::NotEigen { lambda, index },
    })
}

/// Coefficients of `(1 − λX + c X²)·Σ s_n X^n − a(1)` below `X^{len(s)}`.
pub fn generating_identity_residual(
    seq: &[CycNumber],
    lambda: &CycNumber,
    norm_j: &CycNumber,
    a1: &CycNumber,
) -> Vec<CycNumber> {
    (0..seq.len())
        .map(|n| {
            let mut v = seq[n].clone();
            if n >= 1 {
                v = &v - &(lambda * &seq[n - 1]);
            }
            if n >= 2 {
                v = &v + &(norm_j * &seq[n - 2]);
            }
            if n == 0 {
                v = &v - a1;
            }
            v
        })
        .collect()
}

/// `p^{j(k-1)} χ(p)^j`.
pub fn norm_power(f: &FormContext, p: u64, j: u32) -> CycNumber {
    f.norm(p).pow(j)
}

/// Local factor `1 − a(p)X + χ(p)p^{k-1}X²` with numeric roots.
///
/// Roots are kept in units of `p^{(k-1)/2}` so moduli compare against 1.
#[derive(Clone, Debug, Serialize)]
pub struct EulerFactor {
    pub p: u64,
    pub k: u32,
    #[serde(skip)]
    pub trace: CycNumber,
    #[serde(skip)]
    pub chi_p: CycNumber,
    /// `log2 p^{(k-1)/2}`.
    pub log2_scale: f64,
    pub alpha_normalized: Complex64,
    /// `None` for the linear factor when `χ(p) = 0`.
    pub beta_normalized: Option<Complex64>,
}

impl EulerFactor {
    pub fn norm(&self) -> CycNumber {
        self.chi_p.scale_int(&BigInt::from(self.p).pow(self.k - 1))
    }

    pub fn scale(&self) -> f64 {
        self.log2_scale.exp2()
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha_normalized * self.scale()
    }

    pub fn beta(&self) -> Option<Complex64> {
        self.beta_normalized.map(|b| b * self.scale())
    }

    pub fn is_degenerate(&self) -> bool {
        self.beta_normalized.is_none()
    }

    /// `||α| / p^{(k-1)/2} − 1|` maximised over the roots.
    pub fn modulus_deviation(&self) -> f64 {
        std::iter::once(self.alpha_normalized)
            .chain(self.beta_normalized)
            .map(|r| (r.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn on_deligne_circle(&self, tol: f64) -> Option<bool> {
        if self.is_degenerate() {
            None
        } else {
            Some(self.modulus_deviation() <= tol)
        }
    }
}

pub fn euler_roots(a_p: &CycNumber, k: u32, chi_p: &CycNumber, p: u64) -> EulerFactor {
    let log2_scale = (k as f64 - 1.0) / 2.0 * (p as f64).log2();
    let t = a_p.embed_scaled(log2_scale);
    let (alpha, beta) = if chi_p.is_zero() {
        (t, None)
    } else {
        let n = chi_p.embed();
        // x² − t x + n, stable form.
        let raw = t * t - n * 4.0;
        // snap a discriminant lost in rounding to an exact double root
        let floor = 64.0 * f64::EPSILON * (t.norm_sqr() + 4.0 * n.norm());
        let disc = if raw.norm() <= floor { Complex64::zero() } else { raw.sqrt() };
        let sgn = if (t.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
        let q = (t + disc * sgn) * 0.5;
        let (r1, r2) = if q.norm() == 0.0 {
            (Complex64::zero(), Complex64::zero())
        } else {
            (q, n / q)
        };
        let tie = (r1.im - r2.im).abs() <= 1e-12 * (r1.norm().max(r2.norm()).max(1.0));
        let first_is_alpha = if tie { r1.re >= r2.re } else { r1.im > r2.im };
        if first_is_alpha {
            (r1, Some(r2))
        } else {
            (r2, Some(r1))
        }
    };
    EulerFactor {
        p,
        k,
        trace: a_p.clone(),
        chi_p: chi_p.clone(),
        log2_scale,
        alpha_normalized: alpha,
        beta_normalized: beta,
    }
}

/// `(1/j) Σ_{μ<j} 1 / ((1 − ζ^μ α X)(1 − ζ^μ β X))` through `X^{terms-1}`,
/// in units where the coefficient of `X^m` is divided by `p^{m(k-1)/2}`.
pub fn twisted_average(ef: &EulerFactor, j: u32, terms: usize) -> Result<Vec<Complex64>> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    let alpha = ef.alpha_normalized;
    let beta = ef.beta_normalized.unwrap_or(Complex64::zero());
    let mut acc = vec![Complex64::zero(); terms];
    for mu in 0..j {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * mu as f64 / j as f64);
        let (u, v) = (z * alpha, z * beta);
        let (s, pr) = (u + v, u * v);
        let (mut c2, mut c1) = (Complex64::zero(), Complex64::new(1.0, 0.0));
        for (m, slot) in acc.iter_mut().enumerate() {
            let c = if m == 0 { c1 } else { s * c1 - pr * c2 };
            if m > 0 {
                c2 = c1;
                c1 = c;
            }
            *slot += c;
        }
    }
    Ok(acc.into_iter().map(|c| c / j as f64).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DegeneracyReport {
    /// `μ` with `α ζ^μ` or `β ζ^μ` real within tolerance.
    pub real_hits: Vec<u32>,
    /// `μ` with `ζ^{-μ} + χ(p) ζ^μ = 0` exactly.
    pub vanishing_upsilon: Vec<u32>,
}

pub fn degeneracy_scan(ef: &EulerFactor, j: u32, tol: f64) -> DegeneracyReport {
    let mut report = DegeneracyReport::default();
    if j == 0 {
        return report;
    }
    let order = lcm(j as u64, ef.chi_p.order() as u64) as u32;
    for mu in 0..j {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * mu as f64 / j as f64);
        let real = std::iter::once(ef.alpha_normalized)
            .chain(ef.beta_normalized)
            .any(|r| (r * z).im.abs() <= tol * r.norm());
        if real {
            report.real_hits.push(mu);
        }
        let zeta = CycNumber::root_of_unity(order, (mu * (order / j)) as i64);
        let upsilon = &zeta.conj() + &(&ef.chi_p * &zeta);
        if upsilon.is_zero() {
            report.vanishing_upsilon.push(mu);
        }
    }
    report
}

/// `|a(p)| / (2 p^{(k-1)/2})`.
pub fn deligne_ratio(a_p: &CycNumber, k: u32, p: u64) -> f64 {
    let log2_scale = (k as f64 - 1.0) / 2.0 * (p as f64).log2();
    a_p.embed_scaled(log2_scale).norm() / 2.0
}
