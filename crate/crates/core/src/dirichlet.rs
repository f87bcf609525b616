//! Numeric Dirichlet series: compensated partial sums, log-log abscissa
//! ladders, truncated L-values and the quotient identity between `b`, its
//! lift `A` and `L(s − k + 1, χ_{t,N})`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::DirichletCharacter;
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::shimura::{HalfIntegralContext, LiftResult};

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, err)
}

impl CompensatedSum {
    pub fn add(&mut self, x: Complex64) {
        let (re, ere) = two_sum(self.sum.re, x.re);
        let (im, eim) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.comp += Complex64::new(ere, eim);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Coefficients `a(1..=len)` with prefix sums of `a(n)` and `|a(n)|`.
#[derive(Clone, Debug)]
pub struct DirichletSeriesView {
    coeffs: Vec<Complex64>,
    prefix: Vec<Complex64>,
    abs_prefix: Vec<f64>,
}

impl DirichletSeriesView {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut prefix = Vec::with_capacity(coeffs.len() + 1);
        let mut abs_prefix = Vec::with_capacity(coeffs.len() + 1);
        prefix.push(Complex64::new(0.0, 0.0));
        abs_prefix.push(0.0);
        let mut s = CompensatedSum::default();
        let mut t = CompensatedSum::default();
        for &c in &coeffs {
            s.add(c);
            t.add(Complex64::new(c.norm(), 0.0));
            prefix.push(s.value());
            abs_prefix.push(t.value().re);
        }
        DirichletSeriesView {
            coeffs,
            prefix,
            abs_prefix,
        }
    }

    pub fn from_exact(coeffs: &[CycNumber]) -> Self {
        Self::new(coeffs.iter().map(CycNumber::embed).collect())
    }

    pub fn from_fn(len: usize, f: impl Fn(u64) -> Complex64) -> Self {
        Self::new((1..=len as u64).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs[n - 1]
    }

    /// `Σ_{n ≤ m} a(n)`.
    pub fn prefix(&self, m: usize) -> Complex64 {
        self.prefix[m]
    }

    /// `Σ_{n ≤ m} |a(n)|`.
    pub fn abs_prefix(&self, m: usize) -> f64 {
        self.abs_prefix[m]
    }

    /// `Σ_{lo ≤ n ≤ hi} a(n) n^{-s}`.
    pub fn partial_sum_range(&self, s: f64, lo: usize, hi: usize) -> Complex64 {
        let mut acc = CompensatedSum::default();
        for n in lo.max(1)..=hi.min(self.len()) {
            let c = self.coeffs[n - 1];
            if c.re != 0.0 || c.im != 0.0 {
                acc.add(c * (n as f64).powf(-s));
            }
        }
        acc.value()
    }

    /// `Σ_{n ≤ m} a(n) n^{-s}`.
    pub fn partial_sum(&self, s: f64, m: usize) -> Complex64 {
        self.partial_sum_range(s, 1, m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Abscissa {
    Convergence,
    Absolute,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderPoint {
    pub n: usize,
    /// `max_{m ≤ n} |S(m)|`.
    pub size: f64,
    /// `log size / log n`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbscissaReport {
    pub which: Abscissa,
    pub m: usize,
    pub estimate: f64,
    pub uncertainty: f64,
    pub ladder: Vec<LadderPoint>,
}

/// Bracket `limsup log|S(N)| / log N` on the ladder `N = M^{i/8}`.
///
/// The estimate is the largest ratio on the upper half of the ladder; the
/// uncertainty covers the spread of those ratios and of the secant slopes
/// between consecutive rungs.
pub fn abscissa_estimate(view: &DirichletSeriesView, which: Abscissa, m: usize) -> Result<AbscissaReport> {
    if m < 100 {
        return Err(Error::InvalidArgument("abscissa ladder needs M ≥ 100".into()));
    }
    if m > view.len() {
        return Err(Error::PrecisionShortfall {
            needed: m as u64,
            available: view.len() as u64,
        });
    }
    let size_at = |n: usize| match which {
        Abscissa::Convergence => view.prefix(n).norm(),
        Abscissa::Absolute => view.abs_prefix(n),
    };
    let rungs: Vec<usize> = (1..=8)
        .map(|i| ((m as f64).powf(i as f64 / 8.0).round() as usize).clamp(2, m))
        .collect();
    let mut ladder = Vec::new();
    let mut running = 0.0f64;
    let mut next = 1;
    for &n in &rungs {
        while next <= n {
            running = running.max(size_at(next));
            next += 1;
        }
        let ratio = if running > 0.0 {
            running.ln() / (n as f64).ln()
        } else {
            f64::NEG_INFINITY
        };
        ladder.push(LadderPoint {
            n,
            size: running,
            ratio,
        });
    }
    let upper = &ladder[4..];
    let estimate = upper.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    if estimate == f64::NEG_INFINITY {
        return Ok(AbscissaReport {
            which,
            m,
            estimate,
            uncertainty: 0.0,
            ladder,
        });
    }
    let lo = upper.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    let mut uncertainty = estimate - lo;
    for w in upper.windows(2) {
        if w[0].size > 0.0 && w[1].size > 0.0 && w[1].n > w[0].n {
            let slope = (w[1].size.ln() - w[0].size.ln()) / ((w[1].n as f64).ln() - (w[0].n as f64).ln());
            uncertainty = uncertainty.max((slope - estimate).abs());
        }
    }
    Ok(AbscissaReport {
        which,
        m,
        estimate,
        uncertainty,
        ladder,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LValue {
    pub value: Complex64,
    /// `M^{1-s} / (s − 1)` bounds the omitted tail.
    pub tail_bound: f64,
}

/// `Σ_{n ≤ M} χ(n) n^{-s}` for real `s > 1`.
pub fn l_chi(chi: &DirichletCharacter, s: f64, m: usize) -> Result<LValue> {
    if s <= 1.0 || s.is_nan() {
        return Err(Error::RangeViolation { s, bound: 1.0 });
    }
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let mut acc = CompensatedSum::default();
    for n in 1..=m as u64 {
        let c = chi.evaluate_complex(n as i64);
        if c.re != 0.0 || c.im != 0.0 {
            acc.add(c * (n as f64).powf(-s));
        }
    }
    Ok(LValue {
        value: acc.value(),
        tail_bound: (m as f64).powf(1.0 - s) / (s - 1.0),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Eq9Report {
    pub s: f64,
    pub m: usize,
    /// `|Σ b n^{-s} · Σ χ_{t,N} n^{k-1-s} − Σ A n^{-s}|`.
    pub residual: f64,
    /// Sum of the absolute values of the terms with `dm > M` plus roundoff.
    pub bound: f64,
    pub passed: bool,
}

/// Truncated form of `Σ b(n)n^{-s} · L(s − k + 1, χ_{t,N}) = Σ A(n) n^{-s}`.
pub fn verify_eq9(ctx: &HalfIntegralContext, l: &LiftResult, s: f64, m: usize) -> Result<Eq9Report> {
    let edge = ctx.k as f64 + 0.5;
    if s.is_nan() || s <= edge {
        return Err(Error::RangeViolation { s, bound: edge });
    }
    if m == 0 || m > ctx.b.len() || m > l.a.len() {
        return Err(Error::PrecisionShortfall {
            needed: m as u64,
            available: ctx.b.len().min(l.a.len()) as u64,
        });
    }
    let bview = DirichletSeriesView::from_exact(&ctx.b[..m]);
    let aview = DirichletSeriesView::from_exact(&l.a[..m]);
    let chi_terms: Vec<Complex64> = (1..=m as u64)
        .map(|d| l.chi_tn.evaluate_complex(d as i64) * (d as f64).powf(ctx.k as f64 - 1.0 - s))
        .collect();
    let mut c = CompensatedSum::default();
    for &x in &chi_terms {
        c.add(x);
    }
    let bsum = bview.partial_sum(s, m);
    let asum = aview.partial_sum(s, m);
    let product = bsum * c.value();
    let residual = (product - asum).norm();

    // Σ_{m' ≤ M} |b(m')| m'^{-s} Σ_{M/m' < d ≤ M} |χ(d)| d^{k-1-s}
    let mut suffix = vec![0.0f64; m + 2];
    for d in (1..=m).rev() {
        suffix[d] = suffix[d + 1] + chi_terms[d - 1].norm();
    }
    let mut dropped = 0.0;
    let mut scale = 0.0;
    for j in 1..=m {
        let w = bview.coeff(j).norm() * (j as f64).powf(-s);
        scale += w;
        let first = m / j + 1;
        if first <= m {
            dropped += w * suffix[first];
        }
    }
    let a_abs: f64 = (1..=m).map(|n| aview.coeff(n).norm() * (n as f64).powf(-s)).sum();
    let roundoff = 64.0 * f64::EPSILON * (scale * suffix[1] + a_abs);
    let bound = dropped + roundoff;
    Ok(Eq9Report {
        s,
        m,
        residual,
        bound,
        passed: residual <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shimura::{lift, Provenance, SyntheticEigen};
    use std::f64::consts::PI;

    fn ones(n: usize) -> DirichletSeriesView {
        DirichletSeriesView::from_fn(n, |_| Complex64::new(1.0, 0.0))
    }

    #[test]
    fn zeta_two() {
        let v = ones(10_000);
        let z = v.partial_sum(2.0, 10_000).re;
        assert!((PI * PI / 6.0 - z).abs() < 1.0 / 10_000.0);
        let lin = DirichletSeriesView::from_fn(10, |n| Complex64::new(n as f64, 0.0));
        assert_eq!(lin.partial_sum(0.0, 10).re, 55.0);
    }

    #[test]
    fn additive_over_splits() {
        let v = DirichletSeriesView::from_fn(5000, |n| Complex64::new((n as f64).sin(), (n as f64).cos()));
        let whole = v.partial_sum(1.3, 5000);
        let split = v.partial_sum_range(1.3, 1, 1234) + v.partial_sum_range(1.3, 1235, 5000);
        assert!((whole - split).norm() <= 1e-14 * whole.norm().max(1.0));
    }

    #[test]
    fn abscissa_ones_and_alternating() {
        let v = ones(100_000);
        let r = abscissa_estimate(&v, Abscissa::Convergence, 100_000).unwrap();
        assert!((r.estimate - 1.0).abs() < 0.1);
        let alt = DirichletSeriesView::from_fn(100_000, |n| Complex64::new(if n % 2 == 1 { 1.0 } else { -1.0 }, 0.0));
        let plain = abscissa_estimate(&alt, Abscissa::Convergence, 100_000).unwrap();
        let abs = abscissa_estimate(&alt, Abscissa::Absolute, 100_000).unwrap();
        assert!(plain.estimate.abs() < 0.1);
        assert!((abs.estimate - 1.0).abs() < 0.1);
        assert!(abs.estimate >= plain.estimate - plain.uncertainty);
        let zero = DirichletSeriesView::from_fn(1000, |_| Complex64::new(0.0, 0.0));
        assert_eq!(abscissa_estimate(&zero, Abscissa::Absolute, 1000).unwrap().estimate, f64::NEG_INFINITY);
        assert!(abscissa_estimate(&v, Abscissa::Absolute, 50).is_err());
    }

    #[test]
    fn l_values() {
        let z = l_chi(&DirichletCharacter::principal(1), 2.0, 100_000).unwrap();
        assert!((z.value.re - PI * PI / 6.0).abs() <= z.tail_bound);
        let m4 = DirichletCharacter::kronecker_character(-4).unwrap();
        let g = l_chi(&m4, 2.0, 1_000_000).unwrap();
        assert!((g.value.re - 0.915_965_594_177_219).abs() <= g.tail_bound);
        assert_eq!(l_chi(&m4, 3.0, 1).unwrap().value, Complex64::new(1.0, 0.0));
        assert!(matches!(l_chi(&m4, 1.0, 10), Err(Error::RangeViolation { .. })));
    }

    #[test]
    fn eq9_synthetic_and_zero() {
        let chi = DirichletCharacter::principal(4);
        let syn = SyntheticEigen::random(5, 6, 4, chi.clone(), 1, CycNumber::one(), 2000);
        let ctx = syn.context(2000).unwrap();
        let l = lift(&ctx, 2000).unwrap();
        let r = verify_eq9(&ctx, &l, 12.0, 2000).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.residual < 1e-8);
        assert!(verify_eq9(&ctx, &l, 6.4, 100).is_err());

        let zero = HalfIntegralContext::new(6, 4, chi, 1, vec![CycNumber::zero(); 50], Provenance::Sequence).unwrap();
        let lz = lift(&zero, 50).unwrap();
        assert_eq!(verify_eq9(&zero, &lz, 12.0, 50).unwrap().residual, 0.0);
    }

    #[test]
    fn eq9_residual_shrinks_with_m() {
        let chi = DirichletCharacter::principal(4);
        let syn = SyntheticEigen::random(8, 4, 4, chi, 1, CycNumber::one(), 4000);
        let ctx = syn.context(4000).unwrap();
        let l = lift(&ctx, 4000).unwrap();
        let res: Vec<f64> = [500, 1000, 2000, 4000]
            .iter()
            .map(|&m| verify_eq9(&ctx, &l, 5.0, m).unwrap().residual)
            .collect();
        for w in res.windows(2) {
            assert!(w[1] <= w[0] * 1.05 + 1e-15, "{res:?}");
        }
    }
}
