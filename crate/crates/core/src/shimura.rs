//! Coefficient-level Shimura correspondence on the family `b(n) = a(t n²)`.
//!
//! `A(n) = Σ_{d|n} χ_{t,N}(d) d^{k-1} b(n/d)`, its Möbius inverse, the local
//! p-power expansion of a Hecke eigenform and synthetic eigen-data built
//! from prescribed eigenvalues.

use std::collections::BTreeMap;

use num_bigint::{BigInt, RandBigInt};
use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::characters::{chi_tn, DirichletCharacter, SymbolNumerator};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::hecke::{euler_roots, EulerFactor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Catalog { name: String },
    Synthetic { seed: u64 },
    Sequence,
}

/// `b(n) = a(t n²)` for `n = 1..=len` of a weight `k + 1/2` form.
#[derive(Clone, Debug, Serialize)]
pub struct HalfIntegralContext {
    pub k: u32,
    pub level: u64,
    pub character: DirichletCharacter,
    pub t: u64,
    /// `b[n-1] = b(n)`.
    pub b: Vec<CycNumber>,
    pub numerator: SymbolNumerator,
    /// Membership in the complement of the unary theta space; never checked.
    pub claimed_s_star: bool,
    pub provenance: Provenance,
}

impl HalfIntegralContext {
    pub fn new(
        k: u32,
        level: u64,
        character: DirichletCharacter,
        t: u64,
        b: Vec<CycNumber>,
        provenance: Provenance,
    ) -> Result<Self> {
        if level == 0 || !level.is_multiple_of(4) {
            return Err(Error::InvalidArgument(format!("level {level} must be a positive multiple of 4")));
        }
        if t == 0 || !arith::is_squarefree(t) {
            return Err(Error::InvalidArgument(format!("t = {t} must be squarefree and positive")));
        }
        if !level.is_multiple_of(character.modulus()) {
            return Err(Error::InvalidCharacter(format!(
                "character modulus {} does not divide {level}",
                character.modulus()
            )));
        }
        Ok(HalfIntegralContext {
            k,
            level,
            character,
            t,
            b,
            numerator: SymbolNumerator::default(),
            claimed_s_star: false,
            provenance,
        })
    }

    pub fn b(&self, n: u64) -> Result<&CycNumber> {
        if n == 0 {
            return Err(Error::InvalidArgument("b is indexed from 1".into()));
        }
        self.b.get(n as usize - 1).ok_or(Error::PrecisionShortfall {
            needed: n,
            available: self.b.len() as u64,
        })
    }

    /// Least `n` with `a(t n²) ≠ 0`.
    pub fn nonzero_witness(&self) -> Option<u64> {
        self.b.iter().position(|c| !c.is_zero()).map(|i| i as u64 + 1)
    }

    pub fn chi_tn(&self) -> Result<DirichletCharacter> {
        chi_tn(&self.character, self.k, self.level, self.t, self.numerator)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftResult {
    /// `a[n-1] = A(n)`.
    pub a: Vec<CycNumber>,
    pub chi_tn: DirichletCharacter,
    pub k: u32,
    pub level: u64,
    pub t: u64,
}

/// `d ↦ χ(d) d^{k-1}` (times `μ(d)` when `mobius` is given), for `d ≤ n`.
fn twisted_weights(chi: &DirichletCharacter, k: u32, n: usize, mobius: Option<&[i8]>) -> Vec<CycNumber> {
    let mut w = vec![CycNumber::zero(); n + 1];
    for d in 1..=n {
        let sign = mobius.map_or(1, |mu| mu[d]);
        if sign == 0 {
            continue;
        }
        let c = chi.evaluate(d as i64);
        if c.is_zero() {
            continue;
        }
        let mut m = BigInt::from(d).pow(k.saturating_sub(1));
        if sign < 0 {
            m = -m;
        }
        w[d] = c.scale_int(&m);
    }
    w
}

/// Dirichlet convolution `(w ∗ s)(n)` for `n ≤ len(s)`, `s` indexed from 1.
fn convolve(w: &[CycNumber], s: &[CycNumber]) -> Vec<CycNumber> {
    let n = s.len();
    let mut out = vec![CycNumber::zero(); n];
    for d in 1..=n {
        if w[d].is_zero() {
            continue;
        }
        for m in 1..=n / d {
            let x = &s[m - 1];
            if x.is_zero() {
                continue;
            }
            let slot = &mut out[d * m - 1];
            *slot = &*slot + &(&w[d] * x);
        }
    }
    out
}

pub fn lift(ctx: &HalfIntegralContext, terms: usize) -> Result<LiftResult> {
    if terms > ctx.b.len() {
        return Err(Error::PrecisionShortfall {
            needed: terms as u64,
            available: ctx.b.len() as u64,
        });
    }
    let chi = ctx.chi_tn()?;
    let w = twisted_weights(&chi, ctx.k, terms, None);
    Ok(LiftResult {
        a: convolve(&w, &ctx.b[..terms]),
        chi_tn: chi,
        k: ctx.k,
        level: ctx.level,
        t: ctx.t,
    })
}

/// `b(n) = Σ_{d|n} μ(d) χ_{t,N}(d) d^{k-1} A(n/d)`.
pub fn invert_lift(l: &LiftResult, terms: usize) -> Result<Vec<CycNumber>> {
    if terms > l.a.len() {
        return Err(Error::PrecisionShortfall {
            needed: terms as u64,
            available: l.a.len() as u64,
        });
    }
    let mu = arith::mobius_sieve(terms);
    let w = twisted_weights(&l.chi_tn, l.k, terms, Some(&mu));
    Ok(convolve(&w, &l.a[..terms]))
}

/// `χ²(p) p^{2k-1}`.
fn lift_norm(chi2_p: &CycNumber, k: u32, p: u64) -> CycNumber {
    chi2_p.scale_int(&BigInt::from(p).pow(2 * k - 1))
}

/// `a(t p^{2ν})`, `ν = 0..terms`, from
/// `a(t)(1 − χ_{t,N}(p)p^{k-1}X) / (1 − λ_p X + χ²(p)p^{2k-1}X²)`.
pub fn halfintegral_euler_series(
    a_t: &CycNumber,
    lambda_p: &CycNumber,
    chi: &DirichletCharacter,
    chi_tn_p: &CycNumber,
    p: u64,
    k: u32,
    terms: usize,
) -> Result<Vec<CycNumber>> {
    if terms < 1 {
        return Err(Error::InvalidArgument("terms must be at least 1".into()));
    }
    let chi_p = chi.evaluate(p as i64);
    let norm = lift_norm(&(&chi_p * &chi_p), k, p);
    let mut out = vec![a_t.clone()];
    if terms > 1 {
        let corr = chi_tn_p.scale_int(&BigInt::from(p).pow(k - 1));
        out.push(&(lambda_p * a_t) - &(a_t * &corr));
    }
    while out.len() < terms {
        let l = out.len();
        out.push(&(lambda_p * &out[l - 1]) - &(&norm * &out[l - 2]));
    }
    Ok(out)
}

/// `A(p^ν) = Σ_{i≤ν} χ_{t,N}(p)^i p^{i(k-1)} b(p^{ν-i})` from p-power values of `b`.
pub fn lift_prime_power(b_pp: &[CycNumber], chi_tn_p: &CycNumber, k: u32, p: u64) -> Vec<CycNumber> {
    let step = chi_tn_p.scale_int(&BigInt::from(p).pow(k - 1));
    // A(p^ν) = b(p^ν) + step·A(p^{ν-1})
    let mut out: Vec<CycNumber> = Vec::with_capacity(b_pp.len());
    for (nu, b) in b_pp.iter().enumerate() {
        let v = if nu == 0 {
            b.clone()
        } else {
            b + &(&step * &out[nu - 1])
        };
        out.push(v);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub p: u64,
    pub passed: bool,
    /// First `ν` where `A(p^ν)` breaks the weight-`2k` Hecke recursion.
    pub first_failure: Option<usize>,
    pub factor: EulerFactor,
    /// `max ||root| / p^{k-1/2} − 1|`.
    pub modulus_deviation: f64,
}

/// Checks that the lift of the p-power values `b(p^ν) = a(t p^{2ν})`
/// satisfies `A(p) = λ A(1)`, `A(p^{ν+1}) = λ A(p^ν) − χ²(p)p^{2k-1}A(p^{ν-1})`.
pub fn eigen_transfer_check(
    b_pp: &[CycNumber],
    lambda_p: &CycNumber,
    chi: &DirichletCharacter,
    chi_tn_p: &CycNumber,
    k: u32,
    p: u64,
) -> TransferReport {
    let chi_p = chi.evaluate(p as i64);
    let chi2 = &chi_p * &chi_p;
    let norm = lift_norm(&chi2, k, p);
    let a = lift_prime_power(b_pp, chi_tn_p, k, p);
    let first_failure = (1..a.len()).find(|&nu| {
        let mut expect = lambda_p * &a[nu - 1];
        if nu >= 2 {
            expect = &expect - &(&norm * &a[nu - 2]);
        }
        expect != a[nu]
    });
    let factor = euler_roots(lambda_p, 2 * k, &chi2, p);
    TransferReport {
        p,
        passed: first_failure.is_none(),
        first_failure,
        modulus_deviation: factor.modulus_deviation(),
        factor,
    }
}

/// The same check reading `b(p^ν)` out of a context and lift.
pub fn eigen_transfer_check_ctx(
    ctx: &HalfIntegralContext,
    l: &LiftResult,
    p: u64,
    lambda_p: &CycNumber,
) -> Result<TransferReport> {
    if ctx.level.is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("p = {p} divides the level")));
    }
    let mut b_pp = Vec::new();
    let mut q = 1u64;
    while (q as usize) <= ctx.b.len() && (q as usize) <= l.a.len() {
        b_pp.push(ctx.b(q)?.clone());
        q = match q.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    let report = eigen_transfer_check(&b_pp, lambda_p, &ctx.character, &l.chi_tn.evaluate(p as i64), ctx.k, p);
    // cross-check the closed form against the full divisor-sum lift
    let a_pp = lift_prime_power(&b_pp, &l.chi_tn.evaluate(p as i64), ctx.k, p);
    let mut q = 1usize;
    for v in &a_pp {
        if l.a[q - 1] != *v {
            return Err(Error::NotEigenform {
                p,
                detail: format!("p-power lift disagrees with divisor sum at {q}"),
            });
        }
        q *= p as usize;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm4Report {
    pub p: u64,
    /// One of the roots of `1 − λX + χ²(p)p^{2k-1}X²` is real within tolerance.
    pub real_root: bool,
    /// `1 + χ²(p) = 0` exactly.
    pub one_plus_chi2_vanishes: bool,
    /// Sign `±` with `λ = ±p^{k-1/2}(1 + χ²(p))` within tolerance, when a root is real.
    pub eq_sign: Option<i8>,
}

pub fn thm4_degeneracy(lambda_p: &CycNumber, chi2_p: &CycNumber, k: u32, p: u64, tol: f64) -> Thm4Report {
    let one_plus = &CycNumber::one() + chi2_p;
    let ef = euler_roots(lambda_p, 2 * k, chi2_p, p);
    let real_root = std::iter::once(ef.alpha_normalized)
        .chain(ef.beta_normalized)
        .any(|r| r.im.abs() <= tol * r.norm().max(f64::MIN_POSITIVE));
    let eq_sign = if real_root {
        let lam = lambda_p.embed_scaled(ef.log2_scale);
        let target = one_plus.embed();
        let scale = target.norm().max(1.0);
        [1i8, -1]
            .into_iter()
            .find(|&s| (lam - target * s as f64).norm() <= 1e3 * tol * scale)
    } else {
        None
    };
    Thm4Report {
        p,
        real_root,
        one_plus_chi2_vanishes: one_plus.is_zero(),
        eq_sign,
    }
}

/// Eigen-data `(a(t), {λ_p})` expanded by local factors and multiplicativity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyntheticEigen {
    pub k: u32,
    pub level: u64,
    pub character: DirichletCharacter,
    pub t: u64,
    pub a_t: CycNumber,
    pub lambdas: BTreeMap<u64, CycNumber>,
    pub seed: u64,
}

/// A random integer `r` with `|r| < 2 p^{k-1/2}`.
pub fn random_deligne_integer<R: Rng>(rng: &mut R, p: u64, k: u32) -> BigInt {
    // 2 p^{k-1/2} = sqrt(4 p^{2k-1}) is irrational, so floor is a strict bound.
    let bound = (BigInt::from(4) * BigInt::from(p).pow(2 * k - 1)).sqrt();
    rng.gen_bigint_range(&-bound.clone(), &(bound + 1))
}

impl SyntheticEigen {
    /// `λ_p = χ(p)·r_p` with `|r_p| < 2p^{k-1/2}` for `p ∤ N`, `λ_p = 0` for `p | N`,
    /// over every prime `p ≤ bound`.
    pub fn random(
        seed: u64,
        k: u32,
        level: u64,
        character: DirichletCharacter,
        t: u64,
        a_t: CycNumber,
        bound: u64,
    ) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut lambdas = BTreeMap::new();
        for p in arith::primes_below(bound + 1) {
            let lam = if level.is_multiple_of(p) {
                CycNumber::zero()
            } else {
                let r = random_deligne_integer(&mut rng, p, k);
                character.evaluate(p as i64).scale_int(&r)
            };
            lambdas.insert(p, lam);
        }
        SyntheticEigen {
            k,
            level,
            character,
            t,
            a_t,
            lambdas,
            seed,
        }
    }

    fn chi_tn(&self) -> Result<DirichletCharacter> {
        chi_tn(&self.character, self.k, self.level, self.t, SymbolNumerator::default())
    }

    /// `a(t p^{2ν}) / a(t)`-normalised local values with unit constant term.
    fn local_unit(&self, chi_t: &DirichletCharacter, p: u64, terms: usize) -> Result<Vec<CycNumber>> {
        let lam = self.lambdas.get(&p).ok_or_else(|| {
            Error::InvalidArgument(format!("no eigenvalue recorded for p = {p}"))
        })?;
        halfintegral_euler_series(
            &CycNumber::one(),
            lam,
            &self.character,
            &chi_t.evaluate(p as i64),
            p,
            self.k,
            terms,
        )
    }

    /// `a(t p^{2ν})`, `ν = 0..terms`.
    pub fn local_series(&self, p: u64, terms: usize) -> Result<Vec<CycNumber>> {
        let chi_t = self.chi_tn()?;
        Ok(self
            .local_unit(&chi_t, p, terms)?
            .into_iter()
            .map(|c| &c * &self.a_t)
            .collect())
    }

    /// `b(n)` for `n ≤ terms` by multiplicativity.
    pub fn sequence(&self, terms: usize) -> Result<Vec<CycNumber>> {
        let chi_t = self.chi_tn()?;
        let spf = arith::spf_sieve(terms);
        let mut locals: BTreeMap<u64, Vec<CycNumber>> = BTreeMap::new();
        for p in arith::primes_below(terms as u64 + 1) {
            let depth = arith::ilog(p, terms as u64) as usize + 1;
            locals.insert(p, self.local_unit(&chi_t, p, depth)?);
        }
        let mut out = Vec::with_capacity(terms);
        for n in 1..=terms {
            let mut m = n;
            let mut v = self.a_t.clone();
            while m > 1 {
                let p = spf[m] as usize;
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                v = &v * &locals[&(p as u64)][e];
                if v.is_zero() {
                    break;
                }
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn context(&self, terms: usize) -> Result<HalfIntegralContext> {
        HalfIntegralContext::new(
            self.k,
            self.level,
            self.character.clone(),
            self.t,
            self.sequence(terms)?,
            Provenance::Synthetic { seed: self.seed },
        )
    }
}

/// `|r| < 2p^{k-1/2}`, decided exactly.
pub fn within_deligne(r: &BigInt, p: u64, k: u32) -> bool {
    let lhs = r.abs().pow(2);
    lhs < BigInt::from(4) * BigInt::from(p).pow(2 * k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<CycNumber> {
        v.iter().map(|&x| CycNumber::from(x)).collect()
    }

    fn ctx_from(b: Vec<CycNumber>, k: u32, level: u64, chi: DirichletCharacter, t: u64) -> HalfIntegralContext {
        HalfIntegralContext::new(k, level, chi, t, b, Provenance::Sequence).unwrap()
    }

    #[test]
    fn lift_divisor_sum_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b: Vec<i64> = (0..40).map(|_| rng.gen_range(-50..50)).collect();
        let chi = DirichletCharacter::kronecker_character(-4).unwrap();
        let ctx = ctx_from(ints(&b), 3, 4, chi.clone(), 5);
        let l = lift(&ctx, 40).unwrap();
        let chit = ctx.chi_tn().unwrap();
        for n in 1..=40usize {
            let mut acc = CycNumber::zero();
            for d in 1..=n {
                if n % d == 0 {
                    let term = chit
                        .evaluate(d as i64)
                        .scale_int(&(BigInt::from(d).pow(2) * b[n / d - 1]));
                    acc = &acc + &term;
                }
            }
            assert_eq!(l.a[n - 1], acc, "A({n})");
        }
        assert_eq!(l.a[0], CycNumber::from(b[0]));
        // A(6) spelled out
        let e = |d: i64| chit.evaluate(d);
        let a6 = &(&(&CycNumber::from(b[5]) + &e(2).scale_int(&BigInt::from(4 * b[2])))
            + &e(3).scale_int(&BigInt::from(9 * b[1])))
            + &e(6).scale_int(&BigInt::from(36 * b[0]));
        assert_eq!(l.a[5], a6);
    }

    #[test]
    fn lift_at_vanishing_prime() {
        let ctx = ctx_from(ints(&[3, 7, 11]), 2, 4, DirichletCharacter::principal(4), 1);
        let l = lift(&ctx, 3).unwrap();
        // χ_{t,N}(2) = 0 since 2 | N
        assert_eq!(l.a[1], CycNumber::from(7));
    }

    #[test]
    fn roundtrip_with_complex_character() {
        let chi = DirichletCharacter::all(20)
            .into_iter()
            .find(|c| c.order() == 4)
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut b: Vec<i64> = (0..200).map(|_| rng.gen_range(-1000..1000)).collect();
        b[0] = 5;
        let ctx = ctx_from(ints(&b), 4, 20, chi, 3);
        let l = lift(&ctx, 200).unwrap();
        assert_eq!(invert_lift(&l, 200).unwrap(), ctx.b);
    }

    #[test]
    fn inverse_of_delta_sequence() {
        let chi = DirichletCharacter::principal(4);
        let mut a = vec![CycNumber::zero(); 20];
        a[0] = CycNumber::one();
        let l = LiftResult {
            a,
            chi_tn: chi_tn(&chi, 2, 4, 1, SymbolNumerator::LevelSquared).unwrap(),
            k: 2,
            level: 4,
            t: 1,
        };
        let b = invert_lift(&l, 20).unwrap();
        let mu = arith::mobius_sieve(20);
        for n in 1..=20usize {
            let expect = l.chi_tn.evaluate(n as i64).scale_int(&BigInt::from(mu[n] as i64 * n as i64));
            assert_eq!(b[n - 1], expect);
        }
    }

    #[test]
    fn square_support_preserved() {
        let b: Vec<i64> = (1..=100).map(|n: i64| if (n as f64).sqrt().fract() == 0.0 { n } else { 0 }).collect();
        let ctx = ctx_from(ints(&b), 2, 8, DirichletCharacter::principal(8), 1);
        let l = lift(&ctx, 100).unwrap();
        assert_eq!(invert_lift(&l, 100).unwrap(), ctx.b);
    }

    #[test]
    fn euler_series_small_terms() {
        let chi = DirichletCharacter::principal(4);
        let a_t = CycNumber::from(3);
        let lam = CycNumber::from(10);
        let cp = CycNumber::from(-1);
        let s = halfintegral_euler_series(&a_t, &lam, &chi, &cp, 5, 2, 4).unwrap();
        assert_eq!(s[0], a_t);
        // a(t)(λ − χ_{t,N}(p)p^{k-1})
        assert_eq!(s[1], CycNumber::from(3 * (10 + 5)));
        // long-division oracle: c2 = λ c1 − p^{2k-1} c0
        assert_eq!(s[2], CycNumber::from(10 * 45 - 125 * 3));
        let zero = halfintegral_euler_series(&CycNumber::zero(), &lam, &chi, &cp, 5, 2, 6).unwrap();
        assert!(zero.iter().all(|c| c.is_zero()));
        assert!(halfintegral_euler_series(&a_t, &lam, &chi, &cp, 5, 2, 0).is_err());
    }

    #[test]
    fn transfer_check_and_sensitivity() {
        let chi = DirichletCharacter::principal(4);
        let cp = CycNumber::from(1);
        for lam in [0i64, 17] {
            let lam = CycNumber::from(lam);
            let b = halfintegral_euler_series(&CycNumber::from(2), &lam, &chi, &cp, 3, 6, 31).unwrap();
            let rep = eigen_transfer_check(&b, &lam, &chi, &cp, 6, 3);
            assert!(rep.passed);
            let mut bad = b.clone();
            bad[7] = &bad[7] + &CycNumber::one();
            let rep = eigen_transfer_check(&bad, &lam, &chi, &cp, 6, 3);
            assert_eq!(rep.first_failure, Some(7));
        }
    }

    #[test]
    fn thm4_examples() {
        let r = thm4_degeneracy(&CycNumber::zero(), &CycNumber::one(), 3, 5, 1e-9);
        assert!(!r.real_root && !r.one_plus_chi2_vanishes);
        // λ = 2·5^{5/2} = 50√5, with √5 = ζ5 − ζ5² − ζ5³ + ζ5⁴
        let sqrt5 = &(&(&CycNumber::root_of_unity(5, 1) - &CycNumber::root_of_unity(5, 2))
            - &CycNumber::root_of_unity(5, 3))
            + &CycNumber::root_of_unity(5, 4);
        let lam = sqrt5.scale_int(&BigInt::from(50));
        let r = thm4_degeneracy(&lam, &CycNumber::one(), 3, 5, 1e-9);
        assert!(r.real_root);
        assert_eq!(r.eq_sign, Some(1));
        let r = thm4_degeneracy(&CycNumber::from(7), &CycNumber::from(-1), 3, 5, 1e-9);
        assert!(r.one_plus_chi2_vanishes);
    }

    #[test]
    fn synthetic_sequence_is_multiplicative_and_lifts_to_eigenform() {
        let chi = DirichletCharacter::kronecker_character(-4).unwrap().lift(12).unwrap();
        let syn = SyntheticEigen::random(9, 4, 12, chi, 5, CycNumber::from(2), 400);
        let ctx = syn.context(400).unwrap();
        let b = &ctx.b;
        assert_eq!(b[0], CycNumber::from(2));
        // b(mn) a(t) = b(m) b(n) for coprime m, n
        for (m, n) in [(5usize, 7usize), (8, 9), (4, 25), (11, 13)] {
            assert_eq!(&b[m * n - 1] * &b[0], &b[m - 1] * &b[n - 1]);
        }
        let l = lift(&ctx, 400).unwrap();
        for p in [5u64, 7, 11, 13] {
            let rep = eigen_transfer_check_ctx(&ctx, &l, p, &syn.lambdas[&p]).unwrap();
            assert!(rep.passed, "p = {p}");
            assert!(rep.modulus_deviation < 1e-9);
        }
    }

    #[test]
    fn deligne_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let r = random_deligne_integer(&mut rng, 7, 5);
            assert!(within_deligne(&r, 7, 5));
        }
    }

    #[test]
    fn context_validation() {
        let chi = DirichletCharacter::principal(1);
        assert!(HalfIntegralContext::new(2, 6, chi.clone(), 1, vec![], Provenance::Sequence).is_err());
        assert!(HalfIntegralContext::new(2, 4, chi.clone(), 4, vec![], Provenance::Sequence).is_err());
        let c = HalfIntegralContext::new(2, 4, chi, 1, ints(&[0, 0, 3]), Provenance::Sequence).unwrap();
        assert_eq!(c.nonzero_witness(), Some(3));
    }
}
