//! Dirichlet characters with exact root-of-unity values.
//!
//! A character mod `N` is stored by the images of fixed generators of
//! `(Z/N)^*`, one cyclic factor per odd prime power and up to two for the
//! 2-adic part (`-1` and `5` when `8 | N`). Each image is an exponent `e`
//! meaning `χ(g) = ζ_m^e`, where `m` is the character's value order.
//! Evaluation uses per-component discrete-log tables.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{self, factorize, gcd, lcm};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};

/// Kronecker symbol `(a/n)` on all integers: `(a/0)` is 1 iff `a = ±1`,
/// and `(a/-1)` is -1 iff `a < 0`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= v;
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a/n), n odd positive.
    a = a.rem_euclid(n);
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A generator of one cyclic factor of `(Z/N)^*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// CRT lift: `≡ g mod q` and `≡ 1` modulo the rest of `N`.
    pub value: u64,
    /// Order of the generator in `(Z/N)^*`.
    pub order: u64,
}

#[derive(Clone, Debug)]
struct Component {
    q: u64,
    gens: Vec<Generator>,
    gens_mod_q: Vec<u64>,
    dlog: Arc<Vec<[u32; 2]>>,
}

const NO_LOG: u32 = u32::MAX;

fn dlog_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<[u32; 2]>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<[u32; 2]>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Generators of `(Z/p^e)^*` (as residues mod `q = p^e`) with their orders.
fn local_generators(p: u64, e: u32) -> Vec<(u64, u64)> {
    let q = p.pow(e);
    if p == 2 {
        match e {
            1 => vec![],
            2 => vec![(3, 2)],
            _ => vec![(q - 1, 2), (5, q / 4)],
        }
    } else {
        vec![(arith::primitive_root_prime_power(p, e), q / p * (p - 1))]
    }
}

fn local_dlog(q: u64, gens: &[(u64, u64)]) -> Arc<Vec<[u32; 2]>> {
    if let Some(t) = dlog_cache().lock().unwrap().get(&q) {
        return t.clone();
    }
    let mut table = vec![[NO_LOG, NO_LOG]; q as usize];
    match gens {
        [] => table[(1 % q) as usize] = [0, 0],
        [(g, o)] => {
            let mut x = 1 % q;
            for k in 0..*o {
                table[x as usize] = [k as u32, 0];
                x = x * g % q;
            }
        }
        [(g1, o1), (g2, o2)] => {
            let mut x = 1 % q;
            for a in 0..*o1 {
                let mut y = x;
                for b in 0..*o2 {
                    table[y as usize] = [a as u32, b as u32];
                    y = y * g2 % q;
                }
                x = x * g1 % q;
            }
        }
        _ => unreachable!("at most two local generators"),
    }
    let table = Arc::new(table);
    dlog_cache().lock().unwrap().insert(q, table.clone());
    table
}

fn crt_lift(residue: u64, q: u64, modulus: u64) -> u64 {
    // x ≡ residue (mod q), x ≡ 1 (mod modulus/q)
    let rest = modulus / q;
    if rest == 1 {
        return residue % modulus;
    }
    let m = modulus as u128;
    let r = rest as u128;
    let qq = q as u128;
    // x = residue + q*k with q*k ≡ 1 - residue (mod rest)
    let inv_q = mod_inverse(q % rest, rest) as u128;
    let target = (1 + r - (residue as u128 % r)) % r;
    let k = target * inv_q % r;
    ((residue as u128 + qq * k) % m) as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// Fixed generators of `(Z/N)^*`, in component order (increasing primes;
/// for `8 | N` the 2-adic pair is `-1` then `5`).
pub fn canonical_generators(modulus: u64) -> Vec<Generator> {
    build_components(modulus)
        .into_iter()
        .flat_map(|c| c.gens)
        .collect()
}

fn build_components(modulus: u64) -> Vec<Component> {
    factorize(modulus)
        .into_iter()
        .map(|(p, e)| {
            let q = p.pow(e);
            let local = local_generators(p, e);
            let dlog = local_dlog(q, &local);
            Component {
                q,
                gens: local
                    .iter()
                    .map(|&(g, o)| Generator {
                        value: crt_lift(g, q, modulus),
                        order: o,
                    })
                    .collect(),
                gens_mod_q: local.iter().map(|&(g, _)| g).collect(),
                dlog,
            }
        })
        .collect()
}

/// How the numerator of the Kronecker symbol inside `χ_{t,N}` is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolNumerator {
    /// `(-1)^k N^2 t`.
    #[default]
    LevelSquared,
    /// `(-1)^k N t`.
    Level,
}

/// JSON form of a character: either explicit generator images or the
/// Kronecker shorthand `{"kronecker": D}` for `(D/·)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharacterSpec {
    Kronecker {
        kronecker: i64,
    },
    Generators {
        modulus: u64,
        #[serde(default)]
        generators: Vec<(u64, u32)>,
        #[serde(rename = "valueOrder", default = "one_u32")]
        value_order: u32,
    },
}

fn one_u32() -> u32 {
    1
}

#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    value_order: u32,
    components: Vec<Component>,
    /// Exponent images of the generators, flattened in component order.
    images: Vec<u32>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && {
            let l = lcm(self.value_order as u64, other.value_order as u64) as u32;
            let sa = l / self.value_order;
            let sb = l / other.value_order;
            self.images
                .iter()
                .zip(&other.images)
                .all(|(a, b)| (a * sa) % l == (b * sb) % l)
        }
    }
}

impl Eq for DirichletCharacter {}

impl Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = CharacterSpec::deserialize(d)?;
        DirichletCharacter::from_spec(&spec).map_err(serde::de::Error::custom)
    }
}

impl DirichletCharacter {
    pub fn principal(modulus: u64) -> Self {
        Self::from_generator_images(modulus, 1, vec![0; canonical_generators(modulus).len()])
            .expect("principal character is always valid")
    }

    /// Character sending the `i`-th canonical generator to `ζ_m^{images[i]}`.
    pub fn from_generator_images(modulus: u64, value_order: u32, images: Vec<u32>) -> Result<Self> {
        if modulus == 0 || value_order == 0 {
            return Err(Error::InvalidCharacter("modulus and value order must be positive".into()));
        }
        let components = build_components(modulus);
        let gens: Vec<&Generator> = components.iter().flat_map(|c| &c.gens).collect();
        if gens.len() != images.len() {
            return Err(Error::InvalidCharacter(format!(
                "modulus {modulus} has {} generators, got {} images",
                gens.len(),
                images.len()
            )));
        }
        for (g, &e) in gens.iter().zip(&images) {
            if !(e as u64 * g.order).is_multiple_of(value_order as u64) {
                return Err(Error::InvalidCharacter(format!(
                    "image ζ_{value_order}^{e} of generator {} has order not dividing {}",
                    g.value, g.order
                )));
            }
        }
        let images = images.into_iter().map(|e| e % value_order).collect();
        Ok(DirichletCharacter {
            modulus,
            value_order,
            components,
            images,
        }
        .simplified())
    }

    /// Character determined by a function giving the exponent of `χ(g)`
    /// (in `μ_m`) on each canonical generator. The caller guarantees the
    /// function is a character mod `modulus`.
    pub fn from_fn(modulus: u64, value_order: u32, f: impl Fn(u64) -> u32) -> Result<Self> {
        let images = canonical_generators(modulus)
            .iter()
            .map(|g| f(g.value) % value_order)
            .collect();
        Self::from_generator_images(modulus, value_order, images)
    }

    /// Character given by images of an arbitrary generating set of `(Z/N)^*`.
    /// Consistency and generation are checked by walking the whole group.
    pub fn from_generators(modulus: u64, value_order: u32, pairs: &[(u64, u32)]) -> Result<Self> {
        if modulus == 0 || value_order == 0 {
            return Err(Error::InvalidCharacter("modulus and value order must be positive".into()));
        }
        let n = modulus as usize;
        let mut table: Vec<Option<u32>> = vec![None; n];
        let start = (1 % modulus) as usize;
        table[start] = Some(0);
        let mut queue = VecDeque::from([start as u64]);
        for &(g, _) in pairs {
            if gcd(g % modulus, modulus) != 1 {
                return Err(Error::InvalidCharacter(format!("{g} is not a unit mod {modulus}")));
            }
        }
        while let Some(x) = queue.pop_front() {
            let vx = table[x as usize].unwrap();
            for &(g, e) in pairs {
                let y = ((x as u128 * (g % modulus) as u128) % modulus as u128) as usize;
                let vy = (vx + e) % value_order;
                match table[y] {
                    None => {
                        table[y] = Some(vy);
                        queue.push_back(y as u64);
                    }
                    Some(prev) if prev != vy => {
                        return Err(Error::InvalidCharacter(format!(
                            "generator images are inconsistent at residue {y}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        for (r, v) in table.iter().enumerate() {
            if v.is_none() && gcd(r as u64, modulus) == 1 {
                return Err(Error::InvalidCharacter(format!(
                    "generators do not generate (Z/{modulus})^* (missing {r})"
                )));
            }
        }
        Self::from_fn(modulus, value_order, |g| table[(g % modulus) as usize].unwrap())
    }

    /// The quadratic character `(D/·)`, of modulus `|D|`. Requires
    /// `D ≡ 0, 1 (mod 4)` so that the symbol is periodic in its lower entry.
    pub fn kronecker_character(d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidCharacter("(0/·) is not a character".into()));
        }
        if d.rem_euclid(4) > 1 {
            return Err(Error::InvalidCharacter(format!(
                "(D/·) is a Dirichlet character only for D ≡ 0,1 mod 4; use D = {}",
                4 * d
            )));
        }
        let modulus = d.unsigned_abs();
        Self::from_fn(modulus, 2, |g| if kronecker(d, g as i64) == -1 { 1 } else { 0 })
    }

    pub fn from_spec(spec: &CharacterSpec) -> Result<Self> {
        match spec {
            CharacterSpec::Kronecker { kronecker } => Self::kronecker_character(*kronecker),
            CharacterSpec::Generators {
                modulus,
                generators,
                value_order,
            } => Self::from_generators(*modulus, *value_order, generators),
        }
    }

    pub fn to_spec(&self) -> CharacterSpec {
        CharacterSpec::Generators {
            modulus: self.modulus,
            generators: self
                .generators()
                .iter()
                .zip(&self.images)
                .map(|(g, &e)| (g.value, e))
                .collect(),
            value_order: self.value_order,
        }
    }

    /// Every character modulo `modulus`.
    pub fn all(modulus: u64) -> Vec<Self> {
        let gens = canonical_generators(modulus);
        let m = gens.iter().fold(1u64, |acc, g| lcm(acc, g.order)) as u32;
        let mut out = Vec::new();
        let mut idx = vec![0u64; gens.len()];
        loop {
            let images = gens
                .iter()
                .zip(&idx)
                .map(|(g, &i)| (i * (m as u64 / g.order)) as u32)
                .collect();
            out.push(Self::from_generator_images(modulus, m, images).expect("valid by construction"));
            let mut pos = 0;
            loop {
                if pos == gens.len() {
                    return out;
                }
                idx[pos] += 1;
                if idx[pos] < gens[pos].order {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Shrinks the value order to the character's order.
    fn simplified(mut self) -> Self {
        let ord = self.order() as u32;
        if ord != self.value_order {
            let step = self.value_order / ord;
            for e in &mut self.images {
                *e /= step;
            }
            self.value_order = ord;
        }
        self
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `m` such that every value lies in `μ_m ∪ {0}`.
    pub fn value_order(&self) -> u32 {
        self.value_order
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.components.iter().flat_map(|c| c.gens.clone()).collect()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Exponent `e` with `χ(n) = ζ_m^e`, or `None` when `gcd(n, N) > 1`.
    pub fn exponent(&self, n: i64) -> Option<u32> {
        let r = n.rem_euclid(self.modulus as i64) as u64;
        if gcd(r, self.modulus) != 1 {
            return None;
        }
        let m = self.value_order as u64;
        let mut acc = 0u64;
        let mut img = self.images.iter();
        for c in &self.components {
            let logs = c.dlog[(r % c.q) as usize];
            for (k, _) in c.gens_mod_q.iter().enumerate() {
                let e = *img.next().unwrap() as u64;
                acc = (acc + logs[k] as u64 * e) % m;
            }
        }
        Some(acc as u32)
    }

    pub fn evaluate(&self, n: i64) -> CycNumber {
        match self.exponent(n) {
            None => CycNumber::zero(),
            Some(e) => {
                let m = self.value_order;
                // ±1 stay rational
                if e == 0 {
                    CycNumber::one()
                } else if 2 * e == m {
                    CycNumber::from(-1)
                } else {
                    CycNumber::root_of_unity(m, e as i64)
                }
            }
        }
    }

    pub fn evaluate_complex(&self, n: i64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(0) => Complex64::new(1.0, 0.0),
            Some(e) if 2 * e == self.value_order => Complex64::new(-1.0, 0.0),
            Some(e) => Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * e as f64 / self.value_order as f64,
            ),
        }
    }

    /// The order `r_χ`: least `r ≥ 1` with `χ^r` principal.
    pub fn order(&self) -> u64 {
        let m = self.value_order as u64;
        self.images
            .iter()
            .fold(1u64, |acc, &e| lcm(acc, m / gcd(m, e as u64)))
    }

    pub fn order_is_odd(&self) -> bool {
        self.order() % 2 == 1
    }

    pub fn is_principal(&self) -> bool {
        self.images.iter().all(|&e| e == 0)
    }

    /// `χ(-1) = 1`.
    pub fn is_even(&self) -> bool {
        self.exponent(-1) == Some(0)
    }

    pub fn pow(&self, r: i64) -> Self {
        let m = self.value_order as i64;
        let images = self
            .images
            .iter()
            .map(|&e| ((e as i64 * r).rem_euclid(m)) as u32)
            .collect();
        Self::from_generator_images(self.modulus, self.value_order, images)
            .expect("powers of a character are characters")
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    /// The same character viewed modulo a multiple `modulus` of its own.
    pub fn lift(&self, modulus: u64) -> Result<Self> {
        if !modulus.is_multiple_of(self.modulus) {
            return Err(Error::InvalidCharacter(format!(
                "cannot lift a character mod {} to modulus {modulus}",
                self.modulus
            )));
        }
        Self::from_fn(modulus, self.value_order, |g| {
            self.exponent(g as i64).expect("generator is a unit")
        })
    }

    /// Pointwise product, as a character modulo `lcm` of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let modulus = lcm(self.modulus, other.modulus);
        let m = lcm(self.value_order as u64, other.value_order as u64) as u32;
        let sa = m / self.value_order;
        let sb = m / other.value_order;
        Self::from_fn(modulus, m, |g| {
            let a = self.exponent(g as i64).expect("unit");
            let b = other.exponent(g as i64).expect("unit");
            (a * sa + b * sb) % m
        })
        .expect("product of characters is a character")
    }
}

/// The character `χ_{t,N}(d) = χ(d)·((-1)^k N^2 t / d)` used by the Shimura
/// lift, realised modulo `lcm(cond. modulus of χ, |numerator|)` with no
/// reduction to a primitive character.
pub fn chi_tn(
    chi: &DirichletCharacter,
    k: u32,
    level: u64,
    t: u64,
    numerator: SymbolNumerator,
) -> Result<DirichletCharacter> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be a positive integer".into()));
    }
    if level == 0 {
        return Err(Error::InvalidArgument("level must be positive".into()));
    }
    let base: i128 = match numerator {
        SymbolNumerator::LevelSquared => level as i128 * level as i128 * t as i128,
        SymbolNumerator::Level => level as i128 * t as i128,
    };
    let d = if k % 2 == 1 { -base } else { base };
    let d = i64::try_from(d).map_err(|_| Error::InvalidArgument("Kronecker numerator overflows".into()))?;
    // (D/d) = (4D/d) on odd d; 4D is a discriminant, so χ_{t,N} vanishes at 2.
    let d = if d.rem_euclid(4) > 1 { 4 * d } else { d };
    let symbol = DirichletCharacter::kronecker_character(d)?;
    Ok(chi.mul(&symbol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Legendre symbol by brute-force squares, lifted to Jacobi for odd n.
    fn jacobi_brute(a: i64, n: i64) -> i32 {
        factorize(n as u64)
            .into_iter()
            .map(|(p, e)| {
                let p = p as i64;
                let r = a.rem_euclid(p);
                let leg: i32 = if r == 0 {
                    0
                } else if (1..p).any(|x| x * x % p == r) {
                    1
                } else {
                    -1
                };
                leg.pow(e)
            })
            .product()
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 2), 0);
        for a in -20..20 {
            assert_eq!(kronecker(a, 1), 1);
        }
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(-3, -1), -1);
        assert_eq!(kronecker(3, -1), 1);
        // (a/2) from the residue of a mod 8
        assert_eq!(kronecker(7, 2), 1);
        assert_eq!(kronecker(3, 2), -1);
    }

    #[test]
    fn kronecker_matches_brute_force_on_odd_moduli() {
        for a in -200i64..=200 {
            for n in (1i64..=200).step_by(2) {
                assert_eq!(kronecker(a, n), jacobi_brute(a, n), "({a}/{n})");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_both_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let a = rng.gen_range(-200..=200);
            let b = rng.gen_range(-200..=200);
            let n = rng.gen_range(-200..=200);
            let m = rng.gen_range(1..=200);
            // (0/-1) = 1 breaks multiplicativity in the top entry only there
            if !(n == -1 && a * b == 0) {
                assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
            }
            // (±1/0) = 1 likewise, so the lower entry is taken nonzero
            if n != 0 {
                assert_eq!(kronecker(a, n * m), kronecker(a, n) * kronecker(a, m));
            }
        }
    }

    #[test]
    fn canonical_generators_generate() {
        for n in 1..=200u64 {
            let gens = canonical_generators(n);
            let size: u64 = gens.iter().map(|g| g.order).product();
            assert_eq!(size, arith::euler_phi(n), "N = {n}");
            for g in &gens {
                assert_eq!(arith::pow_mod(g.value, g.order, n), 1 % n);
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let trivial = DirichletCharacter::principal(1);
        for n in -5..20 {
            assert_eq!(trivial.evaluate(n), CycNumber::one());
        }
        let chi4 = DirichletCharacter::kronecker_character(-4).unwrap();
        assert_eq!(chi4.evaluate(3), CycNumber::from(-1));
        assert_eq!(chi4.evaluate(5), CycNumber::one());
        for chi in DirichletCharacter::all(12) {
            assert!(chi.evaluate(6).is_zero());
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(DirichletCharacter::principal(15).order(), 1);
        assert_eq!(DirichletCharacter::kronecker_character(-4).unwrap().order(), 2);
        // generator of (Z/7)^* to ζ6
        let g = canonical_generators(7)[0].value;
        let chi = DirichletCharacter::from_generators(7, 6, &[(g, 1)]).unwrap();
        assert_eq!(chi.order(), 6);
        let mut r = 1;
        while !chi.pow(r).is_principal() {
            r += 1;
        }
        assert_eq!(r, 6);
    }

    #[test]
    fn characters_are_multiplicative_periodic_and_vanish_correctly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1u64, 4, 7, 8, 12, 15, 16, 24, 45, 63] {
            for chi in DirichletCharacter::all(n) {
                for _ in 0..300 {
                    let a = rng.gen_range(-1000i64..1000);
                    let b = rng.gen_range(-1000i64..1000);
                    assert_eq!(chi.evaluate(a * b), &chi.evaluate(a) * &chi.evaluate(b));
                    assert_eq!(chi.evaluate(a + n as i64), chi.evaluate(a));
                    assert_eq!(chi.evaluate(a).is_zero(), gcd(a.unsigned_abs(), n) > 1 && n > 1);
                }
            }
        }
    }

    #[test]
    fn order_matches_brute_force_and_square_order_divides() {
        for n in 1..=40u64 {
            let all = DirichletCharacter::all(n);
            assert_eq!(all.len() as u64, arith::euler_phi(n));
            for chi in all {
                let mut r = 1;
                while !chi.pow(r).is_principal() {
                    r += 1;
                }
                assert_eq!(chi.order(), r as u64);
                assert_eq!(chi.order() % chi.pow(2).order(), 0);
                assert_eq!(chi.pow(2).order_is_odd(), chi.pow(2).order() % 2 == 1);
            }
        }
    }

    #[test]
    fn from_generators_rejects_inconsistent_images() {
        let g = canonical_generators(7)[0].value;
        assert!(DirichletCharacter::from_generators(7, 6, &[(g, 1), (g, 2)]).is_err());
        assert!(DirichletCharacter::from_generators(7, 2, &[(6, 1)]).is_err());
        assert!(DirichletCharacter::kronecker_character(3).is_err());
    }

    #[test]
    fn spec_roundtrip() {
        for chi in DirichletCharacter::all(24) {
            let json = serde_json::to_string(&chi).unwrap();
            let back: DirichletCharacter = serde_json::from_str(&json).unwrap();
            assert_eq!(back, chi);
        }
        let k: DirichletCharacter = serde_json::from_str(r#"{"kronecker": -4}"#).unwrap();
        assert_eq!(k, DirichletCharacter::kronecker_character(-4).unwrap());
    }

    #[test]
    fn chi_tn_examples() {
        let trivial = DirichletCharacter::principal(1);
        let c = chi_tn(&trivial, 2, 4, 1, SymbolNumerator::LevelSquared).unwrap();
        for d in (1..100).step_by(2) {
            assert_eq!(c.evaluate(d), CycNumber::one());
        }
        let chi4 = DirichletCharacter::kronecker_character(-4).unwrap();
        let c = chi_tn(&chi4, 1, 4, 1, SymbolNumerator::LevelSquared).unwrap();
        for d in [3i64, 5, 7] {
            let direct = kronecker(-4, d) * kronecker(-16, d);
            assert_eq!(c.evaluate(d), CycNumber::from(direct as i64));
        }
        // vanishing on gcd(d, 2Nt) > 1
        let c = chi_tn(&trivial, 3, 12, 5, SymbolNumerator::LevelSquared).unwrap();
        for d in 1..300i64 {
            if gcd(d as u64, 2 * 12 * 5) > 1 {
                assert!(c.evaluate(d).is_zero());
            }
        }
        assert!(chi_tn(&trivial, 1, 4, 0, SymbolNumerator::LevelSquared).is_err());
    }
}
