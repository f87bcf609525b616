//! Built-in forms and the JSON form-spec loader.
//!
//! Every concrete form is an eta quotient or a unary theta series; the
//! `synthetic_eigen` kind produces `b(n) = a(t n²)` from random Hecke data.
//! Eta weight, level and nebentypus come from the usual eta-quotient
//! formulas and are guarded by the eigenform self-check.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::characters::{CharacterSpec, DirichletCharacter};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::hecke::{apply_tj, FormContext};
use crate::series::{eta_quotient, unary_theta, EtaSpec, Offset, QSeries};
use crate::shimura::{eigen_transfer_check, HalfIntegralContext, Provenance, SyntheticEigen};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FormSpec {
    EtaQuotient {
        factors: Vec<(u64, i64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weight: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        level: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        character: Option<CharacterSpec>,
    },
    UnaryTheta {
        psi: CharacterSpec,
        nu: u32,
        #[serde(default = "one_u64")]
        t: u64,
    },
    SyntheticEigen {
        k: u32,
        level: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        character: Option<CharacterSpec>,
        #[serde(default = "one_u64")]
        t: u64,
        #[serde(default = "one_i64")]
        a_t: i64,
        #[serde(default)]
        seed: u64,
    },
}

fn one_u64() -> u64 {
    1
}

fn one_i64() -> i64 {
    1
}

impl FormSpec {
    pub fn eta(factors: &[(u64, i64)]) -> Self {
        FormSpec::EtaQuotient {
            factors: factors.to_vec(),
            weight: None,
            level: None,
            character: None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A half-integral weight `k + 1/2` expansion, indexed from `q^0`.
#[derive(Clone, Debug)]
pub struct HalfIntegralSeries {
    pub name: String,
    pub k: u32,
    pub level: u64,
    pub character: DirichletCharacter,
    pub series: QSeries,
}

impl HalfIntegralSeries {
    /// `b(n) = a(t n²)` for every `n` with `t n²` inside the precision.
    pub fn context(&self, t: u64) -> Result<HalfIntegralContext> {
        let prec = self.series.precision();
        let mut b = Vec::new();
        let mut n = 1u64;
        while let Some(e) = n.checked_mul(n).and_then(|s| s.checked_mul(t)) {
            if e >= prec {
                break;
            }
            b.push(self.series.coeff(e).cloned().unwrap_or_default());
            n += 1;
        }
        HalfIntegralContext::new(
            self.k,
            self.level,
            self.character.clone(),
            t,
            b,
            Provenance::Catalog {
                name: self.name.clone(),
            },
        )
    }
}

#[derive(Clone, Debug)]
pub enum LoadedForm {
    Integral(FormContext),
    HalfIntegral(HalfIntegralSeries),
    Synthetic {
        eigen: SyntheticEigen,
        context: HalfIntegralContext,
    },
}

impl LoadedForm {
    pub fn name(&self) -> String {
        match self {
            LoadedForm::Integral(f) => f.name.clone(),
            LoadedForm::HalfIntegral(h) => h.name.clone(),
            LoadedForm::Synthetic { eigen, .. } => format!("synthetic-{}", eigen.seed),
        }
    }

    pub fn level(&self) -> u64 {
        match self {
            LoadedForm::Integral(f) => f.level,
            LoadedForm::HalfIntegral(h) => h.level,
            LoadedForm::Synthetic { eigen, .. } => eigen.level,
        }
    }

    pub fn character(&self) -> &DirichletCharacter {
        match self {
            LoadedForm::Integral(f) => &f.character,
            LoadedForm::HalfIntegral(h) => &h.character,
            LoadedForm::Synthetic { eigen, .. } => &eigen.character,
        }
    }

    /// Weight as `2·weight` (odd for half-integral kinds).
    pub fn twice_weight(&self) -> u32 {
        match self {
            LoadedForm::Integral(f) => 2 * f.weight,
            LoadedForm::HalfIntegral(h) => 2 * h.k + 1,
            LoadedForm::Synthetic { eigen, .. } => 2 * eigen.k + 1,
        }
    }

    pub fn integral(&self) -> Result<&FormContext> {
        match self {
            LoadedForm::Integral(f) => Ok(f),
            _ => Err(Error::InvalidArgument(format!(
                "{} does not have integral weight",
                self.name()
            ))),
        }
    }

    /// The `b(n) = a(t n²)` view used by the lift.
    pub fn half_context(&self, t: u64) -> Result<HalfIntegralContext> {
        match self {
            LoadedForm::HalfIntegral(h) => h.context(t),
            LoadedForm::Synthetic { context, .. } if context.t == t => Ok(context.clone()),
            LoadedForm::Synthetic { eigen, .. } => Err(Error::InvalidArgument(format!(
                "synthetic data was generated for t = {}, not {t}",
                eigen.t
            ))),
            LoadedForm::Integral(f) => Err(Error::InvalidArgument(format!(
                "{} has integral weight",
                f.name
            ))),
        }
    }

    /// Rows `(n, c(n))` for `1 ≤ n ≤ count`: `a(n)` for q-expansions, `b(n)`
    /// for synthetic data. Missing coefficients are reported as zero only
    /// inside the known precision.
    pub fn rows(&self, count: u64) -> Result<Vec<(u64, CycNumber)>> {
        let series = match self {
            LoadedForm::Integral(f) => f.coeffs(),
            LoadedForm::HalfIntegral(h) => &h.series,
            LoadedForm::Synthetic { context, .. } => {
                return (1..=count)
                    .map(|n| Ok((n, context.b(n)?.clone())))
                    .collect();
            }
        };
        if count >= series.precision() {
            return Err(Error::PrecisionShortfall {
                needed: count,
                available: series.precision().saturating_sub(1),
            });
        }
        Ok((1..=count)
            .map(|n| (n, series.coeff(n).cloned().unwrap_or_default()))
            .collect())
    }
}

fn declared_character(spec: &CharacterSpec, level: u64) -> Result<DirichletCharacter> {
    DirichletCharacter::from_spec(spec)?.lift(level)
}

fn load_eta(
    name: &str,
    factors: &[(u64, i64)],
    weight: Option<f64>,
    level: Option<u64>,
    character: Option<&CharacterSpec>,
    precision: u64,
) -> Result<LoadedForm> {
    let spec = EtaSpec::new(factors.to_vec())?;
    let w = spec.weight();
    let offset = spec.offset();
    if offset < Offset::from_integer(0) {
        return Err(Error::InvalidArgument(format!(
            "eta quotient has negative q-offset {offset}"
        )));
    }
    if let Some(dw) = weight {
        if (dw - *w.numer() as f64 / *w.denom() as f64).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "declared weight {dw} but the factors give {w}"
            )));
        }
    }
    if w <= Offset::from_integer(0) {
        return Err(Error::InvalidArgument(format!("eta quotient has weight {w}")));
    }
    let computed_level = spec.level();
    let level = match level {
        Some(l) if l % computed_level != 0 => {
            return Err(Error::InvalidArgument(format!(
                "declared level {l} is not a multiple of the computed level {computed_level}"
            )))
        }
        Some(l) => l,
        None => computed_level,
    };
    if w.is_integer() {
        if !offset.is_integer() {
            return Err(Error::NonIntegralOffset(offset.to_string()));
        }
        // a(n) for n ≤ precision needs `precision + 1 - offset` terms.
        let start = offset.to_integer() as u64;
        let terms = (precision + 1).saturating_sub(start).max(1);
        let series = eta_quotient(&spec, terms)?;
        let computed = spec
            .character()?
            .expect("integral weight has a character")
            .lift(level)?;
        let chi = match character {
            Some(c) => {
                let d = declared_character(c, level)?;
                if d != computed {
                    return Err(Error::InvalidCharacter(format!(
                        "declared character disagrees with the eta character for {name}"
                    )));
                }
                d
            }
            None => computed,
        };
        let f = FormContext::new(name, w.to_integer() as u32, level, chi, series)?;
        Ok(LoadedForm::Integral(f))
    } else {
        if level % 4 != 0 {
            return Err(Error::InvalidArgument(format!(
                "half-integral weight needs 4 | level (got {level})"
            )));
        }
        let k = ((w - Offset::new(1, 2)).to_integer()) as u32;
        let den = (*offset.denom()) as u64;
        let shift = offset.to_integer().max(0) as u64;
        // The offset may be fractional; only integral offsets place on `q^n`.
        if den != 1 {
            return Err(Error::NonIntegralOffset(offset.to_string()));
        }
        let terms = (precision + 1).saturating_sub(shift).max(1);
        let series = eta_quotient(&spec, terms)?.normalize_integral()?;
        let chi = match character {
            Some(c) => declared_character(c, level)?,
            None => DirichletCharacter::principal(level),
        };
        Ok(LoadedForm::HalfIntegral(HalfIntegralSeries {
            name: name.into(),
            k,
            level,
            character: chi,
            series,
        }))
    }
}

/// Nebentypus of `Σ ψ(n) n^ν q^{t n²}`: `ψ·(−4/·)^ν·(4t/·)` at level `4 r² t`,
/// `r` the modulus of `ψ`.
pub fn theta_character(psi: &DirichletCharacter, nu: u32, t: u64) -> Result<(u64, DirichletCharacter)> {
    let r = psi.modulus();
    let level = 4 * r * r * t;
    let mut chi = psi.lift(level)?;
    if nu == 1 {
        chi = chi.mul(&DirichletCharacter::kronecker_character(-4)?.lift(level)?);
    }
    chi = chi.mul(&DirichletCharacter::kronecker_character(4 * t as i64)?.lift(level)?);
    Ok((level, chi.lift(level)?))
}

/// Materialize a spec with coefficients through index `precision`.
pub fn load_form(name: &str, spec: &FormSpec, precision: u64) -> Result<LoadedForm> {
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    match spec {
        FormSpec::EtaQuotient {
            factors,
            weight,
            level,
            character,
        } => load_eta(name, factors, *weight, *level, character.as_ref(), precision),
        FormSpec::UnaryTheta { psi, nu, t } => {
            let psi = DirichletCharacter::from_spec(psi)?;
            let series = unary_theta(&psi, *nu, *t, precision + 1)?;
            let (level, character) = theta_character(&psi, *nu, *t)?;
            Ok(LoadedForm::HalfIntegral(HalfIntegralSeries {
                name: name.into(),
                k: *nu,
                level,
                character,
                series,
            }))
        }
        FormSpec::SyntheticEigen {
            k,
            level,
            character,
            t,
            a_t,
            seed,
        } => {
            if *a_t == 0 {
                return Err(Error::InvalidArgument("a(t) must be nonzero".into()));
            }
            let chi = match character {
                Some(c) => declared_character(c, *level)?,
                None => DirichletCharacter::principal(*level),
            };
            let eigen = SyntheticEigen::random(
                *seed,
                *k,
                *level,
                chi,
                *t,
                CycNumber::from(*a_t),
                precision,
            );
            let context = eigen.context(precision as usize)?;
            Ok(LoadedForm::Synthetic { eigen, context })
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: FormSpec,
    pub newform: bool,
    pub eigenform: bool,
    /// Parity of the nebentypus order `r_χ`.
    pub chi_order_odd: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CatalogEntry {
    pub fn load(&self, precision: u64) -> Result<LoadedForm> {
        load_form(self.name, &self.spec, precision)
    }

    /// Declared facts plus `T(p)f = a(p)f` for `p ≤ 13`, `p ∤ N`.
    pub fn self_check(&self, form: &LoadedForm) -> Vec<SelfCheck> {
        let mut out = Vec::new();
        let mut push = |name: String, passed: bool, detail: String| {
            out.push(SelfCheck { name, passed, detail })
        };
        push(
            format!("{}:chi-order-parity", self.name),
            form.character().order_is_odd() == self.chi_order_odd,
            format!("r_chi = {}", form.character().order()),
        );
        match form {
            LoadedForm::Integral(f) => {
                if self.newform {
                    push(
                        format!("{}:a1", self.name),
                        f.normalized,
                        "a(1) = 1".into(),
                    );
                }
                if self.eigenform {
                    for p in arith::primes_below(14) {
                        if f.level % p == 0 || p >= f.precision() {
                            continue;
                        }
                        let res = f.a(p).cloned().and_then(|ap| {
                            let tf = apply_tj(f, p, 1)?;
                            Ok(tf.agrees_with(&f.coeffs().scale(&ap)))
                        });
                        let (passed, detail) = match res {
                            Ok(ok) => (ok, format!("T({p})f = a({p})f")),
                            Err(e) => (false, e.to_string()),
                        };
                        push(format!("{}:T{p}", self.name), passed, detail);
                    }
                }
            }
            LoadedForm::HalfIntegral(h) => {
                let res = h.context(1);
                push(
                    format!("{}:context", self.name),
                    res.is_ok(),
                    res.err().map_or("t = 1 view builds".into(), |e| e.to_string()),
                );
            }
            LoadedForm::Synthetic { eigen, context } => {
                for p in arith::primes_below(14) {
                    if eigen.level % p == 0 {
                        continue;
                    }
                    let depth = arith::ilog(p, context.b.len() as u64) as usize + 1;
                    let b_pp: Vec<CycNumber> = (0..depth)
                        .map(|e| context.b[p.pow(e as u32) as usize - 1].clone())
                        .collect();
                    let res = context.chi_tn().map(|chi_t| {
                        eigen_transfer_check(
                            &b_pp,
                            &eigen.lambdas[&p],
                            &eigen.character,
                            &chi_t.evaluate(p as i64),
                            eigen.k,
                            p,
                        )
                        .passed
                    });
                    push(
                        format!("{}:transfer{p}", self.name),
                        res == Ok(true),
                        format!("{res:?}"),
                    );
                }
            }
        }
        out
    }
}

fn eta_entry(name: &'static str, description: &'static str, factors: &[(u64, i64)], chi_order_odd: bool) -> CatalogEntry {
    CatalogEntry {
        name,
        description,
        spec: FormSpec::eta(factors),
        newform: true,
        eigenform: true,
        chi_order_odd,
    }
}

pub fn builtin() -> Vec<CatalogEntry> {
    let m4 = CharacterSpec::Kronecker { kronecker: -4 };
    vec![
        eta_entry("delta", "η(z)^24, weight 12, level 1", &[(1, 24)], true),
        eta_entry("eta11", "η(z)²η(11z)², weight 2, level 11", &[(1, 2), (11, 2)], true),
        eta_entry("eta4_6", "η(4z)^6, weight 3, level 16, (−4/·)", &[(4, 6)], false),
        eta_entry("eta2_12", "η(2z)^12, weight 6, level 4", &[(2, 12)], true),
        eta_entry("eta3_6", "η(z)^6η(3z)^6, weight 6, level 3", &[(1, 6), (3, 6)], true),
        eta_entry("eta5_4", "η(z)^4η(5z)^4, weight 4, level 5", &[(1, 4), (5, 4)], true),
        eta_entry("eta2_8", "η(z)^8η(2z)^8, weight 8, level 2", &[(1, 8), (2, 8)], true),
        eta_entry("eta14", "η(z)η(2z)η(7z)η(14z), weight 2, level 14", &[(1, 1), (2, 1), (7, 1), (14, 1)], true),
        eta_entry("eta15", "η(z)η(3z)η(5z)η(15z), weight 2, level 15", &[(1, 1), (3, 1), (5, 1), (15, 1)], true),
        eta_entry("eta20", "η(2z)²η(10z)², weight 2, level 20", &[(2, 2), (10, 2)], true),
        eta_entry("eta24", "η(2z)η(4z)η(6z)η(12z), weight 2, level 24", &[(2, 1), (4, 1), (6, 1), (12, 1)], true),
        eta_entry("eta27", "η(3z)²η(9z)², weight 2, level 27", &[(3, 2), (9, 2)], true),
        eta_entry("eta32", "η(4z)²η(8z)², weight 2, level 32", &[(4, 2), (8, 2)], true),
        eta_entry("eta36", "η(6z)^4, weight 2, level 36", &[(6, 4)], true),
        CatalogEntry {
            name: "eta8_3",
            description: "η(8z)^3, weight 3/2, level 64",
            spec: FormSpec::eta(&[(8, 3)]),
            newform: false,
            eigenform: false,
            chi_order_odd: true,
        },
        CatalogEntry {
            name: "theta_m4",
            description: "Σ (−4/n) n q^{n²}, weight 3/2, level 64",
            spec: FormSpec::UnaryTheta { psi: m4, nu: 1, t: 1 },
            newform: false,
            eigenform: false,
            chi_order_odd: true,
        },
        CatalogEntry {
            name: "theta",
            description: "Σ_{n≥1} q^{n²}, weight 1/2, level 4",
            spec: FormSpec::UnaryTheta {
                psi: CharacterSpec::Kronecker { kronecker: 1 },
                nu: 0,
                t: 1,
            },
            newform: false,
            eigenform: false,
            chi_order_odd: true,
        },
        CatalogEntry {
            name: "synth6",
            description: "synthetic eigen-data, weight 13/2, level 4, t = 1",
            spec: FormSpec::SyntheticEigen {
                k: 6,
                level: 4,
                character: None,
                t: 1,
                a_t: 1,
                seed: 1,
            },
            newform: false,
            eigenform: true,
            chi_order_odd: true,
        },
    ]
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    builtin()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownForm(name.into()))
}

/// Load a built-in form and run its self-checks; any failing check is an error.
pub fn load_builtin(name: &str, precision: u64) -> Result<LoadedForm> {
    let e = entry(name)?;
    let form = e.load(precision)?;
    if let Some(bad) = e.self_check(&form).into_iter().find(|c| !c.passed) {
        return Err(Error::NotEigenform {
            p: 0,
            detail: format!("self-check {} failed: {}", bad.name, bad.detail),
        });
    }
    Ok(form)
}

/// A catalog name, an inline JSON spec, or `@path` to a JSON file.
pub fn resolve(arg: &str, precision: u64) -> Result<LoadedForm> {
    let trimmed = arg.trim();
    if let Some(path) = trimmed.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        return load_form(path, &FormSpec::from_json(&text)?, precision);
    }
    if trimmed.starts_with('{') {
        return load_form("custom", &FormSpec::from_json(trimmed)?, precision);
    }
    load_builtin(trimmed, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eta::coeff_i64;

    #[test]
    fn every_builtin_passes_self_check() {
        for e in builtin() {
            let form = e.load(300).unwrap();
            for c in e.self_check(&form) {
                assert!(c.passed, "{}: {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn delta_facts() {
        let f = load_builtin("delta", 50).unwrap();
        let f = f.integral().unwrap();
        assert_eq!((f.weight, f.level), (12, 1));
        assert!(f.character.is_principal());
        assert_eq!(coeff_i64(f.coeffs(), 1), Some(1));
        assert_eq!(coeff_i64(f.coeffs(), 2), Some(-24));
        assert!(f.a(50).is_ok());
        assert!(f.a(51).is_err());
    }

    #[test]
    fn eta11_and_eta4_6() {
        let f = load_builtin("eta11", 20).unwrap();
        let f = f.integral().unwrap();
        assert_eq!((f.weight, f.level), (2, 11));
        let g = load_builtin("eta4_6", 20).unwrap();
        let g = g.integral().unwrap();
        assert_eq!((g.weight, g.level), (3, 16));
        let m4 = DirichletCharacter::kronecker_character(-4).unwrap().lift(16).unwrap();
        assert_eq!(g.character, m4);
    }

    #[test]
    fn levels_of_weight_two_entries() {
        for (name, level) in [("eta14", 14), ("eta15", 15), ("eta20", 20), ("eta24", 24), ("eta27", 27), ("eta32", 32), ("eta36", 36)] {
            assert_eq!(load_builtin(name, 10).unwrap().level(), level, "{name}");
        }
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"type":"eta_quotient","factors":[[1,2],[11,2]]}"#;
        let spec = FormSpec::from_json(s).unwrap();
        assert_eq!(spec, FormSpec::eta(&[(1, 2), (11, 2)]));
        let back = serde_json::to_string(&spec).unwrap();
        assert_eq!(FormSpec::from_json(&back).unwrap(), spec);
        let th = FormSpec::from_json(r#"{"type":"unary_theta","psi":{"kronecker":-4},"nu":1,"t":1}"#).unwrap();
        assert!(matches!(th, FormSpec::UnaryTheta { nu: 1, t: 1, .. }));
        assert!(FormSpec::from_json(r#"{"type":"modular_symbols"}"#).is_err());
    }

    #[test]
    fn declared_facts_are_cross_checked() {
        let bad_weight = FormSpec::EtaQuotient {
            factors: vec![(1, 24)],
            weight: Some(10.0),
            level: None,
            character: None,
        };
        assert!(load_form("x", &bad_weight, 10).is_err());
        let bad_char = FormSpec::EtaQuotient {
            factors: vec![(4, 6)],
            weight: None,
            level: None,
            character: Some(CharacterSpec::Kronecker { kronecker: 1 }),
        };
        assert!(load_form("x", &bad_char, 10).is_err());
        // η(z)^2: weight 1 but offset 1/12.
        assert!(matches!(
            load_form("x", &FormSpec::eta(&[(1, 2)]), 10),
            Err(Error::NonIntegralOffset(_))
        ));
    }

    #[test]
    fn half_integral_exhibits_agree() {
        let a = load_builtin("eta8_3", 400).unwrap();
        let b = load_builtin("theta_m4", 400).unwrap();
        let (LoadedForm::HalfIntegral(a), LoadedForm::HalfIntegral(b)) = (&a, &b) else {
            panic!("expected half-integral forms");
        };
        assert_eq!((a.k, a.level), (1, 64));
        assert_eq!((b.k, b.level), (1, 64));
        assert_eq!(a.character, b.character);
        assert!(a.series.agrees_with(&b.series));
        let ctx = a.context(1).unwrap();
        assert_eq!(ctx.b.len(), 20);
        assert_eq!(ctx.b(3).unwrap(), &CycNumber::from(-3));
        assert_eq!(ctx.nonzero_witness(), Some(1));
    }

    #[test]
    fn rows_are_prefix_stable() {
        let small = load_builtin("delta", 30).unwrap().rows(30).unwrap();
        let big = load_builtin("delta", 80).unwrap().rows(80).unwrap();
        assert_eq!(&big[..30], &small[..]);
        assert!(load_builtin("delta", 30).unwrap().rows(31).is_err());
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(resolve("nope", 10), Err(Error::UnknownForm(_))));
    }
}
