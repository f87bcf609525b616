use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use wedgelab::catalog::{self, LoadedForm};
use wedgelab::dirichlet::{abscissa_estimate, l_chi, verify_eq9, Abscissa, DirichletSeriesView};
use wedgelab::export;
use wedgelab::hecke::{
    degeneracy_scan, euler_roots, pj_power_series_recurrence, power_sum_lambda, tj_eigenvalue,
    EigenStatus,
};
use wedgelab::shimura::{eigen_transfer_check_ctx, lift};
use wedgelab::suite::{run_suite, SuiteOptions};
use wedgelab::wedge::{scan_parallel, Wedge};
use wedgelab::{arith, CycNumber, Error};

#[derive(Parser)]
#[command(name = "wedgelab", version, about = "Exact q-expansions, Hecke identities and wedge scans")]
struct Cli {
    /// Number of coefficients (or sequence terms) to work with.
    #[arg(long, global = true, env = "WEDGELAB_PREC", default_value_t = 1000)]
    prec: u64,
    #[arg(long, global = true, value_enum)]
    out: Option<OutFormat>,
    /// Relative tolerance for numeric checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients of a form.
    Expand {
        #[command(flatten)]
        form: FormArg,
        /// Exact cyclotomic rows `n,order,c0;c1;…` instead of embeddings.
        #[arg(long)]
        exact: bool,
    },
    /// Prime-power Hecke data: eigenvalue, Euler roots, degeneracies and a(p^{jn}).
    Hecke {
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// Length of the a(p^{jn}) subsequence.
        #[arg(long, default_value_t = 20)]
        terms: u32,
        #[arg(long)]
        exact: bool,
    },
    /// Lift b(n) = a(t n²) to weight 2k.
    Shimura {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, default_value_t = 1)]
        t: u64,
        /// Which sequence the CSV output lists.
        #[arg(long, value_enum, default_value_t = SeqChoice::A)]
        seq: SeqChoice,
        /// Also check the truncated L-series identity at this real s.
        #[arg(long)]
        s: Option<f64>,
    },
    /// Wedge escapes and sign changes along a sequence.
    Scan {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        form: Option<String>,
        /// CSV file of `n,re,im` rows.
        #[arg(long)]
        input: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Subseq::All)]
        subseq: Subseq,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -std::f64::consts::FRAC_PI_4)]
        theta1: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::FRAC_PI_4)]
        theta2: f64,
        /// Treat 0 as outside every wedge.
        #[arg(long)]
        strict_wedge: bool,
    },
    /// Abscissa ladder for the Dirichlet series of a form.
    Analyze {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, value_enum, default_value_t = Which::Convergence)]
        which: Which,
        /// Divide a(n) by n^((k-1)/2) first.
        #[arg(long)]
        normalize: bool,
        /// Also sum L(s, χ) for the form's character.
        #[arg(long)]
        lchi_s: Option<f64>,
    },
    /// Run an invariant suite: hecke, shimura, wedge, dirichlet or all.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = SuiteOptions::default().seed)]
        seed: u64,
    },
    /// List the built-in forms.
    Catalog,
}

#[derive(Args)]
struct FormArg {
    /// Catalog name, inline JSON spec, or @file.json.
    #[arg(long)]
    form: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeqChoice {
    A,
    B,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subseq {
    All,
    PPower,
    TSquare,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Convergence,
    Absolute,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownForm(_) | Error::UnknownSuite(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if cli.prec == 0 {
        return Err(Failure::Usage("--prec must be positive".into()));
    }
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    match &cli.cmd {
        Command::Expand { form, exact } => expand(cli, &form.form, *exact),
        Command::Hecke { form, p, j, terms, exact } => hecke(cli, &form.form, *p, *j, *terms, *exact),
        Command::Shimura { form, t, seq, s } => shimura(cli, &form.form, *t, *seq, *s),
        Command::Scan {
            form,
            input,
            subseq,
            p,
            j,
            t,
            theta1,
            theta2,
            strict_wedge,
        } => {
            let seq = match (form, input) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    export::parse_embedded_csv(&text)?
                }
                (Some(f), None) => scan_sequence(cli, f, *subseq, *p, *j, *t)?,
                (None, None) => return Err(Failure::Usage("--form or --input is required".into())),
            };
            let w = Wedge::new(*theta1, *theta2)?.strict(*strict_wedge);
            let r = scan_parallel(&seq, &w, 4096);
            let text = match cli.out {
                Some(OutFormat::Csv) => export::scan_report_csv(&r),
                _ => pretty(&json!({
                    "theta1": w.theta1(),
                    "theta2": w.theta2(),
                    "strict": *strict_wedge,
                    "summary": r.summary(),
                    "escapes": r.escapes,
                    "re_sign_changes": r.re_sign_changes,
                    "im_sign_changes": r.im_sign_changes,
                })),
            };
            Ok((text, true))
        }
        Command::Analyze { form, which, normalize, lchi_s } => analyze(cli, &form.form, *which, *normalize, *lchi_s),
        Command::Verify { suite, seed } => {
            let opts = SuiteOptions { tol: cli.tol, seed: *seed };
            let r = run_suite(suite, &opts)?;
            let text = match cli.out {
                Some(OutFormat::Json) => pretty(&serde_json::to_value(&r).expect("report serializes")),
                _ => r.human(),
            };
            Ok((text, r.passed()))
        }
        Command::Catalog => catalog_list(cli),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn cyc_json(c: &CycNumber) -> Value {
    let z = c.embed();
    let r = c.reduced();
    json!({
        "re": z.re,
        "im": z.im,
        "exact": format!("{}:{}", r.order(), r.to_exact_string()),
    })
}

fn rows_json(rows: &[(u64, CycNumber)]) -> Value {
    Value::Array(
        rows.iter()
            .map(|(n, c)| {
                let mut v = cyc_json(c);
                v["n"] = json!(n);
                v
            })
            .collect(),
    )
}

fn form_header(f: &LoadedForm) -> Value {
    let tw = f.twice_weight();
    json!({
        "name": f.name(),
        "weight": if tw.is_multiple_of(2) { json!(tw / 2) } else { json!(format!("{tw}/2")) },
        "level": f.level(),
        "character": f.character(),
        "chi_order": f.character().order(),
    })
}

fn expand(cli: &Cli, form: &str, exact: bool) -> Outcome {
    let f = catalog::resolve(form, cli.prec)?;
    let rows = f.rows(cli.prec)?;
    let text = match cli.out {
        Some(OutFormat::Json) => {
            let mut h = form_header(&f);
            h["coefficients"] = rows_json(&rows);
            pretty(&h)
        }
        _ if exact => export::exact_csv(&rows),
        _ => export::embedded_csv(&rows),
    };
    Ok((text, true))
}

/// Enough coefficients to read a(1), a(p) and cross-check a few p-powers.
fn recurrence_precision(cli: &Cli, p: u64) -> u64 {
    cli.prec.min(p.saturating_mul(p).max(p + 1).max(64))
}

fn hecke(cli: &Cli, form: &str, p: u64, j: u32, terms: u32, exact: bool) -> Outcome {
    if !arith::is_prime(p) {
        return Err(Failure::Usage(format!("--p {p} is not prime")));
    }
    if j == 0 || terms == 0 {
        return Err(Failure::Usage("--j and --terms must be positive".into()));
    }
    let loaded = catalog::resolve(form, recurrence_precision(cli, p).max(cli.prec.min(4096)))?;
    let f = loaded.integral()?;
    let seq = pj_power_series_recurrence(f, p, j, terms)?;
    let rows: Vec<(u64, CycNumber)> = seq.into_iter().enumerate().map(|(n, c)| (n as u64, c)).collect();
    if cli.out != Some(OutFormat::Json) {
        return Ok((if exact { export::exact_csv(&rows) } else { export::embedded_csv(&rows) }, true));
    }
    let chi_p = f.character.evaluate(p as i64);
    let ef = euler_roots(f.a(p)?, f.weight, &chi_p, p);
    let eigen = match p.checked_pow(j).filter(|&q| q < f.precision()) {
        Some(_) => match tj_eigenvalue(f, p, j)? {
            EigenStatus::Eigen { lambda } => json!({"status": "eigen", "lambda": cyc_json(&lambda)}),
            EigenStatus::NotEigen { lambda, index } => {
                json!({"status": "not_eigen", "lambda": cyc_json(&lambda), "first_mismatch": index})
            }
        },
        None => json!({"status": "unavailable", "detail": format!("p^j exceeds precision {}", f.precision())}),
    };
    let deg = degeneracy_scan(&ef, j, cli.tol);
    let mut v = form_header(&loaded);
    v["p"] = json!(p);
    v["j"] = json!(j);
    v["eigen"] = eigen;
    v["power_sum_lambda"] = cyc_json(&power_sum_lambda(f.a(p)?, &f.norm(p), j));
    v["euler"] = json!({
        "alpha_normalized": [ef.alpha_normalized.re, ef.alpha_normalized.im],
        "beta_normalized": ef.beta_normalized.map(|b| [b.re, b.im]),
        "modulus_deviation": ef.modulus_deviation(),
        "degenerate": ef.is_degenerate(),
    });
    v["degeneracy"] = serde_json::to_value(&deg).expect("report serializes");
    v["subsequence"] = rows_json(&rows);
    Ok((pretty(&v), true))
}

fn shimura(cli: &Cli, form: &str, t: u64, seq: SeqChoice, s: Option<f64>) -> Outcome {
    let loaded = catalog::resolve(form, cli.prec)?;
    let ctx = loaded.half_context(t)?;
    let terms = ctx.b.len();
    if terms == 0 {
        return Err(Failure::Compute(format!("precision {} leaves no b(n) for t = {t}", cli.prec)));
    }
    let l = lift(&ctx, terms)?;
    let idx = |v: &[CycNumber]| -> Vec<(u64, CycNumber)> {
        v.iter().enumerate().map(|(i, c)| (i as u64 + 1, c.clone())).collect()
    };
    if cli.out != Some(OutFormat::Json) {
        let rows = match seq {
            SeqChoice::A => idx(&l.a),
            SeqChoice::B => idx(&ctx.b),
        };
        return Ok((export::embedded_csv(&rows), true));
    }
    let mut v = json!({
        "t": ctx.t,
        "k": ctx.k,
        "level": ctx.level,
        "character": ctx.character,
        "chi_tn": l.chi_tn,
        "provenance": ctx.provenance,
        "nonzero_witness": ctx.nonzero_witness(),
        "b": rows_json(&idx(&ctx.b)),
        "A": rows_json(&idx(&l.a)),
    });
    let mut ok = true;
    if let LoadedForm::Synthetic { eigen, .. } = &loaded {
        let mut reports = Vec::new();
        for (&p, lam) in eigen.lambdas.range(..=13) {
            if ctx.level % p == 0 || p as usize > terms {
                continue;
            }
            let r = eigen_transfer_check_ctx(&ctx, &l, p, lam)?;
            ok &= r.passed;
            reports.push(json!({"p": p, "passed": r.passed, "modulus_deviation": r.modulus_deviation}));
        }
        v["transfer"] = Value::Array(reports);
    }
    if let Some(s) = s {
        let r = verify_eq9(&ctx, &l, s, terms)?;
        ok &= r.passed;
        v["eq9"] = serde_json::to_value(&r).expect("report serializes");
    }
    Ok((pretty(&v), ok))
}

fn scan_sequence(cli: &Cli, form: &str, subseq: Subseq, p: Option<u64>, j: u32, t: u64) -> Result<Vec<(u64, Complex64)>, Failure> {
    let embed = |rows: Vec<(u64, CycNumber)>| rows.into_iter().map(|(n, c)| (n, c.embed())).collect();
    match subseq {
        Subseq::All => Ok(embed(catalog::resolve(form, cli.prec)?.rows(cli.prec)?)),
        Subseq::PPower => {
            let p = p.ok_or_else(|| Failure::Usage("--subseq p-power needs --p".into()))?;
            if !arith::is_prime(p) || j == 0 {
                return Err(Failure::Usage("--p must be prime and --j positive".into()));
            }
            let loaded = catalog::resolve(form, recurrence_precision(cli, p))?;
            let f = loaded.integral()?;
            // a(p^{jn}) for p^{jn} ≤ prec, read off the recurrence.
            let count = arith::ilog(p, cli.prec) / j;
            let seq = pj_power_series_recurrence(f, p, j, count + 1)?;
            Ok(seq.into_iter().enumerate().skip(1).map(|(n, c)| (n as u64, c.embed())).collect())
        }
        Subseq::TSquare => {
            let loaded = catalog::resolve(form, cli.prec)?;
            match &loaded {
                LoadedForm::Integral(f) => {
                    let mut out = Vec::new();
                    let mut n = 1u64;
                    while t * n * n <= cli.prec {
                        out.push((n, f.a(t * n * n)?.embed()));
                        n += 1;
                    }
                    Ok(out)
                }
                _ => {
                    let ctx = loaded.half_context(t)?;
                    Ok(ctx.b.iter().enumerate().map(|(i, c)| (i as u64 + 1, c.embed())).collect())
                }
            }
        }
    }
}

fn analyze(cli: &Cli, form: &str, which: Which, normalize: bool, lchi_s: Option<f64>) -> Outcome {
    let loaded = catalog::resolve(form, cli.prec)?;
    let rows = loaded.rows(cli.prec)?;
    let half = loaded.twice_weight() as f64 / 2.0;
    let view = DirichletSeriesView::from_fn(rows.len(), |n| {
        let z = rows[n as usize - 1].1.embed();
        if normalize {
            z / (n as f64).powf((half - 1.0) / 2.0)
        } else {
            z
        }
    });
    let which = match which {
        Which::Convergence => Abscissa::Convergence,
        Which::Absolute => Abscissa::Absolute,
    };
    let r = abscissa_estimate(&view, which, rows.len())?;
    let mut v = form_header(&loaded);
    v["abscissa"] = serde_json::to_value(&r).expect("report serializes");
    if let Some(s) = lchi_s {
        let l = l_chi(loaded.character(), s, cli.prec as usize)?;
        v["l_chi"] = json!({"s": s, "re": l.value.re, "im": l.value.im, "tail_bound": l.tail_bound});
    }
    Ok((pretty(&v), true))
}

fn catalog_list(cli: &Cli) -> Outcome {
    let entries = catalog::builtin();
    if cli.out == Some(OutFormat::Json) {
        let list: Vec<Value> = entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "description": e.description,
                    "spec": e.spec,
                    "newform": e.newform,
                    "eigenform": e.eigenform,
                    "chi_order_odd": e.chi_order_odd,
                })
            })
            .collect();
        return Ok((pretty(&Value::Array(list)), true));
    }
    let mut s = String::new();
    for e in entries {
        s.push_str(&format!("{},\"{}\"\n", e.name, e.description.replace('"', "\"\"")));
    }
    Ok((s, true))
}
