//! Flat CSV formats: embedded `n,re,im`, exact `n,order,c0;c1;…` and scan reports.

use num_complex::Complex64;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::wedge::ScanReport;

/// Shortest round-trip decimal, with `-0` printed as `0`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

pub fn embedded_csv(rows: &[(u64, CycNumber)]) -> String {
    let mut out = String::new();
    for (n, c) in rows {
        let z = c.embed();
        out.push_str(&format!("{n},{},{}\n", fmt_real(z.re), fmt_real(z.im)));
    }
    out
}

pub fn complex_csv(rows: &[(u64, Complex64)]) -> String {
    let mut out = String::new();
    for (n, z) in rows {
        out.push_str(&format!("{n},{},{}\n", fmt_real(z.re), fmt_real(z.im)));
    }
    out
}

/// Exact rows; values are reduced modulo the cyclotomic polynomial first.
pub fn exact_csv(rows: &[(u64, CycNumber)]) -> String {
    let mut out = String::new();
    for (n, c) in rows {
        let r = c.reduced();
        out.push_str(&format!("{n},{},{}\n", r.order(), r.to_exact_string()));
    }
    out
}

pub fn parse_exact_csv(text: &str) -> Result<Vec<(u64, CycNumber)>> {
    data_lines(text)
        .map(|(i, line)| {
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            let [n, order, vector] = parts[..] else {
                return Err(Error::Parse(format!("line {i}: expected n,order,vector")));
            };
            let n = parse_field::<u64>(n, i)?;
            let order = parse_field::<u32>(order, i)?;
            Ok((n, CycNumber::from_exact_parts(order, vector)?))
        })
        .collect()
}

/// `n,re,im` rows; blank lines, `#` comments and a non-numeric header are skipped.
pub fn parse_embedded_csv(text: &str) -> Result<Vec<(u64, Complex64)>> {
    data_lines(text)
        .map(|(i, line)| {
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            let [n, re, im] = parts[..] else {
                return Err(Error::Parse(format!("line {i}: expected n,re,im")));
            };
            Ok((
                parse_field(n, i)?,
                Complex64::new(parse_field(re, i)?, parse_field(im, i)?),
            ))
        })
        .collect()
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .filter(|(i, l)| !(*i == 1 && l.starts_with(|c: char| c.is_ascii_alphabetic())))
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("line {line}: cannot parse '{s}'")))
}

/// One row per event: `escape,n,n`, `re_change,m,n` or `im_change,m,n`.
pub fn scan_report_csv(r: &ScanReport) -> String {
    let mut out = String::new();
    for n in &r.escapes {
        out.push_str(&format!("escape,{n},{n}\n"));
    }
    for (m, n) in &r.re_sign_changes {
        out.push_str(&format!("re_change,{m},{n}\n"));
    }
    for (m, n) in &r.im_sign_changes {
        out.push_str(&format!("im_change,{m},{n}\n"));
    }
    out
}
