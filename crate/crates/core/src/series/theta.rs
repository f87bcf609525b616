//! Unary theta series `Σ_{n≥1} ψ(n) n^ν q^{t n²}`.
//!
//! For `ν = 0` the sum starts at `n = 1`; the usual weight-1/2 constant
//! term is not modelled.

use num_bigint::BigInt;

use super::qseries::{Offset, QSeries};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

pub fn unary_theta(psi: &DirichletCharacter, nu: u32, t: u64, precision: u64) -> Result<QSeries> {
    if nu > 1 {
        return Err(Error::InvalidThetaNu(nu));
    }
    if t == 0 {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    let mut terms = Vec::new();
    let mut n: u64 = 1;
    while let Some(e) = n.checked_mul(n).and_then(|sq| sq.checked_mul(t)) {
        if e >= precision {
            break;
        }
        let c = psi.evaluate(n as i64);
        if !c.is_zero() {
            let c = if nu == 1 { c.scale_int(&BigInt::from(n)) } else { c };
            terms.push((e, c));
        }
        n += 1;
    }
    Ok(QSeries::from_coeffs(Offset::from_integer(0), precision, terms))
}
