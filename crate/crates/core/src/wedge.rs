//! Wedges `W(θ₁, θ₂) = {r e^{iθ} : r ≥ 0, θ ∈ [θ₁, θ₂]}` and escape /
//! sign-change scans over complex sequences.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angular tolerance at the wedge boundary.
pub const ANGLE_TOL: f64 = 1e-12;
/// A part counts as zero when below this multiple of `|z|`.
pub const ZERO_REL: f64 = 1e-12;

/// Angle reduced to `(−π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wedge {
    theta1: f64,
    width: f64,
    /// Treat `z = 0` as outside.
    pub strict: bool,
}

impl Wedge {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        let width = theta2 - theta1;
        if !(theta1.is_finite() && theta2.is_finite()) || !(0.0..PI).contains(&width) {
            return Err(Error::InvalidArgument(format!(
                "wedge needs 0 ≤ θ₂ − θ₁ < π, got θ₁ = {theta1}, θ₂ = {theta2}"
            )));
        }
        Ok(Wedge {
            theta1: normalize_angle(theta1),
            width,
            strict: false,
        })
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        normalize_angle(self.theta1 + self.width)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if z.re == 0.0 && z.im == 0.0 {
            return !self.strict;
        }
        let d = (z.arg() - self.theta1).rem_euclid(2.0 * PI);
        d <= self.width + ANGLE_TOL || d >= 2.0 * PI - ANGLE_TOL
    }

    /// The wedge turned by `psi`.
    pub fn rotate(&self, psi: f64) -> Self {
        Wedge {
            theta1: normalize_angle(self.theta1 + psi),
            ..*self
        }
    }

    /// Half-opening `φ`, `γ = cos φ` and the turn `ψ` that centres the wedge
    /// on the positive real axis, so `Re(e^{iψ} z) ≥ γ|z|` on the wedge.
    pub fn normalize_rotation(&self) -> Rotation {
        let phi = self.width / 2.0;
        Rotation {
            phi,
            gamma: phi.cos(),
            psi: normalize_angle(-(self.theta1 + phi)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rotation {
    pub phi: f64,
    pub gamma: f64,
    pub psi: f64,
}

fn sign_of(part: f64, z: Complex64) -> i8 {
    if part.abs() <= ZERO_REL * z.norm() {
        0
    } else if part > 0.0 {
        1
    } else {
        -1
    }
}

/// Last and first nonzero signs of a part, for merging across a junction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Edge {
    pub first: Option<(u64, i8)>,
    pub last: Option<(u64, i8)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScanReport {
    pub scanned: Vec<u64>,
    pub escapes: Vec<u64>,
    /// Pairs `(m, n)` of consecutive nonzero real parts with opposite signs.
    pub re_sign_changes: Vec<(u64, u64)>,
    pub im_sign_changes: Vec<(u64, u64)>,
    #[serde(skip)]
    re_edge: Edge,
    #[serde(skip)]
    im_edge: Edge,
}

impl ScanReport {
    pub fn escape_count(&self) -> usize {
        self.escapes.len()
    }

    pub fn first_escape(&self) -> Option<u64> {
        self.escapes.first().copied()
    }

    pub fn re_change_count(&self) -> usize {
        self.re_sign_changes.len()
    }

    pub fn im_change_count(&self) -> usize {
        self.im_sign_changes.len()
    }

    /// Report of the concatenation `self ++ other`; the junction pair is
    /// examined here and nowhere else.
    pub fn merge(mut self, other: ScanReport) -> ScanReport {
        fn join(a: Edge, b: Edge, out: &mut Vec<(u64, u64)>, tail: Vec<(u64, u64)>) -> Edge {
            if let (Some((i, s)), Some((j, t))) = (a.last, b.first) {
                if s != t {
                    out.push((i, j));
                }
            }
            out.extend(tail);
            Edge {
                first: a.first.or(b.first),
                last: b.last.or(a.last),
            }
        }
        self.scanned.extend(other.scanned);
        self.escapes.extend(other.escapes);
        self.re_edge = join(self.re_edge, other.re_edge, &mut self.re_sign_changes, other.re_sign_changes);
        self.im_edge = join(self.im_edge, other.im_edge, &mut self.im_sign_changes, other.im_sign_changes);
        self
    }

    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "scanned": self.scanned.len(),
            "escapes": self.escapes.len(),
            "first_escape": self.first_escape(),
            "re_sign_changes": self.re_sign_changes.len(),
            "im_sign_changes": self.im_sign_changes.len(),
        })
    }
}

fn track(edge: &mut Edge, changes: &mut Vec<(u64, u64)>, n: u64, s: i8) {
    if s == 0 {
        return;
    }
    if let Some((m, prev)) = edge.last {
        if prev != s {
            changes.push((m, n));
        }
    }
    if edge.first.is_none() {
        edge.first = Some((n, s));
    }
    edge.last = Some((n, s));
}

/// Escapes from `w` and sign changes of both parts along `seq`.
pub fn scan(seq: &[(u64, Complex64)], w: &Wedge) -> ScanReport {
    let mut r = ScanReport::default();
    for &(n, z) in seq {
        r.scanned.push(n);
        if !w.contains(z) {
            r.escapes.push(n);
        }
        track(&mut r.re_edge, &mut r.re_sign_changes, n, sign_of(z.re, z));
        track(&mut r.im_edge, &mut r.im_sign_changes, n, sign_of(z.im, z));
    }
    r
}

/// [`scan`] over chunks in parallel, merged in order.
pub fn scan_parallel(seq: &[(u64, Complex64)], w: &Wedge, chunk: usize) -> ScanReport {
    seq.par_chunks(chunk.max(1))
        .map(|part| scan(part, w))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(ScanReport::default(), ScanReport::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn indexed(v: &[Complex64]) -> Vec<(u64, Complex64)> {
        v.iter().enumerate().map(|(i, &z)| (i as u64 + 1, z)).collect()
    }

    #[test]
    fn membership_examples() {
        let w = Wedge::new(-PI / 4.0, PI / 4.0).unwrap();
        assert!(w.contains(c(1.0, 0.0)));
        assert!(w.contains(Complex64::from_polar(1.0, PI / 4.0)));
        assert!(!w.contains(c(-1.0, 0.0)));
        let ray = Wedge::new(0.0, 0.0).unwrap();
        assert!(ray.contains(c(5.0, 0.0)));
        assert!(!ray.contains(c(-5.0, 0.0)));
        assert!(ray.contains(c(0.0, 0.0)));
        assert!(!ray.strict(true).contains(c(0.0, 0.0)));
        assert!(Wedge::new(0.0, PI).is_err());
        assert!(Wedge::new(1.0, 0.5).is_err());
    }

    #[test]
    fn wedge_across_branch_cut() {
        let w = Wedge::new(3.0, 3.5).unwrap();
        assert!(w.contains(c(-1.0, 0.0)));
        assert!(w.contains(Complex64::from_polar(1.0, 3.4)));
        assert!(!w.contains(c(1.0, 0.0)));
        assert!((w.theta2() - normalize_angle(3.5)).abs() < 1e-15);
    }

    #[test]
    fn rotation_examples() {
        let r = Wedge::new(-PI / 4.0, PI / 4.0).unwrap().normalize_rotation();
        assert!((r.phi - PI / 4.0).abs() < 1e-15);
        assert!((r.gamma - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(r.psi.abs() < 1e-15);
        let eps = 0.1;
        let r = Wedge::new(0.0, PI / 2.0 - eps).unwrap().normalize_rotation();
        assert!((r.phi - (PI / 2.0 - eps) / 2.0).abs() < 1e-15);
        assert!((r.psi + r.phi).abs() < 1e-15);
    }

    #[test]
    fn tau_two_powers() {
        let v: Vec<Complex64> = [-24.0, -1472.0, 84480.0, 987136.0, -196706304.0]
            .iter()
            .map(|&x| c(x, 0.0))
            .collect();
        let w = Wedge::new(-0.5, 0.5).unwrap();
        let r = scan(&indexed(&v), &w);
        assert_eq!(r.re_sign_changes, vec![(2, 3), (4, 5)]);
        assert_eq!(r.escapes, vec![1, 2, 5]);
        assert!(r.im_sign_changes.is_empty());
    }

    #[test]
    fn positive_and_alternating() {
        let w = Wedge::new(-0.3, 0.3).unwrap();
        let pos: Vec<Complex64> = (1..20).map(|n| c(n as f64, 0.0)).collect();
        let r = scan(&indexed(&pos), &w);
        assert_eq!(r.escape_count() + r.re_change_count(), 0);
        let alt: Vec<Complex64> = (0..10).map(|n| c(0.0, if n % 2 == 0 { 1.0 } else { -1.0 })).collect();
        let r = scan(&indexed(&alt), &Wedge::new(-PI / 4.0, PI / 4.0).unwrap());
        assert_eq!(r.escape_count(), 10);
        assert_eq!(r.im_change_count(), 9);
    }

    #[test]
    fn zeros_are_skipped() {
        let v = [c(3.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0)];
        let r = scan(&indexed(&v), &Wedge::new(-0.1, 0.1).unwrap());
        assert_eq!(r.re_sign_changes, vec![(1, 3)]);
        assert_eq!(r.escapes, vec![3]);
        let strict = scan(&indexed(&v), &Wedge::new(-0.1, 0.1).unwrap().strict(true));
        assert_eq!(strict.escapes, vec![2, 3]);
    }

    proptest! {
        #[test]
        fn scale_invariance(t1 in -3.0f64..3.0, w in 0.0f64..3.1, r in 1e-6f64..1e6, a in -PI..PI, m in 1e-3f64..1e3) {
            let wd = Wedge::new(t1, t1 + w).unwrap();
            let z = Complex64::from_polar(m, a);
            prop_assert_eq!(wd.contains(z), wd.contains(z * r));
        }

        #[test]
        fn rotation_covariance(t1 in -3.0f64..3.0, w in 0.0f64..3.1, psi in -10.0f64..10.0, a in -PI..PI) {
            let wd = Wedge::new(t1, t1 + w).unwrap();
            let z = Complex64::from_polar(2.0, a);
            let turned = Complex64::from_polar(1.0, psi) * z;
            prop_assert_eq!(wd.contains(z), wd.rotate(psi).contains(turned));
        }

        #[test]
        fn rotation_inequality(t1 in -3.0f64..3.0, w in 0.0f64..3.1, u in 0.0f64..1.0, m in 1e-3f64..1e3) {
            let wd = Wedge::new(t1, t1 + w).unwrap();
            let z = Complex64::from_polar(m, t1 + u * w);
            let rot = wd.normalize_rotation();
            let turned = Complex64::from_polar(1.0, rot.psi) * z;
            prop_assert!(turned.re >= rot.gamma * z.norm() - 1e-12 * m.max(1.0));
        }

        #[test]
        fn merge_matches_concatenation(v in prop::collection::vec((-3i8..=3, -3i8..=3), 0..60), cut in 0usize..60, t1 in -3.0f64..3.0) {
            let seq: Vec<(u64, Complex64)> = v.iter().enumerate()
                .map(|(i, &(a, b))| (i as u64, c(a as f64, b as f64))).collect();
            let cut = cut.min(seq.len());
            let w = Wedge::new(t1, t1 + 1.0).unwrap();
            let whole = scan(&seq, &w);
            let merged = scan(&seq[..cut], &w).merge(scan(&seq[cut..], &w));
            prop_assert_eq!(&whole, &merged);
            prop_assert_eq!(&whole, &scan_parallel(&seq, &w, 7));
        }

        #[test]
        fn real_sequences_escape_exactly_when_negative(v in prop::collection::vec(-5i32..=5, 1..50), phi in 0.01f64..1.5) {
            let seq: Vec<(u64, Complex64)> = v.iter().enumerate().map(|(i, &x)| (i as u64, c(x as f64, 0.0))).collect();
            let r = scan(&seq, &Wedge::new(-phi, phi).unwrap());
            let neg: Vec<u64> = v.iter().enumerate().filter(|(_, &x)| x < 0).map(|(i, _)| i as u64).collect();
            prop_assert_eq!(r.escapes, neg);
        }
    }
}
