//! Scaled coordinates, the eikonal roots, the ellipse and the region classifier.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Floating-point view of a problem instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub big_n: usize,
    pub p: f64,
    pub q: f64,
}

impl Shape {
    pub fn new(big_n: usize, p: f64) -> Self {
        Shape { big_n, p, q: 1.0 - p }
    }

    pub fn eps(&self) -> f64 {
        1.0 / self.big_n as f64
    }

    pub fn swapped(&self) -> Self {
        Shape { big_n: self.big_n, p: self.q, q: self.p }
    }

    pub fn point(&self, x: f64, n: f64) -> ScaledPoint {
        ScaledPoint { y: x * self.eps(), z: n * self.eps() }
    }
}

/// `(y, z) = (x/N, n/N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPoint {
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    XI,
    XII,
}

impl RegionTag {
    pub const ALL: [RegionTag; 12] = [
        RegionTag::I,
        RegionTag::II,
        RegionTag::III,
        RegionTag::IV,
        RegionTag::V,
        RegionTag::VI,
        RegionTag::VII,
        RegionTag::VIII,
        RegionTag::IX,
        RegionTag::X,
        RegionTag::XI,
        RegionTag::XII,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionTag::I => "I",
            RegionTag::II => "II",
            RegionTag::III => "III",
            RegionTag::IV => "IV",
            RegionTag::V => "V",
            RegionTag::VI => "VI",
            RegionTag::VII => "VII",
            RegionTag::VIII => "VIII",
            RegionTag::IX => "IX",
            RegionTag::X => "X",
            RegionTag::XI => "XI",
            RegionTag::XII => "XII",
        }
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RegionTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown region `{s}`")))
    }
}

/// A region tag plus whether the point was reflected through `x → N − x`, `p ↔ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegionId {
    pub tag: RegionTag,
    pub mirrored: bool,
}

/// Widths of the corner and transition layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    pub n_small: usize,
    pub x_small: usize,
    pub j_small: usize,
    /// Multiplier of `√ε` for the Hermite and parabolic-cylinder corners.
    pub corner_width: f64,
    /// Half-width of the Airy strip in units of `ε^{2/3}`.
    pub beta_max: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { n_small: 4, x_small: 4, j_small: 4, corner_width: 3.5, beta_max: 0.25 }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.n_small > 0
            && self.x_small > 0
            && self.j_small > 0
            && self.corner_width > 0.0
            && self.beta_max >= 0.0
            && self.corner_width.is_finite()
            && self.beta_max.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid classifier config {self:?}")))
        }
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(Error::Domain(format!("z = {z} must lie in (0, 1]")));
    }
    Ok(())
}

/// `U₀(z) = √(pq(1−z)/z)`.
pub fn u0(z: f64, sh: &Shape) -> Result<f64> {
    check_z(z)?;
    Ok((sh.p * sh.q * (1.0 - z) / z).sqrt())
}

/// The turning curves `(Y⁻(z), Y⁺(z))`.
pub fn y_pm(z: f64, sh: &Shape) -> Result<(f64, f64)> {
    let w = 2.0 * z * u0(z, sh)?;
    let mid = sh.p + (sh.q - sh.p) * z;
    Ok((mid - w, mid + w))
}

/// Negative inside the ellipse, positive outside.
pub fn ellipse_residual(pt: ScaledPoint, sh: &Shape) -> f64 {
    let (a, b) = (pt.y - 0.5, pt.z - 0.5);
    a * a + b * b + 2.0 * (sh.p - sh.q) * a * b - sh.p * sh.q
}

/// The two roots of `zU² + [p − y + z(q − p)]U + pq(1 − z) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roots {
    pub plus: Complex64,
    pub minus: Complex64,
}

pub fn u_pm(pt: ScaledPoint, sh: &Shape) -> Result<Roots> {
    check_z(pt.z)?;
    let b = (sh.p - pt.y) / pt.z + sh.q - sh.p;
    let u0sq = sh.p * sh.q * (1.0 - pt.z) / pt.z;
    let disc = Complex64::new(b * b - 4.0 * u0sq, 0.0).sqrt();
    Ok(Roots { plus: (-b + disc) / 2.0, minus: (-b - disc) / 2.0 })
}

/// Local coordinates of the corner and transition layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerCoords {
    pub eta: f64,
    pub u: f64,
    pub beta: f64,
    pub xi: f64,
    pub j: usize,
}

pub fn corner_coords(x: usize, n: usize, sh: &Shape) -> CornerCoords {
    let eps = sh.eps();
    let pt = sh.point(x as f64, n as f64);
    let s2 = (2.0 * sh.p * sh.q * eps).sqrt();
    let beta = if n == 0 {
        f64::NAN
    } else {
        let (ym, _) = y_pm(pt.z, sh).expect("z > 0");
        (ym - pt.y) / eps.powf(2.0 / 3.0)
    };
    CornerCoords {
        eta: (pt.y - sh.p) / s2,
        u: (sh.p - pt.z) / (sh.p * sh.q * eps).sqrt(),
        beta,
        xi: (pt.y - sh.q) / s2,
        j: sh.big_n - n,
    }
}

/// Assigns `(x, n)` to one of the twelve regions.
///
/// Rows near `n = 0` and `n = N` are classified directly. Everything else right
/// of the ellipse's centre line `y = p + (q − p)z` is reflected to
/// `(N − x, n)` with `p ↔ q` and classified there.
pub fn classify(x: usize, n: usize, sh: &Shape, cfg: &ClassifierConfig) -> RegionId {
    let big_n = sh.big_n;
    let eps = sh.eps();
    let pt = sh.point(x as f64, n as f64);
    let hermite_width = cfg.corner_width * (2.0 * sh.p * sh.q * eps).sqrt();
    if n <= cfg.n_small {
        let tag = if (pt.y - sh.p).abs() <= hermite_width { RegionTag::II } else { RegionTag::I };
        return RegionId { tag, mirrored: false };
    }
    if big_n - n <= cfg.j_small {
        let tag = if (pt.y - sh.q).abs() <= hermite_width { RegionTag::XII } else { RegionTag::XI };
        return RegionId { tag, mirrored: false };
    }
    if pt.y > sh.p + (sh.q - sh.p) * pt.z {
        let tag = classify_left(big_n - x, n, &sh.swapped(), cfg);
        let tag = if tag == RegionTag::III { RegionTag::IV } else { tag };
        return RegionId { tag, mirrored: true };
    }
    RegionId { tag: classify_left(x, n, sh, cfg), mirrored: false }
}

fn classify_left(x: usize, n: usize, sh: &Shape, cfg: &ClassifierConfig) -> RegionTag {
    let eps = sh.eps();
    let pt = sh.point(x as f64, n as f64);
    if x <= cfg.x_small && (pt.z - sh.p).abs() <= cfg.corner_width * (sh.p * sh.q * eps).sqrt() {
        return RegionTag::VI;
    }
    if x <= cfg.x_small && pt.z > sh.p {
        return RegionTag::V;
    }
    let (ym, _) = y_pm(pt.z, sh).expect("n > 0 here");
    if (pt.y - ym).abs() <= cfg.beta_max * eps.powf(2.0 / 3.0) {
        return if pt.z < sh.p { RegionTag::VIII } else { RegionTag::IX };
    }
    if ellipse_residual(pt, sh) < 0.0 {
        return RegionTag::X;
    }
    if pt.z > sh.p {
        RegionTag::VII
    } else {
        RegionTag::III
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u0_values() {
        let sh = Shape::new(10, 0.3);
        assert_eq!(u0(1.0, &sh).unwrap(), 0.0);
        assert!((u0(0.3, &sh).unwrap() - 0.7).abs() < 1e-15);
        assert!((u0(0.5, &Shape::new(10, 0.5)).unwrap() - 0.5).abs() < 1e-15);
        assert!(u0(0.0, &sh).is_err());
    }

    #[test]
    fn y_pm_endpoints() {
        let sh = Shape::new(10, 0.3);
        let (a, b) = y_pm(1.0, &sh).unwrap();
        assert!((a - 0.7).abs() < 1e-15 && (b - 0.7).abs() < 1e-15);
        let (a, b) = y_pm(1e-12, &sh).unwrap();
        assert!((a - 0.3).abs() < 1e-5 && (b - 0.3).abs() < 1e-5);
    }

    #[test]
    fn ellipse_examples() {
        let sh = Shape::new(10, 1.0 / 3.0);
        assert!(ellipse_residual(ScaledPoint { y: sh.p, z: 0.0 }, &sh).abs() < 1e-12);
        assert!((ellipse_residual(ScaledPoint { y: 0.5, z: 0.5 }, &sh) + sh.p * sh.q).abs() < 1e-15);
        let origin = ellipse_residual(ScaledPoint { y: 0.0, z: 0.0 }, &sh);
        assert!((origin - (0.5 - sh.p * sh.q + (sh.p - sh.q) / 2.0)).abs() < 1e-15);
        assert!(origin > 0.0);
    }

    #[test]
    fn region_tag_round_trip() {
        for t in RegionTag::ALL {
            assert_eq!(t.as_str().parse::<RegionTag>().unwrap(), t);
        }
        assert!("XIII".parse::<RegionTag>().is_err());
    }
}
