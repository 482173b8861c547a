//! The twelve region approximations `K^(1)…K^(12)` and the dispatcher.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::ln_binomial;
use crate::scaled::{cis_pi, Scaled};
use crate::special::{airy, hermite, lambda_j, ln_gamma, pcf_d_real};
use crate::state::{classify, u0, y_pm, ClassifierConfig, RegionId, RegionTag, ScaledPoint, Shape};
use crate::wkb::{k_pm, theta, Branch};

/// A real approximation kept in log-space, with the size of the imaginary
/// part that was discarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxValue {
    /// `Re K / |K|`.
    pub mantissa: f64,
    /// `ln |K|` of the complex value before the real part was taken.
    pub ln_scale: f64,
    /// `|Im K| / |K|`.
    pub im_residue: f64,
    pub region: RegionId,
}

impl ApproxValue {
    pub fn from_scaled(v: Scaled, region: RegionId) -> Self {
        if v.is_zero() {
            return ApproxValue { mantissa: 0.0, ln_scale: f64::NEG_INFINITY, im_residue: 0.0, region };
        }
        let r = v.m.norm();
        ApproxValue { mantissa: v.m.re / r, ln_scale: v.ln_abs(), im_residue: v.m.im.abs() / r, region }
    }

    pub fn value(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.ln_scale.exp()
        }
    }

    pub fn sign(&self) -> i32 {
        if self.mantissa > 0.0 {
            1
        } else if self.mantissa < 0.0 {
            -1
        } else {
            0
        }
    }

    /// `ln |Re K|`.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }

    /// `Re K / e^{ln_ref}`.
    pub fn relative_to(&self, ln_ref: f64) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * (self.ln_scale - ln_ref).exp()
        }
    }
}

fn signed_log(v: f64) -> Scaled {
    Scaled::from_real(v.signum()).mul(Scaled::exp(Complex64::new(v.abs().ln(), 0.0)))
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0).unwrap_or(0.0)
}

/// Region I: `ε^{−n} (y − p)^n / n!`.
pub fn k1(n: usize, y: f64, sh: &Shape) -> Scaled {
    if n == 0 {
        return Scaled::from_real(1.0);
    }
    let d = y - sh.p;
    if d == 0.0 {
        return Scaled::ZERO;
    }
    let ln = n as f64 * (d.abs().ln() - sh.eps().ln()) - ln_factorial(n);
    let sign = if d < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    Scaled::from_real(sign).mul(Scaled::exp(Complex64::new(ln, 0.0)))
}

/// Region II: `ε^{−n/2} (pq/2)^{n/2} H_n(η) / n!`.
pub fn k2(n: usize, eta: f64, sh: &Shape) -> Scaled {
    let h = hermite(n, eta);
    if h == 0.0 {
        return Scaled::ZERO;
    }
    let ln = 0.5 * n as f64 * ((sh.p * sh.q / 2.0).ln() - sh.eps().ln()) - ln_factorial(n);
    signed_log(h).mul(Scaled::exp(Complex64::new(ln, 0.0)))
}

/// Region III: `Re K⁻`.
pub fn k3(pt: ScaledPoint, sh: &Shape) -> Result<Scaled> {
    k_pm(Branch::Minus, pt, sh)
}

/// Region IV evaluated directly: `Re K⁺`.
pub fn k4(pt: ScaledPoint, sh: &Shape) -> Result<Scaled> {
    k_pm(Branch::Plus, pt, sh)
}

/// Region V, for `x = O(1)` and `p < z < 1`.
pub fn k5(x: f64, z: f64, sh: &Shape) -> Result<Scaled> {
    if !(z > sh.p && z < 1.0) || x < 0.0 {
        return Err(Error::Domain(format!("k5 needs p < z < 1 and x >= 0, got x = {x}, z = {z}")));
    }
    let eps = sh.eps();
    let n = z / eps;
    let cx = cis_pi(x);
    let sign_n = cis_pi(n);
    let phi0_re = (z - 1.0) * (1.0 - z).ln() - z * z.ln() + z * sh.p.ln();
    let ln1 = x * ((z - sh.p) / sh.p).ln() + phi0_re / eps + 0.5 * eps.ln()
        - 0.5 * (2.0 * PI * z * (1.0 - z)).ln();
    let first = Scaled::exp(Complex64::new(ln1, 0.0)).scale(sign_n * cx.re);
    if cx.im == 0.0 {
        return Ok(first);
    }
    let ln2 = eps.ln() - PI.ln() + ln_gamma(x + 1.0)? - (z - sh.p).ln()
        + x * (sh.q * eps / (z - sh.p)).ln()
        + (z - 1.0) * sh.q.ln() / eps;
    let second = Scaled::exp(Complex64::new(ln2, 0.0)).scale(-sign_n * cx.im);
    Ok(first.add(second))
}

/// Region VI, the corner at `(0, p)`, in the variable `u = (Np − n)/√(pqN)`.
pub fn k6(x: f64, u: f64, sh: &Shape) -> Result<Scaled> {
    let eps = sh.eps();
    let pq = sh.p * sh.q;
    let d = pcf_d_real(x, u)?;
    if d == 0.0 {
        return Ok(Scaled::ZERO);
    }
    let ln = 0.5 * eps.ln() - 0.5 * (2.0 * PI * pq).ln() + 0.5 * x * (sh.q * eps / sh.p).ln()
        - sh.q * sh.q.ln() / eps
        - u * (pq / eps).sqrt() * sh.q.ln()
        - u * u / 4.0;
    let n = sh.big_n as f64 * sh.p - u * (pq * sh.big_n as f64).sqrt();
    Ok(signed_log(d).mul(Scaled::exp(Complex64::new(ln, 0.0))).scale(cis_pi(n)))
}

/// Region VII: `½(e^{2πix} + 1) K⁺ + (e^{2πix} − 1) K⁻`.
pub fn k7(pt: ScaledPoint, sh: &Shape) -> Result<Scaled> {
    let e = cis_pi(2.0 * pt.y / sh.eps());
    let plus = k_pm(Branch::Plus, pt, sh)?.scale((e + 1.0) / 2.0);
    if e == Complex64::new(1.0, 0.0) {
        return Ok(plus);
    }
    Ok(plus.add(k_pm(Branch::Minus, pt, sh)?.scale(e - 1.0)))
}

/// The common factor `ε^{1/3} exp[ψ₀/ε + ln((U₀+p)/(U₀−q)) β ε^{−1/3}] / √(zU₀)`
/// of the two Airy layers, written as
/// `exp[iπn + (z−1)/ε ln U₀ + x ln(U₀ − q) + (N − x) ln(U₀ + p)]`.
fn airy_layer_factor(x: f64, z: f64, sh: &Shape) -> Result<Scaled> {
    let eps = sh.eps();
    let u = u0(z, sh)?;
    let d = u - sh.q;
    if d == 0.0 {
        return Err(Error::Singular(format!("Airy layer factor at z = p = {z}")));
    }
    let big_n = sh.big_n as f64;
    let ln = (z - 1.0) / eps * u.ln() + x * d.abs().ln() + (big_n - x) * (u + sh.p).ln()
        + eps.ln() / 3.0
        - 0.5 * (z * u).ln();
    let turns = z / eps + if d < 0.0 { x } else { 0.0 };
    Ok(Scaled::exp_pi(ln, turns))
}

fn layer_x(beta: f64, z: f64, sh: &Shape) -> Result<f64> {
    let (ym, _) = y_pm(z, sh)?;
    Ok((ym - beta * sh.eps().powf(2.0 / 3.0)) / sh.eps())
}

/// Region VIII, the Airy layer along `Y⁻` for `z < p`.
pub fn k8(beta: f64, z: f64, sh: &Shape) -> Result<Scaled> {
    if !(z > 0.0 && z < sh.p) {
        return Err(Error::Domain(format!("k8 needs 0 < z < p, got {z}")));
    }
    let th = theta(z, sh)?;
    let x = layer_x(beta, z, sh)?;
    let ai = airy(th.powf(2.0 / 3.0) * beta)?.ai;
    Ok(airy_layer_factor(x, z, sh)?.mul(signed_log(ai * th.powf(-1.0 / 3.0))))
}

/// Region IX, the Airy layer along `Y⁻` for `z > p`.
pub fn k9(beta: f64, z: f64, sh: &Shape) -> Result<Scaled> {
    if !(z > sh.p && z < 1.0) {
        return Err(Error::Domain(format!("k9 needs p < z < 1, got {z}")));
    }
    let vt = -theta(z, sh)?;
    let x = layer_x(beta, z, sh)?;
    let e = cis_pi(2.0 * x);
    let a = airy(vt.powf(2.0 / 3.0) * beta)?;
    let bracket = (e + 1.0) * a.ai + Complex64::i() * (e - 1.0) * a.bi;
    let amp = 0.5 * vt.powf(-1.0 / 3.0);
    Ok(airy_layer_factor(x, z, sh)?.mul(Scaled::from_complex(bracket * amp)))
}

/// Region X, inside the ellipse: `K⁺ + K⁻`.
pub fn k10(pt: ScaledPoint, sh: &Shape) -> Result<Scaled> {
    Ok(k_pm(Branch::Plus, pt, sh)?.add(k_pm(Branch::Minus, pt, sh)?))
}

/// `ln |C(x, k)|` and its sign for real `x`; `None` when it vanishes.
fn binomial_real_log(x: f64, k: usize) -> Option<(f64, f64)> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for i in 0..k {
        let f = x - i as f64;
        if f == 0.0 {
            return None;
        }
        ln += f.abs().ln() - ((i + 1) as f64).ln();
        if f < 0.0 {
            sign = -sign;
        }
    }
    Some((ln, sign))
}

/// Region XI, near `n = N` with `j = N − n` and `y` away from `q`.
pub fn k11(j: usize, y: f64, sh: &Shape) -> Result<Scaled> {
    let big_n = sh.big_n;
    if j > big_n {
        return Err(Error::Domain(format!("j = {j} exceeds N = {big_n}")));
    }
    if y == sh.q {
        return Err(Error::Singular("k11 at y = q".into()));
    }
    let x = y * big_n as f64;
    let base = 1.0 - y / sh.q;
    let mut total = Scaled::ZERO;
    if !(base == 0.0 && j > 0) {
        let ln = ln_binomial(big_n, j) + (big_n - j) as f64 * sh.p.ln() + x * (sh.q / sh.p).ln()
            + j as f64 * base.abs().ln();
        let mut sign = cis_pi(x).re;
        if (big_n - j) % 2 == 1 {
            sign = -sign;
        }
        if base < 0.0 && j % 2 == 1 {
            sign = -sign;
        }
        total = Scaled::exp(Complex64::new(ln, 0.0)).scale(Complex64::new(sign, 0.0));
    }
    if let Some((lnb, sb)) = binomial_real_log(x, big_n - j) {
        let r = (1.0 - y) / (sh.q - y);
        if r != 0.0 {
            let ln = lnb + (j + 1) as f64 * r.abs().ln();
            let sign = if r < 0.0 && (j + 1) % 2 == 1 { -sb } else { sb };
            total = total.add(Scaled::exp(Complex64::new(ln, 0.0)).scale(Complex64::new(sign, 0.0)));
        }
    }
    Ok(total)
}

/// Region XII, the corner at `(q, 1)` in the variable `ξ = (y − q)/√(2pqε)`.
pub fn k12(j: usize, xi: f64, sh: &Shape) -> Result<Scaled> {
    let eps = sh.eps();
    let big_n = sh.big_n as f64;
    let (p, q) = (sh.p, sh.q);
    let shift = xi * (2.0 * p * q / eps).sqrt();
    let x = big_n * q + shift;
    let ln = (p * p.ln() + q * q.ln()) / eps + shift * (q / p).ln() - 0.5 * j as f64 * (p * q * eps).ln()
        + 0.5 * xi * xi;
    let trig = cis_pi(big_n - x);
    let d = pcf_d_real(j as f64, std::f64::consts::SQRT_2 * xi)?;
    let mut bracket = d * trig.re / ln_factorial(j).exp();
    if trig.im != 0.0 {
        bracket -= lambda_j(j, xi)? * trig.im / (2.0 * PI).sqrt();
    }
    if bracket == 0.0 {
        return Ok(Scaled::ZERO);
    }
    Ok(signed_log(bracket).mul(Scaled::exp(Complex64::new(ln, 0.0))))
}

/// Evaluates the formula of `tag` at `(x, n)` without any reflection.
pub fn eval_region(tag: RegionTag, x: usize, n: usize, sh: &Shape) -> Result<Scaled> {
    let eps = sh.eps();
    let pt = sh.point(x as f64, n as f64);
    let s2 = (2.0 * sh.p * sh.q * eps).sqrt();
    let beta = || -> Result<f64> { Ok((y_pm(pt.z, sh)?.0 - pt.y) / eps.powf(2.0 / 3.0)) };
    match tag {
        RegionTag::I => Ok(k1(n, pt.y, sh)),
        RegionTag::II => Ok(k2(n, (pt.y - sh.p) / s2, sh)),
        RegionTag::III => k3(pt, sh),
        RegionTag::IV => k4(pt, sh),
        RegionTag::V => k5(x as f64, pt.z, sh),
        RegionTag::VI => k6(x as f64, (sh.p - pt.z) / (sh.p * sh.q * eps).sqrt(), sh),
        RegionTag::VII => k7(pt, sh),
        RegionTag::VIII => k8(beta()?, pt.z, sh),
        RegionTag::IX => k9(beta()?, pt.z, sh),
        RegionTag::X => k10(pt, sh),
        RegionTag::XI => k11(sh.big_n - n, pt.y, sh),
        RegionTag::XII => k12(sh.big_n - n, (pt.y - sh.q) / s2, sh),
    }
}

/// Evaluates region `id` at `(x, n)`, reflecting through `x → N − x`, `p ↔ q`
/// when the id is mirrored.
pub fn eval_region_id(id: RegionId, x: usize, n: usize, sh: &Shape) -> Result<ApproxValue> {
    let v = if id.mirrored {
        let tag = if id.tag == RegionTag::IV { RegionTag::III } else { id.tag };
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        eval_region(tag, sh.big_n - x, n, &sh.swapped())?.scale(Complex64::new(sign, 0.0))
    } else {
        eval_region(id.tag, x, n, sh)?
    };
    Ok(ApproxValue::from_scaled(v, id))
}

/// Classifies `(x, n)` and evaluates the matching formula.
pub fn approx(x: usize, n: usize, sh: &Shape, cfg: &ClassifierConfig) -> Result<ApproxValue> {
    eval_region_id(classify(x, n, sh, cfg), x, n, sh)
}
