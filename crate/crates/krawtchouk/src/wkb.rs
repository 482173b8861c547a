//! Phases and amplitudes of the two WKB branches and of the transition layers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scaled::{cis_pi, ln_p, sqrt_p, Scaled};
use crate::state::{u0, u_pm, y_pm, ScaledPoint, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Phase `ψ` and amplitude `L` of one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexAmplitude {
    pub psi: Complex64,
    pub l: Complex64,
}

fn interior(pt: ScaledPoint) -> Result<()> {
    if !(pt.z > 0.0 && pt.z < 1.0) {
        return Err(Error::Singular(format!("z = {} must lie in (0, 1)", pt.z)));
    }
    Ok(())
}

/// The root `U^±`, refusing points where the two roots coalesce.
pub fn root(branch: Branch, pt: ScaledPoint, sh: &Shape) -> Result<Complex64> {
    interior(pt)?;
    let r = u_pm(pt, sh)?;
    let u = match branch {
        Branch::Plus => r.plus,
        Branch::Minus => r.minus,
    };
    let u0sq = sh.p * sh.q * (1.0 - pt.z) / pt.z;
    if (u * u - u0sq).norm() < 1e-10 * u0sq {
        return Err(Error::Singular(format!("roots coalesce at y = {}, z = {}", pt.y, pt.z)));
    }
    Ok(u)
}

/// `ψ^± = (z−1) ln U + (1−y) ln(U−p) + y ln(U+q)`.
pub fn psi_pm(branch: Branch, pt: ScaledPoint, sh: &Shape) -> Result<Complex64> {
    let u = root(branch, pt, sh)?;
    Ok(psi_at(u, pt, sh))
}

fn psi_at(u: Complex64, pt: ScaledPoint, sh: &Shape) -> Complex64 {
    (pt.z - 1.0) * ln_p(u) + (1.0 - pt.y) * ln_p(u - sh.p) + pt.y * ln_p(u + sh.q)
}

/// `L^± = √[(U−p)(U+q) / (z(U² − U₀²))]`.
pub fn l_pm(branch: Branch, pt: ScaledPoint, sh: &Shape) -> Result<Complex64> {
    let u = root(branch, pt, sh)?;
    Ok(l_at(u, pt, sh))
}

fn l_at(u: Complex64, pt: ScaledPoint, sh: &Shape) -> Complex64 {
    let u0sq = sh.p * sh.q * (1.0 - pt.z) / pt.z;
    sqrt_p((u - sh.p) * (u + sh.q) / (pt.z * (u * u - u0sq)))
}

pub fn amplitude(branch: Branch, pt: ScaledPoint, sh: &Shape) -> Result<ComplexAmplitude> {
    let u = root(branch, pt, sh)?;
    Ok(ComplexAmplitude { psi: psi_at(u, pt, sh), l: l_at(u, pt, sh) })
}

/// `K^± = ε^{1/2} (2π)^{−1/2} exp(ψ^±/ε) L^±`.
pub fn k_pm(branch: Branch, pt: ScaledPoint, sh: &Shape) -> Result<Scaled> {
    let a = amplitude(branch, pt, sh)?;
    let eps = sh.eps();
    let w = a.psi / eps + ln_p(a.l) + 0.5 * (eps / (2.0 * std::f64::consts::PI)).ln();
    Ok(Scaled::exp(w))
}

fn open_interval(z: f64) -> Result<()> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Singular(format!("z = {z} must lie in (0, 1)")));
    }
    Ok(())
}

/// `ψ₀ = zπi + (z−1) ln U₀ + Y⁻ ln(U₀ − q) + (1 − Y⁻) ln(U₀ + p)`.
pub fn psi0(z: f64, sh: &Shape) -> Result<Complex64> {
    open_interval(z)?;
    let u = u0(z, sh)?;
    if (u - sh.q).abs() < 1e-14 {
        return Err(Error::Singular(format!("ln(U0 - q) diverges at z = p = {z}")));
    }
    let (ym, _) = y_pm(z, sh)?;
    let c = |v: f64| Complex64::new(v, 0.0);
    Ok(Complex64::new(0.0, z * std::f64::consts::PI)
        + (z - 1.0) * u.ln()
        + ym * ln_p(c(u - sh.q))
        + (1.0 - ym) * (u + sh.p).ln())
}

/// `Θ(z) = √(U₀/z) / ((U₀ + p)(U₀ − q))`, positive for `z < p`.
pub fn theta(z: f64, sh: &Shape) -> Result<f64> {
    open_interval(z)?;
    let u = u0(z, sh)?;
    let d = (u + sh.p) * (u - sh.q);
    if d.abs() < 1e-14 {
        return Err(Error::Singular(format!("Theta has a pole at z = p = {z}")));
    }
    Ok((u / z).sqrt() / d)
}

/// `ϑ = −Θ`, positive for `z > p`.
pub fn vartheta(z: f64, sh: &Shape) -> Result<f64> {
    Ok(-theta(z, sh)?)
}

/// `λ^± = exp(2πi[Y⁻(z) − βε^{2/3}]/ε) ± 1`.
pub fn lambda_pm(branch: Branch, beta: f64, z: f64, sh: &Shape) -> Result<Complex64> {
    let eps = sh.eps();
    let (ym, _) = y_pm(z, sh)?;
    let e = cis_pi(2.0 * (ym - beta * eps.powf(2.0 / 3.0)) / eps);
    Ok(match branch {
        Branch::Plus => e + 1.0,
        Branch::Minus => e - 1.0,
    })
}

/// `φ₀ = (z−1) ln(1−z) − z ln z + z(ln p + iπ)`.
pub fn phi0(z: f64, sh: &Shape) -> Result<Complex64> {
    open_interval(z)?;
    Ok(Complex64::new(
        (z - 1.0) * (1.0 - z).ln() - z * z.ln() + z * sh.p.ln(),
        z * std::f64::consts::PI,
    ))
}

/// Relative residual of the eikonal equation at one root.
pub fn eikonal_residual(u: Complex64, pt: ScaledPoint, sh: &Shape) -> f64 {
    let a = pt.z * u * u;
    let b = (sh.p - pt.y + pt.z * (sh.q - sh.p)) * u;
    let c = sh.p * sh.q * (1.0 - pt.z);
    (a + b + c).norm() / a.norm().max(b.norm()).max(c.abs())
}

/// Relative residual of the transport equation
/// `[zU² − pq(1−z)] L_z + {½[zU² + pq(1−z)] ψ_zz + U² + pq} L = 0`
/// with `L_z` and `ψ_zz` from centred differences of step `h`.
pub fn transport_residual(branch: Branch, pt: ScaledPoint, sh: &Shape, h: f64) -> Result<f64> {
    let at = |dz: f64| amplitude(branch, ScaledPoint { y: pt.y, z: pt.z + dz }, sh);
    let (lo, mid, hi) = (at(-h)?, at(0.0)?, at(h)?);
    let u = root(branch, pt, sh)?;
    let l_z = (hi.l - lo.l) / (2.0 * h);
    let psi_zz = (hi.psi - 2.0 * mid.psi + lo.psi) / (h * h);
    let pq = sh.p * sh.q;
    let t1 = (pt.z * u * u - pq * (1.0 - pt.z)) * l_z;
    let t2 = 0.5 * (pt.z * u * u + pq * (1.0 - pt.z)) * psi_zz * mid.l;
    let t3 = (u * u + pq) * mid.l;
    Ok((t1 + t2 + t3).norm() / t1.norm().max(t2.norm()).max(t3.norm()))
}
