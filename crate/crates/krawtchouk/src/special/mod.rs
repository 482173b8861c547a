//! Special functions used by the region formulas.
//!
//! Airy functions and parabolic cylinder functions are summed from their
//! Maclaurin series in extended precision, so they are exact to double
//! precision on the bounded domains below and refuse anything outside them.

pub(crate) mod mp;

use num_complex::Complex64;

use crate::error::{Error, Result};
use mp::{to_f64, Cx, Mp};

/// Largest `|x|` accepted by [`airy`].
pub const AIRY_MAX_ARG: f64 = 12.0;
/// Largest `|z|` accepted by [`pcf_d`].
pub const PCF_MAX_ARG: f64 = 15.0;
/// Largest `|ν|` accepted by [`pcf_d`].
pub const PCF_MAX_ORDER: f64 = 30.0;

/// Physicists' Hermite polynomial `H_n(η)` by the three-term recurrence.
pub fn hermite(n: usize, eta: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * eta);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * eta * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return Ok((pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln())
}

/// `Γ(x)` for `x > 0`.
pub fn gamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("gamma_real needs x > 0, got {x}")));
    }
    if x == x.floor() && x <= 171.0 {
        return Ok((1..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    Ok(ln_gamma(x)?.exp())
}

/// Airy functions and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Airy {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

/// `Ai`, `Ai'`, `Bi`, `Bi'` at real `x` with `|x| ≤ 12`.
pub fn airy(x: f64) -> Result<Airy> {
    if x.is_nan() || x.abs() > AIRY_MAX_ARG {
        return Err(Error::Range(format!("airy argument {x} outside [-12, 12]")));
    }
    let bits = 128 + (2.0 * x.abs().powf(1.5)).ceil() as usize;
    let mut mp = Mp::new(bits);
    let third = mp.div(&mp.int(1), &mp.int(3));
    let two_thirds = mp.div(&mp.int(2), &mp.int(3));
    let ln3 = mp.ln(&mp.int(3));
    // c1 = Ai(0) = 3^{-2/3}/Γ(2/3), c2 = -Ai'(0) = 3^{-1/3}/Γ(1/3)
    let lg23 = mp.ln_gamma(&two_thirds);
    let lg13 = mp.ln_gamma(&third);
    let c1 = mp.exp(&mp.sub(&mp.mul(&two_thirds, &ln3).neg(), &lg23));
    let c2 = mp.exp(&mp.sub(&mp.mul(&third, &ln3).neg(), &lg13));

    let xb = mp.f(x);
    let x3 = mp.mul(&mp.mul(&xb, &xb), &xb);
    let tol = -(bits as f64) * std::f64::consts::LN_2;
    let (mut f, mut g, mut fp, mut gp) = (mp.int(1), xb.clone(), mp.int(0), mp.int(1));
    let (mut tf, mut tg) = (mp.int(1), xb.clone());
    let mut tfp = mp.div(&mp.mul(&xb, &xb), &mp.int(2));
    let mut tgp = mp.int(1);
    fp = mp.add(&fp, &tfp);
    for k in 0..2000usize {
        let k3 = 3 * k as i64;
        tf = mp.div(&mp.mul(&tf, &x3), &mp.int((k3 + 2) * (k3 + 3)));
        tg = mp.div(&mp.mul(&tg, &x3), &mp.int((k3 + 3) * (k3 + 4)));
        tgp = mp.div(&mp.mul(&tgp, &x3), &mp.int((k3 + 1) * (k3 + 3)));
        f = mp.add(&f, &tf);
        g = mp.add(&g, &tg);
        gp = mp.add(&gp, &tgp);
        if k > 0 {
            tfp = mp.div(&mp.mul(&tfp, &x3), &mp.int(k3 * (k3 + 2)));
            fp = mp.add(&fp, &tfp);
        }
        let small = [&tf, &tg, &tgp, &tfp].iter().all(|t| mp::ln_abs(t) < tol);
        if small && k > 2 {
            let ai = mp.sub(&mp.mul(&c1, &f), &mp.mul(&c2, &g));
            let aip = mp.sub(&mp.mul(&c1, &fp), &mp.mul(&c2, &gp));
            let s3 = mp.sqrt(&mp.int(3));
            let bi = mp.mul(&s3, &mp.add(&mp.mul(&c1, &f), &mp.mul(&c2, &g)));
            let bip = mp.mul(&s3, &mp.add(&mp.mul(&c1, &fp), &mp.mul(&c2, &gp)));
            return Ok(Airy {
                ai: to_f64(&ai),
                ai_prime: to_f64(&aip),
                bi: to_f64(&bi),
                bi_prime: to_f64(&bip),
            });
        }
    }
    Err(Error::NonConvergence(format!("airy series at x = {x}")))
}

pub fn airy_ai(x: f64) -> Result<f64> {
    Ok(airy(x)?.ai)
}

pub fn airy_bi(x: f64) -> Result<f64> {
    Ok(airy(x)?.bi)
}

fn check_pcf_domain(nu: f64, z: Complex64) -> Result<()> {
    if z.norm().is_nan() || z.norm() > PCF_MAX_ARG || nu.is_nan() || nu.abs() > PCF_MAX_ORDER {
        return Err(Error::Range(format!(
            "pcf_d needs |z| <= 15 and |nu| <= 30, got nu = {nu}, z = {z}"
        )));
    }
    Ok(())
}

fn pcf_bits(nu: f64, z: Complex64) -> usize {
    128 + (1.1 * z.norm_sqr()).ceil() as usize + (4.0 * nu.abs()).ceil() as usize
}

/// Kummer's `M(a, b, w)` summed until the terms drop below the working precision.
fn kummer_m(mp: &Mp, a: &astro_float::BigFloat, b: &astro_float::BigFloat, w: &Cx) -> Result<Cx> {
    let mut sum = mp.cx_f(1.0, 0.0);
    let mut term = mp.cx_f(1.0, 0.0);
    let tol = -(mp.bits as f64) * std::f64::consts::LN_2;
    let mut peak = 0.0f64;
    let wmag = to_f64(&w.re).hypot(to_f64(&w.im));
    let amag = to_f64(a).abs();
    for k in 0..20_000i64 {
        let ak = mp.add(a, &mp.int(k));
        if ak.is_zero() {
            return Ok(sum);
        }
        let bk = mp.add(b, &mp.int(k));
        let factor = mp.div(&ak, &mp.mul(&bk, &mp.int(k + 1)));
        term = mp.cscale(&mp.cmul(&term, w), &factor);
        sum = mp.cadd(&sum, &term);
        let lt = mp::ln_abs(&term.re).max(mp::ln_abs(&term.im));
        let ls = mp::ln_abs(&sum.re).max(mp::ln_abs(&sum.im));
        peak = peak.max(ls);
        if (k as f64) > wmag + amag && lt < peak + tol {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence("confluent series for D_nu".into()))
}

fn pcf_d_mp(mp: &mut Mp, nu: f64, z: &Cx) -> Result<Cx> {
    let nub = mp.f(nu);
    let half = mp.f(0.5);
    let z2 = mp.cmul(z, z);
    let w = mp.cscale(&z2, &half);
    let a1 = mp.mul(&nub, &half).neg();
    let a2 = mp.mul(&mp.sub(&mp.int(1), &nub), &half);
    let m1 = kummer_m(mp, &a1, &half, &w)?;
    let m2 = kummer_m(mp, &a2, &mp.f(1.5), &w)?;
    let pi = mp.pi();
    let sqrt_pi = mp.sqrt(&pi);
    let sqrt_2pi = mp.sqrt(&mp.mul(&mp.int(2), &pi));
    let r1 = mp.rgamma(&a2);
    let r2 = mp.rgamma(&a1);
    let t1 = mp.cscale(&m1, &mp.mul(&sqrt_pi, &r1));
    let t2 = mp.cscale(&mp.cmul(z, &m2), &mp.mul(&sqrt_2pi, &r2));
    let bracket = mp.csub(&t1, &t2);
    // 2^{ν/2} e^{−z²/4}
    let ln2 = mp.ln(&mp.int(2));
    let quarter = mp.f(-0.25);
    let mut expo = mp.cscale(&z2, &quarter);
    expo.re = mp.add(&expo.re, &mp.mul(&mp.mul(&nub, &half), &ln2));
    let pre = mp.cexp(&expo);
    Ok(mp.cmul(&pre, &bracket))
}

fn to_c64(c: &Cx) -> Complex64 {
    Complex64::new(to_f64(&c.re), to_f64(&c.im))
}

/// Parabolic cylinder function `D_ν(z)` for `|ν| ≤ 30` and `|z| ≤ 15`.
pub fn pcf_d(nu: f64, z: Complex64) -> Result<Complex64> {
    check_pcf_domain(nu, z)?;
    let mut mp = Mp::new(pcf_bits(nu, z));
    let zc = mp.cx_f(z.re, z.im);
    let v = to_c64(&pcf_d_mp(&mut mp, nu, &zc)?);
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Range(format!("D_{nu}({z}) is not representable")));
    }
    Ok(v)
}

/// `D_ν(x)` for real `x`.
pub fn pcf_d_real(nu: f64, x: f64) -> Result<f64> {
    Ok(pcf_d(nu, Complex64::new(x, 0.0))?.re)
}

/// Largest `|ξ|` accepted by [`lambda_j`].
pub const LAMBDA_MAX_XI: f64 = 8.0;

/// The complex value of `i^{j+1}[D_{−j−1}(i√2 ξ) + (−1)^{j+1} D_{−j−1}(−i√2 ξ)]`
/// before the real part is taken.
pub fn lambda_j_complex(j: usize, xi: f64) -> Result<Complex64> {
    if xi.is_nan() || xi.abs() > LAMBDA_MAX_XI || j > 30 {
        return Err(Error::Range(format!("lambda_j needs j <= 30, |xi| <= 8; got {j}, {xi}")));
    }
    let nu = -(j as f64) - 1.0;
    let t = std::f64::consts::SQRT_2 * xi;
    let arg = Complex64::new(0.0, t);
    let mut mp = Mp::new(pcf_bits(nu, arg));
    let (zp, zm) = (mp.cx_f(0.0, t), mp.cx_f(0.0, -t));
    let plus = pcf_d_mp(&mut mp, nu, &zp)?;
    let minus = pcf_d_mp(&mut mp, nu, &zm)?;
    let sum = if j % 2 == 1 { mp.cadd(&plus, &minus) } else { mp.csub(&plus, &minus) };
    // multiply by i^{j+1}
    let rotated = match (j + 1) % 4 {
        0 => sum,
        1 => mp.cx(sum.im.neg(), sum.re),
        2 => mp.cx(sum.re.neg(), sum.im.neg()),
        _ => mp.cx(sum.im, sum.re.neg()),
    };
    Ok(to_c64(&rotated))
}

/// `Λ_j(ξ)`, real by construction; the imaginary residue is checked.
pub fn lambda_j(j: usize, xi: f64) -> Result<f64> {
    let v = lambda_j_complex(j, xi)?;
    if v.im.abs() > 1e-8 * (v.re.abs() + 1e-300) {
        return Err(Error::Residue { residue: v.im.abs(), value: v.re });
    }
    Ok(v.re)
}
