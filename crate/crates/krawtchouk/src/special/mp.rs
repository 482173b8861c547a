//! Thin wrapper over `astro_float` for the power series that need more than
//! double precision.

use std::sync::{Mutex, OnceLock};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) struct Mp {
    pub bits: usize,
    cc: Consts,
}

/// Complex number with big-float parts.
#[derive(Debug)]
pub(crate) struct Cx {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Mp {
    pub fn new(bits: usize) -> Self {
        let bits = bits.div_ceil(64) * 64;
        Mp { bits, cc: Consts::new().expect("astro-float constants cache") }
    }

    pub fn f(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn ratio(&self, r: &BigRational) -> BigFloat {
        let n = self.bigint(r.numer());
        let d = self.bigint(r.denom());
        self.div(&n, &d)
    }

    fn bigint(&self, v: &BigInt) -> BigFloat {
        let mut acc = self.int(0);
        let base = self.int(1 << 32);
        let (sign, digits) = v.to_u32_digits();
        for d in digits.iter().rev() {
            acc = self.add(&self.mul(&acc, &base), &self.int(*d as i64));
        }
        if sign == num_bigint::Sign::Minus {
            acc.neg()
        } else {
            acc
        }
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }
    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }
    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }
    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }
    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }
    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.cc)
    }
    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.cc)
    }
    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.bits, RM, &mut self.cc)
    }
    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.bits, RM, &mut self.cc)
    }
    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    /// `ln Γ(a)` for `a > 0` by upward shift and the Stirling series.
    pub fn ln_gamma(&mut self, a: &BigFloat) -> BigFloat {
        let target = (0.3 * self.bits as f64 + 16.0).ceil();
        let af = to_f64(a);
        let shift = if af < target { (target - af).ceil() as i64 } else { 0 };
        let mut prod = self.int(1);
        for k in 0..shift {
            prod = self.mul(&prod, &self.add(a, &self.int(k)));
        }
        let x = self.add(a, &self.int(shift));
        let lnx = self.ln(&x);
        let half = self.f(0.5);
        let pi = self.pi();
        let ln_two_pi = self.ln(&self.mul(&self.int(2), &pi));
        let mut s = self.sub(&self.mul(&self.sub(&x, &half), &lnx), &x);
        s = self.add(&s, &self.mul(&half, &ln_two_pi));
        let x2 = self.mul(&x, &x);
        let mut xpow = x.clone();
        let tiny = -(self.bits as f64) * std::f64::consts::LN_2;
        let mut k = 1usize;
        loop {
            let b = bernoulli(2 * k);
            let denom = BigRational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
            let c = self.ratio(&(b / denom));
            let term = self.div(&c, &xpow);
            s = self.add(&s, &term);
            if ln_abs(&term) < tiny + ln_abs(&s).max(0.0) || k > 400 {
                break;
            }
            xpow = self.mul(&xpow, &x2);
            k += 1;
        }
        let lnprod = self.ln(&prod.abs());
        self.sub(&s, &lnprod)
    }

    /// `1/Γ(a)` for any real `a`; zero at the poles.
    pub fn rgamma(&mut self, a: &BigFloat) -> BigFloat {
        if a.is_int() && !a.is_positive() {
            return self.int(0);
        }
        if to_f64(a) >= 0.5 {
            let lg = self.ln_gamma(a);
            return self.exp(&lg.neg());
        }
        // reflection: 1/Γ(a) = Γ(1−a) sin(πa)/π
        let one_minus = self.sub(&self.int(1), a);
        let lg = self.ln_gamma(&one_minus);
        let pi = self.pi();
        let s = self.sin(&self.mul(&pi, a));
        let g = self.exp(&lg);
        self.div(&self.mul(&g, &s), &pi)
    }

    pub fn cx(&self, re: BigFloat, im: BigFloat) -> Cx {
        Cx { re, im }
    }
    pub fn cx_f(&self, re: f64, im: f64) -> Cx {
        Cx { re: self.f(re), im: self.f(im) }
    }
    pub fn cadd(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: self.add(&a.re, &b.re), im: self.add(&a.im, &b.im) }
    }
    pub fn csub(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: self.sub(&a.re, &b.re), im: self.sub(&a.im, &b.im) }
    }
    pub fn cmul(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            im: self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re)),
        }
    }
    pub fn cscale(&self, a: &Cx, s: &BigFloat) -> Cx {
        Cx { re: self.mul(&a.re, s), im: self.mul(&a.im, s) }
    }
    pub fn cexp(&mut self, a: &Cx) -> Cx {
        let m = self.exp(&a.re);
        let c = self.cos(&a.im);
        let s = self.sin(&a.im);
        Cx { re: self.mul(&m, &c), im: self.mul(&m, &s) }
    }
}

impl Clone for Cx {
    fn clone(&self) -> Self {
        Cx { re: self.re.clone(), im: self.im.clone() }
    }
}

/// Nearest `f64`; zero maps to zero and out-of-range magnitudes saturate.
pub(crate) fn to_f64(a: &BigFloat) -> f64 {
    let Some((words, _, sign, e, _)) = a.as_raw_parts() else {
        return f64::NAN;
    };
    if a.is_zero() {
        return 0.0;
    }
    let top = *words.last().unwrap_or(&0) as f64 / 2f64.powi(64);
    let next = if words.len() > 1 { words[words.len() - 2] as f64 / 2f64.powi(128) } else { 0.0 };
    let v = (top + next) * 2f64.powi(e);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Natural log of `|a|`, computed without overflow; `-inf` for zero.
pub(crate) fn ln_abs(a: &BigFloat) -> f64 {
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _, _, e, _)) = a.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *words.last().unwrap_or(&0) as f64 / 2f64.powi(64);
    top.ln() + e as f64 * std::f64::consts::LN_2
}

fn bernoulli_cache() -> &'static Mutex<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_m` with `B_1 = -1/2`.
pub(crate) fn bernoulli(m: usize) -> BigRational {
    let mut cache = bernoulli_cache().lock().expect("bernoulli cache");
    while cache.len() <= m {
        let n = cache.len();
        // Σ_{j<n} C(n+1, j) B_j + (n+1) B_n = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in cache.iter().enumerate() {
            if !b.is_zero() {
                acc += BigRational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        let bn = -acc / BigRational::from_integer(BigInt::from(n + 1));
        cache.push(bn);
    }
    cache[m].clone()
}
