//! Complex numbers stored as `m·e^s`, so that `exp(ψ/ε)` with `ψ/ε` in the
//! hundreds never overflows.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub m: Complex64,
    pub s: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: Complex64::new(0.0, 0.0), s: 0.0 };

    /// `e^w`.
    pub fn exp(w: Complex64) -> Self {
        Scaled { m: Complex64::from_polar(1.0, w.im), s: w.re }
    }

    /// `e^{a + iπt}` with the phase reduced exactly when `t` is an integer.
    pub fn exp_pi(a: f64, t: f64) -> Self {
        Scaled { m: cis_pi(t), s: a }
    }

    pub fn from_complex(c: Complex64) -> Self {
        Scaled { m: c, s: 0.0 }.normalized()
    }

    pub fn from_real(v: f64) -> Self {
        Self::from_complex(Complex64::new(v, 0.0))
    }

    pub fn normalized(self) -> Self {
        let r = self.m.norm();
        if r == 0.0 || !r.is_finite() {
            return if r == 0.0 { Scaled::ZERO } else { self };
        }
        Scaled { m: self.m / r, s: self.s + r.ln() }
    }

    pub fn is_zero(&self) -> bool {
        self.m.norm() == 0.0
    }

    pub fn scale(self, c: Complex64) -> Self {
        Scaled { m: self.m * c, s: self.s }.normalized()
    }

    /// Keeps only the real part.
    pub fn re(self) -> Self {
        Scaled { m: Complex64::new(self.m.re, 0.0), s: self.s }.normalized()
    }

    pub fn to_complex(self) -> Complex64 {
        self.m * self.s.exp()
    }

    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.norm().ln() + self.s
        }
    }

    /// Real part relative to `e^{ln_ref}`.
    pub fn re_relative(&self, ln_ref: f64) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.m.re * (self.s - ln_ref).exp()
        }
    }
}

/// `e^{iπt}`, exactly `±1` when `t` is within `1e-9` of an integer.
pub fn cis_pi(t: f64) -> Complex64 {
    let r = t.round();
    if (t - r).abs() <= 1e-9 * r.abs().max(1.0) {
        let even = (r.abs() % 2.0) == 0.0;
        return Complex64::new(if even { 1.0 } else { -1.0 }, 0.0);
    }
    let a = t.rem_euclid(2.0) * std::f64::consts::PI;
    Complex64::new(a.cos(), a.sin())
}

/// Principal logarithm with the negative real axis mapped to `+iπ`.
pub fn ln_p(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        return Complex64::new((-z.re).ln(), std::f64::consts::PI);
    }
    z.ln()
}

/// Principal square root with the negative real axis mapped to `+i`.
pub fn sqrt_p(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        return Complex64::new(0.0, (-z.re).sqrt());
    }
    z.sqrt()
}

impl std::ops::Mul for Scaled {
    type Output = Scaled;

    fn mul(self, o: Scaled) -> Scaled {
        Scaled { m: self.m * o.m, s: self.s + o.s }.normalized()
    }
}

impl std::ops::Add for Scaled {
    type Output = Scaled;

    fn add(self, o: Scaled) -> Scaled {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let s = self.s.max(o.s);
        let m = self.m * (self.s - s).exp() + o.m * (o.s - s).exp();
        Scaled { m, s }.normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_across_scales() {
        let a = Scaled::exp(Complex64::new(800.0, 0.0));
        let b = Scaled::exp(Complex64::new(799.0, 0.0));
        let c = a + b;
        assert!((c.ln_abs() - (800.0 + (1.0 + (-1f64).exp()).ln())).abs() < 1e-12);
    }

    #[test]
    fn phase_reduction() {
        assert_eq!(cis_pi(401.0), Complex64::new(-1.0, 0.0));
        assert_eq!(cis_pi(-2.0), Complex64::new(1.0, 0.0));
        assert!((cis_pi(0.5) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn branches() {
        let l = ln_p(Complex64::new(-2.0, -0.0));
        assert_eq!(l.im, std::f64::consts::PI);
        assert_eq!(sqrt_p(Complex64::new(-4.0, -0.0)), Complex64::new(0.0, 2.0));
    }
}
