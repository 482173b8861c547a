//! Exact rational evaluation of `K_n(x; N, p, q)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::state::Shape;

/// Problem instance: the size `N` and the exact probability `p` (with `q = 1 − p`).
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub big_n: usize,
    pub p: BigRational,
    pub q: BigRational,
}

impl Params {
    pub fn new(big_n: usize, p: BigRational) -> Result<Self> {
        if big_n == 0 {
            return Err(Error::Domain("N must be positive".into()));
        }
        if !p.is_positive() || p >= BigRational::one() {
            return Err(Error::Domain(format!("p = {p} must lie in (0, 1)")));
        }
        let q = BigRational::one() - &p;
        Ok(Params { big_n, p, q })
    }

    /// Instance from a decimal or fractional `q` string such as `0.64894783` or `2/3`.
    pub fn from_q_str(big_n: usize, q: &str) -> Result<Self> {
        let q = parse_rational(q)?;
        Params::new(big_n, BigRational::one() - q)
    }

    pub fn eps(&self) -> f64 {
        1.0 / self.big_n as f64
    }

    /// The same instance with `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Params { big_n: self.big_n, p: self.q.clone(), q: self.p.clone() }
    }

    /// `(P, Q, D)` with `p = P/D` and `q = Q/D`.
    fn integer_pq(&self) -> (BigInt, BigInt, BigInt) {
        let denom = self.p.denom().lcm(self.q.denom());
        let pp = self.p.numer() * (&denom / self.p.denom());
        let qq = self.q.numer() * (&denom / self.q.denom());
        (pp, qq, denom)
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.big_n, ratio_to_f64(&self.p))
    }

    fn check_index(&self, what: &str, v: usize) -> Result<()> {
        if v > self.big_n {
            return Err(Error::Domain(format!("{what} = {v} outside [0, {}]", self.big_n)));
        }
        Ok(())
    }
}

/// Parses `0.125`, `-3`, `1e-3` style decimals and `a/b` fractions exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("cannot parse `{s}` as an exact rational"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Exact decimal rendering when the expansion terminates, e.g. `0.64894783`.
pub fn to_exact_decimal(r: &BigRational) -> Option<String> {
    let mut d = r.denom().clone();
    let mut k = 0usize;
    for f in [2u32, 5] {
        let f = BigInt::from(f);
        let mut c = 0;
        while (&d % &f).is_zero() {
            d /= &f;
            c += 1;
        }
        k = k.max(c);
    }
    if !d.is_one() {
        return None;
    }
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10u32), k));
    let digits = scaled.to_integer().abs().to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if k == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{digits:0>width$}", width = k + 1);
    let (a, b) = padded.split_at(padded.len() - k);
    Some(format!("{sign}{a}.{b}"))
}

/// Renders `r` with `digits` significant digits in scientific notation
/// (`-1.25000e3`), exact up to the final rounding.
pub fn format_sig(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let a = r.abs();
    let ten = BigRational::from_integer(BigInt::from(10u32));
    let mut e = (a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2;
    e = e.floor();
    let mut exp10 = e as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            BigRational::one() / num_traits::pow(ten.clone(), (-k) as usize)
        }
    };
    // normalise so that 1 <= a / 10^exp10 < 10
    while a >= pow(exp10 + 1) {
        exp10 += 1;
    }
    while a < pow(exp10) {
        exp10 -= 1;
    }
    let scaled = &a * pow(digits as i64 - 1 - exp10);
    let mut m = scaled.round().to_integer();
    if m.to_string().len() > digits {
        m /= BigInt::from(10u32);
        exp10 += 1;
    }
    let s = m.to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    let body = if s.len() > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s };
    format!("{sign}{body}e{exp10}")
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn pow_rat(r: &BigRational, e: usize) -> BigRational {
    num_traits::pow(r.clone(), e)
}

/// `K_n(x)` directly from the defining sum.
pub fn krawtchouk_sum(n: usize, x: usize, params: &Params) -> Result<BigRational> {
    params.check_index("n", n)?;
    params.check_index("x", x)?;
    let big_n = params.big_n;
    let (pp, qq, denom) = params.integer_pq();
    let minus_p = -pp;
    let mut acc = BigInt::zero();
    for k in 0..=n {
        let c = binomial(x, k) * binomial(big_n - x, n - k);
        if c.is_zero() {
            continue;
        }
        acc += c * num_traits::pow(qq.clone(), k) * num_traits::pow(minus_p.clone(), n - k);
    }
    Ok(BigRational::new(acc, num_traits::pow(denom, n)))
}

/// Generalised binomial `x(x−1)…(x−k+1)/k!` for real `x`.
pub fn binomial_real(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// `K_n(x)` for real `x` through the generalised binomials of the defining sum.
pub fn krawtchouk_real(n: usize, x: f64, params: &Params) -> Result<f64> {
    params.check_index("n", n)?;
    let (p, q) = (ratio_to_f64(&params.p), ratio_to_f64(&params.q));
    let big_n = params.big_n as f64;
    Ok((0..=n)
        .map(|k| {
            binomial_real(x, k) * binomial_real(big_n - x, n - k) * q.powi(k as i32) * (-p).powi((n - k) as i32)
        })
        .sum())
}

/// All of `K_n(x)` for `0 ≤ n, x ≤ N`, built from the three-term recurrence.
///
/// Writing `p = P/D` and `q = Q/D`, the row `n` is stored as the integers
/// `D^n K_n(x)`, so that the recurrence runs in integer arithmetic with exact
/// division by `n + 1`.
#[derive(Debug, Clone)]
pub struct ExactTable {
    params: Params,
    denom: BigInt,
    ln_denom: f64,
    rows: Vec<Vec<BigInt>>,
}

impl ExactTable {
    pub fn build(params: &Params) -> Self {
        let big_n = params.big_n;
        let (pp, qq, denom) = params.integer_pq();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(big_n + 1);
        rows.push(vec![BigInt::one(); big_n + 1]);
        // D K_1(x) = Q x − P (N − x)
        rows.push((0..=big_n).map(|x| &qq * x - &pp * (big_n - x)).collect());
        for n in 1..big_n {
            let next = step(&rows[n], &rows[n - 1], n, big_n, &pp, &qq, &denom);
            rows.push(next);
        }
        rows.truncate(big_n + 1);
        let ln_denom = ln_abs_int(&denom);
        ExactTable { params: params.clone(), denom, ln_denom, rows }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn big_n(&self) -> usize {
        self.params.big_n
    }

    pub fn get(&self, n: usize, x: usize) -> BigRational {
        BigRational::new(self.rows[n][x].clone(), num_traits::pow(self.denom.clone(), n))
    }

    /// The integer `D^n K_n(x)`.
    pub fn scaled(&self, n: usize, x: usize) -> &BigInt {
        &self.rows[n][x]
    }

    pub fn sign(&self, n: usize, x: usize) -> i32 {
        match self.rows[n][x].sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// `ln |K_n(x)|`, `-inf` at zeros.
    pub fn ln_abs(&self, n: usize, x: usize) -> f64 {
        ln_abs_int(&self.rows[n][x]) - n as f64 * self.ln_denom
    }

    pub fn value_f64(&self, n: usize, x: usize) -> f64 {
        self.sign(n, x) as f64 * self.ln_abs(n, x).exp()
    }

    /// One more recurrence step past the last row, i.e. the implied `K_{N+1}(x)`.
    pub fn beyond_last_row(&self) -> Vec<BigRational> {
        let big_n = self.big_n();
        let (pp, qq, _) = self.params.integer_pq();
        let prev = if big_n >= 1 { &self.rows[big_n - 1] } else { &self.rows[0] };
        let row = step(&self.rows[big_n], prev, big_n, big_n, &pp, &qq, &self.denom);
        let d = num_traits::pow(self.denom.clone(), big_n + 1);
        row.into_iter().map(|a| BigRational::new(a, d.clone())).collect()
    }
}

/// `A_{n+1} = −([P(N−n) + nQ − xD] A_n + PQ(N−n+1) A_{n−1}) / (n+1)`.
fn step(
    cur: &[BigInt],
    prev: &[BigInt],
    n: usize,
    big_n: usize,
    pp: &BigInt,
    qq: &BigInt,
    denom: &BigInt,
) -> Vec<BigInt> {
    let base = pp * (big_n - n) + qq * n;
    let pq = pp * qq * (big_n + 1 - n);
    let div = BigInt::from(n + 1);
    (0..cur.len())
        .map(|x| {
            let lin = &base - denom * x;
            let num = -(lin * &cur[x] + &pq * &prev[x]);
            debug_assert!((&num % &div).is_zero());
            num / &div
        })
        .collect()
}

/// `ln |v|` for a big integer, `-inf` for zero.
pub fn ln_abs_int(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return v.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (v.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Binomial weight `C(N, x) p^x q^{N−x}`.
pub fn weight(x: usize, params: &Params) -> Result<BigRational> {
    params.check_index("x", x)?;
    Ok(BigRational::from_integer(binomial(params.big_n, x))
        * pow_rat(&params.p, x)
        * pow_rat(&params.q, params.big_n - x))
}

/// `Σ_k K_i(k) K_j(k) w(k)` over `k = 0..N`.
pub fn orthogonality_sum(i: usize, j: usize, table: &ExactTable) -> Result<BigRational> {
    let params = table.params();
    params.check_index("i", i)?;
    params.check_index("j", j)?;
    let big_n = params.big_n;
    let (pp, qq, _) = params.integer_pq();
    let mut acc = BigInt::zero();
    for k in 0..=big_n {
        let w = binomial(big_n, k) * num_traits::pow(pp.clone(), k) * num_traits::pow(qq.clone(), big_n - k);
        acc += &table.rows[i][k] * &table.rows[j][k] * w;
    }
    Ok(BigRational::new(acc, num_traits::pow(table.denom.clone(), i + j + big_n)))
}

/// The expected norm `C(N, j) (pq)^j`.
pub fn orthogonality_norm(j: usize, params: &Params) -> BigRational {
    BigRational::from_integer(binomial(params.big_n, j)) * pow_rat(&(&params.p * &params.q), j)
}

/// `(−1)^n K_n(N − x; N, q, p)`, which equals `K_n(x; N, p, q)`.
pub fn symmetry_image(n: usize, x: usize, params: &Params) -> Result<BigRational> {
    params.check_index("x", x)?;
    let v = krawtchouk_sum(n, params.big_n - x, &params.swapped())?;
    Ok(if n % 2 == 1 { -v } else { v })
}

/// `ln C(N, n)` in floating point.
pub fn ln_binomial(big_n: usize, n: usize) -> f64 {
    let lf = |k: usize| crate::special::ln_gamma(k as f64 + 1.0).unwrap_or(0.0);
    lf(big_n) - lf(n) - lf(big_n - n)
}

/// `(−p)^n C(N, n) (1 − n/(pN))^m` in exact arithmetic.
pub fn lemma3_exact(m: usize, n: usize, params: &Params) -> Result<BigRational> {
    params.check_index("n", n)?;
    let big_n = BigRational::from_integer(params.big_n.into());
    let factor = BigRational::one() - BigRational::from_integer(n.into()) / (&params.p * big_n);
    Ok(BigRational::from_integer(binomial(params.big_n, n)) * pow_rat(&-params.p.clone(), n) * pow_rat(&factor, m))
}

/// The small-`x` estimate `(−p)^n C(N, n) (1 − n/(pN))^m`.
pub fn lemma3_value(m: usize, n: usize, params: &Params) -> Result<f64> {
    params.check_index("n", n)?;
    let p = ratio_to_f64(&params.p);
    let big_n = params.big_n as f64;
    let factor = 1.0 - n as f64 / (p * big_n);
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let ln_mag = n as f64 * p.ln() + ln_binomial(params.big_n, n);
    Ok(sign * ln_mag.exp() * factor.powi(m as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(n: usize) -> Params {
        Params::new(n, BigRational::new(1.into(), 2.into())).unwrap()
    }

    #[test]
    fn small_table() {
        let t = ExactTable::build(&half(2));
        assert!(t.get(1, 1).is_zero());
        assert_eq!(t.get(1, 0), BigRational::from_integer((-1).into()));
        assert_eq!(t.get(1, 2), BigRational::one());
    }

    #[test]
    fn extra_step_vanishes() {
        let t = ExactTable::build(&half(3));
        assert!(t.beyond_last_row().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn decimal_round_trip() {
        for s in ["0.64894783", "0.5", "0.001", "12", "-0.25"] {
            assert_eq!(to_exact_decimal(&parse_rational(s).unwrap()).unwrap(), s);
        }
        assert_eq!(parse_rational("1/3").unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(parse_rational("2.5e-1").unwrap(), BigRational::new(1.into(), 4.into()));
        assert!(parse_rational("0.x").is_err());
        assert!(to_exact_decimal(&BigRational::new(1.into(), 3.into())).is_none());
    }

    #[test]
    fn significant_digits() {
        let r = BigRational::new(2.into(), 3.into());
        assert_eq!(format_sig(&r, 5), "6.6667e-1");
        assert_eq!(format_sig(&BigRational::from_integer((-1000).into()), 3), "-1.00e3");
        assert_eq!(format_sig(&BigRational::new(999_999.into(), 1_000_000.into()), 3), "1.00e0");
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(0, BigRational::new(1.into(), 2.into())).is_err());
        assert!(Params::new(5, BigRational::one()).is_err());
        assert!(Params::from_q_str(5, "0.3").is_ok());
    }

    #[test]
    fn ln_abs_large() {
        let v = num_traits::pow(BigInt::from(3u32), 2000);
        assert!((ln_abs_int(&v) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
