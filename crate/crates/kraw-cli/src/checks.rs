//! The acceptance suite: seven criteria, each made of named sub-checks.

use std::f64::consts::PI;
use std::ops::Add;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use krawtchouk::exact::{binomial, krawtchouk_sum, lemma3_exact, orthogonality_norm, orthogonality_sum, symmetry_image};
use krawtchouk::metric::{normalized_error, normalized_gap};
use krawtchouk::regions::{eval_region, eval_region_id, k4, k5, k7, k12};
use krawtchouk::scaled::{cis_pi, ln_p, Scaled};
use krawtchouk::special::{airy, gamma_real, hermite, lambda_j, lambda_j_complex, ln_gamma, pcf_d_real};
use krawtchouk::state::{corner_coords, u_pm, y_pm};
use krawtchouk::wkb::{eikonal_residual, lambda_pm, psi_pm, transport_residual, Branch};
use krawtchouk::{classify, ApproxValue, ClassifierConfig, ExactTable, Params, RegionId, RegionTag, ScaledPoint, Shape};

use crate::figures::FIGURES;

macro_rules! tolerances {
    ($($name:ident = $default:expr;)*) => {
        /// Pass thresholds of the suite.
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct Tolerances {
            $(pub $name: f64,)*
        }

        impl Default for Tolerances {
            fn default() -> Self {
                Tolerances { $($name: $default,)* }
            }
        }

        impl Tolerances {
            pub fn fields(&self) -> Vec<(&'static str, f64)> {
                vec![$((stringify!($name), self.$name),)*]
            }

            pub fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
                match name {
                    $(stringify!($name) => Some(&mut self.$name),)*
                    _ => None,
                }
            }
        }
    };
}

tolerances! {
    exact_seconds = 60.0;
    figure_seconds = 300.0;
    table400_seconds = 180.0;
    figure_tight = 0.05;
    figure_loose = 0.10;
    caption_u = 5e-6;
    convergence_ratio = 0.6;
    overlap_max = 0.15;
    identity_rel = 1e-12;
    eikonal = 1e-10;
    fd_order = 1.9;
    transport = 1e-4;
    pcf_hermite = 1e-10;
    stirling = 0.003;
    airy_decay = 0.01;
    airy_oscillation = 0.02;
    pcf_growth = 0.02;
    pcf_reflection = 0.02;
    lambda_residue = 1e-8;
    lambda_large_j = 0.05;
}

/// The two probabilities used by the probes, `q = 0.34894783` and `q = 0.64894783`.
const Q_LEFT: &str = "0.34894783";
const Q_RIGHT: &str = "0.64894783";

#[derive(Debug, Clone, PartialEq)]
pub struct SubCheck {
    pub key: String,
    pub passed: bool,
    pub detail: String,
}

impl SubCheck {
    fn new(key: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        SubCheck { key: key.into(), passed, detail: detail.into() }
    }

    /// Passes when `value <= limit`; NaN fails.
    fn at_most(key: impl Into<String>, what: &str, value: f64, limit: f64) -> Self {
        let passed = value <= limit;
        let op = if passed { "<=" } else { ">" };
        SubCheck::new(key, passed, format!("{what} {value:.4e} {op} {limit:.4e}"))
    }

    fn at_least(key: impl Into<String>, what: &str, value: f64, limit: f64) -> Self {
        let passed = value >= limit;
        let op = if passed { ">=" } else { "<" };
        SubCheck::new(key, passed, format!("{what} {value:.4e} {op} {limit:.4e}"))
    }

    fn timing(key: impl Into<String>, elapsed: Duration, limit: f64) -> Self {
        SubCheck::at_most(key, "seconds", elapsed.as_secs_f64(), limit)
    }
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<SubCheck>,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SubCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One summary line.
    pub fn line(&self) -> String {
        let n_fail = self.failures().count();
        format!(
            "{} criterion {} {}: {}/{} sub-checks pass ({:.1} s)",
            if n_fail == 0 { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks.len() - n_fail,
            self.checks.len(),
            self.elapsed.as_secs_f64()
        )
    }
}

pub const TITLES: [&str; 7] = [
    "exact oracle identities",
    "figure reproduction",
    "convergence order",
    "matching overlaps",
    "algebraic identities at integer x",
    "WKB residuals",
    "special-function anchors",
];

/// Runs criterion `id` (1 to 7).
pub fn run(id: u8, cfg: &ClassifierConfig, tol: &Tolerances) -> CriterionReport {
    let start = Instant::now();
    let checks = match id {
        1 => exact_identities(tol),
        2 => figures(cfg, tol),
        3 => convergence(cfg, tol),
        4 => overlaps(cfg, tol),
        5 => integer_identities(tol),
        6 => wkb_residuals(tol),
        7 => special_anchors(tol),
        _ => vec![SubCheck::new("unknown", false, format!("no criterion {id}"))],
    };
    let title = TITLES.get(id.wrapping_sub(1) as usize).copied().unwrap_or("unknown");
    CriterionReport { id, title, checks, elapsed: start.elapsed() }
}

pub fn run_all(cfg: &ClassifierConfig, tol: &Tolerances) -> Vec<CriterionReport> {
    (1..=7).map(|id| run(id, cfg, tol)).collect()
}

fn params(big_n: usize, q: &str) -> Params {
    Params::from_q_str(big_n, q).expect("probe parameters are valid")
}

fn pow(r: &BigRational, e: usize) -> BigRational {
    num_traits::pow(r.clone(), e)
}

fn exact_identities(tol: &Tolerances) -> Vec<SubCheck> {
    let start = Instant::now();
    let third = Params::new(1, BigRational::new(BigInt::one(), BigInt::from(3))).unwrap().p;
    let mut instances = Vec::new();
    for big_n in [10usize, 25, 40] {
        instances.push((format!("N={big_n},q={Q_RIGHT}"), params(big_n, Q_RIGHT)));
        instances.push((format!("N={big_n},p=1/3"), Params::new(big_n, third.clone()).unwrap()));
    }
    let mut out: Vec<SubCheck> = instances
        .par_iter()
        .flat_map_iter(|(label, par)| exact_instance(label, par))
        .collect();
    out.push(SubCheck::timing("exact-runtime", start.elapsed(), tol.exact_seconds));
    out
}

fn exact_instance(label: &str, par: &Params) -> Vec<SubCheck> {
    let big_n = par.big_n;
    let table = ExactTable::build(par);
    let all = || (0..=big_n).flat_map(move |n| (0..=big_n).map(move |x| (n, x)));
    let count = |f: &dyn Fn(usize, usize) -> bool| all().filter(|&(n, x)| !f(n, x)).count();

    let sum_bad = count(&|n, x| krawtchouk_sum(n, x, par).unwrap() == table.get(n, x));
    let sym_bad = count(&|n, x| symmetry_image(n, x, par).unwrap() == table.get(n, x));
    let mut orth_bad = 0;
    for i in 0..=big_n {
        for j in 0..=i {
            let want = if i == j { orthogonality_norm(j, par) } else { BigRational::zero() };
            if orthogonality_sum(i, j, &table).unwrap() != want {
                orth_bad += 1;
            }
        }
    }
    let minus_p = -par.p.clone();
    let mut boundary_bad = 0;
    for k in 0..=big_n {
        let c = BigRational::from_integer(binomial(big_n, k));
        boundary_bad += usize::from(table.get(0, k) != BigRational::one());
        boundary_bad += usize::from(table.get(k, 0) != &c * pow(&minus_p, k));
        boundary_bad += usize::from(table.get(k, big_n) != &c * pow(&par.q, k));
    }
    boundary_bad += table.beyond_last_row().iter().filter(|v| !v.is_zero()).count();
    let lemma_bad = (0..=big_n)
        .flat_map(|n| [0usize, 1].map(|m| (m, n)))
        .filter(|&(m, n)| lemma3_exact(m, n, par).unwrap() != table.get(n, m))
        .count();

    let mk = |what: &str, bad: usize, of: usize| {
        SubCheck::new(format!("{what}[{label}]"), bad == 0, format!("{bad} of {of} mismatches"))
    };
    let cells = (big_n + 1) * (big_n + 1);
    vec![
        mk("sum-vs-recurrence", sum_bad, cells),
        mk("orthogonality", orth_bad, (big_n + 1) * (big_n + 2) / 2),
        mk("symmetry", sym_bad, cells),
        mk("boundary", boundary_bad, 4 * (big_n + 1)),
        mk("lemma3", lemma_bad, 2 * (big_n + 1)),
    ]
}

/// Largest normalized error of the figure's formula over its in-region `x`,
/// with the worst abscissa and the number of points.
pub fn figure_error(fig: &crate::figures::Figure, cfg: &ClassifierConfig) -> (f64, usize, usize) {
    let par = fig.params();
    let table = ExactTable::build(&par);
    let sh = par.shape();
    let mut worst = (0.0f64, 0usize, 0usize);
    for x in 0..=fig.big_n {
        let id = classify(x, fig.n, &sh, cfg);
        if id.tag != fig.region {
            continue;
        }
        worst.2 += 1;
        let e = match eval_region_id(id, x, fig.n, &sh) {
            Ok(v) => normalized_error(&v, &table, fig.n, x),
            Err(_) => f64::INFINITY,
        };
        if e.is_nan() || e > worst.0 {
            worst.0 = e;
            worst.1 = x;
        }
    }
    worst
}

fn figures(cfg: &ClassifierConfig, tol: &Tolerances) -> Vec<SubCheck> {
    let start = Instant::now();
    let mut out: Vec<SubCheck> = FIGURES
        .par_iter()
        .map(|fig| {
            let (err, x, count) = figure_error(fig, cfg);
            let ceiling = if fig.id <= 8 { tol.figure_tight } else { tol.figure_loose };
            let passed = count > 0 && err <= ceiling;
            SubCheck::new(
                format!("fig{}", fig.id),
                passed,
                format!(
                    "region {}: {count} in-region points, max normalized error {err:.4} at x = {x} (limit {ceiling})",
                    fig.region
                ),
            )
        })
        .collect();
    let sh = FIGURES[5].params().shape();
    let u = corner_coords(0, FIGURES[5].n, &sh).u;
    out.push(SubCheck::at_most("fig8-caption-u", &format!("|u - 0.024265| with u = {u:.6}"), (u - 0.024265).abs(), tol.caption_u));
    out.push(SubCheck::timing("figure-runtime", start.elapsed(), tol.figure_seconds));
    out
}

/// Interior points `(y, z, region)` of the convergence probe, at `q = 0.64894783`.
pub const CONVERGENCE_POINTS: [(f64, f64, RegionTag); 7] = [
    (0.05, 0.1, RegionTag::III),
    (0.03, 0.15, RegionTag::III),
    (0.95, 0.1, RegionTag::IV),
    (0.9, 0.25, RegionTag::IV),
    (0.5, 0.5, RegionTag::X),
    (0.4, 0.6, RegionTag::X),
    (0.6, 0.3, RegionTag::X),
];

fn convergence(cfg: &ClassifierConfig, tol: &Tolerances) -> Vec<SubCheck> {
    let start = Instant::now();
    let t100 = ExactTable::build(&params(100, Q_RIGHT));
    let t400 = ExactTable::build(&params(400, Q_RIGHT));
    let build = start.elapsed();
    let err = |t: &ExactTable, y: f64, z: f64, tag: RegionTag| -> Option<f64> {
        let big_n = t.big_n() as f64;
        let (x, n) = ((y * big_n).round() as usize, (z * big_n).round() as usize);
        let sh = t.params().shape();
        let id = classify(x, n, &sh, cfg);
        (id.tag == tag).then(|| eval_region_id(id, x, n, &sh).map(|v| normalized_error(&v, t, n, x)).ok())?
    };
    let mut out: Vec<SubCheck> = CONVERGENCE_POINTS
        .iter()
        .map(|&(y, z, tag)| {
            let key = format!("convergence-{tag}(y={y},z={z})");
            match (err(&t100, y, z, tag), err(&t400, y, z, tag)) {
                (Some(a), Some(b)) => SubCheck::at_most(key, &format!("err400/err100 = {b:.3e}/{a:.3e} ="), b / a, tol.convergence_ratio),
                _ => SubCheck::new(key, false, format!("point is not classified {tag} at both sizes")),
            }
        })
        .collect();
    out.push(SubCheck::timing("table400-runtime", build, tol.table400_seconds));
    out
}

/// A family of probe points shared by two adjacent regions.
#[derive(Debug, Clone)]
pub struct OverlapProbe {
    pub name: &'static str,
    pub q: &'static str,
    pub a: RegionTag,
    pub b: RegionTag,
    kind: ProbeKind,
}

#[derive(Debug, Clone)]
enum ProbeKind {
    /// Points at `β = sign·β_max` on the Airy strip near each `z₀`.
    Airy { z0: &'static [f64], sign: f64 },
    /// Corner probe at `u = sign·corner_width`, `x = 0..=x_small`.
    Corner { sign: f64 },
    /// Column `x = x_small` at the given `z`.
    Column { z: &'static [f64] },
    /// Row `j = j_small + 1` with integer `x` where `|ξ| ≤ 2`.
    TopRow,
}

pub fn overlap_probes() -> Vec<OverlapProbe> {
    use ProbeKind::*;
    use RegionTag::*;
    const LOW: &[f64] = &[0.1, 0.15, 0.2, 0.25, 0.3];
    const MID: &[f64] = &[0.5, 0.55, 0.6, 0.65, 0.7];
    const UPPER: &[f64] = &[0.55, 0.6, 0.65, 0.7];
    let probe = |name, q, a, b, kind| OverlapProbe { name, q, a, b, kind };
    vec![
        probe("III-VIII", Q_LEFT, III, VIII, Airy { z0: LOW, sign: 1.0 }),
        probe("VIII-X", Q_LEFT, VIII, X, Airy { z0: LOW, sign: -1.0 }),
        probe("IX-X", Q_RIGHT, IX, X, Airy { z0: MID, sign: -1.0 }),
        probe("VII-IX", Q_RIGHT, VII, IX, Airy { z0: UPPER, sign: 1.0 }),
        probe("V-VI", Q_RIGHT, V, VI, Corner { sign: -1.0 }),
        probe("VI-III", Q_LEFT, VI, III, Corner { sign: 1.0 }),
        probe("VII-V", Q_RIGHT, VII, V, Column { z: &[0.6, 0.7, 0.8] }),
        probe("X-XII", Q_RIGHT, X, XII, TopRow),
    ]
}

impl OverlapProbe {
    /// The `(x, n)` probe points at size `N`.
    pub fn points(&self, sh: &Shape, cfg: &ClassifierConfig) -> Vec<(usize, usize)> {
        let big_n = sh.big_n;
        let nf = big_n as f64;
        let eps = sh.eps();
        match &self.kind {
            ProbeKind::Airy { z0, sign } => z0
                .iter()
                .filter_map(|&z0| {
                    let beta = sign * cfg.beta_max;
                    let lo = (0.97 * z0 * nf).round() as usize;
                    let hi = (1.03 * z0 * nf).round() as usize;
                    (lo.max(1)..=hi.min(big_n - 1))
                        .filter_map(|n| {
                            let (ym, _) = y_pm(n as f64 * eps, sh).ok()?;
                            let xb = (ym - beta * eps.powf(2.0 / 3.0)) * nf;
                            Some(((xb - xb.round()).abs(), xb.round(), n))
                        })
                        .filter(|&(_, x, _)| x >= 0.0 && x <= nf)
                        .min_by(|a, b| a.0.total_cmp(&b.0))
                        .map(|(_, x, n)| (x as usize, n))
                })
                .collect(),
            ProbeKind::Corner { sign } => {
                let u = sign * cfg.corner_width;
                let n = (nf * sh.p - u * (sh.p * sh.q * nf).sqrt()).round() as usize;
                (0..=cfg.x_small.min(big_n)).map(|x| (x, n)).collect()
            }
            ProbeKind::Column { z } => z.iter().map(|&z| (cfg.x_small, (z * nf).round() as usize)).collect(),
            ProbeKind::TopRow => {
                let n = big_n - (cfg.j_small + 1);
                let s = (2.0 * sh.p * sh.q * nf).sqrt();
                let lo = (nf * sh.q - 2.0 * s).ceil() as usize;
                let hi = ((nf * sh.q + 2.0 * s).floor() as usize).min(big_n);
                (lo..=hi).map(|x| (x, n)).collect()
            }
        }
    }

    /// Mean normalized gap between the two formulas over the probe family.
    pub fn mean_gap(&self, big_n: usize, cfg: &ClassifierConfig) -> f64 {
        let par = params(big_n, self.q);
        let sh = par.shape();
        let pts = self.points(&sh, cfg);
        let table = ExactTable::build(&par);
        let gaps: Vec<f64> = pts
            .iter()
            .map(|&(x, n)| {
                let ev = |tag| eval_region(tag, x, n, &sh).map(|v| ApproxValue::from_scaled(v, RegionId { tag, mirrored: false }));
                match (ev(self.a), ev(self.b)) {
                    (Ok(a), Ok(b)) => normalized_gap(&a, &b, &table, n, x),
                    _ => f64::INFINITY,
                }
            })
            .collect();
        if gaps.is_empty() {
            return f64::INFINITY;
        }
        gaps.iter().sum::<f64>() / gaps.len() as f64
    }
}

fn overlaps(cfg: &ClassifierConfig, tol: &Tolerances) -> Vec<SubCheck> {
    overlap_probes()
        .par_iter()
        .flat_map_iter(|probe| {
            let g1 = probe.mean_gap(100, cfg);
            let g2 = probe.mean_gap(200, cfg);
            [
                SubCheck::at_most(format!("overlap-{}", probe.name), "mean gap at N=100", g1, tol.overlap_max),
                SubCheck::new(
                    format!("overlap-{}-shrinks", probe.name),
                    g2 < g1,
                    format!("mean gap {g1:.4} at N=100, {g2:.4} at N=200"),
                ),
            ]
        })
        .collect()
}

/// `|a − b| / max(|a|, |b|)` computed in log space.
fn rel(a: Scaled, b: Scaled) -> f64 {
    let d = a.add(b.scale(Complex64::new(-1.0, 0.0)));
    if d.is_zero() {
        return 0.0;
    }
    (d.ln_abs() - a.ln_abs().max(b.ln_abs())).exp()
}

fn integer_identities(tol: &Tolerances) -> Vec<SubCheck> {
    let mut out = Vec::new();

    let cfg = ClassifierConfig::default();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (big_n, n) in [(40usize, 35usize), (100, 80), (100, 95)] {
        let sh = params(big_n, "0.74894783").shape();
        for x in 0..=big_n {
            let id = classify(x, n, &sh, &cfg);
            if id != (RegionId { tag: RegionTag::VII, mirrored: false }) {
                continue;
            }
            let pt = sh.point(x as f64, n as f64);
            worst = worst.max(rel(k7(pt, &sh).unwrap().re(), k4(pt, &sh).unwrap().re()));
            count += 1;
        }
    }
    let passed = count > 0 && worst <= tol.identity_rel;
    out.push(SubCheck::new(
        "k7-equals-re-kplus",
        passed,
        format!("max relative difference {worst:.4e} over {count} Region VII points (limit {:.1e})", tol.identity_rel),
    ));

    let big_n = 400usize;
    let bad = (0..=big_n).filter(|&x| cis_pi(x as f64).im != 0.0 || cis_pi((big_n - x) as f64).im != 0.0).count();
    out.push(SubCheck::new("integer-phases-real", bad == 0, format!("{bad} of {} integer phases with nonzero sine", big_n + 1)));

    let sh = params(100, "0.74894783").shape();
    let z = 0.8;
    let mut worst = 0.0f64;
    for x in 0..=6 {
        let got = k5(x as f64, z, &sh).unwrap();
        let eps = sh.eps();
        let phi0 = (z - 1.0) * (1.0 - z).ln() - z * z.ln() + z * sh.p.ln();
        let ln1 = x as f64 * ((z - sh.p) / sh.p).ln() + phi0 / eps + 0.5 * eps.ln() - 0.5 * (2.0 * PI * z * (1.0 - z)).ln();
        worst = worst.max(rel(got, Scaled::exp_pi(ln1, (80 + x) as f64)));
    }
    out.push(SubCheck::at_most("k5-second-term-zero", "max relative difference to the first term alone", worst, tol.identity_rel));

    let sh = params(20, "0.74894783").shape();
    let mut worst = 0.0f64;
    for j in [0usize, 1, 2, 3] {
        for x in 8..=20 {
            let s2 = (2.0 * sh.p * sh.q * sh.eps()).sqrt();
            let xi = (x as f64 * sh.eps() - sh.q) / s2;
            let got = k12(j, xi, &sh).unwrap();
            let shift = xi * (2.0 * sh.p * sh.q / sh.eps()).sqrt();
            let ln = (sh.p * sh.p.ln() + sh.q * sh.q.ln()) / sh.eps() + shift * (sh.q / sh.p).ln()
                - 0.5 * j as f64 * (sh.p * sh.q * sh.eps()).ln()
                + 0.5 * xi * xi;
            let sign = if (20 - x) % 2 == 0 { 1.0 } else { -1.0 };
            let d = pcf_d_real(j as f64, std::f64::consts::SQRT_2 * xi).unwrap();
            let want = sign * d / gamma_real(j as f64 + 1.0).unwrap();
            worst = worst.max(rel(got, Scaled { m: Complex64::new(want, 0.0), s: ln }.normalized()));
        }
    }
    out.push(SubCheck::at_most("k12-sine-term-zero", "max relative difference to the cosine term alone", worst, tol.identity_rel));

    let sh = params(100, Q_LEFT).shape();
    let eps = sh.eps();
    let mut worst = 0.0f64;
    for n in [5usize, 10, 20, 30] {
        let z = n as f64 * eps;
        let (ym, _) = y_pm(z, &sh).unwrap();
        let x = (ym / eps).floor();
        let beta = (ym - x * eps) / eps.powf(2.0 / 3.0);
        let lp = lambda_pm(Branch::Plus, beta, z, &sh).unwrap();
        let lm = lambda_pm(Branch::Minus, beta, z, &sh).unwrap();
        worst = worst.max((lp - 2.0).norm()).max(lm.norm());
    }
    out.push(SubCheck::at_most("lambda-at-integer-x", "max |lambda+ - 2|, |lambda-|", worst, tol.identity_rel));

    let mut worst = 0.0f64;
    for beta in [-1.3, -0.2, 0.37, 0.9, 2.5] {
        let lp = lambda_pm(Branch::Plus, beta, 0.3, &sh).unwrap();
        let lm = lambda_pm(Branch::Minus, beta, 0.3, &sh).unwrap();
        worst = worst.max(((lp - lm) / 2.0 - 1.0).norm());
    }
    out.push(SubCheck::at_most("lambda-half-difference", "max |(lambda+ - lambda-)/2 - 1|", worst, tol.identity_rel));
    out
}

fn wkb_residuals(tol: &Tolerances) -> Vec<SubCheck> {
    let sh = params(100, Q_RIGHT).shape();
    let grid = 200;
    let mut worst = 0.0f64;
    for i in 0..grid {
        for k in 0..grid {
            let pt = ScaledPoint { y: (i as f64 + 0.5) / grid as f64, z: (k as f64 + 0.5) / grid as f64 };
            let r = u_pm(pt, &sh).unwrap();
            worst = worst.max(eikonal_residual(r.plus, pt, &sh)).max(eikonal_residual(r.minus, pt, &sh));
        }
    }
    let mut out = vec![SubCheck::at_most("eikonal", "max relative residual on a 200x200 grid", worst, tol.eikonal)];

    let fd_points = [(0.05, 0.2), (0.1, 0.4), (0.45, 0.55), (0.4, 0.7), (0.95, 0.3), (0.05, 0.95)];
    let mut min_order = f64::INFINITY;
    for (y, z) in fd_points {
        for branch in [Branch::Plus, Branch::Minus] {
            let psi = |dz: f64| psi_pm(branch, ScaledPoint { y, z: z + dz }, &sh).unwrap();
            let ln_u = ln_p(krawtchouk::wkb::root(branch, ScaledPoint { y, z }, &sh).unwrap());
            let e = |h: f64| ((psi(h) - psi(-h)) / (2.0 * h) - ln_u).norm();
            let order = (e(2e-3) / e(1e-3)).log2();
            min_order = min_order.min(order);
        }
    }
    out.push(SubCheck::at_least("psi-z-order", "min observed order of dpsi/dz -> ln U", min_order, tol.fd_order));

    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 1..20 {
        for k in 1..20 {
            let pt = ScaledPoint { y: i as f64 / 20.0, z: k as f64 / 20.0 };
            let r = u_pm(pt, &sh).unwrap();
            let gap = (r.plus - r.minus).norm() / r.plus.norm().max(r.minus.norm());
            if gap < 0.05 {
                continue;
            }
            for branch in [Branch::Plus, Branch::Minus] {
                let u = if branch == Branch::Plus { r.plus } else { r.minus };
                if (u * u + sh.p * sh.q).norm() < 1e-3 * sh.p * sh.q {
                    continue;
                }
                if let Ok(v) = transport_residual(branch, pt, &sh, 1.5e-4 * pt.z.min(1.0 - pt.z)) {
                    worst = worst.max(v);
                    count += 1;
                }
            }
        }
    }
    out.push(SubCheck::at_most("transport", &format!("max residual relative to dominant term over {count} points"), worst, tol.transport));
    out
}

fn special_anchors(tol: &Tolerances) -> Vec<SubCheck> {
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for n in 0..=10usize {
        for z in [-4.0, -1.5, -0.3, 0.0, 0.7, 2.0, 5.0] {
            let d = pcf_d_real(n as f64, z).unwrap();
            let h = 2f64.powf(-(n as f64) / 2.0) * (-z * z / 4.0f64).exp() * hermite(n, z / std::f64::consts::SQRT_2);
            worst = worst.max((d - h).abs() / h.abs().max(1e-300).max(d.abs()));
        }
    }
    out.push(SubCheck::at_most("pcf-hermite", "max relative difference D_n vs Hermite form, n <= 10", worst, tol.pcf_hermite));

    let x = 30.0f64;
    let stirling = (0.5 * (2.0 * PI / x).ln() + x * x.ln() - x).exp();
    out.push(SubCheck::at_most("stirling", "|Gamma(30)/Stirling - 1|", (gamma_real(x).unwrap() / stirling - 1.0).abs(), tol.stirling));

    let x = 8.0f64;
    let decay = x.powf(-0.25) * (-2.0 / 3.0 * x.powf(1.5)).exp() / (2.0 * PI.sqrt());
    out.push(SubCheck::at_most("airy-decay", "|Ai(8)/asymptote - 1|", (airy(x).unwrap().ai / decay - 1.0).abs(), tol.airy_decay));
    let amp = x.powf(-0.25) / PI.sqrt();
    let osc = amp * (2.0 / 3.0 * x.powf(1.5) + PI / 4.0).sin();
    out.push(SubCheck::at_most(
        "airy-oscillation",
        "|Ai(-8) - asymptote| / amplitude",
        (airy(-x).unwrap().ai - osc).abs() / amp,
        tol.airy_oscillation,
    ));

    let (nu, u) = (3.5f64, 9.0f64);
    let growth = (-u * u / 4.0).exp() * u.powf(nu);
    out.push(SubCheck::at_most("pcf-growth", "|D_3.5(9)/asymptote - 1|", (pcf_d_real(nu, u).unwrap() / growth - 1.0).abs(), tol.pcf_growth));

    let (nu, u) = (1.5f64, 9.0f64);
    let a = (-u * u / 4.0).exp() * u.powf(nu) * (PI * nu).cos();
    let b = -(2.0 / PI).sqrt() * nu * ln_gamma(nu).unwrap().exp() * (PI * nu).sin() * u.powf(-nu - 1.0) * (u * u / 4.0).exp();
    out.push(SubCheck::at_most(
        "pcf-reflection",
        "|D_1.5(-9) - two-term form| / dominant term",
        (pcf_d_real(nu, -u).unwrap() - a - b).abs() / a.abs().max(b.abs()),
        tol.pcf_reflection,
    ));

    let mut worst = 0.0f64;
    for j in 0..=6usize {
        for k in -12..=12 {
            let v = lambda_j_complex(j, k as f64 * 0.25).unwrap();
            worst = worst.max(v.im.abs() / (v.norm() + 1e-300));
        }
    }
    out.push(SubCheck::at_most("lambda-real", "max |Im Lambda_j| / |Lambda_j|, j <= 6, |xi| <= 3", worst, tol.lambda_residue));

    let j = 25usize;
    let jf = j as f64;
    let amp = (2.0 / jf).sqrt() * (jf / 2.0 * (1.0 - jf.ln())).exp();
    let mut worst = 0.0f64;
    for k in 1..=10 {
        let xi = k as f64 * 0.1;
        let form = amp * ((2.0 * jf).sqrt() * xi - jf * PI / 2.0).sin();
        worst = worst.max((lambda_j(j, xi).unwrap() - form).abs() / amp);
    }
    out.push(SubCheck::at_most("lambda-large-j", "max |Lambda_25 - large-j form| / amplitude, xi in [0.1, 1]", worst, tol.lambda_large_j));
    out
}
