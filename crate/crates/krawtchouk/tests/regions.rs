use std::ops::Add;
use krawtchouk::exact::ln_binomial;
use krawtchouk::metric::{normalized_error, window_ln_max};
use krawtchouk::regions::{eval_region, k1, k10, k11, k12, k2, k5, k6, k7, k8, k9};
use krawtchouk::scaled::Scaled;
use krawtchouk::special::airy_ai;
use krawtchouk::state::{corner_coords, u0, y_pm};
use krawtchouk::wkb::{k_pm, psi0, theta, Branch};
use krawtchouk::{approx, classify, ApproxValue, ClassifierConfig, ExactTable, Params, RegionId, RegionTag, Shape};
use num_complex::Complex64;
use proptest::prelude::*;

const Q_FIG3: &str = "0.64894783";
const Q_FIG5: &str = "0.34894783";
const Q_FIG7: &str = "0.74894783";

fn setup(big_n: usize, q: &str) -> (Shape, ExactTable) {
    let params = Params::from_q_str(big_n, q).unwrap();
    (params.shape(), ExactTable::build(&params))
}

fn direct(v: Scaled, tag: RegionTag) -> ApproxValue {
    ApproxValue::from_scaled(v, RegionId { tag, mirrored: false })
}

fn err_at(tag: RegionTag, x: usize, n: usize, sh: &Shape, table: &ExactTable) -> f64 {
    let v = eval_region(tag, x, n, sh).unwrap();
    normalized_error(&direct(v, tag), table, n, x)
}

/// Largest error of the classified formula over the points of row `n` the
/// classifier assigns to `tag`, and how many there were.
fn row_error(tag: RegionTag, n: usize, sh: &Shape, table: &ExactTable) -> (f64, usize) {
    let cfg = ClassifierConfig::default();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for x in 0..=sh.big_n {
        let id = classify(x, n, sh, &cfg);
        if id.tag != tag {
            continue;
        }
        let a = approx(x, n, sh, &cfg).unwrap();
        worst = worst.max(normalized_error(&a, table, n, x));
        count += 1;
    }
    (worst, count)
}

fn gap(a: Scaled, b: Scaled, ln_ref: f64) -> f64 {
    (a.re_relative(ln_ref) - b.re_relative(ln_ref)).abs()
}

fn relative(v: Scaled, ln_ref: f64) -> Complex64 {
    v.m * (v.s - ln_ref).exp()
}

#[test]
fn k1_low_degrees() {
    let (sh, table) = setup(100, Q_FIG3);
    assert_eq!(k1(0, 0.3, &sh).re_relative(0.0), 1.0);
    for x in [0usize, 17, 35, 36, 99] {
        let v = k1(1, x as f64 * sh.eps(), &sh).re_relative(0.0);
        assert!((v - table.value_f64(1, x)).abs() < 1e-11, "x={x}");
    }
}

#[test]
fn k1_far_from_the_hermite_corner() {
    let (sh, table) = setup(100, Q_FIG3);
    let mut checked = 0;
    for x in 0..=100 {
        if (x as f64 * sh.eps() - sh.p).abs() < 0.25 {
            continue;
        }
        let e = err_at(RegionTag::I, x, 2, &sh, &table);
        assert!(e <= 0.05, "x={x}: {e}");
        checked += 1;
    }
    assert!(checked > 40);
}

#[test]
fn k2_trivial_values() {
    let sh = Shape::new(100, 0.25);
    assert!((k2(0, 1.7, &sh).re_relative(0.0) - 1.0).abs() < 1e-14);
    assert!(k2(1, 0.0, &sh).is_zero());
    let table = ExactTable::build(&Params::from_q_str(100, "0.75").unwrap());
    assert_eq!(table.value_f64(1, 25), 0.0);
}

#[test]
fn k2_second_degree_defect_is_linear() {
    let (sh, table) = setup(100, Q_FIG3);
    let s2 = (2.0 * sh.p * sh.q * sh.eps()).sqrt();
    let np = sh.big_n as f64 * sh.p;
    for x in 25..=45 {
        let eta = (x as f64 * sh.eps() - sh.p) / s2;
        let v = k2(2, eta, &sh).re_relative(0.0);
        let defect = table.value_f64(2, x) - v;
        let expect = 0.5 * (sh.p - sh.q) * (x as f64 - np);
        assert!((defect - expect).abs() < 1e-9, "x={x}: {defect} vs {expect}");
    }
}

#[test]
fn wkb_outside_the_ellipse() {
    let (sh, table) = setup(100, Q_FIG5);
    let (e3, c3) = row_error(RegionTag::III, 10, &sh, &table);
    assert!(c3 > 5 && e3 <= 0.05, "III: {e3} over {c3}");
    let (e4, c4) = row_error(RegionTag::IV, 10, &sh, &table);
    assert!(c4 > 5 && e4 <= 0.05, "IV: {e4} over {c4}");

    let cfg = ClassifierConfig::default();
    for x in 0..=100 {
        if classify(x, 10, &sh, &cfg).tag == RegionTag::III {
            let v = direct(eval_region(RegionTag::III, x, 10, &sh).unwrap(), RegionTag::III);
            assert_eq!(v.sign(), table.sign(10, x), "x={x}");
        }
    }
}

#[test]
fn k5_integer_abscissae_and_first_column() {
    let (sh, table) = setup(100, Q_FIG7);
    for x in 0..=8 {
        let e = err_at(RegionTag::V, x, 80, &sh, &table);
        assert!(e <= 0.05, "x={x}: {e}");
        assert_eq!(k5(x as f64, 0.8, &sh).unwrap().m.im, 0.0);
    }
    let (sh, _) = setup(200, Q_FIG7);
    let mut n = (sh.p * 200.0).ceil() as usize + 1;
    while n <= 192 {
        let v = k5(0.0, n as f64 * sh.eps(), &sh).unwrap();
        let ln_ref = ln_binomial(200, n) + n as f64 * sh.p.ln();
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        assert!((v.re_relative(ln_ref) - sign).abs() <= 0.02, "n={n}");
        n += 7;
    }
}

#[test]
fn k6_corner() {
    let (sh, table) = setup(100, Q_FIG7);
    for x in 0..=4 {
        let e = err_at(RegionTag::VI, x, 25, &sh, &table);
        assert!(e <= 0.05, "x={x}: {e}");
    }
    for n in 16..=33 {
        let u = corner_coords(0, n, &sh).u;
        let v = k6(0.0, u, &sh).unwrap();
        let ln_ref = ln_binomial(100, n) + n as f64 * sh.p.ln();
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let d = (v.re_relative(ln_ref) - sign).abs();
        let limit = if u.abs() < 0.1 { 0.02 } else { 0.05 };
        assert!(u.abs() > 2.0 || d <= limit, "n={n}, u={u}: {d}");
    }
}

/// At `u = 3` the turning curve sits `u²/4` columns from the axis, so the
/// outer solution only exists for `x ≤ 2`.
fn corner_gap_at_u3(big_n: usize, x: usize) -> f64 {
    let sh = Params::from_q_str(big_n, Q_FIG7).unwrap().shape();
    let s = (sh.p * sh.q * big_n as f64).sqrt();
    let n = (big_n as f64 * sh.p - 3.0 * s).round();
    let u = (big_n as f64 * sh.p - n) / s;
    let a = k6(x as f64, u, &sh).unwrap();
    let b = k_pm(Branch::Minus, sh.point(x as f64, n), &sh).unwrap();
    gap(a, b, b.ln_abs())
}

#[test]
fn k6_meets_outer_solution() {
    for x in 0..=1 {
        let coarse = corner_gap_at_u3(1_000, x);
        let fine = corner_gap_at_u3(100_000, x);
        assert!(fine <= 0.10 && fine < coarse, "x={x}: {coarse} -> {fine}");
    }
}

#[test]
fn k7_is_plus_branch_at_integers() {
    let sh = Params::from_q_str(40, Q_FIG7).unwrap().shape();
    for x in 1..10 {
        let pt = sh.point(x as f64, 35.0);
        let a = k7(pt, &sh).unwrap().re();
        let b = k_pm(Branch::Plus, pt, &sh).unwrap().re();
        let ln_ref = b.ln_abs();
        assert!(gap(a, b, ln_ref) <= 1e-12, "x={x}");
    }
}

#[test]
fn k7_figure_row_and_overlap_with_k5() {
    let (sh, table) = setup(40, Q_FIG7);
    let (e, c) = row_error(RegionTag::VII, 35, &sh, &table);
    assert!(c > 0 && e <= 0.08, "{e} over {c}");

    let x = ClassifierConfig::default().x_small;
    let overlap = |big_n: usize, z: f64| {
        let (sh, table) = setup(big_n, Q_FIG3);
        let n = (z * big_n as f64) as usize;
        let pt = sh.point(x as f64, n as f64);
        gap(k7(pt, &sh).unwrap(), k5(x as f64, pt.z, &sh).unwrap(), window_ln_max(&table, n, x))
    };
    for z in [0.6, 0.7, 0.8] {
        let (coarse, fine) = (overlap(100, z), overlap(200, z));
        assert!(coarse <= 0.15 && fine <= 0.10 && fine < coarse, "z={z}: {coarse} -> {fine}");
    }
}

#[test]
fn k8_figure_row_and_turning_point() {
    let (sh, table) = setup(100, Q_FIG5);
    let (e, c) = row_error(RegionTag::VIII, 10, &sh, &table);
    assert!(c > 0 && e <= 0.08, "{e} over {c}");

    let z = 0.2;
    let eps = sh.eps();
    let th = theta(z, &sh).unwrap();
    let u = u0(z, &sh).unwrap();
    let ai0 = 1.0 / (3f64.powf(2.0 / 3.0) * 1.354_117_939_426_400_4);
    assert!((airy_ai(0.0).unwrap() - ai0).abs() < 1e-15);
    let w = psi0(z, &sh).unwrap() / eps;
    let expect = (w.re.exp() * w.im.cos()) * eps.powf(1.0 / 3.0) * ai0 * th.powf(-1.0 / 3.0) / (z * u).sqrt();
    let got = k8(0.0, z, &sh).unwrap().re_relative(0.0);
    assert!((got / expect - 1.0).abs() < 1e-9, "{got} vs {expect}");
}

fn integer_layer_point(sh: &Shape, z: f64, beta: f64) -> (f64, f64) {
    let eps = sh.eps();
    let ym = y_pm(z, sh).unwrap().0;
    let x = ((ym - beta * eps.powf(2.0 / 3.0)) / eps).round();
    (x, (ym - x * eps) / eps.powf(2.0 / 3.0))
}

/// Gap between an Airy layer formula at `β ≈ ±2` and its neighbour, relative
/// to the neighbour's size, on the row `z`.
fn airy_overlap(big_n: usize, z: f64, beta: f64) -> f64 {
    let sh = Params::from_q_str(big_n, Q_FIG5).unwrap().shape();
    let n = (z * big_n as f64).round();
    let z = n * sh.eps();
    let (x, beta) = integer_layer_point(&sh, z, beta);
    let pt = sh.point(x, n);
    if z < sh.p {
        let outer = k_pm(Branch::Minus, pt, &sh).unwrap();
        return gap(k8(beta, z, &sh).unwrap(), outer, outer.ln_abs());
    }
    let (other, scale) = if beta < 0.0 {
        (k10(pt, &sh).unwrap(), k_pm(Branch::Plus, pt, &sh).unwrap().ln_abs() + 2f64.ln())
    } else {
        let v = k7(pt, &sh).unwrap();
        (v, v.ln_abs())
    };
    gap(k9(beta, z, &sh).unwrap(), other, scale)
}

#[test]
fn airy_layers_match_neighbours_at_large_n() {
    let g = airy_overlap(1_000_000, 0.2, 2.0);
    assert!(g <= 0.10, "k8 vs k3: {g}");
    for beta in [-2.0, 2.0] {
        let coarse = airy_overlap(1_000_000, 0.8, beta);
        let fine = airy_overlap(100_000_000, 0.8, beta);
        assert!(fine <= 0.10 && fine < coarse, "k9 at beta {beta}: {coarse} -> {fine}");
    }
}

#[test]
fn airy_layer_figure_row() {
    let (sh, table) = setup(50, Q_FIG7);
    let (e, c) = row_error(RegionTag::IX, 40, &sh, &table);
    assert!(c > 0 && e <= 0.08, "{e} over {c}");
}

#[test]
fn k10_is_real_inside_the_ellipse() {
    let sh = Params::from_q_str(100, Q_FIG3).unwrap().shape();
    let cfg = ClassifierConfig::default();
    let mut checked = 0;
    for n in 5..96 {
        for x in 0..=100 {
            if classify(x, n, &sh, &cfg).tag == RegionTag::X {
                let pt = sh.point(x as f64 + 0.37, n as f64 + 0.21);
                let v = direct(k10(pt, &sh).unwrap(), RegionTag::X);
                assert!(v.im_residue <= 1e-8, "({x},{n}): {}", v.im_residue);
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn k10_figure_row_and_hermite_corner() {
    let (sh, table) = setup(50, Q_FIG7);
    let (e, c) = row_error(RegionTag::X, 40, &sh, &table);
    assert!(c > 0 && e <= 0.10, "{e} over {c}");

    let coarse = hermite_corner_gap(1_000_000, 100);
    let fine = hermite_corner_gap(10_000_000, 200);
    assert!(fine <= 0.10 && fine < coarse, "{coarse} -> {fine}");
}

/// Largest gap between `k10` and the large-degree Hermite asymptote
/// `exp{η²/2 + n/2 [1 + ln(pq/(εn))]} cos(√(2n)η − nπ/2) / √(nπ)`,
/// relative to its envelope, over 61 columns around `Np`.
fn hermite_corner_gap(big_n: usize, n: usize) -> f64 {
    use std::f64::consts::PI;
    let sh = Params::from_q_str(big_n, Q_FIG3).unwrap().shape();
    let s2 = (2.0 * sh.p * sh.q * sh.eps()).sqrt();
    let nf = n as f64;
    let x0 = (big_n as f64 * sh.p).round();
    let mut worst: f64 = 0.0;
    for dx in -30..=30 {
        let x = x0 + dx as f64;
        let eta = (x * sh.eps() - sh.p) / s2;
        let env = 0.5 * eta * eta + 0.5 * nf * (1.0 + (sh.p * sh.q / (sh.eps() * nf)).ln()) - 0.5 * (nf * PI).ln();
        let herm = ((2.0 * nf).sqrt() * eta - nf * PI / 2.0).cos();
        worst = worst.max((k10(sh.point(x, nf), &sh).unwrap().re_relative(env) - herm).abs());
    }
    worst
}

#[test]
fn k11_row_and_last_column() {
    let (sh, table) = setup(20, Q_FIG7);
    let (e, c) = row_error(RegionTag::XI, 19, &sh, &table);
    assert!(c > 0 && e <= 0.10, "{e} over {c}");

    for big_n in [20, 50, 100] {
        let (sh, _) = setup(big_n, Q_FIG7);
        let v = k11(0, 1.0, &sh).unwrap();
        let exact = big_n as f64 * sh.q.ln();
        assert!((v.re_relative(exact) - 1.0).abs() <= 0.05, "N={big_n}");
    }
    let (sh, table) = setup(20, Q_FIG7);
    for x in 0..17 {
        let v = k11(2, x as f64 * sh.eps(), &sh).unwrap();
        let ln_ref = window_ln_max(&table, 18, x);
        let first = (ln_binomial(20, 2) + 18.0 * sh.p.ln() + x as f64 * (sh.q / sh.p).ln()
            + 2.0 * (1.0 - x as f64 * sh.eps() / sh.q).abs().ln()
            - ln_ref)
            .exp()
            * if x % 2 == 0 { 1.0 } else { -1.0 };
        assert!((v.re_relative(ln_ref) - first).abs() < 1e-10, "x={x}");
    }
}

#[test]
fn k12_corner_row() {
    let (sh, table) = setup(20, Q_FIG7);
    let (e, c) = row_error(RegionTag::XII, 20, &sh, &table);
    assert!(c > 0 && e <= 0.10, "{e} over {c}");
    let s2 = (2.0 * sh.p * sh.q * sh.eps()).sqrt();
    for x in 13..=17 {
        let xi = (x as f64 * sh.eps() - sh.q) / s2;
        assert_eq!(k12(0, xi, &sh).unwrap().m.im, 0.0);
    }
}

#[test]
fn first_column_of_the_dispatcher() {
    let (sh, _) = setup(100, Q_FIG3);
    let cfg = ClassifierConfig::default();
    for n in (cfg.n_small + 1)..(100 - cfg.j_small) {
        if corner_coords(0, n, &sh).u.abs() > 2.0 && classify(0, n, &sh, &cfg).tag == RegionTag::VI {
            continue;
        }
        let a = approx(0, n, &sh, &cfg).unwrap();
        let ln_ref = ln_binomial(100, n) + n as f64 * sh.p.ln();
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let d = (a.relative_to(ln_ref) - sign).abs();
        assert!(d <= 0.05, "n={n} ({:?}): {d}", a.region);
    }
}

#[test]
fn full_grid_sanity() {
    let (sh, table) = setup(100, Q_FIG3);
    let cfg = ClassifierConfig::default();
    let mut good = 0;
    let mut worst_residue: f64 = 0.0;
    for n in 0..=100 {
        for x in 0..=100 {
            let a = approx(x, n, &sh, &cfg).unwrap();
            worst_residue = worst_residue.max(a.im_residue);
            if normalized_error(&a, &table, n, x) <= 0.10 {
                good += 1;
            }
        }
    }
    let share = good as f64 / (101.0 * 101.0);
    assert!(share >= 0.95, "{share}");
    assert!(worst_residue <= 1e-6, "{worst_residue}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mirror_identity(x in 0usize..=80, n in 0usize..=80, q in 0.2f64..0.8) {
        let sh = Shape::new(80, 1.0 - q);
        let pt = sh.point(x as f64, n as f64);
        prop_assume!((pt.y - (sh.p + (sh.q - sh.p) * pt.z)).abs() > 1e-9);
        let cfg = ClassifierConfig::default();
        prop_assume!(80 - n > cfg.j_small);
        let a = approx(x, n, &sh, &cfg);
        let b = approx(80 - x, n, &sh.swapped(), &cfg);
        prop_assume!(a.is_ok() && b.is_ok());
        let (a, b) = (a.unwrap(), b.unwrap());
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let ln_ref = a.ln_scale.max(b.ln_scale);
        prop_assert!((a.relative_to(ln_ref) - sign * b.relative_to(ln_ref)).abs() <= 1e-10);
    }

    #[test]
    fn integer_points_are_real(x in 0usize..=60, n in 0usize..=60, q in 0.15f64..0.85) {
        let sh = Shape::new(60, 1.0 - q);
        let a = approx(x, n, &sh, &ClassifierConfig::default()).unwrap();
        prop_assert!(a.im_residue <= 1e-6, "{:?}", a);
    }

    #[test]
    fn k7_and_plus_branch_differ_off_integers(x in 1.1f64..5.9, q in 0.6f64..0.8) {
        let sh = Shape::new(40, 1.0 - q);
        prop_assume!((x - x.round()).abs() > 0.05);
        let pt = sh.point(x, 35.0);
        let e = Complex64::new(0.0, 2.0 * std::f64::consts::PI * x).exp();
        let plus = k_pm(Branch::Plus, pt, &sh).unwrap();
        let minus = k_pm(Branch::Minus, pt, &sh).unwrap();
        let built = plus.scale((e + 1.0) / 2.0).add(minus.scale(e - 1.0));
        let v = k7(pt, &sh).unwrap();
        let ln_ref = v.ln_abs();
        prop_assert!((relative(built, ln_ref) - relative(v, ln_ref)).norm() <= 1e-9);
    }
}
