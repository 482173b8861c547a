use krawtchouk::state::{corner_coords, ellipse_residual, u0, u_pm, y_pm};
use krawtchouk::{classify, ClassifierConfig, RegionTag, ScaledPoint, Shape};
use proptest::prelude::*;

const Q_FIG: f64 = 0.64894783;

fn sh(big_n: usize, p: f64) -> Shape {
    Shape::new(big_n, p)
}

#[test]
fn u0_values() {
    let s = sh(100, 0.3);
    assert_eq!(u0(1.0, &s).unwrap(), 0.0);
    assert!((u0(0.3, &s).unwrap() - 0.7).abs() < 1e-15);
    assert!((u0(0.5, &sh(100, 0.5)).unwrap() - 0.5).abs() < 1e-15);
    assert!(u0(0.0, &s).is_err());
}

#[test]
fn turning_curves_meet_axes() {
    let s = sh(100, 1.0 - Q_FIG);
    let (lo, hi) = y_pm(1.0, &s).unwrap();
    assert!((lo - s.q).abs() < 1e-15 && (hi - s.q).abs() < 1e-15);
    let (lo, hi) = y_pm(1e-12, &s).unwrap();
    assert!((lo - s.p).abs() < 1e-5 && (hi - s.p).abs() < 1e-5);
    assert!(y_pm(0.0, &s).is_err());
}

#[test]
fn turning_curves_lie_on_ellipse() {
    for p in [0.1, 1.0 - Q_FIG, 0.5, 0.8] {
        let s = sh(100, p);
        for k in 1..=200 {
            let z = k as f64 / 200.0;
            let (lo, hi) = y_pm(z, &s).unwrap();
            assert!(lo <= hi);
            for y in [lo, hi] {
                assert!(ellipse_residual(ScaledPoint { y, z }, &s).abs() < 1e-10, "p={p} z={z}");
            }
        }
        let (lo, hi) = y_pm(p, &s).unwrap();
        assert!(ellipse_residual(ScaledPoint { y: lo, z: p }, &s).abs() < 1e-12);
        assert!(ellipse_residual(ScaledPoint { y: hi, z: p }, &s).abs() < 1e-12);
    }
}

#[test]
fn ellipse_examples() {
    let p = 1.0 / 3.0;
    let s = sh(30, p);
    assert!(ellipse_residual(ScaledPoint { y: p, z: 0.0 }, &s).abs() < 1e-12);
    let c = ellipse_residual(ScaledPoint { y: 0.5, z: 0.5 }, &s);
    assert!((c + p * (1.0 - p)).abs() < 1e-15);
    let o = ellipse_residual(ScaledPoint { y: 0.0, z: 0.0 }, &s);
    assert!((o - 1.0 / 9.0).abs() < 1e-15);
}

#[test]
fn discriminant_sign_matches_ellipse() {
    let s = sh(100, 1.0 - Q_FIG);
    let mut compared = 0;
    for i in 0..200 {
        for k in 1..=200 {
            let pt = ScaledPoint { y: i as f64 / 199.0, z: k as f64 / 200.0 };
            let r = ellipse_residual(pt, &s);
            if r.abs() < 1e-12 {
                continue;
            }
            let roots = u_pm(pt, &s).unwrap();
            let real = roots.plus.im == 0.0;
            assert_eq!(real, r > 0.0, "{pt:?}");
            compared += 1;
        }
    }
    assert!(compared > 39_000);
}

#[test]
fn roots_coalesce_on_turning_curves() {
    let s = sh(100, 0.5);
    let r = u_pm(ScaledPoint { y: 0.0, z: 0.5 }, &s).unwrap();
    assert!((r.plus - (-0.5)).norm() < 1e-10 && (r.minus - (-0.5)).norm() < 1e-10);
    let r = u_pm(ScaledPoint { y: 1.0, z: 0.5 }, &s).unwrap();
    assert!((r.plus - 0.5).norm() < 1e-10 && (r.minus - 0.5).norm() < 1e-10);
    let s = sh(100, 0.25);
    let r = u_pm(ScaledPoint { y: 0.75, z: 1.0 }, &s).unwrap();
    assert!(r.plus.norm() < 1e-10 && r.minus.norm() < 1e-10);
}

#[test]
fn roots_near_turning_curves_general() {
    let s = sh(100, 1.0 - Q_FIG);
    for z in [0.1, 0.3, 0.6, 0.9] {
        let w = u0(z, &s).unwrap();
        let (lo, hi) = y_pm(z, &s).unwrap();
        let r = u_pm(ScaledPoint { y: hi, z }, &s).unwrap();
        assert!((r.plus - w).norm() < 1e-6 * w && (r.minus - w).norm() < 1e-6 * w);
        let r = u_pm(ScaledPoint { y: lo, z }, &s).unwrap();
        assert!((r.plus + w).norm() < 1e-6 * w && (r.minus + w).norm() < 1e-6 * w);
    }
}

#[test]
fn caption_u_for_figure_8() {
    let s = sh(100, 1.0 - 0.74894783);
    for x in [0, 3, 50, 100] {
        let u = corner_coords(x, 25, &s).u;
        assert!((u - 0.024265).abs() < 5e-6, "{u}");
    }
}

#[test]
fn corner_coordinate_zeros() {
    let s = sh(100, 0.25);
    assert_eq!(corner_coords(25, 10, &s).eta, 0.0);
    assert_eq!(corner_coords(75, 10, &s).xi, 0.0);
    assert_eq!(corner_coords(10, 93, &s).j, 7);
    let s = sh(100, 0.5);
    assert!(corner_coords(0, 50, &s).beta.abs() < 1e-12);
}

#[test]
fn classifier_examples() {
    let cfg = ClassifierConfig::default();
    let s = sh(100, 1.0 - Q_FIG);
    assert_eq!(classify(0, 2, &s, &cfg).tag, RegionTag::I);
    assert_eq!(classify(35, 2, &s, &cfg).tag, RegionTag::II);
    assert_eq!(classify(45, 50, &s, &cfg).tag, RegionTag::X);
    assert_eq!(classify(40, 98, &s, &cfg).tag, RegionTag::XI);
    assert_eq!(classify(65, 98, &s, &cfg).tag, RegionTag::XII);
    assert_eq!(classify(2, 10, &s, &cfg).tag, RegionTag::III);
    let id = classify(98, 10, &s, &cfg);
    assert!(id.mirrored);
    assert_eq!(id.tag, RegionTag::IV);
    assert_eq!(classify(2, 80, &s, &cfg).tag, RegionTag::V);

    let s = sh(100, 1.0 - 0.74894783);
    for x in 0..=cfg.x_small {
        assert_eq!(classify(x, 25, &s, &cfg).tag, RegionTag::VI, "x={x}");
    }
}

#[test]
fn every_tag_is_reachable() {
    let cfg = ClassifierConfig::default();
    let mut seen = std::collections::BTreeSet::new();
    for q in [Q_FIG, 1.0 - Q_FIG] {
        let s = sh(100, 1.0 - q);
        for n in 0..=100 {
            for x in 0..=100 {
                seen.insert(classify(x, n, &s, &cfg).tag);
            }
        }
    }
    assert_eq!(seen.len(), 12, "{seen:?}");
}

fn swap_corner(t: RegionTag) -> RegionTag {
    match t {
        RegionTag::III => RegionTag::IV,
        RegionTag::IV => RegionTag::III,
        t => t,
    }
}

proptest! {
    #[test]
    fn classify_is_deterministic(n in 0usize..=120, x in 0usize..=120, q in 0.2f64..0.8) {
        let big_n = 120;
        let s = sh(big_n, 1.0 - q);
        let cfg = ClassifierConfig::default();
        prop_assert_eq!(classify(x, n, &s, &cfg), classify(x, n, &s, &cfg));
    }

    #[test]
    fn mirror_is_an_involution(n in 0usize..=120, x in 0usize..=120, q in 0.2f64..0.8) {
        let big_n = 120;
        let s = sh(big_n, 1.0 - q);
        let cfg = ClassifierConfig::default();
        let pt = s.point(x as f64, n as f64);
        prop_assume!((pt.y - (s.p + (s.q - s.p) * pt.z)).abs() > 1e-9);
        let a = classify(x, n, &s, &cfg);
        let b = classify(big_n - x, n, &s.swapped(), &cfg);
        prop_assert_eq!(a.tag, swap_corner(b.tag));
        let edge_row = n <= cfg.n_small || big_n - n <= cfg.j_small;
        if !edge_row {
            prop_assert_ne!(a.mirrored, b.mirrored);
        }
    }

    #[test]
    fn root_product_is_u0_squared(y in 0.0f64..=1.0, z in 0.01f64..=1.0, q in 0.1f64..0.9) {
        let s = sh(100, 1.0 - q);
        let r = u_pm(ScaledPoint { y, z }, &s).unwrap();
        let w = u0(z, &s).unwrap();
        let prod = r.plus * r.minus;
        prop_assert!((prod.re - w * w).abs() <= 1e-12 * (w * w).max(1e-300) + 1e-15);
        prop_assert!(prod.im.abs() <= 1e-12 * (w * w) + 1e-15);
    }
}
