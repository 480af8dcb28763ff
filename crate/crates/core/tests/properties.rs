use std::f64::consts::TAU;

use approx::assert_relative_eq;
use proptest::prelude::*;

use ribbonknot::*;

/// Star-shaped polygon around the origin: simple, with no crossings.
fn star_polygon() -> impl Strategy<Value = PolyDiagram> {
    (3usize..9).prop_flat_map(|n| {
        (proptest::collection::vec(0.2f64..0.8, n), proptest::collection::vec(0.5f64..2.0, n)).prop_filter_map(
            "degenerate polygon",
            move |(gaps, radii)| {
                let total: f64 = gaps.iter().sum();
                let mut angle = 0.0;
                let pts = gaps
                    .iter()
                    .zip(&radii)
                    .map(|(g, r)| {
                        angle += g / total * TAU;
                        Point2::new(r * angle.cos(), r * angle.sin())
                    })
                    .collect();
                PolyDiagram::polygon(pts).ok()
            },
        )
    })
}

fn with_folds() -> impl Strategy<Value = (PolyDiagram, FoldingInfo)> {
    star_polygon().prop_flat_map(|k| {
        let n = k.num_edges();
        proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
            let folds =
                k.fold_vertices().into_iter().map(|v| (v, if bits[v] { Fold::Under } else { Fold::Over })).collect();
            (k.clone(), FoldingInfo::new(folds))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn crease_length_matches_angle((k, f) in with_folds(), frac in 0.01f64..0.5) {
        let w = frac * k.shortest_edge();
        let r = build_ribbon(&k, w, &f).unwrap();
        for c in r.creases() {
            let expected = w / (c.theta / 2.0).cos();
            prop_assert!(((c.length() - expected) / expected).abs() < 1e-9);
            prop_assert!((c.left.dist(k.vertex(c.vertex)) - c.length() / 2.0).abs() < 1e-12 * expected.max(1.0));
        }
    }

    #[test]
    fn ribbonlength_is_scale_invariant(k in star_polygon(), w in 0.01f64..1.0, e in -20i32..20) {
        let s = 2f64.powi(e);
        let scaled = k.scaled(s).unwrap();
        prop_assert_eq!(ribbonlength(&scaled, s * w).unwrap(), ribbonlength(&k, w).unwrap());
        let t = 1.0 + (e as f64).abs() / 7.0;
        let scaled = k.scaled(t).unwrap();
        assert_relative_eq!(ribbonlength(&scaled, t * w).unwrap(), ribbonlength(&k, w).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn tiny_widths_are_allowed((k, f) in with_folds()) {
        let rep = check_allowed(&k, 1e-6 * k.shortest_edge(), &f).unwrap();
        prop_assert!(rep.allowed, "{:?}", rep.failures);
    }

    #[test]
    fn max_width_samples_are_monotone((k, f) in with_folds()) {
        let mw = max_width(&k, &f, 1e-7).unwrap();
        prop_assert!(mw.monotone);
        prop_assert!(mw.samples.iter().all(|s| s.1));
        let w = mw.width().unwrap();
        prop_assert!(check_allowed(&k, w, &f).unwrap().allowed);
        prop_assert!(!check_allowed(&k, mw.bracket.1, &f).unwrap().allowed);
        prop_assert!(mw.bracket.1 - mw.bracket.0 <= 1e-7);
    }

    #[test]
    fn linking_number_ignores_width((k, f) in with_folds(), a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let w = max_width(&k, &f, 1e-7).unwrap().width().unwrap();
        let x = ribbon_invariants(&k, a * w, &f).unwrap();
        let y = ribbon_invariants(&k, b * w, &f).unwrap();
        prop_assert_eq!(x.linking_numbers, y.linking_numbers);
    }

    #[test]
    fn reversal_flips_linking_number((k, f) in with_folds(), frac in 0.01f64..0.2) {
        let w = frac * k.shortest_edge();
        prop_assume!(check_allowed(&k, w, &f).unwrap().allowed);
        let lk = ribbon_invariants(&k, w, &f).unwrap().linking_numbers;
        let rev = k.reversed();
        let mirrored = ribbon_invariants(&rev, w, &f.for_reversed(&k, false)).unwrap().linking_numbers;
        let same = ribbon_invariants(&rev, w, &f.for_reversed(&k, true)).unwrap().linking_numbers;
        let mut neg: Vec<i64> = lk.iter().map(|x| -x).collect();
        let (mut lk, mut mirrored, mut same) = (lk, mirrored, same);
        for v in [&mut lk, &mut neg, &mut mirrored, &mut same] {
            v.sort();
        }
        prop_assert_eq!(mirrored, neg);
        prop_assert_eq!(same, lk);
    }

    #[test]
    fn band_type_matches_boundary_walk((k, f) in with_folds(), frac in 0.001f64..0.1) {
        let r = build_ribbon(&k, frac * k.shortest_edge(), &f).unwrap();
        let loops = r.boundary_components().len();
        let expected = if k.fold_vertices().len() % 2 == 1 { 1 } else { 2 };
        prop_assert_eq!(loops, expected);
        prop_assert_eq!(band_type(&k) == BandType::Moebius, loops == 1);
    }
}

#[test]
fn pentagram_snapshot() {
    let (k, f) = pentagram_trefoil(1.0).unwrap();
    assert_eq!(f.pattern_string(5), "UOOUO");
    let mw = max_width(&k, &f, 1e-10).unwrap();
    assert!(mw.monotone);
    let w = mw.width().unwrap();
    assert_relative_eq!(w, 1.3819660135, epsilon = 1e-8);
    assert_relative_eq!(ribbonlength(&k, w).unwrap(), 6.8819095909, epsilon = 1e-7);
    assert_eq!(knot_determinant(&k).unwrap(), Some(3));
    assert_eq!(band_type(&k), BandType::Moebius);
}

#[test]
fn family_determinants() {
    for n in 1..=5u32 {
        let (k, _) = grid_to_diagram(&twist_grid(n).unwrap());
        assert_eq!(knot_determinant(&k).unwrap(), Some(2 * n as u64 + 1), "twist {n}");
    }
    for p in [3u32, 5, 7] {
        let (k, _) = grid_to_diagram(&torus_grid(p, 2).unwrap());
        assert_eq!(knot_determinant(&k).unwrap(), Some(p as u64), "torus ({p}, 2)");
    }
}

#[test]
fn twist_and_torus_grids_are_allowed_at_unit_width() {
    let grids =
        (1..=5).map(|n| twist_grid(n).unwrap()).chain([(3, 2), (5, 3), (7, 4)].map(|(p, q)| torus_grid(p, q).unwrap()));
    for g in grids {
        let (k, f) = grid_to_diagram(&g);
        let rep = check_allowed(&k, 1.0, &f).unwrap();
        assert!(rep.allowed, "{g}\n{:?}", rep.failures);
        assert_eq!(ribbonlength(&k, 1.0).unwrap(), grid_ribbonlength(&g));
    }
}
