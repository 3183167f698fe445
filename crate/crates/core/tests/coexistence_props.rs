use std::f64::consts::PI;

use approx::assert_relative_eq;
use gpt_coexist::coexistence::{
    busch_planar_region_membership, coexist_oracle, coexistence_region, criterion_slack,
    unbiased_polygon,
};
use gpt_coexist::geometry::Vec2;
use gpt_coexist::theory::{
    affine_fit_residual, build_classical_theory, build_displaced_hexagon,
    build_regular_polygon_theory, build_square_bit, Effect, Theory,
};
use proptest::prelude::*;

/// A point inside the inscribed disk of every unbiased polygon.
fn inside(r: f64, a: f64) -> Vec2 {
    Vec2::from_angle(a) * (0.5 * r.min(0.999))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn criterion_matches_oracle(
        half in 2usize..6,
        (r1, a1, r2, a2) in (0.0..1.0f64, 0.0..6.3f64, 0.0..1.0f64, 0.0..6.3f64),
    ) {
        let n = 2 * half;
        let t = build_regular_polygon_theory(n).unwrap();
        let (e, f) = (inside(r1, a1), inside(r2, a2));
        let slack = criterion_slack(n, e, f).unwrap().slack;
        let v = coexist_oracle(&t, &Effect::unbiased(e), &Effect::unbiased(f)).unwrap();
        if slack.abs() > 1e-6 {
            prop_assert_eq!(slack > 0.0, v.coexistent, "n={} e={:?} f={:?}", n, e, f);
        }
        if v.coexistent {
            prop_assert!(v.witness_is_valid(&t, &Effect::unbiased(e), &Effect::unbiased(f), 1e-7));
        }
    }

    #[test]
    fn region_is_symmetric_under_negation(half in 2usize..7, r in 0.0..1.0f64, a in 0.0..6.3f64) {
        let n = 2 * half;
        let e = inside(r, a);
        let plus = coexistence_region(n, e).unwrap();
        let minus = coexistence_region(n, e * -1.0).unwrap();
        assert_relative_eq!(plus.area, minus.area, epsilon = 1e-12);
        for v in plus.region.vertices() {
            prop_assert!(minus.region.contains(*v, 1e-9));
        }
    }

    #[test]
    fn busch_coexistence_implies_polygon_criterion(
        (r1, a1, r2, a2) in (0.0..1.0f64, 0.0..6.3f64, 0.0..1.0f64, 0.0..6.3f64),
    ) {
        let (e, f) = (inside(r1, a1), inside(r2, a2));
        if busch_planar_region_membership(e, f).unwrap() {
            prop_assert!(criterion_slack(64, e, f).unwrap().slack >= -1e-9);
        }
    }
}

#[test]
fn region_shrinks_toward_boundary() {
    for n in [4, 6, 8, 10, 12] {
        let poly = unbiased_polygon(n).unwrap();
        let vertex = poly.vertices()[0];
        let edge = (poly.vertices()[0] + poly.vertices()[1]) * 0.5;
        for target in [vertex, edge] {
            let areas: Vec<f64> = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]
                .iter()
                .map(|&r| coexistence_region(n, target * r).unwrap().area)
                .collect();
            assert!(
                areas.windows(2).all(|w| w[1] <= w[0] + 1e-12),
                "n={n}: {areas:?}"
            );
        }
        assert!(coexistence_region(n, vertex).unwrap().area < 1e-12);
    }
}

#[test]
fn busch_pairs_pass_the_64_gon_criterion() {
    let mut checked = 0;
    for i in 0..50 {
        let e = Vec2::from_angle(0.37 * i as f64) * (0.01 * i as f64);
        let f = Vec2::from_angle(1.9 * i as f64 + 0.5) * (0.2 - 0.003 * i as f64);
        if busch_planar_region_membership(e, f).unwrap() {
            checked += 1;
            assert!(criterion_slack(64, e, f).unwrap().slack >= -1e-9);
        }
    }
    assert!(checked >= 25);
}

#[test]
fn circumradius_decreases_to_the_qubit_limit() {
    let radii: Vec<f64> = [4, 6, 8, 16, 64, 256]
        .iter()
        .map(|&n| {
            let p = unbiased_polygon(n).unwrap();
            let r = p.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert_relative_eq!(r, 0.5 / (PI / n as f64).cos(), epsilon = 1e-12);
            r
        })
        .collect();
    assert!(radii.windows(2).all(|w| w[1] < w[0]));
    assert!(radii[5] - 0.5 < 1e-4);
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn square_bit_is_affinely_the_square_polygon() {
    let sq = build_square_bit();
    let p4 = build_regular_polygon_theory(4).unwrap();
    let src: Vec<Vec<f64>> = sq
        .extremal_effects()
        .iter()
        .map(|e| e.coords().to_vec())
        .collect();
    let dst: Vec<Vec<f64>> = p4
        .extremal_effects()
        .iter()
        .map(|e| e.coords().to_vec())
        .collect();
    assert_eq!(src.len(), dst.len());
    let best = permutations(dst.len())
        .into_iter()
        .map(|perm| {
            let image: Vec<Vec<f64>> = perm.iter().map(|&i| dst[i].clone()).collect();
            affine_fit_residual(&src, &image).unwrap()
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    assert!(best.0 < 1e-9, "best residual {}", best.0);
    assert_eq!(best.1, 3);
}

fn theories() -> Vec<Theory> {
    let mut ts: Vec<Theory> = (3..=12)
        .map(|n| build_regular_polygon_theory(n).unwrap())
        .collect();
    ts.extend((2..=5).map(|n| build_classical_theory(n).unwrap()));
    ts.push(build_square_bit());
    ts.extend([0.1, 0.25, 0.4].map(|d| build_displaced_hexagon(d).unwrap()));
    ts
}

#[test]
fn complements_of_extremals_are_extremal() {
    for t in theories() {
        for e in t.extremal_effects() {
            let c = t.complement(e).unwrap();
            assert!(t.is_extremal(&c), "{}: complement of {e:?}", t.name());
        }
    }
}

#[test]
fn extremal_effects_coexist_only_on_their_parallelogram() {
    let t = build_regular_polygon_theory(6).unwrap();
    let e = t
        .nontrivial_extremal_effects()
        .find(|e| (e.coords()[2] - 0.5).abs() < 1e-12)
        .unwrap()
        .clone();
    let ebar = t.complement(&e).unwrap();
    for (s, r) in [(0.0, 0.0), (0.3, 0.7), (1.0, 1.0), (0.5, 0.1)] {
        let f = &e.scale(s) + &ebar.scale(r);
        assert!(coexist_oracle(&t, &e, &f).unwrap().coexistent);
    }
    let other = Effect::unbiased(e.planar().rotate(PI / 3.0));
    assert!(!coexist_oracle(&t, &e, &other).unwrap().coexistent);
}
