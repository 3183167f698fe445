//! End-to-end checks of the library against known results: extremal-effect
//! tables, the criterion/oracle equivalence, vanishing coexistence at
//! extremal effects, the reflecting-hyperplane characterization, the qubit
//! limit, classical coexistence, edge structure and determinism.
//!
//! Every check is deterministic for fixed [`VerifyOptions`]; reports carry
//! no timings.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::coexistence::{
    coexist_oracle, coexistence_region, coexistence_volume_fraction, criterion_slack, ellipse_area,
    in_extremal_coexistence_set, lower_set_slice, quantum_limit_gap, sample_effect,
    unbiased_polygon, CoexistenceVerdict,
};
use crate::error::{Error, Result};
use crate::geometry::{Vec2, DEDUP_TOL};
use crate::theory::{
    build_classical_theory, build_displaced_hexagon, build_regular_polygon_theory,
    build_square_bit, closed_form_extremals, displaced_hexagon_e0, is_edge,
    is_state_space_point_symmetric, probability_table, square_bit_labeled_effects, Effect, Theory,
    SQUARE_BIT_TABLE,
};

/// Names accepted by [`run_check`], in report order.
pub const CHECK_NAMES: [&str; 10] = [
    "table2",
    "table1",
    "criterion-oracle",
    "extremal-vanishing",
    "parallelogram",
    "prop2",
    "quantum-limit",
    "classical",
    "edge-lemmas",
    "determinism",
];

/// Slack below which a criterion verdict is in the boundary band.
pub const BOUNDARY_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Monte Carlo samples per coexistence-volume estimate.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            samples: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub details: Vec<String>,
}

impl CheckReport {
    fn new(name: &'static str) -> Self {
        CheckReport {
            name,
            passed: true,
            summary: String::new(),
            details: Vec::new(),
        }
    }

    /// Records a detail line; a false `ok` fails the check.
    fn note(&mut self, ok: bool, line: String) {
        if !ok {
            self.passed = false;
        }
        let mark = if ok { "ok" } else { "FAIL" };
        self.details.push(format!("{mark}: {line}"));
    }
}

pub fn run_check(name: &str, opts: VerifyOptions) -> Result<CheckReport> {
    match name {
        "table2" => table2(),
        "table1" => table1(),
        "criterion-oracle" => criterion_oracle(),
        "extremal-vanishing" => extremal_vanishing(opts),
        "parallelogram" => parallelogram(opts),
        "prop2" => prop2(),
        "quantum-limit" => quantum_limit(),
        "classical" => classical(opts),
        "edge-lemmas" => edge_lemmas(),
        "determinism" => determinism(opts),
        _ => Err(Error::InvalidParameter(format!("unknown check `{name}`"))),
    }
}

/// Runs every check; errors inside a check become failed reports.
pub fn run_all(opts: VerifyOptions) -> Vec<CheckReport> {
    CHECK_NAMES
        .iter()
        .map(|name| {
            run_check(name, opts).unwrap_or_else(|e| CheckReport {
                name,
                passed: false,
                summary: format!("error: {e}"),
                details: vec![],
            })
        })
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn table2() -> Result<CheckReport> {
    let mut r = CheckReport::new("table2");
    let mut worst: f64 = 0.0;
    for n in 3..=12 {
        let t = build_regular_polygon_theory(n)?;
        let rows = closed_form_extremals(n)?;
        let want = if n % 2 == 1 { 2 * n + 2 } else { n + 2 };
        let got = t.extremal_effects();
        // Each formula row must have its own enumerated vertex.
        let mut used = vec![false; got.len()];
        let mut err: f64 = 0.0;
        let mut matched = true;
        for row in &rows {
            let best = got
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, e)| (i, max_abs_diff(e.coords(), row.effect.coords())))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, d)) => {
                    used[i] = true;
                    err = err.max(d);
                }
                None => matched = false,
            }
        }
        worst = worst.max(err);
        let ok = matched && got.len() == want && rows.len() == want && err < 1e-9;
        r.note(
            ok,
            format!(
                "n={n}: {} extremal effects (expected {want}), max error {err:.3e}",
                got.len()
            ),
        );
    }
    r.summary = format!("n=3..12 extremal sets, max coordinate error {worst:.3e}");
    Ok(r)
}

fn table1() -> Result<CheckReport> {
    let mut r = CheckReport::new("table1");
    let t = build_square_bit();
    let effects: Vec<Effect> = square_bit_labeled_effects()
        .into_iter()
        .map(|(_, e)| e)
        .collect();
    let table = probability_table(t.states(), &effects)?;
    let mut worst: f64 = 0.0;
    for (i, (row, want)) in table.iter().zip(SQUARE_BIT_TABLE).enumerate() {
        let err = max_abs_diff(row, &want);
        worst = worst.max(err);
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.0}")).collect();
        r.note(
            err < 1e-12,
            format!("state {}: [{}]", i + 1, cells.join(", ")),
        );
    }
    let count = t.extremal_effects().len();
    r.note(count == 6, format!("{count} extremal effects"));
    r.summary = format!("square-bit 4x6 probability table, max error {worst:.3e}");
    Ok(r)
}

/// Points of the 21x21 grid on `[-1/2, 1/2]²` inside the unbiased polygon.
pub fn unbiased_grid(n: usize) -> Result<Vec<Vec2>> {
    let poly = unbiased_polygon(n)?;
    let mut pts = Vec::new();
    for i in 0..21 {
        for j in 0..21 {
            let p = Vec2::new(-0.5 + 0.05 * i as f64, -0.5 + 0.05 * j as f64);
            if poly.contains(p, 1e-12) {
                pts.push(p);
            }
        }
    }
    Ok(pts)
}

#[derive(Default)]
struct Agreement {
    pairs: usize,
    band: usize,
    disagree: usize,
    coexistent: usize,
}

fn criterion_oracle() -> Result<CheckReport> {
    let mut r = CheckReport::new("criterion-oracle");
    let mut total = Agreement::default();
    for n in [4, 6, 8, 10] {
        let t = build_regular_polygon_theory(n)?;
        let pts = unbiased_grid(n)?;
        let pairs: Vec<(Vec2, Vec2)> = pts
            .iter()
            .flat_map(|&e| pts.iter().map(move |&f| (e, f)))
            .collect();
        let outcomes = pairs
            .par_iter()
            .map(|&(e, f)| {
                let slack = criterion_slack(n, e, f)?.slack;
                let oracle = coexist_oracle(&t, &Effect::unbiased(e), &Effect::unbiased(f))?;
                Ok((slack, oracle.coexistent))
            })
            .collect::<Result<Vec<(f64, bool)>>>()?;
        let mut a = Agreement::default();
        for (slack, oracle) in outcomes {
            a.pairs += 1;
            if slack.abs() <= BOUNDARY_BAND {
                a.band += 1;
                continue;
            }
            a.coexistent += usize::from(slack > 0.0);
            if (slack > 0.0) != oracle {
                a.disagree += 1;
            }
        }
        r.note(
            a.disagree == 0,
            format!(
                "n={n}: {} grid points, {} pairs, {} coexistent, {} in boundary band, {} disagreements",
                pts.len(),
                a.pairs,
                a.coexistent,
                a.band,
                a.disagree
            ),
        );
        total.pairs += a.pairs;
        total.band += a.band;
        total.disagree += a.disagree;
    }
    r.summary = format!(
        "{} pairs, {} boundary-band, {} disagreements",
        total.pairs, total.band, total.disagree
    );
    Ok(r)
}

fn on_plane_extremals(n: usize) -> Result<Vec<Effect>> {
    Ok(closed_form_extremals(n)?
        .into_iter()
        .filter(|row| row.series == "on hyperplane")
        .map(|row| row.effect)
        .collect())
}

fn extremal_vanishing(opts: VerifyOptions) -> Result<CheckReport> {
    let mut r = CheckReport::new("extremal-vanishing");
    let mut worst_frac: f64 = 0.0;
    for n in [4, 6, 8, 10, 12] {
        let t = build_regular_polygon_theory(n)?;
        let extremals = on_plane_extremals(n)?;
        let mut max_area: f64 = 0.0;
        for e in &extremals {
            max_area = max_area.max(coexistence_region(n, e.planar())?.area);
        }
        let frac = coexistence_volume_fraction(&t, &extremals[0], opts.samples, opts.seed)?;
        worst_frac = worst_frac.max(frac);
        r.note(
            max_area < 1e-12 && frac < 0.01,
            format!("n={n}: max region area {max_area:.3e}, volume fraction {frac}"),
        );
    }
    for delta in [0.1, 0.25, 0.4] {
        let t = build_displaced_hexagon(delta)?;
        let e = displaced_hexagon_e0(delta);
        let frac = coexistence_volume_fraction(&t, &e, opts.samples, opts.seed)?;
        worst_frac = worst_frac.max(frac);
        r.note(
            frac < 0.01,
            format!("displaced hexagon delta={delta}: volume fraction {frac}"),
        );
    }
    r.summary = format!(
        "extremal region areas vanish; worst volume fraction {worst_frac} over {} samples",
        opts.samples
    );
    Ok(r)
}

fn parallelogram(opts: VerifyOptions) -> Result<CheckReport> {
    let mut r = CheckReport::new("parallelogram");
    let t = build_regular_polygon_theory(6)?;
    let e = on_plane_extremals(6)?.remove(0);
    let ebar = t.complement(&e)?;
    let mut disagree = 0;
    let mut members = 0;
    for i in 0..200u64 {
        let f = sample_effect(&t, opts.seed, i)?;
        let inside = in_extremal_coexistence_set(&t, &e, &f)?;
        let oracle = coexist_oracle(&t, &e, &f)?.coexistent;
        members += usize::from(inside);
        disagree += usize::from(inside != oracle);
    }
    r.note(
        disagree == 0,
        format!("200 uniform effects: {members} members, {disagree} disagreements"),
    );
    // Points drawn on the parallelogram itself must all coexist with e.
    let mut on_disagree = 0;
    for i in 0..200u64 {
        let p = sample_effect(&build_classical_theory(2)?, opts.seed, i)?;
        let (s, u) = (p.coords()[0], p.coords()[1]);
        let f = &e.scale(s) + &ebar.scale(u);
        let inside = in_extremal_coexistence_set(&t, &e, &f)?;
        let oracle = coexist_oracle(&t, &e, &f)?.coexistent;
        on_disagree += usize::from(!(inside && oracle));
    }
    r.note(
        on_disagree == 0,
        format!("200 points of the parallelogram: {on_disagree} not coexistent"),
    );
    r.summary = format!("n=6 extremal e: {} disagreements", disagree + on_disagree);
    Ok(r)
}

fn hyperplane_residual(t: &Theory) -> Option<f64> {
    let h = t.reflecting_hyperplane()?;
    Some(
        t.nontrivial_extremal_effects()
            .map(|e| h.distance(e))
            .fold(0.0, f64::max),
    )
}

fn prop2() -> Result<CheckReport> {
    let mut r = CheckReport::new("prop2");
    let mut theories: Vec<(Theory, bool)> = Vec::new();
    for n in 3..=12 {
        theories.push((build_regular_polygon_theory(n)?, n % 2 == 0));
    }
    for n in 2..=4 {
        theories.push((build_classical_theory(n)?, n == 2));
    }
    for (t, expect) in &theories {
        let residual = hyperplane_residual(t);
        let symmetric = is_state_space_point_symmetric(t, 1e-9)?;
        let found = residual.is_some_and(|res| res < 1e-9);
        let ok = found == *expect && symmetric == *expect && found == symmetric;
        let res = residual.map_or("none".to_string(), |x| format!("{x:.3e}"));
        r.note(
            ok,
            format!(
                "{}: hyperplane residual {res}, point symmetric {symmetric}",
                t.name()
            ),
        );
    }
    for delta in [0.1, 0.25, 0.4] {
        let t = build_displaced_hexagon(delta)?;
        let none = t.reflecting_hyperplane().is_none();
        r.note(
            none,
            format!("{}: no reflecting hyperplane {none}", t.name()),
        );
    }
    r.summary = "reflecting hyperplane exists exactly for point-symmetric state spaces".into();
    Ok(r)
}

fn quantum_limit() -> Result<CheckReport> {
    let mut r = CheckReport::new("quantum-limit");
    let e = Vec2::new(0.2, 0.0);
    let ns = [8, 16, 32, 64, 128];
    let gaps = ns
        .iter()
        .map(|&n| quantum_limit_gap(n, e))
        .collect::<Result<Vec<f64>>>()?;
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let cells: Vec<String> = ns
        .iter()
        .zip(&gaps)
        .map(|(n, g)| format!("{n}:{g:.6e}"))
        .collect();
    r.note(decreasing, format!("e=(0.2, 0) gaps {}", cells.join(" ")));
    let g200 = quantum_limit_gap(200, e)?;
    r.note(
        g200 < 0.01,
        format!("e=(0.2, 0) gap at n=200 is {g200:.6e}"),
    );
    let mut worst: f64 = 0.0;
    for n in [8, 16, 32, 64, 128, 200] {
        let nf = n as f64;
        let closed = nf * (PI / nf).tan() / PI - 1.0;
        worst = worst.max((quantum_limit_gap(n, Vec2::ZERO)? - closed).abs());
    }
    r.note(
        worst < 1e-9,
        format!("e=0 gap vs n·tan(π/n)/π - 1: max error {worst:.3e}"),
    );
    r.summary = format!(
        "ellipse area {:.12} at e=(0.2, 0); gap {g200:.3e} at n=200",
        ellipse_area(e)
    );
    Ok(r)
}

fn classical(opts: VerifyOptions) -> Result<CheckReport> {
    let mut r = CheckReport::new("classical");
    let t = build_classical_theory(2)?;
    let mut not_coexistent = 0;
    let mut bad_min_witness = 0;
    for i in 0..500u64 {
        let e = sample_effect(&t, opts.seed, 2 * i)?;
        let f = sample_effect(&t, opts.seed, 2 * i + 1)?;
        let v = coexist_oracle(&t, &e, &f)?;
        not_coexistent += usize::from(!v.coexistent);
        let g1 = Effect::new(
            e.coords()
                .iter()
                .zip(f.coords())
                .map(|(a, b)| a.min(*b))
                .collect(),
        )?;
        let explicit = CoexistenceVerdict {
            coexistent: true,
            witness: Some([g1.clone(), &e - &g1, &f - &g1]),
            binding: None,
            slack: None,
        };
        bad_min_witness += usize::from(!explicit.witness_is_valid(&t, &e, &f, 1e-12));
    }
    r.note(
        not_coexistent == 0,
        format!("500 pairs: {not_coexistent} not coexistent"),
    );
    r.note(
        bad_min_witness == 0,
        format!("componentwise-min witness: {bad_min_witness} invalid"),
    );
    r.summary = "every pair of bit effects coexists".into();
    Ok(r)
}

fn edge_lemmas() -> Result<CheckReport> {
    let mut r = CheckReport::new("edge-lemmas");
    for n in (4..=12).step_by(2) {
        let t = build_regular_polygon_theory(n)?;
        let mut edges = 0;
        let mut slices = 0;
        let extremals: Vec<Effect> = t.nontrivial_extremal_effects().cloned().collect();
        for e in &extremals {
            edges += usize::from(is_edge(&t, t.zero(), e)? && is_edge(&t, e, t.unit())?);
            for l in [0.1, 0.25, 0.4] {
                let slice = lower_set_slice(&t, e, l)?;
                let want = e.planar() * (2.0 * l);
                let point = !slice.is_empty()
                    && slice
                        .vertices()
                        .iter()
                        .all(|v| v.distance(want) <= DEDUP_TOL);
                slices += usize::from(point);
            }
        }
        let m = extremals.len();
        r.note(
            edges == m && slices == 3 * m,
            format!(
                "n={n}: [o,e] and [e,u] edges for {edges}/{m}, point slices {slices}/{}",
                3 * m
            ),
        );
    }
    let mut theories: Vec<Theory> = Vec::new();
    for n in 3..=12 {
        theories.push(build_regular_polygon_theory(n)?);
    }
    for n in 2..=6 {
        theories.push(build_classical_theory(n)?);
    }
    theories.push(build_square_bit());
    for delta in [0.1, 0.25, 0.4] {
        theories.push(build_displaced_hexagon(delta)?);
    }
    let mut closed = 0;
    for t in &theories {
        let ok = t
            .extremal_effects()
            .iter()
            .all(|e| t.complement(e).is_ok_and(|c| t.is_extremal(&c)));
        closed += usize::from(ok);
        if !ok {
            r.note(
                false,
                format!("{}: complement of an extremal is not extremal", t.name()),
            );
        }
    }
    r.note(
        closed == theories.len(),
        format!(
            "complement closure holds for {closed}/{} theories",
            theories.len()
        ),
    );
    r.summary = "segments [o,e], [e,u] are edges; lower sets of extremals are segments".into();
    Ok(r)
}

fn determinism(opts: VerifyOptions) -> Result<CheckReport> {
    let mut r = CheckReport::new("determinism");
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<u64>>();
    let region = || -> Result<Vec<u64>> {
        let rep = coexistence_region(6, Vec2::new(1.0 / 3.0, 0.0))?;
        let mut v: Vec<f64> = rep
            .region
            .vertices()
            .iter()
            .flat_map(|p| [p.x, p.y])
            .collect();
        v.push(rep.area);
        Ok(bits(&v))
    };
    let limit = || -> Result<Vec<u64>> {
        let g = [8, 16, 32]
            .iter()
            .map(|&n| quantum_limit_gap(n, Vec2::new(0.2, 0.0)))
            .collect::<Result<Vec<f64>>>()?;
        Ok(bits(&g))
    };
    let volume = || -> Result<u64> {
        let t = build_regular_polygon_theory(6)?;
        let e = Effect::unbiased(Vec2::new(0.2, 0.1));
        Ok(coexistence_volume_fraction(&t, &e, 1000, opts.seed)?.to_bits())
    };
    r.note(
        region()? == region()?,
        "region vertices and area repeat bit for bit".into(),
    );
    r.note(limit()? == limit()?, "limit gaps repeat bit for bit".into());
    r.note(
        volume()? == volume()?,
        "seeded volume fraction repeats bit for bit".into(),
    );
    r.summary = "repeated runs agree bit for bit".into();
    Ok(r)
}
