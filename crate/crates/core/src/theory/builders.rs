use std::f64::consts::PI;

use super::{Effect, State, Theory};
use crate::error::{Error, Result};
use crate::geometry::polytope::dot;
use crate::geometry::DEDUP_TOL;

/// Largest classical theory built; its effect cube has 4096 vertices.
pub const MAX_CLASSICAL_LEVELS: usize = 12;

/// The n-level classical theory: states are the standard basis vectors
/// (a simplex), effects the unit hypercube.
pub fn build_classical_theory(n: usize) -> Result<Theory> {
    if !(2..=MAX_CLASSICAL_LEVELS).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "classical theory needs 2 <= n <= {MAX_CLASSICAL_LEVELS}, got {n}"
        )));
    }
    let states = (0..n)
        .map(|j| {
            let mut c = vec![0.0; n];
            c[j] = 1.0;
            State(c)
        })
        .collect();
    let corners = (0..1usize << n)
        .map(|mask| Effect((0..n).map(|i| ((mask >> i) & 1) as f64).collect()))
        .collect();
    Theory::from_states(
        format!("classical-{n}"),
        states,
        Effect(vec![1.0; n]),
        Some(corners),
    )
}

/// Pure states of the n-sided polygon in normal parametrization:
/// `(cos 2kπ/n, sin 2kπ/n, 1)` for `k = 0..n`.
fn polygon_states(n: usize) -> Vec<State> {
    (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            State(vec![t.cos(), t.sin(), 1.0])
        })
        .collect()
}

/// The regular n-gon theory. Extremal effects come from vertex enumeration
/// of `{e : 0 <= ⟨e, ω_k⟩ <= 1}`; for even n they all lie on `z = 1/2`.
pub fn build_regular_polygon_theory(n: usize) -> Result<Theory> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "polygon theory needs n >= 3, got {n}"
        )));
    }
    Theory::from_states(
        format!("polygon-{n}"),
        polygon_states(n),
        Effect(vec![0.0, 0.0, 1.0]),
        None,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalRow {
    pub series: &'static str,
    pub k: Option<usize>,
    pub effect: Effect,
}

/// Closed-form extremal effects of the n-gon theory, row by row.
///
/// Odd n: zero, n "lower" and n "upper" effects, unit.
/// Even n: zero, n effects on the hyperplane `z = 1/2`, unit.
pub fn closed_form_extremals(n: usize) -> Result<Vec<ExtremalRow>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "polygon theory needs n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    let mut rows = vec![ExtremalRow {
        series: "zero",
        k: None,
        effect: Effect(vec![0.0, 0.0, 0.0]),
    }];
    if n % 2 == 1 {
        let c = ((nf - 1.0) / nf * PI).cos();
        let s = 1.0 / (1.0 - c);
        for k in 0..n {
            let t = 2.0 * k as f64 / nf * PI;
            rows.push(ExtremalRow {
                series: "lower",
                k: Some(k),
                effect: Effect(vec![s * t.cos(), s * t.sin(), -s * c]),
            });
        }
        for k in 0..n {
            let t = 2.0 * k as f64 / nf * PI;
            rows.push(ExtremalRow {
                series: "upper",
                k: Some(k),
                effect: Effect(vec![-s * t.cos(), -s * t.sin(), s]),
            });
        }
    } else {
        let tan = (PI / nf).tan();
        for k in 0..n {
            let t = 2.0 * k as f64 / nf * PI;
            rows.push(ExtremalRow {
                series: "on hyperplane",
                k: Some(k),
                effect: Effect(vec![
                    0.5 * (t.cos() + tan * t.sin()),
                    0.5 * (-t.sin() + tan * t.cos()),
                    0.5,
                ]),
            });
        }
    }
    rows.push(ExtremalRow {
        series: "unit",
        k: None,
        effect: Effect(vec![0.0, 0.0, 1.0]),
    });
    Ok(rows)
}

/// Linear maps between the stored (normal) coordinates of a theory and the
/// coordinates it was originally presented in.
#[derive(Debug, Clone, PartialEq)]
pub struct NativeChart {
    /// `native_effect = effect_map · effect`.
    effect_map: Vec<Vec<f64>>,
    /// `native_state = state_map · state`.
    state_map: Vec<Vec<f64>>,
    /// `effect = effect_inverse · native_effect` on the native effect subspace.
    effect_inverse: Vec<Vec<f64>>,
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

impl NativeChart {
    pub fn native_dim(&self) -> usize {
        self.effect_map.len()
    }

    pub fn effect_to_native(&self, e: &Effect) -> Vec<f64> {
        mat_vec(&self.effect_map, e.coords())
    }

    pub fn state_to_native(&self, w: &State) -> Vec<f64> {
        mat_vec(&self.state_map, w.coords())
    }

    pub fn effect_from_native(&self, native: &[f64]) -> Result<Effect> {
        if native.len() != self.native_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.native_dim(),
                found: native.len(),
            });
        }
        Effect::new(mat_vec(&self.effect_inverse, native))
    }

    fn square_bit() -> Self {
        // Effects (x, y, z) ↦ (z + x, z - x, z + y, z - y), which spans the
        // subspace e¹ + e² = e³ + e⁴. States (a, b, 1) ↦ the point of the
        // projected square ω₁ + ω₂ = ω₃ + ω₄ = 1/2 with ω₁ - ω₂ = a and
        // ω₃ - ω₄ = b. The pairing is preserved because effect_mapᵀ · state_map = I.
        NativeChart {
            effect_map: vec![
                vec![1.0, 0.0, 1.0],
                vec![-1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
                vec![0.0, -1.0, 1.0],
            ],
            state_map: vec![
                vec![0.5, 0.0, 0.25],
                vec![-0.5, 0.0, 0.25],
                vec![0.0, 0.5, 0.25],
                vec![0.0, -0.5, 0.25],
            ],
            effect_inverse: vec![
                vec![0.5, -0.5, 0.0, 0.0],
                vec![0.0, 0.0, 0.5, -0.5],
                vec![0.25, 0.25, 0.25, 0.25],
            ],
        }
    }
}

/// Square-bit states in four-level classical coordinates, projected onto
/// `ω₁ + ω₂ = ω₃ + ω₄ = 1/2`, in the order that indexes the rows of
/// [`SQUARE_BIT_TABLE`].
const SQUARE_BIT_NATIVE_STATES: [[f64; 4]; 4] = [
    [0.75, -0.25, 0.25, 0.25],
    [0.25, 0.25, -0.25, 0.75],
    [0.25, 0.25, 0.75, -0.25],
    [-0.25, 0.75, 0.25, 0.25],
];

/// Nontrivial square-bit extremal effects `e₁..e₄` in four-level
/// coordinates, labelled to index the columns of [`SQUARE_BIT_TABLE`].
const SQUARE_BIT_NATIVE_EFFECTS: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 1.0],
    [0.0, 1.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 1.0],
    [1.0, 0.0, 1.0, 0.0],
];

/// Square-bit probabilities: rows `ω¹..ω⁴`, columns `o, e₁, e₂, e₃, e₄, u`.
pub const SQUARE_BIT_TABLE: [[f64; 6]; 4] = [
    [0.0, 1.0, 0.0, 0.0, 1.0, 1.0],
    [0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
    [0.0, 0.0, 1.0, 0.0, 1.0, 1.0],
    [0.0, 0.0, 1.0, 1.0, 0.0, 1.0],
];

/// The square bit (gbit): the four-level classical effect cube restricted to
/// `e¹ + e² = e³ + e⁴`, stored in normal parametrization. Its state space is
/// a square and its effect space an octahedron.
pub fn build_square_bit() -> Theory {
    let chart = NativeChart::square_bit();
    let states = SQUARE_BIT_NATIVE_STATES
        .iter()
        .map(|w| State(vec![w[0] - w[1], w[2] - w[3], 1.0]))
        .collect();
    let mut t = Theory::from_states("square-bit", states, Effect(vec![0.0, 0.0, 1.0]), None)
        .expect("square bit is a valid theory");
    t.set_chart(chart);
    t
}

/// `(label, effect)` for `o, e₁, e₂, e₃, e₄, u` in the square bit's normal
/// coordinates.
pub fn square_bit_labeled_effects() -> Vec<(&'static str, Effect)> {
    let chart = NativeChart::square_bit();
    let mut out = vec![("o", Effect(vec![0.0, 0.0, 0.0]))];
    for (label, native) in ["e1", "e2", "e3", "e4"]
        .into_iter()
        .zip(SQUARE_BIT_NATIVE_EFFECTS)
    {
        out.push((
            label,
            chart.effect_from_native(&native).expect("4 coordinates"),
        ));
    }
    out.push(("u", Effect(vec![0.0, 0.0, 1.0])));
    out
}

/// `table[i][j] = ⟨effects[j], states[i]⟩`.
pub fn probability_table(states: &[State], effects: &[Effect]) -> Result<Vec<Vec<f64>>> {
    states
        .iter()
        .map(|w| effects.iter().map(|e| super::probability(e, w)).collect())
        .collect()
}

/// The hexagon theory's effect space with the opposite extremal effects
/// `e₀` and `e₃` of [`closed_form_extremals`] pushed to `z = 1/2 + δ` and
/// `z = 1/2 - δ`. Still complement-closed, but no longer has a reflecting
/// hyperplane.
pub fn build_displaced_hexagon(delta: f64) -> Result<Theory> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "displacement must lie in (0, 1/2), got {delta}"
        )));
    }
    let hexagon = build_regular_polygon_theory(6)?;
    let rows = closed_form_extremals(6)?;
    let pick = |k: usize| {
        rows.iter()
            .find(|r| r.k == Some(k))
            .map(|r| r.effect.clone())
            .expect("hexagon rows k = 0..6")
    };
    let (e0, e3) = (pick(0), pick(3));
    let effects = hexagon
        .extremal_effects()
        .iter()
        .map(|e| {
            let mut c = e.coords().to_vec();
            if e.approx_eq(&e0, DEDUP_TOL) {
                c[2] += delta;
            } else if e.approx_eq(&e3, DEDUP_TOL) {
                c[2] -= delta;
            }
            Effect(c)
        })
        .collect();
    Theory::from_effects(
        format!("displaced-hexagon-{delta}"),
        effects,
        Effect(vec![0.0, 0.0, 1.0]),
    )
}

/// The displaced copy of the closed-form `e₀` in [`build_displaced_hexagon`].
pub fn displaced_hexagon_e0(delta: f64) -> Effect {
    let tan = (PI / 6.0).tan();
    Effect(vec![0.5, 0.5 * tan, 0.5 + delta])
}
