//! JSON documents for theories. Numbers are written with 17 significant
//! digits so every `f64` survives a round trip bit for bit.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use super::{Effect, Hyperplane, State, Theory};
use crate::error::{Error, Result};

/// `x` in scientific notation with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_f64(value).as_bytes())
        } else {
            CompactFormatter.write_null(writer)
        }
    }
}

/// Compact JSON with every float at 17 significant digits.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value
        .serialize(&mut ser)
        .expect("in-memory serialization of plain data");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    name: String,
    d: usize,
    extremal_states: Vec<Vec<f64>>,
    unit: Vec<f64>,
    zero: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extremal_effects: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reflecting_hyperplane: Option<Hyperplane>,
}

pub fn to_json(t: &Theory) -> String {
    let doc = Document {
        name: t.name().to_string(),
        d: t.dim(),
        extremal_states: t.states().iter().map(|w| w.coords().to_vec()).collect(),
        unit: t.unit().coords().to_vec(),
        zero: t.zero().coords().to_vec(),
        extremal_effects: Some(
            t.extremal_effects()
                .iter()
                .map(|e| e.coords().to_vec())
                .collect(),
        ),
        reflecting_hyperplane: t.reflecting_hyperplane().cloned(),
    };
    let mut s = to_json_string(&doc);
    s.push('\n');
    s
}

/// Rebuilds a theory from [`to_json`] output. Extremal effects are
/// enumerated when absent; the reflecting hyperplane is always recomputed.
/// A document with no states describes an effect-space-first theory.
pub fn from_json(text: &str) -> Result<Theory> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    if doc.unit.len() != doc.d {
        return Err(Error::DimensionMismatch {
            expected: doc.d,
            found: doc.unit.len(),
        });
    }
    if doc.zero.len() != doc.d || doc.zero.iter().any(|&c| c != 0.0) {
        return Err(Error::Document(
            "zero must be the all-zero vector of length d".into(),
        ));
    }
    let unit = Effect::new(doc.unit)?;
    let effects = doc
        .extremal_effects
        .map(|list| {
            list.into_iter()
                .map(Effect::new)
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    if doc.extremal_states.is_empty() {
        let effects = effects.ok_or_else(|| {
            Error::Document("a theory without states must list its extremal effects".into())
        })?;
        return Theory::from_effects(doc.name, effects, unit);
    }
    let states = doc
        .extremal_states
        .into_iter()
        .map(State::new)
        .collect::<Result<Vec<_>>>()?;
    Theory::from_states(doc.name, states, unit, effects)
}
