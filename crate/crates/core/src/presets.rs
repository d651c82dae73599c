//! Circuits shipped as JSON data files.

use crate::circuit::{from_json, CircuitSpec};
use crate::error::{GsqcError, Result};

macro_rules! presets {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../presets/", $name, ".json")))),*]
    };
}

const PRESETS: &[(&str, &str)] = presets![
    "free-2row",
    "free-6row",
    "paper-1qubit-boost",
    "single-project",
    "gate-sequence",
    "paper-2qubit",
    "paper-2qubit-mixed",
    "chain-3",
    "qft-2",
    "teleport-1qubit",
    "teleport-cnot-control",
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// Raw JSON of a preset.
pub fn preset_source(name: &str) -> Result<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).ok_or_else(|| GsqcError::UnknownPreset(name.to_string()))
}

pub fn preset(name: &str) -> Result<CircuitSpec> {
    from_json(preset_source(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::validate_circuit;

    #[test]
    fn all_presets_parse_and_validate() {
        for name in preset_names() {
            let c = preset(name).unwrap();
            assert!(validate_circuit(&c).is_valid(), "{name}");
        }
        assert!(preset_names().count() >= 10);
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(preset("nope"), Err(GsqcError::UnknownPreset(_))));
    }
}
