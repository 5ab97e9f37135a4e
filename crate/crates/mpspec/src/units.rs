//! Unit-suffixed scalar parsing for catalog and config boundaries.
//!
//! All internal quantities are SI. Inputs may be plain JSON numbers (taken as
//! SI) or strings with an explicit unit suffix, e.g. `"250 Oe"`, `"63.8 emu/g"`,
//! `"100 kHz"`. Gaussian-unit conversions: 1 Oe = 1000/(4π) A/m and
//! 1 emu/g = 1 A·m²/kg.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Oersted to A/m: multiply by 1000/(4π).
pub const OE_TO_A_PER_M: f64 = 1000.0 / (4.0 * std::f64::consts::PI);

/// Converts a field value in oersted to A/m.
pub fn oersted_to_si(value_oe: f64) -> f64 {
    value_oe * OE_TO_A_PER_M
}

/// Converts a field value in A/m to oersted.
pub fn si_to_oersted(value_a_per_m: f64) -> f64 {
    value_a_per_m / OE_TO_A_PER_M
}

/// Physical dimension accepted at a parse site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    MagneticField,
    Frequency,
    SpecificMagnetization,
    Temperature,
    Viscosity,
    EnergyDensity,
    Time,
    Mass,
    Amount,
    MassDensity,
    Voltage,
    Capacitance,
    Inductance,
    Resistance,
    Dimensionless,
}

impl Dimension {
    fn si_unit(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::MagneticField => "A/m",
            Dimension::Frequency => "Hz",
            Dimension::SpecificMagnetization => "A·m²/kg",
            Dimension::Temperature => "K",
            Dimension::Viscosity => "Pa·s",
            Dimension::EnergyDensity => "J/m³",
            Dimension::Time => "s",
            Dimension::Mass => "kg",
            Dimension::Amount => "mol",
            Dimension::MassDensity => "kg/m³",
            Dimension::Voltage => "V",
            Dimension::Capacitance => "F",
            Dimension::Inductance => "H",
            Dimension::Resistance => "Ω",
            Dimension::Dimensionless => "",
        }
    }

    /// Suffix table: (accepted spelling, factor to SI).
    fn suffixes(self) -> &'static [(&'static str, f64)] {
        match self {
            Dimension::Length => &[
                ("m", 1.0),
                ("mm", 1e-3),
                ("um", 1e-6),
                ("µm", 1e-6),
                ("nm", 1e-9),
            ],
            Dimension::MagneticField => &[
                ("A/m", 1.0),
                ("kA/m", 1e3),
                ("Oe", OE_TO_A_PER_M),
                ("mT/u0", 1e-3 / (4.0e-7 * std::f64::consts::PI)),
            ],
            Dimension::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6)],
            Dimension::SpecificMagnetization => &[
                ("A·m²/kg", 1.0),
                ("A.m2/kg", 1.0),
                ("Am2/kg", 1.0),
                ("emu/g", 1.0),
            ],
            Dimension::Temperature => &[("K", 1.0)],
            Dimension::Viscosity => &[
                ("Pa·s", 1.0),
                ("Pa.s", 1.0),
                ("Pas", 1.0),
                ("mPa·s", 1e-3),
                ("mPa.s", 1e-3),
            ],
            Dimension::EnergyDensity => &[
                ("J/m³", 1.0),
                ("J/m3", 1.0),
                ("kJ/m³", 1e3),
                ("kJ/m3", 1e3),
            ],
            Dimension::Time => &[
                ("s", 1.0),
                ("ms", 1e-3),
                ("us", 1e-6),
                ("µs", 1e-6),
                ("ns", 1e-9),
                ("ps", 1e-12),
            ],
            Dimension::Mass => &[("kg", 1.0), ("g", 1e-3), ("mg", 1e-6), ("ug", 1e-9)],
            Dimension::Amount => &[
                ("mol", 1.0),
                ("mmol", 1e-3),
                ("umol", 1e-6),
                ("µmol", 1e-6),
                ("nmol", 1e-9),
                ("pmol", 1e-12),
                ("fmol", 1e-15),
                ("fmole", 1e-15),
            ],
            Dimension::MassDensity => &[
                ("kg/m³", 1.0),
                ("kg/m3", 1.0),
                ("g/cm³", 1e3),
                ("g/cm3", 1e3),
            ],
            Dimension::Voltage => &[("V", 1.0), ("mV", 1e-3), ("kV", 1e3)],
            Dimension::Capacitance => &[
                ("F", 1.0),
                ("mF", 1e-3),
                ("uF", 1e-6),
                ("µF", 1e-6),
                ("nF", 1e-9),
                ("pF", 1e-12),
            ],
            Dimension::Inductance => &[
                ("H", 1.0),
                ("mH", 1e-3),
                ("uH", 1e-6),
                ("µH", 1e-6),
                ("nH", 1e-9),
            ],
            Dimension::Resistance => &[
                ("Ω", 1.0),
                ("Ohm", 1.0),
                ("ohm", 1.0),
                ("mOhm", 1e-3),
                ("kOhm", 1e3),
            ],
            Dimension::Dimensionless => &[],
        }
    }
}

/// Raw quantity as it appears in JSON: either a bare number (SI) or a
/// unit-suffixed string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    /// Resolves the quantity to an SI value for the given dimension.
    pub fn to_si(&self, dim: Dimension) -> Result<f64> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(s) => parse_si(s, dim),
        }
    }
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Number(v)
    }
}

/// Parses a string like `"250 Oe"` or `"1.0e-3 Pa·s"` into the SI value of
/// the requested dimension. A bare number parses as already-SI.
pub fn parse_si(input: &str, dim: Dimension) -> Result<f64> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(Error::InvalidInput(format!(
            "empty quantity (expected a number with optional {} suffix)",
            dim.si_unit()
        )));
    }
    // Split at the first character that can no longer belong to the number.
    let split = trimmed
        .char_indices()
        .find(|(_, c)| !matches!(c, '0'..='9' | '+' | '-' | '.' | 'e' | 'E'))
        // 'e' can start a unit ("emu/g") as well as an exponent; backtrack if
        // the numeric part fails to parse.
        .map(|(i, _)| i)
        .unwrap_or(trimmed.len());

    let (num_str, unit_str) = resolve_split(trimmed, split);
    let value: f64 = num_str.trim().parse().map_err(|_| {
        Error::InvalidInput(format!("cannot parse number from quantity {input:?}"))
    })?;
    let unit = unit_str.trim();

    if unit.is_empty() {
        return Ok(value);
    }
    for (suffix, factor) in dim.suffixes() {
        if unit == *suffix {
            return Ok(value * factor);
        }
    }
    Err(Error::InvalidInput(format!(
        "unknown unit {unit:?} in {input:?} (expected one of {:?} or bare SI {})",
        dim.suffixes().iter().map(|(s, _)| *s).collect::<Vec<_>>(),
        dim.si_unit()
    )))
}

/// Handles the `e`-ambiguity between exponents and units like `emu/g`.
fn resolve_split(s: &str, split: usize) -> (&str, &str) {
    let (num, unit) = s.split_at(split);
    if num.trim().parse::<f64>().is_ok() {
        return (num, unit);
    }
    // Walk the split leftwards past trailing exponent characters that
    // actually belong to the unit (e.g. "63.8emu/g" splits after "63.8e").
    let mut idx = split;
    while idx > 0 {
        idx -= 1;
        let (n, u) = s.split_at(idx);
        if !n.is_empty() && n.trim().parse::<f64>().is_ok() {
            return (n, u);
        }
    }
    (num, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn oersted_conversion_matches_definition() {
        assert_eq!(oersted_to_si(0.0), 0.0);
        assert_relative_eq!(oersted_to_si(250.0), 19894.367886486918, max_relative = 1e-4);
        assert_relative_eq!(oersted_to_si(-25.0), -1989.4367886486918, max_relative = 1e-4);
        assert_relative_eq!(si_to_oersted(oersted_to_si(17.1)), 17.1, max_relative = 1e-12);
    }

    #[test]
    fn parses_suffixed_quantities() {
        assert_relative_eq!(
            parse_si("250 Oe", Dimension::MagneticField).unwrap(),
            19894.367886486918,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            parse_si("63.8 emu/g", Dimension::SpecificMagnetization).unwrap(),
            63.8
        );
        assert_relative_eq!(
            parse_si("63.8emu/g", Dimension::SpecificMagnetization).unwrap(),
            63.8
        );
        assert_relative_eq!(parse_si("100 kHz", Dimension::Frequency).unwrap(), 1e5);
        assert_relative_eq!(parse_si("25 nm", Dimension::Length).unwrap(), 25e-9);
        assert_relative_eq!(parse_si("1.0e-3 Pa·s", Dimension::Viscosity).unwrap(), 1e-3);
        assert_relative_eq!(parse_si("5.0e3 J/m3", Dimension::EnergyDensity).unwrap(), 5e3);
        assert_relative_eq!(parse_si("544 fmol", Dimension::Amount).unwrap(), 5.44e-13);
        assert_relative_eq!(parse_si("0.016 mg", Dimension::Mass).unwrap(), 1.6e-8);
        assert_relative_eq!(parse_si("200 nF", Dimension::Capacitance).unwrap(), 2e-7);
        assert_relative_eq!(parse_si("14.94 mH", Dimension::Inductance).unwrap(), 14.94e-3);
    }

    #[test]
    fn bare_numbers_are_si() {
        assert_relative_eq!(parse_si("1e-10", Dimension::Time).unwrap(), 1e-10);
        assert_relative_eq!(
            Quantity::Number(300.0).to_si(Dimension::Temperature).unwrap(),
            300.0
        );
    }

    #[test]
    fn rejects_unknown_units() {
        assert!(parse_si("3 furlongs", Dimension::Length).is_err());
        assert!(parse_si("", Dimension::Length).is_err());
        assert!(parse_si("250 Oe", Dimension::Frequency).is_err());
    }
}
