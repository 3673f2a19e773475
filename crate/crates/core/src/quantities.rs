//! Physical quantities used throughout the planner.
//!
//! Every value is stored in SI units (watts, hertz, ohms, volts, meters,
//! square meters). Constructors validate sign and finiteness, so formula
//! code downstream never re-checks them. Decibel and prefixed units only
//! appear at the CLI/file boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light used by every formula, in m/s.
///
/// Fixed at the rounded 3e8 rather than 299 792 458 so that published
/// range and source-count figures are reproduced as computed.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

fn check(quantity: &'static str, value: f64, allow_zero: bool) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::InvalidQuantity {
            quantity,
            value,
            reason: "must be finite",
        });
    }
    if allow_zero && value < 0.0 {
        return Err(Error::InvalidQuantity {
            quantity,
            value,
            reason: "must be non-negative",
        });
    }
    if !allow_zero && value <= 0.0 {
        return Err(Error::InvalidQuantity {
            quantity,
            value,
            reason: "must be positive",
        });
    }
    Ok(value)
}

macro_rules! quantity {
    ($(#[$doc:meta])* $name:ident, $ctor:ident, $getter:ident, $label:literal, allow_zero = $zero:literal) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
        #[serde(try_from = "f64", into = "f64")]
        pub struct $name(f64);

        impl $name {
            pub fn $ctor(value: f64) -> Result<Self> {
                check($label, value, $zero).map(Self)
            }

            #[inline]
            pub fn $getter(self) -> f64 {
                self.0
            }
        }

        impl TryFrom<f64> for $name {
            type Error = Error;

            fn try_from(value: f64) -> Result<Self> {
                Self::$ctor(value)
            }
        }

        impl From<$name> for f64 {
            fn from(q: $name) -> f64 {
                q.0
            }
        }
    };
}

quantity!(
    /// Power in watts. Zero is allowed (received power at the far field
    /// limit); transmit power is checked to be strictly positive where a
    /// [`crate::link_budget::RadioParams`] is built.
    Power, watts, as_watts, "power", allow_zero = true
);
quantity!(
    /// Carrier frequency in hertz.
    Frequency, hertz, as_hertz, "frequency", allow_zero = false
);
quantity!(
    /// Purely resistive antenna or load impedance in ohms.
    Resistance, ohms, as_ohms, "resistance", allow_zero = false
);
quantity!(
    /// Voltage magnitude in volts. Zero is allowed as an induced voltage;
    /// activation thresholds must be strictly positive.
    Voltage, volts, as_volts, "voltage", allow_zero = true
);
quantity!(
    /// Distance in meters.
    Length, meters, as_meters, "length", allow_zero = false
);
quantity!(
    /// Area in square meters.
    Area, square_meters, as_square_meters, "area", allow_zero = false
);

/// Antenna gain as a linear power ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Gain(f64);

impl Gain {
    pub const UNITY: Gain = Gain(1.0);

    pub fn linear(value: f64) -> Result<Self> {
        check("gain", value, false).map(Self)
    }

    pub fn from_dbi(dbi: f64) -> Result<Self> {
        dbi_to_linear(dbi)
    }

    #[inline]
    pub fn as_linear(self) -> f64 {
        self.0
    }

    pub fn as_dbi(self) -> f64 {
        linear_to_dbi(self)
    }
}

impl TryFrom<f64> for Gain {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::linear(value)
    }
}

impl From<Gain> for f64 {
    fn from(g: Gain) -> f64 {
        g.0
    }
}

/// Converts a gain in dBi to a linear ratio, `10^(g/10)`.
pub fn dbi_to_linear(dbi: f64) -> Result<Gain> {
    if !dbi.is_finite() {
        return Err(Error::InvalidQuantity {
            quantity: "gain (dBi)",
            value: dbi,
            reason: "must be finite",
        });
    }
    Gain::linear(10f64.powf(dbi / 10.0))
}

/// Converts a linear gain back to dBi. Non-positive gains cannot be built,
/// so this never fails.
pub fn linear_to_dbi(gain: Gain) -> f64 {
    10.0 * gain.0.log10()
}

/// Free-space wavelength `c / f`.
pub fn wavelength(f: Frequency) -> Length {
    Length(SPEED_OF_LIGHT / f.0)
}

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> Result<Power> {
    if !dbm.is_finite() {
        return Err(Error::InvalidQuantity {
            quantity: "power (dBm)",
            value: dbm,
            reason: "must be finite",
        });
    }
    Power::watts(10f64.powf(dbm / 10.0) / 1000.0)
}
