//! Forward (powering) link from an RF source to a passive node: free-space
//! received power, the voltage it induces across the antenna/load pair, and
//! the activation range where that voltage reaches the node's threshold.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::{wavelength, Frequency, Gain, Length, Power, Resistance, Voltage};

/// Radio parameters of one RF source and the passive nodes it powers.
///
/// Gains are per antenna. An "EIRP"-style budget where the product
/// `p_t * g_t * g_r` is known can be expressed with unity gains and
/// `p_t` set to the product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    p_t: Power,
    g_t: Gain,
    g_r: Gain,
    f: Frequency,
    v_min: Voltage,
    r_r: Resistance,
    r_l: Resistance,
}

impl RadioParams {
    pub fn new(
        p_t: Power,
        g_t: Gain,
        g_r: Gain,
        f: Frequency,
        v_min: Voltage,
        r_r: Resistance,
        r_l: Resistance,
    ) -> Result<Self> {
        if p_t.as_watts() <= 0.0 {
            return Err(Error::InvalidQuantity {
                quantity: "transmit power",
                value: p_t.as_watts(),
                reason: "must be positive",
            });
        }
        if v_min.as_volts() <= 0.0 {
            return Err(Error::InvalidQuantity {
                quantity: "activation voltage",
                value: v_min.as_volts(),
                reason: "must be positive",
            });
        }
        Ok(Self {
            p_t,
            g_t,
            g_r,
            f,
            v_min,
            r_r,
            r_l,
        })
    }

    /// Builds a radio from an already-folded `p_t * g_t * g_r` product,
    /// using unity antenna gains.
    pub fn from_gain_product(
        product: Power,
        f: Frequency,
        v_min: Voltage,
        r_r: Resistance,
        r_l: Resistance,
    ) -> Result<Self> {
        Self::new(product, Gain::UNITY, Gain::UNITY, f, v_min, r_r, r_l)
    }

    pub fn p_t(&self) -> Power {
        self.p_t
    }
    pub fn g_t(&self) -> Gain {
        self.g_t
    }
    pub fn g_r(&self) -> Gain {
        self.g_r
    }
    pub fn f(&self) -> Frequency {
        self.f
    }
    pub fn v_min(&self) -> Voltage {
        self.v_min
    }
    pub fn r_r(&self) -> Resistance {
        self.r_r
    }
    pub fn r_l(&self) -> Resistance {
        self.r_l
    }

    pub fn with_power(self, p_t: Power) -> Result<Self> {
        Self::new(p_t, self.g_t, self.g_r, self.f, self.v_min, self.r_r, self.r_l)
    }

    pub fn with_frequency(self, f: Frequency) -> Self {
        Self { f, ..self }
    }

    pub fn with_gains(self, g_t: Gain, g_r: Gain) -> Self {
        Self { g_t, g_r, ..self }
    }

    pub fn with_activation_voltage(self, v_min: Voltage) -> Result<Self> {
        Self::new(self.p_t, self.g_t, self.g_r, self.f, v_min, self.r_r, self.r_l)
    }

    pub fn with_resistances(self, r_r: Resistance, r_l: Resistance) -> Self {
        Self { r_r, r_l, ..self }
    }

    /// `p_t * g_t * g_r` in watts.
    pub fn gain_power_product(&self) -> f64 {
        self.p_t.as_watts() * self.g_t.as_linear() * self.g_r.as_linear()
    }

    /// Sum of the node antenna and load resistances.
    pub fn series_resistance(&self) -> f64 {
        self.r_r.as_ohms() + self.r_l.as_ohms()
    }

    /// Received power that induces exactly `v_min`.
    pub fn threshold_power(&self) -> Power {
        power_from_voltage(self.v_min, self.r_r, self.r_l)
    }
}

/// Received power, induced voltage and distance for one link evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkResult {
    pub p_r: Power,
    pub v_induced: Voltage,
    pub distance: Length,
}

/// Free-space received power at distance `d`:
/// `p_t * g_t * g_r * (lambda / (4 pi d))^2`.
pub fn received_power(radio: &RadioParams, d: Length) -> Power {
    let ratio = wavelength(radio.f).as_meters() / (4.0 * PI * d.as_meters());
    Power::watts(radio.gain_power_product() * ratio * ratio)
        .expect("product of positive finite factors")
}

/// Voltage induced across the antenna for received power `p_r`:
/// `sqrt(8 (r_r + r_l) p_r)`.
pub fn induced_voltage(p_r: Power, r_r: Resistance, r_l: Resistance) -> Voltage {
    let v = (8.0 * (r_r.as_ohms() + r_l.as_ohms()) * p_r.as_watts()).sqrt();
    Voltage::volts(v).expect("sqrt of non-negative finite value")
}

/// Received power needed to induce `v`: `v^2 / (8 (r_r + r_l))`.
pub fn power_from_voltage(v: Voltage, r_r: Resistance, r_l: Resistance) -> Power {
    let v = v.as_volts();
    Power::watts(v * v / (8.0 * (r_r.as_ohms() + r_l.as_ohms())))
        .expect("non-negative finite quotient")
}

/// Evaluates the full link at distance `d`.
pub fn evaluate(radio: &RadioParams, d: Length) -> LinkResult {
    let p_r = received_power(radio, d);
    LinkResult {
        p_r,
        v_induced: induced_voltage(p_r, radio.r_r, radio.r_l),
        distance: d,
    }
}

/// Activation range: the distance at which the induced voltage falls to
/// `v_min`.
pub fn max_range(radio: &RadioParams) -> Length {
    let threshold = radio.threshold_power().as_watts();
    let r = wavelength(radio.f).as_meters() / (4.0 * PI)
        * (radio.gain_power_product() / threshold).sqrt();
    Length::meters(r).expect("positive finite range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ohms(v: f64) -> Resistance {
        Resistance::ohms(v).unwrap()
    }

    fn anchor_radio(f_hz: f64) -> RadioParams {
        RadioParams::from_gain_product(
            Power::watts(4.0).unwrap(),
            Frequency::hertz(f_hz).unwrap(),
            Voltage::volts(0.1).unwrap(),
            ohms(50.0),
            ohms(50.0),
        )
        .unwrap()
    }

    #[test]
    fn received_power_at_published_range() {
        let p = received_power(&anchor_radio(2e9), Length::meters(6.75).unwrap());
        assert_relative_eq!(p.as_watts(), 1.2504e-5, max_relative = 1e-3);
    }

    #[test]
    fn received_power_identity_and_inverse_square() {
        // unit gains, d = lambda / (4 pi) makes the free-space factor 1
        let radio = RadioParams::from_gain_product(
            Power::watts(2.5).unwrap(),
            Frequency::hertz(1e9).unwrap(),
            Voltage::volts(0.1).unwrap(),
            ohms(50.0),
            ohms(50.0),
        )
        .unwrap();
        let d = Length::meters(0.3 / (4.0 * PI)).unwrap();
        assert_relative_eq!(received_power(&radio, d).as_watts(), 2.5, max_relative = 1e-14);

        let near = received_power(&radio, Length::meters(3.0).unwrap()).as_watts();
        let far = received_power(&radio, Length::meters(6.0).unwrap()).as_watts();
        assert_relative_eq!(far, near / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn voltage_power_examples() {
        let v = induced_voltage(Power::watts(1.25e-5).unwrap(), ohms(50.0), ohms(50.0));
        assert!((v.as_volts() - 0.1).abs() < 1e-6);
        assert_eq!(
            induced_voltage(Power::watts(0.0).unwrap(), ohms(50.0), ohms(50.0)).as_volts(),
            0.0
        );
        let p = power_from_voltage(Voltage::volts(0.1).unwrap(), ohms(50.0), ohms(50.0));
        assert_relative_eq!(p.as_watts(), 1.25e-5, max_relative = 1e-15);
        assert_eq!(
            power_from_voltage(Voltage::volts(0.0).unwrap(), ohms(50.0), ohms(50.0)).as_watts(),
            0.0
        );
    }

    #[test]
    fn quadrupling_power_doubles_voltage() {
        let a = induced_voltage(Power::watts(3e-6).unwrap(), ohms(50.0), ohms(75.0));
        let b = induced_voltage(Power::watts(12e-6).unwrap(), ohms(50.0), ohms(75.0));
        assert_relative_eq!(b.as_volts(), 2.0 * a.as_volts(), max_relative = 1e-15);
    }

    #[test]
    fn max_range_anchors() {
        // exact solve with c = 3e8
        assert!((max_range(&anchor_radio(2e9)).as_meters() - 6.754).abs() < 0.01);
        assert!((max_range(&anchor_radio(1e9)).as_meters() - 13.508).abs() < 0.02);
        assert!((max_range(&anchor_radio(5e8)).as_meters() - 27.02).abs() < 0.05);
    }

    #[test]
    fn link_result_consistent() {
        let radio = anchor_radio(1e9);
        let res = evaluate(&radio, Length::meters(5.0).unwrap());
        let lhs = res.v_induced.as_volts().powi(2);
        let rhs = 8.0 * radio.series_resistance() * res.p_r.as_watts();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn radio_rejects_zero_power_and_threshold() {
        let r = anchor_radio(1e9);
        assert!(r.with_power(Power::watts(0.0).unwrap()).is_err());
        assert!(r.with_activation_voltage(Voltage::volts(0.0).unwrap()).is_err());
    }

    fn radio_strategy() -> impl Strategy<Value = RadioParams> {
        (
            1e-3f64..100.0,
            -10.0f64..20.0,
            -10.0f64..20.0,
            1e8f64..1e10,
            1e-3f64..1.0,
            1.0f64..500.0,
            1.0f64..500.0,
        )
            .prop_map(|(p, gt, gr, f, v, rr, rl)| {
                RadioParams::new(
                    Power::watts(p).unwrap(),
                    Gain::from_dbi(gt).unwrap(),
                    Gain::from_dbi(gr).unwrap(),
                    Frequency::hertz(f).unwrap(),
                    Voltage::volts(v).unwrap(),
                    ohms(rr),
                    ohms(rl),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn threshold_reproduced_at_max_range(radio in radio_strategy()) {
            let d = max_range(&radio);
            let v = induced_voltage(received_power(&radio, d), radio.r_r(), radio.r_l());
            let rel = (v.as_volts() - radio.v_min().as_volts()).abs() / radio.v_min().as_volts();
            prop_assert!(rel <= 1e-9);
        }

        #[test]
        fn voltage_round_trip(v in 0.0f64..10.0, rr in 1.0f64..1e3, rl in 1.0f64..1e3) {
            let p = power_from_voltage(Voltage::volts(v).unwrap(), ohms(rr), ohms(rl));
            let back = induced_voltage(p, ohms(rr), ohms(rl)).as_volts();
            prop_assert!((back - v).abs() <= 1e-12 * v.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn received_power_strictly_decreasing(radio in radio_strategy(), d in 0.1f64..1e3) {
            let near = received_power(&radio, Length::meters(d).unwrap()).as_watts();
            let far = received_power(&radio, Length::meters(d * 1.01).unwrap()).as_watts();
            prop_assert!(far < near);
            let hi = radio.with_frequency(Frequency::hertz(radio.f().as_hertz() * 1.01).unwrap());
            prop_assert!(received_power(&hi, Length::meters(d).unwrap()).as_watts() < near);
        }
    }
}
