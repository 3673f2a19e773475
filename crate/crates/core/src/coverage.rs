//! Number of non-overlapping RF sources needed to cover an event field, and
//! the inversions of that relation for power and area.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link_budget::{max_range, RadioParams};
use crate::quantities::{Area, Length, Power, SPEED_OF_LIGHT};

/// Rectangular event field with its lower-left corner at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventField {
    width: Length,
    height: Length,
}

impl EventField {
    pub fn new(width: Length, height: Length) -> Self {
        Self { width, height }
    }

    /// Square field with the given area.
    pub fn square(area: Area) -> Self {
        let side = Length::meters(area.as_square_meters().sqrt()).expect("sqrt of positive area");
        Self::new(side, side)
    }

    pub fn width(&self) -> Length {
        self.width
    }

    pub fn height(&self) -> Length {
        self.height
    }

    pub fn area(&self) -> Area {
        Area::square_meters(self.width.as_meters() * self.height.as_meters())
            .expect("product of positive lengths")
    }

    /// Closed-rectangle membership test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width.as_meters()).contains(&x) && (0.0..=self.height.as_meters()).contains(&y)
    }
}

/// Source count as the analytic real and as the integer a deployment needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceCount {
    pub exact: f64,
    pub required: u64,
}

impl SourceCount {
    fn from_exact(exact: f64) -> Self {
        // ceil of a positive value is at least 1
        Self {
            exact,
            required: exact.ceil() as u64,
        }
    }
}

/// `k = area / (pi r_rf^2)`: disc count with zero packing loss.
pub fn source_count_from_range(area: Area, r_rf: Length) -> SourceCount {
    let r = r_rf.as_meters();
    SourceCount::from_exact(area.as_square_meters() / (PI * r * r))
}

/// Closed-form source count in terms of the radio parameters:
/// `k = 2 pi area f^2 v_min^2 / (c^2 p_t g_t g_r (r_r + r_l))`.
pub fn source_count(area: Area, radio: &RadioParams) -> SourceCount {
    let f = radio.f().as_hertz();
    let v = radio.v_min().as_volts();
    let numerator = 2.0 * PI * area.as_square_meters() * f * f * v * v;
    let denominator = SPEED_OF_LIGHT * SPEED_OF_LIGHT
        * radio.gain_power_product()
        * radio.series_resistance();
    SourceCount::from_exact(numerator / denominator)
}

/// Transmit power at which exactly `k` sources cover `area`. The transmit
/// power already stored in `radio` is ignored.
pub fn required_power(area: Area, k: u64, radio: &RadioParams) -> Result<Power> {
    if k < 1 {
        return Err(Error::InvalidSourceCount(k));
    }
    let f = radio.f().as_hertz();
    let v = radio.v_min().as_volts();
    let numerator = 2.0 * PI * area.as_square_meters() * f * f * v * v;
    let denominator = SPEED_OF_LIGHT * SPEED_OF_LIGHT
        * k as f64
        * radio.g_t().as_linear()
        * radio.g_r().as_linear()
        * radio.series_resistance();
    Power::watts(numerator / denominator)
}

/// Largest area `k` sources of this radio can cover: `k pi r_rf^2`.
pub fn max_area(k: u64, radio: &RadioParams) -> Result<Area> {
    if k < 1 {
        return Err(Error::InvalidSourceCount(k));
    }
    let r = max_range(radio).as_meters();
    Area::square_meters(k as f64 * PI * r * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::{Frequency, Gain, Resistance, Voltage};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn area(a: f64) -> Area {
        Area::square_meters(a).unwrap()
    }

    fn section4_radio() -> RadioParams {
        RadioParams::new(
            Power::watts(1.0).unwrap(),
            Gain::from_dbi(8.5).unwrap(),
            Gain::from_dbi(8.5).unwrap(),
            Frequency::hertz(1e9).unwrap(),
            Voltage::volts(0.1).unwrap(),
            Resistance::ohms(50.0).unwrap(),
            Resistance::ohms(50.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn field_area_and_square() {
        let f = EventField::new(Length::meters(3.0).unwrap(), Length::meters(7.0).unwrap());
        assert_relative_eq!(f.area().as_square_meters(), 21.0, max_relative = 1e-12);
        let sq = EventField::square(area(4e4));
        assert_relative_eq!(sq.width().as_meters(), 200.0, max_relative = 1e-12);
        assert!(f.contains(0.0, 7.0));
        assert!(!f.contains(3.0001, 1.0));
    }

    #[test]
    fn count_from_range_examples() {
        let k = source_count_from_range(area(4e4), Length::meters(13.49).unwrap());
        assert!((k.exact - 69.97).abs() < 0.1);
        assert_eq!(k.required, 70);

        let r = Length::meters(5.0).unwrap();
        let k = source_count_from_range(area(PI * 25.0), r);
        assert_relative_eq!(k.exact, 1.0, max_relative = 1e-15);
        assert_eq!(k.required, 1);

        let a = source_count_from_range(area(1234.0), r).exact;
        let b = source_count_from_range(area(2468.0), r).exact;
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-15);
    }

    #[test]
    fn closed_form_anchor() {
        let k = source_count(area(4e4), &section4_radio());
        assert!((k.exact - 5.58).abs() <= 0.02, "k = {}", k.exact);
        assert_eq!(k.required, 6);
    }

    #[test]
    fn doubling_frequency_quadruples_count() {
        let radio = section4_radio();
        let a = source_count(area(4e4), &radio).exact;
        let b = source_count(area(4e4), &radio.with_frequency(Frequency::hertz(2e9).unwrap())).exact;
        assert_relative_eq!(b, 4.0 * a, max_relative = 1e-15);
    }

    #[test]
    fn required_power_examples() {
        let radio = section4_radio();
        let p = required_power(area(4e4), 6, &radio).unwrap();
        assert!((p.as_watts() - 0.929).abs() < 0.005, "p = {}", p.as_watts());

        let p12 = required_power(area(4e4), 12, &radio).unwrap();
        assert_relative_eq!(p12.as_watts(), p.as_watts() / 2.0, max_relative = 1e-15);

        let back = source_count(area(4e4), &radio.with_power(p).unwrap()).exact;
        assert_relative_eq!(back, 6.0, max_relative = 1e-9);

        assert!(matches!(
            required_power(area(4e4), 0, &radio),
            Err(Error::InvalidSourceCount(0))
        ));
    }

    #[test]
    fn max_area_examples() {
        let radio = RadioParams::from_gain_product(
            Power::watts(4.0).unwrap(),
            Frequency::hertz(1e9).unwrap(),
            Voltage::volts(0.1).unwrap(),
            Resistance::ohms(50.0).unwrap(),
            Resistance::ohms(50.0).unwrap(),
        )
        .unwrap();
        let r = max_range(&radio).as_meters();
        assert_relative_eq!(max_area(1, &radio).unwrap().as_square_meters(), PI * r * r);
        let a5 = max_area(5, &radio).unwrap();
        assert!((a5.as_square_meters() - 2866.0).abs() / 2866.0 < 0.01);
        assert_relative_eq!(source_count(a5, &radio).exact, 5.0, max_relative = 1e-9);
        assert!(max_area(0, &radio).is_err());
    }

    proptest! {
        #[test]
        fn required_is_ceiling(a in 1.0f64..1e7, r in 0.1f64..1e3) {
            let k = source_count_from_range(area(a), Length::meters(r).unwrap());
            prop_assert!(k.required >= 1);
            prop_assert!(k.required as f64 >= k.exact);
            prop_assert!((k.required as f64) - k.exact < 1.0);
        }
    }
}
