//! dB / dBm / linear conversions.
//!
//! Every quantity inside the crate is linear (watts, ratios, hertz, meters);
//! decibel domains exist only at the configuration and reporting boundary.
//! Keeping the conversion in one place avoids the classic mixed-domain bug.

/// Convert a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Convert a power in watts to dBm.
///
/// Returns `-inf` for zero input.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Convert a dB value to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power ratio to dB.
pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}
