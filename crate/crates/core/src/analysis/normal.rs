//! Standard normal CDF.
//!
//! Hart's double-precision rational approximation of the normal tail for
//! |z| < 7.07 and a five-term continued fraction beyond, as given in
//! G. West, "Better approximations to cumulative normal functions" (2005).
//! Absolute error is below 1e-14 over the whole line.

use super::AnalysisError;

const NUMERATOR: [f64; 7] = [
    3.526_249_659_989_11e-2,
    0.700_383_064_443_688,
    6.373_962_203_531_65,
    33.912_866_078_383,
    112.079_291_497_871,
    221.213_596_169_931,
    220.206_867_912_376,
];

const DENOMINATOR: [f64; 8] = [
    8.838_834_764_831_84e-2,
    1.755_667_163_182_64,
    16.064_177_579_207,
    86.780_732_202_946_1,
    296.564_248_779_674,
    637.333_633_378_831,
    793.826_512_519_948,
    440.413_735_824_752,
];

const SQRT_TAU: f64 = 2.506_628_274_631_000_5;

/// Φ(z) for the standard normal.
pub fn std_normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let x = z.abs();
    let tail = if x > 37.0 {
        0.0
    } else {
        let e = (-0.5 * x * x).exp();
        if x < 7.071_067_811_865_47 {
            let horner = |coeffs: &[f64]| coeffs.iter().fold(0.0, |acc, c| acc * x + c);
            e * horner(&NUMERATOR) / horner(&DENOMINATOR)
        } else {
            let cf = x + 1.0 / (x + 2.0 / (x + 3.0 / (x + 4.0 / (x + 0.65))));
            e / cf / SQRT_TAU
        }
    };
    if z > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Φ((x − mean) / std).
pub fn normal_cdf(x: f64, mean: f64, std: f64) -> Result<f64, AnalysisError> {
    if !(std.is_finite() && std > 0.0) {
        return Err(AnalysisError::NonPositiveStd(std));
    }
    Ok(std_normal_cdf((x - mean) / std))
}
