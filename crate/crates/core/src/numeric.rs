//! Reproducible integer thresholds derived from float powers.
//!
//! Quantities like `ceil(n^eps)` and `floor(n^(1-2*eps))` drive the
//! construction and the hard-instance generators. `powf` can land a hair
//! below or above an exact integer (`1024^0.6` is exactly 64 but evaluates
//! to `63.99999999999999`), which would flip a floor/ceil and change every
//! downstream output. Values within `1e-9` of an integer are snapped first.

const SNAP: f64 = 1e-9;

fn snapped_pow(base: f64, exponent: f64) -> f64 {
    assert!(base > 0.0, "power base must be positive, got {base}");
    let v = (exponent * base.ln()).exp();
    let r = v.round();
    if (v - r).abs() < SNAP {
        r
    } else {
        v
    }
}

/// Snap values within `1e-9` of an integer.
pub fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < SNAP {
        r
    } else {
        x
    }
}

/// `ceil(base^exponent)` with integer snapping.
pub fn pow_ceil(base: f64, exponent: f64) -> usize {
    snapped_pow(base, exponent).ceil() as usize
}

/// `floor(base^exponent)` with integer snapping.
pub fn pow_floor(base: f64, exponent: f64) -> usize {
    snapped_pow(base, exponent).floor() as usize
}

/// `ceil(log2(n))` for `n >= 1`, exact.
pub fn ceil_log2(n: usize) -> u32 {
    assert!(n >= 1);
    (n as u64).next_power_of_two().trailing_zeros()
}
