//! Float intrinsics routed through `std` when available, `libm` otherwise.

#![allow(dead_code)]

macro_rules! shim {
    ($name:ident, $std:ident, $libm:ident) => {
        #[cfg(feature = "std")]
        #[inline(always)]
        pub fn $name(x: f64) -> f64 {
            x.$std()
        }
        #[cfg(not(feature = "std"))]
        #[inline(always)]
        pub fn $name(x: f64) -> f64 {
            libm::$libm(x)
        }
    };
}

shim!(exp, exp, exp);
shim!(ln, ln, log);
shim!(ln_1p, ln_1p, log1p);
shim!(exp_m1, exp_m1, expm1);
shim!(atan, atan, atan);
shim!(sqrt, sqrt, sqrt);

#[inline(always)]
pub fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & (u64::MAX >> 1))
}

#[inline(always)]
pub fn max(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

#[inline(always)]
pub fn min(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

/// `sqrt(a^2 + b^2)` without intermediate overflow, as used inside the
/// eigensolver rotations.
pub fn hypot(a: f64, b: f64) -> f64 {
    let (a, b) = (abs(a), abs(b));
    let (big, small) = if a > b { (a, b) } else { (b, a) };
    if big == 0.0 {
        return 0.0;
    }
    let r = small / big;
    big * sqrt(1.0 + r * r)
}
