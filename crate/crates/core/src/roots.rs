//! Bracketing root finder shared by the fixed-point and entropy equations.

/// Bisection on `[lo, hi]` for a continuous `f` whose sign at `lo` is
/// `lo_sign` (either `-1.0` or `1.0`) and opposite at `hi`.
///
/// The sign at the left end is passed in rather than evaluated so that callers
/// can bracket roots at points where `f` is known analytically but loses
/// precision numerically (e.g. `x -> h(x) - x` near a repelling zero at 0).
/// Runs until the bracket stops shrinking in floating point.
pub fn bisect<F>(mut lo: f64, mut hi: f64, lo_sign: f64, f: F) -> f64
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo < hi);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let value = f(mid);
        if value == 0.0 {
            return mid;
        }
        if value.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Return whichever end has the smaller residual.
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}
