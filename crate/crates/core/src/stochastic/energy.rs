use crate::error::{Error, Result};
use crate::ifs::IfsSpec;

use super::occupancy::OccupancyMap;

/// Largest `Z_n` accepted by [`energy_estimate`]; the pair sum is quadratic in it.
pub const MAX_ENERGY_WORDS: usize = 1 << 16;

/// Discrete `t`-energy of the level-`n` random measure.
///
/// Sums `m(w) m(w') |mid(I_w) - mid(I_w')|^(-t)` over ordered pairs of distinct
/// occupied words, with each word's mass placed at the midpoint of its basic
/// interval. Pairs inside the same level-`n` interval (the diagonal) are
/// dropped, so this is a truncation of the energy at scale `r^n` and a
/// diagnostic only.
pub fn energy_estimate(occ: &OccupancyMap, spec: &IfsSpec, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "energy exponent t = {t} must be positive"
        )));
    }
    if occ.alphabet() != spec.maps() {
        return Err(Error::InvalidParameter(format!(
            "occupancy alphabet {} does not match the IFS with {} maps",
            occ.alphabet(),
            spec.maps()
        )));
    }
    if occ.z() > MAX_ENERGY_WORDS {
        return Err(Error::BudgetExceeded(format!(
            "Z_{} = {} exceeds the energy limit of {MAX_ENERGY_WORDS} words",
            occ.level(),
            occ.z()
        )));
    }
    let total = occ.total_paths() as f64;
    let points = occ
        .iter()
        .map(|(w, c)| Ok((spec.interval_of_symbols(w)?.midpoint(), c as f64 / total)))
        .collect::<Result<Vec<_>>>()?;
    let mut energy = 0.0;
    for (i, &(x, mx)) in points.iter().enumerate() {
        let mut row = 0.0;
        for &(y, my) in &points[i + 1..] {
            row += my * (x - y).abs().powf(-t);
        }
        energy += mx * row;
    }
    Ok(2.0 * energy)
}
