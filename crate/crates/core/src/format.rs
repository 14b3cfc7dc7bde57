//! Number formatting shared by the CSV writers.

/// Scientific notation with 15 significant digits, e.g. `1.82871215298480e-2`.
pub fn sci15(x: f64) -> String {
    format!("{x:.14e}")
}
