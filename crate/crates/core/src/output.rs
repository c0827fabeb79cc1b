//! Number formatting shared by every CSV the crate writes.

/// 17 significant digits, enough for an exact f64 round trip.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// Like [`sci`] but blank for a missing value.
pub fn sci_opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}
