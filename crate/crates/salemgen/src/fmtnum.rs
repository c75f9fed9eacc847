//! Fixed 12-significant-digit decimal formatting so stdout and CSV bytes
//! are stable across platforms and runs.

pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000000".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).clamp(0, 40) as usize;
    format!("{v:.decimals$}")
}
