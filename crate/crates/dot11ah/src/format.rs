//! Fixed numeric formatting shared by every CSV and plot.

/// `x` rounded to `digits` significant digits, without exponent notation.
pub fn sig(x: f64, digits: u32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.999995 -> 10.00000).
    let carried = text
        .trim_start_matches('-')
        .split('.')
        .next()
        .map_or(0, str::len) as i32;
    if decimals > 0 && carried > magnitude.max(0) + 1 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        text
    }
}

/// Throughputs and durations.
pub fn sig6(x: f64) -> String {
    sig(x, 6)
}

/// Distances, one decimal metre.
pub fn meters(x: f64) -> String {
    format!("{x:.1}")
}

/// Shortest round-trip representation, used for inputs such as PER.
pub fn plain(x: f64) -> String {
    format!("{x}")
}
