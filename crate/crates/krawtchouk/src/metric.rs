//! The windowed normalized error against the exact table.

use std::ops::RangeInclusive;

use crate::exact::ExactTable;
use crate::regions::ApproxValue;

/// The five integer abscissae nearest to `x` inside `[0, N]`.
pub fn window(x: usize, big_n: usize) -> RangeInclusive<usize> {
    let lo = (x as i64 - 2).min(big_n as i64 - 4).max(0) as usize;
    lo..=(lo + 4).min(big_n)
}

/// `ln max |K_n(t)|` over the window around `x`.
pub fn window_ln_max(table: &ExactTable, n: usize, x: usize) -> f64 {
    window(x, table.big_n()).map(|t| table.ln_abs(n, t)).fold(f64::NEG_INFINITY, f64::max)
}

/// `|approx − K_n(x)| / max |K_n(t)|` over the window around `x`.
pub fn normalized_error(approx: &ApproxValue, table: &ExactTable, n: usize, x: usize) -> f64 {
    let ln_ref = window_ln_max(table, n, x);
    let exact = table.sign(n, x) as f64 * (table.ln_abs(n, x) - ln_ref).exp();
    (approx.relative_to(ln_ref) - exact).abs()
}

/// The same metric for two approximations, the second standing in for the exact value.
pub fn normalized_gap(a: &ApproxValue, b: &ApproxValue, table: &ExactTable, n: usize, x: usize) -> f64 {
    let ln_ref = window_ln_max(table, n, x);
    (a.relative_to(ln_ref) - b.relative_to(ln_ref)).abs()
}
