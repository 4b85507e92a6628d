//! Sweep grids.

/// `count` points from `lo` to `hi` inclusive, evenly spaced in log scale.
/// Both endpoints are returned exactly.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / (count - 1) as f64;
            let mut out: Vec<f64> = (0..count).map(|k| (a + step * k as f64).exp()).collect();
            out[0] = lo;
            out[count - 1] = hi;
            out
        }
    }
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn lin_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            let mut out: Vec<f64> = (0..count).map(|k| lo + step * k as f64).collect();
            out[count - 1] = hi;
            out
        }
    }
}
