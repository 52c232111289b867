//! Scalar line searches and grid refinement used by the exponent searches.

/// Golden-section minimization of `f` on `[a, b]`.
///
/// Returns `(x, f(x))`. Assumes `f` is unimodal on the bracket; on the convex
/// inner problems of the exponent searches this is exact, elsewhere it is
/// paired with a coarse pre-scan.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618033988749895;
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    if hi - lo < tol {
        let x = 0.5 * (lo + hi);
        return (x, f(x));
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Golden-section maximization of `f` on `[a, b]`, with a coarse pre-scan to
/// pick the bracket. Returns `(x, f(x))`.
pub fn scan_golden_max<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    scan_points: usize,
    tol: f64,
) -> (f64, f64) {
    debug_assert!(scan_points >= 3);
    let step = (b - a) / (scan_points - 1) as f64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    let vals: Vec<f64> = (0..scan_points)
        .map(|i| {
            let v = f(a + step * i as f64);
            if v > best_v {
                best_v = v;
                best_i = i;
            }
            v
        })
        .collect();
    let _ = vals;
    let lo = a + step * best_i.saturating_sub(1) as f64;
    let hi = (a + step * (best_i + 1) as f64).min(b);
    let (x, neg) = golden_min(|x| -f(x), lo, hi, tol);
    (x, -neg)
}

/// One-dimensional grid minimization with local refinement.
///
/// Scans `[lo, hi]` at `step`, then zooms `rounds` times by a factor of 10
/// around the incumbent. Ties keep the earliest (smallest) grid point, so
/// witnesses are deterministic. Returns `(argmin, min)`.
pub fn grid_refine_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    step: f64,
    rounds: usize,
) -> (f64, f64) {
    let mut window = (lo, hi);
    let mut step = step;
    let mut best_x = lo;
    let mut best_v = f64::INFINITY;
    for round in 0..=rounds {
        let (a, b) = window;
        let n = ((b - a) / step).round() as usize;
        let n = n.max(1);
        for i in 0..=n {
            let x = (a + step * i as f64).min(b);
            let v = f(x);
            if v < best_v {
                best_v = v;
                best_x = x;
            }
        }
        if round == rounds {
            break;
        }
        window = ((best_x - step).max(lo), (best_x + step).min(hi));
        step /= 10.0;
    }
    (best_x, best_v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_min() {
        let (x, v) = golden_min(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn scan_golden_max_handles_edge_maximum() {
        let (x, v) = scan_golden_max(|x| x, 0.0, 1.0, 17, 1e-9);
        assert!((x - 1.0).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn grid_refine_zooms_in() {
        let (x, v) = grid_refine_min(|x| (x - 0.123456).abs(), 0.0, 1.0, 1e-2, 3);
        assert!((x - 0.123456).abs() < 1e-5);
        assert!(v < 1e-5);
    }
}
