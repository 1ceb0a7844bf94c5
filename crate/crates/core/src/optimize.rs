//! Derivative-free optimizers: a guarded 1-D line search and Nelder-Mead.

/// Best point found by a 1-D search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineOpt {
    pub arg: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Sample points for a 1-D scan of `[lo, hi]`: a uniform grid of `n` points
/// plus log-spaced probes approaching each endpoint from `10⁻³` to `10⁻¹⁵`
/// (relative to the interval length). The probes catch extrema squeezed
/// against an endpoint, far below the grid spacing.
pub fn scan_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let w = hi - lo;
    let mut pts: Vec<f64> = (0..n).map(|i| lo + w * i as f64 / (n - 1) as f64).collect();
    for k in 12..=60 {
        let d = w * 10f64.powf(-(k as f64) / 4.0);
        pts.push(lo + d);
        pts.push(hi - d);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.retain(|x| (lo..=hi).contains(x));
    pts
}

/// Maximizes `f` on `[lo, hi]`: scan [`scan_points`], then golden-section
/// refinement inside the bracket formed by the best sample's neighbours,
/// down to bracket width `tol`. Never returns worse than the best sample.
pub fn maximize_1d<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, grid: usize, tol: f64) -> LineOpt {
    let pts = scan_points(lo, hi, grid);
    let vals: Vec<f64> = pts.iter().map(|&x| f(x)).collect();
    let mut evaluations = pts.len();
    let best = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut result = LineOpt {
        arg: pts[best],
        value: vals[best],
        evaluations,
    };
    let mut a = pts[best.saturating_sub(1)];
    let mut b = pts[(best + 1).min(pts.len() - 1)];
    if b - a <= tol {
        return result;
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    evaluations += 2;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        evaluations += 1;
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > result.value {
            result.arg = x;
            result.value = v;
        }
    }
    result.evaluations = evaluations;
    result
}

pub fn minimize_1d<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, grid: usize, tol: f64) -> LineOpt {
    let mut r = maximize_1d(|x| -f(x), lo, hi, grid, tol);
    r.value = -r.value;
    r
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOpt {
    pub arg: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` from `start` with the standard Nelder-Mead moves
/// (reflection 1, expansion 2, contraction ½, shrink ½).
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    step: f64,
    ftol: f64,
    max_evals: usize,
) -> SimplexOpt {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += if v[i].abs() > 1e-8 { step * v[i].abs().max(0.1) } else { step };
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;
    let mut order: Vec<usize> = (0..=n).collect();

    while evals < max_evals {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        if (vals[worst] - vals[best]).abs() <= ftol * (1.0 + vals[best].abs()) {
            break;
        }
        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / n as f64;
            }
        }
        let towards = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = towards(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < vals[best] {
            let xe = towards(-2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[worst] = xe;
                vals[worst] = fe;
            } else {
                simplex[worst] = xr;
                vals[worst] = fr;
            }
        } else if fr < vals[second] {
            simplex[worst] = xr;
            vals[worst] = fr;
        } else {
            let (xc, fc) = if fr < vals[worst] {
                let x = towards(-0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = towards(0.5);
                let v = f(&x);
                (x, v)
            };
            evals += 1;
            if fc < vals[worst].min(fr) {
                simplex[worst] = xc;
                vals[worst] = fc;
            } else {
                let anchor = simplex[best].clone();
                for &i in &order[1..] {
                    for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                        *x = a + 0.5 * (*x - a);
                    }
                    vals[i] = f(&simplex[i]);
                }
                evals += n;
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    SimplexOpt {
        arg: simplex[best].clone(),
        value: vals[best],
        evaluations: evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_search_interior() {
        let r = maximize_1d(|x| -(x - 0.3141).powi(2), -1.0, 1.0, 2001, 1e-12);
        assert!((r.arg - 0.3141).abs() < 1e-6);
        assert!(r.value <= 0.0 && r.value > -1e-12);
    }

    #[test]
    fn line_search_near_endpoint() {
        // maximum at x = 1 − 10⁻⁸, far below the grid spacing
        let peak = 1.0 - 1e-8;
        let r = maximize_1d(|x| -((x - peak) / 1e-9).powi(2), -1.0, 1.0, 2001, 1e-15);
        assert!((r.arg - peak).abs() < 1e-10, "{}", r.arg);
    }

    #[test]
    fn line_search_multimodal_takes_global() {
        let f = |x: f64| (5.0 * x).sin() + 0.3 * x;
        let r = maximize_1d(f, -3.0, 3.0, 2001, 1e-12);
        let brute = (0..600001).map(|i| f(-3.0 + 6.0 * i as f64 / 600000.0)).fold(f64::MIN, f64::max);
        assert!(r.value >= brute - 1e-12);
        let m = minimize_1d(f, -3.0, 3.0, 2001, 1e-12);
        assert!(m.value <= -brute + 0.61);
    }

    #[test]
    fn scan_points_sorted_in_range() {
        let pts = scan_points(0.0, 1.0, 11);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 1.0);
        assert!(pts[1] < 1e-14);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let rosen = |v: &[f64]| (1.0 - v[0]).powi(2) + 100.0 * (v[1] - v[0] * v[0]).powi(2);
        let r = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 1e-16, 20_000);
        assert!((r.arg[0] - 1.0).abs() < 1e-4 && (r.arg[1] - 1.0).abs() < 1e-4);
    }
}
