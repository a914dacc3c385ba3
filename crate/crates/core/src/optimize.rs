//! One-dimensional derivative-free maximization.

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol`. If `f` takes the same
/// value at a handful of probe points it is treated as flat and the
/// midpoint is returned.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    assert!(lo <= hi && tol > 0.0);

    let probes: Vec<f64> = (0..=8)
        .map(|k| f(lo + (hi - lo) * k as f64 / 8.0))
        .collect();
    if probes.iter().all(|&v| v == probes[0]) {
        let x = 0.5 * (lo + hi);
        return Maximum {
            x,
            value: f(x),
            iterations: 0,
        };
    }

    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while b - a > tol && iterations < 200 {
        iterations += 1;
        if f1 == f2 {
            // unimodal: the peak lies between two equal probes
            a = x1;
            b = x2;
            x1 = b - INV_PHI * (b - a);
            x2 = a + INV_PHI * (b - a);
            f1 = f(x1);
            f2 = f(x2);
        } else if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (a + b);
    Maximum {
        x,
        value: f(x),
        iterations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let m = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((m.x - 0.3).abs() < 1e-8);
        assert!(m.iterations > 0);
    }

    #[test]
    fn finds_boundary_peak() {
        let m = golden_section_max(|x| x, 0.0, 2.0, 1e-10);
        assert!((m.x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn plateau_peak_kept_inside_bracket() {
        // equal probes on a flat top must not discard the peak
        let f = |x: f64| {
            if (0.3..=0.7).contains(&x) {
                1.0
            } else {
                1.0 - (x - 0.5).abs()
            }
        };
        let m = golden_section_max(f, 0.0, 1.0, 1e-10);
        assert!((0.3..=0.7).contains(&m.x));
        assert_eq!(m.value, 1.0);
    }

    #[test]
    fn flat_returns_midpoint() {
        let m = golden_section_max(|_| 0.0, 0.0, 1.0, 1e-10);
        assert_eq!(m.x, 0.5);
        assert_eq!(m.iterations, 0);
    }
}
