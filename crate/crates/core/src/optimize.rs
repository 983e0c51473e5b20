//! Golden-section search for scalar minimisation on a bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenSection {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

/// Minimises a unimodal `f` on `[lo, hi]` until the bracket is narrower than
/// `tol`. Returns the midpoint of the final bracket.
pub fn golden_section_minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> GoldenSection {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evaluations = 2;
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evaluations += 1;
    }
    let x = 0.5 * (a + b);
    GoldenSection {
        x,
        fx: f(x),
        evaluations: evaluations + 1,
    }
}
