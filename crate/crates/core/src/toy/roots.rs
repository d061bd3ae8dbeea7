use super::polynomial::Polynomial;

/// Default number of scan cells per search interval.
pub const SCAN_CELLS: usize = 2000;
/// Absolute polishing tolerance on root locations.
pub const ROOT_TOL: f64 = 1e-13;

/// Sign-changing roots of `p` in `[lo, hi]`, ascending.
///
/// The interval is cut into `cells` equal cells; each cell whose endpoint
/// values differ in sign is narrowed by Newton steps safeguarded with
/// bisection. Exact zeros at grid nodes are reported once.
pub fn find_roots(p: &Polynomial, lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Vec::new();
    }
    let cells = cells.max(1);
    let node = |i: usize| {
        if i == cells {
            hi
        } else {
            lo + (hi - lo) * i as f64 / cells as f64
        }
    };
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = p.eval(a);
    if fa == 0.0 {
        roots.push(a);
    }
    for i in 1..=cells {
        let b = node(i);
        let fb = p.eval(b);
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(polish(p, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    roots
}

/// Safeguarded Newton on a sign-change bracket `[a, b]` with `f(a) = fa`.
fn polish(p: &Polynomial, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let neg_at_a = fa < 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (fx, dfx) = p.eval_with_derivative(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == neg_at_a {
            a = x;
        } else {
            b = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - x).abs();
        x = next;
        if step <= ROOT_TOL || b - a <= ROOT_TOL {
            break;
        }
    }
    x
}
