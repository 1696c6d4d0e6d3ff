//! Reference computations written directly from the model equations, kept
//! apart from the library so that tests compare two implementations.
#![allow(dead_code)]

use allelofear::model::ModelParams;

pub type P2 = [f64; 2];

pub fn field(p: &ModelParams, s: P2) -> P2 {
    let [x, y] = s;
    [
        p.b * x * (1.0 - x - p.c * y),
        y * (1.0 / (1.0 + p.k * x) - y - p.a * x - p.m * x * y),
    ]
}

/// Interior condition after substituting the `x`-nullcline `y = (1 - x)/c`
/// and clearing the denominators `c (1 + k x)`.
pub fn nullcline_residual(p: &ModelParams, x: f64) -> f64 {
    p.c - (1.0 + p.k * x) * ((1.0 - x) + p.a * p.c * x + p.m * x * (1.0 - x))
}

pub fn y_on_nullcline(p: &ModelParams, x: f64) -> f64 {
    (1.0 - x) / p.c
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `f` on a uniform grid over `[lo, hi]`, refined by
/// bisection. Exact zeros at grid nodes are reported once.
pub fn scan_roots(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil() as usize;
    let at = |i: usize| lo + (hi - lo) * i as f64 / n as f64;
    let mut out = Vec::new();
    let mut f0 = f(at(0));
    for i in 1..=n {
        let x1 = at(i);
        let f1 = f(x1);
        if f1 == 0.0 {
            if i < n {
                out.push(x1);
            }
        } else if f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            out.push(bisect(f, at(i - 1), x1));
        }
        f0 = f1;
    }
    out
}

/// Interior equilibria `(x, y)` with `x` in `(0, 1)`, from the dense scan.
pub fn interior_points(p: &ModelParams, step: f64) -> Vec<P2> {
    scan_roots(&|x| nullcline_residual(p, x), 0.0, 1.0, step)
        .into_iter()
        .filter(|x| *x > 0.0 && *x < 1.0)
        .map(|x| [x, y_on_nullcline(p, x)])
        .collect()
}

/// Central-difference Jacobian of [`field`].
pub fn fd_jacobian(p: &ModelParams, s: P2, h: f64) -> [[f64; 2]; 2] {
    let mut j = [[0.0; 2]; 2];
    for c in 0..2 {
        let (mut sp, mut sm) = (s, s);
        sp[c] += h;
        sm[c] -= h;
        let (fp, fm) = (field(p, sp), field(p, sm));
        for r in 0..2 {
            j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    j
}

pub fn is_saddle(p: &ModelParams, s: P2) -> bool {
    let j = fd_jacobian(p, s, 1e-7);
    j[0][0] * j[1][1] - j[0][1] * j[1][0] < 0.0
}

pub fn is_stable(p: &ModelParams, s: P2) -> bool {
    let j = fd_jacobian(p, s, 1e-7);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    det > 0.0 && j[0][0] + j[1][1] < 0.0
}

/// Classical fixed-step Runge-Kutta.
pub fn rk4(p: &ModelParams, mut s: P2, t_end: f64, dt: f64) -> P2 {
    let n = (t_end / dt).round() as usize;
    let h = t_end / n as f64;
    let add = |a: P2, b: P2, w: f64| [a[0] + w * b[0], a[1] + w * b[1]];
    for _ in 0..n {
        let k1 = field(p, s);
        let k2 = field(p, add(s, k1, 0.5 * h));
        let k3 = field(p, add(s, k2, 0.5 * h));
        let k4 = field(p, add(s, k3, h));
        for i in 0..2 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    s
}

/// Divergence of `(F, G) / (x y)` by central differences.
pub fn fd_dulac(p: &ModelParams, x: f64, y: f64, h: f64) -> f64 {
    let scaled = |x: f64, y: f64| {
        let f = field(p, [x, y]);
        [f[0] / (x * y), f[1] / (x * y)]
    };
    (scaled(x + h, y)[0] - scaled(x - h, y)[0]) / (2.0 * h) + (scaled(x, y + h)[1] - scaled(x, y - h)[1]) / (2.0 * h)
}

pub fn sup_dist(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
}
