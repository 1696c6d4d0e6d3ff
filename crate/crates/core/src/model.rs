//! Nondimensional kinetics, Jacobian, the interior cubic and the parameter thresholds.
//!
//! The system on the closed positive quadrant is
//!
//! ```text
//! x' = b x (1 - x - c y)
//! y' = y (1/(1 + k x) - y - a x - m x y)
//! ```
//!
//! with `a, b, c > 0` and `k, m >= 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `[x, y]` of the phase plane.
pub type State2 = [f64; 2];

/// Row-major 2x2 matrix `[[B1, B2], [B3, B4]]`.
pub type Jacobian2 = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k: f64,
    pub m: f64,
}

/// Scalar parameter selector used by scans and transversality tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    A,
    B,
    C,
    K,
    M,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::B => "b",
            Param::C => "c",
            Param::K => "k",
            Param::M => "m",
        }
    }
}

impl std::str::FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Param::A),
            "b" => Ok(Param::B),
            "c" => Ok(Param::C),
            "k" => Ok(Param::K),
            "m" => Ok(Param::M),
            other => Err(Error::Config(format!("unknown parameter `{other}`"))),
        }
    }
}

impl ModelParams {
    pub fn new(a: f64, b: f64, c: f64, k: f64, m: f64) -> Result<Self> {
        let p = ModelParams { a, b, c, k, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("a", self.a), ("b", self.b), ("c", self.c)];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Domain {
                    name,
                    value,
                    reason: "must be finite and > 0",
                });
            }
        }
        for (name, value) in [("k", self.k), ("m", self.m)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::Domain {
                    name,
                    value,
                    reason: "must be finite and >= 0",
                });
            }
        }
        Ok(())
    }

    pub fn get(&self, which: Param) -> f64 {
        match which {
            Param::A => self.a,
            Param::B => self.b,
            Param::C => self.c,
            Param::K => self.k,
            Param::M => self.m,
        }
    }

    pub fn with(mut self, which: Param, value: f64) -> Self {
        match which {
            Param::A => self.a = value,
            Param::B => self.b = value,
            Param::C => self.c = value,
            Param::K => self.k = value,
            Param::M => self.m = value,
        }
        self
    }
}

/// Dimensional parameters. `k1` and `k2` are the density scalings used for
/// `x1 = k1 x`, `x2 = k2 y`; [`RawParams::with_natural_scalings`] sets them
/// to the single-species carrying capacities `r1/alpha1`, `r2/alpha2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub r1: f64,
    pub r2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eta: f64,
    pub xi: f64,
    pub k1: f64,
    pub k2: f64,
}

impl RawParams {
    #[allow(clippy::too_many_arguments)]
    pub fn with_natural_scalings(
        r1: f64,
        r2: f64,
        alpha1: f64,
        alpha2: f64,
        beta1: f64,
        beta2: f64,
        eta: f64,
        xi: f64,
    ) -> Self {
        RawParams {
            r1,
            r2,
            alpha1,
            alpha2,
            beta1,
            beta2,
            eta,
            xi,
            k1: r1 / alpha1,
            k2: r2 / alpha2,
        }
    }
}

pub fn nondimensionalize(raw: &RawParams) -> Result<ModelParams> {
    let strictly = [
        ("r1", raw.r1),
        ("r2", raw.r2),
        ("alpha1", raw.alpha1),
        ("alpha2", raw.alpha2),
        ("beta1", raw.beta1),
        ("beta2", raw.beta2),
        ("k1", raw.k1),
        ("k2", raw.k2),
    ];
    for (name, value) in strictly {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Domain {
                name,
                value,
                reason: "must be finite and > 0",
            });
        }
    }
    for (name, value) in [("eta", raw.eta), ("xi", raw.xi)] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Domain {
                name,
                value,
                reason: "must be finite and >= 0",
            });
        }
    }
    ModelParams::new(
        raw.beta2 * raw.k1 / raw.r2,
        raw.r1 / raw.r2,
        raw.beta1 * raw.k2 / raw.r1,
        raw.eta * raw.k1,
        raw.xi * raw.k1 * raw.k2 / raw.r2,
    )
}

#[inline]
pub(crate) fn kinetics_k(p: &ModelParams, k: f64, s: &State2) -> State2 {
    let [x, y] = *s;
    [
        p.b * x * (1.0 - x - p.c * y),
        y * (1.0 / (1.0 + k * x) - y - p.a * x - p.m * x * y),
    ]
}

#[inline]
pub(crate) fn jacobian_k(p: &ModelParams, k: f64, s: &State2) -> Jacobian2 {
    let [x, y] = *s;
    let q = 1.0 + k * x;
    [
        [-p.b * (2.0 * x + p.c * y - 1.0), -p.b * p.c * x],
        [
            -y * (k / (q * q) + p.a + p.m * y),
            1.0 / q - (2.0 * p.m * y + p.a) * x - 2.0 * y,
        ],
    ]
}

/// Vector field `(F, G)` at `s`.
#[inline]
pub fn kinetics(p: &ModelParams, s: &State2) -> State2 {
    kinetics_k(p, p.k, s)
}

pub fn jacobian(p: &ModelParams, s: &State2) -> Result<Jacobian2> {
    let q = 1.0 + p.k * s[0];
    if q.abs() < 1e-300 {
        return Err(Error::Singularity { x: s[0] });
    }
    Ok(jacobian_k(p, p.k, s))
}

/// Second derivatives: `[F_xx, F_xy, F_yy]` and `[G_xx, G_xy, G_yy]` packed as
/// two symmetric 2x2 matrices.
pub fn hessian(p: &ModelParams, s: &State2) -> [Jacobian2; 2] {
    let [x, y] = *s;
    let k = p.k;
    let q = 1.0 + k * x;
    let fxx = -2.0 * p.b;
    let fxy = -p.b * p.c;
    let gxx = 2.0 * k * k * y / (q * q * q);
    let gxy = -k / (q * q) - p.a - 2.0 * p.m * y;
    let gyy = -2.0 - 2.0 * p.m * x;
    [[[fxx, fxy], [fxy, 0.0]], [[gxx, gxy], [gxy, gyy]]]
}

/// Partial derivative of the vector field with respect to a parameter.
pub fn param_derivative(p: &ModelParams, which: Param, s: &State2) -> State2 {
    let [x, y] = *s;
    let q = 1.0 + p.k * x;
    match which {
        Param::A => [0.0, -x * y],
        Param::B => [x * (1.0 - x - p.c * y), 0.0],
        Param::C => [-p.b * x * y, 0.0],
        Param::K => [0.0, -x * y / (q * q)],
        Param::M => [0.0, -x * y * y],
    }
}

/// Partial derivative of the Jacobian with respect to a parameter.
pub fn jacobian_param_derivative(p: &ModelParams, which: Param, s: &State2) -> Jacobian2 {
    let [x, y] = *s;
    let k = p.k;
    let q = 1.0 + k * x;
    match which {
        Param::A => [[0.0, 0.0], [-y, -x]],
        Param::B => [[-(2.0 * x + p.c * y - 1.0), -p.c * x], [0.0, 0.0]],
        Param::C => [[-p.b * y, -p.b * x], [0.0, 0.0]],
        Param::K => [[0.0, 0.0], [-y * (1.0 - k * x) / (q * q * q), -x / (q * q)]],
        Param::M => [[0.0, 0.0], [-y * y, -2.0 * x * y]],
    }
}

/// Eigenvalues of a real 2x2 matrix, ordered by ascending real part.
/// Triangular matrices return their diagonal exactly.
pub fn eigenvalues(j: &Jacobian2) -> [Complex64; 2] {
    let [[p, q], [r, s]] = *j;
    let mut ev = if q == 0.0 || r == 0.0 {
        [Complex64::new(p, 0.0), Complex64::new(s, 0.0)]
    } else {
        let half_tr = 0.5 * (p + s);
        let half_diff = 0.5 * (p - s);
        let disc = half_diff * half_diff + q * r;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // avoid cancellation in the smaller-magnitude root
            let big = if half_tr >= 0.0 { half_tr + sq } else { half_tr - sq };
            let det = p * s - q * r;
            let small = if big != 0.0 { det / big } else { half_tr - sq };
            [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
        } else {
            let im = (-disc).sqrt();
            [Complex64::new(half_tr, -im), Complex64::new(half_tr, im)]
        }
    };
    if ev[0].re > ev[1].re || (ev[0].re == ev[1].re && ev[0].im > ev[1].im) {
        ev.swap(0, 1);
    }
    ev
}

pub fn mat_vec(j: &Jacobian2, v: &State2) -> State2 {
    [j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]]
}

pub fn transpose(j: &Jacobian2) -> Jacobian2 {
    [[j[0][0], j[1][0]], [j[0][1], j[1][1]]]
}

/// `u(x) = A1 x^3 + A2 x^2 + A3 x + A4`; the interior equilibria are its roots
/// in `(0, 1)` with `y = (1 - x)/c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cubic {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl Cubic {
    pub fn eval(&self, x: f64) -> f64 {
        ((self.a1 * x + self.a2) * x + self.a3) * x + self.a4
    }

    /// `v(x) = u'(x)`.
    pub fn deriv(&self, x: f64) -> f64 {
        (3.0 * self.a1 * x + 2.0 * self.a2) * x + self.a3
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        6.0 * self.a1 * x + 2.0 * self.a2
    }

    /// Discriminant `4 A2^2 - 12 A1 A3` of `v`.
    pub fn discriminant(&self) -> f64 {
        4.0 * self.a2 * self.a2 - 12.0 * self.a1 * self.a3
    }

    /// Larger root `x_v2` of `v` (the local minimum of `u` when `A1 > 0`).
    pub fn x_v2(&self) -> Option<f64> {
        let d = self.discriminant();
        if self.a1 == 0.0 || d < 0.0 {
            return None;
        }
        Some((-2.0 * self.a2 + d.sqrt()) / (6.0 * self.a1))
    }

    /// Real roots of `v`, ascending. Degenerate (lower-degree) cases are handled.
    pub fn critical_points(&self) -> Vec<f64> {
        let (qa, qb, qc) = (3.0 * self.a1, 2.0 * self.a2, self.a3);
        let scale = qa.abs().max(qb.abs()).max(qc.abs());
        if scale == 0.0 {
            return Vec::new();
        }
        if qa.abs() <= 1e-15 * scale {
            if qb.abs() <= 1e-15 * scale {
                return Vec::new();
            }
            return vec![-qc / qb];
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return Vec::new();
        }
        let sq = disc.sqrt();
        let sgn = if qb >= 0.0 { 1.0 } else { -1.0 };
        let t = -0.5 * (qb + sgn * sq);
        let mut r = if t != 0.0 { vec![t / qa, qc / t] } else { vec![0.0, 0.0] };
        r.sort_by(f64::total_cmp);
        if disc == 0.0 {
            r.truncate(1);
        }
        r
    }

    pub fn degree(&self) -> usize {
        if self.a1 != 0.0 {
            3
        } else if self.a2 != 0.0 {
            2
        } else if self.a3 != 0.0 {
            1
        } else {
            0
        }
    }

    /// Cauchy bound on the modulus of the real roots.
    pub fn root_bound(&self) -> f64 {
        let coeffs = [self.a1, self.a2, self.a3, self.a4];
        let lead_idx = coeffs.iter().position(|c| *c != 0.0).unwrap_or(3);
        let lead = coeffs[lead_idx].abs();
        if lead == 0.0 {
            return 1.0;
        }
        1.0 + coeffs[lead_idx + 1..]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max)
    }
}

pub fn cubic(p: &ModelParams) -> Cubic {
    let (a, c, k, m) = (p.a, p.c, p.k, p.m);
    Cubic {
        a1: k * m,
        a2: (1.0 - a * c - m) * k + m,
        a3: 1.0 - a * c - k - m,
        a4: c - 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `k* = 1/a - 1`, where `E1` loses hyperbolicity.
    pub k_star: f64,
    /// `m* = -1 + (2a - a^2) c`.
    pub m_star: f64,
    /// `m** = 1 - a - k`.
    pub m_star_star: f64,
    /// `m1 = 1 - ac - k`: sign of `v(0)` flips here.
    pub m1: f64,
    /// `m2 = (2ack + ac - k - 1)/(1 + k)`: sign of `v(1)` flips here.
    pub m2: f64,
}

pub fn thresholds(p: &ModelParams) -> Thresholds {
    let (a, c, k) = (p.a, p.c, p.k);
    Thresholds {
        k_star: 1.0 / a - 1.0,
        m_star: -1.0 + (2.0 * a - a * a) * c,
        m_star_star: 1.0 - a - k,
        m1: 1.0 - a * c - k,
        m2: (2.0 * a * c * k + a * c - k - 1.0) / (1.0 + k),
    }
}

/// The value of `m` for which `x` is a root of the interior cubic.
pub fn m_of_x(a: f64, c: f64, k: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            reason: "must lie in the open interval (0, 1)",
        });
    }
    let num = a * c * k * x * x + a * c * x - k * x * x + k * x - c - x + 1.0;
    Ok(num / ((x - 1.0) * (k * x + 1.0) * x))
}

/// `det J` at the interior point with abscissa `x`, computed as a positive
/// multiple of `v(x)`. Only meaningful for `x` in `(0, 1)`.
pub fn det_via_v(p: &ModelParams, x: f64) -> f64 {
    let pre = -p.b * x * (x - 1.0) / (p.c * (p.k * x + 1.0));
    pre * cubic(p).deriv(x)
}
