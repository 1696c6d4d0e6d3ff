//! Spatially varying fear level `k(x)` on a uniform grid of `[0, L]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of subintervals accepted for a field grid.
pub const MIN_INTERVALS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FearSpec {
    Constant {
        value: f64,
    },
    /// `base + amplitude * sin^2(frequency * x)`.
    ShiftedSine {
        base: f64,
        amplitude: f64,
        frequency: f64,
    },
    /// Samples at increasing abscissas covering `[0, L]`, linearly interpolated.
    Tabulated {
        x: Vec<f64>,
        k: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FearField {
    pub length: f64,
    pub xs: Vec<f64>,
    pub k: Vec<f64>,
    /// `min k` over the domain.
    pub k_hat: f64,
    /// `max k` over the domain.
    pub k_tilde: f64,
    /// Total length of grid cells on which `k` vanishes at both ends.
    pub zero_measure: f64,
}

impl FearField {
    pub fn intervals(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn cell(&self) -> f64 {
        self.length / self.intervals() as f64
    }

    pub fn is_constant(&self) -> bool {
        self.k_hat == self.k_tilde
    }
}

fn interp(xs: &[f64], ks: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|v| *v <= x);
    if i == 0 {
        return ks[0];
    }
    if i >= xs.len() {
        return ks[ks.len() - 1];
    }
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ks[i - 1] + t * (ks[i] - ks[i - 1])
}

/// Samples `spec` on `n` subintervals of `[0, length]` and checks that the
/// field is nonnegative and vanishes at most on a null set.
pub fn make_fear_field(spec: &FearSpec, length: f64, n: usize) -> Result<FearField> {
    if n < MIN_INTERVALS {
        return Err(Error::Precondition(format!(
            "fear field needs at least {MIN_INTERVALS} subintervals, got {n}"
        )));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Domain {
            name: "length",
            value: length,
            reason: "must be finite and > 0",
        });
    }
    let h = length / n as f64;
    let xs: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();

    let (k, extrema): (Vec<f64>, Option<(f64, f64)>) = match spec {
        FearSpec::Constant { value } => (vec![*value; n + 1], Some((*value, *value))),
        FearSpec::ShiftedSine {
            base,
            amplitude,
            frequency,
        } => {
            let k = xs
                .iter()
                .map(|x| base + amplitude * (frequency * x).sin().powi(2))
                .collect();
            // sin^2 reaches 0 at x = 0 and 1 once |w| L >= pi/2
            let reach = (frequency.abs() * length).min(std::f64::consts::FRAC_PI_2);
            let s_max = reach.sin().powi(2);
            let (lo, hi) = if *amplitude >= 0.0 {
                (*base, base + amplitude * s_max)
            } else {
                (base + amplitude * s_max, *base)
            };
            (k, Some((lo, hi)))
        }
        FearSpec::Tabulated { x, k } => {
            if x.len() != k.len() || x.len() < 2 {
                return Err(Error::Config(
                    "tabulated fear field needs matching x and k columns with at least two rows".into(),
                ));
            }
            if x.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Config("tabulated x values must increase strictly".into()));
            }
            if x[0] > 1e-12 || x[x.len() - 1] < length - 1e-9 {
                return Err(Error::Config(format!("tabulated fear field must cover [0, {length}]")));
            }
            (xs.iter().map(|v| interp(x, k, *v)).collect(), None)
        }
    };

    if let Some((j, v)) = k.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::Assumption {
            assumption: "nonnegative fear level",
            detail: format!("k({}) = {v}", xs[j]),
        });
    }

    let is_zero = |v: f64| v.abs() <= 1e-14;
    let zero_measure = k.windows(2).filter(|w| is_zero(w[0]) && is_zero(w[1])).count() as f64 * h;
    if zero_measure >= h {
        return Err(Error::Assumption {
            assumption: "fear level vanishes only on a null set",
            detail: format!("k = 0 on a set of measure about {zero_measure}"),
        });
    }

    let (k_hat, k_tilde) = extrema.unwrap_or_else(|| {
        k.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        })
    });

    Ok(FearField {
        length,
        xs,
        k,
        k_hat,
        k_tilde,
        zero_measure,
    })
}

/// A field of the same grid with the constant value `value`.
pub fn constant_like(field: &FearField, value: f64) -> FearField {
    FearField {
        length: field.length,
        xs: field.xs.clone(),
        k: vec![value; field.xs.len()],
        k_hat: value,
        k_tilde: value,
        zero_measure: if value == 0.0 { field.length } else { 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(base: f64, amplitude: f64) -> FearSpec {
        FearSpec::ShiftedSine {
            base,
            amplitude,
            frequency: 10.0,
        }
    }

    #[test]
    fn fig13_extrema() {
        let f = make_fear_field(&sine(3.0, 1.0), PI, 1000).unwrap();
        assert_eq!((f.k_hat, f.k_tilde), (3.0, 4.0));
        assert_eq!(f.xs.len(), 1001);
        assert!(f.k.iter().all(|k| (3.0..=4.0 + 1e-15).contains(k)));
    }

    #[test]
    fn zero_field_is_rejected() {
        let r = make_fear_field(&FearSpec::Constant { value: 0.0 }, PI, 100);
        assert!(matches!(r, Err(Error::Assumption { .. })));
    }

    #[test]
    fn isolated_zeros_are_accepted() {
        let f = make_fear_field(&sine(0.0, 0.1), PI, 1000).unwrap();
        assert_eq!(f.k_hat, 0.0);
        assert!((f.k_tilde - 0.1).abs() < 1e-15);
        assert_eq!(f.zero_measure, 0.0);
    }

    #[test]
    fn negative_samples_are_rejected() {
        let r = make_fear_field(&sine(-0.5, 1.0), PI, 100);
        assert!(matches!(r, Err(Error::Assumption { .. })));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        assert!(make_fear_field(&sine(1.0, 1.0), PI, 8).is_err());
    }

    #[test]
    fn tabulated_is_interpolated_and_extrema_sampled() {
        let spec = FearSpec::Tabulated {
            x: vec![0.0, 1.0, 2.0],
            k: vec![1.0, 3.0, 2.0],
        };
        let f = make_fear_field(&spec, 2.0, 20).unwrap();
        assert!((f.k[5] - 2.0).abs() < 1e-12);
        assert_eq!((f.k_hat, f.k_tilde), (1.0, 3.0));
    }
}
