//! Composite Gauss–Legendre quadrature on the circle with a hard cut around
//! the point at infinity (`θ = 0 mod 2π`) and a Richardson test on the cut.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::cayley::distance_to_infinity;
use crate::error::{Error, Result};

const PANEL_ORDER: usize = 16;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(PANEL_ORDER)
            .expect("order ≥ 2")
            .into_iter()
            .collect()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    node_count: usize,
    endpoint_cut: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            node_count: 2048,
            endpoint_cut: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn new(node_count: usize, endpoint_cut: f64) -> Result<Self> {
        if node_count < 16 {
            return Err(Error::InvalidQuadrature(format!(
                "node_count must be ≥ 16, got {node_count}"
            )));
        }
        if !(endpoint_cut > 0.0 && endpoint_cut < 0.5) {
            return Err(Error::InvalidQuadrature(format!(
                "endpoint_cut must lie in (0, 0.5), got {endpoint_cut}"
            )));
        }
        Ok(QuadratureSpec {
            node_count,
            endpoint_cut,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn endpoint_cut(&self) -> f64 {
        self.endpoint_cut
    }

    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            node_count: 2 * self.node_count,
            ..*self
        }
    }

    fn base_panel(&self) -> f64 {
        TAU / (self.node_count / PANEL_ORDER).max(1) as f64
    }
}

/// Outcome of a cut-off circle integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutIntegral {
    /// Richardson-extrapolated value when converged, otherwise the value
    /// with the cut at `ε/4`.
    pub value: f64,
    pub converged: bool,
    /// Contributions of the strips `[ε/2, ε]` and `[ε/4, ε/2]` (both ends).
    pub strip_outer: f64,
    pub strip_inner: f64,
}

impl CutIntegral {
    pub fn finite(&self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Divergent {
                cut_value: self.value,
            })
        }
    }
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * rule()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

/// Integrates over `[a, b]`, splitting at breakpoints and grading panels so
/// each is no longer than its distance to the point at infinity.
fn integrate_interval<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    base: f64,
) -> f64 {
    let mut cuts = vec![a];
    cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup();

    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (u0, v0) = (w[0], w[1]);
        let pieces = ((v0 - u0) / base).ceil().max(1.0) as usize;
        let h = (v0 - u0) / pieces as f64;
        for k in 0..pieces {
            let mut u = u0 + k as f64 * h;
            let mut v = if k + 1 == pieces { v0 } else { u + h };
            loop {
                let (du, dv) = (distance_to_infinity(u), distance_to_infinity(v));
                if v - u <= du.min(dv) {
                    total += panel(f, u, v);
                    break;
                }
                if du <= dv {
                    let m = u + du;
                    total += panel(f, u, m);
                    u = m;
                } else {
                    let m = v - dv;
                    total += panel(f, m, v);
                    v = m;
                }
            }
        }
    }
    total
}

/// `∫ f(θ) dθ` over the circle minus a neighbourhood of `θ = 0`.
///
/// The integral over `[ε, 2π - ε]` is refined by the two strips down to
/// `ε/4`. If the inner strip is not at most 0.6 of the outer one (ratio 1/2
/// for a bounded integrand, 1 for logarithmic divergence) the result is
/// flagged as divergent.
pub fn integrate_cut<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    quad: &QuadratureSpec,
) -> CutIntegral {
    let eps = quad.endpoint_cut;
    let base = quad.base_panel();
    let main = integrate_interval(&f, eps, TAU - eps, breakpoints, base);
    let strip = |lo: f64, hi: f64| {
        integrate_interval(&f, lo, hi, breakpoints, base)
            + integrate_interval(&f, TAU - hi, TAU - lo, breakpoints, base)
    };
    let outer = strip(0.5 * eps, eps);
    let inner = strip(0.25 * eps, 0.5 * eps);
    let cut_value = main + outer + inner;
    let negligible = inner.abs() <= 1e-13 * cut_value.abs().max(1.0);
    let converged = cut_value.is_finite() && (negligible || inner.abs() <= 0.6 * outer.abs());
    CutIntegral {
        value: if converged {
            cut_value + inner
        } else {
            cut_value
        },
        converged,
        strip_outer: outer,
        strip_inner: inner,
    }
}
