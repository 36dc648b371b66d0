use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::fourier::CircleFourier;
use crate::error::{Error, Result};

/// Continuous piecewise-linear function of the circle angle, interpolating
/// linearly between consecutive nodes and wrapping from the last node back
/// to the first one at `2π`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearCircle {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

/// One linear piece `[start, end]` with endpoint values; `end` may exceed `2π`
/// for the wrap segment.
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub v_start: f64,
    pub v_end: f64,
}

impl Segment {
    pub fn slope(&self) -> f64 {
        (self.v_end - self.v_start) / (self.end - self.start)
    }
}

impl PiecewiseLinearCircle {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPiecewise("need at least 2 nodes".into()));
        }
        if nodes.len() != values.len() {
            return Err(Error::InvalidPiecewise(
                "nodes/values length mismatch".into(),
            ));
        }
        if nodes[0] < 0.0 || *nodes.last().unwrap() >= TAU {
            return Err(Error::InvalidPiecewise("nodes must lie in [0, 2π)".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidPiecewise(
                "nodes must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPiecewise("values must be finite".into()));
        }
        Ok(PiecewiseLinearCircle { nodes, values })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.nodes.len();
        (0..n).map(move |i| {
            let j = (i + 1) % n;
            let end = if j == 0 {
                self.nodes[0] + TAU
            } else {
                self.nodes[j]
            };
            Segment {
                start: self.nodes[i],
                end,
                v_start: self.values[i],
                v_end: self.values[j],
            }
        })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut th = theta.rem_euclid(TAU);
        let n = self.nodes.len();
        // index of the last node ≤ th, wrapping below the first node
        let idx = match self.nodes.partition_point(|&x| x <= th) {
            0 => {
                th += TAU;
                n - 1
            }
            k => k - 1,
        };
        let j = (idx + 1) % n;
        let start = self.nodes[idx];
        let end = if j == 0 {
            self.nodes[0] + TAU
        } else {
            self.nodes[j]
        };
        let (va, vb) = (self.values[idx], self.values[j]);
        va + (vb - va) * (th - start) / (end - start)
    }

    /// Exact Fourier coefficients for `|n| ≤ max_mode`, integrating each linear
    /// piece against `e^{-inθ}` in closed form. For a continuous function the
    /// boundary terms telescope, leaving
    /// `c_n = (1/2π n²) Σ_seg slope·(e^{-in·end} - e^{-in·start})`.
    pub fn fourier_project(&self, max_mode: usize) -> CircleFourier {
        let mut modes = Vec::with_capacity(max_mode + 1);
        let c0: f64 = self
            .segments()
            .map(|s| 0.5 * (s.v_start + s.v_end) * (s.end - s.start))
            .sum();
        modes.push(Complex64::new(c0 / TAU, 0.0));
        let segs: Vec<Segment> = self.segments().collect();
        for n in 1..=max_mode {
            let nf = n as f64;
            let acc: Complex64 = segs
                .iter()
                .map(|s| {
                    let e_end = Complex64::from_polar(1.0, -nf * s.end);
                    let e_start = Complex64::from_polar(1.0, -nf * s.start);
                    (e_end - e_start) * s.slope()
                })
                .sum();
            modes.push(acc / (TAU * nf * nf));
        }
        CircleFourier::real_from_nonnegative(&modes)
    }

    /// Pointwise combination `a·self + b·other` on the merged node set.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let mut nodes: Vec<f64> = self.nodes.iter().chain(&other.nodes).copied().collect();
        nodes.sort_by(|x, y| x.total_cmp(y));
        nodes.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        let values = nodes
            .iter()
            .map(|&th| a * self.eval(th) + b * other.eval(th))
            .collect();
        PiecewiseLinearCircle { nodes, values }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(1.0, other, -1.0)
    }

    pub fn scale(&self, a: f64) -> Self {
        PiecewiseLinearCircle {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    /// Angular extent of the closed support, measured as an interval that
    /// avoids `θ = 0` when possible. `None` if the function vanishes. Values
    /// below `1e-13·max|f|` count as zero.
    pub fn support(&self) -> Option<(f64, f64)> {
        let tol = 1e-13 * self.max_abs();
        let segs: Vec<Segment> = self
            .segments()
            .filter(|s| s.v_start.abs() > tol || s.v_end.abs() > tol)
            .collect();
        if segs.is_empty() {
            return None;
        }
        let lo = segs.iter().map(|s| s.start).fold(f64::INFINITY, f64::min);
        let hi = segs.iter().map(|s| s.end).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// The approximating sequence `g_n`: zero on `[0, π]`, rising with slope 1 to
/// `π/2` at `3π/2`, descending with slope -1 to `1/n` at `2π - 1/n`, then with
/// slope -2 to zero at `2π - 1/(2n)`, and zero up to `2π`.
pub fn gn_family(n: u32) -> Result<PiecewiseLinearCircle> {
    if n == 0 {
        return Err(Error::InvalidArgument("g_n requires n ≥ 1".into()));
    }
    let nf = n as f64;
    PiecewiseLinearCircle::new(
        vec![0.0, PI, 1.5 * PI, TAU - 1.0 / nf, TAU - 0.5 / nf],
        vec![0.0, 0.0, 0.5 * PI, 1.0 / nf, 0.0],
    )
}

/// The limit `g` of `g_n`: zero on `[0, π]`, peak `π/2` at `3π/2`, returning
/// linearly to zero at `2π` (where it does not vanish to second order).
pub fn g_limit() -> PiecewiseLinearCircle {
    PiecewiseLinearCircle::new(vec![0.0, PI, 1.5 * PI], vec![0.0, 0.0, 0.5 * PI])
        .expect("static nodes are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent_at_pi(half_width: f64) -> PiecewiseLinearCircle {
        PiecewiseLinearCircle::new(
            vec![0.0, PI - half_width, PI, PI + half_width],
            vec![0.0, 0.0, 1.0, 0.0],
        )
        .unwrap()
    }

    /// Midpoint rule with many nodes; independent of the closed form.
    fn brute_coeff(f: &PiecewiseLinearCircle, n: i64, k: usize) -> Complex64 {
        let h = TAU / k as f64;
        (0..k)
            .map(|j| {
                let th = (j as f64 + 0.5) * h;
                Complex64::from_polar(f.eval(th), -(n as f64) * th)
            })
            .sum::<Complex64>()
            * (h / TAU)
    }

    #[test]
    fn constant_function_projects_to_c0() {
        let one = PiecewiseLinearCircle::new(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let f = one.fourier_project(8);
        assert!((f.coeff(0).re - 1.0).abs() < 1e-15);
        assert!((1..=8).all(|n| f.coeff(n).norm() < 1e-15));
    }

    #[test]
    fn g_limit_mean_is_pi_over_8() {
        let c0 = g_limit().fourier_project(0).coeff(0).re;
        assert!((c0 - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_tent_has_real_coefficients_matching_quadrature() {
        let t = tent_at_pi(0.7);
        let f = t.fourier_project(16);
        for n in 0..=16 {
            let c = f.coeff(n);
            let brute = brute_coeff(&t, n, 1_000_000);
            assert!((c - brute).norm() < 1e-10, "n={n}: {c} vs {brute}");
            // real up to the phase convention (-1)^n of the point -e^{iθ}
            assert!(c.im.abs() < 1e-15);
            assert_eq!(f.coeff(-n), c.conj());
        }
    }

    #[test]
    fn gn_node_values() {
        for n in [1, 2, 7, 100] {
            let g = gn_family(n).unwrap();
            let nf = n as f64;
            assert!((g.eval(1.5 * PI) - PI / 2.0).abs() < 1e-15);
            assert!(g.eval(TAU - 0.5 / nf).abs() < 1e-15);
            assert!((g.eval(TAU - 1.0 / nf) - 1.0 / nf).abs() < 1e-12);
            for k in 0..100 {
                assert_eq!(g.eval(PI * k as f64 / 100.0), 0.0);
            }
            // slope -2 on the fourth piece
            let s: Vec<_> = g.segments().collect();
            assert!((s[3].slope() + 2.0).abs() < 1e-9);
        }
        assert!(gn_family(0).is_err());
    }

    #[test]
    fn g_minus_gn_support_and_sup() {
        let g = g_limit();
        for n in [1u32, 3, 16] {
            let nf = n as f64;
            let d = g.sub(&gn_family(n).unwrap());
            let (lo, hi) = d.support().unwrap();
            assert!(lo >= TAU - 1.0 / nf - 1e-12 && hi <= TAU + 1e-12);
            assert!((d.max_abs() - 0.5 / nf).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_nodes() {
        assert!(PiecewiseLinearCircle::new(vec![0.0], vec![1.0]).is_err());
        assert!(PiecewiseLinearCircle::new(vec![1.0, 0.5], vec![1.0, 2.0]).is_err());
        assert!(PiecewiseLinearCircle::new(vec![0.0, 7.0], vec![1.0, 2.0]).is_err());
    }
}
