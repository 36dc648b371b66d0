use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const REAL_TOL: f64 = 1e-13;

/// Band-limited function (or vector-field coefficient) on the circle.
///
/// The angle `θ` parametrizes the point `-e^{iθ}`, so `θ = 0` is the point
/// `-1` (the image of `t = ∞`) and `θ = π` is `+1` (the image of `t = 0`).
/// Coefficients are `c_n = (1/2π) ∫ f(θ) e^{-inθ} dθ` for `|n| ≤ M`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleFourier {
    max_mode: usize,
    coeffs: Vec<Complex64>,
    is_real: bool,
}

/// Result of a pointwise product; `truncated` is set when modes were dropped.
#[derive(Clone, Debug)]
pub struct Product {
    pub value: CircleFourier,
    pub truncated: bool,
}

impl CircleFourier {
    /// Builds from coefficients `c_{-M}..=c_M`. The real flag is inferred and,
    /// when set, the symmetry is enforced exactly.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "expected 2M+1 coefficients, got {}",
                coeffs.len()
            )));
        }
        let max_mode = coeffs.len() / 2;
        let mut f = CircleFourier {
            max_mode,
            coeffs,
            is_real: false,
        };
        let scale = f.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let symmetric = (0..=max_mode)
            .all(|n| (f.coeff(n as i64) - f.coeff(-(n as i64)).conj()).norm() <= REAL_TOL * scale);
        if symmetric {
            f.symmetrize();
        }
        Ok(f)
    }

    /// Real function from its non-negative modes `c_0, c_1, .., c_M`
    /// (`c_0` must be real up to rounding; its imaginary part is discarded).
    pub fn real_from_nonnegative(modes: &[Complex64]) -> Self {
        let max_mode = modes.len().saturating_sub(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * max_mode + 1];
        for (n, c) in modes.iter().enumerate() {
            coeffs[max_mode + n] = *c;
            coeffs[max_mode - n] = c.conj();
        }
        coeffs[max_mode] = Complex64::new(modes.first().map_or(0.0, |c| c.re), 0.0);
        CircleFourier {
            max_mode,
            coeffs,
            is_real: true,
        }
    }

    /// `a_0 + Σ_k (a_k cos kθ + b_k sin kθ)`.
    pub fn from_trig(a0: f64, cos_sin: &[(f64, f64)]) -> Self {
        let mut modes = vec![Complex64::new(a0, 0.0)];
        modes.extend(
            cos_sin
                .iter()
                .map(|&(a, b)| Complex64::new(a / 2.0, -b / 2.0)),
        );
        Self::real_from_nonnegative(&modes)
    }

    pub fn zero(max_mode: usize) -> Self {
        Self::real_from_nonnegative(&vec![Complex64::new(0.0, 0.0); max_mode + 1])
    }

    pub fn constant(value: f64) -> Self {
        Self::real_from_nonnegative(&[Complex64::new(value, 0.0)])
    }

    pub fn cos(k: usize) -> Self {
        let mut cs = vec![(0.0, 0.0); k];
        if k > 0 {
            cs[k - 1] = (1.0, 0.0);
            Self::from_trig(0.0, &cs)
        } else {
            Self::constant(1.0)
        }
    }

    pub fn sin(k: usize) -> Self {
        let mut cs = vec![(0.0, 0.0); k];
        if k > 0 {
            cs[k - 1] = (0.0, 1.0);
        }
        Self::from_trig(0.0, &cs)
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    /// Coefficient `c_n`; zero outside `[-M, M]`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.max_mode {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + self.max_mode as i64) as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Iterator over `(n, c_n)` for `n = -M..=M`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m = self.max_mode as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (i as i64 - m, *c))
    }

    fn symmetrize(&mut self) {
        let m = self.max_mode;
        for n in 1..=m {
            let avg = (self.coeffs[m + n] + self.coeffs[m - n].conj()) * 0.5;
            self.coeffs[m + n] = avg;
            self.coeffs[m - n] = avg.conj();
        }
        self.coeffs[m].im = 0.0;
        self.is_real = true;
    }

    fn from_raw(max_mode: usize, coeffs: Vec<Complex64>, real: bool) -> Self {
        let mut f = CircleFourier {
            max_mode,
            coeffs,
            is_real: false,
        };
        if real {
            f.symmetrize();
        }
        f
    }

    /// Zero-padded or truncated copy with bandwidth `max_mode`.
    pub fn resized(&self, max_mode: usize) -> Self {
        let coeffs = (-(max_mode as i64)..=max_mode as i64)
            .map(|n| self.coeff(n))
            .collect();
        Self::from_raw(max_mode, coeffs, self.is_real)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.modes()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .sum()
    }

    pub fn eval_real(&self, theta: f64) -> f64 {
        if self.is_real {
            let mut acc = self.coeffs[self.max_mode].re;
            for n in 1..=self.max_mode {
                let c = self.coeffs[self.max_mode + n];
                let (s, co) = (n as f64 * theta).sin_cos();
                acc += 2.0 * (c.re * co - c.im * s);
            }
            acc
        } else {
            self.eval(theta).re
        }
    }

    /// `c_n ↦ i n c_n`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .modes()
            .map(|(n, c)| c * Complex64::new(0.0, n as f64))
            .collect();
        Self::from_raw(self.max_mode, coeffs, self.is_real)
    }

    pub fn scale(&self, lambda: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * lambda).collect();
        Self::from_raw(self.max_mode, coeffs, self.is_real)
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.max_mode.max(other.max_mode);
        let coeffs = (-(m as i64)..=m as i64)
            .map(|n| self.coeff(n) + other.coeff(n))
            .collect();
        Self::from_raw(m, coeffs, self.is_real && other.is_real)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Cauchy product truncated to `|n| ≤ max_out`.
    pub fn pointwise_product(&self, other: &Self, max_out: usize) -> Product {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * max_out + 1];
        let mut truncated = false;
        for (n, a) in self.modes() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (m, b) in other.modes() {
                let k = n + m;
                if k.unsigned_abs() as usize <= max_out {
                    coeffs[(k + max_out as i64) as usize] += a * b;
                } else if a * b != Complex64::new(0.0, 0.0) {
                    truncated = true;
                }
            }
        }
        Product {
            value: Self::from_raw(max_out, coeffs, self.is_real && other.is_real),
            truncated,
        }
    }

    /// Multiplication by `1 - cos θ = -(z-1)²/(2z)`, raising the bandwidth by one.
    pub fn mul_one_minus_cos(&self) -> Self {
        let m = self.max_mode + 1;
        let coeffs = (-(m as i64)..=m as i64)
            .map(|n| self.coeff(n) - (self.coeff(n - 1) + self.coeff(n + 1)) * 0.5)
            .collect();
        Self::from_raw(m, coeffs, self.is_real)
    }

    /// Exact division by `z - 1` (with `z = e^{iθ}`), i.e. by the factor that
    /// vanishes at `θ = 0`. Returns the quotient (modes `-M..=M-1`, padded to
    /// `M`) and the remainder `f(θ = 0)`.
    pub fn divide_by_z_minus_one(&self) -> (Self, Complex64) {
        let m = self.max_mode;
        // p(z) = z^M f(z) has coefficient p_j = c_{j-M}, j = 0..=2M.
        let p: Vec<Complex64> = self.coeffs.clone();
        let deg = p.len() - 1;
        let mut q = vec![Complex64::new(0.0, 0.0); deg.max(1)];
        if deg == 0 {
            return (Self::zero(0), p[0]);
        }
        q[deg - 1] = p[deg];
        for k in (1..deg).rev() {
            q[k - 1] = p[k] + q[k];
        }
        let remainder = p[0] + q[0];
        // quotient z^{-M} q(z): q_j multiplies z^{j-M}, j = 0..=2M-1.
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * m + 1];
        coeffs[..deg].copy_from_slice(&q);
        (Self::from_raw(m, coeffs, false), remainder)
    }

    /// `f(θ)·cot(θ/2)`, exact when `f(0) = 0`; returns the product and the
    /// remainder `f(0)` that obstructs exactness.
    pub fn mul_cot_half(&self) -> (Self, Complex64) {
        let (q, r) = self.divide_by_z_minus_one();
        // cot(θ/2) = i (z + 1)/(z - 1)
        let m = self.max_mode;
        let coeffs = (-(m as i64)..=m as i64)
            .map(|n| (q.coeff(n) + q.coeff(n - 1)) * Complex64::new(0.0, 1.0))
            .collect();
        (Self::from_raw(m, coeffs, self.is_real), r)
    }

    /// `f(θ)/(1 - cos θ)`, exact when `f` vanishes to second order at `θ = 0`.
    /// Returns the quotient and the larger of the two division remainders.
    pub fn div_one_minus_cos(&self) -> (Self, f64) {
        let (q1, r1) = self.divide_by_z_minus_one();
        let (q2, r2) = q1.divide_by_z_minus_one();
        // 1/(1 - cos θ) = -2z/(z-1)²
        let m = self.max_mode;
        let coeffs = (-(m as i64)..=m as i64)
            .map(|n| q2.coeff(n - 1) * -2.0)
            .collect();
        (
            Self::from_raw(m, coeffs, self.is_real),
            r1.norm().max(r2.norm()),
        )
    }

    /// `max_n |c_n - d_n|`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let m = self.max_mode.max(other.max_mode) as i64;
        (-m..=m)
            .map(|n| (self.coeff(n) - other.coeff(n)).norm())
            .fold(0.0, f64::max)
    }
}

/// `σ(f, g) = ∫ f g' dθ`, evaluated as `4π Σ_{k≥1} k Im(c_k(f) conj(c_k(g)))`,
/// which is exactly antisymmetric in floating point.
pub fn sigma(f: &CircleFourier, g: &CircleFourier) -> Result<f64> {
    if !f.is_real() || !g.is_real() {
        return Err(Error::NotReal);
    }
    let m = f.max_mode().min(g.max_mode());
    let mut acc = 0.0;
    for k in 1..=m {
        let a = f.coeff(k as i64);
        let b = g.coeff(k as i64);
        acc += k as f64 * (a.im * b.re - a.re * b.im);
    }
    Ok(4.0 * PI * acc)
}

/// Normalization between `σ` and the current commutator: with
/// `J(f) = Σ c_n J_n` one has `[J(f), J(g)] = i·CCR_SCALE·σ(f, g)`.
pub const CCR_SCALE: f64 = 1.0 / (2.0 * PI);

/// The symplectic form that appears in the Fock realization,
/// `CCR_SCALE·σ(f, g) = 2 Im⟨J(f)Ω, J(g)Ω⟩`.
pub fn symplectic(f: &CircleFourier, g: &CircleFourier) -> Result<f64> {
    Ok(CCR_SCALE * sigma(f, g)?)
}

/// `Σ_{k≥1} k |c_k|²`.
pub fn sobolev_half_sq(f: &CircleFourier) -> Result<f64> {
    if !f.is_real() {
        return Err(Error::NotReal);
    }
    Ok((1..=f.max_mode())
        .map(|k| k as f64 * f.coeff(k as i64).norm_sqr())
        .sum())
}

#[derive(Serialize, Deserialize)]
struct FourierJson {
    #[serde(rename = "M")]
    m: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for CircleFourier {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FourierJson {
            m: self.max_mode,
            re: self.coeffs.iter().map(|c| c.re).collect(),
            im: self.coeffs.iter().map(|c| c.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircleFourier {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FourierJson::deserialize(d)?;
        if raw.re.len() != 2 * raw.m + 1 || raw.im.len() != raw.re.len() {
            return Err(D::Error::custom("coefficient arrays must have length 2M+1"));
        }
        let coeffs = raw
            .re
            .iter()
            .zip(&raw.im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        CircleFourier::new(coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn derivative_of_cos_is_minus_sin() {
        let d = CircleFourier::cos(1).derivative();
        assert!((d.coeff(1) - c(0.0, 0.5)).norm() < 1e-15);
        assert!((d.coeff(-1) - c(0.0, -0.5)).norm() < 1e-15);
        let dd = d.derivative();
        assert!(dd.max_coeff_diff(&CircleFourier::cos(1).scale(-1.0)) < 1e-15);
        assert!(
            CircleFourier::constant(3.0)
                .derivative()
                .max_coeff_diff(&CircleFourier::zero(0))
                == 0.0
        );
    }

    #[test]
    fn cos_squared_product() {
        let p = CircleFourier::cos(1).pointwise_product(&CircleFourier::cos(1), 2);
        assert!(!p.truncated);
        assert!((p.value.coeff(0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((p.value.coeff(2) - c(0.25, 0.0)).norm() < 1e-15);
        assert!((p.value.coeff(-2) - c(0.25, 0.0)).norm() < 1e-15);
        let t = CircleFourier::cos(1).pointwise_product(&CircleFourier::cos(1), 1);
        assert!(t.truncated);
    }

    #[test]
    fn product_with_one_is_identity() {
        let f = CircleFourier::from_trig(0.3, &[(1.0, -2.0), (0.5, 0.25)]);
        let p = f.pointwise_product(&CircleFourier::constant(1.0), 2);
        assert!(p.value.max_coeff_diff(&f) < 1e-15);
    }

    #[test]
    fn sigma_cos_sin_is_pi() {
        let s = sigma(&CircleFourier::cos(1), &CircleFourier::sin(1)).unwrap();
        assert!((s - PI).abs() < 1e-14);
        let f = CircleFourier::from_trig(0.1, &[(1.0, 2.0)]);
        assert_eq!(sigma(&f, &f).unwrap(), 0.0);
    }

    #[test]
    fn sigma_rejects_complex_input() {
        let f = CircleFourier::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(!f.is_real());
        assert_eq!(sigma(&f, &CircleFourier::cos(1)), Err(Error::NotReal));
        assert_eq!(sobolev_half_sq(&f), Err(Error::NotReal));
    }

    #[test]
    fn sobolev_of_cos_and_constant() {
        assert!((sobolev_half_sq(&CircleFourier::cos(1)).unwrap() - 0.25).abs() < 1e-16);
        assert_eq!(sobolev_half_sq(&CircleFourier::constant(2.0)).unwrap(), 0.0);
    }

    #[test]
    fn cot_half_division_is_exact_on_vanishing_input() {
        // h = 1 - cos θ vanishes at θ = 0; h·cot(θ/2) = sin θ.
        let h = CircleFourier::from_trig(1.0, &[(-1.0, 0.0)]);
        let (p, r) = h.mul_cot_half();
        assert!(r.norm() < 1e-15);
        assert!(p.max_coeff_diff(&CircleFourier::sin(1)) < 1e-15);
        let (q, r2) = h.mul_one_minus_cos().div_one_minus_cos();
        assert!(r2 < 1e-15);
        assert!(q.max_coeff_diff(&h) < 1e-15);
    }

    #[test]
    fn cot_half_remainder_reports_value_at_minus_one() {
        let (_, r) = CircleFourier::constant(2.0).mul_cot_half();
        assert!((r - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let f = CircleFourier::cos(1);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"M":1,"re":[0.5,0.0,0.5],"im":["#));
        let back: CircleFourier = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<CircleFourier>(r#"{"M":1,"re":[1.0],"im":[0.0]}"#).is_err());
    }
}
