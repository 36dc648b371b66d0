//! Test objects on the real line, carried by circle representatives.
//!
//! A [`LineObject`] of weight [`Weight::Function`] with circle representative
//! `f` is the line function `t ↦ f(θ(t))`; with weight
//! [`Weight::VectorField`] it is the line vector field
//! `F(t) = ((1 + t²)/2)·h(θ(t))`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::cayley::{cayley_t_of_theta, distance_to_infinity, jacobian, theta_of_t, LinePoint};
use super::fourier::{sobolev_half_sq, CircleFourier};
use super::piecewise::PiecewiseLinearCircle;
use super::quadrature::{integrate_cut, CutIntegral, QuadratureSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Weight {
    Function,
    VectorField,
}

impl Weight {
    fn name(self) -> &'static str {
        match self {
            Weight::Function => "Function",
            Weight::VectorField => "VectorField",
        }
    }
}

/// `amplitude · exp(1 - 1/(1 - x²))` for `|x| < 1`, `x = (t - center)/half_width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineBump {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

impl LineBump {
    pub fn new(center: f64, half_width: f64, amplitude: f64) -> Result<Self> {
        let valid = half_width > 0.0
            && half_width.is_finite()
            && center.is_finite()
            && amplitude.is_finite();
        if !valid {
            return Err(Error::InvalidArgument(format!(
                "bump needs finite center/amplitude and positive width, got {center}, {half_width}"
            )));
        }
        Ok(LineBump {
            center,
            half_width,
            amplitude,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.half_width;
        if x.abs() >= 1.0 {
            0.0
        } else {
            self.amplitude * (1.0 - 1.0 / (1.0 - x * x)).exp()
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    /// The bump composed with `t ↦ scale·t + shift`.
    fn precompose(&self, a: Affine) -> LineBump {
        LineBump {
            center: (self.center - a.shift) / a.scale,
            half_width: self.half_width / a.scale,
            amplitude: self.amplitude,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CircleRepr {
    Fourier(CircleFourier),
    PiecewiseLinear(PiecewiseLinearCircle),
    Bump(LineBump),
}

impl CircleRepr {
    fn eval(&self, theta: f64) -> f64 {
        match self {
            CircleRepr::Fourier(f) => f.eval_real(theta),
            CircleRepr::PiecewiseLinear(p) => p.eval(theta),
            CircleRepr::Bump(b) => match cayley_t_of_theta(theta) {
                LinePoint::Finite(t) => b.eval(t),
                LinePoint::Infinity => 0.0,
            },
        }
    }
}

impl From<CircleFourier> for CircleRepr {
    fn from(f: CircleFourier) -> Self {
        CircleRepr::Fourier(f)
    }
}

impl From<PiecewiseLinearCircle> for CircleRepr {
    fn from(p: PiecewiseLinearCircle) -> Self {
        CircleRepr::PiecewiseLinear(p)
    }
}

impl From<LineBump> for CircleRepr {
    fn from(b: LineBump) -> Self {
        CircleRepr::Bump(b)
    }
}

/// Line-side pre-composition `t ↦ scale·t + shift` (`scale > 0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub scale: f64,
    pub shift: f64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        scale: 1.0,
        shift: 0.0,
    };

    fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// `self ∘ inner`, i.e. `t ↦ self(inner(t))`.
    fn after(self, inner: Affine) -> Affine {
        Affine {
            scale: self.scale * inner.scale,
            shift: self.scale * inner.shift + self.shift,
        }
    }

    fn map_theta(&self, theta: f64) -> f64 {
        match cayley_t_of_theta(theta) {
            LinePoint::Finite(t) => theta_of_t(self.scale * t + self.shift),
            LinePoint::Infinity => 0.0,
        }
    }

    /// Angle whose image under [`Affine::map_theta`] is `theta`.
    fn preimage_theta(&self, theta: f64) -> f64 {
        match cayley_t_of_theta(theta) {
            LinePoint::Finite(t) => theta_of_t((t - self.shift) / self.scale),
            LinePoint::Infinity => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Term {
    coeff: f64,
    repr: CircleRepr,
    affine: Affine,
}

impl Term {
    fn eval(&self, theta: f64) -> f64 {
        let th = if self.affine.is_identity() {
            theta
        } else {
            self.affine.map_theta(theta)
        };
        self.coeff * self.repr.eval(th)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let raw: Vec<f64> = match &self.repr {
            CircleRepr::Fourier(_) => vec![],
            CircleRepr::PiecewiseLinear(p) => p.nodes().to_vec(),
            CircleRepr::Bump(b) => {
                let (lo, hi) = b.support();
                vec![theta_of_t(lo), theta_of_t(hi)]
            }
        };
        if self.affine.is_identity() {
            raw
        } else {
            raw.into_iter()
                .map(|th| self.affine.preimage_theta(th))
                .collect()
        }
    }

    fn transformed(&self, a: Affine) -> Term {
        match &self.repr {
            CircleRepr::Bump(b) => Term {
                coeff: self.coeff,
                repr: CircleRepr::Bump(b.precompose(self.affine.after(a))),
                affine: Affine::IDENTITY,
            },
            _ => Term {
                coeff: self.coeff,
                repr: self.repr.clone(),
                affine: self.affine.after(a),
            },
        }
    }

    /// Angular support as an interval `[lo, hi]` inside `(0, 2π)`, or `None`
    /// when the term does not vanish near the point at infinity.
    fn compact_support(&self) -> Option<(f64, f64)> {
        let (lo, hi) = match &self.repr {
            CircleRepr::Fourier(_) => return None,
            CircleRepr::Bump(b) => {
                let (lo, hi) = b.support();
                (theta_of_t(lo), theta_of_t(hi))
            }
            CircleRepr::PiecewiseLinear(p) => {
                let (lo, hi) = p.support()?;
                if lo <= 0.0 || hi >= TAU {
                    return None;
                }
                (lo, hi)
            }
        };
        if self.affine.is_identity() {
            Some((lo, hi))
        } else {
            Some((
                self.affine.preimage_theta(lo),
                self.affine.preimage_theta(hi),
            ))
        }
    }
}

/// Fourier projection of a line object together with the Sobolev-½ weight of
/// the discarded modes.
#[derive(Clone, Debug)]
pub struct Projection {
    pub coeffs: CircleFourier,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineObject {
    terms: Vec<Term>,
    weight: Weight,
    vanishing_order: u32,
}

impl LineObject {
    pub fn zero(weight: Weight) -> Self {
        LineObject {
            terms: vec![],
            weight,
            vanishing_order: u32::MAX,
        }
    }

    /// A line function given by a circle representative. The vanishing order
    /// at `-1` is inferred: unbounded for compactly supported representatives
    /// and `0` for band-limited ones (use [`LineObject::with_vanishing_order`]).
    pub fn function(repr: impl Into<CircleRepr>) -> Self {
        let repr = repr.into();
        let term = Term {
            coeff: 1.0,
            repr,
            affine: Affine::IDENTITY,
        };
        let vanishing_order = if term.compact_support().is_some() {
            u32::MAX
        } else {
            0
        };
        LineObject {
            terms: vec![term],
            weight: Weight::Function,
            vanishing_order,
        }
    }

    /// A line vector field with band-limited circle coefficient `h`, checked to
    /// vanish at `-1` to the declared order.
    pub fn vector_field(h: CircleFourier, vanishing_order: u32) -> Result<Self> {
        check_vanishing(&h, vanishing_order)?;
        Ok(LineObject {
            terms: vec![Term {
                coeff: 1.0,
                repr: CircleRepr::Fourier(h),
                affine: Affine::IDENTITY,
            }],
            weight: Weight::VectorField,
            vanishing_order,
        })
    }

    /// Declares (and for band-limited terms verifies) the vanishing order at `-1`.
    pub fn with_vanishing_order(mut self, order: u32) -> Result<Self> {
        for t in &self.terms {
            if let CircleRepr::Fourier(f) = &t.repr {
                if t.affine.is_identity() {
                    check_vanishing(f, order)?;
                }
            }
        }
        self.vanishing_order = order;
        Ok(self)
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn vanishing_order(&self) -> u32 {
        self.vanishing_order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| match &t.repr {
            CircleRepr::Fourier(f) => f.is_real(),
            _ => true,
        })
    }

    pub(crate) fn require_weight(&self, w: Weight) -> Result<()> {
        if self.weight == w {
            Ok(())
        } else {
            Err(Error::WrongWeight {
                expected: w.name(),
                found: self.weight.name(),
            })
        }
    }

    /// Value of the circle representative at angle `theta`.
    pub fn eval_circle(&self, theta: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(theta)).sum()
    }

    /// Value on the line: `f(θ(t))`, or `((1+t²)/2)·h(θ(t))` for vector fields.
    pub fn eval_line(&self, t: f64) -> f64 {
        let th = theta_of_t(t);
        match self.weight {
            Weight::Function => self.eval_circle(th),
            Weight::VectorField => 0.5 * (1.0 + t * t) * self.eval_circle(th),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.terms.iter().flat_map(|t| t.breakpoints()).collect();
        b.sort_by(|x, y| x.total_cmp(y));
        b.dedup();
        b
    }

    pub fn scale(&self, lambda: f64) -> Self {
        if lambda == 0.0 {
            return LineObject::zero(self.weight);
        }
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= lambda;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        other.require_weight(self.weight)?;
        let mut out = self.clone();
        for t in &other.terms {
            match out
                .terms
                .iter_mut()
                .find(|s| s.repr == t.repr && s.affine == t.affine)
            {
                Some(s) => s.coeff += t.coeff,
                None => out.terms.push(t.clone()),
            }
        }
        out.terms.retain(|t| t.coeff != 0.0);
        out.vanishing_order = self.vanishing_order.min(other.vanishing_order);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// The single band-limited circle representative, if that is what this
    /// object is.
    pub fn band_limited(&self) -> Result<CircleFourier> {
        match self.terms.as_slice() {
            [] => Ok(CircleFourier::zero(0)),
            [Term {
                coeff,
                repr: CircleRepr::Fourier(f),
                affine,
            }] if affine.is_identity() => Ok(f.scale(*coeff)),
            _ => Err(Error::NotBandLimited),
        }
    }

    /// Projection onto modes `|n| ≤ max_mode`. Band-limited and
    /// piecewise-linear terms are projected in closed form; transformed terms
    /// and bumps are sampled on a uniform grid and transformed by FFT.
    pub fn projection(&self, max_mode: usize, quad: &QuadratureSpec) -> Projection {
        let mut coeffs = CircleFourier::zero(max_mode);
        let mut tail_norm = 0.0;
        for t in &self.terms {
            let (c, res) = project_term(t, max_mode, quad);
            coeffs = coeffs.add(&c.scale(t.coeff));
            tail_norm += t.coeff.abs() * res.sqrt();
        }
        Projection {
            coeffs,
            residual: tail_norm * tail_norm,
        }
    }

    fn transformed(&self, a: Affine, quad: &QuadratureSpec) -> Result<Self> {
        self.require_weight(Weight::Function)?;
        let eps = quad.endpoint_cut();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let nt = t.transformed(a);
            match nt.compact_support() {
                Some((lo, hi)) => {
                    if distance_to_infinity(lo) < eps || distance_to_infinity(hi) < eps {
                        return Err(Error::SupportAtInfinity);
                    }
                }
                // Möbius maps fixing ∞ preserve the vanishing order there.
                None if self.vanishing_order >= 2 => {}
                None => return Err(Error::SupportAtInfinity),
            }
            terms.push(nt);
        }
        Ok(LineObject {
            terms,
            weight: self.weight,
            vanishing_order: self.vanishing_order,
        })
    }
}

fn check_vanishing(h: &CircleFourier, order: u32) -> Result<()> {
    // j-th derivative at θ = 0 is Σ (in)^j c_n
    for j in 0..order.min(8) {
        let (value, scale) = h
            .modes()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, s), (n, c)| {
                let w = Complex64::new(0.0, n as f64).powu(j);
                (v + w * c, s + w.norm() * c.norm())
            });
        if value.norm() > 1e-10 * scale.max(1e-300) && value.norm() > 1e-14 {
            return Err(Error::VanishingCheck {
                declared: order,
                order: j,
                value: value.norm(),
            });
        }
    }
    Ok(())
}

fn sample_projection(t: &Term, max_mode: usize, quad: &QuadratureSpec) -> (CircleFourier, f64) {
    let k = (16 * max_mode)
        .max(quad.node_count())
        .max(2048)
        .next_power_of_two();
    let unit = Term {
        coeff: 1.0,
        ..t.clone()
    };
    let mut buf: Vec<Complex64> = (0..k)
        .map(|j| Complex64::new(unit.eval(TAU * j as f64 / k as f64), 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    let inv = 1.0 / k as f64;
    let modes: Vec<Complex64> = (0..=max_mode).map(|n| buf[n] * inv).collect();
    let tail: f64 = (max_mode + 1..k / 2)
        .map(|n| n as f64 * (buf[n] * inv).norm_sqr())
        .sum();
    (CircleFourier::real_from_nonnegative(&modes), tail)
}

fn project_term(t: &Term, max_mode: usize, quad: &QuadratureSpec) -> (CircleFourier, f64) {
    if !t.affine.is_identity() {
        return sample_projection(t, max_mode, quad);
    }
    match &t.repr {
        CircleRepr::Fourier(f) => {
            let tail = if f.max_mode() > max_mode {
                (max_mode + 1..=f.max_mode())
                    .map(|k| k as f64 * f.coeff(k as i64).norm_sqr())
                    .sum()
            } else {
                0.0
            };
            (f.resized(max_mode), tail)
        }
        CircleRepr::PiecewiseLinear(p) => {
            let wide = p.fourier_project(8 * max_mode.max(1));
            let full = sobolev_half_sq(&wide).unwrap_or(0.0);
            let kept = wide.resized(max_mode);
            let tail = full - sobolev_half_sq(&kept).unwrap_or(0.0);
            (kept, tail.max(0.0))
        }
        CircleRepr::Bump(_) => sample_projection(t, max_mode, quad),
    }
}

/// `p · jacobian^k` as a trigonometric polynomial, when `p` vanishes at
/// `θ = 0` to order `2k`.
fn times_jacobian_power(p: &CircleFourier, k: u32) -> Option<CircleFourier> {
    let scale = p.coeffs().iter().map(|c| c.norm()).sum::<f64>().max(1e-300);
    let mut out = p.clone();
    for _ in 0..k {
        let (q, rem) = out.div_one_minus_cos();
        if rem > 1e-11 * scale {
            return None;
        }
        out = q;
    }
    Some(out)
}

/// `∫_ℝ f(t) dt` (or `∫ F(t) dt` for a vector field), computed on the circle
/// with Jacobian `½csc²(θ/2)` (squared for vector fields). A band-limited
/// representative that vanishes fast enough at `-1` is divided by the
/// Jacobian exactly before integration.
pub fn line_integral(f: &LineObject, quad: &QuadratureSpec) -> CutIntegral {
    let power = match f.weight {
        Weight::Function => 1,
        Weight::VectorField => 2,
    };
    if let Ok(h) = f.band_limited() {
        if let Some(p) = times_jacobian_power(&h, power) {
            return integrate_cut(|th| p.eval_real(th), &[], quad);
        }
    }
    let bps = f.breakpoints();
    integrate_cut(
        |th| f.eval_circle(th) * jacobian(th).powi(power as i32),
        &bps,
        quad,
    )
}

/// A transformed line object and its re-projection.
#[derive(Clone, Debug)]
pub struct Transformed {
    pub object: LineObject,
    pub projection: Projection,
}

/// `t ↦ f(e^{-s} t)`, re-projected onto `max_mode` modes.
pub fn dilate_line(
    f: &LineObject,
    s: f64,
    max_mode: usize,
    quad: &QuadratureSpec,
) -> Result<Transformed> {
    let object = f.transformed(
        Affine {
            scale: (-s).exp(),
            shift: 0.0,
        },
        quad,
    )?;
    let projection = object.projection(max_mode, quad);
    Ok(Transformed { object, projection })
}

/// `t ↦ f(t - shift)`, re-projected onto `max_mode` modes.
pub fn translate_line(
    f: &LineObject,
    shift: f64,
    max_mode: usize,
    quad: &QuadratureSpec,
) -> Result<Transformed> {
    let object = f.transformed(
        Affine {
            scale: 1.0,
            shift: -shift,
        },
        quad,
    )?;
    let projection = object.projection(max_mode, quad);
    Ok(Transformed { object, projection })
}

/// Line derivatives `F', F'', F'''` of the vector field `F = C_* h`, each as a
/// scalar circle function. `F' = h' - cot(θ/2)·h` and `d/dt = (1 - cos θ) d/dθ`.
/// The returned residual is `|h(θ = 0)|`, zero exactly when `F'` is band-limited.
#[derive(Clone, Debug)]
pub struct LineDerivatives {
    pub first: CircleFourier,
    pub second: CircleFourier,
    pub third: CircleFourier,
    pub residual: f64,
}

pub fn line_derivatives(h: &CircleFourier) -> LineDerivatives {
    let (cot_part, r) = h.mul_cot_half();
    let first = h.derivative().sub(&cot_part);
    let second = first.derivative().mul_one_minus_cos();
    let third = second.derivative().mul_one_minus_cos();
    LineDerivatives {
        first,
        second,
        third,
        residual: r.norm(),
    }
}

fn admissible_pair(f: &LineObject, g: &LineObject) -> Result<(CircleFourier, CircleFourier)> {
    f.require_weight(Weight::VectorField)?;
    g.require_weight(Weight::VectorField)?;
    if f.vanishing_order < 1 {
        return Err(Error::VanishingOrder {
            required: 1,
            declared: f.vanishing_order,
        });
    }
    let combined = f.vanishing_order.saturating_add(g.vanishing_order);
    if combined < 3 {
        return Err(Error::VanishingOrder {
            required: 3,
            declared: combined,
        });
    }
    Ok((f.band_limited()?, g.band_limited()?))
}

/// `∫_ℝ F^{(a)}(t) G^{(b)}(t) dt` for `a, b ≤ 3`, with derivatives formed on
/// the Fourier side and the product integrated on the circle.
pub fn line_pairing(
    f: &LineObject,
    a: usize,
    g: &LineObject,
    b: usize,
    quad: &QuadratureSpec,
) -> Result<CutIntegral> {
    if a > 3 || b > 3 {
        return Err(Error::InvalidArgument(
            "derivative order must be ≤ 3".into(),
        ));
    }
    f.require_weight(Weight::VectorField)?;
    g.require_weight(Weight::VectorField)?;
    let (hf, hg) = (f.band_limited()?, g.band_limited()?);
    // order 0 is the pushed-forward field jacobian·h, so it carries an extra
    // jacobian factor
    let pick = |h: &CircleFourier, k: usize| -> (CircleFourier, u32) {
        let d = line_derivatives(h);
        match k {
            0 => (h.clone(), 1),
            1 => (d.first, 0),
            2 => (d.second, 0),
            _ => (d.third, 0),
        }
    };
    let ((pf, wf), (pg, wg)) = (pick(&hf, a), pick(&hg, b));
    let powers = 1 + wf + wg;
    let product = pf
        .pointwise_product(&pg, pf.max_mode() + pg.max_mode())
        .value;
    if let Some(p) = times_jacobian_power(&product, powers) {
        return Ok(integrate_cut(|th| p.eval_real(th), &[], quad));
    }
    // not enough vanishing at -1 for exact division; integrate pointwise and
    // let the cut test decide convergence
    Ok(integrate_cut(
        |th| pf.eval_real(th) * pg.eval_real(th) * jacobian(th).powi(powers as i32),
        &[],
        quad,
    ))
}

/// `∫_ℝ F'''(t) G(t) dt`; requires `F` to vanish at `-1` to order ≥ 1 and the
/// combined order to be ≥ 3.
pub fn vectorfield_line_integral_f3g(
    f: &LineObject,
    g: &LineObject,
    quad: &QuadratureSpec,
) -> Result<CutIntegral> {
    admissible_pair(f, g)?;
    line_pairing(f, 3, g, 0, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnspace::piecewise::gn_family;
    use std::f64::consts::PI;

    fn field(p: CircleFourier) -> CircleFourier {
        p.mul_one_minus_cos()
    }

    #[test]
    fn zero_integrates_to_zero() {
        let r = line_integral(
            &LineObject::zero(Weight::Function),
            &QuadratureSpec::default(),
        );
        assert!(r.converged);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn bump_integral_matches_direct_line_quadrature() {
        let b = LineBump::new(0.3, 0.8, 1.5).unwrap();
        let f = LineObject::function(b);
        let r = line_integral(&f, &QuadratureSpec::default());
        // direct midpoint rule in t
        let n = 200_000;
        let (lo, hi) = b.support();
        let h = (hi - lo) / n as f64;
        let direct: f64 = (0..n)
            .map(|j| b.eval(lo + (j as f64 + 0.5) * h))
            .sum::<f64>()
            * h;
        assert!(r.converged);
        assert!((r.value - direct).abs() < 1e-9, "{} vs {}", r.value, direct);
    }

    #[test]
    fn gn_integral_is_stable_under_node_doubling() {
        let q = QuadratureSpec::default();
        let f = LineObject::function(gn_family(4).unwrap());
        let a = line_integral(&f, &q).finite().unwrap();
        let b = line_integral(&f, &q.doubled()).finite().unwrap();
        assert!((a - b).abs() < 1e-8);
        assert!(a > 0.0);
    }

    #[test]
    fn dilation_at_zero_reprojects_input() {
        let q = QuadratureSpec::default();
        let f = LineObject::function(LineBump::new(0.0, 1.0, 1.0).unwrap());
        let d = dilate_line(&f, 0.0, 64, &q).unwrap();
        let p = f.projection(64, &q);
        let diff = sobolev_half_sq(&d.projection.coeffs.sub(&p.coeffs)).unwrap();
        assert!(diff < 1e-8);
    }

    #[test]
    fn dilation_scales_line_integral() {
        let q = QuadratureSpec::default();
        let pieces = [
            LineObject::function(LineBump::new(0.5, 1.0, 1.0).unwrap()),
            LineObject::function(gn_family(8).unwrap()),
        ];
        for f in &pieces {
            let base = line_integral(f, &q).finite().unwrap();
            for s in [-0.5, 0.5] {
                let d = dilate_line(f, s, 64, &q).unwrap();
                let v = line_integral(&d.object, &q).finite().unwrap();
                assert!(
                    (v - s.exp() * base).abs() < 1e-6,
                    "s={s}: {v} vs {}",
                    s.exp() * base
                );
            }
        }
    }

    #[test]
    fn dilation_preserves_sobolev_norm() {
        let q = QuadratureSpec::default();
        let f = LineObject::function(LineBump::new(0.2, 1.2, 0.7).unwrap());
        let base = sobolev_half_sq(&f.projection(128, &q).coeffs).unwrap();
        for s in [-0.5, 0.5] {
            let d = dilate_line(&f, s, 128, &q).unwrap();
            let v = sobolev_half_sq(&d.projection.coeffs).unwrap();
            assert!((v - base).abs() < 1e-6, "{v} vs {base}");
        }
    }

    #[test]
    fn dilation_rejects_noncompact_support() {
        let q = QuadratureSpec::default();
        let g = LineObject::function(crate::fnspace::piecewise::g_limit());
        assert_eq!(
            dilate_line(&g, 0.1, 16, &q).unwrap_err(),
            Error::SupportAtInfinity
        );
        let far = LineObject::function(LineBump::new(0.0, 1.0, 1.0).unwrap());
        assert_eq!(
            dilate_line(&far, 16.0, 16, &q).unwrap_err(),
            Error::SupportAtInfinity
        );
    }

    #[test]
    fn band_limited_field_derivatives_agree_with_pushforward() {
        // h = (1 - cos θ)(1 + sin θ): F = C_* h = 1 + sin θ on the circle.
        let p = CircleFourier::from_trig(1.0, &[(0.0, 1.0)]);
        let h = field(p.clone());
        let d = line_derivatives(&h);
        assert!(d.residual < 1e-15);
        // F' via d/dt = (1 - cos θ) d/dθ applied to F = p
        let alt = p.derivative().mul_one_minus_cos();
        assert!(d.first.max_coeff_diff(&alt) < 1e-14);
        // finite-difference check on the line
        let f = LineObject::vector_field(h, 2).unwrap();
        for t in [-2.0, 0.0, 0.7, 3.0] {
            let e = 1e-5;
            let fd = (f.eval_line(t + e) - f.eval_line(t - e)) / (2.0 * e);
            assert!((fd - d.first.eval_real(theta_of_t(t))).abs() < 1e-8);
        }
    }

    #[test]
    fn vector_field_rejects_false_vanishing_order() {
        let h = CircleFourier::from_trig(1.0, &[(0.5, 0.0)]);
        assert!(matches!(
            LineObject::vector_field(h, 1),
            Err(Error::VanishingCheck { .. })
        ));
    }

    #[test]
    fn f3g_matches_circle_cocycle_and_integration_by_parts() {
        let q = QuadratureSpec::default();
        let hf = field(CircleFourier::from_trig(0.3, &[(0.0, 1.0), (0.2, -0.4)]));
        let hg = field(CircleFourier::from_trig(-0.1, &[(1.0, 0.5)]));
        let f = LineObject::vector_field(hf.clone(), 2).unwrap();
        let g = LineObject::vector_field(hg.clone(), 2).unwrap();
        let i30 = vectorfield_line_integral_f3g(&f, &g, &q)
            .unwrap()
            .finite()
            .unwrap();
        // ∫(h''' + h') k dθ = 2π Σ i(m - m³) h_m k_{-m}
        let oracle: f64 = (2.0
            * PI
            * hf.modes()
                .map(|(m, c)| {
                    let mf = m as f64;
                    Complex64::new(0.0, mf - mf * mf * mf) * c * hg.coeff(-m)
                })
                .sum::<Complex64>())
        .re;
        assert!((i30 - oracle).abs() < 1e-8, "{i30} vs {oracle}");
        let i21 = line_pairing(&f, 2, &g, 1, &q).unwrap().finite().unwrap();
        let i12 = line_pairing(&f, 1, &g, 2, &q).unwrap().finite().unwrap();
        assert!((i30 + i21).abs() < 1e-8);
        assert!((i30 - i12).abs() < 1e-8);
        let iff = vectorfield_line_integral_f3g(&f, &f, &q)
            .unwrap()
            .finite()
            .unwrap();
        assert!(iff.abs() < 1e-8);
        let swap = vectorfield_line_integral_f3g(&g, &f, &q)
            .unwrap()
            .finite()
            .unwrap();
        assert!((i30 + swap).abs() < 1e-8);
    }

    #[test]
    fn vector_field_integral_divides_jacobian_exactly() {
        // h = (1 - cos θ)²·(0.7 + cos θ) gives ∫F dt = ∫(0.7 + cos θ)dθ
        let base = CircleFourier::from_trig(0.7, &[(1.0, 0.0)]);
        let h = field(field(base));
        let f = LineObject::vector_field(h, 4).unwrap();
        let r = line_integral(&f, &QuadratureSpec::default());
        assert!(r.converged);
        assert!((r.value - 0.7 * 2.0 * PI).abs() < 1e-12);
        // only order 2: F tends to a nonzero constant, so the integral diverges
        let g = LineObject::vector_field(field(CircleFourier::constant(1.0)), 2).unwrap();
        assert!(!line_integral(&g, &QuadratureSpec::default()).converged);
    }

    #[test]
    fn f3g_requires_vanishing_orders() {
        let q = QuadratureSpec::default();
        let h = field(CircleFourier::from_trig(1.0, &[(0.0, 1.0)]));
        let f = LineObject::vector_field(h.clone(), 1).unwrap();
        let g = LineObject::vector_field(h, 1).unwrap();
        assert!(matches!(
            vectorfield_line_integral_f3g(&f, &g, &q),
            Err(Error::VanishingOrder { required: 3, .. })
        ));
        let fun = LineObject::function(CircleFourier::cos(1));
        assert!(matches!(
            vectorfield_line_integral_f3g(&fun, &g, &q),
            Err(Error::WrongWeight { .. })
        ));
    }
}
