//! States as functionals on words of Weyl operators: the vacuum, the ground
//! states `ω∘α_q`, their one-point functions, and the non-normality table.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fnspace::{
    dilate_line, g_limit, gn_family, line_integral, sobolev_half_sq, symplectic, translate_line,
    LineObject, QuadratureSpec, Weight,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GroundStateParams {
    pub q: f64,
    pub kappa: f64,
}

impl GroundStateParams {
    pub fn new(q: f64, kappa: f64) -> Self {
        GroundStateParams { q, kappa }
    }
}

/// `W(f₁)⋯W(f_k)` for real line functions vanishing near the point at
/// infinity.
#[derive(Clone, Debug, Default)]
pub struct WeylWord {
    factors: Vec<LineObject>,
}

impl WeylWord {
    pub fn new(factors: Vec<LineObject>) -> Result<Self> {
        for f in &factors {
            f.require_weight(Weight::Function)?;
            if !f.is_real() {
                return Err(Error::NotReal);
            }
            if f.vanishing_order() < 2 {
                return Err(Error::SupportAtInfinity);
            }
        }
        Ok(WeylWord { factors })
    }

    pub fn single(f: LineObject) -> Result<Self> {
        Self::new(vec![f])
    }

    pub fn factors(&self) -> &[LineObject] {
        &self.factors
    }
}

/// `W(f₁)⋯W(f_k) = phase · W(total)`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub phase: Complex64,
    pub total: LineObject,
}

/// Left-to-right reduction with `W(f)W(g) = e^{-(i/2)σ̃(f,g)} W(f + g)`, the
/// symplectic form taken on `M`-mode projections.
pub fn weyl_reduce(w: &WeylWord, modes: usize, quad: &QuadratureSpec) -> Result<Reduced> {
    let mut total = LineObject::zero(Weight::Function);
    let mut acc = LineObject::zero(Weight::Function)
        .projection(modes, quad)
        .coeffs;
    let mut exponent = 0.0;
    for f in &w.factors {
        let p = f.projection(modes, quad).coeffs;
        exponent += symplectic(&acc, &p)?;
        acc = acc.add(&p);
        total = total.add(f)?;
    }
    Ok(Reduced {
        phase: Complex64::from_polar(1.0, -0.5 * exponent),
        total,
    })
}

/// `⟨Ω, W(f)Ω⟩ = exp(-½‖J(f)Ω‖²)` on the `M`-mode projection.
pub fn vacuum_weyl(f: &LineObject, modes: usize, quad: &QuadratureSpec) -> Result<f64> {
    let p = f.projection(modes, quad);
    Ok((-0.5 * sobolev_half_sq(&p.coeffs)?).exp())
}

/// `ω∘α_q` on a Weyl word: `phase · e^{iq∫total} · ⟨Ω, W(total)Ω⟩`.
pub fn ground_weyl(
    p: &GroundStateParams,
    w: &WeylWord,
    modes: usize,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    let r = weyl_reduce(w, modes, quad)?;
    if r.total.is_zero() {
        return Ok(r.phase);
    }
    let charge = if p.q == 0.0 {
        0.0
    } else {
        p.q * line_integral(&r.total, quad).finite()?
    };
    let vac = vacuum_weyl(&r.total, modes, quad)?;
    Ok(r.phase * Complex64::from_polar(vac, charge))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurrentOnePoint {
    /// `q ∫f`.
    pub closed_form: f64,
    /// `(1/i) d/ds ω∘α_q(W(sf))` at `s = 0`, by central differences.
    pub finite_difference: f64,
}

/// Step of the central difference in [`ground_current_onepoint`].
pub const ONEPOINT_STEP: f64 = 1e-4;

/// `ω∘α_q(J(f)) = q∫f`, together with its finite-difference counterpart.
pub fn ground_current_onepoint(
    p: &GroundStateParams,
    f: &LineObject,
    modes: usize,
    quad: &QuadratureSpec,
) -> Result<CurrentOnePoint> {
    f.require_weight(Weight::Function)?;
    let closed_form = p.q * line_integral(f, quad).finite()?;
    let h = ONEPOINT_STEP;
    let plus = ground_weyl(p, &WeylWord::single(f.scale(h))?, modes, quad)?;
    let minus = ground_weyl(p, &WeylWord::single(f.scale(-h))?, modes, quad)?;
    let derivative = (plus - minus) / (2.0 * h);
    Ok(CurrentOnePoint {
        closed_form,
        finite_difference: (derivative / Complex64::new(0.0, 1.0)).re,
    })
}

/// `ω∘α_q(T^κ(F)) = (q²/2)∫F`.
pub fn ground_stress_onepoint(
    p: &GroundStateParams,
    f: &LineObject,
    quad: &QuadratureSpec,
) -> Result<f64> {
    f.require_weight(Weight::VectorField)?;
    Ok(0.5 * p.q * p.q * line_integral(f, quad).finite()?)
}

/// Smallest eigenvalue of `G_{jk} = ω∘α_q(W(-f_j)W(f_k))`.
pub fn gram_psd(
    p: &GroundStateParams,
    fs: &[LineObject],
    modes: usize,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let n = fs.len();
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let w = WeylWord::new(vec![fs[j].scale(-1.0), fs[k].clone()])?;
            g[(j, k)] = ground_weyl(p, &w, modes, quad)?;
        }
    }
    // symmetrize away rounding before the Hermitian eigensolver
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(h.symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |m, &e| m.min(e)))
}

/// A covariance residual next to the re-projection error of the transformed
/// test function.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CovarianceResidual {
    pub residual: f64,
    pub projection_error: f64,
}

/// `|ω∘α_q(W(f∘δ_{-s})) - ω∘α_{e^s q}(W(f))|`.
pub fn dilation_orbit_residual(
    q: f64,
    s: f64,
    f: &LineObject,
    modes: usize,
    quad: &QuadratureSpec,
) -> Result<CovarianceResidual> {
    let d = dilate_line(f, s, modes, quad)?;
    let lhs = ground_weyl(
        &GroundStateParams::new(q, 0.0),
        &WeylWord::single(d.object)?,
        modes,
        quad,
    )?;
    let rhs = ground_weyl(
        &GroundStateParams::new(s.exp() * q, 0.0),
        &WeylWord::single(f.clone())?,
        modes,
        quad,
    )?;
    Ok(CovarianceResidual {
        residual: (lhs - rhs).norm(),
        projection_error: d
            .projection
            .residual
            .max(f.projection(modes, quad).residual),
    })
}

/// `|ω∘α_q(W(f(· - t))) - ω∘α_q(W(f))|`.
pub fn translation_invariance_residual(
    q: f64,
    f: &LineObject,
    t: f64,
    modes: usize,
    quad: &QuadratureSpec,
) -> Result<CovarianceResidual> {
    let p = GroundStateParams::new(q, 0.0);
    let moved = translate_line(f, t, modes, quad)?;
    let lhs = ground_weyl(&p, &WeylWord::single(moved.object)?, modes, quad)?;
    let rhs = ground_weyl(&p, &WeylWord::single(f.clone())?, modes, quad)?;
    Ok(CovarianceResidual {
        residual: (lhs - rhs).norm(),
        projection_error: moved
            .projection
            .residual
            .max(f.projection(modes, quad).residual),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NonNormalRow {
    pub n: u32,
    /// `q ∫ g_n(C(t)) dt`.
    pub q_n: f64,
    /// Sobolev-½ weight of `g_n - g` on `M` modes.
    pub d_n: f64,
    pub converged: bool,
}

/// The table of `(n, q_n, d_n)`: the charges diverge while `g_n → g` in the
/// Sobolev-½ seminorm.
pub fn nonnormality_series(
    q: f64,
    ns: &[u32],
    modes: usize,
    quad: &QuadratureSpec,
) -> Result<Vec<NonNormalRow>> {
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "ns must be strictly increasing".into(),
        ));
    }
    let g = g_limit();
    ns.iter()
        .map(|&n| {
            let gn = gn_family(n)?;
            let integral = line_integral(&LineObject::function(gn.clone()), quad);
            let d_n = sobolev_half_sq(&gn.sub(&g).fourier_project(modes))?;
            Ok(NonNormalRow {
                n,
                q_n: q * integral.value,
                d_n,
                converged: integral.converged,
            })
        })
        .collect()
}
