//! Virasoro modes from the Sugawara construction and the smeared stress
//! tensor, unperturbed and perturbed by a current derivative.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fnspace::{
    line_derivatives, symplectic, vectorfield_line_integral_f3g, CircleFourier, LineObject,
    QuadratureSpec, Weight,
};
use crate::fock::{expm_action, Basis, FockVector, Partition, SparseOperator};

/// Factor multiplying `κ J(F')` in the perturbed stress tensor. With the
/// current normalized by `[J(f), J(g)] = i CCR_SCALE ∫fg'`, the unit factor
/// gives central charge `1 + 12κ²`; this choice gives `1 + κ²`.
pub const PERTURBATION_SCALE: f64 = 0.288_675_134_594_812_9; // 1/√12

/// Relates the vacuum commutator of smeared stress tensors to `∫F'''G dt`:
/// `⟨Ω, [T(F), T(G)]Ω⟩ = i c ∫F'''G / (12 · LINE_CENTRAL_NORMALIZATION)`.
pub const LINE_CENTRAL_NORMALIZATION: f64 = TAU;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VirasoroParams {
    kappa: f64,
    central_charge: f64,
}

impl VirasoroParams {
    pub fn new(kappa: f64) -> Self {
        VirasoroParams {
            kappa,
            central_charge: 1.0 + kappa * kappa,
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn central_charge(&self) -> f64 {
        self.central_charge
    }
}

fn half() -> Complex64 {
    Complex64::new(0.5, 0.0)
}

fn add_into(acc: &mut FockVector, w: &FockVector, c: Complex64) {
    for (k, &a) in w.amplitudes() {
        acc.accumulate(k.clone(), c * a);
    }
}

/// `L_n v` with `L_n = ½ Σ_m :J_{-m} J_{n+m}:`, as a finite sum bounded by the
/// top level of `v`.
pub fn apply_virasoro_mode(n: i64, v: &FockVector) -> FockVector {
    let cutoff = v.cutoff();
    let window = v.window().shifted(-n, cutoff);
    let mut out = FockVector::zero(cutoff);
    let Some(top) = v.max_level() else {
        return out.with_window(window);
    };
    let one = Complex64::new(1.0, 0.0);
    // mixed terms J_{n-d} J_d with d > 0 and n - d < 0
    for d in (n.max(0) + 1)..=top as i64 {
        let w = v.apply_mode(d);
        if !w.is_zero() {
            add_into(&mut out, &w.apply_mode(n - d), one);
        }
    }
    // two annihilators or two creators
    let k = n.abs();
    for a in 1..k {
        let (x, y) = if n > 0 { (a, k - a) } else { (-a, -(k - a)) };
        let w = v.apply_mode(y);
        if !w.is_zero() {
            add_into(&mut out, &w.apply_mode(x), half());
        }
    }
    out.with_window(window)
}

/// `T(f)v = Σ_n c_n L_n v`.
pub fn apply_stress_circle(f: &CircleFourier, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.cutoff());
    let mut window = v.window();
    for (n, c) in f.modes() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = apply_virasoro_mode(n, v);
        window = window.meet(w.window());
        add_into(&mut out, &w, c);
    }
    out.with_window(window)
}

/// Result of applying the line stress tensor, with the obstruction to an
/// exact Fourier representation of `F'`.
#[derive(Clone, Debug)]
pub struct StressApplication {
    pub vector: FockVector,
    pub residual: f64,
}

/// `T^κ(F)v = T(h)v + κ·PERTURBATION_SCALE·J(F')v` for a vector field `F` with
/// band-limited circle coefficient `h`.
pub fn apply_stress_line(f: &LineObject, kappa: f64, v: &FockVector) -> Result<StressApplication> {
    f.require_weight(Weight::VectorField)?;
    let h = f.band_limited()?;
    let mut vector = apply_stress_circle(&h, v);
    let mut residual = 0.0;
    if kappa != 0.0 {
        let d = line_derivatives(&h);
        residual = d.residual;
        let j = v.apply_current(&d.first);
        let window = vector.window().meet(j.window());
        add_into(
            &mut vector,
            &j,
            Complex64::new(kappa * PERTURBATION_SCALE, 0.0),
        );
        vector = vector.with_window(window);
    }
    Ok(StressApplication { vector, residual })
}

/// Largest relative residual of
/// `[L_m, L_n] - (m - n)L_{m+n} - δ_{m+n,0}(m³ - m)/12` over basis vectors of
/// level `≤ N - |m| - |n|` at `c = 1`. The central term can be dropped for
/// mutation testing.
pub fn virasoro_residual(m: i64, n: i64, cutoff: u32, include_central: bool) -> Result<f64> {
    let span = (m.abs() + n.abs()) as u32;
    if span + 2 > cutoff {
        return Err(Error::Window(format!(
            "|m| + |n| = {span} needs cutoff ≥ {}, got {cutoff}",
            span + 2
        )));
    }
    let central = if include_central && m + n == 0 {
        (m * m * m - m) as f64 / 12.0
    } else {
        0.0
    };
    let mut worst: f64 = 0.0;
    for lambda in crate::fock::partitions_up_to(cutoff - span) {
        let v = FockVector::basis(cutoff, lambda).expect("level within cutoff");
        let lhs = apply_virasoro_mode(m, &apply_virasoro_mode(n, &v))
            .sub(&apply_virasoro_mode(n, &apply_virasoro_mode(m, &v)))?;
        let rhs = apply_virasoro_mode(m + n, &v)
            .scale(Complex64::new((m - n) as f64, 0.0))
            .add(&v.scale(Complex64::new(central, 0.0)))?;
        worst = worst.max(lhs.sub(&rhs)?.norm() / v.norm());
    }
    Ok(worst)
}

/// `⟨Ω, L_n L_{-n} Ω⟩`.
pub fn vacuum_moment(n: i64, cutoff: u32) -> Complex64 {
    let om = FockVector::vacuum(cutoff);
    om.inner(&apply_virasoro_mode(n, &apply_virasoro_mode(-n, &om)))
        .expect("same cutoff")
}

/// Largest relative residual of `[T(f), J(g)] = iJ(fg')` over basis vectors of
/// level `≤ N - M_f - M_g`.
pub fn stress_current_residual(f: &CircleFourier, g: &CircleFourier, cutoff: u32) -> Result<f64> {
    let span = (f.max_mode() + g.max_mode()) as u32;
    if span > cutoff {
        return Err(Error::Window(format!(
            "modes {span} exceed cutoff {cutoff}"
        )));
    }
    let fg = f
        .pointwise_product(&g.derivative(), f.max_mode() + g.max_mode())
        .value;
    let mut worst: f64 = 0.0;
    for lambda in crate::fock::partitions_up_to(cutoff - span) {
        let v = FockVector::basis(cutoff, lambda).expect("level within cutoff");
        let lhs = apply_stress_circle(f, &v.apply_current(g))
            .sub(&apply_stress_circle(f, &v).apply_current(g))?;
        let rhs = v.apply_current(&fg).scale(Complex64::new(0.0, 1.0));
        worst = worst.max(lhs.sub(&rhs)?.norm() / v.norm());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChargeEstimate {
    pub value: f64,
    /// `⟨Ω, [T^κ(F), T^κ(G)]Ω⟩ / i`.
    pub vacuum_commutator: f64,
    /// `∫ F'''(t) G(t) dt`.
    pub cocycle: f64,
    pub converged: bool,
}

/// Smallest `|∫F'''G|` accepted as a test pair.
pub const MIN_COCYCLE: f64 = 1e-8;

/// `c = 12·2π·⟨Ω, [T^κ(F), T^κ(G)]Ω⟩ / (i∫F'''G)`, using that `T^κ` of the
/// bracket field has vanishing vacuum expectation.
pub fn central_charge_estimate(
    f: &LineObject,
    g: &LineObject,
    kappa: f64,
    cutoff: u32,
    quad: &QuadratureSpec,
) -> Result<ChargeEstimate> {
    let integral = vectorfield_line_integral_f3g(f, g, quad)?;
    let cocycle = integral.finite()?;
    if cocycle.abs() < MIN_COCYCLE {
        return Err(Error::DegeneratePair(cocycle));
    }
    let om = FockVector::vacuum(cutoff);
    let tf = |v: &FockVector| apply_stress_line(f, kappa, v).map(|a| a.vector);
    let tg = |v: &FockVector| apply_stress_line(g, kappa, v).map(|a| a.vector);
    let fg = om.inner(&tf(&tg(&om)?)?)?;
    let gf = om.inner(&tg(&tf(&om)?)?)?;
    let comm = (fg - gf) / Complex64::new(0.0, 1.0);
    Ok(ChargeEstimate {
        value: 12.0 * LINE_CENTRAL_NORMALIZATION * comm.re / cocycle,
        vacuum_commutator: comm.re,
        cocycle,
        converged: integral.converged,
    })
}

/// Spectral norm of the columns of `r` (via the largest eigenvalue of `r*r`).
fn spectral_norm(r: &DMatrix<Complex64>) -> f64 {
    if r.ncols() == 0 {
        return 0.0;
    }
    let gram = r.adjoint() * r;
    gram.symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |m, &e| m.max(e))
        .sqrt()
}

/// Operator-norm residual of
/// `W(g)T(f)W(g)* - T(f) - J(fg') - ½σ̃(fg', g)` on vectors of level `≤ N/2`,
/// where `W(g) = e^{iJ(g)}` is computed on the truncated space and `σ̃` is the
/// symplectic form normalized as in [`symplectic`].
pub fn weyl_adjoint_stress_residual(
    g: &CircleFourier,
    f: &CircleFourier,
    cutoff: u32,
) -> Result<f64> {
    let half_level = cutoff / 2;
    if half_level as usize + f.max_mode() > cutoff as usize {
        return Err(Error::Window(format!(
            "T(f) with {} modes leaves the window at cutoff {cutoff}",
            f.max_mode()
        )));
    }
    let fg = f
        .pointwise_product(&g.derivative(), f.max_mode() + g.max_mode())
        .value;
    let phase = 0.5 * symplectic(&fg, g)?;
    let basis = Basis::new(cutoff);
    let jg = SparseOperator::from_action(&basis, |v| v.apply_current(g));
    let tf = SparseOperator::from_action(&basis, |v| apply_stress_circle(f, v));
    let jfg = SparseOperator::from_action(&basis, |v| v.apply_current(&fg));
    let cols = basis.count_up_to(half_level);
    let i = Complex64::new(0.0, 1.0);
    let mut r = DMatrix::zeros(basis.len(), cols);
    for j in 0..cols {
        let mut e = DVector::zeros(basis.len());
        e[j] = Complex64::new(1.0, 0.0);
        let conj = expm_action(&jg, -i, &e);
        let w = expm_action(&jg, i, &tf.apply(&conj));
        let col = w - tf.apply(&e) - jfg.apply(&e) - e * Complex64::new(phase, 0.0);
        r.set_column(j, &col);
    }
    Ok(spectral_norm(&r))
}

/// Operator-norm residual of the first-order identity `i[J(g), T(f)] = J(fg')`
/// on vectors of level `≤ N - M_f - M_g`.
pub fn weyl_first_order_residual(g: &CircleFourier, f: &CircleFourier, cutoff: u32) -> Result<f64> {
    let span = (f.max_mode() + g.max_mode()) as u32;
    if span > cutoff {
        return Err(Error::Window(format!(
            "modes {span} exceed cutoff {cutoff}"
        )));
    }
    let fg = f
        .pointwise_product(&g.derivative(), f.max_mode() + g.max_mode())
        .value;
    let basis = Basis::new(cutoff);
    let cols = basis.count_up_to(cutoff - span);
    let i = Complex64::new(0.0, 1.0);
    let mut r = DMatrix::zeros(basis.len(), cols);
    for j in 0..cols {
        let e = basis.unit(j);
        let comm = apply_stress_circle(f, &e)
            .apply_current(g)
            .sub(&apply_stress_circle(f, &e.apply_current(g)))?
            .scale(i);
        let res = comm.sub(&e.apply_current(&fg))?;
        r.set_column(j, &basis.coords(&res)?);
    }
    Ok(spectral_norm(&r))
}

/// `⟨u, T^κ(F) v⟩` for basis vectors, as a dense matrix on levels `≤ N`.
pub fn stress_line_matrix(f: &LineObject, kappa: f64, cutoff: u32) -> Result<DMatrix<Complex64>> {
    f.require_weight(Weight::VectorField)?;
    f.band_limited()?;
    let basis = Basis::new(cutoff);
    let op = SparseOperator::from_action(&basis, |v| {
        apply_stress_line(f, kappa, v)
            .map(|a| a.vector)
            .expect("validated field")
    });
    Ok(op.to_dense())
}

/// Diagonal matrix of the involution `J ↦ -J`, `(-1)^{#parts}`.
pub fn parity_matrix(cutoff: u32) -> DMatrix<Complex64> {
    let basis = Basis::new(cutoff);
    DMatrix::from_diagonal(&DVector::from_iterator(
        basis.len(),
        (0..basis.len()).map(|i| {
            let p: &Partition = basis.partition(i);
            Complex64::new(if p.len().is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0)
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::partitions_up_to;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn test_fields() -> (LineObject, LineObject) {
        // (1 - cos θ)·sin θ and (1 - cos θ)·cos θ, vanishing to order 2 at -1
        let hf = CircleFourier::sin(1).mul_one_minus_cos();
        let hg = CircleFourier::cos(1).mul_one_minus_cos();
        (
            LineObject::vector_field(hf, 2).unwrap(),
            LineObject::vector_field(hg, 2).unwrap(),
        )
    }

    #[test]
    fn virasoro_modes_on_vacuum() {
        let om = FockVector::vacuum(8);
        for n in 0..=2 {
            assert!(apply_virasoro_mode(n, &om).is_zero());
        }
        let l2 = apply_virasoro_mode(-2, &om);
        assert_eq!(l2.amplitude(&p(&[1, 1])), c(0.5));
        assert_eq!(l2.amplitudes().count(), 1);
        assert!((vacuum_moment(2, 8) - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn vacuum_moments_match_central_term() {
        for n in 2..=5 {
            let expected = (n * n * n - n) as f64 / 12.0;
            assert!((vacuum_moment(n, 12) - c(expected)).norm() < 1e-12);
        }
    }

    #[test]
    fn l0_is_the_level_operator() {
        for lambda in partitions_up_to(7) {
            let v = FockVector::basis(10, lambda).unwrap();
            let d = apply_virasoro_mode(0, &v).sub(&v.apply_l0()).unwrap();
            assert!(d.norm() < 1e-14);
        }
        let v = FockVector::basis(8, p(&[3, 1])).unwrap();
        assert_eq!(apply_virasoro_mode(0, &v).amplitude(&p(&[3, 1])), c(4.0));
    }

    #[test]
    fn virasoro_relations_at_c_one() {
        assert!(virasoro_residual(1, -1, 10, true).unwrap() < 1e-10);
        assert!(virasoro_residual(2, -2, 12, true).unwrap() < 1e-10);
        assert!(virasoro_residual(2, 3, 12, true).unwrap() < 1e-10);
        assert!(virasoro_residual(3, -1, 10, true).unwrap() < 1e-10);
    }

    #[test]
    fn dropping_central_term_is_detected() {
        let r = virasoro_residual(2, -2, 12, false).unwrap();
        assert!((r - 0.5).abs() < 1e-10, "{r}");
        assert!(matches!(
            virasoro_residual(4, 4, 8, true),
            Err(Error::Window(_))
        ));
    }

    #[test]
    fn stress_of_constant_is_l0() {
        let v = FockVector::basis(8, p(&[2, 2, 1])).unwrap();
        let t = apply_stress_circle(&CircleFourier::constant(1.0), &v);
        assert!(t.sub(&v.apply_l0()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn stress_line_reduces_and_is_hermitian() {
        let (f, _) = test_fields();
        let h = f.band_limited().unwrap();
        let v = FockVector::basis(8, p(&[2, 1])).unwrap();
        let a = apply_stress_line(&f, 0.0, &v).unwrap();
        assert!(a.vector.sub(&apply_stress_circle(&h, &v)).unwrap().norm() < 1e-15);
        for kappa in [0.0, 0.7, -2.0] {
            let om = FockVector::vacuum(8);
            let e = om
                .inner(&apply_stress_line(&f, kappa, &om).unwrap().vector)
                .unwrap();
            assert!(e.norm() < 1e-15);
            let m = stress_line_matrix(&f, kappa, 8).unwrap();
            assert!((&m - m.adjoint()).norm() < 1e-12);
        }
    }

    #[test]
    fn parity_flips_kappa() {
        let (f, _) = test_fields();
        let par = parity_matrix(8);
        for kappa in [0.5, 2.0] {
            let plus = stress_line_matrix(&f, kappa, 8).unwrap();
            let minus = stress_line_matrix(&f, -kappa, 8).unwrap();
            assert!((&par * plus * &par - minus).norm() < 1e-12);
        }
    }

    #[test]
    fn central_charge_at_several_kappas() {
        let (f, g) = test_fields();
        let q = QuadratureSpec::default();
        for kappa in [0.0, 0.5, 1.0, 2.0] {
            let est = central_charge_estimate(&f, &g, kappa, 12, &q).unwrap();
            let target = VirasoroParams::new(kappa).central_charge();
            assert!(
                (est.value - target).abs() < 1e-6,
                "κ={kappa}: {}",
                est.value
            );
            let swapped = central_charge_estimate(&g, &f, kappa, 12, &q).unwrap();
            assert!((swapped.value - est.value).abs() < 1e-6);
        }
    }

    #[test]
    fn unit_perturbation_scale_gives_twelve_kappa_squared() {
        // Rebuild T^κ with the literal factor κ·J(F') and compare to 1 + 12κ².
        let (f, g) = test_fields();
        let q = QuadratureSpec::default();
        let kappa = 1.0;
        let literal = kappa / PERTURBATION_SCALE;
        let est = central_charge_estimate(&f, &g, literal, 12, &q).unwrap();
        assert!((est.value - (1.0 + 12.0 * kappa * kappa)).abs() < 1e-6);
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let (f, _) = test_fields();
        let q = QuadratureSpec::default();
        assert!(matches!(
            central_charge_estimate(&f, &f, 0.0, 12, &q),
            Err(Error::DegeneratePair(_))
        ));
    }

    #[test]
    fn weyl_adjoint_trivial_and_first_order() {
        let f = CircleFourier::from_trig(0.2, &[(0.5, -0.3), (0.1, 0.2)]);
        assert!(weyl_adjoint_stress_residual(&CircleFourier::zero(2), &f, 8).unwrap() < 1e-14);
        let g = CircleFourier::from_trig(0.0, &[(0.3, 0.1), (-0.2, 0.25)]);
        assert!(weyl_first_order_residual(&g, &f, 10).unwrap() < 1e-9);
    }

    #[test]
    fn weyl_adjoint_improves_with_cutoff() {
        let f = CircleFourier::from_trig(0.0, &[(0.5, 0.0), (0.0, 0.3)]);
        let g = CircleFourier::from_trig(0.0, &[(0.0, 0.4), (0.2, 0.0)]);
        let r8 = weyl_adjoint_stress_residual(&g, &f, 8).unwrap();
        let r12 = weyl_adjoint_stress_residual(&g, &f, 12).unwrap();
        assert!(r12 < r8, "{r12} vs {r8}");
    }

    #[test]
    fn weyl_adjoint_scalar_sign_is_resolved() {
        // with the opposite sign the residual could not drop below |σ̃(fg', g)|
        let f = CircleFourier::from_trig(0.3, &[(0.5, 0.0), (0.0, 0.3)]);
        let g = CircleFourier::from_trig(0.0, &[(0.0, 0.4), (0.2, 0.0)]);
        let fg = f.pointwise_product(&g.derivative(), 4).value;
        let scalar = symplectic(&fg, &g).unwrap().abs();
        let r = weyl_adjoint_stress_residual(&g, &f, 14).unwrap();
        assert!(scalar > 10.0 * r, "{scalar} vs {r}");
    }

    fn arb_real_fourier(m: usize) -> impl Strategy<Value = CircleFourier> {
        (
            -1.0f64..1.0,
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), m),
        )
            .prop_map(|(a0, ab)| CircleFourier::from_trig(a0, &ab))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn stress_current_relation(f in arb_real_fourier(3), g in arb_real_fourier(3)) {
            prop_assert!(stress_current_residual(&f, &g, 10).unwrap() < 1e-9);
        }

        #[test]
        fn virasoro_modes_are_adjoint(n in 1i64..=4, seed in 0usize..30) {
            let basis = partitions_up_to(6);
            let u = FockVector::basis(10, basis[seed % basis.len()].clone()).unwrap();
            let v = FockVector::basis(10, basis[(seed * 7 + 3) % basis.len()].clone()).unwrap();
            let lhs = apply_virasoro_mode(-n, &u).inner(&v).unwrap();
            let rhs = u.inner(&apply_virasoro_mode(n, &v)).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
