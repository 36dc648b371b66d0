//! Level-truncated charge-zero bosonic Fock space.
//!
//! Basis vectors `J_{-n₁}⋯J_{-n_k}Ω` are labelled by partitions and kept
//! unnormalized; their squared norms are exact integers.

pub mod matrix;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fnspace::CircleFourier;

pub use matrix::{expm_action, expm_dense, Basis, SparseOperator};

/// Multiset of positive integers, stored in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(
                "partition parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.0.iter().filter(|&&p| p == part).count() as u32
    }

    fn with_part(&self, part: u32) -> Partition {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&p| p > part);
        v.insert(pos, part);
        Partition(v)
    }

    fn without_part(&self, part: u32) -> Option<Partition> {
        let pos = self.0.iter().position(|&p| p == part)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Partition(v))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// `‖J_{-λ}Ω‖² = Π_j j^{m_j}·m_j!`.
pub fn basis_norm_sq(lambda: &Partition) -> u128 {
    let mut out: u128 = 1;
    let parts = lambda.parts();
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i];
        let mut m = 0u128;
        while i < parts.len() && parts[i] == j {
            m += 1;
            out *= j as u128 * m;
            i += 1;
        }
    }
    out
}

/// All partitions of level `≤ max_level`, ordered by level and then
/// lexicographically (descending parts).
pub fn partitions_up_to(max_level: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    for level in 0..=max_level {
        let mut cur = Vec::new();
        partitions_of(level, level, &mut cur, &mut out);
    }
    out
}

fn partitions_of(rest: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        cur.push(p);
        partitions_of(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Highest level at which a computed vector agrees with the untruncated
/// result; `None` when no level is guaranteed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactnessWindow {
    safe_level: Option<u32>,
}

impl ExactnessWindow {
    pub fn full(cutoff: u32) -> Self {
        ExactnessWindow {
            safe_level: Some(cutoff),
        }
    }

    pub fn empty() -> Self {
        ExactnessWindow { safe_level: None }
    }

    pub fn safe_level(&self) -> Option<u32> {
        self.safe_level
    }

    pub fn covers(&self, level: u32) -> bool {
        self.safe_level.is_some_and(|s| level <= s)
    }

    /// Window after an operator that shifts the level by `delta`.
    pub fn shifted(self, delta: i64, cutoff: u32) -> Self {
        let safe_level = self.safe_level.and_then(|s| {
            let t = s as i64 + delta;
            (t >= 0).then(|| t.min(cutoff as i64) as u32)
        });
        ExactnessWindow { safe_level }
    }

    pub fn meet(self, other: Self) -> Self {
        let safe_level = match (self.safe_level, other.safe_level) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        ExactnessWindow { safe_level }
    }
}

/// Sparse vector over the partition basis of levels `≤ cutoff`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    cutoff: u32,
    amps: BTreeMap<Partition, Complex64>,
    window: ExactnessWindow,
}

impl FockVector {
    pub fn zero(cutoff: u32) -> Self {
        FockVector {
            cutoff,
            amps: BTreeMap::new(),
            window: ExactnessWindow::full(cutoff),
        }
    }

    pub fn vacuum(cutoff: u32) -> Self {
        Self::basis(cutoff, Partition::empty()).expect("vacuum has level 0")
    }

    pub fn basis(cutoff: u32, lambda: Partition) -> Result<Self> {
        let level = lambda.level();
        if level > cutoff {
            return Err(Error::LevelAboveCutoff { level, cutoff });
        }
        let mut v = Self::zero(cutoff);
        v.amps.insert(lambda, Complex64::new(1.0, 0.0));
        Ok(v)
    }

    pub fn from_amplitudes(
        cutoff: u32,
        amps: impl IntoIterator<Item = (Partition, Complex64)>,
    ) -> Result<Self> {
        let mut v = Self::zero(cutoff);
        for (lambda, a) in amps {
            let level = lambda.level();
            if level > cutoff {
                return Err(Error::LevelAboveCutoff { level, cutoff });
            }
            v.accumulate(lambda, a);
        }
        Ok(v)
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn window(&self) -> ExactnessWindow {
        self.window
    }

    pub fn amplitude(&self, lambda: &Partition) -> Complex64 {
        self.amps.get(lambda).copied().unwrap_or_default()
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Partition, &Complex64)> {
        self.amps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn max_level(&self) -> Option<u32> {
        self.amps.keys().map(Partition::level).max()
    }

    pub(crate) fn accumulate(&mut self, lambda: Partition, a: Complex64) {
        if a == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.amps.entry(lambda) {
            Entry::Vacant(e) => {
                e.insert(a);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += a;
                if *e.get() == Complex64::new(0.0, 0.0) {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_cutoff(other)?;
        let mut out = self.clone();
        for (k, &a) in &other.amps {
            out.accumulate(k.clone(), a);
        }
        out.window = self.window.meet(other.window);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = Self::zero(self.cutoff);
        out.window = self.window;
        if a != Complex64::new(0.0, 0.0) {
            out.amps = self.amps.iter().map(|(k, &v)| (k.clone(), a * v)).collect();
        }
        out
    }

    /// Components of level `≤ level`.
    pub fn restricted(&self, level: u32) -> Self {
        let mut out = self.clone();
        out.amps.retain(|k, _| k.level() <= level);
        out
    }

    /// The same vector with its window replaced.
    pub fn with_window(mut self, window: ExactnessWindow) -> Self {
        self.window = window;
        self
    }

    fn check_cutoff(&self, other: &Self) -> Result<()> {
        if self.cutoff == other.cutoff {
            Ok(())
        } else {
            Err(Error::CutoffMismatch(self.cutoff, other.cutoff))
        }
    }

    /// `⟨u, v⟩`, antilinear in `u`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_cutoff(other)?;
        let (small, large, flip) = if self.amps.len() <= other.amps.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in &small.amps {
            if let Some(b) = large.amps.get(k) {
                let term = a.conj() * b * basis_norm_sq(k) as f64;
                acc += if flip { term.conj() } else { term };
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps
            .iter()
            .map(|(k, a)| a.norm_sqr() * basis_norm_sq(k) as f64)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `J_n v`. `J_0` acts as zero in the vacuum sector; creation beyond the
    /// cutoff is dropped and recorded in the window.
    pub fn apply_mode(&self, n: i64) -> Self {
        let mut out = Self::zero(self.cutoff);
        out.window = self.window.shifted(-n, self.cutoff);
        if n == 0 {
            return out;
        }
        let k = n.unsigned_abs() as u32;
        for (lambda, &a) in &self.amps {
            if n < 0 {
                if lambda.level() + k <= self.cutoff {
                    out.accumulate(lambda.with_part(k), a);
                }
            } else {
                let m = lambda.multiplicity(k);
                if m > 0 {
                    let reduced = lambda.without_part(k).expect("part present");
                    out.accumulate(reduced, a * (k * m) as f64);
                }
            }
        }
        out
    }

    /// `J(f)v = Σ_n c_n J_n v`.
    pub fn apply_current(&self, f: &CircleFourier) -> Self {
        let mut out = Self::zero(self.cutoff);
        let mut window = self.window;
        for (n, c) in f.modes() {
            if n == 0 || c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let term = self.apply_mode(n);
            window = window.meet(term.window);
            for (k, &a) in &term.amps {
                out.accumulate(k.clone(), c * a);
            }
        }
        out.window = window;
        out
    }

    /// The level operator.
    pub fn apply_l0(&self) -> Self {
        let mut out = self.clone();
        for (k, a) in out.amps.iter_mut() {
            *a *= k.level() as f64;
        }
        out.amps.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        out
    }

    /// The involution `(-1)^{#parts}` implementing `J ↦ -J`.
    pub fn apply_parity(&self) -> Self {
        let mut out = self.clone();
        for (k, a) in out.amps.iter_mut() {
            if k.len() % 2 == 1 {
                *a = -*a;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnspace::{sigma, sobolev_half_sq, CCR_SCALE};
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dist(a: &FockVector, b: &FockVector) -> f64 {
        a.sub(b).unwrap().norm()
    }

    #[test]
    fn partition_counts() {
        // p(0..=6) = 1, 1, 2, 3, 5, 7, 11
        assert_eq!(partitions_up_to(6).len(), 30);
        assert_eq!(partitions_up_to(12).len(), 272);
        assert_eq!(partitions_up_to(16).len(), 915);
    }

    #[test]
    fn norms_of_small_partitions() {
        assert_eq!(basis_norm_sq(&Partition::empty()), 1);
        assert_eq!(basis_norm_sq(&p(&[1, 1])), 2);
        assert_eq!(basis_norm_sq(&p(&[3])), 3);
        assert_eq!(basis_norm_sq(&p(&[2, 2, 1])), 2 * 2 * 2);
    }

    #[test]
    fn norms_agree_with_commutator_evaluation() {
        for lambda in partitions_up_to(7) {
            let v = FockVector::basis(7, lambda.clone()).unwrap();
            // ⟨v, v⟩ = ⟨Ω, J_{λ} J_{-λ} Ω⟩ by adjointness
            let mut w = v.clone();
            for &k in lambda.parts() {
                w = w.apply_mode(k as i64);
            }
            let expected = basis_norm_sq(&lambda) as f64;
            assert_eq!(w.amplitude(&Partition::empty()), c(expected));
        }
    }

    #[test]
    fn vacuum_is_annihilated() {
        let v = FockVector::vacuum(8);
        assert_eq!(v.norm(), 1.0);
        for n in 0..=3 {
            assert!(v.apply_mode(n).is_zero());
        }
    }

    #[test]
    fn creation_and_annihilation_on_level_two() {
        let two = FockVector::vacuum(8).apply_mode(-2);
        assert_eq!(two.amplitude(&p(&[2])), c(1.0));
        let back = two.apply_mode(2);
        assert_eq!(back.amplitude(&Partition::empty()), c(2.0));
    }

    #[test]
    fn distinct_levels_are_orthogonal() {
        let a = FockVector::basis(8, p(&[1])).unwrap();
        let b = FockVector::basis(8, p(&[2])).unwrap();
        assert_eq!(a.inner(&b).unwrap(), c(0.0));
        assert!(matches!(
            a.inner(&FockVector::vacuum(9)),
            Err(Error::CutoffMismatch(8, 9))
        ));
    }

    #[test]
    fn creation_truncates_and_shrinks_window() {
        let v = FockVector::basis(4, p(&[3])).unwrap();
        let w = v.apply_mode(-2);
        assert!(w.is_zero());
        assert_eq!(w.window().safe_level(), Some(4));
        let back = w.apply_mode(2);
        assert_eq!(back.window().safe_level(), Some(2));
        assert!(!back.window().covers(3));
        let gone = FockVector::vacuum(2).apply_mode(3);
        assert_eq!(gone.window(), ExactnessWindow::empty());
    }

    #[test]
    fn constant_current_is_zero() {
        let v = FockVector::basis(6, p(&[2, 1])).unwrap();
        assert!(v.apply_current(&CircleFourier::constant(3.0)).is_zero());
    }

    #[test]
    fn l0_is_level() {
        let v = FockVector::basis(8, p(&[3, 1])).unwrap();
        assert_eq!(v.apply_l0().amplitude(&p(&[3, 1])), c(4.0));
        assert!(FockVector::vacuum(8).apply_l0().is_zero());
    }

    fn arb_vector(cutoff: u32, max_level: u32) -> impl Strategy<Value = FockVector> {
        let basis = partitions_up_to(max_level);
        let n = basis.len();
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |xs| {
            FockVector::from_amplitudes(
                cutoff,
                basis
                    .iter()
                    .cloned()
                    .zip(xs.into_iter().map(|(a, b)| Complex64::new(a, b))),
            )
            .unwrap()
        })
    }

    fn arb_real_fourier(m: usize) -> impl Strategy<Value = CircleFourier> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), m)
            .prop_map(|ab| CircleFourier::from_trig(0.0, &ab))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn heisenberg_relations(v in arb_vector(10, 4), m in -3i64..=3, n in -3i64..=3) {
            let lhs = v.apply_mode(n).apply_mode(m).sub(&v.apply_mode(m).apply_mode(n)).unwrap();
            let rhs = if m + n == 0 { v.scale(c(m as f64)) } else { FockVector::zero(10) };
            prop_assert!(dist(&lhs, &rhs) < 1e-12 * (1.0 + v.norm()));
        }

        #[test]
        fn mode_adjointness(u in arb_vector(8, 5), v in arb_vector(8, 5), n in 1i64..=3) {
            let lhs = u.apply_mode(-n).inner(&v).unwrap();
            let rhs = u.inner(&v.apply_mode(n)).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + u.norm() * v.norm()));
        }

        #[test]
        fn modes_shift_level(v in arb_vector(10, 5), n in -4i64..=4) {
            let w = v.apply_mode(n);
            for (k, _) in w.amplitudes() {
                prop_assert!(k.level() as i64 <= 5 - n);
            }
        }

        #[test]
        fn l0_is_positive(v in arb_vector(8, 6)) {
            let e = v.inner(&v.apply_l0()).unwrap();
            prop_assert!(e.re >= -1e-14 && e.im.abs() < 1e-12);
        }

        #[test]
        fn current_norm_is_sobolev(f in arb_real_fourier(5)) {
            let v = FockVector::vacuum(8).apply_current(&f);
            prop_assert!((v.norm_sq() - sobolev_half_sq(&f).unwrap()).abs() < 1e-13);
        }

        #[test]
        fn current_commutator_is_scalar(
            f in arb_real_fourier(3),
            g in arb_real_fourier(3),
            v in arb_vector(12, 4),
        ) {
            let lhs = v.apply_current(&g).apply_current(&f)
                .sub(&v.apply_current(&f).apply_current(&g)).unwrap();
            let s = CCR_SCALE * sigma(&f, &g).unwrap();
            let rhs = v.scale(Complex64::new(0.0, s));
            prop_assert!(dist(&lhs, &rhs) < 1e-11 * (1.0 + v.norm()));
        }

        #[test]
        fn symplectic_form_from_vacuum_inner_products(
            f in arb_real_fourier(4),
            g in arb_real_fourier(4),
        ) {
            let om = FockVector::vacuum(8);
            let ip = om.apply_current(&f).inner(&om.apply_current(&g)).unwrap();
            let s = CCR_SCALE * sigma(&f, &g).unwrap();
            prop_assert!((2.0 * ip.im - s).abs() < 1e-13);
        }
    }
}
