//! The Cayley transform `C(t) = -(t - i)/(t + i)` in the angle coordinate.
//!
//! Writing circle points as `-e^{iθ}`, the preimage of `θ ∈ (0, 2π)` is
//! `t(θ) = -cot(θ/2)`, which increases from `-∞` to `+∞`; `θ = 0` is the point
//! at infinity. The Jacobian is `dt/dθ = ½ csc²(θ/2) = (1 + t²)/2`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// A point of the compactified real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LinePoint {
    Finite(f64),
    Infinity,
}

impl LinePoint {
    pub fn finite(self) -> Option<f64> {
        match self {
            LinePoint::Finite(t) => Some(t),
            LinePoint::Infinity => None,
        }
    }
}

pub fn cayley(t: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    -(t - i) / (t + i)
}

pub fn cayley_t_of_theta(theta: f64) -> LinePoint {
    let th = theta.rem_euclid(TAU);
    if th == 0.0 {
        LinePoint::Infinity
    } else {
        let (s, c) = (0.5 * th).sin_cos();
        LinePoint::Finite(-c / s)
    }
}

/// Inverse of [`cayley_t_of_theta`], in `(0, 2π)`.
pub fn theta_of_t(t: f64) -> f64 {
    PI + 2.0 * t.atan()
}

/// `dt/dθ = ½ csc²(θ/2)`.
pub fn jacobian(theta: f64) -> f64 {
    let s = (0.5 * theta).sin();
    0.5 / (s * s)
}

/// Distance in angle to the point at infinity.
pub fn distance_to_infinity(theta: f64) -> f64 {
    let th = theta.rem_euclid(TAU);
    th.min(TAU - th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pi_maps_to_origin() {
        assert!(cayley_t_of_theta(PI).finite().unwrap().abs() < 1e-15);
        assert!((cayley(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn wrap_point_is_infinity() {
        assert_eq!(cayley_t_of_theta(0.0), LinePoint::Infinity);
        assert_eq!(cayley_t_of_theta(TAU), LinePoint::Infinity);
        assert!(cayley_t_of_theta(1e-9).finite().unwrap() < -1e8);
        assert!(cayley_t_of_theta(TAU - 1e-9).finite().unwrap() > 1e8);
    }

    #[test]
    fn round_trip_through_cayley() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let th: f64 = rng.gen_range(1e-3..TAU - 1e-3);
            let t = cayley_t_of_theta(th).finite().unwrap();
            let target = -Complex64::from_polar(1.0, th);
            assert!((cayley(t) - target).norm() < 1e-12);
            assert!((theta_of_t(t) - th).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        for th in [0.3, 1.0, PI, 5.0] {
            let h = 1e-6;
            let t = |x: f64| cayley_t_of_theta(x).finite().unwrap();
            let fd = (t(th + h) - t(th - h)) / (2.0 * h);
            assert!((fd - jacobian(th)).abs() < 1e-6 * jacobian(th));
            let tt = t(th);
            assert!((jacobian(th) - 0.5 * (1.0 + tt * tt)).abs() < 1e-12 * jacobian(th));
        }
    }
}
