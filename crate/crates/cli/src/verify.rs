//! The operator-identity suite behind `chiral verify`.

use chiral_core::fnspace::{sobolev_half_sq, CircleFourier};
use chiral_core::fock::{partitions_up_to, FockVector};
use chiral_core::sugawara::{
    apply_virasoro_mode, stress_current_residual, vacuum_moment, virasoro_residual,
};
use chiral_core::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Cell, Table};

pub const HEISENBERG_TOL: f64 = 1e-10;
pub const VIRASORO_TOL: f64 = 1e-9;
pub const MOMENT_TOL: f64 = 1e-10;
pub const MIXED_TOL: f64 = 1e-9;
pub const ADJOINT_TOL: f64 = 1e-12;
pub const SOBOLEV_TOL: f64 = 1e-12;

/// Largest mode index used by the mode-level checks.
const MODE_RANGE: i64 = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct Check {
    pub identity: &'static str,
    pub window: String,
    pub residual: Option<f64>,
    pub threshold: f64,
    pub status: Status,
}

impl Check {
    fn measured(identity: &'static str, window: String, residual: f64, threshold: f64) -> Self {
        // NaN fails
        let status = if residual < threshold {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            identity,
            window,
            residual: Some(residual),
            threshold,
            status,
        }
    }

    fn skipped(
        identity: &'static str,
        window: String,
        threshold: f64,
        needed: u32,
        cutoff: u32,
    ) -> Self {
        Check {
            identity,
            window,
            residual: None,
            threshold,
            status: Status::Skipped(format!(
                "window too small: skipped (needs cutoff >= {needed}, got {cutoff})"
            )),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

fn random_trig(rng: &mut ChaCha8Rng, max_mode: usize) -> CircleFourier {
    let ab: Vec<(f64, f64)> = (0..max_mode)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    CircleFourier::from_trig(rng.gen_range(-1.0..1.0), &ab)
}

fn random_vector(rng: &mut ChaCha8Rng, cutoff: u32, max_level: u32) -> FockVector {
    let amps = partitions_up_to(max_level)
        .into_iter()
        .map(|p| {
            (
                p,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect::<Vec<_>>();
    FockVector::from_amplitudes(cutoff, amps).expect("levels within cutoff")
}

fn heisenberg(cutoff: u32) -> f64 {
    let mut worst = 0.0f64;
    for m in -MODE_RANGE..=MODE_RANGE {
        for n in -MODE_RANGE..=MODE_RANGE {
            let span = (m.abs() + n.abs()) as u32;
            for lambda in partitions_up_to(cutoff - span) {
                let v = FockVector::basis(cutoff, lambda).expect("level within cutoff");
                let lhs = v
                    .apply_mode(n)
                    .apply_mode(m)
                    .sub(&v.apply_mode(m).apply_mode(n))
                    .expect("same cutoff");
                let c = if m + n == 0 { m as f64 } else { 0.0 };
                let r = lhs.sub(&v.scale(c.into())).expect("same cutoff");
                worst = worst.max(r.norm() / v.norm());
            }
        }
    }
    worst
}

fn virasoro_all(cutoff: u32, include_central: bool) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for m in -MODE_RANGE..=MODE_RANGE {
        for n in -MODE_RANGE..=MODE_RANGE {
            worst = worst.max(virasoro_residual(m, n, cutoff, include_central)?);
        }
    }
    Ok(worst)
}

fn moments(cutoff: u32) -> f64 {
    (2..=5i64)
        .map(|n| (vacuum_moment(n, cutoff) - (n * n * n - n) as f64 / 12.0).norm())
        .fold(0.0, f64::max)
}

fn virasoro_adjoint(rng: &mut ChaCha8Rng, cutoff: u32) -> f64 {
    let mut worst = 0.0f64;
    for n in 1..=MODE_RANGE {
        let level = cutoff - n as u32 - 2;
        let u = random_vector(rng, cutoff, level);
        let v = random_vector(rng, cutoff, level);
        let lhs = u.inner(&apply_virasoro_mode(n, &v)).expect("same cutoff");
        let rhs = apply_virasoro_mode(-n, &u).inner(&v).expect("same cutoff");
        worst = worst.max((lhs - rhs).norm() / (u.norm() * v.norm()));
    }
    worst
}

fn mixed(rng: &mut ChaCha8Rng, cutoff: u32) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let mf = rng.gen_range(1..=3);
        let mg = rng.gen_range(1..=3);
        let f = random_trig(rng, mf);
        let g = random_trig(rng, mg);
        worst = worst.max(stress_current_residual(&f, &g, cutoff)?);
    }
    Ok(worst)
}

fn current_adjoint(rng: &mut ChaCha8Rng, cutoff: u32) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let m = rng.gen_range(1..=3usize);
        let f = random_trig(rng, m);
        let u = random_vector(rng, cutoff, cutoff);
        let v = random_vector(rng, cutoff, cutoff - 3);
        let lhs = u.inner(&v.apply_current(&f)).expect("same cutoff");
        let rhs = u.apply_current(&f).inner(&v).expect("same cutoff");
        worst = worst.max((lhs - rhs).norm() / (u.norm() * v.norm()));
    }
    worst
}

fn sobolev(rng: &mut ChaCha8Rng, cutoff: u32) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = rng.gen_range(1..=8usize.min(cutoff as usize));
        let f = random_trig(rng, m);
        let lhs = FockVector::vacuum(cutoff).apply_current(&f).norm_sq();
        let rhs = sobolev_half_sq(&f).expect("real by construction");
        worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
    }
    worst
}

/// Runs every check in a fixed order. Checks whose window does not fit in the
/// cutoff are reported as skipped.
pub fn run_suite(cutoff: u32, seed: u64, drop_central_term: bool) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let central = !drop_central_term;
    let mut out = Vec::new();

    let w = "|m|,|n| <= 4; levels <= N - |m| - |n|".to_string();
    out.push(if cutoff >= 8 {
        Check::measured(
            "heisenberg [J_m,J_n] = m delta",
            w,
            heisenberg(cutoff),
            HEISENBERG_TOL,
        )
    } else {
        Check::skipped(
            "heisenberg [J_m,J_n] = m delta",
            w,
            HEISENBERG_TOL,
            8,
            cutoff,
        )
    });

    let w = "|m|,|n| <= 4; levels <= N - |m| - |n|".to_string();
    out.push(match virasoro_all(cutoff, central) {
        Ok(r) => Check::measured("virasoro c=1", w, r, VIRASORO_TOL),
        Err(_) => Check::skipped("virasoro c=1", w, VIRASORO_TOL, 10, cutoff),
    });

    let w = "(m,n) = (2,-2); levels <= N - 4".to_string();
    out.push(match virasoro_residual(2, -2, cutoff, central) {
        Ok(r) => Check::measured("virasoro (2,-2) central term", w, r, VIRASORO_TOL),
        Err(_) => Check::skipped("virasoro (2,-2) central term", w, VIRASORO_TOL, 6, cutoff),
    });

    let w = "n = 2..5; vacuum".to_string();
    out.push(if cutoff >= 5 {
        Check::measured("vacuum moments (n^3-n)/12", w, moments(cutoff), MOMENT_TOL)
    } else {
        Check::skipped("vacuum moments (n^3-n)/12", w, MOMENT_TOL, 5, cutoff)
    });

    let w = "n = 1..4; levels <= N - n - 2".to_string();
    out.push(if cutoff >= 7 {
        Check::measured(
            "adjoint L_n* = L_-n",
            w,
            virasoro_adjoint(&mut rng, cutoff),
            ADJOINT_TOL,
        )
    } else {
        Check::skipped("adjoint L_n* = L_-n", w, ADJOINT_TOL, 7, cutoff)
    });

    let w = "10 random pairs, M <= 3; levels <= N - M_f - M_g".to_string();
    out.push(if cutoff >= 6 {
        match mixed(&mut rng, cutoff) {
            Ok(r) => Check::measured("[T(f),J(g)] = iJ(fg')", w, r, MIXED_TOL),
            Err(_) => Check::skipped("[T(f),J(g)] = iJ(fg')", w, MIXED_TOL, 6, cutoff),
        }
    } else {
        Check::skipped("[T(f),J(g)] = iJ(fg')", w, MIXED_TOL, 6, cutoff)
    });

    let w = "10 random real f, M <= 3; right vector levels <= N - 3".to_string();
    out.push(if cutoff >= 4 {
        Check::measured(
            "adjoint J(f)* = J(f)",
            w,
            current_adjoint(&mut rng, cutoff),
            ADJOINT_TOL,
        )
    } else {
        Check::skipped("adjoint J(f)* = J(f)", w, ADJOINT_TOL, 4, cutoff)
    });

    let w = "50 random real f, M <= min(8, N); vacuum".to_string();
    out.push(Check::measured(
        "sobolev |J(f)Omega|^2",
        w,
        sobolev(&mut rng, cutoff),
        SOBOLEV_TOL,
    ));

    out
}

pub fn table(checks: &[Check]) -> Table {
    let mut t = Table::new(&[
        "index",
        "identity",
        "window",
        "residual",
        "threshold",
        "status",
    ]);
    for (i, c) in checks.iter().enumerate() {
        let status = match &c.status {
            Status::Pass => "pass".to_string(),
            Status::Fail => "fail".to_string(),
            Status::Skipped(why) => why.clone(),
        };
        t.push(vec![
            Cell::from(i + 1),
            c.identity.into(),
            c.window.clone().into(),
            c.residual.into(),
            c.threshold.into(),
            status.into(),
        ]);
    }
    t
}
