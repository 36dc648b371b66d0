use chiral_core::fnspace::{CircleFourier, LineBump, LineObject, QuadratureSpec};
use chiral_core::states::{
    dilation_orbit_residual, gram_psd, ground_current_onepoint, ground_stress_onepoint,
    ground_weyl, nonnormality_series, translation_invariance_residual, vacuum_weyl,
    GroundStateParams, NonNormalRow, WeylWord,
};
use chiral_core::sugawara::central_charge_estimate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{GroundArgs, NonnormalArgs, RunConfig};
use crate::report::{Cell, Table};
use crate::CliError;

/// Default modes for the non-normality table.
pub const NONNORMAL_MODES: usize = 512;
/// Default modes for ground-state evaluations.
pub const GROUND_MODES: usize = 64;

/// The fixed test pair of the central-charge estimate:
/// `h_F = (1 - cos θ) sin θ`, `h_G = (1 - cos θ) cos θ`.
pub fn charge_pair() -> (LineObject, LineObject) {
    let f = CircleFourier::sin(1).mul_one_minus_cos();
    let g = CircleFourier::cos(1).mul_one_minus_cos();
    (
        LineObject::vector_field(f, 2).expect("vanishes to second order"),
        LineObject::vector_field(g, 2).expect("vanishes to second order"),
    )
}

pub fn charge(cfg: &RunConfig, kappas: &[f64]) -> Result<Table, CliError> {
    let quad = cfg.quadrature()?;
    let (f, g) = charge_pair();
    let mut t = Table::new(&["kappa", "c_est", "abs_error", "converged"]);
    for &kappa in kappas {
        let est = central_charge_estimate(&f, &g, kappa, cfg.cutoff, &quad)?;
        t.push(vec![
            kappa.into(),
            est.value.into(),
            (est.value - (1.0 + kappa * kappa)).abs().into(),
            est.converged.to_string().into(),
        ]);
    }
    Ok(t)
}

/// `n_min, 2n_min, 4n_min, ... ≤ n_max`.
pub fn doubling_ns(n_min: u32, n_max: u32) -> Vec<u32> {
    std::iter::successors(Some(n_min), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect()
}

fn flag(row: &NonNormalRow, prev: Option<&NonNormalRow>) -> &'static str {
    if !row.converged {
        return "unconverged";
    }
    match prev {
        Some(p) if !(row.d_n < p.d_n && row.q_n.abs() >= p.q_n.abs()) => "nonmonotone",
        _ => "ok",
    }
}

pub fn nonnormal(cfg: &RunConfig, args: &NonnormalArgs) -> Result<Table, CliError> {
    if args.n_min > args.n_max {
        return Err(CliError::Invalid(format!(
            "--n-min {} exceeds --n-max {}",
            args.n_min, args.n_max
        )));
    }
    let quad = cfg.quadrature()?;
    let rows = nonnormality_series(
        args.q,
        &doubling_ns(args.n_min, args.n_max),
        cfg.modes_or(NONNORMAL_MODES),
        &quad,
    )?;
    let mut t = Table::new(&["n", "q_n", "d_n", "flag"]);
    for (i, r) in rows.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &rows[j]);
        t.push(vec![
            r.n.into(),
            // avoid printing -0 for q = 0
            (r.q_n + 0.0).into(),
            r.d_n.into(),
            Cell::from(flag(r, prev)),
        ]);
    }
    Ok(t)
}

fn random_family(rng: &mut ChaCha8Rng, count: usize) -> Vec<LineObject> {
    (0..count)
        .map(|_| {
            LineObject::function(
                LineBump::new(
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(0.3..1.5),
                    rng.gen_range(-1.5..1.5),
                )
                .expect("positive width"),
            )
        })
        .collect()
}

pub fn ground(cfg: &RunConfig, args: &GroundArgs) -> Result<Value, CliError> {
    let quad: QuadratureSpec = cfg.quadrature()?;
    let modes = cfg.modes_or(GROUND_MODES);
    let f = args.function.function()?;
    let field = args.field.vector_field()?;
    let p = GroundStateParams::new(args.q, args.kappa);

    let w = ground_weyl(&p, &WeylWord::single(f.clone())?, modes, &quad)?;
    let vac = vacuum_weyl(&f, modes, &quad)?;
    let current = ground_current_onepoint(&p, &f, modes, &quad)?;
    let stress = ground_stress_onepoint(&p, &field, &quad)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut family = vec![f.clone()];
    family.extend(random_family(&mut rng, args.family as usize - 1));
    let gram = gram_psd(&p, &family, modes, &quad)?;

    let dil = dilation_orbit_residual(args.q, args.dilation, &f, modes, &quad)?;
    let tr = translation_invariance_residual(args.q, &f, args.shift, modes, &quad)?;

    Ok(json!({
        "config": {
            "q": args.q,
            "kappa": args.kappa,
            "function": args.function.to_string(),
            "field": args.field.to_string(),
            "cutoff": cfg.cutoff,
            "modes": modes,
            "quad_nodes": cfg.quad_nodes,
            "endpoint_cut": cfg.endpoint_cut,
            "seed": cfg.seed,
        },
        "ground_weyl": { "re": w.re, "im": w.im, "abs": w.norm(), "arg": w.arg() },
        "vacuum_weyl": vac,
        "current_one_point": {
            "closed_form": current.closed_form,
            "finite_difference": current.finite_difference,
        },
        "stress_one_point": stress,
        "gram": { "family_size": family.len(), "min_eigenvalue": gram },
        "dilation": {
            "s": args.dilation,
            "residual": dil.residual,
            "projection_error": dil.projection_error,
        },
        "translation": {
            "t": args.shift,
            "residual": tr.residual,
            "projection_error": tr.projection_error,
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_sequence() {
        assert_eq!(doubling_ns(4, 64), vec![4, 8, 16, 32, 64]);
        assert_eq!(doubling_ns(3, 20), vec![3, 6, 12]);
        assert_eq!(doubling_ns(5, 4), Vec::<u32>::new());
        assert_eq!(doubling_ns(1 << 31, u32::MAX), vec![1 << 31]);
    }

    #[test]
    fn flags_follow_monotonicity() {
        let row = |n, q_n, d_n, converged| NonNormalRow {
            n,
            q_n,
            d_n,
            converged,
        };
        let a = row(4, 1.0, 0.5, true);
        assert_eq!(flag(&a, None), "ok");
        assert_eq!(flag(&row(8, 2.0, 0.1, true), Some(&a)), "ok");
        assert_eq!(flag(&row(8, 0.5, 0.1, true), Some(&a)), "nonmonotone");
        assert_eq!(flag(&row(8, 2.0, 0.6, true), Some(&a)), "nonmonotone");
        assert_eq!(flag(&row(8, 2.0, 0.1, false), Some(&a)), "unconverged");
    }
}
