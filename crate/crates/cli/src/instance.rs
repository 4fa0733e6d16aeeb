//! Turns a resolved [`RunSpec`] into a solvable instance: the objective,
//! the region (a unit geometry ball for unconstrained runs), the mode, and
//! a fixed starting point.
//!
//! Starting points are deterministic per problem: zeros where feasible,
//! the centroid on the simplex, an even spread across the balancing box,
//! the center plus an all-ones offset for the separable quadratic, and
//! all-ones for zakharov (whose minimum sits exactly at zero).

use std::path::Path;
use std::sync::Arc;

use acgd_core::problems::{
    load_libsvm, make_huber_completion, make_lasso, make_least_squares, make_levy, make_logistic,
    make_matrix_balancing, make_quadratic, make_rosenbrock, make_sigmoid_ls, make_simplex_qp,
    make_sum_of_squares, make_zakharov, SparseDataset, SyntheticSpec,
};
use acgd_core::{Mode, Objective, Region, Vector};

use crate::args::{Geom, ModeId, ProblemId, RunSpec};
use crate::CliError;

pub const LASSO_DESK: (usize, usize, f64) = (200, 1000, 10.0);
pub const LEAST_SQUARES_DESK: (usize, usize) = (200, 50);
pub const QUADRATIC_N: usize = 50;
pub const QUADRATIC_C: (f64, f64) = (1.0, 10.0);
pub const SIMPLEX_QP_N: usize = 50;
pub const BALANCING_N: usize = 100;
pub const BALANCING_BOX: (f64, f64) = (1.0, 10.0);
pub const BALANCING_DEGREE: f64 = 5.0;
pub const HUBER_SHAPE: (usize, usize) = (40, 30);
pub const HUBER_FRAC: f64 = 0.3;
pub const HUBER_RHO: f64 = 1.0;
pub const HUBER_TAU: f64 = 5.0;
pub const SYNTH_DATA: (usize, usize, f64) = (200, 500, 0.1);
pub const BALL_TAU: f64 = 10.0;

/// One solvable configuration.
pub struct Instance {
    pub objective: Objective,
    pub region: Region,
    pub mode: Mode,
    pub x0: Vector,
    /// Terminate on `f - f*` when the optimal value is known, else on the
    /// oracle gap.
    pub functional_gap: bool,
}

impl Instance {
    fn new(objective: Objective, region: Region, mode: Mode, x0: Vector) -> Self {
        let functional_gap = objective.known_optimum().is_some();
        Instance {
            objective,
            region,
            mode,
            x0,
            functional_gap,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Problem-construction failures are bad inputs, not solver failures.
fn build_err(e: acgd_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn ball(geom: Geom, radius: f64) -> Result<Region, CliError> {
    match geom {
        Geom::L1 => Region::l1_ball(radius),
        Geom::L2 => Region::l2_ball(radius),
        Geom::LInf => Region::linf_ball(radius),
    }
    .map_err(build_err)
}

fn reject_m(spec: &RunSpec) -> Result<(), CliError> {
    if spec.m.is_some() {
        return Err(usage(format!("{} does not take --m", spec.problem.name())));
    }
    Ok(())
}

fn reject_tau(spec: &RunSpec) -> Result<(), CliError> {
    if spec.tau.is_some() {
        return Err(usage(format!("{} does not take --tau", spec.problem.name())));
    }
    Ok(())
}

fn reject_data(spec: &RunSpec) -> Result<(), CliError> {
    if spec.data.is_some() {
        return Err(usage(format!("{} does not take --data", spec.problem.name())));
    }
    Ok(())
}

fn reject_lmo(spec: &RunSpec) -> Result<(), CliError> {
    if spec.lmo.is_some() {
        return Err(usage(format!(
            "{} has a fixed region; --lmo does not apply",
            spec.problem.name()
        )));
    }
    Ok(())
}

fn require_constrained(spec: &RunSpec) -> Result<(), CliError> {
    if spec.mode == Some(ModeId::Unconstrained) {
        return Err(usage(format!(
            "{} is a constrained problem; its region is part of the formulation",
            spec.problem.name()
        )));
    }
    Ok(())
}

fn require_unconstrained(spec: &RunSpec) -> Result<(), CliError> {
    if spec.mode == Some(ModeId::Constrained) {
        return Err(usage(format!(
            "{} runs unconstrained; pick a ball problem for constrained mode",
            spec.problem.name()
        )));
    }
    Ok(())
}

/// Geometry for an unconstrained run: the unit ball of the requested norm.
/// The radius is immaterial (it rescales the direction and inversely the
/// step), so it is pinned at 1 to make the gap column the dual gradient
/// norm.
fn geometry(spec: &RunSpec) -> Result<Region, CliError> {
    ball(spec.lmo.unwrap_or(Geom::L2), 1.0)
}

/// Constrained ball region of radius `tau`, honoring an `--lmo` override.
fn tau_ball(spec: &RunSpec, tau: f64) -> Result<Region, CliError> {
    ball(spec.lmo.unwrap_or(Geom::L1), tau)
}

fn dataset(spec: &RunSpec) -> Result<Arc<SparseDataset>, CliError> {
    match &spec.data {
        Some(path) => {
            if spec.m.is_some() || spec.n.is_some() {
                return Err(usage(
                    "--m/--n come from the data file; drop them or drop --data",
                ));
            }
            load_libsvm(Path::new(path)).map(Arc::new).map_err(|e| {
                usage(format!("cannot load {}: {e}", path.display()))
            })
        }
        None => {
            let (dm, dn, density) = SYNTH_DATA;
            let rows = spec.m.unwrap_or(dm);
            let cols = spec.n.unwrap_or(dn);
            SparseDataset::synthetic_classification(rows, cols, density, spec.seed)
                .map(Arc::new)
                .map_err(build_err)
        }
    }
}

pub fn build_instance(spec: &RunSpec) -> Result<Instance, CliError> {
    match spec.problem {
        ProblemId::Lasso => lasso(spec),
        ProblemId::LeastSquares => least_squares(spec),
        ProblemId::Quadratic => quadratic(spec),
        ProblemId::SimplexQp => simplex_qp(spec),
        ProblemId::MatrixBalancing => balancing(spec),
        ProblemId::HuberCompletion => huber(spec),
        ProblemId::Logistic => logistic(spec),
        ProblemId::SigmoidLs => sigmoid_ls(spec),
        ProblemId::Rosenbrock | ProblemId::Levy | ProblemId::Zakharov | ProblemId::SumOfSquares => {
            classic(spec)
        }
    }
}

fn lasso(spec: &RunSpec) -> Result<Instance, CliError> {
    reject_data(spec)?;
    let (dm, dn, dtau) = LASSO_DESK;
    let tau = spec.tau.unwrap_or(dtau);
    let p = make_lasso(SyntheticSpec {
        m: spec.m.unwrap_or(dm),
        n: spec.n.unwrap_or(dn),
        tau,
        seed: spec.seed,
    })
    .map_err(build_err)?;
    let n = p.objective.dim();
    let x0 = Vector::zeros(n);
    match spec.mode.unwrap_or(ModeId::Constrained) {
        ModeId::Constrained => {
            // An l2 or linf ball of the same radius still contains the
            // planted signal, so the zero optimum carries over.
            let region = tau_ball(spec, tau)?;
            Ok(Instance::new(p.objective, region, Mode::Constrained, x0))
        }
        ModeId::Unconstrained => Ok(Instance::new(
            p.objective,
            geometry(spec)?,
            Mode::Unconstrained,
            x0,
        )),
    }
}

fn least_squares(spec: &RunSpec) -> Result<Instance, CliError> {
    reject_data(spec)?;
    reject_tau(spec)?;
    require_unconstrained(spec)?;
    let (dm, dn) = LEAST_SQUARES_DESK;
    let objective = make_least_squares(SyntheticSpec {
        m: spec.m.unwrap_or(dm),
        n: spec.n.unwrap_or(dn),
        tau: LASSO_DESK.2,
        seed: spec.seed,
    })
    .map_err(build_err)?;
    let x0 = Vector::zeros(objective.dim());
    Ok(Instance::new(
        objective,
        geometry(spec)?,
        Mode::Unconstrained,
        x0,
    ))
}

fn quadratic(spec: &RunSpec) -> Result<Instance, CliError> {
    reject_data(spec)?;
    reject_tau(spec)?;
    reject_m(spec)?;
    require_unconstrained(spec)?;
    let n = spec.n.unwrap_or(QUADRATIC_N);
    let (c_min, c_max) = QUADRATIC_C;
    let q = make_quadratic(n, c_min, c_max, spec.seed).map_err(build_err)?;
    let x0 = Vector::new(q.center.iter().map(|z| z + 1.0).collect()).map_err(build_err)?;
    Ok(Instance::new(
        q.objective,
        geometry(spec)?,
        Mode::Unconstrained,
        x0,
    ))
}

fn simplex_qp(spec: &RunSpec) -> Result<Instance, CliError> {
    reject_data(spec)?;
    reject_tau(spec)?;
    reject_m(spec)?;
    reject_lmo(spec)?;
    require_constrained(spec)?;
    let n = spec.n.unwrap_or(SIMPLEX_QP_N);
    let p = make_simplex_qp(n, spec.seed).map_err(build_err)?;
    let x0 = Vector::new(vec![1.0 / n as f64; n]).map_err(build_err)?;
    Ok(Instance::new(p.objective, p.region, Mode::Constrained, x0))
}

fn balancing(spec: &RunSpec) -> Result<Instance, CliError> {
    reject_data(spec)?;
    reject_tau(spec)?;
    reject_m(spec)?;
    reject_lmo(spec)?;
    require_constrained(spec)?;
    let n = spec.n.unwrap_or(BALANCING_N);
    let (lower, upper) = BALANCING_BOX;
    let (objective, region) =
        make_matrix_balancing(n, lower, upper, BALANCING_DEGREE, spec.seed).map_err(build_err)?;
    // A constant vector is already optimal, so spread the start across the
    // box to give the solver real work.
    let denom = (n.max(2) - 1) as f64;
    let x0 = Vector::new(
        (0..n)
            .map(|i| lower + (upper - lower) * i as f64 / denom)
            .collect(),
    )
    .map_err(build_err)?;
    Ok(Instance::new(objective, region, Mode::Constrained, x0))
}

fn huber(spec: &RunSpec) -> Result<Instance, CliError> {
    reject_data(spec)?;
    reject_lmo(spec)?;
    require_constrained(spec)?;
    let (dr, dc) = HUBER_SHAPE;
    let rows = spec.m.unwrap_or(dr);
    let cols = spec.n.unwrap_or(dc);
    let tau = spec.tau.unwrap_or(HUBER_TAU);
    let p = make_huber_completion(rows, cols, HUBER_FRAC, HUBER_RHO, tau, spec.seed)
        .map_err(build_err)?;
    let x0 = Vector::zeros(rows * cols);
    Ok(Instance::new(p.objective, p.region, Mode::Constrained, x0))
}

fn logistic(spec: &RunSpec) -> Result<Instance, CliError> {
    let mode = spec.mode.unwrap_or(ModeId::Constrained);
    if mode == ModeId::Unconstrained && spec.tau.is_some() {
        return Err(usage("--tau only applies to constrained logistic runs"));
    }
    let data = dataset(spec)?;
    let tau = spec.tau.unwrap_or(BALL_TAU);
    let (objective, region) = make_logistic(data, tau).map_err(build_err)?;
    let x0 = Vector::zeros(objective.dim());
    match mode {
        ModeId::Constrained => {
            let region = match spec.lmo {
                Some(geom) => ball(geom, tau)?,
                None => region,
            };
            Ok(Instance::new(objective, region, Mode::Constrained, x0))
        }
        ModeId::Unconstrained => Ok(Instance::new(
            objective,
            geometry(spec)?,
            Mode::Unconstrained,
            x0,
        )),
    }
}

fn sigmoid_ls(spec: &RunSpec) -> Result<Instance, CliError> {
    // The radius selects the constrained variant; without one the problem
    // is the standard unconstrained non-convex fit.
    let mode = spec.mode.unwrap_or(if spec.tau.is_some() {
        ModeId::Constrained
    } else {
        ModeId::Unconstrained
    });
    if mode == ModeId::Unconstrained && spec.tau.is_some() {
        return Err(usage("--tau only applies to constrained sigmoid-ls runs"));
    }
    let data = dataset(spec)?;
    match mode {
        ModeId::Constrained => {
            let tau = spec.tau.unwrap_or(BALL_TAU);
            let (objective, region) = make_sigmoid_ls(data, Some(tau)).map_err(build_err)?;
            let region = match spec.lmo {
                Some(geom) => ball(geom, tau)?,
                None => region.expect("a radius was supplied, so a region exists"),
            };
            let x0 = Vector::zeros(objective.dim());
            Ok(Instance::new(objective, region, Mode::Constrained, x0))
        }
        ModeId::Unconstrained => {
            let (objective, _) = make_sigmoid_ls(data, None).map_err(build_err)?;
            let x0 = Vector::zeros(objective.dim());
            Ok(Instance::new(
                objective,
                geometry(spec)?,
                Mode::Unconstrained,
                x0,
            ))
        }
    }
}

fn classic(spec: &RunSpec) -> Result<Instance, CliError> {
    reject_data(spec)?;
    reject_tau(spec)?;
    reject_m(spec)?;
    require_unconstrained(spec)?;
    let (default_n, build): (usize, fn(usize) -> acgd_core::Result<Objective>) =
        match spec.problem {
            ProblemId::Rosenbrock => (100, make_rosenbrock),
            ProblemId::Levy => (50, make_levy),
            ProblemId::Zakharov => (50, make_zakharov),
            ProblemId::SumOfSquares => (50, make_sum_of_squares),
            _ => unreachable!("classic() only handles the four test functions"),
        };
    let n = spec.n.unwrap_or(default_n);
    let objective = build(n).map_err(build_err)?;
    // Zakharov's minimum is the origin; start at ones so there is a run.
    let x0 = if spec.problem == ProblemId::Zakharov {
        Vector::new(vec![1.0; n]).map_err(build_err)?
    } else {
        Vector::zeros(n)
    };
    Ok(Instance::new(
        objective,
        geometry(spec)?,
        Mode::Unconstrained,
        x0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use acgd_core::StrategyKind;

    fn spec(problem: ProblemId) -> RunSpec {
        RunSpec {
            problem,
            strategy: StrategyKind::AdaptiveConstant,
            mode: None,
            lmo: None,
            tau: None,
            m: None,
            n: None,
            tol: 1e-5,
            max_iter: 100,
            seed: 0,
            gamma: None,
            beta: None,
            delta: None,
            r: None,
            data: None,
            out: None,
        }
    }

    #[test]
    fn defaults_build_for_every_problem() {
        for problem in [
            ProblemId::Lasso,
            ProblemId::LeastSquares,
            ProblemId::Quadratic,
            ProblemId::SimplexQp,
            ProblemId::MatrixBalancing,
            ProblemId::HuberCompletion,
            ProblemId::Logistic,
            ProblemId::SigmoidLs,
            ProblemId::Rosenbrock,
            ProblemId::Levy,
            ProblemId::Zakharov,
            ProblemId::SumOfSquares,
        ] {
            let inst = build_instance(&spec(problem))
                .unwrap_or_else(|e| panic!("{} should build: {e}", problem.name()));
            assert_eq!(
                inst.x0.as_slice().len(),
                inst.objective.dim(),
                "{}: starting point dimension",
                problem.name()
            );
            if inst.mode == Mode::Constrained {
                assert!(
                    inst.region.contains(&inst.x0, 1e-9).expect("dims agree"),
                    "{}: starting point must be feasible",
                    problem.name()
                );
            }
        }
    }

    #[test]
    fn mode_defaults_follow_the_problem() {
        assert_eq!(
            build_instance(&spec(ProblemId::Lasso)).expect("lasso").mode,
            Mode::Constrained
        );
        assert_eq!(
            build_instance(&spec(ProblemId::LeastSquares))
                .expect("least-squares")
                .mode,
            Mode::Unconstrained
        );
        let mut s = spec(ProblemId::SigmoidLs);
        assert_eq!(
            build_instance(&s).expect("sigmoid default").mode,
            Mode::Unconstrained
        );
        s.tau = Some(5.0);
        assert_eq!(
            build_instance(&s).expect("sigmoid with radius").mode,
            Mode::Constrained
        );
    }

    #[test]
    fn misplaced_flags_are_rejected() {
        let mut s = spec(ProblemId::Quadratic);
        s.tau = Some(1.0);
        assert!(matches!(build_instance(&s), Err(CliError::Usage(_))));

        let mut s = spec(ProblemId::SimplexQp);
        s.mode = Some(ModeId::Unconstrained);
        assert!(matches!(build_instance(&s), Err(CliError::Usage(_))));

        let mut s = spec(ProblemId::Rosenbrock);
        s.mode = Some(ModeId::Constrained);
        assert!(matches!(build_instance(&s), Err(CliError::Usage(_))));

        let mut s = spec(ProblemId::MatrixBalancing);
        s.lmo = Some(Geom::L2);
        assert!(matches!(build_instance(&s), Err(CliError::Usage(_))));

        let mut s = spec(ProblemId::Lasso);
        s.data = Some("x.libsvm".into());
        assert!(matches!(build_instance(&s), Err(CliError::Usage(_))));
    }

    #[test]
    fn lasso_lmo_override_keeps_the_zero_optimum_reachable() {
        let mut s = spec(ProblemId::Lasso);
        s.m = Some(40);
        s.n = Some(80);
        s.tau = Some(4.0);
        s.lmo = Some(Geom::L2);
        let inst = build_instance(&s).expect("build");
        assert!(matches!(inst.region, Region::L2Ball { .. }));
        assert_eq!(inst.objective.known_optimum(), Some(0.0));
    }

    #[test]
    fn unconstrained_geometry_is_the_unit_ball() {
        let mut s = spec(ProblemId::Quadratic);
        s.lmo = Some(Geom::LInf);
        let inst = build_instance(&s).expect("build");
        match inst.region {
            Region::LInfBall { tau } => {
                assert_eq!(tau, 1.0, "geometry ball must have unit radius")
            }
            other => panic!("expected an linf ball, got {other:?}"),
        }
    }
}
