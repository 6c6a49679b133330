//! Adaptive drivers: finite element refinement at the collocation points,
//! parameter-space enrichment by profit, their alternation, and the purely
//! parametric variant driven by (nearly) exact samples.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{eta_total, EstimatorReport, SpatialSampleSet, ZetaContext};
use crate::fem::{dof_count, gradient_at_points, residual_estimator, solve_with_guess, FESolution};
use crate::mesh::Triangulation;
use crate::multiindex::{reduced_set, MultiIndex, MultiIndexSet};
use crate::problems::ProblemSpec;
use crate::sparse_grid::{ParamSampleSet, SparseGrid};

/// Below this the parametric estimator counts as zero and the FE tolerance
/// falls back to `ε/2`.
pub const ZETA_FLOOR: f64 = 1e-12;

/// Uniform refinements of the initial mesh used as the "exact" sampler.
pub const SAMPLER_REFINEMENTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfitKind {
    Workless,
    WithWork,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToleranceRule {
    /// `α ζ_SC / (Σ_{i ∈ M_I} Λ_i)²`
    MarginWeighted,
    /// `α ζ_SC`
    Simplified,
}

#[derive(Clone, Debug)]
pub struct AdaptiveConfig {
    pub epsilon: f64,
    pub theta_y: f64,
    pub theta_x: f64,
    pub alpha: f64,
    pub profit: ProfitKind,
    pub tolerance_rule: ToleranceRule,
    /// Update the FE tolerance only when the refinement loop would exit.
    pub deferred_tolerance: bool,
    pub theta_size: usize,
    pub theta_seed: u64,
    pub pi_size: usize,
    pub pi_seed: u64,
    pub max_outer_iterations: usize,
    pub max_dofs: usize,
    pub max_sweeps: usize,
    pub max_enrichments: usize,
    /// 0 means one worker per available core
    pub workers: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            epsilon: 2e-2,
            theta_y: 0.5,
            theta_x: 0.25,
            alpha: 0.9,
            profit: ProfitKind::WithWork,
            tolerance_rule: ToleranceRule::Simplified,
            deferred_tolerance: true,
            theta_size: 1000,
            theta_seed: 1,
            pi_size: 4096,
            pi_seed: 2,
            max_outer_iterations: 100,
            max_dofs: 500_000,
            max_sweeps: 1000,
            max_enrichments: 100,
            workers: 0,
        }
    }
}

impl AdaptiveConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        unit("theta_y", self.theta_y)?;
        unit("theta_x", self.theta_x)?;
        unit("alpha", self.alpha)?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.theta_size == 0 || self.pi_size == 0 {
            return Err(Error::Config("sample set sizes must be positive".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::Config("max_sweeps must be positive".into()));
        }
        Ok(())
    }

    fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))
    }
}

/// Minimal set of ids carrying a `θ` fraction of the total weight: sort by
/// weight descending (ties to the lower id), take the shortest prefix.
/// Returned ids are ascending.
pub fn dorfler_select(weights: &[f64], theta: f64) -> Result<Vec<usize>> {
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
        return Err(Error::Config(format!("marking weight {w} is not a nonnegative number")));
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let total: f64 = order.iter().map(|&k| weights[k]).sum();
    if total == 0.0 {
        return Err(Error::AllZeroWeights);
    }
    let target = theta * total;
    let mut acc = 0.0;
    let mut chosen = Vec::new();
    for k in order {
        chosen.push(k);
        acc += weights[k];
        if acc >= target {
            break;
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Profit of enriching along the margin index `i`.
pub fn profit(i: &MultiIndex, set: &MultiIndexSet, zeta: &BTreeMap<MultiIndex, f64>, kind: ProfitKind) -> Result<f64> {
    let a = reduced_set(i, set)?;
    let mut gain = 0.0;
    let mut work = 0u64;
    for j in &a {
        gain += zeta.get(j).ok_or_else(|| Error::MissingZeta(j.clone()))?;
        work += j.work();
    }
    Ok(match kind {
        ProfitKind::Workless => gain,
        ProfitKind::WithWork => gain / work as f64,
    })
}

/// The margin index of largest profit; the first one in lexicographic order wins ties.
pub fn profit_maximizer(set: &MultiIndexSet, zeta: &BTreeMap<MultiIndex, f64>, kind: ProfitKind) -> Result<MultiIndex> {
    let margin = set.margin();
    let mut best: Option<(f64, &MultiIndex)> = None;
    for i in margin.indices() {
        let p = profit(i, set, zeta, kind)?;
        if best.is_none_or(|(b, _)| p > b) {
            best = Some((p, i));
        }
    }
    best.map(|(_, i)| i.clone()).ok_or(Error::EmptyMargin)
}

/// Mesh, solution and cached estimator data at one collocation point.
#[derive(Clone, Debug)]
pub struct PointState {
    pub mesh: Triangulation,
    pub solution: FESolution,
    pub eta2: Vec<f64>,
    pub eta: f64,
    /// `∇U_y` at the spatial samples
    pub gradients: Vec<[f64; 2]>,
    pub dofs: usize,
}

/// Discrete solution `U`: one [`PointState`] per point of `H_I`, in grid order.
#[derive(Clone, Debug)]
pub struct CollocationSolution {
    pub grid: SparseGrid,
    pub points: Vec<PointState>,
}

impl CollocationSolution {
    pub fn total_dofs(&self) -> usize {
        self.points.iter().map(|p| p.dofs).sum()
    }

    pub fn index_set(&self) -> &MultiIndexSet {
        self.grid.index_set()
    }
}

/// Which part of the algorithm produced a history record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    FeSweep,
    Enrich,
    Outer,
}

impl Phase {
    pub fn tag(self) -> &'static str {
        match self {
            Phase::FeSweep => "fe_sweep",
            Phase::Enrich => "enrich",
            Phase::Outer => "outer",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub phase: Phase,
    pub outer: usize,
    pub sweep: usize,
    pub n_indices: usize,
    pub n_points: usize,
    pub dofs: usize,
    /// absent when the parametric estimator was not recomputed for this record
    pub zeta_sc: Option<f64>,
    pub eta_fe: f64,
    pub total: Option<f64>,
    pub tol: Option<f64>,
    pub selected: Option<MultiIndex>,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    BudgetExhausted(String),
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub status: RunStatus,
    pub state: CollocationSolution,
    pub report: EstimatorReport,
    pub history: Vec<IterationRecord>,
}

/// Fixed inputs shared by every solve and estimate of a run.
struct Setup<'a> {
    problem: &'a ProblemSpec,
    config: &'a AdaptiveConfig,
    theta: ParamSampleSet,
    pi: SpatialSampleSet,
    labels: Vec<u16>,
}

impl<'a> Setup<'a> {
    fn new(problem: &'a ProblemSpec, config: &'a AdaptiveConfig) -> Result<Self> {
        config.validate()?;
        let pi = SpatialSampleSet::uniform(config.pi_size, config.pi_seed);
        let labels = pi.labels(&problem.initial_mesh())?;
        Ok(Self {
            problem,
            config,
            theta: ParamSampleSet::uniform(problem.n_params(), config.theta_size, config.theta_seed),
            pi,
            labels,
        })
    }

    fn solve(&self, mesh: Triangulation, y: &[f64], guess: Option<&[f64]>) -> Result<PointState> {
        let p = self.problem;
        let solution = solve_with_guess(&mesh, &p.coefficient, y, &p.forcing, guess)?;
        let ind = residual_estimator(&mesh, &solution, &p.coefficient, &p.forcing)?;
        let gradients = gradient_at_points(&mesh, &solution, self.pi.points())?;
        Ok(PointState {
            dofs: dof_count(&mesh),
            mesh,
            solution,
            eta2: ind.per_element,
            eta: ind.total,
            gradients,
        })
    }

    fn solve_many(&self, grid: &SparseGrid, ids: &[usize], mesh: &Triangulation) -> Result<Vec<PointState>> {
        ids.par_iter()
            .map(|&id| self.solve(mesh.clone(), &grid.points()[id].coords, None))
            .collect()
    }

    fn zeta(&self, state: &CollocationSolution) -> Result<(BTreeMap<MultiIndex, f64>, f64)> {
        let grads: Vec<Vec<[f64; 2]>> = state.points.iter().map(|p| p.gradients.clone()).collect();
        let ctx = ZetaContext::new(&state.grid, &self.problem.coefficient, &self.labels, &grads)?;
        ctx.zeta_total(&self.theta)
    }

    fn report(
        &self,
        state: &CollocationSolution,
        weights: &[f64],
        zeta: (BTreeMap<MultiIndex, f64>, f64),
    ) -> Result<EstimatorReport> {
        let eta: Vec<f64> = state.points.iter().map(|p| p.eta).collect();
        let eta_fe = eta_total(&eta, weights)?;
        Ok(EstimatorReport {
            total: zeta.1 + eta_fe,
            zeta: zeta.0,
            zeta_sc: zeta.1,
            eta,
            weights: weights.to_vec(),
            eta_fe,
            theta_size: self.theta.len(),
            theta_seed: Some(self.config.theta_seed),
            pi_size: self.pi.len(),
            pi_seed: self.pi.seed(),
        })
    }
}

enum Flow<T> {
    Continue(T),
    Budget(String),
}

/// State of an alternating space/parameter run.
pub struct Scfe<'a> {
    setup: Setup<'a>,
    t_init: Triangulation,
    state: CollocationSolution,
    weights: Vec<f64>,
    history: Vec<IterationRecord>,
    start: Instant,
    outer: usize,
}

impl<'a> Scfe<'a> {
    /// `I = {1}` with its collocation point solved on the initial mesh.
    pub fn new(problem: &'a ProblemSpec, config: &'a AdaptiveConfig) -> Result<Self> {
        let setup = Setup::new(problem, config)?;
        let t_init = problem.initial_mesh();
        let grid = SparseGrid::new(&MultiIndexSet::unit(problem.n_params()));
        let ids: Vec<usize> = (0..grid.len()).collect();
        let points = setup.solve_many(&grid, &ids, &t_init)?;
        let weights = grid.lagrange_sup_norms(&setup.theta);
        Ok(Self {
            setup,
            t_init,
            state: CollocationSolution { grid, points },
            weights,
            history: Vec::new(),
            start: Instant::now(),
            outer: 0,
        })
    }

    pub fn state(&self) -> &CollocationSolution {
        &self.state
    }

    pub fn history(&self) -> &[IterationRecord] {
        &self.history
    }

    pub fn estimate(&self) -> Result<EstimatorReport> {
        let z = self.setup.zeta(&self.state)?;
        self.setup.report(&self.state, &self.weights, z)
    }

    /// Estimate with the FE part refreshed and `ζ` carried over from `previous`.
    fn estimate_eta_only(&self, previous: &EstimatorReport) -> Result<EstimatorReport> {
        self.setup
            .report(&self.state, &self.weights, (previous.zeta.clone(), previous.zeta_sc))
    }

    pub fn tolerance(&self, report: &EstimatorReport) -> f64 {
        let cfg = self.setup.config;
        let raw = match cfg.tolerance_rule {
            ToleranceRule::Simplified => cfg.alpha * report.zeta_sc,
            ToleranceRule::MarginWeighted => {
                let s: u64 = self
                    .state
                    .index_set()
                    .margin()
                    .indices()
                    .iter()
                    .map(|i| i.lambda())
                    .sum();
                cfg.alpha * report.zeta_sc / (s as f64).powi(2)
            }
        };
        if report.zeta_sc <= ZETA_FLOOR || !raw.is_finite() {
            raw.max(cfg.epsilon / 2.0)
        } else {
            raw
        }
    }

    fn record(
        &mut self,
        phase: Phase,
        sweep: usize,
        report: &EstimatorReport,
        fresh_zeta: bool,
        tol: Option<f64>,
        selected: Option<MultiIndex>,
    ) {
        self.history.push(IterationRecord {
            phase,
            outer: self.outer,
            sweep,
            n_indices: self.state.index_set().len(),
            n_points: self.state.grid.len(),
            dofs: self.state.total_dofs(),
            zeta_sc: fresh_zeta.then_some(report.zeta_sc),
            eta_fe: report.eta_fe,
            total: fresh_zeta.then_some(report.total),
            tol,
            selected,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
        });
    }

    /// One Dörfler pass: mark collocation points, then one mark/refine/solve
    /// cycle at each marked point.
    fn sweep(&mut self, report: &EstimatorReport) -> Result<()> {
        let cfg = self.setup.config;
        let marked = match dorfler_select(&report.point_marking_weights(), cfg.theta_y) {
            Ok(m) => m,
            Err(Error::AllZeroWeights) => return Ok(()),
            Err(e) => return Err(e),
        };
        let setup = &self.setup;
        let points = &self.state.points;
        let refined: Vec<(usize, PointState)> = marked
            .par_iter()
            .filter_map(|&id| {
                let p = &points[id];
                let elements = match dorfler_select(&p.eta2, cfg.theta_x) {
                    Ok(e) => e,
                    Err(Error::AllZeroWeights) => return None,
                    Err(e) => return Some(Err(e)),
                };
                Some(p.mesh.refine_nvb(&elements).and_then(|r| {
                    let guess = r.prolongate(&p.solution.values);
                    setup.solve(r.mesh, &p.solution.y, Some(&guess)).map(|s| (id, s))
                }))
            })
            .collect::<Result<_>>()?;
        for (id, s) in refined {
            self.state.points[id] = s;
        }
        Ok(())
    }

    /// Refines until `η_FE ≤ Tol`. Takes the current full estimate and
    /// returns the final one (with a fresh `ζ`).
    pub fn refine_fe_spaces(&mut self, report: EstimatorReport) -> Result<(EstimatorReport, Option<String>)> {
        match self.refine_fe_inner(report)? {
            Flow::Continue(r) => Ok((r, None)),
            Flow::Budget(msg) => Ok((self.estimate()?, Some(msg))),
        }
    }

    fn refine_fe_inner(&mut self, mut report: EstimatorReport) -> Result<Flow<EstimatorReport>> {
        let cfg = self.setup.config;
        let mut tol = self.tolerance(&report);
        let mut fresh = true;
        let mut sweeps = 0;
        loop {
            if report.eta_fe <= tol {
                if fresh {
                    return Ok(Flow::Continue(report));
                }
                report = self.estimate()?;
                tol = self.tolerance(&report);
                fresh = true;
                continue;
            }
            if sweeps == cfg.max_sweeps {
                return Err(Error::SweepCapExceeded(sweeps));
            }
            if self.state.total_dofs() >= cfg.max_dofs {
                return Ok(Flow::Budget(format!(
                    "{} dofs reached the cap of {}",
                    self.state.total_dofs(),
                    cfg.max_dofs
                )));
            }
            self.sweep(&report)?;
            sweeps += 1;
            if cfg.deferred_tolerance {
                report = self.estimate_eta_only(&report)?;
                fresh = false;
            } else {
                report = self.estimate()?;
                tol = self.tolerance(&report);
            }
            self.record(Phase::FeSweep, sweeps, &report, fresh, Some(tol), None);
        }
    }

    /// Adds `A_{i,I}` for the profit maximizer `i` and solves the new points
    /// on the initial mesh. Existing points are untouched.
    pub fn refine_parameter_space(&mut self, zeta: &BTreeMap<MultiIndex, f64>) -> Result<MultiIndex> {
        let set = self.state.index_set().clone();
        let i = profit_maximizer(&set, zeta, self.setup.config.profit)?;
        let added = reduced_set(&i, &set)?;
        let next = set.union(&added)?;
        let new_ids = self.state.grid.extend(&next);
        let new_points = self.setup.solve_many(&self.state.grid, &new_ids, &self.t_init)?;
        self.state.points.extend(new_points);
        self.weights = self.state.grid.lagrange_sup_norms(&self.setup.theta);
        Ok(i)
    }

    /// Runs the alternating loop; `on_outer` sees the state after every
    /// finite element phase.
    pub fn run(mut self, mut on_outer: impl FnMut(usize, &CollocationSolution)) -> Result<RunResult> {
        let cfg = self.setup.config;
        let mut report = self.estimate()?;
        self.record(Phase::FeSweep, 0, &report, true, Some(self.tolerance(&report)), None);
        let finish = |s: Self, status, report| RunResult {
            status,
            state: s.state,
            report,
            history: s.history,
        };
        if report.total < cfg.epsilon {
            self.record(Phase::Outer, 0, &report, true, None, None);
            return Ok(finish(self, RunStatus::Converged, report));
        }
        let mut enrichments = 0;
        loop {
            if self.outer >= cfg.max_outer_iterations {
                let msg = format!("{} outer iterations", self.outer);
                return Ok(finish(self, RunStatus::BudgetExhausted(msg), report));
            }
            let (r, budget) = self.refine_fe_spaces(report)?;
            report = r;
            // an interrupted finite element phase is not an outer iteration
            if let Some(msg) = budget {
                return Ok(finish(self, RunStatus::BudgetExhausted(msg), report));
            }
            self.record(Phase::Outer, 0, &report, true, None, None);
            on_outer(self.outer, &self.state);
            if report.zeta_sc + report.eta_fe < cfg.epsilon {
                return Ok(finish(self, RunStatus::Converged, report));
            }
            if enrichments >= cfg.max_enrichments {
                let msg = format!("{enrichments} enrichments");
                return Ok(finish(self, RunStatus::BudgetExhausted(msg), report));
            }
            let i = self.refine_parameter_space(&report.zeta)?;
            enrichments += 1;
            self.outer += 1;
            report = self.estimate()?;
            let tol = self.tolerance(&report);
            self.record(Phase::Enrich, 0, &report, true, Some(tol), Some(i));
        }
    }
}

/// Alternating space/parameter adaptivity until `ζ_SC + η_FE < ε` or a budget cap.
pub fn scfe_driver(problem: &ProblemSpec, config: &AdaptiveConfig) -> Result<RunResult> {
    scfe_driver_with(problem, config, |_, _| {})
}

pub fn scfe_driver_with(
    problem: &ProblemSpec,
    config: &AdaptiveConfig,
    on_outer: impl FnMut(usize, &CollocationSolution) + Send,
) -> Result<RunResult> {
    config.validate()?;
    config
        .thread_pool()?
        .install(|| Scfe::new(problem, config)?.run(on_outer))
}

/// Trajectory of the purely parametric algorithm.
#[derive(Clone, Debug)]
pub struct ScResult {
    pub status: RunStatus,
    /// `I_0, I_1, …`
    pub sets: Vec<MultiIndexSet>,
    /// profit maximizer chosen at each step
    pub selected: Vec<MultiIndex>,
    /// `ζ_SC` on each `I_ℓ`
    pub zeta: Vec<f64>,
    pub n_points: Vec<usize>,
}

/// Parametric enrichment with solves on the initial mesh refined
/// [`SAMPLER_REFINEMENTS`] times uniformly, standing in for exact samples.
/// Under workless profit every `I_ℓ` must be the rectangle spanned by an
/// index of norm `N + ℓ`.
pub fn sc_driver(problem: &ProblemSpec, config: &AdaptiveConfig) -> Result<ScResult> {
    config.validate()?;
    config.thread_pool()?.install(|| sc_inner(problem, config))
}

fn sc_inner(problem: &ProblemSpec, config: &AdaptiveConfig) -> Result<ScResult> {
    let setup = Setup::new(problem, config)?;
    let fine = problem.initial_mesh().refine_uniform(SAMPLER_REFINEMENTS)?;
    let n = problem.n_params();
    let mut grid = SparseGrid::new(&MultiIndexSet::unit(n));
    let ids: Vec<usize> = (0..grid.len()).collect();
    let mut points = setup.solve_many(&grid, &ids, &fine)?;
    let mut out = ScResult {
        status: RunStatus::Converged,
        sets: vec![grid.index_set().clone()],
        selected: Vec::new(),
        zeta: Vec::new(),
        n_points: vec![grid.len()],
    };
    for step in 0.. {
        let state = CollocationSolution { grid, points };
        let (zeta, zeta_sc) = setup.zeta(&state)?;
        out.zeta.push(zeta_sc);
        CollocationSolution { grid, points } = state;
        if zeta_sc < config.epsilon {
            return Ok(out);
        }
        if step >= config.max_enrichments {
            out.status = RunStatus::BudgetExhausted(format!("{step} enrichments"));
            return Ok(out);
        }
        let set = grid.index_set().clone();
        let i = profit_maximizer(&set, &zeta, config.profit)?;
        let next = set.union(&reduced_set(&i, &set)?)?;
        if config.profit == ProfitKind::Workless {
            let ell = step + 1;
            match next.rectangle_corner() {
                Some(c) if c.l1_norm() as usize == n + ell => {}
                _ => return Err(Error::RectangleViolation { step: ell, expected: i }),
            }
        }
        let new_ids = grid.extend(&next);
        points.extend(setup.solve_many(&grid, &new_ids, &fine)?);
        out.sets.push(next);
        out.selected.push(i);
        out.n_points.push(grid.len());
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dorfler_examples() {
        assert_eq!(dorfler_select(&[9.0, 4.0, 1.0, 1.0], 0.5).unwrap(), vec![0]);
        assert_eq!(dorfler_select(&[1.0, 4.0, 9.0, 1.0], 1e-9).unwrap(), vec![2]);
        assert_eq!(dorfler_select(&[2.0; 4], 0.5).unwrap(), vec![0, 1]);
        assert!(matches!(dorfler_select(&[0.0, 0.0], 0.5), Err(Error::AllZeroWeights)));
        assert!(dorfler_select(&[-1.0, 2.0], 0.5).is_err());
    }

    #[test]
    fn profit_examples() {
        let set = MultiIndexSet::new(2, [mi(&[1, 1]), mi(&[2, 1])]).unwrap();
        let zeta: BTreeMap<_, _> = [(mi(&[1, 2]), 2.0), (mi(&[2, 2]), 4.0), (mi(&[3, 1]), 1.0)].into();
        assert_eq!(profit(&mi(&[2, 2]), &set, &zeta, ProfitKind::Workless).unwrap(), 6.0);
        assert_eq!(profit(&mi(&[2, 2]), &set, &zeta, ProfitKind::WithWork).unwrap(), 1.0);
        assert_eq!(profit(&mi(&[3, 1]), &set, &zeta, ProfitKind::WithWork).unwrap(), 0.5);
        let missing: BTreeMap<_, _> = [(mi(&[2, 2]), 4.0)].into();
        assert!(matches!(
            profit(&mi(&[2, 2]), &set, &missing, ProfitKind::Workless),
            Err(Error::MissingZeta(_))
        ));
    }

    #[test]
    fn tie_goes_to_lexicographically_first() {
        let set = MultiIndexSet::unit(2);
        let zeta: BTreeMap<_, _> = [(mi(&[2, 1]), 1.0), (mi(&[1, 2]), 1.0)].into();
        assert_eq!(
            profit_maximizer(&set, &zeta, ProfitKind::Workless).unwrap(),
            mi(&[1, 2])
        );
        let zero: BTreeMap<_, _> = [(mi(&[2, 1]), 0.0), (mi(&[1, 2]), 0.0)].into();
        assert_eq!(profit(&mi(&[2, 1]), &set, &zero, ProfitKind::WithWork).unwrap(), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(AdaptiveConfig::default().validate().is_ok());
        let bad = AdaptiveConfig {
            theta_y: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
