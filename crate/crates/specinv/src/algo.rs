//! Iterative magnitude-only reconstruction algorithms.
//!
//! All five solvers share the same shape: start from coefficients carrying
//! the target magnitudes and some initial phase, then move toward the
//! intersection of the transform's range with the magnitude set using the two
//! projections from [`crate::proj`].
//!
//! * `gla` — plain alternating projections.
//! * `fgla` — adds an inertial extrapolation with weight `alpha`.
//! * `agla` — two inertial sequences (`alpha`, `beta`) plus a relaxation
//!   weight `gamma` mixing the projected and unprojected directions.
//! * `raar` — relaxed averaged alternating reflections, weight `lambda`.
//! * `dm` — difference map with parameter `rho`; `dm_elser` flips the sign
//!   of the inner range-side step.
//!
//! [`run`] executes a configured solver for a fixed iteration count and
//! records SSNR, objective and projection counts per iteration; [`run_chain`]
//! concatenates stages that hand the current iterate to the next solver.

use crate::error::{Error, Result};
use crate::frame::{CoefficientGrid, GaborSystem, Signal};
use crate::metric::ssnr;
use crate::proj::{objective, proj_magnitude, proj_range, MagnitudeTarget};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgoKind {
    Gla,
    Fgla,
    Agla,
    Raar,
    Dm,
    DmElser,
}

impl AlgoKind {
    pub const ALL: [AlgoKind; 6] = [
        AlgoKind::Gla,
        AlgoKind::Fgla,
        AlgoKind::Agla,
        AlgoKind::Raar,
        AlgoKind::Dm,
        AlgoKind::DmElser,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgoKind::Gla => "gla",
            AlgoKind::Fgla => "fgla",
            AlgoKind::Agla => "agla",
            AlgoKind::Raar => "raar",
            AlgoKind::Dm => "dm",
            AlgoKind::DmElser => "dm_elser",
        }
    }

    pub fn from_name(name: &str) -> Result<AlgoKind> {
        match name {
            "gla" => Ok(AlgoKind::Gla),
            "fgla" => Ok(AlgoKind::Fgla),
            "agla" => Ok(AlgoKind::Agla),
            "raar" => Ok(AlgoKind::Raar),
            "dm" => Ok(AlgoKind::Dm),
            "dm_elser" => Ok(AlgoKind::DmElser),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm '{other}' (expected gla, fgla, agla, raar, dm or dm_elser)"
            ))),
        }
    }

    /// Projections performed inside one iteration.
    pub fn projections_per_iter(self) -> u64 {
        match self {
            AlgoKind::Dm | AlgoKind::DmElser => 4,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitPhase {
    /// All-zero initial phase: start from the real-valued target magnitudes.
    Zero,
    /// Entrywise phases drawn uniformly from `[0, 2*pi)` by a seeded
    /// deterministic generator.
    Random { seed: u64 },
}

/// Solver selection plus every tunable. Unused parameters for the selected
/// kind are simply ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgoConfig {
    pub kind: AlgoKind,
    /// Inertia on the projected sequence (fgla, agla). Default 0.99.
    pub alpha: f64,
    /// Inertia on the unprojected sequence (agla). Default 0.95.
    pub beta: f64,
    /// Relaxation mixing weight (agla). Default 1.2.
    pub gamma: f64,
    /// Reflection relaxation in (0, 1] (raar). Default 0.9.
    pub lambda: f64,
    /// Difference-map parameter, nonzero (dm). Default 0.8.
    pub rho: f64,
    pub n_iter: usize,
    pub init_phase: InitPhase,
}

impl AlgoConfig {
    pub fn new(kind: AlgoKind) -> AlgoConfig {
        AlgoConfig {
            kind,
            alpha: 0.99,
            beta: 0.95,
            gamma: 1.2,
            lambda: 0.9,
            rho: 0.8,
            n_iter: 1000,
            init_phase: InitPhase::Zero,
        }
    }

    /// Parses `name[:k=v,...]`, e.g. `agla:alpha=0.9,gamma=1.1` or `gla`.
    /// Iteration count and init mode keep their defaults; callers set them
    /// separately.
    pub fn from_spec(spec: &str) -> Result<AlgoConfig> {
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (spec, None),
        };
        let mut cfg = AlgoConfig::new(AlgoKind::from_name(name.trim())?);
        if let Some(rest) = rest {
            for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
                let (key, value) = pair.split_once('=').ok_or_else(|| {
                    Error::InvalidArgument(format!("malformed parameter '{pair}' (expected k=v)"))
                })?;
                let value: f64 = value.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("parameter '{key}' has non-numeric value '{value}'"))
                })?;
                match key.trim() {
                    "alpha" => cfg.alpha = value,
                    "beta" => cfg.beta = value,
                    "gamma" => cfg.gamma = value,
                    "lambda" => cfg.lambda = value,
                    "rho" => cfg.rho = value,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "unknown parameter '{other}' (expected alpha, beta, gamma, lambda or rho)"
                        )))
                    }
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_iter == 0 {
            return Err(Error::InvalidArgument("iteration count must be >= 1".into()));
        }
        for v in [self.alpha, self.beta, self.gamma, self.lambda, self.rho] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(
                    "algorithm parameters must be finite".into(),
                ));
            }
        }
        match self.kind {
            AlgoKind::Raar => {
                if !(self.lambda > 0.0 && self.lambda <= 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "raar lambda must lie in (0, 1], got {}",
                        self.lambda
                    )));
                }
            }
            AlgoKind::Dm | AlgoKind::DmElser => {
                if self.rho == 0.0 {
                    return Err(Error::InvalidArgument("dm rho must be nonzero".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Human/trace label of the parameters relevant to the selected kind,
    /// e.g. `alpha=0.99 beta=0.95 gamma=1.2`. Empty for plain `gla`.
    pub fn params_label(&self) -> String {
        match self.kind {
            AlgoKind::Gla => String::new(),
            AlgoKind::Fgla => format!("alpha={}", self.alpha),
            AlgoKind::Agla => format!(
                "alpha={} beta={} gamma={}",
                self.alpha, self.beta, self.gamma
            ),
            AlgoKind::Raar => format!("lambda={}", self.lambda),
            AlgoKind::Dm | AlgoKind::DmElser => format!("rho={}", self.rho),
        }
    }
}

/// Mutable solver state: the current iterate plus momentum buffers where the
/// algorithm uses them.
#[derive(Clone, Debug)]
pub struct AlgoState {
    pub c: CoefficientGrid,
    /// Previous projected iterate (fgla, agla).
    pub t_prev: Option<CoefficientGrid>,
    /// Previous unprojected iterate (agla).
    pub d_prev: Option<CoefficientGrid>,
    /// Iterations performed.
    pub iter: usize,
    /// Projections performed inside iterations (initialization projections
    /// of the momentum buffers are not counted).
    pub proj_count: u64,
}

impl AlgoState {
    pub fn new(c0: CoefficientGrid) -> AlgoState {
        AlgoState {
            c: c0,
            t_prev: None,
            d_prev: None,
            iter: 0,
            proj_count: 0,
        }
    }
}

/// Coefficients carrying the target magnitudes with the requested phases.
pub fn init_coefficients(s: &MagnitudeTarget, mode: InitPhase) -> Result<CoefficientGrid> {
    if s.norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "cannot initialize from an all-zero magnitude target".into(),
        ));
    }
    let values: Vec<Complex64> = match mode {
        InitPhase::Zero => s.values().iter().map(|&si| Complex64::new(si, 0.0)).collect(),
        InitPhase::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            s.values()
                .iter()
                .map(|&si| Complex64::from_polar(si, rng.gen::<f64>() * std::f64::consts::TAU))
                .collect()
        }
    };
    CoefficientGrid::from_values(s.n_channels(), s.n_frames(), values)
}

/// Prepares a state for `kind` starting at `c0`: fgla and agla materialize
/// their momentum buffers as the doubly-projected start. These setup
/// projections happen once, outside the iteration count, and are not added
/// to `proj_count`.
pub fn init_state(
    kind: AlgoKind,
    c0: CoefficientGrid,
    sys: &GaborSystem,
    s: &MagnitudeTarget,
) -> Result<AlgoState> {
    let mut state = AlgoState::new(c0);
    match kind {
        AlgoKind::Fgla => {
            let t0 = proj_range(&proj_magnitude(&state.c, s)?, sys)?;
            state.t_prev = Some(t0);
        }
        AlgoKind::Agla => {
            let t0 = proj_range(&proj_magnitude(&state.c, s)?, sys)?;
            state.d_prev = Some(t0.clone());
            state.t_prev = Some(t0);
        }
        _ => {}
    }
    Ok(state)
}

/// One alternating-projection step: `c <- P_range(P_magnitude(c))`.
pub fn gla_step(state: &mut AlgoState, sys: &GaborSystem, s: &MagnitudeTarget) -> Result<()> {
    state.c = proj_range(&proj_magnitude(&state.c, s)?, sys)?;
    state.iter += 1;
    state.proj_count += 2;
    Ok(())
}

fn momentum_buffer(buf: Option<CoefficientGrid>, kind: AlgoKind) -> Result<CoefficientGrid> {
    buf.ok_or_else(|| {
        Error::InvalidArgument(format!(
            "{} state not initialized (use init_state)",
            kind.name()
        ))
    })
}

/// Inertial step: project, then extrapolate along the last projected move.
pub fn fgla_step(
    state: &mut AlgoState,
    sys: &GaborSystem,
    s: &MagnitudeTarget,
    alpha: f64,
) -> Result<()> {
    let t = proj_range(&proj_magnitude(&state.c, s)?, sys)?;
    let t_prev = momentum_buffer(state.t_prev.take(), AlgoKind::Fgla)?;
    state.c = &t + &(&(&t - &t_prev) * alpha);
    state.t_prev = Some(t);
    state.iter += 1;
    state.proj_count += 2;
    Ok(())
}

/// Doubly-inertial relaxed step. With `gamma = 1` this reduces to
/// [`fgla_step`] for any `beta`.
pub fn agla_step(
    state: &mut AlgoState,
    sys: &GaborSystem,
    s: &MagnitudeTarget,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<()> {
    let q = proj_range(&proj_magnitude(&state.c, s)?, sys)?;
    let t_prev = momentum_buffer(state.t_prev.take(), AlgoKind::Agla)?;
    let d_prev = momentum_buffer(state.d_prev.take(), AlgoKind::Agla)?;
    let t = &(&d_prev * (1.0 - gamma)) + &(&q * gamma);
    let delta = &t - &t_prev;
    state.c = &t + &(&delta * alpha);
    state.d_prev = Some(&t + &(&delta * beta));
    state.t_prev = Some(t);
    state.iter += 1;
    state.proj_count += 2;
    Ok(())
}

/// Relaxed averaged alternating reflections:
/// `c <- lambda/2 * (c + R_range(R_magnitude(c))) + (1 - lambda) * P_magnitude(c)`.
/// The trailing magnitude projection reuses the one computed inside the
/// reflection, so the step costs two projections like the Griffin-Lim family.
pub fn raar_step(
    state: &mut AlgoState,
    sys: &GaborSystem,
    s: &MagnitudeTarget,
    lambda: f64,
) -> Result<()> {
    let p2 = proj_magnitude(&state.c, s)?;
    let r2 = &(&p2 * 2.0) - &state.c;
    let p1r2 = proj_range(&r2, sys)?;
    let r1r2 = &(&p1r2 * 2.0) - &r2;
    state.c = &(&(&state.c + &r1r2) * (lambda * 0.5)) + &(&p2 * (1.0 - lambda));
    state.iter += 1;
    state.proj_count += 2;
    Ok(())
}

/// Difference-map step with parameter `rho`; four distinct projections.
/// `elser_sign` flips the sign of the inner range-side relaxation.
pub fn dm_step(
    state: &mut AlgoState,
    sys: &GaborSystem,
    s: &MagnitudeTarget,
    rho: f64,
    elser_sign: bool,
) -> Result<()> {
    let inv_rho = 1.0 / rho;
    let p2c = proj_magnitude(&state.c, s)?;
    let p1c = proj_range(&state.c, sys)?;
    let t = &p2c + &(&(&p2c - &state.c) * inv_rho);
    let s_inner = if elser_sign {
        &p1c - &(&(&p1c - &state.c) * inv_rho)
    } else {
        &p1c + &(&(&p1c - &state.c) * inv_rho)
    };
    let p1t = proj_range(&t, sys)?;
    let p2s = proj_magnitude(&s_inner, s)?;
    state.c = &state.c + &(&(&p1t - &p2s) * rho);
    state.iter += 1;
    state.proj_count += 4;
    Ok(())
}

/// Dispatches one iteration of the configured solver.
pub fn step(
    state: &mut AlgoState,
    cfg: &AlgoConfig,
    sys: &GaborSystem,
    s: &MagnitudeTarget,
) -> Result<()> {
    match cfg.kind {
        AlgoKind::Gla => gla_step(state, sys, s),
        AlgoKind::Fgla => fgla_step(state, sys, s, cfg.alpha),
        AlgoKind::Agla => agla_step(state, sys, s, cfg.alpha, cfg.beta, cfg.gamma),
        AlgoKind::Raar => raar_step(state, sys, s, cfg.lambda),
        AlgoKind::Dm => dm_step(state, sys, s, cfg.rho, false),
        AlgoKind::DmElser => dm_step(state, sys, s, cfg.rho, true),
    }
}

/// One per-iteration trace row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    /// 1-based iteration index.
    pub iter: usize,
    pub ssnr_db: f64,
    pub objective: f64,
    /// Cumulative projection count after this iteration.
    pub proj_count: u64,
    /// Wall-clock nanoseconds since the run started (0 on targets without a
    /// monotonic clock).
    pub elapsed_ns: u64,
}

/// Everything a run produces: per-iteration records, the reconstructed
/// signal, and the total projection count.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub final_signal: Signal,
    pub proj_count: u64,
}

impl RunTrace {
    pub fn final_ssnr(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.ssnr_db)
    }

    pub fn final_objective(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.objective)
    }
}

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn new() -> Stopwatch {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed_ns(&self) -> u64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_nanos() as u64
        }
        #[cfg(target_arch = "wasm32")]
        {
            0
        }
    }
}

fn check_target(sys: &GaborSystem, s: &MagnitudeTarget) -> Result<()> {
    let expected = (sys.n_channels(), sys.n_frames());
    if s.shape() != expected {
        return Err(Error::shape(
            "run",
            format!("{expected:?}"),
            format!("{:?}", s.shape()),
        ));
    }
    if s.norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "magnitude target is all-zero".into(),
        ));
    }
    Ok(())
}

fn run_loop(
    state: &mut AlgoState,
    cfg: &AlgoConfig,
    budget: usize,
    sys: &GaborSystem,
    s: &MagnitudeTarget,
    iter_offset: usize,
    proj_offset: u64,
    clock: &Stopwatch,
    records: &mut Vec<TraceRecord>,
) -> Result<()> {
    for n in 1..=budget {
        step(state, cfg, sys, s)?;
        if !state.c.all_finite() {
            return Err(Error::Diverged {
                iter: iter_offset + n,
            });
        }
        records.push(TraceRecord {
            iter: iter_offset + n,
            ssnr_db: ssnr(&state.c, s)?,
            objective: objective(&state.c, s)?,
            proj_count: proj_offset + state.proj_count,
            elapsed_ns: clock.elapsed_ns(),
        });
    }
    Ok(())
}

/// Runs the configured solver from its standard initialization
/// ([`init_coefficients`] with `cfg.init_phase`). Deterministic: identical
/// configuration and seed produce identical iterates.
pub fn run(cfg: &AlgoConfig, sys: &GaborSystem, s: &MagnitudeTarget) -> Result<RunTrace> {
    check_target(sys, s)?;
    run_from(init_coefficients(s, cfg.init_phase)?, cfg, sys, s)
}

/// Runs the configured solver from a caller-supplied starting grid (for
/// example the consistent coefficients of a known signal).
pub fn run_from(
    c0: CoefficientGrid,
    cfg: &AlgoConfig,
    sys: &GaborSystem,
    s: &MagnitudeTarget,
) -> Result<RunTrace> {
    cfg.validate()?;
    check_target(sys, s)?;
    if c0.shape() != s.shape() {
        return Err(Error::shape(
            "run_from",
            format!("{:?}", s.shape()),
            format!("{:?}", c0.shape()),
        ));
    }
    let clock = Stopwatch::new();
    let mut state = init_state(cfg.kind, c0, sys, s)?;
    let mut records = Vec::with_capacity(cfg.n_iter);
    run_loop(
        &mut state, cfg, cfg.n_iter, sys, s, 0, 0, &clock, &mut records,
    )?;
    let final_signal = sys.synthesize(&state.c)?;
    Ok(RunTrace {
        records,
        proj_count: state.proj_count,
        final_signal,
    })
}

/// Runs `(config, iteration budget)` stages back to back. Each stage starts
/// from the previous stage's final iterate; momentum buffers are
/// re-initialized at every boundary (inertia never carries across solvers).
/// The first stage's `init_phase` seeds the chain. Zero-budget stages are
/// legal no-ops.
pub fn run_chain(
    stages: &[(AlgoConfig, usize)],
    sys: &GaborSystem,
    s: &MagnitudeTarget,
) -> Result<RunTrace> {
    if stages.is_empty() {
        return Err(Error::InvalidArgument("chain needs at least one stage".into()));
    }
    for (cfg, _) in stages {
        cfg.validate()?;
    }
    check_target(sys, s)?;

    let clock = Stopwatch::new();
    let mut c = init_coefficients(s, stages[0].0.init_phase)?;
    let mut records = Vec::new();
    let mut iter_offset = 0usize;
    let mut proj_offset = 0u64;
    for (cfg, budget) in stages {
        let mut state = init_state(cfg.kind, c, sys, s)?;
        run_loop(
            &mut state,
            cfg,
            *budget,
            sys,
            s,
            iter_offset,
            proj_offset,
            &clock,
            &mut records,
        )?;
        iter_offset += budget;
        proj_offset += state.proj_count;
        c = state.c;
    }
    let final_signal = sys.synthesize(&c)?;
    Ok(RunTrace {
        records,
        proj_count: proj_offset,
        final_signal,
    })
}
