//! Fixed-step initial-value solvers for multi-order fractional systems
//! `D^{q_i} y_i = F_i(y)` with `q_i` in `(0, 1]`.
//!
//! The derivative is the base-point-subtracting left operator, which for
//! orders in `(0, 1]` coincides with the Caputo-type evolution started at
//! `y0`, so ordinary initial values make the problem well posed.
//!
//! Two schemes are provided: a per-component fractional Adams-Bashforth-
//! Moulton predictor-corrector (PECE, corrector iterations configurable)
//! and an explicit Grunwald-Letnikov rule obtained by inverting the
//! binomial convolution. Both are deterministic: history sums run in a
//! fixed order with compensated accumulation.

use crate::algebroid::MixedOrderSystem;
use crate::brackets::FractionalSystemSpec;
use crate::fracfield::{gamma, FieldError, FractionalOrder, GenPolynomial, EXP_TOL};
use crate::gloracle::gl_weights;
use std::collections::HashMap;
use std::io::Write;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("state became non-finite at step {step}")]
    NonFiniteState { step: usize },
    #[error("step {step} does not divide horizon {horizon} to within one step")]
    StepMismatch { step: f64, horizon: f64 },
    #[error("configuration: {0}")]
    BadConfig(String),
    #[error("classical reference requires all orders equal to one")]
    NotClassical,
    #[error("right-hand side failed at step {step}: {source}")]
    RhsFailure {
        step: usize,
        #[source]
        source: FieldError,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Right-hand-side evaluator: state in, derivative out.
pub type RhsFn = Box<dyn Fn(&[f64], &mut [f64]) -> Result<(), FieldError> + Send + Sync>;

/// Initial-value problem with per-component fractional orders.
pub struct FractionalIvp {
    pub dim: usize,
    pub orders: Vec<FractionalOrder>,
    pub y0: Vec<f64>,
    pub horizon: f64,
    rhs: RhsFn,
}

impl FractionalIvp {
    pub fn new(
        orders: Vec<FractionalOrder>,
        y0: Vec<f64>,
        horizon: f64,
        rhs: RhsFn,
    ) -> Result<Self, SolveError> {
        if orders.len() != y0.len() {
            return Err(SolveError::BadConfig(format!(
                "orders ({}) and initial state ({}) differ in length",
                orders.len(),
                y0.len()
            )));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(SolveError::BadConfig(format!("horizon {horizon} invalid")));
        }
        Ok(FractionalIvp {
            dim: y0.len(),
            orders,
            y0,
            horizon,
            rhs,
        })
    }

    /// Infallible closure convenience constructor.
    pub fn from_fn(
        orders: Vec<FractionalOrder>,
        y0: Vec<f64>,
        horizon: f64,
        f: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Result<Self, SolveError> {
        FractionalIvp::new(
            orders,
            y0,
            horizon,
            Box::new(move |y, out| {
                f(y, out);
                Ok(())
            }),
        )
    }

    /// Uniform-order problem from an assembled fractional vector field.
    pub fn from_field(
        spec: &FractionalSystemSpec,
        y0: Vec<f64>,
        horizon: f64,
    ) -> Result<Self, SolveError> {
        let vars: Vec<String> = (0..spec.dim).map(crate::brackets::base_var).collect();
        let rhs = polynomial_rhs(spec.rhs.components(), &vars)?;
        FractionalIvp::new(vec![spec.alpha; spec.dim], y0, horizon, rhs)
    }

    /// Mixed-order problem on the dual bundle; state is `(x, xi)`.
    pub fn from_mixed(sys: &MixedOrderSystem, horizon: f64) -> Result<Self, SolveError> {
        let vars = sys.state_vars();
        let polys: Vec<GenPolynomial> = sys.state_rhs().into_iter().cloned().collect();
        let rhs = polynomial_rhs(&polys, &vars)?;
        FractionalIvp::new(sys.state_orders(), sys.initial_state(), horizon, rhs)
    }

    pub fn eval_rhs(&self, y: &[f64], out: &mut [f64]) -> Result<(), FieldError> {
        (self.rhs)(y, out)
    }
}

enum CompiledExponent {
    Int(i32),
    Real(f64),
}

struct CompiledTerm {
    coeff: f64,
    factors: Vec<(usize, CompiledExponent)>,
}

/// Compiles polynomial components over a fixed variable ordering into an
/// evaluator; integer exponents go through `powi` so classical systems stay
/// defined on negative coordinates.
pub fn polynomial_rhs(
    components: &[GenPolynomial],
    vars: &[String],
) -> Result<RhsFn, FieldError> {
    let compiled: Vec<Vec<CompiledTerm>> = components
        .iter()
        .map(|poly| {
            poly.terms()
                .iter()
                .map(|term| {
                    let mut factors = Vec::new();
                    for (var, exp) in term.exponents() {
                        let index = vars
                            .iter()
                            .position(|v| v == var)
                            .ok_or_else(|| FieldError::UnboundVariable {
                                var: var.to_string(),
                            })?;
                        let rounded = exp.round();
                        let compiled_exp = if (exp - rounded).abs() <= EXP_TOL
                            && rounded.abs() < i32::MAX as f64
                        {
                            CompiledExponent::Int(rounded as i32)
                        } else {
                            CompiledExponent::Real(exp)
                        };
                        factors.push((index, compiled_exp));
                    }
                    Ok(CompiledTerm {
                        coeff: term.coeff(),
                        factors,
                    })
                })
                .collect::<Result<Vec<_>, FieldError>>()
        })
        .collect::<Result<_, _>>()?;
    let var_names: Vec<String> = vars.to_vec();
    Ok(Box::new(move |y: &[f64], out: &mut [f64]| {
        for (slot, terms) in out.iter_mut().zip(&compiled) {
            let mut acc = 0.0;
            for term in terms {
                let mut value = term.coeff;
                for (index, exp) in &term.factors {
                    let x = y[*index];
                    match exp {
                        CompiledExponent::Int(k) => value *= x.powi(*k),
                        CompiledExponent::Real(e) => {
                            if x < 0.0 {
                                return Err(FieldError::NegativeCoordinate {
                                    var: var_names[*index].clone(),
                                    value: x,
                                    exponent: *e,
                                });
                            }
                            value *= x.powf(*e);
                        }
                    }
                }
                acc += value;
            }
            *slot = acc;
        }
        Ok(())
    }))
}

/// Integration scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    AbmPece,
    FracEuler,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::AbmPece => write!(f, "abmPece"),
            Method::FracEuler => write!(f, "fracEuler"),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "abmPece" | "abm" | "abm-pece" => Ok(Method::AbmPece),
            "fracEuler" | "frac-euler" | "gl" => Ok(Method::FracEuler),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// Fixed-step solver configuration.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub step: f64,
    pub method: Method,
    /// Corrector sweeps per step (PECE = 1).
    pub corrector_iterations: usize,
    /// History length for the convolution sums; `None` keeps the full
    /// memory. A window covering the whole run is bitwise identical to
    /// unbounded memory.
    pub memory_window: Option<usize>,
}

impl SolverConfig {
    pub fn new(step: f64, method: Method) -> Self {
        SolverConfig {
            step,
            method,
            corrector_iterations: 1,
            memory_window: None,
        }
    }

    fn validate(&self) -> Result<(), SolveError> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(SolveError::BadConfig(format!("step {} invalid", self.step)));
        }
        if self.corrector_iterations == 0 {
            return Err(SolveError::BadConfig(
                "corrector_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::new(1e-3, Method::AbmPece)
    }
}

/// Uniformly sampled solver output.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub orders: Vec<f64>,
    pub method: Method,
    pub step: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sup-norm distance over shared grid points; `None` when grids differ.
    pub fn sup_distance(&self, other: &Trajectory) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let mut worst = 0.0f64;
        for (a, b) in self.states.iter().zip(&other.states) {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
        Some(worst)
    }

    /// Writes `t,y1,...,yd` rows at 17 significant digits.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        let dim = self.states.first().map_or(0, |s| s.len());
        write!(out, "t")?;
        for i in 0..dim {
            write!(out, ",y{}", i + 1)?;
        }
        writeln!(out)?;
        for (t, state) in self.times.iter().zip(&self.states) {
            write!(out, "{t:.16e}")?;
            for v in state {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn step_count(horizon: f64, step: f64) -> Result<usize, SolveError> {
    let ratio = horizon / step;
    let n = ratio.round();
    // The grid must land on the horizon; only rounding slack is forgiven.
    if n < 1.0 || (n * step - horizon).abs() > 1e-6 * step {
        return Err(SolveError::StepMismatch { step, horizon });
    }
    Ok(n as usize)
}

/// Compensated (Kahan) accumulator: keeps the long history sums
/// deterministic and quiet.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

struct AbmWeights {
    /// Predictor increments `d_m = m^q - (m-1)^q`, indexed by lag `m >= 1`.
    d: Vec<f64>,
    /// Corrector interior weights
    /// `c_m = (m+1)^{q+1} + (m-1)^{q+1} - 2 m^{q+1}`, indexed by lag `m >= 1`.
    c: Vec<f64>,
    /// `h^q / Γ(q+1)` and `h^q / Γ(q+2)` premultipliers.
    pred_scale: f64,
    corr_scale: f64,
    q: f64,
}

impl AbmWeights {
    fn build(q: f64, h: f64, n_steps: usize) -> Result<Self, SolveError> {
        let mut d = Vec::with_capacity(n_steps + 1);
        let mut c = Vec::with_capacity(n_steps + 1);
        d.push(f64::NAN); // lag 0 unused
        c.push(f64::NAN);
        for m in 1..=n_steps {
            let mf = m as f64;
            d.push(mf.powf(q) - (mf - 1.0).powf(q));
            c.push(
                (mf + 1.0).powf(q + 1.0) + (mf - 1.0).powf(q + 1.0) - 2.0 * mf.powf(q + 1.0),
            );
        }
        Ok(AbmWeights {
            d,
            c,
            pred_scale: h.powf(q) / gamma(q + 1.0)?,
            corr_scale: h.powf(q) / gamma(q + 2.0)?,
            q,
        })
    }

    /// Corrector weight on the sample at the origin when the full history
    /// is in view.
    fn corrector_origin_weight(&self, n: usize) -> f64 {
        let nf = n as f64;
        (nf - 1.0).powf(self.q + 1.0) - (nf - 1.0 - self.q) * nf.powf(self.q)
    }
}

/// Integrates the problem with the configured scheme.
pub fn solve(ivp: &FractionalIvp, cfg: &SolverConfig) -> Result<Trajectory, SolveError> {
    cfg.validate()?;
    let n_steps = step_count(ivp.horizon, cfg.step)?;
    match cfg.method {
        Method::AbmPece => solve_abm(ivp, cfg, n_steps),
        Method::FracEuler => solve_gl_euler(ivp, cfg, n_steps),
    }
}

/// Integrates a mixed-order dual-bundle system over `horizon`.
pub fn solve_mixed(
    sys: &MixedOrderSystem,
    horizon: f64,
    cfg: &SolverConfig,
) -> Result<Trajectory, SolveError> {
    let ivp = FractionalIvp::from_mixed(sys, horizon)?;
    solve(&ivp, cfg)
}

fn check_finite(y: &[f64], step: usize) -> Result<(), SolveError> {
    if y.iter().any(|v| !v.is_finite()) {
        Err(SolveError::NonFiniteState { step })
    } else {
        Ok(())
    }
}

fn eval_rhs_at(
    ivp: &FractionalIvp,
    y: &[f64],
    out: &mut [f64],
    step: usize,
) -> Result<(), SolveError> {
    ivp.eval_rhs(y, out)
        .map_err(|source| SolveError::RhsFailure { step, source })?;
    check_finite(out, step)
}

fn solve_abm(
    ivp: &FractionalIvp,
    cfg: &SolverConfig,
    n_steps: usize,
) -> Result<Trajectory, SolveError> {
    let d = ivp.dim;
    let h = cfg.step;
    let window = cfg.memory_window.unwrap_or(usize::MAX);

    // One weight table per distinct order value.
    let mut tables: HashMap<u64, usize> = HashMap::new();
    let mut weights: Vec<AbmWeights> = Vec::new();
    let mut table_of: Vec<usize> = Vec::with_capacity(d);
    for q in &ivp.orders {
        let bits = q.value().to_bits();
        let idx = match tables.get(&bits) {
            Some(i) => *i,
            None => {
                weights.push(AbmWeights::build(q.value(), h, n_steps)?);
                tables.insert(bits, weights.len() - 1);
                weights.len() - 1
            }
        };
        table_of.push(idx);
    }

    let mut states = Vec::with_capacity(n_steps + 1);
    let mut history: Vec<Vec<f64>> = Vec::with_capacity(n_steps + 1);
    states.push(ivp.y0.clone());
    let mut f0 = vec![0.0; d];
    eval_rhs_at(ivp, &ivp.y0, &mut f0, 0)?;
    history.push(f0);

    let mut predicted = vec![0.0; d];
    let mut f_new = vec![0.0; d];
    for n in 1..=n_steps {
        let lo = n.saturating_sub(window);
        // Predict.
        for i in 0..d {
            let w = &weights[table_of[i]];
            let mut acc = Kahan::default();
            for j in lo..n {
                acc.add(w.d[n - j] * history[j][i]);
            }
            predicted[i] = ivp.y0[i] + w.pred_scale * acc.sum;
        }
        check_finite(&predicted, n)?;
        // Evaluate-correct, iterated as configured.
        let mut corrected = predicted.clone();
        for _ in 0..cfg.corrector_iterations {
            eval_rhs_at(ivp, &corrected, &mut f_new, n)?;
            for i in 0..d {
                let w = &weights[table_of[i]];
                let mut acc = Kahan::default();
                for j in lo..n {
                    let weight = if j == 0 && lo == 0 {
                        w.corrector_origin_weight(n)
                    } else {
                        w.c[n - j]
                    };
                    acc.add(weight * history[j][i]);
                }
                acc.add(f_new[i]);
                corrected[i] = ivp.y0[i] + w.corr_scale * acc.sum;
            }
            check_finite(&corrected, n)?;
        }
        eval_rhs_at(ivp, &corrected, &mut f_new, n)?;
        history.push(f_new.clone());
        states.push(corrected.clone());
    }

    Ok(Trajectory {
        times: (0..=n_steps).map(|k| k as f64 * h).collect(),
        states,
        orders: ivp.orders.iter().map(|q| q.value()).collect(),
        method: Method::AbmPece,
        step: h,
    })
}

fn solve_gl_euler(
    ivp: &FractionalIvp,
    cfg: &SolverConfig,
    n_steps: usize,
) -> Result<Trajectory, SolveError> {
    let d = ivp.dim;
    let h = cfg.step;
    let window = cfg.memory_window.unwrap_or(usize::MAX);

    let mut tables: HashMap<u64, usize> = HashMap::new();
    let mut weight_sets: Vec<Vec<f64>> = Vec::new();
    let mut scales: Vec<f64> = Vec::new();
    let mut table_of: Vec<usize> = Vec::with_capacity(d);
    for q in &ivp.orders {
        let bits = q.value().to_bits();
        let idx = match tables.get(&bits) {
            Some(i) => *i,
            None => {
                weight_sets.push(gl_weights(*q, n_steps + 1));
                scales.push(h.powf(q.value()));
                tables.insert(bits, weight_sets.len() - 1);
                weight_sets.len() - 1
            }
        };
        table_of.push(idx);
    }

    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(ivp.y0.clone());
    let mut f_prev = vec![0.0; d];
    for n in 1..=n_steps {
        eval_rhs_at(ivp, &states[n - 1], &mut f_prev, n - 1)?;
        let mut next = vec![0.0; d];
        for i in 0..d {
            let t = table_of[i];
            let w = &weight_sets[t];
            let mut acc = Kahan::default();
            let deepest = n.min(window);
            for k in 1..=deepest {
                acc.add(w[k] * (states[n - k][i] - ivp.y0[i]));
            }
            next[i] = ivp.y0[i] + scales[t] * f_prev[i] - acc.sum;
        }
        check_finite(&next, n)?;
        states.push(next);
    }

    Ok(Trajectory {
        times: (0..=n_steps).map(|k| k as f64 * h).collect(),
        states,
        orders: ivp.orders.iter().map(|q| q.value()).collect(),
        method: Method::FracEuler,
        step: h,
    })
}

/// Classical fixed-step fourth-order Runge-Kutta reference; rejects any
/// fractional order.
pub fn rk4_reference(ivp: &FractionalIvp, step: f64) -> Result<Trajectory, SolveError> {
    if ivp.orders.iter().any(|q| !q.is_classical()) {
        return Err(SolveError::NotClassical);
    }
    let n_steps = step_count(ivp.horizon, step)?;
    let d = ivp.dim;
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(ivp.y0.clone());
    let mut k1 = vec![0.0; d];
    let mut k2 = vec![0.0; d];
    let mut k3 = vec![0.0; d];
    let mut k4 = vec![0.0; d];
    let mut stage = vec![0.0; d];
    for n in 1..=n_steps {
        let y = states[n - 1].clone();
        eval_rhs_at(ivp, &y, &mut k1, n)?;
        for i in 0..d {
            stage[i] = y[i] + 0.5 * step * k1[i];
        }
        eval_rhs_at(ivp, &stage, &mut k2, n)?;
        for i in 0..d {
            stage[i] = y[i] + 0.5 * step * k2[i];
        }
        eval_rhs_at(ivp, &stage, &mut k3, n)?;
        for i in 0..d {
            stage[i] = y[i] + step * k3[i];
        }
        eval_rhs_at(ivp, &stage, &mut k4, n)?;
        let mut next = vec![0.0; d];
        for i in 0..d {
            next[i] = y[i] + step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        check_finite(&next, n)?;
        states.push(next);
    }
    Ok(Trajectory {
        times: (0..=n_steps).map(|k| k as f64 * step).collect(),
        states,
        orders: ivp.orders.iter().map(|q| q.value()).collect(),
        method: Method::AbmPece,
        step,
    })
}

/// Error reference for a convergence study.
pub enum Reference<'a> {
    /// Exact solution as a function of time.
    Analytic(&'a dyn Fn(f64) -> Vec<f64>),
    /// Compare each run against one extra halving.
    Finest,
}

#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub step: f64,
    pub sup_error: f64,
    /// `log2(e_h / e_{h/2})` against the previous row; `None` on the first
    /// row or when both errors sit at the rounding floor (saturated).
    pub observed_order: Option<f64>,
    pub saturated: bool,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

/// Errors below this (relative to the solution scale) are treated as the
/// rounding floor of the long weight sums rather than discretization error;
/// order estimates are meaningless down there.
const SATURATION_TOL: f64 = 1e-7;

impl ConvergenceReport {
    /// True when every estimable refinement shows at least order `p` (rows
    /// at the rounding floor count as resolved).
    pub fn order_at_least(&self, p: f64) -> bool {
        self.rows
            .iter()
            .skip(1)
            .all(|row| row.saturated || row.observed_order.is_some_and(|o| o >= p))
    }
}

impl std::fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:>12} {:>14} {:>10}", "step", "sup_error", "order")?;
        for row in &self.rows {
            let order = if row.saturated {
                "exact".to_string()
            } else {
                row.observed_order
                    .map_or("-".to_string(), |o| format!("{o:.3}"))
            };
            writeln!(f, "{:>12.3e} {:>14.6e} {:>10}", row.step, row.sup_error, order)?;
        }
        Ok(())
    }
}

/// Halves the step `refinements` times and reports sup errors and observed
/// orders against the reference.
pub fn convergence_report(
    ivp: &FractionalIvp,
    cfg: &SolverConfig,
    refinements: usize,
    reference: Reference<'_>,
) -> Result<ConvergenceReport, SolveError> {
    if refinements < 2 {
        return Err(SolveError::BadConfig(
            "refinements must be at least 2".into(),
        ));
    }
    let mut runs = Vec::with_capacity(refinements);
    for r in 0..refinements {
        let mut sub = *cfg;
        sub.step = cfg.step / (1u64 << r) as f64;
        runs.push(solve(ivp, &sub)?);
    }
    let finest = match reference {
        Reference::Finest => {
            let mut sub = *cfg;
            sub.step = cfg.step / (1u64 << refinements) as f64;
            Some(solve(ivp, &sub)?)
        }
        Reference::Analytic(_) => None,
    };

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(refinements);
    let mut scale = 1.0f64;
    for (r, run) in runs.iter().enumerate() {
        let mut err = 0.0f64;
        match &reference {
            Reference::Analytic(exact) => {
                for (t, state) in run.times.iter().zip(&run.states) {
                    let want = exact(*t);
                    for (a, b) in state.iter().zip(&want) {
                        err = err.max((a - b).abs());
                        scale = scale.max(b.abs());
                    }
                }
            }
            Reference::Finest => {
                let fine = finest.as_ref().expect("finest run exists");
                let stride = 1usize << (refinements - r);
                for (j, state) in run.states.iter().enumerate() {
                    let want = &fine.states[j * stride];
                    for (a, b) in state.iter().zip(want) {
                        err = err.max((a - b).abs());
                        scale = scale.max(b.abs());
                    }
                }
            }
        }
        let (observed_order, saturated) = if r == 0 {
            (None, false)
        } else {
            let prev = rows[r - 1].sup_error;
            let floor = SATURATION_TOL * scale;
            if prev <= floor && err <= floor {
                (None, true)
            } else if err > 0.0 {
                (Some((prev / err).log2()), false)
            } else {
                (None, true)
            }
        };
        rows.push(ConvergenceRow {
            step: run.step,
            sup_error: err,
            observed_order,
            saturated,
        });
    }
    Ok(ConvergenceReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracfield::mittag_leffler;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    fn constant_rhs(value: f64, dim: usize) -> RhsFn {
        Box::new(move |_, out| {
            for slot in out.iter_mut().take(dim) {
                *slot = value;
            }
            Ok(())
        })
    }

    #[test]
    fn zero_rhs_stays_constant_exactly() {
        let ivp =
            FractionalIvp::new(vec![order(0.5)], vec![2.5], 1.0, constant_rhs(0.0, 1)).unwrap();
        for method in [Method::AbmPece, Method::FracEuler] {
            let traj = solve(&ivp, &SolverConfig::new(1e-2, method)).unwrap();
            assert!(traj.states.iter().all(|s| s[0] == 2.5));
        }
    }

    #[test]
    fn power_rule_inversion() {
        // D^a y = Γ(1+a), y0 = 0 has solution t^a.
        let a = 0.5;
        let g = gamma(1.0 + a).unwrap();
        let ivp =
            FractionalIvp::new(vec![order(a)], vec![0.0], 1.0, constant_rhs(g, 1)).unwrap();
        let traj = solve(&ivp, &SolverConfig::new(1e-3, Method::AbmPece)).unwrap();
        let mut worst = 0.0f64;
        for (t, s) in traj.times.iter().zip(&traj.states) {
            worst = worst.max((s[0] - t.powf(a)).abs());
        }
        assert!(worst <= 5e-3, "sup error {worst}");
    }

    #[test]
    fn relaxation_matches_mittag_leffler_series() {
        // D^{0.5} y = -y, y0 = 1: y(t) = E_{0.5}(-t^{0.5}).
        let a = order(0.5);
        let ivp =
            FractionalIvp::from_fn(vec![a], vec![1.0], 1.0, |y, out| out[0] = -y[0]).unwrap();
        let traj = solve(&ivp, &SolverConfig::new(1e-3, Method::AbmPece)).unwrap();
        let mut worst = 0.0f64;
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let exact = mittag_leffler(a, -t.sqrt()).unwrap();
            worst = worst.max((s[0] - exact).abs());
        }
        assert!(worst <= 1e-3, "sup error {worst}");
    }

    #[test]
    fn gl_euler_agrees_on_relaxation() {
        let a = order(0.5);
        let ivp =
            FractionalIvp::from_fn(vec![a], vec![1.0], 1.0, |y, out| out[0] = -y[0]).unwrap();
        let abm = solve(&ivp, &SolverConfig::new(1e-3, Method::AbmPece)).unwrap();
        let gl = solve(&ivp, &SolverConfig::new(1e-3, Method::FracEuler)).unwrap();
        assert!(abm.sup_distance(&gl).unwrap() <= 5e-2);
    }

    #[test]
    fn rk4_exponential_and_riccati() {
        let ivp =
            FractionalIvp::from_fn(vec![FractionalOrder::ONE], vec![1.0], 1.0, |y, out| {
                out[0] = y[0]
            })
            .unwrap();
        let traj = rk4_reference(&ivp, 1e-3).unwrap();
        assert!((traj.final_state()[0] - std::f64::consts::E).abs() < 1e-8);

        // y' = -y^2, y0 = 1: y(t) = 1/(1+t).
        let ivp2 =
            FractionalIvp::from_fn(vec![FractionalOrder::ONE], vec![1.0], 1.0, |y, out| {
                out[0] = -y[0] * y[0]
            })
            .unwrap();
        let traj2 = rk4_reference(&ivp2, 1e-3).unwrap();
        assert!((traj2.final_state()[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn rk4_rejects_fractional_orders() {
        let ivp =
            FractionalIvp::new(vec![order(0.9)], vec![1.0], 1.0, constant_rhs(0.0, 1)).unwrap();
        assert!(matches!(
            rk4_reference(&ivp, 1e-2),
            Err(SolveError::NotClassical)
        ));
    }

    #[test]
    fn abm_order_one_matches_rk4_closely() {
        let ivp =
            FractionalIvp::from_fn(vec![FractionalOrder::ONE], vec![1.0], 1.0, |y, out| {
                out[0] = -y[0]
            })
            .unwrap();
        let abm = solve(&ivp, &SolverConfig::new(1e-3, Method::AbmPece)).unwrap();
        let rk4 = rk4_reference(&ivp, 1e-3).unwrap();
        assert!(abm.sup_distance(&rk4).unwrap() < 1e-5);
    }

    #[test]
    fn step_mismatch_rejected() {
        let ivp =
            FractionalIvp::new(vec![order(0.5)], vec![1.0], 1.0, constant_rhs(0.0, 1)).unwrap();
        let cfg = SolverConfig::new(0.3, Method::AbmPece);
        assert!(matches!(
            solve(&ivp, &cfg),
            Err(SolveError::StepMismatch { .. })
        ));
    }

    #[test]
    fn nonfinite_state_reports_step() {
        // y' = y^2 from y0 = 1 blows up inside [0, 2].
        let ivp =
            FractionalIvp::from_fn(vec![FractionalOrder::ONE], vec![1.0], 2.0, |y, out| {
                out[0] = y[0] * y[0]
            })
            .unwrap();
        match solve(&ivp, &SolverConfig::new(1e-3, Method::AbmPece)) {
            Err(SolveError::NonFiniteState { step }) => assert!(step > 0),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn determinism_bitwise() {
        let ivp = FractionalIvp::from_fn(vec![order(0.7)], vec![1.0], 1.0, |y, out| {
            out[0] = -y[0] * y[0]
        })
        .unwrap();
        let cfg = SolverConfig::new(1e-2, Method::AbmPece);
        let a = solve(&ivp, &cfg).unwrap();
        let b = solve(&ivp, &cfg).unwrap();
        assert_eq!(a.states, b.states);
    }

    #[test]
    fn full_memory_window_is_bitwise_identical() {
        let ivp =
            FractionalIvp::from_fn(vec![order(0.6)], vec![1.0], 1.0, |y, out| out[0] = -y[0])
                .unwrap();
        for method in [Method::AbmPece, Method::FracEuler] {
            let unbounded = solve(&ivp, &SolverConfig::new(1e-2, method)).unwrap();
            let mut windowed_cfg = SolverConfig::new(1e-2, method);
            windowed_cfg.memory_window = Some(100); // covers all 100 steps
            let windowed = solve(&ivp, &windowed_cfg).unwrap();
            assert_eq!(unbounded.states, windowed.states);
        }
    }

    #[test]
    fn component_permutation_permutes_trajectory_exactly() {
        let orders = vec![order(0.5), order(0.8)];
        let ivp = FractionalIvp::from_fn(orders.clone(), vec![1.0, 2.0], 1.0, |y, out| {
            out[0] = -y[0] + 0.1 * y[1];
            out[1] = -0.5 * y[1];
        })
        .unwrap();
        let swapped = FractionalIvp::from_fn(
            vec![orders[1], orders[0]],
            vec![2.0, 1.0],
            1.0,
            |y, out| {
                out[1] = -y[1] + 0.1 * y[0];
                out[0] = -0.5 * y[0];
            },
        )
        .unwrap();
        let cfg = SolverConfig::new(1e-2, Method::AbmPece);
        let a = solve(&ivp, &cfg).unwrap();
        let b = solve(&swapped, &cfg).unwrap();
        for (sa, sb) in a.states.iter().zip(&b.states) {
            assert_eq!(sa[0], sb[1]);
            assert_eq!(sa[1], sb[0]);
        }
    }

    #[test]
    fn corrector_iterations_configurable() {
        let ivp =
            FractionalIvp::from_fn(vec![order(0.5)], vec![1.0], 1.0, |y, out| out[0] = -y[0])
                .unwrap();
        let mut cfg = SolverConfig::new(1e-2, Method::AbmPece);
        cfg.corrector_iterations = 3;
        let refined = solve(&ivp, &cfg).unwrap();
        let exact = mittag_leffler(order(0.5), -1.0).unwrap();
        assert!((refined.final_state()[0] - exact).abs() < 1e-3);
    }

    #[test]
    fn convergence_exact_problem_saturates() {
        let a = 0.5;
        let g = gamma(1.0 + a).unwrap();
        let ivp =
            FractionalIvp::new(vec![order(a)], vec![0.0], 1.0, constant_rhs(g, 1)).unwrap();
        let cfg = SolverConfig::new(4e-3, Method::AbmPece);
        let exact = move |t: f64| vec![t.powf(a)];
        let report = convergence_report(&ivp, &cfg, 3, Reference::Analytic(&exact)).unwrap();
        assert!(report.order_at_least(1.0), "{report}");
        // The scheme integrates a constant right-hand side exactly, so the
        // rows sit at the rounding floor.
        assert!(report.rows.iter().all(|r| r.sup_error < 1e-7));
    }

    #[test]
    fn convergence_genuine_order_on_relaxation() {
        // The solution has a t^{0.5} singularity at the origin; the
        // corrector converges like h^{2a} with a slow onset, so the coarse
        // refinements show rising orders rather than the asymptotic one.
        let a = order(0.5);
        let ivp =
            FractionalIvp::from_fn(vec![a], vec![1.0], 1.0, |y, out| out[0] = -y[0]).unwrap();
        let cfg = SolverConfig::new(2e-2, Method::AbmPece);
        let exact = move |t: f64| vec![mittag_leffler(a, -t.sqrt()).unwrap()];
        let report = convergence_report(&ivp, &cfg, 4, Reference::Analytic(&exact)).unwrap();
        assert!(report.order_at_least(0.4), "{report}");
        assert!(report.rows.iter().skip(1).any(|r| !r.saturated));
        // Errors strictly decrease and the order estimates rise.
        for pair in report.rows.windows(2) {
            assert!(pair[1].sup_error < pair[0].sup_error, "{report}");
        }
        let orders: Vec<f64> = report
            .rows
            .iter()
            .filter_map(|r| r.observed_order)
            .collect();
        assert!(orders.last().unwrap() > &0.7, "{report}");
    }

    #[test]
    fn csv_shape() {
        let ivp =
            FractionalIvp::new(vec![order(0.5)], vec![1.0], 0.1, constant_rhs(1.0, 1)).unwrap();
        let traj = solve(&ivp, &SolverConfig::new(0.05, Method::AbmPece)).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,y1");
        assert_eq!(lines.len(), 4); // header + 3 samples
        assert!(lines[1].starts_with("0.0000000000000000e0,"));
    }
}
