//! Numerical rigidity search: a squared-length constraint system over the
//! free coordinates of one period, a damped least-squares solver, and a
//! seeded random search that classifies converged solutions against the
//! sign-sequence family.
//!
//! The search is a falsification instrument, not a proof: a converged
//! solution outside the family would be a counterexample candidate to the
//! classification, while agreement over many trials is only evidence.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::path::{classify_as_family, FamilyClass, PeriodicPath};
use crate::scalar::Scalar;

/// Squared-length equality constraints of a candidate `(n, k)` path.
///
/// Unknowns are `x_1..x_{n-1}, y_1..y_{n-1}` (in that order); `V_0 = (0,0)`
/// is pinned and `V_n = (1, 0)` is implied, which quotients out translation.
/// The x coordinates are genuinely free: `x_j = j/n` must emerge from the
/// solver, not be assumed.
#[derive(Clone, Copy, Debug)]
pub struct ConstraintSystem {
    n: usize,
    k: i64,
}

impl ConstraintSystem {
    pub fn new(n: usize, k: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("constraint system needs n >= 2".into()));
        }
        if k == 0 || k.rem_euclid(n as i64) == 0 {
            return Err(Error::InvalidInput(format!(
                "diagonal step k = {k} is degenerate modulo n = {n}"
            )));
        }
        Ok(ConstraintSystem { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn unknown_count(&self) -> usize {
        2 * (self.n - 1)
    }

    pub fn residual_count(&self) -> usize {
        2 * (self.n - 1)
    }

    /// Vertex `V_j` of the candidate path, extended periodically with unit
    /// shift: `V_j = V_{j mod n} + floor(j/n)·e1`.
    fn vertex_at<S: Scalar>(&self, coords: &[S], j: i64) -> Point<S> {
        let n = self.n as i64;
        let base = j.rem_euclid(n) as usize;
        let cycles = j.div_euclid(n);
        let (x, y) = if base == 0 {
            (S::zero(), S::zero())
        } else {
            (coords[base - 1].clone(), coords[self.n - 1 + base - 1].clone())
        };
        Point::new(x + S::from_int(cycles), y)
    }

    /// Residual vector: `(|V_i V_{i+1}|² - |V_0 V_1|²)` for `i = 1..n-1`
    /// followed by `(|V_i V_{i+k}|² - |V_0 V_k|²)` for `i = 1..n-1`. Zero
    /// exactly when the assembled path is equilateral with equal
    /// k-diagonals.
    ///
    /// Each entry is evaluated as `(Δx² - Δx_ref²) + (Δy² - Δy_ref²)`, which
    /// is the same polynomial but keeps the tiny y contributions near the
    /// regular path from being absorbed by the O(1) x terms in float mode.
    pub fn residual<S: Scalar>(&self, coords: &[S]) -> Result<Vec<S>> {
        if coords.len() != self.unknown_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                self.unknown_count(),
                coords.len()
            )));
        }
        let seg = |a: i64, b: i64| -> (S, S) {
            let d = &self.vertex_at(coords, b) - &self.vertex_at(coords, a);
            (d.x.clone() * d.x, d.y.clone() * d.y)
        };
        let n = self.n as i64;
        let mut out = Vec::with_capacity(self.residual_count());
        let (ex_ref, ey_ref) = seg(0, 1);
        for i in 1..n {
            let (ex, ey) = seg(i, i + 1);
            out.push((ex - ex_ref.clone()) + (ey - ey_ref.clone()));
        }
        let (dx_ref, dy_ref) = seg(0, self.k);
        for i in 1..n {
            let (dx, dy) = seg(i, i + self.k);
            out.push((dx - dx_ref.clone()) + (dy - dy_ref.clone()));
        }
        Ok(out)
    }

    /// The same residual polynomial evaluated with error-free
    /// transformations, so tiny flex components stay visible to the solver
    /// instead of vanishing under the O(1) terms. Agrees with
    /// [`ConstraintSystem::residual`] to full f64 accuracy.
    pub fn residual_compensated(&self, coords: &[f64]) -> Result<Vec<f64>> {
        if coords.len() != self.unknown_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                self.unknown_count(),
                coords.len()
            )));
        }
        let dd_coords: Vec<dd::Dd> = coords.iter().map(|&c| dd::Dd::from(c)).collect();
        Ok(self.residual_dd(&dd_coords))
    }

    /// Residual at double-double coordinates. The solver keeps its iterate
    /// in this representation: with plain f64 coordinates the x terms can
    /// only be equalized to one coordinate ulp (about 1e-16 in the squared
    /// lengths), and that grid noise is exactly where a y flex of ~1e-8
    /// hides. Extended coordinates make the descent smooth down to ~1e-32.
    pub(crate) fn residual_dd(&self, coords: &[dd::Dd]) -> Vec<f64> {
        let n = self.n as i64;
        let zero = dd::Dd::from(0.0);
        let raw = |j: i64| -> (dd::Dd, dd::Dd) {
            let base = j.rem_euclid(n) as usize;
            if base == 0 {
                (zero, zero)
            } else {
                (coords[base - 1], coords[self.n - 1 + base - 1])
            }
        };
        let seg = |a: i64, b: i64| -> (dd::Dd, dd::Dd) {
            let (xa, ya) = raw(a);
            let (xb, yb) = raw(b);
            let shift = (b.div_euclid(n) - a.div_euclid(n)) as f64;
            let dx = xb.sub(xa).add(dd::Dd::from(shift));
            let dy = yb.sub(ya);
            (dx.sqr(), dy.sqr())
        };
        let mut out = Vec::with_capacity(self.residual_count());
        let (ex_ref, ey_ref) = seg(0, 1);
        for i in 1..n {
            let (ex, ey) = seg(i, i + 1);
            out.push(ex.sub(ex_ref).add(ey.sub(ey_ref)).value());
        }
        let (dx_ref, dy_ref) = seg(0, self.k);
        for i in 1..n {
            let (dx, dy) = seg(i, i + self.k);
            out.push(dx.sub(dx_ref).add(dy.sub(dy_ref)).value());
        }
        out
    }

    /// Euclidean norm of the compensated residual at float coordinates.
    pub fn residual_norm(&self, coords: &[f64]) -> f64 {
        self.residual_compensated(coords)
            .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
            .unwrap_or(f64::NAN)
    }

    /// Analytic Jacobian of the residual at float coordinates. Each residual
    /// is a difference of two squared segment lengths, so rows assemble from
    /// `±2(V_b - V_a)` contributions at the columns owning each endpoint.
    pub fn jacobian(&self, coords: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let mut jac = DMatrix::zeros(self.residual_count(), self.unknown_count());
        // Adds the gradient of |V_b - V_a|^2 (scaled by `sign`) to `row`.
        let add_segment = |jac: &mut DMatrix<f64>, row: usize, a: i64, b: i64, sign: f64| {
            let va = self.vertex_at(coords, a);
            let vb = self.vertex_at(coords, b);
            let dx = 2.0 * (vb.x - va.x) * sign;
            let dy = 2.0 * (vb.y - va.y) * sign;
            let base_b = b.rem_euclid(n as i64) as usize;
            if base_b != 0 {
                jac[(row, base_b - 1)] += dx;
                jac[(row, n - 1 + base_b - 1)] += dy;
            }
            let base_a = a.rem_euclid(n as i64) as usize;
            if base_a != 0 {
                jac[(row, base_a - 1)] -= dx;
                jac[(row, n - 1 + base_a - 1)] -= dy;
            }
        };
        for (row, i) in (1..n as i64).enumerate() {
            add_segment(&mut jac, row, i, i + 1, 1.0);
            add_segment(&mut jac, row, 0, 1, -1.0);
        }
        for (row, i) in (1..n as i64).enumerate() {
            let row = row + n - 1;
            add_segment(&mut jac, row, i, i + self.k, 1.0);
            add_segment(&mut jac, row, 0, self.k, -1.0);
        }
        jac
    }

    /// Coordinates of the regular path (the canonical start).
    pub fn regular_coords(&self) -> Vec<f64> {
        let n = self.n;
        let mut coords = vec![0.0; self.unknown_count()];
        for j in 1..n {
            coords[j - 1] = j as f64 / n as f64;
        }
        coords
    }

    /// Coordinates of a path (`x_1..x_{n-1}, y_1..y_{n-1}`).
    pub fn path_coords<S: Scalar>(&self, path: &PeriodicPath<S>) -> Result<Vec<S>> {
        if path.period() != self.n || path.shift() != 1 {
            return Err(Error::InvalidInput(
                "path shape does not match the constraint system".into(),
            ));
        }
        let base = path.base_vertices();
        let mut coords = Vec::with_capacity(self.unknown_count());
        coords.extend(base[1..].iter().map(|p| p.x.clone()));
        coords.extend(base[1..].iter().map(|p| p.y.clone()));
        Ok(coords)
    }

    /// Path assembled from coordinates.
    pub fn coords_to_path<S: Scalar>(&self, coords: &[S]) -> Result<PeriodicPath<S>> {
        if coords.len() != self.unknown_count() {
            return Err(Error::InvalidInput("wrong coordinate count".into()));
        }
        let mut base = vec![Point::origin()];
        for j in 1..self.n {
            base.push(Point::new(
                coords[j - 1].clone(),
                coords[self.n - 1 + j - 1].clone(),
            ));
        }
        PeriodicPath::new(base, 1)
    }
}

/// Compensated (double-double) float arithmetic for residual evaluation.
/// The constraint residual is a short polynomial whose y terms are O(y²)
/// against O(1) x terms near the regular path; plain f64 evaluation absorbs
/// them below y ≈ 1e-8, which would cap how far the solver can polish a
/// flex. Error-free transformations push that floor to y ≈ 1e-16.
mod dd {
    #[derive(Clone, Copy, Debug)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    /// Exact sum: `a + b = hi + lo`.
    pub fn two_sum(a: f64, b: f64) -> Dd {
        let hi = a + b;
        let bb = hi - a;
        let lo = (a - (hi - bb)) + (b - bb);
        Dd { hi, lo }
    }

    /// Exact product via FMA: `a * b = hi + lo`.
    fn two_prod(a: f64, b: f64) -> Dd {
        let hi = a * b;
        let lo = a.mul_add(b, -hi);
        Dd { hi, lo }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        let e = lo - (s - hi);
        Dd { hi: s, lo: e }
    }

    impl Dd {
        pub fn from(v: f64) -> Dd {
            Dd { hi: v, lo: 0.0 }
        }

        pub fn add(self, o: Dd) -> Dd {
            let s = two_sum(self.hi, o.hi);
            renorm(s.hi, s.lo + self.lo + o.lo)
        }

        pub fn sub(self, o: Dd) -> Dd {
            self.add(Dd { hi: -o.hi, lo: -o.lo })
        }

        pub fn sqr(self) -> Dd {
            let p = two_prod(self.hi, self.hi);
            let cross = 2.0 * self.hi * self.lo + self.lo * self.lo;
            renorm(p.hi, p.lo + cross)
        }

        pub fn value(self) -> f64 {
            self.hi + self.lo
        }
    }
}

/// Solver configuration. Defaults implement the documented stopping rules:
/// residual norm <= 1e-12, step norm <= 1e-14, or 500 iterations.
#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    pub residual_tol: f64,
    pub step_tol: f64,
    pub max_iterations: usize,
    /// Initial damping is this factor times the largest diagonal of JᵀJ.
    pub initial_damping: f64,
    /// Coordinate tolerance for classifying converged solutions.
    pub classify_tol: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            residual_tol: 1e-12,
            step_tol: 1e-14,
            max_iterations: 500,
            initial_damping: 1e-3,
            classify_tol: 1e-8,
        }
    }
}

/// Why the solver stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    ResidualTol,
    StepTol,
    MaxIterations,
    Diverged,
}

/// Family classification of a solver output.
#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    Regular,
    SignSequence { chi: Vec<i8>, r: f64 },
    OutsideFamily,
    NonConverged,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Regular => "regular",
            Classification::SignSequence { .. } => "sign_sequence",
            Classification::OutsideFamily => "outside_family",
            Classification::NonConverged => "non_converged",
        }
    }
}

/// Outcome of one solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub seed: u64,
    pub iterations: usize,
    pub residual_norm: f64,
    pub coords: Vec<f64>,
    pub stop: StopReason,
    pub converged: bool,
    pub classification: Classification,
}

/// Damped least-squares (Levenberg–Marquardt) on the constraint residual:
/// normal equations with additive damping, damping adapted by the gain
/// ratio. Deterministic given start and config.
///
/// The residual threshold is the convergence certificate, not an early
/// exit: the regular path is first-order flexible in the y directions
/// (the Jacobian has a y kernel there), so the iteration keeps polishing
/// until the step stalls below `step_tol`, which lands flexes at the float
/// noise floor instead of at `sqrt(residual_tol)`.
pub fn solve_from_start(
    system: &ConstraintSystem,
    start: &[f64],
    config: &SolveConfig,
) -> SolveReport {
    let n_unknowns = system.unknown_count();
    let mut x: Vec<dd::Dd> = start.iter().map(|&c| dd::Dd::from(c)).collect();

    let rounded = |x: &[dd::Dd]| -> Vec<f64> { x.iter().map(|d| d.value()).collect() };

    let eval = |x: &[dd::Dd]| -> Option<DVector<f64>> {
        let v = DVector::from_vec(system.residual_dd(x));
        if v.iter().all(|t| t.is_finite()) {
            Some(v)
        } else {
            None
        }
    };

    let finish = |iterations, residual_norm: f64, x: &[dd::Dd], stop| {
        let coords = rounded(x);
        let converged = residual_norm.is_finite() && residual_norm <= config.residual_tol;
        let classification = if converged {
            classify_solution(system, &coords, config.classify_tol)
        } else {
            Classification::NonConverged
        };
        SolveReport {
            seed: 0,
            iterations,
            residual_norm,
            coords,
            stop,
            converged,
            classification,
        }
    };

    let mut r = match eval(&x) {
        Some(r) => r,
        None => return finish(0, f64::NAN, &x, StopReason::Diverged),
    };
    let mut cost = 0.5 * r.norm_squared();
    if r.norm() <= config.residual_tol {
        // Already at a solution.
        return finish(0, r.norm(), &x, StopReason::ResidualTol);
    }

    let mut jac = system.jacobian(&rounded(&x));
    let mut jtj = jac.transpose() * &jac;
    let mut gradient = jac.transpose() * &r;
    let max_diag = (0..n_unknowns).map(|i| jtj[(i, i)]).fold(0.0f64, f64::max);
    let mut lambda = config.initial_damping * max_diag.max(1e-12);
    let mut nu = 2.0f64;

    for iteration in 1..=config.max_iterations {
        // (JᵀJ + λI) δ = -g
        let mut damped = jtj.clone();
        for i in 0..n_unknowns {
            damped[(i, i)] += lambda;
        }
        let delta = match Cholesky::new(damped) {
            Some(chol) => chol.solve(&(-&gradient)),
            None => {
                lambda = (lambda * 10.0).max(1e-12);
                nu *= 2.0;
                continue;
            }
        };
        if !delta.iter().all(|t| t.is_finite()) {
            return finish(iteration, r.norm(), &x, StopReason::Diverged);
        }
        if delta.norm() <= config.step_tol {
            return finish(iteration, r.norm(), &x, StopReason::StepTol);
        }
        let candidate: Vec<dd::Dd> = x
            .iter()
            .zip(delta.iter())
            .map(|(xi, &d)| xi.add(dd::Dd::from(d)))
            .collect();
        let predicted = 0.5 * delta.dot(&(lambda * &delta - &gradient));
        let trial = eval(&candidate);
        let accepted = match trial {
            Some(r_new) => {
                let cost_new = 0.5 * r_new.norm_squared();
                let gain = (cost - cost_new) / predicted.max(f64::MIN_POSITIVE);
                if gain > 0.0 {
                    x = candidate;
                    r = r_new;
                    cost = cost_new;
                    // Never raise damping on an accepted step: tiny positive
                    // gains are normal while polishing a flex near the
                    // evaluation floor, and growing λ there freezes the
                    // flex prematurely.
                    let shrink: f64 = 1.0 - (2.0 * gain - 1.0).powi(3);
                    lambda *= shrink.clamp(1.0 / 3.0, 1.0);
                    nu = 2.0;
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if accepted {
            if cost == 0.0 {
                // Nothing left to improve.
                return finish(iteration, 0.0, &x, StopReason::ResidualTol);
            }
            jac = system.jacobian(&rounded(&x));
            jtj = jac.transpose() * &jac;
            gradient = jac.transpose() * &r;
        } else {
            lambda *= nu;
            nu *= 2.0;
            if !lambda.is_finite() {
                // No step of any damping improves the cost; the iterate has
                // stalled at the attainable floor.
                return finish(iteration, r.norm(), &x, StopReason::StepTol);
            }
        }
    }
    finish(config.max_iterations, r.norm(), &x, StopReason::MaxIterations)
}

/// Classifies float coordinates against the family via the shared
/// path classifier.
fn classify_solution(system: &ConstraintSystem, coords: &[f64], tol: f64) -> Classification {
    let path = match system.coords_to_path::<f64>(coords) {
        Ok(p) => p,
        Err(_) => return Classification::OutsideFamily,
    };
    match classify_as_family(&path, tol) {
        Ok(FamilyClass::Regular) => Classification::Regular,
        Ok(FamilyClass::SignSequence(seq)) => Classification::SignSequence {
            chi: seq.chi().to_vec(),
            r: *seq.r(),
        },
        _ => Classification::OutsideFamily,
    }
}

/// Summary of a random search run.
#[derive(Clone, Debug)]
pub struct SearchSummary {
    pub n: usize,
    pub k: i64,
    pub trials: usize,
    pub converged: usize,
    pub regular: usize,
    pub sign_sequence: usize,
    pub outside_family: usize,
    pub non_converged: usize,
    /// Largest final residual norm among converged runs.
    pub worst_residual: f64,
    /// A converged solution fell outside the family while `k = d·n ± 1`:
    /// a potential counterexample to the classification.
    pub counterexample_flag: bool,
}

/// Deterministic per-trial seed derivation (splitmix64 of seed and index),
/// so trials are order-independent and reproducible.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `trials` seeded solves from the regular path plus uniform noise of
/// the given amplitude, classifying each converged solution.
pub fn random_search(
    system: &ConstraintSystem,
    trials: usize,
    seed: u64,
    noise: f64,
    config: &SolveConfig,
) -> (SearchSummary, Vec<SolveReport>) {
    let regular = system.regular_coords();
    let mut reports = Vec::with_capacity(trials);
    for trial in 0..trials {
        let ts = trial_seed(seed, trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);
        let start: Vec<f64> = regular
            .iter()
            .map(|&c| c + rng.gen_range(-noise..=noise))
            .collect();
        let mut report = solve_from_start(system, &start, config);
        report.seed = ts;
        reports.push(report);
    }
    let mut summary = SearchSummary {
        n: system.n(),
        k: system.k(),
        trials,
        converged: 0,
        regular: 0,
        sign_sequence: 0,
        outside_family: 0,
        non_converged: 0,
        worst_residual: 0.0,
        counterexample_flag: false,
    };
    let n_i = system.n() as i64;
    let classified_k = (system.k() - 1) % n_i == 0 || (system.k() + 1) % n_i == 0;
    for report in &reports {
        if report.converged {
            summary.converged += 1;
            summary.worst_residual = summary.worst_residual.max(report.residual_norm);
        }
        match report.classification {
            Classification::Regular => summary.regular += 1,
            Classification::SignSequence { .. } => summary.sign_sequence += 1,
            Classification::OutsideFamily => {
                summary.outside_family += 1;
                if classified_k {
                    summary.counterexample_flag = true;
                }
            }
            Classification::NonConverged => summary.non_converged += 1,
        }
    }
    (summary, reports)
}
