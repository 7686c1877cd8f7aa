//! Darboux transformation of periodic paths: the closed-form step, per-edge
//! circle maps, monodromy, closure vectors, and linkage decompositions.
//!
//! The circle of frame vectors of length `ℓ` at a vertex is identified with
//! the real projective line by stereographic projection from `(-ℓ, 0)`:
//! `t = v_y / (ℓ + v_x)`, inverse `v = ℓ·((1-t²)/(1+t²), 2t/(1+t²))`. Any
//! other fixed center would conjugate every circle map by a fixed Möbius
//! transformation, leaving conjugacy invariants unchanged.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::geom::{cross, parallel_check, Point, Vector};
use crate::mobius::{MobiusMap, ProjectiveParam};
use crate::path::PeriodicPath;
use crate::scalar::Scalar;

/// Leg length of the isosceles trapezoids of a correspondence. The squared
/// length drives every constraint; the length itself is only needed for the
/// projective circle parametrization and may be absent when the squared
/// length has no exact square root (e.g. a rational path whose edge length
/// is irrational).
#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxParams<S> {
    ell2: S,
    ell: Option<S>,
}

impl<S: Scalar> DarbouxParams<S> {
    /// Parameters from the leg length itself.
    pub fn from_length(ell: S) -> Result<Self> {
        if ell < S::zero() {
            return Err(Error::InvalidInput("leg length must be nonnegative".into()));
        }
        Ok(DarbouxParams {
            ell2: ell.clone() * ell.clone(),
            ell: Some(ell),
        })
    }

    /// Parameters from the squared leg length; the length itself is
    /// recovered only when it exists exactly in the scalar field.
    pub fn from_length_squared(ell2: S) -> Result<Self> {
        if ell2 < S::zero() {
            return Err(Error::InvalidInput(
                "squared leg length must be nonnegative".into(),
            ));
        }
        let ell = ell2.try_sqrt();
        Ok(DarbouxParams { ell2, ell })
    }

    pub fn length_squared(&self) -> &S {
        &self.ell2
    }

    /// The leg length, required by the projective parametrization.
    pub fn length(&self) -> Result<&S> {
        self.ell.as_ref().ok_or(Error::LengthRequired)
    }

    /// `ℓ = 0`: the frame glides with the path.
    pub fn is_trivial(&self) -> bool {
        self.ell2.is_zero()
    }

    pub fn to_f64(&self) -> DarbouxParams<f64> {
        DarbouxParams {
            ell2: self.ell2.to_f64(),
            ell: Some(self.ell.as_ref().map_or_else(
                || self.ell2.to_f64().sqrt(),
                |l| l.to_f64(),
            )),
        }
    }
}

/// A frame vector of squared length `ℓ²` attached at a path vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxVector<S> {
    v: Vector<S>,
}

impl<S: Scalar> DarbouxVector<S> {
    /// Wraps a raw vector after checking `|v|² = ℓ²`.
    pub fn from_vector(v: Vector<S>, params: &DarbouxParams<S>, tol: f64) -> Result<Self> {
        if !v.norm_sq().eq_within(params.length_squared(), tol) {
            return Err(Error::InconsistentFrame);
        }
        Ok(DarbouxVector { v })
    }

    /// The circle point for parameter `t = [p : q]`:
    /// `v = ℓ·((q²-p²)/(p²+q²), 2pq/(p²+q²))`. Rational parameters give
    /// rational circle points, so `t = 0 ↦ (ℓ, 0)` and `t = ∞ ↦ (-ℓ, 0)`.
    pub fn from_param(t: &ProjectiveParam<S>, params: &DarbouxParams<S>) -> Result<Self> {
        let ell = params.length()?.clone();
        let p = t.p().clone();
        let q = t.q().clone();
        let p2 = p.clone() * p.clone();
        let q2 = q.clone() * q.clone();
        let denom = p2.clone() + q2.clone();
        let x = ell.clone() * (q2 - p2) / denom.clone();
        let y = S::from_int(2) * ell * p * q / denom;
        Ok(DarbouxVector {
            v: Vector::new(x, y),
        })
    }

    /// The projective parameter of this circle point, read off whichever of
    /// the two stereographic charts `[v_y : ℓ+v_x]` / `[ℓ-v_x : v_y]` is
    /// better conditioned (they agree projectively on the circle).
    pub fn param(&self, params: &DarbouxParams<S>) -> Result<ProjectiveParam<S>> {
        let ell = params.length()?.clone();
        let plus = ell.clone() + self.v.x.clone();
        let minus = ell - self.v.x.clone();
        if plus.abs() >= minus.abs() {
            ProjectiveParam::new(self.v.y.clone(), plus)
        } else {
            ProjectiveParam::new(minus, self.v.y.clone())
        }
    }

    pub fn vector(&self) -> &Vector<S> {
        &self.v
    }

    pub fn to_f64(&self) -> DarbouxVector<f64> {
        DarbouxVector {
            v: self.v.to_f64(),
        }
    }
}

/// Result of one Darboux step: the new frame anchor and whether the
/// trapezoid solution coincided with the parallelogram one.
#[derive(Clone, Debug)]
pub struct StepResult<S> {
    pub point: Point<S>,
    pub degenerate: bool,
}

/// Completes the isosceles trapezoid on edge `P_i → P_next` starting from
/// `Q_i`: returns the unique intersection of the line through `P_i` parallel
/// to `Q_i P_next` with the circle of radius `ℓ` about `P_next` that is not
/// the parallelogram point `P_i + (P_next - Q_i)`.
///
/// Closed form: `Q_next = P_i + f·(P_next - Q_i)` with
/// `f = (|P_next - P_i|² - ℓ²) / |P_next - Q_i|²`; the parallelogram root of
/// the underlying line–circle quadratic is factored out, so
/// `|Q_next - P_next|² = ℓ²` is an algebraic identity.
pub fn darboux_step<S: Scalar>(
    p_i: &Point<S>,
    p_next: &Point<S>,
    q_i: &Point<S>,
    params: &DarbouxParams<S>,
    tol: f64,
) -> Result<StepResult<S>> {
    let frame = q_i - p_i;
    if !frame.norm_sq().eq_within(params.length_squared(), tol) {
        return Err(Error::InconsistentFrame);
    }
    let w = p_next - q_i;
    let w_sq = w.norm_sq();
    if w_sq.is_zero() {
        return Err(Error::UndefinedDirection);
    }
    let a_sq = (p_next - p_i).norm_sq();
    let f = (a_sq - params.length_squared().clone()) / w_sq;
    let degenerate = f.eq_within(&S::one(), tol);
    Ok(StepResult {
        point: p_i + &w.scale(&f),
        degenerate,
    })
}

/// Closure diagnostics of a full transform: whether the propagated frame
/// returned to its start after one period.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub closed: bool,
    /// Largest component difference `|v_p - v_0|`, as a float magnitude.
    pub max_violation: f64,
}

/// Output of [`darboux_transform`].
#[derive(Clone, Debug)]
pub struct TransformResult<S> {
    /// Image path with base vertices `Q_0 .. Q_{p-1}` and the same period
    /// and shift as the source. `Q_0` is kept where the frame put it; no
    /// re-anchoring to the origin is performed.
    pub image: PeriodicPath<S>,
    /// The true final iterate `Q_p` (equals `Q_0 + m·e1` exactly when the
    /// transform closes up).
    pub tail: Point<S>,
    pub v_start: Vector<S>,
    pub v_end: Vector<S>,
    pub closure: ClosureReport,
    /// Steps where trapezoid and parallelogram solutions coincided.
    pub degenerate_steps: Vec<usize>,
}

/// Propagates the frame `v_0` over one period of the path, producing the
/// image path `Q_0 .. Q_{p-1}` and the closure report comparing `v_p` with
/// `v_0`.
pub fn darboux_transform<S: Scalar>(
    path: &PeriodicPath<S>,
    v0: &DarbouxVector<S>,
    params: &DarbouxParams<S>,
    tol: f64,
) -> Result<TransformResult<S>> {
    let p = path.period();
    let mut images = Vec::with_capacity(p + 1);
    let mut degenerate_steps = Vec::new();
    let mut q = &path.vertex(0) + v0.vector();
    images.push(q.clone());
    for i in 0..p {
        let step = darboux_step(&path.vertex(i as i64), &path.vertex(i as i64 + 1), &q, params, tol)
            .map_err(|e| e.at_step(i))?;
        if step.degenerate {
            degenerate_steps.push(i);
        }
        q = step.point;
        images.push(q.clone());
    }
    let tail = images.pop().expect("one iterate per step");
    let v_end = &tail - &path.vertex(p as i64);
    let diff = &v_end - v0.vector();
    let ell_scale = params.length_squared().clone();
    let closed = diff.x.is_zero_vs_scale_sq(&ell_scale, tol)
        && diff.y.is_zero_vs_scale_sq(&ell_scale, tol);
    let max_violation = diff.x.abs().to_f64().max(diff.y.abs().to_f64());
    let image = PeriodicPath::new(images, path.shift())?;
    Ok(TransformResult {
        image,
        tail,
        v_start: v0.vector().clone(),
        v_end,
        closure: ClosureReport {
            closed,
            max_violation,
        },
        degenerate_steps,
    })
}

/// Candidate sample parameters for fitting an edge map. At most one of them
/// can be the undefined direction of a given edge.
const SAMPLE_PARAMS: [i64; 5] = [0, 1, -1, 2, 3];

/// The Möbius map `t_i ↦ t_{i+1}` induced by the Darboux step along one
/// edge, obtained by stepping three rational sample parameters (first three
/// of `0, 1, -1, 2, …` that survive) and fitting; a held-out fourth sample
/// must then map consistently, which pins the map exactly in rational mode.
pub fn edge_mobius<S: Scalar>(
    p_i: &Point<S>,
    p_next: &Point<S>,
    params: &DarbouxParams<S>,
    tol: f64,
) -> Result<MobiusMap<S>> {
    edge_mobius_indexed(p_i, p_next, params, tol, 0)
}

fn edge_mobius_indexed<S: Scalar>(
    p_i: &Point<S>,
    p_next: &Point<S>,
    params: &DarbouxParams<S>,
    tol: f64,
    index: usize,
) -> Result<MobiusMap<S>> {
    if p_i == p_next {
        return Err(Error::DegenerateEdge {
            index,
            reason: "zero-length edge".into(),
        });
    }
    let mut samples = Vec::with_capacity(4);
    for t_int in SAMPLE_PARAMS {
        if samples.len() == 4 {
            break;
        }
        let t = ProjectiveParam::<S>::from_int(t_int);
        match step_parameter(p_i, p_next, &t, params, tol) {
            Ok(u) => samples.push((t, u)),
            Err(Error::UndefinedDirection) => continue,
            Err(e) => return Err(e),
        }
    }
    if samples.len() < 4 {
        return Err(Error::DegenerateEdge {
            index,
            reason: "not enough usable sample parameters".into(),
        });
    }
    let holdout = samples.pop().expect("four samples collected");
    let triple: [(ProjectiveParam<S>, ProjectiveParam<S>); 3] = samples
        .try_into()
        .map_err(|_| Error::DegenerateEdge {
            index,
            reason: "sample collection failed".into(),
        })?;
    let map = MobiusMap::fit(&triple).map_err(|e| match e {
        Error::DegenerateFit(reason) => Error::DegenerateEdge {
            index,
            reason: format!("circle map collapses: {reason}"),
        },
        other => other,
    })?;
    // Fit-consistency contract: the held-out parameter must agree.
    let predicted = map.apply(&holdout.0);
    if !predicted.eq_within(&holdout.1, tol) {
        return Err(Error::DegenerateEdge {
            index,
            reason: "edge map is not fractional linear on the samples".into(),
        });
    }
    Ok(map)
}

/// Steps the frame with parameter `t` along the edge and returns the image
/// parameter.
fn step_parameter<S: Scalar>(
    p_i: &Point<S>,
    p_next: &Point<S>,
    t: &ProjectiveParam<S>,
    params: &DarbouxParams<S>,
    tol: f64,
) -> Result<ProjectiveParam<S>> {
    let v = DarbouxVector::from_param(t, params)?;
    let q_i = p_i + v.vector();
    let step = darboux_step(p_i, p_next, &q_i, params, tol)?;
    let v_next = DarbouxVector {
        v: &step.point - p_next,
    };
    v_next.param(params)
}

/// Monodromy of the path: the composition of the per-edge circle maps over
/// one period, in edge order (circles at `V_0` and `V_p` are identified by
/// translation, so no extra factor appears).
pub fn monodromy<S: Scalar>(
    path: &PeriodicPath<S>,
    params: &DarbouxParams<S>,
    tol: f64,
) -> Result<MobiusMap<S>> {
    let mut total = MobiusMap::identity();
    for i in 0..path.period() {
        let edge_map = edge_mobius_indexed(
            &path.vertex(i as i64),
            &path.vertex(i as i64 + 1),
            params,
            tol,
            i,
        )?;
        total = edge_map.compose(&total);
    }
    Ok(total)
}

/// Fixed points of the monodromy, converted back to frame vectors.
#[derive(Clone, Debug)]
pub struct ClosureVectors<S> {
    /// Identity monodromy: every frame vector closes up.
    pub all_closed: bool,
    /// Exact fixed-point quadratic `A t² + B t + C = 0`.
    pub quadratic: (S, S, S),
    pub discriminant: S,
    /// Real closure vectors (float; the fixed points need a square root).
    pub vectors: Vec<DarbouxVector<f64>>,
}

/// Computes the monodromy's fixed points and maps them back through the
/// stereographic parametrization.
pub fn closure_vectors<S: Scalar>(
    path: &PeriodicPath<S>,
    params: &DarbouxParams<S>,
    tol: f64,
) -> Result<ClosureVectors<S>> {
    let map = monodromy(path, params, tol)?;
    let fixed = map.fixed_points();
    let params_f = params.to_f64();
    let mut vectors = Vec::with_capacity(fixed.points.len());
    for t in &fixed.points {
        vectors.push(DarbouxVector::from_param(t, &params_f)?);
    }
    Ok(ClosureVectors {
        all_closed: fixed.all_fixed,
        quadratic: fixed.quadratic,
        discriminant: fixed.discriminant,
        vectors,
    })
}

/// A pair of paths asserted to be in Darboux correspondence, together with
/// the true final image vertex (`target_tail`), which differs from the
/// periodic extension of the target exactly when a transform failed to
/// close.
#[derive(Clone, Debug)]
pub struct Correspondence<S> {
    source: PeriodicPath<S>,
    target: PeriodicPath<S>,
    params: DarbouxParams<S>,
    target_tail: Point<S>,
}

impl<S: Scalar> Correspondence<S> {
    pub fn new(
        source: PeriodicPath<S>,
        target: PeriodicPath<S>,
        params: DarbouxParams<S>,
    ) -> Result<Self> {
        if source.period() != target.period() || source.shift() != target.shift() {
            return Err(Error::InvalidInput(
                "correspondence requires matching period and shift".into(),
            ));
        }
        let target_tail = target.vertex(target.period() as i64);
        Ok(Correspondence {
            source,
            target,
            params,
            target_tail,
        })
    }

    /// Correspondence from a transform result, keeping the true tail iterate
    /// so that non-closed transforms are visible to the verifier.
    pub fn from_transform(
        source: PeriodicPath<S>,
        transform: &TransformResult<S>,
        params: DarbouxParams<S>,
    ) -> Result<Self> {
        if source.period() != transform.image.period() || source.shift() != transform.image.shift()
        {
            return Err(Error::InvalidInput(
                "correspondence requires matching period and shift".into(),
            ));
        }
        Ok(Correspondence {
            source,
            target: transform.image.clone(),
            params,
            target_tail: transform.tail.clone(),
        })
    }

    pub fn source(&self) -> &PeriodicPath<S> {
        &self.source
    }

    pub fn target(&self) -> &PeriodicPath<S> {
        &self.target
    }

    pub fn params(&self) -> &DarbouxParams<S> {
        &self.params
    }

    /// Target vertex of the transform chain: the true tail iterate at
    /// index `p`, the stored base otherwise. Differs from the periodic
    /// extension exactly when a transform failed to close.
    pub fn chain_target_vertex(&self, i: i64) -> Point<S> {
        if i == self.target.period() as i64 {
            self.target_tail.clone()
        } else {
            self.target.vertex(i)
        }
    }
}

/// Per-quad record of a correspondence check.
#[derive(Clone, Debug)]
pub struct QuadCheck {
    /// `|P_i Q_i|² = ℓ²` at the quad's leading leg.
    pub leg_ok: bool,
    /// `P_i Q_{i+1} ∥ Q_i P_{i+1}`.
    pub parallel_ok: bool,
    pub leg_violation: f64,
    pub cross_violation: f64,
}

/// Aggregated correspondence verification.
#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub pass: bool,
    pub worst_violation: f64,
    pub quads: Vec<QuadCheck>,
    pub first_failure: Option<usize>,
}

/// Verifies every quad `P_i Q_i P_{i+1} Q_{i+1}` over one period, including
/// the wrap quad at `i = p-1` (whose far side comes from the periodic
/// extension, so an unclosed transform fails there): legs of squared length
/// `ℓ²` and the trapezoid parallel condition.
pub fn verify_correspondence<S: Scalar>(
    corr: &Correspondence<S>,
    tol: f64,
) -> CorrespondenceReport {
    let p = corr.source.period();
    let ell2 = corr.params.length_squared();
    let mut quads = Vec::with_capacity(p);
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut first_failure = None;
    for i in 0..p as i64 {
        let p_i = corr.source.vertex(i);
        let p_n = corr.source.vertex(i + 1);
        let q_i = corr.target.vertex(i);
        let q_n = corr.target.vertex(i + 1);

        let leg_start = (&q_i - &p_i).norm_sq();
        let leg_end = (&q_n - &p_n).norm_sq();
        let leg_ok = leg_start.eq_within(ell2, tol) && leg_end.eq_within(ell2, tol);
        let leg_violation = (leg_start - ell2.clone())
            .abs()
            .to_f64()
            .max((leg_end - ell2.clone()).abs().to_f64());

        let long_diag = &q_n - &p_i;
        let short_diag = &p_n - &q_i;
        let parallel_ok = parallel_check(&long_diag, &short_diag, tol).parallel;
        let cross_violation = cross(&long_diag, &short_diag).abs().to_f64();

        if !(leg_ok && parallel_ok) {
            pass = false;
            if first_failure.is_none() {
                first_failure = Some(i as usize);
            }
        }
        worst = worst.max(leg_violation).max(cross_violation);
        quads.push(QuadCheck {
            leg_ok,
            parallel_ok,
            leg_violation,
            cross_violation,
        });
    }
    CorrespondenceReport {
        pass,
        worst_violation: worst,
        quads,
        first_failure,
    }
}

/// The `k` linkages of a unit-shift path: `L_i = (V_i, V_{i+k}, V_{i+2k}, …)`
/// with period `n / gcd(n, k)` and shift `k / gcd(n, k)`. Linkages keep
/// their true positions (no re-anchoring), so consecutive linkages of a
/// trapezoidal path are in Darboux correspondence as they stand.
#[derive(Clone, Debug)]
pub struct LinkageDecomposition<S> {
    pub k: i64,
    pub linkages: Vec<PeriodicPath<S>>,
}

/// Splits the path into its `k` stride-`k` linkages.
pub fn decompose_linkages<S: Scalar>(
    path: &PeriodicPath<S>,
    k: i64,
) -> Result<LinkageDecomposition<S>> {
    if path.shift() != 1 {
        return Err(Error::InvalidInput(
            "linkage decomposition applies to paths with unit shift".into(),
        ));
    }
    if k < 1 {
        return Err(Error::InvalidInput(format!(
            "linkage stride must be at least 1, got {k}"
        )));
    }
    let n = path.period() as i64;
    let g = n.gcd(&k);
    let sub_period = (n / g) as usize;
    let sub_shift = k / g;
    let mut linkages = Vec::with_capacity(k as usize);
    for i in 0..k {
        let base: Vec<Point<S>> = (0..sub_period as i64)
            .map(|j| path.vertex(i + j * k))
            .collect();
        linkages.push(PeriodicPath::new(base, sub_shift)?);
    }
    Ok(LinkageDecomposition { k, linkages })
}
