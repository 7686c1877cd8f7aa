//! Periodic polygonal paths, their validators, and the sign-sequence family.
//!
//! A path stores one period of vertices `V_0 .. V_{p-1}` together with a
//! horizontal shift multiplier `m`; every other vertex is derived through
//! `V_{i+p} = V_i + m·e1`. Bicycle paths have `m = 1`; the linkages obtained
//! by striding through a path with step `k` have `m = k / gcd(n, k)`.

use crate::error::{Error, Result};
use crate::geom::{parallel_check, Point, Vector};
use crate::scalar::Scalar;

/// Default cap for sign-sequence enumeration (`C(24, 12)` is about 2.7M).
pub const ENUMERATION_CAP: usize = 24;

/// A periodic polygonal path: `vertex(i + p) = vertex(i) + m·e1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicPath<S> {
    period: usize,
    shift: i64,
    base: Vec<Point<S>>,
}

impl<S: Scalar> PeriodicPath<S> {
    /// Builds a path from one period of vertices. `shift` is the multiplier
    /// `m >= 1` of the unit horizontal translation per period.
    pub fn new(base: Vec<Point<S>>, shift: i64) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::InvalidInput("path needs at least one vertex".into()));
        }
        if shift < 1 {
            return Err(Error::InvalidInput(format!(
                "period shift must be a positive integer, got {shift}"
            )));
        }
        Ok(PeriodicPath {
            period: base.len(),
            shift,
            base,
        })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn base_vertices(&self) -> &[Point<S>] {
        &self.base
    }

    /// Vertex for any integer index, derived via
    /// `V_{(i mod p)} + floor(i / p) · m · e1` with floor toward -∞.
    pub fn vertex(&self, i: i64) -> Point<S> {
        let p = self.period as i64;
        let base_index = i.rem_euclid(p) as usize;
        let cycles = i.div_euclid(p);
        let mut v = self.base[base_index].clone();
        if cycles != 0 {
            v.x = v.x + S::from_int(cycles * self.shift);
        }
        v
    }

    /// Edge vector `vertex(i+1) - vertex(i)`.
    pub fn edge(&self, i: i64) -> Vector<S> {
        &self.vertex(i + 1) - &self.vertex(i)
    }

    /// Whether the path obeys the `V_0 = (0, 0)` normalization.
    pub fn is_anchored(&self) -> bool {
        self.base[0].is_origin()
    }

    /// Same path translated by `v`.
    pub fn translated(&self, v: &Vector<S>) -> Self {
        PeriodicPath {
            period: self.period,
            shift: self.shift,
            base: self.base.iter().map(|pt| pt + v).collect(),
        }
    }

    /// Path re-anchored so its first base vertex is the origin.
    pub fn normalized(&self) -> Self {
        let back = &Point::origin() - &self.base[0];
        self.translated(&back)
    }

    /// Path with the base point moved forward by `offset` vertices. The new
    /// base vertex 0 is the old `vertex(offset)`.
    pub fn rotated_base(&self, offset: i64) -> Self {
        let base = (0..self.period as i64)
            .map(|j| self.vertex(offset + j))
            .collect();
        PeriodicPath {
            period: self.period,
            shift: self.shift,
            base,
        }
    }

    pub fn to_f64(&self) -> PeriodicPath<f64> {
        PeriodicPath {
            period: self.period,
            shift: self.shift,
            base: self.base.iter().map(Point::to_f64).collect(),
        }
    }

    /// Largest `|y|` over one period.
    pub fn max_abs_y(&self) -> S {
        let mut best = self.base[0].y.abs();
        for pt in &self.base[1..] {
            let mag = pt.y.abs();
            if mag > best {
                best = mag;
            }
        }
        best
    }
}

/// Diagonal-step parameters of a path family: period `n`, diagonal step `k`,
/// and, when `k = d·n ± 1`, the multiplier `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathParams {
    pub n: usize,
    pub k: i64,
    pub d: Option<i64>,
}

impl PathParams {
    pub fn new(n: usize, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("period must be positive".into()));
        }
        if k == 0 {
            return Err(Error::InvalidInput("diagonal step must be nonzero".into()));
        }
        let n_i = n as i64;
        let d = if (k - 1) % n_i == 0 && (k - 1) / n_i != 0 {
            Some((k - 1) / n_i)
        } else if (k + 1) % n_i == 0 && (k + 1) / n_i != 0 {
            Some((k + 1) / n_i)
        } else {
            None
        };
        Ok(PathParams { n, k, d })
    }

    /// `k ≡ 0 (mod n)` makes the diagonal condition vacuous.
    pub fn is_degenerate(&self) -> bool {
        self.k.rem_euclid(self.n as i64) == 0
    }
}

/// A vertical zigzag profile: signs `χ ∈ {−1,+1}^n` and an amplitude
/// `r >= 0`. The profile closes up when `r = 0` or the signs sum to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SignSequence<S> {
    chi: Vec<i8>,
    r: S,
}

impl<S: Scalar> SignSequence<S> {
    pub fn new(chi: Vec<i8>, r: S) -> Result<Self> {
        if chi.is_empty() {
            return Err(Error::InvalidInput("sign sequence must be nonempty".into()));
        }
        if chi.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("sign entries must be +1 or -1".into()));
        }
        if r < S::zero() {
            return Err(Error::InvalidInput("amplitude r must be nonnegative".into()));
        }
        let sum: i64 = chi.iter().map(|&s| s as i64).sum();
        if sum != 0 && !r.is_zero() {
            return Err(Error::InconsistentSequence { sum });
        }
        Ok(SignSequence { chi, r })
    }

    /// Parses a sign string such as `"+-+-"`.
    pub fn parse_chi(text: &str) -> Result<Vec<i8>> {
        text.chars()
            .map(|ch| match ch {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Parse(format!("bad sign character {other:?}"))),
            })
            .collect()
    }

    pub fn chi(&self) -> &[i8] {
        &self.chi
    }

    pub fn r(&self) -> &S {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn chi_string(&self) -> String {
        self.chi
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect()
    }
}

/// The path with `V_i = (i/n, 0)`: all vertices equally spaced on the x-axis.
pub fn make_regular<S: Scalar>(n: usize) -> Result<PeriodicPath<S>> {
    if n == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let base = (0..n)
        .map(|i| Point::new(S::from_ratio(i as i64, n as i64), S::zero()))
        .collect();
    PeriodicPath::new(base, 1)
}

/// The classified family member for a sign sequence: `x_j = j/n`, `y_0 = 0`,
/// `y_{j+1} = y_j + χ_j·r`.
pub fn make_sign_sequence_path<S: Scalar>(
    n: usize,
    seq: &SignSequence<S>,
) -> Result<PeriodicPath<S>> {
    if n != seq.len() {
        return Err(Error::InvalidInput(format!(
            "sign sequence has {} entries but n = {n}",
            seq.len()
        )));
    }
    let mut base = Vec::with_capacity(n);
    let mut y = S::zero();
    for (j, &sign) in seq.chi().iter().enumerate() {
        base.push(Point::new(S::from_ratio(j as i64, n as i64), y.clone()));
        let step = seq.r().clone() * S::from_int(sign as i64);
        y = y + step;
    }
    PeriodicPath::new(base, 1)
}

/// Report of an equilateralness check: all squared edge lengths compared to
/// the first one.
#[derive(Clone, Debug)]
pub struct EquilateralReport<S> {
    pub pass: bool,
    /// Squared length of edge 0 used as the reference.
    pub reference_sq: S,
    /// Largest `| |edge_i|^2 - |edge_0|^2 |` seen, as a float magnitude.
    pub max_violation: f64,
    pub worst_edge: Option<usize>,
    /// Indices of zero-length edges (reported, not rejected).
    pub zero_edges: Vec<usize>,
}

/// Outcome of a validator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The check holds only vacuously or collinearly.
    Degenerate,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Degenerate)
    }
}

/// Report of a k-diagonal equality check.
#[derive(Clone, Debug)]
pub struct DiagonalReport<S> {
    pub verdict: Verdict,
    pub k: i64,
    /// Squared length of the reference diagonal `V_0 V_k` (absent when the
    /// check is vacuous).
    pub reference_sq: Option<S>,
    pub max_violation: f64,
    pub worst_index: Option<usize>,
}

/// Combined report for the full path definition.
#[derive(Clone, Debug)]
pub struct PathReport<S> {
    pub verdict: Verdict,
    pub anchored: bool,
    pub equilateral: EquilateralReport<S>,
    pub diagonals: DiagonalReport<S>,
}

impl<S> PathReport<S> {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Checks `|V_i V_{i+1}|^2` equal for `i = 0..p-1`. Works for any shift.
pub fn validate_equilateral<S: Scalar>(path: &PeriodicPath<S>, tol: f64) -> EquilateralReport<S> {
    let reference_sq = path.edge(0).norm_sq();
    let mut pass = true;
    let mut max_violation = 0.0f64;
    let mut worst_edge = None;
    let mut zero_edges = Vec::new();
    for i in 0..path.period() as i64 {
        let len_sq = path.edge(i).norm_sq();
        if len_sq.is_zero() {
            zero_edges.push(i as usize);
        }
        if !len_sq.eq_within(&reference_sq, tol) {
            pass = false;
        }
        let violation = (len_sq - reference_sq.clone()).abs().to_f64();
        if violation > max_violation {
            max_violation = violation;
            worst_edge = Some(i as usize);
        }
    }
    EquilateralReport {
        pass,
        reference_sq,
        max_violation,
        worst_edge,
        zero_edges,
    }
}

/// Checks `|V_i V_{i+k}|^2` equal for `i = 0..p-1`. Requires `m = 1`.
pub fn validate_k_diagonals<S: Scalar>(
    path: &PeriodicPath<S>,
    k: i64,
    tol: f64,
) -> Result<DiagonalReport<S>> {
    if path.shift() != 1 {
        return Err(Error::InvalidInput(
            "k-diagonal validation applies to paths with unit shift".into(),
        ));
    }
    if k.rem_euclid(path.period() as i64) == 0 {
        // Every k-diagonal is the constant vector (k/n)·m·e1.
        return Ok(DiagonalReport {
            verdict: Verdict::Degenerate,
            k,
            reference_sq: None,
            max_violation: 0.0,
            worst_index: None,
        });
    }
    let diag = |i: i64| (&path.vertex(i + k) - &path.vertex(i)).norm_sq();
    let reference_sq = diag(0);
    let mut verdict = Verdict::Pass;
    let mut max_violation = 0.0f64;
    let mut worst_index = None;
    for i in 0..path.period() as i64 {
        let len_sq = diag(i);
        if !len_sq.eq_within(&reference_sq, tol) {
            verdict = Verdict::Fail;
        }
        let violation = (len_sq - reference_sq.clone()).abs().to_f64();
        if violation > max_violation {
            max_violation = violation;
            worst_index = Some(i as usize);
        }
    }
    Ok(DiagonalReport {
        verdict,
        k,
        reference_sq: Some(reference_sq),
        max_violation,
        worst_index,
    })
}

/// Full check of the bicycle-path definition: the `V_0 = (0,0)`
/// normalization, equilateralness, and k-diagonal equality.
pub fn validate_path<S: Scalar>(
    path: &PeriodicPath<S>,
    k: i64,
    tol: f64,
) -> Result<PathReport<S>> {
    let anchored = path.is_anchored();
    let equilateral = validate_equilateral(path, tol);
    let diagonals = validate_k_diagonals(path, k, tol)?;
    let verdict = if !anchored || !equilateral.pass || diagonals.verdict == Verdict::Fail {
        Verdict::Fail
    } else if diagonals.verdict == Verdict::Degenerate {
        Verdict::Degenerate
    } else {
        Verdict::Pass
    };
    Ok(PathReport {
        verdict,
        anchored,
        equilateral,
        diagonals,
    })
}

/// How one quadrilateral `V_i V_{i+1} V_{i+k} V_{i+k+1}` moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadClass {
    /// `V_i V_{i+k+1} ∥ V_{i+1} V_{i+k}` and not a parallelogram.
    Trapezoid,
    /// Equal displacement `V_{i+1} - V_i = V_{i+k+1} - V_{i+k}` only.
    Parallelogram,
    /// Both hold simultaneously (collinear degeneracy).
    Both,
    Neither,
}

/// Report of the trapezoidal condition.
#[derive(Clone, Debug)]
pub struct TrapezoidReport {
    pub verdict: Verdict,
    pub quads: Vec<QuadClass>,
    pub first_failure: Option<usize>,
}

/// Checks `V_i V_{i+k+1} ∥ V_{i+1} V_{i+k}` for each `i`, classifying every
/// quad. Collinear quads satisfy both the trapezoid and the parallelogram
/// description and downgrade the verdict to `Degenerate`.
pub fn check_trapezoidal<S: Scalar>(
    path: &PeriodicPath<S>,
    k: i64,
    tol: f64,
) -> Result<TrapezoidReport> {
    if path.shift() != 1 {
        return Err(Error::InvalidInput(
            "trapezoidal condition applies to paths with unit shift".into(),
        ));
    }
    let mut quads = Vec::with_capacity(path.period());
    let mut verdict = Verdict::Pass;
    let mut first_failure = None;
    for i in 0..path.period() as i64 {
        let long_diag = &path.vertex(i + k + 1) - &path.vertex(i);
        let short_diag = &path.vertex(i + k) - &path.vertex(i + 1);
        let trapezoid = parallel_check(&long_diag, &short_diag, tol).parallel;
        let step_low = path.edge(i);
        let step_high = path.edge(i + k);
        let displacement = &step_low - &step_high;
        let parallelogram = displacement.x.eq_within(&S::zero(), tol)
            && displacement.y.eq_within(&S::zero(), tol);
        let class = match (trapezoid, parallelogram) {
            (true, true) => QuadClass::Both,
            (true, false) => QuadClass::Trapezoid,
            (false, true) => QuadClass::Parallelogram,
            (false, false) => QuadClass::Neither,
        };
        if !trapezoid {
            verdict = Verdict::Fail;
            if first_failure.is_none() {
                first_failure = Some(i as usize);
            }
        } else if class == QuadClass::Both && verdict == Verdict::Pass {
            verdict = Verdict::Degenerate;
        }
        quads.push(class);
    }
    Ok(TrapezoidReport {
        verdict,
        quads,
        first_failure,
    })
}

/// All sign tuples `χ ∈ {−1,+1}^n` with zero sum, in lexicographic order
/// with `+` before `-`. Empty for odd `n`.
pub fn enumerate_sign_sequences(n: usize) -> Result<Vec<Vec<i8>>> {
    enumerate_sign_sequences_capped(n, ENUMERATION_CAP)
}

/// As [`enumerate_sign_sequences`] with an explicit size cap.
pub fn enumerate_sign_sequences_capped(n: usize, cap: usize) -> Result<Vec<Vec<i8>>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut chi = vec![-1i8; n];
    // Walk all C(n, n/2) placements of the +1 entries in lexicographic
    // order of position sets; '+' sorts before '-', so this is also the
    // lexicographic order of the sign strings.
    let half = n / 2;
    let mut positions: Vec<usize> = (0..half).collect();
    loop {
        for s in chi.iter_mut() {
            *s = -1;
        }
        for &pos in &positions {
            chi[pos] = 1;
        }
        out.push(chi.clone());
        // Next combination.
        let mut i = half;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if positions[i] != i + n - half {
                break;
            }
            if i == 0 {
                return Ok(out);
            }
        }
        positions[i] += 1;
        for j in (i + 1)..half {
            positions[j] = positions[j - 1] + 1;
        }
    }
}

/// Where a path sits relative to the classified family.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyClass<S> {
    Regular,
    SignSequence(SignSequence<S>),
    OutsideFamily,
}

/// Decides whether a unit-shift path is the regular path, a sign-sequence
/// member (returning the recovered `(χ, r)`), or neither. Exact in rational
/// mode; float mode compares coordinates within `tol` against the rebuilt
/// candidate member.
pub fn classify_as_family<S: Scalar>(path: &PeriodicPath<S>, tol: f64) -> Result<FamilyClass<S>> {
    if path.shift() != 1 {
        return Err(Error::InvalidInput(
            "family classification applies to paths with unit shift".into(),
        ));
    }
    let n = path.period();
    let base = path.base_vertices();

    // x_j must be j/n (and in particular the path must be anchored).
    for (j, pt) in base.iter().enumerate() {
        let expected = S::from_ratio(j as i64, n as i64);
        if !pt.x.eq_within(&expected, tol) {
            return Ok(FamilyClass::OutsideFamily);
        }
    }
    if !base[0].y.eq_within(&S::zero(), tol) {
        return Ok(FamilyClass::OutsideFamily);
    }

    let dy: Vec<S> = (0..n as i64)
        .map(|j| path.vertex(j + 1).y - path.vertex(j).y)
        .collect();

    // Candidate amplitude: mean of |Δy| (exact mode recovers it from any
    // step; float mode averages out solver noise).
    let mut sum_abs = S::zero();
    for d in &dy {
        sum_abs = sum_abs + d.abs();
    }
    let r = sum_abs * S::from_ratio(1, n as i64);

    // Regular candidate first: r == 0 canonicalizes to the regular path.
    let regular_ok = base.iter().all(|pt| pt.y.eq_within(&S::zero(), tol));
    if regular_ok {
        return Ok(FamilyClass::Regular);
    }

    let chi: Vec<i8> = dy.iter().map(|d| if *d >= S::zero() { 1 } else { -1 }).collect();
    let sum: i64 = chi.iter().map(|&s| s as i64).sum();
    if sum != 0 {
        return Ok(FamilyClass::OutsideFamily);
    }
    // Rebuild the candidate member and compare coordinates.
    let seq = SignSequence::new(chi, r)?;
    let member = make_sign_sequence_path(n, &seq)?;
    for (got, want) in base.iter().zip(member.base_vertices()) {
        if !got.x.eq_within(&want.x, tol) || !got.y.eq_within(&want.y, tol) {
            return Ok(FamilyClass::OutsideFamily);
        }
    }
    Ok(FamilyClass::SignSequence(seq))
}
