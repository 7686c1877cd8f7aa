//! Area under a periodic path, area preservation under the Darboux
//! transformation, and conjugacy-invariant sweeps over the leg length.

use crate::darboux::{monodromy, verify_correspondence, Correspondence, CorrespondenceReport,
                     DarbouxParams};
use crate::error::{Error, Result};
use crate::geom::{shoelace_area, triangle_area, Point};
use crate::path::PeriodicPath;
use crate::scalar::Scalar;

/// Baseline `y = -c` below the paths being measured.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaBaseline<S> {
    c: S,
}

impl<S: Scalar> AreaBaseline<S> {
    pub fn new(c: S) -> Result<Self> {
        if c <= S::zero() {
            return Err(Error::InvalidInput("baseline offset c must be positive".into()));
        }
        Ok(AreaBaseline { c })
    }

    /// Default baseline for a set of paths: `ceil(max |y|) + 1`.
    pub fn auto_for(paths: &[&PeriodicPath<S>]) -> Self {
        let mut max_y = S::zero();
        for path in paths {
            let m = path.max_abs_y();
            if m > max_y {
                max_y = m;
            }
        }
        AreaBaseline {
            c: S::from_int(max_y.ceil_int() + 1),
        }
    }

    pub fn c(&self) -> &S {
        &self.c
    }
}

/// Area enclosed between a vertex chain `W_0 .. W_last` and the baseline,
/// bounded by the verticals through the endpoints: the signed shoelace area
/// of the closed polygon through `W̌_0, W_0, …, W_last, W̌_last` (hatted
/// points are baseline projections), oriented so that a left-to-right chain
/// above the baseline has positive area. Equals
/// `c·(x_last - x_0) + Σ (x_{i+1}-x_i)(y_i+y_{i+1})/2` identically.
pub fn area_under_chain<S: Scalar>(chain: &[Point<S>], baseline: &AreaBaseline<S>) -> Result<S> {
    if chain.len() < 2 {
        return Err(Error::InvalidInput("chain needs at least 2 points".into()));
    }
    let c = baseline.c().clone();
    let mut max_abs_y = S::zero();
    for pt in chain {
        let mag = pt.y.abs();
        if mag > max_abs_y {
            max_abs_y = mag;
        }
    }
    if c <= max_abs_y {
        return Err(Error::BaselineViolation {
            c: c.format_exact(),
            max_abs_y: max_abs_y.format_exact(),
        });
    }
    // Traverse baseline-last so the boundary is counterclockwise for a
    // left-to-right chain.
    let mut polygon: Vec<Point<S>> = Vec::with_capacity(chain.len() + 2);
    polygon.push(Point::new(chain[0].x.clone(), -c.clone()));
    polygon.extend(chain.iter().cloned());
    polygon.push(Point::new(chain[chain.len() - 1].x.clone(), -c));
    polygon.reverse();
    shoelace_area(&polygon)
}

/// Area under one period of the path: the chain `V_0 .. V_p` against the
/// baseline. Adding 1 to `c` adds exactly the shift `m` to the value.
pub fn area_under_path<S: Scalar>(
    path: &PeriodicPath<S>,
    baseline: &AreaBaseline<S>,
) -> Result<S> {
    let chain: Vec<Point<S>> = (0..=path.period() as i64).map(|i| path.vertex(i)).collect();
    area_under_chain(&chain, baseline)
}

/// Equality of the two triangle areas on a Darboux quad, the per-quad
/// identity behind area preservation.
#[derive(Clone, Debug)]
pub struct QuadAreaReport<S> {
    pub pass: bool,
    /// Signed area of triangle `(P_i, P_{i+1}, Q_{i+1})`.
    pub source_triangle: S,
    /// Signed area of triangle `(Q_i, Q_{i+1}, P_i)`.
    pub target_triangle: S,
    pub violation: f64,
}

/// Checks the trapezoid triangle-area equality
/// `|P_i P_{i+1} Q_{i+1}| = |Q_i Q_{i+1} P_i|` as signed shoelace areas.
pub fn check_quad_triangle_equality<S: Scalar>(
    p_i: &Point<S>,
    q_i: &Point<S>,
    p_next: &Point<S>,
    q_next: &Point<S>,
    tol: f64,
) -> QuadAreaReport<S> {
    let source_triangle = triangle_area(p_i, p_next, q_next);
    let target_triangle = triangle_area(q_i, q_next, p_i);
    let pass = source_triangle.eq_within(&target_triangle, tol);
    let violation = (source_triangle.clone() - target_triangle.clone())
        .abs()
        .to_f64();
    QuadAreaReport {
        pass,
        source_triangle,
        target_triangle,
        violation,
    }
}

/// Full area-preservation report for a correspondence.
#[derive(Clone, Debug)]
pub struct AreaReport<S> {
    /// Everything holds: verified correspondence, equal areas, equal
    /// boundary terms, and every per-quad triangle equality.
    pub pass: bool,
    pub correspondence: CorrespondenceReport,
    pub area_source: S,
    pub area_target: S,
    pub difference: S,
    pub areas_equal: bool,
    /// Boundary terms of the telescoped sum: the quads
    /// `(Q̌_0, Q_0, P_0, P̌_0)` and `(Q̌_p, Q_p, P_p, P̌_p)`.
    pub boundary_start: S,
    pub boundary_end: S,
    pub boundary_equal: bool,
    pub quads: Vec<QuadAreaReport<S>>,
    /// Present when the hypothesis failed and the inequality is expected.
    pub note: Option<String>,
}

/// Compares the areas under a correspondence's source and target, checks the
/// two telescoped boundary terms, and checks the triangle equality on every
/// quad. The target side uses the true tail iterate, so a transform that
/// failed to close shows up as unequal boundary terms rather than a silent
/// pass.
pub fn check_area_preservation<S: Scalar>(
    corr: &Correspondence<S>,
    baseline: &AreaBaseline<S>,
    tol: f64,
) -> Result<AreaReport<S>> {
    let correspondence = verify_correspondence(corr, tol);
    let p = corr.source().period() as i64;

    let source_chain: Vec<Point<S>> = (0..=p).map(|i| corr.source().vertex(i)).collect();
    let target_chain: Vec<Point<S>> = (0..=p).map(|i| corr.chain_target_vertex(i)).collect();
    let area_source = area_under_chain(&source_chain, baseline)?;
    let area_target = area_under_chain(&target_chain, baseline)?;
    let difference = area_source.clone() - area_target.clone();
    let area_tol = 1e-9;
    let areas_equal = if S::mode() == crate::scalar::ScalarMode::Rational {
        difference.is_zero()
    } else {
        difference.abs().to_f64() <= area_tol * (1.0 + area_source.to_f64().abs())
    };

    let boundary_quad = |i: i64| -> Result<S> {
        let p_v = corr.source().vertex(i);
        let q_v = corr.chain_target_vertex(i);
        let c = baseline.c().clone();
        let polygon = [
            Point::new(q_v.x.clone(), -c.clone()),
            q_v.clone(),
            p_v.clone(),
            Point::new(p_v.x.clone(), -c),
        ];
        shoelace_area(&polygon)
    };
    let boundary_start = boundary_quad(0)?;
    let boundary_end = boundary_quad(p)?;
    let boundary_equal = boundary_start.eq_within(&boundary_end, tol);

    let mut quads = Vec::with_capacity(p as usize);
    let mut quads_pass = true;
    for i in 0..p {
        let report = check_quad_triangle_equality(
            &corr.source().vertex(i),
            &corr.chain_target_vertex(i),
            &corr.source().vertex(i + 1),
            &corr.chain_target_vertex(i + 1),
            tol,
        );
        quads_pass &= report.pass;
        quads.push(report);
    }

    let pass = correspondence.pass && areas_equal && boundary_equal && quads_pass;
    let note = if !correspondence.pass {
        Some(
            "correspondence does not verify (open transform or wrong data); \
             area equality is not expected to hold"
                .into(),
        )
    } else {
        None
    };
    Ok(AreaReport {
        pass,
        correspondence,
        area_source,
        area_target,
        difference,
        areas_equal,
        boundary_start,
        boundary_end,
        boundary_equal,
        quads,
        note,
    })
}

/// One grid entry of an invariant sweep.
#[derive(Clone, Debug)]
pub struct SweepRecord<S> {
    pub ell: S,
    pub outcome: SweepOutcome<S>,
}

/// Outcome at one leg length.
#[derive(Clone, Debug)]
pub enum SweepOutcome<S> {
    Ok {
        invariant: S,
        det: S,
        trace: S,
        fixed_point_count: usize,
    },
    /// Identity monodromy: every frame vector is fixed.
    AllFixed { invariant: S, det: S, trace: S },
    /// The monodromy does not exist at this leg length.
    Degenerate { reason: String },
}

/// Conjugacy invariant of the monodromy as a function of the leg length.
#[derive(Clone, Debug)]
pub struct InvariantSweep<S> {
    pub records: Vec<SweepRecord<S>>,
}

impl<S: Scalar> InvariantSweep<S> {
    /// CSV with columns `ell, invariant, det, trace, fixed_point_count,
    /// status`. Degenerate entries keep their row with empty value cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ell,invariant,det,trace,fixed_point_count,status\n");
        for rec in &self.records {
            let ell = rec.ell.format_exact();
            match &rec.outcome {
                SweepOutcome::Ok {
                    invariant,
                    det,
                    trace,
                    fixed_point_count,
                } => {
                    out.push_str(&format!(
                        "{},{},{},{},{},ok\n",
                        ell,
                        invariant.format_exact(),
                        det.format_exact(),
                        trace.format_exact(),
                        fixed_point_count
                    ));
                }
                SweepOutcome::AllFixed { invariant, det, trace } => {
                    out.push_str(&format!(
                        "{},{},{},{},all,all-fixed\n",
                        ell,
                        invariant.format_exact(),
                        det.format_exact(),
                        trace.format_exact()
                    ));
                }
                SweepOutcome::Degenerate { reason } => {
                    let clean = reason.replace([',', '\n'], ";");
                    out.push_str(&format!("{ell},,,,,degenerate: {clean}\n"));
                }
            }
        }
        out
    }
}

/// Computes monodromy data for each leg length on a strictly increasing
/// positive grid. Degenerate lengths are recorded inline, not skipped.
pub fn sweep_invariant<S: Scalar>(
    path: &PeriodicPath<S>,
    grid: &[S],
    tol: f64,
) -> Result<InvariantSweep<S>> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("sweep grid is empty".into()));
    }
    for ell in grid {
        if *ell <= S::zero() {
            return Err(Error::InvalidInput("sweep grid values must be positive".into()));
        }
    }
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidInput(
                "sweep grid must be strictly increasing".into(),
            ));
        }
    }
    let records = grid
        .iter()
        .map(|ell| {
            let params = match DarbouxParams::from_length(ell.clone()) {
                Ok(p) => p,
                Err(e) => {
                    return SweepRecord {
                        ell: ell.clone(),
                        outcome: SweepOutcome::Degenerate { reason: e.to_string() },
                    }
                }
            };
            match monodromy(path, &params, tol) {
                Ok(map) => {
                    let fixed = map.fixed_points();
                    let invariant = map.conjugacy_invariant();
                    let det = map.det();
                    let trace = map.trace();
                    if fixed.all_fixed {
                        SweepRecord {
                            ell: ell.clone(),
                            outcome: SweepOutcome::AllFixed { invariant, det, trace },
                        }
                    } else {
                        SweepRecord {
                            ell: ell.clone(),
                            outcome: SweepOutcome::Ok {
                                invariant,
                                det,
                                trace,
                                fixed_point_count: fixed.count(),
                            },
                        }
                    }
                }
                Err(e) => SweepRecord {
                    ell: ell.clone(),
                    outcome: SweepOutcome::Degenerate { reason: e.to_string() },
                },
            }
        })
        .collect();
    Ok(InvariantSweep { records })
}
