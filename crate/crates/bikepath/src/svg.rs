//! Deterministic SVG rendering of paths, linkage decompositions, and
//! correspondences. Identical input produces byte-identical output, so
//! figures are golden-file testable.

use crate::darboux::{Correspondence, LinkageDecomposition};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::path::PeriodicPath;
use crate::scalar::Scalar;

/// Rendering options.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    /// Number of periods to draw.
    pub periods: usize,
    /// Canvas width in pixels.
    pub width: u32,
    /// Draw vertex labels `V0, V1, …`.
    pub labels: bool,
    /// Draw the baseline `y = -c` and shade the area between path and
    /// baseline.
    pub baseline: Option<f64>,
    pub path_stroke: String,
    pub target_stroke: String,
    pub linkage_strokes: Vec<String>,
    pub quad_fill: String,
    pub stroke_width: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            periods: 2,
            width: 800,
            labels: false,
            baseline: None,
            path_stroke: "#1f77b4".into(),
            target_stroke: "#d62728".into(),
            linkage_strokes: vec![
                "#d62728".into(),
                "#2ca02c".into(),
                "#9467bd".into(),
                "#ff7f0e".into(),
                "#8c564b".into(),
                "#17becf".into(),
            ],
            quad_fill: "#2ca02c".into(),
            stroke_width: 2.0,
        }
    }
}

impl RenderSpec {
    fn validate(&self) -> Result<()> {
        if self.periods < 1 {
            return Err(Error::InvalidInput("render needs at least one period".into()));
        }
        if self.width < 64 {
            return Err(Error::InvalidInput("canvas width must be at least 64".into()));
        }
        Ok(())
    }
}

/// Affine map from math coordinates to pixel coordinates (y flipped).
struct Frame {
    scale: f64,
    ox: f64,
    oy: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[Point<f64>], width: u32) -> Frame {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for p in points {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
        let span_x = (max_x - min_x).max(1e-9);
        let span_y = (max_y - min_y).max(1e-9);
        let margin = 0.05 * span_x.max(span_y);
        let min_x = min_x - margin;
        let max_x = max_x + margin;
        let min_y = min_y - margin;
        let max_y = max_y + margin;
        let scale = width as f64 / (max_x - min_x);
        let height = ((max_y - min_y) * scale).max(32.0);
        Frame {
            scale,
            ox: min_x,
            oy: max_y,
            width: width as f64,
            height,
        }
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.ox) * self.scale
    }

    // Screen y grows downward: flip around the top of the bounding box.
    fn y(&self, y: f64) -> f64 {
        (self.oy - y) * self.scale
    }

    fn point(&self, p: &Point<f64>) -> (f64, f64) {
        (self.x(p.x), self.y(p.y))
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

fn polyline(points: &[(f64, f64)], stroke: &str, width: f64) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y)))
        .collect();
    format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
        coords.join(" "),
        stroke,
        fmt(width)
    )
}

fn polygon(points: &[(f64, f64)], fill: &str, opacity: f64) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y)))
        .collect();
    format!(
        "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"{}\" stroke=\"none\"/>\n",
        coords.join(" "),
        fill,
        fmt(opacity)
    )
}

fn document(frame: &Frame, body: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(frame.width),
        fmt(frame.height),
        fmt(frame.width),
        fmt(frame.height)
    ));
    // Math coordinates are mapped with the y axis flipped so figures read
    // with y pointing up: pixel = (scale*(x - ox), scale*(oy - y)).
    out.push_str("<!-- y axis flipped: pixel y = scale * (y_max - y) -->\n");
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(body);
    out.push_str("</svg>\n");
    out
}

fn sample_vertices<S: Scalar>(path: &PeriodicPath<S>, periods: usize) -> Vec<Point<f64>> {
    let count = path.period() * periods;
    (0..=count as i64).map(|i| path.vertex(i).to_f64()).collect()
}

fn vertex_markers(points: &[Point<f64>], frame: &Frame, labels: bool, color: &str) -> String {
    let mut out = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = frame.point(p);
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
            fmt(x),
            fmt(y),
            color
        ));
        if labels {
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"monospace\" fill=\"#333333\">V{}</text>\n",
                fmt(x + 5.0),
                fmt(y - 5.0),
                i
            ));
        }
    }
    out
}

/// Renders one path as a polyline over `spec.periods` periods, optionally
/// with the baseline and the shaded area under the path.
pub fn render_path_svg<S: Scalar>(path: &PeriodicPath<S>, spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let vertices = sample_vertices(path, spec.periods);
    let mut extent = vertices.clone();
    if let Some(c) = spec.baseline {
        extent.push(Point::new(vertices[0].x, -c));
    }
    let frame = Frame::fit(&extent, spec.width);
    let pixels: Vec<(f64, f64)> = vertices.iter().map(|p| frame.point(p)).collect();

    let mut body = String::new();
    if let Some(c) = spec.baseline {
        let y = frame.y(-c);
        // Shaded area between path and baseline.
        let mut shade = pixels.clone();
        shade.push((frame.x(vertices.last().unwrap().x), y));
        shade.push((frame.x(vertices[0].x), y));
        body.push_str(&polygon(&shade, &spec.path_stroke, 0.12));
        body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n",
            fmt(0.0),
            fmt(y),
            fmt(frame.width),
            fmt(y)
        ));
    }
    body.push_str(&polyline(&pixels, &spec.path_stroke, spec.stroke_width));
    body.push_str(&vertex_markers(&vertices, &frame, spec.labels, &spec.path_stroke));
    Ok(document(&frame, &body))
}

/// Renders the parent path (light) with each linkage in its own stroke.
pub fn render_linkages_svg<S: Scalar>(
    parent: &PeriodicPath<S>,
    dec: &LinkageDecomposition<S>,
    spec: &RenderSpec,
) -> Result<String> {
    spec.validate()?;
    let parent_vertices = sample_vertices(parent, spec.periods);
    let frame = Frame::fit(&parent_vertices, spec.width);
    let max_x = parent_vertices.last().map(|p| p.x).unwrap_or(0.0);

    let mut body = String::new();
    let parent_pixels: Vec<(f64, f64)> = parent_vertices.iter().map(|p| frame.point(p)).collect();
    body.push_str(&polyline(&parent_pixels, "#bbbbbb", 1.0));
    for (i, linkage) in dec.linkages.iter().enumerate() {
        let stroke = &spec.linkage_strokes[i % spec.linkage_strokes.len()];
        // Draw linkage vertices while they stay inside the parent's span.
        let mut pts = Vec::new();
        let mut j = 0i64;
        loop {
            let v = linkage.vertex(j).to_f64();
            if v.x > max_x + 1e-9 || pts.len() > 4 * parent_vertices.len() {
                break;
            }
            pts.push(v);
            j += 1;
        }
        if pts.len() >= 2 {
            let pixels: Vec<(f64, f64)> = pts.iter().map(|p| frame.point(p)).collect();
            body.push_str(&polyline(&pixels, stroke, spec.stroke_width));
            body.push_str(&vertex_markers(&pts, &frame, false, stroke));
        }
    }
    if spec.labels {
        body.push_str(&vertex_markers(&parent_vertices, &frame, true, "#777777"));
    }
    Ok(document(&frame, &body))
}

/// Renders a correspondence: both paths plus the shaded trapezoid quads.
pub fn render_correspondence_svg<S: Scalar>(
    corr: &Correspondence<S>,
    spec: &RenderSpec,
) -> Result<String> {
    spec.validate()?;
    let p = corr.source().period() as i64;
    let steps = p * spec.periods as i64;
    let source: Vec<Point<f64>> = (0..=steps).map(|i| corr.source().vertex(i).to_f64()).collect();
    let target: Vec<Point<f64>> = (0..=steps)
        .map(|i| {
            if i <= p {
                corr.chain_target_vertex(i).to_f64()
            } else {
                corr.target().vertex(i).to_f64()
            }
        })
        .collect();
    let mut extent = source.clone();
    extent.extend(target.iter().cloned());
    if let Some(c) = spec.baseline {
        extent.push(Point::new(source[0].x, -c));
    }
    let frame = Frame::fit(&extent, spec.width);

    let mut body = String::new();
    for i in 0..steps as usize {
        let quad = [
            frame.point(&source[i]),
            frame.point(&source[i + 1]),
            frame.point(&target[i + 1]),
            frame.point(&target[i]),
        ];
        body.push_str(&polygon(&quad, &spec.quad_fill, 0.15));
    }
    if let Some(c) = spec.baseline {
        let y = frame.y(-c);
        body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n",
            fmt(0.0),
            fmt(y),
            fmt(frame.width),
            fmt(y)
        ));
    }
    let src_pixels: Vec<(f64, f64)> = source.iter().map(|pt| frame.point(pt)).collect();
    let tgt_pixels: Vec<(f64, f64)> = target.iter().map(|pt| frame.point(pt)).collect();
    // The legs of every quad share the declared length; draw them thin.
    for (s, t) in src_pixels.iter().zip(&tgt_pixels) {
        body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999999\" stroke-width=\"1\"/>\n",
            fmt(s.0),
            fmt(s.1),
            fmt(t.0),
            fmt(t.1)
        ));
    }
    body.push_str(&polyline(&src_pixels, &spec.path_stroke, spec.stroke_width));
    body.push_str(&polyline(&tgt_pixels, &spec.target_stroke, spec.stroke_width));
    body.push_str(&vertex_markers(&source, &frame, spec.labels, &spec.path_stroke));
    body.push_str(&vertex_markers(&target, &frame, false, &spec.target_stroke));
    Ok(document(&frame, &body))
}
