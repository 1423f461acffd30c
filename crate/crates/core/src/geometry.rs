//! Graph geometries, their arc-length discretisation into point sets, and the
//! coupling normalisation `α = 1/∫γ dm`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(r: f64, angle: f64) -> Self {
        Point { x: r * angle.cos(), y: r * angle.sin() }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    fn add(self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Declarative description of the support Γ.
///
/// Angles are in radians, lengths in the dimensionless units where
/// `ħ²/2m = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    /// Circle of radius `radius`; the arc `φ ∈ (2π − cut_angle, 2π)` is removed.
    Ring {
        radius: f64,
        #[serde(default)]
        cut_angle: f64,
    },
    /// Star with `angles.len() + 1` arms. Arm `j` leaves the origin at angle
    /// `β₁ + … + β_j`; the closing angle `2π − Σβ` must stay positive.
    Star { angles: Vec<f64>, arm_lengths: Vec<f64> },
    /// Stair / Z graph: a middle segment of length `mid_length` meeting two
    /// antiparallel arms at angle `bend_angle` (π gives a straight line).
    ZLine { mid_length: f64, bend_angle: f64, arm_length: f64 },
    /// Nearly closed loop: a circular arc of radius `radius` spanning
    /// `2π − gap_angle`, an outward flare of the same radius and angle
    /// `flare_angle` at each end, then straight tangent legs.
    NearLoop { radius: f64, gap_angle: f64, flare_angle: f64, leg_length: f64 },
}

/// An isometry of the plane that is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Involution {
    /// Mirror in the line through `point` with direction `angle`.
    Reflection { point: Point, angle: f64 },
    /// Rotation by π about `center`.
    HalfTurn { center: Point },
}

impl Involution {
    pub fn apply(&self, p: Point) -> Point {
        match *self {
            Involution::Reflection { point, angle } => {
                let (s, c) = (2.0 * angle).sin_cos();
                let (dx, dy) = (p.x - point.x, p.y - point.y);
                Point::new(point.x + c * dx + s * dy, point.y + s * dx - c * dy)
            }
            Involution::HalfTurn { center } => Point::new(2.0 * center.x - p.x, 2.0 * center.y - p.y),
        }
    }
}

/// How densely to place point interactions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    /// Ring: total number of points. Star: points per arm (vertex extra).
    /// Z-line and near-loop: approximate total, converted to a spacing.
    Count(usize),
    /// Target distance between neighbours along each edge.
    Spacing(f64),
}

/// A smooth piece of Γ parametrised by arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    Segment { start: Point, end: Point },
    /// `sweep` is signed: positive runs counter-clockwise.
    Arc { center: Point, radius: f64, start_angle: f64, sweep: f64 },
}

impl Edge {
    pub fn length(&self) -> f64 {
        match *self {
            Edge::Segment { start, end } => start.distance(end),
            Edge::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Point at arc length `s` from the start.
    pub fn point_at(&self, s: f64) -> Point {
        match *self {
            Edge::Segment { start, end } => {
                let t = s / self.length();
                Point::new(start.x + t * (end.x - start.x), start.y + t * (end.y - start.y))
            }
            Edge::Arc { center, radius, start_angle, sweep } => {
                let angle = start_angle + sweep.signum() * s / radius;
                center.add(Point::polar(radius, angle))
            }
        }
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        self.point_at(self.length())
    }
}

/// The edges of Γ and how they are joined.
#[derive(Debug, Clone)]
pub enum Layout {
    /// Full circle, discretised periodically.
    Closed(Edge),
    /// One open edge, discretised at cell midpoints.
    Open(Edge),
    /// Edges joined end-to-start; one point at every junction.
    Chain(Vec<Edge>),
    /// Edges all starting at the origin; one point at the vertex.
    Star(Vec<Edge>),
}

impl Layout {
    pub fn edges(&self) -> Vec<Edge> {
        match self {
            Layout::Closed(e) | Layout::Open(e) => vec![*e],
            Layout::Chain(v) | Layout::Star(v) => v.clone(),
        }
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be positive and finite, got {v}")))
    }
}

impl GraphSpec {
    /// Two-arm star with opening angle `beta` and the given arm lengths.
    pub fn two_arm_star(beta: f64, l1: f64, l2: f64) -> Self {
        GraphSpec::Star { angles: vec![beta], arm_lengths: vec![l1, l2] }
    }

    /// Star with `n` arms of equal length separated by equal angles.
    pub fn regular_star(n: usize, arm_length: f64) -> Self {
        GraphSpec::Star {
            angles: vec![TAU / n as f64; n.saturating_sub(1)],
            arm_lengths: vec![arm_length; n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GraphSpec::Ring { radius, cut_angle } => {
                positive("radius", *radius)?;
                if !(cut_angle.is_finite() && (0.0..TAU).contains(cut_angle)) {
                    return Err(Error::param("cut_angle", format!("must lie in [0, 2π), got {cut_angle}")));
                }
            }
            GraphSpec::Star { angles, arm_lengths } => {
                if angles.is_empty() {
                    return Err(Error::param("angles", "a star needs at least two arms"));
                }
                if arm_lengths.len() != angles.len() + 1 {
                    return Err(Error::param(
                        "arm_lengths",
                        format!("expected {} lengths for {} angles", angles.len() + 1, angles.len()),
                    ));
                }
                for (j, b) in angles.iter().enumerate() {
                    positive(&format!("angles[{j}]"), *b)?;
                }
                for (j, l) in arm_lengths.iter().enumerate() {
                    positive(&format!("arm_lengths[{j}]"), *l)?;
                }
                let closing = TAU - angles.iter().sum::<f64>();
                if closing <= 0.0 {
                    return Err(Error::param(
                        "angles",
                        format!("closing angle β_N = 2π − Σβ_j must be > 0, got {closing}"),
                    ));
                }
            }
            GraphSpec::ZLine { mid_length, bend_angle, arm_length } => {
                positive("mid_length", *mid_length)?;
                positive("arm_length", *arm_length)?;
                if !(bend_angle.is_finite() && *bend_angle > 0.0 && *bend_angle <= PI) {
                    return Err(Error::param("bend_angle", format!("must lie in (0, π], got {bend_angle}")));
                }
            }
            GraphSpec::NearLoop { radius, gap_angle, flare_angle, leg_length } => {
                positive("radius", *radius)?;
                positive("leg_length", *leg_length)?;
                if !(gap_angle.is_finite() && *gap_angle > 0.0 && *gap_angle < TAU) {
                    return Err(Error::param("gap_angle", format!("must lie in (0, 2π), got {gap_angle}")));
                }
                let max_flare = PI - 0.5 * gap_angle;
                if !(flare_angle.is_finite() && *flare_angle >= 0.0 && *flare_angle <= max_flare) {
                    return Err(Error::param(
                        "flare_angle",
                        format!("must lie in [0, π − gap_angle/2] = [0, {max_flare}], got {flare_angle}"),
                    ));
                }
                let clearance = near_loop_min_x(*radius, *gap_angle, *flare_angle, Some(*leg_length));
                if clearance <= 0.0 {
                    return Err(Error::Geometry(format!(
                        "near-loop branches intersect (half-clearance {clearance:.6})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether Γ models a curve with truncated infinite edges, so that
    /// levels above `−γ²/4` belong to the cut-off continuum.
    pub fn has_cutoff_edges(&self) -> bool {
        !matches!(self, GraphSpec::Ring { .. })
    }

    /// A mirror or half-turn mapping the discretised point set onto itself,
    /// if the family has one: the ring and near-loop axes, the bisector of
    /// an equal-armed two-arm star, and the centre of a Z-line.
    pub fn natural_involution(&self) -> Option<Involution> {
        match *self {
            GraphSpec::Ring { cut_angle, .. } => {
                Some(Involution::Reflection { point: Point::ORIGIN, angle: PI - 0.5 * cut_angle })
            }
            GraphSpec::Star { ref angles, ref arm_lengths } => (arm_lengths.len() == 2
                && arm_lengths[0] == arm_lengths[1])
                .then(|| Involution::Reflection { point: Point::ORIGIN, angle: 0.5 * angles[0] }),
            GraphSpec::ZLine { mid_length, bend_angle, .. } => Some(Involution::HalfTurn {
                center: Point::new(-0.5 * mid_length * bend_angle.cos(), 0.5 * mid_length * bend_angle.sin()),
            }),
            GraphSpec::NearLoop { .. } => Some(Involution::Reflection { point: Point::ORIGIN, angle: FRAC_PI_2 }),
        }
    }

    /// Edge decomposition used by [`discretize`].
    pub fn layout(&self) -> Result<Layout> {
        self.validate()?;
        Ok(match *self {
            GraphSpec::Ring { radius, cut_angle } => {
                let arc = Edge::Arc { center: Point::ORIGIN, radius, start_angle: 0.0, sweep: TAU - cut_angle };
                if cut_angle == 0.0 {
                    Layout::Closed(arc)
                } else {
                    Layout::Open(arc)
                }
            }
            GraphSpec::Star { ref angles, ref arm_lengths } => {
                let mut direction = 0.0;
                let mut arms = Vec::with_capacity(arm_lengths.len());
                for (j, &len) in arm_lengths.iter().enumerate() {
                    if j > 0 {
                        direction += angles[j - 1];
                    }
                    arms.push(Edge::Segment { start: Point::ORIGIN, end: Point::polar(len, direction) });
                }
                Layout::Star(arms)
            }
            GraphSpec::ZLine { mid_length, bend_angle, arm_length } => {
                let p1 = Point::ORIGIN;
                let p2 = Point::new(-mid_length * bend_angle.cos(), mid_length * bend_angle.sin());
                Layout::Chain(vec![
                    Edge::Segment { start: Point::new(p1.x - arm_length, p1.y), end: p1 },
                    Edge::Segment { start: p1, end: p2 },
                    Edge::Segment { start: p2, end: Point::new(p2.x + arm_length, p2.y) },
                ])
            }
            GraphSpec::NearLoop { radius, gap_angle, flare_angle, leg_length } => {
                near_loop_edges(radius, gap_angle, flare_angle, leg_length)
            }
        })
    }

    /// Replace one named parameter, for sweeps over geometry families.
    ///
    /// Names are the JSON field names; stars also accept `beta` (first
    /// angle), `arm_length` (all arms) and `arm_length_<j>`.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<GraphSpec> {
        let mut spec = self.clone();
        let unknown = || Error::param("parameter", format!("`{name}` is not a parameter of this geometry"));
        match &mut spec {
            GraphSpec::Ring { radius, cut_angle } => match name {
                "radius" => *radius = value,
                "cut_angle" => *cut_angle = value,
                _ => return Err(unknown()),
            },
            GraphSpec::Star { angles, arm_lengths } => match name {
                "beta" | "angles" => angles[0] = value,
                "arm_length" | "arm_lengths" => arm_lengths.iter_mut().for_each(|l| *l = value),
                _ => {
                    let idx = name
                        .strip_prefix("arm_length_")
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|&j| j < arm_lengths.len())
                        .ok_or_else(unknown)?;
                    arm_lengths[idx] = value;
                }
            },
            GraphSpec::ZLine { mid_length, bend_angle, arm_length } => match name {
                "mid_length" => *mid_length = value,
                "bend_angle" => *bend_angle = value,
                "arm_length" => *arm_length = value,
                _ => return Err(unknown()),
            },
            GraphSpec::NearLoop { radius, gap_angle, flare_angle, leg_length } => match name {
                "radius" => *radius = value,
                "gap_angle" => *gap_angle = value,
                "flare_angle" => *flare_angle = value,
                "leg_length" => *leg_length = value,
                _ => return Err(unknown()),
            },
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Total length of Γ.
    pub fn length(&self) -> Result<f64> {
        Ok(self.layout()?.edges().iter().map(Edge::length).sum())
    }
}

fn near_loop_edges(radius: f64, gap: f64, flare: f64, leg: f64) -> Layout {
    let (s, c) = (0.5 * gap).sin_cos();
    let a = Point::new(radius * s, -radius * c);
    let b = Point::new(-radius * s, -radius * c);
    let right_center = a.scale(2.0);
    let left_center = b.scale(2.0);
    let u_end = FRAC_PI_2 + 0.5 * gap + flare;
    let right_flare_end = right_center.add(Point::polar(radius, u_end));
    let left_flare_end = Point::new(-right_flare_end.x, right_flare_end.y);
    let right_dir = Point::new(-u_end.sin(), u_end.cos());
    let left_dir = Point::new(u_end.sin(), u_end.cos());

    let mut edges = vec![Edge::Segment { start: right_flare_end.add(right_dir.scale(leg)), end: right_flare_end }];
    if flare > 0.0 {
        edges.push(Edge::Arc { center: right_center, radius, start_angle: u_end, sweep: -flare });
    }
    edges.push(Edge::Arc { center: Point::ORIGIN, radius, start_angle: -FRAC_PI_2 + 0.5 * gap, sweep: TAU - gap });
    if flare > 0.0 {
        edges.push(Edge::Arc { center: left_center, radius, start_angle: FRAC_PI_2 - 0.5 * gap, sweep: -flare });
    }
    edges.push(Edge::Segment { start: left_flare_end, end: left_flare_end.add(left_dir.scale(leg)) });
    Layout::Chain(edges)
}

/// Smallest abscissa of the right-hand branch (flare, and leg if given).
/// The curve is mirror symmetric, so twice this is the branch separation.
fn near_loop_min_x(radius: f64, gap: f64, flare: f64, leg: Option<f64>) -> f64 {
    let half = 0.5 * gap;
    let lo = half;
    let hi = half + flare;
    // max of sin on [lo, hi]
    let max_sin = if lo <= FRAC_PI_2 && FRAC_PI_2 <= hi { 1.0 } else { lo.sin().max(hi.sin()) };
    let flare_min = radius * (2.0 * half.sin() - max_sin);
    match leg {
        None => flare_min,
        Some(len) => {
            let end_x = radius * (2.0 * half.sin() - hi.sin());
            // leg direction x-component is -cos(hi)
            let leg_end_x = end_x - len * hi.cos();
            flare_min.min(leg_end_x)
        }
    }
}

/// Bottleneck width Δ of a near-loop: the smallest distance between the
/// two sides of the opening, measured over the loop and its flares.
pub fn bottleneck(spec: &GraphSpec) -> Result<f64> {
    match *spec {
        GraphSpec::NearLoop { radius, gap_angle, flare_angle, .. } => {
            spec.validate()?;
            let delta = 2.0 * near_loop_min_x(radius, gap_angle, flare_angle, None);
            if delta <= 0.0 {
                return Err(Error::Geometry(format!("flares overlap (Δ = {delta})")));
            }
            Ok(delta)
        }
        _ => Err(Error::Geometry("bottleneck is defined for near-loop graphs only".into())),
    }
}

/// Gap angle giving bottleneck width `target` at fixed radius and flare.
pub fn calibrate_gap_angle(radius: f64, flare_angle: f64, target: f64) -> Result<f64> {
    positive("radius", radius)?;
    positive("target", target)?;
    let delta = |gap: f64| 2.0 * near_loop_min_x(radius, gap, flare_angle, None);
    let (mut lo, mut hi) = (1e-9, PI);
    if !(delta(lo) < target && delta(hi) > target) {
        return Err(Error::NoRoot(format!("bottleneck {target} not reachable for radius {radius}")));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if delta(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Point set `Y`, coupling normalisation and bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscretizedGraph {
    pub points: Vec<Point>,
    /// `∫ dm` over the support.
    pub total_length: f64,
    /// `α = 1 / (γ · total_length)`.
    pub alpha: f64,
    pub gamma: f64,
    /// Largest neighbour spacing along any edge.
    pub spacing: f64,
    /// Discretised length of each edge (intervals × spacing).
    pub edge_lengths: Vec<f64>,
    /// Levels above `−γ²/4` belong to the cut-off continuum.
    pub cutoff: bool,
}

impl DiscretizedGraph {
    /// Arbitrary point set with an explicit `α`. The nominal spacing sets
    /// `total_length = |Y| · spacing` so that `|Y|α = 1/(γ · spacing)`.
    pub fn from_points(points: Vec<Point>, alpha: f64, spacing: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::param("points", "need at least one point"));
        }
        positive("alpha", alpha)?;
        positive("spacing", spacing)?;
        let total_length = points.len() as f64 * spacing;
        Ok(DiscretizedGraph {
            gamma: 1.0 / (alpha * total_length),
            points,
            total_length,
            alpha,
            spacing,
            edge_lengths: vec![total_length],
            cutoff: false,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Coupling `|Y|α` entering the point boundary condition.
    pub fn coupling(&self) -> f64 {
        self.points.len() as f64 * self.alpha
    }

    /// Same points, different `α` (keeps `γ` consistent with it).
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        let mut g = self.clone();
        g.alpha = alpha;
        g.gamma = 1.0 / (alpha * g.total_length);
        Ok(g)
    }

    /// Dilate all coordinates by `s` about the origin.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        positive("scale", s)?;
        let mut g = self.clone();
        g.points.iter_mut().for_each(|p| *p = p.scale(s));
        g.total_length *= s;
        g.spacing *= s;
        g.edge_lengths.iter_mut().for_each(|l| *l *= s);
        g.gamma = 1.0 / (g.alpha * g.total_length);
        Ok(g)
    }

    /// `|Y|⁻¹ Σ_y f(y)`.
    pub fn empirical_mean(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.points.iter().map(|&p| f(p)).sum::<f64>() / self.points.len() as f64
    }

    /// Write the point set as CSV with an `x,y` header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y"])?;
        for p in &self.points {
            w.write_record([format!("{:.15e}", p.x), format!("{:.15e}", p.y)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Rigid motion: rotate about the origin, then translate.
pub fn transform(g: &DiscretizedGraph, rotation: f64, translation: (f64, f64)) -> DiscretizedGraph {
    let (s, c) = rotation.sin_cos();
    let mut out = g.clone();
    for p in out.points.iter_mut() {
        *p = Point::new(c * p.x - s * p.y + translation.0, s * p.x + c * p.y + translation.1);
    }
    out
}

fn intervals(length: f64, spacing: f64) -> usize {
    ((length / spacing).round() as usize).max(1)
}

/// Place point interactions on Γ and fix `α = 1/(γ · |Γ|)`.
///
/// Ring: periodic for a full circle, cell midpoints for an open arc.
/// Star: one point at the vertex and `k·h_j` along arm `j` up to its end.
/// Chains: the nodes of a uniform subdivision of each edge, junctions once.
pub fn discretize(spec: &GraphSpec, gamma: f64, resolution: Resolution) -> Result<DiscretizedGraph> {
    positive("gamma", gamma)?;
    let layout = spec.layout()?;
    let edges = layout.edges();
    let shortest = edges.iter().map(Edge::length).fold(f64::INFINITY, f64::min);
    let total_length: f64 = edges.iter().map(Edge::length).sum();
    if !(total_length > 0.0) {
        return Err(Error::Geometry("support has zero length".into()));
    }
    let spacing_for_chain = match resolution {
        Resolution::Count(0) => return Err(Error::param("resolution", "count must be ≥ 1")),
        Resolution::Count(n) => match layout {
            Layout::Closed(_) | Layout::Open(_) | Layout::Star(_) => None,
            Layout::Chain(_) => Some(total_length / n.max(2).saturating_sub(1) as f64),
        },
        Resolution::Spacing(h) => {
            positive("spacing", h)?;
            if h > shortest * (1.0 + 1e-12) {
                return Err(Error::param(
                    "spacing",
                    format!("{h} exceeds the shortest edge length {shortest}"),
                ));
            }
            Some(h)
        }
    };

    let mut points = Vec::new();
    let mut edge_lengths = Vec::with_capacity(edges.len());
    let mut max_spacing: f64 = 0.0;
    match &layout {
        Layout::Closed(edge) | Layout::Open(edge) => {
            let len = edge.length();
            let n = match resolution {
                Resolution::Count(n) => n,
                Resolution::Spacing(h) => intervals(len, h),
            };
            let h = len / n as f64;
            let offset = if matches!(layout, Layout::Closed(_)) { 0.0 } else { 0.5 };
            points.extend((0..n).map(|j| edge.point_at((j as f64 + offset) * h)));
            edge_lengths.push(n as f64 * h);
            max_spacing = h;
        }
        Layout::Star(arms) => {
            points.push(Point::ORIGIN);
            for arm in arms {
                let len = arm.length();
                let m = match resolution {
                    Resolution::Count(n) => n,
                    Resolution::Spacing(h) => intervals(len, h),
                };
                let h = len / m as f64;
                points.extend((1..=m).map(|k| arm.point_at(k as f64 * h)));
                edge_lengths.push(m as f64 * h);
                max_spacing = max_spacing.max(h);
            }
        }
        Layout::Chain(chain) => {
            let target = spacing_for_chain.expect("chain spacing");
            points.push(chain[0].start());
            for edge in chain {
                let len = edge.length();
                let m = intervals(len, target);
                let h = len / m as f64;
                points.extend((1..=m).map(|k| edge.point_at(k as f64 * h)));
                edge_lengths.push(m as f64 * h);
                max_spacing = max_spacing.max(h);
            }
        }
    }

    Ok(DiscretizedGraph {
        points,
        total_length,
        alpha: 1.0 / (gamma * total_length),
        gamma,
        spacing: max_spacing,
        edge_lengths,
        cutoff: spec.has_cutoff_edges(),
    })
}
