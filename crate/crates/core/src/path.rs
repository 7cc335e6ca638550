//! Desired paths made of straight lines and circular arcs.
//!
//! Cross-track error follows `y_e = -(x - x_p)·sin γ_p + (y - y_p)·cos γ_p`: it is
//! positive when the vehicle lies on the `γ_p + π/2` side of the path tangent.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;
use crate::error::{ConfigError, GeometryError};
use crate::Point;

/// Turn direction of an arc as seen from above in the North-East frame.
///
/// `Counterclockwise` arcs have decreasing azimuth around the centre and tangent
/// `γ_c - π/2`; `Clockwise` arcs have increasing azimuth and tangent `γ_c + π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcDirection {
    Clockwise,
    Counterclockwise,
}

impl ArcDirection {
    /// `+1` for counterclockwise, `-1` for clockwise. Cross-track error on an arc is
    /// `sign·(d - r)`.
    pub fn sign(self) -> f64 {
        match self {
            ArcDirection::Counterclockwise => 1.0,
            ArcDirection::Clockwise => -1.0,
        }
    }

    /// Path tangent for a vehicle at azimuth `gamma_c` from the arc centre.
    pub fn tangent(self, gamma_c: f64) -> f64 {
        wrap_angle(gamma_c - self.sign() * FRAC_PI_2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathSegment {
    Line {
        start: Point,
        end: Point,
    },
    Arc {
        center: Point,
        radius: f64,
        /// Azimuth of the start point around the centre.
        start_angle: f64,
        end_angle: f64,
        direction: ArcDirection,
    },
}

impl PathSegment {
    pub fn line(start: Point, end: Point) -> Self {
        PathSegment::Line { start, end }
    }

    pub fn arc(center: Point, radius: f64, start_angle: f64, end_angle: f64, direction: ArcDirection) -> Self {
        PathSegment::Arc {
            center,
            radius,
            start_angle,
            end_angle,
            direction,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match *self {
            PathSegment::Line { start, end } => {
                if !(start.iter().chain(end.iter()).all(|c| c.is_finite())) {
                    return Err(ConfigError::invalid("path.segments", "line endpoints must be finite"));
                }
                if start == end {
                    return Err(ConfigError::invalid("path.segments", "line start and end coincide"));
                }
            }
            PathSegment::Arc {
                center,
                radius,
                start_angle,
                end_angle,
                ..
            } => {
                if !(center.iter().all(|c| c.is_finite()) && start_angle.is_finite() && end_angle.is_finite()) {
                    return Err(ConfigError::invalid("path.segments", "arc geometry must be finite"));
                }
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(ConfigError::invalid("path.segments", "arc radius must be > 0"));
                }
            }
        }
        Ok(())
    }

    /// Swept angle of an arc in `(0, 2π]`; a coincident start and end is a full circle.
    pub fn angular_extent(&self) -> Option<f64> {
        match *self {
            PathSegment::Line { .. } => None,
            PathSegment::Arc {
                start_angle,
                end_angle,
                direction,
                ..
            } => {
                let extent = (direction.sign() * (start_angle - end_angle)).rem_euclid(TAU);
                Some(if extent == 0.0 { TAU } else { extent })
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            PathSegment::Line { start, end } => distance(start, end),
            PathSegment::Arc { radius, .. } => radius * self.angular_extent().unwrap_or(0.0),
        }
    }

    /// Point and tangent at arc length `s` from the segment start, clamped to the segment.
    pub fn point_at(&self, s: f64) -> (Point, f64) {
        let s = s.clamp(0.0, self.length());
        match *self {
            PathSegment::Line { start, end } => {
                let len = distance(start, end);
                let dir = [(end[0] - start[0]) / len, (end[1] - start[1]) / len];
                ([start[0] + s * dir[0], start[1] + s * dir[1]], dir[1].atan2(dir[0]))
            }
            PathSegment::Arc {
                center,
                radius,
                start_angle,
                direction,
                ..
            } => {
                let azimuth = start_angle - direction.sign() * s / radius;
                (on_circle(center, radius, azimuth), direction.tangent(azimuth))
            }
        }
    }

    pub fn start_point(&self) -> Point {
        self.point_at(0.0).0
    }

    pub fn end_point(&self) -> Point {
        match *self {
            PathSegment::Line { end, .. } => end,
            PathSegment::Arc {
                center,
                radius,
                end_angle,
                ..
            } => on_circle(center, radius, end_angle),
        }
    }

    pub fn radius(&self) -> TurnRadius {
        match *self {
            PathSegment::Line { .. } => TurnRadius::Straight,
            PathSegment::Arc { radius, direction, .. } => TurnRadius::Turn { radius, direction },
        }
    }
}

/// Closest point on the active segment and the quantities guidance needs there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResult {
    pub point_p: Point,
    pub tangent_gamma_p: f64,
    pub cross_track_ye: f64,
    /// Distance to the arc centre; `None` on lines.
    pub dist_to_center_d: Option<f64>,
    /// Azimuth of the vehicle around the arc centre; `None` on lines.
    pub azimuth_gamma_c: Option<f64>,
    pub segment_index: usize,
    /// Arc length from the segment start to `point_p`. Negative before an arc start.
    pub along_track: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TurnRadius {
    Straight,
    Turn { radius: f64, direction: ArcDirection },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Advance {
    pub segment: usize,
    /// The vehicle reached the end of the final segment.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    segments: Vec<PathSegment>,
    switching_radius: f64,
}

impl Path {
    pub fn new(segments: Vec<PathSegment>, switching_radius: f64, continuity_tolerance: f64) -> Result<Self, ConfigError> {
        if segments.is_empty() {
            return Err(ConfigError::invalid("path.segments", "path must contain at least one segment"));
        }
        if !(switching_radius > 0.0 && switching_radius.is_finite()) {
            return Err(ConfigError::invalid("path.switching_radius", "must be > 0"));
        }
        if !(continuity_tolerance >= 0.0) {
            return Err(ConfigError::invalid("path.continuity_tolerance", "must be >= 0"));
        }
        for seg in &segments {
            seg.validate()?;
        }
        for (i, pair) in segments.windows(2).enumerate() {
            let gap = distance(pair[0].end_point(), pair[1].start_point());
            if gap > continuity_tolerance {
                return Err(ConfigError::invalid(
                    "path.segments",
                    format!("segments {} and {} are {gap} m apart", i, i + 1),
                ));
            }
        }
        Ok(Self {
            segments,
            switching_radius,
        })
    }

    /// Builds lines through `waypoints`, optionally rounding interior corner `i` with
    /// an arc of radius `corner_radii[i]` (0 keeps the corner sharp).
    pub fn from_waypoints(
        waypoints: &[Point],
        corner_radii: Option<&[f64]>,
        switching_radius: f64,
        continuity_tolerance: f64,
    ) -> Result<Self, ConfigError> {
        if waypoints.len() < 2 {
            return Err(ConfigError::invalid("path.waypoints", "need at least two waypoints"));
        }
        let corners = waypoints.len() - 2;
        let radii: Vec<f64> = match corner_radii {
            None => vec![0.0; corners],
            Some(r) if r.len() == corners => r.to_vec(),
            Some(r) => {
                return Err(ConfigError::invalid(
                    "path.corner_radii",
                    format!("expected {corners} radii (one per interior waypoint), got {}", r.len()),
                ))
            }
        };
        if radii.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(ConfigError::invalid("path.corner_radii", "radii must be finite and >= 0"));
        }

        let mut segments = Vec::new();
        let mut leg_start = waypoints[0];
        let mut consumed_start = 0.0;
        for i in 1..waypoints.len() {
            let corner = waypoints[i];
            let leg_len = distance(waypoints[i - 1], corner);
            let fillet = if i + 1 < waypoints.len() && radii[i - 1] > 0.0 {
                fillet(waypoints[i - 1], corner, waypoints[i + 1], radii[i - 1])?
            } else {
                None
            };
            let trim = fillet.map_or(0.0, |f| f.tangent_length);
            if consumed_start + trim > leg_len {
                return Err(ConfigError::invalid(
                    "path.corner_radii",
                    format!("corner radius at waypoint {i} does not fit on the adjacent legs"),
                ));
            }
            let leg_end = match fillet {
                Some(f) => f.entry,
                None => corner,
            };
            if distance(leg_start, leg_end) > 0.0 {
                segments.push(PathSegment::line(leg_start, leg_end));
            }
            if let Some(f) = fillet {
                segments.push(f.arc);
                leg_start = f.exit;
                consumed_start = f.tangent_length;
            } else {
                leg_start = corner;
                consumed_start = 0.0;
            }
        }
        Self::new(segments, switching_radius, continuity_tolerance)
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn switching_radius(&self) -> f64 {
        self.switching_radius
    }

    pub fn segment(&self, index: usize) -> Result<&PathSegment, GeometryError> {
        self.segments.get(index).ok_or(GeometryError::SegmentOutOfRange {
            index,
            len: self.segments.len(),
        })
    }

    /// Closest point to `pos` on the active segment.
    pub fn project(&self, pos: Point, active: usize) -> Result<ProjectionResult, GeometryError> {
        match *self.segment(active)? {
            PathSegment::Line { start, end } => {
                let len = distance(start, end);
                let dir = [(end[0] - start[0]) / len, (end[1] - start[1]) / len];
                let along = ((pos[0] - start[0]) * dir[0] + (pos[1] - start[1]) * dir[1]).clamp(0.0, len);
                let point_p = [start[0] + along * dir[0], start[1] + along * dir[1]];
                let gamma_p = dir[1].atan2(dir[0]);
                Ok(ProjectionResult {
                    point_p,
                    tangent_gamma_p: gamma_p,
                    cross_track_ye: cross_track_error(pos, point_p, gamma_p),
                    dist_to_center_d: None,
                    azimuth_gamma_c: None,
                    segment_index: active,
                    along_track: along,
                })
            }
            PathSegment::Arc {
                center,
                radius,
                start_angle,
                direction,
                ..
            } => {
                let (dn, de) = (pos[0] - center[0], pos[1] - center[1]);
                let d = dn.hypot(de);
                if d == 0.0 {
                    return Err(GeometryError::DegenerateProjection { segment: active });
                }
                let gamma_c = de.atan2(dn);
                let point_p = on_circle(center, radius, gamma_c);
                let gamma_p = direction.tangent(gamma_c);
                let extent = self.segments[active].angular_extent().unwrap_or(TAU);
                let mut swept = (direction.sign() * (start_angle - gamma_c)).rem_euclid(TAU);
                if swept > extent + 0.5 * (TAU - extent) {
                    swept -= TAU;
                }
                Ok(ProjectionResult {
                    point_p,
                    tangent_gamma_p: gamma_p,
                    cross_track_ye: cross_track_error(pos, point_p, gamma_p),
                    dist_to_center_d: Some(d),
                    azimuth_gamma_c: Some(gamma_c),
                    segment_index: active,
                    along_track: swept * radius,
                })
            }
        }
    }

    /// Acceptance-circle switching around the active segment's endpoint. A vehicle that
    /// misses the circle still advances once its projection has passed the segment end.
    pub fn advance_segment(&self, pos: Point, active: usize) -> Result<Advance, GeometryError> {
        let seg = self.segment(active)?;
        let reached = distance(pos, seg.end_point()) <= self.switching_radius
            || self
                .project(pos, active)
                .is_ok_and(|p| p.along_track >= seg.length());
        let last = active + 1 == self.segments.len();
        Ok(match (reached, last) {
            (true, false) => Advance {
                segment: active + 1,
                complete: false,
            },
            (reached, last) => Advance {
                segment: active,
                complete: reached && last,
            },
        })
    }

    /// Point and tangent `distance` meters further along the path from
    /// `along_track` on segment `active`, stopping at the end of the path.
    pub fn sample_ahead(&self, active: usize, along_track: f64, distance: f64) -> Result<(Point, f64), GeometryError> {
        let mut index = active;
        let mut s = along_track.max(0.0) + distance;
        loop {
            let seg = self.segment(index)?;
            let len = seg.length();
            if s <= len || index + 1 == self.segments.len() {
                return Ok(seg.point_at(s));
            }
            s -= len;
            index += 1;
        }
    }

    /// Turn radius estimated from the projection point and a point `lookahead` meters ahead.
    pub fn estimate_radius(&self, projection: &ProjectionResult, lookahead: f64) -> Result<TurnRadius, GeometryError> {
        let (p_next, gamma_next) = self.sample_ahead(projection.segment_index, projection.along_track, lookahead)?;
        Ok(turn_radius(projection.point_p, p_next, projection.tangent_gamma_p, gamma_next))
    }
}

pub fn cross_track_error(pos: Point, point_p: Point, gamma_p: f64) -> f64 {
    let (sin, cos) = gamma_p.sin_cos();
    -(pos[0] - point_p[0]) * sin + (pos[1] - point_p[1]) * cos
}

/// Radius of the circle through `p` and `p_next` with the given tangents:
/// `r = |p_next - p| / (2·sin(Δγ/2))`, `Δγ` wrapped to `(-π, π]`. A positive `Δγ`
/// (increasing heading) is a clockwise turn.
pub fn turn_radius(p: Point, p_next: Point, gamma_p: f64, gamma_p_next: f64) -> TurnRadius {
    let dgamma = wrap_angle(gamma_p_next - gamma_p);
    if dgamma.abs() <= 1e-12 {
        return TurnRadius::Straight;
    }
    let radius = distance(p, p_next) / (2.0 * (0.5 * dgamma).sin());
    TurnRadius::Turn {
        radius: radius.abs(),
        direction: if dgamma > 0.0 {
            ArcDirection::Clockwise
        } else {
            ArcDirection::Counterclockwise
        },
    }
}

#[derive(Debug, Clone, Copy)]
struct Fillet {
    arc: PathSegment,
    entry: Point,
    exit: Point,
    tangent_length: f64,
}

fn fillet(prev: Point, corner: Point, next: Point, radius: f64) -> Result<Option<Fillet>, ConfigError> {
    let h_in = (corner[1] - prev[1]).atan2(corner[0] - prev[0]);
    let h_out = (next[1] - corner[1]).atan2(next[0] - corner[0]);
    let turn = wrap_angle(h_out - h_in);
    if turn.abs() <= 1e-12 {
        return Ok(None);
    }
    if turn.abs() >= std::f64::consts::PI - 1e-9 {
        return Err(ConfigError::invalid(
            "path.corner_radii",
            "cannot round a reversing corner; use explicit arc segments",
        ));
    }
    let direction = if turn > 0.0 {
        ArcDirection::Clockwise
    } else {
        ArcDirection::Counterclockwise
    };
    let tangent_length = radius * (0.5 * turn.abs()).tan();
    let entry = [corner[0] - tangent_length * h_in.cos(), corner[1] - tangent_length * h_in.sin()];
    let exit = [corner[0] + tangent_length * h_out.cos(), corner[1] + tangent_length * h_out.sin()];
    let to_center = h_in - direction.sign() * FRAC_PI_2;
    let center = [entry[0] + radius * to_center.cos(), entry[1] + radius * to_center.sin()];
    let start_angle = (entry[1] - center[1]).atan2(entry[0] - center[0]);
    let end_angle = (exit[1] - center[1]).atan2(exit[0] - center[0]);
    Ok(Some(Fillet {
        arc: PathSegment::arc(center, radius, start_angle, end_angle, direction),
        entry,
        exit,
        tangent_length,
    }))
}

fn on_circle(center: Point, radius: f64, azimuth: f64) -> Point {
    let (sin, cos) = azimuth.sin_cos();
    [center[0] + radius * cos, center[1] + radius * sin]
}

fn distance(a: Point, b: Point) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

/// Path description as it appears in a scenario file: either `segments`, or
/// `waypoints` with optional `corner_radii`. A `path` section given in a file
/// replaces the default path as a whole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathConfig {
    #[serde(default = "default_switching_radius")]
    pub switching_radius: f64,
    #[serde(default = "default_continuity_tolerance")]
    pub continuity_tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waypoints: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corner_radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<PathSegment>>,
}

fn default_switching_radius() -> f64 {
    1.0
}

fn default_continuity_tolerance() -> f64 {
    1e-6
}

impl PathConfig {
    /// Three 100 m legs joined by two 15 m semicircles, one turning each way.
    pub fn lawn_mower() -> Self {
        use std::f64::consts::FRAC_PI_2;
        Self {
            segments: Some(vec![
                PathSegment::line([0.0, 0.0], [100.0, 0.0]),
                PathSegment::arc([100.0, 15.0], 15.0, -FRAC_PI_2, FRAC_PI_2, ArcDirection::Clockwise),
                PathSegment::line([100.0, 30.0], [0.0, 30.0]),
                PathSegment::arc([0.0, 45.0], 15.0, -FRAC_PI_2, FRAC_PI_2, ArcDirection::Counterclockwise),
                PathSegment::line([0.0, 60.0], [100.0, 60.0]),
            ]),
            ..Self::empty()
        }
    }

    pub fn straight(length: f64) -> Self {
        Self {
            segments: Some(vec![PathSegment::line([0.0, 0.0], [length, 0.0])]),
            ..Self::empty()
        }
    }

    fn empty() -> Self {
        Self {
            switching_radius: default_switching_radius(),
            continuity_tolerance: default_continuity_tolerance(),
            waypoints: None,
            corner_radii: None,
            segments: None,
        }
    }

    pub fn build(&self) -> Result<Path, ConfigError> {
        match (&self.segments, &self.waypoints) {
            (Some(segments), None) => {
                if self.corner_radii.is_some() {
                    return Err(ConfigError::invalid("path.corner_radii", "only valid together with waypoints"));
                }
                Path::new(segments.clone(), self.switching_radius, self.continuity_tolerance)
            }
            (None, Some(waypoints)) => Path::from_waypoints(
                waypoints,
                self.corner_radii.as_deref(),
                self.switching_radius,
                self.continuity_tolerance,
            ),
            _ => Err(ConfigError::invalid(
                "path",
                "specify exactly one of `segments` or `waypoints`",
            )),
        }
    }
}

impl Default for PathConfig {
    fn default() -> Self {
        Self::lawn_mower()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn single(seg: PathSegment) -> Path {
        Path::new(vec![seg], 1.0, 1e-9).unwrap()
    }

    #[test]
    fn cross_track_examples() {
        assert_eq!(cross_track_error([3.0, 4.0], [3.0, 4.0], 0.7), 0.0);
        assert_eq!(cross_track_error([0.0, 5.0], [0.0, 0.0], 0.0), 5.0);
        assert_relative_eq!(cross_track_error([5.0, 0.0], [0.0, 0.0], FRAC_PI_2), -5.0, max_relative = 1e-12);
    }

    #[test]
    fn project_examples() {
        let arc = single(PathSegment::arc([0.0, 0.0], 10.0, 0.5, -1.0, ArcDirection::Counterclockwise));
        let p = arc.project([15.0, 0.0], 0).unwrap();
        assert_eq!(p.dist_to_center_d, Some(15.0));
        assert_eq!(p.azimuth_gamma_c, Some(0.0));
        assert_relative_eq!(p.cross_track_ye, 5.0, max_relative = 1e-12);
        assert_relative_eq!(p.tangent_gamma_p, -FRAC_PI_2);

        let line = single(PathSegment::line([0.0, 0.0], [10.0, 0.0]));
        let p = line.project([5.0, 3.0], 0).unwrap();
        assert_eq!(p.point_p, [5.0, 0.0]);
        assert_eq!(p.tangent_gamma_p, 0.0);
        assert_eq!(p.cross_track_ye, 3.0);
        assert_eq!(p.dist_to_center_d, None);

        let p = line.project([-2.0, 1.0], 0).unwrap();
        assert_eq!(p.point_p, [0.0, 0.0]);
    }

    #[test]
    fn clockwise_arc_flips_sign() {
        let arc = single(PathSegment::arc([0.0, 0.0], 10.0, -1.0, 0.5, ArcDirection::Clockwise));
        let p = arc.project([15.0, 0.0], 0).unwrap();
        assert_relative_eq!(p.cross_track_ye, -5.0, max_relative = 1e-12);
        assert_relative_eq!(p.tangent_gamma_p, FRAC_PI_2);
        assert_relative_eq!(p.along_track, 10.0, max_relative = 1e-12);
    }

    #[test]
    fn arc_center_is_degenerate() {
        let arc = single(PathSegment::arc([1.0, 2.0], 10.0, 0.0, 1.0, ArcDirection::Clockwise));
        assert_eq!(
            arc.project([1.0, 2.0], 0),
            Err(GeometryError::DegenerateProjection { segment: 0 })
        );
        assert!(matches!(arc.project([0.0, 0.0], 3), Err(GeometryError::SegmentOutOfRange { .. })));
    }

    #[test]
    fn turn_radius_examples() {
        match turn_radius([0.0, 0.0], [10.0, 10.0], 0.0, FRAC_PI_2) {
            TurnRadius::Turn { radius, direction } => {
                assert_relative_eq!(radius, 10.0, max_relative = 1e-9);
                assert_eq!(direction, ArcDirection::Clockwise);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(turn_radius([0.0, 0.0], [5.0, 0.0], 0.3, 0.3), TurnRadius::Straight);
        match turn_radius([0.0, 0.0], [0.0, 20.0], 0.0, PI) {
            TurnRadius::Turn { radius, .. } => assert_relative_eq!(radius, 10.0, max_relative = 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn advance_examples() {
        let path = Path::new(
            vec![
                PathSegment::line([0.0, 0.0], [10.0, 0.0]),
                PathSegment::line([10.0, 0.0], [10.0, 10.0]),
            ],
            1.0,
            1e-9,
        )
        .unwrap();
        assert_eq!(path.advance_segment([10.0, 0.0], 0).unwrap(), Advance { segment: 1, complete: false });
        assert_eq!(path.advance_segment([3.0, 0.0], 0).unwrap(), Advance { segment: 0, complete: false });
        assert_eq!(path.advance_segment([10.0, 10.0], 1).unwrap(), Advance { segment: 1, complete: true });
        // Missed the acceptance circle but went past the end.
        assert_eq!(path.advance_segment([12.0, -3.0], 0).unwrap(), Advance { segment: 1, complete: false });
        assert_eq!(path.advance_segment([9.0, -3.0], 0).unwrap(), Advance { segment: 0, complete: false });
    }

    #[test]
    fn rejects_invalid_paths() {
        assert!(Path::new(vec![], 1.0, 1e-6).is_err());
        assert!(Path::new(vec![PathSegment::line([1.0, 1.0], [1.0, 1.0])], 1.0, 1e-6).is_err());
        assert!(Path::new(
            vec![PathSegment::arc([0.0, 0.0], 0.0, 0.0, 1.0, ArcDirection::Clockwise)],
            1.0,
            1e-6
        )
        .is_err());
        let gap = vec![
            PathSegment::line([0.0, 0.0], [10.0, 0.0]),
            PathSegment::line([10.5, 0.0], [20.0, 0.0]),
        ];
        assert!(Path::new(gap.clone(), 1.0, 1e-3).is_err());
        assert!(Path::new(gap, 1.0, 1.0).is_ok());
    }

    #[test]
    fn arc_extent() {
        let full = PathSegment::arc([0.0, 0.0], 2.0, 1.0, 1.0, ArcDirection::Clockwise);
        assert_eq!(full.angular_extent(), Some(TAU));
        let half = PathSegment::arc([0.0, 0.0], 2.0, -FRAC_PI_2, FRAC_PI_2, ArcDirection::Counterclockwise);
        assert_relative_eq!(half.angular_extent().unwrap(), PI);
        assert_relative_eq!(half.length(), 2.0 * PI);
    }

    #[test]
    fn lawn_mower_is_continuous() {
        let path = PathConfig::lawn_mower().build().unwrap();
        assert_eq!(path.len(), 5);
        let (_, tangent) = path.segments()[1].point_at(0.0);
        assert!(tangent.abs() < 1e-12);
        let (_, tangent) = path.segments()[3].point_at(0.0);
        assert_relative_eq!(wrap_angle(tangent), PI, epsilon = 1e-12);
    }

    #[test]
    fn waypoints_with_fillet() {
        let path = Path::from_waypoints(
            &[[0.0, 0.0], [50.0, 0.0], [50.0, 50.0]],
            Some(&[10.0]),
            2.0,
            1e-9,
        )
        .unwrap();
        assert_eq!(path.len(), 3);
        match path.segments()[1] {
            PathSegment::Arc { center, radius, direction, .. } => {
                assert_relative_eq!(center[0], 40.0, epsilon = 1e-9);
                assert_relative_eq!(center[1], 10.0, epsilon = 1e-9);
                assert_eq!(radius, 10.0);
                assert_eq!(direction, ArcDirection::Clockwise);
            }
            other => panic!("{other:?}"),
        }
        let sharp = Path::from_waypoints(&[[0.0, 0.0], [50.0, 0.0], [50.0, 50.0]], None, 2.0, 1e-9).unwrap();
        assert_eq!(sharp.len(), 2);
        assert!(Path::from_waypoints(&[[0.0, 0.0], [5.0, 0.0], [5.0, 5.0]], Some(&[10.0]), 2.0, 1e-9).is_err());
    }

    #[test]
    fn lookahead_radius_on_arc() {
        let path = Path::new(
            vec![PathSegment::arc([0.0, 0.0], 20.0, 0.0, -PI, ArcDirection::Counterclockwise)],
            1.0,
            1e-9,
        )
        .unwrap();
        let proj = path.project([25.0 * FRAC_PI_4.cos(), -25.0 * FRAC_PI_4.sin()], 0).unwrap();
        match path.estimate_radius(&proj, 5.0).unwrap() {
            TurnRadius::Turn { radius, direction } => {
                assert_relative_eq!(radius, 20.0, max_relative = 1e-9);
                assert_eq!(direction, ArcDirection::Counterclockwise);
            }
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn cross_track_translation_rotation(
            px in -50.0f64..50.0, py in -50.0f64..50.0,
            qx in -50.0f64..50.0, qy in -50.0f64..50.0,
            gamma in -PI..PI, ox in -100.0f64..100.0, oy in -100.0f64..100.0, rot in -PI..PI,
        ) {
            let base = cross_track_error([px, py], [qx, qy], gamma);
            let shifted = cross_track_error([px + ox, py + oy], [qx + ox, qy + oy], gamma);
            prop_assert!((base - shifted).abs() < 1e-9);
            let (s, c) = rot.sin_cos();
            let rotate = |p: [f64; 2]| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
            let rotated = cross_track_error(rotate([px, py]), rotate([qx, qy]), gamma + rot);
            prop_assert!((base - rotated).abs() < 1e-9);
        }

        #[test]
        fn on_line_has_zero_error(t in -100.0f64..100.0, gamma in -PI..PI, qx in -10.0f64..10.0) {
            let pos = [qx + t * gamma.cos(), t * gamma.sin()];
            prop_assert!(cross_track_error(pos, [qx, 0.0], gamma).abs() <= 1e-12 * (1.0 + t.abs()));
        }

        #[test]
        fn arc_consistency(
            cx in -20.0f64..20.0, cy in -20.0f64..20.0, r in 1.0f64..50.0,
            d in 0.01f64..100.0, az in -PI..PI, ccw in any::<bool>(),
        ) {
            let direction = if ccw { ArcDirection::Counterclockwise } else { ArcDirection::Clockwise };
            let path = single(PathSegment::arc([cx, cy], r, 0.0, 1.0, direction));
            let pos = [cx + d * az.cos(), cy + d * az.sin()];
            let p = path.project(pos, 0).unwrap();
            let d_meas = p.dist_to_center_d.unwrap();
            let ye = cross_track_error(pos, p.point_p, p.tangent_gamma_p);
            prop_assert!((ye - direction.sign() * (d_meas - r)).abs() <= 1e-6 * d_meas.max(1.0));
        }

        #[test]
        fn radius_from_circle_samples(r in 0.5f64..500.0, a0 in -PI..PI, sweep in 0.01f64..3.0, ccw in any::<bool>()) {
            let dir = if ccw { ArcDirection::Counterclockwise } else { ArcDirection::Clockwise };
            let a1 = a0 - dir.sign() * sweep;
            let p0 = on_circle([3.0, -7.0], r, a0);
            let p1 = on_circle([3.0, -7.0], r, a1);
            match turn_radius(p0, p1, dir.tangent(a0), dir.tangent(a1)) {
                TurnRadius::Turn { radius, direction } => {
                    prop_assert!(((radius - r) / r).abs() < 1e-9);
                    prop_assert_eq!(direction, dir);
                }
                TurnRadius::Straight => prop_assert!(false),
            }
        }
    }
}
