use super::diagram::{CrossingDiagram, GaussCode, Visit};
use super::polyline::{cross, dot, norm, Polyline3D};
use super::{BendError, Vec3, TOLERANCE};

/// Orthonormal frame `(u, v, direction)` with `u × v = direction`. Points
/// are viewed from far along `+direction`, so larger depth is nearer the
/// viewer and passes over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub direction: Vec3,
    pub u: Vec3,
    pub v: Vec3,
}

impl Projection {
    pub fn new(direction: Vec3) -> Result<Projection, BendError> {
        let len = norm(direction);
        if !len.is_finite() || len <= TOLERANCE {
            return Err(BendError::InvalidDirection(direction));
        }
        let d = direction.map(|c| c / len);
        let axis = (0..3)
            .min_by(|a, b| d[*a].abs().total_cmp(&d[*b].abs()))
            .unwrap_or(0);
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        let along = dot(e, d);
        let u = [
            e[0] - along * d[0],
            e[1] - along * d[1],
            e[2] - along * d[2],
        ];
        let u = u.map(|c| c / norm(u));
        Ok(Projection {
            direction: d,
            u,
            v: cross(d, u),
        })
    }

    pub fn plane(&self, p: Vec3) -> [f64; 2] {
        [dot(p, self.u), dot(p, self.v)]
    }

    pub fn depth(&self, p: Vec3) -> f64 {
        dot(p, self.direction)
    }
}

/// A transverse self-intersection of the projected curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Order of first encounter along the curve, starting at 0.
    pub label: usize,
    pub over: usize,
    pub under: usize,
    /// Position on the over segment, in (0, 1).
    pub over_param: f64,
    pub under_param: f64,
    /// +1 or -1: sign of `t_over × t_under` in the projection plane.
    pub handedness: i8,
    pub point: [f64; 2],
}

struct Seg {
    a: [f64; 2],
    b: [f64; 2],
    depth: [f64; 2],
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Seg {
    fn dir(&self) -> [f64; 2] {
        [self.b[0] - self.a[0], self.b[1] - self.a[1]]
    }

    fn length(&self) -> f64 {
        len2(self.dir())
    }

    fn depth_at(&self, t: f64) -> f64 {
        self.depth[0] + t * (self.depth[1] - self.depth[0])
    }
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn len2(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

fn point_segment_distance(p: [f64; 2], s: &Seg) -> f64 {
    let d = s.dir();
    let w = [p[0] - s.a[0], p[1] - s.a[1]];
    let t = ((w[0] * d[0] + w[1] * d[1]) / (d[0] * d[0] + d[1] * d[1])).clamp(0.0, 1.0);
    len2([w[0] - t * d[0], w[1] - t * d[1]])
}

fn degenerate(message: String) -> BendError {
    BendError::DegenerateProjection(message)
}

struct Hit {
    first: usize,
    second: usize,
    t: f64,
    s: f64,
    point: [f64; 2],
}

/// Intersection of two non-adjacent projected segments, or an error when
/// they touch rather than cross.
fn intersect(i: usize, si: &Seg, j: usize, sj: &Seg) -> Result<Option<Hit>, BendError> {
    for (p, other, owner) in [(si.a, sj, i), (si.b, sj, i), (sj.a, si, j), (sj.b, si, j)] {
        if point_segment_distance(p, other) <= TOLERANCE {
            return Err(degenerate(format!(
                "an endpoint of segment {owner} touches segments {i}/{j} in projection"
            )));
        }
    }
    let r = si.dir();
    let w = sj.dir();
    let denom = cross2(r, w);
    if denom.abs() <= TOLERANCE * si.length() * sj.length() {
        return Ok(None);
    }
    let qp = [sj.a[0] - si.a[0], sj.a[1] - si.a[1]];
    let t = cross2(qp, w) / denom;
    let s = cross2(qp, r) / denom;
    if t <= 0.0 || t >= 1.0 || s <= 0.0 || s >= 1.0 {
        return Ok(None);
    }
    Ok(Some(Hit {
        first: i,
        second: j,
        t,
        s,
        point: [si.a[0] + t * r[0], si.a[1] + t * r[1]],
    }))
}

/// Adjacent segments share a vertex; they only misbehave when the second
/// folds straight back over the first.
fn check_adjacent(i: usize, si: &Seg, j: usize, sj: &Seg) -> Result<(), BendError> {
    let (r, w) = (si.dir(), sj.dir());
    let parallel = cross2(r, w).abs() <= TOLERANCE * si.length() * sj.length();
    if parallel && r[0] * w[0] + r[1] * w[1] < 0.0 {
        return Err(degenerate(format!(
            "segments {i} and {j} overlap in projection"
        )));
    }
    Ok(())
}

/// Projects `polyline` along `direction` and finds every crossing of the
/// planar diagram. Labels and the Gauss sequence follow the curve from its
/// first vertex.
pub fn project_and_cross(
    polyline: &Polyline3D,
    direction: Vec3,
) -> Result<CrossingDiagram, BendError> {
    let proj = Projection::new(direction)?;
    let n = polyline.segment_count();
    let mut segs = Vec::with_capacity(n);
    for i in 0..n {
        let (p, q) = polyline.segment(i);
        let (a, b) = (proj.plane(p), proj.plane(q));
        let seg = Seg {
            a,
            b,
            depth: [proj.depth(p), proj.depth(q)],
            lo: [a[0].min(b[0]), a[1].min(b[1])],
            hi: [a[0].max(b[0]), a[1].max(b[1])],
        };
        if seg.length() <= TOLERANCE {
            return Err(degenerate(format!(
                "segment {i} is parallel to the projection direction"
            )));
        }
        segs.push(seg);
    }

    // sweep over bounding boxes sorted by their left edge
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| segs[*a].lo[0].total_cmp(&segs[*b].lo[0]).then(a.cmp(b)));
    let mut hits = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if segs[j].lo[0] > segs[i].hi[0] + TOLERANCE {
                break;
            }
            if segs[j].lo[1] > segs[i].hi[1] + TOLERANCE
                || segs[i].lo[1] > segs[j].hi[1] + TOLERANCE
            {
                continue;
            }
            let (a, b) = (i.min(j), i.max(j));
            if polyline.adjacent(a, b) {
                check_adjacent(a, &segs[a], b, &segs[b])?;
            } else if let Some(hit) = intersect(a, &segs[a], b, &segs[b])? {
                hits.push(hit);
            }
        }
    }

    for (x, h) in hits.iter().enumerate() {
        if let Some(g) = hits[x + 1..]
            .iter()
            .find(|g| len2([g.point[0] - h.point[0], g.point[1] - h.point[1]]) <= TOLERANCE)
        {
            return Err(degenerate(format!(
                "crossings of segments {}/{} and {}/{} coincide",
                h.first, h.second, g.first, g.second
            )));
        }
    }

    // one event per visit, ordered along the curve
    let mut events: Vec<(usize, f64, usize)> = Vec::with_capacity(hits.len() * 2);
    for (x, h) in hits.iter().enumerate() {
        events.push((h.first, h.t, x));
        events.push((h.second, h.s, x));
    }
    events.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut label_of = vec![usize::MAX; hits.len()];
    let mut crossings: Vec<Crossing> = Vec::with_capacity(hits.len());
    for &(_, _, x) in &events {
        if label_of[x] != usize::MAX {
            continue;
        }
        let h = &hits[x];
        let (zi, zj) = (segs[h.first].depth_at(h.t), segs[h.second].depth_at(h.s));
        if (zi - zj).abs() <= TOLERANCE {
            return Err(degenerate(format!(
                "segments {} and {} intersect in space",
                h.first, h.second
            )));
        }
        let (over, under, op, up) = if zi > zj {
            (h.first, h.second, h.t, h.s)
        } else {
            (h.second, h.first, h.s, h.t)
        };
        let handedness = if cross2(segs[over].dir(), segs[under].dir()) > 0.0 {
            1
        } else {
            -1
        };
        label_of[x] = crossings.len();
        crossings.push(Crossing {
            label: crossings.len(),
            over,
            under,
            over_param: op,
            under_param: up,
            handedness,
            point: h.point,
        });
    }

    let visits = events
        .iter()
        .map(|&(seg, _, x)| {
            let c = &crossings[label_of[x]];
            Visit {
                label: c.label,
                over: c.over == seg,
                sign: c.handedness,
            }
        })
        .collect();
    Ok(CrossingDiagram {
        crossings,
        gauss: GaussCode {
            visits,
            closed: polyline.is_closed(),
        },
    })
}
