use std::fmt;

use super::{BendError, Vec3, TOLERANCE};

/// A 1D object as a chain of points in meters. Closure of a closed curve is
/// implicit: the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline3D {
    vertices: Vec<Vec3>,
    closed: bool,
}

impl Polyline3D {
    pub fn new(vertices: Vec<Vec3>, closed: bool) -> Result<Polyline3D, BendError> {
        let min = if closed { 3 } else { 2 };
        if vertices.len() < min {
            return Err(BendError::InvalidPolyline(format!(
                "{} polyline needs at least {min} vertices, found {}",
                if closed { "closed" } else { "open" },
                vertices.len()
            )));
        }
        if let Some(bad) = vertices.iter().flatten().position(|c| !c.is_finite()) {
            return Err(BendError::InvalidPolyline(format!(
                "vertex {} has a non-finite coordinate",
                bad / 3
            )));
        }
        for (i, pair) in vertices.windows(2).enumerate() {
            if distance(pair[0], pair[1]) <= TOLERANCE {
                return Err(BendError::InvalidPolyline(format!(
                    "vertices {i} and {} coincide",
                    i + 1
                )));
            }
        }
        if closed && distance(vertices[0], vertices[vertices.len() - 1]) <= TOLERANCE {
            return Err(BendError::InvalidPolyline(
                "closed polyline repeats its first vertex; closure is implicit".to_string(),
            ));
        }
        Ok(Polyline3D { vertices, closed })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    pub fn segment(&self, i: usize) -> (Vec3, Vec3) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    /// Whether segments `i` and `j` share a vertex.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let (a, b) = (i.min(j), i.max(j));
        b == a + 1 || (self.closed && a == 0 && b == self.segment_count() - 1)
    }

    /// Open and every vertex within tolerance of one line.
    pub fn is_straight(&self) -> bool {
        if self.closed {
            return false;
        }
        let origin = self.vertices[0];
        let far = self
            .vertices
            .iter()
            .copied()
            .max_by(|a, b| distance(origin, *a).total_cmp(&distance(origin, *b)))
            .unwrap_or(origin);
        let axis = sub(far, origin);
        let len = norm(axis);
        self.vertices
            .iter()
            .all(|p| norm(cross(axis, sub(*p, origin))) / len <= TOLERANCE)
    }

    pub fn map(&self, f: impl Fn(Vec3) -> Vec3) -> Polyline3D {
        Polyline3D {
            vertices: self.vertices.iter().map(|p| f(*p)).collect(),
            closed: self.closed,
        }
    }

    /// Parses one `x y z` triple per line. A `closed` line marks the curve
    /// closed; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Polyline3D, BendError> {
        let mut vertices = Vec::new();
        let mut closed = false;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "closed" {
                closed = true;
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
            match parsed {
                Ok(v) if v.len() == 3 => vertices.push([v[0], v[1], v[2]]),
                _ => {
                    return Err(BendError::Parse {
                        line: no + 1,
                        message: format!("expected `x y z` or `closed`, found `{line}`"),
                    })
                }
            }
        }
        Polyline3D::new(vertices, closed)
    }
}

impl fmt::Display for Polyline3D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for [x, y, z] in &self.vertices {
            writeln!(f, "{x} {y} {z}")?;
        }
        if self.closed {
            writeln!(f, "closed")?;
        }
        Ok(())
    }
}

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn distance(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}
