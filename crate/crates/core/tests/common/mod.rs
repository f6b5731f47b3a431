#![allow(dead_code)]

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use tdom_core::bend::{ClothState, Keypoint, Polyline3D, Vec3};
use tdom_core::taxonomy::*;

// ---- random datasets ----

fn arb_level() -> impl Strategy<Value = BendLevel> {
    prop_oneof![Just(BendLevel::None), (0u32..6).prop_map(BendLevel::Level)]
}

pub fn arb_code() -> impl Strategy<Value = ActionCode> {
    let motion = (
        prop::sample::select(MotionTag::ALL),
        prop::sample::select(MotionTag::ALL),
    );
    let grasp = (
        prop::sample::select(GraspTag::ALL),
        prop::sample::select(GraspTag::ALL),
    );
    let agent = (
        prop::sample::select(AgentContactTag::ALL),
        prop::sample::select(AgentContactTag::ALL),
    );
    let sliding = (
        prop::sample::select(SlidingTag::ALL),
        prop::sample::select(SlidingTag::ALL),
        prop::sample::select(SlidingTag::ALL),
    );
    let deformation = prop::sample::subsequence(Deformation::ALL.to_vec(), 0..=4)
        .prop_map(DeformationSet::from_members);
    (
        motion,
        grasp,
        prop::sample::select(EnvContactTag::ALL),
        agent,
        sliding,
        deformation,
        arb_level(),
        arb_level(),
    )
        .prop_map(
            |(m, g, env, a, s, deformation, structured, unstructured)| ActionCode {
                motion: PerArm::new(m.0, m.1),
                grasp: PerArm::new(g.0, g.1),
                env,
                agent: PerArm::new(a.0, a.1),
                sliding: SlidingSlots {
                    env: s.0,
                    left: s.1,
                    right: s.2,
                },
                deformation,
                structured,
                unstructured,
            },
        )
}

/// Free text with characters that need quoting or escaping.
fn arb_text() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9 ()#|:\"\\\\_.+-]{0,15}"
}

fn arb_task(index: usize) -> impl Strategy<Value = Task> {
    let id = "[A-Za-z][A-Za-z0-9_]{0,3}".prop_map(move |base| format!("{base}{index}"));
    (
        id,
        arb_text(),
        prop_oneof![Just(String::new()), arb_text()],
        prop::sample::select(ObjectDim::ALL.to_vec()),
        prop::collection::vec((arb_text(), arb_code()), 1..6),
    )
        .prop_map(|(id, name, object, object_dim, rows)| {
            let actions = rows
                .into_iter()
                .enumerate()
                .map(|(n, (verb, code))| Action {
                    id: format!("{id}-{}", n + 1),
                    verb,
                    code,
                })
                .collect();
            Task {
                name,
                id,
                object,
                object_dim,
                actions,
            }
        })
}

pub fn arb_dataset() -> impl Strategy<Value = Dataset> {
    let version = prop_oneof![
        3 => Just(Version::default()),
        1 => (1u32..4, 0u32..10).prop_map(|(major, minor)| Version { major, minor }),
    ];
    (version, 1usize..5)
        .prop_flat_map(|(version, n)| {
            let tasks: Vec<_> = (0..n).map(arb_task).collect();
            (Just(version), tasks)
        })
        .prop_map(|(version, tasks)| Dataset { version, tasks })
}

/// Deterministic samples of a strategy, for use outside `proptest!`.
pub fn samples<S: Strategy>(strategy: S, count: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..count)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy").current())
        .collect()
}

// ---- curves ----

/// 24-vertex (2,3) torus knot. The half-step phase keeps crossings off
/// vertices.
pub fn trefoil() -> Polyline3D {
    let vertices = (0..24)
        .map(|k| {
            let t = 2.0 * PI * (k as f64 + 0.5) / 24.0;
            let r = 2.0 + (3.0 * t).cos();
            [r * (2.0 * t).cos(), r * (2.0 * t).sin(), (3.0 * t).sin()]
        })
        .collect();
    Polyline3D::new(vertices, true).unwrap()
}

/// Open rope that crosses itself once.
pub fn single_loop() -> Polyline3D {
    Polyline3D::new(
        vec![
            [0.0, 0.0, 0.0],
            [2.0, 0.0, 0.0],
            [2.0, 1.0, 0.01],
            [0.0, 1.0, 0.01],
            [1.0, -0.5, 0.02],
        ],
        false,
    )
    .unwrap()
}

pub fn arb_polyline() -> impl Strategy<Value = Polyline3D> {
    (
        prop::collection::vec(prop::array::uniform3(-1.0f64..1.0), 5..=50),
        any::<bool>(),
    )
        .prop_map(|(vertices, closed)| {
            Polyline3D::new(vertices, closed).expect("random vertices are distinct")
        })
}

pub fn arb_direction() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("non-zero", |d| d.iter().map(|c| c * c).sum::<f64>() > 0.01)
}

// ---- brute-force crossing oracle ----

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCrossing {
    pub over: usize,
    pub under: usize,
    pub over_param: f64,
    pub under_param: f64,
    pub handedness: i8,
}

fn det3(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Every pair of non-adjacent segments, solving `p + t r + h d = q + s w`
/// in 3D. Positive `h` puts segment `j` further along `d`, so it passes
/// over.
pub fn oracle_crossings(polyline: &Polyline3D, direction: Vec3) -> Vec<OracleCrossing> {
    let n = polyline.segment_count();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if polyline.adjacent(i, j) {
                continue;
            }
            let (p, p1) = polyline.segment(i);
            let (q, q1) = polyline.segment(j);
            let r = [p1[0] - p[0], p1[1] - p[1], p1[2] - p[2]];
            let w = [q1[0] - q[0], q1[1] - q[1], q1[2] - q[2]];
            let b = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
            // t r - s w + h d = b
            let negw = [-w[0], -w[1], -w[2]];
            let det = det3(r, negw, direction);
            if det == 0.0 {
                continue;
            }
            let t = det3(b, negw, direction) / det;
            let s = det3(r, b, direction) / det;
            let h = det3(r, negw, b) / det;
            if !(t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0) {
                continue;
            }
            let (over, under, op, up, to, tu) = if h > 0.0 {
                (j, i, s, t, w, r)
            } else {
                (i, j, t, s, r, w)
            };
            let handedness = if det3(to, tu, direction) > 0.0 { 1 } else { -1 };
            out.push(OracleCrossing {
                over,
                under,
                over_param: op,
                under_param: up,
                handedness,
            });
        }
    }
    out
}

// ---- rigid motions ----

/// Rotation by `angle` about the axis through the origin along `axis`.
pub fn rotate(p: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let k = axis.map(|c| c / len);
    let (sin, cos) = angle.sin_cos();
    let kxp = [
        k[1] * p[2] - k[2] * p[1],
        k[2] * p[0] - k[0] * p[2],
        k[0] * p[1] - k[1] * p[0],
    ];
    let kdp = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
    [0, 1, 2].map(|i| p[i] * cos + kxp[i] * sin + k[i] * kdp * (1.0 - cos))
}

// ---- cloth replays ----

fn cloth(keypoints: &[(&str, bool)], gfolds: u32, wrinkled: bool, transition: bool) -> ClothState {
    ClothState {
        keypoints: keypoints
            .iter()
            .map(|(name, accessible)| Keypoint {
                name: name.to_string(),
                accessible: *accessible,
            })
            .collect(),
        gfolds,
        wrinkled,
        in_transition_bend: transition,
    }
}

const CORNERS: [&str; 4] = ["corner-a", "corner-b", "corner-c", "corner-d"];

fn corners(accessible: usize) -> Vec<(&'static str, bool)> {
    CORNERS
        .iter()
        .enumerate()
        .map(|(i, c)| (*c, i < accessible))
        .collect()
}

/// Object state during each action of the 2D tasks with bending changes.
pub fn cloth_replays() -> Vec<(&'static str, ClothState)> {
    let glove_cuff = |open: bool| vec![("cuff-front", true), ("cuff-back", open)];
    vec![
        // edge tracing: two corners held, the traced edge straightens
        ("T4-1", cloth(&corners(2), 0, true, false)),
        ("T4-2", cloth(&corners(2), 0, true, true)),
        ("T4-3", cloth(&corners(3), 0, true, true)),
        // flattening: crumpled with two visible corners, then one g-fold
        ("T6-1", cloth(&corners(2), 0, true, false)),
        ("T6-2", cloth(&corners(2), 0, true, false)),
        ("T6-3", cloth(&corners(2), 0, true, false)),
        ("T6-4", cloth(&corners(3), 1, true, false)),
        ("T6-5", cloth(&corners(3), 1, true, false)),
        // gown: shoulders and hem corners
        ("T7-1", cloth(&corners(2), 0, true, false)),
        ("T7-2", cloth(&corners(3), 0, true, false)),
        // bag: every rim point reachable, creased until opened flat
        ("T8-1", cloth(&corners(4), 0, true, false)),
        ("T8-2", cloth(&corners(4), 0, true, false)),
        ("T8-3", cloth(&corners(4), 0, false, false)),
        ("T8-4", cloth(&corners(4), 0, false, false)),
        // glove: back of the cuff hidden until the second hand reaches it
        ("T9-1", cloth(&glove_cuff(false), 0, true, false)),
        ("T9-2", cloth(&glove_cuff(false), 0, true, false)),
        ("T9-3", cloth(&glove_cuff(false), 0, true, false)),
        ("T9-4", cloth(&glove_cuff(false), 0, true, false)),
        ("T9-5", cloth(&glove_cuff(false), 0, true, false)),
        ("T9-6", cloth(&glove_cuff(false), 0, true, false)),
        ("T9-7", cloth(&glove_cuff(true), 0, true, false)),
        ("T9-8", cloth(&glove_cuff(true), 0, true, false)),
        ("T9-9", cloth(&glove_cuff(true), 0, true, false)),
        ("T9-10", cloth(&glove_cuff(true), 0, false, true)),
    ]
}
