//! Inputs shared by the benchmarks.

use std::f64::consts::TAU;

use tdom_core::bend::Polyline3D;

/// Closed Lissajous knot sampled at `n` points; crossings grow roughly
/// linearly with the frequencies, not with `n`.
pub fn lissajous(n: usize) -> Polyline3D {
    let vertices = (0..n)
        .map(|k| {
            let t = TAU * (k as f64 + 0.5) / n as f64;
            [
                (3.0 * t + 0.7).cos(),
                (5.0 * t + 0.31).cos(),
                (7.0 * t + 0.2).cos(),
            ]
        })
        .collect();
    Polyline3D::new(vertices, true).expect("distinct samples")
}
