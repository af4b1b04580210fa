//! Deterministic force-directed node placement with a legibility gate.
//!
//! Positions live in the unit square. A layout is accepted only when every
//! pair of node centers is at least `2.2 * node_radius` apart; failing
//! layouts retry with `seed + k` for `k = 1..=20` before reporting the
//! offending pair.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Rendering style shared by the layout gate and the renderer. Pixel
/// quantities refer to the fixed 1024-wide canvas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub canvas: f64,
    pub node_radius: f64,
    pub font_size: f64,
    pub edge_width: f64,
    pub arrow_size: f64,
    pub weight_label_offset: f64,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            canvas: 1024.0,
            node_radius: 18.0,
            font_size: 16.0,
            edge_width: 2.0,
            arrow_size: 12.0,
            weight_label_offset: 14.0,
        }
    }
}

impl Style {
    /// Node radius in unit-square coordinates.
    pub fn unit_radius(&self) -> f64 {
        self.node_radius / self.canvas
    }

    /// Minimum admissible center distance in unit coordinates.
    pub fn separation_threshold(&self) -> f64 {
        2.2 * self.unit_radius()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub positions: Vec<(f64, f64)>,
    pub style: Style,
}

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error(
        "legibility gate unmet after {attempts} attempts: nodes {a} and {b} at distance {dist:.4}"
    )]
    Legibility {
        attempts: u32,
        a: usize,
        b: usize,
        dist: f64,
    },
}

const ITERATIONS: usize = 300;
const RETRIES: u32 = 20;
const INITIAL_TEMPERATURE: f64 = 0.1;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

fn fruchterman_reingold(graph: &Graph, seed: u64) -> Vec<(f64, f64)> {
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x1A70_0C7));
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95)))
        .collect();
    let k = 0.8 * (1.0 / n as f64).sqrt();
    for iter in 0..ITERATIONS {
        let temperature =
            INITIAL_TEMPERATURE * (1.0 - iter as f64 / ITERATIONS as f64) + 1e-3;
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = pos[i].0 - pos[j].0;
                let dy = pos[i].1 - pos[j].1;
                let dist = (dx * dx + dy * dy).sqrt().max(1e-9);
                let force = k * k / dist;
                let (ux, uy) = (dx / dist, dy / dist);
                disp[i].0 += ux * force;
                disp[i].1 += uy * force;
                disp[j].0 -= ux * force;
                disp[j].1 -= uy * force;
            }
        }
        for e in graph.edges() {
            let (i, j) = (e.a, e.b);
            let dx = pos[i].0 - pos[j].0;
            let dy = pos[i].1 - pos[j].1;
            let dist = (dx * dx + dy * dy).sqrt().max(1e-9);
            let force = dist * dist / k;
            let (ux, uy) = (dx / dist, dy / dist);
            disp[i].0 -= ux * force;
            disp[i].1 -= uy * force;
            disp[j].0 += ux * force;
            disp[j].1 += uy * force;
        }
        for i in 0..n {
            let (dx, dy) = disp[i];
            let len = (dx * dx + dy * dy).sqrt().max(1e-9);
            let step = len.min(temperature);
            pos[i].0 = (pos[i].0 + dx / len * step).clamp(0.0, 1.0);
            pos[i].1 = (pos[i].1 + dy / len * step).clamp(0.0, 1.0);
        }
    }
    pos
}

/// Rescales positions to fill the margin box; degenerate axes collapse to
/// the center line.
fn rescale(pos: &mut [(f64, f64)], margin: f64) {
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pos.iter() {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let span = 1.0 - 2.0 * margin;
    for p in pos.iter_mut() {
        p.0 = if (max_x - min_x) > 1e-9 {
            margin + (p.0 - min_x) / (max_x - min_x) * span
        } else {
            0.5
        };
        p.1 = if (max_y - min_y) > 1e-9 {
            margin + (p.1 - min_y) / (max_y - min_y) * span
        } else {
            0.5
        };
    }
}

fn closest_pair(pos: &[(f64, f64)]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..pos.len() {
        for j in (i + 1)..pos.len() {
            let dx = pos[i].0 - pos[j].0;
            let dy = pos[i].1 - pos[j].1;
            let dist = (dx * dx + dy * dy).sqrt();
            if best.is_none_or(|(_, _, d)| dist < d) {
                best = Some((i, j, dist));
            }
        }
    }
    best
}

/// Pushes apart pairs closer than the threshold; deterministic because the
/// closest pair is resolved first and ties fall back on index order.
fn separate(pos: &mut [(f64, f64)], threshold: f64, margin: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x5E9A_7A7E));
    for _ in 0..80 {
        let Some((i, j, dist)) = closest_pair(pos) else {
            return;
        };
        if dist >= threshold {
            return;
        }
        let (ux, uy) = if dist > 1e-9 {
            (
                (pos[i].0 - pos[j].0) / dist,
                (pos[i].1 - pos[j].1) / dist,
            )
        } else {
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            (angle.cos(), angle.sin())
        };
        let push = (threshold - dist) / 2.0 + 1e-4;
        pos[i].0 = (pos[i].0 + ux * push).clamp(margin, 1.0 - margin);
        pos[i].1 = (pos[i].1 + uy * push).clamp(margin, 1.0 - margin);
        pos[j].0 = (pos[j].0 - ux * push).clamp(margin, 1.0 - margin);
        pos[j].1 = (pos[j].1 - uy * push).clamp(margin, 1.0 - margin);
    }
}

/// Computes an accepted layout for `graph`, deterministic in
/// `(graph, seed, style)`.
pub fn layout(graph: &Graph, seed: u64) -> Result<Layout, LayoutError> {
    layout_with(graph, seed, Style::default())
}

pub fn layout_with(graph: &Graph, seed: u64, style: Style) -> Result<Layout, LayoutError> {
    let n = graph.node_count();
    if n == 1 {
        return Ok(Layout {
            positions: vec![(0.5, 0.5)],
            style,
        });
    }
    let margin = (style.node_radius + style.edge_width + 12.0) / style.canvas;
    let threshold = style.separation_threshold();
    let mut last_fail = (0usize, 0usize, 0.0f64);
    for k in 0..=RETRIES {
        let attempt_seed = seed.wrapping_add(u64::from(k));
        let mut pos = fruchterman_reingold(graph, attempt_seed);
        rescale(&mut pos, margin);
        separate(&mut pos, threshold, margin, attempt_seed);
        match closest_pair(&pos) {
            Some((a, b, dist)) if dist < threshold => {
                last_fail = (a, b, dist);
            }
            _ => {
                return Ok(Layout {
                    positions: pos,
                    style,
                })
            }
        }
    }
    Err(LayoutError::Legibility {
        attempts: RETRIES + 1,
        a: last_fail.0,
        b: last_fail.1,
        dist: last_fail.2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_centered() {
        let g = Graph::new(false, false, 1, []).unwrap();
        let l = layout(&g, 3).unwrap();
        assert_eq!(l.positions, vec![(0.5, 0.5)]);
    }

    #[test]
    fn layout_is_deterministic() {
        let g = Graph::new(false, false, 5, [(0, 1, None), (1, 2, None), (3, 4, None)]).unwrap();
        let a = layout(&g, 11).unwrap();
        let b = layout(&g, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gate_enforced_on_accepted_layouts() {
        let g = Graph::new(false, false, 8, (0..7).map(|i| (i, i + 1, None))).unwrap();
        let l = layout(&g, 0).unwrap();
        let threshold = l.style.separation_threshold();
        for i in 0..8 {
            for j in (i + 1)..8 {
                let dx = l.positions[i].0 - l.positions[j].0;
                let dy = l.positions[i].1 - l.positions[j].1;
                assert!((dx * dx + dy * dy).sqrt() >= threshold);
            }
        }
    }
}
