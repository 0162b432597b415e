use serde::Serialize;

use super::{bounds_from_pq, holevo_bounds, pq_from_stats, Bound, ChannelStats, EveParams};
use crate::error::{Error, Result};

/// Threshold on each anticorrelation probability separating the regions of `max I_B:E`.
const REGION_EDGE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximum {
    pub value: f64,
    pub argmax: EveParams,
}

/// `max_{c,d} I_B:E`, four regions split at `P01 = 0.25` and `P10 = 0.25`.
pub fn max_holevo_be(stats: ChannelStats) -> Maximum {
    let (p01, p10) = (stats.p01(), stats.p10());
    let c = if p01 >= REGION_EDGE {
        1.0
    } else {
        2.0 * p01 / (1.0 - 2.0 * p01)
    };
    let d = if p10 >= REGION_EDGE {
        -1.0
    } else {
        2.0 * p10 / (2.0 * p10 - 1.0)
    };
    let argmax = EveParams::new(c, d).expect("region argmax lies in [-1, 1]");
    let value = if p01 < REGION_EDGE && p10 < REGION_EDGE {
        1.0
    } else {
        holevo_bounds(stats, argmax).expect("region argmax is physical").i_be
    };
    Maximum { value, argmax }
}

/// `max_{c,d} I_A:E`, two regions split at `P01 + P10 = 0.5`.
pub fn max_holevo_ae(stats: ChannelStats) -> Maximum {
    let (p01, p10) = (stats.p01(), stats.p10());
    if p01 + p10 >= 2.0 * REGION_EDGE {
        let argmax = EveParams { c: 1.0, d: -1.0 };
        let value = holevo_bounds(stats, argmax).expect("c=1, d=-1 is physical").i_ae;
        Maximum { value, argmax }
    } else {
        // Any point with p = 0 reaches 1 bit; with c = 1 that fixes d.
        let d = 1.0 - 4.0 * p01 / (1.0 - 2.0 * p10);
        let argmax = EveParams::new(1.0, d).expect("d in range below the P01 + P10 = 0.5 line");
        Maximum { value: 1.0, argmax }
    }
}

pub fn max_holevo(stats: ChannelStats, which: Bound) -> Maximum {
    match which {
        Bound::Be => max_holevo_be(stats),
        Bound::Ae => max_holevo_ae(stats),
    }
}

/// Step of the coarse pass in [`max_holevo_grid`].
pub const COARSE_STEP: f64 = 0.01;
/// Half-width, in coarse steps, of the window refined at the fine step.
const FINE_WINDOW: f64 = 2.0;
/// Coarse cells refined at the fine step.
const FINE_CANDIDATES: usize = 4;
const GOLDEN_ROUNDS: usize = 3;
const GOLDEN_ITERS: usize = 40;

fn objective(stats: ChannelStats, which: Bound, c: f64, d: f64) -> Option<f64> {
    let (p, q) = pq_from_stats(stats, EveParams { c, d });
    bounds_from_pq(p, q).ok().map(|r| which.pick(&r))
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round().max(0.0) as usize;
    let mut xs: Vec<f64> = (0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect();
    if let Some(last) = xs.last_mut() {
        *last = hi;
    }
    xs
}

#[derive(Debug, Clone, Copy)]
struct Point {
    c: f64,
    d: f64,
    value: f64,
}

/// Every grid point in the box, best first.
fn scan(stats: ChannelStats, which: Bound, c_range: (f64, f64), d_range: (f64, f64), step: f64) -> Vec<Point> {
    let cs = axis(c_range.0, c_range.1, step);
    let ds = axis(d_range.0, d_range.1, step);
    let mut points = Vec::with_capacity(cs.len() * ds.len());
    for &c in &cs {
        for &d in &ds {
            if let Some(value) = objective(stats, which, c, d) {
                points.push(Point { c, d, value });
            }
        }
    }
    points
}

fn best(points: &[Point]) -> Option<Point> {
    points.iter().copied().max_by(|a, b| a.value.total_cmp(&b.value))
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coordinate-wise golden-section search inside the grid cell around `start`.
fn refine(stats: ChannelStats, which: Bound, start: Point, step: f64) -> Point {
    let f = |c: f64, d: f64| objective(stats, which, c, d).unwrap_or(f64::NEG_INFINITY);
    let c_box = ((start.c - step).max(-1.0), (start.c + step).min(1.0));
    let d_box = ((start.d - step).max(-1.0), (start.d + step).min(1.0));
    let mut current = start;
    for _ in 0..GOLDEN_ROUNDS {
        let (c, value) = golden_max(|c| f(c, current.d), c_box.0, c_box.1);
        if value > current.value {
            current = Point { c, value, ..current };
        }
        let (d, value) = golden_max(|d| f(current.c, d), d_box.0, d_box.1);
        if value > current.value {
            current = Point { d, value, ..current };
        }
    }
    current
}

fn check_step(step: f64) -> Result<()> {
    if step > 0.0 && step <= 0.1 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            value: step,
            domain: "(0, 0.1] for the grid step",
        })
    }
}

fn into_maximum(p: Point) -> Maximum {
    Maximum {
        value: p.value,
        argmax: EveParams { c: p.c, d: p.d },
    }
}

/// Brute-force maximum over `(c, d) ∈ [-1, 1]²`, independent of the region formulas.
///
/// Steps finer than [`COARSE_STEP`] run in two stages: an exhaustive pass at
/// the coarse step locates the best cells, then each of the few best is
/// scanned exhaustively at `step` over a window of two coarse cells either
/// side. A golden-section pass then refines the best fine point. Points whose
/// spectrum leaves `[0, 1]` are skipped.
pub fn max_holevo_grid(stats: ChannelStats, which: Bound, step: f64) -> Result<Maximum> {
    check_step(step)?;
    if step >= COARSE_STEP {
        return max_holevo_grid_exhaustive(stats, which, step);
    }
    let mut coarse = scan(stats, which, (-1.0, 1.0), (-1.0, 1.0), COARSE_STEP);
    coarse.sort_by(|a, b| b.value.total_cmp(&a.value));
    let window = FINE_WINDOW * COARSE_STEP;
    let mut best_fine: Option<Point> = None;
    for seed in coarse.iter().take(FINE_CANDIDATES) {
        let c_range = ((seed.c - window).max(-1.0), (seed.c + window).min(1.0));
        let d_range = ((seed.d - window).max(-1.0), (seed.d + window).min(1.0));
        let fine = best(&scan(stats, which, c_range, d_range, step));
        best_fine = match (best_fine, fine) {
            (Some(a), Some(b)) => Some(if b.value > a.value { b } else { a }),
            (a, b) => a.or(b),
        };
    }
    let start = best_fine.ok_or(Error::InvalidParameters { value: f64::NAN })?;
    Ok(into_maximum(refine(stats, which, start, step)))
}

/// Single-stage exhaustive grid at `step` plus golden-section refinement.
pub fn max_holevo_grid_exhaustive(stats: ChannelStats, which: Bound, step: f64) -> Result<Maximum> {
    check_step(step)?;
    let start = best(&scan(stats, which, (-1.0, 1.0), (-1.0, 1.0), step))
        .ok_or(Error::InvalidParameters { value: f64::NAN })?;
    Ok(into_maximum(refine(stats, which, start, step)))
}
