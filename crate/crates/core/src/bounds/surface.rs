use std::io::Write;

use serde::Serialize;

use super::{max_holevo, Bound, ChannelStats};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub p01: f64,
    pub p10: f64,
    pub value: f64,
}

/// Region-formula maxima on an `n × n` grid over `[0, 0.5]²`, `p01` slow.
pub fn surface_grid(which: Bound, n: usize) -> Result<Vec<SurfacePoint>> {
    if n < 2 {
        return Err(Error::Config(format!("surface grid needs at least 2 points per axis, got {n}")));
    }
    let at = |i: usize| i as f64 * 0.5 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (p01, p10) = (at(i), at(j));
            let stats = ChannelStats::new(p01, p10)?;
            out.push(SurfacePoint {
                p01,
                p10,
                value: max_holevo(stats, which).value,
            });
        }
    }
    Ok(out)
}

/// CSV with header `p01,p10,value`; numbers in shortest round-trip form.
pub fn write_surface_csv<W: Write>(points: &[SurfacePoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "p01,p10,value")?;
    for p in points {
        writeln!(out, "{},{},{}", p.p01, p.p10, p.value)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corners_and_plateaus() {
        for which in [Bound::Be, Bound::Ae] {
            let grid = surface_grid(which, 3).unwrap();
            assert_eq!(grid.len(), 9);
            let last = grid.last().unwrap();
            assert_eq!((last.p01, last.p10, last.value), (0.5, 0.5, 0.0));
            assert_eq!(grid[0].value, 1.0);
        }
        let grid = surface_grid(Bound::Be, 21).unwrap();
        assert!(grid
            .iter()
            .filter(|p| p.p01 < 0.25 && p.p10 < 0.25)
            .all(|p| p.value == 1.0));
        let grid = surface_grid(Bound::Ae, 21).unwrap();
        assert!(grid.iter().filter(|p| p.p01 + p.p10 < 0.5).all(|p| p.value == 1.0));
    }

    #[test]
    fn csv_layout() {
        let grid = surface_grid(Bound::Be, 2).unwrap();
        let mut buf = Vec::new();
        write_surface_csv(&grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "p01,p10,value");
        assert_eq!(lines[1], "0,0,1");
        assert_eq!(lines[4], "0.5,0.5,0");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn needs_two_points() {
        assert!(surface_grid(Bound::Ae, 1).is_err());
    }
}
