use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LatticePoint;

/// Largest side length accepted by [`GridSpec::new`].
pub const MAX_SIDE: u32 = 1 << 20;

/// The grid `{0..=m} x {0..=n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    m: u32,
    n: u32,
}

impl GridSpec {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Grid(format!("sides must be positive, got {m}x{n}")));
        }
        if m > MAX_SIDE || n > MAX_SIDE {
            return Err(Error::Grid(format!("sides above {MAX_SIDE} are not supported")));
        }
        Ok(GridSpec { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn mn(&self) -> u64 {
        u64::from(self.m) * u64::from(self.n)
    }

    pub fn vertex_count(&self) -> u64 {
        (u64::from(self.m) + 1) * (u64::from(self.n) + 1)
    }

    pub fn triangle_count(&self) -> u64 {
        2 * self.mn()
    }

    pub fn edge_count(&self) -> u64 {
        3 * self.mn() + u64::from(self.m) + u64::from(self.n)
    }

    pub fn interior_edge_count(&self) -> u64 {
        3 * self.mn() - u64::from(self.m) - u64::from(self.n)
    }

    pub fn boundary_edge_count(&self) -> u64 {
        2 * (u64::from(self.m) + u64::from(self.n))
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        p.x >= 0 && p.y >= 0 && p.x as u32 <= self.m && p.y as u32 <= self.n
    }

    /// All grid points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (0..=self.n as i32).flat_map(move |y| (0..=self.m as i32).map(move |x| LatticePoint::new(x, y)))
    }

    /// Row-major index of a grid point.
    pub fn point_index(&self, p: LatticePoint) -> usize {
        p.y as usize * (self.m as usize + 1) + p.x as usize
    }

    /// True iff the doubled point lies on the rectangle boundary.
    pub(crate) fn doubled_on_boundary(&self, d: LatticePoint) -> bool {
        d.x == 0 || d.y == 0 || d.x == 2 * self.m as i32 || d.y == 2 * self.n as i32
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let g = GridSpec::new(2, 2).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.triangle_count(), 8);
        assert_eq!(g.edge_count(), 16);
        assert_eq!(g.interior_edge_count(), 8);
        assert_eq!(g.boundary_edge_count(), 8);
        let g = GridSpec::new(3, 3).unwrap();
        assert_eq!(g.interior_edge_count(), 21);
    }

    #[test]
    fn rejects_bad_sides() {
        assert!(GridSpec::new(0, 3).is_err());
        assert!(GridSpec::new(MAX_SIDE + 1, 1).is_err());
    }
}
