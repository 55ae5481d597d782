use serde::{Deserialize, Serialize};

use super::MAX_DIM;

/// A lattice site; coordinates beyond the box dimension are zero.
pub type Site = [i32; MAX_DIM];

/// An oriented `k`-cell: base site, direction set (bitmask over axes) and sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub base: Site,
    pub dirs: u8,
    pub sign: i8,
}

impl Cell {
    pub fn new(base: Site, axes: &[usize]) -> Self {
        let dirs = axes.iter().fold(0u8, |m, &a| m | (1 << a));
        Cell { base, dirs, sign: 1 }
    }

    pub fn site(base: Site) -> Self {
        Cell { base, dirs: 0, sign: 1 }
    }

    pub fn edge(base: Site, axis: usize) -> Self {
        Cell { base, dirs: 1 << axis, sign: 1 }
    }

    /// Positively oriented plaquette `dx_a ^ dx_b` (axes in either order).
    pub fn plaquette(base: Site, a: usize, b: usize) -> Self {
        Cell { base, dirs: (1 << a) | (1 << b), sign: 1 }
    }

    pub fn degree(&self) -> usize {
        self.dirs.count_ones() as usize
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    pub fn positive(&self) -> Cell {
        Cell { sign: 1, ..*self }
    }

    pub fn neg(&self) -> Cell {
        Cell { sign: -self.sign, ..*self }
    }

    pub fn with_sign(&self, sign: i8) -> Cell {
        Cell { sign, ..*self }
    }

    /// Axes in increasing order.
    pub fn axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..8).filter(move |a| self.dirs & (1 << a) != 0)
    }

    /// For an edge: its tail and head sites.
    pub fn endpoints(&self) -> (Site, Site) {
        let axis = self.dirs.trailing_zeros() as usize;
        let mut head = self.base;
        head[axis] += 1;
        if self.sign > 0 {
            (self.base, head)
        } else {
            (head, self.base)
        }
    }

    /// Signed faces. For `I = i_0 < ... < i_k` the face dropping `i_t`
    /// appears as `+(-1)^t (x + e_{i_t}, I \ i_t)` and `-(-1)^t (x, I \ i_t)`.
    pub fn boundary(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(2 * self.degree());
        for (t, i) in self.axes().enumerate() {
            let parity: i8 = if t % 2 == 0 { 1 } else { -1 };
            let dirs = self.dirs & !(1 << i);
            let mut up = self.base;
            up[i] += 1;
            out.push(Cell { base: up, dirs, sign: parity * self.sign });
            out.push(Cell { base: self.base, dirs, sign: -parity * self.sign });
        }
        out
    }
}
