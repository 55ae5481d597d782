//! Cubical cell complex of a box in `Z^m` and G-valued discrete forms on it.
//!
//! Cells are addressed by a dense slot index
//! `site_rank * C(m, k) + combo_rank`, sites in lexicographic order with the
//! last axis varying fastest and direction sets in lexicographic order.
//! Slots whose cell sticks out of the box exist in the index space but are
//! never valid.

mod cell;
mod form;
mod order;

pub use cell::{Cell, Site};
pub use form::Form;
pub use order::{
    irreducible_components, is_irreducible, leq, minimal_vortex_center, splits, vortices,
};

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;

/// A rectangular box `[lo_0, hi_0] x ... x [lo_{m-1}, hi_{m-1}]` in `Z^m`
/// together with its slot indexing.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "BoxBounds", into = "BoxBounds")]
pub struct Lattice {
    dim: usize,
    lo: Site,
    hi: Site,
    len: [usize; MAX_DIM],
    stride: [usize; MAX_DIM],
    n_sites: usize,
    /// Direction masks of each degree, in lexicographic order of the sorted axis lists.
    combos: Vec<Vec<u8>>,
    /// Rank of a direction mask within its degree.
    combo_rank: [u8; 1 << MAX_DIM],
}

/// Plain serialized form of a box.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoxBounds {
    pub lo: Vec<i32>,
    pub hi: Vec<i32>,
}

impl TryFrom<BoxBounds> for Lattice {
    type Error = LatticeError;
    fn try_from(b: BoxBounds) -> Result<Self, Self::Error> {
        Lattice::new(&b.lo, &b.hi)
    }
}

impl From<Lattice> for BoxBounds {
    fn from(l: Lattice) -> Self {
        BoxBounds {
            lo: l.lo[..l.dim].to_vec(),
            hi: l.hi[..l.dim].to_vec(),
        }
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.lo == other.lo && self.hi == other.hi
    }
}

impl Eq for Lattice {}

impl Lattice {
    /// Box with the given per-axis bounds (inclusive).
    pub fn new(lo: &[i32], hi: &[i32]) -> Result<Self, LatticeError> {
        let dim = lo.len();
        if !(2..=MAX_DIM).contains(&dim) || hi.len() != dim {
            return Err(LatticeError::Dimension(dim));
        }
        let mut l = [0; MAX_DIM];
        let mut h = [0; MAX_DIM];
        let mut len = [1usize; MAX_DIM];
        for j in 0..dim {
            if hi[j] < lo[j] {
                return Err(LatticeError::EmptyInterval { axis: j, lo: lo[j], hi: hi[j] });
            }
            l[j] = lo[j];
            h[j] = hi[j];
            len[j] = (hi[j] - lo[j]) as usize + 1;
        }
        let mut stride = [0usize; MAX_DIM];
        let mut acc = 1usize;
        for j in (0..dim).rev() {
            stride[j] = acc;
            acc *= len[j];
        }
        let mut combos: Vec<Vec<u8>> = vec![Vec::new(); dim + 1];
        let mut masks: Vec<u8> = (0u8..(1u8 << dim)).collect();
        masks.sort_by_key(|&m| {
            let axes: Vec<u8> = (0..dim as u8).filter(|a| m & (1 << a) != 0).collect();
            (m.count_ones(), axes)
        });
        let mut combo_rank = [0u8; 1 << MAX_DIM];
        for m in masks {
            let k = m.count_ones() as usize;
            combo_rank[m as usize] = combos[k].len() as u8;
            combos[k].push(m);
        }
        Ok(Lattice { dim, lo: l, hi: h, len, stride, n_sites: acc, combos, combo_rank })
    }

    /// The box `B_N = [-N, N]^m`.
    pub fn cube(dim: usize, radius: i32) -> Result<Self, LatticeError> {
        if radius < 0 {
            return Err(LatticeError::EmptyInterval { axis: 0, lo: -radius, hi: radius });
        }
        Self::new(&vec![-radius; dim], &vec![radius; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> &[i32] {
        &self.lo[..self.dim]
    }

    pub fn hi(&self) -> &[i32] {
        &self.hi[..self.dim]
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Number of direction sets of size `k`.
    pub fn n_combos(&self, k: usize) -> usize {
        self.combos[k].len()
    }

    /// Size of the slot index space for `k`-cells (valid and invalid slots).
    pub fn n_slots(&self, k: usize) -> usize {
        self.n_sites * self.n_combos(k)
    }

    pub fn contains_site(&self, x: &Site) -> bool {
        (0..self.dim).all(|j| self.lo[j] <= x[j] && x[j] <= self.hi[j])
    }

    /// A cell is in the box iff all of its corners are.
    pub fn contains(&self, c: &Cell) -> bool {
        (0..self.dim).all(|j| {
            let top = if c.dirs & (1 << j) != 0 { self.hi[j] - 1 } else { self.hi[j] };
            self.lo[j] <= c.base[j] && c.base[j] <= top
        }) && c.dirs >> self.dim == 0
    }

    pub fn site_rank(&self, x: &Site) -> usize {
        (0..self.dim)
            .map(|j| (x[j] - self.lo[j]) as usize * self.stride[j])
            .sum()
    }

    pub fn site_at(&self, rank: usize) -> Site {
        let mut x = [0; MAX_DIM];
        for (j, xj) in x.iter_mut().enumerate().take(self.dim) {
            *xj = self.lo[j] + ((rank / self.stride[j]) % self.len[j]) as i32;
        }
        x
    }

    /// Slot index of a cell, ignoring orientation; `None` outside the box.
    pub fn index(&self, c: &Cell) -> Option<usize> {
        if !self.contains(c) {
            return None;
        }
        Some(self.slot_unchecked(c))
    }

    fn slot_unchecked(&self, c: &Cell) -> usize {
        let k = c.dirs.count_ones() as usize;
        self.site_rank(&c.base) * self.n_combos(k) + self.combo_rank[c.dirs as usize] as usize
    }

    /// The positively oriented cell stored at `slot`, if that slot is valid.
    pub fn cell_at(&self, k: usize, slot: usize) -> Option<Cell> {
        let nc = self.n_combos(k);
        let c = Cell {
            base: self.site_at(slot / nc),
            dirs: self.combos[k][slot % nc],
            sign: 1,
        };
        self.contains(&c).then_some(c)
    }

    /// Every positively oriented `k`-cell of the box, in slot order.
    pub fn cells(&self, k: usize) -> Result<Vec<Cell>, LatticeError> {
        if k > self.dim {
            return Err(LatticeError::Degree { k, dim: self.dim });
        }
        Ok((0..self.n_slots(k)).filter_map(|s| self.cell_at(k, s)).collect())
    }

    /// Valid slot indices of degree `k`, ascending.
    pub fn slots(&self, k: usize) -> Vec<usize> {
        (0..self.n_slots(k)).filter(|&s| self.cell_at(k, s).is_some()).collect()
    }

    /// Oriented `(k+1)`-cells of the box whose boundary contains `c`.
    pub fn coboundary(&self, c: &Cell) -> Vec<Cell> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            if c.dirs & (1 << i) != 0 {
                continue;
            }
            let dirs = c.dirs | (1 << i);
            // position of axis i in the enlarged sorted direction list
            let t = (c.dirs & ((1u8 << i) - 1)).count_ones();
            let parity: i8 = if t % 2 == 0 { 1 } else { -1 };
            let upper = Cell { base: c.base, dirs, sign: -parity * c.sign };
            if self.contains(&upper) {
                out.push(upper);
            }
            let mut base = c.base;
            base[i] -= 1;
            let lower = Cell { base, dirs, sign: parity * c.sign };
            if self.contains(&lower) {
                out.push(lower);
            }
        }
        out
    }

    /// Distance from a site to the complement of the box, in lattice steps.
    pub fn margin(&self, x: &Site) -> i32 {
        (0..self.dim)
            .map(|j| (x[j] - self.lo[j]).min(self.hi[j] - x[j]))
            .min()
            .unwrap_or(0)
    }

    /// Largest side length.
    pub fn linear_size(&self) -> usize {
        self.len[..self.dim].iter().copied().max().unwrap_or(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_closed_forms() {
        let sq = Lattice::new(&[0, 0], &[1, 1]).unwrap();
        assert_eq!(sq.cells(1).unwrap().len(), 4);
        assert_eq!(sq.cells(2).unwrap().len(), 1);
        let b = Lattice::cube(4, 1).unwrap();
        assert_eq!(b.cells(1).unwrap().len(), 216);
        assert_eq!(b.cells(2).unwrap().len(), 216);
        assert_eq!(b.cells(0).unwrap().len(), 81);
        assert!(b.cells(5).is_err());
    }

    #[test]
    fn slot_roundtrip() {
        let b = Lattice::new(&[-1, 0, 2], &[1, 2, 3]).unwrap();
        for k in 0..=3 {
            for c in b.cells(k).unwrap() {
                let s = b.index(&c).unwrap();
                assert_eq!(b.cell_at(k, s), Some(c));
            }
        }
    }

    #[test]
    fn enumeration_is_site_major() {
        let sq = Lattice::new(&[0, 0], &[1, 1]).unwrap();
        let e = sq.cells(1).unwrap();
        assert_eq!(e[0], Cell::edge([0, 0, 0, 0], 0));
        assert_eq!(e[1], Cell::edge([0, 0, 0, 0], 1));
        assert_eq!(e[2], Cell::edge([0, 1, 0, 0], 0));
        assert_eq!(e[3], Cell::edge([1, 0, 0, 0], 1));
    }

    #[test]
    fn interior_edge_coboundary_sizes() {
        let b4 = Lattice::cube(4, 2).unwrap();
        assert_eq!(b4.coboundary(&Cell::edge([0; 4], 0)).len(), 6);
        let b2 = Lattice::cube(2, 2).unwrap();
        assert_eq!(b2.coboundary(&Cell::edge([0; 4], 1)).len(), 2);
        let corner = Cell::edge([-2, -2, -2, -2], 0);
        assert!(b4.coboundary(&corner).len() < 6);
        assert_eq!(b4.coboundary(&corner).len(), 3);
    }

    #[test]
    fn coboundary_is_boundary_transpose() {
        let b = Lattice::cube(3, 1).unwrap();
        for k in 0..3 {
            for c in b.cells(k).unwrap() {
                for up in b.coboundary(&c) {
                    assert!(up.boundary().contains(&c), "{c:?} not in boundary of {up:?}");
                }
                let count = b
                    .cells(k + 1)
                    .unwrap()
                    .into_iter()
                    .filter(|u| u.boundary().iter().any(|f| f.positive() == c))
                    .count();
                assert_eq!(count, b.coboundary(&c).len());
            }
        }
    }
}
