use serde::{Deserialize, Serialize};

use crate::lattice::{Cell, Form, Lattice, Site};
use crate::zn;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error("loop plane {0:?} must be two distinct axes below the dimension {1}")]
    Plane([usize; 2], usize),
    #[error("loop side lengths must be positive, got {0}x{1}")]
    Empty(u32, u32),
    #[error("loop corner has {got} coordinates, expected {dim}")]
    Corner { got: usize, dim: usize },
    #[error(
        "loop margin rule violated: every loop site must lie at least {required} step(s) \
         inside the box, but the closest one is {got} step(s) from the boundary"
    )]
    Margin { got: i32, required: i32 },
}

/// A rectangle `l1 x l2` in the `(plane[0], plane[1])` plane with lowest corner `corner`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopSpec {
    pub plane: [usize; 2],
    pub corner: Vec<i32>,
    pub l1: u32,
    pub l2: u32,
}

impl LoopSpec {
    /// Rectangle in the `(0, 1)` plane centred at the origin of a `dim`-dimensional box.
    pub fn centered(dim: usize, l1: u32, l2: u32) -> Self {
        let mut corner = vec![0; dim];
        corner[0] = -(l1 as i32 / 2);
        corner[1] = -(l2 as i32 / 2);
        LoopSpec { plane: [0, 1], corner, l1, l2 }
    }
}

/// A rectangular loop with its corner edges and filling surface.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub spec: LoopSpec,
    /// Oriented edges in traversal order.
    pub edges: Vec<Cell>,
    /// `corner[i]` is true when `edges[i]` shares a plaquette with another loop edge.
    pub corner: Vec<bool>,
    /// Plaquettes with `q_p = 1`; every other plaquette has `q_p = 0`.
    pub surface: Vec<Cell>,
}

impl Loop {
    /// Build the loop; every site on it must be at least `min_margin` from the box boundary.
    pub fn build(spec: &LoopSpec, lat: &Lattice, min_margin: i32) -> Result<Self, LoopError> {
        let m = lat.dim();
        let [a, b] = spec.plane;
        if a == b || a >= m || b >= m {
            return Err(LoopError::Plane(spec.plane, m));
        }
        if spec.l1 == 0 || spec.l2 == 0 {
            return Err(LoopError::Empty(spec.l1, spec.l2));
        }
        if spec.corner.len() != m {
            return Err(LoopError::Corner { got: spec.corner.len(), dim: m });
        }
        // traverse so that the loop is the boundary of the positively oriented plaquettes
        let (a, b, la, lb) = if a < b { (a, b, spec.l1, spec.l2) } else { (b, a, spec.l2, spec.l1) };
        let mut x: Site = [0; 4];
        x[..m].copy_from_slice(&spec.corner);

        let mut sites = Vec::new();
        let mut edges = Vec::new();
        let mut y = x;
        for (axis, steps, fwd) in [(a, la, true), (b, lb, true), (a, la, false), (b, lb, false)] {
            for _ in 0..steps {
                sites.push(y);
                if fwd {
                    edges.push(Cell::edge(y, axis));
                    y[axis] += 1;
                } else {
                    y[axis] -= 1;
                    edges.push(Cell::edge(y, axis).neg());
                }
            }
        }
        let got = sites.iter().map(|s| if lat.contains_site(s) { lat.margin(s) } else { -1 }).min().unwrap();
        if got < min_margin {
            return Err(LoopError::Margin { got, required: min_margin });
        }

        let positive: Vec<Cell> = edges.iter().map(Cell::positive).collect();
        let corner = positive
            .iter()
            .map(|e| {
                lat.coboundary(e).iter().any(|p| {
                    p.boundary().iter().any(|f| {
                        let f = f.positive();
                        f != *e && positive.contains(&f)
                    })
                })
            })
            .collect();

        let mut surface = Vec::with_capacity((la * lb) as usize);
        for i in 0..la as i32 {
            for j in 0..lb as i32 {
                let mut base = x;
                base[a] += i;
                base[b] += j;
                surface.push(Cell::plaquette(base, a, b));
            }
        }
        Ok(Loop { spec: spec.clone(), edges, corner, surface })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len_corner(&self) -> usize {
        self.corner.iter().filter(|&&c| c).count()
    }

    /// Oriented edges of `gamma_c`.
    pub fn corner_edges(&self) -> Vec<Cell> {
        self.edges.iter().zip(&self.corner).filter(|(_, &c)| c).map(|(e, _)| *e).collect()
    }

    /// Oriented edges of `gamma_1`, the non-corner edges.
    pub fn non_corner_edges(&self) -> Vec<Cell> {
        self.edges.iter().zip(&self.corner).filter(|(_, &c)| !c).map(|(e, _)| *e).collect()
    }

    /// `sum_p q_p (d sigma)_p`.
    pub fn surface_flux(&self, sigma: &Form) -> u8 {
        let n = sigma.modulus();
        self.surface.iter().fold(0, |acc, p| {
            let v = p.boundary().iter().fold(0, |s, e| zn::add(s, sigma.get(e), n));
            zn::add(acc, v, n)
        })
    }

    /// `sum_{e in gamma} sigma_e`.
    pub fn holonomy(&self, sigma: &Form) -> u8 {
        let n = sigma.modulus();
        self.edges.iter().fold(0, |acc, e| zn::add(acc, sigma.get(e), n))
    }

    /// Discrete Stokes identity for this loop and its surface.
    pub fn stokes_holds(&self, sigma: &Form) -> bool {
        self.surface_flux(sigma) == self.holonomy(sigma)
    }
}
