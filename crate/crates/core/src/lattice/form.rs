use std::sync::Arc;

use super::{Cell, Lattice};
use crate::error::LatticeError;
use crate::zn;

/// A `Z_n`-valued `k`-form on a box. Only positively oriented cells are
/// stored; reading a negated cell negates the stored value, and cells
/// outside the box read as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    lattice: Arc<Lattice>,
    k: usize,
    n: u8,
    values: Vec<u8>,
}

impl Form {
    pub fn zero(lattice: Arc<Lattice>, k: usize, n: u8) -> Result<Self, LatticeError> {
        if k > lattice.dim() {
            return Err(LatticeError::Degree { k, dim: lattice.dim() });
        }
        if n < 2 {
            return Err(LatticeError::Modulus(n));
        }
        let len = lattice.n_slots(k);
        Ok(Form { lattice, k, n, values: vec![0; len] })
    }

    /// Build from per-slot values; invalid slots must hold zero.
    pub fn from_values(
        lattice: Arc<Lattice>,
        k: usize,
        n: u8,
        values: Vec<u8>,
    ) -> Result<Self, LatticeError> {
        let mut f = Form::zero(lattice, k, n)?;
        if values.len() != f.values.len() {
            return Err(LatticeError::Shape { expected: f.values.len(), got: values.len() });
        }
        for (s, &v) in values.iter().enumerate() {
            if v != 0 && (v >= n || f.lattice.cell_at(k, s).is_none()) {
                return Err(LatticeError::BadValue { slot: s, value: v });
            }
        }
        f.values = values;
        Ok(f)
    }

    /// `g` on `c` (and `-g` on `-c`), zero elsewhere.
    pub fn indicator(lattice: Arc<Lattice>, c: &Cell, g: u8, n: u8) -> Result<Self, LatticeError> {
        let mut f = Form::zero(lattice, c.degree(), n)?;
        f.set(c, g)?;
        Ok(f)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> u8 {
        self.n
    }

    /// Raw per-slot values (positively oriented cells).
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [u8] {
        &mut self.values
    }

    #[inline]
    pub fn slot(&self, s: usize) -> u8 {
        self.values[s]
    }

    #[inline]
    pub fn set_slot(&mut self, s: usize, g: u8) {
        self.values[s] = g % self.n;
    }

    pub fn get(&self, c: &Cell) -> u8 {
        debug_assert_eq!(c.degree(), self.k);
        match self.lattice.index(c) {
            Some(s) => zn::signed(self.values[s], c.sign, self.n),
            None => 0,
        }
    }

    /// Set `f(c) = g`, which also fixes `f(-c) = -g`.
    pub fn set(&mut self, c: &Cell, g: u8) -> Result<(), LatticeError> {
        if c.degree() != self.k {
            return Err(LatticeError::DegreeMismatch { left: self.k, right: c.degree() });
        }
        let s = self.lattice.index(c).ok_or(LatticeError::OutsideBox)?;
        self.values[s] = zn::signed(g % self.n, c.sign, self.n);
        Ok(())
    }

    /// Supported slots (positive cells), ascending.
    pub fn support(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(s, _)| s)
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn check_same(&self, other: &Form) -> Result<(), LatticeError> {
        if self.k != other.k {
            return Err(LatticeError::DegreeMismatch { left: self.k, right: other.k });
        }
        if self.n != other.n || self.lattice != other.lattice {
            return Err(LatticeError::DomainMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form, LatticeError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (a, &b) in out.values.iter_mut().zip(&other.values) {
            *a = zn::add(*a, b, self.n);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form, LatticeError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (a, &b) in out.values.iter_mut().zip(&other.values) {
            *a = zn::sub(*a, b, self.n);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Form {
        let mut out = self.clone();
        for a in out.values.iter_mut() {
            *a = zn::neg(*a, self.n);
        }
        out
    }

    /// Keep only the values on the given slots.
    pub fn restrict(&self, slots: &[usize]) -> Form {
        let mut out = Form { values: vec![0; self.values.len()], ..self.clone() };
        for &s in slots {
            out.values[s] = self.values[s];
        }
        out
    }

    /// Exterior derivative: `(df)_c = sum of f over the signed boundary of c`.
    pub fn d(&self) -> Result<Form, LatticeError> {
        let lat = &self.lattice;
        if self.k >= lat.dim() {
            return Err(LatticeError::Degree { k: self.k + 1, dim: lat.dim() });
        }
        let mut out = Form::zero(lat.clone(), self.k + 1, self.n)?;
        for s in 0..lat.n_slots(self.k + 1) {
            let Some(c) = lat.cell_at(self.k + 1, s) else { continue };
            let mut acc = 0u8;
            for f in c.boundary() {
                acc = zn::add(acc, self.get(&f), self.n);
            }
            out.values[s] = acc;
        }
        Ok(out)
    }

    /// Co-derivative: `(δf)_c = sum of f over the oriented coboundary of c`.
    pub fn delta(&self) -> Result<Form, LatticeError> {
        let lat = &self.lattice;
        if self.k == 0 {
            return Err(LatticeError::Degree { k: 0, dim: lat.dim() });
        }
        let mut out = Form::zero(lat.clone(), self.k - 1, self.n)?;
        for s in self.support() {
            let c = lat.cell_at(self.k, s).expect("support lies on valid slots");
            let v = self.values[s];
            for f in c.boundary() {
                let t = lat.index(&f).expect("faces of a box cell lie in the box");
                out.values[t] = zn::add(out.values[t], zn::signed(v, f.sign, self.n), self.n);
            }
        }
        Ok(out)
    }
}
