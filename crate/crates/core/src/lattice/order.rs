use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::{Cell, Form};
use crate::error::LatticeError;
use crate::zn;

/// `a <= b`: `a` agrees with `b` on its support and `da` agrees with `db`
/// on the support of `da`.
pub fn leq(a: &Form, b: &Form) -> Result<bool, LatticeError> {
    if a.degree() != b.degree() {
        return Err(LatticeError::DegreeMismatch { left: a.degree(), right: b.degree() });
    }
    if a.modulus() != b.modulus() || a.lattice() != b.lattice() {
        return Err(LatticeError::DomainMismatch);
    }
    if a.support().into_iter().any(|s| a.slot(s) != b.slot(s)) {
        return Ok(false);
    }
    if a.degree() == a.lattice().dim() {
        return Ok(true);
    }
    let (da, db) = (a.d()?, b.d()?);
    Ok(da.support().into_iter().all(|s| da.slot(s) == db.slot(s)))
}

/// Whether restricting `w` to `slots` splits it: `d(w|_S)` and
/// `d(w|_{S^c})` have disjoint supports.
pub fn splits(w: &Form, slots: &[usize]) -> Result<bool, LatticeError> {
    let part = w.restrict(slots);
    if w.degree() == w.lattice().dim() {
        return Ok(true);
    }
    let rest = w.sub(&part)?;
    let (dp, dr) = (part.d()?, rest.d()?);
    Ok(dp.values().iter().zip(dr.values()).all(|(&x, &y)| x == 0 || y == 0))
}

/// Support cells of a form with their contributions to `dw`.
struct Incidence {
    slots: Vec<usize>,
    /// For each supported cell: (local index of a (k+1)-cell, contribution).
    contrib: Vec<Vec<(usize, u8)>>,
    /// For each (k+1)-cell: supported cells on its boundary.
    members: Vec<Vec<usize>>,
    total: Vec<u8>,
    n: u8,
}

impl Incidence {
    fn new(w: &Form) -> Self {
        let lat = w.lattice();
        let k = w.degree();
        let n = w.modulus();
        let slots = w.support();
        let mut raw: Vec<Vec<(usize, u8)>> = Vec::with_capacity(slots.len());
        let mut q_slots: Vec<usize> = Vec::new();
        for &s in &slots {
            let c = lat.cell_at(k, s).expect("support lies on valid slots");
            let v = w.slot(s);
            let row: Vec<(usize, u8)> = if k < lat.dim() {
                lat.coboundary(&c)
                    .into_iter()
                    .map(|up| (lat.index(&up).unwrap(), zn::signed(v, up.sign, n)))
                    .collect()
            } else {
                Vec::new()
            };
            q_slots.extend(row.iter().map(|&(q, _)| q));
            raw.push(row);
        }
        q_slots.sort_unstable();
        q_slots.dedup();
        let local: HashMap<usize, usize> =
            q_slots.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut members = vec![Vec::new(); q_slots.len()];
        let mut total = vec![0u8; q_slots.len()];
        let contrib: Vec<Vec<(usize, u8)>> = raw
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .map(|(q, v)| {
                        let j = local[&q];
                        members[j].push(i);
                        total[j] = zn::add(total[j], v, n);
                        (j, v)
                    })
                    .collect()
            })
            .collect();
        Incidence { slots, contrib, members, total, n }
    }

    /// (k+1)-cells where both `d(w|_S)` and `d(w|_{S^c})` are nonzero, ascending.
    fn conflicts(&self, inside: &[bool]) -> Vec<usize> {
        let mut part = vec![0u8; self.total.len()];
        let mut touched = Vec::new();
        for (i, row) in self.contrib.iter().enumerate() {
            if !inside[i] {
                continue;
            }
            for &(q, v) in row {
                part[q] = zn::add(part[q], v, self.n);
                touched.push(q);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        touched
            .into_iter()
            .filter(|&q| part[q] != 0 && part[q] != self.total[q])
            .collect()
    }

    /// Add cells forced by a conflict with a single outside candidate, until
    /// none remain. Returns the first unresolved conflict, if any.
    fn close(&self, set: &mut Vec<usize>) -> Option<usize> {
        let mut inside = vec![false; self.slots.len()];
        for &i in set.iter() {
            inside[i] = true;
        }
        loop {
            let conflicts = self.conflicts(&inside);
            let Some(&first) = conflicts.first() else {
                set.sort_unstable();
                return None;
            };
            // one forced cell at a time: it may resolve the other conflicts
            let forced = conflicts.iter().find_map(|&q| {
                let mut outside = self.members[q].iter().copied().filter(|&i| !inside[i]);
                match (outside.next(), outside.next()) {
                    (Some(c), None) => Some(c),
                    _ => None,
                }
            });
            match forced {
                Some(c) => {
                    inside[c] = true;
                    set.push(c);
                }
                None => {
                    set.sort_unstable();
                    return Some(first);
                }
            }
        }
    }

    /// Smallest splitting set containing local cell `c0`; ties broken by
    /// lexicographic order of slots.
    fn minimal_split(&self, c0: usize) -> Vec<usize> {
        let mut heap = BinaryHeap::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut start = vec![c0];
        let conflict = self.close(&mut start);
        seen.insert(start.clone());
        heap.push(Reverse((start.len(), start, conflict)));
        while let Some(Reverse((_, set, conflict))) = heap.pop() {
            let Some(q) = conflict else { return set };
            for &c in &self.members[q] {
                if set.binary_search(&c).is_ok() {
                    continue;
                }
                let mut child = set.clone();
                child.push(c);
                child.sort_unstable();
                let conflict = self.close(&mut child);
                if seen.insert(child.clone()) {
                    heap.push(Reverse((child.len(), child, conflict)));
                }
            }
        }
        unreachable!("the full support always splits")
    }
}

/// Whether `w` is nonzero and admits no nontrivial split.
pub fn is_irreducible(w: &Form) -> bool {
    if w.is_zero() {
        return false;
    }
    let inc = Incidence::new(w);
    inc.minimal_split(0).len() == inc.slots.len()
}

/// Peel off irreducible pieces: each step removes the smallest splitting
/// set containing the lowest supported cell. The pieces are irreducible,
/// each is `<= w`, they have disjoint supports and they sum to `w`.
pub fn irreducible_components(w: &Form) -> Vec<Form> {
    let mut rest = w.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let inc = Incidence::new(&rest);
        let local = inc.minimal_split(0);
        let slots: Vec<usize> = local.iter().map(|&i| inc.slots[i]).collect();
        let piece = rest.restrict(&slots);
        rest = rest.sub(&piece).expect("same domain");
        out.push(piece);
    }
    out
}

/// The vortices of `sigma`: irreducible components of `d sigma`.
pub fn vortices(sigma: &Form) -> Result<Vec<Form>, LatticeError> {
    Ok(irreducible_components(&sigma.d()?))
}

/// If `nu = d(g 1_{e0})` for a single positive edge `e0`, return `(e0, g)`.
pub fn minimal_vortex_center(nu: &Form) -> Result<Option<(Cell, u8)>, LatticeError> {
    if nu.degree() != 2 {
        return Err(LatticeError::DegreeMismatch { left: nu.degree(), right: 2 });
    }
    if nu.lattice().dim() > 2 && !nu.d()?.is_zero() {
        return Err(LatticeError::NotClosed);
    }
    let Some(&s) = nu.support().first() else { return Ok(None) };
    let lat = nu.lattice().clone();
    let p = lat.cell_at(2, s).unwrap();
    for e in p.boundary() {
        let g = zn::signed(nu.slot(s), e.sign, nu.modulus());
        let e0 = e.positive();
        let cand = Form::indicator(lat.clone(), &e0, g, nu.modulus())?.d()?;
        if &cand == nu {
            return Ok(Some((e0, g)));
        }
    }
    Ok(None)
}
