use num_complex::Complex64;

use crate::lattice::{Cell, Form};
use crate::theory::GroupSpec;
use crate::zn;

use super::DynamicsError;

/// Gauge transformation by `eta`: `sigma_(x,y) -> sigma_(x,y) - eta_x + eta_y`
/// and `phi_x -> phi_x + eta_x` (phases as group elements).
pub fn gauge_transform(
    sigma: &Form,
    phi: &Form,
    eta: &Form,
) -> Result<(Form, Form), DynamicsError> {
    if sigma.degree() != 1 || phi.degree() != 0 || eta.degree() != 0 {
        return Err(DynamicsError::Shape);
    }
    Ok((sigma.add(&eta.d()?)?, phi.add(eta)?))
}

/// `rho` of the holonomy of `sigma` along an oriented edge list.
pub fn wilson_loop(sigma: &Form, loop_edges: &[Cell], group: &GroupSpec) -> Result<Complex64, DynamicsError> {
    let lat = sigma.lattice();
    let mut acc = 0u8;
    for e in loop_edges {
        if !lat.contains(e) {
            return Err(DynamicsError::LoopOutsideBox);
        }
        acc = zn::add(acc, sigma.get(e), group.n);
    }
    Ok(group.rho(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use std::sync::Arc;

    #[test]
    fn plaquette_loop_is_stokes() {
        let lat = Arc::new(Lattice::cube(2, 1).unwrap());
        let z3 = GroupSpec::new(3, 1).unwrap();
        let mut s = Form::zero(lat.clone(), 1, 3).unwrap();
        for (i, e) in lat.cells(1).unwrap().into_iter().enumerate() {
            s.set(&e, (i * 7 % 3) as u8).unwrap();
        }
        let p = Cell::plaquette([0; 4], 0, 1);
        let w = wilson_loop(&s, &p.boundary(), &z3).unwrap();
        assert!((w - z3.rho(s.d().unwrap().get(&p))).norm() < 1e-14);
    }

    #[test]
    fn identity_and_inverse() {
        let lat = Arc::new(Lattice::cube(2, 1).unwrap());
        let mut s = Form::zero(lat.clone(), 1, 4).unwrap();
        s.set_slot(lat.slots(1)[3], 3);
        let phi = Form::zero(lat.clone(), 0, 4).unwrap();
        let mut eta = Form::zero(lat.clone(), 0, 4).unwrap();
        let (a, b) = gauge_transform(&s, &phi, &eta).unwrap();
        assert_eq!((a.clone(), b.clone()), (s.clone(), phi.clone()));
        eta.set_slot(4, 1);
        eta.set_slot(0, 3);
        let (a, b) = gauge_transform(&s, &phi, &eta).unwrap();
        let (c, d) = gauge_transform(&a, &b, &eta.neg()).unwrap();
        assert_eq!((c, d), (s, phi));
    }
}
