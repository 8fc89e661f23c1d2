//! End-to-end checks on the shipped fixtures.

use crtypes_core::coeff::default_coeff_set;
use crtypes_core::fixtures;
use crtypes_core::invariants::{self, HoloImmersion, InvariantError};
use crtypes_core::normalize::{self, NormalCase};
use crtypes_core::{parse_poly, Frame, Hypersurface, Order, TypeValue};

fn hyp(s: &str, nz: usize) -> Hypersurface {
    Hypersurface::new(parse_poly(s, nz).unwrap()).unwrap()
}

#[test]
fn osculating_curve_beats_axes() {
    let m = fixtures::osculating().hypersurface();
    assert_eq!(invariants::order_of_contact(&m, &HoloImmersion::axis(3, 0)).unwrap(), Order::Finite(2));
    let r = invariants::contact_search(&m, 1, 2, &default_coeff_set()).unwrap();
    assert_eq!(r.value, TypeValue::Exact(8));
    assert_eq!(r.witness.as_deref(), Some("(t^2,t,0)"));
}

#[test]
fn diagonal_contact_witness() {
    let m = hyp("-2*Re(w) + (z1*conj(z1))^2 + (z2*conj(z2))^3", 2);
    assert_eq!(invariants::order_of_contact(&m, &HoloImmersion::axis(3, 1)).unwrap(), Order::Finite(6));
    let r = invariants::contact_search(&m, 1, 2, &default_coeff_set()).unwrap();
    assert_eq!(r.value, TypeValue::Exact(6));
    assert_eq!(r.witness.as_deref(), Some("(0,t,0)"));
}

#[test]
fn empty_coefficient_set() {
    let m = hyp("-2*Re(w) + z1*conj(z1) + z2*conj(z2)", 2);
    assert_eq!(invariants::contact_search(&m, 1, 2, &[]), Err(InvariantError::EmptyCoeffSet));
}

#[test]
fn sweeps() {
    let m = hyp("-2*Re(w) + z1*conj(z1) + z2*conj(z2)", 2);
    let r = invariants::type_sweep(&m, 1, 1, &default_coeff_set(), 8).unwrap();
    assert_eq!(r.commutator.value, TypeValue::Exact(2));
    assert_eq!(r.levi.value, TypeValue::Exact(2));

    let m = hyp("-2*Re(w) + (z1*conj(z1))^2 + z2*conj(z2)", 2);
    let r = invariants::type_sweep(&m, 1, 1, &default_coeff_set(), 8).unwrap();
    assert_eq!(r.commutator.value, TypeValue::Exact(4));
    assert_eq!(r.commutator_frame, Frame::coordinate(2, &[1]).rows().to_vec());

    let fx = fixtures::squared_quadric();
    let r = invariants::type_sweep(&fx.hypersurface(), 1, 1, &default_coeff_set(), 8).unwrap();
    assert_eq!(r.commutator.value, TypeValue::Exceeds(8));
    assert_eq!(r.levi.value, TypeValue::Exceeds(8));
}

#[test]
fn squared_quadric_pipeline() {
    let fx = fixtures::squared_quadric();
    let m = fx.hypersurface();
    assert_eq!(m.rho(), &parse_poly("-2*Re(w) + (z2 + conj(z2) + z1*conj(z1))^2", 2).unwrap());
    let cert = normalize::normalize_full(&m, &fx.frame().unwrap(), 4).unwrap();
    assert_eq!(cert.case, NormalCase::II);
    assert_eq!((cert.l0, cert.k, cert.m), (1, Some(2), Some(4)));
    let w = invariants::assign_weights(&cert.hypersurface(), &cert.frame(), 4).unwrap();
    let m0 = invariants::truncated_model(&cert.hypersurface(), &w);
    assert_eq!(m0.rho(), cert.hypersurface().rho());
    let b0 = invariants::truncate_frame(&cert.frame(), &w);
    assert_eq!(b0.rows(), fx.frame().unwrap().rows());
}

#[test]
fn slide_violation() {
    let m = hyp("-2*Re(w) + z1*conj(z1) + z2*conj(z2)", 2);
    let f = Frame::new(2, vec![vec![parse_poly("1", 2).unwrap(), parse_poly("conj(z1)", 2).unwrap()]]).unwrap();
    assert!(matches!(invariants::assign_weights(&m, &f, 4), Err(InvariantError::KNotBelowM { k: 2, m: 2, .. })));
}

#[test]
fn fixture_text_round_trip() {
    let mut polys: Vec<_> = fixtures::models().iter().map(|m| (m.rho_poly(), m.nz())).collect();
    for t in fixtures::tangency() {
        polys.push((t.f_poly(), 2));
        polys.push((t.problem().a().clone(), 2));
    }
    for (p, nz) in polys {
        let s = p.to_string();
        assert_eq!(parse_poly(&s, nz).unwrap(), p, "{}", s);
        assert_eq!(parse_poly(&s, nz).unwrap().to_string(), s);
    }
}
