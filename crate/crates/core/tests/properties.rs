//! Property tests over randomized exact inputs.

use proptest::prelude::*;

use crtypes_core::coeff::default_coeff_set;
use crtypes_core::invariants::{self, BracketWord, DerivationWord, HoloImmersion};
use crtypes_core::psh::{self, Grid};
use crtypes_core::tangency::{self, TangencyProblem};
use crtypes_core::{parse_poly, Frame, GaussianRational, Hypersurface, Monomial, Order, Poly, TypeValue, Var, VectorField};

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, 1i64..=3, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| GaussianRational::from_parts(a, b, c, d))
}

fn unit_coeff() -> impl Strategy<Value = GaussianRational> {
    proptest::sample::select(default_coeff_set())
}

/// Polynomial in `z1..z_nz, w` and conjugates with total degree `<= deg`.
fn poly(nz: usize, deg: u16, terms: usize) -> impl Strategy<Value = Poly> {
    let nv = 2 * (nz + 1);
    proptest::collection::vec((proptest::collection::vec(0..=deg, nv), coeff()), 0..=terms).prop_map(move |ts| {
        Poly::from_terms(
            nz,
            ts.into_iter().map(|(mut e, c)| {
                while e.iter().sum::<u16>() > deg {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                (Monomial(e), c)
            }),
        )
    })
}

/// Polynomial in `z, conj z` only.
fn zpoly(nz: usize, deg: u16, terms: usize) -> impl Strategy<Value = Poly> {
    poly(nz, deg, terms).prop_map(move |p| p.restrict_zero(&[Var::W]))
}

fn field(nz: usize) -> impl Strategy<Value = VectorField> {
    proptest::collection::vec(poly(nz, 2, 3), 2 * (nz + 1)).prop_map(move |c| VectorField::from_coeffs(nz, c, Order::Infinite))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conj_is_involution(p in poly(2, 4, 6)) {
        prop_assert_eq!(p.conj().conj(), p);
    }

    #[test]
    fn wirtinger_conj(p in poly(2, 4, 6)) {
        for v in [Var::Z(1), Var::Z(2), Var::W] {
            prop_assert_eq!(p.derivative(v).unwrap().conj(), p.conj().derivative(v.conj()).unwrap());
        }
    }

    #[test]
    fn parse_print_round_trip(p in poly(3, 4, 6)) {
        prop_assert_eq!(parse_poly(&p.to_string(), 3).unwrap(), p);
    }

    #[test]
    fn real_part_is_real(p in poly(2, 3, 5)) {
        let r = p.real_part();
        prop_assert!(r.is_real());
        prop_assert_eq!(&r + &(&p.imag_part() * &Poly::constant(2, GaussianRational::i())), p);
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi(x in field(1), y in field(1), z in field(1)) {
        prop_assert!(x.lie_bracket(&y).add(&y.lie_bracket(&x)).is_zero());
        let j = x.lie_bracket(&y.lie_bracket(&z))
            .add(&y.lie_bracket(&z.lie_bracket(&x)))
            .add(&z.lie_bracket(&x.lie_bracket(&y)));
        prop_assert!(j.is_zero());
        prop_assert_eq!(x.lie_bracket(&y).conj(), x.conj().lie_bracket(&y.conj()));
    }

    #[test]
    fn levi_trace_is_real_on_rigid(chi in zpoly(2, 4, 5), a in zpoly(2, 2, 3)) {
        let chi = &chi.real_part() - &chi.real_part().holomorphic_part().real_part().scale(&GaussianRational::from_int(2));
        let chi = chi.filter(|m| m.degree() >= 2);
        let rho = &chi - &(&Poly::var(2, Var::W) + &Poly::var(2, Var::Wbar));
        let m = Hypersurface::new(rho).unwrap();
        let last = a.filter(|m| m.degree() >= 1);
        let frame = Frame::new(2, vec![vec![Poly::one(2), last]]).unwrap();
        prop_assert!(invariants::levi_trace(&m, &frame).is_real());
    }

    #[test]
    fn frame_fields_are_tangent(chi in zpoly(2, 4, 5), a in zpoly(2, 2, 3)) {
        let chi = chi.real_part().filter(|m| m.degree() >= 2 && !m.is_holomorphic() && !m.conj().is_holomorphic());
        let rho = &chi - &(&Poly::var(2, Var::W) + &Poly::var(2, Var::Wbar));
        let m = Hypersurface::new(rho).unwrap();
        let frame = Frame::new(2, vec![vec![Poly::one(2), a.filter(|m| m.degree() >= 1)]]).unwrap();
        for x in frame.fields(&m, 0) {
            prop_assert!(x.apply(m.rho()).is_zero());
        }
    }

    #[test]
    fn contact_invariant_under_reparametrization(p in 1u32..=3, q in 1u32..=3, c in unit_coeff()) {
        let rho = parse_poly(&format!("-2*Re(w) + (z1*conj(z1))^{} + (z2*conj(z2))^{}", p, q), 2).unwrap();
        let m = Hypersurface::new(rho).unwrap();
        let t = Poly::var(1, Var::Z(1));
        let tt = &t + &(&t * &t).scale(&c);
        let base = HoloImmersion::new(vec![t.clone(), t.clone(), Poly::zero(1)]).unwrap();
        let rep = HoloImmersion::new(vec![tt.clone(), tt, Poly::zero(1)]).unwrap();
        prop_assert_eq!(invariants::order_of_contact(&m, &base).unwrap(), invariants::order_of_contact(&m, &rep).unwrap());
    }

    #[test]
    fn witnesses_re_evaluate(p in 1u32..=3, q in 1u32..=3, extra in 0u32..=2) {
        let rho = parse_poly(&format!("-2*Re(w) + (z1*conj(z1))^{} + (z2*conj(z2))^{} + {}*(z1*conj(z1))^{}*z2*conj(z2)", p, q, extra, p), 2).unwrap();
        let m = Hypersurface::new(rho).unwrap();
        let frame = Frame::coordinate(2, &[1]);
        let t = invariants::commutator_type(&m, &frame, 8).unwrap();
        prop_assert_eq!(t.value, TypeValue::Exact(2 * p));
        let gens = invariants::generators(&m, &frame, 0);
        if let (TypeValue::Exact(len), Some(w)) = (t.value, &t.witness) {
            let word: BracketWord = w.parse().unwrap();
            prop_assert_eq!(word.0.len() as u32, len);
            let x = invariants::evaluate_bracket_word(&gens, &word).unwrap();
            prop_assert!(!m.pair_at_origin(&x).is_zero());
        }
        let c = invariants::levi_type(&m, &frame, 8).unwrap();
        if let (TypeValue::Exact(v), Some(w)) = (c.value, &c.witness) {
            let word: DerivationWord = w.parse().unwrap();
            prop_assert_eq!(word.0.len() as u32 + 2, v);
            let tr = invariants::levi_trace(&m, &frame);
            prop_assert!(!invariants::evaluate_derivation_word(&gens, &tr, &word).unwrap().constant_term().is_zero());
        }
    }

    #[test]
    fn pluriharmonic_levi_matrix_vanishes(f in zpoly(2, 4, 5)) {
        let h = f.holomorphic_part();
        let lm = psh::levi_matrix(&h.real_part()).unwrap();
        prop_assert!(lm.entries.iter().flatten().all(|e| e.is_zero()));
    }

    #[test]
    fn levi_matrix_hermitian(f in zpoly(2, 4, 5)) {
        let lm = psh::levi_matrix(&f.real_part()).unwrap();
        for i in 0..lm.vars.len() {
            for j in 0..lm.vars.len() {
                prop_assert_eq!(&lm.entries[j][i], &lm.entries[i][j].conj());
            }
        }
    }

    #[test]
    fn refutation_survives_densification(f in zpoly(2, 3, 4)) {
        let re = f.real_part();
        let g = Grid::default();
        if psh::sampled_psh(&re, &g).unwrap().is_refuted() {
            prop_assert!(psh::sampled_psh(&re, &g.densify()).unwrap().is_refuted());
        }
    }

    #[test]
    fn monomials_have_zero_obstruction(a in 0u16..=8, b in 0u16..=8, c in coeff()) {
        prop_assume!(a + b <= 8);
        let h = Poly::term(1, c, &[(Var::Z(1), a), (Var::Zbar(1), b)]);
        prop_assert!(psh::monomial_obstruction(&h).unwrap().is_zero());
    }

    #[test]
    fn solution_basis_solves(k in 2u32..=4, extra in 1u32..=4, coeffs in proptest::collection::vec(unit_coeff(), 3)) {
        let m = k + extra;
        let monos = tangency::a_monomials(k);
        let mut a = Poly::zero(2);
        for (c, mo) in coeffs.iter().zip(&monos) {
            a = &a + &mo.scale(c);
        }
        prop_assume!(!a.is_zero());
        let t = TangencyProblem::new(a, k, m).unwrap();
        let fam = tangency::solution_space(&t);
        for e in &fam.basis {
            prop_assert!(tangency::residual(&t, &e.f).is_zero());
            prop_assert!(tangency::is_weighted_degree(&e.f, &t));
            for j in 0..t.m0() {
                let lower = tangency::z2_layer(&e.f, j).derivative(Var::Zbar(1)).unwrap();
                let upper = tangency::z2_layer(&e.f, j + 1).derivative(Var::Zbar(2)).unwrap();
                prop_assert!((&lower + &(&t.a().conj() * &upper)).is_zero());
            }
            let sum = (0..=t.m0()).fold(Poly::zero(2), |acc, j| &acc + &tangency::z2_layer(&e.f, j));
            prop_assert_eq!(&sum, &e.f);
        }
    }

    #[test]
    fn dilation_maps_solutions(k in 2u32..=3, extra in 1u32..=3, d in coeff()) {
        prop_assume!(!d.is_zero());
        let a = Poly::term(2, GaussianRational::one(), &[(Var::Zbar(1), (k - 1) as u16)]);
        let t = TangencyProblem::new(a, k, k + extra).unwrap();
        let td = tangency::dilate_problem(&t, &d).unwrap();
        for e in tangency::solution_space(&t).basis {
            prop_assert!(tangency::residual(&td, &tangency::dilate(&e.f, &d).unwrap()).is_zero());
        }
    }

    #[test]
    fn antiderivative_inverts(p in zpoly(1, 10, 6)) {
        let p2 = p.remap(2, |s| match s { 0 => 0, 1 => 2, 2 => 3, _ => 5 });
        let f = tangency::antiderivative_zbar1(&p2).unwrap();
        prop_assert_eq!(f.derivative(Var::Zbar(1)).unwrap(), p2);
    }
}
