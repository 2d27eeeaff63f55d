use halfspin::bits;
use halfspin::cartan::{contract_ce_last, nu2};
use halfspin::clifford::{normal_form, so_to_clifford};
use halfspin::grassmann::{annihilator, is_pure, omega_of, IsotropicSubspace};
use halfspin::group::exp_nilpotent;
use halfspin::ideal::{
    degree_lowering_trace, eval_poly, ff_on_variable, i4_quadric, pullback, Level, Polynomial, Var,
};
use halfspin::linalg::Matrix;
use halfspin::rational::{frac, int, sign};
use halfspin::transfer::{beta, beta_gram, pi_general, pi_last, psi_last, tau_last};
use halfspin::{
    CliffordElement, ExteriorVector, Monomial, RootVector, SoElement, SpinVector, Symbol, Vector,
};

use Symbol::{E, F};

fn cl(n: usize, s: &str) -> CliffordElement {
    CliffordElement::parse(n, s).unwrap()
}

fn e_wedge(n: usize, e: u32, f: u32) -> ExteriorVector {
    ExteriorVector::blade(n, Monomial::new(e, f), int(1))
}

#[test]
fn normal_forms() {
    assert!(normal_form(1, &[E(1), E(1)]).unwrap().is_zero());
    let anti = normal_form(1, &[E(1), F(1)]).unwrap().add(&normal_form(1, &[F(1), E(1)]).unwrap()).unwrap();
    assert_eq!(anti, CliffordElement::scalar(1, int(2)));
    assert_eq!(normal_form(2, &[F(1), E(1), F(1), F(2)]).unwrap(), cl(2, "2*f1f2"));
}

#[test]
fn products_and_star() {
    let x = cl(1, "e1f1");
    assert_eq!(x.mul(&x).unwrap(), cl(1, "2*e1f1"));
    assert_eq!(CliffordElement::one(1).mul(&x).unwrap(), x);
    let (f1, f2) = (cl(2, "f1"), cl(2, "f2"));
    assert_eq!(f1.mul(&f2).unwrap(), f2.mul(&f1).unwrap().scale(&int(-1)));
    assert_eq!(cl(2, "e1").star(), cl(2, "e1"));
    assert_eq!(cl(2, "e1f2").star(), cl(2, "-1*e1f2"));
}

#[test]
fn two_forms_in_the_clifford_algebra() {
    assert_eq!(so_to_clifford(&SoElement::f_wedge_f(2, 1, 2)), cl(2, "1/2*f1f2"));
    assert_eq!(so_to_clifford(&SoElement::e_wedge_f(1, 1, 1)), cl(1, "1/2*e1f1 + -1/2*1"));
}

#[test]
fn action_on_the_exterior_algebra() {
    let one = ExteriorVector::one(2);
    assert_eq!(cl(2, "e1").act_on_exterior(&one).unwrap(), e_wedge(2, 0b1, 0));
    assert_eq!(cl(2, "e1f1").act_on_exterior(&one).unwrap(), one.add(&e_wedge(2, 0b1, 0b1)));
    assert_eq!(CliffordElement::f_top(3).act_on_exterior(&ExteriorVector::one(3)).unwrap(), e_wedge(3, 0, 0b111));
    assert_eq!(e_wedge(2, 0b1, 0).outer_symbol(E(2)), e_wedge(2, 0b11, 0).scale(&int(-1)));
    assert!(e_wedge(2, 0b1, 0).outer_symbol(E(1)).is_zero());
    assert_eq!(e_wedge(2, 0b11, 0).inner_symbol(F(2)), e_wedge(2, 0b1, 0).scale(&int(-1)));
    assert!(e_wedge(3, 0b11, 0).inner_symbol(F(3)).is_zero());
}

#[test]
fn spin_action_on_highest_weights() {
    for n in 2..=5 {
        let w0 = SpinVector::omega0(n);
        for i in 1..=n {
            assert_eq!(w0.rho(&SoElement::e_wedge_f(n, i, i)).unwrap(), w0.scale(&frac(1, 2)));
        }
        let w1 = SpinVector::omega1(n);
        assert_eq!(w1.rho(&SoElement::h(n, n - 1)).unwrap(), w1);
        assert!(w1.rho(&SoElement::h(n, n)).unwrap().is_zero());
    }
    let r = SpinVector::omega0(2).rho(&SoElement::f_wedge_f(2, 1, 2)).unwrap();
    assert_eq!(r, SpinVector::one(2).scale(&int(-2)));
}

#[test]
fn left_ideal_model() {
    assert_eq!(SpinVector::omega0(2).to_left_ideal(), cl(2, "e1e2f1f2"));
    assert_eq!(SpinVector::one(3).to_left_ideal(), CliffordElement::f_top(3));
}

#[test]
fn exponential_of_f_wedge_f() {
    let t = frac(3, 5);
    let g = exp_nilpotent(2, RootVector::FF(1, 2), t.clone()).unwrap();
    let expected = SpinVector::omega0(2).sub(&SpinVector::one(2).scale(&(int(2) * t)));
    assert_eq!(g.apply(&SpinVector::omega0(2)), expected);
    let back = exp_nilpotent(2, RootVector::FF(1, 2), -frac(3, 5)).unwrap();
    assert_eq!(back.apply(&expected), SpinVector::omega0(2));
}

#[test]
fn level_maps() {
    assert!(pi_last(&SpinVector::basis(3, 0b101)).unwrap().is_zero());
    assert_eq!(pi_last(&SpinVector::one(3)).unwrap(), SpinVector::one(2));
    assert_eq!(tau_last(&SpinVector::basis(2, 0b11)), SpinVector::basis(3, 0b11));
    assert_eq!(psi_last(&SpinVector::one(1)), SpinVector::basis(2, 0b10));
    assert_eq!(psi_last(&SpinVector::basis(1, 0b1)), SpinVector::basis(2, 0b11));
    let x = SpinVector::parse(3, "2*e1e2 + -1*e3 + 1").unwrap();
    assert_eq!(pi_general(&x, &Vector::basis_e(3, 3)).unwrap().0, pi_last(&x).unwrap());
}

#[test]
fn pairing_examples() {
    assert_eq!(beta(&SpinVector::one(1), &SpinVector::basis(1, 1)).unwrap(), int(2));
    assert_eq!(beta(&SpinVector::one(1), &SpinVector::one(1)).unwrap(), int(0));
    let g1 = beta_gram(1).unwrap();
    assert_eq!(g1, Matrix::from_rows(vec![vec![int(0), int(2)], vec![int(2), int(0)]], 2));
    let g2 = beta_gram(2).unwrap();
    assert!(g2.is_skew() && g2.det() != int(0));
    let g4 = beta_gram(4).unwrap();
    assert!(g4.is_symmetric());
    let even: Vec<usize> = bits::subsets_with_parity(4, false).into_iter().map(|m| m as usize).collect();
    assert_ne!(g4.select(&even, &even).det(), int(0));
}

#[test]
fn isotropic_subspaces() {
    let ok = IsotropicSubspace::from_vectors(
        2,
        &[
            Vector::basis_e(2, 1).add(&Vector::basis_f(2, 2)),
            Vector::basis_e(2, 2).sub(&Vector::basis_f(2, 1)),
        ],
    );
    assert_eq!(ok.unwrap().dim(), 2);
    assert!(IsotropicSubspace::from_vectors(1, &[Vector::basis_e(1, 1), Vector::basis_f(1, 1)]).is_err());
}

#[test]
fn pure_spinors() {
    let n = 4;
    assert_eq!(omega_of(&IsotropicSubspace::e_space(n)).unwrap(), SpinVector::omega0(n));
    assert_eq!(omega_of(&IsotropicSubspace::f_space(n)).unwrap(), SpinVector::one(n));
    assert_eq!(annihilator(&SpinVector::omega0(n)).unwrap(), IsotropicSubspace::e_space(n));
    assert!(is_pure(&SpinVector::omega0(n)).is_pure());
    let off = SpinVector::one(n).add(&SpinVector::omega0(n));
    assert!(!is_pure(&off).is_pure());
}

#[test]
fn cartan_map_examples() {
    for n in 1..=4 {
        assert_eq!(nu2(&SpinVector::one(n)), e_wedge(n, 0, bits::full(n)));
        let top = e_wedge(n, bits::full(n - 1), bits::bit(n));
        assert_eq!(contract_ce_last(&top).unwrap(), e_wedge(n - 1, bits::full(n - 1), 0).scale(&sign(n - 1)));
        assert!(contract_ce_last(&e_wedge(n, bits::full(n), 0)).unwrap().is_zero());
    }
    let x = SpinVector::parse(3, "e1e2 + 2*e3 + -1*e1e2e3 + 1").unwrap();
    assert_eq!(nu2(&x.scale(&int(3))), nu2(&x).scale(&int(9)));
}

#[test]
fn quadric_evaluations() {
    let level = Level::Finite(4);
    assert_eq!(eval_poly(&Polynomial::constant(level, int(7)), &SpinVector::omega0(4)).unwrap(), int(7));
    let p = Polynomial::variable(Level::Finite(2), Var::Finite(0b11)).unwrap();
    assert_eq!(eval_poly(&p, &SpinVector::omega0(2)).unwrap(), int(1));
    let q = i4_quadric().unwrap();
    assert_eq!(eval_poly(&q, &SpinVector::omega0(4)).unwrap(), int(0));
    let off = SpinVector::one(4).add(&SpinVector::omega0(4));
    assert_ne!(eval_poly(&q, &off).unwrap(), int(0));
    assert_eq!(pullback(&q, &Matrix::identity(16)).unwrap(), q);
}

#[test]
fn limit_derivations() {
    assert_eq!(ff_on_variable(1, 3, Var::Limit(0b100), 6).unwrap(), None);
    let (v, c) = ff_on_variable(1, 2, Var::Limit(0b1100), 6).unwrap().unwrap();
    assert_eq!((v, c), (Var::Limit(0b1111), int(-2)));
    let p = Polynomial::variable(Level::Limit { window: 6 }, Var::Limit(0b11)).unwrap();
    let t = degree_lowering_trace(&p, 8).unwrap();
    assert_eq!(t.q, Polynomial::one(t.q.level()));
    assert!(t.verify().is_ok());
}
