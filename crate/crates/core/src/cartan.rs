//! The Cartan map `ν̂₂` from the spin representation to `∧^n V`, the
//! exterior contraction `c_e` and multiplication `m_h`, and the
//! factorization of `π ∘ g ∘ τ` through a lower level.

use num_traits::{One, Zero};

use crate::bits;
use crate::clifford::{CliffordElement, Monomial};
use crate::error::{Error, Result};
use crate::exterior::ExteriorVector;
use crate::grassmann::IsotropicSubspace;
use crate::group::{Factor, GroupElement};
use crate::linalg::Matrix;
use crate::rational::{sign, Rational};
use crate::so::{RootVector, SoElement};
use crate::spin::{Parity, SpinVector};
use crate::transfer::{pi_last, pi_tower, tau_last, tau_tower};
use crate::vector::Vector;

/// Signs relating `ν̂₂ ∘ π` to `c_e ∘ ν̂₂` on the two half-spin spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CartanContext {
    pub n: usize,
}

impl CartanContext {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// `(-1)^{n-1}` on the even part.
    pub fn sign_plus(&self) -> Rational {
        sign(self.n + 1)
    }

    /// `(-1)^n` on the odd part.
    pub fn sign_minus(&self) -> Rational {
        sign(self.n)
    }

    pub fn pi_sign(&self, parity: Parity) -> Rational {
        match parity {
            Parity::Even => self.sign_plus(),
            Parity::Odd => self.sign_minus(),
        }
    }

    /// `+1` on even inputs, `-1` on odd ones.
    pub fn tau_sign(&self, parity: Parity) -> Rational {
        match parity {
            Parity::Even => Rational::one(),
            Parity::Odd => -Rational::one(),
        }
    }
}

fn e_monomials(x: &SpinVector) -> CliffordElement {
    CliffordElement::from_terms(x.n(), x.terms().iter().map(|(m, c)| (Monomial::new(*m, 0), c.clone())))
        .expect("indices within level")
}

/// `ν̂₂(af)`: the degree-`n` part of `(a f a^*) • 1`.
pub fn nu2(x: &SpinVector) -> ExteriorVector {
    let n = x.n();
    let a = e_monomials(x);
    let w = a.star().act_on_exterior(&ExteriorVector::one(n)).expect("same level");
    let w = CliffordElement::f_top(n).act_on_exterior(&w).expect("same level");
    a.act_on_exterior(&w).expect("same level").degree_part(n)
}

/// Orthogonal projection onto `⟨e, h⟩^⊥` for a hyperbolic pair.
fn projection(e: &Vector, h: &Vector) -> Matrix {
    let n = e.n();
    let cols = (0..2 * n)
        .map(|j| {
            let v = Vector::basis(n, j);
            v.sub(&e.scale(&v.dot(h))).sub(&h.scale(&v.dot(e))).coords()
        })
        .collect();
    Matrix::from_columns(cols, 2 * n)
}

fn check_pair(e: &Vector, h: &Vector) -> Result<()> {
    if !e.is_isotropic() || !h.is_isotropic() {
        return Err(Error::NotIsotropic);
    }
    if !e.dot(h).is_one() {
        return Err(Error::NotHyperbolic);
    }
    Ok(())
}

/// `c_e`: `ι(e)` followed by reduction modulo `e`, written inside `⟨e, h⟩^⊥`.
pub fn contract_ce(w: &ExteriorVector, e: &Vector, h: &Vector) -> Result<ExteriorVector> {
    check_pair(e, h)?;
    Ok(w.interior(e).apply_linear(&projection(e, h)))
}

/// `c_{e_n}` with values in `∧ V_{n-1}`.
pub fn contract_ce_last(w: &ExteriorVector) -> Result<ExteriorVector> {
    let n = w.n();
    if n == 0 {
        return Err(Error::LevelZero);
    }
    let e = Vector::basis_e(n, n);
    let h = Vector::basis_f(n, n);
    contract_ce(w, &e, &h)?.restrict(n - 1)
}

/// `m_h: ω ↦ h ∧ ω`, for `ω` in `∧⟨e, h⟩^⊥`.
pub fn mult_mh(w: &ExteriorVector, e: &Vector, h: &Vector) -> Result<ExteriorVector> {
    check_pair(e, h)?;
    Ok(w.wedge_vector(h))
}

/// `m_{f_{n+1}}` from `∧ V_n` to `∧ V_{n+1}`.
pub fn mult_mh_last(w: &ExteriorVector) -> ExteriorVector {
    let m = w.n() + 1;
    w.embed(m).wedge_vector(&Vector::basis_f(m, m))
}

/// `ν̂₂(π(x)) - s · c_{e_n}(ν̂₂(x))` with the sign of [`CartanContext::pi_sign`].
pub fn diagram_pi_residual(x: &SpinVector) -> Result<ExteriorVector> {
    let parity = x.pure_parity()?;
    let s = CartanContext::new(x.n()).pi_sign(parity);
    let lhs = nu2(&pi_last(x)?);
    let rhs = contract_ce_last(&nu2(x))?;
    Ok(lhs.sub(&rhs.scale(&s)))
}

/// `ν̂₂(τ(x)) - s · m_{f_{n+1}}(ν̂₂(x))` with the sign of [`CartanContext::tau_sign`].
pub fn diagram_tau_residual(x: &SpinVector) -> Result<ExteriorVector> {
    let parity = x.pure_parity()?;
    let s = CartanContext::new(x.n() + 1).tau_sign(parity);
    let lhs = nu2(&tau_last(x));
    let rhs = mult_mh_last(&nu2(x));
    Ok(lhs.sub(&rhs.scale(&s)))
}

/// The scalar `s` with `ν̂₂(τ(x)) = s · m_{f_{n+1}}(ν̂₂(x))`, if one exists.
pub fn diagram_tau_scalar(x: &SpinVector) -> Result<Option<Rational>> {
    x.pure_parity()?;
    let lhs = nu2(&tau_last(x));
    let rhs = mult_mh_last(&nu2(x));
    if rhs.is_zero() {
        return Ok(lhs.is_zero().then(Rational::one));
    }
    Ok(lhs.ratio_to(&rhs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Injectivity {
    /// Images are not proportional.
    Separated,
    /// Inputs and images are both proportional.
    SameLine,
    /// Proportional images of non-proportional inputs.
    Counterexample,
}

/// Projective injectivity of `ν̂₂` on a pair of nonzero vectors.
pub fn injectivity_witness(x: &SpinVector, y: &SpinVector) -> Result<Injectivity> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroVector);
    }
    x.pure_parity()?;
    y.pure_parity()?;
    let nx = nu2(x);
    let ny = nu2(y);
    if nx.is_zero() || ny.is_zero() {
        return Ok(Injectivity::Counterexample);
    }
    let images = nx.ratio_to(&ny).is_some();
    let inputs = x.ratio_to(y).is_some();
    Ok(match (images, inputs) {
        (false, _) => Injectivity::Separated,
        (true, true) => Injectivity::SameLine,
        (true, false) => Injectivity::Counterexample,
    })
}

/// Elementary factorization of `P ∈ SL_n(Q)`: a word of `exp(t·e_r∧f_c)`
/// whose action on `E` is `P`.
fn sl_word(p: &Matrix) -> Result<Vec<Factor>> {
    let n = p.rows();
    if !p.det().is_one() {
        return Err(Error::Invalid("matrix is not in SL_n".into()));
    }
    let mut a = p.clone();
    // row_r += t row_c, recorded as (r, c, t)
    let mut ops: Vec<(usize, usize, Rational)> = Vec::new();
    let mut add_row = |a: &mut Matrix, r: usize, c: usize, t: Rational| {
        if t.is_zero() {
            return;
        }
        for j in 0..n {
            let d = &t * &a[(c, j)];
            a[(r, j)] += d;
        }
        ops.push((r, c, t));
    };
    for c in 0..n {
        if !a[(c, c)].is_one() {
            let below = (c + 1..n).find(|&r| !a[(r, c)].is_zero());
            let r = match below {
                Some(r) => r,
                None => {
                    if c + 1 == n {
                        return Err(Error::Invalid("elimination left a non-unit pivot".into()));
                    }
                    add_row(&mut a, c + 1, c, Rational::one());
                    c + 1
                }
            };
            let t = (Rational::one() - &a[(c, c)]) / &a[(r, c)];
            add_row(&mut a, c, r, t);
        }
        for r in (0..n).filter(|&r| r != c) {
            let t = -a[(r, c)].clone();
            add_row(&mut a, r, c, t);
        }
    }
    debug_assert_eq!(a, Matrix::identity(n));
    Ok(ops
        .into_iter()
        .rev()
        .map(|(r, c, t)| Factor::new(RootVector::EF(r + 1, c + 1), -t))
        .collect())
}

/// A word `g'` in `Spin(V_n)` with `g' U = span(e_{n-d+1}, …, e_n)` for an
/// isotropic `U` of dimension `d` meeting `F` trivially.
pub fn move_isotropic_to_last(n: usize, u: &[Vector]) -> Result<GroupElement> {
    let d = u.len();
    let a: Vec<Vec<Rational>> = u.iter().map(|v| v.e.clone()).collect();
    if Matrix::from_rows(a.clone(), n).rank() < d {
        return Err(Error::Degenerate("subspace meets F".into()));
    }
    // skew T with T a_j = b_j
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for v in u {
        for r in 0..n {
            let row: Vec<Rational> = pairs
                .iter()
                .map(|&(i, k)| {
                    if i == r {
                        v.e[k].clone()
                    } else if k == r {
                        -v.e[i].clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            rows.push(row);
            rhs.push(v.f[r].clone());
        }
    }
    let t = Matrix::from_rows(rows, pairs.len())
        .solve(&rhs)
        .ok_or_else(|| Error::Invalid("subspace is not isotropic".into()))?;
    let mut word: Vec<Factor> = pairs
        .iter()
        .zip(&t)
        .filter(|(_, t)| !t.is_zero())
        .map(|(&(i, k), t)| Factor::new(RootVector::FF(i + 1, k + 1), -t.clone()))
        .collect();

    // columns: completion by standard e's, then the a_j
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    let mut basis = crate::linalg::EchelonBasis::new(n);
    for aj in &a {
        basis.insert(aj.clone());
    }
    for k in 0..n {
        let ek: Vec<Rational> = Vector::basis_e(n, k + 1).e;
        if basis.insert(ek.clone()) {
            cols.push(ek);
        }
    }
    cols.extend(a.iter().cloned());
    let mut q = Matrix::from_columns(cols, n);
    let det = q.det();
    let fix = if d < n { 0 } else { n - 1 };
    for r in 0..n {
        let v = &q[(r, fix)] / &det;
        q[(r, fix)] = v;
    }
    let p = q.inverse().expect("completed basis");
    word.extend(sl_word(&p)?);
    let g = GroupElement::from_word(n, word)?;

    let target = IsotropicSubspace::from_vectors(n, &(n - d + 1..=n).map(|i| Vector::basis_e(n, i)).collect::<Vec<_>>())?;
    let m = g.vector_matrix();
    for v in u {
        let image = Vector::from_coords(n, &m.apply(&v.coords())).expect("square");
        if !target.contains(&image) {
            return Err(Error::Invalid("constructed isometry misses the target".into()));
        }
    }
    Ok(g)
}

/// The two genericity conditions on `g` for [`lower_factorization`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genericity {
    pub intersection_dim: usize,
    pub expected_dim: usize,
    pub perp_meets_f: bool,
}

impl Genericity {
    pub fn holds(&self) -> bool {
        self.intersection_dim == self.expected_dim && !self.perp_meets_f
    }
}

/// Data of a verified factorization `π_{q,n0} ∘ g ∘ τ_{n,q} = λ · g'' ∘ π_{n,n0} ∘ g'`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub g_prime: GroupElement,
    /// `g''` in `SO(V_{n0})`.
    pub sigma: Matrix,
    /// Per parity: the normalized spin operator lifting `σ` and the scalar `λ`.
    pub lifts: Vec<(Parity, Matrix, Rational)>,
    pub genericity: Genericity,
}

fn span_intersection(a: &[Vector], b: &[Vector], n: usize) -> Vec<Vector> {
    // solve Σ x_i a_i = Σ y_j b_j
    let mut cols: Vec<Vec<Rational>> = a.iter().map(Vector::coords).collect();
    cols.extend(b.iter().map(|v| v.coords().iter().map(|x| -x).collect()));
    let m = Matrix::from_columns(cols, 2 * n);
    let raw: Vec<Vec<Rational>> = m
        .nullspace()
        .into_iter()
        .map(|c| {
            let mut v = Vector::zero(n);
            for (ai, ci) in a.iter().zip(&c) {
                v = v.add(&ai.scale(ci));
            }
            v.coords()
        })
        .collect();
    if raw.is_empty() {
        return Vec::new();
    }
    Matrix::from_rows(raw, 2 * n)
        .row_space()
        .row_vectors()
        .iter()
        .map(|r| Vector::from_coords(n, r).expect("width"))
        .collect()
}

/// Spin-side matrix of a linear map between levels, restricted to one parity.
fn half_matrix(n_in: usize, n_out: usize, parity: Parity, f: impl Fn(&SpinVector) -> SpinVector) -> Matrix {
    let src = bits::subsets_with_parity(n_in, parity.is_odd());
    let cols = src
        .iter()
        .map(|&m| f(&SpinVector::basis(n_in, m)).half_coords(parity))
        .collect();
    Matrix::from_columns(cols, half_dim(n_out))
}

fn half_dim(n: usize) -> usize {
    if n == 0 {
        1
    } else {
        1 << (n - 1)
    }
}

/// Follows the factorization of `π_{q,n0} ∘ g ∘ τ_{n,q}` through
/// `SO(V_{n0})`, then verifies it on the spin side on both half-spin spaces.
pub fn lower_factorization(q: usize, n: usize, n0: usize, g: &GroupElement) -> Result<Factorization> {
    if !(q >= n && n >= n0) {
        return Err(Error::Invalid(format!("need q >= n >= n0, got ({q}, {n}, {n0})")));
    }
    if q > crate::transfer::DENSE_LIMIT {
        return Err(Error::TooLarge(q));
    }
    if g.n() != q {
        return Err(Error::LevelMismatch { left: g.n(), right: q });
    }
    let gm = g.vector_matrix();
    let gi = gm.inverse().expect("isometry");
    let apply = |m: &Matrix, v: &Vector| Vector::from_coords(v.n(), &m.apply(&v.coords())).expect("square");

    // E'' = g^{-1} E, E = span(e_{n0+1..q})
    let e2: Vec<Vector> = (n0 + 1..=q).map(|i| apply(&gi, &Vector::basis_e(q, i))).collect();
    // V_n ⊕ F = span(e_1..e_n, f_1..f_q)
    let vnf: Vec<Vector> = (1..=n)
        .map(|i| Vector::basis_e(q, i))
        .chain((1..=q).map(|i| Vector::basis_f(q, i)))
        .collect();
    let cap = span_intersection(&e2, &vnf, q);
    let f_extra: Vec<Vector> = (n + 1..=q).map(|i| Vector::basis_f(q, i)).collect();
    // (E'')^⊥ ∩ F: φ ∈ F with (φ|y) = 0 for y ∈ E''
    let perp_meets_f = if f_extra.is_empty() {
        false
    } else {
        let m = Matrix::from_rows(
            e2.iter().map(|y| f_extra.iter().map(|f| f.dot(y)).collect()).collect(),
            f_extra.len(),
        );
        m.rank() < f_extra.len()
    };
    let genericity = Genericity { intersection_dim: cap.len(), expected_dim: n - n0, perp_meets_f };
    if !genericity.holds() {
        return Err(Error::Degenerate(format!(
            "g is not generic: dim E''∩(V_n⊕F) = {} (expected {}), (E'')^⊥∩F {}; resample g",
            genericity.intersection_dim,
            genericity.expected_dim,
            if perp_meets_f { "nonzero" } else { "zero" }
        )));
    }

    // Ẽ: projection of the intersection along F onto V_n
    let e_tilde: Vec<Vector> = cap.iter().map(|v| Vector { e: v.e[..n].to_vec(), f: v.f[..n].to_vec() }).collect();
    let g_prime = if n0 == n {
        GroupElement::identity(n)
    } else {
        move_isotropic_to_last(n, &e_tilde)?
    };
    let gpi = g_prime.vector_matrix().inverse().expect("isometry");

    // σ = ḡ ∘ h2 ∘ h1^{-1} ∘ (ḡ')^{-1}
    let phi_matrix = (!f_extra.is_empty()).then(|| {
        Matrix::from_rows(
            e2.iter().map(|y| f_extra.iter().map(|f| f.dot(y)).collect()).collect(),
            f_extra.len(),
        )
    });
    let mut sigma_cols = Vec::with_capacity(2 * n0);
    for j in 0..2 * n0 {
        let w1 = apply(&gpi, &Vector::basis(n0, j).embed(n));
        let mut w2 = w1.embed(q);
        if let Some(pm) = &phi_matrix {
            let rhs: Vec<Rational> = e2.iter().map(|y| -w2.dot(y)).collect();
            let phi = pm
                .solve(&rhs)
                .ok_or_else(|| Error::Invalid("no lift into (E'')^⊥".into()))?;
            for (f, c) in f_extra.iter().zip(&phi) {
                w2 = w2.add(&f.scale(c));
            }
        }
        if e2.iter().any(|y| !w2.dot(y).is_zero()) {
            return Err(Error::Invalid("lift is not orthogonal to E''".into()));
        }
        let w3 = apply(&gm, &w2);
        if w3.f[n0..].iter().any(|x| !x.is_zero()) {
            return Err(Error::Invalid("image leaves E^⊥".into()));
        }
        let mut col = w3.e[..n0].to_vec();
        col.extend(w3.f[..n0].iter().cloned());
        sigma_cols.push(col);
    }
    let sigma = Matrix::from_columns(sigma_cols, 2 * n0);
    check_special_orthogonal(&sigma, n0)?;

    let mut lifts = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let lhs = half_matrix(n, n0, parity, |x| {
            pi_tower(&g.apply(&tau_tower(x, q).expect("raise")), n0).expect("lower")
        });
        let right = half_matrix(n, n0, parity, |x| pi_tower(&g_prime.apply(x), n0).expect("lower"));
        let s = solve_left(&lhs, &right)
            .ok_or_else(|| Error::Invalid(format!("{parity:?}: kernel of π∘g' is not killed by π∘g∘τ")))?;
        check_lift(&s, &sigma, n0, parity)?;
        let (normalized, lambda) = normalize(&s)?;
        lifts.push((parity, normalized, lambda));
    }
    Ok(Factorization { g_prime, sigma, lifts, genericity })
}

fn check_special_orthogonal(sigma: &Matrix, n: usize) -> Result<()> {
    for i in 0..2 * n {
        for j in 0..2 * n {
            let a = Vector::from_coords(n, &sigma.column(i)).expect("width");
            let b = Vector::from_coords(n, &sigma.column(j)).expect("width");
            if a.dot(&b) != Vector::basis(n, i).dot(&Vector::basis(n, j)) {
                return Err(Error::Invalid("g'' is not an isometry".into()));
            }
        }
    }
    if !sigma.det().is_one() {
        return Err(Error::Invalid("g'' has determinant -1".into()));
    }
    Ok(())
}

/// `S` with `S · right = left`, provided `right` has full row rank.
fn solve_left(left: &Matrix, right: &Matrix) -> Option<Matrix> {
    let rt = right.transpose();
    let mut rows = Vec::with_capacity(left.rows());
    for r in 0..left.rows() {
        rows.push(rt.solve(left.row(r))?);
    }
    let s = Matrix::from_rows(rows, right.rows());
    (s.mul(right) == *left).then_some(s)
}

/// `S ρ(X) = ρ(σ X σ^{-1}) S` on one half-spin space for every basis two-form `X`.
fn check_lift(s: &Matrix, sigma: &Matrix, n: usize, parity: Parity) -> Result<()> {
    if s.is_zero() {
        return Err(Error::Invalid("spin factor vanishes".into()));
    }
    let image = |j: usize| Vector::from_coords(n, &sigma.column(j)).expect("width");
    for a in 0..2 * n {
        for b in a + 1..2 * n {
            let x = SoElement::wedge(&Vector::basis(n, a), &Vector::basis(n, b));
            let y = SoElement::wedge(&image(a), &image(b));
            let rx = half_matrix(n, n, parity, |v| v.rho(&x).expect("level"));
            let ry = half_matrix(n, n, parity, |v| v.rho(&y).expect("level"));
            if s.mul(&rx) != ry.mul(s) {
                return Err(Error::Invalid(format!("{parity:?}: spin factor does not lift g''")));
            }
        }
    }
    Ok(())
}

/// Scales `s` so its first nonzero entry, in column-major order, is 1.
fn normalize(s: &Matrix) -> Result<(Matrix, Rational)> {
    for j in 0..s.cols() {
        for i in 0..s.rows() {
            if !s[(i, j)].is_zero() {
                let lambda = s[(i, j)].clone();
                return Ok((s.scale(&lambda.recip()), lambda));
            }
        }
    }
    Err(Error::Invalid("spin factor vanishes".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{adapted_basis, omega_of, pluecker, random_maximal_isotropic, sample_cone_point};
    use crate::group::random_group_element;
    use crate::rational::{int, pow2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(n: usize, parity: Parity, seed: u64) -> SpinVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = SpinVector::zero(n);
        for m in bits::subsets_with_parity(n, parity.is_odd()) {
            x.add_term(m, int(rng.gen_range(-3..=3)));
        }
        x
    }

    #[test]
    fn nu2_examples() {
        let n = 3;
        let ff = ExteriorVector::from_vectors(n, &(1..=n).map(|i| Vector::basis_f(n, i)).collect::<Vec<_>>());
        assert_eq!(nu2(&SpinVector::one(n)), ff);
        let x = dense(n, Parity::Even, 1);
        assert_eq!(nu2(&x.scale(&int(3))), nu2(&x).scale(&int(9)));
        assert!(!nu2(&SpinVector::omega0(n)).is_zero());
    }

    #[test]
    fn nu2_of_omega_h_is_scaled_pluecker() {
        for n in 1..=4 {
            for h in IsotropicSubspace::all_coordinate(n) {
                let k = adapted_basis(&h).unwrap().k;
                let lhs = nu2(&omega_of(&h).unwrap());
                assert_eq!(lhs, pluecker(&h).unwrap().scale(&pow2(n - k)), "n={n} H={h}");
            }
        }
        for seed in 0..4 {
            let h = random_maximal_isotropic(4, seed).unwrap();
            let k = adapted_basis(&h).unwrap().k;
            assert_eq!(nu2(&omega_of(&h).unwrap()), pluecker(&h).unwrap().scale(&pow2(4 - k)));
        }
    }

    #[test]
    fn contraction_examples() {
        for n in 2..=4 {
            let mut vs: Vec<Vector> = (1..n).map(|i| Vector::basis_e(n, i)).collect();
            vs.push(Vector::basis_f(n, n));
            let w = ExteriorVector::from_vectors(n, &vs);
            let expect = ExteriorVector::from_vectors(n - 1, &(1..n).map(|i| Vector::basis_e(n - 1, i)).collect::<Vec<_>>());
            assert_eq!(contract_ce_last(&w).unwrap(), expect.scale(&sign(n - 1)));
            let top = ExteriorVector::from_vectors(n, &(1..=n).map(|i| Vector::basis_e(n, i)).collect::<Vec<_>>());
            assert!(contract_ce_last(&top).unwrap().is_zero());
        }
        let n = 2;
        let bad = contract_ce(&ExteriorVector::one(n), &Vector::basis_e(n, 1).add(&Vector::basis_f(n, 1)), &Vector::basis_f(n, 1));
        assert_eq!(bad, Err(Error::NotIsotropic));
        let bad = mult_mh(&ExteriorVector::one(n), &Vector::basis_e(n, 1), &Vector::basis_f(n, 2));
        assert_eq!(bad, Err(Error::NotHyperbolic));
    }

    #[test]
    fn contraction_after_multiplication_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            let mut w = ExteriorVector::zero(n);
            for m in 0..1u32 << (2 * n) {
                let mono = Monomial::new(m & bits::full(n), m >> n);
                if mono.degree() == n {
                    w.add_term(mono, int(rng.gen_range(-2..=2)));
                }
            }
            assert_eq!(contract_ce_last(&mult_mh_last(&w)).unwrap(), w);
        }
    }

    #[test]
    fn diagrams_on_bases() {
        for n in 1..=3 {
            for p in [Parity::Even, Parity::Odd] {
                for m in bits::subsets_with_parity(n, p.is_odd()) {
                    let x = SpinVector::basis(n, m);
                    assert!(diagram_pi_residual(&x).unwrap().is_zero(), "pi n={n} {x}");
                    // the stated sign is right only when the upper level is odd
                    let upper = CartanContext::new(n + 1);
                    let zero = diagram_tau_residual(&x).unwrap().is_zero();
                    assert_eq!(zero, (n + 1) % 2 == 1, "tau n={n} {x}");
                    assert_eq!(diagram_tau_scalar(&x).unwrap(), Some(upper.pi_sign(p)));
                }
            }
        }
    }

    #[test]
    fn diagrams_on_dense_vectors() {
        for seed in 0..4 {
            for p in [Parity::Even, Parity::Odd] {
                let x = dense(4, p, seed);
                assert!(diagram_pi_residual(&x).unwrap().is_zero());
                assert!(diagram_tau_residual(&x).unwrap().is_zero());
            }
        }
        let mixed = SpinVector::one(2).add(&SpinVector::basis(2, 1));
        assert!(matches!(diagram_pi_residual(&mixed), Err(Error::MixedParity)));
    }

    #[test]
    fn injectivity_examples() {
        let n = 4;
        let x = sample_cone_point(n, 1, Parity::Even).unwrap();
        let y = sample_cone_point(n, 2, Parity::Even).unwrap();
        assert_eq!(injectivity_witness(&x, &y).unwrap(), Injectivity::Separated);
        assert_eq!(injectivity_witness(&x, &x.scale(&int(-2))).unwrap(), Injectivity::SameLine);
        assert_eq!(injectivity_witness(&SpinVector::zero(n), &x), Err(Error::ZeroVector));
    }

    #[test]
    fn sl_word_reproduces_matrix() {
        let p = Matrix::from_rows(
            vec![
                vec![int(0), int(1), int(0)],
                vec![int(-1), int(0), int(0)],
                vec![int(2), int(3), int(1)],
            ],
            3,
        );
        let g = GroupElement::from_word(3, sl_word(&p).unwrap()).unwrap();
        let m = g.vector_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[(i, j)], p[(i, j)]);
            }
        }
    }

    #[test]
    fn lower_identity_case() {
        let g = GroupElement::identity(4);
        let f = lower_factorization(4, 4, 4, &g).unwrap();
        assert_eq!(f.sigma, Matrix::identity(8));
        for (_, s, lambda) in &f.lifts {
            assert_eq!(s, &Matrix::identity(8));
            assert!(lambda.is_one());
        }
    }

    #[test]
    fn lower_random_case() {
        let g = random_group_element(5, 3, 24).unwrap();
        let f = lower_factorization(5, 5, 4, &g).unwrap();
        assert!(f.genericity.holds());
        assert_ne!(f.sigma, Matrix::identity(8));
        let (parity, s, lambda) = &f.lifts[0];
        let s = s.scale(lambda);
        assert!(check_lift(&s, &f.sigma, 4, *parity).is_ok());
        assert!(check_lift(&s, &Matrix::identity(8), 4, *parity).is_err());
    }

    #[test]
    fn lower_rejects_degenerate_g() {
        // a Weyl element sending e_1 to e_5, so that E'' = span(e_1) lies in V_4
        let word = vec![
            Factor::new(RootVector::EF(5, 1), int(1)),
            Factor::new(RootVector::EF(1, 5), int(-1)),
            Factor::new(RootVector::EF(5, 1), int(1)),
        ];
        let g = GroupElement::from_word(5, word).unwrap();
        assert!(matches!(lower_factorization(5, 4, 4, &g), Err(Error::Degenerate(_))));
        assert!(lower_factorization(5, 6, 4, &g).is_err());
    }
}
