//! Maximal isotropic subspaces, adapted bases, pure spinors and the
//! annihilator test for the isotropic Grassmann cone.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits;
use crate::error::{Error, Result};
use crate::exterior::ExteriorVector;
use crate::group::{random_group_element, Factor, GroupElement, DEFAULT_LENGTH};
use crate::linalg::Matrix;
use crate::rational::{int, Rational};
use crate::so::RootVector;
use crate::spin::{Parity, SpinVector};
use crate::vector::Vector;

/// An isotropic subspace of `V_n`, stored by the canonical RREF of its rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSubspace {
    n: usize,
    rows: Matrix,
}

/// Gram matrix `((r_i|r_j))` of a list of vectors.
pub fn gram(vs: &[Vector]) -> Matrix {
    let k = vs.len();
    let mut g = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = vs[i].dot(&vs[j]);
        }
    }
    g
}

impl IsotropicSubspace {
    /// Validates a `k × 2n` matrix of rows in coordinates `e_1..e_n, f_1..f_n`.
    pub fn check(n: usize, rows: &Matrix) -> Result<Self> {
        if rows.cols() != 2 * n {
            return Err(Error::Invalid(format!(
                "rows have {} columns, expected {}",
                rows.cols(),
                2 * n
            )));
        }
        let vs: Vec<Vector> = rows
            .row_vectors()
            .iter()
            .map(|r| Vector::from_coords(n, r).expect("width checked"))
            .collect();
        for i in 0..vs.len() {
            for j in i..vs.len() {
                let d = vs[i].dot(&vs[j]);
                if !d.is_zero() {
                    return Err(Error::NonIsotropicRows { i, j, value: d.to_string() });
                }
            }
        }
        let rank = rows.rank();
        if rank < rows.rows() {
            return Err(Error::RankDeficient { rank, rows: rows.rows() });
        }
        Ok(Self { n, rows: rows.row_space() })
    }

    pub fn from_vectors(n: usize, vs: &[Vector]) -> Result<Self> {
        Self::check(n, &Matrix::from_rows(vs.iter().map(Vector::coords).collect(), 2 * n))
    }

    /// `E = span(e_1..e_n)`.
    pub fn e_space(n: usize) -> Self {
        Self::coordinate(n, bits::full(n))
    }

    /// `F = span(f_1..f_n)`.
    pub fn f_space(n: usize) -> Self {
        Self::coordinate(n, 0)
    }

    /// `span(e_i : i ∈ S, f_j : j ∉ S)`.
    pub fn coordinate(n: usize, s: u32) -> Self {
        let vs: Vec<Vector> = (1..=n)
            .map(|i| {
                if bits::contains(s, i) {
                    Vector::basis_e(n, i)
                } else {
                    Vector::basis_f(n, i)
                }
            })
            .collect();
        Self::from_vectors(n, &vs).expect("coordinate subspaces are isotropic")
    }

    /// All `2^n` coordinate maximal isotropic subspaces.
    pub fn all_coordinate(n: usize) -> Vec<Self> {
        (0..=bits::full(n)).map(|s| Self::coordinate(n, s)).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.rows()
    }

    pub fn is_maximal(&self) -> bool {
        self.dim() == self.n
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows
            .row_vectors()
            .iter()
            .map(|r| Vector::from_coords(self.n, r).expect("width checked"))
            .collect()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let mut rows = self.rows.row_vectors();
        rows.push(v.coords());
        Matrix::from_rows(rows, 2 * self.n).rank() == self.dim()
    }

    /// Vectors of the subspace lying in `F`.
    pub fn intersect_f(&self) -> Vec<Vector> {
        let n = self.n;
        let basis = self.basis();
        let e_block = Matrix::from_columns(basis.iter().map(|v| v.e.clone()).collect(), n);
        let mut out = Vec::new();
        for c in e_block.nullspace() {
            let mut v = Vector::zero(n);
            for (b, ci) in basis.iter().zip(&c) {
                v = v.add(&b.scale(ci));
            }
            out.push(v);
        }
        out
    }

    /// Image under a linear map on `V_n` given as a matrix.
    pub fn transform(&self, g: &Matrix) -> Result<Self> {
        let vs: Vec<Vector> = self
            .basis()
            .iter()
            .map(|v| Vector::from_coords(self.n, &g.apply(&v.coords())).expect("square"))
            .collect();
        Self::from_vectors(self.n, &vs)
    }
}

impl fmt::Display for IsotropicSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .row_vectors()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Hyperbolic basis adapted to `H` and `F`: `f'_1..f'_k` span `H ∩ F`,
/// and `e'_{k+1}..e'_n, f'_1..f'_k` span `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedBasis {
    pub new_e: Vec<Vector>,
    pub new_f: Vec<Vector>,
    pub k: usize,
}

impl AdaptedBasis {
    pub fn n(&self) -> usize {
        self.new_e.len()
    }

    /// `det` of the `f'` in terms of the standard `f`, so that
    /// `f'_1 ⋯ f'_n = det · f_1 ⋯ f_n`.
    pub fn f_det(&self) -> Rational {
        let n = self.n();
        Matrix::from_rows(self.new_f.iter().map(|v| v.f.clone()).collect(), n).det()
    }

    pub fn is_hyperbolic(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let d = if i == j { Rational::one() } else { Rational::zero() };
                self.new_e[i].dot(&self.new_e[j]).is_zero()
                    && self.new_f[i].dot(&self.new_f[j]).is_zero()
                    && self.new_e[i].dot(&self.new_f[j]) == d
            })
        })
    }

    /// Spanning vectors of `H` in the adapted order.
    pub fn h_basis(&self) -> Vec<Vector> {
        self.new_e[self.k..]
            .iter()
            .chain(&self.new_f[..self.k])
            .cloned()
            .collect()
    }
}

pub fn adapted_basis(h: &IsotropicSubspace) -> Result<AdaptedBasis> {
    let n = h.n();
    if !h.is_maximal() {
        return Err(Error::NotMaximal { dim: h.dim(), n });
    }
    // f'_1..f'_k: canonical basis of H ∩ F, completed by standard f_j
    let hf = h.intersect_f();
    let hf_rows = Matrix::from_rows(hf.iter().map(|v| v.f.clone()).collect(), n);
    let (rref, pivots) = hf_rows.rref();
    let k = pivots.len();
    let mut new_f: Vec<Vector> = (0..k)
        .map(|i| Vector { e: vec![Rational::zero(); n], f: rref.row(i).to_vec() })
        .collect();
    for j in (0..n).filter(|j| !pivots.contains(j)) {
        new_f.push(Vector::basis_f(n, j + 1));
    }

    // normalise so that f'_1 ⋯ f'_n = f_1 ⋯ f_n
    if n > 0 {
        let det = Matrix::from_rows(new_f.iter().map(|v| v.f.clone()).collect(), n).det();
        new_f[n - 1] = new_f[n - 1].scale(&det.recip());
    }
    let fmat = Matrix::from_rows(new_f.iter().map(|v| v.f.clone()).collect(), n);
    let dual = fmat.inverse().expect("completed basis").transpose();
    let hat: Vec<Vector> = (0..n)
        .map(|i| Vector { e: dual.row(i).to_vec(), f: vec![Rational::zero(); n] })
        .collect();

    // elements of H with prescribed E-part
    let basis = h.basis();
    let e_block = Matrix::from_columns(basis.iter().map(|v| v.e.clone()).collect(), n);
    let mut new_e = hat.clone();
    for i in k..n {
        let c = e_block
            .solve(&hat[i].e)
            .ok_or_else(|| Error::Invalid("E-projection of H is too small".into()))?;
        let mut v = Vector::zero(n);
        for (b, ci) in basis.iter().zip(&c) {
            v = v.add(&b.scale(ci));
        }
        for j in 0..k {
            let coeff = v.dot(&hat[j]);
            v = v.sub(&new_f[j].scale(&coeff));
        }
        new_e[i] = v;
    }
    Ok(AdaptedBasis { new_e, new_f, k })
}

/// `ω_H = e'_{k+1} ⋯ e'_n f'_1 ⋯ f'_n`, written in the standard model.
pub fn omega_of(h: &IsotropicSubspace) -> Result<SpinVector> {
    let ab = adapted_basis(h)?;
    let n = h.n();
    let mut x = SpinVector::term(n, 0, ab.f_det());
    for v in ab.new_e[ab.k..].iter().rev() {
        x = x.act_vector(v);
    }
    Ok(x)
}

/// Kernel of `v ↦ v · x`, as a list of vectors.
pub fn annihilator_basis(x: &SpinVector) -> Result<Vec<Vector>> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = x.n();
    let columns: Vec<Vec<Rational>> = (0..2 * n)
        .map(|j| x.act_vector(&Vector::basis(n, j)).coords())
        .collect();
    let m = Matrix::from_columns(columns, 1 << n);
    Ok(m.nullspace()
        .into_iter()
        .map(|c| Vector::from_coords(n, &c).expect("2n coordinates"))
        .collect())
}

/// `{v ∈ V : v · x = 0}`, which is always isotropic.
pub fn annihilator(x: &SpinVector) -> Result<IsotropicSubspace> {
    let vs = annihilator_basis(x)?;
    if vs.is_empty() {
        return Ok(IsotropicSubspace { n: x.n(), rows: Matrix::zeros(0, 2 * x.n()) });
    }
    IsotropicSubspace::from_vectors(x.n(), &vs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Purity {
    Zero,
    Pure(IsotropicSubspace),
    NotPure { annihilator_dim: usize },
}

impl Purity {
    pub fn is_pure(&self) -> bool {
        matches!(self, Purity::Pure(_))
    }

    /// Membership in the cone, counting 0 as a member.
    pub fn on_cone(&self) -> bool {
        !matches!(self, Purity::NotPure { .. })
    }
}

pub fn is_pure(x: &SpinVector) -> Purity {
    if x.is_zero() {
        return Purity::Zero;
    }
    let h = annihilator(x).expect("nonzero");
    if h.is_maximal() {
        Purity::Pure(h)
    } else {
        Purity::NotPure { annihilator_dim: h.dim() }
    }
}

/// Dimension of `S_H = {ω : v · ω = 0 for all v ∈ H}`.
pub fn s_h_dimension(h: &IsotropicSubspace) -> usize {
    let n = h.n();
    let dim = 1usize << n;
    let mut rows = Vec::new();
    for v in h.basis() {
        let op = crate::spin::operator_matrix(n, |x| x.act_vector(&v));
        rows.extend(op.row_vectors());
    }
    let m = Matrix::from_rows(rows, dim);
    dim - m.rank()
}

/// `e'_{k+1} ∧ ⋯ ∧ e'_n ∧ f'_1 ∧ ⋯ ∧ f'_k`.
pub fn pluecker(h: &IsotropicSubspace) -> Result<ExteriorVector> {
    let ab = adapted_basis(h)?;
    Ok(ExteriorVector::from_vectors(h.n(), &ab.h_basis()))
}

/// A seeded point of the even or odd cone: `g · ω_0` or `g · ω_1`.
pub fn sample_cone_point(n: usize, seed: u64, parity: Parity) -> Result<SpinVector> {
    let g = random_group_element(n, seed, DEFAULT_LENGTH)?;
    Ok(g.apply(&SpinVector::highest(n, parity)))
}

/// A seeded point `exp(X) · ω` of the open cell around `ω = highest(n, parity)`,
/// with `X` a combination of the root vectors in `∧²` of an isotropic
/// complement of the annihilator of `ω`; parameters lie in `-3..=3`.
pub fn sample_cell_point(n: usize, seed: u64, parity: Parity) -> Result<SpinVector> {
    let base = SpinVector::highest(n, parity);
    let top = if base == SpinVector::omega0(n) { n } else { n.saturating_sub(1) };
    let mut roots = Vec::new();
    for i in 1..=top {
        for j in i + 1..=top {
            roots.push(RootVector::FF(i, j));
        }
    }
    if top < n {
        roots.extend((1..n).map(|i| RootVector::EF(n, i)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = roots
        .into_iter()
        .map(|r| Factor::new(r, int(rng.gen_range(-3..=3))))
        .filter(|f| !f.is_trivial())
        .collect();
    Ok(GroupElement::from_word(n, word)?.apply(&base))
}

/// A seeded maximal isotropic subspace `g E` with `g` a random word in `SO(V_n)`.
pub fn random_maximal_isotropic(n: usize, seed: u64) -> Result<IsotropicSubspace> {
    let g = random_group_element(n, seed, DEFAULT_LENGTH)?;
    IsotropicSubspace::e_space(n).transform(&g.vector_matrix())
}

/// A seeded vector with small integer coordinates on one half-spin space,
/// rejected until it is off the cone.
pub fn sample_off_cone(n: usize, seed: u64, parity: Parity) -> SpinVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let masks = bits::subsets_with_parity(n, parity.is_odd());
        let mut x = SpinVector::zero(n);
        for m in masks {
            x.add_term(m, int(rng.gen_range(-3..=3)));
        }
        if matches!(is_pure(&x), Purity::NotPure { .. }) {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordElement;
    use crate::group::exp_nilpotent;
    use crate::so::RootVector;

    fn rows(n: usize, vs: &[Vector]) -> Matrix {
        Matrix::from_rows(vs.iter().map(Vector::coords).collect(), 2 * n)
    }

    #[test]
    fn check_examples() {
        let n = 2;
        let e = IsotropicSubspace::check(n, &rows(n, &[Vector::basis_e(n, 1), Vector::basis_e(n, 2)]));
        assert!(e.unwrap().is_maximal());
        let bad = IsotropicSubspace::check(n, &rows(n, &[Vector::basis_e(n, 1), Vector::basis_f(n, 1)]));
        assert!(matches!(bad, Err(Error::NonIsotropicRows { i: 0, j: 1, .. })));
        let v1 = Vector::basis_e(n, 1).add(&Vector::basis_f(n, 2));
        let v2 = Vector::basis_e(n, 2).sub(&Vector::basis_f(n, 1));
        assert!(IsotropicSubspace::check(n, &rows(n, &[v1.clone(), v2])).unwrap().is_maximal());
        let dup = IsotropicSubspace::check(n, &rows(n, &[v1.clone(), v1]));
        assert!(matches!(dup, Err(Error::RankDeficient { rank: 1, rows: 2 })));
    }

    #[test]
    fn adapted_basis_examples() {
        let n = 2;
        let ab = adapted_basis(&IsotropicSubspace::f_space(n)).unwrap();
        assert_eq!(ab.k, n);
        assert_eq!(ab.new_f, vec![Vector::basis_f(n, 1), Vector::basis_f(n, 2)]);
        let ab = adapted_basis(&IsotropicSubspace::e_space(n)).unwrap();
        assert_eq!(ab.k, 0);
        assert_eq!(ab.new_e, vec![Vector::basis_e(n, 1), Vector::basis_e(n, 2)]);
        let h = IsotropicSubspace::from_vectors(n, &[Vector::basis_f(n, 1), Vector::basis_e(n, 2)]).unwrap();
        let ab = adapted_basis(&h).unwrap();
        assert_eq!(ab.k, 1);
        assert_eq!(ab.new_f[0], Vector::basis_f(n, 1));
        assert_eq!(ab.new_e[1], Vector::basis_e(n, 2));
        assert!(ab.is_hyperbolic());
        assert!(adapted_basis(&IsotropicSubspace::from_vectors(n, &[Vector::basis_e(n, 1)]).unwrap()).is_err());
    }

    #[test]
    fn omega_examples() {
        let n = 3;
        assert_eq!(omega_of(&IsotropicSubspace::e_space(n)).unwrap(), SpinVector::omega0(n));
        assert_eq!(omega_of(&IsotropicSubspace::f_space(n)).unwrap(), SpinVector::one(n));
        let h = IsotropicSubspace::from_vectors(2, &[Vector::basis_f(2, 1), Vector::basis_e(2, 2)]).unwrap();
        let via = CliffordElement::parse(2, "1*e2f1f2").unwrap();
        assert_eq!(omega_of(&h).unwrap(), SpinVector::from_left_ideal(&via).unwrap());
    }

    #[test]
    fn omega_matches_clifford_product() {
        for seed in 0..6 {
            let n = 3;
            let h = random_maximal_isotropic(n, seed).unwrap();
            let ab = adapted_basis(&h).unwrap();
            assert!(ab.is_hyperbolic());
            let mut c = CliffordElement::one(n);
            for v in ab.new_e[ab.k..].iter().chain(&ab.new_f) {
                c = c.mul(&CliffordElement::from_vector(v)).unwrap();
            }
            assert_eq!(omega_of(&h).unwrap(), SpinVector::from_left_ideal(&c).unwrap());
        }
    }

    #[test]
    fn annihilator_roundtrip() {
        for n in 1..=4 {
            for h in IsotropicSubspace::all_coordinate(n) {
                let w = omega_of(&h).unwrap();
                assert_eq!(annihilator(&w).unwrap(), h);
                assert_eq!(s_h_dimension(&h), 1);
            }
        }
        assert_eq!(
            annihilator(&SpinVector::omega0(3)).unwrap(),
            IsotropicSubspace::e_space(3)
        );
        assert_eq!(annihilator(&SpinVector::zero(2)), Err(Error::ZeroVector));
    }

    #[test]
    fn purity_examples() {
        let n = 4;
        assert!(is_pure(&SpinVector::omega0(n)).is_pure());
        let x = SpinVector::one(n).add(&SpinVector::omega0(n));
        assert!(matches!(is_pure(&x), Purity::NotPure { .. }));
        assert_eq!(is_pure(&SpinVector::zero(n)), Purity::Zero);
        for seed in 0..4 {
            for p in [Parity::Even, Parity::Odd] {
                let y = sample_cone_point(n, seed, p).unwrap();
                assert_eq!(y, sample_cone_point(n, seed, p).unwrap());
                assert!(is_pure(&y).is_pure());
                assert_eq!(y.pure_parity().unwrap(), p);
            }
        }
    }

    #[test]
    fn pluecker_examples() {
        let n = 3;
        assert_eq!(
            pluecker(&IsotropicSubspace::e_space(n)).unwrap(),
            ExteriorVector::from_vectors(n, &(1..=n).map(|i| Vector::basis_e(n, i)).collect::<Vec<_>>())
        );
        assert_eq!(
            pluecker(&IsotropicSubspace::f_space(n)).unwrap(),
            ExteriorVector::from_vectors(n, &(1..=n).map(|i| Vector::basis_f(n, i)).collect::<Vec<_>>())
        );
    }

    /// Pfaffian of a skew matrix by expansion along the first row.
    fn pfaffian(a: &Matrix, idx: &[usize]) -> Rational {
        if idx.is_empty() {
            return Rational::one();
        }
        if idx.len() % 2 == 1 {
            return Rational::zero();
        }
        let mut acc = Rational::zero();
        for j in 1..idx.len() {
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[j]).collect();
            let s = if j % 2 == 1 { int(1) } else { int(-1) };
            acc += s * &a[(idx[0], idx[j])] * pfaffian(a, &rest);
        }
        acc
    }

    #[test]
    fn ff_orbit_is_sub_pfaffian() {
        // exp(Σ a_ij ρ(f_i∧f_j)) ω_0 = Σ_S 2^{|S|/2} Pf(A_S) ι_S ω_0
        let n = 4;
        let mut a = Matrix::zeros(n, n);
        let entries = [(0, 1, 1), (0, 2, -2), (0, 3, 1), (1, 2, 2), (1, 3, -1), (2, 3, 1)];
        let mut x = SpinVector::omega0(n);
        for &(i, j, t) in &entries {
            a[(i, j)] = int(t);
            a[(j, i)] = int(-t);
            // the f∧f generators commute, so the product of exponentials is the exponential of the sum
            x = exp_nilpotent(n, RootVector::FF(i + 1, j + 1), int(t)).unwrap().apply(&x);
        }
        let mut expect = SpinVector::zero(n);
        for s in 0..=bits::full(n) {
            let idx: Vec<usize> = bits::indices(s).map(|i| i - 1).collect();
            if idx.len() % 2 == 1 {
                continue;
            }
            let mut w = SpinVector::omega0(n);
            for i in bits::indices(s).collect::<Vec<_>>().into_iter().rev() {
                w = w.inner_index(i);
            }
            let scale = crate::rational::pow2(idx.len() / 2) * pfaffian(&a, &idx);
            expect.add_assign(&w.scale(&scale));
        }
        assert_eq!(x, expect);
    }

    #[test]
    fn cell_points_are_pure() {
        for n in 1..=5 {
            for parity in [Parity::Even, Parity::Odd] {
                for seed in 0..4 {
                    let x = sample_cell_point(n, seed, parity).unwrap();
                    assert_eq!(x.pure_parity().unwrap(), parity);
                    assert!(is_pure(&x).is_pure(), "n={n} {parity} seed={seed}");
                }
            }
        }
    }
}
