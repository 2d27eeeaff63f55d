//! Level-changing maps between spin representations and the invariant
//! bilinear form `β`.

use num_traits::{One, Zero};

use crate::bits;
use crate::clifford::{CliffordElement, Monomial, Symbol};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{frac, sign, Rational};
use crate::spin::{Parity, SpinVector};
use crate::vector::Vector;

/// Largest level for dense materialisation of spin-space matrices.
pub const DENSE_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelMapKind {
    Contraction,
    Multiplication,
    DualContraction,
}

/// Shape of one of the three tower maps at a given source level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelMap {
    pub source: usize,
    pub target: usize,
    pub kind: LevelMapKind,
}

impl LevelMap {
    pub fn new(kind: LevelMapKind, source: usize) -> Result<Self> {
        let target = match kind {
            LevelMapKind::Contraction => source.checked_sub(1).ok_or(Error::LevelZero)?,
            LevelMapKind::Multiplication | LevelMapKind::DualContraction => source + 1,
        };
        Ok(Self { source, target, kind })
    }

    pub fn flips_parity(&self) -> bool {
        self.kind == LevelMapKind::DualContraction
    }

    pub fn apply(&self, x: &SpinVector) -> Result<SpinVector> {
        if x.n() != self.source {
            return Err(Error::LevelMismatch { left: self.source, right: x.n() });
        }
        match self.kind {
            LevelMapKind::Contraction => pi_last(x),
            LevelMapKind::Multiplication => Ok(tau_last(x)),
            LevelMapKind::DualContraction => Ok(psi_last(x)),
        }
    }
}

/// Contraction with `e_n`: reduction modulo `e_n`.
pub fn pi_last(x: &SpinVector) -> Result<SpinVector> {
    let n = x.n();
    if n == 0 {
        return Err(Error::LevelZero);
    }
    let mut out = SpinVector::zero(n - 1);
    for (m, c) in x.terms() {
        if !bits::contains(*m, n) {
            out.add_term(*m, c.clone());
        }
    }
    Ok(out)
}

/// Multiplication with `f_{n+1}`: the inclusion.
pub fn tau_last(x: &SpinVector) -> SpinVector {
    x.embed(x.n() + 1)
}

/// Dual contraction `ω ↦ ω ∧ e_{n+1}`.
pub fn psi_last(x: &SpinVector) -> SpinVector {
    let m = x.n() + 1;
    let mut out = SpinVector::zero(m);
    for (mask, c) in x.terms() {
        out.add_term(mask | bits::bit(m), c.clone());
    }
    out
}

/// `π_{n,m}`: repeated contraction down to level `m`.
pub fn pi_tower(x: &SpinVector, m: usize) -> Result<SpinVector> {
    if m > x.n() {
        return Err(Error::Invalid(format!("cannot contract level {} to {m}", x.n())));
    }
    let mut y = x.clone();
    while y.n() > m {
        y = pi_last(&y)?;
    }
    Ok(y)
}

/// `τ_{n,m}`: repeated multiplication up to level `m`.
pub fn tau_tower(x: &SpinVector, m: usize) -> Result<SpinVector> {
    if m < x.n() {
        return Err(Error::Invalid(format!("cannot raise level {} to {m}", x.n())));
    }
    Ok(x.embed(m))
}

/// `β(x, y)`: the coefficient of `f` in `(xf)^* (yf)`.
pub fn beta(x: &SpinVector, y: &SpinVector) -> Result<Rational> {
    if x.n() != y.n() {
        return Err(Error::LevelMismatch { left: x.n(), right: y.n() });
    }
    let p = x.to_left_ideal().star().mul(&y.to_left_ideal())?;
    Ok(p.coeff(Monomial::new(0, bits::full(x.n()))))
}

/// Gram matrix of `β` on the basis `e_S`, `S` in bitmask order.
pub fn beta_gram(n: usize) -> Result<Matrix> {
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let dim = 1usize << n;
    let mut g = Matrix::zeros(dim, dim);
    for a in 0..dim {
        let sa = SpinVector::basis(n, a as u32).to_left_ideal().star();
        for b in 0..dim {
            let p = sa.mul(&SpinVector::basis(n, b as u32).to_left_ideal())?;
            g[(a, b)] = p.coeff(Monomial::new(0, bits::full(n)));
        }
    }
    Ok(g)
}

/// `β_{n-1}(π(x), a) - ((-1)^{n-1}/2) β_n(x, ψ(a))`.
pub fn psidual_residual(a: &SpinVector, x: &SpinVector) -> Result<Rational> {
    let n = x.n();
    if a.n() + 1 != n {
        return Err(Error::LevelMismatch { left: a.n() + 1, right: n });
    }
    let lhs = beta(&pi_last(x)?, a)?;
    let rhs = beta(x, &psi_last(a))? * sign(n - 1) * frac(1, 2);
    Ok(lhs - rhs)
}

/// The scalar `λ` with `β_{n-1}(π(x), a) = λ β_n(x, ψ(a))` on every pair of
/// basis vectors, if one exists.
pub fn psidual_scalar(n: usize) -> Result<Option<Rational>> {
    if n == 0 {
        return Err(Error::LevelZero);
    }
    let mut lambda: Option<Rational> = None;
    for a in 0..1u32 << (n - 1) {
        let av = SpinVector::basis(n - 1, a);
        let pa = psi_last(&av);
        for x in 0..1u32 << n {
            let xv = SpinVector::basis(n, x);
            let lhs = beta(&pi_last(&xv)?, &av)?;
            let rhs = beta(&xv, &pa)?;
            match (&lambda, rhs.is_zero()) {
                (_, true) if !lhs.is_zero() => return Ok(None),
                (_, true) => {}
                (None, false) => lambda = Some(lhs / rhs),
                (Some(l), false) => {
                    if lhs != l * rhs {
                        return Ok(None);
                    }
                }
            }
        }
    }
    Ok(lambda)
}

/// Hyperbolic basis `e'_1..e'_n, f'_1..f'_n` with `e'_n = e`, the `f'`
/// spanning `F` and `(e|f'_i) = δ_{in}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionFrame {
    pub new_e: Vec<Vector>,
    pub new_f: Vec<Vector>,
    /// Index `p` of the standard `f_p` promoted to `f'_n`.
    pub pivot: usize,
}

impl ContractionFrame {
    /// Builds the frame, pivoting on the highest `p` with `(e|f_p) != 0`.
    pub fn new(e: &Vector) -> Result<Self> {
        let n = e.n();
        if !e.is_isotropic() {
            return Err(Error::NotIsotropic);
        }
        let Some(p) = (1..=n).rev().find(|&i| !e.e[i - 1].is_zero()) else {
            return Err(Error::VectorInF);
        };
        let a_p = e.e[p - 1].clone();
        let mut new_f = Vec::with_capacity(n);
        for j in (1..=n).filter(|&j| j != p) {
            let adj = Vector::basis_f(n, p).scale(&(&e.e[j - 1] / &a_p));
            new_f.push(Vector::basis_f(n, j).sub(&adj));
        }
        new_f.push(Vector::basis_f(n, p).scale(&a_p.recip()));

        // E-dual basis of the f'
        let fmat = Matrix::from_rows(new_f.iter().map(|v| v.f.clone()).collect(), n);
        let dual = fmat.inverse().expect("f' is a basis").transpose();
        let hat: Vec<Vector> = (0..n)
            .map(|i| Vector { e: dual.row(i).to_vec(), f: vec![Rational::zero(); n] })
            .collect();
        let b = e.sub(&hat[n - 1]);
        debug_assert!(b.e_part_is_zero());
        let mut new_e: Vec<Vector> = hat[..n - 1]
            .iter()
            .map(|h| h.sub(&new_f[n - 1].scale(&h.dot(&b))))
            .collect();
        new_e.push(e.clone());
        Ok(Self { new_e, new_f, pivot: p })
    }

    pub fn n(&self) -> usize {
        self.new_e.len()
    }

    /// Coordinates of `v` in the primed basis.
    pub fn coordinates(&self, v: &Vector) -> Vector {
        Vector {
            e: self.new_f.iter().map(|f| v.dot(f)).collect(),
            f: self.new_e.iter().map(|e| v.dot(e)).collect(),
        }
    }

    /// Clifford automorphism rewriting an element in primed coordinates.
    pub fn to_primed(&self, x: &CliffordElement) -> CliffordElement {
        let n = self.n();
        let images: Vec<(Symbol, CliffordElement)> = (1..=n)
            .map(Symbol::E)
            .chain((1..=n).map(Symbol::F))
            .map(|s| (s, CliffordElement::from_vector(&self.coordinates(&s.to_vector(n)))))
            .collect();
        let image = |s: Symbol| -> &CliffordElement {
            &images.iter().find(|(t, _)| *t == s).expect("symbol present").1
        };
        let mut out = CliffordElement::zero(n);
        for (m, c) in x.terms() {
            let mut acc = CliffordElement::scalar(n, c.clone());
            for s in m.symbols() {
                acc = acc.mul(image(s)).expect("same level");
            }
            out = out.add(&acc).expect("same level");
        }
        out
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
}

/// Contraction with an arbitrary isotropic `e ∉ F`, computed from
/// `½((-1)^{n-1} e x + x e)` on the even part and `½((-1)^n e x + x e)` on
/// the odd part, and expressed in the frame of [`ContractionFrame::new`].
pub fn pi_general(x: &SpinVector, e: &Vector) -> Result<(SpinVector, ContractionFrame)> {
    let n = x.n();
    if n == 0 {
        return Err(Error::LevelZero);
    }
    if e.n() != n {
        return Err(Error::LevelMismatch { left: e.n(), right: n });
    }
    let frame = ContractionFrame::new(e)?;
    let ce = CliffordElement::from_vector(e);
    let mut y = CliffordElement::zero(n);
    for parity in [Parity::Even, Parity::Odd] {
        let part = x.part(parity);
        if part.is_zero() {
            continue;
        }
        let k = if parity.is_odd() { n } else { n - 1 };
        let xp = part.to_left_ideal();
        let t = ce.mul(&xp)?.scale(&sign(k)).add(&xp.mul(&ce)?)?;
        y = y.add(&t.scale(&frac(1, 2)))?;
    }
    let primed = frame.to_primed(&y);
    let fbar = bits::full(n - 1);
    let mut out = SpinVector::zero(n - 1);
    for (m, c) in primed.terms() {
        if bits::contains(m.e, n) {
            continue;
        }
        if m.f != fbar {
            return Err(Error::Invalid(format!(
                "contraction produced {m} outside the left ideal"
            )));
        }
        out.add_term(m.e, c.clone());
    }
    Ok((out, frame))
}
