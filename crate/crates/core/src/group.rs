//! Elements of `Spin(V_n)` as words of exponentials `exp(t ρ(X))` of
//! nilpotent root vectors.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{int, Rational};
use crate::so::RootVector;
use crate::spin::{operator_matrix, SpinVector};
use crate::vector::Vector;

/// Parameters drawn by [`random_group_element`].
pub const PARAMETERS: [i64; 4] = [-2, -1, 1, 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub root: RootVector,
    pub t: Rational,
}

#[derive(Debug)]
pub struct GroupElement {
    n: usize,
    word: Vec<Factor>,
    operator: OnceLock<Matrix>,
}

impl Clone for GroupElement {
    fn clone(&self) -> Self {
        Self { n: self.n, word: self.word.clone(), operator: OnceLock::new() }
    }
}

impl PartialEq for GroupElement {
    /// Group elements are equal when their operators agree.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.operator() == other.operator()
    }
}

/// `exp(t ρ(X)) x = Σ_k t^k ρ(X)^k x / k!`, summed until the powers vanish.
pub fn exp_apply(root: RootVector, t: &Rational, x: &SpinVector) -> SpinVector {
    let so = root.to_so(x.n());
    let mut out = x.clone();
    let mut term = x.clone();
    let mut k = 1i64;
    loop {
        term = term.rho(&so).expect("same level").scale(&(t / int(k)));
        if term.is_zero() {
            break;
        }
        out.add_assign(&term);
        k += 1;
    }
    out
}

/// `exp(t X)` acting on `V_n`.
pub fn exp_vector_matrix(n: usize, root: RootVector, t: &Rational) -> Matrix {
    let m = root.to_so(n).vector_matrix().scale(t);
    let mut out = Matrix::identity(2 * n);
    let mut power = Matrix::identity(2 * n);
    let mut k = 1i64;
    loop {
        power = power.mul(&m).scale(&crate::rational::frac(1, k));
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
        k += 1;
    }
    out
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self { n, word: Vec::new(), operator: OnceLock::new() }
    }

    pub fn from_word(n: usize, word: Vec<Factor>) -> Result<Self> {
        for f in &word {
            f.root.validate(n)?;
        }
        Ok(Self { n, word, operator: OnceLock::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[Factor] {
        &self.word
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "level mismatch");
        let mut word = other.word.clone();
        word.extend(self.word.iter().cloned());
        Self { n: self.n, word, operator: OnceLock::new() }
    }

    pub fn inverse(&self) -> Self {
        let word = self
            .word
            .iter()
            .rev()
            .map(|f| Factor { root: f.root, t: -f.t.clone() })
            .collect();
        Self { n: self.n, word, operator: OnceLock::new() }
    }

    /// The same word viewed at level `m >= n`, fixing the new basis vectors.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n);
        Self { n: m, word: self.word.clone(), operator: OnceLock::new() }
    }

    /// Applies the word to `x`; factors act in order, the first one first.
    pub fn apply(&self, x: &SpinVector) -> SpinVector {
        assert_eq!(x.n(), self.n, "level mismatch");
        if let Some(op) = self.operator.get() {
            return SpinVector::from_coords(self.n, &op.apply(&x.coords()));
        }
        self.word
            .iter()
            .fold(x.clone(), |acc, f| exp_apply(f.root, &f.t, &acc))
    }

    /// Dense operator on the spin space, computed once.
    pub fn operator(&self) -> &Matrix {
        self.operator.get_or_init(|| {
            operator_matrix(self.n, |x| {
                self.word
                    .iter()
                    .fold(x.clone(), |acc, f| exp_apply(f.root, &f.t, &acc))
            })
        })
    }

    /// The image in `SO(V_n)`.
    pub fn vector_matrix(&self) -> Matrix {
        self.word.iter().fold(Matrix::identity(2 * self.n), |acc, f| {
            exp_vector_matrix(self.n, f.root, &f.t).mul(&acc)
        })
    }

    pub fn act_vector(&self, v: &Vector) -> Vector {
        Vector::from_coords(self.n, &self.vector_matrix().apply(&v.coords())).expect("square")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .word
            .iter()
            .map(|x| format!("exp({}*{})", x.t, x.root))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A single exponential.
pub fn exp_nilpotent(n: usize, root: RootVector, t: Rational) -> Result<GroupElement> {
    GroupElement::from_word(n, vec![Factor { root, t }])
}

/// Seeded random word of `length` exponentials, generators uniform over all
/// permitted root vectors, parameters uniform over [`PARAMETERS`].
pub fn random_group_element(n: usize, seed: u64, length: usize) -> Result<GroupElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_group_element_with(n, &mut rng, length)
}

pub fn random_group_element_with<R: Rng>(n: usize, rng: &mut R, length: usize) -> Result<GroupElement> {
    if length == 0 {
        return Err(Error::Invalid("word length must be at least 1".into()));
    }
    let roots = RootVector::all(n);
    if roots.is_empty() {
        return Err(Error::Invalid(format!("no nilpotent root vectors at level {n}")));
    }
    let word = (0..length)
        .map(|_| Factor {
            root: *roots.choose(rng).expect("nonempty"),
            t: int(*PARAMETERS.choose(rng).expect("nonempty")),
        })
        .collect();
    GroupElement::from_word(n, word)
}

impl Factor {
    pub fn new(root: RootVector, t: Rational) -> Self {
        Self { root, t }
    }

    pub fn is_trivial(&self) -> bool {
        self.t.is_zero()
    }
}

/// Default word length used by samplers.
pub const DEFAULT_LENGTH: usize = 24;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::ParityTag;

    #[test]
    fn zero_parameter_is_identity() {
        let g = exp_nilpotent(3, RootVector::EE(1, 2), int(0)).unwrap();
        assert_eq!(g.operator(), &Matrix::identity(8));
    }

    #[test]
    fn ff_exponential_on_omega0() {
        let g = exp_nilpotent(2, RootVector::FF(1, 2), int(3)).unwrap();
        let expect = SpinVector::omega0(2).add(&SpinVector::term(2, 0, int(-6)));
        assert_eq!(g.apply(&SpinVector::omega0(2)), expect);
    }

    #[test]
    fn ef_diagonal_rejected() {
        assert!(exp_nilpotent(2, RootVector::EF(1, 1), int(1)).is_err());
        assert!(random_group_element(3, 1, 0).is_err());
    }

    #[test]
    fn inverse_and_determinism() {
        let g = random_group_element(4, 7, 10).unwrap();
        let h = random_group_element(4, 7, 10).unwrap();
        assert_eq!(g.word(), h.word());
        let id = g.compose(&g.inverse());
        assert_eq!(id.operator(), &Matrix::identity(16));
        for r in RootVector::all(4) {
            let e = exp_nilpotent(4, r, int(2)).unwrap();
            assert_eq!(e.operator().det(), int(1));
        }
    }

    #[test]
    fn spin_and_vector_actions_intertwine() {
        let n = 3;
        let g = random_group_element(n, 11, 8).unwrap();
        let m = g.vector_matrix();
        let x = SpinVector::from_coords(n, &(0..8).map(|k| int(k as i64 - 3)).collect::<Vec<_>>());
        for j in 0..2 * n {
            let v = Vector::basis(n, j);
            let gv = Vector::from_coords(n, &m.apply(&v.coords())).unwrap();
            assert_eq!(g.apply(&x.act_vector(&v)), g.apply(&x).act_vector(&gv));
        }
        let p = g.apply(&SpinVector::omega0(n)).parity();
        assert_eq!(p, ParityTag::Pure(crate::spin::Parity::Odd));
    }
}
