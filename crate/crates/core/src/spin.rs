//! The spin representation in the ∧E_n model: `ω ↦ ω f` identifies ∧E_n
//! with the left ideal `Cl(V_n) f`, `f = f_1 ⋯ f_n`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::bits;
use crate::clifford::{fmt_terms, split_term, CliffordElement, Monomial};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{frac, int, Rational};
use crate::so::SoElement;
use crate::vector::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_mask(mask: u32) -> Self {
        if bits::odd(mask.count_ones()) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// Parity tag of a spin vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityTag {
    Zero,
    Pure(Parity),
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinVector {
    n: usize,
    terms: BTreeMap<u32, Rational>,
}

fn signed(c: &Rational, k: u32) -> Rational {
    if bits::odd(k) {
        -c.clone()
    } else {
        c.clone()
    }
}

impl SpinVector {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    /// The empty wedge, i.e. the vector `f` in the left ideal model.
    pub fn one(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, mask: u32) -> Self {
        Self::term(n, mask, Rational::one())
    }

    pub fn term(n: usize, mask: u32, c: Rational) -> Self {
        let mut x = Self::zero(n);
        x.add_term(mask, c);
        x
    }

    /// `ω_0 = e_1 ∧ ⋯ ∧ e_n`.
    pub fn omega0(n: usize) -> Self {
        Self::basis(n, bits::full(n))
    }

    /// `ω_1 = e_1 ∧ ⋯ ∧ e_{n-1}`.
    pub fn omega1(n: usize) -> Self {
        Self::basis(n, bits::full(n.saturating_sub(1)))
    }

    /// The highest weight vector of the given parity.
    pub fn highest(n: usize, parity: Parity) -> Self {
        if Parity::of_mask(bits::full(n)) == parity {
            Self::omega0(n)
        } else {
            Self::omega1(n)
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (u32, Rational)>) -> Result<Self> {
        let mut x = Self::zero(n);
        for (m, c) in terms {
            if bits::max_index(m) > n {
                return Err(Error::IndexOutOfRange { index: bits::max_index(m), n });
            }
            x.add_term(m, c);
        }
        Ok(x)
    }

    /// Dense coordinates indexed by bitmask.
    pub fn from_coords(n: usize, coords: &[Rational]) -> Self {
        assert_eq!(coords.len(), 1 << n);
        let mut x = Self::zero(n);
        for (m, c) in coords.iter().enumerate() {
            x.add_term(m as u32, c.clone());
        }
        x
    }

    pub fn coords(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); 1 << self.n];
        for (m, c) in &self.terms {
            v[*m as usize] = c.clone();
        }
        v
    }

    /// Coordinates on the half-spin basis of the given parity, in bitmask order.
    pub fn half_coords(&self, parity: Parity) -> Vec<Rational> {
        bits::subsets_with_parity(self.n, parity.is_odd())
            .into_iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn from_half_coords(n: usize, parity: Parity, coords: &[Rational]) -> Self {
        let masks = bits::subsets_with_parity(n, parity.is_odd());
        assert_eq!(masks.len(), coords.len());
        let mut x = Self::zero(n);
        for (m, c) in masks.into_iter().zip(coords) {
            x.add_term(m, c.clone());
        }
        x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<u32, Rational> {
        &self.terms
    }

    pub fn coeff(&self, mask: u32) -> Rational {
        self.terms.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn parity(&self) -> ParityTag {
        let mut it = self.terms.keys().map(|m| Parity::of_mask(*m));
        let Some(p) = it.next() else {
            return ParityTag::Zero;
        };
        if it.all(|q| q == p) {
            ParityTag::Pure(p)
        } else {
            ParityTag::Mixed
        }
    }

    /// The parity of a nonzero parity-pure vector.
    pub fn pure_parity(&self) -> Result<Parity> {
        match self.parity() {
            ParityTag::Pure(p) => Ok(p),
            ParityTag::Zero => Err(Error::ZeroVector),
            ParityTag::Mixed => Err(Error::MixedParity),
        }
    }

    pub fn part(&self, parity: Parity) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| Parity::of_mask(**m) == parity)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, mask: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "level mismatch");
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut x = self.clone();
        x.add_assign(other);
        x
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    /// `λ` with `self = λ · other`, if it exists.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        if self.n != other.n || other.is_zero() {
            return None;
        }
        let (m, c) = other.terms.iter().next()?;
        let lambda = self.coeff(*m) / c;
        (*self == other.scale(&lambda)).then_some(lambda)
    }

    /// `o(e_i)`.
    pub fn outer_index(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if !bits::contains(*m, i) {
                out.add_term(m | bits::bit(i), signed(c, bits::count_below(*m, i)));
            }
        }
        out
    }

    /// `ι(f_i)`.
    pub fn inner_index(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if bits::contains(*m, i) {
                out.add_term(m & !bits::bit(i), signed(c, bits::count_below(*m, i)));
            }
        }
        out
    }

    /// `o(v)` for `v ∈ E`.
    pub fn outer(&self, v: &Vector) -> Result<Self> {
        if !v.f_part_is_zero() {
            return Err(Error::WrongComponent("outer product needs a vector in E"));
        }
        let mut out = Self::zero(self.n);
        for (i, c) in v.e.iter().enumerate() {
            if !c.is_zero() {
                out.add_assign(&self.outer_index(i + 1).scale(c));
            }
        }
        Ok(out)
    }

    /// `ι(v)` for `v ∈ F`.
    pub fn inner(&self, v: &Vector) -> Result<Self> {
        if !v.e_part_is_zero() {
            return Err(Error::WrongComponent("inner product needs a vector in F"));
        }
        let mut out = Self::zero(self.n);
        for (i, c) in v.f.iter().enumerate() {
            if !c.is_zero() {
                out.add_assign(&self.inner_index(i + 1).scale(c));
            }
        }
        Ok(out)
    }

    /// Clifford action of a vector: `o(v') + 2ι(v'')`.
    pub fn act_vector(&self, v: &Vector) -> Self {
        assert_eq!(v.n(), self.n, "level mismatch");
        let mut out = Self::zero(self.n);
        for i in 1..=self.n {
            if !v.e[i - 1].is_zero() {
                out.add_assign(&self.outer_index(i).scale(&v.e[i - 1]));
            }
            if !v.f[i - 1].is_zero() {
                out.add_assign(&self.inner_index(i).scale(&(&v.f[i - 1] * int(2))));
            }
        }
        out
    }

    /// The spin representation `ρ` of `so(V_n)`.
    pub fn rho(&self, x: &SoElement) -> Result<Self> {
        if x.n() != self.n {
            return Err(Error::LevelMismatch { left: x.n(), right: self.n });
        }
        let mut out = Self::zero(self.n);
        let half = frac(1, 2);
        for ((i, j), c) in x.ee() {
            let t = self.outer_index(*j).outer_index(*i);
            out.add_assign(&t.scale(&(c * &half)));
        }
        for ((i, j), c) in x.ff() {
            let t = self.inner_index(*j).inner_index(*i);
            out.add_assign(&t.scale(&(c * int(2))));
        }
        for ((i, j), c) in x.ef() {
            let a = self.inner_index(*j).outer_index(*i);
            let b = self.outer_index(*i).inner_index(*j);
            out.add_assign(&a.sub(&b).scale(&(c * &half)));
        }
        Ok(out)
    }

    /// `ω ↦ ω f` in `Cl(V_n)`.
    pub fn to_left_ideal(&self) -> CliffordElement {
        let ft = bits::full(self.n);
        CliffordElement::from_terms(
            self.n,
            self.terms.iter().map(|(m, c)| (Monomial::new(*m, ft), c.clone())),
        )
        .expect("indices within level")
    }

    /// Inverse of [`Self::to_left_ideal`].
    pub fn from_left_ideal(x: &CliffordElement) -> Result<Self> {
        let ft = bits::full(x.n());
        let mut out = Self::zero(x.n());
        for (m, c) in x.terms() {
            if m.f != ft {
                return Err(Error::NotInLeftIdeal(m.to_string()));
            }
            out.add_term(m.e, c.clone());
        }
        Ok(out)
    }

    /// Same index sets, viewed at level `m >= n`.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n);
        Self { n: m, terms: self.terms.clone() }
    }

    /// Same index sets, viewed at level `m`; errors if an index exceeds `m`.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if let Some(bad) = self.terms.keys().find(|k| bits::max_index(**k) > m) {
            return Err(Error::Invalid(format!(
                "term {} lives above level {m}",
                fmt_mask(*bad)
            )));
        }
        Ok(Self { n: m, terms: self.terms.clone() })
    }

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut x = Self::zero(n);
        let s = s.trim();
        if s == "0" {
            return Ok(x);
        }
        for term in s.split(" + ") {
            let (c, w) = split_term(term)?;
            let syms = crate::clifford::parse_symbols(w)?;
            let mut v = Self::one(n);
            for sym in syms.into_iter().rev() {
                match sym {
                    crate::clifford::Symbol::E(i) if (1..=n).contains(&i) => v = v.outer_index(i),
                    _ => return Err(Error::Parse(format!("bad spin term {term:?}"))),
                }
            }
            x.add_assign(&v.scale(&c));
        }
        Ok(x)
    }
}

/// Text form of a subset: `e1e3`, or `1` for the empty set.
pub fn fmt_mask(mask: u32) -> String {
    if mask == 0 {
        "1".to_string()
    } else {
        bits::indices(mask).map(|i| format!("e{i}")).collect()
    }
}

struct MaskLabel(u32);

impl fmt::Display for MaskLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_mask(self.0))
    }
}

impl fmt::Display for SpinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().map(|(m, c)| (MaskLabel(*m), c.clone())))
    }
}

/// The standard derivation action `ρ̃` of `gl(E)` on ∧E, computed by
/// substituting matrix columns into each wedge factor and re-sorting.
pub fn gl_standard(a: &SoElement, x: &SpinVector) -> Result<SpinVector> {
    if !a.is_gl() {
        return Err(Error::NotGlElement);
    }
    let mut out = SpinVector::zero(x.n());
    for (mask, c) in x.terms() {
        let idx: Vec<usize> = bits::indices(*mask).collect();
        for pos in 0..idx.len() {
            // e_i ∧ f_j sends e_j to e_i
            for ((i, j), a_ij) in a.ef() {
                if *j != idx[pos] {
                    continue;
                }
                let mut word = idx.clone();
                word[pos] = *i;
                if let Some((m, sign)) = sort_word(&word) {
                    out.add_term(m, c * a_ij * int(sign));
                }
            }
        }
    }
    Ok(out)
}

/// Sorts a word of distinct indices; returns the set and the permutation sign,
/// or `None` if an index repeats.
fn sort_word(word: &[usize]) -> Option<(u32, i64)> {
    let mut inversions = 0;
    for a in 0..word.len() {
        for b in a + 1..word.len() {
            match word[a].cmp(&word[b]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some((bits::from_indices(word.iter().copied()), if inversions % 2 == 0 { 1 } else { -1 }))
}

/// Matrix of a linear map on the spin space at level `n`, columns indexed by bitmask.
pub fn operator_matrix(n: usize, f: impl Fn(&SpinVector) -> SpinVector) -> Matrix {
    Matrix::from_columns(
        (0..1u32 << n).map(|m| f(&SpinVector::basis(n, m)).coords()).collect(),
        1 << n,
    )
}

/// `ρ(A) - ρ̃(A) + ½ tr(A) Id` for `A ∈ gl(E_n)`, as a matrix. It should vanish.
pub fn gl_twist_residual(a: &SoElement) -> Result<Matrix> {
    if !a.is_gl() {
        return Err(Error::NotGlElement);
    }
    let half_tr = a.trace() * frac(1, 2);
    Ok(operator_matrix(a.n(), |x| {
        let r = x.rho(a).expect("same level");
        let s = gl_standard(a, x).expect("gl element");
        r.sub(&s).add(&x.scale(&half_tr))
    }))
}
