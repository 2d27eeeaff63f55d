//! The exterior algebra ∧V_n with blades `e_A ∧ f_B` (e factors first).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::bits;
use crate::clifford::{fmt_terms, parse_symbols, split_term, Monomial, Symbol};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;
use crate::vector::Vector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorVector {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

fn signed(c: &Rational, k: u32) -> Rational {
    if bits::odd(k) {
        -c.clone()
    } else {
        c.clone()
    }
}

impl ExteriorVector {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::blade(n, Monomial::ONE, Rational::one())
    }

    pub fn blade(n: usize, m: Monomial, c: Rational) -> Self {
        let mut x = Self::zero(n);
        x.add_term(m, c);
        x
    }

    /// Dense coordinates indexed by `e | f << n`.
    pub fn from_coords(n: usize, coords: &[Rational]) -> Self {
        assert_eq!(coords.len(), 1 << (2 * n));
        let mut x = Self::zero(n);
        let mask = bits::full(n);
        for (k, c) in coords.iter().enumerate() {
            let k = k as u32;
            x.add_term(Monomial::new(k & mask, k >> n), c.clone());
        }
        x
    }

    pub fn index_of(n: usize, m: Monomial) -> usize {
        (m.e | (m.f << n)) as usize
    }

    pub fn coords(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); 1 << (2 * self.n)];
        for (m, c) in &self.terms {
            v[Self::index_of(self.n, *m)] = c.clone();
        }
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
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

    /// `o(s)`: left wedge with a basis vector.
    pub fn outer_symbol(&self, s: Symbol) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            match s {
                Symbol::E(i) if !bits::contains(m.e, i) => out.add_term(
                    Monomial::new(m.e | bits::bit(i), m.f),
                    signed(c, bits::count_below(m.e, i)),
                ),
                Symbol::F(i) if !bits::contains(m.f, i) => out.add_term(
                    Monomial::new(m.e, m.f | bits::bit(i)),
                    signed(c, m.e.count_ones() + bits::count_below(m.f, i)),
                ),
                _ => {}
            }
        }
        out
    }

    /// `ι(s)`: contraction with a basis vector through the bilinear form.
    pub fn inner_symbol(&self, s: Symbol) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            match s {
                Symbol::E(i) if bits::contains(m.f, i) => out.add_term(
                    Monomial::new(m.e, m.f & !bits::bit(i)),
                    signed(c, m.e.count_ones() + bits::count_below(m.f, i)),
                ),
                Symbol::F(i) if bits::contains(m.e, i) => out.add_term(
                    Monomial::new(m.e & !bits::bit(i), m.f),
                    signed(c, bits::count_below(m.e, i)),
                ),
                _ => {}
            }
        }
        out
    }

    /// Action of a generator on the Clifford module ∧V.
    pub fn act_symbol(&self, s: Symbol) -> Self {
        self.outer_symbol(s).add(&self.inner_symbol(s))
    }

    fn combine(&self, v: &Vector, op: impl Fn(&Self, Symbol) -> Self) -> Self {
        assert_eq!(v.n(), self.n, "level mismatch");
        let mut out = Self::zero(self.n);
        for i in 1..=self.n {
            if !v.e[i - 1].is_zero() {
                out.add_assign(&op(self, Symbol::E(i)).scale(&v.e[i - 1]));
            }
            if !v.f[i - 1].is_zero() {
                out.add_assign(&op(self, Symbol::F(i)).scale(&v.f[i - 1]));
            }
        }
        out
    }

    /// `v ∧ self`.
    pub fn wedge_vector(&self, v: &Vector) -> Self {
        self.combine(v, Self::outer_symbol)
    }

    /// `ι(v) self`.
    pub fn interior(&self, v: &Vector) -> Self {
        self.combine(v, Self::inner_symbol)
    }

    /// `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "level mismatch");
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut acc = other.clone();
            for s in m.symbols().into_iter().rev() {
                acc = acc.outer_symbol(s);
            }
            out.add_assign(&acc.scale(c));
        }
        out
    }

    /// `v_1 ∧ ⋯ ∧ v_k`.
    pub fn from_vectors(n: usize, vs: &[Vector]) -> Self {
        let mut acc = Self::one(n);
        for v in vs.iter().rev() {
            acc = acc.wedge_vector(v);
        }
        acc
    }

    pub fn degree_part(&self, d: usize) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// `∧P` for a linear map `P` on `V_n`, given as a `2n × 2n` matrix
    /// acting on coordinates `e_1..e_n, f_1..f_n`.
    pub fn apply_linear(&self, p: &Matrix) -> Self {
        let n = self.n;
        assert_eq!((p.rows(), p.cols()), (2 * n, 2 * n));
        let images: Vec<Vector> = (0..2 * n)
            .map(|j| Vector::from_coords(n, &p.column(j)).expect("square matrix"))
            .collect();
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let vs: Vec<Vector> = m
                .symbols()
                .into_iter()
                .map(|s| match s {
                    Symbol::E(i) => images[i - 1].clone(),
                    Symbol::F(i) => images[n + i - 1].clone(),
                })
                .collect();
            out.add_assign(&Self::from_vectors(n, &vs).scale(c));
        }
        out
    }

    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n);
        Self { n: m, terms: self.terms.clone() }
    }

    /// Reinterprets at level `m < n`; errors if some blade uses an index above `m`.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if let Some(bad) = self.terms.keys().find(|b| b.max_index() > m) {
            return Err(Error::Invalid(format!("blade {bad} lives above level {m}")));
        }
        Ok(Self { n: m, terms: self.terms.clone() })
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

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut x = Self::zero(n);
        let s = s.trim();
        if s == "0" {
            return Ok(x);
        }
        for term in s.split(" + ") {
            let (c, w) = split_term(term)?;
            let mut blade = Self::one(n);
            for sym in parse_symbols(w)?.into_iter().rev() {
                if sym.index() == 0 || sym.index() > n {
                    return Err(Error::IndexOutOfRange { index: sym.index(), n });
                }
                blade = blade.outer_symbol(sym);
            }
            x.add_assign(&blade.scale(&c));
        }
        Ok(x)
    }
}

impl fmt::Display for ExteriorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().map(|(m, c)| (*m, c.clone())))
    }
}
