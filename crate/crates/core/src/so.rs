//! Elements of `so(V_n)` as combinations of the two-forms `e_i∧e_j`,
//! `f_i∧f_j` (`i < j`) and `e_i∧f_j`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{clifford_to_so, so_to_clifford, Symbol};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{int, Rational};
use crate::vector::Vector;

type Pairs = BTreeMap<(usize, usize), Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoElement {
    n: usize,
    ee: Pairs,
    ff: Pairs,
    ef: Pairs,
}

fn bump(map: &mut Pairs, key: (usize, usize), c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(key).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(&key);
    }
}

impl SoElement {
    pub fn zero(n: usize) -> Self {
        Self { n, ee: Pairs::new(), ff: Pairs::new(), ef: Pairs::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ee(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.ee
    }

    pub fn ff(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.ff
    }

    pub fn ef(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.ef
    }

    pub fn is_zero(&self) -> bool {
        self.ee.is_empty() && self.ff.is_empty() && self.ef.is_empty()
    }

    pub fn add_ee(&mut self, i: usize, j: usize, c: Rational) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => bump(&mut self.ee, (i, j), c),
            std::cmp::Ordering::Greater => bump(&mut self.ee, (j, i), -c),
            std::cmp::Ordering::Equal => {}
        }
    }

    pub fn add_ff(&mut self, i: usize, j: usize, c: Rational) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => bump(&mut self.ff, (i, j), c),
            std::cmp::Ordering::Greater => bump(&mut self.ff, (j, i), -c),
            std::cmp::Ordering::Equal => {}
        }
    }

    pub fn add_ef(&mut self, i: usize, j: usize, c: Rational) {
        bump(&mut self.ef, (i, j), c);
    }

    pub fn e_wedge_e(n: usize, i: usize, j: usize) -> Self {
        let mut x = Self::zero(n);
        x.add_ee(i, j, Rational::one());
        x
    }

    pub fn f_wedge_f(n: usize, i: usize, j: usize) -> Self {
        let mut x = Self::zero(n);
        x.add_ff(i, j, Rational::one());
        x
    }

    pub fn e_wedge_f(n: usize, i: usize, j: usize) -> Self {
        let mut x = Self::zero(n);
        x.add_ef(i, j, Rational::one());
        x
    }

    /// `u ∧ v` for basis symbols.
    pub fn symbol_wedge(n: usize, u: Symbol, v: Symbol) -> Self {
        let mut x = Self::zero(n);
        match (u, v) {
            (Symbol::E(i), Symbol::E(j)) => x.add_ee(i, j, Rational::one()),
            (Symbol::F(i), Symbol::F(j)) => x.add_ff(i, j, Rational::one()),
            (Symbol::E(i), Symbol::F(j)) => x.add_ef(i, j, Rational::one()),
            (Symbol::F(i), Symbol::E(j)) => x.add_ef(j, i, -Rational::one()),
        }
        x
    }

    /// `u ∧ v` for arbitrary vectors, expanded bilinearly.
    pub fn wedge(u: &Vector, v: &Vector) -> Self {
        let n = u.n();
        let coords = |w: &Vector| -> Vec<(Symbol, Rational)> {
            (1..=n)
                .map(|i| (Symbol::E(i), w.e[i - 1].clone()))
                .chain((1..=n).map(|i| (Symbol::F(i), w.f[i - 1].clone())))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        };
        let mut x = Self::zero(n);
        for (a, ca) in coords(u) {
            for (b, cb) in coords(v) {
                x = x.add(&Self::symbol_wedge(n, a, b).scale(&(&ca * &cb)));
            }
        }
        x
    }

    /// Chevalley basis element `h_i`.
    pub fn h(n: usize, i: usize) -> Self {
        let mut x = Self::zero(n);
        if i < n {
            x.add_ef(i, i, Rational::one());
            x.add_ef(i + 1, i + 1, -Rational::one());
        } else {
            x.add_ef(n - 1, n - 1, Rational::one());
            x.add_ef(n, n, Rational::one());
        }
        x
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "level mismatch");
        let mut x = self.clone();
        for (k, c) in &other.ee {
            bump(&mut x.ee, *k, c.clone());
        }
        for (k, c) in &other.ff {
            bump(&mut x.ff, *k, c.clone());
        }
        for (k, c) in &other.ef {
            bump(&mut x.ef, *k, c.clone());
        }
        x
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        let sc = |m: &Pairs| m.iter().map(|(k, c)| (*k, c * s)).collect();
        Self { n: self.n, ee: sc(&self.ee), ff: sc(&self.ff), ef: sc(&self.ef) }
    }

    /// True if only `e_i∧f_j` terms occur, i.e. the element lies in `gl(E)`.
    pub fn is_gl(&self) -> bool {
        self.ee.is_empty() && self.ff.is_empty()
    }

    /// Trace of the induced endomorphism of `E`.
    pub fn trace(&self) -> Rational {
        self.ef
            .iter()
            .filter(|((i, j), _)| i == j)
            .map(|(_, c)| c.clone())
            .sum()
    }

    /// Lie bracket, computed as a commutator inside the Clifford algebra.
    pub fn bracket(&self, other: &Self) -> Self {
        let a = so_to_clifford(self);
        let b = so_to_clifford(other);
        clifford_to_so(&a.commutator(&b).expect("same level")).expect("so(V) is closed under brackets")
    }

    /// `(u∧v)w = (v|w)u - (u|w)v`, extended linearly.
    pub fn act_vector(&self, w: &Vector) -> Vector {
        let n = self.n;
        let mut out = Vector::zero(n);
        let mut term = |u: Symbol, v: Symbol, c: &Rational| {
            let uv = u.to_vector(n);
            let vv = v.to_vector(n);
            let t = uv.scale(&vv.dot(w)).sub(&vv.scale(&uv.dot(w)));
            out = out.add(&t.scale(c));
        };
        for ((i, j), c) in &self.ee {
            term(Symbol::E(*i), Symbol::E(*j), c);
        }
        for ((i, j), c) in &self.ff {
            term(Symbol::F(*i), Symbol::F(*j), c);
        }
        for ((i, j), c) in &self.ef {
            term(Symbol::E(*i), Symbol::F(*j), c);
        }
        out
    }

    /// Matrix of [`Self::act_vector`] on coordinates `e_1..e_n, f_1..f_n`.
    pub fn vector_matrix(&self) -> Matrix {
        let n = self.n;
        Matrix::from_columns(
            (0..2 * n).map(|j| self.act_vector(&Vector::basis(n, j)).coords()).collect(),
            2 * n,
        )
    }

    /// A random element with small integer coefficients on every basis two-form.
    pub fn random<R: Rng>(n: usize, rng: &mut R, gl_only: bool) -> Self {
        let mut x = Self::zero(n);
        for i in 1..=n {
            for j in 1..=n {
                x.add_ef(i, j, int(rng.gen_range(-3..=3)));
                if !gl_only && i < j {
                    x.add_ee(i, j, int(rng.gen_range(-3..=3)));
                    x.add_ff(i, j, int(rng.gen_range(-3..=3)));
                }
            }
        }
        x
    }

    /// All basis two-forms at level `n`.
    pub fn basis(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(Self::e_wedge_e(n, i, j));
                out.push(Self::f_wedge_f(n, i, j));
            }
            for j in 1..=n {
                out.push(Self::e_wedge_f(n, i, j));
            }
        }
        out
    }
}

impl fmt::Display for SoElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for ((i, j), c) in &self.ee {
            parts.push(format!("{c}*e{i}^e{j}"));
        }
        for ((i, j), c) in &self.ff {
            parts.push(format!("{c}*f{i}^f{j}"));
        }
        for ((i, j), c) in &self.ef {
            parts.push(format!("{c}*e{i}^f{j}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A root vector whose image under the spin representation is nilpotent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RootVector {
    /// `e_i ∧ e_j` with `i < j`.
    EE(usize, usize),
    /// `f_i ∧ f_j` with `i < j`.
    FF(usize, usize),
    /// `e_i ∧ f_j` with `i != j`.
    EF(usize, usize),
}

impl RootVector {
    pub fn validate(self, n: usize) -> Result<Self> {
        let (i, j) = match self {
            RootVector::EE(i, j) | RootVector::FF(i, j) | RootVector::EF(i, j) => (i, j),
        };
        for k in [i, j] {
            if k == 0 || k > n {
                return Err(Error::IndexOutOfRange { index: k, n });
            }
        }
        let ok = match self {
            RootVector::EE(i, j) | RootVector::FF(i, j) => i < j,
            RootVector::EF(i, j) => i != j,
        };
        if !ok {
            return Err(Error::NotRootVector(self.to_string()));
        }
        Ok(self)
    }

    pub fn to_so(self, n: usize) -> SoElement {
        match self {
            RootVector::EE(i, j) => SoElement::e_wedge_e(n, i, j),
            RootVector::FF(i, j) => SoElement::f_wedge_f(n, i, j),
            RootVector::EF(i, j) => SoElement::e_wedge_f(n, i, j),
        }
    }

    pub fn max_index(self) -> usize {
        match self {
            RootVector::EE(i, j) | RootVector::FF(i, j) | RootVector::EF(i, j) => i.max(j),
        }
    }

    /// Every permitted root vector at level `n`.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i < j {
                    out.push(RootVector::EE(i, j));
                    out.push(RootVector::FF(i, j));
                }
                if i != j {
                    out.push(RootVector::EF(i, j));
                }
            }
        }
        out
    }

    /// Parses `e1^e2`, `f1^f3` or `e2^f1`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad root vector {s:?}"));
        let (a, b) = s.trim().split_once('^').ok_or_else(bad)?;
        let idx = |t: &str| t[1..].parse::<usize>().map_err(|_| bad());
        match (&a[..1], &b[..1]) {
            ("e", "e") => Ok(RootVector::EE(idx(a)?, idx(b)?)),
            ("f", "f") => Ok(RootVector::FF(idx(a)?, idx(b)?)),
            ("e", "f") => Ok(RootVector::EF(idx(a)?, idx(b)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootVector::EE(i, j) => write!(f, "e{i}^e{j}"),
            RootVector::FF(i, j) => write!(f, "f{i}^f{j}"),
            RootVector::EF(i, j) => write!(f, "e{i}^f{j}"),
        }
    }
}
