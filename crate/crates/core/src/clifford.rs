//! The Clifford algebra `Cl(V_n)` of the split form, in the normal-ordered
//! basis `e_A f_B` (all `e` factors first, each block ascending).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::bits;
use crate::error::{Error, Result};
use crate::exterior::ExteriorVector;
use crate::rational::{self, int, Rational};
use crate::so::SoElement;
use crate::vector::Vector;

/// A basis vector of `V_n`. The derived order puts every `e` before every `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    E(usize),
    F(usize),
}

impl Symbol {
    pub fn index(self) -> usize {
        match self {
            Symbol::E(i) | Symbol::F(i) => i,
        }
    }

    /// `(self|other)` in the hyperbolic basis.
    pub fn pairing(self, other: Symbol) -> i64 {
        match (self, other) {
            (Symbol::E(i), Symbol::F(j)) | (Symbol::F(i), Symbol::E(j)) if i == j => 1,
            _ => 0,
        }
    }

    pub fn to_vector(self, n: usize) -> Vector {
        match self {
            Symbol::E(i) => Vector::basis_e(n, i),
            Symbol::F(i) => Vector::basis_f(n, i),
        }
    }

    fn check(self, n: usize) -> Result<()> {
        let i = self.index();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        Ok(())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::E(i) => write!(f, "e{i}"),
            Symbol::F(i) => write!(f, "f{i}"),
        }
    }
}

/// Normal-ordered monomial `e_A f_B`; also used as a blade `e_A ∧ f_B` of ∧V.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub e: u32,
    pub f: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { e: 0, f: 0 };

    pub fn new(e: u32, f: u32) -> Self {
        Self { e, f }
    }

    pub fn degree(self) -> usize {
        (self.e.count_ones() + self.f.count_ones()) as usize
    }

    pub fn symbols(self) -> Vec<Symbol> {
        bits::indices(self.e)
            .map(Symbol::E)
            .chain(bits::indices(self.f).map(Symbol::F))
            .collect()
    }

    pub fn max_index(self) -> usize {
        bits::max_index(self.e | self.f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 0 && self.f == 0 {
            return write!(f, "1");
        }
        for s in self.symbols() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub(crate) fn parse_symbols(s: &str) -> Result<Vec<Symbol>> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut k = 0;
    while k < bytes.len() {
        let kind = bytes[k];
        k += 1;
        let start = k;
        while k < bytes.len() && bytes[k].is_ascii_digit() {
            k += 1;
        }
        let idx: usize = s[start..k]
            .parse()
            .map_err(|_| Error::Parse(format!("bad symbol in {s:?}")))?;
        out.push(match kind {
            b'e' => Symbol::E(idx),
            b'f' => Symbol::F(idx),
            _ => return Err(Error::Parse(format!("bad symbol in {s:?}"))),
        });
    }
    Ok(out)
}

/// Splits `coef*word` into its parts; a bare coefficient or bare word is
/// accepted too.
pub(crate) fn split_term(term: &str) -> Result<(Rational, &str)> {
    let term = term.trim();
    if let Some((c, w)) = term.split_once('*') {
        Ok((rational::parse(c)?, w.trim()))
    } else if term.starts_with(['e', 'f']) {
        Ok((Rational::one(), term))
    } else {
        Ok((rational::parse(term)?, "1"))
    }
}

pub(crate) fn fmt_terms<K: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (K, Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        write!(f, "{c}*{k}")?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn sign_of(k: u32) -> Rational {
    if bits::odd(k) {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Order in which the rewriting of [`normal_form_with`] picks the next
/// out-of-order adjacent pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOrder {
    LeftToRight,
    RightToLeft,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl CliffordElement {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        Self::monomial(n, Monomial::ONE, c)
    }

    pub fn monomial(n: usize, m: Monomial, c: Rational) -> Self {
        let mut x = Self::zero(n);
        x.add_term(m, c);
        x
    }

    pub fn generator(n: usize, s: Symbol) -> Result<Self> {
        s.check(n)?;
        let m = match s {
            Symbol::E(i) => Monomial::new(bits::bit(i), 0),
            Symbol::F(i) => Monomial::new(0, bits::bit(i)),
        };
        Ok(Self::monomial(n, m, Rational::one()))
    }

    pub fn from_vector(v: &Vector) -> Self {
        let n = v.n();
        let mut x = Self::zero(n);
        for i in 1..=n {
            x.add_term(Monomial::new(bits::bit(i), 0), v.e[i - 1].clone());
            x.add_term(Monomial::new(0, bits::bit(i)), v.f[i - 1].clone());
        }
        x
    }

    /// The product `f_1 ⋯ f_n`.
    pub fn f_top(n: usize) -> Self {
        Self::monomial(n, Monomial::new(0, bits::full(n)), Rational::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut x = Self::zero(n);
        for (m, c) in terms {
            if m.max_index() > n {
                return Err(Error::IndexOutOfRange { index: m.max_index(), n });
            }
            x.add_term(m, c);
        }
        Ok(x)
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

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LevelMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let mut x = self.clone();
        for (m, c) in &other.terms {
            x.add_term(*m, c.clone());
        }
        Ok(x)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
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

    /// Left multiplication by a single generator.
    pub(crate) fn left_mul_symbol(&self, s: Symbol) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            match s {
                Symbol::E(i) => {
                    if !bits::contains(m.e, i) {
                        let sg = sign_of(bits::count_below(m.e, i));
                        out.add_term(Monomial::new(m.e | bits::bit(i), m.f), c * sg);
                    }
                }
                Symbol::F(i) => {
                    // move f_i through e_A, picking up the contraction with e_i
                    if bits::contains(m.e, i) {
                        let sg = sign_of(bits::count_below(m.e, i));
                        out.add_term(Monomial::new(m.e & !bits::bit(i), m.f), c * sg * int(2));
                    }
                    if !bits::contains(m.f, i) {
                        let k = m.e.count_ones() + bits::count_below(m.f, i);
                        out.add_term(Monomial::new(m.e, m.f | bits::bit(i)), c * sign_of(k));
                    }
                }
            }
        }
        out
    }

    /// Exact product in `Cl(V_n)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut acc = other.clone();
            for s in m.symbols().into_iter().rev() {
                acc = acc.left_mul_symbol(s);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc * c);
            }
        }
        Ok(out)
    }

    /// The anti-automorphism fixing `V` pointwise.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let a = m.e.count_ones();
            let b = m.f.count_ones();
            let sg = sign_of(a * a.saturating_sub(1) / 2 + b * b.saturating_sub(1) / 2);
            let fb = Self::monomial(self.n, Monomial::new(0, m.f), Rational::one());
            let ea = Self::monomial(self.n, Monomial::new(m.e, 0), Rational::one());
            let prod = fb.mul(&ea).expect("same level");
            for (mm, cc) in prod.terms {
                out.add_term(mm, cc * c * &sg);
            }
        }
        out
    }

    /// Commutator `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// The module action on ∧V through `v ↦ ι(v) + o(v)`.
    pub fn act_on_exterior(&self, w: &ExteriorVector) -> Result<ExteriorVector> {
        if self.n != w.n() {
            return Err(Error::LevelMismatch { left: self.n, right: w.n() });
        }
        let mut out = ExteriorVector::zero(self.n);
        for (m, c) in &self.terms {
            let mut acc = w.clone();
            for s in m.symbols().into_iter().rev() {
                acc = acc.act_symbol(s);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc.scale(c));
        }
        Ok(out)
    }

    /// Parses the canonical text form, e.g. `1/2*e1e2f1 + -1*1`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut x = Self::zero(n);
        let s = s.trim();
        if s == "0" {
            return Ok(x);
        }
        for term in s.split(" + ") {
            let (c, w) = split_term(term)?;
            let word = parse_symbols(w)?;
            x = x.add(&normal_form(n, &word)?.scale(&c))?;
        }
        Ok(x)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().map(|(m, c)| (*m, c.clone())))
    }
}

/// Normal form of a word of generators, by adjacent-swap rewriting.
pub fn normal_form(n: usize, word: &[Symbol]) -> Result<CliffordElement> {
    normal_form_with(n, word, ScanOrder::LeftToRight)
}

/// Rewrites with `vw = 2(v|w) - wv` and `vv = 0` until every word is sorted.
pub fn normal_form_with(n: usize, word: &[Symbol], order: ScanOrder) -> Result<CliffordElement> {
    for s in word {
        s.check(n)?;
    }
    let mut out = CliffordElement::zero(n);
    let mut stack: Vec<(Rational, Vec<Symbol>)> = vec![(Rational::one(), word.to_vec())];
    while let Some((c, w)) = stack.pop() {
        let bad = |k: &usize| w[*k] >= w[*k + 1];
        let pos = match order {
            ScanOrder::LeftToRight => (0..w.len().saturating_sub(1)).find(bad),
            ScanOrder::RightToLeft => (0..w.len().saturating_sub(1)).rev().find(bad),
        };
        let Some(k) = pos else {
            let mut m = Monomial::ONE;
            for s in &w {
                match s {
                    Symbol::E(i) => m.e |= bits::bit(*i),
                    Symbol::F(i) => m.f |= bits::bit(*i),
                }
            }
            out.add_term(m, c);
            continue;
        };
        if w[k] == w[k + 1] {
            continue;
        }
        let p = w[k].pairing(w[k + 1]);
        if p != 0 {
            let mut shorter = w.clone();
            shorter.drain(k..k + 2);
            stack.push((&c * int(2 * p), shorter));
        }
        let mut swapped = w;
        swapped.swap(k, k + 1);
        stack.push((-c, swapped));
    }
    Ok(out)
}

/// The embedding `¼ψ` of `so(V_n)`, with `ψ(u∧v) = uv - vu`.
pub fn so_to_clifford(x: &SoElement) -> CliffordElement {
    let n = x.n();
    let quarter = rational::frac(1, 4);
    let mut out = CliffordElement::zero(n);
    let mut push = |u: Symbol, v: Symbol, c: &Rational| {
        let uv = normal_form(n, &[u, v]).expect("indices checked");
        let vu = normal_form(n, &[v, u]).expect("indices checked");
        let t = uv.sub(&vu).expect("same level").scale(&(c * &quarter));
        out = out.add(&t).expect("same level");
    };
    for ((i, j), c) in x.ee() {
        push(Symbol::E(*i), Symbol::E(*j), c);
    }
    for ((i, j), c) in x.ff() {
        push(Symbol::F(*i), Symbol::F(*j), c);
    }
    for ((i, j), c) in x.ef() {
        push(Symbol::E(*i), Symbol::F(*j), c);
    }
    out
}

/// Inverse of [`so_to_clifford`] on its image.
pub fn clifford_to_so(x: &CliffordElement) -> Result<SoElement> {
    let n = x.n();
    let two = int(2);
    let mut out = SoElement::zero(n);
    let mut trace = Rational::zero();
    for (m, c) in x.terms() {
        let ei: Vec<usize> = bits::indices(m.e).collect();
        let fi: Vec<usize> = bits::indices(m.f).collect();
        match (ei.as_slice(), fi.as_slice()) {
            ([], []) => {}
            ([i, j], []) => out.add_ee(*i, *j, c * &two),
            ([], [i, j]) => out.add_ff(*i, *j, c * &two),
            ([i], [j]) => {
                out.add_ef(*i, *j, c * &two);
                if i == j {
                    trace += c * &two;
                }
            }
            _ => return Err(Error::Invalid(format!("{m} is not in the image of so(V)"))),
        }
    }
    let expected = -trace / two;
    if x.coeff(Monomial::ONE) != expected {
        return Err(Error::Invalid("constant term inconsistent with so(V) image".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;
    use Symbol::{E, F};

    fn nf(n: usize, w: &[Symbol]) -> CliffordElement {
        normal_form(n, w).unwrap()
    }

    #[test]
    fn isotropic_squares_vanish() {
        assert!(nf(1, &[E(1), E(1)]).is_zero());
        assert!(nf(1, &[F(1), F(1)]).is_zero());
    }

    #[test]
    fn anticommutator_of_pair() {
        let s = nf(1, &[E(1), F(1)]).add(&nf(1, &[F(1), E(1)])).unwrap();
        assert_eq!(s, CliffordElement::scalar(1, int(2)));
    }

    #[test]
    fn longer_word() {
        let x = nf(2, &[F(1), E(1), F(1), F(2)]);
        assert_eq!(x, CliffordElement::monomial(2, Monomial::new(0, 0b11), int(2)));
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(
            normal_form(2, &[E(3)]),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        );
    }

    #[test]
    fn mul_examples() {
        let e1f1 = nf(1, &[E(1), F(1)]);
        assert_eq!(e1f1.mul(&e1f1).unwrap(), e1f1.scale(&int(2)));
        let f1 = CliffordElement::generator(2, F(1)).unwrap();
        let f2 = CliffordElement::generator(2, F(2)).unwrap();
        assert_eq!(f1.mul(&f2).unwrap(), f2.mul(&f1).unwrap().scale(&int(-1)));
        assert!(CliffordElement::one(1).mul(&CliffordElement::one(2)).is_err());
    }

    #[test]
    fn star_examples() {
        let e1 = CliffordElement::generator(2, E(1)).unwrap();
        assert_eq!(e1.star(), e1);
        let e1f2 = nf(2, &[E(1), F(2)]);
        assert_eq!(e1f2.star(), e1f2.scale(&int(-1)));
        assert_eq!(CliffordElement::one(3).star(), CliffordElement::one(3));
    }

    #[test]
    fn so_embedding_examples() {
        let ff = SoElement::f_wedge_f(2, 1, 2);
        assert_eq!(
            so_to_clifford(&ff),
            CliffordElement::monomial(2, Monomial::new(0, 0b11), frac(1, 2))
        );
        let ef = SoElement::e_wedge_f(1, 1, 1);
        let expect = nf(1, &[E(1), F(1)])
            .scale(&frac(1, 2))
            .sub(&CliffordElement::scalar(1, frac(1, 2)))
            .unwrap();
        assert_eq!(so_to_clifford(&ef), expect);
        assert_eq!(clifford_to_so(&expect).unwrap(), ef);
    }

    #[test]
    fn so_embedding_commutator_is_vector_action() {
        let n = 2;
        let syms: Vec<Symbol> = (1..=n).map(E).chain((1..=n).map(F)).collect();
        for &u in &syms {
            for &v in &syms {
                let x = SoElement::wedge(&u.to_vector(n), &v.to_vector(n));
                let cx = so_to_clifford(&x);
                for &w in &syms {
                    let cw = CliffordElement::generator(n, w).unwrap();
                    let lhs = cx.commutator(&cw).unwrap();
                    let image = u
                        .to_vector(n)
                        .scale(&int(v.pairing(w)))
                        .sub(&v.to_vector(n).scale(&int(u.pairing(w))));
                    assert_eq!(lhs, CliffordElement::from_vector(&image), "{u} {v} {w}");
                }
            }
        }
    }

    #[test]
    fn action_examples() {
        let one = ExteriorVector::one(2);
        let e1 = CliffordElement::generator(2, E(1)).unwrap();
        assert_eq!(
            e1.act_on_exterior(&one).unwrap(),
            ExteriorVector::blade(2, Monomial::new(1, 0), int(1))
        );
        let e1f1 = nf(1, &[E(1), F(1)]);
        let mut expect = ExteriorVector::one(1);
        expect.add_term(Monomial::new(1, 1), int(1));
        assert_eq!(e1f1.act_on_exterior(&ExteriorVector::one(1)).unwrap(), expect);
        let f = CliffordElement::f_top(3);
        assert_eq!(
            f.act_on_exterior(&ExteriorVector::one(3)).unwrap(),
            ExteriorVector::blade(3, Monomial::new(0, 0b111), int(1))
        );
    }

    #[test]
    fn text_roundtrip() {
        let x = nf(2, &[F(1), E(2), E(1)]).add(&CliffordElement::scalar(2, frac(-3, 2))).unwrap();
        let s = x.to_string();
        assert_eq!(CliffordElement::parse(2, &s).unwrap(), x);
        assert_eq!(
            CliffordElement::monomial(2, Monomial::new(0b11, 1), frac(1, 2)).to_string(),
            "1/2*e1e2f1"
        );
        assert_eq!(CliffordElement::zero(1).to_string(), "0");
    }

    fn word_strategy(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Symbol>> {
        prop::collection::vec(
            (any::<bool>(), 1..=n).prop_map(|(e, i)| if e { E(i) } else { F(i) }),
            0..=max_len,
        )
    }

    fn element_strategy(n: usize) -> impl Strategy<Value = CliffordElement> {
        prop::collection::vec((0u32..(1 << n), 0u32..(1 << n), -3i64..=3), 0..5).prop_map(
            move |ts| {
                CliffordElement::from_terms(n, ts.into_iter().map(|(e, f, c)| (Monomial::new(e, f), int(c))))
                    .unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rewriting_is_confluent(w in word_strategy(3, 8)) {
            prop_assert_eq!(
                normal_form_with(3, &w, ScanOrder::LeftToRight).unwrap(),
                normal_form_with(3, &w, ScanOrder::RightToLeft).unwrap()
            );
        }

        #[test]
        fn mul_matches_rewriting(a in word_strategy(3, 4), b in word_strategy(3, 4)) {
            let cat: Vec<Symbol> = a.iter().chain(&b).copied().collect();
            prop_assert_eq!(nf(3, &a).mul(&nf(3, &b)).unwrap(), nf(3, &cat));
        }

        #[test]
        fn mul_is_associative(a in element_strategy(3), b in element_strategy(3), c in element_strategy(3)) {
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn star_is_antiautomorphism(a in element_strategy(3), b in element_strategy(3)) {
            prop_assert_eq!(a.mul(&b).unwrap().star(), b.star().mul(&a.star()).unwrap());
            prop_assert_eq!(a.star().star(), a);
        }

        #[test]
        fn star_reverses_words(w in word_strategy(3, 6)) {
            let rev: Vec<Symbol> = w.iter().rev().copied().collect();
            prop_assert_eq!(nf(3, &w).star(), nf(3, &rev));
        }

        #[test]
        fn module_axioms(a in element_strategy(2), b in element_strategy(2), seed in any::<u64>()) {
            let w = ExteriorVector::from_coords(
                2,
                &(0..16).map(|k| int(((seed >> (k * 2)) & 3) as i64 - 1)).collect::<Vec<_>>(),
            );
            let lhs = a.mul(&b).unwrap().act_on_exterior(&w).unwrap();
            let rhs = a.act_on_exterior(&b.act_on_exterior(&w).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
