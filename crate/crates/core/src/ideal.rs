//! Polynomials on half-spin coordinates: evaluation, discovery of vanishing
//! forms, pullback along level maps, and the derivation calculus on the
//! limit-level ring `Sym(∧⁺_∞ E_∞)` inside a finite window.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits;
use crate::error::{Error, Result};
use crate::grassmann::{sample_cell_point, sample_cone_point};
use crate::group::{random_group_element, GroupElement, DEFAULT_LENGTH};
use crate::linalg::{certified_nullspace, EchelonBasis, Matrix};
use crate::rational::{int, primitive, proportionality, Rational};
use crate::so::SoElement;
use crate::spin::{gl_standard, Parity, SpinVector};
use crate::transfer::{beta_gram, pi_tower, DENSE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `x[S]`: the coordinate of `e_S` at a finite level.
    Finite(u32),
    /// `x[~C]`: the limit variable `e_I` with `I = ℕ ∖ C`.
    Limit(u32),
}

impl Var {
    pub fn mask(self) -> u32 {
        match self {
            Var::Finite(m) | Var::Limit(m) => m,
        }
    }

    pub fn parity(self) -> Parity {
        Parity::of_mask(self.mask())
    }

    /// `|ℕ ∖ I|` for a limit variable, `|S|` otherwise.
    pub fn filtration(self) -> usize {
        self.mask().count_ones() as usize
    }

    /// The limit variable whose complement is `{1..n}`, i.e. `e_{{n+1,n+2,…}}`.
    pub fn top(n: usize) -> Self {
        Var::Limit(bits::full(n))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = bits::indices(self.mask())
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",");
        match self {
            Var::Finite(_) => write!(f, "x[{list}]"),
            Var::Limit(_) => write!(f, "x[~{list}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Finite(usize),
    /// Limit variables with complements inside `{1..window}`.
    Limit { window: usize },
}

impl Level {
    fn bound(self) -> usize {
        match self {
            Level::Finite(n) => n,
            Level::Limit { window } => window,
        }
    }

    fn admits(self, v: Var) -> bool {
        let inside = v.mask() & !bits::full(self.bound()) == 0;
        match (self, v) {
            (Level::Finite(_), Var::Finite(_)) | (Level::Limit { .. }, Var::Limit(_)) => inside,
            _ => false,
        }
    }
}

pub type Monomial = Vec<Var>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    level: Level,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(level: Level) -> Self {
        Self { level, terms: BTreeMap::new() }
    }

    pub fn constant(level: Level, c: Rational) -> Self {
        let mut p = Self::zero(level);
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one(level: Level) -> Self {
        Self::constant(level, Rational::one())
    }

    pub fn variable(level: Level, v: Var) -> Result<Self> {
        Self::from_terms(level, [(vec![v], Rational::one())])
    }

    pub fn from_terms(
        level: Level,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        if level.bound() > bits::MAX_INDEX {
            return Err(Error::Invalid(format!("level bound {} too large", level.bound())));
        }
        let mut p = Self::zero(level);
        for (mut m, c) in terms {
            if let Some(v) = m.iter().find(|v| !level.admits(**v)) {
                return Err(Error::Invalid(format!("variable {v} does not live at {level:?}")));
            }
            m.sort_unstable();
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[Var]) -> Rational {
        let mut key = m.to_vec();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// The common degree of all terms, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flatten().copied().collect()
    }

    /// Largest filtration degree among the variables.
    pub fn max_filtration(&self) -> usize {
        self.variables().into_iter().map(Var::filtration).max().unwrap_or(0)
    }

    fn same_level(&self, other: &Self) -> Result<Level> {
        match (self.level, other.level) {
            (Level::Finite(a), Level::Finite(b)) if a == b => Ok(self.level),
            (Level::Limit { window: a }, Level::Limit { window: b }) => {
                Ok(Level::Limit { window: a.max(b) })
            }
            (a, b) => Err(Error::LevelMismatch { left: a.bound(), right: b.bound() }),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.level = self.same_level(other)?;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.level);
        }
        Self {
            level: self.level,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.same_level(other)?);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                m.sort_unstable();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(self.level);
        for _ in 0..k {
            out = out.mul(self).expect("same level");
        }
        out
    }

    /// The same polynomial viewed inside a larger window.
    pub fn widen(&self, window: usize) -> Self {
        let level = match self.level {
            Level::Limit { window: w } => Level::Limit { window: w.max(window) },
            l => l,
        };
        Self { level, terms: self.terms.clone() }
    }

    /// `∂p/∂v`.
    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero(self.level);
        for (m, c) in &self.terms {
            let k = m.iter().filter(|w| **w == v).count();
            if k == 0 {
                continue;
            }
            let mut rest = m.clone();
            let at = rest.iter().position(|w| *w == v).expect("present");
            rest.remove(at);
            out.add_term(rest, c * int(k as i64));
        }
        out
    }

    /// Writes `p = v·a + b` with `b` free of `v`.
    pub fn split(&self, v: Var) -> (Self, Self) {
        let mut a = Self::zero(self.level);
        let mut b = Self::zero(self.level);
        for (m, c) in &self.terms {
            match m.iter().position(|w| *w == v) {
                Some(at) => {
                    let mut rest = m.clone();
                    rest.remove(at);
                    a.add_term(rest, c.clone());
                }
                None => b.add_term(m.clone(), c.clone()),
            }
        }
        (a, b)
    }

    /// Substitutes a polynomial for every variable.
    pub fn substitute(&self, level: Level, f: impl Fn(Var) -> Result<Polynomial>) -> Result<Self> {
        let mut images: BTreeMap<Var, Polynomial> = BTreeMap::new();
        for v in self.variables() {
            images.insert(v, f(v)?);
        }
        let mut out = Self::zero(level);
        for (m, c) in &self.terms {
            let mut t = Self::constant(level, c.clone());
            for v in m {
                t = t.mul(&images[v])?;
            }
            out = out.add(&t)?;
        }
        out.level = level;
        Ok(out)
    }

    /// Coefficients along a fixed list of monomials; `None` if some term is missing from it.
    pub fn coefficients(&self, monomials: &[Monomial]) -> Option<Vec<Rational>> {
        let out: Vec<Rational> = monomials.iter().map(|m| self.coefficient(m)).collect();
        let covered = self.terms.keys().all(|m| monomials.binary_search(m).is_ok());
        covered.then_some(out)
    }

    pub fn parse(level: Level, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut depth = 0i32;
        let mut start = 0usize;
        for (i, ch) in s.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                '+' | '-' if depth == 0 && i > start => {
                    terms.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&s[start..]);
        let mut parsed = Vec::new();
        for t in terms {
            parsed.push(parse_term(level, t)?);
        }
        if parsed.len() == 1 && parsed[0].1.is_zero() && parsed[0].0.is_empty() {
            return Ok(Self::zero(level));
        }
        Self::from_terms(level, parsed)
    }
}

fn parse_term(level: Level, t: &str) -> Result<(Monomial, Rational)> {
    let (negative, body) = match t.as_bytes().first() {
        Some(b'+') => (false, &t[1..]),
        Some(b'-') => (true, &t[1..]),
        _ => (false, t),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {t:?}")));
    }
    let mut coeff = Rational::one();
    let mut mono = Vec::new();
    for factor in body.split('*') {
        if let Some(rest) = factor.strip_prefix("x[") {
            let close = rest.find(']').ok_or_else(|| Error::Parse(format!("unclosed {factor:?}")))?;
            let inner = &rest[..close];
            let power = match &rest[close + 1..] {
                "" => 1,
                p => p
                    .strip_prefix('^')
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad exponent in {factor:?}")))?,
            };
            let (limit, list) = match inner.strip_prefix('~') {
                Some(l) => (true, l),
                None => (false, inner),
            };
            let mut mask = 0u32;
            for idx in list.split(',').filter(|x| !x.is_empty()) {
                let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad index {idx:?}")))?;
                if i == 0 || i > bits::MAX_INDEX {
                    return Err(Error::Parse(format!("index {i} out of range")));
                }
                mask |= bits::bit(i);
            }
            let v = if limit { Var::Limit(mask) } else { Var::Finite(mask) };
            if !level.admits(v) {
                return Err(Error::Parse(format!("variable {v} does not live at {level:?}")));
            }
            mono.extend(std::iter::repeat(v).take(power));
        } else {
            coeff *= crate::rational::parse(factor)?;
        }
    }
    Ok((mono, if negative { -coeff } else { coeff }))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_empty() {
                factors.push(abs.to_string());
            }
            let mut i = 0;
            while i < m.len() {
                let run = m[i..].iter().take_while(|v| **v == m[i]).count();
                factors.push(if run == 1 { m[i].to_string() } else { format!("{}^{run}", m[i]) });
                i += run;
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// All degree-`d` monomials in the variables of one half-spin space at level `n`, sorted.
pub fn monomials(n: usize, parity: Parity, d: usize) -> Vec<Monomial> {
    let vars: Vec<Var> = bits::subsets_with_parity(n, parity.is_odd())
        .into_iter()
        .map(Var::Finite)
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    fn rec(vars: &[Var], from: usize, d: usize, current: &mut Monomial, out: &mut Vec<Monomial>) {
        if current.len() == d {
            out.push(current.clone());
            return;
        }
        for i in from..vars.len() {
            current.push(vars[i]);
            rec(vars, i, d, current, out);
            current.pop();
        }
    }
    rec(&vars, 0, d, &mut current, &mut out);
    out.sort();
    out
}

fn monomial_value(m: &[Var], x: &SpinVector) -> Rational {
    m.iter().fold(Rational::one(), |acc, v| acc * x.coeff(v.mask()))
}

/// Exact value `p(x)`.
pub fn eval_poly(p: &Polynomial, x: &SpinVector) -> Result<Rational> {
    let n = match p.level {
        Level::Finite(n) => n,
        Level::Limit { .. } => {
            return Err(Error::Invalid("limit-level polynomials have no point evaluation".into()))
        }
    };
    if x.n() != n {
        return Err(Error::LevelMismatch { left: n, right: x.n() });
    }
    if !x.is_zero() {
        let parity = x.pure_parity()?;
        if let Some(v) = p.variables().into_iter().find(|v| v.parity() != parity) {
            return Err(Error::ParityMismatch {
                expected: v.parity().to_string(),
                found: parity.to_string(),
            });
        }
    }
    Ok(p.terms.iter().map(|(m, c)| c * monomial_value(m, x)).sum())
}

fn point_parity(points: &[SpinVector]) -> Result<(usize, Parity)> {
    let n = points[0].n();
    let mut parity = None;
    for x in points {
        if x.n() != n {
            return Err(Error::LevelMismatch { left: n, right: x.n() });
        }
        if x.is_zero() {
            continue;
        }
        let p = x.pure_parity()?;
        match parity {
            None => parity = Some(p),
            Some(q) if q != p => {
                return Err(Error::ParityMismatch { expected: q.to_string(), found: p.to_string() })
            }
            _ => {}
        }
    }
    let parity = parity.ok_or(Error::ZeroVector)?;
    Ok((n, parity))
}

/// A canonical basis of the degree-`d` forms vanishing at every point:
/// the reduced row echelon form of the evaluation-matrix nullspace, each row
/// scaled to a primitive integer vector.
pub fn vanishing_forms(points: &[SpinVector], d: usize) -> Result<Vec<Polynomial>> {
    if points.is_empty() {
        return Err(Error::TooFewPoints { points: 0, required: 1 });
    }
    let (n, parity) = point_parity(points)?;
    let monos = monomials(n, parity, d);
    if points.len() < monos.len() {
        return Err(Error::TooFewPoints { points: points.len(), required: monos.len() });
    }
    let rows: Vec<Vec<Rational>> = points
        .par_iter()
        .map(|x| monos.iter().map(|m| monomial_value(m, x)).collect())
        .collect();
    let null = certified_nullspace(&rows, monos.len());
    let level = Level::Finite(n);
    null.iter()
        .map(|row| {
            let row = primitive(row);
            Polynomial::from_terms(level, monos.iter().cloned().zip(row))
        })
        .collect()
}

/// `x ↦ β(x, x)` on one half-spin space, as a quadratic form.
pub fn beta_norm(n: usize, parity: Parity) -> Result<Polynomial> {
    let g = beta_gram(n)?;
    let masks = bits::subsets_with_parity(n, parity.is_odd());
    let mut terms = Vec::new();
    for &a in &masks {
        for &b in &masks {
            let c = g[(a as usize, b as usize)].clone();
            if !c.is_zero() {
                terms.push((vec![Var::Finite(a), Var::Finite(b)], c));
            }
        }
    }
    Polynomial::from_terms(Level::Finite(n), terms)
}

const I4_SEEDS: [u64; 2] = [0x1400_0000, 0x1400_1000];

fn cone_points(n: usize, parity: Parity, base: u64, count: usize, cell: bool) -> Result<Vec<SpinVector>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            if cell {
                sample_cell_point(n, base + i, parity)
            } else {
                sample_cone_point(n, base + i, parity)
            }
        })
        .collect()
}

/// Vanishing forms of degree `d` on the cone at level `n`, discovered twice:
/// from open-cell points seeded by `seeds[0]` and from orbit points seeded by
/// `seeds[1]`, each with three points per monomial. Errors unless both runs
/// give the same span.
pub fn discover_cone_forms(n: usize, parity: Parity, d: usize, seeds: [u64; 2]) -> Result<Vec<Polynomial>> {
    let count = 3 * monomials(n, parity, d).len();
    let first = vanishing_forms(&cone_points(n, parity, seeds[0], count, true)?, d)?;
    let second = vanishing_forms(&cone_points(n, parity, seeds[1], count, false)?, d)?;
    if first != second {
        return Err(Error::Discovery(format!(
            "degree-{d} forms at n = {n} not stationary across seeds ({} vs {})",
            first.len(),
            second.len()
        )));
    }
    Ok(first)
}

/// The generator of the degree-2 forms vanishing on the even cone at level 4.
pub fn i4_quadric() -> Result<Polynomial> {
    static CELL: OnceLock<std::result::Result<Polynomial, Error>> = OnceLock::new();
    CELL.get_or_init(discover_i4).clone()
}

fn discover_i4() -> Result<Polynomial> {
    let forms = discover_cone_forms(4, Parity::Even, 2, I4_SEEDS)?;
    if forms.len() != 1 {
        return Err(Error::Discovery(format!(
            "expected one quadric on the level-4 cone, found {}",
            forms.len()
        )));
    }
    let q = forms.into_iter().next().expect("one form");
    beta_ratio(&q)?;
    Ok(q)
}

/// The scalar λ with `q = λ·β(x,x)` on the even half at level 4.
pub fn beta_ratio(q: &Polynomial) -> Result<Rational> {
    let norm = beta_norm(4, Parity::Even)?;
    let monos = monomials(4, Parity::Even, 2);
    let a = q.coefficients(&monos).ok_or_else(|| Error::Discovery("quadric has foreign terms".into()))?;
    let b = norm.coefficients(&monos).expect("even quadratic");
    proportionality(&a, &b)
        .ok_or_else(|| Error::Discovery("quadric is not proportional to the β-norm".into()))
}

/// Matrix of a linear map from level `n` to level `m`, columns indexed by
/// bitmask; only the columns listed in `masks` are computed, the rest are zero.
pub fn linear_map_matrix(
    n: usize,
    m: usize,
    masks: &[u32],
    f: impl Fn(&SpinVector) -> Result<SpinVector> + Sync,
) -> Result<Matrix> {
    let cols: Vec<(u32, Vec<Rational>)> = masks
        .par_iter()
        .map(|&mask| {
            let y = f(&SpinVector::basis(n, mask))?;
            if y.n() != m {
                return Err(Error::LevelMismatch { left: m, right: y.n() });
            }
            Ok((mask, y.coords()))
        })
        .collect::<Result<_>>()?;
    let mut out = Matrix::zeros(1 << m, 1 << n);
    for (mask, col) in cols {
        for (r, c) in col.into_iter().enumerate() {
            out[(r, mask as usize)] = c;
        }
    }
    Ok(out)
}

/// `x ↦ p(Lx)` for `L` a `2^m × 2^n` matrix on spin coordinates.
pub fn pullback(p: &Polynomial, l: &Matrix) -> Result<Polynomial> {
    let m = match p.level {
        Level::Finite(m) => m,
        Level::Limit { .. } => return Err(Error::Invalid("pullback needs a finite-level polynomial".into())),
    };
    if !p.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let n = l.cols().trailing_zeros() as usize;
    if l.rows() != 1 << m || l.cols() != 1 << n {
        return Err(Error::Invalid(format!(
            "shape {}x{} does not map a spin space into level {m}",
            l.rows(),
            l.cols()
        )));
    }
    let level = Level::Finite(n);
    p.substitute(level, |v| {
        let row = l.row(v.mask() as usize);
        Polynomial::from_terms(
            level,
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (vec![Var::Finite(t as u32)], c.clone())),
        )
    })
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    /// `None` for the identity member.
    pub seed: Option<u64>,
    pub g: GroupElement,
    /// `π_{n,4} ∘ g` on the even half-spin space.
    pub map: Matrix,
    pub polynomial: Polynomial,
}

#[derive(Clone, Debug)]
pub struct PullbackFamily {
    pub n: usize,
    pub seed: u64,
    pub members: Vec<FamilyMember>,
}

impl PullbackFamily {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.members.iter().map(|m| m.polynomial.clone()).collect()
    }
}

/// `(π_{n,4} ∘ g_i)^* q` for the level-4 quadric `q`; the first member uses
/// `g = 1`, the others seeded random words.
pub fn orbit_pullback_family(n: usize, seed: u64, count: usize) -> Result<PullbackFamily> {
    if n < 4 {
        return Err(Error::Invalid(format!("orbit pullbacks need n >= 4, got {n}")));
    }
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge(n));
    }
    if count == 0 {
        return Err(Error::Invalid("family needs at least one member".into()));
    }
    let q = i4_quadric()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<Option<u64>> = std::iter::once(None)
        .chain((1..count).map(|_| Some(rng.gen::<u64>())))
        .collect();
    let masks = bits::subsets_with_parity(n, false);
    let members = seeds
        .into_par_iter()
        .map(|s| {
            let g = match s {
                None => GroupElement::identity(n),
                Some(s) => random_group_element(n, s, DEFAULT_LENGTH)?,
            };
            let map = linear_map_matrix(n, 4, &masks, |x| pi_tower(&g.apply(x), 4))?;
            let polynomial = pullback(&q, &map)?;
            Ok(FamilyMember { seed: s, g, map, polynomial })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PullbackFamily { n, seed, members })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Passes,
    /// The first member not vanishing at the point, and its value there.
    Fails { member: usize, value: Rational },
}

impl Membership {
    pub fn passes(&self) -> bool {
        matches!(self, Membership::Passes)
    }
}

pub fn certify_membership(x: &SpinVector, family: &PullbackFamily) -> Result<Membership> {
    if family.members.is_empty() {
        return Err(Error::Invalid("empty family".into()));
    }
    for (i, m) in family.members.iter().enumerate() {
        let value = eval_poly(&m.polynomial, x)?;
        if !value.is_zero() {
            return Ok(Membership::Fails { member: i, value });
        }
    }
    Ok(Membership::Passes)
}

/// Rank of the span of finite-level polynomials.
pub fn span_rank(polys: &[Polynomial]) -> usize {
    let monos: Vec<Monomial> = polys
        .iter()
        .flat_map(|p| p.terms.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut echelon = EchelonBasis::new(monos.len());
    for p in polys {
        echelon.insert(p.coefficients(&monos).expect("all monomials listed"));
    }
    echelon.rank()
}

/// The window-`t` truncation `e_{I ∩ {1..t}}` of a limit variable.
pub fn truncate_var(v: Var, t: usize) -> Result<SpinVector> {
    match v {
        Var::Limit(c) if c & !bits::full(t) == 0 => Ok(SpinVector::basis(t, bits::full(t) & !c)),
        Var::Limit(c) => Err(Error::Truncation { needed: bits::max_index(c), window: t }),
        Var::Finite(_) => Err(Error::Invalid(format!("{v} is not a limit variable"))),
    }
}

/// A linear form in limit variables as its window-`t` truncation.
pub fn limit_vector(p: &Polynomial, t: usize) -> Result<SpinVector> {
    let mut out = SpinVector::zero(t);
    for (m, c) in &p.terms {
        match m.as_slice() {
            [v] => out.add_assign(&truncate_var(*v, t)?.scale(c)),
            _ => return Err(Error::Invalid("limit vector must be a linear form".into())),
        }
    }
    Ok(out)
}

/// Embeds a level-`m` polynomial into the limit ring: `x[S] ↦ e_{S ∪ {m+1,…}}`.
pub fn embed_limit(p: &Polynomial) -> Result<Polynomial> {
    let Level::Finite(m) = p.level else {
        return Err(Error::Invalid("already at the limit level".into()));
    };
    let level = Level::Limit { window: m };
    p.substitute(level, |v| Polynomial::variable(level, Var::Limit(bits::full(m) & !v.mask())))
}

/// Action of an element of `so(V_t)` on limit variables, extended as a
/// derivation. Variable images come from `ρ` at level `t` on the truncations.
pub fn derive(p: &Polynomial, x: &SoElement) -> Result<Polynomial> {
    let t = x.n();
    let Level::Limit { window } = p.level else {
        return Err(Error::Invalid("derivations act on limit-level polynomials".into()));
    };
    if window > t {
        let needed = bits::max_index(p.variables().into_iter().fold(0, |a, v| a | v.mask()));
        if needed > t {
            return Err(Error::Truncation { needed, window: t });
        }
    }
    let level = Level::Limit { window: window.max(t) };
    let mut images: BTreeMap<Var, Polynomial> = BTreeMap::new();
    for v in p.variables() {
        let y = truncate_var(v, t)?.rho(x)?;
        let img = Polynomial::from_terms(
            level,
            y.terms().iter().map(|(m, c)| (vec![Var::Limit(bits::full(t) & !m)], c.clone())),
        )?;
        images.insert(v, img);
    }
    let mut out = Polynomial::zero(level);
    for (m, c) in &p.terms {
        for i in 0..m.len() {
            let img = &images[&m[i]];
            if img.is_zero() {
                continue;
            }
            let mut rest = m.clone();
            rest.remove(i);
            let rest = Polynomial::from_terms(level, [(rest, c.clone())])?;
            out = out.add(&rest.mul(img)?)?;
        }
    }
    Ok(out)
}

/// `(f_i ∧ f_j) p` at truncation `t`.
pub fn derivation_ff(i: usize, j: usize, p: &Polynomial, t: usize) -> Result<Polynomial> {
    if i >= j || i == 0 {
        return Err(Error::Invalid(format!("need 1 <= i < j, got ({i}, {j})")));
    }
    if j > t {
        return Err(Error::Truncation { needed: j, window: t });
    }
    derive(p, &SoElement::f_wedge_f(t, i, j))
}

/// `(e_a ∧ f_b) p` at truncation `t`; `a = b` is the diagonal element.
pub fn derivation_gl(a: usize, b: usize, p: &Polynomial, t: usize) -> Result<Polynomial> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid("indices start at 1".into()));
    }
    if a.max(b) > t {
        return Err(Error::Truncation { needed: a.max(b), window: t });
    }
    derive(p, &SoElement::e_wedge_f(t, a, b))
}

/// Image of a single limit variable under `f_i ∧ f_j`: the new variable and its coefficient.
pub fn ff_on_variable(i: usize, j: usize, v: Var, t: usize) -> Result<Option<(Var, Rational)>> {
    let img = derivation_ff(i, j, &Polynomial::variable(Level::Limit { window: t }, v)?, t)?;
    single_term(&img)
}

fn gl_on_variable(a: usize, b: usize, v: Var, t: usize) -> Result<Option<(Var, Rational)>> {
    let img = derivation_gl(a, b, &Polynomial::variable(Level::Limit { window: t }, v)?, t)?;
    single_term(&img)
}

fn single_term(p: &Polynomial) -> Result<Option<(Var, Rational)>> {
    match p.terms.iter().collect::<Vec<_>>().as_slice() {
        [] => Ok(None),
        [(m, c)] if m.len() == 1 => Ok(Some((m[0], (*c).clone()))),
        _ => Err(Error::Audit(format!("expected a single variable, got {p}"))),
    }
}

#[derive(Clone, Debug)]
pub struct LoweringStep {
    pub pair: (usize, usize),
    /// Coefficient of the pivot's image under this step.
    pub coefficient: Rational,
    pub result: Polynomial,
}

/// Record of `p → p_1 → … → p_ℓ = c·e_{{n+1,…}}·q + r_ℓ`.
#[derive(Clone, Debug)]
pub struct LoweringTrace {
    pub p: Polynomial,
    pub truncation: usize,
    /// The chosen `e_I`.
    pub pivot: Var,
    pub k: usize,
    pub n: usize,
    pub steps: Vec<LoweringStep>,
    /// The sign-and-scale `c` in front of `e_{{n+1,…}}·q`.
    pub scalar: Rational,
    /// `∂p/∂e_I`.
    pub q: Polynomial,
    pub residual: Polynomial,
}

impl LoweringTrace {
    pub fn ell(&self) -> usize {
        self.steps.len()
    }

    pub fn last(&self) -> &Polynomial {
        &self.steps.last().expect("at least one step").result
    }

    /// Replays every step and re-checks the decomposition.
    pub fn verify(&self) -> Result<()> {
        let mut cur = self.p.clone();
        for s in &self.steps {
            cur = derivation_ff(s.pair.0, s.pair.1, &cur, self.truncation)?;
            if cur != s.result {
                return Err(Error::Audit(format!("step {:?} does not replay", s.pair)));
            }
        }
        check_decomposition(&cur, Var::top(self.n), &self.scalar, &self.q, 1, self.n)?;
        if self.q != self.p.partial(self.pivot) {
            return Err(Error::Audit("q is not the partial derivative".into()));
        }
        Ok(())
    }
}

/// Checks `w = c·v·q^d + r` with `r` in variables of filtration `< bound`.
/// Returns `r`.
fn check_decomposition(
    w: &Polynomial,
    v: Var,
    c: &Rational,
    q: &Polynomial,
    d: usize,
    bound: usize,
) -> Result<Polynomial> {
    let main = Polynomial::variable(w.level, v)?.mul(&q.pow(d))?.scale(c);
    let r = w.sub(&main)?;
    if let Some(bad) = r.variables().into_iter().find(|u| u.filtration() >= bound) {
        return Err(Error::Audit(format!(
            "remainder contains {bad} of filtration {} >= {bound}",
            bad.filtration()
        )));
    }
    Ok(r)
}

pub fn degree_lowering_trace(p: &Polynomial, truncation: usize) -> Result<LoweringTrace> {
    if !matches!(p.level, Level::Limit { .. }) {
        return Err(Error::Invalid("degree lowering works on limit-level polynomials".into()));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let deg = p.homogeneous_degree().ok_or(Error::Inhomogeneous)?;
    if deg == 0 {
        return Err(Error::Invalid("constant polynomial has no variables".into()));
    }
    let vars = p.variables();
    let k = vars.iter().map(|v| v.filtration()).max().expect("nonempty");
    let pivot = *vars.iter().find(|v| v.filtration() == k).expect("maximum attained");
    let span = bits::max_index(vars.iter().fold(0, |a, v| a | v.mask()));
    let mut n = (k + 2).max(span);
    n += n % 2;
    if n > truncation {
        return Err(Error::Truncation { needed: n, window: truncation });
    }
    let mut steps = Vec::new();
    let mut cur = p.widen(truncation);
    let mut complement = pivot.mask();
    let mut scalar = Rational::one();
    while complement != bits::full(n) {
        let mut free = bits::indices(bits::full(n) & !complement);
        let i = free.next().expect("two free indices");
        let j = free.next().expect("two free indices");
        let (img, c) = ff_on_variable(i, j, Var::Limit(complement), truncation)?
            .ok_or_else(|| Error::Audit("pivot annihilated".into()))?;
        complement = img.mask();
        scalar *= &c;
        cur = derivation_ff(i, j, &cur, truncation)?;
        steps.push(LoweringStep { pair: (i, j), coefficient: c, result: cur.clone() });
    }
    let q = p.partial(pivot).widen(truncation);
    if q.homogeneous_degree() != Some(deg - 1) && !(deg == 1 && q == Polynomial::one(q.level)) {
        return Err(Error::Audit("deg q != deg p - 1".into()));
    }
    let residual = check_decomposition(&cur, Var::top(n), &scalar, &q, 1, n)?;
    Ok(LoweringTrace { p: p.widen(truncation), truncation, pivot, k, n, steps, scalar, q, residual })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operation {
    /// `W ↦ (f_i ∧ f_j) W`.
    Ff(usize, usize),
    /// `W ↦ (e_a ∧ f_b) W`, or `W ↦ A·(e_a ∧ f_b)W − B·W` when a correction is recorded.
    Gl { a: usize, b: usize, correction: Option<(Polynomial, Polynomial)> },
}

/// `W = c·e_J·q^d + r̃` with `r̃` in variables of filtration `< m`.
#[derive(Clone, Debug)]
pub struct SolvingElement {
    pub target: Var,
    pub m: usize,
    pub coefficient: Rational,
    pub power: usize,
    pub element: Polynomial,
    pub remainder: Polynomial,
    /// Actions applied to `p_ℓ`.
    pub operations: Vec<Operation>,
}

impl SolvingElement {
    /// Replays the trace and the recorded operations from `p`.
    pub fn audit(&self, trace: &LoweringTrace) -> Result<()> {
        trace.verify()?;
        let t = trace.truncation;
        let mut w = trace.last().clone();
        for op in &self.operations {
            w = apply_operation(op, &w, t)?;
        }
        if w != self.element {
            return Err(Error::Audit(format!("replay for {} differs", self.target)));
        }
        let r = check_decomposition(&w, self.target, &self.coefficient, &trace.q, self.power, self.m)?;
        if r != self.remainder {
            return Err(Error::Audit("remainder differs".into()));
        }
        Ok(())
    }
}

fn apply_operation(op: &Operation, w: &Polynomial, t: usize) -> Result<Polynomial> {
    match op {
        Operation::Ff(i, j) => derivation_ff(*i, *j, w, t),
        Operation::Gl { a, b, correction } => {
            let dw = derivation_gl(*a, *b, w, t)?;
            match correction {
                None => Ok(dw),
                Some((x, y)) => x.mul(&dw)?.sub(&y.mul(w)?),
            }
        }
    }
}

/// Builds `±e_J·q^d + r̃` from `p_ℓ`: `f∧f` steps raise `{1..n}` to `{1..m}`,
/// then `e_a ∧ f_b` steps move it onto `J^c`. A `gl` step that also hits `q`
/// is corrected by the previous element, doubling `d`.
pub fn produce_solving_element(trace: &LoweringTrace, target: Var, truncation: usize) -> Result<SolvingElement> {
    let Var::Limit(goal) = target else {
        return Err(Error::Invalid(format!("{target} is not a limit variable")));
    };
    if trace.steps.is_empty() {
        return Err(Error::Invalid("incomplete trace".into()));
    }
    let n = trace.n;
    let m = target.filtration();
    if m < n || (m - n) % 2 != 0 {
        return Err(Error::Invalid(format!("need |J^c| >= {n} of the same parity, got {m}")));
    }
    let needed = bits::max_index(goal).max(m);
    if needed > truncation || truncation > trace.truncation {
        return Err(Error::Truncation { needed, window: truncation.min(trace.truncation) });
    }
    let t = trace.truncation;
    let q = &trace.q;
    let mut w = trace.last().clone();
    let mut c = trace.scalar.clone();
    let mut d = 1usize;
    let mut complement = bits::full(n);
    let mut ops = Vec::new();
    for i in (n + 1..m).step_by(2) {
        let (img, s) = ff_on_variable(i, i + 1, Var::Limit(complement), t)?
            .ok_or_else(|| Error::Audit("f∧f step annihilated e_C".into()))?;
        let op = Operation::Ff(i, i + 1);
        w = apply_operation(&op, &w, t)?;
        ops.push(op);
        c *= &s;
        complement = img.mask();
        check_decomposition(&w, img, &c, q, d, complement.count_ones() as usize)?;
    }
    let from: Vec<usize> = bits::indices(complement & !goal).collect();
    let to: Vec<usize> = bits::indices(goal & !complement).collect();
    for (&a, &b) in from.iter().zip(&to) {
        let (img, s) = gl_on_variable(a, b, Var::Limit(complement), t)?
            .ok_or_else(|| Error::Audit("gl step annihilated e_C".into()))?;
        let qd = q.pow(d);
        let dq = derivation_gl(a, b, &qd, t)?;
        let op = if dq.is_zero() {
            Operation::Gl { a, b, correction: None }
        } else {
            d *= 2;
            Operation::Gl { a, b, correction: Some((qd, dq)) }
        };
        w = apply_operation(&op, &w, t)?;
        ops.push(op);
        c *= &s;
        complement = img.mask();
        check_decomposition(&w, img, &c, q, d, m)?;
    }
    let remainder = check_decomposition(&w, target, &c, q, d, m)?;
    Ok(SolvingElement { target, m, coefficient: c, power: d, element: w, remainder, operations: ops })
}

/// `e_J·q^d − s = Σ_L h_L·W_L`, with `W_L` the recorded solving elements and
/// `s` in variables of filtration `<= n − 2`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub target: Var,
    pub d: usize,
    pub s: Polynomial,
    pub certificate: BTreeMap<Var, Polynomial>,
}

/// Assembles `(d, s)` for `e_J`, recursing through the variables of
/// filtration between `n` and `|J^c|` that occur in the remainders.
pub fn assemble(trace: &LoweringTrace, target: Var, truncation: usize) -> Result<(Solution, BTreeMap<Var, SolvingElement>)> {
    let mut elements = BTreeMap::new();
    let mut solutions = BTreeMap::new();
    solve(trace, target, truncation, &mut elements, &mut solutions)?;
    Ok((solutions.remove(&target).expect("solved"), elements))
}

fn solve(
    trace: &LoweringTrace,
    target: Var,
    truncation: usize,
    elements: &mut BTreeMap<Var, SolvingElement>,
    solutions: &mut BTreeMap<Var, Solution>,
) -> Result<()> {
    if solutions.contains_key(&target) {
        return Ok(());
    }
    let el = produce_solving_element(trace, target, truncation)?;
    let level = el.element.level;
    let q = &trace.q;
    let n = trace.n;
    let big: BTreeSet<Var> = el.remainder.variables().into_iter().filter(|v| v.filtration() >= n).collect();
    for &v in &big {
        solve(trace, v, truncation, elements, solutions)?;
    }
    let inv_c = el.coefficient.recip();
    let delta_of = |m: &Monomial| -> usize {
        m.iter().filter(|v| big.contains(v)).map(|v| solutions[v].d).sum()
    };
    let delta = el.remainder.terms.keys().map(delta_of).max().unwrap_or(0);
    let mut s = Polynomial::zero(level);
    let mut cert: BTreeMap<Var, Polynomial> = BTreeMap::new();
    let credit = |cert: &mut BTreeMap<Var, Polynomial>, v: Var, h: Polynomial| -> Result<()> {
        let slot = cert.entry(v).or_insert_with(|| Polynomial::zero(level));
        *slot = slot.add(&h)?;
        Ok(())
    };
    credit(&mut cert, target, q.pow(delta).scale(&inv_c))?;
    for (mono, mu) in &el.remainder.terms {
        let (bigs, small): (Vec<Var>, Vec<Var>) = mono.iter().partition(|v| big.contains(v));
        let base = Polynomial::from_terms(level, [(small, -(mu * &inv_c))])?.mul(&q.pow(delta - delta_of(mono)))?;
        let a: Vec<Polynomial> = bigs
            .iter()
            .map(|v| Polynomial::variable(level, *v).map(|x| x.mul(&q.pow(solutions[v].d)).expect("same level")))
            .collect::<Result<_>>()?;
        let b: Vec<Polynomial> = bigs.iter().map(|v| solutions[v].s.clone()).collect();
        s = s.add(&b.iter().try_fold(base.clone(), |acc, x| acc.mul(x))?)?;
        for i in 0..bigs.len() {
            let mut factor = base.clone();
            for x in b[..i].iter().chain(&a[i + 1..]) {
                factor = factor.mul(x)?;
            }
            for (v, h) in &solutions[&bigs[i]].certificate {
                credit(&mut cert, *v, factor.mul(h)?)?;
            }
        }
    }
    let sol = Solution { target, d: el.power + delta, s, certificate: cert };
    elements.insert(target, el);
    solutions.insert(target, sol);
    Ok(())
}

impl Solution {
    /// Expands `Σ h_L·W_L` and compares it with `e_J·q^d − s`; also checks the
    /// filtration bound on `s` and replays every element.
    pub fn audit(&self, trace: &LoweringTrace, elements: &BTreeMap<Var, SolvingElement>) -> Result<()> {
        let level = trace.q.level;
        let mut total = Polynomial::zero(level);
        for (v, h) in &self.certificate {
            let el = elements.get(v).ok_or_else(|| Error::Audit(format!("no element for {v}")))?;
            el.audit(trace)?;
            total = total.add(&h.mul(&el.element)?)?;
        }
        let lhs = Polynomial::variable(level, self.target)?.mul(&trace.q.pow(self.d))?.sub(&self.s)?;
        if total != lhs {
            return Err(Error::Audit(format!("certificate for {} does not expand", self.target)));
        }
        if self.s.max_filtration() + 2 > trace.n {
            return Err(Error::Audit(format!("s has filtration {} > n − 2", self.s.max_filtration())));
        }
        Ok(())
    }
}

/// `γ(ω, ω')`: the coefficient of `e_ℕ` in `ω ∧ ω'`, with `ω ∈ ∧E_t` and
/// `ω'` the window-`t` truncation of a cofinite element.
pub fn gamma(omega: &SpinVector, omega_prime: &SpinVector) -> Result<Rational> {
    let t = omega.n();
    if omega_prime.n() != t {
        return Err(Error::LevelMismatch { left: t, right: omega_prime.n() });
    }
    let full = bits::full(t);
    let mut out = Rational::zero();
    for (s, c) in omega.terms() {
        let mut y = SpinVector::term(t, full & !s, omega_prime.coeff(full & !s));
        let idx: Vec<usize> = bits::indices(*s).collect();
        for &i in idx.iter().rev() {
            y = y.outer_index(i);
        }
        out += c * y.coeff(full);
    }
    Ok(out)
}

/// `γ(Xω, ω') + γ(ω, Xω') − tr(X)·γ(ω, ω')` for `X ∈ gl(E_t)`.
pub fn gamma_equivariance_residual(x: &SoElement, omega: &SpinVector, omega_prime: &SpinVector) -> Result<Rational> {
    let lhs = gamma(&gl_standard(x, omega)?, omega_prime)? + gamma(omega, &gl_standard(x, omega_prime)?)?;
    Ok(lhs - x.trace() * gamma(omega, omega_prime)?)
}

/// A seeded homogeneous polynomial in even limit variables with complements in `{1..span}`.
pub fn random_limit_polynomial(seed: u64, degree: usize, span: usize, terms: usize) -> Result<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<Var> = bits::subsets_with_parity(span, false).into_iter().map(Var::Limit).collect();
    let level = Level::Limit { window: span };
    loop {
        let mut list = Vec::new();
        for _ in 0..terms {
            let m: Monomial = (0..degree).map(|_| vars[rng.gen_range(0..vars.len())]).collect();
            let c = int(rng.gen_range(1..=3)) * if rng.gen_bool(0.5) { int(1) } else { int(-1) };
            list.push((m, c));
        }
        let p = Polynomial::from_terms(level, list)?;
        if !p.is_zero() {
            return Ok(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{is_pure, sample_off_cone};
    use crate::rational::frac;
    use num_traits::Signed;

    fn lim(w: usize) -> Level {
        Level::Limit { window: w }
    }

    fn lv(idx: &[usize]) -> Var {
        Var::Limit(bits::from_indices(idx.iter().copied()))
    }

    #[test]
    fn display_and_parse_round_trip() {
        let level = Level::Finite(4);
        let p = Polynomial::parse(level, "x[]*x[1,2,3,4] - x[1,2]*x[3,4] + 3/2*x[1,3]^2 - 5").unwrap();
        assert_eq!(p.to_string(), "-5 + x[]*x[1,2,3,4] - x[1,2]*x[3,4] + 3/2*x[1,3]^2");
        assert_eq!(Polynomial::parse(level, &p.to_string()).unwrap(), p);
        let l = Polynomial::parse(lim(4), "x[~1,2]*x[~]").unwrap();
        assert_eq!(l.to_string(), "x[~]*x[~1,2]");
        assert!(Polynomial::parse(level, "x[~1]").is_err());
        assert!(Polynomial::parse(level, "x[5]").is_err());
        assert_eq!(Polynomial::parse(level, "0").unwrap(), Polynomial::zero(level));
    }

    #[test]
    fn eval_examples() {
        let c = Polynomial::constant(Level::Finite(3), frac(7, 2));
        assert_eq!(eval_poly(&c, &SpinVector::omega0(3)).unwrap(), frac(7, 2));
        let p = Polynomial::variable(Level::Finite(2), Var::Finite(0b11)).unwrap();
        assert_eq!(eval_poly(&p, &SpinVector::basis(2, 0b11)).unwrap(), int(1));
        assert!(matches!(eval_poly(&p, &SpinVector::basis(2, 0b1)), Err(Error::ParityMismatch { .. })));
        assert!(eval_poly(&p, &SpinVector::basis(3, 0)).is_err());
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(4, Parity::Even, 2).len(), 36);
        assert_eq!(monomials(5, Parity::Even, 2).len(), 136);
        assert_eq!(monomials(3, Parity::Odd, 3).len(), 20);
    }

    #[test]
    fn quadric_is_beta_norm() {
        let q = i4_quadric().unwrap();
        assert_eq!(q.homogeneous_degree(), Some(2));
        assert!(eval_poly(&q, &SpinVector::omega0(4)).unwrap().is_zero());
        let mut x = SpinVector::basis(4, 0);
        x.add_term(bits::full(4), int(1));
        assert!(!eval_poly(&q, &x).unwrap().is_zero());
        assert!(!is_pure(&x).is_pure());
        let lambda = beta_ratio(&q).unwrap();
        let norm = beta_norm(4, Parity::Even).unwrap();
        for seed in 0..20 {
            let y = sample_off_cone(4, seed, Parity::Even);
            assert_eq!(eval_poly(&q, &y).unwrap(), lambda.clone() * eval_poly(&norm, &y).unwrap());
        }
    }

    #[test]
    fn whole_space_has_no_forms() {
        let pts: Vec<SpinVector> = (0..40).map(|s| sample_off_cone(4, 900 + s, Parity::Even)).collect();
        assert!(vanishing_forms(&pts, 2).unwrap().is_empty());
        assert!(matches!(
            vanishing_forms(&pts[..10], 2),
            Err(Error::TooFewPoints { points: 10, required: 36 })
        ));
    }

    #[test]
    fn pullback_identity_and_pi() {
        let q = i4_quadric().unwrap();
        assert_eq!(pullback(&q, &Matrix::identity(16)).unwrap(), q);
        let all: Vec<u32> = (0..32).collect();
        let l = linear_map_matrix(5, 4, &all, |x| pi_tower(x, 4)).unwrap();
        let p = pullback(&q, &l).unwrap();
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert!(p.variables().iter().all(|v| !bits::contains(v.mask(), 5)));
        for seed in 0..10 {
            let x = sample_off_cone(5, seed, Parity::Even);
            assert_eq!(eval_poly(&p, &x).unwrap(), eval_poly(&q, &pi_tower(&x, 4).unwrap()).unwrap());
        }
    }

    #[test]
    fn pullback_rejects_bad_shape() {
        let q = i4_quadric().unwrap();
        assert!(pullback(&q, &Matrix::identity(8)).is_err());
        let inhom = Polynomial::parse(Level::Finite(2), "x[]^2 + x[1,2]").unwrap();
        assert_eq!(pullback(&inhom, &Matrix::identity(4)), Err(Error::Inhomogeneous));
    }

    #[test]
    fn family_separates_at_five() {
        let fam = orbit_pullback_family(5, 3, 8).unwrap();
        assert!(fam.members[0].seed.is_none());
        for seed in 0..5 {
            let x = sample_cone_point(5, 100 + seed, Parity::Even).unwrap();
            assert!(certify_membership(&x, &fam).unwrap().passes());
            let y = sample_off_cone(5, 100 + seed, Parity::Even);
            assert!(!certify_membership(&y, &fam).unwrap().passes());
        }
        assert!(certify_membership(&SpinVector::highest(5, Parity::Even), &fam).unwrap().passes());
    }

    #[test]
    fn ff_action_matches_sign_rule() {
        // e_I with I = {1,2,5,6,…}: complement {3,4}.
        let v = lv(&[3, 4]);
        let (img, c) = ff_on_variable(1, 2, v, 6).unwrap().unwrap();
        assert_eq!(img, lv(&[1, 2, 3, 4]));
        assert_eq!(c, int(-2));
        let (img, c) = ff_on_variable(1, 5, v, 6).unwrap().unwrap();
        assert_eq!(img, lv(&[1, 3, 4, 5]));
        assert_eq!(c, int(2));
        assert_eq!(ff_on_variable(3, 5, v, 6).unwrap(), None);
        assert!(matches!(ff_on_variable(1, 7, v, 6), Err(Error::Truncation { .. })));
    }

    #[test]
    fn derivation_is_leibniz() {
        let p = Polynomial::from_terms(lim(6), [(vec![lv(&[]), lv(&[3, 4])], int(1))]).unwrap();
        let d = derivation_ff(1, 2, &p, 6).unwrap();
        assert_eq!(d.terms().len(), 2);
        let sq = Polynomial::from_terms(lim(6), [(vec![lv(&[]), lv(&[])], int(1))]).unwrap();
        let d = derivation_ff(1, 2, &sq, 6).unwrap();
        assert_eq!(d.coefficient(&[lv(&[]), lv(&[1, 2])]), int(-4));
    }

    #[test]
    fn diagonal_scales_by_half_degree() {
        for seed in 0..5 {
            let p = random_limit_polynomial(seed, 3, 4, 4).unwrap();
            let d = derivation_gl(5, 5, &p, 6).unwrap();
            assert_eq!(d, p.widen(6).scale(&frac(3, 2)));
        }
    }

    #[test]
    fn trace_on_a_single_variable() {
        let p = Polynomial::variable(lim(4), lv(&[1, 2])).unwrap();
        let t = degree_lowering_trace(&p, 8).unwrap();
        assert_eq!((t.k, t.n, t.ell()), (2, 4, 1));
        assert_eq!(t.q, Polynomial::one(lim(8)));
        assert!(t.residual.is_zero());
        t.verify().unwrap();
    }

    #[test]
    fn trace_on_the_quadric_at_level_six() {
        let q = embed_limit(&i4_quadric().unwrap()).unwrap();
        let t = degree_lowering_trace(&q, 8).unwrap();
        assert_eq!((t.k, t.n, t.ell()), (4, 6, 1));
        assert_eq!(t.pivot, lv(&[1, 2, 3, 4]));
        assert_eq!(t.q.homogeneous_degree(), Some(1));
        t.verify().unwrap();
    }

    #[test]
    fn trace_tie_breaks_on_lowest_mask() {
        let p = Polynomial::parse(lim(4), "x[~3,4]*x[~1,2] + x[~1,3]^2").unwrap();
        let t = degree_lowering_trace(&p, 8).unwrap();
        assert_eq!(t.pivot, lv(&[1, 2]));
        t.verify().unwrap();
    }

    #[test]
    fn trace_errors() {
        assert_eq!(degree_lowering_trace(&Polynomial::zero(lim(4)), 8).unwrap_err(), Error::ZeroPolynomial);
        let p = Polynomial::parse(lim(4), "x[~1,2] + x[~]^2").unwrap();
        assert_eq!(degree_lowering_trace(&p, 8).unwrap_err(), Error::Inhomogeneous);
        let p = Polynomial::parse(lim(6), "x[~1,2,3,4,5,6]").unwrap();
        assert!(matches!(degree_lowering_trace(&p, 6), Err(Error::Truncation { needed: 8, .. })));
    }

    #[test]
    fn solving_elements() {
        let q = embed_limit(&i4_quadric().unwrap()).unwrap();
        let t = degree_lowering_trace(&q, 8).unwrap();
        let top = produce_solving_element(&t, Var::top(6), 8).unwrap();
        assert_eq!(&top.element, t.last());
        top.audit(&t).unwrap();
        // 6 -> 7: the moved index is outside every complement of q.
        let e = produce_solving_element(&t, lv(&[1, 2, 3, 4, 5, 7]), 8).unwrap();
        assert_eq!(e.power, 1);
        e.audit(&t).unwrap();
        let e = produce_solving_element(&t, lv(&[2, 3, 4, 5, 6, 7]), 8).unwrap();
        e.audit(&t).unwrap();
        assert!(produce_solving_element(&t, lv(&[1, 2, 3, 4]), 8).is_err());
        assert!(produce_solving_element(&t, lv(&[1, 2, 3, 4, 5, 9]), 8).is_err());
    }

    #[test]
    fn gl_step_touching_q_is_corrected() {
        let p = Polynomial::parse(lim(4), "x[~1,2]*x[~3,4]").unwrap();
        let t = degree_lowering_trace(&p, 6).unwrap();
        assert_eq!((t.pivot, t.n), (lv(&[1, 2]), 4));
        // 3 -> 5 also acts on q = x[~3,4].
        let e = produce_solving_element(&t, lv(&[1, 2, 4, 5]), 6).unwrap();
        assert_eq!(e.power, 2);
        e.audit(&t).unwrap();
        let (sol, els) = assemble(&t, lv(&[1, 2, 4, 5]), 6).unwrap();
        sol.audit(&t, &els).unwrap();
        let (sol, els) = assemble(&t, Var::top(6), 6).unwrap();
        sol.audit(&t, &els).unwrap();
    }

    #[test]
    fn assembled_solutions_pass_audit() {
        let q = embed_limit(&i4_quadric().unwrap()).unwrap();
        let t = degree_lowering_trace(&q, 8).unwrap();
        for target in [Var::top(6), lv(&[2, 3, 4, 5, 6, 7]), Var::top(8)] {
            let (sol, els) = assemble(&t, target, 8).unwrap();
            sol.audit(&t, &els).unwrap();
        }
    }

    #[test]
    fn gamma_pairs_complements() {
        let t = 4;
        let w = SpinVector::basis(t, 0b0101);
        let dual = truncate_var(Var::Limit(0b0101), t).unwrap();
        assert_eq!(gamma(&w, &dual).unwrap().abs(), int(1));
        let other = truncate_var(Var::Limit(0b0011), t).unwrap();
        assert!(gamma(&w, &other).unwrap().is_zero());
    }

    #[test]
    fn gamma_is_gl_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..10 {
            let x = SoElement::random(4, &mut rng, true);
            let w = sample_off_cone(4, seed, Parity::Even);
            let w2 = sample_off_cone(4, seed + 50, Parity::Even);
            assert!(gamma_equivariance_residual(&x, &w, &w2).unwrap().is_zero());
        }
    }

    #[test]
    fn family_is_deterministic() {
        let a = orbit_pullback_family(4, 9, 3).unwrap();
        let b = orbit_pullback_family(4, 9, 3).unwrap();
        assert_eq!(a.polynomials(), b.polynomials());
        assert_eq!(a.members[0].polynomial, i4_quadric().unwrap());
    }
}
