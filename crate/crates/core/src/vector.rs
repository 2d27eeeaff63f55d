//! Vectors of `V_n` in the hyperbolic basis `e_1..e_n, f_1..f_n`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    pub e: Vec<Rational>,
    pub f: Vec<Rational>,
}

impl Vector {
    pub fn zero(n: usize) -> Self {
        Self {
            e: vec![Rational::zero(); n],
            f: vec![Rational::zero(); n],
        }
    }

    pub fn basis_e(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.e[i - 1] = Rational::one();
        v
    }

    pub fn basis_f(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.f[i - 1] = Rational::one();
        v
    }

    /// The `j`-th basis vector in the coordinate order `e_1..e_n, f_1..f_n`.
    pub fn basis(n: usize, j: usize) -> Self {
        if j < n {
            Self::basis_e(n, j + 1)
        } else {
            Self::basis_f(n, j - n + 1)
        }
    }

    pub fn from_coords(n: usize, coords: &[Rational]) -> Result<Self> {
        if coords.len() != 2 * n {
            return Err(Error::Invalid(format!(
                "expected {} coordinates, got {}",
                2 * n,
                coords.len()
            )));
        }
        Ok(Self {
            e: coords[..n].to_vec(),
            f: coords[n..].to_vec(),
        })
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.e.iter().chain(&self.f).cloned().collect()
    }

    pub fn n(&self) -> usize {
        self.e.len()
    }

    /// The bilinear form `(v|w) = sum v_e[i] w_f[i] + v_f[i] w_e[i]`.
    pub fn dot(&self, other: &Vector) -> Rational {
        assert_eq!(self.n(), other.n());
        let mut acc = Rational::zero();
        for i in 0..self.n() {
            if !self.e[i].is_zero() && !other.f[i].is_zero() {
                acc += &self.e[i] * &other.f[i];
            }
            if !self.f[i].is_zero() && !other.e[i].is_zero() {
                acc += &self.f[i] * &other.e[i];
            }
        }
        acc
    }

    /// `q(v) = (v|v)`, so that `v * v = q(v)` in the Clifford algebra.
    pub fn q(&self) -> Rational {
        self.dot(self)
    }

    pub fn is_isotropic(&self) -> bool {
        self.q().is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().chain(&self.f).all(Zero::is_zero)
    }

    pub fn e_part_is_zero(&self) -> bool {
        self.e.iter().all(Zero::is_zero)
    }

    pub fn f_part_is_zero(&self) -> bool {
        self.f.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector {
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
            f: self.f.iter().zip(&other.f).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector {
            e: self.e.iter().zip(&other.e).map(|(a, b)| a - b).collect(),
            f: self.f.iter().zip(&other.f).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Vector {
        Vector {
            e: self.e.iter().map(|a| a * s).collect(),
            f: self.f.iter().map(|a| a * s).collect(),
        }
    }

    /// Pads with zero coordinates up to level `m`.
    pub fn embed(&self, m: usize) -> Vector {
        assert!(m >= self.n());
        let mut v = Vector::zero(m);
        v.e[..self.n()].clone_from_slice(&self.e);
        v.f[..self.n()].clone_from_slice(&self.f);
        v
    }

    /// Drops coordinates above level `m`; errors if any of them is nonzero.
    pub fn restrict(&self, m: usize) -> Result<Vector> {
        if self.e[m..].iter().chain(&self.f[m..]).any(|x| !x.is_zero()) {
            return Err(Error::Invalid(format!("vector has support above level {m}")));
        }
        Ok(Vector {
            e: self.e[..m].to_vec(),
            f: self.f[..m].to_vec(),
        })
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.e.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("{}*e{}", c, i + 1));
            }
        }
        for (i, c) in self.f.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("{}*f{}", c, i + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn hyperbolic_form() {
        let n = 3;
        for i in 1..=n {
            for j in 1..=n {
                let d = if i == j { int(1) } else { int(0) };
                assert_eq!(Vector::basis_e(n, i).dot(&Vector::basis_f(n, j)), d);
                assert!(Vector::basis_e(n, i).dot(&Vector::basis_e(n, j)).is_zero());
                assert!(Vector::basis_f(n, i).dot(&Vector::basis_f(n, j)).is_zero());
            }
        }
        let v = Vector::basis_e(n, 1).add(&Vector::basis_f(n, 1));
        assert_eq!(v.q(), int(2));
    }
}
