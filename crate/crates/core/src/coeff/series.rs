//! Truncated power series in one variable x of topological degree 2, with
//! homogeneous polynomial coefficients.
//!
//! A series of weight w stores coefficients for x^1 through x^K; the
//! coefficient of x^k is homogeneous of degree 2k - w. All series here have
//! zero constant term, so truncated products and compositions are exact in
//! every retained order. Degree truncation and order truncation coincide on
//! homogeneous series, which is what makes the fixed window sound.

use crate::coeff::{GeneratorTable, GradedPolynomial};
use crate::scalar::{self, Scalar};
use num::One;
use crate::Result;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousSeries {
    table: Arc<GeneratorTable>,
    weight: u32,
    /// coeffs[k - 1] is the coefficient of x^k; zero coefficients are stored
    /// as empty polynomials tagged with their degree 2k - weight.
    coeffs: Vec<GradedPolynomial>,
}

impl HomogeneousSeries {
    /// The zero series of the given weight and truncation order. Slots x^k
    /// with 2k below the weight cannot hold a nonzero homogeneous
    /// coefficient; their placeholders are pinned at degree zero.
    pub fn zero(table: Arc<GeneratorTable>, weight: u32, order: usize) -> Self {
        let coeffs = (1..=order)
            .map(|k| {
                let d = (2 * k as i64 - weight as i64).max(0) as u32;
                GradedPolynomial::zero(table.clone(), d)
            })
            .collect();
        HomogeneousSeries { table, weight, coeffs }
    }

    /// The identity series x.
    pub fn x(table: Arc<GeneratorTable>, order: usize) -> Self {
        let mut s = Self::zero(table.clone(), 2, order);
        s.set(1, GradedPolynomial::constant(table, scalar::int(1)));
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn coefficient(&self, k: usize) -> &GradedPolynomial {
        &self.coeffs[k - 1]
    }

    pub fn set(&mut self, k: usize, value: GradedPolynomial) {
        assert!(k >= 1 && k <= self.coeffs.len(), "order out of range");
        assert_eq!(value.degree(), coefficient_degree(k, self.weight), "wrong coefficient degree");
        self.coeffs[k - 1] = value;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.weight, other.weight, "weight mismatch");
        assert_eq!(self.order(), other.order(), "order mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        HomogeneousSeries { table: self.table.clone(), weight: self.weight, coeffs }
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.scale(factor)).collect();
        HomogeneousSeries { table: self.table.clone(), weight: self.weight, coeffs }
    }

    /// Truncated product; exact in all retained orders because both factors
    /// have zero constant term.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.order(), other.order(), "order mismatch");
        let order = self.order();
        let mut out = Self::zero(self.table.clone(), self.weight + other.weight, order);
        for i in 1..=order {
            if self.coeffs[i - 1].is_zero() {
                continue;
            }
            for j in 1..=(order - i) {
                if other.coeffs[j - 1].is_zero() {
                    continue;
                }
                let product = self.coeffs[i - 1].mul(&other.coeffs[j - 1])?;
                let k = i + j;
                out.coeffs[k - 1] = out.coeffs[k - 1].add(&product);
            }
        }
        Ok(out)
    }

    /// Substitution self(inner(x)) for an inner series of weight 2.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        assert_eq!(inner.weight, 2, "substitution needs a weight-2 inner series");
        assert_eq!(self.order(), inner.order(), "order mismatch");
        let order = self.order();
        let mut out = Self::zero(self.table.clone(), self.weight, order);
        // power holds inner^j.
        let mut power = inner.clone();
        for j in 1..=order {
            let cj = &self.coeffs[j - 1];
            if !cj.is_zero() {
                for k in j..=order {
                    if power.coeffs[k - 1].is_zero() {
                        continue;
                    }
                    let term = cj.mul(&power.coeffs[k - 1])?;
                    out.coeffs[k - 1] = out.coeffs[k - 1].add(&term);
                }
            }
            if j < order {
                power = power.mul(inner)?;
            }
        }
        Ok(out)
    }

    /// Compositional inverse of a weight-2 series with leading coefficient 1.
    pub fn compositional_inverse(&self) -> Result<Self> {
        assert_eq!(self.weight, 2, "inversion needs a weight-2 series");
        let order = self.order();
        assert!(order >= 1, "empty series");
        let lead = &self.coeffs[0];
        assert!(
            !lead.is_zero() && lead.coefficient(&crate::coeff::Monomial::unit(&self.table)).is_one(),
            "leading coefficient must be 1"
        );
        // Powers self^j for j = 1..order.
        let mut powers = Vec::with_capacity(order);
        powers.push(self.clone());
        for _ in 1..order {
            let next = powers.last().unwrap().mul(self)?;
            powers.push(next);
        }
        let mut inv = Self::zero(self.table.clone(), 2, order);
        inv.set(1, GradedPolynomial::constant(self.table.clone(), scalar::int(1)));
        for k in 2..=order {
            // Coefficient of x^k in sum_{j<k} e_j self^j must cancel e_k.
            let mut acc = GradedPolynomial::zero(self.table.clone(), coefficient_degree(k, 2));
            for j in 1..k {
                let ej = &inv.coeffs[j - 1];
                if ej.is_zero() {
                    continue;
                }
                let pk = &powers[j - 1].coeffs[k - 1];
                if pk.is_zero() {
                    continue;
                }
                acc = acc.add(&ej.mul(pk)?);
            }
            inv.set(k, acc.neg());
        }
        Ok(inv)
    }

    /// Whether this is exactly the identity series x.
    pub fn is_identity(&self) -> bool {
        if self.weight != 2 {
            return false;
        }
        let unit = crate::coeff::Monomial::unit(&self.table);
        self.coeffs[0].coefficient(&unit).is_one()
            && self.coeffs[0].terms().count() == 1
            && self.coeffs[1..].iter().all(GradedPolynomial::is_zero)
    }
}

fn coefficient_degree(k: usize, weight: u32) -> u32 {
    let d = 2 * k as i64 - weight as i64;
    assert!(d >= 0, "coefficient degree underflow");
    d as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Prime;

    fn table() -> Arc<GeneratorTable> {
        GeneratorTable::new(Prime::new(3).unwrap(), 16).unwrap()
    }

    #[test]
    fn identity_composes_trivially() {
        let t = table();
        let x = HomogeneousSeries::x(t.clone(), 9);
        assert!(x.compose(&x).unwrap().is_identity());
        assert!(x.compositional_inverse().unwrap().is_identity());
    }

    #[test]
    fn inverse_of_shifted_series() {
        // S = x + v_1 x^3 must invert to x - v_1 x^3 + higher, with
        // S(inv(S)) = x exactly in all retained orders.
        let t = table();
        let mut s = HomogeneousSeries::x(t.clone(), 9);
        s.set(3, GradedPolynomial::generator(t.clone(), 1).unwrap());
        let inv = s.compositional_inverse().unwrap();
        assert!(s.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&s).unwrap().is_identity());
        let v1 = GradedPolynomial::generator(t.clone(), 1).unwrap();
        assert_eq!(inv.coefficient(3), &v1.neg());
    }

    #[test]
    fn products_respect_weights() {
        let t = table();
        let x = HomogeneousSeries::x(t.clone(), 6);
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq.weight(), 4);
        // x * x = x^2: coefficient of x^2 is the constant 1.
        assert!(sq.coefficient(2).coefficient(&crate::coeff::Monomial::unit(&t)).is_one());
        assert!(sq.coefficient(3).is_zero());
    }
}
