//! Homogeneous polynomials in the v generators with exact rational
//! coefficients.

use crate::coeff::{GeneratorTable, Monomial};
use crate::scalar::{self, Scalar};
use crate::{Error, Result};
use num::{BigInt, BigRational, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A homogeneous polynomial: every stored monomial has the tagged degree and
/// a nonzero coefficient. Coefficients are arbitrary rationals; p-locality is
/// a property checked where required, because the formal-group logarithm
/// passes through genuinely non-local intermediate values.
#[derive(Debug, Clone)]
pub struct GradedPolynomial {
    table: Arc<GeneratorTable>,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for GradedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        *self.table == *other.table && self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for GradedPolynomial {}

impl GradedPolynomial {
    pub fn zero(table: Arc<GeneratorTable>, degree: u32) -> Self {
        GradedPolynomial { table, degree, terms: BTreeMap::new() }
    }

    pub fn constant(table: Arc<GeneratorTable>, value: Scalar) -> Self {
        let mono = Monomial::unit(&table);
        let mut p = Self::zero(table, 0);
        p.insert(mono, value);
        p
    }

    pub fn generator(table: Arc<GeneratorTable>, index: usize) -> Result<Self> {
        let degree = table.generator_degree(index)?;
        let mono = Monomial::generator(&table, index)?;
        let mut p = Self::zero(table, degree);
        p.insert(mono, scalar::int(1));
        Ok(p)
    }

    /// Single-term polynomial; the degree is read off the monomial.
    pub fn term(table: Arc<GeneratorTable>, mono: Monomial, coeff: Scalar) -> Self {
        let degree = mono.degree(&table);
        let mut p = Self::zero(table, degree);
        p.insert(mono, coeff);
        p
    }

    fn insert(&mut self, mono: Monomial, coeff: Scalar) {
        debug_assert_eq!(mono.degree(&self.table), self.degree, "inhomogeneous term");
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(*self.table, *other.table, "generator table mismatch");
        assert_eq!(self.degree, other.degree, "cannot add across degrees");
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Self::zero(self.table.clone(), self.degree);
        }
        let mut out = Self::zero(self.table.clone(), self.degree);
        for (m, c) in self.terms() {
            out.terms.insert(m.clone(), c * factor);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&scalar::int(-1))
    }

    /// Exact product. Exceeding the table's degree bound is an error, never a
    /// silent truncation.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(*self.table, *other.table, "generator table mismatch");
        let degree = self.degree + other.degree;
        if degree > self.table.degree_bound() {
            return Err(Error::DegreeBound {
                requested: degree as i64,
                bound: self.table.degree_bound(),
            });
        }
        let mut out = Self::zero(self.table.clone(), degree);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.insert(m1.times(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Exact power by repeated multiplication.
    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut out = Self::constant(self.table.clone(), scalar::int(1));
        for _ in 0..exp {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Whether every coefficient lies in Z_(p).
    pub fn is_p_integral(&self) -> bool {
        let p = self.table.prime();
        self.terms.values().all(|c| scalar::is_p_local(c, p))
    }

    /// Image modulo (p, v_1, ..., v_{level-1}): monomials touching a dropped
    /// generator vanish and surviving coefficients are reduced to their
    /// canonical residue in [0, p). Requires p-integral coefficients.
    pub fn reduce_mod_ideal(&self, level: usize) -> Self {
        assert!(level >= 1, "level must be at least 1");
        let p = self.table.prime();
        let mut out = Self::zero(self.table.clone(), self.degree);
        for (m, c) in self.terms() {
            if m.touches_generators_below(level - 1) {
                continue;
            }
            let r = scalar::mod_p(c, p);
            if r != 0 {
                out.terms.insert(m.clone(), BigRational::from_integer(BigInt::from(r)));
            }
        }
        out
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m.is_unit() {
                write!(f, "{c}")?;
            } else if c == &scalar::int(1) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::Prime;

    fn table() -> Arc<GeneratorTable> {
        GeneratorTable::new(Prime::new(3).unwrap(), 16).unwrap()
    }

    #[test]
    fn products_accumulate() {
        let t = table();
        let v1 = GradedPolynomial::generator(t.clone(), 1).unwrap();
        let sq = v1.mul(&v1).unwrap();
        assert_eq!(sq.degree(), 8);
        assert_eq!(sq.coefficient(&Monomial::from_exponents(vec![2, 0])), int(1));
    }

    #[test]
    fn overflow_is_an_error() {
        let t = table();
        let v2 = GradedPolynomial::generator(t.clone(), 2).unwrap();
        assert!(matches!(v2.mul(&v2), Err(Error::DegreeBound { .. })));
    }

    #[test]
    fn cancelling_terms_vanish() {
        let t = table();
        let v1 = GradedPolynomial::generator(t.clone(), 1).unwrap();
        let s = v1.add(&v1.neg());
        assert!(s.is_zero());
    }

    #[test]
    fn reduction_drops_low_generators_and_reduces_mod_p() {
        let t = table();
        // 3 reduces to zero mod (p).
        let three = GradedPolynomial::constant(t.clone(), int(3));
        assert!(three.reduce_mod_ideal(1).is_zero());
        // v_1 + 3 v_1 = 4 v_1 reduces to v_1 mod (p).
        let v1 = GradedPolynomial::generator(t.clone(), 1).unwrap();
        let four_v1 = v1.add(&v1.scale(&int(3)));
        assert_eq!(four_v1.reduce_mod_ideal(1), v1);
        // v_1 dies mod (p, v_1).
        assert!(v1.reduce_mod_ideal(2).is_zero());
        // Coefficients like 5/7 reduce through the unit denominator.
        let c = GradedPolynomial::term(t.clone(), Monomial::generator(&t, 1).unwrap(), ratio(5, 7));
        assert_eq!(c.reduce_mod_ideal(1), v1.scale(&int(2)));
    }
}
