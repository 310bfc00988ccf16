//! Polynomial generators of the coefficient ring under a degree bound.

use crate::{Error, Prime, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// The generators v_m (degree 2p^m - 2) that fit under the degree bound.
///
/// The singular model stores no generators at all: its coefficient ring is
/// just Z_(p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTable {
    prime: Prime,
    degree_bound: u32,
    degrees: Vec<u32>,
}

impl GeneratorTable {
    pub fn new(prime: Prime, degree_bound: u32) -> Result<Arc<GeneratorTable>> {
        if degree_bound < 1 {
            return Err(Error::EmptyWindow(degree_bound));
        }
        let mut degrees = Vec::new();
        let mut power = 1u64;
        loop {
            power = power.saturating_mul(prime.get());
            let degree = 2 * power - 2;
            if degree > degree_bound as u64 {
                break;
            }
            degrees.push(degree as u32);
        }
        Ok(Arc::new(GeneratorTable { prime, degree_bound, degrees }))
    }

    /// Table with no polynomial generators: coefficients are plain Z_(p).
    pub fn without_generators(prime: Prime, degree_bound: u32) -> Result<Arc<GeneratorTable>> {
        if degree_bound < 1 {
            return Err(Error::EmptyWindow(degree_bound));
        }
        Ok(Arc::new(GeneratorTable { prime, degree_bound, degrees: Vec::new() }))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// Number of stored generators.
    pub fn count(&self) -> usize {
        self.degrees.len()
    }

    /// Degree of v_index, 1-based.
    pub fn generator_degree(&self, index: usize) -> Result<u32> {
        if index == 0 || index > self.degrees.len() {
            return Err(Error::GeneratorOutOfRange { index, bound: self.degree_bound });
        }
        Ok(self.degrees[index - 1])
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }
}

/// Exponent vector over the stored generators; entry i is the power of
/// v_{i+1}. Ordering is lexicographic, which within a fixed degree is the
/// graded-lexicographic order used everywhere for basis enumeration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn unit(table: &GeneratorTable) -> Monomial {
        Monomial { exps: vec![0; table.count()] }
    }

    pub fn generator(table: &GeneratorTable, index: usize) -> Result<Monomial> {
        table.generator_degree(index)?;
        let mut exps = vec![0; table.count()];
        exps[index - 1] = 1;
        Ok(Monomial { exps })
    }

    pub fn from_exponents(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, table: &GeneratorTable) -> u32 {
        self.exps.iter().zip(table.degrees()).map(|(&e, &d)| e * d).sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.exps.len(), other.exps.len(), "generator count mismatch");
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    /// Whether some v_j with 1 <= j <= top divides this monomial.
    pub fn touches_generators_below(&self, top: usize) -> bool {
        self.exps.iter().take(top).any(|&e| e > 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "v{}", i + 1)?;
            } else {
                write!(f, "v{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// All monomials of exactly the given degree, ascending lexicographically.
///
/// Degrees above the bound are an error; odd or unreachable degrees give an
/// empty list.
pub fn monomial_basis(table: &GeneratorTable, degree: u32) -> Result<Vec<Monomial>> {
    if degree > table.degree_bound() {
        return Err(Error::DegreeBound { requested: degree as i64, bound: table.degree_bound() });
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; table.count()];
    enumerate(table, 0, degree, &mut current, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn enumerate(table: &GeneratorTable, idx: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if idx == table.count() {
        if remaining == 0 {
            out.push(Monomial { exps: current.clone() });
        }
        return;
    }
    let d = table.degrees()[idx];
    let max = remaining / d;
    for e in 0..=max {
        current[idx] = e;
        enumerate(table, idx + 1, remaining - e * d, current, out);
    }
    current[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(p: u64, d: u32) -> Arc<GeneratorTable> {
        GeneratorTable::new(Prime::new(p).unwrap(), d).unwrap()
    }

    #[test]
    fn generator_degrees() {
        let t = table(3, 16);
        assert_eq!(t.count(), 2);
        assert_eq!(t.generator_degree(1).unwrap(), 4);
        assert_eq!(t.generator_degree(2).unwrap(), 16);
        assert!(t.generator_degree(3).is_err());
        let t = table(5, 20);
        assert_eq!(t.degrees(), &[8]);
    }

    #[test]
    fn unit_basis_in_degree_zero() {
        let t = table(3, 16);
        let b = monomial_basis(&t, 0).unwrap();
        assert_eq!(b, vec![Monomial::unit(&t)]);
    }

    #[test]
    fn odd_degrees_are_empty() {
        let t = table(3, 16);
        assert!(monomial_basis(&t, 2).unwrap().is_empty());
        assert!(monomial_basis(&t, 7).unwrap().is_empty());
    }

    #[test]
    fn degree_sixteen_at_p_three() {
        // 4a + 16b = 16 admits exactly v_1^4 and v_2.
        let t = table(3, 16);
        let b = monomial_basis(&t, 16).unwrap();
        assert_eq!(
            b,
            vec![Monomial::from_exponents(vec![0, 1]), Monomial::from_exponents(vec![4, 0])]
        );
    }

    #[test]
    fn bound_is_enforced() {
        let t = table(3, 16);
        assert!(monomial_basis(&t, 18).is_err());
    }

    #[test]
    fn display_reads_naturally() {
        let t = table(3, 20);
        let m = Monomial::from_exponents(vec![4, 0]).times(&Monomial::generator(&t, 2).unwrap());
        assert_eq!(m.to_string(), "v1^4*v2");
    }
}
