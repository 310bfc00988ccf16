//! The p-series of the universal p-typical formal group law.
//!
//! The logarithm is built from the Hazewinkel generators: l_0 = 1 and
//! p * l_n = sum_{i<n} l_i * v_{n-i}^{p^i}, with l_n the coefficient of
//! x^{p^n}. The p-series is exp(p * log(x)) where exp is the compositional
//! inverse of the logarithm. Writing [p](x) = sum_i a_i x^{i+1}, the
//! coefficient a_i is homogeneous of degree 2i and p-integral even though
//! the logarithm itself has denominators; integrality is checked exactly on
//! every retained coefficient.
//!
//! A table built without generators carries the additive formal group law,
//! whose p-series is p*x. That variant models ordinary p-local homology and
//! is tagged with its own scheme so serialized tables cannot be confused.

use crate::coeff::{GeneratorTable, GradedPolynomial, HomogeneousSeries, Monomial};
use crate::scalar::{self, Scalar};
use crate::{Error, Prime, Result};
use num::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Which coefficient ring a table was computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientScheme {
    /// Full truncated coefficient ring with Hazewinkel generators.
    Hazewinkel,
    /// No generators: the additive formal group over Z_(p).
    Singular,
}

impl fmt::Display for CoefficientScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientScheme::Hazewinkel => write!(f, "hazewinkel"),
            CoefficientScheme::Singular => write!(f, "singular"),
        }
    }
}

/// The formal group logarithm truncated at the given order, as the series
/// x + sum_n l_n x^{p^n} over the table's stored generators.
pub fn compute_logarithm(table: Arc<GeneratorTable>, order: usize) -> Result<HomogeneousSeries> {
    let p = table.prime().get();
    let mut ells: Vec<GradedPolynomial> =
        vec![GradedPolynomial::constant(table.clone(), scalar::int(1))];
    let mut series = HomogeneousSeries::x(table.clone(), order);
    let mut p_pow_n = 1u64;
    for n in 1..=table.count() {
        p_pow_n = match p_pow_n.checked_mul(p) {
            Some(v) if v as usize <= order => v,
            _ => break,
        };
        let degree = 2 * p_pow_n as u32 - 2;
        let mut sum = GradedPolynomial::zero(table.clone(), degree);
        let mut p_pow_i = 1u32;
        for i in 0..n {
            let v = GradedPolynomial::generator(table.clone(), n - i)?;
            sum = sum.add(&ells[i].mul(&v.pow(p_pow_i)?)?);
            p_pow_i *= p as u32;
        }
        let ell = sum.scale(&scalar::ratio(1, p as i64));
        series.set(p_pow_n as usize, ell.clone());
        ells.push(ell);
    }
    Ok(series)
}

/// The p-series exp(p * log(x)) truncated at the given order.
pub fn compute_p_series(table: Arc<GeneratorTable>, order: usize) -> Result<HomogeneousSeries> {
    let log = compute_logarithm(table.clone(), order)?;
    let scaled = log.scale(&scalar::int(table.prime().get() as i64));
    let exp = log.compositional_inverse()?;
    exp.compose(&scaled)
}

/// Extracted p-series coefficients a_0, a_1, ... with a_i in degree 2i,
/// stored for every degree up to the table's bound.
#[derive(Debug, Clone)]
pub struct PSeriesTable {
    prime: Prime,
    degree_bound: u32,
    scheme: CoefficientScheme,
    table: Arc<GeneratorTable>,
    a: Vec<GradedPolynomial>,
}

impl PartialEq for PSeriesTable {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime
            && self.degree_bound == other.degree_bound
            && self.scheme == other.scheme
            && self.a == other.a
    }
}

impl Eq for PSeriesTable {}

impl PSeriesTable {
    /// Compute over the full truncated coefficient ring.
    pub fn compute(prime: Prime, degree_bound: u32) -> Result<Self> {
        let table = GeneratorTable::new(prime, degree_bound)?;
        Self::from_table(table, CoefficientScheme::Hazewinkel)
    }

    /// Compute over the generator-free ring, i.e. the additive p-series p*x.
    pub fn singular(prime: Prime, degree_bound: u32) -> Result<Self> {
        let table = GeneratorTable::without_generators(prime, degree_bound)?;
        Self::from_table(table, CoefficientScheme::Singular)
    }

    fn from_table(table: Arc<GeneratorTable>, scheme: CoefficientScheme) -> Result<Self> {
        let degree_bound = table.degree_bound();
        let order = degree_bound as usize / 2 + 1;
        let series = compute_p_series(table.clone(), order)?;
        let mut a = Vec::with_capacity(order);
        for i in 0..order {
            let coeff = series.coefficient(i + 1).clone();
            if let Some((mono, c)) = coeff
                .terms()
                .find(|(_, c)| !scalar::is_p_local(c, table.prime()))
            {
                let term = GradedPolynomial::term(table.clone(), mono.clone(), c.clone());
                return Err(Error::Integrality { index: i, term: term.to_string() });
            }
            a.push(coeff);
        }
        let p_const = GradedPolynomial::constant(table.clone(), scalar::int(table.prime().get() as i64));
        assert_eq!(a[0], p_const, "leading p-series coefficient must be p");
        Ok(PSeriesTable { prime: table.prime(), degree_bound, scheme, table, a })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn scheme(&self) -> CoefficientScheme {
        self.scheme
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    /// Number of stored coefficients; a_i is stored for 0 <= i < count.
    pub fn count(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, i: usize) -> &GradedPolynomial {
        assert!(i < self.a.len(), "p-series coefficient a_{i} not stored");
        &self.a[i]
    }

    /// Structural checks on the stored coefficients: the leading coefficient
    /// is p, every a_i is homogeneous of degree 2i and p-integral, and
    /// a_{p^m - 1} is congruent to v_m modulo (p, v_1, ..., v_{m-1}) for
    /// every stored generator.
    pub fn check_properties(&self) -> SeriesPropertyReport {
        let p_const =
            GradedPolynomial::constant(self.table.clone(), scalar::int(self.prime.get() as i64));
        let leading_coefficient_is_p = self.a[0] == p_const;
        let homogeneous = self.a.iter().enumerate().all(|(i, poly)| {
            poly.degree() == 2 * i as u32
                && poly.terms().all(|(m, _)| m.degree(&self.table) == 2 * i as u32)
        });
        let p_integral = self.a.iter().all(GradedPolynomial::is_p_integral);
        let mut congruences = Vec::new();
        let mut p_pow = 1usize;
        for m in 1..=self.table.count() {
            p_pow *= self.prime.get() as usize;
            let index = p_pow - 1;
            let holds = index < self.a.len() && {
                let lhs = self.a[index].reduce_mod_ideal(m);
                let rhs = GradedPolynomial::generator(self.table.clone(), m)
                    .expect("stored generator")
                    .reduce_mod_ideal(m);
                lhs == rhs
            };
            congruences.push((m, holds));
        }
        SeriesPropertyReport { leading_coefficient_is_p, homogeneous, p_integral, congruences }
    }

    /// Compact JSON form with deterministic term order and exact integer
    /// coefficients rendered as decimal strings.
    pub fn to_json(&self) -> String {
        let a = self
            .a
            .iter()
            .enumerate()
            .map(|(i, poly)| EntryJson {
                i,
                terms: poly
                    .terms()
                    .map(|(m, c)| TermJson {
                        exps: m.exponents().to_vec(),
                        num: c.numer().to_string(),
                        den: c.denom().to_string(),
                    })
                    .collect(),
            })
            .collect();
        let doc = TableJson {
            schema: 1,
            p: self.prime.get(),
            degree_bound: self.degree_bound,
            scheme: self.scheme,
            a,
        };
        serde_json::to_string(&doc).expect("table serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableJson =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if doc.schema != 1 {
            return Err(Error::Schema(format!("unsupported schema version {}", doc.schema)));
        }
        let prime = Prime::new(doc.p)?;
        let table = match doc.scheme {
            CoefficientScheme::Hazewinkel => GeneratorTable::new(prime, doc.degree_bound)?,
            CoefficientScheme::Singular => {
                GeneratorTable::without_generators(prime, doc.degree_bound)?
            }
        };
        let order = doc.degree_bound as usize / 2 + 1;
        if doc.a.len() != order {
            return Err(Error::Schema(format!(
                "expected {} coefficients for degree bound {}, found {}",
                order,
                doc.degree_bound,
                doc.a.len()
            )));
        }
        let mut a = Vec::with_capacity(order);
        for (i, entry) in doc.a.iter().enumerate() {
            if entry.i != i {
                return Err(Error::Schema(format!(
                    "coefficient index {} out of order (expected {i})",
                    entry.i
                )));
            }
            let degree = 2 * i as u32;
            let mut poly = GradedPolynomial::zero(table.clone(), degree);
            for term in &entry.terms {
                if term.exps.len() != table.count() {
                    return Err(Error::Schema(format!(
                        "term of a_{i} has {} exponents, table stores {} generators",
                        term.exps.len(),
                        table.count()
                    )));
                }
                let mono = Monomial::from_exponents(term.exps.clone());
                if mono.degree(&table) != degree {
                    return Err(Error::Schema(format!("term of a_{i} has the wrong degree")));
                }
                let num: BigInt = term
                    .num
                    .parse()
                    .map_err(|_| Error::Schema(format!("bad numerator in a_{i}")))?;
                let den: BigInt = term
                    .den
                    .parse()
                    .map_err(|_| Error::Schema(format!("bad denominator in a_{i}")))?;
                if den == BigInt::from(0) || num == BigInt::from(0) {
                    return Err(Error::Schema(format!("degenerate coefficient in a_{i}")));
                }
                let coeff = Scalar::new(num, den);
                if !scalar::is_p_local(&coeff, prime) {
                    return Err(Error::Schema(format!("coefficient of a_{i} is not p-local")));
                }
                poly = poly.add(&GradedPolynomial::term(table.clone(), mono, coeff));
            }
            a.push(poly);
        }
        Ok(PSeriesTable { prime, degree_bound: doc.degree_bound, scheme: doc.scheme, table, a })
    }
}

/// Outcome of [`PSeriesTable::check_properties`].
#[derive(Debug, Clone, Serialize)]
pub struct SeriesPropertyReport {
    pub leading_coefficient_is_p: bool,
    pub homogeneous: bool,
    pub p_integral: bool,
    /// Per stored generator m: does a_{p^m - 1} reduce to v_m modulo
    /// (p, v_1, ..., v_{m-1})?
    pub congruences: Vec<(usize, bool)>,
}

impl SeriesPropertyReport {
    pub fn passed(&self) -> bool {
        self.leading_coefficient_is_p
            && self.homogeneous
            && self.p_integral
            && self.congruences.iter().all(|(_, ok)| *ok)
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    schema: u32,
    p: u64,
    degree_bound: u32,
    scheme: CoefficientScheme,
    a: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: Vec<u32>,
    num: String,
    den: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn logarithm_frozen_coefficients() {
        // l_1 = v_1/3 and l_2 = v_2/3 + v_1^4/9, directly from the recursion
        // 3*l_1 = v_1 and 3*l_2 = v_2 + l_1*v_1^3.
        let t = GeneratorTable::new(p3(), 16).unwrap();
        let log = compute_logarithm(t.clone(), 9).unwrap();
        let v1 = GradedPolynomial::generator(t.clone(), 1).unwrap();
        let v2 = GradedPolynomial::generator(t.clone(), 2).unwrap();
        assert_eq!(log.coefficient(3), &v1.scale(&scalar::ratio(1, 3)));
        let l2 = v2
            .scale(&scalar::ratio(1, 3))
            .add(&v1.pow(4).unwrap().scale(&scalar::ratio(1, 9)));
        assert_eq!(log.coefficient(9), &l2);
        assert!(log.coefficient(2).is_zero());
        assert!(log.coefficient(4).is_zero());
    }

    #[test]
    fn exp_log_round_trip() {
        let t = GeneratorTable::new(p3(), 12).unwrap();
        let log = compute_logarithm(t.clone(), 7).unwrap();
        let exp = log.compositional_inverse().unwrap();
        assert!(log.compose(&exp).unwrap().is_identity());
        assert!(exp.compose(&log).unwrap().is_identity());
    }

    #[test]
    fn p_series_frozen_values_p3() {
        // Hand expansion at p = 3: [3](x) = 3x - 8*v_1*x^3 + O(x^5); the
        // degree-2 coefficient vanishes because no monomial has that degree.
        let ps = PSeriesTable::compute(p3(), 16).unwrap();
        assert_eq!(ps.count(), 9);
        let t = ps.table().clone();
        let three = GradedPolynomial::constant(t.clone(), scalar::int(3));
        let v1 = GradedPolynomial::generator(t.clone(), 1).unwrap();
        assert_eq!(ps.a(0), &three);
        assert!(ps.a(1).is_zero());
        assert_eq!(ps.a(2), &v1.scale(&scalar::int(-8)));
        for i in (1..9).step_by(2) {
            assert!(ps.a(i).is_zero(), "a_{i} must vanish: no monomial in degree {}", 2 * i);
        }
    }

    #[test]
    fn property_report_passes() {
        for (p, d) in [(3u64, 16u32), (5, 16)] {
            let ps = PSeriesTable::compute(Prime::new(p).unwrap(), d).unwrap();
            let report = ps.check_properties();
            assert!(report.passed(), "properties must hold at p={p}, bound {d}");
        }
        let ps = PSeriesTable::compute(p3(), 16).unwrap();
        assert_eq!(ps.check_properties().congruences, vec![(1, true), (2, true)]);
    }

    #[test]
    fn truncation_is_stable() {
        // The same a_i must come out regardless of how far the table extends.
        let small = PSeriesTable::compute(p3(), 8).unwrap();
        let large = PSeriesTable::compute(p3(), 40).unwrap();
        for i in 0..small.count() {
            let s: Vec<_> = small.a(i).terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect();
            let l: Vec<_> = large.a(i).terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect();
            assert_eq!(s.len(), l.len(), "term count differs at a_{i}");
            for ((se, sc), (le, lc)) in s.iter().zip(&l) {
                assert_eq!(sc, lc, "coefficient differs at a_{i}");
                // Exponent vectors agree after padding to the larger table.
                let mut padded = se.clone();
                padded.resize(le.len(), 0);
                assert_eq!(&padded, le, "monomial differs at a_{i}");
            }
        }
    }

    #[test]
    fn singular_scheme_is_multiplication_by_p() {
        let ps = PSeriesTable::singular(p3(), 12).unwrap();
        assert_eq!(ps.table().count(), 0);
        assert_eq!(ps.scheme(), CoefficientScheme::Singular);
        let three = GradedPolynomial::constant(ps.table().clone(), scalar::int(3));
        assert_eq!(ps.a(0), &three);
        for i in 1..ps.count() {
            assert!(ps.a(i).is_zero());
        }
    }

    #[test]
    fn json_round_trip_and_shape() {
        let ps = PSeriesTable::compute(p3(), 16).unwrap();
        let text = ps.to_json();
        assert!(text.starts_with(
            "{\"schema\":1,\"p\":3,\"degree_bound\":16,\"scheme\":\"hazewinkel\",\"a\":[\
             {\"i\":0,\"terms\":[{\"exps\":[0,0],\"num\":\"3\",\"den\":\"1\"}]},\
             {\"i\":1,\"terms\":[]},\
             {\"i\":2,\"terms\":[{\"exps\":[1,0],\"num\":\"-8\",\"den\":\"1\"}]}"
        ));
        let back = PSeriesTable::from_json(&text).unwrap();
        assert_eq!(back, ps);
        assert_eq!(back.to_json(), text);

        let singular = PSeriesTable::singular(p3(), 8).unwrap();
        let text = singular.to_json();
        assert!(text.contains("\"scheme\":\"singular\""));
        assert_eq!(PSeriesTable::from_json(&text).unwrap(), singular);
    }

    #[test]
    fn from_json_rejects_malformed_tables() {
        let ps = PSeriesTable::compute(p3(), 8).unwrap();
        let good = ps.to_json();
        let bad_schema = good.replace("\"schema\":1", "\"schema\":2");
        assert!(PSeriesTable::from_json(&bad_schema).is_err());
        let bad_prime = good.replace("\"p\":3", "\"p\":4");
        assert!(PSeriesTable::from_json(&bad_prime).is_err());
        let bad_coeff = good.replace("\"num\":\"-8\"", "\"num\":\"-8/3\"");
        assert!(PSeriesTable::from_json(&bad_coeff).is_err());
        assert!(PSeriesTable::from_json("not json").is_err());
    }
}
