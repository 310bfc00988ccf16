//! Tensor powers of the small BP chain model of BZ/p and their homology.
//!
//! One factor C is the free graded BP_*-module with a single generator c_d in
//! every degree d >= 1. The differential sends c_{2m} to
//! sum_{i=0}^{m-1} a_i * c_{2(m-i)-1} and kills odd generators, where the a_i
//! are the p-series coefficients of a [`PSeriesTable`]. The n-fold tensor
//! power over BP_* carries the Koszul differential; its homology in degree d
//! is the reduced BP homology of the n-fold smash power of BZ/p in that
//! degree, valid for d <= D - 1 when the complex is assembled through degree
//! D.
//!
//! Every boundary application turns exactly one even c_{2m} into an odd
//! generator, so chains stratify by the number of odd tensor slots and the
//! differential raises that count by one. Homology therefore splits by odd
//! count, which is the bigrading carried through all tables here.
//!
//! Swapping the p-series table for the singular one (a_0 = p, all higher a_i
//! zero) makes the same machinery compute ordinary reduced integral homology
//! of the smash power, which serves as an independent sanity oracle.

use crate::coeff::{monomial_basis, Monomial, PSeriesTable};
use crate::linalg::{
    subquotient_structure_with, ClassCoordinates, FinitePGroup, PivotRule, SparseMatrix,
    Subquotient,
};
use crate::scalar::{int, Scalar};
use crate::{Error, Prime, Result};
use num::{BigRational, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// One tensor generator c_{d_1} (x) ... (x) c_{d_n}; every slot is >= 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorGenerator {
    cells: Vec<u32>,
}

impl TensorGenerator {
    pub fn new(cells: Vec<u32>) -> TensorGenerator {
        assert!(!cells.is_empty(), "tensor generator needs at least one slot");
        assert!(cells.iter().all(|&d| d >= 1), "tensor slots start in degree 1");
        TensorGenerator { cells }
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn degree(&self) -> u32 {
        self.cells.iter().sum()
    }

    pub fn odd_count(&self) -> u32 {
        self.cells.iter().filter(|&&d| d % 2 == 1).count() as u32
    }
}

/// Basis element of the tensor complex: a coefficient monomial times a
/// tensor generator. Total degree is the sum of both degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBasisElement {
    monomial: Monomial,
    generator: TensorGenerator,
}

impl ChainBasisElement {
    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }

    pub fn generator(&self) -> &TensorGenerator {
        &self.generator
    }

    pub fn odd_count(&self) -> u32 {
        self.generator.odd_count()
    }
}

type ElementKey = (Vec<u32>, Vec<u32>);

fn element_key(e: &ChainBasisElement) -> ElementKey {
    (e.monomial.exponents().to_vec(), e.generator.cells().to_vec())
}

/// The assembled n-fold tensor power through a fixed degree bound: ordered
/// bases, boundary matrices, and the odd-count stratification per degree.
///
/// Basis order in each degree is graded-lex on (monomial, generator tuple):
/// monomial degree, then monomial exponents, then the cell tuple. The order
/// is part of the serialization contract and must stay stable.
#[derive(Debug)]
pub struct DegreewiseComplex {
    pseries: Arc<PSeriesTable>,
    n: usize,
    degree_bound: u32,
    bases: Vec<Vec<ChainBasisElement>>,
    index: Vec<HashMap<ElementKey, usize>>,
    boundaries: Vec<SparseMatrix>,
    strata: Vec<BTreeMap<u32, Vec<usize>>>,
}

impl DegreewiseComplex {
    /// Builds bases and boundary matrices for all degrees <= degree_bound and
    /// verifies that the boundary squares to zero and raises the odd count by
    /// exactly one.
    pub fn assemble(
        pseries: Arc<PSeriesTable>,
        n: usize,
        degree_bound: u32,
    ) -> Result<DegreewiseComplex> {
        if n == 0 {
            return Err(Error::EmptyTensorPower(n));
        }
        if degree_bound == 0 {
            return Err(Error::EmptyWindow(degree_bound));
        }
        if pseries.degree_bound() < degree_bound {
            return Err(Error::SeriesCoverage {
                have: pseries.degree_bound(),
                need: degree_bound,
            });
        }
        let prime = pseries.prime();
        let table = pseries.table();

        let mut bases: Vec<Vec<ChainBasisElement>> = Vec::with_capacity(degree_bound as usize + 1);
        for d in 0..=degree_bound {
            let mut elements = Vec::new();
            for mdeg in (0..=d).step_by(2) {
                for mono in monomial_basis(table, mdeg)? {
                    for cells in compositions(d - mdeg, n) {
                        elements.push(ChainBasisElement {
                            monomial: mono.clone(),
                            generator: TensorGenerator::new(cells),
                        });
                    }
                }
            }
            elements.sort_by_cached_key(|e| {
                (e.monomial.degree(table), element_key(e))
            });
            bases.push(elements);
        }

        let index: Vec<HashMap<ElementKey, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, e)| (element_key(e), i)).collect())
            .collect();

        let strata: Vec<BTreeMap<u32, Vec<usize>>> = bases
            .iter()
            .map(|b| {
                let mut m: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                for (i, e) in b.iter().enumerate() {
                    m.entry(e.odd_count()).or_default().push(i);
                }
                m
            })
            .collect();

        let mut boundaries = Vec::with_capacity(degree_bound as usize + 1);
        boundaries.push(SparseMatrix::zero(prime, 0, bases[0].len()));
        for d in 1..=degree_bound as usize {
            let mut m = SparseMatrix::zero(prime, bases[d - 1].len(), bases[d].len());
            for (col, elt) in bases[d].iter().enumerate() {
                let mut sign_parity = 0u32;
                for (slot, &cell) in elt.generator.cells().iter().enumerate() {
                    if cell % 2 == 0 {
                        let half = cell / 2;
                        for i in 0..half as usize {
                            let a = pseries.a(i);
                            if a.is_zero() {
                                continue;
                            }
                            let mut cells = elt.generator.cells().to_vec();
                            cells[slot] = cell - 2 * i as u32 - 1;
                            for (nu, coeff) in a.terms() {
                                let mono = elt.monomial.times(nu);
                                let key = (mono.exponents().to_vec(), cells.clone());
                                let row = index[d - 1][&key];
                                let value = if sign_parity % 2 == 0 {
                                    coeff.clone()
                                } else {
                                    -coeff.clone()
                                };
                                m.add_to(row, col, value);
                            }
                        }
                    }
                    sign_parity += cell;
                }
            }
            boundaries.push(m);
        }

        let cx = DegreewiseComplex { pseries, n, degree_bound, bases, index, boundaries, strata };
        cx.validate()?;
        Ok(cx)
    }

    /// Checks the two assembly invariants on every stored entry.
    fn validate(&self) -> Result<()> {
        for d in 1..=self.degree_bound as usize {
            for (row, col, _) in self.boundaries[d].iter() {
                let source = self.bases[d][col].odd_count();
                let target = self.bases[d - 1][row].odd_count();
                if target != source + 1 {
                    return Err(Error::OddCountViolation { degree: d as u32 });
                }
            }
        }
        for d in 2..=self.degree_bound as usize {
            if !self.boundaries[d - 1].mul(&self.boundaries[d]).is_zero() {
                return Err(Error::BoundarySquare { degree: d as u32 });
            }
        }
        Ok(())
    }

    pub fn prime(&self) -> Prime {
        self.pseries.prime()
    }

    /// Number of tensor factors.
    pub fn factors(&self) -> usize {
        self.n
    }

    /// Degree through which chains and boundaries are assembled.
    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// Largest degree whose homology the assembled data determines.
    pub fn max_homology_degree(&self) -> u32 {
        self.degree_bound - 1
    }

    pub fn pseries(&self) -> &Arc<PSeriesTable> {
        &self.pseries
    }

    pub fn basis(&self, degree: u32) -> Result<&[ChainBasisElement]> {
        self.check_degree(degree, self.degree_bound)?;
        Ok(&self.bases[degree as usize])
    }

    /// Boundary matrix from degree d to degree d - 1 (empty for d = 0).
    pub fn boundary(&self, degree: u32) -> Result<&SparseMatrix> {
        self.check_degree(degree, self.degree_bound)?;
        Ok(&self.boundaries[degree as usize])
    }

    /// Position of a basis element in its degree, if it is stored.
    pub fn element_index(&self, degree: u32, monomial: &Monomial, cells: &[u32]) -> Option<usize> {
        let d = degree as usize;
        if d >= self.index.len() {
            return None;
        }
        self.index[d].get(&(monomial.exponents().to_vec(), cells.to_vec())).copied()
    }

    /// Basis positions in one odd-count stratum of a degree.
    pub fn stratum_indices(&self, degree: u32, odd_count: u32) -> &[usize] {
        static EMPTY: Vec<usize> = Vec::new();
        self.strata
            .get(degree as usize)
            .and_then(|m| m.get(&odd_count))
            .unwrap_or(&EMPTY)
    }

    /// Odd counts that actually occur in a degree.
    pub fn occupied_strata(&self, degree: u32) -> Vec<u32> {
        self.strata
            .get(degree as usize)
            .map(|m| m.keys().copied().collect())
            .unwrap_or_default()
    }

    pub fn apply_boundary(&self, degree: u32, chain: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_degree(degree, self.degree_bound)?;
        Ok(self.boundaries[degree as usize].apply(chain))
    }

    pub fn is_cycle(&self, degree: u32, chain: &[Scalar]) -> Result<bool> {
        Ok(self.apply_boundary(degree, chain)?.iter().all(Zero::is_zero))
    }

    /// Cap product with the degree-2 cohomology class of one tensor factor
    /// (1-based): c_d in that slot drops to c_{d-2}, or to zero for d <= 2.
    ///
    /// Returns one matrix per degree d mapping chains of degree d to degree
    /// d - 2, after verifying exactly that the collection commutes with the
    /// boundary. The operation is even, so no Koszul signs appear.
    pub fn cap_with_t(&self, factor: usize) -> Result<Vec<SparseMatrix>> {
        assert!(factor >= 1 && factor <= self.n, "tensor factor out of range");
        let prime = self.prime();
        let mut maps = Vec::with_capacity(self.degree_bound as usize + 1);
        for d in 0..=self.degree_bound as usize {
            let target_rows = if d >= 2 { self.bases[d - 2].len() } else { 0 };
            let mut m = SparseMatrix::zero(prime, target_rows, self.bases[d].len());
            if d >= 2 {
                for (col, elt) in self.bases[d].iter().enumerate() {
                    let cell = elt.generator.cells()[factor - 1];
                    if cell <= 2 {
                        continue;
                    }
                    let mut cells = elt.generator.cells().to_vec();
                    cells[factor - 1] = cell - 2;
                    let key = (elt.monomial.exponents().to_vec(), cells);
                    let row = self.index[d - 2][&key];
                    m.set(row, col, int(1));
                }
            }
            maps.push(m);
        }
        for d in 2..=self.degree_bound as usize {
            let via_cap = self.boundaries[d - 2].mul(&maps[d]);
            let via_boundary = maps[d - 1].mul(&self.boundaries[d]);
            if via_cap != via_boundary {
                return Err(Error::BoundarySquare { degree: d as u32 });
            }
        }
        Ok(maps)
    }

    fn check_degree(&self, degree: u32, bound: u32) -> Result<()> {
        if degree > bound {
            return Err(Error::DegreeBound { requested: degree as i64, bound });
        }
        Ok(())
    }
}

/// All ordered tuples of `parts` positive integers summing to `total`, in
/// lexicographic order.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if total < parts as u32 {
        return out;
    }
    let mut current = Vec::with_capacity(parts);
    fill_compositions(total, parts, &mut current, &mut out);
    out
}

fn fill_compositions(total: u32, parts: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        current.push(total);
        out.push(current.clone());
        current.pop();
        return;
    }
    // Leave at least 1 for each remaining slot.
    for first in 1..=total - (parts as u32 - 1) {
        current.push(first);
        fill_compositions(total - first, parts - 1, current, out);
        current.pop();
    }
}

/// A cycle together with its degree; the class it represents lives in the
/// homology of the complex the cycle was built against.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyClass {
    degree: u32,
    cycle: Vec<Scalar>,
}

impl HomologyClass {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn cycle(&self) -> &[Scalar] {
        &self.cycle
    }

    pub fn scale(&self, s: &Scalar) -> HomologyClass {
        HomologyClass {
            degree: self.degree,
            cycle: self.cycle.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &HomologyClass) -> HomologyClass {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        HomologyClass {
            degree: self.degree,
            cycle: self.cycle.iter().zip(&other.cycle).map(|(a, b)| a + b).collect(),
        }
    }
}

/// One odd-count stratum of the homology in one degree, with the embedding
/// data back into the full chain basis.
#[derive(Debug)]
pub struct StratumHomology {
    degree: u32,
    odd_count: u32,
    indices: Vec<usize>,
    subquotient: Subquotient,
}

impl StratumHomology {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn odd_count(&self) -> u32 {
        self.odd_count
    }

    /// Positions of the stratum basis inside the full degree basis.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.subquotient
    }

    pub fn group(&self) -> &FinitePGroup {
        self.subquotient.group()
    }

    /// Lifts a stratum-coordinate vector to full degree coordinates.
    pub fn embed(&self, chain: &[Scalar], full_dim: usize) -> Vec<Scalar> {
        assert_eq!(chain.len(), self.indices.len(), "stratum dimension mismatch");
        let mut out = vec![Scalar::zero(); full_dim];
        for (value, &i) in chain.iter().zip(&self.indices) {
            out[i] = value.clone();
        }
        out
    }

    /// Restricts a full degree vector to stratum coordinates; entries outside
    /// the stratum must vanish.
    pub fn restrict(&self, chain: &[Scalar]) -> Vec<Scalar> {
        let picked: Vec<Scalar> = self.indices.iter().map(|&i| chain[i].clone()).collect();
        let total: usize = picked.iter().filter(|x| !x.is_zero()).count();
        let nonzero: usize = chain.iter().filter(|x| !x.is_zero()).count();
        assert_eq!(total, nonzero, "vector has support outside the stratum");
        picked
    }
}

/// Homology of a [`DegreewiseComplex`] in all valid degrees, total and split
/// by odd count, with representative-level subquotient data for class
/// arithmetic.
#[derive(Debug)]
pub struct Homology {
    complex: Arc<DegreewiseComplex>,
    rule: PivotRule,
    total: Vec<Subquotient>,
    strata: BTreeMap<(u32, u32), StratumHomology>,
    table: HomologyTable,
}

impl Homology {
    pub fn compute(complex: Arc<DegreewiseComplex>) -> Result<Homology> {
        Homology::compute_with(complex, PivotRule::MinPosition)
    }

    /// As [`Homology::compute`], with an explicit SNF pivot rule; results
    /// must not depend on the rule (exercised by the determinism audit).
    pub fn compute_with(complex: Arc<DegreewiseComplex>, rule: PivotRule) -> Result<Homology> {
        let max_degree = complex.max_homology_degree();

        let total: Vec<Subquotient> = (0..=max_degree)
            .into_par_iter()
            .map(|d| {
                let b = complex.boundary(d)?;
                let a = complex.boundary(d + 1)?;
                subquotient_structure_with(b, a, rule)
            })
            .collect::<Result<_>>()?;
        for (d, sq) in total.iter().enumerate() {
            if sq.group().free_rank() != 0 {
                return Err(Error::UnexpectedFreeRank { degree: d as u32 });
            }
        }

        let keys: Vec<(u32, u32)> = (1..=max_degree)
            .flat_map(|d| complex.occupied_strata(d).into_iter().map(move |q| (d, q)))
            .collect();
        let strata: BTreeMap<(u32, u32), StratumHomology> = keys
            .into_par_iter()
            .map(|(d, q)| {
                let piece = stratum_subquotient(&complex, d, q, rule)?;
                Ok(((d, q), piece))
            })
            .collect::<Result<_>>()?;
        for piece in strata.values() {
            if piece.group().free_rank() != 0 {
                return Err(Error::UnexpectedFreeRank { degree: piece.degree() });
            }
        }

        let rows: Vec<HomologyRow> = strata
            .values()
            .filter(|piece| !piece.group().is_trivial())
            .map(|piece| HomologyRow {
                degree: piece.degree(),
                odd_count: piece.odd_count(),
                exponents: piece.group().exponents().to_vec(),
            })
            .collect();
        let table = HomologyTable {
            p: complex.prime().get(),
            n: complex.factors(),
            degree_bound: complex.degree_bound(),
            rows,
        };

        Ok(Homology { complex, rule, total, strata, table })
    }

    pub fn complex(&self) -> &Arc<DegreewiseComplex> {
        &self.complex
    }

    pub fn pivot_rule(&self) -> PivotRule {
        self.rule
    }

    pub fn max_degree(&self) -> u32 {
        self.complex.max_homology_degree()
    }

    pub fn table(&self) -> &HomologyTable {
        &self.table
    }

    pub fn group(&self, degree: u32) -> Result<&FinitePGroup> {
        Ok(self.subquotient(degree)?.group())
    }

    pub fn subquotient(&self, degree: u32) -> Result<&Subquotient> {
        if degree > self.max_degree() {
            return Err(Error::DegreeBound { requested: degree as i64, bound: self.max_degree() });
        }
        Ok(&self.total[degree as usize])
    }

    /// One bigraded piece; `None` when the stratum has no chains at all.
    pub fn stratum(&self, degree: u32, odd_count: u32) -> Result<Option<&StratumHomology>> {
        if degree > self.max_degree() {
            return Err(Error::DegreeBound { requested: degree as i64, bound: self.max_degree() });
        }
        Ok(self.strata.get(&(degree, odd_count)))
    }

    pub fn strata(&self) -> impl Iterator<Item = &StratumHomology> {
        self.strata.values()
    }

    /// Wraps a chain vector as a class after checking it is a cycle.
    pub fn class_of(&self, degree: u32, cycle: Vec<Scalar>) -> Result<HomologyClass> {
        self.subquotient(degree)?;
        if !self.complex.is_cycle(degree, &cycle)? {
            return Err(Error::NotACycle { degree });
        }
        Ok(HomologyClass { degree, cycle })
    }

    /// The class of c_1 (x) ... (x) c_1 in degree n.
    pub fn toral_class(&self) -> Result<HomologyClass> {
        let n = self.complex.factors();
        let degree = n as u32;
        self.subquotient(degree)?;
        let table = self.complex.pseries().table();
        let unit = Monomial::unit(table);
        let cells = vec![1u32; n];
        let idx = self
            .complex
            .element_index(degree, &unit, &cells)
            .expect("toral generator is in the assembled basis");
        let mut cycle = vec![Scalar::zero(); self.complex.basis(degree)?.len()];
        cycle[idx] = int(1);
        Ok(HomologyClass { degree, cycle })
    }

    pub fn coordinates(&self, class: &HomologyClass) -> Result<ClassCoordinates> {
        self.subquotient(class.degree())?.coordinates(class.cycle())
    }

    pub fn is_zero(&self, class: &HomologyClass) -> Result<bool> {
        self.subquotient(class.degree())?.is_zero_class(class.cycle())
    }

    pub fn multiply_by_p(&self, class: &HomologyClass) -> HomologyClass {
        class.scale(&int(self.complex.prime().get() as i64))
    }

    /// Multiplies a class by the coefficient generator v_j (1-based).
    ///
    /// Needs homology to stay valid in the target degree:
    /// degree + deg v_j <= D - 1.
    pub fn multiply_by_generator(&self, class: &HomologyClass, j: usize) -> Result<HomologyClass> {
        let table = self.complex.pseries().table();
        let w = table.generator_degree(j)?;
        let target = class.degree() + w;
        self.subquotient(target)?;
        let nu = Monomial::generator(table, j)?;
        let mut cycle = vec![Scalar::zero(); self.complex.basis(target)?.len()];
        for (i, value) in class.cycle().iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            let elt = &self.complex.basis(class.degree())?[i];
            let mono = elt.monomial().times(&nu);
            let idx = self
                .complex
                .element_index(target, &mono, elt.generator().cells())
                .expect("coefficient multiple stays within the assembled basis");
            cycle[idx] += value.clone();
        }
        Ok(HomologyClass { degree: target, cycle })
    }

    /// Matrices of multiplication by v_j on homology, in canonical torsion
    /// coordinates, for every degree d with d + deg v_j <= D - 1.
    pub fn induced_multiplication(&self, j: usize) -> Result<BTreeMap<u32, SparseMatrix>> {
        let table = self.complex.pseries().table();
        let w = table.generator_degree(j)?;
        let prime = self.complex.prime();
        let mut out = BTreeMap::new();
        for d in 0..=self.max_degree().saturating_sub(w) {
            let source = self.subquotient(d)?;
            let target = self.subquotient(d + w)?;
            let rows = target.group().exponents().len();
            let cols = source.group().exponents().len();
            let mut m = SparseMatrix::zero(prime, rows, cols);
            for c in 0..cols {
                let rep = HomologyClass { degree: d, cycle: source.torsion_representative(c) };
                let image = self.multiply_by_generator(&rep, j)?;
                let coords = target.coordinates(image.cycle())?;
                for (r, value) in coords.torsion.iter().enumerate() {
                    m.set(r, c, BigRational::from(value.clone()));
                }
            }
            out.insert(d, m);
        }
        Ok(out)
    }

    /// Cap product with the degree-2 class of one tensor factor, on classes.
    pub fn cap_class(&self, class: &HomologyClass, factor: usize) -> Result<HomologyClass> {
        let maps = self.complex.cap_with_t(factor)?;
        let d = class.degree();
        if d < 2 {
            return Ok(HomologyClass { degree: 0, cycle: vec![Scalar::zero(); 0] });
        }
        let cycle = maps[d as usize].apply(class.cycle());
        Ok(HomologyClass { degree: d - 2, cycle })
    }
}

fn stratum_subquotient(
    complex: &DegreewiseComplex,
    degree: u32,
    odd_count: u32,
    rule: PivotRule,
) -> Result<StratumHomology> {
    let indices = complex.stratum_indices(degree, odd_count).to_vec();
    let rows_out = complex.stratum_indices(degree - 1, odd_count + 1);
    let b = submatrix(complex.boundary(degree)?, rows_out, &indices);
    let a = if odd_count == 0 {
        SparseMatrix::zero(complex.prime(), indices.len(), 0)
    } else {
        let cols_in = complex.stratum_indices(degree + 1, odd_count - 1);
        submatrix(complex.boundary(degree + 1)?, &indices, cols_in)
    };
    let subquotient = subquotient_structure_with(&b, &a, rule)?;
    Ok(StratumHomology { degree, odd_count, indices, subquotient })
}

/// Restriction of a matrix to selected rows and columns. Entries in selected
/// columns but unselected rows must already be known to vanish (guaranteed
/// here by the odd-count validation at assembly).
fn submatrix(m: &SparseMatrix, rows: &[usize], cols: &[usize]) -> SparseMatrix {
    let rpos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let cpos: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut out = SparseMatrix::zero(m.prime(), rows.len(), cols.len());
    for (r, c, value) in m.iter() {
        if let (Some(&ri), Some(&ci)) = (rpos.get(&r), cpos.get(&c)) {
            out.set(ri, ci, value.clone());
        }
    }
    out
}

/// Serializable summary of a homology computation: one row per nontrivial
/// bigraded piece, keyed by degree and odd count, holding the ascending
/// p-exponents of the invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRow {
    pub degree: u32,
    pub odd_count: u32,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    p: u64,
    n: usize,
    degree_bound: u32,
    rows: Vec<HomologyRow>,
}

impl HomologyTable {
    pub fn prime_value(&self) -> u64 {
        self.p
    }

    pub fn factors(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn max_degree(&self) -> u32 {
        self.degree_bound - 1
    }

    pub fn rows(&self) -> &[HomologyRow] {
        &self.rows
    }

    /// Total structure in one degree: direct sum of the bigraded pieces.
    pub fn group(&self, degree: u32) -> Result<FinitePGroup> {
        if degree > self.max_degree() {
            return Err(Error::DegreeBound { requested: degree as i64, bound: self.max_degree() });
        }
        let mut exponents = Vec::new();
        for row in self.rows.iter().filter(|r| r.degree == degree) {
            exponents.extend_from_slice(&row.exponents);
        }
        Ok(FinitePGroup::new(exponents, 0))
    }

    pub fn piece(&self, degree: u32, odd_count: u32) -> Result<FinitePGroup> {
        if degree > self.max_degree() {
            return Err(Error::DegreeBound { requested: degree as i64, bound: self.max_degree() });
        }
        let exponents = self
            .rows
            .iter()
            .find(|r| r.degree == degree && r.odd_count == odd_count)
            .map(|r| r.exponents.clone())
            .unwrap_or_default();
        Ok(FinitePGroup::new(exponents, 0))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("homology table serializes")
    }

    pub fn from_json(text: &str) -> Result<HomologyTable> {
        let table: HomologyTable =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Prime::new(table.p)?;
        if table.n == 0 {
            return Err(Error::Schema("tensor power must be at least 1".into()));
        }
        if table.degree_bound == 0 {
            return Err(Error::Schema("degree bound must be at least 1".into()));
        }
        let mut last: Option<(u32, u32)> = None;
        for row in &table.rows {
            if row.degree > table.degree_bound - 1 {
                return Err(Error::Schema(format!(
                    "row degree {} exceeds the valid range",
                    row.degree
                )));
            }
            if row.exponents.is_empty() || row.exponents.iter().any(|&e| e == 0) {
                return Err(Error::Schema("rows must carry positive exponents".into()));
            }
            if row.exponents.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Schema("exponents must be ascending".into()));
            }
            let key = (row.degree, row.odd_count);
            if let Some(prev) = last {
                if prev >= key {
                    return Err(Error::Schema("rows must ascend by (degree, odd_count)".into()));
                }
            }
            last = Some(key);
        }
        Ok(table)
    }
}
