//! Degreewise finite presentations of the reduced Brown-Peterson homology of
//! BZ/p, its tensor powers, and the modules derived from them.
//!
//! The module N carries one generator z_m in degree 2m + 1 for each m >= 0
//! and one relation sum_i a_i z_(m-i) per m, where the a_i are the p-series
//! coefficients. A tensor power N^k has generators z_I indexed by k-tuples
//! and the slotwise relations. Restricting to a single degree gives a finite
//! presentation of a finite abelian p-group, so exact Smith reduction
//! recovers the isomorphism type degree by degree.
//!
//! Nothing in this pipeline touches boundary operators or Koszul signs; it is
//! independent of the chain-level computation, and agreement between the two
//! is one of the checks the verifier runs. On top of the presentations sit
//! the free modules L_k, the word-indexed direct-sum table they assemble
//! into, and Tor of a tensor power against N computed from the two-stage free
//! resolution y_m -> z_(m-1), y_m -> sum_i a_i y_(m-i).

use std::collections::HashMap;
use std::sync::Arc;

use crate::coeff::{monomial_basis, Monomial, PSeriesTable};
use crate::error::Error;
use crate::linalg::{
    map_kernel_structure_with, FinitePGroup, PivotRule, PresentedModule, SparseMatrix,
};
use crate::prime::Prime;
use crate::scalar::Scalar;
use crate::Result;

/// Knobs that perturb internal orderings without changing any reported
/// isomorphism type. The determinism audit runs every table both ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    /// Pivot selection used by every Smith reduction in the pipeline.
    pub pivot_rule: PivotRule,
    /// Present each degree with its relation columns in reversed order.
    pub reverse_relations: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { pivot_rule: PivotRule::MinPosition, reverse_relations: false }
    }
}

/// Ordered nonnegative compositions of `total` into `parts` slots.
fn nonneg_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(parts);
    fill_nonneg(total, parts, &mut prefix, &mut out);
    out
}

fn fill_nonneg(rest: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slots == 1 {
        prefix.push(rest);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=rest {
        prefix.push(first);
        fill_nonneg(rest - first, slots - 1, prefix, out);
        prefix.pop();
    }
}

/// k-tuples (m_1, ..., m_k) of z-indices with total degree
/// sum (2 m_j + 1) = zdegree, in lexicographic order.
fn z_tuples(k: usize, zdegree: u32) -> Vec<Vec<u32>> {
    let k32 = k as u32;
    if zdegree < k32 || (zdegree - k32) % 2 != 0 {
        return Vec::new();
    }
    nonneg_compositions((zdegree - k32) / 2, k)
}

fn insert_at(others: &[u32], slot: usize, value: u32) -> Vec<u32> {
    let mut tuple = Vec::with_capacity(others.len() + 1);
    tuple.extend_from_slice(&others[..slot]);
    tuple.push(value);
    tuple.extend_from_slice(&others[slot..]);
    tuple
}

/// Ambient generators (monomial, z-tuple) of (N^k)_degree, ordered by
/// (monomial degree, exponents, tuple). The order is a serialization
/// contract shared with the chain engine's basis order.
fn ambient_basis(pseries: &PSeriesTable, k: usize, degree: u32) -> Vec<(Monomial, Vec<u32>)> {
    let table = pseries.table();
    let mut basis = Vec::new();
    let mut mdeg = 0;
    while mdeg <= degree {
        let tuples = z_tuples(k, degree - mdeg);
        if !tuples.is_empty() {
            for mono in monomial_basis(table, mdeg).expect("monomial degree within bound") {
                for tuple in &tuples {
                    basis.push((mono.clone(), tuple.clone()));
                }
            }
        }
        mdeg += 2;
    }
    basis
}

/// All relation instances of (N^k)_degree as symbolic columns: each instance
/// is the list of its (monomial, z-tuple, coefficient) terms. Enumeration
/// order is (slot, relation index, monomial degree, monomial, other-slot
/// tuple) and is deterministic.
fn relation_instances(
    pseries: &PSeriesTable,
    k: usize,
    degree: u32,
) -> Vec<Vec<(Monomial, Vec<u32>, Scalar)>> {
    let table = pseries.table();
    let mut instances = Vec::new();
    let others_min = (k - 1) as u32;
    for slot in 0..k {
        let mut m = 0u32;
        while 2 * m + 1 + others_min <= degree {
            let rest = degree - (2 * m + 1);
            let mut mdeg = 0;
            while mdeg <= rest {
                let others = z_tuples(k - 1, rest - mdeg);
                if !others.is_empty() {
                    for mono in monomial_basis(table, mdeg).expect("monomial degree within bound")
                    {
                        for other in &others {
                            let mut terms = Vec::new();
                            for i in 0..=m {
                                for (nu, c) in pseries.a(i as usize).terms() {
                                    terms.push((
                                        mono.times(nu),
                                        insert_at(other, slot, m - i),
                                        c.clone(),
                                    ));
                                }
                            }
                            instances.push(terms);
                        }
                    }
                }
                mdeg += 2;
            }
            m += 1;
        }
    }
    instances
}

/// One degree layer of N^k: ambient generators, their presentation, and the
/// resulting isomorphism type.
pub struct NPowerLayer {
    degree: u32,
    basis: Vec<(Monomial, Vec<u32>)>,
    index: HashMap<(Vec<u32>, Vec<u32>), usize>,
    module: PresentedModule,
    structure: FinitePGroup,
}

impl NPowerLayer {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Ambient generators as (coefficient monomial, z-index tuple) pairs.
    pub fn basis(&self) -> &[(Monomial, Vec<u32>)] {
        &self.basis
    }

    pub fn module(&self) -> &PresentedModule {
        &self.module
    }

    pub fn structure(&self) -> &FinitePGroup {
        &self.structure
    }

    pub fn index_of(&self, monomial: &Monomial, tuple: &[u32]) -> Option<usize> {
        self.index.get(&(monomial.exponents().to_vec(), tuple.to_vec())).copied()
    }
}

/// The tensor power N^k presented degree by degree up to a bound.
pub struct NPower {
    pseries: Arc<PSeriesTable>,
    k: usize,
    degree_bound: u32,
    options: TableOptions,
    layers: Vec<NPowerLayer>,
}

impl NPower {
    pub fn compute(pseries: Arc<PSeriesTable>, k: usize, degree_bound: u32) -> Result<NPower> {
        NPower::compute_with(pseries, k, degree_bound, TableOptions::default())
    }

    pub fn compute_with(
        pseries: Arc<PSeriesTable>,
        k: usize,
        degree_bound: u32,
        options: TableOptions,
    ) -> Result<NPower> {
        if k == 0 {
            return Err(Error::EmptyTensorPower(0));
        }
        if degree_bound == 0 {
            return Err(Error::EmptyWindow(0));
        }
        if pseries.degree_bound() < degree_bound {
            return Err(Error::SeriesCoverage {
                have: pseries.degree_bound(),
                need: degree_bound,
            });
        }
        let mut layers = Vec::with_capacity(degree_bound as usize + 1);
        for degree in 0..=degree_bound {
            layers.push(build_layer(&pseries, k, degree, options)?);
        }
        Ok(NPower { pseries, k, degree_bound, options, layers })
    }

    pub fn prime(&self) -> Prime {
        self.pseries.prime()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn options(&self) -> TableOptions {
        self.options
    }

    pub fn pseries(&self) -> &Arc<PSeriesTable> {
        &self.pseries
    }

    pub fn layer(&self, degree: u32) -> Result<&NPowerLayer> {
        self.layers.get(degree as usize).ok_or(Error::DegreeBound {
            requested: degree as i64,
            bound: self.degree_bound,
        })
    }

    pub fn structure(&self, degree: u32) -> Result<&FinitePGroup> {
        Ok(self.layer(degree)?.structure())
    }

    /// Matrix of multiplication by v_j from the degree-d layer into the
    /// degree d + deg(v_j) layer, in ambient coordinates. Exact on the nose:
    /// generators map to generators, relations into relations.
    pub fn multiplication_matrix(&self, degree: u32, j: usize) -> Result<SparseMatrix> {
        let table = self.pseries.table();
        let w = table.generator_degree(j)?;
        let target_degree = degree + w;
        let source = self.layer(degree)?;
        let target = self.layer(target_degree)?;
        let generator = Monomial::generator(table, j)?;
        let mut matrix =
            SparseMatrix::zero(self.prime(), target.basis.len(), source.basis.len());
        for (col, (mono, tuple)) in source.basis.iter().enumerate() {
            let image = mono.times(&generator);
            let row = target
                .index_of(&image, tuple)
                .expect("generator multiple stays within the target layer");
            matrix.set(row, col, crate::scalar::int(1));
        }
        Ok(matrix)
    }
}

fn build_layer(
    pseries: &PSeriesTable,
    k: usize,
    degree: u32,
    options: TableOptions,
) -> Result<NPowerLayer> {
    let basis = ambient_basis(pseries, k, degree);
    let mut index = HashMap::with_capacity(basis.len());
    for (i, (mono, tuple)) in basis.iter().enumerate() {
        index.insert((mono.exponents().to_vec(), tuple.clone()), i);
    }
    let mut columns = Vec::new();
    for terms in relation_instances(pseries, k, degree) {
        let mut col = vec![crate::scalar::int(0); basis.len()];
        for (mono, tuple, coeff) in terms {
            let at = index[&(mono.exponents().to_vec(), tuple)];
            col[at] = &col[at] + &coeff;
        }
        columns.push(col);
    }
    if options.reverse_relations {
        columns.reverse();
    }
    let prime = pseries.prime();
    let module = PresentedModule::new(
        prime,
        basis.len(),
        SparseMatrix::from_columns(prime, basis.len(), &columns),
    );
    let structure = module.structure_with(options.pivot_rule);
    if structure.free_rank() > 0 {
        return Err(Error::UnexpectedFreeRank { degree });
    }
    Ok(NPowerLayer { degree, basis, index, module, structure })
}

/// The free module L_k on generators y_m in degree 2m for 0 < m < p^k.
/// L_0 has no generators and is the zero module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LModule {
    level: u32,
    degrees: Vec<u32>,
}

pub fn l_module(p: Prime, level: u32) -> LModule {
    let count = p
        .get()
        .checked_pow(level)
        .expect("p^level overflows; no table this large is representable");
    let degrees = (1..count)
        .map(|m| u32::try_from(2 * m).expect("generator degree overflows u32"))
        .collect();
    LModule { level, degrees }
}

impl LModule {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Degrees of the free generators, ascending.
    pub fn generator_degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }
}

/// The word-indexed direct sum of shifted tensor powers, bucketed by the
/// number of odd-type letters.
///
/// A word assigns each of the n slots either the letter N or the letter L;
/// an L in slot i carries the subscript counting the N letters before it, and
/// a word contributes one shifted copy of N^j (j the total N count) for every
/// choice of one free generator from each of its L factors. Words in which an
/// L precedes every N contribute nothing since L_0 is zero.
pub struct RhsMainTable {
    prime: Prime,
    n: usize,
    degree_bound: u32,
    buckets: std::collections::BTreeMap<(u32, u32), FinitePGroup>,
    last_n: Vec<u64>,
    last_l: Vec<u64>,
}

impl RhsMainTable {
    pub fn compute(
        pseries: Arc<PSeriesTable>,
        n: usize,
        degree_bound: u32,
    ) -> Result<RhsMainTable> {
        RhsMainTable::compute_with(pseries, n, degree_bound, TableOptions::default())
    }

    pub fn compute_with(
        pseries: Arc<PSeriesTable>,
        n: usize,
        degree_bound: u32,
        options: TableOptions,
    ) -> Result<RhsMainTable> {
        if n == 0 {
            return Err(Error::EmptyTensorPower(0));
        }
        if n >= 32 {
            return Err(Error::EmptyTensorPower(n));
        }
        let prime = pseries.prime();
        let mut powers = Vec::with_capacity(n);
        for j in 1..=n {
            powers.push(NPower::compute_with(Arc::clone(&pseries), j, degree_bound, options)?);
        }
        let mut exps: std::collections::BTreeMap<(u32, u32), Vec<u32>> =
            std::collections::BTreeMap::new();
        let mut last_n = vec![0u64; degree_bound as usize + 1];
        let mut last_l = vec![0u64; degree_bound as usize + 1];
        for mask in 0u32..(1 << n) {
            let j = mask.count_ones() as usize;
            if j == 0 {
                continue;
            }
            let mut shifts = vec![0u32];
            for pos in 0..n {
                if (mask >> pos) & 1 == 1 {
                    continue;
                }
                let subscript = (mask & ((1 << pos) - 1)).count_ones();
                let degrees = l_module(prime, subscript);
                let mut next = Vec::with_capacity(shifts.len() * degrees.degrees.len());
                for &s in &shifts {
                    for &e in degrees.generator_degrees() {
                        if s + e <= degree_bound {
                            next.push(s + e);
                        }
                    }
                }
                shifts = next;
                if shifts.is_empty() {
                    break;
                }
            }
            let ends_in_n = (mask >> (n - 1)) & 1 == 1;
            for &s in &shifts {
                for d in s..=degree_bound {
                    let piece = powers[j - 1].structure(d - s)?;
                    if piece.is_trivial() {
                        continue;
                    }
                    exps.entry((d, j as u32)).or_default().extend_from_slice(piece.exponents());
                    let tally = if ends_in_n { &mut last_n } else { &mut last_l };
                    tally[d as usize] += piece.torsion_length();
                }
            }
        }
        let buckets = exps
            .into_iter()
            .map(|(key, list)| (key, FinitePGroup::new(list, 0)))
            .collect();
        Ok(RhsMainTable { prime, n, degree_bound, buckets, last_n, last_l })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    fn check_degree(&self, degree: u32) -> Result<()> {
        if degree > self.degree_bound {
            return Err(Error::DegreeBound {
                requested: degree as i64,
                bound: self.degree_bound,
            });
        }
        Ok(())
    }

    /// The summand contributed by words with exactly `letters` N letters.
    pub fn bucket(&self, degree: u32, letters: u32) -> Result<FinitePGroup> {
        self.check_degree(degree)?;
        Ok(self.buckets.get(&(degree, letters)).cloned().unwrap_or_default())
    }

    /// N-letter counts with a nontrivial bucket in this degree, ascending.
    pub fn occupied_buckets(&self, degree: u32) -> Vec<u32> {
        self.buckets
            .range((degree, 0)..=(degree, u32::MAX))
            .map(|(&(_, letters), _)| letters)
            .collect()
    }

    /// Direct sum over all buckets in one degree.
    pub fn group(&self, degree: u32) -> Result<FinitePGroup> {
        self.check_degree(degree)?;
        let mut total = FinitePGroup::trivial();
        for (_, piece) in self.buckets.range((degree, 0)..=(degree, u32::MAX)) {
            total = total.direct_sum(piece);
        }
        Ok(total)
    }

    /// Torsion lengths (log_p of the orders) of the parts contributed by
    /// words ending in N and in L respectively.
    pub fn last_letter_torsion(&self, degree: u32) -> Result<(u64, u64)> {
        self.check_degree(degree)?;
        Ok((self.last_n[degree as usize], self.last_l[degree as usize]))
    }

    /// Deliberate-perturbation hook for negative-control tests.
    #[cfg(test)]
    pub(crate) fn buckets_mut(
        &mut self,
    ) -> &mut std::collections::BTreeMap<(u32, u32), FinitePGroup> {
        &mut self.buckets
    }
}

/// Tor of N^k against N, one isomorphism type per degree of the kernel of
/// id (x) f_1 : N^k (x) F_1 -> N^k (x) F_0.
///
/// Rows are indexed by the kernel's own degree d, where generators z_I (x) y_m
/// sit in degree zdeg(I) + 2m; the classical Tor degree is d - 1 and both are
/// reported. Under the Kunneth embedding the degree-d kernel classes land in
/// degree d of the chain-level homology, so degreewise comparisons match
/// kernel degree against homology degree with no shift.
pub struct TorTable {
    prime: Prime,
    k: usize,
    degree_bound: u32,
    groups: Vec<FinitePGroup>,
}

impl TorTable {
    pub fn compute(pseries: Arc<PSeriesTable>, k: usize, degree_bound: u32) -> Result<TorTable> {
        TorTable::compute_with(pseries, k, degree_bound, TableOptions::default())
    }

    pub fn compute_with(
        pseries: Arc<PSeriesTable>,
        k: usize,
        degree_bound: u32,
        options: TableOptions,
    ) -> Result<TorTable> {
        if k == 0 {
            return Err(Error::EmptyTensorPower(0));
        }
        if degree_bound == 0 {
            return Err(Error::EmptyWindow(0));
        }
        if pseries.degree_bound() < degree_bound {
            return Err(Error::SeriesCoverage {
                have: pseries.degree_bound(),
                need: degree_bound,
            });
        }
        let prime = pseries.prime();
        let mut groups = Vec::with_capacity(degree_bound as usize + 1);
        for degree in 0..=degree_bound {
            groups.push(tor_layer(&pseries, k, degree, options)?);
        }
        Ok(TorTable { prime, k, degree_bound, groups })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// Isomorphism type of the kernel in its own degree.
    pub fn group(&self, kernel_degree: u32) -> Result<&FinitePGroup> {
        self.groups.get(kernel_degree as usize).ok_or(Error::DegreeBound {
            requested: kernel_degree as i64,
            bound: self.degree_bound,
        })
    }

    /// (kernel degree, classical Tor degree, group) for every nontrivial row.
    pub fn rows(&self) -> impl Iterator<Item = (u32, u32, &FinitePGroup)> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_trivial())
            .map(|(d, g)| (d as u32, d as u32 - 1, g))
    }
}

/// Kernel of id (x) f_1 in one degree. Source and target are the same
/// presented module since f_1 preserves the y-degree: ambient generators are
/// (monomial, z-tuple, y-index) triples and the relations are the N^k
/// relations tensored with each y_m.
fn tor_layer(
    pseries: &PSeriesTable,
    k: usize,
    degree: u32,
    options: TableOptions,
) -> Result<FinitePGroup> {
    let prime = pseries.prime();
    let k32 = k as u32;
    let mut basis: Vec<(Monomial, Vec<u32>, u32)> = Vec::new();
    let mut m = 1u32;
    while 2 * m + k32 <= degree {
        for (mono, tuple) in ambient_basis(pseries, k, degree - 2 * m) {
            basis.push((mono, tuple, m));
        }
        m += 1;
    }
    let mut index = HashMap::with_capacity(basis.len());
    for (i, (mono, tuple, y)) in basis.iter().enumerate() {
        index.insert((mono.exponents().to_vec(), tuple.clone(), *y), i);
    }
    let mut columns = Vec::new();
    let mut m = 1u32;
    while 2 * m + k32 <= degree {
        for terms in relation_instances(pseries, k, degree - 2 * m) {
            let mut col = vec![crate::scalar::int(0); basis.len()];
            for (mono, tuple, coeff) in terms {
                let at = index[&(mono.exponents().to_vec(), tuple, m)];
                col[at] = &col[at] + &coeff;
            }
            columns.push(col);
        }
        m += 1;
    }
    if options.reverse_relations {
        columns.reverse();
    }
    let module = PresentedModule::new(
        prime,
        basis.len(),
        SparseMatrix::from_columns(prime, basis.len(), &columns),
    );
    let mut lift = SparseMatrix::zero(prime, basis.len(), basis.len());
    for (col, (mono, tuple, m)) in basis.iter().enumerate() {
        for i in 0..*m {
            for (nu, c) in pseries.a(i as usize).terms() {
                let at = index[&(mono.times(nu).exponents().to_vec(), tuple.clone(), m - i)];
                lift.add_to(at, col, c.clone());
            }
        }
    }
    let group = map_kernel_structure_with(&lift, &module, &module, options.pivot_rule)?;
    if group.free_rank() > 0 {
        return Err(Error::UnexpectedFreeRank { degree });
    }
    Ok(group)
}
