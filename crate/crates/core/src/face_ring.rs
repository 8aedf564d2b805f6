//! The face-ring oracle: quotient presentations of the mod-2 cohomology
//! of a toric manifold (degree-2 generators) and of its small cover
//! (degree-1 generators), Steenrod squares via the Cartan formula, and
//! Margolis homology.
//!
//! Monomials are exponent vectors whose support is a face of the
//! complex; the quotient by the linear part is computed per degree as a
//! cokernel with a fixed pivoting rule (lexicographically earliest
//! monomial eliminated first) so coset representatives — and therefore
//! the Steenrod matrices — are reproducible.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cohomology::GradedDims;
use crate::error::{Error, Result};
use crate::f2::{F2Matrix, F2Vector, Rref};
use crate::simplicial::SimplicialComplex;

/// Degree assigned to the polynomial generators: 2 for the toric
/// manifold's cohomology, 1 for the small cover's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorDegree {
    One,
    Two,
}

impl GeneratorDegree {
    pub fn value(self) -> usize {
        match self {
            GeneratorDegree::One => 1,
            GeneratorDegree::Two => 2,
        }
    }
}

type Exponents = Vec<u32>;

fn support_mask(exps: &[u32]) -> u64 {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |acc, (i, _)| acc | 1 << i)
}

/// All monomials with support a face of K, bucketed by exponent weight
/// and sorted lexicographically within each bucket.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    m: usize,
    generator_degree: GeneratorDegree,
    by_weight: Vec<Vec<Exponents>>,
    index: Vec<HashMap<Exponents, usize>>,
}

impl MonomialBasis {
    pub fn generator_degree(&self) -> GeneratorDegree {
        self.generator_degree
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    /// Largest cohomological degree covered.
    pub fn max_degree(&self) -> usize {
        (self.by_weight.len() - 1) * self.generator_degree.value()
    }

    pub(crate) fn max_weight(&self) -> usize {
        self.by_weight.len() - 1
    }

    /// Monomials of one cohomological degree; `None` when the degree is
    /// not a multiple of the generator degree.
    pub fn monomials_of_degree(&self, degree: usize) -> Option<&[Exponents]> {
        let gd = self.generator_degree.value();
        if !degree.is_multiple_of(gd) {
            return None;
        }
        self.by_weight.get(degree / gd).map(|v| &v[..])
    }

    pub(crate) fn monomials_of_weight(&self, w: usize) -> &[Exponents] {
        &self.by_weight[w]
    }

    pub(crate) fn index_of(&self, w: usize, exps: &Exponents) -> Option<usize> {
        self.index[w].get(exps).copied()
    }
}

/// Enumerate the face-ring monomial basis up to a cohomological degree.
pub fn face_ring_basis(
    k: &SimplicialComplex,
    generator_degree: GeneratorDegree,
    max_degree: usize,
) -> Result<MonomialBasis> {
    if k.is_void() || k.is_empty_complex() {
        return Err(Error::Domain(
            "face ring of an empty complex has no generators".into(),
        ));
    }
    let m = k.vertex_count();
    let max_weight = max_degree / generator_degree.value();
    let faces: Vec<u64> = k.faces_by_dimension().into_iter().flatten().collect();
    let mut by_weight: Vec<Vec<Exponents>> = vec![Vec::new(); max_weight + 1];
    by_weight[0].push(vec![0; m]);
    for &face in &faces {
        let labels: Vec<usize> = (0..m).filter(|&v| face >> v & 1 == 1).collect();
        let s = labels.len();
        if s == 0 {
            continue;
        }
        for (w, bucket) in by_weight.iter_mut().enumerate().skip(s) {
            scatter_compositions(w, &labels, m, bucket);
        }
    }
    let mut index = Vec::with_capacity(by_weight.len());
    for bucket in &mut by_weight {
        bucket.sort();
        index.push(
            bucket
                .iter()
                .enumerate()
                .map(|(i, e)| (e.clone(), i))
                .collect::<HashMap<_, _>>(),
        );
    }
    Ok(MonomialBasis {
        m,
        generator_degree,
        by_weight,
        index,
    })
}

/// Append every monomial of weight `total` with full support on `labels`.
fn scatter_compositions(total: usize, labels: &[usize], m: usize, out: &mut Vec<Exponents>) {
    fn recurse(
        remaining: usize,
        pos: usize,
        labels: &[usize],
        current: &mut Exponents,
        out: &mut Vec<Exponents>,
    ) {
        if pos == labels.len() - 1 {
            current[labels[pos]] = remaining as u32;
            out.push(current.clone());
            current[labels[pos]] = 0;
            return;
        }
        let slots_left = labels.len() - pos - 1;
        for take in 1..=(remaining - slots_left) {
            current[labels[pos]] = take as u32;
            recurse(remaining - take, pos + 1, labels, current, out);
        }
        current[labels[pos]] = 0;
    }
    if labels.is_empty() || total < labels.len() {
        return;
    }
    let mut current = vec![0u32; m];
    recurse(total, 0, labels, &mut current, out);
}

/// A per-degree basis of the quotient of the face ring by the linear
/// system coming from the characteristic matrix, together with the
/// reduction map onto the chosen coset representatives.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    basis: MonomialBasis,
    rank_n: usize,
    /// Per weight: reduced relation matrix over that weight's monomials.
    reducers: Vec<Rref>,
    /// Per weight: monomial indices forming the coset basis (non-pivots).
    coset_basis: Vec<Vec<usize>>,
}

impl QuotientPresentation {
    pub fn generator_degree(&self) -> GeneratorDegree {
        self.basis.generator_degree
    }

    pub fn monomial_basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree()
    }

    /// True when every degree with possibly non-zero cohomology is
    /// covered, so higher degrees may be treated as zero.
    pub fn covers_all_degrees(&self) -> bool {
        self.basis.max_weight() >= self.rank_n
    }

    /// Dimension of the quotient in one cohomological degree.
    pub fn dim(&self, degree: usize) -> usize {
        let gd = self.basis.generator_degree.value();
        if !degree.is_multiple_of(gd) {
            return 0;
        }
        self.coset_basis
            .get(degree / gd)
            .map_or(0, |basis| basis.len())
    }

    /// All quotient dimensions as graded data (degree -> dim).
    pub fn dims(&self) -> GradedDims {
        let gd = self.basis.generator_degree.value();
        let mut out = GradedDims::new();
        for (w, basis) in self.coset_basis.iter().enumerate() {
            out.add((w * gd) as i32, basis.len());
        }
        out
    }

    /// Coset-basis monomials of one weight, as indices into the
    /// monomial bucket.
    pub(crate) fn coset_basis_of_weight(&self, w: usize) -> &[usize] {
        &self.coset_basis[w]
    }

    /// Reduce a vector over the weight-w monomials to its canonical
    /// representative (supported on the coset basis).
    pub(crate) fn reduce(&self, w: usize, mut v: F2Vector) -> F2Vector {
        let rref = &self.reducers[w];
        for (row, &pivot_col) in rref.pivots.iter().enumerate() {
            if v.get(pivot_col) {
                v.xor_assign(&rref.matrix.row_vector(row));
            }
        }
        v
    }

    /// Coordinates of a reduced vector in the coset basis.
    pub(crate) fn coset_coords(&self, w: usize, reduced: &F2Vector) -> F2Vector {
        let basis = &self.coset_basis[w];
        let mut out = F2Vector::zeros(basis.len());
        for (i, &mono) in basis.iter().enumerate() {
            if reduced.get(mono) {
                out.set(i, true);
            }
        }
        out
    }
}

/// Build the quotient presentation of the face ring modulo the linear
/// part determined by the mod-2 characteristic matrix.
pub fn quotient_presentation(
    k: &SimplicialComplex,
    lambda2: &F2Matrix,
    generator_degree: GeneratorDegree,
    max_degree: usize,
) -> Result<QuotientPresentation> {
    if lambda2.cols() != k.vertex_count() {
        return Err(Error::Input(format!(
            "matrix has {} columns but the complex has {} vertices",
            lambda2.cols(),
            k.vertex_count()
        )));
    }
    let n = lambda2.rows();
    if lambda2.rank() != n {
        return Err(Error::Domain(
            "characteristic matrix must have full rank mod 2".into(),
        ));
    }
    let basis = face_ring_basis(k, generator_degree, max_degree)?;
    let m = k.vertex_count();
    let max_weight = basis.max_weight();
    let mut reducers = Vec::with_capacity(max_weight + 1);
    let mut coset_basis = Vec::with_capacity(max_weight + 1);
    // weight 0: no relations, the unit monomial survives
    reducers.push(F2Matrix::zeros(0, 1).rref());
    coset_basis.push(vec![0]);
    for w in 1..=max_weight {
        let lower = basis.monomials_of_weight(w - 1);
        let current = basis.monomials_of_weight(w);
        let mut relations = F2Matrix::zeros(n * lower.len(), current.len());
        for (mu_idx, mu) in lower.iter().enumerate() {
            for row in 0..n {
                let out_row = mu_idx * n + row;
                for gen in 0..m {
                    if !lambda2.get(row, gen) {
                        continue;
                    }
                    let mut product = mu.clone();
                    product[gen] += 1;
                    // drop products whose support leaves the complex
                    if let Some(col) = basis.index_of(w, &product) {
                        relations.set(out_row, col, true);
                    } else {
                        debug_assert!(!k.contains_mask(support_mask(&product)));
                    }
                }
            }
        }
        let rref = relations.rref();
        let pivots: std::collections::HashSet<usize> = rref.pivots.iter().copied().collect();
        coset_basis.push((0..current.len()).filter(|c| !pivots.contains(c)).collect());
        reducers.push(rref);
    }
    Ok(QuotientPresentation {
        basis,
        rank_n: n,
        reducers,
        coset_basis,
    })
}

/// Cartan-formula terms of Sq^k on a single monomial: with total square
/// g + g² on each generator, the coefficient of v^(a+s) is the product
/// of binomials C(a_i, s_i) mod 2 over s with Σs_i = k / generator
/// degree. The support never grows, so no Stanley-Reisner reduction is
/// needed here.
fn sq_terms(exps: &Exponents, t: usize) -> Vec<Exponents> {
    let mut out = Vec::new();
    match t {
        0 => out.push(exps.clone()),
        1 => {
            for (i, &a) in exps.iter().enumerate() {
                if a & 1 == 1 {
                    let mut e = exps.clone();
                    e[i] += 1;
                    out.push(e);
                }
            }
        }
        2 => {
            for (i, &a) in exps.iter().enumerate() {
                // C(a, 2) is odd iff the 2-bit of a is set
                if a & 2 == 2 {
                    let mut e = exps.clone();
                    e[i] += 2;
                    out.push(e);
                }
            }
            for i in 0..exps.len() {
                for j in i + 1..exps.len() {
                    if exps[i] & 1 == 1 && exps[j] & 1 == 1 {
                        let mut e = exps.clone();
                        e[i] += 1;
                        e[j] += 1;
                        out.push(e);
                    }
                }
            }
        }
        _ => unreachable!("only Sq^1 and Sq^2 are exposed"),
    }
    out
}

/// Apply Sq^k to a vector over the weight-w monomials, landing in the
/// weight-(w+t) monomials (t = k / generator degree).
fn sq_vector(pres: &QuotientPresentation, w: usize, t: usize, v: &F2Vector) -> F2Vector {
    let basis = &pres.basis;
    let target = basis.monomials_of_weight(w + t);
    let mut out = F2Vector::zeros(target.len());
    for (idx, mono) in basis.monomials_of_weight(w).iter().enumerate() {
        if !v.get(idx) {
            continue;
        }
        for term in sq_terms(mono, t) {
            let col = basis
                .index_of(w + t, &term)
                .expect("Cartan terms stay in the face ring");
            out.set(col, !out.get(col));
        }
    }
    out
}

/// Matrix of Sq^k from degree d to degree d+k in the coset bases.
///
/// Degrees beyond the covered range are zero-dimensional when the
/// presentation covers every possibly non-zero degree; otherwise they
/// are an error.
pub fn steenrod_square_matrix(
    pres: &QuotientPresentation,
    k: usize,
    degree: usize,
) -> Result<F2Matrix> {
    if !(k == 1 || k == 2) {
        return Err(Error::Input(format!("Sq^{k} is not exposed; only k = 1, 2")));
    }
    let gd = pres.basis.generator_degree.value();
    if (degree + k > pres.max_degree() || degree > pres.max_degree())
        && !pres.covers_all_degrees()
    {
        return Err(Error::Domain(format!(
            "degree {degree} + {k} is outside the presentation (max degree {})",
            pres.max_degree()
        )));
    }
    let source_dim = pres.dim(degree);
    let target_dim = pres.dim(degree + k);
    if source_dim == 0 || target_dim == 0 || !k.is_multiple_of(gd) {
        // covers Sq^1 on even-generator rings, which is identically zero
        return Ok(F2Matrix::zeros(target_dim, source_dim));
    }
    let w = degree / gd;
    let t = k / gd;
    let mut out = F2Matrix::zeros(target_dim, source_dim);
    for (col, &mono_idx) in pres.coset_basis_of_weight(w).iter().enumerate() {
        let mut v = F2Vector::zeros(pres.basis.monomials_of_weight(w).len());
        v.set(mono_idx, true);
        let image = sq_vector(pres, w, t, &v);
        let reduced = pres.reduce(w + t, image);
        let coords = pres.coset_coords(w + t, &reduced);
        for r in 0..target_dim {
            if coords.get(r) {
                out.set(r, col, true);
            }
        }
    }
    debug_assert!(
        representative_independent(pres, k, degree),
        "Sq^{k} disagrees across coset representatives in degree {degree}"
    );
    Ok(out)
}

/// Spot-check that Sq^k computed on a representative does not depend on
/// the representative: perturbing by relation rows must not change the
/// reduced image.
fn representative_independent(pres: &QuotientPresentation, k: usize, degree: usize) -> bool {
    let gd = pres.basis.generator_degree.value();
    if !k.is_multiple_of(gd) || !degree.is_multiple_of(gd) {
        return true;
    }
    let (w, t) = (degree / gd, k / gd);
    if w + t > pres.basis.max_weight() {
        return true;
    }
    let rref = &pres.reducers[w];
    let sample_rows = rref.rank.min(2);
    for &mono_idx in pres.coset_basis_of_weight(w).iter().take(2) {
        let mut v = F2Vector::zeros(pres.basis.monomials_of_weight(w).len());
        v.set(mono_idx, true);
        let direct = pres.reduce(w + t, sq_vector(pres, w, t, &v));
        for row in 0..sample_rows {
            let mut perturbed = v.clone();
            perturbed.xor_assign(&rref.matrix.row_vector(row));
            let other = pres.reduce(w + t, sq_vector(pres, w, t, &perturbed));
            if direct != other {
                return false;
            }
        }
    }
    true
}

/// Margolis homology of Sq^k acting as a differential: per degree,
/// dim ker - dim im. Errors if Sq^k∘Sq^k is not zero on the
/// presentation (a bug, not bad input).
pub fn margolis_dims(pres: &QuotientPresentation, k: usize) -> Result<GradedDims> {
    let matrices = sq_matrices(pres, k)?;
    let mut out = GradedDims::new();
    for (&d, matrix) in &matrices {
        let dim_here = pres.dim(d);
        let rank_out = matrix.rank();
        let rank_in = if d >= k {
            matrices.get(&(d - k)).map_or(0, |m| m.rank())
        } else {
            0
        };
        out.add(d as i32, dim_here - rank_out - rank_in);
    }
    Ok(out)
}

fn sq_matrices(
    pres: &QuotientPresentation,
    k: usize,
) -> Result<std::collections::BTreeMap<usize, F2Matrix>> {
    let gd = pres.basis.generator_degree.value();
    let mut matrices = std::collections::BTreeMap::new();
    for w in 0..=pres.basis.max_weight() {
        let d = w * gd;
        matrices.insert(d, steenrod_square_matrix(pres, k, d)?);
    }
    for (&d, m) in &matrices {
        if let Some(next) = matrices.get(&(d + k)) {
            if !next.mul(m).is_zero() {
                return Err(Error::Internal(format!(
                    "Sq^{k} does not square to zero out of degree {d}"
                )));
            }
        }
    }
    Ok(matrices)
}

/// The split of the cohomology into trivial summands and squaring-joined
/// pairs: `s[d]` counts trivial summands in degree d, `m_pairs[d]`
/// counts pairs whose lower class sits in degree d.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct A1Decomposition {
    pub s: GradedDims,
    pub m_pairs: GradedDims,
}

/// Decompose an even-generator presentation: the trivial part per degree
/// is the Sq²-Margolis dimension, the paired part is the rank of Sq².
pub fn a1_decomposition(pres: &QuotientPresentation) -> Result<A1Decomposition> {
    if pres.generator_degree() != GeneratorDegree::Two {
        return Err(Error::Domain(
            "the decomposition applies to the degree-2-generator presentation".into(),
        ));
    }
    let s = margolis_dims(pres, 2)?;
    let matrices = sq_matrices(pres, 2)?;
    let mut m_pairs = GradedDims::new();
    for (&d, m) in &matrices {
        m_pairs.add(d as i32, m.rank());
    }
    // completeness: s[d] + pairs starting at d + pairs ending at d = dim H^d
    for w in 0..=pres.basis.max_weight() {
        let d = (w * pres.basis.generator_degree.value()) as i32;
        let total = s.get(d) + m_pairs.get(d) + m_pairs.get(d - 2);
        if total != pres.dim(d as usize) {
            return Err(Error::Internal(format!(
                "decomposition does not fill degree {d}: {total} != {}",
                pres.dim(d as usize)
            )));
        }
    }
    Ok(A1Decomposition { s, m_pairs })
}

/// One compared degree of the halving check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HalvingRow {
    pub half_degree: usize,
    pub even_dim: usize,
    pub half_dim: usize,
    pub even_margolis: usize,
    pub half_margolis: usize,
}

impl HalvingRow {
    pub fn passes(&self) -> bool {
        self.even_dim == self.half_dim && self.even_margolis == self.half_margolis
    }
}

/// Result of comparing the degree-2-generator presentation in degree 2i
/// against the degree-1-generator presentation in degree i.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HalvingReport {
    pub rows: Vec<HalvingRow>,
    pub pass: bool,
}

/// Cross-check the degree-halving correspondence: Betti dimensions must
/// agree under 2i -> i, and Sq²-Margolis dims on the even side must
/// equal Sq¹-Margolis dims on the halved side.
pub fn degree_halving_check(
    k: &SimplicialComplex,
    lambda2: &F2Matrix,
) -> Result<HalvingReport> {
    let n = lambda2.rows();
    let even = quotient_presentation(k, lambda2, GeneratorDegree::Two, 2 * n)?;
    let half = quotient_presentation(k, lambda2, GeneratorDegree::One, n)?;
    halving_report(&even, &half)
}

/// The comparison underlying [`degree_halving_check`], on presentations
/// the caller already built.
pub fn halving_report(
    even: &QuotientPresentation,
    half: &QuotientPresentation,
) -> Result<HalvingReport> {
    if even.generator_degree() != GeneratorDegree::Two
        || half.generator_degree() != GeneratorDegree::One
    {
        return Err(Error::Domain(
            "halving compares a degree-2-generator presentation against a degree-1 one".into(),
        ));
    }
    let n = even.basis.max_weight().min(half.basis.max_weight());
    let even_margolis = margolis_dims(even, 2)?;
    let half_margolis = margolis_dims(half, 1)?;
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        rows.push(HalvingRow {
            half_degree: i,
            even_dim: even.dim(2 * i),
            half_dim: half.dim(i),
            even_margolis: even_margolis.get(2 * i as i32),
            half_margolis: half_margolis.get(i as i32),
        });
    }
    let pass = rows.iter().all(HalvingRow::passes);
    Ok(HalvingReport { rows, pass })
}
