//! Finite abstract simplicial complexes and the combinatorial
//! constructions applied to them: full subcomplexes, links, joins,
//! simplicial wedges, and face counts.
//!
//! Vertices are labeled 1..m and faces are stored as `u64` bitmasks
//! (bit i-1 set means label i is in the face), so m is capped at 64.
//! A complex is the antichain of its maximal faces. Two degenerate
//! complexes are distinguished:
//!
//! * the *void* complex has no faces at all (empty facet list), and
//! * the *empty* complex `{∅}` has exactly one face, the empty one
//!   (facet list `[0]`). Its reduced cohomology is one dimension in
//!   degree -1, which is how the zero row-space vector contributes.

use crate::error::{Error, Result};

/// Maximum supported vertex count (faces are u64 masks).
pub const MAX_VERTICES: usize = 64;

/// An abstract simplicial complex given by its maximal faces.
///
/// Immutable after construction; all operations return new values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    m: usize,
    /// Sorted antichain of facet masks. `[]` is the void complex and
    /// `[0]` is the empty complex `{∅}`.
    facets: Vec<u64>,
}

impl SimplicialComplex {
    /// Build from 1-indexed maximal face lists.
    ///
    /// Rejects out-of-range labels, repeated labels inside a face,
    /// non-antichain face lists, and vertices in 1..=m not covered by
    /// any face.
    pub fn new(m: usize, maximal_faces: &[Vec<usize>]) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::Input(format!(
                "vertex count {m} exceeds the supported maximum {MAX_VERTICES}"
            )));
        }
        if maximal_faces.is_empty() {
            return if m == 0 {
                Ok(Self::empty())
            } else {
                Err(Error::Input(format!(
                    "no maximal faces but m = {m}; vertices must lie in a face"
                )))
            };
        }
        let mut facets = Vec::with_capacity(maximal_faces.len());
        for face in maximal_faces {
            if face.is_empty() {
                return Err(Error::Input(
                    "explicit empty face in a non-empty complex".into(),
                ));
            }
            facets.push(face_mask(m, face)?);
        }
        // antichain check: inputs claiming to be maximal must actually be
        let sorted = facets.clone();
        for (i, &f) in sorted.iter().enumerate() {
            for (j, &g) in sorted.iter().enumerate() {
                if i != j && f & !g == 0 {
                    return Err(Error::Input(format!(
                        "maximal face list is not an antichain: {:?} is contained in {:?}",
                        mask_labels(f),
                        mask_labels(g)
                    )));
                }
            }
        }
        let covered = facets.iter().fold(0u64, |acc, f| acc | f);
        if covered != low_mask(m) {
            let ghosts: Vec<usize> = (1..=m).filter(|&v| covered >> (v - 1) & 1 == 0).collect();
            return Err(Error::Input(format!(
                "vertices {ghosts:?} do not lie in any maximal face"
            )));
        }
        facets.sort_unstable();
        Ok(SimplicialComplex { m, facets })
    }

    /// The empty complex `{∅}`: one face (the empty one), no vertices.
    pub fn empty() -> Self {
        SimplicialComplex {
            m: 0,
            facets: vec![0],
        }
    }

    /// The void complex: no faces at all.
    pub fn void() -> Self {
        SimplicialComplex {
            m: 0,
            facets: Vec::new(),
        }
    }

    /// Boundary of the (m-1)-simplex on m vertices.
    pub fn simplex_boundary(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Input("simplex boundary needs at least one vertex".into()));
        }
        let faces: Vec<Vec<usize>> = (1..=m)
            .map(|skip| (1..=m).filter(|&v| v != skip).collect())
            .collect();
        if m == 1 {
            // boundary of a point is the empty complex
            return Ok(Self::empty());
        }
        Self::new(m, &faces)
    }

    /// Internal constructor from masks; normalizes to a sorted antichain.
    pub(crate) fn from_facets(m: usize, facets: Vec<u64>) -> Self {
        SimplicialComplex {
            m,
            facets: antichain(facets),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// True for the complex `{∅}` whose only face is the empty one.
    pub fn is_empty_complex(&self) -> bool {
        self.facets == [0]
    }

    /// Dimension: `None` for the void complex, `Some(-1)` for `{∅}`.
    pub fn dim(&self) -> Option<i32> {
        self.facets
            .iter()
            .map(|f| f.count_ones() as i32 - 1)
            .max()
    }

    /// Maximal faces as sorted 1-indexed label lists.
    pub fn maximal_faces(&self) -> Vec<Vec<usize>> {
        self.facets.iter().map(|&f| mask_labels(f)).collect()
    }

    pub(crate) fn facet_masks(&self) -> &[u64] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub(crate) fn contains_mask(&self, sigma: u64) -> bool {
        self.facets.iter().any(|&f| sigma & !f == 0)
    }

    /// Is σ a face of the complex? The empty set is a face of every
    /// non-void complex.
    pub fn contains_face(&self, sigma: &[usize]) -> Result<bool> {
        let mask = face_mask(self.m, sigma)?;
        Ok(self.contains_mask(mask))
    }

    /// The full subcomplex on a vertex subset S: all faces contained in S.
    ///
    /// The result is relabeled 1..|S| (order preserving) and the map from
    /// new labels back to the original ones is returned alongside.
    pub fn full_subcomplex(&self, s: &[usize]) -> Result<(SimplicialComplex, Relabeling)> {
        let mask = face_mask(self.m, s)?;
        Ok(self.full_subcomplex_mask(mask))
    }

    pub(crate) fn full_subcomplex_mask(&self, s: u64) -> (SimplicialComplex, Relabeling) {
        let restricted: Vec<u64> = self.facets.iter().map(|&f| f & s).collect();
        let sub = SimplicialComplex::from_facets(self.m, restricted);
        sub.compress_labels()
    }

    /// Drop unused labels, renumbering the rest in increasing order.
    fn compress_labels(&self) -> (SimplicialComplex, Relabeling) {
        let used = self.facets.iter().fold(0u64, |acc, f| acc | f);
        let old_labels = mask_labels(used);
        let mut position = [0usize; MAX_VERTICES];
        for (new_idx, &old) in old_labels.iter().enumerate() {
            position[old - 1] = new_idx;
        }
        let facets = self
            .facets
            .iter()
            .map(|&f| {
                let mut out = 0u64;
                let mut rest = f;
                while rest != 0 {
                    let bit = rest.trailing_zeros() as usize;
                    out |= 1 << position[bit];
                    rest &= rest - 1;
                }
                out
            })
            .collect();
        (
            SimplicialComplex {
                m: old_labels.len(),
                facets: antichain(facets),
            },
            Relabeling { new_to_old: old_labels },
        )
    }

    /// The link of a face σ: all faces disjoint from σ whose union with σ
    /// is again a face. Relabeled like `full_subcomplex`.
    pub fn link(&self, sigma: &[usize]) -> Result<(SimplicialComplex, Relabeling)> {
        let mask = face_mask(self.m, sigma)?;
        if !self.contains_mask(mask) {
            return Err(Error::Domain(format!(
                "link of {sigma:?}: not a face of the complex"
            )));
        }
        Ok(self.link_mask(mask))
    }

    pub(crate) fn link_mask(&self, sigma: u64) -> (SimplicialComplex, Relabeling) {
        // facets of the link are φ \ σ for facets φ ⊇ σ; these are
        // automatically an antichain
        let facets: Vec<u64> = self
            .facets
            .iter()
            .filter(|&&f| sigma & !f == 0)
            .map(|&f| f & !sigma)
            .collect();
        let link = SimplicialComplex { m: self.m, facets: antichain(facets) };
        link.compress_labels()
    }

    /// Join of two complexes, with the right factor's labels shifted above
    /// the left's.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let m = self.m + other.m;
        assert!(m <= MAX_VERTICES, "join exceeds vertex cap");
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for &a in &self.facets {
            for &b in &other.facets {
                facets.push(a | b << self.m);
            }
        }
        // a product of antichains is an antichain
        facets.sort_unstable();
        SimplicialComplex { m, facets }
    }

    /// Simplicial wedge at vertex j: replaces v_j by the edge {v_j, v_j'}
    /// where the doubled vertex v_j' takes label m+1. The result is the
    /// union {v_j,v_j'} * Link(v_j) ∪ {v_j} * K_rest ∪ {v_j'} * K_rest,
    /// where K_rest is the full subcomplex on the other vertices.
    pub fn wedge(&self, j: usize) -> Result<SimplicialComplex> {
        if j == 0 || j > self.m {
            return Err(Error::Domain(format!("wedge vertex {j} out of range 1..={}", self.m)));
        }
        let vj = 1u64 << (j - 1);
        if !self.contains_mask(vj) {
            return Err(Error::Domain(format!("wedge vertex {j} is not a vertex of the complex")));
        }
        if self.m + 1 > MAX_VERTICES {
            return Err(Error::Input("wedge exceeds vertex cap".into()));
        }
        let vj_new = 1u64 << self.m;
        let link: Vec<u64> = self
            .facets
            .iter()
            .filter(|&&f| f & vj != 0)
            .map(|&f| f & !vj)
            .collect();
        let rest: Vec<u64> = antichain(self.facets.iter().map(|&f| f & !vj).collect());
        let mut facets = Vec::new();
        for &l in &link {
            facets.push(vj | vj_new | l);
        }
        for &r in &rest {
            facets.push(vj | r);
            facets.push(vj_new | r);
        }
        Ok(SimplicialComplex::from_facets(self.m + 1, facets))
    }

    /// All faces, the empty face included, grouped by dimension starting
    /// at -1. Faces in each group are in lexicographic label order.
    pub fn faces_by_dimension(&self) -> Vec<Vec<u64>> {
        if self.is_void() {
            return Vec::new();
        }
        let mut seen = std::collections::HashSet::new();
        for &f in &self.facets {
            // enumerate all submasks of f
            let mut sub = f;
            loop {
                seen.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        let top = self.dim().expect("non-void") + 1;
        let mut by_dim: Vec<Vec<u64>> = vec![Vec::new(); (top + 1) as usize];
        for &f in &seen {
            by_dim[f.count_ones() as usize].push(f);
        }
        for group in &mut by_dim {
            group.sort_by_key(|&f| mask_labels(f));
        }
        by_dim
    }

    /// Face counts by dimension (the empty face is not counted).
    pub fn f_vector(&self) -> Result<FVector> {
        if self.is_void() || self.is_empty_complex() {
            return Err(Error::Domain("f-vector of an empty complex".into()));
        }
        let by_dim = self.faces_by_dimension();
        Ok(FVector {
            counts: by_dim[1..].iter().map(|g| g.len() as u64).collect(),
        })
    }

    /// h-vector via the standard transform of the f-vector,
    /// h_k = Σ_i (-1)^(k-i) C(n-i, k-i) f_{i-1} with n = dim + 1.
    pub fn h_vector(&self) -> Result<Vec<i64>> {
        let f = self.f_vector()?;
        Ok(f.to_h_vector())
    }

    /// Exhaustive isomorphism test over vertex bijections. Only intended
    /// for desk-scale inputs and gated to m <= 10.
    pub fn is_isomorphic(&self, other: &SimplicialComplex) -> Result<bool> {
        if self.m > 10 || other.m > 10 {
            return Err(Error::Domain(
                "isomorphism search is gated to complexes with at most 10 vertices".into(),
            ));
        }
        if self.m != other.m || self.facets.len() != other.facets.len() {
            return Ok(false);
        }
        let mut sizes_a: Vec<u32> = self.facets.iter().map(|f| f.count_ones()).collect();
        let mut sizes_b: Vec<u32> = other.facets.iter().map(|f| f.count_ones()).collect();
        sizes_a.sort_unstable();
        sizes_b.sort_unstable();
        if sizes_a != sizes_b {
            return Ok(false);
        }
        let degree = |k: &SimplicialComplex, v: usize| {
            k.facets.iter().filter(|&&f| f >> v & 1 == 1).count()
        };
        let deg_a: Vec<usize> = (0..self.m).map(|v| degree(self, v)).collect();
        let deg_b: Vec<usize> = (0..self.m).map(|v| degree(other, v)).collect();
        let mut assignment = vec![usize::MAX; self.m];
        let mut used = vec![false; self.m];
        Ok(search_isomorphism(
            self, other, &deg_a, &deg_b, &mut assignment, &mut used, 0,
        ))
    }
}

fn search_isomorphism(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    deg_a: &[usize],
    deg_b: &[usize],
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    v: usize,
) -> bool {
    if v == a.m {
        let mut mapped: Vec<u64> = a
            .facets
            .iter()
            .map(|&f| {
                let mut out = 0u64;
                let mut rest = f;
                while rest != 0 {
                    let bit = rest.trailing_zeros() as usize;
                    out |= 1 << assignment[bit];
                    rest &= rest - 1;
                }
                out
            })
            .collect();
        mapped.sort_unstable();
        return mapped == b.facets;
    }
    for w in 0..b.m {
        if used[w] || deg_a[v] != deg_b[w] {
            continue;
        }
        assignment[v] = w;
        used[w] = true;
        if search_isomorphism(a, b, deg_a, deg_b, assignment, used, v + 1) {
            return true;
        }
        used[w] = false;
    }
    false
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_void() {
            return write!(f, "SimplicialComplex(void)");
        }
        if self.is_empty_complex() {
            return write!(f, "SimplicialComplex{{∅}}");
        }
        write!(f, "SimplicialComplex(m={}, facets={:?})", self.m, self.maximal_faces())
    }
}

/// Order-preserving map from the relabeled vertices of a subcomplex back
/// to the labels of the ambient complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    new_to_old: Vec<usize>,
}

impl Relabeling {
    /// Original label of the subcomplex vertex `new` (1-indexed).
    pub fn old_label(&self, new: usize) -> usize {
        self.new_to_old[new - 1]
    }

    pub fn labels(&self) -> &[usize] {
        &self.new_to_old
    }

    pub fn len(&self) -> usize {
        self.new_to_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_to_old.is_empty()
    }
}

/// Face counts by dimension: `counts[i]` is the number of i-dimensional
/// faces. The empty face (f_{-1} = 1) is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector {
    counts: Vec<u64>,
}

impl FVector {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of i-dimensional faces; i = -1 returns the implicit 1.
    pub fn get(&self, i: i32) -> u64 {
        if i == -1 {
            1
        } else {
            self.counts.get(i as usize).copied().unwrap_or(0)
        }
    }

    /// h_k = Σ_{i} (-1)^(k-i) C(n-i, k-i) f_{i-1}, k = 0..=n.
    pub fn to_h_vector(&self) -> Vec<i64> {
        let n = self.counts.len() as i64;
        (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                        sign * binomial(n - i, k - i) * self.get(i as i32 - 1) as i64
                    })
                    .sum()
            })
            .collect()
    }

    /// Inverse transform: f_{k-1} = Σ_i C(n-i, k-i) h_i.
    pub fn from_h_vector(h: &[i64]) -> FVector {
        let n = h.len() as i64 - 1;
        let counts = (1..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| binomial(n - i, k - i) * h[i as usize])
                    .sum::<i64>() as u64
            })
            .collect();
        FVector { counts }
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc: i64 = 1;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

pub(crate) fn low_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Convert a 1-indexed label list to a mask, validating range and
/// distinctness.
pub(crate) fn face_mask(m: usize, labels: &[usize]) -> Result<u64> {
    let mut mask = 0u64;
    for &v in labels {
        if v == 0 || v > m {
            return Err(Error::Input(format!("vertex label {v} out of range 1..={m}")));
        }
        let bit = 1u64 << (v - 1);
        if mask & bit != 0 {
            return Err(Error::Input(format!("repeated vertex label {v}")));
        }
        mask |= bit;
    }
    Ok(mask)
}

pub(crate) fn mask_labels(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize + 1);
        rest &= rest - 1;
    }
    out
}

/// Reduce a list of face masks to the antichain of its maximal elements.
pub(crate) fn antichain(mut faces: Vec<u64>) -> Vec<u64> {
    faces.sort_unstable();
    faces.dedup();
    faces.sort_by_key(|f| std::cmp::Reverse(f.count_ones()));
    let mut out: Vec<u64> = Vec::with_capacity(faces.len());
    'candidates: for f in faces {
        for &g in &out {
            if f & !g == 0 {
                continue 'candidates;
            }
        }
        out.push(f);
    }
    out.sort_unstable();
    out
}
