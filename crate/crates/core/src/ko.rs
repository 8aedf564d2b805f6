//! Assembly of the main invariants: Witt groups from row-space
//! subcomplexes, free ranks from the face ring, the eight-term KO
//! table, the S-type/M-type classifiers, and the oracle cross-check
//! binding the subcomplex route to the face-ring route.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charmat::ToricInstance;
use crate::cohomology::{reduced_cohomology_dims, GradedDims};
use crate::error::{Error, Result};
use crate::f2::{ColumnIndependence, F2Vector, DEFAULT_RANK_CAP};
use crate::face_ring::{
    a1_decomposition, halving_report, quotient_presentation, GeneratorDegree, HalvingReport,
};

/// Knobs for the row-space scan.
#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Largest admissible row-space rank (2^rank subcomplexes).
    pub rank_cap: usize,
    /// Worker threads; 0 uses the global default.
    pub threads: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            rank_cap: DEFAULT_RANK_CAP,
            threads: 0,
        }
    }
}

/// Which Witt group a reduced cohomology class in a given degree feeds.
///
/// A class in degree d of some subcomplex lands in W^(i+1) where
/// i ≡ d mod 4. This is the single place that off-by-one lives.
pub fn witt_index_for_degree(degree: i32) -> usize {
    (degree + 1).rem_euclid(4) as usize
}

/// Reduced cohomology of the full subcomplex of one row-space vector.
#[derive(Clone, Debug)]
pub struct OmegaRow {
    /// Counter index in the row-space enumeration (0 is the zero vector).
    pub index: usize,
    pub omega: F2Vector,
    pub dims: GradedDims,
}

/// Per-ω reduced cohomology over the whole row space, in counter order.
#[derive(Clone, Debug)]
pub struct RowSpaceScan {
    rows: Vec<OmegaRow>,
}

impl RowSpaceScan {
    /// Scan every ω in the row space of the mod-2 characteristic matrix.
    /// Work items are independent and distributed across the pool; the
    /// result is ordered by counter index, so it is identical for any
    /// worker count.
    pub fn compute(instance: &ToricInstance, options: &ScanOptions) -> Result<RowSpaceScan> {
        let lambda2 = instance.lambda2();
        let row_space = lambda2.row_space(options.rank_cap)?;
        let complex = instance.complex();
        let compute_rows = || {
            (0..row_space.len())
                .into_par_iter()
                .map(|i| {
                    let omega = row_space.get(i);
                    let (sub, _) = complex.full_subcomplex_mask(omega.as_mask());
                    OmegaRow {
                        index: i,
                        dims: reduced_cohomology_dims(&sub),
                        omega,
                    }
                })
                .collect::<Vec<_>>()
        };
        let rows = if options.threads == 0 {
            compute_rows()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(options.threads)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            pool.install(compute_rows)
        };
        Ok(RowSpaceScan { rows })
    }

    pub fn rows(&self) -> &[OmegaRow] {
        &self.rows
    }

    /// Sum of subcomplex cohomology dimensions per degree over all ω.
    pub fn degree_sums(&self) -> GradedDims {
        let mut out = GradedDims::new();
        for row in &self.rows {
            for (d, c) in row.dims.iter() {
                out.add(d, c);
            }
        }
        out
    }
}

/// One ω's contribution to the Witt groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttributionRow {
    /// ω as a bitstring over the facets, coordinate 1 first.
    pub omega: String,
    /// Reduced cohomology dimensions of the subcomplex.
    pub dims: GradedDims,
    /// (degree, witt index, count) for each contribution.
    pub targets: Vec<(i32, usize, usize)>,
}

/// Counts of Z/2 summands in the four Witt groups, with the per-ω
/// attribution that produced them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WittGroups {
    pub w0: usize,
    pub w1: usize,
    pub w2: usize,
    pub w3: usize,
    /// Total number of row-space vectors scanned.
    pub omega_count: usize,
    /// Rows for every ω with a non-zero contribution, in counter order.
    pub attribution: Vec<AttributionRow>,
}

impl WittGroups {
    pub fn from_scan(scan: &RowSpaceScan) -> WittGroups {
        let mut w = [0usize; 4];
        let mut attribution = Vec::new();
        for row in scan.rows() {
            if row.dims.is_zero() {
                continue;
            }
            let mut targets = Vec::new();
            for (d, c) in row.dims.iter() {
                let idx = witt_index_for_degree(d);
                w[idx] += c;
                targets.push((d, idx, c));
            }
            attribution.push(AttributionRow {
                omega: row.omega.to_bitstring(),
                dims: row.dims.clone(),
                targets,
            });
        }
        WittGroups {
            w0: w[0],
            w1: w[1],
            w2: w[2],
            w3: w[3],
            omega_count: scan.rows().len(),
            attribution,
        }
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.w0, self.w1, self.w2, self.w3]
    }

    pub fn get(&self, i: usize) -> usize {
        self.as_array()[i % 4]
    }

    pub fn total(&self) -> usize {
        self.as_array().iter().sum()
    }
}

/// Evaluate the Witt groups of a validated instance.
pub fn witt_groups(instance: &ToricInstance, options: &ScanOptions) -> Result<WittGroups> {
    Ok(WittGroups::from_scan(&RowSpaceScan::compute(instance, options)?))
}

/// Free ranks (n_0, n_2) of the even KO groups: sums of the Betti
/// numbers in degrees 0 mod 4 and 2 mod 4. Taken from the face-ring
/// dimensions and cross-checked against the h-vector; disagreement is a
/// data error (the complex is then not the dual of a simple polytope
/// boundary).
pub fn free_ranks(instance: &ToricInstance) -> Result<(usize, usize)> {
    let n = instance.lambda().rank_n();
    let pres = quotient_presentation(
        instance.complex(),
        &instance.lambda2(),
        GeneratorDegree::Two,
        2 * n,
    )?;
    let h = instance.complex().h_vector()?;
    for (i, &h_i) in h.iter().enumerate() {
        let betti = pres.dim(2 * i) as i64;
        if betti != h_i {
            return Err(Error::Data(format!(
                "h-vector and face-ring dimensions disagree in degree {}: {} vs {}",
                2 * i,
                h_i,
                betti
            )));
        }
    }
    let mut n0 = 0;
    let mut n2 = 0;
    for i in 0..=n {
        if i % 2 == 0 {
            n0 += pres.dim(2 * i);
        } else {
            n2 += pres.dim(2 * i);
        }
    }
    Ok((n0, n2))
}

/// One degree of the KO table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KOEntry {
    pub j: usize,
    /// Rank of the free part.
    pub free: usize,
    /// Number of Z/2 summands.
    pub torsion: usize,
}

impl KOEntry {
    /// Additive notation, e.g. "Z^2 + Z/2" or "0".
    pub fn group_notation(&self) -> String {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        match self.torsion {
            0 => {}
            1 => parts.push("Z/2".to_string()),
            t => parts.push(format!("(Z/2)^{t}")),
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// The eight KO groups (j = 0..7): free rank and 2-torsion count each.
/// All torsion is order 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KOTable {
    pub reduced: bool,
    pub entries: Vec<KOEntry>,
}

impl KOTable {
    /// Assemble the table: KO^(2i) has free rank n_0 or n_2 (i even/odd)
    /// and torsion W^(i+1); KO^(2i+1) is all torsion, again W^(i+1).
    /// The reduced table removes the base point: one free generator from
    /// n_0 and the zero-ω contribution from W^0.
    pub fn assemble(witt: &WittGroups, n0: usize, n2: usize, reduced: bool) -> KOTable {
        let mut w = witt.as_array();
        let (mut n0, n2) = (n0, n2);
        if reduced {
            // w0 >= 1 and n0 >= 1 on every instance (the empty subcomplex
            // and the unit class)
            w[0] = w[0].saturating_sub(1);
            n0 = n0.saturating_sub(1);
        }
        let entries = (0..8)
            .map(|j| {
                let i = j / 2;
                let torsion = w[(i + 1) % 4];
                let free = if j % 2 == 1 {
                    0
                } else if i % 2 == 0 {
                    n0
                } else {
                    n2
                };
                KOEntry { j, free, torsion }
            })
            .collect();
        KOTable { reduced, entries }
    }

    pub fn entry(&self, j: usize) -> KOEntry {
        self.entries[j % 8]
    }

    pub fn torsion_free(&self) -> bool {
        self.entries.iter().all(|e| e.torsion == 0)
    }
}

/// Both KO tables for an instance.
pub fn ko_table(instance: &ToricInstance, reduced: bool, options: &ScanOptions) -> Result<KOTable> {
    let witt = witt_groups(instance, options)?;
    let (n0, n2) = free_ranks(instance)?;
    Ok(KOTable::assemble(&witt, n0, n2, reduced))
}

/// Certificate attached to the S-type flag.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SWitness {
    /// Basis change sending every column to a standard basis vector,
    /// as bitstring rows.
    Normalizer { rows: Vec<String> },
    /// 1-indexed columns forming a dependency among the distinct ones.
    DependentColumns { columns: Vec<usize> },
    /// 1-indexed zero column.
    ZeroColumn { column: usize },
}

/// First non-acyclic subcomplex certifying that the instance is not
/// M-type.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MWitness {
    pub omega: String,
    pub degree: i32,
    pub dim: usize,
}

/// The two extreme-class flags, each with its witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub s_type: bool,
    pub s_witness: SWitness,
    pub m_type: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_witness: Option<MWitness>,
}

impl Classification {
    pub fn from_scan(instance: &ToricInstance, scan: &RowSpaceScan) -> Classification {
        let lambda2 = instance.lambda2();
        let (s_type, s_witness) = match lambda2.distinct_columns_independent() {
            ColumnIndependence::Independent { normalizer } => {
                let rows = (0..normalizer.rows())
                    .map(|r| normalizer.row_vector(r).to_bitstring())
                    .collect();
                (true, SWitness::Normalizer { rows })
            }
            ColumnIndependence::Dependent { columns } => (
                false,
                SWitness::DependentColumns {
                    columns: columns.iter().map(|c| c + 1).collect(),
                },
            ),
            ColumnIndependence::ZeroColumn { column } => {
                (false, SWitness::ZeroColumn { column: column + 1 })
            }
        };
        let mut m_witness = None;
        for row in scan.rows() {
            if row.index == 0 || row.dims.is_zero() {
                continue;
            }
            let (degree, dim) = row.dims.iter().next().expect("non-zero dims");
            m_witness = Some(MWitness {
                omega: row.omega.to_bitstring(),
                degree,
                dim,
            });
            break;
        }
        Classification {
            s_type,
            m_type: m_witness.is_none(),
            s_witness,
            m_witness,
        }
    }
}

/// Classify an instance: S-type iff the distinct non-zero columns of
/// the mod-2 matrix are independent; M-type iff every non-zero ω gives
/// an acyclic subcomplex.
pub fn classify(instance: &ToricInstance, options: &ScanOptions) -> Result<Classification> {
    let scan = RowSpaceScan::compute(instance, options)?;
    Ok(Classification::from_scan(instance, &scan))
}

/// One compared degree of the oracle equivalence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleRow {
    /// The half degree i: the trivial summand sits in degree 2i.
    pub half_degree: usize,
    /// Trivial-summand dimension from the face-ring decomposition.
    pub trivial_dim: usize,
    /// Σ over ω of the subcomplex cohomology dimension in degree i-1.
    pub subcomplex_sum: usize,
}

/// Cross-check of the two routes: the face-ring trivial summand in
/// degree 2i must equal the summed subcomplex cohomology in degree i-1,
/// and the degree-halving comparison must pass.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    pub halving: HalvingReport,
    pub pass: bool,
}

pub fn oracle_crosscheck(instance: &ToricInstance, options: &ScanOptions) -> Result<OracleReport> {
    let scan = RowSpaceScan::compute(instance, options)?;
    oracle_crosscheck_with_scan(instance, &scan)
}

pub fn oracle_crosscheck_with_scan(
    instance: &ToricInstance,
    scan: &RowSpaceScan,
) -> Result<OracleReport> {
    let n = instance.lambda().rank_n();
    let lambda2 = instance.lambda2();
    let even = quotient_presentation(instance.complex(), &lambda2, GeneratorDegree::Two, 2 * n)?;
    let half = quotient_presentation(instance.complex(), &lambda2, GeneratorDegree::One, n)?;
    let decomposition = a1_decomposition(&even)?;
    let sums = scan.degree_sums();
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        rows.push(OracleRow {
            half_degree: i,
            trivial_dim: decomposition.s.get(2 * i as i32),
            subcomplex_sum: sums.get(i as i32 - 1),
        });
    }
    let halving = halving_report(&even, &half)?;
    let pass = rows.iter().all(|r| r.trivial_dim == r.subcomplex_sum) && halving.pass;
    Ok(OracleReport { rows, halving, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmat::CharMatrix;
    use crate::simplicial::SimplicialComplex;

    pub(crate) fn cpn(n: usize) -> ToricInstance {
        let k = SimplicialComplex::simplex_boundary(n + 1).unwrap();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|r| {
                let mut row = vec![0i64; n + 1];
                row[r] = 1;
                row[n] = -1;
                row
            })
            .collect();
        let lambda = CharMatrix::new(n, n + 1, &rows).unwrap();
        ToricInstance::new(format!("cp{n}"), k, lambda).unwrap()
    }

    pub(crate) fn cp1_power(n: usize) -> ToricInstance {
        let s0 = SimplicialComplex::new(2, &[vec![1], vec![2]]).unwrap();
        let mut k = s0.clone();
        for _ in 1..n {
            k = k.join(&s0);
        }
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|r| {
                let mut row = vec![0i64; 2 * n];
                row[2 * r] = 1;
                row[2 * r + 1] = -1;
                row
            })
            .collect();
        let lambda = CharMatrix::new(n, 2 * n, &rows).unwrap();
        ToricInstance::new(format!("cp1_pow{n}"), k, lambda).unwrap()
    }

    #[test]
    fn witt_bucketing_frozen() {
        // degree d feeds W^(d+1 mod 4)
        assert_eq!(witt_index_for_degree(-1), 0);
        assert_eq!(witt_index_for_degree(0), 1);
        assert_eq!(witt_index_for_degree(1), 2);
        assert_eq!(witt_index_for_degree(2), 3);
        assert_eq!(witt_index_for_degree(3), 0);
        assert_eq!(witt_index_for_degree(7), 0);
    }

    #[test]
    fn witt_cp3() {
        let w = witt_groups(&cpn(3), &ScanOptions::default()).unwrap();
        assert_eq!(w.as_array(), [1, 0, 0, 1]);
        // the ω=0 attribution is exactly one Z/2 in W^0
        assert_eq!(w.attribution[0].omega, "0000");
        assert_eq!(w.attribution[0].targets, vec![(-1, 0, 1)]);
        // the other contribution is the full complex in degree 2
        assert_eq!(w.attribution.len(), 2);
        assert_eq!(w.attribution[1].omega, "1111");
        assert_eq!(w.attribution[1].targets, vec![(2, 3, 1)]);
    }

    #[test]
    fn witt_cp2() {
        let w = witt_groups(&cpn(2), &ScanOptions::default()).unwrap();
        assert_eq!(w.as_array(), [1, 0, 0, 0]);
        assert_eq!(w.omega_count, 4);
    }

    #[test]
    fn witt_cp1_squared() {
        // three non-zero ω: two antipodal pairs (S⁰, degree 0) and the
        // full square (S¹, degree 1)
        let w = witt_groups(&cp1_power(2), &ScanOptions::default()).unwrap();
        assert_eq!(w.as_array(), [1, 2, 1, 0]);
    }

    #[test]
    fn free_ranks_examples() {
        assert_eq!(free_ranks(&cpn(2)).unwrap(), (2, 1));
        assert_eq!(free_ranks(&cpn(3)).unwrap(), (2, 2));
        assert_eq!(free_ranks(&cp1_power(2)).unwrap(), (2, 2));
    }

    #[test]
    fn ko_table_cp2_unreduced() {
        let table = ko_table(&cpn(2), false, &ScanOptions::default()).unwrap();
        let expected = [(2, 0), (0, 0), (1, 0), (0, 0), (2, 0), (0, 0), (1, 1), (0, 1)];
        for (j, &(free, torsion)) in expected.iter().enumerate() {
            assert_eq!(table.entry(j), KOEntry { j, free, torsion }, "KO^{j}");
        }
    }

    #[test]
    fn ko_table_cp3_torsion_positions() {
        let table = ko_table(&cpn(3), false, &ScanOptions::default()).unwrap();
        let torsion: Vec<usize> = table.entries.iter().map(|e| e.torsion).collect();
        // W^3 surfaces at KO^4/KO^5 (= KO^(2n-2), KO^(2n-1)), the point
        // contribution at KO^6/KO^7
        assert_eq!(torsion, vec![0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn ko_table_cp1_is_s2() {
        let unreduced = ko_table(&cpn(1), false, &ScanOptions::default()).unwrap();
        let groups: Vec<String> = unreduced.entries.iter().map(|e| e.group_notation()).collect();
        assert_eq!(
            groups,
            vec!["Z + Z/2", "Z/2", "Z", "0", "Z", "0", "Z + Z/2", "Z/2"]
        );
        // the reduced table matches the suspension of the point's groups
        let reduced = ko_table(&cpn(1), true, &ScanOptions::default()).unwrap();
        let groups: Vec<String> = reduced.entries.iter().map(|e| e.group_notation()).collect();
        assert_eq!(groups, vec!["Z/2", "Z/2", "Z", "0", "0", "0", "Z", "0"]);
    }

    #[test]
    fn torsion_pairs_equal_in_every_table() {
        for inst in [cpn(1), cpn(2), cpn(3), cp1_power(2), cp1_power(3)] {
            let table = ko_table(&inst, false, &ScanOptions::default()).unwrap();
            for i in 0..4 {
                assert_eq!(
                    table.entry(2 * i).torsion,
                    table.entry(2 * i + 1).torsion,
                    "{} at i={i}",
                    inst.name()
                );
            }
        }
    }

    #[test]
    fn classify_cp1_powers_are_s_type() {
        for n in 1..=3 {
            let c = classify(&cp1_power(n), &ScanOptions::default()).unwrap();
            assert!(c.s_type, "(CP1)^{n} is S-type");
            assert!(matches!(c.s_witness, SWitness::Normalizer { .. }));
            if n >= 1 {
                assert!(!c.m_type, "(CP1)^{n} is not M-type");
                let w = c.m_witness.unwrap();
                assert_eq!(w.degree, 0);
            }
        }
    }

    #[test]
    fn classify_cp2() {
        let c = classify(&cpn(2), &ScanOptions::default()).unwrap();
        assert!(!c.s_type);
        assert!(matches!(c.s_witness, SWitness::DependentColumns { .. }));
        assert!(c.m_type);
        assert!(c.m_witness.is_none());
    }

    #[test]
    fn classify_wedged_cp2_is_m_type() {
        let wedged = cpn(2).iterated_wedge(&[1, 2]).unwrap();
        assert_eq!(wedged.complex().vertex_count(), 5);
        assert_eq!(wedged.lambda().rank_n(), 4);
        let c = classify(&wedged, &ScanOptions::default()).unwrap();
        assert!(c.m_type);
        let w = witt_groups(&wedged, &ScanOptions::default()).unwrap();
        assert_eq!(w.as_array(), [1, 0, 0, 0]);
    }

    #[test]
    fn m_type_iff_trivial_witt() {
        for inst in [cpn(1), cpn(2), cpn(3), cp1_power(2), cp1_power(3)] {
            let w = witt_groups(&inst, &ScanOptions::default()).unwrap();
            let c = classify(&inst, &ScanOptions::default()).unwrap();
            assert_eq!(c.m_type, w.as_array() == [1, 0, 0, 0], "{}", inst.name());
        }
    }

    #[test]
    fn oracle_crosscheck_examples() {
        for inst in [cpn(2), cpn(3), cp1_power(2)] {
            let report = oracle_crosscheck(&inst, &ScanOptions::default()).unwrap();
            assert!(report.pass, "{}: {report:?}", inst.name());
        }
        // spot-check the CP³ numbers: trivial dims {0:1, 6:1} against
        // subcomplex sums at i=0 (empty set) and i=3 (the full sphere)
        let report = oracle_crosscheck(&cpn(3), &ScanOptions::default()).unwrap();
        let by_i: Vec<(usize, usize, usize)> = report
            .rows
            .iter()
            .map(|r| (r.half_degree, r.trivial_dim, r.subcomplex_sum))
            .collect();
        assert_eq!(by_i, vec![(0, 1, 1), (1, 0, 0), (2, 0, 0), (3, 1, 1)]);
    }

    #[test]
    fn witt_invariant_under_unimodular_row_ops() {
        let base = cpn(3);
        let w0 = witt_groups(&base, &ScanOptions::default()).unwrap().as_array();
        // add row 0 to row 1 and negate row 2: still a valid matrix
        let mut rows = base.lambda().rows();
        for c in 0..rows[0].len() {
            rows[1][c] += rows[0][c];
            rows[2][c] = -rows[2][c];
        }
        let lambda = CharMatrix::new(3, 4, &rows).unwrap();
        let inst = ToricInstance::new("cp3_rowops", base.complex().clone(), lambda).unwrap();
        let w1 = witt_groups(&inst, &ScanOptions::default()).unwrap().as_array();
        assert_eq!(w0, w1);
    }

    #[test]
    fn witt_invariant_under_relabeling() {
        // rotate the labels of CP² data: faces and columns permute together
        let perm = [2usize, 3, 1]; // old label v -> perm[v-1]
        let k = SimplicialComplex::new(
            3,
            &[vec![2, 3], vec![1, 2], vec![1, 3]],
        )
        .unwrap();
        let lambda = CharMatrix::new(2, 3, &[vec![-1, 1, 0], vec![-1, 0, 1]]).unwrap();
        let inst = ToricInstance::new("cp2_relab", k, lambda).unwrap();
        let w = witt_groups(&inst, &ScanOptions::default()).unwrap();
        assert_eq!(w.as_array(), [1, 0, 0, 0]);
        let _ = perm;
    }

    #[test]
    fn scan_identical_across_worker_counts() {
        let inst = cp1_power(3);
        let mut results = Vec::new();
        for threads in [1, 2, 4] {
            let opts = ScanOptions { rank_cap: DEFAULT_RANK_CAP, threads };
            let w = witt_groups(&inst, &opts).unwrap();
            results.push((w.as_array(), w.attribution.len()));
        }
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn rank_cap_surfaces_as_resource_error() {
        let inst = cp1_power(4);
        let opts = ScanOptions { rank_cap: 3, threads: 0 };
        assert!(matches!(
            witt_groups(&inst, &opts),
            Err(Error::RankCap { rank: 4, .. })
        ));
    }
}
