//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured numbers. Run with `--nocapture` to see them.

mod common;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toric_ko::charmat::ToricInstance;
use toric_ko::cohomology::{reduced_cohomology_dims, reduced_cohomology_dims_dense, GradedDims};
use toric_ko::face_ring::{
    a1_decomposition, halving_report, quotient_presentation, A1Decomposition, GeneratorDegree,
    HalvingReport,
};
use toric_ko::ko::{
    witt_groups, Classification, KOTable, RowSpaceScan, ScanOptions, WittGroups,
};
use toric_ko::SimplicialComplex;

use common::{corpus, cp1_power, cpn};

struct Analyzed {
    instance: ToricInstance,
    witt: WittGroups,
    classification: Classification,
    decomposition: A1Decomposition,
    halving: HalvingReport,
    /// Σ_ω dim H̃^d(K_ω) per degree d.
    subcomplex_sums: GradedDims,
    free_ranks: (usize, usize),
    total_cohomology: usize,
}

struct CorpusAnalysis {
    rows: Vec<Analyzed>,
    build_time: Duration,
}

static ANALYSIS: OnceLock<CorpusAnalysis> = OnceLock::new();

fn analysis() -> &'static CorpusAnalysis {
    ANALYSIS.get_or_init(|| {
        let started = Instant::now();
        let rows = corpus().into_iter().map(analyze).collect();
        CorpusAnalysis {
            rows,
            build_time: started.elapsed(),
        }
    })
}

fn analyze(instance: ToricInstance) -> Analyzed {
    let options = ScanOptions::default();
    let scan = RowSpaceScan::compute(&instance, &options)
        .unwrap_or_else(|e| panic!("{}: scan failed: {e}", instance.name()));
    let witt = WittGroups::from_scan(&scan);
    let classification = Classification::from_scan(&instance, &scan);
    let n = instance.lambda().rank_n();
    let lambda2 = instance.lambda2();
    let even = quotient_presentation(instance.complex(), &lambda2, GeneratorDegree::Two, 2 * n)
        .unwrap_or_else(|e| panic!("{}: presentation failed: {e}", instance.name()));
    let half = quotient_presentation(instance.complex(), &lambda2, GeneratorDegree::One, n)
        .unwrap_or_else(|e| panic!("{}: presentation failed: {e}", instance.name()));
    let decomposition = a1_decomposition(&even)
        .unwrap_or_else(|e| panic!("{}: decomposition failed: {e}", instance.name()));
    let halving = halving_report(&even, &half)
        .unwrap_or_else(|e| panic!("{}: halving failed: {e}", instance.name()));
    // free ranks from the presentation, cross-checked against the h-vector
    let h = instance.complex().h_vector().expect("non-empty complex");
    let mut free_ranks = (0usize, 0usize);
    for i in 0..=n {
        let betti = even.dim(2 * i);
        assert_eq!(
            betti as i64,
            h.get(i).copied().unwrap_or(0),
            "{}: face ring and h-vector disagree in degree {}",
            instance.name(),
            2 * i
        );
        if i % 2 == 0 {
            free_ranks.0 += betti;
        } else {
            free_ranks.1 += betti;
        }
    }
    Analyzed {
        total_cohomology: even.dims().total(),
        subcomplex_sums: scan.degree_sums(),
        instance,
        witt,
        classification,
        decomposition,
        halving,
        free_ranks,
    }
}

/// Criterion 1: the projective-space family, n = 1..6. For odd n one
/// extra 2-torsion class beyond the base point, in W^(n mod 4),
/// surfacing in KO^(2n-2) and KO^(2n-1); for even n the Witt groups are
/// W^0 = Z/2 alone and the reduced table is torsion free.
#[test]
fn criterion_1_projective_space_family() {
    let started = Instant::now();
    for n in 1..=6 {
        let inst = cpn(n);
        let witt = witt_groups(&inst, &ScanOptions::default()).unwrap();
        let mut expected = [0usize; 4];
        expected[0] += 1;
        if n % 2 == 1 {
            expected[n % 4] += 1;
        }
        assert_eq!(witt.as_array(), expected, "W^*(CP^{n})");
        let (n0, n2) = toric_ko::ko::free_ranks(&inst).unwrap();
        let unreduced = KOTable::assemble(&witt, n0, n2, false);
        let reduced = KOTable::assemble(&witt, n0, n2, true);
        if n % 2 == 1 {
            let lo = (2 * n - 2) % 8;
            let hi = (2 * n - 1) % 8;
            for j in 0..8 {
                let want = usize::from(j == lo || j == hi);
                assert_eq!(reduced.entry(j).torsion, want, "reduced KO^{j}(CP^{n})");
            }
            assert_eq!(unreduced.entry(lo).torsion, 1);
            assert_eq!(unreduced.entry(hi).torsion, 1);
        } else {
            assert!(reduced.torsion_free(), "reduced KO(CP^{n}) must be torsion free");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1s");
    println!("[acceptance] criterion 1: PASS (CP^1..CP^6 in {elapsed:?})");
}

/// Criterion 2: the full unreduced table of CP², frozen from the
/// published tables: Z², 0, Z, 0, Z², 0, Z+Z/2, Z/2.
#[test]
fn criterion_2_cp2_full_table() {
    let started = Instant::now();
    let inst = cpn(2);
    let witt = witt_groups(&inst, &ScanOptions::default()).unwrap();
    let (n0, n2) = toric_ko::ko::free_ranks(&inst).unwrap();
    let table = KOTable::assemble(&witt, n0, n2, false);
    let published: [(usize, usize); 8] = [
        (2, 0),
        (0, 0),
        (1, 0),
        (0, 0),
        (2, 0),
        (0, 0),
        (1, 1),
        (0, 1),
    ];
    for (j, &(free, torsion)) in published.iter().enumerate() {
        assert_eq!(
            (table.entry(j).free, table.entry(j).torsion),
            (free, torsion),
            "KO^{j}(CP^2)"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1s");
    println!("[acceptance] criterion 2: PASS (CP^2 table matches the published groups, {elapsed:?})");
}

/// Criterion 3: oracle equivalence over the corpus — the face-ring
/// trivial summand in degree 2i equals the summed subcomplex cohomology
/// in degree i-1, exactly, on every instance.
#[test]
fn criterion_3_oracle_equivalence() {
    let analysis = analysis();
    assert!(
        analysis.rows.len() >= 50,
        "corpus has {} instances, need at least 50",
        analysis.rows.len()
    );
    for row in &analysis.rows {
        let n = row.instance.lambda().rank_n();
        for i in 0..=n {
            assert_eq!(
                row.decomposition.s.get(2 * i as i32),
                row.subcomplex_sums.get(i as i32 - 1),
                "{}: trivial summand vs subcomplex sum at i={i}",
                row.instance.name()
            );
        }
        // no contribution outside the compared window
        assert!(row
            .subcomplex_sums
            .iter()
            .all(|(d, _)| d + 1 >= 0 && (d + 1) as usize <= n));
    }
    assert!(
        analysis.build_time < Duration::from_secs(60),
        "corpus analysis took {:?}, budget 60s",
        analysis.build_time
    );
    println!(
        "[acceptance] criterion 3: PASS ({} instances, corpus analysis {:?})",
        analysis.rows.len(),
        analysis.build_time
    );
}

/// Criterion 4: the degree-halving comparison passes on the entire
/// corpus of criterion 3.
#[test]
fn criterion_4_degree_halving() {
    let analysis = analysis();
    for row in &analysis.rows {
        assert!(
            row.halving.pass,
            "{}: degree halving mismatch: {:?}",
            row.instance.name(),
            row.halving
        );
    }
    println!(
        "[acceptance] criterion 4: PASS (halving on {} instances)",
        analysis.rows.len()
    );
}

/// Criterion 5: wedging the simplex boundary at every vertex of a
/// maximal simplex produces an M-type instance; verified by brute
/// enumeration of all 2^(2n) - 1 non-zero row-space vectors with the
/// dense cohomology route.
#[test]
fn criterion_5_wedge_produces_m_type() {
    let started = Instant::now();
    for n in 2..=3 {
        let base = cpn(n);
        let wedge_vertices: Vec<usize> = (1..=n).collect();
        let wedged = base.iterated_wedge(&wedge_vertices).unwrap();
        assert_eq!(wedged.lambda().rank_n(), 2 * n);
        let classification =
            toric_ko::ko::classify(&wedged, &ScanOptions::default()).unwrap();
        assert!(classification.m_type, "wedged CP^{n} must be M-type");
        // brute enumeration, independent of the tiered cohomology route
        let row_space = wedged.lambda2().row_space(20).unwrap();
        assert_eq!(row_space.len(), 1 << (2 * n));
        let mut checked = 0;
        for omega in row_space.iter() {
            if omega.is_zero() {
                continue;
            }
            let (sub, _) = wedged
                .complex()
                .full_subcomplex(&omega.support().iter().map(|i| i + 1).collect::<Vec<_>>())
                .unwrap();
            assert!(
                reduced_cohomology_dims_dense(&sub).is_zero(),
                "omega {} not acyclic",
                omega.to_bitstring()
            );
            checked += 1;
        }
        assert_eq!(checked, (1 << (2 * n)) - 1);
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}, budget 5s");
    println!("[acceptance] criterion 5: PASS (15 + 63 subcomplexes brute-checked, {elapsed:?})");
}

/// Criterion 6: S-type classification agrees with the face-ring oracle
/// across the corpus — S-type implies no squaring pairs, and no pairs
/// (with reduced cohomology present) implies S-type.
#[test]
fn criterion_6_s_type_consistency() {
    let analysis = analysis();
    for row in &analysis.rows {
        let pairs_vanish = row.decomposition.m_pairs.is_zero();
        if row.classification.s_type {
            assert!(
                pairs_vanish,
                "{}: S-type but the oracle sees pairs {:?}",
                row.instance.name(),
                row.decomposition.m_pairs
            );
        }
        if pairs_vanish && row.total_cohomology > 1 {
            assert!(
                row.classification.s_type,
                "{}: oracle sees no pairs but the column test says not S-type",
                row.instance.name()
            );
        }
    }
    println!(
        "[acceptance] criterion 6: PASS (S-type vs oracle on {} instances)",
        analysis.rows.len()
    );
}

/// Criterion 7: structural invariants on every corpus instance, plus
/// 10^4 randomized Euler-characteristic and cone-acyclicity cases.
#[test]
fn criterion_7_structural_invariants() {
    let analysis = analysis();
    for row in &analysis.rows {
        let name = row.instance.name();
        let w = row.witt.as_array();
        assert!(w[0] >= 1, "{name}: w0 must count the empty subcomplex");
        let table = KOTable::assemble(&row.witt, row.free_ranks.0, row.free_ranks.1, false);
        for i in 0..4 {
            assert_eq!(
                table.entry(2 * i).torsion,
                table.entry(2 * i + 1).torsion,
                "{name}: torsion must pair up at i={i}"
            );
        }
        assert_eq!(
            row.classification.m_type,
            w == [1, 0, 0, 0],
            "{name}: M-type iff only the empty contribution"
        );
        // total torsion matches the total trivial-summand dimension
        assert_eq!(
            row.witt.total(),
            row.decomposition.s.total(),
            "{name}: Witt total vs trivial summand total"
        );
    }

    let mut rng = StdRng::seed_from_u64(0xEC);
    let point = SimplicialComplex::new(1, &[vec![1]]).unwrap();
    for case in 0..10_000 {
        let k = random_complex(&mut rng);
        let dims = reduced_cohomology_dims(&k);
        let cohomology_euler: i64 = dims
            .iter()
            .map(|(d, c)| if d.rem_euclid(2) == 0 { c as i64 } else { -(c as i64) })
            .sum();
        let f = k.f_vector().unwrap();
        let face_euler: i64 = f
            .counts()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum::<i64>()
            - 1;
        assert_eq!(cohomology_euler, face_euler, "Euler mismatch in case {case}: {k:?}");
        assert!(
            reduced_cohomology_dims(&point.join(&k)).is_zero(),
            "cone not acyclic in case {case}: {k:?}"
        );
    }
    println!(
        "[acceptance] criterion 7: PASS ({} corpus instances, 10^4 randomized cases)",
        analysis.rows.len()
    );
}

fn random_complex(rng: &mut StdRng) -> SimplicialComplex {
    let m = rng.gen_range(2..=7usize);
    let face_count = rng.gen_range(1..=6usize);
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for _ in 0..face_count {
        let size = rng.gen_range(1..=m);
        let mut face: Vec<usize> = (1..=m).collect();
        for i in (1..m).rev() {
            face.swap(i, rng.gen_range(0..=i));
        }
        face.truncate(size);
        face.sort_unstable();
        faces.push(face);
    }
    let mut covered = vec![false; m];
    for f in &faces {
        for &v in f {
            covered[v - 1] = true;
        }
    }
    for v in 1..=m {
        if !covered[v - 1] {
            faces.push(vec![v]);
        }
    }
    // drop non-maximal faces to satisfy the antichain input contract
    let maximal: Vec<Vec<usize>> = faces
        .iter()
        .filter(|f| {
            !faces
                .iter()
                .any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v)))
        })
        .cloned()
        .collect();
    let mut deduped = maximal;
    deduped.sort();
    deduped.dedup();
    SimplicialComplex::new(m, &deduped).unwrap()
}

/// Criterion 8: the 12-fold product of lines, 4096 subcomplexes, under
/// 30 seconds on 4 workers, with identical results across 1/2/4-worker
/// runs.
#[test]
fn criterion_8_performance_guardrail() {
    // force the shared corpus analysis first so its work cannot pollute
    // the timed section below
    let _ = analysis();
    let inst = cp1_power(12);
    assert_eq!(inst.complex().vertex_count(), 24);
    assert_eq!(inst.lambda().rank_n(), 12);
    let mut results = Vec::new();
    let mut four_worker_time = Duration::ZERO;
    for threads in [1usize, 2, 4] {
        let options = ScanOptions { rank_cap: 20, threads };
        let started = Instant::now();
        let witt = witt_groups(&inst, &options).unwrap();
        let elapsed = started.elapsed();
        if threads == 4 {
            four_worker_time = elapsed;
        }
        assert_eq!(witt.omega_count, 4096);
        results.push((witt.as_array(), witt.attribution.len()));
    }
    assert!(
        results.windows(2).all(|w| w[0] == w[1]),
        "results differ across worker counts: {results:?}"
    );
    // sanity: the subcomplexes are joins of antipodal pairs, one sphere
    // class per non-zero weight, so W^i counts weights w ≡ i mod 4
    let expected: [usize; 4] = {
        let mut e = [0usize; 4];
        for weight in 0..=12u32 {
            let count = binomial(12, weight);
            // support 2*weight, sphere dimension weight-1, Witt index weight mod 4
            e[(weight % 4) as usize] += count;
        }
        e
    };
    assert_eq!(results[0].0, expected);
    assert!(
        four_worker_time < Duration::from_secs(30),
        "witt on 4 workers took {four_worker_time:?}, budget 30s"
    );
    println!(
        "[acceptance] criterion 8: PASS (4096 subcomplexes, 4 workers in {four_worker_time:?}, identical across 1/2/4)"
    );
}

fn binomial(n: u32, k: u32) -> usize {
    let mut acc = 1usize;
    for j in 0..k {
        acc = acc * (n - j) as usize / (j + 1) as usize;
    }
    acc
}
