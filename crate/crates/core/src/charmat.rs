//! The integer characteristic matrix: non-degeneracy validation, mod-2
//! reduction, the wedge extension, and facet restriction.
//!
//! Validation is exact. Determinants of the n columns at each maximal
//! face are computed by fraction-free (Bareiss) elimination over
//! arbitrary-precision integers; there is no floating point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::F2Matrix;
use crate::simplicial::{Relabeling, SimplicialComplex};

/// An n×m integer matrix assigning a lattice vector to each facet
/// (one column per vertex of the dual complex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharMatrix {
    n: usize,
    m: usize,
    /// Row-major entries.
    entries: Vec<i64>,
}

impl CharMatrix {
    pub fn new(n: usize, m: usize, rows: &[Vec<i64>]) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::Input(format!(
                "characteristic matrix needs m >= n >= 1, got n={n}, m={m}"
            )));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != m) {
            return Err(Error::Input(format!(
                "characteristic matrix shape mismatch: expected {n}x{m}"
            )));
        }
        Ok(CharMatrix {
            n,
            m,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rank_n(&self) -> usize {
        self.n
    }

    pub fn facet_count(&self) -> usize {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.m + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|r| self.entries[r * self.m..(r + 1) * self.m].to_vec())
            .collect()
    }

    /// Entrywise mod-2 reduction.
    pub fn mod2(&self) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.n, self.m);
        for r in 0..self.n {
            for c in 0..self.m {
                if self.get(r, c).rem_euclid(2) == 1 {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    /// Determinant of the square submatrix on the given columns
    /// (0-indexed), by Bareiss elimination over big integers.
    pub fn column_determinant(&self, cols: &[usize]) -> BigInt {
        assert_eq!(cols.len(), self.n, "need exactly n columns");
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|r| cols.iter().map(|&c| BigInt::from(self.get(r, c))).collect())
            .collect();
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// The wedge extension: (n+1)×(m+1) matrix with a zero appended to
    /// every existing column, new last column e_{n+1}, and a new last row
    /// carrying -1 under column j (1-indexed) and 1 in the new column.
    pub fn wedge_lambda(&self, j: usize) -> Result<CharMatrix> {
        if j == 0 || j > self.m {
            return Err(Error::Input(format!(
                "wedge column {j} out of range 1..={}",
                self.m
            )));
        }
        let (n, m) = (self.n + 1, self.m + 1);
        let mut entries = vec![0i64; n * m];
        for r in 0..self.n {
            for c in 0..self.m {
                entries[r * m + c] = self.get(r, c);
            }
        }
        entries[(n - 1) * m + (j - 1)] = -1;
        entries[(n - 1) * m + (m - 1)] = 1;
        Ok(CharMatrix { n, m, entries })
    }
}

/// Which non-degeneracy condition to check: unit integer determinants
/// for toric manifolds, odd determinants for small covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationMode {
    Toric,
    SmallCover,
}

/// One maximal face whose columns fail the determinant condition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceFailure {
    /// 1-indexed vertex labels of the failing maximal face.
    pub face: Vec<usize>,
    /// The offending determinant, as a decimal string (may be large).
    pub determinant: String,
}

/// Outcome of validating a (complex, matrix) pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub n: usize,
    pub m: usize,
    /// Structural problems found before any determinant was computed.
    pub structural_errors: Vec<String>,
    pub failing_faces: Vec<FaceFailure>,
    pub faces_checked: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.structural_errors.is_empty() && self.failing_faces.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(
                f,
                "valid ({:?} mode, {} maximal faces checked); note: topological \
                 interpretation of the output assumes the complex is a polytopal \
                 sphere, which is not checked",
                self.mode, self.faces_checked
            );
        }
        writeln!(f, "validation failed ({:?} mode):", self.mode)?;
        for e in &self.structural_errors {
            writeln!(f, "  structural: {e}")?;
        }
        for fail in &self.failing_faces {
            writeln!(
                f,
                "  face {:?}: determinant {}",
                fail.face, fail.determinant
            )?;
        }
        Ok(())
    }
}

/// Check the non-degeneracy condition of a characteristic matrix over
/// every maximal face of the complex. All failures are collected into
/// the report rather than failing fast.
pub fn validate(
    k: &SimplicialComplex,
    lambda: &CharMatrix,
    mode: ValidationMode,
) -> ValidationReport {
    let mut report = ValidationReport {
        mode,
        n: lambda.rank_n(),
        m: lambda.facet_count(),
        structural_errors: Vec::new(),
        failing_faces: Vec::new(),
        faces_checked: 0,
    };
    if lambda.facet_count() != k.vertex_count() {
        report.structural_errors.push(format!(
            "matrix has {} columns but the complex has {} vertices",
            lambda.facet_count(),
            k.vertex_count()
        ));
    }
    let n = lambda.rank_n();
    match k.dim() {
        Some(d) if d + 1 == n as i32 => {}
        Some(d) => report.structural_errors.push(format!(
            "matrix rank {} does not match dim K + 1 = {}",
            n,
            d + 1
        )),
        None => report
            .structural_errors
            .push("void complex has no dimension".into()),
    }
    for face in k.maximal_faces() {
        if face.len() != n {
            report.structural_errors.push(format!(
                "complex is not pure: face {face:?} has {} vertices, expected {n}",
                face.len()
            ));
        }
    }
    if !report.structural_errors.is_empty() {
        return report;
    }
    for face in k.maximal_faces() {
        let cols: Vec<usize> = face.iter().map(|&v| v - 1).collect();
        let det = lambda.column_determinant(&cols);
        let ok = match mode {
            ValidationMode::Toric => det.abs().is_one(),
            ValidationMode::SmallCover => !(&det % 2i64).is_zero(),
        };
        report.faces_checked += 1;
        if !ok {
            report.failing_faces.push(FaceFailure {
                face: face.clone(),
                determinant: det.to_string(),
            });
        }
    }
    report
}

/// A validated pair of a simplicial complex and characteristic matrix.
#[derive(Clone, Debug)]
pub struct ToricInstance {
    name: String,
    complex: SimplicialComplex,
    lambda: CharMatrix,
    /// (new_label, source_vertex) for each wedge-created label, in
    /// creation order; source vertices use the pre-wedge labeling.
    wedge_provenance: Vec<(usize, usize)>,
}

impl ToricInstance {
    /// Validate in toric mode and build the instance.
    pub fn new(
        name: impl Into<String>,
        complex: SimplicialComplex,
        lambda: CharMatrix,
    ) -> Result<Self> {
        Self::with_mode(name, complex, lambda, ValidationMode::Toric)
    }

    pub fn with_mode(
        name: impl Into<String>,
        complex: SimplicialComplex,
        lambda: CharMatrix,
        mode: ValidationMode,
    ) -> Result<Self> {
        let report = validate(&complex, &lambda, mode);
        if !report.is_valid() {
            return Err(Error::Validation(Box::new(report)));
        }
        // the mod-2 matrix has full rank n: any single maximal face
        // provides an odd determinant
        debug_assert_eq!(lambda.mod2().rank(), lambda.rank_n());
        Ok(ToricInstance {
            name: name.into(),
            complex,
            lambda,
            wedge_provenance: Vec::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn lambda(&self) -> &CharMatrix {
        &self.lambda
    }

    pub fn lambda2(&self) -> F2Matrix {
        self.lambda.mod2()
    }

    /// Pairs (new_label, source_vertex) for labels created by wedges.
    pub fn wedge_provenance(&self) -> &[(usize, usize)] {
        &self.wedge_provenance
    }

    /// Apply the simplicial wedge and the matching matrix extension once
    /// per listed vertex, in order. Labels refer to the instance's
    /// original vertices and may not repeat. The result is re-validated.
    pub fn iterated_wedge(&self, vertices: &[usize]) -> Result<ToricInstance> {
        let original_m = self.complex.vertex_count();
        let mut seen = std::collections::HashSet::new();
        for &v in vertices {
            if v == 0 || v > original_m {
                return Err(Error::Input(format!(
                    "wedge vertex {v} out of range 1..={original_m}"
                )));
            }
            if !seen.insert(v) {
                return Err(Error::Input(format!("wedge vertex {v} listed twice")));
            }
        }
        let mut complex = self.complex.clone();
        let mut lambda = self.lambda.clone();
        let mut provenance = self.wedge_provenance.clone();
        for &v in vertices {
            complex = complex.wedge(v)?;
            lambda = lambda.wedge_lambda(v)?;
            provenance.push((complex.vertex_count(), v));
        }
        let name = if vertices.is_empty() {
            self.name.clone()
        } else {
            format!(
                "{}(v{})",
                self.name,
                vertices
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",v")
            )
        };
        let report = validate(&complex, &lambda, ValidationMode::Toric);
        if !report.is_valid() {
            // the wedge extension preserves non-degeneracy; a failure here
            // is a bug, not bad input
            return Err(Error::Internal(format!(
                "wedge extension failed validation: {report}"
            )));
        }
        Ok(ToricInstance {
            name,
            complex,
            lambda,
            wedge_provenance: provenance,
        })
    }
}

/// Restrict small-cover data to a facet: given that column `facet`
/// (1-indexed) of the mod-2 matrix has its single non-zero entry in
/// `row` (1-indexed), return the link of the facet's vertex together
/// with the matrix obtained by deleting that row and column and keeping
/// only the link's columns.
pub fn facet_restrict(
    k: &SimplicialComplex,
    lambda2: &F2Matrix,
    facet: usize,
    row: usize,
) -> Result<(SimplicialComplex, F2Matrix, Relabeling)> {
    let (n, m) = (lambda2.rows(), lambda2.cols());
    if facet == 0 || facet > m || row == 0 || row > n {
        return Err(Error::Input(format!(
            "facet {facet} or row {row} out of range for a {n}x{m} matrix"
        )));
    }
    let col = lambda2.col_vector(facet - 1);
    let expected = {
        let mut e = crate::f2::F2Vector::zeros(n);
        e.set(row - 1, true);
        e
    };
    if col != expected {
        return Err(Error::Domain(format!(
            "column {facet} is {} but must have its single non-zero entry in row {row}; \
             apply a basis change first",
            col.to_bitstring()
        )));
    }
    let (link, relab) = k.link(&[facet])?;
    let mut out = F2Matrix::zeros(n - 1, relab.len());
    for (new_col, &old_label) in relab.labels().iter().enumerate() {
        let mut out_row = 0;
        for r in 0..n {
            if r == row - 1 {
                continue;
            }
            if lambda2.get(r, old_label - 1) {
                out.set(out_row, new_col, true);
            }
            out_row += 1;
        }
    }
    Ok((link, out, relab))
}
