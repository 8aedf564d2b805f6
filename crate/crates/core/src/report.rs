//! The machine- and human-readable result document. The JSON schema is
//! versioned; the text rendering carries the same numbers.

use serde::{Deserialize, Serialize};

use crate::charmat::ValidationReport;
use crate::face_ring::A1Decomposition;
use crate::instance::InstanceFile;
use crate::ko::{Classification, KOEntry, OracleReport, SWitness, WittGroups};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub instance: InstanceFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witt: Option<WittGroups>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ko_unreduced: Option<Vec<KOEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ko_reduced: Option<Vec<KOEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<A1Decomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(instance: InstanceFile) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            instance,
            validation: None,
            witt: None,
            ko_unreduced: None,
            ko_reduced: None,
            classification: None,
            decomposition: None,
            oracle: None,
            timing_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable rendering; numbers match the JSON form exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(
            &mut out,
            format!(
                "instance: {}  (n={}, m={})",
                self.instance.name, self.instance.n, self.instance.m
            ),
        );
        if let Some(v) = &self.validation {
            push(&mut out, format!("validation: {v}"));
        }
        if let Some(w) = &self.witt {
            push(
                &mut out,
                format!(
                    "witt: W0={} W1={} W2={} W3={}  ({} omegas, {} contributing)",
                    w.w0,
                    w.w1,
                    w.w2,
                    w.w3,
                    w.omega_count,
                    w.attribution.len()
                ),
            );
            push(&mut out, "attribution:".to_string());
            for row in &w.attribution {
                let targets = row
                    .targets
                    .iter()
                    .map(|(d, idx, c)| format!("deg {d} x{c} -> W{idx}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                push(&mut out, format!("  omega={}  {}", row.omega, targets));
            }
        }
        for (label, table) in [
            ("ko_unreduced", &self.ko_unreduced),
            ("ko_reduced", &self.ko_reduced),
        ] {
            if let Some(entries) = table {
                push(&mut out, format!("{label}:"));
                for e in entries {
                    push(
                        &mut out,
                        format!(
                            "  KO^{} = {}  (free={}, torsion={})",
                            e.j,
                            e.group_notation(),
                            e.free,
                            e.torsion
                        ),
                    );
                }
            }
        }
        if let Some(c) = &self.classification {
            push(
                &mut out,
                format!("classification: s_type={} m_type={}", c.s_type, c.m_type),
            );
            match &c.s_witness {
                SWitness::Normalizer { rows } => {
                    push(&mut out, format!("  s_witness: normalizer rows {rows:?}"))
                }
                SWitness::DependentColumns { columns } => push(
                    &mut out,
                    format!("  s_witness: dependent columns {columns:?}"),
                ),
                SWitness::ZeroColumn { column } => {
                    push(&mut out, format!("  s_witness: zero column {column}"))
                }
            }
            if let Some(mw) = &c.m_witness {
                push(
                    &mut out,
                    format!(
                        "  m_witness: omega={} degree={} dim={}",
                        mw.omega, mw.degree, mw.dim
                    ),
                );
            }
        }
        if let Some(d) = &self.decomposition {
            push(&mut out, "decomposition:".to_string());
            push(
                &mut out,
                format!("  trivial: {:?}", d.s.iter().collect::<Vec<_>>()),
            );
            push(
                &mut out,
                format!("  pairs:   {:?}", d.m_pairs.iter().collect::<Vec<_>>()),
            );
        }
        if let Some(o) = &self.oracle {
            push(
                &mut out,
                format!("oracle: {}", if o.pass { "PASS" } else { "MISMATCH" }),
            );
            for r in &o.rows {
                push(
                    &mut out,
                    format!(
                        "  i={}: trivial={} subcomplex_sum={}",
                        r.half_degree, r.trivial_dim, r.subcomplex_sum
                    ),
                );
            }
            push(
                &mut out,
                format!(
                    "  halving: {}",
                    if o.halving.pass { "PASS" } else { "MISMATCH" }
                ),
            );
        }
        push(&mut out, format!("timing_ms: {}", self.timing_ms));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceFile;
    use crate::ko::{witt_groups, ScanOptions};

    fn cp2_file() -> InstanceFile {
        InstanceFile::parse_str(
            r#"{
                "name": "cp2",
                "n": 2,
                "m": 3,
                "maximal_faces": [[1, 2], [1, 3], [2, 3]],
                "lambda": [[1, 0, -1], [0, 1, -1]]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn report_round_trips_through_json() {
        let file = cp2_file();
        let inst = file.to_instance().unwrap();
        let mut report = Report::new(file);
        report.witt = Some(witt_groups(&inst, &ScanOptions::default()).unwrap());
        report.timing_ms = 12.5;
        let json = report.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(json, back.to_json());
    }

    #[test]
    fn text_carries_the_same_witt_numbers() {
        let file = cp2_file();
        let inst = file.to_instance().unwrap();
        let mut report = Report::new(file);
        report.witt = Some(witt_groups(&inst, &ScanOptions::default()).unwrap());
        let text = report.to_text();
        assert!(text.contains("W0=1 W1=0 W2=0 W3=0"));
        assert!(text.contains("omega=000"));
    }
}
