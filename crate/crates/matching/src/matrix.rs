use serde::{Deserialize, Serialize};

use crate::error::MatchingError;
use crate::space::AttributeSpace;

/// Binary m×p matrix describing which realizations one supplier supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CapabilityDoc", into = "CapabilityDoc")]
pub struct CapabilityMatrix {
    supplier_id: String,
    rows: Vec<Vec<u8>>,
}

impl CapabilityMatrix {
    /// Entries must be 0 or 1 and rows rectangular.
    pub fn new(supplier_id: impl Into<String>, rows: Vec<Vec<u8>>) -> Result<Self, MatchingError> {
        let p = check_rectangular(&rows)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(MatchingError::NonBinaryEntry {
                        row: i,
                        col: j,
                        value: v as i8,
                    });
                }
            }
        }
        let _ = p;
        Ok(Self {
            supplier_id: supplier_id.into(),
            rows,
        })
    }

    pub fn supplier_id(&self) -> &str {
        &self.supplier_id
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.rows[i][j]
    }

    /// Checks shape against a space, including zeroed padding positions.
    pub fn validate_against(&self, space: &AttributeSpace) -> Result<(), MatchingError> {
        check_dims(self.m(), self.p(), space)?;
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate().skip(space.realization_count(i)) {
                if v != 0 {
                    return Err(MatchingError::NonBinaryEntry {
                        row: i,
                        col: j,
                        value: v as i8,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Tri-state m×p matrix describing one tender: +1 desired, 0 not desired,
/// -1 unspecified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RequirementDoc", into = "RequirementDoc")]
pub struct RequirementMatrix {
    tender_id: String,
    rows: Vec<Vec<i8>>,
}

impl RequirementMatrix {
    /// Only the shape is enforced here; value-level checks live in
    /// [`validate_requirement_matrix`] so that malformed documents can be
    /// reported violation by violation.
    pub fn new(tender_id: impl Into<String>, rows: Vec<Vec<i8>>) -> Result<Self, MatchingError> {
        check_rectangular(&rows)?;
        Ok(Self {
            tender_id: tender_id.into(),
            rows,
        })
    }

    pub fn tender_id(&self) -> &str {
        &self.tender_id
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.rows[i][j]
    }

    /// True when row `i` is fully unspecified (all -1).
    pub fn row_unspecified(&self, i: usize) -> bool {
        self.rows[i].iter().all(|&v| v == -1)
    }
}

/// Per-attribute dot products of one capability and one requirement matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingVector(Vec<i32>);

impl MatchingVector {
    pub fn components(&self) -> &[i32] {
        &self.0
    }

    /// A supplier should bid only when every component is nonzero: positive
    /// components supply a desired realization, negative ones offer a
    /// substitutable choice for an unspecified attribute, and zeros mark
    /// attributes the supplier cannot satisfy.
    pub fn is_eligible(&self) -> bool {
        self.0.iter().all(|&c| c != 0)
    }

    /// Number of attributes the supplier cannot satisfy.
    pub fn zero_count(&self) -> usize {
        self.0.iter().filter(|&&c| c == 0).count()
    }
}

impl std::fmt::Display for MatchingVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Computes the matching vector: component `i` is the dot product of row
/// `i` of the capability matrix with row `i` of the requirement matrix.
pub fn match_vector(
    capability: &CapabilityMatrix,
    requirement: &RequirementMatrix,
) -> Result<MatchingVector, MatchingError> {
    if capability.m() != requirement.m() || capability.p() != requirement.p() {
        return Err(MatchingError::DimensionMismatch {
            left_m: capability.m(),
            left_p: capability.p(),
            right_m: requirement.m(),
            right_p: requirement.p(),
        });
    }
    let components = capability
        .rows
        .iter()
        .zip(&requirement.rows)
        .map(|(c, r)| {
            c.iter()
                .zip(r)
                .map(|(&cv, &rv)| cv as i32 * rv as i32)
                .sum()
        })
        .collect();
    Ok(MatchingVector(components))
}

/// A single rule breach found while validating a requirement matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowViolation {
    /// A row mixes -1 with 0/1 entries. Rows must be entirely specified or
    /// entirely unspecified, otherwise the unspecified-attribute count loses
    /// its meaning and dot products can cancel to zero by accident.
    MixedRow { row: usize },
    /// Entry outside {-1, 0, 1}.
    ValueOutOfRange { row: usize, col: usize, value: i8 },
    /// A specified row that desires nothing matches no supplier and is
    /// almost certainly a mistake.
    NoDesiredRealization { row: usize },
    /// A specified row marks a padding position (beyond the attribute's
    /// realization count) as desired.
    DesiredPadding { row: usize, col: usize },
}

impl std::fmt::Display for RowViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowViolation::MixedRow { row } => {
                write!(f, "row {row}: mixes unspecified (-1) and specified entries")
            }
            RowViolation::ValueOutOfRange { row, col, value } => {
                write!(f, "entry ({row},{col}): value {value} outside {{-1, 0, 1}}")
            }
            RowViolation::NoDesiredRealization { row } => {
                write!(f, "row {row}: specified but desires no realization")
            }
            RowViolation::DesiredPadding { row, col } => {
                write!(f, "entry ({row},{col}): desires a padding position")
            }
        }
    }
}

/// Outcome of validating a requirement matrix against a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<RowViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the canonical row rule: every row is either fully specified
/// (entries in {0,1}, at least one 1, padding zeroed) or fully unspecified
/// (all entries -1, padding included).
pub fn validate_requirement_matrix(
    matrix: &RequirementMatrix,
    space: &AttributeSpace,
) -> Result<ValidationReport, MatchingError> {
    check_dims(matrix.m(), matrix.p(), space)?;
    let mut violations = Vec::new();
    for (i, row) in matrix.rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !(-1..=1).contains(&v) {
                violations.push(RowViolation::ValueOutOfRange {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
        let has_unspecified = row.iter().any(|&v| v == -1);
        let all_unspecified = row.iter().all(|&v| v == -1);
        if has_unspecified && !all_unspecified {
            violations.push(RowViolation::MixedRow { row: i });
            continue;
        }
        if all_unspecified {
            continue;
        }
        if !row.iter().any(|&v| v == 1) {
            violations.push(RowViolation::NoDesiredRealization { row: i });
        }
        for (j, &v) in row.iter().enumerate().skip(space.realization_count(i)) {
            if v == 1 {
                violations.push(RowViolation::DesiredPadding { row: i, col: j });
            }
        }
    }
    Ok(ValidationReport { violations })
}

fn check_rectangular<T>(rows: &[Vec<T>]) -> Result<usize, MatchingError> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(MatchingError::EmptyMatrix);
    }
    let p = rows[0].len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != p {
            return Err(MatchingError::RaggedRow {
                row: i,
                got: row.len(),
                expected: p,
            });
        }
    }
    Ok(p)
}

fn check_dims(m: usize, p: usize, space: &AttributeSpace) -> Result<(), MatchingError> {
    if m != space.m() || p != space.p() {
        return Err(MatchingError::DimensionMismatch {
            left_m: m,
            left_p: p,
            right_m: space.m(),
            right_p: space.p(),
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CapabilityDoc {
    supplier_id: String,
    entries: Vec<Vec<u8>>,
}

impl TryFrom<CapabilityDoc> for CapabilityMatrix {
    type Error = MatchingError;
    fn try_from(doc: CapabilityDoc) -> Result<Self, MatchingError> {
        CapabilityMatrix::new(doc.supplier_id, doc.entries)
    }
}

impl From<CapabilityMatrix> for CapabilityDoc {
    fn from(m: CapabilityMatrix) -> Self {
        CapabilityDoc {
            supplier_id: m.supplier_id,
            entries: m.rows,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequirementDoc {
    tender_id: String,
    entries: Vec<Vec<i8>>,
}

impl TryFrom<RequirementDoc> for RequirementMatrix {
    type Error = MatchingError;
    fn try_from(doc: RequirementDoc) -> Result<Self, MatchingError> {
        RequirementMatrix::new(doc.tender_id, doc.entries)
    }
}

impl From<RequirementMatrix> for RequirementDoc {
    fn from(m: RequirementMatrix) -> Self {
        RequirementDoc {
            tender_id: m.tender_id,
            entries: m.rows,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::AttributeDef;

    pub(crate) fn demo_capability() -> CapabilityMatrix {
        CapabilityMatrix::new(
            "s-demo",
            vec![vec![1, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 0, 1, 0]],
        )
        .unwrap()
    }

    pub(crate) fn demo_requirement() -> RequirementMatrix {
        RequirementMatrix::new(
            "t-demo",
            vec![vec![1, 1, 0, 0], vec![1, 0, 0, 1], vec![-1, -1, -1, -1]],
        )
        .unwrap()
    }

    fn full_space(m: usize, p: usize) -> AttributeSpace {
        let attrs = (0..m)
            .map(|i| {
                AttributeDef::new(
                    format!("a{i}"),
                    (0..p).map(|j| format!("a{i}_{j}")).collect(),
                )
            })
            .collect();
        AttributeSpace::new(attrs, p).unwrap()
    }

    #[test]
    fn demo_pair_matches_to_two_zero_minus_two() {
        let mu = match_vector(&demo_capability(), &demo_requirement()).unwrap();
        assert_eq!(mu.components(), &[2, 0, -2]);
        assert!(!mu.is_eligible());
        assert_eq!(mu.zero_count(), 1);
    }

    #[test]
    fn all_zero_capability_yields_zero_vector() {
        let cap = CapabilityMatrix::new("s", vec![vec![0; 4]; 3]).unwrap();
        let mu = match_vector(&cap, &demo_requirement()).unwrap();
        assert_eq!(mu.components(), &[0, 0, 0]);
    }

    #[test]
    fn unspecified_row_against_full_support_scores_minus_p() {
        let cap = CapabilityMatrix::new("s", vec![vec![1; 4]]).unwrap();
        let req = RequirementMatrix::new("t", vec![vec![-1; 4]]).unwrap();
        let mu = match_vector(&cap, &req).unwrap();
        assert_eq!(mu.components(), &[-4]);
        assert!(mu.is_eligible());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let cap = CapabilityMatrix::new("s", vec![vec![1, 0]]).unwrap();
        let req = RequirementMatrix::new("t", vec![vec![1, 0, 0]]).unwrap();
        assert!(matches!(
            match_vector(&cap, &req),
            Err(MatchingError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn demo_requirement_is_canonical() {
        let report =
            validate_requirement_matrix(&demo_requirement(), &full_space(3, 4)).unwrap();
        assert!(report.is_ok());
    }

    #[test]
    fn mixed_row_is_reported() {
        let req = RequirementMatrix::new("t", vec![vec![1, -1, 0, 0]]).unwrap();
        let report = validate_requirement_matrix(&req, &full_space(1, 4)).unwrap();
        assert_eq!(report.violations, vec![RowViolation::MixedRow { row: 0 }]);
    }

    #[test]
    fn all_zero_specified_row_is_reported() {
        let req = RequirementMatrix::new("t", vec![vec![0, 0, 0, 0]]).unwrap();
        let report = validate_requirement_matrix(&req, &full_space(1, 4)).unwrap();
        assert_eq!(
            report.violations,
            vec![RowViolation::NoDesiredRealization { row: 0 }]
        );
    }

    #[test]
    fn out_of_range_value_is_reported() {
        let req = RequirementMatrix::new("t", vec![vec![2, 1, 0, 0]]).unwrap();
        let report = validate_requirement_matrix(&req, &full_space(1, 4)).unwrap();
        assert!(report
            .violations
            .contains(&RowViolation::ValueOutOfRange {
                row: 0,
                col: 0,
                value: 2
            }));
    }

    #[test]
    fn desired_padding_is_reported() {
        let space = AttributeSpace::new(
            vec![AttributeDef::new("a0", vec!["x".into(), "y".into()])],
            4,
        )
        .unwrap();
        let req = RequirementMatrix::new("t", vec![vec![0, 1, 0, 1]]).unwrap();
        let report = validate_requirement_matrix(&req, &space).unwrap();
        assert_eq!(
            report.violations,
            vec![RowViolation::DesiredPadding { row: 0, col: 3 }]
        );
    }

    #[test]
    fn capability_rejects_non_binary_entries() {
        assert!(matches!(
            CapabilityMatrix::new("s", vec![vec![0, 2]]),
            Err(MatchingError::NonBinaryEntry { .. })
        ));
    }

    #[test]
    fn capability_padding_check() {
        let space = AttributeSpace::new(
            vec![AttributeDef::new("a0", vec!["x".into(), "y".into()])],
            4,
        )
        .unwrap();
        let ok = CapabilityMatrix::new("s", vec![vec![1, 1, 0, 0]]).unwrap();
        assert!(ok.validate_against(&space).is_ok());
        let bad = CapabilityMatrix::new("s", vec![vec![1, 1, 0, 1]]).unwrap();
        assert!(bad.validate_against(&space).is_err());
    }

    #[test]
    fn matrices_round_trip_through_json() {
        let cap = demo_capability();
        let text = serde_json::to_string(&cap).unwrap();
        assert_eq!(serde_json::from_str::<CapabilityMatrix>(&text).unwrap(), cap);

        let req = demo_requirement();
        let text = serde_json::to_string(&req).unwrap();
        assert_eq!(
            serde_json::from_str::<RequirementMatrix>(&text).unwrap(),
            req
        );
    }

    #[test]
    fn unknown_document_keys_are_rejected() {
        let text = r#"{"supplier_id":"s","entries":[[1]],"extra":1}"#;
        assert!(serde_json::from_str::<CapabilityMatrix>(text).is_err());
    }
}
