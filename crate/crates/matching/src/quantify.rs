use crate::error::MatchingError;
use crate::matrix::{CapabilityMatrix, RequirementMatrix};

/// Non-empty collection of capability matrices with unique supplier ids
/// and uniform dimensions.
#[derive(Debug, Clone)]
pub struct SupplierRegistry {
    suppliers: Vec<CapabilityMatrix>,
}

impl SupplierRegistry {
    pub fn new(suppliers: Vec<CapabilityMatrix>) -> Result<Self, MatchingError> {
        if suppliers.is_empty() {
            return Err(MatchingError::EmptyRegistry);
        }
        check_uniform(suppliers.iter().map(|s| (s.m(), s.p())))?;
        let mut seen = std::collections::HashSet::new();
        for s in &suppliers {
            if !seen.insert(s.supplier_id().to_string()) {
                return Err(MatchingError::DuplicateId(s.supplier_id().to_string()));
            }
        }
        Ok(Self { suppliers })
    }

    pub fn len(&self) -> usize {
        self.suppliers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn suppliers(&self) -> &[CapabilityMatrix] {
        &self.suppliers
    }
}

/// Non-empty collection of requirement matrices with unique tender ids
/// and uniform dimensions.
#[derive(Debug, Clone)]
pub struct TenderSeries {
    tenders: Vec<RequirementMatrix>,
}

impl TenderSeries {
    pub fn new(tenders: Vec<RequirementMatrix>) -> Result<Self, MatchingError> {
        if tenders.is_empty() {
            return Err(MatchingError::EmptySeries);
        }
        check_uniform(tenders.iter().map(|t| (t.m(), t.p())))?;
        let mut seen = std::collections::HashSet::new();
        for t in &tenders {
            if !seen.insert(t.tender_id().to_string()) {
                return Err(MatchingError::DuplicateId(t.tender_id().to_string()));
            }
        }
        Ok(Self { tenders })
    }

    pub fn len(&self) -> usize {
        self.tenders.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tenders(&self) -> &[RequirementMatrix] {
        &self.tenders
    }
}

fn check_uniform(mut dims: impl Iterator<Item = (usize, usize)>) -> Result<(), MatchingError> {
    let (m, p) = dims.next().expect("checked non-empty");
    for (om, op) in dims {
        if (om, op) != (m, p) {
            return Err(MatchingError::DimensionMismatch {
                left_m: m,
                left_p: p,
                right_m: om,
                right_p: op,
            });
        }
    }
    Ok(())
}

/// Number of unspecified attributes of a tender, computed as
/// `(1/2p) * sum(|r| - r)` over all entries. For canonical matrices this is
/// an integer equal to the count of fully unspecified rows, because each
/// all-(-1) row contributes exactly `2p / 2p`.
pub fn unspecified_count(requirement: &RequirementMatrix) -> f64 {
    let p = requirement.p();
    let sum: i64 = requirement
        .rows()
        .iter()
        .flatten()
        .map(|&r| (r.abs() as i64) - (r as i64))
        .sum();
    sum as f64 / (2.0 * p as f64)
}

/// Entry (i,j) is the fraction of suppliers supporting realization j of
/// attribute i.
pub fn support_frequency(registry: &SupplierRegistry) -> Vec<Vec<f64>> {
    let n = registry.len() as f64;
    let first = &registry.suppliers()[0];
    let (m, p) = (first.m(), first.p());
    let mut counts = vec![vec![0u32; p]; m];
    for supplier in registry.suppliers() {
        for (i, row) in supplier.rows().iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                counts[i][j] += c as u32;
            }
        }
    }
    counts
        .into_iter()
        .map(|row| row.into_iter().map(|k| k as f64 / n).collect())
        .collect()
}

/// Entry (i,j) is the fraction of tenders satisfied with realization j of
/// attribute i; an unspecified entry counts as satisfied because such a
/// tender accepts any realization of the attribute.
pub fn acceptance_frequency(series: &TenderSeries) -> Vec<Vec<f64>> {
    let m_count = series.len() as f64;
    let first = &series.tenders()[0];
    let (m, p) = (first.m(), first.p());
    let mut counts = vec![vec![0u32; p]; m];
    for tender in series.tenders() {
        for (i, row) in tender.rows().iter().enumerate() {
            for (j, &r) in row.iter().enumerate() {
                counts[i][j] += r.unsigned_abs() as u32;
            }
        }
    }
    counts
        .into_iter()
        .map(|row| row.into_iter().map(|k| k as f64 / m_count).collect())
        .collect()
}

/// Probability that a random tender is satisfied by a random supplier,
/// taken as the product of support and acceptance frequencies over every
/// (attribute, realization) position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Satisfaction {
    /// The plain product; 0.0 once the log-space value underflows.
    pub value: f64,
    /// Natural log of the product; `-inf` when any factor is zero.
    pub log_value: f64,
}

/// Computes the satisfaction probability in log space so that the many
/// small factors (one per matrix position) do not silently underflow.
pub fn satisfaction_probability(
    registry: &SupplierRegistry,
    series: &TenderSeries,
) -> Result<Satisfaction, MatchingError> {
    let support = support_frequency(registry);
    let acceptance = acceptance_frequency(series);
    if support.len() != acceptance.len() || support[0].len() != acceptance[0].len() {
        return Err(MatchingError::DimensionMismatch {
            left_m: support.len(),
            left_p: support[0].len(),
            right_m: acceptance.len(),
            right_p: acceptance[0].len(),
        });
    }
    let mut log_value = 0.0f64;
    for (p_row, q_row) in support.iter().zip(&acceptance) {
        for (&p, &q) in p_row.iter().zip(q_row) {
            let factor = p * q;
            if factor == 0.0 {
                return Ok(Satisfaction {
                    value: 0.0,
                    log_value: f64::NEG_INFINITY,
                });
            }
            log_value += factor.ln();
        }
    }
    Ok(Satisfaction {
        value: log_value.exp(),
        log_value,
    })
}
