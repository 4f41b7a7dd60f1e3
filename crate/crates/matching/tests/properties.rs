//! Property tests pitting the matching operations against brute-force
//! counting oracles on small random instances.

use proptest::prelude::*;

use tenderbroker_matching::{
    acceptance_frequency, match_vector, satisfaction_probability, support_frequency,
    unspecified_count, validate_requirement_matrix, AttributeDef, AttributeSpace,
    CapabilityMatrix, RequirementMatrix, SupplierRegistry, TenderSeries,
};

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

/// Strategy: dimensions, one capability matrix, and one canonical
/// requirement matrix sharing those dimensions.
fn matched_pair() -> impl Strategy<Value = (CapabilityMatrix, RequirementMatrix)> {
    (1usize..7, 1usize..6).prop_flat_map(|(m, p)| {
        let cap = prop::collection::vec(prop::collection::vec(0u8..=1, p), m);
        let req = prop::collection::vec(canonical_row(p), m);
        (cap, req).prop_map(move |(c, r)| {
            (
                CapabilityMatrix::new("s", c).unwrap(),
                RequirementMatrix::new("t", r).unwrap(),
            )
        })
    })
}

/// A row that is either all -1 or drawn from {0,1} with at least one 1.
fn canonical_row(p: usize) -> impl Strategy<Value = Vec<i8>> {
    prop_oneof![
        Just(vec![-1i8; p]),
        prop::collection::vec(0i8..=1, p).prop_map(move |mut row| {
            if row.iter().all(|&v| v == 0) {
                row[0] = 1;
            }
            row
        }),
    ]
}

proptest! {
    /// Components stay within [-p, p]; specified rows score >= 0 and
    /// unspecified rows score exactly minus the supplier's support count.
    #[test]
    fn matching_vector_bounds_and_signs((cap, req) in matched_pair()) {
        let p = cap.p() as i32;
        let mu = match_vector(&cap, &req).unwrap();
        for (i, &c) in mu.components().iter().enumerate() {
            prop_assert!((-p..=p).contains(&c));
            if req.row_unspecified(i) {
                let supported: i32 = cap.rows()[i].iter().map(|&v| v as i32).sum();
                prop_assert_eq!(c, -supported);
            } else {
                prop_assert!(c >= 0);
            }
        }
    }

    /// Permuting realization columns identically in both matrices leaves
    /// the matching vector untouched.
    #[test]
    fn matching_is_permutation_invariant(
        (cap, req) in matched_pair(),
        shift in 0usize..8,
    ) {
        let p = cap.p();
        let rotate = |offset: usize| move |row: &[i8]| -> Vec<i8> {
            (0..p).map(|j| row[(j + offset) % p]).collect()
        };
        let rot = rotate(shift % p);
        let cap_rows: Vec<Vec<u8>> = cap
            .rows()
            .iter()
            .map(|r| {
                let signed: Vec<i8> = r.iter().map(|&v| v as i8).collect();
                rot(&signed).into_iter().map(|v| v as u8).collect()
            })
            .collect();
        let req_rows: Vec<Vec<i8>> = req.rows().iter().map(|r| rot(r)).collect();
        let cap2 = CapabilityMatrix::new("s", cap_rows).unwrap();
        let req2 = RequirementMatrix::new("t", req_rows).unwrap();
        prop_assert_eq!(
            match_vector(&cap, &req).unwrap(),
            match_vector(&cap2, &req2).unwrap()
        );
    }

    /// For canonical matrices the unspecified count is the number of
    /// all-(-1) rows, found by direct row scan.
    #[test]
    fn unspecified_count_equals_row_scan((_, req) in matched_pair()) {
        let space = full_space(req.m(), req.p());
        prop_assert!(validate_requirement_matrix(&req, &space).unwrap().is_ok());
        let by_scan = (0..req.m()).filter(|&i| req.row_unspecified(i)).count();
        let nu = unspecified_count(&req);
        prop_assert_eq!(nu, by_scan as f64);
        prop_assert!(nu >= 0.0 && nu <= req.m() as f64);
    }

    /// Frequency matrices agree with naive counting and stay in [0, 1].
    #[test]
    fn frequencies_match_counting_oracle(
        pairs in prop::collection::vec(matched_pair(), 1..8),
    ) {
        // Reuse the first pair's dimensions for the whole population.
        let (m, p) = (pairs[0].0.m(), pairs[0].0.p());
        let caps: Vec<CapabilityMatrix> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (c, _))| c.m() == m && c.p() == p)
            .map(|(k, (c, _))| CapabilityMatrix::new(format!("s{k}"), c.rows().to_vec()).unwrap())
            .collect();
        let reqs: Vec<RequirementMatrix> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (_, r))| r.m() == m && r.p() == p)
            .map(|(k, (_, r))| RequirementMatrix::new(format!("t{k}"), r.rows().to_vec()).unwrap())
            .collect();
        let registry = SupplierRegistry::new(caps.clone()).unwrap();
        let series = TenderSeries::new(reqs.clone()).unwrap();

        let support = support_frequency(&registry);
        let acceptance = acceptance_frequency(&series);
        for i in 0..m {
            for j in 0..p {
                let kappa = caps.iter().filter(|c| c.entry(i, j) == 1).count();
                prop_assert_eq!(support[i][j], kappa as f64 / caps.len() as f64);
                let accepted = reqs.iter().filter(|r| r.entry(i, j) != 0).count();
                prop_assert_eq!(acceptance[i][j], accepted as f64 / reqs.len() as f64);
                prop_assert!((0.0..=1.0).contains(&support[i][j]));
                prop_assert!((0.0..=1.0).contains(&acceptance[i][j]));
            }
        }
    }

    /// The log-space satisfaction probability agrees with the direct
    /// product while the direct product stays representable.
    #[test]
    fn satisfaction_log_space_consistency(
        pairs in prop::collection::vec(matched_pair(), 1..8),
    ) {
        let (m, p) = (pairs[0].0.m(), pairs[0].0.p());
        let caps: Vec<CapabilityMatrix> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (c, _))| c.m() == m && c.p() == p)
            .map(|(k, (c, _))| CapabilityMatrix::new(format!("s{k}"), c.rows().to_vec()).unwrap())
            .collect();
        let reqs: Vec<RequirementMatrix> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (_, r))| r.m() == m && r.p() == p)
            .map(|(k, (_, r))| RequirementMatrix::new(format!("t{k}"), r.rows().to_vec()).unwrap())
            .collect();
        let registry = SupplierRegistry::new(caps).unwrap();
        let series = TenderSeries::new(reqs).unwrap();

        let support = support_frequency(&registry);
        let acceptance = acceptance_frequency(&series);
        let direct: f64 = support
            .iter()
            .zip(&acceptance)
            .flat_map(|(pr, qr)| pr.iter().zip(qr).map(|(&a, &b)| a * b))
            .product();

        let s = satisfaction_probability(&registry, &series).unwrap();
        if direct == 0.0 {
            prop_assert_eq!(s.value, 0.0);
            prop_assert_eq!(s.log_value, f64::NEG_INFINITY);
        } else if direct > 1e-300 {
            prop_assert!((s.value - direct).abs() <= 1e-9 * direct);
        }
    }

    /// Flipping a capability entry from 0 to 1 never turns an eligible
    /// supplier ineligible.
    #[test]
    fn eligibility_is_monotone_in_capabilities(
        (cap, req) in matched_pair(),
        pick in prop::num::u64::ANY,
    ) {
        let mu = match_vector(&cap, &req).unwrap();
        let mut rows = cap.rows().to_vec();
        let zeros: Vec<(usize, usize)> = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v == 0)
                    .map(move |(j, _)| (i, j))
            })
            .collect();
        prop_assume!(!zeros.is_empty());
        let (i, j) = zeros[(pick % zeros.len() as u64) as usize];
        rows[i][j] = 1;
        let improved = CapabilityMatrix::new("s", rows).unwrap();
        let mu2 = match_vector(&improved, &req).unwrap();
        if mu.is_eligible() {
            prop_assert!(mu2.is_eligible());
        }
    }
}
