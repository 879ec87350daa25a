//! Solvability classification of 3-source / 3-terminal sum-networks.
//!
//! A connected network is nonsolvable (no rate-1 scalar linear code over any
//! field) exactly when some ordered edge pair satisfies six structural cut
//! conditions under some labeling of the sources and terminals. Among the
//! remaining connected networks, those that are solvable over every field
//! except GF(2) are exactly the ones where a pair satisfies a sharper
//! "disconnects exactly two pairs" variant of the conditions. The classifier
//! searches all ordered edge pairs and all 36 labelings for such witnesses.

use thiserror::Error;

use crate::analysis;
use crate::multigraph::{EdgeId, GraphError, NodeId, SumNetwork};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("network must have exactly 3 sources and 3 terminals")]
    NotThreeByThree,
    #[error("labeling permutations must be bijections on {{0,1,2}}")]
    InvalidLabeling,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The six permutations of [0,1,2] in lexicographic order.
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// An assignment of the roles s1,s2,s3 and t1,t2,t3 to the network's source
/// and terminal nodes: role `r` is played by `sources()[source_perm[r]]`
/// (terminals likewise).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Labeling {
    source_perm: [usize; 3],
    terminal_perm: [usize; 3],
}

impl Labeling {
    pub fn new(
        source_perm: [usize; 3],
        terminal_perm: [usize; 3],
    ) -> Result<Labeling, ClassifierError> {
        let bijective = |p: [usize; 3]| (0..3).all(|i| p.contains(&i));
        if !bijective(source_perm) || !bijective(terminal_perm) {
            return Err(ClassifierError::InvalidLabeling);
        }
        Ok(Labeling { source_perm, terminal_perm })
    }

    pub fn identity() -> Labeling {
        Labeling { source_perm: [0, 1, 2], terminal_perm: [0, 1, 2] }
    }

    pub fn source_perm(&self) -> [usize; 3] {
        self.source_perm
    }

    pub fn terminal_perm(&self) -> [usize; 3] {
        self.terminal_perm
    }

    /// Node playing source role `r` (0-based: role 0 is s1).
    pub fn source_node(&self, net: &SumNetwork, r: usize) -> NodeId {
        net.sources()[self.source_perm[r]]
    }

    /// Node playing terminal role `r` (0-based: role 0 is t1).
    pub fn terminal_node(&self, net: &SumNetwork, r: usize) -> NodeId {
        net.terminals()[self.terminal_perm[r]]
    }
}

/// All 36 labelings, lexicographic by (source_perm, terminal_perm).
pub fn all_labelings() -> Vec<Labeling> {
    let mut out = Vec::with_capacity(36);
    for sp in PERMS {
        for tp in PERMS {
            out.push(Labeling { source_perm: sp, terminal_perm: tp });
        }
    }
    out
}

/// An edge pair and labeling under which a witness predicate holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessPair {
    pub e1: EdgeId,
    pub e2: EdgeId,
    pub labeling: Labeling,
}

/// Solvability class of a 3s/3t sum-network, with the witness pair that
/// proves membership where one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolvabilityClass {
    /// Some source–terminal pair has no path; nothing can be communicated.
    NotConnected,
    /// No scalar linear code over any finite field.
    Nonsolvable(WitnessPair),
    /// Scalar linear codes exist over every field except GF(2).
    SolvableExceptF2(WitnessPair),
    /// Scalar linear codes (with coefficients in {0,+1,-1}) exist over every
    /// field.
    SolvableAllFields,
}

impl SolvabilityClass {
    pub fn witness(&self) -> Option<&WitnessPair> {
        match self {
            SolvabilityClass::Nonsolvable(w) | SolvabilityClass::SolvableExceptF2(w) => Some(w),
            _ => None,
        }
    }

    /// Exact coding capacity implied by the class: "0", "2/3", or ">=1".
    pub fn capacity_note(&self) -> &'static str {
        match self {
            SolvabilityClass::NotConnected => "0",
            SolvabilityClass::Nonsolvable(_) => "2/3",
            SolvabilityClass::SolvableExceptF2(_) | SolvabilityClass::SolvableAllFields => ">=1",
        }
    }

    /// Short machine-friendly name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            SolvabilityClass::NotConnected => "not-connected",
            SolvabilityClass::Nonsolvable(_) => "nonsolvable",
            SolvabilityClass::SolvableExceptF2(_) => "solvable-except-gf2",
            SolvabilityClass::SolvableAllFields => "solvable-all-fields",
        }
    }
}

/// True iff `a` precedes `b`: `head(a)` equals `tail(b)` (a zero-length
/// connection) or has a path to it.
pub fn edge_precedes(net: &SumNetwork, a: EdgeId, b: EdgeId) -> Result<bool, ClassifierError> {
    let ea = *net.edge(a)?;
    let eb = *net.edge(b)?;
    Ok(ea.head == eb.tail || net.reachable(ea.head, eb.tail)?)
}

fn require_three_by_three(net: &SumNetwork) -> Result<(), ClassifierError> {
    if net.sources().len() != 3 || net.terminals().len() != 3 {
        return Err(ClassifierError::NotThreeByThree);
    }
    Ok(())
}

/// True iff `(e1, e2)` under `labeling` satisfies all six nonsolvability
/// conditions:
///
/// 1. s1 cannot reach t3 once e1 is removed;
/// 2. s3 cannot reach t1 once e1 is removed;
/// 3. s2 cannot reach t3 once e2 is removed;
/// 4. neither s2 nor s3 can reach t2 once e2 is removed;
/// 5. s3 cannot reach t3 once both are removed;
/// 6. neither edge precedes the other.
///
/// On a connected network, such a pair proves that no scalar linear code
/// exists over any field and that the coding capacity is exactly 2/3.
/// A pair with `e1 == e2` is never a witness.
pub fn is_nonsolvability_witness(
    net: &SumNetwork,
    e1: EdgeId,
    e2: EdgeId,
    labeling: &Labeling,
) -> Result<bool, ClassifierError> {
    require_three_by_three(net)?;
    net.edge(e1)?;
    net.edge(e2)?;
    if e1 == e2 {
        return Ok(false);
    }
    if edge_precedes(net, e1, e2)? || edge_precedes(net, e2, e1)? {
        return Ok(false);
    }
    let s = |r: usize| labeling.source_node(net, r);
    let t = |r: usize| labeling.terminal_node(net, r);
    let minus_e1 = net.remove_edges(&[e1])?;
    if minus_e1.reachable(s(0), t(2))? || minus_e1.reachable(s(2), t(0))? {
        return Ok(false);
    }
    let minus_e2 = net.remove_edges(&[e2])?;
    if minus_e2.reachable(s(1), t(2))?
        || minus_e2.reachable(s(1), t(1))?
        || minus_e2.reachable(s(2), t(1))?
    {
        return Ok(false);
    }
    let minus_both = net.remove_edges(&[e1, e2])?;
    Ok(!minus_both.reachable(s(2), t(2))?)
}

/// True iff `(e1, e2)` under `labeling` satisfies the four conditions that
/// characterize solvability over every field except GF(2):
///
/// 1. e1 disconnects exactly (s1,t3) and (s3,t1);
/// 2. e2 disconnects exactly (s2,t3) and (s3,t2);
/// 3. s3 cannot reach t3 once both are removed;
/// 4. neither edge precedes the other.
///
/// "Disconnects" is strict: the listed pairs are connected in the intact
/// network, and no other pair loses connectivity. A pair with `e1 == e2`
/// is never a witness.
pub fn is_f2_exception_witness(
    net: &SumNetwork,
    e1: EdgeId,
    e2: EdgeId,
    labeling: &Labeling,
) -> Result<bool, ClassifierError> {
    require_three_by_three(net)?;
    net.edge(e1)?;
    net.edge(e2)?;
    if e1 == e2 {
        return Ok(false);
    }
    if edge_precedes(net, e1, e2)? || edge_precedes(net, e2, e1)? {
        return Ok(false);
    }
    let si = |r: usize| labeling.source_perm[r];
    let ti = |r: usize| labeling.terminal_perm[r];
    let mut want1 = [(si(0), ti(2)), (si(2), ti(0))];
    want1.sort_unstable();
    let mut got1 = analysis::disconnect_set(net, e1)?.pairs;
    got1.sort_unstable();
    if got1 != want1 {
        return Ok(false);
    }
    let mut want2 = [(si(1), ti(2)), (si(2), ti(1))];
    want2.sort_unstable();
    let mut got2 = analysis::disconnect_set(net, e2)?.pairs;
    got2.sort_unstable();
    if got2 != want2 {
        return Ok(false);
    }
    let minus_both = net.remove_edges(&[e1, e2])?;
    Ok(!minus_both.reachable(labeling.source_node(net, 2), labeling.terminal_node(net, 2))?)
}

/// Search all ordered edge pairs (ascending id) × all 36 labelings
/// (lexicographic) and return the first pair satisfying `predicate`.
fn first_witness(
    net: &SumNetwork,
    predicate: impl Fn(&SumNetwork, EdgeId, EdgeId, &Labeling) -> Result<bool, ClassifierError>,
) -> Result<Option<WitnessPair>, ClassifierError> {
    let labelings = all_labelings();
    let ids: Vec<EdgeId> = net.edges().iter().map(|e| e.id).collect();
    for &e1 in &ids {
        for &e2 in &ids {
            if e1 == e2 {
                continue;
            }
            // Both predicates require reachability-incomparable edges;
            // checking once here skips the 36 labelings cheaply.
            if edge_precedes(net, e1, e2)? || edge_precedes(net, e2, e1)? {
                continue;
            }
            for labeling in &labelings {
                if predicate(net, e1, e2, labeling)? {
                    return Ok(Some(WitnessPair { e1, e2, labeling: *labeling }));
                }
            }
        }
    }
    Ok(None)
}

fn classify_by_search(net: &SumNetwork) -> Result<SolvabilityClass, ClassifierError> {
    if let Some(w) = first_witness(net, is_nonsolvability_witness)? {
        return Ok(SolvabilityClass::Nonsolvable(w));
    }
    if let Some(w) = first_witness(net, is_f2_exception_witness)? {
        return Ok(SolvabilityClass::SolvableExceptF2(w));
    }
    Ok(SolvabilityClass::SolvableAllFields)
}

/// Decide the solvability class of a 3s/3t sum-network.
///
/// Two shortcuts are taken before the pair search, each by itself sufficient
/// for solvability over every field: a hub node exists, or the maximum
/// disconnectivity is outside {2, 3}. Both agree with the exhaustive search
/// by construction (the witness conditions force a maximum disconnectivity
/// of 2 or 3 and exclude hubs); the agreement is asserted in tests.
pub fn classify(net: &SumNetwork) -> Result<SolvabilityClass, ClassifierError> {
    require_three_by_three(net)?;
    if !analysis::is_connected_sum_network(net) {
        return Ok(SolvabilityClass::NotConnected);
    }
    if analysis::find_hub_node(net).is_some() {
        return Ok(SolvabilityClass::SolvableAllFields);
    }
    let kappa = analysis::kappa(net);
    if kappa != 2 && kappa != 3 {
        return Ok(SolvabilityClass::SolvableAllFields);
    }
    classify_by_search(net)
}

/// [`classify`] without the shortcut lemmas: always runs the full ordered
/// pair × labeling search. Exposed so tests can assert the shortcuts agree.
pub fn classify_full_search(net: &SumNetwork) -> Result<SolvabilityClass, ClassifierError> {
    require_three_by_three(net)?;
    if !analysis::is_connected_sum_network(net) {
        return Ok(SolvabilityClass::NotConnected);
    }
    classify_by_search(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn labelings_are_validated() {
        assert!(Labeling::new([0, 1, 2], [2, 1, 0]).is_ok());
        assert_eq!(
            Labeling::new([0, 0, 2], [0, 1, 2]),
            Err(ClassifierError::InvalidLabeling)
        );
        assert_eq!(
            Labeling::new([0, 1, 2], [1, 1, 1]),
            Err(ClassifierError::InvalidLabeling)
        );
    }

    #[test]
    fn all_labelings_enumerates_36_in_order() {
        let all = all_labelings();
        assert_eq!(all.len(), 36);
        assert_eq!(all[0], Labeling::identity());
        assert_eq!(all[1], Labeling::new([0, 1, 2], [0, 2, 1]).unwrap());
        assert_eq!(all[35], Labeling::new([2, 1, 0], [2, 1, 0]).unwrap());
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 36);
    }

    #[test]
    fn edge_precedes_examples() {
        let net = fixtures::bottleneck();
        // Edge 0 (s1->hub tail) meets edge 3 (the hub edge) head-to-tail:
        // the zero-length connection counts.
        assert!(edge_precedes(&net, EdgeId(0), EdgeId(3)).unwrap());
        assert!(edge_precedes(&net, EdgeId(3), EdgeId(4)).unwrap());
        // Through the hub edge there is a longer path.
        assert!(edge_precedes(&net, EdgeId(0), EdgeId(4)).unwrap());
        assert!(!edge_precedes(&net, EdgeId(4), EdgeId(0)).unwrap());
        // Sibling out-edges of the hub head are incomparable.
        assert!(!edge_precedes(&net, EdgeId(4), EdgeId(5)).unwrap());
        assert!(!edge_precedes(&net, EdgeId(5), EdgeId(4)).unwrap());
    }

    #[test]
    fn nonsolvability_witness_on_designed_pair() {
        let net = fixtures::nonsolvable_witness();
        let id = Labeling::identity();
        assert!(is_nonsolvability_witness(
            &net,
            fixtures::WITNESS_E1,
            fixtures::WITNESS_E2,
            &id
        )
        .unwrap());
        // The conditions are asymmetric: swapping the roles of e1 and e2
        // breaks condition 1.
        assert!(!is_nonsolvability_witness(
            &net,
            fixtures::WITNESS_E2,
            fixtures::WITNESS_E1,
            &id
        )
        .unwrap());
        // A pair with itself is never a witness.
        assert!(!is_nonsolvability_witness(
            &net,
            fixtures::WITNESS_E1,
            fixtures::WITNESS_E1,
            &id
        )
        .unwrap());
    }

    #[test]
    fn nonsolvability_witness_found_under_permuted_node_lists() {
        // The same graph with sources and terminals listed in a different
        // order still has a witness, under the labeling that restores the
        // designed roles.
        let net = SumNetwork::new(
            10,
            &[
                (0, 3),
                (2, 3),
                (3, 4),
                (4, 7),
                (4, 9),
                (1, 5),
                (2, 5),
                (5, 6),
                (6, 8),
                (6, 9),
                (0, 8),
                (1, 7),
            ],
            &[1, 2, 0],
            &[8, 9, 7],
        )
        .unwrap();
        let lab = Labeling::new([2, 0, 1], [2, 0, 1]).unwrap();
        assert!(is_nonsolvability_witness(
            &net,
            fixtures::WITNESS_E1,
            fixtures::WITNESS_E2,
            &lab
        )
        .unwrap());
        assert!(matches!(
            classify(&net).unwrap(),
            SolvabilityClass::Nonsolvable(_)
        ));
    }

    #[test]
    fn no_witness_in_nine_disjoint_under_any_pair_or_labeling() {
        let net = fixtures::nine_disjoint();
        let ids: Vec<EdgeId> = net.edges().iter().map(|e| e.id).collect();
        for &e1 in &ids {
            for &e2 in &ids {
                for lab in all_labelings() {
                    assert!(!is_nonsolvability_witness(&net, e1, e2, &lab).unwrap());
                    assert!(!is_f2_exception_witness(&net, e1, e2, &lab).unwrap());
                }
            }
        }
    }

    #[test]
    fn no_f2_exception_witness_in_bottleneck() {
        let net = fixtures::bottleneck();
        let ids: Vec<EdgeId> = net.edges().iter().map(|e| e.id).collect();
        for &e1 in &ids {
            for &e2 in &ids {
                for lab in all_labelings() {
                    assert!(!is_f2_exception_witness(&net, e1, e2, &lab).unwrap());
                }
            }
        }
    }

    #[test]
    fn f2_exception_witness_on_designed_pair() {
        let net = fixtures::f2_exception_witness();
        let id = Labeling::identity();
        assert!(is_f2_exception_witness(
            &net,
            fixtures::WITNESS_E1,
            fixtures::WITNESS_E2,
            &id
        )
        .unwrap());
        // In the nonsolvable fixture the same pair disconnects a third
        // source-terminal pair each, so "exactly" fails.
        let strict = fixtures::nonsolvable_witness();
        assert!(!is_f2_exception_witness(
            &strict,
            fixtures::WITNESS_E1,
            fixtures::WITNESS_E2,
            &id
        )
        .unwrap());
    }

    #[test]
    fn classify_examples() {
        let bottleneck = classify(&fixtures::bottleneck()).unwrap();
        assert_eq!(bottleneck, SolvabilityClass::SolvableAllFields);
        assert_eq!(bottleneck.capacity_note(), ">=1");
        assert!(bottleneck.witness().is_none());

        let nonsolvable = classify(&fixtures::nonsolvable_witness()).unwrap();
        assert_eq!(nonsolvable.capacity_note(), "2/3");
        let w = nonsolvable.witness().expect("witness is attached");
        assert!(is_nonsolvability_witness(
            &fixtures::nonsolvable_witness(),
            w.e1,
            w.e2,
            &w.labeling
        )
        .unwrap());

        let except = classify(&fixtures::f2_exception_witness()).unwrap();
        assert_eq!(except.capacity_note(), ">=1");
        assert!(matches!(except, SolvabilityClass::SolvableExceptF2(_)));
        let w = except.witness().expect("witness is attached");
        assert!(is_f2_exception_witness(
            &fixtures::f2_exception_witness(),
            w.e1,
            w.e2,
            &w.labeling
        )
        .unwrap());

        let disconnected = classify(&fixtures::disconnected()).unwrap();
        assert_eq!(disconnected, SolvabilityClass::NotConnected);
        assert_eq!(disconnected.capacity_note(), "0");
    }

    #[test]
    fn classify_rejects_wrong_arity() {
        let net = SumNetwork::new(4, &[(0, 2), (1, 3), (0, 3), (1, 2)], &[0, 1], &[2, 3]).unwrap();
        assert_eq!(classify(&net), Err(ClassifierError::NotThreeByThree));
        assert_eq!(classify_full_search(&net), Err(ClassifierError::NotThreeByThree));
    }

    #[test]
    fn full_search_agrees_on_fixtures() {
        for net in [
            fixtures::bottleneck(),
            fixtures::nine_disjoint(),
            fixtures::nonsolvable_witness(),
            fixtures::f2_exception_witness(),
            fixtures::disconnected(),
        ] {
            let fast = classify(&net).unwrap();
            let full = classify_full_search(&net).unwrap();
            assert_eq!(fast.name(), full.name());
        }
    }

    /// Random layered 3s/3t nets (sources 0..3, terminals last three).
    fn arb_sum_net() -> impl Strategy<Value = SumNetwork> {
        (0u32..3, prop::collection::vec((0u32..64, 0u32..64), 3..12)).prop_map(
            |(internals, raw)| {
                let n = 6 + internals;
                let tails = 3 + internals;
                let edges: Vec<(u32, u32)> = raw
                    .into_iter()
                    .map(|(a, b)| {
                        let tail = a % tails;
                        let lo = if tail < 3 { 3 } else { tail + 1 };
                        let head = lo + b % (n - lo);
                        (tail, head)
                    })
                    .collect();
                SumNetwork::new(n, &edges, &[0, 1, 2], &[n - 3, n - 2, n - 1]).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// The shortcut lemmas agree with the exhaustive witness search.
        #[test]
        fn shortcuts_agree_with_full_search(net in arb_sum_net()) {
            let fast = classify(&net).unwrap();
            let full = classify_full_search(&net).unwrap();
            prop_assert_eq!(fast.name(), full.name());
        }

        /// The class is invariant under reversing every edge and swapping
        /// source and terminal roles.
        #[test]
        fn class_is_reversal_invariant(net in arb_sum_net()) {
            let fwd = classify(&net).unwrap();
            let bwd = classify(&net.reverse()).unwrap();
            prop_assert_eq!(fwd.name(), bwd.name());
        }

        /// Any returned witness re-verifies from scratch.
        #[test]
        fn witnesses_reverify(net in arb_sum_net()) {
            match classify(&net).unwrap() {
                SolvabilityClass::Nonsolvable(w) => {
                    prop_assert!(is_nonsolvability_witness(&net, w.e1, w.e2, &w.labeling).unwrap());
                }
                SolvabilityClass::SolvableExceptF2(w) => {
                    prop_assert!(is_f2_exception_witness(&net, w.e1, w.e2, &w.labeling).unwrap());
                }
                _ => {}
            }
        }
    }
}
