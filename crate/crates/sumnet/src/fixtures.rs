//! Small example networks used across tests and documentation.
//!
//! All fixtures are 3-source / 3-terminal sum-networks with sources
//! `[NodeId(0), NodeId(1), NodeId(2)]` listed first.

use crate::multigraph::{EdgeId, SumNetwork};

/// Edge `e1` of [`nonsolvable_witness`] / [`f2_exception_witness`].
pub const WITNESS_E1: EdgeId = EdgeId(2);
/// Edge `e2` of [`nonsolvable_witness`] / [`f2_exception_witness`].
pub const WITNESS_E2: EdgeId = EdgeId(7);

/// All three sources feed one hub edge that feeds all three terminals.
///
/// Nodes: sources 0,1,2; hub tail 3; hub head 4; terminals 5,6,7.
/// The hub edge `EdgeId(3)` disconnects all nine source–terminal pairs.
pub fn bottleneck() -> SumNetwork {
    SumNetwork::new(
        8,
        &[(0, 3), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (4, 7)],
        &[0, 1, 2],
        &[5, 6, 7],
    )
    .expect("fixture is valid")
}

/// One direct edge from every source to every terminal; nine edge-disjoint
/// routes, every edge disconnects exactly its own pair.
pub fn nine_disjoint() -> SumNetwork {
    let mut edges = Vec::new();
    for s in 0..3u32 {
        for t in 3..6u32 {
            edges.push((s, t));
        }
    }
    SumNetwork::new(6, &edges, &[0, 1, 2], &[3, 4, 5]).expect("fixture is valid")
}

/// A connected network with no valid scalar code over any field.
///
/// Nodes: s1=0, s2=1, s3=2, u1=3, v1=4, u2=5, v2=6, t1=7, t2=8, t3=9.
///
/// Edges (id: tail→head): 0: s1→u1, 1: s3→u1, 2: u1→v1 (= `e1`),
/// 3: v1→t1, 4: v1→t3, 5: s2→u2, 6: s3→u2, 7: u2→v2 (= `e2`),
/// 8: v2→t2, 9: v2→t3, 10: s1→t2, 11: s2→t1.
///
/// Removing `e1` disconnects (s1,t1), (s1,t3), (s3,t1); removing `e2`
/// disconnects (s2,t2), (s2,t3), (s3,t2); removing both strands s3
/// entirely. The pair (`e1`, `e2`) satisfies all six nonsolvability
/// conditions under the identity labeling.
pub fn nonsolvable_witness() -> SumNetwork {
    SumNetwork::new(
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
        &[0, 1, 2],
        &[7, 8, 9],
    )
    .expect("fixture is valid")
}

/// A network solvable over every field except GF(2).
///
/// [`nonsolvable_witness`] plus two repair edges: 12: s1→t1 and
/// 13: s2→t2. Now removing `e1` disconnects exactly (s1,t3) and (s3,t1),
/// removing `e2` disconnects exactly (s2,t3) and (s3,t2), removing both
/// still strands s3, and neither of `e1`, `e2` precedes the other.
pub fn f2_exception_witness() -> SumNetwork {
    SumNetwork::new(
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
            (0, 7),
            (1, 8),
        ],
        &[0, 1, 2],
        &[7, 8, 9],
    )
    .expect("fixture is valid")
}

/// [`nonsolvable_witness`] without the s1→t2 edge: source s1 cannot reach
/// terminal t2, so the network is not a connected sum-network.
pub fn disconnected() -> SumNetwork {
    SumNetwork::new(
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
            (1, 7),
        ],
        &[0, 1, 2],
        &[7, 8, 9],
    )
    .expect("fixture is valid")
}
