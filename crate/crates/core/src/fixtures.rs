//! Worked examples used by the test-suites, the `verify` command and the demo.

use crate::compatibility::CompatSite;
use crate::dataset::DataSet;
use crate::fatgraph::FatGraph;
use crate::necklace::{LinearChain, Necklace};

fn ds(n: i64, g0: i64, pairs: &[(i64, i64)]) -> DataSet {
    DataSet::with_pairs(n, g0, pairs).expect("fixture data set is valid")
}

/// Six spherical Type 1 actions of order 42 that chain into a genus 155 action.
///
/// The third bead is stored as `(23,42),(8,21),(1,14)` so that its surviving
/// pairs appear in `D_T` in the order the self pairs of the necklace expect.
pub fn example_beads() -> [DataSet; 6] {
    [
        ds(42, 0, &[(2, 21), (19, 42), (19, 42)]),
        ds(42, 0, &[(5, 6), (13, 21), (23, 42)]),
        ds(42, 0, &[(23, 42), (8, 21), (1, 14)]),
        ds(42, 0, &[(1, 6), (11, 21), (13, 42)]),
        ds(42, 0, &[(13, 14), (10, 21), (25, 42)]),
        ds(42, 0, &[(19, 21), (17, 42), (29, 42)]),
    ]
}

pub fn example_links() -> Vec<CompatSite> {
    vec![
        CompatSite::new(3, 3),
        CompatSite::new(2, 2),
        CompatSite::FULL,
        CompatSite::new(2, 2),
        CompatSite::new(3, 2),
    ]
}

/// The ten-pair action on `S_155`, pairs in chain order.
pub fn example_chain_result() -> DataSet {
    ds(
        42,
        0,
        &[
            (2, 21),
            (19, 42),
            (5, 6),
            (23, 42),
            (1, 14),
            (1, 6),
            (13, 42),
            (13, 14),
            (19, 21),
            (29, 42),
        ],
    )
}

pub fn example_chain() -> LinearChain {
    LinearChain::new(example_beads().to_vec(), example_links())
}

/// Chain plus four self compatibilities and three toral subtractions:
/// realizes `(42,1;(5,6),(1,6))` on `S_36`.
pub fn example_necklace() -> Necklace {
    Necklace::new(example_chain(), vec![(1, 9), (2, 4), (5, 8), (7, 10)], 0, 3)
}

pub fn example_necklace_target() -> DataSet {
    ds(42, 1, &[(5, 6), (1, 6)])
}

/// `(5,1;(1,5),(2,5),(2,5))` as one bead plus a handle.
pub fn two_necklaces_first() -> Necklace {
    let bead = ds(5, 0, &[(1, 5), (2, 5), (2, 5)]);
    Necklace::new(LinearChain::new(vec![bead], vec![]), vec![], 1, 0)
}

/// The same action from three beads and one self compatibility.
pub fn two_necklaces_second() -> Necklace {
    let beads = vec![
        ds(5, 0, &[(1, 5), (1, 5), (3, 5)]),
        ds(5, 0, &[(2, 5), (4, 5), (4, 5)]),
        ds(5, 0, &[(1, 5), (2, 5), (2, 5)]),
    ];
    let links = vec![CompatSite::new(3, 1), CompatSite::new(2, 1)];
    Necklace::new(LinearChain::new(beads, links), vec![(1, 3)], 0, 0)
}

pub fn two_necklaces_target() -> DataSet {
    ds(5, 1, &[(1, 5), (2, 5), (2, 5)])
}

/// Boundary word of the minimal filling graph of genus 2 with three curves.
pub const GAMMA1_WORD: &str = "e1 e2^-1 e3 e6^-1 e3^-1 e4 e1^-1 e2 e5^-1 e6 e5 e4^-1";

/// Boundary word of the minimal filling graph of genus 2 with four curves.
pub const GAMMA2_WORD: &str = "f1 f3 f5 f6^-1 f5^-1 f2^-1 f1^-1 f2 f4 f6 f4^-1 f3^-1";

pub fn gamma1() -> FatGraph {
    FatGraph::from_boundary_word(GAMMA1_WORD).expect("fixture word is valid")
}

pub fn gamma2() -> FatGraph {
    FatGraph::from_boundary_word(GAMMA2_WORD).expect("fixture word is valid")
}

/// One vertex with rotation `(a, b, a^-1, b^-1)`: two curves filling the torus.
pub fn torus_graph() -> FatGraph {
    FatGraph::build(&[vec![0, 1, 2, 3]], &[(0, 2), (1, 3)]).expect("fixture graph is valid")
}
