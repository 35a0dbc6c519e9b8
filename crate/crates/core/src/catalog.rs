//! Named graph families with literature annotations. The annotations are
//! informational only; verdicts elsewhere rest exclusively on computed
//! certificates.

use crate::graph::Graph;
use std::fmt;

/// What the literature says about a family, carried as a note. Never feeds
/// into any computed verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnownStatus {
    KnownWeaklyNorming(&'static str),
    KnownNotWeaklyNorming(&'static str),
    Unknown,
}

impl fmt::Display for KnownStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnownStatus::KnownWeaklyNorming(note) => write!(f, "known weakly norming ({note})"),
            KnownStatus::KnownNotWeaklyNorming(note) => {
                write!(f, "known not weakly norming ({note})")
            }
            KnownStatus::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub graph: Graph,
    pub known_status: KnownStatus,
}

/// Path on `n` vertices (`n - 1` edges).
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path edges are simple")
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are simple")
}

/// Star with one center (vertex 0) and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star edges are simple")
}

/// Complete bipartite graph on parts `{0..a}` and `{a..a+b}`, edges in
/// row-major order.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v)));
    Graph::new(a + b, edges).expect("complete bipartite edges are simple")
}

/// Hypercube on `2^d` vertices; edges flip one bit, ordered by vertex then
/// bit position.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    let edges = (0..n).flat_map(move |v| {
        (0..d).filter_map(move |bit| {
            let w = v ^ (1 << bit);
            (v < w).then_some((v, w))
        })
    });
    Graph::new(n, edges).expect("hypercube edges are simple")
}

/// Toroidal grid `C_m x C_n` (Cartesian product of two cycles), both
/// factors of length at least 3. Vertex `(i, j)` is `i * n + j`; each
/// vertex emits its rightward and downward wrap-around edges.
pub fn torus(m: usize, n: usize) -> Graph {
    assert!(m >= 3 && n >= 3, "torus factors need at least 3 vertices");
    let id = move |i: usize, j: usize| (i % m) * n + (j % n);
    let edges = (0..m).flat_map(move |i| {
        (0..n).flat_map(move |j| [(id(i, j), id(i, j + 1)), (id(i, j), id(i + 1, j))])
    });
    Graph::new(m * n, edges).expect("torus edges are simple")
}

const NOTE_COMPLETE_BIPARTITE: &str = "complete bipartite graphs are weakly norming (Hatami 2010)";
const NOTE_EVEN_CYCLE: &str = "even cycles are norming (Hatami 2010)";
const NOTE_HYPERCUBE: &str = "hypercubes are weakly norming (Hatami 2010)";
const NOTE_STAR: &str = "stars are weakly norming (Hatami 2010; Lovász 2012, ch. 14)";
const NOTE_ODD_CYCLE: &str = "odd cycles are not bipartite (Hatami 2010; Lovász 2012)";
const NOTE_PATH: &str = "degrees differ within a part (Hatami 2010, Thm 2.10)";
const NOTE_TORUS: &str =
    "toroidal grids C_2k x C_2k, k >= 3, are not weakly norming (Král', Martins, Pach, Wrochna 2019)";

/// Builds a named entry. Accepted names: `P<n>`, `C<n>`, `star_<n>`,
/// `K_<a>_<b>`, `Q<d>`, `torus_<m>_<n>` (and `K<n>` for complete graphs up
/// to K4, kept for counterexample inputs).
pub fn build(name: &str) -> Option<CatalogEntry> {
    let (graph, known_status) = parse_name(name)?;
    Some(CatalogEntry {
        name: name.to_string(),
        graph,
        known_status,
    })
}

fn parse_name(name: &str) -> Option<(Graph, KnownStatus)> {
    if let Some(rest) = name.strip_prefix("torus_") {
        let (m, n) = parse_pair(rest)?;
        let status = if m == n && m >= 6 && m % 2 == 0 {
            KnownStatus::KnownNotWeaklyNorming(NOTE_TORUS)
        } else {
            KnownStatus::Unknown
        };
        return Some((torus(m, n), status));
    }
    if let Some(rest) = name.strip_prefix("star_") {
        let leaves: usize = rest.parse().ok()?;
        return Some((star(leaves), KnownStatus::KnownWeaklyNorming(NOTE_STAR)));
    }
    if let Some(rest) = name.strip_prefix("K_") {
        let (a, b) = parse_pair(rest)?;
        (a >= 1 && b >= 1).then_some(())?;
        return Some((
            complete_bipartite(a, b),
            KnownStatus::KnownWeaklyNorming(NOTE_COMPLETE_BIPARTITE),
        ));
    }
    if let Some(rest) = name.strip_prefix('P') {
        let n: usize = rest.parse().ok()?;
        (n >= 1).then_some(())?;
        let status = match n {
            1 => KnownStatus::Unknown,
            2 => KnownStatus::KnownWeaklyNorming(NOTE_COMPLETE_BIPARTITE),
            3 => KnownStatus::KnownWeaklyNorming(NOTE_STAR),
            _ => KnownStatus::KnownNotWeaklyNorming(NOTE_PATH),
        };
        return Some((path(n), status));
    }
    if let Some(rest) = name.strip_prefix('C') {
        let n: usize = rest.parse().ok()?;
        (n >= 3).then_some(())?;
        let status = if n.is_multiple_of(2) {
            KnownStatus::KnownWeaklyNorming(NOTE_EVEN_CYCLE)
        } else {
            KnownStatus::KnownNotWeaklyNorming(NOTE_ODD_CYCLE)
        };
        return Some((cycle(n), status));
    }
    if let Some(rest) = name.strip_prefix('Q') {
        let d: u32 = rest.parse().ok()?;
        (1..=6).contains(&d).then_some(())?;
        return Some((hypercube(d), KnownStatus::KnownWeaklyNorming(NOTE_HYPERCUBE)));
    }
    if let Some(rest) = name.strip_prefix('K') {
        let n: usize = rest.parse().ok()?;
        (1..=4).contains(&n).then_some(())?;
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
        let graph = Graph::new(n, edges).expect("complete graph is simple");
        let status = if n >= 3 {
            KnownStatus::KnownNotWeaklyNorming(NOTE_ODD_CYCLE)
        } else {
            KnownStatus::KnownWeaklyNorming(NOTE_COMPLETE_BIPARTITE)
        };
        return Some((graph, status));
    }
    None
}

fn parse_pair(text: &str) -> Option<(usize, usize)> {
    let (a, b) = text.split_once('_')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// The curated listing shown by the command line.
pub fn listing() -> Vec<CatalogEntry> {
    [
        "P4", "C4", "C5", "C6", "K3", "star_3", "K_2_2", "K_2_3", "K_3_3", "Q3", "torus_6_6",
    ]
    .iter()
    .map(|name| build(name).expect("curated names are valid"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        assert_eq!(path(4).edge_count(), 3);
        assert_eq!(cycle(6).edge_count(), 6);
        assert_eq!(star(3).edge_count(), 3);
        assert_eq!(complete_bipartite(3, 3).edge_count(), 9);
        assert_eq!(hypercube(3).vertex_count(), 8);
        assert_eq!(hypercube(3).edge_count(), 12);
        let t = torus(6, 6);
        assert_eq!(t.vertex_count(), 36);
        assert_eq!(t.edge_count(), 72);
        assert!(t.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn named_builds() {
        assert_eq!(build("C6").unwrap().graph.vertex_count(), 6);
        assert_eq!(build("torus_6_6").unwrap().graph.edge_count(), 72);
        assert_eq!(build("Q3").unwrap().graph.edge_count(), 12);
        assert_eq!(build("K_2_3").unwrap().graph.edge_count(), 6);
        assert!(build("frobnicate").is_none());
        assert!(build("C2").is_none());
    }

    #[test]
    fn torus_4_4_smaller_grid_is_not_annotated() {
        assert_eq!(build("torus_4_4").unwrap().known_status, KnownStatus::Unknown);
        assert!(matches!(
            build("torus_6_6").unwrap().known_status,
            KnownStatus::KnownNotWeaklyNorming(_)
        ));
    }

    #[test]
    fn listing_is_buildable() {
        assert_eq!(listing().len(), 11);
    }
}
