//! Finite simple graphs with a stable edge index, their structure
//! (bipartition, components, degrees) and their symmetries (isomorphisms,
//! automorphisms, edge orbits).

mod graph6;
mod iso;

pub use graph6::Graph6Error;
pub(crate) use iso::find_isomorphism_where;
pub use iso::{
    automorphism_group, automorphism_group_capped, components_isomorphic, edge_orbits,
    edge_orbits_capped, find_isomorphism, is_edge_transitive, ComponentIsoReport,
    EdgeOrbitPartition, VertexMapping, DEFAULT_GROUP_CAP,
};

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) references a vertex >= {2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("edge index {index} out of range (graph has {edge_count} edges)")]
    EdgeIndexOutOfRange { index: usize, edge_count: usize },
    #[error("graph6: {0}")]
    Graph6(#[from] Graph6Error),
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error("graph has {0} vertices; symmetry search supports at most 64")]
    TooManyVertices(usize),
    #[error("automorphism group order exceeds the cap of {cap}")]
    GroupTooLarge { cap: u64 },
}

/// A finite simple graph. Edges are unordered pairs stored as `(i, j)` with
/// `i < j`; the position in the list is the edge's stable index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs may come in either vertex
    /// order; list order is preserved as the edge index.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut normalized = Vec::new();
        let mut seen = HashMap::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u, v));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::VertexOutOfRange(u, v, vertex_count));
            }
            let pair = (u.min(v), u.max(v));
            if seen.insert(pair, normalized.len()).is_some() {
                return Err(GraphError::DuplicateEdge(pair.0, pair.1));
            }
            normalized.push(pair);
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(i, j) in &normalized {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            vertex_count,
            edges: normalized,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Result<(usize, usize), GraphError> {
        self.edges
            .get(index)
            .copied()
            .ok_or(GraphError::EdgeIndexOutOfRange {
                index,
                edge_count: self.edges.len(),
            })
    }

    /// Index of the edge `{u, v}`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let pair = (u.min(v), u.max(v));
        self.edges.iter().position(|&e| e == pair)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Same vertex set, edges minus the one at `index`; remaining edges keep
    /// their relative order.
    pub fn delete_edge(&self, index: usize) -> Result<Graph, GraphError> {
        self.edge(index)?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != index)
            .map(|(_, &e)| e);
        Graph::new(self.vertex_count, edges)
    }

    /// Relabels vertices: vertex `v` becomes `permutation[v]`. Edge order is
    /// preserved, so edge `l` of the result is the image of edge `l`.
    pub fn relabel(&self, permutation: &[usize]) -> Result<Graph, GraphError> {
        assert_eq!(permutation.len(), self.vertex_count, "permutation length");
        Graph::new(
            self.vertex_count,
            self.edges
                .iter()
                .map(|&(i, j)| (permutation[i], permutation[j])),
        )
    }

    /// Disjoint union; vertices of `other` are shifted past `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(i, j)| (i + shift, j + shift)));
        Graph::new(self.vertex_count + other.vertex_count, edges)
            .expect("disjoint union of valid graphs is valid")
    }

    /// Maximal connected vertex sets, each sorted, ordered by smallest
    /// member. Singletons are included.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut component = vec![usize::MAX; self.vertex_count];
        let mut components = Vec::new();
        for start in 0..self.vertex_count {
            if component[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            component[start] = id;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for &w in self.neighbors(v) {
                    if component[w] == usize::MAX {
                        component[w] = id;
                        members.push(w);
                        queue.push(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// The subgraph induced on `vertices` (which must be sorted and
    /// duplicate-free), relabeled to `0..vertices.len()`. Edges keep the
    /// relative order they have in `self`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut position = HashMap::new();
        for (new, &old) in vertices.iter().enumerate() {
            position.insert(old, new);
        }
        let edges = self.edges.iter().filter_map(|&(i, j)| {
            match (position.get(&i), position.get(&j)) {
                (Some(&a), Some(&b)) => Some((a, b)),
                _ => None,
            }
        });
        Graph::new(vertices.len(), edges).expect("induced subgraph of valid graph is valid")
    }

    /// Parses the graph6 format (printable ASCII, offset 63).
    pub fn from_graph6(text: &str) -> Result<Graph, GraphError> {
        Ok(graph6::parse(text)?)
    }

    /// Encodes into graph6, bit-exact per the published format.
    pub fn to_graph6(&self) -> String {
        graph6::encode(self)
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#` starts
    /// a comment. The vertex count is one past the largest index mentioned.
    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        let mut max_vertex = None::<usize>;
        for (num, raw) in text.lines().enumerate() {
            let line = num + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let u = parse_vertex(parts.next(), line)?;
            let v = parse_vertex(parts.next(), line)?;
            if let Some(extra) = parts.next() {
                return Err(GraphError::EdgeList {
                    line,
                    message: format!("unexpected trailing token {extra:?}"),
                });
            }
            max_vertex = Some(max_vertex.unwrap_or(0).max(u).max(v));
            edges.push((u, v));
        }
        Graph::new(max_vertex.map_or(0, |m| m + 1), edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    /// Two-colors every component, anchoring its smallest vertex in part A.
    /// On failure returns an odd closed walk as the certificate.
    pub fn bipartition(&self) -> Result<Bipartition, OddClosedWalk> {
        let mut color = vec![u8::MAX; self.vertex_count];
        let mut parent = vec![usize::MAX; self.vertex_count];
        for anchor in 0..self.vertex_count {
            if color[anchor] != u8::MAX {
                continue;
            }
            color[anchor] = 0;
            let mut queue = std::collections::VecDeque::from([anchor]);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        parent[w] = v;
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return Err(odd_closed_walk(&parent, v, w));
                    }
                }
            }
        }
        let part_a: Vec<usize> = (0..self.vertex_count).filter(|&v| color[v] == 0).collect();
        let part_b: Vec<usize> = (0..self.vertex_count).filter(|&v| color[v] == 1).collect();
        let degree_a = common_degree(self, &part_a);
        let degree_b = common_degree(self, &part_b);
        Ok(Bipartition {
            part_a,
            part_b,
            degree_a,
            degree_b,
        })
    }

    /// `Some(bipartition)` iff the graph has no odd cycle.
    pub fn is_bipartite(&self) -> Option<Bipartition> {
        self.bipartition().ok()
    }
}

fn parse_vertex(token: Option<&str>, line: usize) -> Result<usize, GraphError> {
    let token = token.ok_or(GraphError::EdgeList {
        line,
        message: "expected two vertex indices".into(),
    })?;
    token.parse().map_err(|_| GraphError::EdgeList {
        line,
        message: format!("invalid vertex index {token:?}"),
    })
}

fn common_degree(g: &Graph, part: &[usize]) -> Option<usize> {
    let mut degrees = part.iter().map(|&v| g.degree(v));
    let first = degrees.next().unwrap_or(0);
    degrees.all(|d| d == first).then_some(first)
}

/// Builds the closed walk `u -> ... -> root -> ... -> v -> u` from BFS
/// parents when the edge `{u, v}` joins two same-colored vertices. Its
/// length is odd because `u` and `v` sit at equal-parity depths.
fn odd_closed_walk(parent: &[usize], u: usize, v: usize) -> OddClosedWalk {
    let climb = |mut x: usize| {
        let mut path = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            path.push(x);
        }
        path
    };
    let mut walk = climb(u); // u up to the root
    let mut down = climb(v);
    down.reverse(); // root down to v
    walk.extend_from_slice(&down[1..]);
    walk.push(u); // close along the offending edge
    OddClosedWalk { vertices: walk }
}

/// Certificate of non-bipartiteness: a closed walk of odd length, given as
/// the vertex sequence with the first vertex repeated at the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddClosedWalk {
    pub vertices: Vec<usize>,
}

impl OddClosedWalk {
    /// Number of edges traversed.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }

    /// Checks the walk in `g`: closed, odd, every step an edge.
    pub fn verify(&self, g: &Graph) -> bool {
        self.vertices.first() == self.vertices.last()
            && self.len() % 2 == 1
            && self
                .vertices
                .windows(2)
                .all(|w| g.has_edge(w[0], w[1]))
    }
}

/// A two-coloring of the vertex set. For disconnected graphs each
/// component's smallest vertex is anchored in part A. A part's degree is
/// present iff all its vertices share one degree (an empty part reports
/// degree zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
    pub degree_a: Option<usize>,
    pub degree_b: Option<usize>,
}

impl Bipartition {
    /// True if every edge of `g` crosses the parts and the parts cover all
    /// vertices exactly once.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut side = vec![u8::MAX; g.vertex_count()];
        for &v in &self.part_a {
            if v >= side.len() || side[v] != u8::MAX {
                return false;
            }
            side[v] = 0;
        }
        for &v in &self.part_b {
            if v >= side.len() || side[v] != u8::MAX {
                return false;
            }
            side[v] = 1;
        }
        side.iter().all(|&s| s != u8::MAX)
            && g.edges().iter().all(|&(i, j)| side[i] != side[j])
    }
}

/// Common part degrees `(a, b)` with `a <= b`, present iff both parts are
/// degree-regular. The parts are swapped if needed so `a <= b`.
pub fn part_degrees(g: &Graph, bipartition: &Bipartition) -> Option<(usize, usize)> {
    debug_assert!(bipartition.is_valid_for(g));
    let a = common_degree(g, &bipartition.part_a)?;
    let b = common_degree(g, &bipartition.part_b)?;
    Some((a.min(b), a.max(b)))
}

#[cfg(test)]
mod tests;
