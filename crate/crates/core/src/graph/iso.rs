//! Isomorphism and automorphism search by backtracking over iteratively
//! degree-refined vertex partitions, with lowest-index-first tie-breaking,
//! plus edge orbits under the full automorphism group.

use super::{Graph, GraphError};
use std::collections::BTreeMap;
use std::ops::ControlFlow;

/// Default cap on the enumerated automorphism group order.
pub const DEFAULT_GROUP_CAP: u64 = crate::tol::GROUP_ORDER_CAP;

/// A vertex map recorded as the image vector: vertex `v` maps to
/// `image[v]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexMapping {
    image: Vec<usize>,
}

impl VertexMapping {
    pub fn new(image: Vec<usize>) -> Self {
        Self { image }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// Image of an unordered pair, normalized to `(min, max)`.
    pub fn apply_edge(&self, (i, j): (usize, usize)) -> (usize, usize) {
        let (a, b) = (self.image[i], self.image[j]);
        (a.min(b), a.max(b))
    }

    /// `self.compose(first)` maps `v` to `self(first(v))`.
    pub fn compose(&self, first: &VertexMapping) -> VertexMapping {
        VertexMapping {
            image: first.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> VertexMapping {
        let mut image = vec![0; self.image.len()];
        for (v, &w) in self.image.iter().enumerate() {
            image[w] = v;
        }
        VertexMapping { image }
    }

    /// Exhaustive adjacency check over all vertex pairs:
    /// `{u, v} ∈ E(f) ⇔ {image(u), image(v)} ∈ E(g)`.
    pub fn is_isomorphism(&self, f: &Graph, g: &Graph) -> bool {
        if self.image.len() != f.vertex_count()
            || f.vertex_count() != g.vertex_count()
            || f.edge_count() != g.edge_count()
        {
            return false;
        }
        let mut used = vec![false; self.image.len()];
        for &w in &self.image {
            if w >= used.len() || used[w] {
                return false;
            }
            used[w] = true;
        }
        for u in 0..f.vertex_count() {
            for v in (u + 1)..f.vertex_count() {
                if f.has_edge(u, v) != g.has_edge(self.image[u], self.image[v]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_automorphism(&self, g: &Graph) -> bool {
        self.is_isomorphism(g, g)
    }
}

/// Iterated neighborhood-degree refinement run jointly on both graphs so
/// the color ids are comparable. Returns `None` as soon as the color
/// class sizes disagree (then no isomorphism exists).
fn joint_refinement(f: &Graph, g: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut colors_f: Vec<usize> = f.degrees();
    let mut colors_g: Vec<usize> = g.degrees();
    loop {
        if class_sizes(&colors_f) != class_sizes(&colors_g) {
            return None;
        }
        let signature = |graph: &Graph, colors: &[usize], v: usize| {
            let mut neighborhood: Vec<usize> =
                graph.neighbors(v).iter().map(|&w| colors[w]).collect();
            neighborhood.sort_unstable();
            (colors[v], neighborhood)
        };
        let mut ids = BTreeMap::new();
        for v in 0..f.vertex_count() {
            let len = ids.len();
            ids.entry(signature(f, &colors_f, v)).or_insert(len);
        }
        for v in 0..g.vertex_count() {
            let len = ids.len();
            ids.entry(signature(g, &colors_g, v)).or_insert(len);
        }
        let next_f: Vec<usize> = (0..f.vertex_count())
            .map(|v| ids[&signature(f, &colors_f, v)])
            .collect();
        let next_g: Vec<usize> = (0..g.vertex_count())
            .map(|v| ids[&signature(g, &colors_g, v)])
            .collect();
        // Refinement is monotone; it has stabilized once the number of
        // classes stops growing.
        let stable = distinct(&next_f, &next_g) == distinct(&colors_f, &colors_g);
        colors_f = next_f;
        colors_g = next_g;
        if stable {
            if class_sizes(&colors_f) != class_sizes(&colors_g) {
                return None;
            }
            return Some((colors_f, colors_g));
        }
    }
}

fn distinct(a: &[usize], b: &[usize]) -> usize {
    let mut ids: Vec<usize> = a.iter().chain(b).copied().collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}

fn class_sizes(colors: &[usize]) -> BTreeMap<usize, usize> {
    let mut sizes = BTreeMap::new();
    for &c in colors {
        *sizes.entry(c).or_insert(0) += 1;
    }
    sizes
}

/// Deterministic processing order: start in the smallest color class, then
/// greedily take the vertex with the most already-ordered neighbors
/// (ties: smaller color class, then lowest index).
fn search_order(f: &Graph, colors: &[usize]) -> Vec<usize> {
    let n = f.vertex_count();
    let sizes = class_sizes(colors);
    let mut ordered = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut mapped_neighbors = vec![0usize; n];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                (
                    usize::MAX - mapped_neighbors[v],
                    sizes[&colors[v]],
                    colors[v],
                    v,
                )
            })
            .expect("an unplaced vertex remains");
        placed[next] = true;
        ordered.push(next);
        for &w in f.neighbors(next) {
            mapped_neighbors[w] += 1;
        }
    }
    ordered
}

/// Backtracking core. Visits every color-respecting, adjacency-consistent
/// bijection `f -> g` in a deterministic order; the visitor can stop the
/// search early.
fn search_bijections(
    f: &Graph,
    g: &Graph,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> bool {
    let n = f.vertex_count();
    if n != g.vertex_count() || f.edge_count() != g.edge_count() {
        return true;
    }
    let Some((colors_f, colors_g)) = joint_refinement(f, g) else {
        return true;
    };
    let order = search_order(f, &colors_f);
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];

    #[allow(clippy::too_many_arguments)]
    fn descend(
        f: &Graph,
        g: &Graph,
        order: &[usize],
        colors_f: &[usize],
        colors_g: &[usize],
        depth: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if depth == order.len() {
            return visit(image);
        }
        let v = order[depth];
        'candidates: for u in 0..g.vertex_count() {
            if used[u] || colors_g[u] != colors_f[v] {
                continue;
            }
            for &w in &order[..depth] {
                if f.has_edge(v, w) != g.has_edge(u, image[w]) {
                    continue 'candidates;
                }
            }
            image[v] = u;
            used[u] = true;
            let flow = descend(f, g, order, colors_f, colors_g, depth + 1, image, used, visit);
            image[v] = usize::MAX;
            used[u] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }

    descend(
        f, g, &order, &colors_f, &colors_g, 0, &mut image, &mut used, &mut visit,
    )
    .is_continue()
}

/// First isomorphism `f -> g` in the canonical search order, if any.
pub fn find_isomorphism(f: &Graph, g: &Graph) -> Option<VertexMapping> {
    find_isomorphism_where(f, g, |_| true)
}

/// First isomorphism satisfying the predicate.
pub(crate) fn find_isomorphism_where(
    f: &Graph,
    g: &Graph,
    mut predicate: impl FnMut(&VertexMapping) -> bool,
) -> Option<VertexMapping> {
    let mut found = None;
    search_bijections(f, g, |image| {
        let mapping = VertexMapping::new(image.to_vec());
        if predicate(&mapping) {
            found = Some(mapping);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// The full automorphism group, identity first, sorted by image vector.
/// Fails above 64 vertices or when the group order exceeds `cap`.
pub fn automorphism_group_capped(g: &Graph, cap: u64) -> Result<Vec<VertexMapping>, GraphError> {
    if g.vertex_count() > 64 {
        return Err(GraphError::TooManyVertices(g.vertex_count()));
    }
    let mut group = Vec::new();
    let mut overflow = false;
    search_bijections(g, g, |image| {
        if group.len() as u64 >= cap {
            overflow = true;
            return ControlFlow::Break(());
        }
        group.push(VertexMapping::new(image.to_vec()));
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(GraphError::GroupTooLarge { cap });
    }
    group.sort();
    Ok(group)
}

pub fn automorphism_group(g: &Graph) -> Result<Vec<VertexMapping>, GraphError> {
    automorphism_group_capped(g, DEFAULT_GROUP_CAP)
}

/// Partition of the edge indices into orbits under the automorphism group.
/// Each edge stores a witness automorphism from its orbit representative;
/// witnesses between arbitrary same-orbit edges are compositions.
#[derive(Debug, Clone)]
pub struct EdgeOrbitPartition {
    orbits: Vec<Vec<usize>>,
    representative: Vec<usize>,
    witness_from_representative: Vec<VertexMapping>,
}

impl EdgeOrbitPartition {
    /// Orbits sorted internally and by smallest member.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    /// Representative edge of the orbit containing `edge`.
    pub fn representative(&self, edge: usize) -> usize {
        self.representative[edge]
    }

    /// An automorphism mapping `from` onto `to`, when both are in the same
    /// orbit. Built by composing the stored witnesses.
    pub fn witness_between(&self, from: usize, to: usize) -> Option<VertexMapping> {
        if self.representative[from] != self.representative[to] {
            return None;
        }
        let to_from = &self.witness_from_representative[from];
        let to_to = &self.witness_from_representative[to];
        Some(to_to.compose(&to_from.inverse()))
    }
}

/// Computes edge orbits from the full automorphism group. An edgeless
/// graph has an empty partition and needs no group enumeration.
pub fn edge_orbits(g: &Graph) -> Result<EdgeOrbitPartition, GraphError> {
    edge_orbits_capped(g, DEFAULT_GROUP_CAP)
}

pub fn edge_orbits_capped(g: &Graph, cap: u64) -> Result<EdgeOrbitPartition, GraphError> {
    let k = g.edge_count();
    if k == 0 {
        return Ok(EdgeOrbitPartition {
            orbits: Vec::new(),
            representative: Vec::new(),
            witness_from_representative: Vec::new(),
        });
    }
    let group = automorphism_group_capped(g, cap)?;
    let identity = VertexMapping::identity(g.vertex_count());
    let mut representative = vec![usize::MAX; k];
    let mut witness: Vec<VertexMapping> = vec![identity; k];
    let mut orbits = Vec::new();
    for start in 0..k {
        if representative[start] != usize::MAX {
            continue;
        }
        representative[start] = start;
        let mut orbit = vec![start];
        let mut frontier = vec![start];
        while let Some(edge) = frontier.pop() {
            let pair = g.edges()[edge];
            for pi in &group {
                let image_pair = pi.apply_edge(pair);
                let image = g
                    .edge_index(image_pair.0, image_pair.1)
                    .expect("automorphism maps edges to edges");
                if representative[image] == usize::MAX {
                    representative[image] = start;
                    witness[image] = pi.compose(&witness[edge]);
                    orbit.push(image);
                    frontier.push(image);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(EdgeOrbitPartition {
        orbits,
        representative,
        witness_from_representative: witness,
    })
}

/// True iff the automorphism group has at most one edge orbit. Edgeless
/// graphs count as edge-transitive.
pub fn is_edge_transitive(g: &Graph) -> Result<bool, GraphError> {
    Ok(edge_orbits(g)?.orbit_count() <= 1)
}

/// Outcome of comparing all non-singleton connected components.
#[derive(Debug, Clone)]
pub struct ComponentIsoReport {
    /// Non-singleton components, each a sorted vertex set.
    pub components: Vec<Vec<usize>>,
    /// How many vertices sit in singleton components.
    pub singleton_count: usize,
    /// Witness mapping component 0 onto component `i` (identity at 0);
    /// `None` where no isomorphism exists.
    pub witnesses: Vec<Option<VertexMapping>>,
}

impl ComponentIsoReport {
    pub fn all_isomorphic(&self) -> bool {
        self.witnesses.iter().all(Option::is_some)
    }
}

/// Checks that all non-singleton components are pairwise isomorphic by
/// mapping each onto the first.
pub fn components_isomorphic(g: &Graph) -> ComponentIsoReport {
    let all = g.connected_components();
    let singleton_count = all.iter().filter(|c| c.len() == 1).count();
    let components: Vec<Vec<usize>> = all.into_iter().filter(|c| c.len() > 1).collect();
    let witnesses = match components.split_first() {
        None => Vec::new(),
        Some((first, rest)) => {
            let reference = g.induced_subgraph(first);
            let mut witnesses = vec![Some(VertexMapping::identity(reference.vertex_count()))];
            witnesses.extend(
                rest.iter()
                    .map(|c| find_isomorphism(&reference, &g.induced_subgraph(c))),
            );
            witnesses
        }
    };
    ComponentIsoReport {
        components,
        singleton_count,
        witnesses,
    }
}
