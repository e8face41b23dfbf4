//! Colored simple graphs on vertices `1..=n`, the graphs derived from
//! colored trees, and the structural predicates used for classification.

use crate::tree::{ColoredTree, NodeId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

pub type Edge = (usize, usize);

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed graph document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("color `{0}` is used by both a vertex and an edge")]
    SharedColor(String),
    #[error("graph is not a block graph")]
    NotBlock,
    #[error("graph is disconnected")]
    Disconnected,
}

fn edge(i: usize, j: usize) -> Edge {
    (i.min(j), i.max(j))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    vertex_color: Vec<String>,
    edges: BTreeMap<Edge, String>,
    adj: Vec<BTreeSet<usize>>,
}

impl ColoredGraph {
    /// `vertex_color[v - 1]` is the token of vertex `v`.
    pub fn new(vertex_color: Vec<String>, edges: BTreeMap<Edge, String>) -> Result<Self, GraphError> {
        let n = vertex_color.len();
        let mut adj = vec![BTreeSet::new(); n + 1];
        for &(i, j) in edges.keys() {
            if i == 0 || i >= j || j > n {
                return Err(GraphError::Malformed(format!("bad edge ({i},{j}) for {n} vertices")));
            }
            adj[i].insert(j);
            adj[j].insert(i);
        }
        let vtok: BTreeSet<&str> = vertex_color.iter().map(String::as_str).collect();
        if let Some(tok) = edges.values().find(|t| vtok.contains(t.as_str())) {
            return Err(GraphError::SharedColor(tok.clone()));
        }
        Ok(ColoredGraph {
            n,
            vertex_color,
            edges,
            adj,
        })
    }

    /// All vertex and edge colors distinct: vertices are `"v"`-ids, edges `"{i,j}"`.
    pub fn uncolored(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        let vc = (1..=n).map(|v| format!("v{v}")).collect();
        let es = edges
            .into_iter()
            .map(|(i, j)| {
                let e = edge(i, j);
                (e, format!("{{{},{}}}", e.0, e.1))
            })
            .collect();
        Self::new(vc, es)
    }

    pub fn complete(n: usize) -> Self {
        let es: Vec<Edge> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        Self::uncolored(n, es).expect("complete graph is well formed")
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        doc.to_graph()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    pub fn vertex_color(&self, v: usize) -> &str {
        &self.vertex_color[v - 1]
    }

    pub fn edge_color(&self, i: usize, j: usize) -> Option<&str> {
        self.edges.get(&edge(i, j)).map(String::as_str)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains_key(&edge(i, j))
    }

    pub fn edges(&self) -> &BTreeMap<Edge, String> {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n.saturating_sub(1)) / 2
    }

    /// Vertices adjacent to every other vertex.
    pub fn universal_vertices(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.degree(v) + 1 == self.n).collect()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_without(None)
    }

    fn components_without(&self, removed: Option<usize>) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n + 1];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] || Some(s) == removed {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] && Some(w) != removed {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Multiset of incident edge colors, sorted.
    fn incident_colors(&self, v: usize) -> Vec<&str> {
        let mut c: Vec<&str> = self.adj[v]
            .iter()
            .map(|&w| self.edge_color(v, w).expect("adjacent"))
            .collect();
        c.sort_unstable();
        c
    }

    /// Vertices grouped by color token.
    pub fn vertex_classes(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut out: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for v in self.vertices() {
            out.entry(self.vertex_color(v)).or_default().push(v);
        }
        out
    }

    /// Edges grouped by color token.
    pub fn edge_classes(&self) -> BTreeMap<&str, Vec<Edge>> {
        let mut out: BTreeMap<&str, Vec<Edge>> = BTreeMap::new();
        for (&e, c) in &self.edges {
            out.entry(c.as_str()).or_default().push(e);
        }
        out
    }

    /// Hop distances from `s`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, s: usize) -> Vec<Option<usize>> {
        let mut d = vec![None; self.n + 1];
        d[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let dv = d[v].expect("visited");
            for &w in &self.adj[v] {
                if d[w].is_none() {
                    d[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        d
    }

    /// Biconnected components as vertex sets (Hopcroft–Tarjan). Isolated
    /// vertices form singleton components.
    pub fn biconnected_components(&self) -> Vec<BTreeSet<usize>> {
        let n = self.n;
        let mut disc = vec![0usize; n + 1];
        let mut low = vec![0usize; n + 1];
        let mut time = 0;
        let mut out = Vec::new();
        let mut edge_stack: Vec<Edge> = Vec::new();

        for root in self.vertices() {
            if disc[root] != 0 {
                continue;
            }
            time += 1;
            disc[root] = time;
            low[root] = time;
            if self.adj[root].is_empty() {
                out.push(BTreeSet::from([root]));
                continue;
            }
            // iterative DFS: (vertex, parent, neighbor list, cursor)
            let mut stack: Vec<(usize, usize, Vec<usize>, usize)> =
                vec![(root, 0, self.adj[root].iter().copied().collect(), 0)];
            while let Some(top) = stack.last_mut() {
                let (v, parent) = (top.0, top.1);
                if top.3 < top.2.len() {
                    let w = top.2[top.3];
                    top.3 += 1;
                    if disc[w] == 0 {
                        edge_stack.push((v, w));
                        time += 1;
                        disc[w] = time;
                        low[w] = time;
                        stack.push((w, v, self.adj[w].iter().copied().collect(), 0));
                    } else if w != parent && disc[w] < disc[v] {
                        edge_stack.push((v, w));
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(up) = stack.last() {
                        let u = up.0;
                        low[u] = low[u].min(low[v]);
                        if low[v] >= disc[u] {
                            let mut comp = BTreeSet::new();
                            while let Some((a, b)) = edge_stack.pop() {
                                comp.insert(a);
                                comp.insert(b);
                                if (a, b) == (u, v) {
                                    break;
                                }
                            }
                            out.push(comp);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Cut vertices, ascending.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let base = self.components().len();
        self.vertices()
            .filter(|&c| self.degree(c) > 0 && self.components_without(Some(c)).len() > base)
            .collect()
    }

    /// Every biconnected component is a clique.
    pub fn is_block_graph(&self) -> bool {
        self.biconnected_components().iter().all(|comp| {
            let vs: Vec<usize> = comp.iter().copied().collect();
            vs.iter()
                .enumerate()
                .all(|(a, &u)| vs[a + 1..].iter().all(|&w| self.has_edge(u, w)))
        })
    }

    /// Four-point condition on shortest-path distances, per component: for
    /// every four vertices, the larger two of the three pair sums are equal.
    pub fn four_point_check(&self) -> bool {
        let dist: Vec<Vec<Option<usize>>> = std::iter::once(Vec::new())
            .chain(self.vertices().map(|s| self.bfs_distances(s)))
            .collect();
        for comp in self.components() {
            let d = |a: usize, b: usize| dist[a][b].expect("same component");
            let k = comp.len();
            for a in 0..k {
                for b in a + 1..k {
                    for c in b + 1..k {
                        for e in c + 1..k {
                            let (u, v, w, x) = (comp[a], comp[b], comp[c], comp[e]);
                            let mut s = [d(u, v) + d(w, x), d(u, w) + d(v, x), d(u, x) + d(v, w)];
                            s.sort_unstable();
                            if s[1] != s[2] {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Same-colored vertices see the same multiset of incident edge colors.
    pub fn is_vertex_regular(&self) -> bool {
        self.vertex_classes().values().all(|class| {
            let first = self.incident_colors(class[0]);
            class[1..].iter().all(|&v| self.incident_colors(v) == first)
        })
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            n_vertices: self.n,
            vertex_colors: self
                .vertices()
                .map(|v| (v.to_string(), self.vertex_color(v).to_string()))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(&(i, j), c)| EdgeEntry {
                    i,
                    j,
                    color: Some(c.clone()),
                })
                .collect(),
        }
    }
}

/// JSON graph form: `{"n_vertices": 3, "vertex_colors": {"1": "a"}, "edges": [{"i": 1, "j": 3}]}`.
/// Missing vertex colors default to `v<id>`, missing edge colors to `{i,j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub n_vertices: usize,
    #[serde(default)]
    pub vertex_colors: BTreeMap<String, String>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub i: usize,
    pub j: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
}

impl GraphDocument {
    pub fn to_graph(&self) -> Result<ColoredGraph, GraphError> {
        let mut vc: Vec<String> = (1..=self.n_vertices).map(|v| format!("v{v}")).collect();
        for (k, tok) in &self.vertex_colors {
            let v: usize = k
                .parse()
                .ok()
                .filter(|v| (1..=self.n_vertices).contains(v))
                .ok_or_else(|| GraphError::Malformed(format!("unknown vertex `{k}`")))?;
            vc[v - 1] = tok.clone();
        }
        let mut es = BTreeMap::new();
        for e in &self.edges {
            if e.i == e.j {
                return Err(GraphError::Malformed(format!("loop at {}", e.i)));
            }
            let key = edge(e.i, e.j);
            let tok = e.color.clone().unwrap_or_else(|| format!("{{{},{}}}", key.0, key.1));
            if es.insert(key, tok).is_some() {
                return Err(GraphError::Malformed(format!("duplicate edge {key:?}")));
            }
        }
        ColoredGraph::new(vc, es)
    }
}

/// The BMT-derived graph: `{i,j}` is an edge iff `lca(i,j)` is not zeroed,
/// colored by the lca's token.
pub fn derive_graph(t: &ColoredTree) -> ColoredGraph {
    let n = t.n_leaves();
    let vc = t
        .leaves()
        .map(|v| t.color(v).expect("leaf colors").to_string())
        .collect();
    let mut es = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let l = t.lca(i, j).expect("leaves exist");
            if let Some(c) = t.color(l) {
                es.insert((i, j), c.to_string());
            }
        }
    }
    ColoredGraph::new(vc, es).expect("tree colors keep leaves and internal nodes apart")
}

/// Every pair of same-colored leaves shares a parent.
pub fn vertex_regular_via_parents(t: &ColoredTree) -> bool {
    let mut by_color: BTreeMap<&str, BTreeSet<NodeId>> = BTreeMap::new();
    for v in t.leaves() {
        by_color
            .entry(t.color(v).expect("leaf colors"))
            .or_default()
            .insert(t.parent(v).expect("leaf parent"));
    }
    by_color.values().all(|parents| parents.len() == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarDecomposition {
    pub center: usize,
    pub cliques: Vec<Vec<usize>>,
}

/// A connected block graph written as cliques sharing one central vertex.
/// On complete graphs the smallest vertex is the center.
pub fn star_decomposition(g: &ColoredGraph) -> Result<Option<StarDecomposition>, GraphError> {
    star_decomposition_with_hint(g, None)
}

/// As [`star_decomposition`], with `hint` preferred as the center of a
/// complete graph (the leaf hanging off the top internal node).
pub fn star_decomposition_with_hint(
    g: &ColoredGraph,
    hint: Option<usize>,
) -> Result<Option<StarDecomposition>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if !g.is_block_graph() {
        return Err(GraphError::NotBlock);
    }
    let all: Vec<usize> = g.vertices().collect();
    if g.is_complete() {
        let center = hint.filter(|h| g.vertices().contains(h)).unwrap_or(1);
        return Ok(Some(StarDecomposition {
            center,
            cliques: vec![all],
        }));
    }
    let universal = g.universal_vertices();
    let [center] = universal.as_slice() else {
        return Ok(None);
    };
    let mut cliques = Vec::new();
    for comp in g.components_without(Some(*center)) {
        let is_clique = comp
            .iter()
            .enumerate()
            .all(|(a, &u)| comp[a + 1..].iter().all(|&w| g.has_edge(u, w)));
        if !is_clique {
            return Ok(None);
        }
        let mut c = comp;
        c.push(*center);
        c.sort_unstable();
        cliques.push(c);
    }
    Ok(Some(StarDecomposition {
        center: *center,
        cliques,
    }))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as representative for stable naming
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// The vertex-regular completion: the complete graph whose edge classes are
/// generated by `{i,k} ~ {j,k}` whenever `i` and `j` share a color.
///
/// Each class is named after its smallest edge, e.g. `{1,3}`; a trailing `'`
/// is appended if that collides with a vertex token.
pub fn completion(g: &ColoredGraph) -> ColoredGraph {
    let n = g.n();
    let all: Vec<Edge> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    let pos: BTreeMap<Edge, usize> = all.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut uf = UnionFind::new(all.len());
    for class in g.vertex_classes().values() {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                for k in 1..=n {
                    if k != i && k != j {
                        uf.union(pos[&edge(i, k)], pos[&edge(j, k)]);
                    }
                }
            }
        }
    }
    let vtok: BTreeSet<&str> = g.vertices().map(|v| g.vertex_color(v)).collect();
    let mut es = BTreeMap::new();
    for (k, &e) in all.iter().enumerate() {
        let rep = all[uf.find(k)];
        let mut name = format!("{{{},{}}}", rep.0, rep.1);
        while vtok.contains(name.as_str()) {
            name.push('\'');
        }
        es.insert(e, name);
    }
    ColoredGraph::new(g.vertex_color.clone(), es).expect("class names avoid vertex tokens")
}

/// A pair of row indices and a pair of column indices, each sorted.
pub type Quadruple = (Edge, Edge);

/// Row/column pairs of the 2×2 minors separated by a cut vertex `c`: the
/// non-`c` row vertices and non-`c` column vertices lie in different
/// components of `G − c`, and the pairs share at most `c`. Each minor is
/// listed once, with the smaller pair first.
pub fn one_clique_separated_quadruples(g: &ColoredGraph) -> Result<BTreeSet<Quadruple>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if !g.is_block_graph() {
        return Err(GraphError::NotBlock);
    }
    let n = g.n();
    let mut out = BTreeSet::new();
    for c in g.cut_vertices() {
        let mut label = vec![usize::MAX; n + 1];
        for (k, comp) in g.components_without(Some(c)).iter().enumerate() {
            for &v in comp {
                label[v] = k;
            }
        }
        let labels_of =
            |p: Edge| -> BTreeSet<usize> { [p.0, p.1].into_iter().filter(|&v| v != c).map(|v| label[v]).collect() };
        let pairs: Vec<Edge> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        for &r in &pairs {
            let lr = labels_of(r);
            for &s in &pairs {
                if r > s {
                    continue;
                }
                let shared: BTreeSet<usize> = [r.0, r.1].into_iter().filter(|v| *v == s.0 || *v == s.1).collect();
                if shared.iter().any(|&v| v != c) {
                    continue;
                }
                if lr.is_disjoint(&labels_of(s)) {
                    out.insert((r, s));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::*;

    /// Naive closure: repeat the identification rule until nothing changes.
    fn closure_oracle(g: &ColoredGraph) -> BTreeSet<BTreeSet<Edge>> {
        let n = g.n();
        let mut cls: BTreeMap<Edge, usize> = BTreeMap::new();
        let mut k = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                cls.insert((i, j), k);
                k += 1;
            }
        }
        loop {
            let mut changed = false;
            for i in 1..=n {
                for j in 1..=n {
                    if i == j || g.vertex_color(i) != g.vertex_color(j) {
                        continue;
                    }
                    for l in 1..=n {
                        if l == i || l == j {
                            continue;
                        }
                        let (a, b) = (cls[&edge(i, l)], cls[&edge(j, l)]);
                        if a != b {
                            let m = a.min(b);
                            for v in cls.values_mut() {
                                if *v == a || *v == b {
                                    *v = m;
                                }
                            }
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<Edge>> = BTreeMap::new();
        for (e, c) in cls {
            groups.entry(c).or_default().insert(e);
        }
        groups.into_values().collect()
    }

    fn classes(g: &ColoredGraph) -> BTreeSet<BTreeSet<Edge>> {
        g.edge_classes()
            .into_values()
            .map(|v| v.into_iter().collect())
            .collect()
    }

    fn colored(colors: &[&str], edges: &[Edge]) -> ColoredGraph {
        let es = edges.iter().map(|&(i, j)| (edge(i, j), format!("e{i}{j}"))).collect();
        ColoredGraph::new(colors.iter().map(|s| s.to_string()).collect(), es).unwrap()
    }

    #[test]
    fn zeroed_star_derived_graph() {
        let g = derive_graph(&zeroed_star());
        let es: Vec<Edge> = g.edges().keys().copied().collect();
        assert_eq!(es, vec![(1, 2), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(g.edge_color(1, 2), Some("red"));
        for e in [(1, 4), (2, 4), (3, 4)] {
            assert_eq!(g.edge_color(e.0, e.1), Some("blue"));
        }
        assert_eq!(g.vertex_color(1), g.vertex_color(2));
        let star = star_decomposition(&g).unwrap().unwrap();
        assert_eq!(star.center, 4);
        assert_eq!(star.cliques, vec![vec![1, 2, 4], vec![3, 4]]);
    }

    #[test]
    fn uncolored_tree_gives_complete_graph() {
        let g = derive_graph(&uncolored());
        assert!(g.is_complete());
        let tokens: BTreeSet<&str> = g.edges().values().map(String::as_str).collect();
        assert_eq!(tokens, BTreeSet::from(["5", "6", "7"]));
        let star = star_decomposition(&g).unwrap().unwrap();
        assert_eq!(star.center, 1);
        assert_eq!(star.cliques, vec![vec![1, 2, 3, 4]]);
    }

    #[test]
    fn block_predicates_agree_on_small_examples() {
        let path = ColoredGraph::uncolored(3, [(1, 3), (2, 3)]).unwrap();
        let c4 = ColoredGraph::uncolored(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let diamond = ColoredGraph::uncolored(4, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]).unwrap();
        let k4 = ColoredGraph::complete(4);
        for (g, block) in [(&path, true), (&c4, false), (&diamond, false), (&k4, true)] {
            assert_eq!(g.is_block_graph(), block);
            assert_eq!(g.four_point_check(), block);
        }
        let s = star_decomposition(&path).unwrap().unwrap();
        assert_eq!(s.center, 3);
        assert_eq!(s.cliques, vec![vec![1, 3], vec![2, 3]]);
        assert!(matches!(star_decomposition(&c4), Err(GraphError::NotBlock)));
    }

    #[test]
    fn block_graph_that_is_not_a_star() {
        // path 1-2-3-4: block, no universal vertex
        let g = ColoredGraph::uncolored(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(g.is_block_graph());
        assert_eq!(star_decomposition(&g).unwrap(), None);
        assert_eq!(g.cut_vertices(), vec![2, 3]);
    }

    #[test]
    fn vertex_regularity_examples() {
        let t = uncolored();
        let g1 = derive_graph(&with_colors(
            &t,
            &[(1, "yellow"), (2, "yellow"), (3, "magenta"), (4, "violet")],
            &[],
        ));
        assert!(g1.is_vertex_regular());
        let g3 = derive_graph(&with_colors(
            &t,
            &[(1, "cyan"), (4, "cyan"), (2, "yellow"), (3, "magenta")],
            &[],
        ));
        assert!(!g3.is_vertex_regular());
        assert!(ColoredGraph::complete(5).is_vertex_regular());
    }

    #[test]
    fn completion_examples() {
        let g = colored(&["y", "y", "m", "v"], &[(1, 2), (3, 4)]);
        let c = completion(&g);
        assert!(c.is_complete());
        assert_eq!(c.edge_color(1, 3), c.edge_color(2, 3));
        assert_eq!(c.edge_color(1, 4), c.edge_color(2, 4));
        assert_ne!(c.edge_color(1, 3), c.edge_color(1, 4));
        assert_eq!(classes(&c), closure_oracle(&g));

        let distinct = completion(&ColoredGraph::complete(4));
        assert_eq!(classes(&distinct).len(), 6);

        let triple = colored(&["a", "a", "a"], &[]);
        let c3 = completion(&triple);
        assert_eq!(classes(&c3).len(), 1);
        assert_eq!(classes(&c3), closure_oracle(&triple));
    }

    #[test]
    fn completion_names_avoid_vertex_tokens() {
        let g = colored(&["{1,2}", "b", "c"], &[]);
        let c = completion(&g);
        assert_eq!(c.edge_color(1, 2), Some("{1,2}'"));
    }

    /// All minors of Σ_{A∪c, B∪c} over every cut vertex and every
    /// bipartition (A, B) of the components of G − c.
    fn bipartition_oracle(g: &ColoredGraph) -> BTreeSet<Quadruple> {
        let mut out = BTreeSet::new();
        for c in g.cut_vertices() {
            let comps = g.components_without(Some(c));
            let k = comps.len();
            for mask in 1..(1u32 << k) - 1 {
                let mut a = vec![c];
                let mut b = vec![c];
                for (idx, comp) in comps.iter().enumerate() {
                    if mask & (1 << idx) != 0 {
                        a.extend(comp);
                    } else {
                        b.extend(comp);
                    }
                }
                a.sort_unstable();
                b.sort_unstable();
                for x in 0..a.len() {
                    for y in x + 1..a.len() {
                        for z in 0..b.len() {
                            for w in z + 1..b.len() {
                                let r = (a[x], a[y]);
                                let s = (b[z], b[w]);
                                out.insert((r.min(s), r.max(s)));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn separated_quadruples_match_bipartitions() {
        let star = derive_graph(&zeroed_star());
        let q = one_clique_separated_quadruples(&star).unwrap();
        assert_eq!(q, bipartition_oracle(&star));
        assert!(q.contains(&((1, 2), (3, 4))));
        assert!(q.contains(&((1, 4), (3, 4))));
        let path = ColoredGraph::uncolored(3, [(1, 3), (2, 3)]).unwrap();
        let qp = one_clique_separated_quadruples(&path).unwrap();
        assert_eq!(qp, bipartition_oracle(&path));
        assert!(qp.contains(&((1, 3), (2, 3))));
        assert!(one_clique_separated_quadruples(&ColoredGraph::complete(4))
            .unwrap()
            .is_empty());
        let longer = ColoredGraph::uncolored(6, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (4, 6)]).unwrap();
        assert_eq!(
            one_clique_separated_quadruples(&longer).unwrap(),
            bipartition_oracle(&longer)
        );
    }

    #[test]
    fn via_parents_criterion() {
        let t = uncolored();
        assert!(vertex_regular_via_parents(&with_colors(&t, &[(1, "y"), (2, "y")], &[])));
        assert!(!vertex_regular_via_parents(&with_colors(
            &t,
            &[(1, "y"), (3, "y")],
            &[]
        )));
    }

    #[test]
    fn document_round_trip() {
        let g = derive_graph(&zeroed_star());
        let json = serde_json::to_string(&g.to_document()).unwrap();
        assert_eq!(ColoredGraph::parse(&json).unwrap(), g);
        let bad = r#"{"n_vertices": 2, "vertex_colors": {"1": "x"}, "edges": [{"i": 1, "j": 2, "color": "x"}]}"#;
        assert!(matches!(ColoredGraph::parse(bad), Err(GraphError::SharedColor(_))));
    }
}
