//! Rooted phylogenetic trees with colored and zeroed nodes.
//!
//! Node ids follow a fixed convention: the root leaf is `0`, the non-root
//! leaves are `1..=n`, and internal nodes carry ids greater than `n`. Every
//! non-root, non-zeroed node has a color token; zeroed nodes have none.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

pub type NodeId = usize;

pub const ROOT: NodeId = 0;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("malformed tree document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed tree document: {0}")]
    Malformed(String),
    #[error("color `{token}` is shared by leaf {leaf} and internal node {internal}")]
    SharedColor {
        token: String,
        leaf: NodeId,
        internal: NodeId,
    },
    #[error("zeroed leaf {0}: only internal nodes can be zeroed")]
    ZeroedLeaf(NodeId),
    #[error("zeroed top node {0}")]
    ZeroedTop(NodeId),
    #[error("zeroed node {0} must not carry a color")]
    ColoredZeroedNode(NodeId),
    #[error("disconnected parent map: {0}")]
    Disconnected(String),
    #[error("internal node {0} has fewer than two children")]
    DegenerateInternal(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("path endpoints must differ (got {0} twice)")]
    SameEndpoints(NodeId),
}

/// The JSON tree document:
/// `{"n_leaves": 4, "parents": {"1": 5, ...}, "colors": {"1": "cyan", ...}, "zeroed": [6]}`.
///
/// Colors may be omitted for any non-zeroed node, in which case the node id
/// itself (as a string) is used as its token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub n_leaves: usize,
    pub parents: BTreeMap<String, usize>,
    #[serde(default)]
    pub colors: BTreeMap<String, String>,
    #[serde(default)]
    pub zeroed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredTree {
    n_leaves: usize,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    color: Vec<Option<String>>,
    depth: Vec<usize>,
    internal: Vec<NodeId>,
    zeroed: BTreeSet<NodeId>,
    top: NodeId,
}

impl ColoredTree {
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let doc: TreeDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &TreeDocument) -> Result<Self, TreeError> {
        let mut parents = BTreeMap::new();
        for (k, &v) in &doc.parents {
            let id = parse_id(k)?;
            parents.insert(id, v);
        }
        let mut colors = BTreeMap::new();
        for (k, v) in &doc.colors {
            colors.insert(parse_id(k)?, v.clone());
        }
        Self::from_parts(doc.n_leaves, &parents, &colors, &doc.zeroed.iter().copied().collect())
    }

    /// Builds and validates a tree from its parent map, colors and zeroed set.
    pub fn from_parts(
        n_leaves: usize,
        parents: &BTreeMap<NodeId, NodeId>,
        colors: &BTreeMap<NodeId, String>,
        zeroed: &BTreeSet<NodeId>,
    ) -> Result<Self, TreeError> {
        if n_leaves == 0 {
            return Err(TreeError::Malformed("n_leaves must be at least 1".into()));
        }
        if parents.contains_key(&ROOT) {
            return Err(TreeError::Malformed("the root 0 cannot have a parent".into()));
        }
        for leaf in 1..=n_leaves {
            if !parents.contains_key(&leaf) {
                return Err(TreeError::Malformed(format!("leaf {leaf} has no parent")));
            }
        }
        let max_id = *parents.keys().next_back().expect("n_leaves >= 1");
        let mut parent = vec![None; max_id + 1];
        let mut children = vec![Vec::new(); max_id + 1];
        for (&node, &pa) in parents {
            if pa != ROOT && !parents.contains_key(&pa) {
                return Err(TreeError::Disconnected(format!(
                    "node {node} points to {pa}, which is not a node"
                )));
            }
            if (1..=n_leaves).contains(&pa) {
                return Err(TreeError::Malformed(format!(
                    "leaf {pa} cannot be the parent of {node}"
                )));
            }
            parent[node] = Some(pa);
            children[pa].push(node);
        }
        for ch in &mut children {
            ch.sort_unstable();
        }

        let internal: Vec<NodeId> = parents.keys().copied().filter(|&v| v > n_leaves).collect();
        for &v in &internal {
            if children[v].len() < 2 {
                return Err(TreeError::DegenerateInternal(v));
            }
        }
        let tops = &children[ROOT];
        let top = match tops.as_slice() {
            [t] => *t,
            [] => return Err(TreeError::Disconnected("no node is attached to the root".into())),
            _ => {
                return Err(TreeError::Disconnected(format!(
                    "several nodes attached to the root: {tops:?}"
                )))
            }
        };
        if top <= n_leaves && n_leaves > 1 {
            return Err(TreeError::Malformed(format!(
                "leaf {top} is attached directly to the root"
            )));
        }

        // depths by BFS from the root; anything unreached sits on a cycle
        let mut depth = vec![usize::MAX; max_id + 1];
        depth[ROOT] = 0;
        let mut queue = VecDeque::from([ROOT]);
        while let Some(v) = queue.pop_front() {
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                queue.push_back(c);
            }
        }
        if let Some(&bad) = parents.keys().find(|&&v| depth[v] == usize::MAX) {
            return Err(TreeError::Disconnected(format!("node {bad} does not reach the root")));
        }

        for &z in zeroed {
            if (1..=n_leaves).contains(&z) {
                return Err(TreeError::ZeroedLeaf(z));
            }
            if !internal.contains(&z) {
                return Err(TreeError::UnknownNode(z));
            }
            if z == top {
                return Err(TreeError::ZeroedTop(z));
            }
        }

        let mut color = vec![None; max_id + 1];
        for (&v, token) in colors {
            if v == ROOT || v > max_id || parent[v].is_none() {
                return Err(TreeError::UnknownNode(v));
            }
            if zeroed.contains(&v) {
                return Err(TreeError::ColoredZeroedNode(v));
            }
            color[v] = Some(token.clone());
        }
        for &v in parents.keys() {
            if color[v].is_none() && !zeroed.contains(&v) {
                color[v] = Some(v.to_string());
            }
        }
        let leaf_tokens: BTreeMap<&str, NodeId> = (1..=n_leaves)
            .map(|v| (color[v].as_deref().expect("leaves are colored"), v))
            .collect();
        for &v in &internal {
            if let Some(tok) = color[v].as_deref() {
                if let Some(&leaf) = leaf_tokens.get(tok) {
                    return Err(TreeError::SharedColor {
                        token: tok.to_string(),
                        leaf,
                        internal: v,
                    });
                }
            }
        }

        Ok(ColoredTree {
            n_leaves,
            parent,
            children,
            color,
            depth,
            internal,
            zeroed: zeroed.clone(),
            top,
        })
    }

    pub fn to_document(&self) -> TreeDocument {
        let parents = self
            .nodes()
            .map(|v| (v.to_string(), self.parent[v].expect("non-root")))
            .collect();
        let colors = self
            .nodes()
            .filter_map(|v| self.color[v].as_ref().map(|c| (v.to_string(), c.clone())))
            .collect();
        TreeDocument {
            n_leaves: self.n_leaves,
            parents,
            colors,
            zeroed: self.zeroed.iter().copied().collect(),
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn leaves(&self) -> std::ops::RangeInclusive<NodeId> {
        1..=self.n_leaves
    }

    /// Internal node ids in ascending order.
    pub fn internal_nodes(&self) -> &[NodeId] {
        &self.internal
    }

    /// All non-root nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.leaves().chain(self.internal.iter().copied())
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v == ROOT || (v < self.parent.len() && self.parent[v].is_some())
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        (1..=self.n_leaves).contains(&v)
    }

    pub fn is_internal(&self, v: NodeId) -> bool {
        v > self.n_leaves && self.contains(v)
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent.get(v).copied().flatten()
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        self.children.get(v).map_or(&[], Vec::as_slice)
    }

    /// Color token of a non-zeroed, non-root node.
    pub fn color(&self, v: NodeId) -> Option<&str> {
        self.color.get(v).and_then(|c| c.as_deref())
    }

    pub fn zeroed(&self) -> &BTreeSet<NodeId> {
        &self.zeroed
    }

    pub fn is_zeroed(&self, v: NodeId) -> bool {
        self.zeroed.contains(&v)
    }

    /// The unique internal node attached to the root (leaf 1 when `n = 1`).
    pub fn top(&self) -> NodeId {
        self.top
    }

    pub fn depth(&self, v: NodeId) -> Result<usize, TreeError> {
        self.check(v)?;
        Ok(self.depth[v])
    }

    /// Distinct color tokens of non-zeroed nodes.
    pub fn color_tokens(&self) -> BTreeSet<&str> {
        self.nodes().filter_map(|v| self.color(v)).collect()
    }

    pub fn leaf_colors_distinct(&self) -> bool {
        let tokens: BTreeSet<&str> = self.leaves().filter_map(|v| self.color(v)).collect();
        tokens.len() == self.n_leaves
    }

    /// Leaves whose parent is the top internal node.
    pub fn top_leaf_children(&self) -> Vec<NodeId> {
        self.children(self.top)
            .iter()
            .copied()
            .filter(|&c| self.is_leaf(c))
            .collect()
    }

    fn check(&self, v: NodeId) -> Result<(), TreeError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(TreeError::UnknownNode(v))
        }
    }

    pub fn lca(&self, i: NodeId, j: NodeId) -> Result<NodeId, TreeError> {
        self.check(i)?;
        self.check(j)?;
        let (mut a, mut b) = (i, j);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root has a parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root has a parent");
        }
        while a != b {
            a = self.parent[a].expect("non-root has a parent");
            b = self.parent[b].expect("non-root has a parent");
        }
        Ok(a)
    }

    /// Directed edges `(parent, child)` of the path `i ↔ j`: the climb from
    /// `i` to the lca followed by the descent from the lca to `j`.
    pub fn path_edges(&self, i: NodeId, j: NodeId) -> Result<Vec<(NodeId, NodeId)>, TreeError> {
        if i == j {
            self.check(i)?;
            return Err(TreeError::SameEndpoints(i));
        }
        let l = self.lca(i, j)?;
        let mut up = Vec::new();
        let mut v = i;
        while v != l {
            let pa = self.parent[v].expect("below lca");
            up.push((pa, v));
            v = pa;
        }
        let mut down = Vec::new();
        v = j;
        while v != l {
            let pa = self.parent[v].expect("below lca");
            down.push((pa, v));
            v = pa;
        }
        down.reverse();
        up.extend(down);
        Ok(up)
    }

    pub fn distance(&self, i: NodeId, j: NodeId) -> Result<usize, TreeError> {
        let l = self.lca(i, j)?;
        Ok(self.depth[i] + self.depth[j] - 2 * self.depth[l])
    }

    /// Fewest edges from `v` down to a non-root leaf (0 for a leaf).
    pub fn height(&self, v: NodeId) -> Result<usize, TreeError> {
        self.check(v)?;
        if self.is_leaf(v) {
            return Ok(0);
        }
        Ok(self
            .descendants(v)?
            .into_iter()
            .filter(|&d| self.is_leaf(d))
            .map(|d| self.depth[d] - self.depth[v])
            .min()
            .expect("internal nodes have leaf descendants"))
    }

    /// All nodes strictly below `v`.
    pub fn descendants(&self, v: NodeId) -> Result<BTreeSet<NodeId>, TreeError> {
        self.check(v)?;
        let mut out = BTreeSet::new();
        let mut stack: Vec<NodeId> = self.children(v).to_vec();
        while let Some(c) = stack.pop() {
            out.insert(c);
            stack.extend_from_slice(self.children(c));
        }
        Ok(out)
    }

    /// Leaves (including the root leaf 0 as a pseudo-leaf when `v == 0`) below `v`.
    pub fn leaf_descendants(&self, v: NodeId) -> Result<BTreeSet<NodeId>, TreeError> {
        if self.is_leaf(v) {
            return Ok(BTreeSet::from([v]));
        }
        Ok(self.descendants(v)?.into_iter().filter(|&d| self.is_leaf(d)).collect())
    }
}

fn parse_id(key: &str) -> Result<NodeId, TreeError> {
    key.trim()
        .parse()
        .map_err(|_| TreeError::Malformed(format!("node key `{key}` is not an integer")))
}
