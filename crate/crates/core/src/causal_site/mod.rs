//! Discrete causal sites grown by a branching creation process.
//!
//! A site carries two orders over the same nodes: inheritance (`⊆`, the
//! parent links of the generating tree) and precedence (`≺`, explicit edges
//! whose transitive closure is the causal order). A symmetric neighbouring
//! relation `χ` induces the shortest-path metric.

mod generate;
mod verify;

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use generate::{generate_site, Branching, GeneratorConfig, PrecRule, NODE_BUDGET};
pub use verify::{verify_orders, OrderReport, Violation};

pub type NodeId = u64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SiteError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("projected node count {projected} exceeds budget {budget}")]
    NodeBudgetExceeded { projected: u64, budget: u64 },
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    /// Creation step at which the node appeared; the root has step 0.
    pub step: u32,
}

/// Shortest χ-path length between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }
}

/// An immutable causal site with lookup indexes built at construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SiteRepr", into = "SiteRepr")]
pub struct CausalSite {
    nodes: Vec<SiteNode>,
    chi: Vec<(NodeId, NodeId)>,
    prec: Vec<(NodeId, NodeId)>,
    index: HashMap<NodeId, usize>,
    parent_idx: Vec<Option<usize>>,
    chi_adj: Vec<Vec<usize>>,
    prec_adj: Vec<Vec<usize>>,
}

impl PartialEq for CausalSite {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.chi == other.chi && self.prec == other.prec
    }
}

impl CausalSite {
    /// Builds a site from raw parts.
    ///
    /// Nodes are sorted by id, χ pairs are stored as `(min, max)` and both
    /// edge lists are sorted and deduplicated. Order violations (several
    /// roots, precedence cycles) are accepted here and reported by
    /// [`verify_orders`]; only dangling ids are rejected.
    pub fn from_parts(
        mut nodes: Vec<SiteNode>,
        chi: impl IntoIterator<Item = (NodeId, NodeId)>,
        prec: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, SiteError> {
        nodes.sort_by_key(|n| n.id);
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.id, i).is_some() {
                return Err(SiteError::DuplicateNode(n.id));
            }
        }
        let lookup = |id: NodeId| index.get(&id).copied().ok_or(SiteError::UnknownNode(id));

        let parent_idx = nodes
            .iter()
            .map(|n| n.parent.map(lookup).transpose())
            .collect::<Result<Vec<_>, _>>()?;

        let mut chi: Vec<_> = chi.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        chi.sort_unstable();
        chi.dedup();
        let mut prec: Vec<_> = prec.into_iter().collect();
        prec.sort_unstable();
        prec.dedup();

        let mut chi_adj = vec![Vec::new(); nodes.len()];
        for &(a, b) in &chi {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            chi_adj[ia].push(ib);
            if ia != ib {
                chi_adj[ib].push(ia);
            }
        }
        let mut prec_adj = vec![Vec::new(); nodes.len()];
        for &(a, b) in &prec {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            prec_adj[ia].push(ib);
        }

        Ok(Self {
            nodes,
            chi,
            prec,
            index,
            parent_idx,
            chi_adj,
            prec_adj,
        })
    }

    pub fn nodes(&self) -> &[SiteNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn chi(&self) -> &[(NodeId, NodeId)] {
        &self.chi
    }

    pub fn prec(&self) -> &[(NodeId, NodeId)] {
        &self.prec
    }

    pub fn node(&self, id: NodeId) -> Result<&SiteNode, SiteError> {
        self.idx(id).map(|i| &self.nodes[i])
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub(crate) fn idx(&self, id: NodeId) -> Result<usize, SiteError> {
        self.index
            .get(&id)
            .copied()
            .ok_or(SiteError::UnknownNode(id))
    }

    pub(crate) fn parent_index(&self, i: usize) -> Option<usize> {
        self.parent_idx[i]
    }

    pub(crate) fn prec_successors(&self, i: usize) -> &[usize] {
        &self.prec_adj[i]
    }

    /// Nodes without a parent.
    pub fn roots(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| n.parent.is_none())
            .map(|n| n.id)
            .collect()
    }

    /// `a ⊆ b`: `a` equals `b` or descends from it through parent links.
    pub fn inherits(&self, a: NodeId, b: NodeId) -> Result<bool, SiteError> {
        let (ia, ib) = (self.idx(a)?, self.idx(b)?);
        let mut cur = Some(ia);
        // Bounded walk so hand-built parent cycles cannot loop forever.
        for _ in 0..=self.nodes.len() {
            match cur {
                Some(i) if i == ib => return Ok(true),
                Some(i) => cur = self.parent_idx[i],
                None => return Ok(false),
            }
        }
        Ok(false)
    }

    /// `a ≺ b` in the transitive closure of the precedence edges.
    pub fn causally_precedes(&self, a: NodeId, b: NodeId) -> Result<bool, SiteError> {
        let (ia, ib) = (self.idx(a)?, self.idx(b)?);
        if ia == ib {
            return Ok(false);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![ia];
        seen[ia] = true;
        while let Some(i) = stack.pop() {
            for &j in &self.prec_adj[i] {
                if j == ib {
                    return Ok(true);
                }
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        Ok(false)
    }

    /// Breadth-first χ-distances from one node to every node, in node order.
    fn bfs(&self, src: usize) -> Vec<Distance> {
        let mut dist = vec![Distance::Unreachable; self.nodes.len()];
        dist[src] = Distance::Finite(0);
        let mut queue = VecDeque::from([(src, 0u32)]);
        while let Some((i, d)) = queue.pop_front() {
            for &j in &self.chi_adj[i] {
                if dist[j] == Distance::Unreachable {
                    dist[j] = Distance::Finite(d + 1);
                    queue.push_back((j, d + 1));
                }
            }
        }
        dist
    }

    /// Shortest χ-path length between `a` and `b`.
    pub fn metric(&self, a: NodeId, b: NodeId) -> Result<Distance, SiteError> {
        let (ia, ib) = (self.idx(a)?, self.idx(b)?);
        Ok(self.bfs(ia)[ib])
    }

    /// All-pairs χ-distances, rows and columns in node order (see [`Self::nodes`]).
    ///
    /// Rows are computed in parallel on the current rayon pool.
    pub fn all_pairs_metric(&self) -> Vec<Vec<Distance>> {
        (0..self.nodes.len())
            .into_par_iter()
            .map(|i| self.bfs(i))
            .collect()
    }

    /// Classes of the equivalence "joined by a χ-path", each sorted by id.
    pub fn chi_classes(&self) -> Vec<Vec<NodeId>> {
        let mut class = vec![usize::MAX; self.nodes.len()];
        let mut out: Vec<Vec<NodeId>> = Vec::new();
        for start in 0..self.nodes.len() {
            if class[start] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = Vec::new();
            let mut stack = vec![start];
            class[start] = c;
            while let Some(i) = stack.pop() {
                members.push(self.nodes[i].id);
                for &j in &self.chi_adj[i] {
                    if class[j] == usize::MAX {
                        class[j] = c;
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct SiteRepr {
    nodes: Vec<SiteNode>,
    chi: Vec<[NodeId; 2]>,
    prec: Vec<[NodeId; 2]>,
}

impl From<CausalSite> for SiteRepr {
    fn from(site: CausalSite) -> Self {
        SiteRepr {
            nodes: site.nodes,
            chi: site.chi.into_iter().map(|(a, b)| [a, b]).collect(),
            prec: site.prec.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TryFrom<SiteRepr> for CausalSite {
    type Error = SiteError;

    fn try_from(repr: SiteRepr) -> Result<Self, Self::Error> {
        CausalSite::from_parts(
            repr.nodes,
            repr.chi.into_iter().map(|[a, b]| (a, b)),
            repr.prec.into_iter().map(|[a, b]| (a, b)),
        )
    }
}
