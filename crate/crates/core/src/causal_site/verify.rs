use serde::Serialize;

use super::{CausalSite, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoRoot,
    MultipleRoots {
        roots: Vec<NodeId>,
    },
    /// Parent links that never reach a root.
    ParentCycle {
        nodes: Vec<NodeId>,
    },
    StepNotIncreasing {
        parent: NodeId,
        child: NodeId,
    },
    PrecSelfLoop {
        node: NodeId,
    },
    /// Nodes lying on, or downstream only of, a precedence cycle.
    PrecCycle {
        nodes: Vec<NodeId>,
    },
    /// A precedence edge that does not move forward in creation steps.
    PrecAgainstTime {
        from: NodeId,
        to: NodeId,
    },
    ChiSelfLoop {
        node: NodeId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub nodes: usize,
    pub prec_edges: usize,
    pub chi_edges: usize,
    /// Every precedence edge `a ≺ b` also satisfies `b ⊆ a`.
    pub descendant_compatible: bool,
    pub violations: Vec<Violation>,
}

impl OrderReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both orders of a site and lists every violation found.
pub fn verify_orders(site: &CausalSite) -> OrderReport {
    let mut violations = Vec::new();
    let nodes = site.nodes();

    match site.roots().as_slice() {
        [] => violations.push(Violation::NoRoot),
        [_] => {}
        roots => violations.push(Violation::MultipleRoots {
            roots: roots.to_vec(),
        }),
    }

    let orphaned: Vec<NodeId> = (0..nodes.len())
        .filter(|&i| !reaches_root(site, i))
        .map(|i| nodes[i].id)
        .collect();
    if !orphaned.is_empty() {
        violations.push(Violation::ParentCycle { nodes: orphaned });
    }

    for (i, n) in nodes.iter().enumerate() {
        if let Some(pi) = site.parent_index(i) {
            if nodes[pi].step >= n.step {
                violations.push(Violation::StepNotIncreasing {
                    parent: nodes[pi].id,
                    child: n.id,
                });
            }
        }
    }

    let mut descendant_compatible = true;
    for &(a, b) in site.prec() {
        if a == b {
            violations.push(Violation::PrecSelfLoop { node: a });
            continue;
        }
        let (na, nb) = (
            site.node(a).expect("indexed"),
            site.node(b).expect("indexed"),
        );
        if na.step >= nb.step {
            violations.push(Violation::PrecAgainstTime { from: a, to: b });
        }
        if !site.inherits(b, a).expect("indexed") {
            descendant_compatible = false;
        }
    }

    let cyclic = prec_cycle_nodes(site);
    if !cyclic.is_empty() {
        violations.push(Violation::PrecCycle { nodes: cyclic });
    }

    for &(a, b) in site.chi() {
        if a == b {
            violations.push(Violation::ChiSelfLoop { node: a });
        }
    }

    OrderReport {
        nodes: nodes.len(),
        prec_edges: site.prec().len(),
        chi_edges: site.chi().len(),
        descendant_compatible,
        violations,
    }
}

fn reaches_root(site: &CausalSite, start: usize) -> bool {
    let mut cur = start;
    for _ in 0..=site.len() {
        match site.parent_index(cur) {
            None => return true,
            Some(p) => cur = p,
        }
    }
    false
}

/// Kahn's algorithm: whatever cannot be peeled off sits on or behind a cycle.
/// Self-loops are reported separately and ignored here.
fn prec_cycle_nodes(site: &CausalSite) -> Vec<NodeId> {
    let n = site.len();
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for &j in site.prec_successors(i) {
            if j != i {
                indegree[j] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut removed = vec![false; n];
    while let Some(i) = ready.pop() {
        removed[i] = true;
        for &j in site.prec_successors(i) {
            if j != i {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    (0..n)
        .filter(|&i| !removed[i])
        .map(|i| site.nodes()[i].id)
        .collect()
}
