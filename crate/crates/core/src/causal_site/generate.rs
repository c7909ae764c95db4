use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CausalSite, NodeId, SiteError, SiteNode};

/// Upper bound on the projected node count of a generated site.
pub const NODE_BUDGET: u64 = 1_000_000;

/// How many children a continuing frontier node spawns.
#[derive(Debug, Clone, PartialEq)]
pub enum Branching {
    /// Every continuing node spawns exactly this many children.
    Fixed(u32),
    /// Child count per step (entry `t - 1` for step `t`); the last entry repeats.
    PerStep(Vec<u32>),
    /// Child count drawn per node; entry `k` is the weight of spawning `k` children.
    Weighted(Vec<f64>),
}

impl Branching {
    fn max_at(&self, step: u32) -> u64 {
        match self {
            Branching::Fixed(b) => u64::from(*b),
            Branching::PerStep(v) => u64::from(v[(step as usize - 1).min(v.len() - 1)]),
            Branching::Weighted(w) => w.iter().rposition(|&x| x > 0.0).unwrap_or(0) as u64,
        }
    }

    fn validate(&self) -> Result<(), SiteError> {
        let bad = |m: &str| Err(SiteError::InvalidConfig(m.to_string()));
        match self {
            Branching::Fixed(0) => bad("fixed branching must be at least 1"),
            Branching::PerStep(v) if v.is_empty() => bad("per-step branching is empty"),
            Branching::PerStep(v) if v.contains(&0) => bad("per-step branching must be at least 1"),
            Branching::Weighted(w)
                if w.iter().any(|x| !x.is_finite() || *x < 0.0) || !w.iter().any(|x| *x > 0.0) =>
            {
                bad("branching weights must be finite, nonnegative and not all zero")
            }
            _ => Ok(()),
        }
    }
}

/// Which precedence edges the generator records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecRule {
    /// `parent ≺ child`; the closure orders each node before its descendants.
    #[default]
    Descendant,
    /// Every node of step `t` precedes every node of step `t + 1`; the closure
    /// orders all pairs with a smaller step first.
    AllEarlier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub branching: Branching,
    pub steps: u32,
    /// Probability that a non-root frontier node stops branching.
    pub halt_prob: f64,
    pub prec_rule: PrecRule,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(branching: Branching, steps: u32, seed: u64) -> Self {
        Self {
            branching,
            steps,
            halt_prob: 0.0,
            prec_rule: PrecRule::Descendant,
            seed,
        }
    }

    pub fn with_halt_prob(mut self, halt_prob: f64) -> Self {
        self.halt_prob = halt_prob;
        self
    }

    pub fn with_prec_rule(mut self, prec_rule: PrecRule) -> Self {
        self.prec_rule = prec_rule;
        self
    }

    /// Node count if no node halts.
    pub fn projected_nodes(&self) -> u64 {
        let mut total = 1u64;
        let mut level = 1u64;
        for step in 1..=self.steps {
            level = level.saturating_mul(self.branching.max_at(step));
            total = total.saturating_add(level);
            if level == 0 || total > NODE_BUDGET {
                break;
            }
        }
        total
    }
}

/// Grows a site from a single root.
///
/// At each step every frontier node either halts (never the root) or spawns
/// children. χ links each child to its parent and to its siblings.
pub fn generate_site(cfg: &GeneratorConfig) -> Result<CausalSite, SiteError> {
    cfg.branching.validate()?;
    if !(0.0..=1.0).contains(&cfg.halt_prob) {
        return Err(SiteError::InvalidConfig(format!(
            "halt probability {} outside [0, 1]",
            cfg.halt_prob
        )));
    }
    let projected = cfg.projected_nodes();
    if projected > NODE_BUDGET {
        return Err(SiteError::NodeBudgetExceeded {
            projected,
            budget: NODE_BUDGET,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let weighted = match &cfg.branching {
        Branching::Weighted(w) => Some(
            WeightedIndex::new(w)
                .map_err(|e| SiteError::InvalidConfig(format!("branching weights: {e}")))?,
        ),
        _ => None,
    };

    let mut nodes = vec![SiteNode {
        id: 0,
        parent: None,
        step: 0,
    }];
    let mut chi = Vec::new();
    let mut prec = Vec::new();
    let mut frontier: Vec<NodeId> = vec![0];

    for step in 1..=cfg.steps {
        let mut next = Vec::new();
        for &parent in &frontier {
            let halts = parent != 0
                && cfg.halt_prob > 0.0
                && (cfg.halt_prob >= 1.0 || rng.random_bool(cfg.halt_prob));
            if halts {
                continue;
            }
            let count = match (&cfg.branching, &weighted) {
                (_, Some(dist)) => dist.sample(&mut rng) as u64,
                (b, None) => b.max_at(step),
            };
            let first = nodes.len() as NodeId;
            for k in 0..count {
                let id = first + k;
                nodes.push(SiteNode {
                    id,
                    parent: Some(parent),
                    step,
                });
                chi.push((parent, id));
                for sibling in first..id {
                    chi.push((sibling, id));
                }
                if cfg.prec_rule == PrecRule::Descendant {
                    prec.push((parent, id));
                }
                next.push(id);
            }
        }
        if cfg.prec_rule == PrecRule::AllEarlier {
            for &a in &frontier {
                for &b in &next {
                    prec.push((a, b));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    CausalSite::from_parts(nodes, chi, prec)
}
