use std::path::Path;

use hierq_core::complex::{clique_complex, presets, SimplicialComplex};
use hierq_core::dot::{site_to_dot, state_to_dot};
use hierq_core::hierarchic::{
    hier_inner, hier_measure_counts, operator_tree_expect, scale_profile, zp_integrate,
    HierarchicState, InformationState, OperatorTree,
};
use hierq_core::quantum::{
    born_probabilities, collapse_counts, landauer_cost, premeasure, ComplexMatrix, StateVector,
    SCHMIDT_TOL,
};
use hierq_core::{
    generate_site, verify_orders, Branching, CausalSite, Complex64, GeneratorConfig, PrecRule,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::args::*;

type Outcome = Result<String, String>;

pub fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::GenSite(a) => gen_site(a),
        Command::SiteMetric(a) => site_metric(a),
        Command::SiteVerify(a) => json(&verify_orders(&read_json::<CausalSite>(&a.input)?)),
        Command::Euler(a) => euler(a),
        Command::Collapse(a) => collapse(a),
        Command::Premeasure(a) => premeasure_cmd(a),
        Command::Landauer(a) => json(&LandauerReport {
            joules: landauer_cost(a.temp, a.bits).map_err(|e| e.to_string())?,
        }),
        Command::HierInner(a) => {
            let (x, y): (HierarchicState, HierarchicState) = (read_json(&a.a)?, read_json(&a.b)?);
            json(&InnerReport {
                inner: hier_inner(&x, &y).map_err(|e| e.to_string())?,
            })
        }
        Command::HierMeasure(a) => hier_measure_cmd(a),
        Command::ZpIntegrate(a) => zp(a),
        Command::OpExpect(a) => {
            let op: OperatorTree = read_json(&a.op)?;
            let state: HierarchicState = read_json(&a.state)?;
            let expectation = operator_tree_expect(&op, &state).map_err(|e| e.to_string())?;
            json(&ExpectReport { expectation })
        }
        Command::ExportDot(a) => match (&a.site, &a.state) {
            (Some(path), _) => Ok(site_to_dot(&read_json(path)?)),
            (_, Some(path)) => Ok(state_to_dot(&read_json(path)?)),
            (None, None) => Err("one of --site or --state is required".into()),
        },
    }
}

fn json<T: Serialize>(value: &T) -> Outcome {
    let mut text = serde_json::to_string(value).map_err(|e| e.to_string())?;
    text.push('\n');
    Ok(text)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// `re` or `re:im`.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let bad = || format!("cannot parse amplitude {s:?}");
    let mut parts = s.trim().splitn(2, ':');
    let re = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse::<f64>()
        .map_err(|_| bad())?;
    let im = match parts.next() {
        Some(t) => t.trim().parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

fn parse_state(amps: &[String]) -> Result<StateVector, String> {
    let amps = amps
        .iter()
        .map(|s| parse_complex(s))
        .collect::<Result<Vec<_>, _>>()?;
    StateVector::new(amps).map_err(|e| e.to_string())
}

fn gen_site(a: &GenSite) -> Outcome {
    let branching = match a.branching.as_slice() {
        [] => Branching::Weighted(a.branching_weights.clone()),
        [b] => Branching::Fixed(*b),
        many => Branching::PerStep(many.to_vec()),
    };
    let rule = match a.prec_rule {
        PrecRuleArg::Descendant => PrecRule::Descendant,
        PrecRuleArg::AllEarlier => PrecRule::AllEarlier,
    };
    let cfg = GeneratorConfig::new(branching, a.steps, a.seed)
        .with_halt_prob(a.halt_prob)
        .with_prec_rule(rule);
    let site = generate_site(&cfg).map_err(|e| e.to_string())?;
    match a.format {
        Format::Json => json(&site),
        Format::Dot => Ok(site_to_dot(&site)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub from: u64,
    pub to: u64,
    pub distance: Option<u32>,
    pub reachable: bool,
}

fn site_metric(a: &SiteMetric) -> Outcome {
    let site: CausalSite = read_json(&a.input)?;
    let d = site
        .metric(a.from, a.to)
        .map_err(|e| e.to_string())?
        .finite();
    json(&MetricReport {
        from: a.from,
        to: a.to,
        distance: d,
        reachable: d.is_some(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "F")]
    pub f: usize,
    pub chi: i64,
    /// Present only when the complex has simplices above dimension 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_vector: Option<Vec<usize>>,
}

impl EulerReport {
    pub fn of(c: &SimplicialComplex) -> Self {
        let fv = c.f_vector();
        let at = |i: usize| fv.get(i).copied().unwrap_or(0);
        EulerReport {
            v: at(0),
            e: at(1),
            f: at(2),
            chi: c.euler_characteristic(),
            f_vector: (fv.len() > 3).then(|| fv.clone()),
        }
    }
}

fn parse_relation(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("cannot parse relation {s:?}, expected a-b");
    let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn euler(a: &Euler) -> Outcome {
    let complex = match (a.preset, a.vertices) {
        (Some(Preset::S1), _) => presets::circle(),
        (Some(Preset::S2), _) => presets::sphere(),
        (None, Some(n)) => {
            let rel = a
                .relations
                .iter()
                .map(|s| parse_relation(s))
                .collect::<Result<Vec<_>, _>>()?;
            clique_complex(0..n, rel, a.max_dim, a.exclude_top).map_err(|e| e.to_string())?
        }
        (None, None) => return Err("either --preset or --vertices is required".into()),
    };
    json(&EulerReport::of(&complex))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub counts: Vec<u64>,
    pub expected: Vec<f64>,
}

fn collapse(a: &Collapse) -> Outcome {
    let s = parse_state(&a.amps)?;
    let basis = StateVector::standard_basis(s.dim()).map_err(|e| e.to_string())?;
    let expected = born_probabilities(&s, &basis).map_err(|e| e.to_string())?;
    let counts = collapse_counts(&s, &basis, a.trials, a.seed).map_err(|e| e.to_string())?;
    json(&CollapseReport { counts, expected })
}

#[derive(Serialize)]
struct SchmidtReport {
    schmidt_coefficients: Vec<f64>,
    schmidt_rank: usize,
}

#[derive(Serialize)]
struct ReducedReport {
    reduced: Vec<Vec<Complex64>>,
    offdiag: f64,
}

#[derive(Serialize)]
struct BipartiteReport {
    coefficients: Vec<Vec<Complex64>>,
}

/// Pointer branches `φ₁ = (1, 0)` and `φ₂ = (ε, √(1-ε²))`, so `⟨φ₁|φ₂⟩ = ε`.
pub fn pointer_branches(overlap: f64) -> Result<[StateVector; 2], String> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(format!("overlap {overlap} outside [0, 1]"));
    }
    let phi1 = StateVector::basis(2, 0).map_err(|e| e.to_string())?;
    let phi2 = StateVector::from_real(&[overlap, (1.0 - overlap * overlap).sqrt()])
        .map_err(|e| e.to_string())?;
    Ok([phi1, phi2])
}

fn premeasure_cmd(a: &Premeasure) -> Outcome {
    let system = parse_state(&a.amps)?;
    let ready = StateVector::basis(2, 0).map_err(|e| e.to_string())?;
    let [phi1, phi2] = pointer_branches(a.overlap)?;
    let out = premeasure(&system, &ready, [&phi1, &phi2]).map_err(|e| e.to_string())?;
    let rows = |m: &ComplexMatrix| -> Vec<Vec<Complex64>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect()
    };
    match a.report {
        Report::Schmidt => json(&SchmidtReport {
            schmidt_coefficients: out.schmidt_coefficients(),
            schmidt_rank: out.schmidt_rank(SCHMIDT_TOL),
        }),
        Report::Reduced => {
            let rho = out.reduced_first();
            json(&ReducedReport {
                offdiag: rho[(0, 1)].norm(),
                reduced: rows(&rho),
            })
        }
        Report::State => json(&BipartiteReport {
            coefficients: rows(out.coefficients()),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauerReport {
    pub joules: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerReport {
    pub inner: Complex64,
}

#[derive(Serialize)]
struct ExpectReport {
    expectation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierMeasureReport {
    pub alternatives: Vec<InformationState>,
    pub probabilities: Vec<f64>,
    pub counts: Vec<u64>,
}

fn hier_measure_cmd(a: &HierMeasure) -> Outcome {
    let state: HierarchicState = read_json(&a.state)?;
    let (d, counts) =
        hier_measure_counts(&state, None, a.trials, a.seed).map_err(|e| e.to_string())?;
    json(&HierMeasureReport {
        alternatives: d.alternatives,
        probabilities: d.probabilities,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZpReport {
    pub profile: String,
    pub p: u32,
    #[serde(rename = "K")]
    pub depth: usize,
    pub value: f64,
}

fn zp(a: &ZpIntegrate) -> Outcome {
    let (name, value) = match a.profile {
        Profile::One => ("one", zp_integrate(|_| 1.0, a.p, a.depth)),
        Profile::NormSqrt => (
            "norm-sqrt",
            zp_integrate(|x| scale_profile(x).powi(2), a.p, a.depth),
        ),
        Profile::Norm => (
            "norm",
            zp_integrate(|x| x.norm().to_f64().powi(2), a.p, a.depth),
        ),
    };
    let value = value.map_err(|e| e.to_string())?;
    json(&ZpReport {
        profile: name.into(),
        p: a.p,
        depth: a.depth,
        value,
    })
}
