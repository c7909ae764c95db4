//! Hierarchic Hilbert space over p-adic tree prefixes.
//!
//! A state assigns complex amplitudes to digit-string prefixes `x₀…x_k`
//! (coarsest digit first). Prefix kets are orthonormal within a level, and
//! level `k` enters the inner product with weight `p^(-k)`:
//!
//! ```text
//! ⟨a|b⟩ = Σ_k p^(-k) Σ_{|w| = k+1} conj(a_w) b_w
//! ```
//!
//! Amplitudes are stored unweighted; the weights live only in the inner
//! product.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::padic::{is_prime, PAdicLabel, PadicError, MAX_DEPTH, MAX_PRIME};
use crate::sampling;

pub const UNIT_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const OPERATOR_HERMITIAN_TOL: f64 = 1e-12;
/// Most evaluation points [`zp_integrate`] will visit (`2^20`).
pub const ZP_BUDGET: u64 = 1 << 20;

const ZERO_AMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HierarchicError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("states live in different spaces: (p={p1}, K={k1}) vs (p={p2}, K={k2})")]
    MismatchedSpace {
        p1: u32,
        k1: usize,
        p2: u32,
        k2: usize,
    },
    #[error("invalid prefix {prefix:?}: {reason}")]
    InvalidPrefix { prefix: Vec<u8>, reason: String },
    #[error("amplitudes must be finite")]
    NonFinite,
    #[error("state marked unit has self inner product {0}")]
    NotUnit(f64),
    #[error("state is numerically zero")]
    ZeroVector,
    #[error("state is not decomposable over the given information states: {0}")]
    NotDecomposable(String),
    #[error("level {level} operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { level: usize, deviation: f64 },
    #[error("operator level {level} outside depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("{points} evaluation points exceed the budget of {budget}")]
    BudgetExceeded { points: u128, budget: u64 },
}

type Result<T> = std::result::Result<T, HierarchicError>;

fn check_space(p: u32, depth: usize) -> Result<()> {
    if !(p <= MAX_PRIME && is_prime(p)) {
        return Err(PadicError::NotPrime(p).into());
    }
    if !(1..=MAX_DEPTH).contains(&depth) {
        return Err(PadicError::InvalidDepth(depth).into());
    }
    Ok(())
}

fn check_prefix(p: u32, depth: usize, prefix: &[u8]) -> Result<()> {
    let reason = if prefix.is_empty() {
        "empty".to_string()
    } else if prefix.len() > depth {
        format!("longer than depth {depth}")
    } else if prefix.iter().any(|&d| u32::from(d) >= p) {
        format!("digit not below p = {p}")
    } else {
        return Ok(());
    };
    Err(HierarchicError::InvalidPrefix {
        prefix: prefix.to_vec(),
        reason,
    })
}

/// Weight `p^(-k)` of the level holding prefixes of length `k + 1`.
pub fn level_weight(p: u32, level: usize) -> f64 {
    f64::from(p).powi(-(level as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Amplitudes as given.
    Raw,
    /// Self inner product equal to 1.
    Unit,
}

/// A vector in the hierarchic space of `(p, K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicState {
    p: u32,
    depth: usize,
    mode: Normalization,
    terms: BTreeMap<Vec<u8>, Complex64>,
}

impl HierarchicState {
    pub fn new(
        p: u32,
        depth: usize,
        mode: Normalization,
        terms: impl IntoIterator<Item = (Vec<u8>, Complex64)>,
    ) -> Result<Self> {
        check_space(p, depth)?;
        let mut map = BTreeMap::new();
        for (prefix, amp) in terms {
            check_prefix(p, depth, &prefix)?;
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(HierarchicError::NonFinite);
            }
            *map.entry(prefix).or_insert(Complex64::zero()) += amp;
        }
        let s = Self {
            p,
            depth,
            mode,
            terms: map,
        };
        if mode == Normalization::Unit {
            let n = s.norm_sqr();
            if (n - 1.0).abs() > UNIT_TOL {
                return Err(HierarchicError::NotUnit(n));
            }
        }
        Ok(s)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn mode(&self) -> Normalization {
        self.mode
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, Complex64> {
        &self.terms
    }

    pub fn amplitude(&self, prefix: &[u8]) -> Complex64 {
        self.terms
            .get(prefix)
            .copied()
            .unwrap_or_else(Complex64::zero)
    }

    /// `⟨self|self⟩`.
    pub fn norm_sqr(&self) -> f64 {
        self.terms
            .iter()
            .map(|(w, a)| level_weight(self.p, w.len() - 1) * a.norm_sqr())
            .sum()
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.p == other.p && self.depth == other.depth {
            Ok(())
        } else {
            Err(HierarchicError::MismatchedSpace {
                p1: self.p,
                k1: self.depth,
                p2: other.p,
                k2: other.depth,
            })
        }
    }

    /// Rescaled copy with unit self inner product.
    pub fn to_unit(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < ZERO_AMP {
            return Err(HierarchicError::ZeroVector);
        }
        Ok(Self {
            p: self.p,
            depth: self.depth,
            mode: Normalization::Unit,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a / n)).collect(),
        })
    }

    /// `Σ c_i s_i` without renormalization; the result is raw.
    pub fn linear_combination(terms: &[(Complex64, &HierarchicState)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(HierarchicError::ZeroVector)?;
        let mut map: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
        for (c, s) in terms {
            first.same_space(s)?;
            for (w, a) in &s.terms {
                *map.entry(w.clone()).or_insert(Complex64::zero()) += c * a;
            }
        }
        map.retain(|_, a| a.norm() > 0.0);
        Ok(Self {
            p: first.p,
            depth: first.depth,
            mode: Normalization::Raw,
            terms: map,
        })
    }

    /// Amplitudes of the prefixes of length `level + 1`.
    pub fn level_terms(&self, level: usize) -> impl Iterator<Item = (&Vec<u8>, &Complex64)> {
        self.terms.iter().filter(move |(w, _)| w.len() == level + 1)
    }
}

/// The vector of a classical information state: amplitude 1 on every prefix
/// of `x`, optionally scaled to unit norm.
pub fn basis_info_state(x: &PAdicLabel, mode: Normalization) -> HierarchicState {
    let scale = match mode {
        Normalization::Raw => 1.0,
        Normalization::Unit => {
            let n: f64 = (0..x.depth()).map(|k| level_weight(x.p(), k)).sum();
            n.sqrt().recip()
        }
    };
    let terms = (1..=x.depth())
        .map(|len| (x.prefix(len).to_vec(), Complex64::new(scale, 0.0)))
        .collect();
    HierarchicState {
        p: x.p(),
        depth: x.depth(),
        mode,
        terms,
    }
}

/// Level-weighted inner product, conjugate-linear in `a`.
pub fn hier_inner(a: &HierarchicState, b: &HierarchicState) -> Result<Complex64> {
    a.same_space(b)?;
    let (small, large, flip) = if a.terms.len() <= b.terms.len() {
        (a, b, false)
    } else {
        (b, a, true)
    };
    let mut sum = Complex64::zero();
    for (w, x) in &small.terms {
        if let Some(y) = large.terms.get(w) {
            let term = if flip { y.conj() * x } else { x.conj() * y };
            sum += level_weight(a.p, w.len() - 1) * term;
        }
    }
    Ok(sum)
}

/// Exact inner product of two raw information-state vectors:
/// `Σ_{k<m} p^(-k)`, where `m` is the first differing digit index.
pub fn basis_overlap_exact(x: &PAdicLabel, y: &PAdicLabel) -> Result<BigRational> {
    let m = x.first_difference(y)?.unwrap_or(x.depth());
    let p = BigInt::from(x.p());
    let mut sum = BigRational::zero();
    let mut weight = BigRational::one();
    for _ in 0..m {
        sum += &weight;
        weight /= &p;
    }
    Ok(sum)
}

/// Renormalized linear combination of states in one space.
pub fn hier_superpose(terms: &[(Complex64, HierarchicState)]) -> Result<HierarchicState> {
    let refs: Vec<(Complex64, &HierarchicState)> = terms.iter().map(|(c, s)| (*c, s)).collect();
    HierarchicState::linear_combination(&refs)?.to_unit()
}

/// `φ(x) = ⟨φ|[x]⟩` with `[x]` the raw information state of `x`.
pub fn wavefunction_eval(phi: &HierarchicState, x: &PAdicLabel) -> Result<Complex64> {
    hier_inner(phi, &basis_info_state(x, Normalization::Raw))
}

/// Model amplitude profile `|x|_p^{1/2}`; at most 1.
pub fn scale_profile(x: &PAdicLabel) -> f64 {
    x.norm().to_f64().sqrt()
}

fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

const ZP_BLOCK: u64 = 4096;

/// Normalized Haar integral over `Z_p` at depth `K`: the mean of `f` over all
/// `p^K` depth-`K` digit strings. Exact for functions constant on depth-`K`
/// balls.
///
/// Blocks are evaluated in parallel and combined by pairwise summation, so
/// the result does not depend on the thread count.
pub fn zp_integrate<F>(f: F, p: u32, depth: usize) -> Result<f64>
where
    F: Fn(&PAdicLabel) -> f64 + Sync,
{
    check_space(p, depth)?;
    let points = u128::from(p)
        .checked_pow(depth as u32)
        .filter(|&n| n <= u128::from(ZP_BUDGET))
        .ok_or(HierarchicError::BudgetExceeded {
            points: u128::from(p).saturating_pow(depth as u32),
            budget: ZP_BUDGET,
        })? as u64;
    let blocks = points.div_ceil(ZP_BLOCK);
    let sums: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * ZP_BLOCK;
            let end = (start + ZP_BLOCK).min(points);
            let values: Vec<f64> = (start..end)
                .map(|i| f(&PAdicLabel::from_index_unchecked(i, p, depth)))
                .collect();
            pairwise_sum(&values)
        })
        .collect();
    Ok(pairwise_sum(&sums) / points as f64)
}

/// One level of an operator tree.
#[derive(Debug, Clone, PartialEq)]
pub enum LevelOperator {
    Zero,
    Identity,
    /// Entries keyed by `(row prefix, column prefix)`; absent entries are zero.
    Sparse(BTreeMap<(Vec<u8>, Vec<u8>), Complex64>),
}

/// A measurement operator given level by level, from coarsest to finest.
///
/// Levels past the last supplied one act as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTree {
    p: u32,
    depth: usize,
    levels: Vec<LevelOperator>,
}

impl OperatorTree {
    pub fn new(p: u32, depth: usize, levels: Vec<LevelOperator>) -> Result<Self> {
        check_space(p, depth)?;
        if levels.len() > depth {
            return Err(HierarchicError::LevelOutOfRange {
                level: levels.len() - 1,
                depth,
            });
        }
        for (k, level) in levels.iter().enumerate() {
            if let LevelOperator::Sparse(entries) = level {
                check_level(p, depth, k, entries)?;
            }
        }
        Ok(Self { p, depth, levels })
    }

    pub fn identity(p: u32, depth: usize) -> Result<Self> {
        Self::new(p, depth, vec![LevelOperator::Identity; depth])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn levels(&self) -> &[LevelOperator] {
        &self.levels
    }
}

fn check_level(
    p: u32,
    depth: usize,
    level: usize,
    entries: &BTreeMap<(Vec<u8>, Vec<u8>), Complex64>,
) -> Result<()> {
    let mut deviation: f64 = 0.0;
    for ((row, col), v) in entries {
        for w in [row, col] {
            check_prefix(p, depth, w)?;
            if w.len() != level + 1 {
                return Err(HierarchicError::InvalidPrefix {
                    prefix: w.clone(),
                    reason: format!("level {level} needs length {}", level + 1),
                });
            }
        }
        let mirror = entries
            .get(&(col.clone(), row.clone()))
            .copied()
            .unwrap_or_else(Complex64::zero);
        deviation = deviation.max((v - mirror.conj()).norm());
    }
    if deviation > OPERATOR_HERMITIAN_TOL {
        return Err(HierarchicError::NotHermitian { level, deviation });
    }
    Ok(())
}

/// `Σ_k p^(-k) ⟨s_k|A_k|s_k⟩`, with `s_k` the level-`k` amplitudes of `s`.
pub fn operator_tree_expect(a: &OperatorTree, s: &HierarchicState) -> Result<f64> {
    if a.p != s.p || a.depth != s.depth {
        return Err(HierarchicError::MismatchedSpace {
            p1: a.p,
            k1: a.depth,
            p2: s.p,
            k2: s.depth,
        });
    }
    let mut total = Complex64::zero();
    for (k, level) in a.levels.iter().enumerate() {
        let contraction = match level {
            LevelOperator::Zero => Complex64::zero(),
            LevelOperator::Identity => s
                .level_terms(k)
                .map(|(_, amp)| Complex64::new(amp.norm_sqr(), 0.0))
                .sum(),
            LevelOperator::Sparse(entries) => entries
                .iter()
                .map(|((row, col), v)| s.amplitude(row).conj() * v * s.amplitude(col))
                .sum(),
        };
        total += level_weight(a.p, k) * contraction;
    }
    debug_assert!(total.im.abs() <= 1e-10 * total.norm().max(1.0));
    Ok(total.re)
}

/// A classical reading of the hierarchy: one full digit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InformationState(pub PAdicLabel);

impl InformationState {
    pub fn label(&self) -> &PAdicLabel {
        &self.0
    }
}

/// Coefficients of a state over mutually orthogonal unit information states.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub alternatives: Vec<InformationState>,
    pub coefficients: Vec<Complex64>,
    /// `|α_i|² / ⟨s|s⟩`.
    pub probabilities: Vec<f64>,
}

/// Projects `s` onto the unit information states of `alternatives`.
///
/// Without explicit alternatives, the full-depth prefixes carrying nonzero
/// amplitude are used. Fails if the alternatives are not mutually orthogonal
/// or if the projection leaves a residual above [`RESIDUAL_TOL`].
pub fn decompose(
    s: &HierarchicState,
    alternatives: Option<&[PAdicLabel]>,
) -> Result<Decomposition> {
    let labels: Vec<PAdicLabel> = match alternatives {
        Some(given) => given.to_vec(),
        None => s
            .level_terms(s.depth - 1)
            .filter(|(_, a)| a.norm() > ZERO_AMP)
            .map(|(w, _)| PAdicLabel::new(s.p, w.clone()))
            .collect::<std::result::Result<_, _>>()?,
    };
    if labels.is_empty() {
        return Err(HierarchicError::NotDecomposable(
            "no information states to project on".into(),
        ));
    }
    let units: Vec<HierarchicState> = labels
        .iter()
        .map(|x| basis_info_state(x, Normalization::Unit))
        .collect();
    for (i, u) in units.iter().enumerate() {
        for v in &units[i + 1..] {
            if hier_inner(u, v)?.norm() > RESIDUAL_TOL {
                return Err(HierarchicError::NotDecomposable(
                    "information states are not mutually orthogonal".into(),
                ));
            }
        }
    }
    let coefficients = units
        .iter()
        .map(|u| hier_inner(u, s))
        .collect::<Result<Vec<_>>>()?;
    let total = s.norm_sqr();
    if total < ZERO_AMP {
        return Err(HierarchicError::ZeroVector);
    }
    let mut parts: Vec<(Complex64, &HierarchicState)> = vec![(Complex64::one(), s)];
    parts.extend(coefficients.iter().zip(&units).map(|(c, u)| (-c, u)));
    let residual = HierarchicState::linear_combination(&parts)?
        .norm_sqr()
        .sqrt();
    if residual > RESIDUAL_TOL * total.sqrt() {
        return Err(HierarchicError::NotDecomposable(format!(
            "residual norm {residual:e}"
        )));
    }
    Ok(Decomposition {
        probabilities: coefficients.iter().map(|c| c.norm_sqr() / total).collect(),
        alternatives: labels.into_iter().map(InformationState).collect(),
        coefficients,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicMeasurement {
    pub index: usize,
    pub outcome: InformationState,
    /// The selected unit information state.
    pub post_state: HierarchicState,
}

/// Collapses `s` onto one of its information states with probability `|α_i|²`.
pub fn hier_measure(
    s: &HierarchicState,
    alternatives: Option<&[PAdicLabel]>,
    seed: u64,
) -> Result<HierarchicMeasurement> {
    let d = decompose(s, alternatives)?;
    let index = sampling::sample_once(&d.probabilities, seed);
    let outcome = d.alternatives[index].clone();
    Ok(HierarchicMeasurement {
        index,
        post_state: basis_info_state(&outcome.0, Normalization::Unit),
        outcome,
    })
}

/// Outcome counts of `trials` independent measurements, in decomposition order.
pub fn hier_measure_counts(
    s: &HierarchicState,
    alternatives: Option<&[PAdicLabel]>,
    trials: u64,
    seed: u64,
) -> Result<(Decomposition, Vec<u64>)> {
    let d = decompose(s, alternatives)?;
    let counts = sampling::sample_counts(&d.probabilities, trials, seed);
    Ok((d, counts))
}

/// Two-tree superposition `α{A,{Ai,Aj}} + β{B,{Bi',Bj'}}` for a composite
/// with three whole-states and two-state parts.
///
/// Each tree is the information state (whole, part i, part j) with `p = 3`,
/// `K = 3`: whole `↑ = 0`, `0 = 1`, `↓ = 2`; part `↑ = 0`, `↓ = 1`. The two
/// trees differ in the whole's digit and are therefore orthogonal.
pub fn meson_superposition(
    alpha: Complex64,
    beta: Complex64,
) -> Result<(HierarchicState, [PAdicLabel; 2])> {
    let a = PAdicLabel::new(3, vec![0, 0, 1])?;
    let b = PAdicLabel::new(3, vec![2, 1, 0])?;
    let state = hier_superpose(&[
        (alpha, basis_info_state(&a, Normalization::Unit)),
        (beta, basis_info_state(&b, Normalization::Unit)),
    ])?;
    Ok((state, [a, b]))
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    prefix: Vec<u32>,
    amp: Complex64,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    p: u32,
    #[serde(rename = "K")]
    depth: usize,
    mode: Normalization,
    terms: Vec<TermRepr>,
}

fn digits_from_json(p: u32, digits: &[u32]) -> Result<Vec<u8>> {
    digits
        .iter()
        .map(|&d| {
            u8::try_from(d).map_err(|_| HierarchicError::InvalidPrefix {
                prefix: vec![],
                reason: format!("digit {d} not below p = {p}"),
            })
        })
        .collect()
}

impl Serialize for HierarchicState {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            p: self.p,
            depth: self.depth,
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| TermRepr {
                    prefix: w.iter().map(|&d| u32::from(d)).collect(),
                    amp: *a,
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for HierarchicState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = StateRepr::deserialize(d)?;
        let terms = repr
            .terms
            .iter()
            .map(|t| Ok((digits_from_json(repr.p, &t.prefix)?, t.amp)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        HierarchicState::new(repr.p, repr.depth, repr.mode, terms).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    row: Vec<u32>,
    col: Vec<u32>,
    val: Complex64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum LevelRepr {
    Zero,
    Identity,
    Sparse { entries: Vec<EntryRepr> },
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    p: u32,
    #[serde(rename = "K")]
    depth: usize,
    levels: Vec<LevelRepr>,
}

impl Serialize for OperatorTree {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let widen = |w: &Vec<u8>| w.iter().map(|&d| u32::from(d)).collect();
        TreeRepr {
            p: self.p,
            depth: self.depth,
            levels: self
                .levels
                .iter()
                .map(|l| match l {
                    LevelOperator::Zero => LevelRepr::Zero,
                    LevelOperator::Identity => LevelRepr::Identity,
                    LevelOperator::Sparse(m) => LevelRepr::Sparse {
                        entries: m
                            .iter()
                            .map(|((r, c), v)| EntryRepr {
                                row: widen(r),
                                col: widen(c),
                                val: *v,
                            })
                            .collect(),
                    },
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for OperatorTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = TreeRepr::deserialize(d)?;
        let p = repr.p;
        let levels = repr
            .levels
            .into_iter()
            .map(|l| {
                Ok(match l {
                    LevelRepr::Zero => LevelOperator::Zero,
                    LevelRepr::Identity => LevelOperator::Identity,
                    LevelRepr::Sparse { entries } => {
                        let mut m = BTreeMap::new();
                        for e in entries {
                            let key = (digits_from_json(p, &e.row)?, digits_from_json(p, &e.col)?);
                            *m.entry(key).or_insert(Complex64::zero()) += e.val;
                        }
                        LevelOperator::Sparse(m)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        OperatorTree::new(p, repr.depth, levels).map_err(D::Error::custom)
    }
}
