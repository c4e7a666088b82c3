//! Exact distributions and optimal limited-view attack oracles.
//!
//! Every probability is an exact [`Ratio`] over the enumeration count. The
//! optimal additive adversary reading positions `S` decomposes view by view:
//! for each observed `a = x_S` it plays the offset that maximises forgeries
//! among the encodings consistent with `a`. Offsets are scanned in
//! lexicographic order and the first maximum is kept.
//!
//! Positions in read sets are 0-based; share ids in robust-ramp rows are
//! 1-based, matching [`crate::rampsss`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::amd::AmdParams;
use crate::field::PrimeField;
use crate::linalg::{all_vectors, subsets};
use crate::lvamd::{LvStrongInstance, LvWeakInstance};
use crate::rampsss::{RampScheme, RobustRampScheme};
use crate::wiretap2::Wt2Instance;
use crate::{CodeError, Ratio};

/// Default bound on elementary steps per enumeration.
pub const DEFAULT_CAP: u64 = 100_000_000;

/// Absolute slack when comparing quantities measured in bits.
pub const LOG_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("enumeration needs {needed} steps, over the cap of {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("corrupt count {count} exceeds the budget {budget}")]
    OverBudget { count: usize, budget: usize },
    #[error("read set {0:?} is not a set of distinct in-range positions")]
    ReadSet(Vec<usize>),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Renders a ratio as `"num/den"`.
pub fn ratio_string(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn serialize_ratio<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

pub fn ratio_to_f64(r: Ratio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn zero() -> Ratio {
    Ratio::from_integer(0)
}

fn check_cap(needed: u128, cap: u64) -> Result<(), AttackError> {
    if needed > cap as u128 {
        return Err(AttackError::CapExceeded { needed, cap });
    }
    Ok(())
}

fn count_vectors(q: u64, len: usize) -> u128 {
    (q as u128).saturating_pow(len as u32)
}

/// Finite distribution with exact weights, kept sorted by outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution<T> {
    support: Vec<(T, Ratio)>,
}

impl<T: Ord + Clone> Distribution<T> {
    /// Validates positive weights summing to 1 over distinct outcomes.
    pub fn new(mut weights: Vec<(T, Ratio)>) -> Result<Self, AttackError> {
        weights.sort_by(|a, b| a.0.cmp(&b.0));
        if weights.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(AttackError::InvalidDistribution("repeated outcome".into()));
        }
        if weights.iter().any(|(_, p)| *p == zero()) {
            return Err(AttackError::InvalidDistribution("zero weight".into()));
        }
        let total = weights.iter().fold(zero(), |acc, (_, p)| acc + p);
        if total != Ratio::from_integer(1) {
            return Err(AttackError::InvalidDistribution(format!(
                "weights sum to {}",
                ratio_string(&total)
            )));
        }
        Ok(Distribution { support: weights })
    }

    pub fn point(x: T) -> Self {
        Distribution {
            support: vec![(x, Ratio::from_integer(1))],
        }
    }

    /// Uniform over a multiset of equally likely outcomes.
    pub fn uniform_over<I: IntoIterator<Item = T>>(outcomes: I) -> Result<Self, AttackError> {
        let mut counts: BTreeMap<T, u64> = BTreeMap::new();
        let mut total = 0u64;
        for x in outcomes {
            *counts.entry(x).or_default() += 1;
            total += 1;
        }
        if total == 0 {
            return Err(AttackError::InvalidDistribution("empty support".into()));
        }
        Ok(Distribution {
            support: counts
                .into_iter()
                .map(|(x, c)| (x, Ratio::new(c, total)))
                .collect(),
        })
    }

    pub fn support(&self) -> &[(T, Ratio)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn prob(&self, x: &T) -> Ratio {
        self.support
            .binary_search_by(|(y, _)| y.cmp(x))
            .map_or_else(|_| zero(), |i| self.support[i].1)
    }

    pub fn max_prob(&self) -> Ratio {
        self.support.iter().map(|(_, p)| *p).max().unwrap_or_else(zero)
    }
}

/// Half the L1 distance.
pub fn statistical_distance<T: Ord + Clone>(p: &Distribution<T>, q: &Distribution<T>) -> Ratio {
    let (a, b) = (p.support(), q.support());
    let (mut i, mut j) = (0, 0);
    let mut sum = zero();
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                sum += a[i].1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                sum += b[j].1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let (x, y) = (a[i].1, b[j].1);
                sum += if x > y { x - y } else { y - x };
                i += 1;
                j += 1;
            }
        }
    }
    sum / Ratio::from_integer(2)
}

/// `H_∞(X) = -log₂ max_x Pr[X = x]`.
pub fn min_entropy<T: Ord + Clone>(p: &Distribution<T>) -> f64 {
    -ratio_to_f64(p.max_prob()).log2()
}

/// `E_z max_x Pr[X = x | Z = z] = Σ_z max_x Pr[X = x, Z = z]`, exactly.
pub fn guessing_probability<X: Ord + Clone, Z: Ord + Clone>(joint: &Distribution<(X, Z)>) -> Ratio {
    let mut best: BTreeMap<&Z, Ratio> = BTreeMap::new();
    for ((_, z), p) in joint.support() {
        let e = best.entry(z).or_insert_with(zero);
        if *p > *e {
            *e = *p;
        }
    }
    best.values().fold(zero(), |acc, p| acc + p)
}

/// Average-case conditional min-entropy in bits.
pub fn conditional_min_entropy<X: Ord + Clone, Z: Ord + Clone>(joint: &Distribution<(X, Z)>) -> f64 {
    -ratio_to_f64(guessing_probability(joint)).log2()
}

/// A finite code whose encoder randomness can be enumerated.
pub trait EnumerableCode: Sync {
    fn field(&self) -> PrimeField;
    fn codeword_len(&self) -> usize;
    /// Message space in lexicographic order.
    fn messages(&self) -> Vec<Vec<u64>>;
    fn randomness_count(&self) -> u128;
    /// `Enc(m)` for every randomness value, in lexicographic randomness order.
    fn codewords(&self, m: &[u64]) -> Vec<Vec<u64>>;
    /// `None` is ⊥.
    fn decode_raw(&self, x: &[u64]) -> Option<Vec<u64>>;

    /// Whether `x` decodes to a message other than `m`.
    fn forges(&self, x: &[u64], m: &[u64]) -> bool {
        matches!(self.decode_raw(x), Some(d) if d != m)
    }
}

impl EnumerableCode for AmdParams {
    fn field(&self) -> PrimeField {
        AmdParams::field(self)
    }

    fn codeword_len(&self) -> usize {
        AmdParams::codeword_len(self)
    }

    fn messages(&self) -> Vec<Vec<u64>> {
        all_vectors(self.q(), self.d()).collect()
    }

    fn randomness_count(&self) -> u128 {
        self.q() as u128
    }

    fn codewords(&self, m: &[u64]) -> Vec<Vec<u64>> {
        (0..self.q()).map(|r| self.encode_raw(m, r)).collect()
    }

    fn decode_raw(&self, x: &[u64]) -> Option<Vec<u64>> {
        self.verify_raw(x).then(|| x[..self.d()].to_vec())
    }

    fn forges(&self, x: &[u64], m: &[u64]) -> bool {
        x[..self.d()] != *m && self.verify_raw(x)
    }
}

impl EnumerableCode for Wt2Instance {
    fn field(&self) -> PrimeField {
        Wt2Instance::field(self)
    }

    fn codeword_len(&self) -> usize {
        self.n()
    }

    fn messages(&self) -> Vec<Vec<u64>> {
        all_vectors(self.field().modulus(), self.k_msg()).collect()
    }

    fn randomness_count(&self) -> u128 {
        count_vectors(self.field().modulus(), self.randomness_len())
    }

    fn codewords(&self, m: &[u64]) -> Vec<Vec<u64>> {
        all_vectors(self.field().modulus(), self.randomness_len())
            .map(|r| self.encode_raw(m, &r))
            .collect()
    }

    fn decode_raw(&self, x: &[u64]) -> Option<Vec<u64>> {
        Some(self.syndrome_raw(x))
    }
}

impl EnumerableCode for LvStrongInstance {
    fn field(&self) -> PrimeField {
        LvStrongInstance::field(self)
    }

    fn codeword_len(&self) -> usize {
        self.n()
    }

    fn messages(&self) -> Vec<Vec<u64>> {
        all_vectors(self.field().modulus(), self.k()).collect()
    }

    fn randomness_count(&self) -> u128 {
        let q = self.field().modulus();
        q as u128 * count_vectors(q, self.wt2().randomness_len())
    }

    fn codewords(&self, m: &[u64]) -> Vec<Vec<u64>> {
        let q = self.field().modulus();
        let mut out = Vec::new();
        for i in 0..q {
            for j in all_vectors(q, self.wt2().randomness_len()) {
                out.push(self.encode_raw(m, i, &j));
            }
        }
        out
    }

    fn decode_raw(&self, x: &[u64]) -> Option<Vec<u64>> {
        LvStrongInstance::decode_raw(self, x)
    }
}

impl EnumerableCode for LvWeakInstance {
    fn field(&self) -> PrimeField {
        LvWeakInstance::field(self)
    }

    fn codeword_len(&self) -> usize {
        self.n()
    }

    /// `(F_q^*)^k` only.
    fn messages(&self) -> Vec<Vec<u64>> {
        all_vectors(self.field().modulus() - 1, self.k())
            .map(|m| m.into_iter().map(|c| c + 1).collect())
            .collect()
    }

    fn randomness_count(&self) -> u128 {
        1
    }

    fn codewords(&self, m: &[u64]) -> Vec<Vec<u64>> {
        vec![self.encode_raw(m)]
    }

    fn decode_raw(&self, x: &[u64]) -> Option<Vec<u64>> {
        self.accepts_raw(x).then(|| x[..self.k()].to_vec())
    }
}

/// Exact distribution of `Enc(m)` under uniform encoder randomness.
pub fn codeword_distribution<C: EnumerableCode + ?Sized>(
    code: &C,
    m: &[u64],
    cap: u64,
) -> Result<Distribution<Vec<u64>>, AttackError> {
    check_cap(code.randomness_count(), cap)?;
    Distribution::uniform_over(code.codewords(m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyEntry {
    pub view: Vec<u64>,
    pub offset: Vec<u64>,
}

/// Additive tampering `x ↦ x + g(x_S)`, tabulated on the observed views.
/// Views missing from the table get the zero offset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TamperStrategy {
    pub read_set: Vec<usize>,
    /// Sorted by view.
    pub table: Vec<StrategyEntry>,
}

impl TamperStrategy {
    pub fn offset_for(&self, view: &[u64]) -> Option<&[u64]> {
        self.table
            .binary_search_by(|e| e.view.as_slice().cmp(view))
            .ok()
            .map(|i| self.table[i].offset.as_slice())
    }

    /// `x + g(x_S)`; `x` has `n` positions.
    pub fn apply(&self, x: &[u64], field: PrimeField) -> Vec<u64> {
        let view: Vec<u64> = self.read_set.iter().map(|&i| x[i]).collect();
        match self.offset_for(&view) {
            Some(off) => x.iter().zip(off).map(|(&a, &b)| field.add(a, b)).collect(),
            None => x.to_vec(),
        }
    }
}

/// One equally weighted encoder outcome.
struct Sample {
    word: Vec<u64>,
    view: Vec<u64>,
    msg: Vec<u64>,
}

struct ViewChoice<'a> {
    view: &'a [u64],
    offset: usize,
    wins: u64,
}

/// Per-view optimal offsets: for each view, the first offset (in the given
/// order) maximising the number of consistent samples that forge.
fn best_offsets<'a, F>(
    samples: &'a [Sample],
    offsets: &[Vec<u64>],
    field: PrimeField,
    forges: F,
) -> Vec<ViewChoice<'a>>
where
    F: Fn(&[u64], &[u64]) -> bool,
{
    let mut groups: BTreeMap<&[u64], Vec<&Sample>> = BTreeMap::new();
    for s in samples {
        groups.entry(&s.view).or_default().push(s);
    }
    let len = samples.first().map_or(0, |s| s.word.len());
    let mut buf = vec![0u64; len];
    groups
        .into_iter()
        .map(|(view, group)| {
            let mut best = (0usize, 0u64);
            for (oi, off) in offsets.iter().enumerate() {
                let wins = group
                    .iter()
                    .filter(|s| {
                        for ((b, &w), &o) in buf.iter_mut().zip(&s.word).zip(off) {
                            *b = field.add(w, o);
                        }
                        forges(&buf, &s.msg)
                    })
                    .count() as u64;
                if wins > best.1 {
                    best = (oi, wins);
                    if wins == group.len() as u64 {
                        break;
                    }
                }
            }
            ViewChoice {
                view,
                offset: best.0,
                wins: best.1,
            }
        })
        .collect()
}

fn check_read_set(read_set: &[usize], n: usize) -> Result<(), AttackError> {
    let ok = read_set.iter().all(|&i| i < n) && read_set.windows(2).all(|w| w[0] < w[1]);
    if !ok {
        return Err(AttackError::ReadSet(read_set.to_vec()));
    }
    Ok(())
}

fn samples_for<C: EnumerableCode + ?Sized>(code: &C, msgs: &[Vec<u64>], read_set: &[usize]) -> Vec<Sample> {
    msgs.iter()
        .flat_map(|m| {
            code.codewords(m).into_iter().map(move |word| Sample {
                view: read_set.iter().map(|&i| word[i]).collect(),
                word,
                msg: m.clone(),
            })
        })
        .collect()
}

struct CellResult {
    success: Ratio,
    strategy: TamperStrategy,
    stats: EntropyStats,
}

fn attack_cell<C: EnumerableCode + ?Sized>(
    code: &C,
    msgs: &[Vec<u64>],
    read_set: &[usize],
    cap: u64,
) -> Result<CellResult, AttackError> {
    let n = code.codeword_len();
    check_read_set(read_set, n)?;
    let q = code.field().modulus();
    let count = code.randomness_count() * msgs.len() as u128;
    check_cap(count.saturating_mul(count_vectors(q, n)), cap)?;
    let samples = samples_for(code, msgs, read_set);
    let offsets: Vec<Vec<u64>> = all_vectors(q, n).collect();
    let choices = best_offsets(&samples, &offsets, code.field(), |x, m| code.forges(x, m));
    let wins: u64 = choices.iter().map(|c| c.wins).sum();
    let strategy = TamperStrategy {
        read_set: read_set.to_vec(),
        table: choices
            .iter()
            .map(|c| StrategyEntry {
                view: c.view.to_vec(),
                offset: offsets[c.offset].clone(),
            })
            .collect(),
    };
    Ok(CellResult {
        success: Ratio::new(wins, samples.len() as u64),
        strategy,
        stats: EntropyStats::of(&samples, read_set.len(), q)?,
    })
}

/// Optimal tampering against `Enc(m)` by an adversary reading `read_set`
/// and writing every position.
pub fn optimal_lv_attack<C: EnumerableCode + ?Sized>(
    code: &C,
    m: &[u64],
    read_set: &[usize],
    cap: u64,
) -> Result<(Ratio, TamperStrategy), AttackError> {
    let cell = attack_cell(code, &[m.to_vec()], read_set, cap)?;
    Ok((cell.success, cell.strategy))
}

/// Success of a fixed strategy against `Enc(m)`, by direct simulation.
pub fn evaluate_strategy<C: EnumerableCode + ?Sized>(
    code: &C,
    m: &[u64],
    strategy: &TamperStrategy,
) -> Ratio {
    let words = code.codewords(m);
    let wins = words
        .iter()
        .filter(|x| {
            let y = strategy.apply(x, code.field());
            matches!(code.decode_raw(&y), Some(d) if d != m)
        })
        .count();
    Ratio::new(wins as u64, words.len() as u64)
}

/// Min-entropy bookkeeping for one joint (codeword, view) distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyStats {
    /// `2^{-H̃_∞(X|Z)}`, exact.
    #[serde(serialize_with = "serialize_ratio")]
    pub guess_probability: Ratio,
    pub min_entropy: f64,
    pub conditional_min_entropy: f64,
    /// `|S| log₂ q`.
    pub leak_bits: f64,
}

impl EntropyStats {
    fn of(samples: &[Sample], read: usize, q: u64) -> Result<Self, AttackError> {
        let joint = Distribution::uniform_over(samples.iter().map(|s| (s.word.clone(), s.view.clone())))?;
        let marginal = Distribution::uniform_over(samples.iter().map(|s| s.word.clone()))?;
        let guess = guessing_probability(&joint);
        Ok(EntropyStats {
            guess_probability: guess,
            min_entropy: min_entropy(&marginal),
            conditional_min_entropy: -ratio_to_f64(guess).log2(),
            leak_bits: read as f64 * (q as f64).log2(),
        })
    }

    /// `H̃_∞(X|Z) ≥ H_∞(X) - ℓ`.
    pub fn leakage_lemma_holds(&self) -> bool {
        self.conditional_min_entropy >= self.min_entropy - self.leak_bits - LOG_SLACK
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackRow {
    /// `None` when the message is uniform (weak codes).
    pub message: Option<Vec<u64>>,
    pub read_set: Vec<usize>,
    /// Robust ramp only: the reconstruction subset attaining `success`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruct: Option<Vec<usize>>,
    #[serde(serialize_with = "serialize_ratio")]
    pub success: Ratio,
    #[serde(flatten)]
    pub stats: EntropyStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub rows: Vec<AttackRow>,
    #[serde(serialize_with = "serialize_ratio")]
    pub worst: Ratio,
    #[serde(serialize_with = "serialize_ratio")]
    pub bound: Ratio,
    /// `worst ≤ bound`.
    pub pass: bool,
    /// Weak codes: whether `k - (k+1)ρ ≥ 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precondition: Option<bool>,
    /// Every row satisfies `H̃_∞(X|Z) ≥ H_∞(X) - |S| log₂ q`.
    pub leakage_lemma: bool,
    /// Every row satisfies `2^{-H̃_∞(X|Z)} ≤ δ` for the δ the family uses.
    pub guessing_bound: bool,
}

impl AttackReport {
    fn finish(rows: Vec<AttackRow>, bound: Ratio, guess_ok: impl Fn(&AttackRow, Ratio) -> bool) -> Self {
        let worst = rows.iter().map(|r| r.success).max().unwrap_or_else(zero);
        let leakage_lemma = rows.iter().all(|r| r.stats.leakage_lemma_holds());
        let guessing_bound = rows.iter().all(|r| guess_ok(r, worst));
        AttackReport {
            rows,
            worst,
            bound,
            pass: worst <= bound,
            precondition: None,
            leakage_lemma,
            guessing_bound,
        }
    }

    pub fn worst_row(&self) -> Option<&AttackRow> {
        self.rows.iter().find(|r| r.success == self.worst)
    }
}

/// All read sets of size `0..=budget`, by size then lexicographically.
pub fn read_sets(n: usize, budget: usize) -> Vec<Vec<usize>> {
    (0..=budget.min(n)).flat_map(|s| subsets(n, s)).collect()
}

/// Per-message certification: every message against every read set within
/// `budget`. The guessing attack lies in the search space, so each row's
/// guessing probability is at most its own success when there are two or
/// more messages.
pub fn empirical_delta_for<C: EnumerableCode + ?Sized>(
    code: &C,
    budget: usize,
    bound: Ratio,
    cap: u64,
) -> Result<AttackReport, AttackError> {
    let msgs = code.messages();
    let sets = read_sets(code.codeword_len(), budget);
    let tasks: Vec<(&Vec<u64>, &Vec<usize>)> =
        msgs.iter().flat_map(|m| sets.iter().map(move |s| (m, s))).collect();
    let rows = tasks
        .par_iter()
        .map(|&(m, s)| {
            let cell = attack_cell(code, std::slice::from_ref(m), s, cap)?;
            Ok(AttackRow {
                message: Some(m.clone()),
                read_set: s.clone(),
                reconstruct: None,
                success: cell.success,
                stats: cell.stats,
            })
        })
        .collect::<Result<Vec<_>, AttackError>>()?;
    let many = msgs.len() >= 2;
    Ok(AttackReport::finish(rows, bound, |r, _| {
        !many || r.stats.guess_probability <= r.success
    }))
}

/// Non-leaky certification of the AMD code against `(d+1)/q`.
pub fn empirical_delta_amd(params: &AmdParams, cap: u64) -> Result<AttackReport, AttackError> {
    empirical_delta_for(params, 0, params.delta(), cap)
}

/// Strong certification against `(k+1)/q` over all read sets of size at
/// most `n - k - 2`.
pub fn empirical_delta_strong(inst: &LvStrongInstance, cap: u64) -> Result<AttackReport, AttackError> {
    empirical_delta_for(inst, inst.read_budget(), inst.delta(), cap)
}

/// Weak certification against `ψk/(q-1)` with a uniform message over
/// `(F_q^*)^k` and read sets of size at most `⌊ρn⌋`.
pub fn empirical_delta_weak(
    inst: &LvWeakInstance,
    rho: Ratio,
    cap: u64,
) -> Result<AttackReport, AttackError> {
    let msgs = inst.messages();
    let budget = crate::floor_times(rho, inst.n() as u64) as usize;
    let sets = read_sets(inst.n(), budget);
    let rows = sets
        .par_iter()
        .map(|s| {
            let cell = attack_cell(inst, &msgs, s, cap)?;
            Ok(AttackRow {
                message: None,
                read_set: s.clone(),
                reconstruct: None,
                success: cell.success,
                stats: cell.stats,
            })
        })
        .collect::<Result<Vec<_>, AttackError>>()?;
    let mut report = AttackReport::finish(rows, inst.delta(), |r, _| {
        msgs.len() < 2 || r.stats.guess_probability <= r.success
    });
    report.precondition = Some(inst.leakage_condition(rho));
    Ok(report)
}

fn max_pairwise_distance(dists: &[Distribution<Vec<u64>>]) -> Ratio {
    let mut worst = zero();
    for (a, p) in dists.iter().enumerate() {
        for q in &dists[a + 1..] {
            worst = worst.max(statistical_distance(p, q));
        }
    }
    worst
}

/// `max_{m0, m1} SD(Enc(m0)_S, Enc(m1)_S)` for one read set, any size.
pub fn wt2_view_distance(inst: &Wt2Instance, read_set: &[usize], cap: u64) -> Result<Ratio, AttackError> {
    check_read_set(read_set, inst.n())?;
    let msgs = EnumerableCode::messages(inst);
    check_cap(inst.randomness_count() * msgs.len() as u128, cap)?;
    let dists = msgs
        .iter()
        .map(|m| {
            Distribution::uniform_over(
                inst.codewords(m)
                    .into_iter()
                    .map(|x| read_set.iter().map(|&i| x[i]).collect::<Vec<_>>()),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(max_pairwise_distance(&dists))
}

/// Worst view distance over all read sets of size at most `n - k_msg`.
pub fn wt2_secrecy_check(inst: &Wt2Instance, cap: u64) -> Result<Ratio, AttackError> {
    let sets = read_sets(inst.n(), inst.randomness_len());
    let per_set = sets
        .par_iter()
        .map(|s| wt2_view_distance(inst, s, cap))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(per_set.into_iter().max().unwrap_or_else(zero))
}

/// Worst distance between the views of two secret blocks on any
/// `set_size` shares, sharing randomness uniform.
pub fn ramp_privacy_distance(scheme: &RampScheme, set_size: usize, cap: u64) -> Result<Ratio, AttackError> {
    let q = scheme.field().modulus();
    let secrets: Vec<Vec<u64>> = all_vectors(q, scheme.secret_len()).collect();
    let rand_count = count_vectors(q, scheme.t());
    check_cap(rand_count * secrets.len() as u128 * secrets.len() as u128, cap)?;
    let views = |s: &[u64]| -> Vec<Vec<u64>> {
        all_vectors(q, scheme.t())
            .map(|rand| scheme.share_raw(s, &rand))
            .collect()
    };
    let all_shares: Vec<Vec<Vec<u64>>> = secrets.iter().map(|s| views(s)).collect();
    privacy_over_sets(&all_shares, scheme.parties(), set_size)
}

/// As [`ramp_privacy_distance`], with secrets encoded by the inner code and
/// both code and sharing randomness uniform.
pub fn rr_privacy_distance(
    scheme: &RobustRampScheme,
    set_size: usize,
    cap: u64,
) -> Result<Ratio, AttackError> {
    let q = scheme.field().modulus();
    let code = scheme.code();
    let ramp = scheme.ramp();
    let secrets = EnumerableCode::messages(code);
    let per_secret = code.randomness_count() * count_vectors(q, ramp.t());
    check_cap(per_secret * secrets.len() as u128 * secrets.len() as u128, cap)?;
    let all_shares: Vec<Vec<Vec<u64>>> = secrets
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for c in code.codewords(s) {
                for rand in all_vectors(q, ramp.t()) {
                    out.push(ramp.share_raw(&c, &rand));
                }
            }
            out
        })
        .collect();
    privacy_over_sets(&all_shares, ramp.parties(), set_size)
}

/// `all_shares[s]` lists the share vectors of secret `s`, equally weighted.
fn privacy_over_sets(all_shares: &[Vec<Vec<u64>>], parties: usize, set_size: usize) -> Result<Ratio, AttackError> {
    let per_set = subsets(parties, set_size)
        .par_iter()
        .map(|set| {
            let dists = all_shares
                .iter()
                .map(|shares| {
                    Distribution::uniform_over(
                        shares.iter().map(|x| set.iter().map(|&i| x[i]).collect::<Vec<_>>()),
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(max_pairwise_distance(&dists))
        })
        .collect::<Result<Vec<_>, AttackError>>()?;
    Ok(per_set.into_iter().max().unwrap_or_else(zero))
}

/// Optimal share-offset attack on one secret: the adversary reads the
/// shares `corrupt` (1-based ids), adds an offset to them, and recovery
/// runs on `reconstruct` (exactly `r` ids containing `corrupt`).
pub fn rr_optimal_attack(
    scheme: &RobustRampScheme,
    secret: &[u64],
    corrupt: &[usize],
    reconstruct: &[usize],
    cap: u64,
) -> Result<(Ratio, TamperStrategy), AttackError> {
    let samples = rr_samples(scheme, secret, corrupt, cap)?;
    let (success, strategy) = rr_attack_on(scheme, &samples, corrupt, reconstruct, cap)?;
    Ok((success, strategy))
}

fn rr_samples(
    scheme: &RobustRampScheme,
    secret: &[u64],
    corrupt: &[usize],
    cap: u64,
) -> Result<Vec<Sample>, AttackError> {
    let ramp = scheme.ramp();
    let code = scheme.code();
    let q = scheme.field().modulus();
    crate::check_len("secret", code.k(), secret.len())?;
    let ok = corrupt.iter().all(|&id| (1..=ramp.parties()).contains(&id))
        && corrupt.windows(2).all(|w| w[0] < w[1]);
    if !ok {
        return Err(AttackError::ReadSet(corrupt.to_vec()));
    }
    check_cap(code.randomness_count() * count_vectors(q, ramp.t()), cap)?;
    let mut samples = Vec::new();
    for c in code.codewords(secret) {
        for rand in all_vectors(q, ramp.t()) {
            let shares = ramp.share_raw(&c, &rand);
            samples.push(Sample {
                view: corrupt.iter().map(|&id| shares[id - 1]).collect(),
                word: c.clone(),
                msg: secret.to_vec(),
            });
        }
    }
    Ok(samples)
}

/// Tampered recovery on `reconstruct` equals the inner codeword plus the
/// recovery matrix applied to the share offset, so the attack runs on
/// codewords with the induced offsets.
fn rr_attack_on(
    scheme: &RobustRampScheme,
    samples: &[Sample],
    corrupt: &[usize],
    reconstruct: &[usize],
    cap: u64,
) -> Result<(Ratio, TamperStrategy), AttackError> {
    let ramp = scheme.ramp();
    let field = scheme.field();
    let q = field.modulus();
    if reconstruct.len() != ramp.r()
        || reconstruct.windows(2).any(|w| w[0] >= w[1])
        || !corrupt.iter().all(|c| reconstruct.contains(c))
    {
        return Err(AttackError::ReadSet(reconstruct.to_vec()));
    }
    check_cap((samples.len() as u128).saturating_mul(count_vectors(q, corrupt.len())), cap)?;
    let rec = ramp.recovery_matrix(reconstruct)?;
    let cols: Vec<usize> = corrupt
        .iter()
        .map(|c| reconstruct.iter().position(|r| r == c).expect("contained"))
        .collect();
    let share_offsets: Vec<Vec<u64>> = all_vectors(q, corrupt.len()).collect();
    let induced: Vec<Vec<u64>> = share_offsets
        .iter()
        .map(|d| {
            let mut full = vec![0u64; ramp.r()];
            for (&col, &v) in cols.iter().zip(d) {
                full[col] = v;
            }
            rec.apply(&full)
        })
        .collect();
    let code = scheme.code();
    let choices = best_offsets(samples, &induced, field, |x, m| code.forges(x, m));
    let wins: u64 = choices.iter().map(|c| c.wins).sum();
    let strategy = TamperStrategy {
        read_set: corrupt.to_vec(),
        table: choices
            .iter()
            .map(|c| StrategyEntry {
                view: c.view.to_vec(),
                offset: share_offsets[c.offset].clone(),
            })
            .collect(),
    };
    Ok((Ratio::new(wins, samples.len() as u64), strategy))
}

/// Robustness against `corrupt_count` tampered shares: every secret, every
/// corrupt set, and the worst reconstruction subset containing it. The
/// certified bound is the inner code's `(k+1)/q`.
pub fn rr_robustness_attack(
    scheme: &RobustRampScheme,
    corrupt_count: usize,
    cap: u64,
) -> Result<AttackReport, AttackError> {
    let budget = scheme.corrupt_budget();
    if corrupt_count > budget {
        return Err(AttackError::OverBudget {
            count: corrupt_count,
            budget,
        });
    }
    let ramp = scheme.ramp();
    let parties = ramp.parties();
    let q = scheme.field().modulus();
    let secrets = EnumerableCode::messages(scheme.code());
    let sets: Vec<Vec<usize>> = subsets(parties, corrupt_count)
        .into_iter()
        .map(|s| s.into_iter().map(|i| i + 1).collect())
        .collect();
    let recon: Vec<Vec<usize>> = subsets(parties, ramp.r())
        .into_iter()
        .map(|s| s.into_iter().map(|i| i + 1).collect())
        .collect();
    let tasks: Vec<(&Vec<u64>, &Vec<usize>)> =
        secrets.iter().flat_map(|s| sets.iter().map(move |c| (s, c))).collect();
    let rows = tasks
        .par_iter()
        .map(|&(s, c)| {
            let samples = rr_samples(scheme, s, c, cap)?;
            let mut best: Option<(Ratio, &Vec<usize>)> = None;
            for rset in recon.iter().filter(|rs| c.iter().all(|id| rs.contains(id))) {
                let (success, _) = rr_attack_on(scheme, &samples, c, rset, cap)?;
                if best.is_none_or(|(b, _)| success > b) {
                    best = Some((success, rset));
                }
            }
            let (success, rset) = best.expect("some reconstruction subset contains the corrupt set");
            Ok(AttackRow {
                message: Some(s.clone()),
                read_set: c.clone(),
                reconstruct: Some(rset.clone()),
                success,
                stats: EntropyStats::of(&samples, c.len(), q)?,
            })
        })
        .collect::<Result<Vec<_>, AttackError>>()?;
    let bound = scheme.code().delta();
    Ok(AttackReport::finish(rows, bound, |r, _| r.stats.guess_probability <= bound))
}

/// Success of a fixed share-offset strategy, simulated through
/// [`crate::rampsss::rr_share`] and [`crate::rampsss::rr_recover`].
pub fn rr_evaluate_strategy(
    scheme: &RobustRampScheme,
    secret: &[u64],
    reconstruct: &[usize],
    strategy: &TamperStrategy,
) -> Result<Ratio, AttackError> {
    use crate::linalg::Vector;
    use crate::rampsss::{rr_recover, rr_share};
    let field = scheme.field();
    let q = field.modulus();
    let s = Vector::new(field, secret.to_vec());
    let jlen = scheme.code().wt2().randomness_len();
    let (mut wins, mut total) = (0u64, 0u64);
    for i in 0..q {
        for j in all_vectors(q, jlen) {
            for rand in all_vectors(q, scheme.ramp().t()) {
                let mut shares = rr_share(
                    &s,
                    field.elem(i),
                    &Vector::new(field, j.clone()),
                    &Vector::new(field, rand),
                    scheme,
                )?;
                let view: Vec<u64> = strategy
                    .read_set
                    .iter()
                    .map(|&id| shares.slots()[id - 1].expect("honest shares"))
                    .collect();
                if let Some(off) = strategy.offset_for(&view) {
                    for (&id, &d) in strategy.read_set.iter().zip(off) {
                        let v = shares.slots()[id - 1].expect("honest shares");
                        shares.set(id, Some(field.add(v, d)))?;
                    }
                }
                total += 1;
                if matches!(rr_recover(&shares, reconstruct, scheme)?.message(), Some(m) if m.coords() != secret) {
                    wins += 1;
                }
            }
        }
    }
    Ok(Ratio::new(wins, total))
}
