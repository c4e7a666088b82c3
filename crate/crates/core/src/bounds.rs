//! Closed-form efficiency bounds for AMD and leakage-resilient AMD codes.
//!
//! Logarithms are base 2 unless written `log_q`. Inequalities involving
//! logs or `e⁻¹` are evaluated in `f64` and accepted with absolute slack
//! [`SLACK`].

use serde::Serialize;
use thiserror::Error;

use crate::adversary::ratio_to_f64;
use crate::amd::AmdParams;
use crate::lvamd::{LvStrongInstance, LvWeakInstance};
use crate::wiretap2::Wt2Instance;
use crate::Ratio;

pub const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("group size G must exceed 1")]
    DegenerateGroup,
    #[error("{0}")]
    OutOfRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One evaluated inequality `lhs (<= | >=) rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: Vec<(String, f64)>,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    fn new(name: &str, inputs: &[(&str, f64)], lhs: f64, relation: Relation, rhs: f64) -> Self {
        let satisfied = match relation {
            Relation::AtMost => lhs <= rhs + SLACK,
            Relation::AtLeast => lhs + SLACK >= rhs,
        };
        BoundReport {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            relation,
            rhs,
            satisfied,
            note: None,
        }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

fn check_group(g: f64, m: f64) -> Result<(), BoundError> {
    if g <= 1.0 {
        return Err(BoundError::DegenerateGroup);
    }
    if m < 1.0 {
        return Err(BoundError::OutOfRange(format!("message count M = {m} below 1")));
    }
    Ok(())
}

/// Least δ with `G ≥ (M-1)/δ + 1`, exactly: `(M-1)/(G-1)`.
pub fn amd_weak_bound(m: u64, g: u64) -> Result<Ratio, BoundError> {
    check_group(g as f64, m as f64)?;
    Ok(Ratio::new(m - 1, g - 1))
}

/// Least δ with `G ≥ (M-1)/δ² + 1`: `sqrt((M-1)/(G-1))`.
pub fn amd_strong_bound(m: f64, g: f64) -> Result<f64, BoundError> {
    check_group(g, m)?;
    Ok(((m - 1.0) / (g - 1.0)).sqrt())
}

/// `G ≥ (M-1)/δ + 1`.
pub fn amd_weak_check(m: f64, g: f64, delta: f64) -> BoundReport {
    BoundReport::new(
        "weak AMD",
        &[("M", m), ("G", g), ("delta", delta)],
        g,
        Relation::AtLeast,
        (m - 1.0) / delta + 1.0,
    )
}

/// `G ≥ (M-1)/δ² + 1`.
pub fn amd_strong_check(m: f64, g: f64, delta: f64) -> BoundReport {
    BoundReport::new(
        "strong AMD",
        &[("M", m), ("G", g), ("delta", delta)],
        g,
        Relation::AtLeast,
        (m - 1.0) / (delta * delta) + 1.0,
    )
}

/// `G^{1-ρ} ≥ (M-1)/δ² + 1`.
pub fn strong_rho_table_check(m: f64, g: f64, rho: f64, delta: f64) -> BoundReport {
    BoundReport::new(
        "strong rho-AMD table row",
        &[("M", m), ("G", g), ("rho", rho), ("delta", delta)],
        g.powf(1.0 - rho),
        Relation::AtLeast,
        (m - 1.0) / (delta * delta) + 1.0,
    )
}

/// `M ≥ G^ρ/δ`.
pub fn weak_rho_table_check(m: f64, g: f64, rho: f64, delta: f64) -> BoundReport {
    BoundReport::new(
        "weak rho-AMD table row",
        &[("M", m), ("G", g), ("rho", rho), ("delta", delta)],
        m,
        Relation::AtLeast,
        g.powf(rho) / delta,
    )
}

/// `k ≤ n(1-ρ) + (2 log δ - 1)/log q` together with the table row at
/// `M = q^k`, `G = q^n`.
pub fn strong_rho_bound_check(n: usize, k: usize, rho: f64, delta: f64, q: u64) -> Vec<BoundReport> {
    let (nf, kf, lq) = (n as f64, k as f64, (q as f64).log2());
    let inputs = [("n", nf), ("k", kf), ("rho", rho), ("delta", delta), ("q", q as f64)];
    let rate = BoundReport::new(
        "strong rho-AMD message length",
        &inputs,
        kf,
        Relation::AtMost,
        nf * (1.0 - rho) + (2.0 * delta.log2() - 1.0) / lq,
    )
    .with_note("log δ and the constant 1 both in bits");
    let table = strong_rho_table_check((q as f64).powf(kf), (q as f64).powf(nf), rho, delta);
    vec![rate, table]
}

/// `q^{ρn-k} ≤ δ` and `(q^k - 1)/(q^n - 1) ≤ δ`.
pub fn weak_rho_bound_check(n: usize, k: usize, rho: f64, delta: f64, q: u64) -> Vec<BoundReport> {
    let (nf, kf, qf) = (n as f64, k as f64, q as f64);
    let inputs = [("n", nf), ("k", kf), ("rho", rho), ("delta", delta), ("q", qf)];
    vec![
        BoundReport::new(
            "weak rho-AMD leakage",
            &inputs,
            qf.powf(rho * nf - kf),
            Relation::AtMost,
            delta,
        ),
        BoundReport::new(
            "weak rho-AMD redundancy",
            &inputs,
            (qf.powf(kf) - 1.0) / (qf.powf(nf) - 1.0),
            Relation::AtMost,
            delta,
        ),
    ]
}

fn check_unit(name: &str, x: f64, open_top: bool) -> Result<(), BoundError> {
    let ok = x >= 0.0 && if open_top { x < 1.0 } else { x <= 1.0 };
    if !ok {
        return Err(BoundError::OutOfRange(format!("{name} = {x} out of range")));
    }
    Ok(())
}

/// Strong LLR `(α, r)` to the largest ρ: `αr/(n log q)`.
pub fn llr_strong_convert(alpha: f64, r_bits: f64, n: usize, q: u64) -> Result<f64, BoundError> {
    check_unit("alpha", alpha, false)?;
    if r_bits < 0.0 || n == 0 {
        return Err(BoundError::OutOfRange("need r >= 0 and n >= 1".into()));
    }
    Ok(alpha * r_bits / (n as f64 * (q as f64).log2()))
}

/// Strong ρ to `(max α, min r)`: `r ≥ log(1/δ) + nρ log q`, `α ≤ nρ log q / r`.
pub fn rho_strong_convert(rho: f64, n: usize, q: u64, delta: f64) -> Result<(f64, f64), BoundError> {
    check_unit("rho", rho, false)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(BoundError::OutOfRange(format!("delta = {delta} out of (0, 1]")));
    }
    let leak = n as f64 * rho * (q as f64).log2();
    let r_min = (1.0 / delta).log2() + leak;
    let alpha = if r_min > 0.0 { leak / r_min } else { 0.0 };
    Ok((alpha, r_min))
}

/// Largest ρ for the AMD code viewed as a strong LLR code:
/// `(1 - log_q((n-1)/δ))/n`.
pub fn strong_llr_corollary(n: usize, q: u64, delta: f64) -> f64 {
    let nf = n as f64;
    (1.0 - ((nf - 1.0) / delta).log2() / (q as f64).log2()) / nf
}

/// Weak LLR α to the largest ρ: `αk/n`.
pub fn llr_weak_convert(alpha: f64, k: usize, n: usize) -> Result<f64, BoundError> {
    check_unit("alpha", alpha, false)?;
    if n == 0 {
        return Err(BoundError::OutOfRange("n must be positive".into()));
    }
    Ok(alpha * k as f64 / n as f64)
}

/// Weak ρ to the largest α: `ρn/k`.
pub fn rho_weak_convert(rho: f64, k: usize, n: usize) -> Result<f64, BoundError> {
    check_unit("rho", rho, false)?;
    if k == 0 {
        return Err(BoundError::OutOfRange("k must be positive".into()));
    }
    Ok(rho * n as f64 / k as f64)
}

/// Largest ρ for the weak LLR construction: `(1 - log_q(2/δ))/n`.
pub fn weak_llr_corollary(n: usize, q: u64, delta: f64) -> f64 {
    (1.0 - (2.0 / delta).log2() / (q as f64).log2()) / n as f64
}

/// Least `G` for α-strong and α-weak LLR codes. The weak value is the
/// larger of its two conditions.
pub fn llr_table_bounds(m: f64, delta: f64, alpha: f64) -> Result<(f64, f64), BoundError> {
    check_unit("alpha", alpha, true)?;
    let c = (m - 1.0) * (1.0 - (-1.0f64).exp());
    let strong = c / delta.powf(2.0 / (1.0 - alpha)) + 1.0;
    let weak = (c / delta.powf(1.0 / (1.0 - alpha)) + 1.0).max(m.powf(alpha) * c / delta + 1.0);
    Ok((strong, weak))
}

/// Rate ceiling `1 - ρ` for wiretap II codes.
pub fn wt2_rate_bound(rho: Ratio) -> Ratio {
    Ratio::from_integer(1) - rho
}

/// Message and group sizes of a code, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CodeDims {
    pub log2_messages: f64,
    pub log2_group: f64,
}

impl CodeDims {
    fn powers(q: u64, k: usize, n: usize) -> Self {
        let lq = (q as f64).log2();
        CodeDims {
            log2_messages: k as f64 * lq,
            log2_group: n as f64 * lq,
        }
    }

    pub fn amd(p: &AmdParams) -> Self {
        Self::powers(p.q(), p.d(), p.codeword_len())
    }

    pub fn wt2(inst: &Wt2Instance) -> Self {
        Self::powers(inst.field().modulus(), inst.k_msg(), inst.n())
    }

    pub fn lv_strong(inst: &LvStrongInstance) -> Self {
        Self::powers(inst.field().modulus(), inst.k(), inst.n())
    }

    /// Messages range over `(F_q^*)^k`.
    pub fn lv_weak(inst: &LvWeakInstance) -> Self {
        let q = inst.field().modulus();
        CodeDims {
            log2_messages: inst.k() as f64 * ((q - 1) as f64).log2(),
            log2_group: inst.n() as f64 * (q as f64).log2(),
        }
    }

    pub fn messages(&self) -> f64 {
        self.log2_messages.exp2()
    }

    pub fn group(&self) -> f64 {
        self.log2_group.exp2()
    }
}

/// `log₂ G - log₂ M`: the per-code stand-in for the minimum tag length.
pub fn tag_overhead(dims: &CodeDims) -> f64 {
    dims.log2_group - dims.log2_messages
}

/// Every applicable row for an instance, with `delta` substituted for the
/// security parameter.
pub fn rows_for_amd(p: &AmdParams, delta: Ratio) -> Vec<BoundReport> {
    let dims = CodeDims::amd(p);
    let d = ratio_to_f64(delta);
    vec![
        amd_weak_check(dims.messages(), dims.group(), d),
        amd_strong_check(dims.messages(), dims.group(), d),
    ]
}

pub fn rows_for_lv_strong(inst: &LvStrongInstance, delta: Ratio) -> Vec<BoundReport> {
    let rho = ratio_to_f64(inst.rho());
    let rate = ratio_to_f64(Ratio::new(inst.k() as u64, inst.n() as u64));
    let mut rows = strong_rho_bound_check(inst.n(), inst.k(), rho, ratio_to_f64(delta), inst.field().modulus());
    rows.push(BoundReport::new(
        "rate vs 1 - rho",
        &[("k", inst.k() as f64), ("n", inst.n() as f64), ("rho", rho)],
        rate,
        Relation::AtMost,
        ratio_to_f64(wt2_rate_bound(inst.rho())),
    ));
    rows
}

pub fn rows_for_lv_weak(inst: &LvWeakInstance, rho: Ratio, delta: Ratio) -> Vec<BoundReport> {
    let (r, d) = (ratio_to_f64(rho), ratio_to_f64(delta));
    let dims = CodeDims::lv_weak(inst);
    let mut rows = weak_rho_bound_check(inst.n(), inst.k(), r, d, inst.field().modulus());
    rows.push(weak_rho_table_check(dims.messages(), dims.group(), r, d));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn amd_bounds() {
        assert_eq!(amd_weak_bound(1, 13).unwrap(), Ratio::from_integer(0));
        assert_eq!(amd_weak_bound(7, 13).unwrap(), Ratio::new(1, 2));
        assert_eq!(amd_weak_bound(7, 1), Err(BoundError::DegenerateGroup));
        assert_eq!(amd_strong_bound(1.0, 5.0).unwrap(), 0.0);
        let s = amd_strong_bound(7.0, 343.0).unwrap();
        assert!(close(s, (6.0f64 / 342.0).sqrt()));
        assert!((s - 0.1325).abs() < 1e-4);
        assert!(2.0 / 7.0 >= s);
        assert_eq!(amd_strong_bound(7.0, 1.0), Err(BoundError::DegenerateGroup));
    }

    #[test]
    fn strong_rho_examples() {
        let rows = strong_rho_bound_check(4, 1, 0.25, 0.4, 5);
        assert!(rows.iter().all(|r| r.satisfied));
        assert!((rows[0].rhs - 1.431).abs() < 1e-3);
        assert!(close(rows[1].lhs, 125.0));
        assert!(close(rows[1].rhs, 26.0));

        // no leakage: the table row is the strong AMD bound
        let at_zero = strong_rho_table_check(49.0, 7f64.powi(4), 0.0, 0.3);
        let amd = amd_strong_check(49.0, 7f64.powi(4), 0.3);
        assert!(close(at_zero.lhs, amd.lhs) && close(at_zero.rhs, amd.rhs));

        let vacuous = strong_rho_bound_check(4, 1, 0.25, 1.0, 5);
        assert!(close(vacuous[0].rhs, 3.0 - 1.0 / 5f64.log2()));
    }

    #[test]
    fn weak_rho_examples() {
        let rows = weak_rho_bound_check(3, 2, 1.0 / 3.0, 0.3, 11);
        assert!(rows.iter().all(|r| r.satisfied));
        assert!(close(rows[0].lhs, 1.0 / 11.0));

        let full = weak_rho_bound_check(3, 3, 0.0, 0.5, 5);
        assert!(close(full[1].lhs, 1.0));
        assert!(!full[1].satisfied);
        assert!(weak_rho_bound_check(3, 3, 0.0, 1.0, 5)[1].satisfied);

        let exposed = weak_rho_bound_check(3, 3, 1.0, 0.5, 5);
        assert!(!exposed[0].satisfied);
    }

    #[test]
    fn strong_conversions() {
        assert_eq!(llr_strong_convert(0.0, 8.0, 3, 7).unwrap(), 0.0);
        let (alpha, r) = rho_strong_convert(0.0, 3, 7, 0.25).unwrap();
        assert!(close(r, 2.0) && alpha == 0.0);
        for a in [0.1, 0.4, 0.9] {
            let delta = 2.0 / 7.0 * 7f64.powf(a);
            let rho = strong_llr_corollary(3, 7, delta);
            assert!(close(rho, a / 3.0));
            assert!(rho < 1.0 / 3.0);
        }
        assert!(llr_strong_convert(1.5, 1.0, 3, 7).is_err());
    }

    #[test]
    fn weak_conversions() {
        assert_eq!(llr_weak_convert(0.0, 2, 3).unwrap(), 0.0);
        assert!(close(llr_weak_convert(0.3, 2, 3).unwrap(), 0.2));
        assert_eq!(llr_weak_convert(1.0, 4, 4).unwrap(), 1.0);
        assert!(close(rho_weak_convert(0.2, 2, 3).unwrap(), 0.3));
        // δ = 2/q^{1-α(n-1)} recovers ρ = α(n-1)/n
        let (q, n, a) = (11u64, 3usize, 0.2);
        let delta = 2.0 / (q as f64).powf(1.0 - a * (n as f64 - 1.0));
        assert!(close(weak_llr_corollary(n, q, delta), a * 2.0 / 3.0));
    }

    #[test]
    fn llr_table() {
        let (s, w) = llr_table_bounds(1.0, 0.25, 0.5).unwrap();
        assert_eq!((s, w), (1.0, 1.0));
        let (s, _) = llr_table_bounds(49.0, 0.25, 0.5).unwrap();
        let c = 48.0 * (1.0 - (-1.0f64).exp());
        assert!(close(s, c / 0.25f64.powi(4) + 1.0));
        assert!(llr_table_bounds(49.0, 0.25, 1.0).is_err());
    }

    #[test]
    fn rates_and_overheads() {
        assert_eq!(wt2_rate_bound(Ratio::from_integer(0)), Ratio::from_integer(1));
        assert_eq!(wt2_rate_bound(Ratio::new(1, 4)), Ratio::new(3, 4));
        let inst = LvStrongInstance::new(5, 1, 4).unwrap();
        assert!(Ratio::new(inst.k() as u64, inst.n() as u64) <= wt2_rate_bound(inst.rho()));
        let p = AmdParams::new(7, 1).unwrap();
        assert!(close(tag_overhead(&CodeDims::amd(&p)), 2.0 * 7f64.log2()));
    }

    proptest::proptest! {
        #[test]
        fn conversion_round_trip_never_widens(
            rho in 0.0f64..1.0,
            n in 1usize..8,
            q in proptest::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
            delta in 0.01f64..1.0,
        ) {
            let (alpha, r) = rho_strong_convert(rho, n, q, delta).unwrap();
            let back = llr_strong_convert(alpha, r, n, q).unwrap();
            proptest::prop_assert!(back <= rho + SLACK);
            // and the leaked bits α·r stay put going the other way
            let (a2, r2) = rho_strong_convert(back, n, q, delta).unwrap();
            proptest::prop_assert!(a2 * r2 <= alpha * r + SLACK);
        }
    }
}
