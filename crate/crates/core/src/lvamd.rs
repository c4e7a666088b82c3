//! Limited-view AMD codes.
//!
//! An adversary reads the components of the stored word indexed by a set
//! `S` with `|S| ≤ ⌊ρn⌋` and then adds an offset chosen as a function of
//! what it read. Two codes resist it:
//!
//! * [`LvStrongInstance`]: `Enc(m) = WtIIenc(AMDenc(m))`. The wiretap layer
//!   makes the view independent of the AMD randomness and, being linear,
//!   turns any offset into a fixed offset on the AMD codeword.
//! * [`LvWeakInstance`]: deterministic, `m ↦ (m ‖ Σ_j Π_i m_i^{g_ij})` over
//!   `(F_q^*)^k`, secure for a uniformly random message.

use serde::Serialize;

use crate::amd::AmdParams;
use crate::field::{FieldElement, PrimeField};
use crate::linalg::{ExponentMatrix, Vector};
use crate::wiretap2::Wt2Instance;
use crate::{check_field, check_len, CodeError, Decoded, Ratio};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LvStrongInstance {
    amd: AmdParams,
    wt2: Wt2Instance,
}

impl LvStrongInstance {
    /// Message length `k`, inner AMD codeword length `k + 2`, outer length `n`.
    pub fn new(q: u64, k: usize, n: usize) -> Result<Self, CodeError> {
        let amd = AmdParams::new(q, k)?;
        let wt2 = Wt2Instance::new(amd.field(), n, k + 2)?;
        Self::from_parts(amd, wt2)
    }

    pub fn from_parts(amd: AmdParams, wt2: Wt2Instance) -> Result<Self, CodeError> {
        if amd.field() != wt2.field() {
            return Err(CodeError::InvalidParameters(
                "AMD and wiretap layers must share the field".into(),
            ));
        }
        check_len("wiretap message (AMD codeword)", amd.codeword_len(), wt2.k_msg())?;
        Ok(LvStrongInstance { amd, wt2 })
    }

    pub fn amd(&self) -> &AmdParams {
        &self.amd
    }

    pub fn wt2(&self) -> &Wt2Instance {
        &self.wt2
    }

    pub fn field(&self) -> PrimeField {
        self.amd.field()
    }

    pub fn k(&self) -> usize {
        self.amd.d()
    }

    pub fn n(&self) -> usize {
        self.wt2.n()
    }

    /// Leakage fraction `(n - (k+2))/n`.
    pub fn rho(&self) -> Ratio {
        self.wt2.rho()
    }

    /// `⌊ρn⌋`, which is exactly `n - (k+2)` here.
    pub fn read_budget(&self) -> usize {
        self.wt2.randomness_len()
    }

    /// Nominal security `(k+1)/q`, inherited from the AMD layer.
    pub fn delta(&self) -> Ratio {
        self.amd.delta()
    }

    pub(crate) fn encode_raw(&self, m: &[u64], i: u64, j: &[u64]) -> Vec<u64> {
        self.wt2.encode_raw(&self.amd.encode_raw(m, i), j)
    }

    pub(crate) fn decode_raw(&self, x: &[u64]) -> Option<Vec<u64>> {
        let mut a = self.wt2.syndrome_raw(x);
        if self.amd.verify_raw(&a) {
            a.truncate(self.k());
            Some(a)
        } else {
            None
        }
    }
}

/// `WtIIenc(AMDenc(m, i), j)`.
pub fn lv_strong_encode(
    m: &Vector,
    i: FieldElement,
    j: &Vector,
    inst: &LvStrongInstance,
) -> Result<Vector, CodeError> {
    let inner = crate::amd::amd_encode(m, i, &inst.amd)?;
    crate::wiretap2::wt2_encode(&inner, j, &inst.wt2)
}

/// `AMDdec(WtIIdec(x))`.
pub fn lv_strong_decode(x: &Vector, inst: &LvStrongInstance) -> Result<Decoded, CodeError> {
    let inner = crate::wiretap2::wt2_decode(x, &inst.wt2)?;
    crate::amd::amd_decode(&inner, &inst.amd)
}

/// Finds an exponent matrix for the weak code: `k × k` over `Z_{q-1}`, unit
/// determinant, pairwise-distinct entries in every column, and all entries
/// in `[1, ⌊ψk⌋]`.
///
/// Candidates are the shifted circulants `g_ij = c + ((i + s·j) mod w)`
/// (0-based `i`, `j`) with `k ≤ w`, every column of which is a run of `k`
/// consecutive residues mod `w` and hence repetition-free. They are tried
/// with `w` descending from `⌊ψk⌋`, then offset `c` ascending, then stride
/// `s` ascending; the first one with a unit determinant wins.
pub fn lv_weak_matrix(k: usize, field: PrimeField, psi: Ratio) -> Result<ExponentMatrix, CodeError> {
    if k == 0 {
        return Err(CodeError::InvalidParameters("k must be at least 1".into()));
    }
    let modulus = field.modulus() - 1;
    let bound = crate::floor_times(psi, k as u64) as usize;
    for w in (k..=bound).rev() {
        for c in 1..=bound - w + 1 {
            for s in 0..w {
                let entries: Vec<u64> = (0..k)
                    .flat_map(|i| (0..k).map(move |j| (c + (i + s * j) % w) as u64))
                    .collect();
                let g = ExponentMatrix::new(modulus, k, k, entries)?;
                if g.columns_distinct() && g.is_unimodular() {
                    return Ok(g);
                }
            }
        }
    }
    Err(CodeError::InvalidParameters(format!(
        "no {k}x{k} exponent matrix with entries <= {bound} is invertible over Z_{modulus}"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LvWeakInstance {
    field: PrimeField,
    k: usize,
    beta: u64,
    gmat: ExponentMatrix,
    #[serde(serialize_with = "crate::adversary::serialize_ratio")]
    psi: Ratio,
}

impl LvWeakInstance {
    /// Searches the matrix with [`lv_weak_matrix`].
    pub fn search(q: u64, k: usize, psi: Ratio) -> Result<Self, CodeError> {
        let field = PrimeField::new(q)?;
        let gmat = lv_weak_matrix(k, field, psi)?;
        Self::new(field, gmat, psi)
    }

    pub fn new(field: PrimeField, gmat: ExponentMatrix, psi: Ratio) -> Result<Self, CodeError> {
        let k = gmat.rows();
        check_len("exponent matrix columns", k, gmat.cols())?;
        if k == 0 {
            return Err(CodeError::InvalidParameters("k must be at least 1".into()));
        }
        if gmat.modulus() != field.modulus() - 1 {
            return Err(CodeError::InvalidParameters(format!(
                "exponent matrix must live over Z_{}",
                field.modulus() - 1
            )));
        }
        if !gmat.is_unimodular() {
            return Err(CodeError::InvalidParameters(
                "exponent matrix determinant is not a unit".into(),
            ));
        }
        if !gmat.columns_distinct() {
            return Err(CodeError::InvalidParameters(
                "exponent matrix has a repeated entry within a column".into(),
            ));
        }
        let bound = crate::floor_times(psi, k as u64);
        if gmat.max_entry() > bound {
            return Err(CodeError::InvalidParameters(format!(
                "exponent matrix entry exceeds psi*k = {bound}"
            )));
        }
        let beta = field.primitive_element()?.value();
        Ok(LvWeakInstance {
            field,
            k,
            beta,
            gmat,
            psi,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.k + 1
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn matrix(&self) -> &ExponentMatrix {
        &self.gmat
    }

    pub fn psi(&self) -> Ratio {
        self.psi
    }

    /// Security bound `ψk/(q-1)` for a uniform message.
    pub fn delta(&self) -> Ratio {
        self.psi * Ratio::from_integer(self.k as u64) / Ratio::from_integer(self.field.modulus() - 1)
    }

    /// Whether `k - (k+1)ρ ≥ 1`, the leakage condition the bound needs.
    pub fn leakage_condition(&self, rho: Ratio) -> bool {
        let k = Ratio::from_integer(self.k as u64);
        let lhs = rho * Ratio::from_integer(self.k as u64 + 1) + Ratio::from_integer(1);
        k >= lhs
    }

    /// `Σ_j Π_i m_i^{g_ij}`.
    pub fn tag(&self, m: &[u64]) -> u64 {
        let f = self.field;
        (0..self.k).fold(0, |acc, j| {
            let term = (0..self.k).fold(1, |p, i| f.mul(p, f.pow(m[i], self.gmat.get(i, j))));
            f.add(acc, term)
        })
    }

    /// The same tag through discrete logs: with `m_i = β^{e_i}`,
    /// `Σ_j β^{(Σ_i e_i g_ij) mod (q-1)}`. `None` if some `m_i` is zero.
    pub fn tag_via_discrete_log(&self, m: &[u64]) -> Option<u64> {
        let f = self.field;
        let order = f.modulus() - 1;
        let logs: Vec<u64> = m
            .iter()
            .map(|&mi| f.discrete_log(self.beta, mi))
            .collect::<Option<_>>()?;
        Some((0..self.k).fold(0, |acc, j| {
            let e = (0..self.k).fold(0, |s, i| (s + logs[i] * (self.gmat.get(i, j) % order)) % order);
            f.add(acc, f.pow(self.beta, e))
        }))
    }

    pub(crate) fn encode_raw(&self, m: &[u64]) -> Vec<u64> {
        let mut out = m.to_vec();
        out.push(self.tag(m));
        out
    }

    pub(crate) fn accepts_raw(&self, x: &[u64]) -> bool {
        let m = &x[..self.k];
        m.iter().all(|&c| c != 0) && self.tag(m) == x[self.k]
    }
}

/// `(m ‖ f(m, G))` for `m ∈ (F_q^*)^k`.
pub fn lv_weak_encode(m: &Vector, inst: &LvWeakInstance) -> Result<Vector, CodeError> {
    check_field(m, inst.field)?;
    check_len("weak LV-AMD message", inst.k, m.len())?;
    if let Some(index) = m.coords().iter().position(|&c| c == 0) {
        return Err(CodeError::ZeroComponent { index });
    }
    Ok(Vector::new(inst.field, inst.encode_raw(m.coords())))
}

pub fn lv_weak_decode(x: &Vector, inst: &LvWeakInstance) -> Result<Decoded, CodeError> {
    check_field(x, inst.field)?;
    check_len("weak LV-AMD codeword", inst.n(), x.len())?;
    if inst.accepts_raw(x.coords()) {
        Ok(Decoded::Accept(Vector::new(
            inst.field,
            x.coords()[..inst.k].to_vec(),
        )))
    } else {
        Ok(Decoded::Reject)
    }
}
