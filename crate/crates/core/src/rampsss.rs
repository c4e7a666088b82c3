//! Linear `(t, r, N)` ramp secret sharing by packed polynomials, and the
//! robust ramp scheme that shares a strong limited-view AMD codeword.
//!
//! Participant `j` holds `P(j)` for `j = 1..=N`; the secret block sits at
//! the reserved points `N+1, …, N+r-t`. `P` has degree at most `r-1` and is
//! pinned by the secret block plus `t` random values `P(1), …, P(t)`.

use std::fmt;

use serde::Serialize;

use crate::field::{FieldElement, PrimeField};
use crate::linalg::{Matrix, Vector};
use crate::lvamd::{lv_strong_decode, lv_strong_encode, LvStrongInstance};
use crate::{check_field, check_len, CodeError, Decoded};

/// Lagrange basis values `L_l(at)` for the given distinct nodes.
fn lagrange_weights(field: PrimeField, nodes: &[u64], at: u64) -> Vec<u64> {
    nodes
        .iter()
        .enumerate()
        .map(|(l, &xl)| {
            let (num, den) = nodes
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != l)
                .fold((1, 1), |(num, den), (_, &xm)| {
                    (
                        field.mul(num, field.sub(at, xm)),
                        field.mul(den, field.sub(xl, xm)),
                    )
                });
            field.mul(num, field.inv(den).expect("distinct nodes"))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RampScheme {
    field: PrimeField,
    t: usize,
    r: usize,
    parties: usize,
    /// `N × r`: `[s ‖ rand] ↦ shares`.
    share_matrix: Matrix,
}

impl RampScheme {
    pub fn new(field: PrimeField, t: usize, r: usize, parties: usize) -> Result<Self, CodeError> {
        if !(t < r && r <= parties) {
            return Err(CodeError::InvalidParameters(format!(
                "ramp scheme needs t < r <= N, got t = {t}, r = {r}, N = {parties}"
            )));
        }
        let points = (parties + r - t) as u64;
        if points >= field.modulus() {
            return Err(CodeError::InvalidParameters(format!(
                "ramp scheme needs q > N + r - t = {points}, got q = {}",
                field.modulus()
            )));
        }
        let nodes: Vec<u64> = Self::secret_points_of(parties, r - t)
            .chain(1..=t as u64)
            .collect();
        let mut entries = Vec::with_capacity(parties * r);
        for x in 1..=parties as u64 {
            entries.extend(lagrange_weights(field, &nodes, x));
        }
        let share_matrix = Matrix::new(field, parties, r, entries)?;
        Ok(RampScheme {
            field,
            t,
            r,
            parties,
            share_matrix,
        })
    }

    fn secret_points_of(parties: usize, len: usize) -> impl Iterator<Item = u64> {
        (parties as u64 + 1)..=(parties + len) as u64
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn secret_len(&self) -> usize {
        self.r - self.t
    }

    pub fn secret_points(&self) -> Vec<u64> {
        Self::secret_points_of(self.parties, self.secret_len()).collect()
    }

    pub(crate) fn share_raw(&self, s: &[u64], rand: &[u64]) -> Vec<u64> {
        let mut c = s.to_vec();
        c.extend_from_slice(rand);
        self.share_matrix.apply(&c)
    }

    /// `(r-t) × r` matrix taking the shares of participants `ids` (exactly
    /// `r` distinct 1-based ids) to the secret block.
    pub fn recovery_matrix(&self, ids: &[usize]) -> Result<Matrix, CodeError> {
        check_len("recovery subset", self.r, ids.len())?;
        let nodes: Vec<u64> = ids.iter().map(|&id| id as u64).collect();
        let mut entries = Vec::with_capacity(self.secret_len() * self.r);
        for e in self.secret_points() {
            entries.extend(lagrange_weights(self.field, &nodes, e));
        }
        Ok(Matrix::new(self.field, self.secret_len(), self.r, entries)?)
    }

    /// Sorted, deduplicated and range-checked copy of a participant subset.
    pub(crate) fn normalize_subset(&self, subset: &[usize]) -> Result<Vec<usize>, CodeError> {
        let mut ids = subset.to_vec();
        ids.sort_unstable();
        ids.dedup();
        if let Some(&bad) = ids.iter().find(|&&id| id == 0 || id > self.parties) {
            return Err(CodeError::ShareIndex(bad));
        }
        if ids.len() < self.r {
            return Err(CodeError::TooFewShares {
                need: self.r,
                got: ids.len(),
            });
        }
        Ok(ids)
    }
}

/// Shares of participants `1..=N`; `None` is an absent share (⊥).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShareVector {
    field: PrimeField,
    slots: Vec<Option<u64>>,
}

impl ShareVector {
    pub fn new(field: PrimeField, slots: Vec<Option<u64>>) -> Self {
        let slots = slots.into_iter().map(|s| s.map(|v| field.reduce(v))).collect();
        ShareVector { field, slots }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Share of participant `id` (1-based).
    pub fn get(&self, id: usize) -> Result<Option<FieldElement>, CodeError> {
        let slot = self
            .slots
            .get(id.wrapping_sub(1))
            .ok_or(CodeError::ShareIndex(id))?;
        Ok(slot.map(|v| self.field.elem(v)))
    }

    pub fn set(&mut self, id: usize, value: Option<u64>) -> Result<(), CodeError> {
        let f = self.field;
        let slot = self
            .slots
            .get_mut(id.wrapping_sub(1))
            .ok_or(CodeError::ShareIndex(id))?;
        *slot = value.map(|v| f.reduce(v));
        Ok(())
    }

    pub fn slots(&self) -> &[Option<u64>] {
        &self.slots
    }

    /// Slot-wise sum with `⊥ + x = x + ⊥ = ⊥`.
    pub fn checked_add(&self, other: &ShareVector) -> Result<ShareVector, CodeError> {
        check_len("share vector", self.len(), other.len())?;
        let f = self.field;
        Ok(ShareVector {
            field: f,
            slots: self
                .slots
                .iter()
                .zip(&other.slots)
                .map(|(a, b)| Some(f.add((*a)?, (*b)?)))
                .collect(),
        })
    }

    /// Parses the `index:value` / `index:ABSENT` line format. Every index in
    /// `1..=parties` must appear exactly once.
    pub fn parse(field: PrimeField, parties: usize, text: &str) -> Result<Self, CodeError> {
        let mut slots: Vec<Option<Option<u64>>> = vec![None; parties];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| CodeError::ShareFormat {
                line: lineno + 1,
                reason: reason.to_string(),
            };
            let (idx, val) = line.split_once(':').ok_or_else(|| bad("expected index:value"))?;
            let idx: usize = idx.trim().parse().map_err(|_| bad("bad index"))?;
            if idx == 0 || idx > parties {
                return Err(bad("index out of range"));
            }
            let val = match val.trim() {
                "ABSENT" => None,
                v => {
                    let v: u64 = v.parse().map_err(|_| bad("bad value"))?;
                    if v >= field.modulus() {
                        return Err(bad("value not reduced modulo q"));
                    }
                    Some(v)
                }
            };
            if slots[idx - 1].replace(val).is_some() {
                return Err(bad("duplicate index"));
            }
        }
        let slots = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| CodeError::ShareFormat {
                    line: 0,
                    reason: format!("missing share {}", i + 1),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(ShareVector { field, slots })
    }
}

impl fmt::Display for ShareVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.slots.iter().enumerate() {
            match s {
                Some(v) => writeln!(f, "{}:{}", i + 1, v)?,
                None => writeln!(f, "{}:ABSENT", i + 1)?,
            }
        }
        Ok(())
    }
}

/// Shares of the secret block `s` (length `r-t`) with sharing randomness
/// `rand` (length `t`).
pub fn ramp_share(s: &Vector, rand: &Vector, scheme: &RampScheme) -> Result<ShareVector, CodeError> {
    check_field(s, scheme.field)?;
    check_field(rand, scheme.field)?;
    check_len("ramp secret", scheme.secret_len(), s.len())?;
    check_len("ramp randomness", scheme.t, rand.len())?;
    let shares = scheme.share_raw(s.coords(), rand.coords());
    Ok(ShareVector {
        field: scheme.field,
        slots: shares.into_iter().map(Some).collect(),
    })
}

/// Interpolates through the first `r` participants of `subset` (1-based
/// ids, at least `r` of them). Any absent share in the subset gives ⊥.
pub fn ramp_recover(
    shares: &ShareVector,
    subset: &[usize],
    scheme: &RampScheme,
) -> Result<Decoded, CodeError> {
    check_len("share vector", scheme.parties, shares.len())?;
    let ids = scheme.normalize_subset(subset)?;
    let mut values = Vec::with_capacity(ids.len());
    for &id in &ids {
        match shares.slots[id - 1] {
            Some(v) => values.push(v),
            None => return Ok(Decoded::Reject),
        }
    }
    let basis = &ids[..scheme.r];
    let rec = scheme.recovery_matrix(basis)?;
    Ok(Decoded::Accept(Vector::new(
        scheme.field,
        rec.apply(&values[..scheme.r]),
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RobustRampScheme {
    ramp: RampScheme,
    code: LvStrongInstance,
}

impl RobustRampScheme {
    /// Ramp scheme over `F_q` sharing codewords of the strong limited-view
    /// code with message length `k` and length `r - t`.
    pub fn new(q: u64, t: usize, r: usize, parties: usize, k: usize) -> Result<Self, CodeError> {
        let field = PrimeField::new(q)?;
        let ramp = RampScheme::new(field, t, r, parties)?;
        if r - t < k + 3 {
            return Err(CodeError::InvalidParameters(format!(
                "secret block r - t = {} too short for a message of length {k} (need >= k + 3)",
                r - t
            )));
        }
        let code = LvStrongInstance::new(q, k, r - t)?;
        Self::from_parts(ramp, code)
    }

    pub fn from_parts(ramp: RampScheme, code: LvStrongInstance) -> Result<Self, CodeError> {
        check_len("LV codeword vs ramp secret block", ramp.secret_len(), code.n())?;
        if ramp.field() != code.field() {
            return Err(CodeError::InvalidParameters("field mismatch".into()));
        }
        Ok(RobustRampScheme { ramp, code })
    }

    pub fn ramp(&self) -> &RampScheme {
        &self.ramp
    }

    pub fn code(&self) -> &LvStrongInstance {
        &self.code
    }

    pub fn field(&self) -> PrimeField {
        self.ramp.field()
    }

    /// `t + ⌊ρ(r-t)⌋` with `ρ` the inner code's leakage fraction.
    pub fn corrupt_budget(&self) -> usize {
        self.ramp.t + crate::floor_times(self.code.rho(), self.ramp.secret_len() as u64) as usize
    }
}

pub fn rr_share(
    s: &Vector,
    i: FieldElement,
    j: &Vector,
    rand: &Vector,
    scheme: &RobustRampScheme,
) -> Result<ShareVector, CodeError> {
    let c = lv_strong_encode(s, i, j, &scheme.code)?;
    ramp_share(&c, rand, &scheme.ramp)
}

pub fn rr_recover(
    shares: &ShareVector,
    subset: &[usize],
    scheme: &RobustRampScheme,
) -> Result<Decoded, CodeError> {
    match ramp_recover(shares, subset, &scheme.ramp)? {
        Decoded::Accept(c) => lv_strong_decode(&c, &scheme.code),
        Decoded::Reject => Ok(Decoded::Reject),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{all_vectors, subsets};
    use proptest::prelude::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn small() -> RampScheme {
        RampScheme::new(f(11), 1, 3, 4).unwrap()
    }

    fn v(field: PrimeField, c: &[u64]) -> Vector {
        Vector::new(field, c.to_vec())
    }

    fn all_ids(n: usize) -> Vec<usize> {
        (1..=n).collect()
    }

    #[test]
    fn scheme_validation() {
        assert!(RampScheme::new(f(11), 3, 3, 4).is_err());
        assert!(RampScheme::new(f(11), 1, 5, 4).is_err());
        // needs q > N + r - t = 10
        assert!(RampScheme::new(f(7), 1, 3, 6).is_err());
        assert!(RampScheme::new(f(11), 1, 5, 6).is_ok());
        assert_eq!(small().secret_points(), vec![5, 6]);
    }

    #[test]
    fn share_examples() {
        let s = small();
        let fq = s.field();
        let zero = ramp_share(&v(fq, &[0, 0]), &v(fq, &[0]), &s).unwrap();
        assert!(zero.slots().iter().all(|x| *x == Some(0)));

        // brute force: the unique quadratic through (5,1), (6,2), (1,5)
        let mut found = None;
        for c in all_vectors(11, 3) {
            let p = |x: u64| (c[0] + c[1] * x + c[2] * x * x) % 11;
            if p(5) == 1 && p(6) == 2 && p(1) == 5 {
                assert!(found.is_none());
                found = Some((1..=4).map(p).collect::<Vec<_>>());
            }
        }
        let expect: Vec<Option<u64>> = found.unwrap().into_iter().map(Some).collect();
        let shares = ramp_share(&v(fq, &[1, 2]), &v(fq, &[5]), &s).unwrap();
        assert_eq!(shares.slots(), &expect[..]);

        assert!(matches!(
            ramp_share(&v(fq, &[1, 2]), &v(fq, &[5, 5]), &s),
            Err(CodeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn recover_from_every_subset() {
        let s = small();
        let fq = s.field();
        for secret in all_vectors(11, 2) {
            for rand in 0..11 {
                let shares = ramp_share(&v(fq, &secret), &v(fq, &[rand]), &s).unwrap();
                for sub in subsets(4, 3) {
                    let ids: Vec<usize> = sub.iter().map(|i| i + 1).collect();
                    assert_eq!(
                        ramp_recover(&shares, &ids, &s).unwrap(),
                        Decoded::Accept(v(fq, &secret))
                    );
                }
                assert_eq!(
                    ramp_recover(&shares, &all_ids(4), &s).unwrap(),
                    Decoded::Accept(v(fq, &secret))
                );
            }
        }
    }

    #[test]
    fn recover_edge_cases() {
        let s = small();
        let fq = s.field();
        let mut shares = ramp_share(&v(fq, &[3, 4]), &v(fq, &[7]), &s).unwrap();
        assert_eq!(
            ramp_recover(&shares, &[1, 2], &s),
            Err(CodeError::TooFewShares { need: 3, got: 2 })
        );
        assert_eq!(ramp_recover(&shares, &[1, 2, 9], &s), Err(CodeError::ShareIndex(9)));
        shares.set(2, None).unwrap();
        assert_eq!(ramp_recover(&shares, &[1, 2, 3], &s).unwrap(), Decoded::Reject);
        assert_eq!(
            ramp_recover(&shares, &[1, 3, 4], &s).unwrap(),
            Decoded::Accept(v(fq, &[3, 4]))
        );
        let zero = ShareVector::new(fq, vec![Some(0); 4]);
        assert_eq!(
            ramp_recover(&zero, &[2, 3, 4], &s).unwrap(),
            Decoded::Accept(v(fq, &[0, 0]))
        );
    }

    #[test]
    fn absent_share_absorbs_sums() {
        let fq = f(11);
        let a = ShareVector::new(fq, vec![Some(1), Some(2), None]);
        let b = ShareVector::new(fq, vec![Some(10), None, Some(4)]);
        assert_eq!(a.checked_add(&b).unwrap().slots(), &[Some(0), None, None]);
    }

    #[test]
    fn share_file_format() {
        let fq = f(11);
        let sv = ShareVector::new(fq, vec![Some(3), None, Some(10)]);
        let text = sv.to_string();
        assert_eq!(text, "1:3\n2:ABSENT\n3:10\n");
        assert_eq!(ShareVector::parse(fq, 3, &text).unwrap(), sv);
        assert_eq!(ShareVector::parse(fq, 3, "3:10\n1:3\n\n2:ABSENT").unwrap(), sv);
        assert!(ShareVector::parse(fq, 3, "1:3\n2:4").is_err());
        assert!(ShareVector::parse(fq, 3, "1:3\n1:4\n2:1\n3:1").is_err());
        assert!(ShareVector::parse(fq, 3, "1:3\n2:11\n3:1").is_err());
        assert!(ShareVector::parse(fq, 3, "1=3\n2:1\n3:1").is_err());
        assert!(ShareVector::parse(fq, 3, "0:3\n2:1\n3:1").is_err());
    }

    fn robust() -> RobustRampScheme {
        RobustRampScheme::new(11, 1, 5, 6, 1).unwrap()
    }

    #[test]
    fn robust_scheme_parameters() {
        let rr = robust();
        assert_eq!(rr.code().n(), 4);
        assert_eq!(rr.corrupt_budget(), 2);
        assert!(matches!(
            RobustRampScheme::new(11, 1, 5, 6, 2),
            Err(CodeError::InvalidParameters(_))
        ));
    }

    #[test]
    fn robust_share_examples() {
        let rr = robust();
        let fq = rr.field();
        let zero = rr_share(&v(fq, &[0]), fq.elem(0), &v(fq, &[0]), &v(fq, &[0]), &rr).unwrap();
        assert!(zero.slots().iter().all(|x| *x == Some(0)));

        let s = rr_share(&v(fq, &[7]), fq.elem(3), &v(fq, &[9]), &v(fq, &[2]), &rr).unwrap();
        assert_eq!(s.len(), 6);
        let c = lv_strong_encode(&v(fq, &[7]), fq.elem(3), &v(fq, &[9]), rr.code()).unwrap();
        assert_eq!(s, ramp_share(&c, &v(fq, &[2]), rr.ramp()).unwrap());
    }

    #[test]
    fn robust_honest_roundtrip_all_subsets() {
        let rr = robust();
        let fq = rr.field();
        for secret in 0..11 {
            for seed in 0..11u64 {
                let (i, j, rand) = (seed, (seed * 7 + 3) % 11, (seed * 5 + 1) % 11);
                let shares =
                    rr_share(&v(fq, &[secret]), fq.elem(i), &v(fq, &[j]), &v(fq, &[rand]), &rr).unwrap();
                for sub in subsets(6, 5) {
                    let ids: Vec<usize> = sub.iter().map(|i| i + 1).collect();
                    assert_eq!(
                        rr_recover(&shares, &ids, &rr).unwrap(),
                        Decoded::Accept(v(fq, &[secret]))
                    );
                }
            }
        }
    }

    #[test]
    fn robust_absent_share_rejects() {
        let rr = robust();
        let fq = rr.field();
        let mut shares =
            rr_share(&v(fq, &[4]), fq.elem(1), &v(fq, &[2]), &v(fq, &[3]), &rr).unwrap();
        shares.set(3, None).unwrap();
        assert_eq!(rr_recover(&shares, &[1, 2, 3, 4, 5], &rr).unwrap(), Decoded::Reject);
    }

    proptest! {
        #[test]
        fn recover_is_linear(
            s in prop::collection::vec(0u64..11, 2),
            rand in 0u64..11,
            offset in prop::collection::vec(0u64..11, 4),
            absent in prop::option::of(1usize..=4),
            pick in 0usize..4,
        ) {
            let sch = small();
            let fq = sch.field();
            let shares = ramp_share(&v(fq, &s), &v(fq, &[rand]), &sch).unwrap();
            let mut delta = ShareVector::new(fq, offset.iter().copied().map(Some).collect());
            if let Some(id) = absent {
                delta.set(id, None).unwrap();
            }
            let ids: Vec<usize> = subsets(4, 3)[pick].iter().map(|i| i + 1).collect();
            let lhs = ramp_recover(&shares.checked_add(&delta).unwrap(), &ids, &sch).unwrap();
            match ramp_recover(&delta, &ids, &sch).unwrap() {
                Decoded::Accept(d) => {
                    let expect = v(fq, &s).checked_add(&d).unwrap();
                    prop_assert_eq!(lhs, Decoded::Accept(expect));
                }
                Decoded::Reject => {
                    prop_assert!(absent.is_some_and(|id| ids.contains(&id)));
                    prop_assert_eq!(lhs, Decoded::Reject);
                }
            }
        }
    }
}
