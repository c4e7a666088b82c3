//! Systematic AMD code over `F_q`.
//!
//! A message `m ∈ F_q^d` is stored as `(m, r, f(r, m))` with
//! `f(r, m) = r^{d+2} + Σ_{i=1}^{d} m_i r^i`. For `q ∤ d+2` this is a
//! `(q^d, q^{d+2}, (d+1)/q)`-AMD code: for every fixed message and additive
//! offset, at most `d+1` values of `r` let a forgery through.

use serde::Serialize;

use crate::field::{FieldElement, PrimeField};
use crate::linalg::Vector;
use crate::{check_field, check_len, CodeError, Decoded, Ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AmdParams {
    field: PrimeField,
    d: usize,
}

impl AmdParams {
    pub fn new(q: u64, d: usize) -> Result<Self, CodeError> {
        let field = PrimeField::new(q)?;
        Self::with_field(field, d)
    }

    pub fn with_field(field: PrimeField, d: usize) -> Result<Self, CodeError> {
        if d == 0 {
            return Err(CodeError::InvalidParameters(
                "AMD message length d must be at least 1".into(),
            ));
        }
        // prime field: characteristic p = q
        if (d as u64 + 2) % field.modulus() == 0 {
            return Err(CodeError::InvalidParameters(format!(
                "characteristic {} divides d + 2 = {}",
                field.modulus(),
                d + 2
            )));
        }
        Ok(AmdParams { field, d })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u64 {
        self.field.modulus()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn message_len(&self) -> usize {
        self.d
    }

    pub fn codeword_len(&self) -> usize {
        self.d + 2
    }

    /// Nominal security `(d+1)/q`.
    pub fn delta(&self) -> Ratio {
        Ratio::new(self.d as u64 + 1, self.q())
    }

    /// `f(r, m)` on raw residues, by Horner's rule on
    /// `r·(m_1 + r·(m_2 + … + r·(m_d + r·r)))`.
    pub fn tag(&self, r: u64, m: &[u64]) -> u64 {
        let f = self.field;
        let mut acc = f.mul(r, r);
        for &mi in m.iter().rev() {
            acc = f.mul(f.add(acc, mi), r);
        }
        acc
    }

    pub(crate) fn encode_raw(&self, m: &[u64], r: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.d + 2);
        out.extend_from_slice(m);
        out.push(r);
        out.push(self.tag(r, m));
        out
    }

    /// Whether the tag of `x` verifies; the message is then `x[..d]`.
    pub(crate) fn verify_raw(&self, x: &[u64]) -> bool {
        let d = self.d;
        self.tag(x[d], &x[..d]) == x[d + 1]
    }
}

/// `(m, r, f(r, m))`. The randomness `r` is supplied by the caller.
pub fn amd_encode(m: &Vector, r: FieldElement, params: &AmdParams) -> Result<Vector, CodeError> {
    check_field(m, params.field)?;
    check_len("AMD message", params.d, m.len())?;
    if r.modulus() != params.q() {
        return Err(crate::FieldError::ModulusMismatch(r.modulus(), params.q()).into());
    }
    Ok(Vector::new(params.field, params.encode_raw(m.coords(), r.value())))
}

pub fn amd_decode(x: &Vector, params: &AmdParams) -> Result<Decoded, CodeError> {
    check_field(x, params.field)?;
    check_len("AMD codeword", params.codeword_len(), x.len())?;
    if params.verify_raw(x.coords()) {
        Ok(Decoded::Accept(Vector::new(
            params.field,
            x.coords()[..params.d].to_vec(),
        )))
    } else {
        Ok(Decoded::Reject)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::all_vectors;

    fn v(p: &AmdParams, c: &[u64]) -> Vector {
        Vector::new(p.field(), c.to_vec())
    }

    #[test]
    fn encode_examples() {
        let p = AmdParams::new(7, 1).unwrap();
        let f = p.field();
        assert_eq!(amd_encode(&v(&p, &[0]), f.elem(0), &p).unwrap().coords(), &[0, 0, 0]);
        assert_eq!(amd_encode(&v(&p, &[2]), f.elem(3), &p).unwrap().coords(), &[2, 3, 5]);
        assert!(matches!(
            AmdParams::new(5, 3),
            Err(CodeError::InvalidParameters(_))
        ));
        assert!(matches!(
            amd_encode(&v(&p, &[1, 2]), f.elem(0), &p),
            Err(CodeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn decode_examples() {
        let p = AmdParams::new(7, 1).unwrap();
        assert_eq!(
            amd_decode(&v(&p, &[2, 3, 5]), &p).unwrap(),
            Decoded::Accept(v(&p, &[2]))
        );
        assert_eq!(amd_decode(&v(&p, &[2, 3, 4]), &p).unwrap(), Decoded::Reject);
        assert_eq!(
            amd_decode(&v(&p, &[0, 0, 0]), &p).unwrap(),
            Decoded::Accept(v(&p, &[0]))
        );
        assert!(amd_decode(&v(&p, &[0, 0]), &p).is_err());
    }

    #[test]
    fn tag_matches_direct_power_sum() {
        let p = AmdParams::new(11, 3).unwrap();
        let f = p.field();
        for m in all_vectors(11, 3).step_by(37) {
            for r in 0..11 {
                let direct = m
                    .iter()
                    .enumerate()
                    .fold(f.pow(r, 5), |acc, (i, &mi)| f.add(acc, f.mul(mi, f.pow(r, i as u64 + 1))));
                assert_eq!(p.tag(r, &m), direct);
            }
        }
    }

    #[test]
    fn roundtrip_exhaustive() {
        for q in [2u64, 3, 5, 7, 11] {
            for d in 1..=2 {
                let Ok(p) = AmdParams::new(q, d) else { continue };
                for m in all_vectors(q, d) {
                    for r in 0..q {
                        let x = amd_encode(&v(&p, &m), p.field().elem(r), &p).unwrap();
                        assert_eq!(amd_decode(&x, &p).unwrap(), Decoded::Accept(v(&p, &m)));
                    }
                }
            }
        }
    }

    #[test]
    fn forgery_rate_within_delta() {
        for (q, d) in [(5u64, 1usize), (7, 1), (7, 2), (11, 1)] {
            let p = AmdParams::new(q, d).unwrap();
            let n = p.codeword_len();
            let limit = d as u64 + 1;
            for m in all_vectors(q, d) {
                for delta in all_vectors(q, n).skip(1) {
                    let wins = (0..q)
                        .filter(|&r| {
                            let x = p.encode_raw(&m, r);
                            let y: Vec<u64> =
                                x.iter().zip(&delta).map(|(&a, &b)| (a + b) % q).collect();
                            p.verify_raw(&y) && y[..d] != m[..]
                        })
                        .count() as u64;
                    assert!(wins <= limit, "q={q} d={d} m={m:?} delta={delta:?}");
                }
            }
        }
    }

    #[test]
    fn strong_amd_size_relation() {
        for q in [3u64, 5, 7, 11, 13] {
            for d in 1..=4 {
                let Ok(p) = AmdParams::new(q, d) else { continue };
                let g = (q as f64).powi(d as i32 + 2);
                let m = (q as f64).powi(d as i32);
                let delta = (d as f64 + 1.0) / q as f64;
                assert!(g >= (m - 1.0) / (delta * delta) + 1.0 - 1e-9, "q={q} d={d}");
                let _ = p;
            }
        }
    }
}
