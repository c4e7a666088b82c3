//! Coset coding for the wiretap II channel.
//!
//! The message selects a coset of an `[n, n-k]` Reed-Solomon code and the
//! encoder picks a uniformly random word in it: `x = [r, m]·[G; G̃]`. Any
//! `n-k` positions of `x` are uniform and independent of `m`; the syndrome
//! `H·xᵀ` recovers `m` because `H·Gᵀ = 0` and `H·G̃ᵀ = I`.

use serde::Serialize;

use crate::field::PrimeField;
use crate::linalg::{complete_basis, dual_parity_check, rs_generator, Matrix, Vector};
use crate::{check_field, check_len, CodeError, Ratio};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wt2Instance {
    field: PrimeField,
    n: usize,
    k_msg: usize,
    g: Matrix,
    g_tilde: Matrix,
    h: Matrix,
}

impl Wt2Instance {
    /// Reed-Solomon coset code of length `n` carrying `k_msg` symbols.
    pub fn new(field: PrimeField, n: usize, k_msg: usize) -> Result<Self, CodeError> {
        if k_msg == 0 || k_msg >= n {
            return Err(CodeError::InvalidParameters(format!(
                "wiretap II needs 0 < k_msg < n, got k_msg = {k_msg}, n = {n}"
            )));
        }
        let g = rs_generator(n, n - k_msg, field)?;
        let g_tilde = complete_basis(&g)?;
        Self::from_matrices(g, g_tilde)
    }

    /// Builds an instance from an explicit generator and completion.
    pub fn from_matrices(g: Matrix, g_tilde: Matrix) -> Result<Self, CodeError> {
        let n = g.cols();
        check_len("completion width", n, g_tilde.cols())?;
        check_len("stacked rows", n, g.rows() + g_tilde.rows())?;
        let k_msg = g_tilde.rows();
        if k_msg == 0 || g.rows() == 0 {
            return Err(CodeError::InvalidParameters(
                "generator and completion must both be nonempty".into(),
            ));
        }
        let h = dual_parity_check(&g, &g_tilde)?;
        Ok(Wt2Instance {
            field: g.field(),
            n,
            k_msg,
            g,
            g_tilde,
            h,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_msg(&self) -> usize {
        self.k_msg
    }

    pub fn randomness_len(&self) -> usize {
        self.n - self.k_msg
    }

    /// Read fraction `(n - k_msg)/n` the code hides from.
    pub fn rho(&self) -> Ratio {
        Ratio::new((self.n - self.k_msg) as u64, self.n as u64)
    }

    pub fn generator(&self) -> &Matrix {
        &self.g
    }

    pub fn completion(&self) -> &Matrix {
        &self.g_tilde
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.h
    }

    pub(crate) fn encode_raw(&self, m: &[u64], r: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut x = self.g.apply_left(r);
        for (xi, ti) in x.iter_mut().zip(self.g_tilde.apply_left(m)) {
            *xi = f.add(*xi, ti);
        }
        x
    }

    pub(crate) fn syndrome_raw(&self, x: &[u64]) -> Vec<u64> {
        self.h.apply(x)
    }
}

/// `[r, m]·[G; G̃]`.
pub fn wt2_encode(m: &Vector, r: &Vector, inst: &Wt2Instance) -> Result<Vector, CodeError> {
    check_field(m, inst.field)?;
    check_field(r, inst.field)?;
    check_len("wiretap II message", inst.k_msg, m.len())?;
    check_len("wiretap II randomness", inst.randomness_len(), r.len())?;
    Ok(Vector::new(inst.field, inst.encode_raw(m.coords(), r.coords())))
}

/// Syndrome decoding `H·xᵀ`. Total: every word decodes to some message.
pub fn wt2_decode(x: &Vector, inst: &Wt2Instance) -> Result<Vector, CodeError> {
    check_field(x, inst.field)?;
    check_len("wiretap II codeword", inst.n, x.len())?;
    Ok(Vector::new(inst.field, inst.syndrome_raw(x.coords())))
}
