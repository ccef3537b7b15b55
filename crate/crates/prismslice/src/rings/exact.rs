//! The exact global ring `Z[q]` with its Adams operations psi^n(q) = q^n and
//! the associated Fermat-quotient operators delta_p. No truncation; all
//! coefficients are arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::RingError;

/// A polynomial in q over Z, trailing zeros normalized away.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactQPoly {
    c: Vec<BigInt>,
}

impl ExactQPoly {
    pub fn zero() -> Self {
        ExactQPoly { c: vec![] }
    }

    pub fn one() -> Self {
        ExactQPoly::constant(1)
    }

    pub fn constant(v: i64) -> Self {
        let mut p = ExactQPoly {
            c: vec![BigInt::from(v)],
        };
        p.normalize();
        p
    }

    pub fn q_pow(e: usize) -> Self {
        let mut c = vec![BigInt::zero(); e + 1];
        c[e] = BigInt::one();
        ExactQPoly { c }
    }

    /// `[n]_q` = 1 + q + ... + q^(n-1).
    pub fn q_integer(n: u64) -> Self {
        ExactQPoly {
            c: vec![BigInt::one(); n as usize],
        }
    }

    /// `[n]_q!` = `[1]_q` `[2]_q` ... `[n]_q`.
    pub fn q_factorial(n: u64) -> Self {
        let mut acc = ExactQPoly::one();
        for m in 1..=n {
            acc = acc.mul(&ExactQPoly::q_integer(m));
        }
        acc
    }

    fn normalize(&mut self) {
        while matches!(self.c.last(), Some(x) if x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = vec![BigInt::zero(); self.c.len().max(other.c.len())];
        for (k, v) in self.c.iter().enumerate() {
            c[k] += v;
        }
        for (k, v) in other.c.iter().enumerate() {
            c[k] += v;
        }
        let mut p = ExactQPoly { c };
        p.normalize();
        p
    }

    pub fn neg(&self) -> Self {
        ExactQPoly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ExactQPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        let mut p = ExactQPoly { c };
        p.normalize();
        p
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = ExactQPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// psi^m: substitute q -> q^m. Monoid action: psi(psi(x,a),b) = psi(x,ab).
    pub fn psi(&self, m: u64) -> Self {
        assert!(m >= 1, "psi index must be positive");
        if self.is_zero() {
            return ExactQPoly::zero();
        }
        let mut c = vec![BigInt::zero(); (self.c.len() - 1) * m as usize + 1];
        for (k, v) in self.c.iter().enumerate() {
            c[k * m as usize] = v.clone();
        }
        ExactQPoly { c }
    }

    /// delta_m(x) = (psi^m(x) - x^m) / m, exact integer division (m prime).
    pub fn delta_m(&self, m: u64) -> Result<Self, RingError> {
        let num = self.psi(m).sub(&self.pow(m));
        let mb = BigInt::from(m);
        let mut c = Vec::with_capacity(num.c.len());
        for v in &num.c {
            let (q, r) = (v / &mb, v % &mb);
            if !r.is_zero() {
                return Err(RingError::InexactDivision("delta_m division not exact"));
            }
            c.push(q);
        }
        let mut p = ExactQPoly { c };
        p.normalize();
        Ok(p)
    }

    /// Remainder under division by a monic polynomial.
    pub fn rem_monic(&self, modulus: &Self) -> Self {
        assert!(
            matches!(modulus.c.last(), Some(x) if x.abs().is_one()),
            "modulus must be monic (up to sign)"
        );
        let d = modulus.c.len() - 1;
        let lead = modulus.c.last().unwrap().clone();
        let mut r = self.c.clone();
        while r.len() > d {
            let k = r.len() - 1;
            let factor = &r[k] / &lead;
            for (j, mj) in modulus.c.iter().enumerate() {
                let idx = k - d + j;
                let sub = &factor * mj;
                r[idx] -= sub;
            }
            while matches!(r.last(), Some(x) if x.is_zero()) {
                r.pop();
            }
            if r.len() > d && r[r.len() - 1].is_zero() {
                r.pop();
            }
        }
        let mut p = ExactQPoly { c: r };
        p.normalize();
        p
    }
}

/// Semi-multiplicativity of q-analogues: `[mn]_q` = `[m]_q` psi^m(`[n]_q`).
pub fn semimult_check(m: u64, n: u64) -> bool {
    let lhs = ExactQPoly::q_integer(m * n);
    let rhs = ExactQPoly::q_integer(m).mul(&ExactQPoly::q_integer(n).psi(m));
    lhs == rhs
}

/// The congruence psi^(mk)(`[n]_q`) = n mod `[m]_q`.
pub fn psi_congruence_check(m: u64, n: u64, k: u64) -> bool {
    let lhs = ExactQPoly::q_integer(n).psi(m * k);
    let diff = lhs.sub(&ExactQPoly::constant(n as i64));
    diff.rem_monic(&ExactQPoly::q_integer(m)).is_zero()
}
