//! p-typical circle-representation combinatorics: the representations
//! `[n]_lambda` and {n}_lambda, their irreducible decompositions into
//! lambda_i = lambda^(p^i) and lambda_inf = lambda^0, dimension sequences,
//! fixed points, and the combinatorial certificates backing the slice
//! theorems.
//!
//! Everything here is restricted from the circle, so at p = 2 the sign
//! representation of C_{2^n} never occurs and the type cannot express it.

use std::collections::BTreeMap;

use crate::combinatorics::vp;

/// A virtual p-typical RO(T) class: integer multiplicities of lambda_0,
/// lambda_1, ..., lambda_inf, plus trivial real summands.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PTypicalRep {
    mult: BTreeMap<u32, i64>,
    pub mult_inf: i64,
    pub trivial_real: i64,
}

impl PTypicalRep {
    pub fn zero() -> Self {
        PTypicalRep::default()
    }

    pub fn lambda(i: u32) -> Self {
        let mut r = PTypicalRep::zero();
        r.add_lambda(i, 1);
        r
    }

    pub fn lambda_inf() -> Self {
        PTypicalRep {
            mult_inf: 1,
            ..Default::default()
        }
    }

    pub fn trivial_reals(k: i64) -> Self {
        PTypicalRep {
            trivial_real: k,
            ..Default::default()
        }
    }

    pub fn add_lambda(&mut self, i: u32, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.mult.entry(i).or_insert(0);
        *e += k;
        if *e == 0 {
            self.mult.remove(&i);
        }
    }

    pub fn mult(&self, i: u32) -> i64 {
        self.mult.get(&i).copied().unwrap_or(0)
    }

    /// Nonzero finite multiplicities, sorted by index.
    pub fn finite_mults(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.mult.iter().map(|(&i, &k)| (i, k))
    }

    /// Largest finite index present, if any.
    pub fn max_index(&self) -> Option<u32> {
        self.mult.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, k) in other.finite_mults() {
            out.add_lambda(i, k);
        }
        out.mult_inf += other.mult_inf;
        out.trivial_real += other.trivial_real;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = PTypicalRep::zero();
        for (i, v) in self.finite_mults() {
            out.add_lambda(i, v * k);
        }
        out.mult_inf = self.mult_inf * k;
        out.trivial_real = self.trivial_real * k;
        out
    }

    /// All multiplicities nonnegative (virtual reps are permitted, this is a
    /// checked predicate, not a type split).
    pub fn is_actual(&self) -> bool {
        self.mult.values().all(|&k| k >= 0) && self.mult_inf >= 0 && self.trivial_real >= 0
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.mult_inf == 0 && self.trivial_real == 0
    }

    /// Complex dimension d_0 = sum of finite multiplicities + mult_inf.
    pub fn complex_dim(&self) -> i64 {
        self.mult.values().sum::<i64>() + self.mult_inf
    }

    pub fn real_dim(&self) -> i64 {
        2 * self.complex_dim() + self.trivial_real
    }

    /// d_r = k_r + k_{r+1} + ... + k_inf.
    pub fn dim_seq(&self, r: u32) -> i64 {
        self.mult
            .iter()
            .filter(|(&i, _)| i >= r)
            .map(|(_, &k)| k)
            .sum::<i64>()
            + self.mult_inf
    }

    /// C_{p^1}-fixed points pulled back along the root isomorphism:
    /// lambda_0 -> 0, lambda_i -> lambda_{i-1} for i >= 1,
    /// lambda_inf -> lambda_inf; trivial reals preserved.
    pub fn fixed_points(&self) -> Self {
        let mut out = PTypicalRep {
            mult_inf: self.mult_inf,
            trivial_real: self.trivial_real,
            ..Default::default()
        };
        for (i, k) in self.finite_mults() {
            if i >= 1 {
                out.add_lambda(i - 1, k);
            }
        }
        out
    }
}

/// `[n]_lambda` = lambda_inf + sum_s (ceil(n/p^s) - ceil(n/p^(s+1))) lambda_s
/// for n >= 1; zero for n = 0.
pub fn bracket_rep(p: u64, n: u64) -> PTypicalRep {
    let mut r = PTypicalRep::zero();
    if n == 0 {
        return r;
    }
    r.mult_inf = 1;
    let mut s = 0u32;
    let mut ps = 1u64;
    loop {
        let here = n.div_ceil(ps);
        let next = n.div_ceil(ps * p);
        r.add_lambda(s, (here - next) as i64);
        if next <= 1 {
            break;
        }
        ps *= p;
        s += 1;
    }
    r
}

/// {n}_lambda = sum_s (floor(n/p^s) - floor(n/p^(s+1))) lambda_s.
pub fn brace_rep(p: u64, n: u64) -> PTypicalRep {
    let mut r = PTypicalRep::zero();
    let mut s = 0u32;
    let mut ps = 1u64;
    while n / ps > 0 {
        let here = n / ps;
        let next = n / (ps * p);
        r.add_lambda(s, (here - next) as i64);
        ps *= p;
        s += 1;
    }
    r
}

/// p-typification of a multiset of lambda^e summands:
/// lambda^e -> lambda_{v_p(e)} for e >= 1, lambda^0 -> lambda_inf.
pub fn p_typify(p: u64, exponents: &[u64]) -> PTypicalRep {
    let mut r = PTypicalRep::zero();
    for &e in exponents {
        if e == 0 {
            r.mult_inf += 1;
        } else {
            r.add_lambda(vp(p, e).unwrap() as u32, 1);
        }
    }
    r
}

/// Restriction of {n}_lambda to C_{p^k}, recorded p-typically:
/// floor(n/p^k) lambda_inf + sum_{r<k} (floor(n/p^r) - floor(n/p^(r+1))) lambda_r.
pub fn restrict_brace_level(p: u64, n: u64, k: u32) -> PTypicalRep {
    let mut r = PTypicalRep::zero();
    let pk = p.checked_pow(k).expect("p^k overflow");
    r.mult_inf = (n / pk) as i64;
    for s in 0..k {
        let ps = p.pow(s);
        r.add_lambda(s, (n / ps - n / (ps * p)) as i64);
    }
    r
}

/// The slice-connectivity certificate: d_0(`[n]_lambda`) = n and
/// 2 d_k(`[n]_lambda`) >= ceil(2n/p^k) for all k.
pub fn hill_yarnall_certificate(p: u64, n: u64) -> bool {
    let rep = bracket_rep(p, n);
    if rep.complex_dim() != n as i64 {
        return false;
    }
    let mut pk = 1u64;
    loop {
        let k = {
            let mut k = 0;
            let mut t = pk;
            while t > 1 {
                t /= p;
                k += 1;
            }
            k
        };
        if 2 * rep.dim_seq(k) < (2 * n).div_ceil(pk) as i64 {
            return false;
        }
        if pk > 2 * n {
            break;
        }
        pk *= p;
    }
    true
}

/// The truncation certificate: for s * p^k > 2n with s even and positive,
/// the virtual class
///   V = (s/2 - floor(n/p^k)) lambda_inf + (s/2) alpha - beta,
///   alpha = sum_{r<k} (p^(k-r) - p^(k-r-1)) lambda_r,
///   beta  = sum_{r<k} (floor(n/p^r) - floor(n/p^(r+1))) lambda_r,
/// has all finite multiplicities >= 0 and a strictly positive lambda_inf part.
pub fn mack_trunc_certificate(p: u64, n: u64, s: u64, k: u32) -> Result<bool, &'static str> {
    let pk = p.checked_pow(k).ok_or("p^k overflow")?;
    if s == 0 || !s.is_multiple_of(2) {
        return Err("s must be even and positive");
    }
    if s.checked_mul(pk).ok_or("s*p^k overflow")? <= 2 * n {
        return Err("need s * p^k > 2n");
    }
    let half = (s / 2) as i64;
    let mut v = PTypicalRep::zero();
    v.mult_inf = half - (n / pk) as i64;
    for r in 0..k {
        let alpha_r = (p.pow(k - r) - p.pow(k - r - 1)) as i64;
        let beta_r = (n / p.pow(r) - n / p.pow(r + 1)) as i64;
        v.add_lambda(r, half * alpha_r - beta_r);
    }
    Ok(v.finite_mults().all(|(_, m)| m >= 0) && v.mult_inf > 0)
}
