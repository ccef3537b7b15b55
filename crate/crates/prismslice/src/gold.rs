//! The gold-element monomial calculus.
//!
//! Monomials in sigma, a_{lambda_i}, u_{lambda_i} carry an RO(T) degree
//! (deg sigma = 2, deg a_{lambda_i} = -lambda_i, deg u_{lambda_i} =
//! 2 - lambda_i). Ratios of equal-degree monomials rewrite to coefficients
//! in A via the q-gold relations
//!
//!   R1:  sigma a_{lambda_j} = `[p^(j+1)]_A` u_{lambda_j}
//!   R2:  a_{lambda_j} u_{lambda_i} = phi^(i+1)(`[p^(j-i)]_A`) a_{lambda_i} u_{lambda_j}   (i < j)
//!
//! Coefficients are tracked as `AtomProduct`s -- unit-suppressed products of
//! p and the atoms xi_j = phi^j(`[p]_A`) -- and materialized into a ring model
//! on demand.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::reps::PTypicalRep;
use crate::rings::{Elem, Ring, RingError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GoldError {
    #[error("monomials have different RO(T) degrees")]
    DegreeMismatch,
    #[error("ratio is not an atom product (rewriting stuck)")]
    NotComparable,
    #[error("rewrite step budget exhausted")]
    BudgetExhausted,
    #[error("atom product has a negative exponent, cannot materialize")]
    NegativeExponent,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Unit-suppressed product p^exp_p * prod_j xi_j^exp(j).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AtomProduct {
    pub exp_p: i64,
    xi: BTreeMap<u32, i64>,
}

impl AtomProduct {
    pub fn one() -> Self {
        AtomProduct::default()
    }

    pub fn p_pow(e: i64) -> Self {
        AtomProduct {
            exp_p: e,
            xi: BTreeMap::new(),
        }
    }

    pub fn xi(j: u32) -> Self {
        let mut a = AtomProduct::one();
        a.push_xi(j, 1);
        a
    }

    /// xi_lo xi_{lo+1} ... xi_hi (empty when hi < lo).
    pub fn xi_interval(lo: u32, hi_exclusive: u32) -> Self {
        let mut a = AtomProduct::one();
        for j in lo..hi_exclusive {
            a.push_xi(j, 1);
        }
        a
    }

    /// `[p^k]_A` = xi_0 ... xi_{k-1} as atoms.
    pub fn bracket_pk(k: u32) -> Self {
        AtomProduct::xi_interval(0, k)
    }

    /// `[n]_A!` as atoms: exponent of xi_j is floor(n / p^(j+1)).
    pub fn qa_factorial(p: u64, n: u64) -> Self {
        let mut a = AtomProduct::one();
        let mut j = 0u32;
        let mut pj = p;
        while n / pj > 0 {
            a.push_xi(j, (n / pj) as i64);
            j += 1;
            pj = pj.checked_mul(p).expect("overflow");
        }
        a
    }

    pub fn push_xi(&mut self, j: u32, e: i64) {
        if e == 0 {
            return;
        }
        let v = self.xi.entry(j).or_insert(0);
        *v += e;
        if *v == 0 {
            self.xi.remove(&j);
        }
    }

    pub fn xi_exp(&self, j: u32) -> i64 {
        self.xi.get(&j).copied().unwrap_or(0)
    }

    pub fn xi_exps(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.xi.iter().map(|(&j, &e)| (j, e))
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.exp_p += other.exp_p;
        for (j, e) in other.xi_exps() {
            out.push_xi(j, e);
        }
        out
    }

    /// self / other, allowing negative exponents in the result.
    pub fn div(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.exp_p -= other.exp_p;
        for (j, e) in other.xi_exps() {
            out.push_xi(j, -e);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.exp_p == 0 && self.xi.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.exp_p >= 0 && self.xi.values().all(|&e| e >= 0)
    }

    /// Valuation under the crystalline specialization xi_j -> p.
    pub fn crystalline_valuation(&self) -> i64 {
        self.exp_p + self.xi.values().sum::<i64>()
    }

    /// Materialize in a ring model: `p^exp_p * prod phi^j([p]_A)^exp(j)`.
    pub fn to_ring(&self, ring: &Ring) -> Result<Elem, GoldError> {
        if !self.is_nonnegative() {
            return Err(GoldError::NegativeExponent);
        }
        let mut acc = ring.from_i64(ring.model.p as i64).pow(self.exp_p as u64);
        for (j, e) in self.xi_exps() {
            acc = acc.mul(&ring.xi(j).pow(e as u64));
        }
        Ok(acc)
    }
}

/// A Laurent monomial sigma^s * prod a_{lambda_i}^{a_i} u_{lambda_i}^{u_i}.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GoldMonomial {
    pub sigma_exp: i64,
    a_exp: BTreeMap<u32, i64>,
    u_exp: BTreeMap<u32, i64>,
}

impl GoldMonomial {
    pub fn one() -> Self {
        GoldMonomial::default()
    }

    pub fn sigma(e: i64) -> Self {
        GoldMonomial {
            sigma_exp: e,
            ..Default::default()
        }
    }

    pub fn a_lambda(i: u32) -> Self {
        let mut m = GoldMonomial::one();
        m.push_a(i, 1);
        m
    }

    pub fn u_lambda(i: u32) -> Self {
        let mut m = GoldMonomial::one();
        m.push_u(i, 1);
        m
    }

    /// a_alpha = prod a_{lambda_i}^{k_i} for an actual fixed-point-free rep.
    pub fn a_of_rep(alpha: &PTypicalRep) -> Self {
        let mut m = GoldMonomial::one();
        for (i, k) in alpha.finite_mults() {
            m.push_a(i, k);
        }
        m
    }

    pub fn u_of_rep(alpha: &PTypicalRep) -> Self {
        let mut m = GoldMonomial::one();
        for (i, k) in alpha.finite_mults() {
            m.push_u(i, k);
        }
        m
    }

    pub fn push_a(&mut self, i: u32, e: i64) {
        if e == 0 {
            return;
        }
        let v = self.a_exp.entry(i).or_insert(0);
        *v += e;
        if *v == 0 {
            self.a_exp.remove(&i);
        }
    }

    pub fn push_u(&mut self, i: u32, e: i64) {
        if e == 0 {
            return;
        }
        let v = self.u_exp.entry(i).or_insert(0);
        *v += e;
        if *v == 0 {
            self.u_exp.remove(&i);
        }
    }

    pub fn a_exp(&self, i: u32) -> i64 {
        self.a_exp.get(&i).copied().unwrap_or(0)
    }

    pub fn u_exp(&self, i: u32) -> i64 {
        self.u_exp.get(&i).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sigma_exp += other.sigma_exp;
        for (&i, &e) in &other.a_exp {
            out.push_a(i, e);
        }
        for (&i, &e) in &other.u_exp {
            out.push_u(i, e);
        }
        out
    }

    /// The RO(T) degree as a virtual p-typical class:
    /// 2(s + sum u) trivial reals and -(a_i + u_i) copies of lambda_i.
    pub fn degree(&self) -> PTypicalRep {
        let mut d = PTypicalRep::zero();
        let usum: i64 = self.u_exp.values().sum();
        d.trivial_real = 2 * (self.sigma_exp + usum);
        let idxs: Vec<u32> = self
            .a_exp
            .keys()
            .chain(self.u_exp.keys())
            .copied()
            .collect();
        for i in idxs {
            let want = -(self.a_exp(i) + self.u_exp(i));
            d.add_lambda(i, want - d.mult(i));
        }
        d
    }
}

/// Canonical A-module generator of TF in degree 2i - alpha, for alpha an
/// actual fixed-point-free representation and i >= 0:
/// sigma^(i - d_0) u_alpha when d_0(alpha) <= i, otherwise
/// a_{alpha[0,r-1)} a_{lambda_{r-1}}^{d_{r-1}-i} u_{lambda_{r-1}}^{i-d_r} u_{alpha[r,n)}
/// for the unique case d_r(alpha) <= i < d_{r-1}(alpha).
pub fn canonical_generator(i: u64, alpha: &PTypicalRep) -> GoldMonomial {
    assert!(
        alpha.is_actual() && alpha.is_fixed_point_free(),
        "alpha must be an actual fixed-point-free representation"
    );
    let i = i as i64;
    let d0 = alpha.dim_seq(0);
    if i >= d0 {
        let mut m = GoldMonomial::sigma(i - d0);
        for (s, k) in alpha.finite_mults() {
            m.push_u(s, k);
        }
        return m;
    }
    // minimal r >= 1 with d_r <= i; exists since d_r eventually hits 0 <= i
    let mut r = 1u32;
    while alpha.dim_seq(r) > i {
        r += 1;
    }
    let mut m = GoldMonomial::one();
    for (s, k) in alpha.finite_mults() {
        if s < r - 1 {
            m.push_a(s, k);
        } else if s >= r {
            m.push_u(s, k);
        }
    }
    m.push_a(r - 1, alpha.dim_seq(r - 1) - i);
    m.push_u(r - 1, i - alpha.dim_seq(r));
    m
}

/// The geometric level of the TF group in degree 2i - alpha: `None` means
/// the full Witt Mackey functor, `Some(r-1)` means Phi^{C_{p^(r-1)}} W.
pub fn tf_mackey_level(i: u64, alpha: &PTypicalRep) -> Option<u32> {
    let i = i as i64;
    if i >= alpha.dim_seq(0) {
        return None;
    }
    let mut r = 1u32;
    while alpha.dim_seq(r) > i {
        r += 1;
    }
    Some(r - 1)
}

type StateKey = (i64, Vec<(u32, i64)>, Vec<(u32, i64)>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    R1 { j: u32 },
    R2 { i: u32, j: u32 },
}

struct RewriteState {
    sigma: i64,
    a: BTreeMap<u32, i64>,
    u: BTreeMap<u32, i64>,
    atoms: AtomProduct,
}

impl RewriteState {
    fn get(m: &BTreeMap<u32, i64>, i: u32) -> i64 {
        m.get(&i).copied().unwrap_or(0)
    }

    fn bump(m: &mut BTreeMap<u32, i64>, i: u32, e: i64) {
        let v = m.entry(i).or_insert(0);
        *v += e;
        if *v == 0 {
            m.remove(&i);
        }
    }

    fn apply(&mut self, mv: Move) {
        match mv {
            Move::R1 { j } => {
                // sigma a_j -> [p^(j+1)]_A u_j
                self.sigma -= 1;
                Self::bump(&mut self.a, j, -1);
                Self::bump(&mut self.u, j, 1);
                self.atoms = self.atoms.times(&AtomProduct::bracket_pk(j + 1));
            }
            Move::R2 { i, j } => {
                // a_j u_i -> phi^(i+1)([p^(j-i)]_A) a_i u_j
                Self::bump(&mut self.a, j, -1);
                Self::bump(&mut self.u, i, -1);
                Self::bump(&mut self.a, i, 1);
                Self::bump(&mut self.u, j, 1);
                self.atoms = self.atoms.times(&AtomProduct::xi_interval(i + 1, j + 1));
            }
        }
    }

    fn unapply(&mut self, mv: Move) {
        match mv {
            Move::R1 { j } => {
                self.sigma += 1;
                Self::bump(&mut self.a, j, 1);
                Self::bump(&mut self.u, j, -1);
            }
            Move::R2 { i, j } => {
                Self::bump(&mut self.a, j, 1);
                Self::bump(&mut self.u, i, 1);
                Self::bump(&mut self.a, i, -1);
                Self::bump(&mut self.u, j, -1);
            }
        }
    }

    fn deficits_remain(&self) -> bool {
        self.sigma < 0 || self.a.values().any(|&e| e < 0) || self.u.values().any(|&e| e < 0)
    }

    fn applicable(&self) -> Vec<Move> {
        let mut moves = Vec::new();
        let neg_u: Vec<u32> = self
            .u
            .iter()
            .filter(|(_, &e)| e < 0)
            .map(|(&j, _)| j)
            .collect();
        for &j in &neg_u {
            if Self::get(&self.a, j) >= 1 {
                if self.sigma >= 1 {
                    moves.push(Move::R1 { j });
                }
                for (&i, &e) in self.u.range(..j) {
                    if e >= 1 {
                        moves.push(Move::R2 { i, j });
                    }
                }
            }
        }
        for (&i, &e) in &self.a {
            if e < 0 && Self::get(&self.u, i) >= 1 {
                for (&j, &aj) in self.a.range(i + 1..) {
                    if aj >= 1 {
                        moves.push(Move::R2 { i, j });
                    }
                }
            }
        }
        moves
    }

    fn key(&self) -> StateKey {
        (
            self.sigma,
            self.a.iter().map(|(&i, &e)| (i, e)).collect(),
            self.u.iter().map(|(&i, &e)| (i, e)).collect(),
        )
    }
}

const REWRITE_BUDGET: usize = 200_000;

/// Backtracking reduction: greedy move orders can starve sigma (a high
/// u-deficit consuming sigma that a low u-deficit needed), so dead branches
/// are memoized and abandoned. Every successful reduction of a given ratio
/// yields the same atom exponents; only deadlocks depend on the order.
fn reduce_search(
    st: &mut RewriteState,
    dead: &mut std::collections::HashSet<StateKey>,
    budget: &mut usize,
    shuffle: &mut dyn FnMut(&mut Vec<Move>),
) -> Result<bool, GoldError> {
    if !st.deficits_remain() {
        debug_assert!(st.sigma == 0 && st.a.is_empty() && st.u.is_empty());
        return Ok(true);
    }
    if *budget == 0 {
        return Err(GoldError::BudgetExhausted);
    }
    *budget -= 1;
    let key = st.key();
    if dead.contains(&key) {
        return Ok(false);
    }
    let mut moves = st.applicable();
    shuffle(&mut moves);
    for mv in moves {
        let before_atoms = st.atoms.clone();
        st.apply(mv);
        if reduce_search(st, dead, budget, shuffle)? {
            return Ok(true);
        }
        st.atoms = before_atoms;
        st.unapply(mv);
    }
    dead.insert(key);
    Ok(false)
}

fn reduce_with(
    m1: &GoldMonomial,
    m2: &GoldMonomial,
    shuffle: &mut dyn FnMut(&mut Vec<Move>),
) -> Result<AtomProduct, GoldError> {
    if m1.degree() != m2.degree() {
        return Err(GoldError::DegreeMismatch);
    }
    let mut st = RewriteState {
        sigma: m1.sigma_exp - m2.sigma_exp,
        a: BTreeMap::new(),
        u: BTreeMap::new(),
        atoms: AtomProduct::one(),
    };
    let mut idxs: Vec<u32> = m1
        .a_exp
        .keys()
        .chain(m1.u_exp.keys())
        .chain(m2.a_exp.keys())
        .chain(m2.u_exp.keys())
        .copied()
        .collect();
    idxs.sort_unstable();
    idxs.dedup();
    for &i in &idxs {
        RewriteState::bump(&mut st.a, i, m1.a_exp(i) - m2.a_exp(i));
        RewriteState::bump(&mut st.u, i, m1.u_exp(i) - m2.u_exp(i));
    }
    let mut dead = std::collections::HashSet::new();
    let mut budget = REWRITE_BUDGET;
    if reduce_search(&mut st, &mut dead, &mut budget, shuffle)? {
        Ok(st.atoms)
    } else {
        Err(GoldError::NotComparable)
    }
}

/// Rewrite m1 / m2 into an atom product c with m1 = c * m2 up to unit.
///
/// Errors with `DegreeMismatch` when the degrees differ and `NotComparable`
/// when the ratio is not a (nonnegative) atom product.
pub fn reduce_ratio(m1: &GoldMonomial, m2: &GoldMonomial) -> Result<AtomProduct, GoldError> {
    reduce_with(m1, m2, &mut |_| {})
}

/// Same reduction but exploring applicable moves in a randomized order;
/// used to exercise confluence of the rewrite system.
pub fn reduce_ratio_random_order<R: Rng>(
    m1: &GoldMonomial,
    m2: &GoldMonomial,
    rng: &mut R,
) -> Result<AtomProduct, GoldError> {
    reduce_with(m1, m2, &mut |moves: &mut Vec<Move>| {
        for k in (1..moves.len()).rev() {
            let j = rng.gen_range(0..=k);
            moves.swap(k, j);
        }
    })
}

/// The key identity sigma^k a_{{k}_lambda} u_{{k}_lambda}^{-1} = `[pk]_A!`,
/// checked at the atom level.
pub fn key_identity(p: u64, k: u64) -> Result<bool, GoldError> {
    let brace = crate::reps::brace_rep(p, k);
    let lhs = GoldMonomial::sigma(k as i64).mul(&GoldMonomial::a_of_rep(&brace));
    let rhs = GoldMonomial::u_of_rep(&brace);
    let atoms = reduce_ratio(&lhs, &rhs)?;
    Ok(atoms == AtomProduct::qa_factorial(p, p * k))
}
