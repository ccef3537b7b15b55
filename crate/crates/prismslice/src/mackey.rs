//! Cyclic-module Mackey towers for C_{p^n}: the Witt Mackey functor W with
//! levels A/`[p^(k+1)]_A`, transfer-generated subfunctors tr_{C_{p^r}} W,
//! geometric quotients Phi^{C_{p^r}} W, the res-tr axiom, and levelwise
//! exactness checking for the short exact sequences relating them.
//!
//! Every Mackey functor appearing here is a tower of cyclic A-modules with
//! multiplier maps; that is the shape all of them take.

use thiserror::Error;

use crate::gold::AtomProduct;
use crate::prism::{Prism, PrismError, UnitTable};
use crate::rings::{Elem, Ring, RingError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MackeyError {
    #[error("incompatible tower shapes")]
    Shape,
    #[error(transparent)]
    Prism(#[from] PrismError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A cyclic A-module A/(ann). `Free` is the zero annihilator (the module A
/// itself); an empty atom product annihilator is the zero module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ann {
    Free,
    By(AtomProduct),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicAModule {
    pub ann: Ann,
}

impl CyclicAModule {
    pub fn free() -> Self {
        CyclicAModule { ann: Ann::Free }
    }

    pub fn zero() -> Self {
        CyclicAModule {
            ann: Ann::By(AtomProduct::one()),
        }
    }

    pub fn by(ann: AtomProduct) -> Self {
        CyclicAModule { ann: Ann::By(ann) }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.ann, Ann::By(a) if a.is_one())
    }

    /// Z/p^v under the crystalline specialization xi_j -> p; None = Z_p.
    pub fn crystalline_valuation(&self) -> Option<u64> {
        match &self.ann {
            Ann::Free => None,
            Ann::By(a) => {
                let v = a.crystalline_valuation();
                assert!(v >= 0, "negative annihilator valuation");
                Some(v as u64)
            }
        }
    }

    pub fn ann_to_ring(&self, ring: &Ring) -> Result<Option<Elem>, MackeyError> {
        match &self.ann {
            Ann::Free => Ok(None),
            Ann::By(a) => Ok(Some(a.to_ring(ring).map_err(|_| MackeyError::Shape)?)),
        }
    }
}

/// Symbolic Mackey functors of the shapes used by the slice theorems,
/// realizable at any level k >= 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MackeyDescriptor {
    Zero,
    /// The Witt Mackey functor: level k is A/`[p^(k+1)]_A`.
    W,
    /// tr_{C_{p^r}} W: levels A/`[p^(k+1)]_A` for k <= r, constant A/`[p^(r+1)]_A` above.
    TrW(u32),
    /// Phi^{C_{p^r}} W: zero for k <= r, A/phi^(r+1)(`[p^(k-r)]_A`) above.
    PhiW(u32),
    /// The constant Mackey functor on R = A/`[p]_A`.
    ConstR,
    /// tr_{C_{p^(tr)}} Phi^{C_{p^(phi)}} W.
    TrPhi { tr: u32, phi: u32 },
    /// Levelwise quotient by an atom product.
    Quotient(Box<MackeyDescriptor>, AtomProduct),
}

impl MackeyDescriptor {
    pub fn quotient(inner: MackeyDescriptor, d: AtomProduct) -> Self {
        MackeyDescriptor::Quotient(Box::new(inner), d)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MackeyDescriptor::Zero)
    }

    /// The geometric level r of the descriptor (vanishing-line color):
    /// 0 for W-shaped functors, r+1 for Phi^{C_{p^r}}-shaped ones.
    pub fn color_level(&self) -> u32 {
        match self {
            MackeyDescriptor::Zero => 0,
            MackeyDescriptor::W | MackeyDescriptor::TrW(_) | MackeyDescriptor::ConstR => 0,
            MackeyDescriptor::PhiW(r) => r + 1,
            MackeyDescriptor::TrPhi { phi, .. } => phi + 1,
            MackeyDescriptor::Quotient(inner, _) => inner.color_level(),
        }
    }

    /// Stable (kind, params) pair for serialization.
    pub fn kind_params(&self) -> (&'static str, Vec<i64>) {
        match self {
            MackeyDescriptor::Zero => ("zero", vec![]),
            MackeyDescriptor::W => ("W", vec![]),
            MackeyDescriptor::TrW(r) => ("trW", vec![*r as i64]),
            MackeyDescriptor::PhiW(r) => ("phiW", vec![*r as i64]),
            MackeyDescriptor::ConstR => ("constR", vec![]),
            MackeyDescriptor::TrPhi { tr, phi } => ("trPhi", vec![*tr as i64, *phi as i64]),
            MackeyDescriptor::Quotient(inner, d) => {
                let (k, mut ps) = inner.kind_params();
                // encode the quotient as (inner code, p-exponent, xi exponents...)
                let mut params = vec![match k {
                    "W" => 0,
                    "phiW" => 1,
                    _ => 2,
                }];
                params.append(&mut ps);
                params.push(d.exp_p);
                for (j, e) in d.xi_exps() {
                    params.push(j as i64);
                    params.push(e);
                }
                ("quotient", params)
            }
        }
    }
}

/// The value of a descriptor at level k, as a cyclic A-module.
pub fn realize(desc: &MackeyDescriptor, k: u32) -> CyclicAModule {
    match desc {
        MackeyDescriptor::Zero => CyclicAModule::zero(),
        MackeyDescriptor::W => CyclicAModule::by(AtomProduct::bracket_pk(k + 1)),
        MackeyDescriptor::TrW(r) => CyclicAModule::by(AtomProduct::bracket_pk(k.min(*r) + 1)),
        MackeyDescriptor::PhiW(r) => {
            if k <= *r {
                CyclicAModule::zero()
            } else {
                CyclicAModule::by(AtomProduct::xi_interval(r + 1, k + 1))
            }
        }
        MackeyDescriptor::ConstR => CyclicAModule::by(AtomProduct::bracket_pk(1)),
        MackeyDescriptor::TrPhi { tr, phi } => {
            let eff = k.min(*tr);
            if eff <= *phi {
                CyclicAModule::zero()
            } else {
                CyclicAModule::by(AtomProduct::xi_interval(phi + 1, eff + 1))
            }
        }
        MackeyDescriptor::Quotient(inner, d) => {
            let base = realize(inner, k);
            match base.ann {
                Ann::Free => CyclicAModule::by(d.clone()),
                Ann::By(a) => {
                    if a.is_one() {
                        CyclicAModule::zero()
                    } else if d.crystalline_valuation() < a.crystalline_valuation() {
                        CyclicAModule::by(d.clone())
                    } else {
                        CyclicAModule::by(a)
                    }
                }
            }
        }
    }
}

/// A per-step map multiplier: an atom product times an optional inverse
/// diagonal unit u_{d,d}^(-1) (transfers carry these units explicitly).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepMult {
    pub atoms: AtomProduct,
    pub inv_diag_unit: Option<u32>,
}

impl StepMult {
    pub fn one() -> Self {
        StepMult {
            atoms: AtomProduct::one(),
            inv_diag_unit: None,
        }
    }

    pub fn atoms(a: AtomProduct) -> Self {
        StepMult {
            atoms: a,
            inv_diag_unit: None,
        }
    }

    /// Materialize as a (numerator, declared-unit denominator) pair; the
    /// denominator is kept symbolic so congruence dividends stay polynomial.
    pub fn to_ring_cleared(
        &self,
        prism: &Prism,
        table: &UnitTable,
    ) -> Result<(Elem, Elem), MackeyError> {
        let num = self
            .atoms
            .to_ring(&prism.ring)
            .map_err(|_| MackeyError::Shape)?;
        let denom = match self.inv_diag_unit {
            None => prism.ring.one(),
            Some(d) => table.get(d, d)?.clone(),
        };
        Ok((num, denom))
    }
}

/// Levelwise cyclic A-modules with restriction/transfer multipliers.
/// `res[k]` maps level k+1 to level k (composed with the quotient
/// projection); `tr[k]` maps level k up to level k+1.
#[derive(Clone, Debug)]
pub struct MackeyTower {
    pub levels: Vec<CyclicAModule>,
    pub res: Vec<StepMult>,
    pub tr: Vec<StepMult>,
}

/// The Witt Mackey functor up to level n: levels A/`[p^(k+1)]_A`, restriction
/// the natural projection, transfer from level k to k+1 multiplication by
/// xi_(k+1) u_(k+1,k+1)^(-1).
pub fn witt_tower(n: u32) -> MackeyTower {
    let levels = (0..=n)
        .map(|k| realize(&MackeyDescriptor::W, k))
        .collect();
    let res = (0..n).map(|_| StepMult::one()).collect();
    let tr = (0..n)
        .map(|k| StepMult {
            atoms: AtomProduct::xi(k + 1),
            inv_diag_unit: Some(k + 1),
        })
        .collect();
    MackeyTower { levels, res, tr }
}

/// The constant tower A/`[p]_A` with res = 1, tr = p.
pub fn const_r_tower(n: u32) -> MackeyTower {
    MackeyTower {
        levels: (0..=n)
            .map(|k| realize(&MackeyDescriptor::ConstR, k))
            .collect(),
        res: (0..n).map(|_| StepMult::one()).collect(),
        tr: (0..n).map(|_| StepMult::atoms(AtomProduct::p_pow(1))).collect(),
    }
}

/// res . tr = p modulo the lower-level annihilator, at each step, checked
/// unit-cleared in the prism's ring model: with multipliers a/u the test is
/// divisibility of (a_res a_tr - p u_res u_tr).
pub fn axiom_check(
    tower: &MackeyTower,
    prism: &Prism,
    table: &UnitTable,
) -> Result<bool, MackeyError> {
    let p_elem = prism.ring.from_i64(prism.p() as i64);
    for k in 0..tower.tr.len() {
        let (res_num, res_den) = tower.res[k].to_ring_cleared(prism, table)?;
        let (tr_num, tr_den) = tower.tr[k].to_ring_cleared(prism, table)?;
        let diff = res_num
            .mul(&tr_num)
            .sub(&p_elem.mul(&res_den).mul(&tr_den));
        let ok = match tower.levels[k].ann_to_ring(&prism.ring)? {
            None => diff.is_zero(),
            Some(ann) => diff.is_divisible_by(&ann)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One level of a three-term short exact sequence
/// 0 -> A/left --f--> A/mid --g--> A/right -> 0 with multiplier maps.
#[derive(Clone, Debug)]
pub struct ShortSeqLevel {
    pub left: CyclicAModule,
    pub mid: CyclicAModule,
    pub right: CyclicAModule,
    pub f: AtomProduct,
    pub g: AtomProduct,
}

fn val(m: &CyclicAModule) -> u64 {
    m.crystalline_valuation()
        .expect("crystalline check needs finite levels")
}

/// Honest finite-module verification over Z/p^M (units in the multipliers
/// do not affect exactness, so multipliers act as exact p-powers).
pub fn exactness_check_crystalline(seq: &ShortSeqLevel, p: u64) -> bool {
    let (a, b, c) = (val(&seq.left), val(&seq.mid), val(&seq.right));
    let vf = seq.f.crystalline_valuation() as u32;
    let vg = seq.g.crystalline_valuation() as u32;
    let (pa, pb, pc) = (p.pow(a as u32), p.pow(b as u32), p.pow(c as u32));
    // well-definedness
    if !(pa as u128 * p.pow(vf) as u128).is_multiple_of(pb as u128) {
        return false;
    }
    if !(pb as u128 * p.pow(vg) as u128).is_multiple_of(pc as u128) {
        return false;
    }
    let f = |x: u64| (x as u128 * p.pow(vf) as u128 % pb as u128) as u64;
    let g = |y: u64| (y as u128 * p.pow(vg) as u128 % pc as u128) as u64;
    // injectivity of f
    for x in 0..pa {
        if f(x) == 0 && x != 0 {
            return false;
        }
    }
    // ker g = im f
    let image_f: std::collections::BTreeSet<u64> = (0..pa).map(f).collect();
    for y in 0..pb {
        let in_ker = g(y) == 0;
        if in_ker != image_f.contains(&y) {
            return false;
        }
    }
    // surjectivity of g
    let image_g: std::collections::BTreeSet<u64> = (0..pb).map(g).collect();
    image_g.len() == pc as usize
}

fn clip_div(a: &AtomProduct, b: &AtomProduct) -> AtomProduct {
    // exponentwise max(a - b, 0)
    let mut out = AtomProduct::one();
    out.exp_p = (a.exp_p - b.exp_p).max(0);
    let mut seen: Vec<u32> = a.xi_exps().map(|(j, _)| j).collect();
    seen.extend(b.xi_exps().map(|(j, _)| j));
    seen.sort_unstable();
    seen.dedup();
    for j in seen {
        out.push_xi(j, (a.xi_exp(j) - b.xi_exp(j)).max(0));
    }
    out
}

fn ann_atoms(m: &CyclicAModule) -> Option<&AtomProduct> {
    match &m.ann {
        Ann::Free => None,
        Ann::By(a) => Some(a),
    }
}

/// Symbolic check in the q-model: atom bookkeeping for kernels and images
/// (justified by the extended prism congruences, which make the atoms a
/// transversal family), plus randomized element sampling materialized in
/// the ring.
pub fn exactness_check_q(
    seq: &ShortSeqLevel,
    ring: &Ring,
    samples: &[Elem],
) -> Result<bool, MackeyError> {
    let left = ann_atoms(&seq.left).ok_or(MackeyError::Shape)?;
    let mid = ann_atoms(&seq.mid).ok_or(MackeyError::Shape)?;
    let right = ann_atoms(&seq.right).ok_or(MackeyError::Shape)?;
    // well-definedness and injectivity of f: (mid : f) = left
    if clip_div(mid, &seq.f) != *left {
        return Ok(false);
    }
    // exactness at mid: ker g = (right : g) must be generated by f
    if clip_div(right, &seq.g) != seq.f {
        return Ok(false);
    }
    // surjectivity of g: either the right module is zero or g is a unit
    if !(seq.right.is_zero() || seq.g.is_one()) {
        return Ok(false);
    }
    // sampled composite-zero in the ring model: x * f * g = 0 in A/right
    let f_elem = seq.f.to_ring(ring).map_err(|_| MackeyError::Shape)?;
    let g_elem = seq.g.to_ring(ring).map_err(|_| MackeyError::Shape)?;
    let right_elem = right.to_ring(ring).map_err(|_| MackeyError::Shape)?;
    for x in samples {
        let composite = x.mul(&f_elem).mul(&g_elem);
        if right.is_one() {
            continue; // zero module: nothing to check
        }
        if !composite.is_divisible_by(&right_elem)? {
            return Ok(false);
        }
        // sampled kernel membership: (x * ker-generator) * g lands in (right)
        let kergen = clip_div(right, &seq.g).to_ring(ring).map_err(|_| MackeyError::Shape)?;
        if !x.mul(&kergen).mul(&g_elem).is_divisible_by(&right_elem)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Inclusion multiplier for tr_{C_{p^r}} W inside tr_{C_{p^r'}} W (r <= r',
/// with r' = u32::MAX standing for W itself) at level k.
fn inclusion_mult(k: u32, r: u32, r_up: u32) -> AtomProduct {
    AtomProduct::xi_interval(k.min(r) + 1, k.min(r_up) + 1)
}

/// The three short exact sequences relating tr_e, tr_{C_p} and the
/// geometric quotients for the C_{p^2}-restricted Witt Mackey functor,
/// realized at levels 0..=levels.
pub fn ex_mackey_sequences(levels: u32) -> [Vec<ShortSeqLevel>; 3] {
    let w = MackeyDescriptor::W;
    let tr0 = MackeyDescriptor::TrW(0);
    let tr1 = MackeyDescriptor::TrW(1);
    let phi0 = MackeyDescriptor::PhiW(0);
    let phi1 = MackeyDescriptor::PhiW(1);
    let phitr = MackeyDescriptor::TrPhi { tr: 1, phi: 0 };
    let seq = |sub: &MackeyDescriptor,
               ambient: &MackeyDescriptor,
               quot: &MackeyDescriptor,
               r: u32,
               r_up: u32| {
        (0..=levels)
            .map(|k| ShortSeqLevel {
                left: realize(sub, k),
                mid: realize(ambient, k),
                right: realize(quot, k),
                f: inclusion_mult(k, r, r_up),
                g: AtomProduct::one(),
            })
            .collect::<Vec<_>>()
    };
    [
        seq(&tr0, &w, &phi0, 0, u32::MAX),
        seq(&tr1, &w, &phi1, 1, u32::MAX),
        seq(&tr0, &tr1, &phitr, 0, 1),
    ]
}
