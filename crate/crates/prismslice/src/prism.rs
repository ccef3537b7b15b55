//! Prisms over the ring models: the prism condition, the extended prism
//! condition with its constructive unit table, norm lifts (Borger formula
//! and q-Pochhammer), the q-Legendre formula, and the multi-prime Warning
//! identity.

use thiserror::Error;

use crate::combinatorics::vp;
use crate::rings::exact::ExactQPoly;
use crate::rings::{Elem, Ring, RingError};
use crate::witt::{iso_witt, WittError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrismError {
    #[error("not a prism: delta of the orientation is not a unit")]
    NotAPrism,
    #[error("model depth too shallow for this operation (need {need})")]
    DepthTooShallow { need: u32 },
    #[error("unit table missing entry ({0}, {1})")]
    MissingUnit(u32, u32),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Witt(#[from] WittError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrismKind {
    /// Z_p[[q-1]] with orientation `[p]_q`.
    QCrystalline,
    /// `Z_p[q^(1/p^depth)]`-model with orientation `[p]_{q^(1/p)}`, depth >= 1.
    PerfectQ { depth: u32 },
    /// Z_p with orientation p.
    Crystalline,
    /// Breuil-Kisin model with orientation z - p.
    Kisin,
}

/// An oriented prism over one of the shipped models.
#[derive(Clone, Debug)]
pub struct Prism {
    pub kind: PrismKind,
    pub ring: Ring,
    pub orientation: Elem,
}

impl Prism {
    pub fn new(kind: PrismKind, p: u64, prec_n: u32, prec_m: u32) -> Result<Self, PrismError> {
        let ring = match kind {
            PrismKind::QCrystalline => Ring::q_local(p, 0, prec_n, prec_m)?,
            PrismKind::PerfectQ { depth } => {
                assert!(depth >= 1, "perfect q-model needs depth >= 1");
                Ring::q_local(p, depth, prec_n, prec_m)?
            }
            PrismKind::Crystalline => Ring::crystalline(p, prec_m)?,
            PrismKind::Kisin => Ring::kisin(p, prec_n, prec_m)?,
        };
        let orientation = ring.orientation();
        Ok(Prism {
            kind,
            ring,
            orientation,
        })
    }

    pub fn p(&self) -> u64 {
        self.ring.model.p
    }

    /// xi_j = phi^j(`[p]_A`).
    pub fn xi(&self, j: u32) -> Elem {
        self.orientation.frobenius(j)
    }

    /// `[p^k]_A` = xi_0 ... xi_{k-1}.
    pub fn bracket_pk(&self, k: u32) -> Elem {
        self.ring.qa_pk(k)
    }

    /// The prism condition: delta(`[p]_A`) must be a unit; returns it.
    pub fn prism_condition(&self) -> Result<Elem, PrismError> {
        let d = self.orientation.delta()?;
        if d.is_unit() {
            Ok(d)
        } else {
            Err(PrismError::NotAPrism)
        }
    }

    /// phi^s(`[p]_A`) for possibly negative s, realized through deeper
    /// q-integer levels (available while base_level - s <= depth).
    pub fn shifted_orientation(&self, s: i64) -> Result<Elem, PrismError> {
        if s >= 0 {
            return Ok(self.orientation.frobenius(s as u32));
        }
        let base_level = match self.kind {
            PrismKind::QCrystalline => 0i64,
            PrismKind::PerfectQ { .. } => 1,
            _ => {
                return Err(PrismError::DepthTooShallow {
                    need: (-s) as u32,
                })
            }
        };
        let level = base_level + (-s);
        let depth = self.ring.model.depth() as i64;
        if level > depth {
            return Err(PrismError::DepthTooShallow { need: level as u32 });
        }
        Ok(self.ring.q_integer(self.p(), level as u32)?)
    }
}

/// Units u_{i,j} with phi^j(`[p]_A`) = u_{i,j} p mod `[p^i]_A`, built by the
/// inductive recursion from u_{1,1} = delta(`[p]_A`):
///   u_{i+1,i+1} = u_{i,i}^(p-1) p^(p-2) phi^i(`[p]_A`) + phi^i(u_{1,1})
///   u_{i,j+1}   = u_{i,j}^p p^(p-1) + phi^j(u_{1,1})
#[derive(Clone, Debug)]
pub struct UnitTable {
    pub imax: u32,
    pub jmax: u32,
    units: Vec<Vec<Elem>>, // units[i-1][j-i] = u_{i,j}
}

impl UnitTable {
    pub fn get(&self, i: u32, j: u32) -> Result<&Elem, PrismError> {
        assert!(i >= 1 && j >= i, "unit table indices need 1 <= i <= j");
        self.units
            .get((i - 1) as usize)
            .and_then(|row| row.get((j - i) as usize))
            .ok_or(PrismError::MissingUnit(i, j))
    }
}

/// Build the unit table for a given orientation (not necessarily the
/// prism's own; shifted orientations reuse the same recursion).
fn extended_units_for(
    ring: &Ring,
    orientation: &Elem,
    imax: u32,
    jmax: u32,
) -> Result<UnitTable, PrismError> {
    assert!(imax >= 1 && jmax >= imax);
    let p = ring.model.p;
    let p_elem = ring.from_i64(p as i64);
    let u11 = orientation.delta()?;
    if !u11.is_unit() {
        return Err(PrismError::NotAPrism);
    }
    let mut diag: Vec<Elem> = vec![u11.clone()];
    for i in 1..imax {
        let prev = &diag[(i - 1) as usize];
        let entry = prev
            .pow(p - 1)
            .mul(&p_elem.pow(p - 2))
            .mul(&orientation.frobenius(i))
            .add(&u11.frobenius(i));
        if !entry.is_unit() {
            return Err(PrismError::NotAPrism);
        }
        diag.push(entry);
    }
    let mut units = Vec::with_capacity(imax as usize);
    for i in 1..=imax {
        let mut row = vec![diag[(i - 1) as usize].clone()];
        for j in i..jmax {
            let prev = row.last().unwrap();
            let entry = prev
                .pow(p)
                .mul(&p_elem.pow(p - 1))
                .add(&u11.frobenius(j));
            if !entry.is_unit() {
                return Err(PrismError::NotAPrism);
            }
            row.push(entry);
        }
        units.push(row);
    }
    Ok(UnitTable { imax, jmax, units })
}

/// Unit table for the prism's own orientation; every entry re-verified via
/// `verify_congruence`.
pub fn extended_units(prism: &Prism, imax: u32, jmax: u32) -> Result<UnitTable, PrismError> {
    let table = extended_units_for(&prism.ring, &prism.orientation, imax, jmax)?;
    for i in 1..=imax {
        for j in i..=jmax {
            if !verify_congruence(prism, &table, i, j)? {
                return Err(PrismError::NotAPrism);
            }
        }
    }
    Ok(table)
}

/// Canonical remainder for the principal ideal (b): Weierstrass remainder
/// when b is nonzero mod p, coefficientwise reduction mod p^t when b is
/// p^t times a unit (the crystalline shape).
fn reduce_mod_ideal(x: &Elem, b: &Elem) -> Result<Elem, PrismError> {
    let t = b.content_valuation();
    if t == 0 {
        return Ok(x.weierstrass_rem(b)?);
    }
    let btil = b.divide_p_pow(t)?;
    if btil.is_unit() {
        Ok(x.mod_p_pow(t))
    } else {
        Err(PrismError::Ring(RingError::UnsupportedModel(
            "divisor is a p-multiple of a non-unit",
        )))
    }
}

/// phi^j(`[p]_A`) = u_{i,j} p mod `[p^i]_A`, tested by ideal membership of the
/// difference.
pub fn verify_congruence(
    prism: &Prism,
    table: &UnitTable,
    i: u32,
    j: u32,
) -> Result<bool, PrismError> {
    let u = table.get(i, j)?;
    let p_elem = prism.ring.from_i64(prism.p() as i64);
    let diff = prism.xi(j).sub(&u.mul(&p_elem));
    Ok(diff.is_divisible_by(&prism.bracket_pk(i))?)
}

/// The sharper base congruence phi(`[p]_A`) = u_{1,1} p mod `[p]_A^p`.
pub fn sharper_base_congruence(prism: &Prism, table: &UnitTable) -> Result<bool, PrismError> {
    let u = table.get(1, 1)?;
    let p_elem = prism.ring.from_i64(prism.p() as i64);
    let diff = prism.xi(1).sub(&u.mul(&p_elem));
    Ok(diff.is_divisible_by(&prism.orientation.pow(prism.p()))?)
}

/// phi^r(`[p^(j-i)]_A`) = u p^(j-i) mod `[p^i]_A` for some unit u, which is
/// extracted from the canonical remainder by exact division by p^(j-i).
pub fn corollary_congruence(prism: &Prism, i: u32, j: u32, r: u32) -> Result<bool, PrismError> {
    assert!(i <= j.min(r), "corollary needs i <= min(j, r)");
    let x = prism.bracket_pk(j - i).frobenius(r);
    let divisor = prism.bracket_pk(i);
    let rem = reduce_mod_ideal(&x, &divisor)?;
    if rem.prec_m() <= j - i {
        // p^(j-i) is zero modulo the ideal; the congruence degenerates to
        // divisibility of x itself (crystalline, j - i >= i)
        return Ok(rem.is_zero());
    }
    match rem.divide_p_pow(j - i) {
        Ok(u) => Ok(u.is_unit()),
        Err(RingError::InexactDivision(_)) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// A norm-lift candidate num/denom with denom a declared unit. Keeping the
/// unit symbolic keeps every congruence dividend polynomial, so the
/// truncated Weierstrass reductions stay exact.
#[derive(Clone, Debug)]
pub struct LiftCandidate {
    pub num: Elem,
    pub denom_unit: Elem,
}

impl LiftCandidate {
    pub fn plain(e: Elem, ring: &Ring) -> Self {
        LiftCandidate {
            num: e,
            denom_unit: ring.one(),
        }
    }

    /// Materialize the candidate as a ring element.
    pub fn to_elem(&self) -> Result<Elem, RingError> {
        Ok(self.num.mul(&self.denom_unit.invert()?))
    }
}

/// Borger's formula adapted to the prism: N_n(x) = phi(x) - (phi^n(`[p]_A`)/u_{n,n}) delta(x),
/// returned unit-cleared as (u_{n,n} phi(x) - phi^n(`[p]_A`) delta(x)) / u_{n,n}.
pub fn borger_norm_lift(
    prism: &Prism,
    table: &UnitTable,
    n: u32,
    x: &Elem,
) -> Result<LiftCandidate, PrismError> {
    assert!(n >= 1);
    let unn = table.get(n, n)?;
    let num = unn
        .mul(&x.frobenius(1))
        .sub(&prism.xi(n).mul(&x.delta()?));
    Ok(LiftCandidate {
        num,
        denom_unit: unn.clone(),
    })
}

/// (x, -y; q^(p^(n-1)))_p = prod_{i=0}^(p-1) (x - q^(i p^(n-1)) y).
pub fn q_pochhammer(ring: &Ring, x: &Elem, y: &Elem, n: u32) -> Elem {
    assert!(n >= 1);
    let p = ring.model.p;
    let step = p.checked_pow(n - 1).expect("p^(n-1) overflow");
    let mut acc = ring.one();
    for i in 0..p {
        let root = ring.q_pow(i.checked_mul(step).expect("exponent overflow"));
        acc = acc.mul(&x.sub(&root.mul(y)));
    }
    acc
}

/// Both norm-lift congruences: candidate = phi(x) mod phi^n(`[p]_A`) and
/// candidate = x^p mod `[p^n]_A`, tested unit-cleared (num - denom * rhs).
pub fn norm_lift_check(
    prism: &Prism,
    n: u32,
    candidate: &LiftCandidate,
    x: &Elem,
) -> Result<bool, PrismError> {
    let frob_side = candidate
        .num
        .sub(&candidate.denom_unit.mul(&x.frobenius(1)))
        .is_divisible_by(&prism.xi(n))?;
    if !frob_side {
        return Ok(false);
    }
    Ok(candidate
        .num
        .sub(&candidate.denom_unit.mul(&x.pow(prism.p())))
        .is_divisible_by(&prism.bracket_pk(n))?)
}

/// N(xy) = N(x) N(y) mod `[p^(n+1)]_A` for the Borger lift, checked on the
/// unit-cleared numerators: u_{n,n} B(xy) - B(x) B(y) must be divisible.
pub fn near_multiplicativity_check(
    prism: &Prism,
    table: &UnitTable,
    n: u32,
    x: &Elem,
    y: &Elem,
) -> Result<bool, PrismError> {
    let nx = borger_norm_lift(prism, table, n, x)?;
    let ny = borger_norm_lift(prism, table, n, y)?;
    let nxy = borger_norm_lift(prism, table, n, &x.mul(y))?;
    let diff = nxy.denom_unit.mul(&nxy.num).sub(&nx.num.mul(&ny.num));
    Ok(diff.is_divisible_by(&prism.bracket_pk(n + 1))?)
}

/// The q-Legendre formula in the q-crystalline model:
/// `[n]_q! = u prod_r phi^(r-1)([p]_q)^floor(n/p^r)`
///        `= u prod_r [p^r]_q^(floor(n/p^r) - floor(n/p^(r+1)))`
/// for a unit u. The unit is constructed factorwise (each `[m]_q` divided
/// exactly by its distinguished part `[p^(v_p(m))]_q` in a scratch ring with
/// enough t-headroom for the division), then both identities are verified
/// coefficient-exactly at the requested precision.
pub fn q_legendre_check(p: u64, n: u64, prec_n: u32, prec_m: u32) -> Result<bool, PrismError> {
    assert!(n >= 1);
    let ring = Ring::q_local(p, 0, prec_n, prec_m)?;
    // largest distinguished degree appearing: p^vmax - 1
    let vmax = (1..=n).map(|m| vp(p, m).unwrap()).max().unwrap_or(0) as u32;
    let headroom = pow64(p, vmax) as u32; // > p^vmax - 1
    let big = Ring::q_local(p, 0, prec_n + headroom, prec_m)?;

    let mut unit = ring.one();
    for m in 1..=n {
        let v = vp(p, m).unwrap() as u32;
        let num = big.q_integer(m, 0)?;
        let den = big.qa_pk(v);
        let w = num.divide_exact(&den)?;
        if !w.is_unit() {
            return Ok(false);
        }
        unit = unit.mul(&w.truncated(prec_n, prec_m));
    }
    if !unit.is_unit() {
        return Ok(false);
    }

    let mut factorial = ring.one();
    for m in 1..=n {
        factorial = factorial.mul(&ring.q_integer(m, 0)?);
    }
    // first form: prod_r phi^(r-1)([p]_q)^floor(n/p^r)
    let mut form1 = ring.one();
    let mut r = 1u32;
    while n / pow64(p, r) > 0 {
        let e = n / pow64(p, r);
        form1 = form1.mul(&ring.xi(r - 1).pow(e));
        r += 1;
    }
    // second form: prod_r [p^r]_q^(floor(n/p^r) - floor(n/p^(r+1)))
    let mut form2 = ring.one();
    let mut r = 1u32;
    while n / pow64(p, r) > 0 {
        let e = n / pow64(p, r) - n / pow64(p, r + 1);
        form2 = form2.mul(&ring.qa_pk(r).pow(e));
        r += 1;
    }
    Ok(factorial.eq(&unit.mul(&form1)) && factorial.eq(&unit.mul(&form2)))
}

fn pow64(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("overflow")
}

/// The exact multi-prime Warning identity in `Z[q]`, for rank-one x = q^a,
/// y = q^b, z = x - y:
/// (x,-y;q)_3 = psi^3(z) - `[3]_q` delta_3(z) - `[3]_q` (`[2]_q` - 2)(z delta_2(z) - delta_3(z)).
pub fn warning_identity_check(a: u64, b: u64) -> Result<bool, RingError> {
    let x = ExactQPoly::q_pow(a as usize);
    let y = ExactQPoly::q_pow(b as usize);
    let z = x.sub(&y);
    let q = ExactQPoly::q_pow(1);
    let lhs = x
        .sub(&y)
        .mul(&x.sub(&q.mul(&y)))
        .mul(&x.sub(&q.pow(2).mul(&y)));
    let d2 = z.delta_m(2)?;
    let d3 = z.delta_m(3)?;
    let three_q = ExactQPoly::q_integer(3);
    let two_q_minus_2 = ExactQPoly::q_integer(2).sub(&ExactQPoly::constant(2));
    let rhs = z
        .psi(3)
        .sub(&three_q.mul(&d3))
        .sub(&three_q.mul(&two_q_minus_2).mul(&z.mul(&d2).sub(&d3)));
    Ok(lhs == rhs)
}

/// Lift flavor for the norm-lift diagram check against the Witt side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    Borger,
    /// q-Pochhammer on the rank-one difference q^ax - q^ay.
    QPochhammer { ax: u64, ay: u64 },
}

/// Cross-check of the norm-lift diagram against the Witt module:
/// iso_(n+1)(N(x)) must equal angeltveit_norm(iso_n(x)).
///
/// `base` determines x = phi^n(base) for the Borger flavor (so that all
/// the negative Frobenius shifts of the correction term exist); for the
/// q-Pochhammer flavor x and y are the rank-one elements q^ax, q^ay and
/// base is ignored. Needs a PerfectQ prism of depth >= n + 1.
pub fn norm_lift_diagram_check(
    prism: &Prism,
    n: u32,
    kind: LiftKind,
    base: &Elem,
) -> Result<bool, PrismError> {
    let depth = prism.ring.model.depth();
    assert!(
        matches!(prism.kind, PrismKind::PerfectQ { .. }) && depth > n,
        "diagram check needs a perfect q-model of depth >= n+1"
    );
    let ring = &prism.ring;
    let p = prism.p();

    // ghost components g_k = phi^(k-n)(N(x)) reduced mod [p]_A, k = 0..=n
    let mut ghosts: Vec<Elem> = Vec::with_capacity(n as usize + 1);
    let rr = crate::witt::RRing::new(*ring);
    match kind {
        LiftKind::Borger => {
            let delta_b = base.delta()?;
            for k in 0..=n {
                let shifted_orient = prism.shifted_orientation(k as i64 - n as i64)?;
                let shifted_unn =
                    extended_units_for(ring, &shifted_orient, n, n)?.get(n, n)?.clone();
                let g = base
                    .frobenius(k + 1)
                    .sub(&prism.xi(k).mul(&shifted_unn.invert()?).mul(&delta_b.frobenius(k)));
                ghosts.push(rr.reduce(&g)?);
            }
        }
        LiftKind::QPochhammer { ax, ay } => {
            for k in 0..=n {
                // phi^(k-n) scales q-exponents by p^(k-n); with q = u^(p^depth)
                // every factor q^c becomes u^(c * p^(depth+k-n)), an integer
                // exponent since depth >= n + 1 > n - k.
                let scale = pow64(p, depth + k - n);
                let mut acc = ring.one();
                for i in 0..p {
                    let x_term = ring.u_pow(ax.checked_mul(scale).expect("overflow"));
                    let y_term = ring.u_pow(ay.checked_mul(scale).expect("overflow"));
                    let root = ring.u_pow(
                        i.checked_mul(pow64(p, n - 1))
                            .and_then(|v| v.checked_mul(scale))
                            .expect("overflow"),
                    );
                    acc = acc.mul(&x_term.sub(&root.mul(&y_term)));
                }
                ghosts.push(rr.reduce(&acc)?);
            }
        }
    }
    let lhs = crate::witt::WittVector::from_ghost(rr, &ghosts)?;

    // the Witt side: iso_n(x) then the Angeltveit norm
    let iso_base = match kind {
        LiftKind::Borger => base.frobenius(1),
        LiftKind::QPochhammer { ax, ay } => {
            // phi^(1-n)(q^ax - q^ay)
            let scale = pow64(p, depth + 1 - n);
            ring.u_pow(ax * scale).sub(&ring.u_pow(ay * scale))
        }
    };
    let rhs = iso_witt(ring, &iso_base, n as usize)?.norm()?;
    Ok(lhs.eq(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qcrys(p: u64) -> Prism {
        Prism::new(PrismKind::QCrystalline, p, 48, 24).unwrap()
    }

    #[test]
    fn prism_condition_all_models() {
        // q-crystalline p=2: delta([2]_q) = -q, and -q = 1 mod [2]_q
        let pr = qcrys(2);
        let d = pr.prism_condition().unwrap();
        assert!(d.eq(&pr.ring.q_pow(1).neg()));
        let shifted = d.sub(&pr.ring.one()).weierstrass_rem(&pr.orientation).unwrap();
        assert!(shifted.is_zero());
        // crystalline: delta(p) = 1 - p^(p-1)
        for p in [2u64, 3, 5] {
            let pr = Prism::new(PrismKind::Crystalline, p, 1, 12).unwrap();
            let d = pr.prism_condition().unwrap();
            assert!(d.eq(&pr.ring.from_i64(1 - (p as i64).pow((p - 1) as u32))));
        }
        // kisin p=2, E = z-2: delta(E) = 2z - 3
        let pr = Prism::new(PrismKind::Kisin, 2, 16, 12).unwrap();
        let d = pr.prism_condition().unwrap();
        assert!(d.eq(&pr.ring.from_coeffs(&[-3, 2])));
        // perfect q-models
        for p in [2u64, 3] {
            for depth in 1..=2 {
                let pr = Prism::new(PrismKind::PerfectQ { depth }, p, 96, 20).unwrap();
                pr.prism_condition().unwrap();
            }
        }
    }

    #[test]
    fn q_crystalline_delta_unit_congruent_to_one() {
        for p in [2u64, 3] {
            let pr = qcrys(p);
            let d = pr.prism_condition().unwrap();
            let rem = d.sub(&pr.ring.one()).weierstrass_rem(&pr.orientation).unwrap();
            assert!(rem.is_zero(), "delta([p]_q) = 1 mod [p]_q at p={p}");
        }
    }

    #[test]
    fn unit_table_examples() {
        let pr = qcrys(2);
        let t = extended_units(&pr, 3, 3).unwrap();
        // u_{1,1} = delta([p]_A) = -q
        assert!(t.get(1, 1).unwrap().eq(&pr.ring.q_pow(1).neg()));
        // crystalline u_{1,1} = 1 - p^(p-1)
        let pc = Prism::new(PrismKind::Crystalline, 3, 1, 12).unwrap();
        let tc = extended_units(&pc, 4, 4).unwrap();
        assert!(tc.get(1, 1).unwrap().eq(&pc.ring.from_i64(-8)));
        for i in 1..=4 {
            for j in i..=4 {
                assert!(verify_congruence(&pc, &tc, i, j).unwrap());
            }
        }
    }

    #[test]
    fn unit_table_perfect_q_p3() {
        let pr = Prism::new(PrismKind::PerfectQ { depth: 1 }, 3, 192, 20).unwrap();
        let t = extended_units(&pr, 4, 4).unwrap();
        for i in 1..=4 {
            for j in i..=4 {
                assert!(t.get(i, j).unwrap().is_unit());
                assert!(verify_congruence(&pr, &t, i, j).unwrap(), "({i},{j})");
            }
        }
    }

    #[test]
    fn sharper_congruence_holds() {
        for p in [2u64, 3] {
            let pr = qcrys(p);
            let t = extended_units(&pr, 1, 1).unwrap();
            assert!(sharper_base_congruence(&pr, &t).unwrap());
        }
    }

    #[test]
    fn corollary_congruences() {
        let pr = Prism::new(PrismKind::PerfectQ { depth: 1 }, 3, 160, 20).unwrap();
        assert!(corollary_congruence(&pr, 1, 3, 2).unwrap());
        for i in 1..=3 {
            for j in i..=3 {
                for r in i..=3 {
                    assert!(corollary_congruence(&pr, i, j, r).unwrap(), "({i},{j},{r})");
                }
            }
        }
        let p2 = Prism::new(PrismKind::PerfectQ { depth: 1 }, 2, 64, 20).unwrap();
        assert!(corollary_congruence(&p2, 2, 3, 2).unwrap());
    }

    #[test]
    fn borger_lift_basic() {
        let pr = qcrys(2);
        let t = extended_units(&pr, 3, 3).unwrap();
        // delta(x) = 0: the lift is phi(x)
        let x = pr.ring.q_pow(3);
        let lift = borger_norm_lift(&pr, &t, 2, &x).unwrap().to_elem().unwrap();
        assert!(lift.eq(&x.frobenius(1).truncated(lift.prec_n(), lift.prec_m())));
        // N(0) = 0 and N(1) = 1
        assert!(borger_norm_lift(&pr, &t, 1, &pr.ring.zero())
            .unwrap()
            .to_elem()
            .unwrap()
            .is_zero());
        assert!(borger_norm_lift(&pr, &t, 1, &pr.ring.one())
            .unwrap()
            .to_elem()
            .unwrap()
            .eq(&pr.ring.one()));
    }

    #[test]
    fn borger_lift_passes_norm_lift_check() {
        for p in [2u64, 3] {
            let prec_n = if p == 2 { 64 } else { 192 };
            let pr = Prism::new(PrismKind::QCrystalline, p, prec_n, 22).unwrap();
            let t = extended_units(&pr, 3, 3).unwrap();
            let mut seed = 1i64;
            for n in 1..=3u32 {
                for _ in 0..9 {
                    seed = seed.wrapping_mul(1103515245).wrapping_add(12345) % 1000;
                    let x = pr.ring.from_coeffs(&[seed.abs() + 1, seed.abs() % 7, 3, seed.abs() % 5]);
                    let lift = borger_norm_lift(&pr, &t, n, &x).unwrap();
                    assert!(norm_lift_check(&pr, n, &lift, &x).unwrap(), "p={p} n={n}");
                }
            }
            // negative control: phi(x) alone fails when delta(x) != 0
            let x = pr.ring.q_integer(2, 0).unwrap();
            let cand = LiftCandidate::plain(x.frobenius(1), &pr.ring);
            assert!(!norm_lift_check(&pr, 1, &cand, &x).unwrap());
        }
    }

    #[test]
    fn q_pochhammer_examples() {
        let pr = qcrys(2);
        // y = 0: x^p
        let x = pr.ring.q_pow(2).add(&pr.ring.one());
        let poch = q_pochhammer(&pr.ring, &x, &pr.ring.zero(), 1);
        assert!(poch.eq(&x.pow(2)));
        // p=2, n=1, x=q^2, y=1: (q^2 - 1)(q^2 - q)
        let x = pr.ring.q_pow(2);
        let y = pr.ring.one();
        let poch = q_pochhammer(&pr.ring, &x, &y, 1);
        let expect = x.sub(&y).mul(&x.sub(&pr.ring.q_pow(1)));
        assert!(poch.eq(&expect));
    }

    #[test]
    fn q_pochhammer_is_norm_lift_on_rank_one() {
        // the q-Pochhammer statement is about prisms oriented by
        // [p]_{q^(1/p)}: use the perfect q-model
        // p=3, n=2, x=q, y=1 among others
        for p in [2u64, 3] {
            let prec_n = if p == 2 { 64 } else { 192 };
            let pr = Prism::new(PrismKind::PerfectQ { depth: 1 }, p, prec_n, 22).unwrap();
            for n in 1..=2u32 {
                for (a, b) in [(1u64, 0u64), (2, 1), (3, 0)] {
                    let x = pr.ring.q_pow(a);
                    let y = pr.ring.q_pow(b);
                    let poch = LiftCandidate::plain(q_pochhammer(&pr.ring, &x, &y, n), &pr.ring);
                    assert!(
                        norm_lift_check(&pr, n, &poch, &x.sub(&y)).unwrap(),
                        "p={p} n={n} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn pochhammer_vs_borger_agree_only_at_n1_p2() {
        // at n=1, p=2 the congruence phi([p]_A) = u p mod [p]_A admits the
        // unit u = 1, and with that normalization the Borger formula
        // phi(z) - phi([p]_A) delta(z) agrees with the q-Pochhammer symbol
        // pointwise on rank-one differences
        let pr = Prism::new(PrismKind::PerfectQ { depth: 1 }, 2, 64, 22).unwrap();
        let two = pr.ring.from_i64(2);
        assert!(pr
            .xi(1)
            .sub(&two)
            .is_divisible_by(&pr.orientation)
            .unwrap());
        for (a, b) in [(1u64, 0u64), (2, 0), (2, 1), (3, 1)] {
            let x = pr.ring.q_pow(a);
            let y = pr.ring.q_pow(b);
            let z = x.sub(&y);
            let poch = q_pochhammer(&pr.ring, &x, &y, 1);
            let borg = z.frobenius(1).sub(&pr.xi(1).mul(&z.delta().unwrap()));
            assert!(poch.eq(&borg.truncated(poch.prec_n(), poch.prec_m())), "a={a} b={b}");
        }
        // at p=3 they both pass the check but need not agree as functions
        let pr3 = Prism::new(PrismKind::PerfectQ { depth: 1 }, 3, 192, 20).unwrap();
        let t3 = extended_units(&pr3, 2, 2).unwrap();
        let x = pr3.ring.q_pow(2);
        let y = pr3.ring.one();
        let z = x.sub(&y);
        let poch = q_pochhammer(&pr3.ring, &x, &y, 1);
        let borg = borger_norm_lift(&pr3, &t3, 1, &z).unwrap();
        assert!(norm_lift_check(&pr3, 1, &LiftCandidate::plain(poch.clone(), &pr3.ring), &z).unwrap());
        assert!(norm_lift_check(&pr3, 1, &borg, &z).unwrap());
        let borg_elem = borg.to_elem().unwrap();
        assert!(!poch.eq(&borg_elem.truncated(poch.prec_n(), poch.prec_m())));
    }

    #[test]
    fn near_multiplicativity() {
        for p in [2u64, 3] {
            let prec_n = if p == 2 { 64 } else { 192 };
            let pr = Prism::new(PrismKind::QCrystalline, p, prec_n, 22).unwrap();
            let t = extended_units(&pr, 3, 3).unwrap();
            for n in 1..=2u32 {
                for s in 0..5i64 {
                    let x = pr.ring.from_coeffs(&[2 + s, 1, s % 3]);
                    let y = pr.ring.from_coeffs(&[1, s % 2, 0, 1 + s]);
                    assert!(
                        near_multiplicativity_check(&pr, &t, n, &x, &y).unwrap(),
                        "p={p} n={n} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn q_legendre_small_cases() {
        // n < p: both products empty, [n]_q! a unit
        assert!(q_legendre_check(3, 2, 48, 24).unwrap());
        assert!(q_legendre_check(5, 4, 48, 24).unwrap());
        // p=2, n=8: exponents (4,2,1)
        assert!(q_legendre_check(2, 8, 48, 24).unwrap());
        // p=3, n=12
        assert!(q_legendre_check(3, 12, 48, 24).unwrap());
    }

    #[test]
    fn observation_q_legendre_dictionary() {
        // [pn]_A! = [p]_A^n phi([n]_A!) exactly, both sides as ring products
        for p in [2u64, 3] {
            let ring = Ring::q_local(p, 1, 48, 20).unwrap();
            for n in 1..=20u64 {
                let lhs = ring.qa_factorial(p * n);
                let rhs = ring.orientation().pow(n).mul(&ring.qa_factorial(n).frobenius(1));
                assert!(lhs.eq(&rhs), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn warning_identity() {
        for (a, b) in [(1u64, 0u64), (2, 1), (3, 2), (5, 1), (4, 4)] {
            assert!(warning_identity_check(a, b).unwrap(), "(a,b)=({a},{b})");
        }
    }

    /// The extended unit table rebuilt over exact Z[q] (no truncation):
    /// u_{1,1} = delta_p([p]_q), the same diagonal/off-diagonal recursion,
    /// and every congruence verified by exact polynomial division.
    #[test]
    fn extended_units_exact_over_zq() {
        use crate::rings::exact::ExactQPoly;
        for p in [2u64, 3] {
            let jmax = 3u32;
            let pq = ExactQPoly::q_integer(p);
            let phi = |x: &ExactQPoly, k: u32| x.psi(p.pow(k));
            let bracket_pk = |k: u32| {
                let mut acc = ExactQPoly::one();
                for l in 0..k {
                    acc = acc.mul(&phi(&pq, l));
                }
                acc
            };
            let p_const = ExactQPoly::constant(p as i64);
            let u11 = pq.delta_m(p).unwrap();
            let mut diag = vec![u11.clone()];
            for i in 1..jmax {
                let prev = diag.last().unwrap();
                let entry = prev
                    .pow(p - 1)
                    .mul(&p_const.pow(p - 2))
                    .mul(&phi(&pq, i))
                    .add(&phi(&u11, i));
                diag.push(entry);
            }
            for i in 1..=jmax {
                let mut u = diag[(i - 1) as usize].clone();
                for j in i..=jmax {
                    // phi^j([p]_q) - u_{i,j} p is exactly divisible by [p^i]_q
                    let diff = phi(&pq, j).sub(&u.mul(&p_const));
                    assert!(
                        diff.rem_monic(&bracket_pk(i)).is_zero(),
                        "exact congruence p={p} ({i},{j})"
                    );
                    u = u.pow(p).mul(&p_const.pow(p - 1)).add(&phi(&u11, j));
                }
            }
            // corollary with its constructive unit, exactly:
            // phi^r([p^(j-i)]_q) - (prod_l u_{i,r+l}) p^(j-i) in ([p^i]_q)
            let table_u = |i: u32, j: u32| -> ExactQPoly {
                let mut u = diag[(i - 1) as usize].clone();
                for l in i..j {
                    u = u.pow(p).mul(&p_const.pow(p - 1)).add(&phi(&u11, l));
                }
                u
            };
            for i in 1..=2u32 {
                for j in i..=3 {
                    for r in i..=3 {
                        let mut lhs = ExactQPoly::one();
                        let mut unit = ExactQPoly::one();
                        for l in 0..(j - i) {
                            lhs = lhs.mul(&phi(&pq, r + l));
                            unit = unit.mul(&table_u(i, r + l));
                        }
                        let diff = lhs.sub(&unit.mul(&p_const.pow((j - i) as u64)));
                        assert!(
                            diff.rem_monic(&bracket_pk(i)).is_zero(),
                            "exact corollary p={p} ({i},{j},{r})"
                        );
                    }
                }
            }
        }
    }

    /// The q-Pochhammer norm congruences verified in exact Z[v], v = q^(1/p),
    /// with zero truncation: (x, -y; q^(p^(n-1)))_p = phi(x-y) mod phi^n([p]_v)
    /// and = (x-y)^p mod [p^n]_v for rank-one x, y.
    #[test]
    fn pochhammer_congruences_exact_over_zv() {
        use crate::rings::exact::ExactQPoly;
        for p in [2u64, 3, 5] {
            let pv = ExactQPoly::q_integer(p); // [p]_v in the variable v
            for n in 1..=3u32 {
                let bracket_pn: ExactQPoly = (0..n)
                    .map(|l| pv.psi(p.pow(l)))
                    .fold(ExactQPoly::one(), |acc, f| acc.mul(&f));
                let xin = pv.psi(p.pow(n));
                for (a, b) in [(1u64, 0u64), (2, 1), (3, 0), (4, 2)] {
                    // q^a = v^(p a); q^(i p^(n-1)) = v^(i p^n)
                    let x = ExactQPoly::q_pow((p * a) as usize);
                    let y = ExactQPoly::q_pow((p * b) as usize);
                    let z = x.sub(&y);
                    let mut poch = ExactQPoly::one();
                    for i in 0..p {
                        let root = ExactQPoly::q_pow((i * p.pow(n)) as usize);
                        poch = poch.mul(&x.sub(&root.mul(&y)));
                    }
                    let phi_z = z.psi(p);
                    assert!(
                        poch.sub(&phi_z).rem_monic(&xin).is_zero(),
                        "frobenius congruence p={p} n={n} a={a} b={b}"
                    );
                    assert!(
                        poch.sub(&z.pow(p)).rem_monic(&bracket_pn).is_zero(),
                        "power congruence p={p} n={n} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn norm_lift_diagram_borger() {
        for p in [2u64, 3] {
            for n in 1..=2u32 {
                let depth = n + 1;
                let (prec_n, prec_m) = if p == 2 { (96, 12) } else { (160, 8) };
                let pr = Prism::new(PrismKind::PerfectQ { depth }, p, prec_n, prec_m).unwrap();
                for s in 0..3i64 {
                    let base = pr.ring.from_coeffs(&[1 + s, s % 3, 2, 0, s % 2]);
                    assert!(
                        norm_lift_diagram_check(&pr, n, LiftKind::Borger, &base).unwrap(),
                        "p={p} n={n} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn norm_lift_diagram_pochhammer() {
        for p in [2u64, 3] {
            for n in 1..=2u32 {
                let depth = n + 1;
                let (prec_n, prec_m) = if p == 2 { (96, 12) } else { (160, 8) };
                let pr = Prism::new(PrismKind::PerfectQ { depth }, p, prec_n, prec_m).unwrap();
                let dummy = pr.ring.zero();
                for (ax, ay) in [(1u64, 0u64), (2, 1)] {
                    assert!(
                        norm_lift_diagram_check(
                            &pr,
                            n,
                            LiftKind::QPochhammer { ax, ay },
                            &dummy
                        )
                        .unwrap(),
                        "p={p} n={n} ax={ax} ay={ay}"
                    );
                }
            }
        }
    }
}
