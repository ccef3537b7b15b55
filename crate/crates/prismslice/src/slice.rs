//! The regular slice filtration of THH over a perfectoid base: slice covers
//! and slices as suspension descriptors, closed-form slice homotopy Mackey
//! functors with an independent exact-sequence oracle, filtration
//! generators, Z-graded TF/TR^n, and the E2/Einfinity chart pages.

use thiserror::Error;

use crate::chart::ChartPage;
use crate::combinatorics::{ell, slice_f, slice_h, slice_indices, slice_r, vp, CombinatoricsError};
use crate::gold::{canonical_generator, reduce_ratio, tf_mackey_level, AtomProduct, GoldError, GoldMonomial};
use crate::mackey::{realize, CyclicAModule, MackeyDescriptor};
use crate::reps::{bracket_rep, brace_rep, PTypicalRep};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SliceError {
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error(transparent)]
    Gold(#[from] GoldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    Torsionfree,
    Fp,
}

impl RingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RingKind::Torsionfree => "torsionfree",
            RingKind::Fp => "fp",
        }
    }
}

/// `[pn]_A` = `[p^(v_p(n)+1)]_A` as atoms.
fn bracket_pn_atoms(p: u64, n: u64) -> AtomProduct {
    AtomProduct::bracket_pk(vp(p, n).unwrap() as u32 + 1)
}

/// The 2n-slice in its two suspension forms: Sigma^{{n}_lambda} tr_{C_n} W
/// and `Sigma^{[n]_lambda} W/[pn]_A`, together with the cover representation.
#[derive(Clone, Debug)]
pub struct SliceDescriptor {
    pub n: u64,
    pub cover_rep: PTypicalRep,
    pub slice_form_a: (PTypicalRep, MackeyDescriptor),
    pub slice_form_b: (PTypicalRep, MackeyDescriptor),
}

pub fn slice_descriptor(p: u64, n: u64) -> SliceDescriptor {
    let cover_rep = bracket_rep(p, n);
    if n == 0 {
        return SliceDescriptor {
            n,
            cover_rep,
            slice_form_a: (PTypicalRep::zero(), MackeyDescriptor::W),
            slice_form_b: (PTypicalRep::zero(), MackeyDescriptor::W),
        };
    }
    let v = vp(p, n).unwrap() as u32;
    SliceDescriptor {
        n,
        cover_rep: cover_rep.clone(),
        slice_form_a: (brace_rep(p, n), MackeyDescriptor::TrW(v)),
        slice_form_b: (
            cover_rep,
            MackeyDescriptor::quotient(MackeyDescriptor::W, bracket_pn_atoms(p, n)),
        ),
    }
}

/// Z-graded homotopy descriptor: `TF_* = A[sigma]` or `TR^n_* = (A/[p^n]_A)[sigma]`,
/// sigma in degree 2, zero in odd and negative degrees.
#[derive(Clone, Copy, Debug)]
pub struct ZGraded {
    /// None = TF (free over A); Some(n) = TR^n.
    pub torsion_len: Option<u32>,
}

pub fn z_graded_tf() -> ZGraded {
    ZGraded { torsion_len: None }
}

pub fn z_graded_tr(n: u32) -> ZGraded {
    ZGraded {
        torsion_len: Some(n),
    }
}

impl ZGraded {
    pub fn at_degree(&self, d: i64) -> CyclicAModule {
        if d < 0 || d % 2 != 0 {
            return CyclicAModule::zero();
        }
        match self.torsion_len {
            None => CyclicAModule::free(),
            Some(n) => CyclicAModule::by(AtomProduct::bracket_pk(n)),
        }
    }
}

/// The TF group in degree 2i - alpha: its canonical generator and its
/// Mackey functor (W when d_0(alpha) <= i, Phi^{C_{p^(r-1)}} W when
/// d_r <= i < d_(r-1)).
pub fn tf_group(i: u64, alpha: &PTypicalRep) -> (GoldMonomial, MackeyDescriptor) {
    let gen = canonical_generator(i, alpha);
    let desc = match tf_mackey_level(i, alpha) {
        None => MackeyDescriptor::W,
        Some(r) => MackeyDescriptor::PhiW(r),
    };
    (gen, desc)
}

/// TR^(n+1) in degrees lambda_j + star for j < n: the transfer-generated
/// subfunctor at star = -2, the full Witt functor in even nonnegative
/// degrees, zero elsewhere.
pub fn tr_pos_group(n: u32, j: u32, star: i64) -> MackeyDescriptor {
    assert!(j < n, "tr_pos_group needs j < n");
    if star == -2 {
        MackeyDescriptor::TrW(j)
    } else if star >= 0 && star % 2 == 0 {
        MackeyDescriptor::W
    } else {
        MackeyDescriptor::Zero
    }
}

/// Even slice homotopy: pi_{2i} of the 2n-slice.
pub fn slice_homotopy_even(p: u64, n: u64, i: u64, _kind: RingKind) -> MackeyDescriptor {
    if i > n || (i == 0 && n > 0) {
        return MackeyDescriptor::Zero;
    }
    if i == 0 && n == 0 {
        return MackeyDescriptor::W;
    }
    if i == n {
        return MackeyDescriptor::ConstR;
    }
    let s = slice_indices(p, n, i).expect("0 < i < n");
    MackeyDescriptor::quotient(
        MackeyDescriptor::PhiW(s.m as u32),
        AtomProduct::bracket_pk(s.h as u32 + 1),
    )
}

/// Odd slice homotopy: pi_{2i+1} of the 2n-slice; vanishes for torsionfree
/// base rings, and outside 0 < i < n.
pub fn slice_homotopy_odd(p: u64, n: u64, i: u64, kind: RingKind) -> MackeyDescriptor {
    if kind == RingKind::Torsionfree || i == 0 || i >= n {
        return MackeyDescriptor::Zero;
    }
    let s = slice_indices(p, n, i).expect("0 < i < n");
    let phi = if s.power_case { s.m + 1 } else { s.m } as u32;
    MackeyDescriptor::TrPhi {
        tr: (s.m + s.h + 1) as u32,
        phi,
    }
}

/// Lambda-graded slice homotopy: `pi_{[i]_lambda}` of the 2n-slice.
///
/// The geometric level for 0 < i < n is ell(p, i, n) - 1, i.e. the
/// max-of-valuations form max{v_p(m) : i <= m < n}: this is the level of
/// the TF group in degree `[i]_lambda` - `[n]_lambda` that the four-term
/// sequence quotients, as the exact-sequence oracle confirms levelwise.
pub fn slice_homotopy_lambda(p: u64, n: u64, i: u64) -> MackeyDescriptor {
    if i > n || (i == 0 && n > 0) {
        return MackeyDescriptor::Zero;
    }
    if i == 0 && n == 0 {
        return MackeyDescriptor::W;
    }
    if i == n {
        return MackeyDescriptor::quotient(MackeyDescriptor::W, bracket_pn_atoms(p, n));
    }
    let l = ell(p, i, n).expect("0 < i < n") as u32 - 1;
    MackeyDescriptor::quotient(MackeyDescriptor::PhiW(l), bracket_pn_atoms(p, n))
}

/// The lambda-graded analogue of the slice oracle: computes
///   `pi_{[i]_lambda}` cover(2n+2) -> `pi_{[i]_lambda}` cover(2n)
///     -> `pi_{[i]_lambda}` (2n-slice) -> 0
/// from the TF groups in degrees `[i]_lambda` - `[n+1]_lambda` and
/// `[i]_lambda` - `[n]_lambda` and returns the levelwise cokernel valuations
/// in the crystalline model.
pub fn oracle_slice_homotopy_lambda(
    p: u64,
    n: u64,
    i: u64,
    kmax: u32,
) -> Result<SliceOracle, SliceError> {
    assert!(i >= 1 && i <= n, "oracle needs 0 < i <= n");
    // [i]_lambda - [m]_lambda = -({m-1}_lambda - {i-1}_lambda) for m > i
    let diff_rep = |m: u64| brace_rep(p, m - 1).sub(&brace_rep(p, i - 1));
    let alpha_src = diff_rep(n + 1);
    let alpha_tgt = diff_rep(n);
    let (g_src, src_desc) = tf_group(0, &alpha_src);
    let (g_tgt, tgt_desc) = tf_group(0, &alpha_tgt);
    let v = vp(p, n)? as u32;
    let lhs = GoldMonomial::sigma(1).mul(&g_src);
    let rhs = GoldMonomial::u_lambda(v).mul(&g_tgt);
    let multiplier = reduce_ratio(&lhs, &rhs)?;
    let vmult = multiplier.crystalline_valuation() as u64;
    let mut even_levels = Vec::with_capacity(kmax as usize + 1);
    for k in 0..=kmax {
        let a_src = realize(&src_desc, k)
            .crystalline_valuation()
            .expect("finite level");
        let a_tgt = realize(&tgt_desc, k)
            .crystalline_valuation()
            .expect("finite level");
        assert!(a_src + vmult >= a_tgt, "map ill-defined at level {k}");
        even_levels.push(vmult.min(a_tgt));
    }
    Ok(SliceOracle {
        source: src_desc,
        target: tgt_desc,
        multiplier,
        even_levels,
        odd_levels: Vec::new(),
    })
}

/// Result of an exact-sequence oracle run: the source/target TF Mackey
/// functors, the boundary multiplier, and levelwise answers.
#[derive(Clone, Debug)]
pub struct SliceOracle {
    pub source: MackeyDescriptor,
    pub target: MackeyDescriptor,
    pub multiplier: AtomProduct,
    /// crystalline valuations of the even slice at levels 0..=kmax
    pub even_levels: Vec<u64>,
    /// crystalline valuations of the odd slice at levels 0..=kmax
    pub odd_levels: Vec<u64>,
}

/// The exact-sequence oracle for the slice homotopy: computes
///   0 -> pi_{2i+1}(2n-slice) -> pi_{2i}cover(2n+2) -> pi_{2i}cover(2n)
///     -> pi_{2i}(2n-slice) -> 0
/// directly from the TF generators in degrees 2(i-1) - {n}_lambda and
/// 2(i-1) - {n-1}_lambda and the sigma u^(-1) multiplier, then takes
/// levelwise kernels and cokernels in the crystalline model.
pub fn oracle_slice_homotopy(p: u64, n: u64, i: u64, kmax: u32) -> Result<SliceOracle, SliceError> {
    assert!(i >= 1 && i <= n, "oracle needs 0 < i <= n");
    let alpha_src = brace_rep(p, n);
    let alpha_tgt = brace_rep(p, n - 1);
    let (g_src, src_desc) = tf_group(i - 1, &alpha_src);
    let (g_tgt, tgt_desc) = tf_group(i - 1, &alpha_tgt);
    // the boundary map is sigma * u_{lambda^n}^(-1) with lambda^n p-typified
    let v = vp(p, n)? as u32;
    let lhs = GoldMonomial::sigma(1).mul(&g_src);
    let rhs = GoldMonomial::u_lambda(v).mul(&g_tgt);
    let multiplier = reduce_ratio(&lhs, &rhs)?;
    let vmult = multiplier.crystalline_valuation() as u64;

    let mut even_levels = Vec::with_capacity(kmax as usize + 1);
    let mut odd_levels = Vec::with_capacity(kmax as usize + 1);
    for k in 0..=kmax {
        let a_src = realize(&src_desc, k)
            .crystalline_valuation()
            .expect("finite level");
        let a_tgt = realize(&tgt_desc, k)
            .crystalline_valuation()
            .expect("finite level");
        // well-definedness of (mult): Z/p^a_src -> Z/p^a_tgt
        assert!(
            a_src + vmult >= a_tgt,
            "boundary map ill-defined at level {k}"
        );
        even_levels.push(vmult.min(a_tgt));
        odd_levels.push(a_src.min(a_src + vmult - a_tgt));
    }
    Ok(SliceOracle {
        source: src_desc,
        target: tgt_desc,
        multiplier,
        even_levels,
        odd_levels,
    })
}

/// Generator of the slice filtration on `pi_{[i]_lambda}` TF:
/// `[p(i+j-1)]_A!` / `[p(i-1)]_A!` as atoms; the unit atom for j <= 0.
pub fn filtration_gen_lambda(p: u64, i: u64, j: i64) -> AtomProduct {
    assert!(i >= 1);
    if j <= 0 {
        return AtomProduct::one();
    }
    let num = AtomProduct::qa_factorial(p, p * (i + j as u64 - 1));
    let den = AtomProduct::qa_factorial(p, p * (i - 1));
    let out = num.div(&den);
    assert!(out.is_nonnegative(), "factorial atoms must divide");
    out
}

/// Generator of the slice filtration on pi_{2i} TF:
/// `[p(i+j-1)]_A! / ([p^r]_A^(i-1) phi^r([floor((i+j-1)/p^(r-1))]_A!))`,
/// r = ceil(log_p((i+j)/i)); the unit atom for j <= 0.
pub fn filtration_gen_even(p: u64, i: u64, j: i64) -> AtomProduct {
    assert!(i >= 1);
    if j <= 0 {
        return AtomProduct::one();
    }
    let j = j as u64;
    let r = slice_r(p, i, j) as u32;
    let num = AtomProduct::qa_factorial(p, p * (i + j - 1));
    let mut den = AtomProduct::one();
    for l in 0..r {
        den.push_xi(l, i as i64 - 1);
    }
    // phi^r shifts every atom index up by r
    let inner = AtomProduct::qa_factorial(p, (i + j - 1) / p.pow(r - 1));
    for (l, e) in inner.xi_exps() {
        den.push_xi(l + r, e);
    }
    let out = num.div(&den);
    assert!(out.is_nonnegative(), "factorial atoms must divide");
    out
}

/// The E2 page of the RSSS in the window [0, max_col] x [0, max_row].
pub fn e2_page(p: u64, kind: RingKind, max_col: i64, max_row: i64) -> ChartPage {
    let mut page = ChartPage::new(p, kind.as_str(), "e2");
    let n_hi = ((max_col + max_row) / 2 + 1) as u64;
    for n in 0..=n_hi {
        for i in 0..=n {
            let (x, y) = (2 * i as i64, 2 * (n - i) as i64);
            if x <= max_col && y <= max_row {
                page.push(x, y, &slice_homotopy_even(p, n, i, kind));
            }
            if kind == RingKind::Fp {
                let (x, y) = (2 * i as i64 + 1, 2 * (n - i) as i64 - 1);
                if x <= max_col && (0..=max_row).contains(&y) {
                    page.push(x, y, &slice_homotopy_odd(p, n, i, kind));
                }
            }
        }
    }
    page.sort_entries();
    page
}

/// The Einfinity page for a perfect F_p-algebra: the entry over
/// pi_{2i}(2n-slice) is Phi^{C_{p^(f+1)}} W / p^(h+1) with
/// f = sum_{i<=m<n} (h(m,i)+1).
pub fn einf_page(p: u64, max_col: i64, max_row: i64) -> ChartPage {
    let mut page = ChartPage::new(p, RingKind::Fp.as_str(), "einf");
    let n_hi = ((max_col + max_row) / 2 + 1) as u64;
    for n in 0..=n_hi {
        for i in 0..=n {
            let (x, y) = (2 * i as i64, 2 * (n - i) as i64);
            if x > max_col || y > max_row {
                continue;
            }
            if n == 0 {
                page.push(x, y, &MackeyDescriptor::W);
                continue;
            }
            if i == 0 {
                continue;
            }
            let f = slice_f(p, n, i).expect("0 < i <= n") as u32;
            let h = slice_h(p, n, i).expect("0 < i <= n");
            let desc = MackeyDescriptor::quotient(
                MackeyDescriptor::PhiW(f + 1),
                AtomProduct::p_pow(h as i64 + 1),
            );
            page.push(x, y, &desc);
        }
    }
    page.sort_entries();
    page
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    #[test]
    fn z_graded_groups() {
        let tf = z_graded_tf();
        assert_eq!(tf.at_degree(0), CyclicAModule::free());
        assert_eq!(tf.at_degree(-2), CyclicAModule::zero());
        assert_eq!(tf.at_degree(3), CyclicAModule::zero());
        let tr2 = z_graded_tr(2);
        for i in 0..5 {
            assert_eq!(
                tr2.at_degree(2 * i),
                CyclicAModule::by(AtomProduct::bracket_pk(2))
            );
        }
        assert_eq!(tr2.at_degree(5), CyclicAModule::zero());
    }

    #[test]
    fn tf_group_examples() {
        // (i=2, alpha=0) -> (sigma^2, W)
        let (g, d) = tf_group(2, &PTypicalRep::zero());
        assert_eq!(g.sigma_exp, 2);
        assert_eq!(d, MackeyDescriptor::W);
        // (i=2, alpha=2l0+l1) -> (a_{l0} u_{l0} u_{l1}, Phi^e W)
        let mut alpha = PTypicalRep::zero();
        alpha.add_lambda(0, 2);
        alpha.add_lambda(1, 1);
        let (g, d) = tf_group(2, &alpha);
        assert_eq!((g.a_exp(0), g.u_exp(0), g.u_exp(1)), (1, 1, 1));
        assert_eq!(d, MackeyDescriptor::PhiW(0));
        // (i=1, same alpha): a_{l0}^2 u_{l1} with Phi^e W
        let (g, d) = tf_group(1, &alpha);
        assert_eq!((g.a_exp(0), g.u_exp(1)), (2, 1));
        assert_eq!(d, MackeyDescriptor::PhiW(0));
    }

    #[test]
    fn tr_pos_group_cases() {
        assert_eq!(tr_pos_group(3, 1, -2), MackeyDescriptor::TrW(1));
        assert_eq!(tr_pos_group(3, 1, 0), MackeyDescriptor::W);
        assert_eq!(tr_pos_group(3, 1, 4), MackeyDescriptor::W);
        assert_eq!(tr_pos_group(3, 1, -1), MackeyDescriptor::Zero);
        assert_eq!(tr_pos_group(3, 1, -4), MackeyDescriptor::Zero);
    }

    #[test]
    fn slice_homotopy_closed_forms() {
        // (p=3, n=4, i=1) -> Phi^{C_p} W / [p]_A
        let d = slice_homotopy_even(3, 4, 1, RingKind::Fp);
        assert_eq!(
            d,
            MackeyDescriptor::quotient(MackeyDescriptor::PhiW(1), AtomProduct::bracket_pk(1))
        );
        // diagonal: constR
        assert_eq!(
            slice_homotopy_even(3, 5, 5, RingKind::Torsionfree),
            MackeyDescriptor::ConstR
        );
        // (p=3, n=6, i=2) -> Phi^e W / [p^2]_A
        assert_eq!(
            slice_homotopy_even(3, 6, 2, RingKind::Fp),
            MackeyDescriptor::quotient(MackeyDescriptor::PhiW(0), AtomProduct::bracket_pk(2))
        );
        // odd: torsionfree always zero
        assert_eq!(
            slice_homotopy_odd(2, 4, 1, RingKind::Torsionfree),
            MackeyDescriptor::Zero
        );
        // (p=2, n=4, i=1): power case, m=1, h=2 -> trPhi(4, 2)
        assert_eq!(
            slice_homotopy_odd(2, 4, 1, RingKind::Fp),
            MackeyDescriptor::TrPhi { tr: 4, phi: 2 }
        );
    }

    #[test]
    fn slice_homotopy_lambda_forms() {
        assert_eq!(slice_homotopy_lambda(2, 0, 0), MackeyDescriptor::W);
        // 0 < i = n: W/[pn]_A
        assert_eq!(
            slice_homotopy_lambda(3, 3, 3),
            MackeyDescriptor::quotient(MackeyDescriptor::W, AtomProduct::bracket_pk(2))
        );
        // (p=3, n=3, i=2): geometric level max{v_3(2)} = 0 = ell - 1
        assert_eq!(
            slice_homotopy_lambda(3, 3, 2),
            MackeyDescriptor::quotient(MackeyDescriptor::PhiW(0), AtomProduct::bracket_pk(2))
        );
    }

    #[test]
    fn lambda_oracle_matches_closed_form() {
        for p in [2u64, 3] {
            for n in 1..=30u64 {
                for i in 1..=n {
                    let o = oracle_slice_homotopy_lambda(p, n, i, 6).unwrap();
                    // the boundary multiplier is [pn]_A up to unit
                    assert_eq!(
                        o.multiplier.crystalline_valuation() as u64,
                        vp(p, n).unwrap() + 1,
                        "mult p={p} n={n} i={i}"
                    );
                    let closed = slice_homotopy_lambda(p, n, i);
                    for k in 0..=6u32 {
                        let want = realize(&closed, k).crystalline_valuation().unwrap();
                        assert_eq!(
                            o.even_levels[k as usize], want,
                            "p={p} n={n} i={i} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn odd_slice_levelwise_case_formulas() {
        // crystalline levels of the odd slice: 0 for k <= m, then Z/p^(k-m)
        // until the transfer truncation h+1 kicks in (shifted by one more
        // level in the power case)
        for p in [2u64, 3] {
            for n in 2..=20u64 {
                for i in 1..n {
                    let s = slice_indices(p, n, i).unwrap();
                    let desc = slice_homotopy_odd(p, n, i, RingKind::Fp);
                    let shift = if s.power_case { s.m + 1 } else { s.m };
                    let cap = if s.power_case { s.h } else { s.h + 1 };
                    for k in 0..=8u64 {
                        let want = if k <= shift {
                            0
                        } else {
                            (k - shift).min(cap)
                        };
                        assert_eq!(
                            realize(&desc, k as u32).crystalline_valuation(),
                            Some(want),
                            "p={p} n={n} i={i} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_multiplier_valuations_match_paper_examples() {
        // (3,4,1), (3,3,2), (3,6,2) have multipliers [p], [p], [p^2]
        let o = oracle_slice_homotopy(3, 4, 1, 6).unwrap();
        assert_eq!(o.multiplier.crystalline_valuation(), 1);
        let o = oracle_slice_homotopy(3, 3, 2, 6).unwrap();
        assert_eq!(o.multiplier.crystalline_valuation(), 1);
        let o = oracle_slice_homotopy(3, 6, 2, 6).unwrap();
        assert_eq!(o.multiplier.crystalline_valuation(), 2);
    }

    #[test]
    fn oracle_matches_closed_forms() {
        for p in [2u64, 3] {
            for n in 1..=30u64 {
                for i in 1..=n {
                    let o = oracle_slice_homotopy(p, n, i, 6).unwrap();
                    let even = slice_homotopy_even(p, n, i, RingKind::Fp);
                    let odd = slice_homotopy_odd(p, n, i, RingKind::Fp);
                    for k in 0..=6u32 {
                        let want_even = realize(&even, k).crystalline_valuation().unwrap();
                        assert_eq!(
                            o.even_levels[k as usize], want_even,
                            "even p={p} n={n} i={i} k={k}"
                        );
                        let want_odd = realize(&odd, k).crystalline_valuation().unwrap();
                        assert_eq!(
                            o.odd_levels[k as usize], want_odd,
                            "odd p={p} n={n} i={i} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_multiplier_valuation_is_h_plus_one() {
        for p in [2u64, 3] {
            for n in 1..=25u64 {
                for i in 1..=n {
                    let o = oracle_slice_homotopy(p, n, i, 0).unwrap();
                    let h = slice_h(p, n, i).unwrap();
                    assert_eq!(
                        o.multiplier.crystalline_valuation() as u64,
                        h + 1,
                        "p={p} n={n} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn slice_descriptor_suspension_relation() {
        // the two slice forms' suspensions differ by lambda^n - lambda_inf
        for p in [2u64, 3] {
            for n in 1..=20u64 {
                let d = slice_descriptor(p, n);
                let diff = d.slice_form_b.0.sub(&d.slice_form_a.0);
                let mut want = PTypicalRep::lambda_inf();
                want.add_lambda(vp(p, n).unwrap() as u32, -1);
                // [n]_lambda - {n}_lambda = lambda_inf - lambda^n (p-typified)
                assert_eq!(diff, want, "p={p} n={n}");
                assert_eq!(d.cover_rep, bracket_rep(p, n));
            }
        }
    }

    #[test]
    fn filtration_generators() {
        // i=1: [pj]_A! for the lambda grading
        for p in [2u64, 3] {
            for j in 1..=10i64 {
                assert_eq!(
                    filtration_gen_lambda(p, 1, j),
                    AtomProduct::qa_factorial(p, p * j as u64)
                );
                assert_eq!(filtration_gen_even(p, 1, j), filtration_gen_lambda(p, 1, j));
            }
        }
        assert!(filtration_gen_lambda(2, 3, 0).is_one());
        assert!(filtration_gen_even(2, 3, -1).is_one());
        // (2,1,2): xi_0^2 xi_1 = [4]_A!
        let g = filtration_gen_even(2, 1, 2);
        assert_eq!((g.xi_exp(0), g.xi_exp(1)), (2, 1));
    }

    #[test]
    fn filtration_generators_form_a_chain() {
        // F^(2(j+1)) sits inside F^(2j): the later generator is an atomwise
        // multiple of the earlier one, in both gradings
        for p in [2u64, 3] {
            for i in 1..=8u64 {
                for j in 0..=8i64 {
                    for (a, b) in [
                        (filtration_gen_lambda(p, i, j), filtration_gen_lambda(p, i, j + 1)),
                        (filtration_gen_even(p, i, j), filtration_gen_even(p, i, j + 1)),
                    ] {
                        assert!(b.div(&a).is_nonnegative(), "p={p} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn filtration_valuation_cross_check() {
        for p in [2u64, 3] {
            for i in 1..=10u64 {
                for j in 1..=10i64 {
                    let val = filtration_gen_even(p, i, j).crystalline_valuation() as u64;
                    assert_eq!(val, slice_f(p, i + j as u64, i).unwrap(), "p={p} i={i} j={j}");
                    let prev = filtration_gen_even(p, i, j - 1).crystalline_valuation() as u64;
                    assert_eq!(
                        val - prev,
                        slice_h(p, i + j as u64 - 1, i).unwrap() + 1,
                        "p={p} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn filtration_gen_i1_associate_to_q_factorial_in_ring() {
        // [pj]_A! is an associate of [p]_A^j [j]_q! in the depth-1 model.
        // The witness unit is assembled factorwise: [m]_q = phi([m]_{q^(1/p)})
        // and [m]_{q^(1/p)} = unit * [p^(v_p(m))]_A by a small exact division,
        // so [p]_A^j [j]_q! = (prod of units) * (atoms of [pj]_A!).
        for p in [2u64, 3] {
            let ring = Ring::q_local(p, 1, 160, 20).unwrap();
            for j in 1..=10u64 {
                let gen = filtration_gen_lambda(p, 1, j as i64).to_ring(&ring).unwrap();
                let mut q_fact = ring.one();
                let mut unit = ring.one();
                for m in 1..=j {
                    q_fact = q_fact.mul(&ring.q_integer(m, 0).unwrap());
                    let w = ring
                        .q_integer(m, 1)
                        .unwrap()
                        .divide_exact(&ring.qa_bracket(m))
                        .unwrap();
                    assert!(w.is_unit());
                    unit = unit.mul(&w.frobenius(1).truncated(160, 20));
                }
                let rhs = ring.orientation().pow(j).mul(&q_fact);
                assert!(unit.is_unit());
                assert!(gen.mul(&unit).eq(&rhs), "p={p} j={j}");
            }
        }
    }

    #[test]
    fn e2_pages() {
        for p in [2u64, 3] {
            let tf = e2_page(p, RingKind::Torsionfree, 16, 16);
            assert!(!tf.entries.is_empty());
            assert!(tf.entries.iter().all(|e| e.x % 2 == 0), "no odd columns");
            // diagonal entries (y=0, x>0) are constR
            for e in tf.entries.iter().filter(|e| e.y == 0 && e.x > 0) {
                assert_eq!(e.mackey.kind, "constR");
            }
            let fp = e2_page(p, RingKind::Fp, 16, 16);
            assert!(fp.entries.iter().any(|e| e.x % 2 == 1), "fp has odd columns");
        }
    }

    #[test]
    fn einf_entries_carry_f_h() {
        // (p=2, i=1, n=2): f = h(1,1)+1 = 1, h(2,1) = 1 -> phiW(2)/p^2
        let page = einf_page(2, 8, 8);
        let cell = page
            .entries
            .iter()
            .find(|e| e.x == 2 && e.y == 2)
            .expect("cell (2,2)");
        assert_eq!(cell.mackey.kind, "quotient");
        let want = MackeyDescriptor::quotient(MackeyDescriptor::PhiW(2), AtomProduct::p_pow(2));
        let (k, params) = want.kind_params();
        assert_eq!(cell.mackey.kind, k);
        assert_eq!(cell.mackey.params, params);
    }

    #[test]
    fn torsionfree_e2_collapses_to_closed_answer() {
        // every entry equals the even closed form: nothing else appears
        for p in [2u64, 3] {
            let page = e2_page(p, RingKind::Torsionfree, 20, 20);
            for e in &page.entries {
                let (i, n) = ((e.x / 2) as u64, ((e.x + e.y) / 2) as u64);
                let want = slice_homotopy_even(p, n, i, RingKind::Torsionfree);
                let (kind, params) = want.kind_params();
                assert_eq!(e.mackey.kind, kind);
                assert_eq!(e.mackey.params, params);
            }
        }
    }
}
