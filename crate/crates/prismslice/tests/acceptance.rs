//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines; any failure fails the corresponding test.

use prismslice::chart::hieroglyph;
use prismslice::combinatorics::{legendre_valuation, slice_f, slice_h, vp};
use prismslice::gold::{
    canonical_generator, key_identity, reduce_ratio, reduce_ratio_random_order, AtomProduct,
    GoldMonomial,
};
use prismslice::mackey::{
    axiom_check, ex_mackey_sequences, exactness_check_crystalline, exactness_check_q, realize,
    witt_tower, MackeyDescriptor,
};
use prismslice::prism::{
    corollary_congruence, extended_units, norm_lift_diagram_check, q_legendre_check,
    verify_congruence, LiftKind, Prism, PrismKind,
};
use prismslice::reps::{bracket_rep, brace_rep, p_typify, PTypicalRep};
use prismslice::rings::Ring;
use prismslice::slice::{
    e2_page, einf_page, filtration_gen_even, oracle_slice_homotopy, slice_homotopy_even,
    slice_homotopy_odd, RingKind,
};
use prismslice::witt::{iso_witt, FpxRing, WittVector, ZModRing, ZpRing};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool) {
    println!(
        "ACCEPTANCE {id:>2} {name}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {id} ({name}) failed");
}

#[test]
fn criterion_01_legendre_valuation() {
    let mut pass = true;
    for p in [2u64, 3, 5, 7] {
        let mut brute = 0;
        for n in 1..=2000u64 {
            // brute force: v_p(n!) accumulated by repeated division of each factor
            let mut m = n;
            while m % p == 0 {
                brute += 1;
                m /= p;
            }
            if legendre_valuation(p, n) != brute {
                pass = false;
            }
        }
    }
    report(1, "legendre valuation vs factorial brute force", pass);
}

#[test]
fn criterion_02_q_legendre() {
    let mut pass = true;
    for p in [2u64, 3] {
        for n in 1..=40 {
            if !q_legendre_check(p, n, 48, 24).unwrap() {
                eprintln!("q-Legendre failed at p={p} n={n}");
                pass = false;
            }
        }
    }
    report(2, "q-Legendre product forms at (N,M) = (48,24)", pass);
}

#[test]
fn criterion_03_representation_decompositions() {
    let mut pass = true;
    for p in [2u64, 3, 5] {
        for n in 0..=500u64 {
            let brace_oracle = p_typify(p, &(1..=n).collect::<Vec<_>>());
            let bracket_oracle = p_typify(p, &(0..n).collect::<Vec<_>>());
            if brace_rep(p, n) != brace_oracle || bracket_rep(p, n) != bracket_oracle {
                pass = false;
            }
        }
    }
    // {4}_lambda = 3 lambda_0 + lambda_1 and [9]_lambda = 6 l0 + 2 l1 + l_inf at p=3
    let mut want4 = PTypicalRep::zero();
    want4.add_lambda(0, 3);
    want4.add_lambda(1, 1);
    pass &= brace_rep(3, 4) == want4;
    let mut want9 = PTypicalRep::zero();
    want9.add_lambda(0, 6);
    want9.add_lambda(1, 2);
    want9.mult_inf = 1;
    pass &= bracket_rep(3, 9) == want9;
    report(3, "representation decompositions vs p-typify oracle", pass);
}

#[test]
fn criterion_04_witt_calculus() {
    let mut pass = true;

    // ring axioms, exhaustive on W_2(Z/p^2)
    for p in [2u64, 3] {
        let ring = ZModRing::new(p, 2);
        let elems: Vec<WittVector<ZModRing>> = (0..ring.modulus)
            .flat_map(|a| (0..ring.modulus).map(move |b| (a, b)))
            .map(|(a, b)| WittVector::new(ring, vec![a, b]))
            .collect();
        let zero = WittVector::zero(ring, 2);
        let one = WittVector::one(ring, 2);
        for x in &elems {
            pass &= x.add(&zero).unwrap().eq(x) && x.mul(&one).unwrap().eq(x);
            pass &= x.add(&x.neg().unwrap()).unwrap().eq(&zero);
            for y in &elems {
                pass &= x.add(y).unwrap().eq(&y.add(x).unwrap());
                pass &= x.mul(y).unwrap().eq(&y.mul(x).unwrap());
                for z in &elems {
                    pass &= x.add(y).unwrap().add(z).unwrap().eq(&x.add(&y.add(z).unwrap()).unwrap());
                    pass &= x.mul(y).unwrap().mul(z).unwrap().eq(&x.mul(&y.mul(z).unwrap()).unwrap());
                    pass &= x
                        .mul(&y.add(z).unwrap())
                        .unwrap()
                        .eq(&x.mul(y).unwrap().add(&x.mul(z).unwrap()).unwrap());
                }
            }
        }
    }

    // F V = p, exhaustive on W_2(Z/9)
    let ring = ZModRing::new(3, 2);
    for a in 0..9u128 {
        for b in 0..9u128 {
            let x = WittVector::new(ring, vec![a, b]);
            pass &= x
                .verschiebung_v()
                .frobenius_f()
                .unwrap()
                .eq(&x.int_mul(3).unwrap());
        }
    }

    // ghost / from_ghost round trip over the integers
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2u64, 3] {
        let zp = ZpRing { p };
        for _ in 0..60 {
            let x = WittVector::new(
                zp,
                (0..4).map(|_| BigInt::from(rng.gen_range(-99i64..99))).collect::<Vec<_>>(),
            );
            pass &= WittVector::from_ghost(zp, &x.ghost()).unwrap().eq(&x);
        }
    }

    // Angeltveit norm multiplicativity: >= 200 random pairs over F_p[x]/(x^5)
    for p in [2u64, 3] {
        let ring = FpxRing { p, deg: 5 };
        let mut rand_el = |rng: &mut ChaCha8Rng| -> Vec<u64> {
            (0..5).map(|_| rng.gen_range(0..p)).collect()
        };
        for len in [2usize, 3] {
            for _ in 0..100 {
                let x = WittVector::new(ring, (0..len).map(|_| rand_el(&mut rng)).collect::<Vec<_>>());
                let y = WittVector::new(ring, (0..len).map(|_| rand_el(&mut rng)).collect::<Vec<_>>());
                let lhs = x.mul(&y).unwrap().norm().unwrap();
                let rhs = x.norm().unwrap().mul(&y.norm().unwrap()).unwrap();
                pass &= lhs.eq(&rhs);
            }
        }
    }

    // norm-lift diagram iso(N(x)) = N(iso(x)) for both lift flavors
    for p in [2u64, 3] {
        for n in 1..=2u32 {
            let (prec_n, prec_m) = if p == 2 { (96, 12) } else { (160, 8) };
            let pr = Prism::new(PrismKind::PerfectQ { depth: n + 1 }, p, prec_n, prec_m).unwrap();
            for s in 0..3i64 {
                let base = pr.ring.from_coeffs(&[1 + s, 2, s % 3, 1]);
                pass &= norm_lift_diagram_check(&pr, n, LiftKind::Borger, &base).unwrap();
            }
            let dummy = pr.ring.zero();
            for (ax, ay) in [(1u64, 0u64), (2, 1)] {
                pass &= norm_lift_diagram_check(&pr, n, LiftKind::QPochhammer { ax, ay }, &dummy)
                    .unwrap();
            }
        }
    }

    report(4, "witt calculus (axioms, FV=p, ghost, norm, norm-lift diagram)", pass);
}

fn all_models() -> Vec<(String, Prism)> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let n = if p == 2 { 64 } else { 192 };
        out.push((
            format!("qcrys p={p}"),
            Prism::new(PrismKind::QCrystalline, p, n, 20).unwrap(),
        ));
        out.push((
            format!("perfq p={p}"),
            Prism::new(PrismKind::PerfectQ { depth: 1 }, p, n, 20).unwrap(),
        ));
        out.push((
            format!("kisin p={p}"),
            Prism::new(PrismKind::Kisin, p, 128, 20).unwrap(),
        ));
        out.push((
            format!("crys p={p}"),
            Prism::new(PrismKind::Crystalline, p, 1, 20).unwrap(),
        ));
    }
    out
}

#[test]
fn criterion_05_prisms() {
    let mut pass = true;
    for (name, pr) in all_models() {
        let cond = pr.prism_condition();
        if cond.is_err() {
            eprintln!("prism condition failed for {name}");
            pass = false;
            continue;
        }
        if name.starts_with("qcrys") {
            // delta([p]_q) = 1 mod [p]_q
            let ok = cond
                .unwrap()
                .sub(&pr.ring.one())
                .is_divisible_by(&pr.orientation)
                .unwrap();
            if !ok {
                eprintln!("delta unit not congruent to 1 for {name}");
                pass = false;
            }
        }
        let table = match extended_units(&pr, 4, 4) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("unit table failed for {name}: {e}");
                pass = false;
                continue;
            }
        };
        for i in 1..=4 {
            for j in i..=4 {
                if !verify_congruence(&pr, &table, i, j).unwrap() {
                    eprintln!("congruence ({i},{j}) failed for {name}");
                    pass = false;
                }
            }
        }
        for i in 1..=3u32 {
            for j in i..=3 {
                for r in i..=3 {
                    if !corollary_congruence(&pr, i, j, r).unwrap() {
                        eprintln!("corollary ({i},{j},{r}) failed for {name}");
                        pass = false;
                    }
                }
            }
        }
    }
    report(5, "prism condition + extended/corollary congruences, all models", pass);
}

#[test]
fn criterion_06_warning_identity() {
    let mut pass = true;
    for (a, b) in [(1u64, 0u64), (2, 1), (3, 2), (5, 1)] {
        if !prismslice::prism::warning_identity_check(a, b).unwrap() {
            eprintln!("warning identity failed at ({a},{b})");
            pass = false;
        }
    }
    report(6, "warning identity, exact integers", pass);
}

#[test]
fn criterion_07_slice_homotopy_oracle() {
    let mut pass = true;
    for p in [2u64, 3] {
        for n in 1..=30u64 {
            for i in 1..=n {
                let o = oracle_slice_homotopy(p, n, i, 6).unwrap();
                let even = slice_homotopy_even(p, n, i, RingKind::Fp);
                let odd = slice_homotopy_odd(p, n, i, RingKind::Fp);
                for k in 0..=6u32 {
                    let we = realize(&even, k).crystalline_valuation().unwrap();
                    let wo = realize(&odd, k).crystalline_valuation().unwrap();
                    if o.even_levels[k as usize] != we || o.odd_levels[k as usize] != wo {
                        eprintln!("oracle mismatch p={p} n={n} i={i} k={k}");
                        pass = false;
                    }
                }
            }
        }
    }
    // the three p=3 proof multipliers
    let vals: Vec<i64> = [(4u64, 1u64), (3, 2), (6, 2)]
        .iter()
        .map(|&(n, i)| {
            oracle_slice_homotopy(3, n, i, 0)
                .unwrap()
                .multiplier
                .crystalline_valuation()
        })
        .collect();
    if vals != vec![1, 1, 2] {
        eprintln!("proof multipliers got {vals:?}");
        pass = false;
    }
    report(7, "slice homotopy closed forms vs exact-sequence oracle", pass);
}

#[test]
fn criterion_08_filtration_cross_check() {
    let mut pass = true;
    for p in [2u64, 3] {
        for i in 1..=10u64 {
            for j in 1..=10i64 {
                let val = filtration_gen_even(p, i, j).crystalline_valuation() as u64;
                if val != slice_f(p, i + j as u64, i).unwrap() {
                    pass = false;
                }
                let prev = filtration_gen_even(p, i, j - 1).crystalline_valuation() as u64;
                if val - prev != slice_h(p, i + j as u64 - 1, i).unwrap() + 1 {
                    pass = false;
                }
            }
        }
    }
    report(8, "filtration valuations vs slice_f / slice_h", pass);
}

#[test]
fn criterion_09_gold_key_identity() {
    let mut pass = true;
    for p in [2u64, 3] {
        let ring = Ring::q_local(p, 1, 96, 20).unwrap();
        for k in 1..=12u64 {
            if !key_identity(p, k).unwrap() {
                eprintln!("key identity atoms failed p={p} k={k}");
                pass = false;
            }
            // materialized: the reduced atoms equal the factorial product in the ring
            let brace = brace_rep(p, k);
            let lhs = GoldMonomial::sigma(k as i64).mul(&GoldMonomial::a_of_rep(&brace));
            let atoms = reduce_ratio(&lhs, &GoldMonomial::u_of_rep(&brace)).unwrap();
            let materialized = atoms.to_ring(&ring).unwrap();
            if !materialized.eq(&ring.qa_factorial(p * k)) {
                eprintln!("key identity ring materialization failed p={p} k={k}");
                pass = false;
            }
        }
    }
    // rewrite confluence over 100 randomized orders
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let k = rng.gen_range(1..=8u64);
        let brace = brace_rep(p, k);
        let m1 = GoldMonomial::sigma(k as i64).mul(&GoldMonomial::a_of_rep(&brace));
        let m2 = GoldMonomial::u_of_rep(&brace);
        let expected = AtomProduct::qa_factorial(p, p * k);
        if reduce_ratio_random_order(&m1, &m2, &mut rng).unwrap() != expected {
            pass = false;
        }
    }
    report(9, "gold key identity (atoms + ring) and rewrite confluence", pass);
}

#[test]
fn criterion_10_mackey_exactness_and_axiom() {
    let mut pass = true;
    for p in [2u64, 3] {
        let seqs = ex_mackey_sequences(2);
        for (si, seq) in seqs.iter().enumerate() {
            for (k, lvl) in seq.iter().enumerate() {
                if !exactness_check_crystalline(lvl, p) {
                    eprintln!("crystalline exactness failed p={p} seq={si} level={k}");
                    pass = false;
                }
            }
        }
        let prec_n = if p == 2 { 64 } else { 128 };
        let ring = Ring::q_local(p, 0, prec_n, 20).unwrap();
        let samples = vec![
            ring.one(),
            ring.q_pow(1),
            ring.from_coeffs(&[2, 1, 0, 3]),
            ring.q_integer(3, 0).unwrap(),
        ];
        for (si, seq) in seqs.iter().enumerate() {
            for (k, lvl) in seq.iter().enumerate() {
                if !exactness_check_q(lvl, &ring, &samples).unwrap() {
                    eprintln!("q-model exactness failed p={p} seq={si} level={k}");
                    pass = false;
                }
            }
        }
        // res tr = p on the witt tower up to level 4, both ring models
        for kind in [PrismKind::QCrystalline, PrismKind::Crystalline] {
            let prec_n = if p == 2 { 96 } else { 192 };
            let pr = Prism::new(kind, p, prec_n, 20).unwrap();
            let table = extended_units(&pr, 4, 4).unwrap();
            if !axiom_check(&witt_tower(4), &pr, &table).unwrap() {
                eprintln!("axiom failed p={p} {kind:?}");
                pass = false;
            }
        }
    }
    report(10, "mackey short exact sequences + res.tr axiom", pass);
}

#[test]
fn criterion_11_charts() {
    let mut pass = true;
    for p in [2u64, 3] {
        let tf = e2_page(p, RingKind::Torsionfree, 20, 20);
        if tf.entries.iter().any(|e| e.x % 2 != 0) {
            eprintln!("odd column in torsionfree E2 at p={p}");
            pass = false;
        }
        for e in &tf.entries {
            let (i, n) = ((e.x / 2) as u64, ((e.x + e.y) / 2) as u64);
            let want = slice_homotopy_even(p, n, i, RingKind::Torsionfree);
            let (kind, params) = want.kind_params();
            if e.mackey.kind != kind || e.mackey.params != params {
                eprintln!("torsionfree E2 not the closed-form answer at p={p} ({}, {})", e.x, e.y);
                pass = false;
            }
        }
        // Einfinity entries carry (f, h) consistent with criterion 8
        let einf = einf_page(p, 20, 20);
        for e in einf.entries.iter().filter(|e| e.x > 0) {
            let (i, n) = ((e.x / 2) as u64, ((e.x + e.y) / 2) as u64);
            let f = slice_f(p, n, i).unwrap() as u32;
            let h = slice_h(p, n, i).unwrap();
            let want = MackeyDescriptor::quotient(
                MackeyDescriptor::PhiW(f + 1),
                AtomProduct::p_pow(h as i64 + 1),
            );
            let (kind, params) = want.kind_params();
            if e.mackey.kind != kind
                || e.mackey.params != params
                || e.hieroglyph != hieroglyph(&want)
            {
                eprintln!("einf mismatch at p={p} ({}, {})", e.x, e.y);
                pass = false;
            }
            // cross-check the f parameter against the filtration generator valuation
            if i >= 1 && n > i {
                let val =
                    filtration_gen_even(p, i, (n - i) as i64).crystalline_valuation() as u64;
                if val != f as u64 {
                    eprintln!("einf f-parameter disagrees with generator valuation p={p}");
                    pass = false;
                }
            }
        }
        // byte determinism: regenerate and serialize twice
        let again = einf_page(p, 20, 20);
        if einf.to_json_string() != again.to_json_string() {
            eprintln!("einf page bytes not deterministic at p={p}");
            pass = false;
        }
        let e2a = e2_page(p, RingKind::Fp, 14, 14).to_json_string();
        let e2b = e2_page(p, RingKind::Fp, 14, 14).to_json_string();
        if e2a != e2b {
            pass = false;
        }
    }
    report(11, "chart pages: collapse, (f,h) parameters, determinism", pass);
}

/// Gold cross-module invariant: the sigma-multiplication multiplier between
/// consecutive canonical generators reproduces the slice oracle pattern.
#[test]
fn cross_module_generator_multipliers() {
    let mut pass = true;
    for p in [2u64, 3] {
        for n in 1..=15u64 {
            let alpha = brace_rep(p, n);
            let d0 = alpha.dim_seq(0) as u64;
            for i in 0..=(d0 + 2) {
                let lhs = GoldMonomial::sigma(1).mul(&canonical_generator(i, &alpha));
                let rhs = canonical_generator(i + 1, &alpha);
                let atoms = reduce_ratio(&lhs, &rhs).unwrap();
                let want: i64 = (0..32).filter(|&s| alpha.dim_seq(s) > i as i64).count() as i64;
                if atoms.crystalline_valuation() != want {
                    pass = false;
                }
            }
        }
    }
    assert!(pass);
}

/// iso_witt intertwines the quotient projections A/[p^(n+1)] -> A/[p^n]
/// with the Witt-vector Frobenius.
#[test]
fn cross_module_iso_witt_interface() {
    let ring = Ring::q_local(2, 3, 96, 12).unwrap();
    let b = ring.q_pow(1).add(&ring.from_i64(3));
    for n in 1..=2usize {
        let lhs = iso_witt(&ring, &b, n + 1).unwrap().frobenius_f().unwrap();
        let rhs = iso_witt(&ring, &b.frobenius(1), n).unwrap();
        assert!(lhs.eq(&rhs));
    }
    // vp is used by every index computation; pin the examples once more
    assert_eq!(vp(3, 9).unwrap(), 2);
    assert_eq!(vp(2, 48).unwrap(), 4);
}
