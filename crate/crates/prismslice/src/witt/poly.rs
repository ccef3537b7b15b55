//! Exact multivariate integer polynomials and the cached universal Witt
//! polynomials (sum, product, Frobenius, norm) obtained by ghost-side
//! arithmetic followed by triangular ghost inversion over Z. All divisions
//! by p-powers in the inversion are asserted exact.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::WittRing;

/// A polynomial over Z in `nvars` variables; monomials as exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, v: BigInt) -> Self {
        let mut p = MPoly::zero(nvars);
        if !v.is_zero() {
            p.terms.insert(vec![0; nvars], v);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, e: Vec<u32>, v: BigInt) {
        if v.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += v;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.insert(e.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.insert(e.clone(), -v);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, va * vb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MPoly::constant(self.nvars, BigInt::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.insert(e.clone(), v * k);
        }
        out
    }

    /// Exact division by an integer; panics if any coefficient resists
    /// (that would be a bug in the ghost inversion).
    fn div_exact(&self, k: &BigInt) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            let (q, r) = (v / k, v % k);
            assert!(r.is_zero(), "inexact division in ghost inversion");
            out.insert(e.clone(), q);
        }
        out
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(|v| v.abs().bits()).max().unwrap_or(0)
    }

    /// Evaluate over any coefficient ring.
    pub fn eval<R: WittRing>(&self, ring: &R, args: &[R::Elem]) -> R::Elem {
        assert_eq!(args.len(), self.nvars, "wrong argument count");
        let mut acc = ring.zero();
        for (e, v) in &self.terms {
            let mut term = ring.of_bigint(v);
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    term = ring.mul(&term, &pow_elem(ring, &args[i], ei));
                }
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }
}

pub(crate) fn pow_elem<R: WittRing>(ring: &R, x: &R::Elem, e: u32) -> R::Elem {
    let mut acc = ring.one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = ring.mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = ring.mul(&base, &base);
        }
    }
    acc
}

/// Ghost polynomials g_0..g_{len-1} of the coordinate variables starting at
/// `offset`: g_i = sum_{j<=i} p^j X_{offset+j}^(p^(i-j)).
fn ghost_polys(p: u64, nvars: usize, offset: usize, len: usize) -> Vec<MPoly> {
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let mut g = MPoly::zero(nvars);
        for j in 0..=i {
            let pj = BigInt::from(p).pow((j) as u32);
            let xp = MPoly::var(nvars, offset + j).pow(p.pow((i - j) as u32) as u32);
            g = g.add(&xp.scale(&pj));
        }
        out.push(g);
    }
    out
}

/// Invert the ghost map symbolically: given target ghosts w_0..w_{k-1},
/// produce coordinate polynomials z_i with ghost(z) = w.
fn ghost_invert(p: u64, ghosts: &[MPoly]) -> Vec<MPoly> {
    let nvars = ghosts.first().map(|g| g.nvars).unwrap_or(0);
    let mut zs: Vec<MPoly> = Vec::with_capacity(ghosts.len());
    for (i, w) in ghosts.iter().enumerate() {
        let mut rhs = w.clone();
        for (j, z) in zs.iter().enumerate().take(i) {
            let pj = BigInt::from(p).pow(j as u32);
            rhs = rhs.sub(&z.pow(p.pow((i - j) as u32) as u32).scale(&pj));
        }
        let mut acc = MPoly::zero(nvars);
        if !rhs.is_zero() {
            acc = rhs.div_exact(&BigInt::from(p).pow(i as u32));
        }
        zs.push(acc);
    }
    zs
}

/// Operation selector for the universal polynomial cache.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpTag {
    /// Coordinates of x + y; 2*len variables, len outputs.
    Sum,
    /// Coordinates of x * y; 2*len variables, len outputs.
    Prod,
    /// Coordinates of F(x): W_(len+1) -> W_len; len+1 variables.
    Frob,
    /// Coordinates of N(x): W_len -> W_(len+1); len variables.
    Norm,
}

/// Hard bound on cached lengths; beyond this the coefficient blow-up of the
/// universal polynomials is severe.
pub const WITT_LEN_BOUND: usize = 5;

type CacheKey = (u64, OpTag, usize);
static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<MPoly>>>>> = OnceLock::new();

/// The cached universal polynomials for (p, op, len). `len` is the length of
/// the *input* vector(s). Computed once, memoized for the process lifetime.
pub fn universal_polys(p: u64, op: OpTag, len: usize) -> Arc<Vec<MPoly>> {
    assert!((1..=WITT_LEN_BOUND).contains(&len), "witt length out of cache bounds");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(v) = guard.get(&(p, op, len)) {
        return v.clone();
    }
    let polys = match op {
        OpTag::Sum | OpTag::Prod => {
            let nvars = 2 * len;
            let gx = ghost_polys(p, nvars, 0, len);
            let gy = ghost_polys(p, nvars, len, len);
            let target: Vec<MPoly> = gx
                .iter()
                .zip(&gy)
                .map(|(a, b)| if op == OpTag::Sum { a.add(b) } else { a.mul(b) })
                .collect();
            ghost_invert(p, &target)
        }
        OpTag::Frob => {
            // gh(Fx)_i = gh(x)_(i+1)
            let nvars = len + 1;
            let g = ghost_polys(p, nvars, 0, len + 1);
            ghost_invert(p, &g[1..])
        }
        OpTag::Norm => {
            // gh(Nx) = (w_0, w_0^p, w_1^p, ..., w_(len-1)^p)
            let g = ghost_polys(p, len, 0, len);
            let mut target = Vec::with_capacity(len + 1);
            target.push(g[0].clone());
            for gi in &g {
                target.push(gi.pow(p as u32));
            }
            ghost_invert(p, &target)
        }
    };
    let arc = Arc::new(polys);
    guard.insert((p, op, len), arc.clone());
    arc
}
