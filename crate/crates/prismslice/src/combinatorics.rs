//! Pure-integer number theory used by every other module: p-adic valuations,
//! Legendre's formula, floor/ceiling identities, and the slice-index
//! functions m, h, l, r, f.
//!
//! All logarithms and ceilings of ratios are computed by integer power
//! comparison (`p^r * i` against `n`), never through floating point.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("p-adic valuation of 0 is infinite")]
    ValuationOfZero,
    #[error("slice index out of range: expected {expected}, got i={i}, n={n}")]
    IndexRange {
        expected: &'static str,
        i: u64,
        n: u64,
    },
}

/// Largest e with p^e | n. Rejects n = 0.
pub fn vp(p: u64, n: u64) -> Result<u64, CombinatoricsError> {
    assert!(p >= 2, "p must be at least 2");
    if n == 0 {
        return Err(CombinatoricsError::ValuationOfZero);
    }
    let mut n = n;
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// Sum_{r>=1} floor(n / p^r), the p-adic valuation of n!.
pub fn legendre_valuation(p: u64, n: u64) -> u64 {
    assert!(p >= 2);
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// The identity ceil((n+1)/p^k) - 1 == floor(n/p^k), checked at (n, k).
///
/// Always true; exposed as a callable so it can serve as a property test.
pub fn floor_ceil_shift(p: u64, n: u64, k: u32) -> bool {
    let pk = p.checked_pow(k).expect("p^k overflow");
    let ceil = (n + 1).div_ceil(pk);
    ceil - 1 == n / pk
}

/// Slice indices attached to a pair 0 < i <= n at the prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceIndices {
    pub p: u64,
    pub n: u64,
    pub i: u64,
    pub m: u64,
    pub h: u64,
    /// Whether n/i is a power of p (including p^0 when i = n).
    pub power_case: bool,
}

fn check_range(i: u64, n: u64) -> Result<(), CombinatoricsError> {
    if i == 0 || i > n {
        return Err(CombinatoricsError::IndexRange {
            expected: "0 < i <= n",
            i,
            n,
        });
    }
    Ok(())
}

/// min{ r >= 0 : p^(r+1) * i >= n }, the integer form of ceil(log_p(n/i)) - 1.
///
/// Defined for 0 < i <= n; returns 0 when i = n (where it is never consumed:
/// the h = 0 clause takes over).
pub fn slice_m(p: u64, n: u64, i: u64) -> Result<u64, CombinatoricsError> {
    check_range(i, n)?;
    if i == n {
        return Ok(0);
    }
    let mut r = 0u64;
    let mut pw = i.checked_mul(p).expect("overflow");
    // invariant: pw = p^(r+1) * i
    while pw < n {
        pw = pw.checked_mul(p).expect("overflow");
        r += 1;
    }
    Ok(r)
}

/// Whether n = i * p^r for some r >= 0.
pub fn is_power_case(p: u64, n: u64, i: u64) -> bool {
    let mut m = i;
    while m < n {
        m = match m.checked_mul(p) {
            Some(v) => v,
            None => return false,
        };
    }
    m == n
}

/// floor(log_p(n/i)) as max{ r : p^r * i <= n }, for 0 < i <= n.
fn floor_log_ratio(p: u64, n: u64, i: u64) -> u64 {
    let mut r = 0u64;
    let mut pw = i;
    while let Some(next) = pw.checked_mul(p) {
        if next > n {
            break;
        }
        pw = next;
        r += 1;
    }
    r
}

/// The torsion exponent h of the 2n-slice in half-degree 2i.
///
/// h = 0 when i = n; otherwise floor(log_p(n/i)) when n/i is a power of p,
/// and min{v_p(n), floor(log_p(n/i))} when it is not.
pub fn slice_h(p: u64, n: u64, i: u64) -> Result<u64, CombinatoricsError> {
    check_range(i, n)?;
    if i == n {
        return Ok(0);
    }
    let fl = floor_log_ratio(p, n, i);
    if is_power_case(p, n, i) {
        Ok(fl)
    } else {
        Ok(fl.min(vp(p, n)?))
    }
}

/// Bundle (m, h, power_case) for 0 < i <= n.
pub fn slice_indices(p: u64, n: u64, i: u64) -> Result<SliceIndices, CombinatoricsError> {
    Ok(SliceIndices {
        p,
        n,
        i,
        m: slice_m(p, n, i)?,
        h: slice_h(p, n, i)?,
        power_case: is_power_case(p, n, i),
    })
}

/// min{ r >= 0 : ceil(n/p^r) = ceil(i/p^r) }, for 0 < i < n.
///
/// The ceilings agree exactly when no multiple of p^r lies in [i, n-1], so
/// this equals max{ v_p(m) : i <= m < n } + 1 (tested). The geometric level
/// of the lambda-graded slice homotopy is ell - 1, the max form itself.
pub fn ell(p: u64, i: u64, n: u64) -> Result<u64, CombinatoricsError> {
    if i == 0 || i >= n {
        return Err(CombinatoricsError::IndexRange {
            expected: "0 < i < n",
            i,
            n,
        });
    }
    let mut r = 0u32;
    loop {
        let pr = p.checked_pow(r).expect("p^r overflow");
        if n.div_ceil(pr) == i.div_ceil(pr) {
            return Ok(r as u64);
        }
        r += 1;
    }
}

/// min{ r >= 0 : p^r * i >= i + j }, i.e. ceil(log_p((i+j)/i)).
pub fn slice_r(p: u64, i: u64, j: u64) -> u64 {
    assert!(i >= 1 && j >= 1, "slice_r needs i >= 1, j >= 1");
    let target = i + j;
    let mut r = 0u64;
    let mut pw = i;
    while pw < target {
        pw = pw.checked_mul(p).expect("overflow");
        r += 1;
    }
    r
}

/// Sum_{i <= m < n} (h(m, i) + 1); zero when i = n.
pub fn slice_f(p: u64, n: u64, i: u64) -> Result<u64, CombinatoricsError> {
    check_range(i, n)?;
    let mut total = 0;
    for m in i..n {
        total += slice_h(p, m, i)? + 1;
    }
    Ok(total)
}
