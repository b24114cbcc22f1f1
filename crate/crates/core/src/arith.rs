//! Small exact-integer helpers.

/// `C(n, k)`, or `None` on overflow.
pub fn binom(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

pub fn pow(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

/// Largest `r` with `r^s ≤ value`.
pub fn floor_root(value: u128, s: u32) -> u64 {
    assert!(s >= 1);
    if value == 0 {
        return 0;
    }
    let mut lo = 0u64;
    let mut hi = value.min(u64::MAX as u128) as u64;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match pow(mid, s) {
            Some(p) if p <= value => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

/// Smallest `r` with `r^s ≥ value`.
pub fn ceil_root(value: u128, s: u32) -> u64 {
    let r = floor_root(value, s);
    if pow(r, s) == Some(value) {
        r
    } else {
        r + 1
    }
}
