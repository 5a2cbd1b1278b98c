//! Exact integer helpers.

/// `ceil(sqrt(v))`.
pub fn ceil_sqrt(v: u64) -> u64 {
    let s = v.isqrt();
    if s * s == v {
        s
    } else {
        s + 1
    }
}

/// `ceil(a / b)` for `b > 0`.
pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

pub fn is_square(v: u64) -> bool {
    let s = v.isqrt();
    s * s == v
}
