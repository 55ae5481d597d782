//! Residue arithmetic in `Z_n`, `n <= 255`.

#[inline]
pub fn add(a: u8, b: u8, n: u8) -> u8 {
    ((a as u16 + b as u16) % n as u16) as u8
}

#[inline]
pub fn neg(a: u8, n: u8) -> u8 {
    if a == 0 {
        0
    } else {
        n - a
    }
}

#[inline]
pub fn sub(a: u8, b: u8, n: u8) -> u8 {
    add(a, neg(b, n), n)
}

/// `sign * a` for `sign` in `{-1, +1}`.
#[inline]
pub fn signed(a: u8, sign: i8, n: u8) -> u8 {
    if sign < 0 {
        neg(a, n)
    } else {
        a
    }
}

/// Reduce an arbitrary integer into `0..n`.
#[inline]
pub fn reduce(v: i64, n: u8) -> u8 {
    v.rem_euclid(n as i64) as u8
}
