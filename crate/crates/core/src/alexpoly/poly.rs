//! Dense polynomials over the integers, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub(crate) fn add(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

pub(crate) fn sub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

pub(crate) fn mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub(crate) fn scale(a: &ZPoly, k: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c * k).collect())
}

pub(crate) fn derivative(a: &ZPoly) -> ZPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

pub(crate) fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Divides out the content and makes the leading coefficient positive.
pub(crate) fn primitive(a: &ZPoly) -> ZPoly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut g = content(a);
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder of `a` by `b`.
pub(crate) fn prem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        r = r.iter().map(|c| c * &lb).collect();
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= c * &lr;
        }
        r = trim(r);
    }
    r
}

/// `a / b` when the quotient has integer coefficients and the division is exact.
pub(crate) fn exact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        q[k] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(trim(q))
    } else {
        None
    }
}

/// Primitive gcd with positive leading coefficient.
pub(crate) fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let (mut a, mut b) = (primitive(a), primitive(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = primitive(&r);
    }
    a
}

/// Square-free decomposition of a primitive polynomial: `a = prod f_i^i`.
pub(crate) fn squarefree(a: &ZPoly) -> Vec<(ZPoly, usize)> {
    let mut out = Vec::new();
    if a.len() <= 1 {
        return out;
    }
    let d = derivative(a);
    let c = gcd(a, &d);
    let mut w = exact_div(a, &c).expect("gcd divides");
    let mut y = exact_div(&d, &c).expect("gcd divides derivative");
    let mut i = 1;
    loop {
        let z = sub(&y, &derivative(&w));
        if z.is_empty() {
            if w.len() > 1 {
                out.push((primitive(&w), i));
            }
            break;
        }
        let g = gcd(&w, &z);
        if g.len() > 1 {
            out.push((g.clone(), i));
        }
        w = exact_div(&w, &g).expect("gcd divides");
        y = exact_div(&z, &g).expect("gcd divides");
        if w.len() <= 1 {
            break;
        }
        i += 1;
    }
    out
}

pub(crate) fn max_abs(a: &ZPoly) -> BigInt {
    a.iter().map(|c| c.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> ZPoly {
        trim(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[1, -1, 1]);
        let b = p(&[1, 1]);
        let ab = mul(&a, &b);
        assert_eq!(exact_div(&ab, &b), Some(a.clone()));
        assert_eq!(exact_div(&a, &b), None);
        assert_eq!(gcd(&mul(&ab, &p(&[2])), &mul(&b, &p(&[3, 1]))), b);
    }

    #[test]
    fn squarefree_parts() {
        let a = p(&[1, -1, 1]);
        let b = p(&[1, 1]);
        let f = mul(&mul(&a, &a), &mul(&mul(&b, &b), &b));
        let parts = squarefree(&f);
        assert_eq!(parts, vec![(a, 2), (b, 3)]);
    }
}
