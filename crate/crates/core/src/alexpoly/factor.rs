//! Counting irreducible factors over the rationals: square-free
//! decomposition, Berlekamp factorization modulo a small prime, Hensel
//! lifting and subset recombination.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{self, ZPoly};

/// Irreducible factors of a primitive polynomial, with multiplicity.
pub(crate) fn count_factors(f: &ZPoly) -> usize {
    let f = poly::primitive(f);
    if f.len() <= 1 {
        return 0;
    }
    poly::squarefree(&f)
        .iter()
        .map(|(g, mult)| mult * count_squarefree(g))
        .sum()
}

fn count_squarefree(f: &ZPoly) -> usize {
    let n = f.len() - 1;
    if n <= 1 {
        return n;
    }
    let mut count = 0;
    let mut f = f.clone();
    // strip factors of t
    while f[0].is_zero() {
        f.remove(0);
        count += 1;
    }
    if f.len() <= 2 {
        return count + f.len() - 1;
    }
    let (p, factors) = choose_prime(&f);
    if factors.len() == 1 {
        return count + 1;
    }
    count + recombine(&f, p, factors)
}

/// Among the first few primes that keep `f` square-free and its degree,
/// the one giving fewest modular factors.
fn choose_prime(f: &ZPoly) -> (u64, Vec<Vec<u64>>) {
    let lc = f.last().unwrap();
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in (3u64..).filter(|&p| is_prime(p)) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce(f, p);
        let d = fp_derivative(&fp, p);
        if fp_gcd(&fp, &d, p).len() != 1 {
            continue;
        }
        let monic = fp_monic(&fp, p);
        let factors = berlekamp(&monic, p);
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.expect("some prime is good")
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn recombine(f: &ZPoly, p: u64, factors: Vec<Vec<u64>>) -> usize {
    let n = f.len() - 1;
    let bound = BigInt::from(n + 1) * (BigInt::one() << n) * poly::max_abs(f) * f.last().unwrap().abs();
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= &bound * 2 {
        modulus *= &pb;
    }
    let lifted = hensel_lift(f, p, &factors, &modulus);
    let mut remaining: Vec<ZPoly> = lifted;
    let mut f = f.clone();
    let mut count = 0;
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = None;
        for subset in (0..remaining.len()).combinations(size) {
            let lc = f.last().unwrap().clone();
            let mut g = vec![lc];
            for &i in &subset {
                g = mod_sym(&poly::mul(&g, &remaining[i]), &modulus);
            }
            let g = poly::primitive(&g);
            if let Some(q) = poly::exact_div(&f, &g) {
                found = Some((subset, q));
                break;
            }
        }
        match found {
            Some((subset, q)) => {
                count += 1;
                f = q;
                for i in subset.into_iter().rev() {
                    remaining.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if f.len() > 1 {
        count += 1;
    }
    count
}

/// Symmetric residues in `(-m/2, m/2]`.
fn mod_sym(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    poly::trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn mod_pos(a: &ZPoly, m: &BigInt) -> ZPoly {
    poly::trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

/// Lifts monic factors with `f = lc(f) * prod g_i (mod p)` to `modulus`.
fn hensel_lift(f: &ZPoly, p: u64, factors: &[Vec<u64>], modulus: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut target = mod_pos(f, modulus);
    let mut rest: Vec<Vec<u64>> = factors.to_vec();
    while rest.len() > 1 {
        let g = rest.remove(0);
        let h = rest.iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
        let (gl, hl) = lift_pair(&target, p, &g, &h, modulus);
        out.push(gl);
        target = hl;
    }
    // last factor: monic associate of what is left
    let lc = target.last().unwrap().clone();
    let inv = mod_inverse(&lc, modulus);
    out.push(mod_pos(&poly::scale(&target, &inv), modulus));
    out
}

/// Linear Hensel lifting of `f = lc * g * h (mod p)` with `g`, `h` monic.
fn lift_pair(f: &ZPoly, p: u64, g: &[u64], h: &[u64], modulus: &BigInt) -> (ZPoly, ZPoly) {
    let pb = BigInt::from(p);
    let lc = f.last().unwrap().clone();
    let lc_inv = fp_inv((&lc % &pb).to_u64().unwrap() % p, p);
    let t = fp_bezout(g, h, p).1;
    let mut gz: ZPoly = g.iter().map(|&c| BigInt::from(c)).collect();
    let mut hz: ZPoly = h.iter().map(|&c| BigInt::from(c)).collect();
    let mut m = pb.clone();
    while &m < modulus {
        let prod = poly::scale(&poly::mul(&gz, &hz), &lc);
        let err = poly::sub(f, &prod);
        let e: Vec<u64> = fp_trim(
            err.iter()
                .map(|c| {
                    let q = c.div_floor(&m);
                    (q.mod_floor(&pb)).to_u64().unwrap() * lc_inv % p
                })
                .collect(),
        );
        // dg = e * t mod g, dh = (e - dg * h) / g
        let dg = fp_rem(&fp_mul(&e, &t, p), g, p);
        let num = fp_sub(&e, &fp_mul(&dg, h, p), p);
        let (dh, r) = fp_divrem(&num, g, p);
        debug_assert!(r.is_empty());
        let lift = |a: &ZPoly, d: &[u64]| {
            let dz: ZPoly = d.iter().map(|&c| BigInt::from(c) * &m).collect();
            poly::add(a, &dz)
        };
        gz = lift(&gz, &dg);
        hz = lift(&hz, &dh);
        m *= &pb;
    }
    (mod_pos(&gz, modulus), mod_pos(&hz, modulus))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

// polynomials over F_p, lowest degree first, trimmed

fn reduce(f: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    fp_trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_monic(a: &[u64], p: u64) -> Vec<u64> {
    let inv = fp_inv(*a.last().unwrap(), p);
    a.iter().map(|&c| c * inv % p).collect()
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = (out[i] + p - c) % p;
    }
    fp_trim(out)
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = fp_inv(*b.last().unwrap(), p);
    let mut q = vec![0; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * bc % p) % p;
        }
    }
    (fp_trim(q), fp_trim(r))
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    fp_divrem(a, b, p).1
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        fp_monic(&a, p)
    }
}

fn fp_derivative(a: &[u64], p: u64) -> Vec<u64> {
    fp_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

/// `s * g + t * h = 1` over F_p for coprime `g`, `h`.
fn fp_bezout(g: &[u64], h: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (g.to_vec(), h.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    // r0 is a nonzero constant
    let inv = fp_inv(r0[0], p);
    let sc = |a: Vec<u64>| fp_trim(a.into_iter().map(|c| c * inv % p).collect());
    (sc(s0), sc(t0))
}

/// Monic irreducible factors of a monic square-free polynomial over F_p.
fn berlekamp(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    // rows: x^(p*i) mod f
    let xp = fp_powmod(&[0, 1], p, f, p);
    let mut rows = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = fp_rem(&fp_mul(&cur, &xp, p), f, p);
    }
    // Q - I, kernel of v -> v (Q - I)
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    let basis = left_kernel(&rows, n, p);
    let r = basis.len();
    let mut factors = vec![f.to_vec()];
    if r == 1 {
        return factors;
    }
    for v in basis.iter().skip(1) {
        let v = fp_trim(v.clone());
        let mut next = Vec::new();
        for g in factors {
            if g.len() <= 2 {
                next.push(g);
                continue;
            }
            let mut g = g;
            for s in 0..p {
                let shifted = fp_sub(&v, &[s], p);
                let d = fp_gcd(&g, &shifted, p);
                if d.len() > 1 && d.len() < g.len() {
                    g = fp_divrem(&g, &d, p).0;
                    next.push(d);
                }
                if g.len() <= 2 {
                    break;
                }
            }
            next.push(fp_monic(&g, p));
        }
        factors = next;
        if factors.len() == r {
            break;
        }
    }
    factors.sort();
    factors
}

fn fp_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = fp_rem(&fp_mul(&r, &b, p), m, p);
        }
        b = fp_rem(&fp_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

/// Basis of `{v : v M = 0}` for an `n x n` matrix over F_p.
fn left_kernel(m: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    // transpose so we solve M^T v = 0 by row reduction
    let mut a: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let mut pivot_col = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = fp_inv(a[row][col], p);
        for c in 0..n {
            a[row][c] = a[row][c] * inv % p;
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let k = a[r][col];
                for c in 0..n {
                    a[r][c] = (a[r][c] + p - k * a[row][c] % p) % p;
                }
            }
        }
        pivot_col[row] = col;
        row += 1;
    }
    let pivots: Vec<usize> = pivot_col[..row].to_vec();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![0u64; n];
        v[fc] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[r][fc]) % p;
        }
        basis.push(v);
    }
    // the constant vector first so splitting starts from a nontrivial one
    basis.sort_by_key(|v| v.iter().rposition(|&c| c != 0));
    basis
}
