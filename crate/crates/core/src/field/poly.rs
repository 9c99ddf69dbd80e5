//! Dense polynomials over GF(p), constant term first. Only what field
//! construction needs: reduction, modular powering, gcd and Rabin's
//! irreducibility test.

pub(crate) type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let f = r[r.len() - 1] * lead_inv % p;
        for (i, &bc) in b.iter().enumerate() {
            let t = f * bc % p;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, f, p)
}

pub(crate) fn pow_poly_mod(base: &[u64], mut exp: u128, f: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test for a monic `f` of degree `m`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let frob = |k: usize| pow_poly_mod(&x, (p as u128).pow(k as u32), f, p);
    if sub(&frob(m), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for l in prime_factors(m as u64) {
        let h = sub(&frob(m / l as usize), &x, p);
        let g = gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
