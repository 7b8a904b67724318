//! Dense univariate polynomial helpers over Z and Q, backing the binary-form
//! operations: primitive PRS (subresultant-style) gcd, exact division and
//! Yun squarefree decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::frac::Frac;

/// Coefficients low to high, no trailing zeros (empty = zero polynomial).
pub type ZPoly = Vec<BigInt>;

pub fn trim(mut p: ZPoly) -> ZPoly {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn degree(p: &ZPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn content(p: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
    }
    g
}

pub fn primitive_part(p: &ZPoly) -> ZPoly {
    let c = content(p);
    if c.is_zero() || c.is_one() {
        return p.clone();
    }
    p.iter().map(|x| x / &c).collect()
}

pub fn derivative(p: &ZPoly) -> ZPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

fn mul_scalar(p: &ZPoly, k: &BigInt) -> ZPoly {
    trim(p.iter().map(|c| c * k).collect())
}

fn sub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn shift_mul(p: &ZPoly, k: usize) -> ZPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); k];
    out.extend(p.iter().cloned());
    out
}

/// Pseudo-remainder of a by b (b nonzero).
fn pseudo_rem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let db = degree(b).expect("nonzero divisor");
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r.last().unwrap().clone();
        // r <- lb*r - lr*x^(dr-db)*b
        r = sub(
            &mul_scalar(&r, &lb),
            &mul_scalar(&shift_mul(b, dr - db), &lr),
        );
    }
    r
}

/// Primitive PRS gcd over Z (gcd of contents times gcd of primitive parts).
pub fn gcd_z(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() {
        return normalize_sign(b.clone());
    }
    if b.is_empty() {
        return normalize_sign(a.clone());
    }
    let ca = content(a);
    let cb = content(b);
    let cg = ca.gcd(&cb);
    let mut p = primitive_part(a);
    let mut q = primitive_part(b);
    if degree(&p) < degree(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_rem(&p, &q);
        if r.is_empty() {
            break;
        }
        p = q;
        q = primitive_part(&r);
    }
    normalize_sign(mul_scalar(&q, &cg))
}

fn normalize_sign(p: ZPoly) -> ZPoly {
    if p.last().map(|c| c.is_negative()).unwrap_or(false) {
        p.iter().map(|c| -c).collect()
    } else {
        p
    }
}

// Exact rational division helpers used by Yun's algorithm.

pub type QPoly = Vec<Frac>;

pub fn q_trim(mut p: QPoly) -> QPoly {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn to_q(p: &ZPoly) -> QPoly {
    p.iter().map(|c| Frac::from_integer(c.clone())).collect()
}

pub fn q_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    let mut q = vec![Frac::zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = r.last().unwrap() / &lb;
        q[dr - db] = coef.clone();
        for i in 0..=db {
            let upd = &b[i] * &coef;
            r[dr - db + i] -= upd;
        }
        r = q_trim(r);
        if r.is_empty() {
            break;
        }
    }
    (q_trim(q), r)
}

pub fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Frac::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    q_trim(out)
}

fn q_derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    q_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Frac::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    // via the integer PRS on cleared coefficients
    let clear = |p: &QPoly| -> ZPoly {
        let mut l = BigInt::one();
        for c in p {
            l = l.lcm(c.denom());
        }
        trim(p.iter().map(|c| c.numer() * (&l / c.denom())).collect())
    };
    let g = gcd_z(&clear(a), &clear(b));
    to_q(&g)
}

/// Yun squarefree decomposition: `u = prod_i out[i]^(i+1)` with each factor
/// squarefree, pairwise coprime, returned monic-free (integer primitive).
pub fn squarefree_decomposition(u: &QPoly) -> Vec<QPoly> {
    if u.len() <= 1 {
        return Vec::new();
    }
    let du = q_derivative(u);
    let g = q_gcd(u, &du);
    if g.len() <= 1 {
        return vec![u.clone()];
    }
    let mut out = Vec::new();
    let (mut w, r) = q_divrem(u, &g);
    debug_assert!(r.is_empty());
    let (mut y, r) = q_divrem(&du, &g);
    debug_assert!(r.is_empty());
    loop {
        let z = q_trim(sub_q(&y, &q_derivative(&w)));
        if z.is_empty() {
            out.push(w);
            break;
        }
        let gi = q_gcd(&w, &z);
        out.push(gi.clone());
        let (w2, r) = q_divrem(&w, &gi);
        debug_assert!(r.is_empty());
        let (y2, r) = q_divrem(&z, &gi);
        debug_assert!(r.is_empty());
        w = w2;
        y = y2;
    }
    out
}

fn sub_q(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![Frac::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    q_trim(out)
}
