//! Certified rank and kernel computation through modular images.
//!
//! A mod-p elimination can only lose rank, so `rank_p <= rank_Q` always
//! holds; a rational kernel basis verified exactly against the matrix gives
//! the matching upper bound. Kernel vectors are reconstructed from CRT
//! residues of the canonical mod-p reduced echelon form, adding primes until
//! rational reconstruction stabilizes and verification passes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::frac::Frac;
use crate::matrix::{normalize_vector, FracMat};

const PRIME_START: u64 = (1 << 31) - 1;
const MAX_PRIMES: usize = 256;

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    fn new() -> Self {
        PrimeStream { next: PRIME_START }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 2 {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Map to residues; `None` when some denominator vanishes mod p.
fn mat_mod_p(m: &FracMat, p: u64) -> Option<Vec<Vec<u64>>> {
    let pb = BigInt::from(p);
    let mut out = Vec::with_capacity(m.nrows());
    for i in 0..m.nrows() {
        let mut row = Vec::with_capacity(m.ncols());
        for j in 0..m.ncols() {
            let f = m.get(i, j);
            let d = f.denom().mod_floor(&pb).to_u64().unwrap();
            if d == 0 {
                return None;
            }
            let n = f.numer().mod_floor(&pb).to_u64().unwrap();
            row.push(mul_mod(n, inv_mod(d, p), p));
        }
        out.push(row);
    }
    Some(out)
}

struct Rref {
    rank: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

fn rref_mod_p(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> Rref {
    let rows = m.len();
    let mut r = 0usize;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for j in c..cols {
            m[r][j] = mul_mod(m[r][j], inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in c..cols {
                    let sub = mul_mod(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        rank: r,
        pivots,
        rows: m,
    }
}

/// Canonical kernel basis mod p: one vector per free column, unit at the
/// free column, minus the rref coefficient at each pivot.
fn kernel_mod_p(rref: &Rref, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut is_pivot = vec![false; cols];
    for &c in &rref.pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for fc in 0..cols {
        if is_pivot[fc] {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[fc] = 1;
        for (k, &pc) in rref.pivots.iter().enumerate() {
            let coef = rref.rows[k][fc];
            if coef != 0 {
                v[pc] = p - coef;
            }
        }
        out.push(v);
    }
    out
}

/// Rational reconstruction of `x mod m`: find p/q with |p|, q <= sqrt(m/2).
fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<Frac> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::one() && !r1.is_zero() {
        // non-reduced candidate signals an unlucky modulus
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    Some(Frac::new(num, den))
}

struct Accum {
    prime_count: usize,
    modulus: BigInt,
    pivots: Vec<usize>,
    rank: usize,
    // CRT residues per kernel vector per coordinate
    residues: Vec<Vec<BigInt>>,
}

fn crt_pair(a: &BigInt, m1: &BigInt, b: u64, p: u64) -> BigInt {
    // x = a mod m1, x = b mod p
    let pb = BigInt::from(p);
    let a_mod_p = a.mod_floor(&pb).to_u64().unwrap();
    let diff = (b + p - a_mod_p) % p;
    let m1_inv = inv_mod(m1.mod_floor(&pb).to_u64().unwrap(), p);
    let k = mul_mod(diff, m1_inv, p);
    a + m1 * BigInt::from(k)
}

fn verify_kernel(m: &FracMat, v: &[Frac]) -> bool {
    match m.mul_vec(v) {
        Ok(out) => out.iter().all(|x| x.is_zero()),
        Err(_) => false,
    }
}

enum Outcome {
    Certified(usize, Vec<Vec<Frac>>),
    FullRank(usize),
}

fn run(m: &FracMat, need_kernel: bool) -> Outcome {
    let cols = m.ncols();
    let maxrank = m.nrows().min(cols);
    let mut acc: Option<Accum> = None;
    let mut primes = PrimeStream::new();
    for _ in 0..MAX_PRIMES {
        let Some(p) = primes.next() else { break };
        let Some(rows) = mat_mod_p(m, p) else {
            continue;
        };
        let rref = rref_mod_p(rows, cols, p);
        if rref.rank == cols {
            // kernel is empty, certified by the dimension bound
            return Outcome::Certified(cols, Vec::new());
        }
        if !need_kernel && rref.rank == maxrank {
            // lower bound meets the dimension bound
            return Outcome::FullRank(maxrank);
        }
        let replace = match &acc {
            None => true,
            Some(a) => rref.rank > a.rank || (rref.rank == a.rank && rref.pivots < a.pivots),
        };
        let consistent = matches!(&acc, Some(a) if a.rank == rref.rank && a.pivots == rref.pivots);
        if replace {
            let kb = kernel_mod_p(&rref, cols, p);
            acc = Some(Accum {
                prime_count: 1,
                modulus: BigInt::from(p),
                pivots: rref.pivots,
                rank: rref.rank,
                residues: kb
                    .into_iter()
                    .map(|v| v.into_iter().map(BigInt::from).collect())
                    .collect(),
            });
        } else if consistent {
            let a = acc.as_mut().unwrap();
            let kb = kernel_mod_p(&rref, cols, p);
            for (vec_acc, vec_p) in a.residues.iter_mut().zip(kb) {
                for (slot, rp) in vec_acc.iter_mut().zip(vec_p) {
                    *slot = crt_pair(slot, &a.modulus, rp, p);
                }
            }
            a.modulus *= BigInt::from(p);
            a.prime_count += 1;
        } else {
            // lower-rank or different pivot structure: unlucky prime, skip
            continue;
        }
        let a = acc.as_ref().unwrap();
        if a.prime_count >= 2 || a.modulus.bits() > 40 {
            // attempt reconstruction + exact verification
            let mut basis = Vec::with_capacity(a.residues.len());
            let mut ok = true;
            for vres in &a.residues {
                let mut v = Vec::with_capacity(cols);
                for r in vres {
                    match rational_reconstruct(r, &a.modulus) {
                        Some(f) => v.push(f),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
                if !verify_kernel(m, &v) {
                    ok = false;
                    break;
                }
                normalize_vector(&mut v);
                basis.push(v);
            }
            if ok {
                return Outcome::Certified(a.rank, basis);
            }
        }
    }
    // fall back to fraction-free elimination; unreachable in practice
    let (rank, kernel) = m.kernel_and_rank();
    Outcome::Certified(rank, kernel)
}

pub fn rank_certified(m: &FracMat) -> usize {
    match run(m, false) {
        Outcome::Certified(r, _) => r,
        Outcome::FullRank(r) => r,
    }
}

pub fn kernel_certified(m: &FracMat) -> Vec<Vec<Frac>> {
    match run(m, true) {
        Outcome::Certified(_, k) => k,
        Outcome::FullRank(_) => unreachable!("kernel requests never take the rank-only exit"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::{fint, frac};
    use rand::{Rng, SeedableRng};

    #[test]
    fn primes_stream_starts_at_mersenne() {
        let mut s = PrimeStream::new();
        assert_eq!(s.next(), Some((1 << 31) - 1));
    }

    #[test]
    fn reconstruction_small() {
        // recover -3/7 from its residue
        let m = BigInt::from(1_000_003u64) * BigInt::from(999_983u64);
        let residue = ((&m - BigInt::from(3)) * inv_big(&BigInt::from(7), &m)).mod_floor(&m);
        let got = rational_reconstruct(&residue, &m).unwrap();
        assert_eq!(got, frac(-3, 7));
    }

    fn inv_big(a: &BigInt, m: &BigInt) -> BigInt {
        // extended euclid
        let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
        let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
        while !r1.is_zero() {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let t2 = &t0 - &q * &t1;
            r0 = r1;
            r1 = r2;
            t0 = t1;
            t1 = t2;
        }
        t0.mod_floor(m)
    }

    #[test]
    fn certified_matches_bareiss_on_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let r = rng.gen_range(1..=8);
            let c = rng.gen_range(1..=8);
            let m = FracMat::from_rows(
                (0..r)
                    .map(|_| (0..c).map(|_| fint(rng.gen_range(-4..=4))).collect())
                    .collect(),
            )
            .unwrap();
            let (rank, _) = m.kernel_and_rank();
            assert_eq!(rank_certified(&m), rank);
            for v in kernel_certified(&m) {
                assert!(m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
            }
        }
    }
}
