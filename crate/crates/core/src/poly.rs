//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a canonical graded lexicographic order (higher total
//! degree first, ties broken with `x0 > x1 > ...`), which makes
//! serialization and matrix construction deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frac::{self, frac_to_c64, Frac};
use crate::matrix::LinearChange;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Expo(pub Vec<u32>);

impl Expo {
    pub fn zero(nvars: usize) -> Self {
        Expo(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Expo(e)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Expo) -> Expo {
        Expo(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

// Graded lex with x0 > x1 > ...: compare total degree first, then the first
// differing exponent decides (larger exponent on the earlier variable wins).
impl Ord for Expo {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total().cmp(&other.total()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `nvars` variables, leading term
/// first (canonical descending order).
pub fn graded_basis(nvars: usize, d: u32) -> Vec<Expo> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(out: &mut Vec<Expo>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(Expo(cur.clone()));
            return;
        }
        // descending: put as much as possible on the earliest variable first
        for k in (0..=left).rev() {
            cur[pos] = k;
            rec(out, cur, pos + 1, left - k);
        }
        cur[pos] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Expo(vec![]));
        }
        return out;
    }
    rec(&mut out, &mut cur, 0, d);
    out
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Expo, Frac>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Frac) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Expo::zero(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Frac::one())
    }

    pub fn variable(nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::VarOutOfRange(i, nvars));
        }
        let mut p = Poly::zero(nvars);
        p.terms.insert(Expo::var(nvars, i), Frac::one());
        Ok(p)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Expo, Frac)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.0.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms in canonical descending order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Frac)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &Expo) -> Frac {
        self.terms.get(e).cloned().unwrap_or_else(Frac::zero)
    }

    fn add_term(&mut self, e: Expo, c: Frac) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.total()).max()
    }

    /// The common degree of all terms, if the polynomial is homogeneous and
    /// nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.total();
        if it.all(|e| e.total() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn require_homogeneous(&self, degree: u32) -> Result<()> {
        match self.homogeneous_degree() {
            Some(d) if d == degree => Ok(()),
            Some(d) => Err(Error::DegreeMismatch {
                expected: degree,
                got: d,
            }),
            None if self.is_zero() => Err(Error::ZeroPolynomial),
            None => Err(Error::NotHomogeneous),
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch(self.nvars, other.nvars));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Frac) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch(self.nvars, other.nvars));
        }
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, e: &Expo, c: &Frac) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            out.add_term(e1.mul(e), c1 * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self).expect("same nvars");
        }
        out
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Poly> {
        if var >= self.nvars {
            return Err(Error::VarOutOfRange(var, self.nvars));
        }
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.0[var] -= 1;
            out.add_term(e2, c * frac::fint(k as i64));
        }
        Ok(out)
    }

    /// Substitute `x_i -> sum_j T[i][j] y_j`, i.e. compose with the linear
    /// change of coordinates given by `t`.
    pub fn apply_linear_change(&self, t: &LinearChange) -> Result<Poly> {
        let n = t.dim();
        if n != self.nvars {
            return Err(Error::NvarsMismatch(self.nvars, n));
        }
        // linear form for each old variable
        let rows: Vec<Poly> = (0..n)
            .map(|i| {
                let mut p = Poly::zero(n);
                for j in 0..n {
                    p.add_term(Expo::var(n, j), t.mat().get(i, j).clone());
                }
                p
            })
            .collect();
        // memoized powers
        let maxes: Vec<u32> = (0..n)
            .map(|i| self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0))
            .collect();
        let mut pows: Vec<Vec<Poly>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = vec![Poly::one(n)];
            for k in 1..=maxes[i] {
                let next = v[(k - 1) as usize].mul(&rows[i])?;
                v.push(next);
            }
            pows.push(v);
        }
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut prod = Poly::constant(n, c.clone());
            for i in 0..n {
                if e.0[i] > 0 {
                    prod = prod.mul(&pows[i][e.0[i] as usize])?;
                }
            }
            out = out.add(&prod)?;
        }
        Ok(out)
    }

    pub fn eval(&self, pt: &[Frac]) -> Result<Frac> {
        if pt.len() != self.nvars {
            return Err(Error::NvarsMismatch(self.nvars, pt.len()));
        }
        let mut acc = Frac::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    v *= &pt[i];
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn eval_c64(&self, pt: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut v = frac_to_c64(c);
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    v *= pt[i];
                }
            }
            acc += v;
        }
        acc
    }

    /// Collect the coefficient of `x_var^k` as a polynomial in the remaining
    /// variables (same ambient variable count, `x_var` removed from every
    /// exponent).
    pub fn coeff_of_power(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.0[var] == k {
                let mut e2 = e.clone();
                e2.0[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    pub fn max_power(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.0[var]).max().unwrap_or(0)
    }

    /// Set one variable to zero.
    pub fn set_var_zero(&self, var: usize) -> Poly {
        self.coeff_of_power(var, 0)
    }

    /// Reinterpret in a smaller variable set. `keep[j]` is the old index of
    /// the new variable `j`; errors if any discarded variable occurs.
    pub fn drop_vars(&self, keep: &[usize]) -> Result<Poly> {
        let mut out = Poly::zero(keep.len());
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; keep.len()];
            let mut seen = 0u32;
            for (j, &old) in keep.iter().enumerate() {
                e2[j] = e.0[old];
                seen += e.0[old];
            }
            if seen != e.total() {
                return Err(Error::Internal(
                    "drop_vars: term uses a discarded variable".into(),
                ));
            }
            out.add_term(Expo(e2), c.clone());
        }
        Ok(out)
    }

    /// Embed in a larger variable set, sending variable `j` to `map[j]`.
    pub fn lift_vars(&self, new_nvars: usize, map: &[usize]) -> Result<Poly> {
        if map.len() != self.nvars {
            return Err(Error::NvarsMismatch(self.nvars, map.len()));
        }
        let mut out = Poly::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; new_nvars];
            for (j, &new) in map.iter().enumerate() {
                if new >= new_nvars {
                    return Err(Error::VarOutOfRange(new, new_nvars));
                }
                e2[new] = e.0[j];
            }
            out.add_term(Expo(e2), c.clone());
        }
        Ok(out)
    }

    /// `other = r * self` for a single rational scalar `r`.
    pub fn scalar_ratio(&self, other: &Poly) -> Option<Frac> {
        if self.is_zero() {
            return if other.is_zero() {
                Some(Frac::one())
            } else {
                None
            };
        }
        let (e0, c0) = self.terms().next()?;
        let r = other.coeff(e0) / c0;
        if self.scale(&r) == *other {
            Some(r)
        } else {
            None
        }
    }

    /// Exact division by a linear form. Returns `None` when the division
    /// leaves a remainder.
    pub fn div_by_linear(&self, linear: &Poly) -> Result<Option<Poly>> {
        if linear.nvars != self.nvars {
            return Err(Error::NvarsMismatch(self.nvars, linear.nvars));
        }
        linear.require_homogeneous(1)?;
        let n = self.nvars;
        // pivot variable of the divisor
        let pivot = (0..n)
            .find(|&i| !linear.coeff(&Expo::var(n, i)).is_zero())
            .ok_or(Error::ZeroPolynomial)?;
        // change z_pivot = linear(x), z_i = x_i elsewhere; invertible
        let mut rows = Vec::new();
        for i in 0..n {
            if i == pivot {
                let r: Vec<Frac> = (0..n).map(|j| linear.coeff(&Expo::var(n, j))).collect();
                rows.push(r);
            } else {
                let mut r = vec![Frac::zero(); n];
                r[i] = Frac::one();
                rows.push(r);
            }
        }
        let a = LinearChange::new(crate::matrix::FracMat::from_rows(rows)?)?;
        let back = a.inverse();
        let q = self.apply_linear_change(&back)?;
        // all terms must be divisible by z_pivot now
        let mut quotient = Poly::zero(n);
        for (e, c) in &q.terms {
            if e.0[pivot] == 0 {
                return Ok(None);
            }
            let mut e2 = e.clone();
            e2.0[pivot] -= 1;
            quotient.add_term(e2, c.clone());
        }
        Ok(Some(quotient.apply_linear_change(&a)?))
    }

    /// Parse expressions like `3*x0^2*x1 - 1/2*x4^3 + 7`.
    pub fn parse(nvars: usize, s: &str) -> Result<Poly> {
        let mut out = Poly::zero(nvars);
        let bytes: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut i = 0usize;
        let n = bytes.len();
        if n == 0 {
            return Ok(out);
        }
        while i < n {
            let mut sign = Frac::one();
            while i < n && (bytes[i] == '+' || bytes[i] == '-') {
                if bytes[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            }
            if i >= n {
                return Err(Error::Parse("trailing sign".into()));
            }
            let term_start = i;
            // coefficient
            let mut coeff = Frac::one();
            if bytes[i].is_ascii_digit() {
                let start = i;
                while i < n && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let mut numtxt: String = bytes[start..i].iter().collect();
                if i < n && bytes[i] == '/' {
                    i += 1;
                    let ds = i;
                    while i < n && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    numtxt.push('/');
                    numtxt.extend(&bytes[ds..i]);
                }
                coeff = frac::parse_frac(&numtxt)?;
            }
            // variables
            let mut e = Expo::zero(nvars);
            loop {
                if i < n && bytes[i] == '*' {
                    i += 1;
                }
                if i < n && bytes[i] == 'x' {
                    i += 1;
                    let start = i;
                    while i < n && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let idx: usize = bytes[start..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| Error::Parse("bad variable index".into()))?;
                    if idx >= nvars {
                        return Err(Error::VarOutOfRange(idx, nvars));
                    }
                    let mut k = 1u32;
                    if i < n && bytes[i] == '^' {
                        i += 1;
                        let ps = i;
                        while i < n && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                        k = bytes[ps..i]
                            .iter()
                            .collect::<String>()
                            .parse()
                            .map_err(|_| Error::Parse("bad exponent".into()))?;
                    }
                    e.0[idx] += k;
                } else {
                    break;
                }
            }
            if i == term_start {
                return Err(Error::Parse(format!(
                    "unexpected character {:?} at position {i}",
                    bytes[i]
                )));
            }
            out.add_term(e, sign * coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c < &Frac::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.total() == 0;
            let unit = mag.is_one();
            if !unit || is_const {
                if mag.denom().is_one() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}", mag)?;
                }
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut started = false;
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if started {
                    write!(f, "*")?;
                }
                started = true;
                if k == 1 {
                    write!(f, "x{i}")?;
                } else {
                    write!(f, "x{i}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a Poly);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.terms.len()))?;
                for (e, c) in self.0.terms() {
                    seq.serialize_element(&(frac::format_frac(c), &e.0))?;
                }
                seq.end()
            }
        }
        let mut st = serializer.serialize_struct("Poly", 2)?;
        st.serialize_field("nvars", &self.nvars)?;
        st.serialize_field("terms", &Terms(self))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            nvars: usize,
            terms: Vec<RawTerm>,
        }
        struct RawTerm(String, Vec<u32>);
        impl<'de> Deserialize<'de> for RawTerm {
            fn deserialize<D: Deserializer<'de>>(
                deserializer: D,
            ) -> std::result::Result<Self, D::Error> {
                struct V;
                impl<'de> Visitor<'de> for V {
                    type Value = RawTerm;
                    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                        write!(f, "a [coefficient, exponents] pair")
                    }
                    fn visit_seq<A: SeqAccess<'de>>(
                        self,
                        mut seq: A,
                    ) -> std::result::Result<RawTerm, A::Error> {
                        let c: String = seq
                            .next_element()?
                            .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                        let e: Vec<u32> = seq
                            .next_element()?
                            .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                        Ok(RawTerm(c, e))
                    }
                }
                deserializer.deserialize_seq(V)
            }
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut p = Poly::zero(raw.nvars);
        for RawTerm(c, e) in raw.terms {
            if e.len() != raw.nvars {
                return Err(de::Error::custom("exponent length does not match nvars"));
            }
            let coeff = frac::parse_frac(&c).map_err(de::Error::custom)?;
            if coeff.is_zero() {
                return Err(de::Error::custom("zero coefficient stored"));
            }
            p.add_term(Expo(e), coeff);
        }
        Ok(p)
    }
}
