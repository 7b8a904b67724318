//! Binary forms in two homogeneous variables, written in the pencil
//! coordinates of a line projection. Coefficient `i` multiplies
//! `u^(d-i) v^i`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frac::{frac_to_c64, Frac};
use crate::matrix::FracMat;
use crate::numeric::{self, P1Point};
use crate::poly::{Expo, Poly};
use crate::univar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinForm {
    coeffs: Vec<Frac>,
}

impl BinForm {
    pub fn new(coeffs: Vec<Frac>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs degree >= 0");
        BinForm { coeffs }
    }

    pub fn zero(degree: u32) -> Self {
        BinForm {
            coeffs: vec![Frac::zero(); degree as usize + 1],
        }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[Frac] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Frac {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Build from a polynomial supported on two variables `(u, v)`.
    pub fn from_poly(p: &Poly, u: usize, v: usize, degree: u32) -> Result<Self> {
        let mut coeffs = vec![Frac::zero(); degree as usize + 1];
        for (e, c) in p.terms() {
            let (eu, ev) = (e.0[u], e.0[v]);
            if eu + ev != e.total() || eu + ev != degree {
                return Err(Error::Internal(
                    "polynomial is not a binary form of the stated degree".into(),
                ));
            }
            coeffs[ev as usize] = c.clone();
        }
        Ok(BinForm { coeffs })
    }

    /// Embed as a polynomial in `nvars` variables at positions `(u, v)`.
    pub fn to_poly(&self, nvars: usize, u: usize, v: usize) -> Poly {
        let d = self.degree();
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0u32; nvars];
            e[u] = d - i as u32;
            e[v] = i as u32;
            terms.push((Expo(e), c.clone()));
        }
        Poly::from_terms(nvars, terms)
    }

    pub fn add(&self, other: &BinForm) -> Result<BinForm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                got: other.degree(),
            });
        }
        Ok(BinForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &Frac) -> BinForm {
        BinForm {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &BinForm) -> BinForm {
        let d = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![Frac::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        BinForm { coeffs: out }
    }

    pub fn eval(&self, u: &Frac, v: &Frac) -> Frac {
        let d = self.degree() as usize;
        let mut acc = Frac::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut t = c.clone();
            for _ in 0..(d - i) {
                t *= u;
            }
            for _ in 0..i {
                t *= v;
            }
            acc += t;
        }
        acc
    }

    /// `other = r * self` for one scalar `r`.
    pub fn scalar_ratio(&self, other: &BinForm) -> Option<Frac> {
        if self.degree() != other.degree() {
            return None;
        }
        let i = self.coeffs.iter().position(|c| !c.is_zero())?;
        let r = &other.coeffs[i] / &self.coeffs[i];
        if &self.scale(&r) == other {
            Some(r)
        } else {
            None
        }
    }

    /// Multiplicity of the root at `[1:0]` (power of `v` dividing) and at
    /// `[0:1]` (power of `u` dividing), plus the dehomogenized middle part.
    /// For the form written in coefficients of `u^(d-i) v^i`, the `v`-adic
    /// multiplicity is the number of leading zero coefficients.
    fn split_infinity(&self) -> (usize, usize, univar::QPoly) {
        let d = self.coeffs.len();
        let s = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if s == d {
            return (0, 0, Vec::new());
        }
        let t = self.coeffs.iter().rev().take_while(|c| c.is_zero()).count();
        // middle part as univariate in z = u/v: coefficient of z^k is the
        // coefficient of u^k, i.e. coeffs reversed
        let mid: Vec<Frac> = self.coeffs[s..d - t].iter().rev().cloned().collect();
        (s, t, mid)
    }

    /// Greatest common divisor as forms (projective roots with
    /// multiplicity, including the roots at `[1:0]` and `[0:1]`).
    pub fn gcd(&self, other: &BinForm) -> BinForm {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (s1, t1, m1) = self.split_infinity();
        let (s2, t2, m2) = other.split_infinity();
        let clear = |p: &univar::QPoly| -> univar::ZPoly {
            let mut l = BigInt::one();
            for c in p {
                l = l.lcm(c.denom());
            }
            univar::trim(p.iter().map(|c| c.numer() * (&l / c.denom())).collect())
        };
        let g = univar::gcd_z(&clear(&m1), &clear(&m2));
        let s = s1.min(s2);
        let t = t1.min(t2);
        // reassemble: g has coefficients of z^k = u^k; form coefficients are
        // reversed, padded with s leading and t trailing zeros
        let mut coeffs = vec![Frac::zero(); s];
        coeffs.extend(g.iter().rev().map(|c| Frac::from_integer(c.clone())));
        coeffs.extend(std::iter::repeat(Frac::zero()).take(t));
        BinForm { coeffs }
    }

    /// No repeated projective roots (including at infinity).
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let (s, t, mid) = self.split_infinity();
        if s > 1 || t > 1 {
            return false;
        }
        if mid.len() <= 1 {
            return true;
        }
        let clear = |p: &univar::QPoly| -> univar::ZPoly {
            let mut l = BigInt::one();
            for c in p {
                l = l.lcm(c.denom());
            }
            univar::trim(p.iter().map(|c| c.numer() * (&l / c.denom())).collect())
        };
        let zp = clear(&mid);
        let g = univar::gcd_z(&zp, &univar::derivative(&zp));
        univar::degree(&g) == Some(0)
    }

    /// Number of distinct projective roots.
    pub fn distinct_roots(&self) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let (s, t, mid) = self.split_infinity();
        let mut count = 0u32;
        if s > 0 {
            count += 1;
        }
        if t > 0 {
            count += 1;
        }
        if mid.len() > 1 {
            let clear = |p: &univar::QPoly| -> univar::ZPoly {
                let mut l = BigInt::one();
                for c in p {
                    l = l.lcm(c.denom());
                }
                univar::trim(p.iter().map(|c| c.numer() * (&l / c.denom())).collect())
            };
            let zp = clear(&mid);
            let g = univar::gcd_z(&zp, &univar::derivative(&zp));
            count += (univar::degree(&zp).unwrap() - univar::degree(&g).unwrap()) as u32;
        }
        count
    }

    /// Resultant via the Sylvester determinant on the declared degrees.
    /// Vanishes exactly when the two forms share a projective root.
    pub fn resultant(&self, other: &BinForm) -> Result<Frac> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroForm);
        }
        let m = self.degree() as usize;
        let n = other.degree() as usize;
        if m == 0 || n == 0 {
            // a nonzero constant shares no roots
            let c = if m == 0 {
                self.coeffs[0].clone()
            } else {
                other.coeffs[0].clone()
            };
            let other_deg = if m == 0 { n } else { m };
            let mut r = Frac::one();
            for _ in 0..other_deg {
                r *= &c;
            }
            return Ok(r);
        }
        let size = m + n;
        let mut mat = FracMat::zeros(size, size);
        for row in 0..n {
            for (k, c) in self.coeffs.iter().enumerate() {
                mat.set(row, row + k, c.clone());
            }
        }
        for row in 0..m {
            for (k, c) in other.coeffs.iter().enumerate() {
                mat.set(n + row, row + k, c.clone());
            }
        }
        mat.det()
    }

    /// Discriminant-style squarefreeness certificate: resultant of the two
    /// partial derivatives.
    pub fn partial_u(&self) -> BinForm {
        // d/du of sum c_i u^(d-i) v^i
        let d = self.degree() as usize;
        if d == 0 {
            return BinForm::new(vec![Frac::zero()]);
        }
        let mut out = vec![Frac::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i < d {
                out[i] = c * Frac::from_integer(BigInt::from((d - i) as u32));
            }
        }
        BinForm { coeffs: out }
    }

    pub fn partial_v(&self) -> BinForm {
        let d = self.degree() as usize;
        if d == 0 {
            return BinForm::new(vec![Frac::zero()]);
        }
        let mut out = vec![Frac::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out[i - 1] = c * Frac::from_integer(BigInt::from(i as u32));
            }
        }
        BinForm { coeffs: out }
    }

    /// If the form equals `mu * r^2` for some rational `mu != 0`, return the
    /// root `r` normalized to content one and positive first nonzero
    /// coefficient. Uses the squarefree decomposition so arbitrary even
    /// multiplicities are handled.
    pub fn square_root(&self) -> Result<Option<BinForm>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let d = self.degree();
        if d % 2 != 0 {
            return Err(Error::OddDegree(d));
        }
        if d == 0 {
            return Ok(Some(BinForm::new(vec![Frac::one()])));
        }
        let (s, t, mid) = self.split_infinity();
        if s % 2 != 0 || t % 2 != 0 {
            return Ok(None);
        }
        let mut root_mid: univar::QPoly = vec![Frac::one()];
        if mid.len() > 1 {
            let dec = univar::squarefree_decomposition(&mid);
            for (idx, factor) in dec.iter().enumerate() {
                let mult = idx + 1;
                if factor.len() <= 1 {
                    continue;
                }
                if mult % 2 != 0 {
                    return Ok(None);
                }
                let mut pow = vec![Frac::one()];
                for _ in 0..mult / 2 {
                    pow = univar::q_mul(&pow, factor);
                }
                root_mid = univar::q_mul(&root_mid, &pow);
            }
        }
        // reassemble the form: reverse to form coefficients, pad with
        // halved infinity multiplicities
        let mut coeffs = vec![Frac::zero(); s / 2];
        coeffs.extend(root_mid.iter().rev().cloned());
        coeffs.extend(std::iter::repeat(Frac::zero()).take(t / 2));
        let mut root = BinForm { coeffs };
        root.normalize_mut();
        // verify exactly
        let sq = root.mul(&root);
        match sq.scalar_ratio(self) {
            Some(_) => Ok(Some(root)),
            None => Ok(None),
        }
    }

    /// Content one, first nonzero coefficient positive.
    pub fn normalize_mut(&mut self) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return;
        }
        let lead = ints.iter().find(|x| !x.is_zero()).unwrap();
        let scale = if lead.is_negative() { -g } else { g };
        self.coeffs = ints
            .into_iter()
            .map(|x| Frac::from_integer(x / &scale))
            .collect();
    }

    /// All projective roots over C, roots at `[1:0]` included with
    /// multiplicity.
    pub fn complex_roots(&self) -> Result<Vec<P1Point>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let (s, t, mid) = self.split_infinity();
        let mut out: Vec<P1Point> = Vec::new();
        for _ in 0..s {
            out.push(P1Point::infinity());
        }
        for _ in 0..t {
            out.push(P1Point::new(
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ));
        }
        if mid.len() > 1 {
            let cs: Vec<Complex64> = mid.iter().map(frac_to_c64).collect();
            let roots = numeric::roots_durand_kerner(&cs)?;
            for z in roots {
                out.push(P1Point::new(z, Complex64::new(1.0, 0.0)));
            }
        }
        Ok(out)
    }
}

impl std::fmt::Display for BinForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_poly(2, 0, 1))
    }
}

impl serde::Serialize for BinForm {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.coeffs.iter().map(crate::frac::format_frac).collect();
        let mut st = serializer.serialize_struct("BinForm", 2)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}
