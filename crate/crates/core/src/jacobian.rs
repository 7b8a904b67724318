//! Graded Jacobian (Milnor) rings of hypersurfaces.
//!
//! For a homogeneous `F` in `k` variables, the degree-`d` piece of the
//! Jacobian ideal is spanned by monomial multiples of the partial
//! derivatives; quotient dimensions reduce to exact ranks. Smoothness is the
//! Artinian criterion: the quotient vanishes one degree past the socle
//! `k (deg F - 2)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frac::{fint, Frac};
use crate::matrix::{FracMat, LinearChange};
use crate::poly::{graded_basis, Expo, Poly};

/// The partial derivatives of `F`, in variable order.
pub fn jacobian_generators(f: &Poly) -> Result<Vec<Poly>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    (0..f.nvars()).map(|i| f.partial_derivative(i)).collect()
}

/// Degree-`d` monomial basis together with the relation matrix whose column
/// space is the degree-`d` piece of the Jacobian ideal.
pub fn relation_matrix(f: &Poly, d: u32) -> Result<(Vec<Expo>, FracMat)> {
    let gens = jacobian_generators(f)?;
    let degf = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let monos = graded_basis(f.nvars(), d);
    let index: std::collections::HashMap<&Expo, usize> =
        monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    if degf < 1 || d + 1 < degf {
        return Ok((monos.clone(), FracMat::zeros(monos.len(), 0)));
    }
    let mult_deg = d + 1 - degf;
    let mults = graded_basis(f.nvars(), mult_deg);
    let mut cols: Vec<Vec<Frac>> = Vec::with_capacity(gens.len() * mults.len());
    for g in &gens {
        for m in &mults {
            let mut col = vec![Frac::zero(); monos.len()];
            for (e, c) in g.terms() {
                let te = e.mul(m);
                col[index[&te]] = c.clone();
            }
            cols.push(col);
        }
    }
    let mut mat = FracMat::zeros(monos.len(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if !v.is_zero() {
                mat.set(i, j, v.clone());
            }
        }
    }
    Ok((monos, mat))
}

/// dim of the degree-`d` piece of the Jacobian ring.
pub fn graded_dim(f: &Poly, d: u32) -> Result<usize> {
    let (monos, mat) = relation_matrix(f, d)?;
    Ok(monos.len() - mat.rank_exact())
}

/// Artinian smoothness test: the quotient ring vanishes in degree
/// `k (deg F - 2) + 1`.
pub fn is_smooth_hypersurface(f: &Poly) -> Result<bool> {
    let degf = f.homogeneous_degree().ok_or_else(|| {
        if f.is_zero() {
            Error::ZeroPolynomial
        } else {
            Error::NotHomogeneous
        }
    })?;
    if degf < 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: degf,
        });
    }
    let socle = f.nvars() as u32 * (degf - 2);
    Ok(graded_dim(f, socle + 1)? == 0)
}

/// A graded piece of the quotient ring with a chosen monomial basis.
pub struct GradedQuotient {
    pub degree: u32,
    pub monomials: Vec<Expo>,
    pub relation: FracMat,
    pub quotient_basis: Vec<Expo>,
}

impl GradedQuotient {
    pub fn new(f: &Poly, d: u32) -> Result<Self> {
        let (monomials, relation) = relation_matrix(f, d)?;
        let quotient_basis = quotient_basis_from(&monomials, &relation);
        Ok(GradedQuotient {
            degree: d,
            monomials,
            relation,
            quotient_basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.quotient_basis.len()
    }
}

fn quotient_basis_from(monomials: &[Expo], relation: &FracMat) -> Vec<Expo> {
    // pivot columns of the transposed relations are the monomials leading
    // some ideal element; their complement is a basis of the quotient
    let (_, pivots) = relation.transpose().echelon_pivots();
    let mut is_pivot = vec![false; monomials.len()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    monomials
        .iter()
        .enumerate()
        .filter(|(i, _)| !is_pivot[*i])
        .map(|(_, e)| e.clone())
        .collect()
}

/// A linear involution together with the sign character twisting the induced
/// action on graded pieces.
#[derive(Clone, Debug)]
pub struct InvolutionAction {
    pub transform: LinearChange,
    pub twist: i8,
}

impl InvolutionAction {
    pub fn new(transform: LinearChange, twist: Option<i8>) -> Result<Self> {
        let n = transform.dim();
        let sq = transform.compose(&transform);
        if !sq.is_identity() {
            return Err(Error::NotInvolution);
        }
        let twist = match twist {
            Some(t) if t == 1 || t == -1 => t,
            Some(_) => return Err(Error::Parse("twist must be +1 or -1".into())),
            None => {
                let d = transform.det();
                if d == fint(1) {
                    1
                } else {
                    -1
                }
            }
        };
        let _ = n;
        Ok(InvolutionAction { transform, twist })
    }

    /// Diagonal involution from a sign pattern.
    pub fn diagonal(signs: &[i8], twist: Option<i8>) -> Result<Self> {
        let n = signs.len();
        let mut m = FracMat::zeros(n, n);
        for (i, &s) in signs.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::Parse("diagonal signs must be +1 or -1".into()));
            }
            m.set(i, i, fint(s as i64));
        }
        InvolutionAction::new(LinearChange::new(m)?, twist)
    }

    /// The involution negating the last coordinate, with trivial twist.
    pub fn last_coordinate_flip(nvars: usize) -> Self {
        let mut signs = vec![1i8; nvars];
        signs[nvars - 1] = -1;
        InvolutionAction::diagonal(&signs, Some(1)).expect("valid diagonal")
    }

    fn diagonal_signs(&self) -> Option<Vec<i8>> {
        let n = self.transform.dim();
        let m = self.transform.mat();
        let mut signs = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if i == j {
                    if v == &fint(1) {
                        signs.push(1);
                    } else if v == &fint(-1) {
                        signs.push(-1);
                    } else {
                        return None;
                    }
                } else if !v.is_zero() {
                    return None;
                }
            }
        }
        Some(signs)
    }
}

/// Dimensions of the +1 and -1 eigenspaces of the induced action on the
/// degree-`d` piece of the quotient ring.
pub fn eigen_split(f: &Poly, d: u32, act: &InvolutionAction) -> Result<(usize, usize)> {
    if act.transform.dim() != f.nvars() {
        return Err(Error::NvarsMismatch(f.nvars(), act.transform.dim()));
    }
    let moved = f.apply_linear_change(&act.transform)?;
    if &moved != f {
        return Err(Error::NotInvariant);
    }
    let (monos, mat) = relation_matrix(f, d)?;
    let n = monos.len();
    let total = n - mat.rank_exact();
    if let Some(signs) = act.diagonal_signs() {
        // every monomial is an eigenvector; columns of the relation matrix
        // are pure because the generators have pure parity
        let mono_sign: Vec<i8> = monos
            .iter()
            .map(|e| {
                let mut s = act.twist;
                for (i, &k) in e.0.iter().enumerate() {
                    if signs[i] == -1 && k % 2 == 1 {
                        s = -s;
                    }
                }
                s
            })
            .collect();
        let n_plus = mono_sign.iter().filter(|&&s| s == 1).count();
        let mut plus_cols: Vec<usize> = Vec::new();
        let mut minus_cols: Vec<usize> = Vec::new();
        for j in 0..mat.ncols() {
            let mut sign: Option<i8> = None;
            for i in 0..n {
                if !mat.get(i, j).is_zero() {
                    match sign {
                        None => sign = Some(mono_sign[i]),
                        Some(s) if s == mono_sign[i] => {}
                        Some(_) => {
                            return Err(Error::Internal(
                                "mixed-parity relation column for an invariant form".into(),
                            ))
                        }
                    }
                }
            }
            match sign {
                Some(1) => plus_cols.push(j),
                Some(-1) => minus_cols.push(j),
                _ => {}
            }
        }
        let sub = |cols: &[usize]| -> FracMat {
            let mut s = FracMat::zeros(n, cols.len());
            for (jj, &j) in cols.iter().enumerate() {
                for i in 0..n {
                    let v = mat.get(i, j);
                    if !v.is_zero() {
                        s.set(i, jj, v.clone());
                    }
                }
            }
            s
        };
        let rank_plus = sub(&plus_cols).rank_exact();
        let rank_minus = sub(&minus_cols).rank_exact();
        let dim_plus = n_plus - rank_plus;
        let dim_minus = (n - n_plus) - rank_minus;
        debug_assert_eq!(dim_plus + dim_minus, total);
        return Ok((dim_plus, dim_minus));
    }
    // general involution: project with (I +- twist*T_d)/2 on the monomial
    // space and measure ranks
    let mut t_d = FracMat::zeros(n, n);
    let index: std::collections::HashMap<&Expo, usize> =
        monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    for (j, e) in monos.iter().enumerate() {
        let mono = Poly::from_terms(f.nvars(), vec![(e.clone(), Frac::one())]);
        let img = mono.apply_linear_change(&act.transform)?;
        for (te, c) in img.terms() {
            t_d.set(index[te], j, c.clone());
        }
    }
    if act.twist == -1 {
        for i in 0..n {
            for j in 0..n {
                let v = -t_d.get(i, j);
                t_d.set(i, j, v);
            }
        }
    }
    let half = Frac::new(1.into(), 2.into());
    let mut proj_plus = FracMat::zeros(n, n);
    let mut proj_minus = FracMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let idm = if i == j { Frac::one() } else { Frac::zero() };
            proj_plus.set(i, j, (&idm + t_d.get(i, j)) * &half);
            proj_minus.set(i, j, (&idm - t_d.get(i, j)) * &half);
        }
    }
    let dim_v_plus = proj_plus.rank_exact();
    let dim_v_minus = proj_minus.rank_exact();
    let rank_plus = proj_plus.matmul(&mat)?.rank_exact();
    let rank_minus = proj_minus.matmul(&mat)?.rank_exact();
    let dims = (dim_v_plus - rank_plus, dim_v_minus - rank_minus);
    debug_assert_eq!(dims.0 + dims.1, total);
    Ok(dims)
}

/// The Macaulay pairing into the one-dimensional socle, with the socle basis
/// pinned to the first monomial (canonical order) whose class is nonzero.
pub struct SoclePairing {
    pub socle_degree: u32,
    functional: Vec<Frac>,
    monomials: Vec<Expo>,
}

impl SoclePairing {
    pub fn new(f: &Poly) -> Result<Self> {
        if !is_smooth_hypersurface(f)? {
            return Err(Error::SingularHypersurface);
        }
        let degf = f.homogeneous_degree().unwrap();
        let socle = f.nvars() as u32 * (degf - 2);
        let (monomials, mat) = relation_matrix(f, socle)?;
        let left = mat.left_kernel_exact();
        if left.len() != 1 {
            return Err(Error::Internal(format!(
                "socle dimension {} instead of 1",
                left.len()
            )));
        }
        let mut functional = left.into_iter().next().unwrap();
        // normalize at the first monomial in canonical (leading-first) order
        // with a nonzero class; monomials[] is already leading-first
        let lead = functional
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Internal("zero socle functional".into()))?;
        let scale = functional[lead].clone();
        for c in functional.iter_mut() {
            *c /= &scale;
        }
        Ok(SoclePairing {
            socle_degree: socle,
            functional,
            monomials,
        })
    }

    /// Class of a socle-degree polynomial against the pinned basis vector.
    pub fn socle_class(&self, p: &Poly) -> Result<Frac> {
        p.require_homogeneous(self.socle_degree).or_else(|e| {
            if p.is_zero() {
                Ok(())
            } else {
                Err(e)
            }
        })?;
        let mut acc = Frac::zero();
        for (i, m) in self.monomials.iter().enumerate() {
            if self.functional[i].is_zero() {
                continue;
            }
            let c = p.coeff(m);
            if !c.is_zero() {
                acc += &self.functional[i] * c;
            }
        }
        Ok(acc)
    }

    pub fn pair(&self, a: &Poly, b: &Poly) -> Result<Frac> {
        let da = a.homogeneous_degree().unwrap_or(0);
        let db = b.homogeneous_degree().unwrap_or(0);
        if !a.is_zero() && !b.is_zero() && da + db != self.socle_degree {
            return Err(Error::DegreeMismatch {
                expected: self.socle_degree,
                got: da + db,
            });
        }
        self.socle_class(&a.mul(b)?)
    }
}

/// Convenience wrapper for a single pairing evaluation.
pub fn macaulay_pairing(f: &Poly, a: &Poly, b: &Poly) -> Result<Frac> {
    SoclePairing::new(f)?.pair(a, b)
}

/// Quadrics polar to points of the hyperplane section: the intersection of
/// the degree-2 Jacobian piece with the forms in the first `nvars - 1`
/// variables only. For a valid Eckardt pair this space is 3-dimensional.
pub fn polar_quadric_space(f: &Poly, l: &Poly) -> Result<(usize, Vec<Poly>)> {
    f.require_homogeneous(3)?;
    l.require_homogeneous(1)?;
    if f.nvars() != 4 || l.nvars() != 4 {
        return Err(Error::NotEckardtShape);
    }
    let big = eckardt_polynomial(f, l)?;
    if !is_smooth_hypersurface(&big)? {
        return Err(Error::SingularHypersurface);
    }
    let gens = jacobian_generators(&big)?;
    // rows indexed by degree-2 monomials containing x4
    let monos = graded_basis(5, 2);
    let rows: Vec<usize> = monos
        .iter()
        .enumerate()
        .filter(|(_, e)| e.0[4] > 0)
        .map(|(i, _)| i)
        .collect();
    let index: std::collections::HashMap<&Expo, usize> =
        monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut mat = FracMat::zeros(rows.len(), 5);
    let rowpos: std::collections::HashMap<usize, usize> =
        rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    for (j, g) in gens.iter().enumerate() {
        for (e, c) in g.terms() {
            if e.0[4] > 0 {
                mat.set(rowpos[&index[e]], j, c.clone());
            }
        }
    }
    let (_, kernel) = mat.kernel_and_rank();
    let mut basis = Vec::new();
    for a in &kernel {
        let mut q = Poly::zero(5);
        for (i, coef) in a.iter().enumerate() {
            if !coef.is_zero() {
                q = q.add(&gens[i].scale(coef))?;
            }
        }
        basis.push(q);
    }
    // the partials are independent for a smooth hypersurface, so the span
    // has the kernel's dimension
    Ok((kernel.len(), basis))
}

/// Assemble `f + l x4^2` in five variables from a four-variable pair.
pub fn eckardt_polynomial(f: &Poly, l: &Poly) -> Result<Poly> {
    let f5 = f.lift_vars(5, &[0, 1, 2, 3])?;
    let l5 = l.lift_vars(5, &[0, 1, 2, 3])?;
    let x4sq = Poly::variable(5, 4)?.pow(2);
    f5.add(&l5.mul(&x4sq)?)
}

/// Degree-4 Jacobian piece of a split quintic `g*l` intersected with the
/// multiples of the line's equation. Transversality of `(g=0)` and `(l=0)`
/// makes this 2-dimensional.
pub fn quartic_cokernel(g: &Poly, l: &Poly) -> Result<(usize, Vec<Poly>)> {
    g.require_homogeneous(4)?;
    l.require_homogeneous(1)?;
    if g.nvars() != 3 || l.nvars() != 3 {
        return Err(Error::NvarsMismatch(3, g.nvars().max(l.nvars())));
    }
    if !is_smooth_hypersurface(g)? {
        return Err(Error::SingularQuartic);
    }
    // transversality: the restriction of g to (l=0) must be squarefree
    let restr = restrict_to_linear_zero(g, l)?;
    if !restr.is_squarefree() {
        return Err(Error::NonTransverse("line is tangent to the quartic"));
    }
    // normalize l to the first coordinate
    let n = 3;
    let pivot = (0..n)
        .find(|&i| !l.coeff(&Expo::var(n, i)).is_zero())
        .ok_or(Error::ZeroPolynomial)?;
    let mut rows = Vec::new();
    for i in 0..n {
        if i == pivot {
            rows.push((0..n).map(|j| l.coeff(&Expo::var(n, j))).collect());
        } else {
            let mut r = vec![Frac::zero(); n];
            r[i] = Frac::one();
            rows.push(r);
        }
    }
    // we want new coordinates z with z_pivot = l; permute so l becomes z0
    let a = LinearChange::new(FracMat::from_rows(rows)?)?;
    let mut perm = FracMat::zeros(n, n);
    perm.set(0, pivot, Frac::one());
    let mut next = 1;
    for i in 0..n {
        if i != pivot {
            perm.set(next, i, Frac::one());
            next += 1;
        }
    }
    let perm = LinearChange::new(perm)?;
    let to_normal = a.inverse().compose(&perm.inverse());
    let q5 = g.mul(l)?.apply_linear_change(&to_normal)?;
    let gens = jacobian_generators(&q5)?;
    // condition: combination restricted to x0 = 0 vanishes
    let quartic_monos: Vec<Expo> = graded_basis(3, 4)
        .into_iter()
        .filter(|e| e.0[0] == 0)
        .collect();
    let index: std::collections::HashMap<&Expo, usize> = quartic_monos
        .iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let mut mat = FracMat::zeros(quartic_monos.len(), 3);
    for (j, gpoly) in gens.iter().enumerate() {
        for (e, c) in gpoly.terms() {
            if e.0[0] == 0 {
                mat.set(index[e], j, c.clone());
            }
        }
    }
    let (_, kernel) = mat.kernel_and_rank();
    let mut basis = Vec::new();
    for avec in &kernel {
        let mut q = Poly::zero(3);
        for (i, coef) in avec.iter().enumerate() {
            if !coef.is_zero() {
                q = q.add(&gens[i].scale(coef))?;
            }
        }
        basis.push(q);
    }
    Ok((kernel.len(), basis))
}

/// Restriction of a ternary form to the line `(l = 0)`, as a binary form in
/// the two parametrizing coordinates.
pub fn restrict_to_linear_zero(p: &Poly, l: &Poly) -> Result<crate::binform::BinForm> {
    let n = p.nvars();
    l.require_homogeneous(1)?;
    let coeffs: Vec<Frac> = (0..n).map(|i| l.coeff(&Expo::var(n, i))).collect();
    let pivot = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroPolynomial)?;
    // parameters: the two smallest non-pivot coordinates
    let params: Vec<usize> = (0..n).filter(|&i| i != pivot).take(2).collect();
    if params.len() != 2 || n != 3 {
        return Err(Error::Internal("restriction needs three variables".into()));
    }
    let (u, v) = (params[0], params[1]);
    // basis points of the line: parameter u -> x_pivot = -c_u/c_p, etc.
    let mut a = vec![Frac::zero(); n];
    a[u] = Frac::one();
    a[pivot] = -&coeffs[u] / &coeffs[pivot];
    let mut b = vec![Frac::zero(); n];
    b[v] = Frac::one();
    b[pivot] = -&coeffs[v] / &coeffs[pivot];
    restrict_to_span(p, &a, &b)
}

/// Restriction of a form to the span of two points, as a binary form in the
/// span parameters.
pub fn restrict_to_span(p: &Poly, a: &[Frac], b: &[Frac]) -> Result<crate::binform::BinForm> {
    let d = p
        .homogeneous_degree()
        .ok_or(Error::NotHomogeneous)
        .or_else(|e| if p.is_zero() { Ok(0) } else { Err(e) })?;
    let mut acc = vec![Frac::zero(); d as usize + 1];
    for (e, c) in p.terms() {
        // product of (a_i s + b_i t)^{e_i}
        let mut prod = vec![c.clone()];
        for i in 0..p.nvars() {
            for _ in 0..e.0[i] {
                let mut next = vec![Frac::zero(); prod.len() + 1];
                for (k, pc) in prod.iter().enumerate() {
                    if pc.is_zero() {
                        continue;
                    }
                    next[k] += pc * &a[i];
                    next[k + 1] += pc * &b[i];
                }
                prod = next;
            }
        }
        for (k, pc) in prod.iter().enumerate() {
            acc[k] += pc;
        }
    }
    Ok(crate::binform::BinForm::new(acc))
}

/// Line conventions for the quadric-to-quartic coefficient map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineConvention {
    /// Line `(x0 = x1 = x2 = 0)`, projection onto the first three
    /// coordinates.
    FirstThree,
    /// Line `(x2 = x3 = x4 = 0)`, projection onto the last three.
    LastThree,
}

/// Coefficient map between Jacobian pieces induced by projection from a
/// line: a quadric class `sum a_i dF/dx_i` maps to the quartic class of the
/// projected coefficients.
pub fn map_jf2_to_jq4(a: &[Frac; 5], conv: LineConvention) -> [Frac; 3] {
    match conv {
        LineConvention::FirstThree => [a[0].clone(), a[1].clone(), a[2].clone()],
        LineConvention::LastThree => [a[2].clone(), a[3].clone(), a[4].clone()],
    }
}

/// Full linear map from quadric coefficients to quartic-space vectors, for
/// rank and kernel inspection. Column `i` is the quartic `dQ/dx_i` when the
/// convention keeps coordinate `i`, zero otherwise.
pub fn jf2_to_jq4_matrix(q: &Poly, conv: LineConvention) -> Result<FracMat> {
    q.require_homogeneous(5)?;
    if q.nvars() != 3 {
        return Err(Error::NvarsMismatch(3, q.nvars()));
    }
    let gens = jacobian_generators(q)?;
    let monos = graded_basis(3, 4);
    let index: std::collections::HashMap<&Expo, usize> =
        monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut mat = FracMat::zeros(monos.len(), 5);
    let keep: [Option<usize>; 5] = match conv {
        LineConvention::FirstThree => [Some(0), Some(1), Some(2), None, None],
        LineConvention::LastThree => [None, None, Some(0), Some(1), Some(2)],
    };
    for (col, target) in keep.iter().enumerate() {
        if let Some(t) = target {
            for (e, c) in gens[*t].terms() {
                mat.set(index[e], col, c.clone());
            }
        }
    }
    Ok(mat)
}
