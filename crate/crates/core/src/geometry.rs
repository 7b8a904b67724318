//! Cubic surface pairs, the associated cubic threefolds with an Eckardt
//! point, and their involution-invariant lines.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frac::{self, frac_to_c64, Frac};
use crate::jacobian::{self, InvolutionAction};
use crate::matrix::{FracMat, LinearChange};
use crate::poly::{Expo, Poly};

/// A smooth cubic surface together with a transverse plane, both in four
/// homogeneous variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubicPair {
    pub f: Poly,
    pub l: Poly,
}

impl CubicPair {
    pub fn new(f: Poly, l: Poly) -> Result<Self> {
        f.require_homogeneous(3)?;
        l.require_homogeneous(1)?;
        if f.nvars() != 4 || l.nvars() != 4 {
            return Err(Error::NvarsMismatch(4, f.nvars().max(l.nvars())));
        }
        Ok(CubicPair { f, l })
    }
}

/// A cubic threefold `f + l x4^2 = 0` with its Eckardt point `[0,0,0,0,1]`
/// and the involution negating the last coordinate.
#[derive(Clone, Debug)]
pub struct EckardtCubic {
    f: Poly,
    l: Poly,
    big_f: Poly,
}

/// Build the threefold from a pair; fails exactly when the surface is
/// singular or the plane is tangent, both of which surface as a singular
/// threefold.
pub fn make_eckardt(pair: &CubicPair) -> Result<EckardtCubic> {
    let big_f = jacobian::eckardt_polynomial(&pair.f, &pair.l)?;
    if !jacobian::is_smooth_hypersurface(&big_f)? {
        return Err(Error::SingularHypersurface);
    }
    Ok(EckardtCubic {
        f: pair.f.clone(),
        l: pair.l.clone(),
        big_f,
    })
}

impl EckardtCubic {
    pub fn surface(&self) -> &Poly {
        &self.f
    }

    pub fn plane(&self) -> &Poly {
        &self.l
    }

    pub fn polynomial(&self) -> &Poly {
        &self.big_f
    }

    pub fn pair(&self) -> CubicPair {
        CubicPair {
            f: self.f.clone(),
            l: self.l.clone(),
        }
    }

    pub fn eckardt_point(&self) -> Vec<Frac> {
        let mut p = vec![Frac::zero(); 5];
        p[4] = frac::fint(1);
        p
    }

    pub fn involution(&self) -> InvolutionAction {
        InvolutionAction::last_coordinate_flip(5)
    }

    /// The hyperplane section as a plane cubic: a parametrization of the
    /// plane `(l = 0)` in P^3 and the pulled-back ternary cubic.
    pub fn elliptic_section(&self) -> Result<(Poly, FracMat)> {
        let coeffs = FracMat::from_rows(vec![(0..4)
            .map(|i| self.l.coeff(&Expo::var(4, i)))
            .collect()])?;
        let (_, kernel) = coeffs.kernel_and_rank();
        debug_assert_eq!(kernel.len(), 3);
        let mut param = FracMat::zeros(4, 3);
        for (j, v) in kernel.iter().enumerate() {
            for i in 0..4 {
                param.set(i, j, v[i].clone());
            }
        }
        // pull back f through the parametrization
        let mut cubic = Poly::zero(3);
        for (e, c) in self.f.terms() {
            let mut prod = Poly::constant(3, c.clone());
            for i in 0..4 {
                for _ in 0..e.0[i] {
                    let mut row = Poly::zero(3);
                    for j in 0..3 {
                        row = row.add(&Poly::variable(3, j)?.scale(param.get(i, j)))?;
                    }
                    prod = prod.mul(&row)?;
                }
            }
            cubic = cubic.add(&prod)?;
        }
        Ok((cubic, param))
    }

    /// Express a point of the plane `(l = 0)` in the section parametrization.
    pub fn section_coordinates(&self, pt: &[Frac]) -> Result<Vec<Frac>> {
        let (_, param) = self.elliptic_section()?;
        // solve param * u = pt over the rationals
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..4 {
            rows.push((0..3).map(|j| param.get(i, j).clone()).collect::<Vec<_>>());
            rhs.push(pt[i].clone());
        }
        solve_overdetermined(rows, rhs).ok_or(Error::PointNotOnVariety)
    }

    pub fn polar_quadric_space(&self) -> Result<(usize, Vec<Poly>)> {
        jacobian::polar_quadric_space(&self.f, &self.l)
    }
}

fn solve_overdetermined(rows: Vec<Vec<Frac>>, rhs: Vec<Frac>) -> Option<Vec<Frac>> {
    let cols = rows.first()?.len();
    let mut aug: Vec<Vec<Frac>> = rows
        .into_iter()
        .zip(rhs)
        .map(|(mut r, b)| {
            r.push(b);
            r
        })
        .collect();
    let rows_n = aug.len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows_n).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, pr);
        let inv = aug[r][c].clone();
        for x in aug[r].iter_mut() {
            *x /= &inv;
        }
        for i in 0..rows_n {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=cols {
                    let upd = &aug[r][j] * &f;
                    aug[i][j] -= upd;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    // consistency
    for row in aug.iter().skip(r) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Frac::zero(); cols];
    for (k, &c) in pivots.iter().enumerate() {
        sol[c] = aug[k][cols].clone();
    }
    Some(sol)
}

/// A projective line given by two exact spanning points.
#[derive(Clone, Debug)]
pub struct Line {
    pub ambient: usize,
    pub a: Vec<Frac>,
    pub b: Vec<Frac>,
    pub dual: Option<Vec<Poly>>,
}

impl Serialize for Line {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let span: Vec<Vec<String>> = [&self.a, &self.b]
            .iter()
            .map(|v| v.iter().map(frac::format_frac).collect())
            .collect();
        let n = if self.dual.is_some() { 3 } else { 2 };
        let mut st = serializer.serialize_struct("Line", n)?;
        st.serialize_field("ambient", &self.ambient)?;
        st.serialize_field("span", &span)?;
        if let Some(dual) = &self.dual {
            st.serialize_field("dual", dual)?;
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            ambient: usize,
            span: Vec<Vec<String>>,
            #[serde(default)]
            dual: Option<Vec<Poly>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.span.len() != 2 {
            return Err(serde::de::Error::custom("span needs exactly two points"));
        }
        let parse = |v: &[String]| -> std::result::Result<Vec<Frac>, D::Error> {
            v.iter()
                .map(|s| frac::parse_frac(s).map_err(serde::de::Error::custom))
                .collect()
        };
        let a = parse(&raw.span[0])?;
        let b = parse(&raw.span[1])?;
        let mut line = Line::new(a, b).map_err(serde::de::Error::custom)?;
        if line.ambient != raw.ambient {
            return Err(serde::de::Error::custom("ambient dimension mismatch"));
        }
        if let Some(dual) = raw.dual {
            line = line.with_dual(dual).map_err(serde::de::Error::custom)?;
        }
        Ok(line)
    }
}

impl Line {
    pub fn new(a: Vec<Frac>, b: Vec<Frac>) -> Result<Self> {
        if a.len() != b.len() || a.len() < 2 {
            return Err(Error::DegenerateSpan);
        }
        let ambient = a.len() - 1;
        let m = FracMat::from_rows(vec![a.clone(), b.clone()])?;
        if m.rank_exact() != 2 {
            return Err(Error::DegenerateSpan);
        }
        Ok(Line {
            ambient,
            a,
            b,
            dual: None,
        })
    }

    pub fn with_dual(mut self, dual: Vec<Poly>) -> Result<Self> {
        for form in &dual {
            form.require_homogeneous(1)?;
            if !form.eval(&self.a)?.is_zero() || !form.eval(&self.b)?.is_zero() {
                return Err(Error::Internal(
                    "dual form does not vanish on the span".into(),
                ));
            }
        }
        self.dual = Some(dual);
        Ok(self)
    }

    /// The span point with last coordinate zero, for lines not inside the
    /// hyperplane at infinity of the involution.
    pub fn point_in_hyperplane(&self, coord: usize) -> Option<Vec<Frac>> {
        let (ca, cb) = (&self.a[coord], &self.b[coord]);
        if ca.is_zero() {
            return Some(self.a.clone());
        }
        if cb.is_zero() {
            return Some(self.b.clone());
        }
        // cb * a - ca * b
        let pt: Vec<Frac> = self
            .a
            .iter()
            .zip(&self.b)
            .map(|(x, y)| cb * x - ca * y)
            .collect();
        if pt.iter().all(|c| c.is_zero()) {
            None
        } else {
            Some(pt)
        }
    }

    pub fn contains_point(&self, p: &[Frac]) -> bool {
        let m = FracMat::from_rows(vec![self.a.clone(), self.b.clone(), p.to_vec()])
            .expect("consistent lengths");
        m.rank_exact() == 2
    }
}

/// Exact containment of a line in a hypersurface.
pub fn contains_line(f: &Poly, line: &Line) -> Result<bool> {
    if f.nvars() != line.ambient + 1 {
        return Err(Error::NvarsMismatch(f.nvars(), line.ambient + 1));
    }
    let restricted = jacobian::restrict_to_span(f, &line.a, &line.b)?;
    Ok(restricted.is_zero())
}

#[derive(Clone, Debug, PartialEq)]
pub enum LineClass {
    /// Contained in the fixed hyperplane section.
    PointwiseFixed,
    /// Through the Eckardt point; carries the residual intersection with the
    /// hyperplane section.
    ThroughEckardt {
        e: Vec<Frac>,
    },
    NotInvariant,
    NotOnX,
}

/// Classify a line against the involution. Invariant lines on the threefold
/// are either pointwise fixed (inside the fixed hyperplane) or pass through
/// the Eckardt point.
pub fn classify_invariant_line(x: &EckardtCubic, line: &Line) -> Result<LineClass> {
    if !contains_line(x.polynomial(), line)? {
        return Ok(LineClass::NotOnX);
    }
    // invariance: both image points stay in the span
    let flip = |p: &[Frac]| -> Vec<Frac> {
        let mut q = p.to_vec();
        q[4] = -&q[4];
        q
    };
    let inv = line.contains_point(&flip(&line.a)) && line.contains_point(&flip(&line.b));
    if !inv {
        return Ok(LineClass::NotInvariant);
    }
    let p = x.eckardt_point();
    if line.contains_point(&p) {
        let e = line
            .point_in_hyperplane(4)
            .ok_or_else(|| Error::Internal("line through p lost its section point".into()))?;
        return Ok(LineClass::ThroughEckardt { e });
    }
    if line.a[4].is_zero() && line.b[4].is_zero() {
        return Ok(LineClass::PointwiseFixed);
    }
    Err(Error::Internal(
        "invariant line neither pointwise fixed nor through the vertex".into(),
    ))
}

/// The line joining the Eckardt point to a point of the hyperplane section;
/// always contained in the threefold.
pub fn ruling_line(x: &EckardtCubic, e: &[Frac]) -> Result<Line> {
    if e.len() != 5 {
        return Err(Error::NvarsMismatch(5, e.len()));
    }
    if !e[4].is_zero() {
        return Err(Error::PointNotOnVariety);
    }
    let e4 = e[..4].to_vec();
    if !x.surface().eval(&e4)?.is_zero() || !x.plane().eval(&e4)?.is_zero() {
        return Err(Error::PointNotOnVariety);
    }
    let line = Line::new(x.eckardt_point(), e.to_vec())?;
    debug_assert!(contains_line(x.polynomial(), &line).unwrap());
    Ok(line)
}

/// Normalized form of a threefold along a line through the Eckardt point:
/// coordinates where the line is `(x0 = x1 = x2 = 0)`, the vertex is
/// `[0,0,0,0,1]` and the section point is `[0,0,0,1,0]`.
#[derive(Clone, Debug)]
pub struct ThroughPNormalization {
    pub t: LinearChange,
    pub k: Poly,
    pub q: Poly,
    pub c: Poly,
    pub l: Poly,
}

impl ThroughPNormalization {
    /// Reassemble `k x3^2 + 2 q x3 + c + l x4^2` in five variables.
    pub fn reassemble(&self) -> Result<Poly> {
        assemble_through_p(&self.k, &self.q, &self.c, &self.l)
    }
}

pub fn assemble_through_p(k: &Poly, q: &Poly, c: &Poly, l: &Poly) -> Result<Poly> {
    let lift = |p: &Poly| p.lift_vars(5, &[0, 1, 2]);
    let x3 = Poly::variable(5, 3)?;
    let x4 = Poly::variable(5, 4)?;
    let mut acc = lift(k)?.mul(&x3.pow(2))?;
    acc = acc.add(&lift(q)?.mul(&x3)?.scale(&frac::fint(2)))?;
    acc = acc.add(&lift(c)?)?;
    acc = acc.add(&lift(l)?.mul(&x4.pow(2))?)?;
    Ok(acc)
}

pub fn normalize_through_p(x: &EckardtCubic, line: &Line) -> Result<ThroughPNormalization> {
    let class = classify_invariant_line(x, line)?;
    let e = match class {
        LineClass::ThroughEckardt { e } => e,
        LineClass::PointwiseFixed => {
            return Err(Error::WrongLineType(
                "expected a line through the Eckardt point, got a pointwise fixed one",
            ))
        }
        _ => {
            return Err(Error::WrongLineType(
                "line is not an invariant line on the threefold",
            ))
        }
    };
    // basis: v3 = section point, v4 = vertex, v0..v2 standard completion
    // inside (x4 = 0)
    let p = x.eckardt_point();
    let t = completion_basis(&[e.clone(), p], &[3, 4], 5)?;
    let moved = x.polynomial().apply_linear_change(&t)?;
    let (k, q, c, l) = split_through_p(&moved)?;
    Ok(ThroughPNormalization { t, k, q, c, l })
}

/// Extract the pieces of `k x3^2 + 2 q x3 + c + l x4^2` from a normalized
/// quintic-free cubic in five variables.
pub fn split_through_p(moved: &Poly) -> Result<(Poly, Poly, Poly, Poly)> {
    let mut k = Poly::zero(5);
    let mut q = Poly::zero(5);
    let mut c = Poly::zero(5);
    let mut l = Poly::zero(5);
    for (e, coef) in moved.terms() {
        let (e3, e4) = (e.0[3], e.0[4]);
        let mono = Poly::from_terms(
            5,
            vec![(
                {
                    let mut e2 = e.clone();
                    e2.0[3] = 0;
                    e2.0[4] = 0;
                    e2
                },
                coef.clone(),
            )],
        );
        match (e3, e4) {
            (2, 0) => k = k.add(&mono)?,
            (1, 0) => q = q.add(&mono.scale(&frac::frac(1, 2)))?,
            (0, 0) => c = c.add(&mono)?,
            (0, 2) => l = l.add(&mono)?,
            _ => return Err(Error::NotEckardtShape),
        }
    }
    let down = |p: Poly| p.drop_vars(&[0, 1, 2]);
    Ok((down(k)?, down(q)?, down(c)?, down(l)?))
}

/// Normalized form along a pointwise fixed line: the line becomes
/// `(x2 = x3 = x4 = 0)` and the section plane becomes `(x0 = 0)`.
#[derive(Clone, Debug)]
pub struct PointwiseNormalization {
    pub t: LinearChange,
    /// The transformed threefold `f'(x0..x3) + x0 x4^2`.
    pub f_prime: Poly,
    pub l1: crate::binform::BinForm,
    pub l2: crate::binform::BinForm,
    pub l3: crate::binform::BinForm,
    pub q1: crate::binform::BinForm,
    pub q2: crate::binform::BinForm,
    pub c: crate::binform::BinForm,
}

pub fn normalize_pointwise(x: &EckardtCubic, line: &Line) -> Result<PointwiseNormalization> {
    match classify_invariant_line(x, line)? {
        LineClass::PointwiseFixed => {}
        LineClass::ThroughEckardt { .. } => {
            return Err(Error::WrongLineType(
                "expected a pointwise fixed line, got one through the Eckardt point",
            ))
        }
        _ => {
            return Err(Error::WrongLineType(
                "line is not an invariant line on the threefold",
            ))
        }
    }
    // basis: v0, v1 span the line, v4 the vertex, v2, v3 complete in (x4=0)
    let t0 = completion_basis(
        &[line.a.clone(), line.b.clone(), {
            let mut p = vec![Frac::zero(); 5];
            p[4] = frac::fint(1);
            p
        }],
        &[0, 1, 4],
        5,
    )?;
    // section form in the new coordinates
    let l_new = x
        .plane()
        .lift_vars(5, &[0, 1, 2, 3])?
        .apply_linear_change(&t0)?;
    // it must involve x0 or x1, else the line would sit inside the plane
    let n = 5;
    let c0 = l_new.coeff(&Expo::var(n, 0));
    let c1 = l_new.coeff(&Expo::var(n, 1));
    let mut t = t0;
    let mut l_cur = l_new;
    if c0.is_zero() {
        if c1.is_zero() {
            return Err(Error::NonTransverse("line lies inside the section plane"));
        }
        // swap x0 and x1
        let mut swap = FracMat::identity(5);
        swap.set(0, 0, Frac::zero());
        swap.set(1, 1, Frac::zero());
        swap.set(0, 1, frac::fint(1));
        swap.set(1, 0, frac::fint(1));
        let swap = LinearChange::new(swap)?;
        t = t.compose(&swap);
        l_cur = l_cur.apply_linear_change(&swap)?;
    }
    // substitute so the section form becomes exactly x0
    let mut rows = Vec::new();
    for i in 0..5 {
        if i == 0 {
            rows.push((0..5).map(|j| l_cur.coeff(&Expo::var(5, j))).collect());
        } else {
            let mut r = vec![Frac::zero(); 5];
            r[i] = Frac::one();
            rows.push(r);
        }
    }
    let a = LinearChange::new(FracMat::from_rows(rows)?)?;
    let t_final = t.compose(&a.inverse());
    let f_prime = x.polynomial().apply_linear_change(&t_final)?;
    let pieces = split_pointwise(&f_prime)?;
    Ok(PointwiseNormalization {
        t: t_final,
        f_prime,
        l1: pieces.0,
        l2: pieces.1,
        l3: pieces.2,
        q1: pieces.3,
        q2: pieces.4,
        c: pieces.5,
    })
}

type PointwisePieces = (
    crate::binform::BinForm,
    crate::binform::BinForm,
    crate::binform::BinForm,
    crate::binform::BinForm,
    crate::binform::BinForm,
    crate::binform::BinForm,
);

/// Split a normalized `f'(x0..x3) + x0 x4^2` along powers of `(x0, x1)`:
/// `l1 x0^2 + 2 l2 x0 x1 + l3 x1^2 + 2 q1 x0 + 2 q2 x1 + c` with binary
/// forms in `(x2, x3)`.
pub fn split_pointwise(f_prime: &Poly) -> Result<PointwisePieces> {
    use crate::binform::BinForm;
    let x4sq = f_prime.coeff_of_power(4, 2);
    let expected_l = Poly::variable(5, 0)?;
    if x4sq != expected_l || f_prime.max_power(4) != 2 || !f_prime.coeff_of_power(4, 1).is_zero() {
        return Err(Error::NotEckardtShape);
    }
    let body = f_prime.coeff_of_power(4, 0);
    let half = frac::frac(1, 2);
    let grab =
        |e0: u32, e1: u32| -> Result<Poly> { Ok(body.coeff_of_power(0, e0).coeff_of_power(1, e1)) };
    for bad in [(3u32, 0u32), (2, 1), (1, 2), (0, 3)] {
        if !grab(bad.0, bad.1)?.is_zero() {
            return Err(Error::LineNotOnVariety);
        }
    }
    let to_form = |p: Poly, d: u32| -> Result<BinForm> {
        BinForm::from_poly(&p.drop_vars(&[2, 3])?, 0, 1, d)
    };
    let l1 = to_form(grab(2, 0)?, 1)?;
    let l2 = to_form(grab(1, 1)?.scale(&half), 1)?;
    let l3 = to_form(grab(0, 2)?, 1)?;
    let q1 = to_form(grab(1, 0)?.scale(&half), 2)?;
    let q2 = to_form(grab(0, 1)?.scale(&half), 2)?;
    let c = to_form(grab(0, 0)?, 3)?;
    Ok((l1, l2, l3, q1, q2, c))
}

/// Extend the given points to a full basis, placing them at the requested
/// coordinate positions and filling the rest with the smallest standard
/// basis vectors that keep the matrix invertible. Completion vectors avoid
/// the last coordinate when every pinned point already spans it, keeping
/// the involution diagonal.
pub(crate) fn completion_basis(
    points: &[Vec<Frac>],
    positions: &[usize],
    dim: usize,
) -> Result<LinearChange> {
    assert_eq!(points.len(), positions.len());
    let mut cols: Vec<Option<Vec<Frac>>> = vec![None; dim];
    for (pt, &pos) in points.iter().zip(positions) {
        if pt.len() != dim {
            return Err(Error::NvarsMismatch(dim, pt.len()));
        }
        cols[pos] = Some(pt.clone());
    }
    // candidate standard vectors: skip the last coordinate first so the
    // involution hyperplane is preserved, then allow it if still needed
    let mut candidates: Vec<usize> = (0..dim - 1).collect();
    candidates.push(dim - 1);
    let mut chosen: Vec<Vec<Frac>> = points.to_vec();
    for slot in 0..dim {
        if cols[slot].is_some() {
            continue;
        }
        let mut found = false;
        for &cand in &candidates {
            let mut v = vec![Frac::zero(); dim];
            v[cand] = Frac::one();
            let mut trial = chosen.clone();
            trial.push(v.clone());
            let m = FracMat::from_rows(trial.clone())?;
            if m.rank_exact() == trial.len() {
                chosen.push(v.clone());
                cols[slot] = Some(v);
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::DegenerateSpan);
        }
    }
    LinearChange::from_columns(cols.into_iter().map(|c| c.unwrap()).collect())
}

/// Points of the hyperplane section cut by a hyperplane through the vertex,
/// each spanning a line of the threefold inside that hyperplane.
pub struct HyperplaneLines {
    pub points: Vec<[Complex64; 5]>,
    pub residuals: Vec<f64>,
}

pub fn hyperplane_lines_through_p(x: &EckardtCubic, h: &Poly, tol: f64) -> Result<HyperplaneLines> {
    h.require_homogeneous(1)?;
    if h.nvars() != 4 && h.nvars() != 5 {
        return Err(Error::NvarsMismatch(4, h.nvars()));
    }
    let h4 = if h.nvars() == 5 {
        if !h.coeff(&Expo::var(5, 4)).is_zero() {
            return Err(Error::PointNotOnVariety);
        }
        h.drop_vars(&[0, 1, 2, 3])?
    } else {
        h.clone()
    };
    // the pencil line (l = h = 0) in P^3
    let rows = FracMat::from_rows(vec![
        (0..4).map(|i| x.plane().coeff(&Expo::var(4, i))).collect(),
        (0..4).map(|i| h4.coeff(&Expo::var(4, i))).collect(),
    ])?;
    let (rank, kernel) = rows.kernel_and_rank();
    if rank != 2 || kernel.len() != 2 {
        return Err(Error::NonTransverse(
            "hyperplane contains the section plane",
        ));
    }
    let restricted = jacobian::restrict_to_span(x.surface(), &kernel[0], &kernel[1])?;
    if restricted.is_zero() {
        return Err(Error::NonTransverse("hyperplane section is degenerate"));
    }
    if !restricted.is_squarefree() {
        return Err(Error::NonTransverse(
            "hyperplane is tangent to the section curve",
        ));
    }
    let roots = restricted.complex_roots()?;
    let mut points = Vec::new();
    let mut residuals = Vec::new();
    let fpoly = x.polynomial();
    for r in roots {
        let mut pt = [Complex64::new(0.0, 0.0); 5];
        for i in 0..4 {
            pt[i] = frac_to_c64(&kernel[0][i]) * r.u + frac_to_c64(&kernel[1][i]) * r.v;
        }
        // residual of the full line through the vertex, sampled
        let p = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let mut worst: f64 = 0.0;
        let scale: f64 = pt.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        for k in 0..20 {
            let theta = 0.3 + k as f64 * 0.31;
            let s = Complex64::new(theta.cos(), theta.sin() * 0.4);
            let t = Complex64::new(1.0 - 0.03 * k as f64, 0.2 * theta.sin());
            let sample: Vec<Complex64> = (0..5).map(|i| s * pt[i] / scale + t * p[i]).collect();
            worst = worst.max(fpoly.eval_c64(&sample).norm());
        }
        if worst > tol {
            return Err(Error::Numeric(format!(
                "ruling line residual {worst:.3e} above tolerance"
            )));
        }
        points.push(pt);
        residuals.push(worst);
    }
    Ok(HyperplaneLines { points, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::frac::fint;
    use crate::poly::Poly;

    fn p(n: usize, s: &str) -> Poly {
        Poly::parse(n, s).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<Frac> {
        v.iter().map(|&x| fint(x)).collect()
    }

    #[test]
    fn build_and_split_reference_pair() {
        let x = fixtures::fix1_cubic();
        assert_eq!(x.surface(), &fixtures::fermat_surface());
        assert_eq!(x.plane(), &p(4, "x0"));
        assert_eq!(x.polynomial(), &p(5, "x0^3 + x1^3 + x2^3 + x3^3 + x0*x4^2"));
    }

    #[test]
    fn degenerate_pair_rejected() {
        let pair = fixtures::fix2();
        assert!(matches!(
            make_eckardt(&pair),
            Err(Error::SingularHypersurface)
        ));
    }

    #[test]
    fn fix3_is_valid() {
        let x = fixtures::fix3_cubic();
        assert!(jacobian::is_smooth_hypersurface(x.polynomial()).unwrap());
    }

    #[test]
    fn line_containment() {
        let x = fixtures::fix1_cubic();
        let ln = Line::new(pt(&[0, 0, 0, 0, 1]), pt(&[0, 1, -1, 0, 0])).unwrap();
        assert!(contains_line(x.polynomial(), &ln).unwrap());
        let surf = fixtures::fermat_surface();
        let ls = Line::new(pt(&[1, -1, 0, 0]), pt(&[0, 0, 1, -1])).unwrap();
        assert!(contains_line(&surf, &ls).unwrap());
        let random = Line::new(pt(&[1, 0, 0, 0, 0]), pt(&[0, 1, 0, 0, 0])).unwrap();
        assert!(!contains_line(x.polynomial(), &random).unwrap());
    }

    #[test]
    fn classification_partition() {
        let x3 = fixtures::fix3_cubic();
        let through = Line::new(pt(&[0, 0, 0, 0, 1]), pt(&[0, 1, 1, 1, 0])).unwrap();
        match classify_invariant_line(&x3, &through).unwrap() {
            LineClass::ThroughEckardt { e } => {
                assert_eq!(e, pt(&[0, 1, 1, 1, 0]));
            }
            other => panic!("unexpected class {other:?}"),
        }
        let x1 = fixtures::fix1_cubic();
        let fixed = fixtures::fix1_line();
        assert_eq!(
            classify_invariant_line(&x1, &fixed).unwrap(),
            LineClass::PointwiseFixed
        );
        let off = Line::new(pt(&[1, 0, 0, 0, 1]), pt(&[0, 1, 0, 0, 0])).unwrap();
        assert_eq!(
            classify_invariant_line(&x1, &off).unwrap(),
            LineClass::NotOnX
        );
    }

    #[test]
    fn non_invariant_line_detected() {
        // build a threefold through the line spanned by (1,0,0,0,0) and
        // (0,1,0,0,1): with l = x0 this needs f(s,t,0,0) = -s t^2
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        loop {
            let mut f = p(4, "0").sub(&p(4, "x0*x1^2")).unwrap();
            for mono in [
                "x0^2*x2", "x0^2*x3", "x1^2*x2", "x1^2*x3", "x0*x1*x2", "x2^3", "x3^3", "x2^2*x3",
                "x2*x3^2", "x0*x2*x3", "x1*x2^2", "x0*x3^2",
            ] {
                let c = fint(rng.gen_range(-2..=2));
                f = f.add(&p(4, mono).scale(&c)).unwrap();
            }
            let Ok(pair) = CubicPair::new(f, p(4, "x0")) else {
                continue;
            };
            let Ok(x) = make_eckardt(&pair) else { continue };
            let line = Line::new(pt(&[1, 0, 0, 0, 0]), pt(&[0, 1, 0, 0, 1])).unwrap();
            assert!(contains_line(x.polynomial(), &line).unwrap());
            assert_eq!(
                classify_invariant_line(&x, &line).unwrap(),
                LineClass::NotInvariant
            );
            break;
        }
    }

    #[test]
    fn pointwise_lines_are_fixed_pointwise() {
        let x1 = fixtures::fix1_cubic();
        let ln = fixtures::fix1_line();
        if let LineClass::PointwiseFixed = classify_invariant_line(&x1, &ln).unwrap() {
            // every span combination has x4 = 0, hence is fixed
            assert!(ln.a[4].is_zero() && ln.b[4].is_zero());
        } else {
            panic!("expected pointwise fixed");
        }
    }

    #[test]
    fn through_p_normalization_of_fix3() {
        let x = fixtures::fix3_cubic();
        let line = fixtures::fix3_line();
        let norm = normalize_through_p(&x, &line).unwrap();
        // frozen by hand expansion of x1 -> x1 + x3, x2 -> x2 + x3 on the
        // fixture polynomial
        assert_eq!(norm.k, p(3, "3*x1 + 3*x2"));
        assert_eq!(norm.q, p(3, "3/2*x1^2 + 3/2*x2^2"));
        assert_eq!(norm.c, p(3, "x0^3 + x1^3 + x2^3"));
        assert_eq!(norm.l, p(3, "x0"));
        // reassembly matches the transformed polynomial exactly
        let moved = x.polynomial().apply_linear_change(&norm.t).unwrap();
        assert_eq!(norm.reassemble().unwrap(), moved);
    }

    #[test]
    fn through_p_normalization_idempotent() {
        let x = fixtures::fix3_cubic();
        let line = fixtures::fix3_line();
        let norm = normalize_through_p(&x, &line).unwrap();
        let moved = x.polynomial().apply_linear_change(&norm.t).unwrap();
        let pair = CubicPair::new(
            moved.coeff_of_power(4, 0).drop_vars(&[0, 1, 2, 3]).unwrap(),
            moved.coeff_of_power(4, 2).drop_vars(&[0, 1, 2, 3]).unwrap(),
        )
        .unwrap();
        let x2 = make_eckardt(&pair).unwrap();
        let std_line = Line::new(pt(&[0, 0, 0, 0, 1]), pt(&[0, 0, 0, 1, 0])).unwrap();
        let norm2 = normalize_through_p(&x2, &std_line).unwrap();
        assert!(norm2.t.is_identity());
    }

    #[test]
    fn wrong_branch_rejected() {
        let x1 = fixtures::fix1_cubic();
        let fixed = fixtures::fix1_line();
        assert!(matches!(
            normalize_through_p(&x1, &fixed),
            Err(Error::WrongLineType(_))
        ));
        let x3 = fixtures::fix3_cubic();
        let through = fixtures::fix3_line();
        assert!(matches!(
            normalize_pointwise(&x3, &through),
            Err(Error::WrongLineType(_))
        ));
    }

    #[test]
    fn pointwise_normalization_of_fix1() {
        let x = fixtures::fix1_cubic();
        let line = fixtures::fix1_line();
        let norm = normalize_pointwise(&x, &line).unwrap();
        // frozen from the hand expansion: f'' = 3 x0^2 x2 - 3 x0 x2^2 + x2^3
        // + 3 x1^2 x3 + 3 x1 x3^2 + x3^3 + x0 x4^2
        assert_eq!(
            norm.f_prime,
            p(
                5,
                "3*x0^2*x2 - 3*x0*x2^2 + x2^3 + 3*x1^2*x3 + 3*x1*x3^2 + x3^3 + x0*x4^2"
            )
        );
        use crate::binform::BinForm;
        let bf = |v: &[i64]| BinForm::new(v.iter().map(|&x| fint(x)).collect());
        assert_eq!(norm.l1, bf(&[3, 0]));
        assert_eq!(norm.l2, bf(&[0, 0]));
        assert_eq!(norm.l3, bf(&[0, 3]));
        assert_eq!(
            norm.q1,
            BinForm::new(vec![frac::frac(-3, 2), fint(0), fint(0)])
        );
        assert_eq!(
            norm.q2,
            BinForm::new(vec![fint(0), fint(0), frac::frac(3, 2)])
        );
        assert_eq!(norm.c, bf(&[1, 0, 0, 1]));
    }

    #[test]
    fn pointwise_normalization_idempotent() {
        let x = fixtures::fix1_cubic();
        let norm = normalize_pointwise(&x, &fixtures::fix1_line()).unwrap();
        let pair = CubicPair::new(
            norm.f_prime
                .coeff_of_power(4, 0)
                .drop_vars(&[0, 1, 2, 3])
                .unwrap(),
            p(4, "x0"),
        )
        .unwrap();
        let x2 = make_eckardt(&pair).unwrap();
        let std_line = Line::new(pt(&[1, 0, 0, 0, 0]), pt(&[0, 1, 0, 0, 0])).unwrap();
        let norm2 = normalize_pointwise(&x2, &std_line).unwrap();
        assert!(norm2.t.is_identity());
        assert_eq!(norm2.f_prime, norm.f_prime);
    }

    #[test]
    fn ruling_lines_live_on_the_cone() {
        let x = fixtures::fix3_cubic();
        let ln = ruling_line(&x, &pt(&[0, 1, 1, 1, 0])).unwrap();
        assert!(contains_line(x.polynomial(), &ln).unwrap());
        let x1 = fixtures::fix1_cubic();
        let ln2 = ruling_line(&x1, &pt(&[0, 1, -1, 0, 0])).unwrap();
        assert!(contains_line(x1.polynomial(), &ln2).unwrap());
        assert!(ruling_line(&x1, &pt(&[0, 1, 1, 0, 0])).is_err());
    }

    #[test]
    fn hyperplane_cuts_three_ruling_lines() {
        let x = fixtures::fix3_cubic();
        let h = p(4, "x3");
        let out = hyperplane_lines_through_p(&x, &h, 1e-10).unwrap();
        assert_eq!(out.points.len(), 3);
        for r in out.residuals {
            assert!(r < 1e-10);
        }
    }

    #[test]
    fn tangent_hyperplane_rejected() {
        let x = fixtures::fix3_cubic();
        // the tangent direction of the section curve at [0,1,1,1] is cut by
        // the gradient of f there: (0, 3, 3, -6)
        let h = p(4, "x1 + x2 - 2*x3");
        assert!(matches!(
            hyperplane_lines_through_p(&x, &h, 1e-10),
            Err(Error::NonTransverse(_))
        ));
        // a transverse hyperplane through the same point still gives three
        let h2 = p(4, "x1 - x2");
        let out = hyperplane_lines_through_p(&x, &h2, 1e-10).unwrap();
        assert_eq!(out.points.len(), 3);
    }

    #[test]
    fn section_cubic_of_fix1() {
        let x = fixtures::fix1_cubic();
        let (cubic, _) = x.elliptic_section().unwrap();
        // the plane (x0 = 0) is parametrized by the kernel basis; the pulled
        // back cubic is a Fermat cubic in the parameters up to relabeling
        assert_eq!(cubic.homogeneous_degree(), Some(3));
        assert_eq!(cubic.num_terms(), 3);
    }

    #[test]
    fn section_coordinates_of_marked_points() {
        let x = fixtures::fix3_cubic();
        let e = fixtures::fix3_point();
        let (cubic, param) = x.elliptic_section().unwrap();
        let u = x.section_coordinates(&e).unwrap();
        // the parametrized point maps back to e projectively
        let back = param.mul_vec(&u).unwrap();
        let m = FracMat::from_rows(vec![back, e]).unwrap();
        assert_eq!(m.rank_exact(), 1);
        // and satisfies the section cubic
        assert!(cubic.eval(&u).unwrap().is_zero());
        // points off the plane are rejected
        assert!(x.section_coordinates(&pt(&[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn dual_forms_validate() {
        let ln = Line::new(pt(&[1, -1, 0, 0]), pt(&[0, 0, 1, -1]))
            .unwrap()
            .with_dual(vec![p(4, "x0 + x1"), p(4, "x2 + x3")])
            .unwrap();
        assert!(ln.dual.is_some());
        let bad = Line::new(pt(&[1, -1, 0, 0]), pt(&[0, 0, 1, -1]))
            .unwrap()
            .with_dual(vec![p(4, "x0")]);
        assert!(bad.is_err());
        // serde keeps the dual forms
        let text = serde_json::to_string(&ln).unwrap();
        let back: Line = serde_json::from_str(&text).unwrap();
        assert_eq!(back.dual.unwrap().len(), 2);
    }
}
