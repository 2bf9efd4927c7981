//! Quadratic forms over GF(q) and the point sets they cut out.
//!
//! A form on m variables is f(x) = Σ_{i≤j} a_ij x_i x_j, stored as an
//! upper-triangular matrix A. Its polar bilinear form is B = A + Aᵀ.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::linalg::{dot, Matrix};
use crate::space::{HyperplaneId, PointId, ProjectiveSpace, Subspace};

/// Which of the two non-singular quadrics of odd projective dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn eps(self) -> i128 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn section_kind(self) -> SectionKind {
        match self {
            Sign::Plus => SectionKind::Hyperbolic,
            Sign::Minus => SectionKind::Elliptic,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "+" | "plus" | "hyperbolic" => Ok(Sign::Plus),
            "-" | "minus" | "elliptic" => Ok(Sign::Minus),
            _ => Err(format!("sign must be + or -, got {s:?}")),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// Closed-form point counts.
pub mod sizes {
    use super::Sign;

    fn pow(q: u64, e: u32) -> i128 {
        (q as i128).pow(e)
    }

    /// Points of PG(k,q).
    pub fn projective(k: u32, q: u64) -> i128 {
        (pow(q, k + 1) - 1) / (q as i128 - 1)
    }

    /// |Q(2n,q)| = (q^{2n} - 1)/(q - 1).
    pub fn parabolic(n: u32, q: u64) -> i128 {
        (pow(q, 2 * n) - 1) / (q as i128 - 1)
    }

    /// |Q±(2n-1,q)| = (q^n ∓ 1)(q^{n-1} ± 1)/(q - 1).
    pub fn pm(n: u32, q: u64, sign: Sign) -> i128 {
        assert!(n >= 1);
        let e = sign.eps();
        (pow(q, n) - e) * (pow(q, n - 1) + e) / (q as i128 - 1)
    }

    /// A point cone over a base of the given size.
    pub fn cone_over(base: i128, q: u64) -> i128 {
        1 + q as i128 * base
    }

    /// |PQ(2n-2,q)|, the section by a hyperplane through the nucleus.
    pub fn tangent_section(n: u32, q: u64) -> i128 {
        (pow(q, 2 * n - 1) - 1) / (q as i128 - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SectionKind {
    Elliptic,
    Hyperbolic,
    SingularCone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SectionClass {
    pub kind: SectionKind,
    pub count: u64,
}

/// Matches a hyperplane intersection size against the three section sizes
/// of Q(2n,q).
pub fn classify_count(count: u64, n: u32, q: u64) -> Result<SectionKind> {
    let c = count as i128;
    if c == sizes::pm(n, q, Sign::Minus) {
        Ok(SectionKind::Elliptic)
    } else if c == sizes::pm(n, q, Sign::Plus) {
        Ok(SectionKind::Hyperbolic)
    } else if c == sizes::tangent_section(n, q) {
        Ok(SectionKind::SingularCone)
    } else {
        Err(Error::Unclassifiable { count })
    }
}

/// Classifies H by |Q ∩ H|, where Q is meant to be a parabolic quadric of
/// PG(2n,q). Point sets that are not quadrics surface as `Unclassifiable`.
pub fn classify_section(
    space: &ProjectiveSpace,
    quadric: &BitSet,
    h: HyperplaneId,
) -> Result<SectionClass> {
    let n = half_dim(space)?;
    let count = quadric.and_count(&space.hyperplane_row(h)) as u64;
    Ok(SectionClass {
        kind: classify_count(count, n, space.q() as u64)?,
        count,
    })
}

/// n for PG(2n,q); odd dimensions are rejected.
pub fn half_dim(space: &ProjectiveSpace) -> Result<u32> {
    if !space.dim().is_multiple_of(2) || space.dim() < 2 {
        return Err(Error::Unsupported(format!(
            "expected an even-dimensional space PG(2n,q), got PG({},{})",
            space.dim(),
            space.q()
        )));
    }
    Ok(space.dim() as u32 / 2)
}

/// Type of a quadratic form in an even number of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormType {
    Hyperbolic,
    Elliptic,
    Degenerate,
}

#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: FieldSpec,
    nvars: usize,
    /// Row-major n×n, zero below the diagonal.
    upper: Vec<Elem>,
}

impl std::fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms = Vec::new();
        for i in 0..self.nvars {
            for j in i..self.nvars {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    terms.push(if i == j {
                        format!("{c}·x{i}²")
                    } else {
                        format!("{c}·x{i}x{j}")
                    });
                }
            }
        }
        write!(f, "Q[{}]", terms.join(" + "))
    }
}

impl Serialize for QuadraticForm {
    /// Serialized as the coefficient list in monomial order (i ≤ j, row-major).
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coefficients().iter().map(|e| e.0))
    }
}

/// Number of monomials x_i x_j with i ≤ j.
pub fn monomial_count(nvars: usize) -> usize {
    nvars * (nvars + 1) / 2
}

impl QuadraticForm {
    /// Builds a form from (i, j, coefficient) terms; (i, j) and (j, i) are
    /// the same monomial and accumulate.
    pub fn from_terms(
        field: &FieldSpec,
        nvars: usize,
        terms: &[(usize, usize, Elem)],
    ) -> Result<Self> {
        let mut upper = vec![Elem::ZERO; nvars * nvars];
        for &(i, j, c) in terms {
            if i >= nvars || j >= nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: i.max(j) + 1,
                });
            }
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            upper[a * nvars + b] = field.add(upper[a * nvars + b], c);
        }
        Self::from_upper(field.clone(), nvars, upper)
    }

    /// Builds a form from its coefficients in monomial order.
    pub fn from_coefficients(field: &FieldSpec, nvars: usize, coeffs: &[Elem]) -> Result<Self> {
        if coeffs.len() != monomial_count(nvars) {
            return Err(Error::DimensionMismatch {
                expected: monomial_count(nvars),
                got: coeffs.len(),
            });
        }
        let mut upper = vec![Elem::ZERO; nvars * nvars];
        let mut k = 0;
        for i in 0..nvars {
            for j in i..nvars {
                upper[i * nvars + j] = coeffs[k];
                k += 1;
            }
        }
        Self::from_upper(field.clone(), nvars, upper)
    }

    fn from_upper(field: FieldSpec, nvars: usize, upper: Vec<Elem>) -> Result<Self> {
        if upper.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroForm);
        }
        Ok(QuadraticForm {
            field,
            nvars,
            upper,
        })
    }

    /// x₀² + x₁x₂ + … + x_{2n−1}x_{2n} on 2n+1 variables.
    pub fn standard_parabolic(field: &FieldSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension { min: 1, got: n });
        }
        let mut terms = vec![(0, 0, Elem::ONE)];
        terms.extend((0..n).map(|k| (2 * k + 1, 2 * k + 2, Elem::ONE)));
        Self::from_terms(field, 2 * n + 1, &terms)
    }

    /// x₀x₁ + … + x_{2n−2}x_{2n−1} on 2n variables.
    pub fn standard_hyperbolic(field: &FieldSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension { min: 1, got: n });
        }
        let terms: Vec<_> = (0..n).map(|k| (2 * k, 2 * k + 1, Elem::ONE)).collect();
        Self::from_terms(field, 2 * n, &terms)
    }

    /// The hyperbolic form with its first block replaced by an irreducible
    /// binary quadratic: x₀² + x₀x₁ + c·x₁² (trace c = 1) in characteristic 2,
    /// x₀² − d·x₁² (d a non-square) otherwise.
    pub fn standard_elliptic(field: &FieldSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension { min: 1, got: n });
        }
        let c = elliptic_constant(field);
        let mut terms = vec![(0, 0, Elem::ONE)];
        if field.is_even() {
            terms.push((0, 1, Elem::ONE));
            terms.push((1, 1, c));
        } else {
            terms.push((1, 1, field.neg(c)));
        }
        terms.extend((1..n).map(|k| (2 * k, 2 * k + 1, Elem::ONE)));
        Self::from_terms(field, 2 * n, &terms)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> Elem {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.upper[a * self.nvars + b]
    }

    /// Coefficients in monomial order (i ≤ j, row-major).
    pub fn coefficients(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(monomial_count(self.nvars));
        for i in 0..self.nvars {
            for j in i..self.nvars {
                out.push(self.coeff(i, j));
            }
        }
        out
    }

    /// Coefficients scaled so the first non-zero one is 1.
    pub fn normalized_coefficients(&self) -> Vec<Elem> {
        let c = self.coefficients();
        let lead = *c.iter().find(|x| !x.is_zero()).expect("non-zero form");
        let inv = self.field.inv(lead).expect("non-zero");
        c.into_iter().map(|x| self.field.mul(x, inv)).collect()
    }

    pub fn equal_up_to_scalar(&self, other: &QuadraticForm) -> bool {
        self.nvars == other.nvars
            && self.field == other.field
            && self.normalized_coefficients() == other.normalized_coefficients()
    }

    #[inline]
    pub fn eval(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        let m = self.nvars;
        let mut acc = Elem::ZERO;
        for i in 0..m {
            if x[i].is_zero() {
                continue;
            }
            let mut row = Elem::ZERO;
            for j in i..m {
                let a = self.upper[i * m + j];
                if !a.is_zero() {
                    row = f.add(row, f.mul(a, x[j]));
                }
            }
            acc = f.add(acc, f.mul(x[i], row));
        }
        acc
    }

    /// B = A + Aᵀ.
    pub fn bilinear_matrix(&self) -> Matrix {
        let m = self.nvars;
        let mut b = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let v = self.field.add(self.upper[i * m + j], self.upper[j * m + i]);
                b.set(i, j, v);
            }
        }
        b
    }

    pub fn bilinear(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let bx = self
            .bilinear_matrix()
            .mul_vec(&self.field, y)
            .expect("lengths match");
        dot(&self.field, x, &bx)
    }

    /// The form g(y) = f(Σ y_k b_k) on the span of `basis`.
    pub fn restrict(&self, basis: &[Vec<Elem>]) -> Result<QuadraticForm> {
        let f = &self.field;
        let d = basis.len();
        let b = self.bilinear_matrix();
        let images: Vec<Vec<Elem>> = basis
            .iter()
            .map(|v| b.mul_vec(f, v))
            .collect::<Result<_>>()?;
        let mut upper = vec![Elem::ZERO; d * d];
        for k in 0..d {
            upper[k * d + k] = self.eval(&basis[k]);
            for l in k + 1..d {
                upper[k * d + l] = dot(f, &basis[k], &images[l]);
            }
        }
        // A zero restriction is legitimate here (e.g. a totally singular
        // subspace), so skip the non-zero guard.
        Ok(QuadraticForm {
            field: f.clone(),
            nvars: d,
            upper,
        })
    }

    fn check_space(&self, space: &ProjectiveSpace) -> Result<()> {
        if space.vector_len() != self.nvars || *space.field() != self.field {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: space.vector_len(),
            });
        }
        Ok(())
    }

    /// Zero set in PG(nvars - 1, q).
    pub fn point_set(&self, space: &ProjectiveSpace) -> Result<BitSet> {
        self.check_space(space)?;
        let npoints = space.num_points();
        let zeros: Vec<usize> = (0..npoints)
            .into_par_iter()
            .filter(|&p| self.eval(space.point_coords(PointId(p as u32))).is_zero())
            .collect();
        Ok(BitSet::from_indices(npoints, zeros))
    }

    /// Radical of the polar form, as a subspace.
    pub fn radical(&self) -> Result<Subspace> {
        let b = self.bilinear_matrix();
        Subspace::span(&self.field, self.nvars, &b.kernel_basis(&self.field))
    }

    /// The nucleus of a parabolic form in characteristic 2.
    pub fn nucleus(&self, space: &ProjectiveSpace) -> Result<PointId> {
        self.check_space(space)?;
        if !self.field.is_even() {
            return Err(Error::WrongCharacteristic("even"));
        }
        let rad = self.radical()?;
        if rad.dim() != 1 {
            return Err(Error::NoNucleus(format!(
                "bilinear radical has dimension {}",
                rad.dim()
            )));
        }
        space.point_index(&rad.basis()[0])
    }

    /// Non-singular: the radical is trivial, or (characteristic 2, odd
    /// number of variables) a single point off the quadric.
    pub fn is_nonsingular(&self) -> Result<bool> {
        let rad = self.radical()?;
        Ok(match rad.dim() {
            0 => true,
            1 if self.field.is_even() => !self.eval(&rad.basis()[0]).is_zero(),
            _ => false,
        })
    }

    /// {y : B(y, x) = 0 for all x in `sub`}.
    pub fn perp(&self, sub: &Subspace) -> Result<Subspace> {
        if sub.ambient() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: sub.ambient(),
            });
        }
        let b = self.bilinear_matrix();
        let rows: Vec<Vec<Elem>> = sub
            .basis()
            .iter()
            .map(|v| b.mul_vec(&self.field, v))
            .collect::<Result<_>>()?;
        let image = Subspace::span(&self.field, self.nvars, &rows)?;
        if image.dim() < sub.dim() {
            return Err(Error::Degenerate(
                "subspace meets the radical of the polar form".into(),
            ));
        }
        Subspace::from_dual(&self.field, self.nvars, image.basis())
    }

    /// Hyperbolic / elliptic / degenerate for a form in an even number of
    /// variables, computed from the form itself rather than point counts.
    ///
    /// Odd characteristic uses the discriminant; characteristic 2 uses the
    /// Arf invariant over a symplectic basis.
    pub fn form_type(&self) -> Result<FormType> {
        let m = self.nvars;
        if !m.is_multiple_of(2) {
            return Err(Error::Unsupported(
                "form_type needs an even number of variables".into(),
            ));
        }
        let f = &self.field;
        let b = self.bilinear_matrix();
        if !f.is_even() {
            let det = b.det(f)?;
            if det.is_zero() {
                return Ok(FormType::Degenerate);
            }
            let half = m / 2;
            let disc = if half % 2 == 1 { f.neg(det) } else { det };
            return Ok(if f.is_square(disc) {
                FormType::Hyperbolic
            } else {
                FormType::Elliptic
            });
        }
        if b.rank(f) < m {
            return Ok(FormType::Degenerate);
        }
        // Symplectic Gram–Schmidt, accumulating Arf = Σ f(e)f(f').
        let mut vecs: Vec<Vec<Elem>> = (0..m)
            .map(|i| {
                let mut v = vec![Elem::ZERO; m];
                v[i] = Elem::ONE;
                v
            })
            .collect();
        let bil = |x: &[Elem], y: &[Elem]| dot(f, x, &b.mul_vec(f, y).expect("len"));
        let mut arf = Elem::ZERO;
        while let Some(e) = vecs.pop() {
            let Some(pos) = vecs.iter().position(|v| !bil(&e, v).is_zero()) else {
                // Non-degenerate alternating form: every vector pairs with some other.
                return Ok(FormType::Degenerate);
            };
            let g = vecs.remove(pos);
            let inv = f.inv(bil(&e, &g))?;
            let g: Vec<Elem> = g.iter().map(|&x| f.mul(x, inv)).collect();
            arf = f.add(arf, f.mul(self.eval(&e), self.eval(&g)));
            for v in vecs.iter_mut() {
                let ve = bil(v, &e);
                let vg = bil(v, &g);
                for k in 0..m {
                    v[k] = f.add(v[k], f.add(f.mul(vg, e[k]), f.mul(ve, g[k])));
                }
            }
        }
        Ok(if f.absolute_trace(arf).is_zero() {
            FormType::Hyperbolic
        } else {
            FormType::Elliptic
        })
    }
}

/// The constant used by `standard_elliptic`: smallest index with absolute
/// trace 1 (characteristic 2) or smallest non-square (odd characteristic).
pub fn elliptic_constant(field: &FieldSpec) -> Elem {
    if field.is_even() {
        field
            .elements()
            .find(|&c| field.absolute_trace(c) == Elem::ONE)
            .expect("trace is onto GF(2)")
    } else {
        field
            .nonzero()
            .find(|&d| !field.is_square(d))
            .expect("odd fields have non-squares")
    }
}

/// Section type of H from the restriction of the form to a basis of H.
pub fn classify_section_algebraic(
    form: &QuadraticForm,
    space: &ProjectiveSpace,
    h: HyperplaneId,
) -> Result<SectionKind> {
    let f = space.field();
    let m = Matrix::from_rows(&[space.hyperplane_coords(h).to_vec()])?;
    let basis = m.kernel_basis(f);
    Ok(match form.restrict(&basis)?.form_type()? {
        FormType::Hyperbolic => SectionKind::Hyperbolic,
        FormType::Elliptic => SectionKind::Elliptic,
        FormType::Degenerate => SectionKind::SingularCone,
    })
}

/// The unique quadric through exactly the points of `set`, if any.
///
/// Solves f(x) = 0 over the monomial coefficients for every x in `set`;
/// succeeds iff the solution space is one-dimensional and the resulting
/// form vanishes on `set` and nowhere else.
pub fn fit_quadric(space: &ProjectiveSpace, set: &BitSet) -> Option<QuadraticForm> {
    let f = space.field();
    let m = space.vector_len();
    let ncoef = monomial_count(m);
    let mut sys = Matrix::zeros(0, ncoef);
    let mut row = Vec::with_capacity(ncoef);
    for p in set.iter() {
        let x = space.point_coords(PointId(p as u32));
        row.clear();
        for i in 0..m {
            for j in i..m {
                row.push(f.mul(x[i], x[j]));
            }
        }
        sys.push_row(&row).expect("row width");
    }
    if sys.rows() == 0 {
        return None;
    }
    let kernel = sys.kernel_basis(f);
    if kernel.len() != 1 {
        return None;
    }
    let form = QuadraticForm::from_coefficients(f, m, &kernel[0]).ok()?;
    (form.point_set(space).ok()? == *set).then_some(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    fn space(n: usize, q: u64) -> ProjectiveSpace {
        ProjectiveSpace::new(n, field(q)).unwrap()
    }

    /// Counts zeros of the form over every vector of GF(q)^m, then divides
    /// out scalars. Independent of the point table.
    fn affine_count(form: &QuadraticForm) -> u64 {
        let f = form.field();
        let q = f.q() as u64;
        let m = form.nvars();
        let mut zeros = 0u64;
        let mut x = vec![Elem::ZERO; m];
        for idx in 0..q.pow(m as u32) {
            let mut r = idx;
            for c in x.iter_mut() {
                *c = Elem((r % q) as u32);
                r /= q;
            }
            if form.eval(&x).is_zero() {
                zeros += 1;
            }
        }
        (zeros - 1) / (q - 1)
    }

    #[test]
    fn size_formulas() {
        assert_eq!(sizes::parabolic(2, 2), 15);
        assert_eq!(sizes::parabolic(2, 4), 85);
        assert_eq!(sizes::parabolic(3, 2), 63);
        assert_eq!(sizes::pm(2, 2, Sign::Plus), 9);
        assert_eq!(sizes::pm(2, 2, Sign::Minus), 5);
        assert_eq!(sizes::pm(2, 4, Sign::Plus), 25);
        assert_eq!(sizes::pm(2, 3, Sign::Minus), 10);
        assert_eq!(sizes::pm(1, 7, Sign::Plus), 2);
        assert_eq!(sizes::pm(1, 7, Sign::Minus), 0);
        assert_eq!(sizes::tangent_section(2, 2), 7);
        assert_eq!(sizes::cone_over(3, 2), 7);
        for n in 1..4 {
            for q in [2, 3, 4, 5, 8] {
                assert_eq!(
                    sizes::pm(n, q, Sign::Plus) + sizes::pm(n, q, Sign::Minus),
                    2 * sizes::tangent_section(n, q)
                );
                assert_eq!(
                    sizes::tangent_section(n, q),
                    sizes::cone_over(sizes::parabolic(n - 1, q), q)
                );
            }
        }
    }

    #[test]
    fn standard_forms_match_formulas() {
        for (n, q) in [(1, 2), (2, 2), (2, 4), (3, 2), (2, 3), (2, 5), (1, 9)] {
            let f = field(q);
            let par = QuadraticForm::standard_parabolic(&f, n).unwrap();
            let s = space(2 * n, q);
            assert_eq!(
                par.point_set(&s).unwrap().count() as i128,
                sizes::parabolic(n as u32, q)
            );
            assert!(par.is_nonsingular().unwrap());
            let rad = par.radical().unwrap().dim();
            assert_eq!(rad, if f.is_even() { 1 } else { 0 });
            if 2 * n > 2 {
                let t = space(2 * n - 1, q);
                let hyp = QuadraticForm::standard_hyperbolic(&f, n).unwrap();
                let ell = QuadraticForm::standard_elliptic(&f, n).unwrap();
                assert_eq!(
                    hyp.point_set(&t).unwrap().count() as i128,
                    sizes::pm(n as u32, q, Sign::Plus)
                );
                assert_eq!(
                    ell.point_set(&t).unwrap().count() as i128,
                    sizes::pm(n as u32, q, Sign::Minus)
                );
            }
        }
    }

    #[test]
    fn affine_chart_oracle() {
        // hyperbolic n=2 q=4 must be 25 points
        let f = field(4);
        let hyp = QuadraticForm::standard_hyperbolic(&f, 2).unwrap();
        assert_eq!(affine_count(&hyp), 25);
        let s = space(3, 4);
        assert_eq!(hyp.point_set(&s).unwrap().count(), 25);
        let ell = QuadraticForm::standard_elliptic(&field(3), 2).unwrap();
        assert_eq!(affine_count(&ell), 10);
        let par = QuadraticForm::standard_parabolic(&field(2), 2).unwrap();
        assert_eq!(affine_count(&par), 15);
    }

    #[test]
    fn elliptic_constants() {
        assert_eq!(elliptic_constant(&field(2)), Elem(1));
        assert_eq!(elliptic_constant(&field(4)), Elem(2));
        assert_eq!(elliptic_constant(&field(3)), Elem(2));
        assert_eq!(elliptic_constant(&field(5)), Elem(2));
    }

    #[test]
    fn zero_form_rejected() {
        let f = field(2);
        assert_eq!(QuadraticForm::from_terms(&f, 3, &[]), Err(Error::ZeroForm));
        assert_eq!(
            QuadraticForm::from_terms(&f, 3, &[(0, 1, Elem(1)), (1, 0, Elem(1))]),
            Err(Error::ZeroForm)
        );
        assert!(QuadraticForm::from_terms(&f, 3, &[(0, 3, Elem(1))]).is_err());
    }

    #[test]
    fn nuclei() {
        let s = space(4, 2);
        let par = QuadraticForm::standard_parabolic(s.field(), 2).unwrap();
        let nuc = par.nucleus(&s).unwrap();
        assert_eq!(
            s.point_coords(nuc),
            &[Elem(1), Elem(0), Elem(0), Elem(0), Elem(0)]
        );
        let s6 = space(6, 4);
        let par = QuadraticForm::standard_parabolic(s6.field(), 3).unwrap();
        assert_eq!(s6.point_coords(par.nucleus(&s6).unwrap())[0], Elem(1));
        let s3 = space(4, 3);
        let par = QuadraticForm::standard_parabolic(s3.field(), 2).unwrap();
        assert_eq!(par.nucleus(&s3), Err(Error::WrongCharacteristic("even")));
    }

    #[test]
    fn every_nucleus_line_meets_once() {
        for (n, q) in [(2, 2), (2, 4), (3, 2)] {
            let s = space(2 * n, q);
            let par = QuadraticForm::standard_parabolic(s.field(), n).unwrap();
            let qset = par.point_set(&s).unwrap();
            let nuc = par.nucleus(&s).unwrap();
            let lines = s.lines_through(nuc);
            assert_eq!(lines.len() as i128, sizes::parabolic(n as u32, q));
            for l in lines {
                assert_eq!(
                    l.points.iter().filter(|p| qset.contains(p.index())).count(),
                    1
                );
            }
        }
    }

    #[test]
    fn census_and_algebraic_classifier_agree() {
        for (n, q, hyp, ell, sing) in [
            (2, 2, 10, 6, 15),
            (3, 2, 36, 28, 63),
            (2, 4, 136, 120, 85),
            (2, 3, 45, 36, 40),
        ] {
            let s = space(2 * n, q);
            let par = QuadraticForm::standard_parabolic(s.field(), n).unwrap();
            let qset = par.point_set(&s).unwrap();
            let mut tally = [0; 3];
            for h in s.hyperplanes() {
                let by_count = classify_section(&s, &qset, h).unwrap();
                let by_form = classify_section_algebraic(&par, &s, h).unwrap();
                assert_eq!(by_count.kind, by_form, "hyperplane {h:?}");
                tally[by_count.kind as usize] += 1;
            }
            assert_eq!(tally, [ell, hyp, sing], "PG({},{q})", 2 * n);
        }
    }

    #[test]
    fn tangent_section_through_nucleus() {
        let s = space(4, 2);
        let par = QuadraticForm::standard_parabolic(s.field(), 2).unwrap();
        let qset = par.point_set(&s).unwrap();
        let nuc = par.nucleus(&s).unwrap();
        for h in s.hyperplanes().filter(|&h| s.incident(nuc, h)) {
            let c = classify_section(&s, &qset, h).unwrap();
            assert_eq!(c.kind, SectionKind::SingularCone);
            assert_eq!(c.count, 7);
        }
    }

    #[test]
    fn unclassifiable_counts_are_errors() {
        let s = space(4, 2);
        let set = BitSet::from_indices(31, 0..4);
        let err = s
            .hyperplanes()
            .find_map(|h| classify_section(&s, &set, h).err())
            .unwrap();
        assert!(matches!(err, Error::Unclassifiable { .. }));
    }

    #[test]
    fn perp_is_a_line_and_involutive() {
        let s = space(4, 3);
        let f = s.field();
        let par = QuadraticForm::standard_parabolic(f, 2).unwrap();
        let qset = par.point_set(&s).unwrap();
        let mut meets = std::collections::BTreeSet::new();
        for k in (0..s.codim2_count()).step_by(7) {
            let flat = s.codim2_at(k);
            let sub = Subspace::of_flat(&s, &flat).unwrap();
            let line = par.perp(&sub).unwrap();
            assert_eq!(line.dim(), 2);
            let pts = line.points(&s);
            assert_eq!(pts.len(), 4);
            meets.insert(pts.iter().filter(|p| qset.contains(p.index())).count());
            assert_eq!(par.perp(&line).unwrap(), sub);
        }
        assert!(meets.is_subset(&[0, 1, 2, 4].into_iter().collect()));
    }

    #[test]
    fn perp_in_even_characteristic_needs_flat_off_radical() {
        let s = space(4, 2);
        let par = QuadraticForm::standard_parabolic(s.field(), 2).unwrap();
        let nuc = par.nucleus(&s).unwrap();
        let nuc_v = s.point_coords(nuc).to_vec();
        let mut saw_err = false;
        for flat in s.codim2_iter() {
            let sub = Subspace::of_flat(&s, &flat).unwrap();
            match par.perp(&sub) {
                Ok(line) => {
                    assert!(!sub.contains(s.field(), &nuc_v));
                    assert_eq!(line.dim(), 2);
                    assert!(line.contains(s.field(), &nuc_v));
                }
                Err(Error::Degenerate(_)) => {
                    assert!(sub.contains(s.field(), &nuc_v));
                    saw_err = true;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(saw_err);
    }

    #[test]
    fn fit_recovers_standard_forms() {
        for (n, q) in [(2, 2), (2, 4), (3, 2), (2, 3)] {
            let s = space(2 * n, q);
            let par = QuadraticForm::standard_parabolic(s.field(), n).unwrap();
            let qset = par.point_set(&s).unwrap();
            let fitted = fit_quadric(&s, &qset).expect("fit");
            assert!(fitted.equal_up_to_scalar(&par));
        }
        let s = space(3, 3);
        for form in [
            QuadraticForm::standard_hyperbolic(s.field(), 2).unwrap(),
            QuadraticForm::standard_elliptic(s.field(), 2).unwrap(),
        ] {
            let set = form.point_set(&s).unwrap();
            assert!(fit_quadric(&s, &set).unwrap().equal_up_to_scalar(&form));
        }
    }

    #[test]
    fn fit_rejects_non_quadrics() {
        let s = space(4, 2);
        assert!(fit_quadric(&s, &BitSet::full(31)).is_none());
        assert!(fit_quadric(&s, &BitSet::new(31)).is_none());
        let par = QuadraticForm::standard_parabolic(s.field(), 2).unwrap();
        let mut set = par.point_set(&s).unwrap();
        let first = set.iter().next().unwrap();
        set.remove(first);
        assert!(fit_quadric(&s, &set).is_none());
    }
}
