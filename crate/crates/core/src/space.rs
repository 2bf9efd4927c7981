//! Points, hyperplanes, lines and codimension-2 flats of PG(N,q).
//!
//! Points and hyperplanes share one table of normalized vectors (leftmost
//! non-zero coordinate equal to 1) in lexicographic order of coordinate
//! indices. A point P lies on a hyperplane H iff P·H = 0, so the incidence
//! relation is symmetric under the duality that swaps the two tables.

use std::borrow::Cow;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::linalg::{axpy, dot, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PointId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct HyperplaneId(pub u32);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl HyperplaneId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// [n choose k]_q, the number of k-dimensional subspaces of GF(q)^n.
pub fn gaussian_binomial(n: u32, k: u32, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

#[derive(Clone, Copy, Debug)]
pub struct SpaceOptions {
    /// Refuse to build tables with more points than this.
    pub max_points: u128,
    /// Precompute incidence bitmaps up to this many points.
    pub bitmap_bound: usize,
}

impl Default for SpaceOptions {
    fn default() -> Self {
        SpaceOptions {
            max_points: 1 << 22,
            bitmap_bound: 1 << 16,
        }
    }
}

/// An (N-2)-dimensional subspace, stored by the reduced echelon basis of
/// the hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodimTwoFlat {
    pub dual: [Vec<Elem>; 2],
    /// The q+1 hyperplanes through the flat, ascending.
    pub pencil: Vec<HyperplaneId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Line {
    pub points: Vec<PointId>,
}

impl Line {
    pub fn contains(&self, p: PointId) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

#[derive(Clone, Copy, Debug)]
struct FlatBlock {
    i: usize,
    j: usize,
    start: usize,
    free: u32,
}

pub struct ProjectiveSpace {
    dim: usize,
    field: FieldSpec,
    npoints: usize,
    coords: Vec<Elem>,
    /// Row h holds the points on hyperplane h.
    incidence: Option<Vec<BitSet>>,
    blocks: Vec<FlatBlock>,
    nflats: usize,
}

impl std::fmt::Debug for ProjectiveSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({},{})", self.dim, self.field.q())
    }
}

impl ProjectiveSpace {
    pub fn new(dim: usize, field: FieldSpec) -> Result<Self> {
        Self::with_options(dim, field, SpaceOptions::default())
    }

    pub fn with_options(dim: usize, field: FieldSpec, opts: SpaceOptions) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { min: 2, got: dim });
        }
        let q = field.q() as u128;
        let count = gaussian_binomial(dim as u32 + 1, 1, q);
        if count > opts.max_points {
            return Err(Error::SpaceTooLarge {
                points: count,
                bound: opts.max_points,
            });
        }
        let m = dim + 1;
        let npoints = count as usize;
        let mut coords = Vec::with_capacity(npoints * m);
        let qu = field.q() as u64;
        for lead in (0..m).rev() {
            let tail = m - 1 - lead;
            for t in 0..qu.pow(tail as u32) {
                coords.extend(std::iter::repeat_n(Elem::ZERO, lead));
                coords.push(Elem::ONE);
                let start = coords.len();
                coords.extend(std::iter::repeat_n(Elem::ZERO, tail));
                let mut rest = t;
                for k in (0..tail).rev() {
                    coords[start + k] = Elem((rest % qu) as u32);
                    rest /= qu;
                }
            }
        }
        debug_assert_eq!(coords.len(), npoints * m);

        let mut blocks = Vec::new();
        let mut start = 0usize;
        for i in 0..m {
            for j in i + 1..m {
                let free = (m - i - 2 + m - 1 - j) as u32;
                blocks.push(FlatBlock { i, j, start, free });
                start += qu.pow(free) as usize;
            }
        }
        let nflats = start;
        debug_assert_eq!(nflats as u128, gaussian_binomial(m as u32, 2, q));

        let mut space = ProjectiveSpace {
            dim,
            field,
            npoints,
            coords,
            incidence: None,
            blocks,
            nflats,
        };
        if npoints <= opts.bitmap_bound {
            let rows = (0..npoints)
                .into_par_iter()
                .map(|h| space.compute_row(HyperplaneId(h as u32)))
                .collect();
            space.incidence = Some(rows);
        }
        Ok(space)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of coordinate vectors, N + 1.
    #[inline]
    pub fn vector_len(&self) -> usize {
        self.dim + 1
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    #[inline]
    pub fn num_points(&self) -> usize {
        self.npoints
    }

    #[inline]
    pub fn num_hyperplanes(&self) -> usize {
        self.npoints
    }

    /// Points on a hyperplane: (q^N - 1)/(q - 1).
    pub fn points_per_hyperplane(&self) -> usize {
        gaussian_binomial(self.dim as u32, 1, self.q() as u128) as usize
    }

    pub fn has_bitmaps(&self) -> bool {
        self.incidence.is_some()
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.npoints as u32).map(PointId)
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = HyperplaneId> + '_ {
        (0..self.npoints as u32).map(HyperplaneId)
    }

    #[inline]
    pub fn point_coords(&self, p: PointId) -> &[Elem] {
        let m = self.vector_len();
        &self.coords[p.index() * m..(p.index() + 1) * m]
    }

    #[inline]
    pub fn hyperplane_coords(&self, h: HyperplaneId) -> &[Elem] {
        let m = self.vector_len();
        &self.coords[h.index() * m..(h.index() + 1) * m]
    }

    /// Scales a non-zero vector so its leftmost non-zero entry is 1.
    pub fn normalize(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        let lead = v.iter().find(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
        let inv = self.field.inv(*lead)?;
        Ok(v.iter().map(|&x| self.field.mul(x, inv)).collect())
    }

    /// Table index of an already-normalized vector.
    #[inline]
    pub fn rank_normalized(&self, v: &[Elem]) -> usize {
        let m = self.vector_len();
        let q = self.field.q() as usize;
        let lead = v
            .iter()
            .position(|x| !x.is_zero())
            .expect("non-zero vector");
        debug_assert_eq!(v[lead], Elem::ONE);
        let mut before = 0usize;
        let mut pw = 1usize;
        for _ in 0..m - 1 - lead {
            before += pw;
            pw *= q;
        }
        let mut offset = 0usize;
        for &x in &v[lead + 1..] {
            offset = offset * q + x.index();
        }
        before + offset
    }

    fn check_len(&self, v: &[Elem]) -> Result<()> {
        if v.len() != self.vector_len() {
            return Err(Error::DimensionMismatch {
                expected: self.vector_len(),
                got: v.len(),
            });
        }
        if let Some(x) = v.iter().find(|x| x.0 >= self.q()) {
            return Err(Error::ElementOutOfRange(x.0 as u64));
        }
        Ok(())
    }

    pub fn point_index(&self, v: &[Elem]) -> Result<PointId> {
        self.check_len(v)?;
        Ok(PointId(self.rank_normalized(&self.normalize(v)?) as u32))
    }

    pub fn hyperplane_index(&self, v: &[Elem]) -> Result<HyperplaneId> {
        self.check_len(v)?;
        Ok(HyperplaneId(
            self.rank_normalized(&self.normalize(v)?) as u32
        ))
    }

    /// The hyperplane with the same coordinate vector as `p`.
    pub fn dual_of_point(&self, p: PointId) -> HyperplaneId {
        HyperplaneId(p.0)
    }

    #[inline]
    pub fn incident(&self, p: PointId, h: HyperplaneId) -> bool {
        match &self.incidence {
            Some(rows) => rows[h.index()].contains(p.index()),
            None => dot(&self.field, self.point_coords(p), self.hyperplane_coords(h)).is_zero(),
        }
    }

    fn compute_row(&self, h: HyperplaneId) -> BitSet {
        let hv = self.hyperplane_coords(h);
        let f = &self.field;
        BitSet::from_indices(
            self.npoints,
            (0..self.npoints)
                .filter(|&p| dot(f, self.point_coords(PointId(p as u32)), hv).is_zero()),
        )
    }

    /// Points on hyperplane `h` as a bitset over point indices.
    pub fn hyperplane_row(&self, h: HyperplaneId) -> Cow<'_, BitSet> {
        match &self.incidence {
            Some(rows) => Cow::Borrowed(&rows[h.index()]),
            None => Cow::Owned(self.compute_row(h)),
        }
    }

    /// Hyperplanes through `p` as a bitset over hyperplane indices.
    pub fn hyperplanes_through(&self, p: PointId) -> Cow<'_, BitSet> {
        self.hyperplane_row(self.dual_of_point(p))
    }

    pub fn points_on(&self, h: HyperplaneId) -> Vec<PointId> {
        self.hyperplane_row(h)
            .iter()
            .map(|i| PointId(i as u32))
            .collect()
    }

    // --- codimension-2 flats ---

    /// [N+1 choose 2]_q.
    pub fn codim2_count(&self) -> usize {
        self.nflats
    }

    /// The k-th codimension-2 flat in canonical enumeration order.
    ///
    /// Flats are enumerated directly as 2×(N+1) reduced echelon matrices,
    /// grouped by pivot pair.
    pub fn codim2_at(&self, k: usize) -> CodimTwoFlat {
        assert!(k < self.nflats);
        let block = match self.blocks.binary_search_by(|b| b.start.cmp(&k)) {
            Ok(i) => self.blocks[i],
            Err(i) => self.blocks[i - 1],
        };
        let m = self.vector_len();
        let q = self.field.q() as usize;
        let mut local = k - block.start;
        let mut r1 = vec![Elem::ZERO; m];
        let mut r2 = vec![Elem::ZERO; m];
        r1[block.i] = Elem::ONE;
        r2[block.j] = Elem::ONE;
        let slots: Vec<(usize, usize)> = (block.i + 1..m)
            .filter(|&c| c != block.j)
            .map(|c| (0, c))
            .chain((block.j + 1..m).map(|c| (1, c)))
            .collect();
        debug_assert_eq!(slots.len() as u32, block.free);
        for &(row, c) in slots.iter().rev() {
            let d = Elem((local % q) as u32);
            local /= q;
            if row == 0 {
                r1[c] = d;
            } else {
                r2[c] = d;
            }
        }
        let pencil = self.pencil_of(&r1, &r2);
        CodimTwoFlat {
            dual: [r1, r2],
            pencil,
        }
    }

    /// Pencil of the flat cut out by two echelon rows (r1 leads before r2).
    fn pencil_of(&self, r1: &[Elem], r2: &[Elem]) -> Vec<HyperplaneId> {
        let f = &self.field;
        let mut out = Vec::with_capacity(f.q() as usize + 1);
        out.push(HyperplaneId(self.rank_normalized(r2) as u32));
        for t in f.elements() {
            let v = axpy(f, r1, t, r2);
            out.push(HyperplaneId(self.rank_normalized(&v) as u32));
        }
        out.sort_unstable();
        out
    }

    pub fn codim2_iter(&self) -> impl Iterator<Item = CodimTwoFlat> + '_ {
        (0..self.nflats).map(move |k| self.codim2_at(k))
    }

    /// Folds every flat (with its enumeration index) into per-chunk
    /// accumulators in parallel, then merges them with `merge`.
    pub fn codim2_map_reduce<T, M, R>(
        &self,
        identity: impl Fn() -> T + Sync + Send,
        map: M,
        merge: R,
    ) -> T
    where
        T: Send,
        M: Fn(&mut T, usize, &CodimTwoFlat) + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        let chunk = 4096usize;
        let nchunks = self.nflats.div_ceil(chunk);
        (0..nchunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = identity();
                for k in c * chunk..((c + 1) * chunk).min(self.nflats) {
                    map(&mut acc, k, &self.codim2_at(k));
                }
                acc
            })
            .reduce(&identity, &merge)
    }

    /// The flat H1 ∩ H2 in canonical form.
    pub fn codim2_from_hyperplanes(
        &self,
        a: HyperplaneId,
        b: HyperplaneId,
    ) -> Result<CodimTwoFlat> {
        if a == b {
            return Err(Error::Degenerate(
                "a codimension-2 flat needs two distinct hyperplanes".into(),
            ));
        }
        let mut m = Matrix::from_rows(&[
            self.hyperplane_coords(a).to_vec(),
            self.hyperplane_coords(b).to_vec(),
        ])?;
        m.rref(&self.field);
        let r1 = m.row(0).to_vec();
        let r2 = m.row(1).to_vec();
        let pencil = self.pencil_of(&r1, &r2);
        Ok(CodimTwoFlat {
            dual: [r1, r2],
            pencil,
        })
    }

    pub fn pencil(&self, flat: &CodimTwoFlat) -> Vec<HyperplaneId> {
        flat.pencil.clone()
    }

    /// Points of a flat: the intersection of two hyperplanes of its pencil.
    pub fn flat_points(&self, flat: &CodimTwoFlat) -> BitSet {
        self.hyperplane_row(flat.pencil[0])
            .intersection(&self.hyperplane_row(flat.pencil[1]))
    }

    // --- lines ---

    pub fn line_through(&self, a: PointId, b: PointId) -> Result<Line> {
        if a == b {
            return Err(Error::EqualPoints);
        }
        let f = &self.field;
        let va = self.point_coords(a);
        let vb = self.point_coords(b);
        let mut points = Vec::with_capacity(f.q() as usize + 1);
        points.push(a);
        for t in f.elements() {
            let v = axpy(f, vb, t, va);
            points.push(self.point_index(&v)?);
        }
        points.sort_unstable();
        Ok(Line { points })
    }

    /// All lines through `p`, in order of their first point after `p`.
    pub fn lines_through(&self, p: PointId) -> Vec<Line> {
        let mut covered = BitSet::new(self.npoints);
        covered.insert(p.index());
        let mut lines = Vec::new();
        for other in self.points() {
            if covered.contains(other.index()) {
                continue;
            }
            let line = self.line_through(p, other).expect("distinct points");
            for &x in &line.points {
                covered.insert(x.index());
            }
            lines.push(line);
        }
        lines
    }

    pub fn point_set_of(&self, points: &[PointId]) -> BitSet {
        BitSet::from_indices(self.npoints, points.iter().map(|p| p.index()))
    }
}

/// A vector subspace of GF(q)^{N+1}, stored by a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Vec<Vec<Elem>>,
    ambient: usize,
}

impl Subspace {
    pub fn span(field: &FieldSpec, ambient: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        let mut m = Matrix::from_rows_with_cols(vectors, ambient)?;
        let rank = m.rref(field).len();
        let basis = (0..rank).map(|r| m.row(r).to_vec()).collect();
        Ok(Subspace { basis, ambient })
    }

    /// The common zeros of the given dual vectors.
    pub fn from_dual(field: &FieldSpec, ambient: usize, dual: &[Vec<Elem>]) -> Result<Self> {
        let m = Matrix::from_rows_with_cols(dual, ambient)?;
        Subspace::span(field, ambient, &m.kernel_basis(field))
    }

    pub fn of_flat(space: &ProjectiveSpace, flat: &CodimTwoFlat) -> Result<Self> {
        Subspace::from_dual(space.field(), space.vector_len(), &flat.dual)
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Vector-space dimension; projective dimension is one less.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn contains(&self, field: &FieldSpec, v: &[Elem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows_with_cols(&rows, self.ambient)
            .map(|m| m.rank(field) == self.dim())
            .unwrap_or(false)
    }

    /// Dual rows cutting out this subspace.
    pub fn dual(&self, field: &FieldSpec) -> Vec<Vec<Elem>> {
        Matrix::from_rows_with_cols(&self.basis, self.ambient)
            .expect("basis rows have ambient length")
            .kernel_basis(field)
    }

    /// Point indices of the subspace, by enumerating normalized coefficient
    /// vectors over the basis.
    pub fn points(&self, space: &ProjectiveSpace) -> Vec<PointId> {
        let f = space.field();
        let d = self.dim();
        if d == 0 {
            return vec![];
        }
        let q = f.q() as u64;
        let mut out = Vec::new();
        for lead in 0..d {
            let tail = (d - 1 - lead) as u32;
            for t in 0..q.pow(tail) {
                let mut v = self.basis[lead].clone();
                let mut rest = t;
                for k in (lead + 1..d).rev() {
                    let c = Elem((rest % q) as u32);
                    rest /= q;
                    if !c.is_zero() {
                        v = axpy(f, &v, c, &self.basis[k]);
                    }
                }
                out.push(
                    space
                        .point_index(&v)
                        .expect("basis vectors are independent"),
                );
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn space(n: usize, q: u64) -> ProjectiveSpace {
        ProjectiveSpace::new(n, FieldSpec::of_order(q).unwrap()).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(5, 1, 2), 31);
        assert_eq!(gaussian_binomial(5, 2, 2), 155);
        assert_eq!(gaussian_binomial(5, 2, 4), 5797);
        assert_eq!(gaussian_binomial(3, 2, 2), 7);
        assert_eq!(gaussian_binomial(3, 4, 2), 0);
    }

    #[test]
    fn point_counts() {
        assert_eq!(space(4, 2).num_points(), 31);
        assert_eq!(space(4, 4).num_points(), 341);
        assert_eq!(space(6, 2).num_points(), 127);
    }

    #[test]
    fn rejects_small_dimension_and_oversize() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert!(matches!(
            ProjectiveSpace::new(1, f.clone()),
            Err(Error::InvalidDimension { .. })
        ));
        let opts = SpaceOptions {
            max_points: 100,
            ..Default::default()
        };
        assert!(matches!(
            ProjectiveSpace::with_options(6, f, opts),
            Err(Error::SpaceTooLarge { .. })
        ));
    }

    #[test]
    fn table_is_sorted_and_ranks_round_trip() {
        let s = space(3, 3);
        let m = s.vector_len();
        for p in s.points() {
            let v = s.point_coords(p);
            assert_eq!(s.point_index(v).unwrap(), p);
            if p.0 > 0 {
                let prev = s.point_coords(PointId(p.0 - 1));
                assert!(prev.iter().map(|e| e.0).lt(v.iter().map(|e| e.0)));
            }
            assert_eq!(v.len(), m);
            assert_eq!(v.iter().find(|x| !x.is_zero()), Some(&Elem::ONE));
        }
        // non-normalized input gets normalized
        let f = s.field();
        let scaled: Vec<Elem> = s
            .point_coords(PointId(17))
            .iter()
            .map(|&x| f.mul(x, Elem(2)))
            .collect();
        assert_eq!(s.point_index(&scaled).unwrap(), PointId(17));
        assert!(s.point_index(&[Elem(0); 4]).is_err());
        assert!(s.point_index(&[Elem(1); 3]).is_err());
    }

    #[test]
    fn incidence_examples() {
        let s = space(4, 2);
        let e = |v: [u32; 5]| v.map(Elem).to_vec();
        let p = s.point_index(&e([1, 0, 0, 0, 0])).unwrap();
        let h = s.hyperplane_index(&e([0, 1, 0, 0, 0])).unwrap();
        assert!(s.incident(p, h));
        let h2 = s.hyperplane_index(&e([1, 0, 0, 0, 0])).unwrap();
        assert!(!s.incident(p, h2));
        for p in s.points() {
            assert_eq!(s.hyperplanes_through(p).count(), 15);
        }
    }

    #[test]
    fn on_the_fly_incidence_matches_bitmaps() {
        let f = FieldSpec::new(3, 1).unwrap();
        let a = ProjectiveSpace::new(3, f.clone()).unwrap();
        let b = ProjectiveSpace::with_options(
            3,
            f,
            SpaceOptions {
                bitmap_bound: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(a.has_bitmaps() && !b.has_bitmaps());
        for h in a.hyperplanes() {
            assert_eq!(a.hyperplane_row(h).as_ref(), b.hyperplane_row(h).as_ref());
        }
    }

    #[test]
    fn codim2_counts_and_pencils() {
        for (n, q, expected) in [(4, 2, 155), (2, 2, 7), (4, 4, 5797), (3, 3, 130)] {
            let s = space(n, q);
            assert_eq!(s.codim2_count(), expected);
            let mut seen = HashSet::new();
            for flat in s.codim2_iter() {
                assert_eq!(flat.pencil.len(), q as usize + 1);
                assert!(seen.insert(flat.dual.clone()), "flat listed twice");
            }
        }
    }

    /// A hyperplane of PG(4,q) contains [4 choose 1]_q flats.
    #[test]
    fn pencil_double_count() {
        let s = space(4, 2);
        let mut per_h = vec![0usize; s.num_hyperplanes()];
        for flat in s.codim2_iter() {
            for h in &flat.pencil {
                per_h[h.index()] += 1;
            }
        }
        let expected = gaussian_binomial(4, 1, 2) as usize;
        assert!(per_h.iter().all(|&c| c == expected));
    }

    #[test]
    fn pencil_members_share_the_flat() {
        let s = space(4, 3);
        for k in (0..s.codim2_count()).step_by(97) {
            let flat = s.codim2_at(k);
            let pts = s.flat_points(&flat);
            assert_eq!(pts.count(), 13);
            for h in &flat.pencil {
                assert_eq!(s.hyperplane_row(*h).and_count(&pts), 13);
            }
            // a point on two pencil members is on all of them
            for p in s.points() {
                let on = flat.pencil.iter().filter(|h| s.incident(p, **h)).count();
                assert!(on <= 1 || on == flat.pencil.len());
            }
        }
    }

    #[test]
    fn flat_from_hyperplane_pair_is_canonical() {
        let s = space(4, 2);
        let flat = s.codim2_at(40);
        let again = s
            .codim2_from_hyperplanes(flat.pencil[2], flat.pencil[0])
            .unwrap();
        assert_eq!(flat, again);
        assert!(s
            .codim2_from_hyperplanes(HyperplaneId(3), HyperplaneId(3))
            .is_err());
    }

    #[test]
    fn lines() {
        let s = space(4, 2);
        let l = s.line_through(PointId(0), PointId(5)).unwrap();
        assert_eq!(l.points.len(), 3);
        assert!(l.contains(PointId(0)) && l.contains(PointId(5)));
        assert_eq!(
            s.line_through(PointId(2), PointId(2)),
            Err(Error::EqualPoints)
        );
        assert_eq!(s.lines_through(PointId(7)).len(), 15);
        let s4 = space(3, 4);
        let l = s4.line_through(PointId(1), PointId(30)).unwrap();
        assert_eq!(l.points.len(), 5);
        // closed: the line through any two of its points is itself
        assert_eq!(s4.line_through(l.points[2], l.points[4]).unwrap(), l);
    }

    #[test]
    fn subspace_points_and_dual() {
        let s = space(4, 3);
        let f = s.field();
        let flat = s.codim2_at(123);
        let sub = Subspace::of_flat(&s, &flat).unwrap();
        assert_eq!(sub.dim(), 3);
        let pts = sub.points(&s);
        assert_eq!(s.point_set_of(&pts), s.flat_points(&flat));
        let back = Subspace::from_dual(f, 5, &sub.dual(f)).unwrap();
        assert_eq!(back, sub);
    }
}
