//! Hyperovals and the solids missing them, quasi-quadric verification, and
//! nucleus-line switching.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::family::{
    check_condition_i, check_condition_ii, colour_points, hyperplanes_missing, ColouringReport,
    ConditionIIReport, HyperplaneFamily, Verdict, DEFAULT_VIOLATION_CAP,
};
use crate::field::Elem;
use crate::quadric::{fit_quadric, half_dim, sizes, QuadraticForm, Sign};
use crate::space::{HyperplaneId, Line, PointId, ProjectiveSpace};

/// True when no line through two of `points` contains a third.
pub fn no_three_collinear(space: &ProjectiveSpace, points: &[PointId]) -> bool {
    let set = space.point_set_of(points);
    if set.count() != points.len() {
        return false;
    }
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let line = space.line_through(a, b).expect("distinct points");
            if line
                .points
                .iter()
                .filter(|p| set.contains(p.index()))
                .count()
                > 2
            {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hyperoval {
    /// Exponent of the generating monomial t ↦ t^{2^k}; 1 for the conic.
    pub k: u32,
    pub points: Vec<PointId>,
}

impl Hyperoval {
    /// The conic {(1,t,t²)} with its nucleus (0,1,0) and the point (0,0,1),
    /// in the plane x3 = x4 = 0.
    pub fn regular(space: &ProjectiveSpace) -> Result<Self> {
        Self::build(space, 1)
    }

    /// {(1,t,t^{2^k})} ∪ {(0,1,0), (0,0,1)} for gcd(k, h) = 1.
    pub fn translation(space: &ProjectiveSpace, k: u32) -> Result<Self> {
        let h = space.field().h();
        if k == 0 || gcd(k, h) != 1 {
            return Err(Error::InvalidExponent { k, h });
        }
        Self::build(space, k)
    }

    fn build(space: &ProjectiveSpace, k: u32) -> Result<Self> {
        let f = space.field();
        if !f.is_even() {
            return Err(Error::WrongCharacteristic("even"));
        }
        if space.dim() != 4 {
            return Err(Error::Unsupported(format!(
                "hyperovals are embedded in PG(4,q), not PG({},q)",
                space.dim()
            )));
        }
        let e = 1u64 << k;
        let point =
            |a: Elem, b: Elem, c: Elem| space.point_index(&[a, b, c, Elem::ZERO, Elem::ZERO]);
        let mut points = Vec::with_capacity(f.q() as usize + 2);
        for t in f.elements() {
            points.push(point(Elem::ONE, t, f.pow(t, e))?);
        }
        points.push(point(Elem::ZERO, Elem::ONE, Elem::ZERO)?);
        points.push(point(Elem::ZERO, Elem::ZERO, Elem::ONE)?);
        points.sort_unstable();
        if !no_three_collinear(space, &points) {
            return Err(Error::Degenerate(format!(
                "t -> t^{e} does not give a hyperoval"
            )));
        }
        Ok(Hyperoval { k, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_set(&self, space: &ProjectiveSpace) -> BitSet {
        space.point_set_of(&self.points)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Solids of PG(4,q) containing no point of the hyperoval.
pub fn solids_disjoint_from(space: &ProjectiveSpace, oval: &Hyperoval) -> HyperplaneFamily {
    HyperplaneFamily::new(
        "solids missing O",
        hyperplanes_missing(space, &oval.point_set(space)),
    )
}

/// Colours seen on lines through red points, keyed by how many red points
/// the line carries.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RedLineClass {
    pub lines: u64,
    /// (white, black) on the line → number of lines.
    pub colours: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RedLineCensus {
    pub by_red_count: BTreeMap<u64, RedLineClass>,
    pub verdict: Verdict,
}

/// Every line through a red point r: the other points of the line carry,
/// between them, every member exactly once. For a hyperoval family the
/// tangent lines must be all black and the secants all white.
pub fn red_line_census(
    space: &ProjectiveSpace,
    report: &ColouringReport,
    hyperoval: bool,
) -> RedLineCensus {
    let red = report.red_set();
    let white = report.white_set();
    let black = report.black_set();
    let q = space.q() as u64;
    let mut seen = BTreeSet::new();
    let mut by_red_count: BTreeMap<u64, RedLineClass> = BTreeMap::new();
    let mut problems = Vec::new();
    for r in red.iter() {
        let r = PointId(r as u32);
        for line in space.lines_through(r) {
            let incidences: u64 = line
                .points
                .iter()
                .filter(|&&p| p != r)
                .map(|p| report.counts[p.index()])
                .sum();
            if incidences != report.family_size && problems.len() < DEFAULT_VIOLATION_CAP {
                problems.push(format!(
                    "line through red point {} sees {incidences} incidences",
                    r.0
                ));
            }
            if !seen.insert(line.points.clone()) {
                continue;
            }
            let count =
                |s: &BitSet| line.points.iter().filter(|p| s.contains(p.index())).count() as u64;
            let (rc, wc, bc) = (count(&red), count(&white), count(&black));
            let class = by_red_count.entry(rc).or_default();
            class.lines += 1;
            *class.colours.entry(format!("{wc}w/{bc}b")).or_insert(0) += 1;
            if hyperoval {
                let ok = match rc {
                    1 => bc == q,
                    2 => wc == q - 1 && bc == 0,
                    _ => false,
                };
                if !ok && problems.len() < DEFAULT_VIOLATION_CAP {
                    problems.push(format!(
                        "line with {rc} red points has {wc} white and {bc} black"
                    ));
                }
            }
        }
    }
    let verdict =
        Verdict::from_violations("lines through red points", problems.len() as u64, problems);
    RedLineCensus {
        by_red_count,
        verdict,
    }
}

/// Full verification of the family of solids missing a hyperoval.
#[derive(Clone, Debug, Serialize)]
pub struct HyperovalReport {
    pub hyperoval: Hyperoval,
    pub family_size: u64,
    pub expected_family_size: u64,
    pub colouring: ColouringReport,
    pub expected_colours: (u64, u64, u64),
    pub condition_i: Verdict,
    pub condition_ii: ConditionIIReport,
    pub lines: RedLineCensus,
    pub verdicts: Vec<Verdict>,
}

pub fn verify_hyperoval_family(
    space: &ProjectiveSpace,
    oval: &Hyperoval,
) -> Result<HyperovalReport> {
    let q = space.q() as u64;
    let family = solids_disjoint_from(space, oval);
    let colouring = colour_points(space, &family, Sign::Minus, DEFAULT_VIOLATION_CAP)?;
    let condition_i = check_condition_i(&colouring);
    let condition_ii = check_condition_ii(space, &family, DEFAULT_VIOLATION_CAP);
    let lines = red_line_census(space, &colouring, true);
    let expected_family_size = q * q * (q * q - q) / 2;
    let expected_colours = (q + 2, q * q - 1, q.pow(4) + q.pow(3));
    let mut verdicts = vec![
        Verdict::from_violations(
            "family size",
            u64::from(family.len() as u64 != expected_family_size),
            vec![format!(
                "{} solids, expected {expected_family_size}",
                family.len()
            )],
        ),
        Verdict::from_violations(
            "red/white/black census",
            u64::from((colouring.red, colouring.white, colouring.black) != expected_colours),
            vec![format!(
                "({}, {}, {}), expected {expected_colours:?}",
                colouring.red, colouring.white, colouring.black
            )],
        ),
        condition_i.clone(),
    ];
    verdicts.extend(condition_ii.verdict.clone());
    verdicts.push(lines.verdict.clone());
    Ok(HyperovalReport {
        hyperoval: oval.clone(),
        family_size: family.len() as u64,
        expected_family_size,
        colouring,
        expected_colours,
        condition_i,
        condition_ii,
        lines,
        verdicts,
    })
}

/// Lines through `nucleus`, in canonical order.
pub fn nucleus_lines(space: &ProjectiveSpace, nucleus: PointId) -> Vec<Line> {
    space.lines_through(nucleus)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiQuadricCandidate {
    pub nucleus: PointId,
    pub size: u64,
    pub expected_size: u64,
    pub size_ok: bool,
    pub nucleus_lines_ok: bool,
    /// |K ∩ H| → number of hyperplanes H missing the nucleus.
    pub hyperplane_spectrum: BTreeMap<u64, u64>,
    pub spectrum_ok: bool,
    /// Condition (I) on the hyperplanes meeting K like Q±(2n-1,q); only
    /// evaluated when the three structural checks pass.
    pub induced_condition_i: Option<[Verdict; 2]>,
}

impl QuasiQuadricCandidate {
    pub fn passes(&self) -> bool {
        self.size_ok && self.nucleus_lines_ok && self.spectrum_ok
    }
}

fn nucleus_line_ok(space: &ProjectiveSpace, k: &BitSet, nucleus: PointId) -> bool {
    !k.contains(nucleus.index())
        && nucleus_lines(space, nucleus)
            .iter()
            .all(|l| l.points.iter().filter(|p| k.contains(p.index())).count() == 1)
}

fn hyperplane_spectrum(
    space: &ProjectiveSpace,
    k: &BitSet,
    nucleus: PointId,
) -> BTreeMap<u64, u64> {
    let mut spec = BTreeMap::new();
    for h in space.hyperplanes() {
        if !space.incident(nucleus, h) {
            *spec
                .entry(space.hyperplane_row(h).and_count(k) as u64)
                .or_insert(0) += 1;
        }
    }
    spec
}

/// Size, nucleus-line and hyperplane-section checks for a point set with a
/// designated nucleus.
pub fn verify_quasi_quadric(
    space: &ProjectiveSpace,
    k: &BitSet,
    nucleus: PointId,
) -> Result<QuasiQuadricCandidate> {
    let n = half_dim(space)?;
    let q = space.q() as u64;
    let expected_size = sizes::parabolic(n, q) as u64;
    let size = k.count() as u64;
    let nucleus_lines_ok = nucleus_line_ok(space, k, nucleus);
    let hyperplane_spectrum = hyperplane_spectrum(space, k, nucleus);
    let allowed = [
        sizes::pm(n, q, Sign::Plus) as u64,
        sizes::pm(n, q, Sign::Minus) as u64,
    ];
    let spectrum_ok = hyperplane_spectrum.keys().all(|v| allowed.contains(v));
    let mut cand = QuasiQuadricCandidate {
        nucleus,
        size,
        expected_size,
        size_ok: size == expected_size,
        nucleus_lines_ok,
        hyperplane_spectrum,
        spectrum_ok,
        induced_condition_i: None,
    };
    if cand.passes() {
        let verdict = |sign: Sign, target: u64| -> Result<Verdict> {
            let members: Vec<usize> = space
                .hyperplanes()
                .filter(|&h| {
                    !space.incident(nucleus, h)
                        && space.hyperplane_row(h).and_count(k) as u64 == target
                })
                .map(HyperplaneId::index)
                .collect();
            let fam = HyperplaneFamily::new(
                format!("H{}", sign.symbol()),
                BitSet::from_indices(space.num_hyperplanes(), members),
            );
            let mut v =
                check_condition_i(&colour_points(space, &fam, sign, DEFAULT_VIOLATION_CAP)?);
            v.check = format!("condition I on induced H{}", sign.symbol());
            Ok(v)
        };
        cand.induced_condition_i = Some([
            verdict(Sign::Plus, allowed[0])?,
            verdict(Sign::Minus, allowed[1])?,
        ]);
    }
    Ok(cand)
}

/// On every selected nucleus line, replaces the unique point of K by another
/// point of the line other than the nucleus: the one `offset` steps further
/// along the line's remaining points in index order.
pub fn nucleus_line_switch(
    space: &ProjectiveSpace,
    k: &BitSet,
    nucleus: PointId,
    selection: &[Line],
    offset: usize,
) -> Result<BitSet> {
    if !nucleus_line_ok(space, k, nucleus) {
        return Err(Error::HypothesisNotMet(
            "set does not meet every nucleus line exactly once".into(),
        ));
    }
    let mut out = k.clone();
    for (i, line) in selection.iter().enumerate() {
        if !line.contains(nucleus) {
            return Err(Error::LineNotThroughNucleus(i));
        }
        let current = *line
            .points
            .iter()
            .find(|p| k.contains(p.index()))
            .expect("one point per nucleus line");
        let others: Vec<PointId> = line
            .points
            .iter()
            .copied()
            .filter(|&p| p != nucleus && p != current)
            .collect();
        let pick = others[offset % others.len()];
        out.remove(current.index());
        out.insert(pick.index());
    }
    Ok(out)
}

/// One candidate of the exhaustive search. Bit i of `mask` switches the
/// i-th nucleus line; bit p of `points` is point p of the candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchRecord {
    pub mask: u32,
    pub points: u64,
    pub passes: bool,
    pub is_quadric: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwitchSearchReport {
    pub nucleus: PointId,
    pub lines: Vec<Vec<PointId>>,
    pub candidates: u64,
    pub passing: u64,
    pub passing_quadrics: u64,
    pub passing_non_quadrics: u64,
    pub standard_passes: bool,
    /// Masks of every passing candidate, ascending.
    pub passing_masks: Vec<u32>,
    #[serde(skip)]
    pub records: Vec<SwitchRecord>,
}

/// Every one-point-per-nucleus-line set of PG(4,2), obtained by switching
/// subsets of the 15 nucleus lines of the standard parabolic quadric.
pub fn exhaustive_switch_search(space: &ProjectiveSpace) -> Result<SwitchSearchReport> {
    if space.dim() != 4 || space.q() != 2 {
        return Err(Error::Unsupported(
            "the exhaustive switch search runs in PG(4,2) only".into(),
        ));
    }
    let form = QuadraticForm::standard_parabolic(space.field(), 2)?;
    let base = form.point_set(space)?;
    let nucleus = form.nucleus(space)?;
    let lines = nucleus_lines(space, nucleus);
    // (current point, alternative) on each line
    let swaps: Vec<(usize, usize)> = lines
        .iter()
        .map(|l| {
            let mut it = l
                .points
                .iter()
                .filter(|&&p| p != nucleus)
                .map(|p| p.index());
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            if base.contains(a) {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    let base_bits: u64 = base.iter().map(|p| 1u64 << p).sum();
    let allowed = [
        sizes::pm(2, 2, Sign::Plus) as u32,
        sizes::pm(2, 2, Sign::Minus) as u32,
    ];
    let off_nucleus: Vec<u64> = space
        .hyperplanes()
        .filter(|&h| !space.incident(nucleus, h))
        .map(|h| space.hyperplane_row(h).iter().map(|p| 1u64 << p).sum())
        .collect();
    let ncand = 1u32 << lines.len();
    let records: Vec<SwitchRecord> = (0..ncand)
        .into_par_iter()
        .map(|mask| {
            let mut bits = base_bits;
            for (i, &(a, b)) in swaps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    bits ^= (1 << a) | (1 << b);
                }
            }
            let passes = off_nucleus
                .iter()
                .all(|h| allowed.contains(&(h & bits).count_ones()));
            let is_quadric = passes && {
                let set = BitSet::from_indices(
                    space.num_points(),
                    (0..space.num_points()).filter(|p| bits >> p & 1 == 1),
                );
                fit_quadric(space, &set).is_some()
            };
            SwitchRecord {
                mask,
                points: bits,
                passes,
                is_quadric,
            }
        })
        .collect();
    let passing = records.iter().filter(|r| r.passes).count() as u64;
    let passing_quadrics = records.iter().filter(|r| r.is_quadric).count() as u64;
    Ok(SwitchSearchReport {
        nucleus,
        lines: lines.into_iter().map(|l| l.points).collect(),
        candidates: records.len() as u64,
        passing,
        passing_quadrics,
        passing_non_quadrics: passing - passing_quadrics,
        standard_passes: records[0].passes,
        passing_masks: records
            .iter()
            .filter(|r| r.passes)
            .map(|r| r.mask)
            .collect(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn pg4(q: u64) -> ProjectiveSpace {
        ProjectiveSpace::new(4, FieldSpec::of_order(q).unwrap()).unwrap()
    }

    #[test]
    fn hyperoval_sizes() {
        let s = pg4(2);
        let o = Hyperoval::regular(&s).unwrap();
        assert_eq!(o.len(), 4);
        assert_eq!(solids_disjoint_from(&s, &o).len(), 4);
        let s = pg4(4);
        let o = Hyperoval::regular(&s).unwrap();
        assert_eq!(o.len(), 6);
        assert_eq!(solids_disjoint_from(&s, &o).len(), 96);
        assert!(Hyperoval::translation(&s, 2).is_err());
        assert_eq!(Hyperoval::translation(&s, 1).unwrap(), o);
        assert!(Hyperoval::regular(&pg4(3)).is_err());
    }

    #[test]
    fn translation_oval_q8() {
        let s = pg4(8);
        let o = Hyperoval::translation(&s, 2).unwrap();
        assert_eq!(o.len(), 10);
        assert_ne!(o, Hyperoval::regular(&s).unwrap());
        assert!(matches!(
            Hyperoval::translation(&s, 3),
            Err(Error::InvalidExponent { k: 3, h: 3 })
        ));
    }

    #[test]
    fn collinearity() {
        let s = pg4(2);
        let line = s.line_through(PointId(0), PointId(1)).unwrap();
        assert!(!no_three_collinear(&s, &line.points));
        assert!(no_three_collinear(&s, &line.points[..2]));
    }

    #[test]
    fn hyperoval_family_q4() {
        let s = pg4(4);
        let r = verify_hyperoval_family(&s, &Hyperoval::regular(&s).unwrap()).unwrap();
        assert!(r.verdicts.iter().all(Verdict::is_pass), "{:?}", r.verdicts);
        assert_eq!(r.colouring.white_value, Some(32));
        assert_eq!(r.colouring.black_value, Some(24));
    }

    #[test]
    fn quadric_is_quasi_quadric() {
        let s = pg4(4);
        let form = QuadraticForm::standard_parabolic(s.field(), 2).unwrap();
        let k = form.point_set(&s).unwrap();
        let n = form.nucleus(&s).unwrap();
        let c = verify_quasi_quadric(&s, &k, n).unwrap();
        assert!(c.passes());
        assert!(c
            .induced_condition_i
            .as_ref()
            .unwrap()
            .iter()
            .all(Verdict::is_pass));

        let lines = nucleus_lines(&s, n);
        assert_eq!(lines.len(), 85);
        let moved = nucleus_line_switch(&s, &k, n, &lines[..1], 0).unwrap();
        let c = verify_quasi_quadric(&s, &moved, n).unwrap();
        assert!(c.size_ok && c.nucleus_lines_ok && !c.spectrum_ok);
        assert!(c.induced_condition_i.is_none());
    }

    #[test]
    fn switching_rules() {
        let s = pg4(2);
        let form = QuadraticForm::standard_parabolic(s.field(), 2).unwrap();
        let k = form.point_set(&s).unwrap();
        let n = form.nucleus(&s).unwrap();
        assert_eq!(nucleus_line_switch(&s, &k, n, &[], 0).unwrap(), k);
        let lines = nucleus_lines(&s, n);
        let all = nucleus_line_switch(&s, &k, n, &lines, 0).unwrap();
        let mut expected = k.complement();
        expected.remove(n.index());
        assert_eq!(all, expected);
        let stray = s.lines_through(k.iter().map(|p| PointId(p as u32)).next().unwrap());
        let bad = stray.into_iter().find(|l| !l.contains(n)).unwrap();
        assert_eq!(
            nucleus_line_switch(&s, &k, n, &[lines[0].clone(), bad], 0),
            Err(Error::LineNotThroughNucleus(1))
        );
    }

    #[test]
    fn switch_search_counts() {
        let s = pg4(2);
        let r = exhaustive_switch_search(&s).unwrap();
        assert_eq!(r.candidates, 32768);
        assert!(r.standard_passes);
        assert!(r.records[0].is_quadric);
        assert_eq!(r.passing_quadrics, 448);
        assert!(exhaustive_switch_search(&pg4(4)).is_err());
    }
}
