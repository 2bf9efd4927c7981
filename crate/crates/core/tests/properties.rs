//! Randomized invariants.

use std::collections::BTreeSet;

use pgq::constructions::{nucleus_line_switch, nucleus_lines, verify_quasi_quadric};
use pgq::family::{format_family, parse_family, HyperplaneFamily};
use pgq::quadric::QuadraticForm;
use pgq::{BitSet, Elem, FieldSpec, HyperplaneId, PointId, ProjectiveSpace};
use proptest::prelude::*;

const ORDERS: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 16];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(qi in 0..ORDERS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = FieldSpec::of_order(ORDERS[qi]).unwrap();
        let q = f.q();
        let (a, b, c) = (Elem(a % q), Elem(b % q), Elem(c % q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn bitset_matches_btreeset(len in 1usize..300, xs in prop::collection::vec(any::<usize>(), 0..80),
                               ys in prop::collection::vec(any::<usize>(), 0..80)) {
        let xs: BTreeSet<usize> = xs.into_iter().map(|x| x % len).collect();
        let ys: BTreeSet<usize> = ys.into_iter().map(|y| y % len).collect();
        let a = BitSet::from_indices(len, xs.iter().copied());
        let b = BitSet::from_indices(len, ys.iter().copied());
        prop_assert_eq!(a.count(), xs.len());
        prop_assert_eq!(a.and_count(&b), xs.intersection(&ys).count());
        prop_assert_eq!(a.union(&b).to_vec(), xs.union(&ys).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.difference(&b).to_vec(), xs.difference(&ys).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.complement().count(), len - xs.len());
        prop_assert_eq!(a.intersects(&b), !xs.is_disjoint(&ys));
    }

    #[test]
    fn switching_keeps_one_point_per_nucleus_line(q in prop::sample::select(vec![2u64, 4]),
                                                   mask in any::<u128>(), offset in 0usize..8) {
        let space = ProjectiveSpace::new(4, FieldSpec::of_order(q).unwrap()).unwrap();
        let form = QuadraticForm::standard_parabolic(space.field(), 2).unwrap();
        let k = form.point_set(&space).unwrap();
        let n = form.nucleus(&space).unwrap();
        let lines = nucleus_lines(&space, n);
        let selection: Vec<_> = lines.iter().enumerate()
            .filter(|(i, _)| mask >> (i % 128) & 1 == 1)
            .map(|(_, l)| l.clone())
            .collect();
        let switched = nucleus_line_switch(&space, &k, n, &selection, offset).unwrap();
        let c = verify_quasi_quadric(&space, &switched, n).unwrap();
        prop_assert!(c.size_ok);
        prop_assert!(c.nucleus_lines_ok);
        prop_assert_eq!(switched == k, selection.is_empty());
    }

    #[test]
    fn family_text_round_trip(mask in prop::collection::vec(any::<bool>(), 85), scale in 1u32..4) {
        let space = ProjectiveSpace::new(3, FieldSpec::of_order(4).unwrap()).unwrap();
        let members = BitSet::from_indices(85, mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i));
        let fam = HyperplaneFamily::new("random", members);
        // scale every row by a non-zero constant before reading it back
        let f = space.field();
        let text: String = format_family(&space, &fam)
            .lines()
            .map(|l| {
                l.split(' ')
                    .map(|t| f.mul(Elem(t.parse().unwrap()), Elem(scale)).0.to_string())
                    .collect::<Vec<_>>()
                    .join("  ")
                    + " # scaled\n"
            })
            .collect();
        prop_assert_eq!(parse_family(&space, "random", &text).unwrap(), fam);
    }

    #[test]
    fn incidence_and_pencils(qi in 0..4usize, a in any::<u32>(), b in any::<u32>()) {
        let q = [2u64, 3, 4, 5][qi];
        let space = ProjectiveSpace::new(4, FieldSpec::of_order(q).unwrap()).unwrap();
        let total = space.num_hyperplanes() as u32;
        let (ha, hb) = (HyperplaneId(a % total), HyperplaneId(b % total));
        let p = PointId(a % total);
        prop_assert_eq!(space.incident(p, hb), space.hyperplanes_through(p).contains(hb.index()));
        if ha != hb {
            let flat = space.codim2_from_hyperplanes(ha, hb).unwrap();
            prop_assert_eq!(flat.pencil.len() as u64, q + 1);
            prop_assert!(flat.pencil.contains(&ha) && flat.pencil.contains(&hb));
            let pts = space.flat_points(&flat);
            prop_assert_eq!(pts.count() as u64, (q.pow(3) - 1) / (q - 1));
            for h in &flat.pencil {
                prop_assert_eq!(space.hyperplane_row(*h).and_count(&pts), pts.count());
            }
        }
    }
}
