//! Decides which shape a family satisfying both conditions has, for
//! quadric sections, a hyperoval family, or a family read from a file.
//!
//!     cargo run --release --example theorem_check
//!     cargo run --release --example theorem_check -- family.txt 2 2 +

use pgq::constructions::{solids_disjoint_from, Hyperoval};
use pgq::family::{
    all_but_pencil, family_from_classification, parse_family, theorem_conclusion_check,
    HyperplaneFamily,
};
use pgq::quadric::{QuadraticForm, Sign};
use pgq::{FieldSpec, ProjectiveSpace};

fn show(space: &ProjectiveSpace, family: &HyperplaneFamily, sign: Sign) {
    match theorem_conclusion_check(space, family, sign) {
        Ok(r) => println!(
            "{:<24} {}",
            family.label,
            serde_json::to_string(&r.conclusion).unwrap()
        ),
        Err(e) => println!("{:<24} rejected: {e}", family.label),
    }
}

fn main() -> pgq::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let Some(path) = args.first() {
        let n: usize = args.get(1).map_or(2, |s| s.parse().expect("n"));
        let q: u64 = args.get(2).map_or(2, |s| s.parse().expect("q"));
        let sign: Sign = args
            .get(3)
            .map_or(Ok(Sign::Plus), |s| s.parse())
            .expect("sign");
        let space = ProjectiveSpace::new(2 * n, FieldSpec::of_order(q)?)?;
        let family = parse_family(&space, path, &std::fs::read_to_string(path)?)?;
        show(&space, &family, sign);
        return Ok(());
    }

    for q in [2, 4] {
        let space = ProjectiveSpace::new(4, FieldSpec::of_order(q)?)?;
        let form = QuadraticForm::standard_parabolic(space.field(), 2)?;
        let quadric = form.point_set(&space)?;
        for sign in [Sign::Plus, Sign::Minus] {
            show(
                &space,
                &family_from_classification(&space, &quadric, sign)?.chosen,
                sign,
            );
        }
        show(
            &space,
            &solids_disjoint_from(&space, &Hyperoval::regular(&space)?),
            Sign::Minus,
        );
        show(
            &space,
            &all_but_pencil(&space, &space.codim2_at(0)),
            Sign::Plus,
        );
    }
    Ok(())
}
