//! Conditions (I) and (II) on the hyperbolic or elliptic sections of
//! Q(2n,q), followed by the exact counting identities.
//!
//!     cargo run --release --example family_conditions -- 3 2 -

use pgq::family::{
    check_condition_i, check_condition_ii, colour_points, family_from_classification,
    verify_counting_identities, DEFAULT_VIOLATION_CAP,
};
use pgq::quadric::{QuadraticForm, Sign};
use pgq::{FieldSpec, ProjectiveSpace};

fn verdict(passed: Option<bool>) -> &'static str {
    match passed {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "not applicable",
    }
}

fn main() -> pgq::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u32 = args.first().map_or(2, |s| s.parse().expect("n"));
    let q: u64 = args.get(1).map_or(4, |s| s.parse().expect("q"));
    let sign: Sign = args
        .get(2)
        .map_or(Ok(Sign::Plus), |s| s.parse())
        .expect("sign");

    let space = ProjectiveSpace::new(2 * n as usize, FieldSpec::of_order(q)?)?;
    let form = QuadraticForm::standard_parabolic(space.field(), n as usize)?;
    let quadric = form.point_set(&space)?;
    let family = family_from_classification(&space, &quadric, sign)?.chosen;

    let colouring = colour_points(&space, &family, sign, DEFAULT_VIOLATION_CAP)?;
    println!("{} with {} members", family.label, family.len());
    println!("members through each point: {:?}", colouring.histogram);
    println!(
        "red {} white {} black {}",
        colouring.red, colouring.white, colouring.black
    );
    println!(
        "condition I: {}",
        verdict(check_condition_i(&colouring).passed)
    );

    let ii = check_condition_ii(&space, &family, DEFAULT_VIOLATION_CAP);
    println!(
        "members through each codim-2 flat: {:?}",
        ii.spectrum.values
    );
    println!(
        "condition II: {}",
        verdict(ii.verdict.and_then(|v| v.passed))
    );

    if space.field().is_even() {
        let ids = verify_counting_identities(&space, &colouring, &family)?;
        println!("h = {:?}, h mod q^(n-1) = {:?}", ids.h, ids.h_residue);
        for c in &ids.checks {
            println!("  {:<58} {}", c.name, if c.holds { "ok" } else { "FAILS" });
        }
    }
    Ok(())
}
