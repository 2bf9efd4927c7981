//! Pencil counts of the ±-sections of Q(2n,q) for odd q, grouped by how
//! the polar line of each codimension-2 flat meets the quadric.
//!
//!     cargo run --release --example odd_spectrum -- 5 -

use pgq::family::odd_q_spectrum;
use pgq::quadric::{QuadraticForm, Sign};
use pgq::{FieldSpec, ProjectiveSpace};

fn main() -> pgq::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let q: u64 = args.first().map_or(3, |s| s.parse().expect("q"));
    let sign: Sign = args
        .get(1)
        .map_or(Ok(Sign::Plus), |s| s.parse())
        .expect("sign");
    let space = ProjectiveSpace::new(4, FieldSpec::of_order(q)?)?;
    let form = QuadraticForm::standard_parabolic(space.field(), 2)?;
    let r = odd_q_spectrum(&space, &form, sign)?;
    println!("allowed values {:?}", r.allowed);
    println!(
        "spectrum over {} flats: {:?}",
        r.spectrum.objects, r.spectrum.values
    );
    for (meet, counts) in &r.by_perp_meet {
        println!("  polar line meets Q in {meet}: {counts:?}");
    }
    println!("{}", if r.verdict.is_pass() { "PASS" } else { "FAIL" });
    Ok(())
}
