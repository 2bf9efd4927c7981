//! The parabolic quadric Q(2n,q), its nucleus, and how the hyperplanes
//! split into hyperbolic, elliptic and tangent sections.
//!
//!     cargo run --release --example quadric_census -- 2 4

use pgq::family::family_from_classification;
use pgq::quadric::{sizes, QuadraticForm, Sign};
use pgq::{FieldSpec, ProjectiveSpace};

fn main() -> pgq::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(2) as u32;
    let q = args.next().unwrap_or(2);
    let space = ProjectiveSpace::new(2 * n as usize, FieldSpec::of_order(q)?)?;
    let form = QuadraticForm::standard_parabolic(space.field(), n as usize)?;
    let quadric = form.point_set(&space)?;
    println!(
        "Q({},{q}): {} points (formula {})",
        2 * n,
        quadric.count(),
        sizes::parabolic(n, q)
    );
    println!(
        "form coefficients {:?}",
        form.coefficients().iter().map(|e| e.0).collect::<Vec<_>>()
    );
    if let Ok(nucleus) = form.nucleus(&space) {
        println!(
            "nucleus: point {} = {:?}",
            nucleus.0,
            space
                .point_coords(nucleus)
                .iter()
                .map(|e| e.0)
                .collect::<Vec<_>>()
        );
    }
    let part = family_from_classification(&space, &quadric, Sign::Plus)?;
    println!(
        "hyperbolic {} (q^n(q^n+1)/2 = {}), elliptic {} (q^n(q^n-1)/2 = {}), tangent {}",
        part.chosen.len(),
        q.pow(n) * (q.pow(n) + 1) / 2,
        part.opposite.len(),
        q.pow(n) * (q.pow(n) - 1) / 2,
        part.tangent.len()
    );
    Ok(())
}
