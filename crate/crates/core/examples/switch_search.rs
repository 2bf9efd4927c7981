//! Quasi-quadric checks and the exhaustive nucleus-line switch search in
//! PG(4,2).
//!
//!     cargo run --release --example switch_search

use pgq::constructions::{
    exhaustive_switch_search, nucleus_line_switch, nucleus_lines, verify_quasi_quadric,
};
use pgq::quadric::QuadraticForm;
use pgq::{FieldSpec, ProjectiveSpace};

fn main() -> pgq::Result<()> {
    let space = ProjectiveSpace::new(4, FieldSpec::of_order(2)?)?;
    let form = QuadraticForm::standard_parabolic(space.field(), 2)?;
    let k = form.point_set(&space)?;
    let nucleus = form.nucleus(&space)?;

    let base = verify_quasi_quadric(&space, &k, nucleus)?;
    println!(
        "Q(4,2): sections off the nucleus {:?}, passes {}",
        base.hyperplane_spectrum,
        base.passes()
    );

    let lines = nucleus_lines(&space, nucleus);
    let one = nucleus_line_switch(&space, &k, nucleus, &lines[..1], 0)?;
    let c = verify_quasi_quadric(&space, &one, nucleus)?;
    println!(
        "one line switched: sections {:?}, passes {}",
        c.hyperplane_spectrum,
        c.passes()
    );

    let report = exhaustive_switch_search(&space)?;
    println!(
        "{} candidates, {} pass, {} of them quadrics, {} not",
        report.candidates, report.passing, report.passing_quadrics, report.passing_non_quadrics
    );
    Ok(())
}
