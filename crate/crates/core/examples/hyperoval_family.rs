//! The solids of PG(4,q) missing a hyperoval, verified end to end.
//!
//!     cargo run --release --example hyperoval_family -- 8 2

use pgq::constructions::{verify_hyperoval_family, Hyperoval};
use pgq::{FieldSpec, ProjectiveSpace};

fn main() -> pgq::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<u32>().expect("integer argument"));
    let q = args.next().unwrap_or(4) as u64;
    let k = args.next().unwrap_or(1);
    let space = ProjectiveSpace::new(4, FieldSpec::of_order(q)?)?;
    let oval = Hyperoval::translation(&space, k)?;
    println!("hyperoval t -> t^{}:", 1u32 << k);
    for p in &oval.points {
        println!(
            "  {:?}",
            space
                .point_coords(*p)
                .iter()
                .map(|e| e.0)
                .collect::<Vec<_>>()
        );
    }
    let report = verify_hyperoval_family(&space, &oval)?;
    println!(
        "{} solids (expected {})",
        report.family_size, report.expected_family_size
    );
    println!(
        "red/white/black = {}/{}/{} (expected {:?})",
        report.colouring.red,
        report.colouring.white,
        report.colouring.black,
        report.expected_colours
    );
    for (red, class) in &report.lines.by_red_count {
        println!(
            "lines through {red} red point(s): {} {:?}",
            class.lines, class.colours
        );
    }
    for v in &report.verdicts {
        println!(
            "{:<5} {}",
            if v.is_pass() { "PASS" } else { "FAIL" },
            v.check
        );
    }
    Ok(())
}
