//! Points, hyperplanes, lines and codimension-2 flats of PG(N,q).
//!
//!     cargo run --example projective_space -- 4 2

use pgq::space::gaussian_binomial;
use pgq::{FieldSpec, PointId, ProjectiveSpace};

fn main() -> pgq::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<u64>().expect("integer argument"));
    let dim = args.next().unwrap_or(4) as usize;
    let q = args.next().unwrap_or(2);
    let space = ProjectiveSpace::new(dim, FieldSpec::of_order(q)?)?;
    println!("PG({dim},{q})");
    println!("  points            {}", space.num_points());
    println!("  points/hyperplane {}", space.points_per_hyperplane());
    println!(
        "  lines/point       {}",
        space.lines_through(PointId(0)).len()
    );
    println!(
        "  codim-2 flats     {} (Gaussian binomial {})",
        space.codim2_count(),
        gaussian_binomial(dim as u32 + 1, 2, q as u128)
    );

    for p in space.points().take(5) {
        println!("  point {:>3}: {:?}", p.0, coords(space.point_coords(p)));
    }
    let flat = space.codim2_at(space.codim2_count() / 2);
    println!(
        "  flat #{}: dual rows {:?} / {:?}",
        space.codim2_count() / 2,
        coords(&flat.dual[0]),
        coords(&flat.dual[1])
    );
    println!(
        "    pencil {:?}",
        flat.pencil.iter().map(|h| h.0).collect::<Vec<_>>()
    );
    println!("    {} points", space.flat_points(&flat).count());
    Ok(())
}

fn coords(v: &[pgq::Elem]) -> Vec<u32> {
    v.iter().map(|e| e.0).collect()
}
