//! Arithmetic in GF(q): the chosen modulus, a few products, traces and
//! squares.
//!
//!     cargo run --example field_arithmetic -- 8

use pgq::field::FieldSpec;
use pgq::quadric::elliptic_constant;

fn main() -> pgq::Result<()> {
    let q: u64 = std::env::args()
        .nth(1)
        .map_or(Ok(4), |s| s.parse())
        .expect("q must be an integer");
    let f = FieldSpec::of_order(q)?;
    println!(
        "GF({}) = GF({}^{}), modulus coefficients {:?}",
        f.q(),
        f.p(),
        f.h(),
        f.modulus()
    );
    println!("lookup tables: {}", f.has_tables());
    println!("elliptic constant: {}", elliptic_constant(&f).0);
    println!(
        "{:>4} {:>5} {:>5} {:>6} {:>6}",
        "a", "a^-1", "a*a", "trace", "square"
    );
    for a in f.elements() {
        let inv = f
            .inv(a)
            .map(|x| x.0.to_string())
            .unwrap_or_else(|_| "-".into());
        println!(
            "{:>4} {:>5} {:>5} {:>6} {:>6}",
            a.0,
            inv,
            f.mul(a, a).0,
            f.absolute_trace(a).0,
            f.is_square(a)
        );
    }
    Ok(())
}
