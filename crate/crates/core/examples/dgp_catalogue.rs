//! The eight study processes: true stdf values against the finite-level Monte
//! Carlo approximation.
//!
//! cargo run --release --example dgp_catalogue

use stdf::dgp::{mc_stdf_oracle, true_stdf, DgpSpec, RngStream};
use stdf::Point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = Point::xy(1.0, 1.0);
    println!("{:<20} {:>9} {:>12} {:>9}", "process", "L(1,1)", "t=200 MC", "se");
    for (i, (name, spec)) in DgpSpec::catalogue().into_iter().enumerate() {
        let truth = true_stdf(&spec, &x)?;
        let mut rng = RngStream::new(1, i as u32, 0).rng();
        let mc = mc_stdf_oracle(&spec, &x, 200.0, 500_000, &mut rng);
        println!("{name:<20} {truth:>9.4} {:>12.4} {:>9.4}", mc.value, mc.std_error);
    }
    Ok(())
}
