//! Grassmannians: the spectrum of c1⋆ and two constructions of the quantum period.
//!
//! Run with `cargo run --release --example grassmannians`.

use qcohom::grassmann::{bcfk_j_series, ehx_constant_terms, ehx_mirror, grassmann_spectrum};
use qcohom::jfunction::quantum_period;
use qcohom::scalars::{rat_to_f64, Prec};

fn main() -> qcohom::Result<()> {
    let p = Prec::new(40);
    for (r, n) in [(2usize, 4usize), (2, 5), (3, 6)] {
        let s = grassmann_spectrum(r, n, p)?;
        println!(
            "Gr({r},{n})  T = {}  eigenvalues {}  Property O {}  maximizers consecutive {}",
            s.t.to_decimal(12),
            s.eigenvalues.len(),
            s.property_o.satisfied,
            s.all_maximizers_consecutive
        );
    }

    let f = ehx_mirror(2, 5)?;
    println!("\nGr(2,5) mirror has {} monomials in {} variables", f.len(), f.nvars());
    let from_mirror = ehx_constant_terms(2, 5, 30)?;
    let from_j = quantum_period(&bcfk_j_series(2, 5, 30, p)?);
    let worst = (0..=30)
        .map(|d| (rat_to_f64(&from_mirror.coeffs[d]) - from_j.coeffs[d].re.to_f64()).abs())
        .fold(0.0, f64::max);
    println!("max |G_d(mirror) − G_d(abelian/non-abelian)| over d ≤ 30: {worst:.1e}");
    Ok(())
}
