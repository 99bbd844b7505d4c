//! Apéry limits of Gr(2,5): ratios of J-coefficients paired with ker(c1⋆).
//!
//! Run with `cargo run --release --example apery_limits`.

use qcohom::asymptotics::{apery_ratio, apery_target, fit_rational_span, kernel_c1};
use qcohom::grassmann::{bcfk_j_series, schubert_ring};
use qcohom::scalars::{make_constants, rat_to_string, Prec};

fn main() -> qcohom::Result<()> {
    let p = Prec::new(50);
    let c = make_constants(50, 8)?;
    let ring = schubert_ring(2, 5)?;
    let j = bcfk_j_series(2, 5, 100, p)?;
    for alpha in kernel_c1(&ring) {
        let coords: Vec<String> = alpha.coeffs().iter().map(rat_to_string).collect();
        let seq = apery_ratio(&j, &alpha, 20, p)?;
        let target = apery_target(&alpha, &c)?;
        println!("α = [{}]", coords.join(" "));
        for n in [5usize, 10, 20] {
            let r = seq.ratio_at(n).expect("computed");
            println!(
                "  n = {n:>2}  ratio {}  error {:.2e}",
                r.to_decimal(20),
                (r.clone() - target.re.clone()).abs().to_f64()
            );
        }
        let fit = fit_rational_span(&target.re, c.zeta(2)?, 12, 24);
        println!("  limit = {} + {}·ζ(2)", rat_to_string(&fit.a), rat_to_string(&fit.b));
    }
    Ok(())
}
