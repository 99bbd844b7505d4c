//! Large-t limit of the normalised J-function compared with the Gamma class.
//!
//! Run with `cargo run --release --example gamma_conjecture`.

use qcohom::asymptotics::{gamma_i_verdict, ExtrapolationConfig};
use qcohom::jfunction::j_projective;
use qcohom::scalars::{make_constants, Prec};

fn main() -> qcohom::Result<()> {
    let p = Prec::new(50);
    let c = make_constants(50, 8)?;
    for (n, order, tol) in [(2usize, 200usize, 1e-8), (3, 600, 1e-4), (4, 800, 1e-3)] {
        let j = j_projective(n, order)?.to_complex(p);
        let cfg = ExtrapolationConfig::standard(if n == 2 { 20.0 } else { 40.0 }, 6, p)?;
        let v = gamma_i_verdict(&j, &cfg, tol, &c)?;
        let errs: Vec<String> = v.component_errors.iter().map(|e| format!("{e:.1e}")).collect();
        println!(
            "P{}  D = {order:<4} pass {}  component errors [{}]",
            n - 1,
            v.pass,
            errs.join(", ")
        );
    }
    Ok(())
}
