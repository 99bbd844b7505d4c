//! J-functions, quantum periods and quantum Lefschetz.
//!
//! Run with `cargo run --example j_functions`.

use qcohom::jfunction::{j_product, j_projective, quantum_lefschetz, quantum_period, quintic_pf_annihilation};
use qcohom::scalars::{rat_to_string, Prec};

fn main() -> qcohom::Result<()> {
    let p1 = j_projective(2, 12)?;
    let g = quantum_period(&p1);
    println!("P1 quantum period:");
    print!("{}", g.to_csv());

    let p1p1 = j_product(&p1, &p1)?;
    let g = quantum_period(&p1p1);
    let shown: Vec<String> = g.coeffs.iter().step_by(2).map(rat_to_string).collect();
    println!("\nP1xP1 even coefficients: {}", shown.join(", "));

    // cubic surface in P3 from the J-function of P3
    let jx = j_projective(4, 40)?;
    let lef = quantum_lefschetz(&jx, 3, Prec::new(30))?;
    println!(
        "\ncubic surface: c0 = {} (mirror side {}), T0 = {}",
        rat_to_string(&lef.c0),
        rat_to_string(&lef.c0_mirror),
        lef.t0.to_decimal(20)
    );
    let gy = quantum_period(&lef.jy);
    let shown: Vec<String> = gy.coeffs.iter().take(6).map(rat_to_string).collect();
    println!("its quantum period begins {}", shown.join(", "));

    let pf = quintic_pf_annihilation(20)?;
    println!(
        "\nquintic Picard–Fuchs operator to order {}: annihilated {}, classical recursion {}",
        pf.order, pf.annihilated, pf.classical_ok
    );
    Ok(())
}
