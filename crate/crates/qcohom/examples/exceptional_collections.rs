//! Gamma-integral line bundles on projective space: Gram matrices, mutations
//! and phase windows.
//!
//! Run with `cargo run --example exceptional_collections`.

use qcohom::exceptional::{is_unitriangular, phase_assignment, MarkedBasis};
use qcohom::scalars::make_constants;

fn show(title: &str, b: &MarkedBasis, c: &qcohom::scalars::ConstantTable) -> qcohom::Result<()> {
    let g = b.gram(c)?;
    println!(
        "{title}: {:?}  unitriangular {}",
        b.labels(),
        is_unitriangular(&g.rounded)
    );
    for row in &g.rounded {
        println!("    {}", row.iter().map(|x| format!("{x:>4}")).collect::<String>());
    }
    Ok(())
}

fn main() -> qcohom::Result<()> {
    let c = make_constants(40, 8)?;
    let beilinson = MarkedBasis::from_line_bundles(3, &[0, 1, 2], &c)?;
    show("P2 Beilinson", &beilinson, &c)?;
    let r1 = beilinson.right_mutation(1, &c)?;
    show("after R1", &r1, &c)?;
    let back = r1.left_mutation(1, &c)?;
    show("after R1 then L1", &back, &c)?;

    for phi in [0.1, 0.5, 1.0] {
        let ph = phase_assignment(3, phi)?;
        println!("φ = {phi}: admissible {}  twists {:?}", ph.admissible, ph.assigned_ks());
    }
    Ok(())
}
