//! Orthant integrals of mirrors against central charges, and the Laplace form
//! of quantum Lefschetz.
//!
//! Run with `cargo run --release --example oscillatory_integrals`.

use qcohom::jfunction::j_projective;
use qcohom::mirror::toric_mirror_from_rays;
use qcohom::oscillatory::{
    central_charge_structure_sheaf, laplace_lefschetz_check, oscillatory_integral, QuadratureConfig,
};
use qcohom::scalars::{make_constants, BigReal, Prec};

fn projective_rays(m: usize) -> Vec<Vec<i64>> {
    let mut rays: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    rays.push(vec![-1; m]);
    rays
}

fn main() -> qcohom::Result<()> {
    let p = Prec::new(40);
    let c = make_constants(40, 8)?;
    let quad = QuadratureConfig::new(1e-10, Prec::new(15));
    for n in [2usize, 3, 4] {
        let f = toric_mirror_from_rays(&projective_rays(n - 1))?;
        let j = j_projective(n, 200)?;
        for t in [0.5, 1.0, 2.0] {
            let i = oscillatory_integral(&f, &BigReal::from_f64(1.0 / t, p), &quad)?;
            let z = central_charge_structure_sheaf(&j, &BigReal::from_f64(t, p), &c)?;
            println!(
                "P{}  t = {t:<3}  integral {}  Z(O) {}  rel diff {:.1e}",
                n - 1,
                i.value.to_decimal(14),
                z.re.to_decimal(14),
                ((i.value.to_f64() - z.re.to_f64()) / z.re.to_f64()).abs()
            );
        }
    }

    let jx = j_projective(4, 80)?;
    for a in [2usize, 3] {
        let rep = laplace_lefschetz_check(&jx, a, &BigReal::from_f64(0.05, p), 1e-8, &c)?;
        println!(
            "degree {a} hypersurface in P3: Laplace identity max rel diff {:.1e}, pass {}",
            rep.max_rel_diff, rep.pass
        );
    }
    Ok(())
}
