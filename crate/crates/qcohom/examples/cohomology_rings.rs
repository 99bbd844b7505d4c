//! Cohomology rings, Gamma classes and Hirzebruch–Riemann–Roch.
//!
//! Run with `cargo run --example cohomology_rings`.

use qcohom::grassmann::{e_mu, euler_matrix_grassmann, schubert_ring, Partition};
use qcohom::ring::{
    build_hypersurface_ambient_ring, build_projective_ring, gamma_class, hrr_check, tensor_ring, GradedVector, KClass,
};
use qcohom::scalars::{make_constants, rat_to_string};

fn main() -> qcohom::Result<()> {
    let c = make_constants(40, 8)?;

    let p3 = build_projective_ring(4);
    let quadric = build_hypersurface_ambient_ring(3, 2)?;
    let p1p1 = tensor_ring(&build_projective_ring(2), &build_projective_ring(2));
    let gr24 = schubert_ring(2, 4)?;
    for ring in [&p3, &quadric, &p1p1, &gr24] {
        ring.validate()?;
        println!(
            "{:<12} dim {}  rank {}  index {}  betti {:?}",
            ring.name,
            ring.dim,
            ring.rank(),
            ring.index,
            ring.betti()
        );
    }

    println!("\nGamma class of P3:");
    let g = gamma_class(&p3, &c)?;
    for (b, z) in p3.basis.iter().zip(g.coeffs()) {
        println!("  {:>4}: {}", b.label, z.re.to_decimal(25));
    }

    println!("\nχ(O(a), O(b)) on P3 via Gamma-integral structures vs Todd:");
    let h = GradedVector::basis(&p3, 1, ());
    for (a, b) in [(0, 0), (0, 2), (1, 3), (2, -1)] {
        let check = hrr_check(&KClass::line_bundle(&h, a), &KClass::line_bundle(&h, b), &c)?;
        println!(
            "  ({a:>2},{b:>2})  todd {:>4}  gamma {}  |diff| < 1e{}",
            rat_to_string(&check.chi_todd),
            check.chi_gamma.re.to_decimal(12),
            check.discrepancy().log10_abs().ceil()
        );
    }

    println!("\nGr(2,4): χ(E_μ, E_ν) from the Schur functors vs the closed determinant:");
    let parts: Vec<Partition> = [[0, 0], [1, 0], [1, 1], [2, 0]]
        .iter()
        .map(|p| Partition::new(p.to_vec()))
        .collect::<Result<_, _>>()?;
    for mu in &parts {
        let row: Vec<String> = parts
            .iter()
            .map(|nu| {
                let via_ring = qcohom::ring::euler_characteristic(&e_mu(&gr24, mu)?, &e_mu(&gr24, nu)?)?;
                let closed = euler_matrix_grassmann(mu, nu, 2, 4)?;
                assert_eq!(via_ring, closed);
                Ok(rat_to_string(&closed))
            })
            .collect::<qcohom::Result<_>>()?;
        println!("  {:>6}: {}", mu.label(), row.join(" "));
    }
    Ok(())
}
