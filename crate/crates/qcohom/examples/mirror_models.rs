//! Laurent polynomial mirrors: conifold points, Fekete limits and growth rates.
//!
//! Run with `cargo run --release --example mirror_models`.

use qcohom::asymptotics::growth_rate;
use qcohom::mirror::{conifold_point, constant_term_series, fekete_limit, przyjalkowski_model, toric_mirror_from_rays};
use qcohom::scalars::{rat_to_string, Prec};

fn main() -> qcohom::Result<()> {
    let p = Prec::new(40);
    let fans: [(&str, Vec<Vec<i64>>, usize); 3] = [
        ("P2", vec![vec![1, 0], vec![0, 1], vec![-1, -1]], 3),
        ("P1xP1", vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], 2),
        (
            "dP7",
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![-1, -1]],
            1,
        ),
    ];
    for (name, rays, r) in fans {
        let f = toric_mirror_from_rays(&rays)?;
        let con = conifold_point(&f, 1e-30, p)?;
        let g = constant_term_series(&f, 24)?;
        let growth = growth_rate(&g)?;
        let fek = fekete_limit(&f, r, 4)?;
        println!(
            "{name:<6} f = {f}\n       T_con = {}  growth ≈ {:.6}  Fekete {:?}",
            con.t_con.to_decimal(15),
            growth.estimate,
            fek.verdict
        );
    }

    let cubic = przyjalkowski_model(3, 3)?;
    let con = cubic.conifold(1e-30, p)?;
    println!(
        "\ncubic surface model: shift {}  shifted T_con = {}",
        rat_to_string(&cubic.c0_shift),
        con.t_con.to_decimal(15)
    );
    Ok(())
}
