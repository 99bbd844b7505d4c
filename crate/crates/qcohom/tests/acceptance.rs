//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Every numerical target is checked against an oracle computed here from
//! first principles (closed forms, hand-rolled f64 quadrature, integer
//! recurrences) rather than from the library itself.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qcohom::asymptotics::{
    apery_ratio, apery_target, fit_rational_span, gamma_i_verdict, growth_rate, kernel_c1, principal_asymptotic_class,
    ExtrapolationConfig,
};
use qcohom::exceptional::{is_unitriangular, unitriangular_order, MarkedBasis};
use qcohom::grassmann::{
    bcfk_j_series, e_mu, ehx_constant_terms, ehx_mirror, euler_matrix_grassmann, grassmann_spectrum, is_consecutive,
    schubert_ring, Partition,
};
use qcohom::jfunction::{j_projective, quantum_lefschetz, quantum_period, quintic_pf_annihilation};
use qcohom::mirror::{
    constant_term_series, fekete_limit, projective_spectrum, property_o_report, przyjalkowski_model,
    toric_mirror_from_rays, FeketeVerdict,
};
use qcohom::oscillatory::{
    central_charge_structure_sheaf, laplace_lefschetz_check, oscillatory_integral, QuadratureConfig,
};
use qcohom::ring::{build_projective_ring, hrr_check, GradedVector, HomologyVector, KClass};
use qcohom::scalars::{int, make_constants, BigReal, ExactRational, Prec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
const ZETA3: f64 = 1.202_056_903_159_594_3;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: qcohom::Error) -> String {
    err.to_string()
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// m(m−1)⋯(m−k+1)/k! for any integer m.
fn binom(m: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (m - i)) / fact(k as u64)
}

/// K₀(x) = ∫₀^∞ e^{−x cosh s} ds by the trapezoid rule.
fn bessel_k0(x: f64) -> f64 {
    let h = 0.01;
    let mut sum = 0.5 * (-x).exp();
    let mut s: f64 = h;
    loop {
        let term = (-x * s.cosh()).exp();
        sum += term;
        if term < 1e-30 {
            break;
        }
        s += h;
    }
    sum * h
}

/// ∫_{R²} exp(−t(e^u + e^v + e^{−u−v})) du dv on a plain grid.
fn p2_orthant_oracle(t: f64) -> f64 {
    let h = 0.05;
    let l = 9.0;
    let n = (2.0 * l / h) as i64;
    let mut sum = 0.0;
    for i in 0..=n {
        let u = -l + i as f64 * h;
        for j in 0..=n {
            let v = -l + j as f64 * h;
            sum += (-t * (u.exp() + v.exp() + (-u - v).exp())).exp();
        }
    }
    sum * h * h
}

fn criterion_1() -> Outcome {
    let j = j_projective(2, 60).map_err(e)?;
    let g = quantum_period(&j);
    let x = toric_mirror_from_rays(&[vec![1], vec![-1]]).map_err(e)?;
    let m = constant_term_series(&x, 60).map_err(e)?;
    for n in 0..=30u64 {
        let want = ExactRational::new(BigInt::one(), fact(n) * fact(n));
        ensure(g.coeffs[2 * n as usize] == want, || {
            format!("J side: G_{} wrong", 2 * n)
        })?;
        ensure(m.coeffs[2 * n as usize] == want, || {
            format!("mirror side: G_{} wrong", 2 * n)
        })?;
        if n > 0 {
            ensure(g.coeffs[2 * n as usize - 1].is_zero(), || {
                format!("G_{} nonzero", 2 * n - 1)
            })?;
        }
    }
    Ok("G_{2n} = 1/(n!)² for n ≤ 30 on both sides".into())
}

fn criterion_2() -> Outcome {
    let c = make_constants(50, 8).map_err(e)?;
    let mut worst = 0.0f64;
    for n in 2..=6usize {
        let ring = build_projective_ring(n);
        let h = GradedVector::basis(&ring, 1, ());
        for a in 0..=n as i64 {
            for b in 0..=n as i64 {
                let chk = hrr_check(&KClass::line_bundle(&h, a), &KClass::line_bundle(&h, b), &c).map_err(e)?;
                let want = BigReal::from_bigint(&binom(n as i64 - 1 + b - a, n as i64 - 1), c.prec);
                let diff = (chk.chi_gamma.re.clone() - want).abs().max(chk.chi_gamma.im.abs());
                ensure(diff.below_pow10(-40), || {
                    format!("P{}: O({a}),O({b}) off by {:e}", n - 1, diff.to_f64())
                })?;
                worst = worst.max(diff.to_f64());
            }
        }
    }
    let gr = schubert_ring(2, 4).map_err(e)?;
    let parts: Vec<Partition> = [[0, 0], [1, 0], [1, 1], [2, 0], [2, 1], [2, 2]]
        .iter()
        .map(|p| Partition::new(p.to_vec()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    for mu in &parts {
        for nu in &parts {
            let chk = hrr_check(&e_mu(&gr, mu).map_err(e)?, &e_mu(&gr, nu).map_err(e)?, &c).map_err(e)?;
            let want = euler_matrix_grassmann(mu, nu, 2, 4).map_err(e)?;
            let want = BigReal::from_rational(&want, c.prec);
            let diff = (chk.chi_gamma.re.clone() - want).abs().max(chk.chi_gamma.im.abs());
            ensure(diff.below_pow10(-40), || {
                format!("Gr(2,4) E_{} E_{} off by {:e}", mu.label(), nu.label(), diff.to_f64())
            })?;
            worst = worst.max(diff.to_f64());
        }
    }
    Ok(format!("all pairs within 1e-40 (worst {worst:.1e})"))
}

fn gamma_limit_check(n: usize, order: usize, tol: f64, oracle: &[f64]) -> Result<String, String> {
    let p = Prec::new(50);
    let c = make_constants(50, 8).map_err(e)?;
    let j = j_projective(n, order).map_err(e)?.to_complex(p);
    let cfg = ExtrapolationConfig::standard(40.0, 6, p).map_err(e)?;
    let a = principal_asymptotic_class(&j, &cfg).map_err(e)?;
    let mut worst = 0.0f64;
    for (i, want) in oracle.iter().enumerate() {
        let got = a.class.coeff(i);
        let err = (got.re.to_f64() - want).abs().max(got.im.to_f64().abs());
        worst = worst.max(err);
        ensure(err < tol, || {
            format!("P{} component {i}: {} vs oracle {want}", n - 1, got.re.to_f64())
        })?;
    }
    let v = gamma_i_verdict(&j, &cfg, tol, &c).map_err(e)?;
    ensure(v.pass, || format!("P{} library verdict fail", n - 1))?;
    Ok(format!("P{} worst {worst:.1e}", n - 1))
}

fn criterion_3() -> Outcome {
    let g = EULER_GAMMA;
    let p2 = [1.0, -3.0 * g, 4.5 * g * g + 1.5 * ZETA2];
    let p3 = [
        1.0,
        -4.0 * g,
        8.0 * g * g + 2.0 * ZETA2,
        -32.0 * g.powi(3) / 3.0 - 8.0 * g * ZETA2 - 4.0 * ZETA3 / 3.0,
    ];
    let a = gamma_limit_check(3, 600, 1e-4, &p2)?;
    let b = gamma_limit_check(4, 600, 1e-3, &p3)?;
    Ok(format!("{a}; {b}"))
}

fn criterion_4() -> Outcome {
    let p = Prec::new(30);
    let c = make_constants(30, 8).map_err(e)?;
    let quad = QuadratureConfig::new(1e-12, Prec::new(15));
    let mut worst = 0.0f64;
    let p1 = toric_mirror_from_rays(&[vec![1], vec![-1]]).map_err(e)?;
    let j1 = j_projective(2, 200).map_err(e)?;
    for t in [0.5, 1.0, 2.0] {
        let i = oscillatory_integral(&p1, &BigReal::from_f64(1.0 / t, p), &quad)
            .map_err(e)?
            .value
            .to_f64();
        let z = central_charge_structure_sheaf(&j1, &BigReal::from_f64(t, p), &c)
            .map_err(e)?
            .re
            .to_f64();
        let k = 2.0 * bessel_k0(2.0 * t);
        let rel = ((i - z) / z).abs().max(((z - k) / k).abs());
        worst = worst.max(rel);
        ensure(rel < 1e-8, || format!("P1 t={t}: integral {i}, Z {z}, 2K0 {k}"))?;
    }
    let p2 = toric_mirror_from_rays(&[vec![1, 0], vec![0, 1], vec![-1, -1]]).map_err(e)?;
    let j2 = j_projective(3, 200).map_err(e)?;
    for t in [0.5, 1.0] {
        let i = oscillatory_integral(&p2, &BigReal::from_f64(1.0 / t, p), &quad)
            .map_err(e)?
            .value
            .to_f64();
        let z = central_charge_structure_sheaf(&j2, &BigReal::from_f64(t, p), &c)
            .map_err(e)?
            .re
            .to_f64();
        let o = p2_orthant_oracle(t);
        let rel = ((i - z) / z).abs().max(((z - o) / o).abs());
        worst = worst.max(rel);
        ensure(rel < 1e-6, || format!("P2 t={t}: integral {i}, Z {z}, grid oracle {o}"))?;
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let p = Prec::new(40);
    let lef = quantum_lefschetz(&j_projective(4, 60).map_err(e)?, 3, p).map_err(e)?;
    // closed forms for a cubic surface: c0 = 3!, T0 = 3³
    ensure(lef.c0 == int(6) && lef.c0_mirror == int(6), || {
        format!("c0 = {}", lef.c0)
    })?;
    let t0 = lef.t0.to_f64();
    ensure((t0 - 27.0).abs() < 1e-25 && (t0 - 6.0 - 21.0).abs() < 1e-25, || {
        format!("T0 = {t0}")
    })?;
    let con = przyjalkowski_model(3, 3).map_err(e)?.conifold(1e-30, p).map_err(e)?;
    let err = (con.t_con.to_f64() - 21.0).abs();
    ensure(err < 1e-10, || format!("conifold value {}", con.t_con.to_decimal(20)))?;
    Ok(format!("c0 = 6, T0 − c0 = 21, conifold 21 ± {err:.1e}"))
}

fn criterion_6() -> Outcome {
    let p = Prec::new(50);
    let c = make_constants(50, 8).map_err(e)?;
    let jx = j_projective(4, 120).map_err(e)?;
    let q = laplace_lefschetz_check(&jx, 2, &BigReal::from_f64(0.05, p), 1e-8, &c).map_err(e)?;
    ensure(q.pass && q.max_rel_diff < 1e-8, || {
        format!("quadric max rel diff {:e}", q.max_rel_diff)
    })?;
    let cu = laplace_lefschetz_check(&jx, 3, &BigReal::from_f64(0.03, p), 1e-6, &c).map_err(e)?;
    ensure(cu.pass && cu.max_rel_diff < 1e-6, || {
        format!("cubic max rel diff {:e}", cu.max_rel_diff)
    })?;
    Ok(format!("quadric {:.1e}, cubic {:.1e}", q.max_rel_diff, cu.max_rel_diff))
}

fn criterion_7() -> Outcome {
    let p = Prec::new(50);
    // Gr(2,4) is the quadric in P^5: G_{4d} = (2d)!/(d!)^6. Gr(2,5): G_{5d} = Apéry ζ(2) numbers / (d!)^5.
    let quadric = |d: u64| ExactRational::new(fact(2 * d), fact(d).pow(6));
    let apery = |d: u64| {
        let a: BigInt = (0..=d as i64)
            .map(|k| binom(d as i64, k).pow(2) * binom(d as i64 + k, k))
            .sum();
        ExactRational::new(a, fact(d).pow(5))
    };
    let mut worst = 0.0f64;
    for (n, count, oracle) in [
        (4usize, 3u64, &quadric as &dyn Fn(u64) -> ExactRational),
        (5, 2, &apery),
    ] {
        let order = n * count as usize;
        let exact = ehx_constant_terms(2, n, order).map_err(e)?;
        let gj = quantum_period(&bcfk_j_series(2, n, order, p).map_err(e)?);
        for d in 1..=count {
            let i = n * d as usize;
            let want = oracle(d);
            ensure(exact.coeffs[i] == want, || {
                format!("Gr(2,{n}) EHX G_{i} = {} vs oracle {want}", exact.coeffs[i])
            })?;
            let got = &gj.coeffs[i];
            let diff = (got.re.clone() - BigReal::from_rational(&want, p)).abs();
            ensure(diff.below_pow10(-38), || {
                format!("Gr(2,{n}) G_{i}: |bcfk − ehx| = {:e}", diff.to_f64())
            })?;
            ensure(got.im.abs().below_pow10(-38), || {
                format!("Gr(2,{n}) G_{i}: imaginary residue {:e}", got.im.to_f64())
            })?;
            worst = worst.max(diff.to_f64());
        }
    }
    Ok(format!("agreement within 1e-38 (worst {worst:.1e})"))
}

fn criterion_8() -> Outcome {
    let p = Prec::new(40);
    let s = grassmann_spectrum(2, 5, p).map_err(e)?;
    let pi = std::f64::consts::PI;
    let want = 5.0 * (2.0 * pi / 5.0).sin() / (pi / 5.0).sin();
    let err = (s.t.to_f64() - want).abs();
    ensure(err < 1e-12, || format!("T = {} vs {want}", s.t.to_f64()))?;
    ensure(s.maximizers.len() == 5, || format!("{} maximizers", s.maximizers.len()))?;
    ensure(s.maximizers.iter().all(|k| is_consecutive(k, 5)), || {
        "non-consecutive maximizer".into()
    })?;
    ensure(s.property_o.satisfied, || "Gr(2,5) Property O false".into())?;
    let p2 = property_o_report(&projective_spectrum(3, p), 3, p).map_err(e)?;
    ensure(p2.satisfied, || "P2 Property O false".into())?;
    Ok(format!(
        "T error {err:.1e}, 5 consecutive maximizers, both verdicts true"
    ))
}

fn criterion_9() -> Outcome {
    let p = Prec::new(50);
    let c = make_constants(50, 8).map_err(e)?;
    let ring = schubert_ring(2, 5).map_err(e)?;
    let j = bcfk_j_series(2, 5, 100, p).map_err(e)?;
    let pt = HomologyVector::<ExactRational>::point(&ring, ());
    let alpha = kernel_c1(&ring)
        .into_iter()
        .find(|a| a.coeffs() != pt.coeffs())
        .ok_or("kernel is spanned by the point class")?;
    let seq = apery_ratio(&j, &alpha, 20, p).map_err(e)?;
    let target = apery_target(&alpha, &c).map_err(e)?;
    let errs: Vec<f64> = [5usize, 10, 20]
        .iter()
        .map(|&n| {
            (seq.ratio_at(n).expect("computed").clone() - target.re.clone())
                .abs()
                .to_f64()
        })
        .collect();
    ensure(errs[0] > errs[1] && errs[1] > errs[2], || {
        format!("errors not decreasing: {errs:?}")
    })?;
    ensure(errs[2] < 1e-2, || format!("error at n = 20: {:e}", errs[2]))?;
    let fit = fit_rational_span(&target.re, c.zeta(2).map_err(e)?, 12, 24);
    ensure(fit.residual < 1e-8, || format!("span fit residual {:e}", fit.residual))?;
    Ok(format!(
        "errors {:.1e} > {:.1e} > {:.1e}; limit = {} + {}·ζ(2) (residual {:.0e})",
        errs[0], errs[1], errs[2], fit.a, fit.b, fit.residual
    ))
}

fn criterion_10() -> Outcome {
    let r = quintic_pf_annihilation(20).map_err(e)?;
    ensure(r.annihilated && r.classical_ok, || "residual nonzero".into())?;
    // (5n)!/(n!)^5 satisfies n⁴a_n = 5(5n−1)(5n−2)(5n−3)(5n−4)a_{n−1}
    for n in 1..=20i64 {
        let a = |m: i64| fact(5 * m as u64) / fact(m as u64).pow(5);
        ensure(
            BigInt::from(n.pow(4)) * a(n)
                == BigInt::from(5 * (5 * n - 1) * (5 * n - 2) * (5 * n - 3) * (5 * n - 4)) * a(n - 1),
            || format!("recursion oracle fails at {n}"),
        )?;
    }
    Ok("annihilated through order 20 in Q[ε]/(ε⁴)".into())
}

fn criterion_11() -> Outcome {
    let w = ehx_mirror(2, 4).map_err(e)?;
    // exponents 4a + 4b ≤ 16
    let rep = fekete_limit(&w, 4, 4).map_err(e)?;
    ensure(rep.verdict == FeketeVerdict::Supermultiplicative, || {
        format!("{:?}, violations {:?}", rep.verdict, rep.violations)
    })?;
    let g = growth_rate(&quantum_period(&j_projective(3, 36).map_err(e)?)).map_err(e)?;
    ensure(g.n_used == 12, || format!("used n = {}", g.n_used))?;
    let rel = (g.estimate - 3.0).abs() / 3.0;
    ensure(rel < 0.02, || {
        format!("P2 growth {} ({:.1}% off)", g.estimate, 100.0 * rel)
    })?;
    Ok(format!(
        "Gr(2,4) supermultiplicative; P2 growth {:.4} at n = 12",
        g.estimate
    ))
}

fn criterion_12() -> Outcome {
    let c = make_constants(50, 8).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut b = MarkedBasis::from_line_bundles(5, &[0, 1, 2, 3, 4], &c).map_err(e)?;
    let mut worst = 0.0f64;
    let mut seq = Vec::new();
    for _ in 0..10 {
        let i = rng.gen_range(1..5);
        let right = rng.gen_bool(0.5);
        seq.push(format!("{}{i}", if right { 'R' } else { 'L' }));
        let next = if right {
            b.right_mutation(i, &c)
        } else {
            b.left_mutation(i, &c)
        }
        .map_err(e)?;
        let undo = if right {
            next.left_mutation(i, &c)
        } else {
            next.right_mutation(i, &c)
        }
        .map_err(e)?;
        let same = undo.elements.iter().zip(&b.elements).all(|(x, y)| x.coords == y.coords);
        ensure(same, || {
            format!("mutation {} is not undone by its inverse", seq.last().unwrap())
        })?;
        b = next;
        let g = b.gram(&c).map_err(e)?;
        worst = worst.max(g.residual.to_f64());
        ensure(g.residual.below_pow10(-40), || {
            format!("residual {:e} after {}", g.residual.to_f64(), seq.join(","))
        })?;
        let order = unitriangular_order(&g.rounded).ok_or("no unitriangular ordering")?;
        let sorted: Vec<Vec<BigInt>> = order
            .iter()
            .map(|&i| order.iter().map(|&j| g.rounded[i][j].clone()).collect())
            .collect();
        ensure(is_unitriangular(&sorted), || "re-sorted Gram not unitriangular".into())?;
    }
    Ok(format!("{} kept integral (worst residual {worst:.1e})", seq.join(",")))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("exact P1 quantum period", Duration::from_secs(1), criterion_1),
        ("factorised HRR", Duration::from_secs(30), criterion_2),
        ("Gamma conjecture I on P2, P3", Duration::from_secs(60), criterion_3),
        (
            "oscillatory integral = central charge",
            Duration::from_secs(300),
            criterion_4,
        ),
        ("quantum Lefschetz triangle", Duration::from_secs(10), criterion_5),
        (
            "Laplace form of quantum Lefschetz",
            Duration::from_secs(120),
            criterion_6,
        ),
        ("Grassmannian J vs mirror", Duration::from_secs(300), criterion_7),
        ("spectrum and Property O", Duration::from_secs(1), criterion_8),
        ("Apéry limit of Gr(2,5)", Duration::from_secs(600), criterion_9),
        ("quintic Picard–Fuchs", Duration::from_secs(5), criterion_10),
        ("Fekete and growth", Duration::from_secs(300), criterion_11),
        ("mutation algebra", Duration::from_secs(10), criterion_12),
    ];
    let mut failures = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {:.0} s budget", budget.as_secs_f64())),
            Err(d) => (false, d),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {:>2} {} | {name} | {detail} | {:.2} s",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
