//! The hyperreal layer: level families, arithmetic, growth classification,
//! and standard-part (shadow) extraction.
//!
//! ```bash
//! cargo run --example hyperreal_shadow
//! ```

use ultrafn::{
    classify_growth, hyper_div, hyper_mul, infinitely_close, shadow, shadow_extrapolated,
    GrowthTag, HyperScalar, LevelLadder, ShadowValue,
};

fn show_shadow(name: &str, r: ultrafn::ShadowResult) {
    let v = match r.value {
        ShadowValue::Finite(z) if z.im == 0.0 => format!("{:.9}", z.re),
        ShadowValue::Finite(z) => format!("{z}"),
        ShadowValue::PlusInfinity => "+infinity".into(),
        ShadowValue::MinusInfinity => "-infinity".into(),
        ShadowValue::Indeterminate => "indeterminate".into(),
    };
    println!("  {name:28} -> {v}  (residual {:.2e})", r.residual);
}

fn main() {
    let ladder = LevelLadder::default();
    println!("ladder: {:?}", ladder.levels());

    // arithmetic is pointwise per level, so n * (1/n) is exactly 1
    let a = HyperScalar::from_real_fn(|n| n as f64);
    let b = hyper_div(&HyperScalar::constant_real(1.0), &a);
    let unit = hyper_mul(&a, &b);
    println!(
        "\nn * (1/n) evaluated at every ladder level: {:?}",
        ladder
            .levels()
            .iter()
            .map(|&n| unit.eval(n).unwrap().re)
            .collect::<Vec<_>>()
    );

    println!("\ngrowth classification over the ladder:");
    let families: [(&str, HyperScalar); 5] = [
        ("n^3 + 5", HyperScalar::from_real_fn(|n| (n as f64).powi(3) + 5.0)),
        ("2^n", HyperScalar::from_real_fn(|n| 2f64.powi(n as i32))),
        (
            "1/n!",
            HyperScalar::from_real_fn(|n| 1.0 / (1..=n).map(f64::from).product::<f64>()),
        ),
        ("1/n^2", HyperScalar::from_real_fn(|n| 1.0 / (n * n) as f64)),
        ("constant 7", HyperScalar::constant_real(7.0)),
    ];
    for (name, h) in &families {
        let g = classify_growth(h, &ladder).unwrap();
        let witness = if g.witness.is_finite() {
            format!("{:+.3}", g.witness)
        } else {
            format!("{}", g.witness)
        };
        println!("  {name:12} -> {:?} (witness {witness})", g.tag);
    }

    println!("\nshadows (tol 1e-2):");
    let compound = HyperScalar::from_real_fn(|n| (1.0 + 1.0 / n as f64).powi(n as i32));
    show_shadow("(1+1/n)^n, plain", shadow(&compound, &ladder, 5e-2).unwrap());
    show_shadow(
        "(1+1/n)^n, extrapolated",
        shadow_extrapolated(&compound, &ladder, 1e-2).unwrap(),
    );
    println!("  (e = {:.9})", std::f64::consts::E);
    show_shadow(
        "n (a positive infinite)",
        shadow(&HyperScalar::from_real_fn(|n| n as f64), &ladder, 1e-9).unwrap(),
    );
    show_shadow(
        "(-1)^n",
        shadow(
            &HyperScalar::from_real_fn(|n| if n % 2 == 0 { 1.0 } else { -1.0 }),
            &LevelLadder::new(vec![4, 9, 16, 33]).unwrap(),
            1e-9,
        )
        .unwrap(),
    );

    println!("\ninfinitesimal closeness (tol 5e-2):");
    let close = HyperScalar::from_real_fn(|n| 1.0 + 1.0 / n as f64);
    let one = HyperScalar::constant_real(1.0);
    let two = HyperScalar::constant_real(2.0);
    println!(
        "  1 + 1/n ~ 1:  {}",
        infinitely_close(&close, &one, &ladder, 5e-2).unwrap()
    );
    println!(
        "  1       ~ 2:  {}",
        infinitely_close(&one, &two, &ladder, 5e-2).unwrap()
    );
    let invfact = HyperScalar::from_real_fn(|n| 1.0 / (1..=n).map(f64::from).product::<f64>());
    let zero = HyperScalar::constant_real(0.0);
    println!(
        "  1/n!    ~ 0:  {} (rapidly decreasing, equal as hyperreals)",
        infinitely_close(&invfact, &zero, &ladder, f64::EPSILON).unwrap()
    );

    // classify_growth reports the rapid classes per its drift cut, and
    // division-by-zero surfaces with the offending level attached
    let broken = hyper_div(
        &HyperScalar::constant_real(1.0),
        &HyperScalar::from_real_fn(|n| n as f64 - 8.0),
    );
    println!("\n1/(n-8) evaluated at level 8: {:?}", broken.eval(8).unwrap_err());
    let g = classify_growth(&HyperScalar::from_real_fn(|n| (n as f64).sqrt()), &ladder).unwrap();
    assert_eq!(g.tag, GrowthTag::SlowlyIncreasing);
}
