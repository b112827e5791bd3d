//! Tempered distributions as (m, f) pairs with T = D^m f: projection,
//! pairing against Schwartz test functions, the shadow of the pairing
//! across the ladder, and the distributional Fourier transform.
//!
//! ```bash
//! cargo run --example distribution_pairing
//! ```

use ultrafn::{
    catalog, distributional_fourier, pair, shadow_extrapolated, DistributionSpec, GridParams,
    HyperScalar, LevelLadder, QuadratureConfig, ShadowValue, SlowFunction,
};

fn main() {
    let cfg = QuadratureConfig::default();
    let ladder = LevelLadder::default();
    let gauss = SlowFunction::parse_src("exp(-x^2/2)", 0).unwrap();

    println!("catalog representations (T = D^m f):");
    for name in ["dirac", "heaviside", "sign", "delta_prime"] {
        let t = catalog(name).unwrap();
        println!("  {name:12} = D^{} {}", t.order, t.base.src());
    }

    // pairing with the Gaussian: dirac reads off phi(0) = 1,
    // heaviside integrates the right half, sqrt(pi/2)
    for name in ["dirac", "heaviside"] {
        let t = catalog(name).unwrap();
        println!("\npair({name}, gauss) across the ladder:");
        let mut vals = Vec::new();
        for &n in ladder.levels() {
            let params = GridParams::new(n).unwrap();
            let (v, warns) = pair(&t, &gauss, params, &cfg).unwrap();
            println!("  n = {n:2}: {:+.12}  ({} warnings)", v.re, warns.len());
            vals.push((n, v));
        }
        let family = HyperScalar::new(move |n| {
            vals.iter()
                .find(|(m, _)| *m == n)
                .map(|(_, v)| *v)
                .ok_or(ultrafn::UfError::InvalidLevel(n))
        });
        let sh = shadow_extrapolated(&family, &ladder, 1e-6).unwrap();
        if let ShadowValue::Finite(v) = sh.value {
            println!("  shadow: {:.12} (residual {:.2e})", v.re, sh.residual);
        }
    }
    println!(
        "  reference values: phi(0) = 1, sqrt(pi/2) = {:.12}",
        (std::f64::consts::PI / 2.0).sqrt()
    );

    // the Gaussian is its own transform
    let t = DistributionSpec {
        order: 0,
        base: gauss.clone(),
        label: None,
    };
    let params = GridParams::new(8).unwrap();
    let (s, _) = distributional_fourier(&t, params, &cfg).unwrap();
    println!("\ndistributional transform of the Gaussian at selected k (vs exp(-k^2/2)):");
    for l in [0i64, 5, 10, 18] {
        let k = s.params().point(l);
        println!(
            "  k = {k:7.4}: {:+.10}  (truth {:+.10})",
            s.value_at(l).re,
            (-k * k / 2.0).exp()
        );
    }

    // integration by parts: pair(D^m f, phi) = (-1)^m pair(f, D^m phi)
    let dirac = catalog("dirac").unwrap();
    let phi2 = gauss.derivative().unwrap().derivative().unwrap();
    let base_only = DistributionSpec {
        order: 0,
        base: dirac.base.clone(),
        label: None,
    };
    let (lhs, _) = pair(&dirac, &gauss, params, &cfg).unwrap();
    let (rhs, _) = pair(&base_only, &phi2, params, &cfg).unwrap();
    println!(
        "\nintegration by parts: pair(D^2 ramp, gauss) = {:+.9}, pair(ramp, gauss'') = {:+.9}",
        lhs.re, rhs.re
    );
}
