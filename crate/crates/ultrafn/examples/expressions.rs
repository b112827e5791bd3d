//! The expression language: parsing, complex evaluation, symbolic
//! derivatives, and the error reporting used by the CLI.
//!
//! ```bash
//! cargo run --example expressions
//! ```

use ultrafn::expr::parse;

fn main() {
    // parse, print, evaluate
    for src in [
        "exp(-x^2/2)",
        "ramp(x)",
        "abs(x) + x^3/6",
        "exp(i*x)",
        "cos(x)/(2 + sin(x))",
    ] {
        let e = parse(src).unwrap();
        let v = e.eval(1.5).unwrap();
        println!("{src:24} -> {e}   at x=1.5: {:+.6} {:+.6}i", v.re, v.im);
    }

    // symbolic derivatives evaluate like the textbook says
    println!("\nderivatives:");
    for src in ["gauss(x)", "x^2", "exp(sin(x))"] {
        let d = parse(src).unwrap().derivative().unwrap();
        println!("  d/dx {src:12} = {d}");
        println!("        at x=3: {:+.9}", d.eval(3.0).unwrap().re);
    }

    // errors carry positions and kinds
    println!("\nerror reporting:");
    for src in ["x *", "2x", "sinh(x)", "1/(x-x)"] {
        let outcome = match parse(src) {
            Err(e) => format!("{e}"),
            Ok(e) => match e.eval(0.0) {
                Err(err) => format!("parses, but {err}"),
                Ok(v) => format!("evaluates to {v}"),
            },
        };
        println!("  {src:10} -> {outcome}");
    }

    // non-smooth primitives refuse to differentiate
    println!(
        "\nd/dx ramp(x) -> {}",
        parse("ramp(x)").unwrap().derivative().unwrap_err()
    );
}
