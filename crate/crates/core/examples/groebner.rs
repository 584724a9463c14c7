//! Reduced Gröbner bases, dimension and degree, elimination and saturation.

use ml_obstruction::groebner::{buchberger, eliminate, saturate_by_ideal, saturate_by_poly, GbConfig, MonomialOrder};
use ml_obstruction::ring::{parse, Polynomial, Rational, VariableRing};

fn show(label: &str, gens: &[Polynomial<Rational>]) {
    let text: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    println!("{label:<28} ({})", text.join(", "));
}

fn main() {
    let cfg = GbConfig { self_check_up_to: 50, ..GbConfig::default() };
    let ring = VariableRing::rational(&["x", "y"]).unwrap();
    let p = |s: &str| parse(s, &ring).unwrap();

    // circle meets a line in two points
    let gb = buchberger(&[p("x^2 + y^2 - 1"), p("x - 2*y")], MonomialOrder::Grevlex, &cfg).unwrap();
    show("circle and line", gb.generators());
    println!("  dimension {:?}, degree {}", gb.dimension(), gb.zero_dim_degree().unwrap());
    println!("  x^2 - 4*y^2 in ideal: {}", gb.contains(&p("x^2 - 4*y^2")));

    let lex = buchberger(&[p("x^2 + y^2 - 1"), p("x - 2*y")], MonomialOrder::Lex, &cfg).unwrap();
    show("same ideal, lex", lex.generators());

    // the twisted cubic: eliminate t from (x - t, y - t^2, z - t^3)
    let r3 = VariableRing::rational(&["t", "x", "y", "z"]).unwrap();
    let q = |s: &str| parse(s, &r3).unwrap();
    let cubic = eliminate(&[q("x - t"), q("y - t^2"), q("z - t^3")], 1, &cfg).unwrap();
    show("twisted cubic", &cubic);

    // I = (x*y, x*z) = (x) ∩ (y, z); saturating by x leaves (y, z)
    let r = VariableRing::rational(&["x", "y", "z"]).unwrap();
    let s = |t: &str| parse(t, &r).unwrap();
    let i = [s("x*y"), s("x*z")];
    show("(x*y, x*z) : x^inf", &saturate_by_poly(&i, &s("x"), &cfg).unwrap());
    show("(x*y, x*z) : (y, z)^inf", &saturate_by_ideal(&i, &[s("y"), s("z")], &cfg).unwrap());
}
