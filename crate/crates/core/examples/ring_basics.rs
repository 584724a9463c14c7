//! Polynomial parsing and arithmetic over the rationals, the Jacobian of a
//! curve and its minors.

use ml_obstruction::ring::{jacobian, minors, parse, parse_rational, PolyMatrix, Polynomial, Rational, VariableRing};

fn main() {
    let ring = VariableRing::rational(&["x", "y", "z"]).unwrap();
    let f = parse("(x-1)^2 - (y-1)^2*(z-1)", &ring).unwrap();
    let g = parse("x*y*z - 3/2", &ring).unwrap();

    println!("f       = {f}");
    println!("g       = {g}");
    println!("f + g   = {}", f.try_add(&g).unwrap());
    println!("f * g   = {}", f.try_mul(&g).unwrap());
    println!("df/dy   = {}", f.partial(1));
    println!("deg f*g = {:?}", f.try_mul(&g).unwrap().total_degree());

    let p: Vec<_> = ["2", "1/3", "5"].iter().map(|s| parse_rational(s).unwrap()).collect();
    println!("f(2, 1/3, 5) = {}", f.evaluate(&p).unwrap());

    // two equations in three unknowns: the 2x2 minors cut out where the curve is singular
    let jac = jacobian(&[f.clone(), g], &[0, 1, 2]).unwrap();
    for r in 0..jac.rows() {
        let row: Vec<String> = jac.row(r).iter().map(|e| e.to_string()).collect();
        println!("J[{r}] = [{}]", row.join(", "));
    }
    for m in minors(&jac, 2).unwrap() {
        println!("minor   {m}");
    }

    // a 3x3 determinant through the same minor routine
    let h = VariableRing::rational(&["a", "b", "c", "d"]).unwrap();
    let e = |s: &str| -> Polynomial<Rational> { parse(s, &h).unwrap() };
    let hankel = PolyMatrix::from_rows(vec![
        vec![e("a"), e("b"), e("c")],
        vec![e("b"), e("c"), e("d")],
        vec![e("c"), e("d"), e("1")],
    ]);
    println!("det     = {}", minors(&hankel, 3).unwrap()[0]);
}
