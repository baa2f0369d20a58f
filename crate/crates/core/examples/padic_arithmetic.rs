//! Scalars in Q_p with tracked precision, unramified and cyclotomic
//! extensions, and Newton polygons of polynomials.

use isolab::padic::{newton_polygon_of, CyclotomicElement, CyclotomicField, PadicScalar, Rat, UnramifiedElement, UnramifiedField};
use num_rational::BigRational;

fn main() -> isolab::Result<()> {
    // 3^{-1} modulo 2^4
    let three = PadicScalar::from_int(2, 3, 4);
    println!("1/3 in Z_2 mod 2^4: {}", three.inv()?);

    let q = PadicScalar::from_ratio(5, &BigRational::new(7.into(), 50.into()), 8)?;
    println!("7/50 in Q_5: {q}  (valuation {:?})", q.val());
    let sum = &q + &PadicScalar::from_int(5, 1, 3);
    println!("adding a value known mod 5^3 lowers the precision: {sum}");

    let k = UnramifiedField::new(3, 2, 10)?;
    let y = UnramifiedElement::generator(&k);
    println!("Q_9 generator y = {y}, σ(y) = {}, σ²(y) = {}", y.frobenius(), y.frobenius_pow(2));

    let f = CyclotomicField::new(2, 3)?;
    let eps = CyclotomicElement::epsilon(&f);
    println!("ε_3 has order 8: ε^8 = {}", eps.pow(8));
    println!("v(ε_3 − 1) = {}", CyclotomicElement::x(&f).val().expect("nonzero"));

    // X^3 + 4X^2 + 2X + 8 over Q_2: valuations 3, 1, 2, 0
    let vals = [3, 1, 2, 0].map(|v| Some(Rat::from_integer(v)));
    let np = newton_polygon_of(&vals)?;
    let verts: Vec<String> = np.vertices().iter().map(|(x, y)| format!("({x}, {y})")).collect();
    let roots: Vec<String> = np.root_valuations().iter().map(|r| r.to_string()).collect();
    println!("Newton polygon {}, root valuations {}", verts.join(" "), roots.join(", "));
    Ok(())
}
