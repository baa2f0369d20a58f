//! Witt vector structure polynomials, the ghost map, and Witt vectors over
//! the perfection of F_p((X)).

use isolab::perfect::{FqField, PerfectLaurent};
use isolab::padic::Rat;
use isolab::witt::{ghost_components, int_witt_op, structure_polys, WittVector};
use num_bigint::BigInt;

fn main() -> isolab::Result<()> {
    let polys = structure_polys(2, 3)?;
    println!("S_1 for p = 2 has {} terms, P_2 has {} terms", polys.sum()[1].num_terms(), polys.prod()[2].num_terms());

    let a: Vec<BigInt> = [3, 1, 4].map(BigInt::from).to_vec();
    let b: Vec<BigInt> = [1, 5, 9].map(BigInt::from).to_vec();
    let s = int_witt_op(2, &a, &b, true)?;
    println!("(3, 1, 4) + (1, 5, 9) = {s:?} in W_3(Z), p = 2");
    println!("ghost(a + b) = {:?}", ghost_components(2, &s));
    let ga = ghost_components(2, &a);
    let gb = ghost_components(2, &b);
    println!("ghost(a) + ghost(b) = {:?}", ga.iter().zip(&gb).map(|(x, y)| x + y).collect::<Vec<_>>());

    let f = FqField::new(3, 1)?;
    let one = PerfectLaurent::one(&f, true);
    let x = PerfectLaurent::x(&f, true);
    let two = WittVector::teichmuller(&one, 3).add(&WittVector::teichmuller(&one, 3))?;
    println!("[1] + [1] over F_3: {:?}", two.components());
    let root = PerfectLaurent::x_pow(&f, Rat::new(1, 3), true)?;
    let w = WittVector::teichmuller(&x, 3).sub(&WittVector::teichmuller(&root, 3).mul_p())?;
    println!("[X] − p[X^(1/3)] = {:?}", w.components());
    println!("Frobenius: {:?}", w.frobenius().components());
    Ok(())
}
