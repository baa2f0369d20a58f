//! Points of Gel'fand spectra: comb points on Z, disc points on Z_p[T],
//! and the transfer maps λ and μ between R and W(R).

use isolab::padic::{PadicScalar, Rat};
use isolab::perfect::{FqField, PerfectLaurent};
use isolab::seminorm::{lambda_map, mu_map, Element, PointEvaluator};
use isolab::witt::WittVector;
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> isolab::Result<()> {
    let comb = PointEvaluator::Comb { p: 3, c: BigRational::new(1.into(), 2.into()) };
    for n in [5, 9, 54] {
        println!("comb point c = 1/2 at p = 3 on {n}: {}", comb.eval(&Element::Integer(BigInt::from(n)))?);
    }

    let f = Element::Poly(vec![9, -6, 1].into_iter().map(|c| Element::Integer(c.into())).collect());
    for (z, r) in [(0, Some(0)), (3, Some(0)), (3, Some(1)), (3, None)] {
        let disc = PointEvaluator::Disc { center: PadicScalar::exact_int(3, z), radius_neg_log: r.map(Rat::from_integer) };
        println!("(T − 3)^2 at disc(z = {z}, −log_3 r = {r:?}): {}", disc.eval(&f)?);
    }

    let fq = FqField::new(2, 1)?;
    let x = PerfectLaurent::x(&fq, false);
    let one = PerfectLaurent::one(&fq, false);
    let beta = PointEvaluator::x_to_p(3);
    println!("μ(β)(X) = {}", mu_map(&beta, &x)?);

    let alpha = PointEvaluator::x_adic(2);
    let y = one.add(&PerfectLaurent::x_pow(&fq, Rat::new(3, 4), false)?).mul(&x);
    println!("α(y) = {}, μ(λ(α))(y) = {}", alpha.eval(&Element::Perfect(y.clone()))?, mu_map(&PointEvaluator::lambda_of(alpha), &y)?);

    // p[1] − [X] lies in the kernel direction of X ↦ p, so λ∘μ strictly dominates β there
    let w = WittVector::teichmuller(&one, 3).mul_p().sub(&WittVector::teichmuller(&x, 3))?;
    let lm = lambda_map(&PointEvaluator::mu_of(beta.clone()), &w)?;
    let b = beta.eval(&Element::Witt(w))?;
    println!("on p[1] − [X]: λ(μ(β)) = {lm}, β ≤ {b}");
    Ok(())
}
