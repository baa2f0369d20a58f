//! Truncated Robba series: t = log(1 + π), the actions of φ and γ, θ_n and
//! the base-change square.

use isolab::padic::{PadicScalar, Rat};
use isolab::robba::{base_change_diagram_check, gamma_act, phi_act, t_element, theta_n, RobbaElement};

fn main() -> isolab::Result<()> {
    let p = 3;
    let t = t_element(p, 8, 10)?;
    println!("t = {t}");
    let phi_t = phi_act(&t)?;
    let agree = phi_t.agrees_with(&t.scale(&PadicScalar::exact_int(p, p))?)?;
    println!("φ(t) = 3t: {} ({} coefficients compared)", agree.equal, agree.compared);

    let gamma = PadicScalar::from_int(p, 4, 12);
    let g_t = gamma_act(&t, &gamma)?;
    println!("γ(t) = 4t: {}", g_t.agrees_with(&t.scale(&gamma)?)?.equal);

    let f = RobbaElement::from_ints(p, Rat::new(1, 1), 10, &[(0, 1), (1, 2), (3, -1)])?;
    let v = f.v_r(Rat::new(1, 1))?;
    println!("v_1(f) = {} (exact: {})", v.value.map_or("∞".into(), |x| x.to_string()), v.exact);
    println!("θ_1(f) = {}", theta_n(&f, 1, 3)?);

    let long_t = t_element(2, 40, 10)?;
    for n in 1..=2 {
        let d = base_change_diagram_check(&long_t, n, 6)?;
        println!("square at n = {n}: commutes = {}, compared to precision {}", d.equal(), d.discrepancy.precision);
    }
    Ok(())
}
