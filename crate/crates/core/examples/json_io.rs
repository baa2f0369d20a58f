//! Reading and writing the JSON formats used by the command line.

use isolab::json;
use serde_json::json;

fn main() -> isolab::Result<()> {
    let input = json!({
        "p": 2, "s": 1, "prec": 16,
        "phi": [[1, 0], [0, 2]],
        "filtration": {"jumps": [0, 1], "flags": {"1": [[1, 1]]}}
    });
    let fd = json::filtered_from_json(&input)?;
    let report = fd.weakly_admissible()?;
    println!("{}", json::decision_to_json(&report));

    let x = json::scalar_from_json(&json!("3/4"), Some(3), 6)?;
    println!("3/4 in Q_3 mod 3^6: {}", json::scalar_to_json(&x));

    let point = json::evaluator_from_json(&json!({"type": "power", "inner": {"type": "x_adic", "p": 2}, "exponent": "1/2"}))?;
    let elem = json::element_from_json(&json!({"type": "perfect", "p": 2, "terms": [{"num": 3, "den_pow": 1, "coeff": [1]}]}))?;
    println!("{}", json::seminorm_value_to_json(&point.eval(&elem)?));
    Ok(())
}
