//! Local modifications at θ_n divisors and the degree identity
//! deg(M') = t_N(D) − t_H(D).

use isolab::isocrystal::{int_columns, FilteredIsocrystal};
use isolab::presets::preset;
use isolab::robba::{berger_degree, local_modification};

fn main() -> isolab::Result<()> {
    let d = preset("ord2", 2, 1, 20)?;
    for v in [vec![1, 1], vec![1, 0]] {
        let fd = FilteredIsocrystal::with_top_piece(d.clone(), vec![0, 1], int_columns(&d, &[v.clone()]))?;
        let lm = local_modification(&fd, 1, 2)?;
        println!("Fil^1 = span{v:?}");
        for row in &lm.matrix {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            println!("  [{}]", cells.join(", "));
        }
        println!("  ord_t det P = {}, t_H = {}", lm.det_t_valuation, fd.t_h());
        println!("  deg M' = {}, weakly admissible: {}", berger_degree(&fd)?, fd.weakly_admissible()?.decision.as_str());
    }
    let twisted = preset("ord3", 3, 2, 20)?;
    let fd = FilteredIsocrystal::with_top_piece(twisted.clone(), vec![0, 3, 3], int_columns(&twisted, &[vec![1, 1, 0], vec![0, 1, 1]]))?;
    println!("ord3 with weights 0, 3, 3 over Q_9: deg M' = {}", berger_degree(&fd)?);
    Ok(())
}
