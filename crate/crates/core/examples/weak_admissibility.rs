//! Weak admissibility of filtered isocrystals, one filtration at a time
//! and over a seeded scan of the flag variety.

use isolab::isocrystal::{int_columns, FilteredIsocrystal, Isocrystal};
use isolab::presets::preset;
use isolab::scan::{run_scan, summarize, to_csv, ScanConfig};
use std::collections::BTreeMap;

fn main() -> isolab::Result<()> {
    let ord = preset("ord2", 2, 1, 20)?;
    for v in [vec![1, 0], vec![0, 1], vec![1, 1]] {
        let fd = FilteredIsocrystal::with_top_piece(ord.clone(), vec![0, 1], int_columns(&ord, &[v.clone()]))?;
        let r = fd.weakly_admissible()?;
        println!("ord2, Fil^1 = span{v:?}: {} ({:?})", r.decision.as_str(), r.witness);
    }

    let ss = preset("ss2", 2, 1, 20)?;
    let fd = FilteredIsocrystal::with_top_piece(ss.clone(), vec![0, 1], int_columns(&ss, &[vec![1, 0]]))?;
    println!("ss2, Fil^1 = span(e_0): {}", fd.weakly_admissible()?.decision.as_str());

    let forced = BTreeMap::from([(1, int_columns(&ord, &[vec![1, 0]]))]);
    let cfg = ScanConfig { isocrystal: ord.clone(), weights: vec![0, 1], samples: 8, seed: 42, forced: vec![forced] };
    let rows = run_scan(&cfg)?;
    print!("{}", to_csv(&rows));
    println!("{:?}", summarize(&rows));

    // tensoring with a weakly admissible rank-one object keeps weak admissibility
    let mf = preset("mf3", 3, 1, 20)?;
    let g = FilteredIsocrystal::with_top_piece(mf.clone(), vec![0, 0, 1], int_columns(&mf, &[vec![1, 1, 1]]))?;
    let line = Isocrystal::from_int_rows(mf.field(), &[vec![3]])?;
    let l = FilteredIsocrystal::new(line.clone(), vec![1], BTreeMap::from([(1, int_columns(&line, &[vec![1]]))]))?;
    let gl = g.tensor(&l)?;
    println!("mf3 is {}, mf3 ⊗ (3, weight 1) is {}", g.weakly_admissible()?.decision.as_str(), gl.weakly_admissible()?.decision.as_str());
    Ok(())
}
