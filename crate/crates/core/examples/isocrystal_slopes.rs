//! Degree, slopes, Newton polygons and Dieudonné–Manin data of isocrystals.

use isolab::isocrystal::Isocrystal;
use isolab::padic::{Rat, UnramifiedField};
use isolab::presets::{preset, PRESETS};

fn show(v: &[Rat]) -> String {
    v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
}

fn main() -> isolab::Result<()> {
    for name in PRESETS {
        let d = preset(name, 3, 1, 20)?;
        let slopes: Vec<String> = d.newton_slopes()?.iter().map(|s| s.to_string()).collect();
        println!("{name}: degree {}, slopes [{}]", d.degree()?, slopes.join(", "));
    }

    // a rank-3 isocrystal with a single slope 1/3
    let k = UnramifiedField::new(2, 1, 20)?;
    let d = Isocrystal::from_int_rows(&k, &[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]])?;
    println!("cyclic rank 3: slopes {}", show(&d.newton_slopes()?));
    println!("Newton polygon {}", isolab::svg::vertex_string(&d.newton_polygon()?));
    match d.dm_data() {
        Ok(dm) => println!("Dieudonné–Manin summands (rank, p-power): {:?}", dm.summands),
        Err(e) => println!("{e}"),
    }

    // Φ = diag(1, 2) conjugated by [[1, 1], [1, 2]]: same slopes, new basis
    let e = Isocrystal::from_int_rows(&k, &[vec![0, 1], vec![-2, 3]])?;
    println!("[[0, 1], [−2, 3]]: slopes {}", show(&e.newton_slopes()?));
    let dm = e.dm_data()?;
    println!("standard basis columns found: {} x {}", dm.basis.rows(), dm.basis.cols());
    Ok(())
}
