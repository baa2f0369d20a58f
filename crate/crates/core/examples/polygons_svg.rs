//! Hodge and Newton polygons overlaid as SVG, with exact vertices kept in a
//! data attribute.

use isolab::isocrystal::hodge_polygon;
use isolab::presets::preset;
use isolab::svg::{render, vertex_string};

fn main() -> isolab::Result<()> {
    let hodge = hodge_polygon(&[0, 1]);
    let newton = preset("ord2", 5, 1, 20)?.newton_polygon()?;
    println!("Hodge  {}", vertex_string(&hodge));
    println!("Newton {}", vertex_string(&newton));
    println!("Hodge on or below Newton: {}", hodge.lies_on_or_below(&newton));
    let path = std::env::temp_dir().join("isolab-ord2.svg");
    std::fs::write(&path, render(&[("hodge", &hodge), ("newton", &newton)])).expect("writable temp dir");
    println!("wrote {}", path.display());
    Ok(())
}
