//! Named isocrystals used by the command line and the examples.

use crate::error::{Error, Result};
use crate::isocrystal::Isocrystal;
use crate::padic::UnramifiedField;

/// Names accepted by [`preset`].
pub const PRESETS: &[&str] = &["ord2", "ss2", "mf3", "ord3", "unit2"];

/// Integer Frobenius matrix of a preset, written with `p` substituted.
pub fn preset_rows(name: &str, p: i64) -> Result<Vec<Vec<i64>>> {
    Ok(match name {
        // diag(1, p)
        "ord2" => vec![vec![1, 0], vec![0, p]],
        "ss2" => vec![vec![0, p], vec![1, 0]],
        // 1 ⊕ ss2: slopes 0, 1/2, 1/2 with simple summands
        "mf3" => vec![vec![1, 0, 0], vec![0, 0, p], vec![0, 1, 0]],
        "ord3" => vec![vec![1, 0, 0], vec![0, p, 0], vec![0, 0, p * p]],
        "unit2" => vec![vec![1, 0], vec![0, 1]],
        other => {
            return Err(Error::Invalid(format!("unknown preset \"{other}\"; known: {}", PRESETS.join(", "))))
        }
    })
}

/// Hodge–Tate weights with t_H equal to the preset's degree.
pub fn preset_weights(name: &str) -> Result<Vec<i64>> {
    Ok(match name {
        "ord2" | "ss2" => vec![0, 1],
        "mf3" => vec![0, 0, 1],
        "ord3" => vec![0, 1, 2],
        "unit2" => vec![0, 0],
        other => return Err(Error::Invalid(format!("unknown preset \"{other}\""))),
    })
}

/// The preset over Q_{p^s} at precision `prec`.
pub fn preset(name: &str, p: u64, s: usize, prec: i64) -> Result<Isocrystal> {
    let rows = preset_rows(name, p as i64)?;
    let f = UnramifiedField::new(p, s, prec)?;
    Isocrystal::from_int_rows(&f, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Rat;

    #[test]
    fn preset_slopes() {
        let r = |a, b| Rat::new(a, b);
        let ss = preset("ss2", 3, 1, 20).unwrap();
        assert_eq!(ss.newton_slopes().unwrap(), vec![r(1, 2), r(1, 2)]);
        let mf = preset("mf3", 2, 1, 20).unwrap();
        assert_eq!(mf.newton_slopes().unwrap(), vec![r(0, 1), r(1, 2), r(1, 2)]);
        assert!(mf.is_multiplicity_free().unwrap());
        for name in PRESETS {
            let d = preset(name, 5, 1, 20).unwrap();
            let t_h: i64 = preset_weights(name).unwrap().iter().sum();
            assert_eq!(d.degree().unwrap(), t_h, "{name}");
        }
        assert!(preset("nope", 2, 1, 10).is_err());
    }
}
