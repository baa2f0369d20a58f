//! SVG rendering of Newton and Hodge polygons.
//!
//! Each polygon becomes a `<polyline>` whose `data-vertices` attribute holds
//! the exact vertices as `x,y` pairs with rational y.

use crate::padic::{NewtonPolygon, Rat};

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 40.0;

fn rat_str(r: Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact vertex list, e.g. `0,0 1,0 2,1`.
pub fn vertex_string(poly: &NewtonPolygon) -> String {
    poly.vertices().iter().map(|&(x, y)| format!("{x},{}", rat_str(y))).collect::<Vec<_>>().join(" ")
}

/// Draws the labelled polygons on shared axes.
pub fn render(polys: &[(&str, &NewtonPolygon)]) -> String {
    let pts: Vec<(i64, Rat)> = polys.iter().flat_map(|(_, p)| p.vertices().iter().copied()).collect();
    let x_max = pts.iter().map(|p| p.0).max().unwrap_or(1).max(1) as f64;
    let y_min = pts.iter().map(|p| to_f64(p.1)).fold(0.0, f64::min);
    let y_max = pts.iter().map(|p| to_f64(p.1)).fold(0.0, f64::max);
    let y_span = (y_max - y_min).max(1.0);
    let sx = |x: f64| MARGIN + x / x_max * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_min) / y_span * (HEIGHT - 2.0 * MARGIN);
    let colors = ["#1f4e9c", "#c0392b", "#2e7d32", "#6a1b9a"];
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    );
    out.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\"/>\n",
        sx(0.0),
        sy(0.0),
        sx(x_max),
        sy(0.0)
    ));
    for (k, (label, poly)) in polys.iter().enumerate() {
        let color = colors[k % colors.len()];
        let screen: Vec<String> =
            poly.vertices().iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x as f64), sy(to_f64(y)))).collect();
        out.push_str(&format!(
            "  <polyline class=\"{label}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\" data-vertices=\"{}\"/>\n",
            screen.join(" "),
            vertex_string(poly)
        ));
        for &(x, y) in poly.vertices() {
            out.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                sx(x as f64),
                sy(to_f64(y))
            ));
        }
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\" font-size=\"13\">{label}</text>\n",
            MARGIN,
            18.0 + 16.0 * k as f64
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::hodge_polygon;

    #[test]
    fn vertices_are_exact() {
        let h = hodge_polygon(&[1, 0]);
        assert_eq!(vertex_string(&h), "0,0 1,0 2,1");
        let n = NewtonPolygon::from_slopes(&[Rat::new(1, 2), Rat::new(1, 2)]);
        let s = render(&[("hodge", &h), ("newton", &n)]);
        assert!(s.contains("data-vertices=\"0,0 1,0 2,1\""));
        assert!(s.contains("data-vertices=\"0,0 2,1\""));
    }
}
