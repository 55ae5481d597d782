//! SVG pictures of two-dimensional configurations.

use std::fmt::Write;

use crate::coupling::CoupledPair;
use crate::lattice::{Form, Lattice};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("rendering needs a two-dimensional box, got dimension {0}")]
    Dimension(usize),
}

const UNIT: i32 = 40;
const PAD: i32 = 20;

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn px(lat: &Lattice, x: i32, axis: usize) -> i32 {
    let v = if axis == 0 { x - lat.lo()[0] } else { lat.hi()[1] - x };
    PAD + UNIT * v
}

fn header(lat: &Lattice, out: &mut String) {
    let w = 2 * PAD + UNIT * (lat.hi()[0] - lat.lo()[0]);
    let h = 2 * PAD + UNIT * (lat.hi()[1] - lat.lo()[1]);
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
}

fn plaquettes(ds: &Form, out: &mut String) {
    let lat = ds.lattice();
    for s in ds.support() {
        let p = lat.cell_at(2, s).unwrap();
        let x = px(lat, p.base[0], 0);
        let y = px(lat, p.base[1] + 1, 1);
        writeln!(out, r##"<rect class="frustrated" x="{x}" y="{y}" width="{UNIT}" height="{UNIT}" fill="#fdd49e"/>"##)
            .unwrap();
    }
}

fn grid(lat: &Lattice, out: &mut String) {
    for s in lat.slots(1) {
        edge_line(lat, s, "grid", "#cccccc", 1, out);
    }
}

fn edge_line(lat: &Lattice, slot: usize, class: &str, color: &str, width: i32, out: &mut String) {
    let e = lat.cell_at(1, slot).unwrap();
    let (a, b) = e.endpoints();
    let (x1, y1, x2, y2) = (px(lat, a[0], 0), px(lat, a[1], 1), px(lat, b[0], 0), px(lat, b[1], 1));
    writeln!(
        out,
        r#"<line class="{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{width}"/>"#
    )
    .unwrap();
}

/// Grid, frustrated plaquettes filled, edges with `sigma_e != 0` coloured by value.
pub fn render_sigma(sigma: &Form) -> Result<String, RenderError> {
    let lat = sigma.lattice();
    if lat.dim() != 2 {
        return Err(RenderError::Dimension(lat.dim()));
    }
    let mut out = String::new();
    header(lat, &mut out);
    plaquettes(&sigma.d().expect("1-form"), &mut out);
    grid(lat, &mut out);
    for s in sigma.support() {
        let color = PALETTE[(sigma.slot(s) as usize - 1) % PALETTE.len()];
        edge_line(lat, s, "edge", color, 4, &mut out);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Coupled pair: edges in `supp sigma` only, `supp sigma'` only, or both, in three colours.
pub fn render_pair(pair: &CoupledPair) -> Result<String, RenderError> {
    let lat = pair.sigma.lattice();
    if lat.dim() != 2 {
        return Err(RenderError::Dimension(lat.dim()));
    }
    let mut out = String::new();
    header(lat, &mut out);
    plaquettes(&pair.sigma.d().expect("1-form"), &mut out);
    grid(lat, &mut out);
    for s in lat.slots(1) {
        let (a, b) = (pair.sigma.slot(s) != 0, pair.sigma_prime.slot(s) != 0);
        let (class, color) = match (a, b) {
            (true, false) => ("sigma-only", "#d62728"),
            (false, true) => ("prime-only", "#1f77b4"),
            (true, true) => ("shared", "#9467bd"),
            (false, false) => continue,
        };
        edge_line(lat, s, class, color, 4, &mut out);
    }
    for (i, (label, color)) in
        [("sigma only", "#d62728"), ("sigma' only", "#1f77b4"), ("both", "#9467bd")].iter().enumerate()
    {
        let y = 14 + 14 * i as i32;
        writeln!(out, r#"<text class="legend" x="4" y="{y}" font-size="11" fill="{color}">{label}</text>"#).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Number of elements carrying `class="<name>"`.
pub fn count_class(svg: &str, name: &str) -> usize {
    svg.matches(&format!(r#"class="{name}""#)).count()
}
