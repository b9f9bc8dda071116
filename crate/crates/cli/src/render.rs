use std::fmt::Write;

use forge_core::{Field, FieldId, FieldStack, Grid, NormalizationConstants, State64};

use crate::CliError;

const CSV_HEADER: &str = "row,col,r_mm,z_mm,temperature,ux,uy,eqplast,rx,grain";

/// One line per node with the deformed position and all six fields in
/// physical units.
pub fn state_csv(grid: &Grid, state: &State64) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in 0..grid.n_axial {
        for c in 0..grid.n_radial {
            let v = |id: FieldId| state.field(id).get(r, c);
            writeln!(
                out,
                "{r},{c},{},{},{},{},{},{},{},{}",
                grid.r0(c) + v(FieldId::Ux),
                grid.z0(r) + v(FieldId::Uy),
                v(FieldId::Temperature),
                v(FieldId::Ux),
                v(FieldId::Uy),
                v(FieldId::EqPlast),
                v(FieldId::Rx),
                v(FieldId::Grain),
            )
            .expect("string write");
        }
    }
    out
}

/// Inverse of [`state_csv`] for the field columns.
pub fn parse_state_csv(grid: &Grid, text: &str) -> Result<FieldStack<f64>, CliError> {
    let bad = |m: String| CliError::new("csv", m);
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad("unexpected header".into()));
    }
    let mut flat = vec![f64::NAN; grid.node_count() * FieldId::ALL.len()];
    let mut seen = 0;
    for (n, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 10 {
            return Err(bad(format!("line {}: expected 10 columns", n + 2)));
        }
        let num = |i: usize| -> Result<f64, CliError> {
            cols[i].parse().map_err(|_| bad(format!("line {}: bad number {:?}", n + 2, cols[i])))
        };
        let (r, c) = (num(0)? as usize, num(1)? as usize);
        if r >= grid.n_axial || c >= grid.n_radial {
            return Err(bad(format!("line {}: node ({r}, {c}) outside the grid", n + 2)));
        }
        for id in FieldId::ALL {
            flat[id.channel() * grid.node_count() + grid.index(r, c)] = num(4 + id.channel())?;
        }
        seen += 1;
    }
    if seen != grid.node_count() {
        return Err(bad(format!("expected {} nodes, found {seen}", grid.node_count())));
    }
    Ok(FieldStack::from_flat(grid, &flat)?)
}

/// Portable graymap of one field plus the optional threshold overlay and the
/// CSV twin.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub image: String,
    pub overlay: Option<String>,
    pub csv: String,
    /// Nodes marked in the overlay.
    pub overlay_nodes: usize,
}

/// Renders `field` scaled by the normalization range of `id`. The die face
/// is the top image row and the axis the left column. Overlay pixels are 255
/// where the value exceeds `threshold` inside `mask` (everywhere without one).
pub fn render_field(
    field: &Field<f64>,
    id: FieldId,
    constants: &NormalizationConstants,
    threshold: Option<f64>,
    mask: Option<&[bool]>,
    scale: usize,
) -> Rendered {
    let scale = scale.max(1);
    let bounds = constants.bounds(id);
    let (rows, cols) = (field.rows(), field.cols());
    let inside = |r: usize, c: usize| mask.is_none_or(|m| m[r * cols + c]);
    let above = |r: usize, c: usize| threshold.is_some_and(|t| field.get(r, c) > t && inside(r, c));
    let gray = |r: usize, c: usize| (bounds.normalize(field.get(r, c)) * 255.0).round() as u8;

    let image = pgm(rows, cols, scale, |r, c| gray(r, c));
    let overlay = threshold.map(|_| pgm(rows, cols, scale, |r, c| if above(r, c) { 255 } else { 0 }));
    let mut overlay_nodes = 0;
    let mut csv = format!("row,col,{}", id.name());
    if threshold.is_some() {
        csv.push_str(",above_threshold");
    }
    csv.push('\n');
    for r in 0..rows {
        for c in 0..cols {
            write!(csv, "{r},{c},{}", field.get(r, c)).expect("string write");
            if threshold.is_some() {
                let a = above(r, c);
                overlay_nodes += usize::from(a);
                write!(csv, ",{}", u8::from(a)).expect("string write");
            }
            csv.push('\n');
        }
    }
    Rendered { image, overlay, csv, overlay_nodes }
}

fn pgm(rows: usize, cols: usize, scale: usize, pixel: impl Fn(usize, usize) -> u8) -> String {
    let mut out = format!("P2\n{} {}\n255\n", cols * scale, rows * scale);
    for r in (0..rows).rev() {
        let line: Vec<String> = (0..cols)
            .flat_map(|c| std::iter::repeat_n(pixel(r, c), scale))
            .map(|p| p.to_string())
            .collect();
        let line = line.join(" ");
        for _ in 0..scale {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}
