use forge_core::{Grid, State64};

use crate::kinetics::recrystallized_size;
use crate::{Boundary, MaterialParams, SimError, SimState};

/// Local equivalent-strain increment of a stroke with nominal strain
/// `nominal` at normalized position `r/R`, `z/H`.
///
/// The barreling term vanishes in the volume average, so the mean increment
/// equals the nominal strain.
pub fn strain_increment(nominal: f64, barreling: f64, r_rel: f64, z_rel: f64) -> f64 {
    nominal * (1.0 + barreling * (1.0 - z_rel * z_rel) * (2.0 * r_rel * r_rel - 1.0))
}

/// Volume of the half billet spanned by the displaced node lattice, mm³.
///
/// Each lattice cell is treated as an annulus between its mean inner and
/// outer radii and its mean lower and upper heights.
pub fn lattice_volume(grid: &Grid, state: &State64) -> f64 {
    let pos = |row: usize, col: usize| {
        let idx = grid.index(row, col);
        (
            grid.r0(col) + state.ux.as_slice()[idx],
            grid.z0(row) + state.uy.as_slice()[idx],
        )
    };
    let mut total = 0.0;
    for row in 0..grid.n_axial - 1 {
        for col in 0..grid.n_radial - 1 {
            let (r00, z00) = pos(row, col);
            let (r01, z01) = pos(row, col + 1);
            let (r10, z10) = pos(row + 1, col);
            let (r11, z11) = pos(row + 1, col + 1);
            let r_in = 0.5 * (r00 + r10);
            let r_out = 0.5 * (r01 + r11);
            let dz = 0.5 * ((z10 - z00) + (z11 - z01));
            total += std::f64::consts::PI * (r_out * r_out - r_in * r_in) * dz;
        }
    }
    total
}

/// Applies upsetting stroke `stroke_index` (1-based) lasting `upsetting_time`
/// seconds: homogeneous compression, strain and adiabatic heating, die
/// contact cooling, and the start of a new recrystallization cycle.
pub fn apply_stroke(
    grid: &Grid,
    state: &mut SimState,
    stroke_index: usize,
    upsetting_time: f64,
    params: &MaterialParams,
) -> Result<(), SimError> {
    if !(1..=3).contains(&stroke_index) {
        return Err(SimError::InvalidStroke(stroke_index));
    }
    if state.strokes_done + 1 != stroke_index {
        return Err(SimError::StrokeOrder {
            expected: state.strokes_done + 1,
            got: stroke_index,
        });
    }
    if !(0.05..=0.15).contains(&upsetting_time) {
        return Err(SimError::InvalidUpsettingTime(upsetting_time));
    }
    let nominal = params.deformation.stroke_strains[stroke_index - 1];
    let barreling = params.deformation.barreling;
    let thermal = &params.thermal;

    // kinematics: height scales by λ, radius by λ^(-1/2)
    let lambda = (-nominal).exp();
    let fields = &mut state.fields;
    fields.geometry.half_height *= lambda;
    fields.geometry.radius *= lambda.powf(-0.5);
    let r_scale = fields.geometry.radius / grid.radius0;
    let h_scale = fields.geometry.half_height / grid.half_height0;

    let strain_rate = nominal / upsetting_time;
    let rows = grid.n_axial;
    let cols = grid.n_radial;
    for row in 0..rows {
        let z_rel = row as f64 / (rows - 1) as f64;
        for col in 0..cols {
            let r_rel = col as f64 / (cols - 1) as f64;
            let idx = grid.index(row, col);
            fields.ux.as_mut_slice()[idx] = grid.r0(col) * (r_scale - 1.0);
            fields.uy.as_mut_slice()[idx] = grid.z0(row) * (h_scale - 1.0);

            let de = strain_increment(nominal, barreling, r_rel, z_rel);
            fields.eqplast.as_mut_slice()[idx] += de;
            fields.temperature.as_mut_slice()[idx] += thermal.adiabatic_rise(de);

            let node = &mut state.nodes[idx];
            let rx = fields.rx.as_slice()[idx];
            let retained = (1.0 - rx) * node.driving_strain;
            node.driving_strain = de + retained;
            node.strain_rate = strain_rate;
            node.normalized_time = 0.0;
            node.d_prev = fields.grain.as_slice()[idx];
            node.d_rx = recrystallized_size(&params.kinetics, node.d_prev, node.driving_strain);
            node.growth_power = None;
            fields.rx.as_mut_slice()[idx] = 0.0;
        }
    }
    state.strokes_done = stroke_index;

    // die contact for the duration of the stroke; no kinetics during upsetting
    state.advance(grid, upsetting_time, Boundary::DieContact, params, false);
    Ok(())
}
