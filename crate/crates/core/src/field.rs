use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{CoreError, Grid, Scalar};

/// Number of per-node fields carried by a workpiece state.
pub const FIELD_COUNT: usize = 6;

/// The six nodal fields, in channel order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldId {
    Temperature,
    Ux,
    Uy,
    EqPlast,
    Rx,
    Grain,
}

impl FieldId {
    pub const ALL: [FieldId; FIELD_COUNT] = [
        FieldId::Temperature,
        FieldId::Ux,
        FieldId::Uy,
        FieldId::EqPlast,
        FieldId::Rx,
        FieldId::Grain,
    ];

    /// Channel index in the stacked `(6, rows, cols)` layout.
    pub fn channel(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldId::Temperature => "temperature",
            FieldId::Ux => "ux",
            FieldId::Uy => "uy",
            FieldId::EqPlast => "eqplast",
            FieldId::Rx => "rx",
            FieldId::Grain => "grain",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            FieldId::Temperature => "°C",
            FieldId::Ux | FieldId::Uy => "mm",
            FieldId::EqPlast | FieldId::Rx => "-",
            FieldId::Grain => "µm",
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "temperature" | "temp" | "t" => Ok(FieldId::Temperature),
            "ux" => Ok(FieldId::Ux),
            "uy" => Ok(FieldId::Uy),
            "eqplast" => Ok(FieldId::EqPlast),
            "rx" | "recrystallization" => Ok(FieldId::Rx),
            "grain" | "grain_size" => Ok(FieldId::Grain),
            _ => Err(CoreError::UnknownField(s.to_string())),
        }
    }
}

/// One scalar value per grid node, row-major (`rows` axial × `cols` radial).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Field<T> {
    pub fn filled(grid: &Grid, value: T) -> Self {
        Self {
            rows: grid.n_axial,
            cols: grid.n_radial,
            data: vec![value; grid.node_count()],
        }
    }

    pub fn from_vec(grid: &Grid, data: Vec<T>) -> Result<Self, CoreError> {
        if data.len() != grid.node_count() {
            return Err(CoreError::ShapeMismatch {
                expected: grid.node_count(),
                actual: data.len(),
            });
        }
        Ok(Self {
            rows: grid.n_axial,
            cols: grid.n_radial,
            data,
        })
    }

    /// Builds a field by evaluating `f(row, col)` at every node.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(grid.node_count());
        for row in 0..grid.n_axial {
            for col in 0..grid.n_radial {
                data.push(f(row, col));
            }
        }
        Self {
            rows: grid.n_axial,
            cols: grid.n_radial,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.cols + col] = value;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> Field<U> {
        self.map(|x| U::of(x.to_f64_lossy()))
    }

    pub fn min(&self) -> T {
        self.data.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.data.iter().copied().fold(T::neg_infinity(), T::max)
    }
}

/// Current outer dimensions of the deformed half-section, mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub radius: f64,
    pub half_height: f64,
}

impl Geometry {
    pub fn initial(grid: &Grid) -> Self {
        Self {
            radius: grid.radius0,
            half_height: grid.half_height0,
        }
    }
}

/// The six fields stacked in channel order, `(6, rows, cols)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldStack<T> {
    fields: Vec<Field<T>>,
}

impl<T: Scalar> FieldStack<T> {
    pub fn new(fields: [Field<T>; FIELD_COUNT]) -> Self {
        Self {
            fields: fields.into(),
        }
    }

    /// Splits a flat channel-major buffer of `6 * node_count` values.
    pub fn from_flat(grid: &Grid, flat: &[T]) -> Result<Self, CoreError> {
        let n = grid.node_count();
        if flat.len() != FIELD_COUNT * n {
            return Err(CoreError::ShapeMismatch {
                expected: FIELD_COUNT * n,
                actual: flat.len(),
            });
        }
        let fields = flat
            .chunks_exact(n)
            .map(|c| Field::from_vec(grid, c.to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { fields })
    }

    pub fn field(&self, id: FieldId) -> &Field<T> {
        &self.fields[id.channel()]
    }

    pub fn field_mut(&mut self, id: FieldId) -> &mut Field<T> {
        &mut self.fields[id.channel()]
    }

    pub fn to_flat(&self) -> Vec<T> {
        self.fields
            .iter()
            .flat_map(|f| f.as_slice().iter().copied())
            .collect()
    }

    pub fn cast<U: Scalar>(&self) -> FieldStack<U> {
        FieldStack {
            fields: self.fields.iter().map(Field::cast).collect(),
        }
    }
}

/// Physical nodal state of the workpiece.
///
/// Units: temperature °C, displacements mm, eqplast and rx dimensionless,
/// grain µm. Displacements are measured from the undeformed lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkpieceState<T> {
    pub temperature: Field<T>,
    pub ux: Field<T>,
    pub uy: Field<T>,
    pub eqplast: Field<T>,
    pub rx: Field<T>,
    pub grain: Field<T>,
    pub geometry: Geometry,
}

impl<T: Scalar> WorkpieceState<T> {
    /// Undeformed billet at a uniform temperature with uniform grain size.
    pub fn uniform(grid: &Grid, temperature: T, grain: T) -> Self {
        Self {
            temperature: Field::filled(grid, temperature),
            ux: Field::filled(grid, T::zero()),
            uy: Field::filled(grid, T::zero()),
            eqplast: Field::filled(grid, T::zero()),
            rx: Field::filled(grid, T::zero()),
            grain: Field::filled(grid, grain),
            geometry: Geometry::initial(grid),
        }
    }

    pub fn field(&self, id: FieldId) -> &Field<T> {
        match id {
            FieldId::Temperature => &self.temperature,
            FieldId::Ux => &self.ux,
            FieldId::Uy => &self.uy,
            FieldId::EqPlast => &self.eqplast,
            FieldId::Rx => &self.rx,
            FieldId::Grain => &self.grain,
        }
    }

    pub fn field_mut(&mut self, id: FieldId) -> &mut Field<T> {
        match id {
            FieldId::Temperature => &mut self.temperature,
            FieldId::Ux => &mut self.ux,
            FieldId::Uy => &mut self.uy,
            FieldId::EqPlast => &mut self.eqplast,
            FieldId::Rx => &mut self.rx,
            FieldId::Grain => &mut self.grain,
        }
    }

    pub fn to_stack(&self) -> FieldStack<T> {
        FieldStack {
            fields: FieldId::ALL.iter().map(|&id| self.field(id).clone()).collect(),
        }
    }

    pub fn from_stack(stack: FieldStack<T>, geometry: Geometry) -> Self {
        let mut it = stack.fields.into_iter();
        let mut next = || it.next().expect("stack holds six fields");
        Self {
            temperature: next(),
            ux: next(),
            uy: next(),
            eqplast: next(),
            rx: next(),
            grain: next(),
            geometry,
        }
    }
}
