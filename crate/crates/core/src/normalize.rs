use serde::{Deserialize, Serialize};

use crate::{CoreError, Field, FieldId, FieldStack, Scalar, WorkpieceState};

/// Affine map `x -> (x - min) / range` for one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldBounds {
    pub min: f64,
    pub range: f64,
}

impl FieldBounds {
    pub const fn new(min: f64, range: f64) -> Self {
        Self { min, range }
    }

    pub fn max(&self) -> f64 {
        self.min + self.range
    }

    /// Normalized value, clamped to `[0, 1]`.
    #[inline]
    pub fn normalize(&self, x: f64) -> f64 {
        ((x - self.min) / self.range).clamp(0.0, 1.0)
    }

    #[inline]
    pub fn denormalize(&self, u: f64) -> f64 {
        self.min + u * self.range
    }
}

/// Per-field normalization limits. Defaults are the dataset limits of the
/// reference process; a dataset manifest may carry overrides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConstants {
    pub temperature: FieldBounds,
    pub ux: FieldBounds,
    pub uy: FieldBounds,
    pub eqplast: FieldBounds,
    pub rx: FieldBounds,
    pub grain: FieldBounds,
}

impl Default for NormalizationConstants {
    fn default() -> Self {
        Self {
            temperature: FieldBounds::new(938.0, 512.0),
            ux: FieldBounds::new(0.0, 2.41),
            uy: FieldBounds::new(-5.0, 5.0),
            eqplast: FieldBounds::new(0.0, 1.13),
            rx: FieldBounds::new(0.0, 1.0),
            grain: FieldBounds::new(17.5, 52.5),
        }
    }
}

impl NormalizationConstants {
    pub fn bounds(&self, id: FieldId) -> FieldBounds {
        match id {
            FieldId::Temperature => self.temperature,
            FieldId::Ux => self.ux,
            FieldId::Uy => self.uy,
            FieldId::EqPlast => self.eqplast,
            FieldId::Rx => self.rx,
            FieldId::Grain => self.grain,
        }
    }

    /// Checked lookup: the range must be strictly positive and finite.
    pub fn checked_bounds(&self, id: FieldId) -> Result<FieldBounds, CoreError> {
        let b = self.bounds(id);
        if b.range > 0.0 && b.range.is_finite() && b.min.is_finite() {
            Ok(b)
        } else {
            Err(CoreError::InvalidRange {
                field: id.name(),
                range: b.range,
            })
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        FieldId::ALL
            .iter()
            .try_for_each(|&id| self.checked_bounds(id).map(|_| ()))
    }

    /// Normalizes every field of a physical state.
    pub fn normalize_state<T: Scalar>(
        &self,
        state: &WorkpieceState<T>,
    ) -> Result<FieldStack<T>, CoreError> {
        let mut fields = Vec::with_capacity(FieldId::ALL.len());
        for id in FieldId::ALL {
            fields.push(normalize_field(state.field(id), self, id)?);
        }
        let fields: [Field<T>; 6] = fields.try_into().expect("six fields");
        Ok(FieldStack::new(fields))
    }

    /// Maps a normalized stack back to physical units.
    pub fn denormalize_stack<T: Scalar>(
        &self,
        stack: &FieldStack<T>,
    ) -> Result<FieldStack<T>, CoreError> {
        let mut out = stack.clone();
        for id in FieldId::ALL {
            *out.field_mut(id) = denormalize_field(stack.field(id), self, id)?;
        }
        Ok(out)
    }
}

/// `clamp((x - min) / range, 0, 1)` elementwise.
pub fn normalize_field<T: Scalar>(
    field: &Field<T>,
    constants: &NormalizationConstants,
    id: FieldId,
) -> Result<Field<T>, CoreError> {
    let b = constants.checked_bounds(id)?;
    Ok(field.map(|x| T::of(b.normalize(x.to_f64_lossy()))))
}

/// `min + u * range` elementwise; the inverse of [`normalize_field`] inside the
/// clamp region.
pub fn denormalize_field<T: Scalar>(
    field: &Field<T>,
    constants: &NormalizationConstants,
    id: FieldId,
) -> Result<Field<T>, CoreError> {
    let b = constants.checked_bounds(id)?;
    Ok(field.map(|u| T::of(b.denormalize(u.to_f64_lossy()))))
}
