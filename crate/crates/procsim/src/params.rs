use serde::{Deserialize, Serialize};

/// Thermal and thermo-mechanical constants (SI units, temperatures in °C).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    /// W/(m·K)
    pub conductivity: f64,
    /// kg/m³
    pub density: f64,
    /// J/(kg·K)
    pub specific_heat: f64,
    /// Free-surface convection coefficient, W/(m²·K).
    pub air_htc: f64,
    pub emissivity: f64,
    pub ambient: f64,
    /// Die-contact conductance during a stroke, W/(m²·K).
    pub die_htc: f64,
    pub die_temperature: f64,
    /// Fraction of plastic work converted to heat.
    pub taylor_quinney: f64,
    /// Representative flow stress for adiabatic heating, Pa.
    pub flow_stress: f64,
    /// Forced-convection coefficient while quenching, W/(m²·K).
    pub quench_htc: f64,
    /// s
    pub quench_duration: f64,
    /// Microstructure is frozen below this temperature.
    pub frozen_below: f64,
}

impl ThermalParams {
    /// Thermal diffusivity, m²/s.
    pub fn diffusivity(&self) -> f64 {
        self.conductivity / (self.density * self.specific_heat)
    }

    /// Volumetric heat capacity, J/(m³·K).
    pub fn heat_capacity(&self) -> f64 {
        self.density * self.specific_heat
    }

    /// Temperature rise from plastic work at the given equivalent strain.
    pub fn adiabatic_rise(&self, strain: f64) -> f64 {
        self.taylor_quinney * self.flow_stress * strain / self.heat_capacity()
    }
}

impl Default for ThermalParams {
    fn default() -> Self {
        Self {
            conductivity: 30.0,
            density: 7850.0,
            specific_heat: 650.0,
            air_htc: 10.0,
            emissivity: 0.065,
            ambient: 25.0,
            die_htc: 5000.0,
            die_temperature: 250.0,
            taylor_quinney: 0.9,
            flow_stress: 150e6,
            quench_htc: 2000.0,
            quench_duration: 2.0,
            frozen_below: 900.0,
        }
    }
}

/// Static recrystallization and grain-growth constants. Grain sizes in µm,
/// activation energies in J/mol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticParams {
    /// Prefactor of the half-recrystallization time, s·µm⁻².
    pub a_t50: f64,
    pub t50_grain_exp: f64,
    pub t50_strain_exp: f64,
    pub t50_rate_exp: f64,
    pub q_rex: f64,
    pub avrami_exp: f64,
    pub c_drx: f64,
    pub drx_grain_exp: f64,
    pub drx_strain_exp: f64,
    /// Floor on the recrystallized grain size, µm.
    pub d_rx_min: f64,
    pub growth_exp: f64,
    /// µm^growth_exp / s
    pub k_growth: f64,
    pub q_growth: f64,
    /// Recrystallized fraction above which a node switches to grain growth.
    pub growth_switch_rx: f64,
    pub d0_init: f64,
    pub r_gas: f64,
}

impl Default for KineticParams {
    fn default() -> Self {
        Self {
            a_t50: 5.8e-15,
            t50_grain_exp: 2.0,
            t50_strain_exp: -2.0,
            t50_rate_exp: -0.5,
            q_rex: 300e3,
            avrami_exp: 1.5,
            c_drx: 0.4,
            drx_grain_exp: 0.67,
            drx_strain_exp: -1.0,
            d_rx_min: 5.0,
            growth_exp: 7.0,
            k_growth: 8e22,
            q_growth: 400e3,
            growth_switch_rx: 0.95,
            d0_init: 70.0,
            r_gas: 8.314,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams {
    /// True axial strain of each stroke.
    pub stroke_strains: [f64; 3],
    /// Barreling coefficient of the strain distribution.
    pub barreling: f64,
}

impl Default for DeformationParams {
    fn default() -> Self {
        Self {
            stroke_strains: [0.3, 0.3, 0.4],
            barreling: 0.15,
        }
    }
}

impl DeformationParams {
    /// Nominal cumulative strain after `stroke` (1-based) strokes.
    pub fn cumulative_strain(&self, stroke: usize) -> f64 {
        self.stroke_strains[..stroke.min(3)].iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MaterialParams {
    pub thermal: ThermalParams,
    pub kinetics: KineticParams,
    pub deformation: DeformationParams,
}
