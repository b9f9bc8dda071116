use forge_core::{Grid, State64};

use crate::kinetics::microstructure_step;
use crate::{
    apply_stroke, Boundary, ForgingStrategy, MaterialParams, NodeKinetics, PhaseEvent, PhaseKind,
    SimError, SnapshotSchedule, ThermalStencil,
};

/// Interval at which the microstructure is advanced during idle phases, s.
const KINETICS_INTERVAL: f64 = 0.05;
/// Fraction of the stability limit used as the working time step.
const CFL_SAFETY: f64 = 0.9;

/// Full oracle state: the exported fields plus per-node kinetic memory.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub fields: State64,
    pub nodes: Vec<NodeKinetics>,
    pub strokes_done: usize,
}

impl SimState {
    /// Billet on furnace exit: uniform at `t_oven`, undeformed, initial grain.
    pub fn new(grid: &Grid, t_oven: f64, params: &MaterialParams) -> Self {
        let d0 = params.kinetics.d0_init;
        Self {
            fields: State64::uniform(grid, t_oven, d0),
            nodes: vec![NodeKinetics::undeformed(d0); grid.node_count()],
            strokes_done: 0,
        }
    }

    /// Integrates conduction (and optionally the microstructure) over
    /// `duration` seconds under a fixed boundary condition.
    pub fn advance(
        &mut self,
        grid: &Grid,
        duration: f64,
        boundary: Boundary,
        params: &MaterialParams,
        evolve_microstructure: bool,
    ) {
        if duration <= 0.0 {
            return;
        }
        let stencil = ThermalStencil::new(grid, &self.fields.geometry, &params.thermal);
        // the field maximum cannot grow under pure conduction, so one limit holds
        let dt_max = CFL_SAFETY * stencil.stable_dt(self.fields.temperature.max(), boundary);
        let steps = (duration / dt_max).ceil().max(1.0) as usize;
        let dt = duration / steps as f64;
        let mut scratch = Vec::with_capacity(grid.node_count());
        let mut pending = 0.0;
        for _ in 0..steps {
            if evolve_microstructure {
                pending += dt;
                if pending >= KINETICS_INTERVAL {
                    microstructure_step(self, pending, params);
                    pending = 0.0;
                }
            }
            stencil.step(self.fields.temperature.as_mut_slice(), &mut scratch, dt, boundary);
        }
        if evolve_microstructure && pending > 0.0 {
            microstructure_step(self, pending, params);
        }
    }
}

/// Executes phases one at a time; the MPC drives the oracle through this.
#[derive(Debug, Clone)]
pub struct ProcessRunner {
    grid: Grid,
    params: MaterialParams,
    state: SimState,
}

impl ProcessRunner {
    pub fn new(grid: Grid, params: MaterialParams, t_oven: f64) -> Self {
        let state = SimState::new(&grid, t_oven, &params);
        Self {
            grid,
            params,
            state,
        }
    }

    pub fn run_phase(&mut self, phase: &PhaseEvent) -> Result<(), SimError> {
        phase.validate()?;
        let (g, p) = (&self.grid, &self.params);
        match phase.kind {
            PhaseKind::Transport => self.state.advance(g, phase.duration, Boundary::Air, p, true),
            PhaseKind::Stroke(k) => apply_stroke(g, &mut self.state, k, phase.duration, p)?,
            PhaseKind::Wait(_) => self.state.advance(g, phase.duration, Boundary::Air, p, true),
            PhaseKind::Quench => self.state.advance(g, phase.duration, Boundary::Quench, p, true),
        }
        Ok(())
    }

    pub fn snapshot(&self) -> State64 {
        self.state.fields.clone()
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
}

/// Runs the full phase sequence of `strategy` and returns the snapshots
/// emitted at the points of `schedule`, in process order.
pub fn run_process(
    grid: &Grid,
    strategy: &ForgingStrategy,
    params: &MaterialParams,
    schedule: &SnapshotSchedule,
) -> Result<Vec<State64>, SimError> {
    strategy.validate()?;
    let mut runner = ProcessRunner::new(*grid, *params, strategy.t_oven);
    let mut snapshots = Vec::with_capacity(schedule.len());
    for phase in strategy.phases(params) {
        runner.run_phase(&phase)?;
        if schedule.emits_after(phase.kind) {
            snapshots.push(runner.snapshot());
        }
    }
    Ok(snapshots)
}
