use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{MaterialParams, SimError};

/// Sampling and validity limits of a forging strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyLimits {
    pub oven: (f64, f64),
    pub transport: (f64, f64),
    pub wait: (f64, f64),
    pub upsetting: (f64, f64),
}

impl StrategyLimits {
    pub const TABLE: StrategyLimits = StrategyLimits {
        oven: (1100.0, 1300.0),
        transport: (0.0, 30.0),
        wait: (1.0, 60.0),
        upsetting: (0.05, 0.15),
    };
}

impl Default for StrategyLimits {
    fn default() -> Self {
        Self::TABLE
    }
}

/// One out-of-bounds strategy component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub component: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} outside [{}, {}]",
            self.component, self.value, self.lower, self.upper
        )
    }
}

/// Process plan: oven temperature, transport time, and per-stroke wait and
/// upsetting times. `wait[i]` follows stroke `i + 1`; the last wait precedes
/// the quench.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForgingStrategy {
    /// °C
    pub t_oven: f64,
    /// s
    pub t_transport: f64,
    /// s
    pub wait: [f64; 3],
    /// s
    pub upsetting: [f64; 3],
}

impl ForgingStrategy {
    /// Every component outside `limits`, in component order.
    pub fn violations(&self, limits: &StrategyLimits) -> Vec<BoundViolation> {
        let mut out = Vec::new();
        let mut check = |name: String, value: f64, (lo, hi): (f64, f64)| {
            if !(value >= lo && value <= hi) {
                out.push(BoundViolation {
                    component: name,
                    value,
                    lower: lo,
                    upper: hi,
                });
            }
        };
        check("t_oven".into(), self.t_oven, limits.oven);
        check("t_transport".into(), self.t_transport, limits.transport);
        for (i, &w) in self.wait.iter().enumerate() {
            check(format!("wait{}", i + 1), w, limits.wait);
        }
        for (i, &u) in self.upsetting.iter().enumerate() {
            check(format!("upsetting{}", i + 1), u, limits.upsetting);
        }
        out
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let v = self.violations(&StrategyLimits::TABLE);
        if v.is_empty() {
            Ok(())
        } else {
            Err(SimError::InvalidStrategy(v))
        }
    }

    /// The phase sequence this plan executes.
    pub fn phases(&self, params: &MaterialParams) -> Vec<PhaseEvent> {
        let mut phases = vec![PhaseEvent::new(PhaseKind::Transport, self.t_transport)];
        for k in 0..3 {
            phases.push(PhaseEvent::new(PhaseKind::Stroke(k + 1), self.upsetting[k]));
            phases.push(PhaseEvent::new(PhaseKind::Wait(k + 1), self.wait[k]));
        }
        phases.push(PhaseEvent::new(
            PhaseKind::Quench,
            params.thermal.quench_duration,
        ));
        phases
    }

    /// Maps eight numbers in `[0, 1]` affinely onto `limits`, in the order
    /// oven, transport, wait 1..3, upsetting 1..3.
    pub fn from_unit(u: &[f64; 8], limits: &StrategyLimits) -> Self {
        let lerp = |(lo, hi): (f64, f64), x: f64| lo + (hi - lo) * x;
        Self {
            t_oven: lerp(limits.oven, u[0]),
            t_transport: lerp(limits.transport, u[1]),
            wait: [
                lerp(limits.wait, u[2]),
                lerp(limits.wait, u[3]),
                lerp(limits.wait, u[4]),
            ],
            upsetting: [
                lerp(limits.upsetting, u[5]),
                lerp(limits.upsetting, u[6]),
                lerp(limits.upsetting, u[7]),
            ],
        }
    }

    /// Components as the 8-vector `(oven, transport, wait1, up1, wait2, up2, wait3, up3)`.
    pub fn to_controls(&self) -> [f64; 8] {
        [
            self.t_oven,
            self.t_transport,
            self.wait[0],
            self.upsetting[0],
            self.wait[1],
            self.upsetting[1],
            self.wait[2],
            self.upsetting[2],
        ]
    }

    pub fn from_controls(u: &[f64; 8]) -> Self {
        Self {
            t_oven: u[0],
            t_transport: u[1],
            wait: [u[2], u[4], u[6]],
            upsetting: [u[3], u[5], u[7]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseKind {
    Transport,
    /// 1-based stroke index.
    Stroke(usize),
    /// 1-based index of the stroke this wait follows.
    Wait(usize),
    Quench,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseEvent {
    pub kind: PhaseKind,
    /// s
    pub duration: f64,
}

impl PhaseEvent {
    pub fn new(kind: PhaseKind, duration: f64) -> Self {
        Self { kind, duration }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(SimError::InvalidDuration(self.duration));
        }
        match self.kind {
            PhaseKind::Stroke(i) | PhaseKind::Wait(i) if !(1..=3).contains(&i) => {
                Err(SimError::InvalidStroke(i))
            }
            _ => Ok(()),
        }
    }
}

/// Points of the phase sequence at which a snapshot is emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmitPoint {
    AfterTransport,
    AfterStroke(usize),
    AfterWait(usize),
    AfterQuench,
}

impl EmitPoint {
    pub fn matches(&self, kind: PhaseKind) -> bool {
        matches!(
            (self, kind),
            (EmitPoint::AfterTransport, PhaseKind::Transport)
                | (EmitPoint::AfterQuench, PhaseKind::Quench)
        ) || matches!((self, kind), (EmitPoint::AfterStroke(a), PhaseKind::Stroke(b)) if *a == b)
            || matches!((self, kind), (EmitPoint::AfterWait(a), PhaseKind::Wait(b)) if *a == b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSchedule {
    points: Vec<EmitPoint>,
}

impl SnapshotSchedule {
    pub const SNAPSHOTS_PER_RUN: usize = 8;

    /// One snapshot after every phase: transport, each stroke, each wait, quench.
    pub fn standard() -> Self {
        let mut points = vec![EmitPoint::AfterTransport];
        for k in 1..=3 {
            points.push(EmitPoint::AfterStroke(k));
            points.push(EmitPoint::AfterWait(k));
        }
        points.push(EmitPoint::AfterQuench);
        Self { points }
    }

    pub fn points(&self) -> &[EmitPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn emits_after(&self, kind: PhaseKind) -> bool {
        self.points.iter().any(|p| p.matches(kind))
    }
}

impl Default for SnapshotSchedule {
    fn default() -> Self {
        Self::standard()
    }
}
