//! Discrete-event simulator of dynamic container terminal truck scheduling
//! and its instance generator.

mod engine;
mod features;
mod instance;
mod map;
mod reference;

pub use engine::{
    run_simulation, Assignment, CraneState, DecisionPoint, DispatchRule, NodeCounts, SimAudit,
    SimResult, SimState, Stop, StopKind, TruckState, TruckStatus,
};
pub use features::FeatureVector;
pub use instance::{
    generate_instance, Crane, CraneKind, DispatchType, GeneratorParams, Instance, InstanceMeta,
    OpType, Task, TruckStart, SCHEMA_VERSION,
};
pub use map::{Arc, NodeKind, TerminalMap};
pub use reference::ReferenceRule;
