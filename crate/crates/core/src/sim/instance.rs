use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::map::{NodeKind, TerminalMap};
use crate::error::{param, Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CraneKind {
    #[serde(rename = "QC")]
    Quay,
    #[serde(rename = "YC")]
    Yard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crane {
    pub id: usize,
    pub kind: CraneKind,
    pub node: usize,
    /// Uniform bounds of one handling operation, seconds.
    pub service_seconds: (f64, f64),
}

impl Crane {
    pub fn service_midpoint(&self) -> f64 {
        0.5 * (self.service_seconds.0 + self.service_seconds.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpType {
    Load = 0,
    Unload = 1,
}

/// Flow of a task: 0 = quay to yard, 1 = yard to quay, 2 = yard to gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DispatchType {
    QuayToYard = 0,
    YardToQuay = 1,
    YardToGate = 2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub id: usize,
    pub qc_id: usize,
    pub start_node: usize,
    pub end_node: usize,
    /// 1 for a twenty-foot box, 2 for a forty-foot box.
    pub teu: u8,
    pub op_type: OpType,
    pub dispatch_type: DispatchType,
    pub sequence_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruckStart {
    pub id: usize,
    pub node: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub loading_ratio: f64,
    pub trucks_per_qc: usize,
}

/// One terminal scenario. Task, crane and truck ids equal their positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub schema: u32,
    pub map: TerminalMap,
    pub cranes: Vec<Crane>,
    pub tasks: Vec<Task>,
    pub trucks: Vec<TruckStart>,
    pub seed: u64,
    pub meta: InstanceMeta,
}

impl Instance {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Instance(m));
        if self.schema != SCHEMA_VERSION {
            return bad(format!("unsupported schema {}", self.schema));
        }
        if self.tasks.is_empty() {
            return bad("instance has no tasks".into());
        }
        if self.trucks.is_empty() {
            return bad("instance has no trucks".into());
        }
        let n = self.map.len();
        let mut crane_at = vec![None; n];
        for (i, c) in self.cranes.iter().enumerate() {
            if c.id != i {
                return bad(format!("crane at position {i} has id {}", c.id));
            }
            if c.node >= n {
                return bad(format!("crane {i} sits on missing node {}", c.node));
            }
            if crane_at[c.node].replace(i).is_some() {
                return bad(format!("two cranes share node {}", c.node));
            }
            let (lo, hi) = c.service_seconds;
            if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
                return bad(format!("crane {i} has invalid service bounds ({lo}, {hi})"));
            }
        }
        let qcs = self.cranes.iter().filter(|c| c.kind == CraneKind::Quay).count();
        if self.trucks.len() != self.meta.trucks_per_qc * qcs {
            return bad(format!(
                "{} trucks but {} per QC over {qcs} QCs",
                self.trucks.len(),
                self.meta.trucks_per_qc
            ));
        }
        let mut used = Vec::new();
        for (i, t) in self.tasks.iter().enumerate() {
            if t.id != i {
                return bad(format!("task at position {i} has id {}", t.id));
            }
            match self.cranes.get(t.qc_id) {
                Some(c) if c.kind == CraneKind::Quay => {}
                _ => return bad(format!("task {i} references missing QC {}", t.qc_id)),
            }
            if t.start_node >= n || t.end_node >= n {
                return bad(format!("task {i} references a missing node"));
            }
            if t.start_node == t.end_node {
                return bad(format!("task {i} starts and ends at node {}", t.start_node));
            }
            if !(1..=2).contains(&t.teu) {
                return bad(format!("task {i} has teu {}", t.teu));
            }
            used.extend([t.start_node, t.end_node]);
        }
        for (i, t) in self.trucks.iter().enumerate() {
            if t.id != i || t.node >= n {
                return bad(format!("truck at position {i} is malformed"));
            }
            used.push(t.node);
        }
        used.sort_unstable();
        used.dedup();
        self.map.require_connected(&used)
    }

    pub fn total_teu(&self) -> u32 {
        self.tasks.iter().map(|t| t.teu as u32).sum()
    }

    /// Crane standing on each node, if any.
    pub fn crane_by_node(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.map.len()];
        for c in &self.cranes {
            out[c.node] = Some(c.id);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub num_qcs: usize,
    pub trucks_per_qc: usize,
    pub num_tasks: usize,
    pub loading_ratio: f64,
    pub yard_blocks: usize,
    pub gates: usize,
    pub service_seconds: (f64, f64),
    pub arc_seconds: (f64, f64),
    /// Probability that a task carries a forty-foot box.
    pub forty_foot_share: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            num_qcs: 3,
            trucks_per_qc: 5,
            num_tasks: 60,
            loading_ratio: 0.5,
            yard_blocks: 6,
            gates: 2,
            service_seconds: (60.0, 180.0),
            arc_seconds: (30.0, 120.0),
            forty_foot_share: 0.4,
        }
    }
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        if self.num_qcs < 1 {
            return Err(param("num_qcs", "must be at least 1"));
        }
        if !(1..=20).contains(&self.trucks_per_qc) {
            return Err(param("trucks_per_qc", format!("{} not in [1, 20]", self.trucks_per_qc)));
        }
        if self.num_tasks < 1 {
            return Err(param("num_tasks", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.loading_ratio) {
            return Err(param("loading_ratio", format!("{} not in [0, 1]", self.loading_ratio)));
        }
        if self.yard_blocks < 1 {
            return Err(param("yard_blocks", "must be at least 1"));
        }
        let (lo, hi) = self.service_seconds;
        if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
            return Err(param("service_seconds", format!("invalid bounds ({lo}, {hi})")));
        }
        let (lo, hi) = self.arc_seconds;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(param("arc_seconds", format!("invalid bounds ({lo}, {hi})")));
        }
        if !(0.0..=1.0).contains(&self.forty_foot_share) {
            return Err(param("forty_foot_share", "must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Number of load tasks the generator emits.
    pub fn load_task_count(&self) -> usize {
        (self.loading_ratio * self.num_tasks as f64).round() as usize
    }
}

/// Deterministic instance generator.
pub fn generate_instance(params: &GeneratorParams, seed: u64) -> Result<Instance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (alo, ahi) = params.arc_seconds;
    let map = TerminalMap::grid(&mut rng, params.num_qcs, params.yard_blocks, params.gates, alo, ahi)?;
    let berths = map.nodes_of(NodeKind::Berth);
    let yards = map.nodes_of(NodeKind::Yard);

    let mut cranes = Vec::with_capacity(berths.len() + yards.len());
    for (kind, nodes) in [(CraneKind::Quay, &berths), (CraneKind::Yard, &yards)] {
        for &node in nodes.iter() {
            cranes.push(Crane {
                id: cranes.len(),
                kind,
                node,
                service_seconds: params.service_seconds,
            });
        }
    }

    let mut is_load = vec![false; params.num_tasks];
    is_load[..params.load_task_count()].fill(true);
    is_load.shuffle(&mut rng);

    let tasks = (0..params.num_tasks)
        .map(|i| {
            let qc = i % params.num_qcs;
            let yard = yards[rng.random_range(0..yards.len())];
            let teu = if rng.random_bool(params.forty_foot_share) { 2 } else { 1 };
            let (start_node, end_node, op_type, dispatch_type) = if is_load[i] {
                (yard, berths[qc], OpType::Load, DispatchType::YardToQuay)
            } else {
                (berths[qc], yard, OpType::Unload, DispatchType::QuayToYard)
            };
            Task {
                id: i,
                qc_id: qc,
                start_node,
                end_node,
                teu,
                op_type,
                dispatch_type,
                sequence_index: i / params.num_qcs,
            }
        })
        .collect();

    let trucks = (0..params.num_qcs * params.trucks_per_qc)
        .map(|id| TruckStart {
            id,
            node: yards[rng.random_range(0..yards.len())],
        })
        .collect();

    let inst = Instance {
        schema: SCHEMA_VERSION,
        map,
        cranes,
        tasks,
        trucks,
        seed,
        meta: InstanceMeta {
            loading_ratio: params.loading_ratio,
            trucks_per_qc: params.trucks_per_qc,
        },
    };
    inst.validate()?;
    Ok(inst)
}
