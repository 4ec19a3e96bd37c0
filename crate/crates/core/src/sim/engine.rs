use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::features::FeatureVector;
use super::instance::{Instance, OpType};
use crate::error::{Error, Result};
use crate::gp::{Tree, NON_FINITE_SCORE};

/// Anything that scores a candidate task; the lowest score is dispatched.
pub trait DispatchRule {
    fn score(&self, f: &FeatureVector) -> f64;
}

impl DispatchRule for Tree {
    #[inline]
    fn score(&self, f: &FeatureVector) -> f64 {
        self.evaluate(f)
    }
}

impl<F: Fn(&FeatureVector) -> f64> DispatchRule for F {
    #[inline]
    fn score(&self, f: &FeatureVector) -> f64 {
        self(f)
    }
}

#[inline]
fn clamped<R: DispatchRule + ?Sized>(rule: &R, f: &FeatureVector) -> f64 {
    let s = rule.score(f);
    if s.is_finite() {
        s
    } else {
        NON_FINITE_SCORE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TruckStatus {
    Idle,
    Traveling,
    WaitingAtCrane,
    BeingServed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopKind {
    Pickup,
    Dropoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stop {
    pub node: usize,
    pub task: usize,
    pub kind: StopKind,
}

#[derive(Debug, Clone)]
pub struct TruckState {
    /// Node the truck is at, or the node it departed from while traveling.
    pub node: usize,
    /// Destination while traveling.
    pub dest: Option<usize>,
    pub status: TruckStatus,
    pub stops: VecDeque<Stop>,
    pub onboard_teu: u8,
    bound_qc: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct QueueEntry {
    truck: usize,
    stop: Stop,
}

#[derive(Debug, Clone)]
pub struct CraneState {
    queue: VecDeque<QueueEntry>,
    serving: Option<(QueueEntry, f64)>,
    rng: ChaCha8Rng,
    bounds: (f64, f64),
    load_ops: u32,
    load_seconds: f64,
    unload_ops: u32,
    unload_seconds: f64,
}

impl CraneState {
    /// Mean duration of completed load handlings, or the service midpoint
    /// before the first one.
    pub fn avg_load_time(&self) -> f64 {
        if self.load_ops == 0 {
            0.5 * (self.bounds.0 + self.bounds.1)
        } else {
            self.load_seconds / self.load_ops as f64
        }
    }

    pub fn avg_unload_time(&self) -> f64 {
        if self.unload_ops == 0 {
            0.5 * (self.bounds.0 + self.bounds.1)
        } else {
            self.unload_seconds / self.unload_ops as f64
        }
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }
}

/// One recorded dispatch decision: every candidate task with its features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionPoint {
    pub time: f64,
    pub truck: usize,
    pub task_ids: Vec<usize>,
    pub features: Vec<FeatureVector>,
    /// Position in `task_ids` of the dispatched task.
    pub chosen: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub time: f64,
    pub truck: usize,
    pub tasks: Vec<usize>,
}

/// Bookkeeping for conservation checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimAudit {
    pub assignments: Vec<Assignment>,
    /// Per crane: (task, stop kind) in queue arrival order.
    pub crane_arrivals: Vec<Vec<(usize, StopKind)>>,
    /// Per crane: (task, stop kind) in service order.
    pub crane_served: Vec<Vec<(usize, StopKind)>>,
    pub completion_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Throughput in TEU per hour.
    pub objective: f64,
    pub makespan_seconds: f64,
    pub completed_tasks: usize,
    pub total_teu: u32,
    pub trace: Option<Vec<DecisionPoint>>,
    pub audit: Option<SimAudit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Event {
    Arrive(usize),
    ServiceDone(usize),
}

#[derive(Debug, Clone, Copy)]
struct Scheduled {
    time: f64,
    seq: u64,
    event: Event,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    // reversed: BinaryHeap pops the earliest (time, seq)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Live simulator state.
pub struct SimState<'a> {
    inst: &'a Instance,
    pub now: f64,
    pub trucks: Vec<TruckState>,
    pub cranes: Vec<CraneState>,
    crane_at: Vec<Option<usize>>,
    /// Undispatched task ids, ascending.
    pool: Vec<usize>,
    qc_remaining: Vec<usize>,
    qc_bound: Vec<usize>,
    completed: usize,
    makespan: f64,
    events: BinaryHeap<Scheduled>,
    seq: u64,
    trace: Option<Vec<DecisionPoint>>,
    audit: Option<SimAudit>,
}

/// Per-node truck tallies used by the node-count features.
pub struct NodeCounts {
    /// Trucks at the node or traveling toward it.
    pub all: Vec<u32>,
    /// Trucks queued at the node's crane, not yet in service.
    pub waiting: Vec<u32>,
}

impl<'a> SimState<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let trucks = inst
            .trucks
            .iter()
            .map(|t| TruckState {
                node: t.node,
                dest: None,
                status: TruckStatus::Idle,
                stops: VecDeque::new(),
                onboard_teu: 0,
                bound_qc: None,
            })
            .collect();
        let cranes = inst
            .cranes
            .iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(inst.seed);
                rng.set_stream(c.id as u64 + 1);
                CraneState {
                    queue: VecDeque::new(),
                    serving: None,
                    rng,
                    bounds: c.service_seconds,
                    load_ops: 0,
                    load_seconds: 0.0,
                    unload_ops: 0,
                    unload_seconds: 0.0,
                }
            })
            .collect();
        let mut qc_remaining = vec![0; inst.cranes.len()];
        for t in &inst.tasks {
            qc_remaining[t.qc_id] += 1;
        }
        Self {
            inst,
            now: 0.0,
            trucks,
            cranes,
            crane_at: inst.crane_by_node(),
            pool: (0..inst.tasks.len()).collect(),
            qc_remaining,
            qc_bound: vec![0; inst.cranes.len()],
            completed: 0,
            makespan: 0.0,
            events: BinaryHeap::new(),
            seq: 0,
            trace: None,
            audit: None,
        }
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    /// Undispatched task ids in ascending order.
    pub fn pool(&self) -> &[usize] {
        &self.pool
    }

    pub fn remaining_tasks(&self, qc: usize) -> usize {
        self.qc_remaining[qc]
    }

    pub fn bound_trucks(&self, qc: usize) -> usize {
        self.qc_bound[qc]
    }

    pub fn node_counts(&self) -> NodeCounts {
        let n = self.inst.map.len();
        let mut all = vec![0; n];
        let mut waiting = vec![0; n];
        for t in &self.trucks {
            match (t.status, t.dest) {
                (TruckStatus::Traveling, Some(d)) => all[d] += 1,
                (TruckStatus::WaitingAtCrane, _) => {
                    all[t.node] += 1;
                    waiting[t.node] += 1;
                }
                _ => all[t.node] += 1,
            }
        }
        NodeCounts { all, waiting }
    }

    pub fn compute_features(&self, truck: usize, task: usize) -> FeatureVector {
        self.features_with(&self.node_counts(), truck, task)
    }

    pub fn features_with(&self, counts: &NodeCounts, truck: usize, task: usize) -> FeatureVector {
        let t = &self.inst.tasks[task];
        let qc = &self.cranes[t.qc_id];
        FeatureVector {
            tt: self.inst.map.travel(self.trucks[truck].node, t.start_node),
            ctn: self.qc_bound[t.qc_id] as f64,
            ot: t.op_type as u8 as f64,
            sntn: counts.all[t.start_node] as f64,
            entn: counts.all[t.end_node] as f64,
            snwtn: counts.waiting[t.start_node] as f64,
            enwtn: counts.waiting[t.end_node] as f64,
            dt: t.dispatch_type as u8 as f64,
            rtn: self.qc_remaining[t.qc_id] as f64,
            alt: qc.avg_load_time(),
            aut: qc.avg_unload_time(),
        }
    }

    fn schedule(&mut self, time: f64, event: Event) {
        self.seq += 1;
        self.events.push(Scheduled {
            time,
            seq: self.seq,
            event,
        });
    }

    fn dispatch<R: DispatchRule + ?Sized>(&mut self, truck: usize, rule: &R) {
        if self.pool.is_empty() {
            return;
        }
        let counts = self.node_counts();
        let features: Vec<FeatureVector> = self
            .pool
            .iter()
            .map(|&task| self.features_with(&counts, truck, task))
            .collect();
        let scores: Vec<f64> = features.iter().map(|f| clamped(rule, f)).collect();
        let best = argmin(&scores, |_| true).expect("non-empty pool");
        let first = self.pool[best];

        let mut chosen = vec![first];
        let tasks = &self.inst.tasks;
        if tasks[first].teu == 1 {
            let a = &tasks[first];
            let merge = argmin(&scores, |k| {
                let b = &tasks[self.pool[k]];
                k != best
                    && b.teu == 1
                    && b.qc_id == a.qc_id
                    && (b.start_node == a.start_node || b.end_node == a.end_node)
            });
            if let Some(k) = merge {
                chosen.push(self.pool[k]);
            }
        }

        if let Some(trace) = self.trace.as_mut() {
            trace.push(DecisionPoint {
                time: self.now,
                truck,
                task_ids: self.pool.clone(),
                features,
                chosen: best,
            });
        }
        if let Some(audit) = self.audit.as_mut() {
            audit.assignments.push(Assignment {
                time: self.now,
                truck,
                tasks: chosen.clone(),
            });
        }

        self.pool.retain(|t| !chosen.contains(t));
        let qc = tasks[first].qc_id;
        self.qc_remaining[qc] -= chosen.len();
        self.qc_bound[qc] += 1;

        let t = &mut self.trucks[truck];
        t.bound_qc = Some(qc);
        for &id in &chosen {
            t.stops.push_back(Stop {
                node: tasks[id].start_node,
                task: id,
                kind: StopKind::Pickup,
            });
        }
        for &id in &chosen {
            t.stops.push_back(Stop {
                node: tasks[id].end_node,
                task: id,
                kind: StopKind::Dropoff,
            });
        }
        self.depart(truck);
    }

    fn depart(&mut self, truck: usize) {
        let t = &mut self.trucks[truck];
        let next = t.stops.front().expect("departing truck has a stop").node;
        let travel = self.inst.map.travel(t.node, next);
        t.status = TruckStatus::Traveling;
        t.dest = Some(next);
        self.schedule(self.now + travel, Event::Arrive(truck));
    }

    fn on_arrive<R: DispatchRule + ?Sized>(&mut self, truck: usize, rule: &R) {
        let t = &mut self.trucks[truck];
        let node = t.dest.take().expect("arriving truck has a destination");
        t.node = node;
        let here: Vec<Stop> = t.stops.iter().take_while(|s| s.node == node).copied().collect();
        match self.crane_at[node] {
            Some(c) => {
                t.status = TruckStatus::WaitingAtCrane;
                for stop in here {
                    self.cranes[c].queue.push_back(QueueEntry { truck, stop });
                    if let Some(a) = self.audit.as_mut() {
                        a.crane_arrivals[c].push((stop.task, stop.kind));
                    }
                }
                self.try_start(c);
            }
            None => {
                for stop in here {
                    self.finish_stop(truck, stop);
                }
                self.after_stop(truck, rule);
            }
        }
    }

    fn try_start(&mut self, crane: usize) {
        let c = &mut self.cranes[crane];
        if c.serving.is_some() {
            return;
        }
        let Some(entry) = c.queue.pop_front() else {
            return;
        };
        let (lo, hi) = c.bounds;
        let duration = if hi > lo { c.rng.random_range(lo..hi) } else { lo };
        c.serving = Some((entry, duration));
        self.trucks[entry.truck].status = TruckStatus::BeingServed;
        self.schedule(self.now + duration, Event::ServiceDone(crane));
    }

    fn on_service_done<R: DispatchRule + ?Sized>(&mut self, crane: usize, rule: &R) {
        let (entry, duration) = self.cranes[crane].serving.take().expect("crane was serving");
        let c = &mut self.cranes[crane];
        match self.inst.tasks[entry.stop.task].op_type {
            OpType::Load => {
                c.load_ops += 1;
                c.load_seconds += duration;
            }
            OpType::Unload => {
                c.unload_ops += 1;
                c.unload_seconds += duration;
            }
        }
        if let Some(a) = self.audit.as_mut() {
            a.crane_served[crane].push((entry.stop.task, entry.stop.kind));
        }
        self.finish_stop(entry.truck, entry.stop);
        let t = &mut self.trucks[entry.truck];
        if t.stops.front().is_some_and(|s| s.node == t.node) {
            // its next handling is already queued here
            t.status = TruckStatus::WaitingAtCrane;
        } else {
            self.after_stop(entry.truck, rule);
        }
        self.try_start(crane);
    }

    fn finish_stop(&mut self, truck: usize, stop: Stop) {
        let t = &mut self.trucks[truck];
        let front = t.stops.pop_front();
        debug_assert_eq!(front, Some(stop));
        let teu = self.inst.tasks[stop.task].teu;
        match stop.kind {
            StopKind::Pickup => {
                t.onboard_teu += teu;
                debug_assert!(t.onboard_teu <= 2);
            }
            StopKind::Dropoff => {
                t.onboard_teu -= teu;
                self.completed += 1;
                self.makespan = self.now;
                if let Some(a) = self.audit.as_mut() {
                    a.completion_times[stop.task] = self.now;
                }
            }
        }
    }

    fn after_stop<R: DispatchRule + ?Sized>(&mut self, truck: usize, rule: &R) {
        if !self.trucks[truck].stops.is_empty() {
            self.depart(truck);
            return;
        }
        let t = &mut self.trucks[truck];
        t.status = TruckStatus::Idle;
        if let Some(qc) = t.bound_qc.take() {
            self.qc_bound[qc] -= 1;
        }
        self.dispatch(truck, rule);
    }

    fn run<R: DispatchRule + ?Sized>(mut self, rule: &R) -> Result<SimResult> {
        for truck in 0..self.trucks.len() {
            self.dispatch(truck, rule);
        }
        while let Some(Scheduled { time, event, .. }) = self.events.pop() {
            self.now = time;
            match event {
                Event::Arrive(truck) => self.on_arrive(truck, rule),
                Event::ServiceDone(crane) => self.on_service_done(crane, rule),
            }
        }
        let total = self.inst.tasks.len();
        if self.completed < total {
            let idle = self.trucks.iter().filter(|t| t.status == TruckStatus::Idle).count();
            return Err(Error::Deadlock {
                time: self.now,
                detail: format!(
                    "{} of {total} tasks completed, {} undispatched, {idle} idle trucks",
                    self.completed,
                    self.pool.len()
                ),
            });
        }
        let total_teu = self.inst.total_teu();
        Ok(SimResult {
            objective: total_teu as f64 / (self.makespan / 3600.0),
            makespan_seconds: self.makespan,
            completed_tasks: self.completed,
            total_teu,
            trace: self.trace,
            audit: self.audit,
        })
    }
}

/// Index of the minimal score among positions accepted by `keep`; ties go to
/// the lowest position.
fn argmin(scores: &[f64], keep: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, &s) in scores.iter().enumerate() {
        if keep(k) && best.is_none_or(|b| s < scores[b]) {
            best = Some(k);
        }
    }
    best
}

/// Runs one instance to completion under `rule`. With `record_trace` the
/// result carries every decision point and an audit log.
pub fn run_simulation<R: DispatchRule + ?Sized>(
    inst: &Instance,
    rule: &R,
    record_trace: bool,
) -> Result<SimResult> {
    if inst.tasks.is_empty() {
        return Err(Error::Instance("instance has no tasks".into()));
    }
    let mut state = SimState::new(inst);
    if record_trace {
        state.trace = Some(Vec::new());
        state.audit = Some(SimAudit {
            assignments: Vec::new(),
            crane_arrivals: vec![Vec::new(); inst.cranes.len()],
            crane_served: vec![Vec::new(); inst.cranes.len()],
            completion_times: vec![f64::NAN; inst.tasks.len()],
        });
    }
    state.run(rule)
}
