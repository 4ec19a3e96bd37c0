use serde::{Deserialize, Serialize};

use crate::gp::Primitive;

/// Observable state of one (idle truck, candidate task) pair at a dispatch
/// point. Times are seconds, counts are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Travel time from the truck's node to the task's start node.
    pub tt: f64,
    /// Trucks currently bound to the task's quay crane.
    pub ctn: f64,
    /// 0 for load, 1 for unload.
    pub ot: f64,
    pub sntn: f64,
    pub entn: f64,
    pub snwtn: f64,
    pub enwtn: f64,
    pub dt: f64,
    /// Undispatched tasks left on the task's quay crane.
    pub rtn: f64,
    pub alt: f64,
    pub aut: f64,
}

impl FeatureVector {
    /// Value of a terminal. Function primitives have no value and yield 0.
    #[inline]
    pub fn value(&self, terminal: Primitive) -> f64 {
        match terminal {
            Primitive::TravelTime => self.tt,
            Primitive::CraneTrucks => self.ctn,
            Primitive::OperationType => self.ot,
            Primitive::StartNodeTrucks => self.sntn,
            Primitive::EndNodeTrucks => self.entn,
            Primitive::StartNodeWaiting => self.snwtn,
            Primitive::EndNodeWaiting => self.enwtn,
            Primitive::DispatchType => self.dt,
            Primitive::RemainingTasks => self.rtn,
            Primitive::AvgLoadTime => self.alt,
            Primitive::AvgUnloadTime => self.aut,
            _ => 0.0,
        }
    }
}
