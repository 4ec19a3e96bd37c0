use petgraph::algo::floyd_warshall;
use petgraph::graph::{DiGraph, NodeIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Berth,
    Yard,
    Gate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    /// Travel time in seconds.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct MapDoc {
    nodes: Vec<NodeKind>,
    arcs: Vec<Arc>,
}

/// Road network of a terminal. Node ids are indices into `nodes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapDoc", into = "MapDoc")]
pub struct TerminalMap {
    nodes: Vec<NodeKind>,
    arcs: Vec<Arc>,
    /// Shortest-path travel seconds, row-major `n * n`.
    travel: Vec<f64>,
}

impl TryFrom<MapDoc> for TerminalMap {
    type Error = Error;

    fn try_from(doc: MapDoc) -> Result<Self> {
        TerminalMap::new(doc.nodes, doc.arcs)
    }
}

impl From<TerminalMap> for MapDoc {
    fn from(m: TerminalMap) -> Self {
        MapDoc {
            nodes: m.nodes,
            arcs: m.arcs,
        }
    }
}

impl TerminalMap {
    /// Builds the map and its all-pairs shortest travel times. Unreachable
    /// pairs are stored as infinity; [`TerminalMap::require_connected`]
    /// checks the nodes that matter.
    pub fn new(nodes: Vec<NodeKind>, arcs: Vec<Arc>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::Instance("map has no nodes".into()));
        }
        let mut graph: DiGraph<(), f64> = DiGraph::with_capacity(n, arcs.len());
        for _ in 0..n {
            graph.add_node(());
        }
        for a in &arcs {
            if a.from >= n || a.to >= n {
                return Err(Error::Instance(format!("arc {}->{} references a missing node", a.from, a.to)));
            }
            if !(a.seconds > 0.0 && a.seconds.is_finite()) {
                return Err(Error::Instance(format!(
                    "arc {}->{} has non-positive travel time {}",
                    a.from, a.to, a.seconds
                )));
            }
            graph.add_edge(NodeIndex::new(a.from), NodeIndex::new(a.to), a.seconds);
        }
        let dist = floyd_warshall(&graph, |e| *e.weight())
            .map_err(|_| Error::Instance("negative cycle in road network".into()))?;
        let mut travel = vec![f64::INFINITY; n * n];
        for ((i, j), d) in dist {
            // petgraph reports unreachable pairs as f64::MAX
            if d < f64::MAX {
                travel[i.index() * n + j.index()] = d;
            }
        }
        for i in 0..n {
            travel[i * n + i] = 0.0;
        }
        Ok(Self { nodes, arcs, travel })
    }

    /// Three-row grid: berth row on top, yard row, gate row. Neighbours in a
    /// row are linked, and every node links to the proportionally aligned node
    /// of the next row. Arc times are symmetric and uniform on `[lo, hi]`.
    pub fn grid<R: Rng + ?Sized>(
        rng: &mut R,
        berths: usize,
        yards: usize,
        gates: usize,
        lo: f64,
        hi: f64,
    ) -> Result<Self> {
        let rows = [(NodeKind::Berth, berths), (NodeKind::Yard, yards), (NodeKind::Gate, gates)];
        let mut nodes = Vec::new();
        let mut starts = Vec::new();
        for (kind, count) in rows {
            starts.push(nodes.len());
            nodes.extend(std::iter::repeat_n(kind, count));
        }
        let mut arcs = Vec::new();
        let mut link = |rng: &mut R, a: usize, b: usize| {
            let seconds = if hi > lo { rng.random_range(lo..=hi) } else { lo };
            arcs.push(Arc { from: a, to: b, seconds });
            arcs.push(Arc { from: b, to: a, seconds });
        };
        for (r, &(_, count)) in rows.iter().enumerate() {
            for j in 1..count {
                link(rng, starts[r] + j - 1, starts[r] + j);
            }
        }
        for r in 0..2 {
            let (n, m) = (rows[r].1, rows[r + 1].1);
            if n == 0 || m == 0 {
                continue;
            }
            let mut seen = std::collections::BTreeSet::new();
            for j in 0..n.max(m) {
                // align the longer row onto the shorter one
                let (a, b) = if n >= m {
                    (j, aligned(j, n, m))
                } else {
                    (aligned(j, m, n), j)
                };
                if seen.insert((a, b)) {
                    link(rng, starts[r] + a, starts[r + 1] + b);
                }
            }
        }
        Self::new(nodes, arcs)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.nodes[node]
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn nodes_of(&self, kind: NodeKind) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i] == kind).collect()
    }

    /// Shortest travel time from `a` to `b` in seconds.
    #[inline]
    pub fn travel(&self, a: usize, b: usize) -> f64 {
        self.travel[a * self.nodes.len() + b]
    }

    /// Errors unless every pair drawn from `nodes` is mutually reachable.
    pub fn require_connected(&self, nodes: &[usize]) -> Result<()> {
        for &a in nodes {
            for &b in nodes {
                if !self.travel(a, b).is_finite() {
                    return Err(Error::Instance(format!("node {b} unreachable from node {a}")));
                }
            }
        }
        Ok(())
    }
}

fn aligned(j: usize, from: usize, to: usize) -> usize {
    if from <= 1 {
        0
    } else {
        ((j * (to - 1)) as f64 / (from - 1) as f64).round() as usize
    }
}
