//! `EJ_α` and its `n`-fold cross product `EJ_α^(n)`.
//!
//! Nodes are `n`-tuples of residues, written highest dimension first. Each
//! node also has a dense index: the tuple read as a mixed-radix number over
//! the ordered residue list, so dimension `d` contributes
//! `digit_d · N(α)^(d-1)`. Two nodes are adjacent iff they differ in one
//! coordinate and the two residues differ by a unit.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ej::{EjInt, Unit};
use crate::error::{Error, Result};
use crate::residue::{Modulus, Residue};

/// Node budget above which a network is only available through coordinate
/// arithmetic; BFS and simulations refuse to run on it.
pub const DEFAULT_EXPLICIT_BUDGET: u64 = 4_000_000;

pub const DEFAULT_MAX_DIMS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_dims: u32,
    pub explicit_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dims: DEFAULT_MAX_DIMS,
            explicit_budget: DEFAULT_EXPLICIT_BUDGET,
        }
    }
}

/// A directed link: which dimension (1-based) and which unit step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinkLabel {
    pub dim: u8,
    pub unit: Unit,
}

impl LinkLabel {
    pub fn new(dim: u8, unit: Unit) -> Self {
        LinkLabel { dim, unit }
    }

    pub fn negate(self) -> Self {
        LinkLabel {
            dim: self.dim,
            unit: self.unit.negate(),
        }
    }
}

impl fmt::Display for LinkLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}:{}", self.dim, self.unit)
    }
}

/// One of the six wedges around a node. Sector `j` is spanned by
/// `major = ρ^j` and `minor = ρ^(j-1)`: it holds every `k·major + i·minor`
/// with `k >= 1`, `i >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sector(u8);

impl Sector {
    pub const ALL: [Sector; 6] = [
        Sector(1),
        Sector(2),
        Sector(3),
        Sector(4),
        Sector(5),
        Sector(6),
    ];

    /// `j` in `1..=6`.
    pub fn new(j: u8) -> Option<Sector> {
        (1..=6).contains(&j).then_some(Sector(j))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn major(self) -> Unit {
        Unit::pow(i64::from(self.0))
    }

    pub fn minor(self) -> Unit {
        Unit::pow(i64::from(self.0) - 1)
    }

    /// Sector containing the (non-zero) EJ integer `z`, by the wedge formula.
    pub fn containing(z: EjInt) -> Option<Sector> {
        if z.is_zero() {
            return None;
        }
        Sector::ALL.into_iter().find(|s| {
            // rotate so that minor -> 1 and major -> ρ
            let r = z * Unit::pow(7 - i64::from(s.0)).value();
            r.x >= 0 && r.y >= 1
        })
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sector of a canonical residue; `None` for the centre node 0.
pub fn sector_of(r: Residue) -> Option<Sector> {
    Sector::containing(r.value())
}

/// A node of the spanning tree of one sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub residue: Residue,
    pub depth: u32,
    /// Index of the parent in [`SectorTree::nodes`]; `None` for the root,
    /// whose parent is the centre.
    pub parent: Option<usize>,
    /// The unit the parent sent along to reach this node.
    pub via: Unit,
}

/// Depth-`diameter` spanning tree of one sector, rooted at the unit `major`.
/// Axis nodes forward along both `major` and `minor`; other nodes only along
/// `minor`.
#[derive(Debug, Clone)]
pub struct SectorTree {
    pub sector: Sector,
    pub nodes: Vec<TreeNode>,
}

impl SectorTree {
    pub fn contains(&self, r: Residue) -> bool {
        self.nodes.iter().any(|n| n.residue == r)
    }

    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }
}

/// Builds the sector tree by replaying the sector relay rule from the root.
pub fn sector_tree(m: &Modulus, sector: Sector) -> Result<SectorTree> {
    m.require_broadcast_shape()?;
    let d = m.diameter();
    let mut nodes = vec![TreeNode {
        residue: m.reduce(sector.major().value()),
        depth: 1,
        parent: None,
        via: sector.major(),
    }];
    // (node index, x, y)
    let mut frontier = vec![(0usize, d - 1, d - 1)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (i, x, y) in frontier {
            let here = nodes[i];
            let mut push = |unit: Unit, nx: u32, ny: u32| {
                nodes.push(TreeNode {
                    residue: m.reduce(here.residue.value() + unit.value()),
                    depth: here.depth + 1,
                    parent: Some(i),
                    via: unit,
                });
                next.push((nodes.len() - 1, nx, ny));
            };
            if x > 0 {
                push(sector.minor(), x - 1, 0);
            }
            if y > 0 {
                push(sector.major(), x - 1, y - 1);
            }
        }
        frontier = next;
    }
    Ok(SectorTree { sector, nodes })
}

/// A node as an `n`-tuple of residues, highest dimension first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NodeCoord(Vec<Residue>);

impl NodeCoord {
    pub fn coords(&self) -> &[Residue] {
        &self.0
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    /// Coordinate in dimension `dim` (1-based, 1 = lowest).
    pub fn get(&self, dim: u8) -> Option<Residue> {
        let n = self.0.len();
        let d = usize::from(dim);
        (1..=n).contains(&d).then(|| self.0[n - d])
    }

    fn set(&mut self, dim: u8, r: Residue) {
        let n = self.0.len();
        self.0[n - usize::from(dim)] = r;
    }
}

impl fmt::Display for NodeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

/// `EJ_α^(n)`. Per-dimension tables are always materialised; whole-network
/// operations (BFS, simulation) additionally require the node count to fit
/// the explicit budget.
#[derive(Debug, Clone)]
pub struct Network {
    modulus: Modulus,
    dims: u32,
    node_count: u64,
    residues: Vec<Residue>,
    index: HashMap<Residue, u32>,
    neighbors: Vec<[u32; 6]>,
    wraps: Vec<[bool; 6]>,
    strides: Vec<u64>,
    explicit_budget: u64,
}

impl Network {
    pub fn new(modulus: Modulus, dims: u32) -> Result<Self> {
        Network::with_limits(modulus, dims, Limits::default())
    }

    pub fn with_limits(modulus: Modulus, dims: u32, limits: Limits) -> Result<Self> {
        if dims == 0 || dims > limits.max_dims {
            return Err(Error::DimsOutOfRange {
                dims,
                max: limits.max_dims,
            });
        }
        let n = modulus.norm();
        if n > limits.explicit_budget {
            return Err(Error::BudgetExceeded {
                what: "residue table",
                required: u128::from(n),
                budget: u128::from(limits.explicit_budget),
            });
        }
        let node_count = n.checked_pow(dims).ok_or(Error::BudgetExceeded {
            what: "node indexing",
            required: u128::from(n).saturating_pow(dims),
            budget: u128::from(u64::MAX),
        })?;

        let residues = modulus.residues();
        let index: HashMap<Residue, u32> = residues
            .iter()
            .enumerate()
            .map(|(i, r)| (*r, i as u32))
            .collect();
        let mut neighbors = Vec::with_capacity(residues.len());
        let mut wraps = Vec::with_capacity(residues.len());
        for r in &residues {
            let mut nb = [0u32; 6];
            let mut wr = [false; 6];
            for u in Unit::ALL {
                let raw = r.value() + u.value();
                let c = modulus.reduce(raw);
                nb[u.index()] = index[&c];
                wr[u.index()] = c.value() != raw;
            }
            neighbors.push(nb);
            wraps.push(wr);
        }
        let strides = (0..dims).map(|d| n.pow(d)).collect();
        Ok(Network {
            modulus,
            dims,
            node_count,
            residues,
            index,
            neighbors,
            wraps,
            strides,
            explicit_budget: limits.explicit_budget,
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn dims(&self) -> u32 {
        self.dims
    }

    pub fn node_count(&self) -> u64 {
        self.node_count
    }

    pub fn degree(&self) -> u32 {
        6 * self.dims
    }

    /// Diameter of one `EJ_α` layer.
    pub fn layer_diameter(&self) -> u32 {
        self.modulus.diameter()
    }

    /// Diameter of the whole cross product, `n` times the layer diameter.
    pub fn diameter(&self) -> u32 {
        self.dims * self.modulus.diameter()
    }

    pub fn is_explicit(&self) -> bool {
        self.node_count <= self.explicit_budget
    }

    pub fn explicit_budget(&self) -> u64 {
        self.explicit_budget
    }

    pub fn require_explicit(&self, what: &'static str) -> Result<()> {
        if self.is_explicit() {
            Ok(())
        } else {
            Err(Error::BudgetExceeded {
                what,
                required: u128::from(self.node_count),
                budget: u128::from(self.explicit_budget),
            })
        }
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    pub fn residue_index(&self, r: Residue) -> u32 {
        self.index[&r]
    }

    /// All `6n` link labels, dimension-major.
    pub fn labels(&self) -> impl Iterator<Item = LinkLabel> {
        (1..=self.dims as u8).flat_map(|d| Unit::ALL.into_iter().map(move |u| LinkLabel::new(d, u)))
    }

    pub fn coord_of(&self, values: &[EjInt]) -> Result<NodeCoord> {
        if values.len() != self.dims as usize {
            return Err(Error::DimensionMismatch {
                expected: self.dims as usize,
                got: values.len(),
            });
        }
        Ok(NodeCoord(
            values.iter().map(|v| self.modulus.reduce(*v)).collect(),
        ))
    }

    pub fn origin(&self) -> NodeCoord {
        NodeCoord(vec![self.residues[0]; self.dims as usize])
    }

    pub fn coord(&self, index: u64) -> Result<NodeCoord> {
        self.check_index(index)?;
        let n = self.modulus.norm();
        let mut digits = Vec::with_capacity(self.dims as usize);
        let mut rest = index;
        for _ in 0..self.dims {
            digits.push(self.residues[(rest % n) as usize]);
            rest /= n;
        }
        digits.reverse();
        Ok(NodeCoord(digits))
    }

    pub fn index(&self, v: &NodeCoord) -> Result<u64> {
        if v.dims() != self.dims as usize {
            return Err(Error::DimensionMismatch {
                expected: self.dims as usize,
                got: v.dims(),
            });
        }
        let n = self.modulus.norm();
        Ok(v.coords()
            .iter()
            .fold(0u64, |acc, r| acc * n + u64::from(self.index[r])))
    }

    pub fn check_index(&self, index: u64) -> Result<()> {
        if index < self.node_count {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index,
                node_count: self.node_count,
            })
        }
    }

    fn check_label(&self, l: LinkLabel) -> Result<()> {
        if l.dim >= 1 && u32::from(l.dim) <= self.dims {
            Ok(())
        } else {
            Err(Error::LinkOutOfRange {
                dim: l.dim,
                dims: self.dims,
            })
        }
    }

    /// Residue index of `index` in dimension `dim`.
    #[inline]
    pub fn digit(&self, index: u64, dim: u8) -> u32 {
        ((index / self.strides[usize::from(dim) - 1]) % self.modulus.norm()) as u32
    }

    pub fn neighbor(&self, v: &NodeCoord, l: LinkLabel) -> Result<NodeCoord> {
        self.check_label(l)?;
        let r = v.get(l.dim).ok_or(Error::DimensionMismatch {
            expected: self.dims as usize,
            got: v.dims(),
        })?;
        let mut out = v.clone();
        out.set(l.dim, self.modulus.reduce(r.value() + l.unit.value()));
        Ok(out)
    }

    /// Index form of [`Network::neighbor`]. `index` and `l` must be in range.
    #[inline]
    pub fn neighbor_index(&self, index: u64, l: LinkLabel) -> u64 {
        let stride = self.strides[usize::from(l.dim) - 1];
        let digit = (index / stride) % self.modulus.norm();
        let next = u64::from(self.neighbors[digit as usize][l.unit.index()]);
        index - digit * stride + next * stride
    }

    /// True iff following `l` from `v` leaves the basic grid and has to be
    /// folded back by reduction modulo `α`.
    pub fn is_wraparound(&self, v: &NodeCoord, l: LinkLabel) -> Result<bool> {
        self.check_label(l)?;
        let r = v.get(l.dim).ok_or(Error::DimensionMismatch {
            expected: self.dims as usize,
            got: v.dims(),
        })?;
        Ok(self.wraps[self.index[&r] as usize][l.unit.index()])
    }

    pub fn neighbors_of(&self, index: u64) -> impl Iterator<Item = (LinkLabel, u64)> + '_ {
        self.labels()
            .map(move |l| (l, self.neighbor_index(index, l)))
    }

    /// Hop distances from `source` to every node, by breadth-first search.
    pub fn bfs_from(&self, source: u64) -> Result<Vec<u32>> {
        self.require_explicit("breadth-first search")?;
        self.check_index(source)?;
        let mut dist = vec![u32::MAX; self.node_count as usize];
        dist[source as usize] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for (_, v) in self.neighbors_of(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// Number of nodes at each hop distance from `source`.
    pub fn distance_histogram(&self, source: u64) -> Result<Vec<u64>> {
        let dist = self.bfs_from(source)?;
        let max = dist.iter().copied().max().unwrap_or(0) as usize;
        let mut hist = vec![0u64; max + 1];
        for d in dist {
            hist[d as usize] += 1;
        }
        Ok(hist)
    }

    /// Closed-form distance histogram: the `n`-fold convolution of the
    /// per-layer weight distribution.
    pub fn closed_form_histogram(&self) -> Vec<u64> {
        let layer = self.modulus.weight_distribution();
        let mut hist = vec![1u64];
        for _ in 0..self.dims {
            let mut next = vec![0u64; hist.len() + layer.last().map_or(0, |p| p.0 as usize)];
            for (i, &h) in hist.iter().enumerate() {
                for &(s, c) in &layer {
                    next[i + s as usize] += h * c;
                }
            }
            hist = next;
        }
        hist
    }
}
