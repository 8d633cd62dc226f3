//! Agent roster and static interaction graph.
//!
//! Agents are numbered Blue headquarters, Red headquarters, Blue swarm, Red
//! swarm, in that order. Headquarters agents form the non-spatial set and
//! swarm agents the spatial set; swarm agents additionally get a contiguous
//! spatial slot used to index position arrays.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::ops::{Index, IndexMut};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::{stream_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Population {
    Blue,
    Red,
}

impl Population {
    pub const BOTH: [Population; 2] = [Population::Blue, Population::Red];

    pub fn index(self) -> usize {
        match self {
            Population::Blue => 0,
            Population::Red => 1,
        }
    }

    pub fn opponent(self) -> Population {
        match self {
            Population::Blue => Population::Red,
            Population::Red => Population::Blue,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Population::Blue => "blue",
            Population::Red => "red",
        }
    }
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value held once per population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sides<T> {
    pub blue: T,
    pub red: T,
}

impl<T> Sides<T> {
    pub fn new(blue: T, red: T) -> Self {
        Sides { blue, red }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Sides<U> {
        Sides {
            blue: f(&self.blue),
            red: f(&self.red),
        }
    }
}

impl<T> Index<Population> for Sides<T> {
    type Output = T;
    fn index(&self, p: Population) -> &T {
        match p {
            Population::Blue => &self.blue,
            Population::Red => &self.red,
        }
    }
}

impl<T> IndexMut<Population> for Sides<T> {
    fn index_mut(&mut self, p: Population) -> &mut T {
        match p {
            Population::Blue => &mut self.blue,
            Population::Red => &mut self.red,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Echelon {
    Headquarters,
    Swarm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Commander,
    Staff,
    Controller,
    SwarmAgent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub id: usize,
    pub population: Population,
    pub echelon: Echelon,
    pub role: Role,
    /// Depth in the headquarters tree (0 = commander); `None` for swarm agents.
    pub hq_level: Option<usize>,
    /// Natural frequency in radians per unit time.
    pub omega: f64,
}

impl AgentSpec {
    pub fn is_swarm(&self) -> bool {
        self.echelon == Echelon::Swarm
    }

    pub fn is_commander(&self) -> bool {
        self.hq_level == Some(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkClass {
    IntraHqBlue,
    IntraHqRed,
    IntraSwarmBlue,
    IntraSwarmRed,
    HqAdversarial,
    SwarmAdversarial,
    ControllerToSwarmBlue,
    ControllerToSwarmRed,
}

impl LinkClass {
    pub const ALL: [LinkClass; 8] = [
        LinkClass::IntraHqBlue,
        LinkClass::IntraHqRed,
        LinkClass::IntraSwarmBlue,
        LinkClass::IntraSwarmRed,
        LinkClass::HqAdversarial,
        LinkClass::SwarmAdversarial,
        LinkClass::ControllerToSwarmBlue,
        LinkClass::ControllerToSwarmRed,
    ];

    /// Class of a link between two agents, determined by their populations and
    /// echelons. `None` for a headquarters agent linked to the opposing swarm,
    /// which the model does not allow.
    pub fn classify(a: &AgentSpec, b: &AgentSpec) -> Option<LinkClass> {
        use Echelon::*;
        let same = a.population == b.population;
        let class = match (a.echelon, b.echelon, same) {
            (Headquarters, Headquarters, true) => match a.population {
                Population::Blue => LinkClass::IntraHqBlue,
                Population::Red => LinkClass::IntraHqRed,
            },
            (Headquarters, Headquarters, false) => LinkClass::HqAdversarial,
            (Swarm, Swarm, true) => match a.population {
                Population::Blue => LinkClass::IntraSwarmBlue,
                Population::Red => LinkClass::IntraSwarmRed,
            },
            (Swarm, Swarm, false) => LinkClass::SwarmAdversarial,
            (_, _, true) => match a.population {
                Population::Blue => LinkClass::ControllerToSwarmBlue,
                Population::Red => LinkClass::ControllerToSwarmRed,
            },
            (_, _, false) => return None,
        };
        Some(class)
    }

    pub fn is_adversarial(self) -> bool {
        matches!(self, LinkClass::HqAdversarial | LinkClass::SwarmAdversarial)
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkClass::IntraHqBlue => "IntraHqBlue",
            LinkClass::IntraHqRed => "IntraHqRed",
            LinkClass::IntraSwarmBlue => "IntraSwarmBlue",
            LinkClass::IntraSwarmRed => "IntraSwarmRed",
            LinkClass::HqAdversarial => "HqAdversarial",
            LinkClass::SwarmAdversarial => "SwarmAdversarial",
            LinkClass::ControllerToSwarmBlue => "ControllerToSwarmBlue",
            LinkClass::ControllerToSwarmRed => "ControllerToSwarmRed",
        }
    }
}

/// Closed-open interval `[low, high)` for uniform draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformRange {
    pub low: f64,
    pub high: f64,
}

impl UniformRange {
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.high > self.low {
            rng.random_range(self.low..self.high)
        } else {
            self.low
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        if !(self.low.is_finite() && self.high.is_finite()) || self.high < self.low {
            return Err(Error::param(field, format!("need finite low <= high, got [{}, {})", self.low, self.high)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForceLayout {
    pub hq_size: Sides<usize>,
    pub swarm_size: Sides<usize>,
    /// Agents per headquarters level, root first. Empty selects
    /// [`default_branching`].
    pub hq_branching: Sides<Vec<usize>>,
    pub omega_headquarters: UniformRange,
    pub omega_swarm: UniformRange,
}

impl Default for ForceLayout {
    fn default() -> Self {
        ForceLayout {
            hq_size: Sides::new(21, 21),
            swarm_size: Sides::new(20, 25),
            hq_branching: Sides::default(),
            omega_headquarters: UniformRange { low: 0.25, high: 0.5 },
            omega_swarm: UniformRange { low: 1.0, high: 2.0 },
        }
    }
}

impl ForceLayout {
    /// Both sides with the same sizes.
    pub fn mirrored(hq_size: usize, swarm_size: usize) -> Self {
        ForceLayout {
            hq_size: Sides::new(hq_size, hq_size),
            swarm_size: Sides::new(swarm_size, swarm_size),
            ..ForceLayout::default()
        }
    }

    pub fn total_agents(&self) -> usize {
        self.hq_size.blue + self.hq_size.red + self.swarm_size.blue + self.swarm_size.red
    }

    pub fn branching(&self, population: Population) -> Vec<usize> {
        let explicit = &self.hq_branching[population];
        if explicit.is_empty() {
            default_branching(self.hq_size[population])
        } else {
            explicit.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in Population::BOTH {
            if self.hq_size[p] == 0 {
                return Err(Error::param(format!("layout.hq_size.{p}"), "must be at least 1"));
            }
            if self.swarm_size[p] == 0 {
                return Err(Error::param(format!("layout.swarm_size.{p}"), "must be at least 1"));
            }
            validate_branching(self.hq_size[p], &self.branching(p))?;
        }
        self.omega_headquarters.validate("layout.omega_headquarters")?;
        self.omega_swarm.validate("layout.omega_swarm")?;
        Ok(())
    }
}

/// Balanced tree with a span of control of four: 1, 4, 16, ... with the
/// remainder in the last level. Size 21 gives (1, 4, 16).
pub fn default_branching(size: usize) -> Vec<usize> {
    let mut levels = Vec::new();
    let mut remaining = size;
    let mut width = 1;
    while remaining > 0 {
        let take = width.min(remaining);
        // A short final level would leave upper nodes childless; fold it into
        // the previous level instead.
        if take < width / 4 && !levels.is_empty() {
            *levels.last_mut().unwrap() += take;
        } else {
            levels.push(take);
        }
        remaining -= take;
        width *= 4;
    }
    levels
}

fn validate_branching(size: usize, profile: &[usize]) -> Result<()> {
    let fail = |reason: &str| {
        Err(Error::InvalidBranching {
            size,
            profile: profile.to_vec(),
            reason: reason.to_string(),
        })
    };
    if size == 0 {
        return fail("headquarters must contain at least one agent");
    }
    if profile.first() != Some(&1) {
        return fail("the first level must hold exactly one commander");
    }
    if profile.iter().sum::<usize>() != size {
        return fail("levels do not sum to the headquarters size");
    }
    if profile.windows(2).any(|w| w[1] < w[0]) {
        return fail("levels must be non-decreasing so every leaf sits in the lowest echelon");
    }
    Ok(())
}

/// A single headquarters tree with local ids `0..size`.
#[derive(Debug, Clone, PartialEq)]
pub struct HqTree {
    pub population: Population,
    /// Depth of each local agent.
    pub levels: Vec<usize>,
    pub roles: Vec<Role>,
    /// Tree edges as (parent, child) local ids.
    pub edges: Vec<(usize, usize)>,
    /// Local ids of the lowest echelon.
    pub lowest_echelon: Vec<usize>,
    pub controller: usize,
}

/// Builds a tree whose level `l` holds `profile[l]` agents. Each agent in a
/// level is attached to a parent in the level above, spreading children
/// evenly. The first agent of the lowest level is the swarm controller.
pub fn build_headquarters(population: Population, size: usize, profile: &[usize]) -> Result<HqTree> {
    validate_branching(size, profile)?;
    let mut levels = Vec::with_capacity(size);
    let mut starts = Vec::with_capacity(profile.len());
    for (depth, &count) in profile.iter().enumerate() {
        starts.push(levels.len());
        levels.extend(std::iter::repeat_n(depth, count));
    }
    let mut edges = Vec::with_capacity(size - 1);
    for depth in 1..profile.len() {
        let (above, count) = (profile[depth - 1], profile[depth]);
        for k in 0..count {
            let parent = starts[depth - 1] + k * above / count;
            edges.push((parent, starts[depth] + k));
        }
    }
    let last = profile.len() - 1;
    let lowest_echelon: Vec<usize> = (starts[last]..size).collect();
    let controller = lowest_echelon[0];
    let roles = (0..size)
        .map(|i| {
            if i == controller {
                Role::Controller
            } else if levels[i] == 0 {
                Role::Commander
            } else {
                Role::Staff
            }
        })
        .collect();
    Ok(HqTree {
        population,
        levels,
        roles,
        edges,
        lowest_echelon,
        controller,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct C2Network {
    agents: Vec<AgentSpec>,
    adjacency: Vec<f64>,
    classes: BTreeMap<(usize, usize), LinkClass>,
    neighbors: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    slots: Vec<Option<usize>>,
    swarm_agents: Vec<usize>,
}

impl C2Network {
    /// Assembles a network from an agent roster and undirected weighted edges.
    /// Agent ids must equal their roster position; link classes are derived
    /// from the endpoints.
    pub fn from_edges(agents: Vec<AgentSpec>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = agents.len();
        if n == 0 {
            return Err(Error::InvalidNetwork("no agents".into()));
        }
        for (k, a) in agents.iter().enumerate() {
            if a.id != k {
                return Err(Error::InvalidNetwork(format!("agent at position {k} has id {}", a.id)));
            }
            if a.is_swarm() != (a.role == Role::SwarmAgent) || a.is_swarm() == a.hq_level.is_some() {
                return Err(Error::InvalidNetwork(format!("agent {k} has inconsistent echelon/role")));
            }
            if !a.omega.is_finite() {
                return Err(Error::InvalidNetwork(format!("agent {k} has non-finite omega")));
            }
        }
        let mut adjacency = vec![0.0; n * n];
        let mut classes = BTreeMap::new();
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::AgentOutOfRange { id: i.max(j), len: n });
            }
            if i == j {
                return Err(Error::InvalidNetwork(format!("self-loop on agent {i}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidNetwork(format!("edge ({i}, {j}) has weight {w}")));
            }
            let class = LinkClass::classify(&agents[i], &agents[j]).ok_or_else(|| {
                Error::InvalidNetwork(format!("agents {i} and {j} cannot be linked"))
            })?;
            let key = (i.min(j), i.max(j));
            if classes.insert(key, class).is_some() {
                return Err(Error::InvalidNetwork(format!("duplicate edge ({i}, {j})")));
            }
            adjacency[i * n + j] = w;
            adjacency[j * n + i] = w;
        }
        let neighbors: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| adjacency[i * n + j] != 0.0).collect())
            .collect();
        let degrees: Vec<usize> = neighbors.iter().map(Vec::len).collect();
        if let Some(i) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::InvalidNetwork(format!("agent {i} is isolated")));
        }
        let mut slots = vec![None; n];
        let mut swarm_agents = Vec::new();
        for a in agents.iter().filter(|a| a.is_swarm()) {
            slots[a.id] = Some(swarm_agents.len());
            swarm_agents.push(a.id);
        }
        Ok(C2Network {
            agents,
            adjacency,
            classes,
            neighbors,
            degrees,
            slots,
            swarm_agents,
        })
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn agent(&self, id: usize) -> Result<&AgentSpec> {
        self.agents.get(id).ok_or(Error::AgentOutOfRange { id, len: self.len() })
    }

    /// Base adjacency weight `A_ij` (0 when absent).
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[i * self.len() + j]
    }

    pub fn link_class(&self, i: usize, j: usize) -> Result<Option<LinkClass>> {
        let n = self.len();
        for id in [i, j] {
            if id >= n {
                return Err(Error::AgentOutOfRange { id, len: n });
            }
        }
        Ok(self.classes.get(&(i.min(j), i.max(j))).copied())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Undirected edges `(i, j, weight, class)` with `i < j`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64, LinkClass)> + '_ {
        self.classes.iter().map(|(&(i, j), &c)| (i, j, self.weight(i, j), c))
    }

    pub fn edge_count(&self) -> usize {
        self.classes.len()
    }

    pub fn count_class(&self, class: LinkClass) -> usize {
        self.classes.values().filter(|&&c| c == class).count()
    }

    /// Spatial slot of a swarm agent.
    pub fn slot(&self, id: usize) -> Option<usize> {
        self.slots.get(id).copied().flatten()
    }

    /// Agent ids of the swarm agents, in slot order.
    pub fn swarm_agents(&self) -> &[usize] {
        &self.swarm_agents
    }

    pub fn members(&self, population: Population, echelon: Echelon) -> Vec<usize> {
        self.agents
            .iter()
            .filter(|a| a.population == population && a.echelon == echelon)
            .map(|a| a.id)
            .collect()
    }

    pub fn controller(&self, population: Population) -> Option<usize> {
        self.agents
            .iter()
            .find(|a| a.population == population && a.role == Role::Controller)
            .map(|a| a.id)
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.agents.iter().map(|a| a.omega).collect()
    }

    /// Writes the edge list as CSV: `i,j,weight,class`.
    pub fn write_edges_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "weight", "class"])?;
        for (i, j, weight, class) in self.edges() {
            w.write_record([i.to_string(), j.to_string(), weight.to_string(), class.name().to_string()])?;
        }
        w.flush().map_err(|e| Error::io("edges", e))?;
        Ok(())
    }

    /// Writes the agent roster as CSV: `id,population,echelon,role,omega`.
    pub fn write_roster_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "population", "echelon", "role", "omega"])?;
        for a in &self.agents {
            w.write_record([
                a.id.to_string(),
                a.population.to_string(),
                format!("{:?}", a.echelon),
                format!("{:?}", a.role),
                a.omega.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("roster", e))?;
        Ok(())
    }
}

/// Builds the two-force network: both headquarters trees, complete bipartite
/// coupling between the lowest echelons of the two headquarters, each
/// controller linked to every agent of its own swarm, complete swarms, and
/// complete bipartite coupling between the two swarms. Natural frequencies are
/// drawn from the frequency stream of `seed`.
pub fn build_force_network(layout: &ForceLayout, seed: u64) -> Result<C2Network> {
    layout.validate()?;
    let trees = Sides::new(
        build_headquarters(Population::Blue, layout.hq_size.blue, &layout.branching(Population::Blue))?,
        build_headquarters(Population::Red, layout.hq_size.red, &layout.branching(Population::Red))?,
    );

    let mut rng = stream_rng(seed, Stream::Frequencies);
    let mut agents = Vec::with_capacity(layout.total_agents());
    let mut hq_offset = Sides::new(0, 0);
    for p in Population::BOTH {
        hq_offset[p] = agents.len();
        let tree = &trees[p];
        for local in 0..tree.levels.len() {
            agents.push(AgentSpec {
                id: agents.len(),
                population: p,
                echelon: Echelon::Headquarters,
                role: tree.roles[local],
                hq_level: Some(tree.levels[local]),
                omega: layout.omega_headquarters.sample(&mut rng),
            });
        }
    }
    let mut swarm_ids = Sides::new(Vec::new(), Vec::new());
    for p in Population::BOTH {
        for _ in 0..layout.swarm_size[p] {
            swarm_ids[p].push(agents.len());
            agents.push(AgentSpec {
                id: agents.len(),
                population: p,
                echelon: Echelon::Swarm,
                role: Role::SwarmAgent,
                hq_level: None,
                omega: layout.omega_swarm.sample(&mut rng),
            });
        }
    }

    let mut edges = Vec::new();
    for p in Population::BOTH {
        let off = hq_offset[p];
        edges.extend(trees[p].edges.iter().map(|&(a, b)| (off + a, off + b, 1.0)));
    }
    for &b in &trees.blue.lowest_echelon {
        for &r in &trees.red.lowest_echelon {
            edges.push((hq_offset.blue + b, hq_offset.red + r, 1.0));
        }
    }
    for p in Population::BOTH {
        let controller = hq_offset[p] + trees[p].controller;
        edges.extend(swarm_ids[p].iter().map(|&s| (controller, s, 1.0)));
        let ids = &swarm_ids[p];
        for (k, &a) in ids.iter().enumerate() {
            edges.extend(ids[k + 1..].iter().map(|&b| (a, b, 1.0)));
        }
    }
    for &b in &swarm_ids.blue {
        for &r in &swarm_ids.red {
            edges.push((b, r, 1.0));
        }
    }
    C2Network::from_edges(agents, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_branching_profiles() {
        assert_eq!(default_branching(1), vec![1]);
        assert_eq!(default_branching(3), vec![1, 2]);
        assert_eq!(default_branching(5), vec![1, 4]);
        assert_eq!(default_branching(21), vec![1, 4, 16]);
        assert_eq!(default_branching(6), vec![1, 5]);
        for n in 1..200 {
            let p = default_branching(n);
            assert!(validate_branching(n, &p).is_ok(), "{n}: {p:?}");
        }
    }

    #[test]
    fn headquarters_of_21() {
        let t = build_headquarters(Population::Blue, 21, &[1, 4, 16]).unwrap();
        assert_eq!(t.edges.len(), 20);
        assert_eq!(t.lowest_echelon.len(), 16);
        assert_eq!(t.roles[0], Role::Commander);
        assert_eq!(t.roles.iter().filter(|&&r| r == Role::Controller).count(), 1);
        assert_eq!(t.levels[t.controller], 2);
        let mut children = [0usize; 21];
        for &(p, _) in &t.edges {
            children[p] += 1;
        }
        assert_eq!(children[0], 4);
        assert!(children[1..5].iter().all(|&c| c == 4));
    }

    #[test]
    fn degenerate_headquarters() {
        let t = build_headquarters(Population::Red, 1, &[1]).unwrap();
        assert!(t.edges.is_empty());
        assert_eq!(t.controller, 0);
        assert_eq!(t.levels[0], 0);

        let t = build_headquarters(Population::Red, 3, &[1, 2]).unwrap();
        assert_eq!(t.edges, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(build_headquarters(Population::Blue, 21, &[1, 4, 15]).is_err());
        assert!(build_headquarters(Population::Blue, 5, &[2, 3]).is_err());
        assert!(build_headquarters(Population::Blue, 6, &[1, 4, 1]).is_err());
        assert!(build_headquarters(Population::Blue, 0, &[]).is_err());
    }

    #[test]
    fn controller_degree_on_tiny_layout() {
        let layout = ForceLayout::mirrored(1, 2);
        let net = build_force_network(&layout, 0).unwrap();
        let c = net.controller(Population::Blue).unwrap();
        assert_eq!(net.degree(c), 3);
        assert!(net.agent(c).unwrap().is_commander());
    }

    #[test]
    fn link_class_lookup() {
        let net = build_force_network(&ForceLayout::default(), 1).unwrap();
        let bs = net.members(Population::Blue, Echelon::Swarm);
        assert_eq!(net.link_class(bs[0], bs[1]).unwrap(), Some(LinkClass::IntraSwarmBlue));
        let bc = net.controller(Population::Blue).unwrap();
        assert_eq!(net.link_class(bc, bs[3]).unwrap(), Some(LinkClass::ControllerToSwarmBlue));
        assert_eq!(net.link_class(bs[3], bc).unwrap(), Some(LinkClass::ControllerToSwarmBlue));
        let blue_cmd = 0;
        let red_cmd = 21;
        assert!(net.agent(red_cmd).unwrap().is_commander());
        assert_eq!(net.link_class(blue_cmd, red_cmd).unwrap(), None);
        assert!(net.link_class(0, 87).is_err());
    }

    #[test]
    fn rejects_invalid_layouts() {
        let mut l = ForceLayout::default();
        l.swarm_size.red = 0;
        assert!(build_force_network(&l, 0).is_err());
        let mut l = ForceLayout::default();
        l.hq_branching.blue = vec![1, 4, 4];
        assert!(matches!(build_force_network(&l, 0), Err(Error::InvalidBranching { .. })));
    }
}
