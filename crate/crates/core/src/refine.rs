//! Minimum-degree refinement of bipartite incidence graphs and dyadic
//! grouping of points by line degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::IncidenceGraph;
use crate::scalar::ratio_serde;

/// A vertex of a bipartite graph. Left vertices order before right ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "side", content = "id", rename_all = "lowercase")]
pub enum Vertex {
    Left(usize),
    Right(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub vertex: Vertex,
    /// Degree at the moment of removal.
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementResult {
    /// Full left and right universes of the input graph.
    pub universe_left: Vec<usize>,
    pub universe_right: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub original_edges: usize,
    #[serde(with = "ratio_serde")]
    pub left_threshold: BigRational,
    #[serde(with = "ratio_serde")]
    pub right_threshold: BigRational,
    pub removals: Vec<Removal>,
}

impl RefinementResult {
    /// The surviving edges over the original vertex universes. Removed
    /// vertices stay as isolated vertices, so the thresholds of a second
    /// refinement are computed against the same `|A|` and `|B|`.
    pub fn induced(&self) -> IncidenceGraph {
        IncidenceGraph::new(
            self.universe_left.clone(),
            self.universe_right.clone(),
            self.edges.clone(),
        )
    }

    /// Surviving edges restricted to surviving vertices only.
    pub fn core(&self) -> IncidenceGraph {
        IncidenceGraph::new(self.left.clone(), self.right.clone(), self.edges.clone())
    }
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Repeatedly deletes the lowest violating vertex: a left vertex of degree
/// below `|E|/(4|A|)` or a right vertex below `|E|/(4|B|)`, both thresholds
/// fixed from the input graph and compared exactly.
pub fn refine(g: &IncidenceGraph) -> Result<RefinementResult> {
    if g.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let e = g.edges.len();
    let left_threshold = ratio(e, 4 * g.left.len());
    let right_threshold = ratio(e, 4 * g.right.len());
    // 4|A|·deg < |E| is the integer form of deg < |E|/(4|A|)
    let violates = |v: &Vertex, deg: usize| match v {
        Vertex::Left(_) => 4 * g.left.len() * deg < e,
        Vertex::Right(_) => 4 * g.right.len() * deg < e,
    };

    let mut adj: HashMap<Vertex, Vec<(Vertex, usize)>> = HashMap::new();
    for a in &g.left {
        adj.entry(Vertex::Left(*a)).or_default();
    }
    for b in &g.right {
        adj.entry(Vertex::Right(*b)).or_default();
    }
    for (idx, (a, b)) in g.edges.iter().enumerate() {
        adj.entry(Vertex::Left(*a)).or_default().push((Vertex::Right(*b), idx));
        adj.entry(Vertex::Right(*b)).or_default().push((Vertex::Left(*a), idx));
    }
    let mut degree: HashMap<Vertex, usize> = adj.iter().map(|(v, n)| (*v, n.len())).collect();
    let mut alive_edge = vec![true; e];
    let mut removed: BTreeSet<Vertex> = BTreeSet::new();
    let mut queue: BTreeSet<Vertex> = degree
        .iter()
        .filter(|(v, d)| violates(v, **d))
        .map(|(v, _)| *v)
        .collect();
    let mut removals = Vec::new();

    while let Some(v) = queue.pop_first() {
        removals.push(Removal {
            vertex: v,
            degree: degree[&v],
        });
        removed.insert(v);
        for &(u, idx) in &adj[&v] {
            if !alive_edge[idx] {
                continue;
            }
            alive_edge[idx] = false;
            let d = degree.get_mut(&u).expect("known vertex");
            *d -= 1;
            if !removed.contains(&u) && violates(&u, *d) {
                queue.insert(u);
            }
        }
        *degree.get_mut(&v).expect("known vertex") = 0;
    }

    let edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .zip(&alive_edge)
        .filter(|(_, alive)| **alive)
        .map(|(e, _)| *e)
        .collect();
    let left = sorted_survivors(&g.left, |a| removed.contains(&Vertex::Left(a)));
    let right = sorted_survivors(&g.right, |b| removed.contains(&Vertex::Right(b)));
    if 2 * edges.len() < e || left.is_empty() || right.is_empty() {
        return Err(Error::Invariant(format!(
            "refinement kept {} of {e} edges",
            edges.len()
        )));
    }
    Ok(RefinementResult {
        universe_left: g.left.clone(),
        universe_right: g.right.clone(),
        left,
        right,
        edges,
        original_edges: e,
        left_threshold,
        right_threshold,
        removals,
    })
}

fn sorted_survivors(ids: &[usize], removed: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut out: Vec<usize> = ids.iter().copied().filter(|&x| !removed(x)).collect();
    out.sort_unstable();
    out
}

/// Checks the refinement guarantees directly from `res` and the input
/// graph. Returns a description of each violated property.
pub fn check_refinement(g: &IncidenceGraph, res: &RefinementResult) -> Vec<String> {
    let mut bad = Vec::new();
    let e = g.edges.len();
    let left: BTreeSet<usize> = res.left.iter().copied().collect();
    let right: BTreeSet<usize> = res.right.iter().copied().collect();
    if !res.left.iter().all(|a| g.left.contains(a)) || !res.right.iter().all(|b| g.right.contains(b)) {
        bad.push("survivors are not a subset of the input".into());
    }
    let induced: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|(a, b)| left.contains(a) && right.contains(b))
        .copied()
        .collect();
    if induced != res.edges {
        bad.push("edge set is not the induced subgraph".into());
    }
    if 2 * res.edges.len() < e {
        bad.push(format!("kept {} < |E|/2 edges", res.edges.len()));
    }
    if left.is_empty() || right.is_empty() {
        bad.push("a side is empty".into());
    }
    let core = res.core();
    for (a, d) in core.left_degrees() {
        if 4 * g.left.len() * d < e {
            bad.push(format!("left vertex {a} has degree {d}"));
        }
    }
    for (b, d) in core.right_degrees() {
        if 4 * g.right.len() * d < e {
            bad.push(format!("right vertex {b} has degree {d}"));
        }
    }
    bad
}

/// Points grouped by line degree into `[2^{j-1}k, 2^j k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicPartition {
    #[serde(with = "ratio_serde")]
    pub k: BigRational,
    /// Group index `j ≥ 1` → points in that group.
    pub groups: BTreeMap<u32, Vec<usize>>,
    /// Incidences carried by each group (sum of its degrees).
    pub group_incidences: BTreeMap<u32, usize>,
    pub total_incidences: usize,
    pub chosen: u32,
    /// Whether the chosen group carries at least `|I|/(4j²)` incidences.
    pub witness_holds: bool,
}

impl DyadicPartition {
    pub fn chosen_points(&self) -> &[usize] {
        &self.groups[&self.chosen]
    }

    /// Lower degree threshold `2^{j-1}k` of group `j`.
    pub fn group_floor(&self, j: u32) -> BigRational {
        &self.k * BigRational::from_integer(BigInt::one() << (j - 1))
    }
}

/// Smallest `j ≥ 1` with `deg < 2^j k`.
fn group_of(deg: usize, k: &BigRational) -> u32 {
    let deg = BigRational::from_integer(BigInt::from(deg));
    let mut j = 1;
    let mut upper = k * BigRational::from_integer(BigInt::from(2));
    while deg >= upper {
        j += 1;
        upper = &upper * BigRational::from_integer(BigInt::from(2));
    }
    j
}

/// `|I'_j| ≥ |I|/(4j²)` in integers.
fn witness(group: usize, total: usize, j: u32) -> bool {
    let j = j as usize;
    4 * j * j * group >= total
}

/// Partitions `points` (with their line degrees) into dyadic groups and picks
/// the group carrying the most incidences among those that satisfy the
/// `|I|/(4j²)` witness inequality, breaking ties by smaller `j`.
/// `total_incidences` is `|I|`; when it is `None` the sum of the degrees is
/// used.
pub fn dyadic_partition(
    points: &[usize],
    degrees: &[usize],
    k: &BigRational,
    total_incidences: Option<usize>,
) -> Result<DyadicPartition> {
    if points.len() != degrees.len() {
        return Err(Error::Dimension {
            expected: points.len(),
            found: degrees.len(),
        });
    }
    if points.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, found: 0 });
    }
    if *k <= BigRational::zero() {
        return Err(Error::InvalidParameter("dyadic threshold must be positive".into()));
    }
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let mut group_incidences: BTreeMap<u32, usize> = BTreeMap::new();
    for (&p, &deg) in points.iter().zip(degrees) {
        if BigRational::from_integer(BigInt::from(deg)) < *k {
            return Err(Error::DegreeBelowThreshold {
                point: p,
                degree: deg,
                threshold: k.to_string(),
            });
        }
        let j = group_of(deg, k);
        groups.entry(j).or_default().push(p);
        *group_incidences.entry(j).or_default() += deg;
    }
    let total = total_incidences.unwrap_or_else(|| degrees.iter().sum());
    let pick = |only_witnessed: bool| {
        group_incidences
            .iter()
            .filter(|(j, c)| !only_witnessed || witness(**c, total, **j))
            .max_by(|(ja, ca), (jb, cb)| ca.cmp(cb).then(jb.cmp(ja)))
            .map(|(j, _)| *j)
    };
    let chosen = pick(true).or_else(|| pick(false)).expect("at least one group");
    let witness_holds = witness(group_incidences[&chosen], total, chosen);
    Ok(DyadicPartition {
        k: k.clone(),
        groups,
        group_incidences,
        total_incidences: total,
        chosen,
        witness_holds,
    })
}

/// Seeded random bipartite graph with `left × right` vertices and edge
/// probability `density`. Test apparatus.
pub fn random_bipartite(left: usize, right: usize, density: f64, seed: u64) -> IncidenceGraph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..left {
        for b in 0..right {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    IncidenceGraph::new((0..left).collect(), (0..right).collect(), edges)
}
