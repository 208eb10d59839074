//! Exhaustive oracles for breaking colourings, the small distinguishing index,
//! and bounds on its list version.
//!
//! # Finite adversarial search over list assignments
//!
//! Whether a list assignment admits a breaking colouring depends only on which
//! list slots hold equal colours:
//!
//! * a colouring only ever uses colours from the union of the lists, so
//!   colour names outside that union play no role;
//! * renaming colours injectively maps breaking colourings to breaking
//!   colourings (breaking compares colours only for equality), so two
//!   assignments related by a renaming both have or both lack one.
//!
//! Hence it suffices to enumerate the partitions of the `k * |E|` list slots
//! into equal-colour classes, subject to the slots of one list lying in
//! different classes. Each partition is realised with colours `1, 2, ...`
//! numbered by first occurrence (a restricted growth string).

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automorphism::small_automorphisms;
use crate::colouring::{palette, Colour, EdgeColouring, ListAssignment};
use crate::construct::theorem_edge_colouring;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Default cap on the number of colourings an exhaustive search may visit.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Small automorphisms of a graph precomputed as permutations of edge
/// indices, for fast repeated breaking checks.
pub struct BreakingOracle {
    edges: Vec<Edge>,
    edge_maps: Vec<Vec<usize>>,
}

impl BreakingOracle {
    pub fn new(g: &Graph) -> Result<Self> {
        let edges = g.edges();
        let edge_maps = small_automorphisms(g)?
            .iter()
            .map(|phi| {
                edges
                    .iter()
                    .map(|&e| edges.binary_search(&phi.map_edge(e)).unwrap())
                    .collect()
            })
            .collect();
        Ok(BreakingOracle { edges, edge_maps })
    }

    pub fn has_small_automorphisms(&self) -> bool {
        !self.edge_maps.is_empty()
    }

    /// Whether the colouring (one colour id per edge index) breaks every
    /// small automorphism.
    pub fn breaks(&self, colours: &[u32]) -> bool {
        self.edge_maps
            .iter()
            .all(|map| map.iter().enumerate().any(|(e, &f)| colours[e] != colours[f]))
    }

    /// First breaking colouring in lexicographic order (edges in sorted
    /// order, each list scanned front to back), with the number of colourings
    /// visited. `lists[e]` holds colour ids for edge index `e`.
    pub fn search(&self, lists: &[Vec<u32>], budget: u128) -> Result<(Option<Vec<u32>>, u128)> {
        let required = lists
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128));
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        if lists.iter().any(Vec::is_empty) {
            return Ok((None, 0));
        }
        let m = lists.len();
        let mut choice = vec![0usize; m];
        let mut colours: Vec<u32> = lists.iter().map(|l| l[0]).collect();
        let mut visited = 0u128;
        loop {
            visited += 1;
            if self.breaks(&colours) {
                return Ok((Some(colours), visited));
            }
            // odometer, last edge fastest
            let mut i = m;
            loop {
                if i == 0 {
                    return Ok((None, visited));
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < lists[i].len() {
                    colours[i] = lists[i][choice[i]];
                    break;
                }
                choice[i] = 0;
                colours[i] = lists[i][0];
            }
        }
    }
}

/// Colour ids for the lists of `oracle`'s edges, with the token table.
fn encode_lists(edges: &[Edge], lists: &ListAssignment) -> Result<(Vec<Vec<u32>>, Vec<Colour>)> {
    let mut tokens: Vec<Colour> = Vec::new();
    for &e in edges {
        tokens.extend(lists.edge_list(e)?.iter().cloned());
    }
    tokens.sort();
    tokens.dedup();
    let ids = edges
        .iter()
        .map(|&e| {
            Ok(lists
                .edge_list(e)?
                .iter()
                .map(|c| tokens.binary_search(c).unwrap() as u32)
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok((ids, tokens))
}

/// A list colouring of `g` breaking every small automorphism, if one exists;
/// the lexicographically first one is returned.
pub fn exists_breaking_colouring(
    g: &Graph,
    lists: &ListAssignment,
    budget: u128,
) -> Result<Option<EdgeColouring>> {
    let oracle = BreakingOracle::new(g)?;
    Ok(search_with(&oracle, lists, budget)?.0)
}

fn search_with(
    oracle: &BreakingOracle,
    lists: &ListAssignment,
    budget: u128,
) -> Result<(Option<EdgeColouring>, u128)> {
    let (ids, tokens) = encode_lists(&oracle.edges, lists)?;
    let (found, visited) = oracle.search(&ids, budget)?;
    let colouring = found.map(|colours| {
        oracle
            .edges
            .iter()
            .zip(colours)
            .map(|(&e, id)| (e, tokens[id as usize].clone()))
            .collect()
    });
    Ok((colouring, visited))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformFailure {
    /// Every colouring from `{1..k}` was tried.
    pub k: usize,
    pub colourings_checked: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallIndex {
    pub value: usize,
    /// A breaking colouring from `{1..value}`.
    pub witness: EdgeColouring,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_below: Option<UniformFailure>,
}

fn check_no_k2(g: &Graph) -> Result<()> {
    match g.connected_components().into_iter().find(|c| c.len() == 2) {
        Some(component) => Err(Error::K2Component { component }),
        None => Ok(()),
    }
}

/// Least `k` such that some colouring from `{1..k}` breaks every small
/// automorphism of `g`.
pub fn small_distinguishing_index(g: &Graph, budget: u128) -> Result<SmallIndex> {
    check_no_k2(g)?;
    let oracle = BreakingOracle::new(g)?;
    small_index_with(g, &oracle, budget)
}

fn small_index_with(g: &Graph, oracle: &BreakingOracle, budget: u128) -> Result<SmallIndex> {
    let mut failure_below = None;
    // distinct colours on all edges always break: a preserved small
    // automorphism would fix every edge setwise, impossible without K2
    for k in 1..=g.edge_count().max(1) {
        let (found, visited) = search_with(oracle, &ListAssignment::uniform_edges(g, k), budget)?;
        if let Some(witness) = found {
            return Ok(SmallIndex {
                value: k,
                witness,
                failure_below,
            });
        }
        failure_below = Some(UniformFailure {
            k,
            colourings_checked: visited,
        });
    }
    unreachable!("distinct colours break every small automorphism")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LowerCertificate {
    /// `lower = 1` needs no certificate.
    Trivial,
    /// Uniform lists `{1..k}` admit no breaking colouring.
    UniformFailure(UniformFailure),
    /// A specific assignment of `k`-lists admits no breaking colouring.
    AdversarialLists { k: usize, lists: ListAssignment },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UpperCertificate {
    /// No small automorphisms: every colouring breaks them all.
    Vacuous,
    /// Three-list construction, re-verified on sampled assignments.
    ConstructiveTheorem { samples_verified: usize },
    /// Every canonical `k`-list pattern admits a breaking colouring.
    Exhaustive { k: usize, patterns_checked: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexBounds {
    pub lower: usize,
    pub upper: usize,
    pub lower_certificate: LowerCertificate,
    pub upper_certificate: UpperCertificate,
}

#[derive(Clone, Debug)]
pub struct BoundsOptions {
    pub budget: u128,
    /// Enumerate canonical list patterns to tighten the bounds.
    pub adversarial: bool,
    /// Random three-list assignments used to spot-check the upper bound.
    pub samples: usize,
    pub seed: u64,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        BoundsOptions {
            budget: DEFAULT_BUDGET,
            adversarial: false,
            samples: 8,
            seed: 0,
        }
    }
}

pub fn small_list_distinguishing_index_bounds(g: &Graph, opts: &BoundsOptions) -> Result<IndexBounds> {
    check_no_k2(g)?;
    let oracle = BreakingOracle::new(g)?;
    if !oracle.has_small_automorphisms() {
        return Ok(IndexBounds {
            lower: 1,
            upper: 1,
            lower_certificate: LowerCertificate::Trivial,
            upper_certificate: UpperCertificate::Vacuous,
        });
    }
    let uniform = small_index_with(g, &oracle, opts.budget)?;
    let mut lower = uniform.value;
    let mut lower_certificate = match uniform.failure_below {
        Some(f) => LowerCertificate::UniformFailure(f),
        None => LowerCertificate::Trivial,
    };

    for i in 0..opts.samples {
        let lists = random_list_assignment(g, 3, 9, opts.seed.wrapping_add(i as u64), false)?;
        theorem_edge_colouring(g, &lists)?;
    }
    let mut upper = 3;
    let mut upper_certificate = UpperCertificate::ConstructiveTheorem {
        samples_verified: opts.samples,
    };
    if lower > upper {
        return Err(Error::CertificationFailed(format!(
            "uniform lists need {lower} colours, above the constructive bound {upper}"
        )));
    }

    if opts.adversarial {
        while lower < upper {
            let k = lower;
            match adversarial_search(&oracle, k, opts.budget)? {
                (Some(lists), _) => {
                    lower = k + 1;
                    lower_certificate = LowerCertificate::AdversarialLists { k, lists };
                }
                (None, patterns_checked) => {
                    upper = k;
                    upper_certificate = UpperCertificate::Exhaustive { k, patterns_checked };
                }
            }
        }
    }
    Ok(IndexBounds {
        lower,
        upper,
        lower_certificate,
        upper_certificate,
    })
}

/// Bell numbers `B(0..=m)`, saturating.
fn bell_numbers(m: usize) -> Vec<u128> {
    let mut bell = vec![1u128];
    let mut row = vec![1u128];
    for _ in 0..m {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap().saturating_add(x));
        }
        bell.push(next[0]);
        row = next;
    }
    bell
}

/// Looks for a `k`-list assignment with no breaking colouring, enumerating
/// list patterns up to colour renaming. Returns the first defeating
/// assignment found, or `None` with the number of patterns checked.
fn adversarial_search(
    oracle: &BreakingOracle,
    k: usize,
    budget: u128,
) -> Result<(Option<ListAssignment>, u128)> {
    let m = oracle.edges.len();
    let slots = k * m;
    let per_pattern = (k as u128).saturating_pow(m as u32);
    let required = bell_numbers(slots)[slots].saturating_mul(per_pattern);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    struct Walk<'a> {
        oracle: &'a BreakingOracle,
        k: usize,
        slots: Vec<u32>,
        checked: u128,
    }

    impl Walk<'_> {
        fn rec(&mut self, pos: usize, next_new: u32) -> Option<Vec<Vec<u32>>> {
            if pos == self.slots.len() {
                self.checked += 1;
                let lists: Vec<Vec<u32>> = self.slots.chunks(self.k).map(<[u32]>::to_vec).collect();
                let (found, _) = self.oracle.search(&lists, u128::MAX).unwrap();
                return found.is_none().then_some(lists);
            }
            let list_start = pos - pos % self.k;
            for c in 0..=next_new {
                if self.slots[list_start..pos].contains(&c) {
                    continue;
                }
                self.slots[pos] = c;
                let bump = if c == next_new { next_new + 1 } else { next_new };
                if let Some(found) = self.rec(pos + 1, bump) {
                    return Some(found);
                }
            }
            None
        }
    }

    let mut walk = Walk {
        oracle,
        k,
        slots: vec![0; slots],
        checked: 0,
    };
    let found = walk.rec(0, 0).map(|lists| ListAssignment {
        edges: oracle
            .edges
            .iter()
            .zip(lists)
            .map(|(&e, l)| (e, l.into_iter().map(|c| Colour::Int(c as i64 + 1)).collect()))
            .collect(),
        vertices: None,
    });
    Ok((found, walk.checked))
}

/// Each edge (and each vertex, if `with_vertices`) gets a uniformly random
/// `k`-subset of `{1..palette_size}`, sorted. Deterministic in `seed`.
pub fn random_list_assignment(
    g: &Graph,
    k: usize,
    palette_size: usize,
    seed: u64,
    with_vertices: bool,
) -> Result<ListAssignment> {
    if palette_size < k {
        return Err(Error::PaletteTooSmall {
            palette: palette_size,
            k,
        });
    }
    let colours = palette(palette_size);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let mut idx = sample(&mut rng, palette_size, k).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| colours[i].clone()).collect::<Vec<_>>()
    };
    let edges = g.edges().into_iter().map(|e| (e, draw())).collect();
    let vertices = with_vertices.then(|| (0..g.order()).map(|v| (v, draw())).collect());
    Ok(ListAssignment { edges, vertices })
}
