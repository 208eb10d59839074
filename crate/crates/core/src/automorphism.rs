//! Automorphism enumeration by refinement-seeded backtracking, stabilizers,
//! small automorphisms, and the ordered orbit partition of a root stabilizer.
//!
//! Groups are returned as explicit element lists sorted lexicographically by
//! image array. The search assigns images to vertices `0, 1, 2, ...` in turn,
//! trying candidates in increasing order, so that order falls out directly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::colouring::{Colour, Colouring};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// A bijection on `0..n`, stored in image form: `image[v] = φ(v)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.image.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn map_edge(&self, e: Edge) -> Edge {
        Edge::new(self.image[e.u], self.image[e.v])
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (v, &w) in self.image.iter().enumerate() {
            image[w] = v;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(v, &w)| v == w)
    }

    pub fn is_automorphism_of(&self, g: &Graph) -> bool {
        self.len() == g.order()
            && g.edges()
                .into_iter()
                .all(|e| g.has_edge(self.image[e.u], self.image[e.v]))
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(image: Vec<usize>) -> Result<Self> {
        Permutation::new(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

/// Hard caps on the automorphism search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_vertices: usize,
    pub max_elements: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_vertices: 12,
            max_elements: 1_000_000,
        }
    }
}

/// Configurable automorphism search: optional fixed vertex, vertex colours
/// and edge colours that every returned automorphism must preserve.
pub struct AutomorphismSearch<'g> {
    graph: &'g Graph,
    limits: SearchLimits,
    vertex_colours: Vec<u32>,
    edge_colours: Option<Vec<u32>>,
}

const NO_EDGE: u32 = u32::MAX;

impl<'g> AutomorphismSearch<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        AutomorphismSearch {
            graph,
            limits: SearchLimits::default(),
            vertex_colours: vec![0; graph.order()],
            edge_colours: None,
        }
    }

    pub fn limits(mut self, limits: SearchLimits) -> Self {
        self.limits = limits;
        self
    }

    /// Restrict to automorphisms with `φ(r) = r`.
    pub fn fix(mut self, r: usize) -> Self {
        for (v, c) in self.vertex_colours.iter_mut().enumerate() {
            *c = 2 * *c + u32::from(v == r);
        }
        self
    }

    /// Restrict to automorphisms preserving the colouring `c`, which must be
    /// complete on the graph.
    pub fn preserving<C: Colouring + ?Sized>(mut self, c: &C) -> Result<Self> {
        let g = self.graph;
        c.check_complete(g)?;
        let mut ids: BTreeMap<&Colour, u32> = BTreeMap::new();
        let edges = g.edges();
        for e in &edges {
            ids.insert(c.edge_colour(*e).unwrap(), 0);
        }
        if c.is_total() {
            for v in 0..g.order() {
                ids.insert(c.vertex_colour(v).unwrap(), 0);
            }
        }
        for (i, id) in ids.values_mut().enumerate() {
            *id = i as u32;
        }
        let n = g.order();
        let mut matrix = vec![NO_EDGE; n * n];
        for e in &edges {
            let id = ids[c.edge_colour(*e).unwrap()];
            matrix[e.u * n + e.v] = id;
            matrix[e.v * n + e.u] = id;
        }
        self.edge_colours = Some(matrix);
        if c.is_total() {
            let k = ids.len() as u32;
            for (v, col) in self.vertex_colours.iter_mut().enumerate() {
                *col = *col * k + ids[c.vertex_colour(v).unwrap()];
            }
        }
        Ok(self)
    }

    pub fn run(self) -> Result<Vec<Permutation>> {
        let n = self.graph.order();
        let limit = self.limits.max_vertices.min(64);
        if n > limit {
            return Err(Error::TooManyVertices { n, limit });
        }
        let mut adj = vec![0u64; n];
        for e in self.graph.edges() {
            adj[e.u] |= 1 << e.v;
            adj[e.v] |= 1 << e.u;
        }
        let cells = self.refine();
        let mut state = Backtrack {
            n,
            adj,
            edge_colours: self.edge_colours.as_deref(),
            cells,
            image: vec![usize::MAX; n],
            used: 0,
            out: Vec::new(),
            cap: self.limits.max_elements,
        };
        state.extend(0)?;
        Ok(state.out)
    }

    fn edge_colour(&self, u: usize, v: usize) -> u32 {
        match &self.edge_colours {
            Some(m) => m[u * self.graph.order() + v],
            None => 0,
        }
    }

    /// Iterated degree refinement from the initial vertex colours. Cell ids
    /// are assigned from sorted signatures, so they are invariant under every
    /// automorphism that respects the initial colours.
    fn refine(&self) -> Vec<u32> {
        let g = self.graph;
        let mut cells = dense_ids(&self.vertex_colours);
        let mut count = distinct(&cells);
        loop {
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..g.order())
                .map(|v| {
                    let mut s: Vec<(u32, u32)> = g
                        .neighbours(v)
                        .iter()
                        .map(|&u| (cells[u], self.edge_colour(v, u)))
                        .collect();
                    s.sort_unstable();
                    (cells[v], s)
                })
                .collect();
            let next = dense_ids(&sigs);
            let next_count = distinct(&next);
            if next_count == count {
                return cells;
            }
            cells = next;
            count = next_count;
        }
    }
}

fn dense_ids<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn distinct(ids: &[u32]) -> usize {
    let mut v = ids.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

struct Backtrack<'a> {
    n: usize,
    adj: Vec<u64>,
    edge_colours: Option<&'a [u32]>,
    cells: Vec<u32>,
    image: Vec<usize>,
    used: u64,
    out: Vec<Permutation>,
    cap: usize,
}

impl Backtrack<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        for u in 0..v {
            let x = self.image[u];
            let a = self.adj[v] >> u & 1;
            if a != self.adj[w] >> x & 1 {
                return false;
            }
            if a == 1 {
                if let Some(m) = self.edge_colours {
                    if m[u * self.n + v] != m[x * self.n + w] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn extend(&mut self, v: usize) -> Result<()> {
        if v == self.n {
            if self.out.len() == self.cap {
                return Err(Error::TooManyAutomorphisms { cap: self.cap });
            }
            self.out.push(Permutation {
                image: self.image.clone(),
            });
            return Ok(());
        }
        for w in 0..self.n {
            if self.used >> w & 1 == 1 || self.cells[w] != self.cells[v] || !self.consistent(v, w) {
                continue;
            }
            self.image[v] = w;
            self.used |= 1 << w;
            self.extend(v + 1)?;
            self.used &= !(1 << w);
        }
        self.image[v] = usize::MAX;
        Ok(())
    }
}

/// All automorphisms of `g`, sorted by image array.
pub fn enumerate_automorphisms(g: &Graph) -> Result<Vec<Permutation>> {
    AutomorphismSearch::new(g).run()
}

pub fn enumerate_automorphisms_with(g: &Graph, limits: SearchLimits) -> Result<Vec<Permutation>> {
    AutomorphismSearch::new(g).limits(limits).run()
}

/// Automorphisms of `g` fixing `r`.
pub fn stabilizer_automorphisms(g: &Graph, r: usize) -> Result<Vec<Permutation>> {
    g.check_vertex(r)?;
    AutomorphismSearch::new(g).fix(r).run()
}

/// Whether some vertex is mapped to one of its neighbours.
pub fn is_small(g: &Graph, phi: &Permutation) -> bool {
    (0..g.order()).any(|v| g.has_edge(v, phi.apply(v)))
}

pub fn small_automorphisms(g: &Graph) -> Result<Vec<Permutation>> {
    Ok(enumerate_automorphisms(g)?
        .into_iter()
        .filter(|phi| is_small(g, phi))
        .collect())
}

/// Automorphisms of `g` preserving every edge colour (and vertex colour,
/// for total colourings) of `c`.
pub fn colour_preserving_automorphisms<C: Colouring + ?Sized>(
    g: &Graph,
    c: &C,
) -> Result<Vec<Permutation>> {
    AutomorphismSearch::new(g).preserving(c)?.run()
}

/// Orbits of the stabilizer of `root` on the component of `root`, ordered by
/// distance from the root and then by minimum vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    pub root: usize,
    /// Each orbit sorted; `orbits[0] == [root]`.
    pub orbits: Vec<Vec<usize>>,
    /// Distance from the root shared by all vertices of the orbit.
    pub distances: Vec<usize>,
}

impl OrbitPartition {
    /// Index of the orbit containing `v`, if `v` is in the root's component.
    pub fn orbit_index(&self, v: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.binary_search(&v).is_ok())
    }
}

pub fn vertex_orbits(g: &Graph, r: usize) -> Result<OrbitPartition> {
    let dist = g.bfs_distances(r)?;
    let stab = stabilizer_automorphisms(g, r)?;
    Ok(orbits_from_group(r, &dist, &stab))
}

pub(crate) fn orbits_from_group(
    r: usize,
    dist: &[Option<usize>],
    group: &[Permutation],
) -> OrbitPartition {
    let n = dist.len();
    let mut assigned = vec![false; n];
    let mut found: Vec<(usize, Vec<usize>)> = Vec::new();
    for v in 0..n {
        let Some(d) = dist[v] else { continue };
        if assigned[v] {
            continue;
        }
        let mut orbit: Vec<usize> = group.iter().map(|phi| phi.apply(v)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &w in &orbit {
            debug_assert_eq!(dist[w], Some(d), "orbits keep the distance from the root");
            assigned[w] = true;
        }
        found.push((d, orbit));
    }
    // orbits are discovered in order of minimum id, so a stable sort by
    // distance gives the (distance, minimum id) order
    found.sort_by_key(|(d, _)| *d);
    debug_assert_eq!(found.first().map(|(_, o)| o.as_slice()), Some(&[r][..]));
    let (distances, orbits) = found.into_iter().unzip();
    OrbitPartition {
        root: r,
        orbits,
        distances,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::EdgeColouring;

    fn perms(list: &[&[usize]]) -> Vec<Permutation> {
        list.iter().map(|p| Permutation::new(p.to_vec()).unwrap()).collect()
    }

    /// Every permutation of `0..n` in lexicographic order.
    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for x in 0..n {
                if !prefix.contains(&x) {
                    prefix.push(x);
                    rec(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), n, &mut out);
        out
    }

    fn brute_force(g: &Graph) -> Vec<Permutation> {
        all_permutations(g.order())
            .into_iter()
            .map(|p| Permutation::new(p).unwrap())
            .filter(|p| p.is_automorphism_of(g))
            .collect()
    }

    #[test]
    fn triangle_is_symmetric_group() {
        let auts = enumerate_automorphisms(&Graph::complete(3)).unwrap();
        assert_eq!(auts.len(), 6);
        assert_eq!(auts, brute_force(&Graph::complete(3)));
    }

    #[test]
    fn path_and_cycle() {
        let p3 = Graph::path(3);
        assert_eq!(enumerate_automorphisms(&p3).unwrap(), perms(&[&[0, 1, 2], &[2, 1, 0]]));
        assert_eq!(enumerate_automorphisms(&Graph::cycle(4)).unwrap().len(), 8);
    }

    #[test]
    fn stabilizers() {
        assert_eq!(
            stabilizer_automorphisms(&Graph::complete(3), 0).unwrap(),
            perms(&[&[0, 1, 2], &[0, 2, 1]])
        );
        assert_eq!(
            stabilizer_automorphisms(&Graph::path(3), 1).unwrap(),
            perms(&[&[0, 1, 2], &[2, 1, 0]])
        );
        assert_eq!(
            stabilizer_automorphisms(&Graph::cycle(4), 0).unwrap(),
            perms(&[&[0, 1, 2, 3], &[0, 3, 2, 1]])
        );
        assert!(stabilizer_automorphisms(&Graph::cycle(4), 4).is_err());
    }

    #[test]
    fn smallness() {
        let k3 = Graph::complete(3);
        assert!(!is_small(&k3, &Permutation::identity(3)));
        assert!(is_small(&k3, &Permutation::transposition(3, 1, 2)));
        let c4 = Graph::cycle(4);
        assert!(!is_small(&c4, &Permutation::new(vec![0, 3, 2, 1]).unwrap()));
    }

    #[test]
    fn small_lists() {
        assert!(small_automorphisms(&Graph::path(3)).unwrap().is_empty());
        assert!(small_automorphisms(&Graph::star(3)).unwrap().is_empty());
        // rotations by ±1 and the two reflections through edge midpoints
        assert_eq!(
            small_automorphisms(&Graph::cycle(4)).unwrap(),
            perms(&[&[1, 0, 3, 2], &[1, 2, 3, 0], &[3, 0, 1, 2], &[3, 2, 1, 0]])
        );
    }

    #[test]
    fn orbits() {
        let star = Graph::star(3);
        let o = vertex_orbits(&star, 0).unwrap();
        assert_eq!(o.orbits, vec![vec![0], vec![1, 2, 3]]);
        assert_eq!(o.distances, vec![0, 1]);
        let o = vertex_orbits(&Graph::path(3), 1).unwrap();
        assert_eq!(o.orbits, vec![vec![1], vec![0, 2]]);
        let rooted = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let o = vertex_orbits(&rooted, 0).unwrap();
        assert_eq!(o.orbits, vec![vec![0], vec![1], vec![2, 3]]);
        // trivial stabilizer: singletons by distance then id
        let p4 = Graph::path(4);
        let o = vertex_orbits(&p4, 1).unwrap();
        assert_eq!(o.orbits, vec![vec![1], vec![0], vec![2], vec![3]]);
        assert_eq!(o.distances, vec![0, 1, 1, 2]);
    }

    #[test]
    fn orbits_skip_other_components() {
        let g = Graph::path(3).disjoint_union(&Graph::path(3));
        let o = vertex_orbits(&g, 1).unwrap();
        assert_eq!(o.orbits, vec![vec![1], vec![0, 2]]);
    }

    #[test]
    fn colour_preserving() {
        let k3 = Graph::complete(3);
        let c = EdgeColouring::constant(&k3, 1.into());
        assert_eq!(colour_preserving_automorphisms(&k3, &c).unwrap().len(), 6);
        let rainbow: EdgeColouring = k3
            .edges()
            .into_iter()
            .zip(1..)
            .map(|(e, i)| (e, Colour::Int(i)))
            .collect();
        assert_eq!(
            colour_preserving_automorphisms(&k3, &rainbow).unwrap(),
            vec![Permutation::identity(3)]
        );
        let c4 = Graph::cycle(4);
        let alt: EdgeColouring = [
            (Edge::new(0, 1), "red".into()),
            (Edge::new(2, 3), "red".into()),
            (Edge::new(1, 2), "blue".into()),
            (Edge::new(0, 3), "blue".into()),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            colour_preserving_automorphisms(&c4, &alt).unwrap(),
            perms(&[&[0, 1, 2, 3], &[1, 0, 3, 2], &[2, 3, 0, 1], &[3, 2, 1, 0]])
        );
    }

    #[test]
    fn limits_are_errors() {
        let g = Graph::empty(13);
        assert!(matches!(
            enumerate_automorphisms(&g),
            Err(Error::TooManyVertices { n: 13, limit: 12 })
        ));
        let limits = SearchLimits {
            max_vertices: 12,
            max_elements: 100,
        };
        assert!(matches!(
            enumerate_automorphisms_with(&Graph::complete(5), limits),
            Err(Error::TooManyAutomorphisms { cap: 100 })
        ));
        assert_eq!(
            enumerate_automorphisms_with(&Graph::complete(5), SearchLimits { max_elements: 120, ..limits })
                .unwrap()
                .len(),
            120
        );
    }

    #[test]
    fn group_closure_up_to_six() {
        for n in 1..=6usize {
            let pairs = n * (n - 1) / 2;
            // a spread of masks keeps this fast while touching every order
            for mask in (0..1u64 << pairs).step_by(37) {
                let g = Graph::from_upper_triangle_mask(n, mask);
                let group = enumerate_automorphisms(&g).unwrap();
                assert!(group.contains(&Permutation::identity(n)));
                let set: std::collections::HashSet<_> = group.iter().cloned().collect();
                for a in &group {
                    assert!(set.contains(&a.inverse()));
                    for b in &group {
                        assert!(set.contains(&a.compose(b)));
                    }
                }
            }
        }
    }

    #[test]
    fn matches_brute_force_up_to_five() {
        for n in 1..=5usize {
            let pairs = n * (n - 1) / 2;
            for mask in 0..1u64 << pairs {
                let g = Graph::from_upper_triangle_mask(n, mask);
                assert_eq!(enumerate_automorphisms(&g).unwrap(), brute_force(&g), "mask {mask}");
                for r in 0..n {
                    let filtered: Vec<_> =
                        brute_force(&g).into_iter().filter(|p| p.apply(r) == r).collect();
                    assert_eq!(stabilizer_automorphisms(&g, r).unwrap(), filtered);
                }
            }
        }
    }

    #[test]
    fn permutation_json() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,0,1]");
        assert_eq!(serde_json::from_str::<Permutation>("[2,0,1]").unwrap(), p);
        assert!(serde_json::from_str::<Permutation>("[0,0]").is_err());
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
    }
}
