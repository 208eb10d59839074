//! Constructive colourings breaking small automorphisms.
//!
//! * [`lemma_rooted_colouring`]: edge colouring from lists of length at least
//!   two that breaks every small automorphism fixing a chosen root. Orbits of
//!   the root stabilizer are processed by distance; each component of an orbit
//!   is coloured recursively (its maximum degree is strictly smaller, because
//!   each of its vertices has an edge back towards the root) and its own root
//!   is singled out as the only vertex of the component with a back edge in
//!   the "blue" colour.
//! * [`theorem_edge_colouring`]: lists of length at least three, no rooted
//!   stabilizer assumed. One colour ("pink") is withheld while the rooted
//!   colouring is built and then spent on a single edge at the root so that
//!   the root becomes fixed.
//! * [`total_colouring`]: lists of length two on vertices and edges; the root
//!   receives a colour no other vertex of its component has.
//!
//! Every public entry point certifies its output with the verifier before
//! returning it.

use std::collections::BTreeSet;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::automorphism::vertex_orbits;
use crate::colouring::{Colour, EdgeColouring, ListAssignment, TotalColouring};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, InducedSubgraph};
use crate::index::{exists_breaking_colouring, DEFAULT_BUDGET};
use crate::verify::{breaks_all_small, breaks_all_small_rooted, breaks_all_small_total, root_is_fixed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrectionBranch {
    /// The rooted colouring already fixed the root.
    None,
    SinglePink,
    MonochromeStar,
    BichromaticSwap,
    VerifiedFallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recolouring {
    pub edge: Edge,
    pub old: Colour,
    pub new: Colour,
}

/// How one component was coloured by [`theorem_edge_colouring`].
///
/// `recoloured` lists every edge whose final colour differs from the rooted
/// colouring, so applying it to that colouring reproduces the output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionTrace {
    pub component: Vec<usize>,
    /// `None` for components of maximum degree at most two, which are
    /// coloured directly.
    pub root: Option<usize>,
    pub branch: CorrectionBranch,
    /// The correction branch that was tried before falling back.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attempted: Option<CorrectionBranch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pink: Option<Colour>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blue: Option<Colour>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub red: Option<Colour>,
    pub recoloured: Vec<Recolouring>,
}

fn first_of(lists: &ListAssignment, e: Edge) -> Result<Colour> {
    lists
        .edge_list(e)?
        .first()
        .cloned()
        .ok_or_else(|| Error::ListTooShort {
            what: format!("edge {e}"),
            len: 0,
            required: 1,
        })
}

fn first_avoiding(lists: &ListAssignment, e: Edge, avoid: &[&Colour]) -> Result<Colour> {
    let list = lists.edge_list(e)?;
    list.iter()
        .find(|c| !avoid.contains(c))
        .cloned()
        .ok_or_else(|| Error::ListTooShort {
            what: format!("edge {e}"),
            len: list.len(),
            required: avoid.len() + 1,
        })
}

fn is_k2(g: &Graph) -> bool {
    g.order() == 2 && g.edge_count() == 1
}

fn check_connected(h: &Graph) -> Result<()> {
    if h.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

fn check_path_or_cycle(h: &Graph) -> Result<()> {
    check_connected(h)?;
    match h.max_degree() {
        d if d > 2 => Err(Error::NotPathOrCycle(d)),
        _ => Ok(()),
    }
}

fn is_cycle(h: &Graph) -> bool {
    h.order() >= 3 && h.edge_count() == h.order()
}

fn certify(report: crate::verify::VerifierReport, what: &str) -> Result<()> {
    if report.ok {
        Ok(())
    } else {
        Err(Error::CertificationFailed(format!(
            "{what}: preserved small automorphism {:?}",
            report.witness.map(Vec::from)
        )))
    }
}

fn reject_k2_components(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let comps = g.connected_components();
    if let Some(c) = comps.iter().find(|c| c.len() == 2) {
        return Err(Error::K2Component {
            component: c.clone(),
        });
    }
    Ok(comps)
}

/// Rooted colouring of a connected graph of maximum degree at most two.
///
/// Paths get the first colour of every list: no automorphism of a finite path
/// that fixes a vertex is small. On a cycle the two edges at `r` get distinct
/// colours, which kills the one non-trivial element of the stabilizer.
pub fn base_case_rooted_colouring(
    h: &Graph,
    r: usize,
    lists: &ListAssignment,
) -> Result<EdgeColouring> {
    check_path_or_cycle(h)?;
    h.check_vertex(r)?;
    let c = base_case_inner(h, r, lists)?;
    c.check_lists(lists)?;
    certify(breaks_all_small_rooted(h, r, &c)?, "rooted base case")?;
    Ok(c)
}

fn base_case_inner(h: &Graph, r: usize, lists: &ListAssignment) -> Result<EdgeColouring> {
    let mut c = EdgeColouring::default();
    for e in h.edges() {
        c.set(e, first_of(lists, e)?);
    }
    if is_cycle(h) {
        let (a, b) = (h.neighbours(r)[0], h.neighbours(r)[1]);
        let first = c.get(Edge::new(r, a)).unwrap().clone();
        let eb = Edge::new(r, b);
        c.set(eb, first_avoiding(lists, eb, &[&first])?);
    }
    Ok(c)
}

/// Edge colouring of the connected graph `h` from lists of length at least
/// two that breaks every small automorphism of `h` fixing `r`.
pub fn lemma_rooted_colouring(
    h: &Graph,
    r: usize,
    lists: &ListAssignment,
) -> Result<EdgeColouring> {
    check_connected(h)?;
    h.check_vertex(r)?;
    if is_k2(h) {
        return Err(Error::K2Component {
            component: vec![0, 1],
        });
    }
    lists.validate(h, 2, None)?;
    let c = lemma_inner(h, r, lists)?;
    c.check_lists(lists)?;
    certify(breaks_all_small_rooted(h, r, &c)?, "rooted colouring")?;
    Ok(c)
}

fn lemma_inner(h: &Graph, r: usize, lists: &ListAssignment) -> Result<EdgeColouring> {
    let delta = h.max_degree();
    if delta <= 2 {
        return base_case_inner(h, r, lists);
    }
    let partition = vertex_orbits(h, r)?;
    let mut orbit_of = vec![usize::MAX; h.order()];
    for (i, orbit) in partition.orbits.iter().enumerate() {
        for &v in orbit {
            orbit_of[v] = i;
        }
    }

    let mut c = EdgeColouring::default();
    let set_once = |c: &mut EdgeColouring, e: Edge, colour: Colour| {
        let previous = c.set(e, colour);
        assert!(previous.is_none(), "edge {e} coloured twice");
    };

    for (i, orbit) in partition.orbits.iter().enumerate().skip(1) {
        let d = partition.distances[i];
        let within = h.induced_subgraph(orbit)?;
        for local in within.graph.connected_components() {
            let members: Vec<usize> = local.iter().map(|&x| within.to_old[x]).collect();
            let comp = h.induced_subgraph(&members)?;
            assert!(
                comp.graph.max_degree() < delta,
                "orbit component must have smaller maximum degree"
            );
            // the component root is its minimum vertex, which is local id 0
            let part = lemma_inner(&comp.graph, 0, &lists.restrict(&comp))?;
            for (&e, colour) in &part.colours {
                set_once(&mut c, comp.old_edge(e), colour.clone());
            }

            let comp_root = comp.to_old[0];
            let parent = *h
                .neighbours(comp_root)
                .iter()
                .find(|&&w| partition.distances[orbit_of[w]] + 1 == d)
                .expect("a vertex at distance d has a neighbour at distance d - 1");
            let special = Edge::new(comp_root, parent);
            let blue = first_of(lists, special)?;
            for &x in &members {
                for &y in h.neighbours(x) {
                    if orbit_of[y] >= i {
                        continue;
                    }
                    let e = Edge::new(x, y);
                    let colour = if e == special {
                        blue.clone()
                    } else {
                        first_avoiding(lists, e, &[&blue])?
                    };
                    set_once(&mut c, e, colour);
                }
            }
        }
    }
    assert_eq!(c.colours.len(), h.edge_count(), "every edge coloured");
    Ok(c)
}

/// Breaking colouring of a path or cycle (not `K2`). Paths need lists of
/// length two, cycles lists of length three.
pub fn degree_le2_component_colouring(h: &Graph, lists: &ListAssignment) -> Result<EdgeColouring> {
    check_path_or_cycle(h)?;
    if is_k2(h) {
        return Err(Error::K2Component {
            component: vec![0, 1],
        });
    }
    lists.validate(h, if is_cycle(h) { 3 } else { 2 }, None)?;
    let c = degree_le2_inner(h, lists)?;
    c.check_lists(lists)?;
    certify(breaks_all_small(h, &c)?, "path/cycle colouring")?;
    Ok(c)
}

fn degree_le2_inner(h: &Graph, lists: &ListAssignment) -> Result<EdgeColouring> {
    let mut c = EdgeColouring::default();
    if h.edge_count() == 0 {
        return Ok(c);
    }
    if is_cycle(h) {
        let u = 0;
        let v = h.neighbours(u)[0];
        let e0 = Edge::new(u, v);
        let base = first_of(lists, e0)?;
        for e in h.edges() {
            if e != e0 {
                c.set(e, first_avoiding(lists, e, &[&base])?);
            }
        }
        let next_v = *h.neighbours(v).iter().find(|&&w| w != u).unwrap();
        let next_u = *h.neighbours(u).iter().find(|&&w| w != v).unwrap();
        let ev = Edge::new(v, next_v);
        let eu = Edge::new(u, next_u);
        let cv = first_avoiding(lists, ev, &[&base])?;
        let cu = first_avoiding(lists, eu, &[&base, &cv])?;
        c.set(ev, cv);
        c.set(eu, cu);
        c.set(e0, base);
        return Ok(c);
    }

    // walk the path from its smaller endpoint
    let start = (0..h.order()).find(|&v| h.degree(v) == 1).unwrap();
    let mut walk = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = h.neighbours(cur).iter().find(|&&w| w != prev) {
        walk.push(next);
        prev = cur;
        cur = next;
    }
    let path_edges: Vec<Edge> = walk.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
    for &e in &path_edges {
        c.set(e, first_of(lists, e)?);
    }
    let m = walk.len();
    if m % 2 == 0 {
        // the reflection swaps the ends of the central edge; make its two
        // neighbouring edges differ
        let mid = (m - 2) / 2;
        let near = c.get(path_edges[mid - 1]).unwrap().clone();
        let far = path_edges[mid + 1];
        c.set(far, first_avoiding(lists, far, &[&near])?);
    }
    Ok(c)
}

/// Edge colouring from lists of length at least three breaking every small
/// automorphism of `g`, which must have no `K2` component. Returns one trace
/// per component, in component order.
pub fn theorem_edge_colouring(
    g: &Graph,
    lists: &ListAssignment,
) -> Result<(EdgeColouring, Vec<CorrectionTrace>)> {
    lists.validate(g, 3, None)?;
    let comps = reject_k2_components(g)?;
    let mut c = EdgeColouring::default();
    let mut traces = Vec::with_capacity(comps.len());
    for comp in &comps {
        let sub = g.induced_subgraph(comp)?;
        let (part, trace) = colour_component(&sub.graph, &lists.restrict(&sub))?;
        c.lift_into(&sub, &part);
        traces.push(lift_trace(&sub, trace));
    }
    c.check_lists(lists)?;
    certify(breaks_all_small(g, &c)?, "edge colouring")?;
    Ok((c, traces))
}

fn lift_trace(sub: &InducedSubgraph, t: CorrectionTrace) -> CorrectionTrace {
    CorrectionTrace {
        component: sub.to_old.clone(),
        root: t.root.map(|r| sub.to_old[r]),
        recoloured: t
            .recoloured
            .into_iter()
            .map(|rc| Recolouring {
                edge: sub.old_edge(rc.edge),
                ..rc
            })
            .collect(),
        ..t
    }
}

struct Roles {
    blue: Option<Colour>,
    red: Option<Colour>,
}

fn colour_component(h: &Graph, lists: &ListAssignment) -> Result<(EdgeColouring, CorrectionTrace)> {
    let mut trace = CorrectionTrace {
        component: (0..h.order()).collect(),
        root: None,
        branch: CorrectionBranch::None,
        attempted: None,
        fallback_reason: None,
        pink: None,
        blue: None,
        red: None,
        recoloured: Vec::new(),
    };
    if h.max_degree() <= 2 {
        return Ok((degree_le2_inner(h, lists)?, trace));
    }

    let r = (0..h.order()).find(|&v| h.degree(v) >= 3).unwrap();
    let pink = first_of(lists, h.incident_edges(r).next().unwrap())?;
    let lemma = lemma_inner(h, r, &lists.without_edge_colour(&pink))?;
    assert!(lemma.colours.values().all(|c| *c != pink));
    trace.root = Some(r);
    trace.pink = Some(pink.clone());

    let outcome = correct_root(h, r, lists, &lemma, &pink)?;
    let result = match outcome {
        Ok((branch, candidate, roles)) => {
            if branch != CorrectionBranch::None {
                let pinks = candidate.colours.values().filter(|c| **c == pink).count();
                assert_eq!(pinks, 1, "exactly one pink edge after {branch:?}");
            }
            if breaks_all_small(h, &candidate)?.ok {
                trace.branch = branch;
                trace.blue = roles.blue;
                trace.red = roles.red;
                Some(candidate)
            } else {
                trace.attempted = Some(branch);
                trace.fallback_reason = Some(format!("verifier rejected the {branch:?} correction"));
                None
            }
        }
        Err((branch, reason)) => {
            trace.attempted = Some(branch);
            trace.fallback_reason = Some(reason);
            None
        }
    };
    let colouring = match result {
        Some(c) => c,
        None => {
            warn!(
                "correction at root {r} fell back to search: {}",
                trace.fallback_reason.as_deref().unwrap_or("")
            );
            trace.branch = CorrectionBranch::VerifiedFallback;
            fallback(h, r, lists, &lemma)?
        }
    };
    for (&e, new) in &colouring.colours {
        let old = lemma.get(e).unwrap();
        if old != new {
            trace.recoloured.push(Recolouring {
                edge: e,
                old: old.clone(),
                new: new.clone(),
            });
        }
    }
    Ok((colouring, trace))
}

type Correction = std::result::Result<(CorrectionBranch, EdgeColouring, Roles), (CorrectionBranch, String)>;

/// Applies the first applicable correction step at the root. The inner error
/// names a branch whose move is not allowed by the lists.
fn correct_root(
    h: &Graph,
    r: usize,
    lists: &ListAssignment,
    lemma: &EdgeColouring,
    pink: &Colour,
) -> Result<Correction> {
    let no_roles = Roles { blue: None, red: None };
    if root_is_fixed(h, lemma, r)? {
        return Ok(Ok((CorrectionBranch::None, lemma.clone(), no_roles)));
    }
    let at_root: Vec<Edge> = h.incident_edges(r).collect();
    for &e in &at_root {
        if lists.edge_list(e)?.contains(pink) {
            let mut c = lemma.clone();
            c.set(e, pink.clone());
            if root_is_fixed(h, &c, r)? {
                return Ok(Ok((CorrectionBranch::SinglePink, c, no_roles)));
            }
        }
    }

    let colours_at_root: BTreeSet<&Colour> = at_root.iter().map(|&e| lemma.get(e).unwrap()).collect();
    if colours_at_root.len() == 1 {
        let branch = CorrectionBranch::MonochromeStar;
        let blue = (*colours_at_root.first().unwrap()).clone();
        let ex = at_root[0];
        if !lists.edge_list(ex)?.contains(pink) {
            return Ok(Err((branch, format!("pink not in the list of {ex}"))));
        }
        for &ey in &at_root[1..] {
            let red = lists.edge_list(ey)?.iter().find(|c| *c != pink && **c != blue);
            if let Some(red) = red {
                let mut c = lemma.clone();
                c.set(ex, pink.clone());
                c.set(ey, red.clone());
                let roles = Roles {
                    blue: Some(blue),
                    red: Some(red.clone()),
                };
                return Ok(Ok((branch, c, roles)));
            }
        }
        return Ok(Err((branch, "no edge at the root admits a third colour".into())));
    }

    let branch = CorrectionBranch::BichromaticSwap;
    let neighbourhood = neighbourhood_components(h, r)?;
    let mut legal = Vec::new();
    for &ex in &at_root {
        let cx = lemma.get(ex).unwrap();
        if !lists.edge_list(ex)?.contains(pink) {
            continue;
        }
        for &ey in &at_root {
            let cy = lemma.get(ey).unwrap();
            if cx != cy && lists.edge_list(ey)?.contains(cx) {
                legal.push((ex.other(r), ey.other(r)));
            }
        }
    }
    // prefer x, y in one orbit component with x its root
    let preferred = legal
        .iter()
        .filter(|&&(x, y)| {
            let (cx, cy) = (neighbourhood[x], neighbourhood[y]);
            cx.is_some() && cx == cy && cx.unwrap() == x
        })
        .min()
        .or_else(|| legal.iter().min());
    let Some(&(x, y)) = preferred else {
        return Ok(Err((branch, "no pair of root edges admits the swap".into())));
    };
    let (ex, ey) = (Edge::new(r, x), Edge::new(r, y));
    let red = lemma.get(ex).unwrap().clone();
    let mut c = lemma.clone();
    c.set(ey, red.clone());
    c.set(ex, pink.clone());
    let roles = Roles {
        blue: None,
        red: Some(red),
    };
    Ok(Ok((branch, c, roles)))
}

/// For each neighbour of `r`, the root (minimum vertex) of its component in
/// the subgraph induced by its stabilizer orbit; `None` for other vertices.
fn neighbourhood_components(h: &Graph, r: usize) -> Result<Vec<Option<usize>>> {
    let partition = vertex_orbits(h, r)?;
    let mut out = vec![None; h.order()];
    for (orbit, &d) in partition.orbits.iter().zip(&partition.distances) {
        if d != 1 {
            continue;
        }
        let within = h.induced_subgraph(orbit)?;
        for local in within.graph.connected_components() {
            let root = within.to_old[local[0]];
            for x in local {
                out[within.to_old[x]] = Some(root);
            }
        }
    }
    Ok(out)
}

/// Recolour at most two edges at the root, then exhaustive search.
fn fallback(h: &Graph, r: usize, lists: &ListAssignment, lemma: &EdgeColouring) -> Result<EdgeColouring> {
    let at_root: Vec<Edge> = h.incident_edges(r).collect();
    let options = |e: Edge| -> Result<Vec<Colour>> {
        let current = lemma.get(e).unwrap();
        Ok(lists.edge_list(e)?.iter().filter(|c| *c != current).cloned().collect())
    };
    for &e in &at_root {
        for t in options(e)? {
            let mut c = lemma.clone();
            c.set(e, t);
            if breaks_all_small(h, &c)?.ok {
                return Ok(c);
            }
        }
    }
    for (i, &e1) in at_root.iter().enumerate() {
        for &e2 in &at_root[i + 1..] {
            for t1 in options(e1)? {
                for t2 in options(e2)? {
                    let mut c = lemma.clone();
                    c.set(e1, t1.clone());
                    c.set(e2, t2);
                    if breaks_all_small(h, &c)?.ok {
                        return Ok(c);
                    }
                }
            }
        }
    }
    warn!("local search at root {r} failed; running exhaustive search");
    exists_breaking_colouring(h, lists, DEFAULT_BUDGET)?.ok_or_else(|| {
        Error::CertificationFailed("no list colouring of the component breaks its small automorphisms".into())
    })
}

/// Total colouring from lists of length at least two on every vertex and
/// edge, breaking every small automorphism of `g` (no `K2` component).
pub fn total_colouring(g: &Graph, lists: &ListAssignment) -> Result<TotalColouring> {
    lists.validate(g, 2, Some(2))?;
    let comps = reject_k2_components(g)?;
    let mut out = TotalColouring::default();
    for comp in &comps {
        let sub = g.induced_subgraph(comp)?;
        let local = lists.restrict(&sub);
        let edges = lemma_inner(&sub.graph, 0, &local)?;
        out.edges.lift_into(&sub, &edges);
        let root = comp[0];
        let root_colour = lists.vertex_list(root)?[0].clone();
        for &v in &comp[1..] {
            let colour = lists
                .vertex_list(v)?
                .iter()
                .find(|c| **c != root_colour)
                .expect("validated lists hold two distinct colours")
                .clone();
            out.vertices.insert(v, colour);
        }
        out.vertices.insert(root, root_colour);
        assert!(
            comp[1..].iter().all(|v| out.vertices[v] != out.vertices[&root]),
            "root colour unique in its component"
        );
    }
    out.check_lists(lists)?;
    certify(breaks_all_small_total(g, &out)?, "total colouring")?;
    Ok(out)
}
