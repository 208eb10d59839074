//! Certification of colourings against small automorphisms.
//!
//! The checks here walk the plain automorphism list of the whole graph and
//! test each element directly; they do not use the colour-aware search or the
//! per-component reduction the constructor relies on.

use serde::{Deserialize, Serialize};

use crate::automorphism::{
    colour_preserving_automorphisms, enumerate_automorphisms, is_small, stabilizer_automorphisms,
    Permutation,
};
use crate::colouring::{Colouring, EdgeColouring, TotalColouring};
use crate::error::Result;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifierReport {
    pub ok: bool,
    /// A small automorphism preserving the colouring, present iff `!ok`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Permutation>,
    /// Automorphisms examined before reaching the verdict.
    pub checked_count: usize,
}

/// Whether `phi` maps every coloured element onto one of the same colour.
pub fn preserves<C: Colouring + ?Sized>(g: &Graph, phi: &Permutation, c: &C) -> Result<bool> {
    c.check_complete(g)?;
    Ok(preserves_unchecked(g, phi, c))
}

fn preserves_unchecked<C: Colouring + ?Sized>(g: &Graph, phi: &Permutation, c: &C) -> bool {
    let edges_ok = g
        .edges()
        .into_iter()
        .all(|e| c.edge_colour(phi.map_edge(e)) == c.edge_colour(e));
    edges_ok
        && (!c.is_total()
            || (0..g.order()).all(|v| c.vertex_colour(phi.apply(v)) == c.vertex_colour(v)))
}

pub fn preserves_edge_colouring(g: &Graph, phi: &Permutation, c: &EdgeColouring) -> Result<bool> {
    preserves(g, phi, c)
}

pub fn preserves_total(g: &Graph, phi: &Permutation, c: &TotalColouring) -> Result<bool> {
    preserves(g, phi, c)
}

fn first_preserved_small<C: Colouring + ?Sized>(
    g: &Graph,
    group: Vec<Permutation>,
    c: &C,
) -> VerifierReport {
    let mut checked_count = 0;
    for phi in group {
        checked_count += 1;
        if is_small(g, &phi) && preserves_unchecked(g, &phi, c) {
            return VerifierReport {
                ok: false,
                witness: Some(phi),
                checked_count,
            };
        }
    }
    VerifierReport {
        ok: true,
        witness: None,
        checked_count,
    }
}

/// Checks every automorphism of `g`, including those exchanging components.
pub fn breaks_all_small_any<C: Colouring + ?Sized>(g: &Graph, c: &C) -> Result<VerifierReport> {
    c.check_complete(g)?;
    Ok(first_preserved_small(g, enumerate_automorphisms(g)?, c))
}

/// Checks the automorphisms of `g` that fix `r`.
pub fn breaks_all_small_rooted_any<C: Colouring + ?Sized>(
    g: &Graph,
    r: usize,
    c: &C,
) -> Result<VerifierReport> {
    c.check_complete(g)?;
    Ok(first_preserved_small(g, stabilizer_automorphisms(g, r)?, c))
}

pub fn breaks_all_small(g: &Graph, c: &EdgeColouring) -> Result<VerifierReport> {
    breaks_all_small_any(g, c)
}

pub fn breaks_all_small_rooted(g: &Graph, r: usize, c: &EdgeColouring) -> Result<VerifierReport> {
    breaks_all_small_rooted_any(g, r, c)
}

pub fn breaks_all_small_total(g: &Graph, c: &TotalColouring) -> Result<VerifierReport> {
    breaks_all_small_any(g, c)
}

pub fn breaks_all_small_rooted_total(
    g: &Graph,
    r: usize,
    c: &TotalColouring,
) -> Result<VerifierReport> {
    breaks_all_small_rooted_any(g, r, c)
}

/// Whether every automorphism preserving `c` fixes `r`.
pub fn root_is_fixed<C: Colouring + ?Sized>(g: &Graph, c: &C, r: usize) -> Result<bool> {
    g.check_vertex(r)?;
    Ok(colour_preserving_automorphisms(g, c)?
        .iter()
        .all(|phi| phi.apply(r) == r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::Colour;
    use crate::graph::Edge;

    fn colouring(pairs: &[((usize, usize), i64)]) -> EdgeColouring {
        pairs
            .iter()
            .map(|&((a, b), c)| (Edge::new(a, b), Colour::Int(c)))
            .collect()
    }

    #[test]
    fn preservation() {
        let k3 = Graph::complete(3);
        let c = colouring(&[((0, 1), 1), ((0, 2), 2), ((1, 2), 3)]);
        assert!(preserves_edge_colouring(&k3, &Permutation::identity(3), &c).unwrap());
        assert!(!preserves_edge_colouring(&k3, &Permutation::transposition(3, 1, 2), &c).unwrap());
        let c4 = Graph::cycle(4);
        let alt = colouring(&[((0, 1), 1), ((2, 3), 1), ((1, 2), 2), ((0, 3), 2)]);
        let rot2 = Permutation::new(vec![2, 3, 0, 1]).unwrap();
        assert!(preserves_edge_colouring(&c4, &rot2, &alt).unwrap());
        let partial = colouring(&[((0, 1), 1)]);
        assert!(preserves_edge_colouring(&c4, &rot2, &partial).is_err());
    }

    #[test]
    fn global_reports() {
        let p3 = Graph::path(3);
        assert!(breaks_all_small(&p3, &EdgeColouring::constant(&p3, 1.into())).unwrap().ok);

        let k3 = Graph::complete(3);
        let report = breaks_all_small(&k3, &EdgeColouring::constant(&k3, 1.into())).unwrap();
        assert!(!report.ok);
        let w = report.witness.unwrap();
        // first small element in lexicographic order is the swap of 1 and 2
        assert_eq!(w, Permutation::transposition(3, 1, 2));
        assert_eq!(report.checked_count, 2);

        let rainbow = colouring(&[((0, 1), 1), ((0, 2), 2), ((1, 2), 3)]);
        let report = breaks_all_small(&k3, &rainbow).unwrap();
        assert!(report.ok);
        assert_eq!(report.checked_count, 6);
        assert!(report.witness.is_none());
    }

    #[test]
    fn rooted_reports() {
        let c4 = Graph::cycle(4);
        assert!(breaks_all_small_rooted(&c4, 0, &EdgeColouring::constant(&c4, 1.into())).unwrap().ok);

        let c5 = Graph::cycle(5);
        let report =
            breaks_all_small_rooted(&c5, 0, &EdgeColouring::constant(&c5, 1.into())).unwrap();
        assert!(!report.ok);
        assert_eq!(report.witness.unwrap().image(), &[0, 4, 3, 2, 1]);

        let mut c = EdgeColouring::constant(&c5, 1.into());
        c.set(Edge::new(0, 4), 2.into());
        assert!(breaks_all_small_rooted(&c5, 0, &c).unwrap().ok);
    }

    #[test]
    fn root_fixing() {
        // K_{1,3} plus a pendant path on one leaf: the centre has three
        // distinct incident colours.
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let c = colouring(&[((0, 1), 1), ((0, 2), 2), ((0, 3), 3), ((3, 4), 1)]);
        assert!(root_is_fixed(&g, &c, 0).unwrap());

        let k3 = Graph::complete(3);
        let constant = EdgeColouring::constant(&k3, 1.into());
        assert!((0..3).all(|r| !root_is_fixed(&k3, &constant, r).unwrap()));

        // asymmetric graph on 6 vertices
        let asym = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4), (1, 5), (4, 5)])
            .unwrap();
        assert_eq!(enumerate_automorphisms(&asym).unwrap().len(), 1);
        let c = EdgeColouring::constant(&asym, 1.into());
        assert!((0..6).all(|r| root_is_fixed(&asym, &c, r).unwrap()));
    }

    #[test]
    fn total_reports() {
        let k3 = Graph::complete(3);
        let unique_root = TotalColouring {
            edges: EdgeColouring::constant(&k3, 1.into()),
            vertices: [(0, 1.into()), (1, 2.into()), (2, 2.into())].into(),
        };
        let preserved = colour_preserving_automorphisms(&k3, &unique_root).unwrap();
        assert!(preserved.iter().all(|phi| phi.apply(0) == 0));

        let flat = TotalColouring {
            edges: EdgeColouring::constant(&k3, 1.into()),
            vertices: (0..3).map(|v| (v, 1.into())).collect(),
        };
        assert!(!breaks_all_small_total(&k3, &flat).unwrap().ok);

        let mut edges = EdgeColouring::constant(&k3, 1.into());
        edges.set(Edge::new(0, 2), 2.into());
        let good = TotalColouring {
            edges,
            vertices: unique_root.vertices.clone(),
        };
        let report = breaks_all_small_total(&k3, &good).unwrap();
        assert!(report.ok, "{report:?}");
        assert!(preserves_total(&k3, &Permutation::identity(3), &good).unwrap());
    }

    #[test]
    fn witness_is_sound() {
        for n in 3..=5usize {
            let pairs = n * (n - 1) / 2;
            for mask in (0..1u64 << pairs).step_by(5) {
                let g = Graph::from_upper_triangle_mask(n, mask);
                let c: EdgeColouring = g
                    .edges()
                    .into_iter()
                    .enumerate()
                    .map(|(i, e)| (e, Colour::Int((i % 2) as i64)))
                    .collect();
                let report = breaks_all_small(&g, &c).unwrap();
                if let Some(w) = &report.witness {
                    assert!(!report.ok);
                    assert!(is_small(&g, w));
                    assert!(preserves_edge_colouring(&g, w, &c).unwrap());
                } else {
                    assert!(report.ok);
                }
            }
        }
    }

    #[test]
    fn report_json() {
        let r = VerifierReport {
            ok: true,
            witness: None,
            checked_count: 6,
        };
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"ok":true,"checked_count":6}"#);
        let r = VerifierReport {
            ok: false,
            witness: Some(Permutation::transposition(3, 1, 2)),
            checked_count: 2,
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"ok":false,"witness":[0,2,1],"checked_count":2}"#
        );
    }
}
