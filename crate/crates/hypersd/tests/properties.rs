//! Randomized algebraic properties on bounded instances. Sizes stay small
//! so each case runs in microseconds; the structure of the inputs is still
//! arbitrary within the bounds.

use std::collections::BTreeSet;

use proptest::prelude::*;

use hypersd::chains::{
    embedded_complex, embedded_complex_in, embedded_homology, infimum_data,
    simplicial_chain_complex, CoefficientRing, HomologyGroup,
};
use hypersd::hypergraph::{
    simplicial_closure, Hypergraph, Simplex, SimplicialComplex, VertexMap,
};
use hypersd::subdivision::{flag_oracle, initial_elements, subdivide, subdivide_morphism};

fn mask_to_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn arb_hypergraph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_vertices).prop_flat_map(move |v| {
        let limit = ((1usize << v) - 1).min(max_edges);
        proptest::collection::btree_set(1u64..(1u64 << v), 1..=limit).prop_map(move |masks| {
            let edges: Vec<Vec<usize>> = masks.iter().map(|&m| mask_to_vertices(m)).collect();
            Hypergraph::from_edge_lists(v, &edges).expect("masks are valid edges")
        })
    })
}

/// Chains of simplices as descending masks: a top plus a sequence of
/// intersection seeds, keeping only proper nonempty steps.
fn arb_chain(max_vertices: usize) -> impl Strategy<Value = Vec<Simplex>> {
    (1..=max_vertices).prop_flat_map(move |v| {
        (
            1u64..(1u64 << v),
            proptest::collection::vec(any::<u64>(), 0..=max_vertices),
        )
            .prop_map(|(top, seeds)| {
                let mut masks = vec![top];
                let mut bottom = top;
                for seed in seeds {
                    if bottom.count_ones() <= 1 {
                        break;
                    }
                    let candidate = bottom & seed;
                    if candidate != 0 && candidate != bottom {
                        masks.push(candidate);
                        bottom = candidate;
                    }
                }
                masks.reverse();
                masks
                    .into_iter()
                    .map(|m| Simplex::new(mask_to_vertices(m)).expect("masks are nonempty"))
                    .collect()
            })
    })
}

fn groups_sig(groups: &[HomologyGroup]) -> Vec<(usize, usize, Vec<num_bigint::BigInt>)> {
    groups
        .iter()
        .map(|g| (g.dim, g.rank, g.torsion.clone()))
        .collect()
}

/// A vertex map injective on every hyperedge, found by greedy coloring of
/// the conflict graph. Needs one more color than the largest edge has
/// vertices beyond its first, which `target_count` of six always covers
/// for sources on at most six vertices.
fn edgewise_injective_map(h: &Hypergraph, target_count: usize, prefs: &[usize]) -> Vec<usize> {
    let v = h.vertex_count();
    let mut adjacent = vec![BTreeSet::new(); v];
    for e in h.edges() {
        for &a in e.vertices() {
            for &b in e.vertices() {
                if a != b {
                    adjacent[a].insert(b);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; v];
    for u in 0..v {
        let used: BTreeSet<usize> = adjacent[u]
            .iter()
            .filter(|&&w| map[w] != usize::MAX)
            .map(|&w| map[w])
            .collect();
        let pref = prefs[u % prefs.len()] % target_count;
        map[u] = if used.contains(&pref) {
            (0..target_count)
                .find(|c| !used.contains(c))
                .expect("the target leaves a free color")
        } else {
            pref
        };
    }
    map
}

/// The image of `h` under a raw vertex map, as edge masks on the target.
fn image_masks(h: &Hypergraph, map: &[usize]) -> BTreeSet<u64> {
    h.edges()
        .map(|e| e.vertices().iter().fold(0u64, |m, &u| m | 1 << map[u]))
        .collect()
}

fn hypergraph_from_masks(count: usize, masks: &BTreeSet<u64>) -> Hypergraph {
    let edges: Vec<Vec<usize>> = masks.iter().map(|&m| mask_to_vertices(m)).collect();
    Hypergraph::from_edge_lists(count, &edges).expect("masks are valid edges")
}

proptest! {
    #[test]
    fn closure_lists_every_nonempty_subset(h in arb_hypergraph(6, 10)) {
        let closure = simplicial_closure(&h);
        let mut expected = BTreeSet::new();
        for e in h.edges() {
            let vs = e.vertices();
            for mask in 1u64..(1 << vs.len()) {
                let subset: Vec<usize> = vs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                expected.insert(Simplex::new(subset).expect("subsets are simplices"));
            }
        }
        prop_assert_eq!(closure.edge_set(), &expected);
        let again = simplicial_closure(closure.as_hypergraph());
        prop_assert_eq!(again.edge_set(), &expected);
    }

    #[test]
    fn json_round_trips(h in arb_hypergraph(6, 10)) {
        let parsed = Hypergraph::from_json(&h.to_json()).expect("own output parses");
        prop_assert_eq!(parsed, h);
    }

    #[test]
    fn boundaries_square_to_zero(h in arb_hypergraph(5, 8)) {
        let closure = simplicial_closure(&h);
        let complex = simplicial_chain_complex(&closure, CoefficientRing::Integers);
        for n in 1..complex.dim_count() {
            prop_assert!(complex.boundary(n - 1).mul(complex.boundary(n)).is_zero());
        }
        let inf = infimum_data(&embedded_complex(&h, CoefficientRing::Integers)).complex;
        for n in 1..inf.dim_count() {
            prop_assert!(inf.boundary(n - 1).mul(inf.boundary(n)).is_zero());
        }
    }

    #[test]
    fn the_default_schedule_computes_the_flags(x in arb_chain(6)) {
        let fast = initial_elements(&x).expect("the chain is valid");
        let slow = flag_oracle(&x).expect("the chain is valid");
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn subdividing_the_identity_gives_the_identity(h in arb_hypergraph(5, 8)) {
        let sd_id = subdivide_morphism(&VertexMap::identity(&h)).expect("identities subdivide");
        let expected: Vec<usize> = (0..sd_id.source().vertex_count()).collect();
        prop_assert_eq!(sd_id.map(), &expected[..]);
        prop_assert_eq!(sd_id.source(), sd_id.target());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_commutes_with_subdivision(h in arb_hypergraph(5, 10)) {
        let sd_then_close = simplicial_closure(subdivide(&h).hypergraph()).into_hypergraph();
        let close_then_sd = subdivide(simplicial_closure(&h).as_hypergraph()).into_hypergraph();
        prop_assert_eq!(sd_then_close, close_then_sd);
    }

    #[test]
    fn subdivision_is_functorial_on_edgewise_injective_maps(
        a in arb_hypergraph(5, 6),
        prefs_f in proptest::collection::vec(0..6usize, 8),
        extra_b in proptest::collection::btree_set(1u64..(1u64 << 6), 0..=4),
        prefs_g in proptest::collection::vec(0..6usize, 8),
        extra_c in proptest::collection::btree_set(1u64..(1u64 << 6), 0..=4),
    ) {
        let f_map = edgewise_injective_map(&a, 6, &prefs_f);
        let mut b_masks = image_masks(&a, &f_map);
        b_masks.extend(extra_b);
        let b = hypergraph_from_masks(6, &b_masks);
        let f = VertexMap::new(a.clone(), b.clone(), f_map).expect("images are edges of b");

        let g_map = edgewise_injective_map(&b, 6, &prefs_g);
        let mut c_masks = image_masks(&b, &g_map);
        c_masks.extend(extra_c);
        let c = hypergraph_from_masks(6, &c_masks);
        let g = VertexMap::new(b, c, g_map).expect("images are edges of c");

        let gf = f.compose(&g).expect("the middle objects agree");
        let sd_f = subdivide_morphism(&f).expect("edgewise injective maps subdivide");
        let sd_g = subdivide_morphism(&g).expect("edgewise injective maps subdivide");
        let sd_gf = subdivide_morphism(&gf).expect("compositions stay edgewise injective");
        let composed = sd_f.compose(&sd_g).expect("subdivided middles agree");
        prop_assert_eq!(sd_gf.map(), composed.map());
        prop_assert_eq!(sd_gf.source(), composed.source());
        prop_assert_eq!(sd_gf.target(), composed.target());
    }

    #[test]
    fn homology_ignores_the_ambient_complex(
        h in arb_hypergraph(5, 8),
        extra in proptest::collection::btree_set(1u64..(1u64 << 5), 0..=4),
    ) {
        let v = h.vertex_count();
        let small = simplicial_closure(&h);
        let mut masks: BTreeSet<u64> = small
            .edge_set()
            .iter()
            .map(|e| e.vertices().iter().fold(0u64, |m, &u| m | 1 << u))
            .collect();
        for m in extra {
            let clipped = m & ((1 << v) - 1);
            if clipped == 0 {
                continue;
            }
            for sub in 1u64..=clipped {
                if sub & clipped == sub {
                    masks.insert(sub);
                }
            }
        }
        let ambient = SimplicialComplex::try_new(hypergraph_from_masks(v, &masks))
            .expect("a union of downward closed sets is a complex");

        for ring in [CoefficientRing::Integers, CoefficientRing::PrimeField(2)] {
            let direct = embedded_homology(&h, ring);
            let via_ambient = infimum_data(
                &embedded_complex_in(&h, &ambient, ring).expect("the ambient contains h"),
            )
            .complex
            .homology();
            let mut via_sig = groups_sig(&via_ambient);
            let direct_sig = groups_sig(&direct);
            while via_sig.len() > direct_sig.len() {
                let tail = via_sig.pop().expect("nonempty by the loop condition");
                prop_assert_eq!(tail.1, 0);
                prop_assert!(tail.2.is_empty());
            }
            prop_assert_eq!(via_sig, direct_sig);
        }
    }
}
