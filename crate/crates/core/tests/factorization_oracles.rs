use qwalk_core::{
    bipartite_double_cover, enumerate_shunt_decompositions, is_symmetric, Graph,
};

fn k3() -> Graph {
    Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
}

fn k4() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

fn k33() -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
    Graph::from_edges(6, &edges).unwrap()
}

fn prism() -> Graph {
    Graph::from_edges(
        6,
        &[(0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5), (0, 3), (1, 4), (2, 5)],
    )
    .unwrap()
}

fn q3() -> Graph {
    let edges: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (0..4).filter(move |&j| j != 3 - i).map(move |j| (i, 4 + j)))
        .collect();
    Graph::from_edges(8, &edges).unwrap()
}

/// All perfect matchings of the double cover, found by walking permutations of
/// the second copy: vertex u of the first copy pairs with sigma(u) + n.
fn double_cover_matchings(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.vertex_count();
    let cover = bipartite_double_cover(g);
    let mut matchings = Vec::new();
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        u: usize,
        n: usize,
        cover: &Graph,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if u == n {
            out.push((0..n).map(|v| (v, n + sigma[v])).collect());
            return;
        }
        for w in 0..n {
            if !used[w] && cover.has_edge(u, n + w) {
                sigma[u] = w;
                used[w] = true;
                extend(u + 1, n, cover, sigma, used, out);
                used[w] = false;
            }
        }
    }
    extend(0, n, &cover, &mut sigma, &mut used, &mut matchings);
    matchings
}

/// Unordered partitions of the double cover's edges into perfect matchings,
/// counted as index-increasing combinations of pairwise disjoint matchings.
fn count_one_factorizations(g: &Graph) -> usize {
    let matchings = double_cover_matchings(g);
    let d = g.regular_degree().unwrap();
    let mut chosen: Vec<usize> = Vec::new();
    fn disjoint(a: &[(usize, usize)], b: &[(usize, usize)]) -> bool {
        a.iter().all(|ea| !b.contains(ea))
    }
    fn search(
        matchings: &[Vec<(usize, usize)>],
        chosen: &mut Vec<usize>,
        d: usize,
        count: &mut usize,
    ) {
        if chosen.len() == d {
            *count += 1;
            return;
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        for i in start..matchings.len() {
            if chosen.iter().all(|&j| disjoint(&matchings[i], &matchings[j])) {
                chosen.push(i);
                search(matchings, chosen, d, count);
                chosen.pop();
            }
        }
    }
    let mut count = 0;
    search(&matchings, &mut chosen, d, &mut count);
    count
}

#[test]
fn decomposition_counts_match_double_cover_factorizations() {
    for g in [k3(), k4(), prism()] {
        let decs = enumerate_shunt_decompositions(&g).unwrap();
        assert_eq!(decs.len(), count_one_factorizations(&g));
    }
}

#[test]
fn k33_and_q3_enumerations_contain_symmetric_decompositions() {
    for g in [k33(), q3()] {
        let decs = enumerate_shunt_decompositions(&g).unwrap();
        assert!(decs.iter().any(is_symmetric));
    }
}

#[test]
fn every_enumerated_shunt_is_a_derangement_onto_neighbors() {
    let g = prism();
    for dec in enumerate_shunt_decompositions(&g).unwrap() {
        let mut seen_arcs = std::collections::HashSet::new();
        for j in 0..dec.shunt_count() {
            for (u, &v) in dec.shunt(j).iter().enumerate() {
                assert_ne!(v, u);
                assert!(g.has_edge(u, v));
                assert!(seen_arcs.insert((u, v)));
            }
        }
        assert_eq!(seen_arcs.len(), 2 * g.edge_count());
    }
}
