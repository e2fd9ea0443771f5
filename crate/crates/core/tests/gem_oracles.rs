use petgraph::algo::is_isomorphic;
use petgraph::graph::UnGraph;
use qwalk_core::{
    bipartite_double_cover, build_gem, enumerate_rotation_systems, gem_quotient, Graph,
};

fn to_petgraph(g: &Graph) -> UnGraph<(), ()> {
    let mut pg = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..g.vertex_count()).map(|_| pg.add_node(())).collect();
    for (u, v) in g.edges() {
        pg.add_edge(nodes[u], nodes[v], ());
    }
    pg
}

fn cycle(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn prism_over(n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((n + i, n + (i + 1) % n));
        edges.push((i, n + i));
    }
    Graph::from_edges(2 * n, &edges).unwrap()
}

#[test]
fn the_c3_gem_is_isomorphic_to_the_hexagonal_prism() {
    let g = cycle(3);
    let rot = enumerate_rotation_systems(&g).next().unwrap();
    let gem = build_gem(&g, &rot).unwrap();
    assert!(is_isomorphic(
        &to_petgraph(gem.as_graph()),
        &to_petgraph(&prism_over(6)),
    ));
}

#[test]
fn c3_gem_quotients_include_the_triangular_prism() {
    let g = cycle(3);
    let rot = enumerate_rotation_systems(&g).next().unwrap();
    let gem = build_gem(&g, &rot).unwrap();
    let quotients = gem_quotient(&gem).unwrap();
    assert!(!quotients.is_empty());
    let prism = to_petgraph(&prism_over(3));
    let flag_graph = to_petgraph(gem.as_graph());
    let mut prism_seen = false;
    for (y, _) in &quotients {
        if is_isomorphic(&to_petgraph(y), &prism) {
            prism_seen = true;
        }
        let cover = bipartite_double_cover(y);
        assert!(is_isomorphic(&to_petgraph(&cover), &flag_graph));
    }
    assert!(prism_seen);
}

#[test]
fn gems_of_rotation_systems_are_always_bipartite() {
    let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    for rot in enumerate_rotation_systems(&g) {
        let gem = build_gem(&g, &rot).unwrap();
        assert!(gem.as_graph().bipartition().is_some());
    }
}
