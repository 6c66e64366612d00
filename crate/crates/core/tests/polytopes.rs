use smallcovers::polytope::{
    clique_sets, deserialize, facet_polytope, find_isomorphism, serialize,
};
use smallcovers::{build_regular, PolytopeKind};

#[test]
fn builds_are_reproducible_and_serializable() {
    for kind in [PolytopeKind::Dodecahedron, PolytopeKind::Cell120] {
        let a = build_regular(kind).unwrap();
        let b = build_regular(kind).unwrap();
        assert_eq!(a.polytope, b.polytope);
        let text = serialize(&a.polytope).unwrap();
        assert_eq!(text, serialize(&b.polytope).unwrap());
        let back = deserialize(&text).unwrap();
        assert_eq!(back.adjacency(), a.polytope.adjacency());
        assert_eq!(back.vertices(), a.polytope.vertices());
        assert_eq!(back.facet_order(), a.polytope.facet_order());
        assert_eq!(back.barycenters(), a.polytope.barycenters());
    }
}

#[test]
fn incidence_double_counts() {
    for kind in [PolytopeKind::Dodecahedron, PolytopeKind::Cell120] {
        let p = build_regular(kind).unwrap().polytope;
        let n = p.dim();
        let from_facets: usize = (0..p.facet_count())
            .map(|f| p.facet_vertices(f).len())
            .sum();
        assert_eq!(from_facets, n * p.vertex_count());
        let degrees: usize = (0..p.facet_count()).map(|f| p.neighbors(f).len()).sum();
        assert_eq!(degrees, 2 * p.adjacency().len());
        assert_eq!(clique_sets(&p, n).len(), p.vertex_count());
    }
}

#[test]
fn generators_are_involutive_symmetries() {
    for kind in [PolytopeKind::Dodecahedron, PolytopeKind::Cell120] {
        let r = build_regular(kind).unwrap();
        for g in &r.generators {
            assert!(r.polytope.is_automorphism(g));
            assert!(g.compose(g).is_identity());
            assert!(!g.is_identity());
        }
    }
}

#[test]
fn facets_of_the_120_cell_are_dodecahedra() {
    let cell = build_regular(PolytopeKind::Cell120).unwrap().polytope;
    let dodeca = build_regular(PolytopeKind::Dodecahedron).unwrap().polytope;
    for facet in [0, 17, 119] {
        let (face, parents) = facet_polytope(&cell, facet).unwrap();
        assert_eq!(face.facet_count(), 12);
        assert_eq!(parents.len(), 12);
        assert!(parents.iter().all(|&q| cell.is_adjacent(facet, q)));
        assert!(find_isomorphism(&face, &dodeca).is_some());
    }
}
