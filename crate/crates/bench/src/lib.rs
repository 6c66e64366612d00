//! Shared fixtures for the benchmarks.

use std::sync::OnceLock;

use smallcovers::{build_regular, PolytopeKind, RegularPolytope};

pub fn dodecahedron() -> &'static RegularPolytope {
    static CELL: OnceLock<RegularPolytope> = OnceLock::new();
    CELL.get_or_init(|| build_regular(PolytopeKind::Dodecahedron).expect("dodecahedron builds"))
}

pub fn cell120() -> &'static RegularPolytope {
    static CELL: OnceLock<RegularPolytope> = OnceLock::new();
    CELL.get_or_init(|| build_regular(PolytopeKind::Cell120).expect("120-cell builds"))
}
