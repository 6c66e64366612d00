//! Enumeration and classification of small covers of the right-angled
//! dodecahedron and 120-cell.
//!
//! A small cover is determined by its characteristic function: a labeling of
//! the facets by nonzero vectors of `(Z_2)^n` such that the labels around
//! every vertex form a basis. This crate builds both polytopes exactly from
//! the Coxeter groups H3 and H4, enumerates normalized labelings by
//! backtracking, and sorts them into classes under the symmetry group and
//! `GL_n(Z_2)`, with stabilizers and isometry-group orders.
//!
//! ```no_run
//! use smallcovers::{build_regular, enumerate, Alphabet, PolytopeKind, SearchOptions, SymmetryGroup};
//!
//! let dodeca = build_regular(PolytopeKind::Dodecahedron).unwrap();
//! let found = enumerate(&dodeca.polytope, &Alphabet::full(3).unwrap(), SearchOptions::default()).unwrap();
//! let group = SymmetryGroup::new(&dodeca.polytope, dodeca.position_generators(), 1000).unwrap();
//! let classes = group.classify(&found.labelings).unwrap();
//! println!("{} labelings in {} classes", found.labelings.len(), classes.len());
//! ```

pub mod coxeter;
pub mod enumerate;
pub mod error;
pub mod gf2;
pub mod perm;
pub mod polytope;
pub mod quad;
pub mod symmetry;

pub use coxeter::{CoxeterDiagram, Geometry, Point};
pub use enumerate::{
    brute_force_enumerate, enumerate, forbidden_labels, is_characteristic, Alphabet, Enumeration,
    Labeling, SearchOptions,
};
pub use error::{EnumerateError, GeometryError, Gf2Error, PolytopeError, SymmetryError};
pub use gf2::{Label, LinearMap};
pub use perm::{group_closure, FacetPermutation, Permutation};
pub use polytope::{build_polytope, build_regular, CombPolytope, PolytopeKind, RegularPolytope};
pub use quad::QuadExt;
pub use symmetry::{
    act, orbits, restrict_labeling, stabilizer, EquivClass, Fingerprint, SymmetryGroup,
};
