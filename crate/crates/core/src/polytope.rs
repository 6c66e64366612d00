//! Combinatorial model of a simple polytope: facets, ridges and vertices.
//!
//! The two regular right-angled cases are built from Coxeter orbits. Facet
//! barycenters are the orbit of `(2,0,..,0)`, vertices the orbit of
//! `(0,..,0,1)`. Two facets are adjacent when their barycenters attain the
//! largest inner product over distinct pairs, and a vertex lies on the `n`
//! facets whose barycenters have the largest inner product with it. Every
//! count is checked against the known f-vector before the model is returned.
//!
//! Other polytopes (polygons for small oracle runs, facet polytopes) are
//! loaded from JSON or assembled with [`CombPolytope::from_parts`].

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coxeter::{self, CoxeterDiagram, Geometry, Point};
use crate::error::PolytopeError;
use crate::perm::{group_closure, Permutation};
use crate::quad::{integral_rows, IntSurd, QuadExt};
use num_traits::Zero;

const ORBIT_BOUND: usize = 20_000;
const GROUP_BOUND: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolytopeKind {
    Dodecahedron,
    Cell120,
}

impl PolytopeKind {
    pub fn name(self) -> &'static str {
        match self {
            PolytopeKind::Dodecahedron => "dodecahedron",
            PolytopeKind::Cell120 => "120cell",
        }
    }

    pub fn diagram(self) -> CoxeterDiagram {
        match self {
            PolytopeKind::Dodecahedron => CoxeterDiagram::h3(),
            PolytopeKind::Cell120 => CoxeterDiagram::h4(),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            PolytopeKind::Dodecahedron => 3,
            PolytopeKind::Cell120 => 4,
        }
    }

    /// Expected counts: facets, ridges, vertices, neighbors per facet,
    /// vertices per facet, vertices per ridge.
    fn f_vector(self) -> FVector {
        match self {
            PolytopeKind::Dodecahedron => FVector {
                facets: 12,
                ridges: 30,
                vertices: 20,
                neighbors_per_facet: 5,
                vertices_per_facet: 5,
                vertices_per_ridge: 2,
            },
            PolytopeKind::Cell120 => FVector {
                facets: 120,
                ridges: 720,
                vertices: 600,
                neighbors_per_facet: 12,
                vertices_per_facet: 20,
                vertices_per_ridge: 5,
            },
        }
    }
}

impl fmt::Display for PolytopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolytopeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dodecahedron" => Ok(PolytopeKind::Dodecahedron),
            "120cell" | "120-cell" | "cell120" => Ok(PolytopeKind::Cell120),
            other => Err(format!("unknown polytope {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FVector {
    pub facets: usize,
    pub ridges: usize,
    pub vertices: usize,
    pub neighbors_per_facet: usize,
    pub vertices_per_facet: usize,
    pub vertices_per_ridge: usize,
}

/// A simple polytope described by its facets, ridges and vertices.
///
/// Facets are identified by `0..d`. `facet_order` lists facet ids in
/// enumeration order; labelings are indexed by position in that order, so
/// position `i` holds the label of `F_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombPolytope {
    name: String,
    dim: usize,
    barycenters: Vec<Option<Point>>,
    adjacency: Vec<(usize, usize)>,
    vertices: Vec<Vec<usize>>,
    facet_order: Vec<usize>,
    // derived
    neighbors: Vec<Vec<usize>>,
    facet_vertices: Vec<Vec<usize>>,
    positions: Vec<usize>,
}

impl CombPolytope {
    /// Assembles a polytope and checks every invariant.
    pub fn from_parts(
        name: impl Into<String>,
        dim: usize,
        barycenters: Vec<Option<Point>>,
        adjacency: Vec<(usize, usize)>,
        vertices: Vec<Vec<usize>>,
        facet_order: Option<Vec<usize>>,
    ) -> Result<Self, PolytopeError> {
        let mut p = Self::assemble(name.into(), dim, barycenters, adjacency, vertices)?;
        let order = match facet_order {
            Some(order) => order,
            None => choose_facet_order(&p, 0),
        };
        p.set_facet_order(order)?;
        let violations = validate(&p);
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(PolytopeError::ValidationFailure(violations))
        }
    }

    /// Normalizes the raw data and fills the derived tables. Only range errors
    /// are reported here; everything else is left for [`validate`].
    fn assemble(
        name: String,
        dim: usize,
        barycenters: Vec<Option<Point>>,
        adjacency: Vec<(usize, usize)>,
        vertices: Vec<Vec<usize>>,
    ) -> Result<Self, PolytopeError> {
        let d = barycenters.len();
        if dim == 0 {
            return Err(PolytopeError::DimensionMismatch(
                "dimension must be positive".into(),
            ));
        }
        for b in barycenters.iter().flatten() {
            if b.dim() != dim {
                return Err(PolytopeError::DimensionMismatch(format!(
                    "barycenter {b} does not have {dim} coordinates"
                )));
            }
        }
        let mut pairs = BTreeSet::new();
        for &(i, j) in &adjacency {
            if i >= d || j >= d {
                return Err(PolytopeError::Malformed(format!(
                    "adjacency ({i},{j}) out of range"
                )));
            }
            pairs.insert((i.min(j), i.max(j)));
        }
        let mut neighbors = vec![Vec::new(); d];
        for &(i, j) in &pairs {
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let mut facet_vertices = vec![Vec::new(); d];
        let mut sorted_vertices = Vec::with_capacity(vertices.len());
        for (v, set) in vertices.into_iter().enumerate() {
            let mut set = set;
            set.sort_unstable();
            for &f in &set {
                if f >= d {
                    return Err(PolytopeError::Malformed(format!(
                        "vertex {v} names facet {f} out of range"
                    )));
                }
                if facet_vertices[f].last() != Some(&v) {
                    facet_vertices[f].push(v);
                }
            }
            sorted_vertices.push(set);
        }
        Ok(CombPolytope {
            name,
            dim,
            barycenters,
            adjacency: pairs.into_iter().collect(),
            vertices: sorted_vertices,
            facet_order: (0..d).collect(),
            neighbors,
            facet_vertices,
            positions: (0..d).collect(),
        })
    }

    fn set_facet_order(&mut self, order: Vec<usize>) -> Result<(), PolytopeError> {
        let d = self.facet_count();
        let mut positions = vec![usize::MAX; d];
        if order.len() != d {
            return Err(PolytopeError::Malformed(format!(
                "facet order has {} entries, expected {d}",
                order.len()
            )));
        }
        for (pos, &f) in order.iter().enumerate() {
            if f >= d || positions[f] != usize::MAX {
                return Err(PolytopeError::Malformed(
                    "facet order is not a permutation".into(),
                ));
            }
            positions[f] = pos;
        }
        self.facet_order = order;
        self.positions = positions;
        Ok(())
    }

    /// Replaces the facet order, re-checking the first-`n` condition.
    pub fn with_facet_order(&self, order: Vec<usize>) -> Result<Self, PolytopeError> {
        let mut p = self.clone();
        p.set_facet_order(order)?;
        let violations = validate(&p);
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(PolytopeError::ValidationFailure(violations))
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.barycenters.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn barycenter(&self, facet: usize) -> Option<&Point> {
        self.barycenters[facet].as_ref()
    }

    pub fn barycenters(&self) -> &[Option<Point>] {
        &self.barycenters
    }

    pub fn adjacency(&self) -> &[(usize, usize)] {
        &self.adjacency
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn neighbors(&self, facet: usize) -> &[usize] {
        &self.neighbors[facet]
    }

    pub fn facet_vertices(&self, facet: usize) -> &[usize] {
        &self.facet_vertices[facet]
    }

    pub fn is_adjacent(&self, f: usize, g: usize) -> bool {
        self.neighbors[f].binary_search(&g).is_ok()
    }

    pub fn facet_order(&self) -> &[usize] {
        &self.facet_order
    }

    /// Facet id of `F_{pos+1}`.
    pub fn facet_at(&self, pos: usize) -> usize {
        self.facet_order[pos]
    }

    /// Position of a facet id in the enumeration order.
    pub fn position_of(&self, facet: usize) -> usize {
        self.positions[facet]
    }

    /// Vertex sets expressed in positions instead of facet ids.
    pub fn vertex_positions(&self) -> Vec<Vec<usize>> {
        self.vertices
            .iter()
            .map(|set| {
                let mut s: Vec<usize> = set.iter().map(|&f| self.positions[f]).collect();
                s.sort_unstable();
                s
            })
            .collect()
    }

    /// Converts a symmetry acting on facet ids into one acting on positions,
    /// such that position `i` is sent to the position of `σ(F_{i+1})`.
    pub fn to_positions(&self, sigma: &Permutation) -> Permutation {
        let images = self
            .facet_order
            .iter()
            .map(|&f| self.positions[sigma.apply(f)] as u32)
            .collect();
        Permutation::from_images(images).expect("conjugate of a permutation")
    }

    /// True iff `sigma` (on facet ids) preserves adjacency and vertex sets.
    pub fn is_automorphism(&self, sigma: &Permutation) -> bool {
        if sigma.degree() != self.facet_count() {
            return false;
        }
        let pairs: BTreeSet<(usize, usize)> = self.adjacency.iter().copied().collect();
        let adjacency_ok = self.adjacency.iter().all(|&(i, j)| {
            let (a, b) = (sigma.apply(i), sigma.apply(j));
            pairs.contains(&(a.min(b), a.max(b)))
        });
        let sets: BTreeSet<&Vec<usize>> = self.vertices.iter().collect();
        adjacency_ok
            && self.vertices.iter().all(|set| {
                let mut image: Vec<usize> = set.iter().map(|&f| sigma.apply(f)).collect();
                image.sort_unstable();
                sets.contains(&image)
            })
    }
}

/// Re-checks every invariant. An empty list means the polytope is valid.
pub fn validate(p: &CombPolytope) -> Vec<String> {
    let mut violations = Vec::new();
    let n = p.dim;
    let d = p.facet_count();
    for (v, set) in p.vertices.iter().enumerate() {
        let distinct: BTreeSet<_> = set.iter().collect();
        if set.len() != n || distinct.len() != n {
            violations.push(format!(
                "vertex {v} lies in {} distinct facets, expected {n}",
                distinct.len()
            ));
        }
        for (a, &f) in set.iter().enumerate() {
            for &g in &set[a + 1..] {
                if f != g && !p.is_adjacent(f, g) {
                    violations.push(format!(
                        "facets {f} and {g} share vertex {v} but are not adjacent"
                    ));
                }
            }
        }
    }
    let distinct_sets: BTreeSet<_> = p.vertices.iter().collect();
    if distinct_sets.len() != p.vertices.len() {
        violations.push("two vertices have the same facet set".into());
    }
    for &(i, j) in &p.adjacency {
        if i == j {
            violations.push(format!("facet {i} is adjacent to itself"));
        }
    }
    // for a simple polytope two facets are adjacent iff they share a vertex
    for f in 0..d {
        let covertex: BTreeSet<usize> = p.facet_vertices[f]
            .iter()
            .flat_map(|&v| p.vertices[v].iter().copied())
            .filter(|&g| g != f)
            .collect();
        if covertex.len() != p.neighbors[f].len() {
            violations.push(format!(
                "facet {f} has {} neighbors but shares vertices with {} facets",
                p.neighbors[f].len(),
                covertex.len()
            ));
        }
        if p.facet_vertices[f].is_empty() {
            violations.push(format!("facet {f} has no vertices"));
        }
    }
    if d >= n && !p.facet_order.is_empty() {
        let first: Vec<usize> = p.facet_order[..n].to_vec();
        let shares_vertex = p
            .vertices
            .iter()
            .any(|set| first.iter().all(|f| set.contains(f)));
        if !shares_vertex {
            violations.push(format!(
                "the first {n} facets in the order {first:?} do not meet at a vertex"
            ));
        }
    } else {
        violations.push(format!(
            "polytope has {d} facets, fewer than its dimension {n}"
        ));
    }
    violations
}

fn check_f_vector(p: &CombPolytope, expected: FVector) -> Vec<String> {
    let mut violations = Vec::new();
    let mut expect = |what: &str, got: usize, want: usize| {
        if got != want {
            violations.push(format!("{what}: got {got}, expected {want}"));
        }
    };
    expect("facet count", p.facet_count(), expected.facets);
    expect("ridge count", p.adjacency.len(), expected.ridges);
    expect("vertex count", p.vertex_count(), expected.vertices);
    for f in 0..p.facet_count() {
        expect(
            &format!("neighbors of facet {f}"),
            p.neighbors[f].len(),
            expected.neighbors_per_facet,
        );
        expect(
            &format!("vertices of facet {f}"),
            p.facet_vertices[f].len(),
            expected.vertices_per_facet,
        );
    }
    for &(i, j) in &p.adjacency {
        let shared = p.facet_vertices[i]
            .iter()
            .filter(|v| p.facet_vertices[j].binary_search(v).is_ok())
            .count();
        expect(
            &format!("vertices shared by facets {i} and {j}"),
            shared,
            expected.vertices_per_ridge,
        );
    }
    let cliques = clique_sets(p, p.dim);
    let vertex_sets: BTreeSet<Vec<usize>> = p.vertices.iter().cloned().collect();
    if cliques != vertex_sets {
        violations.push(format!(
            "{}-cliques of the adjacency graph ({}) differ from the vertex sets ({})",
            p.dim,
            cliques.len(),
            vertex_sets.len()
        ));
    }
    violations
}

/// All `k`-cliques of the facet adjacency graph, as sorted facet sets.
pub fn clique_sets(p: &CombPolytope, k: usize) -> BTreeSet<Vec<usize>> {
    fn extend(
        p: &CombPolytope,
        k: usize,
        current: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if current.len() == k {
            out.insert(current.clone());
            return;
        }
        let last = *current.last().expect("nonempty");
        for &g in p.neighbors(last) {
            if g > last && current.iter().all(|&f| p.is_adjacent(f, g)) {
                current.push(g);
                extend(p, k, current, out);
                current.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    if k == 0 {
        return out;
    }
    for f in 0..p.facet_count() {
        let mut current = vec![f];
        extend(p, k, &mut current, &mut out);
    }
    out
}

/// Enumeration order: `first`, then the remaining facets of the
/// lexicographically smallest vertex containing it, then breadth-first over
/// adjacency with neighbors visited in id order.
pub fn choose_facet_order(p: &CombPolytope, first: usize) -> Vec<usize> {
    let d = p.facet_count();
    if d == 0 {
        return Vec::new();
    }
    let first = first.min(d - 1);
    let mut order = vec![first];
    let mut placed = vec![false; d];
    placed[first] = true;
    if let Some(vertex) = p.facet_vertices[first]
        .iter()
        .map(|&v| &p.vertices[v])
        .min()
    {
        for &f in vertex {
            if !placed[f] {
                placed[f] = true;
                order.push(f);
            }
        }
    }
    let mut queue: VecDeque<usize> = order.iter().copied().collect();
    while let Some(f) = queue.pop_front() {
        for &g in &p.neighbors[f] {
            if !placed[g] {
                placed[g] = true;
                order.push(g);
                queue.push_back(g);
            }
        }
    }
    // disconnected leftovers, if any, in id order
    order.extend((0..d).filter(|&f| !placed[f]));
    order
}

/// A regular polytope with its Coxeter geometry and the facet permutations
/// induced by the generators.
#[derive(Clone, Debug)]
pub struct RegularPolytope {
    pub kind: PolytopeKind,
    pub geometry: Geometry,
    pub polytope: CombPolytope,
    pub vertex_points: Vec<Point>,
    /// One permutation of facet ids per diagram generator.
    pub generators: Vec<Permutation>,
}

impl RegularPolytope {
    /// Generator permutations acting on positions (see
    /// [`CombPolytope::to_positions`]).
    pub fn position_generators(&self) -> Vec<Permutation> {
        self.generators
            .iter()
            .map(|g| self.polytope.to_positions(g))
            .collect()
    }

    /// Position-space permutations for the named diagram generators.
    pub fn generators_named(&self, names: &[&str]) -> Vec<Permutation> {
        names
            .iter()
            .filter_map(|name| self.geometry.diagram.index_of(name))
            .map(|i| self.polytope.to_positions(&self.generators[i]))
            .collect()
    }

    /// The full symmetry group acting on positions.
    pub fn symmetry_group(&self) -> Result<Vec<Permutation>, PolytopeError> {
        Ok(group_closure(
            &self.position_generators(),
            self.polytope.facet_count(),
            GROUP_BOUND,
        )?)
    }
}

/// Builds one of the two regular right-angled polytopes.
pub fn build_polytope(kind: PolytopeKind) -> Result<CombPolytope, PolytopeError> {
    Ok(build_regular(kind)?.polytope)
}

/// Adjacent pairs (maximal facet-facet inner product) and, per vertex, the
/// facets of maximal inner product with it.
fn incidence<T: Ord>(
    facets: usize,
    vertex_count: usize,
    facet_ip: impl Fn(usize, usize) -> T,
    vertex_ip: impl Fn(usize, usize) -> T,
) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let mut best: Option<T> = None;
    let mut adjacency = Vec::new();
    for i in 0..facets {
        for j in i + 1..facets {
            let ip = facet_ip(i, j);
            match &best {
                Some(b) if ip < *b => {}
                Some(b) if ip == *b => adjacency.push((i, j)),
                _ => {
                    best = Some(ip);
                    adjacency.clear();
                    adjacency.push((i, j));
                }
            }
        }
    }
    let vertices = (0..vertex_count)
        .map(|v| {
            let products: Vec<T> = (0..facets).map(|f| vertex_ip(v, f)).collect();
            match products.iter().max() {
                Some(max) => (0..facets).filter(|&f| products[f] == *max).collect(),
                None => Vec::new(),
            }
        })
        .collect();
    (adjacency, vertices)
}

pub fn build_regular(kind: PolytopeKind) -> Result<RegularPolytope, PolytopeError> {
    let geometry = Geometry::new(kind.diagram())?;
    if kind == PolytopeKind::Cell120 {
        coxeter::check_h4_orientation(&geometry)?;
    }
    let n = kind.dim();
    let mut seed_coords = vec![0i64; n];
    seed_coords[0] = 2;
    let seed = Point::from_ints(&seed_coords);
    let mut vertex_coords = vec![0i64; n];
    vertex_coords[n - 1] = 1;
    let vertex_seed = Point::from_ints(&vertex_coords);

    let barycenters = geometry.orbit(&seed, ORBIT_BOUND)?;
    let vertex_points = geometry.orbit(&vertex_seed, ORBIT_BOUND)?;
    let d = barycenters.len();

    // B⁻¹c for each barycenter c, so inner products become plain dot products
    let duals: Vec<Point> = barycenters
        .iter()
        .map(|c| coxeter::transform(&geometry.gram_inv, c))
        .collect();
    let coords = |points: &[Point]| -> Option<Vec<Vec<(i64, i64)>>> {
        integral_rows(&points.iter().map(Point::coords).collect::<Vec<_>>())
    };
    let (adjacency, vertices) = match (coords(&barycenters), coords(&duals), coords(&vertex_points))
    {
        (Some(bary), Some(dual), Some(vert)) => incidence(
            d,
            vert.len(),
            |i, j| IntSurd::dot(&bary[i], &dual[j]),
            |v, f| IntSurd::dot(&vert[v], &dual[f]),
        ),
        _ => {
            let dot = |p: &Point, q: &Point| -> QuadExt {
                p.coords()
                    .iter()
                    .zip(q.coords())
                    .fold(QuadExt::zero(), |acc, (x, y)| &acc + &(x * y))
            };
            incidence(
                d,
                vertex_points.len(),
                |i, j| dot(&barycenters[i], &duals[j]),
                |v, f| dot(&vertex_points[v], &duals[f]),
            )
        }
    };
    let violations: Vec<String> = vertices
        .iter()
        .enumerate()
        .filter(|(_, set)| set.len() != n)
        .map(|(v, set)| {
            format!(
                "vertex {v} is nearest to {} facets, expected {n}",
                set.len()
            )
        })
        .collect();
    if !violations.is_empty() {
        return Err(PolytopeError::ValidationFailure(violations));
    }

    let index = coxeter::orbit_index(&barycenters);
    let generators = (0..geometry.rank())
        .map(|i| coxeter::generator_permutation(i, &barycenters, &index, &geometry.gram))
        .collect::<Result<Vec<_>, _>>()?;
    let seed_facet = index[&seed];

    let mut polytope = CombPolytope::assemble(
        kind.name().to_string(),
        n,
        barycenters.into_iter().map(Some).collect(),
        adjacency,
        vertices,
    )?;
    let order = choose_facet_order(&polytope, seed_facet);
    polytope.set_facet_order(order)?;

    let mut violations = validate(&polytope);
    violations.extend(check_f_vector(&polytope, kind.f_vector()));
    for (i, g) in generators.iter().enumerate() {
        if !polytope.is_automorphism(g) {
            violations.push(format!(
                "generator {} is not a combinatorial symmetry",
                geometry.diagram.names()[i]
            ));
        }
    }
    if !violations.is_empty() {
        return Err(PolytopeError::ValidationFailure(violations));
    }
    Ok(RegularPolytope {
        kind,
        geometry,
        polytope,
        vertex_points,
        generators,
    })
}

/// The facet `F` viewed as a polytope of dimension `n - 1`.
///
/// Its facets are the neighbors of `F`, numbered by their position in the
/// parent's enumeration order; its vertices are the parent vertices on `F`
/// with `F` removed. Returns the polytope and, for each of its facet ids, the
/// parent facet id.
pub fn facet_polytope(
    p: &CombPolytope,
    facet: usize,
) -> Result<(CombPolytope, Vec<usize>), PolytopeError> {
    if facet >= p.facet_count() {
        return Err(PolytopeError::Malformed(format!(
            "facet {facet} out of range"
        )));
    }
    if p.dim < 2 {
        return Err(PolytopeError::DimensionMismatch(
            "facets of a polygon have no facets".into(),
        ));
    }
    let mut parent_ids: Vec<usize> = p.neighbors[facet].clone();
    parent_ids.sort_by_key(|&g| p.positions[g]);
    let local: HashMap<usize, usize> = parent_ids
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, i))
        .collect();
    let vertices: Vec<Vec<usize>> = p.facet_vertices[facet]
        .iter()
        .map(|&v| {
            p.vertices[v]
                .iter()
                .filter(|&&g| g != facet)
                .map(|g| local[g])
                .collect()
        })
        .collect();
    let mut adjacency = BTreeSet::new();
    for set in &vertices {
        for (a, &x) in set.iter().enumerate() {
            for &y in &set[a + 1..] {
                adjacency.insert((x.min(y), x.max(y)));
            }
        }
    }
    let sub = CombPolytope::from_parts(
        format!("{}:facet{}", p.name, p.positions[facet] + 1),
        p.dim - 1,
        vec![None; parent_ids.len()],
        adjacency.into_iter().collect(),
        vertices,
        None,
    )?;
    Ok((sub, parent_ids))
}

/// Backtracking search for facet bijections `from -> to` that preserve
/// adjacency and vertex sets. Stops after `limit` results.
pub fn isomorphisms(from: &CombPolytope, to: &CombPolytope, limit: usize) -> Vec<Permutation> {
    let d = from.facet_count();
    if d != to.facet_count()
        || from.dim != to.dim
        || from.adjacency.len() != to.adjacency.len()
        || from.vertex_count() != to.vertex_count()
    {
        return Vec::new();
    }
    let to_sets: BTreeSet<&Vec<usize>> = to.vertices.iter().collect();
    // map facets in breadth-first order so every facet after the first has a
    // mapped neighbor to draw candidates from
    let order = choose_facet_order(from, 0);
    let mut image = vec![usize::MAX; d];
    let mut used = vec![false; d];
    let mut found = Vec::new();

    struct Ctx<'a> {
        from: &'a CombPolytope,
        to: &'a CombPolytope,
        to_sets: BTreeSet<&'a Vec<usize>>,
        order: Vec<usize>,
        limit: usize,
    }

    fn consistent(ctx: &Ctx, image: &[usize], f: usize, g: usize) -> bool {
        if ctx.from.neighbors[f].len() != ctx.to.neighbors[g].len() {
            return false;
        }
        for (h, &ih) in image.iter().enumerate() {
            if ih != usize::MAX && ctx.from.is_adjacent(f, h) != ctx.to.is_adjacent(g, ih) {
                return false;
            }
        }
        true
    }

    fn vertices_map(ctx: &Ctx, image: &[usize]) -> bool {
        ctx.from.vertices.iter().all(|set| {
            let mut mapped: Vec<usize> = set.iter().map(|&f| image[f]).collect();
            mapped.sort_unstable();
            ctx.to_sets.contains(&mapped)
        })
    }

    fn search(
        ctx: &Ctx,
        depth: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut Vec<Permutation>,
    ) {
        if found.len() >= ctx.limit {
            return;
        }
        if depth == ctx.order.len() {
            if vertices_map(ctx, image) {
                let images = image.iter().map(|&x| x as u32).collect();
                found.push(Permutation::from_images(images).expect("bijection"));
            }
            return;
        }
        let f = ctx.order[depth];
        let candidates: Vec<usize> = match ctx.from.neighbors[f]
            .iter()
            .find(|&&h| image[h] != usize::MAX)
        {
            Some(&h) => ctx.to.neighbors[image[h]].clone(),
            None => (0..ctx.to.facet_count()).collect(),
        };
        for g in candidates {
            if used[g] || !consistent(ctx, image, f, g) {
                continue;
            }
            image[f] = g;
            used[g] = true;
            search(ctx, depth + 1, image, used, found);
            image[f] = usize::MAX;
            used[g] = false;
        }
    }

    let ctx = Ctx {
        from,
        to,
        to_sets,
        order,
        limit,
    };
    search(&ctx, 0, &mut image, &mut used, &mut found);
    found
}

pub fn find_isomorphism(from: &CombPolytope, to: &CombPolytope) -> Option<Permutation> {
    isomorphisms(from, to, 1).pop()
}

/// All combinatorial automorphisms, acting on facet ids.
pub fn automorphisms(p: &CombPolytope, limit: usize) -> Vec<Permutation> {
    isomorphisms(p, p, limit)
}

// ---------------------------------------------------------------------------
// JSON file format

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FacetRecord {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barycenter: Option<Vec<[i64; 4]>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PolytopeFile {
    #[serde(default)]
    pub name: String,
    pub dimension: usize,
    pub facets: Vec<FacetRecord>,
    pub adjacency: Vec<[usize; 2]>,
    pub vertices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet_order: Option<Vec<usize>>,
}

impl PolytopeFile {
    pub fn from_polytope(p: &CombPolytope) -> Result<Self, PolytopeError> {
        let facets = p
            .barycenters
            .iter()
            .enumerate()
            .map(|(id, b)| {
                let barycenter = b
                    .as_ref()
                    .map(|point| {
                        point
                            .coords()
                            .iter()
                            .map(|c| {
                                c.to_parts().ok_or_else(|| {
                                    PolytopeError::Malformed(format!(
                                        "coordinate {c} does not fit in 64 bits"
                                    ))
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .transpose()?;
                Ok(FacetRecord { id, barycenter })
            })
            .collect::<Result<Vec<_>, PolytopeError>>()?;
        Ok(PolytopeFile {
            name: p.name.clone(),
            dimension: p.dim,
            facets,
            adjacency: p.adjacency.iter().map(|&(i, j)| [i, j]).collect(),
            vertices: p.vertices.clone(),
            facet_order: Some(p.facet_order.clone()),
        })
    }

    pub fn into_polytope(self) -> Result<CombPolytope, PolytopeError> {
        let d = self.facets.len();
        let mut barycenters = vec![None; d];
        let mut seen = vec![false; d];
        for record in self.facets {
            if record.id >= d || seen[record.id] {
                return Err(PolytopeError::Malformed(format!(
                    "facet ids must be 0..{d} without repetition (found {})",
                    record.id
                )));
            }
            seen[record.id] = true;
            if let Some(coords) = record.barycenter {
                if coords.len() != self.dimension {
                    return Err(PolytopeError::DimensionMismatch(format!(
                        "facet {} has {} coordinates, expected {}",
                        record.id,
                        coords.len(),
                        self.dimension
                    )));
                }
                let point = coords
                    .iter()
                    .map(|&[an, ad, bn, bd]| QuadExt::from_parts(an, ad, bn, bd))
                    .collect::<Result<Vec<_>, _>>()?;
                barycenters[record.id] = Some(Point(point));
            }
        }
        CombPolytope::from_parts(
            self.name,
            self.dimension,
            barycenters,
            self.adjacency.into_iter().map(|[i, j]| (i, j)).collect(),
            self.vertices,
            self.facet_order,
        )
    }
}

pub fn serialize(p: &CombPolytope) -> Result<String, PolytopeError> {
    let file = PolytopeFile::from_polytope(p)?;
    serde_json::to_string_pretty(&file).map_err(|e| PolytopeError::Malformed(e.to_string()))
}

pub fn deserialize(text: &str) -> Result<CombPolytope, PolytopeError> {
    let file: PolytopeFile =
        serde_json::from_str(text).map_err(|e| PolytopeError::Malformed(e.to_string()))?;
    file.into_polytope()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn polygon(k: usize) -> CombPolytope {
        let adjacency = (0..k).map(|i| (i, (i + 1) % k)).collect();
        let vertices = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
        CombPolytope::from_parts(
            format!("{k}-gon"),
            2,
            vec![None; k],
            adjacency,
            vertices,
            None,
        )
        .unwrap()
    }

    #[test]
    fn integer_incidence_matches_exact_incidence() {
        let r = build_regular(PolytopeKind::Dodecahedron).unwrap();
        let bary: Vec<Point> = r
            .polytope
            .barycenters()
            .iter()
            .map(|b| b.clone().unwrap())
            .collect();
        let duals: Vec<Point> = bary
            .iter()
            .map(|c| coxeter::transform(&r.geometry.gram_inv, c))
            .collect();
        let dot = |p: &Point, q: &Point| -> QuadExt {
            p.coords()
                .iter()
                .zip(q.coords())
                .fold(QuadExt::zero(), |acc, (x, y)| &acc + &(x * y))
        };
        let (adjacency, vertices) = incidence(
            bary.len(),
            r.vertex_points.len(),
            |i, j| dot(&bary[i], &duals[j]),
            |v, f| dot(&r.vertex_points[v], &duals[f]),
        );
        assert_eq!(adjacency, r.polytope.adjacency());
        assert_eq!(vertices, r.polytope.vertices());
    }

    #[test]
    fn dodecahedron_counts() {
        let p = build_polytope(PolytopeKind::Dodecahedron).unwrap();
        assert_eq!(p.facet_count(), 12);
        assert_eq!(p.vertex_count(), 20);
        assert_eq!(p.adjacency().len(), 30);
        assert!((0..12).all(|f| p.neighbors(f).len() == 5));
        assert!(validate(&p).is_empty());
    }

    #[test]
    fn dodecahedron_order_starts_at_a_vertex() {
        let p = build_polytope(PolytopeKind::Dodecahedron).unwrap();
        let first: Vec<usize> = p.facet_order()[..3].to_vec();
        assert!(p
            .vertices()
            .iter()
            .any(|v| first.iter().all(|f| v.contains(f))));
        let again = build_polytope(PolytopeKind::Dodecahedron).unwrap();
        assert_eq!(p.facet_order(), again.facet_order());
        // the seed facet (2,0,0) comes first
        assert_eq!(
            p.barycenter(p.facet_at(0)),
            Some(&Point::from_ints(&[2, 0, 0]))
        );
    }

    #[test]
    fn deleting_a_ridge_names_the_facet() {
        let p = build_polytope(PolytopeKind::Dodecahedron).unwrap();
        let (i, j) = p.adjacency()[0];
        let mut broken = p.clone();
        broken.adjacency.remove(0);
        broken.neighbors[i].retain(|&x| x != j);
        broken.neighbors[j].retain(|&x| x != i);
        let violations = validate(&broken);
        assert!(violations
            .iter()
            .any(|v| v.contains(&format!("facet {i} has 4 neighbors"))));
    }

    #[test]
    fn bad_first_facets_are_reported() {
        let p = build_polytope(PolytopeKind::Dodecahedron).unwrap();
        // three pairwise non-adjacent facets: a facet, plus two non-neighbors
        // that are not adjacent to each other either
        let f = 0;
        let far: Vec<usize> = (0..12)
            .filter(|&g| g != f && !p.is_adjacent(f, g))
            .collect();
        let (g, h) = far
            .iter()
            .flat_map(|&g| far.iter().map(move |&h| (g, h)))
            .find(|&(g, h)| g != h && !p.is_adjacent(g, h))
            .unwrap();
        let mut order = vec![f, g, h];
        order.extend((0..12).filter(|x| ![f, g, h].contains(x)));
        let err = p.with_facet_order(order).unwrap_err();
        match err {
            PolytopeError::ValidationFailure(v) => {
                assert!(v.iter().any(|s| s.contains("do not meet at a vertex")))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let p = build_polytope(PolytopeKind::Dodecahedron).unwrap();
        let text = serialize(&p).unwrap();
        assert_eq!(deserialize(&text).unwrap(), p);
    }

    #[test]
    fn pentagon_file() {
        let text = r#"{
            "name": "pentagon",
            "dimension": 2,
            "facets": [{"id": 0}, {"id": 1}, {"id": 2}, {"id": 3}, {"id": 4}],
            "adjacency": [[0,1],[1,2],[2,3],[3,4],[4,0]],
            "vertices": [[0,1],[1,2],[2,3],[3,4],[4,0]]
        }"#;
        let p = deserialize(text).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.facet_count(), 5);
        let reference = polygon(5);
        assert_eq!(p.adjacency(), reference.adjacency());
        assert_eq!(p.vertices(), reference.vertices());
        assert_eq!(p.facet_order(), reference.facet_order());
        assert_eq!(automorphisms(&p, 100).len(), 10);
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(deserialize("{"), Err(PolytopeError::Malformed(_))));
        let three_facet_vertex = r#"{
            "dimension": 4,
            "facets": [{"id": 0}, {"id": 1}, {"id": 2}],
            "adjacency": [[0,1],[1,2],[0,2]],
            "vertices": [[0,1,2]]
        }"#;
        assert!(matches!(
            deserialize(three_facet_vertex),
            Err(PolytopeError::ValidationFailure(_))
        ));
        let bad_dim = r#"{
            "dimension": 2,
            "facets": [{"id": 0, "barycenter": [[1,1,0,1]]}, {"id": 1}],
            "adjacency": [[0,1]],
            "vertices": [[0,1]]
        }"#;
        assert!(matches!(
            deserialize(bad_dim),
            Err(PolytopeError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn dodecahedron_automorphisms_match_h3() {
        let r = build_regular(PolytopeKind::Dodecahedron).unwrap();
        let group = r.symmetry_group().unwrap();
        assert_eq!(group.len(), 120);
        assert_eq!(automorphisms(&r.polytope, 1000).len(), 120);
    }

    #[test]
    fn facet_of_dodecahedron_is_a_pentagon() {
        let p = build_polytope(PolytopeKind::Dodecahedron).unwrap();
        let (face, parents) = facet_polytope(&p, p.facet_at(0)).unwrap();
        assert_eq!(face.dim(), 2);
        assert_eq!(face.facet_count(), 5);
        assert_eq!(parents.len(), 5);
        assert!(find_isomorphism(&face, &polygon(5)).is_some());
    }
}
