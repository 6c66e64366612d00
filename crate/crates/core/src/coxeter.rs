//! Finite Coxeter groups of type H3 and H4 in the contragredient
//! representation, with exact coordinates in Q(√5).
//!
//! Points are written in the dual basis. The `i`-th generator is the linear
//! reflection across the coordinate hyperplane `x_i = 0`:
//!
//! ```text
//! x_j  <-  x_j - 2 B(i,j) x_i        (so x_i <- -x_i)
//! ```
//!
//! where `B` is the Gram matrix of the diagram. These maps preserve the
//! bilinear form given by the inverse of `B`.

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::GeometryError;
use crate::perm::Permutation;
use crate::quad::QuadExt;

/// Square matrix over Q(√5), row-major.
pub type Matrix = Vec<Vec<QuadExt>>;

/// A Coxeter diagram: named generators and the order `m(i,j)` of every
/// product of two generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterDiagram {
    names: Vec<String>,
    orders: Vec<Vec<u32>>,
}

impl CoxeterDiagram {
    pub fn new(names: Vec<String>, orders: Vec<Vec<u32>>) -> Result<Self, GeometryError> {
        let k = names.len();
        if orders.len() != k || orders.iter().any(|row| row.len() != k) {
            return Err(GeometryError::MalformedDiagram(
                "order matrix must be square and match the generator count".into(),
            ));
        }
        for i in 0..k {
            if orders[i][i] != 1 {
                return Err(GeometryError::MalformedDiagram(format!(
                    "m({0},{0}) must be 1",
                    names[i]
                )));
            }
            for j in 0..k {
                if orders[i][j] != orders[j][i] {
                    return Err(GeometryError::MalformedDiagram(
                        "order matrix is not symmetric".into(),
                    ));
                }
                if i != j && orders[i][j] < 2 {
                    return Err(GeometryError::MalformedDiagram(format!(
                        "m({},{}) must be at least 2",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(CoxeterDiagram { names, orders })
    }

    /// A path diagram `names[0] - edges[0] - names[1] - ...`; all other pairs
    /// commute.
    pub fn linear(names: &[&str], edges: &[u32]) -> Result<Self, GeometryError> {
        let k = names.len();
        if edges.len() + 1 != k {
            return Err(GeometryError::MalformedDiagram(
                "a linear diagram needs one edge fewer than nodes".into(),
            ));
        }
        let mut orders = vec![vec![2u32; k]; k];
        for (i, row) in orders.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (i, &m) in edges.iter().enumerate() {
            orders[i][i + 1] = m;
            orders[i + 1][i] = m;
        }
        CoxeterDiagram::new(names.iter().map(|s| s.to_string()).collect(), orders)
    }

    /// Symmetry group of the dodecahedron, `b -3- c -5- d`.
    pub fn h3() -> Self {
        CoxeterDiagram::linear(&["b", "c", "d"], &[3, 5]).expect("valid H3 diagram")
    }

    /// Symmetry group of the 120-cell, `a -3- b -3- c -5- d`.
    pub fn h4() -> Self {
        CoxeterDiagram::linear(&["a", "b", "c", "d"], &[3, 3, 5]).expect("valid H4 diagram")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self, i: usize, j: usize) -> u32 {
        self.orders[i][j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The sub-diagram on the given generators, in the given order.
    pub fn restrict(&self, generators: &[usize]) -> CoxeterDiagram {
        CoxeterDiagram {
            names: generators.iter().map(|&i| self.names[i].clone()).collect(),
            orders: generators
                .iter()
                .map(|&i| generators.iter().map(|&j| self.orders[i][j]).collect())
                .collect(),
        }
    }
}

/// `-cos(π/m)` for the orders that occur in H3 and H4.
fn minus_cos_pi_over(m: u32) -> Result<QuadExt, GeometryError> {
    let quarter = || BigRational::new((-1).into(), 4.into());
    match m {
        1 => Ok(QuadExt::from_int(1)),
        2 => Ok(QuadExt::zero()),
        3 => Ok(QuadExt::new(
            BigRational::new((-1).into(), 2.into()),
            BigRational::zero(),
        )),
        5 => Ok(QuadExt::new(quarter(), quarter())),
        other => Err(GeometryError::UnsupportedOrder(other)),
    }
}

/// Gram matrix `B(i,j) = -cos(π/m(i,j))`.
pub fn gram_matrix(diagram: &CoxeterDiagram) -> Result<Matrix, GeometryError> {
    let k = diagram.rank();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| minus_cos_pi_over(diagram.order(i, j)))
                .collect()
        })
        .collect()
}

/// Exact inverse by Gauss-Jordan elimination over Q(√5).
pub fn inverse_gram(b: &Matrix) -> Result<Matrix, GeometryError> {
    let k = b.len();
    if b.iter().any(|row| row.len() != k) {
        return Err(GeometryError::DimensionMismatch {
            expected: k,
            got: b.iter().map(Vec::len).find(|&l| l != k).unwrap_or(k),
        });
    }
    let mut left = b.clone();
    let mut right: Matrix = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        QuadExt::one()
                    } else {
                        QuadExt::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !left[r][col].is_zero())
            .ok_or(GeometryError::SingularGram)?;
        left.swap(col, pivot);
        right.swap(col, pivot);
        let inv = left[col][col].inverse()?;
        for j in 0..k {
            left[col][j] = &left[col][j] * &inv;
            right[col][j] = &right[col][j] * &inv;
        }
        for r in 0..k {
            if r == col || left[r][col].is_zero() {
                continue;
            }
            let factor = left[r][col].clone();
            for j in 0..k {
                let l = &left[col][j] * &factor;
                left[r][j] = &left[r][j] - &l;
                let rr = &right[col][j] * &factor;
                right[r][j] = &right[r][j] - &rr;
            }
        }
    }
    Ok(right)
}

pub fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    let k = x.len();
    let m = y.first().map_or(0, Vec::len);
    (0..k)
        .map(|i| {
            (0..m)
                .map(|j| (0..y.len()).fold(QuadExt::zero(), |acc, t| &acc + &(&x[i][t] * &y[t][j])))
                .collect()
        })
        .collect()
}

/// A point of the contragredient module, in dual-basis coordinates.
///
/// Ordering is lexicographic on coordinates with exact comparison.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Point(pub Vec<QuadExt>);

impl Point {
    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| QuadExt::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[QuadExt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(QuadExt::is_zero)
    }

    pub fn neg(&self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Applies generator `i` to `p`.
pub fn reflect(i: usize, p: &Point, b: &Matrix) -> Result<Point, GeometryError> {
    if p.dim() != b.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: b.len(),
            got: p.dim(),
        });
    }
    let xi = &p.0[i];
    if xi.is_zero() {
        return Ok(p.clone());
    }
    let two_xi = xi + xi;
    Ok(Point(
        p.0.iter()
            .zip(&b[i])
            .map(|(xj, bij)| xj - &(bij * &two_xi))
            .collect(),
    ))
}

/// The invariant form `⟨p, q⟩ = pᵀ B⁻¹ q`.
pub fn inner(p: &Point, q: &Point, b_inv: &Matrix) -> QuadExt {
    transform(b_inv, q)
        .0
        .iter()
        .zip(&p.0)
        .fold(QuadExt::zero(), |acc, (x, y)| &acc + &(x * y))
}

/// `m · p` for a square matrix `m`.
pub fn transform(m: &Matrix, p: &Point) -> Point {
    Point(
        m.iter()
            .map(|row| {
                row.iter()
                    .zip(&p.0)
                    .fold(QuadExt::zero(), |acc, (x, y)| &acc + &(x * y))
            })
            .collect(),
    )
}

/// Cached geometric data for one diagram.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub diagram: CoxeterDiagram,
    pub gram: Matrix,
    pub gram_inv: Matrix,
}

impl Geometry {
    pub fn new(diagram: CoxeterDiagram) -> Result<Self, GeometryError> {
        let gram = gram_matrix(&diagram)?;
        let gram_inv = inverse_gram(&gram)?;
        Ok(Geometry {
            diagram,
            gram,
            gram_inv,
        })
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    pub fn reflect(&self, i: usize, p: &Point) -> Result<Point, GeometryError> {
        reflect(i, p, &self.gram)
    }

    pub fn inner(&self, p: &Point, q: &Point) -> QuadExt {
        inner(p, q, &self.gram_inv)
    }

    pub fn orbit(&self, seed: &Point, bound: usize) -> Result<Vec<Point>, GeometryError> {
        orbit(seed, &self.gram, bound)
    }
}

/// The orbit of `seed` under all generators, sorted lexicographically.
pub fn orbit(seed: &Point, b: &Matrix, bound: usize) -> Result<Vec<Point>, GeometryError> {
    if seed.dim() != b.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: b.len(),
            got: seed.dim(),
        });
    }
    let mut seen: HashSet<Point> = HashSet::new();
    seen.insert(seed.clone());
    let mut queue = vec![seed.clone()];
    let mut head = 0;
    while head < queue.len() {
        let p = queue[head].clone();
        head += 1;
        for i in 0..b.len() {
            let q = reflect(i, &p, b)?;
            if !seen.contains(&q) {
                if queue.len() >= bound {
                    return Err(GeometryError::OrbitTooLarge(bound));
                }
                seen.insert(q.clone());
                queue.push(q);
            }
        }
    }
    queue.sort();
    Ok(queue)
}

/// Position lookup for an orbit.
pub fn orbit_index(points: &[Point]) -> HashMap<Point, usize> {
    points
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect()
}

/// The permutation of orbit indices induced by generator `i`.
pub fn generator_permutation(
    i: usize,
    points: &[Point],
    index: &HashMap<Point, usize>,
    b: &Matrix,
) -> Result<Permutation, GeometryError> {
    let images = points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let q = reflect(i, p, b)?;
            index
                .get(&q)
                .map(|&j| j as u32)
                .ok_or(GeometryError::NotClosed(k))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Permutation::from_images(images).expect("reflection is a bijection on a closed orbit"))
}

/// Checks the two constraints that fix the H4 diagram orientation: the first
/// generator sends `(2,0,0,0)` to `(-2,2,0,0)`, and the stabilizer `⟨b,c,d⟩`
/// of that point is of type H3.
pub fn check_h4_orientation(geometry: &Geometry) -> Result<(), GeometryError> {
    let seed = Point::from_ints(&[2, 0, 0, 0]);
    let image = geometry.reflect(0, &seed)?;
    if image != Point::from_ints(&[-2, 2, 0, 0]) {
        return Err(GeometryError::MalformedDiagram(format!(
            "generator a sends (2,0,0,0) to {image}, expected (-2,2,0,0)"
        )));
    }
    let facet_stabilizer = geometry.diagram.restrict(&[1, 2, 3]);
    let h3 = CoxeterDiagram::h3();
    if facet_stabilizer.orders != h3.orders {
        return Err(GeometryError::MalformedDiagram(
            "stabilizer of the first facet is not of type H3".into(),
        ));
    }
    Ok(())
}
