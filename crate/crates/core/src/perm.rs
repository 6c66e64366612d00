//! Permutations of facet indices and breadth-first group closure.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;

use crate::error::GeometryError;

/// A permutation of `{0, .., d-1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

/// A symmetry of the polytope acting on facet indices.
pub type FacetPermutation = Permutation;

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// Wraps an image list, rejecting anything that is not a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Order of the permutation: the lcm of its cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut order = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            order = order.lcm(&len);
        }
        order
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.0)
    }
}

/// Every product of the generators, found by breadth-first search from the
/// identity. The identity comes first; the order is otherwise deterministic.
pub fn group_closure(
    generators: &[Permutation],
    degree: usize,
    bound: usize,
) -> Result<Vec<Permutation>, GeometryError> {
    if generators.iter().any(|g| g.degree() != degree) {
        return Err(GeometryError::DegreeMismatch);
    }
    let identity = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(identity.clone());
    let mut elements = vec![identity];
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in generators {
            let next = g.compose(&current);
            if !seen.contains(&next) {
                if elements.len() >= bound {
                    return Err(GeometryError::GroupTooLarge(bound));
                }
                seen.insert(next.clone());
                elements.push(next);
            }
        }
    }
    Ok(elements)
}
