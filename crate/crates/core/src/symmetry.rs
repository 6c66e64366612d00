//! Equivalence classes of labelings under the polytope's symmetry group.
//!
//! A symmetry `a` (acting on positions) sends a normalized labeling `λ` to
//! the labeling `i ↦ λ(a(i))`, renormalized by the unique linear map carrying
//! its first `n` labels to the standard basis. This is a right action:
//! `act(act(λ, a), b) = act(λ, a ∘ b)`.
//!
//! Classes are the connected components of the graph joining `λ` to
//! `act(λ, s)` for each generator `s`.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::enumerate::{is_characteristic, Labeling};
use crate::error::SymmetryError;
use crate::gf2::{self, Label};
use crate::perm::{group_closure, Permutation};
use crate::polytope::{facet_polytope, CombPolytope};

/// Applies a symmetry to a normalized labeling.
pub fn act(lab: &Labeling, a: &Permutation, n: usize) -> Labeling {
    let permuted: Vec<u32> = (0..lab.len())
        .map(|i| lab.labels()[a.apply(i)].value())
        .collect();
    normalize_raw(&permuted, n)
}

fn normalize_raw(values: &[u32], n: usize) -> Labeling {
    let g = gf2::normalizing_map_raw(&values[..n])
        .expect("the first n facets meet at a vertex, so their labels form a basis");
    let mapped: Vec<u32> = values.iter().map(|&x| g.apply_raw(x)).collect();
    Labeling::from_raw(&mapped)
}

/// Renormalizes an arbitrary characteristic labeling so that its first `n`
/// labels are the standard basis.
pub fn normalize(lab: &Labeling, n: usize) -> Result<Labeling, SymmetryError> {
    let first: Vec<Label> = lab.labels()[..n].to_vec();
    let g = gf2::normalizing_map(&first).map_err(|_| SymmetryError::NotCharacteristic)?;
    Ok(Labeling::new(
        lab.labels().iter().map(|&l| g.apply(l)).collect(),
    ))
}

/// One connected component of the generator graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically least member.
    pub representative: Labeling,
    /// Indices into the input list, in increasing order.
    pub members: Vec<usize>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Connected components under the generators, sorted by representative.
pub fn orbits(
    labelings: &[Labeling],
    generators: &[Permutation],
    n: usize,
) -> Result<Vec<Orbit>, SymmetryError> {
    let index: HashMap<&Labeling, usize> =
        labelings.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut dsu = DisjointSet::new(labelings.len());
    for (i, lab) in labelings.iter().enumerate() {
        for g in generators {
            if g.degree() != lab.len() {
                return Err(SymmetryError::DegreeMismatch {
                    expected: lab.len(),
                    got: g.degree(),
                });
            }
            let image = act(lab, g, n);
            let j = *index
                .get(&image)
                .ok_or_else(|| SymmetryError::ClosureViolation(image.to_csv()))?;
            dsu.union(i, j);
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..labelings.len() {
        let root = dsu.find(i);
        components.entry(root).or_default().push(i);
    }
    let mut out: Vec<Orbit> = components
        .into_values()
        .map(|members| {
            let rep = members
                .iter()
                .map(|&i| &labelings[i])
                .min()
                .expect("nonempty component")
                .clone();
            Orbit {
                representative: rep,
                members,
            }
        })
        .collect();
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

/// Elements of `group` fixing `lab`.
pub fn stabilizer(lab: &Labeling, group: &[Permutation], n: usize) -> Vec<Permutation> {
    group
        .iter()
        .filter(|a| act(lab, a, n) == *lab)
        .cloned()
        .collect()
}

/// Isomorphism-invariant data for a finite permutation group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: usize,
    /// Element order -> number of elements of that order.
    pub element_orders: BTreeMap<u64, usize>,
    pub abelian: bool,
    /// Invariant factors `d_1 | d_2 | ..` when the group is abelian.
    pub invariants: Option<Vec<u64>>,
}

impl Fingerprint {
    pub fn compute(group: &[Permutation]) -> Self {
        let mut element_orders = BTreeMap::new();
        for g in group {
            *element_orders.entry(g.order()).or_insert(0) += 1;
        }
        let abelian = is_abelian(group);
        let invariants = abelian.then(|| abelian_invariants(&element_orders, group.len()));
        Fingerprint {
            order: group.len(),
            element_orders,
            abelian,
            invariants,
        }
    }

    fn profile_is(&self, orders: &[(u64, usize)]) -> bool {
        self.element_orders.len() == orders.len()
            && orders
                .iter()
                .all(|(o, c)| self.element_orders.get(o) == Some(c))
    }

    /// Conventional name when the data determine the group, else `None`.
    pub fn name(&self) -> Option<String> {
        if self.order == 1 {
            return Some("1".into());
        }
        if let Some(inv) = &self.invariants {
            return Some(
                inv.iter()
                    .map(|d| format!("Z_{d}"))
                    .collect::<Vec<_>>()
                    .join("×"),
            );
        }
        let name = match self.order {
            6 if self.profile_is(&[(1, 1), (2, 3), (3, 2)]) => "S_3",
            8 if self.profile_is(&[(1, 1), (2, 5), (4, 2)]) => "D_4",
            8 if self.profile_is(&[(1, 1), (2, 1), (4, 6)]) => "Q_8",
            10 if self.profile_is(&[(1, 1), (2, 5), (5, 4)]) => "D_5",
            12 if self.profile_is(&[(1, 1), (2, 3), (3, 8)]) => "(Z_2×Z_2)⋉Z_3",
            12 if self.profile_is(&[(1, 1), (2, 7), (3, 2), (6, 2)]) => "D_6",
            24 if self.profile_is(&[(1, 1), (2, 7), (3, 8), (6, 8)]) => "(Z_2×Z_2)⋉Z_6",
            24 if self.profile_is(&[(1, 1), (2, 9), (3, 8), (4, 6)]) => "S_4",
            _ => return None,
        };
        Some(name.into())
    }

    /// Compact text form, e.g. `order 12 nonabelian [1:1 2:3 3:8]`.
    pub fn describe(&self) -> String {
        let orders: Vec<String> = self
            .element_orders
            .iter()
            .map(|(o, c)| format!("{o}:{c}"))
            .collect();
        match &self.invariants {
            Some(inv) => format!(
                "order {} abelian {:?} [{}]",
                self.order,
                inv,
                orders.join(" ")
            ),
            None => format!("order {} nonabelian [{}]", self.order, orders.join(" ")),
        }
    }
}

/// A small generating set, built greedily by adding elements outside the
/// subgroup generated so far.
pub fn generating_set(group: &[Permutation]) -> Vec<Permutation> {
    let Some(first) = group.first() else {
        return Vec::new();
    };
    let degree = first.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::new();
    span.insert(Permutation::identity(degree));
    for g in group {
        if span.contains(g) {
            continue;
        }
        gens.push(g.clone());
        span = group_closure(&gens, degree, group.len().max(1))
            .expect("subgroup of a finite group")
            .into_iter()
            .collect();
        if span.len() == group.len() {
            break;
        }
    }
    gens
}

fn is_abelian(group: &[Permutation]) -> bool {
    let gens = generating_set(group);
    gens.iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)))
}

/// Invariant factors of an abelian group from its element-order counts.
///
/// For each prime `p`, the number of elements of order dividing `p^j` is
/// `p^(Σ min(e_i, j))`, which recovers the exponents `e_i` of the primary
/// decomposition.
fn abelian_invariants(element_orders: &BTreeMap<u64, usize>, order: usize) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut rest = order as u64;
    let mut p = 2;
    while rest > 1 {
        if rest.is_multiple_of(p) {
            primes.push(p);
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    // exponents per prime, largest first
    let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let count_dividing = |j: u32| -> usize {
            let pj = p.pow(j);
            element_orders
                .iter()
                .filter(|(o, _)| pj % **o == 0)
                .map(|(_, c)| *c)
                .sum()
        };
        let log_p = |mut x: usize| -> u32 {
            let mut e = 0;
            while x > 1 {
                x /= p as usize;
                e += 1;
            }
            e
        };
        // r[j] = number of cyclic factors with exponent >= j
        let mut exps = Vec::new();
        let mut j = 1;
        loop {
            let r = log_p(count_dividing(j)) - log_p(count_dividing(j - 1));
            if r == 0 {
                break;
            }
            exps.push(r);
            j += 1;
        }
        // conjugate partition: factor k has exponent #{j : r_j > k}
        let factors = exps.first().copied().unwrap_or(0);
        let mut e: Vec<u32> = (0..factors)
            .map(|k| exps.iter().filter(|&&r| r > k).count() as u32)
            .collect();
        e.sort_unstable_by(|a, b| b.cmp(a));
        primary.push((p, e));
    }
    let width = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut invariants: Vec<u64> = (0..width)
        .map(|k| {
            primary
                .iter()
                .map(|(p, e)| e.get(k).map_or(1, |&x| p.pow(x)))
                .product()
        })
        .collect();
    invariants.reverse();
    debug_assert!(invariants.windows(2).all(|w| w[1] % w[0] == 0));
    debug_assert_eq!(invariants.iter().product::<u64>(), order as u64);
    invariants
}

/// `|A_λ| · 2^n`.
pub fn isometry_order(stabilizer_order: usize, n: usize) -> u64 {
    stabilizer_order as u64 * (1u64 << n)
}

/// A classified orbit.
#[derive(Clone, Debug)]
pub struct EquivClass {
    pub representative: Labeling,
    pub orbit_size: usize,
    pub stabilizer: Vec<Permutation>,
    pub fingerprint: Fingerprint,
    pub name: Option<String>,
    pub isometry_order: u64,
}

impl EquivClass {
    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer.len()
    }
}

/// The symmetry group of a polytope in position space.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    pub n: usize,
    pub generators: Vec<Permutation>,
    pub elements: Vec<Permutation>,
}

impl SymmetryGroup {
    /// Closes the generators, checking each against the polytope.
    pub fn new(
        p: &CombPolytope,
        generators: Vec<Permutation>,
        bound: usize,
    ) -> Result<Self, SymmetryError> {
        let d = p.facet_count();
        for g in &generators {
            if g.degree() != d {
                return Err(SymmetryError::DegreeMismatch {
                    expected: d,
                    got: g.degree(),
                });
            }
        }
        let elements =
            group_closure(&generators, d, bound).map_err(|e| SymmetryError::Polytope(e.into()))?;
        Ok(SymmetryGroup {
            n: p.dim(),
            generators,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The least labeling in the orbit of `lab`, which is the representative
    /// `classify` reports for its class.
    pub fn canonical(&self, lab: &Labeling) -> Labeling {
        self.elements
            .iter()
            .map(|g| act(lab, g, self.n))
            .min()
            .unwrap_or_else(|| lab.clone())
    }

    /// Orbits with stabilizers, fingerprints and isometry orders.
    pub fn classify(&self, labelings: &[Labeling]) -> Result<Vec<EquivClass>, SymmetryError> {
        let found = orbits(labelings, &self.generators, self.n)?;
        Ok(found
            .into_iter()
            .map(|orbit| {
                let stab = stabilizer(&orbit.representative, &self.elements, self.n);
                let fingerprint = Fingerprint::compute(&stab);
                EquivClass {
                    name: fingerprint.name(),
                    isometry_order: isometry_order(stab.len(), self.n),
                    representative: orbit.representative,
                    orbit_size: orbit.members.len(),
                    stabilizer: stab,
                    fingerprint,
                }
            })
            .collect())
    }
}

/// The labeling induced on the facet at `position`.
///
/// Neighbor labels are reduced modulo the line spanned by the facet's own
/// label `ℓ`: the highest set bit `h` of `ℓ` is cleared by adding `ℓ` where
/// needed, then bit `h` is deleted. The returned polytope's facets are the
/// neighbors of the facet; the labeling is indexed by its positions and is
/// not renormalized.
pub fn restrict_labeling(
    lab: &Labeling,
    position: usize,
    p: &CombPolytope,
) -> Result<(CombPolytope, Labeling), SymmetryError> {
    let d = p.facet_count();
    if position >= d {
        return Err(SymmetryError::FacetOutOfRange {
            index: position,
            count: d,
        });
    }
    if lab.len() != d {
        return Err(SymmetryError::Enumerate(
            crate::error::EnumerateError::WrongArity {
                expected: d,
                got: lab.len(),
            },
        ));
    }
    let facet = p.facet_at(position);
    let (sub, parents) = facet_polytope(p, facet)?;
    let ell = lab.labels()[position].value();
    let high = 31 - ell.leading_zeros();
    let low_mask = (1u32 << high) - 1;
    let reduce = |x: u32| -> u32 {
        let y = if (x >> high) & 1 == 1 { x ^ ell } else { x };
        (y & low_mask) | ((y >> (high + 1)) << high)
    };
    let values: Vec<u32> = (0..sub.facet_count())
        .map(|pos| {
            let parent = parents[sub.facet_at(pos)];
            reduce(lab.labels()[p.position_of(parent)].value())
        })
        .collect();
    if values.contains(&0) {
        return Err(SymmetryError::NotCharacteristic);
    }
    let restricted = Labeling::from_raw(&values);
    Ok((sub, restricted))
}

/// Re-indexes a labeling along a facet isomorphism `iso: from -> to` (on
/// facet ids) and renormalizes it for `to`'s enumeration order.
pub fn transport(
    lab: &Labeling,
    from: &CombPolytope,
    to: &CombPolytope,
    iso: &Permutation,
) -> Result<Labeling, SymmetryError> {
    let mut values = vec![0u32; to.facet_count()];
    for pos in 0..from.facet_count() {
        let target = iso.apply(from.facet_at(pos));
        values[to.position_of(target)] = lab.labels()[pos].value();
    }
    let moved = Labeling::from_raw(&values);
    if !is_characteristic(moved.labels(), to)? {
        return Err(SymmetryError::NotCharacteristic);
    }
    normalize(&moved, to.dim())
}
