//! Backtracking enumeration of normalized labelings.
//!
//! Facets are labeled in the polytope's enumeration order. The first `n`
//! positions are pinned to the standard basis `1, 2, 4, ..`. At position `i`
//! a label is forbidden when it is a sum of labels already placed on facets
//! that meet `F_i` at a common vertex together with some other labeled
//! facets. In a simple polytope this is the union, over the vertices of
//! `F_i`, of the subset sums of the labels already placed at that vertex.
//! The remaining alphabet entries are tried in alphabet order.

use std::fmt;

use rayon::prelude::*;

use crate::error::EnumerateError;
use crate::gf2::{self, Label, MAX_DIM};
use crate::polytope::CombPolytope;

/// Full-alphabet searches on polytopes with more facets than this are
/// refused unless forced.
pub const FEASIBLE_FULL_SEARCH_FACETS: usize = 64;

/// A labeling of the facets, indexed by enumeration position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling {
    labels: Vec<Label>,
}

impl Labeling {
    pub fn new(labels: Vec<Label>) -> Self {
        Labeling { labels }
    }

    /// Builds a labeling from decimal values, checking each against `n` bits.
    pub fn from_values(values: &[u32], n: usize) -> Result<Self, EnumerateError> {
        let labels = values
            .iter()
            .map(|&v| Label::new(v, n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Labeling { labels })
    }

    pub(crate) fn from_raw(values: &[u32]) -> Self {
        Labeling {
            labels: values.iter().map(|&v| Label::from_raw(v)).collect(),
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn values(&self) -> Vec<u32> {
        self.labels.iter().map(|l| l.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// True iff the first `n` labels are `1, 2, 4, ..`.
    pub fn is_normalized(&self, n: usize) -> bool {
        self.labels.len() >= n && (0..n).all(|i| self.labels[i] == Label::basis(i))
    }

    /// Number of distinct label values used.
    pub fn distinct_labels(&self) -> usize {
        let mut v = self.values();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    /// The comma-separated decimal tuple, e.g. `1,2,4,4,2,6`.
    pub fn to_csv(&self) -> String {
        self.labels
            .iter()
            .map(|l| l.value().to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.labels
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The ordered candidate set of labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    n: usize,
    labels: Vec<Label>,
}

impl Alphabet {
    pub fn new(values: &[u32], n: usize) -> Result<Self, EnumerateError> {
        if n == 0 || n > MAX_DIM {
            return Err(EnumerateError::InvalidAlphabet(format!(
                "dimension {n} not supported"
            )));
        }
        let mut labels = Vec::with_capacity(values.len());
        for &v in values {
            let label = Label::new(v, n).map_err(|_| {
                EnumerateError::InvalidAlphabet(format!("{v} is not a nonzero {n}-bit vector"))
            })?;
            if labels.contains(&label) {
                return Err(EnumerateError::InvalidAlphabet(format!(
                    "{v} appears twice"
                )));
            }
            labels.push(label);
        }
        if labels.is_empty() {
            return Err(EnumerateError::InvalidAlphabet("alphabet is empty".into()));
        }
        Ok(Alphabet { n, labels })
    }

    /// All nonzero vectors `1..2^n` in increasing order.
    pub fn full(n: usize) -> Result<Self, EnumerateError> {
        if n == 0 || n > MAX_DIM {
            return Err(EnumerateError::InvalidAlphabet(format!(
                "dimension {n} not supported"
            )));
        }
        let values: Vec<u32> = (1..1u32 << n).collect();
        Alphabet::new(&values, n)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.labels.len() == (1 << self.n) - 1
    }

    pub fn contains_standard_basis(&self) -> bool {
        (0..self.n).all(|i| self.labels.contains(&Label::basis(i)))
    }

    pub fn to_csv(&self) -> String {
        self.labels
            .iter()
            .map(|l| l.value().to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Depth (counted past the pinned basis) at which the tree is split into
    /// independently searched subtrees. Zero searches sequentially.
    pub split_depth: usize,
    /// Allow full-alphabet searches on large polytopes.
    pub force_infeasible: bool,
}

/// Outcome of a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// In lexicographic order, whatever the alphabet order or split depth.
    pub labelings: Vec<Labeling>,
    /// Set when the alphabet lacks part of the standard basis, in which case
    /// no normalized labeling can exist.
    pub missing_basis: bool,
    /// Search nodes visited, including leaves.
    pub nodes: u64,
}

/// Precomputed incidence in position space: for every position, the groups
/// of earlier positions that share a vertex with it.
struct Layout {
    n: usize,
    d: usize,
    groups: Vec<Vec<Vec<usize>>>,
}

impl Layout {
    fn new(p: &CombPolytope) -> Self {
        let n = p.dim();
        let d = p.facet_count();
        let mut groups: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d];
        for set in p.vertex_positions() {
            for &pos in &set {
                let earlier: Vec<usize> = set.iter().copied().filter(|&q| q < pos).collect();
                if !earlier.is_empty() {
                    groups[pos].push(earlier);
                }
            }
        }
        for list in &mut groups {
            list.sort();
            list.dedup();
            // a group contained in another contributes no extra sums
            let snapshot = list.clone();
            list.retain(|g| {
                !snapshot
                    .iter()
                    .any(|h| h.len() > g.len() && g.iter().all(|x| h.contains(x)))
            });
        }
        Layout { n, d, groups }
    }

    #[inline]
    fn forbidden(&self, pos: usize, labels: &[u32]) -> u64 {
        let mut mask = 0u64;
        let mut buf = [0u32; MAX_DIM];
        for group in &self.groups[pos] {
            for (slot, &q) in buf.iter_mut().zip(group) {
                *slot = labels[q];
            }
            mask |= gf2::subset_sum_mask(&buf[..group.len()]);
        }
        mask
    }
}

struct Search<'a> {
    layout: &'a Layout,
    alphabet: Vec<u32>,
}

impl Search<'_> {
    /// Depth-first search from `pos` with `labels[..pos]` fixed. Calls `emit`
    /// on each complete labeling. Returns visited node count.
    fn run(
        &self,
        labels: &mut Vec<u32>,
        pos: usize,
        stop: usize,
        emit: &mut dyn FnMut(&[u32]),
    ) -> u64 {
        if pos == stop {
            emit(labels);
            return 1;
        }
        let forbidden = self.layout.forbidden(pos, labels);
        let mut nodes = 1;
        for &label in &self.alphabet {
            if (forbidden >> label) & 1 == 1 {
                continue;
            }
            labels.push(label);
            nodes += self.run(labels, pos + 1, stop, emit);
            labels.pop();
        }
        nodes
    }
}

fn check_alphabet(p: &CombPolytope, alphabet: &Alphabet) -> Result<(), EnumerateError> {
    if alphabet.dim() != p.dim() {
        return Err(EnumerateError::InvalidAlphabet(format!(
            "alphabet is over (Z_2)^{}, polytope has dimension {}",
            alphabet.dim(),
            p.dim()
        )));
    }
    Ok(())
}

/// All normalized labelings whose labels lie in `alphabet`, in depth-first
/// order.
pub fn enumerate(
    p: &CombPolytope,
    alphabet: &Alphabet,
    options: SearchOptions,
) -> Result<Enumeration, EnumerateError> {
    check_alphabet(p, alphabet)?;
    if alphabet.is_full()
        && p.facet_count() > FEASIBLE_FULL_SEARCH_FACETS
        && !options.force_infeasible
    {
        return Err(EnumerateError::Infeasible(p.facet_count()));
    }
    if !alphabet.contains_standard_basis() {
        return Ok(Enumeration {
            labelings: Vec::new(),
            missing_basis: true,
            nodes: 0,
        });
    }
    let layout = Layout::new(p);
    let search = Search {
        layout: &layout,
        alphabet: alphabet.labels().iter().map(|l| l.value()).collect(),
    };
    let n = layout.n;
    let d = layout.d;
    let basis: Vec<u32> = (0..n).map(|i| 1u32 << i).collect();
    // the pinned basis itself must be consistent with the constraints
    for pos in 0..n.min(d) {
        if (layout.forbidden(pos, &basis[..pos]) >> basis[pos]) & 1 == 1 {
            return Ok(Enumeration {
                labelings: Vec::new(),
                missing_basis: false,
                nodes: 0,
            });
        }
    }

    let split = (n + options.split_depth).min(d);
    if options.split_depth == 0 || split == n {
        let mut out = Vec::new();
        let mut labels = basis;
        let nodes = search.run(&mut labels, n, d, &mut |l| out.push(Labeling::from_raw(l)));
        out.sort_unstable();
        return Ok(Enumeration {
            labelings: out,
            missing_basis: false,
            nodes,
        });
    }

    let mut prefixes: Vec<Vec<u32>> = Vec::new();
    let mut labels = basis;
    let mut nodes = search.run(&mut labels, n, split, &mut |l| prefixes.push(l.to_vec()));
    // each prefix leaf was counted once above and is counted again as a root
    nodes -= prefixes.len() as u64;
    let parts: Vec<(Vec<Labeling>, u64)> = prefixes
        .into_par_iter()
        .map(|mut prefix| {
            let mut out = Vec::new();
            let nodes = search.run(&mut prefix, split, d, &mut |l| {
                out.push(Labeling::from_raw(l))
            });
            (out, nodes)
        })
        .collect();
    let mut out = Vec::new();
    for (part, count) in parts {
        out.extend(part);
        nodes += count;
    }
    out.sort_unstable();
    Ok(Enumeration {
        labelings: out,
        missing_basis: false,
        nodes,
    })
}

/// The labels excluded at position `next` given labels at positions
/// `0..partial.len()`.
pub fn forbidden_labels(partial: &[Label], next: usize, p: &CombPolytope) -> Vec<Label> {
    let mut mask = 0u64;
    for set in p.vertex_positions() {
        if !set.contains(&next) {
            continue;
        }
        let placed: Vec<u32> = set
            .iter()
            .filter(|&&q| q < partial.len() && q != next)
            .map(|&q| partial[q].value())
            .collect();
        mask |= gf2::subset_sum_mask(&placed);
    }
    (1..64u32)
        .filter(|&v| (mask >> v) & 1 == 1)
        .map(Label::from_raw)
        .collect()
}

/// Direct check of the vertex-basis condition, independent of the search.
pub fn is_characteristic(labels: &[Label], p: &CombPolytope) -> Result<bool, EnumerateError> {
    if labels.len() != p.facet_count() {
        return Err(EnumerateError::WrongArity {
            expected: p.facet_count(),
            got: labels.len(),
        });
    }
    let n = p.dim();
    if labels.iter().any(|l| l.value() == 0 || l.value() >= 1 << n) {
        return Ok(false);
    }
    Ok(p.vertex_positions().iter().all(|set| {
        let at_vertex: Vec<u32> = set.iter().map(|&q| labels[q].value()).collect();
        gf2::rank(&at_vertex) == n
    }))
}

/// Filters every completion of the pinned basis through
/// [`is_characteristic`]. Output is sorted, as with [`enumerate`].
pub fn brute_force_enumerate(
    p: &CombPolytope,
    alphabet: &Alphabet,
    bound: u128,
) -> Result<Vec<Labeling>, EnumerateError> {
    check_alphabet(p, alphabet)?;
    let n = p.dim();
    let d = p.facet_count();
    let free = d.saturating_sub(n);
    let size = (alphabet.len() as u128)
        .checked_pow(free as u32)
        .unwrap_or(u128::MAX);
    if size > bound {
        return Err(EnumerateError::InstanceTooLarge(size));
    }
    if !alphabet.contains_standard_basis() {
        return Ok(Vec::new());
    }
    let symbols = alphabet.labels();
    let mut digits = vec![0usize; free];
    let mut out = Vec::new();
    loop {
        let labels: Vec<Label> = (0..n)
            .map(Label::basis)
            .chain(digits.iter().map(|&k| symbols[k]))
            .collect();
        if is_characteristic(&labels, p)? {
            out.push(Labeling::new(labels));
        }
        let mut i = free;
        loop {
            if i == 0 {
                out.sort_unstable();
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < symbols.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}
