//! Linear algebra over GF(2) on labels stored as bit vectors.
//!
//! A label is a nonzero vector of `(Z_2)^n` packed into the low `n` bits of an
//! integer. Addition is exclusive-or. When a label is written as a coordinate
//! tuple, coordinate 1 is the most significant bit, so `(1,0,0)` is `4` and
//! `(1,1,0)` is `6`.

use std::fmt;
use std::ops::BitXor;

use serde::{Deserialize, Serialize};

use crate::error::Gf2Error;

/// Largest ambient dimension supported. Label sets are tracked as `u64` masks
/// indexed by label value, so `2^n` must not exceed 64.
pub const MAX_DIM: usize = 6;

/// A nonzero vector of `(Z_2)^n`, encoded as its decimal value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(u32);

impl Label {
    /// Validates `value` as a label of `(Z_2)^n`.
    pub fn new(value: u32, n: usize) -> Result<Self, Gf2Error> {
        check_dim(n)?;
        if value == 0 || value >= 1 << n {
            return Err(Gf2Error::LabelOutOfRange { value, n });
        }
        Ok(Label(value))
    }

    /// Wraps a value that the caller already knows to be a nonzero label.
    pub(crate) const fn from_raw(value: u32) -> Self {
        Label(value)
    }

    /// The `i`-th standard basis vector (0-based), i.e. decimal `2^i`.
    pub const fn basis(i: usize) -> Self {
        Label(1 << i)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    /// Coordinate tuple of this label in `(Z_2)^n`, most significant bit first.
    pub fn to_coords(self, n: usize) -> Result<Vec<u8>, Gf2Error> {
        check_dim(n)?;
        if self.0 >= 1 << n {
            return Err(Gf2Error::LabelOutOfRange { value: self.0, n });
        }
        Ok((0..n)
            .rev()
            .map(|bit| ((self.0 >> bit) & 1) as u8)
            .collect())
    }

    /// Inverse of [`Label::to_coords`]. The tuple length is the dimension.
    pub fn from_coords(coords: &[u8]) -> Result<Self, Gf2Error> {
        let n = coords.len();
        check_dim(n)?;
        let mut value = 0u32;
        for &c in coords {
            if c > 1 {
                return Err(Gf2Error::NotABit(c));
            }
            value = (value << 1) | u32::from(c);
        }
        Label::new(value, n)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Raw exclusive-or. The result may be zero, so it is returned as an integer.
impl BitXor for Label {
    type Output = u32;

    fn bitxor(self, rhs: Self) -> u32 {
        self.0 ^ rhs.0
    }
}

fn check_dim(n: usize) -> Result<(), Gf2Error> {
    if n == 0 || n > MAX_DIM {
        Err(Gf2Error::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

fn check_labels(labels: &[u32], n: usize) -> Result<(), Gf2Error> {
    check_dim(n)?;
    for &value in labels {
        if value == 0 || value >= 1 << n {
            return Err(Gf2Error::LabelOutOfRange { value, n });
        }
    }
    Ok(())
}

/// Rank of a list of bit vectors, by elimination on leading bits.
pub fn rank(vectors: &[u32]) -> usize {
    // pivots[b] holds a reduced vector whose highest set bit is b
    let mut pivots = [0u32; 32];
    let mut rank = 0;
    for &v in vectors {
        let mut x = v;
        while x != 0 {
            let top = 31 - x.leading_zeros() as usize;
            if pivots[top] == 0 {
                pivots[top] = x;
                rank += 1;
                break;
            }
            x ^= pivots[top];
        }
    }
    rank
}

/// True iff the labels are linearly independent over GF(2).
pub fn is_independent(labels: &[Label], n: usize) -> Result<bool, Gf2Error> {
    let raw: Vec<u32> = labels.iter().map(|l| l.0).collect();
    check_labels(&raw, n)?;
    Ok(raw.len() <= n && rank(&raw) == raw.len())
}

/// Mask with bit `v` set for every nonzero exclusive-or sum `v` over a
/// nonempty subset of `labels`. Requires every label below 64.
pub fn subset_sum_mask(labels: &[u32]) -> u64 {
    // sums of subsets, including the empty one, closed under adding each label
    let mut sums: u64 = 1;
    for &l in labels {
        let mut shifted = 0u64;
        let mut rest = sums;
        while rest != 0 {
            let s = rest.trailing_zeros();
            rest &= rest - 1;
            shifted |= 1 << (s ^ l);
        }
        sums |= shifted;
    }
    sums & !1
}

/// All nonzero exclusive-or sums over nonempty subsets, in increasing order.
pub fn subset_sums(labels: &[Label]) -> Vec<Label> {
    let mut sums = std::collections::BTreeSet::new();
    sums.insert(0u32);
    for l in labels {
        let next: Vec<u32> = sums.iter().map(|s| s ^ l.0).collect();
        sums.extend(next);
    }
    sums.into_iter().filter(|&s| s != 0).map(Label).collect()
}

/// Invertible linear map on `(Z_2)^n`. Column `i` is the image of the basis
/// vector with decimal value `2^i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearMap {
    columns: Vec<u32>,
}

impl LinearMap {
    pub fn identity(n: usize) -> Self {
        LinearMap {
            columns: (0..n).map(|i| 1 << i).collect(),
        }
    }

    /// Builds a map from its columns, rejecting singular matrices.
    pub fn from_columns(columns: Vec<u32>) -> Result<Self, Gf2Error> {
        let n = columns.len();
        check_labels(&columns, n).map_err(|_| Gf2Error::NotABasis)?;
        if rank(&columns) != n {
            return Err(Gf2Error::NotABasis);
        }
        Ok(LinearMap { columns })
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    #[inline]
    pub fn apply_raw(&self, x: u32) -> u32 {
        let mut out = 0;
        let mut rest = x;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out ^= self.columns[bit];
        }
        out
    }

    /// Image of a label. Nonzero because the map is invertible.
    pub fn apply(&self, x: Label) -> Label {
        Label(self.apply_raw(x.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            columns: other.columns.iter().map(|&c| self.apply_raw(c)).collect(),
        }
    }

    pub fn inverse(&self) -> LinearMap {
        let n = self.dim();
        invert_columns(&self.columns, n).expect("LinearMap is invertible by construction")
    }
}

/// Gauss-Jordan inversion of the matrix whose columns are `columns`.
fn invert_columns(columns: &[u32], n: usize) -> Option<LinearMap> {
    // Row-reduce rows of [M | I] where row r of M has bit c set iff column c has bit r.
    let mut rows: Vec<(u32, u32)> = (0..n)
        .map(|r| {
            let mut m = 0u32;
            for (c, &col) in columns.iter().enumerate() {
                if (col >> r) & 1 == 1 {
                    m |= 1 << c;
                }
            }
            (m, 1 << r)
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&r| (rows[r].0 >> c) & 1 == 1)?;
        rows.swap(c, pivot);
        let (pm, pi) = rows[c];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != c && (row.0 >> c) & 1 == 1 {
                row.0 ^= pm;
                row.1 ^= pi;
            }
        }
    }
    // rows now hold the inverse: row r, bit c = inv[r][c]
    let inv_columns = (0..n)
        .map(|c| {
            let mut col = 0u32;
            for (r, row) in rows.iter().enumerate() {
                if (row.1 >> c) & 1 == 1 {
                    col |= 1 << r;
                }
            }
            col
        })
        .collect();
    Some(LinearMap {
        columns: inv_columns,
    })
}

/// The unique map sending `first[i]` to `2^i` for every `i`.
pub fn normalizing_map(first: &[Label]) -> Result<LinearMap, Gf2Error> {
    let n = first.len();
    let raw: Vec<u32> = first.iter().map(|l| l.0).collect();
    check_labels(&raw, n).map_err(|_| Gf2Error::NotABasis)?;
    invert_columns(&raw, n).ok_or(Gf2Error::NotABasis)
}

/// Raw-integer version of [`normalizing_map`] for the search and action inner
/// loops. Returns `None` on a dependent list.
pub(crate) fn normalizing_map_raw(first: &[u32]) -> Option<LinearMap> {
    invert_columns(first, first.len())
}
