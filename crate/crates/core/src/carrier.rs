//! Finite carriers, parameter subsets, and indexed function tables — the
//! substrate every other module is built on.
//!
//! Elements are dense indices `0..n-1`; printable labels are metadata only.
//! A [`ParamFamily`] stores one endo-map of the carrier per
//! `(z_i, z_j, a)` triple, with the ordered parameter pair ranging over a
//! distinguished subset `Y` of the carrier. No symmetry between the
//! `(z_i, z_j)` and `(z_j, z_i)` slots is ever assumed.

use crate::error::{Counterexample, Error, Result};
use serde::{Deserialize, Serialize};

/// A finite carrier set `X` of size `n`, with optional integer labels
/// (e.g. `1,3,5,7` for the odd residues mod 8).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Carrier {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
}

impl Carrier {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("carrier must be non-empty".into()));
        }
        Ok(Carrier { n, labels: None })
    }

    pub fn with_labels(labels: Vec<i64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Invalid("carrier must be non-empty".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::Invalid(format!("duplicate label {a}")));
                }
            }
        }
        Ok(Carrier {
            n,
            labels: Some(labels),
        })
    }

    /// Printable label of an element (falls back to the index itself).
    pub fn label(&self, idx: usize) -> i64 {
        match &self.labels {
            Some(l) => l[idx],
            None => idx as i64,
        }
    }

    /// Index of a label, if present.
    pub fn index_of(&self, label: i64) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|&x| x == label),
            None => {
                let idx = usize::try_from(label).ok()?;
                (idx < self.n).then_some(idx)
            }
        }
    }
}

/// An ordered subset of carrier indices; houses `Y` and the parameters
/// drawn from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSubset {
    pub indices: Vec<usize>,
}

impl ParamSubset {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Invalid("parameter subset must be non-empty".into()));
        }
        let mut seen = vec![false; n];
        for &i in &indices {
            if i >= n {
                return Err(Error::Invalid(format!(
                    "parameter index {i} out of range (n = {n})"
                )));
            }
            if seen[i] {
                return Err(Error::Invalid(format!("duplicate parameter index {i}")));
            }
            seen[i] = true;
        }
        Ok(ParamSubset { indices })
    }

    /// The full carrier as a parameter subset.
    pub fn full(n: usize) -> Self {
        ParamSubset {
            indices: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Slot of a carrier index inside the subset, if present.
    pub fn slot_of(&self, carrier_index: usize) -> Option<usize> {
        self.indices.iter().position(|&x| x == carrier_index)
    }
}

/// A total map `X -> X` given by its value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndoMap {
    pub table: Vec<usize>,
}

impl EndoMap {
    pub fn new(table: Vec<usize>) -> Result<Self> {
        let n = table.len();
        for &v in &table {
            if v >= n {
                return Err(Error::Invalid(format!("entry {v} out of range (n = {n})")));
            }
        }
        Ok(EndoMap { table })
    }

    pub fn identity(n: usize) -> Self {
        EndoMap {
            table: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Decided exhaustively in O(n): true iff the table is a permutation.
    pub fn is_bijection(&self) -> bool {
        is_bijection_slice(&self.table)
    }

    /// `(f.compose(g))(x) = f(g(x))`.
    pub fn compose(&self, g: &EndoMap) -> EndoMap {
        debug_assert_eq!(self.len(), g.len());
        EndoMap {
            table: g.table.iter().map(|&x| self.table[x]).collect(),
        }
    }

    /// Inverse permutation; errors with the first element that has no
    /// unique preimage when the map is not a bijection.
    pub fn invert(&self) -> Result<EndoMap> {
        let n = self.len();
        let mut inv = vec![usize::MAX; n];
        for (x, &y) in self.table.iter().enumerate() {
            if inv[y] != usize::MAX {
                return Err(Error::NotInvertible { witness: y });
            }
            inv[y] = x;
        }
        if let Some(hole) = inv.iter().position(|&v| v == usize::MAX) {
            return Err(Error::NotInvertible { witness: hole });
        }
        Ok(EndoMap { table: inv })
    }
}

/// True iff `table` is a permutation of `0..n-1`.
pub fn is_bijection_slice(table: &[usize]) -> bool {
    let n = table.len();
    let mut seen = vec![false; n];
    for &v in table {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// A fully populated table of endo-maps indexed by
/// `(z_i slot, z_j slot, a)`. Houses `▷`, `σ`, `τ`, `•` and every other
/// pair-parametrised datum. Stored flat: entry `(zi, zj, a, b)` lives at
/// `((zi*m + zj)*n + a)*n + b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamFamily {
    /// Carrier size `|X|`.
    pub n: usize,
    /// Parameter subset `Y` (carrier indices, ordered, distinct).
    pub params: ParamSubset,
    data: Vec<usize>,
}

impl ParamFamily {
    /// Number of parameter slots `|Y|`.
    pub fn m(&self) -> usize {
        self.params.len()
    }

    /// Build from a closure `(zi, zj, a, b) -> usize` over slot indices.
    pub fn from_fn(
        n: usize,
        params: ParamSubset,
        mut f: impl FnMut(usize, usize, usize, usize) -> usize,
    ) -> Self {
        let m = params.len();
        let mut data = Vec::with_capacity(m * m * n * n);
        for zi in 0..m {
            for zj in 0..m {
                for a in 0..n {
                    for b in 0..n {
                        data.push(f(zi, zj, a, b));
                    }
                }
            }
        }
        ParamFamily { n, params, data }
    }

    /// Build from nested arrays indexed `[zi][zj][a][b]`.
    pub fn from_nested(
        n: usize,
        params: ParamSubset,
        nested: &[Vec<Vec<Vec<usize>>>],
    ) -> Result<Self> {
        let m = params.len();
        if nested.len() != m {
            return Err(Error::Invalid(format!(
                "family has {} zi-slots, expected {m}",
                nested.len()
            )));
        }
        let mut data = Vec::with_capacity(m * m * n * n);
        for (zi, layer_i) in nested.iter().enumerate() {
            if layer_i.len() != m {
                return Err(Error::Invalid(format!(
                    "family[{zi}] has {} zj-slots, expected {m}",
                    layer_i.len()
                )));
            }
            for layer_j in layer_i {
                if layer_j.len() != n {
                    return Err(Error::Invalid(format!(
                        "family slot has {} element rows, expected {n}",
                        layer_j.len()
                    )));
                }
                for row in layer_j {
                    if row.len() != n {
                        return Err(Error::Invalid(format!(
                            "family row has {} entries, expected {n}",
                            row.len()
                        )));
                    }
                    for &v in row {
                        if v >= n {
                            return Err(Error::Invalid(format!(
                                "family entry {v} out of range (n = {n})"
                            )));
                        }
                        data.push(v);
                    }
                }
            }
        }
        Ok(ParamFamily { n, params, data })
    }

    /// Nested-array view `[zi][zj][a][b]`, the canonical JSON form.
    pub fn to_nested(&self) -> Vec<Vec<Vec<Vec<usize>>>> {
        let (n, m) = (self.n, self.m());
        (0..m)
            .map(|zi| {
                (0..m)
                    .map(|zj| (0..n).map(|a| self.map_slice(zi, zj, a).to_vec()).collect())
                    .collect()
            })
            .collect()
    }

    #[inline]
    fn offset(&self, zi: usize, zj: usize, a: usize) -> usize {
        ((zi * self.m() + zj) * self.n + a) * self.n
    }

    /// Table entry: the value of the `(zi, zj, a)` map at `b`.
    #[inline]
    pub fn apply(&self, zi: usize, zj: usize, a: usize, b: usize) -> usize {
        self.data[self.offset(zi, zj, a) + b]
    }

    /// The `(zi, zj, a)` map as a slice of length `n`.
    #[inline]
    pub fn map_slice(&self, zi: usize, zj: usize, a: usize) -> &[usize] {
        let o = self.offset(zi, zj, a);
        &self.data[o..o + self.n]
    }

    /// The `(zi, zj, a)` map as an owned [`EndoMap`].
    pub fn endo(&self, zi: usize, zj: usize, a: usize) -> EndoMap {
        EndoMap {
            table: self.map_slice(zi, zj, a).to_vec(),
        }
    }

    /// Mutate one entry (test and perturbation helper).
    pub fn set(&mut self, zi: usize, zj: usize, a: usize, b: usize, v: usize) {
        assert!(v < self.n);
        let o = self.offset(zi, zj, a);
        self.data[o + b] = v;
    }

    /// True iff every `(zi, zj, a)` map is a permutation.
    pub fn all_bijective(&self) -> bool {
        self.first_non_bijective().is_none()
    }

    /// First `(zi, zj, a)` whose map is not a permutation, in lexicographic
    /// order.
    pub fn first_non_bijective(&self) -> Option<(usize, usize, usize)> {
        let (n, m) = (self.n, self.m());
        for zi in 0..m {
            for zj in 0..m {
                for a in 0..n {
                    if !is_bijection_slice(self.map_slice(zi, zj, a)) {
                        return Some((zi, zj, a));
                    }
                }
            }
        }
        None
    }

    /// Pointwise inverse family: entry `(zi, zj, a)` becomes the inverse
    /// permutation of the original entry.
    pub fn invert_each(&self) -> Result<ParamFamily> {
        let (n, m) = (self.n, self.m());
        let mut out = Vec::with_capacity(self.data.len());
        for zi in 0..m {
            for zj in 0..m {
                for a in 0..n {
                    let inv = self.endo(zi, zj, a).invert()?;
                    out.extend_from_slice(&inv.table);
                }
            }
        }
        Ok(ParamFamily {
            n,
            params: self.params.clone(),
            data: out,
        })
    }

    /// Constant-in-`a` identity family: every `(zi, zj, a)` map is `id`.
    pub fn identity(n: usize, params: ParamSubset) -> Self {
        ParamFamily::from_fn(n, params, |_, _, _, b| b)
    }

    /// Flat data view, used by canonical-form computations.
    pub fn flat(&self) -> &[usize] {
        &self.data
    }
}

/// Render a failing tuple as `f(args) = lhs != rhs` for counterexamples.
pub(crate) fn cx(
    site: &str,
    zs: &[usize],
    elems: &[usize],
    lhs: usize,
    rhs: usize,
) -> Counterexample {
    Counterexample::new(site, zs.to_vec(), elems.to_vec(), lhs, rhs)
}
