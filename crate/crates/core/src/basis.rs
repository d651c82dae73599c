//! Configuration space: one electron per qubit column, each on one dot of one row.
//!
//! Sites within a qubit are ordered `(row, dot)` lexicographically. Ordinals are
//! mixed-radix numbers over the per-qubit site counts with qubit 0 as the
//! fastest-varying digit.

use serde::Serialize;

use crate::circuit::{CircuitSpec, RowOp};
use crate::error::{GsqcError, Result};

/// One dot of one row on a qubit column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Site {
    pub row: usize,
    pub dot: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteIndex {
    pub qubit: String,
    pub row: usize,
    pub dot: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisOptions {
    /// Drop sites no Hamiltonian term touches.
    pub prune: bool,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self { prune: true }
    }
}

#[derive(Clone, Debug)]
pub struct BasisMap {
    qubit_ids: Vec<String>,
    sites: Vec<Vec<Site>>,
    lookup: Vec<Vec<[Option<usize>; 2]>>,
    strides: Vec<usize>,
    dimension: usize,
    pruned: Vec<SiteIndex>,
}

pub fn build_basis(spec: &CircuitSpec) -> Result<BasisMap> {
    build_basis_with(spec, BasisOptions::default())
}

pub fn build_basis_with(spec: &CircuitSpec, opts: BasisOptions) -> Result<BasisMap> {
    let mut qubit_ids = Vec::with_capacity(spec.qubits.len());
    let mut sites = Vec::with_capacity(spec.qubits.len());
    let mut lookup = Vec::with_capacity(spec.qubits.len());
    let mut pruned = Vec::new();

    for q in &spec.qubits {
        let n = q.n_rows();
        let mut touched = vec![[false; 2]; n];
        touched[0] = [true, true];
        for (k, op) in q.rows.iter().enumerate() {
            let j = k + 1;
            match op {
                RowOp::Project { dot, .. } => {
                    let d = (*dot as usize).min(1);
                    touched[j - 1][d] = true;
                    touched[j][d] = true;
                }
                _ => {
                    touched[j - 1] = [true, true];
                    touched[j] = [true, true];
                }
            }
        }
        let mut list = Vec::with_capacity(2 * n);
        let mut table = vec![[None; 2]; n];
        for (row, t) in touched.iter().enumerate() {
            for dot in 0..2u8 {
                if t[dot as usize] || !opts.prune {
                    table[row][dot as usize] = Some(list.len());
                    list.push(Site { row, dot });
                } else {
                    pruned.push(SiteIndex { qubit: q.id.clone(), row, dot });
                }
            }
        }
        qubit_ids.push(q.id.clone());
        sites.push(list);
        lookup.push(table);
    }

    let mut strides = Vec::with_capacity(sites.len());
    let mut dimension = 1usize;
    for s in &sites {
        strides.push(dimension);
        dimension = dimension
            .checked_mul(s.len())
            .ok_or_else(|| GsqcError::InvalidParameter("configuration space dimension overflows".into()))?;
    }
    Ok(BasisMap { qubit_ids, sites, lookup, strides, dimension, pruned })
}

impl BasisMap {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn n_qubits(&self) -> usize {
        self.sites.len()
    }

    pub fn qubit_ids(&self) -> &[String] {
        &self.qubit_ids
    }

    pub fn qubit_index(&self, id: &str) -> Option<usize> {
        self.qubit_ids.iter().position(|q| q == id)
    }

    /// Number of sites (radix) of qubit `q`.
    pub fn radix(&self, q: usize) -> usize {
        self.sites[q].len()
    }

    pub fn stride(&self, q: usize) -> usize {
        self.strides[q]
    }

    pub fn n_rows(&self, q: usize) -> usize {
        self.lookup[q].len()
    }

    pub fn sites(&self, q: usize) -> &[Site] {
        &self.sites[q]
    }

    pub fn site(&self, q: usize, local: usize) -> Site {
        self.sites[q][local]
    }

    /// Local index of `(row, dot)` on qubit `q`, `None` if pruned or out of range.
    pub fn local(&self, q: usize, row: usize, dot: u8) -> Option<usize> {
        self.lookup.get(q)?.get(row)?.get(dot as usize).copied().flatten()
    }

    /// Sites removed by pruning.
    pub fn pruned(&self) -> &[SiteIndex] {
        &self.pruned
    }

    /// Digit of qubit `q` in `ordinal`.
    #[inline]
    pub fn digit(&self, ordinal: usize, q: usize) -> usize {
        (ordinal / self.strides[q]) % self.sites[q].len()
    }

    pub fn index_of(&self, config: &[usize]) -> Result<usize> {
        if config.len() != self.sites.len() {
            return Err(GsqcError::InvalidSite(format!(
                "configuration has {} entries for {} qubits",
                config.len(),
                self.sites.len()
            )));
        }
        let mut ordinal = 0;
        for (q, &local) in config.iter().enumerate() {
            if local >= self.sites[q].len() {
                return Err(GsqcError::InvalidSite(format!(
                    "site {local} on qubit `{}` (radix {})",
                    self.qubit_ids[q],
                    self.sites[q].len()
                )));
            }
            ordinal += local * self.strides[q];
        }
        Ok(ordinal)
    }

    pub fn decode(&self, ordinal: usize) -> Result<Vec<usize>> {
        if ordinal >= self.dimension {
            return Err(GsqcError::OrdinalOutOfRange { ordinal, dimension: self.dimension });
        }
        Ok((0..self.sites.len()).map(|q| self.digit(ordinal, q)).collect())
    }

    /// Index of a configuration given as `(row, dot)` per qubit.
    pub fn index_of_sites(&self, config: &[Site]) -> Result<usize> {
        let locals = config
            .iter()
            .enumerate()
            .map(|(q, s)| {
                self.local(q, s.row, s.dot).ok_or_else(|| {
                    GsqcError::InvalidSite(format!(
                        "({}, {}) on qubit `{}`",
                        s.row,
                        s.dot,
                        self.qubit_ids.get(q).map_or("?", |s| s)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.index_of(&locals)
    }

    /// Human-readable legend, one line per qubit: `id radix stride sites...`.
    pub fn legend(&self) -> String {
        let mut out = String::new();
        for q in 0..self.sites.len() {
            out.push_str(&format!(
                "# qubit {} radix {} stride {} sites",
                self.qubit_ids[q],
                self.radix(q),
                self.strides[q]
            ));
            for s in &self.sites[q] {
                out.push_str(&format!(" {}:{}", s.row, s.dot));
            }
            out.push('\n');
        }
        out
    }
}
