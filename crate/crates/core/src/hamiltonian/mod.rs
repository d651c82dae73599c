//! Circuit Hamiltonian assembly.
//!
//! Every row transition, coupling and boundary becomes an [`Emitter`]: a sum of
//! tensor products of single-qubit site operators. The full Hamiltonian is the
//! sum of all emitters, stored in units of ε.
//!
//! Per row `j` (hops connect row `j-1` to row `j`):
//!
//! | row           | operator                                                         |
//! |---------------|------------------------------------------------------------------|
//! | unitary `U`   | `n_{j-1} + n_j - (C†_j U C_{j-1} + h.c.)`                        |
//! | boost `λ`     | `n_{j-1} + λ⁻² n_j - λ⁻¹ (C†_j C_{j-1} + h.c.)`                  |
//! | project `γ,λ` | `n_{j-1,γ} + λ⁻² n_{j,γ} - λ⁻¹ (c†_{j,γ} c_{j-1,γ} + h.c.)`      |
//! | coupling      | `n^α_{jα-1} n^β_{jβ} + h^α(I) n^β_{jβ-1} + n^α_{jα,0} h^β(I) + n^α_{jα,1} h^β(U)` |
//! | boundary      | `E Σ (I + a·σ)_{ss'} c†_{0,s} c_{0,s'}`                          |

mod csr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::basis::BasisMap;
use crate::circuit::{CircuitSpec, Coupling, GateMatrix, RowOp};
use crate::error::{GsqcError, Result};

pub use csr::SparseHermitian;

/// Sparse operator on one qubit's sites, stored by row.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOp {
    rows: Vec<Vec<(usize, C64)>>,
}

impl LocalOp {
    fn zeros(radix: usize) -> Self {
        Self { rows: vec![Vec::new(); radix] }
    }

    fn add(&mut self, i: usize, j: usize, v: C64) {
        if v == C64::new(0.0, 0.0) {
            return;
        }
        match self.rows[i].iter_mut().find(|(c, _)| *c == j) {
            Some((_, acc)) => *acc += v,
            None => self.rows[i].push((j, v)),
        }
    }

    fn add_op(&mut self, other: &LocalOp) {
        for (i, row) in other.rows.iter().enumerate() {
            for &(j, v) in row {
                self.add(i, j, v);
            }
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[(usize, C64)] {
        &self.rows[i]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }
}

/// Tensor product of site operators on distinct qubits, identity elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductTerm {
    pub factors: Vec<(usize, LocalOp)>,
}

/// One physical Hamiltonian term (a row, a coupling, or a boundary).
#[derive(Clone, Debug, PartialEq)]
pub struct Emitter {
    pub label: String,
    pub terms: Vec<ProductTerm>,
}

impl Emitter {
    /// `y += T x` for this emitter.
    pub fn apply_add(&self, basis: &BasisMap, x: &[C64], y: &mut [C64]) {
        for term in &self.terms {
            apply_term_add(term, basis, x, y);
        }
    }
}

fn apply_term_add(term: &ProductTerm, basis: &BasisMap, x: &[C64], y: &mut [C64]) {
    for (i, yi) in y.iter_mut().enumerate() {
        for_each_term_entry(term, basis, i, |j, v| *yi += v * x[j]);
    }
}

/// Calls `f(column, value)` for every nonzero entry of row `i` of `term`.
#[inline]
fn for_each_term_entry(term: &ProductTerm, basis: &BasisMap, i: usize, mut f: impl FnMut(usize, C64)) {
    match term.factors.as_slice() {
        [(qa, a)] => {
            let sa = basis.digit(i, *qa);
            let stride = basis.stride(*qa) as isize;
            for &(ta, va) in a.row(sa) {
                let j = i as isize + (ta as isize - sa as isize) * stride;
                f(j as usize, va);
            }
        }
        [(qa, a), (qb, b)] => {
            let (sa, sb) = (basis.digit(i, *qa), basis.digit(i, *qb));
            let ra = a.row(sa);
            if ra.is_empty() {
                return;
            }
            let rb = b.row(sb);
            let (da, db) = (basis.stride(*qa) as isize, basis.stride(*qb) as isize);
            for &(ta, va) in ra {
                let ja = i as isize + (ta as isize - sa as isize) * da;
                for &(tb, vb) in rb {
                    f((ja + (tb as isize - sb as isize) * db) as usize, va * vb);
                }
            }
        }
        _ => unreachable!("emitters have one or two factors"),
    }
}

struct Sites<'a> {
    basis: &'a BasisMap,
    qubit: usize,
    id: &'a str,
}

impl Sites<'_> {
    fn at(&self, row: usize, dot: u8) -> Result<usize> {
        self.basis.local(self.qubit, row, dot).ok_or_else(|| {
            GsqcError::BasisMismatch(format!(
                "term references pruned or missing site ({row}, {dot}) on qubit `{}`",
                self.id
            ))
        })
    }

    fn zeros(&self) -> LocalOp {
        LocalOp::zeros(self.basis.radix(self.qubit))
    }

    /// `n_{j-1} + n_j - (C†_j U C_{j-1} + h.c.)`
    fn hop(&self, j: usize, u: &GateMatrix) -> Result<LocalOp> {
        let mut op = self.zeros();
        let one = C64::new(1.0, 0.0);
        for d in 0..2u8 {
            op.add(self.at(j - 1, d)?, self.at(j - 1, d)?, one);
            op.add(self.at(j, d)?, self.at(j, d)?, one);
        }
        for a in 0..2u8 {
            for b in 0..2u8 {
                let v = u.get(a as usize, b as usize);
                let (to, from) = (self.at(j, a)?, self.at(j - 1, b)?);
                op.add(to, from, -v);
                op.add(from, to, -v.conj());
            }
        }
        Ok(op)
    }

    /// Boost over the given dots: `n_{j-1} + λ⁻² n_j - λ⁻¹ (hop + h.c.)`.
    fn amplify(&self, j: usize, lambda: f64, dots: &[u8]) -> Result<LocalOp> {
        let mut op = self.zeros();
        for &d in dots {
            let (from, to) = (self.at(j - 1, d)?, self.at(j, d)?);
            op.add(from, from, C64::new(1.0, 0.0));
            op.add(to, to, C64::new(1.0 / (lambda * lambda), 0.0));
            op.add(to, from, C64::new(-1.0 / lambda, 0.0));
            op.add(from, to, C64::new(-1.0 / lambda, 0.0));
        }
        Ok(op)
    }

    fn occupation(&self, row: usize, dots: &[u8]) -> Result<LocalOp> {
        let mut op = self.zeros();
        for &d in dots {
            let s = self.at(row, d)?;
            op.add(s, s, C64::new(1.0, 0.0));
        }
        Ok(op)
    }

    fn boundary(&self, m: [[C64; 2]; 2]) -> Result<LocalOp> {
        let mut op = self.zeros();
        for s in 0..2u8 {
            for t in 0..2u8 {
                op.add(self.at(0, s)?, self.at(0, t)?, m[s as usize][t as usize]);
            }
        }
        Ok(op)
    }
}

fn check_basis(spec: &CircuitSpec, basis: &BasisMap) -> Result<()> {
    if basis.n_qubits() != spec.qubits.len() {
        return Err(GsqcError::BasisMismatch(format!(
            "basis has {} qubits, circuit has {}",
            basis.n_qubits(),
            spec.qubits.len()
        )));
    }
    for (qi, q) in spec.qubits.iter().enumerate() {
        if basis.qubit_ids()[qi] != q.id || basis.n_rows(qi) != q.n_rows() {
            return Err(GsqcError::BasisMismatch(format!("qubit `{}` does not match basis layout", q.id)));
        }
    }
    Ok(())
}

/// All Hamiltonian terms of the circuit, in circuit order: per qubit its boundary
/// and single-qubit rows, then every coupling.
pub fn emitters(spec: &CircuitSpec, basis: &BasisMap) -> Result<Vec<Emitter>> {
    check_basis(spec, basis)?;
    let mut out = Vec::new();
    let sites = |qi: usize| Sites { basis, qubit: qi, id: &spec.qubits[qi].id };
    for (qi, q) in spec.qubits.iter().enumerate() {
        let s = sites(qi);
        out.push(Emitter {
            label: format!("{}:boundary", q.id),
            terms: vec![ProductTerm { factors: vec![(qi, s.boundary(q.boundary.matrix())?)] }],
        });
        for (k, op) in q.rows.iter().enumerate() {
            let j = k + 1;
            let local = match op {
                RowOp::Unitary { gate } => s.hop(j, &gate.matrix())?,
                RowOp::Boost { lambda } => s.amplify(j, *lambda, &[0, 1])?,
                RowOp::Project { dot, lambda } => s.amplify(j, *lambda, &[*dot])?,
                RowOp::CoupledControl { .. } | RowOp::CoupledTarget { .. } => continue,
            };
            out.push(Emitter {
                label: format!("{}:row{}:{}", q.id, j, op.kind()),
                terms: vec![ProductTerm { factors: vec![(qi, local)] }],
            });
        }
    }
    for c in spec.couplings()? {
        out.push(coupling_emitter(spec, basis, &c)?);
    }
    Ok(out)
}

fn coupling_emitter(spec: &CircuitSpec, basis: &BasisMap, c: &Coupling) -> Result<Emitter> {
    let a = Sites { basis, qubit: c.control, id: &spec.qubits[c.control].id };
    let b = Sites { basis, qubit: c.target, id: &spec.qubits[c.target].id };
    let (ja, jb) = (c.control_row, c.target_row);
    let identity = GateMatrix::identity();
    let terms = vec![
        ProductTerm {
            factors: vec![(c.control, a.occupation(ja - 1, &[0, 1])?), (c.target, b.occupation(jb, &[0, 1])?)],
        },
        ProductTerm { factors: vec![(c.control, a.hop(ja, &identity)?), (c.target, b.occupation(jb - 1, &[0, 1])?)] },
        ProductTerm { factors: vec![(c.control, a.occupation(ja, &[0])?), (c.target, b.hop(jb, &identity)?)] },
        ProductTerm { factors: vec![(c.control, a.occupation(ja, &[1])?), (c.target, b.hop(jb, &c.gate.matrix())?)] },
    ];
    Ok(Emitter {
        label: format!("{}:row{}->{}:row{}:C{}", spec.qubits[c.control].id, ja, spec.qubits[c.target].id, jb, c.gate),
        terms,
    })
}

const ASSEMBLY_CHUNK: usize = 4096;

/// Sums all emitters into a canonical CSR matrix.
pub fn assemble(spec: &CircuitSpec, basis: &BasisMap) -> Result<SparseHermitian> {
    let ems = emitters(spec, basis)?;
    let dim = basis.dimension();
    if dim > u32::MAX as usize {
        return Err(GsqcError::InvalidParameter(format!("dimension {dim} too large for sparse storage")));
    }

    // single-qubit emitters collapse into one local operator per qubit
    let mut local: Vec<LocalOp> = (0..basis.n_qubits()).map(|q| LocalOp::zeros(basis.radix(q))).collect();
    let mut pairs: Vec<&ProductTerm> = Vec::new();
    for e in &ems {
        for t in &e.terms {
            match t.factors.as_slice() {
                [(q, op)] => local[*q].add_op(op),
                _ => pairs.push(t),
            }
        }
    }
    let singles: Vec<ProductTerm> = local
        .into_iter()
        .enumerate()
        .filter(|(_, op)| !op.is_zero())
        .map(|(q, op)| ProductTerm { factors: vec![(q, op)] })
        .collect();

    let n_chunks = dim.div_ceil(ASSEMBLY_CHUNK);
    let chunks: Vec<(Vec<usize>, Vec<u32>, Vec<C64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * ASSEMBLY_CHUNK;
            let hi = (lo + ASSEMBLY_CHUNK).min(dim);
            let mut lens = Vec::with_capacity(hi - lo);
            let mut cols = Vec::new();
            let mut vals = Vec::new();
            let mut buf: Vec<(usize, C64)> = Vec::new();
            for i in lo..hi {
                buf.clear();
                for t in singles.iter().chain(pairs.iter().copied()) {
                    for_each_term_entry(t, basis, i, |j, v| buf.push((j, v)));
                }
                buf.sort_by_key(|&(j, _)| j);
                let start = cols.len();
                let mut k = 0;
                while k < buf.len() {
                    let j = buf[k].0;
                    let mut acc = C64::new(0.0, 0.0);
                    while k < buf.len() && buf[k].0 == j {
                        acc += buf[k].1;
                        k += 1;
                    }
                    if acc != C64::new(0.0, 0.0) || j == i {
                        cols.push(j as u32);
                        vals.push(acc);
                    }
                }
                lens.push(cols.len() - start);
            }
            (lens, cols, vals)
        })
        .collect();

    let nnz: usize = chunks.iter().map(|c| c.1.len()).sum();
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols = Vec::with_capacity(nnz);
    let mut vals = Vec::with_capacity(nnz);
    row_ptr.push(0);
    for (lens, c, v) in chunks {
        for l in lens {
            row_ptr.push(row_ptr.last().unwrap() + l);
        }
        cols.extend(c);
        vals.extend(v);
    }
    Ok(SparseHermitian::from_parts(dim, row_ptr, cols, vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use crate::circuit::{
        chain_circuit, single_qubit_circuit, two_qubit_circuit, BoundaryCondition, Gate, QubitSpec, Terminal,
    };
    use nalgebra::DMatrix;

    fn dense_eigs(h: &SparseHermitian) -> Vec<f64> {
        let mut e: Vec<f64> = h.to_dense().symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn free_two_row_qubit_without_boundary() {
        let c = single_qubit_circuit(2, None, BoundaryCondition::zero().with_strength(1e-300)).unwrap();
        let b = build_basis(&c).unwrap();
        let h = assemble(&c, &b).unwrap();
        assert_eq!(h.dimension(), 4);
        // each dot is an independent two-site chain [[1,-1],[-1,1]]
        let e = dense_eigs(&h);
        for (got, want) in e.iter().zip([0.0, 0.0, 2.0, 2.0]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn boost_at_unit_lambda_equals_identity_hop() {
        let with_boost =
            single_qubit_circuit(3, Some(RowOp::Boost { lambda: 1.0 }), BoundaryCondition::plus()).unwrap();
        let with_id = single_qubit_circuit(3, None, BoundaryCondition::plus()).unwrap();
        let h1 = assemble(&with_boost, &build_basis(&with_boost).unwrap()).unwrap();
        let h2 = assemble(&with_id, &build_basis(&with_id).unwrap()).unwrap();
        assert_eq!(h1, h2);
    }

    #[test]
    fn two_qubit_benchmark_is_hermitian_psd() {
        let c = two_qubit_circuit(4, 10.0, Terminal::Boost, Terminal::Boost).unwrap();
        let h = assemble(&c, &build_basis(&c).unwrap()).unwrap();
        assert!(h.hermiticity_residual() <= 1e-12);
        let e = dense_eigs(&h);
        assert!(e[0].abs() <= 1e-10, "{}", e[0]);
    }

    #[test]
    fn sparsity_bound() {
        for c in
            [two_qubit_circuit(4, 10.0, Terminal::Boost, Terminal::Boost).unwrap(), chain_circuit(3, 1, 3.0).unwrap()]
        {
            let h = assemble(&c, &build_basis(&c).unwrap()).unwrap();
            assert!(h.max_offdiag_per_row() <= 2 * c.total_rows());
        }
    }

    #[test]
    fn independent_qubits_give_kronecker_sum() {
        let qa =
            QubitSpec::new("a", BoundaryCondition::plus(), vec![RowOp::unitary(Gate::H), RowOp::Boost { lambda: 2.0 }]);
        let qb = QubitSpec::new("b", BoundaryCondition::one(), vec![RowOp::Project { dot: 1, lambda: 3.0 }]);
        let both = CircuitSpec::new(vec![qa.clone(), qb.clone()]);
        let ha = assemble(&CircuitSpec::new(vec![qa.clone()]), &build_basis(&CircuitSpec::new(vec![qa])).unwrap())
            .unwrap()
            .to_dense();
        let hb = assemble(&CircuitSpec::new(vec![qb.clone()]), &build_basis(&CircuitSpec::new(vec![qb])).unwrap())
            .unwrap()
            .to_dense();
        let h = assemble(&both, &build_basis(&both).unwrap()).unwrap().to_dense();
        // qubit 0 is the fastest digit, so H = I_b ⊗ H_a + H_b ⊗ I_a
        let ia = DMatrix::<C64>::identity(ha.nrows(), ha.nrows());
        let ib = DMatrix::<C64>::identity(hb.nrows(), hb.nrows());
        let expected = ib.kronecker(&ha) + hb.kronecker(&ia);
        assert!((h - expected).norm() < 1e-13);
    }

    #[test]
    fn coo_dump_is_sorted() {
        let c = two_qubit_circuit(3, 2.0, Terminal::Boost, Terminal::Boost).unwrap();
        let h = assemble(&c, &build_basis(&c).unwrap()).unwrap();
        let mut out = Vec::new();
        h.write_coo(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let keys: Vec<(usize, usize)> = text
            .lines()
            .map(|l| {
                let mut it = l.split_whitespace();
                (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
            })
            .collect();
        assert_eq!(keys.len(), h.nnz());
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mismatched_basis_rejected() {
        let a = two_qubit_circuit(4, 2.0, Terminal::Boost, Terminal::Boost).unwrap();
        let b = chain_circuit(3, 1, 2.0).unwrap();
        assert!(matches!(assemble(&a, &build_basis(&b).unwrap()), Err(GsqcError::BasisMismatch(_))));
    }
}
