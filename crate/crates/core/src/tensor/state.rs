use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use super::eigen::min_eigenvalue;
use super::matrix::{kron, kron_vec, ComplexMatrix, HERMITIAN_TOL};
use crate::{Error, Result};

/// Tolerance on the unit norm of a [`StateVector`].
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on the unit trace of a [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted for a [`DensityMatrix`].
pub const PSD_TOL: f64 = -1e-8;

/// Ordered local dimensions `d_1, ..., d_K` of a composite system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemShape {
    dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Domain("subsystem dimensions must be positive"));
        }
        Ok(Self { dims })
    }

    pub fn single(d: usize) -> Self {
        Self { dims: vec![d.max(1)] }
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Self {
        Self {
            dims: vec![d_a.max(1), d_b.max(1)],
        }
    }

    /// `parts` copies of the same local dimension.
    pub fn uniform(local: usize, parts: usize) -> Self {
        Self {
            dims: vec![local.max(1); parts.max(1)],
        }
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn parts(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Dimensions of a bipartite shape, or an error.
    pub fn bipartition(&self) -> Result<(usize, usize)> {
        match self.dims[..] {
            [a, b] => Ok((a, b)),
            _ => Err(Error::NotBipartite(self.dims.len())),
        }
    }

    /// Dimension of the first part and of everything else.
    pub fn split_first(&self) -> (usize, usize) {
        (self.dims[0], self.dims[1..].iter().product())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims }
    }

    fn check_total(&self, total: usize) -> Result<()> {
        if self.total() != total {
            return Err(Error::DimensionMismatch {
                expected: self.total(),
                got: total,
            });
        }
        Ok(())
    }
}

/// Normalized pure state with an attached subsystem shape.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    shape: SubsystemShape,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, shape: SubsystemShape) -> Result<Self> {
        shape.check_total(amplitudes.len())?;
        let norm = libm::sqrt(norm_sqr(&amplitudes));
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, shape })
    }

    /// Normalizes `amplitudes`; fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<C64>, shape: SubsystemShape) -> Result<Self> {
        shape.check_total(amplitudes.len())?;
        let norm = libm::sqrt(norm_sqr(&amplitudes));
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        let inv = 1.0 / norm;
        for a in &mut amplitudes {
            *a *= inv;
        }
        Ok(Self { amplitudes, shape })
    }

    /// Computational basis state `|index>`.
    pub fn basis(index: usize, shape: SubsystemShape) -> Result<Self> {
        let dim = shape.total();
        if index >= dim {
            return Err(Error::Domain("basis index out of range"));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes, shape })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    #[inline]
    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn with_shape(self, shape: SubsystemShape) -> Result<Self> {
        shape.check_total(self.amplitudes.len())?;
        Ok(Self { shape, ..self })
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
            shape: self.shape.concat(&other.shape),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            shape: self.shape.clone(),
        }
    }

    /// Amplitudes reshaped as the `d_first x d_rest` coefficient matrix.
    ///
    /// The reduced state of the first part is `M M^dagger`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        let (da, db) = self.shape.split_first();
        ComplexMatrix::new(da, db, self.amplitudes.clone()).expect("shape checked on construction")
    }

    /// Reduced density matrix of the first part (everything else traced out).
    pub fn reduced_first(&self) -> ComplexMatrix {
        let (da, db) = self.shape.split_first();
        let psi = &self.amplitudes;
        let mut rho = ComplexMatrix::zeros(da, da);
        for i in 0..da {
            let ri = &psi[i * db..(i + 1) * db];
            for j in i..da {
                let rj = &psi[j * db..(j + 1) * db];
                let z: C64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                rho[(i, j)] = z;
                rho[(j, i)] = z.conj();
            }
        }
        rho
    }

    /// `Tr(rho_A^2)` for the first part.
    pub fn reduced_purity(&self) -> f64 {
        let (da, db) = self.shape.split_first();
        if da > db {
            // Tr(rho_A^2) = Tr(rho_B^2); contract over the smaller index.
            let m = self.coefficient_matrix().transpose();
            return m.matmul(&m.adjoint()).expect("square").frobenius_norm_sqr();
        }
        self.reduced_first().frobenius_norm_sqr()
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix with a subsystem shape.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    shape: SubsystemShape,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: ComplexMatrix, shape: SubsystemShape) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        shape.check_total(matrix.rows())?;
        let herr = matrix.hermiticity_error();
        if herr > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herr));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let lmin = min_eigenvalue(&matrix)?;
        if lmin < PSD_TOL {
            return Err(Error::NotPositive(lmin));
        }
        Ok(Self { matrix, shape })
    }

    /// For matrices that are density matrices by construction (reductions,
    /// products, mixtures of valid states).
    pub(crate) fn from_parts(matrix: ComplexMatrix, shape: SubsystemShape) -> Self {
        debug_assert_eq!(matrix.rows(), shape.total());
        Self { matrix, shape }
    }

    pub fn maximally_mixed(shape: SubsystemShape) -> Self {
        let d = shape.total();
        let matrix = ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0));
        Self { matrix, shape }
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    #[inline]
    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn with_shape(self, shape: SubsystemShape) -> Result<Self> {
        shape.check_total(self.matrix.rows())?;
        Ok(Self { shape, ..self })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: kron(&self.matrix, &other.matrix),
            shape: self.shape.concat(&other.shape),
        }
    }

    /// `Tr(rho^2)`
    pub fn purity(&self) -> f64 {
        // rho is Hermitian, so Tr(rho^2) is the squared Frobenius norm.
        self.matrix.frobenius_norm_sqr()
    }

    /// Reduced state on the kept subsystems.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (matrix, shape) = partial_trace_operator(&self.matrix, &self.shape, keep)?;
        Ok(Self { matrix, shape })
    }
}

/// Reduced density matrix on the subsystems listed in `keep`.
///
/// Kept subsystems stay in their original order; duplicates are ignored.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

/// Partial trace of an arbitrary square operator. Returns the reduced
/// operator and its shape. Keeping nothing yields the `1 x 1` full trace.
pub fn partial_trace_operator(
    m: &ComplexMatrix,
    shape: &SubsystemShape,
    keep: &[usize],
) -> Result<(ComplexMatrix, SubsystemShape)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    shape.check_total(m.rows())?;
    let dims = shape.dims();
    let parts = dims.len();
    let mut kept = vec![false; parts];
    for &k in keep {
        if k >= parts {
            return Err(Error::SubsystemOutOfRange { index: k, parts });
        }
        kept[k] = true;
    }
    let strides = strides(dims);
    let kept_dims: Vec<usize> = (0..parts).filter(|&i| kept[i]).map(|i| dims[i]).collect();
    let traced_dims: Vec<usize> = (0..parts).filter(|&i| !kept[i]).map(|i| dims[i]).collect();
    let kept_strides: Vec<usize> = (0..parts).filter(|&i| kept[i]).map(|i| strides[i]).collect();
    let traced_strides: Vec<usize> = (0..parts).filter(|&i| !kept[i]).map(|i| strides[i]).collect();

    let kept_offsets = offsets(&kept_dims, &kept_strides);
    let traced_offsets = offsets(&traced_dims, &traced_strides);
    let n = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            out[(r, c)] = traced_offsets.iter().map(|&t| m[(ro + t, co + t)]).sum();
        }
    }
    let out_shape = if kept_dims.is_empty() {
        SubsystemShape::single(1)
    } else {
        SubsystemShape { dims: kept_dims }
    };
    Ok((out, out_shape))
}

/// `rho^{T_part}` for a bipartite state.
pub fn partial_transpose(rho: &DensityMatrix, part: usize) -> Result<ComplexMatrix> {
    partial_transpose_operator(&rho.matrix, &rho.shape, part)
}

/// Partial transpose of an arbitrary bipartite operator.
pub fn partial_transpose_operator(
    m: &ComplexMatrix,
    shape: &SubsystemShape,
    part: usize,
) -> Result<ComplexMatrix> {
    let (da, db) = shape.bipartition()?;
    if part > 1 {
        return Err(Error::SubsystemOutOfRange {
            index: part,
            parts: 2,
        });
    }
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    shape.check_total(m.rows())?;
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    // <ij| M^{T_A} |kl> = <kj| M |il>, and symmetrically for B.
                    let v = if part == 0 {
                        m[(k * db + j, i * db + l)]
                    } else {
                        m[(i * db + l, k * db + j)]
                    };
                    out[(i * db + j, k * db + l)] = v;
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// All linear offsets `sum_i idx_i * strides_i` over the multi-index range.
fn offsets(dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for (&d, &s) in dims.iter().zip(strides) {
        let mut next = Vec::with_capacity(out.len() * d);
        for &o in &out {
            for x in 0..d {
                next.push(o + x * s);
            }
        }
        out = next;
    }
    out
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> StateVector {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(
            vec![
                C64::new(h, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(h, 0.0),
            ],
            SubsystemShape::bipartite(2, 2),
        )
        .unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(SubsystemShape::new(vec![]).is_err());
        assert!(SubsystemShape::new(vec![2, 0]).is_err());
        assert_eq!(SubsystemShape::new(vec![2, 3]).unwrap().total(), 6);
        assert!(SubsystemShape::uniform(2, 3).bipartition().is_err());
    }

    #[test]
    fn state_vector_norm_checked() {
        let shape = SubsystemShape::single(2);
        assert!(StateVector::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)], shape.clone()).is_err());
        assert!(StateVector::normalized(vec![C64::new(0.0, 0.0); 2], shape.clone()).is_err());
        let s = StateVector::normalized(vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)], shape).unwrap();
        assert!((s.inner(&s).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        let shape = SubsystemShape::single(2);
        let not_psd = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(not_psd, shape.clone()),
            Err(Error::NotPositive(_))
        ));
        let bad_trace = ComplexMatrix::from_real_diagonal(&[0.5, 0.4]);
        assert!(matches!(
            DensityMatrix::new(bad_trace, shape.clone()),
            Err(Error::InvalidTrace(_))
        ));
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.25, 0.75]), shape).is_ok());
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let rho_a = bell().density().partial_trace(&[0]).unwrap();
        assert_eq!(rho_a.dim(), 2);
        let expected = ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!(rho_a.matrix().max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(rho_a.matrix().max_abs_diff(&bell().reduced_first()).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = StateVector::normalized(
            vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)],
            SubsystemShape::single(2),
        )
        .unwrap();
        let b = StateVector::normalized(
            vec![C64::new(1.0, 1.0), C64::new(0.5, 0.0), C64::new(0.0, -1.0)],
            SubsystemShape::single(3),
        )
        .unwrap();
        let rho = a.tensor(&b).density();
        let ra = rho.partial_trace(&[0]).unwrap();
        let rb = rho.partial_trace(&[1]).unwrap();
        assert!(ra.matrix().max_abs_diff(a.density().matrix()).unwrap() < 1e-14);
        assert!(rb.matrix().max_abs_diff(b.density().matrix()).unwrap() < 1e-14);
        let full = rho.partial_trace(&[]).unwrap();
        assert!((full.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(matches!(
            rho.partial_trace(&[2]),
            Err(Error::SubsystemOutOfRange { index: 2, parts: 2 })
        ));
    }

    #[test]
    fn partial_trace_keeps_order_of_three_parts() {
        let shape = SubsystemShape::new(vec![2, 3, 2]).unwrap();
        let psi = StateVector::normalized(
            (0..12).map(|i| C64::new(i as f64, (i % 3) as f64)).collect(),
            shape,
        )
        .unwrap();
        let rho = psi.density();
        let r02 = rho.partial_trace(&[0, 2]).unwrap();
        assert_eq!(r02.shape().dims(), &[2, 2]);
        let r0 = r02.partial_trace(&[0]).unwrap();
        let direct = rho.partial_trace(&[0]).unwrap();
        assert!(r0.matrix().max_abs_diff(direct.matrix()).unwrap() < 1e-14);
    }

    #[test]
    fn partial_transpose_of_product_and_involution() {
        let psi = bell();
        let rho = psi.density();
        let pt = partial_transpose(&rho, 0).unwrap();
        assert!(pt.is_hermitian(1e-15));
        let twice = partial_transpose_operator(&pt, rho.shape(), 0).unwrap();
        assert!(twice.max_abs_diff(rho.matrix()).unwrap() < 1e-15);
        assert!(partial_transpose(&rho, 2).is_err());
        let tri = DensityMatrix::maximally_mixed(SubsystemShape::uniform(2, 3));
        assert!(matches!(partial_transpose(&tri, 0), Err(Error::NotBipartite(3))));
    }

    #[test]
    fn reduced_purity_matches_either_side() {
        let shape = SubsystemShape::bipartite(2, 3);
        let psi = StateVector::normalized(
            (0..6).map(|i| C64::new(1.0 + i as f64, -(i as f64))).collect(),
            shape.clone(),
        )
        .unwrap();
        let direct = psi.density().partial_trace(&[0]).unwrap().purity();
        assert!((psi.reduced_purity() - direct).abs() < 1e-14);
        let swapped = StateVector::normalized(
            psi.coefficient_matrix().transpose().into_vec(),
            SubsystemShape::bipartite(3, 2),
        )
        .unwrap();
        assert!((swapped.reduced_purity() - direct).abs() < 1e-14);
    }
}
