use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use super::state::{strides, SubsystemShape};
use crate::{Error, Result};

/// Default cap on the dimension of any materialized copy-permutation operator.
pub const DEFAULT_MAX_OPERATOR_DIM: usize = 1 << 14;

/// Element of the symmetric group `S_T`, stored 0-based as `t -> sigma(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        if image.is_empty() {
            return Err(Error::InvalidPermutation);
        }
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || seen[x] {
                return Err(Error::InvalidPermutation);
            }
            seen[x] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            image: (0..size.max(1)).collect(),
        }
    }

    /// Transposition of positions `a` and `b` (0-based).
    pub fn transposition(size: usize, a: usize, b: usize) -> Result<Self> {
        if a >= size || b >= size {
            return Err(Error::InvalidPermutation);
        }
        let mut image: Vec<usize> = (0..size).collect();
        image.swap(a, b);
        Ok(Self { image })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, t: usize) -> usize {
        self.image[t]
    }

    /// `self ∘ other`, i.e. `t -> self(other(t))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: other.size(),
            });
        }
        Ok(Self {
            image: other.image.iter().map(|&t| self.image[t]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.size()];
        for (t, &s) in self.image.iter().enumerate() {
            image[s] = t;
        }
        Self { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(t, &s)| t == s)
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.size()];
        let mut cycles = 0;
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut t = start;
            while !seen[t] {
                seen[t] = true;
                t = self.image[t];
            }
        }
        cycles
    }

    /// All `T!` permutations of `size` points in lexicographic order of images.
    pub fn all(size: usize) -> Vec<Permutation> {
        let size = size.max(1);
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..size).collect();
        loop {
            out.push(Self {
                image: current.clone(),
            });
            if !next_lexicographic(&mut current) {
                break;
            }
        }
        out
    }
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Relabeling of tensor factors: the factor at input position `p` moves to
/// output position `perm(p)`. Realizes both `W_sigma` and the unravelling map
/// as basis permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPermutation {
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    perm: Permutation,
}

impl FactorPermutation {
    pub fn new(in_dims: Vec<usize>, perm: Permutation) -> Result<Self> {
        if in_dims.len() != perm.size() {
            return Err(Error::DimensionMismatch {
                expected: perm.size(),
                got: in_dims.len(),
            });
        }
        if in_dims.contains(&0) {
            return Err(Error::Domain("factor dimensions must be positive"));
        }
        let mut out_dims = vec![0; in_dims.len()];
        for (p, &d) in in_dims.iter().enumerate() {
            out_dims[perm.apply(p)] = d;
        }
        Ok(Self {
            in_dims,
            out_dims,
            perm,
        })
    }

    #[inline]
    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    #[inline]
    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    #[inline]
    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn total_dim(&self) -> usize {
        self.in_dims.iter().product()
    }

    pub fn inverse(&self) -> Self {
        Self {
            in_dims: self.out_dims.clone(),
            out_dims: self.in_dims.clone(),
            perm: self.perm.inverse(),
        }
    }

    /// `self` after `first`: the map `x -> self(first(x))`.
    pub fn after(&self, first: &Self) -> Result<Self> {
        if first.out_dims != self.in_dims {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                got: first.total_dim(),
            });
        }
        Ok(Self {
            in_dims: first.in_dims.clone(),
            out_dims: self.out_dims.clone(),
            perm: self.perm.compose(&first.perm)?,
        })
    }

    /// Output basis index of the input basis index `x`.
    pub fn apply_index(&self, x: usize) -> usize {
        let out_strides = strides(&self.out_dims);
        let mut rem = x;
        let mut y = 0;
        for p in (0..self.in_dims.len()).rev() {
            let d = self.in_dims[p];
            y += (rem % d) * out_strides[self.perm.apply(p)];
            rem /= d;
        }
        y
    }

    /// Full table `x -> y` of the basis relabeling.
    pub fn basis_map(&self) -> Vec<usize> {
        let n = self.total_dim();
        let out_strides = strides(&self.out_dims);
        let mut map = vec![0usize];
        // Build by appending input factors left to right.
        for (p, &d) in self.in_dims.iter().enumerate() {
            let s = out_strides[self.perm.apply(p)];
            let mut next = Vec::with_capacity(map.len() * d);
            for &base in &map {
                for digit in 0..d {
                    next.push(base + digit * s);
                }
            }
            map = next;
        }
        debug_assert_eq!(map.len(), n);
        map
    }

    /// Applies the relabeling to a vector on the input factors.
    pub fn apply_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        let n = self.total_dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (x, y) in self.basis_map().into_iter().enumerate() {
            out[y] = v[x];
        }
        Ok(out)
    }

    /// Dense 0/1 matrix of the relabeling, capped at `max_dim`.
    pub fn to_matrix(&self, max_dim: usize) -> Result<ComplexMatrix> {
        let n = checked_total(&self.in_dims, max_dim)?;
        let mut m = ComplexMatrix::zeros(n, n);
        for (x, y) in self.basis_map().into_iter().enumerate() {
            m[(y, x)] = C64::new(1.0, 0.0);
        }
        Ok(m)
    }
}

/// `W_sigma` on `T = sigma.size()` copies of `C^d_local`, with the default
/// dimension cap.
pub fn permutation_operator(sigma: &Permutation, d_local: usize) -> Result<ComplexMatrix> {
    permutation_operator_capped(sigma, d_local, DEFAULT_MAX_OPERATOR_DIM)
}

/// `W_sigma |i_1 ... i_T> = |i_{sigma^-1(1)} ... i_{sigma^-1(T)}>`.
pub fn permutation_operator_capped(
    sigma: &Permutation,
    d_local: usize,
    max_dim: usize,
) -> Result<ComplexMatrix> {
    copy_permutation(sigma, d_local)?.to_matrix(max_dim)
}

/// `W_sigma` as a factor relabeling.
pub fn copy_permutation(sigma: &Permutation, d_local: usize) -> Result<FactorPermutation> {
    FactorPermutation::new(vec![d_local; sigma.size()], sigma.clone())
}

/// `S |ij> = |ji>` on `C^d ⊗ C^d`.
pub fn swap_operator(d_local: usize) -> ComplexMatrix {
    let d = d_local.max(1);
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    s
}

/// Unravelling `V_T` for `T` copies of the composite system whose parties are
/// given by `parties`.
///
/// Input factor order is party-major: `(P_1^{⊗T}) ⊗ ... ⊗ (P_K^{⊗T})`. Output
/// is copy-major: `(P_1 ⊗ ... ⊗ P_K)^{⊗T}`. A party that is itself composite
/// keeps its internal factors together.
pub fn unravel(copies: usize, parties: &[SubsystemShape]) -> Result<FactorPermutation> {
    if copies == 0 || parties.is_empty() {
        return Err(Error::Domain("unravelling needs at least one copy and one party"));
    }
    let k_parts = parties.len();
    let mut in_dims = Vec::with_capacity(copies * k_parts);
    for party in parties {
        for _ in 0..copies {
            in_dims.push(party.total());
        }
    }
    let image = (0..copies * k_parts)
        .map(|p| {
            let (k, t) = (p / copies, p % copies);
            t * k_parts + k
        })
        .collect();
    FactorPermutation::new(in_dims, Permutation::new(image)?)
}

fn checked_total(dims: &[usize], max_dim: usize) -> Result<usize> {
    let mut n: usize = 1;
    for &d in dims {
        n = n
            .checked_mul(d)
            .filter(|&n| n <= max_dim)
            .ok_or(Error::DimensionCap {
                dim: dims.iter().fold(1usize, |a, &d| a.saturating_mul(d)),
                max: max_dim,
            })?;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::kron_vec;

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![1, 2]).is_err());
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn all_permutations_and_cycles() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        let identities = all.iter().filter(|p| p.cycle_count() == 4).count();
        let transpositions = all.iter().filter(|p| p.cycle_count() == 3).count();
        let full_cycles = all.iter().filter(|p| p.cycle_count() == 1).count();
        assert_eq!((identities, transpositions, full_cycles), (1, 6, 6));
    }

    #[test]
    fn compose_and_inverse() {
        let s = Permutation::new(vec![1, 2, 0]).unwrap();
        let t = Permutation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(s.compose(&t).unwrap().image(), &[1, 0, 2]);
        assert!(s.compose(&s.inverse()).unwrap().is_identity());
    }

    #[test]
    fn identity_permutation_operator_is_identity() {
        let w = permutation_operator(&Permutation::identity(3), 2).unwrap();
        assert_eq!(w, ComplexMatrix::identity(8));
    }

    #[test]
    fn transposition_equals_swap() {
        for d in 1..5 {
            let w = permutation_operator(&Permutation::transposition(2, 0, 1).unwrap(), d).unwrap();
            assert_eq!(w, swap_operator(d));
        }
    }

    #[test]
    fn swap_for_qubits_exchanges_middle_rows() {
        let s = swap_operator(2);
        let mut expected = ComplexMatrix::identity(4);
        expected[(1, 1)] = C64::new(0.0, 0.0);
        expected[(2, 2)] = C64::new(0.0, 0.0);
        expected[(1, 2)] = C64::new(1.0, 0.0);
        expected[(2, 1)] = C64::new(1.0, 0.0);
        assert_eq!(s, expected);
        assert_eq!(s.trace().re, 2.0);
    }

    #[test]
    fn permutation_operator_moves_factors() {
        // sigma = (0 -> 1, 1 -> 2, 2 -> 0): |a b c> -> |c a b>.
        let sigma = Permutation::new(vec![1, 2, 0]).unwrap();
        let w = copy_permutation(&sigma, 3).unwrap();
        let (a, b, c) = (2, 0, 1);
        let x = (a * 3 + b) * 3 + c;
        let y = (c * 3 + a) * 3 + b;
        assert_eq!(w.apply_index(x), y);
        assert_eq!(w.basis_map()[x], y);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let sigma = Permutation::identity(15);
        assert!(matches!(
            permutation_operator(&sigma, 2),
            Err(Error::DimensionCap { .. })
        ));
        assert!(permutation_operator_capped(&Permutation::identity(3), 4, 63).is_err());
        assert!(permutation_operator_capped(&Permutation::identity(3), 4, 64).is_ok());
    }

    #[test]
    fn unravel_two_copies_two_parties() {
        let shapes = [SubsystemShape::single(2), SubsystemShape::single(3)];
        let v = unravel(2, &shapes).unwrap();
        // (A1 A2 B1 B2) -> (A1 B1 A2 B2)
        assert_eq!(v.permutation().image(), &[0, 2, 1, 3]);
        assert_eq!(v.out_dims(), &[2, 3, 2, 3]);
        let single = unravel(1, &shapes).unwrap();
        assert!(single.permutation().is_identity());
    }

    #[test]
    fn unravel_maps_product_of_copies() {
        let a: Vec<Vec<C64>> = (0..2)
            .map(|t| (0..2).map(|i| C64::new((i + t) as f64, 1.0)).collect())
            .collect();
        let b: Vec<Vec<C64>> = (0..2)
            .map(|t| (0..3).map(|i| C64::new(1.0, (i * t) as f64)).collect())
            .collect();
        let input = kron_vec(&kron_vec(&a[0], &a[1]), &kron_vec(&b[0], &b[1]));
        let expected = kron_vec(&kron_vec(&a[0], &b[0]), &kron_vec(&a[1], &b[1]));
        let v = unravel(2, &[SubsystemShape::single(2), SubsystemShape::single(3)]).unwrap();
        assert_eq!(v.apply_vec(&input).unwrap(), expected);
        assert_eq!(v.inverse().apply_vec(&expected).unwrap(), input);
    }

    #[test]
    fn after_composes_relabelings() {
        let s = copy_permutation(&Permutation::new(vec![1, 2, 0]).unwrap(), 2).unwrap();
        let t = copy_permutation(&Permutation::new(vec![0, 2, 1]).unwrap(), 2).unwrap();
        let st = s.after(&t).unwrap();
        for x in 0..8 {
            assert_eq!(st.apply_index(x), s.apply_index(t.apply_index(x)));
        }
    }
}
