//! Dense linear algebra over prime fields `F_p` (`p <= 251`).
//!
//! `F_2` rows are bit-packed and eliminate with word-wide XOR; odd
//! characteristics use byte rows.

mod kernels;
mod matrix;
mod poly;
mod subspace;
mod vector;

pub use matrix::{check_field, FFMatrix, Rref, MAX_CHAR};
pub use poly::{irreducible_factor, Poly};
pub use subspace::{enumerate_subspaces, spin, Subspace};
pub use vector::FFVector;

pub(crate) use subspace::{spin_with, Echelon};
pub(crate) use vector::field_inv;

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(p: u32, max: usize) -> impl Strategy<Value = FFMatrix> {
        (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0..p, c), r)
                .prop_map(move |rows| FFMatrix::from_rows(p, &rows).unwrap())
        })
    }

    fn any_field_matrix() -> impl Strategy<Value = FFMatrix> {
        prop_oneof![matrix(2, 90), matrix(3, 12), matrix(7, 12), matrix(251, 6)]
    }

    proptest! {
        #[test]
        fn rref_idempotent_and_rank_nullity(m in any_field_matrix()) {
            let r = m.rref();
            prop_assert_eq!(&r.matrix.rref().matrix, &r.matrix);
            prop_assert_eq!(r.rank + m.kernel().dim(), m.ncols());
            for k in m.kernel().basis().rows() {
                prop_assert!(m.mul_vec(k).unwrap().is_zero());
            }
        }

        #[test]
        fn planted_solution_is_found(m in any_field_matrix(), seed in any::<u64>()) {
            let p = m.p();
            let x0: Vec<u32> = (0..m.ncols()).map(|i| ((seed >> (i % 60)) as u32 ^ i as u32) % p).collect();
            let x0 = FFVector::from_residues(p, &x0);
            let v = m.mul_vec(&x0).unwrap();
            let x = m.solve(&v).unwrap().expect("planted system is consistent");
            prop_assert_eq!(m.mul_vec(&x).unwrap(), v);
        }

        #[test]
        fn spin_is_invariant(m in matrix(3, 8), seed in 0u32..1000) {
            let n = m.ncols();
            let a = FFMatrix::from_vectors(3, n, (0..n).map(|i| {
                FFVector::from_residues(3, &(0..n).map(|j| (seed + (i * 7 + j * 3) as u32 * (i as u32 + 1)) % 3).collect::<Vec<_>>())
            }).collect());
            let seeds = FFMatrix::from_vectors(3, n, m.rows().iter().take(1).cloned().collect());
            let s = spin(&seeds, std::slice::from_ref(&a)).unwrap();
            prop_assert!(s.is_invariant(&[a]));
            prop_assert!(s.contains(m.row(0)));
        }
    }
}
