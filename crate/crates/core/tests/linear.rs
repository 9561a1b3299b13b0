use proptest::prelude::*;
use zsfusion::numlin::{nullspace, rank, split_commutant, Matrix, C64};
use zsfusion::suite;

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1..6usize, 1..6usize).prop_flat_map(|(r, c)| {
        // Integer entries in a narrow range make rank deficiency common.
        prop::collection::vec(-2i32..=2, r * c).prop_map(move |v| {
            Matrix::from_data(r, c, v.into_iter().map(|x| C64::new(f64::from(x), 0.0)).collect())
        })
    })
}

/// The regular representation of a group on the generators of its table.
fn regular(g: &zsfusion::grp::FiniteGroup) -> Vec<Matrix> {
    g.generators()
        .into_iter()
        .map(|s| Matrix::permutation(&g.elements().map(|x| g.mul(s, x)).collect::<Vec<_>>()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_is_transpose_invariant_and_monotone(m in small_matrix(), extra in small_matrix()) {
        let r = rank(&m, 1e-8).unwrap();
        prop_assert_eq!(r, rank(&m.transpose(), 1e-8).unwrap());
        // Appending rows can only raise the rank.
        if extra.cols() == m.cols() {
            let mut data = m.data().to_vec();
            data.extend_from_slice(extra.data());
            let stacked = Matrix::from_data(m.rows() + extra.rows(), m.cols(), data);
            prop_assert!(rank(&stacked, 1e-8).unwrap() >= r);
        }
    }

    #[test]
    fn nullspace_is_an_orthonormal_kernel(m in small_matrix()) {
        let tol = 1e-8;
        let k = nullspace(&m, tol).unwrap();
        prop_assert_eq!(k.cols(), m.cols() - rank(&m, tol).unwrap());
        let residual = (&m * &k).max_abs();
        prop_assert!(residual <= 10.0 * tol * m.frobenius_norm().max(1.0));
        let gram = &k.adjoint() * &k;
        prop_assert!((&gram - &Matrix::identity(k.cols())).max_abs() <= 1e-9);
    }

    #[test]
    fn split_blocks_are_invariant_and_seed_independent(which in 0..7usize, seed in 0..1000u64) {
        let g = suite::bundled_groups()[which].1.clone();
        if g.order() > 12 {
            return Ok(());
        }
        let action = regular(&g);
        let split = split_commutant(&action, seed).unwrap();
        let reference = split_commutant(&action, 0).unwrap();
        let mut a = split.dims();
        let mut b = reference.dims();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.iter().sum::<usize>(), g.order());
        for block in &split.blocks {
            for m in &action {
                // P m P = m P for the orthogonal projection P onto the block.
                let p = &block.basis * &block.basis.adjoint();
                let mp = m * &p;
                prop_assert!((&(&p * &mp) - &mp).max_abs() <= 1e-6);
            }
        }
    }
}

#[test]
fn regular_representation_of_z6_has_full_rank() {
    let z6 = suite::cyclic(6);
    assert_eq!(rank(&regular(&z6)[0], 1e-8).unwrap(), 6);
}
