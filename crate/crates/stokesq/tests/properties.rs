//! Property suites over seeded random instances: structural invariants of
//! the multiplier pair, exactness of the two global identities, functorial
//! behavior of the transform and of reconstruction, and document
//! round-trips. proptest drives the seeds and size bounds; all instances
//! come from the validating generators, so every case is well-formed.

use proptest::prelude::*;

use rand::Rng;
use stokesq::covers::CoverSpec;
use stokesq::format::{
    parse_cover_document, parse_local_system_document, parse_quiver_document, serialize_cover,
    serialize_local_system, serialize_quiver,
};
use stokesq::random::{
    random_gauge, random_local_system, random_quiver_with, seeded_rng, small_rational,
};
use stokesq::stokes::{
    exponential_components, fourier_quiver, fourier_sato_point, smash_quiver, stokes_matrices,
    stokes_plus_inverse, u_sigma, v_sigma, verify_theorem_identity,
};
use stokesq::{GaussRational, MatrixQi};

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut offs = vec![0];
    for d in dims {
        offs.push(offs.last().unwrap() + d);
    }
    offs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Both global identities hold exactly and the closed-form inverse of
    /// the upper multiplier equals its generic matrix inverse.
    #[test]
    fn multiplier_identities_are_exact(seed in any::<u64>(), n in 1usize..=5, dims in 1usize..=4) {
        let q = random_quiver_with(&mut seeded_rng(seed), n, dims);
        let report = verify_theorem_identity(&q).unwrap();
        prop_assert!(report.holds(), "{:?}", report.first_mismatch);
        let pair = stokes_matrices(&q);
        prop_assert_eq!(stokes_plus_inverse(&q), pair.s_plus.inverse().unwrap());
    }

    /// S+ is block upper unitriangular and S- is block lower triangular
    /// with the vanishing-cycle monodromies on the diagonal, in the strict
    /// ordering of the frame.
    #[test]
    fn multiplier_block_shape(seed in any::<u64>(), n in 1usize..=5, dims in 1usize..=4) {
        let q = random_quiver_with(&mut seeded_rng(seed), n, dims);
        for w in q.nodes().windows(2) {
            prop_assert!(
                q.frame().order_key(&w[0].point) < q.frame().order_key(&w[1].point)
            );
        }
        let pair = stokes_matrices(&q);
        let offs = offsets(&pair.block_dims);
        for bi in 0..q.nodes().len() {
            let diag = q.comonodromy(bi);
            for bj in 0..q.nodes().len() {
                for i in offs[bi]..offs[bi + 1] {
                    for j in offs[bj]..offs[bj + 1] {
                        let plus = pair.s_plus.get(i, j);
                        let minus = pair.s_minus.get(i, j);
                        if bi > bj {
                            prop_assert!(plus.is_zero());
                        }
                        if bi < bj {
                            prop_assert!(minus.is_zero());
                        }
                        if bi == bj {
                            let local = (i - offs[bi], j - offs[bj]);
                            let id = if local.0 == local.1 {
                                GaussRational::one()
                            } else {
                                GaussRational::zero()
                            };
                            prop_assert_eq!(plus, &id);
                            prop_assert_eq!(minus, diag.get(local.0, local.1));
                        }
                    }
                }
            }
        }
    }

    /// Rebuilding the quiver from its own data gives the quiver back, with
    /// identity identifications.
    #[test]
    fn reconstruction_is_identity(seed in any::<u64>(), n in 1usize..=5, dims in 1usize..=4) {
        let q = random_quiver_with(&mut seeded_rng(seed), n, dims);
        let recovered = q.reconstruct().unwrap();
        prop_assert_eq!(&recovered.quiver, &q);
        prop_assert!(recovered.psi_iso.is_identity());
        prop_assert!(recovered.phi_isos.iter().all(MatrixQi::is_identity));
    }

    /// The maximal extension of a local system has monodromy exactly T_c
    /// globally and [[T_c, 1], [0, 1]] on each doubled space.
    #[test]
    fn maximal_extension_invariants(seed in any::<u64>(), rank in 1usize..=4) {
        let ls = random_local_system(&mut seeded_rng(seed), rank);
        let q = ls.beilinson_quiver().unwrap();
        let m = ls.rank();
        let id = MatrixQi::identity(m);
        let zero = MatrixQi::zero(m, m);
        for (j, t) in ls.monodromies().iter().enumerate() {
            prop_assert_eq!(&q.monodromy(j), t);
            let want = MatrixQi::from_blocks(&[vec![t, &id], vec![&zero, &id]]);
            prop_assert_eq!(q.comonodromy(j), want);
        }
    }

    /// The multipliers of a gauged quiver are the block-diagonal
    /// conjugates of the originals.
    #[test]
    fn gauge_covariance(seed in any::<u64>(), n in 1usize..=5, dims in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let q = random_quiver_with(&mut rng, n, dims);
        let (p, ds) = random_gauge(&mut rng, &q);
        let gauged = q.apply_gauge(&p, &ds).unwrap();
        let blocks: Vec<&MatrixQi> = ds.iter().collect();
        let d = MatrixQi::block_diag(&blocks);
        let d_inv = d.inverse().unwrap();
        let before = stokes_matrices(&q);
        let after = stokes_matrices(&gauged);
        prop_assert_eq!(after.s_plus, d.matmul(&before.s_plus).matmul(&d_inv));
        prop_assert_eq!(after.s_minus, d.matmul(&before.s_minus).matmul(&d_inv));
    }

    /// The contraction keeps the global space and stacks the interleaved
    /// section/cosection data into the single node at 0.
    #[test]
    fn contraction_concentrates_the_data(seed in any::<u64>(), n in 1usize..=5, dims in 1usize..=4) {
        let q = random_quiver_with(&mut seeded_rng(seed), n, dims);
        let smashed = smash_quiver(&q).unwrap();
        prop_assert_eq!(smashed.psi_dim(), q.psi_dim());
        prop_assert_eq!(smashed.nodes().len(), 1);
        prop_assert!(smashed.nodes()[0].point.is_zero());
        prop_assert_eq!(&smashed.nodes()[0].u, &u_sigma(&q));
        prop_assert_eq!(&smashed.nodes()[0].v, &v_sigma(&q));
        prop_assert_eq!(smashed.frame(), q.frame());
    }

    /// The transform factors exactly through contraction followed by the
    /// one-point transform, frame included, and applying the one-point
    /// transform twice restores the data under a doubly rotated frame.
    #[test]
    fn transform_composition_and_involution(seed in any::<u64>(), n in 1usize..=5, dims in 1usize..=4) {
        let q = random_quiver_with(&mut seeded_rng(seed), n, dims);
        let direct = fourier_quiver(&q).unwrap();
        let smashed = smash_quiver(&q).unwrap();
        let composite = fourier_sato_point(&smashed).unwrap();
        prop_assert_eq!(&direct, &composite);
        prop_assert_eq!(direct.frame(), &q.frame().fourier_rotate());

        let twice = fourier_sato_point(&direct).unwrap();
        prop_assert_eq!(twice.psi_dim(), smashed.psi_dim());
        prop_assert_eq!(&twice.nodes()[0].u, &smashed.nodes()[0].u);
        prop_assert_eq!(&twice.nodes()[0].v, &smashed.nodes()[0].v);
        prop_assert_eq!(
            twice.frame(),
            &smashed.frame().fourier_rotate().fourier_rotate()
        );
    }

    /// The listed exponents are exactly the points carrying nonzero
    /// vanishing cycles, multiplicities summing to the total dimension.
    #[test]
    fn exponents_enumerate_support(seed in any::<u64>(), n in 1usize..=5, dims in 1usize..=4) {
        let q = random_quiver_with(&mut seeded_rng(seed), n, dims);
        let components = exponential_components(&q);
        let total: usize = components.iter().map(|(_, d)| d).sum();
        prop_assert_eq!(total, q.total_phi_dim());
        for (c, d) in &components {
            let node = q.nodes().iter().find(|node| &node.point == c).unwrap();
            prop_assert_eq!(node.phi_dim(), *d);
            prop_assert!(*d > 0);
        }
    }

    /// Quiver documents round-trip bit-identically.
    #[test]
    fn quiver_documents_round_trip(seed in any::<u64>(), n in 1usize..=5, dims in 1usize..=4) {
        let q = random_quiver_with(&mut seeded_rng(seed), n, dims);
        let text = serialize_quiver(&q);
        let back = parse_quiver_document(&text).unwrap();
        prop_assert_eq!(&back, &q);
        prop_assert_eq!(serialize_quiver(&back), text);
    }

    /// Local-system documents round-trip bit-identically, with the rank
    /// recovered from the matrices.
    #[test]
    fn local_system_documents_round_trip(seed in any::<u64>(), rank in 1usize..=4) {
        let ls = random_local_system(&mut seeded_rng(seed), rank);
        let text = serialize_local_system(&ls);
        let back = parse_local_system_document(&text).unwrap();
        prop_assert_eq!(&back, &ls);
        prop_assert_eq!(back.rank(), ls.rank());
        prop_assert_eq!(serialize_local_system(&back), text);
    }

    /// Cover documents round-trip bit-identically for both kinds.
    #[test]
    fn cover_documents_round_trip(seed in any::<u64>(), laurent in any::<bool>()) {
        let mut rng = seeded_rng(seed);
        let f = loop {
            let candidate = if laurent {
                CoverSpec::laurent(
                    (-2..=2)
                        .map(|k| (k, GaussRational::from_rational(small_rational(&mut rng))))
                        .collect(),
                )
            } else {
                let degree = rng.random_range(2..=5usize);
                CoverSpec::polynomial(
                    (0..=degree)
                        .map(|_| GaussRational::from_rational(small_rational(&mut rng)))
                        .collect(),
                )
            };
            if let Ok(f) = candidate {
                break f;
            }
        };
        let text = serialize_cover(&f);
        let back = parse_cover_document(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serialize_cover(&back), text);
    }
}
