use morita_core::algebra::{AlgebraElement, ConvolutionAlgebra};
use morita_core::bibundle::{compose_bibundles, pullback_rep};
use morita_core::fixtures::Fixtures;
use morita_core::module::{epsilon, eta, gamma};
use morita_core::morita::{balanced_tensor, bimodule_of, check_natural_square, check_sigma};
use morita_core::rep::{find_isomorphism, intertwiner_space, random_representation};
use morita_core::{Matrix, Representation, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -3i64..=3).prop_map(|(n, d, i)| &Scalar::from_ratio(n, d) + &(&Scalar::i() * &Scalar::from_int(i)))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(scalar(), rows * cols).prop_map(move |v| Matrix::new(rows, cols, v).unwrap())
}

fn square() -> impl Strategy<Value = Matrix> {
    (1usize..=4).prop_flat_map(|n| matrix(n, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn matrix_product_is_associative(a in matrix(2, 3), b in matrix(3, 2), c in matrix(2, 4)) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn rank_nullity(m in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let k = m.kernel_matrix();
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        prop_assert!(m.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn kron_mixed_product(a in matrix(2, 2), b in matrix(2, 3), c in matrix(2, 2), d in matrix(3, 1)) {
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_two_sided(m in square()) {
        match m.invert() {
            Ok(inv) => {
                prop_assert!(m.mul(&inv).unwrap().is_identity());
                prop_assert!(inv.mul(&m).unwrap().is_identity());
            }
            Err(_) => prop_assert!(m.rank() < m.rows()),
        }
    }

    #[test]
    fn solve_finds_solutions(m in matrix(3, 3), x in matrix(3, 1)) {
        let b = m.mul(&x).unwrap();
        let y = m.solve(&b).unwrap().expect("consistent system");
        prop_assert_eq!(m.mul(&y).unwrap(), b);
    }

    #[test]
    fn column_space_spans_the_columns(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))) {
        let (basis, pivots) = m.column_space();
        prop_assert_eq!(basis.cols(), m.rank());
        prop_assert!(basis.select_rows(&pivots).is_identity());
        for c in 0..m.cols() {
            let col = Matrix::column(m.col(c));
            prop_assert!(basis.solve(&col).unwrap().is_some());
        }
    }

    #[test]
    fn convolution_is_associative(name in prop::sample::select(vec!["pair3", "s3", "swap", "unit3"]),
                                  seed in any::<u64>()) {
        let g = Fixtures::new().groupoid(name);
        let alg = ConvolutionAlgebra::new(g.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut elt = || {
            use rand::Rng;
            AlgebraElement::new(g.clone(), g.arrows().map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect()).unwrap()
        };
        let (a, b, c) = (elt(), elt(), elt());
        let ab_c = alg.convolve(&alg.convolve(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.convolve(&a, &alg.convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(alg.convolve(&alg.unit(), &a).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pair_groupoid_reps_are_trivial(seed in any::<u64>(), rank in 1usize..=2) {
        let g = Fixtures::new().groupoid("pair3");
        let e = random_representation(g.clone(), rank, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let iso = find_isomorphism(&Representation::trivial(g, rank), &e).unwrap();
        prop_assert!(iso.is_some_and(|f| f.is_iso() && f.validate().is_valid()));
    }

    #[test]
    fn serre_swan_units_are_isomorphisms(name in prop::sample::select(vec!["unit3", "pair3", "z2", "s3", "swap"]),
                                         seed in any::<u64>(), rank in 1usize..=3) {
        let g = Fixtures::new().groupoid(name);
        let e = random_representation(g, rank, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(eta(&e).unwrap().is_iso());
        prop_assert!(epsilon(&gamma(&e).unwrap()).unwrap().is_iso());
    }

    #[test]
    fn morita_pullback_preserves_hom_dimensions(s1 in any::<u64>(), s2 in any::<u64>()) {
        let fx = Fixtures::new();
        let g = fx.groupoid("pair2");
        let p = fx.point_vs_pair();
        let e = random_representation(g.clone(), 1 + (s1 % 2) as usize, &mut ChaCha8Rng::seed_from_u64(s1)).unwrap();
        let f = random_representation(g, 1 + (s2 % 2) as usize, &mut ChaCha8Rng::seed_from_u64(s2)).unwrap();
        let before = intertwiner_space(&e, &f).unwrap().len();
        let after = intertwiner_space(&pullback_rep(&p, &e).unwrap(), &pullback_rep(&p, &f).unwrap()).unwrap().len();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn sigma_and_naturality_on_random_reps(seed in any::<u64>(), which in 0usize..4) {
        let fx = Fixtures::new();
        let p = fx.bibundles().unwrap().into_iter().filter(|p| p.right().name() == "pair2").nth(which % 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_representation(p.right().clone(), 1, &mut rng).unwrap();
        let f = random_representation(p.right().clone(), 2, &mut rng).unwrap();
        prop_assert!(check_sigma(&p, &e).all_pass());
        for phi in intertwiner_space(&e, &f).unwrap() {
            prop_assert!(check_natural_square(&p, &phi).all_pass());
        }
    }
}

#[test]
fn balanced_tensor_quotient_is_consistent() {
    let fx = Fixtures::new();
    for p in fx.bibundles().unwrap() {
        let b = bimodule_of(&p).unwrap();
        for (_, e) in fx.witness_family(p.right()).unwrap().into_iter().take(4) {
            let w = gamma(&e).unwrap();
            let t = balanced_tensor(b.right_act(), w.matrices()).unwrap();
            assert!(t.projection.mul(&t.section).unwrap().is_identity());
            assert!(t.projection.mul(t.relations()).unwrap().is_zero());
            assert_eq!(t.dim + t.relations().cols(), b.dim() * w.dim());
        }
    }
}

#[test]
fn composite_of_equivalences_is_principal() {
    let fx = Fixtures::new();
    let [p, q, r, s] = fx.chain().unwrap();
    let pq = compose_bibundles(&p, &q).unwrap();
    assert_eq!(pq.bundle.num_points(), 1);
    let rs = compose_bibundles(&r, &s).unwrap();
    assert!(rs.bundle.validate().is_valid());
}
