mod common;

use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

use common::*;
use skewbez::bezoutian::recover_p;
use skewbez::field::class_mul;
use skewbez::jordan::{feasible, jordan_spec, realize};
use skewbez::lattice::{cartan_matrix, classify, search_cyclotomic, signature, IntegerGram, LatticeClass};
use skewbez::poly::{char_poly, resultant};
use skewbez::spinor::{spinor_norm, spinor_norm_by_reflections};
use skewbez::synthesis::{orthogonal_with_charpoly, symplectic_with_charpoly, OrthogonalOptions};
use skewbez::{Matrix, Poly, Sign, SkewBezoutian};

fn pair_degree(rng: &mut Rng8, eps: Sign, max: usize) -> usize {
    if eps == Sign::Minus {
        2 * rng.gen_range(1..=max / 2)
    } else {
        rng.gen_range(1..=max)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gram_determinant_is_sylvester_resultant(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = random_field(&mut rng);
        let eps = random_sign(&mut rng);
        let d = pair_degree(&mut rng, eps, 10);
        let (p, q) = random_pair(&mut rng, field, d, eps);
        let bez = SkewBezoutian::build(&p, &q, eps).unwrap();
        prop_assert_eq!(bez.gram().determinant().unwrap(), sylvester_resultant(&p, &q));
        prop_assert_eq!(bez.resultant(), resultant(&p, &q).unwrap());
    }

    #[test]
    fn canonical_isometries(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = random_field(&mut rng);
        let eps = random_sign(&mut rng);
        let d = pair_degree(&mut rng, eps, 8);
        let (p, q) = random_pair(&mut rng, field, d, eps);
        let bez = SkewBezoutian::build(&p, &q, eps).unwrap();
        let gram = bez.gram();
        // Gram entries: 1+ε on the diagonal, ε-symmetric off it.
        prop_assert_eq!(gram.get(0, 0), &(&field.one() + &eps.element(field)));
        prop_assert_eq!(&gram.transpose().scale(&eps.element(field)), gram);
        for m in [bez.gamma().clone(), bez.sigma(), bez.delta()] {
            prop_assert!(bez.space().is_isometry(&m));
        }
        prop_assert_eq!(char_poly(bez.gamma()).unwrap(), q);
        prop_assert_eq!(char_poly(&bez.delta()).unwrap(), p.clone());
        prop_assert_eq!(recover_p(bez.space(), bez.gamma(), &bez.v0()).unwrap(), p);
    }

    #[test]
    fn pairing_is_well_defined_modulo_q(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = random_field(&mut rng);
        let eps = random_sign(&mut rng);
        let d = pair_degree(&mut rng, eps, 6);
        let (p, q) = random_pair(&mut rng, field, d, eps);
        let bez = SkewBezoutian::build(&p, &q, eps).unwrap();
        let mut random_poly = |deg: usize| {
            let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
            Poly::from_i64(field, &c)
        };
        let u = random_poly(d - 1);
        let h = random_poly(3);
        let shifted = &u + &(&q * &h);
        for j in 0..d {
            let basis = Poly::monomial(field.one(), j);
            prop_assert_eq!(bez.pairing_of_representatives(&shifted, &basis), bez.pairing_of_representatives(&u, &basis));
        }
        for i in 0..d {
            for j in 0..d {
                let (ti, tj) = (Poly::monomial(field.one(), i), Poly::monomial(field.one(), j));
                prop_assert_eq!(&bez.pairing_of_representatives(&ti, &tj), bez.gram().get(i, j));
            }
        }
    }

    #[test]
    fn synthesized_spaces(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = random_field(&mut rng);
        let d = rng.gen_range(1..=10usize);
        let q = random_reciprocal(&mut rng, field, d, 4);
        let o = orthogonal_with_charpoly(&q, OrthogonalOptions::default()).unwrap();
        prop_assert!(o.space.is_nondegenerate() && o.space.is_isometry(&o.gamma));
        prop_assert_eq!(char_poly(&o.gamma).unwrap(), q.clone());
        let b = &o.blocks;
        prop_assert_eq!(b.core_dim + b.plus_dim + b.minus_dim, d);
        if d % 2 == 0 {
            let s = symplectic_with_charpoly(&q).unwrap();
            prop_assert!(s.space.determinant().is_one() && s.space.is_isometry(&s.gamma));
            prop_assert_eq!(char_poly(&s.gamma).unwrap(), q);
        }
    }

    #[test]
    fn spinor_norm_is_multiplicative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let field = random_field(&mut rng);
        let dim = rng.gen_range(1..=5usize);
        let space = random_diagonal_space(&mut rng, field, dim);
        let (ka, kb) = (rng.gen_range(0..=4usize), rng.gen_range(0..=4usize));
        let (a, _) = random_reflection_product(&mut rng, &space, ka);
        let (b, _) = random_reflection_product(&mut rng, &space, kb);
        let product = spinor_norm(&space, &(&a * &b)).unwrap();
        let separate = class_mul(&spinor_norm(&space, &a).unwrap(), &spinor_norm(&space, &b).unwrap()).unwrap();
        prop_assert_eq!(&product, &separate);
        prop_assert_eq!(spinor_norm_by_reflections(&space, &(&a * &b)).unwrap(), separate);
    }

    #[test]
    fn signature_is_a_congruence_invariant(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = rng.gen_range(2..=7usize);
        let p = Poly::from_i64(Q, &{
            let mut c = vec![0i64; n + 1];
            c[0] = -1;
            c[n] = 1;
            c
        });
        let q = random_reciprocal(&mut rng, Q, n, 2);
        prop_assume!(!resultant(&p, &q).unwrap().is_zero());
        let g = SkewBezoutian::build(&p, &q, Sign::Plus).unwrap().gram().clone();
        // Unimodular U as a product of elementary row operations.
        let mut u = Matrix::identity(Q, n);
        for _ in 0..3 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j {
                continue;
            }
            let mut e = Matrix::identity(Q, n);
            e.set(i, j, Q.from_i64(rng.gen_range(-2..=2)));
            u = &u * &e;
        }
        let h = &(&u.transpose() * &g) * &u;
        let (gl, hl) = (IntegerGram::new(g).unwrap(), IntegerGram::new(h).unwrap());
        prop_assert_eq!(signature(&gl).unwrap(), signature(&hl).unwrap());
        prop_assert_eq!(gl.determinant(), hl.determinant());
        prop_assert_eq!(gl.is_even(), hl.is_even());
        let (cg, ch) = (classify(&gl).unwrap(), classify(&hl).unwrap());
        if !matches!(cg, LatticeClass::A(_)) && !matches!(ch, LatticeClass::A(_)) {
            prop_assert_eq!(cg, ch);
        }
    }

    #[test]
    fn jordan_round_trip(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let spec = random_feasible_spec(&mut rng, 10);
        let (space, m) = realize(&spec).unwrap();
        prop_assert!(space.is_isometry(&m));
        prop_assert_eq!(&jordan_spec(&m, spec.epsilon()).unwrap(), &spec);
        let bad = make_infeasible(&mut rng, &spec);
        prop_assert!(!feasible(&bad));
        prop_assert!(realize(&bad).is_err());
    }
}

#[test]
fn cartan_determinant_recurrence() {
    // det C_n = 2 det C_{n−1} − det C_{n−2}, with det C_0 = 1 and det C_1 = 2.
    let (mut prev, mut cur) = (1i64, 2i64);
    for n in 1..=16usize {
        assert_eq!(cartan_matrix(n).determinant().unwrap(), Q.from_i64(cur), "n = {n}");
        assert_eq!(cur, n as i64 + 1);
        (prev, cur) = (cur, 2 * cur - prev);
    }
}

#[test]
fn search_results_are_valid_partners() {
    let q = Poly::from_i64(Q, &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let target = LatticeClass::EvenUnimodular { plus: 9, minus: 1 };
    let found = search_cyclotomic(&q, 10, &target).unwrap();
    assert!(!found.is_empty());
    for product in found {
        assert_eq!(product.degree(), 10);
        let p = product.expand(Q).unwrap();
        assert!(p.is_eps_reciprocal(Sign::Minus), "{product} is not skew-reciprocal");
        assert_eq!(p.gcd(&q).degree(), Some(0));
        let g = IntegerGram::new(SkewBezoutian::build(&p, &q, Sign::Plus).unwrap().gram().clone()).unwrap();
        assert!(g.determinant().abs() == 1.into());
        assert_eq!(classify(&g).unwrap(), target);
    }
    assert!(search_cyclotomic(&q, 10, &LatticeClass::I(9, 1)).unwrap().is_empty());
}
