use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssimp_core::basedring::{catalog as ring_catalog, iso_search, BasedRing, IsoOptions};
use ssimp_core::char2::{exact_binom, lucas_binom, parity_claims};
use ssimp_core::decomp::{DecompOptions, Registry};
use ssimp_core::exact_linalg::{Field, Fq, Mat};
use ssimp_core::groups::catalog;
use ssimp_core::modrep::{GModule, ModMorphism};
use ssimp_core::qcase::gl2_fusion;

fn field() -> impl Strategy<Value = Fq> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..=3).prop_map(|(p, r)| Fq::new(p, r).unwrap())
}

fn random_invertible(f: &Fq, n: usize, rng: &mut ChaCha8Rng) -> Mat<Fq> {
    loop {
        let m = Mat::random(f, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (f.random_elem(&mut rng), f.random_elem(&mut rng), f.random_elem(&mut rng));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        match f.inv(&a) {
            Some(i) => prop_assert!(f.is_one(&f.mul(&a, &i))),
            None => prop_assert!(f.is_zero(&a)),
        }
        prop_assert_eq!(f.pow(&a, f.order().unwrap()), a);
    }

    #[test]
    fn rank_nullity(f in field(), r in 1usize..6, c in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Mat::random(&f, r, c, &mut rng);
        let k = a.kernel();
        prop_assert_eq!(a.rank() + k.cols(), c);
        prop_assert!(a.mul(&k).is_zero());
        let b = Mat::random(&f, c, 3, &mut rng);
        prop_assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn lucas_matches_exact(a in 0u64..300, b in 0u64..300, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let exact = exact_binom(a, b) % p;
        prop_assert_eq!(num_bigint::BigUint::from(lucas_binom(a, b, p).unwrap()), exact);
    }

    #[test]
    fn parity_claims_hold(n in 1u64..=4096) {
        prop_assert!(parity_claims(n).unwrap().ok);
    }

    #[test]
    fn gl2_rule_preserves_dimension(m1 in -4i64..4, a in 0i64..5, n1 in -4i64..4, b in 0i64..5) {
        let x = (m1 + a, m1);
        let y = (n1 + b, n1);
        let dim = |w: (i64, i64)| (w.0 - w.1 + 1) as usize;
        let out = gl2_fusion(x, y).unwrap();
        prop_assert_eq!(out.iter().map(|&w| dim(w)).sum::<usize>(), dim(x) * dim(y));
        let mut swapped = gl2_fusion(y, x).unwrap();
        let mut out = out;
        out.sort();
        swapped.sort();
        prop_assert_eq!(out, swapped);
    }
}

fn catalog_ring() -> impl Strategy<Value = BasedRing> {
    prop::sample::select(vec![
        "ver_p(5)",
        "ver_p(7)",
        "ver_p_plus(5)",
        "K_l(3)",
        "K_l_tilde(3)",
        "group_ring(6)",
        "group_ring(2,2)",
        "product(ver_p(5),group_ring(3))",
    ])
    .prop_map(|n| ring_catalog(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabelled_rings_are_isomorphic(r in catalog_ring(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        prop_assert!(r.validate().ok);
        let mut perm: Vec<usize> = (0..r.rank()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let s = r.permuted(&perm).unwrap();
        prop_assert!(s.validate().ok);
        let iso = iso_search(&r, &s, &IsoOptions::default()).unwrap();
        prop_assert!(iso.is_some());
        prop_assert_eq!(BasedRing::from_json_str(&s.to_json_string()).unwrap(), s);
    }

    /// A sum of Jordan blocks of Z/5, hidden by a random change of basis,
    /// decomposes into the same blocks for every seed.
    #[test]
    fn krull_schmidt_is_seed_independent(
        sizes in prop::collection::vec(1usize..=5, 1..4),
        basis_seed in any::<u64>(),
        seeds in prop::collection::vec(any::<u64>(), 5),
    ) {
        let g = catalog("cyclic:5").unwrap();
        let f = Fq::prime(5).unwrap();
        let mut m = GModule::jordan(&g, &f, sizes[0]).unwrap();
        for &k in &sizes[1..] {
            m = m.direct_sum(&GModule::jordan(&g, &f, k).unwrap()).unwrap();
        }
        let t = random_invertible(&f, m.dim(), &mut ChaCha8Rng::seed_from_u64(basis_seed));
        let ti = t.inverse().unwrap();
        let action = m.action().iter().map(|a| t.mul(&a.mul(&ti))).collect();
        let hidden = GModule::new(&g, &f, m.dim(), action).unwrap();
        let mut reg = Registry::new(&g, &f);
        for k in 1..=5 {
            reg.insert(&GModule::jordan(&g, &f, k).unwrap()).unwrap();
        }
        let mut want: Vec<(usize, usize)> = Vec::new();
        for k in 1..=5 {
            let c = sizes.iter().filter(|&&s| s == k).count();
            if c > 0 {
                want.push((k - 1, c));
            }
        }
        for s in seeds {
            let got = reg.classify(&hidden, &DecompOptions::with_seed(s)).unwrap().multiset();
            prop_assert_eq!(&got, &want);
        }
    }

    /// Tensoring a negligible endomorphism with an identity keeps it
    /// negligible.
    #[test]
    fn negligibles_form_a_tensor_ideal(a in 1usize..=3, b in 1usize..=3, seed in any::<u64>()) {
        let g = catalog("cyclic:3").unwrap();
        let f = Fq::prime(3).unwrap();
        let x = GModule::jordan(&g, &f, 3).unwrap().direct_sum(&GModule::jordan(&g, &f, a).unwrap()).unwrap();
        let y = GModule::jordan(&g, &f, b).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mat = Mat::zeros(&f, x.dim(), x.dim());
        for h in x.hom_space(&x).unwrap() {
            mat.add_scaled(&f.random_elem(&mut rng), &h);
        }
        let phi = ModMorphism::new(&x, &x, mat).unwrap();
        if phi.is_negligible().unwrap() {
            prop_assert!(phi.tensor_id(&y).unwrap().is_negligible().unwrap());
            prop_assert!(phi.id_tensor(&y).unwrap().is_negligible().unwrap());
        }
        prop_assert_eq!(x.dual().dual(), x.clone());
    }
}
