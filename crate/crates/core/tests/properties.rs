use cjt_core::chern::filtration_chern_check;
use cjt_core::decomp::{decompose, iso_probe, verify_isomorphism, IsoVerdict};
use cjt_core::graded::splitting_type_windowed;
use cjt_core::lattice::{equal_images_decide, generic_image_by_duality, generic_image_direct, generic_kernel, generic_kernel_power};
use cjt_core::sheaf::splitting_type;
use cjt_core::{constant_jordan_type, jordan_type, KEModule, PointSpec};
use cjt_exact::{inverse, rank, FieldCtx, FieldScalar, Matrix, Ring, Subspace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(p: u32) -> FieldCtx {
    FieldCtx::prime(p).unwrap()
}

fn invertible(f: &FieldCtx, size: usize, rng: &mut ChaCha8Rng) -> Matrix<FieldScalar> {
    loop {
        let a = Matrix::from_fn(size, size, |_, _| f.random(rng));
        if rank(f, &a) == size {
            return a;
        }
    }
}

fn nonzero_point(f: &FieldCtx, r: usize, rng: &mut ChaCha8Rng) -> Vec<FieldScalar> {
    loop {
        let pt: Vec<FieldScalar> = (0..r).map(|_| f.random(rng)).collect();
        if pt.iter().any(|x| !x.is_zero()) {
            return pt;
        }
    }
}

fn w(f: &FieldCtx, rng: &mut ChaCha8Rng, max_n: usize) -> KEModule {
    let n = rng.gen_range(1..=max_n);
    let d = rng.gen_range(1..=n.min(f.p() as usize));
    KEModule::w_module(f, n, d).unwrap()
}

/// Two-generator module of constant Jordan type: a sum of at most two
/// W-modules, possibly dualized and moved by a change of coordinates.
fn cjt_module(p: u32, seed: u64) -> KEModule {
    let f = field(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = w(&f, &mut rng, 5);
    if rng.gen_bool(0.5) {
        m = m.direct_sum(&w(&f, &mut rng, 4)).unwrap();
    }
    if rng.gen_bool(0.3) {
        m = m.dual();
    }
    if rng.gen_bool(0.5) {
        m = m.restrict(&invertible(&f, 2, &mut rng)).unwrap();
    }
    m
}

/// Quotient of a W-module by the span of one random vector's orbit.
fn w_quotient(p: u32, seed: u64) -> KEModule {
    let f = field(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = w(&f, &mut rng, 6);
    let v: Vec<FieldScalar> = (0..m.dim()).map(|_| f.random(&mut rng)).collect();
    let sub = m.spin(vec![v]);
    m.quotient(&sub).unwrap().module
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jordan_type_accounts_for_dimension(p in prime(), seed in any::<u64>()) {
        let m = cjt_module(p, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let pt = nonzero_point(m.field(), 2, &mut rng);
        prop_assert_eq!(jordan_type(&m, &PointSpec::Closed(pt)).unwrap().dim(), m.dim());
    }

    #[test]
    fn restriction_is_functorial(p in prime(), seed in any::<u64>()) {
        let m = cjt_module(p, seed);
        let f = m.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let a = invertible(&f, 2, &mut rng);
        let col = nonzero_point(&f, 2, &mut rng);
        let b = Matrix::from_fn(2, 1, |i, _| col[i]);
        let composed = m.restrict(&a.mul(&b, &f)).unwrap();
        let iterated = m.restrict(&a).unwrap().restrict(&b).unwrap();
        prop_assert_eq!(composed, iterated);
    }

    #[test]
    fn dual_preserves_jordan_types(p in prime(), seed in any::<u64>()) {
        let m = cjt_module(p, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let pt = PointSpec::Closed(nonzero_point(m.field(), 2, &mut rng));
        prop_assert_eq!(jordan_type(&m, &pt).unwrap(), jordan_type(&m.dual(), &pt).unwrap());
        prop_assert_eq!(jordan_type(&m, &PointSpec::Generic).unwrap(), jordan_type(&m.dual(), &PointSpec::Generic).unwrap());
    }

    #[test]
    fn equal_images_quotients_have_constant_jordan_type(p in prime(), seed in any::<u64>()) {
        let q = w_quotient(p, seed);
        prop_assume!(q.dim() > 0);
        prop_assert!(equal_images_decide(&q).unwrap().holds);
        prop_assert!(constant_jordan_type(&q).unwrap().is_constant());
    }

    #[test]
    fn generic_kernel_contains_pointwise_kernels(p in prime(), seed in any::<u64>(), n in 1usize..4) {
        let m = cjt_module(p, seed);
        let n = n.min(p as usize);
        let k = generic_kernel_power(&m, n).unwrap().subspace;
        prop_assert!(m.is_invariant(&k));
        let f = m.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        for _ in 0..20 {
            let x = m.x_alpha(&nonzero_point(&f, 2, &mut rng)).unwrap().pow(n, &f);
            prop_assert!(k.contains(&Subspace::kernel_of(&f, &x)).unwrap());
        }
    }

    #[test]
    fn generic_kernel_has_equal_images(p in prime(), seed in any::<u64>()) {
        let m = cjt_module(p, seed);
        let k = generic_kernel(&m).unwrap().subspace;
        let sub = m.submodule(&k).unwrap().module;
        prop_assume!(sub.dim() > 0);
        prop_assert!(equal_images_decide(&sub).unwrap().holds);
    }

    #[test]
    fn generic_kernel_keeps_ranks_of_small_powers(p in prime(), seed in any::<u64>(), n in 1usize..4) {
        let m = cjt_module(p, seed);
        let n = n.min(p as usize);
        let k = generic_kernel_power(&m, n).unwrap().subspace;
        let sub = m.submodule(&k).unwrap().module;
        let f = m.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        let pt = nonzero_point(&f, 2, &mut rng);
        let (xm, xs) = (m.x_alpha(&pt).unwrap(), sub.x_alpha(&pt).unwrap());
        for j in 1..=n {
            let km = Subspace::kernel_of(&f, &xm.pow(j, &f)).dim();
            let ks = Subspace::kernel_of(&f, &xs.pow(j, &f)).dim();
            prop_assert_eq!(km, ks, "kernel of X^{} differs", j);
        }
    }

    #[test]
    fn image_duality_matches_direct(p in prime(), seed in any::<u64>(), n in 1usize..4) {
        let m = cjt_module(p, seed);
        let n = n.min(p as usize);
        prop_assert_eq!(generic_image_by_duality(&m, n).unwrap(), generic_image_direct(&m, n).unwrap());
    }

    #[test]
    fn bundle_ranks_match_jordan_type(p in prime(), seed in any::<u64>()) {
        let m = cjt_module(p, seed);
        let jt = jordan_type(&m, &PointSpec::Generic).unwrap();
        for i in 1..=p as usize {
            prop_assert_eq!(splitting_type(&m, i).unwrap().rank(), jt.multiplicity(i));
        }
    }

    #[test]
    fn bundle_duality(p in prime(), seed in any::<u64>()) {
        let m = cjt_module(p, seed);
        let d = m.dual();
        for i in 1..=p as usize {
            let expected = splitting_type(&m, i).unwrap().dual_twisted(1 - i as i64);
            prop_assert_eq!(splitting_type(&d, i).unwrap(), expected);
        }
    }

    #[test]
    fn chern_identity(p in prime(), seed in any::<u64>()) {
        prop_assert!(filtration_chern_check(&cjt_module(p, seed)).unwrap().holds);
    }

    #[test]
    fn decomposition_reassembles(p in prime(), seed in any::<u64>()) {
        let m = cjt_module(p, seed);
        let f = m.field().clone();
        let dec = decompose(&m, seed, 20).unwrap();
        prop_assert!(dec.verified);
        prop_assert_eq!(dec.summands.iter().map(|s| s.module.dim()).sum::<usize>(), m.dim());
        let inv = inverse(&f, &dec.certificate).unwrap();
        let mut offset = 0;
        for x in 0..2 {
            let conj = inv.mul(&m.generator(x).mul(&dec.certificate, &f), &f);
            offset = 0;
            for s in &dec.summands {
                let d = s.module.dim();
                for i in 0..m.dim() {
                    for j in offset..offset + d {
                        let expected = if (offset..offset + d).contains(&i) {
                            *s.module.generator(x).get(i - offset, j - offset)
                        } else {
                            f.zero()
                        };
                        prop_assert_eq!(*conj.get(i, j), expected);
                    }
                }
                offset += d;
            }
        }
        prop_assert_eq!(offset, m.dim());
        let total = dec
            .summands
            .iter()
            .map(|s| jordan_type(&s.module, &PointSpec::Generic).unwrap())
            .reduce(|a, b| a.add(&b))
            .unwrap();
        prop_assert_eq!(total, jordan_type(&m, &PointSpec::Generic).unwrap());
    }

    #[test]
    fn iso_probe_is_symmetric(p in prime(), seed in any::<u64>(), other in any::<u64>()) {
        let a = cjt_module(p, seed);
        let f = a.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(other);
        // Either a conjugate of `a` or an unrelated module.
        let b = if rng.gen_bool(0.5) {
            let g = invertible(&f, a.dim(), &mut rng);
            let gi = inverse(&f, &g).unwrap();
            let gens = (0..2).map(|x| gi.mul(&a.generator(x).mul(&g, &f), &f)).collect();
            KEModule::new(f.clone(), a.dim(), gens).unwrap()
        } else {
            cjt_module(p, other)
        };
        let ab = iso_probe(&a, &b, 1, 20).unwrap();
        let ba = iso_probe(&b, &a, 1, 20).unwrap();
        prop_assert_eq!(ab.tag(), ba.tag());
        if let (IsoVerdict::Isomorphic(h), IsoVerdict::Isomorphic(k)) = (&ab, &ba) {
            prop_assert!(verify_isomorphism(&a, &b, h));
            prop_assert!(verify_isomorphism(&b, &a, k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn window_method_agrees_with_lattice(p in prime(), seed in any::<u64>()) {
        let m = cjt_module(p, seed);
        prop_assume!(m.dim() <= 12);
        for i in 1..=p as usize {
            let rep = splitting_type_windowed(&m, i, None).unwrap();
            prop_assert_eq!(rep.splitting, splitting_type(&m, i).unwrap());
        }
    }
}
