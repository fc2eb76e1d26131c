use cjt_exact::{
    kernel, rank, smith_normal_form, Field, FieldCtx, FieldScalar, Matrix, Poly, PolyRing, RatFuncField, Ring,
    Subspace,
};
use proptest::prelude::*;

fn field(p: u32) -> FieldCtx {
    FieldCtx::prime(p).unwrap()
}

fn scalar_matrix(f: &FieldCtx, rows: usize, cols: usize, entries: &[u32]) -> Matrix<FieldScalar> {
    Matrix::from_fn(rows, cols, |i, j| f.from_int(entries[(i * cols + j) % entries.len()] as i64))
}

fn poly_from(f: &FieldCtx, coeffs: &[u32]) -> Poly {
    Poly::from_coeffs(coeffs.iter().map(|&c| f.from_int(c as i64)).collect())
}

prop_compose! {
    fn prime()(idx in 0usize..3) -> u32 { [2, 3, 5][idx] }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(p in prime(), rows in 1usize..7, cols in 1usize..7,
                                   entries in prop::collection::vec(0u32..5, 1..49)) {
        let f = field(p);
        let m = scalar_matrix(&f, rows, cols, &entries);
        let r = rank(&f, &m);
        prop_assert_eq!(r, rank(&f, &m.transpose()));
        let ker = kernel(&f, &m);
        prop_assert_eq!(ker.rows() + r, cols);
        for i in 0..ker.rows() {
            prop_assert!(m.mul_vec(ker.row(i), &f).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn subspace_lattice_laws(p in prime(), n in 1usize..6,
                             a in prop::collection::vec(0u32..5, 1..30),
                             b in prop::collection::vec(0u32..5, 1..30)) {
        let f = field(p);
        let ra = (a.len() / n).clamp(1, n);
        let rb = (b.len() / n).clamp(1, n);
        let sa = Subspace::row_space(&f, &scalar_matrix(&f, ra, n, &a));
        let sb = Subspace::row_space(&f, &scalar_matrix(&f, rb, n, &b));
        let sum = sa.sum(&sb).unwrap();
        let cap = sa.intersect(&sb).unwrap();
        prop_assert_eq!(&sum, &sb.sum(&sa).unwrap());
        prop_assert_eq!(&cap, &sb.intersect(&sa).unwrap());
        prop_assert_eq!(&sa.sum(&sa).unwrap(), &sa);
        prop_assert_eq!(&sa.intersect(&sa).unwrap(), &sa);
        prop_assert_eq!(sum.dim() + cap.dim(), sa.dim() + sb.dim());
        prop_assert_eq!(sa.dim() + sa.perp().dim(), n);
        prop_assert_eq!(&sa.perp().perp(), &sa);
        prop_assert!(sum.contains(&sa).unwrap() && sa.contains(&cap).unwrap());
        // perp turns sums into intersections
        prop_assert_eq!(sum.perp(), sa.perp().intersect(&sb.perp()).unwrap());
    }

    #[test]
    fn polynomial_ring_maps_to_evaluations(p in prime(),
                                           a in prop::collection::vec(0u32..5, 0..8),
                                           b in prop::collection::vec(0u32..5, 1..8),
                                           c in 0u32..5) {
        let f = field(p);
        let pa = poly_from(&f, &a);
        let pb = poly_from(&f, &b);
        let x = f.from_int(c as i64);
        let ev = |q: &Poly| q.eval(x, &f);
        prop_assert_eq!(ev(&pa.add(&pb, &f)), f.add(&ev(&pa), &ev(&pb)));
        prop_assert_eq!(ev(&pa.mul(&pb, &f)), f.mul(&ev(&pa), &ev(&pb)));
        if !pb.is_zero() {
            let (q, r) = pa.divrem(&pb, &f);
            prop_assert_eq!(q.mul(&pb, &f).add(&r, &f), pa.clone());
            let g = pa.gcd(&pb, &f);
            prop_assert!(g.divides(&pa, &f) && g.divides(&pb, &f));
        }
    }

    #[test]
    fn smith_ranks_match_specializations(p in prime(), n in 1usize..4,
                                         entries in prop::collection::vec(prop::collection::vec(0u32..5, 0..3), 1..10)) {
        let f = field(p);
        let ring = PolyRing::new(f.clone());
        let m = Matrix::from_fn(n, n, |i, j| poly_from(&f, &entries[(i * n + j) % entries.len()]));
        let s = smith_normal_form(&ring, &m);
        prop_assert!(s.verify(&ring, &m));
        for c in f.elements() {
            let expected = s.invariant_factors().iter().filter(|d| !d.eval(c, &f).is_zero()).count();
            prop_assert_eq!(rank(&f, &ring.evaluate(&m, c)), expected);
        }
        let kf = RatFuncField::new(f.clone());
        let generic = m.map(|q| kf.poly(q.clone()));
        prop_assert_eq!(rank(&kf, &generic), s.rank());
    }

    #[test]
    fn rational_function_field_axioms(p in prime(),
                                      a in prop::collection::vec(0u32..5, 0..5),
                                      b in prop::collection::vec(0u32..5, 1..5),
                                      c in prop::collection::vec(0u32..5, 1..5)) {
        let f = field(p);
        let k = RatFuncField::new(f.clone());
        let x = k.poly(poly_from(&f, &a));
        let y = k.poly(poly_from(&f, &b));
        let z = k.poly(poly_from(&f, &c));
        if let (Some(q), false) = (k.div(&x, &y), k.is_zero(&z)) {
            let lhs = k.mul(&k.add(&q, &z), &y);
            let rhs = k.add(&x, &k.mul(&z, &y));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
