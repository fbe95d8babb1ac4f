use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use semitoric::cohomology::{
    a1_sigma_slice, a1_slice, component_classes, cup_product, hodge_diamond,
    intersection_number, picard_group, toric_slice, ComponentClasses, HodgeAlgebra,
    HodgeClass, RootMode, ToricCohomology, TPoly,
};
use semitoric::cox::{CoxPolynomial, CoxRing, GradedSlice};
use semitoric::polytope::{semiample_contraction, Fan, SemiampleContraction};
use semitoric::{int, rat, Error, Int, Rat};

fn ivec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    Fan::new(
        rank,
        rays.iter().map(|r| ivec(r)).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
    )
    .expect("fixture fan must be valid")
}

fn p2_fan() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
}

fn p3_ring() -> CoxRing {
    CoxRing::new(fan(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
        &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
    ))
    .unwrap()
}

fn f2_ring() -> CoxRing {
    CoxRing::new(fan(
        2,
        &[&[1, 0], &[0, -1], &[-1, 2], &[0, 1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
    ))
    .unwrap()
}

fn p1p1_ring() -> CoxRing {
    CoxRing::new(fan(
        2,
        &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
        &[&[0, 2], &[1, 2], &[1, 3], &[0, 3]],
    ))
    .unwrap()
}

fn p112_fan() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[0, 2]])
}

fn fermat_quartic(ring: &CoxRing) -> (CoxPolynomial, SemiampleContraction) {
    let terms: Vec<(Vec<Int>, Rat)> = (0..4)
        .map(|i| {
            let mut e = ivec(&[0, 0, 0, 0]);
            e[i] = int(4);
            (e, rat(1))
        })
        .collect();
    let beta = ring.beta0();
    let f = CoxPolynomial::new(&ring.grading, terms, beta).unwrap();
    let ctr = semiample_contraction(&ring.fan, &ivec(&[1, 1, 1, 1])).unwrap();
    (f, ctr)
}

fn f2_elliptic() -> (CoxRing, CoxPolynomial, SemiampleContraction) {
    let ring = f2_ring();
    let f = ring.generic_polynomial(&ivec(&[1, 1, 1, 1]), 1).unwrap();
    let ctr = semiample_contraction(&ring.fan, &ivec(&[1, 1, 1, 1])).unwrap();
    (ring, f, ctr)
}

// Two fibers of the first projection of P^1 x P^1: the i = 1 disconnected
// case.
fn p1p1_two_fibers() -> (CoxRing, CoxPolynomial, SemiampleContraction) {
    let ring = p1p1_ring();
    let f = ring.generic_polynomial(&ivec(&[2, 0, 0, 0]), 1).unwrap();
    let ctr = semiample_contraction(&ring.fan, &ivec(&[2, 0, 0, 0])).unwrap();
    (ring, f, ctr)
}

// The canonical representative of the i-th quotient-basis monomial of a
// slice, as a polynomial.
fn quot_rep(ring: &CoxRing, slice: &GradedSlice, i: usize) -> CoxPolynomial {
    CoxPolynomial::monomial(&ring.grading, &slice.monomials[slice.quotient[i]], Rat::one())
}

#[test]
fn toric_slice_dimensions() {
    let p2 = p2_fan();
    assert_eq!(toric_slice(&p2, 0).unwrap().quotient_dim(), 1);
    assert_eq!(toric_slice(&p2, 1).unwrap().quotient_dim(), 1, "Picard rank of P^2");
    assert_eq!(toric_slice(&p2, 2).unwrap().quotient_dim(), 1, "top class");
    let f2 = f2_ring().fan;
    assert_eq!(toric_slice(&f2, 1).unwrap().quotient_dim(), 2, "4 rays minus 2 relations");
    assert_eq!(toric_slice(&f2, 2).unwrap().quotient_dim(), 1);
    let p3 = p3_ring().fan;
    let dims: Vec<usize> =
        (0..=3).map(|k| toric_slice(&p3, k).unwrap().quotient_dim()).collect();
    assert_eq!(dims, vec![1, 1, 1, 1]);
}

#[test]
fn toric_slice_poincare_pairs_match() {
    for f in [p2_fan(), f2_ring().fan, p112_fan(), p3_ring().fan] {
        let d = f.rank();
        for k in 0..=d {
            assert_eq!(
                toric_slice(&f, k).unwrap().quotient_dim(),
                toric_slice(&f, d - k).unwrap().quotient_dim(),
                "dual cohomology degrees have equal dimension"
            );
        }
    }
}

#[test]
fn integrate_smooth_examples() {
    let p2 = ToricCohomology::new(&p2_fan()).unwrap();
    assert_eq!(p2.integrate(&TPoly::monomial(&[0, 1], Rat::one())).unwrap(), rat(1));
    let f2 = ToricCohomology::new(&f2_ring().fan).unwrap();
    assert_eq!(
        f2.integrate(&TPoly::monomial(&[2, 3], Rat::one())).unwrap(),
        rat(1),
        "the cone spanned by e3 and e4 is smooth"
    );
    // D4^2 = -2 on F2: self-intersection of the (-2)-curve.
    assert_eq!(f2.integrate(&TPoly::monomial(&[3, 3], Rat::one())).unwrap(), rat(-2));
}

#[test]
fn integrate_calibration_is_cone_independent() {
    // P(1,1,2) has one multiplicity-2 maximal cone; whichever cone
    // calibrates the functional, every cone satisfies the normalization.
    let fan = p112_fan();
    let toric = ToricCohomology::new(&fan).unwrap();
    for cone in fan.max_cones() {
        let mult = fan.cone_multiplicity(cone).unwrap();
        assert_eq!(
            toric.integrate(&TPoly::monomial(cone, Rat::one())).unwrap(),
            Rat::one() / Rat::from_integer(mult),
            "product of cone divisors integrates to 1/mult"
        );
    }
}

#[test]
fn a1_slice_examples() {
    // Ample quartic on P^3: Picard rank 1 ambient.
    let p3 = p3_ring();
    let t3 = ToricCohomology::new(&p3.fan).unwrap();
    let x3 = TPoly::from_divisor(&ivec(&[1, 1, 1, 1]));
    assert_eq!(a1_slice(&t3, &x3, 1).unwrap().dim, 1);
    assert_eq!(a1_slice(&t3, &x3, 0).unwrap().dim, 1);
    // F2 anticanonical: D4 * [X] = 0 kills one of the two classes.
    let f2 = f2_ring();
    let t2 = ToricCohomology::new(&f2.fan).unwrap();
    let x2 = TPoly::from_divisor(&ivec(&[1, 1, 1, 1]));
    assert_eq!(a1_slice(&t2, &x2, 1).unwrap().dim, 1);
    assert_eq!(a1_slice(&t2, &x2, 0).unwrap().dim, 1);
    // D4 * [X] vanishes in cohomology.
    let d4x = TPoly::monomial(&[3], Rat::one()).mul(&x2);
    assert!(t2.slice(2).reduce(&d4x).unwrap().is_empty());
}

#[test]
fn a1_sigma_zero_cone_f2() {
    let f2 = f2_ring();
    let toric = ToricCohomology::new(&f2.fan).unwrap();
    let ctr = semiample_contraction(&f2.fan, &ivec(&[1, 1, 1, 1])).unwrap();
    let zero = ctr.zero_cone();
    let s0 = a1_sigma_slice(&toric, &ctr, zero, 0).unwrap();
    assert_eq!(s0.dim(), 1, "the unit pairs with itself through X^2 = 8");
    assert_eq!(s0.u_monomials, vec![Vec::<usize>::new()]);
    // s beyond d - i(sigma): no complementary partner.
    let s1 = a1_sigma_slice(&toric, &ctr, zero, 1).unwrap();
    assert_eq!(s1.dim(), 0);
    assert!(s1.v_monomials.is_empty());
}

#[test]
fn a1_sigma_interior_cone_f2() {
    // The 2-dimensional target cone with e4 interior: U^sigma is the ideal
    // generated by D4, so its lowest degree is one.
    let f2 = f2_ring();
    let toric = ToricCohomology::new(&f2.fan).unwrap();
    let ctr = semiample_contraction(&f2.fan, &ivec(&[1, 1, 1, 1])).unwrap();
    let sigma = ctr.smallest[&vec![3usize]];
    assert_eq!(ctr.target_cone_dim(sigma), 2);
    assert_eq!(ctr.i_sigma(sigma), 0);
    let s0 = a1_sigma_slice(&toric, &ctr, sigma, 0).unwrap();
    assert!(s0.u_monomials.is_empty(), "an ideal has no degree-zero elements");
    assert_eq!(s0.dim(), 0);
    let s1 = a1_sigma_slice(&toric, &ctr, sigma, 1).unwrap();
    assert_eq!(s1.u_monomials, vec![vec![3usize]]);
    assert_eq!(s1.dim(), 1, "D4 pairs with itself to -2 under the trivial twist");
}

#[test]
fn hodge_diamond_fermat_quartic() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let hd = hodge_diamond(&ring, &f, &ctr).unwrap();
    assert_eq!(
        hd.h,
        vec![vec![1, 0, 1], vec![0, 20, 0], vec![1, 0, 1]],
        "K3 Hodge diamond"
    );
    let cell = &hd.provenance[1][1];
    assert_eq!(cell.toric, 1);
    assert_eq!(cell.residue, vec![(ctr.zero_cone(), 1, 19)]);
    let h20 = &hd.provenance[2][0];
    assert_eq!(h20.toric, 0);
    assert_eq!(h20.residue, vec![(ctr.zero_cone(), 1, 1)]);
}

#[test]
fn hodge_diamond_f2_elliptic() {
    let (ring, f, ctr) = f2_elliptic();
    let hd = hodge_diamond(&ring, &f, &ctr).unwrap();
    assert_eq!(hd.h, vec![vec![1, 1], vec![1, 1]], "elliptic curve diamond");
    assert_eq!(hd.provenance[1][0].residue, vec![(ctr.zero_cone(), 1, 1)]);
    assert_eq!(hd.provenance[1][1].toric, 1);
    assert!(hd.provenance[1][1].residue.is_empty());
}

#[test]
fn hodge_diamond_disconnected_two_fibers() {
    // Bidegree (2,0) on P^1 x P^1 is 1-semiample: X is two disjoint fibers
    // and h^{0,0} = 2 is reported rather than rejected.
    let (ring, f, ctr) = p1p1_two_fibers();
    assert_eq!(ctr.kappa, 1);
    let hd = hodge_diamond(&ring, &f, &ctr).unwrap();
    assert_eq!(hd.h, vec![vec![2, 0], vec![0, 2]]);
}

#[test]
fn hodge_diamond_rejects_degenerate_f() {
    let ring = p3_ring();
    let (_, ctr) = fermat_quartic(&ring);
    let f = CoxPolynomial::monomial(&ring.grading, &ivec(&[4, 0, 0, 0]), Rat::one());
    assert!(matches!(
        hodge_diamond(&ring, &f, &ctr),
        Err(Error::DegenerateHypersurface(_))
    ));
}

#[test]
fn diamond_symmetries() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let (ring2, f2, ctr2) = f2_elliptic();
    let (ring3, f3, ctr3) = p1p1_two_fibers();
    for (ring, f, ctr) in [(ring, f, ctr), (ring2, f2, ctr2), (ring3, f3, ctr3)] {
        let hd = hodge_diamond(&ring, &f, &ctr).unwrap();
        let n = hd.d;
        let i = ctr.kappa;
        for p in 0..n {
            for q in 0..n {
                assert_eq!(hd.h[p][q], hd.h[q][p], "Hodge symmetry");
                assert_eq!(hd.h[p][q], hd.h[n - 1 - p][n - 1 - q], "Poincare duality");
            }
        }
        for k in 1..n {
            if k != i - 1 {
                assert_eq!(hd.h[0][k], 0, "h^(0,k) vanishes away from 0 and i-1");
            }
        }
    }
}

#[test]
fn deep_cones_contribute_nothing() {
    // Cones of dimension at least the semiample index never add to the
    // diamond on the test inputs: either s is invalid or a factor vanishes.
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let (ring2, f2, ctr2) = p1p1_two_fibers();
    for (ring, f, ctr) in [(ring, f, ctr), (ring2, f2, ctr2)] {
        let toric = ToricCohomology::new(&ring.fan).unwrap();
        let d = ring.fan.rank();
        let i = ctr.kappa;
        for sigma in 0..ctr.target_faces.len() {
            let dim_sigma = ctr.target_cone_dim(sigma);
            if dim_sigma < i {
                continue;
            }
            for p in 0..d {
                for q in 0..d {
                    let num = (p + q + 1) as i64 - i as i64 - dim_sigma as i64;
                    if num < 0 || num % 2 != 0 {
                        continue;
                    }
                    let s = (num / 2) as usize;
                    let a = a1_sigma_slice(&toric, &ctr, sigma, s).unwrap().dim();
                    if a == 0 {
                        continue;
                    }
                    let qr = q as i64 - s as i64 + 1;
                    let r = ring
                        .r1_sigma_slice(&f, &ctr, sigma, qr)
                        .unwrap()
                        .quotient_dim();
                    assert_eq!(a * r, 0, "deep-cone contribution must vanish");
                }
            }
        }
    }
}

#[test]
fn cup_toric_toric_k3() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
    let h = HodgeClass::toric_class(1, TPoly::from_divisor(&ivec(&[1, 0, 0, 0])));
    let hh = cup_product(&algebra, &h, &h).unwrap();
    assert_eq!(hh.p, 2);
    assert_eq!(hh.q, 2);
    let poly = &hh.toric[&0];
    assert_eq!(
        algebra.integrate_toric(poly).unwrap(),
        rat(4),
        "the hyperplane self-intersection on the quartic is 4"
    );
}

#[test]
fn cup_rule_c_scalar_and_twist_k3() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
    let zero = ctr.zero_cone();
    let ga = CoxPolynomial::monomial(&ring.grading, &ivec(&[2, 2, 0, 0]), Rat::one());
    let gb = CoxPolynomial::monomial(&ring.grading, &ivec(&[0, 0, 2, 2]), Rat::one());
    let a = HodgeClass::residue_class(1, 1, zero, TPoly::one(), ga.clone());
    let b = HodgeClass::residue_class(1, 1, zero, TPoly::one(), gb.clone());
    let ab = algebra.cup(&a, &b).unwrap();
    let gh = ga.mul(&gb, &ring.grading);
    let res = algebra.context(zero).res_sigma(&ring, &gh).unwrap();
    assert_eq!(res, Rat::new(int(1), int(4096)), "monomial residue against J = 4096 x^3");
    // Rule (c) with r = 1, i(sigma) = 3: scalar -1, twist 2, toric part
    // -res * X^2.
    assert!(ab.residue.is_empty());
    assert_eq!(ab.toric.len(), 1);
    let poly = &ab.toric[&2];
    let expected = TPoly::from_divisor(&ivec(&[1, 1, 1, 1])).pow(2).scale(&-res.clone());
    assert_eq!(poly, &expected);
    assert_eq!(
        algebra.integrate_toric(poly).unwrap(),
        -res * rat(64),
        "integral against X^3 = 64"
    );
    // Graded pieces commute.
    assert!(algebra.classes_equal(&ab, &algebra.cup(&b, &a).unwrap()).unwrap());
}

#[test]
fn cup_k3_residue_pairing_has_rank_19() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
    let zero = ctr.zero_cone();
    let slice = ring.r1_sigma_slice(&f, &ctr, zero, 2).unwrap();
    assert_eq!(slice.quotient_dim(), 19);
    let ctx = algebra.context(zero);
    let mut ech = semitoric::linalg::Echelon::new();
    for a in 0..19 {
        let ga = quot_rep(&ring, &slice, a);
        let mut row = Vec::new();
        for b in 0..19 {
            let gb = quot_rep(&ring, &slice, b);
            let v = ctx.res_sigma(&ring, &ga.mul(&gb, &ring.grading)).unwrap();
            if !v.is_zero() {
                row.push((b, v));
            }
        }
        ech.insert(row);
    }
    assert_eq!(ech.rank(), 19, "the residue pairing on the 19-dim slice is nondegenerate");
}

#[test]
fn cup_toric_residue_keeps_residue_type() {
    // A pure toric class times a pure residue class never produces a toric
    // part: the factors are orthogonal until rules (c)/(d) apply.
    let (ring, f, ctr) = f2_elliptic();
    let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
    let zero = ctr.zero_cone();
    let g1 = CoxPolynomial::monomial(&ring.grading, &ivec(&[0, 0, 0, 0]), Rat::one());
    let r1 = HodgeClass::residue_class(1, 0, zero, TPoly::one(), g1);
    let h = HodgeClass::toric_class(1, TPoly::from_divisor(&ivec(&[1, 0, 0, 0])));
    let prod = algebra.cup(&h, &r1).unwrap();
    assert!(prod.toric.is_empty(), "rule (b) only multiplies the u-part");
    assert_eq!(prod.residue.len(), 1);
    assert_eq!(prod.residue[0].u, TPoly::from_divisor(&ivec(&[1, 0, 0, 0])));
}

#[test]
fn cup_distinct_cones_vanish() {
    let (ring, f, ctr) = f2_elliptic();
    let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
    let zero = ctr.zero_cone();
    let ray_sigma = ctr.smallest[&vec![0usize]];
    assert_ne!(ray_sigma, zero);
    let g1 = CoxPolynomial::monomial(&ring.grading, &ivec(&[0, 0, 0, 0]), Rat::one());
    let deg = ring.r_degree(&f.degree, &ctr, ray_sigma, 1);
    let m = ring.monomials_of_degree(&deg).unwrap();
    let g2 = CoxPolynomial::monomial(&ring.grading, &m[0], Rat::one());
    let a = HodgeClass::residue_class(1, 0, zero, TPoly::one(), g1);
    let b = HodgeClass::residue_class(1, 0, ray_sigma, TPoly::one(), g2);
    let prod = algebra.cup(&a, &b).unwrap();
    assert!(prod.toric.is_empty());
    assert!(prod.residue.is_empty());
}

#[test]
fn cup_residue_residue_f2() {
    let (ring, f, ctr) = f2_elliptic();
    let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
    let zero = ctr.zero_cone();
    let g1 = CoxPolynomial::monomial(&ring.grading, &ivec(&[0, 0, 0, 0]), Rat::one());
    let s2 = ring.r1_sigma_slice(&f, &ctr, zero, 2).unwrap();
    assert_eq!(s2.quotient_dim(), 1);
    let g2 = quot_rep(&ring, &s2, 0);
    let r1 = HodgeClass::residue_class(1, 0, zero, TPoly::one(), g1);
    let r2 = HodgeClass::residue_class(0, 1, zero, TPoly::one(), g2.clone());
    let prod = algebra.cup(&r1, &r2).unwrap();
    assert_eq!((prod.p, prod.q), (1, 1));
    let res = algebra.context(zero).res_sigma(&ring, &g2).unwrap();
    assert!(!res.is_zero(), "the (1,0) x (0,1) pairing of the elliptic curve is perfect");
    // Rule (c) with i(sigma) = 2: scalar -1, twist 1, toric part -res * X.
    let expected = TPoly::from_divisor(&ivec(&[1, 1, 1, 1])).scale(&-res.clone());
    assert_eq!(prod.toric[&1], expected);
    assert_eq!(
        algebra.integrate_toric(&prod.toric[&1]).unwrap(),
        -res * rat(8),
        "K^2 = 8 on F2"
    );
    assert!(algebra.classes_equal(&prod, &algebra.cup(&r2, &r1).unwrap()).unwrap());
    let canon = algebra.canonical(&prod).unwrap();
    assert!(!canon.toric.is_empty(), "the product is a nonzero point class");
}

#[test]
fn cup_is_commutative_and_associative_on_samples() {
    let (ring, f, ctr) = f2_elliptic();
    let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
    let zero = ctr.zero_cone();
    let g1 = CoxPolynomial::monomial(&ring.grading, &ivec(&[0, 0, 0, 0]), Rat::one());
    let s2 = ring.r1_sigma_slice(&f, &ctr, zero, 2).unwrap();
    let g2 = quot_rep(&ring, &s2, 0);
    let scalar = HodgeClass::toric_class(0, TPoly::one().scale(&rat(2)));
    let h = HodgeClass::toric_class(1, TPoly::from_divisor(&ivec(&[0, 1, 0, 0])));
    let r1 = HodgeClass::residue_class(1, 0, zero, TPoly::one(), g1);
    let r2 = HodgeClass::residue_class(0, 1, zero, TPoly::one(), g2);
    let samples = [scalar.clone(), h.clone(), r1.clone(), r2.clone()];
    for a in &samples {
        for b in &samples {
            let ab = algebra.cup(a, b).unwrap();
            let ba = algebra.cup(b, a).unwrap();
            assert!(algebra.classes_equal(&ab, &ba).unwrap(), "products commute");
        }
    }
    // (scalar * r1) * r2 = scalar * (r1 * r2): a nonzero class of top
    // bidegree on the curve.
    let left = algebra.cup(&algebra.cup(&scalar, &r1).unwrap(), &r2).unwrap();
    let right = algebra.cup(&scalar, &algebra.cup(&r1, &r2).unwrap()).unwrap();
    assert!(algebra.classes_equal(&left, &right).unwrap());
    assert!(!algebra.canonical(&left).unwrap().toric.is_empty());
    // (h * h) * r1 = h * (h * r1) (both vanish beyond the top degree).
    let left = algebra.cup(&algebra.cup(&h, &h).unwrap(), &r1).unwrap();
    let right = algebra.cup(&h, &algebra.cup(&h, &r1).unwrap()).unwrap();
    assert!(algebra.classes_equal(&left, &right).unwrap());
}

#[test]
fn cup_rule_d_on_disconnected_curve() {
    // i = 1: the zero cone has codimension one, so residue products use the
    // two-term formula with the projection p_sigma.
    let (ring, f, ctr) = p1p1_two_fibers();
    let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
    let zero = ctr.zero_cone();
    let s1 = ring.r1_sigma_slice(&f, &ctr, zero, 1).unwrap();
    assert_eq!(s1.quotient_dim(), 1);
    let g = quot_rep(&ring, &s1, 0);
    let r = HodgeClass::residue_class(0, 0, zero, TPoly::one(), g.clone());
    let rr = algebra.cup(&r, &r).unwrap();
    let res = algebra
        .context(zero)
        .res_sigma(&ring, &g.mul(&g, &ring.grading))
        .unwrap();
    assert!(!res.is_zero());
    assert_eq!(rr.toric[&0], TPoly::one().scale(&-res));
    assert!(algebra.classes_equal(&rr, &algebra.cup(&r, &r).unwrap()).unwrap());
}

#[test]
fn picard_report_f2() {
    // i = 2 is far below the theorem's range, so the report carries the
    // literal formula data with the identification flag off. Each boundary
    // ray of the target fan contributes vol(Gamma_sigma) - 1 difference
    // classes; the triangle has edge volumes 4, 2, 2.
    let (ring, f, ctr) = f2_elliptic();
    let report = picard_group(&ring, &f, &ctr).unwrap();
    assert_eq!(report.toric_rank, 1, "one divisor class survives modulo C");
    assert_eq!(report.summands.len(), 3);
    let mut dims: Vec<usize> = report.summands.iter().map(|s| s.dim).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 3]);
    for s in &report.summands {
        assert_eq!(
            rat(s.dim as i64 + 1),
            ctr.gamma_volume(s.sigma),
            "summand dimension is the edge volume minus one"
        );
    }
    assert_eq!(report.rank, 6);
    assert_eq!(report.formula_rank, 6, "4 - 2 - 1 + 5");
    assert!(!report.identification_asserted, "i = 2 is below the theorem's range");
}

#[test]
fn picard_report_quartic() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let report = picard_group(&ring, &f, &ctr).unwrap();
    assert_eq!(report.rank, 1);
    assert!(report.summands.is_empty());
    assert_eq!(report.formula_rank, 1);
    assert!(!report.identification_asserted, "i = 3 is still below the theorem's range");
}

#[test]
fn picard_report_disconnected_two_fibers() {
    // Two fibers of P^1 x P^1: both contracted rays contribute one
    // component summand and Pic has rank 2.
    let (ring, f, ctr) = p1p1_two_fibers();
    let report = picard_group(&ring, &f, &ctr).unwrap();
    // C is spanned by D1 - D2, D3 - D4 and the contracted-fiber indicators
    // D1, D2, which overlap the first relation: rank 3, one toric class.
    assert_eq!(report.toric_rank, 1);
    assert_eq!(report.summands.len(), 2);
    for s in &report.summands {
        assert_eq!(s.dim, 1);
        assert!(s.ray == 2 || s.ray == 3, "both rays contract to the origin");
        assert_eq!(s.sigma, ctr.zero_cone());
    }
    // At i = 1 the summands double-count the same difference class, so the
    // structural rank exceeds the closed formula; the theorem only equates
    // them for i > 3 and the flag records that.
    assert_eq!(report.rank, 3);
    assert_eq!(report.formula_rank, 2, "4 - 2 - 2 + 2");
    assert!(!report.identification_asserted);
}

#[test]
fn component_classes_volume_one_is_empty() {
    let ring = p1p1_ring();
    let a = ivec(&[1, 0, 0, 0]);
    let f = CoxPolynomial::new(
        &ring.grading,
        vec![(ivec(&[1, 0, 0, 0]), rat(1)), (ivec(&[0, 1, 0, 0]), rat(1))],
        ring.divisor_class(&a),
    )
    .unwrap();
    let ctr = semiample_contraction(&ring.fan, &a).unwrap();
    match component_classes(&ring, &f, &ctr, 2, RootMode::Exact).unwrap() {
        ComponentClasses::Exact(v) => assert!(v.is_empty()),
        ComponentClasses::Numeric(_) => panic!("exact mode must return exact classes"),
    }
}

#[test]
fn component_classes_two_fibers_explicit() {
    // f = (x1 - x2)(x1 - 2 x2): edge roots 1 and 2; the single difference
    // class reduces to the constant 1.
    let ring = p1p1_ring();
    let a = ivec(&[2, 0, 0, 0]);
    let f = CoxPolynomial::new(
        &ring.grading,
        vec![
            (ivec(&[2, 0, 0, 0]), rat(1)),
            (ivec(&[1, 1, 0, 0]), rat(-3)),
            (ivec(&[0, 2, 0, 0]), rat(2)),
        ],
        ring.divisor_class(&a),
    )
    .unwrap();
    let ctr = semiample_contraction(&ring.fan, &a).unwrap();
    match component_classes(&ring, &f, &ctr, 2, RootMode::Exact).unwrap() {
        ComponentClasses::Exact(v) => {
            assert_eq!(v.len(), 1, "vol - 1 difference classes");
            assert_eq!(v[0].terms, vec![(ivec(&[0, 0, 0, 0]), rat(1))]);
        }
        ComponentClasses::Numeric(_) => panic!("exact mode must return exact classes"),
    }
}

#[test]
fn component_classes_three_fibers_independent() {
    let ring = p1p1_ring();
    let a = ivec(&[3, 0, 0, 0]);
    // Roots 1, 2, 3 in the edge coordinate.
    let f = CoxPolynomial::new(
        &ring.grading,
        vec![
            (ivec(&[3, 0, 0, 0]), rat(1)),
            (ivec(&[2, 1, 0, 0]), rat(-6)),
            (ivec(&[1, 2, 0, 0]), rat(11)),
            (ivec(&[0, 3, 0, 0]), rat(-6)),
        ],
        ring.divisor_class(&a),
    )
    .unwrap();
    let ctr = semiample_contraction(&ring.fan, &a).unwrap();
    let classes = match component_classes(&ring, &f, &ctr, 2, RootMode::Exact).unwrap() {
        ComponentClasses::Exact(v) => v,
        ComponentClasses::Numeric(_) => panic!("exact mode must return exact classes"),
    };
    assert_eq!(classes.len(), 2);
    let sigma = ctr.smallest[&vec![2usize]];
    let slice = ring.r1_sigma_slice(&f, &ctr, sigma, 1).unwrap();
    let mut ech = semitoric::linalg::Echelon::new();
    for g in &classes {
        assert!(ech.insert(slice.reduce(g).unwrap()), "difference classes are independent");
    }
    assert_eq!(ech.rank(), 2);
}

#[test]
fn component_classes_error_cases() {
    let ring = p1p1_ring();
    let a = ivec(&[2, 0, 0, 0]);
    let gamma = ring.divisor_class(&a);
    let ctr = semiample_contraction(&ring.fan, &a).unwrap();
    // Repeated root: (x1 - x2)^2.
    let sq = CoxPolynomial::new(
        &ring.grading,
        vec![
            (ivec(&[2, 0, 0, 0]), rat(1)),
            (ivec(&[1, 1, 0, 0]), rat(-2)),
            (ivec(&[0, 2, 0, 0]), rat(1)),
        ],
        gamma.clone(),
    )
    .unwrap();
    assert_eq!(
        component_classes(&ring, &sq, &ctr, 2, RootMode::Exact).unwrap_err(),
        Error::RepeatedRoot
    );
    // Irrational (complex) roots: x1^2 + x2^2 does not split over Q.
    let irr = CoxPolynomial::new(
        &ring.grading,
        vec![(ivec(&[2, 0, 0, 0]), rat(1)), (ivec(&[0, 2, 0, 0]), rat(1))],
        gamma.clone(),
    )
    .unwrap();
    assert_eq!(
        component_classes(&ring, &irr, &ctr, 2, RootMode::Exact).unwrap_err(),
        Error::NonSplitPolynomial
    );
    // Numeric mode handles the complex pair: roots +-i, difference 2i.
    match component_classes(&ring, &irr, &ctr, 2, RootMode::Numeric { tolerance: 1e-10 })
        .unwrap()
    {
        ComponentClasses::Numeric(v) => {
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].len(), 1);
            let (e, c) = &v[0][0];
            assert_eq!(e, &ivec(&[0, 0, 0, 0]));
            assert!((c[0]).abs() < 1e-9);
            assert!((c[1].abs() - 2.0).abs() < 1e-9);
        }
        ComponentClasses::Exact(_) => panic!("numeric mode must return numeric classes"),
    }
    // A ray contracted to a full-dimensional cone is out of scope.
    let sq2 = sq.clone();
    assert!(matches!(
        component_classes(&ring, &sq2, &ctr, 0, RootMode::Exact),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn intersection_numbers_f2() {
    let f2 = f2_ring().fan;
    let a = ivec(&[1, 1, 1, 1]);
    assert_eq!(
        intersection_number(&f2, &a, 1, &[3]).unwrap(),
        rat(0),
        "the contracted ray meets the anticanonical divisor in degree zero"
    );
    let pos = intersection_number(&f2, &a, 1, &[0]).unwrap();
    assert_eq!(pos, rat(2));
    assert!(pos.is_positive(), "rays of the target fan pair positively");
    assert_eq!(
        intersection_number(&f2, &a, 0, &[0, 2]).unwrap_err(),
        Error::UnknownCone,
        "e1 and e3 do not span a cone of F2"
    );
}

#[test]
fn intersection_numbers_ample_are_positive() {
    let p2 = p2_fan();
    let a = ivec(&[1, 1, 1]);
    for r in 0..3 {
        let v = intersection_number(&p2, &a, 1, &[r]).unwrap();
        assert_eq!(v, rat(3), "an anticanonical line meets each boundary line thrice");
    }
    assert_eq!(intersection_number(&p2, &a, 2, &[]).unwrap(), rat(9));
    assert_eq!(
        intersection_number(&p2, &a, 1, &[0, 1]).unwrap_err(),
        Error::DimensionMismatch { expected: 1, got: 2 }
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    // The diamond symmetries hold for every certificate-passing anticanonical
    // curve on F2, whatever the sampled coefficients.
    #[test]
    fn f2_diamond_is_symmetric_for_random_f(seed in 0u64..200) {
        let ring = f2_ring();
        let beta_mons = ring.monomials_of_degree(&ring.beta0()).unwrap();
        let f = ring.sample_on_monomials(&beta_mons, seed);
        let ctr = semiample_contraction(&ring.fan, &ivec(&[1, 1, 1, 1])).unwrap();
        if !ring.nondegeneracy_certificate(&f, &ctr).unwrap() {
            return Ok(());
        }
        let hd = hodge_diamond(&ring, &f, &ctr).unwrap();
        prop_assert_eq!(&hd.h, &vec![vec![1, 1], vec![1, 1]]);
    }

    // Cup products stay commutative under random rescaling of the factors.
    #[test]
    fn cup_commutes_for_scaled_classes(c1 in -6i64..=6, c2 in -6i64..=6) {
        prop_assume!(c1 != 0 && c2 != 0);
        let (ring, f, ctr) = f2_elliptic();
        let algebra = HodgeAlgebra::new(&ring, &f, &ctr).unwrap();
        let zero = ctr.zero_cone();
        let g1 = CoxPolynomial::monomial(&ring.grading, &ivec(&[0, 0, 0, 0]), rat(c1));
        let s2 = ring.r1_sigma_slice(&f, &ctr, zero, 2).unwrap();
        let g2 = quot_rep(&ring, &s2, 0).scale(&rat(c2));
        let r1 = HodgeClass::residue_class(1, 0, zero, TPoly::one(), g1);
        let r2 = HodgeClass::residue_class(0, 1, zero, TPoly::one(), g2);
        let ab = algebra.cup(&r1, &r2).unwrap();
        let ba = algebra.cup(&r2, &r1).unwrap();
        prop_assert!(algebra.classes_equal(&ab, &ba).unwrap());
        // Bilinearity in the scalars: the integral scales by c1 * c2.
        let base = {
            let g1 = CoxPolynomial::monomial(&ring.grading, &ivec(&[0, 0, 0, 0]), Rat::one());
            let g2 = quot_rep(&ring, &s2, 0);
            let r1 = HodgeClass::residue_class(1, 0, zero, TPoly::one(), g1);
            let r2 = HodgeClass::residue_class(0, 1, zero, TPoly::one(), g2);
            algebra.cup(&r1, &r2).unwrap()
        };
        let scaled = algebra.integrate_toric(&ab.toric[&1]).unwrap();
        let unscaled = algebra.integrate_toric(&base.toric[&1]).unwrap();
        prop_assert_eq!(scaled, unscaled * rat(c1) * rat(c2));
    }
}
