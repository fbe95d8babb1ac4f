use num_traits::One;
use proptest::prelude::*;
use semitoric::cox::{indicator, CoxPolynomial, CoxRing};
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

fn p2_ring() -> CoxRing {
    CoxRing::new(fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])).unwrap()
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

// Fermat quartic x1^4 + x2^4 + x3^4 + x4^4 and the anticanonical contraction
// of P^3 (ample, identity).
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

#[test]
fn p2_monomials_of_hyperplane_degree() {
    let ring = p2_ring();
    let gamma = ring.divisor_class(&ivec(&[1, 0, 0]));
    let mons = ring.monomials_of_degree(&gamma).unwrap();
    assert_eq!(mons, vec![ivec(&[0, 0, 1]), ivec(&[0, 1, 0]), ivec(&[1, 0, 0])]);
}

#[test]
fn p2_degree_zero_has_only_the_constant() {
    let ring = p2_ring();
    let mons = ring.monomials_of_degree(&ring.grading.zero()).unwrap();
    assert_eq!(mons, vec![ivec(&[0, 0, 0])]);
}

#[test]
fn p2_degrees_are_representative_independent() {
    let ring = p2_ring();
    let c1 = ring.divisor_class(&ivec(&[1, 0, 0]));
    let c2 = ring.divisor_class(&ivec(&[0, 1, 0]));
    assert_eq!(c1, c2, "all coordinate divisors of P^2 are linearly equivalent");
    assert_eq!(
        ring.monomials_of_degree(&c1).unwrap(),
        ring.monomials_of_degree(&c2).unwrap(),
        "monomial enumeration does not depend on the representative"
    );
    // The anticanonical class is three times the hyperplane class.
    assert_eq!(ring.beta0(), ring.grading.scale(3, &c1));
    assert_eq!(ring.grading.rank(), 1);
    assert!(ring.grading.torsion_moduli().is_empty());
}

#[test]
fn f2_anticanonical_has_nine_monomials() {
    let ring = f2_ring();
    let mons = ring.monomials_of_degree(&ring.beta0()).unwrap();
    assert_eq!(mons.len(), 9);
    assert_eq!(ring.grading.rank(), 2);
}

#[test]
fn torsion_grading_of_a_fake_projective_plane() {
    // Rays (1,0), (-1,2), (-1,-2): the grading group is Z + Z/2.
    let ring = CoxRing::new(fan(
        2,
        &[&[1, 0], &[-1, 2], &[-1, -2]],
        &[&[0, 1], &[1, 2], &[0, 2]],
    ))
    .unwrap();
    assert_eq!(ring.grading.rank(), 1);
    assert_eq!(ring.grading.torsion_moduli(), vec![int(2)]);
    assert_eq!(ring.monomials_of_degree(&ring.beta0()).unwrap().len(), 5);
    // D_2 - D_3 is the 2-torsion class: twice it is div(chi^(0,1)).
    let d2 = ring.divisor_class(&ivec(&[0, 1, 0]));
    let d3 = ring.divisor_class(&ivec(&[0, 0, 1]));
    let diff = ring.grading.sub(&d2, &d3);
    assert!(!diff.is_zero());
    assert!(ring.grading.scale(2, &diff).is_zero());
}

#[test]
fn fermat_jacobian_generators() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let zero_cone = ctr.zero_cone();
    let gens = ring.jacobian_generators(&f, &ctr, zero_cone).unwrap();
    assert_eq!(gens.len(), 4, "no extra variables over the zero cone");
    for (i, g) in gens.iter().enumerate() {
        let mut e = ivec(&[0, 0, 0, 0]);
        e[i] = int(4);
        assert_eq!(g.terms, vec![(e, rat(4))], "x_i d/dx_i of the Fermat quartic");
    }
}

#[test]
fn fermat_ideal_slice_dimension_31() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let gens = ring.jacobian_generators(&f, &ctr, ctr.zero_cone()).unwrap();
    let slice = ring.ideal_slice(&gens, &f.degree).unwrap();
    assert_eq!(slice.total_dim(), 35, "35 quartic monomials in 4 variables");
    assert_eq!(slice.subspace_rank(), 4);
    assert_eq!(slice.quotient_dim(), 31);
}

#[test]
fn fermat_colon_slice_dimension_19() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let gens = ring.jacobian_generators(&f, &ctr, ctr.zero_cone()).unwrap();
    let h = ring.outside_product(&ctr, ctr.zero_cone());
    assert_eq!(h.terms, vec![(ivec(&[1, 1, 1, 1]), rat(1))]);
    let slice = ring.colon_slice(&gens, &h, &f.degree).unwrap();
    assert_eq!(slice.quotient_dim(), 19);
    // Oracle: quartic monomials with all exponents at most 2.
    let count = slice
        .monomials
        .iter()
        .filter(|m| m.iter().all(|e| *e <= int(2)))
        .count();
    assert_eq!(count, 19);
    for &i in &slice.quotient {
        assert!(
            slice.monomials[i].iter().all(|e| *e <= int(2)),
            "quotient basis avoids cube-or-higher powers"
        );
    }
}

#[test]
fn colon_by_one_equals_ideal_slice() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let gens = ring.jacobian_generators(&f, &ctr, ctr.zero_cone()).unwrap();
    let one = CoxPolynomial::monomial(&ring.grading, &ivec(&[0, 0, 0, 0]), Rat::one());
    let a = ring.colon_slice(&gens, &one, &f.degree).unwrap();
    let b = ring.ideal_slice(&gens, &f.degree).unwrap();
    assert_eq!(a.quotient, b.quotient);
}

#[test]
fn irrelevant_ideal_swallows_positive_degrees() {
    let ring = p2_ring();
    let vars: Vec<CoxPolynomial> = (0..3)
        .map(|k| CoxPolynomial::monomial(&ring.grading, &indicator(3, &[k]), Rat::one()))
        .collect();
    let slice = ring.ideal_slice(&vars, &ring.beta0()).unwrap();
    assert_eq!(slice.quotient_dim(), 0);
}

#[test]
fn empty_generator_list_keeps_all_monomials() {
    let ring = p2_ring();
    let slice = ring.ideal_slice(&[], &ring.beta0()).unwrap();
    assert_eq!(slice.quotient_dim(), 10);
    assert_eq!(slice.subspace_rank(), 0);
}

#[test]
fn fermat_r1_slices() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let zero = ctr.zero_cone();
    assert_eq!(ring.r1_sigma_slice(&f, &ctr, zero, 2).unwrap().quotient_dim(), 19);
    assert_eq!(
        ring.r1_sigma_slice(&f, &ctr, zero, 1).unwrap().quotient_dim(),
        1,
        "the class of 1 survives in degree beta - beta_0 = 0"
    );
    assert_eq!(
        ring.r1_sigma_slice(&f, &ctr, zero, 0).unwrap().quotient_dim(),
        0,
        "anti-effective degree has no monomials"
    );
}

#[test]
fn fermat_certificate_passes() {
    let ring = p3_ring();
    let (f, ctr) = fermat_quartic(&ring);
    let top = ring.r0_sigma_top_slice(&f, &ctr, ctr.zero_cone()).unwrap();
    assert_eq!(top.quotient_dim(), 1, "R_0(f) top slice is 1-dimensional");
    assert!(ring.nondegeneracy_certificate(&f, &ctr).unwrap());
}

#[test]
fn degenerate_polynomial_fails_certificate() {
    let ring = p3_ring();
    let (_, ctr) = fermat_quartic(&ring);
    let mut e = ivec(&[4, 0, 0, 0]);
    e[0] = int(4);
    let f = CoxPolynomial::monomial(&ring.grading, &e, Rat::one());
    assert!(!ring.nondegeneracy_certificate(&f, &ctr).unwrap());
}

#[test]
fn f2_vertex_cone_generators_include_boundary_rays() {
    let ring = f2_ring();
    let beta = ring.beta0();
    let f = ring.sample_on_monomials(&ring.monomials_of_degree(&beta).unwrap(), 7);
    let ctr = semiample_contraction(&ring.fan, &ivec(&[1, 1, 1, 1])).unwrap();
    // The 2-dimensional target cone spanned by the images of e1 and e3
    // contains the images of e1, e3 (boundary) and e4 (interior).
    let sigma = ctr.smallest[&vec![3usize]];
    let gens = ring.jacobian_generators(&f, &ctr, sigma).unwrap();
    assert_eq!(gens.len(), 4 + 3);
    let extra: Vec<Vec<Int>> =
        gens[4..].iter().map(|g| g.terms[0].0.clone()).collect();
    assert_eq!(
        extra,
        vec![indicator(4, &[0]), indicator(4, &[2]), indicator(4, &[3])],
        "variables for every ray mapping into the closed cone"
    );
    assert_eq!(
        ring.outside_product(&ctr, sigma).terms[0].0,
        indicator(4, &[1]),
        "only x2 stays outside"
    );
}

#[test]
fn f2_generic_anticanonical_passes_certificate() {
    let ring = f2_ring();
    let f = ring.generic_polynomial(&ivec(&[1, 1, 1, 1]), 1).unwrap();
    assert_eq!(f.terms.len(), 9, "all anticanonical monomials are present");
    let ctr = semiample_contraction(&ring.fan, &ivec(&[1, 1, 1, 1])).unwrap();
    assert!(ring.nondegeneracy_certificate(&f, &ctr).unwrap());
    // R_1(f)_0 over the zero cone is 1-dimensional: the genus of the
    // elliptic curve comes from the class of 1.
    assert_eq!(ring.r1_sigma_slice(&f, &ctr, ctr.zero_cone(), 1).unwrap().quotient_dim(), 1);
}

#[test]
fn generic_polynomial_is_deterministic() {
    let ring = p2_ring();
    let a = ivec(&[1, 1, 1]);
    let f = ring.generic_polynomial(&a, 42).unwrap();
    let g = ring.generic_polynomial(&a, 42).unwrap();
    assert_eq!(f, g);
    let h = ring.generic_polynomial(&a, 43).unwrap();
    assert_ne!(f, h, "different seeds give different coefficients");
}

#[test]
fn generic_polynomial_of_degree_zero_is_one() {
    let ring = p2_ring();
    let f = ring.generic_polynomial(&ivec(&[0, 0, 0]), 5).unwrap();
    assert_eq!(f.terms, vec![(ivec(&[0, 0, 0]), rat(1))]);
}

#[test]
fn slice_dimensions_survive_ray_relabeling() {
    // The same P^3, with rays listed in a different order.
    let ring = CoxRing::new(fan(
        3,
        &[&[-1, -1, -1], &[0, 0, 1], &[1, 0, 0], &[0, 1, 0]],
        &[&[1, 2, 3], &[0, 1, 2], &[0, 1, 3], &[0, 2, 3]],
    ))
    .unwrap();
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
    let gens = ring.jacobian_generators(&f, &ctr, ctr.zero_cone()).unwrap();
    assert_eq!(ring.ideal_slice(&gens, &f.degree).unwrap().quotient_dim(), 31);
    let h = ring.outside_product(&ctr, ctr.zero_cone());
    assert_eq!(ring.colon_slice(&gens, &h, &f.degree).unwrap().quotient_dim(), 19);
}

#[test]
fn inhomogeneous_terms_are_rejected() {
    let ring = p2_ring();
    let err = CoxPolynomial::new(
        &ring.grading,
        vec![(ivec(&[1, 0, 0]), rat(1)), (ivec(&[2, 0, 0]), rat(1))],
        ring.divisor_class(&ivec(&[1, 0, 0])),
    )
    .unwrap_err();
    assert!(matches!(err, Error::InvalidInput(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // dim S_gamma equals the lattice-point count of the divisor polytope for
    // any representative; shifting the representative by a character keeps
    // the class and the monomial list.
    #[test]
    fn monomial_count_is_class_intrinsic(a0 in 0i64..4, a1 in 0i64..4, a2 in 0i64..4, mx in -2i64..=2, my in -2i64..=2) {
        let ring = p2_ring();
        let rep = ivec(&[a0, a1, a2]);
        let gamma = ring.divisor_class(&rep);
        // Shift by div(chi^m): a_i + <m, e_i>.
        let shifted = ivec(&[a0 + mx, a1 + my, a2 - mx - my]);
        let gamma2 = ring.divisor_class(&shifted);
        prop_assert_eq!(&gamma, &gamma2);
        prop_assert_eq!(
            ring.monomials_of_degree(&gamma).unwrap(),
            ring.monomials_of_degree(&gamma2).unwrap()
        );
    }

    // Slice rank + quotient dimension always adds up to the monomial count.
    #[test]
    fn slice_rank_nullity(seed in 0u64..1000) {
        let ring = f2_ring();
        let beta = ring.beta0();
        let f = ring.sample_on_monomials(&ring.monomials_of_degree(&beta).unwrap(), seed);
        let ctr = semiample_contraction(&ring.fan, &ivec(&[1, 1, 1, 1])).unwrap();
        for sigma in 0..ctr.target_faces.len() {
            let gens = ring.jacobian_generators(&f, &ctr, sigma).unwrap();
            let slice = ring.ideal_slice(&gens, &beta).unwrap();
            prop_assert_eq!(slice.subspace_rank() + slice.quotient_dim(), slice.total_dim());
        }
    }
}
