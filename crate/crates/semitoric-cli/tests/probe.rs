// Temporary timing probes; not part of the suite.

use semitoric::cohomology::hodge_diamond;
use semitoric::cox::{CoxPolynomial, CoxRing};
use semitoric::mirror::{batyrev_hodge, build_mirror_pair};
use semitoric::polytope::{
    dot_ii, regular_subdivision, semiample_contraction, Fan, LatticePolytope,
    SemiampleContraction,
};
use num_traits::Zero;
use semitoric::{int, rat, Int, Rat};
use std::time::Instant;

fn ivec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

fn poly_from(rank: usize, pts: &[&[i64]]) -> LatticePolytope {
    let verts: Vec<Vec<Rat>> =
        pts.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect();
    LatticePolytope::from_vertices(rank, &verts).expect("fixture polytope")
}

fn anticanonical_poly(ring: &CoxRing, pts: &[(&[i64], i64)]) -> CoxPolynomial {
    let rays = ring.fan.rays();
    let terms: Vec<(Vec<Int>, Rat)> = pts
        .iter()
        .map(|(m, c)| {
            let mi = ivec(m);
            let e: Vec<Int> = rays.iter().map(|r| dot_ii(&mi, r) + int(1)).collect();
            (e, rat(*c))
        })
        .collect();
    CoxPolynomial::new(&ring.grading, terms, ring.beta0()).expect("anticanonical terms")
}

fn p4_ring() -> CoxRing {
    let fan = Fan::new(
        4,
        vec![
            ivec(&[1, 0, 0, 0]),
            ivec(&[0, 1, 0, 0]),
            ivec(&[0, 0, 1, 0]),
            ivec(&[0, 0, 0, 1]),
            ivec(&[-1, -1, -1, -1]),
        ],
        vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4], vec![0, 1, 3, 4], vec![0, 2, 3, 4], vec![1, 2, 3, 4]],
    )
    .unwrap();
    CoxRing::new(fan).unwrap()
}

fn quintic(ring: &CoxRing) -> CoxPolynomial {
    let mut terms: Vec<(Vec<Int>, Rat)> = (0..5)
        .map(|i| {
            let mut e = ivec(&[0; 5]);
            e[i] = int(5);
            (e, rat(1))
        })
        .collect();
    terms.push((ivec(&[1, 1, 1, 1, 1]), rat(1)));
    CoxPolynomial::new(&ring.grading, terms, ring.beta0()).unwrap()
}

fn x9_dual() -> LatticePolytope {
    poly_from(
        4,
        &[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[-1, -1, -3, -3],
        ],
    )
}

fn x9_delta() -> LatticePolytope {
    poly_from(
        4,
        &[
            &[-1, -1, -1, -1],
            &[8, -1, -1, -1],
            &[-1, 8, -1, -1],
            &[-1, -1, 2, -1],
            &[-1, -1, -1, 2],
        ],
    )
}

fn x9_side() -> (CoxRing, SemiampleContraction) {
    let dual = x9_dual();
    let mut pts: Vec<Vec<Int>> = dual
        .lattice_points()
        .into_iter()
        .filter(|m| {
            let mr: Vec<Rat> = m.iter().map(|c| Rat::from_integer(c.clone())).collect();
            !dual.contains_in_interior(&mr)
        })
        .collect();
    pts.sort();
    let fan = regular_subdivision(&dual, &pts).unwrap();
    let ones = vec![Int::from(1); fan.n_rays()];
    let ctr = semiample_contraction(&fan, &ones).unwrap();
    let ring = CoxRing::new(fan).unwrap();
    (ring, ctr)
}

fn x9_poly(ring: &CoxRing) -> CoxPolynomial {
    anticanonical_poly(
        ring,
        &[
            (&[-1, -1, -1, -1], 1),
            (&[8, -1, -1, -1], 1),
            (&[-1, 8, -1, -1], 1),
            (&[-1, -1, 2, -1], 1),
            (&[-1, -1, -1, 2], -6),
            (&[-1, -1, 0, 1], 11),
            (&[-1, -1, 1, 0], -6),
            (&[0, 0, 0, 0], 1),
        ],
    )
}

#[test]
fn probe_quintic_diamond() {
    let ring = p4_ring();
    let f = quintic(&ring);
    let ctr = semiample_contraction(&ring.fan, &ivec(&[1, 1, 1, 1, 1])).unwrap();
    let t0 = Instant::now();
    let hd = hodge_diamond(&ring, &f, &ctr).unwrap();
    println!("quintic diamond in {:?}", t0.elapsed());
    for p in 0..=3 {
        for q in 0..=3 {
            print!("{} ", hd.hodge_number(p, q));
        }
        println!();
    }
}

#[test]
fn probe_x9_certificate() {
    let t0 = Instant::now();
    let (ring, ctr) = x9_side();
    println!("x9 side built in {:?}, rays:", t0.elapsed());
    for r in ring.fan.rays() {
        println!("  {:?}", r);
    }
    println!("target cones by dim:");
    for dim in 0..=4 {
        let cones = ctr.target_cones_of_dim(dim);
        for &s in &cones {
            println!(
                "  dim {} cone {} vol {} interior {:?}",
                dim,
                s,
                ctr.gamma_volume(s),
                ctr.rays_into_interior(s)
            );
        }
    }
    let f = x9_poly(&ring);
    let t1 = Instant::now();
    let ok = ring.nondegeneracy_certificate(&f, &ctr).unwrap();
    println!("x9 certificate {} in {:?}", ok, t1.elapsed());
    let bat = batyrev_hodge(&x9_dual()).unwrap();
    println!("x9 batyrev {:?}", bat);
    assert!(ok, "x9 sparse polynomial must be nondegenerate");
}

#[test]
fn probe_x9_diamond() {
    let (ring, ctr) = x9_side();
    let f = x9_poly(&ring);
    let t0 = Instant::now();
    let hd = hodge_diamond(&ring, &f, &ctr).unwrap();
    println!("x9 diamond in {:?}", t0.elapsed());
    for p in 0..=3 {
        for q in 0..=3 {
            print!("{} ", hd.hodge_number(p, q));
        }
        println!();
    }
}

#[test]
fn probe_pair9_phases() {
    use semitoric::cohomology::{ToricCohomology, TPoly};
    let delta = x9_delta();
    let t = Instant::now();
    let mut pts: Vec<Vec<Int>> = delta
        .lattice_points()
        .into_iter()
        .filter(|m| {
            let mr: Vec<Rat> = m.iter().map(|c| Rat::from_integer(c.clone())).collect();
            !delta.contains_in_interior(&mr)
        })
        .collect();
    pts.sort();
    println!("boundary points {} in {:?}", pts.len(), t.elapsed());
    let t = Instant::now();
    let fan = regular_subdivision(&delta, &pts).unwrap();
    println!(
        "subdivision: {} rays, {} max cones in {:?}",
        fan.n_rays(),
        fan.max_cones().len(),
        t.elapsed()
    );
    let ones = vec![Int::from(1); fan.n_rays()];
    let t = Instant::now();
    let ctr = semiample_contraction(&fan, &ones).unwrap();
    println!("contraction: {} target cones in {:?}", ctr.target_faces.len(), t.elapsed());
    let t = Instant::now();
    let ring = CoxRing::new(fan).unwrap();
    println!("ring in {:?}", t.elapsed());
    let t = Instant::now();
    let toric = ToricCohomology::new(&ring.fan).unwrap();
    let x = TPoly::from_divisor(&ones);
    println!("toric cohomology in {:?}, top int {:?}", t.elapsed(), toric.integrate(&x.pow(4)));
    let dual = x9_dual();
    let faces = dual.faces();
    let facet_interior: std::collections::BTreeSet<Vec<Int>> = faces
        .iter()
        .filter(|fc| fc.dim + 1 == 4)
        .flat_map(|fc| dual.face_interior_lattice_points(fc))
        .collect();
    let support: Vec<Vec<Int>> = dual
        .lattice_points()
        .into_iter()
        .filter(|m| !facet_interior.contains(m))
        .collect();
    println!("mirror f support {} points", support.len());
    let rays = ring.fan.rays().to_vec();
    let monomials: Vec<Vec<Int>> = support
        .iter()
        .map(|m| rays.iter().map(|r| dot_ii(m, r) + int(1)).collect())
        .collect();
    let f = ring.sample_on_monomials(&monomials, 1);
    let t = Instant::now();
    let ok = ring.nondegeneracy_certificate(&f, &ctr).unwrap();
    println!("mirror certificate {} in {:?}", ok, t.elapsed());
}

#[test]
fn probe_quantum_integrals() {
    use semitoric::cohomology::{ToricCohomology, TPoly};
    let (ring, _ctr) = x9_side();
    let toric = ToricCohomology::new(&ring.fan).unwrap();
    let ones = vec![Int::from(1); ring.fan.n_rays()];
    let x = TPoly::from_divisor(&ones);
    let w = 1usize;
    let dw = TPoly::monomial(&[w], Rat::from_integer(int(1)));
    println!("int_X Dw^3 = {:?}", toric.integrate(&x.mul(&dw.pow(3))));
    for r in 0..ring.fan.n_rays() {
        let dr = TPoly::monomial(&[r], Rat::from_integer(int(1)));
        println!("int_X D{r} Dw^2 = {:?}", toric.integrate(&x.mul(&dr).mul(&dw.pow(2))));
    }
    for r1 in 0..ring.fan.n_rays() {
        for r2 in r1..ring.fan.n_rays() {
            let p = TPoly::monomial(&[r1], Rat::from_integer(int(1)))
                .mul(&TPoly::monomial(&[r2], Rat::from_integer(int(1))));
            let v = toric.integrate(&x.mul(&p).mul(&dw)).unwrap();
            if !v.is_zero() {
                println!("int_X D{r1} D{r2} Dw = {}", v);
            }
        }
    }
}

#[test]
fn probe_pair9_build() {
    let t0 = Instant::now();
    let pair = build_mirror_pair(&x9_delta(), 1).unwrap();
    println!(
        "pair9 built in {:?}: {} ambient rays, {} mirror rays, seed {}",
        t0.elapsed(),
        pair.ring.fan.n_rays(),
        pair.mirror_ring.fan.n_rays(),
        pair.seed
    );
}
