//! The Batyrev mirror construction for reflexive polytopes: the lattice-point
//! Hodge-number formula, mirror pairs with nondegenerate simplified
//! polynomials, the chiral subring with its root-vector products, the
//! monomial-divisor map, and its generalization to the divisors coming from
//! contracted rays.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cohomology::{
    component_classes, ComponentClasses, HodgeAlgebra, HodgeClass, RootMode, TPoly,
};
use crate::cox::{indicator, ChowClass, CoxPolynomial, CoxRing, GradedSlice};
use crate::error::Error;
use crate::linalg::{primitive_vector, solve_linear, Echelon, RatMatrix, SparseRow};
use crate::polytope::{
    dot_ii, face_data, regular_subdivision, semiample_contraction, LatticePolytope,
    SemiampleContraction,
};
use crate::{Int, Rat};

// ---------------------------------------------------------------------------
// The lattice-point Hodge-number formula
// ---------------------------------------------------------------------------

/// Evaluates `l(P) - d - 1 - sum_{facets} l*(theta)
/// + sum_{codim-2 faces} l*(theta) l*(theta*)` for a reflexive `P`, returning
/// the value together with the codimension-two correction sum (which is the
/// same number for `P` and its polar dual).
fn lattice_point_formula(p: &LatticePolytope) -> Result<(usize, usize), Error> {
    let d = p.rank;
    let data = face_data(p)?;
    let dual = p.polar_dual()?;
    let dual_data = face_data(&dual)?;
    let mut h: i64 = p.lattice_points().len() as i64 - d as i64 - 1;
    let mut correction: usize = 0;
    for fd in &data {
        if fd.face.dim + 1 == d {
            h -= fd.interior_lattice_points as i64;
        } else if d >= 2 && fd.face.dim + 2 == d {
            let mut ids = fd
                .dual_face_vertex_ids
                .clone()
                .ok_or(Error::NotReflexive)?;
            ids.sort_unstable();
            let dual_face = dual_data
                .iter()
                .find(|g| {
                    let mut v = g.face.vertex_ids.clone();
                    v.sort_unstable();
                    v == ids
                })
                .ok_or(Error::InconsistentSystem("dual face missing from the polar dual"))?;
            let term = fd.interior_lattice_points * dual_face.interior_lattice_points;
            correction += term;
            h += term as i64;
        }
    }
    if h < 0 {
        return Err(Error::InconsistentSystem("lattice-point formula went negative"));
    }
    Ok((h as usize, correction))
}

/// The two hypersurface Hodge numbers `(h^{1,1}, h^{d-2,1})` of a minimal
/// anticanonical Calabi-Yau from lattice-point counts alone: the first from
/// the given polytope, the second from its polar dual. In dimension 3 both
/// formulas target the single K3 (1,1) cell and share their codimension-two
/// correction term, so the combined count drops one copy of it and gives 20
/// for both components.
pub fn batyrev_hodge(delta_dual: &LatticePolytope) -> Result<(usize, usize), Error> {
    if !delta_dual.is_reflexive()? {
        return Err(Error::NotReflexive);
    }
    let delta = delta_dual.polar_dual()?;
    let (h11, corr) = lattice_point_formula(delta_dual)?;
    let (h21, _) = lattice_point_formula(&delta)?;
    if delta_dual.rank == 3 {
        let total = h11 + h21 - corr;
        Ok((total, total))
    } else {
        Ok((h11, h21))
    }
}

// ---------------------------------------------------------------------------
// Mirror pairs
// ---------------------------------------------------------------------------

/// A reflexive mirror pair: the polytopes, the two simplicial ambient fans
/// (every boundary lattice point is a ray), the anticanonical contractions on
/// both sides, and a nondegenerate polynomial cutting the mirror hypersurface.
#[derive(Debug, Clone)]
pub struct MirrorPair {
    pub delta: LatticePolytope,
    pub delta_dual: LatticePolytope,
    /// Cox ring of the ambient side, whose fan refines the face fan of
    /// `delta_dual` with rays all of its boundary lattice points.
    pub ring: CoxRing,
    pub ctr: SemiampleContraction,
    /// Cox ring of the mirror side, fan built from `delta` the same way.
    pub mirror_ring: CoxRing,
    pub mirror_ctr: SemiampleContraction,
    /// Nondegenerate anticanonical polynomial on the mirror side.
    pub mirror_f: CoxPolynomial,
    /// Whether `mirror_f` is supported away from facet-interior points.
    pub simplified: bool,
    /// The seed that produced the certified polynomial.
    pub seed: u64,
}

fn boundary_lattice_points(p: &LatticePolytope) -> Vec<Vec<Int>> {
    p.lattice_points()
        .into_iter()
        .filter(|m| {
            let mr: Vec<Rat> = m.iter().map(|c| Rat::from_integer(c.clone())).collect();
            !p.contains_in_interior(&mr)
        })
        .collect()
}

/// Ambient data of one side of a pair: the subdivided fan over the boundary
/// lattice points and its anticanonical contraction.
fn anticanonical_side(poly: &LatticePolytope) -> Result<(CoxRing, SemiampleContraction), Error> {
    let fan = regular_subdivision(poly, &boundary_lattice_points(poly))?;
    let ones = vec![Int::one(); fan.n_rays()];
    let ctr = semiample_contraction(&fan, &ones)?;
    let ring = CoxRing::new(fan)?;
    Ok((ring, ctr))
}

/// The anticanonical monomial of a lattice point of the dual polytope:
/// exponent `<m, rho> + 1` on each ray `rho` of the fan.
fn point_monomial(rays: &[Vec<Int>], m: &[Int]) -> Vec<Int> {
    rays.iter().map(|r| dot_ii(m, r) + Int::one()).collect()
}

/// Builds a mirror pair with a simplified mirror polynomial: the sample is
/// supported on the lattice points of the dual polytope that are not interior
/// to a facet. Retries over consecutive seeds until the nondegeneracy
/// certificate passes.
pub fn build_mirror_pair(delta: &LatticePolytope, seed: u64) -> Result<MirrorPair, Error> {
    build_mirror_pair_with_support(delta, seed, true)
}

/// As `build_mirror_pair`, but `simplified = false` samples on every lattice
/// point of the dual polytope. Full support disables the monomial-divisor
/// map.
pub fn build_mirror_pair_with_support(
    delta: &LatticePolytope,
    seed: u64,
    simplified: bool,
) -> Result<MirrorPair, Error> {
    if !delta.is_reflexive()? {
        return Err(Error::NotReflexive);
    }
    let delta_dual = delta.polar_dual()?;
    let (ring, ctr) = anticanonical_side(&delta_dual)?;
    let (mirror_ring, mirror_ctr) = anticanonical_side(delta)?;
    let facet_interior: BTreeSet<Vec<Int>> = if simplified {
        let faces = delta_dual.faces();
        faces
            .iter()
            .filter(|f| f.dim + 1 == delta_dual.rank)
            .flat_map(|f| delta_dual.face_interior_lattice_points(f))
            .collect()
    } else {
        BTreeSet::new()
    };
    let support: Vec<Vec<Int>> = delta_dual
        .lattice_points()
        .into_iter()
        .filter(|m| !facet_interior.contains(m))
        .collect();
    let monomials: Vec<Vec<Int>> = support
        .iter()
        .map(|m| point_monomial(mirror_ring.fan.rays(), m))
        .collect();
    const TRIES: u32 = 32;
    for t in 0..TRIES as u64 {
        let f = mirror_ring.sample_on_monomials(&monomials, seed + t);
        if mirror_ring.nondegeneracy_certificate(&f, &mirror_ctr)? {
            return Ok(MirrorPair {
                delta: delta.clone(),
                delta_dual,
                ring,
                ctr,
                mirror_ring,
                mirror_ctr,
                mirror_f: f,
                simplified,
                seed: seed + t,
            });
        }
    }
    Err(Error::RetryBudgetExhausted { tries: TRIES })
}

// ---------------------------------------------------------------------------
// Root vectors
// ---------------------------------------------------------------------------

/// The root vector `alpha_k` in `Z^{n+1}`: `-1` at position `k` and `+1` at
/// position `k + 1`, positions counted from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootVector {
    pub sigma: usize,
    pub k: usize,
    pub n: usize,
}

impl RootVector {
    pub fn new(sigma: usize, k: usize, n: usize) -> Result<Self, Error> {
        if k == 0 || k > n {
            return Err(Error::OutOfRange("root vector index must lie in 1..=n"));
        }
        Ok(RootVector { sigma, k, n })
    }

    pub fn entries(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.n + 1];
        v[self.k - 1] = -1;
        v[self.k] = 1;
        v
    }
}

/// The coordinatewise multi-product of root vectors summed over positions:
/// `v_1 ... v_L = sum_j prod_l v_{l,j}`. The empty product is `n + 1`.
pub fn alpha_product(ks: &[usize], n: usize) -> Int {
    let mut total = Int::zero();
    for j in 1..=n + 1 {
        let mut prod = Int::one();
        for &k in ks {
            let entry: i64 = if j == k {
                -1
            } else if j == k + 1 {
                1
            } else {
                0
            };
            prod *= Int::from(entry);
            if prod.is_zero() {
                break;
            }
        }
        total += prod;
    }
    total
}

/// `alpha_product` over `RootVector`s, checking they share one cone and rank.
pub fn root_vector_product(vs: &[RootVector]) -> Result<Int, Error> {
    if vs.is_empty() {
        return Err(Error::InvalidInput("empty root vector product".into()));
    }
    let (sigma, n) = (vs[0].sigma, vs[0].n);
    for v in vs {
        if v.sigma != sigma || v.n != n {
            return Err(Error::InvalidInput(
                "root vectors live over distinct cones".into(),
            ));
        }
        if v.k == 0 || v.k > n {
            return Err(Error::OutOfRange("root vector index must lie in 1..=n"));
        }
    }
    let ks: Vec<usize> = vs.iter().map(|v| v.k).collect();
    Ok(alpha_product(&ks, n))
}

// ---------------------------------------------------------------------------
// The chiral subring
// ---------------------------------------------------------------------------

/// An element of the chiral subring: a polynomial part in some `R_1(f)`
/// graded piece, or a sigma part attached to a 2-dimensional target cone and
/// an interior-ray position `k` (1-based, in the order of the rays along the
/// cone).
#[derive(Debug, Clone)]
pub enum ChiralElement {
    Polynomial(CoxPolynomial),
    Sigma { sigma: usize, k: usize, poly: CoxPolynomial },
}

impl ChiralElement {
    pub fn is_zero(&self) -> bool {
        match self {
            ChiralElement::Polynomial(p) => p.is_zero(),
            ChiralElement::Sigma { poly, .. } => poly.is_zero(),
        }
    }
}

/// A chiral product value: the resulting element together with the exponent
/// of the square root of minus one contributed by the `H` correction factors
/// (the rational coefficients never carry it).
#[derive(Debug, Clone)]
pub struct ChiralValue {
    pub element: ChiralElement,
    pub i_power: u32,
}

/// The rays of the fan mapping into a 2-dimensional target cone, ordered
/// along the cone from the lexicographically smaller edge generator to the
/// larger one. The first and last entries are the edge rays; positions
/// `1..=n` in between are the interior rays.
pub fn ordered_sigma_rays(
    ring: &CoxRing,
    ctr: &SemiampleContraction,
    sigma: usize,
) -> Result<Vec<usize>, Error> {
    if sigma >= ctr.target_faces.len() {
        return Err(Error::UnknownCone);
    }
    if ctr.target_cone_dim(sigma) != 2 {
        return Err(Error::InvalidInput("sigma must be a 2-dimensional target cone".into()));
    }
    let gens = ctr.target_cone_ray_generators(sigma);
    let (va, vb) = if gens[0] <= gens[1] { (&gens[0], &gens[1]) } else { (&gens[1], &gens[0]) };
    let kappa = ctr.kappa;
    let mut am = RatMatrix::zero(kappa, 2);
    for r in 0..kappa {
        *am.at_mut(r, 0) = Rat::from_integer(va[r].clone());
        *am.at_mut(r, 1) = Rat::from_integer(vb[r].clone());
    }
    let mut keyed: Vec<(Rat, usize)> = Vec::new();
    for k in ctr.rays_into(sigma) {
        let w: Vec<Rat> =
            ctr.ray_images[k].iter().map(|x| Rat::from_integer(x.clone())).collect();
        if w.iter().all(Zero::is_zero) {
            return Err(Error::Unsupported(
                "a contracted ray lies inside a 2-dimensional target cone",
            ));
        }
        let st = solve_linear(&am, &w)?
            .ok_or(Error::InconsistentSystem("ray image outside its cone span"))?;
        keyed.push((&st[1] / (&st[0] + &st[1]), k));
    }
    keyed.sort();
    for pair in keyed.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::Unsupported("coincident ray images in the target cone"));
        }
    }
    let _ = ring;
    Ok(keyed.into_iter().map(|(_, k)| k).collect())
}

/// Rebuilds the canonical representative of `p` modulo the slice subspace.
fn representative(
    ring: &CoxRing,
    slice: &GradedSlice,
    p: &CoxPolynomial,
) -> Result<CoxPolynomial, Error> {
    let row = slice.reduce(p)?;
    let terms: Vec<(Vec<Int>, Rat)> =
        row.into_iter().map(|(c, v)| (slice.monomials[c].clone(), v)).collect();
    CoxPolynomial::new(&ring.grading, terms, p.degree.clone())
}

/// Scans for the index `q` with `degree = q beta - beta_0 + beta_1^sigma`.
fn find_q(
    ring: &CoxRing,
    beta: &ChowClass,
    ctr: &SemiampleContraction,
    sigma: usize,
    degree: &ChowClass,
) -> Option<i64> {
    let bound = 3 * ring.fan.rank() as i64 + 3;
    (0..=bound).find(|&q| ring.r_degree(beta, ctr, sigma, q) == *degree)
}

/// Product in the chiral subring. Polynomial parts multiply in `R_1(f)`;
/// one sigma part stays a sigma part; sigma parts over distinct cones give
/// zero; two or three sigma parts over one cone reduce to a polynomial part
/// through the correction polynomials, the root-vector scalar, and the
/// inverse of the multiplication-by-all-variables map. More than three sigma
/// parts are outside the supported range and rejected.
///
/// Requires the anticanonical degree and a contraction of maximal Iitaka
/// dimension; for two or three sigma parts the factors must have the shape of
/// the (d-1)-point function: `s` polynomial parts of degree `beta` and `t`
/// sigma parts in the `q = 1` slice with `s + t = d - 1`.
pub fn chiral_product(
    ring: &CoxRing,
    f: &CoxPolynomial,
    ctr: &SemiampleContraction,
    elems: &[ChiralElement],
) -> Result<ChiralValue, Error> {
    if f.degree != ring.beta0() {
        return Err(Error::InvalidInput(
            "chiral products are defined in the anticanonical case".into(),
        ));
    }
    if ctr.kappa != ring.fan.rank() {
        return Err(Error::Unsupported(
            "chiral products need a contraction of maximal Iitaka dimension",
        ));
    }
    if elems.is_empty() {
        return Err(Error::InvalidInput("empty chiral product".into()));
    }
    let grading = &ring.grading;
    let d = ring.fan.rank() as i64;
    let beta = &f.degree;
    let mut polys: Vec<&CoxPolynomial> = Vec::new();
    let mut sigma_parts: Vec<(usize, usize, &CoxPolynomial)> = Vec::new();
    for e in elems {
        match e {
            ChiralElement::Polynomial(p) => polys.push(p),
            ChiralElement::Sigma { sigma, k, poly } => sigma_parts.push((*sigma, *k, poly)),
        }
    }
    let t = sigma_parts.len();
    // The zero element is reported in the top polynomial slot R_1(f)_{(d-1)beta}.
    let zero_value = |i_power: u32| -> Result<ChiralValue, Error> {
        let deg = grading.scale(d - 1, beta);
        let z = CoxPolynomial::new(grading, Vec::new(), deg)?;
        Ok(ChiralValue { element: ChiralElement::Polynomial(z), i_power })
    };
    if t >= 2 && sigma_parts.iter().any(|(s, _, _)| *s != sigma_parts[0].0) {
        return zero_value(0);
    }
    if t > 3 {
        return Err(Error::Unsupported(
            "chiral products with more than three sigma parts",
        ));
    }
    match t {
        0 => {
            let mut prod = polys[0].clone();
            for p in &polys[1..] {
                prod = prod.mul(p, grading);
            }
            let zero = ctr.zero_cone();
            let q = find_q(ring, beta, ctr, zero, &prod.degree).ok_or_else(|| {
                Error::InvalidInput("product degree is not a multiple of beta".into())
            })?;
            let slice = ring.r1_sigma_slice(f, ctr, zero, q)?;
            let rep = representative(ring, &slice, &prod)?;
            Ok(ChiralValue { element: ChiralElement::Polynomial(rep), i_power: 0 })
        }
        1 => {
            let (sigma, k, b) = sigma_parts[0];
            let n = ctr.rays_into_interior(sigma).len();
            if k == 0 || k > n {
                return Err(Error::OutOfRange("sigma part index must lie in 1..=n"));
            }
            let mut prod = b.clone();
            for p in &polys {
                prod = prod.mul(p, grading);
            }
            let q = find_q(ring, beta, ctr, sigma, &prod.degree).ok_or_else(|| {
                Error::InvalidInput("product degree misses the sigma grading".into())
            })?;
            let slice = ring.r1_sigma_slice(f, ctr, sigma, q)?;
            let rep = representative(ring, &slice, &prod)?;
            Ok(ChiralValue { element: ChiralElement::Sigma { sigma, k, poly: rep }, i_power: 0 })
        }
        _ => {
            let sigma = sigma_parts[0].0;
            let n = ctr.rays_into_interior(sigma).len();
            let s = polys.len();
            if (s + t) as i64 != d - 1 {
                return Err(Error::InvalidInput(
                    "mixed chiral products need s + t = d - 1 factors".into(),
                ));
            }
            for p in &polys {
                if p.degree != *beta {
                    return Err(Error::InvalidInput(
                        "polynomial factors must have degree beta".into(),
                    ));
                }
            }
            let b1_degree = ring.r_degree(beta, ctr, sigma, 1);
            let mut ks = Vec::with_capacity(t);
            for (_, k, b) in &sigma_parts {
                if *k == 0 || *k > n {
                    return Err(Error::OutOfRange("sigma part index must lie in 1..=n"));
                }
                if b.degree != b1_degree {
                    return Err(Error::InvalidInput(
                        "sigma factors must lie in the q = 1 slice".into(),
                    ));
                }
                ks.push(*k);
            }
            let i_power = (t - 2) as u32;
            let scalar = alpha_product(&ks, n);
            if scalar.is_zero() {
                return zero_value(i_power);
            }
            // Also verifies the smoothness assumption on the 2-cones inside
            // sigma.
            let (g_corr, h_corr) = crate::residue::correction_polynomials(ring, f, ctr, sigma)?;
            let mut prod = g_corr;
            for _ in 0..t - 2 {
                prod = prod.mul(&h_corr, grading);
            }
            for p in &polys {
                prod = prod.mul(p, grading);
            }
            for (_, _, b) in &sigma_parts {
                prod = prod.mul(b, grading);
            }
            let rep = crate::residue::mu_inverse(ring, f, ctr, &prod)?;
            let scaled = rep.scale(&Rat::from_integer(scalar));
            Ok(ChiralValue { element: ChiralElement::Polynomial(scaled), i_power })
        }
    }
}

// ---------------------------------------------------------------------------
// The quantum-side product
// ---------------------------------------------------------------------------

/// The two evaluations of a product of toric classes and component
/// differences on the hypersurface: `direct` through the cup product of the
/// mixed decomposition, `closed` through the root-vector scalar times a toric
/// intersection number. Construction fails if they disagree.
#[derive(Debug, Clone)]
pub struct QuantumProduct {
    pub class: HodgeClass,
    pub direct: Rat,
    pub closed: Rat,
}

/// Multiplies `s` toric (1,1) classes with `t` component-difference classes
/// `D_ray (x) g_k` over one codimension-one target cone, `s + t = d - 1`, and
/// checks the closed form `alpha_{k_1}...alpha_{k_t} a_1...a_s D_1...D_t`
/// against the cup-product evaluation.
pub fn quantum_side_product(
    algebra: &HodgeAlgebra,
    toric: &[TPoly],
    factors: &[(usize, usize)],
) -> Result<QuantumProduct, Error> {
    let ring = &algebra.ring;
    let ctr = &algebra.ctr;
    let d = ring.fan.rank();
    if toric.len() + factors.len() != d - 1 {
        return Err(Error::InvalidInput(
            "quantum-side products need s + t = d - 1 factors".into(),
        ));
    }
    if factors.is_empty() {
        return Err(Error::InvalidInput(
            "quantum-side products need at least one component factor".into(),
        ));
    }
    let sigma = ctr.smallest[&vec![factors[0].0]];
    for (ray, _) in factors {
        if ctr.smallest[&vec![*ray]] != sigma {
            return Err(Error::InvalidInput(
                "component factors must share one target cone".into(),
            ));
        }
    }
    let vol_rat = ctr.gamma_volume(sigma);
    let vol = vol_rat.to_integer().to_usize().ok_or(Error::OutOfRange("edge volume"))?;
    if vol < 2 {
        return Err(Error::Unsupported("the edge carries no component differences"));
    }
    let n = vol - 1;
    let mut classes: Vec<HodgeClass> = Vec::new();
    let mut toric_prod = TPoly::one();
    for u in toric {
        classes.push(HodgeClass::toric_class(1, u.clone()));
        toric_prod = toric_prod.mul(u);
    }
    let mut ks = Vec::with_capacity(factors.len());
    for (ray, k) in factors {
        if *k == 0 || *k > n {
            return Err(Error::OutOfRange("component index must lie in 1..=vol-1"));
        }
        ks.push(*k);
        let gs = match component_classes(ring, &algebra.f, ctr, *ray, RootMode::Exact)? {
            ComponentClasses::Exact(gs) => gs,
            ComponentClasses::Numeric(_) => {
                return Err(Error::Unsupported("numeric component classes"))
            }
        };
        if gs.len() != n {
            return Err(Error::InconsistentSystem("component count misses the edge volume"));
        }
        let u = TPoly::monomial(&[*ray], Rat::one());
        classes.push(HodgeClass::residue_class(1, 1, sigma, u, gs[*k - 1].clone()));
        toric_prod = toric_prod.mul(&TPoly::monomial(&[*ray], Rat::one()));
    }
    let mut acc = classes[0].clone();
    for c in &classes[1..] {
        acc = algebra.cup(&acc, c)?;
    }
    let direct = match acc.toric.get(&0) {
        Some(u) => algebra.integrate_toric(u)?,
        None => Rat::zero(),
    };
    // The toric coefficient of a product of component differences is the
    // root product divided by n + 1; the empty product convention n + 1
    // makes the factor collapse to 1 when no differences remain.
    let scalar =
        Rat::new(alpha_product(&ks, n), Int::from(n as i64 + 1));
    let closed = &scalar * algebra.integrate_toric(&toric_prod)?;
    if direct != closed {
        return Err(Error::FalsifiedIdentity(format!(
            "quantum-side product over cone {sigma}: direct {direct} != closed {closed}"
        )));
    }
    Ok(QuantumProduct { class: acc, direct, closed })
}

// ---------------------------------------------------------------------------
// The monomial-divisor map
// ---------------------------------------------------------------------------

/// One row of the monomial-divisor table: a surviving divisor ray, its
/// anticanonical monomial on the mirror side, and the coordinates of that
/// monomial in the mirror `R_1(f)_beta` basis.
#[derive(Debug, Clone)]
pub struct MdmRow {
    pub ray: usize,
    pub monomial: Vec<Int>,
    pub coords: SparseRow,
}

/// The monomial-divisor correspondence: divisor classes modulo the relation
/// space against mirror monomial classes.
#[derive(Debug, Clone)]
pub struct MdmTable {
    pub rows: Vec<MdmRow>,
    /// A basis of the divisor side: the rays at non-pivot columns of the
    /// relation space.
    pub divisor_basis: Vec<usize>,
    pub divisor_rank: usize,
    pub mirror_dim: usize,
    /// Rank of the coordinate matrix of the rows.
    pub rank: usize,
}

/// Indices of rays interior to a full-dimensional target cone; for the
/// anticanonical contraction these are the rays at facet-interior points of
/// the dual polytope.
fn facet_interior_rays(ctr: &SemiampleContraction) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for sigma in ctr.target_cones_of_dim(ctr.kappa) {
        out.extend(ctr.rays_into_interior(sigma));
    }
    out
}

/// Sends each surviving divisor `D_k` to the monomial `x^{D(e_k)}` of the
/// mirror polynomial ring, reduced in the mirror `R_1(f)_beta` slice.
/// Requires a simplified mirror polynomial.
pub fn monomial_divisor_map(pair: &MirrorPair) -> Result<MdmTable, Error> {
    if !pair.simplified {
        return Err(Error::InvalidInput(
            "the monomial-divisor map needs a simplified mirror polynomial".into(),
        ));
    }
    let ctr = &pair.ctr;
    let fan = &ctr.fan;
    let d = fan.rank();
    let n = fan.n_rays();
    let skipped = facet_interior_rays(ctr);
    // Relation space: the character rows plus the facet-interior indicators.
    let mut relations = Echelon::new();
    for r in 0..d {
        let row: SparseRow = (0..n)
            .filter_map(|k| {
                let c = Rat::from_integer(fan.ray(k)[r].clone());
                if c.is_zero() { None } else { Some((k, c)) }
            })
            .collect();
        relations.insert(row);
    }
    for &k in &skipped {
        relations.insert(vec![(k, Rat::one())]);
    }
    let divisor_basis: Vec<usize> = (0..n).filter(|&k| !relations.is_pivot(k)).collect();
    let divisor_rank = n - relations.rank();
    let zero = pair.mirror_ctr.zero_cone();
    let slice =
        pair.mirror_ring.r1_sigma_slice(&pair.mirror_f, &pair.mirror_ctr, zero, 2)?;
    let mirror_rays = pair.mirror_ring.fan.rays();
    let mut rows = Vec::new();
    let mut span = Echelon::new();
    for k in 0..n {
        if skipped.contains(&k) {
            continue;
        }
        let e_k: Vec<Int> = fan.ray(k).to_vec();
        let expt = point_monomial(mirror_rays, &e_k);
        let mono = CoxPolynomial::monomial(&pair.mirror_ring.grading, &expt, Rat::one());
        let coords = slice.reduce(&mono)?;
        span.insert(coords.clone());
        rows.push(MdmRow { ray: k, monomial: expt, coords });
    }
    Ok(MdmTable {
        rows,
        divisor_basis,
        divisor_rank,
        mirror_dim: slice.quotient_dim(),
        rank: span.rank(),
    })
}

// ---------------------------------------------------------------------------
// The generalized monomial-divisor map
// ---------------------------------------------------------------------------

/// The correspondence over one codimension-one target cone with interior
/// rays: the component classes of every interior ray on the ambient side
/// against the sigma-part slice of the cone over the dual edge on the mirror
/// side.
#[derive(Debug, Clone)]
pub struct GmdmEntry {
    /// Codimension-one target cone on the ambient side.
    pub sigma: usize,
    /// The 2-dimensional mirror target cone over the dual edge.
    pub sigma_mirror: usize,
    /// Lattice length of the edge.
    pub volume: usize,
    /// Interior-ray count of the mirror cone, `volume - 1`.
    pub n: usize,
    /// Interior rays of the ambient cone.
    pub rays: Vec<usize>,
    /// Component classes `g_1..g_{volume-1}` per interior ray.
    pub x_classes: Vec<Vec<CoxPolynomial>>,
    /// Coordinates of the monomial `x^{D(e_k)} / prod_out x` per interior
    /// ray, in the mirror sigma slice at `q = 1`.
    pub mirror_reps: Vec<SparseRow>,
    /// Dimension of that mirror slice; equals the interior-ray count.
    pub mirror_dim: usize,
}

#[derive(Debug, Clone)]
pub struct GmdmTable {
    pub entries: Vec<GmdmEntry>,
}

fn face_vertex_int(poly: &LatticePolytope, id: usize) -> Result<Vec<Int>, Error> {
    poly.vertices[id]
        .iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::InconsistentSystem("polytope vertex is not a lattice point"))
            }
        })
        .collect()
}

/// Builds the generalized correspondence for a nondegenerate anticanonical
/// `x_f` on the ambient side. Every codimension-one target cone contributes
/// an entry; the lattice-length and slice-dimension identities are checked
/// and a mismatch is reported as a falsified identity with the cone indices
/// and both dimensions.
pub fn generalized_mdmm(pair: &MirrorPair, x_f: &CoxPolynomial) -> Result<GmdmTable, Error> {
    let ctr = &pair.ctr;
    let d = ctr.fan.rank();
    if x_f.degree != pair.ring.beta0() {
        return Err(Error::InvalidInput(
            "the generalized map needs an anticanonical polynomial".into(),
        ));
    }
    let mirror_rays = pair.mirror_ring.fan.rays();
    let mirror_two: Vec<usize> = pair.mirror_ctr.target_cones_of_dim(2);
    let mut entries = Vec::new();
    for sigma in ctr.target_cones_of_dim(d - 1) {
        let face = &ctr.target_faces[sigma];
        if face.vertex_ids.len() != 2 {
            return Err(Error::InconsistentSystem("codimension-one face is not a segment"));
        }
        let vol_rat = ctr.gamma_volume(sigma);
        if !vol_rat.is_integer() {
            return Err(Error::InconsistentSystem("edge volume is not an integer"));
        }
        let vol =
            vol_rat.to_integer().to_usize().ok_or(Error::OutOfRange("edge volume"))?;
        let v0 = face_vertex_int(&ctr.delta, face.vertex_ids[0])?;
        let v1 = face_vertex_int(&ctr.delta, face.vertex_ids[1])?;
        let mut edge_gens = vec![primitive_vector(&v0), primitive_vector(&v1)];
        edge_gens.sort();
        // The mirror cone over the edge is the normal cone of the dual face,
        // so it appears among the 2-dimensional mirror target cones.
        let sigma_mirror = *mirror_two
            .iter()
            .find(|&&tau| {
                let mut gens = pair.mirror_ctr.target_cone_ray_generators(tau);
                gens.sort();
                gens == edge_gens
            })
            .ok_or(Error::InconsistentSystem("dual edge cone missing on the mirror side"))?;
        let n_mirror = pair.mirror_ctr.rays_into_interior(sigma_mirror).len();
        if n_mirror + 1 != vol {
            return Err(Error::FalsifiedIdentity(format!(
                "edge of cone {sigma} has length {vol} but the mirror cone {sigma_mirror} \
                 has {n_mirror} interior rays"
            )));
        }
        let interior = ctr.rays_into_interior(sigma);
        let slice = pair.mirror_ring.r1_sigma_slice(
            &pair.mirror_f,
            &pair.mirror_ctr,
            sigma_mirror,
            1,
        )?;
        let mirror_dim = slice.quotient_dim();
        if mirror_dim != interior.len() {
            return Err(Error::FalsifiedIdentity(format!(
                "cone {sigma} has {} interior rays but the mirror slice over cone \
                 {sigma_mirror} has dimension {mirror_dim}",
                interior.len()
            )));
        }
        let inside = pair.mirror_ctr.rays_into(sigma_mirror);
        let mut x_classes = Vec::new();
        let mut mirror_reps = Vec::new();
        for &k in &interior {
            let gs = match component_classes(&pair.ring, x_f, ctr, k, RootMode::Exact)? {
                ComponentClasses::Exact(gs) => gs,
                ComponentClasses::Numeric(_) => {
                    return Err(Error::Unsupported("numeric component classes"))
                }
            };
            let e_k: Vec<Int> = ctr.fan.ray(k).to_vec();
            let mut expt = point_monomial(mirror_rays, &e_k);
            let inside_ind = indicator(mirror_rays.len(), &inside);
            for (e, one_in) in expt.iter_mut().zip(
                (0..mirror_rays.len()).map(|r| inside_ind[r].is_one()),
            ) {
                if !one_in {
                    *e -= Int::one();
                }
            }
            if expt.iter().any(Signed::is_negative) {
                return Err(Error::InconsistentSystem(
                    "generalized-map monomial has a negative exponent",
                ));
            }
            let mono = CoxPolynomial::new(
                &pair.mirror_ring.grading,
                vec![(expt, Rat::one())],
                slice.degree.clone(),
            )?;
            mirror_reps.push(slice.reduce(&mono)?);
            x_classes.push(gs);
        }
        entries.push(GmdmEntry {
            sigma,
            sigma_mirror,
            volume: vol,
            n: n_mirror,
            rays: interior,
            x_classes,
            mirror_reps,
            mirror_dim,
        });
    }
    Ok(GmdmTable { entries })
}
