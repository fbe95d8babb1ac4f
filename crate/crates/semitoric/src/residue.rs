//! Residue normalization for graded quotients of the Cox ring: the constants
//! c_I attached to an index set, the toric Jacobian J_sigma, the residue
//! functional on the top slice, the projection p_sigma, the inverse of the
//! multiplication map mu, and the correction polynomials G and H used by the
//! chiral ring products.
//!
//! All transcendental constants are tracked symbolically as twist exponents;
//! ring computations stay in exact rational arithmetic throughout.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::cox::{indicator, ChowClass, CoxPolynomial, CoxRing, GradedSlice};
use crate::error::Error;
use crate::linalg::{kernel_saturation, solve_linear, IntMatrix, RatMatrix};
use crate::polytope::{dot_ii, Fan, SemiampleContraction};
use crate::{Int, Rat};

/// An exact scalar of the form `q * (-2 pi sqrt(-1))^t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueScalar {
    pub q: Rat,
    pub t: u32,
}

impl ResidueScalar {
    /// Canonical constructor: a zero rational part forces a zero twist.
    pub fn new(q: Rat, t: u32) -> Self {
        if q.is_zero() {
            ResidueScalar { q, t: 0 }
        } else {
            ResidueScalar { q, t }
        }
    }

    pub fn zero() -> Self {
        ResidueScalar { q: Rat::zero(), t: 0 }
    }

    pub fn one() -> Self {
        ResidueScalar { q: Rat::one(), t: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn mul(&self, other: &ResidueScalar) -> ResidueScalar {
        ResidueScalar::new(&self.q * &other.q, self.t + other.t)
    }

    pub fn scale(&self, c: &Rat) -> ResidueScalar {
        ResidueScalar::new(&self.q * c, self.t)
    }
}

pub fn factorial(n: usize) -> Int {
    let mut out = Int::one();
    for k in 2..=n {
        out *= Int::from(k);
    }
    out
}

/// The constant `c_I^beta` of a complete fan: the determinant of the
/// (d+1) x (d+1) matrix whose first row holds the divisor coefficients
/// `b_k` for `k` in `I` and whose remaining rows hold the ray coordinates
/// `<m_j, e_k>` in the standard character basis.
pub fn c_i_beta(fan: &Fan, b: &[Int], i_set: &[usize]) -> Result<Int, Error> {
    let d = fan.rank();
    if i_set.len() != d + 1 {
        return Err(Error::WrongIndexSetSize { expected: d + 1, got: i_set.len() });
    }
    if b.len() != fan.n_rays() {
        return Err(Error::DimensionMismatch { expected: fan.n_rays(), got: b.len() });
    }
    for &k in i_set {
        if k >= fan.n_rays() {
            return Err(Error::OutOfRange("index set entry exceeds the ray count"));
        }
    }
    let mut m = IntMatrix::zero(d + 1, d + 1);
    for (col, &k) in i_set.iter().enumerate() {
        *m.at_mut(0, col) = b[k].clone();
        for j in 0..d {
            *m.at_mut(j + 1, col) = fan.ray(k)[j].clone();
        }
    }
    Ok(m.det())
}

// Next size-k index combination of 0..n in lexicographic order; the first is
// [0, 1, .., k-1].
fn next_combination(c: &mut Vec<usize>, n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

// Determinant of a square matrix of polynomials by Laplace expansion along
// the first row.
fn det_poly(m: &[Vec<CoxPolynomial>], ring: &CoxRing) -> CoxPolynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<CoxPolynomial> = None;
    for col in 0..n {
        let minor: Vec<Vec<CoxPolynomial>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != col).map(|c| m[r][c].clone()).collect())
            .collect();
        let mut term = m[0][col].mul(&det_poly(&minor, ring), &ring.grading);
        if col % 2 == 1 {
            term = term.scale(&-Rat::one());
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term).expect("cofactor terms share a degree"),
        });
    }
    acc.expect("nonempty matrix")
}

/// Exact division of a polynomial by `c * x^e`; errors if any term is not
/// divisible by the monomial.
pub fn div_by_monomial(
    ring: &CoxRing,
    p: &CoxPolynomial,
    expt: &[Int],
    c: &Rat,
) -> Result<CoxPolynomial, Error> {
    if c.is_zero() {
        return Err(Error::InexactDivision("division by a zero scalar"));
    }
    let mut terms = Vec::with_capacity(p.terms.len());
    for (e, coeff) in &p.terms {
        let mut q = Vec::with_capacity(e.len());
        for (x, y) in e.iter().zip(expt) {
            let diff = x - y;
            if diff.is_negative() {
                return Err(Error::InexactDivision("a term is not divisible by the monomial"));
            }
            q.push(diff);
        }
        terms.push((q, coeff / c));
    }
    let degree = ring.grading.sub(&p.degree, &ring.grading.class(expt));
    CoxPolynomial::new(&ring.grading, terms, degree)
}

/// Everything needed to evaluate residues over one target cone: the chosen
/// index set with its nonzero constant, the toric Jacobian J_sigma, the
/// 1-dimensional top slice it calibrates, and the face volume.
///
/// Immutable after construction; evaluations are pure.
#[derive(Debug, Clone)]
pub struct SigmaResidueContext {
    pub sigma: usize,
    pub i_sigma: usize,
    pub rays_in: Vec<usize>,
    pub rays_out: Vec<usize>,
    /// Canonical basis rows of the saturated lattice `M_X` intersected with
    /// the annihilator of the target cone.
    pub m_basis: Vec<Vec<Int>>,
    /// Divisor coefficients of the degree of `f`, normalized to vanish on
    /// the rays mapping into the cone.
    pub b: Vec<Int>,
    /// The lexicographically first index set with a nonzero constant.
    pub index_set: Vec<usize>,
    pub c_i: Int,
    pub j_sigma: CoxPolynomial,
    /// Top slice of `R_0^sigma(f)`; 1-dimensional by nondegeneracy.
    pub top: GradedSlice,
    j_col: usize,
    j_coeff: Rat,
    pub vol_gamma: Rat,
    /// Product of the variables whose rays do not map into the cone.
    pub h_out: CoxPolynomial,
    pub f: CoxPolynomial,
    res_degree: ChowClass,
}

impl SigmaResidueContext {
    pub fn new(
        ring: &CoxRing,
        f: &CoxPolynomial,
        ctr: &SemiampleContraction,
        sigma: usize,
    ) -> Result<Self, Error> {
        if sigma >= ctr.target_faces.len() {
            return Err(Error::UnknownCone);
        }
        if f.degree != ring.divisor_class(&ctr.divisor) {
            return Err(Error::InvalidInput(
                "polynomial degree does not match the contraction divisor".into(),
            ));
        }
        let i_sig = ctr.i_sigma(sigma);
        let rays_in = ctr.rays_into(sigma);
        let rays_out: Vec<usize> =
            (0..ring.n_vars()).filter(|k| !rays_in.contains(k)).collect();

        // Basis of M_X cut by the cone annihilator: kill the kernel of the
        // quotient projection and every ray mapping into the cone.
        let mut kill: Vec<Vec<Int>> = Vec::new();
        let ker = kernel_saturation(&ctr.pi);
        for r in 0..ker.rows {
            kill.push(ker.row(r).to_vec());
        }
        for &k in &rays_in {
            kill.push(ring.fan.ray(k).to_vec());
        }
        let m_mat = if kill.is_empty() {
            IntMatrix::identity(ring.fan.rank())
        } else {
            kernel_saturation(&IntMatrix::from_rows(&kill))
        };
        let m_basis: Vec<Vec<Int>> = (0..m_mat.rows).map(|r| m_mat.row(r).to_vec()).collect();
        if m_basis.len() != i_sig {
            return Err(Error::InconsistentSystem(
                "annihilator lattice rank does not match the cone codimension",
            ));
        }

        // Representative of beta vanishing on the inner rays: shift by a
        // vertex of the face of the divisor polytope attached to the cone.
        let a = &ctr.divisor;
        let mut shift: Option<Vec<Int>> = None;
        'vertices: for v in &ctr.delta.vertices {
            let vi: Vec<Int> = v
                .iter()
                .map(|x| {
                    debug_assert!(x.is_integer(), "semiample polytope vertices are integral");
                    x.to_integer()
                })
                .collect();
            for &k in &rays_in {
                if dot_ii(&vi, ring.fan.ray(k)) + &a[k] != Int::zero() {
                    continue 'vertices;
                }
            }
            shift = Some(vi);
            break;
        }
        let m_star = shift.ok_or(Error::InconsistentSystem(
            "no polytope vertex lies on the face of the target cone",
        ))?;
        let b: Vec<Int> =
            (0..ring.n_vars()).map(|k| &a[k] + dot_ii(&m_star, ring.fan.ray(k))).collect();

        // Lexicographically first index set with a nonzero constant.
        let size = i_sig + 1;
        if size > ring.n_vars() {
            return Err(Error::InconsistentSystem("index set larger than the ray count"));
        }
        let mut i_set: Vec<usize> = (0..size).collect();
        let (index_set, c_i) = loop {
            let c = sigma_constant(&b, &m_basis, ring, &i_set);
            if !c.is_zero() {
                break (i_set.clone(), c);
            }
            if !next_combination(&mut i_set, ring.n_vars()) {
                return Err(Error::DegenerateHypersurface(
                    "every index set has a vanishing constant",
                ));
            }
        };

        let j_sigma = jacobian_from_index_set(ring, f, &rays_out, &index_set, &c_i)?;

        let top = ring.r0_sigma_top_slice(f, ctr, sigma)?;
        if top.quotient_dim() != 1 {
            return Err(Error::DegenerateHypersurface(
                "top slice of R_0^sigma is not 1-dimensional",
            ));
        }
        let j_red = top.reduce(&j_sigma)?;
        let (j_col, j_coeff) = match j_red.first() {
            Some((c, v)) if j_red.len() == 1 => (*c, v.clone()),
            _ => {
                return Err(Error::DegenerateHypersurface(
                    "J_sigma vanishes in the top slice",
                ))
            }
        };

        let beta = &f.degree;
        let beta0 = ring.beta0();
        let beta1 = ring.beta1(ctr, sigma);
        let res_degree = ring.grading.add(
            &ring.grading.sub(
                &ring.grading.scale(i_sig as i64 + 1, beta),
                &ring.grading.scale(2, &beta0),
            ),
            &ring.grading.scale(2, &beta1),
        );

        Ok(SigmaResidueContext {
            sigma,
            i_sigma: i_sig,
            rays_in,
            rays_out,
            m_basis,
            b,
            index_set,
            c_i,
            j_sigma,
            top,
            j_col,
            j_coeff,
            vol_gamma: ctr.gamma_volume(sigma),
            h_out: ring.outside_product(ctr, sigma),
            f: f.clone(),
            res_degree,
        })
    }

    /// The constant `c_I^{beta,sigma}` for an arbitrary index set of the
    /// right size, using the stored normalized representative and basis.
    pub fn c_i_beta_sigma(&self, ring: &CoxRing, i_set: &[usize]) -> Result<Int, Error> {
        if i_set.len() != self.i_sigma + 1 {
            return Err(Error::WrongIndexSetSize { expected: self.i_sigma + 1, got: i_set.len() });
        }
        for &k in i_set {
            if k >= ring.n_vars() {
                return Err(Error::OutOfRange("index set entry exceeds the ray count"));
            }
        }
        Ok(sigma_constant(&self.b, &self.m_basis, ring, i_set))
    }

    // Coefficient of the class of J_sigma in the top-slice reduction of g.
    fn top_coefficient(&self, g: &CoxPolynomial) -> Result<Rat, Error> {
        let red = self.top.reduce(g)?;
        match red.first() {
            None => Ok(Rat::zero()),
            Some((c, v)) => {
                debug_assert_eq!(*c, self.j_col, "top slice has one quotient coordinate");
                Ok(v / &self.j_coeff)
            }
        }
    }

    /// The residue functional on `R_1^sigma(f)`: zero outside the single
    /// degree `(i(sigma)+1)beta - 2 beta_0 + 2 beta_1^sigma`, where it is the
    /// coefficient of the class of `J_sigma` in `g` times the outer product,
    /// normalized so the residue paired against `J_sigma` itself is
    /// `i(sigma)! vol(Gamma_sigma)` calibrated to `lambda(J_sigma) = 1`.
    pub fn res_sigma(&self, ring: &CoxRing, g: &CoxPolynomial) -> Result<Rat, Error> {
        if g.degree != self.res_degree {
            return Ok(Rat::zero());
        }
        self.top_coefficient(&g.mul(&self.h_out, &ring.grading))
    }

    /// The projection of a degree `2beta - 2beta_0 + 2beta_1^sigma` class to
    /// `R_1^sigma(f)_{beta - beta_0 + beta_1^sigma}`, defined when the cone
    /// has codimension 1 in the target fan. The optional `s` picks the
    /// admissible outer ray used for the division step; the output class is
    /// independent of it, and is returned reduced to the canonical quotient
    /// basis.
    pub fn p_sigma(
        &self,
        ring: &CoxRing,
        ctr: &SemiampleContraction,
        c_poly: &CoxPolynomial,
        s: Option<usize>,
    ) -> Result<CoxPolynomial, Error> {
        if self.i_sigma != 1 {
            return Err(Error::InvalidInput(
                "p_sigma requires a target cone of codimension 1".into(),
            ));
        }
        let grading = &ring.grading;
        let beta = &self.f.degree;
        let beta0 = ring.beta0();
        let beta1 = ring.beta1(ctr, self.sigma);
        let c_degree = grading.add(
            &grading.sub(&grading.scale(2, beta), &grading.scale(2, &beta0)),
            &grading.scale(2, &beta1),
        );
        if c_poly.degree != c_degree {
            return Err(Error::InvalidInput("p_sigma input has the wrong degree".into()));
        }
        let m1 = &self.m_basis[0];
        let s = match s {
            Some(s) => {
                if !self.rays_out.contains(&s) || dot_ii(m1, ring.fan.ray(s)).is_zero() {
                    return Err(Error::InvalidInput(
                        "chosen ray is not admissible for p_sigma".into(),
                    ));
                }
                s
            }
            None => *self
                .rays_out
                .iter()
                .find(|&&k| !dot_ii(m1, ring.fan.ray(k)).is_zero())
                .ok_or(Error::InconsistentSystem("no admissible outer ray"))?,
        };

        // P = C * (outer product) - Res-coefficient * J_sigma lies in the
        // ideal generated by f, the inner variables, and x_s f_s.
        let ch = c_poly.mul(&self.h_out, &ring.grading);
        let lambda = self.top_coefficient(&ch)?;
        let p = ch.add(&self.j_sigma.scale(&-lambda))?;

        let pairing = Rat::from_integer(dot_ii(m1, ring.fan.ray(s)));
        let gen_s = self.f.euler_derivative(s).scale(&(Rat::one() / pairing));
        let mut gens: Vec<CoxPolynomial> = vec![self.f.clone()];
        for &k in &self.rays_in {
            gens.push(CoxPolynomial::monomial(
                grading,
                &indicator(ring.n_vars(), &[k]),
                Rat::one(),
            ));
        }
        gens.push(gen_s);
        let sol = solve_in_ideal(ring, &p, &gens)?
            .ok_or(Error::InconsistentSystem("p_sigma decomposition has no solution"))?;
        let c_prime = sol.into_iter().last().expect("one block per generator");

        // Canonical representative on the quotient basis.
        let slice = ring.r1_sigma_slice(&self.f, ctr, self.sigma, 1)?;
        reduce_to_representative(ring, &slice, &c_prime)
    }
}

/// The toric Jacobian `J_sigma` recomputed for an explicit index set with a
/// nonzero constant: the determinant of `(x_k dF_j/dx_k)` over the index
/// set divided by the squared constant and the outer variable product. Its
/// class in the top slice does not depend on the index set.
pub fn toric_jacobian_sigma(
    ring: &CoxRing,
    f: &CoxPolynomial,
    ctx: &SigmaResidueContext,
    i_set: &[usize],
) -> Result<CoxPolynomial, Error> {
    let c = ctx.c_i_beta_sigma(ring, i_set)?;
    if c.is_zero() {
        return Err(Error::InvalidInput("index set has a vanishing constant".into()));
    }
    jacobian_from_index_set(ring, f, &ctx.rays_out, i_set, &c)
}

// Shared construction of J_sigma from a fixed index set and its constant.
fn jacobian_from_index_set(
    ring: &CoxRing,
    f: &CoxPolynomial,
    rays_out: &[usize],
    index_set: &[usize],
    c_i: &Int,
) -> Result<CoxPolynomial, Error> {
    // Entry (k, j) is x_k dF_j/dx_k with F_j = x_j df/dx_j: same monomials
    // as f, coefficients scaled by both exponents.
    let mat: Vec<Vec<CoxPolynomial>> = index_set
        .iter()
        .map(|&k| {
            index_set
                .iter()
                .map(|&j| {
                    let terms: Vec<(Vec<Int>, Rat)> = f
                        .terms
                        .iter()
                        .filter(|(e, _)| !e[j].is_zero() && !e[k].is_zero())
                        .map(|(e, c)| (e.clone(), c * Rat::from_integer(&e[j] * &e[k])))
                        .collect();
                    CoxPolynomial { terms, degree: f.degree.clone() }
                })
                .collect()
        })
        .collect();
    let det = det_poly(&mat, ring);
    // Terms divisible by an inner variable represent zero in the quotient
    // where J_sigma is evaluated; only the remainder is divisible by the
    // outer variable product, so discard them before dividing.
    let inner: Vec<usize> =
        (0..ring.n_vars()).filter(|k| !rays_out.contains(k)).collect();
    let CoxPolynomial { terms, degree } = det;
    let kept: Vec<(Vec<Int>, Rat)> =
        terms.into_iter().filter(|(e, _)| inner.iter().all(|&k| e[k].is_zero())).collect();
    let det = CoxPolynomial { terms: kept, degree };
    let out_expt = indicator(ring.n_vars(), rays_out);
    let c_sq = Rat::from_integer(c_i * c_i);
    div_by_monomial(ring, &det, &out_expt, &c_sq)
}

// The sigma-variant constant for a fixed normalized representative and
// annihilator basis.
fn sigma_constant(b: &[Int], m_basis: &[Vec<Int>], ring: &CoxRing, i_set: &[usize]) -> Int {
    let n = i_set.len();
    let mut m = IntMatrix::zero(n, n);
    for (col, &k) in i_set.iter().enumerate() {
        *m.at_mut(0, col) = b[k].clone();
        for (j, mj) in m_basis.iter().enumerate() {
            *m.at_mut(j + 1, col) = dot_ii(mj, ring.fan.ray(k));
        }
    }
    m.det()
}

// Express `p` as a combination of multiples of the generators; returns one
// polynomial of cofactors per generator, or None if no solution exists.
fn solve_in_ideal(
    ring: &CoxRing,
    p: &CoxPolynomial,
    gens: &[CoxPolynomial],
) -> Result<Option<Vec<CoxPolynomial>>, Error> {
    let grading = &ring.grading;
    let target = ring.monomials_of_degree(&p.degree)?;
    let index: alloc::collections::BTreeMap<Vec<Int>, usize> =
        target.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    // Column blocks: one per generator, one column per cofactor monomial.
    let mut blocks: Vec<Vec<Vec<Int>>> = Vec::with_capacity(gens.len());
    let mut total_cols = 0usize;
    for g in gens {
        let cof = ring.monomials_of_degree(&grading.sub(&p.degree, &g.degree))?;
        total_cols += cof.len();
        blocks.push(cof);
    }
    let mut a = RatMatrix::zero(target.len(), total_cols);
    let mut col = 0usize;
    for (g, cof) in gens.iter().zip(&blocks) {
        for m in cof {
            for (e, c) in &g.terms {
                let prod: Vec<Int> = e.iter().zip(m).map(|(x, y)| x + y).collect();
                let row = *index.get(&prod).expect("product stays in the degree");
                *a.at_mut(row, col) += c;
            }
            col += 1;
        }
    }
    let mut rhs = vec![Rat::zero(); target.len()];
    for (e, c) in &p.terms {
        rhs[*index.get(e).expect("p lives in its degree slice")] = c.clone();
    }
    let sol = match solve_linear(&a, &rhs)? {
        None => return Ok(None),
        Some(s) => s,
    };
    let mut out = Vec::with_capacity(gens.len());
    let mut at = 0usize;
    for (g, cof) in gens.iter().zip(&blocks) {
        let terms: Vec<(Vec<Int>, Rat)> = cof
            .iter()
            .zip(&sol[at..at + cof.len()])
            .filter(|(_, v)| !v.is_zero())
            .map(|(m, v)| (m.clone(), v.clone()))
            .collect();
        at += cof.len();
        out.push(CoxPolynomial::new(grading, terms, grading.sub(&p.degree, &g.degree))?);
    }
    Ok(Some(out))
}

// Canonical representative of the class of `p` on the quotient basis of a
// slice.
fn reduce_to_representative(
    ring: &CoxRing,
    slice: &GradedSlice,
    p: &CoxPolynomial,
) -> Result<CoxPolynomial, Error> {
    let red = slice.reduce(p)?;
    let terms: Vec<(Vec<Int>, Rat)> =
        red.into_iter().map(|(i, v)| (slice.monomials[i].clone(), v)).collect();
    CoxPolynomial::new(&ring.grading, terms, slice.degree.clone())
}

/// The inverse of the multiplication map `mu` of the anticanonical case:
/// the class `g` in degree `(d-1)beta` with `g` times the product of all
/// variables congruent to `h` modulo the Jacobian ideal in degree `d beta`.
pub fn mu_inverse(
    ring: &CoxRing,
    f: &CoxPolynomial,
    ctr: &SemiampleContraction,
    h: &CoxPolynomial,
) -> Result<CoxPolynomial, Error> {
    let grading = &ring.grading;
    let beta = &f.degree;
    if *beta != ring.beta0() {
        return Err(Error::InvalidInput("mu is defined in the anticanonical case".into()));
    }
    let d = ring.fan.rank() as i64;
    if h.degree != grading.scale(d, beta) {
        return Err(Error::InvalidInput("mu_inverse input has the wrong degree".into()));
    }
    let zero = ctr.zero_cone();
    let gens = ring.jacobian_generators(f, ctr, zero)?;
    let jac = ring.ideal_slice(&gens, &h.degree)?;
    let all = indicator(ring.n_vars(), &(0..ring.n_vars()).collect::<Vec<_>>());
    let xprod = CoxPolynomial::monomial(grading, &all, Rat::one());
    let unknowns = ring.monomials_of_degree(&grading.scale(d - 1, beta))?;
    // Rows: quotient coordinates of the Jacobian slice; columns: unknowns.
    let mut a = RatMatrix::zero(jac.quotient_dim(), unknowns.len());
    let pos: alloc::collections::BTreeMap<usize, usize> =
        jac.quotient.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for (col, m) in unknowns.iter().enumerate() {
        let prod = CoxPolynomial::monomial(grading, m, Rat::one()).mul(&xprod, grading);
        for (c, v) in jac.reduce(&prod)? {
            *a.at_mut(pos[&c], col) = v;
        }
    }
    let mut rhs = vec![Rat::zero(); jac.quotient_dim()];
    for (c, v) in jac.reduce(h)? {
        rhs[pos[&c]] = v;
    }
    let sol = solve_linear(&a, &rhs)?
        .ok_or(Error::InconsistentSystem("mu_inverse has no solution"))?;
    let terms: Vec<(Vec<Int>, Rat)> = unknowns
        .into_iter()
        .zip(sol)
        .filter(|(_, v)| !v.is_zero())
        .map(|(m, v)| (m, v))
        .collect();
    let g = CoxPolynomial::new(grading, terms, grading.scale(d - 1, beta))?;
    let slice = ring.r1_sigma_slice(f, ctr, zero, d)?;
    reduce_to_representative(ring, &slice, &g)
}

/// Correction polynomials for a 2-dimensional target cone in the
/// anticanonical case: `G` of degree `3beta - 2beta_1^sigma` built from the
/// Euler derivatives of the two edge rays, and `H` of degree
/// `beta - beta_1^sigma` collecting the terms of `f` supported on the
/// annihilator of the cone. The square root of minus one multiplying `H` in
/// the displayed formula is accounted for by the twist bookkeeping of the
/// chiral products, not stored in the rational coefficients.
pub fn correction_polynomials(
    ring: &CoxRing,
    f: &CoxPolynomial,
    ctr: &SemiampleContraction,
    sigma: usize,
) -> Result<(CoxPolynomial, CoxPolynomial), Error> {
    if sigma >= ctr.target_faces.len() {
        return Err(Error::UnknownCone);
    }
    if f.degree != ring.beta0() {
        return Err(Error::InvalidInput(
            "correction polynomials require the anticanonical degree".into(),
        ));
    }
    if ctr.target_cone_dim(sigma) != 2 {
        return Err(Error::InvalidInput("sigma must be a 2-dimensional target cone".into()));
    }
    let rays_in = ctr.rays_into(sigma);
    // The simplification assumption: every 2-cone of the fan lying inside
    // sigma is smooth.
    for cone in ring.fan.cones_of_dim(2)? {
        if cone.iter().all(|k| rays_in.contains(k))
            && !ring.fan.cone_multiplicity(&cone)?.is_one()
        {
            return Err(Error::AssumptionViolated(
                "a 2-cone inside the target cone has multiplicity > 1",
            ));
        }
    }

    // Order the inner rays along the cone from one edge to the other.
    let gens = ctr.target_cone_ray_generators(sigma);
    debug_assert_eq!(gens.len(), 2, "a 2-dimensional cone has two edges");
    let (va, vb) = if gens[0] <= gens[1] { (&gens[0], &gens[1]) } else { (&gens[1], &gens[0]) };
    let kappa = ctr.kappa;
    let mut am = RatMatrix::zero(kappa, 2);
    for r in 0..kappa {
        *am.at_mut(r, 0) = Rat::from_integer(va[r].clone());
        *am.at_mut(r, 1) = Rat::from_integer(vb[r].clone());
    }
    let mut keyed: Vec<(Rat, usize)> = Vec::with_capacity(rays_in.len());
    for &k in &rays_in {
        let w: Vec<Rat> =
            ctr.ray_images[k].iter().map(|x| Rat::from_integer(x.clone())).collect();
        if w.iter().all(Zero::is_zero) {
            return Err(Error::Unsupported(
                "a contracted ray lies inside a 2-dimensional target cone",
            ));
        }
        let st = solve_linear(&am, &w)?
            .ok_or(Error::InconsistentSystem("ray image outside its cone span"))?;
        let (s, t) = (&st[0], &st[1]);
        debug_assert!(!s.is_negative() && !t.is_negative(), "image lies in the cone");
        keyed.push((t / (s + t), k));
    }
    keyed.sort();
    for pair in keyed.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::Unsupported("coincident ray images in the target cone"));
        }
    }
    let l0 = keyed.first().expect("cone has edge rays").1;
    let ln = keyed.last().expect("cone has edge rays").1;

    let rays_out: Vec<usize> = (0..ring.n_vars()).filter(|k| !rays_in.contains(k)).collect();
    let out_mon =
        CoxPolynomial::monomial(&ring.grading, &indicator(ring.n_vars(), &rays_out), Rat::one());
    let numerator = f
        .euler_derivative(l0)
        .mul(&f.euler_derivative(ln), &ring.grading)
        .mul(&out_mon, &ring.grading);
    let mult = Rat::from_integer(ctr.target_cone_multiplicity(sigma)?);
    let in_expt = indicator(ring.n_vars(), &rays_in);
    let g = div_by_monomial(ring, &numerator, &in_expt, &mult)?;

    // H: the terms of f whose character annihilates the cone, which are
    // exactly the terms with exponent 1 on every inner variable; strip those
    // variables off.
    let mut h_terms: Vec<(Vec<Int>, Rat)> = Vec::new();
    for (e, c) in &f.terms {
        if rays_in.iter().all(|&k| e[k].is_one()) {
            let q: Vec<Int> = e.iter().zip(&in_expt).map(|(x, y)| x - y).collect();
            h_terms.push((q, c.clone()));
        }
    }
    let h_degree = ring.grading.sub(&f.degree, &ring.grading.class(&in_expt));
    let h = CoxPolynomial::new(&ring.grading, h_terms, h_degree)?;
    Ok((g, h))
}

/// The constant `c_p^sigma`: rational part
/// `-(-1)^{(i-1)(i+2p+2)} / (p! (i-p-1)!)` with twist exponent `i - 1`.
pub fn c_p_sigma(p: usize, i_sigma: usize) -> Result<ResidueScalar, Error> {
    if i_sigma == 0 || p > i_sigma - 1 {
        return Err(Error::OutOfRange("c_p^sigma requires 0 <= p <= i(sigma) - 1"));
    }
    let exponent = (i_sigma - 1) * (i_sigma + 2 * p + 2);
    let sign = if exponent % 2 == 0 { Rat::one() } else { -Rat::one() };
    let denom = factorial(p) * factorial(i_sigma - 1 - p);
    let q = -sign / Rat::from_integer(denom);
    Ok(ResidueScalar::new(q, (i_sigma - 1) as u32))
}
