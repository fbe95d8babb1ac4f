//! The Cox homogeneous coordinate ring graded by the Chow group: degree
//! classes with torsion, monomial enumeration per degree, polynomials, and
//! graded slices of the Jacobian-type ideals and their quotient rings.
//!
//! A monomial `x^a` has degree `[sum a_i D_i]` in `A = Z^n / im(M)`. The
//! degree-`g` monomials are exactly `a_i = c_i + <m, e_i>` for the lattice
//! points `m` of the divisor polytope of any representative `c` of `g`, so
//! every slice is finite and enumerable.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::linalg::{smith_normal_form, sparse_from_dense, Echelon, IntMatrix, SparseRow};
use crate::polytope::{dot_ii, polytope_from_divisor, semiample_contraction, Fan, SemiampleContraction};
use crate::{Int, Rat};

/// 0/1 vector with ones at the given indices.
pub fn indicator(n: usize, idxs: &[usize]) -> Vec<Int> {
    let mut v = vec![Int::zero(); n];
    for &i in idxs {
        v[i] = Int::one();
    }
    v
}

// ---------------------------------------------------------------------------
// Chow grading
// ---------------------------------------------------------------------------

/// The grading group `A_{d-1} = Z^n / im(M)` of a complete fan, presented
/// through the Smith normal form of the ray matrix so torsion is exact.
#[derive(Debug, Clone)]
pub struct ChowGrading {
    n_rays: usize,
    /// Left transform of the SNF of the ray matrix; canonical forms live in
    /// the coordinates `U * rep`.
    u: IntMatrix,
    /// Nonzero diagonal entries of the SNF (torsion moduli; 1 means the
    /// coordinate dies entirely).
    diag: Vec<Int>,
}

/// A degree class in the Chow group. Equality and ordering go through the
/// canonical form; the stored representative is used to enumerate monomials.
#[derive(Debug, Clone)]
pub struct ChowClass {
    pub rep: Vec<Int>,
    canon: Vec<Int>,
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}
impl Eq for ChowClass {}
impl PartialOrd for ChowClass {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ChowClass {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.canon.cmp(&other.canon)
    }
}

impl ChowClass {
    pub fn canonical(&self) -> &[Int] {
        &self.canon
    }

    pub fn is_zero(&self) -> bool {
        self.canon.iter().all(Zero::is_zero)
    }
}

impl ChowGrading {
    pub fn new(fan: &Fan) -> Self {
        let rays = IntMatrix::from_rows(fan.rays());
        let (u, s, _) = smith_normal_form(&rays);
        let r = s.rows.min(s.cols);
        let diag: Vec<Int> =
            (0..r).map(|i| s.at(i, i).clone()).take_while(|d| !d.is_zero()).collect();
        ChowGrading { n_rays: fan.n_rays(), u, diag }
    }

    pub fn rank(&self) -> usize {
        // Free rank of the Chow group: n - rank(ray matrix).
        self.n_rays - self.diag.len()
    }

    pub fn torsion_moduli(&self) -> Vec<Int> {
        self.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn class(&self, rep: &[Int]) -> ChowClass {
        assert_eq!(rep.len(), self.n_rays, "degree representative has one entry per ray");
        let mut canon = self.u.mul_vec(rep);
        for (i, d) in self.diag.iter().enumerate() {
            canon[i] = canon[i].mod_floor(d);
        }
        ChowClass { rep: rep.to_vec(), canon }
    }

    pub fn zero(&self) -> ChowClass {
        self.class(&vec![Int::zero(); self.n_rays])
    }

    pub fn add(&self, a: &ChowClass, b: &ChowClass) -> ChowClass {
        let rep: Vec<Int> = a.rep.iter().zip(&b.rep).map(|(x, y)| x + y).collect();
        self.class(&rep)
    }

    pub fn sub(&self, a: &ChowClass, b: &ChowClass) -> ChowClass {
        let rep: Vec<Int> = a.rep.iter().zip(&b.rep).map(|(x, y)| x - y).collect();
        self.class(&rep)
    }

    pub fn neg(&self, a: &ChowClass) -> ChowClass {
        let rep: Vec<Int> = a.rep.iter().map(|x| -x.clone()).collect();
        self.class(&rep)
    }

    pub fn scale(&self, k: i64, a: &ChowClass) -> ChowClass {
        let rep: Vec<Int> = a.rep.iter().map(|x| x * Int::from(k)).collect();
        self.class(&rep)
    }
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// A homogeneous element of the Cox ring: terms with a shared Chow degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxPolynomial {
    /// Sorted by exponent vector; coefficients nonzero.
    pub terms: Vec<(Vec<Int>, Rat)>,
    pub degree: ChowClass,
}

impl CoxPolynomial {
    pub fn new(
        grading: &ChowGrading,
        terms: Vec<(Vec<Int>, Rat)>,
        degree: ChowClass,
    ) -> Result<Self, Error> {
        let mut map: BTreeMap<Vec<Int>, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if e.iter().any(Signed::is_negative) {
                return Err(Error::InvalidInput("negative exponent in monomial".into()));
            }
            if grading.class(&e) != degree {
                return Err(Error::InvalidInput(format!(
                    "term {e:?} is not homogeneous of the stated degree"
                )));
            }
            let slot = map.entry(e).or_insert_with(Rat::zero);
            *slot += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(CoxPolynomial { terms: map.into_iter().collect(), degree })
    }

    pub fn monomial(grading: &ChowGrading, expt: &[Int], coeff: Rat) -> Self {
        let degree = grading.class(expt);
        let terms =
            if coeff.is_zero() { Vec::new() } else { vec![(expt.to_vec(), coeff)] };
        CoxPolynomial { terms, degree }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The Euler-type generator `x_k * df/dx_k`; exponents are unchanged,
    /// each coefficient is scaled by the k-th exponent.
    pub fn euler_derivative(&self, k: usize) -> CoxPolynomial {
        let terms: Vec<(Vec<Int>, Rat)> = self
            .terms
            .iter()
            .filter(|(e, _)| !e[k].is_zero())
            .map(|(e, c)| (e.clone(), c * Rat::from_integer(e[k].clone())))
            .collect();
        CoxPolynomial { terms, degree: self.degree.clone() }
    }

    pub fn mul(&self, other: &CoxPolynomial, grading: &ChowGrading) -> CoxPolynomial {
        let mut map: BTreeMap<Vec<Int>, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<Int> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = map.entry(e).or_insert_with(Rat::zero);
                *slot += ca * cb;
            }
        }
        map.retain(|_, c| !c.is_zero());
        CoxPolynomial {
            terms: map.into_iter().collect(),
            degree: grading.add(&self.degree, &other.degree),
        }
    }

    pub fn scale(&self, c: &Rat) -> CoxPolynomial {
        if c.is_zero() {
            return CoxPolynomial { terms: Vec::new(), degree: self.degree.clone() };
        }
        CoxPolynomial {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
            degree: self.degree.clone(),
        }
    }

    pub fn add(&self, other: &CoxPolynomial) -> Result<CoxPolynomial, Error> {
        if self.degree != other.degree {
            return Err(Error::InvalidInput("adding polynomials of different degrees".into()));
        }
        let mut map: BTreeMap<Vec<Int>, Rat> = self.terms.iter().cloned().collect();
        for (e, c) in &other.terms {
            let slot = map.entry(e.clone()).or_insert_with(Rat::zero);
            *slot += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(CoxPolynomial { terms: map.into_iter().collect(), degree: self.degree.clone() })
    }
}

// ---------------------------------------------------------------------------
// Graded slices
// ---------------------------------------------------------------------------

/// A degree piece of the Cox ring together with the span of an ideal (or
/// subspace) inside it and the canonical quotient basis.
///
/// Immutable after construction; `reduce` is pure, so slices can be shared
/// across threads.
#[derive(Debug, Clone)]
pub struct GradedSlice {
    pub degree: ChowClass,
    /// All monomials of the degree, lexicographically sorted; this is the
    /// coordinate basis.
    pub monomials: Vec<Vec<Int>>,
    index: BTreeMap<Vec<Int>, usize>,
    ech: Echelon,
    /// Indices of the monomials forming the canonical quotient basis
    /// (non-pivot columns of the subspace echelon).
    pub quotient: Vec<usize>,
}

impl GradedSlice {
    fn assemble(degree: ChowClass, monomials: Vec<Vec<Int>>, ech: Echelon) -> Self {
        let index: BTreeMap<Vec<Int>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let quotient: Vec<usize> =
            (0..monomials.len()).filter(|c| !ech.is_pivot(*c)).collect();
        GradedSlice { degree, monomials, index, ech, quotient }
    }

    pub fn total_dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn subspace_rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient.len()
    }

    /// Coordinates of a polynomial in the monomial basis of this slice.
    pub fn coords(&self, p: &CoxPolynomial) -> Result<SparseRow, Error> {
        let mut row: SparseRow = Vec::with_capacity(p.terms.len());
        for (e, c) in &p.terms {
            match self.index.get(e) {
                Some(&i) => row.push((i, c.clone())),
                None => {
                    return Err(Error::InvalidInput(format!(
                        "monomial {e:?} does not have the slice degree"
                    )))
                }
            }
        }
        row.sort_by_key(|(i, _)| *i);
        Ok(row)
    }

    /// Canonical residue of a coordinate row modulo the subspace, supported
    /// on the quotient basis.
    pub fn reduce_coords(&self, row: SparseRow) -> SparseRow {
        self.ech.reduce(row)
    }

    /// Canonical residue of a polynomial modulo the subspace.
    pub fn reduce(&self, p: &CoxPolynomial) -> Result<SparseRow, Error> {
        Ok(self.ech.reduce(self.coords(p)?))
    }

    /// Membership of a polynomial in the subspace.
    pub fn contains(&self, p: &CoxPolynomial) -> Result<bool, Error> {
        Ok(self.reduce(p)?.is_empty())
    }

    /// The quotient-basis monomials.
    pub fn quotient_monomials(&self) -> Vec<Vec<Int>> {
        self.quotient.iter().map(|&i| self.monomials[i].clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// The ring
// ---------------------------------------------------------------------------

/// A complete simplicial fan together with its Chow grading: the ambient
/// object for all slice computations.
#[derive(Debug, Clone)]
pub struct CoxRing {
    pub fan: Fan,
    pub grading: ChowGrading,
}

impl CoxRing {
    pub fn new(fan: Fan) -> Result<Self, Error> {
        if !fan.is_complete() {
            return Err(Error::FanNotComplete);
        }
        if !fan.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let grading = ChowGrading::new(&fan);
        Ok(CoxRing { fan, grading })
    }

    pub fn n_vars(&self) -> usize {
        self.fan.n_rays()
    }

    /// Degree class of the divisor `sum a_i D_i`.
    pub fn divisor_class(&self, a: &[Int]) -> ChowClass {
        self.grading.class(a)
    }

    /// The anticanonical degree, the class of the product of all variables.
    pub fn beta0(&self) -> ChowClass {
        self.grading.class(&vec![Int::one(); self.n_vars()])
    }

    /// All monomials of a degree class, lexicographically ordered. Uses the
    /// stored representative; the result is representative-independent.
    pub fn monomials_of_degree(&self, gamma: &ChowClass) -> Result<Vec<Vec<Int>>, Error> {
        let delta = polytope_from_divisor(&self.fan, &gamma.rep)?;
        let mut out: Vec<Vec<Int>> = delta
            .lattice_points()
            .iter()
            .map(|m| {
                (0..self.n_vars())
                    .map(|i| &gamma.rep[i] + dot_ii(m, self.fan.ray(i)))
                    .collect::<Vec<Int>>()
            })
            .collect();
        for a in &out {
            debug_assert!(a.iter().all(|x| !x.is_negative()), "polytope points give exponents");
        }
        out.sort();
        Ok(out)
    }

    /// Sample a polynomial supported on the given monomials with nonzero
    /// small integer coefficients drawn deterministically from the seed.
    pub fn sample_on_monomials(&self, monomials: &[Vec<Int>], seed: u64) -> CoxPolynomial {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::with_capacity(monomials.len());
        for m in monomials {
            // Nonzero coefficients in [-19, -1] or [1, 19].
            let raw = (rng.next_u64() % 38) as i64 - 19;
            let c = if raw >= 0 { raw + 1 } else { raw };
            terms.push((m.clone(), Rat::from_integer(Int::from(c))));
        }
        let degree = self.grading.class(&monomials[0]);
        CoxPolynomial::new(&self.grading, terms, degree).expect("sampled terms are homogeneous")
    }

    /// The slice of the ideal generated by `gens` in degree `gamma`:
    /// span of `m * g` over monomials `m` of the complementary degree.
    pub fn ideal_slice(
        &self,
        gens: &[CoxPolynomial],
        gamma: &ChowClass,
    ) -> Result<GradedSlice, Error> {
        let monomials = self.monomials_of_degree(gamma)?;
        let index: BTreeMap<Vec<Int>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut ech = Echelon::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let cofactor = self.grading.sub(gamma, &g.degree);
            for m in self.monomials_of_degree(&cofactor)? {
                let mut row: SparseRow = Vec::with_capacity(g.terms.len());
                for (e, c) in &g.terms {
                    let prod: Vec<Int> = e.iter().zip(&m).map(|(x, y)| x + y).collect();
                    let col = *index.get(&prod).expect("product stays in the degree slice");
                    row.push((col, c.clone()));
                }
                row.sort_by_key(|(i, _)| *i);
                ech.insert(row);
            }
        }
        Ok(GradedSlice::assemble(gamma.clone(), monomials, ech))
    }

    /// The slice of the ideal quotient `(J : h)` in degree `gamma`:
    /// `{g : g * h lies in J}`, with `J` spanned degree-wise by `gens`.
    /// The quotient basis presents `S_gamma / (J : h)_gamma`.
    pub fn colon_slice(
        &self,
        gens: &[CoxPolynomial],
        h: &CoxPolynomial,
        gamma: &ChowClass,
    ) -> Result<GradedSlice, Error> {
        if h.is_zero() {
            return Err(Error::InvalidInput("colon by the zero polynomial".into()));
        }
        let monomials = self.monomials_of_degree(gamma)?;
        let big_degree = self.grading.add(gamma, &h.degree);
        let big = self.ideal_slice(gens, &big_degree)?;
        // Residues of m * h modulo J for each candidate monomial m; the colon
        // slice is the left kernel of this residue matrix.
        let mut residues: Vec<SparseRow> = Vec::with_capacity(monomials.len());
        for m in &monomials {
            let prod = CoxPolynomial::monomial(&self.grading, m, Rat::one()).mul(h, &self.grading);
            residues.push(big.reduce(&prod)?);
        }
        // Transpose into rows over the candidate coordinates and compute the
        // canonical nullspace basis.
        let mut cols: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (mi, res) in residues.iter().enumerate() {
            for (c, v) in res {
                cols.entry(*c).or_default().push((mi, v.clone()));
            }
        }
        let mut constraint = Echelon::new();
        for (_, row) in cols {
            constraint.insert(row);
        }
        let kernel = constraint.complement_basis(monomials.len());
        let mut ech = Echelon::new();
        for v in &kernel {
            ech.insert(sparse_from_dense(v));
        }
        Ok(GradedSlice::assemble(gamma.clone(), monomials, ech))
    }

    /// Generators of `J_0^sigma(f)`: the Euler derivatives `x_k f_k` for all
    /// `k`, plus the variables `x_k` whose ray maps into the target cone.
    pub fn jacobian_generators(
        &self,
        f: &CoxPolynomial,
        ctr: &SemiampleContraction,
        sigma: usize,
    ) -> Result<Vec<CoxPolynomial>, Error> {
        if sigma >= ctr.target_faces.len() {
            return Err(Error::UnknownCone);
        }
        let mut gens: Vec<CoxPolynomial> =
            (0..self.n_vars()).map(|k| f.euler_derivative(k)).collect();
        for k in ctr.rays_into(sigma) {
            let e = indicator(self.n_vars(), &[k]);
            gens.push(CoxPolynomial::monomial(&self.grading, &e, Rat::one()));
        }
        Ok(gens)
    }

    /// The monomial `prod_{rays not mapping into sigma} x_k`.
    pub fn outside_product(&self, ctr: &SemiampleContraction, sigma: usize) -> CoxPolynomial {
        let inside = ctr.rays_into(sigma);
        let idxs: Vec<usize> = (0..self.n_vars()).filter(|k| !inside.contains(k)).collect();
        let e = indicator(self.n_vars(), &idxs);
        CoxPolynomial::monomial(&self.grading, &e, Rat::one())
    }

    /// The degree `beta_1^sigma` of the product of the variables whose rays
    /// map into the target cone.
    pub fn beta1(&self, ctr: &SemiampleContraction, sigma: usize) -> ChowClass {
        self.grading.class(&indicator(self.n_vars(), &ctr.rays_into(sigma)))
    }

    /// Degree `q*beta - beta_0 + beta_1^sigma` used throughout the Hodge
    /// computation.
    pub fn r_degree(
        &self,
        beta: &ChowClass,
        ctr: &SemiampleContraction,
        sigma: usize,
        q: i64,
    ) -> ChowClass {
        let qb = self.grading.scale(q, beta);
        let shifted = self.grading.sub(&qb, &self.beta0());
        self.grading.add(&shifted, &self.beta1(ctr, sigma))
    }

    /// Slice of `R_1^sigma(f)` in degree `q*beta - beta_0 + beta_1^sigma`:
    /// the quotient basis of the colon slice by the outside-variable product.
    pub fn r1_sigma_slice(
        &self,
        f: &CoxPolynomial,
        ctr: &SemiampleContraction,
        sigma: usize,
        q: i64,
    ) -> Result<GradedSlice, Error> {
        let gens = self.jacobian_generators(f, ctr, sigma)?;
        let h = self.outside_product(ctr, sigma);
        let gamma = self.r_degree(&f.degree, ctr, sigma, q);
        self.colon_slice(&gens, &h, &gamma)
    }

    /// Slice of `R_0^sigma(f)` in an arbitrary degree.
    pub fn r0_sigma_slice(
        &self,
        f: &CoxPolynomial,
        ctr: &SemiampleContraction,
        sigma: usize,
        gamma: &ChowClass,
    ) -> Result<GradedSlice, Error> {
        let gens = self.jacobian_generators(f, ctr, sigma)?;
        self.ideal_slice(&gens, gamma)
    }

    /// The top slice `R_0^sigma(f)_{(i(sigma)+1)beta - beta_0 + beta_1^sigma}`,
    /// 1-dimensional exactly for nondegenerate `f`.
    pub fn r0_sigma_top_slice(
        &self,
        f: &CoxPolynomial,
        ctr: &SemiampleContraction,
        sigma: usize,
    ) -> Result<GradedSlice, Error> {
        let i_sig = ctr.i_sigma(sigma) as i64;
        let gamma = self.r_degree(&f.degree, ctr, sigma, i_sig + 1);
        self.r0_sigma_slice(f, ctr, sigma, &gamma)
    }

    /// Operational nondegeneracy certificate: for every target cone the top
    /// slice of `R_0^sigma(f)` is 1-dimensional and the multiplication
    /// pairing between complementary `R_1^sigma(f)` slices into it has full
    /// rank. Nondegeneracy of the pairing does not depend on the residue
    /// normalization scalar, so no residue context is needed here.
    pub fn nondegeneracy_certificate(
        &self,
        f: &CoxPolynomial,
        ctr: &SemiampleContraction,
    ) -> Result<bool, Error> {
        if f.is_zero() {
            return Ok(false);
        }
        for sigma in 0..ctr.target_faces.len() {
            let i_sig = ctr.i_sigma(sigma) as i64;
            let top = self.r0_sigma_top_slice(f, ctr, sigma)?;
            if top.quotient_dim() != 1 {
                return Ok(false);
            }
            let h = self.outside_product(ctr, sigma);
            for q in 1..=i_sig {
                let q_dual = i_sig + 1 - q;
                if q > q_dual {
                    break;
                }
                let a = self.r1_sigma_slice(f, ctr, sigma, q)?;
                let b = if q == q_dual {
                    a.clone()
                } else {
                    self.r1_sigma_slice(f, ctr, sigma, q_dual)?
                };
                if a.quotient_dim() != b.quotient_dim() {
                    return Ok(false);
                }
                if a.quotient_dim() == 0 {
                    continue;
                }
                // Pairing matrix: coefficient of (m_a * m_b * h) on the top
                // quotient monomial.
                let mut rank_ech = Echelon::new();
                for &ia in &a.quotient {
                    let ma = CoxPolynomial::monomial(&self.grading, &a.monomials[ia], Rat::one());
                    let mah = ma.mul(&h, &self.grading);
                    let mut row: SparseRow = Vec::new();
                    for (bj, &ib) in b.quotient.iter().enumerate() {
                        let mb =
                            CoxPolynomial::monomial(&self.grading, &b.monomials[ib], Rat::one());
                        let prod = mah.mul(&mb, &self.grading);
                        let res = top.reduce(&prod)?;
                        debug_assert!(res.len() <= 1, "top slice is 1-dimensional");
                        if let Some((_, v)) = res.first() {
                            row.push((bj, v.clone()));
                        }
                    }
                    rank_ech.insert(row);
                }
                if rank_ech.rank() != a.quotient_dim() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Deterministic generic polynomial of the degree of `sum a_i D_i`:
    /// all monomials of the degree with seeded pseudo-random coefficients,
    /// retried (seed incremented) until the nondegeneracy certificate passes.
    pub fn generic_polynomial(
        &self,
        a: &[Int],
        seed: u64,
    ) -> Result<CoxPolynomial, Error> {
        let gamma = self.divisor_class(a);
        let monomials = self.monomials_of_degree(&gamma)?;
        if monomials.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        if gamma.is_zero() {
            // The degree-zero slice is spanned by 1; the constant section.
            return Ok(CoxPolynomial::monomial(
                &self.grading,
                &vec![Int::zero(); self.n_vars()],
                Rat::one(),
            ));
        }
        let ctr = semiample_contraction(&self.fan, a)?;
        const TRIES: u32 = 32;
        for t in 0..TRIES {
            let f = self.sample_on_monomials(&monomials, seed + u64::from(t));
            if self.nondegeneracy_certificate(&f, &ctr)? {
                return Ok(f);
            }
        }
        Err(Error::RetryBudgetExhausted { tries: TRIES })
    }
}
