//! Cohomology of the ambient toric variety and of nondegenerate semiample
//! hypersurfaces: the Stanley-Reisner presentation of H^*(P_Sigma), the
//! integration functional, the rings A_1(X) and A_1^sigma(X), the Hodge
//! diamond with per-cell provenance, the cup product on the mixed
//! toric/residue decomposition, the Picard group report, and the component
//! divisor classes attached to contracted rays.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cox::{ChowClass, CoxPolynomial, CoxRing, GradedSlice};
use crate::error::Error;
use crate::linalg::{Echelon, RatMatrix, SparseRow};
use crate::polytope::{dot_ii, is_semiample, Fan, SemiampleContraction};
use crate::residue::{c_p_sigma, SigmaResidueContext};
use crate::{Int, Rat};

// ---------------------------------------------------------------------------
// Polynomials in the divisor classes D_1..D_n
// ---------------------------------------------------------------------------

/// A polynomial in the torus-invariant divisor classes. A monomial is the
/// sorted list of ray indices with repetition, so `D_0^2 D_3` is `[0, 0, 3]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly {
    pub terms: BTreeMap<Vec<usize>, Rat>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        TPoly::monomial(&[], Rat::one())
    }

    pub fn monomial(mono: &[usize], c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            let mut m = mono.to_vec();
            m.sort_unstable();
            terms.insert(m, c);
        }
        TPoly { terms }
    }

    /// The degree-one class of the divisor `sum a_k D_k`.
    pub fn from_divisor(a: &[Int]) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(vec![k], Rat::from_integer(c.clone()));
            }
        }
        TPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        TPoly { terms }
    }

    pub fn scale(&self, c: &Rat) -> TPoly {
        if c.is_zero() {
            return TPoly::zero();
        }
        TPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        let mut terms: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                m.sort_unstable();
                let entry = terms.entry(m.clone()).or_insert_with(Rat::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    terms.remove(&m);
                }
            }
        }
        TPoly { terms }
    }

    pub fn pow(&self, k: usize) -> TPoly {
        let mut out = TPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

/// All degree-k monomials in n variables as sorted index lists, in
/// lexicographic order.
fn monomials_of_total_degree(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((prefix, lo)) = stack.pop() {
        if prefix.len() == k {
            out.push(prefix);
            continue;
        }
        // Push in reverse so that the lexicographically first branch is
        // processed first.
        for v in (lo..n).rev() {
            let mut next = prefix.clone();
            next.push(v);
            stack.push((next, v));
        }
    }
    out
}

/// Lexicographic successor of a size-k subset of {0..n-1}.
fn next_subset(c: &mut Vec<usize>, n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// The toric cohomology ring
// ---------------------------------------------------------------------------

/// The degree-k slice of `C[D_1..D_n]/(P(Sigma) + SR(Sigma))` with its
/// canonical quotient basis.
#[derive(Debug, Clone)]
pub struct ToricCohomologySlice {
    pub k: usize,
    /// All degree-k monomials, lexicographically sorted.
    pub monomials: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    ech: Echelon,
    /// Indices of the canonical quotient-basis monomials.
    pub quotient: Vec<usize>,
}

impl ToricCohomologySlice {
    pub fn total_dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient.len()
    }

    pub fn coords(&self, p: &TPoly) -> Result<SparseRow, Error> {
        let mut row: SparseRow = Vec::with_capacity(p.terms.len());
        for (m, c) in &p.terms {
            match self.index.get(m) {
                Some(&i) => row.push((i, c.clone())),
                None => {
                    return Err(Error::InvalidInput(alloc::format!(
                        "monomial {m:?} does not have degree {}",
                        self.k
                    )))
                }
            }
        }
        row.sort_by_key(|(i, _)| *i);
        Ok(row)
    }

    /// Canonical residue modulo the relation subspace, supported on the
    /// quotient basis.
    pub fn reduce(&self, p: &TPoly) -> Result<SparseRow, Error> {
        Ok(self.ech.reduce(self.coords(p)?))
    }
}

/// Minimal non-faces of the fan up to a size bound: ray sets that span no
/// cone while every proper subset does. They generate the Stanley-Reisner
/// ideal in the degrees we slice.
fn minimal_nonfaces(fan: &Fan, max_size: usize) -> Vec<Vec<usize>> {
    let n = fan.n_rays();
    let mut out = Vec::new();
    for size in 2..=max_size.min(n) {
        let mut sub: Vec<usize> = (0..size).collect();
        loop {
            if !fan.is_cone(&sub) {
                let mut minimal = true;
                for skip in 0..size {
                    let smaller: Vec<usize> = sub
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    if !fan.is_cone(&smaller) {
                        minimal = false;
                        break;
                    }
                }
                if minimal {
                    out.push(sub.clone());
                }
            }
            if !next_subset(&mut sub, n) {
                break;
            }
        }
    }
    out
}

/// The degree-k slice of the toric cohomology ring: relations are spanned by
/// the linear forms `sum_k <m, e_k> D_k` times degree-(k-1) monomials and the
/// minimal Stanley-Reisner monomials times cofactor monomials.
pub fn toric_slice(fan: &Fan, k: usize) -> Result<ToricCohomologySlice, Error> {
    if !fan.is_complete() {
        return Err(Error::FanNotComplete);
    }
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let n = fan.n_rays();
    let d = fan.rank();
    let monomials = monomials_of_total_degree(n, k);
    let index: BTreeMap<Vec<usize>, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let mut ech = Echelon::new();
    if k >= 1 {
        let cofactors = monomials_of_total_degree(n, k - 1);
        for j in 0..d {
            for m in &cofactors {
                let mut row: SparseRow = Vec::new();
                for l in 0..n {
                    let c = &fan.ray(l)[j];
                    if c.is_zero() {
                        continue;
                    }
                    let mut prod = m.clone();
                    prod.push(l);
                    prod.sort_unstable();
                    row.push((index[&prod], Rat::from_integer(c.clone())));
                }
                row.sort_by_key(|(i, _)| *i);
                ech.insert(row);
            }
        }
    }
    for nf in minimal_nonfaces(fan, k) {
        let cofactors = monomials_of_total_degree(n, k - nf.len());
        for m in &cofactors {
            let mut prod = m.clone();
            prod.extend_from_slice(&nf);
            prod.sort_unstable();
            ech.insert(vec![(index[&prod], Rat::one())]);
        }
    }
    let quotient: Vec<usize> = (0..monomials.len()).filter(|c| !ech.is_pivot(*c)).collect();
    Ok(ToricCohomologySlice { k, monomials, index, ech, quotient })
}

/// All slices of the toric cohomology ring together with the calibrated
/// integration functional.
#[derive(Debug, Clone)]
pub struct ToricCohomology {
    pub fan: Fan,
    pub d: usize,
    slices: Vec<ToricCohomologySlice>,
    /// Multiplier turning the canonical top-basis coefficient into the
    /// integral, calibrated once on the first maximal cone.
    calibration: Rat,
}

impl ToricCohomology {
    pub fn new(fan: &Fan) -> Result<Self, Error> {
        let d = fan.rank();
        let mut slices = Vec::with_capacity(d + 1);
        for k in 0..=d {
            slices.push(toric_slice(fan, k)?);
        }
        if slices[d].quotient_dim() != 1 {
            return Err(Error::InconsistentSystem("top toric cohomology is not a line"));
        }
        let cone0 = fan.max_cones()[0].clone();
        let mult = fan.cone_multiplicity(&cone0)?;
        let top = &slices[d];
        let row = top.reduce(&TPoly::monomial(&cone0, Rat::one()))?;
        let c0 = match row.first() {
            Some((_, c)) => c.clone(),
            None => {
                return Err(Error::InconsistentSystem(
                    "maximal-cone monomial reduces to zero in top cohomology",
                ))
            }
        };
        let calibration = (Rat::one() / Rat::from_integer(mult)) / c0;
        Ok(ToricCohomology { fan: fan.clone(), d, slices, calibration })
    }

    pub fn slice(&self, k: usize) -> &ToricCohomologySlice {
        &self.slices[k]
    }

    /// The integral of a top-degree class, normalized so that the product of
    /// the divisors of any maximal cone integrates to one over its
    /// multiplicity.
    pub fn integrate(&self, p: &TPoly) -> Result<Rat, Error> {
        for m in p.terms.keys() {
            if m.len() != self.d {
                return Err(Error::InvalidInput(
                    "integrate needs a class of top cohomological degree".into(),
                ));
            }
        }
        let row = self.slices[self.d].reduce(p)?;
        Ok(match row.first() {
            Some((_, c)) => c * &self.calibration,
            None => Rat::zero(),
        })
    }
}

// ---------------------------------------------------------------------------
// A_1(X) and A_1^sigma(X)
// ---------------------------------------------------------------------------

/// The degree-(k,k) piece of `A_1(X)`: the image of multiplication by `[X]`,
/// presented by the quotient-basis monomials whose images stay independent.
#[derive(Debug, Clone)]
pub struct A1Slice {
    pub k: usize,
    pub dim: usize,
    /// Degree-k monomials whose images under multiplication by `[X]` form a
    /// basis of the slice (first independent ones in canonical order).
    pub basis: Vec<Vec<usize>>,
}

pub fn a1_slice(toric: &ToricCohomology, x: &TPoly, k: usize) -> Result<A1Slice, Error> {
    if k + 1 > toric.d {
        return Ok(A1Slice { k, dim: 0, basis: Vec::new() });
    }
    let source = toric.slice(k);
    let target = toric.slice(k + 1);
    let mut ech = Echelon::new();
    let mut basis = Vec::new();
    for &qi in &source.quotient {
        let mono = &source.monomials[qi];
        let image = TPoly::monomial(mono, Rat::one()).mul(x);
        if ech.insert(target.reduce(&image)?) {
            basis.push(mono.clone());
        }
    }
    Ok(A1Slice { k, dim: ech.rank(), basis })
}

/// The degree-(s,s) piece of `A_1^sigma(X)`: the degree-s slice of the ideal
/// `U^sigma` modulo the kernel of the integration pairing against the
/// complementary slice, twisted by `X^{i(sigma)}`.
#[derive(Debug, Clone)]
pub struct A1SigmaSlice {
    pub sigma: usize,
    pub s: usize,
    pub i_sigma: usize,
    /// Monomial basis of `U^sigma` in degree s.
    pub u_monomials: Vec<Vec<usize>>,
    /// Monomial basis of `U^sigma` in the complementary degree
    /// `d - i(sigma) - s`.
    pub v_monomials: Vec<Vec<usize>>,
    /// Pairing matrix: integral of `u * v * X^{i(sigma)}`.
    pub pairing: RatMatrix,
    /// Indices into `u_monomials` whose pairing rows form a basis.
    pub basis: Vec<usize>,
    /// The expanded class `X^{i(sigma)}`.
    pub xi: TPoly,
}

impl A1SigmaSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Pairing coordinates of an element of `U^sigma` in degree s: its
    /// integrals against the complementary monomial basis. Two elements
    /// represent the same class exactly when these rows agree.
    pub fn pair_row(&self, toric: &ToricCohomology, u: &TPoly) -> Result<Vec<Rat>, Error> {
        let mut out = Vec::with_capacity(self.v_monomials.len());
        for v in &self.v_monomials {
            let prod = u.mul(&TPoly::monomial(v, Rat::one())).mul(&self.xi);
            out.push(toric.integrate(&prod)?);
        }
        Ok(out)
    }
}

/// Generator ray sets of `U^sigma`: the cones of the fan whose relative
/// interior maps into the relative interior of the target cone.
fn u_sigma_generators(ctr: &SemiampleContraction, sigma: usize) -> Vec<Vec<usize>> {
    ctr.smallest
        .iter()
        .filter(|(_, &fidx)| fidx == sigma)
        .map(|(cone, _)| cone.clone())
        .collect()
}

fn mono_contains_set(mono: &[usize], set: &[usize]) -> bool {
    set.iter().all(|k| mono.binary_search(k).is_ok())
}

pub fn a1_sigma_slice(
    toric: &ToricCohomology,
    ctr: &SemiampleContraction,
    sigma: usize,
    s: usize,
) -> Result<A1SigmaSlice, Error> {
    if sigma >= ctr.target_faces.len() {
        return Err(Error::UnknownCone);
    }
    let i_sig = ctr.i_sigma(sigma);
    let gens = u_sigma_generators(ctr, sigma);
    let xi = TPoly::from_divisor(&ctr.divisor).pow(i_sig);
    let filter = |k: usize| -> Vec<Vec<usize>> {
        monomials_of_total_degree(toric.fan.n_rays(), k)
            .into_iter()
            .filter(|m| gens.iter().any(|g| mono_contains_set(m, g)))
            .collect()
    };
    let u_monomials = filter(s);
    // No complementary partner means a zero slice.
    if i_sig + s > toric.d {
        return Ok(A1SigmaSlice {
            sigma,
            s,
            i_sigma: i_sig,
            u_monomials,
            v_monomials: Vec::new(),
            pairing: RatMatrix::zero(0, 0),
            basis: Vec::new(),
            xi,
        });
    }
    let v_monomials = filter(toric.d - i_sig - s);
    let mut pairing = RatMatrix::zero(u_monomials.len(), v_monomials.len());
    let mut ech = Echelon::new();
    let mut basis = Vec::new();
    for (ui, um) in u_monomials.iter().enumerate() {
        let u = TPoly::monomial(um, Rat::one());
        let mut row: SparseRow = Vec::new();
        for (vi, vm) in v_monomials.iter().enumerate() {
            let prod = u.mul(&TPoly::monomial(vm, Rat::one())).mul(&xi);
            let val = toric.integrate(&prod)?;
            if !val.is_zero() {
                row.push((vi, val.clone()));
            }
            *pairing.at_mut(ui, vi) = val;
        }
        if ech.insert(row) {
            basis.push(ui);
        }
    }
    Ok(A1SigmaSlice { sigma, s, i_sigma: i_sig, u_monomials, v_monomials, pairing, basis, xi })
}

// ---------------------------------------------------------------------------
// The Hodge diamond
// ---------------------------------------------------------------------------

/// Where a cell's dimension comes from: the toric share and one entry per
/// target cone contributing `dim A_1^sigma * dim R_1^sigma > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellProvenance {
    pub toric: usize,
    /// `(sigma, dim A_1^sigma(X)_{s,s}, dim R_1^sigma(f) slice)`.
    pub residue: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct HodgeDiamond {
    /// Rank of the ambient fan; the hypersurface has dimension `d - 1` and
    /// the table covers `0 <= p, q <= d - 1`.
    pub d: usize,
    pub h: Vec<Vec<usize>>,
    pub provenance: Vec<Vec<CellProvenance>>,
}

impl HodgeDiamond {
    pub fn hodge_number(&self, p: usize, q: usize) -> usize {
        self.h[p][q]
    }
}

/// The `s` index of the decomposition for a cell and cone, when it is a
/// nonnegative integer. The constraint is `p + q = i(sigma) - 1 + 2s` with
/// `i(sigma) = i - dim(sigma)`: the codimension-one Picard description
/// (cones of dimension `i - 1` contributing at `(1,1)` with `s = 1`) pins
/// the sign of the `dim(sigma)` term.
fn s_index(p: usize, q: usize, i: usize, dim_sigma: usize) -> Option<usize> {
    let num = (p + q + 1) as i64 - i as i64 + dim_sigma as i64;
    if num < 0 || num % 2 != 0 {
        None
    } else {
        Some((num / 2) as usize)
    }
}

pub fn hodge_diamond(
    ring: &CoxRing,
    f: &CoxPolynomial,
    ctr: &SemiampleContraction,
) -> Result<HodgeDiamond, Error> {
    if f.degree != ring.divisor_class(&ctr.divisor) {
        return Err(Error::InvalidInput(
            "polynomial degree does not match the contraction divisor".into(),
        ));
    }
    if !ring.nondegeneracy_certificate(f, ctr)? {
        return Err(Error::DegenerateHypersurface("hodge_diamond needs a nondegenerate f"));
    }
    let toric = ToricCohomology::new(&ring.fan)?;
    let d = toric.d;
    let i = ctr.kappa;
    let x = TPoly::from_divisor(&ctr.divisor);
    let mut toric_dims = Vec::with_capacity(d);
    for p in 0..d {
        toric_dims.push(a1_slice(&toric, &x, p)?.dim);
    }
    let mut a_cache: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut r_cache: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    let mut h = vec![vec![0usize; d]; d];
    let mut provenance =
        vec![vec![CellProvenance { toric: 0, residue: Vec::new() }; d]; d];
    for p in 0..d {
        for q in 0..d {
            let mut total = 0;
            let mut cell = CellProvenance { toric: 0, residue: Vec::new() };
            if p == q {
                cell.toric = toric_dims[p];
                total += cell.toric;
            }
            for sigma in 0..ctr.target_faces.len() {
                let dim_sigma = ctr.target_cone_dim(sigma);
                let s = match s_index(p, q, i, dim_sigma) {
                    Some(s) => s,
                    None => continue,
                };
                let a_dim = match a_cache.get(&(sigma, s)) {
                    Some(&v) => v,
                    None => {
                        let v = a1_sigma_slice(&toric, ctr, sigma, s)?.dim();
                        a_cache.insert((sigma, s), v);
                        v
                    }
                };
                if a_dim == 0 {
                    continue;
                }
                let qr = q as i64 - s as i64 + 1;
                // Nonpositive grading indices have non-effective degree, so
                // the slice is zero without computing it.
                if qr < 1 {
                    continue;
                }
                let r_dim = match r_cache.get(&(sigma, qr)) {
                    Some(&v) => v,
                    None => {
                        let v = ring.r1_sigma_slice(f, ctr, sigma, qr)?.quotient_dim();
                        r_cache.insert((sigma, qr), v);
                        v
                    }
                };
                if r_dim == 0 {
                    continue;
                }
                total += a_dim * r_dim;
                cell.residue.push((sigma, a_dim, r_dim));
            }
            h[p][q] = total;
            provenance[p][q] = cell;
        }
    }
    Ok(HodgeDiamond { d, h, provenance })
}

// ---------------------------------------------------------------------------
// Hodge classes and the cup product
// ---------------------------------------------------------------------------

/// One summand `u (x) g` of the residue part, attached to a target cone.
/// The `twist` exponent tracks accumulated `(-2 pi sqrt(-1))` powers coming
/// from the product scalars.
#[derive(Debug, Clone)]
pub struct ResidueTerm {
    pub sigma: usize,
    pub twist: u32,
    pub u: TPoly,
    pub g: CoxPolynomial,
}

/// An element of the mixed decomposition in bidegree `(p, q)`. The toric
/// part is kept per twist exponent because product scalars of distinct
/// cones can carry distinct transcendental factors.
#[derive(Debug, Clone)]
pub struct HodgeClass {
    pub p: usize,
    pub q: usize,
    pub toric: BTreeMap<u32, TPoly>,
    pub residue: Vec<ResidueTerm>,
}

impl HodgeClass {
    pub fn zero(p: usize, q: usize) -> Self {
        HodgeClass { p, q, toric: BTreeMap::new(), residue: Vec::new() }
    }

    pub fn toric_class(p: usize, t: TPoly) -> Self {
        let mut toric = BTreeMap::new();
        if !t.is_zero() {
            toric.insert(0, t);
        }
        HodgeClass { p, q: p, toric, residue: Vec::new() }
    }

    pub fn residue_class(p: usize, q: usize, sigma: usize, u: TPoly, g: CoxPolynomial) -> Self {
        HodgeClass {
            p,
            q,
            toric: BTreeMap::new(),
            residue: vec![ResidueTerm { sigma, twist: 0, u, g }],
        }
    }

    fn add_toric(&mut self, twist: u32, t: &TPoly) {
        if t.is_zero() {
            return;
        }
        let entry = self.toric.entry(twist).or_insert_with(TPoly::zero);
        *entry = entry.add(t);
        if entry.is_zero() {
            self.toric.remove(&twist);
        }
    }
}

/// Canonical invariants of a Hodge class: the toric part reduced through
/// multiplication by `[X]` (which presents `A_1(X)` faithfully) and, per
/// cone, the pairing-row/quotient-coordinate matrix of the residue part.
/// Two classes are equal exactly when these agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalClass {
    pub p: usize,
    pub q: usize,
    /// `(twist, monomial index in the degree-(p+1) slice) -> coefficient`.
    pub toric: BTreeMap<(u32, usize), Rat>,
    /// `(sigma, twist, complementary monomial index, slice monomial index)
    /// -> coefficient`.
    pub residue: BTreeMap<(usize, u32, usize, usize), Rat>,
}

/// Shared state for cup products on one hypersurface: the ambient ring, the
/// toric cohomology, and a residue context per target cone.
pub struct HodgeAlgebra {
    pub ring: CoxRing,
    pub toric: ToricCohomology,
    pub ctr: SemiampleContraction,
    pub f: CoxPolynomial,
    pub x: TPoly,
    contexts: BTreeMap<usize, SigmaResidueContext>,
}

impl HodgeAlgebra {
    pub fn new(
        ring: &CoxRing,
        f: &CoxPolynomial,
        ctr: &SemiampleContraction,
    ) -> Result<Self, Error> {
        if !ring.nondegeneracy_certificate(f, ctr)? {
            return Err(Error::DegenerateHypersurface("cup products need a nondegenerate f"));
        }
        let toric = ToricCohomology::new(&ring.fan)?;
        let mut contexts = BTreeMap::new();
        for sigma in 0..ctr.target_faces.len() {
            contexts.insert(sigma, SigmaResidueContext::new(ring, f, ctr, sigma)?);
        }
        Ok(HodgeAlgebra {
            ring: ring.clone(),
            toric,
            ctr: ctr.clone(),
            f: f.clone(),
            x: TPoly::from_divisor(&ctr.divisor),
            contexts,
        })
    }

    pub fn context(&self, sigma: usize) -> &SigmaResidueContext {
        &self.contexts[&sigma]
    }

    /// The index q with `degree = q beta - beta_0 + beta_1^sigma`, if any.
    fn q_index(&self, sigma: usize, degree: &ChowClass) -> Option<i64> {
        let i = self.ctr.kappa as i64;
        (-2..=i + 3).find(|&q| {
            self.ring.r_degree(&self.f.degree, &self.ctr, sigma, q) == *degree
        })
    }

    /// The cup product per the decomposition rules: toric times toric is the
    /// ring product, toric times residue multiplies the u-part, residue
    /// parts over one cone use the residue scalar (codimension at least two)
    /// or the two-term projection formula (codimension one), and residue
    /// parts over distinct cones multiply to zero.
    pub fn cup(&self, a: &HodgeClass, b: &HodgeClass) -> Result<HodgeClass, Error> {
        let mut out = HodgeClass::zero(a.p + b.p, a.q + b.q);
        for (ta, pa) in &a.toric {
            for (tb, pb) in &b.toric {
                out.add_toric(ta + tb, &pa.mul(pb));
            }
        }
        let mut mixed = |toric_part: &BTreeMap<u32, TPoly>, terms: &[ResidueTerm]| {
            for (tw, tp) in toric_part {
                for term in terms {
                    let u = tp.mul(&term.u);
                    if !u.is_zero() {
                        out.residue.push(ResidueTerm {
                            sigma: term.sigma,
                            twist: tw + term.twist,
                            u,
                            g: term.g.clone(),
                        });
                    }
                }
            }
        };
        mixed(&a.toric, &b.residue);
        mixed(&b.toric, &a.residue);
        let i = self.ctr.kappa;
        for ta in &a.residue {
            for tb in &b.residue {
                if ta.sigma != tb.sigma {
                    continue;
                }
                let sigma = ta.sigma;
                let dim_sigma = self.ctr.target_cone_dim(sigma);
                let i_sig = self.ctr.i_sigma(sigma);
                let ctx = self.context(sigma);
                let gh = ta.g.mul(&tb.g, &self.ring.grading);
                let uv = ta.u.mul(&tb.u);
                let twist = ta.twist + tb.twist;
                if dim_sigma + 1 < i {
                    let res = ctx.res_sigma(&self.ring, &gh)?;
                    if res.is_zero() {
                        continue;
                    }
                    let r = self
                        .q_index(sigma, &ta.g.degree)
                        .ok_or_else(|| {
                            Error::InvalidInput(
                                "residue term degree is not of the form q*beta - beta_0 + beta_1"
                                    .into(),
                            )
                        })?
                        - 1;
                    if r < 0 || r as usize >= i_sig {
                        return Err(Error::InvalidInput(
                            "nonzero residue pairing outside the scalar range".into(),
                        ));
                    }
                    let c = c_p_sigma(r as usize, i_sig)?;
                    let toric_part = uv.mul(&self.x.pow(i_sig - 1)).scale(&(&c.q * &res));
                    out.add_toric(twist + c.t, &toric_part);
                } else if dim_sigma + 1 == i {
                    let res = ctx.res_sigma(&self.ring, &gh)?;
                    if !res.is_zero() {
                        out.add_toric(twist, &uv.scale(&-res));
                    }
                    let qa = self.q_index(sigma, &ta.g.degree);
                    let qb = self.q_index(sigma, &tb.g.degree);
                    // The projection p_sigma lives in the degree reached by
                    // two q = 1 factors; other degrees have no projection
                    // summand.
                    if qa.unwrap_or(0) + qb.unwrap_or(0) == 2 {
                        let pg = ctx.p_sigma(&self.ring, &self.ctr, &gh, None)?;
                        if !pg.is_zero() && !uv.is_zero() {
                            out.residue.push(ResidueTerm { sigma, twist, u: uv, g: pg });
                        }
                    }
                } else {
                    return Err(Error::Unsupported(
                        "no product rule for target cones of codimension zero",
                    ));
                }
            }
        }
        Ok(out)
    }

    /// Canonical invariants of a class; also validates the bidegree
    /// bookkeeping of every residue term.
    pub fn canonical(&self, a: &HodgeClass) -> Result<CanonicalClass, Error> {
        let d = self.toric.d;
        let i = self.ctr.kappa;
        let mut toric_map: BTreeMap<(u32, usize), Rat> = BTreeMap::new();
        for (tw, tp) in &a.toric {
            if tp.is_zero() {
                continue;
            }
            if a.p != a.q {
                return Err(Error::InvalidInput(
                    "toric part of a class with p != q must vanish".into(),
                ));
            }
            for m in tp.terms.keys() {
                if m.len() != a.p {
                    return Err(Error::InvalidInput(
                        "toric part degree does not match the bidegree".into(),
                    ));
                }
            }
            // Multiplication by [X] embeds A_1(X) into the ambient ring one
            // degree up; classes beyond the top reduce to zero.
            if a.p + 1 > d {
                continue;
            }
            let image = tp.mul(&self.x);
            for (col, c) in self.toric.slice(a.p + 1).reduce(&image)? {
                let entry = toric_map.entry((*tw, col)).or_insert_with(Rat::zero);
                *entry += c;
                if entry.is_zero() {
                    toric_map.remove(&(*tw, col));
                }
            }
        }
        let mut residue_map: BTreeMap<(usize, u32, usize, usize), Rat> = BTreeMap::new();
        let mut a_slices: BTreeMap<(usize, usize), A1SigmaSlice> = BTreeMap::new();
        let mut r_slices: BTreeMap<(usize, i64), GradedSlice> = BTreeMap::new();
        for term in &a.residue {
            let sigma = term.sigma;
            let dim_sigma = self.ctr.target_cone_dim(sigma);
            let s = s_index(a.p, a.q, i, dim_sigma).ok_or_else(|| {
                Error::InvalidInput("residue term has no valid s for this bidegree".into())
            })?;
            for m in term.u.terms.keys() {
                if m.len() != s {
                    return Err(Error::InvalidInput(
                        "u-part degree does not match the s index".into(),
                    ));
                }
            }
            let qg = a.q as i64 - s as i64 + 1;
            if self.ring.r_degree(&self.f.degree, &self.ctr, sigma, qg) != term.g.degree {
                return Err(Error::InvalidInput(
                    "g-part degree does not match (q - s + 1) beta - beta_0 + beta_1".into(),
                ));
            }
            if !a_slices.contains_key(&(sigma, s)) {
                a_slices.insert((sigma, s), a1_sigma_slice(&self.toric, &self.ctr, sigma, s)?);
            }
            let a_slice = &a_slices[&(sigma, s)];
            let pair = a_slice.pair_row(&self.toric, &term.u)?;
            if !r_slices.contains_key(&(sigma, qg)) {
                r_slices.insert(
                    (sigma, qg),
                    self.ring.r1_sigma_slice(&self.f, &self.ctr, sigma, qg)?,
                );
            }
            let g_red = r_slices[&(sigma, qg)].reduce(&term.g)?;
            for (vi, pv) in pair.iter().enumerate() {
                if pv.is_zero() {
                    continue;
                }
                for (mi, gc) in &g_red {
                    let key = (sigma, term.twist, vi, *mi);
                    let entry = residue_map.entry(key).or_insert_with(Rat::zero);
                    *entry += pv * gc;
                    if entry.is_zero() {
                        residue_map.remove(&key);
                    }
                }
            }
        }
        Ok(CanonicalClass { p: a.p, q: a.q, toric: toric_map, residue: residue_map })
    }

    pub fn classes_equal(&self, a: &HodgeClass, b: &HodgeClass) -> Result<bool, Error> {
        if a.p != b.p || a.q != b.q {
            return Ok(false);
        }
        Ok(self.canonical(a)? == self.canonical(b)?)
    }

    /// The integral over the hypersurface of a purely toric class of top
    /// bidegree: `int_X u = int_P u * X`.
    pub fn integrate_toric(&self, u: &TPoly) -> Result<Rat, Error> {
        self.toric.integrate(&u.mul(&self.x))
    }
}

/// Free-function form of the cup product.
pub fn cup_product(
    algebra: &HodgeAlgebra,
    a: &HodgeClass,
    b: &HodgeClass,
) -> Result<HodgeClass, Error> {
    algebra.cup(a, b)
}

// ---------------------------------------------------------------------------
// The Picard group report
// ---------------------------------------------------------------------------

/// One residue summand of the Picard decomposition: the components of
/// `X` intersected with the divisor of a contracted ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardSummand {
    pub sigma: usize,
    pub ray: usize,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct PicardReport {
    /// Rays whose divisor classes form a basis of the toric share modulo
    /// the span of the linear relations and the fully contracted rays.
    pub toric_basis: Vec<usize>,
    pub toric_rank: usize,
    pub summands: Vec<PicardSummand>,
    pub rank: usize,
    /// The displayed dimension formula, evaluated independently.
    pub formula_rank: i64,
    /// Whether the Pic = H^2 identification is asserted (semiample index
    /// above three); below that only the h^{1,1} decomposition is reported.
    pub identification_asserted: bool,
}

pub fn picard_group(
    ring: &CoxRing,
    f: &CoxPolynomial,
    ctr: &SemiampleContraction,
) -> Result<PicardReport, Error> {
    if f.degree != ring.divisor_class(&ctr.divisor) {
        return Err(Error::InvalidInput(
            "polynomial degree does not match the contraction divisor".into(),
        ));
    }
    if !ring.nondegeneracy_certificate(f, ctr)? {
        return Err(Error::DegenerateHypersurface("picard_group needs a nondegenerate f"));
    }
    let n = ring.n_vars();
    let d = ring.fan.rank();
    let i = ctr.kappa;
    // The subspace C: the image of the characters plus every divisor whose
    // ray is contracted into the interior of a full-dimensional target cone.
    let mut ech = Echelon::new();
    for j in 0..d {
        let mut row: SparseRow = Vec::new();
        for l in 0..n {
            let c = &ring.fan.ray(l)[j];
            if !c.is_zero() {
                row.push((l, Rat::from_integer(c.clone())));
            }
        }
        ech.insert(row);
    }
    let mut interior_full = 0i64;
    for sigma in ctr.target_cones_of_dim(i) {
        for l in ctr.rays_into_interior(sigma) {
            ech.insert(vec![(l, Rat::one())]);
            interior_full += 1;
        }
    }
    let toric_basis: Vec<usize> = (0..n).filter(|l| !ech.is_pivot(*l)).collect();
    let toric_rank = toric_basis.len();
    let mut summands = Vec::new();
    let mut formula_residue = 0i64;
    if i >= 1 {
        for sigma in ctr.target_cones_of_dim(i - 1) {
            let interior = ctr.rays_into_interior(sigma);
            if interior.is_empty() {
                continue;
            }
            let dim = ring.r1_sigma_slice(f, ctr, sigma, 1)?.quotient_dim();
            for k in interior {
                summands.push(PicardSummand { sigma, ray: k, dim });
                formula_residue += dim as i64;
            }
        }
    }
    let rank = toric_rank + summands.iter().map(|s| s.dim).sum::<usize>();
    let formula_rank = n as i64 - d as i64 - interior_full + formula_residue;
    Ok(PicardReport {
        toric_basis,
        toric_rank,
        summands,
        rank,
        formula_rank,
        identification_asserted: i > 3,
    })
}

// ---------------------------------------------------------------------------
// Component classes of X intersected with a contracted divisor
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootMode {
    Exact,
    Numeric { tolerance: f64 },
}

/// The component difference classes. Numeric terms carry complex
/// coefficients as `[re, im]` pairs and are not reduced in the slice.
#[derive(Debug, Clone)]
pub enum ComponentClasses {
    Exact(Vec<CoxPolynomial>),
    Numeric(Vec<Vec<(Vec<Int>, [f64; 2])>>),
}

/// Divisors of a positive integer by trial division.
fn divisors(n: &Int) -> Vec<Int> {
    let mut primes: Vec<(Int, u32)> = Vec::new();
    let mut m = n.abs();
    let mut p = Int::from(2);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            let mut e = 0;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if m > Int::one() {
        primes.push((m, 1));
    }
    let mut out = vec![Int::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut power = Int::one();
            for _ in 0..=e {
                next.push(d * &power);
                power *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

/// All rational roots of the polynomial with the given coefficients
/// (constant first), with multiplicity, via candidate testing and synthetic
/// deflation. Errors when the polynomial does not split over the rationals.
fn rational_roots(coeffs: &[Rat]) -> Result<Vec<Rat>, Error> {
    let mut cur: Vec<Rat> = coeffs.to_vec();
    while cur.last().map(|c| c.is_zero()).unwrap_or(false) {
        cur.pop();
    }
    let mut roots = Vec::new();
    while cur.len() > 1 {
        // Clear denominators for the root bound candidates.
        let mut lcm = Int::one();
        for c in &cur {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<Int> =
            cur.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let c0 = ints.first().expect("nonempty").clone();
        let cl = ints.last().expect("nonempty").clone();
        if c0.is_zero() {
            // Zero root: deflate directly.
            roots.push(Rat::zero());
            cur.remove(0);
            continue;
        }
        let mut found = None;
        'search: for num in divisors(&c0) {
            for den in divisors(&cl) {
                for sign in [1i64, -1] {
                    let cand = Rat::new(&num * Int::from(sign), den.clone());
                    let mut val = Rat::zero();
                    for c in cur.iter().rev() {
                        val = val * &cand + c;
                    }
                    if val.is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        let root = match found {
            Some(r) => r,
            None => return Err(Error::NonSplitPolynomial),
        };
        // Synthetic division by (y - root), highest coefficient first.
        let mut quot = vec![Rat::zero(); cur.len() - 1];
        let mut carry = Rat::zero();
        for j in (0..cur.len() - 1).rev() {
            carry = &cur[j + 1] + &carry * &root;
            quot[j] = carry.clone();
        }
        roots.push(root);
        cur = quot;
    }
    Ok(roots)
}

type Complex = [f64; 2];

fn cmul(a: Complex, b: Complex) -> Complex {
    [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]]
}

fn csub(a: Complex, b: Complex) -> Complex {
    [a[0] - b[0], a[1] - b[1]]
}

fn cdiv(a: Complex, b: Complex) -> Complex {
    let n = b[0] * b[0] + b[1] * b[1];
    [(a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n]
}

fn cabs(a: Complex) -> f64 {
    libm::sqrt(a[0] * a[0] + a[1] * a[1])
}

/// All complex roots via the Durand-Kerner iteration on the monic rescaling.
fn complex_roots(coeffs: &[Rat], tolerance: f64) -> Result<Vec<Complex>, Error> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg].to_f64().ok_or(Error::OutOfRange("coefficient overflows f64"))?;
    let monic: Vec<f64> = coeffs
        .iter()
        .map(|c| c.to_f64().map(|v| v / lead))
        .collect::<Option<Vec<f64>>>()
        .ok_or(Error::OutOfRange("coefficient overflows f64"))?;
    let eval = |z: Complex| -> Complex {
        let mut v: Complex = [0.0, 0.0];
        for c in monic.iter().rev() {
            v = cmul(v, z);
            v[0] += c;
        }
        v
    };
    // Standard staggered initial guesses on a non-real spiral.
    let mut z: Vec<Complex> = Vec::with_capacity(deg);
    let mut w: Complex = [1.0, 0.0];
    let seed: Complex = [0.4, 0.9];
    for _ in 0..deg {
        w = cmul(w, seed);
        z.push(w);
    }
    for _ in 0..1000 {
        let mut delta = 0.0f64;
        for k in 0..deg {
            let mut denom: Complex = [1.0, 0.0];
            for j in 0..deg {
                if j != k {
                    denom = cmul(denom, csub(z[k], z[j]));
                }
            }
            let step = cdiv(eval(z[k]), denom);
            z[k] = csub(z[k], step);
            delta = delta.max(cabs(step));
        }
        if delta < tolerance * 1e-3 || delta < 1e-15 {
            break;
        }
    }
    z.sort_by(|a, b| {
        (a[0], a[1]).partial_cmp(&(b[0], b[1])).expect("roots are finite")
    });
    Ok(z)
}

/// The component difference classes of `X` intersected with `D_k` for a ray
/// contracted into the interior of a codimension-one target cone: the edge
/// polynomial is factored over its roots and each consecutive difference of
/// components yields one class in the `R_1^sigma(f)` slice of index one.
pub fn component_classes(
    ring: &CoxRing,
    f: &CoxPolynomial,
    ctr: &SemiampleContraction,
    k: usize,
    mode: RootMode,
) -> Result<ComponentClasses, Error> {
    if k >= ring.n_vars() {
        return Err(Error::OutOfRange("ray index out of range"));
    }
    if f.degree != ring.divisor_class(&ctr.divisor) {
        return Err(Error::InvalidInput(
            "polynomial degree does not match the contraction divisor".into(),
        ));
    }
    let sigma = ctr.smallest[&vec![k]];
    if ctr.i_sigma(sigma) != 1 {
        return Err(Error::Unsupported(
            "ray is not contracted into the interior of a codimension-one target cone",
        ));
    }
    let face = &ctr.target_faces[sigma];
    if face.vertex_ids.len() != 2 {
        return Err(Error::InconsistentSystem("codimension-one face is not a segment"));
    }
    // Vertices of Gamma_sigma in M; semiample Cartier polytopes have lattice
    // vertices.
    let to_int = |v: &Vec<Rat>| -> Result<Vec<Int>, Error> {
        v.iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::InconsistentSystem("polytope vertex is not a lattice point"))
                }
            })
            .collect()
    };
    let v0 = to_int(&ctr.delta.vertices[face.vertex_ids[0]])?;
    let v1 = to_int(&ctr.delta.vertices[face.vertex_ids[1]])?;
    let vol_rat = ctr.gamma_volume(sigma);
    if !vol_rat.is_integer() {
        return Err(Error::InconsistentSystem("edge volume is not an integer"));
    }
    let vol = vol_rat
        .to_integer()
        .to_usize()
        .ok_or(Error::OutOfRange("edge volume overflows usize"))?;
    if vol == 0 {
        return Err(Error::InconsistentSystem("edge has zero lattice length"));
    }
    // Direction m_1 with the lattice points of the edge at v0 + s * m_1.
    let m1: Vec<Int> = v0
        .iter()
        .zip(&v1)
        .map(|(a, b)| (b - a) / Int::from(vol as i64))
        .collect();
    let n = ring.n_vars();
    let exponent = |s: usize| -> Vec<Int> {
        (0..n)
            .map(|l| {
                let m: Vec<Int> = v0
                    .iter()
                    .zip(&m1)
                    .map(|(a, b)| a + b * Int::from(s as i64))
                    .collect();
                &ctr.divisor[l] + dot_ii(&m, ring.fan.ray(l))
            })
            .collect()
    };
    let coeff_of = |e: &Vec<Int>| -> Rat {
        f.terms
            .iter()
            .find(|(m, _)| m == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    };
    let coeffs: Vec<Rat> = (0..=vol).map(|s| coeff_of(&exponent(s))).collect();
    if coeffs[0].is_zero() || coeffs[vol].is_zero() {
        return Err(Error::DegenerateHypersurface(
            "edge polynomial misses a vertex coefficient",
        ));
    }
    if vol == 1 {
        return Ok(match mode {
            RootMode::Exact => ComponentClasses::Exact(Vec::new()),
            RootMode::Numeric { .. } => ComponentClasses::Numeric(Vec::new()),
        });
    }
    let rays_in = ctr.rays_into(sigma);
    let outside: Vec<usize> = (0..n).filter(|l| !rays_in.contains(l)).collect();
    // Exponent of x^{D(m_s)} / prod_out x: interior edge points clear every
    // outside variable.
    let class_exponent = |s: usize| -> Result<Vec<Int>, Error> {
        let mut e = exponent(s);
        for &l in &outside {
            e[l] -= 1;
            if e[l].is_negative() {
                return Err(Error::InconsistentSystem(
                    "interior edge point does not clear the outside variables",
                ));
            }
        }
        Ok(e)
    };
    let degree = ring.r_degree(&f.degree, ctr, sigma, 1);
    match mode {
        RootMode::Exact => {
            let mut roots = rational_roots(&coeffs)?;
            if roots.len() != vol {
                return Err(Error::NonSplitPolynomial);
            }
            roots.sort();
            for w in roots.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::RepeatedRoot);
                }
            }
            let lead = coeffs[vol].clone();
            let slice = ring.r1_sigma_slice(f, ctr, sigma, 1)?;
            let mut out = Vec::with_capacity(vol - 1);
            for l in 0..vol - 1 {
                // (lambda_{l+1} - lambda_l) * lead * y * prod_{s != l, l+1}
                // (y - lambda_s), expanded in the edge coordinate y.
                let mut poly = vec![(&roots[l + 1] - &roots[l]) * &lead];
                for (s, root) in roots.iter().enumerate() {
                    if s == l || s == l + 1 {
                        continue;
                    }
                    let mut next = vec![Rat::zero(); poly.len() + 1];
                    for (j, c) in poly.iter().enumerate() {
                        next[j + 1] += c;
                        next[j] -= c * root;
                    }
                    poly = next;
                }
                let mut terms = Vec::new();
                for (j, c) in poly.iter().enumerate() {
                    if !c.is_zero() {
                        terms.push((class_exponent(j + 1)?, c.clone()));
                    }
                }
                let g = CoxPolynomial::new(&ring.grading, terms, degree.clone())?;
                let reduced = slice.reduce(&g)?;
                let rep_terms: Vec<(Vec<Int>, Rat)> = reduced
                    .into_iter()
                    .map(|(i, c)| (slice.monomials[i].clone(), c))
                    .collect();
                out.push(CoxPolynomial::new(&ring.grading, rep_terms, degree.clone())?);
            }
            Ok(ComponentClasses::Exact(out))
        }
        RootMode::Numeric { tolerance } => {
            let roots = complex_roots(&coeffs, tolerance)?;
            for a in 0..roots.len() {
                for b in a + 1..roots.len() {
                    if cabs(csub(roots[a], roots[b])) < tolerance {
                        return Err(Error::RepeatedRoot);
                    }
                }
            }
            let lead = coeffs[vol]
                .to_f64()
                .ok_or(Error::OutOfRange("coefficient overflows f64"))?;
            let mut out = Vec::with_capacity(vol - 1);
            for l in 0..vol - 1 {
                let scale: Complex =
                    cmul(csub(roots[l + 1], roots[l]), [lead, 0.0]);
                let mut poly: Vec<Complex> = vec![scale];
                for (s, root) in roots.iter().enumerate() {
                    if s == l || s == l + 1 {
                        continue;
                    }
                    let mut next: Vec<Complex> = vec![[0.0, 0.0]; poly.len() + 1];
                    for (j, c) in poly.iter().enumerate() {
                        next[j + 1] = [next[j + 1][0] + c[0], next[j + 1][1] + c[1]];
                        let sub = cmul(*c, *root);
                        next[j] = [next[j][0] - sub[0], next[j][1] - sub[1]];
                    }
                    poly = next;
                }
                let mut terms = Vec::new();
                for (j, c) in poly.iter().enumerate() {
                    if cabs(*c) > tolerance {
                        terms.push((class_exponent(j + 1)?, *c));
                    }
                }
                out.push(terms);
            }
            Ok(ComponentClasses::Numeric(out))
        }
    }
}

// ---------------------------------------------------------------------------
// Intersection numbers
// ---------------------------------------------------------------------------

/// The intersection number of a semiample divisor power with an orbit
/// closure: `int [D]^k [V(tau)]` with `[V(tau)] = mult(tau) prod D_rho`.
pub fn intersection_number(
    fan: &Fan,
    a: &[Int],
    k: usize,
    tau: &[usize],
) -> Result<Rat, Error> {
    let d = fan.rank();
    if a.len() != fan.n_rays() {
        return Err(Error::DimensionMismatch { expected: fan.n_rays(), got: a.len() });
    }
    if k > d {
        return Err(Error::OutOfRange("power exceeds the ambient dimension"));
    }
    if tau.len() != d - k {
        return Err(Error::DimensionMismatch { expected: d - k, got: tau.len() });
    }
    if !fan.is_cone(tau) {
        return Err(Error::UnknownCone);
    }
    if !is_semiample(fan, a)? {
        return Err(Error::NotSemiample { cone: 0, reason: "divisor is not semiample" });
    }
    let toric = ToricCohomology::new(fan)?;
    let mult = fan.cone_multiplicity(tau)?;
    let v_tau = TPoly::monomial(tau, Rat::from_integer(mult));
    let p = TPoly::from_divisor(a).pow(k).mul(&v_tau);
    toric.integrate(&p)
}
