//! Fans, cones, lattice polytopes, torus-invariant divisors, semiample
//! contractions, reflexive duality, and regular subdivisions.
//!
//! All geometry is exact: vertices are rationals, normals are integers, and
//! volumes are normalized lattice volumes (the unit simplex has volume 1, so
//! an edge's volume is its lattice length and a vertex counts as 1).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::linalg::{
    hnf_rows, kernel_saturation, primitive_from_rational, primitive_vector, smith_normal_form,
    solve_linear, Echelon, IntMatrix, RatMatrix,
};
use crate::{Int, Rat};

pub fn dot_ii(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_ri(a: &[Rat], b: &[Int]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * Rat::from_integer(y.clone())).sum()
}

pub fn dot_rr(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

fn is_int_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

fn to_int_vec(v: &[Rat]) -> Vec<Int> {
    v.iter().map(|x| x.to_integer()).collect()
}

/// Affine rank of a point set (dimension of its affine hull; 0 for a single
/// point). Returns `None` for an empty set.
pub fn affine_dim(points: &[Vec<Rat>]) -> Option<usize> {
    let first = points.first()?;
    let mut ech = Echelon::new();
    for p in &points[1..] {
        let diff: Vec<Rat> = p.iter().zip(first).map(|(a, b)| a - b).collect();
        ech.insert(crate::linalg::sparse_from_dense(&diff));
    }
    Some(ech.rank())
}

// ---------------------------------------------------------------------------
// Fans
// ---------------------------------------------------------------------------

/// A rational simplicial-or-not fan given by primitive rays and maximal cones.
///
/// Cones are referred to by sorted lists of ray indices. Validation caches
/// the `complete`/`simplicial` flags; construction fails when two maximal
/// cones visibly overlap beyond a common face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<Int>>,
    max_cones: Vec<Vec<usize>>,
    complete: bool,
    simplicial: bool,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<Vec<Int>>, max_cones: Vec<Vec<usize>>) -> Result<Self, Error> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: r.len() });
            }
            if r.iter().all(Zero::is_zero) {
                return Err(Error::BadRay { index: i, reason: "zero vector" });
            }
            if primitive_vector(r) != *r {
                return Err(Error::BadRay { index: i, reason: "not primitive" });
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    return Err(Error::BadRay { index: j, reason: "duplicate ray" });
                }
            }
        }
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for c in max_cones {
            let mut c: Vec<usize> = c;
            c.sort_unstable();
            c.dedup();
            if c.iter().any(|&k| k >= rays.len()) {
                return Err(Error::InvalidInput(format!("cone ray index out of range in {c:?}")));
            }
            cones.push(c);
        }
        cones.sort();
        cones.dedup();
        let mut fan =
            Fan { rank, rays, max_cones: cones, complete: false, simplicial: false };
        let (complete, simplicial) = fan.validate()?;
        fan.complete = complete;
        fan.simplicial = simplicial;
        Ok(fan)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn ray(&self, i: usize) -> &[Int] {
        &self.rays[i]
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    fn ray_matrix(&self, cone: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(&cone.iter().map(|&k| self.rays[k].clone()).collect::<Vec<_>>())
    }

    fn cone_rank(&self, cone: &[usize]) -> usize {
        let mut ech = Echelon::new();
        for &k in cone {
            ech.insert(crate::linalg::sparse_from_dense(&to_rat_vec(&self.rays[k])));
        }
        ech.rank()
    }

    /// Recompute `(complete, simplicial)`. Errors only on a witnessed
    /// overlap between maximal cones.
    pub fn validate(&self) -> Result<(bool, bool), Error> {
        let simplicial = self.max_cones.iter().all(|c| self.cone_rank(c) == c.len());
        if !simplicial {
            // Completeness certification below relies on simpliciality; the
            // hypersurface pipeline never accepts non-simplicial fans anyway.
            return Ok((false, false));
        }
        // Full-dimensional, simplicial maximal cones are necessary for
        // completeness.
        if self.max_cones.is_empty() || self.max_cones.iter().any(|c| c.len() != self.rank) {
            self.check_overlaps()?;
            return Ok((false, true));
        }
        // Ridge condition: every (d-1)-face of a maximal cone is shared by
        // exactly two maximal cones sitting on opposite sides.
        let mut ridges: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for (pos, &extra) in cone.iter().enumerate() {
                let mut ridge = cone.clone();
                ridge.remove(pos);
                ridges.entry(ridge).or_default().push((ci, extra));
            }
        }
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); self.max_cones.len()];
        let mut ridge_ok = true;
        for (ridge, owners) in &ridges {
            if owners.len() != 2 {
                ridge_ok = false;
                continue;
            }
            // In rank 1 the ridge is the zero cone; give the kernel the
            // right ambient dimension.
            let ridge_matrix = if ridge.is_empty() {
                IntMatrix::zero(1, self.rank)
            } else {
                self.ray_matrix(ridge)
            };
            let normal = kernel_saturation(&ridge_matrix);
            debug_assert_eq!(normal.rows, 1, "ridge of a simplicial cone has a unique normal");
            let n: Vec<Int> = normal.row(0).to_vec();
            let s0 = dot_ii(&n, &self.rays[owners[0].1]).signum();
            let s1 = dot_ii(&n, &self.rays[owners[1].1]).signum();
            if (&s0 * &s1) != Int::from(-1) {
                ridge_ok = false;
                continue;
            }
            adjacency[owners[0].0].push(owners[1].0);
            adjacency[owners[1].0].push(owners[0].0);
        }
        self.check_overlaps()?;
        if !ridge_ok {
            return Ok((false, true));
        }
        // Connectivity of the ridge graph.
        let mut seen = vec![false; self.max_cones.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &n in &adjacency[c] {
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        Ok((seen.iter().all(|&s| s), true))
    }

    /// Coverage certificate doubling as overlap detection: the barycenter of
    /// every maximal cone must lie in that cone only.
    fn check_overlaps(&self) -> Result<(), Error> {
        for (i, cone) in self.max_cones.iter().enumerate() {
            if self.cone_rank(cone) != cone.len() {
                continue;
            }
            let bary: Vec<Rat> = (0..self.rank)
                .map(|j| {
                    cone.iter().map(|&k| Rat::from_integer(self.rays[k][j].clone())).sum()
                })
                .collect();
            for (j, other) in self.max_cones.iter().enumerate() {
                if i != j && self.cone_contains(other, &bary) {
                    return Err(Error::OverlappingCones { first: i, second: j });
                }
            }
        }
        Ok(())
    }

    /// Exact membership of a rational point in a simplicial cone.
    pub fn cone_contains(&self, cone: &[usize], point: &[Rat]) -> bool {
        // Solve sum lambda_k e_k = point and check lambda >= 0.
        let cols: Vec<Vec<Rat>> = (0..self.rank)
            .map(|j| cone.iter().map(|&k| Rat::from_integer(self.rays[k][j].clone())).collect())
            .collect();
        let a = RatMatrix::from_rows(&cols);
        match solve_linear(&a, point) {
            Ok(Some(lambda)) => lambda.iter().all(|l| !l.is_negative()),
            _ => false,
        }
    }

    /// All cones of the fan (as sorted ray-index lists), including the zero
    /// cone, deduplicated across maximal cones. Requires a simplicial fan,
    /// where every generator subset spans a face.
    pub fn all_cones(&self) -> Result<Vec<Vec<usize>>, Error> {
        if !self.simplicial {
            return Err(Error::NotSimplicial);
        }
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cone in &self.max_cones {
            let n = cone.len();
            for mask in 0..(1u32 << n) {
                let sub: Vec<usize> =
                    (0..n).filter(|&b| mask & (1 << b) != 0).map(|b| cone[b]).collect();
                out.insert(sub);
            }
        }
        let mut cones: Vec<Vec<usize>> = out.into_iter().collect();
        cones.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
        Ok(cones)
    }

    pub fn cones_of_dim(&self, k: usize) -> Result<Vec<Vec<usize>>, Error> {
        Ok(self.all_cones()?.into_iter().filter(|c| c.len() == k).collect())
    }

    /// Multiplicity of a simplicial cone: the index of the subgroup generated
    /// by its rays inside the lattice they span (product of the nonzero Smith
    /// diagonal entries of the ray matrix).
    pub fn cone_multiplicity(&self, cone: &[usize]) -> Result<Int, Error> {
        if cone.is_empty() {
            return Ok(Int::one());
        }
        if self.cone_rank(cone) != cone.len() {
            return Err(Error::NotSimplicial);
        }
        let (_, s, _) = smith_normal_form(&self.ray_matrix(cone));
        let mut m = Int::one();
        let n = s.rows.min(s.cols);
        for i in 0..n {
            if !s.at(i, i).is_zero() {
                m *= s.at(i, i);
            }
        }
        Ok(m)
    }

    /// Do the given rays span a cone of the fan (a face of a maximal cone)?
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        let mut sorted = rays.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.max_cones.iter().any(|c| sorted.iter().all(|k| c.contains(k)))
    }
}

// ---------------------------------------------------------------------------
// Lattice polytopes
// ---------------------------------------------------------------------------

/// A face of a polytope: its vertices, dimension, and the facets tight on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub vertex_ids: Vec<usize>,
    pub dim: usize,
    pub tight: Vec<usize>,
}

/// A bounded rational polytope with exact V- and H-representations.
///
/// `facets` are the irredundant facet inequalities `n . x + c >= 0` with
/// primitive integer normals; `equalities` cut out the affine hull when the
/// polytope is lower-dimensional. The empty polytope has no vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    pub rank: usize,
    pub vertices: Vec<Vec<Rat>>,
    pub facets: Vec<(Vec<Int>, Rat)>,
    pub equalities: Vec<(Vec<Int>, Rat)>,
}

impl LatticePolytope {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the polytope; `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        affine_dim(&self.vertices)
    }

    /// Exact vertex enumeration from integer inequalities `a . x >= -b`,
    /// via incremental double description inside a Cramer-bound box.
    pub fn from_inequalities(rank: usize, ineqs: &[(Vec<Int>, Int)]) -> Result<Self, Error> {
        // Bound every vertex coordinate: vertices solve rank x rank integer
        // systems, so a Hadamard-style bound suffices.
        let mut max_a = Int::one();
        let mut max_b = Int::one();
        for (a, b) in ineqs {
            if a.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: a.len() });
            }
            for x in a {
                if x.abs() > max_a {
                    max_a = x.abs();
                }
            }
            if b.abs() > max_b {
                max_b = b.abs();
            }
        }
        let mut bound = max_b;
        let mut fact = Int::one();
        for i in 1..=rank {
            fact *= Int::from(i);
        }
        for _ in 0..rank.saturating_sub(1) {
            bound *= &max_a;
        }
        bound = bound * fact * Int::from(2) + Int::from(2);

        // Box corners and box inequalities.
        let mut points: Vec<Vec<Rat>> = Vec::new();
        for mask in 0..(1u32 << rank) {
            points.push(
                (0..rank)
                    .map(|j| {
                        if mask & (1 << j) != 0 {
                            Rat::from_integer(bound.clone())
                        } else {
                            Rat::from_integer(-bound.clone())
                        }
                    })
                    .collect(),
            );
        }
        let mut processed: Vec<(Vec<Int>, Int)> = Vec::new();
        for j in 0..rank {
            let mut pos = vec![Int::zero(); rank];
            pos[j] = Int::one();
            processed.push((pos.clone(), bound.clone()));
            let neg: Vec<Int> = pos.iter().map(|x| -x.clone()).collect();
            processed.push((neg, bound.clone()));
        }

        let eval = |a: &[Int], b: &Int, p: &[Rat]| -> Rat {
            dot_ri(p, a) + Rat::from_integer(b.clone())
        };

        for (a, b) in ineqs {
            let vals: Vec<Rat> = points.iter().map(|p| eval(a, b, p)).collect();
            if vals.iter().any(Signed::is_negative) {
                let mut next: Vec<Vec<Rat>> = Vec::new();
                for (p, v) in points.iter().zip(&vals) {
                    if !v.is_negative() {
                        next.push(p.clone());
                    }
                }
                for (i, vi) in vals.iter().enumerate() {
                    if !vi.is_positive() {
                        continue;
                    }
                    for (j, vj) in vals.iter().enumerate() {
                        if !vj.is_negative() {
                            continue;
                        }
                        // Intersection of the segment [p_i, p_j] with the
                        // hyperplane a.x + b = 0.
                        let t = vi / (vi - vj);
                        let q: Vec<Rat> = points[i]
                            .iter()
                            .zip(&points[j])
                            .map(|(x, y)| x + &t * (y - x))
                            .collect();
                        next.push(q);
                    }
                }
                next.sort();
                next.dedup();
                points = next;
            }
            processed.push((a.clone(), b.clone()));
            // Prune to actual vertices: a point of the intermediate polytope
            // is a vertex exactly when its tight constraints have full rank.
            points.retain(|p| {
                let mut ech = Echelon::new();
                for (aa, bb) in &processed {
                    if eval(aa, bb, p).is_zero() {
                        ech.insert(crate::linalg::sparse_from_dense(&to_rat_vec(aa)));
                    }
                }
                ech.rank() == rank
            });
            if points.is_empty() {
                break;
            }
        }

        // Reject vertices pinned only by the artificial box.
        for p in &points {
            let mut ech = Echelon::new();
            for (a, b) in ineqs {
                if eval(a, b, p).is_zero() {
                    ech.insert(crate::linalg::sparse_from_dense(&to_rat_vec(a)));
                }
            }
            let interior_rank = ech.rank();
            if interior_rank < rank {
                // Either the feasible set is unbounded or this point is held
                // by box constraints only; both mean "not a polytope".
                if p.iter().any(|x| x.abs() == Rat::from_integer(bound.clone())) {
                    return Err(Error::InvalidInput(
                        "inequality system does not bound a polytope".into(),
                    ));
                }
            }
        }
        points.sort();
        points.dedup();
        Self::from_vertex_set(rank, points)
    }

    /// Build a polytope as the convex hull of the given points.
    pub fn from_vertices(rank: usize, points: &[Vec<Rat>]) -> Result<Self, Error> {
        for p in points {
            if p.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: p.len() });
            }
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        Self::from_vertex_set(rank, pts)
    }

    /// Common construction path: `points` already lie in convex position or
    /// will be pruned to their hull's vertices.
    fn from_vertex_set(rank: usize, points: Vec<Vec<Rat>>) -> Result<Self, Error> {
        if points.is_empty() {
            return Ok(LatticePolytope {
                rank,
                vertices: Vec::new(),
                facets: Vec::new(),
                equalities: Vec::new(),
            });
        }
        let dim = affine_dim(&points).expect("nonempty");
        let p0 = points[0].clone();

        // Affine-hull equalities: canonical HNF basis of the integer normals
        // vanishing on all directions.
        let mut dir_rows: Vec<Vec<Int>> = Vec::new();
        for p in &points[1..] {
            let d: Vec<Rat> = p.iter().zip(&p0).map(|(a, b)| a - b).collect();
            if let Some(v) = primitive_from_rational(&d) {
                dir_rows.push(v);
            }
        }
        let equalities: Vec<(Vec<Int>, Rat)> = if dir_rows.is_empty() {
            // A single point: every coordinate direction is an equality.
            let id = IntMatrix::identity(rank);
            (0..rank).map(|j| (id.row(j).to_vec(), -p0[j].clone())).collect()
        } else {
            let normals = kernel_saturation(&IntMatrix::from_rows(&dir_rows));
            (0..normals.rows)
                .map(|r| {
                    let n = normals.row(r).to_vec();
                    let c = -dot_ri(&p0, &n);
                    (n, c)
                })
                .collect()
        };

        // Coordinates inside the affine hull, over the induced lattice.
        // L rows: basis of the saturated direction lattice; R: right inverse.
        let rinv = if dim == rank {
            IntMatrix::identity(rank)
        } else if dim == 0 {
            IntMatrix::zero(rank, 0)
        } else {
            let normals = kernel_saturation(&IntMatrix::from_rows(&dir_rows));
            let lbasis = kernel_saturation(&normals);
            debug_assert_eq!(lbasis.rows, dim);
            let (u, _s, v) = smith_normal_form(&lbasis);
            // L = U^-1 [I 0] V^-1, so R := V[:, 0..dim] * U satisfies L R = I.
            let mut vcols = IntMatrix::zero(rank, dim);
            for r in 0..rank {
                for c in 0..dim {
                    *vcols.at_mut(r, c) = v.at(r, c).clone();
                }
            }
            vcols.mul(&u)
        };
        let to_local = |p: &[Rat]| -> Vec<Rat> {
            (0..dim)
                .map(|c| {
                    let mut s = Rat::zero();
                    for j in 0..rank {
                        s += (&p[j] - &p0[j]) * Rat::from_integer(rinv.at(j, c).clone());
                    }
                    s
                })
                .collect()
        };
        let locals: Vec<Vec<Rat>> = points.iter().map(|p| to_local(p)).collect();

        // Facets in local coordinates by exhaustive supporting-hyperplane
        // search over point subsets; point counts here are desk-scale.
        let mut facet_keys: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut facets: Vec<(Vec<Int>, Rat)> = Vec::new();
        let mut vertex_flags = vec![false; points.len()];
        if dim == 0 {
            vertex_flags[0] = true;
        } else {
            // Candidate hyperplanes: affine spans of (dim)-subsets with
            // affine rank dim-1.
            let idx: Vec<usize> = (0..points.len()).collect();
            let mut chosen = Vec::new();
            enumerate_subsets(&idx, dim, &mut chosen, &mut |subset| {
                let sub: Vec<Vec<Rat>> = subset.iter().map(|&i| locals[i].clone()).collect();
                if affine_dim(&sub) != Some(dim - 1) {
                    return;
                }
                // Normal in local coordinates: vanishes on the differences.
                let base = &sub[0];
                let rows: Vec<Vec<Rat>> = sub[1..]
                    .iter()
                    .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
                    .collect();
                let dirs: Vec<Vec<Int>> = rows
                    .iter()
                    .filter_map(|r| primitive_from_rational(r))
                    .collect();
                let normal_mat = if dirs.is_empty() {
                    IntMatrix::zero(0, dim)
                } else {
                    IntMatrix::from_rows(&dirs)
                };
                let ker = kernel_saturation(&normal_mat);
                if ker.rows != 1 {
                    return;
                }
                let mut n: Vec<Int> = ker.row(0).to_vec();
                let mut c = -dot_ri(base, &n);
                // Orient so all points satisfy n.x + c >= 0; reject if the
                // hyperplane is not supporting.
                let mut pos = false;
                let mut neg = false;
                for l in &locals {
                    let v = dot_ri(l, &n) + &c;
                    if v.is_positive() {
                        pos = true;
                    }
                    if v.is_negative() {
                        neg = true;
                    }
                }
                if pos && neg {
                    return;
                }
                if neg {
                    n = n.iter().map(|x| -x.clone()).collect();
                    c = -c;
                }
                let tight: Vec<usize> = (0..points.len())
                    .filter(|&i| (dot_ri(&locals[i], &n) + &c).is_zero())
                    .collect();
                if facet_keys.insert(tight.clone()) {
                    // Lift the local normal to ambient coordinates through R.
                    let n_amb: Vec<Int> = (0..rank)
                        .map(|j| {
                            let mut s = Int::zero();
                            for cdx in 0..dim {
                                s += rinv.at(j, cdx) * &n[cdx];
                            }
                            s
                        })
                        .collect();
                    let n_amb = reduce_normal(&n_amb, &equalities);
                    // The offset is recomputed from scratch because the
                    // equality-lattice reduction shifts the normal by
                    // functionals that are constant on the affine hull.
                    let off = -points.iter().map(|p| dot_ri(p, &n_amb)).min().expect("nonempty");
                    facets.push((n_amb, off));
                }
            });
            // Vertices: points whose tight facet set has local rank dim.
            for i in 0..points.len() {
                let mut ech = Echelon::new();
                for (n, c) in &facets {
                    if (dot_ri(&points[i], n) + c).is_zero() {
                        ech.insert(crate::linalg::sparse_from_dense(&to_rat_vec(n)));
                    }
                }
                for (n, _c) in &equalities {
                    ech.insert(crate::linalg::sparse_from_dense(&to_rat_vec(n)));
                }
                vertex_flags[i] = ech.rank() == rank;
            }
        }
        let vertices: Vec<Vec<Rat>> = points
            .iter()
            .zip(&vertex_flags)
            .filter(|(_, &f)| f)
            .map(|(p, _)| p.clone())
            .collect();
        // Facet list re-keyed on vertices only, canonical order.
        let mut final_facets: BTreeMap<Vec<usize>, (Vec<Int>, Rat)> = BTreeMap::new();
        for (n, c) in facets {
            let tight: Vec<usize> = (0..vertices.len())
                .filter(|&i| (dot_ri(&vertices[i], &n) + &c).is_zero())
                .collect();
            let sub: Vec<Vec<Rat>> = tight.iter().map(|&i| vertices[i].clone()).collect();
            if dim >= 1 && affine_dim(&sub) == Some(dim - 1) {
                final_facets.entry(tight).or_insert((n, c));
            }
        }
        Ok(LatticePolytope {
            rank,
            vertices,
            facets: final_facets.into_values().collect(),
            equalities,
        })
    }

    /// Is the point inside the polytope?
    pub fn contains(&self, p: &[Rat]) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        if self.vertices.len() == 1 {
            return self.vertices[0] == p;
        }
        self.equalities.iter().all(|(n, c)| (dot_ri(p, n) + c).is_zero())
            && self.facets.iter().all(|(n, c)| !(dot_ri(p, n) + c).is_negative())
    }

    /// Is the point in the (relative) interior?
    pub fn contains_in_interior(&self, p: &[Rat]) -> bool {
        if self.vertices.len() <= 1 {
            return false;
        }
        self.equalities.iter().all(|(n, c)| (dot_ri(p, n) + c).is_zero())
            && self.facets.iter().all(|(n, c)| (dot_ri(p, n) + c).is_positive())
    }

    /// All lattice points of the polytope, sorted.
    pub fn lattice_points(&self) -> Vec<Vec<Int>> {
        self.points_with(|_tight| true)
    }

    /// Lattice points in the relative interior.
    pub fn interior_lattice_points(&self) -> Vec<Vec<Int>> {
        self.points_with(|tight| tight.is_empty())
    }

    fn points_with<F: Fn(&[usize]) -> bool>(&self, keep: F) -> Vec<Vec<Int>> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let mut lo = vec![Int::zero(); self.rank];
        let mut hi = vec![Int::zero(); self.rank];
        for j in 0..self.rank {
            let min = self.vertices.iter().map(|v| &v[j]).min().expect("nonempty");
            let max = self.vertices.iter().map(|v| &v[j]).max().expect("nonempty");
            lo[j] = min.ceil().to_integer();
            hi[j] = max.floor().to_integer();
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        'scan: loop {
            let p: Vec<Rat> = to_rat_vec(&cur);
            let ok_eq = self.equalities.iter().all(|(n, c)| (dot_ri(&p, n) + c).is_zero());
            if ok_eq {
                let tight: Vec<usize> = self
                    .facets
                    .iter()
                    .enumerate()
                    .filter(|(_, (n, c))| (dot_ri(&p, n) + c).is_zero())
                    .map(|(i, _)| i)
                    .collect();
                let inside =
                    self.facets.iter().all(|(n, c)| !(dot_ri(&p, n) + c).is_negative());
                if inside && keep(&tight) {
                    out.push(cur.clone());
                }
            }
            // Single-point polytopes have no facets: handle directly.
            if self.facets.is_empty() && self.vertices.len() == 1 {
                out.clear();
                if is_int_vec(&self.vertices[0]) && keep(&[]) {
                    out.push(to_int_vec(&self.vertices[0]));
                }
                break 'scan;
            }
            let mut j = 0;
            loop {
                if j == self.rank {
                    break 'scan;
                }
                cur[j] += 1;
                if cur[j] <= hi[j] {
                    break;
                }
                cur[j] = lo[j].clone();
                j += 1;
            }
        }
        out.sort();
        out
    }

    /// The full face lattice (every nonempty face, including the polytope
    /// itself and the vertices), sorted by dimension then vertex set.
    pub fn faces(&self) -> Vec<Face> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<Vec<usize>> = vec![all];
        let mut out: Vec<Face> = Vec::new();
        while let Some(vs) = queue.pop() {
            if vs.is_empty() || !seen.insert(vs.clone()) {
                continue;
            }
            let coords: Vec<Vec<Rat>> = vs.iter().map(|&i| self.vertices[i].clone()).collect();
            let fdim = affine_dim(&coords).expect("nonempty");
            let tight: Vec<usize> = self
                .facets
                .iter()
                .enumerate()
                .filter(|(_, (n, c))| vs.iter().all(|&i| (dot_ri(&self.vertices[i], n) + c).is_zero()))
                .map(|(i, _)| i)
                .collect();
            out.push(Face { vertex_ids: vs.clone(), dim: fdim, tight });
            for (n, c) in &self.facets {
                let sub: Vec<usize> = vs
                    .iter()
                    .copied()
                    .filter(|&i| (dot_ri(&self.vertices[i], n) + c).is_zero())
                    .collect();
                if !sub.is_empty() && sub != vs {
                    queue.push(sub);
                }
            }
        }
        out.sort_by(|a, b| (a.dim, &a.vertex_ids).cmp(&(b.dim, &b.vertex_ids)));
        out
    }

    /// Lattice points lying on the given face.
    pub fn face_lattice_points(&self, face: &Face) -> Vec<Vec<Int>> {
        self.points_with(|tight| face.tight.iter().all(|f| tight.contains(f)))
    }

    /// Lattice points in the relative interior of the given face.
    pub fn face_interior_lattice_points(&self, face: &Face) -> Vec<Vec<Int>> {
        if face.dim == 0 {
            // A vertex is its own relative interior.
            return self.face_lattice_points(face);
        }
        self.points_with(|tight| tight == face.tight.as_slice())
    }

    /// Triangulation of a face into simplices of vertex ids, by recursive
    /// coning from the smallest vertex id over non-containing subfacets.
    pub fn triangulate_face(&self, faces: &[Face], face: &Face) -> Vec<Vec<usize>> {
        if face.dim == 0 {
            return vec![face.vertex_ids.clone()];
        }
        let v0 = *face.vertex_ids.first().expect("nonempty face");
        let mut out = Vec::new();
        for sub in faces {
            if sub.dim + 1 == face.dim
                && sub.vertex_ids.iter().all(|v| face.vertex_ids.contains(v))
                && sub.vertex_ids != face.vertex_ids
                && !sub.vertex_ids.contains(&v0)
            {
                for mut s in self.triangulate_face(faces, sub) {
                    s.push(v0);
                    s.sort_unstable();
                    out.push(s);
                }
            }
        }
        out
    }

    /// Normalized lattice volume of a face (unit simplex = 1; vertices = 1;
    /// an edge's volume is its lattice length), measured in the lattice
    /// induced on the face's affine hull.
    pub fn normalized_volume(&self, faces: &[Face], face: &Face) -> Rat {
        if face.dim == 0 {
            return Rat::one();
        }
        // Local lattice coordinates on the face's affine hull.
        let vs: Vec<Vec<Rat>> = face.vertex_ids.iter().map(|&i| self.vertices[i].clone()).collect();
        let p0 = vs[0].clone();
        let mut dirs: Vec<Vec<Int>> = Vec::new();
        for p in &vs[1..] {
            let d: Vec<Rat> = p.iter().zip(&p0).map(|(a, b)| a - b).collect();
            if let Some(v) = primitive_from_rational(&d) {
                dirs.push(v);
            }
        }
        let normals = kernel_saturation(&IntMatrix::from_rows(&dirs));
        let lbasis = kernel_saturation(&normals);
        let k = face.dim;
        debug_assert_eq!(lbasis.rows, k);
        let (u, _s, v) = smith_normal_form(&lbasis);
        let mut vcols = IntMatrix::zero(self.rank, k);
        for r in 0..self.rank {
            for c in 0..k {
                *vcols.at_mut(r, c) = v.at(r, c).clone();
            }
        }
        let rinv = vcols.mul(&u);
        let local = |p: &[Rat]| -> Vec<Rat> {
            (0..k)
                .map(|c| {
                    let mut s = Rat::zero();
                    for j in 0..self.rank {
                        s += (&p[j] - &p0[j]) * Rat::from_integer(rinv.at(j, c).clone());
                    }
                    s
                })
                .collect()
        };
        let mut vol = Rat::zero();
        for simplex in self.triangulate_face(faces, face) {
            let base = local(&self.vertices[simplex[0]]);
            let rows: Vec<Vec<Rat>> = simplex[1..]
                .iter()
                .map(|&i| {
                    local(&self.vertices[i]).iter().zip(&base).map(|(a, b)| a - b).collect()
                })
                .collect();
            vol += det_rat(&rows).abs();
        }
        vol
    }

    /// Polar dual `{n : <m, n> >= -1 for all m in the polytope}`.
    /// Requires the origin in the interior.
    pub fn polar_dual(&self) -> Result<LatticePolytope, Error> {
        if self.dim() != Some(self.rank) {
            return Err(Error::OriginNotInterior);
        }
        let zero = vec![Rat::zero(); self.rank];
        if !self.contains_in_interior(&zero) {
            return Err(Error::OriginNotInterior);
        }
        let mut ineqs = Vec::new();
        for v in &self.vertices {
            let mut lcm = Int::one();
            for x in v {
                lcm = lcm.lcm(x.denom());
            }
            let a: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            ineqs.push((a, lcm));
        }
        LatticePolytope::from_inequalities(self.rank, &ineqs)
    }

    /// Reflexivity: full-dimensional, origin the unique interior lattice
    /// point, and the polar dual has integral vertices.
    pub fn is_reflexive(&self) -> Result<bool, Error> {
        if self.dim() != Some(self.rank) {
            return Err(Error::OriginNotInterior);
        }
        let zero = vec![Rat::zero(); self.rank];
        if !self.contains_in_interior(&zero) {
            return Ok(false);
        }
        let interior = self.interior_lattice_points();
        if interior.len() != 1 {
            return Ok(false);
        }
        let dual = self.polar_dual()?;
        Ok(dual.vertices.iter().all(|v| is_int_vec(v)))
    }

    /// Translate by an integer vector.
    pub fn translate(&self, t: &[Int]) -> LatticePolytope {
        LatticePolytope {
            rank: self.rank,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(t).map(|(x, d)| x + Rat::from_integer(d.clone())).collect())
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|(n, c)| (n.clone(), c - dot_ri(&to_rat_vec(t), n)))
                .collect(),
            equalities: self
                .equalities
                .iter()
                .map(|(n, c)| (n.clone(), c - dot_ri(&to_rat_vec(t), n)))
                .collect(),
        }
    }
}

/// Reduce an ambient normal modulo the lattice spanned by equality normals,
/// so lifted facet normals are canonical for lower-dimensional polytopes.
fn reduce_normal(n: &[Int], equalities: &[(Vec<Int>, Rat)]) -> Vec<Int> {
    if equalities.is_empty() {
        return n.to_vec();
    }
    let basis = hnf_rows(&equalities.iter().map(|(e, _)| e.clone()).collect::<Vec<_>>());
    let mut v = n.to_vec();
    for row in &basis {
        let lead = row.iter().position(|x| !x.is_zero()).expect("nonzero HNF row");
        let q = Int::div_floor(&v[lead], &row[lead]);
        if !q.is_zero() {
            for c in 0..v.len() {
                let t = &row[c] * &q;
                v[c] -= t;
            }
        }
    }
    v
}

fn det_rat(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    if n == 0 {
        return Rat::one();
    }
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let piv = match (k..n).find(|&r| !m[r][k].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if piv != k {
            m.swap(k, piv);
            det = -det;
        }
        let p = m[k][k].clone();
        det *= &p;
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let f = &m[r][k] / &p;
            for c in k..n {
                let t = &f * &m[k][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

fn enumerate_subsets<F: FnMut(&[usize])>(
    items: &[usize],
    size: usize,
    chosen: &mut Vec<usize>,
    f: &mut F,
) {
    if chosen.len() == size {
        f(chosen);
        return;
    }
    let start = chosen.last().map_or(0, |&c| {
        items.iter().position(|&x| x == c).expect("chosen from items") + 1
    });
    for i in start..items.len() {
        if items.len() - i < size - chosen.len() {
            break;
        }
        chosen.push(items[i]);
        enumerate_subsets(items, size, chosen, f);
        chosen.pop();
    }
}

// ---------------------------------------------------------------------------
// Divisors and semiampleness
// ---------------------------------------------------------------------------

/// The polytope of sections of `D = sum a_i D_i`:
/// `{m : <m, e_i> >= -a_i for all rays}`.
pub fn polytope_from_divisor(fan: &Fan, a: &[Int]) -> Result<LatticePolytope, Error> {
    if a.len() != fan.n_rays() {
        return Err(Error::DimensionMismatch { expected: fan.n_rays(), got: a.len() });
    }
    if !fan.is_complete() {
        return Err(Error::FanNotComplete);
    }
    let ineqs: Vec<(Vec<Int>, Int)> =
        (0..fan.n_rays()).map(|i| (fan.ray(i).to_vec(), a[i].clone())).collect();
    LatticePolytope::from_inequalities(fan.rank(), &ineqs)
}

/// Cartier data: for each maximal cone, the unique `m` with
/// `<m, e_i> = -a_i` on the cone's rays. `None` when some `m` is not integral.
pub fn cartier_data(fan: &Fan, a: &[Int]) -> Result<Option<Vec<Vec<Int>>>, Error> {
    if !fan.is_complete() || !fan.is_simplicial() {
        return Err(if fan.is_complete() { Error::NotSimplicial } else { Error::FanNotComplete });
    }
    let mut out = Vec::new();
    for cone in fan.max_cones() {
        let rows: Vec<Vec<Rat>> =
            cone.iter().map(|&k| to_rat_vec(fan.ray(k))).collect();
        let b: Vec<Rat> = cone.iter().map(|&k| -Rat::from_integer(a[k].clone())).collect();
        let m = solve_linear(&RatMatrix::from_rows(&rows), &b)?
            .expect("full-dimensional simplicial cone determines m uniquely");
        if !is_int_vec(&m) {
            return Ok(None);
        }
        out.push(to_int_vec(&m));
    }
    Ok(Some(out))
}

/// Semiampleness: Cartier plus all Cartier points inside the divisor
/// polytope (global generation).
pub fn is_semiample(fan: &Fan, a: &[Int]) -> Result<bool, Error> {
    let Some(ms) = cartier_data(fan, a)? else { return Ok(false) };
    let delta = polytope_from_divisor(fan, a)?;
    if delta.is_empty() {
        return Ok(false);
    }
    Ok(ms.iter().all(|m| delta.contains(&to_rat_vec(m))))
}

/// Iitaka dimension of a semiample divisor: the dimension of its polytope.
pub fn iitaka_dimension(fan: &Fan, a: &[Int]) -> Result<usize, Error> {
    if !is_semiample(fan, a)? {
        return Err(Error::NotSemiample { cone: 0, reason: "divisor is not semiample" });
    }
    Ok(polytope_from_divisor(fan, a)?.dim().expect("semiample divisors have sections"))
}

// ---------------------------------------------------------------------------
// Semiample contraction
// ---------------------------------------------------------------------------

/// The contraction associated with a semiample divisor: the quotient lattice
/// projection, the target normal fan (cones indexed by faces of the divisor
/// polytope), and the smallest-cone map on all cones of the source fan.
#[derive(Debug, Clone)]
pub struct SemiampleContraction {
    pub fan: Fan,
    pub divisor: Vec<Int>,
    /// Iitaka dimension, the rank of the target lattice.
    pub kappa: usize,
    /// Projection matrix N -> N_D (kappa x d).
    pub pi: IntMatrix,
    /// The divisor polytope in the source M lattice.
    pub delta: LatticePolytope,
    /// Base vertex used to translate the polytope into M_D coordinates.
    pub m0: Vec<Int>,
    /// The translated polytope in M_D coordinates; full-dimensional.
    pub delta_q: LatticePolytope,
    /// Faces of `delta_q`; face j is the target cone of dimension
    /// `kappa - face.dim`. The whole polytope is the zero cone.
    pub target_faces: Vec<Face>,
    /// Images of the source rays in N_D.
    pub ray_images: Vec<Vec<Int>>,
    /// Smallest target cone (face index) containing the image of each cone
    /// of the source fan.
    pub smallest: BTreeMap<Vec<usize>, usize>,
}

pub fn semiample_contraction(fan: &Fan, a: &[Int]) -> Result<SemiampleContraction, Error> {
    if !is_semiample(fan, a)? {
        return Err(Error::NotSemiample { cone: 0, reason: "divisor is not semiample" });
    }
    let d = fan.rank();
    let delta = polytope_from_divisor(fan, a)?;
    if delta.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let kappa = delta.dim().expect("nonempty");

    // N' = saturated kernel of the pairing against the span of the polytope.
    let v0 = &delta.vertices[0];
    let mut dirs: Vec<Vec<Int>> = Vec::new();
    for p in &delta.vertices[1..] {
        let diff: Vec<Rat> = p.iter().zip(v0).map(|(a, b)| a - b).collect();
        if let Some(v) = primitive_from_rational(&diff) {
            dirs.push(v);
        }
    }
    let dir_mat = if dirs.is_empty() { IntMatrix::zero(0, d) } else { IntMatrix::from_rows(&dirs) };
    let nprime = kernel_saturation(&dir_mat);
    debug_assert_eq!(nprime.rows, d - kappa);

    // Projection pi: N -> N/N' = Z^kappa. With U * K * V = [I 0] for the
    // saturated kernel basis K, the coordinates w = V^T n put N' at the
    // first d - kappa slots, so the last kappa rows of V^T project with
    // kernel exactly N'.
    let pi = if kappa == d {
        IntMatrix::identity(d)
    } else if kappa == 0 {
        IntMatrix::zero(0, d)
    } else {
        let (_, _, v) = smith_normal_form(&nprime);
        let rows: Vec<Vec<Int>> = (d - kappa..d)
            .map(|c| (0..d).map(|r| v.at(r, c).clone()).collect())
            .collect();
        IntMatrix::from_rows(&rows)
    };

    // Sanity: pi annihilates N'.
    for r in 0..nprime.rows {
        let img = pi.mul_vec(nprime.row(r));
        debug_assert!(img.iter().all(Zero::is_zero), "projection must kill N'");
    }

    // Translate the polytope to a lattice vertex and express it in the dual
    // lattice M_D of N_D: with S an integer right inverse of pi (pi S = I),
    // the coordinates mu_c(m) = <m - m0, column c of S> satisfy
    // <mu, pi(n)> = <m - m0, n> for all n, because m - m0 annihilates N'.
    let m0_rat = delta
        .vertices
        .iter()
        .find(|v| is_int_vec(v))
        .ok_or(Error::NotSemiample { cone: 0, reason: "polytope has no lattice vertex" })?
        .clone();
    let m0 = to_int_vec(&m0_rat);
    // Right inverse S (d x kappa) of pi over the integers.
    let s_right = if kappa == 0 {
        IntMatrix::zero(d, 0)
    } else {
        let (u2, _s2, v2) = smith_normal_form(&pi);
        // pi = U2^-1 [I 0] V2^-1  =>  S = V2[:, 0..kappa] * U2.
        let mut vcols = IntMatrix::zero(d, kappa);
        for r in 0..d {
            for c in 0..kappa {
                *vcols.at_mut(r, c) = v2.at(r, c).clone();
            }
        }
        vcols.mul(&u2)
    };
    debug_assert!({
        let prod = pi.mul(&s_right);
        prod == IntMatrix::identity(kappa)
    });
    // M_D coordinates: mu_c(m) = <m - m0, column c of S>.
    let to_md = |m: &[Rat]| -> Vec<Rat> {
        (0..kappa)
            .map(|c| {
                let mut s = Rat::zero();
                for j in 0..d {
                    s += (&m[j] - Rat::from_integer(m0[j].clone()))
                        * Rat::from_integer(s_right.at(j, c).clone());
                }
                s
            })
            .collect()
    };
    let q_vertices: Vec<Vec<Rat>> = delta.vertices.iter().map(|v| to_md(v)).collect();
    let delta_q = LatticePolytope::from_vertices(kappa, &q_vertices)?;
    debug_assert_eq!(delta_q.dim(), Some(kappa));

    let target_faces = delta_q.faces();
    let ray_images: Vec<Vec<Int>> =
        (0..fan.n_rays()).map(|k| pi.mul_vec(fan.ray(k))).collect();

    // Smallest-cone map for every cone of the source fan: the target cone
    // whose relative interior contains the sum of the images of the cone's
    // rays. The argmin face of <., s> over delta_q is exactly that cone.
    let mut smallest = BTreeMap::new();
    for cone in fan.all_cones()? {
        let s: Vec<Int> = (0..kappa)
            .map(|j| cone.iter().map(|&k| ray_images[k][j].clone()).sum())
            .collect();
        let fidx = argmin_face(&delta_q, &target_faces, &s)?;
        // Fan-map check: every generator image must lie in this cone.
        for &k in &cone {
            if !target_cone_contains(&delta_q, &target_faces[fidx], &to_rat_vec(&ray_images[k])) {
                return Err(Error::InconsistentSystem("contraction is not a map of fans"));
            }
        }
        smallest.insert(cone, fidx);
    }

    Ok(SemiampleContraction {
        fan: fan.clone(),
        divisor: a.to_vec(),
        kappa,
        pi,
        delta,
        m0,
        delta_q,
        target_faces,
        ray_images,
        smallest,
    })
}

/// Membership of a point in the normal-fan cone attached to a face: the
/// minimum of `<., v>` over the polytope must be attained on all of the face.
pub fn target_cone_contains(poly: &LatticePolytope, face: &Face, v: &[Rat]) -> bool {
    let vals: Vec<Rat> = poly.vertices.iter().map(|m| dot_rr(m, v)).collect();
    let min = vals.iter().min().expect("nonempty").clone();
    face.vertex_ids.iter().all(|&i| vals[i] == min)
}

/// Index of the face whose normal cone's relative interior contains `v`:
/// the argmin face of `<., v>`.
pub fn argmin_face(
    poly: &LatticePolytope,
    faces: &[Face],
    v: &[Int],
) -> Result<usize, Error> {
    let vr = to_rat_vec(v);
    let vals: Vec<Rat> = poly.vertices.iter().map(|m| dot_rr(m, &vr)).collect();
    let min = vals.iter().min().expect("nonempty").clone();
    let argmin: Vec<usize> =
        (0..vals.len()).filter(|&i| vals[i] == min).collect();
    faces
        .iter()
        .position(|f| f.vertex_ids == argmin)
        .ok_or(Error::InconsistentSystem("argmin vertex set is not a face"))
}

impl SemiampleContraction {
    /// Dimension of the target cone indexed by `face_idx`.
    pub fn target_cone_dim(&self, face_idx: usize) -> usize {
        self.kappa - self.target_faces[face_idx].dim
    }

    /// `i(sigma) = kappa - dim sigma` for the target cone.
    pub fn i_sigma(&self, face_idx: usize) -> usize {
        self.kappa - self.target_cone_dim(face_idx)
    }

    /// Target cones of a given dimension, as face indices.
    pub fn target_cones_of_dim(&self, k: usize) -> Vec<usize> {
        (0..self.target_faces.len()).filter(|&i| self.target_cone_dim(i) == k).collect()
    }

    /// Index of the zero cone (the face equal to the whole polytope).
    pub fn zero_cone(&self) -> usize {
        self.target_cones_of_dim(0)[0]
    }

    /// Rays of the source fan whose image lies in the target cone
    /// (containment, boundary included).
    pub fn rays_into(&self, face_idx: usize) -> Vec<usize> {
        (0..self.fan.n_rays())
            .filter(|&k| {
                target_cone_contains(
                    &self.delta_q,
                    &self.target_faces[face_idx],
                    &to_rat_vec(&self.ray_images[k]),
                )
            })
            .collect()
    }

    /// Rays of the source fan whose image's relative interior lies in the
    /// relative interior of the target cone.
    pub fn rays_into_interior(&self, face_idx: usize) -> Vec<usize> {
        (0..self.fan.n_rays())
            .filter(|&k| self.smallest[&vec![k]] == face_idx)
            .collect()
    }

    /// Primitive generators of the rays of a target cone: the inner normals
    /// of the facets of `delta_q` containing its face.
    pub fn target_cone_ray_generators(&self, face_idx: usize) -> Vec<Vec<Int>> {
        let face = &self.target_faces[face_idx];
        face.tight
            .iter()
            .map(|&fi| primitive_vector(&self.delta_q.facets[fi].0))
            .collect()
    }

    /// Multiplicity of a simplicial target cone.
    pub fn target_cone_multiplicity(&self, face_idx: usize) -> Result<Int, Error> {
        let gens = self.target_cone_ray_generators(face_idx);
        if gens.is_empty() {
            return Ok(Int::one());
        }
        let mat = IntMatrix::from_rows(&gens);
        let mut ech = Echelon::new();
        for r in 0..mat.rows {
            ech.insert(crate::linalg::sparse_from_dense(&to_rat_vec(mat.row(r))));
        }
        if ech.rank() != self.target_cone_dim(face_idx) || gens.len() != ech.rank() {
            return Err(Error::NotSimplicial);
        }
        let (_, s, _) = smith_normal_form(&mat);
        let mut m = Int::one();
        for i in 0..s.rows.min(s.cols) {
            if !s.at(i, i).is_zero() {
                m *= s.at(i, i);
            }
        }
        Ok(m)
    }

    /// The face of the divisor polytope (in M coordinates) corresponding to
    /// a target cone: `Gamma_sigma`, translated back by `m0`.
    pub fn gamma_volume(&self, face_idx: usize) -> Rat {
        self.delta_q.normalized_volume(&self.target_faces, &self.target_faces[face_idx])
    }

    /// Is the contraction the identity on fans (ample case)?
    pub fn is_identity(&self) -> bool {
        self.kappa == self.fan.rank()
            && self
                .smallest
                .iter()
                .all(|(cone, &fidx)| self.target_cone_dim(fidx) == cone.len())
            && self.target_cones_of_dim(self.kappa).len() == self.fan.max_cones().len()
    }
}

// ---------------------------------------------------------------------------
// Face data report
// ---------------------------------------------------------------------------

/// Per-face summary: lattice points, interior lattice points, normalized
/// volume, and (when the polytope is reflexive) the dual face's vertex ids
/// in the polar polytope.
#[derive(Debug, Clone)]
pub struct FaceData {
    pub face: Face,
    pub lattice_points: usize,
    pub interior_lattice_points: usize,
    pub normalized_volume: Rat,
    pub dual_face_vertex_ids: Option<Vec<usize>>,
}

pub fn face_data(poly: &LatticePolytope) -> Result<Vec<FaceData>, Error> {
    if poly.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let faces = poly.faces();
    let dual = if poly.dim() == Some(poly.rank) && poly.is_reflexive().unwrap_or(false) {
        Some(poly.polar_dual()?)
    } else {
        None
    };
    let mut out = Vec::new();
    for f in &faces {
        let l = poly.face_lattice_points(f).len();
        let li = poly.face_interior_lattice_points(f).len();
        let vol = poly.normalized_volume(&faces, f);
        let dual_ids = dual.as_ref().map(|dp| {
            (0..dp.vertices.len())
                .filter(|&i| {
                    f.vertex_ids.iter().all(|&vi| {
                        (dot_rr(&poly.vertices[vi], &dp.vertices[i]) + Rat::one()).is_zero()
                    })
                })
                .collect()
        });
        out.push(FaceData {
            face: f.clone(),
            lattice_points: l,
            interior_lattice_points: li,
            normalized_volume: vol,
            dual_face_vertex_ids: dual_ids,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Regular subdivision (MPCP-style refinements)
// ---------------------------------------------------------------------------

/// Simplicial fan refining the face fan of a reflexive polytope, with rays
/// exactly the given boundary lattice points. Each facet is triangulated by
/// coning from vertices and then stellar-subdividing the remaining points in
/// lexicographic order; that sequence realizes a regular (projective)
/// triangulation.
pub fn regular_subdivision(
    delta: &LatticePolytope,
    points: &[Vec<Int>],
) -> Result<Fan, Error> {
    if delta.dim() != Some(delta.rank) {
        return Err(Error::OriginNotInterior);
    }
    let rank = delta.rank;
    let mut pts: Vec<Vec<Int>> = points.to_vec();
    pts.sort();
    pts.dedup();
    for (i, p) in pts.iter().enumerate() {
        let pr = to_rat_vec(p);
        if !delta.contains(&pr) || delta.contains_in_interior(&pr) {
            return Err(Error::PointNotOnBoundary { index: i });
        }
    }
    // Every vertex of the polytope must be among the points.
    for v in &delta.vertices {
        if !is_int_vec(v) || !pts.contains(&to_int_vec(v)) {
            return Err(Error::InvalidInput("subdivision points must include all vertices".into()));
        }
    }
    let faces = delta.faces();
    let vert_pt_index: Vec<usize> = delta
        .vertices
        .iter()
        .map(|v| pts.iter().position(|p| to_rat_vec(p) == *v).expect("checked above"))
        .collect();

    let mut max_cones: Vec<Vec<usize>> = Vec::new();
    for facet in faces.iter().filter(|f| f.dim + 1 == rank) {
        // Initial triangulation on the facet's vertices.
        let mut simplices: Vec<Vec<usize>> = delta
            .triangulate_face(&faces, facet)
            .into_iter()
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|&vi| vert_pt_index[vi]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        // Points on this facet, non-vertices, in lexicographic order.
        let (fnormal, fc) = &delta.facets[facet.tight[0]];
        let on_facet: Vec<usize> = (0..pts.len())
            .filter(|&i| {
                (dot_ri(&to_rat_vec(&pts[i]), fnormal) + fc).is_zero()
                    && !vert_pt_index.contains(&i)
            })
            .collect();
        for &pi in &on_facet {
            let p = to_rat_vec(&pts[pi]);
            let mut next: Vec<Vec<usize>> = Vec::new();
            for s in &simplices {
                if simplex_contains(&pts, s, &p) {
                    for drop in 0..s.len() {
                        let mut t: Vec<usize> =
                            s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &x)| x).collect();
                        t.push(pi);
                        t.sort_unstable();
                        // Skip degenerate pieces (p in the dropped facet).
                        let coords: Vec<Vec<Rat>> =
                            t.iter().map(|&x| to_rat_vec(&pts[x])).collect();
                        if affine_dim(&coords) == Some(rank - 1) {
                            next.push(t);
                        }
                    }
                } else {
                    next.push(s.clone());
                }
            }
            next.sort();
            next.dedup();
            simplices = next;
        }
        max_cones.extend(simplices);
    }
    Fan::new(rank, pts, max_cones)
}

/// Does the simplex (given by point indices) contain the point?
fn simplex_contains(pts: &[Vec<Int>], simplex: &[usize], p: &[Rat]) -> bool {
    // Barycentric: solve sum lambda_i v_i = p, sum lambda_i = 1, lambda >= 0.
    let k = simplex.len();
    let rank = p.len();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(rank + 1);
    for j in 0..rank {
        rows.push(simplex.iter().map(|&i| Rat::from_integer(pts[i][j].clone())).collect());
    }
    rows.push(vec![Rat::one(); k]);
    let mut b: Vec<Rat> = p.to_vec();
    b.push(Rat::one());
    match solve_linear(&RatMatrix::from_rows(&rows), &b) {
        Ok(Some(lambda)) => lambda.iter().all(|l| !l.is_negative()),
        _ => false,
    }
}
