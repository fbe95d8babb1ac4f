//! Command execution: realizes a parsed job against the library, assembles
//! deterministic JSON reports, and maps failures to process exit codes.

use crate::job::{Geometry, JobSpec, PolynomialSpec, ProductSpec, RootModeSpec, Term};
use num_traits::{One, Signed};
use semitoric::cohomology::{
    component_classes, hodge_diamond, picard_group, ComponentClasses, HodgeAlgebra,
    HodgeClass, RootMode, TPoly,
};
use semitoric::cox::{CoxPolynomial, CoxRing};
use semitoric::linalg::{solve_linear, RatMatrix};
use semitoric::mirror::{batyrev_hodge, build_mirror_pair, generalized_mdmm, monomial_divisor_map};
use semitoric::polytope::{
    dot_ii, is_semiample, polytope_from_divisor, regular_subdivision, semiample_contraction,
    Fan, LatticePolytope, SemiampleContraction,
};
use semitoric::{Error, Int, Rat};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// A failure with the process exit code it maps to.
#[derive(Debug, Clone)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl core::fmt::Display for CliError {
    fn fmt(&self, out: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(out, "{}", self.message)
    }
}

/// Exit-code policy: falsified identities are their own outcome; broken
/// internal promises are internal errors; everything else blames the input.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::FalsifiedIdentity(_) => 3,
        Error::InexactDivision(_)
        | Error::InconsistentSystem(_)
        | Error::AssumptionViolated(_)
        | Error::RetryBudgetExhausted { .. } => 1,
        _ => 2,
    }
}

fn lib_err(e: Error) -> CliError {
    CliError { code: exit_code_for(&e), message: e.to_string() }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub jobs: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { jobs: 1, tolerance: 1e-10, seed: 0 }
    }
}

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn int_vec_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|c| json!(c.to_string())).collect())
}

fn cox_poly_json(f: &CoxPolynomial) -> Value {
    Value::Array(
        f.terms
            .iter()
            .map(|(e, c)| json!({ "exponents": int_vec_json(e), "coefficient": rat_str(c) }))
            .collect(),
    )
}

/// The realized geometry and divisor data shared by every command.
pub struct Realized {
    pub ring: CoxRing,
    pub divisor: Vec<Int>,
}

impl Realized {
    pub fn contraction(&self) -> Result<SemiampleContraction, CliError> {
        semiample_contraction(&self.ring.fan, &self.divisor).map_err(lib_err)
    }
}

fn build_fan(spec: &JobSpec) -> Result<Fan, CliError> {
    match &spec.geometry {
        Geometry::Fan { rank, rays, max_cones } => {
            Fan::new(*rank, rays.clone(), max_cones.clone()).map_err(lib_err)
        }
        Geometry::Polytope { rank, vertices } => {
            let verts: Vec<Vec<Rat>> = vertices
                .iter()
                .map(|v| v.iter().map(|c| Rat::from_integer(c.clone())).collect())
                .collect();
            let poly = LatticePolytope::from_vertices(*rank, &verts).map_err(lib_err)?;
            let mut pts: Vec<Vec<Int>> = poly
                .lattice_points()
                .into_iter()
                .filter(|m| {
                    let mr: Vec<Rat> =
                        m.iter().map(|c| Rat::from_integer(c.clone())).collect();
                    !poly.contains_in_interior(&mr)
                })
                .collect();
            pts.sort();
            regular_subdivision(&poly, &pts).map_err(lib_err)
        }
    }
}

/// Builds the Cox ring and checks the divisor length against the realized
/// ray count (the polytope route fixes the count only after subdivision).
pub fn realize(spec: &JobSpec) -> Result<Realized, CliError> {
    let fan = build_fan(spec)?;
    if spec.divisor.len() != fan.n_rays() {
        return Err(CliError::invalid(format!(
            "schema violation at \"/divisor\": inconsistent dimensions: expected {} coefficients for {} rays",
            fan.n_rays(),
            fan.n_rays()
        )));
    }
    let ring = CoxRing::new(fan).map_err(lib_err)?;
    Ok(Realized { ring, divisor: spec.divisor.clone() })
}

/// Realizes the polynomial; absent specs fall back to a seeded generic
/// sample of the divisor degree.
pub fn realize_polynomial(
    real: &Realized,
    spec: &JobSpec,
    opts: &Options,
) -> Result<CoxPolynomial, CliError> {
    let degree = real.ring.divisor_class(&real.divisor);
    match &spec.polynomial {
        None => real.ring.generic_polynomial(&real.divisor, opts.seed).map_err(lib_err),
        Some(PolynomialSpec::GenericSeed(s)) => {
            real.ring.generic_polynomial(&real.divisor, *s).map_err(lib_err)
        }
        Some(PolynomialSpec::Terms(terms)) => {
            let rays = real.ring.fan.rays();
            let mut realized = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                match t {
                    Term::Exponents(e, c) => {
                        if e.len() != rays.len() {
                            return Err(CliError::invalid(format!(
                                "schema violation at \"/polynomial/terms/{i}/exponents\": inconsistent dimensions: expected {} exponents",
                                rays.len()
                            )));
                        }
                        realized.push((e.clone(), c.clone()));
                    }
                    Term::Point(m, c) => {
                        if m.len() != real.ring.fan.rank() {
                            return Err(CliError::invalid(format!(
                                "schema violation at \"/polynomial/terms/{i}/point\": inconsistent dimensions: expected {} coordinates",
                                real.ring.fan.rank()
                            )));
                        }
                        let e: Vec<Int> = rays
                            .iter()
                            .zip(&real.divisor)
                            .map(|(r, a)| dot_ii(m, r) + a)
                            .collect();
                        if e.iter().any(Signed::is_negative) {
                            return Err(CliError::invalid(format!(
                                "schema violation at \"/polynomial/terms/{i}/point\": point lies outside the divisor polytope"
                            )));
                        }
                        realized.push((e, c.clone()));
                    }
                }
            }
            CoxPolynomial::new(&real.ring.grading, realized, degree).map_err(lib_err)
        }
    }
}

fn report_skeleton(command: &str, input: &[u8]) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("library_version".into(), json!(semitoric::VERSION));
    let hash = Sha256::digest(input);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    m.insert("input_sha256".into(), json!(hex));
    m
}

/// Names the first maximal cone on which semiampleness breaks: either the
/// Cartier section is not integral or it escapes the divisor polytope.
fn failing_cartier_cone(fan: &Fan, a: &[Int]) -> String {
    let delta = match polytope_from_divisor(fan, a) {
        Ok(d) => d,
        Err(e) => return e.to_string(),
    };
    for (idx, cone) in fan.max_cones().iter().enumerate() {
        let rows: Vec<Vec<Rat>> = cone
            .iter()
            .map(|&k| fan.ray(k).iter().map(|c| Rat::from_integer(c.clone())).collect())
            .collect();
        let b: Vec<Rat> =
            cone.iter().map(|&k| -Rat::from_integer(a[k].clone())).collect();
        let m = match solve_linear(&RatMatrix::from_rows(&rows), &b) {
            Ok(Some(m)) => m,
            _ => return format!("Cartier system is singular on maximal cone {idx}"),
        };
        if m.iter().any(|c| !c.is_integer()) {
            return format!(
                "divisor is not Cartier: section of maximal cone {idx} (rays {cone:?}) is not integral"
            );
        }
        if !delta.contains(&m) {
            return format!(
                "divisor is not globally generated: Cartier section of maximal cone {idx} (rays {cone:?}) lies outside the divisor polytope"
            );
        }
    }
    "semiampleness check failed for an unidentified reason".into()
}

fn cmd_check(real: &Realized, spec: &JobSpec, opts: &Options) -> Result<Value, CliError> {
    let fan = &real.ring.fan;
    let (complete, simplicial) = fan.validate().map_err(lib_err)?;
    if !complete || !simplicial {
        return Err(CliError::invalid(format!(
            "fan validation failed: complete = {complete}, simplicial = {simplicial}"
        )));
    }
    if !is_semiample(fan, &real.divisor).map_err(lib_err)? {
        return Err(CliError::invalid(failing_cartier_cone(fan, &real.divisor)));
    }
    let ctr = real.contraction()?;
    let mut out = Map::new();
    out.insert("fan_complete".into(), json!(true));
    out.insert("fan_simplicial".into(), json!(true));
    out.insert("semiample".into(), json!(true));
    out.insert("iitaka_dimension".into(), json!(ctr.kappa));
    if spec.polynomial.is_some() {
        let f = realize_polynomial(real, spec, opts)?;
        let ok = real.ring.nondegeneracy_certificate(&f, &ctr).map_err(lib_err)?;
        out.insert("nondegenerate".into(), json!(ok));
    }
    out.insert("provenance".into(), json!("exact Cartier and certificate computation"));
    Ok(Value::Object(out))
}

fn cmd_contraction(real: &Realized) -> Result<Value, CliError> {
    let ctr = real.contraction()?;
    let mut cones = Vec::new();
    for dim in 0..=ctr.kappa {
        for sigma in ctr.target_cones_of_dim(dim) {
            cones.push(json!({
                "index": sigma,
                "dim": dim,
                "generators": Value::Array(
                    ctr.target_cone_ray_generators(sigma).iter().map(|g| int_vec_json(g)).collect()
                ),
                "gamma_volume": rat_str(&ctr.gamma_volume(sigma)),
                "rays_into": ctr.rays_into(sigma),
                "rays_into_interior": ctr.rays_into_interior(sigma),
            }));
        }
    }
    let mut out = Map::new();
    out.insert("kappa".into(), json!(ctr.kappa));
    out.insert(
        "ray_images".into(),
        Value::Array(ctr.ray_images.iter().map(|r| int_vec_json(r)).collect()),
    );
    out.insert("target_cones".into(), Value::Array(cones));
    out.insert("provenance".into(), json!("exact contraction of the divisor polytope"));
    Ok(Value::Object(out))
}

pub fn diamond_json(hd: &semitoric::cohomology::HodgeDiamond) -> Value {
    let d = hd.d;
    let mut rows = Vec::new();
    for p in 0..d {
        let mut row = Vec::new();
        for q in 0..d {
            let prov = &hd.provenance[p][q];
            row.push(json!({
                "h": hd.h[p][q],
                "toric": prov.toric,
                "residue": prov.residue.iter().map(|(s, a, r)| json!([s, a, r])).collect::<Vec<_>>(),
            }));
        }
        rows.push(Value::Array(row));
    }
    Value::Array(rows)
}

fn cmd_hodge(real: &Realized, spec: &JobSpec, opts: &Options) -> Result<Value, CliError> {
    let ctr = real.contraction()?;
    let f = realize_polynomial(real, spec, opts)?;
    let hd = hodge_diamond(&real.ring, &f, &ctr).map_err(lib_err)?;
    let mut out = Map::new();
    out.insert("d".into(), json!(hd.d));
    out.insert("cells".into(), diamond_json(&hd));
    out.insert(
        "provenance".into(),
        json!("per cell: toric dimension plus (sigma, a1 dim, r1 dim) residue summands"),
    );
    Ok(Value::Object(out))
}

fn cmd_picard(real: &Realized, spec: &JobSpec, opts: &Options) -> Result<Value, CliError> {
    let ctr = real.contraction()?;
    let f = realize_polynomial(real, spec, opts)?;
    let rep = picard_group(&real.ring, &f, &ctr).map_err(lib_err)?;
    let mut out = Map::new();
    out.insert("toric_basis".into(), json!(rep.toric_basis));
    out.insert("toric_rank".into(), json!(rep.toric_rank));
    out.insert(
        "summands".into(),
        Value::Array(
            rep.summands
                .iter()
                .map(|s| json!({ "sigma": s.sigma, "ray": s.ray, "dim": s.dim }))
                .collect(),
        ),
    );
    out.insert("rank".into(), json!(rep.rank));
    out.insert("formula_rank".into(), json!(rep.formula_rank));
    out.insert("identification_asserted".into(), json!(rep.identification_asserted));
    out.insert(
        "provenance".into(),
        json!("toric share from divisor relations, residue share from edge slices"),
    );
    Ok(Value::Object(out))
}

fn canonical_json(
    algebra: &HodgeAlgebra,
    class: &HodgeClass,
) -> Result<Value, CliError> {
    let canon = algebra.canonical(class).map_err(lib_err)?;
    let toric: Vec<Value> = canon
        .toric
        .iter()
        .map(|((tw, idx), c)| json!([tw, idx, rat_str(c)]))
        .collect();
    let residue: Vec<Value> = canon
        .residue
        .iter()
        .map(|((s, tw, i, j), c)| json!([s, tw, i, j, rat_str(c)]))
        .collect();
    Ok(json!({ "p": canon.p, "q": canon.q, "toric": toric, "residue": residue }))
}

fn one_product(
    algebra: &HodgeAlgebra,
    spec: &ProductSpec,
) -> Result<Value, CliError> {
    let ring = &algebra.ring;
    let d = ring.fan.rank();
    let mut classes: Vec<HodgeClass> = Vec::new();
    for &i in &spec.toric {
        if i >= ring.n_vars() {
            return Err(CliError::invalid(format!("toric factor ray {i} out of range")));
        }
        classes.push(HodgeClass::toric_class(1, TPoly::monomial(&[i], Rat::one())));
    }
    for &(ray, k) in &spec.components {
        let gs = match component_classes(ring, &algebra.f, &algebra.ctr, ray, RootMode::Exact)
            .map_err(lib_err)?
        {
            ComponentClasses::Exact(gs) => gs,
            ComponentClasses::Numeric(_) => {
                return Err(CliError::invalid("numeric component classes in an exact product"))
            }
        };
        if k == 0 || k > gs.len() {
            return Err(CliError::invalid(format!(
                "component index {k} out of range 1..={} for ray {ray}",
                gs.len()
            )));
        }
        let sigma = algebra.ctr.smallest[&vec![ray]];
        classes.push(HodgeClass::residue_class(
            1,
            1,
            sigma,
            TPoly::monomial(&[ray], Rat::one()),
            gs[k - 1].clone(),
        ));
    }
    if classes.is_empty() {
        return Err(CliError::invalid("empty product"));
    }
    let mut acc = classes[0].clone();
    for c in &classes[1..] {
        acc = algebra.cup(&acc, c).map_err(lib_err)?;
    }
    let mut out = Map::new();
    out.insert("class".into(), canonical_json(algebra, &acc)?);
    if acc.p == d - 1 && acc.q == d - 1 {
        let integral = match acc.toric.get(&0) {
            Some(u) => algebra.integrate_toric(u).map_err(lib_err)?,
            None => Rat::from_integer(Int::from(0)),
        };
        out.insert("integral".into(), json!(rat_str(&integral)));
    }
    out.insert("provenance".into(), json!("exact cup product in the mixed decomposition"));
    Ok(Value::Object(out))
}

fn cmd_products(real: &Realized, spec: &JobSpec, opts: &Options) -> Result<Value, CliError> {
    let ctr = real.contraction()?;
    let f = realize_polynomial(real, spec, opts)?;
    if spec.products.is_empty() {
        return Err(CliError::invalid("the products command needs /options/products"));
    }
    if spec.root_mode == RootModeSpec::Numeric {
        // Numeric roots never enter exact cup products; the numeric mode
        // reports the component class data at the requested tolerance.
        let mut rays: Vec<usize> =
            spec.products.iter().flat_map(|p| p.components.iter().map(|c| c.0)).collect();
        rays.sort_unstable();
        rays.dedup();
        let mut comp = Vec::new();
        for ray in rays {
            let mode = RootMode::Numeric { tolerance: opts.tolerance };
            let cls = component_classes(&real.ring, &f, &ctr, ray, mode).map_err(lib_err)?;
            let terms = match cls {
                ComponentClasses::Numeric(gs) => gs
                    .iter()
                    .map(|g| {
                        Value::Array(
                            g.iter()
                                .map(|(e, z)| json!([int_vec_json(e), z[0], z[1]]))
                                .collect(),
                        )
                    })
                    .collect::<Vec<_>>(),
                ComponentClasses::Exact(_) => Vec::new(),
            };
            comp.push(json!({ "ray": ray, "classes": terms }));
        }
        return Ok(json!({
            "mode": "numeric",
            "components": comp,
            "provenance": "numeric edge roots at the requested tolerance",
        }));
    }
    let algebra = HodgeAlgebra::new(&real.ring, &f, &ctr).map_err(lib_err)?;
    // Workers are bounded by --jobs; each claims the next unprocessed index
    // and the assembly below is strictly sequential in input order.
    let n = spec.products.len();
    let jobs = opts.jobs.max(1).min(n);
    let results: Vec<Option<Result<Value, CliError>>> = if jobs == 1 {
        spec.products.iter().map(|p| Some(one_product(&algebra, p))).collect()
    } else {
        let mut slots: Vec<Option<Result<Value, CliError>>> = Vec::new();
        slots.resize_with(n, || None);
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slot_refs: Vec<std::sync::Mutex<&mut Option<Result<Value, CliError>>>> =
            slots.iter_mut().map(std::sync::Mutex::new).collect();
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= n {
                        break;
                    }
                    let r = one_product(&algebra, &spec.products[i]);
                    **slot_refs[i].lock().expect("slot lock") = Some(r);
                });
            }
        });
        slots
    };
    let mut assembled = Vec::with_capacity(n);
    for r in results {
        assembled.push(r.expect("every product slot is filled")?);
    }
    Ok(json!({ "mode": "exact", "products": assembled }))
}

fn cmd_mirror(real: &Realized) -> Result<Value, CliError> {
    let delta =
        polytope_from_divisor(&real.ring.fan, &real.divisor).map_err(lib_err)?;
    if !delta.is_reflexive().map_err(lib_err)? {
        return Err(CliError::invalid("the divisor polytope is not reflexive"));
    }
    let dual = delta.polar_dual().map_err(lib_err)?;
    // batyrev_hodge takes the polytope whose fan side hosts X, so the primal
    // hypersurface reads off the dual polytope and vice versa.
    let (h11, h21) = batyrev_hodge(&dual).map_err(lib_err)?;
    let (m11, m21) = batyrev_hodge(&delta).map_err(lib_err)?;
    Ok(json!({
        "hypersurface": { "h11": h11, "h21": h21 },
        "mirror": { "h11": m11, "h21": m21 },
        "provenance": "lattice-point formulas on the reflexive pair",
    }))
}

fn cmd_mddm(real: &Realized, spec: &JobSpec, opts: &Options) -> Result<Value, CliError> {
    let delta =
        polytope_from_divisor(&real.ring.fan, &real.divisor).map_err(lib_err)?;
    let pair = build_mirror_pair(&delta, opts.seed).map_err(lib_err)?;
    let table = monomial_divisor_map(&pair).map_err(lib_err)?;
    let x_f = match &spec.polynomial {
        Some(_) => {
            // Realize the polynomial on the pair's own ambient ring, which
            // may refine the input fan.
            let ones = vec![Int::from(1); pair.ring.fan.n_rays()];
            let real2 = Realized { ring: pair.ring.clone(), divisor: ones };
            realize_polynomial(&real2, spec, opts)?
        }
        None => {
            let ones = vec![Int::from(1); pair.ring.fan.n_rays()];
            pair.ring.generic_polynomial(&ones, opts.seed).map_err(lib_err)?
        }
    };
    let gmdm = generalized_mdmm(&pair, &x_f).map_err(lib_err)?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "ray": r.ray,
                "monomial": int_vec_json(&r.monomial),
                "coords": r.coords.iter().map(|(i, c)| json!([i, rat_str(c)])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let entries: Vec<Value> = gmdm
        .entries
        .iter()
        .map(|e| {
            json!({
                "sigma": e.sigma,
                "sigma_mirror": e.sigma_mirror,
                "volume": e.volume,
                "n": e.n,
                "rays": e.rays,
                "x_class_counts": e.x_classes.iter().map(|c| c.len()).collect::<Vec<_>>(),
                "mirror_dim": e.mirror_dim,
            })
        })
        .collect();
    Ok(json!({
        "monomial_divisor_map": {
            "rows": rows,
            "divisor_basis": table.divisor_basis,
            "divisor_rank": table.divisor_rank,
            "mirror_dim": table.mirror_dim,
            "rank": table.rank,
        },
        "generalized": { "entries": entries },
        "provenance": "exact divisor-monomial pairing and per-edge dimension identity",
    }))
}

/// Runs one command against raw input bytes and returns the report object.
/// Reports are byte-identical across runs for the same input and version.
pub fn run_command(cmd: &str, input: &[u8], opts: &Options) -> Result<Value, CliError> {
    let spec = crate::job::parse_job(input).map_err(|e| CliError::invalid(e.to_string()))?;
    let real = realize(&spec)?;
    let result = match cmd {
        "check" => cmd_check(&real, &spec, opts)?,
        "contraction" => cmd_contraction(&real)?,
        "hodge" => cmd_hodge(&real, &spec, opts)?,
        "picard" => cmd_picard(&real, &spec, opts)?,
        "products" => cmd_products(&real, &spec, opts)?,
        "mirror" => cmd_mirror(&real)?,
        "mddm" => cmd_mddm(&real, &spec, opts)?,
        other => {
            return Err(CliError::invalid(format!(
                "unknown command \"{other}\"; expected check, contraction, hodge, picard, products, mirror, mddm, or selftest"
            )))
        }
    };
    let mut report = report_skeleton(cmd, input);
    report.insert("result".into(), result);
    Ok(Value::Object(report))
}

/// Serializes a report; field order is fixed at construction, so equal
/// reports serialize to equal bytes.
pub fn render_report(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are valid JSON");
    s.push('\n');
    s
}
