//! JSON job specifications: parsing, schema validation with JSON-pointer
//! locations, and normalization of arbitrary-precision scalars.

use num_traits::{Signed, Zero};
use semitoric::{Int, Rat};
use serde_json::Value;

/// A schema violation with the JSON-pointer location of the offending value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl core::fmt::Display for SchemaError {
    fn fmt(&self, out: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(out, "schema violation at \"{}\": {}", self.pointer, self.message)
    }
}

fn err<T>(pointer: &str, message: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError { pointer: pointer.to_string(), message: message.into() })
}

/// The ambient geometry: an explicit fan or a lattice polytope whose boundary
/// points become the rays of a regular subdivision.
#[derive(Debug, Clone)]
pub enum Geometry {
    Fan { rank: usize, rays: Vec<Vec<Int>>, max_cones: Vec<Vec<usize>> },
    Polytope { rank: usize, vertices: Vec<Vec<Int>> },
}

/// One polynomial term: Cox exponents in ray order, or a lattice point of the
/// divisor polytope.
#[derive(Debug, Clone)]
pub enum Term {
    Exponents(Vec<Int>, Rat),
    Point(Vec<Int>, Rat),
}

#[derive(Debug, Clone)]
pub enum PolynomialSpec {
    Terms(Vec<Term>),
    GenericSeed(u64),
}

/// One requested class product: toric factors as ray indices, component
/// factors as `(ray, component index)` pairs.
#[derive(Debug, Clone)]
pub struct ProductSpec {
    pub toric: Vec<usize>,
    pub components: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootModeSpec {
    Exact,
    Numeric,
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub geometry: Geometry,
    pub divisor: Vec<Int>,
    pub polynomial: Option<PolynomialSpec>,
    pub root_mode: RootModeSpec,
    pub products: Vec<ProductSpec>,
}

fn as_object<'v>(
    v: &'v Value,
    ptr: &str,
) -> Result<&'v serde_json::Map<String, Value>, SchemaError> {
    v.as_object().ok_or_else(|| SchemaError {
        pointer: ptr.to_string(),
        message: "expected an object".into(),
    })
}

fn as_array<'v>(v: &'v Value, ptr: &str) -> Result<&'v Vec<Value>, SchemaError> {
    v.as_array().ok_or_else(|| SchemaError {
        pointer: ptr.to_string(),
        message: "expected an array".into(),
    })
}

/// Arbitrary-precision integer: a JSON integer or a decimal string.
fn parse_int(v: &Value, ptr: &str) -> Result<Int, SchemaError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Int::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Int::from(u))
            } else {
                err(ptr, "expected an integer, not a float")
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<Int>()
            .map_err(|_| SchemaError {
                pointer: ptr.to_string(),
                message: format!("\"{s}\" is not an integer"),
            }),
        _ => err(ptr, "expected an integer or an integer string"),
    }
}

/// Rational scalar: an integer, or a string "p" or "p/q"; the result is
/// normalized, so "2/6" and "1/3" parse identically.
fn parse_rat(v: &Value, ptr: &str) -> Result<Rat, SchemaError> {
    match v {
        Value::Number(_) => Ok(Rat::from_integer(parse_int(v, ptr)?)),
        Value::String(s) => {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                None => (s, "1"),
                Some((a, b)) => (a.trim(), b.trim()),
            };
            let n: Int = num.parse().map_err(|_| SchemaError {
                pointer: ptr.to_string(),
                message: format!("\"{s}\" is not a rational"),
            })?;
            let d: Int = den.parse().map_err(|_| SchemaError {
                pointer: ptr.to_string(),
                message: format!("\"{s}\" is not a rational"),
            })?;
            if d.is_zero() {
                return err(ptr, "zero denominator");
            }
            Ok(Rat::new(n, d))
        }
        _ => err(ptr, "expected a rational as an integer or a \"p/q\" string"),
    }
}

fn parse_usize(v: &Value, ptr: &str) -> Result<usize, SchemaError> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| SchemaError {
            pointer: ptr.to_string(),
            message: "expected a nonnegative index".into(),
        })
}

/// A rectangular array of integer vectors with a consistent width.
fn parse_int_rows(v: &Value, ptr: &str) -> Result<Vec<Vec<Int>>, SchemaError> {
    let rows = as_array(v, ptr)?;
    if rows.is_empty() {
        return err(ptr, "expected a nonempty array");
    }
    let mut out = Vec::with_capacity(rows.len());
    let mut width: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        let rptr = format!("{ptr}/{i}");
        let cells = as_array(row, &rptr)?;
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return err(&rptr, format!("inconsistent dimensions: expected {w} entries"))
            }
            _ => {}
        }
        let mut parsed = Vec::with_capacity(cells.len());
        for (j, c) in cells.iter().enumerate() {
            parsed.push(parse_int(c, &format!("{rptr}/{j}"))?);
        }
        out.push(parsed);
    }
    Ok(out)
}

fn is_primitive(ray: &[Int]) -> bool {
    let mut g = Int::zero();
    for c in ray {
        g = num_integer::Integer::gcd(&g, c);
    }
    g == Int::from(1)
}

fn check_keys(
    map: &serde_json::Map<String, Value>,
    allowed: &[&str],
    ptr: &str,
) -> Result<(), SchemaError> {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return err(&format!("{ptr}/{key}"), "unknown field");
        }
    }
    Ok(())
}

fn parse_geometry(top: &serde_json::Map<String, Value>) -> Result<Geometry, SchemaError> {
    match (top.get("fan"), top.get("polytope")) {
        (Some(_), Some(_)) | (None, None) => {
            err("", "exactly one of \"fan\" and \"polytope\" is required")
        }
        (Some(fan), None) => {
            let obj = as_object(fan, "/fan")?;
            check_keys(obj, &["rays", "max_cones"], "/fan")?;
            let rays_v = obj
                .get("rays")
                .ok_or_else(|| SchemaError {
                    pointer: "/fan".into(),
                    message: "missing \"rays\"".into(),
                })?;
            let rays = parse_int_rows(rays_v, "/fan/rays")?;
            let rank = rays[0].len();
            for (i, r) in rays.iter().enumerate() {
                if !is_primitive(r) {
                    return err(
                        &format!("/fan/rays/{i}"),
                        format!("ray {i} is not primitive"),
                    );
                }
            }
            let cones_v = obj.get("max_cones").ok_or_else(|| SchemaError {
                pointer: "/fan".into(),
                message: "missing \"max_cones\"".into(),
            })?;
            let cones = as_array(cones_v, "/fan/max_cones")?;
            let mut max_cones = Vec::with_capacity(cones.len());
            for (i, cone) in cones.iter().enumerate() {
                let cptr = format!("/fan/max_cones/{i}");
                let entries = as_array(cone, &cptr)?;
                let mut parsed = Vec::with_capacity(entries.len());
                for (j, e) in entries.iter().enumerate() {
                    let idx = parse_usize(e, &format!("{cptr}/{j}"))?;
                    if idx >= rays.len() {
                        return err(
                            &format!("{cptr}/{j}"),
                            format!("ray index {idx} out of range"),
                        );
                    }
                    parsed.push(idx);
                }
                max_cones.push(parsed);
            }
            Ok(Geometry::Fan { rank, rays, max_cones })
        }
        (None, Some(poly)) => {
            let obj = as_object(poly, "/polytope")?;
            check_keys(obj, &["vertices"], "/polytope")?;
            let verts_v = obj.get("vertices").ok_or_else(|| SchemaError {
                pointer: "/polytope".into(),
                message: "missing \"vertices\"".into(),
            })?;
            let vertices = parse_int_rows(verts_v, "/polytope/vertices")?;
            let rank = vertices[0].len();
            Ok(Geometry::Polytope { rank, vertices })
        }
    }
}

fn parse_polynomial(v: &Value) -> Result<PolynomialSpec, SchemaError> {
    let obj = as_object(v, "/polynomial")?;
    check_keys(obj, &["terms", "generic_seed"], "/polynomial")?;
    match (obj.get("terms"), obj.get("generic_seed")) {
        (Some(_), Some(_)) | (None, None) => err(
            "/polynomial",
            "exactly one of \"terms\" and \"generic_seed\" is required",
        ),
        (None, Some(seed)) => {
            let s = seed.as_u64().ok_or_else(|| SchemaError {
                pointer: "/polynomial/generic_seed".into(),
                message: "expected a nonnegative seed".into(),
            })?;
            Ok(PolynomialSpec::GenericSeed(s))
        }
        (Some(terms_v), None) => {
            let terms = as_array(terms_v, "/polynomial/terms")?;
            let mut out = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                let tptr = format!("/polynomial/terms/{i}");
                let obj = as_object(t, &tptr)?;
                check_keys(obj, &["exponents", "point", "coefficient"], &tptr)?;
                let coeff_v = obj.get("coefficient").ok_or_else(|| SchemaError {
                    pointer: tptr.clone(),
                    message: "missing \"coefficient\"".into(),
                })?;
                let coeff = parse_rat(coeff_v, &format!("{tptr}/coefficient"))?;
                let term = match (obj.get("exponents"), obj.get("point")) {
                    (Some(_), Some(_)) | (None, None) => {
                        return err(
                            &tptr,
                            "exactly one of \"exponents\" and \"point\" is required",
                        )
                    }
                    (Some(e), None) => {
                        let eptr = format!("{tptr}/exponents");
                        let cells = as_array(e, &eptr)?;
                        let mut parsed = Vec::with_capacity(cells.len());
                        for (j, c) in cells.iter().enumerate() {
                            let val = parse_int(c, &format!("{eptr}/{j}"))?;
                            if val.is_negative() {
                                return err(&format!("{eptr}/{j}"), "negative exponent");
                            }
                            parsed.push(val);
                        }
                        Term::Exponents(parsed, coeff)
                    }
                    (None, Some(p)) => {
                        let pptr = format!("{tptr}/point");
                        let cells = as_array(p, &pptr)?;
                        let mut parsed = Vec::with_capacity(cells.len());
                        for (j, c) in cells.iter().enumerate() {
                            parsed.push(parse_int(c, &format!("{pptr}/{j}"))?);
                        }
                        Term::Point(parsed, coeff)
                    }
                };
                out.push(term);
            }
            Ok(PolynomialSpec::Terms(out))
        }
    }
}

fn parse_options(
    v: &Value,
) -> Result<(RootModeSpec, Vec<ProductSpec>), SchemaError> {
    let obj = as_object(v, "/options")?;
    check_keys(obj, &["root_mode", "products"], "/options")?;
    let root_mode = match obj.get("root_mode") {
        None => RootModeSpec::Exact,
        Some(Value::String(s)) if s == "exact" => RootModeSpec::Exact,
        Some(Value::String(s)) if s == "numeric" => RootModeSpec::Numeric,
        Some(_) => return err("/options/root_mode", "expected \"exact\" or \"numeric\""),
    };
    let mut products = Vec::new();
    if let Some(prods_v) = obj.get("products") {
        let prods = as_array(prods_v, "/options/products")?;
        for (i, p) in prods.iter().enumerate() {
            let pptr = format!("/options/products/{i}");
            let obj = as_object(p, &pptr)?;
            check_keys(obj, &["toric", "components"], &pptr)?;
            let mut toric = Vec::new();
            if let Some(t) = obj.get("toric") {
                for (j, e) in as_array(t, &format!("{pptr}/toric"))?.iter().enumerate() {
                    toric.push(parse_usize(e, &format!("{pptr}/toric/{j}"))?);
                }
            }
            let mut components = Vec::new();
            if let Some(c) = obj.get("components") {
                for (j, e) in as_array(c, &format!("{pptr}/components"))?.iter().enumerate() {
                    let eptr = format!("{pptr}/components/{j}");
                    let pair = as_array(e, &eptr)?;
                    if pair.len() != 2 {
                        return err(&eptr, "expected a [ray, component] pair");
                    }
                    components.push((
                        parse_usize(&pair[0], &format!("{eptr}/0"))?,
                        parse_usize(&pair[1], &format!("{eptr}/1"))?,
                    ));
                }
            }
            products.push(ProductSpec { toric, components });
        }
    }
    Ok((root_mode, products))
}

/// Parses and validates a JSON job. Input must be UTF-8 JSON; every schema
/// violation reports the JSON-pointer location of the offending value.
pub fn parse_job(bytes: &[u8]) -> Result<JobSpec, SchemaError> {
    let text = core::str::from_utf8(bytes)
        .map_err(|_| SchemaError { pointer: "".into(), message: "input is not UTF-8".into() })?;
    let value: Value = serde_json::from_str(text).map_err(|e| SchemaError {
        pointer: "".into(),
        message: format!("invalid JSON: {e}"),
    })?;
    let top = as_object(&value, "")?;
    check_keys(top, &["fan", "polytope", "divisor", "polynomial", "options"], "")?;
    let geometry = parse_geometry(top)?;
    let divisor_v = top
        .get("divisor")
        .ok_or_else(|| SchemaError { pointer: "".into(), message: "missing \"divisor\"".into() })?;
    let divisor_cells = as_array(divisor_v, "/divisor")?;
    let mut divisor = Vec::with_capacity(divisor_cells.len());
    for (i, c) in divisor_cells.iter().enumerate() {
        divisor.push(parse_int(c, &format!("/divisor/{i}"))?);
    }
    if let Geometry::Fan { rays, .. } = &geometry {
        if divisor.len() != rays.len() {
            return err(
                "/divisor",
                format!("inconsistent dimensions: expected {} coefficients", rays.len()),
            );
        }
    }
    let polynomial = match top.get("polynomial") {
        None => None,
        Some(v) => Some(parse_polynomial(v)?),
    };
    let (root_mode, products) = match top.get("options") {
        None => (RootModeSpec::Exact, Vec::new()),
        Some(v) => parse_options(v)?,
    };
    Ok(JobSpec { geometry, divisor, polynomial, root_mode, products })
}
