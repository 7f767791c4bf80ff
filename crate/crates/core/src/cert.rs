//! JSON certificates and their standalone re-verification.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arcs::{classify_oval_by_fit, is_arc, is_oval, nucleus, opoly_hyperoval, Conic, OvalClass};
use crate::error::{Error, Result};
use crate::galois::{Elem, Field, FieldSpec};
use crate::mub::{verify_mub_set, MubFile, MubSet};
use crate::par::Exec;
use crate::plane::{
    load_plane, nearfield9, pg2, pg2_order, quasifield_plane, verify_desargues_certificate, DesarguesCertificate, Plane,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Replay information attached to every artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub description: String,
    pub seed: u64,
    pub workers: usize,
}

impl Meta {
    pub fn new(description: impl Into<String>, seed: u64, workers: usize) -> Meta {
        Meta { tool: "arcmub".into(), version: TOOL_VERSION.into(), description: description.into(), seed, workers }
    }
}

/// Adds a `meta` object to a serialized artifact.
pub fn with_meta<T: Serialize>(artifact: &T, meta: &Meta) -> Value {
    let mut v = serde_json::to_value(artifact).expect("serializable");
    if let Value::Object(m) = &mut v {
        m.insert("meta".into(), serde_json::to_value(meta).expect("serializable"));
    }
    v
}

/// Builds a plane from its name: `PG(2,q)` (optionally over a given field
/// description) or `Hall(9)`.
pub fn builtin_plane(name: &str, field: Option<&str>) -> Result<Plane> {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.eq_ignore_ascii_case("Hall(9)") {
        return quasifield_plane(&nearfield9()?);
    }
    let q = compact
        .strip_prefix("PG(2,")
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| Error::InvalidArgument(format!("unknown plane `{name}`")))?;
    match field {
        Some(desc) => {
            let spec: FieldSpec = desc.parse()?;
            let f = Field::from_spec(&spec)?;
            if f.order() as u64 != q {
                return Err(Error::InvalidArgument(format!("field {desc} does not have order {q}")));
            }
            pg2(Arc::new(f))
        }
        None => pg2_order(q),
    }
}

/// A plane from an incidence file if given, else from its name.
pub fn resolve_plane(name: &str, field: Option<&str>, file: Option<&Path>) -> Result<Plane> {
    match file {
        Some(path) => load_plane(path, true),
        None => builtin_plane(name, field),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvalCertificate {
    #[serde(rename = "type")]
    pub kind: String,
    pub plane: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub points: Vec<usize>,
    /// Absent for planes without coordinates.
    pub class: Option<OvalClass>,
    pub nucleus: Option<usize>,
    pub conic_coeffs: Option<Vec<u32>>,
}

/// Certificate for an oval, classified when the plane has coordinates.
pub fn oval_certificate(plane: &Plane, points: &[usize]) -> Result<OvalCertificate> {
    if !is_oval(plane, points) {
        return Err(Error::NotAnOval);
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    let field = plane.field().map(|f| f.describe());
    let (class, nuc, coeffs) = if plane.field().is_some() {
        let c = classify_oval_by_fit(plane, &pts)?;
        (Some(c.class), c.nucleus, c.conic.map(|k| k.coeff_indices().to_vec()))
    } else {
        let nuc = if plane.order().is_multiple_of(2) { Some(nucleus(plane, &pts)?) } else { None };
        (None, nuc, None)
    };
    Ok(OvalCertificate {
        kind: "oval".into(),
        plane: plane.name().to_string(),
        field,
        points: pts,
        class,
        nucleus: nuc,
        conic_coeffs: coeffs,
    })
}

/// Polynomial whose graph plus `(0,1,0)`, `(0,0,1)` is a hyperoval
/// containing no conic; each of its ovals is then irregular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OPolynomialCertificate {
    #[serde(rename = "type")]
    pub kind: String,
    pub plane: String,
    pub field: String,
    /// Coefficients, low degree first, as element indices.
    pub coeffs: Vec<u32>,
}

/// Outcome of a re-verification; `Err` carries the failed check.
pub type Verdict = std::result::Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn conic_from(plane: &Plane, coeffs: &[u32]) -> std::result::Result<Conic, String> {
    let f = plane.field().ok_or("plane has no coordinates")?;
    let arr: [u32; 6] = coeffs.try_into().map_err(|_| "conic needs 6 coefficients".to_string())?;
    let mut e = [Elem::ZERO; 6];
    for (i, &c) in arr.iter().enumerate() {
        e[i] = f.elem(c).map_err(|err| err.to_string())?;
    }
    let c = Conic::new(f, e).ok_or("zero conic")?;
    check(c.coeffs == e, || "conic coefficients are not normalized".into())?;
    check(c.is_proper(f), || "conic is degenerate".into())?;
    Ok(c)
}

pub fn verify_oval_certificate(plane: &Plane, cert: &OvalCertificate) -> Verdict {
    check(cert.kind == "oval", || format!("type `{}` is not `oval`", cert.kind))?;
    check(cert.points.iter().all(|&p| p < plane.num_points()), || "point out of range".into())?;
    let arc = is_arc(plane, &cert.points).map_err(|e| e.to_string())?;
    check(arc.is_arc(), || format!("collinear triple {:?}", arc.witness.unwrap_or_default()))?;
    check(cert.points.len() == plane.order() + 1 && is_oval(plane, &cert.points), || {
        format!("{} points is not an oval in order {}", cert.points.len(), plane.order())
    })?;
    if plane.order().is_multiple_of(2) {
        let n = nucleus(plane, &cert.points).map_err(|e| e.to_string())?;
        check(cert.nucleus == Some(n), || format!("nucleus is {n}, certificate says {:?}", cert.nucleus))?;
    } else {
        check(cert.nucleus.is_none(), || "odd order ovals have no nucleus".into())?;
    }
    let Some(class) = cert.class else {
        return Ok(format!("oval of {} points in {}", cert.points.len(), plane.name()));
    };
    let conic = cert.conic_coeffs.as_deref().map(|c| conic_from(plane, c)).transpose()?;
    match (class, &conic) {
        (OvalClass::Conic, Some(c)) => {
            check(cert.points.iter().all(|&p| c.contains(plane, p)), || "a point is off the conic".into())?;
        }
        (OvalClass::PointedConic, Some(c)) => {
            let n = cert.nucleus.ok_or("pointed conic needs a nucleus")?;
            let off = cert.points.iter().filter(|&&p| !c.contains(plane, p)).count();
            check(off == 1 && c.contains(plane, n), || "conic is not inside the completed hyperoval".into())?;
        }
        (OvalClass::Conic, None) if cert.points.len() < 5 => {}
        (OvalClass::Irregular, None) => {}
        _ => return Err(format!("class {class} has the wrong conic evidence")),
    }
    let again = classify_oval_by_fit(plane, &cert.points).map_err(|e| e.to_string())?;
    check(again.class == class, || format!("oval classifies as {}, certificate says {class}", again.class))?;
    Ok(format!("{class} oval of {} points in {}", cert.points.len(), plane.name()))
}

pub fn verify_opoly_certificate(plane: &Plane, cert: &OPolynomialCertificate) -> Verdict {
    let f = plane.field().ok_or("plane has no coordinates")?;
    let coeffs = cert.coeffs.iter().map(|&c| f.elem(c)).collect::<Result<Vec<_>>>().map_err(|e| e.to_string())?;
    let h = opoly_hyperoval(plane, &coeffs).map_err(|e| e.to_string())?;
    for &y in h.points() {
        let oval: Vec<usize> = h.points().iter().copied().filter(|&p| p != y).collect();
        let c = classify_oval_by_fit(plane, &oval).map_err(|e| e.to_string())?;
        check(c.class == OvalClass::Irregular, || format!("oval without point {y} is {}", c.class))?;
    }
    Ok(format!("hyperoval of {} points in {}; all its ovals are irregular", h.len(), plane.name()))
}

/// Parses and re-verifies any certificate. Parse problems are errors;
/// failed checks are `Ok(Err(..))`.
pub fn verify_certificate_json(text: &str, plane_file: Option<&Path>, exec: &Exec) -> Result<Verdict> {
    let parse = |e: serde_json::Error| Error::ParseError { line: e.line(), msg: e.to_string() };
    let v: Value = serde_json::from_str(text).map_err(parse)?;
    let kind = v.get("type").and_then(Value::as_str).unwrap_or(if v.get("bases").is_some() { "mub_set" } else { "" });
    let plane_of = |v: &Value| -> Result<Plane> {
        let name = v.get("plane").and_then(Value::as_str).unwrap_or_default();
        resolve_plane(name, v.get("field").and_then(Value::as_str), plane_file)
    };
    match kind {
        "oval" => {
            let cert: OvalCertificate = serde_json::from_value(v.clone()).map_err(parse)?;
            Ok(verify_oval_certificate(&plane_of(&v)?, &cert))
        }
        "desargues_violation" => {
            let cert: DesarguesCertificate = serde_json::from_value(v.clone()).map_err(parse)?;
            let plane = plane_of(&v)?;
            Ok(verify_desargues_certificate(&plane, &cert).map(|()| format!("Desargues fails in {}", plane.name())))
        }
        "o_polynomial" => {
            let cert: OPolynomialCertificate = serde_json::from_value(v.clone()).map_err(parse)?;
            Ok(verify_opoly_certificate(&plane_of(&v)?, &cert))
        }
        "mub_set" => {
            let file: MubFile = serde_json::from_value(v).map_err(parse)?;
            let set = MubSet::from_file(&file)?;
            let report = verify_mub_set(&set, exec)?;
            Ok(if report.passed() { Ok(report.summary()) } else { Err(report.summary()) })
        }
        other => Err(Error::ParseError { line: 1, msg: format!("unknown certificate type `{other}`") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::{canonical_conic, pointed_conic};
    use crate::mub::wf_mub_set;

    fn round_trip<T: Serialize>(c: &T) -> Verdict {
        let text = with_meta(c, &Meta::new("test", 0, 1)).to_string();
        verify_certificate_json(&text, None, &Exec::sequential()).unwrap()
    }

    #[test]
    fn oval_certificates_reverify() {
        let plane = pg2_order(8).unwrap();
        let c = canonical_conic(&plane).unwrap();
        let cert = oval_certificate(&plane, c.points()).unwrap();
        assert_eq!(cert.class, Some(OvalClass::Conic));
        assert!(round_trip(&cert).is_ok());
        let pc = pointed_conic(&plane, c.points(), c.points()[3]).unwrap();
        let cert = oval_certificate(&plane, pc.points()).unwrap();
        assert_eq!(cert.class, Some(OvalClass::PointedConic));
        assert!(round_trip(&cert).is_ok());
        let mut bad = cert.clone();
        bad.points[0] = (0..73).find(|p| !bad.points.contains(p)).unwrap();
        assert!(round_trip(&bad).is_err());
        let mut wrong = cert.clone();
        wrong.class = Some(OvalClass::Conic);
        assert!(round_trip(&wrong).is_err());
    }

    #[test]
    fn parse_failures_are_errors() {
        assert!(verify_certificate_json("{\"type\":\"oval\"", None, &Exec::sequential()).is_err());
        assert!(verify_certificate_json("{\"type\":\"nope\"}", None, &Exec::sequential()).is_err());
        assert!(builtin_plane("PG(2,6)", None).is_err());
        assert!(builtin_plane("Hall(9)", None).is_ok());
        assert!(builtin_plane("PG(2,4)", Some("GF 2 2 1 1 1")).is_ok());
        assert!(builtin_plane("PG(2,4)", Some("GF 3 1 0 1")).is_err());
    }

    #[test]
    fn mub_and_hall_certificates() {
        let set = wf_mub_set(&Field::of_order(3).unwrap()).unwrap();
        let text = set.to_json();
        assert!(verify_certificate_json(&text, None, &Exec::sequential()).unwrap().is_ok());
        let hall = builtin_plane("Hall(9)", None).unwrap();
        let canon = canonical_conic(&pg2_order(9).unwrap()).unwrap();
        assert!(oval_certificate(&hall, &canon.points()[..3]).is_err());
    }
}
