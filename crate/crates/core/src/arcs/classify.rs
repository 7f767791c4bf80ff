//! Oval classes in PG(2,q): conic, pointed conic, irregular.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{fit_conic_5pts, is_oval, nucleus, Conic};
use crate::error::{Error, Result};
use crate::plane::Plane;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OvalClass {
    Conic,
    PointedConic,
    Irregular,
}

impl OvalClass {
    pub const ALL: [OvalClass; 3] = [OvalClass::Conic, OvalClass::PointedConic, OvalClass::Irregular];

    pub fn as_str(self) -> &'static str {
        match self {
            OvalClass::Conic => "conic",
            OvalClass::PointedConic => "pointed_conic",
            OvalClass::Irregular => "irregular",
        }
    }
}

impl fmt::Display for OvalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OvalClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OvalClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown oval class `{s}`")))
    }
}

/// A class together with its evidence. For `Conic` the conic is the one
/// through the oval. For `PointedConic` it is the conic `C` inside the
/// completed hyperoval: the oval's nucleus is the point of `C` left out,
/// and `conic_nucleus` is the nucleus of `C`, which lies on the oval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedOval {
    pub class: OvalClass,
    pub conic: Option<Conic>,
    pub nucleus: Option<usize>,
    pub conic_nucleus: Option<usize>,
}

/// The conic through the first five points, if it contains all of `pts`.
fn conic_through(plane: &Plane, pts: &[usize]) -> Result<Option<Conic>> {
    let five = [pts[0], pts[1], pts[2], pts[3], pts[4]];
    Ok(fit_conic_5pts(plane, five)?.filter(|c| pts.iter().all(|&p| c.contains(plane, p))))
}

/// Classifies by conic fitting in any order.
pub fn classify_oval_by_fit(plane: &Plane, oval: &[usize]) -> Result<ClassifiedOval> {
    let field = plane.field().ok_or(Error::NotDesarguesian)?;
    if !is_oval(plane, oval) {
        return Err(Error::NotAnOval);
    }
    let mut pts = oval.to_vec();
    pts.sort_unstable();
    let even = field.characteristic() == 2;
    let nuc = if even { Some(nucleus(plane, &pts)?) } else { None };
    if pts.len() < 5 {
        // q <= 3: five points are not available and every oval is a conic.
        return Ok(ClassifiedOval { class: OvalClass::Conic, conic: None, nucleus: nuc, conic_nucleus: None });
    }
    if let Some(c) = conic_through(plane, &pts)? {
        return Ok(ClassifiedOval { class: OvalClass::Conic, conic: Some(c), nucleus: nuc, conic_nucleus: None });
    }
    if let Some(n) = nuc {
        for &y in &pts {
            let rest: Vec<usize> = pts.iter().copied().filter(|&p| p != y).chain([n]).collect();
            if let Some(c) = conic_through(plane, &rest)? {
                return Ok(ClassifiedOval {
                    class: OvalClass::PointedConic,
                    conic: Some(c),
                    nucleus: Some(n),
                    conic_nucleus: Some(y),
                });
            }
        }
    }
    if !even {
        return Err(Error::AxiomFailure("oval in odd order is not a conic".into()));
    }
    Ok(ClassifiedOval { class: OvalClass::Irregular, conic: None, nucleus: nuc, conic_nucleus: None })
}

/// Classifies an oval of a Desarguesian plane. In odd order every oval is
/// a conic and no fit is run.
pub fn classify_oval(plane: &Plane, oval: &[usize]) -> Result<ClassifiedOval> {
    let field = plane.field().ok_or(Error::NotDesarguesian)?;
    if field.characteristic() != 2 {
        if !is_oval(plane, oval) {
            return Err(Error::NotAnOval);
        }
        return Ok(ClassifiedOval { class: OvalClass::Conic, conic: None, nucleus: None, conic_nucleus: None });
    }
    classify_oval_by_fit(plane, oval)
}
