//! Line-oriented incidence files:
//!
//! ```text
//! plane <name> order <d>
//! L0: 0 1 2
//! L1: ...
//! ```
//!
//! Point indices are 0-based and written sorted. Blank lines and `#`
//! comments are ignored on input.

use std::io::{BufRead, Write};
use std::path::Path;

use super::{Plane, PlaneKind};
use crate::error::{Error, Result};

pub fn write_plane<W: Write>(plane: &Plane, mut out: W) -> Result<()> {
    writeln!(out, "plane {} order {}", plane.name(), plane.order())?;
    for (i, l) in plane.lines().iter().enumerate() {
        write!(out, "L{i}:")?;
        for p in l {
            write!(out, " {p}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn save_plane(plane: &Plane, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_plane(plane, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Parses an incidence file. With `checked` the plane axioms must hold.
pub fn parse_plane<R: BufRead>(input: R, checked: bool) -> Result<Plane> {
    let mut header: Option<(String, usize)> = None;
    let mut lines: Vec<Option<Vec<u32>>> = Vec::new();
    for (no, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = no + 1;
        let err = |msg: String| Error::ParseError { line: lineno, msg };
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if header.is_none() {
            let toks: Vec<&str> = text.split_whitespace().collect();
            match toks.as_slice() {
                ["plane", name, "order", d] => {
                    let d: usize = d.parse().map_err(|_| err(format!("bad order `{d}`")))?;
                    if !(2..=1024).contains(&d) {
                        return Err(err(format!("order {d} out of range")));
                    }
                    header = Some((name.to_string(), d));
                }
                _ => return Err(err("expected header `plane <name> order <d>`".into())),
            }
            continue;
        }
        let (label, rest) = text.split_once(':').ok_or_else(|| err("expected `L<i>: points...`".into()))?;
        let idx: usize = label
            .trim()
            .strip_prefix('L')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(format!("bad line label `{label}`")))?;
        let pts = rest
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| err(format!("bad point index `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if idx >= lines.len() {
            lines.resize(idx + 1, None);
        }
        if lines[idx].is_some() {
            return Err(err(format!("line L{idx} given twice")));
        }
        lines[idx] = Some(pts);
    }
    let (name, order) = header.ok_or(Error::ParseError { line: 0, msg: "empty input".into() })?;
    let lines = lines
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or(Error::ParseError { line: 0, msg: format!("line L{i} missing") }))
        .collect::<Result<Vec<_>>>()?;
    let npoints = order * order + order + 1;
    if let Some(bad) = lines.iter().flatten().find(|&&p| p as usize >= npoints) {
        return Err(Error::ParseError { line: 0, msg: format!("point {bad} out of range for order {order}") });
    }
    if checked {
        Plane::checked(name, order, lines, PlaneKind::Imported)
    } else {
        Plane::from_lines(name, order, lines, PlaneKind::Imported)
    }
}

pub fn load_plane(path: &Path, checked: bool) -> Result<Plane> {
    let f = std::fs::File::open(path)?;
    parse_plane(std::io::BufReader::new(f), checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{nearfield9, pg2_order, quasifield_plane};

    fn to_string(p: &Plane) -> String {
        let mut buf = Vec::new();
        write_plane(p, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn round_trip_builtins() {
        let planes = [pg2_order(2).unwrap(), pg2_order(4).unwrap(), quasifield_plane(&nearfield9().unwrap()).unwrap()];
        for p in planes {
            let text = to_string(&p);
            let back = parse_plane(text.as_bytes(), true).unwrap();
            assert_eq!(back, p);
            assert_eq!(to_string(&back), text);
        }
    }

    #[test]
    fn fano_text() {
        let text = to_string(&pg2_order(2).unwrap());
        assert!(text.starts_with("plane PG(2,2) order 2\nL0: "));
        assert_eq!(text.lines().count(), 8);
    }

    #[test]
    fn comments_and_blanks() {
        let text = "# Fano\n\nplane fano order 2\nL0: 0 1 2 # first\nL1: 0 3 4\nL2: 0 5 6\nL3: 1 3 5\nL4: 1 4 6\nL5: 2 3 6\nL6: 2 4 5\n";
        let p = parse_plane(text.as_bytes(), true).unwrap();
        assert_eq!(p.num_lines(), 7);
    }

    #[test]
    fn malformed_inputs() {
        let full = to_string(&pg2_order(2).unwrap());
        let truncated = &full[..full.len() - 8];
        assert!(matches!(
            parse_plane(truncated.as_bytes(), true),
            Err(Error::ParseError { .. }) | Err(Error::AxiomFailure(_))
        ));
        assert!(matches!(parse_plane("plane x\n".as_bytes(), false), Err(Error::ParseError { .. })));
        assert!(matches!(parse_plane("".as_bytes(), false), Err(Error::ParseError { .. })));
        assert!(matches!(
            parse_plane("plane x order 2\nL0: 0 1 99\n".as_bytes(), false),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(parse_plane("plane x order 2\nL0: 0 1 a\n".as_bytes(), false), Err(Error::ParseError { .. })));
        assert!(matches!(parse_plane("plane x order 2\nL1: 0 1 2\n".as_bytes(), false), Err(Error::ParseError { .. })));
    }

    #[test]
    fn unchecked_load_of_broken_plane() {
        let full = to_string(&pg2_order(3).unwrap());
        let broken: String = full.lines().filter(|l| !l.starts_with("L12:")).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_plane(broken.as_bytes(), true), Err(Error::AxiomFailure(_))));
        let p = parse_plane(broken.as_bytes(), false).unwrap();
        assert_eq!(p.num_lines(), 12);
    }
}
