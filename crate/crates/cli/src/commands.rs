use std::fmt;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use serde_json::{json, Value};

use arcmub::arcs::{
    canonical_conic, conic_solutions, is_arc, nucleus, pointed_conic, search_ovals, Conic, SearchOptions,
};
use arcmub::cert::{builtin_plane, oval_certificate, verify_certificate_json, with_meta, Meta};
use arcmub::cyclotomic::{weil_sum, weil_survey};
use arcmub::galois::{Elem, Field};
use arcmub::mub::{analogy_report, char2_failure_demo, fixture_d2, verify_mub_set, wf_mub_set, FloatMubSet, MubSet};
use arcmub::par::Exec;
use arcmub::plane::{
    extract_ternary_ring, find_desargues_violation, load_plane, ptr_properties, verify_plane_axioms, write_plane,
    DesarguesMode, DesarguesOutcome, DesarguesSearch, Frame, Labeling, Plane,
};
use arcmub::table::{reproduce_table, TableOptions};

use crate::{Command, Common, FieldArgs, Format, Mode, PlaneAction, PlaneArgs};

pub enum CliError {
    Usage(String),
    Core(arcmub::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<arcmub::Error> for CliError {
    fn from(e: arcmub::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

type Res = Result<ExitCode, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn exec(c: &Common) -> Exec {
    Exec::from_env(c.workers)
}

fn emit(c: &Common, text: &str, json: Value) -> Result<(), CliError> {
    let body = match c.format {
        Format::Text => text.to_string(),
        Format::Json => serde_json::to_string_pretty(&json).expect("serializable") + "\n",
    };
    match &c.out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn meta(c: &Common, description: impl Into<String>) -> Meta {
    Meta::new(description, c.seed, exec(c).workers())
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn field_of(f: &FieldArgs) -> Result<Field, CliError> {
    Ok(Field::new(f.p, f.n, f.modulus.clone())?)
}

fn plane_of(a: &PlaneArgs, checked: bool) -> Result<Plane, CliError> {
    match (&a.input, &a.plane, a.order) {
        (Some(path), None, None) => Ok(load_plane(path, checked && !a.unchecked)?),
        (None, Some(name), None) => Ok(builtin_plane(name, None)?),
        (None, None, Some(q)) => Ok(builtin_plane(&format!("PG(2,{q})"), None)?),
        _ => Err(usage("give exactly one of --order, --plane, --in")),
    }
}

fn field_description(p: &Plane) -> String {
    p.describe()
}

pub fn run(cmd: Command) -> Res {
    match cmd {
        Command::Field { field, common } => cmd_field(&field, &common),
        Command::Weil { field, survey, at, common } => cmd_weil(&field, survey, at, &common),
        Command::Conic { order, coeffs, common } => cmd_conic(order, coeffs, &common),
        Command::OvalCensus { plane, mode, budget, classify, list, long, common } => {
            let plane = plane_of(&plane, true)?;
            let mut opts = match mode {
                Mode::Exhaustive => SearchOptions::exhaustive(),
                Mode::Random => SearchOptions::random(budget, common.seed),
            };
            opts = opts.classify(classify).collect(list);
            opts.long = long;
            let census = search_ovals(&plane, &opts, &exec(&common))?;
            let mut text = census.to_text();
            if let Some(list) = &census.oval_list {
                for o in list {
                    text += &format!("  {:?}\n", o.points());
                }
            }
            emit(&common, &text, with_meta(&census, &meta(&common, field_description(&plane))))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { plane, points, pointed_at, common } => cmd_classify(&plane, points, pointed_at, &common),
        Command::Plane { action } => cmd_plane(action),
        Command::Ptr { plane, frame, common } => {
            let plane = plane_of(&plane, true)?;
            let (frame, labels) = match frame {
                Some(f) if f.len() != 4 => return Err(usage("--frame takes 4 points")),
                Some(f) => (Frame::from_quad([f[0], f[1], f[2], f[3]]), Labeling::PointOrder),
                None => plane.standard_frame().ok_or_else(|| usage("plane has no standard frame; give --frame"))?,
            };
            let ring = extract_ternary_ring(&plane, frame, &labels)?;
            let profile = ptr_properties(&ring);
            let text = format!("{}\n{}", plane.describe(), profile.to_text());
            emit(&common, &text, with_meta(&profile, &meta(&common, field_description(&plane))))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Desargues { plane, mode, budget, common } => {
            let plane = plane_of(&plane, true)?;
            let search = match mode {
                Mode::Exhaustive => DesarguesSearch { mode: DesarguesMode::Enumerate, budget, seed: common.seed },
                Mode::Random => DesarguesSearch::sampled(budget.unwrap_or(100_000), common.seed),
            };
            let out = find_desargues_violation(&plane, search, &exec(&common));
            let m = meta(&common, field_description(&plane));
            match out {
                DesarguesOutcome::Violation(cert) => {
                    let text = format!(
                        "Desargues violation in {}\n{}\n",
                        plane.name(),
                        serde_json::to_string_pretty(&cert).expect("json")
                    );
                    emit(&common, &text, with_meta(&cert, &m))?;
                }
                DesarguesOutcome::NoneFound { examined, exhaustive } => {
                    let verdict =
                        if exhaustive { "none (exhaustive)" } else { "none found within budget (inconclusive)" };
                    let text = format!(
                        "Desargues violation in {}: {verdict}; {examined} configurations examined\n",
                        plane.name()
                    );
                    let v = json!({"type": "desargues_search", "plane": plane.name(), "violation": null,
                        "examined": examined, "exhaustive": exhaustive});
                    emit(&common, &text, with_meta(&v, &m))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Mub { p, k, verify, input, fixture, char2_demo, emit: emit_set, tolerance, common } => {
            cmd_mub(p, k, verify, input.as_deref(), fixture, char2_demo, emit_set, tolerance, &common)
        }
        Command::Analogy { plane, common } => {
            let plane = plane_of(&plane, true)?;
            let d = plane.order();
            let mubs = match d {
                2 => Some(fixture_d2()),
                _ => match Field::of_order(d as u64) {
                    Ok(f) if f.characteristic() != 2 => Some(wf_mub_set(&f)?),
                    _ => None,
                },
            };
            let r = analogy_report(&plane, mubs.as_ref(), common.seed, &exec(&common))?;
            emit(&common, &r.to_text(), with_meta(&r, &meta(&common, field_description(&plane))))?;
            Ok(status(r.mubs_verified != Some(false)))
        }
        Command::ReproduceTable { long, budget, opoly, max_n, common } => {
            let opts = TableOptions { long, budget, opoly, max_n };
            let t = reproduce_table(&opts, &exec(&common))?;
            emit(&common, &t.to_text(), with_meta(&t, &meta(&common, "PG(2,2^n), n = 1..4")))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyCert { input, plane_file, common } => {
            let text = std::fs::read_to_string(&input)?;
            let verdict = verify_certificate_json(&text, plane_file.as_deref(), &exec(&common))?;
            let (ok, msg) = match verdict {
                Ok(m) => (true, format!("verified: {m}\n")),
                Err(m) => (false, format!("FAILED: {m}\n")),
            };
            emit(&common, &msg, json!({"verified": ok, "message": msg.trim_end()}))?;
            Ok(status(ok))
        }
    }
}

fn cmd_field(f: &FieldArgs, common: &Common) -> Res {
    let field = field_of(f)?;
    let mut text =
        format!("{}\norder {}, generator {}\n", field.describe(), field.order(), field.format(field.generator()));
    text += "index  element          trace  square\n";
    let mut rows = Vec::new();
    for a in field.elements() {
        let tr = field.trace(a).0;
        let sq = field.is_square(a);
        text += &format!("{:<6} {:<16} {:<6} {}\n", a.0, field.format(a), tr, if sq { "yes" } else { "no" });
        rows.push(json!({"index": a.0, "coeffs": field.coeffs(a), "trace": tr, "square": sq}));
    }
    let v =
        json!({"field": field.describe(), "order": field.order(), "generator": field.generator().0, "elements": rows});
    emit(common, &text, with_meta(&v, &meta(common, field.describe())))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_weil(f: &FieldArgs, survey: bool, at: Option<Vec<u32>>, common: &Common) -> Res {
    let field = field_of(f)?;
    let m = meta(common, field.describe());
    if survey {
        let s = weil_survey(&field, &exec(common));
        emit(common, &s.to_text(), with_meta(&s, &m))?;
        return Ok(status(!s.any_absent()));
    }
    let at = at.ok_or_else(|| usage("give --survey or --at m,n"))?;
    if at.len() != 2 {
        return Err(usage("--at takes two element indices"));
    }
    let (a, b) = (field.elem(at[0])?, field.elem(at[1])?);
    let w = weil_sum(&field, a, b)?;
    let mag = w.magnitude_sq().map(|x| x.to_string());
    let text = format!("W({}, {}) = {w}\n|W|^2 = {}\n", at[0], at[1], mag.clone().unwrap_or("not rational".into()));
    let v = json!({"m": at[0], "n": at[1], "sum": w.to_string(), "magnitude_sq": mag});
    emit(common, &text, with_meta(&v, &m))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_conic(q: u64, coeffs: Option<Vec<u32>>, common: &Common) -> Res {
    let plane = builtin_plane(&format!("PG(2,{q})"), None)?;
    let field = Arc::clone(plane.field().expect("PG"));
    let coords = plane.coordinates().expect("PG");
    let (conic, pts) = match coeffs {
        Some(c) if c.len() != 6 => return Err(usage("--coeffs takes six element indices")),
        Some(c) => {
            let mut e = [Elem::ZERO; 6];
            for (i, &x) in c.iter().enumerate() {
                e[i] = field.elem(x)?;
            }
            let conic = Conic::new(&field, e).ok_or_else(|| usage("conic coefficients are all zero"))?;
            (conic, conic_solutions(&plane, &conic)?)
        }
        None => (Conic::canonical(&field), canonical_conic(&plane)?.points().to_vec()),
    };
    let proper = conic.is_proper(&field);
    let arc = is_arc(&plane, &pts)?;
    let nuc = if proper && field.characteristic() == 2 && pts.len() == plane.order() + 1 {
        Some(nucleus(&plane, &pts)?)
    } else {
        None
    };
    let fmt_pt = |p: usize| {
        let z = coords.points[p].0;
        format!("({},{},{})", field.format(z[0]), field.format(z[1]), field.format(z[2]))
    };
    let mut text = format!("conic {:?} over {}\n", conic.coeff_indices(), field.describe());
    text += &format!("  proper: {proper}\n  points: {}\n", pts.len());
    for &p in &pts {
        text += &format!("    {p:<5} {}\n", fmt_pt(p));
    }
    text += &format!("  arc: {}\n", arc.is_arc());
    if let Some(n) = nuc {
        text += &format!("  nucleus: {n} {}\n", fmt_pt(n));
    }
    let v = json!({"conic_coeffs": conic.coeff_indices(), "proper": proper, "points": pts,
        "arc": arc.is_arc(), "nucleus": nuc});
    emit(common, &text, with_meta(&v, &meta(common, field.describe())))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(pa: &PlaneArgs, points: Option<Vec<usize>>, pointed_at: Option<usize>, common: &Common) -> Res {
    let plane = plane_of(pa, true)?;
    let pts = match (points, pointed_at) {
        (Some(p), None) => p,
        (None, Some(x)) => {
            let c = canonical_conic(&plane)?;
            pointed_conic(&plane, c.points(), x)?.points().to_vec()
        }
        (None, None) => canonical_conic(&plane)?.points().to_vec(),
        _ => return Err(usage("give at most one of --points, --pointed-at")),
    };
    let m = meta(common, field_description(&plane));
    match oval_certificate(&plane, &pts) {
        Ok(cert) => {
            let class = cert.class.map_or("unclassified".to_string(), |c| c.to_string());
            let text =
                format!("{class} oval in {}\n{}\n", plane.name(), serde_json::to_string_pretty(&cert).expect("json"));
            emit(common, &text, with_meta(&cert, &m))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(arcmub::Error::NotAnOval) => {
            let text = format!("{:?} is not an oval of {}\n", pts, plane.name());
            emit(common, &text, with_meta(&json!({"type": "oval", "points": pts, "oval": false}), &m))?;
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_plane(action: PlaneAction) -> Res {
    match action {
        PlaneAction::Info { plane, common } => {
            let p = plane_of(&plane, true)?;
            let text = format!(
                "{}\norder {}\npoints {}\nlines {}\npoints per line {}\n",
                p.describe(),
                p.order(),
                p.num_points(),
                p.num_lines(),
                p.order() + 1
            );
            let v = json!({"plane": p.name(), "description": p.describe(), "order": p.order(),
                "points": p.num_points(), "lines": p.num_lines()});
            emit(&common, &text, with_meta(&v, &meta(&common, p.describe())))?;
            Ok(ExitCode::SUCCESS)
        }
        PlaneAction::Verify { plane, common } => {
            let p = plane_of(&plane, false)?;
            let report = verify_plane_axioms(&p);
            emit(&common, &report.to_text(), with_meta(&report, &meta(&common, p.describe())))?;
            Ok(status(report.passed()))
        }
        PlaneAction::Save { plane, common } => {
            let p = plane_of(&plane, true)?;
            let mut buf = Vec::new();
            write_plane(&p, &mut buf)?;
            match &common.out {
                Some(path) => std::fs::write(path, buf)?,
                None => std::io::stdout().write_all(&buf)?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_mub(
    p: Option<u32>,
    k: u32,
    verify: bool,
    input: Option<&Path>,
    fixture: bool,
    char2_demo: bool,
    emit_set: bool,
    tolerance: Option<f64>,
    common: &Common,
) -> Res {
    let ex = exec(common);
    if let Some(tol) = tolerance {
        let path = input.ok_or_else(|| usage("--tolerance needs --in"))?;
        let set = FloatMubSet::from_json(&std::fs::read_to_string(path)?)?;
        let verdict = set.verify(tol)?;
        let text = match &verdict {
            Ok(()) => format!("{} bases, all unbiased within {tol}\n", set.bases.len()),
            Err(e) => format!("not unbiased within {tol}: {e}\n"),
        };
        emit(common, &text, json!({"verified": verdict.is_ok(), "tolerance": tol, "message": text.trim_end()}))?;
        return Ok(status(verdict.is_ok()));
    }
    if char2_demo {
        let field = Field::new(p.unwrap_or(2), k, None)?;
        let r = char2_failure_demo(&field, &ex)?;
        emit(common, &r.to_text(), with_meta(&r, &meta(common, field.describe())))?;
        return Ok(ExitCode::SUCCESS);
    }
    let (set, desc) = match (input, fixture, p) {
        (Some(path), false, None) => (MubSet::from_json(&std::fs::read_to_string(path)?)?, path.display().to_string()),
        (None, true, None) => (fixture_d2(), "dimension-2 fixture".to_string()),
        (None, false, Some(p)) => {
            let field = Field::new(p, k, None)?;
            match wf_mub_set(&field) {
                Ok(s) => (s, field.describe()),
                Err(arcmub::Error::EvenCharacteristic) => {
                    return Err(usage("quadratic phases need odd characteristic; see --char2-demo"))
                }
                Err(e) => return Err(e.into()),
            }
        }
        _ => return Err(usage("give exactly one of --p, --fixture, --in")),
    };
    if emit_set {
        emit(common, &(set.to_json() + "\n"), serde_json::from_str(&set.to_json()).expect("json"))?;
        return Ok(ExitCode::SUCCESS);
    }
    if !verify {
        let text = format!("d = {}, {} bases ({desc}); use --verify to check them\n", set.d, set.bases.len());
        emit(common, &text, json!({"d": set.d, "bases": set.bases.len()}))?;
        return Ok(ExitCode::SUCCESS);
    }
    let report = verify_mub_set(&set, &ex)?;
    emit(common, &report.to_text(), with_meta(&report, &meta(common, desc)))?;
    Ok(status(report.passed()))
}
