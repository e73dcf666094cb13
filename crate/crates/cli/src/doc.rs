//! Bunch, fan, projectable-fan and projected-cone documents.

use crate::codec::{self as json, JInt};
use crate::CliError;
use serde::Deserialize;
use serde_json::{Map, Value};
use std::sync::Arc;
use toricbunch::catalog::{Example, RawProjectedCone};
use toricbunch::linalg::IntMatrix;
use toricbunch::{Bunch, Cone, FaceSet, Fan, Int, Limits, ProjectableFan, ProjectedCone};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta {
    pub name: Option<String>,
    pub comment: Option<String>,
}

#[derive(Clone, Debug)]
pub enum Document {
    /// `bunch` is absent when the file only describes the projected cone.
    Bunch {
        meta: Meta,
        pc: Arc<ProjectedCone>,
        bunch: Option<Bunch>,
    },
    Fan {
        meta: Meta,
        fan: Fan,
    },
    ProjectableFan {
        meta: Meta,
        pf: ProjectableFan,
    },
    ProjectedCone {
        meta: Meta,
        raw: RawProjectedCone,
        faces: Vec<Vec<usize>>,
    },
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        use Document::*;
        match (self, other) {
            (
                Bunch {
                    meta: m1,
                    pc: p1,
                    bunch: b1,
                },
                Bunch {
                    meta: m2,
                    pc: p2,
                    bunch: b2,
                },
            ) => m1 == m2 && p1 == p2 && b1 == b2,
            (Fan { meta: m1, fan: f1 }, Fan { meta: m2, fan: f2 }) => m1 == m2 && f1 == f2,
            (ProjectableFan { meta: m1, pf: p1 }, ProjectableFan { meta: m2, pf: p2 }) => {
                m1 == m2 && p1 == p2
            }
            (
                ProjectedCone {
                    meta: m1,
                    raw: r1,
                    faces: f1,
                },
                ProjectedCone {
                    meta: m2,
                    raw: r2,
                    faces: f2,
                },
            ) => m1 == m2 && r1.q == r2.q && r1.gamma == r2.gamma && f1 == f2,
            _ => false,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    kind: String,
    name: Option<String>,
    comment: Option<String>,
    k_rank: Option<usize>,
    weights: Option<Vec<Vec<JInt>>>,
    q_matrix: Option<Vec<Vec<JInt>>>,
    gamma_generators: Option<Vec<Vec<JInt>>>,
    bunch: Option<Vec<Vec<usize>>>,
    n_rank: Option<usize>,
    rays: Option<Vec<Vec<JInt>>>,
    max_cones: Option<Vec<Vec<usize>>>,
    p_matrix: Option<Vec<Vec<JInt>>>,
    delta_generators: Option<Vec<Vec<JInt>>>,
    faces: Option<Vec<Vec<usize>>>,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn unwrap_ints(v: Vec<Vec<JInt>>) -> Vec<Vec<Int>> {
    v.into_iter()
        .map(|r| r.into_iter().map(|x| x.0).collect())
        .collect()
}

fn need<T>(x: Option<T>, field: &str, kind: &str) -> Result<T, CliError> {
    x.ok_or_else(|| parse_err(format!("{kind} document needs \"{field}\"")))
}

fn forbid(present: bool, field: &str, kind: &str) -> Result<(), CliError> {
    if present {
        Err(parse_err(format!(
            "field \"{field}\" does not belong in a {kind} document"
        )))
    } else {
        Ok(())
    }
}

fn matrix(rows: Vec<Vec<Int>>, field: &str) -> Result<IntMatrix, CliError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
        return Err(parse_err(format!(
            "\"{field}\" must be a nonempty rectangular matrix"
        )));
    }
    Ok(IntMatrix::from_rows(cols, rows))
}

fn face_set(idx: &[usize], n: usize, field: &str) -> Result<FaceSet, CliError> {
    if let Some(&i) = idx.iter().find(|&&i| i >= n) {
        return Err(parse_err(format!(
            "index {i} in \"{field}\" is out of range (0..{n})"
        )));
    }
    Ok(FaceSet::from_indices(idx.iter().copied()))
}

fn vectors_of_len(v: &[Vec<Int>], len: usize, field: &str) -> Result<(), CliError> {
    if v.iter().any(|x| x.len() != len) {
        return Err(parse_err(format!(
            "every entry of \"{field}\" must have length {len}"
        )));
    }
    Ok(())
}

pub fn parse(text: &str, limits: &Limits) -> Result<Document, CliError> {
    let raw: Raw = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.rfind(" at line ").map_or(msg.as_str(), |i| &msg[..i]);
        parse_err(format!("line {}, column {}: {msg}", e.line(), e.column()))
    })?;
    let meta = Meta {
        name: raw.name.clone(),
        comment: raw.comment.clone(),
    };
    match raw.kind.as_str() {
        "bunch" => parse_bunch(raw, meta, limits),
        "fan" => parse_fan(raw, meta),
        "projectable-fan" => parse_projectable_fan(raw, meta),
        "projected-cone" => parse_projected_cone(raw, meta),
        k => Err(parse_err(format!(
            "unknown document kind {k:?}; expected bunch, fan, projectable-fan or projected-cone"
        ))),
    }
}

fn parse_bunch(raw: Raw, meta: Meta, limits: &Limits) -> Result<Document, CliError> {
    let kind = "bunch";
    for (present, f) in [
        (raw.n_rank.is_some(), "n_rank"),
        (raw.rays.is_some(), "rays"),
        (raw.max_cones.is_some(), "max_cones"),
        (raw.p_matrix.is_some(), "p_matrix"),
        (raw.delta_generators.is_some(), "delta_generators"),
        (raw.faces.is_some(), "faces"),
    ] {
        forbid(present, f, kind)?;
    }
    let pc = match (raw.weights, raw.q_matrix, raw.gamma_generators) {
        (Some(w), None, None) => {
            let k = need(raw.k_rank, "k_rank", kind)?;
            let w = unwrap_ints(w);
            vectors_of_len(&w, k, "weights")?;
            ProjectedCone::from_weights(k, &w)?
        }
        (None, Some(q), Some(g)) => {
            let q = matrix(unwrap_ints(q), "q_matrix")?;
            if raw.k_rank.is_some_and(|k| k != q.nrows()) {
                return Err(parse_err("\"k_rank\" disagrees with the rows of \"q_matrix\""));
            }
            let g = unwrap_ints(g);
            vectors_of_len(&g, q.ncols(), "gamma_generators")?;
            ProjectedCone::new(q, g)?
        }
        _ => {
            return Err(parse_err(
                "bunch document needs either \"weights\" or both \"q_matrix\" and \"gamma_generators\"",
            ))
        }
    };
    let pc = Arc::new(pc);
    let bunch = match raw.bunch {
        None => None,
        Some(cones) => {
            let faces = cones
                .iter()
                .map(|c| face_set(c, pc.e_rank(), "bunch"))
                .collect::<Result<Vec<_>, _>>()?;
            Some(Bunch::from_faces(pc.clone(), &faces, limits)?)
        }
    };
    Ok(Document::Bunch { meta, pc, bunch })
}

fn parse_fan(raw: Raw, meta: Meta) -> Result<Document, CliError> {
    let kind = "fan";
    for (present, f) in [
        (raw.k_rank.is_some(), "k_rank"),
        (raw.weights.is_some(), "weights"),
        (raw.q_matrix.is_some(), "q_matrix"),
        (raw.gamma_generators.is_some(), "gamma_generators"),
        (raw.bunch.is_some(), "bunch"),
        (raw.p_matrix.is_some(), "p_matrix"),
        (raw.delta_generators.is_some(), "delta_generators"),
        (raw.faces.is_some(), "faces"),
    ] {
        forbid(present, f, kind)?;
    }
    let n = need(raw.n_rank, "n_rank", kind)?;
    let rays = unwrap_ints(need(raw.rays, "rays", kind)?);
    vectors_of_len(&rays, n, "rays")?;
    if rays.len() >= 64 {
        return Err(parse_err("at most 63 rays are supported"));
    }
    let cones = need(raw.max_cones, "max_cones", kind)?
        .iter()
        .map(|c| face_set(c, rays.len(), "max_cones"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Document::Fan {
        meta,
        fan: Fan::new(n, rays, cones)?,
    })
}

fn parse_projectable_fan(raw: Raw, meta: Meta) -> Result<Document, CliError> {
    let kind = "projectable-fan";
    for (present, f) in [
        (raw.k_rank.is_some(), "k_rank"),
        (raw.weights.is_some(), "weights"),
        (raw.q_matrix.is_some(), "q_matrix"),
        (raw.gamma_generators.is_some(), "gamma_generators"),
        (raw.bunch.is_some(), "bunch"),
        (raw.n_rank.is_some(), "n_rank"),
        (raw.rays.is_some(), "rays"),
        (raw.faces.is_some(), "faces"),
    ] {
        forbid(present, f, kind)?;
    }
    let p = matrix(unwrap_ints(need(raw.p_matrix, "p_matrix", kind)?), "p_matrix")?;
    let d = unwrap_ints(need(raw.delta_generators, "delta_generators", kind)?);
    vectors_of_len(&d, p.ncols(), "delta_generators")?;
    let dpc = Arc::new(ProjectedCone::new(p, d)?);
    let faces = need(raw.max_cones, "max_cones", kind)?
        .iter()
        .map(|c| face_set(c, dpc.e_rank(), "max_cones"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Document::ProjectableFan {
        meta,
        pf: ProjectableFan::new(dpc, faces)?,
    })
}

fn parse_projected_cone(raw: Raw, meta: Meta) -> Result<Document, CliError> {
    let kind = "projected-cone";
    for (present, f) in [
        (raw.k_rank.is_some(), "k_rank"),
        (raw.weights.is_some(), "weights"),
        (raw.bunch.is_some(), "bunch"),
        (raw.n_rank.is_some(), "n_rank"),
        (raw.rays.is_some(), "rays"),
        (raw.max_cones.is_some(), "max_cones"),
        (raw.p_matrix.is_some(), "p_matrix"),
        (raw.delta_generators.is_some(), "delta_generators"),
    ] {
        forbid(present, f, kind)?;
    }
    let q = matrix(unwrap_ints(need(raw.q_matrix, "q_matrix", kind)?), "q_matrix")?;
    let g = unwrap_ints(need(raw.gamma_generators, "gamma_generators", kind)?);
    vectors_of_len(&g, q.ncols(), "gamma_generators")?;
    let gamma = Cone::from_generators(q.ncols(), &g);
    if !gamma.is_full_dim() || !gamma.is_strictly_convex() {
        return Err(CliError::Verify(
            "γ must be full-dimensional and strictly convex".into(),
        ));
    }
    if !toricbunch::linalg::is_surjective(&q) {
        return Err(CliError::Verify("Q is not surjective".into()));
    }
    let mut faces = Vec::new();
    for f in raw.faces.unwrap_or_default() {
        face_set(&f, g.len(), "faces")?;
        let c = Cone::from_generators(q.ncols(), &f.iter().map(|&i| g[i].clone()).collect::<Vec<_>>());
        if !c.is_face_of(&gamma) {
            return Err(CliError::Verify(format!("{f:?} does not span a face of γ")));
        }
        faces.push(ray_indices(&gamma, &c));
    }
    Ok(Document::ProjectedCone {
        meta,
        raw: RawProjectedCone { q, gamma },
        faces,
    })
}

fn header(kind: &str, meta: &Meta) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("kind".into(), kind.into());
    if let Some(n) = &meta.name {
        m.insert("name".into(), n.clone().into());
    }
    if let Some(c) = &meta.comment {
        m.insert("comment".into(), c.clone().into());
    }
    m
}

fn face_lists(fs: &[FaceSet]) -> Value {
    Value::Array(fs.iter().map(|f| json::indices(&f.indices())).collect())
}

pub fn to_value(doc: &Document) -> Value {
    let mut m;
    match doc {
        Document::Bunch { meta, pc, bunch } => {
            m = header("bunch", meta);
            m.insert("k_rank".into(), pc.k_rank().into());
            if pc.is_orthant() {
                m.insert("weights".into(), json::vectors(&pc.weights()));
            } else {
                m.insert("q_matrix".into(), json::vectors(pc.q().rows()));
                m.insert("gamma_generators".into(), json::vectors(pc.gamma_generators()));
            }
            if let Some(b) = bunch {
                let w: Vec<FaceSet> = b.elements().iter().map(|e| e.witness).collect();
                m.insert("bunch".into(), face_lists(&w));
            }
        }
        Document::Fan { meta, fan } => {
            m = header("fan", meta);
            m.insert("n_rank".into(), fan.n_rank().into());
            m.insert("rays".into(), json::vectors(fan.rays()));
            m.insert("max_cones".into(), face_lists(fan.max_cones()));
        }
        Document::ProjectableFan { meta, pf } => {
            m = header("projectable-fan", meta);
            m.insert("p_matrix".into(), json::vectors(pf.dpc().q().rows()));
            m.insert(
                "delta_generators".into(),
                json::vectors(pf.dpc().gamma_generators()),
            );
            m.insert("max_cones".into(), face_lists(pf.max_faces()));
        }
        Document::ProjectedCone { meta, raw, faces } => {
            m = header("projected-cone", meta);
            m.insert("q_matrix".into(), json::vectors(raw.q.rows()));
            m.insert("gamma_generators".into(), json::vectors(raw.gamma.rays()));
            if !faces.is_empty() {
                m.insert(
                    "faces".into(),
                    Value::Array(faces.iter().map(|f| json::indices(f)).collect()),
                );
            }
        }
    }
    Value::Object(m)
}

pub fn to_string(doc: &Document) -> String {
    json::to_string(&to_value(doc))
}

/// Indices of `cone`'s generators among the rays of γ.
fn ray_indices(gamma: &Cone, cone: &Cone) -> Vec<usize> {
    (0..gamma.rays().len())
        .filter(|&i| cone.contains_int(&gamma.rays()[i]))
        .collect()
}

pub fn from_example(name: &str, ex: Example) -> Document {
    let meta = Meta {
        name: Some(name.to_string()),
        comment: None,
    };
    match ex {
        Example::Bunch(b) => Document::Bunch {
            meta,
            pc: b.pc().clone(),
            bunch: Some(b),
        },
        Example::Fan(fan) => Document::Fan { meta, fan },
        Example::ProjectableFan(pf) => Document::ProjectableFan { meta, pf },
        Example::RawProjectedCone(raw) => {
            let (_, g1, g2) = toricbunch::catalog::nonsimplicial_separation();
            let faces = if name == "nonsimplicial-separation" {
                vec![ray_indices(&raw.gamma, &g1), ray_indices(&raw.gamma, &g2)]
            } else {
                vec![]
            };
            Document::ProjectedCone { meta, raw, faces }
        }
    }
}
