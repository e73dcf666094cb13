//! Reports as JSON values, and their plain-text rendering.

use crate::codec as json;
use serde_json::{json, Map, Value};
use toricbunch::catalog::RawProjectedCone;
use toricbunch::classify::{FanoDiagnosis, KleinschmidtData};
use toricbunch::cone::relint_overlap;
use toricbunch::divisor::{self, DivisorClassReport};
use toricbunch::fan::all_fan_cones;
use toricbunch::{Bunch, Cone, FaceSet, Fan, Limits, ProjectableFan, ProjectedCone, Rat};

pub fn rat(x: &Rat) -> Value {
    if x.is_integer() {
        json::int(x.numer())
    } else {
        Value::String(x.to_string())
    }
}

pub fn cone(c: &Cone) -> Value {
    let mut m = Map::new();
    m.insert("rays".into(), json::vectors(c.rays()));
    if !c.lineality().is_empty() {
        m.insert("lineality".into(), json::vectors(c.lineality()));
    }
    Value::Object(m)
}

fn faces(fs: &[FaceSet]) -> Value {
    Value::Array(fs.iter().map(|f| json::indices(&f.indices())).collect())
}

pub fn projected_cone(pc: &ProjectedCone) -> Value {
    json!({
        "k_rank": pc.k_rank(),
        "e_rank": pc.e_rank(),
        "free": pc.is_free(),
        "weights": json::vectors(&pc.weights()),
    })
}

pub fn bunch(b: &Bunch) -> Value {
    let d = b.dictionary();
    let mut m = match projected_cone(b.pc()) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    m.insert("standard".into(), b.is_standard().into());
    m.insert("free".into(), b.is_free().into());
    m.insert("geometric".into(), b.is_geometric().into());
    m.insert("simple".into(), b.is_simple().into());
    m.insert(
        "dictionary".into(),
        json!({
            "q_factorial": d.q_factorial,
            "smooth": d.smooth,
            "complete": d.complete,
            "full": d.full,
            "only_constant_functions": d.only_constant_functions,
        }),
    );
    m.insert(
        "cones".into(),
        Value::Array(b.cones().iter().map(|c| json::vectors(&c.generators())).collect()),
    );
    m.insert("covering_collection".into(), faces(&b.covering_collection()));
    if b.is_standard() {
        if let Ok(all) = all_fan_cones(b) {
            m.insert("fan_cones".into(), all.len().into());
        }
    }
    Value::Object(m)
}

pub fn fan(f: &Fan, limits: &Limits) -> Value {
    let o = f.oracles(limits);
    let (rank, torsion) = f.class_group();
    json!({
        "n_rank": f.n_rank(),
        "rays": f.rays().len(),
        "max_cones": f.max_cones().len(),
        "smooth": o.smooth,
        "simplicial": o.simplicial,
        "complete": o.complete,
        "quasiprojective": o.quasiprojective,
        "nondegenerate": o.nondegenerate,
        "two_complete": o.two_complete,
        "pure_full_dim": o.pure_full_dim,
        "only_constant_functions": o.only_constant_functions,
        "class_group": {"rank": rank, "torsion": json::vector(&torsion)},
    })
}

pub fn projectable_fan(pf: &ProjectableFan, limits: &Limits) -> toricbunch::Result<Value> {
    let (q, _) = pf.quotient_fan();
    Ok(json!({
        "e_rank": pf.dpc().e_rank(),
        "n_rank": pf.dpc().k_rank(),
        "max_cones": faces(pf.max_faces()),
        "maximal": pf.is_maximal(limits)?,
        "quotient_fan": {"rays": json::vectors(q.rays()), "max_cones": faces(q.max_cones())},
    }))
}

pub fn raw_projected_cone(raw: &RawProjectedCone, fs: &[Vec<usize>]) -> Value {
    let face = |f: &[usize]| {
        let g: Vec<_> = f.iter().map(|&i| raw.gamma.rays()[i].clone()).collect();
        Cone::from_generators(raw.gamma.ambient_dim(), &g)
    };
    let mut pairs = Vec::new();
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let (a, b) = (face(&fs[i]), face(&fs[j]));
            let overlap = relint_overlap(&raw.projected(&a), &raw.projected(&b));
            let sep = raw.invariant_separation(&a, &b);
            pairs.push(json!({
                "faces": [i, j],
                "projected_relints_meet": overlap,
                "invariant_separating_form": sep.map_or(Value::Null, |u| Value::Array(u.iter().map(rat).collect())),
            }));
        }
    }
    json!({
        "k_rank": raw.q.nrows(),
        "e_rank": raw.q.ncols(),
        "simplicial": raw.gamma.is_simplicial(),
        "faces": fs.iter().map(|f| json::indices(f)).collect::<Vec<_>>(),
        "face_stars": fs.iter().map(|f| cone(&raw.face_star(&face(f)))).collect::<Vec<_>>(),
        "pairs": pairs,
    })
}

pub fn divisors(b: &Bunch, r: &DivisorClassReport) -> Value {
    let mut m = Map::new();
    m.insert(
        "class_group".into(),
        json!({"rank": r.cl_rank, "torsion": json::vector(&r.cl_torsion)}),
    );
    m.insert("pic_q_dim".into(), r.b2.into());
    m.insert("pic_q_basis".into(), json::vectors(&r.pic_q_basis));
    if b.is_free() {
        if let Ok(p) = divisor::pic_lattice_free(b) {
            m.insert("pic_lattice".into(), json::vectors(p.vectors()));
        }
    }
    m.insert("semiample_cone".into(), cone(&r.semiample_cone));
    m.insert("ample_nonempty".into(), r.ample_nonempty.into());
    if let Some(w) = divisor::ample_class(b) {
        m.insert("ample_class".into(), json::vector(&w));
    }
    m.insert("mori_cone".into(), r.mori_cone.as_ref().map_or(Value::Null, cone));
    if let Some(mc) = &r.mori_cone {
        m.insert("mori_strictly_convex".into(), mc.is_strictly_convex().into());
    }
    m.insert(
        "canonical_class".into(),
        r.canonical_class
            .as_ref()
            .map_or(Value::Null, |k| json::vector(k)),
    );
    m.insert(
        "q_gorenstein".into(),
        r.q_gorenstein.map_or(Value::Null, Value::from),
    );
    m.insert("fano".into(), r.fano.map_or(Value::Null, Value::from));
    Value::Object(m)
}

pub fn kleinschmidt_row(d: &KleinschmidtData, f: &FanoDiagnosis) -> Value {
    json!({
        "dimension": d.dimension(),
        "n": d.n(),
        "b": d.b,
        "mu": d.mu,
        "fano": f.ample,
        "closed_form": f.aligned,
        "literal_inequality": f.literal,
        "literal_disagrees": f.literal != f.ample,
    })
}

/// Plain-text rendering: one `key: value` line per field, nesting indented.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !matches!(x, Value::Object(_))) => {
            let parts: Option<Vec<String>> = a.iter().map(inline).collect();
            let s = format!("[{}]", parts?.join(", "));
            (s.len() <= 72).then_some(s)
        }
        Value::Array(_) | Value::Object(_) => None,
        x => Some(x.to_string()),
    }
}

fn render_into(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            let width = m.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, x) in m {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k:width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", inline(x).unwrap_or_default())),
    }
}

/// The weight vectors of a rank-two projected cone drawn on the integer
/// grid: digits give multiplicities, `o` marks the origin.
pub fn picture(pc: &ProjectedCone) -> Option<String> {
    if pc.k_rank() != 2 {
        return None;
    }
    let pts: Vec<(i64, i64)> = pc
        .weights()
        .iter()
        .map(|w| Some((i64::try_from(&w[0]).ok()?, i64::try_from(&w[1]).ok()?)))
        .collect::<Option<_>>()?;
    let (x0, x1) = (
        pts.iter().map(|p| p.0).min()?.min(0),
        pts.iter().map(|p| p.0).max()?.max(0),
    );
    let (y0, y1) = (
        pts.iter().map(|p| p.1).min()?.min(0),
        pts.iter().map(|p| p.1).max()?.max(0),
    );
    if x1 - x0 > 30 || y1 - y0 > 30 {
        return None;
    }
    let mut out = String::new();
    for y in (y0..=y1).rev() {
        let row: Vec<String> = (x0..=x1)
            .map(|x| {
                let m = pts.iter().filter(|&&p| p == (x, y)).count();
                match (m, x == 0 && y == 0) {
                    (0, true) => "o".into(),
                    (0, false) => ".".into(),
                    (m, _) if m < 10 => m.to_string(),
                    _ => "*".into(),
                }
            })
            .collect();
        out.push_str(&format!("{:>4} {}\n", y, row.join(" ")));
    }
    Some(out)
}
