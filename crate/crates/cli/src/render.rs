//! Canonical JSON for command output: rationals as reduced `"p/q"`, lattice points as
//! integer arrays, object keys sorted.

use std::collections::BTreeMap;

use ccc_core::coherent::{GenObject, LineBundleCohomology};
use ccc_core::fan::{SkeletonCell, StackyFan};
use ccc_core::linalg::{fmt_rat, Int, Rat};
use serde_json::{json, Value};

pub fn rats(v: &[Rat]) -> Value {
    Value::from(v.iter().map(fmt_rat).collect::<Vec<_>>())
}

pub fn ints(v: &[Int]) -> Value {
    Value::from(v.iter().map(|x| i64::try_from(x).expect("small integer")).collect::<Vec<_>>())
}

pub fn dims(d: &BTreeMap<i32, usize>) -> Value {
    Value::Object(d.iter().map(|(k, v)| (k.to_string(), Value::from(*v))).collect())
}

pub fn generator(i: usize, sf: &StackyFan, g: &GenObject) -> Value {
    json!({ "id": i, "cone": g.cone, "rays": sf.fan().cone(g.cone).rays, "chi": rats(&g.chi) })
}

pub fn fan_summary(sf: &StackyFan) -> Value {
    let cones: Vec<Value> = (0..sf.fan().len())
        .map(|c| {
            json!({
                "id": c,
                "rays": sf.fan().cone(c).rays,
                "dim": sf.cone(c).dim(),
                "stabilizer": sf.stabilizer(c).to_string(),
                "cosets": sf.cosets(c).iter().map(|chi| rats(chi)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "name": sf.name(),
        "n_rank": sf.n_rank(),
        "l_rank": sf.l_rank(),
        "rays": sf.fan().rays().iter().map(|r| ints(r)).collect::<Vec<_>>(),
        "cones": cones,
        "complete": sf.fan().is_complete(),
        "simplicial": sf.fan().is_simplicial(),
    })
}

pub fn skeleton_cell(c: &SkeletonCell) -> Value {
    json!({
        "cone": c.cone,
        "chi": rats(&c.chi),
        "base_directions": c.perp_basis.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        "conormal_generators": c.conormal.generators().iter().map(|v| ints(v)).collect::<Vec<_>>(),
    })
}

pub fn cohomology(h: &LineBundleCohomology) -> Value {
    let per_degree: Vec<Value> =
        h.per_degree.iter().filter(|(_, v)| v.iter().any(|&x| x > 0)).map(|(m, v)| json!({ "m": ints(m), "dims": v })).collect();
    json!({ "window_radius": h.window, "totals": h.totals(), "per_degree": per_degree })
}

/// Pretty JSON on stdout; a closed pipe is not an error.
pub fn print(v: &Value) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}
