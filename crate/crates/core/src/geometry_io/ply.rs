//! ASCII PLY reader (vertices and triangular faces only).

use crate::error::{PlanError, Result};
use crate::geom::Vec3;

enum Property {
    Scalar(String),
    List(String),
}

struct Element {
    name: String,
    count: usize,
    props: Vec<Property>,
}

fn bad(msg: impl std::fmt::Display) -> PlanError {
    PlanError::MalformedFile(format!("PLY: {msg}"))
}

pub(crate) fn parse_ascii(text: &str) -> Result<(Vec<Vec3<f64>>, Vec<[usize; 3]>)> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err(bad("missing `ply` magic"));
    }

    let mut elements: Vec<Element> = Vec::new();
    let mut format_ok = false;
    loop {
        let line = lines.next().ok_or_else(|| bad("missing `end_header`"))?;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["end_header"] => break,
            ["format", "ascii", _] => format_ok = true,
            ["format", other, _] => return Err(bad(format_args!("unsupported format `{other}`"))),
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count.parse().map_err(|_| bad(format_args!("bad element count `{count}`")))?,
                props: Vec::new(),
            }),
            ["property", "list", _, _, name] => elements
                .last_mut()
                .ok_or_else(|| bad("property before element"))?
                .props
                .push(Property::List(name.to_string())),
            ["property", _, name] => elements
                .last_mut()
                .ok_or_else(|| bad("property before element"))?
                .props
                .push(Property::Scalar(name.to_string())),
            _ => return Err(bad(format_args!("unrecognized header line `{line}`"))),
        }
    }
    if !format_ok {
        return Err(bad("missing `format` line"));
    }

    let mut body = lines.filter(|l| !l.trim().is_empty());
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for el in &elements {
        let axis = |n: &str| {
            el.props
                .iter()
                .position(|p| matches!(p, Property::Scalar(s) if s == n))
        };
        let (ix, iy, iz) = (axis("x"), axis("y"), axis("z"));
        for row in 0..el.count {
            let line = body
                .next()
                .ok_or_else(|| bad(format_args!("element `{}` truncated at row {row}", el.name)))?;
            let mut tok = line.split_whitespace();
            let mut scalars: Vec<f64> = Vec::with_capacity(el.props.len());
            let mut list: Option<Vec<usize>> = None;
            for p in &el.props {
                match p {
                    Property::Scalar(_) => {
                        let t = tok.next().ok_or_else(|| bad("row too short"))?;
                        scalars.push(t.parse().map_err(|_| bad(format_args!("bad number `{t}`")))?);
                    }
                    Property::List(name) => {
                        let t = tok.next().ok_or_else(|| bad("row too short"))?;
                        let n: usize = t.parse().map_err(|_| bad(format_args!("bad list length `{t}`")))?;
                        let mut items = Vec::with_capacity(n);
                        for _ in 0..n {
                            let t = tok.next().ok_or_else(|| bad("list shorter than declared"))?;
                            items.push(t.parse().map_err(|_| bad(format_args!("bad index `{t}`")))?);
                        }
                        if name == "vertex_indices" || name == "vertex_index" {
                            list = Some(items);
                        }
                        scalars.push(f64::NAN);
                    }
                }
            }
            match el.name.as_str() {
                "vertex" => {
                    let (Some(x), Some(y), Some(z)) = (ix, iy, iz) else {
                        return Err(bad("vertex element lacks x/y/z"));
                    };
                    vertices.push(Vec3::new(scalars[x], scalars[y], scalars[z]));
                }
                "face" => {
                    let idx = list.ok_or_else(|| bad("face element lacks vertex_indices"))?;
                    if idx.len() != 3 {
                        return Err(bad(format_args!("face {row} has {} vertices, only triangles are supported", idx.len())));
                    }
                    faces.push([idx[0], idx[1], idx[2]]);
                }
                _ => {}
            }
        }
    }
    if let Some(f) = faces.iter().find(|f| f.iter().any(|&i| i >= vertices.len())) {
        return Err(bad(format_args!("face {f:?} references a missing vertex")));
    }
    Ok((vertices, faces))
}
