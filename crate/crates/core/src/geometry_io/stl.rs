//! STL reader (binary and ASCII) and binary writer.

use std::io::Write;

use crate::error::{PlanError, Result};
use crate::geom::Vec3;
use crate::geometry_io::TriangleMesh;
use crate::scalar::Scalar;

const HEADER_LEN: usize = 80;
const FACET_LEN: usize = 50;

pub(crate) type Soup = Vec<[Vec3<f64>; 3]>;

pub(crate) fn parse_binary(bytes: &[u8]) -> Result<Soup> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(PlanError::MalformedFile(format!(
            "binary STL truncated header ({} bytes)",
            bytes.len()
        )));
    }
    let count = u32::from_le_bytes(bytes[HEADER_LEN..HEADER_LEN + 4].try_into().unwrap()) as usize;
    let needed = count
        .checked_mul(FACET_LEN)
        .and_then(|n| n.checked_add(HEADER_LEN + 4))
        .ok_or_else(|| PlanError::MalformedFile("binary STL facet count overflows".into()))?;
    if bytes.len() < needed {
        return Err(PlanError::MalformedFile(format!(
            "binary STL declares {count} facets ({needed} bytes) but file has {} bytes",
            bytes.len()
        )));
    }
    let read_f32 = |off: usize| f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as f64;
    let soup = (0..count)
        .map(|i| {
            // skip the 12-byte normal, it is recomputed from winding
            let base = HEADER_LEN + 4 + i * FACET_LEN + 12;
            let v = |k: usize| {
                let o = base + 12 * k;
                Vec3::new(read_f32(o), read_f32(o + 4), read_f32(o + 8))
            };
            [v(0), v(1), v(2)]
        })
        .collect();
    Ok(soup)
}

pub(crate) fn parse_ascii(text: &str) -> Result<Soup> {
    let mut tokens = text.split_whitespace().peekable();
    let bad = |msg: &str| PlanError::MalformedFile(format!("ASCII STL: {msg}"));
    let mut soup = Vec::new();

    match tokens.next() {
        Some(t) if t.eq_ignore_ascii_case("solid") => {}
        _ => return Err(bad("missing `solid` keyword")),
    }
    let mut closed = false;
    let mut naming = true;
    while let Some(tok) = tokens.next() {
        let lower = tok.to_ascii_lowercase();
        match lower.as_str() {
            "facet" => {
                naming = false;
                expect(&mut tokens, "normal")?;
                for _ in 0..3 {
                    number(&mut tokens)?;
                }
                expect(&mut tokens, "outer")?;
                expect(&mut tokens, "loop")?;
                let mut tri = [Vec3::zero(); 3];
                for v in &mut tri {
                    expect(&mut tokens, "vertex")?;
                    *v = Vec3::new(number(&mut tokens)?, number(&mut tokens)?, number(&mut tokens)?);
                }
                expect(&mut tokens, "endloop")?;
                expect(&mut tokens, "endfacet")?;
                soup.push(tri);
                closed = false;
            }
            "endsolid" => {
                closed = true;
                naming = false;
                // optional name, then possibly another solid
                while let Some(t) = tokens.peek() {
                    if t.eq_ignore_ascii_case("solid") {
                        break;
                    }
                    tokens.next();
                }
            }
            "solid" if closed => {
                closed = false;
                naming = true;
            }
            // solid names may span several tokens before the first facet
            _ if naming => {}
            _ => return Err(bad(&format!("unexpected token `{tok}`"))),
        }
    }
    if !closed {
        return Err(bad("missing `endsolid`"));
    }
    Ok(soup)
}

fn expect<'a>(tokens: &mut impl Iterator<Item = &'a str>, word: &str) -> Result<()> {
    match tokens.next() {
        Some(t) if t.eq_ignore_ascii_case(word) => Ok(()),
        Some(t) => Err(PlanError::MalformedFile(format!("ASCII STL: expected `{word}`, found `{t}`"))),
        None => Err(PlanError::MalformedFile(format!("ASCII STL: expected `{word}`, found end of file"))),
    }
}

fn number<'a>(tokens: &mut impl Iterator<Item = &'a str>) -> Result<f64> {
    let t = tokens
        .next()
        .ok_or_else(|| PlanError::MalformedFile("ASCII STL: expected number, found end of file".into()))?;
    t.parse()
        .map_err(|_| PlanError::MalformedFile(format!("ASCII STL: bad number `{t}`")))
}

/// Writes `mesh` as binary STL with per-facet normals from the winding order.
pub fn write_binary_stl<T: Scalar, W: Write>(mesh: &TriangleMesh<T>, mut out: W) -> std::io::Result<()> {
    let mut header = [0u8; HEADER_LEN];
    let tag = b"binary STL";
    header[..tag.len()].copy_from_slice(tag);
    out.write_all(&header)?;
    out.write_all(&(mesh.triangles().len() as u32).to_le_bytes())?;
    let f = |x: T| x.to_f32().unwrap_or(0.0).to_le_bytes();
    for i in 0..mesh.triangles().len() {
        let [a, b, c] = mesh.triangle(i);
        let n = (b - a).cross(c - a).normalized().unwrap_or_else(Vec3::zero);
        for v in [n, a, b, c] {
            out.write_all(&f(v.x))?;
            out.write_all(&f(v.y))?;
            out.write_all(&f(v.z))?;
        }
        out.write_all(&[0, 0])?;
    }
    Ok(())
}
