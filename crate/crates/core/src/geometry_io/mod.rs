//! Loading and cleaning structure meshes.
//!
//! STL (binary or ASCII) and ASCII PLY are supported. Every loader feeds the
//! same cleanup pass ([`preprocess`]) so that downstream slicing always sees a
//! welded, degenerate-free indexed mesh. Coordinates are taken as meters.

mod mesh;
mod ply;
mod stl;

use std::path::Path;

pub use mesh::{preprocess, TriangleMesh, DEFAULT_MIN_AREA, DEFAULT_WELD_TOL};
pub use stl::write_binary_stl;

use crate::error::{PlanError, Result};
use crate::geom::Vec3;
use crate::scalar::{lit, Scalar};

/// Input file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeshFormat {
    StlBinary,
    StlAscii,
    PlyAscii,
    /// Sniff the leading bytes. Files starting with `solid` are tried as ASCII
    /// STL first and fall back to binary if that parse fails.
    #[default]
    Auto,
}

/// Reads a mesh file and runs [`preprocess`] with the default tolerances.
pub fn load_mesh<T: Scalar>(path: impl AsRef<Path>, format: MeshFormat) -> Result<TriangleMesh<T>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => PlanError::FileNotFound(path.to_path_buf()),
        _ => PlanError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    parse_mesh(&bytes, format)
}

/// Parses mesh bytes already in memory. See [`load_mesh`].
pub fn parse_mesh<T: Scalar>(bytes: &[u8], format: MeshFormat) -> Result<TriangleMesh<T>> {
    if bytes.is_empty() {
        return Err(PlanError::MalformedFile("file is empty".into()));
    }
    let raw = match format {
        MeshFormat::StlBinary => soup_mesh(stl::parse_binary(bytes)?)?,
        MeshFormat::StlAscii => soup_mesh(stl::parse_ascii(as_text(bytes)?)?)?,
        MeshFormat::PlyAscii => indexed_mesh(ply::parse_ascii(as_text(bytes)?)?)?,
        MeshFormat::Auto => {
            let head = bytes.trim_ascii_start();
            if head.starts_with(b"solid") {
                let ascii = as_text(bytes).and_then(stl::parse_ascii);
                match ascii {
                    Ok(soup) => soup_mesh(soup)?,
                    Err(ascii_err) => match stl::parse_binary(bytes) {
                        Ok(soup) => soup_mesh(soup)?,
                        Err(_) => return Err(ascii_err),
                    },
                }
            } else if head.starts_with(b"ply") {
                indexed_mesh(ply::parse_ascii(as_text(bytes)?)?)?
            } else {
                soup_mesh(stl::parse_binary(bytes)?)?
            }
        }
    };
    preprocess(&raw, lit(DEFAULT_WELD_TOL), lit(DEFAULT_MIN_AREA))
}

fn as_text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|_| PlanError::MalformedFile("text format is not valid UTF-8".into()))
}

fn soup_mesh<T: Scalar>(soup: Vec<[Vec3<f64>; 3]>) -> Result<TriangleMesh<T>> {
    let soup: Vec<[Vec3<T>; 3]> = soup.iter().map(|t| [t[0].cast(), t[1].cast(), t[2].cast()]).collect();
    TriangleMesh::from_soup(&soup)
}

fn indexed_mesh<T: Scalar>((v, f): (Vec<Vec3<f64>>, Vec<[usize; 3]>)) -> Result<TriangleMesh<T>> {
    TriangleMesh::new(v.iter().map(|p| p.cast()).collect(), f)
}
