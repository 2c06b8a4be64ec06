//! Mesh files (ASCII OFF, OBJ) and point-cloud files (PCF1 binary, CSV).
//!
//! PCF1 layout, little endian: the 4 magic bytes `PCF1`, a `u32` point count,
//! then `count × 3` `f32` coordinates.

use std::io::{BufRead, Read, Write};

use super::{Point3, PointCloud, TriangleMesh};
use crate::error::{Error, Result};

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn write_off<W: Write>(mesh: &TriangleMesh, mut w: W) -> Result<()> {
    writeln!(w, "OFF")?;
    writeln!(w, "{} {} 0", mesh.vertices.len(), mesh.triangles.len())?;
    for p in &mesh.vertices {
        writeln!(w, "{} {} {}", p.x, p.y, p.z)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}

/// Non-comment, non-empty lines split into whitespace tokens.
fn tokens<R: BufRead>(r: R) -> Result<Vec<Vec<String>>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if !content.is_empty() {
            out.push(content.split_whitespace().map(str::to_owned).collect());
        }
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| bad(format!("cannot parse number `{s}`")))
}

pub fn read_off<R: BufRead>(r: R) -> Result<TriangleMesh> {
    let lines = tokens(r)?;
    let mut it = lines.into_iter();
    let mut header = it.next().ok_or_else(|| bad("empty OFF file"))?;
    if header.first().map(String::as_str) != Some("OFF") {
        return Err(bad("missing OFF header"));
    }
    header.remove(0);
    let counts = if header.is_empty() {
        it.next().ok_or_else(|| bad("missing OFF counts"))?
    } else {
        header
    };
    if counts.len() < 2 {
        return Err(bad("OFF counts line needs vertex and face counts"));
    }
    let nv: usize = num(&counts[0])?;
    let nf: usize = num(&counts[1])?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let l = it.next().ok_or_else(|| bad("truncated OFF vertex list"))?;
        if l.len() < 3 {
            return Err(bad("OFF vertex needs three coordinates"));
        }
        vertices.push(Point3::new(num(&l[0])?, num(&l[1])?, num(&l[2])?));
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let l = it.next().ok_or_else(|| bad("truncated OFF face list"))?;
        let k: usize = num(&l[0])?;
        if k != 3 || l.len() < 4 {
            return Err(bad("only triangular OFF faces are supported"));
        }
        triangles.push([num(&l[1])?, num(&l[2])?, num(&l[3])?]);
    }
    TriangleMesh::new(vertices, triangles)
}

pub fn write_obj<W: Write>(mesh: &TriangleMesh, mut w: W) -> Result<()> {
    for p in &mesh.vertices {
        writeln!(w, "v {} {} {}", p.x, p.y, p.z)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

pub fn read_obj<R: BufRead>(r: R) -> Result<TriangleMesh> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for l in tokens(r)? {
        match l[0].as_str() {
            "v" if l.len() >= 4 => {
                vertices.push(Point3::new(num(&l[1])?, num(&l[2])?, num(&l[3])?))
            }
            "f" if l.len() == 4 => {
                let mut t = [0u32; 3];
                for (slot, tok) in t.iter_mut().zip(&l[1..]) {
                    // `f v/vt/vn`: only the position index is used.
                    let idx: i64 = num(tok.split('/').next().unwrap_or(""))?;
                    if idx < 1 {
                        return Err(bad("OBJ face indices must be positive"));
                    }
                    *slot = (idx - 1) as u32;
                }
                triangles.push(t);
            }
            "f" => return Err(bad("only triangular OBJ faces are supported")),
            _ => {}
        }
    }
    TriangleMesh::new(vertices, triangles)
}

pub const PCF_MAGIC: &[u8; 4] = b"PCF1";

pub fn write_pcf<W: Write>(cloud: &PointCloud, mut w: W) -> Result<()> {
    w.write_all(PCF_MAGIC)?;
    let n = u32::try_from(cloud.len()).map_err(|_| bad("cloud too large for PCF1"))?;
    w.write_all(&n.to_le_bytes())?;
    for p in &cloud.points {
        for c in [p.x, p.y, p.z] {
            w.write_all(&(c as f32).to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_pcf<R: Read>(mut r: R) -> Result<PointCloud> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != PCF_MAGIC {
        return Err(bad("missing PCF1 magic"));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let n = u32::from_le_bytes(word) as usize;
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let mut c = [0f64; 3];
        for slot in &mut c {
            r.read_exact(&mut word)?;
            *slot = f64::from(f32::from_le_bytes(word));
        }
        points.push(Point3::new(c[0], c[1], c[2]));
    }
    Ok(PointCloud { points })
}

pub fn write_cloud_csv<W: Write>(cloud: &PointCloud, mut w: W) -> Result<()> {
    writeln!(w, "x,y,z")?;
    for p in &cloud.points {
        writeln!(w, "{:?},{:?},{:?}", p.x, p.y, p.z)?;
    }
    Ok(())
}

pub fn read_cloud_csv<R: BufRead>(r: R) -> Result<PointCloud> {
    let mut points = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with('x')) {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(bad(format!("line {}: expected x,y,z", i + 1)));
        }
        points.push(Point3::new(
            num(f[0].trim())?,
            num(f[1].trim())?,
            num(f[2].trim())?,
        ));
    }
    Ok(PointCloud { points })
}
