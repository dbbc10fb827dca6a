//! CSV export of meshes. Floats are written with 17 significant digits.

use std::io::{self, Write};

use crate::geometry::mesh::Mesh;
use crate::scalar::Scalar;

/// Full-precision float formatting shared by every CSV writer.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `vertices.csv`: `id,x,y`
pub fn write_vertices<T: Scalar, W: Write>(mesh: &Mesh<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "id,x,y")?;
    for (i, p) in mesh.vertices.iter().enumerate() {
        writeln!(w, "{i},{},{}", fmt_f64(p.x.as_f64()), fmt_f64(p.y.as_f64()))?;
    }
    Ok(())
}

/// `triangles.csv`: `v0,v1,v2`
pub fn write_triangles<T: Scalar, W: Write>(mesh: &Mesh<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "v0,v1,v2")?;
    for t in &mesh.triangles {
        writeln!(w, "{},{},{}", t[0], t[1], t[2])?;
    }
    Ok(())
}

/// `boundary.csv`: `x,y,n1,n2,class,weight`, one row per boundary edge sample.
pub fn write_boundary<T: Scalar, W: Write>(mesh: &Mesh<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "x,y,n1,n2,class,weight")?;
    for e in &mesh.boundary_edges {
        let s = &e.sample;
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(s.point.x.as_f64()),
            fmt_f64(s.point.y.as_f64()),
            fmt_f64(s.normal.n1.as_f64()),
            fmt_f64(s.normal.n2.as_f64()),
            s.arc_class.name(),
            fmt_f64(s.weight.as_f64()),
        )?;
    }
    Ok(())
}
