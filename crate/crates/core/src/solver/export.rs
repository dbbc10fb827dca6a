//! CSV export of solutions and refinement tables.

use std::io::{self, Write};

use crate::geometry::export::fmt_f64;
use crate::geometry::Mesh;
use crate::scalar::Scalar;
use crate::solver::{ConvergenceRow, SolutionField};

/// `solution.csv`: `x,y,u1,u2` per vertex.
pub fn write_solution<T: Scalar, W: Write>(mesh: &Mesh<T>, field: &SolutionField<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "x,y,u1,u2")?;
    for (p, u) in mesh.vertices.iter().zip(&field.values) {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(p.x.as_f64()),
            fmt_f64(p.y.as_f64()),
            fmt_f64(u.u1.as_f64()),
            fmt_f64(u.u2.as_f64())
        )?;
    }
    Ok(())
}

/// `convergence.csv`: `h,l2_error,functional,energy_defect,stability_ratio`.
pub fn write_convergence<W: Write>(rows: &[ConvergenceRow], mut w: W) -> io::Result<()> {
    writeln!(w, "h,l2_error,functional,energy_defect,stability_ratio")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(r.h),
            fmt_f64(r.l2_error),
            fmt_f64(r.functional),
            fmt_f64(r.energy_defect),
            fmt_f64(r.stability_ratio)
        )?;
    }
    Ok(())
}
