//! Text output: CSV, OBJ, and key=value reports with fixed float formatting.

use std::io::{self, Write};

use crate::pdeverify::{PointResidual, ResidualReport};
use crate::surface::SurfaceSample;

pub const SURFACE_HEADER: &str = "u,v,t1,t2,x1,x2,x3,x4,E,K,kappa,type,singular";
pub const CURVATURE_HEADER: &str = "u,v,K,kappa,discriminant,singular";

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        if x == 0.0 {
            "0".to_string()
        } else {
            format!("{x}")
        }
    } else {
        format!("{x:e}")
    }
}

pub fn write_surface_csv(w: &mut impl Write, samples: &[SurfaceSample]) -> io::Result<()> {
    writeln!(w, "{SURFACE_HEADER}")?;
    for s in samples {
        let nums = [s.u, s.v, s.t1, s.t2, s.x.0[0], s.x.0[1], s.x.0[2], s.x.0[3], s.e, s.k, s.kappa];
        let cols: Vec<String> = nums.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(w, "{},{},{}", cols.join(","), s.surface_type, u8::from(s.singular))?;
    }
    Ok(())
}

pub fn write_curvature_csv(w: &mut impl Write, samples: &[SurfaceSample]) -> io::Result<()> {
    writeln!(w, "{CURVATURE_HEADER}")?;
    for s in samples {
        let d = s.k * s.k - s.kappa * s.kappa;
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(s.u),
            fmt_f64(s.v),
            fmt_f64(s.k),
            fmt_f64(s.kappa),
            fmt_f64(d),
            u8::from(s.singular)
        )?;
    }
    Ok(())
}

/// Wavefront OBJ of the projection dropping coordinate `drop` (0-based).
/// Quads touching a singular or non-finite vertex are skipped.
pub fn write_obj(w: &mut impl Write, samples: &[SurfaceSample], nu: usize, nv: usize, drop: usize) -> io::Result<()> {
    if samples.len() != nu * nv || drop > 3 {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "grid shape or projection axis mismatch"));
    }
    let keep: Vec<usize> = (0..4).filter(|&i| i != drop).collect();
    writeln!(w, "# projection: dropped x{}; kept x{}, x{}, x{}", drop + 1, keep[0] + 1, keep[1] + 1, keep[2] + 1)?;
    writeln!(w, "# grid {nu} x {nv}")?;
    for s in samples {
        let c: Vec<String> = keep.iter().map(|&i| fmt_f64(s.x.0[i])).collect();
        writeln!(w, "v {} {} {}", c[0], c[1], c[2])?;
    }
    let usable = |k: usize| !samples[k].singular && samples[k].x.is_finite();
    for i in 0..nu.saturating_sub(1) {
        for j in 0..nv.saturating_sub(1) {
            let (a, b, c, d) = (i * nv + j, i * nv + j + 1, (i + 1) * nv + j + 1, (i + 1) * nv + j);
            if [a, b, c, d].iter().all(|&k| usable(k)) {
                writeln!(w, "f {} {} {}", a + 1, b + 1, c + 1)?;
                writeln!(w, "f {} {} {}", a + 1, c + 1, d + 1)?;
            }
        }
    }
    Ok(())
}

pub fn write_report(w: &mut impl Write, report: &ResidualReport, pass: Option<bool>) -> io::Result<()> {
    write!(w, "{report}")?;
    if let Some(p) = pass {
        writeln!(w, "pass={p}")?;
    }
    Ok(())
}

pub fn write_residual_csv(w: &mut impl Write, points: &[PointResidual]) -> io::Result<()> {
    writeln!(w, "u,v,r1,r2")?;
    for p in points {
        writeln!(w, "{},{},{},{}", fmt_f64(p.u), fmt_f64(p.v), fmt_f64(p.r1), fmt_f64(p.r2))?;
    }
    Ok(())
}
