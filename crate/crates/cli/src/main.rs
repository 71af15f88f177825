use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sublorentz::causal::{default_tolerance, membership, BeakStratum};
use sublorentz::distance::{distance_bounds, distance_with_tolerance};
use sublorentz::exponential::{exp_inverse, exp_map, ExpCoords};
use sublorentz::spheres::{f_profile, sphere_mesh, sphere_section, SectionPlane};
use sublorentz::synthesis::{maximizer, TrajectoryKind};
use sublorentz::{CausalMembership, Error, Point};

mod check;
mod output;

use check::Level;
use output::{Cell, Format, Table};

/// Sub-Lorentzian geometry on the Heisenberg group.
#[derive(Debug, Parser)]
#[command(name = "sublorentz", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s:?} is not a decimal number: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance from the identity to (x, y, z).
    Dist {
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        x: f64,
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        y: f64,
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        z: f64,
        /// Tolerance on 4|z| - (x^2 - y^2) for the beak [default: 1e-10 max(1, x^2)].
        #[arg(long, value_parser = finite)]
        tol: Option<f64>,
    },
    /// Endpoint Exp(psi, c, t) of a timelike extremal.
    Exp {
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        psi: f64,
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        c: f64,
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        t: f64,
    },
    /// Exp coordinates (psi, c, t) of an interior point, with the round-trip residual.
    Invexp {
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        x: f64,
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        y: f64,
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        z: f64,
    },
    /// Samples of the length maximizer from the identity to (x, y, z).
    Maximizer {
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        x: f64,
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        y: f64,
        #[arg(value_parser = finite, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Mesh or planar section of the sphere S(R); R = 0 gives the beak.
    Sphere {
        #[arg(long = "R", value_parser = finite, default_value_t = 1.0)]
        radius: f64,
        /// Vertices along y and z.
        #[arg(long, num_args = 2, value_names = ["NY", "NZ"], default_values_t = [21, 21])]
        grid: Vec<usize>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = finite, allow_negative_numbers = true, default_values_t = [-2.0, 2.0])]
        yrange: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = finite, allow_negative_numbers = true, default_values_t = [-2.0, 2.0])]
        zrange: Vec<f64>,
        /// Emit the quads of the mesh instead of its vertices.
        #[arg(long)]
        quads: bool,
        /// Plane `z=C`, `x=C` or `y=Kx` (also `y=0`, `y=x`, `y=-x`).
        #[arg(long, allow_hyphen_values = true)]
        section: Option<String>,
        /// Samples per section branch.
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Bound on |y| for z-sections and on x for y=Kx sections.
        #[arg(long, value_parser = finite, default_value_t = 2.0)]
        extent: f64,
    },
    /// The sphere profile f(z) with its envelope 4|z| < f(z) < 4|z| + 1.
    Profile {
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = finite, allow_negative_numbers = true, default_values_t = [-3.0, 3.0])]
        zrange: Vec<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Distance sampled on a grid in one of the planes x=C, y=C or z=C.
    DistGrid {
        /// Plane `x=C`, `y=C` or `z=C`.
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
        /// Range of the first free coordinate (alphabetical order).
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = finite, allow_negative_numbers = true, default_values_t = [-2.0, 2.0])]
        urange: Vec<f64>,
        /// Range of the second free coordinate.
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = finite, allow_negative_numbers = true, default_values_t = [-2.0, 2.0])]
        vrange: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["NU", "NV"], default_values_t = [41, 41])]
        grid: Vec<usize>,
    },
    /// Seeded invariant suite; exits 3 if any group fails.
    Check {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::Unreachable { .. } | Error::NotInterior { .. } | Error::EmptySection) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let out = cli.out.as_deref();
    let table = match &cli.command {
        Command::Dist { x, y, z, tol } => dist(*x, *y, *z, *tol)?,
        Command::Exp { psi, c, t } => {
            let q = exp_map(ExpCoords::new(*psi, *c, *t)?)?;
            let mut table = Table::new("exp", &["psi", "c", "t", "x", "y", "z"]).param("psi", *psi).param("c", *c).param("t", *t);
            table.push(vec![(*psi).into(), (*c).into(), (*t).into(), q.x.into(), q.y.into(), q.z.into()]);
            table
        }
        Command::Invexp { x, y, z } => {
            let q = Point::new(*x, *y, *z);
            let lc = exp_inverse(q)?;
            let back = exp_map(lc)?;
            let residual = back.coord_distance(&q) / q.max_abs().max(1.0);
            let mut table =
                Table::new("invexp", &["x", "y", "z", "psi", "c", "t", "residual"]).param("x", *x).param("y", *y).param("z", *z);
            table.push(vec![q.x.into(), q.y.into(), q.z.into(), lc.psi.into(), lc.c.into(), lc.t.into(), residual.into()]);
            table
        }
        Command::Maximizer { x, y, z, samples } => trajectory(Point::new(*x, *y, *z), *samples)?,
        Command::Sphere { radius, grid, yrange, zrange, quads, section, samples, extent } => match section {
            Some(text) => section_table(*radius, text, *samples, *extent)?,
            None => mesh_table(*radius, (yrange[0], yrange[1]), (zrange[0], zrange[1]), grid[0], grid[1], *quads)?,
        },
        Command::Profile { zrange, samples } => profile(zrange[0], zrange[1], *samples)?,
        Command::DistGrid { plane, urange, vrange, grid } => {
            dist_grid(plane, (urange[0], urange[1]), (vrange[0], vrange[1]), grid[0], grid[1])?
        }
        Command::Check { level, seed } => {
            let results = check::run(*level, *seed);
            let mut table = Table::new("check", &["group", "cases", "worst", "tolerance", "status"])
                .param("level", format!("{level:?}").to_lowercase())
                .param("seed", Cell::Int(*seed as i64));
            for r in &results {
                let status = if r.passed() { "pass" } else { "fail" };
                table.push(vec![r.name.into(), r.cases.into(), r.worst.into(), r.tolerance.into(), status.into()]);
            }
            table.write(cli.format, out)?;
            let all = results.iter().all(check::GroupResult::passed);
            return Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(3) });
        }
    };
    table.write(cli.format, out)?;
    Ok(ExitCode::SUCCESS)
}

fn dist(x: f64, y: f64, z: f64, tol: Option<f64>) -> Result<Table> {
    let q = Point::new(x, y, z);
    let tol = tol.unwrap_or_else(|| default_tolerance(q));
    let class = membership(q, tol);
    if class == CausalMembership::Outside {
        bail!(Error::Unreachable { x, y, z });
    }
    let d = distance_with_tolerance(q, tol)?;
    let (lo, hi) = distance_bounds(q)?;
    let mut table =
        Table::new("dist", &["x", "y", "z", "membership", "d", "lower_bound", "upper_bound", "p", "reduced_precision"])
            .param("x", x)
            .param("y", y)
            .param("z", z)
            .param("tol", tol);
    table.push(vec![
        x.into(),
        y.into(),
        z.into(),
        class.label().into(),
        d.value.into(),
        lo.into(),
        hi.into(),
        d.p.into(),
        d.reduced_precision.to_string().into(),
    ]);
    Ok(table)
}

fn trajectory(q: Point, samples: usize) -> Result<Table> {
    let tr = maximizer(q, samples)?;
    let mut table = Table::new("maximizer", &["kind", "edges", "psi", "c", "t", "tau1", "tau2", "s", "x", "y", "z"])
        .param("x", q.x)
        .param("y", q.y)
        .param("z", q.z)
        .param("samples", samples);
    let params: [Cell; 6] = match tr.kind {
        TrajectoryKind::TimelikeNormal(lc) => [Cell::Empty, lc.psi.into(), lc.c.into(), lc.t.into(), Cell::Empty, Cell::Empty],
        TrajectoryKind::LightlikeSingle(dir) => {
            [dir.label().into(), Cell::Empty, Cell::Empty, Cell::Empty, tr.duration().into(), Cell::Num(0.0)]
        }
        TrajectoryKind::LightlikeBroken { order, tau1, tau2 } => {
            [order.label().into(), Cell::Empty, Cell::Empty, Cell::Empty, tau1.into(), tau2.into()]
        }
    };
    for &(s, p) in &tr.samples {
        let mut row = vec![tr.kind.label().into()];
        row.extend(params.iter().cloned());
        row.extend([s.into(), p.x.into(), p.y.into(), p.z.into()]);
        table.push(row);
    }
    Ok(table)
}

fn mesh_table(radius: f64, yr: (f64, f64), zr: (f64, f64), ny: usize, nz: usize, quads: bool) -> Result<Table> {
    let mesh = sphere_mesh(radius, yr, zr, ny, nz)?;
    let base = |cols: &[&'static str]| {
        Table::new("sphere", cols)
            .param("R", radius)
            .param("ny", ny)
            .param("nz", nz)
            .param("y0", yr.0)
            .param("y1", yr.1)
            .param("z0", zr.0)
            .param("z1", zr.1)
    };
    if quads {
        let mut table = base(&["quad", "v0", "v1", "v2", "v3"]);
        for (i, q) in mesh.quads.iter().enumerate() {
            table.push(vec![i.into(), q[0].into(), q[1].into(), q[2].into(), q[3].into()]);
        }
        return Ok(table);
    }
    let mut table = base(&["index", "iy", "iz", "x", "y", "z", "stratum"]);
    for (i, v) in mesh.vertices.iter().enumerate() {
        let stratum: Cell = if radius == 0.0 { BeakStratum::of(*v).label().into() } else { Cell::Empty };
        table.push(vec![i.into(), (i % ny).into(), (i / ny).into(), v.x.into(), v.y.into(), v.z.into(), stratum]);
    }
    Ok(table)
}

fn parse_plane(text: &str) -> Result<SectionPlane> {
    let (axis, rhs) = text.split_once('=').with_context(|| format!("section {text:?} must look like z=C, x=C or y=Kx"))?;
    let rhs = rhs.trim();
    let number = |s: &str| finite(s).map_err(anyhow::Error::msg);
    Ok(match axis.trim() {
        "z" => SectionPlane::Z(number(rhs)?),
        "x" => SectionPlane::X(number(rhs)?),
        "y" => match rhs.strip_suffix('x') {
            Some("") | Some("+") => SectionPlane::YKx(1.0),
            Some("-") => SectionPlane::YKx(-1.0),
            Some(k) => SectionPlane::YKx(number(k.trim_end_matches('*'))?),
            None if number(rhs)? == 0.0 => SectionPlane::YKx(0.0),
            None => bail!("only planes y=Kx through the x axis are supported, got {text:?}"),
        },
        other => bail!("unknown section axis {other:?}"),
    })
}

fn section_table(radius: f64, text: &str, samples: usize, extent: f64) -> Result<Table> {
    let plane = parse_plane(text)?;
    let branches = sphere_section(radius, plane, samples, extent)?;
    let mut table = Table::new("sphere", &["branch", "index", "x", "y", "z"])
        .param("R", radius)
        .param("section", text)
        .param("samples", samples)
        .param("extent", extent);
    for (b, branch) in branches.iter().enumerate() {
        for (i, p) in branch.iter().enumerate() {
            table.push(vec![b.into(), i.into(), p.x.into(), p.y.into(), p.z.into()]);
        }
    }
    Ok(table)
}

fn check_grid(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        bail!(Error::BadGrid(format!("{what} needs at least 2 samples, got {n}")));
    }
    Ok(())
}

fn lin(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

fn profile(z0: f64, z1: f64, samples: usize) -> Result<Table> {
    check_grid(samples, "profile")?;
    let mut table =
        Table::new("profile", &["z", "f", "lower", "upper"]).param("z0", z0).param("z1", z1).param("samples", samples);
    for i in 0..samples {
        let z = lin(z0, z1, samples, i);
        table.push(vec![z.into(), f_profile(z).into(), (4.0 * z.abs()).into(), (4.0 * z.abs() + 1.0).into()]);
    }
    Ok(table)
}

fn dist_grid(plane: &str, ur: (f64, f64), vr: (f64, f64), nu: usize, nv: usize) -> Result<Table> {
    check_grid(nu, "u axis")?;
    check_grid(nv, "v axis")?;
    let (axis, value) = plane.split_once('=').with_context(|| format!("plane {plane:?} must look like x=C, y=C or z=C"))?;
    let c = finite(value).map_err(anyhow::Error::msg)?;
    let at: fn(f64, f64, f64) -> Point = match axis.trim() {
        "x" => |c, u, v| Point::new(c, u, v),
        "y" => |c, u, v| Point::new(u, c, v),
        "z" => |c, u, v| Point::new(u, v, c),
        other => bail!("unknown plane axis {other:?}"),
    };
    let mut table = Table::new("dist-grid", &["iu", "iv", "x", "y", "z", "membership", "d"])
        .param("plane", plane)
        .param("u0", ur.0)
        .param("u1", ur.1)
        .param("v0", vr.0)
        .param("v1", vr.1)
        .param("nu", nu)
        .param("nv", nv);
    for iv in 0..nv {
        for iu in 0..nu {
            let q = at(c, lin(ur.0, ur.1, nu, iu), lin(vr.0, vr.1, nv, iv));
            let class = sublorentz::classify_point(q);
            let d: Cell = if class.in_causal_future() {
                distance_with_tolerance(q, default_tolerance(q))?.value.into()
            } else {
                Cell::Empty
            };
            table.push(vec![iu.into(), iv.into(), q.x.into(), q.y.into(), q.z.into(), class.label().into(), d]);
        }
    }
    Ok(table)
}
