//! Named benchmark problems: initial data, EOS, domain, boundaries, final
//! time and default grid.

use std::fmt;
use std::sync::Arc;

use crate::boundary::BoundaryKind;
use crate::error::{Result, SolverError};
use crate::grid::{FieldGrid, Geometry};
use crate::state::{conserved_from_primitive, EosParams, Primitive};

/// Every preset name, in listing order.
pub const PRESET_NAMES: [&str; 9] = [
    "smooth",
    "rp1d",
    "blast",
    "shock_heating",
    "rp2d_1",
    "rp2d_2",
    "ffstep",
    "jet_a1",
    "jet_c2",
];

pub type InitFn = Arc<dyn Fn([f64; 2]) -> Primitive<f64, 2> + Send + Sync>;
pub type SolidFn = Arc<dyn Fn([f64; 2]) -> bool + Send + Sync>;

/// Boundary condition of one side, with inflow data in primitive form.
#[derive(Clone, Debug, PartialEq)]
pub enum SideSpec {
    Periodic,
    Outflow,
    Reflective,
    /// Fixed state where the transverse coordinate lies in `[lo, hi]`.
    Inflow { state: Primitive<f64, 2>, lo: f64, hi: f64 },
    Axis,
}

impl SideSpec {
    fn kind<const D: usize>(&self, eos: &EosParams<f64>) -> Result<BoundaryKind<f64, D>> {
        Ok(match self {
            SideSpec::Periodic => BoundaryKind::Periodic,
            SideSpec::Outflow => BoundaryKind::Outflow,
            SideSpec::Reflective => BoundaryKind::Reflective,
            SideSpec::Axis => BoundaryKind::Axis,
            SideSpec::Inflow { state, lo, hi } => BoundaryKind::Inflow {
                state: conserved_from_primitive(&reduce::<D>(state), eos)?,
                lo: *lo,
                hi: *hi,
            },
        })
    }
}

fn reduce<const D: usize>(v: &Primitive<f64, 2>) -> Primitive<f64, D> {
    let mut vel = [0.0; D];
    for (k, x) in vel.iter_mut().enumerate() {
        *x = v.v[k];
    }
    Primitive::new(v.rho, vel, v.p)
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub dim: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub gamma: f64,
    pub init: InitFn,
    /// Sides in x-lo, x-hi, y-lo, y-hi order.
    pub bc: [SideSpec; 4],
    pub t_final: f64,
    pub resolution: [usize; 2],
    pub geometry: Geometry,
    pub solid: Option<SolidFn>,
    pub notes: &'static str,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("gamma", &self.gamma)
            .field("bc", &self.bc)
            .field("t_final", &self.t_final)
            .field("resolution", &self.resolution)
            .field("geometry", &self.geometry)
            .field("solid", &self.solid.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn eos(&self) -> Result<EosParams<f64>> {
        EosParams::new(self.gamma)
    }

    /// Initial primitive state at a point.
    pub fn initial(&self, x: [f64; 2]) -> Primitive<f64, 2> {
        (self.init)(x)
    }

    pub fn initial_1d(&self, x: f64) -> Primitive<f64, 1> {
        reduce::<1>(&(self.init)([x, 0.0]))
    }

    /// Grid resolution scaled so that the cell count along the first axis is `nx`.
    pub fn scaled_resolution(&self, nx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [nx, 1]
        } else {
            let ny = (self.resolution[1] as f64 * nx as f64 / self.resolution[0] as f64).round() as usize;
            [nx, ny.max(1)]
        }
    }

    fn grid<const D: usize>(&self, n: [usize; 2], ghost: usize) -> Result<FieldGrid<f64, D>> {
        if D != self.dim {
            return Err(SolverError::Config(format!(
                "problem `{}` is {}D, asked for a {D}D grid",
                self.name, self.dim
            )));
        }
        let eos = self.eos()?;
        let active = if D == 1 { 1 } else { 2 };
        let mut spacing = [1.0; 2];
        for a in 0..active {
            if n[a] == 0 {
                return Err(SolverError::DegenerateGrid(format!("axis {a} has no cells")));
            }
            spacing[a] = (self.hi[a] - self.lo[a]) / n[a] as f64;
        }
        let bc = [
            self.bc[0].kind(&eos)?,
            self.bc[1].kind(&eos)?,
            self.bc[2].kind(&eos)?,
            self.bc[3].kind(&eos)?,
        ];
        let n = if D == 1 { [n[0], 1] } else { n };
        let mut g = FieldGrid::new(n, spacing, self.lo, ghost, self.geometry, bc)?;
        let init = self.init.clone();
        g.fill_from(&eos, |x| reduce::<D>(&init(x)))?;
        if let Some(solid) = &self.solid {
            let mut mask = Vec::with_capacity(g.cell_count());
            for j in 0..n[1] as isize {
                for i in 0..n[0] as isize {
                    mask.push(solid(g.center(i, j)));
                }
            }
            g.set_solid(mask)?;
        }
        Ok(g)
    }

    pub fn build_1d(&self, n: usize, ghost: usize) -> Result<FieldGrid<f64, 1>> {
        self.grid::<1>([n, 1], ghost)
    }

    pub fn build_2d(&self, n: [usize; 2], ghost: usize) -> Result<FieldGrid<f64, 2>> {
        self.grid::<2>(n, ghost)
    }
}

/// Pressure giving sound speed `cs` at density `rho` for a Γ-law gas,
/// from c² = Γp/(ρh) with h = 1 + Γp/((Γ-1)ρ).
pub fn pressure_for_sound_speed(rho: f64, cs: f64, gamma: f64) -> Result<f64> {
    let c2 = cs * cs;
    if !(cs > 0.0 && c2 < gamma - 1.0) {
        return Err(SolverError::Domain(format!(
            "sound speed {cs} is outside (0, sqrt(Γ-1)) for Γ = {gamma}"
        )));
    }
    Ok(rho * c2 * (gamma - 1.0) / (gamma * (gamma - 1.0 - c2)))
}

fn p1(rho: f64, v: f64, p: f64) -> Primitive<f64, 2> {
    Primitive::new(rho, [v, 0.0], p)
}

fn p2(rho: f64, vx: f64, vy: f64, p: f64) -> Primitive<f64, 2> {
    Primitive::new(rho, [vx, vy], p)
}

fn one_d(
    name: &'static str,
    lo: f64,
    hi: f64,
    gamma: f64,
    bc: [SideSpec; 2],
    t_final: f64,
    n: usize,
    init: impl Fn(f64) -> Primitive<f64, 2> + Send + Sync + 'static,
    notes: &'static str,
) -> ProblemSpec {
    let [a, b] = bc;
    ProblemSpec {
        name,
        dim: 1,
        lo: [lo, 0.0],
        hi: [hi, 1.0],
        gamma,
        init: Arc::new(move |x| init(x[0])),
        bc: [a, b, SideSpec::Outflow, SideSpec::Outflow],
        t_final,
        resolution: [n, 1],
        geometry: Geometry::Cartesian,
        solid: None,
        notes,
    }
}

fn quadrants(name: &'static str, q: [Primitive<f64, 2>; 4], notes: &'static str) -> ProblemSpec {
    // q = [NE, NW, SW, SE]
    ProblemSpec {
        name,
        dim: 2,
        lo: [0.0, 0.0],
        hi: [1.0, 1.0],
        gamma: 5.0 / 3.0,
        init: Arc::new(move |x| match (x[0] > 0.5, x[1] > 0.5) {
            (true, true) => q[0],
            (false, true) => q[1],
            (false, false) => q[2],
            (true, false) => q[3],
        }),
        bc: [SideSpec::Outflow, SideSpec::Outflow, SideSpec::Outflow, SideSpec::Outflow],
        t_final: 0.4,
        resolution: [400, 400],
        geometry: Geometry::Cartesian,
        solid: None,
        notes,
    }
}

fn jet(
    name: &'static str,
    gamma: f64,
    mach: f64,
    extent: [f64; 2],
    t_final: f64,
    resolution: [usize; 2],
    notes: &'static str,
) -> Result<ProblemSpec> {
    let vb = 0.99;
    let p = pressure_for_sound_speed(0.01, vb / mach, gamma)?;
    let beam = p2(0.01, 0.0, vb, p);
    let ambient = p2(1.0, 0.0, 0.0, p);
    Ok(ProblemSpec {
        name,
        dim: 2,
        lo: [0.0, 0.0],
        hi: extent,
        gamma,
        init: Arc::new(move |_| ambient),
        bc: [
            SideSpec::Axis,
            SideSpec::Outflow,
            SideSpec::Inflow {
                state: beam,
                lo: f64::NEG_INFINITY,
                hi: 1.0,
            },
            SideSpec::Outflow,
        ],
        t_final,
        resolution,
        geometry: Geometry::Axisymmetric,
        solid: None,
        notes,
    })
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<ProblemSpec> {
    let spec = match name {
        "smooth" => one_d(
            "smooth",
            0.0,
            2.0 * std::f64::consts::PI,
            5.0 / 3.0,
            [SideSpec::Periodic, SideSpec::Periodic],
            0.01,
            128,
            |x| p1(1.0 + 0.99999 * x.sin(), 0.99, 0.005),
            "periodic sine wave in density advected at v = 0.99",
        ),
        "rp1d" => one_d(
            "rp1d",
            0.0,
            1.0,
            5.0 / 3.0,
            [SideSpec::Outflow, SideSpec::Outflow],
            0.45,
            800,
            |x| if x < 0.5 { p1(1.0, 0.0, 1e4) } else { p1(1.0, 0.0, 1e-8) },
            "pressure jump of twelve decades; thin shell between contact and shock",
        ),
        "blast" => one_d(
            "blast",
            0.0,
            1.0,
            1.4,
            [SideSpec::Outflow, SideSpec::Outflow],
            0.43,
            4000,
            |x| {
                if x < 0.1 {
                    p1(1.0, 0.0, 1000.0)
                } else if x < 0.9 {
                    p1(1.0, 0.0, 0.01)
                } else {
                    p1(1.0, 0.0, 100.0)
                }
            },
            "two blast waves colliding near x = 0.5",
        ),
        "shock_heating" => {
            let gamma = 4.0 / 3.0;
            let v0 = 1.0 - 1e-10;
            let p = (gamma - 1.0) * 1e-4;
            let inflow = p1(1.0, v0, p);
            one_d(
                "shock_heating",
                0.0,
                1.0,
                gamma,
                [
                    SideSpec::Inflow {
                        state: inflow,
                        lo: f64::NEG_INFINITY,
                        hi: f64::INFINITY,
                    },
                    SideSpec::Reflective,
                ],
                2.0,
                200,
                move |_| inflow,
                "cold gas at W ≈ 70710.675 hitting a wall at x = 1; the left end feeds the upstream state",
            )
        }
        "rp2d_1" => quadrants(
            "rp2d_1",
            [
                p2(0.1, 0.0, 0.0, 0.01),
                p2(0.1, 0.99, 0.0, 1.0),
                p2(0.5, 0.0, 0.0, 1.0),
                p2(0.1, 0.0, 0.99, 1.0),
            ],
            "contacts with transverse velocity jumps on the left and bottom",
        ),
        "rp2d_2" => quadrants(
            "rp2d_2",
            [
                p2(0.1, 0.0, 0.0, 20.0),
                p2(0.00414329639576, 0.9946418833556542, 0.0, 0.05),
                p2(0.01, 0.0, 0.0, 0.05),
                p2(0.00414329639576, 0.0, 0.9946418833556542, 0.05),
            ],
            "shocks on the top and right moving at -0.66525606186639; symmetric about y = x",
        ),
        "ffstep" => {
            let gamma = 1.4;
            let v = 0.999;
            let p = pressure_for_sound_speed(1.4, v / 3.0, gamma)?;
            let free = p2(1.4, v, 0.0, p);
            ProblemSpec {
                name: "ffstep",
                dim: 2,
                lo: [0.0, 0.0],
                hi: [3.0, 1.0],
                gamma,
                init: Arc::new(move |_| free),
                bc: [
                    SideSpec::Inflow {
                        state: free,
                        lo: f64::NEG_INFINITY,
                        hi: f64::INFINITY,
                    },
                    SideSpec::Outflow,
                    SideSpec::Reflective,
                    SideSpec::Reflective,
                ],
                t_final: 4.0,
                resolution: [300, 100],
                geometry: Geometry::Cartesian,
                solid: Some(Arc::new(|x| x[0] > 0.6 && x[1] < 0.2)),
                notes: "Mach 3 wind tunnel with a step of height 0.2 from x = 0.6; p from v/c_s = 3",
            }
        }
        "jet_a1" => jet(
            "jet_a1",
            4.0 / 3.0,
            1.72,
            [7.0, 50.0],
            60.0,
            [280, 2000],
            "hot pressure-matched jet; ambient p from beam Mach 1.72",
        )?,
        "jet_c2" => jet(
            "jet_c2",
            5.0 / 3.0,
            6.0,
            [15.0, 45.0],
            100.0,
            [384, 1152],
            "cold pressure-matched jet; ambient p from beam Mach 6",
        )?,
        other => return Err(SolverError::UnknownProblem(other.to_string())),
    };
    Ok(spec)
}
