//! Semi-discrete operator: per-line interface fluxes, the positivity limiter
//! applied against stage trial states, and the conservative update.
//!
//! Every line is evaluated in the x-frame: states along a y-line have their
//! momentum components exchanged on gather and the fluxes exchanged back, so
//! both sweeps run identical arithmetic.

use rayon::prelude::*;

use crate::boundary::{mirror, BoundaryKind};
use crate::error::{Result, SolverError};
use crate::flux::{llf_from_fluxes, pcp_limit, split_from_flux, LimiterFloors, TrialBases, ALPHA_FLOOR};
use crate::grid::{FieldGrid, Geometry};
use crate::scalar::Real;
use crate::source::{source_bound_term, source_with_primitive};
use crate::state::{
    physical_flux, primitive_from_conserved, spectral_radius, Conserved, EosParams, Primitive, RecoveryOptions,
};
use crate::weno::characteristic::{average_primitive, basis_at, AverageKind, CharacteristicBasis};
use crate::weno::kernel::{WenoKernel, MAX_WINDOW};

/// Spatial discretization settings.
#[derive(Clone, Debug)]
pub struct Scheme<T> {
    pub eos: EosParams<T>,
    pub kernel: WenoKernel<T>,
    pub floors: LimiterFloors<T>,
    pub theta_amp: T,
    pub limiter: bool,
    pub characteristic: bool,
    pub average: AverageKind,
    pub recovery: RecoveryOptions<T>,
}

impl<T: Real> Scheme<T> {
    pub fn new(eos: EosParams<T>, r: usize) -> Result<Self> {
        Ok(Self {
            eos,
            kernel: WenoKernel::new(r)?,
            floors: LimiterFloors::default(),
            theta_amp: T::of(crate::flux::DEFAULT_THETA_AMP),
            limiter: true,
            characteristic: true,
            average: AverageKind::Primitive,
            recovery: RecoveryOptions::default(),
        })
    }

    pub fn r(&self) -> usize {
        self.kernel.r()
    }

    pub fn validate(&self) -> Result<()> {
        self.floors.validate()?;
        self.recovery.validate()?;
        if !(self.theta_amp >= T::one()) {
            return Err(SolverError::Config(format!(
                "viscosity amplification must be at least 1, got {}",
                self.theta_amp
            )));
        }
        Ok(())
    }
}

/// Unlimited flux data at one interface, stored in the grid frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceData<T, const D: usize> {
    pub active: bool,
    pub alpha: T,
    pub f_weno: Conserved<T, D>,
    pub f_llf: Conserved<T, D>,
}

impl<T: Real, const D: usize> FaceData<T, D> {
    fn inactive() -> Self {
        Self {
            active: false,
            alpha: T::zero(),
            f_weno: Conserved::zero(),
            f_llf: Conserved::zero(),
        }
    }
}

/// Faces of one axis, laid out line by line (`n_axis + 1` faces per line).
#[derive(Clone, Debug)]
pub struct AxisFaces<T, const D: usize> {
    pub axis: usize,
    pub per_line: usize,
    pub faces: Vec<FaceData<T, D>>,
    pub alpha_max: T,
}

/// Everything evaluated from one stage state before Δt is known.
#[derive(Clone, Debug)]
pub struct StageFaces<T, const D: usize> {
    pub prims: Vec<Primitive<T, D>>,
    pub axes: Vec<AxisFaces<T, D>>,
}

impl<T: Real, const D: usize> StageFaces<T, D> {
    /// τ_a = max α_a / Δx_a for each active axis.
    pub fn taus(&self, grid: &FieldGrid<T, D>) -> Vec<T> {
        self.axes.iter().map(|a| a.alpha_max / grid.spacing[a.axis]).collect()
    }
}

/// Recovers primitives on the whole padded grid (solid cells included).
pub fn compute_primitives<T: Real, const D: usize>(
    grid: &FieldGrid<T, D>,
    scheme: &Scheme<T>,
) -> Result<Vec<Primitive<T, D>>> {
    let px = grid.padded()[0];
    let g = grid.ghost as isize;
    let gy = grid.ghost_y() as isize;
    grid.data()
        .par_iter()
        .enumerate()
        .map(|(k, u)| {
            primitive_from_conserved(u, &scheme.eos, &scheme.recovery).map_err(|e| {
                let i = (k % px) as isize - g;
                let j = (k / px) as isize - gy;
                e.at(format!("cell ({i}, {j})"))
            })
        })
        .collect()
}

#[inline(always)]
fn swap_u<T: Real, const D: usize>(u: Conserved<T, D>, axis: usize) -> Conserved<T, D> {
    if axis == 0 {
        u
    } else {
        u.swap_axis(axis)
    }
}

#[inline(always)]
fn swap_v<T: Real, const D: usize>(v: Primitive<T, D>, axis: usize) -> Primitive<T, D> {
    if axis == 0 {
        v
    } else {
        v.swap_axis(axis)
    }
}

/// Maximal runs of non-solid cells along a line.
fn segments(n: usize, solid: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for c in 0..n {
        match (solid(c), start) {
            (false, None) => start = Some(c),
            (true, Some(s)) => {
                out.push((s, c));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, n));
    }
    out
}

struct LineScratch<T, const D: usize> {
    u: Vec<Conserved<T, D>>,
    v: Vec<Primitive<T, D>>,
    f: Vec<Conserved<T, D>>,
    rad: Vec<T>,
}

impl<T: Real, const D: usize> LineScratch<T, D> {
    fn new() -> Self {
        Self {
            u: Vec::new(),
            v: Vec::new(),
            f: Vec::new(),
            rad: Vec::new(),
        }
    }
}

/// Interface fluxes of a padded x-frame line: `out[k]` is the face between
/// padded cells `g + k - 1` and `g + k`.
fn line_faces<T: Real, const D: usize>(
    scheme: &Scheme<T>,
    g: usize,
    s: &mut LineScratch<T, D>,
    out: &mut [FaceData<T, D>],
) -> T {
    let len = s.u.len();
    s.f.clear();
    s.rad.clear();
    for c in 0..len {
        s.f.push(physical_flux(&s.v[c], &s.u[c], 0));
        s.rad.push(spectral_radius(&s.v[c], &scheme.eos, 0));
    }
    let r = scheme.r();
    let wl = scheme.kernel.window_len();
    let n = D + 2;
    let identity = CharacteristicBasis::identity(n);
    let mut alpha_max = T::zero();
    let mut hp = [Conserved::<T, D>::zero(); MAX_WINDOW + 1];
    let mut hm = [Conserved::<T, D>::zero(); MAX_WINDOW + 1];
    for (k, face) in out.iter_mut().enumerate() {
        let cl = g + k - 1;
        let cr = cl + 1;
        let avg = average_interface(scheme, &s.u[cl], &s.u[cr], &s.v[cl], &s.v[cr]);
        let mut radius = spectral_radius(&avg, &scheme.eos, 0);
        for c in cr - r..=cl + r {
            radius = radius.max(s.rad[c]);
        }
        let alpha = (scheme.theta_amp * radius).max(T::of(ALPHA_FLOOR));
        alpha_max = alpha_max.max(alpha);

        // cells cl - r + 1 ..= cl + r cover both windows
        let first = cl + 1 - r;
        for i in 0..2 * r {
            let c = first + i;
            let (p, m) = split_from_flux(&s.u[c], &s.f[c], alpha);
            hp[i] = p;
            hm[i] = m;
        }
        let basis = if scheme.characteristic {
            basis_at(&avg, &scheme.eos, 0)
        } else {
            identity
        };
        let (hl, hr) = crate::weno::reconstruct_interface(&scheme.kernel, &hp[..wl], &hm[1..wl + 1], &basis);
        *face = FaceData {
            active: true,
            alpha,
            f_weno: (hl - hr) * alpha,
            f_llf: llf_from_fluxes(&s.u[cl], &s.u[cr], &s.f[cl], &s.f[cr], alpha),
        };
    }
    alpha_max
}

#[inline(always)]
fn average_interface<T: Real, const D: usize>(
    scheme: &Scheme<T>,
    ul: &Conserved<T, D>,
    ur: &Conserved<T, D>,
    vl: &Primitive<T, D>,
    vr: &Primitive<T, D>,
) -> Primitive<T, D> {
    match scheme.average {
        AverageKind::Primitive => average_primitive(vl, vr),
        AverageKind::Conserved => {
            let um = (*ul + *ur) * T::half();
            primitive_from_conserved(&um, &scheme.eos, &scheme.recovery).unwrap_or_else(|_| average_primitive(vl, vr))
        }
    }
}

/// Line-local view used to gather a line along `axis` at transverse index `t`.
struct LineView<'a, T, const D: usize> {
    grid: &'a FieldGrid<T, D>,
    prims: &'a [Primitive<T, D>],
    axis: usize,
    t: isize,
}

impl<T: Real, const D: usize> LineView<'_, T, D> {
    #[inline(always)]
    fn index(&self, c: isize) -> usize {
        if self.axis == 0 {
            self.grid.idx(c, self.t)
        } else {
            self.grid.idx(self.t, c)
        }
    }

    #[inline(always)]
    fn solid(&self, c: isize) -> bool {
        if self.axis == 0 {
            self.grid.is_solid(c, self.t)
        } else {
            self.grid.is_solid(self.t, c)
        }
    }

    /// Padded x-frame copy of cells `s..e`, mirroring across solid faces.
    fn gather(&self, s: usize, e: usize, n: usize, out: &mut LineScratch<T, D>) {
        let g = self.grid.ghost as isize;
        let (s, e, n) = (s as isize, e as isize, n as isize);
        out.u.clear();
        out.v.clear();
        for c in s - g..e + g {
            let (src, flip) = if c < s && s > 0 {
                ((2 * s - 1 - c).min(e - 1), true)
            } else if c >= e && e < n {
                ((2 * e - 1 - c).max(s), true)
            } else {
                (c, false)
            };
            let k = self.index(src);
            let mut u = swap_u(self.grid.data()[k], self.axis);
            let mut v = swap_v(self.prims[k], self.axis);
            if flip {
                u = mirror(&u, 0);
                v.v[0] = -v.v[0];
            }
            out.u.push(u);
            out.v.push(v);
        }
    }
}

/// Unlimited interface fluxes along every active axis of the stage state.
pub fn evaluate_faces<T: Real, const D: usize>(
    grid: &FieldGrid<T, D>,
    scheme: &Scheme<T>,
) -> Result<StageFaces<T, D>> {
    let prims = compute_primitives(grid, scheme)?;
    let naxes = if D == 1 { 1 } else { 2 };
    let mut axes = Vec::with_capacity(naxes);
    for axis in 0..naxes {
        let n_axis = grid.n[axis];
        let n_lines = grid.n[1 - axis];
        let per_line = n_axis + 1;
        let mut faces = vec![FaceData::inactive(); per_line * n_lines];
        let alpha_max = faces
            .par_chunks_mut(per_line)
            .enumerate()
            .map_init(LineScratch::new, |scratch, (t, out)| {
                let view = LineView {
                    grid,
                    prims: &prims,
                    axis,
                    t: t as isize,
                };
                let mut amax = T::zero();
                for (s, e) in segments(n_axis, |c| view.solid(c as isize)) {
                    view.gather(s, e, n_axis, scratch);
                    let seg = &mut out[s..=e];
                    amax = amax.max(line_faces(scheme, grid.ghost, scratch, seg));
                    if axis != 0 {
                        for f in seg.iter_mut() {
                            f.f_weno = f.f_weno.swap_axis(axis);
                            f.f_llf = f.f_llf.swap_axis(axis);
                        }
                    }
                }
                amax
            })
            .reduce(T::zero, |a, b| a.max(b));
        axes.push(AxisFaces {
            axis,
            per_line,
            faces,
            alpha_max,
        });
    }
    Ok(StageFaces { prims, axes })
}

/// Per-stage parameters for limiting and the update.
#[derive(Clone, Copy, Debug)]
pub struct StageParams<T> {
    pub a: T,
    pub b: T,
    pub dt: T,
    /// Convex weight τ̂ of each axis (sums to one).
    pub tau_hat: [T; 2],
    /// Source split β used at this stage (zero for Cartesian grids).
    pub beta: T,
}

/// Counters gathered while applying a stage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageStats<T> {
    pub min_d: T,
    pub min_q: T,
    pub limited_faces: usize,
    pub faces: usize,
    pub min_theta: T,
}

impl<T: Real> StageStats<T> {
    pub fn empty() -> Self {
        Self {
            min_d: T::infinity(),
            min_q: T::infinity(),
            limited_faces: 0,
            faces: 0,
            min_theta: T::one(),
        }
    }

    pub fn merge(self, o: Self) -> Self {
        Self {
            min_d: self.min_d.min(o.min_d),
            min_q: self.min_q.min(o.min_q),
            limited_faces: self.limited_faces + o.limited_faces,
            faces: self.faces + o.faces,
            min_theta: self.min_theta.min(o.min_theta),
        }
    }
}

/// Final flux at every face of one axis after limiting.
fn limit_axis<T: Real, const D: usize>(
    grid: &FieldGrid<T, D>,
    u0: &[Conserved<T, D>],
    scheme: &Scheme<T>,
    faces: &AxisFaces<T, D>,
    p: &StageParams<T>,
) -> Result<(Vec<Conserved<T, D>>, StageStats<T>)> {
    let axis = faces.axis;
    let n_axis = grid.n[axis] as isize;
    let mu = p.b * T::two() * p.dt / ((T::one() - p.beta) * p.tau_hat[axis] * grid.spacing[axis]);
    let lo_periodic = matches!(grid.bc[2 * axis], BoundaryKind::Periodic);
    let hi_periodic = matches!(grid.bc[2 * axis + 1], BoundaryKind::Periodic);
    let us = grid.data();

    let results: Vec<Result<(Vec<Conserved<T, D>>, StageStats<T>)>> = faces
        .faces
        .par_chunks(faces.per_line)
        .enumerate()
        .map(|(t, line)| {
            let t = t as isize;
            let at = |c: isize| if axis == 0 { grid.idx(c, t) } else { grid.idx(t, c) };
            let base = |c: isize| -> Option<Conserved<T, D>> {
                let c = if c < 0 && lo_periodic {
                    c + n_axis
                } else if c >= n_axis && hi_periodic {
                    c - n_axis
                } else {
                    c
                };
                if c < 0 || c >= n_axis {
                    return None;
                }
                let solid = if axis == 0 { grid.is_solid(c, t) } else { grid.is_solid(t, c) };
                if solid {
                    return None;
                }
                let k = at(c);
                Some(us[k] + (u0[k] - us[k]) * p.a)
            };
            let mut stats = StageStats::<T>::empty();
            let mut out = Vec::with_capacity(line.len());
            for (k, f) in line.iter().enumerate() {
                if !f.active {
                    out.push(Conserved::zero());
                    continue;
                }
                stats.faces += 1;
                if !scheme.limiter {
                    out.push(f.f_weno);
                    continue;
                }
                let k = k as isize;
                let bases = TrialBases {
                    left: base(k - 1),
                    right: base(k),
                    mu,
                };
                let set = pcp_limit(f.f_weno, f.f_llf, f.alpha, &bases, &scheme.floors).map_err(|e| {
                    let (i, j) = if axis == 0 { (k, t) } else { (t, k) };
                    e.at(format!("face {k} of {} line {t} (cell ({i}, {j}) side)", ["x", "y"][axis]))
                })?;
                if set.is_limited() {
                    stats.limited_faces += 1;
                    stats.min_theta = stats.min_theta.min(set.theta_d.min(set.theta_q));
                }
                out.push(set.f_pcp);
            }
            Ok((out, stats))
        })
        .collect();

    let mut fluxes = Vec::with_capacity(faces.faces.len());
    let mut stats = StageStats::empty();
    for r in results {
        let (f, s) = r?;
        fluxes.extend(f);
        stats = stats.merge(s);
    }
    Ok((fluxes, stats))
}

/// Flux divergence −Σ_a (F_{a,+} − F_{a,−})/Δx_a at interior cell (i, j).
#[inline(always)]
fn divergence<T: Real, const D: usize>(
    grid: &FieldGrid<T, D>,
    fluxes: &[Vec<Conserved<T, D>>],
    i: usize,
    j: usize,
) -> Conserved<T, D> {
    let nx = grid.n[0];
    let ny = grid.n[1];
    let fx = &fluxes[0];
    let row = j * (nx + 1);
    let mut l = (fx[row + i + 1] - fx[row + i]) * (-T::one() / grid.spacing[0]);
    if D == 2 {
        let fy = &fluxes[1];
        let col = i * (ny + 1);
        l += (fy[col + j + 1] - fy[col + j]) * (-T::one() / grid.spacing[1]);
    }
    l
}

/// Limits the stage fluxes and returns the new padded data
/// a·U⁰ + b·(Uˢ + Δt(L + S)); ghosts are copied from Uˢ.
pub fn apply_stage<T: Real, const D: usize>(
    grid: &FieldGrid<T, D>,
    u0: &[Conserved<T, D>],
    scheme: &Scheme<T>,
    stage: &StageFaces<T, D>,
    p: &StageParams<T>,
) -> Result<(Vec<Conserved<T, D>>, StageStats<T>)> {
    let mut fluxes = Vec::with_capacity(stage.axes.len());
    let mut stats = StageStats::empty();
    for faces in &stage.axes {
        let (f, s) = limit_axis(grid, u0, scheme, faces, p)?;
        fluxes.push(f);
        stats = stats.merge(s);
    }
    let nx = grid.n[0];
    let px = grid.padded()[0];
    let g = grid.ghost;
    let gy = grid.ghost_y();
    let axisym = grid.geometry == Geometry::Axisymmetric;
    let us = grid.data();
    let mut new = us.to_vec();

    let row_stats: Vec<Result<StageStats<T>>> = new
        .par_chunks_mut(px)
        .enumerate()
        .map(|(jr, row)| {
            let mut st = StageStats::<T>::empty();
            if jr < gy || jr >= gy + grid.n[1] {
                return Ok(st);
            }
            let j = jr - gy;
            for i in 0..nx {
                if grid.is_solid(i as isize, j as isize) {
                    continue;
                }
                let k = jr * px + g + i;
                let mut rate = divergence(grid, &fluxes, i, j);
                if axisym && D == 2 {
                    let r = grid.center(i as isize, j as isize)[0];
                    rate += source_d(&us[k], &stage.prims[k], r);
                }
                let u = us[k] + (u0[k] - us[k]) * p.a + rate * (p.b * p.dt);
                let q = u.q();
                if !(u.d > T::zero() && q > T::zero() && u.is_finite()) {
                    return Err(SolverError::AdmissibilityLost {
                        location: format!("cell ({i}, {j})"),
                        d: u.d.as_f64(),
                        q: q.as_f64(),
                    });
                }
                st.min_d = st.min_d.min(u.d);
                st.min_q = st.min_q.min(q);
                row[g + i] = u;
            }
            Ok(st)
        })
        .collect();
    for r in row_stats {
        stats = stats.merge(r?);
    }
    Ok((new, stats))
}

#[inline(always)]
fn source_d<T: Real, const D: usize>(u: &Conserved<T, D>, v: &Primitive<T, D>, r: T) -> Conserved<T, D> {
    let mut uu = Conserved::<T, 2>::zero();
    let mut vv = Primitive::<T, 2>::new(v.rho, [T::zero(); 2], v.p);
    for k in 0..D + 2 {
        let kk = if k == D + 1 { 3 } else { k };
        uu[kk] = u[k];
    }
    for a in 0..D.min(2) {
        vv.v[a] = v.v[a];
    }
    let s = source_with_primitive(&uu, &vv, r);
    let mut out = Conserved::zero();
    for k in 0..D + 2 {
        let kk = if k == D + 1 { 3 } else { k };
        out[k] = s[kk];
    }
    out
}

/// A_s over the interior non-solid cells of an axisymmetric grid.
pub fn source_bound<T: Real, const D: usize>(grid: &FieldGrid<T, D>, prims: &[Primitive<T, D>]) -> T {
    let mut a = T::infinity();
    for j in 0..grid.n[1] as isize {
        for i in 0..grid.n[0] as isize {
            if grid.is_solid(i, j) {
                continue;
            }
            let k = grid.idx(i, j);
            let r = grid.center(i, j)[0];
            if let Some(t) = source_bound_term(r, grid.data()[k].q(), prims[k].p, prims[k].v[0]) {
                a = a.min(t);
            }
        }
    }
    a
}

/// L(U) with unlimited WENO fluxes on a grid whose ghosts are filled.
pub fn residual<T: Real, const D: usize>(
    grid: &FieldGrid<T, D>,
    scheme: &Scheme<T>,
) -> Result<Vec<Conserved<T, D>>> {
    let stage = evaluate_faces(grid, scheme)?;
    let fluxes: Vec<Vec<Conserved<T, D>>> = stage
        .axes
        .iter()
        .map(|a| a.faces.iter().map(|f| f.f_weno).collect())
        .collect();
    let mut out = Vec::with_capacity(grid.cell_count());
    for j in 0..grid.n[1] {
        for i in 0..grid.n[0] {
            out.push(divergence(grid, &fluxes, i, j));
        }
    }
    Ok(out)
}

/// One-dimensional residual.
pub fn residual_1d<T: Real>(grid: &FieldGrid<T, 1>, scheme: &Scheme<T>) -> Result<Vec<Conserved<T, 1>>> {
    residual(grid, scheme)
}

/// Two-dimensional residual (flux part only for axisymmetric grids).
pub fn residual_2d<T: Real>(grid: &FieldGrid<T, 2>, scheme: &Scheme<T>) -> Result<Vec<Conserved<T, 2>>> {
    residual(grid, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::fill_ghosts;
    use crate::grid::Geometry;
    use crate::state::conserved_unchecked;

    fn eos() -> EosParams<f64> {
        EosParams::new(5.0 / 3.0).unwrap()
    }

    fn grid2(nx: usize, ny: usize) -> FieldGrid<f64, 2> {
        FieldGrid::new(
            [nx, ny],
            [1.0 / nx as f64, 1.0 / ny as f64],
            [0.0, 0.0],
            3,
            Geometry::Cartesian,
            [BoundaryKind::Outflow, BoundaryKind::Outflow, BoundaryKind::Outflow, BoundaryKind::Outflow],
        )
        .unwrap()
    }

    #[test]
    fn uniform_state_has_zero_residual() {
        let e = eos();
        let s = Scheme::new(e, 3).unwrap();
        let mut g = grid2(8, 6);
        g.fill_from(&e, |_| Primitive::new(1.0, [0.3, -0.2], 0.5)).unwrap();
        fill_ghosts(&mut g).unwrap();
        for l in residual_2d(&g, &s).unwrap() {
            assert_eq!(l.max_abs(), 0.0);
        }
    }

    #[test]
    fn segments_split_on_solids() {
        let solid = [false, false, true, true, false, true, false];
        assert_eq!(segments(7, |c| solid[c]), vec![(0, 2), (4, 5), (6, 7)]);
        assert_eq!(segments(3, |_| false), vec![(0, 3)]);
        assert!(segments(2, |_| true).is_empty());
    }

    #[test]
    fn rows_match_one_dimensional_residual() {
        let e = eos();
        let s = Scheme::new(e, 3).unwrap();
        let init1 = |x: f64| {
            if x < 0.5 {
                Primitive::new(1.0, [0.1], 1.0)
            } else {
                Primitive::new(0.2, [-0.3], 0.05)
            }
        };
        let mut g1 = FieldGrid::<f64, 1>::new(
            [16, 1],
            [1.0 / 16.0, 1.0],
            [0.0, 0.0],
            3,
            Geometry::Cartesian,
            [BoundaryKind::Outflow, BoundaryKind::Outflow, BoundaryKind::Outflow, BoundaryKind::Outflow],
        )
        .unwrap();
        g1.fill_from(&e, |c| init1(c[0])).unwrap();
        fill_ghosts(&mut g1).unwrap();
        let l1 = residual_1d(&g1, &s).unwrap();

        let mut g2 = grid2(16, 4);
        g2.fill_from(&e, |c| {
            let v = init1(c[0]);
            Primitive::new(v.rho, [v.v[0], 0.0], v.p)
        })
        .unwrap();
        fill_ghosts(&mut g2).unwrap();
        let l2 = residual_2d(&g2, &s).unwrap();
        for j in 0..4 {
            for i in 0..16 {
                let a = l1[i];
                let b = l2[j * 16 + i];
                assert!((a.d - b.d).abs() <= 1e-12 * a.d.abs().max(1.0));
                assert!((a.m[0] - b.m[0]).abs() <= 1e-12 * a.m[0].abs().max(1.0));
                assert!((a.e - b.e).abs() <= 1e-12 * a.e.abs().max(1.0));
                assert_eq!(b.m[1], 0.0);
            }
        }
    }

    #[test]
    fn transposed_data_gives_transposed_residual() {
        let e = eos();
        let s = Scheme::new(e, 3).unwrap();
        let f = |x: f64, y: f64| {
            Primitive::new(1.0 + 0.5 * (6.0 * x).sin() * (3.0 * y).cos(), [0.3 * y, -0.2 * x * x], 1.0 + x * y)
        };
        let mut a = grid2(10, 10);
        a.fill_from(&e, |c| f(c[0], c[1])).unwrap();
        let mut b = grid2(10, 10);
        b.fill_from(&e, |c| {
            let v = f(c[1], c[0]);
            Primitive::new(v.rho, [v.v[1], v.v[0]], v.p)
        })
        .unwrap();
        fill_ghosts(&mut a).unwrap();
        fill_ghosts(&mut b).unwrap();
        let la = residual_2d(&a, &s).unwrap();
        let lb = residual_2d(&b, &s).unwrap();
        for j in 0..10 {
            for i in 0..10 {
                let x = la[j * 10 + i];
                let y = lb[i * 10 + j];
                assert_eq!(x.d, y.d);
                assert_eq!(x.m[0], y.m[1]);
                assert_eq!(x.m[1], y.m[0]);
                assert_eq!(x.e, y.e);
            }
        }
    }

    #[test]
    fn axisymmetric_source_embedding() {
        let e = eos();
        let u = conserved_unchecked(&Primitive::new(1.0, [0.4, 0.1], 0.7), &e);
        let v = Primitive::new(1.0, [0.4, 0.1], 0.7);
        let s = source_d(&u, &v, 0.5);
        let t = source_with_primitive(&u, &v, 0.5);
        assert_eq!(s, t);
    }
}
