//! Randomized property families for the admissible set, q, the state-flux
//! relations, the LLF update, the source step and the pressure counterexample.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::flux::llf_from_fluxes;
use crate::source::{source_bound_term, source_with_primitive};
use crate::state::{
    conserved_unchecked, physical_flux, primitive_from_conserved, spectral_radius, Conserved, EosParams, Primitive,
    RecoveryOptions,
};

/// Samples per shard; shards are seeded independently so results do not
/// depend on the thread count.
const SHARD: usize = 512;

/// Roundoff allowance for q checks, in units of ε_mach times the energy scale.
const Q_SLACK: f64 = 64.0;

/// Generator of admissible and arbitrary states.
pub struct RandomStates {
    rng: ChaCha8Rng,
}

impl RandomStates {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.uniform(lo.ln(), hi.ln()).exp()
    }

    pub fn gamma(&mut self) -> EosParams<f64> {
        EosParams::new(self.uniform(1.05, 2.0)).unwrap()
    }

    /// Unit vector in D dimensions.
    pub fn direction<const D: usize>(&mut self) -> [f64; D] {
        loop {
            let mut v = [0.0; D];
            for c in v.iter_mut() {
                *c = self.uniform(-1.0, 1.0);
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 && n <= 1.0 {
                return v.map(|x| x / n);
            }
        }
    }

    /// ρ ∈ [1e-4, 1e4], p ∈ [1e-10, 1e6], W ∈ [1, 1e3], all log-uniform.
    pub fn primitive<const D: usize>(&mut self) -> Primitive<f64, D> {
        let rho = self.log_uniform(1e-4, 1e4);
        let p = self.log_uniform(1e-10, 1e6);
        let w = if self.rng.random_bool(0.2) { 1.0 } else { self.log_uniform(1.0, 1e3) };
        let speed = (1.0 - 1.0 / (w * w)).sqrt();
        let dir = self.direction::<D>();
        Primitive::new(rho, dir.map(|d| d * speed), p)
    }

    /// Admissible state from a random primitive together with its recovered
    /// primitive; draws whose forward map lands within 1e-8 of the boundary
    /// in q/E are redrawn, since their q is not resolved in double precision.
    pub fn state<const D: usize>(&mut self, eos: &EosParams<f64>) -> (Conserved<f64, D>, Primitive<f64, D>) {
        loop {
            let u = conserved_unchecked(&self.primitive::<D>(), eos);
            if !(u.q() >= 1e-8 * u.e) {
                continue;
            }
            if let Ok(v) = primitive_from_conserved(&u, eos, &RecoveryOptions::default()) {
                return (u, v);
            }
        }
    }

    /// Admissible state with q/E pushed toward zero, down to about 1e-8.
    pub fn near_boundary<const D: usize>(&mut self, eos: &EosParams<f64>) -> Conserved<f64, D> {
        let u = self.state::<D>(eos).0;
        let s = (u.d * u.d + u.momentum_sq()).sqrt();
        let eta = self.log_uniform(1e-8, 1.0);
        Conserved { e: s * (1.0 + eta), ..u }
    }

    /// Admissible state, a quarter of them near the boundary.
    pub fn admissible<const D: usize>(&mut self, eos: &EosParams<f64>) -> Conserved<f64, D> {
        if self.rng.random_bool(0.25) {
            self.near_boundary(eos)
        } else {
            self.state::<D>(eos).0
        }
    }

    /// Arbitrary vector with entries of mixed sign and magnitude.
    pub fn vector<const D: usize>(&mut self) -> Conserved<f64, D> {
        let mut u = Conserved::zero();
        for k in 0..D + 2 {
            let mag = self.log_uniform(1e-6, 1e6);
            u[k] = if self.rng.random_bool(0.5) { mag } else { -mag };
        }
        u
    }
}

fn slack(scale: f64) -> f64 {
    Q_SLACK * f64::EPSILON * scale
}

/// D > 0 and q above the roundoff allowance for an energy scale.
fn admissible_within<const D: usize>(u: &Conserved<f64, D>, scale: f64) -> bool {
    u.d > 0.0 && u.q() > -slack(scale)
}

/// Outcome of one family.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyResult {
    pub name: &'static str,
    pub samples: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub families: Vec<FamilyResult>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(|f| f.violations == 0)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fam in &self.families {
            writeln!(f, "{} {} {}", fam.name, fam.samples, fam.violations)?;
        }
        Ok(())
    }
}

type Check = fn(&mut RandomStates, usize) -> bool;

fn run_family(name: &'static str, family: u64, samples: usize, seed: u64, check: Check) -> FamilyResult {
    let shards = samples.div_ceil(SHARD);
    let violations = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = RandomStates::new(seed, (family << 32) | s as u64);
            let count = SHARD.min(samples - s * SHARD);
            (0..count).filter(|&k| !check(&mut rng, s * SHARD + k)).count()
        })
        .sum();
    FamilyResult {
        name,
        samples,
        violations,
    }
}

fn convexity<const D: usize>(rng: &mut RandomStates) -> bool {
    let eos = rng.gamma();
    let a = rng.admissible::<D>(&eos);
    let b = rng.admissible::<D>(&eos);
    (0..=10).all(|k| {
        let lam = k as f64 / 10.0;
        let u = a * (1.0 - lam) + b * lam;
        u.d > 0.0 && u.q() > 0.0
    })
}

fn concave_lipschitz<const D: usize>(rng: &mut RandomStates) -> bool {
    let a = rng.vector::<D>();
    let b = rng.vector::<D>();
    let scale = a.norm() + b.norm();
    let lam = rng.uniform(0.0, 1.0);
    let mix = a * (1.0 - lam) + b * lam;
    let concave = mix.q() >= (1.0 - lam) * a.q() + lam * b.q() - slack(scale);
    let lipschitz = (a.q() - b.q()).abs() <= 2f64.sqrt() * (a - b).norm() + slack(scale);
    concave && lipschitz
}

fn state_flux<const D: usize>(rng: &mut RandomStates) -> bool {
    let eos = rng.gamma();
    let (u, v) = rng.state::<D>(&eos);
    let lam = rng.log_uniform(1e-3, 1e3);
    let mut ok = (u * lam).d > 0.0 && (u * lam).q() > 0.0;
    if D == 2 {
        let th = rng.uniform(0.0, std::f64::consts::TAU);
        let (s, c) = th.sin_cos();
        let mut r = u;
        r.m[0] = c * u.m[0] - s * u.m[1];
        r.m[1] = s * u.m[0] + c * u.m[1];
        ok &= admissible_within(&r, u.e);
    }
    for axis in 0..D {
        let f = physical_flux(&v, &u, axis);
        let rho = spectral_radius(&v, &eos, axis);
        for alpha in [rho, rho * (1.0 + rng.uniform(0.0, 1.0))] {
            let scale = u.e + f.e.abs() / alpha;
            ok &= admissible_within(&(u + f * (1.0 / alpha)), scale);
            ok &= admissible_within(&(u - f * (1.0 / alpha)), scale);
        }
    }
    ok
}

fn llf_update<const D: usize>(rng: &mut RandomStates) -> bool {
    let eos = rng.gamma();
    let cells = [rng.admissible::<D>(&eos), rng.admissible::<D>(&eos), rng.admissible::<D>(&eos)];
    let prims: Vec<_> = cells
        .iter()
        .map(|u| primitive_from_conserved(u, &eos, &RecoveryOptions::default()).unwrap())
        .collect();
    let axis = rng.rng.random_range(0..D);
    let mut alphas = [0.0; 2];
    for (k, a) in alphas.iter_mut().enumerate() {
        let r = spectral_radius(&prims[k], &eos, axis).max(spectral_radius(&prims[k + 1], &eos, axis));
        *a = r * (1.0 + rng.uniform(0.0, 0.3));
    }
    let amax = alphas[0].max(alphas[1]);
    let dt_dx = rng.uniform(0.0, 1.0) / (2.0 * amax);
    let f: Vec<_> = cells.iter().zip(&prims).map(|(u, v)| physical_flux(v, u, axis)).collect();
    let fm = llf_from_fluxes(&cells[0], &cells[1], &f[0], &f[1], alphas[0]);
    let fp = llf_from_fluxes(&cells[1], &cells[2], &f[1], &f[2], alphas[1]);
    let plus = cells[1] - fp * (2.0 * dt_dx);
    let minus = cells[1] + fm * (2.0 * dt_dx);
    let avg = (plus + minus) * 0.5;
    let scale = cells.iter().map(|u| u.e).fold(0.0, f64::max);
    admissible_within(&plus, scale) && admissible_within(&minus, scale) && admissible_within(&avg, scale)
}

fn source_step(rng: &mut RandomStates) -> bool {
    let eos = rng.gamma();
    let (mut u, _) = rng.state::<2>(&eos);
    u.m[0] = u.m[0].abs();
    let v = primitive_from_conserved(&u, &eos, &RecoveryOptions::default()).unwrap();
    if !(v.v[0] > 0.0) {
        return true;
    }
    let r = rng.log_uniform(1e-3, 10.0);
    let bound = source_bound_term(r, u.q(), v.p, v.v[0]).unwrap();
    // ξ strictly below q/(p+q)
    let dt = bound * rng.uniform(0.0, 1.0);
    let next = u + source_with_primitive(&u, &v, r) * dt;
    admissible_within(&next, u.e)
}

/// φ(λ) = p(λU¹ + (1-λ)U⁰) - λp(U¹) - (1-λ)p(U⁰) at two fixed states.
pub fn pressure_concavity_gap(lambda: f64, eos: &EosParams<f64>) -> f64 {
    let u0 = Conserved::<f64, 1>::new(2.0, [1.2], 8.0);
    let u1 = Conserved::<f64, 1>::new(2.0, [5.0], 35.0);
    let opts = RecoveryOptions::default();
    let p = |u: &Conserved<f64, 1>| primitive_from_conserved(u, eos, &opts).unwrap().p;
    p(&(u1 * lambda + u0 * (1.0 - lambda))) - lambda * p(&u1) - (1.0 - lambda) * p(&u0)
}

fn pressure_witness(rng: &mut RandomStates, k: usize) -> bool {
    let eos = EosParams::new(5.0 / 3.0).unwrap();
    let lam = if k < 9 { (k + 1) as f64 / 10.0 } else { rng.uniform(1e-3, 1.0 - 1e-3) };
    pressure_concavity_gap(lam, &eos) < 0.0
}

/// Runs every family with `samples` cases each (both dimensions where the
/// property is dimension dependent).
pub fn lemma_property_suite(samples: usize, seed: u64) -> PropertyReport {
    let fams: [(&'static str, Check); 6] = [
        ("convexity_g1", |r, k| if k % 2 == 0 { convexity::<1>(r) } else { convexity::<2>(r) }),
        ("q_concave_lipschitz", |r, k| {
            if k % 2 == 0 {
                concave_lipschitz::<1>(r)
            } else {
                concave_lipschitz::<2>(r)
            }
        }),
        ("state_flux", |r, k| if k % 2 == 0 { state_flux::<1>(r) } else { state_flux::<2>(r) }),
        ("llf_update", |r, k| if k % 2 == 0 { llf_update::<1>(r) } else { llf_update::<2>(r) }),
        ("source_bound", |r, _| source_step(r)),
        ("pressure_nonconcavity", pressure_witness),
    ];
    PropertyReport {
        families: fams
            .iter()
            .enumerate()
            .map(|(i, (name, check))| run_family(name, i as u64, samples, seed, *check))
            .collect(),
    }
}
