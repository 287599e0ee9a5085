//! Exact solution of the one-dimensional relativistic Riemann problem for a
//! Γ-law gas with zero transverse velocity.

use crate::error::{Result, SolverError};
use crate::state::{EosParams, Primitive};

/// Nonlinear wave on one side of the contact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    /// Fan between `head` (facing the undisturbed state) and `tail`.
    Rarefaction { head: f64, tail: f64 },
}

impl Wave {
    /// Slowest and fastest speed occupied by the wave.
    pub fn span(&self) -> (f64, f64) {
        match *self {
            Wave::Shock { speed } => (speed, speed),
            Wave::Rarefaction { head, tail } => (head.min(tail), head.max(tail)),
        }
    }

    pub fn is_shock(&self) -> bool {
        matches!(self, Wave::Shock { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiemannSolution {
    pub gamma: f64,
    pub left: Primitive<f64, 1>,
    pub right: Primitive<f64, 1>,
    pub p_star: f64,
    /// Contact speed.
    pub v_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
}

#[derive(Clone, Copy)]
struct Side {
    rho: f64,
    v: f64,
    p: f64,
    gamma: f64,
    /// -1 for the left wave family, +1 for the right one.
    sign: f64,
}

impl Side {
    fn h(&self) -> f64 {
        enthalpy(self.gamma, self.rho, self.p)
    }

    fn c(&self) -> f64 {
        sound(self.gamma, self.rho, self.p)
    }

    fn lorentz(&self) -> f64 {
        1.0 / ((1.0 - self.v) * (1.0 + self.v)).sqrt()
    }

    /// Velocity and density behind the wave when the star pressure is `pb`.
    fn star(&self, pb: f64) -> (f64, f64) {
        if pb > self.p {
            let (v, rho, _) = self.shock(pb);
            (v, rho)
        } else {
            self.rarefaction(pb)
        }
    }

    fn shock(&self, pb: f64) -> (f64, f64, f64) {
        let g = self.gamma;
        let (ra, pa, va, ha) = (self.rho, self.p, self.v, self.h());
        let wa = self.lorentz();
        let kappa = (g - 1.0) * (pa - pb) / (g * pb);
        let a = 1.0 + kappa;
        let c0 = ha * (pa - pb) / ra - ha * ha;
        let hb = (kappa + (kappa * kappa - 4.0 * a * c0).sqrt()) / (2.0 * a);
        let rb = g * pb / ((g - 1.0) * (hb - 1.0));
        let j2 = (pb - pa) / (ha / ra - hb / rb);
        let jabs = j2.sqrt();
        let rw2 = ra * ra * wa * wa;
        let vs = (rw2 * va + self.sign * jabs * (j2 + ra * ra).sqrt()) / (rw2 + j2);
        let ws = 1.0 / ((1.0 - vs) * (1.0 + vs)).sqrt();
        let j = self.sign * jabs;
        let vb = (ha * wa * va + ws * (pb - pa) / j) / (ha * wa + (pb - pa) * (ws * va / j + 1.0 / (ra * wa)));
        (vb, rb, vs)
    }

    fn rarefaction(&self, pb: f64) -> (f64, f64) {
        let g = self.gamma;
        let rb = self.rho * (pb / self.p).powf(1.0 / g);
        let cb = sound(g, rb, pb);
        let v = invariant_velocity(g, self.v, self.c(), cb, self.sign);
        (v, rb)
    }

    /// State inside the fan at similarity coordinate ξ.
    fn fan(&self, xi: f64, c_tail: f64) -> Primitive<f64, 1> {
        let g = self.gamma;
        let ca = self.c();
        let speed = |c: f64| {
            let v = invariant_velocity(g, self.v, ca, c, self.sign);
            (v + self.sign * c) / (1.0 + self.sign * v * c)
        };
        // characteristic speed is monotone in c across the fan
        let (mut lo, mut hi) = (c_tail.min(ca), c_tail.max(ca));
        let increasing = speed(hi) > speed(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (speed(mid) < xi) == increasing {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = 0.5 * (lo + hi);
        let v = invariant_velocity(g, self.v, ca, c, self.sign);
        let k = self.p / self.rho.powf(g);
        let theta = c * c * (g - 1.0) / (g * (g - 1.0 - c * c));
        let rho = (theta / k).powf(1.0 / (g - 1.0));
        Primitive::new(rho, [v], theta * rho)
    }
}

fn enthalpy(g: f64, rho: f64, p: f64) -> f64 {
    1.0 + g / (g - 1.0) * p / rho
}

fn sound(g: f64, rho: f64, p: f64) -> f64 {
    (g * p / (rho * enthalpy(g, rho, p))).sqrt()
}

/// ln B(c) with B(c) = ((√(Γ-1) + c)/(√(Γ-1) - c))^{2/√(Γ-1)}.
fn ln_b(g: f64, c: f64) -> f64 {
    let s = (g - 1.0).sqrt();
    2.0 / s * ((s + c) / (s - c)).ln()
}

/// Velocity reached along a rarefaction of the given family when the sound
/// speed changes from `ca` to `c`; (1+v)/(1-v) · B(c)^{-sign} is invariant.
fn invariant_velocity(g: f64, va: f64, ca: f64, c: f64, sign: f64) -> f64 {
    let ln_ratio = ((1.0 + va) / (1.0 - va)).ln() + sign * (ln_b(g, c) - ln_b(g, ca));
    (0.5 * ln_ratio).tanh()
}

/// Solves the Riemann problem with left and right primitive states.
pub fn exact_riemann_1d(
    left: &Primitive<f64, 1>,
    right: &Primitive<f64, 1>,
    eos: &EosParams<f64>,
) -> Result<RiemannSolution> {
    left.validate()?;
    right.validate()?;
    let g = eos.gamma();
    let l = Side {
        rho: left.rho,
        v: left.v[0],
        p: left.p,
        gamma: g,
        sign: -1.0,
    };
    let r = Side {
        rho: right.rho,
        v: right.v[0],
        p: right.p,
        gamma: g,
        sign: 1.0,
    };
    let f = |p: f64| l.star(p).0 - r.star(p).0;

    let mut lo = left.p.min(right.p);
    let mut hi = left.p.max(right.p);
    let mut expand = 0;
    while f(lo) < 0.0 {
        lo *= 0.1;
        expand += 1;
        if expand > 400 || lo == 0.0 {
            return Err(SolverError::Riemann("no star pressure found (vacuum generated)".into()));
        }
    }
    while f(hi) > 0.0 {
        hi *= 10.0;
        expand += 1;
        if expand > 400 || !hi.is_finite() {
            return Err(SolverError::Riemann("star pressure bracket diverged".into()));
        }
    }
    let (mut a, mut b) = (lo.ln(), hi.ln());
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m.exp()) > 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-16 {
            break;
        }
    }
    let p_star = (0.5 * (a + b)).exp();
    let (vl, rho_l) = l.star(p_star);
    let (vr, rho_r) = r.star(p_star);
    let v_star = 0.5 * (vl + vr);
    if !((vl - vr).abs() <= 1e-10) {
        return Err(SolverError::Riemann(format!(
            "star velocities disagree by {:e} after pressure iteration",
            (vl - vr).abs()
        )));
    }

    let wave = |s: &Side, rho_star: f64| {
        if p_star > s.p {
            Wave::Shock { speed: s.shock(p_star).2 }
        } else {
            let cs = sound(g, rho_star, p_star);
            let char_speed = |v: f64, c: f64| (v + s.sign * c) / (1.0 + s.sign * v * c);
            Wave::Rarefaction {
                head: char_speed(s.v, s.c()),
                tail: char_speed(v_star, cs),
            }
        }
    };
    Ok(RiemannSolution {
        gamma: g,
        left: *left,
        right: *right,
        p_star,
        v_star,
        rho_star_left: rho_l,
        rho_star_right: rho_r,
        left_wave: wave(&l, rho_l),
        right_wave: wave(&r, rho_r),
    })
}

impl RiemannSolution {
    fn side(&self, left: bool) -> Side {
        let s = if left { &self.left } else { &self.right };
        Side {
            rho: s.rho,
            v: s.v[0],
            p: s.p,
            gamma: self.gamma,
            sign: if left { -1.0 } else { 1.0 },
        }
    }

    /// Primitive state at similarity coordinate ξ = (x - x₀)/t.
    pub fn sample(&self, xi: f64) -> Primitive<f64, 1> {
        let star_l = Primitive::new(self.rho_star_left, [self.v_star], self.p_star);
        let star_r = Primitive::new(self.rho_star_right, [self.v_star], self.p_star);
        if xi < self.v_star {
            match self.left_wave {
                Wave::Shock { speed } => {
                    if xi < speed {
                        self.left
                    } else {
                        star_l
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi < head {
                        self.left
                    } else if xi > tail {
                        star_l
                    } else {
                        let cs = sound(self.gamma, self.rho_star_left, self.p_star);
                        self.side(true).fan(xi, cs)
                    }
                }
            }
        } else {
            match self.right_wave {
                Wave::Shock { speed } => {
                    if xi > speed {
                        self.right
                    } else {
                        star_r
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi > head {
                        self.right
                    } else if xi < tail {
                        star_r
                    } else {
                        let cs = sound(self.gamma, self.rho_star_right, self.p_star);
                        self.side(false).fan(xi, cs)
                    }
                }
            }
        }
    }

    /// Every wave speed in increasing order (fans contribute head and tail).
    pub fn speeds(&self) -> Vec<f64> {
        let (a, b) = self.left_wave.span();
        let (c, d) = self.right_wave.span();
        let mut out = vec![a];
        if b > a {
            out.push(b);
        }
        out.push(self.v_star);
        out.push(c);
        if d > c {
            out.push(d);
        }
        out
    }

    /// Positions at time `t` of the shocks and the contact, with the density
    /// on either side, for a problem split at `x0`.
    pub fn discontinuities(&self, x0: f64, t: f64) -> Vec<Discontinuity> {
        let mut out = Vec::new();
        let mut push = |speed: f64, kind: &'static str| {
            let eps = 1e-12;
            out.push(Discontinuity {
                x: x0 + speed * t,
                kind,
                rho_left: self.sample(speed - eps).rho,
                rho_right: self.sample(speed + eps).rho,
            });
        };
        if let Wave::Shock { speed } = self.left_wave {
            push(speed, "shock");
        }
        if (self.rho_star_left - self.rho_star_right).abs() > 1e-12 * self.rho_star_left.max(self.rho_star_right) {
            push(self.v_star, "contact");
        }
        if let Wave::Shock { speed } = self.right_wave {
            push(speed, "shock");
        }
        out
    }
}

/// A jump in the density at a known position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Discontinuity {
    pub x: f64,
    pub kind: &'static str,
    pub rho_left: f64,
    pub rho_right: f64,
}
