//! The gravitational switch: Schwarzschild worldlines in frame-adapted
//! coordinates, radial light travel times, branch-dependent causal order,
//! and the resulting switch map.
//!
//! Two classical spacetimes differ by which of two laboratories sits closer
//! to the mass. Coordinates are adapted so the lower-potential laboratory's
//! events occur at the same coordinate time in both branches; the other
//! laboratory's events then drift to earlier coordinate time in one branch
//! and later in the other, flipping which event can signal to which.

use crate::tensor::CMat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GravityError {
    #[error("worldline at r = {r} m is inside the horizon r_s = {rs} m")]
    InsideHorizon { r: f64, rs: f64 },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

pub type Result<T> = std::result::Result<T, GravityError>;

pub const NEWTON_G: f64 = 6.674e-11;
pub const LIGHT_SPEED: f64 = 299_792_458.0;

/// Mass, laboratory radii, and constants; both worldlines must sit outside
/// the horizon.
#[derive(Clone, Copy, Debug)]
pub struct SchwarzschildParams {
    /// central mass (kg)
    pub mass: f64,
    /// radial coordinate of the inner laboratory (m)
    pub radius: f64,
    /// radial separation of the outer laboratory (m)
    pub height: f64,
    pub g: f64,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    One,
    Two,
}

/// Causal relation between the two parties' events in one branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalRelation {
    BBeforeA,
    ABeforeB,
    Spacelike,
}

/// A coordinate event in a branch's frame-adapted chart.
#[derive(Clone, Copy, Debug)]
pub struct CoordEvent {
    /// frame-adapted coordinate time t₁ or t₂ (s)
    pub t: f64,
    /// chart position (m)
    pub z: f64,
    pub branch: Branch,
}

impl SchwarzschildParams {
    pub fn new(mass: f64, radius: f64, height: f64) -> Result<Self> {
        let p = Self {
            mass,
            radius,
            height,
            g: NEWTON_G,
            c: LIGHT_SPEED,
        };
        if mass < 0.0 {
            return Err(GravityError::BadParameter("negative mass".into()));
        }
        if height <= 0.0 {
            return Err(GravityError::BadParameter("height must be positive".into()));
        }
        if radius <= p.schwarzschild_radius() {
            return Err(GravityError::InsideHorizon {
                r: radius,
                rs: p.schwarzschild_radius(),
            });
        }
        Ok(p)
    }

    pub fn schwarzschild_radius(&self) -> f64 {
        2.0 * self.g * self.mass / (self.c * self.c)
    }

    /// `f(r) = 1 − 2GM/(r c²)`.
    pub fn lapse(&self, r: f64) -> Result<f64> {
        let rs = self.schwarzschild_radius();
        if r <= rs {
            return Err(GravityError::InsideHorizon { r, rs });
        }
        Ok(1.0 - rs / r)
    }
}

/// The radial coordinate a chart position refers to: branch 1 has
/// `z = r − R` (the inner laboratory at z = 0); branch 2 has
/// `z = r + R + h` per the mirrored chart.
pub fn chart_radius(branch: Branch, z: f64, p: &SchwarzschildParams) -> f64 {
    match branch {
        Branch::One => z + p.radius,
        Branch::Two => z - p.radius - p.height,
    }
}

/// Worldline events at proper time `tau` of the party's local clock.
///
/// Coordinates are adapted to A: in both branches A's coordinate time equals
/// its proper time. In branch 1, A sits at radius R (z = 0) with B above at
/// R + h; in branch 2 the configuration is mirrored (A at R + h, B at R),
/// so B's clock runs slow relative to coordinate time in one branch and
/// fast in the other.
pub fn worldline_event(
    party: Party,
    tau: f64,
    branch: Branch,
    p: &SchwarzschildParams,
) -> Result<CoordEvent> {
    if tau < 0.0 {
        return Err(GravityError::BadParameter("negative proper time".into()));
    }
    let f_r = p.lapse(p.radius)?;
    let f_rh = p.lapse(p.radius + p.height)?;
    let (t, r) = match (branch, party) {
        // branch 1: adapted time t₁ = t·√f(R)
        (Branch::One, Party::A) => (tau, p.radius),
        (Branch::One, Party::B) => (tau * (f_r / f_rh).sqrt(), p.radius + p.height),
        // branch 2: adapted time t₂ = t·√f(R+h); A now sits at R + h
        (Branch::Two, Party::A) => (tau, p.radius + p.height),
        (Branch::Two, Party::B) => (tau * (f_rh / f_r).sqrt(), p.radius),
    };
    let z = match branch {
        Branch::One => r - p.radius,
        Branch::Two => r + p.radius + p.height,
    };
    Ok(CoordEvent { t, z, branch })
}

/// Frame-adapted metric components at chart position `z`:
/// branch 1: `g_tt = −c²·f(z+R)/f(R)`, `g_zz = 1/f(z+R)`; branch 2
/// mirrored with `f(z−R−h)/f(R+h)`.
pub fn metric_components(branch: Branch, z: f64, p: &SchwarzschildParams) -> Result<(f64, f64)> {
    let r = chart_radius(branch, z, p);
    let f = p.lapse(r)?;
    let f_anchor = match branch {
        Branch::One => p.lapse(p.radius)?,
        Branch::Two => p.lapse(p.radius + p.height)?,
    };
    Ok((-p.c * p.c * f / f_anchor, 1.0 / f))
}

/// `∫ dr/f(r) = r + r_s·ln(r/r_s − 1)`, the tortoise-coordinate primitive.
fn tortoise(r: f64, rs: f64) -> f64 {
    if rs == 0.0 {
        r
    } else {
        r + rs * (r / rs - 1.0).ln()
    }
}

/// Coordinate time of a radial null geodesic between two chart positions:
/// `Δt = (√f_anchor / c)·[tortoise(r)]` between the endpoint radii.
pub fn light_travel_time(
    z_from: f64,
    z_to: f64,
    branch: Branch,
    p: &SchwarzschildParams,
) -> Result<f64> {
    let r1 = chart_radius(branch, z_from, p);
    let r2 = chart_radius(branch, z_to, p);
    let rs = p.schwarzschild_radius();
    if r1 <= rs || r2 <= rs {
        return Err(GravityError::InsideHorizon { r: r1.min(r2), rs });
    }
    let f_anchor = match branch {
        Branch::One => p.lapse(p.radius)?,
        Branch::Two => p.lapse(p.radius + p.height)?,
    };
    Ok(f_anchor.sqrt() / p.c * (tortoise(r2.max(r1), rs) - tortoise(r2.min(r1), rs)))
}

/// Same integral by adaptive Simpson quadrature; cross-check for the closed
/// form.
pub fn light_travel_time_quadrature(
    z_from: f64,
    z_to: f64,
    branch: Branch,
    p: &SchwarzschildParams,
) -> Result<f64> {
    let r1 = chart_radius(branch, z_from, p);
    let r2 = chart_radius(branch, z_to, p);
    let rs = p.schwarzschild_radius();
    if r1 <= rs || r2 <= rs {
        return Err(GravityError::InsideHorizon { r: r1.min(r2), rs });
    }
    let f_anchor = match branch {
        Branch::One => p.lapse(p.radius)?,
        Branch::Two => p.lapse(p.radius + p.height)?,
    };
    let (lo, hi) = (r1.min(r2), r1.max(r2));
    let integrand = |r: f64| 1.0 / (1.0 - rs / r);
    let integral = adaptive_simpson(&integrand, lo, hi, 1e-14, 48);
    Ok(f_anchor.sqrt() / p.c * integral)
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let whole = simpson(f, a, b);
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol * (1.0 + whole.abs()) {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, right, 0.5 * tol, depth - 1)
        }
    }
    recurse(f, a, b, whole, tol, depth)
}

/// Causal relations of the two events at shared proper time `tau_star`, one
/// per branch: a party precedes the other if the coordinate-time gap covers
/// the radial light travel time (null separation counts as causal).
pub fn causal_order(tau_star: f64, p: &SchwarzschildParams) -> Result<(CausalRelation, CausalRelation)> {
    if tau_star <= 0.0 {
        return Err(GravityError::BadParameter(
            "tau_star must be positive".into(),
        ));
    }
    let mut relations = Vec::with_capacity(2);
    for branch in [Branch::One, Branch::Two] {
        let a = worldline_event(Party::A, tau_star, branch, p)?;
        let b = worldline_event(Party::B, tau_star, branch, p)?;
        let flight = light_travel_time(a.z, b.z, branch, p)?;
        let rel = if b.t + flight <= a.t {
            CausalRelation::BBeforeA
        } else if a.t + flight <= b.t {
            CausalRelation::ABeforeB
        } else {
            CausalRelation::Spacelike
        };
        relations.push(rel);
    }
    Ok((relations[0], relations[1]))
}

/// A parameter point whose two branches realise strictly opposite causal
/// orders, found by a deterministic coarse search (the configuration is a
/// regression fixture, not a literature value).
#[derive(Clone, Copy, Debug)]
pub struct SwitchPoint {
    pub params: SchwarzschildParams,
    pub tau_star: f64,
    pub orders: (CausalRelation, CausalRelation),
}

/// Searches masses and times until branch 1 gives B≺A while branch 2 gives
/// A≺B. The dilation gap grows linearly in `tau_star`, so a point always
/// exists outside the horizon; the grid walks mass upward and `tau_star`
/// geometrically.
pub fn find_switch_point(radius: f64, height: f64) -> Result<SwitchPoint> {
    for mass_exp in 24..34 {
        let mass = 10f64.powi(mass_exp);
        let p = match SchwarzschildParams::new(mass, radius, height) {
            Ok(p) => p,
            Err(_) => continue,
        };
        // skip configurations whose dilation factor is unresolvable in f64
        let ratio = (p.lapse(p.radius + p.height)? / p.lapse(p.radius)?).sqrt();
        if ratio - 1.0 < 1e-13 {
            continue;
        }
        let mut tau = height / p.c;
        for _ in 0..80 {
            tau *= 2.0;
            let orders = causal_order(tau, &p)?;
            if orders == (CausalRelation::BBeforeA, CausalRelation::ABeforeB) {
                return Ok(SwitchPoint {
                    params: p,
                    tau_star: tau,
                    orders,
                });
            }
        }
    }
    Err(GravityError::BadParameter(
        "no switch point in the searched grid".into(),
    ))
}

/// `|0⟩⟨0|_C ⊗ U_B·U_A + |1⟩⟨1|_C ⊗ U_A·U_B` on control ⊗ system: the mass
/// position controls which laboratory acts first.
pub fn gravitational_switch(u_a: &CMat, u_b: &CMat) -> Result<CMat> {
    for (name, u) in [("U_A", u_a), ("U_B", u_b)] {
        if u.nrows() != u.ncols() {
            return Err(GravityError::BadParameter(format!("{name} not square")));
        }
        let gram = u.adjoint() * u;
        let resid = (&gram - CMat::identity(u.nrows(), u.nrows())).norm();
        if resid > 1e-8 {
            return Err(GravityError::BadParameter(format!(
                "{name} not unitary (residual {resid:.3e})"
            )));
        }
    }
    Ok(crate::zoo::switch_g(u_a, u_b))
}
