use serde::Serialize;

use super::ball::build_ball;
use super::lattice::{LatticeClass, Rows, TreeContext};
use super::ring::{DivElem, DivisionRing, LocalRing};
use crate::error::{Error, Result};
use crate::exactnum::{rat_int, trailing_valuation};
use crate::quatalg::{hyperbolic_generator, GammaElement, QuaternionAlgebra, QuaternionOrder};

pub type DivisionTree = TreeContext<DivisionRing>;

/// `p^t g` with `t` the least exponent making every coefficient `p`-integral.
/// Scaling by the central element `p` does not change the homothety action.
pub fn gamma_rows(ring: &DivisionRing, g: &GammaElement) -> Result<Rows<DivElem>> {
    let p = ring.prime();
    let t = g
        .matrix()
        .entries()
        .flat_map(|x| x.coeffs().iter())
        .filter(|c| !num_traits::Zero::is_zero(*c))
        .map(|c| trailing_valuation(c.denom(), p).0)
        .max()
        .unwrap_or(0);
    let scale = rat_int(p as i64).pow(t as i32);
    let lift = |r: usize, c: usize| {
        let x = g.matrix().entry(r, c).scale(&scale);
        ring.from_rational_coeffs(x.coeffs())
            .ok_or_else(|| Error::NotInOrder(format!("{x} is not p-integral")))
    };
    Ok([[lift(0, 0)?, lift(0, 1)?], [lift(1, 0)?, lift(1, 1)?]])
}

/// `L -> L g` on homothety classes.
pub fn act(ctx: &DivisionTree, g: &GammaElement, v: &LatticeClass) -> Result<LatticeClass> {
    ctx.act_matrix(&gamma_rows(ctx.ring(), g)?, v)
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub p: u64,
    pub generator: String,
    pub translation_length: u32,
    pub ball_radius: u32,
    pub ball_size: usize,
    /// `(n, d(v0, g^n v0))` for `n = 1..=4`.
    pub displacements: Vec<(u32, u32)>,
}

impl WitnessReport {
    pub fn pass(&self) -> bool {
        self.translation_length > 0
            && self
                .displacements
                .iter()
                .all(|&(n, d)| d == n * self.translation_length)
    }
}

pub const WITNESS_RADIUS: u32 = 3;

/// Minimal displacement of the hyperbolic generator over a ball around the
/// standard vertex, and the displacement of its powers at the center.
pub fn witness_hyperbolic(
    alg: &QuaternionAlgebra,
    order: &QuaternionOrder,
    precision: u32,
    budget: usize,
) -> Result<(GammaElement, WitnessReport)> {
    let ctx = TreeContext::new(DivisionRing::new(alg, precision)?);
    let g = hyperbolic_generator(alg, order)?;
    let rows = gamma_rows(ctx.ring(), &g)?;
    let v0 = LatticeClass::standard();

    let ball = build_ball(&ctx, &v0, WITNESS_RADIUS, budget)?;
    let mut ell = u32::MAX;
    for v in &ball.vertices {
        let d = ctx.distance(v, &ctx.act_matrix(&rows, v)?)?;
        ell = ell.min(d);
    }
    if ell == 0 {
        return Err(Error::WitnessNotHyperbolic("generator fixes a vertex of the ball".into()));
    }

    let mut displacements = Vec::with_capacity(4);
    let mut w = v0.clone();
    for n in 1..=4 {
        w = ctx.act_matrix(&rows, &w)?;
        displacements.push((n, ctx.distance(&v0, &w)?));
    }
    let report = WitnessReport {
        p: alg.p(),
        generator: g.matrix().to_string(),
        translation_length: ell,
        ball_radius: WITNESS_RADIUS,
        ball_size: ball.len(),
        displacements,
    };
    if !report.pass() {
        return Err(Error::WitnessNotHyperbolic(format!(
            "displacements {:?} are not linear in n with slope {ell}",
            report.displacements
        )));
    }
    Ok((g, report))
}
