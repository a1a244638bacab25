use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, Exp1, Gamma, Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{ArchimaxGenerator, DgpSpec};
use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::special::student_t_cdf;

/// Seeded random stream identified by `(seed, dgp, replication)`.
///
/// Distinct stream ids give independent ChaCha streams under one seed, so
/// replications can be drawn in any order on any number of threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub dgp: u32,
    pub replication: u32,
}

impl RngStream {
    pub fn new(seed: u64, dgp: u32, replication: u32) -> Self {
        RngStream { seed, dgp, replication }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((self.dgp as u64) << 32) | self.replication as u64);
        rng
    }
}

/// A bivariate law that can emit pairs of upper-tail probabilities
/// `(1 - F_1(X_1), 1 - F_2(X_2))`.
pub trait TailSampler {
    fn draw_tail<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2];
}

/// Positive stable variable with Laplace transform `exp(-t^alpha)`,
/// `0 < alpha <= 1` (Kanter's representation).
pub fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    let u: f64 = PI * rng.sample::<f64, _>(Open01);
    let e: f64 = rng.sample(Exp1);
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * u).sin() / e).powf((1.0 - alpha) / alpha);
    a * b
}

/// One draw on the emission scale together with its tail probabilities.
struct Draw {
    value: [f64; 2],
    tail: [f64; 2],
}

impl DgpSpec {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Draw {
        match *self {
            DgpSpec::TCopula { df, theta } => {
                let z1: f64 = rng.sample(StandardNormal);
                let z2: f64 = rng.sample(StandardNormal);
                let w: f64 = ChiSquared::new(df).expect("validated df").sample(rng);
                let scale = (w / df).sqrt();
                let t1 = z1 / scale;
                let t2 = (theta * z1 + (1.0 - theta * theta).sqrt() * z2) / scale;
                copula_draw([student_t_cdf(-t1, df), student_t_cdf(-t2, df)])
            }
            DgpSpec::Bpii { beta } => {
                let z: f64 = Gamma::new(beta, 1.0).expect("validated beta").sample(rng);
                let e1: f64 = rng.sample(Exp1);
                let e2: f64 = rng.sample(Exp1);
                let (x1, x2) = (e1 / z, e2 / z);
                Draw {
                    value: [x1, x2],
                    tail: [(1.0 + x1).powf(-beta), (1.0 + x2).powf(-beta)],
                }
            }
            DgpSpec::SymmetricLogistic { s } => {
                if s == 1.0 {
                    return copula_draw([rng.sample(Open01), rng.sample(Open01)]);
                }
                // Marshall-Olkin: U_j = psi(E_j / S) with psi(t) = exp(-t^s)
                let stable = positive_stable(s, rng);
                let tail = [0, 1].map(|_| {
                    let e: f64 = rng.sample(Exp1);
                    -(-(e / stable).powf(s)).exp_m1()
                });
                copula_draw(tail)
            }
            DgpSpec::Archimax { generator } => copula_draw(archimax_tail(generator, rng)),
        }
    }
}

fn copula_draw(tail: [f64; 2]) -> Draw {
    Draw {
        value: [1.0 - tail[0], 1.0 - tail[1]],
        tail,
    }
}

/// Conditional-distribution sampling of the Archimax copula with the Clayton
/// generator, carried out on the generator scale `p = phi(u) = 1/u - 1` so
/// upper-tail probabilities `p/(1+p)` keep full relative precision.
///
/// Given `p`, the conditional CDF of the second coordinate, written in
/// `q = phi(v)`, is
/// `h(q) = l_x(p, q) (1 + p)^2 / (1 + l(p, q))^2`, decreasing from 1 to 0.
fn archimax_tail<R: Rng + ?Sized>(generator: ArchimaxGenerator, rng: &mut R) -> [f64; 2] {
    let t1: f64 = rng.sample(Open01);
    let w: f64 = rng.sample(Open01);
    let p = t1 / (1.0 - t1);
    let h = |q: f64| {
        let l = generator.value(p, q);
        generator.d_first(p, q) * ((1.0 + p) / (1.0 + l)).powi(2)
    };
    // bisection in log q down to relative width 1e-12
    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    while hi - lo > 1e-12 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if h(mid.exp()) > w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = (0.5 * (lo + hi)).exp();
    [t1, q / (1.0 + q)]
}

impl TailSampler for DgpSpec {
    fn draw_tail<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        self.draw(rng).tail
    }
}

/// Draws `n` i.i.d. observations.
///
/// Copula families emit uniforms; BPII emits its raw Pareto-scale pairs.
/// Downstream estimators depend on ranks only.
pub fn sample_dgp(spec: &DgpSpec, n: usize, stream: RngStream) -> Result<Sample> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let mut rng = stream.rng();
    let mut data = Vec::with_capacity(2 * n);
    for _ in 0..n {
        data.extend_from_slice(&spec.draw(&mut rng).value);
    }
    Sample::new(data, n, 2)
}
