use num::integer::lcm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{subloop_generated, FiniteLoop, LoopError};
use crate::gf::is_prime;

/// Thresholds for exhaustive versus sampled triple checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    /// Orders up to this are always checked on every triple.
    pub exhaustive_order: usize,
    /// Above `exhaustive_order`, still exhaustive while `n^3` stays below this.
    pub exhaustive_triples: u64,
    pub samples: usize,
    /// Number of random pairs whose generated subloop is checked in full.
    pub subloop_pairs: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            exhaustive_order: 300,
            exhaustive_triples: 10_000_000,
            samples: 1_000_000,
            subloop_pairs: 64,
            seed: crate::DEFAULT_SEED,
        }
    }
}

impl CheckConfig {
    fn exhaustive(&self, n: usize) -> bool {
        n <= self.exhaustive_order || (n as u64).pow(3) <= self.exhaustive_triples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub holds: bool,
    /// Element indices of the first counterexample.
    pub witness: Option<Vec<usize>>,
    #[serde(flatten)]
    pub mode: CheckMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub order: usize,
    pub moufang: PropertyCheck,
    pub associative: PropertyCheck,
    pub commutative: PropertyCheck,
    pub ip: PropertyCheck,
    pub exponent: u64,
    /// `Some(p)` when every element order is a power of the prime `p`.
    pub p_loop: Option<u64>,
}

impl PropertyReport {
    pub fn is_p_loop(&self, p: u64) -> bool {
        self.p_loop == Some(p)
    }
}

fn moufang_fails(l: &FiniteLoop, x: usize, y: usize, z: usize) -> bool {
    // (x * yx) z = x (y * xz)
    l.mul(l.mul(x, l.mul(y, x)), z) != l.mul(x, l.mul(y, l.mul(x, z)))
}

fn triple_check(
    l: &FiniteLoop,
    cfg: &CheckConfig,
    salt: u64,
    fails: impl Fn(usize, usize, usize) -> bool,
) -> PropertyCheck {
    let n = l.order();
    if cfg.exhaustive(n) {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if fails(x, y, z) {
                        return PropertyCheck {
                            holds: false,
                            witness: Some(vec![x, y, z]),
                            mode: CheckMode::Exhaustive,
                        };
                    }
                }
            }
        }
        return PropertyCheck { holds: true, witness: None, mode: CheckMode::Exhaustive };
    }
    let mode = CheckMode::Sampled { samples: cfg.samples, seed: cfg.seed };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt);
    for _ in 0..cfg.samples {
        let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        if fails(x, y, z) {
            return PropertyCheck { holds: false, witness: Some(vec![x, y, z]), mode };
        }
    }
    PropertyCheck { holds: true, witness: None, mode }
}

/// Least `k >= 1` with `x^k = e` (right-normed powers).
pub fn element_order(l: &FiniteLoop, x: usize) -> u64 {
    let mut p = x;
    let mut k = 1u64;
    while p != 0 {
        p = l.mul(p, x);
        k += 1;
        assert!(k as usize <= l.order() + 1, "element has no finite order");
    }
    k
}

fn prime_power_base(m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m.is_multiple_of(*d) && is_prime(*d))?;
    let mut r = m;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1).then_some(p)
}

pub fn check_properties(l: &FiniteLoop, cfg: &CheckConfig) -> PropertyReport {
    let n = l.order();

    let mut moufang = triple_check(l, cfg, 0x4d4f, |x, y, z| moufang_fails(l, x, y, z));
    if moufang.holds && matches!(moufang.mode, CheckMode::Sampled { .. }) {
        // every 2-generated subloop of a Moufang loop is a group
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5542);
        'pairs: for _ in 0..cfg.subloop_pairs {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let sub = subloop_generated(l, &[a, b]);
            let m = sub.members();
            for &x in m {
                for &y in m {
                    for &z in m {
                        if !l.is_associative_triple(x, y, z) || moufang_fails(l, x, y, z) {
                            moufang.holds = false;
                            moufang.witness = Some(vec![x, y, z]);
                            break 'pairs;
                        }
                    }
                }
            }
        }
    }

    let associative = triple_check(l, cfg, 0x4153, |x, y, z| !l.is_associative_triple(x, y, z));

    let mut commutative = PropertyCheck { holds: true, witness: None, mode: CheckMode::Exhaustive };
    'outer: for x in 0..n {
        for y in (x + 1)..n {
            if l.mul(x, y) != l.mul(y, x) {
                commutative.holds = false;
                commutative.witness = Some(vec![x, y]);
                break 'outer;
            }
        }
    }

    let mut ip = PropertyCheck { holds: true, witness: None, mode: CheckMode::Exhaustive };
    'ip: for x in 0..n {
        let xi = l.inv(x);
        if l.left_inv(x) != xi {
            ip.holds = false;
            ip.witness = Some(vec![x]);
            break;
        }
        for y in 0..n {
            if l.mul(xi, l.mul(x, y)) != y || l.mul(l.mul(y, x), xi) != y {
                ip.holds = false;
                ip.witness = Some(vec![x, y]);
                break 'ip;
            }
        }
    }

    let orders: Vec<u64> = (0..n).map(|x| element_order(l, x)).collect();
    let exponent = orders.iter().fold(1u64, |acc, &o| lcm(acc, o));
    let p_loop =
        prime_power_base(n as u64).filter(|&p| orders.iter().all(|&o| prime_power_base(o).map_or(o == 1, |q| q == p)));

    PropertyReport { order: n, moufang, associative, commutative, ip, exponent, p_loop }
}

/// Loop associator `(x,y,z)` solving `xy*z = (x*yz)(x,y,z)` and commutator
/// `(x,y)` solving `xy = (yx)(x,y)`.
pub fn loop_assoc_comm(l: &FiniteLoop, x: usize, y: usize, z: usize) -> (usize, usize) {
    let assoc = l.ldiv(l.mul(x, l.mul(y, z)), l.mul(l.mul(x, y), z));
    let comm = l.ldiv(l.mul(y, x), l.mul(x, y));
    (assoc, comm)
}

/// Associator as it appears in the seven-variable identity of commutative
/// Moufang loops: `(xy)z * (x(yz))^-1`.
fn assoc_right(l: &FiniteLoop, x: usize, y: usize, z: usize) -> usize {
    l.mul(l.mul(l.mul(x, y), z), l.inv(l.mul(x, l.mul(y, z))))
}

fn nested(l: &FiniteLoop, inner: [usize; 3], w: usize, b: usize, t: usize, c: usize, b2: usize, c2: usize) -> usize {
    // ((((i0,i1,i2),w,b),t,c),b2,c2)
    let a1 = assoc_right(l, inner[0], inner[1], inner[2]);
    let a2 = assoc_right(l, a1, w, b);
    let a3 = assoc_right(l, a2, t, c);
    assoc_right(l, a3, b2, c2)
}

/// Evaluates the six-factor product of the seven-variable identity at
/// `(a,x,y,z,b,t,c)`, multiplying the factors left to right.
pub fn cml_identity_value(l: &FiniteLoop, tuple: [usize; 7]) -> usize {
    let [a, x, y, z, b, t, c] = tuple;
    let f1 = nested(l, [a, x, y], z, b, t, c, b, c);
    let f2 = nested(l, [a, x, z], y, b, t, c, b, c);
    let f3 = l.inv(nested(l, [a, x, t], y, b, z, c, b, c));
    let f4 = nested(l, [a, x, b], y, z, t, c, b, c);
    let f5 = nested(l, [a, x, c], y, z, t, b, b, c);
    let f6 = nested(l, [a, x, b], y, c, z, t, b, c);
    [f2, f3, f4, f5, f6].into_iter().fold(f1, |acc, f| l.mul(acc, f))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmlIdentityReport {
    pub holds: bool,
    pub samples: usize,
    pub seed: u64,
    pub witness: Option<[usize; 7]>,
}

pub fn check_cml_identity(l: &FiniteLoop, samples: usize, seed: u64) -> Result<CmlIdentityReport, LoopError> {
    let cfg = CheckConfig { seed, ..CheckConfig::default() };
    let props = check_properties(l, &cfg);
    if !props.commutative.holds {
        return Err(LoopError::NotCommutativeMoufang("not commutative".into()));
    }
    if !props.moufang.holds {
        return Err(LoopError::NotCommutativeMoufang("not Moufang".into()));
    }
    let n = l.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples.max(1) {
        let tuple: [usize; 7] = std::array::from_fn(|_| rng.gen_range(0..n));
        if cml_identity_value(l, tuple) != 0 {
            return Ok(CmlIdentityReport { holds: false, samples, seed, witness: Some(tuple) });
        }
    }
    Ok(CmlIdentityReport { holds: true, samples, seed, witness: None })
}
