//! Fixture loops and algebras: cyclic groups, `S3`, Chein doubles, the
//! order-81 commutative Moufang loop, Zorn vector matrices and Paige loops.
//!
//! Constructions whose formulas do not come with a proof here (the Chein
//! double and the order-81 loop) are gate-checked before they are returned.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::StructureAlgebra;
use crate::gf::{Field, FieldError, PrimeField};
use crate::loopcore::{check_properties, CheckConfig, FiniteLoop, LoopError};

pub const MAX_CYCLIC: usize = 64;
/// Largest Paige loop built by default, `M(3)`.
pub const DEFAULT_PAIGE_BOUND: usize = 1080;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unknown construction `{0}`")]
    UnknownName(String),
    #[error("input is not a group: ({0}, {1}, {2}) is not associative")]
    InputNotGroup(usize, usize, usize),
    #[error("construction failed its gate check: {0}")]
    GateFailed(String),
    #[error("order {order} exceeds bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn power_name(base: &str, k: usize) -> String {
    match k {
        0 => "e".into(),
        1 => base.into(),
        _ => format!("{base}^{k}"),
    }
}

/// `C_n` on `0..n` with `g^i g^j = g^{i+j}`.
pub fn cyclic(n: usize) -> Result<FiniteLoop, ConstructionError> {
    if n == 0 || n > MAX_CYCLIC {
        return Err(ConstructionError::UnknownName(format!("c{n}")));
    }
    let names = (0..n).map(|k| power_name("g", k)).collect();
    Ok(FiniteLoop::from_fn(names, |i, j| (i + j) % n)?)
}

/// `S3` as `s^a r^b` at index `3a + b`, with `r` a 3-cycle and `s` a
/// transposition.
pub fn symmetric3() -> Result<FiniteLoop, ConstructionError> {
    type Perm = [usize; 3];
    let compose = |p: &Perm, q: &Perm| -> Perm { [p[q[0]], p[q[1]], p[q[2]]] };
    let r: Perm = [1, 2, 0];
    let s: Perm = [0, 2, 1];
    let id: Perm = [0, 1, 2];
    let mut perms = Vec::with_capacity(6);
    for a in 0..2 {
        let sa = if a == 0 { id } else { s };
        let mut rb = id;
        for _ in 0..3 {
            perms.push(compose(&sa, &rb));
            rb = compose(&rb, &r);
        }
    }
    let names = ["e", "r", "r^2", "s", "sr", "sr^2"].iter().map(|s| s.to_string()).collect();
    let idx = |p: Perm| perms.iter().position(|q| *q == p).expect("S3 is closed");
    Ok(FiniteLoop::from_fn(names, |i, j| idx(compose(&perms[i], &perms[j])))?)
}

/// `cyclic:n`, `c<n>` or `s3`.
pub fn builtin_group(name: &str) -> Result<FiniteLoop, ConstructionError> {
    let name = name.trim();
    if name.eq_ignore_ascii_case("s3") {
        return symmetric3();
    }
    let digits = name.strip_prefix("cyclic:").or_else(|| name.strip_prefix('c'));
    match digits.and_then(|d| d.parse::<usize>().ok()) {
        Some(n) if (1..=MAX_CYCLIC).contains(&n) => cyclic(n),
        _ => Err(ConstructionError::UnknownName(name.to_string())),
    }
}

fn exhaustive_config() -> CheckConfig {
    CheckConfig { exhaustive_order: usize::MAX, ..CheckConfig::default() }
}

/// `M(G, 2)`: elements `g` at index `i` and `gu` at `|G| + i`, with
/// `g.h = gh`, `g.(hu) = (hg)u`, `(gu).h = (gh^-1)u`, `(gu).(hu) = h^-1 g`.
pub fn chein_double(g: &FiniteLoop) -> Result<FiniteLoop, ConstructionError> {
    let n = g.order();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !g.is_associative_triple(x, y, z) {
                    return Err(ConstructionError::InputNotGroup(x, y, z));
                }
            }
        }
    }
    let mut names = g.names();
    names.extend(g.names().iter().map(|s| if s == "e" { "u".to_string() } else { format!("{s}u") }));
    let l = FiniteLoop::from_fn(names, |i, j| match (i < n, j < n) {
        (true, true) => g.mul(i, j),
        (true, false) => n + g.mul(j - n, i),
        (false, true) => n + g.mul(i - n, g.inv(j)),
        (false, false) => g.mul(g.inv(j - n), i - n),
    })?;

    let report = check_properties(&l, &exhaustive_config());
    let abelian = (0..n).all(|x| (0..n).all(|y| g.mul(x, y) == g.mul(y, x)));
    if !report.moufang.holds {
        return Err(ConstructionError::GateFailed(format!("not Moufang at {:?}", report.moufang.witness)));
    }
    if report.associative.holds == !abelian {
        return Err(ConstructionError::GateFailed("associativity does not match commutativity of G".into()));
    }
    Ok(l)
}

fn cml81_index(x: [usize; 4]) -> usize {
    x[0] + 3 * x[1] + 9 * x[2] + 27 * x[3]
}

/// Commutative Moufang loop of order 81 and exponent 3 on `(Z_3)^4`:
/// `x.y = (x + y, x4 + y4 + (x1 - y1)(x2 y3 - x3 y2))`.
pub fn cml81() -> Result<FiniteLoop, ConstructionError> {
    let coords = |i: usize| [i % 3, (i / 3) % 3, (i / 9) % 3, i / 27];
    let names = (0..81)
        .map(|i| if i == 0 { "e".to_string() } else { coords(i).iter().map(|c| c.to_string()).collect() })
        .collect();
    let l = FiniteLoop::from_fn(names, |i, j| {
        let (x, y) = (coords(i), coords(j));
        let (x, y) = (x.map(|c| c as i64), y.map(|c| c as i64));
        let twist = (x[0] - y[0]) * (x[1] * y[2] - x[2] * y[1]);
        let z = [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3] + twist];
        cml81_index(z.map(|c| c.rem_euclid(3) as usize))
    })?;

    let r = check_properties(&l, &exhaustive_config());
    let gate = [
        (r.commutative.holds, "commutative"),
        (r.moufang.holds, "Moufang"),
        (!r.associative.holds, "nonassociative"),
        (r.exponent == 3, "exponent 3"),
    ];
    if let Some((_, what)) = gate.iter().find(|(ok, _)| !ok) {
        return Err(ConstructionError::GateFailed(format!("cml81 is not {what}")));
    }
    Ok(l)
}

/// Zorn vector matrix `[[a1, v12], [v21, a2]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZornMatrix<E> {
    pub a1: E,
    pub a2: E,
    pub v12: [E; 3],
    pub v21: [E; 3],
}

fn dot<F: Field>(f: &F, x: &[F::Elem; 3], y: &[F::Elem; 3]) -> F::Elem {
    (0..3).fold(f.zero(), |acc, i| f.add(&acc, &f.mul(&x[i], &y[i])))
}

fn cross<F: Field>(f: &F, g: &[F::Elem; 3], d: &[F::Elem; 3]) -> [F::Elem; 3] {
    let m = |a: &F::Elem, b: &F::Elem, c: &F::Elem, e: &F::Elem| f.sub(&f.mul(a, b), &f.mul(c, e));
    [m(&g[1], &d[2], &g[2], &d[1]), m(&g[2], &d[0], &g[0], &d[2]), m(&g[0], &d[1], &g[1], &d[0])]
}

fn lin<F: Field>(f: &F, s: &F::Elem, x: &[F::Elem; 3]) -> [F::Elem; 3] {
    [f.mul(s, &x[0]), f.mul(s, &x[1]), f.mul(s, &x[2])]
}

fn vadd<F: Field>(f: &F, x: &[F::Elem; 3], y: &[F::Elem; 3]) -> [F::Elem; 3] {
    [f.add(&x[0], &y[0]), f.add(&x[1], &y[1]), f.add(&x[2], &y[2])]
}

fn vneg<F: Field>(f: &F, x: &[F::Elem; 3]) -> [F::Elem; 3] {
    [f.neg(&x[0]), f.neg(&x[1]), f.neg(&x[2])]
}

impl<E: Clone> ZornMatrix<E> {
    pub fn identity<F: Field<Elem = E>>(f: &F) -> Self {
        ZornMatrix {
            a1: f.one(),
            a2: f.one(),
            v12: [f.zero(), f.zero(), f.zero()],
            v21: [f.zero(), f.zero(), f.zero()],
        }
    }

    /// Coordinates in the order `a1, a2, v12, v21`.
    pub fn coords(&self) -> [E; 8] {
        let [x1, x2, x3] = self.v12.clone();
        let [y1, y2, y3] = self.v21.clone();
        [self.a1.clone(), self.a2.clone(), x1, x2, x3, y1, y2, y3]
    }

    pub fn from_coords(c: &[E]) -> Self {
        ZornMatrix {
            a1: c[0].clone(),
            a2: c[1].clone(),
            v12: [c[2].clone(), c[3].clone(), c[4].clone()],
            v21: [c[5].clone(), c[6].clone(), c[7].clone()],
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, b: &Self) -> Self {
        let a = self;
        ZornMatrix {
            a1: f.add(&f.mul(&a.a1, &b.a1), &dot(f, &a.v12, &b.v21)),
            v12: vadd(f, &vadd(f, &lin(f, &a.a1, &b.v12), &lin(f, &b.a2, &a.v12)), &vneg(f, &cross(f, &a.v21, &b.v21))),
            v21: vadd(f, &vadd(f, &lin(f, &b.a1, &a.v21), &lin(f, &a.a2, &b.v21)), &cross(f, &a.v12, &b.v12)),
            a2: f.add(&f.mul(&a.a2, &b.a2), &dot(f, &a.v21, &b.v12)),
        }
    }

    /// `a1 a2 - (v12, v21)`
    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> E {
        f.sub(&f.mul(&self.a1, &self.a2), &dot(f, &self.v12, &self.v21))
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        ZornMatrix { a1: f.neg(&self.a1), a2: f.neg(&self.a2), v12: vneg(f, &self.v12), v21: vneg(f, &self.v21) }
    }

    /// `det^{-1} [[a2, -v12], [-v21, a1]]`, or `None` when `det = 0`.
    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        let d = f.inv(&self.det(f)).ok()?;
        Some(ZornMatrix {
            a1: f.mul(&d, &self.a2),
            a2: f.mul(&d, &self.a1),
            v12: lin(f, &f.neg(&d), &self.v12),
            v21: lin(f, &f.neg(&d), &self.v21),
        })
    }
}

/// The split octonions as the 8-dimensional Zorn algebra, basis
/// `e11, e22, e12^1..3, e21^1..3`, unit `e11 + e22`.
pub fn zorn_algebra<F: Field>(f: &F) -> StructureAlgebra<F> {
    let names = ["e11", "e22", "e12_1", "e12_2", "e12_3", "e21_1", "e21_2", "e21_3"].map(String::from).to_vec();
    let basis = |i: usize| -> ZornMatrix<F::Elem> {
        let c: Vec<F::Elem> = (0..8).map(|k| if k == i { f.one() } else { f.zero() }).collect();
        ZornMatrix::from_coords(&c)
    };
    let mut unit = vec![f.zero(); 8];
    unit[0] = f.one();
    unit[1] = f.one();
    let product = |i: usize, j: usize| -> crate::linalg::SparseVector<F> {
        let c = basis(i).mul(f, &basis(j)).coords();
        crate::linalg::to_sparse(f, &c)
    };
    StructureAlgebra::from_fn(f.clone(), names, product, Some(unit)).expect("e11 + e22 is the unit of the Zorn algebra")
}

/// `(1/d) q^3 (q^4 - 1)` with `d = gcd(2, q - 1)`.
pub fn paige_order(q: u64) -> u64 {
    let d = if q == 2 { 1 } else { 2 };
    q.pow(3) * (q.pow(4) - 1) / d
}

fn zorn_name(c: &[u32; 8]) -> String {
    format!("({},{}|{},{},{}|{},{},{})", c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7])
}

/// Paige loop `M(q)` with the default order bound.
pub fn paige_loop(q: u64) -> Result<FiniteLoop, ConstructionError> {
    paige_loop_bounded(q, DEFAULT_PAIGE_BOUND)
}

/// Unit-determinant Zorn matrices over `GF(q)` modulo `+-1`. Each class is
/// represented by the lexicographically smaller coordinate tuple; the
/// identity sits at index 0 and the rest follow in lexicographic order.
pub fn paige_loop_bounded(q: u64, bound: usize) -> Result<FiniteLoop, ConstructionError> {
    let f = PrimeField::new(q)?;
    let order = paige_order(q) as usize;
    if order > bound {
        return Err(ConstructionError::OrderBoundExceeded { order, bound });
    }
    let p = q as u32;
    let canon = |m: &ZornMatrix<u32>| -> [u32; 8] {
        let (a, b) = (m.coords(), m.neg(&f).coords());
        a.min(b)
    };
    let mut reps: Vec<[u32; 8]> = Vec::with_capacity(order);
    let mut c = [0u32; 8];
    'enumerate: loop {
        let m = ZornMatrix::from_coords(&c);
        if f.is_one(&m.det(&f)) && canon(&m) == c {
            reps.push(c);
        }
        for k in (0..8).rev() {
            c[k] += 1;
            if c[k] < p {
                continue 'enumerate;
            }
            c[k] = 0;
        }
        break;
    }
    if reps.len() != order {
        return Err(ConstructionError::GateFailed(format!("M({q}) has {} elements, expected {order}", reps.len())));
    }
    let id = canon(&ZornMatrix::identity(&f));
    reps.retain(|r| *r != id);
    reps.insert(0, id);
    let index: HashMap<[u32; 8], usize> = reps.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let mats: Vec<ZornMatrix<u32>> = reps.iter().map(|r| ZornMatrix::from_coords(r)).collect();
    let names = reps.iter().enumerate().map(|(i, r)| if i == 0 { "e".to_string() } else { zorn_name(r) }).collect();
    Ok(FiniteLoop::from_fn(names, |i, j| index[&canon(&mats[i].mul(&f, &mats[j]))])?)
}

/// Any fixture by name: `cyclic:n`, `c<n>`, `s3`, `chein:<group>`,
/// `chein12`, `cml81`, `paige:q`, `paige2`, or `A*B` for a direct product.
pub fn builtin_loop(name: &str) -> Result<FiniteLoop, ConstructionError> {
    let name = name.trim();
    if let Some((a, b)) = name.split_once('*') {
        return Ok(builtin_loop(a)?.direct_product(&builtin_loop(b)?));
    }
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "cml81" => return cml81(),
        "chein12" => return chein_double(&symmetric3()?),
        "paige2" => return paige_loop(2),
        "paige3" => return paige_loop(3),
        _ => {}
    }
    if let Some(g) = lower.strip_prefix("chein:") {
        return chein_double(&builtin_group(g)?);
    }
    if let Some(q) = lower.strip_prefix("paige:") {
        let q: u64 = q.parse().map_err(|_| ConstructionError::UnknownName(name.to_string()))?;
        return paige_loop(q);
    }
    builtin_group(&lower)
}
