use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{fmt_vector, quasiinverse, AlgebraError, StructureAlgebra};
use crate::gf::Field;
use crate::linalg::{add, sub, Subspace, Vector};
use crate::loopcore::FiniteLoop;

/// Carriers with at most this many elements get a Cayley table.
pub const CIRCLE_TABLE_LIMIT: u64 = 4096;

/// Sampled iso checks solve for quasi-inverses of at most this many
/// distinct elements.
pub const QUASIINVERSE_CHECK_LIMIT: usize = 1000;

/// `a o b = a + b - ab`
pub fn circle<F: Field>(a: &StructureAlgebra<F>, x: &[F::Elem], y: &[F::Elem]) -> Vector<F> {
    let f = a.field();
    sub(f, &add(f, x, y), &a.mul(x, y))
}

/// `(carrier, o)` with identity `0`. Small carriers are tabulated; large
/// ones are evaluated on demand.
#[derive(Debug, Clone)]
pub enum CircleLoop<F: Field> {
    Table { table: FiniteLoop, elements: Vec<Vector<F>> },
    Oracle { algebra: StructureAlgebra<F>, carrier: Subspace<F> },
}

impl<F: Field> CircleLoop<F> {
    pub fn order(&self) -> Option<usize> {
        match self {
            CircleLoop::Table { table, .. } => Some(table.order()),
            CircleLoop::Oracle { .. } => None,
        }
    }

    pub fn table(&self) -> Option<&FiniteLoop> {
        match self {
            CircleLoop::Table { table, .. } => Some(table),
            CircleLoop::Oracle { .. } => None,
        }
    }
}

fn carrier_size<F: Field>(f: &F, carrier: &Subspace<F>) -> Option<u64> {
    f.size().and_then(|q| q.checked_pow(carrier.dim() as u32))
}

pub fn circle_loop<F: Field>(a: &StructureAlgebra<F>, carrier: &Subspace<F>) -> Result<CircleLoop<F>, AlgebraError> {
    a.require_unit()?;
    let f = a.field();
    match carrier_size(f, carrier) {
        Some(size) if size <= CIRCLE_TABLE_LIMIT => {}
        _ => return Ok(CircleLoop::Oracle { algebra: a.clone(), carrier: carrier.clone() }),
    }
    let elements = carrier.elements()?;
    for x in &elements {
        if quasiinverse(a, x)?.is_none() {
            return Err(AlgebraError::NotQuasiregular(fmt_vector(a, x)));
        }
    }
    let index: HashMap<&Vector<F>, usize> = elements.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let n = elements.len();
    let mut rows = Vec::with_capacity(n);
    for x in &elements {
        let mut row = Vec::with_capacity(n);
        for y in &elements {
            let z = circle(a, x, y);
            let k = *index
                .get(&z)
                .ok_or_else(|| AlgebraError::NotQuasiregular(format!("carrier not closed: {}", fmt_vector(a, &z))))?;
            row.push(k);
        }
        rows.push(row);
    }
    let names = elements.iter().map(|v| fmt_vector(a, v)).collect();
    let table = FiniteLoop::from_table(names, rows)?;
    Ok(CircleLoop::Table { table, elements })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleIsoReport {
    pub mode: &'static str,
    pub pairs: u64,
    pub seed: Option<u64>,
    /// `(e - a)(e - b) = e - a o b`
    pub eta_ok: bool,
    /// `-(a o b) = (-a)(-b) + (-a) + (-b)`
    pub phi_ok: bool,
    /// `a + a* = a a* = a* a` on every element tested
    pub quasiinverse_ok: bool,
    pub quasiinverses_checked: u64,
    pub witness: Option<String>,
}

/// Checks the two circle-loop isomorphisms on all pairs of a small carrier,
/// or on `samples` random pairs otherwise.
pub fn circle_iso_check<F: Field>(
    a: &StructureAlgebra<F>,
    carrier: &Subspace<F>,
    samples: u64,
    seed: u64,
) -> Result<CircleIsoReport, AlgebraError> {
    let e = a.require_unit()?.clone();
    let f = a.field();
    let exhaustive = matches!(carrier_size(f, carrier), Some(s) if s * s <= samples.max(1) || s <= 64);
    let mut report = CircleIsoReport {
        mode: if exhaustive { "exhaustive" } else { "sampled" },
        pairs: 0,
        seed: (!exhaustive).then_some(seed),
        eta_ok: true,
        phi_ok: true,
        quasiinverse_ok: true,
        quasiinverses_checked: 0,
        witness: None,
    };
    let mut qi_cache: HashMap<Vector<F>, bool> = HashMap::new();
    let mut check_pair = |x: &Vector<F>, y: &Vector<F>, report: &mut CircleIsoReport| -> Result<(), AlgebraError> {
        report.pairs += 1;
        let xy = circle(a, x, y);
        let eta = a.mul(&sub(f, &e, x), &sub(f, &e, y));
        if eta != sub(f, &e, &xy) {
            report.eta_ok = false;
        }
        let (px, py) = (crate::linalg::neg(f, x), crate::linalg::neg(f, y));
        let otimes = add(f, &add(f, &a.mul(&px, &py), &px), &py);
        if otimes != crate::linalg::neg(f, &xy) {
            report.phi_ok = false;
        }
        for v in [x, y] {
            if qi_cache.contains_key(v) || (!exhaustive && qi_cache.len() >= QUASIINVERSE_CHECK_LIMIT) {
                continue;
            }
            let ok = match quasiinverse(a, v)? {
                None => false,
                Some(s) => {
                    let lhs = add(f, v, &s);
                    lhs == a.mul(v, &s) && lhs == a.mul(&s, v)
                }
            };
            qi_cache.insert(v.clone(), ok);
            report.quasiinverses_checked += 1;
            if !ok {
                report.quasiinverse_ok = false;
            }
        }
        if report.witness.is_none() && !(report.eta_ok && report.phi_ok && report.quasiinverse_ok) {
            report.witness = Some(format!("a = {}, b = {}", fmt_vector(a, x), fmt_vector(a, y)));
        }
        Ok(())
    };
    if exhaustive {
        let elements = carrier.elements()?;
        for x in &elements {
            for y in &elements {
                check_pair(x, y, &mut report)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = carrier.dim();
        for _ in 0..samples {
            let cx: Vec<F::Elem> = (0..d).map(|_| f.random(&mut rng)).collect();
            let cy: Vec<F::Elem> = (0..d).map(|_| f.random(&mut rng)).collect();
            let (x, y) = (carrier.combination(&cx)?, carrier.combination(&cy)?);
            check_pair(&x, &y, &mut report)?;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{augmentation_ideal, loop_algebra};
    use crate::constructions::cyclic;
    use crate::gf::PrimeField;
    use crate::loopcore::{check_properties, CheckConfig};

    #[test]
    fn circle_loops_of_small_augmentation_ideals() {
        let f2 = PrimeField::new(2).unwrap();
        let a2 = loop_algebra(&f2, &cyclic(2).unwrap()).unwrap();
        let w2 = augmentation_ideal(&a2, &[0, 1]).unwrap();
        let c2 = circle_loop(&a2, &w2).unwrap();
        assert_eq!(c2.order(), Some(2));

        let f3 = PrimeField::new(3).unwrap();
        let a3 = loop_algebra(&f3, &cyclic(3).unwrap()).unwrap();
        let w3 = augmentation_ideal(&a3, &[0, 1, 2]).unwrap();
        let c9 = circle_loop(&a3, &w3).unwrap();
        let t = c9.table().unwrap();
        assert_eq!(t.order(), 9);
        let r = check_properties(t, &CheckConfig::default());
        assert_eq!(r.exponent, 3);
        assert!(r.moufang.holds && r.commutative.holds);

        let rep = circle_iso_check(&a3, &w3, 100, 7).unwrap();
        assert_eq!(rep.pairs, 81);
        assert!(rep.eta_ok && rep.phi_ok && rep.quasiinverse_ok);
    }

    #[test]
    fn zero_is_the_circle_unit() {
        let f = PrimeField::new(5).unwrap();
        let a = loop_algebra(&f, &cyclic(4).unwrap()).unwrap();
        let b = vec![1, 2, 3, 4];
        assert_eq!(circle(&a, &a.zero(), &b), b);
    }

    #[test]
    fn non_quasiregular_carrier_rejected() {
        let f = PrimeField::new(3).unwrap();
        let a = loop_algebra(&f, &cyclic(2).unwrap()).unwrap();
        let full = Subspace::full(&f, 2);
        assert!(matches!(circle_loop(&a, &full), Err(AlgebraError::NotQuasiregular(_))));
    }
}
