use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{fmt_vector, invert, AlgebraError, StructureAlgebra};
use crate::gf::Field;
use crate::linalg::{add, is_zero, sub, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BracketFormulaReport {
    pub mode: &'static str,
    pub triples: u64,
    pub seed: Option<u64>,
    pub nil_index: usize,
    pub associator_ok: bool,
    pub commutator_ok: bool,
    pub witness: Option<String>,
}

/// `e + x + ... + x^{m-1}`, the inverse of `e - x` when `x^m = 0`.
fn geometric<F: Field>(a: &StructureAlgebra<F>, e: &Vector<F>, x: &[F::Elem], m: usize) -> Vector<F> {
    let f = a.field();
    let mut sum = e.clone();
    let mut p = e.clone();
    for _ in 1..m {
        p = a.mul(&p, x);
        sum = add(f, &sum, &p);
    }
    sum
}

fn power<F: Field>(a: &StructureAlgebra<F>, e: &Vector<F>, x: &[F::Elem], m: usize) -> Vector<F> {
    (0..m).fold(e.clone(), |p, _| a.mul(&p, x))
}

fn must_invert<F: Field>(a: &StructureAlgebra<F>, x: &[F::Elem]) -> Result<Vector<F>, AlgebraError> {
    invert(a, x)?.ok_or_else(|| AlgebraError::NotQuasiregular(fmt_vector(a, x)))
}

/// Compares both sides of the associator and commutator formulas for
/// `e - B` with `B` nil of index `m`:
///
/// `[e-u, e-v, e-w] = e - ((w' v') u')(u,v,w)` and
/// `[e-u, e-v] = e + (u' v')(u,v)`, where `x' = e + x + ... + x^{m-1}`,
/// `[a,b,c] = (a.bc)^{-1}(ab.c)` and `[a,b] = a^{-1}b^{-1}.ab`.
///
/// Loop-side values use inverses found by linear solving, so they do not
/// depend on the geometric-series formula. Elements are drawn from all of
/// `B^3` when it has at most `samples` triples, otherwise at random.
pub fn bracket_formula_check<F: Field>(
    a: &StructureAlgebra<F>,
    b: &Subspace<F>,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<BracketFormulaReport, AlgebraError> {
    let e = a.require_unit()?.clone();
    let f = a.field();
    let size = f.size().and_then(|q| q.checked_pow(b.dim() as u32));
    let exhaustive = matches!(size, Some(s) if s.checked_pow(3).is_some_and(|t| t <= samples));
    let mut report = BracketFormulaReport {
        mode: if exhaustive { "exhaustive" } else { "sampled" },
        triples: 0,
        seed: (!exhaustive).then_some(seed),
        nil_index: m,
        associator_ok: true,
        commutator_ok: true,
        witness: None,
    };

    let check =
        |u: &Vector<F>, v: &Vector<F>, w: &Vector<F>, report: &mut BracketFormulaReport| -> Result<(), AlgebraError> {
            for x in [u, v, w] {
                if !is_zero(f, &power(a, &e, x, m)) {
                    return Err(AlgebraError::NotNil { index: m, witness: fmt_vector(a, x) });
                }
            }
            report.triples += 1;
            let (ea, eb, ec) = (sub(f, &e, u), sub(f, &e, v), sub(f, &e, w));
            let (ub, vb, wb) = (geometric(a, &e, u, m), geometric(a, &e, v, m), geometric(a, &e, w, m));

            let a_bc = a.mul(&ea, &a.mul(&eb, &ec));
            let ab_c = a.mul(&a.mul(&ea, &eb), &ec);
            let assoc_loop = a.mul(&must_invert(a, &a_bc)?, &ab_c);
            let assoc_formula = sub(f, &e, &a.mul(&a.mul(&a.mul(&wb, &vb), &ub), &a.associator(u, v, w)));

            let ab = a.mul(&ea, &eb);
            let comm_loop = a.mul(&a.mul(&must_invert(a, &ea)?, &must_invert(a, &eb)?), &ab);
            let comm_formula = add(f, &e, &a.mul(&a.mul(&ub, &vb), &a.commutator(u, v)));

            let (ok_a, ok_c) = (assoc_loop == assoc_formula, comm_loop == comm_formula);
            report.associator_ok &= ok_a;
            report.commutator_ok &= ok_c;
            if report.witness.is_none() && !(ok_a && ok_c) {
                report.witness =
                    Some(format!("u = {}, v = {}, w = {}", fmt_vector(a, u), fmt_vector(a, v), fmt_vector(a, w)));
            }
            Ok(())
        };

    if exhaustive {
        let elems = b.elements()?;
        for u in &elems {
            for v in &elems {
                for w in &elems {
                    check(u, v, w, &mut report)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = b.dim();
        let draw = |rng: &mut ChaCha8Rng| -> Result<Vector<F>, AlgebraError> {
            let c: Vec<F::Elem> = (0..d).map(|_| f.random(rng)).collect();
            Ok(b.combination(&c)?)
        };
        for _ in 0..samples {
            let (u, v, w) = (draw(&mut rng)?, draw(&mut rng)?, draw(&mut rng)?);
            check(&u, &v, &w, &mut report)?;
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

    #[test]
    fn tiny_exhaustive_case() {
        let f = PrimeField::new(2).unwrap();
        let a = loop_algebra(&f, &cyclic(2).unwrap()).unwrap();
        let w = augmentation_ideal(&a, &[0, 1]).unwrap();
        let r = bracket_formula_check(&a, &w, 2, 1000, 1).unwrap();
        assert_eq!(r.mode, "exhaustive");
        assert_eq!(r.triples, 8);
        assert!(r.associator_ok && r.commutator_ok);
    }

    #[test]
    fn zero_triple_gives_unit() {
        let f = PrimeField::new(3).unwrap();
        let a = loop_algebra(&f, &cyclic(3).unwrap()).unwrap();
        let z = Subspace::zero(&f, 3);
        let r = bracket_formula_check(&a, &z, 1, 10, 1).unwrap();
        assert_eq!(r.triples, 1);
        assert!(r.associator_ok && r.commutator_ok);
    }

    #[test]
    fn wrong_nil_index_rejected() {
        let f = PrimeField::new(3).unwrap();
        let a = loop_algebra(&f, &cyclic(3).unwrap()).unwrap();
        let w = augmentation_ideal(&a, &[0, 1, 2]).unwrap();
        assert!(matches!(bracket_formula_check(&a, &w, 2, 5, 1), Err(AlgebraError::NotNil { .. })));
        assert!(bracket_formula_check(&a, &w, 3, 5, 1).unwrap().associator_ok);
    }
}
