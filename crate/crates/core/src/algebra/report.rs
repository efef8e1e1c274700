use serde::Serialize;

use super::ideals::alternative_quotient;
use super::{alternative_check, alternator_ideal, loop_algebra, nilpotency_index, AlgebraError, AlternativeReport};
use crate::gf::Field;
use crate::loopcore::FiniteLoop;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub field: String,
    pub loop_order: usize,
    /// Dimension of `F[Q]`; zero when the alternator ideal is everything.
    pub dim: usize,
    pub ideal_dim: usize,
    pub unit_in_ideal: bool,
    /// Generator set of the alternator ideal.
    pub generators: &'static str,
    pub omega_dim: Option<usize>,
    pub unit_in_omega: Option<bool>,
    pub nilpotency_index: Option<usize>,
    pub alternative: Option<AlternativeReport>,
}

/// Builds `F[Q]` and reports its dimension, `omega[Q]`, nilpotency and a
/// seeded alternativity check.
pub fn algebra_report<F: Field>(
    field: &F,
    l: &FiniteLoop,
    samples: u64,
    seed: u64,
) -> Result<AlgebraReport, AlgebraError> {
    let fq = loop_algebra(field, l)?;
    let mut report = AlgebraReport {
        field: field.spec().to_string(),
        loop_order: l.order(),
        dim: 0,
        ideal_dim: 0,
        unit_in_ideal: false,
        generators: "(a,b,c)+(b,a,c), (a,b,c)+(a,c,b), (a,a,c), (c,a,a) on basis triples",
        omega_dim: None,
        unit_in_omega: None,
        nilpotency_index: None,
        alternative: None,
    };
    let q = match alternative_quotient(&fq) {
        Ok(q) => q,
        Err(AlgebraError::AlternatorIdealFull) => {
            report.ideal_dim = alternator_ideal(&fq)?.dim();
            report.unit_in_ideal = true;
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.dim = q.dim();
    report.ideal_dim = q.ideal().dim();
    let all: Vec<usize> = (0..l.order()).collect();
    let omega = q.augmentation_ideal(&all)?;
    let e = q.algebra().require_unit()?;
    report.omega_dim = Some(omega.dim());
    report.unit_in_omega = Some(omega.contains(e)?);
    report.nilpotency_index = nilpotency_index(q.algebra(), &omega)?;
    report.alternative = Some(alternative_check(q.algebra(), Some((samples, seed))));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::cyclic;
    use crate::gf::PrimeField;

    #[test]
    fn cyclic_report() {
        let f = PrimeField::new(3).unwrap();
        let r = algebra_report(&f, &cyclic(3).unwrap(), 50, 9).unwrap();
        assert_eq!(r.dim, 3);
        assert_eq!(r.ideal_dim, 0);
        assert_eq!(r.omega_dim, Some(2));
        assert_eq!(r.unit_in_omega, Some(false));
        assert_eq!(r.nilpotency_index, Some(3));
        let alt = r.alternative.clone().unwrap();
        assert!(alt.ok);
        assert_eq!(alt.seed, Some(9));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["alternative"]["mode"], "sampled");
    }
}
