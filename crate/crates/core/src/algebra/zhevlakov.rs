use super::ideals::ideal_generated;
use super::{fmt_vector, nilpotency_index, quasiinverse, AlgebraError, QuotientAlgebra, StructureAlgebra};
use crate::gf::Field;
use crate::linalg::{to_sparse, Subspace};

/// Brute force is attempted only when the algebra has at most this many elements.
pub const BRUTE_FORCE_LIMIT: u64 = 4096;

fn nilpotent<F: Field>(a: &StructureAlgebra<F>, s: &Subspace<F>) -> Result<bool, AlgebraError> {
    Ok(nilpotency_index(a, s)?.is_some())
}

/// Zhevlakov radical of a small algebra, or of `F[Q]` when `e` is outside
/// the nilpotent ideal `omega[Q]`.
///
/// With `loop_quotient = Some(q)` the algebra must be `q.algebra()` and the
/// parent of `q` a loop algebra. If `omega[Q]` is proper and nilpotent, it is
/// the radical (the quotient by it is `F`). Otherwise, for algebras with at
/// most [`BRUTE_FORCE_LIMIT`] elements, the radical is grown one principal
/// ideal at a time, keeping each enlargement that stays nilpotent; every
/// element of the result is then checked to be quasiregular.
pub fn radical_zhevlakov<F: Field>(
    a: &StructureAlgebra<F>,
    loop_quotient: Option<&QuotientAlgebra<F>>,
) -> Result<Subspace<F>, AlgebraError> {
    let e = a.require_unit()?.clone();
    if let Some(q) = loop_quotient {
        let all: Vec<usize> = (0..q.parent().dim()).collect();
        let omega = q.augmentation_ideal(&all)?;
        if !omega.contains(&e)? && nilpotent(a, &omega)? {
            for &g in &all[1..] {
                // e - g must be quasiregular, i.e. g invertible
                let gen = crate::linalg::sub(a.field(), &e, &q.project_basis(g));
                if quasiinverse(a, &gen)?.is_none() {
                    return Err(AlgebraError::NotQuasiregular(fmt_vector(a, &gen)));
                }
            }
            return Ok(omega);
        }
    }

    let f = a.field();
    let size = f.size().and_then(|s| s.checked_pow(a.dim() as u32));
    match size {
        Some(s) if s <= BRUTE_FORCE_LIMIT => {}
        _ => {
            return Err(AlgebraError::Unsupported(format!(
                "Zhevlakov radical of a {}-dimensional algebra over {}",
                a.dim(),
                f.spec()
            )))
        }
    }
    let mut j = Subspace::zero(f, a.dim());
    for x in Subspace::full(f, a.dim()).elements()? {
        if j.contains(&x)? {
            continue;
        }
        let mut seeds: Vec<_> = j.rows().iter().map(|r| to_sparse(f, r)).collect();
        seeds.push(to_sparse(f, &x));
        let candidate = ideal_generated(a, seeds)?;
        if nilpotent(a, &candidate)? {
            j = candidate;
        }
    }
    for x in j.elements()? {
        if quasiinverse(a, &x)?.is_none() {
            return Err(AlgebraError::NotQuasiregular(fmt_vector(a, &x)));
        }
    }
    Ok(j)
}
