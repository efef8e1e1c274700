//! Loop-side and algebra-side radicals side by side: membership in the
//! class of loops with group-type composition factors, the embeddability
//! verdict for `Q -> U(F[Q])`, the circle-loop embedding and the
//! semisimple-quotient report.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{
    alternative_loop_algebra, circle, ideal_generated, invert, nilpotency_index, quotient_algebra, AlgebraError,
    QuotientAlgebra,
};
use crate::gf::Field;
use crate::linalg::{is_zero, sub, to_sparse, Subspace, Vector};
use crate::loopcore::{
    check_properties, find_simple_nonassociative_subloop, group_type_radical, is_simple, quotient_loop,
    subloop_generated, CheckConfig, FiniteLoop, LoopError, Subloop, DEFAULT_RADICAL_BOUND,
};

/// Loops up to this order get their loop algebra built for algebra-side checks.
pub const ALGEBRA_SIDE_BOUND: usize = 256;

/// `F[Q]/R` is split into simple ideals only up to this dimension.
pub const SPLITTING_DIM_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RadicalError {
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("loop is not Moufang: witness {0:?}")]
    NotMoufang(Vec<usize>),
    #[error("order {order} exceeds bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error("cross-check mismatch: {0}")]
    CrossCheckMismatch(String),
    #[error("no embedding: outcome is {0}")]
    NotEmbedded(&'static str),
}

fn require_moufang(l: &FiniteLoop) -> Result<(), RadicalError> {
    let r = check_properties(l, &CheckConfig::default());
    if !r.moufang.holds {
        return Err(RadicalError::NotMoufang(r.moufang.witness.unwrap_or_default()));
    }
    Ok(())
}

fn algebra_bound(l: &FiniteLoop) -> Result<(), RadicalError> {
    if l.order() > ALGEBRA_SIDE_BOUND {
        return Err(RadicalError::OrderBoundExceeded { order: l.order(), bound: ALGEBRA_SIDE_BOUND });
    }
    Ok(())
}

/// `F[Q]`, or `None` when the alternator ideal swallows the unit.
fn try_fq<F: Field>(field: &F, l: &FiniteLoop) -> Result<Option<QuotientAlgebra<F>>, RadicalError> {
    match alternative_loop_algebra(field, l) {
        Ok(q) => Ok(Some(q)),
        Err(AlgebraError::AlternatorIdealFull) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `e` is outside `omega[Q]` inside `F[Q]`; false when `F[Q] = 0`.
fn unit_outside_omega<F: Field>(fq: Option<&QuotientAlgebra<F>>, order: usize) -> Result<bool, RadicalError> {
    let Some(q) = fq else { return Ok(false) };
    let all: Vec<usize> = (0..order).collect();
    let omega = q.augmentation_ideal(&all)?;
    Ok(!omega.contains(q.algebra().require_unit()?).map_err(AlgebraError::from)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSReport {
    pub value: bool,
    /// The group-type radical is the whole loop.
    pub loop_side: bool,
    /// `e` is not in `omega[Q]` inside `F[Q]`.
    pub algebra_side: bool,
    pub radical_order: usize,
    pub fq_dim: usize,
}

/// Decides whether every composition factor of `l` is a group, once on the
/// loop and once through `F[Q]`; the two answers must agree.
#[allow(non_snake_case)]
pub fn in_class_S<F: Field>(l: &FiniteLoop, field: &F) -> Result<ClassSReport, RadicalError> {
    algebra_bound(l)?;
    require_moufang(l)?;
    let radical = group_type_radical(l, DEFAULT_RADICAL_BOUND)?;
    let loop_side = radical.order() == l.order();
    let fq = try_fq(field, l)?;
    let algebra_side = unit_outside_omega(fq.as_ref(), l.order())?;
    if loop_side != algebra_side {
        return Err(RadicalError::CrossCheckMismatch(format!(
            "over {}: group-type radical has order {} of {} but e {} omega[Q] (dim F[Q] = {})",
            field.spec(),
            radical.order(),
            l.order(),
            if algebra_side { "is outside" } else { "lies in" },
            fq.as_ref().map_or(0, |q| q.dim()),
        )));
    }
    Ok(ClassSReport {
        value: loop_side,
        loop_side,
        algebra_side,
        radical_order: radical.order(),
        fq_dim: fq.as_ref().map_or(0, |q| q.dim()),
    })
}

/// Largest normal subloop with group-type composition factors. When the
/// radical `H` is small enough, `e` outside `omega[H]` in `F[H]` is also
/// confirmed.
#[allow(non_snake_case)]
pub fn loop_radical_S<F: Field>(l: &FiniteLoop, field: &F) -> Result<Subloop, RadicalError> {
    require_moufang(l)?;
    let radical = group_type_radical(l, DEFAULT_RADICAL_BOUND)?;
    if radical.order() <= ALGEBRA_SIDE_BOUND {
        let h = l.restrict(radical.members())?;
        let fh = try_fq(field, &h)?;
        if !unit_outside_omega(fh.as_ref(), h.order())? {
            return Err(RadicalError::CrossCheckMismatch(format!(
                "group-type radical of order {} has e in omega[H] over {}",
                radical.order(),
                field.spec()
            )));
        }
    }
    Ok(radical)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// `q -> pi(q)` is a verified injective homomorphism into `U(F[Q])`.
    Embeds,
    /// A simple nonassociative subloop blocks any embedding.
    Obstructed,
    /// All composition factors are groups, yet the canonical map fails
    /// one of the verification checks over this field.
    Collapses,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Embeds => "embeds",
            Outcome::Obstructed => "obstructed",
            Outcome::Collapses => "collapses",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddabilityChecks {
    /// `e` is not in `omega[Q]`; `None` when `F[Q]` was not built.
    pub r1: Option<bool>,
    /// No simple nonassociative subloop.
    pub r2: bool,
    /// The group-type radical is the whole loop.
    pub r3: bool,
    pub injective: Option<bool>,
    pub invertible: Option<bool>,
    pub multiplicative: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub order: usize,
    pub generators: Vec<String>,
    pub members: Vec<usize>,
    pub simple: bool,
    pub nonassociative: bool,
    pub moufang: bool,
    /// A nonassociative triple of the subloop, by parent index.
    pub triple: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddabilityVerdict {
    #[serde(rename = "loop")]
    pub loop_id: String,
    pub field: String,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    /// Distinct loop elements with the same image in `F[Q]`.
    pub collision: Option<(usize, usize)>,
    pub checks: EmbeddabilityChecks,
    pub fq_dim: Option<usize>,
    /// Image of each loop element in `F[Q]` coordinates, for `Embeds`.
    pub embedding: Option<Vec<Vec<Value>>>,
    pub seed: u64,
}

fn minimal_generators(l: &FiniteLoop, s: &Subloop) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut span = Subloop::trivial();
    for &x in s.members() {
        if !span.contains(x) {
            gens.push(x);
            span = subloop_generated(l, &gens);
            if span.order() == s.order() {
                break;
            }
        }
    }
    gens
}

fn verify_witness(l: &FiniteLoop, s: &Subloop) -> Result<Witness, RadicalError> {
    let sub = l.restrict(s.members())?;
    let props = check_properties(&sub, &CheckConfig::default());
    let triple: Vec<usize> =
        props.associative.witness.clone().unwrap_or_default().iter().map(|&i| s.members()[i]).collect();
    let w = Witness {
        order: s.order(),
        generators: minimal_generators(l, s).iter().map(|&g| l.name(g)).collect(),
        members: s.members().to_vec(),
        simple: is_simple(&sub).simple,
        nonassociative: !props.associative.holds,
        moufang: props.moufang.holds,
        triple,
    };
    if !(w.simple && w.nonassociative && w.moufang) {
        return Err(RadicalError::CrossCheckMismatch(format!(
            "witness of order {} failed verification (simple {}, nonassociative {}, Moufang {})",
            w.order, w.simple, w.nonassociative, w.moufang
        )));
    }
    Ok(w)
}

/// `pi(q)` for every loop element, in `F[Q]` coordinates.
fn images<F: Field>(q: &QuotientAlgebra<F>, n: usize) -> Vec<Vector<F>> {
    (0..n).map(|x| q.project_basis(x)).collect()
}

fn first_collision<F: Field>(images: &[Vector<F>]) -> Option<(usize, usize)> {
    let mut seen: HashMap<&Vector<F>, usize> = HashMap::new();
    for (i, v) in images.iter().enumerate() {
        if let Some(&j) = seen.get(v) {
            return Some((j, i));
        }
        seen.insert(v, i);
    }
    None
}

/// Decides whether `l` embeds into the invertible elements of `F[Q]`.
///
/// The decision is made on the loop side. If every composition factor is
/// a group, the canonical map is built and verified element by element;
/// otherwise a simple nonassociative subloop is returned as the obstruction,
/// along with a collision in `F[Q]` when one exists.
pub fn embeddability<F: Field>(
    l: &FiniteLoop,
    field: &F,
    loop_id: &str,
    seed: u64,
) -> Result<EmbeddabilityVerdict, RadicalError> {
    algebra_bound(l)?;
    require_moufang(l)?;
    let n = l.order();
    let radical = group_type_radical(l, DEFAULT_RADICAL_BOUND)?;
    let r3 = radical.order() == n;
    let simple_sub = find_simple_nonassociative_subloop(l)?;
    let r2 = simple_sub.is_none();
    if r2 != r3 {
        return Err(RadicalError::CrossCheckMismatch(format!(
            "group-type radical is {} but a simple nonassociative subloop was {}",
            if r3 { "everything" } else { "proper" },
            if r2 { "not found" } else { "found" }
        )));
    }
    let fq = try_fq(field, l)?;
    let r1 = unit_outside_omega(fq.as_ref(), n)?;
    let mut verdict = EmbeddabilityVerdict {
        loop_id: loop_id.to_string(),
        field: field.spec().to_string(),
        outcome: Outcome::Obstructed,
        witness: None,
        collision: None,
        checks: EmbeddabilityChecks { r1: Some(r1), r2, r3, injective: None, invertible: None, multiplicative: None },
        fq_dim: Some(fq.as_ref().map_or(0, |q| q.dim())),
        embedding: None,
        seed,
    };
    let Some(q) = fq else {
        // F[Q] = 0: everything collapses onto the unit
        verdict.checks.injective = Some(n == 1);
        verdict.collision = (n > 1).then_some((0, 1));
        if r3 {
            verdict.outcome = if n == 1 { Outcome::Embeds } else { Outcome::Collapses };
        } else {
            verdict.witness = Some(verify_witness(l, simple_sub.as_ref().expect("r2 is false"))?);
        }
        return Ok(verdict);
    };
    let imgs = images(&q, n);
    verdict.collision = first_collision::<F>(&imgs);
    verdict.checks.injective = Some(verdict.collision.is_none());
    if !r3 {
        verdict.witness = Some(verify_witness(l, simple_sub.as_ref().expect("r2 is false"))?);
        return Ok(verdict);
    }

    let a = q.algebra();
    let e = a.require_unit()?;
    let mut invertible = true;
    for x in 0..n {
        let inv_ok = match invert(a, &imgs[x])? {
            Some(y) => y == imgs[l.inv(x)] && a.mul(&imgs[x], &y) == *e,
            None => false,
        };
        invertible &= inv_ok;
    }
    let multiplicative = (0..n).all(|x| (0..n).all(|y| a.mul(&imgs[x], &imgs[y]) == imgs[l.mul(x, y)]));
    verdict.checks.invertible = Some(invertible);
    verdict.checks.multiplicative = Some(multiplicative);
    if verdict.collision.is_none() && invertible && multiplicative {
        verdict.outcome = Outcome::Embeds;
        let f = a.field();
        verdict.embedding = Some(imgs.iter().map(|v| v.iter().map(|c| f.to_json(c)).collect()).collect());
    } else {
        verdict.outcome = Outcome::Collapses;
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleEmbeddingReport {
    pub field: String,
    pub pairs: u64,
    pub ok: bool,
    /// The image of the identity is the circle unit `0`.
    pub unit_ok: bool,
    pub witness: Option<(usize, usize)>,
}

/// Checks `(e - pi(x)) o (e - pi(y)) = e - pi(xy)` on every pair, for a
/// loop whose canonical map into `F[Q]` embeds.
pub fn circle_embedding<F: Field>(l: &FiniteLoop, field: &F) -> Result<CircleEmbeddingReport, RadicalError> {
    let verdict = embeddability(l, field, "", crate::DEFAULT_SEED)?;
    if verdict.outcome != Outcome::Embeds {
        return Err(RadicalError::NotEmbedded(verdict.outcome.as_str()));
    }
    let q = alternative_loop_algebra(field, l)?;
    let a = q.algebra();
    let f = a.field();
    let e = a.require_unit()?;
    let n = l.order();
    let eta: Vec<Vector<F>> = images(&q, n).iter().map(|v| sub(f, e, v)).collect();
    let mut report = CircleEmbeddingReport {
        field: field.spec().to_string(),
        pairs: 0,
        ok: true,
        unit_ok: is_zero(f, &eta[0]),
        witness: None,
    };
    for x in 0..n {
        for y in 0..n {
            report.pairs += 1;
            if circle(a, &eta[x], &eta[y]) != eta[l.mul(x, y)] {
                report.ok = false;
                report.witness.get_or_insert((x, y));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemisimpleChecks {
    /// `omega` of the quotient is the whole quotient; `None` when `Q/S` is
    /// trivial and the quotient is just `F`.
    pub omega_whole: Option<bool>,
    pub principal_ideals_tested: usize,
    /// No nonzero tested principal ideal is nilpotent.
    pub no_nilpotent_principal: bool,
    /// Dimensions of the minimal principal ideals, when split.
    pub summand_dims: Option<Vec<usize>>,
    /// The minimal principal ideals form a direct sum equal to the quotient.
    pub direct_sum: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WedderburnReport {
    pub field: String,
    pub radical_subloop: Vec<String>,
    pub radical_order: usize,
    pub fq_dim: usize,
    pub radical_ideal_dim: usize,
    pub quotient_dim: usize,
    /// `dim F[Q/S]`, which must equal `quotient_dim`.
    pub quotient_loop_algebra_dim: usize,
    pub checks: SemisimpleChecks,
    pub seed: u64,
}

fn principal_ideal<F: Field>(
    a: &crate::algebra::StructureAlgebra<F>,
    x: &[F::Elem],
) -> Result<Subspace<F>, AlgebraError> {
    ideal_generated(a, [to_sparse(a.field(), x)])
}

/// Computes `S(Q)`, `R = omega[S(Q)]` inside `F[Q]` and `F[Q]/R`, then tests
/// the quotient for semisimplicity.
pub fn wedderburn_report<F: Field>(
    l: &FiniteLoop,
    field: &F,
    samples: usize,
    seed: u64,
) -> Result<WedderburnReport, RadicalError> {
    algebra_bound(l)?;
    let s = loop_radical_S(l, field)?;
    let fq = alternative_loop_algebra(field, l)?;
    let r = fq.augmentation_ideal(s.members())?;
    let quotient = quotient_algebra(fq.algebra(), &r)?;
    let qdim = quotient.dim();
    let q_loop_dim =
        if s.is_trivial() { fq.dim() } else { alternative_loop_algebra(field, &quotient_loop(l, &s)?)?.dim() };
    if fq.dim() - r.dim() != q_loop_dim {
        return Err(RadicalError::CrossCheckMismatch(format!(
            "dim F[Q] - dim R = {} but dim F[Q/S] = {q_loop_dim}",
            fq.dim() - r.dim()
        )));
    }

    let a = quotient.algebra();
    let f = a.field();
    let omega_whole = if s.order() == l.order() {
        None
    } else {
        let seeds: Vec<_> = (0..l.order())
            .map(|g| quotient.project(&fq.project_basis(g)))
            .collect::<Result<Vec<_>, _>>()?
            .iter()
            .map(|pg| to_sparse(f, &sub(f, a.require_unit().expect("unital"), pg)))
            .collect();
        Some(ideal_generated(a, seeds)?.is_full())
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tested: Vec<Vector<F>> = (0..qdim).map(|i| a.basis(i)).collect();
    tested.extend((0..samples).map(|_| (0..qdim).map(|_| f.random(&mut rng)).collect::<Vector<F>>()));
    tested.retain(|x| !is_zero(f, x));
    let mut ideals = Vec::with_capacity(tested.len());
    let mut no_nilpotent = true;
    for x in &tested {
        let p = principal_ideal(a, x)?;
        no_nilpotent &= nilpotency_index(a, &p)?.is_none();
        ideals.push(p);
    }

    let (summand_dims, direct_sum) = if qdim <= SPLITTING_DIM_LIMIT {
        let mut minimal: Vec<Subspace<F>> = Vec::new();
        for p in &ideals {
            if minimal.iter().any(|m| m.rows() == p.rows()) {
                continue;
            }
            let mut is_min = true;
            for row in p.rows() {
                if principal_ideal(a, row)?.dim() != p.dim() {
                    is_min = false;
                    break;
                }
            }
            if is_min {
                minimal.push(p.clone());
            }
        }
        minimal.sort_by_key(|m| m.dim());
        let mut join = Subspace::zero(f, qdim);
        for m in &minimal {
            join = join.join(m).map_err(AlgebraError::from)?;
        }
        let total: usize = minimal.iter().map(|m| m.dim()).sum();
        (Some(minimal.iter().map(|m| m.dim()).collect()), Some(join.is_full() && total == qdim))
    } else {
        (None, None)
    };

    Ok(WedderburnReport {
        field: field.spec().to_string(),
        radical_subloop: s.members().iter().map(|&x| l.name(x)).collect(),
        radical_order: s.order(),
        fq_dim: fq.dim(),
        radical_ideal_dim: r.dim(),
        quotient_dim: qdim,
        quotient_loop_algebra_dim: q_loop_dim,
        checks: SemisimpleChecks {
            omega_whole,
            principal_ideals_tested: tested.len(),
            no_nilpotent_principal: no_nilpotent,
            summand_dims,
            direct_sum,
        },
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin_loop, cyclic};
    use crate::gf::PrimeField;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn groups_are_in_the_class() {
        let s3 = builtin_loop("s3").unwrap();
        let r = in_class_S(&s3, &gf(7)).unwrap();
        assert!(r.value && r.loop_side && r.algebra_side);
        assert_eq!(r.fq_dim, 6);
        assert_eq!(loop_radical_S(&s3, &gf(7)).unwrap().order(), 6);
    }

    #[test]
    fn cyclic_embeds_and_circle_maps() {
        let c3 = cyclic(3).unwrap();
        let v = embeddability(&c3, &gf(3), "c3", 5).unwrap();
        assert_eq!(v.outcome, Outcome::Embeds);
        assert_eq!(v.embedding.as_ref().unwrap().len(), 3);
        assert_eq!(v.checks.multiplicative, Some(true));
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["outcome"], "embeds");
        assert_eq!(json["loop"], "c3");
        let c = circle_embedding(&c3, &gf(3)).unwrap();
        assert!(c.ok && c.unit_ok);
        assert_eq!(c.pairs, 9);
    }

    #[test]
    fn group_report_has_trivial_quotient() {
        let s3 = builtin_loop("s3").unwrap();
        let w = wedderburn_report(&s3, &gf(7), 4, 1).unwrap();
        assert_eq!(w.radical_order, 6);
        assert_eq!(w.radical_ideal_dim, 5);
        assert_eq!(w.quotient_dim, 1);
        assert_eq!(w.quotient_loop_algebra_dim, 1);
        assert_eq!(w.checks.omega_whole, None);
        assert_eq!(w.checks.summand_dims, Some(vec![1]));
        assert_eq!(w.checks.direct_sum, Some(true));
        assert!(w.checks.no_nilpotent_principal);
    }

    #[test]
    fn non_moufang_rejected() {
        // a loop of order 5 that is not Moufang
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let names = (0..5).map(|i| i.to_string()).collect();
        let l = FiniteLoop::from_table(names, t).unwrap();
        assert!(matches!(in_class_S(&l, &gf(3)), Err(RadicalError::NotMoufang(_))));
    }

    #[test]
    fn bound_enforced() {
        let big = builtin_loop("c64*c5").unwrap();
        assert!(matches!(
            embeddability(&big, &gf(11), "x", 1),
            Err(RadicalError::OrderBoundExceeded { order: 320, .. })
        ));
    }
}
