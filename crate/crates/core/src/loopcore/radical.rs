use std::collections::BTreeMap;

use serde::Serialize;

use super::{is_simple, normal_closure, quotient_loop, FiniteLoop, LoopError, Subloop};

pub const DEFAULT_RADICAL_BOUND: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionFactor {
    pub order: usize,
    pub associative: bool,
}

fn is_associative(l: &FiniteLoop) -> bool {
    let n = l.order();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| l.is_associative_triple(x, y, z))))
}

/// Largest proper nontrivial normal closure of a single element, if any.
fn largest_proper_principal(l: &FiniteLoop) -> Option<Subloop> {
    let n = l.order();
    let mut best: Option<Subloop> = None;
    for x in 1..n {
        let m = normal_closure(l, &[x]);
        if m.order() < n && best.as_ref().is_none_or(|b| m.order() > b.order()) {
            best = Some(m);
        }
    }
    best
}

fn factors_into(l: &FiniteLoop, out: &mut Vec<CompositionFactor>) -> Result<(), LoopError> {
    if l.order() == 1 {
        return Ok(());
    }
    match largest_proper_principal(l) {
        None => out.push(CompositionFactor { order: l.order(), associative: is_associative(l) }),
        Some(m) => {
            factors_into(&l.restrict(m.members())?, out)?;
            factors_into(&quotient_loop(l, &m)?, out)?;
        }
    }
    Ok(())
}

/// Composition factors, listed bottom to top along the series built by
/// repeatedly splitting off the largest proper principal normal subloop.
pub fn composition_factors(l: &FiniteLoop) -> Result<Vec<CompositionFactor>, LoopError> {
    let mut out = Vec::new();
    factors_into(l, &mut out)?;
    Ok(out)
}

/// All composition factors are groups.
pub fn is_group_type(l: &FiniteLoop) -> Result<bool, LoopError> {
    Ok(composition_factors(l)?.iter().all(|f| f.associative))
}

fn radical_unverified(l: &FiniteLoop) -> Result<Subloop, LoopError> {
    let n = l.order();
    let mut radical = Subloop::trivial();
    let mut seen: BTreeMap<Subloop, bool> = BTreeMap::new();
    for x in 1..n {
        if radical.contains(x) {
            continue;
        }
        let m = normal_closure(l, &[x]);
        let ok = match seen.get(&m) {
            Some(&ok) => ok,
            None => {
                let ok = is_group_type(&l.restrict(m.members())?)?;
                seen.insert(m.clone(), ok);
                ok
            }
        };
        if ok {
            let mut gens = radical.members().to_vec();
            gens.extend_from_slice(m.members());
            radical = normal_closure(l, &gens);
        }
    }
    Ok(radical)
}

/// Largest normal subloop whose composition factors are all groups, joined
/// from the group-type principal normal closures. The result is checked to
/// leave a quotient with trivial radical.
pub fn group_type_radical(l: &FiniteLoop, bound: usize) -> Result<Subloop, LoopError> {
    if l.order() > bound {
        return Err(LoopError::OrderBoundExceeded { order: l.order(), bound });
    }
    let radical = radical_unverified(l)?;
    let q = quotient_loop(l, &radical)?;
    let again = radical_unverified(&q)?;
    if !again.is_trivial() {
        return Err(LoopError::RadicalCheckFailed(format!(
            "quotient by radical of order {} still has radical of order {}",
            radical.order(),
            again.order()
        )));
    }
    Ok(radical)
}

/// Searches normal subloops (recursively, inside non-group-type ones) for a
/// simple nonassociative subloop; returns the smallest one found.
pub fn find_simple_nonassociative_subloop(l: &FiniteLoop) -> Result<Option<Subloop>, LoopError> {
    let n = l.order();
    let mut candidates: Vec<Subloop> = (1..n).map(|x| normal_closure(l, &[x])).collect();
    candidates.push(Subloop::whole(l));
    candidates.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    candidates.dedup();
    for c in &candidates {
        if c.is_trivial() {
            continue;
        }
        let sub = l.restrict(c.members())?;
        if is_associative(&sub) {
            continue;
        }
        if is_simple(&sub).simple {
            return Ok(Some(c.clone()));
        }
        if c.order() < n {
            if let Some(inner) = find_simple_nonassociative_subloop(&sub)? {
                return Ok(Some(inner.lift(c.members())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin_group, chein_double, cyclic};

    #[test]
    fn groups_are_group_type() {
        let s3 = builtin_group("s3").unwrap();
        assert_eq!(group_type_radical(&s3, 100).unwrap().order(), 6);
        let f = composition_factors(&s3).unwrap();
        let mut orders: Vec<usize> = f.iter().map(|x| x.order).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 3]);
    }

    #[test]
    fn chein12_factors() {
        let c = chein_double(&builtin_group("s3").unwrap()).unwrap();
        let mut orders: Vec<usize> = composition_factors(&c).unwrap().iter().map(|f| f.order).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 2, 3]);
        assert_eq!(group_type_radical(&c, 100).unwrap().order(), 12);
        assert_eq!(find_simple_nonassociative_subloop(&c).unwrap(), None);
    }

    #[test]
    fn bound_enforced() {
        let c = cyclic(10).unwrap();
        assert_eq!(group_type_radical(&c, 5), Err(LoopError::OrderBoundExceeded { order: 10, bound: 5 }));
    }
}
