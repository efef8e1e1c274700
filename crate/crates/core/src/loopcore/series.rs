use std::collections::BTreeSet;

use serde::Serialize;

use super::{
    center, congruence_classes, loop_assoc_comm, quotient_with_map, subloop_generated, FiniteLoop, LoopError, Subloop,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    UpperCentral,
    LowerCentral,
}

/// How the subloops generated by weight-`i` commutator-associators line up
/// with the lower central series `Q_1 = Q, Q_{i+1} = [Q_i, Q]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightAlignment {
    /// Orders of the subloops generated by weight 1, 2, ... elements.
    pub weight_orders: Vec<usize>,
    /// Weight-`i` elements generate `Q_i`.
    pub literal: bool,
    /// Weight-`i` elements generate `Q_{i+1}`.
    pub shifted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub terms: Vec<Subloop>,
    pub stabilized: bool,
    pub nilpotency_class: Option<usize>,
    /// Only for the lower central series.
    pub weight_alignment: Option<WeightAlignment>,
}

fn upper(l: &FiniteLoop) -> Result<SeriesReport, LoopError> {
    let n = l.order();
    let mut terms = vec![Subloop::trivial()];
    loop {
        let last = terms.last().expect("nonempty");
        let (q, map) = quotient_with_map(l, last)?;
        let z = center(&q);
        let members: Vec<usize> = (0..n).filter(|&x| z.contains(map[x])).collect();
        let next = Subloop::from_sorted(members);
        if next == *last {
            break;
        }
        terms.push(next);
    }
    let nilpotency_class = terms.iter().position(|t| t.order() == n);
    Ok(SeriesReport {
        kind: SeriesKind::UpperCentral,
        terms,
        stabilized: true,
        nilpotency_class,
        weight_alignment: None,
    })
}

/// `[N, Q]`: normal closure of all commutators and associators with one
/// entry from `N`.
fn commutator_with(l: &FiniteLoop, nsub: &Subloop) -> Subloop {
    let n = l.order();
    let mut gens: BTreeSet<usize> = BTreeSet::new();
    for &m in nsub.members() {
        for x in 0..n {
            gens.insert(loop_assoc_comm(l, m, x, 0).1);
            for y in 0..n {
                gens.insert(loop_assoc_comm(l, m, x, y).0);
                gens.insert(loop_assoc_comm(l, x, m, y).0);
                gens.insert(loop_assoc_comm(l, x, y, m).0);
            }
        }
    }
    let part = congruence_classes(l, gens.into_iter().map(|g| (0, g)));
    Subloop::from_sorted(part.classes[0].clone())
}

/// Subloops generated by commutator-associators of weight 1, 2, ..., `count`.
fn weight_subloops(l: &FiniteLoop, count: usize) -> Vec<Subloop> {
    let n = l.order();
    let mut weight: BTreeSet<usize> = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            weight.insert(loop_assoc_comm(l, x, y, 0).1);
            for z in 0..n {
                weight.insert(loop_assoc_comm(l, x, y, z).0);
            }
        }
    }
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let gens: Vec<usize> = weight.iter().copied().collect();
        out.push(subloop_generated(l, &gens));
        if i + 1 == count {
            break;
        }
        let mut next: BTreeSet<usize> = BTreeSet::new();
        for &a in &weight {
            for x in 0..n {
                next.insert(loop_assoc_comm(l, a, x, 0).1);
                for y in 0..n {
                    next.insert(loop_assoc_comm(l, a, x, y).0);
                }
            }
        }
        weight = next;
    }
    out
}

fn lower(l: &FiniteLoop) -> Result<SeriesReport, LoopError> {
    let mut terms = vec![Subloop::whole(l)];
    loop {
        let next = commutator_with(l, terms.last().expect("nonempty"));
        if next == *terms.last().expect("nonempty") {
            break;
        }
        let trivial = next.is_trivial();
        terms.push(next);
        if trivial {
            break;
        }
    }
    // Q_{c+1} = {e} means class c
    let nilpotency_class = terms.iter().position(|t| t.is_trivial());

    // Q_j for j >= 1, extended past the end by its stable value
    let q = |j: usize| -> &Subloop { &terms[(j - 1).min(terms.len() - 1)] };
    let k = terms.len();
    let weights = weight_subloops(l, k);
    let literal = (1..=k).all(|i| weights[i - 1] == *q(i));
    let shifted = (1..=k).all(|i| weights[i - 1] == *q(i + 1));
    if !literal && !shifted {
        let index = (1..=k).find(|&i| weights[i - 1] != *q(i + 1)).unwrap_or(1);
        return Err(LoopError::SeriesMismatch { index });
    }
    Ok(SeriesReport {
        kind: SeriesKind::LowerCentral,
        terms,
        stabilized: true,
        nilpotency_class,
        weight_alignment: Some(WeightAlignment {
            weight_orders: weights.iter().map(Subloop::order).collect(),
            literal,
            shifted,
        }),
    })
}

pub fn central_series(l: &FiniteLoop, kind: SeriesKind) -> Result<SeriesReport, LoopError> {
    match kind {
        SeriesKind::UpperCentral => upper(l),
        SeriesKind::LowerCentral => lower(l),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin_group, chein_double, cyclic};

    #[test]
    fn abelian_class_one() {
        let c6 = cyclic(6).unwrap();
        for kind in [SeriesKind::UpperCentral, SeriesKind::LowerCentral] {
            assert_eq!(central_series(&c6, kind).unwrap().nilpotency_class, Some(1));
        }
    }

    #[test]
    fn s3_not_nilpotent() {
        let s3 = builtin_group("s3").unwrap();
        let up = central_series(&s3, SeriesKind::UpperCentral).unwrap();
        assert_eq!(up.terms, vec![Subloop::trivial()]);
        assert_eq!(up.nilpotency_class, None);
        let low = central_series(&s3, SeriesKind::LowerCentral).unwrap();
        assert_eq!(low.nilpotency_class, None);
        assert_eq!(low.terms.iter().map(Subloop::order).collect::<Vec<_>>(), vec![6, 3]);
        assert!(low.weight_alignment.unwrap().shifted);
    }

    #[test]
    fn chein12_series() {
        let c = chein_double(&builtin_group("s3").unwrap()).unwrap();
        let up = central_series(&c, SeriesKind::UpperCentral).unwrap();
        let low = central_series(&c, SeriesKind::LowerCentral).unwrap();
        assert_eq!(up.nilpotency_class.is_some(), low.nilpotency_class.is_some());
    }

    #[test]
    fn trivial_loop() {
        let e = cyclic(1).unwrap();
        assert_eq!(central_series(&e, SeriesKind::UpperCentral).unwrap().nilpotency_class, Some(0));
        assert_eq!(central_series(&e, SeriesKind::LowerCentral).unwrap().nilpotency_class, Some(0));
    }
}
