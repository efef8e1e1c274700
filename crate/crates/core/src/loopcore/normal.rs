use serde::Serialize;

use super::{FiniteLoop, LoopError};

/// A subloop, as the ascending list of its members (always containing 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subloop {
    members: Vec<usize>,
}

impl Subloop {
    pub fn trivial() -> Self {
        Subloop { members: vec![0] }
    }

    pub fn whole(l: &FiniteLoop) -> Self {
        Subloop { members: (0..l.order()).collect() }
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(members.first(), Some(&0));
        Subloop { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subloop) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subloop) -> Subloop {
        Subloop { members: self.members.iter().copied().filter(|&x| other.contains(x)).collect() }
    }

    /// Maps members of a restricted loop back to parent indices.
    pub fn lift(&self, parent_members: &[usize]) -> Subloop {
        Subloop { members: self.members.iter().map(|&i| parent_members[i]).collect() }
    }

    /// Inverse of [`Self::lift`]: positions of `self`'s members inside `within`.
    pub fn relative_to(&self, within: &Subloop) -> Option<Subloop> {
        let members: Option<Vec<usize>> = self.members.iter().map(|x| within.members.binary_search(x).ok()).collect();
        members.map(|members| Subloop { members })
    }
}

/// Closure of `gens` together with the identity under multiplication and
/// both divisions.
pub fn subloop_generated(l: &FiniteLoop, gens: &[usize]) -> Subloop {
    let n = l.order();
    let mut inside = vec![false; n];
    let mut list = vec![0usize];
    inside[0] = true;
    let mut pending: Vec<usize> = Vec::new();
    for &g in gens {
        if !inside[g] {
            inside[g] = true;
            pending.push(g);
        }
    }
    while let Some(a) = pending.pop() {
        list.push(a);
        let snapshot = list.len();
        for k in 0..snapshot {
            let b = list[k];
            for c in [l.mul(a, b), l.mul(b, a), l.ldiv(a, b), l.ldiv(b, a), l.rdiv(a, b), l.rdiv(b, a)] {
                if !inside[c] {
                    inside[c] = true;
                    pending.push(c);
                }
            }
        }
    }
    list.sort_unstable();
    Subloop::from_sorted(list)
}

/// A partition of the loop into classes; classes are numbered by their
/// smallest member, so the class of the identity is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Smallest congruence (equivalence compatible with every left and right
/// translation) containing `pairs`. For finite loops such a relation is also
/// compatible with both divisions; its identity class is a normal subloop.
pub fn congruence_classes(l: &FiniteLoop, pairs: impl IntoIterator<Item = (usize, usize)>) -> Partition {
    let n = l.order();
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(usize, usize)> = pairs.into_iter().collect();
    let mut classes_left = n;
    while let Some((a, b)) = queue.pop() {
        if classes_left == 1 {
            break;
        }
        if uf.union(a, b) {
            classes_left -= 1;
            for g in 0..n {
                queue.push((l.mul(g, a), l.mul(g, b)));
                queue.push((l.mul(a, g), l.mul(b, g)));
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut root_class = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let r = uf.find(x);
        if root_class[r] == usize::MAX {
            root_class[r] = classes.len();
            classes.push(Vec::new());
        }
        class_of[x] = root_class[r];
        classes[root_class[r]].push(x);
    }
    Partition { class_of, classes }
}

/// Smallest normal subloop containing `gens`.
pub fn normal_closure(l: &FiniteLoop, gens: &[usize]) -> Subloop {
    let part = congruence_classes(l, gens.iter().map(|&g| (0, g)));
    Subloop::from_sorted(part.classes[0].clone())
}

/// Checks that `n` is a normal subloop, reporting a failing equation.
pub fn is_normal(l: &FiniteLoop, n: &Subloop) -> Result<(), LoopError> {
    if n.members.first() != Some(&0) {
        return Err(LoopError::NotNormal("identity missing".into()));
    }
    let closed = subloop_generated(l, &n.members);
    if closed != *n {
        let extra = closed.members.iter().find(|&&x| !n.contains(x)).copied().unwrap_or(0);
        return Err(LoopError::NotNormal(format!("not a subloop: generates {}", l.name(extra))));
    }
    if normal_closure(l, &n.members) == *n {
        return Ok(());
    }
    // locate an explicit failing inner-mapping equation
    let ord = l.order();
    for x in 0..ord {
        for &m in &n.members {
            let t = l.rdiv(l.mul(x, m), x);
            if !n.contains(t) {
                return Err(LoopError::NotNormal(format!("xN != Nx: ({x}*{m})/{x} = {t} is outside N")));
            }
        }
    }
    for x in 0..ord {
        for y in 0..ord {
            for &m in &n.members {
                let left = l.ldiv(l.mul(y, x), l.mul(y, l.mul(x, m)));
                if !n.contains(left) {
                    return Err(LoopError::NotNormal(format!("x(yN) != (xy)N at x={y}, y={x}, n={m}")));
                }
                let right = l.rdiv(l.mul(l.mul(m, x), y), l.mul(x, y));
                if !n.contains(right) {
                    return Err(LoopError::NotNormal(format!("(Nx)y != N(xy) at x={x}, y={y}, n={m}")));
                }
            }
        }
    }
    Err(LoopError::NotNormal("normal closure is larger".into()))
}

/// Quotient by a normal subloop, together with the coset index of every
/// element. Cosets are ordered by their smallest member.
pub fn quotient_with_map(l: &FiniteLoop, n: &Subloop) -> Result<(FiniteLoop, Vec<usize>), LoopError> {
    is_normal(l, n)?;
    let part = congruence_classes(l, n.members.iter().map(|&m| (0, m)));
    let names = part.classes.iter().map(|c| l.name(c[0])).collect();
    let q = FiniteLoop::from_fn(names, |a, b| part.class_of[l.mul(part.classes[a][0], part.classes[b][0])])?;
    Ok((q, part.class_of))
}

pub fn quotient_loop(l: &FiniteLoop, n: &Subloop) -> Result<FiniteLoop, LoopError> {
    quotient_with_map(l, n).map(|(q, _)| q)
}

/// Elements `z` with `zx = xz`, `zx*y = z*xy`, `xz*y = x*zy`, `xy*z = x*yz`
/// for all `x, y`.
pub fn center(l: &FiniteLoop) -> Subloop {
    let n = l.order();
    let members = (0..n)
        .filter(|&z| {
            (0..n).all(|x| l.mul(z, x) == l.mul(x, z))
                && (0..n).all(|x| {
                    (0..n).all(|y| {
                        l.mul(l.mul(z, x), y) == l.mul(z, l.mul(x, y))
                            && l.mul(l.mul(x, z), y) == l.mul(x, l.mul(z, y))
                            && l.mul(l.mul(x, y), z) == l.mul(x, l.mul(y, z))
                    })
                })
        })
        .collect();
    Subloop::from_sorted(members)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub simple: bool,
    /// A proper nontrivial normal subloop when not simple.
    pub witness: Option<Subloop>,
}

pub fn is_simple(l: &FiniteLoop) -> SimplicityReport {
    if l.order() == 1 {
        return SimplicityReport { simple: false, witness: None };
    }
    for x in 1..l.order() {
        let ncl = normal_closure(l, &[x]);
        if ncl.order() != l.order() {
            return SimplicityReport { simple: false, witness: Some(ncl) };
        }
    }
    SimplicityReport { simple: true, witness: None }
}

/// Every normal subloop, as the join-closure of the principal normal
/// closures. Sorted by order, then lexicographically.
pub fn normal_subloops(l: &FiniteLoop) -> Vec<Subloop> {
    use std::collections::BTreeSet;
    let mut all: BTreeSet<Subloop> = BTreeSet::new();
    all.insert(Subloop::trivial());
    for x in 1..l.order() {
        all.insert(normal_closure(l, &[x]));
    }
    let principal: Vec<Subloop> = all.iter().cloned().collect();
    loop {
        let current: Vec<Subloop> = all.iter().cloned().collect();
        let mut grew = false;
        for a in &current {
            for b in &principal {
                if b.is_subset_of(a) {
                    continue;
                }
                let mut gens = a.members.clone();
                gens.extend_from_slice(&b.members);
                // the product of two normal subloops is normal, so the
                // generated subloop is their join
                let j = subloop_generated(l, &gens);
                if all.insert(j) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Subloop> = all.into_iter().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin_group, cyclic};

    /// Fixpoint under the inner mappings T_x, L_{x,y}, R_{x,y}; independent
    /// of the congruence route.
    fn brute_normal_closure(l: &FiniteLoop, gens: &[usize]) -> Subloop {
        let n = l.order();
        let mut cur = subloop_generated(l, gens);
        loop {
            let mut next: Vec<usize> = cur.members().to_vec();
            for &m in cur.members() {
                for x in 0..n {
                    next.push(l.rdiv(l.mul(x, m), x));
                    for y in 0..n {
                        next.push(l.ldiv(l.mul(y, x), l.mul(y, l.mul(x, m))));
                        next.push(l.rdiv(l.mul(l.mul(m, x), y), l.mul(x, y)));
                    }
                }
            }
            let grown = subloop_generated(l, &next);
            if grown == cur {
                return cur;
            }
            cur = grown;
        }
    }

    #[test]
    fn s3_normal_closures() {
        let s3 = builtin_group("s3").unwrap();
        // index 1 is a 3-cycle, index 3 a transposition (see constructions)
        let a3 = normal_closure(&s3, &[1]);
        assert_eq!(a3.order(), 3);
        assert_eq!(a3, brute_normal_closure(&s3, &[1]));
        let all = normal_closure(&s3, &[3]);
        assert_eq!(all.order(), 6);
        assert_eq!(all, brute_normal_closure(&s3, &[3]));
        assert_eq!(subloop_generated(&s3, &[1]).order(), 3);
    }

    #[test]
    fn s3_quotient_and_center() {
        let s3 = builtin_group("s3").unwrap();
        let a3 = normal_closure(&s3, &[1]);
        let q = quotient_loop(&s3, &a3).unwrap();
        assert_eq!(q.order(), 2);
        assert!(center(&s3).is_trivial());
        let t = subloop_generated(&s3, &[3]);
        assert!(matches!(quotient_loop(&s3, &t), Err(LoopError::NotNormal(_))));
        let rep = is_simple(&s3);
        assert!(!rep.simple);
        assert_eq!(rep.witness.unwrap().order(), 3);
    }

    #[test]
    fn cyclic_facts() {
        let c6 = cyclic(6).unwrap();
        assert_eq!(center(&c6).order(), 6);
        assert!(is_simple(&cyclic(5).unwrap()).simple);
        assert!(!is_simple(&c6).simple);
        assert_eq!(normal_subloops(&c6).len(), 4);
    }

    #[test]
    fn closure_routes_agree_on_fixtures() {
        for l in
            [builtin_group("s3").unwrap(), crate::constructions::chein_double(&builtin_group("s3").unwrap()).unwrap()]
        {
            for x in 0..l.order() {
                assert_eq!(normal_closure(&l, &[x]), brute_normal_closure(&l, &[x]), "x={x}");
            }
        }
    }
}
