//! Finite-dimensional algebras over a [`Field`] given by structure constants:
//! loop algebras `FQ`, quotients such as `F[Q] = FQ/I(Q)`, unitizations,
//! and the Zorn vector-matrix algebra.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Field, FieldError};
use crate::linalg::{
    combine_sparse, solve, sub, to_sparse, unit_vector, zero_vector, LinalgError, LinearMap, SparseVector, Subspace,
    Vector,
};
use crate::loopcore::{FiniteLoop, LoopError};

mod brackets;
mod circle;
mod ideals;
mod report;
mod zhevlakov;

pub use brackets::{bracket_formula_check, BracketFormulaReport};
pub use circle::{
    circle, circle_iso_check, circle_loop, CircleIsoReport, CircleLoop, CIRCLE_TABLE_LIMIT, QUASIINVERSE_CHECK_LIMIT,
};
pub use ideals::{
    alternative_check, alternator_ideal, augmentation_ideal, ideal_generated, nilpotency_index, quotient_algebra,
    AlternativeReport, QuotientAlgebra,
};
pub use report::{algebra_report, AlgebraReport};
pub use zhevlakov::radical_zhevlakov;

/// Loop algebras above this dimension are refused.
pub const LOOP_ALGEBRA_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error("dimension {dim} exceeds bound {bound}")]
    DimensionBoundExceeded { dim: usize, bound: usize },
    #[error("structure table has wrong shape")]
    BadStructure,
    #[error("given unit is not a two-sided identity")]
    BadUnit,
    #[error("algebra has no unit")]
    NoUnit,
    #[error("ideal contains the unit")]
    IdealNotProper,
    #[error("subspace is not stable under multiplication by basis element {0}")]
    IdealNotStable(usize),
    #[error("alternator ideal contains the unit; the quotient would be zero")]
    AlternatorIdealFull,
    #[error("left and right inverses differ")]
    SidedInverseMismatch,
    #[error("element without quasiinverse: {0}")]
    NotQuasiregular(String),
    #[error("element is not nil of index {index}: {witness}")]
    NotNil { index: usize, witness: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Algebra on the standard basis `b_0..b_{n-1}` with `b_i b_j` stored
/// sparsely.
#[derive(Debug, Clone)]
pub struct StructureAlgebra<F: Field> {
    field: F,
    dim: usize,
    names: Vec<String>,
    table: Vec<SparseVector<F>>,
    unit: Option<Vector<F>>,
    /// For quotients whose parent multiplies faster than the quotient's own
    /// structure constants: products are lifted, multiplied and reduced.
    lifted: Option<Arc<Lift<F>>>,
}

#[derive(Debug)]
struct Lift<F: Field> {
    parent: StructureAlgebra<F>,
    ideal: Subspace<F>,
}

impl<F: Field> Lift<F> {
    fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
        let lift = |x: &[F::Elem]| {
            let mut v = self.parent.zero();
            for (&c, y) in self.ideal.free_cols().iter().zip(x) {
                v[c] = y.clone();
            }
            v
        };
        let r = self.ideal.reduce(&self.parent.mul(&lift(a), &lift(b))).expect("parent dimension");
        self.ideal.free_cols().iter().map(|&c| r[c].clone()).collect()
    }
}

impl<F: Field> StructureAlgebra<F> {
    /// `table[i * dim + j]` is `b_i b_j`. A supplied unit is verified on the basis.
    pub fn new(
        field: F,
        names: Vec<String>,
        table: Vec<SparseVector<F>>,
        unit: Option<Vector<F>>,
    ) -> Result<Self, AlgebraError> {
        let dim = names.len();
        if table.len() != dim * dim || table.iter().flatten().any(|(k, _)| *k >= dim) {
            return Err(AlgebraError::BadStructure);
        }
        let table = table.into_iter().map(|v| combine_sparse(&field, v)).collect();
        let alg = StructureAlgebra { field, dim, names, table, unit: None, lifted: None };
        match unit {
            None => Ok(alg),
            Some(u) => alg.with_unit(u),
        }
    }

    pub fn from_fn(
        field: F,
        names: Vec<String>,
        product: impl Fn(usize, usize) -> SparseVector<F>,
        unit: Option<Vector<F>>,
    ) -> Result<Self, AlgebraError> {
        let dim = names.len();
        let table = (0..dim * dim).map(|k| product(k / dim.max(1), k % dim.max(1))).collect();
        Self::new(field, names, table, unit)
    }

    fn with_unit(mut self, u: Vector<F>) -> Result<Self, AlgebraError> {
        if u.len() != self.dim {
            return Err(AlgebraError::BadUnit);
        }
        for i in 0..self.dim {
            let b = unit_vector(&self.field, self.dim, i);
            if self.mul(&u, &b) != b || self.mul(&b, &u) != b {
                return Err(AlgebraError::BadUnit);
            }
        }
        self.unit = Some(u);
        Ok(self)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> Option<&Vector<F>> {
        self.unit.as_ref()
    }

    pub fn require_unit(&self) -> Result<&Vector<F>, AlgebraError> {
        self.unit.as_ref().ok_or(AlgebraError::NoUnit)
    }

    pub fn basis(&self, i: usize) -> Vector<F> {
        unit_vector(&self.field, self.dim, i)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVector<F> {
        &self.table[i * self.dim + j]
    }

    pub fn zero(&self) -> Vector<F> {
        zero_vector(&self.field, self.dim)
    }

    fn average_terms(&self) -> usize {
        self.table.iter().map(Vec::len).sum::<usize>() / self.table.len().max(1)
    }

    /// Switches multiplication to lift, multiply in `parent`, reduce by
    /// `ideal` when that is estimated to be cheaper.
    pub(crate) fn attach_parent(&mut self, parent: &StructureAlgebra<F>, ideal: &Subspace<F>) {
        let d = self.dim;
        let direct = d * d * self.average_terms().max(1);
        let via_parent = d * d * parent.average_terms().max(1) + ideal.dim() * parent.dim();
        if via_parent < direct {
            self.lifted = Some(Arc::new(Lift { parent: parent.clone(), ideal: ideal.clone() }));
        }
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
        if let Some(l) = &self.lifted {
            return l.mul(a, b);
        }
        let f = &self.field;
        let mut out = self.zero();
        let bs = to_sparse(f, b);
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in &bs {
                let xy = f.mul(x, y);
                for (k, c) in self.basis_product(i, *j) {
                    out[*k] = f.add(&out[*k], &f.mul(&xy, c));
                }
            }
        }
        out
    }

    pub fn mul_sparse(&self, a: &[(usize, F::Elem)], b: &[(usize, F::Elem)]) -> SparseVector<F> {
        let f = &self.field;
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (i, x) in a {
            for (j, y) in b {
                let xy = f.mul(x, y);
                for (k, c) in self.basis_product(*i, *j) {
                    terms.push((*k, f.mul(&xy, c)));
                }
            }
        }
        combine_sparse(f, terms)
    }

    /// `(a,b,c) = ab*c - a*bc`
    pub fn associator(&self, a: &[F::Elem], b: &[F::Elem], c: &[F::Elem]) -> Vector<F> {
        sub(&self.field, &self.mul(&self.mul(a, b), c), &self.mul(a, &self.mul(b, c)))
    }

    pub fn associator_sparse(
        &self,
        a: &[(usize, F::Elem)],
        b: &[(usize, F::Elem)],
        c: &[(usize, F::Elem)],
    ) -> SparseVector<F> {
        let f = &self.field;
        let left = self.mul_sparse(&self.mul_sparse(a, b), c);
        let right = self.mul_sparse(a, &self.mul_sparse(b, c));
        let mut terms = left;
        terms.extend(right.into_iter().map(|(k, x)| (k, f.neg(&x))));
        combine_sparse(f, terms)
    }

    /// `ab - ba`
    pub fn commutator(&self, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
        sub(&self.field, &self.mul(a, b), &self.mul(b, a))
    }

    pub fn left_action(&self, k: usize) -> LinearMap<'_, F> {
        let bk = vec![(k, self.field.one())];
        Box::new(move |v: &[F::Elem]| {
            let sv = to_sparse(&self.field, v);
            crate::linalg::to_dense(&self.field, self.dim, &self.mul_sparse(&bk, &sv))
        })
    }

    pub fn right_action(&self, k: usize) -> LinearMap<'_, F> {
        let bk = vec![(k, self.field.one())];
        Box::new(move |v: &[F::Elem]| {
            let sv = to_sparse(&self.field, v);
            crate::linalg::to_dense(&self.field, self.dim, &self.mul_sparse(&sv, &bk))
        })
    }

    /// Checks that `s` absorbs multiplication by every basis element on both sides.
    pub fn is_ideal(&self, s: &Subspace<F>) -> Result<bool, AlgebraError> {
        Ok(self.unstable_basis_index(s)?.is_none())
    }

    pub(crate) fn unstable_basis_index(&self, s: &Subspace<F>) -> Result<Option<usize>, AlgebraError> {
        for row in s.rows() {
            let sr = to_sparse(&self.field, row);
            for k in 0..self.dim {
                let bk = [(k, self.field.one())];
                for prod in [self.mul_sparse(&bk, &sr), self.mul_sparse(&sr, &bk)] {
                    if s.reduce_sparse(&prod)?.is_some() {
                        return Ok(Some(k));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Algebra induced on an ideal (or any product-closed subspace) in the
    /// coordinates of its echelon basis.
    pub fn restrict_to(&self, s: &Subspace<F>) -> Result<StructureAlgebra<F>, AlgebraError> {
        let rows = s.rows();
        let d = rows.len();
        let mut table = Vec::with_capacity(d * d);
        for u in rows {
            for v in rows {
                let p = self.mul(u, v);
                let coords = s.coordinates(&p)?.ok_or(AlgebraError::IdealNotStable(0))?;
                table.push(to_sparse(&self.field, &coords));
            }
        }
        let names = (0..d).map(|i| format!("r{i}")).collect();
        StructureAlgebra::new(self.field.clone(), names, table, None)
    }
}

/// `FQ`: basis indexed by loop elements, `g_i g_j = g_{ij}`, unit `g_0`.
pub fn loop_algebra<F: Field>(field: &F, l: &FiniteLoop) -> Result<StructureAlgebra<F>, AlgebraError> {
    let n = l.order();
    if n > LOOP_ALGEBRA_LIMIT {
        return Err(AlgebraError::DimensionBoundExceeded { dim: n, bound: LOOP_ALGEBRA_LIMIT });
    }
    let one = field.one();
    let unit = unit_vector(field, n, 0);
    let table = (0..n * n).map(|k| vec![(l.mul(k / n, k % n), one.clone())]).collect();
    StructureAlgebra::new(field.clone(), l.names(), table, Some(unit))
}

/// `F[Q] = FQ / I(Q)`; fails with `AlternatorIdealFull` if the quotient is zero.
pub fn alternative_loop_algebra<F: Field>(field: &F, l: &FiniteLoop) -> Result<QuotientAlgebra<F>, AlgebraError> {
    ideals::alternative_quotient(&loop_algebra(field, l)?)
}

/// `A# = A + Fe` with the unit adjoined as the last coordinate.
pub fn unitize<F: Field>(a: &StructureAlgebra<F>) -> StructureAlgebra<F> {
    let f = a.field();
    let n = a.dim();
    let d = n + 1;
    let one = f.one();
    let mut table = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            table.push(match (i == n, j == n) {
                (false, false) => a.basis_product(i, j).clone(),
                (true, _) => vec![(j, one.clone())],
                (false, true) => vec![(i, one.clone())],
            });
        }
    }
    let mut names = a.names().to_vec();
    names.push("1".into());
    StructureAlgebra::new(f.clone(), names, table, Some(unit_vector(f, d, n)))
        .expect("adjoined unit is an identity by construction")
}

/// Two-sided inverse of `u`, or `None` when `u` is not invertible.
pub fn invert<F: Field>(a: &StructureAlgebra<F>, u: &[F::Elem]) -> Result<Option<Vector<F>>, AlgebraError> {
    let e = a.require_unit()?;
    let n = a.dim();
    // columns of left and right multiplication by u
    let left: Vec<Vector<F>> = (0..n).map(|j| a.mul(u, &a.basis(j))).collect();
    let right: Vec<Vector<F>> = (0..n).map(|j| a.mul(&a.basis(j), u)).collect();
    let x = solve(a.field(), &left, e)?;
    let y = solve(a.field(), &right, e)?;
    match (x, y) {
        (Some(x), Some(y)) => {
            // the solution may not be unique when u is a zero divisor on one side
            if x == y || (a.mul(&y, u) == *e && a.mul(u, &y) == *e) {
                Ok(Some(y))
            } else if a.mul(&x, u) == *e {
                Ok(Some(x))
            } else {
                Err(AlgebraError::SidedInverseMismatch)
            }
        }
        _ => Ok(None),
    }
}

/// `a* = e - (e - a)^{-1}`, defined iff `e - a` is invertible.
pub fn quasiinverse<F: Field>(a: &StructureAlgebra<F>, x: &[F::Elem]) -> Result<Option<Vector<F>>, AlgebraError> {
    let e = a.require_unit()?.clone();
    let f = a.field();
    Ok(invert(a, &sub(f, &e, x))?.map(|inv| sub(f, &e, &inv)))
}

pub(crate) fn fmt_vector<F: Field>(a: &StructureAlgebra<F>, v: &[F::Elem]) -> String {
    let parts: Vec<String> = to_sparse(a.field(), v)
        .into_iter()
        .map(|(k, x)| format!("{}*{}", a.field().to_json(&x), a.names()[k]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin_group, cyclic};
    use crate::gf::{PrimeField, Rationals};
    use crate::linalg::{add, is_zero};

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn loop_algebra_examples() {
        let f = gf(3);
        let a = loop_algebra(&f, &cyclic(3).unwrap()).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.unit(), Some(&vec![1, 0, 0]));

        let f2 = gf(2);
        let b = loop_algebra(&f2, &cyclic(2).unwrap()).unwrap();
        let x = vec![1, 1];
        assert_eq!(b.mul(&x, &x), vec![0, 0]);
    }

    #[test]
    fn ops_in_group_algebra() {
        let f = gf(5);
        let a = loop_algebra(&f, &builtin_group("s3").unwrap()).unwrap();
        let e = a.unit().unwrap().clone();
        let x = vec![1, 2, 0, 3, 4, 1];
        let y = vec![0, 1, 1, 0, 2, 3];
        assert_eq!(a.associator(&e, &x, &y), a.zero());
        assert_eq!(a.associator(&x, &y, &x), a.zero());
        assert_ne!(a.commutator(&x, &y), a.zero());
    }

    #[test]
    fn inverses() {
        let f = gf(3);
        let a = loop_algebra(&f, &cyclic(3).unwrap()).unwrap();
        let e = a.unit().unwrap().clone();
        assert_eq!(invert(&a, &e).unwrap(), Some(e.clone()));
        // e - g is nilpotent in char 3, so not invertible
        assert_eq!(invert(&a, &[1, 2, 0]).unwrap(), None);
        let g = a.basis(1);
        assert_eq!(invert(&a, &g).unwrap(), Some(a.basis(2)));
    }

    #[test]
    fn unitization_and_nilpotent_inverse() {
        let f = gf(3);
        let c3 = loop_algebra(&f, &cyclic(3).unwrap()).unwrap();
        let omega = augmentation_ideal(&c3, &[0, 1, 2]).unwrap();
        let r = c3.restrict_to(&omega).unwrap();
        let u = unitize(&r);
        assert_eq!(u.dim(), 3);
        // coordinates of omega^2 inside r: square of the first basis row
        let sq = r.mul(&r.basis(0), &r.basis(0));
        let sq2 = r.mul(&sq, &sq);
        assert!(is_zero(&f, &sq2));
        let mut n = sq.clone();
        n.push(0);
        let e = u.unit().unwrap().clone();
        let e_minus_n = sub(&f, &e, &n);
        assert_eq!(invert(&u, &e_minus_n).unwrap(), Some(add(&f, &e, &n)));
        // projection onto the unit coordinate kills r
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                assert_eq!(u.mul(&u.basis(i), &u.basis(j))[2], 0);
            }
        }
        let zero_alg = StructureAlgebra::new(f, vec![], vec![], None).unwrap();
        assert_eq!(unitize(&zero_alg).dim(), 1);
    }

    #[test]
    fn quasiinverse_examples() {
        let f = gf(3);
        let field_alg = StructureAlgebra::new(f, vec!["1".into()], vec![vec![(0, 1)]], Some(vec![1])).unwrap();
        assert_eq!(quasiinverse(&field_alg, &[0]).unwrap(), Some(vec![0]));
        assert_eq!(quasiinverse(&field_alg, &[2]).unwrap(), Some(vec![2]));
        assert_eq!(quasiinverse(&field_alg, &[1]).unwrap(), None);

        let q = Rationals;
        let a = loop_algebra(&q, &cyclic(2).unwrap()).unwrap();
        let x: Vec<_> = [1, 3].iter().map(|&v| q.from_i64(v)).collect();
        let xs = quasiinverse(&a, &x).unwrap().unwrap();
        let lhs = add(&q, &x, &xs);
        assert_eq!(lhs, a.mul(&x, &xs));
        assert_eq!(lhs, a.mul(&xs, &x));
    }

    #[test]
    fn bad_unit_rejected() {
        let f = gf(3);
        let r = StructureAlgebra::new(f, vec!["a".into()], vec![vec![]], Some(vec![1]));
        assert!(matches!(r, Err(AlgebraError::BadUnit)));
    }
}
