//! Exact linear algebra over a [`Field`]: reduced row-echelon subspaces,
//! linear solving, ideal-closure fixpoints and subspace powers.

use std::collections::VecDeque;

use thiserror::Error;

use crate::gf::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Vector<F> = Vec<<F as Field>::Elem>;
/// `(coordinate, value)` pairs; coordinates distinct, values nonzero.
pub type SparseVector<F> = Vec<(usize, <F as Field>::Elem)>;
/// A linear endomorphism of the ambient space.
pub type LinearMap<'a, F> = Box<dyn Fn(&[<F as Field>::Elem]) -> Vector<F> + 'a>;
/// A bilinear product on the ambient space.
pub type Bilinear<'a, F> = dyn Fn(&[<F as Field>::Elem], &[<F as Field>::Elem]) -> Vector<F> + 'a;

pub fn zero_vector<F: Field>(field: &F, dim: usize) -> Vector<F> {
    vec![field.zero(); dim]
}

pub fn unit_vector<F: Field>(field: &F, dim: usize, i: usize) -> Vector<F> {
    let mut v = zero_vector(field, dim);
    v[i] = field.one();
    v
}

pub fn is_zero<F: Field>(field: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| field.is_zero(x))
}

pub fn add<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| field.add(x, y)).collect()
}

pub fn sub<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| field.sub(x, y)).collect()
}

pub fn neg<F: Field>(field: &F, a: &[F::Elem]) -> Vector<F> {
    a.iter().map(|x| field.neg(x)).collect()
}

pub fn scale<F: Field>(field: &F, alpha: &F::Elem, a: &[F::Elem]) -> Vector<F> {
    a.iter().map(|x| field.mul(alpha, x)).collect()
}

/// `y += alpha * x`
pub fn axpy<F: Field>(field: &F, y: &mut [F::Elem], alpha: &F::Elem, x: &[F::Elem]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !field.is_zero(xi) {
            *yi = field.add(yi, &field.mul(alpha, xi));
        }
    }
}

pub fn to_sparse<F: Field>(field: &F, v: &[F::Elem]) -> SparseVector<F> {
    v.iter().enumerate().filter(|(_, x)| !field.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense<F: Field>(field: &F, dim: usize, v: &[(usize, F::Elem)]) -> Vector<F> {
    let mut out = zero_vector(field, dim);
    for (i, x) in v {
        out[*i] = field.add(&out[*i], x);
    }
    out
}

/// Merge repeated coordinates and drop zeros.
pub fn combine_sparse<F: Field>(field: &F, mut terms: Vec<(usize, F::Elem)>) -> SparseVector<F> {
    terms.sort_by_key(|(i, _)| *i);
    let mut out: SparseVector<F> = Vec::with_capacity(terms.len());
    for (i, x) in terms {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = field.add(y, &x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !field.is_zero(x));
    out
}

fn check_len(expected: usize, got: usize) -> Result<(), LinalgError> {
    if expected == got {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, got })
    }
}

/// A linear subspace held as a fully reduced row-echelon basis.
///
/// Rows are sorted by pivot column, every pivot entry is one and every pivot
/// column is zero in all other rows, so the basis is unique per subspace and
/// equality of subspaces is equality of `Subspace` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient_dim: usize,
    rows: Vec<Vector<F>>,
    pivots: Vec<usize>,
    // cached complement of `pivots`, ascending
    free: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            free: (0..ambient_dim).collect(),
        }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient_dim,
            rows: (0..ambient_dim).map(|i| unit_vector(field, ambient_dim, i)).collect(),
            pivots: (0..ambient_dim).collect(),
            free: Vec::new(),
        }
    }

    pub fn span<'v, I>(field: &F, ambient_dim: usize, vectors: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = &'v Vector<F>>,
        F::Elem: 'v,
    {
        let mut s = Self::zero(field, ambient_dim);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    pub fn rows(&self) -> &[Vector<F>] {
        &self.rows
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots, ascending. They index a complement.
    pub fn free_cols(&self) -> &[usize] {
        &self.free
    }

    /// Remainder of `v` modulo the subspace; zero iff `v` is a member.
    /// The remainder is supported on the free columns only.
    pub fn reduce(&self, v: &[F::Elem]) -> Result<Vector<F>, LinalgError> {
        check_len(self.ambient_dim, v.len())?;
        let f = &self.field;
        let mut res = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let coef = v[pc].clone();
            if f.is_zero(&coef) {
                continue;
            }
            for &c in &self.free {
                if !f.is_zero(&row[c]) {
                    res[c] = f.sub(&res[c], &f.mul(&coef, &row[c]));
                }
            }
            res[pc] = f.zero();
        }
        Ok(res)
    }

    /// Sparse variant of [`Self::reduce`]; returns `None` for members.
    pub fn reduce_sparse(&self, v: &[(usize, F::Elem)]) -> Result<Option<Vector<F>>, LinalgError> {
        let f = &self.field;
        let mut res = zero_vector(f, self.ambient_dim);
        for (i, x) in v {
            if *i >= self.ambient_dim {
                return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, got: *i + 1 });
            }
            res[*i] = f.add(&res[*i], x);
        }
        for (i, x) in v {
            if let Ok(r) = self.pivots.binary_search(i) {
                if f.is_zero(x) {
                    continue;
                }
                let row = &self.rows[r];
                for &c in &self.free {
                    if !f.is_zero(&row[c]) {
                        res[c] = f.sub(&res[c], &f.mul(x, &row[c]));
                    }
                }
                res[*i] = f.zero();
            }
        }
        if is_zero(f, &res) {
            Ok(None)
        } else {
            Ok(Some(res))
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> Result<bool, LinalgError> {
        Ok(is_zero(&self.field, &self.reduce(v)?))
    }

    /// Coordinates of a member in the row basis (its entries at the pivots).
    pub fn coordinates(&self, v: &[F::Elem]) -> Result<Option<Vector<F>>, LinalgError> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&c| v[c].clone()).collect()))
    }

    /// Linear combination of the basis rows.
    pub fn combination(&self, coords: &[F::Elem]) -> Result<Vector<F>, LinalgError> {
        check_len(self.dim(), coords.len())?;
        let mut out = zero_vector(&self.field, self.ambient_dim);
        for (row, c) in self.rows.iter().zip(coords) {
            axpy(&self.field, &mut out, c, row);
        }
        Ok(out)
    }

    /// Adds `v`; returns whether the subspace grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> Result<bool, LinalgError> {
        let res = self.reduce(v)?;
        if is_zero(&self.field, &res) {
            return Ok(false);
        }
        self.absorb_residual(res);
        Ok(true)
    }

    pub fn insert_sparse(&mut self, v: &[(usize, F::Elem)]) -> Result<bool, LinalgError> {
        match self.reduce_sparse(v)? {
            None => Ok(false),
            Some(res) => {
                self.absorb_residual(res);
                Ok(true)
            }
        }
    }

    /// `res` is nonzero and already reduced (zero on all pivot columns).
    fn absorb_residual(&mut self, mut res: Vector<F>) {
        let f = self.field.clone();
        let lead = res.iter().position(|x| !f.is_zero(x)).expect("nonzero residual");
        let inv = f.inv(&res[lead]).expect("nonzero lead");
        for x in res.iter_mut() {
            *x = f.mul(&inv, x);
        }
        for row in self.rows.iter_mut() {
            let coef = row[lead].clone();
            if !f.is_zero(&coef) {
                let neg = f.neg(&coef);
                axpy(&f, row, &neg, &res);
            }
        }
        let at = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(at, lead);
        self.rows.insert(at, res);
        let pos = self.free.binary_search(&lead).expect("lead was free");
        self.free.remove(pos);
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> Result<bool, LinalgError> {
        check_len(other.ambient_dim, self.ambient_dim)?;
        for r in &self.rows {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn join(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
        check_len(self.ambient_dim, other.ambient_dim)?;
        let mut out = self.clone();
        for r in &other.rows {
            out.insert(r)?;
        }
        Ok(out)
    }

    /// Iterates over every element; only sensible for small finite cases.
    pub fn elements(&self) -> Result<Vec<Vector<F>>, crate::gf::FieldError> {
        let scalars = self.field.elements()?;
        let q = scalars.len();
        let d = self.dim();
        let total = q.checked_pow(d as u32).expect("subspace too large to enumerate");
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; d];
        for _ in 0..total {
            let coords: Vec<F::Elem> = digits.iter().map(|&k| scalars[k].clone()).collect();
            out.push(self.combination(&coords).expect("length matches"));
            for dgt in digits.iter_mut() {
                *dgt += 1;
                if *dgt < q {
                    break;
                }
                *dgt = 0;
            }
        }
        Ok(out)
    }
}

/// Solves `sum_i x_i * columns[i] = rhs`. Free variables are set to zero and
/// pivots are chosen as the first usable row, so the answer is deterministic.
pub fn solve<F: Field>(field: &F, columns: &[Vector<F>], rhs: &[F::Elem]) -> Result<Option<Vector<F>>, LinalgError> {
    let m = rhs.len();
    let k = columns.len();
    for c in columns {
        check_len(m, c.len())?;
    }
    // augmented m x (k+1), row-major
    let mut a: Vec<Vector<F>> = (0..m)
        .map(|r| {
            let mut row: Vector<F> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut next_row = 0;
    for col in 0..k {
        let Some(p) = (next_row..m).find(|&r| !field.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(next_row, p);
        let inv = field.inv(&a[next_row][col]).expect("nonzero pivot");
        for x in a[next_row].iter_mut() {
            *x = field.mul(&inv, x);
        }
        let pivot_row = a[next_row].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != next_row && !field.is_zero(&row[col]) {
                let coef = field.neg(&row[col]);
                axpy(field, row, &coef, &pivot_row);
            }
        }
        pivot_cols.push(col);
        next_row += 1;
        if next_row == m {
            break;
        }
    }
    if a[next_row..].iter().any(|row| !field.is_zero(&row[k])) {
        return Ok(None);
    }
    let mut x = zero_vector(field, k);
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = a[r][k].clone();
    }
    Ok(Some(x))
}

/// Smallest subspace containing `seed` and stable under every action.
///
/// Seeds are consumed lazily in the order given; the closure stops consuming
/// them once the whole ambient space is reached. A final pass applies every
/// action to every basis row and re-checks membership.
pub fn ideal_closure<F, I>(
    field: &F,
    ambient_dim: usize,
    seed: I,
    left_actions: &[LinearMap<'_, F>],
    right_actions: &[LinearMap<'_, F>],
) -> Result<Subspace<F>, LinalgError>
where
    F: Field,
    I: IntoIterator<Item = SparseVector<F>>,
{
    let mut space = Subspace::zero(field, ambient_dim);
    let mut queue: VecDeque<Vector<F>> = VecDeque::new();
    let actions: Vec<&LinearMap<'_, F>> = left_actions.iter().chain(right_actions).collect();

    let drain = |space: &mut Subspace<F>, queue: &mut VecDeque<Vector<F>>| -> Result<(), LinalgError> {
        while let Some(v) = queue.pop_front() {
            if space.is_full() {
                queue.clear();
                return Ok(());
            }
            for act in &actions {
                let w = act(&v);
                check_len(ambient_dim, w.len())?;
                if space.insert(&w)? {
                    queue.push_back(w);
                }
            }
        }
        Ok(())
    };

    for s in seed {
        if space.is_full() {
            break;
        }
        if space.insert_sparse(&s)? {
            queue.push_back(to_dense(field, ambient_dim, &s));
            drain(&mut space, &mut queue)?;
        }
    }
    drain(&mut space, &mut queue)?;

    // verification pass
    loop {
        let mut grew = false;
        for row in space.rows().to_vec() {
            for act in &actions {
                let w = act(&row);
                if space.insert(&w)? {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(space)
}

/// Span of all products `u * v` with `u` in `a` and `v` in `b`.
pub fn subspace_product<F: Field>(
    a: &Subspace<F>,
    b: &Subspace<F>,
    mul: &Bilinear<'_, F>,
    into: &mut Subspace<F>,
) -> Result<(), LinalgError> {
    check_len(a.ambient_dim(), b.ambient_dim())?;
    check_len(a.ambient_dim(), into.ambient_dim())?;
    for u in a.rows() {
        for v in b.rows() {
            if into.is_full() {
                return Ok(());
            }
            into.insert(&mul(u, v))?;
        }
    }
    Ok(())
}

/// `S^1, ..., S^n`, where `S^k` is spanned by all products of `k` elements
/// of `S` under every bracketing: `S^k = sum_{i+j=k} S^i * S^j`.
///
/// When `S` is closed under the product, the sequence is non-increasing and
/// each `S^k` is cut short as soon as it reaches the dimension of `S^(k-1)`.
pub fn subspace_powers<F: Field>(
    s: &Subspace<F>,
    mul: &Bilinear<'_, F>,
    n: usize,
) -> Result<Vec<Subspace<F>>, LinalgError> {
    assert!(n >= 1, "powers start at 1");
    let field = s.field().clone();
    let dim = s.ambient_dim();
    let mut powers: Vec<Subspace<F>> = vec![s.clone()];
    let mut monotone: Option<bool> = None;
    for k in 2..=n {
        let prev_dim = powers[k - 2].dim();
        if prev_dim == 0 {
            powers.push(Subspace::zero(&field, dim));
            continue;
        }
        let mut acc = Subspace::zero(&field, dim);
        'pairs: for i in 1..k {
            let (left, right) = (&powers[i - 1], &powers[k - i - 1]);
            for u in left.rows() {
                for v in right.rows() {
                    acc.insert(&mul(u, v))?;
                    if monotone == Some(true) && acc.dim() == prev_dim {
                        break 'pairs;
                    }
                }
            }
        }
        if monotone.is_none() {
            monotone = Some(acc.is_subspace_of(s)?);
        }
        powers.push(acc);
    }
    Ok(powers)
}

pub fn subspace_power<F: Field>(s: &Subspace<F>, mul: &Bilinear<'_, F>, n: usize) -> Result<Subspace<F>, LinalgError> {
    Ok(subspace_powers(s, mul, n)?.pop().expect("n >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{PrimeField, Rationals};
    use num::BigRational;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn rat(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| Rationals.from_i64(x)).collect()
    }

    #[test]
    fn insert_examples() {
        let f = gf(5);
        let mut s = Subspace::zero(&f, 2);
        assert!(s.insert(&[1, 0]).unwrap());
        assert!(!s.insert(&[1, 0]).unwrap());
        assert_eq!(s.dim(), 1);

        let f2 = gf(2);
        let mut t = Subspace::zero(&f2, 2);
        t.insert(&[1, 1]).unwrap();
        t.insert(&[0, 1]).unwrap();
        assert!(t.is_full());
        assert_eq!(t, Subspace::full(&f2, 2));
    }

    #[test]
    fn group_algebra_c3_square() {
        // basis (e, g, g^2); (e - g)^2 = e - 2g + g^2 = e + g + g^2 over GF(3)
        let f = gf(3);
        let mut s = Subspace::zero(&f, 3);
        s.insert(&[1, 2, 0]).unwrap();
        s.insert(&[1, 1, 1]).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let f = gf(3);
        let mut s = Subspace::zero(&f, 3);
        assert_eq!(s.insert(&[1, 0]), Err(LinalgError::DimensionMismatch { expected: 3, got: 2 }));
        assert!(solve(&f, &[vec![1, 0]], &[1, 0, 0]).is_err());
    }

    #[test]
    fn solve_examples() {
        let f = gf(7);
        let cols = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(solve(&f, &cols, &[2, 3]).unwrap(), Some(vec![2, 3]));

        let cols = vec![rat(&[1, 1]), rat(&[2, 2])];
        assert_eq!(solve(&Rationals, &cols, &rat(&[1, 0])).unwrap(), None);

        let f3 = gf(3);
        let cols = vec![vec![1, 2], vec![0, 1]];
        assert_eq!(solve(&f3, &cols, &[1, 0]).unwrap(), Some(vec![1, 1]));
    }

    #[test]
    fn solve_underdetermined_sets_free_to_zero() {
        let f = gf(5);
        let cols = vec![vec![1, 0], vec![1, 0], vec![0, 1]];
        assert_eq!(solve(&f, &cols, &[3, 4]).unwrap(), Some(vec![3, 0, 4]));
    }

    fn c3_actions(f: &PrimeField) -> Vec<LinearMap<'static, PrimeField>> {
        // multiplication by g^k permutes (e, g, g^2) cyclically
        let f = *f;
        (0..3usize)
            .map(|k| {
                let _ = f;
                Box::new(move |v: &[u32]| {
                    let mut out = vec![0u32; 3];
                    for i in 0..3 {
                        out[(i + k) % 3] = v[i];
                    }
                    out
                }) as LinearMap<'static, PrimeField>
            })
            .collect()
    }

    #[test]
    fn closure_examples() {
        let f = gf(3);
        let acts = c3_actions(&f);
        let zero = ideal_closure(&f, 3, vec![vec![]], &acts, &acts).unwrap();
        assert!(zero.is_zero());

        let full = ideal_closure(&f, 3, (0..3).map(|i| vec![(i, 1u32)]).collect::<Vec<_>>(), &acts, &acts).unwrap();
        assert!(full.is_full());

        let aug = ideal_closure(&f, 3, vec![vec![(0, 1), (1, 2)]], &acts, &acts).unwrap();
        // brute force: span of e-g, g-g^2, g^2-e
        let brute = Subspace::span(&f, 3, &[vec![1, 2, 0], vec![0, 1, 2], vec![2, 0, 1]]).unwrap();
        assert_eq!(aug, brute);
        assert_eq!(aug.dim(), 2);
    }

    fn c3_mul(a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = gf(3);
        let mut out = vec![0u32; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[(i + j) % 3] = f.add(&out[(i + j) % 3], &f.mul(&a[i], &b[j]));
            }
        }
        out
    }

    #[test]
    fn powers_of_augmentation_ideal() {
        let f = gf(3);
        let omega = Subspace::span(&f, 3, &[vec![1, 2, 0], vec![0, 1, 2]]).unwrap();
        let p = subspace_powers(&omega, &c3_mul, 4).unwrap();
        assert_eq!(p[0], omega);
        assert_eq!(p[1].dim(), 1);
        assert!(p[1].contains(&[1, 1, 1]).unwrap());
        assert!(p[2].is_zero());
        assert!(p[3].is_zero());

        let full = Subspace::full(&f, 3);
        for k in 1..=4 {
            assert_eq!(subspace_power(&full, &c3_mul, k).unwrap(), full);
        }
    }

    #[test]
    fn enumerate_elements() {
        let f = gf(3);
        let s = Subspace::span(&f, 3, &[vec![1, 2, 0], vec![0, 1, 2]]).unwrap();
        let els = s.elements().unwrap();
        assert_eq!(els.len(), 9);
        assert_eq!(els[0], vec![0, 0, 0]);
        for e in &els {
            assert!(s.contains(e).unwrap());
        }
    }
}
