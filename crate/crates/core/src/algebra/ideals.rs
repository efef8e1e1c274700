use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{fmt_vector, AlgebraError, StructureAlgebra};
use crate::gf::Field;
use crate::linalg::{
    combine_sparse, ideal_closure, subspace_product, to_sparse, zero_vector, LinearMap, SparseVector, Subspace, Vector,
};

/// Smallest two-sided ideal containing the seeds.
pub fn ideal_generated<F, I>(a: &StructureAlgebra<F>, seeds: I) -> Result<Subspace<F>, AlgebraError>
where
    F: Field,
    I: IntoIterator<Item = SparseVector<F>>,
{
    let left: Vec<LinearMap<'_, F>> = (0..a.dim()).map(|k| a.left_action(k)).collect();
    let right: Vec<LinearMap<'_, F>> = (0..a.dim()).map(|k| a.right_action(k)).collect();
    Ok(ideal_closure(a.field(), a.dim(), seeds, &left, &right)?)
}

fn basis_assoc<F: Field>(a: &StructureAlgebra<F>, i: usize, j: usize, k: usize) -> SparseVector<F> {
    let one = a.field().one();
    a.associator_sparse(&[(i, one.clone())], &[(j, one.clone())], &[(k, one)])
}

fn sum_sparse<F: Field>(f: &F, x: SparseVector<F>, y: SparseVector<F>) -> SparseVector<F> {
    let mut t = x;
    t.extend(y);
    combine_sparse(f, t)
}

/// Alternator generators over basis triples in lexicographic order:
/// `(a,b,c)+(b,a,c)`, `(a,b,c)+(a,c,b)`, and on the diagonal `a = b` also
/// `(a,a,c)` and `(c,a,a)`.
fn alternator_generators<F: Field>(a: &StructureAlgebra<F>) -> impl Iterator<Item = SparseVector<F>> + '_ {
    let n = a.dim();
    let f = a.field();
    (0..n * n * n).flat_map(move |t| {
        let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
        let abc = basis_assoc(a, i, j, k);
        let mut gens = Vec::with_capacity(4);
        gens.push(sum_sparse(f, abc.clone(), basis_assoc(a, j, i, k)));
        gens.push(sum_sparse(f, abc, basis_assoc(a, i, k, j)));
        if i == j {
            gens.push(basis_assoc(a, i, i, k));
            gens.push(basis_assoc(a, k, i, i));
        }
        gens.into_iter().filter(|g| !g.is_empty())
    })
}

/// `I(Q)`: the ideal generated by all alternator generators on basis triples.
pub fn alternator_ideal<F: Field>(a: &StructureAlgebra<F>) -> Result<Subspace<F>, AlgebraError> {
    ideal_generated(a, alternator_generators(a))
}

/// `A/I` in the coordinates of the free (non-pivot) columns of `I`.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra<F: Field> {
    parent: StructureAlgebra<F>,
    ideal: Subspace<F>,
    algebra: StructureAlgebra<F>,
}

impl<F: Field> QuotientAlgebra<F> {
    pub fn parent(&self) -> &StructureAlgebra<F> {
        &self.parent
    }

    pub fn ideal(&self) -> &Subspace<F> {
        &self.ideal
    }

    pub fn algebra(&self) -> &StructureAlgebra<F> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Image of a parent vector.
    pub fn project(&self, v: &[F::Elem]) -> Result<Vector<F>, AlgebraError> {
        let r = self.ideal.reduce(v)?;
        Ok(self.ideal.free_cols().iter().map(|&c| r[c].clone()).collect())
    }

    pub fn project_basis(&self, i: usize) -> Vector<F> {
        self.project(&self.parent.basis(i)).expect("basis vector has parent dimension")
    }

    /// Canonical coset representative of quotient coordinates.
    pub fn lift(&self, coords: &[F::Elem]) -> Vector<F> {
        let mut v = zero_vector(self.parent.field(), self.parent.dim());
        for (&c, x) in self.ideal.free_cols().iter().zip(coords) {
            v[c] = x.clone();
        }
        v
    }

    /// Augmentation ideal of the subloop with parent basis indices `h`,
    /// generated by the images of `e - h`.
    pub fn augmentation_ideal(&self, h: &[usize]) -> Result<Subspace<F>, AlgebraError> {
        let f = self.parent.field();
        let e = self.parent.require_unit()?;
        let mut seeds = Vec::with_capacity(h.len());
        for &x in h {
            let mut d = e.clone();
            d[x] = f.sub(&d[x], &f.one());
            seeds.push(to_sparse(f, &self.project(&d)?));
        }
        ideal_generated(&self.algebra, seeds)
    }
}

pub fn quotient_algebra<F: Field>(
    a: &StructureAlgebra<F>,
    ideal: &Subspace<F>,
) -> Result<QuotientAlgebra<F>, AlgebraError> {
    if ideal.ambient_dim() != a.dim() {
        return Err(
            crate::linalg::LinalgError::DimensionMismatch { expected: a.dim(), got: ideal.ambient_dim() }.into()
        );
    }
    if let Some(k) = a.unstable_basis_index(ideal)? {
        return Err(AlgebraError::IdealNotStable(k));
    }
    if let Some(e) = a.unit() {
        if ideal.contains(e)? {
            return Err(AlgebraError::IdealNotProper);
        }
    }
    let free = ideal.free_cols().to_vec();
    let f = a.field();
    let read = |v: &SparseVector<F>| -> Result<SparseVector<F>, AlgebraError> {
        let r = ideal.reduce_sparse(v)?;
        Ok(match r {
            None => Vec::new(),
            Some(r) => {
                free.iter().enumerate().filter(|(_, &c)| !f.is_zero(&r[c])).map(|(i, &c)| (i, r[c].clone())).collect()
            }
        })
    };
    let mut table = Vec::with_capacity(free.len() * free.len());
    for &i in &free {
        for &j in &free {
            table.push(read(a.basis_product(i, j))?);
        }
    }
    let names = free.iter().map(|&c| a.names()[c].clone()).collect();
    let unit = match a.unit() {
        None => None,
        Some(e) => {
            let r = ideal.reduce(e)?;
            Some(free.iter().map(|&c| r[c].clone()).collect())
        }
    };
    let mut algebra = StructureAlgebra::new(f.clone(), names, table, unit)?;
    algebra.attach_parent(a, ideal);
    Ok(QuotientAlgebra { parent: a.clone(), ideal: ideal.clone(), algebra })
}

/// `F[Q] = FQ / I(Q)`, refusing the zero quotient.
pub(crate) fn alternative_quotient<F: Field>(fq: &StructureAlgebra<F>) -> Result<QuotientAlgebra<F>, AlgebraError> {
    let i = alternator_ideal(fq)?;
    match quotient_algebra(fq, &i) {
        Err(AlgebraError::IdealNotProper) => Err(AlgebraError::AlternatorIdealFull),
        other => other,
    }
}

/// `omega H` inside a loop algebra whose basis is indexed by loop elements.
pub fn augmentation_ideal<F: Field>(a: &StructureAlgebra<F>, h: &[usize]) -> Result<Subspace<F>, AlgebraError> {
    let f = a.field();
    let seeds = h.iter().filter(|&&x| x != 0).map(|&x| vec![(0, f.one()), (x, f.neg(&f.one()))]).collect::<Vec<_>>();
    ideal_generated(a, seeds)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternativeReport {
    pub mode: &'static str,
    pub samples: u64,
    pub seed: Option<u64>,
    pub ok: bool,
    pub witness: Option<String>,
}

/// Basis triples are checked exhaustively while `dim^3` stays under this.
pub const EXHAUSTIVE_TRIPLES: u64 = 10_000_000;

/// Checks `(x,x,y) = (y,x,x) = 0`. Exhaustive mode checks the linearized
/// identities and the diagonal ones on every basis triple, which covers all
/// vectors by multilinearity. Sampled mode uses random vectors `x, y, z`.
pub fn alternative_check<F: Field>(a: &StructureAlgebra<F>, sampled: Option<(u64, u64)>) -> AlternativeReport {
    let n = a.dim();
    let f = a.field();
    let exhaustive = sampled.is_none() && (n as u64).pow(3) <= EXHAUSTIVE_TRIPLES;
    if exhaustive {
        for t in 0..n * n * n {
            let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
            let abc = basis_assoc(a, i, j, k);
            let bad = !sum_sparse(f, abc.clone(), basis_assoc(a, j, i, k)).is_empty()
                || !sum_sparse(f, abc, basis_assoc(a, i, k, j)).is_empty()
                || (i == j && (!basis_assoc(a, i, i, k).is_empty() || !basis_assoc(a, k, i, i).is_empty()));
            if bad {
                return AlternativeReport {
                    mode: "exhaustive",
                    samples: (n as u64).pow(3),
                    seed: None,
                    ok: false,
                    witness: Some(format!("basis triple ({}, {}, {})", a.names()[i], a.names()[j], a.names()[k])),
                };
            }
        }
        return AlternativeReport {
            mode: "exhaustive",
            samples: (n as u64).pow(3),
            seed: None,
            ok: true,
            witness: None,
        };
    }
    let (samples, seed) = sampled.unwrap_or((10_000, crate::DEFAULT_SEED));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_vec = |rng: &mut ChaCha8Rng| -> Vector<F> { (0..n).map(|_| f.random(rng)).collect() };
    for _ in 0..samples {
        let (x, y, z) = (rand_vec(&mut rng), rand_vec(&mut rng), rand_vec(&mut rng));
        let xxy = a.associator(&x, &x, &y);
        let yxx = a.associator(&y, &x, &x);
        let xyz = a.associator(&x, &y, &z);
        let lin1 = crate::linalg::add(f, &xyz, &a.associator(&y, &x, &z));
        let lin2 = crate::linalg::add(f, &xyz, &a.associator(&x, &z, &y));
        if [xxy, yxx, lin1, lin2].iter().any(|v| !crate::linalg::is_zero(f, v)) {
            return AlternativeReport {
                mode: "sampled",
                samples,
                seed: Some(seed),
                ok: false,
                witness: Some(format!(
                    "x = {}, y = {}, z = {}",
                    fmt_vector(a, &x),
                    fmt_vector(a, &y),
                    fmt_vector(a, &z)
                )),
            };
        }
    }
    AlternativeReport { mode: "sampled", samples, seed: Some(seed), ok: true, witness: None }
}

/// Least `n` with `S^n = 0` over all bracketings, searched up to
/// `ambient_dim + 1`. `None` when the powers stabilize at a nonzero space.
pub fn nilpotency_index<F: Field>(a: &StructureAlgebra<F>, s: &Subspace<F>) -> Result<Option<usize>, AlgebraError> {
    if s.is_zero() {
        return Ok(Some(1));
    }
    let mul = |x: &[F::Elem], y: &[F::Elem]| a.mul(x, y);
    let mut powers = vec![s.clone()];
    let mut monotone = None;
    for k in 2..=a.dim() + 1 {
        let prev = powers[k - 2].dim();
        let mut acc = Subspace::zero(a.field(), a.dim());
        for i in 1..k {
            subspace_product(&powers[i - 1], &powers[k - i - 1], &mul, &mut acc)?;
            if monotone == Some(true) && acc.dim() == prev {
                break;
            }
        }
        if acc.is_zero() {
            return Ok(Some(k));
        }
        if monotone.is_none() {
            monotone = Some(acc.is_subspace_of(s)?);
        }
        if monotone == Some(true) && acc.dim() == prev {
            // S^k = S^(k-1) forces every later power to equal it
            return Ok(None);
        }
        powers.push(acc);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::loop_algebra;
    use crate::constructions::{builtin_group, chein_double, cyclic};
    use crate::gf::PrimeField;
    use crate::loopcore::{normal_closure, quotient_loop};

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn group_alternator_ideal_is_zero() {
        let a = loop_algebra(&gf(3), &builtin_group("s3").unwrap()).unwrap();
        assert!(alternator_ideal(&a).unwrap().is_zero());
        let q = quotient_algebra(&a, &Subspace::zero(&gf(3), 6)).unwrap();
        assert_eq!(q.dim(), 6);
        assert!(alternative_check(a_ref(&q), None).ok);
    }

    fn a_ref<F: Field>(q: &QuotientAlgebra<F>) -> &StructureAlgebra<F> {
        q.algebra()
    }

    #[test]
    fn chein12_quotient_is_alternative() {
        let f = gf(7);
        let l = chein_double(&builtin_group("s3").unwrap()).unwrap();
        let fq = loop_algebra(&f, &l).unwrap();
        assert!(!alternative_check(&fq, None).ok);
        let q = alternative_quotient(&fq).unwrap();
        assert!(q.dim() < 12);
        assert!(alternative_check(q.algebra(), None).ok);
        // projection is multiplicative on basis pairs
        for i in 0..12 {
            for j in 0..12 {
                let lhs = q.algebra().mul(&q.project_basis(i), &q.project_basis(j));
                assert_eq!(lhs, q.project_basis(l.mul(i, j)));
            }
        }
    }

    #[test]
    fn augmentation_examples() {
        let f = gf(3);
        let c3 = cyclic(3).unwrap();
        let a = loop_algebra(&f, &c3).unwrap();
        let w = augmentation_ideal(&a, &[0, 1, 2]).unwrap();
        assert_eq!(w.dim(), 2);
        assert!(!w.contains(a.unit().unwrap()).unwrap());
        // zero-sum hyperplane
        assert!(w.contains(&[1, 1, 1]).unwrap());
        assert_eq!(nilpotency_index(&a, &w).unwrap(), Some(3));

        let a5 = loop_algebra(&gf(5), &c3).unwrap();
        let w5 = augmentation_ideal(&a5, &[0, 1, 2]).unwrap();
        assert_eq!(nilpotency_index(&a5, &w5).unwrap(), None);
    }

    #[test]
    fn dimension_law_s3() {
        let f = gf(7);
        let s3 = builtin_group("s3").unwrap();
        let a = loop_algebra(&f, &s3).unwrap();
        let a3 = normal_closure(&s3, &[1]);
        let w = augmentation_ideal(&a, a3.members()).unwrap();
        let q = quotient_algebra(&a, &w).unwrap();
        assert_eq!(q.dim(), quotient_loop(&s3, &a3).unwrap().order());
    }

    #[test]
    fn improper_and_unstable_ideals_rejected() {
        let f = gf(3);
        let a = loop_algebra(&f, &cyclic(3).unwrap()).unwrap();
        let full = Subspace::full(&f, 3);
        assert!(matches!(quotient_algebra(&a, &full), Err(AlgebraError::IdealNotProper)));
        let line = Subspace::span(&f, 3, [&vec![0u32, 1, 0]]).unwrap();
        assert!(matches!(quotient_algebra(&a, &line), Err(AlgebraError::IdealNotStable(_))));
    }
}
