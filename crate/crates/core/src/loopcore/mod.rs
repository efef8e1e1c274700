//! Finite loops given by a validated Cayley table, or structurally as a
//! direct product of two loops. The identity always sits at index 0.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod normal;
mod props;
mod radical;
mod series;

pub use normal::{
    center, congruence_classes, is_normal, is_simple, normal_closure, normal_subloops, quotient_loop,
    quotient_with_map, subloop_generated, Partition, SimplicityReport, Subloop,
};
pub use props::{
    check_cml_identity, check_properties, cml_identity_value, element_order, loop_assoc_comm, CheckConfig, CheckMode,
    CmlIdentityReport, PropertyCheck, PropertyReport,
};
pub use radical::{
    composition_factors, find_simple_nonassociative_subloop, group_type_radical, is_group_type, CompositionFactor,
    DEFAULT_RADICAL_BOUND,
};
pub use series::{central_series, SeriesKind, SeriesReport, WeightAlignment};

/// Products larger than this are kept structural instead of tabulated.
pub const PRODUCT_TABLE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("table is not n x n over 0..{order}")]
    BadShape { order: usize },
    #[error("latin square violation in {line} {index}: entry {value} repeats")]
    LatinSquareViolation { line: Line, index: usize, value: usize },
    #[error("index 0 is not a two-sided identity")]
    NoIdentityAtZero,
    #[error("subset is not a normal subloop: {0}")]
    NotNormal(String),
    #[error("loop is not commutative Moufang: {0}")]
    NotCommutativeMoufang(String),
    #[error("order {order} exceeds bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error("lower central series routes disagree at term {index}")]
    SeriesMismatch { index: usize },
    #[error("radical verification failed: {0}")]
    RadicalCheckFailed(String),
    #[error("loop has no explicit table (order {0})")]
    NoTable(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    Row,
    Column,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row => write!(f, "row"),
            Line::Column => write!(f, "column"),
        }
    }
}

/// Cayley-table JSON: row `i`, column `j` holds the index of `x_i * x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyJson {
    pub order: usize,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

struct Table {
    names: Vec<String>,
    n: usize,
    mul: Vec<u32>,
    // ldiv[x*n + z] = y with x*y = z
    ldiv: Vec<u32>,
    // rdiv[z*n + y] = x with x*y = z
    rdiv: Vec<u32>,
}

enum Repr {
    Table(Table),
    Product(FiniteLoop, FiniteLoop),
}

/// A validated finite loop. Cheap to clone.
#[derive(Clone)]
pub struct FiniteLoop {
    repr: Arc<Repr>,
}

impl fmt::Debug for FiniteLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::Table(t) => write!(f, "FiniteLoop(order {})", t.n),
            Repr::Product(a, b) => write!(f, "FiniteLoop({a:?} x {b:?})"),
        }
    }
}

impl FiniteLoop {
    /// Validates a Cayley table (Latin square, identity at index 0).
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, LoopError> {
        let n = table.len();
        if n == 0 || names.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(LoopError::BadShape { order: n });
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            for &v in row {
                if v >= n {
                    return Err(LoopError::BadShape { order: n });
                }
                flat.push(v as u32);
            }
        }
        Self::from_flat(names, flat)
    }

    pub(crate) fn from_flat(names: Vec<String>, mul: Vec<u32>) -> Result<Self, LoopError> {
        let n = names.len();
        if n == 0 || mul.len() != n * n {
            return Err(LoopError::BadShape { order: n });
        }
        let mut seen = vec![u32::MAX; n];
        for (i, row) in mul.chunks(n).enumerate() {
            for &v in row {
                let v = v as usize;
                if v >= n {
                    return Err(LoopError::BadShape { order: n });
                }
                if seen[v] == i as u32 {
                    return Err(LoopError::LatinSquareViolation { line: Line::Row, index: i, value: v });
                }
                seen[v] = i as u32;
            }
        }
        seen.fill(u32::MAX);
        for j in 0..n {
            for i in 0..n {
                let v = mul[i * n + j] as usize;
                if seen[v] == j as u32 {
                    return Err(LoopError::LatinSquareViolation { line: Line::Column, index: j, value: v });
                }
                seen[v] = j as u32;
            }
        }
        for x in 0..n {
            if mul[x] as usize != x || mul[x * n] as usize != x {
                return Err(LoopError::NoIdentityAtZero);
            }
        }
        let mut ldiv = vec![0u32; n * n];
        let mut rdiv = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let z = mul[x * n + y] as usize;
                ldiv[x * n + z] = y as u32;
                rdiv[z * n + y] = x as u32;
            }
        }
        Ok(FiniteLoop { repr: Arc::new(Repr::Table(Table { names, n, mul, ldiv, rdiv })) })
    }

    /// Builds a table from a multiplication closure on `0..n`.
    pub fn from_fn(names: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self, LoopError> {
        let n = names.len();
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = mul(i, j);
                if v >= n {
                    return Err(LoopError::BadShape { order: n });
                }
                flat.push(v as u32);
            }
        }
        Self::from_flat(names, flat)
    }

    pub fn from_json(json: &CayleyJson) -> Result<Self, LoopError> {
        if json.order != json.table.len() {
            return Err(LoopError::BadShape { order: json.order });
        }
        Self::from_table(json.elements.clone(), json.table.clone())
    }

    pub fn to_json(&self) -> Result<CayleyJson, LoopError> {
        let n = self.order();
        if n * n > 1 << 26 {
            return Err(LoopError::NoTable(n));
        }
        Ok(CayleyJson {
            order: n,
            elements: self.names(),
            table: (0..n).map(|i| (0..n).map(|j| self.mul(i, j)).collect()).collect(),
        })
    }

    pub fn order(&self) -> usize {
        match &*self.repr {
            Repr::Table(t) => t.n,
            Repr::Product(a, b) => a.order() * b.order(),
        }
    }

    pub fn is_structural(&self) -> bool {
        matches!(&*self.repr, Repr::Product(..))
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &*self.repr {
            Repr::Table(t) => t.mul[x * t.n + y] as usize,
            Repr::Product(a, b) => {
                let m = b.order();
                a.mul(x / m, y / m) * m + b.mul(x % m, y % m)
            }
        }
    }

    /// `x \ z`: the unique `y` with `x * y = z`.
    #[inline]
    pub fn ldiv(&self, x: usize, z: usize) -> usize {
        match &*self.repr {
            Repr::Table(t) => t.ldiv[x * t.n + z] as usize,
            Repr::Product(a, b) => {
                let m = b.order();
                a.ldiv(x / m, z / m) * m + b.ldiv(x % m, z % m)
            }
        }
    }

    /// `z / y`: the unique `x` with `x * y = z`.
    #[inline]
    pub fn rdiv(&self, z: usize, y: usize) -> usize {
        match &*self.repr {
            Repr::Table(t) => t.rdiv[z * t.n + y] as usize,
            Repr::Product(a, b) => {
                let m = b.order();
                a.rdiv(z / m, y / m) * m + b.rdiv(z % m, y % m)
            }
        }
    }

    /// Right inverse `x \ e`; equals the two-sided inverse in IP loops.
    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.ldiv(x, 0)
    }

    /// Left inverse `e / x`.
    #[inline]
    pub fn left_inv(&self, x: usize) -> usize {
        self.rdiv(0, x)
    }

    pub fn name(&self, i: usize) -> String {
        match &*self.repr {
            Repr::Table(t) => t.names[i].clone(),
            Repr::Product(a, b) => {
                let m = b.order();
                format!("({},{})", a.name(i / m), b.name(i % m))
            }
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.order()).map(|i| self.name(i)).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        (0..self.order()).find(|&i| self.name(i) == name)
    }

    /// The loop on `members` (which must be a subloop containing 0), indexed
    /// in ascending order of the parent index.
    pub fn restrict(&self, members: &[usize]) -> Result<FiniteLoop, LoopError> {
        let mut index = vec![u32::MAX; self.order()];
        for (k, &m) in members.iter().enumerate() {
            index[m] = k as u32;
        }
        let names = members.iter().map(|&m| self.name(m)).collect();
        let mut flat = Vec::with_capacity(members.len() * members.len());
        for &a in members {
            for &b in members {
                let v = index[self.mul(a, b)];
                if v == u32::MAX {
                    return Err(LoopError::BadShape { order: members.len() });
                }
                flat.push(v);
            }
        }
        FiniteLoop::from_flat(names, flat)
    }

    /// Componentwise product; tabulated when small, structural otherwise.
    pub fn direct_product(&self, other: &FiniteLoop) -> FiniteLoop {
        let structural = FiniteLoop { repr: Arc::new(Repr::Product(self.clone(), other.clone())) };
        if self.order() * other.order() > PRODUCT_TABLE_LIMIT {
            return structural;
        }
        FiniteLoop::from_fn(structural.names(), |x, y| structural.mul(x, y)).expect("product of loops is a loop")
    }

    pub fn is_associative_triple(&self, x: usize, y: usize, z: usize) -> bool {
        self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
    }
}

pub fn direct_product(a: &FiniteLoop, b: &FiniteLoop) -> FiniteLoop {
    a.direct_product(b)
}

pub fn loop_from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteLoop, LoopError> {
    FiniteLoop::from_table(names, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn table_validation() {
        let c2 = FiniteLoop::from_table(names(2), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(c2.order(), 2);
        assert_eq!(c2.inv(1), 1);

        let bad = FiniteLoop::from_table(names(2), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(bad.unwrap_err(), LoopError::LatinSquareViolation { line: Line::Row, index: 1, value: 1 });

        let noid = FiniteLoop::from_table(names(2), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(noid.unwrap_err(), LoopError::NoIdentityAtZero);

        let shape = FiniteLoop::from_table(names(2), vec![vec![0, 1]]);
        assert!(matches!(shape, Err(LoopError::BadShape { .. })));
        let range = FiniteLoop::from_table(names(2), vec![vec![0, 2], vec![1, 0]]);
        assert!(matches!(range, Err(LoopError::BadShape { .. })));
    }

    #[test]
    fn column_violation_detected() {
        // rows are permutations but column 1 repeats 2
        let t = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 2, 1]];
        assert!(matches!(FiniteLoop::from_table(names(3), t), Err(LoopError::LatinSquareViolation { .. })));
    }

    #[test]
    fn divisions_invert_multiplication() {
        let n = 5;
        let l = FiniteLoop::from_fn(names(n), |a, b| (a + b) % n).unwrap();
        for x in 0..n {
            for y in 0..n {
                let z = l.mul(x, y);
                assert_eq!(l.ldiv(x, z), y);
                assert_eq!(l.rdiv(z, y), x);
            }
        }
    }

    #[test]
    fn structural_product_agrees_with_table() {
        let c3 = FiniteLoop::from_fn(names(3), |a, b| (a + b) % 3).unwrap();
        let c5 = FiniteLoop::from_fn(names(5), |a, b| (a + b) % 5).unwrap();
        let table = c3.direct_product(&c5);
        let structural = FiniteLoop { repr: Arc::new(Repr::Product(c3.clone(), c5.clone())) };
        assert!(!table.is_structural());
        assert!(structural.is_structural());
        for x in 0..15 {
            for y in 0..15 {
                assert_eq!(table.mul(x, y), structural.mul(x, y));
                assert_eq!(table.ldiv(x, y), structural.ldiv(x, y));
                assert_eq!(table.rdiv(x, y), structural.rdiv(x, y));
            }
        }
        assert_eq!(structural.name(7), "(x1,x2)");
    }

    #[test]
    fn json_round_trip() {
        let l = FiniteLoop::from_fn(names(4), |a, b| a ^ b).unwrap();
        let json = l.to_json().unwrap();
        let back = FiniteLoop::from_json(&json).unwrap();
        assert_eq!(back.to_json().unwrap(), json);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.starts_with("{\"order\":4,\"elements\":["));
    }
}
