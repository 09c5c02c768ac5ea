//! The Losev-Manin ray family in rank n-3, marked partitions of the
//! index set, and the verified rank-2 quotients that carry a weighted
//! projective plane.
//!
//! The lattice convention throughout: e_1, ..., e_{n-3} is the standard
//! basis and e_{n-2} denotes -(e_1 + ... + e_{n-3}), so the n-2 symbols
//! sum to zero.  Rays are primitive parts of partial sums over proper
//! nonempty index subsets, which makes the family closed under
//! negation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactmath::{snf, IntMatrix};
use crate::fan::{make_fan, Fan, FanError, Ray};

mod chain;

pub use chain::{build_chain, default_kernels, surface_fan, ChainReport, ChainStep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LmError {
    #[error("need n >= 5, got {0}")]
    SmallN(usize),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("quotient property {property} fails: {detail}")]
    Degenerate { property: u8, detail: String },
    #[error("step {step}: kernel vector does not reach a current ray: {detail}")]
    KernelNotRay { step: usize, detail: String },
    #[error("a chain down to rank 2 needs {expected} kernel vectors, got {got}")]
    WrongKernelCount { expected: usize, got: usize },
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// The basis symbol e_i as a concrete vector in Z^dim, where
/// i = dim + 1 stands for minus the all-ones vector.
fn symbol_vector(i: usize, dim: usize) -> Vec<BigInt> {
    assert!((1..=dim + 1).contains(&i), "symbol index in range");
    if i <= dim {
        let mut v = vec![BigInt::zero(); dim];
        v[i - 1] = BigInt::one();
        v
    } else {
        vec![-BigInt::one(); dim]
    }
}

fn add_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// The primitive partial sums over proper nonempty subsets of the n-2
/// summing-to-zero symbols, deduplicated and sorted; there are
/// 2^(n-2) - 2 of them and they come in opposite pairs.
pub fn lm_rays(n: usize) -> Result<Vec<Ray>, LmError> {
    if n < 5 {
        return Err(LmError::SmallN(n));
    }
    let dim = n - 3;
    let symbols = n - 2;
    let full: u64 = (1 << symbols) - 1;
    let mut set = BTreeSet::new();
    for mask in 1..full {
        let mut v = vec![BigInt::zero(); dim];
        for i in 1..=symbols {
            if mask >> (i - 1) & 1 == 1 {
                v = add_vec(&v, &symbol_vector(i, dim));
            }
        }
        set.insert(Ray::primitive(v)?);
    }
    assert_eq!(set.len() as u64, full - 1, "subsets give pairwise distinct rays");
    Ok(set.into_iter().collect())
}

/// A partition of {1, ..., n-2} into three marked blocks of sizes
/// a+2, b+2, c+2 with a, b, c >= 1.
///
/// The weights need not be pairwise coprime; `is_coprime` reports
/// whether they are, and only in that case are the quotient images
/// guaranteed primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LmPartition {
    n: usize,
    sets: [BTreeSet<usize>; 3],
    marks: [usize; 3],
}

impl LmPartition {
    pub fn new(n: usize, sets: [&[usize]; 3], marks: [usize; 3]) -> Result<LmPartition, LmError> {
        if n < 11 {
            return Err(LmError::BadPartition(format!("need n >= 11, got {n}")));
        }
        let sets: [BTreeSet<usize>; 3] = sets.map(|s| s.iter().copied().collect());
        let mut union = BTreeSet::new();
        for (k, s) in sets.iter().enumerate() {
            if s.len() < 3 {
                return Err(LmError::BadPartition(format!(
                    "block {} has {} elements, need at least 3",
                    k + 1,
                    s.len()
                )));
            }
            for &x in s {
                if !(1..=n - 2).contains(&x) {
                    return Err(LmError::BadPartition(format!("element {x} outside 1..={}", n - 2)));
                }
                if !union.insert(x) {
                    return Err(LmError::BadPartition(format!("element {x} appears twice")));
                }
            }
        }
        if union.len() != n - 2 {
            return Err(LmError::BadPartition(format!(
                "blocks cover {} of the {} elements",
                union.len(),
                n - 2
            )));
        }
        for k in 0..3 {
            if !sets[k].contains(&marks[k]) {
                return Err(LmError::BadPartition(format!(
                    "mark {} is not in block {}",
                    marks[k],
                    k + 1
                )));
            }
        }
        Ok(LmPartition { n, sets, marks })
    }

    /// Contiguous blocks of sizes a+2, b+2, c+2 with each block marked
    /// at its smallest element; n = a + b + c + 8.
    pub fn contiguous(a: usize, b: usize, c: usize) -> Result<LmPartition, LmError> {
        if a == 0 || b == 0 || c == 0 {
            return Err(LmError::BadPartition("weights must be positive".into()));
        }
        let n = a + b + c + 8;
        let s1: Vec<usize> = (1..=a + 2).collect();
        let s2: Vec<usize> = (a + 3..=a + b + 4).collect();
        let s3: Vec<usize> = (a + b + 5..=n - 2).collect();
        LmPartition::new(n, [&s1, &s2, &s3], [s1[0], s2[0], s3[0]])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> [usize; 3] {
        [self.sets[0].len() - 2, self.sets[1].len() - 2, self.sets[2].len() - 2]
    }

    pub fn marks(&self) -> [usize; 3] {
        self.marks
    }

    pub fn is_coprime(&self) -> bool {
        let [a, b, c] = self.weights();
        a.gcd(&b) == 1 && a.gcd(&c) == 1 && b.gcd(&c) == 1
    }
}

/// The verified data of the rank-2 quotient attached to a marked
/// partition: the sublattice generators, the projection to Z^2, and
/// the images of the three marked symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientData {
    /// The n-5 generators, each of length n-3.
    pub generators: Vec<Vec<BigInt>>,
    /// Two integer rows of length n-3; the quotient map.
    pub projection: Vec<Vec<BigInt>>,
    /// Images of the marked symbols under the projection.
    pub images: [Vec<BigInt>; 3],
    pub weights: [usize; 3],
}

impl QuotientData {
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.projection
            .iter()
            .map(|row| row.iter().zip(v).map(|(r, x)| r * x).sum())
            .collect()
    }
}

fn cross2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Builds the sublattice spanned by e_mark + e_r over the unmarked
/// block elements, extracts the rank-2 quotient by Smith reduction,
/// and verifies the three defining properties:
///
/// 1. the quotient is torsion-free of rank 2 (all n-5 divisors are 1);
/// 2. the images of the marked symbols generate Z^2;
/// 3. a v1 + b v2 + c v3 = 0.
///
/// Pairwise independence of the images is always asserted; primitivity
/// only under pairwise coprime weights.
pub fn quotient_data(part: &LmPartition) -> Result<QuotientData, LmError> {
    let n = part.n;
    let dim = n - 3;
    let mut generators = Vec::new();
    for k in 0..3 {
        let mark = symbol_vector(part.marks[k], dim);
        for &r in &part.sets[k] {
            if r != part.marks[k] {
                generators.push(add_vec(&mark, &symbol_vector(r, dim)));
            }
        }
    }
    assert_eq!(generators.len(), n - 5, "two free symbols per block are spent on marks");

    // Columns are the generators; the last two rows of U then express
    // the quotient in coordinates.
    let mut a = IntMatrix::zero(dim, n - 5);
    for (j, g) in generators.iter().enumerate() {
        for (i, x) in g.iter().enumerate() {
            a.set(i, j, x.clone());
        }
    }
    let s = snf(&a);
    debug_assert!(s.verify(&a));
    let divisors = s.divisors();
    if s.rank() != n - 5 || divisors.iter().any(|d| !d.is_one()) {
        return Err(LmError::Degenerate {
            property: 1,
            detail: format!("rank {} of {}, divisors {:?}", s.rank(), n - 5, divisors),
        });
    }
    let projection = vec![s.u.row(dim - 2).to_vec(), s.u.row(dim - 1).to_vec()];
    let data = QuotientData {
        generators,
        projection,
        images: [
            Vec::new(), // filled below
            Vec::new(),
            Vec::new(),
        ],
        weights: part.weights(),
    };
    let images: [Vec<BigInt>; 3] =
        part.marks.map(|m| data.apply(&symbol_vector(m, dim)));
    let data = QuotientData { images, ..data };

    let minors = [
        cross2(&data.images[0], &data.images[1]),
        cross2(&data.images[0], &data.images[2]),
        cross2(&data.images[1], &data.images[2]),
    ];
    let minor_gcd = minors.iter().fold(BigInt::zero(), |acc, m| acc.gcd(m));
    if !minor_gcd.is_one() {
        return Err(LmError::Degenerate {
            property: 2,
            detail: format!("images span index {minor_gcd} in the quotient"),
        });
    }
    let [a_w, b_w, c_w] = data.weights.map(BigInt::from);
    for coord in 0..2 {
        let s = &a_w * &data.images[0][coord]
            + &b_w * &data.images[1][coord]
            + &c_w * &data.images[2][coord];
        if !s.is_zero() {
            return Err(LmError::Degenerate {
                property: 3,
                detail: format!("weighted image sum has coordinate {s}"),
            });
        }
    }
    assert!(minors.iter().all(|m| !m.is_zero()), "marked images are pairwise independent");
    if part.is_coprime() {
        for v in &data.images {
            let content = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            assert!(content.is_one(), "coprime weights force primitive images");
        }
    }
    Ok(data)
}

/// The complete rank-2 fan on the three quotient images; this is the
/// fan of the weighted projective plane P(a,b,c) when the weights are
/// pairwise coprime.  Fails when an image is not primitive.
pub fn wps_fan(data: &QuotientData) -> Result<Fan, LmError> {
    let rays: Result<Vec<Ray>, FanError> =
        data.images.iter().map(|v| Ray::new(v.clone())).collect();
    let fan = make_fan(2, rays?, vec![vec![0, 1], vec![0, 2], vec![1, 2]], u64::MAX)?;
    assert!(fan.is_complete()?, "three pairwise independent rays with a null relation");
    Ok(fan)
}
