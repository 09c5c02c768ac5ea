//! Combinatorics of boundary index sets: pair classification, the
//! two compatibility conditions on an ordered system of sections, and
//! the step-by-step transformation that retires one section at a time
//! while the conditions must keep holding.
//!
//! Index sets are subsets of {1, ..., n-1} of size between 1 and n-4,
//! stored as bitmasks.  Two sets are nested (their sections agree),
//! complementary (their union is everything, leaving a three-way split
//! A, B, C), or non-intersecting.  A system is compatible when every
//! complementary pair's subset family K (the nonempty subsets of A)
//! sits strictly earlier in the processing order, and every pairwise
//! intersecting triple contains a nested pair.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundaryError {
    #[error("need 5 <= n <= 16 for exhaustive enumeration, got {0}")]
    BadN(usize),
    #[error("an index set for n = {n} needs between 1 and {} elements, got {size}", n - 4)]
    BadSize { n: usize, size: usize },
    #[error("element {element} outside 1..={}", n - 1)]
    BadElement { n: usize, element: usize },
    #[error("the sets live over different n: {0} and {1}")]
    MismatchedN(usize, usize),
    #[error("the two sets are equal")]
    EqualSets,
    #[error("the system for n = {n} is not compatible: {detail}")]
    PreconditionFailed { n: usize, detail: String },
    #[error("step {step}: {detail}")]
    InvariantViolated { step: usize, detail: String },
}

/// A subset of {1, ..., n-1} with 1 <= |I| <= n-4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n: usize,
    mask: u32,
}

impl IndexSet {
    pub fn new(n: usize, elems: &[usize]) -> Result<IndexSet, BoundaryError> {
        if !(5..=16).contains(&n) {
            return Err(BoundaryError::BadN(n));
        }
        let mut mask = 0u32;
        for &e in elems {
            if !(1..=n - 1).contains(&e) {
                return Err(BoundaryError::BadElement { n, element: e });
            }
            mask |= 1 << (e - 1);
        }
        IndexSet::from_mask(n, mask)
    }

    pub fn from_mask(n: usize, mask: u32) -> Result<IndexSet, BoundaryError> {
        if !(5..=16).contains(&n) {
            return Err(BoundaryError::BadN(n));
        }
        let size = mask.count_ones() as usize;
        if size == 0 || size > n - 4 {
            return Err(BoundaryError::BadSize { n, size });
        }
        if mask >> (n - 1) != 0 {
            return Err(BoundaryError::BadElement {
                n,
                element: 32 - mask.leading_zeros() as usize,
            });
        }
        Ok(IndexSet { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, element: usize) -> bool {
        (1..self.n).contains(&element) && self.mask >> (element - 1) & 1 == 1
    }

    pub fn elems(&self) -> Vec<usize> {
        (1..self.n).filter(|&e| self.mask >> (e - 1) & 1 == 1).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.elems().iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", body.join(", "))
    }
}

fn mask_elems(n: usize, mask: u32) -> BTreeSet<usize> {
    (1..n).filter(|&e| mask >> (e - 1) & 1 == 1).collect()
}

/// How two distinct boundary index sets meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairClass {
    /// One set contains the other; the sections agree.
    NestedAgree,
    /// The union is all of {1, ..., n-1}; the split is
    /// A = I intersect J, B = I minus J, C = J minus I.
    Complementary { a: BTreeSet<usize>, b: BTreeSet<usize>, c: BTreeSet<usize> },
    /// The boundary strata are disjoint.
    NoIntersection,
}

/// Classifies a pair of distinct index sets over the same n.
pub fn classify_pair(i: &IndexSet, j: &IndexSet) -> Result<PairClass, BoundaryError> {
    if i.n != j.n {
        return Err(BoundaryError::MismatchedN(i.n, j.n));
    }
    if i.mask == j.mask {
        return Err(BoundaryError::EqualSets);
    }
    let n = i.n;
    if i.mask & j.mask == i.mask || i.mask & j.mask == j.mask {
        return Ok(PairClass::NestedAgree);
    }
    let full: u32 = (1 << (n - 1)) - 1;
    if i.mask | j.mask == full {
        return Ok(PairClass::Complementary {
            a: mask_elems(n, i.mask & j.mask),
            b: mask_elems(n, i.mask & !j.mask),
            c: mask_elems(n, j.mask & !i.mask),
        });
    }
    Ok(PairClass::NoIntersection)
}

/// All index sets for n in processing order: increasing size, then
/// lexicographic on the sorted element lists.
pub fn canonical_sections(n: usize) -> Result<Vec<IndexSet>, BoundaryError> {
    if !(5..=16).contains(&n) {
        return Err(BoundaryError::BadN(n));
    }
    let mut sections = Vec::new();
    let mut current = Vec::new();
    for size in 1..=n - 4 {
        lex_combinations(1, n - 1, size, &mut current, &mut sections);
    }
    Ok(sections)
}

fn lex_combinations(
    from: usize,
    max: usize,
    remaining: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<IndexSet>,
) {
    if remaining == 0 {
        let n = max + 1;
        out.push(IndexSet::new(n, current).expect("enumerated sets are valid"));
        return;
    }
    for e in from..=max + 1 - remaining {
        current.push(e);
        lex_combinations(e + 1, max, remaining - 1, current, out);
        current.pop();
    }
}

/// Nonempty submasks of `mask`, in no particular order.
fn nonempty_submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut sub = mask;
    while sub != 0 {
        out.push(sub);
        sub = (sub - 1) & mask;
    }
    out
}

/// Outcome of checking the two compatibility conditions on the full
/// canonical system for n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemReport {
    pub n: usize,
    pub sections: usize,
    pub complementary_pairs: usize,
    /// Complementary pairs whose overlap A is nonempty, so K is too.
    pub nonempty_k_pairs: usize,
    /// Every member of every K precedes both paired sections, with the
    /// nested agreements in place.
    pub condition1: bool,
    /// Every pairwise intersecting triple contains a nested pair.
    pub condition2: bool,
    /// A violating triple when condition 2 fails.
    pub violation: Option<[IndexSet; 3]>,
}

impl SystemReport {
    pub fn pass(&self) -> bool {
        self.condition1 && self.condition2
    }
}

struct PairTable {
    /// Complementary pairs (i, j) with i < j and the mask of A.
    comp: Vec<(usize, usize, u32)>,
    /// Adjacency bitsets of the complementary-pair graph.
    adj: Vec<Vec<u64>>,
    /// Section position by mask.
    words: usize,
}

fn pair_table(sections: &[IndexSet]) -> Result<PairTable, BoundaryError> {
    let count = sections.len();
    let words = count.div_ceil(64);
    let mut comp = Vec::new();
    let mut adj = vec![vec![0u64; words]; count];
    for i in 0..count {
        for j in i + 1..count {
            match classify_pair(&sections[i], &sections[j])? {
                PairClass::Complementary { .. } => {
                    let a = sections[i].mask & sections[j].mask;
                    comp.push((i, j, a));
                    adj[i][j / 64] |= 1 << (j % 64);
                    adj[j][i / 64] |= 1 << (i % 64);
                }
                PairClass::NestedAgree | PairClass::NoIntersection => {}
            }
        }
    }
    Ok(PairTable { comp, adj, words })
}

/// A triangle in the complementary-pair graph restricted to the
/// vertices marked live, if any: that is a pairwise intersecting
/// triple with no nested pair.
fn find_triangle(table: &PairTable, live: &[u64]) -> Option<[usize; 3]> {
    for &(i, j, _) in &table.comp {
        if live[i / 64] >> (i % 64) & 1 == 0 || live[j / 64] >> (j % 64) & 1 == 0 {
            continue;
        }
        for w in 0..table.words {
            let both = table.adj[i][w] & table.adj[j][w] & live[w];
            if both != 0 {
                let k = w * 64 + both.trailing_zeros() as usize;
                return Some([i, j, k]);
            }
        }
    }
    None
}

/// Checks the two conditions on the full canonical system.
pub fn compatible_system_check(n: usize) -> Result<SystemReport, BoundaryError> {
    let sections = canonical_sections(n)?;
    let table = pair_table(&sections)?;
    let position = |mask: u32| sections.iter().position(|s| s.mask == mask);

    let mut condition1 = true;
    let mut nonempty_k = 0usize;
    for &(i, j, a) in &table.comp {
        if a == 0 {
            continue;
        }
        nonempty_k += 1;
        for k in nonempty_submasks(a) {
            let Some(p) = position(k) else {
                condition1 = false;
                continue;
            };
            let set = &sections[p];
            let agrees = |other: &IndexSet| {
                matches!(classify_pair(set, other), Ok(PairClass::NestedAgree))
            };
            if p >= i || p >= j || !agrees(&sections[i]) || !agrees(&sections[j]) {
                condition1 = false;
            }
        }
    }

    let live = vec![u64::MAX; table.words];
    let violation = find_triangle(&table, &live)
        .map(|[i, j, k]| [sections[i], sections[j], sections[k]]);
    Ok(SystemReport {
        n,
        sections: sections.len(),
        complementary_pairs: table.comp.len(),
        nonempty_k_pairs: nonempty_k,
        condition1,
        condition2: violation.is_none(),
        violation,
    })
}

/// One retirement step of the transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformStep {
    pub section: IndexSet,
    /// Pairs of still-active sections that dropped this section from
    /// their subset family K.
    pub removals: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformReport {
    pub n: usize,
    pub steps: Vec<TransformStep>,
    pub removal_events: usize,
}

/// Retires the sections one by one in the given order, maintaining the
/// live subset families and re-checking both compatibility conditions
/// on the remaining sections after every step.  Any violation is an
/// error carrying the step index; on a compatible system in canonical
/// order this must never happen.
pub fn run_transform(sections: &[IndexSet]) -> Result<TransformReport, BoundaryError> {
    let count = sections.len();
    if count == 0 {
        return Err(BoundaryError::InvariantViolated {
            step: 0,
            detail: "no sections to process".into(),
        });
    }
    let n = sections[0].n;
    for s in sections {
        if s.n != n {
            return Err(BoundaryError::MismatchedN(n, s.n));
        }
    }
    let table = pair_table(sections)?;
    let words = table.words;

    // Live subset families, one per complementary pair.
    let mut families: Vec<BTreeSet<u32>> = table
        .comp
        .iter()
        .map(|&(_, _, a)| nonempty_submasks(a).into_iter().collect())
        .collect();
    let position = |mask: u32| sections.iter().position(|s| s.mask == mask);

    let verify = |families: &[BTreeSet<u32>], processed: usize| -> Result<(), BoundaryError> {
        // Condition 1 on the remaining pairs: every live K member is an
        // unprocessed section preceding both ends, nested in each.
        for (&(i, j, _), family) in table.comp.iter().zip(families) {
            if i < processed || j < processed {
                continue;
            }
            for &k in family {
                let Some(p) = position(k) else {
                    return Err(BoundaryError::InvariantViolated {
                        step: processed,
                        detail: format!(
                            "subset {} of the overlap of {} and {} is not a section",
                            IndexSet::from_mask(n, k).map(|s| s.to_string()).unwrap_or_default(),
                            sections[i],
                            sections[j]
                        ),
                    });
                };
                let nested = |other: &IndexSet| {
                    matches!(classify_pair(&sections[p], other), Ok(PairClass::NestedAgree))
                };
                if p < processed || p >= i || p >= j {
                    return Err(BoundaryError::InvariantViolated {
                        step: processed,
                        detail: format!(
                            "section {} sits at position {p}, outside ({processed}, {})",
                            sections[p],
                            i.min(j)
                        ),
                    });
                }
                if !nested(&sections[i]) || !nested(&sections[j]) {
                    return Err(BoundaryError::InvariantViolated {
                        step: processed,
                        detail: format!("section {} does not agree with both ends", sections[p]),
                    });
                }
            }
        }
        // Condition 2 on the remaining sections.
        let mut live = vec![0u64; words];
        for v in processed..count {
            live[v / 64] |= 1 << (v % 64);
        }
        if let Some([i, j, k]) = find_triangle(&table, &live) {
            return Err(BoundaryError::InvariantViolated {
                step: processed,
                detail: format!(
                    "sections {}, {}, {} pairwise intersect with no agreement",
                    sections[i], sections[j], sections[k]
                ),
            });
        }
        Ok(())
    };

    verify(&families, 0)?;
    let mut steps = Vec::with_capacity(count);
    let mut removal_events = 0usize;
    for t in 0..count {
        let mask = sections[t].mask;
        let mut removals = 0usize;
        for (&(i, j, _), family) in table.comp.iter().zip(families.iter_mut()) {
            if i > t && j > t && family.remove(&mask) {
                removals += 1;
            }
        }
        removal_events += removals;
        verify(&families, t + 1)?;
        steps.push(TransformStep { section: sections[t], removals });
    }
    Ok(TransformReport { n, steps, removal_events })
}

/// Checks compatibility of the canonical system for n and, when it
/// holds, runs the full transformation.
pub fn transform_sequence(n: usize) -> Result<TransformReport, BoundaryError> {
    let report = compatible_system_check(n)?;
    if !report.pass() {
        let detail = match &report.violation {
            Some([a, b, c]) => format!("triple {a}, {b}, {c} has no nested pair"),
            None => "ordering condition fails".into(),
        };
        return Err(BoundaryError::PreconditionFailed { n, detail });
    }
    run_transform(&canonical_sections(n)?)
}
