//! Static-1 hazard detection and elimination for two-level covers.
//!
//! A static-1 hazard is a pair of adjacent true minterms (differing in one
//! variable) that no single product term covers. Such a pair can glitch low
//! during the transition when gate delays are unequal. The cure is a
//! redundant implicant covering both minterms, preferably the consensus of
//! the two terms that cover the endpoints.

use thiserror::Error;

use crate::sop::{Assignment, Cover, ProductTerm, Variable};

/// Exhaustive minterm enumeration caps out here.
pub const MAX_HAZARD_VARIABLES: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HazardError {
    #[error("cover has {0} variables; hazard analysis enumerates minterms and is capped at {MAX_HAZARD_VARIABLES}")]
    TooManyVariables(usize),
}

/// One detected static-1 hazard: the adjacent true-minterm pair, the toggled
/// variable, and a curing implicant that covers both minterms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hazard {
    pub minterm_a: Assignment,
    pub minterm_b: Assignment,
    pub toggled_variable: Variable,
    pub curing_term: ProductTerm,
}

/// All static-1 hazards of a cover plus the deduplicated curing terms in
/// hazard order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HazardReport {
    pub hazards: Vec<Hazard>,
    pub added_terms: Vec<ProductTerm>,
}

impl HazardReport {
    pub fn is_hazard_free(&self) -> bool {
        self.hazards.is_empty()
    }
}

/// Consensus of two terms: if exactly one variable appears in opposite
/// phases, the conjunction of all remaining literals of both terms;
/// otherwise `None`. Returns `None` as well when the terms share no opposed
/// variable (the consensus rule does not apply).
pub fn consensus(t1: &ProductTerm, t2: &ProductTerm) -> Option<ProductTerm> {
    let mut opposed = None;
    for l1 in t1.literals() {
        if let Some(phase2) = t2.phase(l1.variable) {
            if phase2 != l1.complemented {
                if opposed.is_some() {
                    return None; // two opposed variables
                }
                opposed = Some(l1.variable);
            }
        }
    }
    let opposed = opposed?;
    ProductTerm::from_pairs(
        t1.literals()
            .iter()
            .chain(t2.literals())
            .filter(|l| l.variable != opposed)
            .map(|l| (l.variable, l.complemented)),
    )
}

/// All prime implicants of the cover's function, by iterative cube merging
/// over the true minterms. Deterministic output order (term order key).
pub fn prime_implicants(cover: &Cover) -> Result<Vec<ProductTerm>, HazardError> {
    let n = cover.var_count();
    if n > MAX_HAZARD_VARIABLES {
        return Err(HazardError::TooManyVariables(n));
    }
    // A cube is (mask, value): mask bit set = variable fixed, value gives the
    // phase. Bit k corresponds to variable k (most significant first is
    // irrelevant here; covers_minterm handles display order).
    let full_mask: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut current: Vec<(u32, u32)> = (0..1u32 << n)
        .filter(|&m| cover.eval_minterm(m))
        .map(|m| (full_mask, m))
        .collect();
    let mut primes: Vec<(u32, u32)> = Vec::new();

    while !current.is_empty() {
        let mut merged_flags = vec![false; current.len()];
        let mut next: Vec<(u32, u32)> = Vec::new();
        for i in 0..current.len() {
            for j in (i + 1)..current.len() {
                let (ma, va) = current[i];
                let (mb, vb) = current[j];
                if ma != mb {
                    continue;
                }
                let diff = va ^ vb;
                if diff.count_ones() == 1 && (diff & ma) == diff {
                    merged_flags[i] = true;
                    merged_flags[j] = true;
                    let cube = (ma & !diff, va & !diff);
                    if !next.contains(&cube) {
                        next.push(cube);
                    }
                }
            }
        }
        for (idx, cube) in current.iter().enumerate() {
            if !merged_flags[idx] && !primes.contains(cube) {
                primes.push(*cube);
            }
        }
        current = next;
    }

    let mut terms: Vec<ProductTerm> = primes
        .into_iter()
        .map(|(mask, value)| {
            ProductTerm::from_pairs((0..n).filter_map(|v| {
                let bit = 1u32 << v;
                if mask & bit != 0 {
                    // Variable v is fixed; map cube bit back to display order.
                    Some((n - 1 - v, value & bit == 0))
                } else {
                    None
                }
            }))
            .expect("cube has no contradictory literals")
        })
        .collect();
    terms.sort_by_key(|t| t.order_key());
    terms.dedup();
    Ok(terms)
}

/// Detects every static-1 hazard: one record per unordered pair of adjacent
/// true minterms that no single term covers. The curing term is the best
/// consensus of covering term pairs when one covers both minterms, otherwise
/// the best prime implicant covering both (fewest literals, then term order).
pub fn detect_static1_hazards(cover: &Cover) -> Result<HazardReport, HazardError> {
    let n = cover.var_count();
    if n > MAX_HAZARD_VARIABLES {
        return Err(HazardError::TooManyVariables(n));
    }
    if n == 0 {
        return Ok(HazardReport::default());
    }

    let mut primes: Option<Vec<ProductTerm>> = None;
    let mut hazards = Vec::new();
    let mut added_terms: Vec<ProductTerm> = Vec::new();

    for a in 0..1u32 << n {
        if !cover.eval_minterm(a) {
            continue;
        }
        for bit in 0..n {
            let var = n - 1 - bit;
            let b = a ^ (1u32 << bit);
            if b <= a || !cover.eval_minterm(b) {
                continue;
            }
            let jointly_covered = cover
                .terms()
                .iter()
                .any(|t| t.covers_minterm(a, n) && t.covers_minterm(b, n));
            if jointly_covered {
                continue;
            }

            let cure = best_consensus_cure(cover, a, b).map(Ok).unwrap_or_else(|| {
                if primes.is_none() {
                    primes = Some(prime_implicants(cover)?);
                }
                Ok(best_prime_cure(primes.as_ref().unwrap(), a, b, n))
            })?;

            if !added_terms.contains(&cure) {
                added_terms.push(cure.clone());
            }
            hazards.push(Hazard {
                minterm_a: Assignment::from_index(a, n),
                minterm_b: Assignment::from_index(b, n),
                toggled_variable: cover.variables()[var].clone(),
                curing_term: cure,
            });
        }
    }
    Ok(HazardReport {
        hazards,
        added_terms,
    })
}

/// Best consensus over pairs of terms covering the two endpoints, restricted
/// to consensus terms that cover both minterms. Ties break on fewest
/// literals then term order.
fn best_consensus_cure(cover: &Cover, a: u32, b: u32) -> Option<ProductTerm> {
    let n = cover.var_count();
    let mut best: Option<ProductTerm> = None;
    for t1 in cover.terms().iter().filter(|t| t.covers_minterm(a, n)) {
        for t2 in cover.terms().iter().filter(|t| t.covers_minterm(b, n)) {
            if let Some(c) = consensus(t1, t2) {
                if c.covers_minterm(a, n) && c.covers_minterm(b, n) {
                    match &best {
                        Some(cur) if cur.order_key() <= c.order_key() => {}
                        _ => best = Some(c),
                    }
                }
            }
        }
    }
    best
}

fn best_prime_cure(primes: &[ProductTerm], a: u32, b: u32, n: usize) -> ProductTerm {
    primes
        .iter()
        .filter(|p| p.covers_minterm(a, n) && p.covers_minterm(b, n))
        .min_by_key(|p| p.order_key())
        .cloned()
        .expect("the pair cube extends to a prime implicant")
}

/// Adds redundant prime implicants until no static-1 hazard remains.
///
/// Selection is greedy by the number of hazards cured, ties broken by fewest
/// literals then term order, which makes the result deterministic. The
/// returned cover is truth-table-equivalent to the input; already
/// hazard-free covers come back unchanged.
pub fn eliminate_hazards(cover: &Cover) -> Result<Cover, HazardError> {
    let n = cover.var_count();
    if n > MAX_HAZARD_VARIABLES {
        return Err(HazardError::TooManyVariables(n));
    }

    let mut terms = cover.terms().to_vec();
    let mut work = cover.clone();
    let mut primes: Option<Vec<ProductTerm>> = None;

    loop {
        let report = detect_static1_hazards(&work)?;
        if report.hazards.is_empty() {
            return Ok(cover.with_terms(terms));
        }
        if primes.is_none() {
            primes = Some(prime_implicants(cover)?);
        }
        let candidates: Vec<&ProductTerm> = primes
            .as_ref()
            .unwrap()
            .iter()
            .filter(|p| !terms.contains(p))
            .collect();

        let pairs: Vec<(u32, u32)> = report
            .hazards
            .iter()
            .map(|h| (h.minterm_a.to_index(), h.minterm_b.to_index()))
            .collect();
        let best = candidates
            .iter()
            .map(|p| {
                let cured = pairs
                    .iter()
                    .filter(|&&(a, b)| p.covers_minterm(a, n) && p.covers_minterm(b, n))
                    .count();
                (cured, p)
            })
            .filter(|(cured, _)| *cured > 0)
            .min_by(|(ca, pa), (cb, pb)| {
                cb.cmp(ca).then_with(|| pa.order_key().cmp(&pb.order_key()))
            })
            .map(|(_, p)| (*p).clone())
            .expect("some prime implicant cures at least one hazard");

        terms.push(best.clone());
        work = work.with_terms(terms.clone());
    }
}
