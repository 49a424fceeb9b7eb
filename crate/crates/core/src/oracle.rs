//! Exhaustive reference implementations. No pruning, no cleverness: these
//! are the ground truth the fast paths are tested against. Each carries a
//! hard size guard and reports a resource error instead of running forever.

use crate::gmc::GmcInstance;
use crate::instance::{Assignment, Instance};
use crate::mincut::Graph;
use crate::solver::{SolvePath, SolveResult, SolveStatus};
use crate::subset;
use crate::value::Value;
use crate::{Error, Result};

const VCSP_GUARD: usize = 24;
const SET_GUARD: usize = 20;

fn guard(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::resource(format!(
            "brute-force {what} is limited to {limit} variables, got {n}"
        )));
    }
    Ok(())
}

/// Exhaustive minimum over all assignments. Returns the optimum value and
/// the lexicographically least argmin, or `None` when nothing is feasible.
pub fn brute_vcsp(instance: &Instance) -> Result<(Value, Option<Assignment>)> {
    let n = instance.num_vars();
    guard(n, VCSP_GUARD, "VCSP")?;
    let mut best = Value::infinity();
    let mut arg = None;
    for k in 0..1usize << n {
        let s = Assignment::from_index(k, n);
        let value = instance.evaluate(&s)?;
        if value < best {
            best = value;
            arg = Some(s);
        }
    }
    if best.is_infinite() {
        Ok((Value::infinity(), None))
    } else {
        Ok((best, arg))
    }
}

/// Exhaustive minimum over surjective assignments.
pub fn brute_vcsp_surjective(instance: &Instance) -> Result<SolveResult> {
    let n = instance.num_vars();
    guard(n, VCSP_GUARD, "surjective VCSP")?;
    let mut best = Value::infinity();
    let mut arg: Option<Assignment> = None;
    let mut examined = 0usize;
    for k in 1..(1usize << n) - 1 {
        let s = Assignment::from_index(k, n);
        debug_assert!(s.is_surjective());
        examined += 1;
        let value = instance.evaluate(&s)?;
        if value < best {
            best = value;
            arg = Some(s);
        }
    }
    Ok(match arg {
        Some(s) if best.is_finite() => SolveResult {
            status: SolveStatus::Optimal,
            value: best,
            assignment: Some(s),
            path: SolvePath::BruteForce,
            candidates_examined: examined,
        },
        _ => SolveResult {
            status: SolveStatus::Infeasible,
            value: Value::infinity(),
            assignment: None,
            path: SolvePath::BruteForce,
            candidates_examined: examined,
        },
    })
}

/// All optimal surjective assignments in lexicographic order; empty when
/// the instance is surjectively infeasible.
pub fn brute_vcsp_surjective_all(instance: &Instance) -> Result<Vec<Assignment>> {
    let n = instance.num_vars();
    guard(n, VCSP_GUARD, "surjective VCSP")?;
    let mut best = Value::infinity();
    let mut args = Vec::new();
    for k in 1..(1usize << n) - 1 {
        let s = Assignment::from_index(k, n);
        let value = instance.evaluate(&s)?;
        if value < best {
            best = value;
            args.clear();
        }
        if value == best && value.is_finite() {
            args.push(s);
        }
    }
    Ok(args)
}

/// λ classification plus the matching solution list, exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteGmc {
    /// All solutions with J = 0.
    Zero(Vec<u64>),
    /// The finite positive optimum with all its solutions.
    Finite(Value, Vec<u64>),
    /// Every solution is infinite.
    Infinite,
}

pub fn brute_gmc(j: &GmcInstance) -> Result<BruteGmc> {
    let n = j.vertex_count();
    guard(n, SET_GUARD, "GMC")?;
    if n < 2 {
        return Err(Error::no_solution("no solutions on fewer than two vertices"));
    }
    let mut lambda = Value::infinity();
    for x in subset::proper_nonempty(n) {
        lambda = lambda.min(j.objective(x));
    }
    if lambda.is_infinite() {
        return Ok(BruteGmc::Infinite);
    }
    let mut sols: Vec<u64> = subset::proper_nonempty(n)
        .filter(|x| j.objective(*x) == lambda)
        .collect();
    subset::sort_canonical(&mut sols);
    if lambda.is_zero() {
        Ok(BruteGmc::Zero(sols))
    } else {
        Ok(BruteGmc::Finite(lambda, sols))
    }
}

/// All solutions with J ≤ α·λ, exhaustively; requires a finite positive λ.
pub fn brute_gmc_alpha(j: &GmcInstance, alpha: &Value) -> Result<Vec<u64>> {
    let n = j.vertex_count();
    guard(n, SET_GUARD, "GMC")?;
    let BruteGmc::Finite(lambda, _) = brute_gmc(j)? else {
        return Err(Error::state("alpha-enumeration needs 0 < lambda < inf"));
    };
    let budget = *alpha * lambda;
    let mut sols: Vec<u64> = subset::proper_nonempty(n)
        .filter(|x| j.objective(*x) <= budget)
        .collect();
    subset::sort_canonical(&mut sols);
    Ok(sols)
}

/// Exhaustive surjective maximum; `None` when n < 2.
pub fn brute_max_surjective(instance: &Instance) -> Result<Option<(Value, Assignment)>> {
    let n = instance.num_vars();
    guard(n, VCSP_GUARD, "surjective max-VCSP")?;
    if n < 2 {
        return Ok(None);
    }
    let mut best: Option<(Value, Assignment)> = None;
    for k in 1..(1usize << n) - 1 {
        let s = Assignment::from_index(k, n);
        let value = instance.evaluate(&s)?;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, s));
        }
    }
    Ok(best)
}

/// Exhaustive plain maximum (all assignments allowed).
pub fn brute_max_plain(instance: &Instance) -> Result<(Value, Assignment)> {
    let n = instance.num_vars();
    guard(n, VCSP_GUARD, "max-VCSP")?;
    let mut best: Option<(Value, Assignment)> = None;
    for k in 0..1usize << n {
        let s = Assignment::from_index(k, n);
        let value = instance.evaluate(&s)?;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, s));
        }
    }
    Ok(best.expect("at least one assignment exists"))
}

/// Minimum Hamming weight of a non-zero codeword of the code with parity
/// check matrix rows `rows` (each a length-n 0/1 vector); `None` when only
/// the zero codeword exists.
pub fn brute_min_distance(rows: &[Vec<bool>], n: usize) -> Result<Option<usize>> {
    guard(n, SET_GUARD, "minimum distance")?;
    let row_masks: Vec<u64> = rows
        .iter()
        .map(|r| subset::from_elements(r.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)))
        .collect();
    let mut best: Option<usize> = None;
    for x in 1..1u64 << n {
        if row_masks
            .iter()
            .all(|r| (x & r).count_ones() % 2 == 0)
        {
            let weight = x.count_ones() as usize;
            if best.is_none_or(|b| weight < b) {
                best = Some(weight);
            }
        }
    }
    Ok(best)
}

/// Maximum cut size of the graph under unit edge semantics (every distinct
/// endpoint pair counts once).
pub fn brute_maxcut(graph: &Graph) -> Result<usize> {
    let n = graph.original_vertex_count();
    guard(n, SET_GUARD, "max-cut")?;
    let pairs: Vec<(usize, usize)> = graph
        .original_edges()
        .iter()
        .map(|(u, v, _)| (*u, *v))
        .collect();
    let mut best = 0usize;
    for x in 0..1u64 << n {
        let cut = pairs
            .iter()
            .filter(|(u, v)| subset::contains(x, *u) != subset::contains(x, *v))
            .count();
        best = best.max(cut);
    }
    Ok(best)
}
