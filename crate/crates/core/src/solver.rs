//! End-to-end surjective solving and enumeration.
//!
//! Instances over EDS (or label-flipped EDS) languages go through the
//! generalised min-cut pipeline: normalise every relation to minimum 0,
//! approximate the instance by a GMC instance, classify λ, and either read
//! the answer off a zero-objective solution or score the α-optimal
//! candidates. Everything else falls back to guarded brute force.

use std::collections::BTreeMap;

use crate::boolop::BoolOp;
use crate::classify::{
    admits_polymorphism, classify_language, is_eds_relation, min_alpha_eds, TractableReason,
};
use crate::edsapprox::{approx_strong, instance_gmc, set_function_of, ApproxCertificate};
use crate::gmc::LambdaClass;
use crate::instance::{Assignment, Instance};
use crate::oracle;
use crate::relation::{Language, Relation};
use crate::value::Value;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

/// Which pipeline produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvePath {
    EdsLambdaZero,
    EdsLambdaFinite,
    NegEds,
    BruteForce,
}

impl SolvePath {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolvePath::EdsLambdaZero => "eds_lambda_zero",
            SolvePath::EdsLambdaFinite => "eds_lambda_finite",
            SolvePath::NegEds => "neg_eds",
            SolvePath::BruteForce => "brute_force",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub value: Value,
    pub assignment: Option<Assignment>,
    pub path: SolvePath,
    pub candidates_examined: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Auto,
    Eds,
    Brute,
}

/// The distinct relations of an instance as a language with synthetic
/// names, for classification.
fn instance_language(instance: &Instance) -> Language {
    let mut seen: BTreeMap<Vec<Value>, usize> = BTreeMap::new();
    let mut lang = Language::new();
    for c in instance.constraints() {
        let key = c.relation.table().to_vec();
        let next = seen.len();
        if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(key) {
            e.insert(next);
            lang.insert(format!("r{next:03}"), c.relation.clone());
        }
    }
    lang
}

fn infeasible(path: SolvePath) -> SolveResult {
    SolveResult {
        status: SolveStatus::Infeasible,
        value: Value::infinity(),
        assignment: None,
        path,
        candidates_examined: 0,
    }
}

/// Per-constraint strong certificates, cached by relation table.
fn build_certificates(instance: &Instance) -> Result<Vec<ApproxCertificate>> {
    let mut cache: BTreeMap<Vec<Value>, ApproxCertificate> = BTreeMap::new();
    let mut certs = Vec::with_capacity(instance.constraints().len());
    for c in instance.constraints() {
        let key = c.relation.table().to_vec();
        if let Some(cert) = cache.get(&key) {
            certs.push(cert.clone());
            continue;
        }
        let alpha = min_alpha_eds(&c.relation)
            .ok_or_else(|| Error::argument("constraint relation is not EDS"))?;
        let gamma = set_function_of(&c.relation)?;
        let cert = approx_strong(&gamma, &alpha)?;
        cache.insert(key, cert.clone());
        certs.push(cert);
    }
    Ok(certs)
}

/// The EDS pipeline on an instance already known (or required) to be EDS.
/// `flipped` marks that the caller label-flipped the instance first.
fn solve_eds(instance: &Instance, flipped: bool) -> Result<SolveResult> {
    let final_path = |p: SolvePath| if flipped { SolvePath::NegEds } else { p };
    for c in instance.constraints() {
        if !is_eds_relation(&c.relation) {
            return Err(Error::argument("instance language is not EDS"));
        }
    }
    if instance
        .constraints()
        .iter()
        .any(|c| c.relation.feas().is_empty())
    {
        // A constraint with no finite value poisons every assignment.
        return Ok(infeasible(final_path(SolvePath::EdsLambdaFinite)));
    }
    let certs = build_certificates(instance)?;
    let (gmc, alpha_app) = instance_gmc(instance, &certs)?;
    if gmc.vertex_count() < 2 {
        // Infinite edges forced all variables equal; only the two
        // non-surjective assignments could be feasible.
        return Ok(infeasible(final_path(SolvePath::EdsLambdaFinite)));
    }
    match gmc.classify_lambda()? {
        LambdaClass::Infinite => Ok(infeasible(final_path(SolvePath::EdsLambdaFinite))),
        LambdaClass::Zero(witness) => {
            let mask = gmc.expand_to_original(witness);
            let mut s = Assignment::from_mask(mask, instance.num_vars());
            let value = instance.evaluate(&s)?;
            debug_assert!(s.is_surjective());
            if flipped {
                s = s.negate();
            }
            Ok(SolveResult {
                status: SolveStatus::Optimal,
                value,
                assignment: Some(s),
                path: final_path(SolvePath::EdsLambdaZero),
                candidates_examined: 1,
            })
        }
        LambdaClass::Finite(_) => {
            let candidates = gmc.enumerate_alpha_optimal(&alpha_app)?;
            let examined = candidates.len();
            let mut best: Option<(Value, Assignment)> = None;
            for c in candidates {
                let mask = gmc.expand_to_original(c);
                let s = Assignment::from_mask(mask, instance.num_vars());
                let value = instance.evaluate(&s)?;
                if !value.is_finite() {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((bv, bs)) => value < *bv || (value == *bv && s < *bs),
                };
                if better {
                    best = Some((value, s));
                }
            }
            match best {
                None => Ok(infeasible(final_path(SolvePath::EdsLambdaFinite))),
                Some((value, s)) => Ok(SolveResult {
                    status: SolveStatus::Optimal,
                    value,
                    assignment: Some(if flipped { s.negate() } else { s }),
                    path: final_path(SolvePath::EdsLambdaFinite),
                    candidates_examined: examined,
                }),
            }
        }
    }
}

/// Finds an optimal surjective assignment. `Auto` routes through the
/// classifier: the EDS pipeline for EDS languages, the same pipeline on
/// the label-flipped instance for NegEDS ones, guarded brute force for
/// everything else. `Eds` insists on the EDS pipeline and fails on
/// non-EDS input; `Brute` always enumerates.
pub fn solve_surjective(instance: &Instance, mode: SolveMode) -> Result<SolveResult> {
    if instance.num_vars() < 2 {
        return Ok(infeasible(SolvePath::BruteForce));
    }
    match mode {
        SolveMode::Brute => oracle::brute_vcsp_surjective(instance),
        SolveMode::Eds => solve_eds(instance, false),
        SolveMode::Auto => {
            let lang = instance_language(instance);
            match classify_language(&lang).reason() {
                Some(TractableReason::Eds) => solve_eds(instance, false),
                Some(TractableReason::NegEds) => solve_eds(&instance.negate_labels(), true),
                _ => oracle::brute_vcsp_surjective(instance),
            }
        }
    }
}

/// Stream of optimal surjective assignments.
pub struct OptimalAssignments {
    inner: StreamInner,
}

enum StreamInner {
    Empty,
    Prepared(std::vec::IntoIter<Assignment>),
    /// Lazy λ = 0 stream: satisfying assignments of the Opt-rewritten
    /// min-closed CSP, minus the two non-surjective ones.
    MinClosed {
        iter: MinClosedEnumerator,
        flip: bool,
    },
}

impl Iterator for OptimalAssignments {
    type Item = Assignment;
    fn next(&mut self) -> Option<Assignment> {
        match &mut self.inner {
            StreamInner::Empty => None,
            StreamInner::Prepared(it) => it.next(),
            StreamInner::MinClosed { iter, flip } => loop {
                let s = iter.next()?;
                if !s.is_surjective() {
                    continue;
                }
                return Some(if *flip { s.negate() } else { s });
            },
        }
    }
}

impl OptimalAssignments {
    fn empty() -> Self {
        OptimalAssignments {
            inner: StreamInner::Empty,
        }
    }

    fn prepared(mut items: Vec<Assignment>) -> Self {
        items.sort();
        items.dedup();
        OptimalAssignments {
            inner: StreamInner::Prepared(items.into_iter()),
        }
    }
}

fn enumerate_eds(instance: &Instance, flipped: bool) -> Result<OptimalAssignments> {
    for c in instance.constraints() {
        if !is_eds_relation(&c.relation) {
            return Err(Error::argument("instance language is not EDS"));
        }
    }
    if instance
        .constraints()
        .iter()
        .any(|c| c.relation.feas().is_empty())
    {
        return Ok(OptimalAssignments::empty());
    }
    let certs = build_certificates(instance)?;
    let (gmc, alpha_app) = instance_gmc(instance, &certs)?;
    if gmc.vertex_count() < 2 {
        return Ok(OptimalAssignments::empty());
    }
    match gmc.classify_lambda()? {
        LambdaClass::Infinite => Ok(OptimalAssignments::empty()),
        LambdaClass::Zero(_) => {
            // Optimal surjective assignments incur the minimum possible
            // contribution from every constraint: the Opt relation for a
            // positive weight, the Feas relation for weight 0 (where any
            // finite value already contributes 0). Both are min-closed for
            // EDS relations, so the satisfying assignments stream lazily.
            let mut crisp = Instance::new(instance.num_vars())?;
            for c in instance.constraints() {
                let rewrite = if c.weight.is_zero() {
                    c.relation.feas()
                } else {
                    c.relation.opt()
                };
                crisp.add_constraint(
                    Value::one(),
                    crate::relation::WeightedRelation::crisp(&rewrite),
                    c.scope.clone(),
                )?;
            }
            let iter = min_closed_enumerate(&crisp)?;
            Ok(OptimalAssignments {
                inner: StreamInner::MinClosed {
                    iter,
                    flip: flipped,
                },
            })
        }
        LambdaClass::Finite(_) => {
            let candidates = gmc.enumerate_alpha_optimal(&alpha_app)?;
            let mut best = Value::infinity();
            let mut scored = Vec::new();
            for c in candidates {
                let mask = gmc.expand_to_original(c);
                let s = Assignment::from_mask(mask, instance.num_vars());
                let value = instance.evaluate(&s)?;
                best = best.min(value);
                scored.push((value, s));
            }
            if best.is_infinite() {
                return Ok(OptimalAssignments::empty());
            }
            let optimal: Vec<Assignment> = scored
                .into_iter()
                .filter(|(v, _)| *v == best)
                .map(|(_, s)| if flipped { s.negate() } else { s })
                .collect();
            Ok(OptimalAssignments::prepared(optimal))
        }
    }
}

/// Emits exactly the optimal surjective assignments, without duplicates,
/// in a deterministic order. EDS and NegEDS languages stream through the
/// GMC pipeline (the λ = 0 case lazily); other languages fall back to the
/// guarded brute-force oracle.
pub fn enumerate_optimal_surjective(instance: &Instance) -> Result<OptimalAssignments> {
    if instance.num_vars() < 2 {
        return Ok(OptimalAssignments::empty());
    }
    let lang = instance_language(instance);
    match classify_language(&lang).reason() {
        Some(TractableReason::Eds) => enumerate_eds(instance, false),
        Some(TractableReason::NegEds) => enumerate_eds(&instance.negate_labels(), true),
        _ => Ok(OptimalAssignments::prepared(
            oracle::brute_vcsp_surjective_all(instance)?,
        )),
    }
}

/// Lazy lexicographic enumeration of the satisfying assignments of a
/// crisp, min-closed instance by self-reduction: variables are fixed in
/// index order to 0 then 1, and the feasibility of every partial
/// assignment is decided by generalized arc-consistency propagation,
/// which is sound and complete for min-closed constraints.
pub struct MinClosedEnumerator {
    n: usize,
    constraints: Vec<(Vec<usize>, Vec<Vec<bool>>)>,
    stack: Vec<(usize, Vec<Option<bool>>)>,
}

/// Validates the preconditions and builds the enumerator.
pub fn min_closed_enumerate(instance: &Instance) -> Result<MinClosedEnumerator> {
    let mut constraints = Vec::new();
    for c in instance.constraints() {
        if !c.relation.is_crisp() {
            return Err(Error::argument(
                "min-closed enumeration requires crisp relations",
            ));
        }
        let feas: Relation = c.relation.feas();
        if !admits_polymorphism(&feas, BoolOp::Min) {
            return Err(Error::argument(
                "min-closed enumeration requires min-closed relations",
            ));
        }
        constraints.push((c.scope.clone(), feas.member_tuples().collect()));
    }
    let n = instance.num_vars();
    Ok(MinClosedEnumerator {
        n,
        constraints,
        stack: vec![(0, vec![None; n])],
    })
}

impl MinClosedEnumerator {
    /// Generalized arc consistency from the fixed prefix; true iff no
    /// domain wipes out.
    fn feasible(&self, fixed: &[Option<bool>]) -> bool {
        let mut domains: Vec<[bool; 2]> = fixed
            .iter()
            .map(|f| match f {
                None => [true, true],
                Some(false) => [true, false],
                Some(true) => [false, true],
            })
            .collect();
        loop {
            let mut changed = false;
            for (scope, members) in &self.constraints {
                for (pos, var) in scope.iter().enumerate() {
                    for label in 0..2usize {
                        if !domains[*var][label] {
                            continue;
                        }
                        let supported = members.iter().any(|t| {
                            t[pos] == (label == 1)
                                && scope
                                    .iter()
                                    .enumerate()
                                    .all(|(q, v)| domains[*v][usize::from(t[q])])
                        });
                        if !supported {
                            domains[*var][label] = false;
                            changed = true;
                            if !domains[*var][0] && !domains[*var][1] {
                                return false;
                            }
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

impl Iterator for MinClosedEnumerator {
    type Item = Assignment;
    fn next(&mut self) -> Option<Assignment> {
        while let Some((depth, fixed)) = self.stack.pop() {
            if !self.feasible(&fixed) {
                continue;
            }
            if depth == self.n {
                return Some(Assignment(fixed.iter().map(|f| f.unwrap()).collect()));
            }
            // Push 1 first so the 0-branch is popped first: lex order.
            let mut one = fixed.clone();
            one[depth] = Some(true);
            self.stack.push((depth + 1, one));
            let mut zero = fixed;
            zero[depth] = Some(false);
            self.stack.push((depth + 1, zero));
        }
        None
    }
}

/// Surjective fix-up for maximisation: given an r-approximate plain
/// solution of a non-negative instance, returns a surjective assignment
/// that is (r − ε)-approximate among surjective ones. Small instances
/// (n < 2·r·a_max/ε) are solved exactly by brute force; otherwise the two
/// variables with the smallest contribution under `s` get the two labels,
/// in whichever of the two ways scores higher.
pub fn fixup_surjective(
    instance: &Instance,
    s: &Assignment,
    r: &Value,
    epsilon: &Value,
) -> Result<Assignment> {
    let n = instance.num_vars();
    if s.len() != n {
        return Err(Error::argument("assignment length mismatch"));
    }
    if n < 2 {
        return Err(Error::argument("no surjective assignment on fewer than 2 variables"));
    }
    if !(*epsilon > Value::zero() && epsilon <= r && *r <= Value::one()) {
        return Err(Error::argument("need 0 < epsilon <= r <= 1"));
    }
    for c in instance.constraints() {
        if c.relation.table().iter().any(|v| !v.is_finite() || *v < Value::zero()) {
            return Err(Error::argument(
                "fix-up requires finite non-negative values",
            ));
        }
    }
    let a_max = instance
        .constraints()
        .iter()
        .map(|c| c.relation.arity())
        .max()
        .unwrap_or(0);
    let threshold = *r * Value::from_int(2 * a_max as i128)
        * match epsilon.as_rational() {
            Some(e) => Value::Finite(e.recip()),
            None => unreachable!("epsilon is finite"),
        };
    if Value::from_int(n as i128) < threshold {
        let (_, best) = oracle::brute_max_surjective(instance)?
            .ok_or_else(|| Error::argument("no surjective assignment exists"))?;
        return Ok(best);
    }
    if s.is_surjective() {
        // Already surjective: the guarantee holds a fortiori, but the
        // reassignment below can only help, so fall through.
    }
    // Contribution of each variable: the value under `s` of the
    // constraints mentioning it (each constraint counted once per
    // distinct variable).
    let mut contribution = vec![Value::zero(); n];
    for c in instance.constraints() {
        let local: Vec<bool> = c.scope.iter().map(|v| s.0[*v]).collect();
        let value = c.weight * c.relation.value_of(&local);
        let mut seen = c.scope.clone();
        seen.sort_unstable();
        seen.dedup();
        for v in seen {
            contribution[v] += value;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| contribution[*a].cmp(&contribution[*b]).then(a.cmp(b)));
    let (u, v) = (order[0], order[1]);
    let mut first = s.clone();
    first.0[u] = false;
    first.0[v] = true;
    let mut second = s.clone();
    second.0[u] = true;
    second.0[v] = false;
    let value_first = instance.evaluate(&first)?;
    let value_second = instance.evaluate(&second)?;
    Ok(if value_second > value_first {
        second
    } else {
        first
    })
}
