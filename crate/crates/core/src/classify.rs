//! Structural predicates (downsets, polymorphisms, multimorphisms, the EDS
//! coefficient) and the tractability verdict for a finite language.

use crate::boolop::BoolOp;
use crate::relation::{
    apply_op_to_indices, tuple_of_index, Language, Relation, WeightedRelation,
};
use crate::value::Value;
use crate::{Error, Result};

/// A violating family of member tuples, one per argument of the checked
/// operations.
pub type Witness = Vec<Vec<bool>>;

/// Returns the lexicographically first family of feasible tuples violating
/// the multimorphism condition, or `None` if `ops` is a multimorphism of
/// `rel`. All operations must share one arity in 1..=3.
pub fn multimorphism_violation(
    rel: &WeightedRelation,
    ops: &[BoolOp],
) -> Result<Option<Witness>> {
    let k = ops.len();
    if k == 0 || k > 3 {
        return Err(Error::argument("a multimorphism has 1 to 3 operations"));
    }
    if ops.iter().any(|h| h.arity() != k) {
        return Err(Error::argument(
            "every operation of a k-ary multimorphism must be k-ary",
        ));
    }
    let arity = rel.arity();
    let feas: Vec<usize> = rel.feas().members().collect();
    let mut family = vec![0usize; k];
    let mut indices = vec![0usize; k];
    loop {
        for (slot, idx) in indices.iter().enumerate() {
            family[slot] = feas[*idx];
        }
        // Sum over the operations versus the sum over the arguments; every
        // image must stay feasible for the inequality to make sense.
        let mut lhs = Value::zero();
        let mut broken = false;
        for h in ops {
            let image = apply_op_to_indices(*h, &family, arity);
            let value = rel.value_at(image);
            if value.is_infinite() {
                broken = true;
                break;
            }
            lhs += value;
        }
        if !broken {
            let rhs: Value = family.iter().map(|m| rel.value_at(*m)).sum();
            if lhs > rhs {
                broken = true;
            }
        }
        if broken {
            return Ok(Some(
                family.iter().map(|m| tuple_of_index(*m, arity)).collect(),
            ));
        }
        // Next family in lexicographic order.
        let mut slot = k;
        loop {
            if slot == 0 {
                return Ok(None);
            }
            slot -= 1;
            indices[slot] += 1;
            if indices[slot] < feas.len() {
                break;
            }
            indices[slot] = 0;
        }
    }
}

pub fn admits_multimorphism(rel: &WeightedRelation, ops: &[BoolOp]) -> Result<bool> {
    if rel.feas().is_empty() {
        // Vacuous: no feasible family to violate anything.
        let _ = multimorphism_violation_arity_check(ops)?;
        return Ok(true);
    }
    Ok(multimorphism_violation(rel, ops)?.is_none())
}

fn multimorphism_violation_arity_check(ops: &[BoolOp]) -> Result<usize> {
    let k = ops.len();
    if k == 0 || k > 3 || ops.iter().any(|h| h.arity() != k) {
        return Err(Error::argument("invalid multimorphism signature"));
    }
    Ok(k)
}

/// Returns the lexicographically first family of member tuples whose image
/// under `op` leaves the relation, or `None` if `op` is a polymorphism.
pub fn polymorphism_violation(rel: &Relation, op: BoolOp) -> Option<Witness> {
    let k = op.arity();
    let members: Vec<usize> = rel.members().collect();
    if members.is_empty() {
        return None;
    }
    let mut indices = vec![0usize; k];
    let mut family = vec![0usize; k];
    loop {
        for (slot, idx) in indices.iter().enumerate() {
            family[slot] = members[*idx];
        }
        let image = apply_op_to_indices(op, &family, rel.arity());
        if !rel.contains(image) {
            return Some(
                family
                    .iter()
                    .map(|m| tuple_of_index(*m, rel.arity()))
                    .collect(),
            );
        }
        let mut slot = k;
        loop {
            if slot == 0 {
                return None;
            }
            slot -= 1;
            indices[slot] += 1;
            if indices[slot] < members.len() {
                break;
            }
            indices[slot] = 0;
        }
    }
}

pub fn admits_polymorphism(rel: &Relation, op: BoolOp) -> bool {
    polymorphism_violation(rel, op).is_none()
}

/// True iff the relation is downward closed under the componentwise order.
pub fn is_downset(rel: &Relation) -> bool {
    // Downward closure is equivalent to closure under clearing any single
    // 1-bit (in table-index terms: any bit of the index).
    for m in rel.members() {
        for i in 0..rel.arity() {
            let bit = 1usize << i;
            if m & bit != 0 && !rel.contains(m & !bit) {
                return false;
            }
        }
    }
    true
}

/// The witness that a relation is a downset after identifying duplicate
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownsetDecomposition {
    /// Coordinate classes (0-based, each sorted); singletons included.
    pub classes: Vec<Vec<usize>>,
    /// The first coordinate of each class, in increasing order.
    pub representatives: Vec<usize>,
    /// The input projected to the representative coordinates.
    pub residual: Relation,
}

impl DownsetDecomposition {
    /// Equality pairs (representative, duplicate) realising the
    /// identification; there are `arity − |classes|` of them.
    pub fn equality_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for class in &self.classes {
            for dup in &class[1..] {
                pairs.push((class[0], *dup));
            }
        }
        pairs
    }
}

/// Decomposes `rel` as duplicate-coordinate identifications plus a downset,
/// when possible. Coordinates i, j are duplicates when every member agrees
/// on them; for the empty relation every pair is (the decomposition is
/// vacuous).
pub fn essentially_downset(rel: &Relation) -> Option<DownsetDecomposition> {
    let r = rel.arity();
    let members: Vec<Vec<bool>> = rel.member_tuples().collect();
    // Union-find over coordinates.
    let mut parent: Vec<usize> = (0..r).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for i in 0..r {
        for j in i + 1..r {
            if members.iter().all(|t| t[i] == t[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = b.min(a);
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![usize::MAX; r];
    for i in 0..r {
        let root = find(&mut parent, i);
        if root == i {
            class_of[i] = classes.len();
            classes.push(vec![i]);
        } else {
            let c = class_of[root];
            class_of[i] = c;
            classes[c].push(i);
        }
    }
    let representatives: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let residual_arity = representatives.len();
    let mut residual = Relation::empty(residual_arity);
    for t in &members {
        let projected: Vec<bool> = representatives.iter().map(|i| t[*i]).collect();
        residual.insert(crate::relation::index_of_tuple(&projected));
    }
    if is_downset(&residual) {
        Some(DownsetDecomposition {
            classes,
            representatives,
            residual,
        })
    } else {
        None
    }
}

/// EDS test for a single weighted relation: both the feasibility relation
/// and the optimal relation must be essentially downsets.
pub fn is_eds_relation(rel: &WeightedRelation) -> bool {
    essentially_downset(&rel.feas()).is_some() && essentially_downset(&rel.opt()).is_some()
}

/// The least α ≥ 1 such that
/// `α · (γ(x) + γ(y) − 2γ(0)) ≥ γ(diff(x, y)) − γ(0)` holds for all
/// feasible x, y (with the zero tuple feasible), or `None` when the
/// relation is not EDS. Computed as the maximum over pairs of the required
/// ratio, clamped below at 1.
pub fn min_alpha_eds(rel: &WeightedRelation) -> Option<Value> {
    let feas: Vec<usize> = rel.feas().members().collect();
    if feas.is_empty() {
        // Vacuously α-EDS for every α ≥ 1.
        return Some(Value::one());
    }
    let zero_value = rel.value_at(0);
    if zero_value.is_infinite() {
        return None;
    }
    // γ(0) must be minimal among feasible values, otherwise the diagonal
    // pair (x, x) has a negative left-hand side against a zero right-hand
    // side.
    if feas.iter().any(|m| rel.value_at(*m) < zero_value) {
        return None;
    }
    let mut best = Value::one();
    for x in &feas {
        for y in &feas {
            let image = apply_op_to_indices(BoolOp::Diff, &[*x, *y], rel.arity());
            let rhs = rel.value_at(image).sub_finite(&zero_value);
            let lhs_coeff = (rel.value_at(*x) + rel.value_at(*y))
                .sub_finite(&zero_value)
                .sub_finite(&zero_value);
            if rhs.is_infinite() {
                return None;
            }
            if lhs_coeff.is_zero() {
                if rhs > Value::zero() {
                    return None;
                }
            } else if rhs > Value::zero() {
                let ratio = Value::Finite(
                    rhs.as_rational().unwrap() / lhs_coeff.as_rational().unwrap(),
                );
                best = best.max(ratio);
            }
        }
    }
    Some(best)
}

/// Why a language is globally tractable in the surjective setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TractableReason {
    Eds,
    NegEds,
    MinMin,
    MaxMax,
    MinMax,
    MinorityTriple,
    MajorityTriple,
    MajorityMajorityMinority,
}

impl TractableReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TractableReason::Eds => "eds",
            TractableReason::NegEds => "neg_eds",
            TractableReason::MinMin => "min_min",
            TractableReason::MaxMax => "max_max",
            TractableReason::MinMax => "min_max",
            TractableReason::MinorityTriple => "mnrt_mnrt_mnrt",
            TractableReason::MajorityTriple => "mjrt_mjrt_mjrt",
            TractableReason::MajorityMajorityMinority => "mjrt_mjrt_mnrt",
        }
    }
}

/// Which view of a weighted relation breaks the difference polymorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationPart {
    Feas,
    Opt,
}

/// Evidence that one relation is not EDS: the first view that is not
/// closed under the Boolean difference, with the violating pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdsViolation {
    pub relation: String,
    pub part: RelationPart,
    pub pair: (Vec<bool>, Vec<bool>),
}

/// One failed multimorphism: its name, the first relation that breaks it,
/// and the violating tuple family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultimorphismFailure {
    pub multimorphism: TractableReason,
    pub relation: String,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntractabilityEvidence {
    pub non_eds: EdsViolation,
    pub non_neg_eds: EdsViolation,
    pub failures: Vec<MultimorphismFailure>,
}

/// The dichotomy verdict for a finite language.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    GloballySTractable(TractableReason),
    GloballySIntractable(Box<IntractabilityEvidence>),
}

impl Verdict {
    pub fn reason(&self) -> Option<TractableReason> {
        match self {
            Verdict::GloballySTractable(r) => Some(*r),
            Verdict::GloballySIntractable(_) => None,
        }
    }
}

/// The six candidate multimorphisms in their fixed priority order.
pub fn standard_multimorphisms() -> [(TractableReason, Vec<BoolOp>); 6] {
    [
        (TractableReason::MinMin, vec![BoolOp::Min, BoolOp::Min]),
        (TractableReason::MaxMax, vec![BoolOp::Max, BoolOp::Max]),
        (TractableReason::MinMax, vec![BoolOp::Min, BoolOp::Max]),
        (
            TractableReason::MinorityTriple,
            vec![BoolOp::Minority, BoolOp::Minority, BoolOp::Minority],
        ),
        (
            TractableReason::MajorityTriple,
            vec![BoolOp::Majority, BoolOp::Majority, BoolOp::Majority],
        ),
        (
            TractableReason::MajorityMajorityMinority,
            vec![BoolOp::Majority, BoolOp::Majority, BoolOp::Minority],
        ),
    ]
}

fn first_eds_violation(lang: &Language) -> Option<EdsViolation> {
    for (name, rel) in lang.iter() {
        if is_eds_relation(rel) {
            continue;
        }
        for (part, view) in [
            (RelationPart::Feas, rel.feas()),
            (RelationPart::Opt, rel.opt()),
        ] {
            if let Some(witness) = polymorphism_violation(&view, BoolOp::Diff) {
                return Some(EdsViolation {
                    relation: name.clone(),
                    part,
                    pair: (witness[0].clone(), witness[1].clone()),
                });
            }
        }
        unreachable!("non-EDS relation must have a difference violation");
    }
    None
}

/// Classifies a finite language. Checks, in order: EDS, NegEDS, then the
/// six multimorphisms; the first success names the reason. An empty
/// language is vacuously EDS.
pub fn classify_language(lang: &Language) -> Verdict {
    if lang.is_empty() {
        return Verdict::GloballySTractable(TractableReason::Eds);
    }
    let non_eds = match first_eds_violation(lang) {
        None => return Verdict::GloballySTractable(TractableReason::Eds),
        Some(v) => v,
    };
    let non_neg_eds = match first_eds_violation(&lang.negate()) {
        None => return Verdict::GloballySTractable(TractableReason::NegEds),
        Some(v) => v,
    };
    let mut failures = Vec::new();
    'mm: for (reason, ops) in standard_multimorphisms() {
        for (name, rel) in lang.iter() {
            if let Some(witness) =
                multimorphism_violation(rel, &ops).expect("standard signature is valid")
            {
                failures.push(MultimorphismFailure {
                    multimorphism: reason,
                    relation: name.clone(),
                    witness,
                });
                continue 'mm;
            }
        }
        return Verdict::GloballySTractable(reason);
    }
    Verdict::GloballySIntractable(Box::new(IntractabilityEvidence {
        non_eds,
        non_neg_eds,
        failures,
    }))
}
