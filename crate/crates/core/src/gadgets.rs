//! Instance transformers and problem encoders: reductions between plain
//! and surjective instances, constant simulation, the minimum-distance and
//! max-cut encodings, and the crisp/optimum constraint replacements. Every
//! transformer preserves an optimum/feasibility relationship that the
//! tests check against the brute-force oracles.

use crate::instance::Instance;
use crate::mincut::Graph;
use crate::relation::{stock, Relation, WeightedRelation};
use crate::value::Value;
use crate::{Error, Result};

/// An m × n parity check matrix over {0,1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    rows: Vec<Vec<bool>>,
    cols: usize,
}

impl ParityCheckMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::argument("a parity check matrix needs a row"));
        };
        let cols = first.len();
        if cols == 0 {
            return Err(Error::argument("a parity check matrix needs a column"));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::argument("ragged parity check matrix"));
        }
        Ok(ParityCheckMatrix { rows, cols })
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|b| !*b))
    }
}

/// Two fresh unconstrained variables make every plain optimum surjectively
/// attainable: plain optimum of the input = surjective optimum of the
/// output.
pub fn pad_surjective(instance: &Instance) -> Instance {
    let mut out = instance.clone();
    out.extend_vars(2);
    out
}

/// One pinned plain instance per ordered pair of distinct variables,
/// adding constraints forcing the pair to 0 and 1. The minimum plain
/// optimum over the n(n−1) instances is the surjective optimum of the
/// input.
pub fn to_vcsp_with_constants(instance: &Instance) -> Result<Vec<Instance>> {
    let n = instance.num_vars();
    if n < 2 {
        return Err(Error::argument("pinning needs at least two variables"));
    }
    let mut out = Vec::with_capacity(n * (n - 1));
    for v0 in 0..n {
        for v1 in 0..n {
            if v0 == v1 {
                continue;
            }
            let mut pinned = instance.clone();
            pinned.add_constraint(Value::one(), stock::constant_crisp(false), vec![v0])?;
            pinned.add_constraint(Value::one(), stock::constant_crisp(true), vec![v1])?;
            out.push(pinned);
        }
    }
    Ok(out)
}

fn is_constant_table(rel: &WeightedRelation, d: bool) -> bool {
    rel == &stock::constant_crisp(d)
}

/// Replaces the crisp constants by order constraints against two fresh
/// variables y0, y1 that every feasible surjective assignment must label
/// 0 and 1: y0 ≤ x ≤ y1 for every original variable, then ρ0(x) becomes
/// x ≤ y0 and ρ1(x) becomes y1 ≤ x. The plain optimum of the input equals
/// the surjective optimum of the output.
pub fn simulate_constants_with_leq(instance: &Instance) -> Result<Instance> {
    let n = instance.num_vars();
    let mut out = Instance::new(n + 2)?;
    let leq = WeightedRelation::crisp(&stock::leq());
    let (y0, y1) = (n, n + 1);
    for c in instance.constraints() {
        if is_constant_table(&c.relation, false) {
            out.add_constraint(c.weight, leq.clone(), vec![c.scope[0], y0])?;
        } else if is_constant_table(&c.relation, true) {
            out.add_constraint(c.weight, leq.clone(), vec![y1, c.scope[0]])?;
        } else {
            out.add_constraint(c.weight, c.relation.clone(), c.scope.clone())?;
        }
    }
    for x in 0..n {
        out.add_constraint(Value::one(), leq.clone(), vec![y0, x])?;
        out.add_constraint(Value::one(), leq.clone(), vec![x, y1])?;
    }
    Ok(out)
}

/// Encodes the minimum-distance problem of the code with parity check
/// matrix H: prefix-sum variables turn each parity equation into a chain
/// of even-parity constraints anchored at 0, and a soft constant charges
/// each x set to 1. The surjective optimum equals the minimum Hamming
/// weight of a non-zero codeword (infeasible when only the zero codeword
/// exists).
pub fn encode_min_distance(h: &ParityCheckMatrix) -> Result<Instance> {
    if h.is_zero() {
        return Err(Error::argument(
            "an all-zero parity check matrix leaves every vector a codeword",
        ));
    }
    let n = h.cols();
    let mut inst = Instance::new(n)?;
    let parity = WeightedRelation::crisp(&stock::even_parity(3));
    let zero = stock::constant_crisp(false);
    for row in h.rows() {
        let support: Vec<usize> = (0..n).filter(|j| row[*j]).collect();
        if support.is_empty() {
            continue;
        }
        let prefix = inst.extend_vars(support.len() + 1);
        inst.add_constraint(Value::one(), zero.clone(), vec![prefix[0]])?;
        for (i, x) in support.iter().enumerate() {
            inst.add_constraint(
                Value::one(),
                parity.clone(),
                vec![prefix[i], *x, prefix[i + 1]],
            )?;
        }
        inst.add_constraint(Value::one(), zero.clone(), vec![*prefix.last().unwrap()])?;
    }
    for j in 0..n {
        inst.add_constraint(Value::one(), stock::soft_constant(false), vec![j])?;
    }
    Ok(inst)
}

/// Rewrites an instance over {parity3, soft0, const0} into one over
/// {parity4, soft equality}: a fresh variable w joins every parity scope,
/// soft constants become soft equalities to w, and the crisp constants
/// become soft equalities to w at a big-M weight (2M + 1 beats any
/// feasible value). Feasible surjective optima are preserved exactly; a
/// surjectively infeasible input maps to an output whose optimum exceeds
/// M, since the big-M penalties are finite.
pub fn a3_to_a4(instance: &Instance) -> Result<Instance> {
    let bound = instance.max_finite_bound();
    let penalty = Value::from_int(2) * bound + Value::one();
    let n = instance.num_vars();
    let mut out = Instance::new(n + 1)?;
    let w = n;
    let parity3 = WeightedRelation::crisp(&stock::even_parity(3));
    let parity4 = WeightedRelation::crisp(&stock::even_parity(4));
    for c in instance.constraints() {
        if c.relation == parity3 {
            let mut scope = c.scope.clone();
            scope.push(w);
            out.add_constraint(c.weight, parity4.clone(), scope)?;
        } else if c.relation == stock::soft_constant(false) {
            out.add_constraint(c.weight, stock::soft_equality(), vec![c.scope[0], w])?;
        } else if c.relation == stock::constant_crisp(false) {
            out.add_constraint(penalty, stock::soft_equality(), vec![c.scope[0], w])?;
        } else {
            return Err(Error::argument(
                "input must use only parity3, soft0 and const0 relations",
            ));
        }
    }
    Ok(out)
}

/// Encodes max-cut of a graph (unit edge semantics) as a surjective
/// instance over the ternary gadget relation: one variable per vertex
/// plus a selector z, one constraint per edge. The surjective optimum is
/// 2|E| − maxcut. Requires w ≥ 2|E| + 1 and no isolated vertices.
pub fn encode_maxcut(graph: &Graph, w: i128) -> Result<Instance> {
    let n = graph.original_vertex_count();
    let pairs: Vec<(usize, usize)> = graph
        .original_edges()
        .iter()
        .map(|(u, v, _)| (*u, *v))
        .collect();
    if pairs.is_empty() {
        return Err(Error::argument("max-cut encoding needs at least one edge"));
    }
    for v in 0..n {
        if !pairs.iter().any(|(a, b)| *a == v || *b == v) {
            return Err(Error::argument(format!("vertex {v} is isolated")));
        }
    }
    if w < 2 * pairs.len() as i128 + 1 {
        return Err(Error::argument("gadget parameter must be at least 2|E| + 1"));
    }
    let mut inst = Instance::new(n + 1)?;
    let z = n;
    let gadget = stock::maxcut_gadget(w);
    for (u, v) in pairs {
        inst.add_constraint(Value::one(), gadget.clone(), vec![u, v, z])?;
    }
    Ok(inst)
}

/// Thresholds an α-crisp weighted relation (image inside [0,1] ∪ (α,∞])
/// to the relation of its low values.
pub fn round_alpha(rel: &WeightedRelation, alpha: &Value) -> Result<Relation> {
    if !alpha.is_finite() || *alpha < Value::one() {
        return Err(Error::argument("alpha must be a finite rational >= 1"));
    }
    let mut members = Vec::new();
    for k in 0..1usize << rel.arity() {
        let v = rel.value_at(k);
        if v >= Value::zero() && v <= Value::one() {
            members.push(k);
        } else if v > *alpha {
            // non-member
        } else {
            return Err(Error::argument(format!(
                "value {v} lies in (1, {alpha}]; the relation is not {alpha}-crisp"
            )));
        }
    }
    Relation::new(rel.arity(), members)
}

/// Bookkeeping of a crisp-constraint replacement.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplaceCrispInfo {
    /// Number of replaced constraints.
    pub replaced: usize,
    /// The feasible-value upper bound M of the input instance.
    pub bound: Value,
    /// The weight 1/(k+1) given to every stand-in.
    pub weight: Value,
}

/// Replaces each constraint applying the crisp `target` by the stand-in at
/// weight 1/(k+1), where k counts the affected constraints. Requires the
/// stand-in to round to `target` at threshold M·(k+1) (clamped to 1), so
/// feasible values move by under 1 while infeasible ones exceed M. For
/// integer-valued instances every optimal surjective assignment of the
/// output is optimal for the input (exactly the original set when the
/// stand-in is crisp; a fractional stand-in may break ties).
pub fn replace_crisp(
    instance: &Instance,
    target: &Relation,
    stand_in: &WeightedRelation,
) -> Result<(Instance, ReplaceCrispInfo)> {
    let crisp_target = WeightedRelation::crisp(target);
    let k = instance
        .constraints()
        .iter()
        .filter(|c| c.relation == crisp_target)
        .count();
    let bound = instance.max_finite_bound();
    if k == 0 {
        return Ok((
            instance.clone(),
            ReplaceCrispInfo {
                replaced: 0,
                bound,
                weight: Value::one(),
            },
        ));
    }
    let threshold = (bound * Value::from_int(k as i128 + 1)).max(Value::one());
    let rounded = round_alpha(stand_in, &threshold)?;
    if rounded != *target {
        return Err(Error::argument(
            "stand-in does not round to the target relation at the required threshold",
        ));
    }
    let weight = Value::ratio(1, k as i128 + 1)?;
    let mut out = Instance::new(instance.num_vars())?;
    for c in instance.constraints() {
        if c.relation == crisp_target {
            out.add_constraint(weight, stand_in.clone(), c.scope.clone())?;
        } else {
            out.add_constraint(c.weight, c.relation.clone(), c.scope.clone())?;
        }
    }
    Ok((
        out,
        ReplaceCrispInfo {
            replaced: k,
            bound,
            weight,
        },
    ))
}

/// Replaces every constraint applying Opt(γ) (as a crisp relation) by γ at
/// weight M/m + 1, where m is the smallest positive value of γ and M the
/// feasible-value bound of the instance. Requires γ non-crisp, normalised
/// to non-negative values with minimum 0, and a non-negative instance;
/// optimal surjective solutions coincide.
pub fn replace_opt_constraint(
    instance: &Instance,
    gamma: &WeightedRelation,
) -> Result<Instance> {
    if gamma.is_crisp() {
        return Err(Error::argument(
            "replacement needs a non-crisp relation (Opt would equal it)",
        ));
    }
    if gamma.min_finite() != Some(Value::zero()) {
        return Err(Error::argument(
            "the relation must be normalised to minimum value 0",
        ));
    }
    for c in instance.constraints() {
        if c.relation.table().iter().any(|v| *v < Value::zero()) {
            return Err(Error::argument("instance values must be non-negative"));
        }
    }
    let opt_rel = WeightedRelation::crisp(&gamma.opt());
    let m = gamma
        .table()
        .iter()
        .filter(|v| v.is_finite() && **v > Value::zero())
        .min()
        .copied()
        .expect("a non-crisp normalised relation has a positive finite value");
    let bound = instance.max_finite_bound();
    let weight = bound * Value::Finite(m.as_rational().unwrap().recip()) + Value::one();
    let mut out = Instance::new(instance.num_vars())?;
    for c in instance.constraints() {
        if c.relation == opt_rel {
            out.add_constraint(weight, gamma.clone(), c.scope.clone())?;
        } else {
            out.add_constraint(c.weight, c.relation.clone(), c.scope.clone())?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::solver::SolveStatus;

    fn cycle_mincut_instance(n: usize) -> Instance {
        let mut inst = Instance::new(n).unwrap();
        for i in 0..n {
            inst.add_constraint(Value::one(), stock::soft_equality(), vec![i, (i + 1) % n])
                .unwrap();
        }
        inst
    }

    #[test]
    fn padding_preserves_the_plain_optimum() {
        let inst = cycle_mincut_instance(3);
        let padded = pad_surjective(&inst);
        assert_eq!(padded.num_vars(), 5);
        let (plain, _) = oracle::brute_vcsp(&inst).unwrap();
        let surj = oracle::brute_vcsp_surjective(&padded).unwrap();
        assert_eq!(plain, surj.value);
    }

    #[test]
    fn pinning_recovers_the_surjective_optimum() {
        let inst = cycle_mincut_instance(3);
        let pinned = to_vcsp_with_constants(&inst).unwrap();
        assert_eq!(pinned.len(), 6);
        let best = pinned
            .iter()
            .map(|p| oracle::brute_vcsp(p).unwrap().0)
            .min()
            .unwrap();
        assert_eq!(best, Value::from_int(2));
        let two = Instance::new(2).unwrap();
        assert_eq!(to_vcsp_with_constants(&two).unwrap().len(), 2);
        let one = Instance::new(1).unwrap();
        assert!(to_vcsp_with_constants(&one).is_err());
    }

    #[test]
    fn leq_simulation_replaces_constants() {
        // A single crisp constant on one variable: the transformed
        // three-variable instance has surjective optimum 0.
        let mut inst = Instance::new(1).unwrap();
        inst.add_constraint(Value::one(), stock::constant_crisp(false), vec![0])
            .unwrap();
        let out = simulate_constants_with_leq(&inst).unwrap();
        assert_eq!(out.num_vars(), 3);
        let surj = oracle::brute_vcsp_surjective(&out).unwrap();
        assert_eq!(surj.status, SolveStatus::Optimal);
        assert_eq!(surj.value, Value::zero());
    }

    #[test]
    fn leq_simulation_preserves_the_plain_optimum() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..30 {
            let n = rng.random_range(2..=4usize);
            let mut inst = Instance::new(n).unwrap();
            for _ in 0..rng.random_range(1..=4usize) {
                match rng.random_range(0..3) {
                    0 => inst
                        .add_constraint(
                            Value::one(),
                            stock::constant_crisp(rng.random_bool(0.5)),
                            vec![rng.random_range(0..n)],
                        )
                        .unwrap(),
                    1 => inst
                        .add_constraint(
                            Value::from_int(rng.random_range(1..=3)),
                            stock::soft_equality(),
                            vec![rng.random_range(0..n), rng.random_range(0..n)],
                        )
                        .unwrap(),
                    _ => inst
                        .add_constraint(
                            Value::one(),
                            WeightedRelation::crisp(&stock::leq()),
                            vec![rng.random_range(0..n), rng.random_range(0..n)],
                        )
                        .unwrap(),
                }
            }
            let out = simulate_constants_with_leq(&inst).unwrap();
            let (plain, _) = oracle::brute_vcsp(&inst).unwrap();
            let surj = oracle::brute_vcsp_surjective(&out).unwrap();
            assert_eq!(plain, surj.value);
        }
    }

    #[test]
    fn min_distance_encoding_fixtures() {
        let h = ParityCheckMatrix::new(vec![vec![true, true]]).unwrap();
        let inst = encode_min_distance(&h).unwrap();
        let surj = oracle::brute_vcsp_surjective(&inst).unwrap();
        assert_eq!(surj.value, Value::from_int(2));

        let h = ParityCheckMatrix::new(vec![
            vec![true, true, false],
            vec![false, true, true],
        ])
        .unwrap();
        let inst = encode_min_distance(&h).unwrap();
        let surj = oracle::brute_vcsp_surjective(&inst).unwrap();
        assert_eq!(surj.value, Value::from_int(3));

        // Identity: only the zero codeword, so surjectively infeasible.
        let h = ParityCheckMatrix::new(vec![vec![true, false], vec![false, true]]).unwrap();
        let inst = encode_min_distance(&h).unwrap();
        let surj = oracle::brute_vcsp_surjective(&inst).unwrap();
        assert_eq!(surj.status, SolveStatus::Infeasible);

        let zero = ParityCheckMatrix::new(vec![vec![false, false]]).unwrap();
        assert!(encode_min_distance(&zero).is_err());
    }

    #[test]
    fn parity_rewrite_preserves_the_optimum() {
        let h = ParityCheckMatrix::new(vec![vec![true, true]]).unwrap();
        let inst = encode_min_distance(&h).unwrap();
        let rewritten = a3_to_a4(&inst).unwrap();
        assert_eq!(rewritten.num_vars(), inst.num_vars() + 1);
        let before = oracle::brute_vcsp_surjective(&inst).unwrap();
        let after = oracle::brute_vcsp_surjective(&rewritten).unwrap();
        assert_eq!(before.value, after.value);
    }

    #[test]
    fn parity_rewrite_rejects_foreign_relations() {
        let mut inst = Instance::new(2).unwrap();
        inst.add_constraint(Value::one(), stock::soft_equality(), vec![0, 1])
            .unwrap();
        assert!(a3_to_a4(&inst).is_err());
    }

    #[test]
    fn maxcut_encoding_fixtures() {
        use crate::mincut::fixtures::{cycle, triangle, unit};
        let inst = encode_maxcut(&triangle(), 7).unwrap();
        let surj = oracle::brute_vcsp_surjective(&inst).unwrap();
        assert_eq!(surj.value, Value::from_int(4)); // 2·3 − 2

        let single = unit(2, &[(0, 1)]);
        let inst = encode_maxcut(&single, 3).unwrap();
        let surj = oracle::brute_vcsp_surjective(&inst).unwrap();
        assert_eq!(surj.value, Value::one()); // 2·1 − 1

        let inst = encode_maxcut(&cycle(4), 9).unwrap();
        let surj = oracle::brute_vcsp_surjective(&inst).unwrap();
        assert_eq!(surj.value, Value::from_int(4)); // 2·4 − 4

        assert!(encode_maxcut(&triangle(), 6).is_err());
        let isolated = unit(3, &[(0, 1)]);
        assert!(encode_maxcut(&isolated, 3).is_err());
    }

    #[test]
    fn rounding_thresholds() {
        let rel = WeightedRelation::new(
            2,
            vec![
                Value::zero(),
                Value::ratio(1, 2).unwrap(),
                Value::from_int(5),
                Value::infinity(),
            ],
        )
        .unwrap();
        let rounded = round_alpha(&rel, &Value::from_int(2)).unwrap();
        assert_eq!(rounded, Relation::new(2, [0b00, 0b01]).unwrap());

        // A crisp relation rounds to itself at any threshold.
        let crisp = WeightedRelation::crisp(&stock::leq());
        assert_eq!(round_alpha(&crisp, &Value::one()).unwrap(), stock::leq());

        // Value exactly 1 is a member at α = 1.
        let unary = WeightedRelation::new(1, vec![Value::one(), Value::from_int(9)]).unwrap();
        let rounded = round_alpha(&unary, &Value::from_int(8)).unwrap();
        assert_eq!(rounded, stock::constant(false));

        // A value in (1, α] is rejected.
        let bad = WeightedRelation::new(1, vec![Value::zero(), Value::from_int(2)]).unwrap();
        assert!(round_alpha(&bad, &Value::from_int(2)).is_err());
    }

    #[test]
    fn crisp_replacement_keeps_the_optimal_assignments() {
        // One hard leq constraint, one integer-valued soft equality.
        let mut inst = Instance::new(2).unwrap();
        inst.add_constraint(
            Value::one(),
            WeightedRelation::crisp(&stock::leq()),
            vec![0, 1],
        )
        .unwrap();
        inst.add_constraint(Value::one(), stock::soft_equality(), vec![0, 1])
            .unwrap();
        // The stand-in keeps low values low and pushes the non-member far up.
        let stand_in = WeightedRelation::new(
            2,
            vec![
                Value::zero(),
                Value::ratio(1, 2).unwrap(),
                Value::from_int(100),
                Value::one(),
            ],
        )
        .unwrap();
        let (out, info) = replace_crisp(&inst, &stock::leq(), &stand_in).unwrap();
        assert_eq!(info.replaced, 1);
        assert_eq!(info.weight, Value::ratio(1, 2).unwrap());
        let before = oracle::brute_vcsp_surjective_all(&inst).unwrap();
        let after = oracle::brute_vcsp_surjective_all(&out).unwrap();
        assert_eq!(before, after);

        // k = 0 leaves the instance untouched.
        let none = Instance::new(2).unwrap();
        let (same, info) = replace_crisp(&none, &stock::leq(), &stand_in).unwrap();
        assert_eq!(same, none);
        assert_eq!(info.replaced, 0);

        // A stand-in whose threshold rounding disagrees is rejected.
        let wrong = WeightedRelation::crisp(&stock::geq());
        assert!(replace_crisp(&inst, &stock::leq(), &wrong).is_err());
    }

    #[test]
    fn opt_replacement_weight_formula() {
        // γ non-crisp with m = 1; the instance bound M = 3 gives weight 4.
        // Opt(γ) = {00, 10} keeps the instance surjectively feasible.
        let gamma = WeightedRelation::new(
            2,
            vec![Value::zero(), Value::one(), Value::zero(), Value::from_int(3)],
        )
        .unwrap();
        let opt_rel = WeightedRelation::crisp(&gamma.opt());
        let mut inst = Instance::new(2).unwrap();
        inst.add_constraint(Value::one(), opt_rel, vec![0, 1]).unwrap();
        inst.add_constraint(Value::from_int(3), stock::soft_equality(), vec![0, 1])
            .unwrap();
        let out = replace_opt_constraint(&inst, &gamma).unwrap();
        assert_eq!(out.constraints()[0].weight, Value::from_int(4));
        let before = oracle::brute_vcsp_surjective_all(&inst).unwrap();
        let after = oracle::brute_vcsp_surjective_all(&out).unwrap();
        assert_eq!(before, after);

        // Crisp γ is rejected; an instance without Opt constraints is
        // returned unchanged.
        assert!(replace_opt_constraint(&inst, &stock::soft_constant(false).scale(Value::zero()).unwrap()).is_err());
        let plain = cycle_mincut_instance(3);
        let unchanged = replace_opt_constraint(&plain, &gamma).unwrap();
        assert_eq!(unchanged, plain);
    }

    #[test]
    fn pinning_an_infeasible_instance_keeps_every_pin_infeasible() {
        let mut inst = Instance::new(2).unwrap();
        inst.add_constraint(Value::one(), stock::constant_crisp(false), vec![0])
            .unwrap();
        inst.add_constraint(Value::one(), stock::constant_crisp(true), vec![0])
            .unwrap();
        for pinned in to_vcsp_with_constants(&inst).unwrap() {
            let (value, _) = oracle::brute_vcsp(&pinned).unwrap();
            assert!(value.is_infinite());
        }
    }

    #[test]
    fn leq_simulation_without_constants_only_adds_the_harness() {
        let mut inst = Instance::new(2).unwrap();
        inst.add_constraint(Value::one(), stock::soft_equality(), vec![0, 1])
            .unwrap();
        let out = simulate_constants_with_leq(&inst).unwrap();
        // One original constraint plus two order constraints per variable.
        assert_eq!(out.constraints().len(), 1 + 2 * 2);
    }

    #[test]
    fn parity_rewrite_of_soft_constants_only() {
        let mut inst = Instance::new(2).unwrap();
        inst.add_constraint(Value::one(), stock::soft_constant(false), vec![0])
            .unwrap();
        inst.add_constraint(Value::from_int(2), stock::soft_constant(false), vec![1])
            .unwrap();
        let out = a3_to_a4(&inst).unwrap();
        assert!(out
            .constraints()
            .iter()
            .all(|c| c.relation == stock::soft_equality()));
        let before = oracle::brute_vcsp_surjective(&inst).unwrap();
        let after = oracle::brute_vcsp_surjective(&out).unwrap();
        assert_eq!(before.value, after.value);
    }

    #[test]
    fn crisp_stand_in_equal_to_target_changes_only_weights() {
        let mut inst = Instance::new(2).unwrap();
        inst.add_constraint(
            Value::one(),
            WeightedRelation::crisp(&stock::leq()),
            vec![0, 1],
        )
        .unwrap();
        let stand_in = WeightedRelation::crisp(&stock::leq());
        let (out, info) = replace_crisp(&inst, &stock::leq(), &stand_in).unwrap();
        assert_eq!(info.replaced, 1);
        assert_eq!(out.constraints()[0].relation, stand_in);
        let before = oracle::brute_vcsp_surjective_all(&inst).unwrap();
        let after = oracle::brute_vcsp_surjective_all(&out).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn crisp_replacement_random_oracle_checks() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..30 {
            let n = rng.random_range(2..=5usize);
            let mut inst = Instance::new(n).unwrap();
            let k = rng.random_range(1..=2usize);
            for _ in 0..k {
                inst.add_constraint(
                    Value::one(),
                    WeightedRelation::crisp(&stock::leq()),
                    vec![rng.random_range(0..n), rng.random_range(0..n)],
                )
                .unwrap();
            }
            // Integer-valued soft padding keeps the optimum gaps at 1.
            for _ in 0..rng.random_range(0..=2usize) {
                inst.add_constraint(
                    Value::from_int(rng.random_range(1..=2)),
                    stock::soft_equality(),
                    vec![rng.random_range(0..n), rng.random_range(0..n)],
                )
                .unwrap();
            }
            let bound = inst.max_finite_bound();
            let high = bound * Value::from_int(k as i128 + 1) + Value::from_int(2);
            // Members low, the non-member above the rounding threshold.
            let table: Vec<Value> = (0..4)
                .map(|idx| {
                    if stock::leq().contains(idx) {
                        if rng.random_bool(0.5) {
                            Value::zero()
                        } else {
                            Value::ratio(1, 2).unwrap()
                        }
                    } else if rng.random_bool(0.5) {
                        Value::infinity()
                    } else {
                        high
                    }
                })
                .collect();
            let stand_in = WeightedRelation::new(2, table).unwrap();
            let (out, _) = replace_crisp(&inst, &stock::leq(), &stand_in).unwrap();
            let before = oracle::brute_vcsp_surjective_all(&inst).unwrap();
            let after = oracle::brute_vcsp_surjective_all(&out).unwrap();
            // Fractional stand-in values may break ties among the original
            // optima, but never promote anything else.
            assert_eq!(after.is_empty(), before.is_empty());
            for a in &after {
                assert!(before.contains(a), "{a:?} is not optimal for the input");
            }
        }
    }

    #[test]
    fn opt_replacement_random_oracle_checks() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(59);
        let mut seen = 0;
        while seen < 30 {
            // A random non-crisp normalised relation.
            let table: Vec<Value> = (0..4)
                .map(|_| Value::from_int(rng.random_range(0..=3)))
                .collect();
            let gamma = WeightedRelation::new(2, table).unwrap();
            if gamma.is_crisp() || gamma.min_finite() != Some(Value::zero()) {
                continue;
            }
            let opt_rel = WeightedRelation::crisp(&gamma.opt());
            let n = rng.random_range(2..=5usize);
            let mut inst = Instance::new(n).unwrap();
            inst.add_constraint(
                Value::one(),
                opt_rel,
                vec![rng.random_range(0..n), rng.random_range(0..n)],
            )
            .unwrap();
            for _ in 0..rng.random_range(0..=2usize) {
                inst.add_constraint(
                    Value::from_int(rng.random_range(1..=2)),
                    stock::soft_equality(),
                    vec![rng.random_range(0..n), rng.random_range(0..n)],
                )
                .unwrap();
            }
            let before = oracle::brute_vcsp_surjective_all(&inst).unwrap();
            if before.is_empty() {
                // A surjectively infeasible input has no optima to
                // preserve; the finite replacement makes everything
                // feasible.
                continue;
            }
            let out = replace_opt_constraint(&inst, &gamma).unwrap();
            let after = oracle::brute_vcsp_surjective_all(&out).unwrap();
            assert_eq!(before, after, "optimal assignments must coincide");
            seen += 1;
        }
    }

    #[test]
    fn transformers_agree_with_oracles_on_random_inputs() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(47);
        for _ in 0..30 {
            let n = rng.random_range(2..=4usize);
            let mut inst = Instance::new(n).unwrap();
            for _ in 0..rng.random_range(1..=3usize) {
                inst.add_constraint(
                    Value::from_int(rng.random_range(0..=2)),
                    stock::soft_equality(),
                    vec![rng.random_range(0..n), rng.random_range(0..n)],
                )
                .unwrap();
            }
            let padded = pad_surjective(&inst);
            let (plain, _) = oracle::brute_vcsp(&inst).unwrap();
            assert_eq!(plain, oracle::brute_vcsp_surjective(&padded).unwrap().value);

            let pinned = to_vcsp_with_constants(&inst).unwrap();
            let surj = oracle::brute_vcsp_surjective(&inst).unwrap();
            let best = pinned
                .iter()
                .map(|p| oracle::brute_vcsp(p).unwrap().0)
                .min()
                .unwrap();
            assert_eq!(best, surj.value);
        }
    }
}
