//! VCSP instances and assignments.
//!
//! An instance is a weighted sum of constraints `w_i · γ_i(scope_i)` over
//! `n` Boolean variables. Variables are 0-based in the API; the text file
//! format (module `cli` of the companion binary) uses 1-based indices.

use crate::relation::WeightedRelation;
use crate::value::Value;
use crate::{Error, Result};

/// One valued constraint: a non-negative finite weight, a weighted
/// relation, and a scope of variable indices (repeats allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub weight: Value,
    pub relation: WeightedRelation,
    pub scope: Vec<usize>,
}

/// An assignment of {0,1} labels to all variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Surjective means both labels occur: not all-zero and not all-one.
    pub fn is_surjective(&self) -> bool {
        self.0.iter().any(|b| *b) && self.0.iter().any(|b| !*b)
    }

    /// The k-th assignment in lexicographic order (variable 1 varies
    /// slowest).
    pub fn from_index(k: usize, n: usize) -> Self {
        Assignment((0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect())
    }

    /// Subset mask of the variables labelled 1 (variable i at bit i).
    pub fn to_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, b)| if *b { m | 1 << i } else { m })
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        Assignment((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    /// Label-flipped copy.
    pub fn negate(&self) -> Self {
        Assignment(self.0.iter().map(|b| !*b).collect())
    }
}

/// A VCSP instance over Boolean variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Instance {
    num_vars: usize,
    constraints: Vec<Constraint>,
}

impl Instance {
    pub fn new(num_vars: usize) -> Result<Self> {
        if num_vars < 1 {
            return Err(Error::argument("instance needs at least one variable"));
        }
        Ok(Instance {
            num_vars,
            constraints: Vec::new(),
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_constraint(
        &mut self,
        weight: Value,
        relation: WeightedRelation,
        scope: Vec<usize>,
    ) -> Result<()> {
        if !weight.is_finite() || weight < Value::zero() {
            return Err(Error::argument("weights must be finite and non-negative"));
        }
        if scope.len() != relation.arity() {
            return Err(Error::argument(format!(
                "scope length {} does not match arity {}",
                scope.len(),
                relation.arity()
            )));
        }
        if scope.iter().any(|v| *v >= self.num_vars) {
            return Err(Error::argument("scope variable out of range"));
        }
        self.constraints.push(Constraint {
            weight,
            relation,
            scope,
        });
        Ok(())
    }

    /// Appends `extra` fresh unconstrained variables, returning their
    /// indices.
    pub fn extend_vars(&mut self, extra: usize) -> Vec<usize> {
        let fresh = (self.num_vars..self.num_vars + extra).collect();
        self.num_vars += extra;
        fresh
    }

    /// Evaluates `Σ w_i · γ_i(s | scope_i)` with ∞-absorbing addition and
    /// 0 · ∞ = ∞.
    pub fn evaluate(&self, s: &Assignment) -> Result<Value> {
        if s.len() != self.num_vars {
            return Err(Error::argument(format!(
                "assignment length {} does not match {} variables",
                s.len(),
                self.num_vars
            )));
        }
        let mut total = Value::zero();
        for c in &self.constraints {
            let local: Vec<bool> = c.scope.iter().map(|v| s.0[*v]).collect();
            total += c.weight * c.relation.value_of(&local);
            if total.is_infinite() {
                // Nothing can cancel infinity.
                return Ok(Value::infinity());
            }
        }
        Ok(total)
    }

    /// Exchanges the labels 0 and 1 in every constraint relation. Together
    /// with flipping assignments this leaves all values unchanged.
    pub fn negate_labels(&self) -> Instance {
        Instance {
            num_vars: self.num_vars,
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint {
                    weight: c.weight,
                    relation: c.relation.negate(),
                    scope: c.scope.clone(),
                })
                .collect(),
        }
    }

    /// Weighted sum of the maximum finite values of the constraints: an
    /// upper bound on the value of any feasible assignment. Constraints
    /// whose relation has no finite value contribute nothing (no feasible
    /// assignment exists at all then).
    pub fn max_finite_bound(&self) -> Value {
        self.constraints
            .iter()
            .filter_map(|c| c.relation.max_finite().map(|m| c.weight * m))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::stock;

    #[test]
    fn evaluate_soft_equality() {
        let mut inst = Instance::new(2).unwrap();
        inst.add_constraint(Value::one(), stock::soft_equality(), vec![0, 1])
            .unwrap();
        let unequal = Assignment(vec![false, true]);
        assert_eq!(inst.evaluate(&unequal).unwrap(), Value::one());
        let equal = Assignment(vec![false, false]);
        assert_eq!(inst.evaluate(&equal).unwrap(), Value::zero());
    }

    #[test]
    fn zero_weight_keeps_infinity() {
        let mut inst = Instance::new(1).unwrap();
        inst.add_constraint(Value::zero(), stock::constant_crisp(false), vec![0])
            .unwrap();
        let one = Assignment(vec![true]);
        assert_eq!(inst.evaluate(&one).unwrap(), Value::infinity());
        let zero = Assignment(vec![false]);
        assert_eq!(inst.evaluate(&zero).unwrap(), Value::zero());
    }

    #[test]
    fn evaluate_rejects_length_mismatch() {
        let inst = Instance::new(3).unwrap();
        assert!(inst.evaluate(&Assignment(vec![false])).is_err());
    }

    #[test]
    fn surjectivity() {
        assert!(Assignment(vec![false, true]).is_surjective());
        assert!(!Assignment(vec![false, false]).is_surjective());
        assert!(!Assignment(vec![true]).is_surjective());
    }

    #[test]
    fn assignment_lex_order_matches_index_order() {
        let a0 = Assignment::from_index(0, 2);
        let a1 = Assignment::from_index(1, 2);
        let a2 = Assignment::from_index(2, 2);
        assert_eq!(a0.0, vec![false, false]);
        assert_eq!(a1.0, vec![false, true]);
        assert_eq!(a2.0, vec![true, false]);
        assert!(a0 < a1 && a1 < a2);
    }

    #[test]
    fn mask_round_trip() {
        let a = Assignment(vec![true, false, true, true]);
        assert_eq!(a.to_mask(), 0b1101);
        assert_eq!(Assignment::from_mask(0b1101, 4), a);
    }

    #[test]
    fn monotone_in_weights() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(2..=5usize);
            let mut base = Instance::new(n).unwrap();
            let q = rng.random_range(1..=4usize);
            for _ in 0..q {
                let w = Value::from_int(rng.random_range(0..=3));
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                base.add_constraint(w, stock::soft_equality(), vec![u, v])
                    .unwrap();
            }
            // Bump one weight and check no assignment got cheaper.
            let mut bumped = base.clone();
            let idx = rng.random_range(0..q);
            bumped.constraints[idx].weight += Value::one();
            for k in 0..1usize << n {
                let s = Assignment::from_index(k, n);
                assert!(bumped.evaluate(&s).unwrap() >= base.evaluate(&s).unwrap());
            }
        }
    }
}
