//! Shared generators for the acceptance suite. Everything is seeded, so
//! every run sees the same corpus.

use rand::prelude::*;
use rand::rngs::StdRng;

use surjvcsp::boolop::{apply_componentwise, BoolOp};
use surjvcsp::gmc::SetFunction;
use surjvcsp::instance::Instance;
use surjvcsp::mincut::Graph;
use surjvcsp::relation::{index_of_tuple, stock, tuple_of_index, Relation, WeightedRelation};
use surjvcsp::value::Value;

/// A random relation closed under the Boolean difference: random seed
/// members, then closure. Non-empty closures contain the zero tuple.
pub fn random_diff_closed(rng: &mut StdRng, arity: usize, density: f64) -> Relation {
    let size = 1usize << arity;
    let mut members: Vec<bool> = (0..size).map(|_| rng.random_bool(density)).collect();
    loop {
        let mut changed = false;
        for x in 0..size {
            if !members[x] {
                continue;
            }
            for y in 0..size {
                if !members[y] {
                    continue;
                }
                let xt = tuple_of_index(x, arity);
                let yt = tuple_of_index(y, arity);
                let image = index_of_tuple(&apply_componentwise(BoolOp::Diff, &[&xt, &yt]));
                if !members[image] {
                    members[image] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Relation::new(arity, (0..size).filter(|k| members[*k])).unwrap()
}

/// A random EDS weighted relation: Feas and Opt are random diff-closed
/// relations (Opt within Feas), zero on Opt, small positive rationals on
/// the rest of Feas, infinity outside.
pub fn random_eds_relation(rng: &mut StdRng, arity: usize) -> WeightedRelation {
    loop {
        let feas = random_diff_closed(rng, arity, 0.55);
        if feas.is_empty() {
            continue;
        }
        let inner = random_diff_closed(rng, arity, 0.6);
        let opt: Vec<usize> = feas.members().filter(|m| inner.contains(*m)).collect();
        if opt.is_empty() {
            continue;
        }
        let table: Vec<Value> = (0..1usize << arity)
            .map(|k| {
                if opt.contains(&k) {
                    Value::zero()
                } else if feas.contains(k) {
                    Value::ratio(rng.random_range(1..=4), rng.random_range(1..=2)).unwrap()
                } else {
                    Value::infinity()
                }
            })
            .collect();
        let rel = WeightedRelation::new(arity, table).unwrap();
        debug_assert!(surjvcsp::classify::is_eds_relation(&rel));
        return rel;
    }
}

/// A connected graph with positive rational weights: a random spanning
/// tree plus extra edges.
pub fn random_connected_graph(rng: &mut StdRng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, random_weight(rng)));
    }
    for _ in 0..rng.random_range(0..=n) {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.push((u.min(v), u.max(v), random_weight(rng)));
        }
    }
    Graph::new(n, &edges).unwrap()
}

fn random_weight(rng: &mut StdRng) -> Value {
    Value::ratio(rng.random_range(1..=4), rng.random_range(1..=2)).unwrap()
}

/// A random superadditive table: a non-negative modular part plus a few
/// "all of T inside X" bumps, occasionally infinite (never on singletons).
pub fn random_superadditive(rng: &mut StdRng, n: usize) -> SetFunction {
    let modular: Vec<Value> = (0..n)
        .map(|_| Value::from_int(rng.random_range(0..=3)))
        .collect();
    let mut bumps: Vec<(u64, Value)> = Vec::new();
    for _ in 0..rng.random_range(0..=3usize) {
        let t = rng.random_range(1..1u64 << n);
        let amount = if t.count_ones() >= 2 && rng.random_bool(0.15) {
            Value::infinity()
        } else {
            Value::from_int(rng.random_range(1..=5))
        };
        bumps.push((t, amount));
    }
    let table: Vec<Value> = (0..1u64 << n)
        .map(|x| {
            let mut v: Value = (0..n)
                .filter(|i| x >> i & 1 == 1)
                .map(|i| modular[i])
                .sum();
            for (t, amount) in &bumps {
                if x & t == *t {
                    v += *amount;
                }
            }
            v
        })
        .collect();
    SetFunction::dense(n, table).unwrap()
}

/// A strictly positive modular table (keeps λ positive on disconnected
/// graphs).
pub fn random_positive_modular(rng: &mut StdRng, n: usize) -> SetFunction {
    let modular: Vec<Value> = (0..n)
        .map(|_| Value::from_int(rng.random_range(1..=4)))
        .collect();
    let table: Vec<Value> = (0..1u64 << n)
        .map(|x| {
            (0..n)
                .filter(|i| x >> i & 1 == 1)
                .map(|i| modular[i])
                .sum()
        })
        .collect();
    SetFunction::dense(n, table).unwrap()
}

/// Styles of random EDS instances used by the solver criteria.
pub enum EdsInstanceKind {
    /// Plain random constraints.
    Plain,
    /// Hard equalities chaining all variables: surjectively infeasible.
    Infeasible,
    /// Constraints confined to the first variables, leaving two free:
    /// the all-zero labelling of the constrained part extends to a
    /// surjective optimum, so the GMC optimum is 0.
    LambdaZero,
}

pub fn random_eds_instance(rng: &mut StdRng, kind: EdsInstanceKind) -> Instance {
    let n = rng.random_range(2..=12usize);
    let mut inst = Instance::new(n).unwrap();
    let constrained = match kind {
        EdsInstanceKind::LambdaZero => n.saturating_sub(2).max(1),
        _ => n,
    };
    let q = rng.random_range(1..=4usize);
    for _ in 0..q {
        let arity = rng.random_range(1..=3usize.min(constrained));
        let rel = random_eds_relation(rng, arity);
        let scope: Vec<usize> = (0..arity)
            .map(|_| rng.random_range(0..constrained))
            .collect();
        let weight = if rng.random_bool(0.1) {
            Value::zero()
        } else {
            Value::ratio(rng.random_range(1..=3), rng.random_range(1..=2)).unwrap()
        };
        inst.add_constraint(weight, rel, scope).unwrap();
    }
    if matches!(kind, EdsInstanceKind::Infeasible) {
        let eq = WeightedRelation::crisp(&stock::equality());
        for i in 0..n - 1 {
            inst.add_constraint(Value::one(), eq.clone(), vec![i, i + 1])
                .unwrap();
        }
    }
    inst
}

/// The soft-equality encoding of global min-cut on a unit cycle.
pub fn cycle_mincut_instance(n: usize) -> Instance {
    let mut inst = Instance::new(n).unwrap();
    for i in 0..n {
        inst.add_constraint(Value::one(), stock::soft_equality(), vec![i, (i + 1) % n])
            .unwrap();
    }
    inst
}

/// A random simple graph with no isolated vertices, as unit-weight edges.
pub fn random_simple_graph(rng: &mut StdRng, n: usize) -> Graph {
    loop {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.5) {
                    pairs.push((u, v, Value::one()));
                }
            }
        }
        let graph = Graph::new(n, &pairs).unwrap();
        let isolated = (0..n).any(|v| !pairs.iter().any(|(a, b, _)| *a == v || *b == v));
        if !pairs.is_empty() && !isolated {
            return graph;
        }
    }
}

/// A random parity check matrix whose min-distance encoding stays within
/// `max_vars` variables.
pub fn random_parity_matrix(rng: &mut StdRng, max_vars: usize) -> Vec<Vec<bool>> {
    loop {
        let m = rng.random_range(1..=4usize);
        let n = rng.random_range(2..=8usize);
        let mut rows = Vec::new();
        for _ in 0..m {
            let mut row = vec![false; n];
            for _ in 0..rng.random_range(1..=3usize) {
                row[rng.random_range(0..n)] = true;
            }
            rows.push(row);
        }
        let extra: usize = rows
            .iter()
            .map(|r| {
                let k = r.iter().filter(|b| **b).count();
                if k == 0 {
                    0
                } else {
                    k + 1
                }
            })
            .sum();
        let nonzero = rows.iter().any(|r| r.iter().any(|b| *b));
        if nonzero && n + extra <= max_vars {
            return rows;
        }
    }
}

/// A random finite, non-negative instance for the maximisation fix-up.
pub fn random_nonneg_instance(rng: &mut StdRng, max_n: usize) -> Instance {
    let n = rng.random_range(2..=max_n);
    let mut inst = Instance::new(n).unwrap();
    for _ in 0..rng.random_range(1..=5usize) {
        let arity = rng.random_range(1..=2usize);
        let table: Vec<Value> = (0..1usize << arity)
            .map(|_| Value::from_int(rng.random_range(0..=4)))
            .collect();
        let rel = WeightedRelation::new(arity, table).unwrap();
        let scope: Vec<usize> = (0..arity).map(|_| rng.random_range(0..n)).collect();
        inst.add_constraint(Value::from_int(rng.random_range(1..=3)), rel, scope)
            .unwrap();
    }
    inst
}
