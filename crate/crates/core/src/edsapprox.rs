//! Approximating EDS weighted relations (and whole instances) by
//! generalised min-cut instances.
//!
//! A GMC instance J α-approximates a set function γ when
//! `J(X) ≤ γ(X) ≤ α · J(X)` for every X. Two constructions are provided:
//! a strong one with factor `α^{n+2}(n³+2n)` driving the solver, and a
//! simpler downset/equality-edge one kept as an independent cross-check.

use crate::classify::{essentially_downset, DownsetDecomposition};
use crate::gmc::{GmcInstance, SetFunction};
use crate::instance::Instance;
use crate::mincut::Graph;
use crate::relation::{set_mask_of_index, WeightedRelation};
use crate::subset;
use crate::value::Value;
use crate::{Error, Result};

/// A GMC instance approximating one set function, with its factor.
///
/// The parts are kept raw (edges may carry infinite weights) so that the
/// instance-level construction can relabel them before any contraction
/// happens; [`gmc`](Self::gmc) builds the contracted instance.
#[derive(Debug, Clone)]
pub struct ApproxCertificate {
    pub ground_size: usize,
    pub edges: Vec<(usize, usize, Value)>,
    pub f: SetFunction,
    pub factor: Value,
}

impl ApproxCertificate {
    /// The approximating GMC instance (infinite edges contracted).
    pub fn gmc(&self) -> Result<GmcInstance> {
        let graph = Graph::new(self.ground_size, &self.edges)?;
        GmcInstance::new(graph, self.f.clone())
    }

    /// Raw objective on the uncontracted ground set.
    pub fn objective(&self, x: u64) -> Value {
        let mut total = self.f.value(x);
        for (u, v, w) in &self.edges {
            if subset::contains(x, *u) != subset::contains(x, *v) {
                total += *w;
            }
        }
        total
    }
}

/// The set function corresponding to a weighted relation that attains its
/// minimum at the zero tuple: `γ'(X) = γ(x_X) − γ(0…0)`, with coordinate i
/// of the relation at element i − 1 of the ground set.
pub fn set_function_of(rel: &WeightedRelation) -> Result<SetFunction> {
    let r = rel.arity();
    let zero_value = rel.value_at(0);
    if zero_value.is_infinite() {
        return Err(Error::argument(
            "the zero tuple must be feasible to derive a set function",
        ));
    }
    if rel.table().iter().any(|v| *v < zero_value) {
        return Err(Error::argument(
            "the relation must attain its minimum at the zero tuple",
        ));
    }
    let mut table = vec![Value::zero(); 1 << r];
    for k in 0..1usize << r {
        table[set_mask_of_index(k, r) as usize] = rel.value_at(k).sub_finite(&zero_value);
    }
    SetFunction::dense(r, table)
}

/// The approximation factor `α^{r+2} · (r³ + 2r)` of the strong
/// construction.
pub fn approx_factor(r: usize, alpha: &Value) -> Value {
    let poly = Value::from_int((r * r * r + 2 * r) as i128);
    alpha.pow(r as u32 + 2) * poly
}

fn check_alpha_eds(f: &SetFunction, alpha: &Value) -> Result<()> {
    if !alpha.is_finite() || *alpha < Value::one() {
        return Err(Error::argument("alpha must be a finite rational >= 1"));
    }
    let n = f.ground_size();
    let full = subset::full_mask(n);
    for x in 0..=full {
        let fx = f.value(x);
        if fx.is_infinite() {
            continue;
        }
        for y in 0..=full {
            let fy = f.value(y);
            if fy.is_infinite() {
                continue;
            }
            let rhs = f.value(x & !y);
            if *alpha * (fx + fy) < rhs {
                return Err(Error::argument(format!(
                    "set function is not {alpha}-EDS (X={x:#b}, Y={y:#b})"
                )));
            }
        }
    }
    Ok(())
}

/// The strong construction: edge weights from the cheapest separating set,
/// `w(u,v) = min{γ(Z) : |Z ∩ {u,v}| = 1} / (n³+2n)`, and
/// `f(X) = |X| · min{(|Z|²+2) γ(Z) : X ⊆ Z} / (n³+2n)`. The result
/// `approx_factor(n, α)`-approximates any α-EDS input; the constructed f
/// is validated superadditive.
pub fn approx_strong(gamma: &SetFunction, alpha: &Value) -> Result<ApproxCertificate> {
    let n = gamma.ground_size();
    check_alpha_eds(gamma, alpha)?;
    let full = subset::full_mask(n);
    let inv_denom = Value::ratio(1, (n * n * n + 2 * n) as i128)?;

    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let mut cheapest = Value::infinity();
            for z in 0..=full {
                if subset::contains(z, u) != subset::contains(z, v) {
                    cheapest = cheapest.min(gamma.value(z));
                }
            }
            let w = inv_denom * cheapest;
            if !w.is_zero() {
                edges.push((u, v, w));
            }
        }
    }

    let mut table = vec![Value::zero(); 1 << n];
    for x in 1..=full {
        let mut cheapest = Value::infinity();
        // Z ranges over supersets of x.
        let free = full & !x;
        let mut extra = free;
        loop {
            let z = x | extra;
            let card = Value::from_int((z.count_ones() as i128) * (z.count_ones() as i128) + 2);
            cheapest = cheapest.min(card * gamma.value(z));
            if extra == 0 {
                break;
            }
            extra = (extra - 1) & free;
        }
        table[x as usize] = Value::from_int(x.count_ones() as i128) * inv_denom * cheapest;
    }
    let f = SetFunction::dense(n, table)?;
    f.validate(false)?;

    Ok(ApproxCertificate {
        ground_size: n,
        edges,
        f,
        factor: approx_factor(n, alpha),
    })
}

/// Turns a downset decomposition into its certificate ingredients:
/// the hard part (0/∞ membership of `X ∩ A` in the residual downset) and
/// the soft part (|X ∩ A| outside the downset), plus the equality pairs.
fn decomposition_parts(
    dec: &DownsetDecomposition,
    n: usize,
    hard: bool,
) -> (SetFunction, Vec<(usize, usize)>) {
    let reps: Vec<usize> = dec.representatives.clone();
    let residual = dec.residual.clone();
    let table: Vec<Value> = (0..1u64 << n)
        .map(|x| {
            let tuple: Vec<bool> = reps.iter().map(|c| subset::contains(x, *c)).collect();
            if residual.contains_tuple(&tuple) {
                Value::zero()
            } else if hard {
                Value::infinity()
            } else {
                Value::from_int(
                    reps.iter().filter(|c| subset::contains(x, **c)).count() as i128
                )
            }
        })
        .collect();
    let f = SetFunction::dense(n, table).expect("arity within bounds");
    (f, dec.equality_pairs())
}

/// The simple construction for an EDS weighted relation: infinite edges
/// realise the feasibility equalities, unit edges the optimality
/// equalities, and the two residual downsets become superadditive
/// functions; a global scaling by b_min/n puts the objective below γ. The
/// factor is n·b_max/b_min over the intermediate values B, and exactly 1
/// when B is empty.
pub fn approx_simple(rel: &WeightedRelation) -> Result<ApproxCertificate> {
    let feas_dec = essentially_downset(&rel.feas())
        .ok_or_else(|| Error::argument("relation is not EDS (feasibility side)"))?;
    let opt_dec = essentially_downset(&rel.opt())
        .ok_or_else(|| Error::argument("relation is not EDS (optimality side)"))?;
    let gamma = set_function_of(rel)?;
    let n = rel.arity();

    let (f_feas, eq_feas) = decomposition_parts(&feas_dec, n, true);
    let (f_opt, eq_opt) = decomposition_parts(&opt_dec, n, false);
    let mut edges = Vec::new();
    for (a, b) in eq_feas {
        edges.push((a, b, Value::infinity()));
    }
    for (a, b) in eq_opt {
        edges.push((a, b, Value::one()));
    }
    let f = SetFunction::sum(n, vec![f_feas, f_opt])?;

    // Intermediate values of γ decide the scaling.
    let full = subset::full_mask(n);
    let intermediate: Vec<Value> = (0..=full)
        .map(|x| gamma.value(x))
        .filter(|v| v.is_finite() && !v.is_zero())
        .collect();
    if intermediate.is_empty() {
        return Ok(ApproxCertificate {
            ground_size: n,
            edges,
            f,
            factor: Value::one(),
        });
    }
    let b_min = *intermediate.iter().min().unwrap();
    let b_max = *intermediate.iter().max().unwrap();
    let scale = Value::Finite(
        b_min.as_rational().unwrap() / num_rational::Ratio::from_integer(n as i128),
    );
    let edges = edges
        .into_iter()
        .map(|(u, v, w)| (u, v, scale * w))
        .collect();
    let f = SetFunction::scaled(scale, f)?;
    let factor = Value::from_int(n as i128)
        * Value::Finite(b_max.as_rational().unwrap() / b_min.as_rational().unwrap());
    Ok(ApproxCertificate {
        ground_size: n,
        edges,
        f,
        factor,
    })
}

/// Combines per-constraint certificates into one GMC instance for a whole
/// instance: certificate vertices are relabelled to the scope variables
/// (repeats identified, self-loop edges dropped, the set function taken of
/// the expanded preimage), everything scaled by the constraint weight, and
/// the parts summed. Returns the instance and the combined factor, the
/// maximum over the constraints.
pub fn instance_gmc(
    instance: &Instance,
    certificates: &[ApproxCertificate],
) -> Result<(GmcInstance, Value)> {
    if certificates.len() != instance.constraints().len() {
        return Err(Error::argument(
            "one certificate per constraint is required",
        ));
    }
    let n = instance.num_vars();
    let mut edges = Vec::new();
    let mut parts = Vec::new();
    let mut factor = Value::one();
    for (c, cert) in instance.constraints().iter().zip(certificates) {
        if cert.ground_size != c.relation.arity() {
            return Err(Error::argument(
                "certificate ground set must match the constraint arity",
            ));
        }
        for (a, b, w) in &cert.edges {
            let (u, v) = (c.scope[*a], c.scope[*b]);
            if u != v {
                edges.push((u, v, c.weight * *w));
            }
        }
        parts.push(SetFunction::scaled(
            c.weight,
            SetFunction::pullback(cert.f.clone(), c.scope.clone(), n)?,
        )?);
        factor = factor.max(cert.factor);
    }
    let graph = Graph::new(n, &edges)?;
    let gmc = GmcInstance::new(graph, SetFunction::sum(n, parts)?)?;
    Ok((gmc, factor))
}
