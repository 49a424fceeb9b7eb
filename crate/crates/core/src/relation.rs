//! Relations, weighted relations, and the closure operations on them.
//!
//! An r-ary weighted relation is a table of `2^r` extended rationals over
//! {0,1}-tuples. The table is indexed with the first coordinate most
//! significant: tuple `(x_1, …, x_r)` lives at index `Σ x_i · 2^{r−i}`, so
//! ascending index order is lexicographic tuple order.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::boolop::{apply_componentwise, BoolOp};
use crate::value::Value;
use crate::{Error, Result};

/// Largest supported arity. Keeps every per-relation loop desk-scale.
pub const R_MAX: usize = 8;

/// Decodes table index `k` into the tuple `(x_1, …, x_r)`.
pub fn tuple_of_index(k: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|i| k >> (arity - 1 - i) & 1 == 1).collect()
}

/// Encodes a tuple into its table index.
pub fn index_of_tuple(tuple: &[bool]) -> usize {
    tuple.iter().fold(0, |k, b| k << 1 | usize::from(*b))
}

/// Converts a table index to the subset mask over coordinates: coordinate
/// `i` (0-based) maps to bit `i`. This is a bit reversal within `arity` bits.
pub fn set_mask_of_index(k: usize, arity: usize) -> u64 {
    let mut m = 0u64;
    for i in 0..arity {
        if k >> (arity - 1 - i) & 1 == 1 {
            m |= 1 << i;
        }
    }
    m
}

/// Inverse of [`set_mask_of_index`].
pub fn index_of_set_mask(mask: u64, arity: usize) -> usize {
    let mut k = 0usize;
    for i in 0..arity {
        if mask >> i & 1 == 1 {
            k |= 1 << (arity - 1 - i);
        }
    }
    k
}

fn check_arity(arity: usize) -> Result<()> {
    if !(1..=R_MAX).contains(&arity) {
        return Err(Error::argument(format!(
            "arity {arity} out of range 1..={R_MAX}"
        )));
    }
    Ok(())
}

/// A crisp relation: a set of r-bit tuples, stored as table indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    arity: usize,
    members: BTreeSet<u16>,
}

impl Relation {
    pub fn new(arity: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_arity(arity)?;
        let size = 1usize << arity;
        let mut set = BTreeSet::new();
        for m in members {
            if m >= size {
                return Err(Error::argument(format!(
                    "tuple index {m} out of range for arity {arity}"
                )));
            }
            set.insert(m as u16);
        }
        Ok(Relation {
            arity,
            members: set,
        })
    }

    pub fn empty(arity: usize) -> Self {
        Relation::new(arity, []).expect("valid arity")
    }

    pub fn full(arity: usize) -> Self {
        Relation::new(arity, 0..1usize << arity).expect("valid arity")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.contains(&(index as u16))
    }

    pub fn contains_tuple(&self, tuple: &[bool]) -> bool {
        self.contains(index_of_tuple(tuple))
    }

    /// Member indices in ascending (lexicographic tuple) order.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|m| *m as usize)
    }

    pub fn member_tuples(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        self.members().map(|m| tuple_of_index(m, self.arity))
    }

    pub fn insert(&mut self, index: usize) {
        debug_assert!(index < 1 << self.arity);
        self.members.insert(index as u16);
    }
}

/// An r-ary weighted relation: `2^r` extended rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedRelation {
    arity: usize,
    table: Vec<Value>,
}

impl WeightedRelation {
    pub fn new(arity: usize, table: Vec<Value>) -> Result<Self> {
        check_arity(arity)?;
        if table.len() != 1 << arity {
            return Err(Error::argument(format!(
                "table length {} does not match arity {arity}",
                table.len()
            )));
        }
        Ok(WeightedRelation { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> Value) -> Result<Self> {
        check_arity(arity)?;
        let table = (0..1usize << arity)
            .map(|k| f(&tuple_of_index(k, arity)))
            .collect();
        WeightedRelation::new(arity, table)
    }

    /// The crisp 0/∞ relation with the given feasible set.
    pub fn crisp(rel: &Relation) -> Self {
        let table = (0..1usize << rel.arity())
            .map(|k| {
                if rel.contains(k) {
                    Value::zero()
                } else {
                    Value::infinity()
                }
            })
            .collect();
        WeightedRelation {
            arity: rel.arity(),
            table,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Value] {
        &self.table
    }

    pub fn value_at(&self, index: usize) -> Value {
        self.table[index]
    }

    pub fn value_of(&self, tuple: &[bool]) -> Value {
        self.table[index_of_tuple(tuple)]
    }

    /// Finite-valued tuples.
    pub fn feas(&self) -> Relation {
        Relation {
            arity: self.arity,
            members: (0..self.table.len())
                .filter(|k| self.table[*k].is_finite())
                .map(|k| k as u16)
                .collect(),
        }
    }

    /// Tuples attaining the minimum finite value; empty iff Feas is empty.
    pub fn opt(&self) -> Relation {
        let min = self.table.iter().filter(|v| v.is_finite()).min();
        match min {
            None => Relation::empty(self.arity),
            Some(min) => Relation {
                arity: self.arity,
                members: (0..self.table.len())
                    .filter(|k| &self.table[*k] == min)
                    .map(|k| k as u16)
                    .collect(),
            },
        }
    }

    /// Crisp means every finite value is minimal: Feas = Opt.
    pub fn is_crisp(&self) -> bool {
        self.feas() == self.opt()
    }

    /// Value 0 on members of `rel`, 1 elsewhere.
    pub fn soft(rel: &Relation) -> Self {
        let table = (0..1usize << rel.arity())
            .map(|k| {
                if rel.contains(k) {
                    Value::zero()
                } else {
                    Value::one()
                }
            })
            .collect();
        WeightedRelation {
            arity: rel.arity(),
            table,
        }
    }

    /// Exchanges the labels 0 and 1: the table entry at `k` moves to the
    /// index with all `r` bits flipped.
    pub fn negate(&self) -> Self {
        let mask = (1usize << self.arity) - 1;
        let table = (0..self.table.len())
            .map(|k| self.table[k ^ mask])
            .collect();
        WeightedRelation {
            arity: self.arity,
            table,
        }
    }

    pub fn add_constant(&self, c: Value) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::argument("added constant must be finite"));
        }
        Ok(WeightedRelation {
            arity: self.arity,
            table: self.table.iter().map(|v| *v + c).collect(),
        })
    }

    /// Non-negative scaling; `0 · γ` is the 0/∞ table of `Feas(γ)`.
    pub fn scale(&self, c: Value) -> Result<Self> {
        if !c.is_finite() || c < Value::zero() {
            return Err(Error::argument("scale factor must be finite and >= 0"));
        }
        Ok(WeightedRelation {
            arity: self.arity,
            table: self.table.iter().map(|v| c * *v).collect(),
        })
    }

    /// Coordinate mapping: `γ'(x_1, …, x_{r'}) = γ(x_{f(1)}, …, x_{f(r)})`.
    /// `f` maps 0-based source coordinates to 0-based target coordinates.
    pub fn coord_map(&self, f: &[usize], new_arity: usize) -> Result<Self> {
        check_arity(new_arity)?;
        if f.len() != self.arity {
            return Err(Error::argument("coordinate map length must equal arity"));
        }
        if f.iter().any(|i| *i >= new_arity) {
            return Err(Error::argument("coordinate map target out of range"));
        }
        let table = (0..1usize << new_arity)
            .map(|k| {
                let x = tuple_of_index(k, new_arity);
                let pre: Vec<bool> = f.iter().map(|i| x[*i]).collect();
                self.value_of(&pre)
            })
            .collect();
        WeightedRelation::new(new_arity, table)
    }

    /// Minimisation over coordinate `i` (0-based). Rejected on arity 1:
    /// nullary relations are unsupported.
    pub fn minimise(&self, i: usize) -> Result<Self> {
        if self.arity == 1 {
            return Err(Error::argument(
                "minimisation on an arity-1 relation would produce a nullary relation",
            ));
        }
        if i >= self.arity {
            return Err(Error::argument("minimised coordinate out of range"));
        }
        let new_arity = self.arity - 1;
        let table = (0..1usize << new_arity)
            .map(|k| {
                let x = tuple_of_index(k, new_arity);
                let mut lo = x.clone();
                lo.insert(i, false);
                let mut hi = x;
                hi.insert(i, true);
                self.value_of(&lo).min(self.value_of(&hi))
            })
            .collect();
        WeightedRelation::new(new_arity, table)
    }

    /// Pinning coordinate `i` (0-based) to label `d`. Rejected on arity 1
    /// for the same reason as [`minimise`](Self::minimise).
    pub fn pin(&self, i: usize, d: bool) -> Result<Self> {
        if self.arity == 1 {
            return Err(Error::argument(
                "pinning an arity-1 relation would produce a nullary relation",
            ));
        }
        if i >= self.arity {
            return Err(Error::argument("pinned coordinate out of range"));
        }
        let new_arity = self.arity - 1;
        let table = (0..1usize << new_arity)
            .map(|k| {
                let mut x = tuple_of_index(k, new_arity);
                x.insert(i, d);
                self.value_of(&x)
            })
            .collect();
        WeightedRelation::new(new_arity, table)
    }

    /// Pointwise addition of two relations of equal arity.
    pub fn add(&self, other: &WeightedRelation) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::argument("added relations must have equal arity"));
        }
        Ok(WeightedRelation {
            arity: self.arity,
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(a, b)| *a + *b)
                .collect(),
        })
    }

    /// True when the two relations differ by an additive rational constant.
    pub fn equivalent_mod_constant(&self, other: &WeightedRelation) -> bool {
        if self.arity != other.arity {
            return false;
        }
        let mut shift: Option<Value> = None;
        for (a, b) in self.table.iter().zip(&other.table) {
            match (a.is_finite(), b.is_finite()) {
                (false, false) => continue,
                (true, true) => {
                    let d = a.sub_finite(b);
                    match &shift {
                        None => shift = Some(d),
                        Some(s) if *s == d => {}
                        Some(_) => return false,
                    }
                }
                _ => return false,
            }
        }
        true
    }

    /// Largest finite table value, if any.
    pub fn max_finite(&self) -> Option<Value> {
        self.table.iter().filter(|v| v.is_finite()).max().copied()
    }

    /// Smallest finite table value, if any.
    pub fn min_finite(&self) -> Option<Value> {
        self.table.iter().filter(|v| v.is_finite()).min().copied()
    }
}

/// Applies a k-ary operation componentwise to k member tuples given by
/// table indices, returning the resulting table index.
pub fn apply_op_to_indices(op: BoolOp, indices: &[usize], arity: usize) -> usize {
    let tuples: Vec<Vec<bool>> = indices
        .iter()
        .map(|k| tuple_of_index(*k, arity))
        .collect();
    let refs: Vec<&[bool]> = tuples.iter().map(|t| t.as_slice()).collect();
    index_of_tuple(&apply_componentwise(op, &refs))
}

/// A named, finite set of weighted relations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Language {
    relations: BTreeMap<String, WeightedRelation>,
}

impl Language {
    pub fn new() -> Self {
        Language::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, rel: WeightedRelation) {
        self.relations.insert(name.into(), rel);
    }

    pub fn get(&self, name: &str) -> Option<&WeightedRelation> {
        self.relations.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &WeightedRelation)> {
        self.relations.iter()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Label-flip of every relation.
    pub fn negate(&self) -> Language {
        Language {
            relations: self
                .relations
                .iter()
                .map(|(n, r)| (n.clone(), r.negate()))
                .collect(),
        }
    }
}

impl FromIterator<(String, WeightedRelation)> for Language {
    fn from_iter<T: IntoIterator<Item = (String, WeightedRelation)>>(iter: T) -> Self {
        Language {
            relations: iter.into_iter().collect(),
        }
    }
}

/// Stock relations used by the tests, gadgets and the classifier corpus.
pub mod stock {
    use super::*;

    /// Unary relation holding only the given label.
    pub fn constant(d: bool) -> Relation {
        Relation::new(1, [usize::from(d)]).unwrap()
    }

    /// The crisp 0/∞ unary constant.
    pub fn constant_crisp(d: bool) -> WeightedRelation {
        WeightedRelation::crisp(&constant(d))
    }

    /// Soft unary constant: 0 on `d`, 1 on the other label.
    pub fn soft_constant(d: bool) -> WeightedRelation {
        WeightedRelation::soft(&constant(d))
    }

    /// Binary equality {00, 11}.
    pub fn equality() -> Relation {
        Relation::new(2, [0b00, 0b11]).unwrap()
    }

    /// Soft equality: 0 on equal pairs, 1 on unequal ones.
    pub fn soft_equality() -> WeightedRelation {
        WeightedRelation::soft(&equality())
    }

    /// Binary disequality {01, 10}.
    pub fn disequality() -> Relation {
        Relation::new(2, [0b01, 0b10]).unwrap()
    }

    /// Binary order x ≤ y: {00, 01, 11}.
    pub fn leq() -> Relation {
        Relation::new(2, [0b00, 0b01, 0b11]).unwrap()
    }

    /// Binary order x ≥ y: {00, 10, 11}.
    pub fn geq() -> Relation {
        Relation::new(2, [0b00, 0b10, 0b11]).unwrap()
    }

    /// Binary OR {01, 10, 11}.
    pub fn or() -> Relation {
        Relation::new(2, [0b01, 0b10, 0b11]).unwrap()
    }

    /// Binary NAND {00, 01, 10}.
    pub fn nand() -> Relation {
        Relation::new(2, [0b00, 0b01, 0b10]).unwrap()
    }

    /// Charges 1 exactly when x = 0 and y = 1, i.e. Soft(geq).
    pub fn soft_geq() -> WeightedRelation {
        WeightedRelation::soft(&geq())
    }

    /// Even-parity relation of the given arity.
    pub fn even_parity(arity: usize) -> Relation {
        Relation::new(
            arity,
            (0..1usize << arity).filter(|k| k.count_ones() % 2 == 0),
        )
        .unwrap()
    }

    /// The ternary max-cut gadget relation with parameter `w`:
    /// 2 if z = 1 and x = y; 1 if z = 1 and x ≠ y; 0 if z = 0 and
    /// x = y = 0; w otherwise.
    pub fn maxcut_gadget(w: i128) -> WeightedRelation {
        WeightedRelation::from_fn(3, |t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            if z {
                if x == y {
                    Value::from_int(2)
                } else {
                    Value::one()
                }
            } else if !x && !y {
                Value::zero()
            } else {
                Value::from_int(w)
            }
        })
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::stock::*;
    use super::*;

    #[test]
    fn index_conventions() {
        // (x1, x2, x3) = (1, 0, 1) sits at index 5: x1 is most significant.
        assert_eq!(index_of_tuple(&[true, false, true]), 5);
        assert_eq!(tuple_of_index(5, 3), vec![true, false, true]);
        // Set-mask convention puts coordinate 1 at bit 0.
        assert_eq!(set_mask_of_index(0b100, 3), 0b001);
        assert_eq!(index_of_set_mask(0b001, 3), 0b100);
    }

    #[test]
    fn feas_and_opt_views() {
        let eq = soft_equality(); // table (0, 1, 1, 0)
        assert_eq!(eq.feas(), Relation::full(2));
        assert_eq!(eq.opt(), equality());

        let unary = WeightedRelation::new(1, vec![Value::zero(), Value::infinity()]).unwrap();
        assert_eq!(unary.feas(), constant(false));
        assert_eq!(unary.opt(), constant(false));

        // Feas of the max-cut gadget is everything; Opt is the zero tuple.
        let mu5 = maxcut_gadget(5);
        assert_eq!(mu5.feas(), Relation::full(3));
        assert_eq!(mu5.opt(), Relation::new(3, [0]).unwrap());
    }

    #[test]
    fn crispness() {
        assert!(WeightedRelation::crisp(&leq()).is_crisp());
        assert!(!soft_equality().is_crisp());
        let empty = WeightedRelation::new(1, vec![Value::infinity(); 2]).unwrap();
        assert!(empty.is_crisp());
    }

    #[test]
    fn soft_variants() {
        assert_eq!(
            soft_constant(false).table(),
            &[Value::zero(), Value::one()]
        );
        assert_eq!(
            soft_equality().table(),
            &[Value::zero(), Value::one(), Value::one(), Value::zero()]
        );
        let full = WeightedRelation::soft(&Relation::full(2));
        assert!(full.table().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn negation() {
        assert_eq!(soft_constant(false).negate(), soft_constant(true));
        assert_eq!(soft_equality().negate(), soft_equality());
        let mu = maxcut_gadget(4);
        assert_eq!(mu.negate().negate(), mu);
    }

    #[test]
    fn scaling_by_zero_gives_feasibility_table() {
        let scaled = soft_equality().scale(Value::zero()).unwrap();
        assert!(scaled.table().iter().all(|v| v.is_zero()));
        let r0 = constant_crisp(false);
        let scaled = r0.scale(Value::zero()).unwrap();
        assert_eq!(scaled.table(), r0.table());
        assert!(soft_equality().scale(Value::from_int(-1)).is_err());
    }

    #[test]
    fn pinning_and_minimisation() {
        let eq = soft_equality();
        let pinned = eq.pin(0, false).unwrap();
        assert_eq!(pinned.table(), &[Value::zero(), Value::one()]);

        assert!(soft_constant(false).minimise(0).is_err());
        assert!(soft_constant(false).pin(0, false).is_err());

        let minimised = eq.minimise(1).unwrap();
        assert_eq!(minimised.table(), &[Value::zero(), Value::zero()]);
    }

    #[test]
    fn coordinate_mapping() {
        // Duplicate a coordinate: γ'(x) = γ(x, x).
        let eq = soft_equality();
        let diag = eq.coord_map(&[0, 0], 1).unwrap();
        assert_eq!(diag.table(), &[Value::zero(), Value::zero()]);
        // Swap coordinates of soft_geq: charges when x = 1, y = 0.
        let swapped = soft_geq().coord_map(&[1, 0], 2).unwrap();
        assert_eq!(swapped.value_of(&[true, false]), Value::one());
        assert_eq!(swapped.value_of(&[false, true]), Value::zero());
        assert!(eq.coord_map(&[0], 1).is_err());
        assert!(eq.coord_map(&[0, 9], 9).is_err());
    }

    #[test]
    fn addition_requires_equal_arity() {
        let sum = soft_equality().add(&soft_geq()).unwrap();
        assert_eq!(sum.value_of(&[false, true]), Value::from_int(2));
        assert!(soft_equality().add(&soft_constant(false)).is_err());
    }

    #[test]
    fn equivalence_mod_constant() {
        let eq = soft_equality();
        let shifted = eq.add_constant(Value::from_int(7)).unwrap();
        assert!(eq.equivalent_mod_constant(&shifted));
        assert!(!eq.equivalent_mod_constant(&soft_geq()));
    }

    #[test]
    fn opt_subset_of_feas_on_random_tables() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let arity = rng.random_range(1..=3usize);
            let table: Vec<Value> = (0..1usize << arity)
                .map(|_| {
                    if rng.random_bool(0.25) {
                        Value::infinity()
                    } else {
                        Value::from_int(rng.random_range(-4..=4))
                    }
                })
                .collect();
            let rel = WeightedRelation::new(arity, table).unwrap();
            let feas = rel.feas();
            let opt = rel.opt();
            assert!(opt.members().all(|m| feas.contains(m)));
            assert_eq!(opt.is_empty(), feas.is_empty());
        }
    }

    #[test]
    fn arity_bounds_enforced() {
        assert!(Relation::new(0, []).is_err());
        assert!(Relation::new(9, []).is_err());
        assert!(WeightedRelation::new(2, vec![Value::zero(); 3]).is_err());
    }
}
