//! The Boolean operations used by polymorphism and multimorphism checks.

/// A named operation on {0,1} of arity 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOp {
    /// Constant 0.
    ConstZero,
    /// Constant 1.
    ConstOne,
    /// Negation.
    Not,
    Min,
    Max,
    /// Boolean difference `x ∧ ¬y`.
    Diff,
    /// Minority: returns the label occurring once (or the common label).
    Minority,
    /// Majority: returns the label occurring at least twice.
    Majority,
}

impl BoolOp {
    pub fn arity(&self) -> usize {
        match self {
            BoolOp::ConstZero | BoolOp::ConstOne | BoolOp::Not => 1,
            BoolOp::Min | BoolOp::Max | BoolOp::Diff => 2,
            BoolOp::Minority | BoolOp::Majority => 3,
        }
    }

    pub fn apply(&self, args: &[bool]) -> bool {
        debug_assert_eq!(args.len(), self.arity());
        match self {
            BoolOp::ConstZero => false,
            BoolOp::ConstOne => true,
            BoolOp::Not => !args[0],
            BoolOp::Min => args[0] & args[1],
            BoolOp::Max => args[0] | args[1],
            BoolOp::Diff => args[0] & !args[1],
            BoolOp::Minority => args[0] ^ args[1] ^ args[2],
            BoolOp::Majority => (args[0] & args[1]) | (args[0] & args[2]) | (args[1] & args[2]),
        }
    }
}

/// Applies a k-ary operation componentwise to k equal-length tuples.
pub fn apply_componentwise(op: BoolOp, tuples: &[&[bool]]) -> Vec<bool> {
    assert_eq!(tuples.len(), op.arity(), "operation arity mismatch");
    let len = tuples[0].len();
    assert!(
        tuples.iter().all(|t| t.len() == len),
        "tuple length mismatch"
    );
    (0..len)
        .map(|i| {
            let args: Vec<bool> = tuples.iter().map(|t| t[i]).collect();
            op.apply(&args)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(bits: &[u8]) -> Vec<bool> {
        bits.iter().map(|b| *b == 1).collect()
    }

    #[test]
    fn diff_componentwise() {
        let u = t(&[0, 1, 1]);
        let v = t(&[1, 0, 1]);
        assert_eq!(apply_componentwise(BoolOp::Diff, &[&u, &v]), t(&[0, 1, 0]));
    }

    #[test]
    fn min_componentwise() {
        let a = t(&[0, 1]);
        let b = t(&[1, 1]);
        assert_eq!(apply_componentwise(BoolOp::Min, &[&a, &b]), t(&[0, 1]));
    }

    #[test]
    fn minority_majority_identities() {
        for x in [false, true] {
            for y in [false, true] {
                assert_eq!(BoolOp::Minority.apply(&[x, x, y]), y);
                assert_eq!(BoolOp::Minority.apply(&[x, y, x]), y);
                assert_eq!(BoolOp::Minority.apply(&[y, x, x]), y);
                assert_eq!(BoolOp::Majority.apply(&[x, x, y]), x);
                assert_eq!(BoolOp::Majority.apply(&[x, y, x]), x);
                assert_eq!(BoolOp::Majority.apply(&[y, x, x]), x);
            }
        }
    }

    #[test]
    fn diff_of_self_is_zero_and_min_identity() {
        // min(x, y) = diff(x, diff(x, y)) over all Boolean pairs.
        for x in [false, true] {
            for y in [false, true] {
                assert!(!BoolOp::Diff.apply(&[x, x]));
                let d = BoolOp::Diff.apply(&[x, BoolOp::Diff.apply(&[x, y])]);
                assert_eq!(d, BoolOp::Min.apply(&[x, y]));
            }
        }
    }
}
