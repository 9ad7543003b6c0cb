use super::{negate, ExpressionSet, Implication, LogicError};
use crate::rng::Mcg64;

/// Edits producing a literally similar but logically different set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AugmentOp {
    Delete,
    ReverseConditional,
    NegateSymbol,
}

/// Applies one seeded modification to `s`.
///
/// Candidates are listed in a fixed order and one is drawn with
/// [`Mcg64::below`]:
///
/// * `Delete`: every index.
/// * `ReverseConditional`: every index whose reversal is not already in `s`.
/// * `NegateSymbol`: every `(index, side)` pair, antecedent before
///   consequent, whose edited expression is not already in `s`.
///
/// Filtering keeps the output the same size as the input (one smaller for
/// `Delete`) and always different from it.
pub fn augment_negative(s: &ExpressionSet, op: AugmentOp, seed: u64) -> Result<ExpressionSet, LogicError> {
    if s.is_empty() {
        return Err(LogicError::EmptySet);
    }
    let exprs = s.as_slice();
    let mut rng = Mcg64::new(seed);

    let replace_at = |at: usize, with: Implication| -> ExpressionSet {
        exprs
            .iter()
            .enumerate()
            .map(|(n, &i)| if n == at { with } else { i })
            .collect()
    };

    let out = match op {
        AugmentOp::Delete => {
            let at = rng.below(exprs.len());
            exprs
                .iter()
                .enumerate()
                .filter(|&(n, _)| n != at)
                .map(|(_, &i)| i)
                .collect()
        }
        AugmentOp::ReverseConditional => {
            let candidates: Vec<(usize, Implication)> = exprs
                .iter()
                .enumerate()
                .map(|(n, i)| (n, i.reversed()))
                .filter(|(_, r)| !s.contains(r))
                .collect();
            if candidates.is_empty() {
                return Err(LogicError::NoModification(op));
            }
            let (at, with) = candidates[rng.below(candidates.len())];
            replace_at(at, with)
        }
        AugmentOp::NegateSymbol => {
            let mut candidates: Vec<(usize, Implication)> = Vec::new();
            for (n, i) in exprs.iter().enumerate() {
                let edits = [
                    Implication::new(negate(i.antecedent()), i.consequent()),
                    Implication::new(i.antecedent(), negate(i.consequent())),
                ];
                for edited in edits.into_iter().flatten() {
                    if !s.contains(&edited) {
                        candidates.push((n, edited));
                    }
                }
            }
            if candidates.is_empty() {
                return Err(LogicError::NoModification(op));
            }
            let (at, with) = candidates[rng.below(candidates.len())];
            replace_at(at, with)
        }
    };
    debug_assert!(out != *s);
    Ok(out)
}
