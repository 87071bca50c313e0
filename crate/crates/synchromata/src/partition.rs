//! Letter-induced partitions of the state set and the alphabet-3 order tests.

use crate::dual::dual_is_zero;
use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::order::{decide_order, OrderBudget};
use crate::sync::{min_core, sync_level};
use crate::transducer::{StateId, Transducer};
use crate::words::Letter;
use crate::Caps;

/// The letter-induced partition: start from the target sets
/// `[i] = { next(i, p) : p }` and merge overlapping sets to a fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterPartition {
    /// Sorted blocks: each carries its merged letters and its states.
    pub blocks: Vec<(Vec<Letter>, Vec<StateId>)>,
}

impl LetterPartition {
    pub fn block_of_letter(&self, i: Letter) -> Option<usize> {
        self.blocks
            .iter()
            .position(|(letters, _)| letters.contains(&i))
    }

    pub fn block_of_state(&self, q: StateId) -> Option<usize> {
        self.blocks
            .iter()
            .position(|(_, states)| states.contains(&q))
    }

    pub fn render(&self, t: &Transducer) -> String {
        let mut parts = Vec::new();
        for (letters, states) in &self.blocks {
            let ls: Vec<String> = letters.iter().map(|l| l.to_string()).collect();
            let ss: Vec<&str> = states.iter().map(|&s| t.state_name(s)).collect();
            parts.push(format!("[{}] = {{{}}}", ls.join(","), ss.join(",")));
        }
        format!("{{{}}}", parts.join(", "))
    }
}

pub fn letter_partition(t: &Transducer) -> LetterPartition {
    let n = t.alphabet();
    let mut blocks: Vec<(Vec<Letter>, Vec<StateId>)> = Vec::new();
    for i in 0..n {
        let mut states: Vec<StateId> = (0..t.state_count()).map(|q| t.next(q, i)).collect();
        states.sort();
        states.dedup();
        blocks.push((vec![i], states));
    }
    // Merge overlapping blocks to a fixpoint.
    loop {
        let mut merged = false;
        'outer: for a in 0..blocks.len() {
            for b in (a + 1)..blocks.len() {
                if blocks[a].1.iter().any(|s| blocks[b].1.contains(s)) {
                    let (letters_b, states_b) = blocks.remove(b);
                    blocks[a].0.extend(letters_b);
                    blocks[a].1.extend(states_b);
                    blocks[a].0.sort();
                    blocks[a].0.dedup();
                    blocks[a].1.sort();
                    blocks[a].1.dedup();
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    blocks.sort();
    LetterPartition { blocks }
}

/// The letter-induced partition of the inverse automaton.
pub fn letter_partition_inverse(t: &Transducer) -> Result<LetterPartition> {
    Ok(letter_partition(&t.inverse()?))
}

/// Outcome of the alphabet-3 order tests.
#[derive(Debug, Clone)]
pub enum H3Verdict {
    /// The machine either has infinite order or its dual collapses in one
    /// step at the synchronizing level; `resolved_infinite` reports the
    /// combined conclusion once the dual-zero test has been consulted.
    InfiniteOrZeroStep {
        evidence: String,
        resolved_infinite: Option<bool>,
    },
    Inconclusive {
        reason: String,
    },
}

/// Searches powers for the configuration forcing "infinite order or the dual
/// is already a zero at the synchronizing level", and applies the
/// inverse-partition disjointness test.
pub fn h3_order_tests(t: &Transducer, max_power: usize, caps: &Caps) -> Result<H3Verdict> {
    if t.alphabet() != 3 {
        return Err(Error::WrongAlphabet {
            expected: 3,
            found: t.alphabet(),
        });
    }
    if let Some(s) = t.non_invertible_state() {
        return Err(Error::NonInvertibleState(t.state_name(s).to_string()));
    }
    let partition = letter_partition(t);
    if partition.blocks.len() != 2 {
        return Ok(H3Verdict::Inconclusive {
            reason: format!(
                "letter partition has {} block(s), not 2",
                partition.blocks.len()
            ),
        });
    }
    // Identify the two-letter block {i1, i2} and the singleton letter i3.
    let (pair_letters, single_letter) = {
        let a = &partition.blocks[0].0;
        let b = &partition.blocks[1].0;
        if a.len() == 2 && b.len() == 1 {
            (a.clone(), b[0])
        } else if a.len() == 1 && b.len() == 2 {
            (b.clone(), a[0])
        } else {
            return Ok(H3Verdict::Inconclusive {
                reason: "letter blocks are not a 2+1 split".to_string(),
            });
        }
    };

    let k = sync_level(t, caps)?;
    let mut evidence: Option<String> = None;

    // The corollary's test: the inverse images of the merged letters are
    // disjoint in the inverse machine's partition.
    let inv_partition = letter_partition_inverse(t)?;
    let b1 = inv_partition.block_of_letter(pair_letters[0]);
    let b2 = inv_partition.block_of_letter(pair_letters[1]);
    if b1 != b2 {
        evidence = Some(format!(
            "inverse letter blocks of {} and {} are disjoint",
            pair_letters[0], pair_letters[1]
        ));
    }

    // The lemma's configuration on raw power tuples: two states of a power
    // with equal transitions on one letter whose outputs straddle the blocks.
    if evidence.is_none() {
        'levels: for l in 1..=max_power {
            let tuples = t
                .state_count()
                .checked_pow(l as u32)
                .filter(|&c| c <= caps.pair_cap);
            let Some(tuple_count) = tuples else { break };
            let power = t.power_raw(l)?;
            debug_assert_eq!(power.state_count(), tuple_count);
            // Group tuples by (letter, successor tuple) and look for outputs
            // on both sides of the partition within a group.
            for letter in 0..3 {
                let mut groups: std::collections::HashMap<usize, (bool, bool)> =
                    std::collections::HashMap::new();
                for s in 0..tuple_count {
                    let target = power.next(s, letter);
                    let out = power.out(s, letter);
                    let entry = groups.entry(target).or_insert((false, false));
                    if out == single_letter {
                        entry.1 = true;
                    } else {
                        entry.0 = true;
                    }
                    if entry.0 && entry.1 {
                        evidence = Some(format!(
                            "power {l}: two tuples share the {letter}-transition with outputs on both sides of the partition"
                        ));
                        break 'levels;
                    }
                }
            }
        }
    }

    match evidence {
        None => Ok(H3Verdict::Inconclusive {
            reason: "no straddling configuration found within the budget".to_string(),
        }),
        Some(evidence) => {
            let resolved_infinite = dual_is_zero(t, k.max(1), caps).ok().map(|zero| !zero);
            Ok(H3Verdict::InfiniteOrZeroStep {
                evidence,
                resolved_infinite,
            })
        }
    }
}

/// Attempts the alphabet-3 state-count reduction by conjugation: when the
/// partition shapes and the doubled-transition pair exist, conjugating by the
/// induced two-state involution merges the pair. Returns the conjugator and
/// the smaller conjugate, both verified.
pub fn reduce_by_conjugation_h3(t: &Transducer, caps: &Caps) -> Result<(Transducer, Transducer)> {
    let mut failures: Vec<String> = Vec::new();
    if t.alphabet() != 3 {
        return Err(Error::WrongAlphabet {
            expected: 3,
            found: t.alphabet(),
        });
    }
    if let Some(s) = t.non_invertible_state() {
        return Err(Error::NonInvertibleState(t.state_name(s).to_string()));
    }
    let partition = letter_partition(t);
    let shape_ok = partition.blocks.len() == 2
        && partition.blocks.iter().any(|(l, _)| l.len() == 2)
        && partition.blocks.iter().any(|(l, _)| l.len() == 1);
    if !shape_ok {
        failures.push("letter partition is not of shape {[i1,i2],[i3]}".to_string());
    }
    let inv_partition = letter_partition_inverse(t)?;
    let (pair_letters, single_letter) = if shape_ok {
        let two = partition
            .blocks
            .iter()
            .find(|(l, _)| l.len() == 2)
            .unwrap()
            .0
            .clone();
        let one = partition
            .blocks
            .iter()
            .find(|(l, _)| l.len() == 1)
            .unwrap()
            .0[0];
        (two, one)
    } else {
        (vec![0, 1], 2)
    };
    if shape_ok {
        let b1 = inv_partition.block_of_letter(pair_letters[0]);
        let b2 = inv_partition.block_of_letter(pair_letters[1]);
        let b3 = inv_partition.block_of_letter(single_letter);
        if b1 != b2 || b1 == b3 {
            failures.push("inverse partition does not split the same letters".to_string());
        }
    }

    // A pair of distinct states with identical transition rows, inside one block.
    let mut chosen: Option<(StateId, StateId)> = None;
    'outer: for q1 in 0..t.state_count() {
        for q2 in (q1 + 1)..t.state_count() {
            if (0..3).all(|i| t.next(q1, i) == t.next(q2, i))
                && partition.block_of_state(q1) == partition.block_of_state(q2)
            {
                chosen = Some((q1, q2));
                break 'outer;
            }
        }
    }
    let Some((q1, q2)) = chosen else {
        failures.push("no same-transition state pair inside one block".to_string());
        return Err(Error::HypothesesNotMet(failures));
    };

    // Predecessors with outputs on both sides of the partition.
    let mut j1p1: Option<(Letter, StateId)> = None;
    let mut j2p2: Option<(Letter, StateId)> = None;
    for p in 0..t.state_count() {
        for j in 0..3 {
            if t.next(p, j) == q1 && pair_letters.contains(&t.out(p, j)) && j1p1.is_none() {
                j1p1 = Some((j, p));
            }
            if t.next(p, j) == q2 && t.out(p, j) == single_letter && j2p2.is_none() {
                j2p2 = Some((j, p));
            }
        }
    }
    let (Some((j1, _p1)), Some((j2, _p2))) = (j1p1, j2p2) else {
        failures.push("no predecessors with outputs straddling the partition".to_string());
        return Err(Error::HypothesesNotMet(failures));
    };
    if !failures.is_empty() {
        return Err(Error::HypothesesNotMet(failures));
    }

    // The conjugator: two states, both reading {j1, j2} to the identity state
    // and everything else to the swapping state.
    let perm = {
        // The permutation induced by reading through q2^-1 then q1 (or the
        // other way around when the pair sits in the singleton block).
        let in_pair_block = partition
            .blocks
            .iter()
            .find(|(l, _)| l.len() == 2)
            .map(|(_, states)| states.contains(&q1))
            .unwrap_or(false);
        let (a, b) = if in_pair_block { (q2, q1) } else { (q1, q2) };
        let inv = t.inverse()?;
        let mut perm = vec![0usize; 3];
        for (x, slot) in perm.iter_mut().enumerate() {
            let mid = inv.out(a, x);
            *slot = t.out(b, mid);
        }
        perm
    };
    let names = vec!["c1".to_string(), "c2".to_string()];
    let mut next = vec![0usize; 6];
    let mut out = vec![0usize; 6];
    for c in 0..2 {
        for i in 0..3 {
            next[c * 3 + i] = if i == j1 || i == j2 { 0 } else { 1 };
            out[c * 3 + i] = if c == 0 { i } else { perm[i] };
        }
    }
    let conjugator = Transducer::from_tables(3, names, next, out);

    // The conjugator must be an involution.
    let square = min_core(&conjugator.product(&conjugator)?, caps)?;
    if !crate::minimize::equivalent(&square, &Transducer::identity(3))?.equivalent {
        return Err(Error::VerificationFailed(
            "the conjugator does not square to the identity".into(),
        ));
    }
    let reduced = {
        let cac = conjugator.product(t)?.product(&conjugator)?;
        minimize(&crate::sync::core(&cac, caps)?).transducer
    };
    if reduced.state_count() >= t.state_count() {
        return Err(Error::VerificationFailed(format!(
            "conjugation did not reduce the state count ({} -> {})",
            t.state_count(),
            reduced.state_count()
        )));
    }
    // Orders agree on registry-scale inputs; conjugation preserves order.
    let before = decide_order(t, &OrderBudget::default())?;
    let after = decide_order(&reduced, &OrderBudget::default())?;
    if before.is_finite() != after.is_finite() || before.period() != after.period() {
        return Err(Error::VerificationFailed(
            "conjugate changed the order".into(),
        ));
    }
    Ok((conjugator, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::example_registry;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn partition_of_infinite_order_machine() {
        let b = example_registry("B_WITNESS").unwrap().transducer;
        let p = letter_partition(&b);
        assert_eq!(p.render(&b), "{[0,1] = {q0}, [2] = {q1}}");
    }

    #[test]
    fn partition_of_identity_is_one_block() {
        let id = crate::transducer::Transducer::identity(3);
        let p = letter_partition(&id);
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.blocks[0].0, vec![0, 1, 2]);
    }

    #[test]
    fn h3_tests_on_exponential_growth_machine() {
        let g = example_registry("G_H3").unwrap().transducer;
        match h3_order_tests(&g, 4, &caps()).unwrap() {
            H3Verdict::InfiniteOrZeroStep {
                resolved_infinite, ..
            } => {
                assert_eq!(resolved_infinite, Some(true));
            }
            other => panic!("expected the straddling configuration, got {other:?}"),
        }
    }

    #[test]
    fn h3_tests_are_inconclusive_on_identity() {
        let id = crate::transducer::Transducer::identity(3);
        match h3_order_tests(&id, 3, &caps()).unwrap() {
            H3Verdict::Inconclusive { .. } => {}
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn h3_tests_reject_other_alphabets() {
        let h = example_registry("H_H4").unwrap().transducer;
        assert!(matches!(
            h3_order_tests(&h, 3, &caps()),
            Err(Error::WrongAlphabet {
                expected: 3,
                found: 4
            })
        ));
    }

    #[test]
    fn reduction_rejects_identity() {
        let id = crate::transducer::Transducer::identity(3);
        assert!(matches!(
            reduce_by_conjugation_h3(&id, &caps()),
            Err(Error::HypothesesNotMet(_))
        ));
    }
}
