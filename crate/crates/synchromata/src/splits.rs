//! Splits of the level-`r` dual, splitting lengths, and the sigma transformations.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::sync::sync_analysis;
use crate::transducer::{StateId, Transducer};
use crate::words::{count_words, Word};
use crate::Caps;

/// A split of the level-`r` dual: two state tuples read from the word `gamma`
/// whose successive images force equal states at every step except the last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub gamma: Word,
    /// First tuple; its head is one element of the top.
    pub upper: Vec<StateId>,
    /// Second tuple; its head is the other element of the top.
    pub lower: Vec<StateId>,
    pub length: usize,
    /// `{upper[0], lower[0]}` as a sorted pair.
    pub top: (StateId, StateId),
    /// Forced states of the two final images, as a sorted pair.
    pub bottom: (StateId, StateId),
    pub bottom_depends_only_on_top: bool,
}

fn sorted_pair(a: StateId, b: StateId) -> (StateId, StateId) {
    (a.min(b), a.max(b))
}

/// Outcome of a splitting-length search.
#[derive(Debug, Clone)]
pub enum SplitSearch {
    Found(Split),
    /// No split up to the depth bound; `exhausted` is set when the search
    /// closed every reachable pair, proving the splitting length infinite.
    NoSplitUpTo {
        max_len: usize,
        exhausted: bool,
    },
}

impl SplitSearch {
    pub fn found(&self) -> Option<&Split> {
        match self {
            SplitSearch::Found(s) => Some(s),
            SplitSearch::NoSplitUpTo { .. } => None,
        }
    }
}

/// Searches for the minimal splitting length of the level-`r` dual via a
/// breadth-first search over ordered pairs of words with equal forced states;
/// a split is the first pair whose forced states differ. Tuples are
/// reconstructed from parent pointers.
pub fn splitting_length(
    t: &Transducer,
    r: usize,
    max_len: usize,
    caps: &Caps,
) -> Result<SplitSearch> {
    let info = sync_analysis(t, caps)?;
    if r < info.level {
        return Err(Error::PreconditionUnmet(format!(
            "split level {r} is below the synchronizing level {}",
            info.level
        )));
    }
    let n = t.alphabet();
    let total = count_words(n, r, caps.word_cap)?;
    let states = t.state_count();

    // Forced state per word rank at length r.
    let forced: Vec<u32> = (0..total)
        .map(|rank| t.read_state(0, Word::from_rank(rank, r, n).letters()) as u32)
        .collect();
    // Image rank of word `w` through state `q`, tabulated.
    let image: Vec<u32> = {
        let mut v = vec![0u32; total * states];
        for rank in 0..total {
            let w = Word::from_rank(rank, r, n);
            for q in 0..states {
                v[rank * states + q] = Word::new(t.read_output(q, w.letters())).rank(n) as u32;
            }
        }
        v
    };

    // Multi-source BFS from all diagonal pairs.
    let mut parent: HashMap<(u32, u32), (u32, u32, u8, u8)> = HashMap::new();
    let mut queue: VecDeque<((u32, u32), usize)> = VecDeque::new();
    for rank in 0..total as u32 {
        parent.insert((rank, rank), (u32::MAX, u32::MAX, 0, 0));
        queue.push_back(((rank, rank), 0));
    }
    while let Some(((u, v), depth)) = queue.pop_front() {
        if depth >= max_len {
            continue;
        }
        if parent.len() > caps.pair_cap {
            return Err(Error::BudgetExceeded(
                "split search exceeded the pair cap".into(),
            ));
        }
        for q in 0..states {
            let u2 = image[u as usize * states + q];
            for p in 0..states {
                let v2 = image[v as usize * states + p];
                if forced[u2 as usize] != forced[v2 as usize] {
                    // Reconstruct the two tuples back to the diagonal root.
                    let mut upper = vec![q];
                    let mut lower = vec![p];
                    let (mut cu, mut cv) = (u, v);
                    loop {
                        let &(pu, pv, lq, lp) = parent.get(&(cu, cv)).unwrap();
                        if pu == u32::MAX {
                            break;
                        }
                        upper.push(lq as usize);
                        lower.push(lp as usize);
                        cu = pu;
                        cv = pv;
                    }
                    upper.reverse();
                    lower.reverse();
                    let gamma = Word::from_rank(cu as usize, r, n);
                    let length = upper.len();
                    let top = sorted_pair(upper[0], lower[0]);
                    let bottom =
                        sorted_pair(forced[u2 as usize] as usize, forced[v2 as usize] as usize);
                    let mut split = Split {
                        gamma,
                        upper,
                        lower,
                        length,
                        top,
                        bottom,
                        bottom_depends_only_on_top: false,
                    };
                    split.bottom_depends_only_on_top = bottom_depends_only_on_top(t, &split, caps)?;
                    return Ok(SplitSearch::Found(split));
                }
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry((u2, v2)) {
                    e.insert((u, v, q as u8, p as u8));
                    queue.push_back(((u2, v2), depth + 1));
                }
            }
        }
    }
    // Either the frontier closed (no pair left unvisited reachable) or the
    // depth bound cut the search. The BFS visits pairs level by level, so if
    // any unvisited pair remained reachable the queue would not have drained
    // before max_len; detect exhaustion by whether a frontier at max_len existed.
    let exhausted = !parent.is_empty() && parent.len() < caps.pair_cap && {
        // The search is exhaustive iff no node at depth max_len had unexplored
        // children; recompute cheaply by checking closure of the visited set.
        let mut closed = true;
        'outer: for &(u, v) in parent.keys() {
            for q in 0..states {
                let u2 = image[u as usize * states + q];
                for p in 0..states {
                    let v2 = image[v as usize * states + p];
                    if !parent.contains_key(&(u2, v2)) {
                        closed = false;
                        break 'outer;
                    }
                }
            }
        }
        closed
    };
    Ok(SplitSearch::NoSplitUpTo { max_len, exhausted })
}

/// The minimal splitting length with no depth bound: the pair space is
/// finite, so the search always terminates.
pub fn minimal_splitting_length(t: &Transducer, r: usize, caps: &Caps) -> Result<Option<Split>> {
    match splitting_length(t, r, usize::MAX, caps)? {
        SplitSearch::Found(s) => Ok(Some(s)),
        SplitSearch::NoSplitUpTo { .. } => Ok(None),
    }
}

/// Exhaustively checks that the split's bottom depends only on its top: for
/// every padding tuple the forced-state chain of images agrees step for step
/// below the split length and lands on the same bottom, on both sides.
pub fn bottom_depends_only_on_top(t: &Transducer, split: &Split, caps: &Caps) -> Result<bool> {
    let l = split.length;
    let states = t.state_count();
    if l >= 2 {
        let paddings = states
            .checked_pow((l - 1) as u32)
            .filter(|&p| p <= caps.padding_cap);
        if paddings.is_none() {
            return Err(Error::BudgetExceeded(format!(
                "{states}^{} padding tuples exceed the padding cap",
                l - 1
            )));
        }
    }
    let reference = forced_chain(t, &split.gamma, split.upper[0], &split.upper[1..]);
    let expect_upper = *reference.last().unwrap();
    let reference_prefix = &reference[..l - 1];
    let expect_lower = {
        let chain = forced_chain(t, &split.gamma, split.lower[0], &split.lower[1..]);
        if chain[..l - 1] != *reference_prefix {
            return Ok(false);
        }
        *chain.last().unwrap()
    };
    if expect_upper == expect_lower {
        return Ok(false);
    }
    let mut padding = vec![0usize; l - 1];
    loop {
        for (head, expected) in [
            (split.upper[0], expect_upper),
            (split.lower[0], expect_lower),
        ] {
            let chain = forced_chain(t, &split.gamma, head, &padding);
            if chain[..l - 1] != *reference_prefix || chain[l - 1] != expected {
                return Ok(false);
            }
        }
        // Next padding tuple.
        let mut i = l - 1;
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            if padding[i] + 1 < states {
                padding[i] += 1;
                break;
            }
            padding[i] = 0;
        }
    }
}

/// Forced states of the successive images of `gamma` through `head` followed
/// by `tail`: entry `i` is the forced state of the `(i+1)`-st image.
fn forced_chain(t: &Transducer, gamma: &Word, head: StateId, tail: &[StateId]) -> Vec<StateId> {
    let mut chain = Vec::with_capacity(tail.len() + 1);
    let mut w = Word::new(t.read_output(head, gamma.letters()));
    chain.push(t.read_state(0, w.letters()));
    for &q in tail {
        w = Word::new(t.read_output(q, w.letters()));
        chain.push(t.read_state(0, w.letters()));
    }
    chain
}

/// The transformations `sigma_gamma` of the state set at the minimal
/// splitting length: `sigma_gamma(q)` is the forced state of the length-`l`
/// image of `gamma` through `q` padded by any `(l-1)`-tuple.
#[derive(Debug, Clone)]
pub struct SigmaFamily {
    pub level: usize,
    pub split_length: usize,
    /// `maps[rank(gamma)][q] = sigma_gamma(q)`.
    pub maps: Vec<Vec<StateId>>,
}

pub fn sigma_family(t: &Transducer, r: usize, caps: &Caps) -> Result<SigmaFamily> {
    let split = minimal_splitting_length(t, r, caps)?
        .ok_or_else(|| Error::PreconditionUnmet(format!("the level-{r} dual has no split")))?;
    let l = split.length;
    let n = t.alphabet();
    let states = t.state_count();
    let total = count_words(n, r, caps.word_cap)?;
    if l >= 2 {
        let paddings = states
            .checked_pow((l - 1) as u32)
            .filter(|&p| p <= caps.padding_cap);
        if paddings.is_none() {
            return Err(Error::BudgetExceeded(
                "sigma padding enumeration exceeds cap".into(),
            ));
        }
    }
    let mut maps = Vec::with_capacity(total);
    for rank in 0..total {
        let gamma = Word::from_rank(rank, r, n);
        let mut map = Vec::with_capacity(states);
        for q in 0..states {
            let mut value = None;
            let mut padding = vec![0usize; l - 1];
            loop {
                let chain = forced_chain(t, &gamma, q, &padding);
                let end = chain[l - 1];
                match value {
                    None => value = Some(end),
                    Some(v) if v != end => {
                        return Err(Error::NotWellDefined(format!(
                            "sigma_{gamma}({}) depends on the padding tuple",
                            t.state_name(q)
                        )))
                    }
                    _ => {}
                }
                let mut i = l - 1;
                let mut done = l == 1;
                loop {
                    if i == 0 {
                        done = true;
                        break;
                    }
                    i -= 1;
                    if padding[i] + 1 < states {
                        padding[i] += 1;
                        break;
                    }
                    padding[i] = 0;
                }
                if done {
                    break;
                }
            }
            map.push(value.unwrap());
        }
        maps.push(map);
    }
    Ok(SigmaFamily {
        level: r,
        split_length: l,
        maps,
    })
}

/// True iff every product of `|Q|^2 + 1` sigma maps is constant, computed by
/// closing the set of length-`j` products under composition with generators.
pub fn right_zero_check(t: &Transducer, r: usize, caps: &Caps) -> Result<bool> {
    let family = sigma_family(t, r, caps)?;
    let states = t.state_count();
    let target_len = states * states + 1;
    let mut gens: Vec<Vec<StateId>> = family.maps.clone();
    gens.sort();
    gens.dedup();
    let mut current: Vec<Vec<StateId>> = gens.clone();
    for _ in 1..target_len {
        let mut fresh: Vec<Vec<StateId>> = Vec::new();
        for m in &current {
            for g in &gens {
                let composed: Vec<StateId> = m.iter().map(|&q| g[q]).collect();
                fresh.push(composed);
            }
        }
        fresh.sort();
        fresh.dedup();
        if fresh == current {
            // Stationary set of products: longer products repeat these maps.
            current = fresh;
            break;
        }
        current = fresh;
    }
    Ok(current.iter().all(|m| {
        let first = m[0];
        m.iter().all(|&v| v == first)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::example_registry;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn infinite_order_machine_splits_at_length_one() {
        let b = example_registry("B_WITNESS").unwrap().transducer;
        let s = splitting_length(&b, 1, 4, &caps()).unwrap();
        let split = s.found().expect("split exists");
        assert_eq!(split.length, 1);
        assert!(split.bottom_depends_only_on_top);
        assert_eq!(split.top, split.bottom);
    }

    #[test]
    fn order_three_machine_never_splits_at_level_three() {
        let c = example_registry("ORD3_C").unwrap().transducer;
        match splitting_length(&c, 3, 6, &caps()).unwrap() {
            SplitSearch::NoSplitUpTo { .. } => {}
            SplitSearch::Found(s) => panic!("unexpected split {s:?}"),
        }
        assert!(minimal_splitting_length(&c, 3, &caps()).unwrap().is_none());
        // With no split there is no sigma family either.
        assert!(matches!(
            sigma_family(&c, 3, &caps()),
            Err(crate::error::Error::PreconditionUnmet(_))
        ));
    }

    #[test]
    fn sigma_family_of_infinite_order_machine_separates_the_top() {
        let b = example_registry("B_WITNESS").unwrap().transducer;
        let family = sigma_family(&b, 1, &caps()).unwrap();
        assert_eq!(family.split_length, 1);
        // Some sigma separates q0 from q1 and maps the pair onto itself.
        let separating: Vec<&Vec<usize>> = family.maps.iter().filter(|m| m[0] != m[1]).collect();
        assert!(!separating.is_empty());
        for m in separating {
            let mut pair = [m[0], m[1]];
            pair.sort();
            assert_eq!(pair, [0, 1]);
        }
        assert!(!right_zero_check(&b, 1, &caps()).unwrap());
    }

    #[test]
    fn lengthened_split_can_fail_the_dependence_check() {
        // A split longer than the minimal length whose bottom genuinely
        // depends on the padding tuples, found by brute force over paddings.
        let a4 = example_registry("A4_NOCIRCUIT").unwrap().transducer;
        let minimal = minimal_splitting_length(&a4, 3, &caps())
            .unwrap()
            .expect("splits");
        assert!(minimal.bottom_depends_only_on_top);
        let states = a4.state_count();
        let n = a4.alphabet();
        let total = crate::words::count_words(n, 3, caps().word_cap).unwrap();
        let mut found_failure = false;
        'outer: for length in (minimal.length + 1)..=(minimal.length + 2) {
            let pad_total = states.pow((length - 1) as u32);
            for rank in 0..total {
                let gamma = Word::from_rank(rank, 3, n);
                for x in 0..states {
                    for y in (x + 1)..states {
                        for pu in 0..pad_total {
                            for pl in 0..pad_total {
                                let tail = |mut p: usize| {
                                    let mut v = vec![0usize; length - 1];
                                    for slot in v.iter_mut().rev() {
                                        *slot = p % states;
                                        p /= states;
                                    }
                                    v
                                };
                                let upperedge: Vec<usize> =
                                    std::iter::once(x).chain(tail(pu)).collect();
                                let loweredge: Vec<usize> =
                                    std::iter::once(y).chain(tail(pl)).collect();
                                let cu = forced_chain(&a4, &gamma, x, &upperedge[1..]);
                                let cl = forced_chain(&a4, &gamma, y, &loweredge[1..]);
                                if cu[..length - 1] != cl[..length - 1]
                                    || cu[length - 1] == cl[length - 1]
                                {
                                    continue;
                                }
                                let split = Split {
                                    gamma: gamma.clone(),
                                    top: sorted_pair(x, y),
                                    bottom: sorted_pair(cu[length - 1], cl[length - 1]),
                                    upper: upperedge,
                                    lower: loweredge,
                                    length,
                                    bottom_depends_only_on_top: false,
                                };
                                if !bottom_depends_only_on_top(&a4, &split, &caps()).unwrap() {
                                    found_failure = true;
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(
            found_failure,
            "every lengthened split passed the dependence check"
        );
    }
}
