//! Minimization under omega-equivalence and machine equivalence.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::transducer::{StateId, Transducer};
use crate::words::Word;

/// A minimized transducer together with the class each original state fell into.
#[derive(Debug, Clone)]
pub struct Minimized {
    pub transducer: Transducer,
    /// `class_of[original_state] = state of the minimized machine`.
    pub class_of: Vec<StateId>,
}

/// Moore-style partition refinement seeded by each state's output row.
/// Class representatives keep the smallest original index, and classes are
/// ordered by that index, so the result is deterministic.
pub fn minimize(t: &Transducer) -> Minimized {
    let n = t.alphabet();
    let count = t.state_count();
    let mut class: Vec<usize> = {
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut class = Vec::with_capacity(count);
        for s in 0..count {
            let row: Vec<u32> = (0..n).map(|x| t.out(s, x) as u32).collect();
            let id = seen.len();
            class.push(*seen.entry(row).or_insert(id));
        }
        class
    };
    loop {
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut fresh = Vec::with_capacity(count);
        for s in 0..count {
            let mut sig = Vec::with_capacity(n + 1);
            sig.push(class[s] as u32);
            for x in 0..n {
                sig.push(class[t.next(s, x)] as u32);
            }
            let id = seen.len();
            fresh.push(*seen.entry(sig).or_insert(id));
        }
        if fresh == class {
            break;
        }
        class = fresh;
    }

    // Renumber classes by smallest original index.
    let class_total = class.iter().max().map_or(0, |&m| m + 1);
    let mut representative = vec![usize::MAX; class_total];
    for s in 0..count {
        if representative[class[s]] == usize::MAX {
            representative[class[s]] = s;
        }
    }
    let mut order: Vec<usize> = (0..class_total).collect();
    order.sort_by_key(|&c| representative[c]);
    let mut renumber = vec![0usize; class_total];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    let class_of: Vec<usize> = class.iter().map(|&c| renumber[c]).collect();

    let mut names = Vec::with_capacity(class_total);
    let mut next = Vec::with_capacity(class_total * n);
    let mut out = Vec::with_capacity(class_total * n);
    for &old_class in &order {
        let rep = representative[old_class];
        names.push(t.state_name(rep).to_string());
        for x in 0..n {
            next.push(class_of[t.next(rep, x)]);
            out.push(t.out(rep, x));
        }
    }
    Minimized {
        transducer: Transducer::from_tables(n, names, next, out),
        class_of,
    }
}

/// The result of an equivalence query between two machines.
#[derive(Debug, Clone)]
pub struct EquivalenceResult {
    pub equivalent: bool,
    /// Bijection between minimized state names, present when equivalent.
    pub state_bijection: Option<Vec<(String, String)>>,
    /// An input separating the two induced maps, present when both machines
    /// are synchronizing and act differently on lines.
    pub separating_word: Option<Word>,
}

/// Decides omega-equivalence of the minimized machines: a bijection of states
/// inducing identical maps. On failure, a separating word is produced from
/// the forced-state pairing whenever both machines are synchronizing.
pub fn equivalent(a: &Transducer, b: &Transducer) -> Result<EquivalenceResult> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet(),
            right: b.alphabet(),
        });
    }
    let ma = minimize(a).transducer;
    let mb = minimize(b).transducer;

    // Joint refinement over the disjoint union distinguishes exactly the
    // states with different induced maps.
    let classes = joint_classes(&ma, &mb);
    let ca = ma.state_count();
    let bijection = match_classes(&classes, ca, mb.state_count());
    if let Some(pairs) = bijection {
        let named = pairs
            .into_iter()
            .map(|(x, y)| (ma.state_name(x).to_string(), mb.state_name(y).to_string()))
            .collect();
        return Ok(EquivalenceResult {
            equivalent: true,
            state_bijection: Some(named),
            separating_word: None,
        });
    }

    let separating_word = separating_word(&ma, &mb, &classes);
    Ok(EquivalenceResult {
        equivalent: false,
        state_bijection: None,
        separating_word,
    })
}

/// Behavior classes over the disjoint union of two machines on one alphabet.
fn joint_classes(a: &Transducer, b: &Transducer) -> Vec<usize> {
    let n = a.alphabet();
    let (ca, cb) = (a.state_count(), b.state_count());
    let total = ca + cb;
    let out_of = |s: usize, x: usize| {
        if s < ca {
            a.out(s, x)
        } else {
            b.out(s - ca, x)
        }
    };
    let next_of = |s: usize, x: usize| {
        if s < ca {
            a.next(s, x)
        } else {
            b.next(s - ca, x) + ca
        }
    };

    let mut class: Vec<usize> = {
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        (0..total)
            .map(|s| {
                let row: Vec<u32> = (0..n).map(|x| out_of(s, x) as u32).collect();
                let id = seen.len();
                *seen.entry(row).or_insert(id)
            })
            .collect()
    };
    loop {
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut fresh = Vec::with_capacity(total);
        for s in 0..total {
            let mut sig = Vec::with_capacity(n + 1);
            sig.push(class[s] as u32);
            for x in 0..n {
                sig.push(class[next_of(s, x)] as u32);
            }
            let id = seen.len();
            fresh.push(*seen.entry(sig).or_insert(id));
        }
        if fresh == class {
            return class;
        }
        class = fresh;
    }
}

/// Pairs up states when every class holds exactly one state of each side.
fn match_classes(classes: &[usize], ca: usize, cb: usize) -> Option<Vec<(StateId, StateId)>> {
    if ca != cb {
        return None;
    }
    let total_classes = classes.iter().max().map_or(0, |&m| m + 1);
    let mut a_in = vec![usize::MAX; total_classes];
    let mut b_in = vec![usize::MAX; total_classes];
    for (s, &c) in classes.iter().enumerate() {
        let slot = if s < ca { &mut a_in[c] } else { &mut b_in[c] };
        if *slot != usize::MAX {
            return None;
        }
        *slot = if s < ca { s } else { s - ca };
    }
    let mut pairs = Vec::with_capacity(ca);
    for c in 0..total_classes {
        match (a_in[c], b_in[c]) {
            (usize::MAX, usize::MAX) => {}
            (x, y) if x != usize::MAX && y != usize::MAX => pairs.push((x, y)),
            _ => return None,
        }
    }
    pairs.sort();
    Some(pairs)
}

/// Builds a word on which the two induced maps differ: a forcing context
/// whose forced states are inequivalent, extended by a distinguishing suffix.
fn separating_word(ma: &Transducer, mb: &Transducer, classes: &[usize]) -> Option<Word> {
    let ka = crate::sync::sync_analysis(ma, &crate::Caps::default()).ok()?;
    let kb = crate::sync::sync_analysis(mb, &crate::Caps::default()).ok()?;
    let k = ka.level.max(kb.level);
    let n = ma.alphabet();
    let total = crate::words::count_words(n, k, crate::Caps::default().word_cap).ok()?;
    for rank in 0..total {
        let gamma = Word::from_rank(rank, k, n);
        let p = ma.read_state(0, gamma.letters());
        let q = mb.read_state(0, gamma.letters());
        if classes[p] != classes[ma.state_count() + q] {
            let suffix = distinguishing_suffix(ma, p, mb, q)?;
            return Some(gamma.concat(&suffix));
        }
    }
    None
}

/// Shortest word on which two states output differently, by BFS over pairs.
pub fn distinguishing_suffix(
    a: &Transducer,
    p: StateId,
    b: &Transducer,
    q: StateId,
) -> Option<Word> {
    let n = a.alphabet();
    let cb = b.state_count();
    let mut seen = vec![false; a.state_count() * cb];
    let mut queue = std::collections::VecDeque::new();
    seen[p * cb + q] = true;
    queue.push_back((p, q, Vec::new()));
    while let Some((u, v, path)) = queue.pop_front() {
        for x in 0..n {
            let mut next_path = path.clone();
            next_path.push(x);
            if a.out(u, x) != b.out(v, x) {
                return Some(Word::new(next_path));
            }
            let (u2, v2) = (a.next(u, x), b.next(v, x));
            if !seen[u2 * cb + v2] {
                seen[u2 * cb + v2] = true;
                queue.push_back((u2, v2, next_path));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trn::parse_trn;

    #[test]
    fn duplicated_identity_state_minimizes_away() {
        let t = parse_trn(
            "alphabet: 3\nstates: a b\na: 0|0->a 1|1->a 2|2->a\nb: 0|0->b 1|1->b 2|2->b\n",
        )
        .unwrap();
        let m = minimize(&t);
        assert_eq!(m.transducer.state_count(), 1);
        assert_eq!(m.class_of, vec![0, 0]);
        let r = equivalent(&m.transducer, &Transducer::identity(3)).unwrap();
        assert!(r.equivalent);
    }

    #[test]
    fn equivalence_reports_identity_bijection() {
        let c = parse_trn("alphabet: 3\nstates: q0 q1 q2\nq0: 0|1->q0 1|2->q1 2|0->q2\nq1: 0|0->q0 1|2->q1 2|1->q2\nq2: 0|2->q1 1|1->q0 2|0->q2\n").unwrap();
        let r = equivalent(&c, &c).unwrap();
        assert!(r.equivalent);
        let pairs = r.state_bijection.unwrap();
        for (x, y) in pairs {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn inequivalent_machines_get_separating_word() {
        let id = Transducer::identity(2);
        let swap = parse_trn("alphabet: 2\nstates: s\ns: 0|1->s 1|0->s\n").unwrap();
        let r = equivalent(&id, &swap).unwrap();
        assert!(!r.equivalent);
        let w = r.separating_word.expect("separating word");
        assert_ne!(id.read(0, &w).1, swap.read(0, &w).1);
    }
}
