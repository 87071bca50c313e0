//! Synchronization analysis: minimal level, forcing map, core, core distance,
//! minimized cores of powers, and injectivity of the action on bi-infinite words.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::transducer::{StateId, Transducer};
use crate::words::{count_words, Letter, Word};
use crate::Caps;

/// Result of a synchronization analysis.
#[derive(Debug, Clone)]
pub struct SyncInfo {
    /// Minimal level `k`: the state after reading any `k` letters depends
    /// only on those letters.
    pub level: usize,
    /// Forced state per word of length `level`, indexed by word rank.
    /// Materialized only when `n^level` fits under the word cap.
    forcing: Option<Vec<u32>>,
}

impl SyncInfo {
    pub fn forced(&self, t: &Transducer, word: &Word) -> Result<StateId> {
        if word.len() < self.level {
            return Err(Error::PreconditionUnmet(format!(
                "word of length {} cannot force a level-{} machine",
                word.len(),
                self.level
            )));
        }
        match &self.forcing {
            Some(table) if word.len() == self.level => {
                Ok(table[word.rank(t.alphabet())] as StateId)
            }
            _ => Ok(t.read_state(0, word.letters())),
        }
    }

    /// The forcing map as a rank-indexed table, when materialized.
    pub fn forcing_table(&self) -> Option<&[u32]> {
        self.forcing.as_deref()
    }

    /// The forcing sets `W_q`: for each state, the length-`level` words
    /// forcing it. They partition `X_n^level`.
    pub fn forcing_sets(&self, t: &Transducer) -> Result<Vec<Vec<Word>>> {
        let n = t.alphabet();
        let total = count_words(n, self.level, Caps::default().word_cap)?;
        let mut sets = vec![Vec::new(); t.state_count()];
        for rank in 0..total {
            let w = Word::from_rank(rank, self.level, n);
            let q = match &self.forcing {
                Some(table) => table[rank] as StateId,
                None => t.read_state(0, w.letters()),
            };
            sets[q].push(w);
        }
        Ok(sets)
    }
}

/// Index of the unordered pair `{p, q}`, `p < q`, among all such pairs.
#[inline]
fn pair_index(p: usize, q: usize) -> usize {
    debug_assert!(p < q);
    q * (q - 1) / 2 + p
}

fn pair_from_index(mut idx: usize, count: usize) -> (usize, usize) {
    for q in 1..count {
        let row = q;
        if idx < row {
            return (idx, q);
        }
        idx -= row;
    }
    unreachable!("pair index out of range")
}

/// Computes the minimal synchronizing level via the distinct-pair transition
/// graph: `{p,q} -> {next(x,p), next(x,q)}` per letter, diagonal pairs
/// absorbing. The machine is synchronizing iff the non-diagonal subgraph is
/// acyclic, and then the level is one more than its longest path.
pub fn sync_analysis(t: &Transducer, caps: &Caps) -> Result<SyncInfo> {
    let level = sync_level(t, caps)?;
    let n = t.alphabet();
    let forcing = match count_words(n, level, caps.word_cap) {
        Ok(total) => {
            let mut table = vec![0u32; total];
            fill_forcing(t, level, &mut table);
            Some(table)
        }
        Err(_) => None,
    };
    Ok(SyncInfo { level, forcing })
}

fn fill_forcing(t: &Transducer, level: usize, table: &mut [u32]) {
    // Walk words in rank order, reusing the state reached after the shared
    // prefix via a simple stack of partial states.
    let n = t.alphabet();
    if level == 0 {
        table[0] = 0;
        return;
    }
    let mut word = vec![0usize; level];
    let mut states = vec![0usize; level + 1];
    states[0] = 0;
    let mut depth = 0usize;
    let mut rank = 0usize;
    loop {
        while depth < level {
            states[depth + 1] = t.next(states[depth], word[depth]);
            depth += 1;
        }
        table[rank] = states[level] as u32;
        rank += 1;
        // Advance the word like an odometer.
        let mut i = level;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if word[i] + 1 < n {
                word[i] += 1;
                depth = i;
                break;
            }
            word[i] = 0;
        }
    }
}

/// The minimal synchronizing level alone.
pub fn sync_level(t: &Transducer, caps: &Caps) -> Result<usize> {
    let count = t.state_count();
    if count <= 1 {
        return Ok(0);
    }
    let pair_total = count * (count - 1) / 2;
    if pair_total > caps.pair_cap {
        return Err(Error::BudgetExceeded(format!(
            "{pair_total} state pairs exceed the pair cap {}",
            caps.pair_cap
        )));
    }
    let n = t.alphabet();
    // Successors among non-diagonal pairs; diagonal targets are dropped.
    let succ = |idx: usize| -> Vec<usize> {
        let (p, q) = pair_from_index(idx, count);
        let mut v = Vec::with_capacity(n);
        for x in 0..n {
            let (a, b) = (t.next(p, x), t.next(q, x));
            if a != b {
                v.push(pair_index(a.min(b), a.max(b)));
            }
        }
        v
    };

    // Kahn's algorithm on the non-diagonal subgraph.
    let mut indegree = vec![0u32; pair_total];
    for idx in 0..pair_total {
        for s in succ(idx) {
            indegree[s] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..pair_total).filter(|&i| indegree[i] == 0).collect();
    let mut topo = Vec::with_capacity(pair_total);
    while let Some(idx) = queue.pop_front() {
        topo.push(idx);
        for s in succ(idx) {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                queue.push_back(s);
            }
        }
    }
    if topo.len() != pair_total {
        // A cycle of pairs never merges: find one pair on a cycle and a word
        // labelling a loop through it.
        let start = (0..pair_total)
            .find(|&i| indegree[i] > 0 && has_cycle_from(t, i, count))
            .expect("a leftover pair lies on a cycle");
        let (pair, cycle) = find_pair_cycle(t, start, count);
        return Err(Error::NotSynchronizing {
            pair: (
                t.state_name(pair.0).to_string(),
                t.state_name(pair.1).to_string(),
            ),
            cycle,
        });
    }
    // Longest path (in edges) within the non-diagonal subgraph.
    let mut longest = vec![0u32; pair_total];
    for &idx in topo.iter().rev() {
        let mut best = 0;
        for s in succ(idx) {
            best = best.max(1 + longest[s]);
        }
        longest[idx] = best;
    }
    Ok(1 + longest.iter().copied().max().unwrap_or(0) as usize)
}

/// Finds a pair on a cycle of the non-diagonal pair graph plus a word cycling it.
fn find_pair_cycle(t: &Transducer, start: usize, count: usize) -> ((StateId, StateId), Word) {
    let n = t.alphabet();
    // Walk forward until a pair repeats, recording letters.
    let mut seen_at = std::collections::HashMap::new();
    let mut letters: Vec<Letter> = Vec::new();
    let mut cur = start;
    loop {
        if let Some(&at) = seen_at.get(&cur) {
            let (p, q) = pair_from_index(cur, count);
            return ((p, q), Word::new(letters[at..].to_vec()));
        }
        seen_at.insert(cur, letters.len());
        let (p, q) = pair_from_index(cur, count);
        // Stay on pairs that still reach a cycle; such a successor always
        // exists here, so the walk must eventually repeat a pair.
        let mut advanced = false;
        for x in 0..n {
            let (a, b) = (t.next(p, x), t.next(q, x));
            if a != b {
                let idx = pair_index(a.min(b), a.max(b));
                if has_cycle_from(t, idx, count) {
                    letters.push(x);
                    cur = idx;
                    advanced = true;
                    break;
                }
            }
        }
        assert!(
            advanced,
            "pair on a cycle must have a successor reaching a cycle"
        );
    }
}

fn has_cycle_from(t: &Transducer, start: usize, count: usize) -> bool {
    let pair_total = count * (count - 1) / 2;
    // Iterative DFS with colors: 0 unseen, 1 on stack, 2 done.
    let mut color = vec![0u8; pair_total];
    let mut stack = vec![(start, 0usize)];
    color[start] = 1;
    while let Some(&mut (idx, ref mut xi)) = stack.last_mut() {
        let (p, q) = pair_from_index(idx, count);
        let mut pushed = false;
        while *xi < t.alphabet() {
            let x = *xi;
            *xi += 1;
            let (a, b) = (t.next(p, x), t.next(q, x));
            if a == b {
                continue;
            }
            let s = pair_index(a.min(b), a.max(b));
            match color[s] {
                0 => {
                    color[s] = 1;
                    stack.push((s, 0));
                    pushed = true;
                    break;
                }
                1 => return true,
                _ => {}
            }
        }
        if !pushed && stack.last().map(|&(i, _)| i) == Some(idx) {
            color[idx] = 2;
            stack.pop();
        }
    }
    false
}

/// The sub-transducer on the image of the forcing map.
pub fn core(t: &Transducer, caps: &Caps) -> Result<Transducer> {
    let level = sync_level(t, caps)?;
    // Image of the forcing map = states reachable from any fixed state in
    // exactly `level` steps.
    let count = t.state_count();
    let mut current = vec![false; count];
    current[0] = true;
    for _ in 0..level {
        let mut nxt = vec![false; count];
        for s in 0..count {
            if current[s] {
                for x in 0..t.alphabet() {
                    nxt[t.next(s, x)] = true;
                }
            }
        }
        current = nxt;
    }
    let keep: Vec<StateId> = (0..count).filter(|&s| current[s]).collect();
    Ok(t.restrict(&keep))
}

/// `minimize(core(t))`.
pub fn min_core(t: &Transducer, caps: &Caps) -> Result<Transducer> {
    Ok(minimize(&core(t, caps)?).transducer)
}

/// `minimize(core(t))` when the machine synchronizes, plain minimization
/// otherwise. Non-synchronizing machines (such as Cayley machines, whose
/// inverses are the reset automata) have no core to strip.
pub fn min_core_lenient(t: &Transducer, caps: &Caps) -> Result<Transducer> {
    match core(t, caps) {
        Ok(c) => Ok(minimize(&c).transducer),
        Err(Error::NotSynchronizing { .. }) => Ok(minimize(t).transducer),
        Err(e) => Err(e),
    }
}

/// `minimize(core(t^m))`, computed incrementally as
/// `B_{t+1} = minimize(core(B_t * A))` to bound intermediate sizes.
pub fn min_core_power(t: &Transducer, m: usize, caps: &Caps) -> Result<Transducer> {
    if m == 0 {
        return Ok(Transducer::identity(t.alphabet()));
    }
    let factor = min_core_lenient(t, caps)?;
    let mut acc = factor.clone();
    for _ in 1..m {
        let raw = acc.product(&factor)?;
        if raw.state_count() > caps.state_cap {
            return Err(Error::BudgetExceeded(format!(
                "power has {} states, cap {}",
                raw.state_count(),
                caps.state_cap
            )));
        }
        acc = min_core_lenient(&raw, caps)?;
    }
    Ok(acc)
}

/// Minimal `k` such that every length-`k` read from every state lands in the
/// core; `0` iff the machine equals its core.
pub fn core_distance(t: &Transducer, caps: &Caps) -> Result<usize> {
    let c = core(t, caps)?;
    let count = t.state_count();
    let mut in_core = vec![false; count];
    for name in c.state_names() {
        in_core[t.state_index(name).expect("core state exists in parent")] = true;
    }
    // dist(q) = 0 for core states; else 1 + max over letters. Non-core states
    // form a DAG: any cycle word of length >= level forces into the core.
    let mut dist = vec![usize::MAX; count];
    fn walk(t: &Transducer, q: usize, in_core: &[bool], dist: &mut [usize]) -> usize {
        if in_core[q] {
            return 0;
        }
        if dist[q] != usize::MAX {
            return dist[q];
        }
        let mut best = 0;
        for x in 0..t.alphabet() {
            best = best.max(walk(t, t.next(q, x), in_core, dist));
        }
        dist[q] = 1 + best;
        dist[q]
    }
    let mut result = 0;
    for q in 0..count {
        result = result.max(walk(t, q, &in_core, &mut dist));
    }
    Ok(result)
}

/// Outcome of the injectivity decision for the action on bi-infinite words.
#[derive(Debug, Clone)]
pub enum Injectivity {
    Injective,
    /// Two distinct anchored periodic lines `lambda^inf` and `delta^inf`
    /// share the image `image^inf`.
    NonInjective {
        lambda: Word,
        delta: Word,
        image: Word,
        rotation_free: bool,
    },
}

impl Injectivity {
    pub fn is_injective(&self) -> bool {
        matches!(self, Injectivity::Injective)
    }
}

/// Decides injectivity of the induced map on `X_n^Z` by searching for a cycle
/// of the output-matched pair graph containing a genuinely differing edge.
/// When a collision is found, the witness pair is upgraded to words that are
/// not rotations of each other whenever the search finds such a pair.
pub fn is_injective_on_lines(t: &Transducer, caps: &Caps) -> Result<Injectivity> {
    let c = core(t, caps)?;
    let count = c.state_count();
    if count * count > caps.pair_cap {
        return Err(Error::BudgetExceeded(
            "ordered pair graph exceeds pair cap".into(),
        ));
    }
    match find_matched_cycle(&c) {
        None => Ok(Injectivity::Injective),
        Some((lambda, delta, _raw_image)) => {
            let (lambda, delta, rotation_free) = derotate_witness(&c, lambda, delta, caps);
            let image = {
                let p = fixed_state_of(&c, &lambda).expect("loop state exists");
                Word::new(c.read_output(p, lambda.letters()))
            };
            Ok(Injectivity::NonInjective {
                lambda,
                delta,
                image,
                rotation_free,
            })
        }
    }
}

/// The unique state `q` with `pi(w, q) = q`, when one exists.
pub fn fixed_state_of(t: &Transducer, w: &Word) -> Option<StateId> {
    (0..t.state_count()).find(|&q| t.read_state(q, w.letters()) == q)
}

/// Searches the ordered-pair graph with output-matched edges for a cycle
/// containing an edge whose letters differ. Returns `(lambda, delta, image)`.
fn find_matched_cycle(t: &Transducer) -> Option<(Word, Word, Word)> {
    let count = t.state_count();
    let n = t.alphabet();
    let total = count * count;
    let node = |p: usize, q: usize| p * count + q;

    // Tarjan SCC over the matched-pair graph.
    let mut scc = vec![usize::MAX; total];
    {
        let mut index_counter = 0usize;
        let mut scc_counter = 0usize;
        let mut index = vec![usize::MAX; total];
        let mut low = vec![0usize; total];
        let mut on_stack = vec![false; total];
        let mut stack: Vec<usize> = Vec::new();
        for root in 0..total {
            if index[root] != usize::MAX {
                continue;
            }
            // Iterative Tarjan.
            let mut call: Vec<(usize, usize, usize)> = vec![(root, 0, 0)]; // (node, edge cursor, child marker)
            while let Some((v, mut cursor, _)) = call.pop() {
                if cursor == 0 {
                    index[v] = index_counter;
                    low[v] = index_counter;
                    index_counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                let (p, q) = (v / count, v % count);
                let mut descended = false;
                while cursor < n * n {
                    let (x, y) = (cursor / n, cursor % n);
                    cursor += 1;
                    if t.out(p, x) != t.out(q, y) {
                        continue;
                    }
                    let w = node(t.next(p, x), t.next(q, y));
                    if index[w] == usize::MAX {
                        call.push((v, cursor, 0));
                        call.push((w, 0, 0));
                        descended = true;
                        break;
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                if descended {
                    continue;
                }
                // Close v.
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        scc[w] = scc_counter;
                        if w == v {
                            break;
                        }
                    }
                    scc_counter += 1;
                }
                if let Some(&mut (parent, _, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }

    // First differing edge inside an SCC, scanned in deterministic order.
    for p in 0..count {
        for q in 0..count {
            let v = node(p, q);
            for x in 0..n {
                for y in 0..n {
                    if x == y || t.out(p, x) != t.out(q, y) {
                        continue;
                    }
                    let w = node(t.next(p, x), t.next(q, y));
                    if scc[v] == scc[w] && scc[v] != usize::MAX {
                        // Path w -> v inside the SCC via BFS on matched edges.
                        if let Some((xs, ys)) = matched_path(t, w, v, &scc) {
                            let mut lam = vec![x];
                            lam.extend_from_slice(&xs);
                            let mut del = vec![y];
                            del.extend_from_slice(&ys);
                            let image = Word::new(t.read_output(p, &lam));
                            return Some((Word::new(lam), Word::new(del), image));
                        }
                    }
                }
            }
        }
    }
    None
}

/// BFS path through matched edges staying inside one SCC.
fn matched_path(
    t: &Transducer,
    from: usize,
    to: usize,
    scc: &[usize],
) -> Option<(Vec<Letter>, Vec<Letter>)> {
    if from == to {
        return Some((Vec::new(), Vec::new()));
    }
    let count = t.state_count();
    let n = t.alphabet();
    let mut parent: Vec<Option<(usize, Letter, Letter)>> = vec![None; count * count];
    let mut queue = VecDeque::new();
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        let (p, q) = (v / count, v % count);
        for x in 0..n {
            for y in 0..n {
                if t.out(p, x) != t.out(q, y) {
                    continue;
                }
                let w = t.next(p, x) * count + t.next(q, y);
                if scc[w] != scc[from] || parent[w].is_some() || w == from {
                    continue;
                }
                parent[w] = Some((v, x, y));
                if w == to {
                    let mut xs = Vec::new();
                    let mut ys = Vec::new();
                    let mut cur = to;
                    while cur != from {
                        let (prev, x, y) = parent[cur].unwrap();
                        xs.push(x);
                        ys.push(y);
                        cur = prev;
                    }
                    xs.reverse();
                    ys.reverse();
                    return Some((xs, ys));
                }
                queue.push_back(w);
            }
        }
    }
    None
}

/// When the colliding words are rotations of each other, follows the
/// image-root construction to replace one side by a non-rotation, when it
/// exists within the cap.
fn derotate_witness(t: &Transducer, lambda: Word, delta: Word, caps: &Caps) -> (Word, Word, bool) {
    let rotated = lambda.is_rotation_of(&delta).unwrap_or(false);
    if !rotated {
        return (lambda, delta, true);
    }
    let p = match fixed_state_of(t, &lambda) {
        Some(p) => p,
        None => return (lambda, delta, false),
    };
    let image = Word::new(t.read_output(p, lambda.letters()));
    let root = image.primitive_root();
    if root.len() == image.len() {
        return (lambda, delta, false);
    }
    let reps = image.len() / root.len();
    // Search a preimage of the primitive root under the level map at |root|.
    let total = match count_words(t.alphabet(), root.len(), caps.word_cap) {
        Ok(tot) => tot,
        Err(_) => return (lambda, delta, false),
    };
    for rank in 0..total {
        let u = Word::from_rank(rank, root.len(), t.alphabet());
        if let Some(qu) = fixed_state_of(t, &u) {
            if Word::new(t.read_output(qu, u.letters())) == root {
                let candidate = u.repeat(reps);
                if !candidate.is_rotation_of(&lambda).unwrap_or(true) {
                    return (candidate, lambda, true);
                }
            }
        }
    }
    (lambda, delta, false)
}
