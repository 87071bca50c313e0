//! Graphs of bad pairs: vertices are unordered state pairs, edges carry
//! verified splits whose bottom depends only on the top. A circuit certifies
//! infinite order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::splits::{minimal_splitting_length, sigma_family, Split};
use crate::sync::sync_analysis;
use crate::transducer::{StateId, Transducer};
use crate::words::{count_words, Word};
use crate::Caps;

pub type Pair = (StateId, StateId);

#[derive(Debug, Clone)]
pub struct BadPairEdge {
    pub from: Pair,
    pub to: Pair,
    pub split: Split,
}

#[derive(Debug, Clone)]
pub struct BadPairsGraph {
    pub level: usize,
    pub minimal: bool,
    /// Sorted unordered state pairs; includes bottoms of accepted splits so
    /// every edge endpoint is a vertex.
    pub vertices: Vec<Pair>,
    /// Edges sorted by (from, to), one per pair with the least witnessing word.
    pub edges: Vec<BadPairEdge>,
    /// Split lengths were searched up to this bound (general graphs only).
    pub max_len: Option<usize>,
}

impl BadPairsGraph {
    pub fn vertex_names(&self, t: &Transducer, v: Pair) -> String {
        format!("{{{},{}}}", t.state_name(v.0), t.state_name(v.1))
    }

    pub fn contains_vertex(&self, v: Pair) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn successors(&self, v: Pair) -> impl Iterator<Item = Pair> + '_ {
        self.edges.iter().filter(move |e| e.from == v).map(|e| e.to)
    }

    /// DOT export with vertices `"{q_i,q_j}"` and edge labels `gamma/length`.
    pub fn to_dot(&self, t: &Transducer) -> String {
        let mut s = String::from("digraph badpairs {\n");
        for &v in &self.vertices {
            s.push_str(&format!("  \"{}\";\n", self.vertex_names(t, v)));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}/{}\"];\n",
                self.vertex_names(t, e.from),
                self.vertex_names(t, e.to),
                e.split.gamma,
                e.split.length
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// The minimal graph of bad pairs, built from the sigma transformations at
/// the minimal splitting length: vertex `{x,y}` whenever some sigma separates
/// `x` from `y`, with an edge to `{sigma(x), sigma(y)}`.
pub fn minimal_bad_pairs_graph(t: &Transducer, r: usize, caps: &Caps) -> Result<BadPairsGraph> {
    let family = sigma_family(t, r, caps)?;
    let l = family.split_length;
    let n = t.alphabet();
    let states = t.state_count();
    let mut edges: BTreeMap<(Pair, Pair), Split> = BTreeMap::new();
    for (rank, map) in family.maps.iter().enumerate() {
        let gamma = Word::from_rank(rank, r, n);
        for x in 0..states {
            for y in (x + 1)..states {
                if map[x] == map[y] {
                    continue;
                }
                let from = (x, y);
                let to = (map[x].min(map[y]), map[x].max(map[y]));
                edges.entry((from, to)).or_insert_with(|| {
                    // Canonical padding: the all-zeros tuple.
                    let mut upper = vec![x];
                    upper.extend(std::iter::repeat_n(0, l - 1));
                    let mut lower = vec![y];
                    lower.extend(std::iter::repeat_n(0, l - 1));
                    Split {
                        gamma: gamma.clone(),
                        upper,
                        lower,
                        length: l,
                        top: from,
                        bottom: to,
                        bottom_depends_only_on_top: true,
                    }
                });
            }
        }
    }
    Ok(assemble(r, true, None, edges))
}

/// The general graph of bad pairs, over splits of length up to `max_len`
/// passing the bottom-depends-only-on-top check.
pub fn bad_pairs_graph(
    t: &Transducer,
    r: usize,
    max_len: usize,
    caps: &Caps,
) -> Result<BadPairsGraph> {
    let info = sync_analysis(t, caps)?;
    if r < info.level {
        return Err(Error::PreconditionUnmet(format!(
            "level {r} is below the synchronizing level {}",
            info.level
        )));
    }
    let n = t.alphabet();
    let states = t.state_count();
    let total = count_words(n, r, caps.word_cap)?;
    let minimal_len = minimal_splitting_length(t, r, caps)?.map(|s| s.length);
    let mut edges: BTreeMap<(Pair, Pair), Split> = BTreeMap::new();
    let lo = minimal_len.unwrap_or(1);
    for length in lo..=max_len {
        if length >= 2 {
            let pads = states
                .checked_pow((length - 1) as u32)
                .filter(|&p| p <= caps.padding_cap);
            if pads.is_none() {
                return Err(Error::BudgetExceeded(format!(
                    "{states}^{} paddings exceed the padding cap",
                    length - 1
                )));
            }
        }
        for rank in 0..total {
            let gamma = Word::from_rank(rank, r, n);
            for x in 0..states {
                for y in (x + 1)..states {
                    if let Some(bottom) = dependence_scan(t, &gamma, x, y, length) {
                        let from = (x, y);
                        edges.entry((from, bottom)).or_insert_with(|| {
                            let mut upper = vec![x];
                            upper.extend(std::iter::repeat_n(0, length - 1));
                            let mut lower = vec![y];
                            lower.extend(std::iter::repeat_n(0, length - 1));
                            Split {
                                gamma: gamma.clone(),
                                upper,
                                lower,
                                length,
                                top: from,
                                bottom,
                                bottom_depends_only_on_top: true,
                            }
                        });
                    }
                }
            }
        }
    }
    Ok(assemble(r, false, Some(max_len), edges))
}

/// Checks all paddings at once for the pair of heads `{x, y}` at the given
/// split length: every padded chain must share one forced prefix, and the two
/// final forced states must be constant per side and distinct.
/// Returns the bottom pair when the configuration is a dependence-passing split.
fn dependence_scan(
    t: &Transducer,
    gamma: &Word,
    x: StateId,
    y: StateId,
    length: usize,
) -> Option<Pair> {
    let states = t.state_count();
    let mut reference_prefix: Option<Vec<StateId>> = None;
    let mut end_x: Option<StateId> = None;
    let mut end_y: Option<StateId> = None;
    let mut padding = vec![0usize; length - 1];
    loop {
        for (head, end) in [(x, &mut end_x), (y, &mut end_y)] {
            let mut w = Word::new(t.read_output(head, gamma.letters()));
            let mut chain = Vec::with_capacity(length);
            chain.push(t.read_state(0, w.letters()));
            for &q in &padding {
                w = Word::new(t.read_output(q, w.letters()));
                chain.push(t.read_state(0, w.letters()));
            }
            let last = chain[length - 1];
            match reference_prefix {
                None => reference_prefix = Some(chain[..length - 1].to_vec()),
                Some(ref pref) => {
                    if chain[..length - 1] != *pref {
                        return None;
                    }
                }
            }
            match *end {
                None => *end = Some(last),
                Some(v) if v != last => return None,
                _ => {}
            }
        }
        let mut i = length - 1;
        loop {
            if i == 0 {
                let (ex, ey) = (end_x.unwrap(), end_y.unwrap());
                if ex == ey {
                    return None;
                }
                return Some((ex.min(ey), ex.max(ey)));
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

fn assemble(
    level: usize,
    minimal: bool,
    max_len: Option<usize>,
    edges: BTreeMap<(Pair, Pair), Split>,
) -> BadPairsGraph {
    let mut vertices: Vec<Pair> = Vec::new();
    for &(from, to) in edges.keys() {
        vertices.push(from);
        vertices.push(to);
    }
    vertices.sort();
    vertices.dedup();
    let edges = edges
        .into_iter()
        .map(|((from, to), split)| BadPairEdge { from, to, split })
        .collect();
    BadPairsGraph {
        level,
        minimal,
        vertices,
        edges,
        max_len,
    }
}

/// Any directed cycle through the graph, including self-loops, as the list of
/// visited vertices (first vertex repeated at the end). Deterministic: the
/// lexicographically least start vertex, then least successors.
pub fn has_circuit(g: &BadPairsGraph) -> Option<Vec<Pair>> {
    for &start in &g.vertices {
        // BFS from each of start's successors back to start.
        if let Some(path) = path_between(g, start, start) {
            let mut cycle = vec![start];
            cycle.extend(path);
            return Some(cycle);
        }
    }
    None
}

/// Shortest path `from -> ... -> to` with at least one edge, as the vertex
/// list after `from`.
fn path_between(g: &BadPairsGraph, from: Pair, to: Pair) -> Option<Vec<Pair>> {
    let mut parent: BTreeMap<Pair, Pair> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    for next in g.successors(from) {
        if next == to {
            return Some(vec![to]);
        }
        if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(next) {
            e.insert(from);
            queue.push_back(next);
        }
    }
    while let Some(v) = queue.pop_front() {
        for next in g.successors(v) {
            if next == to {
                let mut path = vec![to, v];
                let mut cur = v;
                while let Some(&p) = parent.get(&cur) {
                    if p == from {
                        break;
                    }
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(v);
                queue.push_back(next);
            }
        }
    }
    None
}

/// Report of the free-semigroup test: all 2-subsets of `states` must be
/// vertices of the general bad-pairs graph, each reaching a vertex on a circuit.
#[derive(Debug, Clone)]
pub struct FreeSemigroupReport {
    pub holds: bool,
    pub rank: usize,
    pub details: Vec<String>,
}

pub fn free_semigroup_condition(
    t: &Transducer,
    graph: &BadPairsGraph,
    states: &[StateId],
) -> Result<FreeSemigroupReport> {
    if states.len() < 2 {
        return Err(Error::PreconditionUnmet(
            "the state subset needs at least 2 states".into(),
        ));
    }
    let on_circuit: Vec<Pair> = g_circuit_vertices(graph);
    let mut holds = true;
    let mut details = Vec::new();
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            let pair = (states[i].min(states[j]), states[i].max(states[j]));
            let name = format!("{{{},{}}}", t.state_name(pair.0), t.state_name(pair.1));
            if !graph.contains_vertex(pair) {
                holds = false;
                details.push(format!("{name} is not a vertex"));
                continue;
            }
            let reaches = on_circuit
                .iter()
                .any(|&c| c == pair || path_between(graph, pair, c).is_some());
            if reaches {
                let on = on_circuit.contains(&pair);
                details.push(if on {
                    format!("{name} lies on a circuit")
                } else {
                    format!("{name} reaches a circuit")
                });
            } else {
                holds = false;
                details.push(format!("{name} does not reach any circuit"));
            }
        }
    }
    if holds {
        details.push(format!(
            "the states generate a free semigroup of rank at least {}",
            states.len()
        ));
    }
    Ok(FreeSemigroupReport {
        holds,
        rank: states.len(),
        details,
    })
}

/// Vertices lying on some circuit.
fn g_circuit_vertices(g: &BadPairsGraph) -> Vec<Pair> {
    g.vertices
        .iter()
        .copied()
        .filter(|&v| path_between(g, v, v).is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::example_registry;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn minimal_graph_of_infinite_order_machine_has_a_self_loop() {
        let b = example_registry("B_WITNESS").unwrap().transducer;
        let g = minimal_bad_pairs_graph(&b, 1, &caps()).unwrap();
        assert_eq!(g.vertices, vec![(0, 1)]);
        let cycle = has_circuit(&g).expect("self loop");
        assert_eq!(cycle, vec![(0, 1), (0, 1)]);
    }

    #[test]
    fn general_graph_of_four_state_machine_has_a_loop_where_minimal_does_not() {
        let a4 = example_registry("A4_NOCIRCUIT").unwrap().transducer;
        let q = |name: &str| a4.state_index(name).unwrap();
        let general = bad_pairs_graph(&a4, 3, 4, &caps()).unwrap();
        let loop_pair = (q("q1").min(q("q2")), q("q1").max(q("q2")));
        assert!(general
            .edges
            .iter()
            .any(|e| e.from == loop_pair && e.to == loop_pair));
        assert!(has_circuit(&general).is_some());

        let minimal = minimal_bad_pairs_graph(&a4, 3, &caps()).unwrap();
        assert!(has_circuit(&minimal).is_none());
        // (q2,q3) is a sink of the minimal graph: no outgoing edge reaches a circuit.
        let sink = (q("q2").min(q("q3")), q("q2").max(q("q3")));
        assert!(minimal.contains_vertex(sink));
        assert!(minimal.successors(sink).next().is_none());
    }

    #[test]
    fn finite_order_machine_has_empty_graphs() {
        let c = example_registry("ORD3_C").unwrap().transducer;
        let g = bad_pairs_graph(&c, 3, 4, &caps()).unwrap();
        assert!(g.vertices.is_empty());
        assert!(has_circuit(&g).is_none());
    }

    #[test]
    fn free_semigroup_condition_on_registry_machines() {
        let b = example_registry("B_WITNESS").unwrap().transducer;
        let g = bad_pairs_graph(&b, 1, 4, &caps()).unwrap();
        let report = free_semigroup_condition(&b, &g, &[0, 1]).unwrap();
        assert!(report.holds);
        assert_eq!(report.rank, 2);

        let a4 = example_registry("A4_NOCIRCUIT").unwrap().transducer;
        let g = bad_pairs_graph(&a4, 3, 4, &caps()).unwrap();
        let q1 = a4.state_index("q1").unwrap();
        let q2 = a4.state_index("q2").unwrap();
        let report = free_semigroup_condition(&a4, &g, &[q1, q2]).unwrap();
        assert!(report.holds);

        assert!(free_semigroup_condition(&b, &g, &[0]).is_err());
    }

    #[test]
    fn dot_export_shape() {
        let b = example_registry("B_WITNESS").unwrap().transducer;
        let g = minimal_bad_pairs_graph(&b, 1, &caps()).unwrap();
        let dot = g.to_dot(&b);
        assert!(dot.starts_with("digraph badpairs {"));
        assert!(dot.contains("\"{q0,q1}\" -> \"{q0,q1}\""));
        assert!(dot.contains("/1\"];"));
    }
}
