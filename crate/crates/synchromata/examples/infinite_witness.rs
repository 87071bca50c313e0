//! Splits, bad-pairs graphs and infinite-orbit witnesses: the two-state
//! machine whose level-1 dual splits carries a self-loop of bad pairs, and
//! the loop unwinds into an explicit rational word on an infinite orbit.

use synchromata::badpairs::{has_circuit, minimal_bad_pairs_graph};
use synchromata::order::witness_from_loop;
use synchromata::periodic::{apply_to_periodic, orbit_is_infinite_sample};
use synchromata::registry::example_registry;
use synchromata::splits::{splitting_length, SplitSearch};
use synchromata::Caps;

fn main() {
    let caps = Caps::default();
    let b = example_registry("B_WITNESS").unwrap().transducer;

    match splitting_length(&b, 1, 4, &caps).unwrap() {
        SplitSearch::Found(split) => {
            println!("splitting length at level 1: {}", split.length);
            println!(
                "split: word {}, top {{{},{}}}, bottom {{{},{}}}",
                split.gamma,
                b.state_name(split.top.0),
                b.state_name(split.top.1),
                b.state_name(split.bottom.0),
                b.state_name(split.bottom.1),
            );
        }
        SplitSearch::NoSplitUpTo { .. } => unreachable!("this machine splits"),
    }

    let graph = minimal_bad_pairs_graph(&b, 1, &caps).unwrap();
    println!("\nminimal bad-pairs graph as DOT:\n{}", graph.to_dot(&b));
    let circuit = has_circuit(&graph).expect("the graph has a self-loop");
    let names: Vec<String> = circuit
        .iter()
        .map(|&(x, y)| format!("{{{},{}}}", b.state_name(x), b.state_name(y)))
        .collect();
    println!("circuit: {}", names.join(" -> "));

    let edge = graph.edges.iter().find(|e| e.from == e.to).unwrap();
    let (witness, case) = witness_from_loop(&b, 1, &edge.split, &caps).unwrap();
    println!("\nwitness on an infinite orbit: {witness}  (case {case})");
    let mut current = witness.clone();
    for step in 1..=4 {
        current = apply_to_periodic(&b, &current, &caps).unwrap();
        println!("  after {step} application(s): {current}");
    }
    let distinct = orbit_is_infinite_sample(&b, &witness, 8, &caps).unwrap();
    println!("first 8 iterates pairwise distinct: {distinct}");
}
