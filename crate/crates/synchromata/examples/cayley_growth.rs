//! Cayley machines: their inverses are reset automata, their outputs hit
//! every forcing set, and the minimized power m has exactly |G|^m states,
//! all mutually reachable.

use synchromata::combine::surjective_output_check;
use synchromata::group::{cayley_machine, GroupTable};
use synchromata::sync::{min_core_power, sync_level};
use synchromata::Caps;

fn main() {
    let caps = Caps::default();
    for order in [2usize, 3] {
        let table = GroupTable::cyclic(order);
        let machine = cayley_machine(&table);
        println!("cyclic group of order {order}:");
        let inverse = machine.inverse().unwrap();
        println!(
            "  inverse synchronizing level: {}",
            sync_level(&inverse, &caps).unwrap()
        );
        println!(
            "  inverse output surjectivity at level 1: {}",
            surjective_output_check(&inverse, 1, &caps).unwrap()
        );
        let max_power = if order == 2 { 6 } else { 5 };
        for m in 1..=max_power {
            let power = min_core_power(&machine, m, &caps).unwrap();
            println!(
                "  power {m}: {} states, strongly connected: {}",
                power.state_count(),
                power.is_strongly_connected()
            );
        }
    }
}
