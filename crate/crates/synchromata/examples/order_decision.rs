//! Order decision with certificates: finite orders come with an index, a
//! period and a dual-zero level; infinite orders with a bad-pairs circuit.

use synchromata::cli::verdict_json;
use synchromata::order::{decide_order, OrderBudget};
use synchromata::registry::example_registry;

fn main() {
    let names = [
        "ORD3_C",
        "ORD2_B2",
        "COMBINED_H5",
        "B_WITNESS",
        "G_H3",
        "A4_NOCIRCUIT",
        "H5_FINITE_SPLIT",
    ];
    for name in names {
        let t = example_registry(name).unwrap().transducer;
        // A generous power budget so the order-24 machine resolves too.
        let budget = OrderBudget {
            max_power: 30,
            ..OrderBudget::default()
        };
        let verdict = decide_order(&t, &budget).unwrap();
        println!("{name:>16}: {}", verdict_json(&verdict, &budget));
    }
}
