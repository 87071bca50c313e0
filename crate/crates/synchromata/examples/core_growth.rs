//! Core growth: state counts of minimized cores of successive powers, with
//! the heuristic classification and the linear growth of synchronizing levels
//! along infinite-order powers.

use synchromata::growth::{growth_series, lower_bound_check, sync_level_linear_check};
use synchromata::order::OrderBudget;
use synchromata::registry::example_registry;
use synchromata::Caps;

fn main() {
    let caps = Caps::default();
    let g = example_registry("G_H3").unwrap().transducer;
    let series = growth_series(&g, "G_H3", 12, &caps).unwrap();
    print!("{}", series.to_csv());
    println!(
        "classification: {} ({})",
        series.classification, series.method_note
    );
    println!(
        "states(m) >= 2^floor(m/2) for all recorded m: {}",
        lower_bound_check(&series, |m| 1 << (m / 2))
    );
    let (linear, slope) = sync_level_linear_check(&g, 8, &OrderBudget::default()).unwrap();
    println!("synchronizing level grows linearly: {linear} (slope >= {slope:.2})");
}
