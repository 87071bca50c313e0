//! Synchronization analysis: minimal levels, forcing sets, cores and core
//! distance, on the three-state machine whose words of length two pin the
//! active state.

use synchromata::registry::example_registry;
use synchromata::sync::{core_distance, sync_analysis};
use synchromata::Caps;

fn main() {
    let caps = Caps::default();
    let entry = example_registry("EX1_C").unwrap();
    let t = entry.transducer;
    println!("{}\n", entry.note);

    let info = sync_analysis(&t, &caps).unwrap();
    println!("synchronizing level: {}", info.level);
    for (state, words) in info.forcing_sets(&t).unwrap().iter().enumerate() {
        let list: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        println!("  W_{} = {{{}}}", t.state_name(state), list.join(", "));
    }

    let inv = t.inverse().unwrap();
    let inv_info = sync_analysis(&inv, &caps).unwrap();
    println!("inverse synchronizing level: {}", inv_info.level);
    println!("core distance: {}", core_distance(&t, &caps).unwrap());

    // The raw square keeps the additivity bound, and its core trims the
    // unreachable pairs away.
    let square = t.product(&t).unwrap();
    let square_info = sync_analysis(&square, &caps).unwrap();
    println!(
        "square: {} states, level {} (bound {})",
        square.state_count(),
        square_info.level,
        2 * info.level
    );
    let square_core = synchromata::sync::core(&square, &caps).unwrap();
    println!("square core: {} states", square_core.state_count());
}
