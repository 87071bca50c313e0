//! Combining machines on disjoint letter blocks: orders multiply through the
//! least common multiple, and permutation overrides on foreign letters widen
//! the gap between the synchronizing level and the inverse's.

use synchromata::combine::{combine_disjoint, combine_oplus, CombinePart, CombineSpec};
use synchromata::order::{decide_order, OrderBudget};
use synchromata::registry::example_registry;
use synchromata::sync::sync_level;
use synchromata::Caps;

fn main() {
    let caps = Caps::default();

    // An order-3 machine on three letters next to the swap on two letters.
    let a = example_registry("ORD3_H3").unwrap().transducer;
    let b = example_registry("ORD2_H2").unwrap().transducer;
    let combined = combine_oplus(&a, &b, &caps).unwrap();
    let verdict = decide_order(&combined, &OrderBudget::default()).unwrap();
    println!(
        "order 3 on {{0,1,2}} with order 2 on {{3,4}}: period {:?}, level {}",
        verdict.period(),
        sync_level(&combined, &caps).unwrap()
    );

    // The same parts wired with identity outputs reproduce the registry
    // five-letter machine of order six.
    let spec = CombineSpec {
        parts: vec![
            CombinePart {
                transducer: a,
                block: (0, 2),
                sigma: Some(vec![0, 1, 2]),
                targets: None,
            },
            CombinePart {
                transducer: b,
                block: (3, 4),
                sigma: Some(vec![3, 4]),
                targets: None,
            },
        ],
    };
    let fixed = combine_disjoint(&spec, &caps).unwrap();
    let registry = example_registry("COMBINED_H5").unwrap().transducer;
    let same = synchromata::minimize::equivalent(&fixed, &registry)
        .unwrap()
        .equivalent;
    println!("identity wiring reproduces the registry machine: {same}");

    // Merging a reset machine with a one-letter identity through a rotation
    // pushes the inverse level up while the forward level stays at one.
    let base = example_registry("BASE_B").unwrap().transducer;
    let tail = example_registry("A_H1").unwrap().transducer;
    let spec = CombineSpec {
        parts: vec![
            CombinePart {
                transducer: base,
                block: (0, 3),
                sigma: Some(vec![3, 0, 1, 2]),
                targets: None,
            },
            CombinePart {
                transducer: tail,
                block: (4, 4),
                sigma: None,
                targets: None,
            },
        ],
    };
    let merged = combine_disjoint(&spec, &caps).unwrap();
    println!(
        "gap family step: level {} forward, {} for the inverse",
        sync_level(&merged, &caps).unwrap(),
        sync_level(&merged.inverse().unwrap(), &caps).unwrap()
    );
}
