//! Level maps and spectra: the induced permutations of fixed-length words,
//! their cycle triples, and the spectrum as a conjugacy separator.

use synchromata::levelmap::{level_map, spectrum};
use synchromata::registry::example_registry;
use synchromata::sync::min_core;
use synchromata::Caps;

fn main() {
    let caps = Caps::default();

    let c = example_registry("EX1_C").unwrap().transducer;
    println!(
        "level-2 permutation of EX1_C: {}",
        level_map(&c, 2, &caps).unwrap()
    );
    println!(
        "its spectrum at 2:          {}\n",
        spectrum(&c, 2, &caps).unwrap()
    );

    // The machine below is separated from its inverse by the level-3 spectrum,
    // so the two are not conjugate.
    let m = example_registry("M_NOTCONJ").unwrap().transducer;
    let mi = min_core(&m.inverse().unwrap(), &caps).unwrap();
    let sp = spectrum(&m, 3, &caps).unwrap();
    let spi = spectrum(&mi, 3, &caps).unwrap();
    println!("spectrum of M at 3:         {sp}");
    println!("spectrum of M^-1 at 3:      {spi}");
    if sp != spi {
        println!("conclusion: M is not conjugate to its inverse");
    } else {
        println!("conclusion: the spectra at level 3 do not separate them");
    }
}
