//! Word-level invariants: the induced maps on `X_n^j`, cycle triples, and
//! the spectrum of an invertible machine.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::sync::{sync_analysis, sync_level};
use crate::transducer::Transducer;
use crate::words::{count_words, Word};
use crate::Caps;

/// A total map `X_n^j -> X_n^j`, stored by word rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordMap {
    pub alphabet: usize,
    pub length: usize,
    /// `map[rank(w)] = rank(image of w)`.
    pub map: Vec<u32>,
    pub is_permutation: bool,
}

impl WordMap {
    pub fn identity(alphabet: usize, length: usize, cap: usize) -> Result<WordMap> {
        let total = count_words(alphabet, length, cap)?;
        Ok(WordMap {
            alphabet,
            length,
            map: (0..total as u32).collect(),
            is_permutation: true,
        })
    }

    pub fn apply(&self, w: &Word) -> Word {
        let r = self.map[w.rank(self.alphabet)] as usize;
        Word::from_rank(r, self.length, self.alphabet)
    }

    pub fn apply_rank(&self, rank: usize) -> usize {
        self.map[rank] as usize
    }

    /// Left-to-right composition: `self` first, then `other`.
    pub fn compose(&self, other: &WordMap) -> Result<WordMap> {
        if self.alphabet != other.alphabet || self.length != other.length {
            return Err(Error::LengthMismatch {
                left: self.length,
                right: other.length,
            });
        }
        let map: Vec<u32> = self.map.iter().map(|&r| other.map[r as usize]).collect();
        let is_permutation = permutation_check(&map);
        Ok(WordMap {
            alphabet: self.alphabet,
            length: self.length,
            map,
            is_permutation,
        })
    }

    pub fn inverse_permutation(&self) -> Result<WordMap> {
        if !self.is_permutation {
            return Err(Error::NotAPermutation(self.length));
        }
        let mut inv = vec![0u32; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Ok(WordMap {
            alphabet: self.alphabet,
            length: self.length,
            map: inv,
            is_permutation: true,
        })
    }

    /// Disjoint cycles, each starting at its least element, sorted by least
    /// element. Fixed points are kept as singleton cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.map.len()];
        let mut cycles = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                if seen[cur] {
                    break;
                }
                seen[cur] = true;
                cycle.push(cur);
                cur = self.map[cur] as usize;
            }
            if !cycle.is_empty() && self.map[*cycle.last().unwrap()] as usize == start {
                cycles.push(cycle);
            } else if !cycle.is_empty() {
                // Non-permutation tail; record the walked chain as-is so
                // callers can still display the map.
                cycles.push(cycle);
            }
        }
        cycles
    }
}

impl fmt::Display for WordMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_permutation {
            let mut printed = false;
            for cycle in self.cycles() {
                if cycle.len() == 1 {
                    continue;
                }
                printed = true;
                write!(f, "(")?;
                for (i, &rank) in cycle.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", Word::from_rank(rank, self.length, self.alphabet))?;
                }
                write!(f, ")")?;
            }
            if !printed {
                write!(f, "()")?;
            }
            Ok(())
        } else {
            for rank in 0..self.map.len() {
                if rank > 0 {
                    write!(f, " ")?;
                }
                write!(
                    f,
                    "{}>{}",
                    Word::from_rank(rank, self.length, self.alphabet),
                    Word::from_rank(self.map[rank] as usize, self.length, self.alphabet)
                )?;
            }
            Ok(())
        }
    }
}

fn permutation_check(map: &[u32]) -> bool {
    let mut seen = vec![false; map.len()];
    for &j in map {
        if seen[j as usize] {
            return false;
        }
        seen[j as usize] = true;
    }
    true
}

/// The map sending each word of length `j` to its output through the unique
/// state it fixes. Requires a synchronizing, core machine.
pub fn level_map(t: &Transducer, j: usize, caps: &Caps) -> Result<WordMap> {
    assert!(j >= 1, "level map needs j >= 1");
    let n = t.alphabet();
    let total = count_words(n, j, caps.word_cap)?;
    let k = sync_level(t, caps)?;
    let reps = k.div_ceil(j).max(1);
    let mut map = vec![0u32; total];
    for (rank, slot) in map.iter_mut().enumerate() {
        let w = Word::from_rank(rank, j, n);
        // Forced state of w repeated to length >= k, then the fixed-state check.
        let mut q = 0;
        for _ in 0..reps {
            q = t.read_state(q, w.letters());
        }
        if t.read_state(q, w.letters()) != q {
            return Err(Error::NoFixedState(w));
        }
        *slot = Word::new(t.read_output(q, w.letters())).rank(n) as u32;
    }
    let is_permutation = permutation_check(&map);
    Ok(WordMap {
        alphabet: n,
        length: j,
        map,
        is_permutation,
    })
}

/// The map sending each word of length `j` to its unique preimage under the
/// state it forces. Total when every state is a local permutation; it need
/// not be injective.
pub fn inverse_level_map(t: &Transducer, j: usize, caps: &Caps) -> Result<WordMap> {
    let n = t.alphabet();
    if j == 0 {
        return WordMap::identity(n, 0, caps.word_cap);
    }
    if let Some(s) = t.non_invertible_state() {
        return Err(Error::NonInvertibleState(t.state_name(s).to_string()));
    }
    let info = sync_analysis(t, caps)?;
    if j < info.level {
        return Err(Error::PreconditionUnmet(format!(
            "level {j} is below the synchronizing level {}",
            info.level
        )));
    }
    let inv = t.inverse()?;
    let total = count_words(n, j, caps.word_cap)?;
    let mut map = vec![0u32; total];
    for (rank, slot) in map.iter_mut().enumerate() {
        let w = Word::from_rank(rank, j, n);
        let q = t.read_state(0, w.letters());
        // The preimage of w under state q is w read through q's inverse state.
        *slot = Word::new(inv.read_output(q, w.letters())).rank(n) as u32;
    }
    let is_permutation = permutation_check(&map);
    Ok(WordMap {
        alphabet: n,
        length: j,
        map,
        is_permutation,
    })
}

/// The triple `(cycle length, first rotation step, rotation amount)` of one
/// cycle of prime words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleTriple {
    pub cycle_length: usize,
    pub step: usize,
    pub rotation: usize,
}

impl fmt::Display for CycleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.cycle_length, self.step, self.rotation)
    }
}

/// The multiset of cycle triples over the prime-word cycles of the level-`k`
/// permutation. A conjugacy invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub level: usize,
    /// `(multiplicity, triple)` entries sorted by triple.
    pub entries: Vec<(usize, CycleTriple)>,
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (d, triple)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({},{},{})", self.level, d, triple)?;
        }
        write!(f, "}}")
    }
}

/// Computes the spectrum at level `k`: decompose the level map into cycles,
/// keep the cycles of prime words, and aggregate their triples.
pub fn spectrum(t: &Transducer, k: usize, caps: &Caps) -> Result<Spectrum> {
    assert!(k >= 1, "spectrum needs k >= 1");
    let wm = level_map(t, k, caps)?;
    if !wm.is_permutation {
        return Err(Error::NotAPermutation(k));
    }
    let n = t.alphabet();
    let mut counts: BTreeMap<CycleTriple, usize> = BTreeMap::new();
    for cycle in wm.cycles() {
        let start = Word::from_rank(cycle[0], k, n);
        let start_prime = start.is_prime()?;
        // Prime words map to prime words, so cycles never mix.
        for &r in &cycle {
            let w = Word::from_rank(r, k, n);
            assert_eq!(
                w.is_prime()?,
                start_prime,
                "cycle mixes prime and non-prime words"
            );
        }
        if !start_prime {
            continue;
        }
        let triple = cycle_triple(&wm, &cycle)?;
        *counts.entry(triple).or_insert(0) += 1;
    }
    let entries: Vec<(usize, CycleTriple)> = counts.into_iter().map(|(t, d)| (d, t)).collect();
    // Structural bound: the triples cannot cover more than the prime words.
    let prime_total = (0..wm.map.len())
        .filter(|&r| Word::from_rank(r, k, n).is_prime().unwrap_or(false))
        .count();
    let covered: usize = entries.iter().map(|(d, t)| d * t.cycle_length).sum();
    assert!(covered <= prime_total, "spectrum covers more words than exist");
    Ok(Spectrum { level: k, entries })
}

fn cycle_triple(wm: &WordMap, cycle: &[usize]) -> Result<CycleTriple> {
    let n = wm.alphabet;
    let start = Word::from_rank(cycle[0], wm.length, n);
    let cycle_length = cycle.len();
    for s in 1..=cycle_length {
        let image = Word::from_rank(cycle[s % cycle_length], wm.length, n);
        if let Some(rotation) = start.rotation_index(&image)? {
            // Structural check: cycle length = order(rotation) * step.
            let order = if rotation == 0 {
                1
            } else {
                let l = wm.length;
                l / gcd(l, rotation)
            };
            assert_eq!(
                cycle_length,
                order * s,
                "cycle triple failed the length = order * step identity"
            );
            return Ok(CycleTriple {
                cycle_length,
                step: s,
                rotation,
            });
        }
    }
    unreachable!("a cycle always returns to a rotation of its start")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::example_registry;

    fn caps() -> Caps {
        Caps::default()
    }

    fn perm_of(pairs: &[(&str, &str)], len: usize, n: usize, cap: usize) -> WordMap {
        let mut wm = WordMap::identity(n, len, cap).unwrap();
        for (from, to) in pairs {
            let f = Word::from_digits(from).unwrap().rank(n);
            let t = Word::from_digits(to).unwrap().rank(n);
            wm.map[f] = t as u32;
        }
        wm.is_permutation = permutation_check(&wm.map);
        wm
    }

    #[test]
    fn level_two_permutation_of_figure_machine() {
        let c = example_registry("EX1_C").unwrap().transducer;
        let wm = level_map(&c, 2, &caps()).unwrap();
        assert!(wm.is_permutation);
        let expected = perm_of(
            &[
                ("00", "11"),
                ("11", "22"),
                ("22", "00"),
                ("10", "20"),
                ("20", "12"),
                ("12", "10"),
                ("21", "01"),
                ("01", "02"),
                ("02", "21"),
            ],
            2,
            3,
            caps().word_cap,
        );
        assert_eq!(wm.map, expected.map);
        assert_eq!(wm.to_string(), "(00 11 22)(01 02 21)(10 20 12)");
    }

    #[test]
    fn identity_level_map() {
        let id = Transducer::identity(3);
        for j in 1..4 {
            let wm = level_map(&id, j, &caps()).unwrap();
            assert_eq!(wm, WordMap::identity(3, j, caps().word_cap).unwrap());
        }
    }

    #[test]
    fn inverse_level_map_of_infinite_order_machine() {
        let b = example_registry("B_WITNESS").unwrap().transducer;
        let wm = inverse_level_map(&b, 1, &caps()).unwrap();
        assert_eq!(
            wm.apply(&Word::from_digits("0").unwrap()),
            Word::from_digits("2").unwrap()
        );
        assert_eq!(
            wm.apply(&Word::from_digits("1").unwrap()),
            Word::from_digits("0").unwrap()
        );
        assert_eq!(
            wm.apply(&Word::from_digits("2").unwrap()),
            Word::from_digits("0").unwrap()
        );
        assert!(!wm.is_permutation);
    }

    #[test]
    fn inverse_level_map_of_bisynchronizing_machine_is_a_permutation() {
        // The map uses the state *forced* by each word, so it is injective for
        // this machine (no length-one split has equal top and bottom), but it
        // is not the inverse of the fixed-state level map. Frozen values:
        // 00 -> lambda-preimage of 00 under its forced state q0, and so on.
        let c = example_registry("EX1_C").unwrap().transducer;
        let backward = inverse_level_map(&c, 2, &caps()).unwrap();
        assert!(backward.is_permutation);
        let image = |s: &str| backward.apply(&Word::from_digits(s).unwrap()).to_string();
        assert_eq!(image("00"), "22");
        assert_eq!(image("11"), "21");
        assert_eq!(image("22"), "01");
    }

    #[test]
    fn inverse_level_map_of_identity_is_identity() {
        let id = Transducer::identity(3);
        let wm = inverse_level_map(&id, 1, &caps()).unwrap();
        assert_eq!(wm, WordMap::identity(3, 1, caps().word_cap).unwrap());
        let empty = inverse_level_map(&id, 0, &caps()).unwrap();
        assert_eq!(empty.map, vec![0]);
    }

    #[test]
    fn spectra_of_the_non_conjugate_pair() {
        let m = example_registry("M_NOTCONJ").unwrap().transducer;
        let sp = spectrum(&m, 3, &caps()).unwrap();
        assert_eq!(
            sp.entries,
            vec![
                (
                    1,
                    CycleTriple {
                        cycle_length: 3,
                        step: 1,
                        rotation: 2
                    }
                ),
                (
                    1,
                    CycleTriple {
                        cycle_length: 21,
                        step: 7,
                        rotation: 1
                    }
                ),
            ]
        );
        let mi = crate::sync::min_core(&m.inverse().unwrap(), &caps()).unwrap();
        let spi = spectrum(&mi, 3, &caps()).unwrap();
        assert_eq!(
            spi.entries,
            vec![
                (
                    1,
                    CycleTriple {
                        cycle_length: 3,
                        step: 1,
                        rotation: 1
                    }
                ),
                (
                    1,
                    CycleTriple {
                        cycle_length: 21,
                        step: 7,
                        rotation: 2
                    }
                ),
            ]
        );
        assert_ne!(sp, spi);
    }

    #[test]
    fn spectrum_of_bisynchronizing_three_state_machine() {
        let c = example_registry("EX1_C").unwrap().transducer;
        let sp = spectrum(&c, 2, &caps()).unwrap();
        assert_eq!(
            sp.entries,
            vec![(
                2,
                CycleTriple {
                    cycle_length: 3,
                    step: 3,
                    rotation: 0
                }
            )]
        );
    }

    #[test]
    fn printed_level_three_permutation_of_m() {
        let m = example_registry("M_NOTCONJ").unwrap().transducer;
        let wm = level_map(&m, 3, &caps()).unwrap();
        // The full 27-point permutation, frozen cycle by cycle.
        let cycles: &[&[&str]] = &[
            &["000", "222"],
            &["111"],
            &[
                "001", "220", "112", "110", "012", "200", "122", "100", "022", "211", "011", "201",
                "020", "212", "010", "202", "121", "101", "120", "002", "221",
            ],
            &["021", "210", "102"],
        ];
        for cycle in cycles {
            for i in 0..cycle.len() {
                let from = Word::from_digits(cycle[i]).unwrap();
                let to = Word::from_digits(cycle[(i + 1) % cycle.len()]).unwrap();
                assert_eq!(wm.apply(&from), to, "image of {from}");
            }
        }
    }
}
