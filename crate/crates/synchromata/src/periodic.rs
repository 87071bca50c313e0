//! Eventually periodic two-sided words and the sliding-window action on them.

use std::fmt;

use crate::error::{Error, Result};
use crate::sync::sync_analysis;
use crate::transducer::Transducer;
use crate::words::{Letter, Word};
use crate::Caps;

/// An eventually periodic bi-infinite word: positions `< 0` are tiled by
/// `left_period` ending at `-1`, the `center` occupies positions
/// `0 .. center.len()`, and `right_period` tiles everything after it.
///
/// Values are kept canonical: both periods primitive and the center minimal,
/// so equality of values is equality of the underlying words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodicBiInfiniteWord {
    left_period: Word,
    center: Word,
    right_period: Word,
}

impl PeriodicBiInfiniteWord {
    pub fn new(left_period: Word, center: Word, right_period: Word) -> Result<Self> {
        if left_period.is_empty() || right_period.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut w = PeriodicBiInfiniteWord {
            left_period,
            center,
            right_period,
        };
        w.canonicalize();
        Ok(w)
    }

    /// The anchored periodic line `(... w w . w w ...)` whose block starting
    /// at position zero is `w`.
    pub fn periodic_line(w: &Word) -> Result<Self> {
        Self::new(w.clone(), Word::empty(), w.clone())
    }

    pub fn left_period(&self) -> &Word {
        &self.left_period
    }

    pub fn center(&self) -> &Word {
        &self.center
    }

    pub fn right_period(&self) -> &Word {
        &self.right_period
    }

    /// The letter at any position of the line.
    pub fn letter_at(&self, pos: i64) -> Letter {
        if pos < 0 {
            let l = self.left_period.len() as i64;
            let idx = ((pos % l) + l) % l;
            self.left_period.letters()[idx as usize]
        } else if (pos as usize) < self.center.len() {
            self.center.letters()[pos as usize]
        } else {
            let off = pos as usize - self.center.len();
            self.right_period.letters()[off % self.right_period.len()]
        }
    }

    fn canonicalize(&mut self) {
        // Primitive right period, then pull period material out of the center.
        self.right_period = self.right_period.primitive_root();
        loop {
            let lr = self.right_period.len();
            if self.center.is_empty() {
                break;
            }
            let last = *self.center.letters().last().unwrap();
            if last != self.right_period.letters()[lr - 1] {
                break;
            }
            let mut c = self.center.letters().to_vec();
            c.pop();
            self.center = Word::new(c);
            self.right_period = self.right_period.rotation(1);
        }
        self.right_period = self.right_period.primitive_root();
        self.left_period = self.left_period.primitive_root();
    }
}

impl fmt::Display for PeriodicBiInfiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let center = if self.center.is_empty() {
            String::new()
        } else {
            self.center.to_string()
        };
        write!(
            f,
            "({})^inf|{}|({})^inf",
            self.left_period, center, self.right_period
        )
    }
}

impl fmt::Debug for PeriodicBiInfiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicBiInfiniteWord({self})")
    }
}

/// The exact image of an eventually periodic word under the sliding-window
/// action: the letter at position `t` is rewritten by the state forced by
/// the `k` letters before it.
pub fn apply_to_periodic(
    t: &Transducer,
    w: &PeriodicBiInfiniteWord,
    caps: &Caps,
) -> Result<PeriodicBiInfiniteWord> {
    let info = sync_analysis(t, caps)?;
    let k = info.level;
    let ll = w.left_period().len();
    let rl = w.right_period().len();
    let cl = w.center().len();

    let state_at = |pos: i64| {
        let mut q = 0;
        for i in (1..=k as i64).rev() {
            q = t.next(q, w.letter_at(pos - i));
        }
        q
    };
    let image_at = |pos: i64| t.out(state_at(pos), w.letter_at(pos));

    // Left of zero the input is purely periodic and windows only look left,
    // so the image is purely periodic with the same period immediately.
    let mut left = Vec::with_capacity(ll);
    for pos in -(ll as i64)..0 {
        left.push(image_at(pos));
    }
    // From center.len() + k on, windows sit inside the right periodic region.
    let transient = cl + k;
    let mut center = Vec::with_capacity(transient);
    for pos in 0..transient as i64 {
        center.push(image_at(pos));
    }
    let mut right = Vec::with_capacity(rl);
    for pos in transient as i64..(transient + rl) as i64 {
        right.push(image_at(pos));
    }
    PeriodicBiInfiniteWord::new(Word::new(left), Word::new(center), Word::new(right))
}

/// True iff the first `iterations` images of `w` under the machine are
/// pairwise distinct as canonical eventually periodic words.
pub fn orbit_is_infinite_sample(
    t: &Transducer,
    w: &PeriodicBiInfiniteWord,
    iterations: usize,
    caps: &Caps,
) -> Result<bool> {
    let mut seen = vec![w.clone()];
    let mut cur = w.clone();
    for _ in 1..iterations {
        cur = apply_to_periodic(t, &cur, caps)?;
        if seen.contains(&cur) {
            return Ok(false);
        }
        seen.push(cur.clone());
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::example_registry;
    use crate::transducer::Transducer;

    fn caps() -> Caps {
        Caps::default()
    }

    fn pw(left: &str, center: &str, right: &str) -> PeriodicBiInfiniteWord {
        PeriodicBiInfiniteWord::new(
            Word::from_digits(left).unwrap(),
            Word::from_digits(center).unwrap(),
            Word::from_digits(right).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn canonical_form_is_unique() {
        // (01)^inf || (0101)^inf written with an absorbable center.
        let a = pw("0101", "01", "0101");
        let b = pw("01", "", "01");
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(01)^inf||(01)^inf");
        // Shifting material into the right period rotates it.
        let c = pw("1", "102", "02");
        let d = pw("1", "1", "02");
        assert_eq!(c, d);
    }

    #[test]
    fn identity_fixes_everything() {
        let id = Transducer::identity(3);
        let w = pw("1", "1", "02");
        assert_eq!(apply_to_periodic(&id, &w, &caps()).unwrap(), w);
        assert!(!orbit_is_infinite_sample(&id, &w, 2, &caps()).unwrap());
    }

    #[test]
    fn letters_read_off_correctly() {
        let w = pw("10", "2", "01");
        // ... 1 0 1 0 | 2 | 0 1 0 1 ...
        assert_eq!(w.letter_at(-1), 0);
        assert_eq!(w.letter_at(-2), 1);
        assert_eq!(w.letter_at(0), 2);
        assert_eq!(w.letter_at(1), 0);
        assert_eq!(w.letter_at(2), 1);
    }

    #[test]
    fn order_three_machine_returns_words_after_three_steps() {
        let c = example_registry("ORD3_C").unwrap().transducer;
        for word in ["0", "01", "012", "2", "11"] {
            let w =
                PeriodicBiInfiniteWord::periodic_line(&Word::from_digits(word).unwrap()).unwrap();
            let mut cur = w.clone();
            for _ in 0..3 {
                cur = apply_to_periodic(&c, &cur, &caps()).unwrap();
            }
            assert_eq!(cur, w, "third iterate of ({word})^inf");
            assert!(!orbit_is_infinite_sample(&c, &w, 4, &caps()).unwrap());
        }
    }
}
