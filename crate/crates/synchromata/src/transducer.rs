//! Finite synchronous transducers (Mealy automata) over `X_n`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

pub type StateId = usize;

/// An unvalidated transducer description, as read from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTransducer {
    pub alphabet: usize,
    pub states: Vec<RawState>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawState {
    pub name: String,
    /// `(input, output, target)` triples in the order they were written.
    pub transitions: Vec<(Letter, Letter, String)>,
}

/// A finite synchronous transducer: total transition and output functions,
/// one output letter per input letter.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Transducer {
    alphabet: usize,
    names: Vec<String>,
    /// `next[s * alphabet + x]`
    next: Vec<u32>,
    /// `out[s * alphabet + x]`
    out: Vec<u32>,
}

impl Transducer {
    /// Checks totality, letter ranges, and state-name uniqueness.
    pub fn validate(raw: &RawTransducer) -> Result<Transducer> {
        if raw.alphabet == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let n = raw.alphabet;
        let mut index: HashMap<&str, StateId> = HashMap::new();
        for (i, st) in raw.states.iter().enumerate() {
            if index.insert(st.name.as_str(), i).is_some() {
                return Err(Error::DuplicateState(st.name.clone()));
            }
        }
        let count = raw.states.len();
        let mut next = vec![u32::MAX; count * n];
        let mut out = vec![u32::MAX; count * n];
        for (i, st) in raw.states.iter().enumerate() {
            let mut seen = vec![false; n];
            for &(input, output, ref target) in &st.transitions {
                if input >= n {
                    return Err(Error::LetterOutOfRange {
                        state: st.name.clone(),
                        letter: input,
                        alphabet: n,
                    });
                }
                if output >= n {
                    return Err(Error::LetterOutOfRange {
                        state: st.name.clone(),
                        letter: output,
                        alphabet: n,
                    });
                }
                if seen[input] {
                    return Err(Error::DuplicateTransition {
                        state: st.name.clone(),
                        letter: input,
                    });
                }
                seen[input] = true;
                let t = *index
                    .get(target.as_str())
                    .ok_or_else(|| Error::UnknownState(target.clone()))?;
                next[i * n + input] = t as u32;
                out[i * n + input] = output as u32;
            }
            if let Some(missing) = seen.iter().position(|&s| !s) {
                return Err(Error::MissingTransition {
                    state: st.name.clone(),
                    letter: missing,
                });
            }
        }
        Ok(Transducer {
            alphabet: n,
            names: raw.states.iter().map(|s| s.name.clone()).collect(),
            next,
            out,
        })
    }

    /// Direct constructor from tables; panics on inconsistent shapes.
    pub fn from_tables(
        alphabet: usize,
        names: Vec<String>,
        next: Vec<StateId>,
        out: Vec<Letter>,
    ) -> Transducer {
        assert!(alphabet >= 1);
        let count = names.len();
        assert_eq!(next.len(), count * alphabet);
        assert_eq!(out.len(), count * alphabet);
        assert!(next.iter().all(|&t| t < count));
        assert!(out.iter().all(|&o| o < alphabet));
        Transducer {
            alphabet,
            names,
            next: next.into_iter().map(|t| t as u32).collect(),
            out: out.into_iter().map(|o| o as u32).collect(),
        }
    }

    /// The single-state identity transducer on `X_n`.
    pub fn identity(alphabet: usize) -> Transducer {
        let next = vec![0u32; alphabet];
        let out: Vec<u32> = (0..alphabet as u32).collect();
        Transducer {
            alphabet,
            names: vec!["id".to_string()],
            next,
            out,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn next(&self, s: StateId, x: Letter) -> StateId {
        self.next[s * self.alphabet + x] as StateId
    }

    #[inline]
    pub fn out(&self, s: StateId, x: Letter) -> Letter {
        self.out[s * self.alphabet + x] as Letter
    }

    /// `pi(word, s)`: the state reached reading `word` from `s`.
    pub fn read_state(&self, s: StateId, word: &[Letter]) -> StateId {
        word.iter().fold(s, |st, &x| self.next(st, x))
    }

    /// `lambda(word, s)`: the output of `word` read from `s`.
    pub fn read_output(&self, s: StateId, word: &[Letter]) -> Vec<Letter> {
        let mut st = s;
        let mut result = Vec::with_capacity(word.len());
        for &x in word {
            result.push(self.out(st, x));
            st = self.next(st, x);
        }
        result
    }

    /// Reads a word returning both the final state and the output.
    pub fn read(&self, s: StateId, word: &Word) -> (StateId, Word) {
        let out = self.read_output(s, word.letters());
        (self.read_state(s, word.letters()), Word::new(out))
    }

    /// True iff every state's output map is a permutation of `X_n`.
    pub fn is_invertible(&self) -> bool {
        self.non_invertible_state().is_none()
    }

    pub fn non_invertible_state(&self) -> Option<StateId> {
        (0..self.state_count()).find(|&s| {
            let mut seen = vec![false; self.alphabet];
            (0..self.alphabet).any(|x| {
                let o = self.out(s, x);
                std::mem::replace(&mut seen[o], true)
            })
        })
    }

    /// The inverse automaton: state `q^-1` reads `y` to `q'^-1` outputting `x`
    /// whenever `q` reads `x` to `q'` outputting `y`.
    pub fn inverse(&self) -> Result<Transducer> {
        if let Some(s) = self.non_invertible_state() {
            return Err(Error::NonInvertibleState(self.names[s].clone()));
        }
        let n = self.alphabet;
        let count = self.state_count();
        let mut next = vec![0u32; count * n];
        let mut out = vec![0u32; count * n];
        for s in 0..count {
            for x in 0..n {
                let y = self.out(s, x);
                next[s * n + y] = self.next[s * n + x];
                out[s * n + y] = x as u32;
            }
        }
        let names = self.names.iter().map(|na| format!("{na}^-1")).collect();
        Ok(Transducer {
            alphabet: n,
            names,
            next,
            out,
        })
    }

    /// The transducer product `self * other`: `self` processes the input,
    /// `other` processes the output of `self`. States are ordered pairs.
    pub fn product(&self, other: &Transducer) -> Result<Transducer> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        let n = self.alphabet;
        let (ca, cb) = (self.state_count(), other.state_count());
        let count = ca * cb;
        let mut next = Vec::with_capacity(count * n);
        let mut out = Vec::with_capacity(count * n);
        let mut names = Vec::with_capacity(count);
        for p in 0..ca {
            for q in 0..cb {
                names.push(format!("({},{})", self.names[p], other.names[q]));
                for x in 0..n {
                    let mid = self.out(p, x);
                    let p2 = self.next(p, x);
                    let q2 = other.next(q, mid);
                    next.push((p2 * cb + q2) as u32);
                    out.push(other.out(q, mid) as u32);
                }
            }
        }
        Ok(Transducer {
            alphabet: n,
            names,
            next,
            out,
        })
    }

    /// The raw `m`-fold product, with no core reduction or minimization.
    pub fn power_raw(&self, m: usize) -> Result<Transducer> {
        assert!(m >= 1, "power requires m >= 1");
        let mut acc = self.clone();
        for _ in 1..m {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// Restriction to a subset of states, which must be transition-closed.
    /// States keep their relative order and names.
    pub fn restrict(&self, keep: &[StateId]) -> Transducer {
        let n = self.alphabet;
        let mut renumber = vec![usize::MAX; self.state_count()];
        for (new, &old) in keep.iter().enumerate() {
            renumber[old] = new;
        }
        let mut next = Vec::with_capacity(keep.len() * n);
        let mut out = Vec::with_capacity(keep.len() * n);
        let mut names = Vec::with_capacity(keep.len());
        for &old in keep {
            names.push(self.names[old].clone());
            for x in 0..n {
                let t = renumber[self.next(old, x)];
                assert!(t != usize::MAX, "restriction set is not transition-closed");
                next.push(t as u32);
                out.push(self.out(old, x) as u32);
            }
        }
        Transducer {
            alphabet: n,
            names,
            next,
            out,
        }
    }

    /// Renames all states; lengths must match.
    pub fn with_names(mut self, names: Vec<String>) -> Transducer {
        assert_eq!(names.len(), self.state_count());
        self.names = names;
        self
    }

    /// True iff every state is reachable from every other state.
    pub fn is_strongly_connected(&self) -> bool {
        let count = self.state_count();
        if count <= 1 {
            return true;
        }
        let forward = self.reachable_from(0, |s, x| self.next(s, x));
        if forward.len() != count {
            return false;
        }
        // Reverse reachability via the reversed edge relation.
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); count];
        for s in 0..count {
            for x in 0..self.alphabet {
                rev[self.next(s, x)].push(s);
            }
        }
        let mut seen = vec![false; count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut total = 1;
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !seen[p] {
                    seen[p] = true;
                    total += 1;
                    stack.push(p);
                }
            }
        }
        total == count
    }

    fn reachable_from(
        &self,
        start: StateId,
        step: impl Fn(StateId, Letter) -> StateId,
    ) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for x in 0..self.alphabet {
                let t = step(s, x);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }
}

impl fmt::Debug for Transducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Transducer(n={}, states={})",
            self.alphabet,
            self.state_count()
        )
    }
}

/// A transducer together with a start state.
#[derive(Debug, Clone)]
pub struct InitialTransducer {
    pub base: Transducer,
    pub start: StateId,
}

impl InitialTransducer {
    pub fn new(base: Transducer, start_name: &str) -> Result<Self> {
        let start = base
            .state_index(start_name)
            .ok_or_else(|| Error::UnknownState(start_name.to_string()))?;
        Ok(InitialTransducer { base, start })
    }

    pub fn apply(&self, input: &Word) -> Word {
        self.base.read(self.start, input).1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trn::parse_trn;

    const EX1_C: &str = "alphabet: 3\nstates: q0 q1 q2\nq0: 0|1->q0 1|2->q1 2|0->q2\nq1: 0|0->q0 1|2->q1 2|1->q2\nq2: 0|2->q1 1|1->q0 2|0->q2\n";

    #[test]
    fn validate_accepts_figure_machine() {
        let t = parse_trn(EX1_C).unwrap();
        assert_eq!(t.alphabet(), 3);
        assert_eq!(t.state_count(), 3);
        assert_eq!(t.out(0, 0), 1);
        assert_eq!(t.next(2, 0), 1);
    }

    #[test]
    fn validate_rejects_missing_transition() {
        let broken = "alphabet: 3\nstates: q0 q1 q2\nq0: 0|1->q0 1|2->q1 2|0->q2\nq1: 0|0->q0 1|2->q1 2|1->q2\nq2: 0|2->q1 1|1->q0\n";
        match parse_trn(broken) {
            Err(Error::MissingTransition { state, letter }) => {
                assert_eq!(state, "q2");
                assert_eq!(letter, 2);
            }
            other => panic!("expected MissingTransition, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_out_of_range_letter() {
        let broken = "alphabet: 2\nstates: a\na: 0|0->a 1|2->a\n";
        assert!(matches!(
            parse_trn(broken),
            Err(Error::LetterOutOfRange { .. })
        ));
    }

    #[test]
    fn identity_absorbs_under_product() {
        let c = parse_trn(EX1_C).unwrap();
        let id = Transducer::identity(3);
        let p = id.product(&c).unwrap();
        assert_eq!(p.state_count(), 3);
        for s in 0..3 {
            let w = Word::from_digits("0120211").unwrap();
            assert_eq!(p.read(s, &w).1, c.read(s, &w).1);
        }
    }

    #[test]
    fn inverse_of_identity() {
        let id = Transducer::identity(3);
        let inv = id.inverse().unwrap();
        for x in 0..3 {
            assert_eq!(inv.out(0, x), x);
            assert_eq!(inv.next(0, x), 0);
        }
    }

    #[test]
    fn shift_is_not_invertible() {
        let shift =
            parse_trn("alphabet: 2\nstates: a1 a2\na1: 0|0->a1 1|0->a2\na2: 0|1->a1 1|1->a2\n")
                .unwrap();
        match shift.inverse() {
            Err(Error::NonInvertibleState(name)) => assert_eq!(name, "a1"),
            other => panic!("expected NonInvertibleState(a1), got {other:?}"),
        }
    }
}
